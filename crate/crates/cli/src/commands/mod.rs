pub mod calibrations;
pub mod field;
pub mod flow;
pub mod structural;
