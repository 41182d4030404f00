//! Constant-coefficient exterior algebra over the adapted coframe `e⁰ … e⁴`
//! of `T¹M`, with the Euclidean Hodge star for `vol = e⁰¹²³⁴`.

pub mod comass;
pub mod form;
pub mod index;
pub mod plane;
pub mod structure;

pub use comass::{comass, ComassResult, DEFAULT_RESTARTS};
pub use form::{ConstantForm, RationalForm, RealForm};
pub use index::{MultiIndex, DIM};
pub use plane::{evaluate_on_plane, Frame53, ThreePlane};
pub use structure::{alpha0, alpha1, alpha2, dtheta, theta, three_form, two_form, volume};
