//! The invariant forms `θ, dθ, α₀, α₁, α₂` on `T¹M`: pointwise evaluation,
//! finite-difference checks of their structure equations, and the algebra of
//! invariant calibrations.

mod invariant;
mod structural;
mod system;

pub use invariant::{
    closed_two_form_family, cohomologous, is_calibration, phi_from_circle, phi_minus, phi_plus,
    phi_t, rational_circle_point, CalibrationFamily, ClosedFamily, InvariantThreeForm,
    InvariantTwoForm, Orientation,
};
pub use structural::{
    convergence_order, fd_exterior_derivative, structural_residual,
    structural_residual_constant_curvature, structural_residual_general, Equation,
    StructuralReport, CONVERGENCE_STEPS,
};
pub use system::{evaluate_system, rho_form, SystemValues};
