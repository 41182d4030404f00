//! Unit vector fields as sections of `T¹M`: shape matrices, the volume
//! functional, calibration tests and defect functionals.

mod builtin;
mod custom;
mod perturb;
mod registry;
mod shape;
mod volume;

pub use builtin::{
    ComplexStructure, HalfSpaceHorizontal, HalfSpaceVertical, HopfField, JPreset, ParallelFlat,
};
pub use custom::ExpressionField;
pub use perturb::{Bump, Direction, PerturbedField, TrigField, TrigMode};
pub use registry::{build_field, FieldSpec, FIELD_NAMES};
pub use shape::{
    calibrated_test, classification_flags, defect, generic_seed, shape_matrix, volume_density,
    CalibrationTest, ClassificationFlags, ShapeMatrix, Sign, SHAPE_COLUMN_TOL,
};
pub use volume::{
    analytic_base_volume, boundary_flux, volume, QuadratureDomain, VolumeReport, HOPF_ORDERS,
};

use crate::spaceform::{covariant_derivative, Geometry, Model, Vector};
use crate::{Error, Result};

/// Step for finite-difference differentials of fields without a closed form.
pub const FD_STEP: f64 = 1e-5;

/// A unit vector field on a model. Points and vectors use the coordinates of
/// the model.
pub trait UnitVectorField: Send + Sync {
    fn model(&self) -> &Model;

    fn name(&self) -> &str;

    fn value(&self, x: &Vector) -> Result<Vector>;

    /// Coordinate differential `dX(w)` at `x`.
    fn differential(&self, x: &Vector, w: &Vector) -> Result<Vector> {
        fd_differential(self, x, w, FD_STEP)
    }

    /// `∇_w X` at `x`.
    fn covariant_derivative(&self, x: &Vector, w: &Vector) -> Result<Vector> {
        let geom = self.model();
        let xv = self.value(x)?;
        let d = self.differential(x, w)?;
        Ok(geom.project_tangent(x, &covariant_derivative(geom, x, w, &xv, &d)?))
    }

    /// The volume density when it is known to be constant.
    fn constant_density(&self) -> Option<f64> {
        None
    }
}

/// Central difference of `X` along the retraction curve `s ↦ Π(x + s·w)`.
pub fn fd_differential<F: UnitVectorField + ?Sized>(
    field: &F,
    x: &Vector,
    w: &Vector,
    h: f64,
) -> Result<Vector> {
    let geom = field.model();
    let plus = geom.project_point(&(x + w * h))?;
    let minus = geom.project_point(&(x - w * h))?;
    Ok((field.value(&plus)? - field.value(&minus)?) / (2.0 * h))
}

/// `Y/‖Y‖` and its differential along `w`, given `dY(w)`.
pub(crate) fn normalize_with_differential<G: Geometry + ?Sized>(
    geom: &G,
    x: &Vector,
    y: &Vector,
    dy: &Vector,
    w: &Vector,
) -> Result<(Vector, Vector)> {
    let n = normalize_factor(geom, x, y)?;
    let dn2 = 2.0 * geom.inner(x, y, dy) + geom.metric_derivative(x, w, y, y)?;
    let dn = dn2 / (2.0 * n);
    Ok((y / n, dy / n - y * (dn / (n * n))))
}

pub(crate) fn normalize_factor<G: Geometry + ?Sized>(
    geom: &G,
    x: &Vector,
    y: &Vector,
) -> Result<f64> {
    let n = geom.norm(x, y);
    if !(n > 1e-12) {
        return Err(Error::InvalidParameter(format!(
            "field vanishes at {:?}",
            x.iter().collect::<Vec<_>>()
        )));
    }
    Ok(n)
}
