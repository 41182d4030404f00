//! The shape matrix `Aᵢⱼ = g(∇_{fᵢ}X, fⱼ)` in an oriented frame `(X, f₁, f₂)`
//! and the functionals built from it.

use nalgebra::Matrix3;
use serde::{Deserialize, Serialize};

use super::UnitVectorField;
use crate::diffsys::InvariantThreeForm;
use crate::spaceform::{Geometry, Vector};
use crate::unit_tangent::oriented_completion;
use crate::{Error, Result};

/// Tolerance for `|X| = 1` at a shape-matrix point.
pub const UNIT_TOL: f64 = 1e-10;
/// Tolerance for the vanishing column `Aᵢ₀ = g(∇X, X)`.
pub const SHAPE_COLUMN_TOL: f64 = 1e-6;
/// Tolerance for equality in the calibration test.
pub const CALIBRATED_TOL: f64 = 1e-8;
const INEQUALITY_SLACK: f64 = 1e-12;

/// Deterministic seed axis for frames, chosen away from coordinate axes.
pub fn generic_seed(n: usize) -> Vector {
    Vector::from_fn(n, |i, _| {
        let s = if i % 2 == 0 { 1.0 } else { -1.0 };
        s / (i as f64 + 2.0)
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct ShapeMatrix {
    pub a: Matrix3<f64>,
    pub frame: [Vector; 3],
}

impl ShapeMatrix {
    /// `A₁₁A₂₂ − A₂₁A₁₂`.
    pub fn minor00(&self) -> f64 {
        let a = &self.a;
        a[(1, 1)] * a[(2, 2)] - a[(2, 1)] * a[(1, 2)]
    }

    /// `A₀₁A₂₂ − A₀₂A₂₁`.
    pub fn minor10(&self) -> f64 {
        let a = &self.a;
        a[(0, 1)] * a[(2, 2)] - a[(0, 2)] * a[(2, 1)]
    }

    /// `A₀₁A₁₂ − A₀₂A₁₁`.
    pub fn minor20(&self) -> f64 {
        let a = &self.a;
        a[(0, 1)] * a[(1, 2)] - a[(0, 2)] * a[(1, 1)]
    }

    /// Volume density `√det(I + (∇X)ᵀ∇X)`, expanded in the minors.
    pub fn density(&self) -> f64 {
        let sq = self.a.iter().map(|v| v * v).sum::<f64>();
        let m = [self.minor00(), self.minor10(), self.minor20()];
        (1.0 + sq + m.iter().map(|v| v * v).sum::<f64>()).sqrt()
    }

    /// `b₀ + b₁(A₁₁ + A₂₂) + b₂A(00)`.
    pub fn calibrated_lhs(&self, b: &[f64; 3]) -> f64 {
        b[0] + b[1] * (self.a[(1, 1)] + self.a[(2, 2)]) + b[2] * self.minor00()
    }

    pub fn defect(&self, sign: Sign) -> f64 {
        let a = &self.a;
        let s = sign.value();
        let d1 = a[(1, 1)] - s * a[(2, 2)];
        let d2 = a[(1, 2)] + s * a[(2, 1)];
        a[(0, 1)].powi(2)
            + a[(0, 2)].powi(2)
            + d1 * d1
            + d2 * d2
            + self.minor10().powi(2)
            + self.minor20().powi(2)
    }

    /// `‖sym A‖_F`, zero for Killing fields.
    pub fn killing_defect(&self) -> f64 {
        ((self.a + self.a.transpose()) * 0.5).norm()
    }

    /// `‖A − Aᵀ‖_F`, zero when the dual 1-form is closed.
    pub fn closed_defect(&self) -> f64 {
        (self.a - self.a.transpose()).norm()
    }

    /// `|tr A|`, zero for divergence-free fields.
    pub fn coclosed_defect(&self) -> f64 {
        self.a.trace().abs()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn value(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }

    pub fn from_name(s: &str) -> Result<Self> {
        match s {
            "+" | "plus" => Ok(Sign::Plus),
            "-" | "minus" => Ok(Sign::Minus),
            other => Err(Error::InvalidParameter(format!(
                "sign must be plus or minus, got `{other}`"
            ))),
        }
    }
}

pub fn shape_matrix<F: UnitVectorField + ?Sized>(
    field: &F,
    x: &Vector,
    seed_axis: &Vector,
) -> Result<ShapeMatrix> {
    let geom = field.model();
    let xv = field.value(x)?;
    let norm = geom.norm(x, &xv);
    if (norm - 1.0).abs() > UNIT_TOL {
        return Err(Error::NotUnit { norm });
    }
    let frame = oriented_completion(geom, x, &xv, seed_axis, None)?;
    let mut a = Matrix3::zeros();
    for i in 0..3 {
        let nabla = field.covariant_derivative(x, &frame[i])?;
        for j in 0..3 {
            a[(i, j)] = geom.inner(x, &nabla, &frame[j]);
        }
    }
    let residual = a.column(0).amax();
    if residual > SHAPE_COLUMN_TOL {
        return Err(Error::ShapeColumn { residual });
    }
    Ok(ShapeMatrix { a, frame })
}

pub fn volume_density<F: UnitVectorField + ?Sized>(field: &F, x: &Vector) -> Result<f64> {
    Ok(shape_matrix(field, x, &generic_seed(x.len()))?.density())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CalibrationTest {
    pub lhs: f64,
    pub rhs: f64,
    pub satisfied: bool,
    /// `lhs ≤ rhs`, which holds at every point when `φ` has comass at most one.
    pub inequality_holds: bool,
}

/// Compares `X^*φ` with the volume density at `x`.
pub fn calibrated_test<F: UnitVectorField + ?Sized>(
    field: &F,
    phi: &InvariantThreeForm<f64>,
    x: &Vector,
) -> Result<CalibrationTest> {
    let s = shape_matrix(field, x, &generic_seed(x.len()))?;
    let lhs = s.calibrated_lhs(&phi.b);
    let rhs = s.density();
    Ok(CalibrationTest {
        lhs,
        rhs,
        satisfied: (lhs - rhs).abs() < CALIBRATED_TOL,
        inequality_holds: lhs <= rhs + INEQUALITY_SLACK,
    })
}

pub fn defect<F: UnitVectorField + ?Sized>(field: &F, sign: Sign, x: &Vector) -> Result<f64> {
    Ok(shape_matrix(field, x, &generic_seed(x.len()))?.defect(sign))
}

/// Maxima of the Killing, closed and coclosed defects over sample points.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ClassificationFlags {
    pub killing_defect: f64,
    pub closed_defect: f64,
    pub coclosed_defect: f64,
}

pub fn classification_flags<F: UnitVectorField + ?Sized>(
    field: &F,
    points: &[Vector],
) -> Result<ClassificationFlags> {
    let mut flags = ClassificationFlags {
        killing_defect: 0.0,
        closed_defect: 0.0,
        coclosed_defect: 0.0,
    };
    for x in points {
        let s = shape_matrix(field, x, &generic_seed(x.len()))?;
        flags.killing_defect = flags.killing_defect.max(s.killing_defect());
        flags.closed_defect = flags.closed_defect.max(s.closed_defect());
        flags.coclosed_defect = flags.coclosed_defect.max(s.coclosed_defect());
    }
    Ok(flags)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diffsys::{phi_minus, phi_plus};
    use crate::fields::{
        ComplexStructure, HalfSpaceHorizontal, HalfSpaceVertical, HopfField, JPreset, ParallelFlat,
    };
    use crate::rng::stream;
    use crate::spaceform::{Model, ModelParams};

    fn sphere(r: f64) -> Model {
        Model::from_name(
            "sphere",
            ModelParams {
                radius: r,
                ..Default::default()
            },
        )
        .unwrap()
    }

    #[test]
    fn hopf_shape_matrix_is_rotation_block() {
        let r = 1.7;
        let model = sphere(r);
        let field = HopfField::new(&model, ComplexStructure::preset(JPreset::I)).unwrap();
        let mut rng = stream(1, 0);
        for _ in 0..5 {
            let x = model.sample_point(&mut rng);
            let s = shape_matrix(&field, &x, &generic_seed(4)).unwrap();
            assert!(s.a.column(0).amax() < 1e-12 && s.a.row(0).amax() < 1e-12);
            assert!((s.a[(1, 1)]).abs() < 1e-12 && (s.a[(2, 2)]).abs() < 1e-12);
            assert!((s.a[(1, 2)] + s.a[(2, 1)]).abs() < 1e-12);
            assert!((s.a[(1, 2)].abs() - 1.0 / r).abs() < 1e-12);
            assert!((s.density() - (1.0 + 1.0 / (r * r))).abs() < 1e-12);
            assert!(s.killing_defect() < 1e-12);
        }
    }

    #[test]
    fn builtin_densities_match_closed_forms() {
        let hs = Model::from_name(
            "half-space",
            ModelParams {
                a: 2.0,
                ..Default::default()
            },
        )
        .unwrap();
        let x = Vector::from_column_slice(&[0.2, -0.4, 1.3]);
        let v = HalfSpaceVertical::new(&hs).unwrap();
        assert!((volume_density(&v, &x).unwrap() - 3.0).abs() < 1e-12);
        let h = HalfSpaceHorizontal::new(&hs, 1).unwrap();
        assert!((volume_density(&h, &x).unwrap() - 3.0_f64.sqrt()).abs() < 1e-12);
        let flat = Model::from_name("flat", ModelParams::default()).unwrap();
        let p = ParallelFlat::new(&flat, [1.0, 2.0, 2.0]).unwrap();
        assert!((volume_density(&p, &x).unwrap() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn phi_plus_and_minus_calibrate_hopf_fields() {
        let model = sphere(1.0);
        let plus = phi_plus();
        let minus = phi_minus();
        let mut rng = stream(2, 0);
        for preset in [JPreset::I, JPreset::J, JPreset::K] {
            let field = HopfField::new(&model, ComplexStructure::preset(preset)).unwrap();
            for _ in 0..4 {
                let x = model.sample_point(&mut rng);
                let tp = calibrated_test(&field, &plus, &x).unwrap();
                let tm = calibrated_test(&field, &minus, &x).unwrap();
                assert!(tp.satisfied && !tm.satisfied, "{tp:?} {tm:?}");
                assert!(tp.inequality_holds && tm.inequality_holds);
            }
        }
    }

    #[test]
    fn sign_names() {
        assert_eq!(Sign::from_name("+").unwrap(), Sign::Plus);
        assert_eq!(Sign::from_name("minus").unwrap(), Sign::Minus);
        assert!(Sign::from_name("0").is_err());
    }
}
