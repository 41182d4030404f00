//! Fields with closed-form covariant derivatives.

use nalgebra::{Matrix4, Vector3};
use serde::{Deserialize, Serialize};

use super::UnitVectorField;
use crate::spaceform::{Geometry, Model, Vector};
use crate::{Error, Result};

const J_TOL: f64 = 1e-12;

/// Preset orthogonal complex structures on `ℝ⁴`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum JPreset {
    I,
    J,
    K,
}

impl JPreset {
    pub fn from_name(name: &str) -> Result<Self> {
        match name {
            "i" => Ok(JPreset::I),
            "j" => Ok(JPreset::J),
            "k" => Ok(JPreset::K),
            other => Err(Error::InvalidParameter(format!(
                "unknown complex structure `{other}` (expected i, j or k)"
            ))),
        }
    }

    pub fn id(self) -> &'static str {
        match self {
            JPreset::I => "i",
            JPreset::J => "j",
            JPreset::K => "k",
        }
    }
}

/// An orthogonal complex structure on `ℝ⁴` inducing the standard orientation.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexStructure {
    matrix: Matrix4<f64>,
}

impl ComplexStructure {
    /// Validates `J² = −I`, `JᵀJ = I` and positive Pfaffian.
    pub fn new(matrix: Matrix4<f64>) -> Result<Self> {
        let id = Matrix4::identity();
        let mut failures = Vec::new();
        if (matrix * matrix + id).amax() > J_TOL {
            failures.push("J² ≠ −I");
        }
        if (matrix.transpose() * matrix - id).amax() > J_TOL {
            failures.push("JᵀJ ≠ I");
        }
        let m = &matrix;
        let pfaffian = m[(0, 1)] * m[(2, 3)] - m[(0, 2)] * m[(1, 3)] + m[(0, 3)] * m[(1, 2)];
        if !(pfaffian > 0.0) {
            failures.push("Pfaffian is not positive");
        }
        if failures.is_empty() {
            Ok(ComplexStructure { matrix })
        } else {
            Err(Error::InvalidComplexStructure(failures.join("; ")))
        }
    }

    pub fn preset(preset: JPreset) -> Self {
        #[rustfmt::skip]
        let matrix = match preset {
            // (a,b,c,d) ↦ (−b,a,−d,c)
            JPreset::I => Matrix4::new(
                0.0, -1.0, 0.0, 0.0,
                1.0, 0.0, 0.0, 0.0,
                0.0, 0.0, 0.0, -1.0,
                0.0, 0.0, 1.0, 0.0,
            ),
            // (a,b,c,d) ↦ (−c,d,a,−b)
            JPreset::J => Matrix4::new(
                0.0, 0.0, -1.0, 0.0,
                0.0, 0.0, 0.0, 1.0,
                1.0, 0.0, 0.0, 0.0,
                0.0, -1.0, 0.0, 0.0,
            ),
            // (a,b,c,d) ↦ (−d,−c,b,a)
            JPreset::K => Matrix4::new(
                0.0, 0.0, 0.0, -1.0,
                0.0, 0.0, -1.0, 0.0,
                0.0, 1.0, 0.0, 0.0,
                1.0, 0.0, 0.0, 0.0,
            ),
        };
        ComplexStructure { matrix }
    }

    pub fn matrix(&self) -> &Matrix4<f64> {
        &self.matrix
    }

    pub fn apply(&self, v: &Vector) -> Vector {
        Vector::from_iterator(
            4,
            (self.matrix * nalgebra::Vector4::new(v[0], v[1], v[2], v[3]))
                .iter()
                .copied(),
        )
    }
}

/// The Hopf field `X = J x / r` on `S³(r)`.
#[derive(Debug, Clone)]
pub struct HopfField {
    model: Model,
    j: ComplexStructure,
    radius: f64,
}

impl HopfField {
    pub fn new(model: &Model, j: ComplexStructure) -> Result<Self> {
        let radius = match model.embedded() {
            Some(m) if m.is_elliptic() && m.dim == 3 => m.radius,
            _ => {
                return Err(Error::Unsupported(format!(
                    "Hopf fields live on the 3-sphere, not on `{}`",
                    model.name()
                )))
            }
        };
        Ok(HopfField {
            model: model.clone(),
            j,
            radius,
        })
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }
}

impl UnitVectorField for HopfField {
    fn model(&self) -> &Model {
        &self.model
    }

    fn name(&self) -> &str {
        "hopf"
    }

    fn value(&self, x: &Vector) -> Result<Vector> {
        self.model.check_point(x)?;
        Ok(self.j.apply(x) / self.radius)
    }

    fn differential(&self, _x: &Vector, w: &Vector) -> Result<Vector> {
        Ok(self.j.apply(w) / self.radius)
    }

    fn covariant_derivative(&self, x: &Vector, w: &Vector) -> Result<Vector> {
        let r2 = self.radius * self.radius;
        let xv = self.value(x)?;
        Ok(self.j.apply(w) / self.radius + x * (xv.dot(w) / r2))
    }

    fn constant_density(&self) -> Option<f64> {
        Some(1.0 + 1.0 / (self.radius * self.radius))
    }
}

fn half_space_parameter(model: &Model, field: &str) -> Result<f64> {
    match model {
        Model::HalfSpace(c) => Ok(c.metric.a),
        _ => Err(Error::Unsupported(format!(
            "{field} needs the half-space model, not `{}`",
            model.name()
        ))),
    }
}

/// The vertical field `√a·t·∂t` on the half-space model.
#[derive(Debug, Clone)]
pub struct HalfSpaceVertical {
    model: Model,
    scale: f64,
}

impl HalfSpaceVertical {
    pub fn new(model: &Model) -> Result<Self> {
        let a = half_space_parameter(model, "half-space-vertical")?;
        Ok(HalfSpaceVertical {
            model: model.clone(),
            scale: a.sqrt(),
        })
    }
}

impl UnitVectorField for HalfSpaceVertical {
    fn model(&self) -> &Model {
        &self.model
    }

    fn name(&self) -> &str {
        "half-space-vertical"
    }

    fn value(&self, x: &Vector) -> Result<Vector> {
        self.model.check_point(x)?;
        Ok(Vector::from_column_slice(&[0.0, 0.0, self.scale * x[2]]))
    }

    fn differential(&self, _x: &Vector, w: &Vector) -> Result<Vector> {
        Ok(Vector::from_column_slice(&[0.0, 0.0, self.scale * w[2]]))
    }

    fn constant_density(&self) -> Option<f64> {
        Some(1.0 + self.scale * self.scale)
    }
}

/// The horizontal field `√a·t·∂_k` (`k ∈ {0, 1}`) on the half-space model.
#[derive(Debug, Clone)]
pub struct HalfSpaceHorizontal {
    model: Model,
    scale: f64,
    axis: usize,
}

impl HalfSpaceHorizontal {
    pub fn new(model: &Model, axis: usize) -> Result<Self> {
        let a = half_space_parameter(model, "half-space-horizontal")?;
        if axis > 1 {
            return Err(Error::InvalidParameter(format!(
                "horizontal axis must be 0 or 1, got {axis}"
            )));
        }
        Ok(HalfSpaceHorizontal {
            model: model.clone(),
            scale: a.sqrt(),
            axis,
        })
    }
}

impl UnitVectorField for HalfSpaceHorizontal {
    fn model(&self) -> &Model {
        &self.model
    }

    fn name(&self) -> &str {
        "half-space-horizontal"
    }

    fn value(&self, x: &Vector) -> Result<Vector> {
        self.model.check_point(x)?;
        let mut v = Vector::zeros(3);
        v[self.axis] = self.scale * x[2];
        Ok(v)
    }

    fn differential(&self, _x: &Vector, w: &Vector) -> Result<Vector> {
        let mut v = Vector::zeros(3);
        v[self.axis] = self.scale * w[2];
        Ok(v)
    }

    fn constant_density(&self) -> Option<f64> {
        Some((1.0 + self.scale * self.scale).sqrt())
    }
}

/// A constant unit field on flat `ℝ³`.
#[derive(Debug, Clone)]
pub struct ParallelFlat {
    model: Model,
    direction: Vector3<f64>,
}

impl ParallelFlat {
    pub fn new(model: &Model, direction: [f64; 3]) -> Result<Self> {
        if !matches!(model, Model::Flat(_)) {
            return Err(Error::Unsupported(format!(
                "parallel-flat needs the flat model, not `{}`",
                model.name()
            )));
        }
        let v = Vector3::from(direction);
        let n = v.norm();
        if !(n.is_finite() && n > 0.0) {
            return Err(Error::InvalidParameter(
                "parallel field direction must be nonzero".into(),
            ));
        }
        Ok(ParallelFlat {
            model: model.clone(),
            direction: v / n,
        })
    }
}

impl UnitVectorField for ParallelFlat {
    fn model(&self) -> &Model {
        &self.model
    }

    fn name(&self) -> &str {
        "parallel-flat"
    }

    fn value(&self, x: &Vector) -> Result<Vector> {
        self.model.check_point(x)?;
        Ok(Vector::from_column_slice(self.direction.as_slice()))
    }

    fn differential(&self, _x: &Vector, _w: &Vector) -> Result<Vector> {
        Ok(Vector::zeros(3))
    }

    fn constant_density(&self) -> Option<f64> {
        Some(1.0)
    }
}
