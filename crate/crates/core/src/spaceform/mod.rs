//! Riemannian models: embedded hyperquadrics `Sᵐ(r)`, `Hᵐ(r)` and metrics
//! given on a chart of `ℝ³`.

mod chart;
mod embedded;

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

pub use chart::{
    Chart, ChartBox, ChartMetric3, Christoffel, ConformalTest, Flat, HalfSpace, Riemann, H_FIRST,
    H_SECOND,
};
pub use embedded::{EmbeddedSpaceForm, Signature};

use crate::rng::{gaussian_vector, StreamRng};
use crate::{Error, Result};

pub type Vector = DVector<f64>;

/// Tolerance for the constraints defining a point or tangent vector.
pub const CONSTRAINT_TOL: f64 = 1e-8;

/// A Riemannian manifold presented either as a hypersurface of `ℝᵐ⁺¹` or on a
/// chart of `ℝ³`. Points and tangent vectors are given in the coordinates of
/// that presentation.
pub trait Geometry: Send + Sync {
    fn name(&self) -> &'static str;

    /// Intrinsic dimension `m`.
    fn dim(&self) -> usize;

    /// Number of coordinates of a point (`m + 1` embedded, `3` on a chart).
    fn coord_dim(&self) -> usize;

    /// The metric at `x`.
    fn inner(&self, x: &Vector, u: &Vector, v: &Vector) -> f64;

    fn norm(&self, x: &Vector, u: &Vector) -> f64 {
        self.inner(x, u, u).max(0.0).sqrt()
    }

    fn check_point(&self, x: &Vector) -> Result<()>;

    /// Violation of the linear constraint on tangent vectors at `x`.
    fn tangent_residual(&self, x: &Vector, u: &Vector) -> f64;

    fn check_tangent(&self, x: &Vector, u: &Vector) -> Result<()> {
        let residual = self.tangent_residual(x, u);
        if residual > CONSTRAINT_TOL * (1.0 + u.norm()) {
            return Err(Error::NotTangent { residual });
        }
        Ok(())
    }

    /// Nearest admissible point (radial rescaling or clamping to the chart).
    fn project_point(&self, x: &Vector) -> Result<Vector>;

    fn project_tangent(&self, x: &Vector, u: &Vector) -> Vector;

    /// The correction `Γ_x(u, w)` with `∇_u W = dW(u) + Γ_x(u, W)`.
    fn connection_term(&self, x: &Vector, u: &Vector, w: &Vector) -> Result<Vector>;

    /// `R(X,Y)Z = ∇_X∇_Y Z − ∇_Y∇_X Z − ∇_{[X,Y]}Z`.
    fn curvature(&self, x: &Vector, a: &Vector, b: &Vector, c: &Vector) -> Result<Vector>;

    /// `Ric(u, w) = tr(z ↦ R(z, u)w)`.
    fn ricci(&self, x: &Vector, u: &Vector, w: &Vector) -> Result<f64> {
        let mut total = 0.0;
        for e in self.orthonormal_tangent_basis(x)? {
            total += self.inner(x, &self.curvature(x, &e, u, w)?, &e);
        }
        Ok(total)
    }

    fn sectional_curvature(&self, x: &Vector, a: &Vector, b: &Vector) -> Result<f64> {
        let num = self.inner(x, &self.curvature(x, a, b, b)?, a);
        let den = self.inner(x, a, a) * self.inner(x, b, b) - self.inner(x, a, b).powi(2);
        Ok(num / den)
    }

    /// Sectional curvature when it is known to be constant.
    fn constant_curvature(&self) -> Option<f64>;

    /// Derivative of the metric coefficients: `d/ds g_{x + s·dir}(u, v)` at
    /// `s = 0`. Vanishes for embedded models whose ambient form is constant.
    fn metric_derivative(&self, x: &Vector, dir: &Vector, u: &Vector, v: &Vector) -> Result<f64>;

    /// A point drawn from a model-specific sampling region.
    fn sample_point(&self, rng: &mut StreamRng) -> Vector;

    /// An orientation sign `±1` for an ordered tangent basis at `x`.
    fn orientation(&self, x: &Vector, basis: &[Vector]) -> f64;

    /// Metric-orthonormal basis of `T_x M`, positively oriented.
    fn orthonormal_tangent_basis(&self, x: &Vector) -> Result<Vec<Vector>> {
        let n = self.coord_dim();
        let mut basis: Vec<Vector> = Vec::with_capacity(self.dim());
        for axis in 0..n {
            let mut v = self.project_tangent(
                x,
                &Vector::from_fn(n, |i, _| if i == axis { 1.0 } else { 0.0 }),
            );
            for e in &basis {
                v -= e * self.inner(x, &v, e);
            }
            let len = self.norm(x, &v);
            if len > 1e-6 {
                basis.push(v / len);
            }
            if basis.len() == self.dim() {
                break;
            }
        }
        if basis.len() != self.dim() {
            return Err(Error::DegenerateFrame);
        }
        if self.orientation(x, &basis) < 0.0 {
            let last = basis.len() - 1;
            basis[last] = -&basis[last];
        }
        Ok(basis)
    }

    /// A unit tangent vector at `x` drawn from the Gaussian on `T_x M`.
    fn sample_unit_tangent(&self, x: &Vector, rng: &mut StreamRng) -> Vector {
        loop {
            let u = self.project_tangent(x, &gaussian_vector(rng, self.coord_dim()));
            let len = self.norm(x, &u);
            if len > 1e-3 {
                return u / len;
            }
        }
    }
}

/// Levi-Civita derivative of a vector field `W` along `u`, given its
/// coordinate differential `dW(u)`.
pub fn covariant_derivative<G: Geometry + ?Sized>(
    geom: &G,
    x: &Vector,
    u: &Vector,
    w: &Vector,
    dw_u: &Vector,
) -> Result<Vector> {
    Ok(dw_u + geom.connection_term(x, u, w)?)
}

/// Gram matrix of `vectors` in the metric at `x`.
pub fn gram<G: Geometry + ?Sized>(geom: &G, x: &Vector, vectors: &[Vector]) -> DMatrix<f64> {
    let n = vectors.len();
    DMatrix::from_fn(n, n, |i, j| geom.inner(x, &vectors[i], &vectors[j]))
}

/// Parameters for the built-in models.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    pub radius: f64,
    pub a: f64,
    pub amplitude: f64,
    pub dim: usize,
}

impl Default for ModelParams {
    fn default() -> Self {
        ModelParams {
            radius: 1.0,
            a: 1.0,
            amplitude: ConformalTest::DEFAULT_AMPLITUDE,
            dim: 3,
        }
    }
}

/// The built-in model registry.
#[derive(Debug, Clone)]
pub enum Model {
    Embedded(EmbeddedSpaceForm),
    Flat(Chart<Flat>),
    HalfSpace(Chart<HalfSpace>),
    Conformal(Chart<ConformalTest>),
}

pub const MODEL_NAMES: [&str; 5] = [
    "sphere",
    "hyperbolic-quadric",
    "flat",
    "half-space",
    "conformal-test",
];

impl Model {
    /// Looks up a model by registry name. `hyperbolic` is accepted for
    /// `hyperbolic-quadric`.
    pub fn from_name(name: &str, params: ModelParams) -> Result<Self> {
        match name {
            "sphere" => Ok(Model::Embedded(EmbeddedSpaceForm::sphere(
                params.radius,
                params.dim,
            )?)),
            "hyperbolic-quadric" | "hyperbolic" => Ok(Model::Embedded(
                EmbeddedSpaceForm::hyperbolic(params.radius, params.dim)?,
            )),
            "flat" => Ok(Model::Flat(Chart::new(Flat))),
            "half-space" => Ok(Model::HalfSpace(Chart::new(HalfSpace::new(params.a)?))),
            "conformal-test" => Ok(Model::Conformal(Chart::new(ConformalTest::new(
                params.amplitude,
            )?))),
            other => Err(Error::InvalidParameter(format!(
                "unknown model `{other}` (expected one of {})",
                MODEL_NAMES.join(", ")
            ))),
        }
    }

    pub fn as_geometry(&self) -> &dyn Geometry {
        match self {
            Model::Embedded(m) => m,
            Model::Flat(m) => m,
            Model::HalfSpace(m) => m,
            Model::Conformal(m) => m,
        }
    }

    pub fn embedded(&self) -> Option<&EmbeddedSpaceForm> {
        match self {
            Model::Embedded(m) => Some(m),
            _ => None,
        }
    }

    /// Ricci tensor in chart coordinates, for chart models.
    pub fn ricci_matrix(&self, x: &Vector) -> Result<Option<nalgebra::Matrix3<f64>>> {
        let p = || nalgebra::Vector3::new(x[0], x[1], x[2]);
        Ok(match self {
            Model::Embedded(_) => None,
            Model::Flat(m) => Some(m.ricci_matrix(&p())?),
            Model::HalfSpace(m) => Some(m.ricci_matrix(&p())?),
            Model::Conformal(m) => Some(m.ricci_matrix(&p())?),
        })
    }
}

impl Geometry for Model {
    fn name(&self) -> &'static str {
        self.as_geometry().name()
    }

    fn dim(&self) -> usize {
        self.as_geometry().dim()
    }

    fn coord_dim(&self) -> usize {
        self.as_geometry().coord_dim()
    }

    fn inner(&self, x: &Vector, u: &Vector, v: &Vector) -> f64 {
        self.as_geometry().inner(x, u, v)
    }

    fn check_point(&self, x: &Vector) -> Result<()> {
        self.as_geometry().check_point(x)
    }

    fn tangent_residual(&self, x: &Vector, u: &Vector) -> f64 {
        self.as_geometry().tangent_residual(x, u)
    }

    fn project_point(&self, x: &Vector) -> Result<Vector> {
        self.as_geometry().project_point(x)
    }

    fn project_tangent(&self, x: &Vector, u: &Vector) -> Vector {
        self.as_geometry().project_tangent(x, u)
    }

    fn connection_term(&self, x: &Vector, u: &Vector, w: &Vector) -> Result<Vector> {
        self.as_geometry().connection_term(x, u, w)
    }

    fn curvature(&self, x: &Vector, a: &Vector, b: &Vector, c: &Vector) -> Result<Vector> {
        self.as_geometry().curvature(x, a, b, c)
    }

    fn ricci(&self, x: &Vector, u: &Vector, w: &Vector) -> Result<f64> {
        self.as_geometry().ricci(x, u, w)
    }

    fn constant_curvature(&self) -> Option<f64> {
        self.as_geometry().constant_curvature()
    }

    fn metric_derivative(&self, x: &Vector, dir: &Vector, u: &Vector, v: &Vector) -> Result<f64> {
        self.as_geometry().metric_derivative(x, dir, u, v)
    }

    fn sample_point(&self, rng: &mut StreamRng) -> Vector {
        self.as_geometry().sample_point(rng)
    }

    fn orientation(&self, x: &Vector, basis: &[Vector]) -> f64 {
        self.as_geometry().orientation(x, basis)
    }
}
