use std::fmt::Debug;

use nalgebra::{Matrix3, Vector3};
use serde::{Deserialize, Serialize};

use super::{Geometry, Vector};
use crate::rng::{uniform, StreamRng};
use crate::{Error, Result};

/// Central-difference step for first derivatives of the metric.
pub const H_FIRST: f64 = 1e-4;
/// Central-difference step for second derivatives of the metric.
pub const H_SECOND: f64 = 1e-3;
/// Points closer than this to the chart boundary are rejected.
const BOUNDARY_MARGIN: f64 = H_FIRST + H_SECOND;

/// `Γ[k][i][j] = Γᵏᵢⱼ`.
pub type Christoffel = [[[f64; 3]; 3]; 3];
/// `R[l][i][j][k] = Rˡᵢⱼₖ`, so that `R(∂ᵢ,∂ⱼ)∂ₖ = Rˡᵢⱼₖ ∂ₗ`.
pub type Riemann = [[[[f64; 3]; 3]; 3]; 3];

/// An axis-aligned box in `ℝ³`; bounds may be infinite.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChartBox {
    pub lo: [f64; 3],
    pub hi: [f64; 3],
}

impl ChartBox {
    pub fn new(lo: [f64; 3], hi: [f64; 3]) -> Result<Self> {
        for k in 0..3 {
            if lo[k].is_nan() || hi[k].is_nan() || lo[k] > hi[k] {
                return Err(Error::InvalidParameter(format!(
                    "box axis {k}: lower bound {} exceeds upper bound {}",
                    lo[k], hi[k]
                )));
            }
        }
        Ok(ChartBox { lo, hi })
    }

    pub fn everywhere() -> Self {
        ChartBox {
            lo: [f64::NEG_INFINITY; 3],
            hi: [f64::INFINITY; 3],
        }
    }

    /// Distance from `x` to the complement of the box (negative outside).
    pub fn interior_distance(&self, x: &Vector3<f64>) -> f64 {
        (0..3)
            .map(|k| (x[k] - self.lo[k]).min(self.hi[k] - x[k]))
            .fold(f64::INFINITY, f64::min)
    }

    pub fn contains(&self, x: &Vector3<f64>) -> bool {
        (0..3).all(|k| x[k] >= self.lo[k] && x[k] <= self.hi[k])
    }

    pub fn volume(&self) -> f64 {
        (0..3).map(|k| self.hi[k] - self.lo[k]).product()
    }

    pub fn sample(&self, rng: &mut StreamRng) -> Vector3<f64> {
        Vector3::from_fn(|k, _| uniform(rng, self.lo[k], self.hi[k]))
    }
}

/// A Riemannian metric on an open box of `ℝ³`.
pub trait ChartMetric3: Debug + Clone + Send + Sync {
    fn name(&self) -> &'static str;

    fn domain(&self) -> ChartBox;

    /// Region used when a caller asks for random points.
    fn sample_box(&self) -> ChartBox;

    fn metric(&self, x: &Vector3<f64>) -> Matrix3<f64>;

    /// Closed-form Christoffel symbols, bypassing finite differences.
    fn christoffels(&self, _x: &Vector3<f64>) -> Option<Christoffel> {
        None
    }

    fn constant_curvature(&self) -> Option<f64> {
        None
    }
}

/// Euclidean `ℝ³`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Flat;

impl ChartMetric3 for Flat {
    fn name(&self) -> &'static str {
        "flat"
    }

    fn domain(&self) -> ChartBox {
        ChartBox::everywhere()
    }

    fn sample_box(&self) -> ChartBox {
        ChartBox {
            lo: [-1.0; 3],
            hi: [1.0; 3],
        }
    }

    fn metric(&self, _x: &Vector3<f64>) -> Matrix3<f64> {
        Matrix3::identity()
    }

    fn christoffels(&self, _x: &Vector3<f64>) -> Option<Christoffel> {
        Some([[[0.0; 3]; 3]; 3])
    }

    fn constant_curvature(&self) -> Option<f64> {
        Some(0.0)
    }
}

/// Upper half-space `{t > 0}` with `g = (1/(a t²))·I`, coordinates `(x¹, x², t)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HalfSpace {
    pub a: f64,
}

impl HalfSpace {
    pub fn new(a: f64) -> Result<Self> {
        if !(a.is_finite() && a > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "half-space parameter a must be positive, got {a}"
            )));
        }
        Ok(HalfSpace { a })
    }
}

impl ChartMetric3 for HalfSpace {
    fn name(&self) -> &'static str {
        "half-space"
    }

    fn domain(&self) -> ChartBox {
        ChartBox {
            lo: [f64::NEG_INFINITY, f64::NEG_INFINITY, 0.0],
            hi: [f64::INFINITY; 3],
        }
    }

    fn sample_box(&self) -> ChartBox {
        ChartBox {
            lo: [-1.0, -1.0, 0.5],
            hi: [1.0, 1.0, 2.0],
        }
    }

    fn metric(&self, x: &Vector3<f64>) -> Matrix3<f64> {
        Matrix3::identity() / (self.a * x[2] * x[2])
    }

    fn christoffels(&self, x: &Vector3<f64>) -> Option<Christoffel> {
        let inv_t = 1.0 / x[2];
        let mut g = [[[0.0; 3]; 3]; 3];
        // ∇_{∂i}∂j = δᵢⱼ ∂t / t, ∇_{∂i}∂t = −∂i / t, ∇_{∂t}∂t = −∂t / t
        for i in 0..2 {
            g[2][i][i] = inv_t;
            g[i][i][2] = -inv_t;
            g[i][2][i] = -inv_t;
        }
        g[2][2][2] = -inv_t;
        Some(g)
    }

    fn constant_curvature(&self) -> Option<f64> {
        Some(-self.a)
    }
}

/// The conformally flat metric `e^{2A x¹}·I`, a test case with non-constant
/// Ricci curvature and no closed-form Christoffel symbols.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConformalTest {
    pub amplitude: f64,
}

impl ConformalTest {
    pub const DEFAULT_AMPLITUDE: f64 = 0.1;

    pub fn new(amplitude: f64) -> Result<Self> {
        if !amplitude.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "amplitude must be finite, got {amplitude}"
            )));
        }
        Ok(ConformalTest { amplitude })
    }
}

impl ChartMetric3 for ConformalTest {
    fn name(&self) -> &'static str {
        "conformal-test"
    }

    fn domain(&self) -> ChartBox {
        ChartBox::everywhere()
    }

    fn sample_box(&self) -> ChartBox {
        ChartBox {
            lo: [-1.0; 3],
            hi: [1.0; 3],
        }
    }

    fn metric(&self, x: &Vector3<f64>) -> Matrix3<f64> {
        Matrix3::identity() * (2.0 * self.amplitude * x[0]).exp()
    }
}

/// A chart metric with Levi-Civita data, by closed forms when the metric
/// provides them and central differences otherwise.
#[derive(Debug, Clone)]
pub struct Chart<M> {
    pub metric: M,
}

fn to3(x: &Vector) -> Vector3<f64> {
    Vector3::new(x[0], x[1], x[2])
}

fn offset(x: &Vector3<f64>, axis: usize, h: f64) -> Vector3<f64> {
    let mut y = *x;
    y[axis] += h;
    y
}

impl<M: ChartMetric3> Chart<M> {
    pub fn new(metric: M) -> Self {
        Chart { metric }
    }

    pub fn check(&self, x: &Vector3<f64>) -> Result<()> {
        let margin = self.metric.domain().interior_distance(x);
        if !(margin > BOUNDARY_MARGIN) {
            return Err(Error::OutsideChart {
                point: x.iter().copied().collect(),
                margin,
            });
        }
        Ok(())
    }

    /// The metric matrix after domain and positive-definiteness checks.
    pub fn metric_at(&self, x: &Vector3<f64>) -> Result<Matrix3<f64>> {
        self.check(x)?;
        let g = self.metric.metric(x);
        let eig = g.symmetric_eigen().eigenvalues;
        if !(eig.min() > 0.0) {
            return Err(Error::NotPositiveDefinite(eig.iter().copied().collect()));
        }
        Ok(g)
    }

    /// `∂ₗ g` for `l = 0, 1, 2`.
    pub fn metric_derivatives(&self, x: &Vector3<f64>) -> [Matrix3<f64>; 3] {
        std::array::from_fn(|l| {
            (self.metric.metric(&offset(x, l, H_FIRST))
                - self.metric.metric(&offset(x, l, -H_FIRST)))
                / (2.0 * H_FIRST)
        })
    }

    fn christoffels_unchecked(&self, x: &Vector3<f64>) -> Christoffel {
        if let Some(g) = self.metric.christoffels(x) {
            return g;
        }
        let ginv = self
            .metric
            .metric(x)
            .try_inverse()
            .unwrap_or_else(|| Matrix3::from_element(f64::NAN));
        let dg = self.metric_derivatives(x);
        let mut out = [[[0.0; 3]; 3]; 3];
        for (k, out_k) in out.iter_mut().enumerate() {
            for i in 0..3 {
                for j in 0..3 {
                    out_k[i][j] = 0.5
                        * (0..3)
                            .map(|l| ginv[(k, l)] * (dg[i][(j, l)] + dg[j][(i, l)] - dg[l][(i, j)]))
                            .sum::<f64>();
                }
            }
        }
        out
    }

    pub fn christoffels(&self, x: &Vector3<f64>) -> Result<Christoffel> {
        self.metric_at(x)?;
        Ok(self.christoffels_unchecked(x))
    }

    pub fn riemann(&self, x: &Vector3<f64>) -> Result<Riemann> {
        self.metric_at(x)?;
        let gamma = self.christoffels_unchecked(x);
        let dgamma: [Christoffel; 3] = std::array::from_fn(|m| {
            let plus = self.christoffels_unchecked(&offset(x, m, H_SECOND));
            let minus = self.christoffels_unchecked(&offset(x, m, -H_SECOND));
            std::array::from_fn(|k| {
                std::array::from_fn(|i| {
                    std::array::from_fn(|j| (plus[k][i][j] - minus[k][i][j]) / (2.0 * H_SECOND))
                })
            })
        });
        let mut r = [[[[0.0; 3]; 3]; 3]; 3];
        for (l, r_l) in r.iter_mut().enumerate() {
            for i in 0..3 {
                for j in 0..3 {
                    for k in 0..3 {
                        let mut v = dgamma[i][l][j][k] - dgamma[j][l][i][k];
                        for m in 0..3 {
                            v += gamma[l][i][m] * gamma[m][j][k] - gamma[l][j][m] * gamma[m][i][k];
                        }
                        r_l[i][j][k] = v;
                    }
                }
            }
        }
        Ok(r)
    }

    /// `Ricⱼₖ = Rⁱᵢⱼₖ` in chart coordinates.
    pub fn ricci_matrix(&self, x: &Vector3<f64>) -> Result<Matrix3<f64>> {
        let r = self.riemann(x)?;
        Ok(Matrix3::from_fn(|j, k| (0..3).map(|i| r[i][i][j][k]).sum()))
    }
}

impl<M: ChartMetric3> Geometry for Chart<M> {
    fn name(&self) -> &'static str {
        self.metric.name()
    }

    fn dim(&self) -> usize {
        3
    }

    fn coord_dim(&self) -> usize {
        3
    }

    fn inner(&self, x: &Vector, u: &Vector, v: &Vector) -> f64 {
        let g = self.metric.metric(&to3(x));
        (to3(u).transpose() * g * to3(v))[0]
    }

    fn check_point(&self, x: &Vector) -> Result<()> {
        if x.len() != 3 {
            return Err(Error::Dimension {
                expected: 3,
                found: x.len(),
            });
        }
        self.metric_at(&to3(x)).map(|_| ())
    }

    fn tangent_residual(&self, _x: &Vector, _u: &Vector) -> f64 {
        0.0
    }

    fn project_point(&self, x: &Vector) -> Result<Vector> {
        if x.len() != 3 {
            return Err(Error::Dimension {
                expected: 3,
                found: x.len(),
            });
        }
        let d = self.metric.domain();
        let pad = 2.0 * BOUNDARY_MARGIN;
        Ok(Vector::from_fn(3, |k, _| {
            x[k].clamp(d.lo[k] + pad, d.hi[k] - pad)
        }))
    }

    fn project_tangent(&self, _x: &Vector, u: &Vector) -> Vector {
        u.clone()
    }

    fn connection_term(&self, x: &Vector, u: &Vector, w: &Vector) -> Result<Vector> {
        let g = self.christoffels(&to3(x))?;
        Ok(Vector::from_fn(3, |k, _| {
            (0..3)
                .map(|i| (0..3).map(|j| g[k][i][j] * u[i] * w[j]).sum::<f64>())
                .sum()
        }))
    }

    fn curvature(&self, x: &Vector, a: &Vector, b: &Vector, c: &Vector) -> Result<Vector> {
        let r = self.riemann(&to3(x))?;
        Ok(Vector::from_fn(3, |l, _| {
            let mut v = 0.0;
            for i in 0..3 {
                for j in 0..3 {
                    for k in 0..3 {
                        v += r[l][i][j][k] * a[i] * b[j] * c[k];
                    }
                }
            }
            v
        }))
    }

    fn ricci(&self, x: &Vector, u: &Vector, w: &Vector) -> Result<f64> {
        let ric = self.ricci_matrix(&to3(x))?;
        Ok((to3(u).transpose() * ric * to3(w))[0])
    }

    fn constant_curvature(&self) -> Option<f64> {
        self.metric.constant_curvature()
    }

    fn metric_derivative(&self, x: &Vector, dir: &Vector, u: &Vector, v: &Vector) -> Result<f64> {
        let p = to3(x);
        self.check(&p)?;
        let dg = self.metric_derivatives(&p);
        let m = dg[0] * dir[0] + dg[1] * dir[1] + dg[2] * dir[2];
        Ok((to3(u).transpose() * m * to3(v))[0])
    }

    fn sample_point(&self, rng: &mut StreamRng) -> Vector {
        let p = self.metric.sample_box().sample(rng);
        Vector::from_column_slice(p.as_slice())
    }

    fn orientation(&self, _x: &Vector, basis: &[Vector]) -> f64 {
        Matrix3::from_fn(|r, c| basis[c][r]).determinant().signum()
    }
}
