//! The unit tangent bundle `T¹M` with its Sasaki metric.
//!
//! A tangent vector to `TM` at `(x, y)` is stored as `(u, v)`, the
//! derivative of a curve `(x(s), y(s))` in the coordinates of the model. Its
//! horizontal part is `u = dπ(w)` and its vertical part is the covariant
//! derivative `V = v + Γ_x(u, y)`.

mod flow;
mod frame;
mod retraction;

pub use flow::{
    chart_geodesic_flow, flow_isometry_defect, flow_map, flow_velocity_check, geodesic_flow,
    grassmann_project, trajectory, trajectory_csv, FlowMap, IsometryReport, CHART_FLOW_STEP,
};
pub use frame::{
    adapted_frame, adapted_frame_with_fallback, oriented_completion, AdaptedFrame, DEGENERATE_TOL,
};
pub use retraction::{RetractionChart, CHART_RADIUS};

use crate::spaceform::{Geometry, Vector};
use crate::{Error, Result};

/// A point `(x, y)` of `T¹M`.
#[derive(Debug, Clone, PartialEq)]
pub struct UnitTangentPoint {
    pub x: Vector,
    pub y: Vector,
}

impl UnitTangentPoint {
    /// Validates the point and tangency constraints and `‖y‖ = 1`.
    pub fn new<G: Geometry + ?Sized>(geom: &G, x: Vector, y: Vector) -> Result<Self> {
        geom.check_point(&x)?;
        if y.len() != x.len() {
            return Err(Error::Dimension {
                expected: x.len(),
                found: y.len(),
            });
        }
        geom.check_tangent(&x, &y)?;
        let norm = geom.norm(&x, &y);
        if (norm - 1.0).abs() > 1e-10 {
            return Err(Error::NotUnit { norm });
        }
        Ok(UnitTangentPoint { x, y })
    }

    /// A random point: `x` from the model's sampler, `y` Gaussian on `T_x M`.
    pub fn sample<G: Geometry + ?Sized>(geom: &G, rng: &mut crate::rng::StreamRng) -> Self {
        let x = geom.sample_point(rng);
        let y = geom.sample_unit_tangent(&x, rng);
        UnitTangentPoint { x, y }
    }

    /// The point `(x, −y)`.
    pub fn reversed(&self) -> Self {
        UnitTangentPoint {
            x: self.x.clone(),
            y: -&self.y,
        }
    }
}

/// A tangent vector `(x, y, u, v)` to `TM`.
#[derive(Debug, Clone, PartialEq)]
pub struct DoubleTangentVector {
    pub base: UnitTangentPoint,
    pub u: Vector,
    pub v: Vector,
}

impl DoubleTangentVector {
    pub fn new(base: &UnitTangentPoint, u: Vector, v: Vector) -> Self {
        DoubleTangentVector {
            base: base.clone(),
            u,
            v,
        }
    }

    pub fn zero(base: &UnitTangentPoint) -> Self {
        let n = base.x.len();
        Self::new(base, Vector::zeros(n), Vector::zeros(n))
    }

    pub fn scaled(&self, s: f64) -> Self {
        Self::new(&self.base, &self.u * s, &self.v * s)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        same_base(self, other)?;
        Ok(Self::new(
            &self.base,
            &self.u + &other.u,
            &self.v + &other.v,
        ))
    }

    /// `dπ(w)`.
    pub fn projection(&self) -> &Vector {
        &self.u
    }
}

fn same_base(a: &DoubleTangentVector, b: &DoubleTangentVector) -> Result<()> {
    let d = (&a.base.x - &b.base.x).amax() + (&a.base.y - &b.base.y).amax();
    if d > 1e-12 {
        return Err(Error::BaseMismatch);
    }
    Ok(())
}

/// Connection map `K(w) = v + Γ_x(u, y)`: the vertical part of `w`.
pub fn connection_map<G: Geometry + ?Sized>(geom: &G, w: &DoubleTangentVector) -> Result<Vector> {
    Ok(&w.v + geom.connection_term(&w.base.x, &w.u, &w.base.y)?)
}

/// Sasaki metric `⟨u₁,u₂⟩ + ⟨K w₁, K w₂⟩`.
pub fn sasaki_inner<G: Geometry + ?Sized>(
    geom: &G,
    w1: &DoubleTangentVector,
    w2: &DoubleTangentVector,
) -> Result<f64> {
    same_base(w1, w2)?;
    let x = &w1.base.x;
    let k1 = connection_map(geom, w1)?;
    let k2 = connection_map(geom, w2)?;
    Ok(geom.inner(x, &w1.u, &w2.u) + geom.inner(x, &k1, &k2))
}

pub fn sasaki_norm<G: Geometry + ?Sized>(geom: &G, w: &DoubleTangentVector) -> Result<f64> {
    Ok(sasaki_inner(geom, w, w)?.max(0.0).sqrt())
}

/// Residuals of the constraints for `w` to be tangent to `TM`, and then to
/// `T¹M`: `(tangent to TM, tangent to T¹M)`.
pub fn tangency_residuals<G: Geometry + ?Sized>(
    geom: &G,
    w: &DoubleTangentVector,
) -> Result<(f64, f64)> {
    let x = &w.base.x;
    let y = &w.base.y;
    // Differentiating ⟨x, y⟩ = 0 along the curve gives ⟨u, y⟩ + ⟨v, x⟩ = 0 for
    // embedded models; charts have no constraint.
    let tm = if is_embedded(geom) {
        geom.tangent_residual(x, &w.u) + (geom.inner(x, &w.u, y) + geom.inner(x, &w.v, x)).abs()
    } else {
        0.0
    };
    let unit = geom.inner(x, y, &connection_map(geom, w)?).abs();
    Ok((tm, unit))
}

/// `B(x, y, u, v) = (x, y, 0, u)`.
pub fn mirror(w: &DoubleTangentVector) -> DoubleTangentVector {
    DoubleTangentVector::new(&w.base, Vector::zeros(w.u.len()), w.u.clone())
}

/// The tautological vertical field `ξ = (x, y, 0, y)`.
pub fn tautological(p: &UnitTangentPoint) -> DoubleTangentVector {
    DoubleTangentVector::new(p, Vector::zeros(p.x.len()), p.y.clone())
}

/// Horizontal lift `(U, −Γ_x(U, y))` of a tangent vector `U` at `x`.
pub fn horizontal_lift<G: Geometry + ?Sized>(
    geom: &G,
    p: &UnitTangentPoint,
    tangent: &Vector,
) -> Result<DoubleTangentVector> {
    let v = -geom.connection_term(&p.x, tangent, &p.y)?;
    Ok(DoubleTangentVector::new(p, tangent.clone(), v))
}

/// Vertical lift `(0, V)`.
pub fn vertical_lift(p: &UnitTangentPoint, tangent: &Vector) -> DoubleTangentVector {
    DoubleTangentVector::new(p, Vector::zeros(p.x.len()), tangent.clone())
}

/// The geodesic spray `e₀`, the horizontal lift of `y`.
pub fn geodesic_spray<G: Geometry + ?Sized>(
    geom: &G,
    p: &UnitTangentPoint,
) -> Result<DoubleTangentVector> {
    horizontal_lift(geom, p, &p.y)
}

/// Decomposition `w = h + v` into a horizontal and a vertical vector.
pub fn split<G: Geometry + ?Sized>(
    geom: &G,
    w: &DoubleTangentVector,
) -> Result<(DoubleTangentVector, DoubleTangentVector)> {
    let h = horizontal_lift(geom, &w.base, &w.u)?;
    let v = vertical_lift(&w.base, &connection_map(geom, w)?);
    Ok((h, v))
}

fn is_embedded<G: Geometry + ?Sized>(geom: &G) -> bool {
    geom.coord_dim() > geom.dim()
}

/// Sum of the constraint violations of a candidate point of `T¹M`:
/// `|⟨x,x⟩ ∓ r²|/r² + |⟨x,y⟩|/r + |‖y‖ − 1|`.
pub fn point_residual<G: Geometry + ?Sized>(geom: &G, p: &UnitTangentPoint) -> f64 {
    let on_manifold = match geom.constant_curvature() {
        Some(c) if is_embedded(geom) => (geom.inner(&p.x, &p.x, &p.x) * c - 1.0).abs(),
        _ => 0.0,
    };
    on_manifold + geom.tangent_residual(&p.x, &p.y) + (geom.norm(&p.x, &p.y) - 1.0).abs()
}
