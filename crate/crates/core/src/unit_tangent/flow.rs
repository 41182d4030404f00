use std::fmt::Write as _;

use nalgebra::DMatrix;
use serde::Serialize;

use super::{
    geodesic_spray, horizontal_lift, sasaki_inner, vertical_lift, DoubleTangentVector,
    UnitTangentPoint,
};
use crate::spaceform::{EmbeddedSpaceForm, Geometry, Vector, CONSTRAINT_TOL};
use crate::{Error, Result};

/// Step of the fourth-order integrator used on chart metrics.
pub const CHART_FLOW_STEP: f64 = 1e-3;

/// The linear map `(x, y) ↦ (a x + b y, c x + d y)` of the geodesic flow at
/// time `t` on an embedded space form.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FlowMap {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
}

impl FlowMap {
    pub fn apply(&self, x: &Vector, y: &Vector) -> (Vector, Vector) {
        (x * self.a + y * self.b, x * self.c + y * self.d)
    }
}

/// Elliptic: `(x cos t + y r sin t, −x sin t / r + y cos t)`;
/// hyperbolic: `(x cosh t + y r sinh t, x sinh t / r + y cosh t)`.
pub fn flow_map(m: &EmbeddedSpaceForm, t: f64) -> FlowMap {
    let r = m.radius;
    if m.is_elliptic() {
        let (s, c) = t.sin_cos();
        FlowMap {
            a: c,
            b: r * s,
            c: -s / r,
            d: c,
        }
    } else {
        let (s, c) = (t.sinh(), t.cosh());
        FlowMap {
            a: c,
            b: r * s,
            c: s / r,
            d: c,
        }
    }
}

fn validate(m: &EmbeddedSpaceForm, p: &UnitTangentPoint) -> Result<()> {
    m.check_point(&p.x)?;
    m.check_tangent(&p.x, &p.y)?;
    let norm = m.norm(&p.x, &p.y);
    if (norm - 1.0).abs() > CONSTRAINT_TOL {
        return Err(Error::NotUnit { norm });
    }
    Ok(())
}

/// The geodesic flow `g_t` on `T¹M` of an embedded space form.
pub fn geodesic_flow(
    m: &EmbeddedSpaceForm,
    p: &UnitTangentPoint,
    t: f64,
) -> Result<UnitTangentPoint> {
    validate(m, p)?;
    let (x, y) = flow_map(m, t).apply(&p.x, &p.y);
    if !m.is_elliptic() && x[0] <= 0.0 {
        return Err(Error::SheetViolation { x1: x[0] });
    }
    Ok(UnitTangentPoint { x, y })
}

/// `‖(g_{t+h} − g_{t−h})/(2h) − r·e₀(g_t)‖`, in ambient coordinates of `(x, y)`.
pub fn flow_velocity_check(
    m: &EmbeddedSpaceForm,
    p: &UnitTangentPoint,
    t: f64,
    h: f64,
) -> Result<f64> {
    let plus = geodesic_flow(m, p, t + h)?;
    let minus = geodesic_flow(m, p, t - h)?;
    let at = geodesic_flow(m, p, t)?;
    let e0 = geodesic_spray(m, &at)?;
    let dx = (&plus.x - &minus.x) / (2.0 * h) - &e0.u * m.radius;
    let dy = (&plus.y - &minus.y) / (2.0 * h) - &e0.v * m.radius;
    Ok((dx.norm_squared() + dy.norm_squared()).sqrt())
}

/// Deviation of `dg_t` from an isometry of the Sasaki metric.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct IsometryReport {
    /// `max |Gram(dg_t eᵢ) − I|` over an orthonormal basis at `p`.
    pub defect: f64,
    /// Squared stretch `a² + c²` of horizontal vectors orthogonal to the spray.
    pub horizontal_factor: f64,
    /// Squared stretch `b² + d²` of vertical vectors.
    pub vertical_factor: f64,
    /// Inner product `ab + cd` between the images of matching horizontal and
    /// vertical vectors.
    pub mixed_factor: f64,
}

/// Orthonormal basis of `T_p T¹M`: the spray, horizontal lifts of a basis of
/// `y^⊥`, and vertical lifts of the same basis.
fn sasaki_basis<G: Geometry + ?Sized>(
    geom: &G,
    p: &UnitTangentPoint,
) -> Result<Vec<DoubleTangentVector>> {
    let n = geom.coord_dim();
    let mut perp: Vec<Vector> = Vec::new();
    for k in 0..n {
        let mut v = geom.project_tangent(
            &p.x,
            &Vector::from_fn(n, |i, _| if i == k { 1.0 } else { 0.0 }),
        );
        v -= &p.y * geom.inner(&p.x, &v, &p.y);
        for e in &perp {
            v -= e * geom.inner(&p.x, &v, e);
        }
        let len = geom.norm(&p.x, &v);
        if len > 1e-6 {
            perp.push(v / len);
        }
        if perp.len() + 1 == geom.dim() {
            break;
        }
    }
    if perp.len() + 1 != geom.dim() {
        return Err(Error::DegenerateFrame);
    }
    let mut basis = vec![geodesic_spray(geom, p)?];
    for f in &perp {
        basis.push(horizontal_lift(geom, p, f)?);
    }
    for f in &perp {
        basis.push(vertical_lift(p, f));
    }
    Ok(basis)
}

pub fn flow_isometry_defect(
    m: &EmbeddedSpaceForm,
    p: &UnitTangentPoint,
    t: f64,
) -> Result<IsometryReport> {
    validate(m, p)?;
    let map = flow_map(m, t);
    let q = geodesic_flow(m, p, t)?;
    let basis = sasaki_basis(m, p)?;
    let pushed: Vec<DoubleTangentVector> = basis
        .iter()
        .map(|w| {
            let (u, v) = map.apply(&w.u, &w.v);
            DoubleTangentVector::new(&q, u, v)
        })
        .collect();
    let n = pushed.len();
    let mut gram = DMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            gram[(i, j)] = sasaki_inner(m, &pushed[i], &pushed[j])?;
        }
    }
    let defect = (gram - DMatrix::identity(n, n)).amax();
    Ok(IsometryReport {
        defect,
        horizontal_factor: map.a * map.a + map.c * map.c,
        vertical_factor: map.b * map.b + map.d * map.d,
        mixed_factor: map.a * map.b + map.c * map.d,
    })
}

/// The bivector `x ∧ y` as the antisymmetric matrix `xᵢyⱼ − xⱼyᵢ`.
pub fn grassmann_project(p: &UnitTangentPoint) -> DMatrix<f64> {
    &p.x * p.y.transpose() - &p.y * p.x.transpose()
}

/// Geodesic flow on a chart metric by the classical fourth-order Runge–Kutta
/// method, renormalising `y` after every step.
pub fn chart_geodesic_flow<G: Geometry + ?Sized>(
    geom: &G,
    p: &UnitTangentPoint,
    t: f64,
) -> Result<UnitTangentPoint> {
    let steps = ((t.abs() / CHART_FLOW_STEP).ceil() as usize).max(1);
    let h = t / steps as f64;
    let rhs = |x: &Vector, y: &Vector| -> Result<(Vector, Vector)> {
        Ok((y.clone(), -geom.connection_term(x, y, y)?))
    };
    let mut x = p.x.clone();
    let mut y = p.y.clone();
    for _ in 0..steps {
        let (k1x, k1y) = rhs(&x, &y)?;
        let (k2x, k2y) = rhs(&(&x + &k1x * (h / 2.0)), &(&y + &k1y * (h / 2.0)))?;
        let (k3x, k3y) = rhs(&(&x + &k2x * (h / 2.0)), &(&y + &k2y * (h / 2.0)))?;
        let (k4x, k4y) = rhs(&(&x + &k3x * h), &(&y + &k3y * h))?;
        x += (k1x + k2x * 2.0 + k3x * 2.0 + k4x) * (h / 6.0);
        y += (k1y + k2y * 2.0 + k3y * 2.0 + k4y) * (h / 6.0);
        geom.check_point(&x)?;
        y /= geom.norm(&x, &y);
    }
    Ok(UnitTangentPoint { x, y })
}

/// Samples `g_t(p)` at `samples + 1` equally spaced times in `[0, t_end]`.
pub fn trajectory(
    m: &EmbeddedSpaceForm,
    p: &UnitTangentPoint,
    t_end: f64,
    samples: usize,
) -> Result<Vec<(f64, UnitTangentPoint)>> {
    let n = samples.max(1);
    (0..=n)
        .map(|i| {
            let t = t_end * i as f64 / n as f64;
            geodesic_flow(m, p, t).map(|q| (t, q))
        })
        .collect()
}

/// CSV with header `t,x1,…,x{m+1},y1,…,y{m+1}` and LF line endings.
pub fn trajectory_csv(points: &[(f64, UnitTangentPoint)]) -> String {
    let n = points.first().map_or(0, |(_, p)| p.x.len());
    let mut out = String::from("t");
    for prefix in ["x", "y"] {
        for i in 1..=n {
            let _ = write!(out, ",{prefix}{i}");
        }
    }
    out.push('\n');
    for (t, p) in points {
        let _ = write!(out, "{t:?}");
        for v in p.x.iter().chain(p.y.iter()) {
            let _ = write!(out, ",{v:?}");
        }
        out.push('\n');
    }
    out
}
