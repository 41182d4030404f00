//! The volume functional by Gauss–Legendre quadrature, and boundary flux.

use std::f64::consts::{FRAC_PI_2, PI, TAU};

use nalgebra::Vector3;
use rayon::prelude::*;
use serde::Serialize;

use super::{volume_density, UnitVectorField};
use crate::quadrature::{pairwise_sum, tensor_grid3, GaussLegendre};
use crate::spaceform::{ChartBox, Geometry, Model, Vector};
use crate::{Error, Result};

/// Default orders `(η, ξ₁, ξ₂)` for full-sphere quadrature.
pub const HOPF_ORDERS: [usize; 3] = [32, 16, 16];
/// Relative gap between order `q` and `q + 2` above which a report is
/// flagged inconsistent.
pub const CONSISTENCY_TOL: f64 = 1e-3;

#[derive(Debug, Clone, PartialEq)]
pub enum QuadratureDomain {
    /// A coordinate box of a chart model.
    ChartBox {
        bounds: ChartBox,
        orders: [usize; 3],
    },
    /// All of `S³(r)` in Hopf coordinates
    /// `r(cos η cos ξ₁, cos η sin ξ₁, sin η cos ξ₂, sin η sin ξ₂)`.
    FullSphereHopf { orders: [usize; 3] },
}

impl QuadratureDomain {
    pub fn orders(&self) -> [usize; 3] {
        match self {
            QuadratureDomain::ChartBox { orders, .. }
            | QuadratureDomain::FullSphereHopf { orders } => *orders,
        }
    }

    fn with_orders(&self, orders: [usize; 3]) -> Self {
        match self {
            QuadratureDomain::ChartBox { bounds, .. } => QuadratureDomain::ChartBox {
                bounds: *bounds,
                orders,
            },
            QuadratureDomain::FullSphereHopf { .. } => QuadratureDomain::FullSphereHopf { orders },
        }
    }

    /// Quadrature nodes with weights that include the Riemannian density.
    pub fn nodes(&self, model: &Model) -> Result<Vec<(Vector, f64)>> {
        let orders = self.orders();
        if orders.contains(&0) {
            return Err(Error::InvalidParameter(
                "quadrature orders must be positive".into(),
            ));
        }
        match self {
            QuadratureDomain::ChartBox { bounds, .. } => {
                if model.embedded().is_some() {
                    return Err(Error::Unsupported(format!(
                        "chart boxes need a chart model, not `{}`",
                        model.name()
                    )));
                }
                if bounds.lo.iter().chain(&bounds.hi).any(|v| !v.is_finite()) {
                    return Err(Error::InvalidParameter(
                        "quadrature box must be bounded".into(),
                    ));
                }
                let axes = std::array::from_fn(|k| (bounds.lo[k], bounds.hi[k]));
                tensor_grid3(orders, axes)
                    .into_iter()
                    .map(|(p, w)| {
                        let x = Vector::from_column_slice(&p);
                        let g = chart_metric(model, &x)?;
                        Ok((x, w * g.determinant().sqrt()))
                    })
                    .collect()
            }
            QuadratureDomain::FullSphereHopf { .. } => {
                let r = full_sphere_radius(model)?;
                let axes = [(0.0, FRAC_PI_2), (0.0, TAU), (0.0, TAU)];
                Ok(tensor_grid3(orders, axes)
                    .into_iter()
                    .map(|([eta, xi1, xi2], w)| {
                        let (se, ce) = eta.sin_cos();
                        let x = Vector::from_column_slice(&[
                            r * ce * xi1.cos(),
                            r * ce * xi1.sin(),
                            r * se * xi2.cos(),
                            r * se * xi2.sin(),
                        ]);
                        (x, w * r.powi(3) * se * ce)
                    })
                    .collect())
            }
        }
    }
}

fn full_sphere_radius(model: &Model) -> Result<f64> {
    match model.embedded() {
        Some(m) if m.is_elliptic() && m.dim == 3 => Ok(m.radius),
        _ => Err(Error::Unsupported(format!(
            "full-sphere quadrature needs the 3-sphere, not `{}`",
            model.name()
        ))),
    }
}

fn chart_metric(model: &Model, x: &Vector) -> Result<nalgebra::Matrix3<f64>> {
    let p = Vector3::new(x[0], x[1], x[2]);
    match model {
        Model::Flat(c) => c.metric_at(&p),
        Model::HalfSpace(c) => c.metric_at(&p),
        Model::Conformal(c) => c.metric_at(&p),
        Model::Embedded(_) => Err(Error::Unsupported(
            "chart metric of an embedded model".into(),
        )),
    }
}

/// `vol_g(Ω)` in closed form where one is known.
pub fn analytic_base_volume(model: &Model, domain: &QuadratureDomain) -> Option<f64> {
    match (domain, model) {
        (QuadratureDomain::FullSphereHopf { .. }, _) => full_sphere_radius(model)
            .ok()
            .map(|r| 2.0 * PI * PI * r.powi(3)),
        (QuadratureDomain::ChartBox { bounds, .. }, Model::Flat(_)) => Some(bounds.volume()),
        (QuadratureDomain::ChartBox { bounds, .. }, Model::HalfSpace(c)) if bounds.lo[2] > 0.0 => {
            let area = (bounds.hi[0] - bounds.lo[0]) * (bounds.hi[1] - bounds.lo[1]);
            let (t0, t1) = (bounds.lo[2], bounds.hi[2]);
            Some(area * 0.5 * (1.0 / (t0 * t0) - 1.0 / (t1 * t1)) / c.metric.a.powf(1.5))
        }
        _ => None,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VolumeReport {
    pub volume: f64,
    /// `vol_g(Ω)` by the same rule.
    pub base_volume: f64,
    pub min_density: f64,
    pub max_density: f64,
    pub orders: [usize; 3],
    /// `|V(q + 2) − V(q)|`.
    pub error_estimate: f64,
    pub consistent: bool,
    /// Constant density times the closed-form `vol_g(Ω)`, when both are known.
    pub closed_form: Option<f64>,
}

struct RuleResult {
    volume: f64,
    base_volume: f64,
    min_density: f64,
    max_density: f64,
}

fn integrate<F: UnitVectorField + ?Sized>(
    field: &F,
    domain: &QuadratureDomain,
) -> Result<RuleResult> {
    let nodes = domain.nodes(field.model())?;
    let densities = nodes
        .par_iter()
        .map(|(x, _)| volume_density(field, x))
        .collect::<Result<Vec<f64>>>()?;
    let weighted: Vec<f64> = nodes
        .iter()
        .zip(&densities)
        .map(|((_, w), d)| w * d)
        .collect();
    let weights: Vec<f64> = nodes.iter().map(|(_, w)| *w).collect();
    Ok(RuleResult {
        volume: pairwise_sum(&weighted),
        base_volume: pairwise_sum(&weights),
        min_density: densities.iter().copied().fold(f64::INFINITY, f64::min),
        max_density: densities.iter().copied().fold(f64::NEG_INFINITY, f64::max),
    })
}

/// `∫_Ω √det(I + (∇X)ᵀ∇X) vol_M` at the domain orders, with an error
/// estimate from the rule two orders higher on every axis.
pub fn volume<F: UnitVectorField + ?Sized>(
    field: &F,
    domain: &QuadratureDomain,
) -> Result<VolumeReport> {
    let orders = domain.orders();
    let coarse = integrate(field, domain)?;
    let fine = integrate(field, &domain.with_orders(orders.map(|q| q + 2)))?;
    let error_estimate = (fine.volume - coarse.volume).abs();
    let closed_form = field
        .constant_density()
        .zip(analytic_base_volume(field.model(), domain))
        .map(|(d, v)| d * v);
    Ok(VolumeReport {
        volume: coarse.volume,
        base_volume: coarse.base_volume,
        min_density: coarse.min_density,
        max_density: coarse.max_density,
        orders,
        error_estimate,
        consistent: error_estimate <= CONSISTENCY_TOL * coarse.volume.abs().max(f64::MIN_POSITIVE),
        closed_form,
    })
}

/// `−∮_{∂Ω} X⌟vol_M` over the six faces of a chart box, each by an
/// `order × order` Gauss–Legendre rule.
pub fn boundary_flux<F: UnitVectorField + ?Sized>(
    field: &F,
    bounds: &ChartBox,
    order: usize,
) -> Result<f64> {
    let model = field.model();
    if model.embedded().is_some() {
        return Err(Error::Unsupported(format!(
            "boundary flux needs a chart model, not `{}`",
            model.name()
        )));
    }
    if order == 0 {
        return Err(Error::InvalidParameter(
            "quadrature order must be positive".into(),
        ));
    }
    let rule = GaussLegendre::new(order);
    let mut faces = Vec::with_capacity(6);
    for axis in 0..3 {
        let (j, k) = ((axis + 1) % 3, (axis + 2) % 3);
        let uj = rule.on_interval(bounds.lo[j], bounds.hi[j]);
        let uk = rule.on_interval(bounds.lo[k], bounds.hi[k]);
        for (side, level) in [(-1.0, bounds.lo[axis]), (1.0, bounds.hi[axis])] {
            let mut terms = Vec::with_capacity(order * order);
            for &(sj, wj) in &uj {
                for &(sk, wk) in &uk {
                    let mut x = Vector::zeros(3);
                    x[axis] = level;
                    x[j] = sj;
                    x[k] = sk;
                    let g = chart_metric(model, &x)?;
                    let xv = field.value(&x)?;
                    terms.push(wj * wk * side * g.determinant().sqrt() * xv[axis]);
                }
            }
            faces.push(pairwise_sum(&terms));
        }
    }
    Ok(-pairwise_sum(&faces))
}
