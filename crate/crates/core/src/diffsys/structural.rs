use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::exterior::{alpha0, alpha1, alpha2, dtheta, theta, MultiIndex, RealForm};
use crate::rng::{gaussian_vector, stream};
use crate::spaceform::Geometry;
use crate::unit_tangent::{RetractionChart, UnitTangentPoint};
use crate::{Error, Result};

/// Steps used to measure the order of the finite-difference scheme.
pub const CONVERGENCE_STEPS: [f64; 3] = [4e-3, 2e-3, 1e-3];

/// Ratio between the outer step and the step of the inner difference that
/// approximates the chart differential. Keeps the inner error `O(h²)` with a
/// small constant.
const INNER_STEP_RATIO: f64 = 10.0;

/// Residuals at or below this are roundoff, and carry no convergence order.
const ORDER_FLOOR: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Equation {
    /// `d(θ) = e³¹ + e⁴²`.
    #[serde(rename = "dtheta")]
    DTheta,
    /// `dα₀ = θ∧α₁`.
    #[serde(rename = "dalpha0")]
    DAlpha0,
    /// `dα₁ = 2θ∧α₂ − r θ∧α₀`.
    #[serde(rename = "dalpha1")]
    DAlpha1,
    /// `dα₂ = −c θ∧α₁`, constant curvature only.
    #[serde(rename = "dalpha2")]
    DAlpha2,
    /// `d(θ∧α₀) = 0`.
    #[serde(rename = "closed-theta-alpha0")]
    ClosedThetaAlpha0,
    /// `d(θ∧α₁) = 0`.
    #[serde(rename = "closed-theta-alpha1")]
    ClosedThetaAlpha1,
}

impl Equation {
    pub const CONSTANT_CURVATURE: [Equation; 4] = [
        Equation::DTheta,
        Equation::DAlpha0,
        Equation::DAlpha1,
        Equation::DAlpha2,
    ];
    pub const GENERAL: [Equation; 2] = [Equation::DAlpha0, Equation::DAlpha1];

    pub fn id(self) -> &'static str {
        match self {
            Equation::DTheta => "dtheta",
            Equation::DAlpha0 => "dalpha0",
            Equation::DAlpha1 => "dalpha1",
            Equation::DAlpha2 => "dalpha2",
            Equation::ClosedThetaAlpha0 => "closed-theta-alpha0",
            Equation::ClosedThetaAlpha1 => "closed-theta-alpha1",
        }
    }

    pub fn from_id(id: &str) -> Result<Self> {
        [
            Equation::DTheta,
            Equation::DAlpha0,
            Equation::DAlpha1,
            Equation::DAlpha2,
            Equation::ClosedThetaAlpha0,
            Equation::ClosedThetaAlpha1,
        ]
        .into_iter()
        .find(|e| e.id() == id)
        .ok_or_else(|| Error::InvalidParameter(format!("unknown equation `{id}`")))
    }

    /// Whether the right side is known for general metrics.
    pub fn holds_for_general_metrics(self) -> bool {
        self != Equation::DAlpha2
    }

    /// The form that is differentiated.
    pub fn form(self) -> RealForm {
        let th = theta::<f64>();
        match self {
            Equation::DTheta => th,
            Equation::DAlpha0 => alpha0(),
            Equation::DAlpha1 => alpha1(),
            Equation::DAlpha2 => alpha2(),
            Equation::ClosedThetaAlpha0 => th.wedge(&alpha0()).expect("degree 3"),
            Equation::ClosedThetaAlpha1 => th.wedge(&alpha1()).expect("degree 3"),
        }
    }

    /// The right side at a point where `r = Ric(y, y)`.
    pub fn rhs(self, r: f64) -> RealForm {
        let th = theta::<f64>();
        let wedge = |f: RealForm| th.wedge(&f).expect("degree 3");
        match self {
            Equation::DTheta => dtheta(),
            Equation::DAlpha0 => wedge(alpha1()),
            Equation::DAlpha1 => wedge(alpha2()).scale(&2.0) - wedge(alpha0()).scale(&r),
            Equation::DAlpha2 => wedge(alpha1()).scale(&(-r / 2.0)),
            Equation::ClosedThetaAlpha0 | Equation::ClosedThetaAlpha1 => RealForm::zero(4),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StructuralReport {
    pub equation: String,
    pub model: String,
    pub h: f64,
    pub samples: usize,
    pub max_residual: f64,
    pub convergence_order: Option<f64>,
}

/// Frame components of `dφ_t(∂ₐ)` at `t = ±h·eₐ` for each direction `a`.
struct ChartJacobians {
    h: f64,
    plus: [[[f64; 5]; 5]; 5],
    minus: [[[f64; 5]; 5]; 5],
}

impl ChartJacobians {
    fn new<G: Geometry + ?Sized>(geom: &G, chart: &RetractionChart, h: f64) -> Result<Self> {
        let k = h / INNER_STEP_RATIO;
        let at = |t: [f64; 5]| -> Result<[[f64; 5]; 5]> {
            let (p, cols) = chart.differential(geom, &t, k)?;
            let frame = chart.frame_at(geom, &p)?;
            let mut out = [[0.0; 5]; 5];
            for (o, c) in out.iter_mut().zip(&cols) {
                *o = frame.coordinates(geom, c)?;
            }
            Ok(out)
        };
        let mut plus = [[[0.0; 5]; 5]; 5];
        let mut minus = [[[0.0; 5]; 5]; 5];
        for a in 0..5 {
            let mut t = [0.0; 5];
            t[a] = h;
            plus[a] = at(t)?;
            t[a] = -h;
            minus[a] = at(t)?;
        }
        Ok(ChartJacobians { h, plus, minus })
    }

    /// Central-difference exterior derivative of the pulled-back form at the
    /// chart centre, in the coframe there.
    fn derivative(&self, form: &RealForm) -> Result<RealForm> {
        let coeff = |jac: &[[f64; 5]; 5], idx: MultiIndex| -> Result<f64> {
            let cols: Vec<[f64; 5]> = idx.indices().map(|i| jac[i]).collect();
            form.evaluate(&cols)
        };
        let k = form.degree() + 1;
        let mut terms = Vec::new();
        for target in MultiIndex::all_of_degree(k) {
            let mut value = 0.0;
            for (m, j) in target.indices().enumerate() {
                let rest = target.without(j);
                let d =
                    (coeff(&self.plus[j], rest)? - coeff(&self.minus[j], rest)?) / (2.0 * self.h);
                value += if m % 2 == 0 { d } else { -d };
            }
            terms.push((target, value));
        }
        RealForm::from_terms(k, terms)
    }
}

/// Finite-difference `dβ` at the centre of a retraction chart, for a form `β`
/// with constant coefficients in adapted frames.
pub fn fd_exterior_derivative<G: Geometry + ?Sized>(
    geom: &G,
    chart: &RetractionChart,
    form: &RealForm,
    h: f64,
) -> Result<RealForm> {
    ChartJacobians::new(geom, chart, h)?.derivative(form)
}

fn max_coefficient(form: &RealForm) -> f64 {
    form.terms().map(|(_, c)| c.abs()).fold(0.0, f64::max)
}

/// `Ric(y, y)`, exact when the curvature is constant.
fn ricci_yy<G: Geometry + ?Sized>(geom: &G, p: &UnitTangentPoint) -> Result<f64> {
    match geom.constant_curvature() {
        Some(c) => Ok((geom.dim() as f64 - 1.0) * c),
        None => geom.ricci(&p.x, &p.y, &p.y),
    }
}

fn sample_residual<G: Geometry + ?Sized>(
    geom: &G,
    eq: Equation,
    h: f64,
    seed: u64,
    index: usize,
) -> Result<f64> {
    let mut rng = stream(seed, index as u64);
    let p = UnitTangentPoint::sample(geom, &mut rng);
    let axis = gaussian_vector(&mut rng, geom.coord_dim());
    let chart = RetractionChart::new(geom, &p, &axis)?;
    let lhs = fd_exterior_derivative(geom, &chart, &eq.form(), h)?;
    let rhs = eq.rhs(ricci_yy(geom, &p)?);
    Ok(max_coefficient(&(lhs - rhs)))
}

/// Largest residual of `eq` over `samples` random points of `T¹M`.
pub fn structural_residual<G: Geometry + ?Sized>(
    geom: &G,
    eq: Equation,
    samples: usize,
    h: f64,
    seed: u64,
) -> Result<f64> {
    if !(h > 0.0) || samples == 0 {
        return Err(Error::InvalidParameter(
            "step and sample count must be positive".into(),
        ));
    }
    if !eq.holds_for_general_metrics() && geom.constant_curvature().is_none() {
        return Err(Error::Unsupported(format!(
            "{} is only available in constant curvature",
            eq.id()
        )));
    }
    let residuals: Vec<Result<f64>> = (0..samples)
        .into_par_iter()
        .map(|i| sample_residual(geom, eq, h, seed, i))
        .collect();
    residuals
        .into_iter()
        .try_fold(0.0_f64, |acc, r| r.map(|r| acc.max(r)))
}

/// Least-squares slope of `log residual` against `log h`.
pub fn convergence_order(steps: &[f64], residuals: &[f64]) -> Option<f64> {
    if steps.len() < 2 || residuals.iter().any(|&r| !(r > ORDER_FLOOR)) {
        return None;
    }
    let xs: Vec<f64> = steps.iter().map(|h| h.ln()).collect();
    let ys: Vec<f64> = residuals.iter().map(|r| r.ln()).collect();
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    Some(sxy / sxx)
}

fn report<G: Geometry + ?Sized>(
    geom: &G,
    eq: Equation,
    samples: usize,
    h: f64,
    seed: u64,
) -> Result<StructuralReport> {
    let max_residual = structural_residual(geom, eq, samples, h, seed)?;
    let residuals = CONVERGENCE_STEPS
        .iter()
        .map(|&s| structural_residual(geom, eq, samples, s, seed))
        .collect::<Result<Vec<f64>>>()?;
    Ok(StructuralReport {
        equation: eq.id().to_string(),
        model: geom.name().to_string(),
        h,
        samples,
        max_residual,
        convergence_order: convergence_order(&CONVERGENCE_STEPS, &residuals),
    })
}

/// Residual of a constant-curvature structure equation, with `c` taken from
/// the model.
pub fn structural_residual_constant_curvature<G: Geometry + ?Sized>(
    geom: &G,
    eq: Equation,
    samples: usize,
    h: f64,
    seed: u64,
) -> Result<StructuralReport> {
    if geom.constant_curvature().is_none() {
        return Err(Error::Unsupported(format!(
            "{} does not have constant curvature",
            geom.name()
        )));
    }
    report(geom, eq, samples, h, seed)
}

/// Residual of a structure equation valid on every oriented 3-manifold, with
/// `r(u) = Ric(u, u)` from the metric.
pub fn structural_residual_general<G: Geometry + ?Sized>(
    geom: &G,
    eq: Equation,
    samples: usize,
    h: f64,
    seed: u64,
) -> Result<StructuralReport> {
    if !eq.holds_for_general_metrics() {
        return Err(Error::Unsupported(format!(
            "{} is not available for general metrics",
            eq.id()
        )));
    }
    report(geom, eq, samples, h, seed)
}
