//! Perturbed and random fields with analytic differentials.

use nalgebra::Vector3;

use super::{normalize_factor, normalize_with_differential, UnitVectorField};
use crate::rng::{uniform, StreamRng};
use crate::spaceform::{ChartBox, Geometry, Model, Vector};
use crate::{Error, Result};

/// A compactly supported or smooth bump function `b ≥ 0`.
#[derive(Debug, Clone)]
pub enum Bump {
    /// `((1 + ⟨n, x⟩/r)/2)²` on `S³(r)` for a unit pole `n`.
    Sphere { pole: Vector, radius: f64 },
    /// `∏ₖ 4(xₖ − loₖ)(hiₖ − xₖ)/(hiₖ − loₖ)²` inside a chart box, zero outside.
    Box(ChartBox),
}

impl Bump {
    pub fn value(&self, x: &Vector) -> f64 {
        match self {
            Bump::Sphere { pole, radius } => {
                let s = 0.5 * (1.0 + pole.dot(x) / radius);
                s * s
            }
            Bump::Box(bounds) => {
                if !bounds.contains(&Vector3::new(x[0], x[1], x[2])) {
                    return 0.0;
                }
                (0..3).map(|k| box_factor(bounds, k, x[k])).product()
            }
        }
    }

    /// `db(w)` at `x`.
    pub fn differential(&self, x: &Vector, w: &Vector) -> f64 {
        match self {
            Bump::Sphere { pole, radius } => {
                let s = 0.5 * (1.0 + pole.dot(x) / radius);
                s * pole.dot(w) / radius
            }
            Bump::Box(bounds) => {
                if !bounds.contains(&Vector3::new(x[0], x[1], x[2])) {
                    return 0.0;
                }
                let f: Vec<f64> = (0..3).map(|k| box_factor(bounds, k, x[k])).collect();
                (0..3)
                    .map(|k| {
                        let others: f64 = (0..3).filter(|&j| j != k).map(|j| f[j]).product();
                        let (lo, hi) = (bounds.lo[k], bounds.hi[k]);
                        let df = 4.0 * (hi + lo - 2.0 * x[k]) / ((hi - lo) * (hi - lo));
                        df * w[k] * others
                    })
                    .sum()
            }
        }
    }
}

fn box_factor(bounds: &ChartBox, k: usize, xk: f64) -> f64 {
    let (lo, hi) = (bounds.lo[k], bounds.hi[k]);
    4.0 * (xk - lo) * (hi - xk) / ((hi - lo) * (hi - lo))
}

/// Direction of a perturbation.
#[derive(Debug, Clone)]
pub enum Direction {
    /// Tangential projection `P_x(w)` of a fixed ambient vector, on embedded models.
    Tangential(Vector),
    /// A constant coordinate vector, on chart models.
    Constant(Vector),
}

/// `(X + ε·b·V)/‖X + ε·b·V‖`.
pub struct PerturbedField {
    base: Box<dyn UnitVectorField>,
    bump: Bump,
    direction: Direction,
    epsilon: f64,
}

impl PerturbedField {
    pub fn new(
        base: Box<dyn UnitVectorField>,
        bump: Bump,
        direction: Direction,
        epsilon: f64,
    ) -> Result<Self> {
        let model = base.model();
        let n = model.coord_dim();
        let (dir_ok, bump_ok) = match (&direction, &bump, model.embedded()) {
            (Direction::Tangential(w), Bump::Sphere { pole, .. }, Some(m)) => {
                (w.len() == n, pole.len() == n && m.is_elliptic())
            }
            (Direction::Constant(v), Bump::Box(_), None) => (v.len() == n, true),
            _ => (false, false),
        };
        if !(dir_ok && bump_ok) {
            return Err(Error::Unsupported(format!(
                "perturbation does not match model `{}`",
                model.name()
            )));
        }
        if !epsilon.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "epsilon must be finite, got {epsilon}"
            )));
        }
        Ok(PerturbedField {
            base,
            bump,
            direction,
            epsilon,
        })
    }

    fn direction_at(&self, x: &Vector) -> Vector {
        match &self.direction {
            Direction::Tangential(w) => self.base.model().project_tangent(x, w),
            Direction::Constant(v) => v.clone(),
        }
    }

    fn direction_differential(&self, x: &Vector, u: &Vector) -> Vector {
        match &self.direction {
            Direction::Tangential(w) => match self.base.model().embedded() {
                Some(m) => {
                    let xx = m.ambient(x, x);
                    -(x * m.ambient(u, w) + u * m.ambient(x, w)) / xx
                }
                None => Vector::zeros(w.len()),
            },
            Direction::Constant(v) => Vector::zeros(v.len()),
        }
    }

    fn raw(&self, x: &Vector) -> Result<Vector> {
        Ok(self.base.value(x)? + self.direction_at(x) * (self.epsilon * self.bump.value(x)))
    }
}

impl UnitVectorField for PerturbedField {
    fn model(&self) -> &Model {
        self.base.model()
    }

    fn name(&self) -> &str {
        "perturbed"
    }

    fn value(&self, x: &Vector) -> Result<Vector> {
        let y = self.raw(x)?;
        let n = normalize_factor(self.model(), x, &y)?;
        Ok(y / n)
    }

    fn differential(&self, x: &Vector, w: &Vector) -> Result<Vector> {
        let y = self.raw(x)?;
        let dy = self.base.differential(x, w)?
            + (self.direction_at(x) * self.bump.differential(x, w)
                + self.direction_differential(x, w) * self.bump.value(x))
                * self.epsilon;
        Ok(normalize_with_differential(self.model(), x, &y, &dy, w)?.1)
    }
}

/// One mode `amp·sin(⟨freq, x⟩ + phase)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrigMode {
    pub amplitude: Vector3<f64>,
    pub frequency: Vector3<f64>,
    pub phase: f64,
}

/// `Y/‖Y‖_g` with `Y = c + Σ amp·sin(⟨freq, x⟩ + phase)` on a chart model.
#[derive(Debug, Clone)]
pub struct TrigField {
    model: Model,
    offset: Vector3<f64>,
    modes: Vec<TrigMode>,
}

impl TrigField {
    pub fn new(model: &Model, offset: Vector3<f64>, modes: Vec<TrigMode>) -> Result<Self> {
        if model.embedded().is_some() {
            return Err(Error::Unsupported(format!(
                "trigonometric fields need a chart model, not `{}`",
                model.name()
            )));
        }
        Ok(TrigField {
            model: model.clone(),
            offset,
            modes,
        })
    }

    /// A random field whose raw form never vanishes: the offset has length 2
    /// and each of the three modes has components bounded by 0.3.
    pub fn random(model: &Model, rng: &mut StreamRng) -> Result<Self> {
        let dir = Vector3::from_fn(|_, _| uniform(rng, -1.0, 1.0));
        let offset = if dir.norm() > 1e-3 {
            dir.normalize() * 2.0
        } else {
            Vector3::new(2.0, 0.0, 0.0)
        };
        let modes = (0..3)
            .map(|_| TrigMode {
                amplitude: Vector3::from_fn(|_, _| uniform(rng, -0.3, 0.3)),
                frequency: Vector3::from_fn(|_, _| uniform(rng, -2.0, 2.0)),
                phase: uniform(rng, 0.0, std::f64::consts::TAU),
            })
            .collect();
        TrigField::new(model, offset, modes)
    }

    fn raw(&self, x: &Vector) -> (Vector, Vector3<f64>, Vec<f64>) {
        let p = Vector3::new(x[0], x[1], x[2]);
        let mut y = self.offset;
        let mut cosines = Vec::with_capacity(self.modes.len());
        for m in &self.modes {
            let arg = m.frequency.dot(&p) + m.phase;
            y += m.amplitude * arg.sin();
            cosines.push(arg.cos());
        }
        (Vector::from_column_slice(y.as_slice()), p, cosines)
    }
}

impl UnitVectorField for TrigField {
    fn model(&self) -> &Model {
        &self.model
    }

    fn name(&self) -> &str {
        "trig"
    }

    fn value(&self, x: &Vector) -> Result<Vector> {
        self.model.check_point(x)?;
        let (y, _, _) = self.raw(x);
        let n = normalize_factor(&self.model, x, &y)?;
        Ok(y / n)
    }

    fn differential(&self, x: &Vector, w: &Vector) -> Result<Vector> {
        let (y, _, cosines) = self.raw(x);
        let w3 = Vector3::new(w[0], w[1], w[2]);
        let dy = self
            .modes
            .iter()
            .zip(&cosines)
            .fold(Vector3::zeros(), |acc, (m, c)| {
                acc + m.amplitude * (c * m.frequency.dot(&w3))
            });
        let dy = Vector::from_column_slice(dy.as_slice());
        Ok(normalize_with_differential(&self.model, x, &y, &dy, w)?.1)
    }
}
