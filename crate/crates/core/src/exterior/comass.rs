//! Comass of constant 3-forms by multistart Riemannian ascent on the Stiefel
//! manifold `St(5,3)`.

use nalgebra::{Matrix3, SMatrix};
use rayon::prelude::*;

use super::form::ConstantForm;
use super::index::DIM;
use super::plane::{evaluate_on_plane, Frame53, ThreePlane};
use crate::rng::{gaussian_vector, stream, StreamRng};
use crate::scalar::Coefficient;
use crate::{Error, Result};

pub const DEFAULT_RESTARTS: usize = 64;
const GRADIENT_TOL: f64 = 1e-10;
const MAX_ITERATIONS: usize = 20_000;
const MIN_STEP: f64 = 1e-14;
const MAX_STEP: f64 = 4.0;
const ARMIJO: f64 = 0.25;

#[derive(Debug, Clone)]
pub struct ComassResult {
    pub value: f64,
    pub argmax: ThreePlane,
    /// Index of the restart that produced the maximum.
    pub restart: usize,
}

/// A degree-3 form as a list of `(rows, coefficient)` terms.
struct Terms(Vec<([usize; 3], f64)>);

impl Terms {
    fn new<S: Coefficient>(phi: &ConstantForm<S>) -> Self {
        Terms(
            phi.terms()
                .map(|(idx, c)| {
                    let rows: Vec<usize> = idx.indices().collect();
                    ([rows[0], rows[1], rows[2]], c.to_f64())
                })
                .collect(),
        )
    }

    fn block(c: &Frame53, rows: &[usize; 3]) -> Matrix3<f64> {
        Matrix3::from_fn(|r, k| c[(rows[r], k)])
    }

    fn value(&self, c: &Frame53) -> f64 {
        self.0
            .iter()
            .map(|(rows, coeff)| coeff * Self::block(c, rows).determinant())
            .sum()
    }

    /// Euclidean gradient with respect to the entries of `c`.
    fn gradient(&self, c: &Frame53) -> Frame53 {
        let mut g = Frame53::zeros();
        for (rows, coeff) in &self.0 {
            let m = Self::block(c, rows);
            for r in 0..3 {
                for k in 0..3 {
                    g[(rows[r], k)] += coeff * cofactor(&m, r, k);
                }
            }
        }
        g
    }
}

fn cofactor(m: &Matrix3<f64>, r: usize, k: usize) -> f64 {
    let (r1, r2) = others(r);
    let (k1, k2) = others(k);
    let minor = m[(r1, k1)] * m[(r2, k2)] - m[(r1, k2)] * m[(r2, k1)];
    if (r + k).is_multiple_of(2) {
        minor
    } else {
        -minor
    }
}

fn others(i: usize) -> (usize, usize) {
    match i {
        0 => (1, 2),
        1 => (0, 2),
        _ => (0, 1),
    }
}

/// Thin-QR retraction with columns signed so that `R` has a positive diagonal.
pub fn qr_retract(m: &Frame53) -> Frame53 {
    let qr = m.qr();
    let mut q: Frame53 = qr.q();
    let r = qr.r();
    for k in 0..3 {
        if r[(k, k)] < 0.0 {
            let col = -q.column(k);
            q.set_column(k, &col);
        }
    }
    q
}

/// Projection of an ambient matrix onto the tangent space of `St(5,3)` at `c`.
fn project_tangent(c: &Frame53, g: &Frame53) -> Frame53 {
    let ctg = c.transpose() * g;
    let sym = (ctg + ctg.transpose()) * 0.5;
    g - c * sym
}

pub fn random_frame(rng: &mut StreamRng) -> Frame53 {
    let v = gaussian_vector(rng, DIM * 3);
    qr_retract(&SMatrix::<f64, DIM, 3>::from_column_slice(v.as_slice()))
}

fn ascend(terms: &Terms, start: Frame53) -> (f64, Frame53) {
    let mut c = start;
    let mut value = terms.value(&c);
    // The form is odd under flipping a column, so maximising φ also maximises |φ|.
    if value < 0.0 {
        let col = -c.column(0);
        c.set_column(0, &col);
        value = -value;
    }
    let mut step = 0.5;
    for _ in 0..MAX_ITERATIONS {
        let grad = project_tangent(&c, &terms.gradient(&c));
        if grad.norm() < GRADIENT_TOL {
            break;
        }
        let candidate = qr_retract(&(c + grad * step));
        let cand_value = terms.value(&candidate);
        // Armijo sufficient increase; plain increase lets the step oscillate.
        if cand_value - value >= ARMIJO * step * grad.norm_squared() {
            c = candidate;
            value = cand_value;
            step = (step * 2.0).min(MAX_STEP);
        } else {
            step *= 0.5;
            if step < MIN_STEP {
                break;
            }
        }
    }
    (value, c)
}

/// Supremum of `|φ|` over oriented unit 3-planes, by `restarts` independent
/// ascents seeded from `seed`. Deterministic for a given seed regardless of
/// thread scheduling.
pub fn comass<S: Coefficient>(
    phi: &ConstantForm<S>,
    restarts: usize,
    seed: u64,
) -> Result<ComassResult> {
    if phi.degree() != 3 {
        return Err(Error::DegreeMismatch {
            expected: 3,
            found: phi.degree(),
        });
    }
    if restarts == 0 {
        return Err(Error::InvalidParameter(
            "restarts must be at least 1".into(),
        ));
    }
    let terms = Terms::new(phi);
    let runs: Vec<(f64, Frame53)> = (0..restarts)
        .into_par_iter()
        .map(|i| {
            let mut rng = stream(seed, i as u64);
            ascend(&terms, random_frame(&mut rng))
        })
        .collect();
    let (restart, (_, frame)) = runs
        .iter()
        .enumerate()
        .fold(
            None::<(usize, &(f64, Frame53))>,
            |best, (i, run)| match best {
                Some((_, b)) if b.0 >= run.0 => best,
                _ => Some((i, run)),
            },
        )
        .expect("at least one restart");
    let argmax = ThreePlane::new(qr_retract(frame))?;
    let value = evaluate_on_plane(phi, &argmax)?;
    Ok(ComassResult {
        value: value.abs(),
        argmax,
        restart,
    })
}
