//! Independent oracles shared by the integration suites.
#![allow(dead_code, clippy::needless_range_loop)]

use minvol::exterior::RealForm;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

pub type Columns = [[f64; 5]; 3];

/// Gram–Schmidt on three vectors of `ℝ⁵`.
pub fn orthonormalize(mut c: Columns) -> Option<Columns> {
    for i in 0..3 {
        for j in 0..i {
            let d: f64 = (0..5).map(|k| c[i][k] * c[j][k]).sum();
            for k in 0..5 {
                c[i][k] -= d * c[j][k];
            }
        }
        let n = c[i].iter().map(|v| v * v).sum::<f64>().sqrt();
        if n < 1e-9 {
            return None;
        }
        for v in c[i].iter_mut() {
            *v /= n;
        }
    }
    Some(c)
}

fn det3(m: [[f64; 3]; 3]) -> f64 {
    m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
        - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
}

/// `φ(c₁, c₂, c₃)` for a 3-form with sorted index triples.
pub fn eval3(phi: &RealForm, c: &Columns) -> f64 {
    phi.terms()
        .map(|(idx, coef)| {
            let rows: Vec<usize> = idx.indices().collect();
            let m = std::array::from_fn(|a| std::array::from_fn(|b| c[b][rows[a]]));
            coef * det3(m)
        })
        .sum()
}

fn gaussian_columns(rng: &mut ChaCha8Rng) -> Columns {
    std::array::from_fn(|_| std::array::from_fn(|_| rng.sample(StandardNormal)))
}

/// Maximum of `|φ|` over uniformly random orthonormal 3-frames.
pub fn sampled_comass(phi: &RealForm, samples: usize, seed: u64) -> f64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut best = 0.0_f64;
    for _ in 0..samples {
        if let Some(c) = orthonormalize(gaussian_columns(&mut rng)) {
            best = best.max(eval3(phi, &c).abs());
        }
    }
    best
}

/// Derivative-free random search: a tenth of the budget samples uniformly,
/// the rest perturbs the incumbent frame with a geometrically shrinking
/// Gaussian step.
pub fn random_search_comass(phi: &RealForm, samples: usize, seed: u64) -> f64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let uniform = samples / 10;
    let mut best = 0.0_f64;
    let mut incumbent = orthonormalize([
        [1.0, 0.0, 0.0, 0.0, 0.0],
        [0.0, 1.0, 0.0, 0.0, 0.0],
        [0.0, 0.0, 1.0, 0.0, 0.0],
    ])
    .unwrap();
    for _ in 0..uniform {
        if let Some(c) = orthonormalize(gaussian_columns(&mut rng)) {
            let v = eval3(phi, &c).abs();
            if v > best {
                best = v;
                incumbent = c;
            }
        }
    }
    let local = samples - uniform;
    let (sigma_hi, sigma_lo): (f64, f64) = (0.3, 1e-6);
    for s in 0..local {
        let sigma = sigma_hi * (sigma_lo / sigma_hi).powf(s as f64 / local as f64);
        let noise = gaussian_columns(&mut rng);
        let trial =
            std::array::from_fn(|i| std::array::from_fn(|k| incumbent[i][k] + sigma * noise[i][k]));
        if let Some(c) = orthonormalize(trial) {
            let v = eval3(phi, &c).abs();
            if v > best {
                best = v;
                incumbent = c;
            }
        }
    }
    best
}

/// Composite Simpson rule with `n` (even) panels.
pub fn simpson<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, n: usize) -> f64 {
    let n = n + n % 2;
    let h = (b - a) / n as f64;
    let inner: f64 = (1..n)
        .map(|i| f(a + i as f64 * h) * if i % 2 == 1 { 4.0 } else { 2.0 })
        .sum();
    (f(a) + f(b) + inner) * h / 3.0
}

/// Christoffel symbols `Γᵏᵢⱼ = δᵏᵢ∂ⱼf + δᵏⱼ∂ᵢf − δᵢⱼ∂ₖf` of `e^{2f}·I` for
/// `f = A·x¹`, indexed `[k][i][j]`.
pub fn conformal_christoffels(amplitude: f64) -> [[[f64; 3]; 3]; 3] {
    let df = [amplitude, 0.0, 0.0];
    let delta = |a: usize, b: usize| if a == b { 1.0 } else { 0.0 };
    std::array::from_fn(|k| {
        std::array::from_fn(|i| {
            std::array::from_fn(|j| delta(k, i) * df[j] + delta(k, j) * df[i] - delta(i, j) * df[k])
        })
    })
}
