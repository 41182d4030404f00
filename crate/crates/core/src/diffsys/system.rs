use serde::Serialize;

use crate::exterior::{alpha0, alpha1, alpha2, dtheta, theta, RealForm};
use crate::spaceform::Geometry;
use crate::unit_tangent::{AdaptedFrame, DoubleTangentVector};
use crate::Result;

/// `θ(w₁), θ(w₂)` and the 2-forms evaluated on `(w₁, w₂)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SystemValues {
    pub theta: [f64; 2],
    pub dtheta: f64,
    pub alpha0: f64,
    pub alpha1: f64,
    pub alpha2: f64,
}

pub fn evaluate_system<G: Geometry + ?Sized>(
    geom: &G,
    frame: &AdaptedFrame,
    w1: &DoubleTangentVector,
    w2: &DoubleTangentVector,
) -> Result<SystemValues> {
    let c1 = frame.coordinates(geom, w1)?;
    let c2 = frame.coordinates(geom, w2)?;
    let two = |f: RealForm| f.evaluate(&[c1, c2]);
    Ok(SystemValues {
        theta: [
            theta::<f64>().evaluate(&[c1])?,
            theta::<f64>().evaluate(&[c2])?,
        ],
        dtheta: two(dtheta())?,
        alpha0: two(alpha0())?,
        alpha1: two(alpha1())?,
        alpha2: two(alpha2())?,
    })
}

/// Coefficients `(ρ₃, ρ₄)` of `ρ = ρ₃e³ + ρ₄e⁴`, which equal
/// `(−R₂₀₁₂, R₁₀₁₂)` with `R_abcd = ⟨R(E_a,E_b)E_d, E_c⟩` on the projected
/// frame `(E₀, E₁, E₂) = (y, f₁, f₂)`.
pub fn rho_form<G: Geometry + ?Sized>(geom: &G, frame: &AdaptedFrame) -> Result<[f64; 2]> {
    let x = &frame.base.x;
    let [e0, e1, e2] = &frame.tangent;
    let r = |a: &_, b: &_, c: &_, d: &_| -> Result<f64> {
        Ok(geom.inner(x, &geom.curvature(x, a, b, d)?, c))
    };
    Ok([-r(e2, e0, e1, e2)?, r(e1, e0, e1, e2)?])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::stream;
    use crate::spaceform::EmbeddedSpaceForm;
    use crate::unit_tangent::{adapted_frame, UnitTangentPoint};

    #[test]
    fn values_on_frame_vectors() {
        let m = EmbeddedSpaceForm::sphere(1.0, 3).unwrap();
        let mut rng = stream(1, 0);
        let p = UnitTangentPoint::sample(&m, &mut rng);
        let f = adapted_frame(&m, &p, &crate::rng::gaussian_vector(&mut rng, 4)).unwrap();
        let v = evaluate_system(&m, &f, &f.e[0], &f.e[1]).unwrap();
        assert!((v.theta[0] - 1.0).abs() < 1e-12 && v.theta[1].abs() < 1e-12);
        let v = evaluate_system(&m, &f, &f.e[1], &f.e[2]).unwrap();
        assert!((v.alpha0 - 1.0).abs() < 1e-12);
        let v = evaluate_system(&m, &f, &f.e[3], &f.e[4]).unwrap();
        assert!((v.alpha2 - 1.0).abs() < 1e-12);
        let a = evaluate_system(&m, &f, &f.e[1], &f.e[4]).unwrap().alpha1;
        let b = evaluate_system(&m, &f, &f.e[2], &f.e[3]).unwrap().alpha1;
        assert!((a - 1.0).abs() < 1e-12 && (b + 1.0).abs() < 1e-12);
        let v = evaluate_system(&m, &f, &f.e[3], &f.e[1]).unwrap();
        assert!((v.dtheta - 1.0).abs() < 1e-12);
    }

    #[test]
    fn rho_vanishes_in_constant_curvature() {
        let m = EmbeddedSpaceForm::hyperbolic(1.0, 3).unwrap();
        let mut rng = stream(2, 0);
        let p = UnitTangentPoint::sample(&m, &mut rng);
        let f = adapted_frame(&m, &p, &crate::rng::gaussian_vector(&mut rng, 4)).unwrap();
        let rho = rho_form(&m, &f).unwrap();
        assert!(rho[0].abs() < 1e-14 && rho[1].abs() < 1e-14);
    }
}
