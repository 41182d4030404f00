use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use super::{Geometry, Vector, CONSTRAINT_TOL};
use crate::rng::{gaussian_vector, uniform, StreamRng};
use crate::{Error, Result};

/// Sign of the first coordinate in the ambient form
/// `±(dx¹)² + (dx²)² + … + (dxᵐ⁺¹)²`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Signature {
    Euclidean,
    Lorentzian,
}

impl Signature {
    pub fn sign(self) -> f64 {
        match self {
            Signature::Euclidean => 1.0,
            Signature::Lorentzian => -1.0,
        }
    }
}

/// `Sᵐ(r) = {⟨x,x⟩₊ = r²}` or `Hᵐ(r) = {⟨x,x⟩₋ = −r², x¹ > 0}` in `ℝᵐ⁺¹`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EmbeddedSpaceForm {
    pub signature: Signature,
    pub radius: f64,
    pub dim: usize,
}

/// Half-width of the hyperbolic sampling region in the spatial coordinates.
const HYPERBOLIC_SAMPLE_EXTENT: f64 = 1.5;

impl EmbeddedSpaceForm {
    pub fn new(signature: Signature, radius: f64, dim: usize) -> Result<Self> {
        if !(radius.is_finite() && radius > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "radius must be positive, got {radius}"
            )));
        }
        if dim < 2 {
            return Err(Error::InvalidParameter(format!(
                "dimension must be at least 2, got {dim}"
            )));
        }
        Ok(EmbeddedSpaceForm {
            signature,
            radius,
            dim,
        })
    }

    pub fn sphere(radius: f64, dim: usize) -> Result<Self> {
        Self::new(Signature::Euclidean, radius, dim)
    }

    pub fn hyperbolic(radius: f64, dim: usize) -> Result<Self> {
        Self::new(Signature::Lorentzian, radius, dim)
    }

    pub fn sign(&self) -> f64 {
        self.signature.sign()
    }

    pub fn is_elliptic(&self) -> bool {
        self.signature == Signature::Euclidean
    }

    /// The ambient form `⟨u,v⟩±`.
    pub fn ambient(&self, u: &Vector, v: &Vector) -> f64 {
        self.sign() * u[0] * v[0] + u.rows(1, u.len() - 1).dot(&v.rows(1, v.len() - 1))
    }

    pub fn curvature_constant(&self) -> f64 {
        self.sign() / (self.radius * self.radius)
    }

    fn check_len(&self, v: &Vector) -> Result<()> {
        if v.len() != self.dim + 1 {
            return Err(Error::Dimension {
                expected: self.dim + 1,
                found: v.len(),
            });
        }
        Ok(())
    }
}

impl Geometry for EmbeddedSpaceForm {
    fn name(&self) -> &'static str {
        if self.is_elliptic() {
            "sphere"
        } else {
            "hyperbolic-quadric"
        }
    }

    fn dim(&self) -> usize {
        self.dim
    }

    fn coord_dim(&self) -> usize {
        self.dim + 1
    }

    fn inner(&self, _x: &Vector, u: &Vector, v: &Vector) -> f64 {
        self.ambient(u, v)
    }

    fn check_point(&self, x: &Vector) -> Result<()> {
        self.check_len(x)?;
        let r2 = self.radius * self.radius;
        let residual = (self.ambient(x, x) - self.sign() * r2).abs() / r2;
        if !(residual <= CONSTRAINT_TOL) {
            return Err(Error::OffManifold { residual });
        }
        if !self.is_elliptic() && x[0] <= CONSTRAINT_TOL {
            return Err(Error::SheetViolation { x1: x[0] });
        }
        Ok(())
    }

    fn tangent_residual(&self, x: &Vector, u: &Vector) -> f64 {
        self.ambient(x, u).abs() / self.radius
    }

    fn project_point(&self, x: &Vector) -> Result<Vector> {
        self.check_len(x)?;
        if self.is_elliptic() {
            let n = x.norm();
            if n == 0.0 {
                return Err(Error::OffManifold { residual: 1.0 });
            }
            Ok(x * (self.radius / n))
        } else {
            if x[0] <= 0.0 {
                return Err(Error::SheetViolation { x1: x[0] });
            }
            let mut out = x.clone();
            let spatial = x.rows(1, self.dim).norm_squared();
            out[0] = (self.radius * self.radius + spatial).sqrt();
            Ok(out)
        }
    }

    fn project_tangent(&self, x: &Vector, u: &Vector) -> Vector {
        u - x * (self.ambient(x, u) / self.ambient(x, x))
    }

    fn connection_term(&self, x: &Vector, u: &Vector, w: &Vector) -> Result<Vector> {
        Ok(x * (self.sign() * self.ambient(u, w) / (self.radius * self.radius)))
    }

    fn curvature(&self, _x: &Vector, a: &Vector, b: &Vector, c: &Vector) -> Result<Vector> {
        let k = self.curvature_constant();
        Ok((a * self.ambient(b, c) - b * self.ambient(a, c)) * k)
    }

    fn ricci(&self, _x: &Vector, u: &Vector, w: &Vector) -> Result<f64> {
        Ok((self.dim as f64 - 1.0) * self.curvature_constant() * self.ambient(u, w))
    }

    fn constant_curvature(&self) -> Option<f64> {
        Some(self.curvature_constant())
    }

    fn metric_derivative(
        &self,
        _x: &Vector,
        _dir: &Vector,
        _u: &Vector,
        _v: &Vector,
    ) -> Result<f64> {
        Ok(0.0)
    }

    fn sample_point(&self, rng: &mut StreamRng) -> Vector {
        let n = self.dim + 1;
        if self.is_elliptic() {
            loop {
                let g = gaussian_vector(rng, n);
                let len = g.norm();
                if len > 1e-6 {
                    return g * (self.radius / len);
                }
            }
        }
        let mut x = Vector::zeros(n);
        for i in 1..n {
            x[i] = uniform(rng, -HYPERBOLIC_SAMPLE_EXTENT, HYPERBOLIC_SAMPLE_EXTENT) * self.radius;
        }
        x[0] = (self.radius * self.radius + x.rows(1, self.dim).norm_squared()).sqrt();
        x
    }

    fn orientation(&self, x: &Vector, basis: &[Vector]) -> f64 {
        let n = self.dim + 1;
        let m = DMatrix::from_fn(n, n, |r, c| if c == 0 { x[r] } else { basis[c - 1][r] });
        m.determinant().signum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::stream;

    #[test]
    fn samples_lie_on_the_quadric() {
        for m in [
            EmbeddedSpaceForm::sphere(2.0, 3).unwrap(),
            EmbeddedSpaceForm::hyperbolic(1.5, 3).unwrap(),
        ] {
            let mut rng = stream(1, 0);
            for _ in 0..100 {
                let x = m.sample_point(&mut rng);
                m.check_point(&x).unwrap();
            }
        }
    }

    #[test]
    fn rejects_off_manifold_and_wrong_sheet() {
        let s = EmbeddedSpaceForm::sphere(1.0, 3).unwrap();
        let err = s
            .check_point(&Vector::from_vec(vec![2.0, 0.0, 0.0, 0.0]))
            .unwrap_err();
        assert!(matches!(err, Error::OffManifold { .. }));
        let h = EmbeddedSpaceForm::hyperbolic(1.0, 3).unwrap();
        let err = h
            .check_point(&Vector::from_vec(vec![-1.0, 0.0, 0.0, 0.0]))
            .unwrap_err();
        assert!(matches!(err, Error::SheetViolation { .. }));
    }

    #[test]
    fn connection_output_is_tangent() {
        for m in [
            EmbeddedSpaceForm::sphere(1.3, 3).unwrap(),
            EmbeddedSpaceForm::hyperbolic(0.7, 3).unwrap(),
        ] {
            let mut rng = stream(2, 0);
            for _ in 0..50 {
                let x = m.sample_point(&mut rng);
                let u = m.sample_unit_tangent(&x, &mut rng);
                let w = m.sample_unit_tangent(&x, &mut rng);
                // dW(u) for the field W(z) = P_z(w) at x: −(⟨z,w⟩/⟨z,z⟩)z differentiated.
                let dw = -(&x * m.ambient(&u, &w) + &u * m.ambient(&x, &w)) / m.ambient(&x, &x);
                let nabla = super::super::covariant_derivative(&m, &x, &u, &w, &dw).unwrap();
                assert!(m.ambient(&x, &nabla).abs() < 1e-10);
            }
        }
    }
}
