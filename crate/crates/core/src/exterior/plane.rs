use nalgebra::SMatrix;

use super::form::ConstantForm;
use super::index::DIM;
use crate::scalar::Coefficient;
use crate::{Error, Result};

pub type Frame53 = SMatrix<f64, DIM, 3>;

/// Tolerance on `CᵀC − I` for a plane basis.
pub const ORTHONORMAL_TOL: f64 = 1e-12;

/// An oriented 3-plane in the 5-dimensional frame space, given by an
/// orthonormal basis.
#[derive(Debug, Clone, PartialEq)]
pub struct ThreePlane {
    basis: Frame53,
}

impl ThreePlane {
    pub fn new(basis: Frame53) -> Result<Self> {
        let residual = orthonormality_residual(&basis);
        if residual > ORTHONORMAL_TOL {
            return Err(Error::NotOrthonormal { residual });
        }
        Ok(ThreePlane { basis })
    }

    /// The plane spanned by three coordinate axes, in the given order.
    pub fn from_axes(axes: [usize; 3]) -> Result<Self> {
        let mut basis = Frame53::zeros();
        for (col, &axis) in axes.iter().enumerate() {
            if axis >= DIM {
                return Err(Error::InvalidIndex(axes.to_vec()));
            }
            basis[(axis, col)] = 1.0;
        }
        Self::new(basis)
    }

    pub fn basis(&self) -> &Frame53 {
        &self.basis
    }

    pub fn columns(&self) -> [[f64; DIM]; 3] {
        std::array::from_fn(|c| std::array::from_fn(|r| self.basis[(r, c)]))
    }
}

pub fn orthonormality_residual(basis: &Frame53) -> f64 {
    let gram = basis.transpose() * basis;
    (gram - SMatrix::<f64, 3, 3>::identity()).abs().max()
}

/// `φ(c₁, c₂, c₃)` on the ordered basis of the plane.
pub fn evaluate_on_plane<S: Coefficient>(phi: &ConstantForm<S>, plane: &ThreePlane) -> Result<f64> {
    if phi.degree() != 3 {
        return Err(Error::DegreeMismatch {
            expected: 3,
            found: phi.degree(),
        });
    }
    phi.evaluate(&plane.columns())
}
