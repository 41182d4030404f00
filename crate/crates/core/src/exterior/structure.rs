//! The invariant forms of the adapted coframe.

use super::form::ConstantForm;
use super::index::MultiIndex;
use crate::scalar::Coefficient;

fn monomial<S: Coefficient>(indices: &[usize]) -> ConstantForm<S> {
    ConstantForm::basis(indices).expect("static multi-index")
}

/// Monomial `e^{ij}` for arbitrary order `i, j`, with the permutation sign.
fn ordered_pair<S: Coefficient>(i: usize, j: usize) -> ConstantForm<S> {
    if i < j {
        monomial(&[i, j])
    } else {
        -monomial(&[j, i])
    }
}

/// Contact form `θ = e⁰`.
pub fn theta<S: Coefficient>() -> ConstantForm<S> {
    monomial(&[0])
}

/// `dθ = e³¹ + e⁴²`.
pub fn dtheta<S: Coefficient>() -> ConstantForm<S> {
    ordered_pair(3, 1) + ordered_pair(4, 2)
}

/// `α₀ = e¹²`.
pub fn alpha0<S: Coefficient>() -> ConstantForm<S> {
    monomial(&[1, 2])
}

/// `α₁ = e¹⁴ − e²³`.
pub fn alpha1<S: Coefficient>() -> ConstantForm<S> {
    monomial(&[1, 4]) - monomial(&[2, 3])
}

/// `α₂ = e³⁴`.
pub fn alpha2<S: Coefficient>() -> ConstantForm<S> {
    monomial(&[3, 4])
}

/// Volume form `e⁰¹²³⁴` of `T¹M`.
pub fn volume<S: Coefficient>() -> ConstantForm<S> {
    ConstantForm::from_terms(5, [(MultiIndex::FULL, S::one())]).expect("degree 5")
}

/// `b₀α₀ + b₁α₁ + b₂α₂ + b₃dθ`.
pub fn two_form<S: Coefficient>(b: [S; 4]) -> ConstantForm<S> {
    let [b0, b1, b2, b3] = b;
    alpha0::<S>().scale(&b0)
        + alpha1::<S>().scale(&b1)
        + alpha2::<S>().scale(&b2)
        + dtheta::<S>().scale(&b3)
}

/// `θ ∧ (b₀α₀ + b₁α₁ + b₂α₂)`.
pub fn three_form<S: Coefficient>(b: [S; 3]) -> ConstantForm<S> {
    let [b0, b1, b2] = b;
    let omega = two_form([b0, b1, b2, S::zero()]);
    theta::<S>().wedge(&omega).expect("degree 3")
}
