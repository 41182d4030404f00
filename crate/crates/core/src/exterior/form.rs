use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use super::index::{MultiIndex, DIM};
use crate::scalar::{Coefficient, Rational};
use crate::{Error, Result};

/// A homogeneous form with constant coefficients over the coframe `e⁰…e⁴`.
///
/// Zero coefficients are never stored, so structural equality is equality of
/// forms.
#[derive(Clone, PartialEq)]
pub struct ConstantForm<S: Coefficient> {
    degree: usize,
    coeffs: BTreeMap<MultiIndex, S>,
}

pub type RationalForm = ConstantForm<Rational>;
pub type RealForm = ConstantForm<f64>;

impl<S: Coefficient> ConstantForm<S> {
    pub fn zero(degree: usize) -> Self {
        assert!(degree <= DIM, "form degree {degree} exceeds {DIM}");
        ConstantForm {
            degree,
            coeffs: BTreeMap::new(),
        }
    }

    pub fn one() -> Self {
        Self::zero(0).with_term(MultiIndex::EMPTY, S::one())
    }

    /// The basis monomial `e^{i₁…i_k}`.
    pub fn basis(indices: &[usize]) -> Result<Self> {
        let idx = MultiIndex::new(indices)?;
        Ok(Self::zero(idx.degree()).with_term(idx, S::one()))
    }

    pub fn from_terms<I>(degree: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (MultiIndex, S)>,
    {
        let mut form = Self::zero(degree);
        for (idx, c) in terms {
            if idx.degree() != degree {
                return Err(Error::DegreeMismatch {
                    expected: degree,
                    found: idx.degree(),
                });
            }
            form.add_term(idx, c);
        }
        Ok(form)
    }

    fn with_term(mut self, idx: MultiIndex, c: S) -> Self {
        self.add_term(idx, c);
        self
    }

    fn add_term(&mut self, idx: MultiIndex, c: S) {
        debug_assert_eq!(idx.degree(), self.degree);
        let sum = match self.coeffs.remove(&idx) {
            Some(old) => old + c,
            None => c,
        };
        if !sum.is_zero() {
            self.coeffs.insert(idx, sum);
        }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coefficient(&self, idx: MultiIndex) -> S {
        self.coeffs.get(&idx).cloned().unwrap_or_else(S::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (MultiIndex, &S)> {
        self.coeffs.iter().map(|(k, v)| (*k, v))
    }

    pub fn scale(&self, c: &S) -> Self {
        let mut out = Self::zero(self.degree);
        for (idx, v) in &self.coeffs {
            out.add_term(*idx, v.clone() * c.clone());
        }
        out
    }

    pub fn wedge(&self, other: &Self) -> Result<Self> {
        if self.degree + other.degree > DIM {
            return Err(Error::DegreeOverflow {
                lhs: self.degree,
                rhs: other.degree,
            });
        }
        let mut out = Self::zero(self.degree + other.degree);
        for (a, ca) in &self.coeffs {
            for (b, cb) in &other.coeffs {
                if !a.is_disjoint(*b) {
                    continue;
                }
                let prod = ca.clone() * cb.clone();
                let term = if a.merge_sign(*b) > 0 { prod } else { -prod };
                out.add_term(a.union(*b), term);
            }
        }
        Ok(out)
    }

    /// Hodge star for the Euclidean metric on the coframe with orientation
    /// `e⁰¹²³⁴`: `e^I ∧ ⋆e^I = vol`.
    pub fn hodge_star(&self) -> Self {
        let mut out = Self::zero(DIM - self.degree);
        for (idx, c) in &self.coeffs {
            let comp = idx.complement();
            let term = if idx.merge_sign(comp) > 0 {
                c.clone()
            } else {
                -c.clone()
            };
            out.add_term(comp, term);
        }
        out
    }

    /// Pointwise inner product; the monomials `e^I` are orthonormal.
    pub fn inner(&self, other: &Self) -> S {
        if self.degree != other.degree {
            return S::zero();
        }
        self.coeffs
            .iter()
            .filter_map(|(idx, c)| other.coeffs.get(idx).map(|d| c.clone() * d.clone()))
            .fold(S::zero(), |acc, x| acc + x)
    }

    pub fn norm(&self) -> f64 {
        self.coeffs
            .values()
            .map(|c| c.to_f64().powi(2))
            .sum::<f64>()
            .sqrt()
    }

    pub fn to_real(&self) -> RealForm {
        let mut out = RealForm::zero(self.degree);
        for (idx, c) in &self.coeffs {
            out.add_term(*idx, c.to_f64());
        }
        out
    }

    /// Evaluates the form on `degree` vectors given by their components in
    /// the frame `e₀…e₄`.
    pub fn evaluate(&self, vectors: &[[f64; DIM]]) -> Result<f64> {
        if vectors.len() != self.degree {
            return Err(Error::DegreeMismatch {
                expected: self.degree,
                found: vectors.len(),
            });
        }
        let mut total = 0.0;
        for (idx, c) in &self.coeffs {
            let rows: Vec<usize> = idx.indices().collect();
            total += c.to_f64() * minor_det(vectors, &rows);
        }
        Ok(total)
    }
}

/// Determinant of the square block `[v_col[row]]` for the selected rows.
fn minor_det(cols: &[[f64; DIM]], rows: &[usize]) -> f64 {
    let k = rows.len();
    let m = |r: usize, c: usize| cols[c][rows[r]];
    match k {
        0 => 1.0,
        1 => m(0, 0),
        2 => m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0),
        3 => {
            m(0, 0) * (m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1))
                - m(0, 1) * (m(1, 0) * m(2, 2) - m(1, 2) * m(2, 0))
                + m(0, 2) * (m(1, 0) * m(2, 1) - m(1, 1) * m(2, 0))
        }
        _ => nalgebra::DMatrix::from_fn(k, k, m).determinant(),
    }
}

impl<S: Coefficient> Add for ConstantForm<S> {
    type Output = Self;

    fn add(self, rhs: Self) -> Self {
        assert_eq!(self.degree, rhs.degree, "adding forms of different degree");
        let mut out = self;
        for (idx, c) in rhs.coeffs {
            out.add_term(idx, c);
        }
        out
    }
}

impl<S: Coefficient> Sub for ConstantForm<S> {
    type Output = Self;

    fn sub(self, rhs: Self) -> Self {
        self + (-rhs)
    }
}

impl<S: Coefficient> Neg for ConstantForm<S> {
    type Output = Self;

    fn neg(self) -> Self {
        let mut out = Self::zero(self.degree);
        for (idx, c) in self.coeffs {
            out.add_term(idx, -c);
        }
        out
    }
}

impl<S: Coefficient> Mul<S> for ConstantForm<S> {
    type Output = Self;

    fn mul(self, rhs: S) -> Self {
        self.scale(&rhs)
    }
}

impl<S: Coefficient> fmt::Debug for ConstantForm<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl<S: Coefficient> fmt::Display for ConstantForm<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let mut terms: Vec<_> = self.coeffs.iter().collect();
        terms.sort_by_key(|(idx, _)| idx.indices().collect::<Vec<_>>());
        for (n, (idx, c)) in terms.into_iter().enumerate() {
            if n > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({c:?}) {idx}")?;
        }
        Ok(())
    }
}
