//! Coefficient rings for constant-coefficient forms.

use std::fmt::Debug;
use std::ops::Neg;

use num_rational::Rational64;
use num_traits::{Num, ToPrimitive};

/// Exact rational coefficients.
pub type Rational = Rational64;

/// A coefficient usable in forms and in the invariant-calibration predicates.
///
/// Rationals compare exactly. Floats treat magnitudes up to `1e-12` as zero,
/// which is the only place a tolerance enters the algebraic predicates.
pub trait Coefficient: Clone + Debug + PartialEq + Num + Neg<Output = Self> + Send + Sync {
    fn to_f64(&self) -> f64;

    fn is_negligible(&self) -> bool;

    fn from_i64(v: i64) -> Self;
}

impl Coefficient for f64 {
    fn to_f64(&self) -> f64 {
        *self
    }

    fn is_negligible(&self) -> bool {
        self.abs() <= 1e-12
    }

    fn from_i64(v: i64) -> Self {
        v as f64
    }
}

impl Coefficient for Rational {
    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }

    fn is_negligible(&self) -> bool {
        num_traits::Zero::is_zero(self)
    }

    fn from_i64(v: i64) -> Self {
        Rational::from_integer(v)
    }
}
