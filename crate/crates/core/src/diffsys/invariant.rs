use serde::{Deserialize, Serialize};

use crate::exterior::{three_form, two_form, ConstantForm};
use crate::scalar::{Coefficient, Rational};

/// `ω = b₀α₀ + b₁α₁ + b₂α₂ + b₃dθ`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InvariantTwoForm<S> {
    pub b: [S; 4],
}

/// `φ = θ ∧ (b₀α₀ + b₁α₁ + b₂α₂)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InvariantThreeForm<S> {
    pub b: [S; 3],
}

impl<S: Coefficient> InvariantTwoForm<S> {
    pub fn new(b: [S; 4]) -> Self {
        InvariantTwoForm { b }
    }

    pub fn form(&self) -> ConstantForm<S> {
        two_form(self.b.clone())
    }

    /// `θ ∧ ω`.
    pub fn calibration(&self) -> InvariantThreeForm<S> {
        let [b0, b1, b2, _] = self.b.clone();
        InvariantThreeForm::new([b0, b1, b2])
    }

    /// `dω = 0` on a space form of curvature `c`: `b₁ = 0` and `b₀ = c·b₂`.
    pub fn is_closed(&self, c: &S) -> bool {
        let [b0, b1, b2, _] = &self.b;
        b1.is_negligible() && (b0.clone() - c.clone() * b2.clone()).is_negligible()
    }

    pub fn to_real(&self) -> InvariantTwoForm<f64> {
        InvariantTwoForm::new(std::array::from_fn(|i| self.b[i].to_f64()))
    }
}

impl<S: Coefficient> InvariantThreeForm<S> {
    pub fn new(b: [S; 3]) -> Self {
        InvariantThreeForm { b }
    }

    pub fn zero() -> Self {
        Self::new([S::zero(), S::zero(), S::zero()])
    }

    pub fn form(&self) -> ConstantForm<S> {
        three_form(self.b.clone())
    }

    pub fn to_real(&self) -> InvariantThreeForm<f64> {
        InvariantThreeForm::new(std::array::from_fn(|i| self.b[i].to_f64()))
    }
}

/// `θ ∧ (cos t·α₀ + sin t·α₁ − cos t·α₂)`.
pub fn phi_t(t: f64) -> InvariantThreeForm<f64> {
    let (s, c) = t.sin_cos();
    phi_from_circle(c, s)
}

/// `φ_t` from a point `(cos t, sin t)` on the unit circle, in any coefficient
/// type.
pub fn phi_from_circle<S: Coefficient>(cos: S, sin: S) -> InvariantThreeForm<S> {
    InvariantThreeForm::new([cos.clone(), sin, -cos])
}

/// The rational point `((1 − m²)/(1 + m²), 2m/(1 + m²))` of the unit circle.
pub fn rational_circle_point(m: Rational) -> (Rational, Rational) {
    let one = Rational::from_integer(1);
    let d = one + m * m;
    ((one - m * m) / d, Rational::from_integer(2) * m / d)
}

/// `φ₊ = θ ∧ (α₀ + α₂)`.
pub fn phi_plus<S: Coefficient>() -> InvariantThreeForm<S> {
    InvariantThreeForm::new([S::one(), S::zero(), S::one()])
}

/// `φ₋ = φ₀ = θ ∧ (α₀ − α₂)`.
pub fn phi_minus<S: Coefficient>() -> InvariantThreeForm<S> {
    InvariantThreeForm::new([S::one(), S::zero(), -S::one()])
}

/// Whether `φ_A − φ_B` is exact among invariant forms on a space form of
/// curvature `c`: `b₀ᴬ − b₀ᴮ = −c(b₂ᴬ − b₂ᴮ)`. The `α₁` coefficient is free
/// since `θ∧α₁ = dα₀`.
pub fn cohomologous<S: Coefficient>(
    a: &InvariantThreeForm<S>,
    b: &InvariantThreeForm<S>,
    c: &S,
) -> bool {
    let d0 = a.b[0].clone() - b.b[0].clone();
    let d2 = a.b[2].clone() - b.b[2].clone();
    (d0 + c.clone() * d2).is_negligible()
}

/// Orientation of an invariant calibration relative to `T¹M`, read off from
/// the sign of `b₀b₂ − b₁² − b₃²`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Orientation {
    Same,
    Opposite,
}

/// A family of invariant calibrations `θ∧ω` described by constraints on
/// `(b₀, b₁, b₂, b₃)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CalibrationFamily {
    pub orientation: Orientation,
    pub constraints: Vec<&'static str>,
    pub parametrisation: &'static str,
}

impl CalibrationFamily {
    pub fn of(orientation: Orientation) -> Self {
        match orientation {
            Orientation::Same => CalibrationFamily {
                orientation,
                constraints: vec!["b0 + b2 = 0", "b0^2 + b1^2 = 1", "b3 = 0"],
                parametrisation: "(cos t, sin t, -cos t, 0)",
            },
            Orientation::Opposite => CalibrationFamily {
                orientation,
                constraints: vec!["b0 = b2 = ±1", "b1 = 0", "b3 = 0"],
                parametrisation: "±(1, 0, 1, 0)",
            },
        }
    }

    pub fn contains<S: Coefficient>(&self, omega: &InvariantTwoForm<S>) -> bool {
        let [b0, b1, b2, b3] = omega.b.clone();
        if !b3.is_negligible() {
            return false;
        }
        match self.orientation {
            Orientation::Same => {
                (b0.clone() + b2).is_negligible()
                    && (b0.clone() * b0 + b1.clone() * b1 - S::one()).is_negligible()
            }
            Orientation::Opposite => {
                b1.is_negligible()
                    && (b0.clone() - b2).is_negligible()
                    && (b0.clone() * b0 - S::one()).is_negligible()
            }
        }
    }
}

/// The family containing `ω`, if `θ∧ω` is an invariant calibration.
pub fn is_calibration<S: Coefficient>(omega: &InvariantTwoForm<S>) -> Option<Orientation> {
    [Orientation::Same, Orientation::Opposite]
        .into_iter()
        .find(|&o| CalibrationFamily::of(o).contains(omega))
}

/// The closed invariant 2-forms on a space form of curvature `c`:
/// `ω_c = cQ·α₀ + Q·α₂ + Q₁·dθ`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClosedFamily<S> {
    pub c: S,
    pub parametrisation: &'static str,
}

impl<S: Coefficient> ClosedFamily<S> {
    pub fn member(&self, q: S, q1: S) -> InvariantTwoForm<S> {
        InvariantTwoForm::new([self.c.clone() * q.clone(), S::zero(), q, q1])
    }
}

pub fn closed_two_form_family<S: Coefficient>(c: S) -> ClosedFamily<S> {
    ClosedFamily {
        c,
        parametrisation: "(c*Q, 0, Q, Q1)",
    }
}
