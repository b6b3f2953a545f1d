//! Scalar kinds used by the diagram algebras: exact rationals and complex
//! doubles behind one small trait.

use num::complex::Complex64;
use num::{BigRational, ToPrimitive};

pub type Rational = BigRational;
pub type Complex = Complex64;

/// Coefficient scalar for formal linear combinations of diagrams.
///
/// Implemented by [`Rational`] (exact path) and [`Complex`] (numeric path).
/// Zero/one come from the `num` traits; the by-reference operations avoid
/// cloning big rationals on hot paths.
pub trait Scalar: Clone + PartialEq + std::fmt::Debug + num::Zero + num::One {
    fn add_ref(&self, other: &Self) -> Self;
    fn neg_ref(&self) -> Self;
    fn mul_ref(&self, other: &Self) -> Self;
    /// Absolute value as f64, for norms and error reporting.
    fn abs_f64(&self) -> f64;
}

impl Scalar for Rational {
    fn add_ref(&self, other: &Self) -> Self {
        self + other
    }
    fn neg_ref(&self) -> Self {
        -self
    }
    fn mul_ref(&self, other: &Self) -> Self {
        self * other
    }
    fn abs_f64(&self) -> f64 {
        rational_to_f64(self).abs()
    }
}

impl Scalar for Complex {
    fn add_ref(&self, other: &Self) -> Self {
        self + other
    }
    fn neg_ref(&self) -> Self {
        -self
    }
    fn mul_ref(&self, other: &Self) -> Self {
        self * other
    }
    fn abs_f64(&self) -> f64 {
        self.norm()
    }
}

/// Rational → f64, falling back to a quotient of approximations when the
/// parts overflow f64 (never happens for the sizes this crate produces).
pub fn rational_to_f64(q: &Rational) -> f64 {
    q.to_f64().unwrap_or_else(|| {
        let n = q.numer().to_f64().unwrap_or(f64::MAX);
        let d = q.denom().to_f64().unwrap_or(f64::MAX);
        n / d
    })
}

/// Rational → complex double.
pub fn rational_to_complex(q: &Rational) -> Complex {
    Complex64::new(rational_to_f64(q), 0.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num::BigInt;

    #[test]
    fn rational_conversion_is_exact_for_dyadics() {
        let q = BigRational::new(BigInt::from(9), BigInt::from(16));
        assert_eq!(rational_to_f64(&q), 0.5625);
    }

    #[test]
    fn scalar_ops_match_native() {
        let a = Complex64::new(1.5, -2.0);
        let b = Complex64::new(0.25, 1.0);
        assert_eq!(a.mul_ref(&b), a * b);
        assert_eq!(a.add_ref(&b), a + b);
        assert_eq!(a.neg_ref(), -a);
    }
}
