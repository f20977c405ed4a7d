use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};

use super::rational::{int, Rational};
use crate::error::{Error, Result};

/// Element `a + b·√d` of the quadratic field Q(√d), `d` a non-square integer.
///
/// `√d` for negative `d` is the root with positive imaginary part.
/// Rational elements (`b = 0`) combine with any field; mixing two
/// different radicands with nonzero irrational parts panics.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct QuadraticElement {
    d: i64,
    a: Rational,
    b: Rational,
}

impl QuadraticElement {
    pub fn new(d: i64, a: Rational, b: Rational) -> Self {
        Self { d, a, b }
    }

    pub fn rational(d: i64, a: Rational) -> Self {
        Self { d, a, b: Rational::zero() }
    }

    pub fn sqrt(d: i64) -> Self {
        Self { d, a: Rational::zero(), b: int(1) }
    }

    pub fn radicand(&self) -> i64 {
        self.d
    }

    pub fn rational_part(&self) -> &Rational {
        &self.a
    }

    pub fn irrational_part(&self) -> &Rational {
        &self.b
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn as_rational(&self) -> Option<&Rational> {
        self.b.is_zero().then_some(&self.a)
    }

    pub fn conj(&self) -> Self {
        Self { d: self.d, a: self.a.clone(), b: -&self.b }
    }

    pub fn norm(&self) -> Rational {
        &self.a * &self.a - &self.b * &self.b * int(self.d)
    }

    pub fn trace(&self) -> Rational {
        &self.a * int(2)
    }

    /// Coefficients `(c1, c0)` of the monic minimal polynomial `x² + c1·x + c0`
    /// (for rational elements: of `(x − a)²`).
    pub fn min_poly(&self) -> (Rational, Rational) {
        (-self.trace(), self.norm())
    }

    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let n = self.norm();
        let c = self.conj();
        Ok(Self { d: self.d, a: &c.a / &n, b: &c.b / &n })
    }

    pub fn scale(&self, r: &Rational) -> Self {
        Self { d: self.d, a: &self.a * r, b: &self.b * r }
    }

    pub fn pow(&self, e: u32) -> Self {
        (0..e).fold(Self::rational(self.d, int(1)), |acc, _| &acc * self)
    }

    /// Complex value `(re, im)` in double precision.
    pub fn to_complex(&self) -> (f64, f64) {
        let a = to_f64(&self.a);
        let b = to_f64(&self.b);
        let r = (self.d.unsigned_abs() as f64).sqrt();
        if self.d < 0 {
            (a, b * r)
        } else {
            (a + b * r, 0.0)
        }
    }

    fn common_radicand(&self, other: &Self) -> i64 {
        if self.b.is_zero() {
            other.d
        } else if other.b.is_zero() || self.d == other.d {
            self.d
        } else {
            panic!("mixing Q(√{}) and Q(√{})", self.d, other.d)
        }
    }
}

pub(crate) fn to_f64(r: &Rational) -> f64 {
    use num_traits::ToPrimitive;
    r.to_f64().unwrap_or(f64::NAN)
}

impl fmt::Debug for QuadraticElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for QuadraticElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let root = format!("√{}", self.d);
        match (self.a.is_zero(), self.b.is_zero()) {
            (_, true) => write!(f, "{}", self.a),
            (true, false) if self.b.is_one() => write!(f, "{root}"),
            (true, false) => write!(f, "{}*{root}", self.b),
            (false, false) => {
                let sign = if self.b.is_negative() { "-" } else { "+" };
                let mag = self.b.abs();
                if mag.is_one() {
                    write!(f, "{} {sign} {root}", self.a)
                } else {
                    write!(f, "{} {sign} {mag}*{root}", self.a)
                }
            }
        }
    }
}

impl Add for &QuadraticElement {
    type Output = QuadraticElement;
    fn add(self, rhs: &QuadraticElement) -> QuadraticElement {
        let d = self.common_radicand(rhs);
        QuadraticElement { d, a: &self.a + &rhs.a, b: &self.b + &rhs.b }
    }
}

impl Sub for &QuadraticElement {
    type Output = QuadraticElement;
    fn sub(self, rhs: &QuadraticElement) -> QuadraticElement {
        let d = self.common_radicand(rhs);
        QuadraticElement { d, a: &self.a - &rhs.a, b: &self.b - &rhs.b }
    }
}

impl Mul for &QuadraticElement {
    type Output = QuadraticElement;
    fn mul(self, rhs: &QuadraticElement) -> QuadraticElement {
        let d = self.common_radicand(rhs);
        QuadraticElement { d, a: &self.a * &rhs.a + &self.b * &rhs.b * int(d), b: &self.a * &rhs.b + &self.b * &rhs.a }
    }
}

impl Neg for &QuadraticElement {
    type Output = QuadraticElement;
    fn neg(self) -> QuadraticElement {
        QuadraticElement { d: self.d, a: -&self.a, b: -&self.b }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::rat;

    #[test]
    fn cm_value_at_q_is_root_of_x2_x_4_9() {
        // (√−7 − 3)/6
        let v = QuadraticElement::new(-7, rat(-1, 2), rat(1, 6));
        let lhs = &(&(&v * &v) + &v) + &QuadraticElement::rational(-7, rat(4, 9));
        assert!(lhs.is_zero());
        assert_eq!(v.min_poly(), (int(1), rat(4, 9)));
    }

    #[test]
    fn inverse_of_root() {
        let s = QuadraticElement::sqrt(-3);
        let inv = s.inv().unwrap();
        assert_eq!(inv, QuadraticElement::new(-3, int(0), rat(-1, 3)));
        assert_eq!(&s * &inv, QuadraticElement::rational(-3, int(1)));
    }

    #[test]
    fn complex_embedding_has_positive_imaginary_root() {
        let (re, im) = QuadraticElement::sqrt(-7).to_complex();
        assert_eq!(re, 0.0);
        assert!((im - 7f64.sqrt()).abs() < 1e-12);
    }
}
