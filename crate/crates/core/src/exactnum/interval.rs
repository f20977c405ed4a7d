use num_bigint::BigInt;
use num_traits::{Pow, Signed};

use super::quadratic::to_f64;
use super::rational::{int, Rational};
use super::tower::TowerElement;
use crate::error::{Error, Result};

/// Closed rational interval `[lo, hi]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Interval {
    pub lo: Rational,
    pub hi: Rational,
}

impl Interval {
    pub fn point(r: Rational) -> Self {
        Self { lo: r.clone(), hi: r }
    }

    pub fn width(&self) -> Rational {
        &self.hi - &self.lo
    }

    pub fn midpoint(&self) -> f64 {
        to_f64(&((&self.lo + &self.hi) / int(2)))
    }

    pub fn contains_zero(&self) -> bool {
        !self.lo.is_positive() && !self.hi.is_negative()
    }

    fn add(&self, o: &Self) -> Self {
        Self { lo: &self.lo + &o.lo, hi: &self.hi + &o.hi }
    }

    fn scale(&self, c: &Rational) -> Self {
        let (a, b) = (&self.lo * c, &self.hi * c);
        if a <= b {
            Self { lo: a, hi: b }
        } else {
            Self { lo: b, hi: a }
        }
    }
}

/// `[⌊√n·10^k⌋, ⌊√n·10^k⌋ + 1] / 10^k`.
fn sqrt_enclosure(n: u32, k: u32) -> Interval {
    let scale: BigInt = BigInt::from(10).pow(k);
    let s = (BigInt::from(n) * &scale * &scale).sqrt();
    let den = Rational::from_integer(scale);
    Interval { lo: Rational::from_integer(s.clone()) / &den, hi: Rational::from_integer(s + 1) / &den }
}

/// Enclosure of a real element of Q(√3, √5) (even basis slots only) at precision `k`.
fn eval_real(c: &[Rational; 8], k: u32, offset: usize) -> Interval {
    let roots = [Interval::point(int(1)), sqrt_enclosure(3, k), sqrt_enclosure(5, k), sqrt_enclosure(15, k)];
    roots.iter().enumerate().fold(Interval::point(int(0)), |acc, (r, iv)| acc.add(&iv.scale(&c[2 * r + offset])))
}

/// Sign of a real tower element under √3, √5 ↦ positive reals.
///
/// The basis is linearly independent over Q, so zero is detected exactly;
/// otherwise the enclosure is refined until it excludes zero.
pub fn certified_sign(a: &TowerElement) -> Result<i8> {
    if !a.is_real() {
        return Err(Error::InvalidArgument(format!("certified_sign needs a real element, got {a}")));
    }
    if a.is_zero() {
        return Ok(0);
    }
    let mut k = 4;
    loop {
        let iv = eval_real(a.coeffs(), k, 0);
        if iv.lo.is_positive() {
            return Ok(1);
        }
        if iv.hi.is_negative() {
            return Ok(-1);
        }
        k *= 2;
    }
}

/// Rectangular enclosure of a complex number.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComplexEnclosure {
    pub re: Interval,
    pub im: Interval,
}

impl ComplexEnclosure {
    pub fn re_f64(&self) -> f64 {
        self.re.midpoint()
    }

    pub fn im_f64(&self) -> f64 {
        self.im.midpoint()
    }

    pub fn width(&self) -> Rational {
        std::cmp::max(self.re.width(), self.im.width())
    }
}

/// Enclosure of `a` whose real and imaginary widths are at most `10^(−digits)`.
pub fn numeric_eval(a: &TowerElement, digits: u32) -> Result<ComplexEnclosure> {
    if digits == 0 {
        return Err(Error::InvalidArgument("digits must be at least 1".into()));
    }
    let target = Rational::new(BigInt::from(1), BigInt::from(10).pow(digits));
    let mut k = digits + 2;
    loop {
        let enc = ComplexEnclosure { re: eval_real(a.coeffs(), k, 0), im: eval_real(a.coeffs(), k, 1) };
        if enc.width() <= target {
            return Ok(enc);
        }
        k += 4;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::rat;
    use proptest::prelude::*;

    fn t(n: i64) -> TowerElement {
        TowerElement::from(n)
    }

    #[test]
    fn signs() {
        assert_eq!(certified_sign(&(&t(4) - &TowerElement::sqrt15())).unwrap(), 1);
        assert_eq!(
            certified_sign(&(&TowerElement::sqrt15() - &(&TowerElement::sqrt3() * &TowerElement::sqrt5()))).unwrap(),
            0
        );
        let x = &TowerElement::sqrt3().scale(&int(2)) - &TowerElement::sqrt5().scale(&int(2));
        assert_eq!(certified_sign(&x).unwrap(), -1);
        assert!(certified_sign(&TowerElement::i()).is_err());
    }

    #[test]
    fn enclosures() {
        let e = numeric_eval(&TowerElement::sqrt15(), 10).unwrap();
        assert!((e.re_f64() - 3.872983346207417).abs() < 1e-10);
        assert!(e.re.width() <= rat(1, 10_000_000_000));
        let i = numeric_eval(&TowerElement::i(), 10).unwrap();
        assert_eq!(i.im, Interval::point(int(1)));
        assert_eq!(i.re, Interval::point(int(0)));
        let h = (&t(4) + &TowerElement::sqrt15()).pow(2);
        let e = numeric_eval(&h, 10).unwrap();
        // (4 + √15)² = 31 + 8√15
        assert!((e.re_f64() - (31.0 + 8.0 * 15f64.sqrt())).abs() < 1e-9);
        assert!((e.re_f64() - 61.98386677).abs() < 1e-8);
        assert!(numeric_eval(&h, 0).is_err());
    }

    fn arb_real() -> impl Strategy<Value = TowerElement> {
        proptest::collection::vec(-50i64..50, 4).prop_map(|v| {
            let mut c: [Rational; 8] = std::array::from_fn(|_| int(0));
            for (r, x) in v.iter().enumerate() {
                c[2 * r] = rat(*x, 7);
            }
            TowerElement::from_coeffs(c)
        })
    }

    proptest! {
        #[test]
        fn sign_agrees_with_enclosure(a in arb_real()) {
            let s = certified_sign(&a).unwrap();
            let e = numeric_eval(&a, 30).unwrap();
            match s {
                0 => prop_assert!(e.re.contains_zero()),
                1 => prop_assert!(e.re.hi.is_positive()),
                _ => prop_assert!(e.re.lo.is_negative()),
            }
        }
    }
}
