use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::rational::{int, Rational};
use crate::error::{Error, Result};

/// Basis vectors of Q(i, √3, √5), indexed by a 3-bit mask (bit 0: i, bit 1: √3, bit 2: √5).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[repr(usize)]
pub enum TowerBasis {
    One = 0,
    I = 1,
    Sqrt3 = 2,
    ISqrt3 = 3,
    Sqrt5 = 4,
    ISqrt5 = 5,
    Sqrt15 = 6,
    ISqrt15 = 7,
}

const NAMES: [&str; 8] = ["", "i", "√3", "i√3", "√5", "i√5", "√15", "i√15"];

/// Structure constant of `e_a · e_b = c · e_(a xor b)`.
fn structure_constant(a: usize, b: usize) -> i64 {
    let both = a & b;
    let mut c = 1;
    if both & 1 != 0 {
        c *= -1;
    }
    if both & 2 != 0 {
        c *= 3;
    }
    if both & 4 != 0 {
        c *= 5;
    }
    c
}

/// Element of the degree-8 field Q(i, √3, √5) over the ordered basis
/// {1, i, √3, i√3, √5, i√5, √15, i√15}.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TowerElement {
    coeffs: [Rational; 8],
}

impl TowerElement {
    pub fn zero() -> Self {
        Self { coeffs: std::array::from_fn(|_| Rational::zero()) }
    }

    pub fn one() -> Self {
        Self::from_rational(int(1))
    }

    pub fn from_rational(r: Rational) -> Self {
        let mut out = Self::zero();
        out.coeffs[0] = r;
        out
    }

    pub fn from_coeffs(coeffs: [Rational; 8]) -> Self {
        Self { coeffs }
    }

    pub fn basis(b: TowerBasis) -> Self {
        let mut out = Self::zero();
        out.coeffs[b as usize] = int(1);
        out
    }

    pub fn i() -> Self {
        Self::basis(TowerBasis::I)
    }

    pub fn sqrt3() -> Self {
        Self::basis(TowerBasis::Sqrt3)
    }

    pub fn sqrt5() -> Self {
        Self::basis(TowerBasis::Sqrt5)
    }

    pub fn sqrt15() -> Self {
        Self::basis(TowerBasis::Sqrt15)
    }

    pub fn coeff(&self, b: TowerBasis) -> &Rational {
        &self.coeffs[b as usize]
    }

    pub fn coeffs(&self) -> &[Rational; 8] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn scale(&self, r: &Rational) -> Self {
        Self { coeffs: std::array::from_fn(|k| &self.coeffs[k] * r) }
    }

    /// Rational value, if the element lies in Q.
    pub fn as_rational(&self) -> Option<&Rational> {
        self.coeffs[1..].iter().all(Zero::is_zero).then_some(&self.coeffs[0])
    }

    /// True when no i-involving basis vector appears.
    pub fn is_real(&self) -> bool {
        self.coeffs.iter().skip(1).step_by(2).all(Zero::is_zero)
    }

    pub fn real_part(&self) -> Self {
        Self { coeffs: std::array::from_fn(|k| if k & 1 == 0 { self.coeffs[k].clone() } else { Rational::zero() }) }
    }

    /// Imaginary part as an element of the real subfield Q(√3, √5).
    pub fn imag_part(&self) -> Self {
        Self { coeffs: std::array::from_fn(|k| if k & 1 == 0 { self.coeffs[k + 1].clone() } else { Rational::zero() }) }
    }

    /// Field automorphism flipping the signs of the generators selected by `mask`.
    pub fn galois(&self, mask: usize) -> Self {
        Self {
            coeffs: std::array::from_fn(|k| {
                if (k & mask).count_ones() % 2 == 1 {
                    -&self.coeffs[k]
                } else {
                    self.coeffs[k].clone()
                }
            }),
        }
    }

    /// Complex conjugation i ↦ −i.
    pub fn conj_i(&self) -> Self {
        self.galois(1)
    }

    /// |z|² under the standard complex embedding, as a real tower element.
    pub fn abs_squared(&self) -> Self {
        self * &self.conj_i()
    }

    /// Norm down to Q: the product of all eight Galois conjugates.
    pub fn norm(&self) -> Rational {
        let mut acc = Self::one();
        for mask in 0..8 {
            acc = &acc * &self.galois(mask);
        }
        acc.coeffs[0].clone()
    }

    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::NotInvertible { element: "0".into(), witness: "1".into() });
        }
        let mut cofactor = Self::one();
        for mask in 1..8 {
            cofactor = &cofactor * &self.galois(mask);
        }
        let n = (self * &cofactor).as_rational().cloned().expect("norm of a field element is rational");
        Ok(cofactor.scale(&n.recip()))
    }

    pub fn pow(&self, e: u32) -> Self {
        (0..e).fold(Self::one(), |acc, _| &acc * self)
    }
}

impl fmt::Debug for TowerElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for TowerElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let sign = if c.is_negative() { "-" } else { "+" };
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            let a = c.abs();
            match (k, a.is_one()) {
                (0, _) => write!(f, "{a}")?,
                (_, true) => write!(f, "{}", NAMES[k])?,
                (_, false) => write!(f, "{a}*{}", NAMES[k])?,
            }
            first = false;
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

impl Add for &TowerElement {
    type Output = TowerElement;
    fn add(self, rhs: &TowerElement) -> TowerElement {
        TowerElement { coeffs: std::array::from_fn(|k| &self.coeffs[k] + &rhs.coeffs[k]) }
    }
}

impl Sub for &TowerElement {
    type Output = TowerElement;
    fn sub(self, rhs: &TowerElement) -> TowerElement {
        TowerElement { coeffs: std::array::from_fn(|k| &self.coeffs[k] - &rhs.coeffs[k]) }
    }
}

impl Neg for &TowerElement {
    type Output = TowerElement;
    fn neg(self) -> TowerElement {
        TowerElement { coeffs: std::array::from_fn(|k| -&self.coeffs[k]) }
    }
}

impl Mul for &TowerElement {
    type Output = TowerElement;
    fn mul(self, rhs: &TowerElement) -> TowerElement {
        let mut out = TowerElement::zero();
        for (a, x) in self.coeffs.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (b, y) in rhs.coeffs.iter().enumerate() {
                if y.is_zero() {
                    continue;
                }
                out.coeffs[a ^ b] += x * y * int(structure_constant(a, b));
            }
        }
        out
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for TowerElement {
            type Output = TowerElement;
            fn $m(self, rhs: TowerElement) -> TowerElement {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for TowerElement {
    type Output = TowerElement;
    fn neg(self) -> TowerElement {
        -&self
    }
}

impl From<Rational> for TowerElement {
    fn from(r: Rational) -> Self {
        Self::from_rational(r)
    }
}

impl From<i64> for TowerElement {
    fn from(n: i64) -> Self {
        Self::from_rational(int(n))
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
    fn basis_table() {
        assert_eq!(&TowerElement::sqrt3() * &TowerElement::sqrt5(), TowerElement::sqrt15());
        assert_eq!(&TowerElement::i() * &TowerElement::i(), t(-1));
        assert_eq!(&TowerElement::sqrt15() * &TowerElement::sqrt15(), t(15));
    }

    #[test]
    fn sqrt_minus_three_cubed_value() {
        // 3√−3 = 3 i√3; its square is −27.
        let y = TowerElement::basis(TowerBasis::ISqrt3).scale(&int(3));
        assert_eq!(&y * &y, t(-27));
        assert_eq!(t(-27), -(t(1) - t(0)) * (t(27) - t(0)));
    }

    #[test]
    fn inverse_of_homothety_factor() {
        let a = &t(4) + &TowerElement::sqrt15();
        let inv = a.inv().unwrap();
        assert_eq!(inv, &t(4) - &TowerElement::sqrt15());
        assert!(TowerElement::zero().inv().is_err());
        assert_eq!(a.norm(), int(1));
    }

    #[test]
    fn conj_i_is_involutive_ring_map() {
        let a = TowerElement::from_coeffs(std::array::from_fn(|k| rat(k as i64 + 1, 3)));
        let b = TowerElement::from_coeffs(std::array::from_fn(|k| rat(2 - k as i64, 5)));
        assert_eq!((&a * &b).conj_i(), &a.conj_i() * &b.conj_i());
        assert_eq!(a.conj_i().conj_i(), a);
        assert!(a.abs_squared().is_real());
    }

    fn arb_tower() -> impl Strategy<Value = TowerElement> {
        proptest::collection::vec((-20i64..20, 1i64..6), 8)
            .prop_map(|v| TowerElement::from_coeffs(std::array::from_fn(|k| rat(v[k].0, v[k].1))))
    }

    proptest! {
        #[test]
        fn ring_axioms(a in arb_tower(), b in arb_tower(), c in arb_tower()) {
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            prop_assert_eq!(&a * &b, &b * &a);
        }

        #[test]
        fn inverse_roundtrip(a in arb_tower()) {
            prop_assume!(!a.is_zero());
            prop_assert_eq!(&a.inv().unwrap() * &a, TowerElement::one());
        }
    }
}
