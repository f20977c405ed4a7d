use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Arbitrary-precision rational, always kept in lowest terms with a positive denominator.
pub type Rational = BigRational;

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn rat_inv(a: &Rational) -> Result<Rational> {
    if a.is_zero() {
        return Err(Error::DivisionByZero);
    }
    Ok(a.recip())
}

fn int_two_valuation(n: &BigInt) -> i64 {
    n.trailing_zeros().map(|z| z as i64).unwrap_or(0)
}

/// Exponent `v` with `a = 2^v · (odd/odd)`.
pub fn two_valuation(a: &Rational) -> Result<i64> {
    if a.is_zero() {
        return Err(Error::ZeroValuation);
    }
    Ok(int_two_valuation(a.numer()) - int_two_valuation(a.denom()))
}

/// A rational is a 2-local integer when its reduced denominator is odd.
pub fn is_two_integral(a: &Rational) -> bool {
    a.denom().is_odd()
}

/// Primes dividing a nonzero integer, by trial division. Only used on small values.
pub(crate) fn prime_support(n: &BigInt) -> Vec<u64> {
    let mut n = n.abs();
    let mut out = Vec::new();
    if n.is_zero() {
        return out;
    }
    let mut p: u64 = 2;
    while BigInt::from(p) * BigInt::from(p) <= n {
        let bp = BigInt::from(p);
        if (&n % &bp).is_zero() {
            out.push(p);
            while (&n % &bp).is_zero() {
                n /= &bp;
            }
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > BigInt::one() {
        out.push(u64::try_from(&n).expect("prime factor exceeds u64"));
    }
    out
}

/// Whether every prime in numerator and denominator of `a` lies in `allowed`.
pub(crate) fn supported_on(a: &Rational, allowed: &[u64]) -> bool {
    prime_support(a.numer()).into_iter().chain(prime_support(a.denom())).all(|p| allowed.contains(&p))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inverse_and_products() {
        assert_eq!(rat(5, 9) * rat(9, 5), int(1));
        assert_eq!(rat_inv(&rat(5, 9)).unwrap(), rat(9, 5));
        assert_eq!(rat_inv(&int(0)), Err(Error::DivisionByZero));
        // w = (t - 1)/4 at t = 0
        assert_eq!((int(0) - int(1)) / int(4), rat(-1, 4));
        assert_eq!(rat(4, 9) * int(9), int(4));
        assert_eq!(rat(6, -8), rat(-3, 4));
    }

    #[test]
    fn valuations() {
        assert_eq!(two_valuation(&rat(4, 9)).unwrap(), 2);
        assert_eq!(two_valuation(&rat(5, 9)).unwrap(), 0);
        assert_eq!(two_valuation(&int(2)).unwrap(), 1);
        assert_eq!(two_valuation(&rat(3, 8)).unwrap(), -3);
        assert_eq!(two_valuation(&int(0)), Err(Error::ZeroValuation));
        assert!(is_two_integral(&rat(5, 9)));
        assert!(!is_two_integral(&rat(1, 2)));
    }

    #[test]
    fn support() {
        assert_eq!(prime_support(&BigInt::from(-360)), vec![2, 3, 5]);
        assert!(supported_on(&rat(25, 81), &[3, 5]));
        assert!(!supported_on(&rat(7, 3), &[3, 5]));
    }

    proptest::proptest! {
        #[test]
        fn valuation_is_additive(a in 1i64..5000, b in 1i64..5000, c in 1i64..5000, d in 1i64..5000) {
            let x = rat(a, b);
            let y = rat(c, d);
            proptest::prop_assert_eq!(
                two_valuation(&(&x * &y)).unwrap(),
                two_valuation(&x).unwrap() + two_valuation(&y).unwrap()
            );
        }
    }
}
