//! The quaternion algebra D = (−3, 5)_Q and its maximal order Λ = Z⟨ω, y⟩.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactnum::{int, rat, Rational, TowerElement};
use crate::report::Report;

const ALPHA: i64 = -3;
const BETA: i64 = 5;

/// a + b·x + c·y + d·xy with x² = −3, y² = 5, xy = −yx.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct QuatElement {
    pub a: Rational,
    pub b: Rational,
    pub c: Rational,
    pub d: Rational,
}

impl QuatElement {
    pub fn new(a: Rational, b: Rational, c: Rational, d: Rational) -> Self {
        Self { a, b, c, d }
    }

    pub fn from_ints(a: i64, b: i64, c: i64, d: i64) -> Self {
        Self::new(int(a), int(b), int(c), int(d))
    }

    pub fn scalar(r: Rational) -> Self {
        Self::new(r, Rational::zero(), Rational::zero(), Rational::zero())
    }

    pub fn one() -> Self {
        Self::from_ints(1, 0, 0, 0)
    }

    pub fn x() -> Self {
        Self::from_ints(0, 1, 0, 0)
    }

    pub fn y() -> Self {
        Self::from_ints(0, 0, 1, 0)
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero() && self.c.is_zero() && self.d.is_zero()
    }

    pub fn as_scalar(&self) -> Option<&Rational> {
        (self.b.is_zero() && self.c.is_zero() && self.d.is_zero()).then_some(&self.a)
    }

    pub fn reduced_norm(&self) -> Rational {
        &self.a * &self.a + int(3) * &self.b * &self.b - int(5) * &self.c * &self.c - int(15) * &self.d * &self.d
    }

    pub fn reduced_trace(&self) -> Rational {
        int(2) * &self.a
    }

    pub fn conj(&self) -> Self {
        Self::new(self.a.clone(), -&self.b, -&self.c, -&self.d)
    }

    pub fn scale(&self, r: &Rational) -> Self {
        Self::new(&self.a * r, &self.b * r, &self.c * r, &self.d * r)
    }

    pub fn inv(&self) -> Result<Self> {
        let n = self.reduced_norm();
        if n.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(self.conj().scale(&(Rational::one() / n)))
    }

    pub fn pow(&self, e: u32) -> Self {
        (0..e).fold(Self::one(), |acc, _| &acc * self)
    }
}

impl fmt::Debug for QuatElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} + {}x + {}y + {}xy", self.a, self.b, self.c, self.d)
    }
}

impl fmt::Display for QuatElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

impl Mul for &QuatElement {
    type Output = QuatElement;
    fn mul(self, q: &QuatElement) -> QuatElement {
        let (al, be) = (int(ALPHA), int(BETA));
        let p = self;
        QuatElement {
            a: &p.a * &q.a + &al * &p.b * &q.b + &be * &p.c * &q.c - &al * &be * &p.d * &q.d,
            b: &p.a * &q.b + &p.b * &q.a - &be * &p.c * &q.d + &be * &p.d * &q.c,
            c: &p.a * &q.c + &p.c * &q.a + &al * &p.b * &q.d - &al * &p.d * &q.b,
            d: &p.a * &q.d + &p.d * &q.a + &p.b * &q.c - &p.c * &q.b,
        }
    }
}

impl Add for &QuatElement {
    type Output = QuatElement;
    fn add(self, q: &QuatElement) -> QuatElement {
        QuatElement::new(&self.a + &q.a, &self.b + &q.b, &self.c + &q.c, &self.d + &q.d)
    }
}

impl Sub for &QuatElement {
    type Output = QuatElement;
    fn sub(self, q: &QuatElement) -> QuatElement {
        QuatElement::new(&self.a - &q.a, &self.b - &q.b, &self.c - &q.c, &self.d - &q.d)
    }
}

impl Neg for &QuatElement {
    type Output = QuatElement;
    fn neg(self) -> QuatElement {
        self.scale(&int(-1))
    }
}

macro_rules! owned_ops {
    ($t:ty) => {
        impl Mul for $t {
            type Output = $t;
            fn mul(self, o: $t) -> $t {
                &self * &o
            }
        }
        impl Add for $t {
            type Output = $t;
            fn add(self, o: $t) -> $t {
                &self + &o
            }
        }
        impl Sub for $t {
            type Output = $t;
            fn sub(self, o: $t) -> $t {
                &self - &o
            }
        }
    };
}
owned_ops!(QuatElement);

/// e₀ + e₁ω + e₂y + e₃ωy with ω = (−1+x)/2.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct OrderElement {
    pub e: [BigInt; 4],
}

impl OrderElement {
    pub fn new(e0: i64, e1: i64, e2: i64, e3: i64) -> Self {
        Self { e: [e0.into(), e1.into(), e2.into(), e3.into()] }
    }

    pub fn to_quat(&self) -> QuatElement {
        let half = rat(1, 2);
        let [e0, e1, e2, e3] = self.e.clone().map(Rational::from_integer);
        QuatElement::new(&e0 - &e1 * &half, &e1 * &half, &e2 - &e3 * &half, &e3 * &half)
    }

    pub fn reduced_norm(&self) -> BigInt {
        self.to_quat().reduced_norm().to_integer()
    }

    pub fn reduced_trace(&self) -> BigInt {
        self.to_quat().reduced_trace().to_integer()
    }

    pub fn inv(&self) -> Result<Self> {
        lambda_coordinates(&self.to_quat().inv()?)
    }

    pub fn pow(&self, e: u32) -> Self {
        lambda_coordinates(&self.to_quat().pow(e)).expect("order closed under products")
    }
}

impl Mul for &OrderElement {
    type Output = OrderElement;
    fn mul(self, o: &OrderElement) -> OrderElement {
        lambda_coordinates(&(&self.to_quat() * &o.to_quat())).expect("order closed under products")
    }
}

impl Mul for OrderElement {
    type Output = OrderElement;
    fn mul(self, o: OrderElement) -> OrderElement {
        &self * &o
    }
}

/// Solves p = e₀ + e₁ω + e₂y + e₃ωy and checks integrality.
pub fn lambda_coordinates(p: &QuatElement) -> Result<OrderElement> {
    let two = int(2);
    let e1 = &two * &p.b;
    let e0 = &p.a + &p.b;
    let e3 = &two * &p.d;
    let e2 = &p.c + &p.d;
    let coords = [e0, e1, e2, e3];
    for (k, v) in coords.iter().enumerate() {
        if !v.is_integer() {
            return Err(Error::NotInOrder { coordinate: k, value: v.to_string() });
        }
    }
    Ok(OrderElement { e: coords.map(|v| v.to_integer()) })
}

/// 2×2 matrix over the tower field.
#[derive(Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuatMatrix {
    pub m: [[TowerElement; 2]; 2],
}

impl QuatMatrix {
    pub fn new(a: TowerElement, b: TowerElement, c: TowerElement, d: TowerElement) -> Self {
        Self { m: [[a, b], [c, d]] }
    }

    pub fn identity() -> Self {
        Self::new(TowerElement::one(), TowerElement::zero(), TowerElement::zero(), TowerElement::one())
    }

    pub fn det(&self) -> TowerElement {
        &(&self.m[0][0] * &self.m[1][1]) - &(&self.m[0][1] * &self.m[1][0])
    }

    pub fn trace(&self) -> TowerElement {
        &self.m[0][0] + &self.m[1][1]
    }

    pub fn adjugate(&self) -> Self {
        let [[a, b], [c, d]] = &self.m;
        Self::new(d.clone(), -b, -c, a.clone())
    }

    pub fn inv(&self) -> Result<Self> {
        let di = self.det().inv()?;
        let adj = self.adjugate();
        Ok(Self { m: adj.m.map(|row| row.map(|x| &x * &di)) })
    }

    pub fn pow(&self, e: u32) -> Self {
        (0..e).fold(Self::identity(), |acc, _| &acc * self)
    }

    /// Returns λ with self = λ·I if the matrix is scalar.
    pub fn scalar_value(&self) -> Option<TowerElement> {
        let [[a, b], [c, d]] = &self.m;
        (b.is_zero() && c.is_zero() && a == d).then(|| a.clone())
    }

    /// Equality in PSL₂: self·other⁻¹ is a nonzero scalar.
    pub fn projectively_equal(&self, other: &QuatMatrix) -> bool {
        match other.inv() {
            Ok(oi) => (self * &oi).scalar_value().is_some_and(|s| !s.is_zero()),
            Err(_) => false,
        }
    }
}

impl fmt::Debug for QuatMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[[{}, {}], [{}, {}]]", self.m[0][0], self.m[0][1], self.m[1][0], self.m[1][1])
    }
}

impl Mul for &QuatMatrix {
    type Output = QuatMatrix;
    fn mul(self, o: &QuatMatrix) -> QuatMatrix {
        let e = |i: usize, j: usize| &(&self.m[i][0] * &o.m[0][j]) + &(&self.m[i][1] * &o.m[1][j]);
        QuatMatrix::new(e(0, 0), e(0, 1), e(1, 0), e(1, 1))
    }
}

/// x ↦ [[0,√3],[−√3,0]], y ↦ [[0,√5],[√5,0]], extended linearly.
pub fn embed(p: &QuatElement) -> QuatMatrix {
    let s3 = TowerElement::sqrt3();
    let s5 = TowerElement::sqrt5();
    let s15 = TowerElement::sqrt15();
    let a = TowerElement::from_rational(p.a.clone());
    let d15 = s15.scale(&p.d);
    let b3 = s3.scale(&p.b);
    let c5 = s5.scale(&p.c);
    QuatMatrix::new(&a + &d15, &b3 + &c5, &c5 - &b3, &a - &d15)
}

/// Named elements of Λ used throughout.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Named {
    Omega,
    Y,
    X,
    H,
    Gamma,
    W3,
    W5,
    W15,
    MinusOne,
}

impl Named {
    pub const ALL: [Named; 9] =
        [Named::Omega, Named::Y, Named::X, Named::H, Named::Gamma, Named::W3, Named::W5, Named::W15, Named::MinusOne];

    pub fn name(self) -> &'static str {
        match self {
            Named::Omega => "omega",
            Named::Y => "y",
            Named::X => "x",
            Named::H => "h",
            Named::Gamma => "gamma",
            Named::W3 => "w3",
            Named::W5 => "w5",
            Named::W15 => "w15",
            Named::MinusOne => "-1",
        }
    }

    pub fn quat(self) -> QuatElement {
        match self {
            Named::Omega => QuatElement::new(rat(-1, 2), rat(1, 2), int(0), int(0)),
            Named::Y => QuatElement::y(),
            Named::X | Named::W3 => QuatElement::x(),
            Named::H => QuatElement::from_ints(4, 0, 0, 1),
            Named::Gamma => {
                let w = Named::Omega.quat();
                let w2 = &w * &w;
                &(&QuatElement::scalar(int(4)) + &w2.scale(&int(5))) - &QuatElement::from_ints(0, 0, 2, 0)
            }
            Named::W5 => QuatElement::from_ints(5, 0, 2, 0),
            Named::W15 => QuatElement::from_ints(0, 5, 0, 2),
            Named::MinusOne => QuatElement::from_ints(-1, 0, 0, 0),
        }
    }

    pub fn order(self) -> OrderElement {
        lambda_coordinates(&self.quat()).expect("named elements lie in the order")
    }

    pub fn matrix(self) -> QuatMatrix {
        embed(&self.quat())
    }
}

/// The ladder element ω²w̃₅ω².
pub fn ladder() -> QuatElement {
    let w2 = Named::Omega.quat().pow(2);
    &(&w2 * &Named::W5.quat()) * &w2
}

fn identity_claim(r: &mut Report, id: &str, lhs: QuatElement, rhs: QuatElement) {
    let ok = lhs == rhs;
    r.check(id, "quaternion-order", ok, format!("lhs = {lhs}; rhs = {rhs}"));
}

pub fn verify_order_identities() -> Report {
    let mut r = Report::new();
    let w = Named::Omega.quat();
    let w2 = w.pow(2);
    let y = Named::Y.quat();
    let h = Named::H.quat();
    let w5 = Named::W5.quat();
    let lad = ladder();
    let five = QuatElement::scalar(int(5));

    identity_claim(&mut r, "omega-relation", &(&w2 + &w) + &QuatElement::one(), QuatElement::scalar(int(0)));
    identity_claim(&mut r, "omega-cubed", w.pow(3), QuatElement::one());
    identity_claim(&mut r, "y-omega", &y * &w, &w2 * &y);
    identity_claim(&mut r, "five-h", &five * &h, &(&lad + &five) * &y);
    identity_claim(&mut r, "five-h-doubled-ladder", &five * &h, &(&lad.scale(&int(2)) + &five) * &y);
    identity_claim(&mut r, "ladder-commutes-h", &lad * &h, &h * &(&(&w * &w5) * &w));
    identity_claim(&mut r, "ladder-squared", lad.pow(2), &five * &Named::Gamma.quat());

    let gamma_coords = Named::Gamma.order();
    r.check(
        "gamma-integral",
        "quaternion-order",
        true,
        format!("gamma = {:?}", gamma_coords.e.iter().map(|v| v.to_string()).collect::<Vec<_>>()),
    );
    for (n, expect) in
        [(Named::H, 1), (Named::Gamma, 1), (Named::Omega, 1), (Named::W3, 3), (Named::W5, 5), (Named::W15, 15)]
    {
        let got = n.quat().reduced_norm();
        r.check(&format!("norm-{}", n.name()), "quaternion-order", got == int(expect), format!("N = {got}"));
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn norm_examples() {
        assert_eq!(Named::H.quat().reduced_norm(), int(1));
        assert_eq!(Named::W15.quat().reduced_norm(), int(15));
        assert_eq!(Named::Omega.quat().reduced_norm(), int(1));
        assert_eq!(Named::Omega.quat().reduced_trace(), int(-1));
    }

    #[test]
    fn embedding_examples() {
        let ex = embed(&QuatElement::x());
        let s3 = TowerElement::sqrt3();
        assert_eq!(ex, QuatMatrix::new(TowerElement::zero(), s3.clone(), -&s3, TowerElement::zero()));
        let eh = Named::H.matrix();
        let s15 = TowerElement::sqrt15();
        let four = TowerElement::from(4);
        assert_eq!(eh, QuatMatrix::new(&four + &s15, TowerElement::zero(), TowerElement::zero(), &four - &s15));
        assert_eq!(eh.det(), TowerElement::one());
        assert_eq!(embed(&QuatElement::one()), QuatMatrix::identity());
    }

    #[test]
    fn coordinates() {
        assert_eq!(Named::W5.order(), OrderElement::new(5, 0, 2, 0));
        assert_eq!(Named::Gamma.order(), OrderElement::new(-1, -5, -2, 0));
        assert_eq!(Named::H.order(), OrderElement::new(4, 0, 1, 2));
        let third_x = QuatElement::new(int(0), rat(1, 3), int(0), int(0));
        assert!(matches!(lambda_coordinates(&third_x), Err(Error::NotInOrder { .. })));
    }

    #[test]
    fn identities_hold() {
        let r = verify_order_identities();
        let failed: Vec<_> = r.failures().map(|c| c.id.as_str()).collect();
        assert_eq!(failed, ["five-h"], "{r}");
    }

    fn small_quat() -> impl Strategy<Value = QuatElement> {
        (-20i64..20, 1i64..6, -20i64..20, -20i64..20, -20i64..20)
            .prop_map(|(a, den, b, c, d)| QuatElement::new(rat(a, den), rat(b, den), rat(c, den), rat(d, den)))
    }

    fn order_elt() -> impl Strategy<Value = OrderElement> {
        (-9i64..9, -9i64..9, -9i64..9, -9i64..9).prop_map(|(a, b, c, d)| OrderElement::new(a, b, c, d))
    }

    proptest! {
        #[test]
        fn norm_multiplicative(p in small_quat(), q in small_quat()) {
            prop_assert_eq!((&p * &q).reduced_norm(), p.reduced_norm() * q.reduced_norm());
        }

        #[test]
        fn embed_is_homomorphism(p in small_quat(), q in small_quat()) {
            let ep = embed(&p);
            prop_assert_eq!(embed(&(&p * &q)), &ep * &embed(&q));
            prop_assert_eq!(ep.det(), TowerElement::from_rational(p.reduced_norm()));
            prop_assert_eq!(ep.trace(), TowerElement::from_rational(p.reduced_trace()));
        }

        #[test]
        fn order_closed(p in order_elt(), q in order_elt()) {
            let prod = &p.to_quat() * &q.to_quat();
            prop_assert!(lambda_coordinates(&prod).is_ok());
            prop_assert_eq!(lambda_coordinates(&p.to_quat()).unwrap(), p);
        }
    }
}
