//! The graded ring R = Z₂[a₁, a₃, a₆]/f(a₆), its Laurent localizations,
//! the deck and w₁₅ involutions, and the cohomology built from them.

mod characters;
mod cohomology;

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::exactnum::{int, is_two_integral, rat, MultiPoly, Rational};
use crate::report::Report;

pub use characters::{character_rows, sigma_character, sigma_triple, verify_characters, CharacterRow, Prime};
pub use cohomology::{
    group_cohomology, h1_mayer_vietoris, pairing_matrix, serre_duality_check, slice_cohomology, stack_cohomology,
    verify_w15_degeneration, w15_trace, Action, CohomologyGroup, StackCohomology, WeightSlice,
};

/// a₁ⁱ a₃ʲ a₆^e. Exponents of a₁, a₃ may be negative in localizations.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Monomial {
    pub i: i32,
    pub j: i32,
    pub e: u32,
}

impl Monomial {
    pub const fn new(i: i32, j: i32, e: u32) -> Self {
        Self { i, j, e }
    }

    pub fn weight(&self) -> i32 {
        self.i + 3 * self.j + 6 * self.e as i32
    }

    pub fn is_polynomial(&self) -> bool {
        self.i >= 0 && self.j >= 0
    }

    pub fn times(&self, o: &Monomial) -> Monomial {
        Monomial::new(self.i + o.i, self.j + o.j, self.e + o.e)
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        for (name, x) in [("a1", self.i), ("a3", self.j), ("a6", self.e as i32)] {
            match x {
                0 => {}
                1 => parts.push(name.to_string()),
                _ => parts.push(format!("{name}^{x}")),
            }
        }
        if parts.is_empty() {
            f.write_str("1")
        } else {
            f.write_str(&parts.join(" "))
        }
    }
}

/// Element of R or of a Laurent localization of it, kept with a₆-degree ≤ 1.
#[derive(Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct AutomorphicPoly {
    terms: BTreeMap<Monomial, Rational>,
}

impl AutomorphicPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::monomial(Monomial::new(0, 0, 0), int(1))
    }

    pub fn monomial(m: Monomial, c: Rational) -> Self {
        let mut p = Self::zero();
        p.add_term(m, c);
        p
    }

    pub fn a1() -> Self {
        Self::monomial(Monomial::new(1, 0, 0), int(1))
    }

    pub fn a3() -> Self {
        Self::monomial(Monomial::new(0, 1, 0), int(1))
    }

    pub fn a6() -> Self {
        Self::monomial(Monomial::new(0, 0, 1), int(1))
    }

    /// G = a₁⁶ + a₁³a₃ + a₃².
    pub fn g() -> Self {
        let mut p = Self::zero();
        p.add_term(Monomial::new(6, 0, 0), int(1));
        p.add_term(Monomial::new(3, 1, 0), int(1));
        p.add_term(Monomial::new(0, 2, 0), int(1));
        p
    }

    /// f(X) evaluated at X = a₆ without reduction, as a raw expression.
    pub fn f_of(x: &AutomorphicPoly) -> Self {
        let g = Self::g();
        let a1_6 = Self::monomial(Monomial::new(6, 0, 0), int(1));
        let x2 = x.mul_raw(x);
        let xg = x.mul_raw(&g);
        let g2 = g.mul_raw(&g);
        let tail = a1_6.mul_raw(&g).scale(&rat(5, 9));
        &(&(&x2 + &xg) + &g2) - &tail
    }

    pub fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(m).or_insert_with(Rational::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&m);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &Monomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_reduced(&self) -> bool {
        self.terms.keys().all(|m| m.e <= 1)
    }

    /// Coefficients have odd denominators.
    pub fn is_two_local(&self) -> bool {
        self.terms.values().all(is_two_integral)
    }

    pub fn is_homogeneous(&self) -> Option<i32> {
        let mut w = self.terms.keys().map(Monomial::weight);
        let first = w.next()?;
        w.all(|x| x == first).then_some(first)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        let mut p = Self::zero();
        for (m, v) in &self.terms {
            p.add_term(*m, v * c);
        }
        p
    }

    fn mul_raw(&self, o: &Self) -> Self {
        let mut p = Self::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &o.terms {
                p.add_term(m1.times(m2), c1 * c2);
            }
        }
        p
    }

    /// Rewrites a₆² = −a₆G − G² + (5/9)a₁⁶G until every term has a₆-degree ≤ 1.
    pub fn reduce(&self) -> Self {
        let g = Self::g();
        let a1_6 = Self::monomial(Monomial::new(6, 0, 0), int(1));
        let a6 = Self::a6();
        let square = &(&(-&a6.mul_raw(&g)) - &g.mul_raw(&g)) + &a1_6.mul_raw(&g).scale(&rat(5, 9));
        let mut cur = self.clone();
        while !cur.is_reduced() {
            let mut next = Self::zero();
            for (m, c) in &cur.terms {
                if m.e >= 2 {
                    let rest = Self::monomial(Monomial::new(m.i, m.j, m.e - 2), c.clone());
                    for (m2, c2) in rest.mul_raw(&square).terms {
                        next.add_term(m2, c2);
                    }
                } else {
                    next.add_term(*m, c.clone());
                }
            }
            cur = next;
        }
        cur
    }

    /// Ring map determined by images of a₁, a₃, a₆, followed by reduction.
    pub fn substitute(&self, a1: &Self, a3: &Self, a6: &Self) -> Self {
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            let mut t = Self::monomial(Monomial::new(0, 0, 0), c.clone());
            t = t.mul_raw(&power(a1, m.i));
            t = t.mul_raw(&power(a3, m.j));
            t = t.mul_raw(&power(a6, m.e as i32)).reduce();
            out = &out + &t;
        }
        out.reduce()
    }

    pub fn deck(&self) -> Self {
        let mut p = Self::zero();
        for (m, c) in &self.terms {
            let sign = if (m.i + m.j).rem_euclid(2) == 0 { c.clone() } else { -c };
            p.add_term(*m, sign);
        }
        p
    }

    pub fn w15(&self) -> Self {
        let img = &(-&Self::a6()) - &Self::g();
        self.substitute(&Self::a1(), &Self::a3(), &img)
    }
}

/// xⁿ for a monomial-valued x with possibly negative n.
fn power(x: &AutomorphicPoly, n: i32) -> AutomorphicPoly {
    if n >= 0 {
        (0..n).fold(AutomorphicPoly::one(), |acc, _| acc.mul_raw(x))
    } else {
        assert!(x.len() == 1, "negative powers only of monomials");
        let (m, c) = x.terms().next().expect("nonzero");
        assert!(m.e == 0, "a6 is not inverted");
        let inv = AutomorphicPoly::monomial(Monomial::new(-m.i, -m.j, 0), Rational::one() / c);
        (0..-n).fold(AutomorphicPoly::one(), |acc, _| acc.mul_raw(&inv))
    }
}

impl fmt::Debug for AutomorphicPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for AutomorphicPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .rev()
            .map(|(m, c)| if c.is_one() { m.to_string() } else { format!("({c}) {m}") })
            .collect();
        f.write_str(&parts.join(" + "))
    }
}

impl Add for &AutomorphicPoly {
    type Output = AutomorphicPoly;
    fn add(self, o: &AutomorphicPoly) -> AutomorphicPoly {
        let mut p = self.clone();
        for (m, c) in &o.terms {
            p.add_term(*m, c.clone());
        }
        p
    }
}

impl Sub for &AutomorphicPoly {
    type Output = AutomorphicPoly;
    fn sub(self, o: &AutomorphicPoly) -> AutomorphicPoly {
        self + &(-o)
    }
}

impl Neg for &AutomorphicPoly {
    type Output = AutomorphicPoly;
    fn neg(self) -> AutomorphicPoly {
        self.scale(&int(-1))
    }
}

impl Mul for &AutomorphicPoly {
    type Output = AutomorphicPoly;
    fn mul(self, o: &AutomorphicPoly) -> AutomorphicPoly {
        self.mul_raw(o).reduce()
    }
}

/// Monomials a₁ⁱa₃ʲa₆^ε (i, j ≥ 0, ε ≤ 1) of weight t: the basis of R_t.
pub fn weight_basis(t: i32) -> Vec<Monomial> {
    let mut out = Vec::new();
    if t < 0 {
        return out;
    }
    for e in 0..=1u32 {
        let rest = t - 6 * e as i32;
        for j in 0..=rest.max(-1) / 3 {
            let i = rest - 3 * j;
            if i >= 0 {
                out.push(Monomial::new(i, j, e));
            }
        }
    }
    out
}

/// f(a₆) after a₃ = u·a₁³, a₆ = (1+u+u²)·v·a₁⁶, compared with a₁¹²(1+u+u²)[(u²+u+1)(v²+v+1) − 5/9].
pub fn verify_f_derivation() -> Report {
    let mut rep = Report::new();
    let a = "forms-presentation";
    let (a1, u, v) = (MultiPoly::var(3, 0), MultiPoly::var(3, 1), MultiPoly::var(3, 2));
    let one = MultiPoly::constant(3, int(1));
    let q = &(&one + &u) + &(&u * &u);
    let a1_3 = a1.pow(3);
    let a1_6 = a1.pow(6);
    let a3 = &u * &a1_3;
    let a6 = &(&q * &v) * &a1_6;
    let g = &(&a1_6 + &(&a1_3 * &a3)) + &(&a3 * &a3);
    let f = &(&(&(&a6 * &a6) + &(&a6 * &g)) + &(&g * &g)) - &(&a1_6 * &g).scale(&rat(5, 9));
    let qv = &(&(&v * &v) + &v) + &one;
    let rhs = &(&a1.pow(12) * &q) * &(&(&q * &qv) - &MultiPoly::constant(3, rat(5, 9)));
    let residual = &f - &rhs;
    let names = ["a1", "u", "v"];
    rep.check(
        "f-derivation",
        a,
        residual.is_zero(),
        if residual.is_zero() {
            "residual 0".to_string()
        } else {
            format!("residual {}", residual.display_with(&names))
        },
    );
    let mut v2_coeff = MultiPoly::zero(3);
    for (e, c) in f.terms().filter(|(e, _)| e[2] == 2) {
        v2_coeff.add_term(vec![e[0], e[1], 0], c.clone());
    }
    let want = &a1.pow(12) * &(&q * &q);
    rep.check("f-derivation-v2", a, v2_coeff == want, "v² coefficient is a₁¹²(1+u+u²)² on both sides");
    let at_q = f.eval_var(1, &int(0));
    let expect_q = (&a1.pow(12) * &(&(&(&v * &v) + &v) + &MultiPoly::constant(3, rat(4, 9)))).eval_var(1, &int(0));
    rep.check("f-derivation-u=0", a, at_q == expect_q, "at u = 0, f = a₁¹²(v² + v + 4/9)");

    let f_a6 = AutomorphicPoly::f_of(&AutomorphicPoly::a6()).reduce();
    rep.check("f-reduces-to-zero", a, f_a6.is_zero(), format!("reduce(f(a₆)) = {f_a6}"));
    let conj = &(-&AutomorphicPoly::a6()) - &AutomorphicPoly::g();
    let f_conj = AutomorphicPoly::f_of(&conj).reduce();
    rep.check("w15-root", a, f_conj.is_zero(), "f(−a₆−G) = 0: the conjugate root");
    rep
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn m(i: i32, j: i32, e: u32) -> AutomorphicPoly {
        AutomorphicPoly::monomial(Monomial::new(i, j, e), int(1))
    }

    #[test]
    fn reduce_examples() {
        let g = AutomorphicPoly::g();
        let a6 = AutomorphicPoly::a6();
        let a6sq = m(0, 0, 2).reduce();
        let expect = &(&(-&(&a6 * &g)) - &(&g * &g)) + &(&m(6, 0, 0) * &g).scale(&rat(5, 9));
        assert_eq!(a6sq, expect);
        let f = &(&(&(&a6 * &g) + &a6sq) + &(&g * &g)) - &(&m(6, 0, 0) * &g).scale(&rat(5, 9));
        assert!(f.is_zero());
        assert_eq!(m(0, 0, 3).reduce(), (&a6sq * &a6).reduce());
    }

    #[test]
    fn involution_examples() {
        let a6 = AutomorphicPoly::a6();
        let g = AutomorphicPoly::g();
        assert_eq!(a6.w15(), &(-&a6) - &g);
        assert_eq!(a6.w15().w15(), a6);
        assert_eq!(m(1, 1, 0).deck(), m(1, 1, 0));
        assert_eq!(m(1, 0, 0).deck(), -&m(1, 0, 0));
    }

    #[test]
    fn derivation() {
        let r = verify_f_derivation();
        assert!(r.passed(), "{r}");
    }

    #[test]
    fn basis_counts() {
        assert_eq!(weight_basis(6).len(), 4);
        assert_eq!(weight_basis(0), vec![Monomial::new(0, 0, 0)]);
        assert!(weight_basis(-1).is_empty());
        for t in 0..40 {
            let stars_bars = (t / 3 + 1) + if t >= 6 { (t - 6) / 3 + 1 } else { 0 };
            assert_eq!(weight_basis(t).len() as i32, stars_bars);
        }
    }

    fn poly() -> impl Strategy<Value = AutomorphicPoly> {
        prop::collection::vec((0i32..4, 0i32..3, 0u32..3, -5i64..5), 1..4).prop_map(|ts| {
            let mut p = AutomorphicPoly::zero();
            for (i, j, e, c) in ts {
                p.add_term(Monomial::new(i, j, e), rat(c, 3));
            }
            p
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]
        #[test]
        fn reduce_is_a_section(p in poly(), q in poly()) {
            let pq = p.mul_raw(&q).reduce();
            prop_assert_eq!(&pq, &(&p.reduce() * &q.reduce()));
            prop_assert_eq!(pq.reduce(), pq.clone());
            prop_assert!(pq.is_two_local());
        }

        #[test]
        fn involutions_commute(p in poly()) {
            let p = p.reduce();
            prop_assert_eq!(p.deck().deck(), p.clone());
            prop_assert_eq!(p.w15().w15(), p.clone());
            prop_assert_eq!(p.deck().w15(), p.w15().deck());
        }

        #[test]
        fn w15_is_ring_map(p in poly(), q in poly()) {
            prop_assert_eq!((&p * &q).w15(), &p.w15() * &q.w15());
        }
    }
}
