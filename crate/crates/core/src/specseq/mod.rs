//! The C₂ homotopy fixed-point spectral sequence for the deck involution on
//! R = Z₂[a₁,a₃,a₆]/f, computed on truncated windows, with its localizations,
//! the τ-ideal of the w₁₅ quotient and a KO reference chart.
//!
//! Classes are monomials ζᵏa₁ⁱa₃ʲa₆^ε in filtration s = k and internal degree
//! t = 2·weight, so t − s is the stem.

mod chart;
mod page;
mod theorem;
mod variants;

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use chart::{compute_einfty, ChartClass, ChartReport, ChartStem, Part};
pub use page::{run, Cell, SSPage, SSRun};
pub use theorem::{
    b0_dimension, build_e2, d3_factorizations, k_basis, verify_differentials, verify_e2, verify_rk_theorem,
    RkStemComparison,
};
pub use variants::{
    final_comparison, ko_pattern, localize, tau_ideal_ss, tau_leibniz_consistent, verify_localizations,
    verify_tau_ideal, w15_chart, w15_page, StemCount,
};

/// Which spectral sequence a class belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Kind {
    /// ζᵏa₁ⁱa₃ʲa₆^ε for the deck action on R or a localization.
    Plain,
    /// ζᵏa₁ⁱ·τ (or ω₃ζᵏa₁ⁱ·τ) in the ideal Z₄[a₁^±]·τ; τ sits in filtration 2, stem −2.
    Tau { omega: bool },
    /// ηᵏu^i in the fixed-point spectral sequence of KU → KO, i even.
    Ko,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SSClass {
    pub kind: Kind,
    pub k: u32,
    pub i: i32,
    pub j: i32,
    pub e: u32,
}

impl SSClass {
    pub const fn plain(k: u32, i: i32, j: i32, e: u32) -> Self {
        Self { kind: Kind::Plain, k, i, j, e }
    }

    pub const fn tau(k: u32, i: i32, omega: bool) -> Self {
        Self { kind: Kind::Tau { omega }, k, i, j: 0, e: 0 }
    }

    /// ηᵏu^i with i even.
    pub const fn ko(k: u32, i: i32) -> Self {
        Self { kind: Kind::Ko, k, i, j: 0, e: 0 }
    }

    pub fn weight(&self) -> i32 {
        self.i + 3 * self.j + 6 * self.e as i32
    }

    pub fn s(&self) -> u32 {
        match self.kind {
            Kind::Tau { .. } => self.k + 2,
            _ => self.k,
        }
    }

    pub fn t(&self) -> i32 {
        match self.kind {
            Kind::Ko => 2 * self.k as i32 + 2 * self.i,
            _ => 2 * self.weight(),
        }
    }

    pub fn stem(&self) -> i32 {
        self.t() - self.s() as i32
    }

    /// Lies in the E₂-term: on the 0-line the deck sign must be +1, above it −1 or +1 by parity of k.
    pub fn is_valid(&self) -> bool {
        match self.kind {
            Kind::Ko => self.i % 2 == 0,
            _ => (self.i + self.j - self.k as i32).rem_euclid(2) == 0,
        }
    }

    /// Coefficient group on E₂ is Z₂ (k = 0) or F₂.
    pub fn on_lattice_line(&self) -> bool {
        self.k == 0
    }

    pub fn times(&self, o: &SSClass) -> SSClass {
        SSClass { kind: self.kind, k: self.k + o.k, i: self.i + o.i, j: self.j + o.j, e: self.e + o.e }
    }

    /// Machine-readable form "z^k a1^i a3^j a6^e".
    pub fn monomial(&self) -> String {
        match self.kind {
            Kind::Plain => format!("z^{} a1^{} a3^{} a6^{}", self.k, self.i, self.j, self.e),
            Kind::Tau { omega } => {
                format!("z^{} a1^{} a3^0 a6^0 {}tau", self.k, self.i, if omega { "w " } else { "" })
            }
            Kind::Ko => format!("eta^{} u^{}", self.k, self.i),
        }
    }
}

impl fmt::Display for SSClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        let mut push = |name: &str, x: i64| match x {
            0 => {}
            1 => parts.push(name.to_string()),
            _ => parts.push(format!("{name}^{x}")),
        };
        match self.kind {
            Kind::Ko => {
                push("η", self.k as i64);
                push("u", self.i as i64);
            }
            Kind::Plain | Kind::Tau { .. } => {
                push("ζ", self.k as i64);
                push("a1", self.i as i64);
                push("a3", self.j as i64);
                push("a6", self.e as i64);
            }
        }
        if let Kind::Tau { omega } = self.kind {
            if omega {
                parts.insert(0, "ω".into());
            }
            parts.push("τ".into());
        }
        if parts.is_empty() {
            f.write_str("1")
        } else {
            f.write_str(&parts.join(" "))
        }
    }
}

/// Which of a₁, a₃ are inverted.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Localization {
    None,
    A1,
    A3,
    A1A3,
}

impl Localization {
    pub fn a1_inverted(self) -> bool {
        matches!(self, Localization::A1 | Localization::A1A3)
    }

    pub fn a3_inverted(self) -> bool {
        matches!(self, Localization::A3 | Localization::A1A3)
    }
}

/// Stem range and filtration cap of a computation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Window {
    pub stem_min: i32,
    pub stem_max: i32,
    pub fil_cap: u32,
}

impl Window {
    pub fn new(stem_min: i32, stem_max: i32, fil_cap: u32) -> Result<Self> {
        if stem_min > stem_max {
            return Err(Error::InvalidArgument(format!("empty window {stem_min}:{stem_max}")));
        }
        Ok(Self { stem_min, stem_max, fil_cap })
    }

    pub fn contains(&self, s: u32, stem: i32) -> bool {
        s <= self.fil_cap && (self.stem_min..=self.stem_max).contains(&stem)
    }

    /// Region on which pages are computed so that d₃ and d₇ are exact on the window.
    pub fn padded(&self) -> Self {
        Self { stem_min: self.stem_min - 2, stem_max: self.stem_max + 2, fil_cap: self.fil_cap + 10 }
    }

    /// Whether a class is far enough from the filtration cap and stem edges
    /// that no differential of length ≤ 7 into or out of it can leave the window.
    pub fn is_interior(&self, s: u32, stem: i32) -> bool {
        s + 7 <= self.fil_cap && stem > self.stem_min && stem < self.stem_max
    }
}

/// A spectral sequence given by its E₂ basis and differentials on basis classes.
pub trait Model: Sync {
    fn name(&self) -> String;
    /// Basis of E₂^{s,t}, sorted.
    fn classes_at(&self, s: u32, t: i32) -> Vec<SSClass>;
    /// Page indices r with possibly nonzero d_r.
    fn pages(&self) -> Vec<u32>;
    /// d_r of a basis class as a mod-2 sum of basis classes.
    fn differential(&self, r: u32, c: &SSClass) -> Result<Vec<SSClass>>;
    /// Whether a class is inside the reported exponent box (Laurent models compute a margin beyond it).
    fn reported(&self, _c: &SSClass) -> bool {
        true
    }
    /// Whether a class lies in the computed exponent box; differentials leaving it are truncated.
    fn in_box(&self, _c: &SSClass) -> bool {
        true
    }
}

/// d₃ on the seven E₂ algebra generators.
pub struct Generator {
    pub name: &'static str,
    pub class: SSClass,
    pub d3: Option<SSClass>,
}

pub const ETA: SSClass = SSClass::plain(1, 1, 0, 0);
pub const NU: SSClass = SSClass::plain(3, 0, 1, 0);
pub const ZETA3_A1: SSClass = SSClass::plain(3, 1, 0, 0);

pub fn generator_table() -> [Generator; 7] {
    [
        Generator { name: "ζ²", class: SSClass::plain(2, 0, 0, 0), d3: Some(SSClass::plain(5, 1, 0, 0)) },
        Generator { name: "ζa₁", class: SSClass::plain(1, 1, 0, 0), d3: None },
        Generator { name: "ζa₃", class: SSClass::plain(1, 0, 1, 0), d3: Some(SSClass::plain(4, 1, 1, 0)) },
        Generator { name: "a₁²", class: SSClass::plain(0, 2, 0, 0), d3: Some(SSClass::plain(3, 3, 0, 0)) },
        Generator { name: "a₁a₃", class: SSClass::plain(0, 1, 1, 0), d3: None },
        Generator { name: "a₃²", class: SSClass::plain(0, 0, 2, 0), d3: Some(SSClass::plain(3, 1, 2, 0)) },
        Generator { name: "a₆", class: SSClass::plain(0, 0, 0, 1), d3: Some(SSClass::plain(3, 1, 0, 1)) },
    ]
}

/// Each generator's d₃ is c·ζ³a₁·g; returns the c's in table order.
pub fn leibniz_coefficients() -> Result<[u8; 7]> {
    let table = generator_table();
    let mut out = [0u8; 7];
    for (slot, g) in out.iter_mut().zip(&table) {
        *slot = match g.d3 {
            None => 0,
            Some(img) if img == g.class.times(&ZETA3_A1) => 1,
            Some(img) => {
                return Err(Error::Undefined(format!("d₃({}) = {img} is not a multiple of ζ³a₁·{}", g.name, g.class)))
            }
        };
    }
    Ok(out)
}

/// Generator exponents (ζ², ζa₁, ζa₃, a₁², a₁a₃, a₃², a₆) of one factorization.
pub type Factorization = [i32; 7];

/// Factorizations of a connective plain class into the generators, all of them or only the first.
pub fn factorizations(c: &SSClass, first_only: bool) -> Vec<Factorization> {
    let (k, i, j, e) = (c.k as i32, c.i, c.j, c.e as i32);
    let mut out = Vec::new();
    if i < 0 || j < 0 || !c.is_valid() {
        return out;
    }
    for p in 0..=i.min(k) {
        for q in 0..=j.min(k - p) {
            if (k - p - q) % 2 != 0 {
                continue;
            }
            for r in 0..=(i - p).min(j - q) {
                let (ri, rj) = (i - p - r, j - q - r);
                if ri % 2 != 0 || rj % 2 != 0 {
                    continue;
                }
                out.push([(k - p - q) / 2, p, q, ri / 2, r, rj / 2, e]);
                if first_only {
                    return out;
                }
            }
        }
    }
    out
}

/// Σ n_g c_g mod 2 for one factorization.
pub fn leibniz_value(f: &Factorization, coeffs: &[u8; 7]) -> u8 {
    (f.iter().zip(coeffs).map(|(n, c)| n * *c as i32).sum::<i32>().rem_euclid(2)) as u8
}

/// Closed form of the d₃ coefficient: ((k + 3i + j)/2 + ε) mod 2.
pub fn phi(c: &SSClass) -> u8 {
    ((c.k as i32 + 3 * c.i + c.j).div_euclid(2) + c.e as i32).rem_euclid(2) as u8
}

/// d₃ coefficient of a plain class by the Leibniz rule. Laurent classes are first
/// multiplied by a₁^{4N}a₃^{8M}, which are d₃-cycles with even Leibniz weight.
pub fn d3_coefficient(c: &SSClass) -> Result<u8> {
    let coeffs = leibniz_coefficients()?;
    let shift_i = if c.i < 0 { 4 * ((-c.i + 3) / 4) } else { 0 };
    let shift_j = if c.j < 0 { 8 * ((-c.j + 7) / 8) } else { 0 };
    let shifted = SSClass { i: c.i + shift_i, j: c.j + shift_j, ..*c };
    let f = factorizations(&shifted, true);
    let f = f.first().ok_or_else(|| Error::InvalidArgument(format!("{c} is not an E₂ class")))?;
    Ok(leibniz_value(f, &coeffs))
}

/// d₃ of a plain class.
pub fn d3(c: &SSClass) -> Result<Vec<SSClass>> {
    Ok(if d3_coefficient(c)? == 1 { vec![c.times(&ZETA3_A1)] } else { vec![] })
}

/// d₇ on classes ζᵏa₃ˡ and ζᵏa₃ˡa₆; zero on classes involving a₁.
pub fn d7(c: &SSClass) -> Vec<SSClass> {
    if c.kind != Kind::Plain || c.i != 0 {
        return vec![];
    }
    let r = (3 * c.j - c.k as i32).rem_euclid(8);
    let fires = if c.e == 0 { r == 4 } else { r == 6 };
    if fires {
        vec![SSClass::plain(c.k + 7, 0, c.j + 1, c.e)]
    } else {
        vec![]
    }
}

/// The deck spectral sequence for R or one of its Laurent localizations.
#[derive(Clone, Debug)]
pub struct PlainModel {
    pub loc: Localization,
    /// Box bound on inverted exponents, in the reported region.
    pub bound: i32,
    /// Whether ε = 1 classes are present (false for the w₁₅-fixed subring).
    pub with_a6: bool,
}

impl PlainModel {
    pub fn connective() -> Self {
        Self { loc: Localization::None, bound: 0, with_a6: true }
    }

    pub fn localized(loc: Localization, bound: i32) -> Self {
        Self { loc, bound, with_a6: true }
    }

    fn margin_bound(&self) -> i32 {
        self.bound + 2
    }

    /// Per weight, classes form a one-parameter family; the box bounds the free exponent.
    fn exponents_ok(&self, i: i32, j: i32, b: i32) -> bool {
        match self.loc {
            Localization::None => i >= 0 && j >= 0,
            Localization::A1 => (0..=b).contains(&j),
            Localization::A3 => (0..=b).contains(&i),
            Localization::A1A3 => j.abs() <= b,
        }
    }
}

impl Model for PlainModel {
    fn name(&self) -> String {
        let loc = match self.loc {
            Localization::None => "",
            Localization::A1 => " a1-local",
            Localization::A3 => " a3-local",
            Localization::A1A3 => " a1a3-local",
        };
        format!("plain{loc}{}", if self.with_a6 { "" } else { " a6-free" })
    }

    fn classes_at(&self, s: u32, t: i32) -> Vec<SSClass> {
        if t.rem_euclid(2) != 0 {
            return vec![];
        }
        let w = t / 2;
        let b = self.margin_bound();
        let mut out = Vec::new();
        for e in 0..=u32::from(self.with_a6) {
            let rest = w - 6 * e as i32;
            let (jlo, jhi) = match self.loc {
                Localization::None => (0, rest.div_euclid(3)),
                Localization::A1 => (0, b),
                Localization::A3 => ((rest - b).div_euclid(3) - 1, rest.div_euclid(3) + 1),
                Localization::A1A3 => (-b, b),
            };
            for j in jlo..=jhi {
                let i = rest - 3 * j;
                let c = SSClass::plain(s, i, j, e);
                if self.exponents_ok(i, j, b) && c.is_valid() {
                    out.push(c);
                }
            }
        }
        out.sort();
        out
    }

    fn pages(&self) -> Vec<u32> {
        vec![3, 7]
    }

    fn differential(&self, r: u32, c: &SSClass) -> Result<Vec<SSClass>> {
        match r {
            3 => d3(c),
            7 => Ok(d7(c)),
            _ => Ok(vec![]),
        }
    }

    fn reported(&self, c: &SSClass) -> bool {
        self.loc == Localization::None || self.exponents_ok(c.i, c.j, self.bound)
    }

    fn in_box(&self, c: &SSClass) -> bool {
        self.exponents_ok(c.i, c.j, self.margin_bound())
    }
}

/// Z₄[a₁^±]·τ with deck a₁ ↦ −a₁ and d₃(τ) = η³a₁⁻²τ; two copies indexed by the Z₄-basis {1, ω₃}.
#[derive(Clone, Debug)]
pub struct TauModel {
    pub bound: i32,
}

impl TauModel {
    /// d₃ coefficient: Leibniz weight of ζᵏa₁ⁱ plus 1 for τ.
    pub fn psi(c: &SSClass) -> Result<u8> {
        Ok((d3_coefficient(&SSClass::plain(c.k, c.i, 0, 0))? + 1) % 2)
    }
}

impl Model for TauModel {
    fn name(&self) -> String {
        "tau-ideal".into()
    }

    fn classes_at(&self, s: u32, t: i32) -> Vec<SSClass> {
        if s < 2 || t.rem_euclid(2) != 0 {
            return vec![];
        }
        let i = t / 2;
        if i.abs() > self.bound + 2 {
            return vec![];
        }
        let mut out: Vec<SSClass> =
            [false, true].iter().map(|&w| SSClass::tau(s - 2, i, w)).filter(SSClass::is_valid).collect();
        out.sort();
        out
    }

    fn pages(&self) -> Vec<u32> {
        vec![3]
    }

    fn differential(&self, r: u32, c: &SSClass) -> Result<Vec<SSClass>> {
        if r != 3 || Self::psi(c)? == 0 {
            return Ok(vec![]);
        }
        Ok(vec![SSClass { k: c.k + 3, i: c.i + 1, ..*c }])
    }

    fn reported(&self, c: &SSClass) -> bool {
        c.i.abs() <= self.bound
    }
}

/// H*(C₂; Z[u^±]) = Z[η, u^{±2}]/(2η) with d₃(u²) = η³.
#[derive(Clone, Debug)]
pub struct KoModel {
    pub bound: i32,
}

impl Model for KoModel {
    fn name(&self) -> String {
        "KO".into()
    }

    fn classes_at(&self, s: u32, t: i32) -> Vec<SSClass> {
        let twice_i = t - 2 * s as i32;
        if twice_i.rem_euclid(4) != 0 || (twice_i / 2).abs() > self.bound + 4 {
            return vec![];
        }
        vec![SSClass::ko(s, twice_i / 2)]
    }

    fn pages(&self) -> Vec<u32> {
        vec![3]
    }

    /// d₃(ηᵏu^{2m}) = m·η^{k+3}u^{2m−2}.
    fn differential(&self, r: u32, c: &SSClass) -> Result<Vec<SSClass>> {
        let m = c.i / 2;
        if r != 3 || m.rem_euclid(2) == 0 {
            return Ok(vec![]);
        }
        Ok(vec![SSClass::ko(c.k + 3, c.i - 2)])
    }

    fn reported(&self, c: &SSClass) -> bool {
        c.i.abs() <= self.bound
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn generator_table_is_leibniz() {
        assert_eq!(leibniz_coefficients().unwrap(), [1, 0, 1, 1, 0, 1, 1]);
    }

    #[test]
    fn d3_examples() {
        assert!(d3(&SSClass::plain(0, 4, 0, 0)).unwrap().is_empty());
        assert_eq!(d3(&SSClass::plain(8, 3, 1, 0)).unwrap(), vec![SSClass::plain(11, 4, 1, 0)]);
        assert_eq!(d3(&SSClass::plain(4, 0, 0, 1)).unwrap(), vec![SSClass::plain(7, 1, 0, 1)]);
        assert_eq!(d3(&SSClass::plain(2, 0, 0, 0)).unwrap(), vec![SSClass::plain(5, 1, 0, 0)]);
    }

    #[test]
    fn d7_examples() {
        assert_eq!(d7(&SSClass::plain(4, 0, 0, 0)), vec![SSClass::plain(11, 0, 1, 0)]);
        assert_eq!(d7(&SSClass::plain(2, 0, 0, 1)), vec![SSClass::plain(9, 0, 1, 1)]);
        assert!(d7(&SSClass::plain(8, 0, 0, 0)).is_empty());
        assert!(d7(&NU).is_empty());
    }

    #[test]
    fn bidegrees() {
        assert_eq!((ETA.s(), ETA.t(), ETA.stem()), (1, 2, 1));
        assert_eq!((NU.s(), NU.t(), NU.stem()), (3, 6, 3));
        let tau = SSClass::tau(0, 0, false);
        assert_eq!((tau.s(), tau.stem()), (2, -2));
        assert_eq!(SSClass::ko(1, 0).stem(), 1);
        assert_eq!(NU.monomial(), "z^3 a1^0 a3^1 a6^0");
    }

    #[test]
    fn model_cells() {
        let m = PlainModel::connective();
        assert_eq!(m.classes_at(1, 2), vec![ETA]);
        assert_eq!(m.classes_at(3, 6), vec![SSClass::plain(3, 0, 1, 0), SSClass::plain(3, 3, 0, 0)]);
        assert_eq!(m.classes_at(2, 0), vec![SSClass::plain(2, 0, 0, 0)]);
        assert!(m.classes_at(0, 2).is_empty());
        let loc = PlainModel::localized(Localization::A3, 4);
        assert!(loc.classes_at(0, 0).iter().any(|c| c.j < 0));
    }

    proptest! {
        #[test]
        fn leibniz_matches_closed_form(k in 0u32..12, i in 0i32..12, j in 0i32..12, e in 0u32..2) {
            let c = SSClass::plain(k, i, j, e);
            prop_assume!(c.is_valid());
            let coeffs = leibniz_coefficients().unwrap();
            let values: Vec<u8> = factorizations(&c, false).iter().map(|f| leibniz_value(f, &coeffs)).collect();
            prop_assert!(!values.is_empty());
            prop_assert!(values.iter().all(|v| *v == phi(&c)));
        }

        #[test]
        fn sparsity(k in 0u32..20, i in -10i32..20, j in -10i32..20, e in 0u32..2) {
            let c = SSClass::plain(k, i, j, e);
            prop_assume!(c.is_valid());
            prop_assert_eq!((c.stem() - c.s() as i32).rem_euclid(4), 0);
        }

        #[test]
        fn d3_then_d3_vanishes(k in 0u32..12, i in -8i32..12, j in -8i32..12, e in 0u32..2) {
            let c = SSClass::plain(k, i, j, e);
            prop_assume!(c.is_valid());
            for x in d3(&c).unwrap() {
                prop_assert!(d3(&x).unwrap().is_empty());
            }
        }

        #[test]
        fn d7_then_d7_vanishes(k in 0u32..30, j in -8i32..12, e in 0u32..2) {
            let c = SSClass::plain(k, 0, j, e);
            prop_assume!(c.is_valid());
            for x in d7(&c) {
                prop_assert!(d7(&x).is_empty());
                prop_assert_eq!((x.s(), x.t()), (c.s() + 7, c.t() + 6));
            }
        }
    }
}
