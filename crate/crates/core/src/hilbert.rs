//! Local Hilbert symbols over Q and the CM-divisor intersection criterion.

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactnum::Rational;
use crate::report::Report;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Place {
    Prime(u64),
    Infinity,
}

impl fmt::Display for Place {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Place::Prime(p) => write!(f, "{p}"),
            Place::Infinity => f.write_str("∞"),
        }
    }
}

impl Serialize for Place {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Place::Prime(p) => s.serialize_u64(*p),
            Place::Infinity => s.serialize_str("inf"),
        }
    }
}

impl<'de> Deserialize<'de> for Place {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v = serde_json_value::Value::deserialize(d)?;
        match v {
            serde_json_value::Value::Num(p) => Ok(Place::Prime(p)),
            serde_json_value::Value::Str(s) if s == "inf" => Ok(Place::Infinity),
            _ => Err(serde::de::Error::custom("expected a prime or \"inf\"")),
        }
    }
}

mod serde_json_value {
    use serde::Deserialize;

    #[derive(Deserialize)]
    #[serde(untagged)]
    pub enum Value {
        Num(u64),
        Str(String),
    }
}

/// Integer representative of the square class of a nonzero rational.
fn square_class_int(a: &Rational) -> BigInt {
    a.numer() * a.denom()
}

fn split_p(n: &BigInt, p: &BigInt) -> (u32, BigInt) {
    let mut v = 0;
    let mut m = n.clone();
    while (&m % p).is_zero() {
        m /= p;
        v += 1;
    }
    (v, m)
}

/// Legendre symbol (u/p) for odd prime p and u prime to p.
fn legendre(u: &BigInt, p: &BigInt) -> i8 {
    let e = (p - 1u32) / 2u32;
    let r = u.mod_floor(p).modpow(&e, p);
    if r.is_one() {
        1
    } else {
        -1
    }
}

fn mod8(n: &BigInt) -> u32 {
    n.mod_floor(&BigInt::from(8)).to_u32().expect("residue")
}

pub fn hilbert_symbol(a: &Rational, b: &Rational, place: Place) -> Result<i8> {
    if a.is_zero() || b.is_zero() {
        return Err(Error::ZeroHilbertArgument);
    }
    let (a, b) = (square_class_int(a), square_class_int(b));
    match place {
        Place::Infinity => Ok(if a.is_negative() && b.is_negative() { -1 } else { 1 }),
        Place::Prime(2) => {
            let two = BigInt::from(2);
            let (al, u) = split_p(&a, &two);
            let (be, v) = split_p(&b, &two);
            let eps = |x: &BigInt| ((mod8(x) + 7) % 8 / 2) % 2;
            let om = |x: &BigInt| {
                let r = mod8(x);
                u32::from(r == 3 || r == 5)
            };
            let e = eps(&u) * eps(&v) + al * om(&v) + be * om(&u);
            Ok(if e % 2 == 0 { 1 } else { -1 })
        }
        Place::Prime(p) => {
            let pb = BigInt::from(p);
            let (al, u) = split_p(&a, &pb);
            let (be, v) = split_p(&b, &pb);
            let mut s: i8 = if (al * be) % 2 == 1 && (p - 1) / 2 % 2 == 1 { -1 } else { 1 };
            if be % 2 == 1 {
                s *= legendre(&u, &pb);
            }
            if al % 2 == 1 {
                s *= legendre(&v, &pb);
            }
            Ok(s)
        }
    }
}

/// Places where (a,b) = −1.
pub fn ramified_places(a: &Rational, b: &Rational) -> Result<BTreeSet<Place>> {
    if a.is_zero() || b.is_zero() {
        return Err(Error::ZeroHilbertArgument);
    }
    let prod = square_class_int(a) * square_class_int(b);
    let mut candidates: BTreeSet<u64> = crate::exactnum::prime_support(&prod).into_iter().collect();
    candidates.insert(2);
    let mut out = BTreeSet::new();
    for p in candidates {
        if hilbert_symbol(a, b, Place::Prime(p))? == -1 {
            out.insert(Place::Prime(p));
        }
    }
    if hilbert_symbol(a, b, Place::Infinity)? == -1 {
        out.insert(Place::Infinity);
    }
    Ok(out)
}

/// Order generated by an element of the given trace and norm in an imaginary quadratic field.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CMOrder {
    pub label: String,
    pub trace: i64,
    pub norm: i64,
    pub discriminant: i64,
}

impl CMOrder {
    pub fn new(label: &str, trace: i64, norm: i64) -> Result<Self> {
        let discriminant = trace * trace - 4 * norm;
        if discriminant >= 0 {
            return Err(Error::InvalidArgument(format!("{label}: discriminant {discriminant} is not negative")));
        }
        Ok(Self { label: label.into(), trace, norm, discriminant })
    }

    /// Discriminants −3, −7, −15 attached to P₆, Q and P₂′.
    pub fn standard() -> [CMOrder; 3] {
        [
            CMOrder::new("P6", -1, 1).expect("valid"),
            CMOrder::new("Q", -1, 2).expect("valid"),
            CMOrder::new("P2'", -1, 4).expect("valid"),
        ]
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntersectionRow {
    pub m: i64,
    pub partner: i64,
    pub delta: i64,
    pub places: BTreeSet<Place>,
}

pub fn delta(ox: &CMOrder, oy: &CMOrder, m: i64) -> i64 {
    let s = 2 * m + ox.trace * oy.trace;
    s * s - ox.discriminant * oy.discriminant
}

/// The form with N(x)N(y) in place of d_x·d_y.
pub fn delta_norm_form(ox: &CMOrder, oy: &CMOrder, m: i64) -> i64 {
    let s = 2 * m + ox.trace * oy.trace;
    s * s - ox.norm * oy.norm
}

pub fn cm_intersection_rows(ox: &CMOrder, oy: &CMOrder) -> Result<Vec<IntersectionRow>> {
    if ox.discriminant == oy.discriminant {
        return Err(Error::InvalidArgument("orders must have distinct discriminants".into()));
    }
    let tt = ox.trace * oy.trace;
    let mut rows = Vec::new();
    // Pairs {m, −m−TrTr} share Δ; list m ≥ partner.
    let mut m = Integer::div_ceil(&(-tt), &2);
    loop {
        let d = delta(ox, oy, m);
        if d >= 0 {
            break;
        }
        let dr = Rational::from_integer(d.into());
        let px = ramified_places(&dr, &Rational::from_integer(ox.discriminant.into()))?;
        let py = ramified_places(&dr, &Rational::from_integer(oy.discriminant.into()))?;
        if px != py {
            return Err(Error::Undefined(format!("symbols differ at m={m}: {px:?} vs {py:?}")));
        }
        rows.push(IntersectionRow { m, partner: -m - tt, delta: d, places: px });
        m += 1;
    }
    Ok(rows)
}

/// A prime p when some row is ramified exactly at {p, ∞, 3, 5}.
pub fn intersection_verdict(rows: &[IntersectionRow]) -> Option<u64> {
    rows.iter().find_map(|r| {
        let finite: Vec<u64> = r
            .places
            .iter()
            .filter_map(|q| match q {
                Place::Prime(p) if *p != 3 && *p != 5 => Some(*p),
                _ => None,
            })
            .collect();
        let expected: BTreeSet<Place> = finite
            .first()
            .map(|&p| [Place::Prime(p), Place::Infinity, Place::Prime(3), Place::Prime(5)].into_iter().collect())
            .unwrap_or_default();
        (finite.len() == 1 && r.places == expected).then(|| finite[0])
    })
}

/// The three pairs (P₆,Q), (P₆,P₂′), (Q,P₂′) with their rows.
pub fn table_pairs() -> Result<Vec<(CMOrder, CMOrder, Vec<IntersectionRow>)>> {
    let [p6, q, p2] = CMOrder::standard();
    let pairs = [(p6.clone(), q.clone()), (p6, p2.clone()), (q, p2)];
    pairs
        .into_iter()
        .map(|(a, b)| {
            let rows = cm_intersection_rows(&a, &b)?;
            Ok((a, b, rows))
        })
        .collect()
}

/// Expected rows: (first m, Δ, finite ramified prime).
pub const EXPECTED_TABLE: [&[(i64, i64, u64)]; 3] = [
    &[(0, -20, 5), (1, -12, 3)],
    &[(0, -44, 11), (1, -36, 3), (2, -20, 5)],
    &[(0, -104, 13), (1, -96, 3), (2, -80, 5), (3, -56, 7), (4, -24, 3)],
];

pub fn verify_intersections() -> Report {
    let mut r = Report::new();
    const A: &str = "cm-intersections";
    let pairs = match table_pairs() {
        Ok(p) => p,
        Err(e) => {
            r.check("rows", A, false, e.to_string());
            return r;
        }
    };
    for ((ox, oy, rows), expected) in pairs.iter().zip(EXPECTED_TABLE) {
        let got: Vec<(i64, i64, BTreeSet<Place>)> =
            rows.iter().map(|row| (row.m, row.delta, row.places.clone())).collect();
        let want: Vec<(i64, i64, BTreeSet<Place>)> = expected
            .iter()
            .map(|&(m, d, p)| (m, d, [Place::Prime(p), Place::Infinity].into_iter().collect()))
            .collect();
        let id = format!("rows-{}-{}", ox.label, oy.label);
        r.check(&id, A, got == want, format!("{} rows: {}", rows.len(), format_rows(rows)));
        let verdict = intersection_verdict(rows);
        r.check(
            &format!("verdict-{}-{}", ox.label, oy.label),
            A,
            verdict.is_none(),
            match verdict {
                None => "no intersection over Z[1/15]".to_string(),
                Some(p) => format!("intersection in characteristic {p}"),
            },
        );
        let printed: Vec<i64> = rows.iter().map(|row| delta_norm_form(ox, oy, row.m)).collect();
        r.push(
            &format!("norm-form-{}-{}", ox.label, oy.label),
            A,
            crate::report::Status::Inconclusive,
            format!(
                "with N(x)N(y) in place of d_x·d_y the same m give Δ = {printed:?}, which does not match the table"
            ),
        );
    }
    r
}

pub fn format_rows(rows: &[IntersectionRow]) -> String {
    rows.iter()
        .map(|row| {
            let places: Vec<String> = row.places.iter().map(|p| p.to_string()).collect();
            format!("m={},{} Δ={} {{{}}}", row.m, row.partner, row.delta, places.join(","))
        })
        .collect::<Vec<_>>()
        .join("; ")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::{int, rat};
    use proptest::prelude::*;

    fn places(ps: &[Place]) -> BTreeSet<Place> {
        ps.iter().copied().collect()
    }

    #[test]
    fn symbol_examples() {
        assert_eq!(hilbert_symbol(&int(-20), &int(-3), Place::Infinity).unwrap(), -1);
        assert_eq!(hilbert_symbol(&int(-20), &int(-3), Place::Prime(5)).unwrap(), -1);
        for p in [2, 3, 5, 7] {
            assert_eq!(hilbert_symbol(&int(1), &int(-7), Place::Prime(p)).unwrap(), 1);
        }
        assert!(hilbert_symbol(&int(0), &int(1), Place::Infinity).is_err());
    }

    #[test]
    fn ramification_examples() {
        use Place::*;
        assert_eq!(ramified_places(&int(-20), &int(-3)).unwrap(), places(&[Prime(5), Infinity]));
        assert_eq!(ramified_places(&int(-24), &int(-7)).unwrap(), places(&[Prime(3), Infinity]));
        assert_eq!(ramified_places(&int(-1), &int(-1)).unwrap(), places(&[Prime(2), Infinity]));
        assert_eq!(ramified_places(&int(-3), &int(5)).unwrap(), places(&[Prime(3), Prime(5)]));
        assert_eq!(ramified_places(&rat(-1, 4), &int(-1)).unwrap(), places(&[Prime(2), Infinity]));
    }

    #[test]
    fn table_reproduced() {
        let r = verify_intersections();
        assert!(r.passed(), "{r}");
        let total: usize = table_pairs().unwrap().iter().map(|(_, _, rows)| rows.len()).sum();
        assert_eq!(total, 10);
    }

    #[test]
    fn verdicts() {
        use Place::*;
        let row = |ps: &[Place]| IntersectionRow { m: 0, partner: 0, delta: -1, places: places(ps) };
        assert_eq!(intersection_verdict(&[row(&[Prime(7), Infinity, Prime(3), Prime(5)])]), Some(7));
        assert_eq!(intersection_verdict(&[row(&[Prime(3), Infinity])]), None);
    }

    #[test]
    fn place_json_round_trip() {
        let s: BTreeSet<Place> = places(&[Place::Prime(5), Place::Infinity]);
        let j = serde_json::to_string(&s).unwrap();
        assert_eq!(j, "[5,\"inf\"]");
        let back: BTreeSet<Place> = serde_json::from_str(&j).unwrap();
        assert_eq!(back, s);
    }

    fn nonzero() -> impl Strategy<Value = i64> {
        prop_oneof![-2000i64..-1, 1i64..2000]
    }

    proptest! {
        #[test]
        fn product_formula(a in nonzero(), b in nonzero()) {
            prop_assert_eq!(ramified_places(&int(a), &int(b)).unwrap().len() % 2, 0);
        }

        #[test]
        fn symmetric_and_bimultiplicative(a in nonzero(), b in nonzero(), c in nonzero()) {
            for p in [Place::Prime(2), Place::Prime(3), Place::Prime(5), Place::Prime(7), Place::Infinity] {
                let s = |x: i64, y: i64| hilbert_symbol(&int(x), &int(y), p).unwrap();
                prop_assert_eq!(s(a, b), s(b, a));
                let ac = hilbert_symbol(&(int(a) * int(c)), &int(b), p).unwrap();
                prop_assert_eq!(ac, s(a, b) * s(c, b));
            }
        }
    }
}
