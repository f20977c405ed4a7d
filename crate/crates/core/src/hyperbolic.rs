//! Exact Möbius geometry of the hexagonal fundamental domain.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactnum::{certified_sign, int, numeric_eval, TowerElement};
use crate::quaternion::{embed, ladder, Named, QuatElement, QuatMatrix};
use crate::report::Report;

const ANCHOR: &str = "fundamental-domain";

/// A point of the upper half-plane with exact tower coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct UHPoint {
    z: TowerElement,
}

impl UHPoint {
    pub fn new(z: TowerElement) -> Result<Self> {
        if certified_sign(&z.imag_part())? != 1 {
            return Err(Error::InvalidArgument(format!("{z} is not in the upper half-plane")));
        }
        Ok(Self { z })
    }

    pub fn i() -> Self {
        Self { z: TowerElement::i() }
    }

    pub fn z(&self) -> &TowerElement {
        &self.z
    }

    /// Reflection z ↦ −z̄ across the imaginary axis.
    pub fn mirror(&self) -> Self {
        Self { z: -self.z.conj_i() }
    }

    pub fn to_f64(&self, digits: u32) -> Result<(f64, f64)> {
        let e = numeric_eval(&self.z, digits)?;
        Ok((e.re_f64(), e.im_f64()))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MoebiusMap {
    m: QuatMatrix,
}

impl MoebiusMap {
    pub fn new(m: QuatMatrix) -> Result<Self> {
        if certified_sign(&m.det())? != 1 {
            return Err(Error::InvalidArgument("determinant is not positive".into()));
        }
        Ok(Self { m })
    }

    pub fn from_quat(q: &QuatElement) -> Result<Self> {
        Self::new(embed(q))
    }

    pub fn named(n: Named) -> Self {
        Self::from_quat(&n.quat()).expect("named element has positive norm")
    }

    pub fn identity() -> Self {
        Self { m: QuatMatrix::identity() }
    }

    pub fn matrix(&self) -> &QuatMatrix {
        &self.m
    }

    pub fn compose(&self, other: &MoebiusMap) -> MoebiusMap {
        MoebiusMap { m: &self.m * &other.m }
    }

    pub fn inverse(&self) -> MoebiusMap {
        MoebiusMap { m: self.m.adjugate() }
    }
}

pub fn act(g: &MoebiusMap, p: &UHPoint) -> Result<UHPoint> {
    let [[a, b], [c, d]] = &g.m.m;
    let num = &(a * &p.z) + b;
    let den = &(c * &p.z) + d;
    if den.is_zero() {
        return Err(Error::PoleOfAction);
    }
    let z = &num * &den.inv().map_err(|_| Error::PoleOfAction)?;
    UHPoint::new(z)
}

fn q(n: Named) -> QuatElement {
    n.quat()
}

/// The quaternion word whose action on i gives vertex k.
pub fn vertex_word(k: usize) -> Result<QuatElement> {
    let w = q(Named::Omega);
    let w2 = w.pow(2);
    let h = q(Named::H);
    let w5 = q(Named::W5);
    let w5i = w5.inv()?;
    Ok(match k {
        1 => &(&h * &w) * &w5,
        2 => h,
        3 => &(&h * &w2) * &w5i,
        4 => &w * &w5i,
        5 => QuatElement::one(),
        6 => &w2 * &w5,
        _ => return Err(Error::InvalidArgument(format!("vertex index {k} outside 1..6"))),
    })
}

pub fn vertex(k: usize) -> Result<UHPoint> {
    act(&MoebiusMap::from_quat(&vertex_word(k)?)?, &UHPoint::i())
}

pub fn vertices() -> Vec<UHPoint> {
    (1..=6).map(|k| vertex(k).expect("vertex words are valid")).collect()
}

/// The three side-pairing maps with the vertex pairs they are claimed to carry.
pub fn edge_maps() -> Vec<(&'static str, QuatElement, [(usize, usize); 2])> {
    let w = q(Named::Omega);
    let h = q(Named::H);
    vec![
        ("h*omega^2", &h * &w.pow(2), [(5, 2), (6, 1)]),
        ("h*omega", &h * &w, [(5, 2), (4, 3)]),
        ("gamma", q(Named::Gamma), [(4, 6), (3, 1)]),
    ]
}

pub fn verify_edge_identifications() -> Report {
    let mut r = Report::new();
    let vs = vertices();
    let check_map = |r: &mut Report, label: &str, g: &QuatElement, pairs: &[(usize, usize)]| {
        let map = MoebiusMap::from_quat(g).expect("positive norm");
        for &(from, to) in pairs {
            let img = act(&map, &vs[from - 1]).expect("action defined");
            let diff = img.z() - vs[to - 1].z();
            r.check(
                &format!("edge-{label}-v{from}-v{to}"),
                ANCHOR,
                diff.is_zero(),
                format!("{label}·v{from} − v{to} = {diff}"),
            );
        }
    };
    for (label, g, pairs) in edge_maps() {
        check_map(&mut r, label, &g, &pairs);
    }
    check_map(&mut r, "ladder", &ladder(), &[(4, 5), (5, 6), (3, 2), (2, 1)]);
    for (k, v) in vs.iter().enumerate() {
        let ok = certified_sign(&v.z().imag_part()).map(|s| s == 1).unwrap_or(false);
        r.check(&format!("vertex-v{}", k + 1), ANCHOR, ok, format!("v{} = {}", k + 1, v.z()));
    }
    r
}

/// Partition of the six vertices under the side pairings, found by exact search.
pub fn vertex_orbits() -> Vec<Vec<usize>> {
    let vs = vertices();
    let mut parent: Vec<usize> = (0..6).collect();
    fn find(p: &mut Vec<usize>, x: usize) -> usize {
        if p[x] != x {
            let r = find(p, p[x]);
            p[x] = r;
        }
        p[x]
    }
    for (_, g, _) in edge_maps() {
        let map = MoebiusMap::from_quat(&g).expect("positive norm");
        for a in 0..6 {
            let img = act(&map, &vs[a]).expect("action defined");
            for b in 0..6 {
                if img == vs[b] {
                    let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
                    parent[ra] = rb;
                }
            }
        }
    }
    let mut orbits: Vec<Vec<usize>> = Vec::new();
    for a in 0..6 {
        let root = find(&mut parent, a);
        match orbits.iter_mut().find(|o| find(&mut parent, o[0] - 1) == root) {
            Some(o) => o.push(a + 1),
            None => orbits.push(vec![a + 1]),
        }
    }
    orbits
}

/// An order-3 element of Λ¹ fixing vertex k: the conjugate of ω by the vertex word.
pub fn stabilizer_generator(k: usize) -> Result<QuatElement> {
    let g = vertex_word(k)?;
    Ok(&(&g * &q(Named::Omega)) * &g.inv()?)
}

fn is_projective_identity(m: &QuatMatrix) -> bool {
    m.scalar_value().is_some_and(|s| !s.is_zero())
}

pub fn verify_presentation() -> Report {
    let mut r = Report::new();
    const P: &str = "presentation";
    let w = q(Named::Omega);
    let w2 = w.pow(2);
    let h = q(Named::H);
    let hi = h.inv().expect("norm one");
    let g = q(Named::Gamma);
    let gi = g.inv().expect("norm one");

    let omega_cubed = w.pow(3);
    r.check("omega-cubed", P, omega_cubed == QuatElement::one(), format!("ω³ = {omega_cubed}"));
    r.check("omega-cubed-matrix", P, is_projective_identity(&embed(&w).pow(3)), "embed(ω)³ scalar");

    let word = &(&(&(&(&w2 * &hi) * &g) * &h) * &w2) * &gi;
    let m = embed(&word).pow(3);
    r.check("second-relation", P, is_projective_identity(&m), format!("(ω²h⁻¹γhω²γ⁻¹)³ = {m:?}"));

    let a = &h * &w2;
    let b = &h * &w;
    let bi = b.inv().expect("norm one");
    let ba = embed(&(&bi * &a)).pow(3);
    r.check("relation-b-inv-a", P, is_projective_identity(&ba), format!("(b⁻¹a)³ = {ba:?}"));
    let conj = &(&(&bi * &g) * &a) * &gi;
    let bc = embed(&conj).pow(3);
    r.check("relation-b-inv-gamma-a", P, is_projective_identity(&bc), format!("(b⁻¹γaγ⁻¹)³ = {bc:?}"));

    let cyc = &(&(&(&(&w2 * &hi) * &gi) * &h) * &w2) * &g;
    let mc = embed(&cyc).pow(3);
    r.check("second-relation-vertex-cycle", P, is_projective_identity(&mc), format!("(ω²h⁻¹γ⁻¹hω²γ)³ = {mc:?}"));
    let conj_swapped = &(&(&bi * &gi) * &a) * &g;
    let bs = embed(&conj_swapped).pow(3);
    r.check("relation-b-inv-gamma-inv-a", P, is_projective_identity(&bs), format!("(b⁻¹γ⁻¹aγ)³ = {bs:?}"));

    let orbits = vertex_orbits();
    let expected = vec![vec![1, 3, 4, 6], vec![2, 5]];
    let mut sorted = orbits.clone();
    sorted.sort_by_key(|o| o.len());
    sorted.reverse();
    r.check("vertex-orbits", P, sorted == expected, format!("orbits {orbits:?}"));

    let vs = vertices();
    for k in 1..=6 {
        let ok = stabilizer_generator(k)
            .and_then(|s| {
                let fixes = act(&MoebiusMap::from_quat(&s)?, &vs[k - 1])? == vs[k - 1];
                let in_order = crate::quaternion::lambda_coordinates(&s).is_ok();
                Ok(fixes && in_order && s.reduced_norm() == int(1) && is_projective_identity(&embed(&s).pow(3)))
            })
            .unwrap_or(false);
        r.check(&format!("stabilizer-v{k}"), P, ok, "conjugate of ω fixes the vertex, has order 3, lies in Λ");
    }
    r
}

/// Unit tangent direction at p of the geodesic from p towards q.
fn tangent(p: (f64, f64), q: (f64, f64), center: Option<f64>) -> (f64, f64) {
    let t = match center {
        None => (0.0, if q.1 > p.1 { 1.0 } else { -1.0 }),
        Some(c) => {
            let (dx, dy) = (p.0 - c, p.1);
            let tp = dy.atan2(dx);
            let tq = q.1.atan2(q.0 - c);
            if tq > tp {
                (-dy, dx)
            } else {
                (dy, -dx)
            }
        }
    };
    let n = t.0.hypot(t.1);
    (t.0 / n, t.1 / n)
}

/// Center of the geodesic circle through p and q, or None for a vertical line.
pub fn geodesic_center(p: &UHPoint, q: &UHPoint) -> Result<Option<TowerElement>> {
    let dre = &p.z().real_part() - &q.z().real_part();
    if dre.is_zero() {
        return Ok(None);
    }
    let num = &p.z().abs_squared() - &q.z().abs_squared();
    Ok(Some(&num * &dre.scale(&int(2)).inv()?))
}

fn angle_between(a: (f64, f64), b: (f64, f64)) -> f64 {
    (a.0 * b.0 + a.1 * b.1).clamp(-1.0, 1.0).acos()
}

/// Interior angles at v₁..v₆ of the hexagon v₁v₂v₃v₄v₅v₆.
pub fn interior_angles(digits: u32) -> Result<Vec<f64>> {
    let vs = vertices();
    let pts: Vec<(f64, f64)> = vs.iter().map(|v| v.to_f64(digits)).collect::<Result<_>>()?;
    let center = |a: usize, b: usize| -> Result<Option<f64>> {
        Ok(match geodesic_center(&vs[a], &vs[b])? {
            None => None,
            Some(c) => Some(numeric_eval(&c, digits)?.re_f64()),
        })
    };
    let mut out = Vec::with_capacity(6);
    for k in 0..6 {
        let prev = (k + 5) % 6;
        let next = (k + 1) % 6;
        let t1 = tangent(pts[k], pts[prev], center(k, prev)?);
        let t2 = tangent(pts[k], pts[next], center(k, next)?);
        out.push(angle_between(t1, t2));
    }
    Ok(out)
}

/// Tolerance for numeric checks: 10^(−digits+2), floored at double-precision resolution.
pub fn angle_tolerance(digits: u32) -> f64 {
    10f64.powi(-(digits as i32) + 2).max(1e-12)
}

pub fn verify_geodesic_claims(digits: u32) -> Result<Report> {
    if digits < 10 {
        return Err(Error::InvalidArgument("digits must be at least 10".into()));
    }
    let mut r = Report::new();
    let tol = angle_tolerance(digits);
    let vs = vertices();
    let om = MoebiusMap::named(Named::Omega);
    for k in [5, 6] {
        let img = act(&om, &vs[k - 1])?;
        let m2 = img.z().abs_squared();
        r.check(&format!("unit-circle-omega-v{k}"), ANCHOR, m2 == TowerElement::one(), format!("|ω·v{k}|² = {m2}"));
    }

    let angles = interior_angles(digits)?;
    let sum: f64 = angles.iter().sum();
    r.check(
        "angle-sum",
        ANCHOR,
        (sum - 4.0 * PI / 3.0).abs() < tol,
        format!("Σ angles = {sum:.15}, expected 4π/3 = {:.15}, tol {tol:e}", 4.0 * PI / 3.0),
    );
    let area = 4.0 * PI - sum;
    r.check(
        "area",
        ANCHOR,
        (area - 8.0 * PI / 3.0).abs() < tol,
        format!("area = {area:.15}, expected 8π/3 = {:.15}", 8.0 * PI / 3.0),
    );

    let p5 = vs[4].to_f64(digits)?;
    for (label, nb) in [("v4", 3usize), ("v6", 5usize)] {
        let c = geodesic_center(&vs[4], &vs[nb])?.map(|c| numeric_eval(&c, digits).map(|e| e.re_f64())).transpose()?;
        let t = tangent(p5, vs[nb].to_f64(digits)?, c);
        let ang = angle_between(t, (0.0, 1.0)).min(angle_between(t, (0.0, -1.0)));
        r.check(
            &format!("angle-axis-v5-{label}"),
            ANCHOR,
            (ang - PI / 6.0).abs() < tol,
            format!("angle with imaginary axis = {ang:.15}"),
        );
    }

    for (a, b) in [(1, 3), (4, 6), (2, 2), (5, 5)] {
        let ok = vs[a - 1].mirror() == vs[b - 1];
        r.check(&format!("mirror-v{a}-v{b}"), ANCHOR, ok, format!("v{a} = −conj(v{b})"));
    }
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn s15() -> TowerElement {
        TowerElement::sqrt15()
    }

    #[test]
    fn act_examples() {
        let i = UHPoint::i();
        assert_eq!(act(&MoebiusMap::named(Named::Omega), &i).unwrap(), i);
        let k = (&TowerElement::from(4) + &s15()).pow(2);
        let hi = act(&MoebiusMap::named(Named::H), &i).unwrap();
        assert_eq!(hi.z(), &(&k * &TowerElement::i()));
        assert_eq!(act(&MoebiusMap::identity(), &hi).unwrap(), hi);
    }

    #[test]
    fn vertex_examples() {
        assert_eq!(vertex(5).unwrap(), UHPoint::i());
        assert_eq!(vertex(2).unwrap(), act(&MoebiusMap::named(Named::H), &UHPoint::i()).unwrap());
        assert!(vertex(7).is_err());
    }

    #[test]
    fn edges_and_presentation() {
        let r = verify_edge_identifications();
        assert!(r.passed(), "{r}");
        let r = verify_presentation();
        let failed: Vec<_> = r.failures().map(|c| c.id.as_str()).collect();
        assert_eq!(failed, ["second-relation", "relation-b-inv-gamma-a"], "{r}");
    }

    #[test]
    fn geodesics() {
        let r = verify_geodesic_claims(15).unwrap();
        assert!(r.passed(), "{r}");
        assert!(verify_geodesic_claims(5).is_err());
    }

    fn gen() -> impl Strategy<Value = Vec<usize>> {
        prop::collection::vec(0usize..3, 1..5)
    }

    fn word(ix: &[usize]) -> QuatElement {
        let gens = [q(Named::Omega), q(Named::H), q(Named::Gamma)];
        ix.iter().fold(QuatElement::one(), |acc, &k| &acc * &gens[k])
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(16))]
        #[test]
        fn group_action(a in gen(), b in gen()) {
            let (ga, gb) = (word(&a), word(&b));
            let z = vertex(6).unwrap();
            let lhs = act(&MoebiusMap::from_quat(&(&ga * &gb)).unwrap(), &z).unwrap();
            let inner = act(&MoebiusMap::from_quat(&gb).unwrap(), &z).unwrap();
            let rhs = act(&MoebiusMap::from_quat(&ga).unwrap(), &inner).unwrap();
            prop_assert_eq!(lhs, rhs);
        }
    }
}
