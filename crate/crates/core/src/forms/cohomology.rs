//! Weight slices, C₂ group cohomology, Mayer–Vietoris H¹ and Serre duality.

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;

use super::{weight_basis, AutomorphicPoly, Monomial};
use crate::error::{Error, Result};
use crate::exactnum::{int, is_two_integral, Rational};
use crate::linalg::{add_scaled_identity, kernel_basis, kernel_mod_image, negate, split_two_power, IntMatrix};
use crate::report::Report;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Action {
    /// a₁ ↦ −a₁, a₃ ↦ −a₃, a₆ ↦ a₆.
    Deck,
    /// a₆ ↦ −a₆ − G.
    W15,
}

impl Action {
    pub fn apply(self, p: &AutomorphicPoly) -> AutomorphicPoly {
        match self {
            Action::Deck => p.deck(),
            Action::W15 => p.w15(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WeightSlice {
    pub weight: i32,
    pub basis: Vec<Monomial>,
}

impl WeightSlice {
    pub fn new(weight: i32) -> Self {
        Self { weight, basis: weight_basis(weight) }
    }

    /// A slice with an explicit basis, e.g. a truncation of a Laurent localization.
    pub fn from_basis(weight: i32, basis: Vec<Monomial>) -> Self {
        Self { weight, basis }
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Integer matrix of a ring endomorphism in the monomial basis (columns are images).
    pub fn matrix(&self, action: Action) -> Result<IntMatrix> {
        let n = self.dim();
        let mut m = vec![vec![BigInt::zero(); n]; n];
        for (c, mono) in self.basis.iter().enumerate() {
            let img = action.apply(&AutomorphicPoly::monomial(*mono, int(1)));
            for (mi, coeff) in img.terms() {
                let r = self
                    .basis
                    .iter()
                    .position(|b| b == mi)
                    .ok_or_else(|| Error::Undefined(format!("image term {mi} leaves weight {}", self.weight)))?;
                if !coeff.is_integer() {
                    return Err(Error::Undefined(format!("non-integral matrix entry {coeff}")));
                }
                m[r][c] = coeff.to_integer();
            }
        }
        Ok(m)
    }
}

pub fn w15_trace(t: i32) -> Result<i64> {
    if t < 2 || t % 2 != 0 {
        return Err(Error::InvalidArgument(format!("weight {t} must be even and at least 2")));
    }
    let m = WeightSlice::new(t).matrix(Action::W15)?;
    let tr: BigInt = (0..m.len()).map(|k| m[k][k].clone()).sum();
    Ok(tr.to_i64().expect("small"))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CohomologyGroup {
    pub s: u32,
    pub t: i32,
    pub free_rank: usize,
    /// (generator name, order) for each cyclic 2-primary summand.
    pub torsion_generators: Vec<(String, u64)>,
}

impl CohomologyGroup {
    pub fn f2_dim(&self) -> usize {
        self.torsion_generators.len()
    }

    pub fn is_elementary(&self) -> bool {
        self.torsion_generators.iter().all(|(_, o)| *o == 2)
    }
}

/// H^s(C₂; Zⁿ) for the involution σ: H⁰ = ker(1−σ), H^even = ker(1−σ)/im(1+σ), H^odd = ker(1+σ)/im(1−σ).
/// Returns the free rank and the 2-power orders of the torsion summands.
pub fn involution_cohomology(sigma: &IntMatrix, n: usize, s: u32) -> Result<(usize, Vec<u64>)> {
    if n == 0 {
        return Ok((0, vec![]));
    }
    let one_minus = add_scaled_identity(&negate(sigma), 1);
    let one_plus = add_scaled_identity(sigma, 1);
    if s == 0 {
        return Ok((kernel_basis(&one_minus, n).len(), vec![]));
    }
    let (a, b) = if s.is_multiple_of(2) { (&one_minus, &one_plus) } else { (&one_plus, &one_minus) };
    let q = kernel_mod_image(a, b, n);
    let mut orders = Vec::new();
    for d in &q.torsion {
        let (v, odd) = split_two_power(d);
        if !odd.is_one() {
            return Err(Error::OddTorsion(format!("elementary divisor {d} in H^{s}")));
        }
        orders.push(1u64 << v);
    }
    Ok((q.free_rank, orders))
}

fn diagonal(signs: &[i64]) -> IntMatrix {
    let n = signs.len();
    (0..n).map(|i| (0..n).map(|j| BigInt::from(if i == j { signs[i] } else { 0 })).collect()).collect()
}

fn parity_sign(m: &Monomial) -> i64 {
    if (m.i + m.j).rem_euclid(2) == 0 {
        1
    } else {
        -1
    }
}

/// Names for torsion generators when they can be read off a monomial basis.
fn torsion_names(action: Action, s: u32, t: i32, count: usize) -> Vec<String> {
    let names: Vec<String> = match action {
        Action::Deck => weight_basis(t)
            .into_iter()
            .filter(|m| (m.i + m.j + s as i32).rem_euclid(2) == 0)
            .map(|m| format!("ζ^{s} {m}"))
            .collect(),
        // Standard monomials modulo G with leading term a₃²: a₁ⁱ a₃ʲ, j ≤ 1.
        Action::W15 => (0..=1)
            .filter(|j| t - 3 * j >= 0)
            .map(|j| format!("τ^{} {}", s / 2, Monomial::new(t - 3 * j, j, 0)))
            .collect(),
    };
    if names.len() == count {
        names
    } else {
        (0..count).map(|k| format!("class{k}")).collect()
    }
}

/// Free rank and torsion orders of H^s(C₂; slice) for an action preserving the slice.
pub fn slice_cohomology(slice: &WeightSlice, action: Action, s: u32) -> Result<(usize, Vec<u64>)> {
    involution_cohomology(&slice.matrix(action)?, slice.dim(), s)
}

pub fn group_cohomology(action: Action, s: u32, t: i32) -> Result<CohomologyGroup> {
    let slice = WeightSlice::new(t);
    let sigma = slice.matrix(action)?;
    let (free_rank, orders) = involution_cohomology(&sigma, slice.dim(), s)?;
    let names = torsion_names(action, s, t, orders.len());
    Ok(CohomologyGroup { s, t, free_rank, torsion_generators: names.into_iter().zip(orders).collect() })
}

/// Monomials of (a₁a₃)⁻¹R in weight t with |exponent| ≤ bound.
fn laurent_window(t: i32, bound: i32) -> Vec<Monomial> {
    let mut out = Vec::new();
    for e in 0..=1u32 {
        for j in -bound..=bound {
            let i = t - 6 * e as i32 - 3 * j;
            if i.abs() <= bound {
                out.push(Monomial::new(i, j, e));
            }
        }
    }
    out
}

/// Cokernel of a₁⁻¹R ⊕ a₃⁻¹R → (a₁a₃)⁻¹R in weight t, truncated to a window.
fn cokernel_in_window(t: i32, bound: i32) -> Vec<Monomial> {
    // a₁⁻¹R has basis a₁ⁱa₃ʲa₆^ε with j ≥ 0, a₃⁻¹R the same with i ≥ 0; both free over {1, a₆}.
    laurent_window(t, bound).into_iter().filter(|m| m.i < 0 && m.j < 0).collect()
}

/// Monomial basis of H¹(Y; ω^t), checked stable under enlarging the window.
pub fn h1_mayer_vietoris(t: i32, window: i32) -> Result<Vec<Monomial>> {
    let small = cokernel_in_window(t, window);
    let large = cokernel_in_window(t, 2 * window + 6);
    if small != large {
        return Err(Error::Undefined(format!(
            "window {window} unstable in weight {t}: {} vs {} classes",
            small.len(),
            large.len()
        )));
    }
    Ok(small)
}

/// D = (a₁a₃)⁻¹a₆, the generator of H¹(Y; ω²).
pub const D: Monomial = Monomial::new(-1, -1, 1);

/// Image in H¹ of a Laurent element: drop terms in the image of a₁⁻¹R ⊕ a₃⁻¹R.
pub fn h1_class(p: &AutomorphicPoly) -> AutomorphicPoly {
    let mut out = AutomorphicPoly::zero();
    for (m, c) in p.reduce().terms() {
        if m.i < 0 && m.j < 0 {
            out.add_term(*m, c.clone());
        }
    }
    out
}

pub fn dual_monomial(m: &Monomial) -> Monomial {
    Monomial::new(-1 - m.i, -1 - m.j, 1 - m.e)
}

/// Cup-product pairing H⁰(ω^t) × H¹(ω^(2−t)) → H¹(ω²) = Z₂·D.
/// Rows follow the H⁰ basis; columns follow the duals of the rows.
pub fn pairing_matrix(t: i32, window: i32) -> Result<(Vec<Monomial>, Vec<Monomial>, Vec<Vec<Rational>>)> {
    let rows = weight_basis(t);
    let h1 = h1_mayer_vietoris(2 - t, window)?;
    let cols: Vec<Monomial> = rows.iter().map(dual_monomial).collect();
    let mut sorted_cols = cols.clone();
    sorted_cols.sort();
    let mut sorted_h1 = h1.clone();
    sorted_h1.sort();
    if sorted_cols != sorted_h1 {
        return Err(Error::Undefined(format!("H¹ basis in weight {} is not the dual basis", 2 - t)));
    }
    let mut mat = Vec::with_capacity(rows.len());
    for r in &rows {
        let mut row = Vec::with_capacity(cols.len());
        for c in &cols {
            let prod = h1_class(&AutomorphicPoly::monomial(r.times(c), int(1)));
            let coeff = prod.coeff(&D);
            if prod.len() > usize::from(!coeff.is_zero()) {
                return Err(Error::Undefined(format!("H¹(ω²) class {prod} is not a multiple of D")));
            }
            row.push(coeff);
        }
        mat.push(row);
    }
    Ok((rows, cols, mat))
}

fn determinant(mut m: Vec<Vec<Rational>>) -> Rational {
    let n = m.len();
    let mut d = int(1);
    for c in 0..n {
        let Some(p) = (c..n).find(|&r| !m[r][c].is_zero()) else {
            return Rational::zero();
        };
        if p != c {
            m.swap(p, c);
            d = -d;
        }
        d *= &m[c][c];
        for r in c + 1..n {
            let f = &m[r][c] / &m[c][c];
            for k in c..n {
                let sub = &f * &m[c][k];
                m[r][k] -= sub;
            }
        }
    }
    d
}

pub fn is_permutation_matrix(m: &[Vec<Rational>]) -> bool {
    let n = m.len();
    let unit_entry = |x: &Rational| x.is_one();
    let rows_ok = m
        .iter()
        .all(|r| r.iter().filter(|x| !x.is_zero()).count() == 1 && r.iter().all(|x| x.is_zero() || unit_entry(x)));
    let cols_ok = (0..n).all(|c| m.iter().filter(|r| !r[c].is_zero()).count() == 1);
    rows_ok && cols_ok
}

/// Perfect over Z₂: integral entries with determinant a 2-adic unit.
pub fn is_perfect(m: &[Vec<Rational>]) -> bool {
    if m.is_empty() {
        return true;
    }
    let integral = m.iter().flatten().all(is_two_integral);
    let det = determinant(m.to_vec());
    integral && !det.is_zero() && is_two_integral(&det) && is_two_integral(&(Rational::one() / det))
}

pub fn serre_duality_check(t: i32, window: i32) -> Report {
    let mut rep = Report::new();
    let a = "serre-duality";
    let h1_2 = h1_mayer_vietoris(2, window);
    rep.check(
        "h1-weight-2",
        a,
        matches!(&h1_2, Ok(b) if b == &vec![D]),
        format!("H¹(ω²) basis {:?}", h1_2.as_ref().map(|b| b.iter().map(|m| m.to_string()).collect::<Vec<_>>())),
    );
    match pairing_matrix(t, window) {
        Ok((rows, _cols, mat)) => {
            let off_diag: Vec<String> = mat
                .iter()
                .enumerate()
                .flat_map(|(i, r)| {
                    r.iter()
                        .enumerate()
                        .filter(move |(j, x)| *j != i && !x.is_zero())
                        .map(move |(j, x)| (i, j, x.clone()))
                })
                .map(|(i, j, x)| format!("⟨{}, dual({})⟩ = {x}", rows[i], rows[j]))
                .collect();
            rep.check(
                &format!("pairing-permutation-t{t}"),
                a,
                is_permutation_matrix(&mat),
                if off_diag.is_empty() {
                    format!("{}×{} identity", mat.len(), mat.len())
                } else {
                    format!("{} off-diagonal entries, e.g. {}", off_diag.len(), off_diag[0])
                },
            );
            rep.check(
                &format!("pairing-perfect-t{t}"),
                a,
                is_perfect(&mat),
                format!("dim {} on both sides", rows.len()),
            );
        }
        Err(e) => rep.check(&format!("pairing-t{t}"), a, false, e.to_string()),
    }
    rep
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StackCohomology {
    pub s: u32,
    pub t: i32,
    pub free_rank: usize,
    pub f2_dim: usize,
    pub generators: Vec<String>,
    pub pipelines_agree: bool,
}

/// H^s of the stack quotient of Y in weight t, computed from the even-grading
/// subring and, independently, from group cohomology of H⁰(Y) and H¹(Y).
pub fn stack_cohomology(s: u32, t: i32, window: i32) -> Result<StackCohomology> {
    let h0 = weight_basis(t);
    let h1 = h1_mayer_vietoris(t, window)?;

    // Even-grading pipeline: ζ^p·m with p + i + j even.
    let mut gens = Vec::new();
    let mut free_a = 0;
    let mut tors_a = 0;
    let mut take = |p: u32, basis: &[Monomial], free: &mut usize, tors: &mut usize| {
        for m in basis {
            if (p as i32 + m.i + m.j).rem_euclid(2) == 0 {
                if p == 0 {
                    *free += 1;
                } else {
                    *tors += 1;
                }
                gens.push(if p == 0 { m.to_string() } else { format!("ζ^{p} {m}") });
            }
        }
    };
    take(s, &h0, &mut free_a, &mut tors_a);
    if s >= 1 {
        take(s - 1, &h1, &mut free_a, &mut tors_a);
    }

    // Group-cohomology pipeline.
    let g0 = group_cohomology(Action::Deck, s, t)?;
    let mut free_b = g0.free_rank;
    let mut tors_b = g0.f2_dim();
    let mut elementary = g0.is_elementary();
    if s >= 1 {
        let signs: Vec<i64> = h1.iter().map(parity_sign).collect();
        let (f, orders) = involution_cohomology(&diagonal(&signs), h1.len(), s - 1)?;
        free_b += f;
        tors_b += orders.len();
        elementary &= orders.iter().all(|&o| o == 2);
    }
    Ok(StackCohomology {
        s,
        t,
        free_rank: free_a,
        f2_dim: tors_a,
        generators: gens,
        pipelines_agree: free_a == free_b && tors_a == tors_b && elementary,
    })
}

/// H*(C₂; R) under w₁₅ against Z₂[a₁,a₃,τ]/(2τ, Gτ), plus the trace values.
pub fn verify_w15_degeneration(max_weight: i32, max_s: u32) -> Report {
    let mut rep = Report::new();
    let a = "w15-fixed-points";
    let n0 = |w: i32| if w < 0 { 0 } else { (w / 3 + 1) as usize };
    let mut mismatches = Vec::new();
    let mut checked = 0;
    for w in 0..=max_weight {
        for s in 0..=max_s {
            checked += 1;
            let expected = match s {
                0 => (n0(w), 0),
                _ if s % 2 == 1 => (0, 0),
                _ => (0, n0(w) - n0(w - 6)),
            };
            match group_cohomology(Action::W15, s, w) {
                Ok(g) if (g.free_rank, g.f2_dim()) == expected && g.is_elementary() => {}
                Ok(g) => mismatches.push(format!(
                    "(s={s}, w={w}): got free {} + F₂^{}, model {expected:?}",
                    g.free_rank,
                    g.f2_dim()
                )),
                Err(e) => mismatches.push(format!("(s={s}, w={w}): {e}")),
            }
        }
    }
    rep.check(
        "w15-cohomology-model",
        a,
        mismatches.is_empty(),
        if mismatches.is_empty() {
            format!("{checked} bidegrees match Z₂[a₁,a₃,τ]/(2τ, Gτ)")
        } else {
            mismatches.join("; ")
        },
    );
    let mut traces = Vec::new();
    let mut ok = true;
    for w in (2..=max_weight).step_by(2) {
        let tr = w15_trace(w).unwrap_or(i64::MIN);
        ok &= tr == if w == 2 { 1 } else { 2 };
        traces.push(format!("{w}:{tr}"));
    }
    rep.check("w15-trace", a, ok, format!("traces {}", traces.join(" ")));
    rep
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trace_examples() {
        assert_eq!(w15_trace(2).unwrap(), 1);
        assert_eq!(w15_trace(4).unwrap(), 2);
        assert_eq!(w15_trace(6).unwrap(), 2);
        assert!(w15_trace(3).is_err());
        assert!(w15_trace(0).is_err());
    }

    #[test]
    fn cohomology_examples() {
        let g = group_cohomology(Action::Deck, 0, 6).unwrap();
        assert_eq!((g.free_rank, g.f2_dim()), (4, 0));
        let g = group_cohomology(Action::Deck, 1, 1).unwrap();
        assert_eq!(g.torsion_generators, vec![("ζ^1 a1".to_string(), 2)]);
        let g = group_cohomology(Action::W15, 2, 0).unwrap();
        assert_eq!((g.free_rank, g.f2_dim()), (0, 1));
    }

    #[test]
    fn w15_invariants_exclude_a6_combinations() {
        // 2a₆ + G is anti-invariant, so H⁰ in weight 6 is spanned by a₁⁶, a₁³a₃, a₃².
        let g = group_cohomology(Action::W15, 0, 6).unwrap();
        assert_eq!(g.free_rank, 3);
        let x = &AutomorphicPoly::a6().scale(&int(2)) + &AutomorphicPoly::g();
        assert_eq!(x.w15(), -&x);
        let g = group_cohomology(Action::W15, 2, 12).unwrap();
        assert_eq!(g.f2_dim(), 2);
    }

    #[test]
    fn deck_matches_monomial_model() {
        for t in 0..20 {
            for s in 1..5u32 {
                let g = group_cohomology(Action::Deck, s, t).unwrap();
                let model = weight_basis(t).iter().filter(|m| (m.i + m.j + s as i32) % 2 == 0).count();
                assert_eq!((g.free_rank, g.f2_dim()), (0, model));
            }
        }
    }

    #[test]
    fn mayer_vietoris() {
        assert_eq!(h1_mayer_vietoris(2, 10).unwrap(), vec![D]);
        assert!(h1_mayer_vietoris(3, 10).unwrap().is_empty());
        for t in -12..=14 {
            assert_eq!(h1_mayer_vietoris(t, 24).unwrap().len(), weight_basis(2 - t).len(), "t = {t}");
        }
    }

    #[test]
    fn duality() {
        let (_, _, m) = pairing_matrix(0, 10).unwrap();
        assert_eq!(m, vec![vec![int(1)]]);
        let r = serre_duality_check(7, 12);
        assert!(r.get("pairing-perfect-t7").unwrap().status == crate::report::Status::Pass);
        for t in -20..=20 {
            let (_, _, m) = pairing_matrix(t, 24).unwrap();
            assert!(is_perfect(&m), "t = {t}");
        }
    }

    #[test]
    fn stack_examples() {
        let c = stack_cohomology(0, 2, 10).unwrap();
        assert_eq!((c.free_rank, c.f2_dim), (1, 0));
        assert!(c.pipelines_agree);
        let c = stack_cohomology(1, 1, 10).unwrap();
        assert_eq!((c.free_rank, c.f2_dim), (0, 1));
        let c = stack_cohomology(1, 2, 10).unwrap();
        assert_eq!((c.free_rank, c.f2_dim), (1, 0));
        assert_eq!(c.generators, vec!["a1^-1 a3^-1 a6".to_string()]);
        for s in 0..5 {
            for t in -8..20 {
                assert!(stack_cohomology(s, t, 16).unwrap().pipelines_agree);
            }
        }
    }
}
