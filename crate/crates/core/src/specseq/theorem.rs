//! Checks on the plain spectral sequence: E₂ against group cohomology, the d₃
//! and d₇ ledgers, the E₄ and E₇ structure, and the R/K description of E∞.

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::Serialize;

use super::chart::is_tower;
use super::page::{Cell, SSPage, SSRun};
use super::{
    d3, d7, factorizations, leibniz_coefficients, leibniz_value, phi, run, Factorization, Model, PlainModel, SSClass,
    Window, ETA, NU,
};
use crate::error::{Error, Result};
use crate::exactnum::{int, Rational};
use crate::forms::{group_cohomology, Action, AutomorphicPoly, Monomial};
use crate::linalg::{f2_rank, pack_bits, solve_rational};
use crate::report::{Report, Status};

const ANCHOR_E2: &str = "e2-term";
const ANCHOR_D: &str = "differentials";
const ANCHOR_RK: &str = "homotopy-of-fixed-points";

fn summarize<T: std::fmt::Display>(items: &[T], limit: usize) -> String {
    let shown: Vec<String> = items.iter().take(limit).map(|x| x.to_string()).collect();
    if items.len() > limit {
        format!("{}, … ({} total)", shown.join(", "), items.len())
    } else {
        shown.join(", ")
    }
}

/// E₂ page of the plain spectral sequence, cross-checked against group cohomology of the deck action.
pub fn build_e2(window: Window) -> Result<SSPage> {
    let model = PlainModel::connective();
    let mismatches = e2_mismatches(&model, window)?;
    if let Some(m) = mismatches.first() {
        return Err(Error::Undefined(format!("E₂ model disagrees with group cohomology: {m}")));
    }
    let r = run(&model, window)?;
    Ok(r.pages.into_iter().next().expect("E₂"))
}

fn e2_mismatches(model: &PlainModel, window: Window) -> Result<Vec<String>> {
    let mut cache: HashMap<(u32, i32), (usize, usize, bool)> = HashMap::new();
    let mut bad = Vec::new();
    for s in 0..=window.fil_cap {
        for stem in window.stem_min..=window.stem_max {
            let t = stem + s as i32;
            let classes = model.classes_at(s, t);
            let model_counts = if s == 0 { (classes.len(), 0) } else { (0, classes.len()) };
            let group = if t.rem_euclid(2) != 0 || t < 0 {
                (0, 0, true)
            } else {
                // H^s(C₂; M) depends only on s = 0 or the parity of s > 0.
                let key = (if s == 0 { 0 } else { 2 - s % 2 }, t / 2);
                match cache.get(&key) {
                    Some(v) => *v,
                    None => {
                        let g = group_cohomology(Action::Deck, key.0, t / 2)?;
                        let v = (g.free_rank, g.f2_dim(), g.is_elementary());
                        cache.insert(key, v);
                        v
                    }
                }
            };
            if (group.0, group.1) != model_counts || !group.2 {
                bad.push(format!(
                    "(s,t) = ({s},{t}): model {:?}, group cohomology {:?}{}",
                    model_counts,
                    (group.0, group.1),
                    if group.2 { "" } else { " (non-elementary torsion)" }
                ));
            }
        }
    }
    Ok(bad)
}

pub fn verify_e2(window: Window) -> Report {
    let mut rep = Report::new();
    let model = PlainModel::connective();
    match e2_mismatches(&model, window) {
        Ok(bad) => rep.check(
            "e2-cross-check",
            ANCHOR_E2,
            bad.is_empty(),
            if bad.is_empty() {
                format!(
                    "monomial model equals H^s(C₂; R_w) in every bidegree, stems {}..{}, s ≤ {}",
                    window.stem_min, window.stem_max, window.fil_cap
                )
            } else {
                summarize(&bad, 3)
            },
        ),
        Err(e) => rep.check("e2-cross-check", ANCHOR_E2, false, e.to_string()),
    }
    let mut sparse_bad = Vec::new();
    for s in 0..=window.fil_cap {
        for stem in window.stem_min..=window.stem_max {
            for c in model.classes_at(s, stem + s as i32) {
                if (c.stem() - c.s() as i32).rem_euclid(4) != 0 {
                    sparse_bad.push(c);
                }
            }
        }
    }
    rep.check(
        "sparsity",
        ANCHOR_E2,
        sparse_bad.is_empty(),
        "every E₂ class has t − s ≡ s mod 4, so only d_{4k+3} can be nonzero",
    );
    let examples = [
        ((1, 2), vec![ETA]),
        ((3, 6), vec![SSClass::plain(3, 0, 1, 0), SSClass::plain(3, 3, 0, 0)]),
        ((2, 0), vec![SSClass::plain(2, 0, 0, 0)]),
    ];
    let ok = examples.iter().all(|((s, t), v)| &model.classes_at(*s, *t) == v);
    rep.check("e2-examples", ANCHOR_E2, ok, "E₂^{1,2} = {ζa₁}, E₂^{3,6} = {ζ³a₃, ζ³a₁³}, E₂^{2,0} = {ζ²}");
    rep
}

/// All generator factorizations of a class with their Leibniz values.
pub fn d3_factorizations(c: &SSClass) -> Result<Vec<(Factorization, u8)>> {
    let coeffs = leibniz_coefficients()?;
    Ok(factorizations(c, false).into_iter().map(|f| (f, leibniz_value(&f, &coeffs))).collect())
}

/// The free Z/2[a₃⁸]-basis of K.
pub fn k_basis() -> Vec<(&'static str, SSClass)> {
    let p = SSClass::plain;
    vec![
        ("ν", p(3, 0, 1, 0)),
        ("ν²", p(6, 0, 2, 0)),
        ("ν(a₃⁶a₆)", p(3, 0, 7, 1)),
        ("ν²(a₃⁶a₆)", p(6, 0, 8, 1)),
        ("ζa₃³", p(1, 0, 3, 0)),
        ("η(ζa₃³)", p(2, 1, 3, 0)),
        ("ν(ζa₃³)", p(4, 0, 4, 0)),
        ("ζa₃a₆", p(1, 0, 1, 1)),
        ("η(ζa₃a₆)", p(2, 1, 1, 1)),
        ("ν(ζa₃a₆)", p(4, 0, 2, 1)),
        ("η(a₃⁴)", p(1, 1, 4, 0)),
        ("η²(a₃⁴)", p(2, 2, 4, 0)),
        ("η(a₃²a₆)", p(1, 1, 2, 1)),
        ("η²(a₃²a₆)", p(2, 2, 2, 1)),
        ("ζ²a₃⁶", p(2, 0, 6, 0)),
        ("ν(ζ²a₃⁶)", p(5, 0, 7, 0)),
        ("ζ²a₃⁴a₆", p(2, 0, 4, 1)),
        ("ν(ζ²a₃⁴a₆)", p(5, 0, 5, 1)),
    ]
}

/// a₆^E reduced by f, memoized.
struct A6Powers(Vec<AutomorphicPoly>);

impl A6Powers {
    fn new() -> Self {
        Self(vec![AutomorphicPoly::one()])
    }

    fn get(&mut self, e: usize) -> &AutomorphicPoly {
        while self.0.len() <= e {
            let next = (self.0.last().expect("nonempty") * &AutomorphicPoly::a6()).reduce();
            self.0.push(next);
        }
        &self.0[e]
    }
}

fn mod2(c: &Rational) -> u8 {
    assert!(c.denom().is_odd(), "coefficient {c} is not 2-integral");
    u8::from(c.numer().is_odd())
}

/// a₁ⁱa₃ʲa₆^E·scale reduced by f, as a polynomial.
fn reduced_product(i: i32, j: i32, e: usize, scale: &Rational, pow: &mut A6Powers) -> AutomorphicPoly {
    let base = pow.get(e).clone();
    let mut out = AutomorphicPoly::zero();
    for (m, c) in base.terms() {
        out.add_term(Monomial::new(m.i + i, m.j + j, m.e), c * scale);
    }
    out
}

/// Weight-w monomials of R with i + j even, the basis of the 0-line in weight w.
fn zero_line_basis(w: i32) -> Vec<Monomial> {
    crate::forms::weight_basis(w).into_iter().filter(|m| (m.i + m.j) % 2 == 0).collect()
}

/// Enumerates exponent vectors n with Σ nₖ·weights[k] = w.
fn compositions(weights: &[i32], w: i32, out: &mut Vec<Vec<i32>>, cur: &mut Vec<i32>) {
    if cur.len() == weights.len() {
        if w == 0 {
            out.push(cur.clone());
        }
        return;
    }
    let g = weights[cur.len()];
    for n in 0..=w / g {
        cur.push(n);
        compositions(weights, w - n * g, out, cur);
        cur.pop();
    }
}

/// Lower-left subring generators of the pullback: a₁⁴, a₁a₃, a₁a₃⁵, a₃⁸, a₁²a₆, a₁a₃³a₆, a₃⁶a₆.
const B_GENERATORS: [(i32, i32, u32); 7] =
    [(4, 0, 0), (1, 1, 0), (1, 5, 0), (0, 8, 0), (2, 0, 1), (1, 3, 1), (0, 6, 1)];

/// F₂-dimension of the degree-0 (no η) part of the lower-left subring in weight w.
pub fn b0_dimension(w: i32) -> usize {
    if w < 0 {
        return 0;
    }
    let basis = zero_line_basis(w);
    let index: HashMap<Monomial, usize> = basis.iter().enumerate().map(|(k, m)| (*m, k)).collect();
    let weights: Vec<i32> = B_GENERATORS.iter().map(|(i, j, e)| i + 3 * j + 6 * *e as i32).collect();
    let mut combos = Vec::new();
    compositions(&weights, w, &mut combos, &mut Vec::new());
    let mut pow = A6Powers::new();
    let mut rows = Vec::new();
    for n in combos {
        let (mut i, mut j, mut e) = (0, 0, 0usize);
        for (cnt, (gi, gj, ge)) in n.iter().zip(B_GENERATORS) {
            i += cnt * gi;
            j += cnt * gj;
            e += (*cnt as usize) * ge as usize;
        }
        let p = reduced_product(i, j, e, &int(1), &mut pow);
        let mut bits = vec![false; basis.len()];
        for (m, c) in p.terms() {
            if mod2(c) == 1 {
                bits[index[m]] = true;
            }
        }
        rows.push(pack_bits(&bits));
    }
    f2_rank(&rows)
}

/// Products of the E₄ zero-line generators a₁⁴, a₁a₃, a₃⁴, a₁²a₆, a₃²a₆, 2a₁², 2a₃², 2a₆ in weight w.
fn zero_line_generator_products(w: i32) -> Vec<AutomorphicPoly> {
    let gens: [(i32, i32, u32, i64); 8] = [
        (4, 0, 0, 1),
        (1, 1, 0, 1),
        (0, 4, 0, 1),
        (2, 0, 1, 1),
        (0, 2, 1, 1),
        (2, 0, 0, 2),
        (0, 2, 0, 2),
        (0, 0, 1, 2),
    ];
    let weights: Vec<i32> = gens.iter().map(|(i, j, e, _)| i + 3 * j + 6 * *e as i32).collect();
    let mut combos = Vec::new();
    compositions(&weights, w, &mut combos, &mut Vec::new());
    let mut pow = A6Powers::new();
    let mut seen = BTreeMap::new();
    for n in combos {
        let (mut i, mut j, mut e, mut scale) = (0, 0, 0usize, 1i64);
        for (cnt, (gi, gj, ge, gs)) in n.iter().zip(gens) {
            i += cnt * gi;
            j += cnt * gj;
            e += (*cnt as usize) * ge as usize;
            scale *= gs.pow(*cnt as u32);
        }
        // Scales beyond 2 lie in 2·(scale-2 products) already; keep the smallest per monomial shape.
        let key = (i, j, e);
        let entry = seen.entry(key).or_insert(scale);
        if scale < *entry {
            *entry = scale;
        }
    }
    seen.into_iter().map(|((i, j, e), sc)| reduced_product(i, j, e, &int(sc), &mut pow)).collect()
}

/// Checks that the E₄ zero-line lattice in weight w is generated by the listed classes (Nakayama over Z₂).
fn zero_line_generated(cell: &Cell, w: i32) -> std::result::Result<(), String> {
    let basis = zero_line_basis(w);
    if basis.len() != cell.basis.len() {
        return Err(format!("weight {w}: basis size mismatch"));
    }
    let index: HashMap<Monomial, usize> = basis.iter().enumerate().map(|(k, m)| (*m, k)).collect();
    let cols: Vec<Vec<BigInt>> = cell.reps.iter().map(|v| v.iter().map(|&x| BigInt::from(x)).collect()).collect();
    let mut rows = Vec::new();
    for p in zero_line_generator_products(w) {
        let denom = p.terms().fold(BigInt::one(), |acc, (_, c)| acc.lcm(c.denom()));
        let mut b = vec![BigInt::zero(); basis.len()];
        for (m, c) in p.terms() {
            let k = *index.get(m).ok_or_else(|| format!("weight {w}: product leaves the 0-line basis at {m}"))?;
            b[k] = (c * Rational::from_integer(denom.clone())).to_integer();
        }
        let x = solve_rational(&cols, &b)
            .ok_or_else(|| format!("weight {w}: a generator product is not in the E₄ lattice"))?;
        let mut bits = vec![false; cols.len()];
        for (k, xk) in x.iter().enumerate() {
            if xk.denom().is_even() {
                return Err(format!("weight {w}: a generator product is not in the E₄ lattice (coefficient {xk})"));
            }
            bits[k] = xk.numer().is_odd();
        }
        rows.push(pack_bits(&bits));
    }
    let rank = f2_rank(&rows);
    if rank == cols.len() {
        Ok(())
    } else {
        Err(format!("weight {w}: generator products span rank {rank} of {} mod 2", cols.len()))
    }
}

/// Product of two plain classes on E₂ mod 2, reducing a₆².
pub fn multiply(a: &SSClass, b: &SSClass) -> Vec<SSClass> {
    let c = a.times(b);
    if c.e <= 1 {
        return vec![c];
    }
    let mut pow = A6Powers::new();
    let p = reduced_product(c.i, c.j, c.e as usize, &int(1), &mut pow);
    p.terms().filter(|(_, x)| mod2(x) == 1).map(|(m, _)| SSClass::plain(c.k, m.i, m.j, m.e)).collect()
}

fn vector_in(cell: &Cell, classes: &[SSClass]) -> Option<Vec<u8>> {
    let mut v = vec![0u8; cell.basis.len()];
    for c in classes {
        v[cell.position(c)?] ^= 1;
    }
    Some(v)
}

/// Multiplication by m on the reps of a cell: images are cycles and independent on the page.
fn multiplication_injective(page: &SSPage, cell: &Cell, m: &SSClass) -> Option<bool> {
    let target = page.cell(cell.s + m.s(), cell.t + m.t())?;
    let mut images = Vec::new();
    for rep in &cell.reps {
        let classes: Vec<SSClass> =
            rep.iter().zip(&cell.basis).filter(|(x, _)| x.rem_euclid(2) == 1).map(|(_, c)| c.times(m)).collect();
        images.push(vector_in(target, &classes)?);
    }
    Some(target.independent_classes(&images))
}

fn window_cells<'a>(page: &'a SSPage, w: &'a Window) -> impl Iterator<Item = &'a Cell> {
    page.cells.values().filter(move |c| w.contains(c.s, c.stem()))
}

pub fn verify_differentials(window: Window) -> Report {
    let mut rep = Report::new();
    let model = PlainModel::connective();
    let coeffs = match leibniz_coefficients() {
        Ok(c) => {
            rep.check("d3-table", ANCHOR_D, true, "each tabulated d₃(g) is 0 or ζ³a₁·g");
            c
        }
        Err(e) => {
            rep.check("d3-table", ANCHOR_D, false, e.to_string());
            return rep;
        }
    };
    let run = match run(&model, window) {
        Ok(r) => r,
        Err(e) => {
            rep.check("pages", ANCHOR_D, false, e.to_string());
            return rep;
        }
    };
    rep.check("d-squared", ANCHOR_D, true, "d₃∘d₃ = 0 and d₇∘d₇ = 0 on every assembled page");

    // d₃ well-definedness and closed form.
    let e2 = run.e2();
    let (mut multi, mut disagree, mut closed_bad) = (0usize, Vec::new(), Vec::new());
    for cell in window_cells(e2, &window) {
        for c in &cell.basis {
            let vals: Vec<u8> = factorizations(c, false).iter().map(|f| leibniz_value(f, &coeffs)).collect();
            if vals.len() > 1 {
                multi += 1;
                if vals.iter().any(|v| *v != vals[0]) {
                    disagree.push(*c);
                }
            }
            if vals.first() != Some(&phi(c)) {
                closed_bad.push(*c);
            }
        }
    }
    rep.check(
        "d3-well-defined",
        ANCHOR_D,
        disagree.is_empty(),
        format!("{multi} monomials with several generator factorizations, {} disagreements", disagree.len()),
    );
    rep.check(
        "d3-closed-form",
        ANCHOR_D,
        closed_bad.is_empty(),
        "Leibniz value equals ((k + 3i + j)/2 + ε) mod 2 on every E₂ class in the window",
    );
    let ex = [
        (SSClass::plain(0, 4, 0, 0), vec![]),
        (SSClass::plain(8, 3, 1, 0), vec![SSClass::plain(11, 4, 1, 0)]),
        (SSClass::plain(4, 0, 0, 1), vec![SSClass::plain(7, 1, 0, 1)]),
    ];
    let ok = ex.iter().all(|(c, v)| d3(c).as_ref() == Ok(v));
    rep.check("d3-examples", ANCHOR_D, ok, "d₃(a₁⁴) = 0, d₃(ζ⁸a₁³a₃) = ζ¹¹a₁⁴a₃, d₃(ζ⁴a₆) = ζ⁷a₁a₆");

    // Injectivity of d₃ where t − 2s ≡ 4 mod 8, vanishing where t − 2s ≡ 0 mod 8.
    let mut inj_bad = Vec::new();
    for cell in window_cells(e2, &window) {
        let residue = (cell.t - 2 * cell.s as i32).rem_euclid(8);
        let images: Vec<Vec<SSClass>> = cell.basis.iter().map(|c| d3(c).unwrap_or_default()).collect();
        let ok = if residue == 4 {
            let mut all: Vec<SSClass> = images.iter().flatten().copied().collect();
            let n = all.len();
            all.sort();
            all.dedup();
            images.iter().all(|v| v.len() == 1) && all.len() == n
        } else {
            images.iter().all(Vec::is_empty)
        };
        if !ok {
            inj_bad.push(format!("({},{})", cell.s, cell.t));
        }
    }
    rep.check(
        "d3-injective-mod-8",
        ANCHOR_D,
        inj_bad.is_empty(),
        if inj_bad.is_empty() {
            "d₃ is injective mod 2 where t − 2s ≡ 4 mod 8 and zero where t − 2s ≡ 0 mod 8".to_string()
        } else {
            summarize(&inj_bad, 4)
        },
    );

    // E₄ zero line.
    let e4 = run.page(4).expect("E₄");
    let mut zl_bad = Vec::new();
    let mut weights = 0;
    for cell in window_cells(e4, &window).filter(|c| c.s == 0) {
        weights += 1;
        if let Err(e) = zero_line_generated(cell, cell.t / 2) {
            zl_bad.push(e);
        }
    }
    rep.check(
        "e4-zero-line",
        ANCHOR_D,
        zl_bad.is_empty() && weights > 0,
        if zl_bad.is_empty() {
            format!("in {weights} weights the E₄ 0-line lattice is generated by a₁⁴, a₁a₃, a₃⁴, a₁²a₆, a₃²a₆, 2a₁², 2a₃², 2a₆")
        } else {
            summarize(&zl_bad, 2)
        },
    );
    let index_data: Vec<String> = window_cells(e4, &window)
        .filter(|c| c.s == 0 && c.t <= 24)
        .map(|c| {
            format!(
                "w{}: [Z^{} : E₄] = 2^{}",
                c.t / 2,
                c.basis.len(),
                c.reps.iter().filter(|v| v.iter().any(|x| x % 2 != 0)).count().abs_diff(c.basis.len())
            )
        })
        .collect();
    rep.push("e4-zero-line-index", ANCHOR_D, Status::Pass, index_data.join("; "));

    // E₄ on the 1- and 2-lines.
    let listed = [
        SSClass::plain(2, 0, 2, 0),
        SSClass::plain(1, 0, 3, 0),
        SSClass::plain(2, 1, 3, 0),
        SSClass::plain(1, 0, 1, 1),
        SSClass::plain(2, 0, 0, 1),
        SSClass::plain(2, 1, 1, 1),
    ];
    let is_listed = |c: &SSClass| {
        listed.iter().any(|b| b.k == c.k && b.i == c.i && b.e == c.e && c.j >= b.j && (c.j - b.j) % 4 == 0)
    };
    let mut low_bad = Vec::new();
    for cell in window_cells(e4, &window).filter(|c| c.s == 1 || c.s == 2) {
        for (k, v) in cell.reps.iter().enumerate() {
            let support: Vec<&SSClass> = v.iter().zip(&cell.basis).filter(|(x, _)| **x != 0).map(|(_, c)| c).collect();
            let ok = support.len() == 1 && {
                let c = support[0];
                let eta_multiple = c.i >= c.k as i32 && e4.alive(&SSClass::plain(0, c.i - c.k as i32, c.j, c.e));
                eta_multiple || is_listed(c)
            };
            if !ok {
                low_bad.push(cell.describe(k));
            }
        }
        for b in cell.basis.iter().filter(|c| is_listed(c)) {
            if !cell.contains_class(b) {
                low_bad.push(format!("{b} missing"));
            }
        }
    }
    rep.check(
        "e4-low-lines",
        ANCHOR_D,
        low_bad.is_empty(),
        if low_bad.is_empty() {
            "E₄ on lines 1 and 2 is η-multiples of undoubled 0-line classes plus a₃⁴-multiples of ζ²a₃², ζa₃³, ηζa₃³, ζa₃a₆, ζ²a₆, ηζa₃a₆".to_string()
        } else {
            summarize(&low_bad, 4)
        },
    );

    // Literal statement (filtration ≥ 2) and the version above the η²-line.
    for (id, lowest) in [("e4-multiplication-injective", 2), ("e4-multiplication-injective-above-2", 3)] {
        let mut mult_bad = Vec::new();
        for cell in window_cells(e4, &window).filter(|c| c.s >= lowest && c.dim() > 0) {
            for (name, m) in [("a₃⁴", SSClass::plain(0, 0, 4, 0)), ("ζ⁴", SSClass::plain(4, 0, 0, 0)), ("ν", NU)]
            {
                if !window.contains(cell.s + m.s(), cell.stem() + m.stem()) {
                    continue;
                }
                if multiplication_injective(e4, cell, &m) == Some(false) {
                    mult_bad.push(format!("{name} on ({},{})", cell.s, cell.t));
                }
            }
        }
        rep.check(
            id,
            ANCHOR_D,
            mult_bad.is_empty(),
            if mult_bad.is_empty() {
                format!("a₃⁴, ζ⁴ and ν act injectively on E₄ in filtration ≥ {lowest}")
            } else {
                summarize(&mult_bad, 6)
            },
        );
    }

    // d₇.
    let seed = d7(&SSClass::plain(4, 0, 0, 0));
    rep.check(
        "d7-seed",
        ANCHOR_D,
        seed == vec![SSClass::plain(11, 0, 1, 0)],
        format!("d₇(ζ⁴) = {}", summarize(&seed, 2)),
    );
    let a6_seed = d7(&SSClass::plain(2, 0, 0, 1));
    let expected = multiply(&multiply(&NU, &SSClass::plain(4, 0, 0, 0))[0], &SSClass::plain(2, 0, 0, 1));
    rep.check(
        "d7-a6-seed",
        ANCHOR_D,
        a6_seed == expected,
        format!("d₇(ζ²a₆) = νζ⁴(ζ²a₆) = {}", summarize(&a6_seed, 2)),
    );
    let printed = SSClass::plain(11, 0, 2, 0);
    rep.check(
        "d7-printed-exponent",
        ANCHOR_D,
        printed.t() == SSClass::plain(4, 0, 0, 0).t() + 6,
        format!(
            "the printed target ζ^(k+7)a₃^(l+2) has t = {} at k = 4, l = 0, but d₇ raises t by 6 (to {}); the seed d₇(ζ⁴) = ζ¹¹a₃ needs a₃^(l+1)",
            printed.t(),
            SSClass::plain(4, 0, 0, 0).t() + 6
        ),
    );

    let e7 = e4;
    let zeta4 = SSClass::plain(4, 0, 0, 0);
    let mut leib_bad = Vec::new();
    let mut tower_bad = Vec::new();
    for cell in window_cells(e7, &window) {
        for c in cell.basis.iter().filter(|c| c.i == 0 && cell.contains_class(c)) {
            let fires = !d7(c).is_empty();
            if fires != ((c.t() - 2 * c.s() as i32).rem_euclid(16) == 8) {
                tower_bad.push(*c);
            }
            for m in [zeta4, NU] {
                let mc = c.times(&m);
                if !e7.alive(&mc) {
                    continue;
                }
                let Some(target) = e7.cell(mc.s() + 7, mc.t() + 6) else { continue };
                let lhs = d7(&mc);
                let mut rhs: Vec<SSClass> = d7(c).iter().map(|x| x.times(&m)).collect();
                rhs.extend(d7(&m).iter().map(|x| x.times(c)));
                let (Some(mut l), Some(r)) = (vector_in(target, &lhs), vector_in(target, &rhs)) else {
                    leib_bad.push(mc);
                    continue;
                };
                for (a, b) in l.iter_mut().zip(&r) {
                    *a ^= b;
                }
                if !target.is_boundary(&l) {
                    leib_bad.push(mc);
                }
            }
        }
    }
    rep.check(
        "d7-leibniz",
        ANCHOR_D,
        leib_bad.is_empty(),
        if leib_bad.is_empty() {
            "d₇(ζ⁴x) = d₇(ζ⁴)x + ζ⁴d₇(x) and d₇(νx) = νd₇(x) on E₇".to_string()
        } else {
            summarize(&leib_bad, 4)
        },
    );
    rep.check(
        "d7-tower-degrees",
        ANCHOR_D,
        tower_bad.is_empty(),
        "d₇ is nonzero on ζᵏa₃ˡ(a₆) exactly when t − 2s ≡ 8 mod 16",
    );

    // (ζ²a₆)² + (ζ²a₃²)(ζ²a₆) + (ζ²a₃²)² = 0 on E₇.
    let x = SSClass::plain(2, 0, 0, 1);
    let y = SSClass::plain(2, 0, 2, 0);
    let mut terms = multiply(&x, &x);
    terms.extend(multiply(&y, &x));
    terms.extend(multiply(&y, &y));
    let rel_ok = e7.cell(4, 24).and_then(|cell| vector_in(cell, &terms).map(|v| cell.is_boundary(&v))).unwrap_or(false);
    rep.check("e7-relation", ANCHOR_D, rel_ok, "(ζ²a₆)² + (ζ²a₃²)(ζ²a₆) + (ζ²a₃²)² vanishes on E₇");

    // E∞ in high filtration.
    let einf = run.einfty();
    let mut unexpected = Vec::new();
    let mut inconclusive = Vec::new();
    let mut missing = Vec::new();
    for cell in window_cells(einf, &window).filter(|c| c.s >= 7) {
        for (k, v) in cell.reps.iter().enumerate() {
            let support: Vec<&SSClass> = v.iter().zip(&cell.basis).filter(|(x, _)| **x != 0).map(|(_, c)| c).collect();
            if support.len() == 1 && is_tower(support[0]) {
                continue;
            }
            if window.is_interior(cell.s, cell.stem()) {
                unexpected.push(cell.describe(k));
            } else {
                inconclusive.push(cell.describe(k));
            }
        }
        for c in cell.basis.iter().filter(|c| is_tower(c)) {
            if window.is_interior(cell.s, cell.stem()) && !cell.contains_class(c) {
                missing.push(*c);
            }
        }
    }
    rep.check(
        "einfty-permanent",
        ANCHOR_D,
        unexpected.is_empty() && missing.is_empty(),
        format!(
            "interior classes with s ≥ 7 are exactly ζ^(8k) and ζ^(8k+6)a₆; unexpected: [{}], missing: [{}]",
            summarize(&unexpected, 3),
            summarize(&missing, 3)
        ),
    );
    if !inconclusive.is_empty() {
        rep.push("einfty-edge", ANCHOR_D, Status::Inconclusive, summarize(&inconclusive, 4));
    }
    let counts = |n: i32| einf.stem_counts(n, &model);
    let stems_ok = window.contains(0, 0)
        && window.contains(3, 3)
        && counts(0) == (1, 0)
        && counts(1) == (0, 1)
        && einf.alive(&ETA)
        && counts(3) == (0, 1)
        && einf.alive(&NU);
    rep.check("einfty-low-stems", ANCHOR_D, stems_ok, "stem 0: Z₂·1; stem 1: F₂·η; stem 3: F₂·ν in filtration 3");
    rep
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RkStemComparison {
    pub stem: i32,
    /// (free rank, undoubled 0-line dimension, F₂-dimension above the 0-line) from E∞.
    pub einfty: (usize, usize, usize),
    /// The same triple from gr(R) ⊕ K.
    pub expected: (usize, usize, usize),
    pub k_classes: usize,
    pub extra: Vec<String>,
}

fn k_count(stem: i32) -> Vec<SSClass> {
    let mut out = Vec::new();
    for (_, b) in k_basis() {
        let shift = stem - b.stem();
        if shift >= 0 && shift % 48 == 0 {
            out.push(SSClass { j: b.j + 8 * (shift / 48), ..b });
        }
    }
    out
}

/// Compares E∞ with gr(R) ⊕ K stem by stem.
pub fn rk_comparison(run: &SSRun, stems: std::ops::RangeInclusive<i32>) -> Vec<RkStemComparison> {
    let model = PlainModel::connective();
    let e = run.einfty();
    let mut b0 = HashMap::new();
    let mut b0_dim = |w: i32| *b0.entry(w).or_insert_with(|| b0_dimension(w));
    let mut out = Vec::new();
    for n in stems {
        let (free, tors) = e.stem_counts(n, &model);
        let undoubled = e
            .cell(0, n)
            .map(|c| {
                let rows: Vec<Vec<u64>> =
                    c.reps.iter().map(|v| pack_bits(&v.iter().map(|x| x % 2 != 0).collect::<Vec<_>>())).collect();
                f2_rank(&rows)
            })
            .unwrap_or(0);
        let (free_r, und_r) = if n % 2 == 0 { (zero_line_basis(n / 2).len(), b0_dim(n / 2)) } else { (0, 0) };
        let eta_part = if (n - 1) % 2 == 0 { b0_dim((n - 1) / 2) } else { 0 };
        let eta2_part = if (n - 2) % 2 == 0 { b0_dim((n - 2) / 2) } else { 0 };
        let k = k_count(n);
        let extra: Vec<String> = e
            .cells
            .values()
            .filter(|c| c.stem() == n && c.s >= 1)
            .flat_map(|c| {
                c.reps.iter().enumerate().filter_map(move |(idx, v)| {
                    let support: Vec<&SSClass> =
                        v.iter().zip(&c.basis).filter(|(x, _)| **x != 0).map(|(_, b)| b).collect();
                    (support.len() == 1 && is_tower(support[0])).then(|| c.describe(idx))
                })
            })
            .collect();
        out.push(RkStemComparison {
            stem: n,
            einfty: (free, undoubled, tors),
            expected: (free_r, und_r, eta_part + eta2_part + k.len()),
            k_classes: k.len(),
            extra,
        });
    }
    out
}

pub fn verify_rk_theorem(window: Window) -> Report {
    let mut rep = Report::new();
    let model = PlainModel::connective();
    let run = match run(&model, window) {
        Ok(r) => r,
        Err(e) => {
            rep.check("rk-pages", ANCHOR_RK, false, e.to_string());
            return rep;
        }
    };
    let e = run.einfty();
    // K basis: the 18 classes and their a₃⁸-translates survive and stay independent.
    let mut k_bad = Vec::new();
    let mut k_seen = 0;
    for (name, b) in k_basis() {
        for m in 0.. {
            let c = SSClass { j: b.j + 8 * m, ..b };
            if !window.contains(c.s(), c.stem()) {
                break;
            }
            k_seen += 1;
            if !e.alive(&c) {
                k_bad.push(format!("a₃^{}·{name}", 8 * m));
            }
        }
    }
    rep.check(
        "k-basis",
        ANCHOR_RK,
        k_bad.is_empty() && k_seen >= 18,
        if k_bad.is_empty() {
            format!("all {k_seen} classes a₃^(8m)·b (b in the 18-element basis) in the window are nonzero in E∞")
        } else {
            format!("not in E∞: {}", summarize(&k_bad, 4))
        },
    );
    let distinct: std::collections::BTreeSet<SSClass> = k_basis().into_iter().map(|(_, c)| c).collect();
    let free_ok = distinct.len() == 18 && {
        let mut all_ok = true;
        for cell in window_cells(e, &window).filter(|c| c.s >= 1) {
            let kclasses: Vec<Vec<u8>> = cell
                .basis
                .iter()
                .filter(|c| k_count(c.stem()).contains(c))
                .filter_map(|c| vector_in(cell, &[*c]))
                .collect();
            if !cell.independent_classes(&kclasses) {
                all_ok = false;
            }
        }
        all_ok
    };
    rep.check(
        "k-free",
        ANCHOR_RK,
        free_ok,
        "the 18 classes are distinct and their a₃⁸-translates are linearly independent in every E∞ bidegree",
    );

    let lo = window.stem_min.max(0) + 1;
    let hi = window.stem_max.min(48) - 1;
    let rows: Vec<RkStemComparison> =
        rk_comparison(&run, 0..=hi).into_iter().filter(|r| r.stem == 0 || r.stem >= lo).collect();
    let bad: Vec<&RkStemComparison> = rows.iter().filter(|r| r.einfty != r.expected).collect();
    let details = if bad.is_empty() {
        format!("stems {}..{} match", rows.first().map_or(0, |r| r.stem), hi)
    } else {
        bad.iter()
            .map(|r| {
                format!(
                    "stem {}: E∞ {:?} vs gr(R)⊕K {:?}{}",
                    r.stem,
                    r.einfty,
                    r.expected,
                    if r.extra.is_empty() { String::new() } else { format!(" (extra: {})", r.extra.join(", ")) }
                )
            })
            .collect::<Vec<_>>()
            .join("; ")
    };
    rep.check("rk-per-stem", ANCHOR_RK, bad.is_empty(), details);
    rep
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn b0_small_weights() {
        // Weight 4: a₁⁴ and a₁a₃. Weight 2: nothing.
        assert_eq!(b0_dimension(2), 0);
        assert_eq!(b0_dimension(4), 2);
        assert_eq!(b0_dimension(0), 1);
    }

    #[test]
    fn a6_square_mod_two() {
        let sq = multiply(&SSClass::plain(0, 0, 0, 1), &SSClass::plain(0, 0, 0, 1));
        assert!(sq.iter().all(|c| c.e <= 1 && c.weight() == 12));
        assert!(sq.contains(&SSClass::plain(0, 0, 2, 1)));
    }

    #[test]
    fn k_basis_degrees() {
        let stems: Vec<i32> = k_basis().iter().map(|(_, c)| c.stem()).collect();
        assert_eq!(stems[0], 3);
        assert_eq!(stems[1], 6);
        assert!(k_basis().iter().all(|(_, c)| c.is_valid()));
    }
}
