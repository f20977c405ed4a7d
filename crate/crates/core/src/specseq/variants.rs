//! Localizations, the w₁₅ quotient, the τ-ideal and the KO comparison chart.

use std::collections::{BTreeMap, BTreeSet};

use num_integer::Integer;
use serde::Serialize;

use super::chart::{is_tower, ChartClass, ChartReport, ChartStem};
use super::page::SSPage;
use super::theorem::k_basis;
use super::{d3, run, KoModel, Localization, Model, PlainModel, SSClass, TauModel, Window};
use crate::error::Result;
use crate::exactnum::int;
use crate::forms::{slice_cohomology, verify_w15_degeneration, Action, AutomorphicPoly, Monomial, WeightSlice};
use crate::linalg::{f2_rank, pack_bits};
use crate::report::{Report, Status};

const ANCHOR_LOC: &str = "localizations";
const ANCHOR_W15: &str = "w15-fixed-points";
const ANCHOR_TAU: &str = "tau-ideal";

/// Free rank and F₂-dimension of E∞ at one stem.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct StemCount {
    pub stem: i32,
    pub free: usize,
    pub torsion: usize,
}

impl StemCount {
    fn doubled(self) -> (usize, usize) {
        (2 * self.free, 2 * self.torsion)
    }
}

fn counts(page: &SSPage, model: &dyn Model, stems: impl Iterator<Item = i32>) -> Vec<StemCount> {
    stems
        .map(|stem| {
            let (free, torsion) = page.stem_counts(stem, model);
            StemCount { stem, free, torsion }
        })
        .collect()
}

/// Laurent bound large enough that nothing in the window is cut off.
fn tau_bound(window: &Window) -> i32 {
    (window.stem_max.abs().max(window.stem_min.abs()) + window.fil_cap as i32) / 2 + 4
}

/// E∞ counts of the KO fixed-point spectral sequence on a window.
pub fn ko_pattern(window: Window) -> Result<Vec<StemCount>> {
    let model = KoModel { bound: tau_bound(&window) };
    let r = run(&model, window)?;
    Ok(counts(r.einfty(), &model, window.stem_min..=window.stem_max))
}

/// E∞ chart of the ideal Z₄[a₁^±]·τ under the deck action.
pub fn tau_ideal_ss(window: Window) -> Result<ChartReport> {
    let model = TauModel { bound: tau_bound(&window) };
    let r = run(&model, window)?;
    Ok(ChartReport::from_run(&r, &model, false))
}

pub fn verify_tau_ideal(window: Window) -> Report {
    let mut rep = Report::new();
    let model = TauModel { bound: tau_bound(&window) };
    let tau = match run(&model, window) {
        Ok(r) => r,
        Err(e) => {
            rep.check("tau-pages", ANCHOR_TAU, false, e.to_string());
            return rep;
        }
    };
    let shifted = Window {
        stem_min: window.stem_min - 2,
        stem_max: window.stem_max - 2,
        fil_cap: window.fil_cap.saturating_sub(2),
    };
    let ko = match ko_pattern(shifted) {
        Ok(k) => k,
        Err(e) => {
            rep.check("tau-ko-pattern", ANCHOR_TAU, false, e.to_string());
            return rep;
        }
    };
    let e = tau.einfty();
    let mut bad = Vec::new();
    for k in &ko {
        let n = k.stem + 2;
        let got = e.stem_counts(n, &model);
        if got != k.doubled() {
            bad.push(format!("stem {n}: τ-ideal {got:?} vs 2×KO {:?}", k.doubled()));
        }
    }
    rep.check(
        "tau-ko-pattern",
        ANCHOR_TAU,
        bad.is_empty(),
        if bad.is_empty() {
            format!("stems {}..{} equal two copies of KO shifted by 2", window.stem_min, window.stem_max)
        } else {
            bad.join("; ")
        },
    );

    let t0 = SSClass::tau(0, 0, false);
    let d_tau = model.differential(3, &t0).unwrap_or_default();
    let d_a1sq = model.differential(3, &SSClass::tau(0, 2, false)).unwrap_or_default();
    rep.check(
        "tau-d3",
        ANCHOR_TAU,
        d_tau == vec![SSClass::tau(3, 1, false)] && d_a1sq.is_empty(),
        format!("d₃(τ) = {}, d₃(a₁²τ) = {}", describe(&d_tau), describe(&d_a1sq)),
    );

    if window.contains(2, -2) {
        let gens = [SSClass::tau(0, 0, false), SSClass::tau(0, 0, true)];
        let survivors: Vec<String> = gens.iter().filter(|c| e.alive(c)).map(|c| c.to_string()).collect();
        let rank = e.cell(2, 0).map_or(0, |c| c.dim());
        rep.check(
            "tau-bottom",
            ANCHOR_TAU,
            survivors.is_empty(),
            format!("τ and ωτ are not permanent; E∞ at (2, 0) is 2·Z₄τ of rank {rank}"),
        );
    }
    if window.contains(2, 2) && window.contains(3, 3) {
        let two = e.stem_counts(2, &model);
        let three = e.stem_counts(3, &model);
        rep.check(
            "tau-low-stems",
            ANCHOR_TAU,
            two == (2, 0) && three == (0, 2),
            format!("stem 2: {two:?}, stem 3: {three:?} (free, F₂)"),
        );
    }
    rep
}

fn describe(v: &[SSClass]) -> String {
    if v.is_empty() {
        "0".into()
    } else {
        v.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(" + ")
    }
}

/// Box bound for localized charts on a window.
fn loc_bound(window: &Window) -> i32 {
    ((window.stem_max - window.stem_min) / 6).clamp(4, 12)
}

/// E∞ chart of a Laurent localization, restricted to the exponent box.
pub fn localize(window: Window, loc: Localization, bound: i32) -> Result<ChartReport> {
    let model = PlainModel::localized(loc, bound);
    let r = run(&model, window)?;
    Ok(ChartReport::from_run(&r, &model, false))
}

/// Reported basis classes that are nonzero in E∞, with "undoubled" for the lattice line.
fn alive_classes(page: &SSPage, model: &dyn Model, window: &Window) -> BTreeMap<SSClass, bool> {
    let mut out = BTreeMap::new();
    for cell in page.cells.values().filter(|c| window.contains(c.s, c.stem())) {
        for c in cell.basis.iter().filter(|c| model.reported(c)) {
            if cell.lattice {
                let k = cell.position(c).expect("basis class");
                let mut doubled = vec![0i64; cell.basis.len()];
                doubled[k] = 2;
                if cell.contains_class(c) {
                    out.insert(*c, true);
                } else if cell.reps.contains(&doubled) {
                    out.insert(*c, false);
                }
            } else if cell.contains_class(c) {
                out.insert(*c, true);
            }
        }
    }
    out
}

fn mono(c: &SSClass) -> Monomial {
    Monomial::new(c.i, c.j, c.e)
}

/// Undoubled 0-line monomials of a₁⁻¹R in weight w with j + 2ε ≤ d, spanned by products of
/// a₁^{±4}, a₁a₃, a₁²a₆; returns (span rank, whether the span lies in the given monomials).
fn a1_products_match(w: i32, d: i32, undoubled: &BTreeSet<Monomial>) -> (usize, bool) {
    let basis: Vec<Monomial> = (0..=1u32)
        .flat_map(|e| (0..=d - 2 * e as i32).map(move |j| Monomial::new(w - 3 * j - 6 * e as i32, j, e)))
        .filter(|m| (m.i + m.j) % 2 == 0)
        .collect();
    let mut rows = Vec::new();
    let mut inside = true;
    if w.rem_euclid(4) == 0 {
        for n26 in 0..=d / 2 {
            for n13 in 0..=d - 2 * n26 {
                let rest = w - 4 * n13 - 8 * n26;
                let m = Monomial::new(rest + n13 + 2 * n26, n13, n26 as u32);
                let p = AutomorphicPoly::monomial(m, int(1)).reduce();
                let mut bits = vec![false; basis.len()];
                for (t, c) in p.terms() {
                    if !c.numer().is_even() {
                        match basis.iter().position(|b| b == t) {
                            Some(k) => bits[k] = true,
                            None => inside = false,
                        }
                        inside &= undoubled.contains(t);
                    }
                }
                rows.push(pack_bits(&bits));
            }
        }
    }
    (f2_rank(&rows), inside)
}

/// Monomials a₁ⁱa₃ʲ of the 0-line of the a₃-local pullback that are not doubled.
fn a3_b0(i: i32, j: i32) -> bool {
    i >= 0 && ((j - i).rem_euclid(4) == 0 && i > 0 || i == 0 && j.rem_euclid(8) == 0)
}

fn in_l(c: &SSClass) -> bool {
    k_basis().iter().any(|(_, b)| b.e == 0 && c.e == 0 && b.k == c.k && b.i == c.i && (c.j - b.j).rem_euclid(8) == 0)
}

fn set_check(rep: &mut Report, id: &str, bad: &[String], ok_text: String) {
    let details = if bad.is_empty() {
        ok_text
    } else {
        let shown: Vec<&str> = bad.iter().take(6).map(String::as_str).collect();
        format!("{} ({} total)", shown.join("; "), bad.len())
    };
    rep.check(id, ANCHOR_LOC, bad.is_empty(), details);
}

pub fn verify_localizations(window: Window) -> Report {
    let mut rep = Report::new();
    let b = loc_bound(&window);
    let mut alive = BTreeMap::new();
    for loc in [Localization::None, Localization::A1, Localization::A3, Localization::A1A3] {
        let model = if loc == Localization::None { PlainModel::connective() } else { PlainModel::localized(loc, b) };
        match run(&model, window) {
            Ok(r) => {
                alive.insert(format!("{loc:?}"), alive_classes(r.einfty(), &model, &window));
            }
            Err(e) => {
                rep.check("localized-pages", ANCHOR_LOC, false, format!("{loc:?}: {e}"));
                return rep;
            }
        }
    }
    let get = |name: &str| &alive[name];

    // ζ^{8k} and ζ^{8k+6}a₆, k ≥ 1, die in every localization.
    let mut towers = Vec::new();
    let mut seen = 0;
    for name in ["A1", "A3", "A1A3"] {
        for s in 8..=window.fil_cap {
            for c in [SSClass::plain(s, 0, 0, 0), SSClass::plain(s, 0, 0, 1)] {
                if is_tower(&c) && window.contains(c.s(), c.stem()) {
                    seen += 1;
                    if get(name).contains_key(&c) {
                        towers.push(format!("{name}: {c}"));
                    }
                }
            }
        }
    }
    set_check(&mut rep, "towers-destroyed", &towers, format!("{seen} tower classes absent from the localized E∞"));

    // ζ⁶a₆ dies after inverting a₁ but survives a₃⁻¹ as y·ν².
    let z6 = SSClass::plain(6, 0, 0, 1);
    let nu2 = SSClass::plain(6, 0, 2, 0);
    if window.contains(6, 6) {
        let (in1, in3, in13) =
            (get("A1").contains_key(&z6), get("A3").contains_key(&z6), get("A1A3").contains_key(&z6));
        let nu2_3 = get("A3").contains_key(&nu2);
        rep.check(
            "zeta6-a6",
            ANCHOR_LOC,
            !in1 && !in13 && in3 == nu2_3,
            format!("ζ⁶a₆ in E∞: a₁⁻¹ {in1}, (a₁a₃)⁻¹ {in13}, a₃⁻¹ {in3} (ν² there: {nu2_3})"),
        );
    }

    // a₁-local: 0-line undoubled part spanned by a₁^{±4}, a₁a₃, a₁²a₆; η- and η²-lines are η·B₀, η²·B₀; nothing above.
    let a1 = get("A1");
    let undoubled = |w: i32| -> BTreeSet<Monomial> {
        a1.iter()
            .filter(|(c, u)| c.k == 0 && **u && c.weight() == w && c.j + 2 * c.e as i32 <= b)
            .map(|(c, _)| mono(c))
            .collect()
    };
    let mut bad = Vec::new();
    let (wlo, whi) = (window.stem_min.div_euclid(2), window.stem_max.div_euclid(2));
    for w in wlo..=whi {
        let u = undoubled(w);
        let (rank, inside) = a1_products_match(w, b, &u);
        if rank != u.len() || !inside {
            bad.push(format!("weight {w}: products span rank {rank}, E∞ has {} undoubled", u.len()));
        }
    }
    for (c, _) in a1.iter().filter(|(c, _)| c.k >= 1 && c.j + 2 * c.e as i32 <= b) {
        let base = Monomial::new(c.i - c.k as i32, c.j, c.e);
        if c.k > 2 {
            bad.push(format!("{c} above the η²-line"));
        } else if !undoubled(base.weight()).contains(&base) {
            bad.push(format!("{c} is not η^{}·B₀", c.k));
        }
    }
    for w in wlo..=whi {
        for m in undoubled(w) {
            for k in 1..=2u32 {
                let c = SSClass::plain(k, m.i + k as i32, m.j, m.e);
                if window.contains(c.s(), c.stem()) && !a1.contains_key(&c) {
                    bad.push(format!("η^{k}·{m} missing"));
                }
            }
        }
    }
    set_check(&mut rep, "a1-pullback", &bad, format!("a₁⁻¹ E∞ matches the pullback for j + 2ε ≤ {b}"));

    // a₃-local: multiplication by y = a₃⁻²a₆ identifies the ε = 0 and ε = 1 halves.
    let a3 = get("A3");
    let mut bad = Vec::new();
    for (c, u) in a3 {
        let partner = if c.e == 1 { SSClass { j: c.j + 2, e: 0, ..*c } } else { SSClass { j: c.j - 2, e: 1, ..*c } };
        if window.contains(partner.s(), partner.stem()) && a3.get(&partner) != Some(u) {
            bad.push(format!("{c} without partner {partner}"));
        }
    }
    set_check(&mut rep, "a3-y-splitting", &bad, "every a₃⁻¹ E∞ class pairs with its y-multiple".into());

    // ε = 0 half: pullback ring over ⟨a₁a₃, a₁a₃⁵, a₃^{±8}, η⟩ plus L.
    let mut bad = Vec::new();
    for (c, u) in a3.iter().filter(|(c, _)| c.e == 0) {
        let ok = match c.k {
            0 => *u == a3_b0(c.i, c.j),
            1 | 2 => a3_b0(c.i - c.k as i32, c.j) != in_l(c),
            _ => in_l(c),
        };
        if !ok {
            bad.push(format!("{c}"));
        }
    }
    for l in k_basis().into_iter().map(|(_, c)| c).filter(|c| c.e == 0) {
        for m in -4..=4 {
            let c = SSClass { j: l.j + 8 * m, ..l };
            if c.i <= b && window.contains(c.s(), c.stem()) && !a3.contains_key(&c) {
                bad.push(format!("L class {c} missing"));
            }
        }
    }
    set_check(&mut rep, "a3-pullback-and-l", &bad, "ε = 0 half is the a₃⁻¹ pullback ⊕ L".into());

    // R' agrees with R in nonnegative degrees on the 0-line.
    let conn = get("None");
    let mut bad = Vec::new();
    for (c, u) in conn.iter().filter(|(c, _)| c.k == 0 && c.i <= b && c.j + 2 * c.e as i32 <= b) {
        let glued = a1.get(c).zip(a3.get(c)).map(|(x, y)| *x && *y);
        if glued != Some(*u) {
            bad.push(format!("{c}: R {u}, a₁⁻¹ {:?}, a₃⁻¹ {:?}", a1.get(c), a3.get(c)));
        }
    }
    set_check(&mut rep, "rprime-nonnegative", &bad, "0-line of R equals a₁⁻¹R ×_{(a₁a₃)⁻¹R} a₃⁻¹R in the box".into());
    rep
}

/// Truncation of a Laurent localization by a w₁₅-stable filtration.
fn truncated_basis(loc: Localization, w: i32, bound: i32) -> Vec<Monomial> {
    let mut out = Vec::new();
    for e in 0..=1u32 {
        let rest = w - 6 * e as i32;
        let span = bound + rest.abs() + 2;
        for j in -span..=span {
            let m = Monomial::new(rest - 3 * j, j, e);
            let ok = match loc {
                Localization::None => m.i >= 0 && m.j >= 0,
                Localization::A1 => m.j >= 0 && m.j + 2 * e as i32 <= bound,
                Localization::A3 => m.i >= 0 && m.i + 6 * e as i32 <= 3 * bound,
                Localization::A1A3 => {
                    m.j >= -bound && m.j + 2 * e as i32 <= bound && m.i >= -3 * bound && m.i + 6 * e as i32 <= 3 * bound
                }
            };
            if ok {
                out.push(m);
            }
        }
    }
    out
}

/// The w₁₅ degeneration on R and on truncations of its three localizations.
pub fn w15_page(max_weight: i32, max_s: u32) -> Report {
    let mut rep = verify_w15_degeneration(max_weight, max_s);
    for loc in [Localization::A1, Localization::A3, Localization::A1A3] {
        let bound = 4;
        let mut bad = Vec::new();
        let mut checked = 0;
        for w in -max_weight / 2..=max_weight / 2 {
            let basis = truncated_basis(loc, w, bound);
            let n0 = basis.iter().filter(|m| m.e == 0).count();
            let n1 = basis.len() - n0;
            let slice = WeightSlice::from_basis(w, basis);
            for s in 0..=max_s.min(4) {
                checked += 1;
                let expected = match s {
                    0 => (n0, vec![]),
                    _ if s % 2 == 1 => (0, vec![]),
                    _ => (0, vec![2u64; n0 - n1]),
                };
                match slice_cohomology(&slice, Action::W15, s) {
                    Ok(got) if got == expected => {}
                    Ok(got) => bad.push(format!("w={w}, s={s}: {got:?} vs {expected:?}")),
                    Err(e) => bad.push(format!("w={w}, s={s}: {e}")),
                }
            }
        }
        let id = format!("w15-localized-{}", format!("{loc:?}").to_lowercase());
        rep.check(
            &id,
            ANCHOR_W15,
            bad.is_empty(),
            if bad.is_empty() {
                format!("{checked} truncated bidegrees match the localized presentation")
            } else {
                bad.join("; ")
            },
        );
    }
    rep
}

/// E₂ = E∞ chart of the w₁₅ fixed points: Z₂[a₁,a₃] on the 0-line and τᵐ·Z/2[a₁,a₃]/G above it.
pub fn w15_chart(window: Window) -> ChartReport {
    let mut stems: Vec<ChartStem> =
        (window.stem_min..=window.stem_max).map(|stem| ChartStem { stem, classes: vec![] }).collect();
    for st in &mut stems {
        for s in (0..=window.fil_cap).step_by(2) {
            let t = st.stem + s as i32;
            if t.rem_euclid(2) != 0 || t < 0 {
                continue;
            }
            let w = t / 2;
            let jmax = if s == 0 { w / 3 } else { (w / 3).min(1) };
            for j in 0..=jmax {
                let i = w - 3 * j;
                let (monomial, order) = if s == 0 {
                    (format!("z^0 a1^{i} a3^{j} a6^0"), "Z2-free".to_string())
                } else {
                    (format!("tau^{} a1^{i} a3^{j}", s / 2), "2^1".to_string())
                };
                st.classes.push(ChartClass { s, t, monomial, order, scale: None, part: None });
            }
        }
    }
    ChartReport { model: "w15".into(), window, stems, inconclusive: vec![] }
}

/// Image and kernel of π_*(TAF^D)^{w₁₅} → π_*TAF^D, stem by stem.
pub fn final_comparison(window: Window) -> Report {
    let mut rep = Report::new();
    let plain = PlainModel::connective();
    let image = PlainModel { with_a6: false, ..PlainModel::connective() };
    let (pr, ir) = match (run(&plain, window), run(&image, window)) {
        (Ok(a), Ok(b)) => (a, b),
        (Err(e), _) | (_, Err(e)) => {
            rep.check("final-pages", ANCHOR_W15, false, e.to_string());
            return rep;
        }
    };
    let all = alive_classes(pr.einfty(), &plain, &window);
    let sub = alive_classes(ir.einfty(), &image, &window);
    let mut bad = Vec::new();
    for stem in window.stem_min..=window.stem_max {
        let not_a6: BTreeSet<SSClass> =
            all.iter().filter(|(c, _)| c.e == 0 && c.stem() == stem).map(|(c, _)| *c).collect();
        let img: BTreeSet<SSClass> = sub.keys().filter(|c| c.stem() == stem).copied().collect();
        if not_a6 != img {
            bad.push(format!("stem {stem}: {} classes without a₆ vs image {}", not_a6.len(), img.len()));
        }
    }
    rep.check(
        "final-image",
        ANCHOR_W15,
        bad.is_empty(),
        if bad.is_empty() {
            "image equals the classes that are not multiples of a₆ in every stem".into()
        } else {
            bad.join("; ")
        },
    );
    let sub_rep = verify_tau_ideal(window);
    let status = sub_rep.get("tau-ko-pattern").map_or(Status::Fail, |c| c.status);
    rep.push(
        "final-kernel",
        ANCHOR_W15,
        status,
        sub_rep.get("tau-ko-pattern").map_or_else(String::new, |c| format!("kernel: {}", c.details)),
    );
    rep
}

/// d₃ of ζᵏa₁ⁱ·τ agrees with the Leibniz rule through the map to the plain sequence.
pub fn tau_leibniz_consistent(k: u32, i: i32) -> Result<bool> {
    let c = SSClass::tau(k, i, false);
    let base = SSClass::plain(k, i, 0, 0);
    let plain_d = !d3(&base)?.is_empty();
    let tau_d = !TauModel { bound: i.abs() + 4 }.differential(3, &c)?.is_empty();
    Ok(plain_d != tau_d)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ko_low_stems() {
        let ko = ko_pattern(Window::new(0, 8, 12).unwrap()).unwrap();
        let pairs: Vec<(usize, usize)> = ko.iter().map(|c| (c.free, c.torsion)).collect();
        assert_eq!(pairs, vec![(1, 0), (0, 1), (0, 1), (0, 0), (1, 0), (0, 0), (0, 0), (0, 0), (1, 0)]);
    }

    #[test]
    fn tau_ideal_matches_ko() {
        let rep = verify_tau_ideal(Window::new(-8, 24, 16).unwrap());
        assert!(rep.passed(), "{rep}");
    }

    #[test]
    fn tau_leibniz() {
        for k in 0..6 {
            for i in -6..6 {
                if (i - k as i32) % 2 == 0 {
                    assert!(tau_leibniz_consistent(k, i).unwrap());
                }
            }
        }
    }

    #[test]
    fn w15_chart_bottom() {
        let chart = w15_chart(Window::new(-4, 4, 4).unwrap());
        let at = |n: i32| &chart.stems[(n + 4) as usize].classes;
        let bottom: Vec<&ChartClass> = at(-2).iter().filter(|c| c.s == 2).collect();
        assert_eq!(bottom.len(), 1);
        assert_eq!(bottom[0].monomial, "tau^1 a1^0 a3^0");
        assert_eq!(at(2).iter().filter(|c| c.s == 4).count(), 2);
    }

    #[test]
    #[ignore]
    fn localization_report() {
        let rep = verify_localizations(Window::new(-16, 40, 24).unwrap());
        println!("{rep}");
        let rep = w15_page(24, 6);
        println!("{rep}");
        let rep = final_comparison(Window::new(-8, 40, 24).unwrap());
        println!("{rep}");
    }

    #[test]
    fn truncations_are_stable() {
        for loc in [Localization::A1, Localization::A3, Localization::A1A3] {
            for w in -6..12 {
                let slice = WeightSlice::from_basis(w, truncated_basis(loc, w, 4));
                assert!(slice.matrix(Action::W15).is_ok(), "{loc:?} weight {w}");
            }
        }
    }
}
