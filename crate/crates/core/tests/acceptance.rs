//! Acceptance criteria 1–11. Each test prints one PASS/FAIL line and fails when the criterion does.

use std::time::{Duration, Instant};

use taf15::curve::{verify_cm_table, verify_one_form};
use taf15::forms::{serre_duality_check, verify_characters, verify_f_derivation};
use taf15::hilbert::{cm_intersection_rows, intersection_verdict, table_pairs, verify_intersections};
use taf15::hyperbolic::{verify_edge_identifications, verify_geodesic_claims, verify_presentation};
use taf15::specseq::{
    final_comparison, verify_differentials, verify_e2, verify_rk_theorem, verify_tau_ideal, w15_page, Window,
};
use taf15::{Report, Status};

fn criterion(n: u32, name: &str, report: &Report, elapsed: Duration, limit: Option<Duration>) {
    let failed: Vec<&str> = report.failures().map(|c| c.id.as_str()).collect();
    let slow = limit.is_some_and(|l| elapsed > l);
    let ok = failed.is_empty() && !slow && !report.claims.is_empty();
    let inconclusive = report.claims.iter().filter(|c| c.status == Status::Inconclusive).count();
    let mut line = format!(
        "criterion {n:>2} {} {name}: {} claims, {:.2?}",
        if ok { "PASS" } else { "FAIL" },
        report.claims.len(),
        elapsed
    );
    if let Some(l) = limit {
        line.push_str(&format!(" (limit {l:?})"));
    }
    if inconclusive > 0 {
        line.push_str(&format!(", {inconclusive} inconclusive"));
    }
    if !failed.is_empty() {
        line.push_str(&format!("; failing: {}", failed.join(", ")));
    }
    println!("{line}");
    for c in report.failures() {
        println!("    [{}] {}: {}", c.status, c.id, c.details);
    }
    assert!(ok, "{line}");
}

fn timed(f: impl FnOnce() -> Report) -> (Report, Duration) {
    let start = Instant::now();
    let r = f();
    (r, start.elapsed())
}

fn spectral_window() -> Window {
    Window::new(-16, 64, 40).unwrap()
}

#[test]
fn criterion_01_fundamental_domain() {
    let (rep, dt) = timed(|| {
        let mut rep = verify_edge_identifications();
        rep.extend(verify_presentation());
        match verify_geodesic_claims(30) {
            Ok(g) => rep.extend(g),
            Err(e) => rep.check("geodesics", "fundamental-domain", false, e.to_string()),
        }
        rep
    });
    for id in ["angle-sum", "area"] {
        assert!(rep.claims.iter().any(|c| c.id.starts_with(id)), "missing claim {id}");
    }
    criterion(1, "fundamental domain", &rep, dt, Some(Duration::from_secs(5)));
}

#[test]
fn criterion_02_intersection_table() {
    let (rep, dt) = timed(|| {
        let mut rep = verify_intersections();
        let pairs = table_pairs().unwrap();
        let total: usize = pairs.iter().map(|(_, _, rows)| rows.len()).sum();
        rep.check("row-count", "cm-intersections", total == 10, format!("{total} rows"));
        let none = pairs.iter().all(|(a, b, _)| intersection_verdict(&cm_intersection_rows(a, b).unwrap()).is_none());
        rep.check("verdicts", "cm-intersections", none, "no pair intersects");
        rep
    });
    criterion(2, "CM intersection table", &rep, dt, Some(Duration::from_secs(1)));
}

#[test]
fn criterion_03_cm_points() {
    let (rep, dt) = timed(verify_cm_table);
    criterion(3, "CM coordinate table", &rep, dt, Some(Duration::from_secs(1)));
}

#[test]
fn criterion_04_characters() {
    let (rep, dt) = timed(|| verify_characters(100, 15));
    criterion(4, "level-structure characters", &rep, dt, None);
}

#[test]
fn criterion_05_f_derivation() {
    let (rep, dt) = timed(|| {
        let mut rep = verify_f_derivation();
        rep.extend(verify_one_form());
        rep
    });
    criterion(5, "f(a6) derivation", &rep, dt, None);
}

#[test]
fn criterion_06_e2_cross_check() {
    let (rep, dt) = timed(|| verify_e2(spectral_window()));
    criterion(6, "E2 cross-check", &rep, dt, Some(Duration::from_secs(60)));
}

#[test]
fn criterion_07_differentials() {
    let (rep, dt) = timed(|| verify_differentials(spectral_window()));
    let required = [
        "d3-table",
        "d-squared",
        "d3-well-defined",
        "e4-zero-line",
        "e4-zero-line-index",
        "d7-seed",
        "einfty-permanent",
    ];
    for c in rep.claims.iter().filter(|c| !required.contains(&c.id.as_str())) {
        println!("    info [{}] {}", c.status, c.id);
    }
    let core = Report { claims: rep.claims.iter().filter(|c| required.contains(&c.id.as_str())).cloned().collect() };
    assert_eq!(core.claims.len(), required.len(), "missing ledger claims");
    criterion(7, "differential ledger", &core, dt, None);
}

#[test]
fn criterion_08_rk_theorem() {
    let (rep, dt) = timed(|| verify_rk_theorem(spectral_window()));
    criterion(8, "R/K theorem", &rep, dt, None);
}

#[test]
fn criterion_09_w15_degeneration() {
    let (rep, dt) = timed(|| w15_page(24, 6));
    criterion(9, "w15 degeneration", &rep, dt, None);
}

#[test]
fn criterion_10_tau_ideal() {
    let window = Window::new(-8, 40, 40).unwrap();
    let (rep, dt) = timed(|| {
        let mut rep = verify_tau_ideal(window);
        rep.extend(final_comparison(window));
        rep
    });
    criterion(10, "tau ideal and KO pattern", &rep, dt, None);
}

#[test]
fn criterion_11_serre_duality() {
    let (rep, dt) = timed(|| {
        let mut rep = Report::new();
        for t in -20..=20 {
            rep.extend(serre_duality_check(t, t.abs() + 12));
        }
        rep
    });
    criterion(11, "Serre duality", &rep, dt, None);
}
