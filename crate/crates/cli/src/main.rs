use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use taf15::curve::{verify_cm_table, verify_one_form, verify_unit_distinctness};
use taf15::forms::{
    character_rows, group_cohomology, serre_duality_check, verify_characters, verify_f_derivation, weight_basis, Action,
};
use taf15::hilbert::{format_rows, intersection_verdict, table_pairs, verify_intersections, CMOrder, IntersectionRow};
use taf15::hyperbolic::{verify_edge_identifications, verify_geodesic_claims, verify_presentation};
use taf15::quaternion::verify_order_identities;
use taf15::specseq::{
    compute_einfty, final_comparison, localize, run, tau_ideal_ss, verify_differentials, verify_e2,
    verify_localizations, verify_rk_theorem, verify_tau_ideal, w15_chart, w15_page, ChartReport, Localization, Model,
    PlainModel, TauModel, Window,
};
use taf15::Report;

#[derive(Parser, Debug)]
#[command(name = "taf15", version, about = "Exact checks for the discriminant-15 Shimura curve and TAF^D")]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct Common {
    /// Emit JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Stem window STEM_MIN:STEM_MAX.
    #[arg(long, global = true, allow_hyphen_values = true, default_value = "-16:64")]
    window: String,
    /// Filtration cap.
    #[arg(long, global = true, default_value_t = 40)]
    fil_cap: u32,
    /// Decimal digits for numeric checks (at least 10).
    #[arg(long, global = true, default_value_t = 30)]
    digits: u32,
    /// Write output to FILE instead of stdout.
    #[arg(long, global = true, value_name = "FILE")]
    out: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run a group of claim checks.
    Verify {
        #[arg(value_enum)]
        what: VerifyTarget,
    },
    /// CM intersection rows and verdicts.
    Intersections,
    /// Level-structure characters on h, γ, −1.
    Characters,
    /// Graded ring of forms.
    Forms {
        #[command(subcommand)]
        cmd: FormsCmd,
    },
    /// H^s(C₂; R_t) for the deck or w₁₅ action.
    Cohomology {
        #[arg(long)]
        s: u32,
        #[arg(long, allow_hyphen_values = true)]
        t: i32,
        #[arg(long, value_enum, default_value_t = ActionArg::Deck)]
        action: ActionArg,
    },
    /// Spectral sequences.
    Ss {
        #[command(subcommand)]
        cmd: SsCmd,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum VerifyTarget {
    Domain,
    Presentation,
    Identities,
    CmTable,
    Units,
    OneForm,
    FDerivation,
    All,
}

#[derive(Subcommand, Debug)]
enum FormsCmd {
    /// Monomial basis of R in a weight.
    Basis {
        #[arg(long, allow_hyphen_values = true)]
        weight: i32,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum ActionArg {
    Deck,
    W15,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Variant {
    Plain,
    W15,
    Tau,
    LocA1,
    LocA3,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum Format {
    Json,
    Ascii,
}

#[derive(Subcommand, Debug)]
enum SsCmd {
    /// Run all pages and summarize them stem by stem.
    Run {
        #[arg(long, value_enum, default_value_t = Variant::Plain)]
        variant: Variant,
    },
    /// E∞ chart.
    Chart {
        #[arg(long, value_enum, default_value_t = Variant::Plain)]
        variant: Variant,
        #[arg(long, value_enum, default_value_t = Format::Ascii)]
        format: Format,
    },
}

/// Usage problems map to exit code 2, claim failures to 1.
enum Outcome {
    Ok,
    ClaimFailed,
}

fn parse_window(c: &Common) -> anyhow::Result<Window> {
    let (a, b) = c.window.split_once(':').context("window must be STEM_MIN:STEM_MAX")?;
    let lo: i32 = a.trim().parse().with_context(|| format!("bad stem bound {a:?}"))?;
    let hi: i32 = b.trim().parse().with_context(|| format!("bad stem bound {b:?}"))?;
    Ok(Window::new(lo, hi, c.fil_cap)?)
}

fn loc_bound(w: &Window) -> i32 {
    ((w.stem_max - w.stem_min) / 6).clamp(4, 12)
}

fn emit(common: &Common, text: String) -> anyhow::Result<()> {
    match &common.out {
        Some(path) => fs::write(path, text).with_context(|| format!("writing {}", path.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn to_json<T: Serialize>(v: &T) -> anyhow::Result<String> {
    Ok(serde_json::to_string_pretty(v)? + "\n")
}

fn emit_report(common: &Common, rep: &Report) -> anyhow::Result<Outcome> {
    let text = if common.json {
        to_json(rep)?
    } else {
        let fails = rep.failures().count();
        let inconclusive = rep.claims.iter().filter(|c| c.status == taf15::Status::Inconclusive).count();
        format!("{rep}{} claims, {fails} failed, {inconclusive} inconclusive\n", rep.claims.len())
    };
    emit(common, text)?;
    Ok(if rep.passed() { Outcome::Ok } else { Outcome::ClaimFailed })
}

fn domain_report(digits: u32) -> anyhow::Result<Report> {
    let mut rep = verify_edge_identifications();
    rep.extend(verify_geodesic_claims(digits)?);
    Ok(rep)
}

fn verify(target: VerifyTarget, common: &Common) -> anyhow::Result<Report> {
    Ok(match target {
        VerifyTarget::Domain => domain_report(common.digits)?,
        VerifyTarget::Presentation => verify_presentation(),
        VerifyTarget::Identities => verify_order_identities(),
        VerifyTarget::CmTable => verify_cm_table(),
        VerifyTarget::Units => verify_unit_distinctness(),
        VerifyTarget::OneForm => verify_one_form(),
        VerifyTarget::FDerivation => verify_f_derivation(),
        VerifyTarget::All => {
            let window = parse_window(common)?;
            let mut rep = verify_order_identities();
            rep.extend(domain_report(common.digits)?);
            rep.extend(verify_presentation());
            rep.extend(verify_intersections());
            rep.extend(verify_cm_table());
            rep.extend(verify_unit_distinctness());
            rep.extend(verify_one_form());
            rep.extend(verify_characters(100, 15));
            rep.extend(verify_f_derivation());
            for t in -20..=20 {
                rep.extend(serre_duality_check(t, t.abs() + 12));
            }
            rep.extend(verify_e2(window));
            rep.extend(verify_differentials(window));
            rep.extend(verify_rk_theorem(window));
            rep.extend(verify_localizations(window));
            rep.extend(w15_page(24, 6));
            rep.extend(verify_tau_ideal(window));
            rep.extend(final_comparison(window));
            rep
        }
    })
}

#[derive(Serialize)]
struct PairRows {
    x: CMOrder,
    y: CMOrder,
    rows: Vec<IntersectionRow>,
    verdict: Option<u64>,
}

fn intersections(common: &Common) -> anyhow::Result<Outcome> {
    let pairs: Vec<PairRows> = table_pairs()?
        .into_iter()
        .map(|(x, y, rows)| {
            let verdict = intersection_verdict(&rows);
            PairRows { x, y, rows, verdict }
        })
        .collect();
    let text = if common.json {
        to_json(&pairs)?
    } else {
        let mut s = String::new();
        for p in &pairs {
            let verdict = p.verdict.map_or("no intersection".to_string(), |q| format!("intersect at {q}"));
            s.push_str(&format!("({}, {}): {}: {}\n", p.x.label, p.y.label, verdict, format_rows(&p.rows)));
        }
        s
    };
    emit(common, text)?;
    let rep = verify_intersections();
    Ok(if rep.passed() { Outcome::Ok } else { Outcome::ClaimFailed })
}

fn characters(common: &Common) -> anyhow::Result<Outcome> {
    let rows = character_rows()?;
    let rep = verify_characters(100, 15);
    let text = if common.json {
        to_json(&serde_json::json!({ "rows": rows, "report": rep }))?
    } else {
        let mut s = String::from("element  σ₂ σ₃ σ₅  expected\n");
        for r in &rows {
            s.push_str(&format!(
                "{:<8} {}  {}  {}   {:?}\n",
                r.element, r.sigma[0], r.sigma[1], r.sigma[2], r.expected
            ));
        }
        s.push_str(&rep.to_string());
        s
    };
    emit(common, text)?;
    Ok(if rep.passed() { Outcome::Ok } else { Outcome::ClaimFailed })
}

#[derive(Serialize)]
struct StemRow {
    stem: i32,
    free: usize,
    torsion: usize,
}

#[derive(Serialize)]
struct PageSummary {
    r: u32,
    stems: Vec<StemRow>,
}

#[derive(Serialize)]
struct RunSummary {
    model: String,
    window: Window,
    pages: Vec<PageSummary>,
    edge_cells: usize,
}

fn chart_rows(chart: &ChartReport) -> Vec<StemRow> {
    chart
        .stems
        .iter()
        .map(|s| {
            let free = s.classes.iter().filter(|c| c.order == "Z2-free").count();
            StemRow { stem: s.stem, free, torsion: s.classes.len() - free }
        })
        .collect()
}

fn model_for(variant: Variant, window: &Window) -> Option<Box<dyn Model>> {
    let b = loc_bound(window);
    match variant {
        Variant::Plain => Some(Box::new(PlainModel::connective())),
        Variant::LocA1 => Some(Box::new(PlainModel::localized(Localization::A1, b))),
        Variant::LocA3 => Some(Box::new(PlainModel::localized(Localization::A3, b))),
        Variant::Tau => Some(Box::new(TauModel {
            bound: (window.stem_max.abs().max(window.stem_min.abs()) + window.fil_cap as i32) / 2 + 4,
        })),
        Variant::W15 => None,
    }
}

fn ss_run(variant: Variant, common: &Common) -> anyhow::Result<Outcome> {
    let window = parse_window(common)?;
    let summary = match model_for(variant, &window) {
        Some(model) => {
            let r = run(model.as_ref(), window)?;
            let pages = r
                .pages
                .iter()
                .map(|p| PageSummary {
                    r: p.r,
                    stems: (window.stem_min..=window.stem_max)
                        .map(|stem| {
                            let (free, torsion) = p.stem_counts(stem, model.as_ref());
                            StemRow { stem, free, torsion }
                        })
                        .collect(),
                })
                .collect();
            let edge_cells = r.einfty().cells.values().filter(|c| c.edge && window.contains(c.s, c.stem())).count();
            RunSummary { model: r.model.clone(), window, pages, edge_cells }
        }
        None => {
            // E₂ = E∞ for w₁₅.
            let chart = w15_chart(window);
            let rows = chart_rows(&chart);
            let pages = vec![PageSummary { r: 2, stems: rows }];
            RunSummary { model: chart.model, window, pages, edge_cells: 0 }
        }
    };
    let text = if common.json {
        to_json(&summary)?
    } else {
        let mut s =
            format!("{}  stems {}..{}  s ≤ {}\n", summary.model, window.stem_min, window.stem_max, window.fil_cap);
        for p in &summary.pages {
            let cells: Vec<String> = p
                .stems
                .iter()
                .filter(|r| r.free + r.torsion > 0)
                .map(|r| format!("{}:{}+{}", r.stem, r.free, r.torsion))
                .collect();
            s.push_str(&format!("E{} (stem:free+F2) {}\n", p.r, cells.join(" ")));
        }
        s.push_str(&format!("edge cells in window: {}\n", summary.edge_cells));
        s
    };
    emit(common, text)?;
    Ok(Outcome::Ok)
}

fn ss_chart(variant: Variant, format: Format, common: &Common) -> anyhow::Result<Outcome> {
    let window = parse_window(common)?;
    let chart = match variant {
        Variant::Plain => compute_einfty(window)?,
        Variant::W15 => w15_chart(window),
        Variant::Tau => tau_ideal_ss(window)?,
        Variant::LocA1 => localize(window, Localization::A1, loc_bound(&window))?,
        Variant::LocA3 => localize(window, Localization::A3, loc_bound(&window))?,
    };
    let text = match (format, common.json) {
        (Format::Json, _) | (_, true) => to_json(&chart.stems)?,
        (Format::Ascii, false) => {
            let mut s = chart.ascii();
            for note in &chart.inconclusive {
                s.push_str(&format!("inconclusive: {note}\n"));
            }
            s
        }
    };
    emit(common, text)?;
    Ok(Outcome::Ok)
}

fn dispatch(cli: &Cli) -> anyhow::Result<Outcome> {
    let common = &cli.common;
    if common.digits < 10 {
        bail!("--digits must be at least 10");
    }
    match &cli.command {
        Command::Verify { what } => {
            let rep = verify(*what, common)?;
            emit_report(common, &rep)
        }
        Command::Intersections => intersections(common),
        Command::Characters => characters(common),
        Command::Forms { cmd: FormsCmd::Basis { weight } } => {
            let basis: Vec<String> = weight_basis(*weight).iter().map(|m| m.to_string()).collect();
            let text = if common.json { to_json(&basis)? } else { format!("{}\n", basis.join(" ")) };
            emit(common, text)?;
            Ok(Outcome::Ok)
        }
        Command::Cohomology { s, t, action } => {
            let action = match action {
                ActionArg::Deck => Action::Deck,
                ActionArg::W15 => Action::W15,
            };
            let g = group_cohomology(action, *s, *t)?;
            let text = if common.json {
                to_json(&g)?
            } else {
                let tors: Vec<String> = g.torsion_generators.iter().map(|(n, o)| format!("Z/{o}·{n}")).collect();
                let mut line = format!("H^{}(C2; R_{}) [{:?}]: Z2^{}", g.s, g.t, action, g.free_rank);
                for t in tors {
                    line.push_str(" + ");
                    line.push_str(&t);
                }
                line + "\n"
            };
            emit(common, text)?;
            Ok(Outcome::Ok)
        }
        Command::Ss { cmd: SsCmd::Run { variant } } => ss_run(*variant, common),
        Command::Ss { cmd: SsCmd::Chart { variant, format } } => ss_chart(*variant, *format, common),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(&cli) {
        Ok(Outcome::Ok) => ExitCode::SUCCESS,
        Ok(Outcome::ClaimFailed) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
