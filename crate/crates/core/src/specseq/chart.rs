//! E∞ charts: per-stem class lists, JSON and ASCII rendering.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::page::SSRun;
use super::theorem::k_basis;
use super::{run, Kind, Model, PlainModel, SSClass, Window};
use crate::error::Result;

/// Where a class of the plain chart sits in the description 0 → K → π_* → R → 0.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Part {
    R,
    K,
    #[serde(rename = "tower")]
    Tower,
    #[serde(rename = "unexplained")]
    Unexplained,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChartClass {
    pub s: u32,
    pub t: i32,
    pub monomial: String,
    pub order: String,
    /// Integer multiple of the monomial on the lattice line (e.g. 2 for 2a₁²).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub scale: Option<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub part: Option<Part>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChartStem {
    pub stem: i32,
    pub classes: Vec<ChartClass>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChartReport {
    pub model: String,
    pub window: Window,
    pub stems: Vec<ChartStem>,
    /// Unexpected classes near the window edge.
    pub inconclusive: Vec<String>,
}

/// ζ^{8k} or ζ^{8k+6}a₆.
pub fn is_tower(c: &SSClass) -> bool {
    c.kind == Kind::Plain && c.i == 0 && c.j == 0 && ((c.e == 0 && c.k.is_multiple_of(8)) || (c.e == 1 && c.k % 8 == 6))
}

fn in_k(c: &SSClass, basis: &[SSClass]) -> bool {
    c.kind == Kind::Plain
        && c.j >= 0
        && basis.iter().any(|b| {
            let dj = c.j - b.j;
            b.k == c.k && b.i == c.i && b.e == c.e && dj >= 0 && dj % 8 == 0
        })
}

pub fn classify(c: &SSClass) -> Part {
    let kb: Vec<SSClass> = k_basis().into_iter().map(|(_, c)| c).collect();
    if c.s() >= 3 && is_tower(c) {
        Part::Tower
    } else if in_k(c, &kb) {
        Part::K
    } else if c.k == 0 || (c.k <= 2 && c.i >= c.k as i32) {
        Part::R
    } else {
        Part::Unexplained
    }
}

impl ChartReport {
    pub fn from_run(run: &SSRun, model: &dyn Model, annotate: bool) -> Self {
        let e = run.einfty();
        let w = run.window;
        let mut stems: Vec<ChartStem> =
            (w.stem_min..=w.stem_max).map(|stem| ChartStem { stem, classes: vec![] }).collect();
        let mut inconclusive = Vec::new();
        for cell in e.cells.values() {
            if !w.contains(cell.s, cell.stem()) {
                continue;
            }
            for (k, rep) in cell.reps.iter().enumerate() {
                let support: Vec<(i64, &SSClass)> =
                    rep.iter().zip(&cell.basis).filter(|(x, _)| **x != 0).map(|(x, c)| (*x, c)).collect();
                if support.is_empty() || !support.iter().all(|(_, c)| model.reported(c)) {
                    continue;
                }
                let (monomial, scale, lead) = if support.len() == 1 {
                    let (x, c) = support[0];
                    (c.monomial(), (cell.lattice && x != 1).then_some(x), *c)
                } else {
                    (support.iter().map(|(_, c)| c.monomial()).collect::<Vec<_>>().join(" + "), None, *support[0].1)
                };
                let part = annotate.then(|| classify(&lead));
                if annotate && part == Some(Part::Unexplained) && !w.is_interior(cell.s, cell.stem()) {
                    inconclusive.push(format!("({}, {}) {}", cell.s, cell.t, cell.describe(k)));
                }
                let order = if cell.lattice { "Z2-free".to_string() } else { "2^1".to_string() };
                let slot = &mut stems[(cell.stem() - w.stem_min) as usize];
                slot.classes.push(ChartClass { s: cell.s, t: cell.t, monomial, order, scale, part });
            }
        }
        for st in &mut stems {
            st.classes.sort_by(|a, b| (a.s, &a.monomial).cmp(&(b.s, &b.monomial)));
        }
        Self { model: run.model.clone(), window: w, stems, inconclusive }
    }

    /// Filtration-by-stem grid: 'o' free class, digits count F₂ classes, '.' empty.
    pub fn ascii(&self) -> String {
        let w = self.window;
        let top = self.stems.iter().flat_map(|s| s.classes.iter().map(|c| c.s)).max().unwrap_or(0).min(w.fil_cap);
        let mut out = String::new();
        let _ = writeln!(out, "E∞ {}  stems {}..{}  s ≤ {}", self.model, w.stem_min, w.stem_max, w.fil_cap);
        for s in (0..=top).rev() {
            let _ = write!(out, "{s:>3} |");
            for st in &self.stems {
                let here: Vec<&ChartClass> = st.classes.iter().filter(|c| c.s == s).collect();
                let ch = if here.is_empty() {
                    '.'
                } else if here.iter().any(|c| c.order == "Z2-free") {
                    'o'
                } else if here.len() <= 9 {
                    char::from_digit(here.len() as u32, 10).unwrap_or('+')
                } else {
                    '+'
                };
                out.push(ch);
            }
            out.push('\n');
        }
        let _ = write!(out, "    +");
        out.push_str(&"-".repeat(self.stems.len()));
        out.push('\n');
        let mut labels = vec![' '; self.stems.len() + 8];
        for (col, st) in self.stems.iter().enumerate() {
            if st.stem % 8 == 0 {
                for (d, ch) in st.stem.to_string().chars().enumerate() {
                    if col + d < labels.len() {
                        labels[col + d] = ch;
                    }
                }
            }
        }
        let _ = writeln!(out, "     {}", labels.into_iter().collect::<String>().trim_end());
        out
    }
}

/// E∞ of the deck spectral sequence for R on a window.
pub fn compute_einfty(window: Window) -> Result<ChartReport> {
    let model = PlainModel::connective();
    let run = run(&model, window)?;
    Ok(ChartReport::from_run(&run, &model, true))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn low_stems() {
        let chart = compute_einfty(Window::new(-4, 16, 20).unwrap()).unwrap();
        let stem = |n: i32| &chart.stems[(n + 4) as usize];
        assert_eq!(stem(1).classes.len(), 1);
        assert_eq!(stem(1).classes[0].monomial, "z^1 a1^1 a3^0 a6^0");
        assert_eq!(stem(3).classes.len(), 1);
        assert_eq!(stem(3).classes[0].s, 3);
        let zero: Vec<&ChartClass> = stem(0).classes.iter().collect();
        assert_eq!(zero.len(), 1);
        assert_eq!(zero[0].order, "Z2-free");
        let json = serde_json::to_string(&chart.stems).unwrap();
        let back: Vec<ChartStem> = serde_json::from_str(&json).unwrap();
        assert_eq!(back, chart.stems);
        assert!(chart.ascii().contains('o'));
    }
}
