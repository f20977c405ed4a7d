//! Pages of a spectral sequence over a padded window: E₂ cells, d_r matrices
//! on E_r and the passage to E_{r+1}.

use std::collections::{BTreeMap, HashMap};

use super::{Model, SSClass, Window};
use crate::error::{Error, Result};

type F2 = Vec<u8>;

/// Row-echelon basis of an F₂-subspace, with optional tags recording combinations.
#[derive(Clone, Debug, Default)]
struct Echelon {
    rows: Vec<(usize, F2, F2)>,
}

impl Echelon {
    /// Reduces v in place; returns the tag of the combination subtracted.
    fn reduce(&self, v: &mut F2, tag_len: usize) -> F2 {
        let mut tag = vec![0; tag_len];
        for (p, row, t) in &self.rows {
            if v[*p] == 1 {
                xor(v, row);
                if !t.is_empty() {
                    xor(&mut tag, t);
                }
            }
        }
        tag
    }

    /// Adds v (with its tag); false if v was dependent.
    fn insert(&mut self, mut v: F2, mut tag: F2) -> bool {
        for (p, row, t) in &self.rows {
            if v[*p] == 1 {
                xor(&mut v, row);
                if !t.is_empty() {
                    xor(&mut tag, t);
                }
            }
        }
        match v.iter().position(|&x| x == 1) {
            Some(p) => {
                self.rows.push((p, v, tag));
                true
            }
            None => false,
        }
    }
}

fn xor(a: &mut F2, b: &F2) {
    for (x, y) in a.iter_mut().zip(b) {
        *x ^= y;
    }
}

fn unit(n: usize, k: usize) -> F2 {
    let mut v = vec![0; n];
    v[k] = 1;
    v
}

/// Null space of an F₂ matrix given by columns (each of length `rows`), one vector per free column.
fn null_space(cols: &[F2], rows: usize) -> (Vec<F2>, Vec<usize>) {
    let n = cols.len();
    // Row-reduce the transpose view: work on a dense rows×n matrix.
    let mut m: Vec<F2> = (0..rows).map(|r| cols.iter().map(|c| c[r]).collect()).collect();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..n {
        let Some(p) = (r..rows).find(|&i| m[i][c] == 1) else { continue };
        m.swap(r, p);
        let pivot_row = m[r].clone();
        for (i, row) in m.iter_mut().enumerate() {
            if i != r && row[c] == 1 {
                xor(row, &pivot_row);
            }
        }
        pivots.push(c);
        r += 1;
    }
    let mut basis = Vec::new();
    for f in (0..n).filter(|c| !pivots.contains(c)) {
        let mut v = unit(n, f);
        for (row, &pc) in pivots.iter().enumerate() {
            if m[row][f] == 1 {
                v[pc] = 1;
            }
        }
        basis.push(v);
    }
    (basis, pivots)
}

/// One bidegree (s, t). On the lattice line representatives are integer vectors
/// spanning a sublattice of Z₂^basis; elsewhere they are F₂-vectors modulo `bounds`.
#[derive(Clone, Debug)]
pub struct Cell {
    pub s: u32,
    pub t: i32,
    pub basis: Vec<SSClass>,
    pub lattice: bool,
    pub reps: Vec<Vec<i64>>,
    index: HashMap<SSClass, usize>,
    bounds: Echelon,
    /// Some differential touching this cell left the computed region.
    pub edge: bool,
}

impl Cell {
    fn new(s: u32, t: i32, basis: Vec<SSClass>) -> Result<Self> {
        let lattice = basis.first().is_some_and(SSClass::on_lattice_line);
        if basis.iter().any(|c| c.on_lattice_line() != lattice) {
            return Err(Error::Undefined(format!("cell ({s},{t}) mixes lattice and torsion classes")));
        }
        let index = basis.iter().enumerate().map(|(k, c)| (*c, k)).collect();
        let n = basis.len();
        let reps = (0..n).map(|k| unit(n, k).into_iter().map(i64::from).collect()).collect();
        Ok(Self { s, t, basis, lattice, reps, index, bounds: Echelon::default(), edge: false })
    }

    pub fn stem(&self) -> i32 {
        self.t - self.s as i32
    }

    pub fn dim(&self) -> usize {
        self.reps.len()
    }

    pub fn position(&self, c: &SSClass) -> Option<usize> {
        self.index.get(c).copied()
    }

    fn rep_mod2(&self, k: usize) -> F2 {
        self.reps[k].iter().map(|x| x.rem_euclid(2) as u8).collect()
    }

    /// Coordinates in `reps` of an E₂-vector that is a cycle on this page, or None if it is not.
    fn coordinates(&self, v: &F2) -> Option<F2> {
        let mut v = v.clone();
        self.bounds.reduce(&mut v, 0);
        let mut ech = Echelon::default();
        let n = self.reps.len();
        for k in 0..n {
            let mut r = self.rep_mod2(k);
            self.bounds.reduce(&mut r, 0);
            ech.insert(r, unit(n, k));
        }
        let tag = ech.reduce(&mut v, n);
        v.iter().all(|&x| x == 0).then_some(tag)
    }

    /// Whether an E₂-vector is zero on this page (a boundary).
    pub fn is_boundary(&self, v: &[u8]) -> bool {
        let mut v = v.to_vec();
        self.bounds.reduce(&mut v, 0);
        v.iter().all(|&x| x == 0)
    }

    /// Whether an E₂-vector represents a nonzero class on this page.
    pub fn is_nonzero_class(&self, v: &[u8]) -> bool {
        !self.is_boundary(v) && self.coordinates(&v.to_vec()).is_some()
    }

    /// Whether the E₂-vectors are cycles on this page and independent modulo boundaries.
    pub fn independent_classes(&self, vecs: &[Vec<u8>]) -> bool {
        let mut ech = Echelon::default();
        vecs.iter().all(|v| {
            let mut v = v.clone();
            self.bounds.reduce(&mut v, 0);
            self.coordinates(&v).is_some() && ech.insert(v, vec![])
        })
    }

    pub fn vector_of(&self, classes: &[SSClass]) -> Option<F2> {
        let mut v = vec![0; self.basis.len()];
        for c in classes {
            v[self.position(c)?] ^= 1;
        }
        Some(v)
    }

    /// Whether a single E₂ basis class survives as a nonzero class (lattice: the monomial itself is a rep).
    pub fn contains_class(&self, c: &SSClass) -> bool {
        let Some(k) = self.position(c) else { return false };
        if self.lattice {
            let n = self.basis.len();
            let target: Vec<i64> = unit(n, k).into_iter().map(i64::from).collect();
            return self.reps.contains(&target);
        }
        self.is_nonzero_class(&unit(self.basis.len(), k))
    }

    /// Human-readable representative.
    pub fn describe(&self, k: usize) -> String {
        let terms: Vec<String> = self.reps[k]
            .iter()
            .zip(&self.basis)
            .filter(|(x, _)| **x != 0)
            .map(|(x, c)| if *x == 1 { c.to_string() } else { format!("{x}·{c}") })
            .collect();
        terms.join(" + ")
    }
}

#[derive(Clone, Debug)]
pub struct SSPage {
    pub r: u32,
    pub window: Window,
    pub cells: BTreeMap<(u32, i32), Cell>,
    /// Matrix of d_r out of each cell, columns indexed by the cell's reps, rows by the target's.
    pub differentials: BTreeMap<(u32, i32), Vec<Vec<u8>>>,
}

impl SSPage {
    pub fn cell(&self, s: u32, t: i32) -> Option<&Cell> {
        self.cells.get(&(s, t))
    }

    pub fn cell_of(&self, c: &SSClass) -> Option<&Cell> {
        self.cell(c.s(), c.t())
    }

    /// Whether a basis class is a nonzero class on this page.
    pub fn alive(&self, c: &SSClass) -> bool {
        self.cell_of(c).is_some_and(|cell| cell.contains_class(c))
    }

    /// (free rank, F₂-dimension) at a stem, restricted to reported classes.
    pub fn stem_counts(&self, stem: i32, model: &dyn Model) -> (usize, usize) {
        let mut free = 0;
        let mut tors = 0;
        for cell in self.cells.values().filter(|c| c.stem() == stem && c.s <= self.window.fil_cap) {
            for k in 0..cell.dim() {
                let reported =
                    cell.reps[k].iter().zip(&cell.basis).filter(|(x, _)| **x != 0).all(|(_, c)| model.reported(c));
                if !reported {
                    continue;
                }
                if cell.lattice {
                    free += 1;
                } else {
                    tors += 1;
                }
            }
        }
        (free, tors)
    }
}

/// A run through all pages: E₂ = E₃, then one page after each d_r, the last being E∞.
#[derive(Clone, Debug)]
pub struct SSRun {
    pub model: String,
    pub window: Window,
    pub pages: Vec<SSPage>,
}

impl SSRun {
    pub fn e2(&self) -> &SSPage {
        &self.pages[0]
    }

    pub fn page(&self, r: u32) -> Option<&SSPage> {
        self.pages.iter().rev().find(|p| p.r <= r)
    }

    pub fn einfty(&self) -> &SSPage {
        self.pages.last().expect("at least E₂")
    }
}

fn build_cells(model: &dyn Model, region: &Window) -> Result<BTreeMap<(u32, i32), Cell>> {
    let mut cells = BTreeMap::new();
    for s in 0..=region.fil_cap {
        for stem in region.stem_min..=region.stem_max {
            let t = stem + s as i32;
            let basis = model.classes_at(s, t);
            if !basis.is_empty() {
                cells.insert((s, t), Cell::new(s, t, basis)?);
            }
        }
    }
    Ok(cells)
}

/// d_r on every cell of a page, in rep coordinates.
fn assemble(
    model: &dyn Model,
    r: u32,
    cells: &mut BTreeMap<(u32, i32), Cell>,
) -> Result<BTreeMap<(u32, i32), Vec<Vec<u8>>>> {
    let mut mats = BTreeMap::new();
    let keys: Vec<(u32, i32)> = cells.keys().copied().collect();
    for key in keys {
        let (s, t) = key;
        let target_key = (s + r, t + r as i32 - 1);
        let src = &cells[&key];
        let mut images: Vec<Vec<SSClass>> = Vec::with_capacity(src.dim());
        let mut leaves = false;
        for k in 0..src.dim() {
            let mut acc: BTreeMap<SSClass, u8> = BTreeMap::new();
            for (x, c) in src.reps[k].iter().zip(&src.basis) {
                if x.rem_euclid(2) == 1 {
                    for y in model.differential(r, c)? {
                        *acc.entry(y).or_default() ^= 1;
                    }
                }
            }
            let (inside, outside): (Vec<SSClass>, Vec<SSClass>) =
                acc.into_iter().filter(|(_, v)| *v == 1).map(|(c, _)| c).partition(|c| model.in_box(c));
            leaves |= !outside.is_empty();
            images.push(inside);
        }
        if leaves {
            cells.get_mut(&key).expect("present").edge = true;
        }
        let Some(target) = cells.get(&target_key) else {
            if images.iter().any(|v| !v.is_empty()) {
                cells.get_mut(&key).expect("present").edge = true;
            }
            continue;
        };
        let mut cols = Vec::with_capacity(images.len());
        for img in &images {
            let v = target.vector_of(img).ok_or_else(|| {
                Error::Undefined(format!(
                    "d_{r} of a class in ({s},{t}) leaves the E₂ basis of ({}, {})",
                    target_key.0, target_key.1
                ))
            })?;
            let coords = target.coordinates(&v).ok_or_else(|| {
                Error::Undefined(format!("d_{r} image {img:?} is not a cycle on E_{r} at {target_key:?}"))
            })?;
            cols.push(coords);
        }
        if !cols.is_empty() {
            mats.insert(key, cols);
        }
    }
    Ok(mats)
}

/// Checks d_r ∘ d_r = 0 on the assembled matrices.
fn check_square_zero(
    r: u32,
    mats: &BTreeMap<(u32, i32), Vec<Vec<u8>>>,
    cells: &BTreeMap<(u32, i32), Cell>,
) -> Result<()> {
    for (&(s, t), cols) in mats {
        let mid = (s + r, t + r as i32 - 1);
        let Some(next) = mats.get(&mid) else { continue };
        let Some(target) = cells.get(&(s + 2 * r, t + 2 * r as i32 - 2)) else { continue };
        for col in cols {
            let mut out = vec![0u8; target.dim()];
            for (k, &x) in col.iter().enumerate() {
                if x == 1 {
                    xor(&mut out, &next[k]);
                }
            }
            if out.contains(&1) {
                return Err(Error::Undefined(format!("d_{r}∘d_{r} ≠ 0 starting at ({s},{t})")));
            }
        }
    }
    Ok(())
}

/// E_{r+1} from E_r and the d_r matrices.
fn homology(
    r: u32,
    cells: &BTreeMap<(u32, i32), Cell>,
    mats: &BTreeMap<(u32, i32), Vec<Vec<u8>>>,
) -> BTreeMap<(u32, i32), Cell> {
    let mut next = cells.clone();
    for (&(s, t), cell) in cells {
        let n = cell.dim();
        let target_dim = cells.get(&(s + r, t + r as i32 - 1)).map_or(0, Cell::dim);
        let out_cols = mats.get(&(s, t)).cloned().unwrap_or_else(|| vec![vec![0; target_dim]; n]);
        let (kernel, pivots) = null_space(&out_cols, target_dim);
        let incoming = if s >= r { mats.get(&(s - r, t - r as i32 + 1)) } else { None };
        let new = next.get_mut(&(s, t)).expect("cloned");
        if cell.lattice {
            let lift = |v: &F2| -> Vec<i64> {
                let mut out = vec![0i64; cell.basis.len()];
                for (k, &x) in v.iter().enumerate() {
                    if x == 1 {
                        for (o, y) in out.iter_mut().zip(&cell.reps[k]) {
                            *o += y;
                        }
                    }
                }
                out
            };
            let mut reps: Vec<Vec<i64>> = kernel.iter().map(lift).collect();
            reps.extend(pivots.iter().map(|&p| cell.reps[p].iter().map(|x| 2 * x).collect()));
            reps.sort_by_key(|v| v.iter().position(|&x| x != 0));
            new.reps = reps;
            continue;
        }
        let to_e2 = |v: &F2| -> F2 {
            let mut out = vec![0u8; cell.basis.len()];
            for (k, &x) in v.iter().enumerate() {
                if x == 1 {
                    xor(&mut out, &cell.rep_mod2(k));
                }
            }
            out
        };
        let mut images = Echelon::default();
        if let Some(cols) = incoming {
            for col in cols {
                if images.insert(col.clone(), vec![]) {
                    new.bounds.insert(to_e2(col), vec![]);
                }
            }
        }
        let mut reps = Vec::new();
        for v in &kernel {
            if images.insert(v.clone(), vec![]) {
                reps.push(to_e2(v).into_iter().map(i64::from).collect());
            }
        }
        new.reps = reps;
    }
    next
}

/// Runs the model through its pages on the padded window.
pub fn run(model: &dyn Model, window: Window) -> Result<SSRun> {
    let region = window.padded();
    let mut cells = build_cells(model, &region)?;
    let mut pages = vec![SSPage { r: 2, window, cells: cells.clone(), differentials: BTreeMap::new() }];
    for r in model.pages() {
        let mats = assemble(model, r, &mut cells)?;
        check_square_zero(r, &mats, &cells)?;
        if let Some(last) = pages.last_mut() {
            last.cells = cells.clone();
            last.differentials = mats.clone();
        }
        cells = homology(r, &cells, &mats);
        pages.push(SSPage { r: r + 1, window, cells: cells.clone(), differentials: BTreeMap::new() });
    }
    Ok(SSRun { model: model.name(), window, pages })
}

#[cfg(test)]
mod tests {
    use super::super::{KoModel, PlainModel};
    use super::*;

    #[test]
    fn null_space_basics() {
        // Columns e0, e0, 0: kernel spanned by (1,1,0) and (0,0,1).
        let cols = vec![vec![1, 0], vec![1, 0], vec![0, 0]];
        let (k, piv) = null_space(&cols, 2);
        assert_eq!(piv, vec![0]);
        assert_eq!(k, vec![vec![1, 1, 0], vec![0, 0, 1]]);
    }

    #[test]
    fn ko_chart() {
        let w = Window::new(-8, 16, 12).unwrap();
        let model = KoModel { bound: 20 };
        let run = run(&model, w).unwrap();
        let e = run.einfty();
        let counts: Vec<(usize, usize)> = (0..8).map(|n| e.stem_counts(n, &model)).collect();
        assert_eq!(counts, vec![(1, 0), (0, 1), (0, 1), (0, 0), (1, 0), (0, 0), (0, 0), (0, 0)]);
    }

    #[test]
    fn plain_low_stems() {
        let w = Window::new(-4, 12, 12).unwrap();
        let model = PlainModel::connective();
        let run = run(&model, w).unwrap();
        let e = run.einfty();
        assert_eq!(e.stem_counts(1, &model), (0, 1));
        assert_eq!(e.stem_counts(3, &model), (0, 1));
        assert!(e.alive(&super::super::NU));
        assert!(e.alive(&super::super::ETA));
        let e4 = run.page(4).unwrap();
        let zero = e4.cell(0, 4).unwrap();
        // Weight 2: only 2a₁² survives d₃.
        assert_eq!(zero.reps, vec![vec![2]]);
    }
}
