//! Small dense linear algebra over Z, Q and F₂.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::exactnum::Rational;

pub type IntMatrix = Vec<Vec<BigInt>>;

pub fn int_matrix(rows: &[Vec<i64>]) -> IntMatrix {
    rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect()
}

fn ncols(m: &IntMatrix, default: usize) -> usize {
    m.first().map_or(default, |r| r.len())
}

/// Saturated basis of {x ∈ Zⁿ : m·x = 0}, as column vectors.
pub fn kernel_basis(m: &IntMatrix, n: usize) -> Vec<Vec<BigInt>> {
    let rows = m.len();
    let mut a: IntMatrix = m.clone();
    // u accumulates the unimodular column operations applied to a.
    let mut u: IntMatrix = (0..n).map(|i| (0..n).map(|j| BigInt::from(u8::from(i == j))).collect()).collect();
    let mut pivot_col = 0;
    for r in 0..rows {
        if pivot_col >= n {
            break;
        }
        loop {
            let nz: Vec<usize> = (pivot_col..n).filter(|&c| !a[r][c].is_zero()).collect();
            if nz.is_empty() {
                break;
            }
            let best = *nz.iter().min_by_key(|&&c| a[r][c].abs()).expect("nonempty");
            swap_cols(&mut a, &mut u, pivot_col, best);
            let mut done = true;
            for c in pivot_col + 1..n {
                if a[r][c].is_zero() {
                    continue;
                }
                let q = a[r][c].div_floor(&a[r][pivot_col]);
                sub_col(&mut a, &mut u, c, pivot_col, &q);
                if !a[r][c].is_zero() {
                    done = false;
                }
            }
            if done {
                pivot_col += 1;
                break;
            }
        }
    }
    (pivot_col..n).map(|c| (0..n).map(|i| u[i][c].clone()).collect()).collect()
}

fn swap_cols(a: &mut IntMatrix, u: &mut IntMatrix, i: usize, j: usize) {
    if i == j {
        return;
    }
    for row in a.iter_mut().chain(u.iter_mut()) {
        row.swap(i, j);
    }
}

/// col[c] -= q·col[p]
fn sub_col(a: &mut IntMatrix, u: &mut IntMatrix, c: usize, p: usize, q: &BigInt) {
    for row in a.iter_mut().chain(u.iter_mut()) {
        let t = &row[p] * q;
        row[c] -= t;
    }
}

/// Nonzero elementary divisors of an integer matrix, in divisibility order.
pub fn smith_divisors(m: &IntMatrix) -> Vec<BigInt> {
    let mut a = m.clone();
    let rows = a.len();
    let cols = ncols(&a, 0);
    let mut out = Vec::new();
    let mut k = 0;
    while k < rows.min(cols) {
        let Some((pr, pc)) = (k..rows)
            .flat_map(|r| (k..cols).map(move |c| (r, c)))
            .filter(|&(r, c)| !a[r][c].is_zero())
            .min_by_key(|&(r, c)| a[r][c].abs())
        else {
            break;
        };
        a.swap(k, pr);
        for row in a.iter_mut() {
            row.swap(k, pc);
        }
        let mut clean = true;
        for r in k + 1..rows {
            if a[r][k].is_zero() {
                continue;
            }
            let q = a[r][k].div_floor(&a[k][k]);
            for c in k..cols {
                let t = &a[k][c] * &q;
                a[r][c] -= t;
            }
            if !a[r][k].is_zero() {
                clean = false;
            }
        }
        for c in k + 1..cols {
            if a[k][c].is_zero() {
                continue;
            }
            let q = a[k][c].div_floor(&a[k][k]);
            for r in k..rows {
                let t = &a[r][k] * &q;
                a[r][c] -= t;
            }
            if !a[k][c].is_zero() {
                clean = false;
            }
        }
        if !clean {
            continue;
        }
        // Divisibility: fold in any entry the pivot does not divide.
        let bad = (k + 1..rows)
            .flat_map(|r| (k + 1..cols).map(move |c| (r, c)))
            .find(|&(r, c)| !(&a[r][c] % &a[k][k]).is_zero());
        if let Some((r, _)) = bad {
            for c in k..cols {
                let t = a[r][c].clone();
                a[k][c] += t;
            }
            continue;
        }
        out.push(a[k][k].abs());
        k += 1;
    }
    out
}

/// Solves k·x = b over Q for a full-column-rank k (columns given as vectors).
pub fn solve_rational(cols: &[Vec<BigInt>], b: &[BigInt]) -> Option<Vec<Rational>> {
    let n = b.len();
    let k = cols.len();
    let mut m: Vec<Vec<Rational>> = (0..n)
        .map(|i| {
            let mut row: Vec<Rational> = cols.iter().map(|c| Rational::from_integer(c[i].clone())).collect();
            row.push(Rational::from_integer(b[i].clone()));
            row
        })
        .collect();
    let mut piv = Vec::new();
    let mut r = 0;
    for c in 0..k {
        let Some(p) = (r..n).find(|&i| !m[i][c].is_zero()) else { continue };
        m.swap(r, p);
        let inv = Rational::one() / &m[r][c];
        for x in m[r].iter_mut() {
            *x *= &inv;
        }
        for i in 0..n {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for j in 0..=k {
                    let t = &f * &m[r][j];
                    m[i][j] -= t;
                }
            }
        }
        piv.push(c);
        r += 1;
    }
    if (r..n).any(|i| !m[i][k].is_zero()) {
        return None;
    }
    let mut x = vec![Rational::zero(); k];
    for (row, &c) in piv.iter().enumerate() {
        x[c] = m[row][k].clone();
    }
    Some(x)
}

/// Structure of ker/im for a sublattice im ⊆ ker: free rank and torsion divisors (> 1).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuotientLattice {
    pub free_rank: usize,
    pub torsion: Vec<BigInt>,
}

/// ker(a) / im(b) where a is (r×n), b is (n×m) with a·b = 0.
pub fn kernel_mod_image(a: &IntMatrix, b: &IntMatrix, n: usize) -> QuotientLattice {
    let kb = kernel_basis(a, n);
    let k = kb.len();
    let m = ncols(b, 0);
    // Coordinates of each image column in the kernel basis: a k×m integer matrix.
    let mut coords: IntMatrix = vec![vec![BigInt::zero(); m]; k];
    for c in 0..m {
        let col: Vec<BigInt> = (0..n).map(|i| b[i][c].clone()).collect();
        let x = solve_rational(&kb, &col).expect("image lies in kernel");
        for (i, xi) in x.into_iter().enumerate() {
            assert!(xi.is_integer(), "kernel basis is saturated");
            coords[i][c] = xi.to_integer();
        }
    }
    let divs = smith_divisors(&coords);
    QuotientLattice { free_rank: k - divs.len(), torsion: divs.into_iter().filter(|d| !d.is_one()).collect() }
}

pub fn mat_mul(a: &IntMatrix, b: &IntMatrix) -> IntMatrix {
    let n = ncols(b, 0);
    a.iter().map(|row| (0..n).map(|j| row.iter().zip(b.iter()).map(|(x, brow)| x * &brow[j]).sum()).collect()).collect()
}

pub fn identity(n: usize) -> IntMatrix {
    (0..n).map(|i| (0..n).map(|j| BigInt::from(u8::from(i == j))).collect()).collect()
}

pub fn add_scaled_identity(a: &IntMatrix, s: i64) -> IntMatrix {
    a.iter()
        .enumerate()
        .map(|(i, row)| row.iter().enumerate().map(|(j, x)| if i == j { x + s } else { x.clone() }).collect())
        .collect()
}

pub fn negate(a: &IntMatrix) -> IntMatrix {
    a.iter().map(|row| row.iter().map(|x| -x).collect()).collect()
}

/// Rank over F₂ of a bit matrix given as rows of u64 words.
pub fn f2_rank(rows: &[Vec<u64>]) -> usize {
    let mut rows: Vec<Vec<u64>> = rows.iter().filter(|r| r.iter().any(|&w| w != 0)).cloned().collect();
    let mut rank = 0;
    let words = rows.first().map_or(0, |r| r.len());
    for bit in 0..words * 64 {
        let (w, b) = (bit / 64, 1u64 << (bit % 64));
        let Some(p) = (rank..rows.len()).find(|&i| rows[i][w] & b != 0) else { continue };
        rows.swap(rank, p);
        let pivot = rows[rank].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i != rank && row[w] & b != 0 {
                for (x, y) in row.iter_mut().zip(&pivot) {
                    *x ^= y;
                }
            }
        }
        rank += 1;
    }
    rank
}

/// Packs a slice of F₂ entries into u64 words.
pub fn pack_bits(bits: &[bool]) -> Vec<u64> {
    let mut out = vec![0u64; bits.len().div_ceil(64).max(1)];
    for (k, &b) in bits.iter().enumerate() {
        if b {
            out[k / 64] |= 1 << (k % 64);
        }
    }
    out
}

/// Largest power of two dividing a nonzero integer, and the odd part.
pub fn split_two_power(n: &BigInt) -> (u32, BigInt) {
    let mut v = 0;
    let mut m = n.abs();
    while m.is_even() && !m.is_zero() {
        m >>= 1;
        v += 1;
    }
    (v, m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn bi(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| x.into()).collect()
    }

    #[test]
    fn kernel_and_smith() {
        let m = int_matrix(&[vec![1, 2, 3], vec![2, 4, 6]]);
        let k = kernel_basis(&m, 3);
        assert_eq!(k.len(), 2);
        for v in &k {
            assert!(mat_mul(&m, &v.iter().map(|x| vec![x.clone()]).collect()).iter().all(|r| r[0].is_zero()));
        }
        assert_eq!(smith_divisors(&int_matrix(&[vec![2, 4], vec![6, 8]])), bi(&[2, 4]));
        assert_eq!(smith_divisors(&int_matrix(&[vec![2, 0], vec![0, 3]])), bi(&[1, 6]));
    }

    #[test]
    fn cyclic_group_cohomology() {
        // Z with trivial involution: ker(1-σ)/im(1+σ) = Z/2.
        let sigma = int_matrix(&[vec![1]]);
        let q = kernel_mod_image(&add_scaled_identity(&negate(&sigma), 1), &add_scaled_identity(&sigma, 1), 1);
        assert_eq!(q, QuotientLattice { free_rank: 0, torsion: bi(&[2]) });
        // Swap on Z²: the regular representation is cohomologically trivial.
        let swap = int_matrix(&[vec![0, 1], vec![1, 0]]);
        let q = kernel_mod_image(&add_scaled_identity(&negate(&swap), 1), &add_scaled_identity(&swap, 1), 2);
        assert_eq!(q, QuotientLattice { free_rank: 0, torsion: vec![] });
    }

    #[test]
    fn f2() {
        let rows =
            vec![pack_bits(&[true, true, false]), pack_bits(&[false, true, true]), pack_bits(&[true, false, true])];
        assert_eq!(f2_rank(&rows), 2);
    }

    proptest! {
        #[test]
        fn kernel_is_saturated_and_complete(entries in prop::collection::vec(-6i64..6, 12)) {
            let m = int_matrix(&[entries[0..4].to_vec(), entries[4..8].to_vec(), entries[8..12].to_vec()]);
            let k = kernel_basis(&m, 4);
            let rank = smith_divisors(&m).len();
            prop_assert_eq!(k.len(), 4 - rank);
            // Saturation: the kernel basis has trivial elementary divisors.
            if !k.is_empty() {
                let kt: IntMatrix = (0..4).map(|i| k.iter().map(|v| v[i].clone()).collect()).collect();
                prop_assert!(smith_divisors(&kt).iter().all(|d| d.is_one()));
            }
        }
    }
}
