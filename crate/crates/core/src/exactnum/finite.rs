//! The three residue rings used for level structure: M₂(F₂), F₉ = F₃[Y]/(Y²+1)
//! and F₂₅ = F₅[W]/(W²+W+1).

use std::ops::{Add, Mul, Neg};

/// 2×2 matrix over F₂.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct M2F2(pub [[u8; 2]; 2]);

impl M2F2 {
    pub fn new(m: [[i64; 2]; 2]) -> Self {
        Self(m.map(|r| r.map(|x| x.rem_euclid(2) as u8)))
    }

    pub fn identity() -> Self {
        Self([[1, 0], [0, 1]])
    }

    pub fn zero() -> Self {
        Self([[0, 0], [0, 0]])
    }

    pub fn scalar(n: i64) -> Self {
        let c = n.rem_euclid(2) as u8;
        Self([[c, 0], [0, c]])
    }

    pub fn det(&self) -> u8 {
        let m = self.0;
        (m[0][0] * m[1][1] + m[0][1] * m[1][0]) % 2
    }

    fn apply(&self, v: (u8, u8)) -> (u8, u8) {
        let m = self.0;
        ((m[0][0] * v.0 + m[0][1] * v.1) % 2, (m[1][0] * v.0 + m[1][1] * v.1) % 2)
    }

    /// Sign of the permutation induced on the three nonzero vectors of F₂²,
    /// as 0 (even) or 1 (odd). `None` when the matrix is singular.
    pub fn permutation_parity(&self) -> Option<u8> {
        if self.det() == 0 {
            return None;
        }
        let vecs = [(1, 0), (0, 1), (1, 1)];
        let perm: Vec<usize> =
            vecs.iter().map(|v| vecs.iter().position(|w| *w == self.apply(*v)).expect("invertible map")).collect();
        let mut inversions = 0;
        for a in 0..3 {
            for b in a + 1..3 {
                if perm[a] > perm[b] {
                    inversions += 1;
                }
            }
        }
        Some(inversions % 2)
    }
}

impl Add for M2F2 {
    type Output = M2F2;
    fn add(self, o: M2F2) -> M2F2 {
        let mut out = [[0u8; 2]; 2];
        for r in 0..2 {
            for c in 0..2 {
                out[r][c] = (self.0[r][c] + o.0[r][c]) % 2;
            }
        }
        M2F2(out)
    }
}

impl Mul for M2F2 {
    type Output = M2F2;
    fn mul(self, o: M2F2) -> M2F2 {
        let mut out = [[0u8; 2]; 2];
        for r in 0..2 {
            for c in 0..2 {
                out[r][c] = (self.0[r][0] * o.0[0][c] + self.0[r][1] * o.0[1][c]) % 2;
            }
        }
        M2F2(out)
    }
}

/// `a + b·Y` in F₉ with `Y² = −1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct F9(pub u8, pub u8);

impl F9 {
    pub fn new(a: i64, b: i64) -> Self {
        Self(a.rem_euclid(3) as u8, b.rem_euclid(3) as u8)
    }

    pub fn one() -> Self {
        Self(1, 0)
    }

    pub fn pow(self, e: u32) -> Self {
        (0..e).fold(Self::one(), |acc, _| acc * self)
    }
}

impl Add for F9 {
    type Output = F9;
    fn add(self, o: F9) -> F9 {
        F9((self.0 + o.0) % 3, (self.1 + o.1) % 3)
    }
}

impl Mul for F9 {
    type Output = F9;
    fn mul(self, o: F9) -> F9 {
        let (a, b, c, d) = (self.0 as i64, self.1 as i64, o.0 as i64, o.1 as i64);
        F9::new(a * c - b * d, a * d + b * c)
    }
}

impl Neg for F9 {
    type Output = F9;
    fn neg(self) -> F9 {
        F9::new(-(self.0 as i64), -(self.1 as i64))
    }
}

/// `a + b·W` in F₂₅ with `W² = −W − 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct F25(pub u8, pub u8);

impl F25 {
    pub fn new(a: i64, b: i64) -> Self {
        Self(a.rem_euclid(5) as u8, b.rem_euclid(5) as u8)
    }

    pub fn one() -> Self {
        Self(1, 0)
    }

    pub fn pow(self, e: u32) -> Self {
        (0..e).fold(Self::one(), |acc, _| acc * self)
    }
}

impl Add for F25 {
    type Output = F25;
    fn add(self, o: F25) -> F25 {
        F25((self.0 + o.0) % 5, (self.1 + o.1) % 5)
    }
}

impl Mul for F25 {
    type Output = F25;
    fn mul(self, o: F25) -> F25 {
        let (a, b, c, d) = (self.0 as i64, self.1 as i64, o.0 as i64, o.1 as i64);
        // (a + bW)(c + dW) = ac + (ad + bc)W + bd(−W − 1)
        F25::new(a * c - b * d, a * d + b * c - b * d)
    }
}

impl Neg for F25 {
    type Output = F25;
    fn neg(self) -> F25 {
        F25::new(-(self.0 as i64), -(self.1 as i64))
    }
}

/// Tagged element of one of the three residue rings.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FiniteRingElement {
    M2F2(M2F2),
    F9(F9),
    F25(F25),
}

impl FiniteRingElement {
    pub fn mul(self, o: Self) -> Option<Self> {
        match (self, o) {
            (Self::M2F2(a), Self::M2F2(b)) => Some(Self::M2F2(a * b)),
            (Self::F9(a), Self::F9(b)) => Some(Self::F9(a * b)),
            (Self::F25(a), Self::F25(b)) => Some(Self::F25(a * b)),
            _ => None,
        }
    }

    pub fn add(self, o: Self) -> Option<Self> {
        match (self, o) {
            (Self::M2F2(a), Self::M2F2(b)) => Some(Self::M2F2(a + b)),
            (Self::F9(a), Self::F9(b)) => Some(Self::F9(a + b)),
            (Self::F25(a), Self::F25(b)) => Some(Self::F25(a + b)),
            _ => None,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defining_relations() {
        let y = F9(0, 1);
        assert_eq!(y * y, F9::new(-1, 0));
        let w = F25(0, 1);
        assert_eq!(w * w + w + F25::one(), F25(0, 0));
        // F₂₅ units form a cyclic group of order 24
        assert_eq!(w.pow(3), F25::one());
    }

    #[test]
    fn gl2_f2_parity() {
        let swap = M2F2::new([[0, 1], [1, 0]]);
        let rot = M2F2::new([[1, 1], [1, 0]]);
        assert_eq!(swap.permutation_parity(), Some(1));
        assert_eq!(rot.permutation_parity(), Some(0));
        assert_eq!(M2F2::identity().permutation_parity(), Some(0));
        assert_eq!(M2F2::zero().permutation_parity(), None);
        assert_eq!(rot * rot * rot, M2F2::identity());
    }

    #[test]
    fn tagged_products() {
        let a = FiniteRingElement::F9(F9(1, 1));
        assert_eq!(a.mul(a), Some(FiniteRingElement::F9(F9(0, 2))));
        assert_eq!(a.mul(FiniteRingElement::F25(F25::one())), None);
    }
}
