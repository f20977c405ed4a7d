use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};

use super::rational::{int, Rational};

/// Sparse polynomial in `nvars` commuting variables with rational coefficients.
#[derive(Clone, PartialEq, Eq)]
pub struct MultiPoly {
    nvars: usize,
    terms: BTreeMap<Vec<u32>, Rational>,
}

impl MultiPoly {
    pub fn zero(nvars: usize) -> Self {
        Self { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: Rational) -> Self {
        let mut p = Self::zero(nvars);
        p.add_term(vec![0; nvars], c);
        p
    }

    pub fn var(nvars: usize, k: usize) -> Self {
        let mut e = vec![0; nvars];
        e[k] = 1;
        let mut p = Self::zero(nvars);
        p.add_term(e, int(1));
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn add_term(&mut self, exps: Vec<u32>, c: Rational) {
        assert_eq!(exps.len(), self.nvars);
        let slot = self.terms.entry(exps).or_insert_with(Rational::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.retain(|_, v| !v.is_zero());
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &Rational)> {
        self.terms.iter()
    }

    pub fn coeff(&self, exps: &[u32]) -> Rational {
        self.terms.get(exps).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        let mut p = Self::zero(self.nvars);
        for (e, v) in &self.terms {
            p.add_term(e.clone(), v * c);
        }
        p
    }

    pub fn pow(&self, e: u32) -> Self {
        (0..e).fold(Self::constant(self.nvars, int(1)), |acc, _| &acc * self)
    }

    /// Formal partial derivative in variable `k`.
    pub fn derivative(&self, k: usize) -> Self {
        let mut p = Self::zero(self.nvars);
        for (e, v) in &self.terms {
            if e[k] == 0 {
                continue;
            }
            let mut f = e.clone();
            f[k] -= 1;
            p.add_term(f, v * int(e[k] as i64));
        }
        p
    }

    /// Replace variable `k` by the rational value `x`.
    pub fn eval_var(&self, k: usize, x: &Rational) -> Self {
        let mut p = Self::zero(self.nvars);
        for (e, v) in &self.terms {
            let mut f = e.clone();
            f[k] = 0;
            let mut c = v.clone();
            for _ in 0..e[k] {
                c *= x;
            }
            p.add_term(f, c);
        }
        p
    }

    /// Swap two variables.
    pub fn swap_vars(&self, a: usize, b: usize) -> Self {
        let mut p = Self::zero(self.nvars);
        for (e, v) in &self.terms {
            let mut f = e.clone();
            f.swap(a, b);
            p.add_term(f, v.clone());
        }
        p
    }

    pub fn display_with(&self, names: &[&str]) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let mut out = String::new();
        for (n, (e, c)) in self.terms.iter().rev().enumerate() {
            let mono: Vec<String> = e
                .iter()
                .zip(names)
                .filter(|(x, _)| **x > 0)
                .map(|(x, name)| if *x == 1 { name.to_string() } else { format!("{name}^{x}") })
                .collect();
            let sign = if c.is_negative() { "-" } else { "+" };
            if n > 0 || c.is_negative() {
                out.push_str(if n > 0 { " " } else { "" });
                out.push_str(sign);
                if n > 0 {
                    out.push(' ');
                }
            }
            let a = c.abs();
            if mono.is_empty() {
                out.push_str(&a.to_string());
            } else if a.is_one() {
                out.push_str(&mono.join("*"));
            } else {
                out.push_str(&format!("{a}*{}", mono.join("*")));
            }
        }
        out
    }
}

impl fmt::Debug for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = (0..self.nvars).map(|k| format!("x{k}")).collect();
        let refs: Vec<&str> = names.iter().map(String::as_str).collect();
        write!(f, "{}", self.display_with(&refs))
    }
}

impl Add for &MultiPoly {
    type Output = MultiPoly;
    fn add(self, o: &MultiPoly) -> MultiPoly {
        let mut p = self.clone();
        for (e, v) in &o.terms {
            p.add_term(e.clone(), v.clone());
        }
        p
    }
}

impl Sub for &MultiPoly {
    type Output = MultiPoly;
    fn sub(self, o: &MultiPoly) -> MultiPoly {
        self + &(-o)
    }
}

impl Neg for &MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        self.scale(&int(-1))
    }
}

impl Mul for &MultiPoly {
    type Output = MultiPoly;
    fn mul(self, o: &MultiPoly) -> MultiPoly {
        let mut p = MultiPoly::zero(self.nvars);
        for (e1, v1) in &self.terms {
            for (e2, v2) in &o.terms {
                let e: Vec<u32> = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                p.add_term(e, v1 * v2);
            }
        }
        p
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::rat;

    #[test]
    fn product_rule_on_defining_form() {
        let u = MultiPoly::var(2, 0);
        let v = MultiPoly::var(2, 1);
        let one = MultiPoly::constant(2, int(1));
        let qu = &(&(&u * &u) + &u) + &one;
        let qv = &(&(&v * &v) + &v) + &one;
        let f = &(&qu * &qv) - &MultiPoly::constant(2, rat(5, 9));
        let two_u_1 = &u.scale(&int(2)) + &one;
        assert_eq!(f.derivative(0), &two_u_1 * &qv);
        assert_eq!(f.swap_vars(0, 1), f);
        assert_eq!(f.eval_var(0, &int(0)).coeff(&[0, 2]), int(1));
    }
}
