//! Characters σ₂, σ₃, σ₅ : Λ¹ → Z/2 from the reductions of Λ at 2, 3 and 5.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactnum::{F25, F9, M2F2};
use crate::quaternion::{Named, OrderElement};
use crate::report::Report;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Prime {
    P2,
    P3,
    P5,
}

fn residue(n: &BigInt, p: i64) -> i64 {
    n.mod_floor(&BigInt::from(p)).to_i64().expect("small residue")
}

/// Image in M₂(F₂) with ω ↦ [[0,1],[1,1]], y ↦ [[0,1],[1,0]].
pub fn reduce_mod2(g: &OrderElement) -> M2F2 {
    let w = M2F2::new([[0, 1], [1, 1]]);
    let y = M2F2::new([[0, 1], [1, 0]]);
    let e: Vec<i64> = g.e.iter().map(|x| residue(x, 2)).collect();
    M2F2::scalar(e[0]) + M2F2::scalar(e[1]) * w + M2F2::scalar(e[2]) * y + M2F2::scalar(e[3]) * (w * y)
}

/// Image in F₉ = F₃[Y]/(Y²+1) with ω ↦ 1, y ↦ Y.
pub fn reduce_mod3(g: &OrderElement) -> F9 {
    let e: Vec<i64> = g.e.iter().map(|x| residue(x, 3)).collect();
    F9::new(e[0] + e[1], e[2] + e[3])
}

/// Image in F₂₅ = F₅[W]/(W²+W+1) with ω ↦ W, y ↦ 0.
pub fn reduce_mod5(g: &OrderElement) -> F25 {
    let e: Vec<i64> = g.e.iter().map(|x| residue(x, 5)).collect();
    F25::new(e[0], e[1])
}

/// Checks that the three assignments respect ω²+ω+1 = 0, yω = ω²y and y² = 5.
pub fn ring_maps_valid() -> bool {
    let w = M2F2::new([[0, 1], [1, 1]]);
    let y = M2F2::new([[0, 1], [1, 0]]);
    let ok2 = w * w + w + M2F2::identity() == M2F2::zero() && y * w == w * w * y && y * y == M2F2::scalar(5);
    let (w3, y3) = (F9::one(), F9::new(0, 1));
    let ok3 = w3 * w3 + w3 + F9::one() == F9::new(0, 0) && y3 * w3 == w3 * w3 * y3 && y3 * y3 == F9::new(5, 0);
    let w5 = F25::new(0, 1);
    let ok5 = w5 * w5 + w5 + F25::one() == F25::new(0, 0);
    ok2 && ok3 && ok5
}

pub fn sigma_character(g: &OrderElement, p: Prime) -> Result<u8> {
    if !g.reduced_norm().is_one() {
        return Err(Error::InvalidArgument(format!("norm {} ≠ 1", g.reduced_norm())));
    }
    match p {
        Prime::P2 => {
            reduce_mod2(g).permutation_parity().ok_or_else(|| Error::Undefined("image not invertible mod 2".into()))
        }
        Prime::P3 => {
            let z = reduce_mod3(g);
            if z.pow(4) != F9::one() {
                return Err(Error::Undefined(format!("mod-3 image {z:?} is not of norm one")));
            }
            Ok(u8::from(z.pow(2) != F9::one()))
        }
        Prime::P5 => {
            let z = reduce_mod5(g);
            if z.pow(6) != F25::one() {
                return Err(Error::Undefined(format!("mod-5 image {z:?} is not of norm one")));
            }
            Ok(u8::from(z.pow(3) != F25::one()))
        }
    }
}

pub fn sigma_triple(g: &OrderElement) -> Result<[u8; 3]> {
    Ok([sigma_character(g, Prime::P2)?, sigma_character(g, Prime::P3)?, sigma_character(g, Prime::P5)?])
}

#[derive(Clone, Debug, Serialize)]
pub struct CharacterRow {
    pub element: &'static str,
    pub sigma: [u8; 3],
    pub expected: [u8; 3],
}

pub const TABLE: [(Named, [u8; 3]); 3] =
    [(Named::H, [1, 0, 1]), (Named::Gamma, [0, 1, 1]), (Named::MinusOne, [0, 0, 1])];

pub fn character_rows() -> Result<Vec<CharacterRow>> {
    TABLE
        .iter()
        .map(|&(n, expected)| Ok(CharacterRow { element: n.name(), sigma: sigma_triple(&n.order())?, expected }))
        .collect()
}

/// Norm-one generators used for randomized homomorphism checks: ω, h, γ, w̃₅²/5.
pub fn norm_one_generators() -> Vec<OrderElement> {
    let w5sq = Named::W5.order().pow(2);
    let fifth = OrderElement { e: w5sq.e.map(|x| x / 5) };
    vec![Named::Omega.order(), Named::H.order(), Named::Gamma.order(), fifth]
}

pub fn verify_characters(random_words: usize, seed: u64) -> Report {
    let mut rep = Report::new();
    let a = "level-characters";
    rep.check("ring-maps", a, ring_maps_valid(), "reductions at 2, 3, 5 are ring maps");
    match character_rows() {
        Ok(rows) => {
            for row in rows {
                rep.check(
                    &format!("table-{}", row.element),
                    a,
                    row.sigma == row.expected,
                    format!("(σ₂,σ₃,σ₅) = {:?}, expected {:?}", row.sigma, row.expected),
                );
            }
        }
        Err(e) => rep.check("table", a, false, e.to_string()),
    }
    let minus = sigma_triple(&Named::MinusOne.order()).unwrap_or([9; 3]);
    rep.check(
        "a1-character",
        a,
        (minus[1] + minus[2]) % 2 == 1,
        "σ₃σ₅(−1) is nontrivial, so −1 negates weight-1 forms",
    );

    let gens = norm_one_generators();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut failures = 0;
    for _ in 0..random_words {
        let mut word = || {
            let len = rng.gen_range(1..=6);
            (0..len).fold(OrderElement::new(1, 0, 0, 0), |acc, _| &acc * &gens[rng.gen_range(0..gens.len())])
        };
        let g = word();
        let h = word();
        let ok = match (sigma_triple(&g), sigma_triple(&h), sigma_triple(&(&g * &h))) {
            (Ok(a), Ok(b), Ok(c)) => (0..3).all(|k| (a[k] + b[k]) % 2 == c[k]),
            _ => false,
        };
        failures += usize::from(!ok);
    }
    rep.check(
        "homomorphism",
        a,
        failures == 0,
        format!("σ(gh) = σ(g)+σ(h) on {random_words} random pairs, {failures} failures"),
    );
    rep
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn table_three() {
        assert_eq!(sigma_triple(&Named::H.order()).unwrap(), [1, 0, 1]);
        assert_eq!(sigma_triple(&Named::Gamma.order()).unwrap(), [0, 1, 1]);
        assert_eq!(sigma_triple(&Named::MinusOne.order()).unwrap(), [0, 0, 1]);
        assert!(sigma_character(&Named::W5.order(), Prime::P2).is_err());
    }

    #[test]
    fn report() {
        let r = verify_characters(100, 7);
        assert!(r.passed(), "{r}");
    }
}
