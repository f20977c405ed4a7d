//! Exact arithmetic substrate: rationals, the tower field Q(i, √3, √5),
//! quadratic fields Q(√d), certified real signs and numeric enclosures,
//! small finite rings, and sparse multivariate polynomials.

mod finite;
mod interval;
mod poly;
mod quadratic;
mod rational;
mod tower;

pub use finite::{FiniteRingElement, F25, F9, M2F2};
pub use interval::{certified_sign, numeric_eval, ComplexEnclosure, Interval};
pub use poly::MultiPoly;
pub use quadratic::QuadraticElement;
pub use rational::{int, is_two_integral, rat, rat_inv, two_valuation, Rational};
pub(crate) use rational::{prime_support, supported_on};
pub use tower::{TowerBasis, TowerElement};
