//! Exact verification toolkit for the quaternion algebra of discriminant 15,
//! its Shimura curve, the ring of 2-adic automorphic forms on the level cover,
//! and the C₂ homotopy fixed-point spectral sequences computing the homotopy
//! of TAF^D and its Atkin–Lehner quotient.

pub mod curve;
pub mod error;
pub mod exactnum;
pub mod forms;
pub mod hilbert;
pub mod hyperbolic;
pub mod linalg;
pub mod quaternion;
pub mod report;
pub mod specseq;

pub use error::{Error, Result};
pub use forms::{AutomorphicPoly, Monomial};

pub use quaternion::{embed, lambda_coordinates, Named, OrderElement, QuatElement, QuatMatrix};
pub use report::{Claim, Report, Status};
