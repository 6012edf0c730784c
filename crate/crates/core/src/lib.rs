//! Exact Fock-space model of parabose fields of order `p` and their
//! decomposition into unitary lowest-weight modules.

pub mod cli;
pub mod decompose;
pub mod error;
pub mod fock;
pub mod generators;
pub mod half;
pub mod linalg;
pub mod scalar;
pub mod verify;

pub use error::{Error, Result};
pub use fock::{
    enumerate_level, inner_product, BasisKet, GaugeWeight, ModelParams, OrbitalMonomial, OspWeight, Sign, SpinState,
    State, DEFAULT_CAPACITY,
};
pub use generators::{CompiledOp, EvenKind, EvenOpLabel, GaugeRootLabel, ModeLabel, Operator, SpinChoice};
pub use half::Half;
pub use scalar::{Rational, Scalar};
