//! Exact computation of polynomial-identity invariants of finite-dimensional
//! Lie algebra representations given by rational matrices.

pub mod bundled;
pub mod cache;
pub mod envelope;
pub mod error;
pub mod exactalg;
pub mod exponent;
pub mod growth;
pub mod liestruct;
pub mod multilin;
pub mod pipeline;
pub mod repspec;
pub mod symcomb;

pub use envelope::{Envelope, FactorKind};
pub use error::{Error, Result};
pub use exactalg::{Rat, RatMatrix, Subspace};
pub use liestruct::{LeviData, LinearRep, WmSplit};
pub use pipeline::{Structure, StructureReport};
pub use repspec::RepSpec;
