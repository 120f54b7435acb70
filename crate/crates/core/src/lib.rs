//! Symmetric two-body Bell inequalities for `N` parties.
//!
//! The crate is split along the lines of the problem:
//!
//! * [`model`] holds the shared types ([`StrategyCounts`], [`SymmetricVector`],
//!   [`BellInequality`]) and the exact map from strategy counts to
//!   symmetrized correlators.
//! * [`polytope`] enumerates the vertices of the symmetric two-body local
//!   polytope and computes its facets with an exact double-description hull.
//! * [`inequalities`] computes exact classical bounds and generates the two
//!   analytic inequality families (the three-parameter class and the Dicke
//!   class).
//! * [`quantum`] builds Bell operators in the Dicke basis, minimises them over
//!   the measurement angle, and hosts the Dicke-state and LMG results.
//!
//! Everything on the polytope side is exact integer or rational arithmetic;
//! floating point only appears in [`quantum`].

pub mod cli;
pub mod error;
pub mod inequalities;
pub mod json;
pub mod model;
pub mod polytope;
pub mod quantum;

pub use error::{Error, Result};
pub use model::{BellInequality, Coefficients, StrategyCounts, SymmetricVector};

/// Version string stamped into run manifests and JSON payloads.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Schema tag carried by every top-level JSON document.
pub const SCHEMA: &str = "symbell/1";
