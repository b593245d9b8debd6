//! Cyclic sums with maximal forward averages in the denominators.
//!
//! - [`periodic`]: periodic tuples, interval averages, the right maximal function.
//! - [`structure`]: M-intervals, the full maximal interval, the inclusion poset.
//! - [`sums`]: `S_n(x, r)`, Diananda sums, `S^max(x)`, subset-system sums.
//! - [`reduced`]: the non-cyclic simplex problems and their minimization.
//! - [`oracle`]: grid searches and exact finite differences used as checks.
//! - [`asymptotics`]: sweeps over `n` and the fit for the additive constant.
//! - [`verify`]: randomized property suites.

pub mod asymptotics;
pub mod error;
pub mod io;
pub mod oracle;
pub mod periodic;
pub mod reduced;
pub mod scalar;
pub mod structure;
pub mod sums;
pub mod table;
pub mod verify;

pub use error::{Error, Result};
pub use num_rational::BigRational;
pub use periodic::{IndexInterval, PeriodicTuple};
pub use reduced::{OptimizerConfig, ReducedSolution, SimplexVector};
pub use scalar::Scalar;
pub use structure::{IntervalPoset, MIntervalRecord};
pub use sums::{RadiusTuple, SubsetCollectionSystem};
