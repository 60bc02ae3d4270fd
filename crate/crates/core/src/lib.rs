//! Exact workbench for convexity and sum-product growth inequalities.
//!
//! Sets are finite collections of exact rationals. On top of the set
//! operations the crate computes representation functions and additive
//! energies, counts incidences between grid points and translates of a
//! convex graph, replays the inequality chains behind the growth bounds
//! `|f(A)+C|^6 |A-A|^5 >> |A|^14 / log^2 |A|` and friends, and searches for
//! sets that make the normalized growth objectives small.
//!
//! Irrational quantities (the 3/2-moment energy, fractional powers) are
//! compared exactly: interval arithmetic on a precision ladder, with an
//! algebraic fallback over sums of square roots.

pub mod audit;
pub mod cli;
pub mod compare;
pub mod energy;
pub mod error;
pub mod exec;
pub mod family;
pub mod fixtures;
pub mod incidence;
pub mod interval;
pub mod radical;
pub mod scalar;
pub mod search;
pub mod set;

mod scaled;

pub use error::{Error, Result};
pub use exec::Exec;
pub use scalar::Scalar;
pub use set::{ConvexFn, NumberSet};
