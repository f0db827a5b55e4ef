//! Coding multiplicities and Hausdorff dimensions for one-dimensional
//! self-similar sets whose neighbouring pieces overlap in a controlled way.
//!
//! * [`exact`]: rationals, intervals and similitudes.
//! * [`ifs`]: ordered systems, membership checks and overlap structure.
//! * [`coding`]: residual graphs, coding-cardinality classification, witnesses.
//! * [`dimension`]: partition, graph-directed system and spectral dimension.
//! * [`theorems`]: end-to-end harnesses that exercise the coding-count
//!   dichotomies on a concrete system.

pub mod coding;
pub mod digraph;
pub mod dimension;
pub mod exact;
pub mod fixtures;
pub mod ifs;
pub mod spectral;
pub mod theorems;

pub use exact::{AffineMap, Interval, Rational};
pub use ifs::Ifs;
