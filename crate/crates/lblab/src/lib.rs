//! Load-balancing laboratory for block-structured domain decompositions.
//!
//! Builds synthetic box decompositions of a 3D domain, generates reproducible
//! per-box work weights, and partitions them across MPI-style ranks with a
//! family of algorithms: greedy knapsack, percentage-tracking SFC,
//! painter's-partition SFC, two-stage SFC+knapsack hybrids, and an exhaustive
//! brute-force oracle for small instances. The [`harness`] module drives
//! statistical sweeps over topologies and weight distributions and writes
//! CSV results.

pub mod balancers;
pub mod error;
pub mod geometry;
pub mod harness;
pub mod metrics;
pub mod oracle;
pub mod weights;

pub use error::Error;

pub type Result<T> = std::result::Result<T, Error>;
