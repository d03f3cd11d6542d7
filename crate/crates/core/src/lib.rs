//! Minimum-cost rainbow spanning trees and rainbow Hamilton cycles on
//! randomly edge-colored complete graphs.
//!
//! Instances are either points in a square (Euclidean edge costs) or complete
//! graphs with i.i.d. uniform costs; every edge carries a uniformly random
//! color. The crate provides exact solvers and brute-force oracles, the
//! constructive level-set bipartite-matching tree builder, the greedy path
//! system tour builder with reserve completion, color-repeat statistics, and
//! a deterministic Monte Carlo harness writing CSV results.

pub mod baselines;
pub mod colorstats;
pub mod dsu;
pub mod error;
pub mod harness;
pub mod instance;
pub mod rainbow_exact;
pub mod spatial;
pub mod tour_greedy;
pub mod tree_construct;

pub use error::{Error, Result};
