//! Non-rainbow reference solvers and limiting constants.

mod constants;
mod mst;
mod tsp;
pub mod two_opt;

pub use constants::{wastlund_constant, wastlund_y, zeta3, WastlundEstimate};
pub use mst::{kruskal_mst, SpanningTree};
pub use tsp::{cycle_cost, nearest_neighbor_tour, tsp_exact, tsp_heuristic, Tour, TSP_EXACT_MAX_N};
pub use two_opt::{TwoOptBudget, TwoOptReport};
