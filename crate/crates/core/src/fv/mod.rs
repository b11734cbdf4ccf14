//! Finite-volume cross-check solver, stationary profiles and the
//! solution comparison harness.

pub mod compare;
pub mod solver;
pub mod steady;

pub use compare::{compare_solutions, Discrepancy, SampledSolution};
pub use solver::{fv_run, fv_step, ConservativeCells, FvBoundaries, FvBoundary, FvConfig, FvGrid, FvLevel, FvSolution, FvStep};
pub use steady::{steady_profile, SteadyPoint, SteadyProfile};

#[cfg(test)]
mod tests;
