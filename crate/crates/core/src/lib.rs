//! Solver toolkit for the two-vehicle rich VRP (2VRP).
//!
//! The crate models customers as directed-traversable segments, solves small
//! instances exactly with a subset dynamic program over both vehicles, and
//! scales to larger instances with a sliding-subsets aggregation heuristic
//! driven by a seeded multistart loop. A two-period balanced TSP front end
//! and a file/benchmark harness round out the toolkit.

pub mod aggregate;
pub mod cli;
pub mod dp;
pub mod harness;
pub mod model;
pub mod oracle;
pub mod sliding;
pub mod tour;
pub mod two_period;

#[cfg(test)]
pub(crate) mod testfix;
