//! Exact solving and strategy verification for Hyperopic Cops and Robber.
//!
//! In this variant of Cops and Robber the robber is invisible exactly when it
//! stands in the open neighbourhood of every cop. The crate computes the
//! hyperopic cop number, the classic cop number and the small common
//! neighbourhood parameter on small graphs, runs constructive cop strategies
//! against an exhaustive adversary, and audits known inequalities.

pub mod bounds;
pub mod game;
pub mod graph;
pub mod scn;
pub mod solver;
pub mod strategies;
