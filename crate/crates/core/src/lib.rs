//! k-strong Roman domination (k-SRD).
//!
//! A labeling `f: V -> {0, .., min(Δ, k) + 1}` is a k-SRD function when every
//! set of `k` simultaneously attacked nodes can be defended: attacked nodes
//! with a positive label defend themselves, and every attacked node labeled 0
//! is assigned a distinct neighbor `u` with `f(u) >= 2`, where `u` lends at
//! most `f(u) - 1` armies.
//!
//! The crate provides a greedy constructor, a variable neighborhood search
//! that verifies feasibility against sampled attack sets, and brute-force
//! oracles for small graphs.

pub mod attacks;
pub mod defense;
mod error;
pub mod graph;
pub mod greedy;
pub mod instances;
pub mod oracle;
pub mod rng;
pub mod solution;
pub mod vns;

pub use attacks::{binomial, generate_attacks, k_combinations, Attack, AttackSets};
pub use defense::{
    alternatives_for, defend_exact, deterministic_defense, is_attack_defended, quasi_infeasibility,
    roulette_defense, CoverageInfo, DefenseOutcome,
};
pub use error::{Error, Result};
pub use graph::{Graph, Node};
pub use greedy::greedy;
pub use oracle::{brute_force_optimum, exact_feasible, exact_non_defended, OracleBudget};
pub use solution::{label_cap, Solution};
pub use vns::{vns_solve, FeasibilityMode, Fitness, RunReport, SolverConfig};
