//! Closed-form solutions: hypergeometric terms for recurrences and rational
//! functions for differential equations. Every returned solution has been
//! checked by exact substitution.

pub mod hyper;
pub mod rational;
pub mod verify;

pub use hyper::{hyper_solutions, hyper_solutions_with, HypergeometricCertificate};
pub use rational::{rational_ode_solutions, rational_ode_solutions_with, RationalSolution};
pub use verify::{verify_certificate, Candidate, Certificate};

/// Search bounds of the solvers.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SolverConfig {
    /// Largest degree of the candidate factors `a(n)`, `b(n)`.
    pub max_factor_degree: usize,
    /// Largest pole order tried at each root of the leading coefficient.
    pub max_pole_order: usize,
    /// Largest numerator degree tried for rational solutions.
    pub max_numerator_degree: usize,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            max_factor_degree: 3,
            max_pole_order: 6,
            max_numerator_degree: 12,
        }
    }
}

/// Solutions found, plus a note for every search bound that cut off part of
/// the search space.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SolveReport<T> {
    pub solutions: Vec<T>,
    pub bounds_hit: Vec<String>,
}
