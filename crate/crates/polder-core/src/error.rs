//! Error types shared by all numerical routines.

/// Errors produced by spectral evaluation, quadrature, summation, and the
/// force formulas.
#[derive(Debug, Clone, thiserror::Error)]
pub enum Error {
    /// An input lies outside the domain of the requested formula.
    #[error("domain error: {0}")]
    Domain(String),

    /// The permittivity landed on the negative real axis, where the square
    /// root branch for an absorbing medium cannot be chosen from causality
    /// alone. Reported instead of guessing.
    #[error("branch ambiguity: permittivity {re:e}{im:+e}i lies on the negative real axis")]
    BranchAmbiguity { re: f64, im: f64 },

    /// Adaptive quadrature could not reach the requested tolerance.
    #[error("quadrature failure: {reason} ({evaluations} evaluations, error estimate {estimate:e})")]
    Quadrature {
        reason: String,
        evaluations: usize,
        estimate: f64,
    },

    /// The Matsubara sum did not converge within the term cap, or the terms
    /// show no decay.
    #[error("matsubara sum failure: {reason} ({terms} terms, tail bound {tail_bound:e})")]
    MatsubaraSum {
        reason: String,
        terms: usize,
        tail_bound: f64,
    },

    /// Degenerate transition frequencies hit a pole of a closed-form limit.
    #[error("resonant pole: {0}")]
    ResonantPole(String),

    /// A formula was evaluated outside its stated validity conditions in a
    /// mode that enforces them.
    #[error("validity violation: {0}")]
    Validity(String),
}

pub type Result<T> = std::result::Result<T, Error>;
