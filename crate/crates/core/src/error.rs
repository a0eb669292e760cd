use thiserror::Error;

/// Errors raised by the library.
///
/// Indices in messages are 1-based, matching the usual notation
/// `e_1..e_n`, `ẽ_1..ẽ_ν`.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum GonosomalError {
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("basis change is singular (|det| = {det:e})")]
    SingularBasisChange { det: f64 },

    #[error("basis change column {column} of {matrix} sums to {sum}, expected 1")]
    InvalidBasisChange {
        matrix: &'static str,
        column: usize,
        sum: f64,
    },

    #[error("state at step {step} lies in O (all female or all male coordinates are zero)")]
    AbsorbedToO { step: usize },

    #[error("algebra is not stochastic: {0}")]
    NotStochastic(String),

    #[error("algebra is not gonosomal: {0}")]
    NotGonosomal(String),

    #[error("state is not in the simplex: {0}")]
    NotInSimplex(String),

    #[error("linear map is singular")]
    SingularMap,

    #[error("degenerate parameter: {0}")]
    DegenerateParameter(String),

    #[error("no closed form covers this case: {0}")]
    UncoveredCase(String),

    #[error("half the fixed point is not idempotent (defect {defect:e})")]
    NotIdempotent { defect: f64 },

    #[error("fixed point is not normalizable: {0}")]
    NotNormalizable(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("male coordinate vanished at step {t}")]
    MaleExtinction { t: usize },

    #[error("x2 vanished at step {t}, which no zero pattern of the E-set lemma allows")]
    InconsistentZero { t: usize },

    #[error("eigenvalues have equal modulus ({modulus}); the limit selection rule does not apply")]
    EqualModulusEigenvalues { modulus: f64 },

    #[error("denominator of u(lambda) vanishes")]
    DegenerateDenominator,

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, GonosomalError>;
