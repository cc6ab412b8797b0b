use thiserror::Error;

/// Errors produced anywhere in the synthesis and verification pipeline.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error("matrix contains a non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },

    #[error("quasiunitarity check needs an even square matrix, got {rows}x{cols}")]
    OddDimension { rows: usize, cols: usize },

    #[error("singular value decomposition did not converge after {sweeps} sweeps")]
    SvdNoConvergence { sweeps: usize },

    #[error("matrix is not unitary: max |U^dagger U - I| = {deviation:e}")]
    NotUnitary { deviation: f64 },

    #[error("{what} = {value} is outside its admissible range {range}")]
    OutOfRange {
        what: &'static str,
        value: f64,
        range: &'static str,
    },

    #[error("mode {mode} out of range for a {n_modes}-mode circuit")]
    ModeOutOfRange { mode: usize, n_modes: usize },

    #[error("element couples mode {0} to itself")]
    RepeatedMode(usize),

    #[error("network is not passive: off-diagonal block entry ({row}, {col}) has magnitude {magnitude:e}")]
    NotPassive { row: usize, col: usize, magnitude: f64 },

    #[error("fock simulation limit exceeded: {0}")]
    FockLimit(String),

    #[error("postselection accepted zero probability mass")]
    ZeroAcceptance,

    #[error("POVM does not resolve the identity: max |T T^dagger - I| = {deviation:e}")]
    InvalidPovm { deviation: f64 },

    #[error("POVM element {index} is not rank one (residual {residual:e})")]
    NotRankOne { index: usize, residual: f64 },

    #[error(
        "synthesis post-check failed: block deviation {block_deviation:e}, \
         quasiunitarity deviation {quasiunitarity_deviation:e}, \
         circuit deviation {circuit_deviation:e}"
    )]
    Verification {
        block_deviation: f64,
        quasiunitarity_deviation: f64,
        circuit_deviation: f64,
    },

    #[error("CZ verification failed: {0}")]
    CzMismatch(String),
}

pub type Result<T> = std::result::Result<T, Error>;
