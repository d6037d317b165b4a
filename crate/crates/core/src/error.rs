use thiserror::Error;

/// Errors produced by series evaluation, membership criteria and scans.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("Pochhammer pole: parameter {value} is a non-positive integer")]
    Pole { value: f64 },

    #[error("parameter out of domain: {0}")]
    Domain(String),

    #[error("series did not certify after {terms} terms (tail bound {tail_bound:e}, target {target:e})")]
    NonConvergence {
        terms: usize,
        tail_bound: f64,
        target: f64,
    },

    #[error("invalid tolerance {0:e}")]
    InvalidTolerance(f64),

    #[error("class {class} requires the {expected} kernel, got {found}")]
    KernelMismatch {
        class: &'static str,
        expected: &'static str,
        found: &'static str,
    },

    #[error("invalid disk grid: {0}")]
    InvalidGrid(String),

    #[error("every grid point hit a near-zero denominator ({skipped} skipped)")]
    AllPointsSkipped { skipped: usize },

    #[error("no sign change on [{lo}, {hi}]: g(lo) = {g_lo:e}, g(hi) = {g_hi:e}")]
    NoSignChange {
        lo: f64,
        hi: f64,
        g_lo: f64,
        g_hi: f64,
    },

    #[error("unknown {kind} `{name}`")]
    UnknownName { kind: &'static str, name: String },
}

pub type Result<T> = std::result::Result<T, Error>;
