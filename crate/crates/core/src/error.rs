use thiserror::Error;

/// Errors raised by the numerical routines and the command-line front end.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// Angular momentum order above the configured cap.
    #[error("order l = {l} exceeds the cap L_MAX = {cap}")]
    OrderTooLarge { l: usize, cap: usize },

    /// A bracket whose endpoint values do not differ in sign.
    #[error("invalid bracket [{lo}, {hi}]: f(lo) = {f_lo}, f(hi) = {f_hi} do not change sign")]
    InvalidBracket { lo: f64, hi: f64, f_lo: f64, f_hi: f64 },

    #[error("root finder did not converge after {iterations} iterations (last bracket [{lo}, {hi}])")]
    NoConvergence { iterations: usize, lo: f64, hi: f64 },

    /// The sign-change scan for a cross-product root ran out of range.
    #[error("found only {found} of {wanted} roots while scanning k(R - a) over [{from}, {to}]")]
    RootScan { wanted: usize, found: usize, from: f64, to: f64 },

    #[error("grid too coarse: {points} interior points (minimum {min})")]
    GridTooCoarse { points: usize, min: usize },

    /// A wavenumber that does not satisfy the cavity boundary conditions.
    #[error("k = {k} is not an eigenvalue of this cavity (boundary residual {residual:e})")]
    NotEigenmode { k: f64, residual: f64 },

    /// A value overflowed the floating-point range.
    #[error("overflow: {0}")]
    Overflow(String),

    #[error("truncation order needed for tolerance {tolerance:e} at kr = {kr} exceeds L_MAX = {cap}")]
    CapExceeded { kr: f64, tolerance: f64, cap: usize },
}

impl Error {
    /// True for failures of an iterative numerical method, as opposed to bad input.
    pub fn is_numeric(&self) -> bool {
        matches!(
            self,
            Error::NoConvergence { .. }
                | Error::RootScan { .. }
                | Error::Overflow(_)
                | Error::CapExceeded { .. }
                | Error::InvalidBracket { .. }
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
