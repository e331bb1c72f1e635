use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// The requested object is too large to build.
    #[error("capacity error: {0}")]
    Capacity(String),

    /// An iterative kernel ran out of iterations before converging.
    #[error("numerical failure in {routine}: no convergence after {iterations} iterations (s = {s}, z = {z})")]
    NoConvergence {
        routine: &'static str,
        iterations: usize,
        s: f64,
        z: f64,
    },

    /// `x` is outside `[0, max]`, the range where the critical-case envelope is stated.
    #[error("x = {x} is outside the theorem range [0, {max}]")]
    OutOfRange { x: f64, max: f64 },
}
