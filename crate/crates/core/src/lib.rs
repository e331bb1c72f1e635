//! Exact finite-n magnetization law of the Curie-Weiss model.
//!
//! * [`special`] scalar kernels (log-factorial, Stirling brackets, incomplete
//!   gamma, quartic tail integrals, normal CDF, log-sum-exp).
//! * [`model`] the weighted-binomial law of `S_n`, fixed points, exact tails.
//! * [`asymptotics`] the quartic limit law `F`, the correction `G`, the
//!   partial sums `A_n`, `A_hat_n`, `B_n`, `B_{n,x}`.
//! * [`verification`] executable checks of the moderate-deviation statements.
//! * [`sampling`] exact and Glauber samplers.
//! * [`cli`] the command-line surface.

// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod asymptotics;
pub mod cli;
pub mod error;
pub mod model;
pub mod quadrature;
pub mod sampling;
pub mod special;
pub mod verification;

pub use error::{Error, Result};
