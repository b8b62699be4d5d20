//! Log-magnitude asymptotics of autoregressive and Ornstein-Uhlenbeck
//! processes: high-precision evaluation of the limiting constants, the
//! residual distribution of explosive recurrences, and seeded Monte Carlo
//! simulation with statistical verification of every analytic value.

pub mod analysis;
pub mod asymptotics;
pub mod bigfloat;
pub mod error;
pub mod residual;
pub mod sim;

pub use bigfloat::{BigFloat, NamedConstant};
pub use error::{Error, Result};
