//! Capacity bounds for multicasting with transmitter-known additive
//! interference.
//!
//! Two channel families are covered: binary, `Y_k = X xor S_k`, and
//! Gaussian, `Y_k = X + S_k + Z_k`. For each the crate evaluates the
//! capacity bounds in closed form, reproduces them with independent numeric
//! oracles (exact discrete mutual information, jointly Gaussian log
//! determinants, derivative-free optimizers) and, for the binary scheme,
//! simulates encoding and maximum-likelihood decoding.
//!
//! All rates are in bits per channel use.

pub mod binary;
pub mod correlated;
pub mod entropy;
pub mod error;
pub mod figures;
pub mod gaussian;
pub mod gaussian_mi;
pub mod optimize;
pub mod rate;
pub mod rng;
pub mod units;
pub mod verify;

pub use entropy::{binary_entropy, pmf_entropy, xor_convolve, JointPmf};
pub use error::{Error, Result};
pub use gaussian_mi::{gaussian_mi, GaussianCov};
pub use optimize::{minimize_scalar, Minimum, ScalarInterval};
pub use rate::{BoundKind, RateBound};
pub use units::{db_to_linear, linear_to_db};
