//! Covariance-level oracle for the superposition dirty-paper scheme.
//!
//! The two interferences are written as `S_1 = A + D`, `S_2 = A - D` with
//! independent `A, D ~ N(0, Q/2)`. The common codeword `X_A` (power `P_A`)
//! is dirty-paper coded against `A` with `U_A = X_A + alpha_A A`; the private
//! codeword `X_D` (power `P_D`) against the residual seen by user 1 with
//! `U_D = X_D + alpha_D ((1 - alpha_A) A + D)`. Codebook rates are read off
//! the joint covariance instead of being simulated at the codeword level.

use crate::error::Result;
use crate::gaussian_mi::{gaussian_mi, GaussianCov};

use super::{check_rho, PowerSplit};

/// Coordinates of the joint covariance built by [`dpc_covariance`].
pub mod index {
    pub const X_A: usize = 0;
    pub const X_D: usize = 1;
    pub const A: usize = 2;
    pub const D: usize = 3;
    pub const Z: usize = 4;
    pub const U_A: usize = 5;
    pub const U_D: usize = 6;
    pub const Y1: usize = 7;
}

/// Inflation factors `(alpha_A, alpha_D)`:
/// `alpha_A = P_A/(P + Q/2 + 1)` and `alpha_D = P_D/(P_D + 1)`.
pub fn inflation_factors(split: PowerSplit, q: f64) -> (f64, f64) {
    let alpha_a = split.p_a() / (split.total() + q / 2.0 + 1.0);
    let alpha_d = split.p_d() / (split.p_d() + 1.0);
    (alpha_a, alpha_d)
}

/// Covariance of `(X_A, X_D, A, D, Z, U_A, U_D, Y_1)`, indexed by [`index`].
pub fn dpc_covariance(split: PowerSplit, q: f64) -> Result<GaussianCov> {
    let (alpha_a, alpha_d) = inflation_factors(split, q);
    // Base variables: X_A, X_D, A, D, Z.
    let variances = [split.p_a(), split.p_d(), q / 2.0, q / 2.0, 1.0];
    let unit = |i: usize| {
        let mut row = vec![0.0; 5];
        row[i] = 1.0;
        row
    };
    let loadings = vec![
        unit(0),
        unit(1),
        unit(2),
        unit(3),
        unit(4),
        vec![1.0, 0.0, alpha_a, 0.0, 0.0],
        vec![0.0, 1.0, alpha_d * (1.0 - alpha_a), alpha_d, 0.0],
        vec![1.0, 1.0, 1.0, 1.0, 1.0],
    ];
    GaussianCov::from_loadings(&loadings, &variances)
}

/// `I(A; B)` after dropping constant (zero-variance) coordinates; zero if
/// either block becomes empty.
fn mi_nondegenerate(cov: &GaussianCov, a: &[usize], b: &[usize]) -> Result<f64> {
    let keep = |block: &[usize]| -> Vec<usize> { block.iter().copied().filter(|&i| cov.get(i, i) > 0.0).collect() };
    let (a, b) = (keep(a), keep(b));
    if a.is_empty() || b.is_empty() {
        Ok(0.0)
    } else {
        gaussian_mi(cov, &a, &b)
    }
}

/// Codebook rates `(r_A, r_D)` from the joint covariance:
/// `r_A = I(U_A; Y_1) - I(U_A; A)` and `r_D = I(U_D; Y_1, U_A) - I(U_D; A, D)`.
///
/// They should equal `1/2 log2(1 + P_A/(P_D + Q/2 + 1))` and `1/2 log2(1 + P_D)`.
pub fn dpc_scheme_oracle(split: PowerSplit, q: f64) -> Result<(f64, f64)> {
    use index::*;
    let cov = dpc_covariance(split, q)?;
    let r_a = mi_nondegenerate(&cov, &[U_A], &[Y1])? - mi_nondegenerate(&cov, &[U_A], &[A])?;
    let r_d = mi_nondegenerate(&cov, &[U_D], &[Y1, U_A])? - mi_nondegenerate(&cov, &[U_D], &[A, D])?;
    Ok((r_a, r_d))
}

/// Closed-form codebook rates the oracle is checked against.
pub fn dpc_rates_closed_form(split: PowerSplit, q: f64) -> (f64, f64) {
    let r_a = 0.5 * (1.0 + split.p_a() / (split.p_d() + q / 2.0 + 1.0)).log2();
    let r_d = 0.5 * (1.0 + split.p_d()).log2();
    (r_a, r_d)
}

/// Covariance of `(Z_+, Z_-) = ((Z_1 + Z_2)/sqrt 2, (Z_1 - Z_2)/sqrt 2)` for
/// unit-variance noises with correlation `rho`; it is `diag(1 + rho, 1 - rho)`.
pub fn sum_difference_noise_cov(rho: f64) -> Result<[[f64; 2]; 2]> {
    check_rho(rho)?;
    let sigma = [[1.0, rho], [rho, 1.0]];
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let t = [[h, h], [h, -h]];
    let mut out = [[0.0; 2]; 2];
    for (i, row) in out.iter_mut().enumerate() {
        for (j, cell) in row.iter_mut().enumerate() {
            *cell = (0..2)
                .flat_map(|a| (0..2).map(move |b| (a, b)))
                .map(|(a, b)| t[i][a] * sigma[a][b] * t[j][b])
                .sum();
        }
    }
    Ok(out)
}

/// A jointly Gaussian test channel `X = c S_+ + W` for the sum interference
/// `S_+ ~ N(0, Q)`, with `W ~ N(0, w)` independent, observed through
/// `sqrt 2 X + S_+ + Z_+`, `Z_+ ~ N(0, 1 + rho)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SumTestChannel {
    pub q: f64,
    pub c: f64,
    pub w: f64,
    pub rho: f64,
}

impl SumTestChannel {
    /// Transmit power `c^2 Q + w`.
    pub fn power(&self) -> f64 {
        self.c * self.c * self.q + self.w
    }

    /// `I(S_+; sqrt 2 X + S_+ + Z_+)` via the covariance oracle.
    pub fn information(&self) -> Result<f64> {
        let s2 = std::f64::consts::SQRT_2;
        // Base variables: S_+, W, Z_+; outputs: S_+, observation.
        let cov = GaussianCov::from_loadings(
            &[vec![1.0, 0.0, 0.0], vec![1.0 + s2 * self.c, s2, 1.0]],
            &[self.q, self.w, 1.0 + self.rho],
        )?;
        gaussian_mi(&cov, &[0], &[1])
    }

    /// Rate-distortion floor `[1/2 log2(Q/(2P + 1 + rho))]+` at power `p`.
    pub fn floor(&self, p: f64) -> f64 {
        (0.5 * (self.q / (2.0 * p + 1.0 + self.rho)).log2()).max(0.0)
    }
}
