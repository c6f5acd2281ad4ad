//! Two users with correlated Gaussian interferences, `Y_i = X + S_i + Z`,
//! where only the variance `Q_d` of `S_1 - S_2` enters the loss.
//!
//! The scaled model `S_i = beta_i S_0` (robust dirty paper coding with an
//! unknown gain) is a special case with `Q_i = beta_i^2 Q_0` and
//! `Q_d = (beta_1 - beta_2)^2 Q_0`.

use crate::error::{check_nonnegative, Error, Result};
use crate::gaussian::{aligned_power, PowerSplit};
use crate::optimize::{maximize_on_simplex, SimplexMaximum};
use crate::rate::RateBound;

const FEASIBILITY_SLACK: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CorrelatedSpec {
    p: f64,
    q1: f64,
    q2: f64,
    qd: f64,
    beta: Option<BetaParams>,
    common_randomness: bool,
}

/// `(beta_1, beta_2, Q_0)` of the scaled-interference model.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BetaParams {
    pub beta1: f64,
    pub beta2: f64,
    pub q0: f64,
}

impl BetaParams {
    /// `beta_A = (beta_1 + beta_2)/2`, the gain of the common part.
    pub fn beta_a(&self) -> f64 {
        0.5 * (self.beta1 + self.beta2)
    }

    /// `beta_D = (beta_1 - beta_2)/2`, the gain of the differential part.
    pub fn beta_d(&self) -> f64 {
        0.5 * (self.beta1 - self.beta2)
    }
}

impl CorrelatedSpec {
    /// Validates `(Q_1, Q_2, Q_d)` as the variances of a jointly Gaussian
    /// pair and its difference: `(sqrt Q1 - sqrt Q2)^2 <= Q_d <= (sqrt Q1 + sqrt Q2)^2`.
    pub fn new(p: f64, q1: f64, q2: f64, qd: f64) -> Result<Self> {
        let p = check_nonnegative("P", p)?;
        let q1 = check_nonnegative("Q1", q1)?;
        let q2 = check_nonnegative("Q2", q2)?;
        let qd = check_nonnegative("Qd", qd)?;
        let hi = (q1.sqrt() + q2.sqrt()).powi(2);
        let lo = (q1.sqrt() - q2.sqrt()).powi(2);
        let slack = FEASIBILITY_SLACK * hi.max(1.0);
        if qd > hi + slack || qd < lo - slack {
            return Err(Error::InvalidSpec(format!(
                "Qd = {qd} is not the variance of S1 - S2 for any correlation; need {lo} <= Qd <= {hi}"
            )));
        }
        Ok(Self {
            p,
            q1,
            q2,
            qd,
            beta: None,
            common_randomness: true,
        })
    }

    /// Equal interference powers `Q_1 = Q_2 = q`.
    pub fn symmetric(p: f64, q: f64, qd: f64) -> Result<Self> {
        Self::new(p, q, q, qd)
    }

    /// Scaled model `S_i = beta_i S_0` with `S_0 ~ N(0, Q_0)`.
    pub fn from_beta(p: f64, beta1: f64, beta2: f64, q0: f64) -> Result<Self> {
        if !(beta1.is_finite() && beta2.is_finite()) {
            return Err(Error::InvalidSpec("beta gains must be finite".into()));
        }
        let q0 = check_nonnegative("Q0", q0)?;
        let mut spec = Self::new(
            p,
            beta1 * beta1 * q0,
            beta2 * beta2 * q0,
            (beta1 - beta2).powi(2) * q0,
        )?;
        spec.beta = Some(BetaParams { beta1, beta2, q0 });
        Ok(spec)
    }

    /// Records whether encoder and decoders share a dither. The lower bound
    /// assumes they do; this flag only documents the assumption.
    pub fn with_common_randomness(mut self, shared: bool) -> Self {
        self.common_randomness = shared;
        self
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn q1(&self) -> f64 {
        self.q1
    }

    pub fn q2(&self) -> f64 {
        self.q2
    }

    pub fn qd(&self) -> f64 {
        self.qd
    }

    pub fn beta(&self) -> Option<BetaParams> {
        self.beta
    }

    pub fn common_randomness(&self) -> bool {
        self.common_randomness
    }
}

/// Interference-difference loss `T(Q_d)`: `1/4 log2 Q_d` for `Q_d > 4`,
/// `1/2 log2(1 + Q_d/4)` otherwise.
pub fn t_of_qd(qd: f64) -> Result<f64> {
    let qd = check_nonnegative("Qd", qd)?;
    Ok(t_raw(qd))
}

fn t_raw(qd: f64) -> f64 {
    if qd > 4.0 {
        0.25 * qd.log2()
    } else {
        0.5 * (qd / 4.0).ln_1p() / std::f64::consts::LN_2
    }
}

/// `sum_i 1/4 log2(P + Q_i + 1 + 2 sqrt(P Q_i)) - T(Q_d)`.
pub fn upper_correlated(spec: &CorrelatedSpec) -> RateBound {
    let value = 0.25 * aligned_power(spec.p, spec.q1).log2() + 0.25 * aligned_power(spec.p, spec.q2).log2()
        - t_raw(spec.qd);
    RateBound::upper(value, "correlated-interference converse")
}

/// `1/2 log2(1 + P_A/(1 + Q_d/4 + P_D)) + 1/4 log2(1 + P_D)`.
pub fn rate_beta_split(split: PowerSplit, qd: f64) -> f64 {
    rate_beta_raw(split.p_a(), split.p_d(), qd)
}

fn rate_beta_raw(p_a: f64, p_d: f64, qd: f64) -> f64 {
    (0.5 * (p_a / (1.0 + qd / 4.0 + p_d)).ln_1p() + 0.25 * p_d.ln_1p()) / std::f64::consts::LN_2
}

/// Dithered superposition lower bound, optimized over the power split:
/// `1/2 log2(1 + P/(1 + Q_d/4))` for `Q_d < 4`,
/// `1/2 log2((P + 1 + Q_d/4)/sqrt Q_d)` for `4 <= Q_d < 4(P+1)`,
/// `1/4 log2(1 + P)` beyond.
pub fn lower_beta(p: f64, qd: f64) -> Result<RateBound> {
    let p = check_nonnegative("P", p)?;
    let qd = check_nonnegative("Qd", qd)?;
    let value = if qd < 4.0 {
        0.5 * (p / (1.0 + qd / 4.0)).ln_1p() / std::f64::consts::LN_2
    } else if qd < 4.0 * (p + 1.0) {
        0.5 * ((p + 1.0 + qd / 4.0) / qd.sqrt()).log2()
    } else {
        0.25 * p.ln_1p() / std::f64::consts::LN_2
    };
    Ok(RateBound::lower(value, "dithered superposition DPC"))
}

/// [`lower_beta`] at the spec's `(P, Q_d)`; requires common randomness.
pub fn lower_beta_for(spec: &CorrelatedSpec) -> Result<RateBound> {
    if !spec.common_randomness {
        return Err(Error::InvalidSpec(
            "the dithered lower bound assumes common randomness at encoder and decoders".into(),
        ));
    }
    lower_beta(spec.p, spec.qd)
}

/// Numeric maximization of [`rate_beta_split`] over the power simplex.
pub fn lower_beta_numeric(p: f64, qd: f64) -> SimplexMaximum {
    maximize_on_simplex(p, |p_a, p_d| rate_beta_raw(p_a, p_d, qd))
}

/// `upper_correlated - lower_beta` at the spec's operating point.
pub fn high_sinr_gap_beta(spec: &CorrelatedSpec) -> Result<f64> {
    if spec.p <= 0.0 {
        return Err(Error::Domain {
            what: "P",
            value: spec.p,
            domain: "(0, inf)",
        });
    }
    Ok(upper_correlated(spec).value() - lower_beta(spec.p, spec.qd)?.value())
}
