//! Two-user and K-user Gaussian multicast, `Y_k = X + S_k + Z_k` with
//! `E X^2 <= P`, i.i.d. `S_k ~ N(0, Q)` known at the transmitter and unit
//! noise whose cross-user correlation `rho` is free for the converse.

pub mod dpc;
pub mod gap;

use crate::error::{check_nonnegative, Error, Result};
use crate::optimize::{maximize_on_simplex, minimize_scalar, Minimum, ScalarInterval, SimplexMaximum};
use crate::rate::RateBound;
use crate::units::db_to_linear;

/// One operating point: SNR `P`, INR `Q`, `K` users, optional fixed `rho`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussianChannelSpec {
    p: f64,
    q: f64,
    users: usize,
    rho: Option<f64>,
}

impl GaussianChannelSpec {
    /// Two users, linear SNR and INR.
    pub fn new(p: f64, q: f64) -> Result<Self> {
        Ok(Self {
            p: check_nonnegative("P", p)?,
            q: check_nonnegative("Q", q)?,
            users: 2,
            rho: None,
        })
    }

    pub fn from_db(p_db: f64, q_db: f64) -> Result<Self> {
        Self::new(db_to_linear(p_db), db_to_linear(q_db))
    }

    pub fn with_users(mut self, users: usize) -> Result<Self> {
        if users < 2 {
            return Err(Error::UnsupportedUsers {
                op: "Gaussian multicast",
                k: users,
            });
        }
        self.users = users;
        Ok(self)
    }

    pub fn with_rho(mut self, rho: f64) -> Result<Self> {
        self.rho = Some(check_rho(rho)?);
        Ok(self)
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn q(&self) -> f64 {
        self.q
    }

    pub fn users(&self) -> usize {
        self.users
    }

    pub fn rho(&self) -> Option<f64> {
        self.rho
    }
}

/// Power allocation `(P_A, P_D)` between the dirty-paper-coded common
/// stream and the time-shared private stream.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerSplit {
    p_a: f64,
    p_d: f64,
}

impl PowerSplit {
    pub fn new(p_a: f64, p_d: f64) -> Result<Self> {
        Ok(Self {
            p_a: check_nonnegative("P_A", p_a)?,
            p_d: check_nonnegative("P_D", p_d)?,
        })
    }

    /// Checks `P_A + P_D <= P` (with relative slack `1e-12`).
    pub fn within(self, p: f64) -> Result<Self> {
        if self.total() <= p * (1.0 + 1e-12) {
            Ok(self)
        } else {
            Err(Error::Domain {
                what: "P_A + P_D",
                value: self.total(),
                domain: "[0, P]",
            })
        }
    }

    pub fn p_a(&self) -> f64 {
        self.p_a
    }

    pub fn p_d(&self) -> f64 {
        self.p_d
    }

    pub fn total(&self) -> f64 {
        self.p_a + self.p_d
    }
}

pub(crate) fn check_rho(rho: f64) -> Result<f64> {
    if (-1.0..=1.0).contains(&rho) {
        Ok(rho)
    } else {
        Err(Error::Domain {
            what: "rho",
            value: rho,
            domain: "[-1, 1]",
        })
    }
}

/// `P + Q + 1 + 2 sqrt(PQ)`: output power with fully aligned signal and interference.
#[inline]
pub(crate) fn aligned_power(p: f64, q: f64) -> f64 {
    p + q + 1.0 + 2.0 * (p * q).sqrt()
}

#[inline]
fn pos(x: f64) -> f64 {
    x.max(0.0)
}

/// `log2(x / y)`, with `log2(0 / 0)` read as `-inf` so that `[.]+` clears it.
#[inline]
fn log2_ratio(x: f64, y: f64) -> f64 {
    if x == 0.0 {
        f64::NEG_INFINITY
    } else {
        (x / y).log2()
    }
}

/// `rho` minimizing the first upper bound: `min(Q/4, 1)`.
pub fn rho_star_upper_i(q: f64) -> f64 {
    (q / 4.0).min(1.0)
}

/// `rho` minimizing the second upper bound whenever `Q <= 2P + 2`: `min(Q/2, 1)`.
pub fn rho_star_upper_ii(q: f64) -> f64 {
    (q / 2.0).min(1.0)
}

/// Trivial point-to-point bound `1/2 log2(1 + P)`.
pub fn trivial_upper(spec: &GaussianChannelSpec) -> RateBound {
    RateBound::upper(0.5 * spec.p.ln_1p() / std::f64::consts::LN_2, "point-to-point")
}

/// Time-sharing between the users, each served by dirty paper coding: `1/4 log2(1 + P)`.
pub fn rate_timeshare(spec: &GaussianChannelSpec) -> RateBound {
    RateBound::lower(0.25 * spec.p.ln_1p() / std::f64::consts::LN_2, "time-sharing")
}

/// Interference treated as noise: `1/2 log2(1 + P/(Q+1))`.
pub fn rate_interference_as_noise(spec: &GaussianChannelSpec) -> RateBound {
    RateBound::lower(
        0.5 * (spec.p / (spec.q + 1.0)).ln_1p() / std::f64::consts::LN_2,
        "interference as noise",
    )
}

/// First upper bound at a fixed noise correlation:
/// `1/4 log2((1+P)/(1+rho)) + 1/4 log2((P+Q+1+2 sqrt(PQ))/(Q/2+1-rho))`.
pub fn upper_i_at_rho(spec: &GaussianChannelSpec, rho: f64) -> Result<f64> {
    check_rho(rho)?;
    Ok(upper_i_raw(spec.p, spec.q, rho))
}

pub(crate) fn upper_i_raw(p: f64, q: f64, rho: f64) -> f64 {
    0.25 * ((1.0 + p) / (1.0 + rho)).log2() + 0.25 * (aligned_power(p, q) / (q / 2.0 + 1.0 - rho)).log2()
}

/// First upper bound, minimized over `rho` in closed form (`rho* = min(Q/4, 1)`).
pub fn upper_i(spec: &GaussianChannelSpec) -> RateBound {
    let (p, q) = (spec.p, spec.q);
    let n = aligned_power(p, q);
    let value = if q <= 4.0 {
        0.25 * ((1.0 + p) * n).log2() - 0.5 * (1.0 + q / 4.0).log2()
    } else {
        0.25 * ((1.0 + p) / 2.0).log2() + 0.25 * (2.0 * n / q).log2()
    };
    RateBound::upper(value, "upper bound I")
}

/// Second upper bound at a fixed noise correlation:
/// `1/2 log2(N / sqrt((1+rho)(Q+1-rho))) - [1/4 log2(Q/(2P+1+rho))]+`.
pub fn upper_ii_at_rho(spec: &GaussianChannelSpec, rho: f64) -> Result<f64> {
    check_rho(rho)?;
    Ok(upper_ii_raw(spec.p, spec.q, rho))
}

pub(crate) fn upper_ii_raw(p: f64, q: f64, rho: f64) -> f64 {
    let n = aligned_power(p, q);
    0.5 * (n / ((1.0 + rho) * (q + 1.0 - rho)).sqrt()).log2() - pos(0.25 * log2_ratio(q, 2.0 * p + 1.0 + rho))
}

/// Second upper bound with `rho` fixed to `min(Q/2, 1)`, the two-branch
/// closed form split at `Q = 2`.
///
/// This choice is the minimizer whenever `Q <= 2P + 2`. Beyond that, with
/// `P < 1` and `Q > 2`, the `[.]+` term is active at `rho = 1` and a smaller
/// `rho` does better; the value here is then still a valid but looser bound.
/// [`upper_ii`] returns the exact minimum.
pub fn upper_ii_branch(spec: &GaussianChannelSpec) -> RateBound {
    let (p, q) = (spec.p, spec.q);
    let n = aligned_power(p, q);
    let value = if q <= 2.0 {
        0.5 * (n / (1.0 + q / 2.0)).log2()
    } else {
        0.5 * (n / (2.0 * q).sqrt()).log2() - pos(0.25 * (q / (2.0 * p + 2.0)).log2())
    };
    RateBound::upper(value, "upper bound II (rho = min(Q/2, 1))")
}

/// Second upper bound minimized exactly over `rho`.
///
/// On `{rho >= Q - 2P - 1}` the objective is minimized at `clamp(Q/2)`; on
/// the complementary piece, where the `[.]+` term is active, the only
/// stationary point solves `a^2 + 4Pa - 2P(Q+2) = 0` with `a = 1 + rho`.
/// The minimum is the best of these candidates, the kink and `rho = 1`.
pub fn upper_ii(spec: &GaussianChannelSpec) -> RateBound {
    RateBound::upper(upper_ii_value(spec.p, spec.q), "upper bound II")
}

pub(crate) fn upper_ii_value(p: f64, q: f64) -> f64 {
    upper_ii_minimum(p, q).value
}

/// Exact minimizer of [`upper_ii_at_rho`]; reduces to `min(Q/2, 1)` when
/// `Q <= 2P + 2`. At `P = 0` the infimum may sit at the excluded edge
/// `rho = -1`, reported with its limiting value.
pub fn rho_star_upper_ii_exact(spec: &GaussianChannelSpec) -> f64 {
    upper_ii_minimum(spec.p, spec.q).arg
}

fn upper_ii_minimum(p: f64, q: f64) -> Minimum {
    let in_range = |r: f64| r > -1.0 && r <= 1.0;
    let mut candidates = vec![1.0, rho_star_upper_ii(q)];
    let kink = q - 2.0 * p - 1.0;
    if in_range(kink) {
        candidates.push(kink);
    }
    let stationary = -2.0 * p + (4.0 * p * p + 2.0 * p * (q + 2.0)).sqrt() - 1.0;
    if in_range(stationary) {
        candidates.push(stationary);
    }
    let mut best = Minimum {
        arg: 1.0,
        value: f64::INFINITY,
    };
    for r in candidates {
        let v = upper_ii_raw(p, q, r);
        if v < best.value {
            best = Minimum { arg: r, value: v };
        }
    }
    if p == 0.0 && q > 0.0 {
        // rho -> -1 limit: the (1 + rho) factors cancel.
        let edge = 0.5 * aligned_power(p, q).log2() - 0.25 * (q * (q + 2.0)).log2();
        if edge < best.value {
            best = Minimum { arg: -1.0, value: edge };
        }
    }
    best
}

/// `min(upper_i, upper_ii, 1/2 log2(1+P))`.
pub fn upper_envelope(spec: &GaussianChannelSpec) -> RateBound {
    let value = upper_i(spec)
        .value()
        .min(upper_ii(spec).value())
        .min(trivial_upper(spec).value());
    RateBound::upper(value, "upper envelope")
}

/// Superposition dirty-paper rate
/// `1/2 log2(1 + P_A/(P_D + Q/2 + 1)) + 1/4 log2(1 + P_D)`.
pub fn rate_of_split(split: PowerSplit, q: f64) -> f64 {
    rate_of_split_raw(split.p_a, split.p_d, q)
}

pub(crate) fn rate_of_split_raw(p_a: f64, p_d: f64, q: f64) -> f64 {
    (0.5 * (p_a / (p_d + q / 2.0 + 1.0)).ln_1p() + 0.25 * p_d.ln_1p()) / std::f64::consts::LN_2
}

/// Power split maximizing [`rate_of_split`]: all power used, with
/// `P_D = clamp(Q/2 - 1, 0, P)`.
pub fn optimal_split(spec: &GaussianChannelSpec) -> PowerSplit {
    let p_d = (spec.q / 2.0 - 1.0).clamp(0.0, spec.p);
    PowerSplit {
        p_a: spec.p - p_d,
        p_d,
    }
}

/// Superposition dirty-paper lower bound in closed form:
/// `1/2 log2(1 + P/(Q/2+1))` for `Q/2 < 1`,
/// `1/2 log2((P + Q/2 + 1)/sqrt(2Q))` for `1 <= Q/2 < P + 1`,
/// `1/4 log2(1 + P)` for `Q/2 >= P + 1`.
pub fn lower_bound(spec: &GaussianChannelSpec) -> RateBound {
    RateBound::lower(lower_bound_value(spec.p, spec.q), "superposition DPC")
}

pub(crate) fn lower_bound_value(p: f64, q: f64) -> f64 {
    let half = q / 2.0;
    if half < 1.0 {
        0.5 * (p / (half + 1.0)).ln_1p() / std::f64::consts::LN_2
    } else if half < p + 1.0 {
        0.5 * ((p + half + 1.0) / (2.0 * q).sqrt()).log2()
    } else {
        0.25 * p.ln_1p() / std::f64::consts::LN_2
    }
}

/// K-user upper bound
/// `1/2 log2 N - (K-1)/(2K) log2 Q - 1/(2K) log2 K - [1/(2K) log2(Q/(K(P+1)))]+`,
/// capped by `1/2 log2(1 + P)`; the expression diverges as `Q -> 0`.
pub fn upper_k(spec: &GaussianChannelSpec) -> RateBound {
    let trivial = trivial_upper(spec).value();
    if spec.q == 0.0 {
        return RateBound::upper(trivial, "K-user converse");
    }
    RateBound::upper(upper_k_raw(spec.p, spec.q, spec.users).min(trivial), "K-user converse")
}

pub(crate) fn upper_k_raw(p: f64, q: f64, users: usize) -> f64 {
    let k = users as f64;
    0.5 * aligned_power(p, q).log2()
        - (k - 1.0) / (2.0 * k) * q.log2()
        - k.log2() / (2.0 * k)
        - pos((q / (k * (p + 1.0))).log2() / (2.0 * k))
}

/// High-SINR capacity asymptote: `1/2 log2(P/sqrt(2Q))` for `Q > 2`,
/// `1/2 log2(P/(1 + Q/2))` otherwise.
pub fn high_sinr_asymptote(spec: &GaussianChannelSpec) -> Result<f64> {
    if spec.p <= 0.0 {
        return Err(Error::Domain {
            what: "P",
            value: spec.p,
            domain: "(0, inf)",
        });
    }
    Ok(if spec.q > 2.0 {
        0.5 * (spec.p / (2.0 * spec.q).sqrt()).log2()
    } else {
        0.5 * (spec.p / (1.0 + spec.q / 2.0)).log2()
    })
}

/// Both upper bounds at the physical noise correlation `rho`, which remain
/// valid with perfect causal feedback. `rho = -1` makes them vacuous and is
/// rejected.
pub fn feedback_bounds(spec: &GaussianChannelSpec, rho: f64) -> Result<(RateBound, RateBound)> {
    check_rho(rho)?;
    if rho == -1.0 {
        return Err(Error::Domain {
            what: "rho",
            value: rho,
            domain: "(-1, 1] (both bounds are infinite at -1)",
        });
    }
    Ok((
        RateBound::upper(upper_i_raw(spec.p, spec.q, rho), "upper bound I with feedback"),
        RateBound::upper(upper_ii_raw(spec.p, spec.q, rho), "upper bound II with feedback"),
    ))
}

fn rho_domain() -> ScalarInterval {
    ScalarInterval::new(-1.0, 1.0).expect("static interval")
}

/// Numeric minimization of [`upper_i_at_rho`] over `rho`.
pub fn upper_i_numeric(spec: &GaussianChannelSpec) -> Minimum {
    minimize_scalar(|r| upper_i_raw(spec.p, spec.q, r), rho_domain())
}

/// Numeric minimization of [`upper_ii_at_rho`] over `rho`.
pub fn upper_ii_numeric(spec: &GaussianChannelSpec) -> Minimum {
    minimize_scalar(|r| upper_ii_raw(spec.p, spec.q, r), rho_domain())
}

/// Numeric maximization of [`rate_of_split`] over the power simplex.
/// `first` is `P_A`, `second` is `P_D`.
pub fn lower_bound_numeric(spec: &GaussianChannelSpec) -> SimplexMaximum {
    maximize_on_simplex(spec.p, |p_a, p_d| rate_of_split_raw(p_a, p_d, spec.q))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    fn spec(p: f64, q: f64) -> GaussianChannelSpec {
        GaussianChannelSpec::new(p, q).unwrap()
    }

    #[test]
    fn spec_validation() {
        assert!(GaussianChannelSpec::new(-1.0, 0.0).is_err());
        assert!(GaussianChannelSpec::new(1.0, f64::INFINITY).is_err());
        assert!(spec(1.0, 1.0).with_users(1).is_err());
        assert!(spec(1.0, 1.0).with_rho(1.5).is_err());
        assert_eq!(spec(1.0, 1.0).with_rho(0.5).unwrap().rho(), Some(0.5));
        assert!(PowerSplit::new(1.0, -0.1).is_err());
        assert!(PowerSplit::new(1.0, 2.0).unwrap().within(2.5).is_err());
        assert!(PowerSplit::new(1.0, 2.0).unwrap().within(3.0).is_ok());
    }

    #[test]
    fn baselines() {
        assert_eq!(rate_timeshare(&spec(0.0, 1.0)).value(), 0.0);
        assert_abs_diff_eq!(rate_timeshare(&spec(3.0, 1.0)).value(), 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(rate_timeshare(&spec(1995.262, 1.0)).value(), 2.7408, epsilon = 1e-4);
        assert_abs_diff_eq!(rate_interference_as_noise(&spec(10.0, 4.0)).value(), 0.792481, epsilon = 1e-6);
        assert_eq!(rate_interference_as_noise(&spec(0.0, 4.0)).value(), 0.0);
        assert_abs_diff_eq!(
            rate_interference_as_noise(&spec(7.0, 0.0)).value(),
            1.5,
            epsilon = 1e-15
        );
    }

    #[test]
    fn upper_i_examples() {
        // rho* = 1: 1/4 log2 11 + 1/4 log2((19 + 2 sqrt 80)/8) = 1.416133...
        let s = spec(10.0, 8.0);
        assert_abs_diff_eq!(upper_i(&s).value(), 1.416133, epsilon = 1e-6);
        assert_abs_diff_eq!(upper_i_numeric(&s).arg, 1.0, epsilon = 1e-6);
        assert_abs_diff_eq!(upper_i(&s).value(), upper_i_numeric(&s).value, epsilon = 1e-9);
        assert_abs_diff_eq!(upper_i(&spec(10.0, 0.0)).value(), 0.5 * 11f64.log2(), epsilon = 1e-12);
        assert_abs_diff_eq!(
            upper_i(&spec(10.0, 1e-12)).value(),
            0.5 * 11f64.log2(),
            epsilon = 1e-6
        );
    }

    #[test]
    fn upper_i_branches_meet_at_four() {
        for p in [0.1, 1.0, 10.0, 1e4] {
            let n = aligned_power(p, 4.0);
            let low = 0.25 * ((1.0 + p) * n).log2() - 0.5 * 2f64.log2();
            let high = 0.25 * ((1.0 + p) / 2.0).log2() + 0.25 * (2.0 * n / 4.0).log2();
            assert_abs_diff_eq!(low, high, epsilon = 1e-12);
        }
    }

    #[test]
    fn upper_ii_examples() {
        // rho* = 1: 1/2 log2((111 + 2 sqrt 1000)/sqrt 200) - 1/4 log2(100/22) = 1.265419...
        let s = spec(10.0, 100.0);
        assert_abs_diff_eq!(upper_ii(&s).value(), 1.265419, epsilon = 1e-6);
        assert_abs_diff_eq!(upper_ii_branch(&s).value(), 1.265419, epsilon = 1e-6);
        assert_abs_diff_eq!(upper_ii(&spec(10.0, 0.0)).value(), 0.5 * 11f64.log2(), epsilon = 1e-12);
        let s = spec(10.0, 1.0);
        assert_abs_diff_eq!(upper_ii_numeric(&s).arg, 0.5, epsilon = 1e-6);
    }

    #[test]
    fn upper_ii_branches_meet_at_two() {
        for p in [0.1, 1.0, 10.0, 1e4] {
            let n = aligned_power(p, 2.0);
            let low = 0.5 * (n / 2.0).log2();
            let high = 0.5 * (n / 4f64.sqrt()).log2() - pos(0.25 * (2.0 / (2.0 * p + 2.0)).log2());
            assert_abs_diff_eq!(low, high, epsilon = 1e-12);
        }
    }

    #[test]
    fn upper_ii_beats_branch_form_for_weak_signal() {
        // P < 1 and Q > 2P + 2: rho = 1 is not optimal.
        let s = spec(0.1, 2.5);
        let exact = upper_ii(&s).value();
        let branch = upper_ii_branch(&s).value();
        assert!(branch > exact + 0.05, "{branch} vs {exact}");
        assert_abs_diff_eq!(exact, upper_ii_numeric(&s).value, epsilon = 1e-9);
    }

    #[test]
    fn exact_rho_star() {
        assert_eq!(rho_star_upper_ii_exact(&spec(10.0, 1.0)), 0.5);
        assert_eq!(rho_star_upper_ii_exact(&spec(10.0, 100.0)), 1.0);
        // P = 0.1, Q = 8: stationary point a^2 + 0.4a - 2 = 0.
        let a = -0.2 + (0.04f64 + 2.0).sqrt();
        let s = spec(0.1, 8.0);
        assert_abs_diff_eq!(rho_star_upper_ii_exact(&s), a - 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(upper_ii_numeric(&s).arg, a - 1.0, epsilon = 1e-6);
    }

    #[test]
    fn upper_ii_at_zero_power() {
        for q in [0.0, 0.5, 3.0, 50.0] {
            let s = spec(0.0, q);
            let numeric = upper_ii_numeric(&s).value;
            assert!(upper_ii(&s).value() <= numeric + 1e-9);
            assert!(upper_ii(&s).value() >= 0.0);
        }
    }

    #[test]
    fn envelope_limits() {
        assert_abs_diff_eq!(upper_envelope(&spec(10.0, 0.0)).value(), 0.5 * 11f64.log2(), epsilon = 1e-12);
        for p in [1.0, 10.0] {
            let v = upper_envelope(&spec(p, 1e8)).value();
            assert_abs_diff_eq!(v, 0.25 * (1.0 + p).log2(), epsilon = 1e-3);
        }
        // At large Q the envelope is upper bound I at rho = 1, which exceeds
        // the limit by exactly 1/4 log2(N/Q) ~ sqrt(P/Q)/(2 ln 2).
        let p = 1995.26;
        for q in [1e8, 1e10, 1e12] {
            let excess = upper_envelope(&spec(p, q)).value() - 0.25 * (1.0 + p).log2();
            assert_abs_diff_eq!(excess, 0.25 * (aligned_power(p, q) / q).log2(), epsilon = 1e-12);
        }
    }

    #[test]
    fn split_rates() {
        let q = 2.0;
        assert_abs_diff_eq!(
            rate_of_split(PowerSplit::new(4.0, 2.0).unwrap(), q),
            0.5 + 0.25 * 3f64.log2(),
            epsilon = 1e-12
        );
        assert_abs_diff_eq!(
            rate_of_split(PowerSplit::new(6.0, 0.0).unwrap(), q),
            0.5 * (1.0 + 6.0 / 2.0f64).log2(),
            epsilon = 1e-12
        );
        assert_abs_diff_eq!(
            rate_of_split(PowerSplit::new(0.0, 6.0).unwrap(), q),
            0.25 * 7f64.log2(),
            epsilon = 1e-12
        );
    }

    #[test]
    fn lower_bound_examples() {
        // middle branch: 1/2 log2(13 / sqrt 8) = 1.100220...
        assert_abs_diff_eq!(lower_bound(&spec(10.0, 4.0)).value(), 1.100220, epsilon = 1e-6);
        assert_abs_diff_eq!(lower_bound(&spec(10.0, 0.0)).value(), 0.5 * 11f64.log2(), epsilon = 1e-12);
        assert_abs_diff_eq!(lower_bound(&spec(10.0, 30.0)).value(), 0.25 * 11f64.log2(), epsilon = 1e-12);
        let numeric = lower_bound_numeric(&spec(10.0, 4.0));
        assert_abs_diff_eq!(numeric.value, 1.100220, epsilon = 1e-6);
        assert_abs_diff_eq!(numeric.second, 1.0, epsilon = 1e-4);
    }

    #[test]
    fn lower_bound_continuity() {
        for p in [0.1, 1.0, 10.0, 1e4] {
            for q in [2.0, 2.0 * (p + 1.0)] {
                let left = lower_bound_value(p, q * (1.0 - 1e-13));
                let right = lower_bound_value(p, q);
                assert_abs_diff_eq!(left, right, epsilon = 1e-9);
            }
        }
    }

    #[test]
    fn optimal_split_attains_lower_bound() {
        for (p, q) in [(10.0, 0.5), (10.0, 4.0), (10.0, 40.0), (0.3, 3.0)] {
            let s = spec(p, q);
            assert_abs_diff_eq!(
                rate_of_split(optimal_split(&s), q),
                lower_bound(&s).value(),
                epsilon = 1e-12
            );
        }
    }

    #[test]
    fn upper_k_reduces_to_two_users() {
        for (p, q) in [(10.0, 100.0), (1.0, 0.5), (1e3, 3.0)] {
            let s = spec(p, q);
            assert_abs_diff_eq!(upper_k_raw(p, q, 2), upper_ii_at_rho(&s, 1.0).unwrap(), epsilon = 1e-12);
        }
    }

    #[test]
    fn upper_k_limits() {
        let s = spec(10.0, 0.0).with_users(4).unwrap();
        assert_abs_diff_eq!(upper_k(&s).value(), 0.5 * 11f64.log2(), epsilon = 1e-15);
        let s = spec(10.0, 1e10).with_users(4).unwrap();
        assert_abs_diff_eq!(upper_k(&s).value(), 11f64.log2() / 8.0, epsilon = 1e-3);
    }

    #[test]
    fn upper_k_matches_entropy_terms() {
        // Same bound assembled from Gaussian differential entropies in nats,
        // h = 1/2 ln(2 pi e var): K outputs, minus K-1 states and one noise.
        let (p, q, k) = (10.0_f64, 100.0_f64, 3usize);
        let kf = k as f64;
        let h = |var: f64| 0.5 * (2.0 * std::f64::consts::PI * std::f64::consts::E * var).ln();
        let nats = kf * h(aligned_power(p, q)) - (kf - 1.0) * h(q) - h(1.0) - 0.5 * kf.ln()
            - (0.5 * (q / (kf * (p + 1.0))).ln()).max(0.0);
        let expect = nats / kf / std::f64::consts::LN_2;
        let s = spec(p, q).with_users(k).unwrap();
        assert_abs_diff_eq!(upper_k(&s).value(), expect, epsilon = 1e-12);
    }

    #[test]
    fn asymptotes() {
        let s = spec(1e6, 8.0);
        assert_abs_diff_eq!(high_sinr_asymptote(&s).unwrap(), 0.5 * (1e6f64 / 4.0).log2(), epsilon = 1e-12);
        assert!((lower_bound(&s).value() - high_sinr_asymptote(&s).unwrap()).abs() <= 0.01);
        let s = spec(1e6, 1.0);
        assert!((lower_bound(&s).value() - 0.5 * (1e6f64 / 1.5).log2()).abs() <= 0.01);
        let s = spec(5.0, 2.0);
        assert_abs_diff_eq!(high_sinr_asymptote(&s).unwrap(), 0.5 * 2.5f64.log2(), epsilon = 1e-12);
        assert!(high_sinr_asymptote(&spec(0.0, 1.0)).is_err());
    }

    #[test]
    fn feedback_examples() {
        let s = spec(10.0, 1.0);
        let (fb_i, fb_ii) = feedback_bounds(&s, 0.0).unwrap();
        // 1/2 log2((12 + 2 sqrt 10)/sqrt 2) = 1.847853...
        assert_abs_diff_eq!(fb_ii.value(), 1.847853, epsilon = 1e-6);
        assert!(fb_i.value() >= upper_i(&s).value());
        assert!(fb_ii.value() >= upper_ii(&s).value());
        let (at_i, _) = feedback_bounds(&s, rho_star_upper_i(1.0)).unwrap();
        let (_, at_ii) = feedback_bounds(&s, rho_star_upper_ii(1.0)).unwrap();
        assert_abs_diff_eq!(at_i.value(), upper_i(&s).value(), epsilon = 1e-12);
        assert_abs_diff_eq!(at_ii.value(), upper_ii(&s).value(), epsilon = 1e-12);
        assert!(feedback_bounds(&s, -1.0).is_err());
        assert!(feedback_bounds(&s, 2.0).is_err());
    }

    proptest! {
        #[test]
        fn closed_forms_match_numeric(lp in -1.0f64..4.0, lq in -1.0f64..4.0) {
            let s = spec(10f64.powf(lp), 10f64.powf(lq));
            prop_assert!((upper_i(&s).value() - upper_i_numeric(&s).value).abs() < 1e-7);
            prop_assert!((upper_ii(&s).value() - upper_ii_numeric(&s).value).abs() < 1e-7);
            prop_assert!(upper_ii_branch(&s).value() >= upper_ii(&s).value() - 1e-12);
        }

        #[test]
        fn ordering(lp in -1.0f64..4.0, lq in -1.0f64..4.0) {
            let s = spec(10f64.powf(lp), 10f64.powf(lq));
            let lower = lower_bound(&s).value();
            prop_assert!(rate_timeshare(&s).value() <= lower + 1e-12);
            prop_assert!(rate_interference_as_noise(&s).value() <= lower + 1e-12);
            prop_assert!(lower <= upper_envelope(&s).value() + 1e-9);
        }
    }
}
