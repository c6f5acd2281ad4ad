//! Binary multicast with additive interference, `Y_k = X xor S_k (xor Z_k)`.
//!
//! Two-user capacity, K-user bounds for i.i.d. interference, the noisy
//! two-user bounds, a Gelfand-Pinsker rate evaluator ([`gp`]) and a Monte
//! Carlo simulator of the time-shared precancellation scheme ([`sim`]).

pub mod gp;
pub mod sim;

use std::collections::BTreeMap;

use rand::Rng;

use crate::entropy::{h2, plogp, xor_convolve, JointPmf};
use crate::error::{check_probability, Error, Result};
use crate::rate::RateBound;

/// Largest user count accepted by the K-user bounds.
pub const MAX_USERS: usize = 64;

/// Joint law of one interference tuple `(S_1, ..., S_K)`.
#[derive(Debug, Clone, PartialEq)]
pub enum InterferenceModel {
    /// Mutually independent `Bernoulli(q)` components.
    Iid { q: f64 },
    /// An arbitrary joint law of `(S_1, S_2)` over `{0,1}^2`; two users only.
    PairJoint(JointPmf<(u8, u8)>),
    /// `S_1 ~ Bernoulli(q)`, every other `S_k` equal to `S_1`, or to its
    /// complement when `flip` is set.
    FullyCorrelated { q: f64, flip: bool },
}

#[derive(Debug, Clone, PartialEq)]
pub struct BinaryChannelSpec {
    users: usize,
    model: InterferenceModel,
    noise: Option<f64>,
}

impl BinaryChannelSpec {
    pub fn iid(users: usize, q: f64) -> Result<Self> {
        check_users(users)?;
        check_probability("q", q)?;
        Ok(Self {
            users,
            model: InterferenceModel::Iid { q },
            noise: None,
        })
    }

    pub fn pair_joint(pmf: JointPmf<(u8, u8)>) -> Result<Self> {
        if let Some(((a, b), _)) = pmf.iter().find(|((a, b), _)| *a > 1 || *b > 1) {
            return Err(Error::InvalidSpec(format!("pair ({a}, {b}) is not binary")));
        }
        Ok(Self {
            users: 2,
            model: InterferenceModel::PairJoint(pmf),
            noise: None,
        })
    }

    pub fn fully_correlated(users: usize, q: f64, flip: bool) -> Result<Self> {
        check_users(users)?;
        check_probability("q", q)?;
        Ok(Self {
            users,
            model: InterferenceModel::FullyCorrelated { q, flip },
            noise: None,
        })
    }

    /// Adds i.i.d. `Bernoulli(p)` channel noise `Z_k` on every link.
    pub fn with_noise(mut self, p: f64) -> Result<Self> {
        check_probability("noise_q", p)?;
        self.noise = Some(p);
        Ok(self)
    }

    pub fn users(&self) -> usize {
        self.users
    }

    pub fn model(&self) -> &InterferenceModel {
        &self.model
    }

    pub fn noise(&self) -> Option<f64> {
        self.noise
    }

    fn noise_or_zero(&self) -> f64 {
        self.noise.unwrap_or(0.0)
    }

    fn is_noiseless(&self) -> bool {
        self.noise_or_zero() == 0.0
    }

    /// `Pr{S_k = 1}` for each user.
    pub fn marginals(&self) -> Vec<f64> {
        match &self.model {
            InterferenceModel::Iid { q } => vec![*q; self.users],
            InterferenceModel::PairJoint(pmf) => vec![
                pmf.marginal(|s| s.0).prob(&1),
                pmf.marginal(|s| s.1).prob(&1),
            ],
            InterferenceModel::FullyCorrelated { q, flip } => (0..self.users)
                .map(|k| if k > 0 && *flip { 1.0 - q } else { *q })
                .collect(),
        }
    }

    /// `Pr{S_1 xor S_2 = 1}` for a two-user spec.
    pub fn xor_crossover(&self) -> Result<f64> {
        require_two_users("xor_crossover", self.users)?;
        Ok(match &self.model {
            InterferenceModel::Iid { q } => 2.0 * q * (1.0 - q),
            InterferenceModel::PairJoint(pmf) => pmf.prob(&(0, 1)) + pmf.prob(&(1, 0)),
            InterferenceModel::FullyCorrelated { flip, .. } => {
                if *flip {
                    1.0
                } else {
                    0.0
                }
            }
        })
    }

    /// Joint law of the full tuple `(S_1, ..., S_K)`.
    pub fn state_pmf(&self) -> JointPmf<Vec<u8>> {
        let atoms: Vec<(Vec<u8>, f64)> = match &self.model {
            InterferenceModel::Iid { q } => (0u64..1 << self.users)
                .map(|mask| {
                    let s: Vec<u8> = (0..self.users).map(|k| ((mask >> k) & 1) as u8).collect();
                    let p = s.iter().map(|&b| if b == 1 { *q } else { 1.0 - q }).product();
                    (s, p)
                })
                .collect(),
            InterferenceModel::PairJoint(pmf) => {
                pmf.iter().map(|(&(a, b), p)| (vec![a, b], p)).collect()
            }
            InterferenceModel::FullyCorrelated { q, flip } => [0u8, 1]
                .iter()
                .map(|&s1| {
                    let s: Vec<u8> = (0..self.users)
                        .map(|k| if k > 0 && *flip { 1 - s1 } else { s1 })
                        .collect();
                    (s, if s1 == 1 { *q } else { 1.0 - q })
                })
                .collect(),
        };
        JointPmf::new(atoms).expect("state law built from a valid model")
    }

    /// Draws one interference tuple into `out` (length `users`).
    pub fn sample_states<R: Rng + ?Sized>(&self, rng: &mut R, out: &mut [u8]) {
        debug_assert_eq!(out.len(), self.users);
        match &self.model {
            InterferenceModel::Iid { q } => {
                for s in out.iter_mut() {
                    *s = rng.random_bool(*q) as u8;
                }
            }
            InterferenceModel::PairJoint(pmf) => {
                let u: f64 = rng.random();
                let mut acc = 0.0;
                let mut pick = (0, 0);
                for (&pair, p) in pmf.iter() {
                    if p == 0.0 {
                        continue;
                    }
                    pick = pair;
                    acc += p;
                    if u < acc {
                        break;
                    }
                }
                out[0] = pick.0;
                out[1] = pick.1;
            }
            InterferenceModel::FullyCorrelated { q, flip } => {
                let s1 = rng.random_bool(*q) as u8;
                for (k, s) in out.iter_mut().enumerate() {
                    *s = if k > 0 && *flip { 1 - s1 } else { s1 };
                }
            }
        }
    }
}

fn check_users(users: usize) -> Result<()> {
    if users == 0 {
        return Err(Error::UnsupportedUsers {
            op: "binary channel",
            k: 0,
        });
    }
    if users > MAX_USERS {
        return Err(Error::TooManyUsers {
            op: "binary channel",
            k: users,
            max: MAX_USERS,
        });
    }
    Ok(())
}

fn require_two_users(op: &'static str, users: usize) -> Result<()> {
    if users == 2 {
        Ok(())
    } else {
        Err(Error::UnsupportedUsers { op, k: users })
    }
}

fn require_noiseless(op: &'static str, spec: &BinaryChannelSpec) -> Result<()> {
    if spec.is_noiseless() {
        Ok(())
    } else {
        Err(Error::InvalidSpec(format!(
            "{op} applies to the noiseless channel; use noisy_two_user_bounds"
        )))
    }
}

fn iid_q(op: &'static str, spec: &BinaryChannelSpec) -> Result<f64> {
    match spec.model {
        InterferenceModel::Iid { q } => Ok(q),
        _ => Err(Error::InvalidSpec(format!("{op} requires i.i.d. interference"))),
    }
}

/// `H(S_1 xor S_2)` for a two-user spec.
pub fn xor_entropy(spec: &BinaryChannelSpec) -> Result<f64> {
    spec.xor_crossover().map(h2)
}

/// Two-user noiseless capacity `C = 1 - H(S_1 xor S_2) / 2`.
pub fn capacity_two_user(spec: &BinaryChannelSpec) -> Result<RateBound> {
    require_noiseless("capacity_two_user", spec)?;
    Ok(RateBound::exact(
        1.0 - 0.5 * xor_entropy(spec)?,
        "two-user capacity",
    ))
}

/// Serving one user at a time with full precancellation: `1/K`.
pub fn rate_timeshare(users: usize) -> Result<RateBound> {
    if users == 0 {
        return Err(Error::UnsupportedUsers {
            op: "rate_timeshare",
            k: 0,
        });
    }
    Ok(RateBound::lower(1.0 / users as f64, "time-sharing"))
}

/// Ignoring the interference at the transmitter: every link is a BSC, so
/// `1 - max_k H(S_k xor Z_k)`, which is `1 - max_k H(S_k)` without noise.
pub fn rate_ignore_side_info(spec: &BinaryChannelSpec) -> RateBound {
    let p = spec.noise_or_zero();
    let worst = spec
        .marginals()
        .into_iter()
        .map(|q| h2(xor_convolve(q, p)))
        .fold(0.0, f64::max);
    RateBound::lower(1.0 - worst, "ignore side information")
}

/// `Pr` of one XOR pattern `(S_1 xor S_2, ..., S_1 xor S_K)` of Hamming
/// weight `w` under i.i.d. `Bernoulli(q)` interference.
fn pattern_probability(users: usize, q: f64, w: usize) -> f64 {
    let rest = (users - 1 - w) as i32;
    let w = w as i32;
    (1.0 - q) * q.powi(w) * (1.0 - q).powi(rest) + q * (1.0 - q).powi(w) * q.powi(rest)
}

fn binomial(n: usize, k: usize) -> f64 {
    let k = k.min(n - k);
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// `H(S_1 xor S_2, ..., S_1 xor S_K)` for i.i.d. `Bernoulli(q)` interference,
/// summed over Hamming-weight classes in `O(K)` terms.
pub fn xor_pattern_entropy(users: usize, q: f64) -> Result<f64> {
    check_users(users)?;
    check_probability("q", q)?;
    Ok((0..users)
        .map(|w| binomial(users - 1, w) * plogp(pattern_probability(users, q, w)))
        .sum())
}

/// Same quantity as [`xor_pattern_entropy`] by enumerating all `2^K`
/// interference tuples. Intended for cross-checking at small `K`.
pub fn xor_pattern_entropy_brute_force(users: usize, q: f64) -> Result<f64> {
    if users > 24 {
        return Err(Error::TooManyUsers {
            op: "xor_pattern_entropy_brute_force",
            k: users,
            max: 24,
        });
    }
    let spec = BinaryChannelSpec::iid(users, q)?;
    let mut patterns: BTreeMap<u64, f64> = BTreeMap::new();
    for (s, p) in spec.state_pmf().iter() {
        let pattern = s[1..]
            .iter()
            .enumerate()
            .fold(0u64, |acc, (i, &sk)| acc | (((s[0] ^ sk) as u64) << i));
        *patterns.entry(pattern).or_insert(0.0) += p;
    }
    Ok(patterns.values().map(|&p| plogp(p)).sum())
}

/// K-user upper bound `R+ = 1 - H(S_1 xor S_2, ..., S_1 xor S_K) / K`.
pub fn upper_bound_k(spec: &BinaryChannelSpec) -> Result<RateBound> {
    let q = iid_q("upper_bound_k", spec)?;
    require_noiseless("upper_bound_k", spec)?;
    let k = spec.users();
    if k < 2 {
        return Err(Error::UnsupportedUsers {
            op: "upper_bound_k",
            k,
        });
    }
    let h = xor_pattern_entropy(k, q)?;
    Ok(RateBound::upper(1.0 - h / k as f64, "K-user converse"))
}

/// K-user lower bound `R- = max{1 - H(S_1), 1 - (1 - 1/K) H(S_1 xor S_2)}`:
/// block-wise precancellation, one clean block per user.
pub fn lower_bound_k(spec: &BinaryChannelSpec) -> Result<RateBound> {
    let q = iid_q("lower_bound_k", spec)?;
    require_noiseless("lower_bound_k", spec)?;
    let k = spec.users();
    if k < 2 {
        return Err(Error::UnsupportedUsers {
            op: "lower_bound_k",
            k,
        });
    }
    let ignore = 1.0 - h2(q);
    let blocks = 1.0 - (1.0 - 1.0 / k as f64) * h2(2.0 * q * (1.0 - q));
    Ok(RateBound::lower(ignore.max(blocks), "K-block precancellation"))
}

/// Achievable rate and upper bound for the two-user channel with i.i.d.
/// `Bernoulli(p)` link noise:
/// `1 - H(S_1 xor S_2 xor Z_1)/2 - H(Z_1)/2` and `1 - H(S_1 xor S_2)/2 - H(Z_1)/2`.
pub fn noisy_two_user_bounds(spec: &BinaryChannelSpec) -> Result<(RateBound, RateBound)> {
    let p = spec.noise().ok_or_else(|| {
        Error::InvalidSpec("noisy_two_user_bounds requires a noise parameter".into())
    })?;
    let q_xor = spec.xor_crossover()?;
    let lower = 1.0 - 0.5 * h2(xor_convolve(q_xor, p)) - 0.5 * h2(p);
    let upper = 1.0 - 0.5 * h2(q_xor) - 0.5 * h2(p);
    Ok((
        RateBound::lower(lower, "noisy precancellation"),
        RateBound::upper(upper, "noisy converse"),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rate::BoundKind;
    use approx::assert_abs_diff_eq;

    fn iid2(q: f64) -> BinaryChannelSpec {
        BinaryChannelSpec::iid(2, q).unwrap()
    }

    #[test]
    fn xor_entropy_examples() {
        assert_abs_diff_eq!(xor_entropy(&iid2(0.5)).unwrap(), 1.0, epsilon = 1e-15);
        let same = BinaryChannelSpec::fully_correlated(2, 0.3, false).unwrap();
        assert_eq!(xor_entropy(&same).unwrap(), 0.0);
        let flipped = BinaryChannelSpec::fully_correlated(2, 0.3, true).unwrap();
        assert_eq!(xor_entropy(&flipped).unwrap(), 0.0);
        // q' = 2 * 0.25 * 0.75 = 0.375
        assert_abs_diff_eq!(xor_entropy(&iid2(0.25)).unwrap(), 0.954434, epsilon = 1e-6);
    }

    #[test]
    fn xor_entropy_requires_two_users() {
        let spec = BinaryChannelSpec::iid(3, 0.2).unwrap();
        assert!(matches!(
            xor_entropy(&spec),
            Err(Error::UnsupportedUsers { k: 3, .. })
        ));
    }

    #[test]
    fn pair_joint_xor_marginal() {
        let pmf = JointPmf::new([((0, 0), 0.5), ((0, 1), 0.1), ((1, 0), 0.15), ((1, 1), 0.25)]).unwrap();
        let spec = BinaryChannelSpec::pair_joint(pmf).unwrap();
        assert_abs_diff_eq!(spec.xor_crossover().unwrap(), 0.25, epsilon = 1e-15);
        assert_eq!(spec.marginals(), vec![0.4, 0.35]);
        let bad = JointPmf::new([((0, 2), 1.0)]).unwrap();
        assert!(BinaryChannelSpec::pair_joint(bad).is_err());
    }

    #[test]
    fn capacity_examples() {
        let c = capacity_two_user(&iid2(0.5)).unwrap();
        assert_abs_diff_eq!(c.value(), 0.5, epsilon = 1e-15);
        assert_eq!(c.kind(), BoundKind::Exact);
        assert_eq!(capacity_two_user(&iid2(0.0)).unwrap().value(), 1.0);
        assert_abs_diff_eq!(capacity_two_user(&iid2(0.25)).unwrap().value(), 0.522783, epsilon = 1e-6);
        let noisy = iid2(0.25).with_noise(0.1).unwrap();
        assert!(capacity_two_user(&noisy).is_err());
    }

    #[test]
    fn baselines() {
        assert_eq!(rate_timeshare(1).unwrap().value(), 1.0);
        assert_eq!(rate_timeshare(2).unwrap().value(), 0.5);
        assert_abs_diff_eq!(rate_timeshare(3).unwrap().value(), 1.0 / 3.0, epsilon = 1e-15);
        assert!(rate_timeshare(0).is_err());
        assert_eq!(rate_ignore_side_info(&iid2(0.0)).value(), 1.0);
        assert_abs_diff_eq!(rate_ignore_side_info(&iid2(0.5)).value(), 0.0, epsilon = 1e-15);
        // 1 - H(0.11) evaluated directly: 0.500084...
        assert_abs_diff_eq!(rate_ignore_side_info(&iid2(0.11)).value(), 0.500084042, epsilon = 1e-9);
    }

    #[test]
    fn ignore_side_info_uses_worst_marginal() {
        let pmf = JointPmf::new([((0, 0), 0.9), ((1, 1), 0.1)]).unwrap();
        let spec = BinaryChannelSpec::pair_joint(pmf).unwrap();
        assert_abs_diff_eq!(rate_ignore_side_info(&spec).value(), 1.0 - h2(0.1), epsilon = 1e-15);
    }

    #[test]
    fn k_user_examples() {
        let spec = BinaryChannelSpec::iid(3, 0.5).unwrap();
        assert_abs_diff_eq!(upper_bound_k(&spec).unwrap().value(), 1.0 / 3.0, epsilon = 1e-12);
        assert_abs_diff_eq!(lower_bound_k(&spec).unwrap().value(), 1.0 / 3.0, epsilon = 1e-12);
        let clean = BinaryChannelSpec::iid(3, 0.0).unwrap();
        assert_eq!(lower_bound_k(&clean).unwrap().value(), 1.0);
        let q25 = BinaryChannelSpec::iid(3, 0.25).unwrap();
        // brute-force pattern pmf {0.4375, 0.1875 x3} gives H = 1.88024081...
        assert_abs_diff_eq!(upper_bound_k(&q25).unwrap().value(), 1.0 - 1.880240815 / 3.0, epsilon = 1e-9);
        assert_abs_diff_eq!(lower_bound_k(&q25).unwrap().value(), 0.363710665, epsilon = 1e-9);
    }

    #[test]
    fn k2_upper_bound_is_capacity() {
        for q in [0.0, 0.1, 0.25, 0.4, 0.5] {
            let spec = iid2(q);
            assert_abs_diff_eq!(
                upper_bound_k(&spec).unwrap().value(),
                capacity_two_user(&spec).unwrap().value(),
                epsilon = 1e-12
            );
        }
    }

    #[test]
    fn k_user_guards() {
        assert!(matches!(
            BinaryChannelSpec::iid(65, 0.1),
            Err(Error::TooManyUsers { .. })
        ));
        let one = BinaryChannelSpec::iid(1, 0.1).unwrap();
        assert!(upper_bound_k(&one).is_err());
        let corr = BinaryChannelSpec::fully_correlated(3, 0.1, false).unwrap();
        assert!(lower_bound_k(&corr).is_err());
        assert!(xor_pattern_entropy_brute_force(30, 0.1).is_err());
    }

    #[test]
    fn weight_classes_match_brute_force() {
        for k in 1..=12 {
            for q in [0.0, 0.05, 0.25, 0.37, 0.5] {
                let fast = xor_pattern_entropy(k, q).unwrap();
                let slow = xor_pattern_entropy_brute_force(k, q).unwrap();
                assert_abs_diff_eq!(fast, slow, epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn noisy_examples() {
        let half = iid2(0.5).with_noise(0.2).unwrap();
        let (lo, hi) = noisy_two_user_bounds(&half).unwrap();
        assert_abs_diff_eq!(lo.value(), 0.5 * (1.0 - h2(0.2)), epsilon = 1e-15);
        assert_abs_diff_eq!(hi.value(), 0.5 * (1.0 - h2(0.2)), epsilon = 1e-15);

        let clean = iid2(0.25).with_noise(0.0).unwrap();
        let (lo, hi) = noisy_two_user_bounds(&clean).unwrap();
        let c = capacity_two_user(&iid2(0.25)).unwrap().value();
        assert_abs_diff_eq!(lo.value(), c, epsilon = 1e-15);
        assert_abs_diff_eq!(hi.value(), c, epsilon = 1e-15);

        // 0.375 * 0.9 + 0.1 * 0.625 = 0.4; 1 - H(0.4)/2 - H(0.1)/2 = 0.28002690...
        let spec = iid2(0.25).with_noise(0.1).unwrap();
        let (lo, hi) = noisy_two_user_bounds(&spec).unwrap();
        assert_abs_diff_eq!(lo.value(), 0.280026906, epsilon = 1e-9);
        assert!(lo.value() <= hi.value());
        assert!(noisy_two_user_bounds(&iid2(0.25)).is_err());
    }

    #[test]
    fn state_pmf_matches_model() {
        let spec = BinaryChannelSpec::fully_correlated(3, 0.2, true).unwrap();
        let pmf = spec.state_pmf();
        assert_abs_diff_eq!(pmf.prob(&vec![1, 0, 0]), 0.2, epsilon = 1e-15);
        assert_abs_diff_eq!(pmf.prob(&vec![0, 1, 1]), 0.8, epsilon = 1e-15);
        assert_eq!(spec.marginals(), vec![0.2, 0.8, 0.8]);
    }
}
