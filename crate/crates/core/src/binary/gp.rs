//! Gelfand-Pinsker rate `min_k I(U;Y_k) - I(U;S)` evaluated exactly on a
//! finite joint law of `(U, X, S_1..S_K, Y_1..Y_K)`.

use crate::entropy::{mutual_information, xor_convolve, JointPmf};
use crate::error::{Error, Result};

use super::BinaryChannelSpec;

/// Largest alphabet accepted for any single variable.
pub const MAX_ALPHABET: usize = 16;

/// Tolerance on the Markov chain `U - (X, S) - Y_k`.
pub const MARKOV_TOLERANCE: f64 = 1e-9;

/// One atom of the joint law. `states[k]` and `outputs[k]` belong to user `k`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GpOutcome {
    pub aux: u8,
    pub input: u8,
    pub states: Vec<u8>,
    pub outputs: Vec<u8>,
}

/// `min_k I(U;Y_k) - I(U;S_1,...,S_K)`.
///
/// Fails with [`Error::InvalidDistribution`] if the atoms disagree on the
/// user count, use a symbol outside `0..MAX_ALPHABET`, or the law violates
/// `U - (X,S) - Y_k` by more than [`MARKOV_TOLERANCE`].
pub fn gp_rate(joint: &JointPmf<GpOutcome>) -> Result<f64> {
    let users = validate(joint)?;
    check_markov(joint, users)?;
    let penalty = mutual_information(joint, |o| o.aux, |o| o.states.clone());
    let worst = (0..users)
        .map(|k| mutual_information(joint, |o| o.aux, move |o| o.outputs[k]))
        .fold(f64::INFINITY, f64::min);
    Ok(worst - penalty)
}

fn validate(joint: &JointPmf<GpOutcome>) -> Result<usize> {
    let mut users = None;
    for (o, _) in joint.iter() {
        if o.states.len() != o.outputs.len() || o.states.is_empty() {
            return Err(Error::InvalidDistribution(format!(
                "atom has {} states and {} outputs",
                o.states.len(),
                o.outputs.len()
            )));
        }
        if *users.get_or_insert(o.states.len()) != o.states.len() {
            return Err(Error::InvalidDistribution("atoms disagree on the user count".into()));
        }
        let symbols = [o.aux, o.input].into_iter().chain(o.states.iter().copied()).chain(o.outputs.iter().copied());
        if let Some(bad) = symbols.into_iter().find(|&v| v as usize >= MAX_ALPHABET) {
            return Err(Error::InvalidDistribution(format!(
                "symbol {bad} exceeds the alphabet limit {MAX_ALPHABET}"
            )));
        }
    }
    Ok(users.expect("pmf support is never empty"))
}

/// Checks `p(u,x,s,y_k) p(x,s) = p(u,x,s) p(x,s,y_k)` for every `k`.
fn check_markov(joint: &JointPmf<GpOutcome>, users: usize) -> Result<()> {
    let p_xs = joint.marginal(|o| (o.input, o.states.clone()));
    let p_uxs = joint.marginal(|o| (o.aux, o.input, o.states.clone()));
    for k in 0..users {
        let p_uxsy = joint.marginal(|o| (o.aux, o.input, o.states.clone(), o.outputs[k]));
        let p_xsy = joint.marginal(|o| (o.input, o.states.clone(), o.outputs[k]));
        // Every (u,x,s) in the support paired with every y seen for (x,s).
        for ((u, x, s), puxs) in p_uxs.iter() {
            for ((x2, s2, y), pxsy) in p_xsy.iter() {
                if x2 != x || s2 != s {
                    continue;
                }
                let lhs = p_uxsy.prob(&(*u, *x, s.clone(), *y)) * p_xs.prob(&(*x, s.clone()));
                let rhs = puxs * pxsy;
                if (lhs - rhs).abs() > MARKOV_TOLERANCE {
                    return Err(Error::InvalidDistribution(format!(
                        "U - (X,S) - Y_{} violated by {:.3e}",
                        k + 1,
                        (lhs - rhs).abs()
                    )));
                }
            }
        }
    }
    Ok(())
}

/// Attaches outputs to a law of `(U, X, S)` through a memoryless channel.
///
/// `channel(k, x, s)` returns the distribution of `Y_k` as `(symbol, prob)`
/// pairs. Outputs of different users are drawn independently given `(X, S)`;
/// the rate only depends on the per-user marginals.
pub fn attach_channel<F>(input_law: &JointPmf<(u8, u8, Vec<u8>)>, channel: F) -> Result<JointPmf<GpOutcome>>
where
    F: Fn(usize, u8, &[u8]) -> Vec<(u8, f64)>,
{
    let mut atoms = Vec::new();
    for ((u, x, s), p) in input_law.iter() {
        let mut partial: Vec<(Vec<u8>, f64)> = vec![(Vec::with_capacity(s.len()), p)];
        for k in 0..s.len() {
            let law = channel(k, *x, s);
            partial = partial
                .into_iter()
                .flat_map(|(ys, py)| {
                    law.iter().map(move |&(y, pk)| {
                        let mut ys = ys.clone();
                        ys.push(y);
                        (ys, py * pk)
                    })
                })
                .collect();
        }
        atoms.extend(partial.into_iter().map(|(outputs, prob)| {
            (
                GpOutcome {
                    aux: *u,
                    input: *x,
                    states: s.clone(),
                    outputs,
                },
                prob,
            )
        }));
    }
    JointPmf::new(atoms)
}

/// Attaches the binary channel `Y_k = X xor S_k xor Z_k` of `spec`.
pub fn attach_binary_channel(
    spec: &BinaryChannelSpec,
    input_law: &JointPmf<(u8, u8, Vec<u8>)>,
) -> Result<JointPmf<GpOutcome>> {
    let p = spec.noise_or_zero();
    attach_channel(input_law, |k, x, s| {
        let clean = x ^ s[k];
        vec![(clean, 1.0 - p), (1 - clean, p)]
    })
}

/// The four-letter auxiliary that precancels `S_1` or `S_2` on a fair coin:
/// with `A` and `X` fair and independent of `S`,
/// `U = 0` if `A = 1, X xor S_1 = 1`; `U = 1` if `A = 1, X xor S_1 = 0`;
/// `U = 2` if `A = 0, X xor S_2 = 1`; `U = 3` if `A = 0, X xor S_2 = 0`.
pub fn precancellation_joint(spec: &BinaryChannelSpec) -> Result<JointPmf<GpOutcome>> {
    if spec.users() != 2 {
        return Err(Error::UnsupportedUsers {
            op: "precancellation_joint",
            k: spec.users(),
        });
    }
    let mut atoms = Vec::new();
    for (s, ps) in spec.state_pmf().iter() {
        for a in 0..2u8 {
            for x in 0..2u8 {
                let u = if a == 1 { 1 - (x ^ s[0]) } else { 3 - (x ^ s[1]) };
                atoms.push(((u, x, s.clone()), 0.25 * ps));
            }
        }
    }
    attach_binary_channel(spec, &JointPmf::new(atoms)?)
}

/// Rate of [`precancellation_joint`] in closed form:
/// `1 - H(p)/2 - H(q' * p)/2` with `q' = Pr{S_1 xor S_2 = 1}`.
pub fn precancellation_rate(spec: &BinaryChannelSpec) -> Result<f64> {
    let p = spec.noise_or_zero();
    let q_xor = spec.xor_crossover()?;
    Ok(1.0 - 0.5 * crate::entropy::h2(p) - 0.5 * crate::entropy::h2(xor_convolve(q_xor, p)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::binary::{capacity_two_user, noisy_two_user_bounds};
    use approx::assert_abs_diff_eq;

    fn uniform_input_law(states: Vec<u8>, aux: impl Fn(u8) -> u8) -> JointPmf<(u8, u8, Vec<u8>)> {
        JointPmf::uniform((0..2u8).map(|x| (aux(x), x, states.clone()))).unwrap()
    }

    #[test]
    fn independent_aux_gives_zero() {
        let spec = BinaryChannelSpec::iid(2, 0.3).unwrap();
        let atoms: Vec<_> = spec
            .state_pmf()
            .iter()
            .flat_map(|(s, p)| {
                let s = s.clone();
                (0..4u8).map(move |ux| ((ux >> 1, ux & 1, s.clone()), p / 4.0))
            })
            .collect();
        let joint = attach_binary_channel(&spec, &JointPmf::new(atoms).unwrap()).unwrap();
        assert_abs_diff_eq!(gp_rate(&joint).unwrap(), 0.0, epsilon = 1e-12);
    }

    #[test]
    fn clean_point_to_point() {
        let spec = BinaryChannelSpec::iid(2, 0.0).unwrap();
        let joint = attach_binary_channel(&spec, &uniform_input_law(vec![0, 0], |x| x)).unwrap();
        assert_abs_diff_eq!(gp_rate(&joint).unwrap(), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn precancellation_reaches_capacity() {
        for q in [0.1, 0.25, 0.4] {
            let spec = BinaryChannelSpec::iid(2, q).unwrap();
            let rate = gp_rate(&precancellation_joint(&spec).unwrap()).unwrap();
            assert_abs_diff_eq!(rate, capacity_two_user(&spec).unwrap().value(), epsilon = 1e-9);
        }
        assert_abs_diff_eq!(
            gp_rate(&precancellation_joint(&BinaryChannelSpec::iid(2, 0.25).unwrap()).unwrap()).unwrap(),
            0.522783,
            epsilon = 1e-6
        );
    }

    #[test]
    fn precancellation_with_noise_reaches_noisy_lower_bound() {
        let spec = BinaryChannelSpec::iid(2, 0.25).unwrap().with_noise(0.1).unwrap();
        let rate = gp_rate(&precancellation_joint(&spec).unwrap()).unwrap();
        let (lower, _) = noisy_two_user_bounds(&spec).unwrap();
        assert_abs_diff_eq!(rate, lower.value(), epsilon = 1e-12);
        assert_abs_diff_eq!(rate, precancellation_rate(&spec).unwrap(), epsilon = 1e-12);
    }

    #[test]
    fn asymmetric_pair_joint() {
        let pmf = JointPmf::new([((0, 0), 0.5), ((0, 1), 0.1), ((1, 0), 0.15), ((1, 1), 0.25)]).unwrap();
        let spec = BinaryChannelSpec::pair_joint(pmf).unwrap();
        let rate = gp_rate(&precancellation_joint(&spec).unwrap()).unwrap();
        assert_abs_diff_eq!(rate, capacity_two_user(&spec).unwrap().value(), epsilon = 1e-9);
    }

    #[test]
    fn markov_violation_is_rejected() {
        // U copies Y_1 directly while X and S are constant.
        let atoms = (0..2u8).map(|y| {
            (
                GpOutcome {
                    aux: y,
                    input: 0,
                    states: vec![0, 0],
                    outputs: vec![y, 0],
                },
                0.5,
            )
        });
        let joint = JointPmf::new(atoms).unwrap();
        assert!(matches!(gp_rate(&joint), Err(Error::InvalidDistribution(_))));
    }

    #[test]
    fn alphabet_limit() {
        let joint = JointPmf::point_mass(GpOutcome {
            aux: 16,
            input: 0,
            states: vec![0],
            outputs: vec![0],
        });
        assert!(gp_rate(&joint).is_err());
        let ragged = JointPmf::point_mass(GpOutcome {
            aux: 0,
            input: 0,
            states: vec![0, 0],
            outputs: vec![0],
        });
        assert!(gp_rate(&ragged).is_err());
    }

    #[test]
    fn three_users_supported() {
        let spec = BinaryChannelSpec::fully_correlated(3, 0.3, false).unwrap();
        // S_1 = S_2 = S_3: precancel S_1 for everyone.
        let atoms: Vec<_> = spec
            .state_pmf()
            .iter()
            .flat_map(|(s, p)| {
                let s = s.clone();
                (0..2u8).map(move |x| ((x ^ s[0], x, s.clone()), p / 2.0))
            })
            .collect();
        let joint = attach_binary_channel(&spec, &JointPmf::new(atoms).unwrap()).unwrap();
        assert_abs_diff_eq!(gp_rate(&joint).unwrap(), 1.0, epsilon = 1e-12);
    }
}
