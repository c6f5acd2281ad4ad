//! Discrete entropies in bits.

use std::collections::BTreeMap;

use crate::error::{check_probability, Error, Result};

/// Tolerance on the total mass of a [`JointPmf`].
pub const PMF_SUM_TOLERANCE: f64 = 1e-12;

/// `-p log2 p` with `0 log 0 = 0`.
#[inline]
pub(crate) fn plogp(p: f64) -> f64 {
    if p > 0.0 {
        -p * p.log2()
    } else {
        0.0
    }
}

/// Binary entropy without the domain check. Callers guarantee `q` in `[0, 1]`.
#[inline]
pub(crate) fn h2(q: f64) -> f64 {
    plogp(q) + plogp(1.0 - q)
}

/// `H(q) = -q log2 q - (1-q) log2 (1-q)`.
pub fn binary_entropy(q: f64) -> Result<f64> {
    check_probability("q", q).map(h2)
}

/// Distribution of the XOR of two independent bits with parameters `a` and `b`.
#[inline]
pub fn xor_convolve(a: f64, b: f64) -> f64 {
    a * (1.0 - b) + b * (1.0 - a)
}

/// A finite probability mass function over an ordered outcome type.
///
/// Outcomes are kept in a `BTreeMap`, so iteration order and therefore every
/// derived sum is deterministic.
#[derive(Debug, Clone, PartialEq)]
pub struct JointPmf<T: Ord> {
    prob: BTreeMap<T, f64>,
}

impl<T: Ord + Clone> JointPmf<T> {
    /// Builds a pmf from `(outcome, probability)` pairs. Repeated outcomes
    /// have their masses added.
    pub fn new(atoms: impl IntoIterator<Item = (T, f64)>) -> Result<Self> {
        let mut prob = BTreeMap::new();
        for (outcome, p) in atoms {
            if !(p.is_finite() && p >= 0.0) {
                return Err(Error::InvalidPmf(format!("probability {p} is not in [0, 1]")));
            }
            *prob.entry(outcome).or_insert(0.0) += p;
        }
        if prob.is_empty() {
            return Err(Error::InvalidPmf("empty support".into()));
        }
        let total: f64 = prob.values().sum();
        if (total - 1.0).abs() > PMF_SUM_TOLERANCE {
            return Err(Error::InvalidPmf(format!("total mass {total} differs from 1")));
        }
        Ok(Self { prob })
    }

    pub fn uniform(outcomes: impl IntoIterator<Item = T>) -> Result<Self> {
        let outcomes: Vec<T> = outcomes.into_iter().collect();
        let p = 1.0 / outcomes.len() as f64;
        Self::new(outcomes.into_iter().map(|o| (o, p)))
    }

    pub fn point_mass(outcome: T) -> Self {
        Self {
            prob: BTreeMap::from([(outcome, 1.0)]),
        }
    }

    pub fn prob(&self, outcome: &T) -> f64 {
        self.prob.get(outcome).copied().unwrap_or(0.0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&T, f64)> {
        self.prob.iter().map(|(o, &p)| (o, p))
    }

    pub fn support_len(&self) -> usize {
        self.prob.len()
    }

    /// Pushes the distribution forward through `f`.
    pub fn marginal<U: Ord + Clone>(&self, f: impl Fn(&T) -> U) -> JointPmf<U> {
        let mut prob = BTreeMap::new();
        for (o, &p) in &self.prob {
            *prob.entry(f(o)).or_insert(0.0) += p;
        }
        JointPmf { prob }
    }

    pub fn entropy(&self) -> f64 {
        self.prob.values().map(|&p| plogp(p)).sum()
    }
}

/// Shannon entropy in bits. Zero-probability atoms contribute nothing.
pub fn pmf_entropy<T: Ord + Clone>(p: &JointPmf<T>) -> f64 {
    p.entropy()
}

/// `I(f(O); g(O))` for two functions of the same outcome.
pub(crate) fn mutual_information<T, A, B>(
    p: &JointPmf<T>,
    f: impl Fn(&T) -> A + Copy,
    g: impl Fn(&T) -> B + Copy,
) -> f64
where
    T: Ord + Clone,
    A: Ord + Clone,
    B: Ord + Clone,
{
    let ha = p.marginal(f).entropy();
    let hb = p.marginal(g).entropy();
    let hab = p.marginal(|o| (f(o), g(o))).entropy();
    ha + hb - hab
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    #[test]
    fn binary_entropy_examples() {
        assert_eq!(binary_entropy(0.5).unwrap(), 1.0);
        assert_eq!(binary_entropy(0.0).unwrap(), 0.0);
        assert_eq!(binary_entropy(1.0).unwrap(), 0.0);
        // -0.375 log2 0.375 - 0.625 log2 0.625
        assert_abs_diff_eq!(binary_entropy(0.375).unwrap(), 0.954434, epsilon = 1e-6);
    }

    #[test]
    fn binary_entropy_rejects_out_of_range() {
        assert!(matches!(binary_entropy(-0.1), Err(Error::Domain { .. })));
        assert!(matches!(binary_entropy(1.5), Err(Error::Domain { .. })));
        assert!(binary_entropy(f64::NAN).is_err());
    }

    #[test]
    fn pmf_entropy_examples() {
        let uniform = JointPmf::uniform(0..4).unwrap();
        assert_abs_diff_eq!(pmf_entropy(&uniform), 2.0, epsilon = 1e-15);
        assert_eq!(pmf_entropy(&JointPmf::point_mass('a')), 0.0);
        let skewed = JointPmf::new([(0, 0.4375), (1, 0.1875), (2, 0.1875), (3, 0.1875)]).unwrap();
        // four-term sum evaluated independently: 1.8802408149...
        assert_abs_diff_eq!(pmf_entropy(&skewed), 1.880240815, epsilon = 1e-9);
    }

    #[test]
    fn zero_atoms_contribute_nothing() {
        let p = JointPmf::new([(0, 0.5), (1, 0.5), (2, 0.0)]).unwrap();
        assert_eq!(p.entropy(), 1.0);
    }

    #[test]
    fn rejects_bad_mass() {
        assert!(JointPmf::new([(0, 0.5), (1, 0.4)]).is_err());
        assert!(JointPmf::new([(0, 1.5), (1, -0.5)]).is_err());
        assert!(JointPmf::<u8>::new([]).is_err());
    }

    #[test]
    fn marginal_and_mi() {
        // X uniform bit, Y = X: I = 1; Z independent: I = 0.
        let p = JointPmf::uniform([(0u8, 0u8), (0, 1), (1, 0), (1, 1)]).unwrap();
        assert_abs_diff_eq!(mutual_information(&p, |o| o.0, |o| o.1), 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(mutual_information(&p, |o| o.0, |o| o.0), 1.0, epsilon = 1e-15);
        assert_eq!(p.marginal(|o| o.0).support_len(), 2);
    }

    proptest! {
        #[test]
        fn uniform_entropy_is_log_m(m in 2usize..=64) {
            let p = JointPmf::uniform(0..m).unwrap();
            prop_assert!((p.entropy() - (m as f64).log2()).abs() < 1e-12);
        }
    }
}
