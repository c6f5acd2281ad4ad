//! Self-check suite: every module invariant, run against its oracle.
//!
//! Each check is cheap (the whole suite runs in a few seconds in release
//! builds) and deterministic.

use std::fmt;

use rand::Rng;

use crate::binary::{self, gp, sim, BinaryChannelSpec};
use crate::correlated::{self, CorrelatedSpec};
use crate::entropy::{binary_entropy, JointPmf};
use crate::gaussian::{self, dpc, gap, GaussianChannelSpec, PowerSplit};
use crate::gaussian_mi::{gaussian_mi, GaussianCov};
use crate::optimize::{minimize_scalar, ScalarInterval};
use crate::rng::trial_rng;

/// Outcome of one named check.
#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = if self.passed { "PASS" } else { "FAIL" };
        write!(f, "[{tag}] {}: {}", self.name, self.detail)
    }
}

/// Records the worst deviation seen against a tolerance.
struct Worst {
    value: f64,
    at: String,
}

impl Worst {
    fn new() -> Self {
        Self {
            value: 0.0,
            at: String::new(),
        }
    }

    fn see(&mut self, err: f64, at: impl FnOnce() -> String) {
        if !(err <= self.value) {
            self.value = err;
            self.at = at();
        }
    }

    fn check(self, name: &'static str, tol: f64) -> Check {
        Check {
            name,
            passed: self.value <= tol,
            detail: if self.at.is_empty() {
                format!("max deviation {:.3e} (tol {tol:.0e})", self.value)
            } else {
                format!("max deviation {:.3e} at {} (tol {tol:.0e})", self.value, self.at)
            },
        }
    }
}

fn check(name: &'static str, passed: bool, detail: String) -> Check {
    Check { name, passed, detail }
}

/// `P` grid of the Gaussian sweeps: 20 log-spaced points on `[0.1, 1e4]`.
pub fn p_grid() -> Vec<f64> {
    gap::logspace(0.1, 1e4, 20)
}

/// `Q` grid of the Gaussian sweeps: `0` plus 20 log-spaced points on `[0.1, 1e4]`.
pub fn q_grid() -> Vec<f64> {
    std::iter::once(0.0).chain(gap::logspace(0.1, 1e4, 20)).collect()
}

/// Runs every check in a fixed order.
pub fn run_all() -> Vec<Check> {
    let mut out = Vec::new();
    out.extend(core_checks());
    out.extend(binary_checks());
    out.extend(gaussian_checks());
    out.extend(correlated_checks());
    out
}

pub fn core_checks() -> Vec<Check> {
    let mut uniform = Worst::new();
    for m in 2..=64usize {
        let p = JointPmf::uniform(0..m).expect("uniform pmf");
        uniform.see((p.entropy() - (m as f64).log2()).abs(), || format!("m = {m}"));
    }

    let mut rng = trial_rng(0x5eed, 0);
    let mut asym = Worst::new();
    let mut negative = Worst::new();
    for trial in 0..200 {
        let dim = rng.random_range(2..=8usize);
        let rank = rng.random_range(dim..=dim + 3);
        let loadings: Vec<Vec<f64>> = (0..dim)
            .map(|_| (0..rank).map(|_| rng.random_range(-1.0..1.0)).collect())
            .collect();
        let cov = GaussianCov::from_loadings(&loadings, &vec![1.0; rank]).expect("PSD by construction");
        let split = rng.random_range(1..dim);
        let a: Vec<usize> = (0..split).collect();
        let b: Vec<usize> = (split..dim).collect();
        if let (Ok(ab), Ok(ba)) = (gaussian_mi(&cov, &a, &b), gaussian_mi(&cov, &b, &a)) {
            asym.see((ab - ba).abs(), || format!("trial {trial}"));
            negative.see((-ab).max(0.0), || format!("trial {trial}"));
        }
    }

    let mut rho_i = Worst::new();
    let mut rho_ii = Worst::new();
    let domain = ScalarInterval::new(-1.0, 1.0).expect("static interval");
    for p in [0.1, 1.0, 10.0, 100.0, 2000.0] {
        for q in [0.1, 0.5, 1.0, 2.0, 4.0, 8.0, 100.0] {
            let spec = GaussianChannelSpec::new(p, q).expect("valid point");
            let m = minimize_scalar(|r| gaussian::upper_i_at_rho(&spec, r).unwrap_or(f64::NAN), domain);
            rho_i.see((m.arg - gaussian::rho_star_upper_i(q)).abs(), || format!("P={p}, Q={q}"));
            let m = minimize_scalar(|r| gaussian::upper_ii_at_rho(&spec, r).unwrap_or(f64::NAN), domain);
            rho_ii.see((m.arg - gaussian::rho_star_upper_ii_exact(&spec)).abs(), || {
                format!("P={p}, Q={q}")
            });
        }
    }

    vec![
        check(
            "core.binary_entropy",
            binary_entropy(0.5) == Ok(1.0) && binary_entropy(1.5).is_err(),
            "H(1/2) = 1, domain enforced".into(),
        ),
        uniform.check("core.uniform_entropy_log_m", 1e-12),
        asym.check("core.gaussian_mi_symmetric", 1e-9),
        negative.check("core.gaussian_mi_nonnegative", 1e-9),
        rho_i.check("core.minimize_scalar_rho_star_upper_i", 1e-4),
        rho_ii.check("core.minimize_scalar_rho_star_upper_ii", 1e-4),
    ]
}

pub fn binary_checks() -> Vec<Check> {
    let qs: Vec<f64> = (0..=10).map(|i| i as f64 * 0.05).collect();
    let mut order = Worst::new();
    let mut sandwich = Worst::new();
    for k in 2..=10 {
        for &q in &qs {
            let spec = BinaryChannelSpec::iid(k, q).expect("valid spec");
            let lo = binary::lower_bound_k(&spec).expect("iid").value();
            let hi = binary::upper_bound_k(&spec).expect("iid").value();
            order.see((lo - hi).max(0.0), || format!("K={k}, q={q}"));
            let h = binary_entropy(q).expect("q in range");
            let joint = binary::xor_pattern_entropy(k, q).expect("K in range") / k as f64;
            let below = (1.0 - 1.0 / k as f64) * h - joint;
            let above = joint - h;
            sandwich.see(below.max(above).max(0.0), || format!("K={k}, q={q}"));
        }
    }

    let mut limit = Worst::new();
    for &q in &qs {
        let spec = BinaryChannelSpec::iid(64, q).expect("valid spec");
        let h = binary_entropy(q).expect("q in range");
        let dev = (binary::upper_bound_k(&spec).expect("iid").value() - (1.0 - h)).abs();
        limit.see((dev - h / 64.0).max(0.0), || format!("q={q}"));
    }

    let mut gp_match = Worst::new();
    let mut gp_specs: Vec<BinaryChannelSpec> = [0.1, 0.25, 0.4]
        .iter()
        .map(|&q| BinaryChannelSpec::iid(2, q).expect("valid spec"))
        .collect();
    for atoms in [
        [0.5, 0.1, 0.15, 0.25],
        [0.1, 0.2, 0.3, 0.4],
        [0.7, 0.0, 0.05, 0.25],
    ] {
        let pmf = JointPmf::new([((0, 0), atoms[0]), ((0, 1), atoms[1]), ((1, 0), atoms[2]), ((1, 1), atoms[3])])
            .expect("valid pmf");
        gp_specs.push(BinaryChannelSpec::pair_joint(pmf).expect("binary pairs"));
    }
    for (i, spec) in gp_specs.iter().enumerate() {
        let rate = gp::precancellation_joint(spec)
            .and_then(|j| gp::gp_rate(&j))
            .unwrap_or(f64::NAN);
        let cap = binary::capacity_two_user(spec).expect("two users").value();
        gp_match.see((rate - cap).abs(), || format!("spec #{i}"));
    }

    let mut enumeration = Worst::new();
    for k in 1..=12 {
        for &q in &qs {
            let fast = binary::xor_pattern_entropy(k, q).expect("K in range");
            let slow = binary::xor_pattern_entropy_brute_force(k, q).expect("K in range");
            enumeration.see((fast - slow).abs(), || format!("K={k}, q={q}"));
        }
    }

    let spec = BinaryChannelSpec::iid(2, 0.25).expect("valid spec");
    let mi_check = match sim::measure_crossover(&spec, 100_000, 1, 7) {
        Ok(r) => {
            let rel = (r.empirical_mi() - r.predicted_mi()).abs() / r.predicted_mi();
            check(
                "binary.simulated_mi_within_1pct",
                rel <= 0.01,
                format!(
                    "estimate {:.6} vs {:.6} (rel {:.2e}); crossover {:.5} vs 0.375 ({:.2} sigma)",
                    r.empirical_mi(),
                    r.predicted_mi(),
                    rel,
                    r.empirical_crossover(),
                    (r.empirical_crossover() - 0.375).abs() / r.sigma()
                ),
            )
        }
        Err(e) => check("binary.simulated_mi_within_1pct", false, e.to_string()),
    };

    vec![
        order.check("binary.lower_le_upper_k", 0.0),
        sandwich.check("binary.rate_gap_sandwich", 1e-12),
        limit.check("binary.k64_limit", 1e-9),
        gp_match.check("binary.gp_rate_equals_capacity", 1e-9),
        enumeration.check("binary.weight_classes_vs_brute_force", 1e-12),
        mi_check,
    ]
}

pub fn gaussian_checks() -> Vec<Check> {
    let (ps, qs) = (p_grid(), q_grid());
    let mut ordering = Worst::new();
    let mut upper_i = Worst::new();
    let mut upper_ii = Worst::new();
    let mut lower = Worst::new();
    for &p in &ps {
        for &q in &qs {
            let s = GaussianChannelSpec::new(p, q).expect("valid point");
            let lo = gaussian::lower_bound(&s).value();
            let base = gaussian::rate_timeshare(&s).value().max(gaussian::rate_interference_as_noise(&s).value());
            let env = gaussian::upper_envelope(&s).value();
            ordering.see((base - lo).max(lo - env - 1e-9).max(0.0), || format!("P={p:.4}, Q={q:.4}"));
            upper_i.see((gaussian::upper_i(&s).value() - gaussian::upper_i_numeric(&s).value).abs(), || {
                format!("P={p:.4}, Q={q:.4}")
            });
            upper_ii.see(
                (gaussian::upper_ii(&s).value() - gaussian::upper_ii_numeric(&s).value).abs(),
                || format!("P={p:.4}, Q={q:.4}"),
            );
            lower.see((lo - gaussian::lower_bound_numeric(&s).value).abs(), || format!("P={p:.4}, Q={q:.4}"));
        }
    }

    let mut continuity = Worst::new();
    for &p in &ps {
        let lb = |q: f64| gaussian::lower_bound(&GaussianChannelSpec::new(p, q).expect("valid")).value();
        for q in [2.0, 2.0 * (p + 1.0)] {
            continuity.see((lb(q) - lb(q * (1.0 - 1e-14))).abs(), || format!("lower, P={p:.4}, Q={q:.4}"));
        }
        let s = GaussianChannelSpec::new(p, 4.0).expect("valid");
        let left = gaussian::upper_i_at_rho(&s, 1.0).expect("rho in range");
        continuity.see((gaussian::upper_i(&s).value() - left).abs(), || format!("upper I, P={p:.4}"));
        let s = GaussianChannelSpec::new(p, 2.0).expect("valid");
        let right = gaussian::upper_ii_at_rho(&s, 1.0).expect("rho in range");
        continuity.see((gaussian::upper_ii_branch(&s).value() - right).abs(), || {
            format!("upper II, P={p:.4}")
        });
    }

    let mut rng = trial_rng(0xd9c, 0);
    let mut oracle = Worst::new();
    for i in 0..100 {
        let split = PowerSplit::new(rng.random_range(0.0..100.0), rng.random_range(0.0..100.0)).expect("nonnegative");
        let q = rng.random_range(0.0..100.0);
        let (ca, cd) = dpc::dpc_rates_closed_form(split, q);
        match dpc::dpc_scheme_oracle(split, q) {
            Ok((ra, rd)) => oracle.see((ra - ca).abs().max((rd - cd).abs()), || format!("triple #{i}")),
            Err(_) => oracle.see(f64::INFINITY, || format!("triple #{i} (singular)")),
        }
    }

    let mut rd_lemma = Worst::new();
    for i in 0..300 {
        let q = 10f64.powf(rng.random_range(-1.0..3.0));
        let p = 10f64.powf(rng.random_range(-2.0..2.0));
        let rho = rng.random_range(-0.99..1.0);
        let share: f64 = rng.random();
        let c = (share * p / q).sqrt() * if rng.random_bool(0.5) { 1.0 } else { -1.0 };
        let ch = dpc::SumTestChannel {
            q,
            c,
            w: (p - c * c * q).max(0.0),
            rho,
        };
        let mi = ch.information().unwrap_or(f64::NAN);
        rd_lemma.see((ch.floor(p) - mi).max(0.0), || format!("channel #{i}"));
    }

    let mut noise = Worst::new();
    for rho in [-1.0, -0.5, 0.0, 0.3, 1.0] {
        let m = dpc::sum_difference_noise_cov(rho).expect("rho in range");
        let dev = (m[0][0] - (1.0 + rho)).abs().max((m[1][1] - (1.0 - rho)).abs()).max(m[0][1].abs());
        noise.see(dev, || format!("rho={rho}"));
    }

    let mut convergence = Worst::new();
    for q in [1.0, 8.0, 100.0] {
        let g = gap::gap(&GaussianChannelSpec::new(1e8, q).expect("valid"));
        convergence.see(g, || format!("Q={q}"));
    }

    let constant = gap::universal_gap();
    let sup = gap::sup_gap_on_grid(&gap::logspace(1e-2, 1e8, 401), &gap::logspace(1e-2, 1e9, 441));
    let peak = gap::regional_peak_closed_form();
    let peak_gap = gap::gap(&GaussianChannelSpec::new(peak.p, 2.0).expect("valid"));

    let mut k_user = Worst::new();
    for p in [0.1, 1.0, 10.0, 1e3] {
        for q in [0.5, 3.0, 100.0] {
            let s = GaussianChannelSpec::new(p, q).expect("valid");
            let k2 = gaussian::upper_k(&s).value();
            let trivial = gaussian::trivial_upper(&s).value();
            let reference = gaussian::upper_ii_at_rho(&s, 1.0).expect("rho in range").min(trivial);
            k_user.see((k2 - reference).abs(), || format!("P={p}, Q={q}"));
        }
    }
    for p in [1.0, 10.0] {
        let s = GaussianChannelSpec::new(p, 1e10).expect("valid").with_users(4).expect("K >= 2");
        let ts = 0.25 * 0.5 * (1.0 + p).log2();
        k_user.see(((gaussian::upper_k(&s).value() - ts).abs() - 1e-3).max(0.0), || format!("limit P={p}"));
    }

    vec![
        ordering.check("gaussian.ordering_grid", 0.0),
        upper_i.check("gaussian.upper_i_closed_vs_numeric", 1e-5),
        upper_ii.check("gaussian.upper_ii_closed_vs_numeric", 1e-5),
        lower.check("gaussian.lower_closed_vs_simplex", 1e-5),
        continuity.check("gaussian.branch_continuity", 1e-9),
        oracle.check("gaussian.dpc_oracle_vs_closed_form", 1e-9),
        rd_lemma.check("gaussian.rate_distortion_floor", 1e-9),
        noise.check("gaussian.sum_difference_noise", 1e-15),
        convergence.check("gaussian.gap_at_high_snr", 0.002),
        check(
            "gaussian.universal_gap",
            (constant - 0.77163).abs() <= 1e-3 && sup.gap <= constant && sup.gap >= 0.74,
            format!(
                "constant {constant:.6}; grid sup {:.6} at P={:.4e}, Q={:.4e}",
                sup.gap, sup.p, sup.q
            ),
        ),
        check(
            "gaussian.regional_gap_peak",
            (peak.gap - 0.59479).abs() <= 1e-3 && (peak_gap - peak.gap).abs() <= 1e-9,
            format!("gap {peak_gap:.6} at P={:.6}, Q=2", peak.p),
        ),
        k_user.check("gaussian.upper_k_consistency", 1e-12),
    ]
}

pub fn correlated_checks() -> Vec<Check> {
    let t4 = correlated::t_of_qd(4.0).expect("nonnegative");
    let t_left = correlated::t_of_qd(4.0 * (1.0 - 1e-14)).expect("nonnegative");
    let t_right = correlated::t_of_qd(4.0 * (1.0 + 1e-14)).expect("nonnegative");
    let mut monotone = true;
    let mut prev = 0.0;
    for i in 0..=1000 {
        let t = correlated::t_of_qd(i as f64 * 0.05).expect("nonnegative");
        monotone &= t >= prev;
        prev = t;
    }

    let mut bridge = Worst::new();
    for &p in &p_grid() {
        for &qd in &q_grid() {
            let lb = correlated::lower_beta(p, qd).expect("valid").value();
            let g = gaussian::lower_bound(&GaussianChannelSpec::new(p, qd / 2.0).expect("valid")).value();
            bridge.see((lb - g).abs(), || format!("P={p:.4}, Qd={qd:.4}"));
        }
    }

    let mut order = Worst::new();
    let mut beta = Worst::new();
    for &p in &p_grid() {
        for &q0 in &[0.1, 1.0, 10.0, 100.0] {
            for b2 in [0.0, 0.5, 0.9, 1.0, 1.5] {
                let spec = CorrelatedSpec::from_beta(p, 1.0, b2, q0).expect("feasible by construction");
                let lo = correlated::lower_beta(p, spec.qd()).expect("valid").value();
                order.see((lo - correlated::upper_correlated(&spec).value()).max(0.0), || {
                    format!("P={p:.4}, Q0={q0}, beta2={b2}")
                });
                let params = spec.beta().expect("beta parameterization");
                let direct = (params.beta1 - params.beta2).powi(2) * q0;
                let rebuilt = (params.beta_a() + params.beta_d() - params.beta1)
                    .abs()
                    .max((params.beta_a() - params.beta_d() - params.beta2).abs());
                beta.see((spec.qd() - direct).abs().max(rebuilt), || format!("Q0={q0}, beta2={b2}"));
            }
        }
    }

    let mut sinr = Worst::new();
    for (q, qd) in [(10.0, 10.0), (25.0, 100.0), (10.0, 0.0)] {
        let spec = CorrelatedSpec::symmetric(1e8, q, qd).expect("feasible");
        sinr.see(correlated::high_sinr_gap_beta(&spec).unwrap_or(f64::NAN), || format!("Q={q}, Qd={qd}"));
    }

    vec![
        check(
            "correlated.t_continuity_and_monotonicity",
            (t4 - 0.5).abs() <= 1e-12 && (t_left - t_right).abs() <= 1e-9 && monotone,
            format!("T(4) = {t4}, monotone on [0, 50]: {monotone}"),
        ),
        bridge.check("correlated.lower_beta_equals_gaussian_lower", 1e-12),
        order.check("correlated.lower_le_upper", 1e-9),
        beta.check("correlated.beta_parameterization", 1e-12),
        sinr.check("correlated.high_sinr_gap", 0.01),
    ]
}
