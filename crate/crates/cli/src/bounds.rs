//! `dirtycast bounds`: a table of every applicable bound at one point.

use std::fmt::Write;

use clap::{ArgGroup, Args};
use dirtycast::binary::{self, gp, BinaryChannelSpec};
use dirtycast::correlated::{self, CorrelatedSpec};
use dirtycast::figures::format_number;
use dirtycast::gaussian::{self, gap, GaussianChannelSpec};
use dirtycast::{db_to_linear, RateBound};

use crate::CliError;

#[derive(Debug, Args)]
#[command(group(ArgGroup::new("mode").required(true).args(["binary", "gaussian", "correlated"])))]
#[command(group(ArgGroup::new("snr_value").args(["snr", "snr_db"])))]
#[command(group(ArgGroup::new("inr_value").args(["inr", "inr_db"])))]
pub struct BoundsArgs {
    /// Binary channel Y_k = X xor S_k (xor Z_k).
    #[arg(long)]
    binary: bool,
    /// Gaussian channel Y_k = X + S_k + Z_k.
    #[arg(long)]
    gaussian: bool,
    /// Gaussian channel with correlated interferences.
    #[arg(long)]
    correlated: bool,

    /// Bernoulli parameter of each interference (binary).
    #[arg(long, requires = "binary")]
    q: Option<f64>,
    /// Number of users.
    #[arg(long, default_value_t = 2)]
    k: usize,
    /// Crossover probability of the link noise (binary, two users).
    #[arg(long, requires = "binary")]
    noise_q: Option<f64>,

    /// Linear SNR P.
    #[arg(long)]
    snr: Option<f64>,
    /// SNR P in dB.
    #[arg(long, allow_negative_numbers = true)]
    snr_db: Option<f64>,
    /// Linear INR Q (Gaussian).
    #[arg(long, requires = "gaussian")]
    inr: Option<f64>,
    /// INR Q in dB (Gaussian).
    #[arg(long, allow_negative_numbers = true, requires = "gaussian")]
    inr_db: Option<f64>,
    /// Fixed noise correlation for the feedback bounds (Gaussian).
    #[arg(long, allow_negative_numbers = true, requires = "gaussian")]
    rho: Option<f64>,

    /// Interference power of user 1 (correlated).
    #[arg(long, requires = "correlated")]
    q1: Option<f64>,
    /// Interference power of user 2 (correlated).
    #[arg(long, requires = "correlated")]
    q2: Option<f64>,
    /// Variance of S_1 - S_2 (correlated).
    #[arg(long, requires = "correlated")]
    qd: Option<f64>,
    /// Gain of user 1 in the scaled model S_i = beta_i S_0 (correlated).
    #[arg(long, allow_negative_numbers = true, requires_all = ["correlated", "beta2", "q0"], conflicts_with_all = ["q1", "q2", "qd"])]
    beta1: Option<f64>,
    /// Gain of user 2 in the scaled model.
    #[arg(long, allow_negative_numbers = true, requires = "beta1")]
    beta2: Option<f64>,
    /// Power of S_0 in the scaled model.
    #[arg(long, requires = "beta1")]
    q0: Option<f64>,
}

/// Rows of `name, kind, value, method`.
struct Table {
    title: String,
    rows: Vec<[String; 4]>,
}

impl Table {
    fn new(title: String) -> Self {
        Self { title, rows: Vec::new() }
    }

    fn bound(&mut self, name: &str, b: RateBound) {
        self.rows.push([
            name.to_string(),
            b.kind().to_string(),
            format_number(b.value()),
            b.method().to_string(),
        ]);
    }

    fn value(&mut self, name: &str, v: f64, note: &str) {
        self.rows
            .push([name.to_string(), "-".into(), format_number(v), note.to_string()]);
    }

    fn render(&self) -> String {
        let widths: Vec<usize> = (0..4)
            .map(|c| self.rows.iter().map(|r| r[c].len()).max().unwrap_or(0).max(HEADER[c].len()))
            .collect();
        let mut out = String::new();
        let _ = writeln!(out, "{}", self.title);
        let line = |cells: [&str; 4]| {
            format!(
                "{:<w0$}  {:<w1$}  {:>w2$}  {}",
                cells[0],
                cells[1],
                cells[2],
                cells[3],
                w0 = widths[0],
                w1 = widths[1],
                w2 = widths[2]
            )
        };
        let _ = writeln!(out, "{}", line(HEADER).trim_end());
        for r in &self.rows {
            let _ = writeln!(out, "{}", line([&r[0], &r[1], &r[2], &r[3]]).trim_end());
        }
        out
    }
}

const HEADER: [&str; 4] = ["bound", "kind", "value", "method"];

fn snr(args: &BoundsArgs) -> Result<f64, CliError> {
    match (args.snr, args.snr_db) {
        (Some(p), None) => Ok(p),
        (None, Some(db)) => Ok(db_to_linear(db)),
        _ => Err(CliError::Usage("one of --snr or --snr-db is required".into())),
    }
}

pub fn run(args: &BoundsArgs) -> Result<String, CliError> {
    if args.binary {
        binary_table(args)
    } else if args.gaussian {
        gaussian_table(args)
    } else {
        correlated_table(args)
    }
}

fn binary_table(args: &BoundsArgs) -> Result<String, CliError> {
    let q = args.q.ok_or_else(|| CliError::Usage("--binary requires --q".into()))?;
    let mut spec = BinaryChannelSpec::iid(args.k, q)?;
    if let Some(p) = args.noise_q {
        if args.k != 2 {
            return Err(CliError::Usage("--noise-q is only supported with --k 2".into()));
        }
        spec = spec.with_noise(p)?;
    }
    let noise = args.noise_q.map(|p| format!(", noise {}", format_number(p))).unwrap_or_default();
    let mut t = Table::new(format!(
        "binary multicast: K = {}, i.i.d. Bernoulli({}) interference{noise}",
        args.k,
        format_number(q)
    ));
    if args.k == 2 {
        t.value("H(S1 xor S2)", binary::xor_entropy(&spec)?, "entropy of the interference difference");
        match args.noise_q {
            None => t.bound("capacity", binary::capacity_two_user(&spec)?),
            Some(_) => {
                let (lo, hi) = binary::noisy_two_user_bounds(&spec)?;
                t.bound("noisy_lower", lo);
                t.bound("noisy_upper", hi);
            }
        }
        let rate = gp::gp_rate(&gp::precancellation_joint(&spec)?)?;
        t.value("gp_rate", rate, "Gelfand-Pinsker rate of the precancellation auxiliary");
    } else if args.k > 2 && args.noise_q.is_none() {
        t.bound("upper_k", binary::upper_bound_k(&spec)?);
        t.bound("lower_k", binary::lower_bound_k(&spec)?);
    }
    t.bound("timeshare", binary::rate_timeshare(args.k)?);
    t.bound("ignore_si", binary::rate_ignore_side_info(&spec));
    Ok(t.render())
}

fn gaussian_table(args: &BoundsArgs) -> Result<String, CliError> {
    let p = snr(args)?;
    let q = match (args.inr, args.inr_db) {
        (Some(q), None) => q,
        (None, Some(db)) => db_to_linear(db),
        _ => return Err(CliError::Usage("one of --inr or --inr-db is required".into())),
    };
    let spec = GaussianChannelSpec::new(p, q)?.with_users(args.k)?;
    let mut t = Table::new(format!(
        "Gaussian multicast: K = {}, P = {}, Q = {}",
        args.k,
        format_number(p),
        format_number(q)
    ));
    if args.k == 2 {
        t.bound("upper_i", gaussian::upper_i(&spec));
        t.bound("upper_ii", gaussian::upper_ii(&spec));
        t.bound("trivial", gaussian::trivial_upper(&spec));
        t.bound("upper_envelope", gaussian::upper_envelope(&spec));
        t.bound("lower", gaussian::lower_bound(&spec));
        let split = gaussian::optimal_split(&spec);
        t.value("optimal_p_a", split.p_a(), "power of the common DPC stream");
        t.value("optimal_p_d", split.p_d(), "power of the time-shared stream");
        t.value("gap", gap::gap(&spec), "upper_ii - lower");
        if p > 0.0 {
            t.value("high_sinr_asymptote", gaussian::high_sinr_asymptote(&spec)?, "capacity as P grows");
        }
    } else {
        t.bound("upper_k", gaussian::upper_k(&spec));
    }
    t.bound("timeshare", gaussian::rate_timeshare(&spec));
    t.bound("interference_as_noise", gaussian::rate_interference_as_noise(&spec));
    if let Some(rho) = args.rho {
        let (fb_i, fb_ii) = gaussian::feedback_bounds(&spec, rho)?;
        t.bound("feedback_upper_i", fb_i);
        t.bound("feedback_upper_ii", fb_ii);
    }
    Ok(t.render())
}

fn correlated_table(args: &BoundsArgs) -> Result<String, CliError> {
    let p = snr(args)?;
    let spec = match (args.beta1, args.beta2, args.q0) {
        (Some(b1), Some(b2), Some(q0)) => CorrelatedSpec::from_beta(p, b1, b2, q0)?,
        _ => match (args.q1, args.q2, args.qd) {
            (Some(q1), Some(q2), Some(qd)) => CorrelatedSpec::new(p, q1, q2, qd)?,
            _ => {
                return Err(CliError::Usage(
                    "--correlated requires --q1, --q2 and --qd, or --beta1, --beta2 and --q0".into(),
                ))
            }
        },
    };
    let mut t = Table::new(format!(
        "correlated interference: P = {}, Q1 = {}, Q2 = {}, Qd = {}",
        format_number(p),
        format_number(spec.q1()),
        format_number(spec.q2()),
        format_number(spec.qd())
    ));
    t.value("T(Qd)", correlated::t_of_qd(spec.qd())?, "loss from the interference difference");
    t.bound("upper", correlated::upper_correlated(&spec));
    t.bound("lower", correlated::lower_beta_for(&spec)?);
    if p > 0.0 {
        t.value("gap", correlated::high_sinr_gap_beta(&spec)?, "upper - lower");
    }
    let g = GaussianChannelSpec::new(p, 0.0)?;
    t.bound("timeshare", gaussian::rate_timeshare(&g));
    Ok(t.render())
}
