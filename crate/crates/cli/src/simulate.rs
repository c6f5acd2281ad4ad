//! `dirtycast simulate`: drives the binary scheme simulator.

use std::fmt::Write as _;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, ValueEnum};
use dirtycast::binary::sim::{self, CodebookKind, CrossoverReport, SchemeRun};
use dirtycast::binary::BinaryChannelSpec;
use dirtycast::figures::format_number;

use crate::{emit, write_file, CliError};

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Codebook {
    Random,
    Linear,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    /// Bernoulli parameter of both interferences.
    #[arg(long)]
    q: f64,
    /// Crossover probability of the link noise.
    #[arg(long)]
    noise_q: Option<f64>,
    /// Blocklength.
    #[arg(long)]
    n: usize,
    /// Code rate in bits per channel use (ignored with --mi-only).
    #[arg(long, default_value_t = 0.25)]
    rate: f64,
    /// Number of independent trials.
    #[arg(long, default_value_t = 1)]
    trials: usize,
    /// Master seed; trial t uses its own stream derived from it.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Only measure crossover statistics, without coding and decoding.
    #[arg(long)]
    mi_only: bool,
    /// Codebook ensemble.
    #[arg(long, value_enum, default_value_t = Codebook::Random)]
    codebook: Codebook,
    /// Also write the report as `key,value` CSV.
    #[arg(long)]
    csv: Option<PathBuf>,
}

fn crossover_lines(r: &CrossoverReport, rows: &mut Vec<(&'static str, String)>) {
    let z = (r.empirical_crossover() - r.predicted_crossover) / r.sigma().max(f64::MIN_POSITIVE);
    rows.push(("interfered_symbols", r.interfered_symbols.to_string()));
    rows.push(("empirical_crossover", format_number(r.empirical_crossover())));
    rows.push(("predicted_crossover", format_number(r.predicted_crossover)));
    rows.push(("crossover_sigma", format_number(r.sigma())));
    rows.push(("crossover_z", format_number(z)));
    rows.push(("clean_symbols", r.clean_symbols.to_string()));
    rows.push(("empirical_clean_crossover", format_number(r.empirical_clean_crossover())));
    rows.push(("predicted_clean_crossover", format_number(r.predicted_clean_crossover)));
    rows.push(("empirical_mi", format_number(r.empirical_mi())));
    rows.push(("predicted_mi", format_number(r.predicted_mi())));
    let rel = (r.empirical_mi() - r.predicted_mi()).abs() / r.predicted_mi().max(f64::MIN_POSITIVE);
    rows.push(("mi_relative_error", format_number(rel)));
}

pub fn run(args: &SimulateArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let mut spec = BinaryChannelSpec::iid(2, args.q)?;
    if let Some(p) = args.noise_q {
        spec = spec.with_noise(p)?;
    }
    let mut rows: Vec<(&'static str, String)> = vec![
        ("q", format_number(args.q)),
        ("noise_q", format_number(args.noise_q.unwrap_or(0.0))),
        ("n", args.n.to_string()),
        ("trials", args.trials.to_string()),
        ("seed", args.seed.to_string()),
    ];
    if args.mi_only {
        let report = sim::measure_crossover(&spec, args.n, args.trials, args.seed)?;
        crossover_lines(&report, &mut rows);
    } else {
        let kind = match args.codebook {
            Codebook::Random => CodebookKind::Random,
            Codebook::Linear => CodebookKind::RandomLinear,
        };
        let run = SchemeRun::new(args.n, args.rate, args.trials, args.seed)?.with_codebook(kind);
        let report = sim::simulate_scheme(&spec, &run)?;
        rows.push(("rate", format_number(args.rate)));
        rows.push(("codewords", report.codewords.to_string()));
        rows.push((
            "codebook",
            match args.codebook {
                Codebook::Random => "random",
                Codebook::Linear => "linear",
            }
            .to_string(),
        ));
        crossover_lines(&report.crossover, &mut rows);
        rows.push(("frame_errors_user1", report.frame_errors[0].to_string()));
        rows.push(("frame_errors_user2", report.frame_errors[1].to_string()));
        rows.push(("fer_user1", format_number(report.frame_error_rate(0))));
        rows.push(("fer_user2", format_number(report.frame_error_rate(1))));
        rows.push(("fer_any", format_number(report.frame_error_rate_any())));
    }

    let width = rows.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
    let mut text = String::new();
    for (k, v) in &rows {
        let _ = writeln!(text, "{k:<width$}  {v}");
    }
    emit(out, &text)?;
    if let Some(path) = &args.csv {
        let mut csv = String::from("key,value\n");
        for (k, v) in &rows {
            let _ = writeln!(csv, "{k},{v}");
        }
        write_file(path, &csv)?;
    }
    Ok(())
}
