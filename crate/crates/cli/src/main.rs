//! `dirtycast`: bounds, figures, scheme simulation and self-checks for
//! multicasting with transmitter-known interference.

mod bounds;
mod simulate;
mod svg;

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use dirtycast::figures::{figure_data, Figure};
use dirtycast::verify;

#[derive(Debug, Parser)]
#[command(name = "dirtycast", version, about = "Capacity bounds for multicasting with known interference")]
struct Cli {
    /// Worker threads for parallel sections (does not change any output).
    #[arg(long, global = true, env = "DIRTYCAST_THREADS")]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Print every applicable bound at one operating point.
    Bounds(bounds::BoundsArgs),
    /// Regenerate the data of one rate plot as CSV (and optionally SVG).
    Figure(FigureArgs),
    /// Simulate the binary time-shared precancellation scheme.
    Simulate(simulate::SimulateArgs),
    /// Run the full invariant suite; exit status 1 if any check fails.
    Verify,
}

#[derive(Debug, Args)]
struct FigureArgs {
    /// fig2, fig4, fig5 or fig6.
    name: Figure,
    /// CSV destination; standard output when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Also write an SVG plot here.
    #[arg(long)]
    svg: Option<PathBuf>,
    /// Logarithmic x axis in the SVG.
    #[arg(long, requires = "svg")]
    log_x: bool,
}

/// Failure categories and their exit statuses.
#[derive(Debug)]
pub enum CliError {
    /// Invalid parameters (2).
    Usage(String),
    /// Reading or writing files (3).
    Io { path: PathBuf, source: io::Error },
    /// A verification check failed (1).
    Failed(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Failed(_) => 1,
            CliError::Usage(_) => 2,
            CliError::Io { .. } => 3,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(msg) | CliError::Failed(msg) => f.write_str(msg),
            CliError::Io { path, source } => write!(f, "{}: {source}", path.display()),
        }
    }
}

impl From<dirtycast::Error> for CliError {
    fn from(e: dirtycast::Error) -> Self {
        CliError::Usage(e.to_string())
    }
}

fn write_file(path: &Path, contents: &str) -> Result<(), CliError> {
    fs::write(path, contents).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn emit(out: &mut dyn Write, text: &str) -> Result<(), CliError> {
    out.write_all(text.as_bytes()).map_err(|source| CliError::Io {
        path: PathBuf::from("<stdout>"),
        source,
    })
}

fn run_figure(args: &FigureArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let data = figure_data(args.name);
    let csv = data.to_csv();
    match &args.out {
        Some(path) => write_file(path, &csv)?,
        None => emit(out, &csv)?,
    }
    if let Some(path) = &args.svg {
        write_file(path, &svg::render(&data, svg::SvgOptions { log_x: args.log_x }))?;
    }
    Ok(())
}

fn run_verify(out: &mut dyn Write) -> Result<(), CliError> {
    let checks = verify::run_all();
    let mut report = String::new();
    for c in &checks {
        report.push_str(&c.to_string());
        report.push('\n');
    }
    let failed = checks.iter().filter(|c| !c.passed).count();
    report.push_str(&format!("{} checks, {} failed\n", checks.len(), failed));
    emit(out, &report)?;
    if failed > 0 {
        Err(CliError::Failed(format!("{failed} verification check(s) failed")))
    } else {
        Ok(())
    }
}

fn run(cli: &Cli) -> Result<(), CliError> {
    let stdout = io::stdout();
    let mut out = stdout.lock();
    match &cli.command {
        Command::Bounds(args) => emit(&mut out, &bounds::run(args)?),
        Command::Figure(args) => run_figure(args, &mut out),
        Command::Simulate(args) => simulate::run(args, &mut out),
        Command::Verify => run_verify(&mut out),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.threads {
        Some(0) => Err(CliError::Usage("--threads must be positive".into())),
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| CliError::Usage(format!("cannot start {n} threads: {e}")))
            .and_then(|pool| pool.install(|| run(&cli))),
        None => run(&cli),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
