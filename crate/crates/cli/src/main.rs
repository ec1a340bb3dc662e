//! `urbounds`: uncertainty-relation bound reports, the entangled Gaussian
//! example, the purity frontier and randomized verification sweeps.
//!
//! Exit codes: 0 success, 1 input error, 2 physics-invariant violation.

mod output;

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;
use urbounds::bounds::VIOLATION_REL_TOL;
use urbounds::entangled::{linear_grid, SCAN_CSV_HEADER};
use urbounds::format::sig;
use urbounds::frontier::FRONTIER_CSV_HEADER;
use urbounds::io::StateFile;
use urbounds::moments::PSD_REL_TOL;
use urbounds::sweep::{run_sweep, SweepConfig, TrialOutcome};
use urbounds::{
    analytic_covariances, covariance_matrices, example_purity, frontier_table, gram_psd_check, saturation_residual,
    saturation_scan, BoundReport, Complex64, ExampleParams, Observable, PhysConfig, State,
};

use output::{Sink, SWEEP_CSV_HEADER};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Debug, Parser)]
#[command(
    name = "urbounds",
    version,
    about = "Uncertainty relations for two and three observables"
)]
struct Cli {
    /// Reduced Planck constant.
    #[arg(long, global = true, default_value_t = 1.0)]
    hbar: f64,

    /// Output format. Defaults to json for report and verify, csv otherwise.
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,

    /// Write to this file instead of stdout.
    #[arg(short, long, global = true)]
    output: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Evaluate every bound for a state read from a JSON file.
    Report {
        state: PathBuf,
        /// Observable labels, e.g. `x,p,y`. Overrides the file's list.
        #[arg(long, value_delimiter = ',')]
        obs: Vec<String>,
    },
    /// Closed-form moments and bounds of the two-mode entangled Gaussian.
    Example {
        #[arg(long, default_value_t = 1.0)]
        a: f64,
        #[arg(long, default_value_t = 1.0)]
        c: f64,
        #[arg(long = "b-re", allow_negative_numbers = true)]
        b_re: f64,
        #[arg(long = "b-im", allow_negative_numbers = true)]
        b_im: f64,
    },
    /// Saturation residual over a grid of complex b.
    ScanExample {
        #[arg(long, default_value_t = 1.0)]
        a: f64,
        #[arg(long, default_value_t = 1.0)]
        c: f64,
        #[arg(long = "re-min", default_value_t = -0.9, allow_negative_numbers = true)]
        re_min: f64,
        #[arg(long = "re-max", default_value_t = 0.9, allow_negative_numbers = true)]
        re_max: f64,
        #[arg(long = "re-step", default_value_t = 0.05)]
        re_step: f64,
        #[arg(long = "im-min", default_value_t = -0.9, allow_negative_numbers = true)]
        im_min: f64,
        #[arg(long = "im-max", default_value_t = 0.9, allow_negative_numbers = true)]
        im_max: f64,
        #[arg(long = "im-step", default_value_t = 0.05)]
        im_step: f64,
    },
    /// Tabulate the purity-bounded frontier.
    Frontier {
        #[arg(long = "mu-min", default_value_t = 0.05)]
        mu_min: f64,
        #[arg(long = "mu-max", default_value_t = 1.0)]
        mu_max: f64,
        #[arg(long, default_value_t = 20)]
        steps: usize,
    },
    /// Randomized sweep over density matrices and Hermitian triples.
    Verify {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 500)]
        trials: usize,
        /// Hilbert-space dimension, or the lower end with `--dim-max`.
        #[arg(long, default_value_t = 6)]
        dim: usize,
        /// Cycle trials through dimensions `dim..=dim-max`.
        #[arg(long = "dim-max")]
        dim_max: Option<usize>,
    },
}

/// Failure classes mapped to exit codes.
enum Failure {
    Input(String),
    Physics(String),
    /// Downstream reader went away; nothing left to report.
    ClosedPipe,
}

impl From<urbounds::Error> for Failure {
    fn from(e: urbounds::Error) -> Self {
        Failure::Input(e.to_string())
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        if e.kind() == std::io::ErrorKind::BrokenPipe {
            Failure::ClosedPipe
        } else {
            Failure::Input(e.to_string())
        }
    }
}

impl From<csv::Error> for Failure {
    fn from(e: csv::Error) -> Self {
        match e.into_kind() {
            csv::ErrorKind::Io(io) => io.into(),
            other => Failure::Input(format!("{other:?}")),
        }
    }
}

type Outcome = Result<(), Failure>;

fn configure_threads() -> Result<(), Failure> {
    let Ok(raw) = std::env::var("URBOUNDS_THREADS") else {
        return Ok(());
    };
    let n: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|n| *n >= 1)
        .ok_or_else(|| Failure::Input(format!("URBOUNDS_THREADS must be a positive integer, got {raw:?}")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| Failure::Input(e.to_string()))
}

fn report_csv_row(seed: Option<u64>, r: &BoundReport) -> Vec<String> {
    let opt = |v: Option<f64>| v.map(sig).unwrap_or_default();
    vec![
        seed.map(|s| s.to_string()).unwrap_or_default(),
        sig(r.product),
        sig(r.robertson),
        sig(r.rs),
        opt(r.new_bound),
        opt(r.commuting_bound),
        sig(r.best_bound),
        sig(r.slack),
    ]
}

fn cmd_report(cli: &Cli, path: &PathBuf, labels: &[String]) -> Outcome {
    let text = fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    let file = StateFile::parse(&text)?;
    let cfg = PhysConfig::with_hbar(file.state.hbar(&PhysConfig::with_hbar(cli.hbar)?))?;
    let state: State = file.state.build(&cfg)?;
    let obs: Vec<Observable> = if !labels.is_empty() {
        labels
            .iter()
            .map(|l| Observable::from_label(l.trim(), &state, &cfg))
            .collect::<urbounds::Result<_>>()?
    } else if let Some(specs) = &file.observables {
        specs
            .iter()
            .enumerate()
            .map(|(i, s)| s.resolve(&state, &cfg, i))
            .collect::<urbounds::Result<_>>()?
    } else {
        ["x", "p"]
            .iter()
            .map(|l| Observable::from_label(l, &state, &cfg))
            .collect::<urbounds::Result<_>>()?
    };
    if !(obs.len() == 2 || obs.len() == 3) {
        return Err(Failure::Input(format!("need 2 or 3 observables, got {}", obs.len())));
    }
    let mp = covariance_matrices(&state, &obs, &cfg)?;
    let cert = gram_psd_check(&mp, PSD_REL_TOL);
    let heisenberg = Observable::canonical_pair(&obs[0], &obs[1]).then_some(cfg.hbar / 2.0);
    let report = BoundReport::from_moments(&mp, heisenberg)?;

    let mut sink = Sink::open(cli.output.as_deref())?;
    match cli.format.unwrap_or(Format::Json) {
        Format::Json => sink.json(&json!({ "report": report, "moments": mp, "psd": cert }))?,
        Format::Csv => sink.csv(&SWEEP_CSV_HEADER, [report_csv_row(None, &report)])?,
    }
    sink.finish()?;

    if !cert.passed {
        return Err(Failure::Physics(format!(
            "Gram matrix not positive semidefinite: min eigenvalue {:e}",
            cert.min_eigenvalue
        )));
    }
    let violated = report.violations(VIOLATION_REL_TOL);
    if !violated.is_empty() {
        let names: Vec<_> = violated.iter().map(|(n, e)| format!("{n} by {e:e}")).collect();
        return Err(Failure::Physics(format!("bounds violated: {}", names.join(", "))));
    }
    Ok(())
}

fn cmd_example(cli: &Cli, a: f64, c: f64, b_re: f64, b_im: f64) -> Outcome {
    let cfg = PhysConfig::with_hbar(cli.hbar)?;
    let p = ExampleParams::new(a, c, Complex64::new(b_re, b_im))?;
    let rows = saturation_scan(a, c, &[b_re], &[b_im], &cfg)?;
    let mut sink = Sink::open(cli.output.as_deref())?;
    match cli.format.unwrap_or(Format::Csv) {
        Format::Csv => sink.csv(&SCAN_CSV_HEADER, rows.iter().map(|r| r.csv_record()))?,
        Format::Json => {
            let mp = analytic_covariances(&p, &cfg);
            let report = BoundReport::from_moments(&mp, Some(cfg.hbar / 2.0))?;
            sink.json(&json!({
                "params": { "a": a, "c": c, "b_re": b_re, "b_im": b_im },
                "moments": mp,
                "report": report,
                "purity": example_purity(&p),
                "residual": saturation_residual(&p, &cfg),
            }))?
        }
    }
    sink.finish()?;
    Ok(())
}

fn cmd_scan(cli: &Cli, a: f64, c: f64, re: (f64, f64, f64), im: (f64, f64, f64)) -> Outcome {
    let cfg = PhysConfig::with_hbar(cli.hbar)?;
    let re_grid = linear_grid(re.0, re.1, re.2)?;
    let im_grid = linear_grid(im.0, im.1, im.2)?;
    let rows = saturation_scan(a, c, &re_grid, &im_grid, &cfg)?;
    let mut sink = Sink::open(cli.output.as_deref())?;
    match cli.format.unwrap_or(Format::Csv) {
        Format::Csv => sink.csv(&SCAN_CSV_HEADER, rows.iter().map(|r| r.csv_record()))?,
        Format::Json => sink.json(&json!(rows))?,
    }
    sink.finish()?;
    Ok(())
}

fn cmd_frontier(cli: &Cli, mu_min: f64, mu_max: f64, steps: usize) -> Outcome {
    let table = frontier_table(mu_min, mu_max, steps)?;
    let mut sink = Sink::open(cli.output.as_deref())?;
    match cli.format.unwrap_or(Format::Csv) {
        Format::Csv => sink.csv(&FRONTIER_CSV_HEADER, table.iter().map(|p| p.csv_record()))?,
        Format::Json => {
            let rows: Vec<_> = table
                .iter()
                .map(|p| {
                    json!({
                        "mu": p.mu,
                        "phi_exact": p.phi_exact,
                        "phi_tilde": p.phi_tilde,
                        "phi_asym": p.phi_asym,
                        "support": p.support_size,
                        "abs_diff_lead": p.abs_diff_lead(),
                        "scaled_diff_lead": p.scaled_diff_lead(),
                        "probs": p.probs,
                    })
                })
                .collect();
            sink.json(&json!(rows))?
        }
    }
    sink.finish()?;
    Ok(())
}

fn cmd_verify(cli: &Cli, seed: u64, trials: usize, dim: usize, dim_max: Option<usize>) -> Outcome {
    if trials < 1 {
        return Err(Failure::Input("--trials must be at least 1".into()));
    }
    let hi = dim_max.unwrap_or(dim);
    if !(2..=64).contains(&dim) || !(2..=64).contains(&hi) || hi < dim {
        return Err(Failure::Input(format!(
            "dimensions must satisfy 2 <= dim <= dim-max <= 64, got {dim}..={hi}"
        )));
    }
    let (summary, outcomes) = run_sweep(&SweepConfig::new(seed, trials, (dim..=hi).collect()))?;
    let mut sink = Sink::open(cli.output.as_deref())?;
    match cli.format.unwrap_or(Format::Json) {
        Format::Json => sink.json(&json!(summary))?,
        Format::Csv => sink.csv(
            &SWEEP_CSV_HEADER,
            outcomes
                .iter()
                .map(|o: &TrialOutcome| report_csv_row(Some(seed), &o.report)),
        )?,
    }
    sink.finish()?;
    if !summary.passed() {
        return Err(Failure::Physics(format!(
            "{} violations: {:?}",
            summary.violations, summary.violation_kinds
        )));
    }
    Ok(())
}

fn run(cli: &Cli) -> Outcome {
    configure_threads()?;
    PhysConfig::with_hbar(cli.hbar)?;
    match &cli.command {
        Command::Report { state, obs } => cmd_report(cli, state, obs),
        Command::Example { a, c, b_re, b_im } => cmd_example(cli, *a, *c, *b_re, *b_im),
        Command::ScanExample {
            a,
            c,
            re_min,
            re_max,
            re_step,
            im_min,
            im_max,
            im_step,
        } => cmd_scan(cli, *a, *c, (*re_min, *re_max, *re_step), (*im_min, *im_max, *im_step)),
        Command::Frontier { mu_min, mu_max, steps } => cmd_frontier(cli, *mu_min, *mu_max, *steps),
        Command::Verify {
            seed,
            trials,
            dim,
            dim_max,
        } => cmd_verify(cli, *seed, *trials, *dim, *dim_max),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&cli) {
        Ok(()) | Err(Failure::ClosedPipe) => ExitCode::SUCCESS,
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Physics(msg)) => {
            eprintln!("invariant violated: {msg}");
            ExitCode::from(2)
        }
    }
}
