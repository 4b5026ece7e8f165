//! Command-line front end: quasirandom estimation runs, reference-value
//! verification, Bloch-radius bin breakdowns and deterministic
//! absolute-separability quadratures.
//!
//! Exit codes: 0 success (and all verification checks in tolerance),
//! 1 verification deviation out of tolerance, 2 invalid arguments,
//! 3 unwritable output, 4 quadrature non-convergence.

use clap::{Args, Parser, Subcommand};
use sepprob::error::Error;
use sepprob::estimator::TruncationPolicy;
use sepprob::measures::MeasureKind;
use sepprob::pipeline::{self, RunConfig, RunResult};
use sepprob::refvalues::{self, QuadOutcome, RefCheck};
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::PathBuf;
use std::process::exit;

const EXIT_CHECK_FAILED: i32 = 1;
const EXIT_BAD_ARGS: i32 = 2;
const EXIT_IO: i32 = 3;
const EXIT_NON_CONVERGENCE: i32 = 4;

#[derive(Parser)]
#[command(
    name = "sepprob",
    version,
    about = "Two-qubit separability probabilities: quasirandom estimation and reference verification"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a quasirandom separability-probability estimation.
    Estimate(EstimateArgs),
    /// Evaluate reference targets and print the deviation table.
    Verify(VerifyArgs),
    /// Estimation with a per-Bloch-radius-bin breakdown on subsystem A.
    BlochBins(EstimateArgs),
    /// Deterministic absolute-separability quadrature for one measure.
    AbsSep(AbsSepArgs),
}

#[derive(Args)]
struct EstimateArgs {
    /// Measure name: hs, induced:k, bures, maximal, kubo-mori, geometric,
    /// wigner-yanase, log-geometric, arith-minmax, morozova-chentsov,
    /// identric.
    #[arg(long)]
    measure: String,
    /// Sequence seed fraction in [0, 1).
    #[arg(long, default_value_t = 0.5)]
    alpha0: f64,
    #[arg(long)]
    points: u64,
    /// Trace block size.
    #[arg(long, default_value_t = pipeline::DEFAULT_BLOCK)]
    block: u64,
    /// Weight truncation: none, weight-cap:<log>, eigen-floor:<delta>.
    #[arg(long, default_value = "none")]
    policy: String,
    /// Bloch-radius bin count.
    #[arg(long, default_value_t = pipeline::DEFAULT_BINS)]
    bins: usize,
    /// Worker threads (0 = all cores); the SEPPROB_WORKERS environment
    /// variable overrides this flag.
    #[arg(long, default_value_t = 0)]
    workers: usize,
    /// Offset added to every sequence index.
    #[arg(long, default_value_t = 0)]
    offset: u64,
    /// Write the per-block trace CSV here.
    #[arg(long)]
    trace: Option<PathBuf>,
    /// Write the summary JSON here (it is always printed to stdout).
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    /// Evaluate every reference target.
    #[arg(long, conflicts_with_all = ["quantity", "group"])]
    all: bool,
    /// A single quantity, as named in the table (e.g. hs-abs,
    /// d2-hs-ratio, d4-sqrtx-denominator, abs-sep-bures).
    #[arg(long)]
    quantity: Option<String>,
    /// A group: closed-forms, conjectures, volume-ratios, abs-sep.
    #[arg(long, conflicts_with = "quantity")]
    group: Option<String>,
    /// Emit CSV instead of the aligned text table.
    #[arg(long)]
    csv: bool,
}

#[derive(Args)]
struct AbsSepArgs {
    #[arg(long)]
    measure: String,
}

fn main() {
    let cli = Cli::parse();
    let code = match cli.command {
        Command::Estimate(args) => cmd_estimate(&args, false),
        Command::BlochBins(args) => cmd_estimate(&args, true),
        Command::Verify(args) => cmd_verify(&args),
        Command::AbsSep(args) => cmd_abs_sep(&args),
    };
    exit(code);
}

fn fail(code: i32, msg: &str) -> i32 {
    eprintln!("sepprob: {msg}");
    code
}

fn parse_measure(s: &str) -> Result<MeasureKind, i32> {
    s.parse()
        .map_err(|e: Error| fail(EXIT_BAD_ARGS, &e.to_string()))
}

fn build_config(args: &EstimateArgs) -> Result<RunConfig, i32> {
    let measure = parse_measure(&args.measure)?;
    let policy: TruncationPolicy = args
        .policy
        .parse()
        .map_err(|e: Error| fail(EXIT_BAD_ARGS, &e.to_string()))?;
    let workers = match std::env::var("SEPPROB_WORKERS") {
        Ok(v) => v
            .parse()
            .map_err(|_| fail(EXIT_BAD_ARGS, &format!("bad SEPPROB_WORKERS value `{v}`")))?,
        Err(_) => args.workers,
    };
    let mut config = RunConfig::new(measure, args.points);
    config.alpha0 = args.alpha0;
    config.block = args.block;
    config.policy = policy;
    config.bins = args.bins;
    config.workers = workers;
    config.index_offset = args.offset;
    config
        .validate()
        .map_err(|e| fail(EXIT_BAD_ARGS, &e.to_string()))?;
    Ok(config)
}

fn run_pipeline(config: &RunConfig) -> Result<RunResult, i32> {
    pipeline::run(config).map_err(|e| fail(EXIT_BAD_ARGS, &e.to_string()))
}

fn cmd_estimate(args: &EstimateArgs, bloch: bool) -> i32 {
    let config = match build_config(args) {
        Ok(c) => c,
        Err(code) => return code,
    };
    let result = match run_pipeline(&config) {
        Ok(r) => r,
        Err(code) => return code,
    };
    if let Some(path) = &args.trace {
        if let Err(e) = write_trace(&result, path) {
            return fail(
                EXIT_IO,
                &format!("cannot write trace {}: {e}", path.display()),
            );
        }
    }
    let json = serde_json::to_string_pretty(&result.summary).expect("summary serializes");
    if bloch {
        println!("bin,radius_lo,radius_hi,count,sep_estimate");
        for (i, bin) in result.state.bin_estimates().iter().enumerate() {
            let est = bin
                .sep_probability
                .map_or_else(|| "".to_string(), |p| format!("{p:.8}"));
            println!(
                "{i},{:.3},{:.3},{},{est}",
                bin.radius_lo, bin.radius_hi, bin.count
            );
        }
        eprintln!("{json}");
    } else {
        println!("{json}");
    }
    if let Some(path) = &args.output {
        if let Err(e) = std::fs::write(path, format!("{json}\n")) {
            return fail(EXIT_IO, &format!("cannot write {}: {e}", path.display()));
        }
    }
    0
}

fn write_trace(result: &RunResult, path: &PathBuf) -> std::io::Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    result.state.write_trace_csv(&mut w)?;
    w.flush()
}

fn outcome_str(v: QuadOutcome) -> String {
    match v {
        QuadOutcome::Finite(x) => format!("{x:.12e}"),
        QuadOutcome::Divergent => "infinite".to_string(),
    }
}

fn print_table(rows: &[RefCheck], csv: bool) {
    if csv {
        println!("quantity,computed,reference,deviation,tolerance,relative,status");
        for r in rows {
            println!(
                "{},{},{},{:e},{:e},{},{}",
                r.quantity,
                outcome_str(r.computed),
                outcome_str(r.target),
                r.deviation,
                r.tolerance,
                r.relative,
                if r.pass { "pass" } else { "FAIL" }
            );
        }
        return;
    }
    println!(
        "{:<28} {:>20} {:>20} {:>11} {:>9} {:>6}",
        "quantity", "computed", "reference", "deviation", "tol", "status"
    );
    for r in rows {
        let kind = if r.relative { "rel" } else { "abs" };
        println!(
            "{:<28} {:>20} {:>20} {:>8.2e} {} {:>7.0e} {:>6}",
            r.quantity,
            outcome_str(r.computed),
            outcome_str(r.target),
            r.deviation,
            kind,
            r.tolerance,
            if r.pass { "pass" } else { "FAIL" }
        );
    }
}

fn cmd_verify(args: &VerifyArgs) -> i32 {
    let selector = if let Some(q) = &args.quantity {
        q.clone()
    } else if let Some(g) = &args.group {
        g.clone()
    } else {
        "all".to_string()
    };
    let rows = match refvalues::evaluate(&selector) {
        Ok(rows) => rows,
        Err(e @ Error::NonConvergence { .. }) => return fail(EXIT_NON_CONVERGENCE, &e.to_string()),
        Err(e) => return fail(EXIT_BAD_ARGS, &e.to_string()),
    };
    print_table(&rows, args.csv);
    if rows.iter().all(|r| r.pass) {
        0
    } else {
        EXIT_CHECK_FAILED
    }
}

fn cmd_abs_sep(args: &AbsSepArgs) -> i32 {
    let measure = match parse_measure(&args.measure) {
        Ok(m) => m,
        Err(code) => return code,
    };
    match refvalues::abs_sep_quadrature(measure) {
        Ok(QuadOutcome::Finite(v)) => {
            println!("{v:.10e}");
            0
        }
        Ok(QuadOutcome::Divergent) => {
            println!("infinite");
            0
        }
        Err(e @ Error::NonConvergence { .. }) => fail(EXIT_NON_CONVERGENCE, &e.to_string()),
        Err(e) => fail(EXIT_BAD_ARGS, &e.to_string()),
    }
}
