use std::path::PathBuf;
use std::process::ExitCode;

use bestprox_core::contraction::{AdmissibilityFilter, ContractionParams};
use bestprox_core::functions::{PhiSpec, ThetaSpec};
use bestprox_core::instances::Builtin;
use bestprox_core::pipeline::{self, Command, KindSelection, RunConfig, Source};
use bestprox_core::proximal::PMode;
use clap::{Args, Parser, Subcommand};

/// Best proximity points of non-self maps on finite metric spaces.
#[derive(Parser)]
#[command(name = "bestprox", version)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Metric axioms, d(A,B), A0/B0, P-property, range condition.
    Analyze(Common),
    /// Validate the theta and phi families.
    Functions(Common),
    /// Exhaustively check the contraction inequalities.
    Verify(Common),
    /// Run the proximal iteration and certify uniqueness.
    Solve(Common),
    /// Reproduce the triangular-number example and compare with its claims.
    DemoPaper(Common),
}

#[derive(Args)]
struct Common {
    /// Instance file (JSON).
    #[arg(long, conflicts_with = "builtin")]
    instance: Option<PathBuf>,
    /// Generated instance: triangular, quartic, strip or halving.
    #[arg(long)]
    builtin: Option<Builtin>,
    /// Size for --builtin and demo-paper.
    #[arg(long)]
    size: Option<usize>,
    /// Contraction kind: first, second or both.
    #[arg(long, default_value = "first")]
    kind: KindSelection,
    /// exp or exp_sqrt.
    #[arg(long)]
    theta: Option<ThetaSpec>,
    /// pow:K with K in (0,1).
    #[arg(long)]
    phi: Option<PhiSpec>,
    /// Coefficients a,b,c,h.
    #[arg(long, allow_hyphen_values = true)]
    params: Option<ContractionParams>,
    /// Comparison tolerance [default: 1e-9]
    #[arg(long)]
    tol: Option<f64>,
    /// Residual threshold for the iteration [default: 1e-10]
    #[arg(long)]
    eps_conv: Option<f64>,
    /// Iteration cap for solve [default: 10·|A| + 100]
    #[arg(long)]
    max_iter: Option<usize>,
    /// strict or weak.
    #[arg(long = "p-property", default_value = "strict")]
    p_property: PMode,
    /// positive_distance or literal.
    #[arg(long, default_value = "positive_distance")]
    filter: AdmissibilityFilter,
    /// Integer scalars under the absolute metric, compared exactly.
    #[arg(long)]
    exact_int: bool,
    /// Start point for solve (default: first point of A0).
    #[arg(long)]
    start: Option<String>,
    /// Worker threads; overrides BESTPROX_WORKERS.
    #[arg(long)]
    workers: Option<usize>,
    /// Write the JSON report here.
    #[arg(long)]
    report: Option<PathBuf>,
    /// Print the JSON report instead of the summary.
    #[arg(long)]
    json: bool,
}

fn workers_from_env() -> Result<Option<usize>, String> {
    match std::env::var("BESTPROX_WORKERS") {
        Ok(v) => v
            .trim()
            .parse::<usize>()
            .map(Some)
            .map_err(|e| format!("BESTPROX_WORKERS=`{v}`: {e}")),
        Err(_) => Ok(None),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (command, c) = match cli.command {
        Cmd::Analyze(c) => (Command::Analyze, c),
        Cmd::Functions(c) => (Command::Functions, c),
        Cmd::Verify(c) => (Command::Verify, c),
        Cmd::Solve(c) => (Command::Solve, c),
        Cmd::DemoPaper(c) => (Command::DemoPaper, c),
    };

    let workers = match c.workers.map(Some).map_or_else(workers_from_env, Ok) {
        Ok(w) => w,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let source = match (c.instance, c.builtin) {
        (Some(path), _) => Some(Source::File(path)),
        (None, Some(kind)) => Some(Source::Builtin(kind, c.size.unwrap_or(10))),
        (None, None) => None,
    };
    let cfg = RunConfig {
        source,
        size: c.size,
        kinds: c.kind,
        theta: c.theta,
        phi: c.phi,
        params: c.params,
        tol: c.tol,
        eps_conv: c.eps_conv,
        max_iter: c.max_iter,
        p_mode: c.p_property,
        filter: c.filter,
        exact_int: c.exact_int,
        start: c.start,
        workers,
    };

    let outcome = match pipeline::run(command, &cfg) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    if let Some(path) = &c.report {
        if let Err(e) = std::fs::write(path, outcome.report_json()) {
            eprintln!("error: cannot write {}: {e}", path.display());
            return ExitCode::from(2);
        }
    }
    if c.json {
        print!("{}", outcome.report_json());
    } else {
        for line in &outcome.summary {
            println!("{line}");
        }
    }
    ExitCode::from(outcome.exit_code() as u8)
}
