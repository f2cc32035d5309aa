use std::collections::BTreeMap;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use phqm::report::ParamValue;
use phqm::runner::{execute, Command, Format, RunConfig};

#[derive(Parser)]
#[command(
    name = "phqm",
    version,
    about = "Pseudo-Hermitian quantum mechanics experiments"
)]
struct Cli {
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[arg(long, global = true, default_value_t = 1e-10)]
    tol: f64,
    /// Report destination; standard output when omitted.
    #[arg(long, global = true)]
    output: Option<String>,
    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Json)]
    format: OutputFormat,
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Clone, Copy, ValueEnum)]
enum OutputFormat {
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Cmd {
    /// Jordan-block spin flip and its fast limit.
    Spinflip(SpinflipArgs),
    /// Hermitization and measurement equivalence on random instances.
    Equivalence(EquivalenceArgs),
    /// Travel-time sweeps.
    Brachistochrone(BrachistochroneArgs),
    /// Composite-scheme energy audit and repeated measurements.
    Composite(CompositeArgs),
    /// Randomized invariant suites.
    Verify(VerifyArgs),
}

#[derive(Args)]
struct SpinflipArgs {
    #[arg(long, allow_negative_numbers = true)]
    a: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    t: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    energy: Option<f64>,
    #[arg(long)]
    hbar: Option<f64>,
    /// Coupling position: `lower` (default) or `upper`.
    #[arg(long)]
    convention: Option<String>,
    #[arg(long)]
    steps: Option<i64>,
}

#[derive(Args)]
struct EquivalenceArgs {
    #[arg(long)]
    dim: Option<i64>,
    #[arg(long)]
    cases: Option<i64>,
}

#[derive(Args)]
struct BrachistochroneArgs {
    /// `gap` or `anisotropy`.
    #[arg(long)]
    sweep: Option<String>,
    #[arg(long)]
    hbar: Option<f64>,
    #[arg(long)]
    points: Option<i64>,
    #[arg(long)]
    gap_min: Option<f64>,
    #[arg(long)]
    gap_max: Option<f64>,
    #[arg(long)]
    steps: Option<i64>,
    #[arg(long, allow_negative_numbers = true)]
    r: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    s: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    theta_min: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    theta_max: Option<f64>,
}

#[derive(Args)]
struct CompositeArgs {
    /// `scaled`, `fixed` or `baseline`.
    #[arg(long)]
    mode: Option<String>,
    #[arg(long, allow_negative_numbers = true)]
    c: Option<f64>,
    #[arg(long)]
    trials: Option<i64>,
    #[arg(long)]
    dt: Option<f64>,
    #[arg(long)]
    decades: Option<i64>,
    #[arg(long, allow_negative_numbers = true)]
    energy: Option<f64>,
    #[arg(long)]
    hbar: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    theta: Option<f64>,
    #[arg(long)]
    audit_time: Option<f64>,
    #[arg(long)]
    steps: Option<i64>,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long)]
    dim: Option<i64>,
    #[arg(long)]
    cases: Option<i64>,
}

#[derive(Default)]
struct ParamSet(BTreeMap<String, ParamValue>);

impl ParamSet {
    fn real(mut self, key: &str, v: Option<f64>) -> Self {
        if let Some(x) = v {
            self.0.insert(key.into(), ParamValue::Real(x));
        }
        self
    }

    fn int(mut self, key: &str, v: Option<i64>) -> Self {
        if let Some(x) = v {
            self.0.insert(key.into(), ParamValue::Int(x));
        }
        self
    }

    fn text(mut self, key: &str, v: Option<String>) -> Self {
        if let Some(x) = v {
            self.0.insert(key.into(), ParamValue::Text(x));
        }
        self
    }
}

fn params(cmd: Cmd) -> (Command, ParamSet) {
    let p = ParamSet::default();
    match cmd {
        Cmd::Spinflip(a) => (
            Command::Spinflip,
            p.real("a", a.a)
                .real("t", a.t)
                .real("energy", a.energy)
                .real("hbar", a.hbar)
                .text("convention", a.convention)
                .int("steps", a.steps),
        ),
        Cmd::Equivalence(a) => (
            Command::Equivalence,
            p.int("dim", a.dim).int("cases", a.cases),
        ),
        Cmd::Brachistochrone(a) => (
            Command::Brachistochrone,
            p.text("sweep", a.sweep)
                .real("hbar", a.hbar)
                .int("points", a.points)
                .real("gap_min", a.gap_min)
                .real("gap_max", a.gap_max)
                .int("steps", a.steps)
                .real("r", a.r)
                .real("s", a.s)
                .real("theta_min", a.theta_min)
                .real("theta_max", a.theta_max),
        ),
        Cmd::Composite(a) => (
            Command::Composite,
            p.text("mode", a.mode)
                .real("c", a.c)
                .int("trials", a.trials)
                .real("dt", a.dt)
                .int("decades", a.decades)
                .real("energy", a.energy)
                .real("hbar", a.hbar)
                .real("theta", a.theta)
                .real("audit_time", a.audit_time)
                .int("steps", a.steps),
        ),
        Cmd::Verify(a) => (Command::Verify, p.int("dim", a.dim).int("cases", a.cases)),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let (command, set) = params(cli.command);
    let config = RunConfig {
        command,
        params: set.0,
        seed: cli.seed,
        tol: cli.tol,
        output_path: cli.output,
        format: match cli.format {
            OutputFormat::Json => Format::Json,
            OutputFormat::Csv => Format::Csv,
        },
    };
    ExitCode::from(execute(&config) as u8)
}
