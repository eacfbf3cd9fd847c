use clap::{Args, Parser, Subcommand, ValueEnum};
use qguess_cli::spec::{ExperimentSpec, RunParams};
use qguess_cli::{run_mub, run_optimize, run_scan, run_simulate, run_solve, CliError, ScanParam, ScanRange};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "qguess", version, about = "Coherent quantum guessing game experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct RunArgs {
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    restarts: Option<usize>,
    #[arg(long)]
    iters: Option<usize>,
    #[arg(long)]
    rounds: Option<u64>,
    #[arg(long)]
    tol: Option<f64>,
}

impl RunArgs {
    fn over(&self, base: RunParams) -> RunParams {
        RunParams {
            seed: self.seed.unwrap_or(base.seed),
            restarts: self.restarts.unwrap_or(base.restarts),
            iters: self.iters.unwrap_or(base.iters),
            rounds: self.rounds.unwrap_or(base.rounds),
            tol: self.tol.unwrap_or(base.tol),
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Param {
    Weight0,
    Seed,
}

#[derive(Subcommand)]
enum Command {
    /// Closed-form perfect probe for a qubit spec
    Solve {
        #[arg(long)]
        spec: PathBuf,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Multi-start search for the best probe
    Optimize {
        #[arg(long)]
        spec: PathBuf,
        #[command(flatten)]
        run: RunArgs,
        /// CSV file to append a result row to
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Monte-Carlo rounds with the spec's probe and guess basis
    Simulate {
        #[arg(long)]
        spec: PathBuf,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Optimize over a range of one parameter and emit CSV
    Scan {
        #[arg(long)]
        spec: PathBuf,
        #[arg(long, value_enum)]
        param: Param,
        #[arg(long)]
        from: f64,
        #[arg(long)]
        to: f64,
        #[arg(long)]
        points: usize,
        #[command(flatten)]
        run: RunArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print the MUB unitaries U_k for a prime dimension
    Mub {
        #[arg(long)]
        dim: usize,
    },
}

fn execute(cmd: Command) -> Result<String, CliError> {
    match cmd {
        Command::Solve { spec, run } => {
            let (s, _) = ExperimentSpec::load(&spec)?;
            run_solve(&s, run.over(s.run).tol)
        }
        Command::Optimize { spec, run, out } => {
            let (s, text) = ExperimentSpec::load(&spec)?;
            run_optimize(&s, &text, run.over(s.run), out.as_deref())
        }
        Command::Simulate { spec, run } => {
            let (s, _) = ExperimentSpec::load(&spec)?;
            run_simulate(&s, run.over(s.run))
        }
        Command::Scan { spec, param, from, to, points, run, out } => {
            let (s, _) = ExperimentSpec::load(&spec)?;
            let param = match param {
                Param::Weight0 => ScanParam::Weight0,
                Param::Seed => ScanParam::Seed,
            };
            let csv = run_scan(&s, param, ScanRange { from, to, points }, run.over(s.run), out.as_deref())?;
            Ok(if out.is_some() { String::new() } else { csv })
        }
        Command::Mub { dim } => run_mub(dim),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match execute(cli.command) {
        Ok(text) => {
            print!("{text}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
