use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use hhck::job::{run, Backend, Command, Format, JobSpec, NuSelection};
use hhck::locality::Convention;

/// Generate homogeneous Hilbert curves and measure their locality.
#[derive(Parser)]
#[command(name = "hhck", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Write a curve as CSV (`nu,n,kernel,side` line, then `i,x,y` per step).
    Generate(CurveArgs),
    /// Difference-map statistics, barrier spans and boundary profile.
    Analyze(AnalysisArgs),
    /// Dilation factor with the witnessing pair of indices.
    Dilation(AnalysisArgs),
    /// Difference map as a CSV matrix, PGM (+ PPM barrier overlay) or record.
    Diffmap(AnalysisArgs),
    /// Check a kernel file (or bundled kernel name).
    ValidateKernel { kernel: String },
    /// One statistics record per (kernel, nu) at a fixed grid side.
    ReproduceTables {
        /// Bundled kernel, kernel file, or `all`.
        #[arg(long, default_value = "all")]
        kernel: String,
        #[arg(long, default_value = "all")]
        nu: NuSelection,
        #[arg(long, default_value_t = 256)]
        side: u32,
        #[command(flatten)]
        convention: ConventionArgs,
        #[arg(long, default_value = "affine")]
        backend: Backend,
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
}

#[derive(Args)]
struct CurveArgs {
    /// Rule set 0-11, or `all` (output is then a directory).
    #[arg(long, default_value = "0")]
    nu: NuSelection,
    #[arg(long, default_value_t = 3)]
    order: u32,
    /// `unit`, `mouse`, `frog`, or a kernel file.
    #[arg(long, default_value = "unit")]
    kernel: String,
    /// `both` refuses to continue unless the two generators agree.
    #[arg(long, default_value = "affine")]
    backend: Backend,
    #[arg(long, short)]
    output: Option<PathBuf>,
    #[arg(long)]
    format: Option<Format>,
}

#[derive(Args)]
struct ConventionArgs {
    /// Neighbourhood rule: existing, fixed8 or interior.
    #[arg(long, default_value = "interior")]
    convention: Convention,
    /// Shorthand for `--convention fixed8`.
    #[arg(long, conflicts_with = "convention")]
    divisor8: bool,
}

impl ConventionArgs {
    fn resolve(&self) -> Convention {
        if self.divisor8 {
            Convention::FixedEight
        } else {
            self.convention
        }
    }
}

#[derive(Args)]
struct AnalysisArgs {
    #[command(flatten)]
    curve: CurveArgs,
    /// Analyse a curve CSV instead of generating one.
    #[arg(long, conflicts_with_all = ["nu", "order", "kernel", "backend"])]
    input: Option<PathBuf>,
    #[command(flatten)]
    convention: ConventionArgs,
}

fn curve_job(command: Command, a: CurveArgs) -> JobSpec {
    JobSpec {
        nu: a.nu,
        order: a.order,
        kernel: a.kernel,
        backend: a.backend,
        output: a.output,
        format: a.format,
        ..JobSpec::new(command)
    }
}

fn analysis_job(command: Command, a: AnalysisArgs) -> JobSpec {
    JobSpec {
        input: a.input,
        convention: a.convention.resolve(),
        ..curve_job(command, a.curve)
    }
}

fn job(cmd: Cmd) -> JobSpec {
    match cmd {
        Cmd::Generate(a) => curve_job(Command::Generate, a),
        Cmd::Analyze(a) => analysis_job(Command::Analyze, a),
        Cmd::Dilation(a) => analysis_job(Command::Dilation, a),
        Cmd::Diffmap(a) => analysis_job(Command::Diffmap, a),
        Cmd::ValidateKernel { kernel } => JobSpec {
            kernel,
            ..JobSpec::new(Command::ValidateKernel)
        },
        Cmd::ReproduceTables {
            kernel,
            nu,
            side,
            convention,
            backend,
            output,
        } => JobSpec {
            kernel,
            nu,
            side,
            convention: convention.resolve(),
            backend,
            output,
            ..JobSpec::new(Command::ReproduceTables)
        },
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    let result = run(&job(cli.command), &mut out);
    let _ = out.flush();
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("hhck: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
