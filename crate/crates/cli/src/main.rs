use std::path::Path;
use std::process::ExitCode;

use banach_core::harness::{
    compute_constant, emit_report, linspace, parse_space_spec, run_verify, sweep_mu, ConstantName,
    ConstantParams, Format, Profile, Report, Variant, ZERO_TOL,
};
use banach_core::{Error, SpaceSpec, Weights};
use clap::{Args, Parser, Subcommand, ValueEnum};

const THREADS_VAR: &str = "BANACH_THREADS";

/// Geometric constants of two-dimensional normed spaces.
#[derive(Parser)]
#[command(name = "banach", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Estimate one constant of a space.
    Constant(ConstantArgs),
    /// Run the inequality battery; exits 1 if any check fails.
    Verify(VerifyArgs),
    /// Compare the DW estimate of X_mu with its two-sided bounds over a range of mu.
    SweepMu(SweepArgs),
}

#[derive(Args)]
struct WeightArgs {
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    alpha: f64,
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    beta: f64,
}

impl WeightArgs {
    fn weights(&self) -> Result<Weights, Error> {
        Weights::new(self.alpha, self.beta)
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum VariantArg {
    Primary,
    Alternate,
}

#[derive(Args)]
struct ConstantArgs {
    /// dw, dw-b, dw-s, dw-i, ms-b, psi-inf, delta, eps0, james, rho, rho-prime0 or rect
    #[arg(value_parser = clap::value_parser!(ConstantName))]
    name: ConstantName,
    /// Space as JSON, or @path to a JSON file.
    #[arg(long)]
    space: String,
    #[command(flatten)]
    weights: WeightArgs,
    /// Sphere grid size.
    #[arg(long, default_value_t = Profile::Fast.n_grid())]
    grid: usize,
    /// Radii per direction pair in the direct-form searches.
    #[arg(long, default_value_t = 64)]
    s_points: usize,
    /// Argument of delta.
    #[arg(long, default_value_t = 1.0)]
    eps: f64,
    /// Argument of rho.
    #[arg(long, default_value_t = 0.5)]
    t: f64,
    /// Zero threshold used by eps0.
    #[arg(long, default_value_t = ZERO_TOL)]
    zero_tol: f64,
    /// Alternate estimator: direct form for dw and dw-b, the modulus of convexity for james.
    #[arg(long, value_enum, default_value_t = VariantArg::Primary)]
    variant: VariantArg,
    #[arg(long, default_value = "json", value_parser = clap::value_parser!(Format))]
    format: Format,
}

#[derive(Args)]
struct VerifyArgs {
    /// Space as JSON, or @path to a JSON file.
    #[arg(long)]
    space: String,
    #[command(flatten)]
    weights: WeightArgs,
    #[arg(long, default_value = "fast", value_parser = clap::value_parser!(Profile))]
    profile: Profile,
    #[arg(long, default_value = "json", value_parser = clap::value_parser!(Format))]
    format: Format,
}

#[derive(Args)]
struct SweepArgs {
    #[arg(long, default_value_t = 1.0)]
    from: f64,
    #[arg(long, default_value_t = 1.41)]
    to: f64,
    #[arg(long, default_value_t = 10)]
    steps: usize,
    #[command(flatten)]
    weights: WeightArgs,
    #[arg(long, default_value = "fast", value_parser = clap::value_parser!(Profile))]
    profile: Profile,
    #[arg(long, default_value = "json", value_parser = clap::value_parser!(Format))]
    format: Format,
}

fn read_space(arg: &str) -> Result<SpaceSpec, Error> {
    match arg.strip_prefix('@') {
        Some(path) => {
            let text = std::fs::read_to_string(Path::new(path))
                .map_err(|e| Error::Parse(format!("cannot read `{path}`: {e}")))?;
            parse_space_spec(&text)
        }
        None => parse_space_spec(arg),
    }
}

fn configure_threads() -> Result<(), Error> {
    let Ok(raw) = std::env::var(THREADS_VAR) else {
        return Ok(());
    };
    let n: usize = raw.trim().parse().ok().filter(|&n| n > 0).ok_or_else(|| {
        Error::Parse(format!(
            "{THREADS_VAR} must be a positive integer, got `{raw}`"
        ))
    })?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| Error::Parse(format!("thread pool: {e}")))
}

/// Prints the rendered report and returns whether every check passed.
fn run(command: Command) -> Result<bool, Error> {
    match command {
        Command::Constant(a) => {
            let params = ConstantParams {
                weights: a.weights.weights()?,
                n_grid: a.grid,
                s_points: a.s_points,
                eps: a.eps,
                t: a.t,
                zero_tol: a.zero_tol,
                variant: match a.variant {
                    VariantArg::Primary => Variant::Primary,
                    VariantArg::Alternate => Variant::Alternate,
                },
            };
            let report = compute_constant(a.name, &read_space(&a.space)?, &params)?;
            print!("{}", emit_report(Report::Constant(&report), a.format));
            Ok(true)
        }
        Command::Verify(a) => {
            let report = run_verify(&read_space(&a.space)?, a.weights.weights()?, a.profile)?;
            print!("{}", emit_report(Report::Verify(&report), a.format));
            for c in report.failing() {
                eprintln!(
                    "check failed: {} ({} {} {} with slack {})",
                    c.name, c.lhs, c.relation, c.rhs, c.slack
                );
            }
            Ok(report.all_pass)
        }
        Command::SweepMu(a) => {
            if !(a.from.is_finite() && a.to.is_finite()) {
                return Err(Error::InvalidParameter {
                    name: "from/to",
                    reason: "must be finite".into(),
                });
            }
            let rows = sweep_mu(
                &linspace(a.from, a.to, a.steps),
                a.weights.weights()?,
                a.profile,
            )?;
            print!("{}", emit_report(Report::Sweep(&rows), a.format));
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = configure_threads().and_then(|()| run(cli.command));
    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
