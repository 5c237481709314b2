use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};

use tetra_cli::{run_suite, OutputFormat, RunConfig, Suite, EXIT_USAGE};
use tetrablock::tetrablock::geometry::{parse_complex, MembershipMode, TetrablockPoint};
use tetrablock::Scalar;

#[derive(Parser)]
#[command(name = "tetra", version, about = "Verification suites for tetrablock isometric dilations")]
struct Cli {
    #[command(subcommand)]
    suite: Command,
    /// Pal family parameter as "re,im".
    #[arg(long, global = true, value_parser = parse_scalar, default_value = "0,0", allow_hyphen_values = true)]
    alpha: Scalar,
    /// Point of C^3 as "re,im;re,im;re,im" (membership only).
    #[arg(long, global = true, value_parser = parse_point, allow_hyphen_values = true)]
    point: Option<TetrablockPoint>,
    /// Membership target set.
    #[arg(long, global = true, value_enum, default_value_t = Mode::Closure)]
    mode: Mode,
    /// Copy depth of the windows on which identities are checked.
    #[arg(long, global = true, default_value_t = tetrablock::DEFAULT_WINDOW_DEPTH)]
    depth: usize,
    /// Largest window depth used by norm estimates.
    #[arg(long, global = true, default_value_t = tetra_cli::config::DEFAULT_NORM_DEPTH)]
    norm_depth: usize,
    /// Check tolerance [default: 1e-10, or 1e-6 for membership].
    #[arg(long, global = true)]
    tol: Option<f64>,
    /// Number of circle samples for sup-norms.
    #[arg(long, global = true, default_value_t = tetra_cli::config::DEFAULT_GRID)]
    grid: usize,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(clap::Subcommand, Clone, Copy)]
enum Command {
    /// Explicit dilation of the Pal family.
    VerifyPal,
    /// Dilation of the adjoint triple.
    VerifyAdjoint,
    /// Toeplitz-form dilation in both directions.
    VerifyToeplitzForm,
    /// The Xi conditions for Xi = F1* and the Xi = 0 reduction.
    XiCheck,
    /// Numerical search for Xi.
    XiSearch,
    /// Tetrablock membership of --point.
    Membership,
}

#[derive(ValueEnum, Clone, Copy)]
enum Mode {
    Closure,
    Boundary,
}

#[derive(ValueEnum, Clone, Copy)]
enum Format {
    Json,
    Text,
}

fn parse_scalar(s: &str) -> Result<Scalar, String> {
    parse_complex(s).map_err(|e| e.to_string())
}

fn parse_point(s: &str) -> Result<TetrablockPoint, String> {
    s.parse().map_err(|e: tetrablock::Error| e.to_string())
}

fn config(cli: &Cli) -> RunConfig {
    let suite = match cli.suite {
        Command::VerifyPal => Suite::VerifyPal,
        Command::VerifyAdjoint => Suite::VerifyAdjoint,
        Command::VerifyToeplitzForm => Suite::VerifyToeplitzForm,
        Command::XiCheck => Suite::XiCheck,
        Command::XiSearch => Suite::XiSearch,
        Command::Membership => Suite::Membership,
    };
    let defaults = RunConfig::new(suite);
    RunConfig {
        alpha: cli.alpha,
        point: cli.point,
        mode: match cli.mode {
            Mode::Closure => MembershipMode::Closure,
            Mode::Boundary => MembershipMode::Boundary,
        },
        window_depth: cli.depth,
        norm_depth_max: cli.norm_depth,
        tol: cli.tol.unwrap_or(defaults.tol),
        grid_size: cli.grid,
        seed: cli.seed,
        format: match cli.format {
            Format::Json => OutputFormat::Json,
            Format::Text => OutputFormat::Text,
        },
        ..defaults
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let cfg = config(&cli);
    if let Err(e) = cfg.validate() {
        eprintln!("tetra: {e}");
        return ExitCode::from(EXIT_USAGE);
    }
    let report = run_suite(&cfg);
    let text = match cfg.format {
        OutputFormat::Json => report.to_json(),
        OutputFormat::Text => report.to_text(),
    };
    match &cli.out {
        Some(path) => {
            if let Err(e) = std::fs::write(path, &text) {
                eprintln!("tetra: cannot write {}: {e}", path.display());
                return ExitCode::from(EXIT_USAGE);
            }
        }
        None => print!("{text}"),
    }
    ExitCode::from(report.exit_code())
}
