use clap::{Args, Parser, Subcommand};

use qlattice_cli::commands::{self, dispatch};
use qlattice_cli::config::{config_digest, CommandConfig, SuiteConfig};
use qlattice_cli::report::Report;
use qlattice_cli::CliError;

/// Exact verifier for q-commuting lattice identities.
#[derive(Parser)]
#[command(name = "qlattice", version, about)]
struct Cli {
    /// Run every check from a JSON config file.
    #[arg(long, global = true)]
    config: Option<std::path::PathBuf>,
    #[command(subcommand)]
    command: Option<Command>,
}

#[derive(Subcommand)]
enum Command {
    /// Quantum Serre residuals for a screening preset.
    Serre {
        #[arg(long)]
        preset: String,
        /// Window sizes 1..=N are checked.
        #[arg(long)]
        sites: u32,
    },
    /// Root-of-unity nilpotency of the screening power.
    Nilpotency {
        #[arg(long = "N")]
        modulus: u32,
        #[arg(long)]
        sites: u32,
    },
    /// Intertwiner coefficient tables.
    Volkov {
        #[command(subcommand)]
        which: VolkovCmd,
    },
    /// Lattice generator checks.
    Virasoro {
        #[command(subcommand)]
        which: VirasoroCmd,
    },
    /// Commutative q -> 1 computations.
    Classical {
        #[command(subcommand)]
        which: ClassicalCmd,
    },
    /// Parse and canonically reprint an expression.
    Normalize {
        #[arg(long)]
        expr: String,
    },
}

#[derive(Subcommand)]
enum VolkovCmd {
    /// Two-point table: closed form versus recursion, reduced equation.
    TwoPoint(VolkovArgs),
    /// Three-point table: boundaries, closed form, optional lift.
    ThreePoint(VolkovArgs),
}

#[derive(Args)]
struct VolkovArgs {
    #[arg(long)]
    order: usize,
    #[arg(long)]
    verify_lift: bool,
}

#[derive(Subcommand)]
enum VirasoroCmd {
    /// Commute the screening sum past a generator candidate.
    Check {
        #[arg(long)]
        expr: Option<String>,
        #[arg(long)]
        preset: Option<String>,
        /// Site window a..b (inferred from the expression if omitted).
        #[arg(long)]
        window: Option<String>,
        #[arg(long)]
        depth: Option<u32>,
    },
    /// Build F^(±1/2), compose rho, and compare with the closed form.
    Ladder {
        #[arg(long)]
        preset: String,
        #[arg(long)]
        pair_shift: Option<i64>,
        #[arg(long)]
        depth: Option<u32>,
    },
}

#[derive(Subcommand)]
enum ClassicalCmd {
    /// Apply the displayed field triple to an expression and report.
    Hw {
        #[arg(long)]
        kind: String,
        #[arg(long)]
        expr: String,
    },
}

fn default_depth() -> u32 {
    std::env::var("QLATTICE_DEPTH")
        .ok()
        .and_then(|v| v.parse().ok())
        .unwrap_or(8)
}

fn to_config(cmd: &Command) -> CommandConfig {
    match cmd {
        Command::Serre { preset, sites } => {
            CommandConfig::Serre { preset: preset.clone(), sites: *sites }
        }
        Command::Nilpotency { modulus, sites } => {
            CommandConfig::Nilpotency { modulus: *modulus, sites: *sites }
        }
        Command::Volkov { which: VolkovCmd::TwoPoint(a) } => {
            CommandConfig::VolkovTwoPoint { order: a.order, verify_lift: a.verify_lift }
        }
        Command::Volkov { which: VolkovCmd::ThreePoint(a) } => {
            CommandConfig::VolkovThreePoint { order: a.order, verify_lift: a.verify_lift }
        }
        Command::Virasoro { which: VirasoroCmd::Check { expr, preset, window, depth } } => {
            CommandConfig::VirasoroCheck {
                expr: expr.clone(),
                preset: preset.clone(),
                window: window.clone(),
                depth: *depth,
            }
        }
        Command::Virasoro { which: VirasoroCmd::Ladder { preset, pair_shift, depth } } => {
            CommandConfig::VirasoroLadder {
                preset: preset.clone(),
                pair_shift: *pair_shift,
                depth: *depth,
            }
        }
        Command::Classical { which: ClassicalCmd::Hw { kind, expr } } => {
            CommandConfig::ClassicalHw { kind: kind.clone(), expr: expr.clone() }
        }
        Command::Normalize { expr } => CommandConfig::Normalize { expr: expr.clone() },
    }
}

fn command_label(cmd: &CommandConfig) -> &'static str {
    match cmd {
        CommandConfig::Serre { .. } => "serre",
        CommandConfig::Nilpotency { .. } => "nilpotency",
        CommandConfig::VolkovTwoPoint { .. } => "volkov two-point",
        CommandConfig::VolkovThreePoint { .. } => "volkov three-point",
        CommandConfig::VirasoroCheck { .. } => "virasoro check",
        CommandConfig::VirasoroLadder { .. } => "virasoro ladder",
        CommandConfig::ClassicalHw { .. } => "classical hw",
        CommandConfig::Normalize { .. } => "normalize",
    }
}

fn run() -> Result<i32, CliError> {
    let cli = Cli::parse();
    let depth = default_depth();
    if let Some(path) = &cli.config {
        let text = std::fs::read_to_string(path)?;
        let suite: SuiteConfig = serde_json::from_str(&text)
            .map_err(|e| CliError::Config(format!("bad config: {e}")))?;
        let digest = config_digest(&suite);
        let depth = suite.depth.unwrap_or(depth);
        let mut checks = Vec::new();
        for cmd in &suite.checks {
            checks.extend(dispatch(cmd, depth)?);
        }
        let report = Report { command: "suite".into(), config_digest: digest, checks };
        println!("{}", report.to_json());
        return Ok(if report.all_passed() { 0 } else { 1 });
    }
    let Some(command) = cli.command else {
        return Err(CliError::Config("pass a subcommand or --config FILE".into()));
    };
    // the classical three-site ratio preset also reports its q -> 1 verdict
    let cfg = to_config(&command);
    let digest = config_digest(&cfg);
    let mut checks = dispatch(&cfg, depth)?;
    if let CommandConfig::VirasoroCheck { preset: Some(p), depth: d, .. } = &cfg {
        if p.starts_with("triple-ratio") {
            checks.extend(commands::run_virasoro_check_q1(p, d.unwrap_or(depth))?);
        }
    }
    let report = Report { command: command_label(&cfg).into(), config_digest: digest, checks };
    println!("{}", report.to_json());
    Ok(if report.all_passed() { 0 } else { 1 })
}

fn main() {
    match run() {
        Ok(code) => std::process::exit(code),
        Err(e) => {
            eprintln!("error: {e}");
            std::process::exit(2);
        }
    }
}
