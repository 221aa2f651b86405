use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};

use cusum_design::{ConstraintPolicy, CostModelVariant};
use cusum_design_cli::commands::{
    cmd_evaluate, cmd_optimize, cmd_sensitivity, cmd_simulate, Overrides,
};
use cusum_design_cli::config::{OutputFormat, RunConfig, SensitivitySpec};

#[derive(Debug, Parser)]
#[command(
    name = "cusum-design",
    version,
    about = "Economic-statistical design of two-sided CUSUM control charts",
    after_help = "The bundled configuration `example_sec5` (a yogurt-bottling line) \
                  is used when --config is not given a file path."
)]
struct Cli {
    /// Config file path, or `example_sec5` for the bundled scenario.
    #[arg(long, global = true, default_value = "example_sec5")]
    config: String,

    /// Override the configured RNG seed.
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Override the configured output path.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Override the configured output format.
    #[arg(long, global = true, value_enum)]
    format: Option<FormatArg>,

    /// Override the configured cost-model variant.
    #[arg(long, global = true, value_enum)]
    variant: Option<VariantArg>,

    /// Override the configured constraint policy.
    #[arg(long, global = true, value_enum)]
    constraints: Option<PolicyArg>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum FormatArg {
    Csv,
    Json,
}

impl From<FormatArg> for OutputFormat {
    fn from(value: FormatArg) -> Self {
        match value {
            FormatArg::Csv => OutputFormat::Csv,
            FormatArg::Json => OutputFormat::Json,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum VariantArg {
    Literal,
    NoInControlCost,
}

impl From<VariantArg> for CostModelVariant {
    fn from(value: VariantArg) -> Self {
        match value {
            VariantArg::Literal => CostModelVariant::Literal,
            VariantArg::NoInControlCost => CostModelVariant::NoInControlCost,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum PolicyArg {
    Enforce,
    Penalty,
    Off,
}

impl From<PolicyArg> for ConstraintPolicy {
    fn from(value: PolicyArg) -> Self {
        match value {
            PolicyArg::Enforce => ConstraintPolicy::Enforce,
            PolicyArg::Penalty => ConstraintPolicy::Penalty,
            PolicyArg::Off => ConstraintPolicy::Off,
        }
    }
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Audit one design point: run lengths and every cost term.
    Evaluate {
        /// Sample size n.
        #[arg(long)]
        n: u32,
        /// Sampling interval h in hours.
        #[arg(long)]
        h: f64,
        /// Decision interval H in sigma units.
        #[arg(long = "H")]
        decision_interval: f64,
    },
    /// Search the design space and write the non-dominated front.
    Optimize,
    /// Re-optimize with factors raised one at a time and report the
    /// front endpoints per factor.
    Sensitivity {
        /// Sweep step, e.g. `--spec c0=10:20`; repeatable.
        #[arg(long = "spec", value_name = "FACTOR=LOW:HIGH")]
        specs: Vec<String>,
    },
    /// Monte-Carlo run-length estimate next to the closed-form value.
    Simulate {
        /// Sample size (echoed in the report; the standardized stream does
        /// not depend on it).
        #[arg(long)]
        n: Option<u32>,
        /// Reference value K in sigma units.
        #[arg(long = "K")]
        reference_value: f64,
        /// Decision interval H in sigma units.
        #[arg(long = "H")]
        decision_interval: f64,
        /// Shift applied to the observation stream (0 = in control).
        #[arg(long, default_value_t = 0.0)]
        shift: f64,
        /// Number of simulated run lengths.
        #[arg(long, default_value_t = 200_000)]
        replications: u64,
    },
}

fn main() -> anyhow::Result<()> {
    let cli = Cli::parse();
    let overrides = Overrides {
        seed: cli.seed,
        out: cli.out.clone(),
        format: cli.format.map(Into::into),
        variant: cli.variant.map(Into::into),
        constraints: cli.constraints.map(Into::into),
    };
    let mut config = RunConfig::load(&cli.config)?;
    overrides.apply(&mut config);

    match cli.command {
        Command::Evaluate {
            n,
            h,
            decision_interval,
        } => cmd_evaluate(&config, n, h, decision_interval, cli.out.as_deref()),
        Command::Optimize => cmd_optimize(&config),
        Command::Sensitivity { specs } => {
            let parsed: anyhow::Result<Vec<SensitivitySpec>> =
                specs.iter().map(|s| SensitivitySpec::parse(s)).collect();
            cmd_sensitivity(&config, &parsed?, cli.out.as_deref())
        }
        Command::Simulate {
            n,
            reference_value,
            decision_interval,
            shift,
            replications,
        } => cmd_simulate(
            &config,
            n,
            reference_value,
            decision_interval,
            shift,
            replications,
            cli.out.as_deref(),
        ),
    }
}
