//! Run configuration: a single TOML document bundling the process model,
//! cost constants, design space, constraints, optimizer settings, and
//! output target. Unknown keys are rejected and all nested invariants are
//! checked at load time.

use std::path::{Path, PathBuf};

use anyhow::{bail, Context};
use serde::{Deserialize, Serialize};

use cusum_design::{
    ArlConstraints, CostModelVariant, CostTimeParams, DesignProblem, DesignSpace, MoeaConfig,
    ProcessModel,
};

/// Bundled configuration for the bottling-line scenario; usable as
/// `--config example_sec5` without a file on disk.
pub const EXAMPLE_SEC5: &str = include_str!("../fixtures/example_sec5.toml");

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Csv,
    Json,
}

impl OutputFormat {
    pub fn label(self) -> &'static str {
        match self {
            OutputFormat::Csv => "csv",
            OutputFormat::Json => "json",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    pub format: OutputFormat,
    pub path: PathBuf,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub variant: CostModelVariant,
    pub process: ProcessModel,
    pub costs: CostTimeParams,
    pub space: DesignSpace,
    pub constraints: ArlConstraints,
    pub moea: MoeaConfig,
    pub output: OutputConfig,
}

impl RunConfig {
    /// Load a configuration from a path, or from the bundled fixture when
    /// the argument names one (`example_sec5`).
    pub fn load(source: &str) -> anyhow::Result<Self> {
        if source == "example_sec5" {
            return Self::from_toml(EXAMPLE_SEC5);
        }
        let text = std::fs::read_to_string(Path::new(source))
            .with_context(|| format!("reading config file {source}"))?;
        Self::from_toml(&text).with_context(|| format!("in config file {source}"))
    }

    pub fn from_toml(text: &str) -> anyhow::Result<Self> {
        let config: RunConfig = toml::from_str(text).context("parsing config")?;
        config.validate()?;
        Ok(config)
    }

    pub fn to_toml(&self) -> anyhow::Result<String> {
        toml::to_string(self).context("serializing config")
    }

    pub fn validate(&self) -> anyhow::Result<()> {
        self.process.validate()?;
        self.costs.validate()?;
        self.space.validate()?;
        self.constraints.validate()?;
        self.moea.validate()?;
        Ok(())
    }

    pub fn problem(&self) -> anyhow::Result<DesignProblem> {
        Ok(DesignProblem::new(
            self.process,
            self.costs,
            self.space,
            self.constraints,
            self.variant,
        )?)
    }
}

/// Input parameters that the sensitivity sweep can move.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Factor {
    Delta,
    Lambda,
    C0,
    C1,
    W,
    YCost,
    D,
    YVar,
    T,
    T0,
    T1,
    T2,
}

impl Factor {
    pub const ALL: [Factor; 12] = [
        Factor::Delta,
        Factor::Lambda,
        Factor::C0,
        Factor::C1,
        Factor::W,
        Factor::YCost,
        Factor::D,
        Factor::YVar,
        Factor::T,
        Factor::T0,
        Factor::T1,
        Factor::T2,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Factor::Delta => "delta",
            Factor::Lambda => "lambda",
            Factor::C0 => "c0",
            Factor::C1 => "c1",
            Factor::W => "w",
            Factor::YCost => "y_cost",
            Factor::D => "d",
            Factor::YVar => "y_var",
            Factor::T => "t",
            Factor::T0 => "t0",
            Factor::T1 => "t1",
            Factor::T2 => "t2",
        }
    }

    /// Current value of the factor in a configuration.
    pub fn read(self, config: &RunConfig) -> f64 {
        match self {
            Factor::Delta => config.process.delta,
            Factor::Lambda => config.process.lambda,
            Factor::C0 => config.costs.c0,
            Factor::C1 => config.costs.c1,
            Factor::W => config.costs.w,
            Factor::YCost => config.costs.y_cost,
            Factor::D => config.costs.d,
            Factor::YVar => config.costs.y_var,
            Factor::T => config.costs.t,
            Factor::T0 => config.costs.t0,
            Factor::T1 => config.costs.t1,
            Factor::T2 => config.costs.t2,
        }
    }

    pub fn write(self, config: &mut RunConfig, value: f64) {
        match self {
            Factor::Delta => config.process.delta = value,
            Factor::Lambda => config.process.lambda = value,
            Factor::C0 => config.costs.c0 = value,
            Factor::C1 => config.costs.c1 = value,
            Factor::W => config.costs.w = value,
            Factor::YCost => config.costs.y_cost = value,
            Factor::D => config.costs.d = value,
            Factor::YVar => config.costs.y_var = value,
            Factor::T => config.costs.t = value,
            Factor::T0 => config.costs.t0 = value,
            Factor::T1 => config.costs.t1 = value,
            Factor::T2 => config.costs.t2 = value,
        }
    }
}

impl std::str::FromStr for Factor {
    type Err = anyhow::Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Factor::ALL
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or_else(|| {
                let names: Vec<&str> = Factor::ALL.iter().map(|f| f.name()).collect();
                anyhow::anyhow!("unknown factor {s:?}; expected one of {}", names.join(", "))
            })
    }
}

impl std::fmt::Display for Factor {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// One one-factor-at-a-time sweep step: re-optimize with `factor` raised
/// from `low` to `high`, everything else at its base value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SensitivitySpec {
    pub factor: Factor,
    pub low: f64,
    pub high: f64,
}

impl SensitivitySpec {
    /// Parse the CLI form `factor=low:high`.
    pub fn parse(text: &str) -> anyhow::Result<Self> {
        let (name, levels) = text
            .split_once('=')
            .ok_or_else(|| anyhow::anyhow!("expected FACTOR=LOW:HIGH, got {text:?}"))?;
        let (low, high) = levels
            .split_once(':')
            .ok_or_else(|| anyhow::anyhow!("expected FACTOR=LOW:HIGH, got {text:?}"))?;
        let spec = SensitivitySpec {
            factor: name.trim().parse()?,
            low: low.trim().parse().context("parsing the low level")?,
            high: high.trim().parse().context("parsing the high level")?,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> anyhow::Result<()> {
        if !(self.low.is_finite() && self.high.is_finite()) {
            bail!("factor levels must be finite");
        }
        if self.low == self.high {
            bail!("low and high levels of {} coincide at {}", self.factor, self.low);
        }
        Ok(())
    }

    /// Configuration with the factor moved to its high level.
    pub fn at_high(&self, base: &RunConfig) -> anyhow::Result<RunConfig> {
        let mut config = base.clone();
        self.factor.write(&mut config, self.high);
        config.validate()?;
        Ok(config)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use cusum_design::ConstraintPolicy;

    #[test]
    fn bundled_fixture_loads_and_validates() {
        let config = RunConfig::load("example_sec5").unwrap();
        assert_eq!(config.process.delta, 1.0);
        assert_eq!(config.costs.c0, 10.0);
        assert_eq!(config.space.n_range, (2, 20));
        assert_eq!(config.constraints.policy, ConstraintPolicy::Enforce);
        assert_eq!(config.variant, CostModelVariant::Literal);
        assert_eq!(config.moea.population_size, 100);
    }

    #[test]
    fn round_trip_is_a_fixed_point() {
        let config = RunConfig::load("example_sec5").unwrap();
        let dumped = config.to_toml().unwrap();
        let reloaded = RunConfig::from_toml(&dumped).unwrap();
        assert_eq!(config, reloaded);
        assert_eq!(dumped, reloaded.to_toml().unwrap());
    }

    #[test]
    fn unknown_keys_are_rejected() {
        let mut text = EXAMPLE_SEC5.to_string();
        text.push_str("\n[extra]\nkey = 1\n");
        assert!(RunConfig::from_toml(&text).is_err());

        let with_typo = EXAMPLE_SEC5.replace("lambda = 0.01", "lambda = 0.01\nlambdaa = 0.02");
        assert!(RunConfig::from_toml(&with_typo).is_err());
    }

    #[test]
    fn invariant_violations_fail_the_load() {
        let inverted = EXAMPLE_SEC5.replace("c1 = 100.0", "c1 = 5.0");
        assert!(RunConfig::from_toml(&inverted).is_err());
        let odd_population = EXAMPLE_SEC5.replace("population_size = 100", "population_size = 99");
        assert!(RunConfig::from_toml(&odd_population).is_err());
    }

    #[test]
    fn sensitivity_spec_parsing() {
        let spec = SensitivitySpec::parse("c0=10:20").unwrap();
        assert_eq!(spec.factor, Factor::C0);
        assert_eq!((spec.low, spec.high), (10.0, 20.0));

        let spec = SensitivitySpec::parse("y_cost = 25 : 50").unwrap();
        assert_eq!(spec.factor, Factor::YCost);

        assert!(SensitivitySpec::parse("c0=10").is_err());
        assert!(SensitivitySpec::parse("nope=1:2").is_err());
        assert!(SensitivitySpec::parse("c0=10:10").is_err());
    }

    #[test]
    fn sensitivity_spec_applies_to_the_right_field() {
        let base = RunConfig::load("example_sec5").unwrap();
        let moved = SensitivitySpec::parse("lambda=0.01:0.05")
            .unwrap()
            .at_high(&base)
            .unwrap();
        assert_eq!(moved.process.lambda, 0.05);
        assert_eq!(moved.costs, base.costs);

        for factor in Factor::ALL {
            let mut config = base.clone();
            factor.write(&mut config, factor.read(&base) + 0.25);
            assert_eq!(factor.read(&config), factor.read(&base) + 0.25, "{factor}");
        }
    }
}
