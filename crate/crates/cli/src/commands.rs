//! Implementations of the four CLI commands.

use std::path::PathBuf;

use anyhow::{bail, Context};

use cusum_design::economics::{cost_breakdown, CostModelVariant};
use cusum_design::moea::evolve;
use cusum_design::oracles::{simulate_run_length, SimulationPlan};
use cusum_design::run_length::{
    arl_profile, combine_two_sided, one_sided_arl, ChartDesign, SIEGMUND_OFFSET,
};
use cusum_design::ConstraintPolicy;

use crate::config::{OutputFormat, RunConfig, SensitivitySpec};
use crate::output::{
    front_rows, percentile_rows, render_front_csv, render_front_json, render_percentiles_csv,
    render_plot_csv, sibling_path, FrontRow, Metadata, FRONT_CSV_HEADER,
};

/// Values of the shared flags after merging CLI overrides into the config.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub seed: Option<u64>,
    pub out: Option<PathBuf>,
    pub format: Option<OutputFormat>,
    pub variant: Option<CostModelVariant>,
    pub constraints: Option<ConstraintPolicy>,
}

impl Overrides {
    pub fn apply(&self, config: &mut RunConfig) {
        if let Some(seed) = self.seed {
            config.moea.rng_seed = seed;
        }
        if let Some(variant) = self.variant {
            config.variant = variant;
        }
        if let Some(policy) = self.constraints {
            config.constraints.policy = policy;
        }
        if let Some(format) = self.format {
            config.output.format = format;
        }
        if let Some(path) = &self.out {
            config.output.path = path.clone();
        }
    }
}

fn write_file(path: &std::path::Path, contents: &str) -> anyhow::Result<()> {
    if let Some(parent) = path.parent() {
        if !parent.as_os_str().is_empty() {
            std::fs::create_dir_all(parent)
                .with_context(|| format!("creating {}", parent.display()))?;
        }
    }
    std::fs::write(path, contents).with_context(|| format!("writing {}", path.display()))
}

/// Audit a single design point: run lengths, timing quantities, and every
/// cost term, under both cost-model variants.
pub fn cmd_evaluate(
    config: &RunConfig,
    n: u32,
    h: f64,
    decision_interval: f64,
    out: Option<&std::path::Path>,
) -> anyhow::Result<()> {
    let design = ChartDesign::for_shift(n, h, decision_interval, config.process.delta)?;
    if !config.space.contains(&design) {
        bail!(
            "design (n={n}, h={h}, H={decision_interval}) is outside the space \
             n in [{}, {}], h in [{}, {}], H in [{}, {}]",
            config.space.n_range.0,
            config.space.n_range.1,
            config.space.h_range.0,
            config.space.h_range.1,
            config.space.decision_range.0,
            config.space.decision_range.1,
        );
    }

    let problem = config.problem()?;
    let profile = arl_profile(config.process.delta, decision_interval)?;
    let literal = cost_breakdown(
        &design,
        &config.process,
        &config.costs,
        &profile,
        CostModelVariant::Literal,
    )?;
    let reduced = cost_breakdown(
        &design,
        &config.process,
        &config.costs,
        &profile,
        CostModelVariant::NoInControlCost,
    )?;
    let evaluation = problem.evaluate(&design)?;

    println!(
        "design: n={} h={} H={} K={}",
        design.sample_size,
        design.sampling_interval,
        design.decision_interval,
        design.reference_value
    );
    println!("ARL_0     = {:.4}", profile.arl0);
    println!("ARL_delta = {:.4}", profile.arl_delta);
    println!("tau       = {:.6}  (expected time from last sample to the cause)", literal.time_to_cause);
    println!("S         = {:.6}  (expected in-control samples)", literal.in_control_samples);
    println!("cost terms per cycle:");
    println!("  in-control quality      c0/lambda          = {:>12.4}", literal.in_control_quality);
    println!("  out-of-control quality  c1*(...)           = {:>12.4}", literal.out_of_control_quality);
    println!("  false alarms            S*w/ARL_0          = {:>12.4}", literal.false_alarm);
    println!("  repair                  y_cost             = {:>12.4}", literal.repair);
    println!("  sampling                (d+n*y_var)/h*(...) = {:>11.4}", literal.sampling);
    println!("  cycle length (hours)                       = {:>12.4}", literal.cycle_length);
    println!("C_E (literal)            = {:.4}", literal.total);
    println!("C_E (no-in-control-cost) = {:.4}", reduced.total);
    println!(
        "feasible under policy {}: {} (violation {:.4})",
        config.constraints.policy, evaluation.feasible, evaluation.violation
    );

    if let Some(path) = out {
        let metadata = Metadata::new(config.moea.rng_seed, config.variant, config.constraints.policy);
        let text = match config.output.format {
            OutputFormat::Json => {
                let mut json = serde_json::to_string_pretty(&serde_json::json!({
                    "metadata": metadata,
                    "design": { "n": n, "h": h, "H": decision_interval, "K": design.reference_value },
                    "ARL_0": profile.arl0,
                    "ARL_delta": profile.arl_delta,
                    "tau": literal.time_to_cause,
                    "S": literal.in_control_samples,
                    "terms": {
                        "in_control_quality": literal.in_control_quality,
                        "out_of_control_quality": literal.out_of_control_quality,
                        "false_alarm": literal.false_alarm,
                        "repair": literal.repair,
                        "sampling": literal.sampling,
                        "cycle_length": literal.cycle_length,
                    },
                    "C_E_literal": literal.total,
                    "C_E_no_in_control_cost": reduced.total,
                    "feasible": evaluation.feasible,
                    "violation": evaluation.violation,
                }))?;
                json.push('\n');
                json
            }
            OutputFormat::Csv => {
                let cost = match config.variant {
                    CostModelVariant::Literal => literal.total,
                    CostModelVariant::NoInControlCost => reduced.total,
                };
                let row = FrontRow {
                    cost,
                    arl_delta: profile.arl_delta,
                    n,
                    h,
                    decision_interval,
                    feasible: evaluation.feasible,
                };
                render_front_csv(std::slice::from_ref(&row), &metadata)
            }
        };
        write_file(path, &text)?;
        println!("wrote {}", path.display());
    }
    Ok(())
}

/// Run the optimizer and write the front, its percentile summary, and the
/// plot data.
pub fn cmd_optimize(config: &RunConfig) -> anyhow::Result<()> {
    let problem = config.problem()?;
    let front = evolve(&problem, &config.moea)?;
    if front.is_empty() {
        bail!("optimizer returned an empty front");
    }
    let rows = front_rows(&front, &problem);
    let metadata = Metadata::new(config.moea.rng_seed, config.variant, config.constraints.policy);

    let path = &config.output.path;
    let plot_path = sibling_path(path, "plot", "csv");
    match config.output.format {
        OutputFormat::Csv => {
            let percentile_path = sibling_path(path, "percentiles", "csv");
            write_file(path, &render_front_csv(&rows, &metadata))?;
            write_file(&percentile_path, &render_percentiles_csv(&rows, &metadata))?;
            write_file(&plot_path, &render_plot_csv(&rows, &metadata))?;
            println!(
                "wrote {} ({} rows), {}, {}",
                path.display(),
                rows.len(),
                percentile_path.display(),
                plot_path.display()
            );
        }
        OutputFormat::Json => {
            write_file(path, &render_front_json(&rows, &metadata))?;
            write_file(&plot_path, &render_plot_csv(&rows, &metadata))?;
            println!(
                "wrote {} ({} rows), {}",
                path.display(),
                rows.len(),
                plot_path.display()
            );
        }
    }

    let infeasible = rows.iter().filter(|r| !r.feasible).count();
    if infeasible > 0 {
        println!(
            "warning: no design satisfied the constraints; reporting the {} least-violating rows",
            infeasible
        );
    }
    let first = rows.first().unwrap();
    let last = rows.last().unwrap();
    println!(
        "seed {} variant {} constraints {}: {} non-dominated designs",
        metadata.seed,
        metadata.variant,
        metadata.constraints,
        rows.len()
    );
    println!(
        "endpoints: (C_E {:.2}, ARL_delta {:.2}) .. (C_E {:.2}, ARL_delta {:.2})",
        first.cost, first.arl_delta, last.cost, last.arl_delta
    );
    println!("percentile,{FRONT_CSV_HEADER}");
    for (percentile, row) in percentile_rows(&rows) {
        println!(
            "{percentile},{:.2},{:.2},{},{:.2},{:.2}",
            row.cost, row.arl_delta, row.n, row.h, row.decision_interval
        );
    }
    Ok(())
}

/// Two front-endpoint rows for one completed optimization.
struct EndpointPair {
    label: String,
    low: f64,
    high: f64,
    rows: [FrontRow; 2],
}

/// One-factor-at-a-time sweep: re-optimize with each factor at its high
/// level and report the two front endpoints per factor.
pub fn cmd_sensitivity(
    config: &RunConfig,
    specs: &[SensitivitySpec],
    out: Option<&std::path::Path>,
) -> anyhow::Result<()> {
    if specs.is_empty() {
        bail!("no sweep specs given; pass at least one --spec FACTOR=LOW:HIGH");
    }

    let endpoints_of = |run_config: &RunConfig| -> anyhow::Result<[FrontRow; 2]> {
        let problem = run_config.problem()?;
        let front = evolve(&problem, &run_config.moea)?;
        let rows = front_rows(&front, &problem);
        let first = *rows.first().context("empty front")?;
        let last = *rows.last().context("empty front")?;
        Ok([first, last])
    };

    let mut table: Vec<EndpointPair> = Vec::new();
    let mut failures = Vec::new();

    match endpoints_of(config) {
        Ok(rows) => table.push(EndpointPair {
            label: "base".into(),
            low: f64::NAN,
            high: f64::NAN,
            rows,
        }),
        Err(error) => failures.push(format!("base: {error:#}")),
    }
    for spec in specs {
        let moved = spec.at_high(config);
        match moved.and_then(|c| endpoints_of(&c)) {
            Ok(rows) => table.push(EndpointPair {
                label: spec.factor.to_string(),
                low: spec.low,
                high: spec.high,
                rows,
            }),
            Err(error) => failures.push(format!("{}: {error:#}", spec.factor)),
        }
    }

    println!("factor,low,high,endpoint,{FRONT_CSV_HEADER}");
    let mut file_body = String::from("factor,low,high,endpoint,C_E,ARL_delta,n,h,H\n");
    for pair in &table {
        for (endpoint, row) in [("min_C_E", &pair.rows[0]), ("max_C_E", &pair.rows[1])] {
            let levels = if pair.low.is_nan() {
                ",".to_string()
            } else {
                format!("{},{}", pair.low, pair.high)
            };
            let line = format!(
                "{},{levels},{endpoint},{:.2},{:.2},{},{:.2},{:.2}",
                pair.label, row.cost, row.arl_delta, row.n, row.h, row.decision_interval
            );
            println!("{line}");
            file_body.push_str(&line);
            file_body.push('\n');
        }
    }
    for failure in &failures {
        eprintln!("sweep failure: {failure}");
    }

    if let Some(path) = out {
        let metadata = Metadata::new(config.moea.rng_seed, config.variant, config.constraints.policy);
        let text = match config.output.format {
            OutputFormat::Csv => {
                format!(
                    "# seed: {}\n# variant: {}\n# constraints: {}\n# version: {}\n{file_body}",
                    metadata.seed, metadata.variant, metadata.constraints, metadata.version
                )
            }
            OutputFormat::Json => {
                let entries: Vec<serde_json::Value> = table
                    .iter()
                    .map(|pair| {
                        serde_json::json!({
                            "factor": pair.label,
                            "low": if pair.low.is_nan() { None } else { Some(pair.low) },
                            "high": if pair.high.is_nan() { None } else { Some(pair.high) },
                            "min_C_E": pair.rows[0],
                            "max_C_E": pair.rows[1],
                        })
                    })
                    .collect();
                let mut json = serde_json::to_string_pretty(&serde_json::json!({
                    "metadata": metadata,
                    "sweep": entries,
                }))?;
                json.push('\n');
                json
            }
        };
        write_file(path, &text)?;
        println!("wrote {}", path.display());
    }

    if !failures.is_empty() {
        bail!("{} sweep step(s) failed", failures.len());
    }
    Ok(())
}

/// Monte-Carlo run-length estimate next to the closed-form value.
#[allow(clippy::too_many_arguments)]
pub fn cmd_simulate(
    config: &RunConfig,
    n: Option<u32>,
    reference_value: f64,
    decision_interval: f64,
    shift: f64,
    replications: u64,
    out: Option<&std::path::Path>,
) -> anyhow::Result<()> {
    let plan = SimulationPlan {
        replications,
        rng_seed: config.moea.rng_seed,
        shift,
        reference_value,
        decision_interval,
    };
    let estimate = simulate_run_length(&plan)?;

    let b = decision_interval + SIEGMUND_OFFSET;
    let magnitude = shift.abs();
    let lower = one_sided_arl(-magnitude - reference_value, b)?;
    let upper = one_sided_arl(magnitude - reference_value, b)?;
    let closed_form = combine_two_sided(lower, upper)?;
    let relative_error = (estimate.mean - closed_form).abs() / closed_form;

    if let Some(n) = n {
        println!("sample size (informational): {n}");
    }
    println!(
        "plan: K={reference_value} H={decision_interval} shift={shift} \
         replications={replications} seed={}",
        plan.rng_seed
    );
    println!(
        "simulated ARL  = {:.4} +/- {:.4} (95% CI)",
        estimate.mean, estimate.half_width
    );
    println!("closed-form ARL = {closed_form:.4}");
    println!("relative error  = {:.4}", relative_error);

    if let Some(path) = out {
        let metadata = Metadata::new(plan.rng_seed, config.variant, config.constraints.policy);
        let text = match config.output.format {
            OutputFormat::Json => {
                let mut json = serde_json::to_string_pretty(&serde_json::json!({
                    "metadata": metadata,
                    "plan": {
                        "K": reference_value,
                        "H": decision_interval,
                        "shift": shift,
                        "replications": replications,
                        "n": n,
                    },
                    "simulated_mean": estimate.mean,
                    "half_width": estimate.half_width,
                    "closed_form": closed_form,
                    "relative_error": relative_error,
                }))?;
                json.push('\n');
                json
            }
            OutputFormat::Csv => format!(
                "# seed: {}\n# variant: {}\n# constraints: {}\n# version: {}\n\
                 K,H,shift,replications,simulated_mean,half_width,closed_form,relative_error\n\
                 {reference_value},{decision_interval},{shift},{replications},{},{},{closed_form},{relative_error}\n",
                metadata.seed,
                metadata.variant,
                metadata.constraints,
                metadata.version,
                estimate.mean,
                estimate.half_width,
            ),
        };
        write_file(path, &text)?;
        println!("wrote {}", path.display());
    }
    Ok(())
}
