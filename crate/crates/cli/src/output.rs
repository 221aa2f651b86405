//! Table and file rendering. Front CSVs carry the fixed header
//! `C_E,ARL_delta,n,h,H` with two-decimal values (n as integer) after a
//! `#`-prefixed metadata block; JSON mirrors the rows at full precision.
//! Nothing volatile goes into the metadata, so re-running a seeded command
//! reproduces every output byte for byte.

use std::path::{Path, PathBuf};

use serde::Serialize;

use cusum_design::{ConstraintPolicy, CostModelVariant, DesignProblem, ParetoFront};

pub const FRONT_CSV_HEADER: &str = "C_E,ARL_delta,n,h,H";

/// Provenance block written into every output file.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Metadata {
    pub seed: u64,
    pub variant: CostModelVariant,
    pub constraints: ConstraintPolicy,
    pub version: &'static str,
}

impl Metadata {
    pub fn new(seed: u64, variant: CostModelVariant, constraints: ConstraintPolicy) -> Self {
        Self {
            seed,
            variant,
            constraints,
            version: env!("CARGO_PKG_VERSION"),
        }
    }

    fn comment_block(&self) -> String {
        format!(
            "# seed: {}\n# variant: {}\n# constraints: {}\n# version: {}\n",
            self.seed, self.variant, self.constraints, self.version
        )
    }
}

/// One reported design row.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FrontRow {
    #[serde(rename = "C_E")]
    pub cost: f64,
    #[serde(rename = "ARL_delta")]
    pub arl_delta: f64,
    pub n: u32,
    pub h: f64,
    #[serde(rename = "H")]
    pub decision_interval: f64,
    pub feasible: bool,
}

/// Decode an optimizer front into reportable rows.
pub fn front_rows(front: &ParetoFront, problem: &DesignProblem) -> Vec<FrontRow> {
    front
        .points
        .iter()
        .map(|point| {
            let design = problem.decode(&point.genes);
            FrontRow {
                cost: point.objectives[0],
                arl_delta: point.objectives[1],
                n: design.sample_size,
                h: design.sampling_interval,
                decision_interval: design.decision_interval,
                feasible: point.feasible,
            }
        })
        .collect()
}

fn csv_row(row: &FrontRow) -> String {
    format!(
        "{:.2},{:.2},{},{:.2},{:.2}",
        row.cost, row.arl_delta, row.n, row.h, row.decision_interval
    )
}

pub fn render_front_csv(rows: &[FrontRow], metadata: &Metadata) -> String {
    let mut out = metadata.comment_block();
    out.push_str(FRONT_CSV_HEADER);
    out.push('\n');
    for row in rows {
        out.push_str(&csv_row(row));
        out.push('\n');
    }
    out
}

/// Plot data: bare `(C_E, ARL_delta)` pairs at full precision.
pub fn render_plot_csv(rows: &[FrontRow], metadata: &Metadata) -> String {
    let mut out = metadata.comment_block();
    out.push_str("C_E,ARL_delta\n");
    for row in rows {
        out.push_str(&format!("{},{}\n", row.cost, row.arl_delta));
    }
    out
}

/// Percentile-sampled rows (1st, then every 5th up to the 100th) by the
/// nearest-rank rule over the cost-ordered front. The summary is a subset
/// of the front and preserves its ordering.
pub fn percentile_rows(rows: &[FrontRow]) -> Vec<(u32, FrontRow)> {
    if rows.is_empty() {
        return Vec::new();
    }
    let levels = std::iter::once(1u32).chain((1..=20).map(|k| 5 * k));
    levels
        .map(|percentile| {
            let rank = ((f64::from(percentile) / 100.0 * rows.len() as f64).ceil() as usize)
                .clamp(1, rows.len());
            (percentile, rows[rank - 1])
        })
        .collect()
}

#[derive(Debug, Serialize)]
struct PercentileRow {
    percentile: u32,
    #[serde(flatten)]
    row: FrontRow,
}

#[derive(Debug, Serialize)]
struct FrontDocument<'a> {
    metadata: &'a Metadata,
    front: &'a [FrontRow],
    percentiles: Vec<PercentileRow>,
}

pub fn render_front_json(rows: &[FrontRow], metadata: &Metadata) -> String {
    let document = FrontDocument {
        metadata,
        front: rows,
        percentiles: percentile_rows(rows)
            .into_iter()
            .map(|(percentile, row)| PercentileRow { percentile, row })
            .collect(),
    };
    let mut text = serde_json::to_string_pretty(&document).expect("front rows serialize");
    text.push('\n');
    text
}

/// Sibling path with an extra suffix before the extension:
/// `front.csv` → `front.percentiles.csv`.
pub fn sibling_path(path: &Path, suffix: &str, extension: &str) -> PathBuf {
    let stem = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "output".to_string());
    path.with_file_name(format!("{stem}.{suffix}.{extension}"))
}

/// Render the percentile table for stdout (and the percentile CSV file).
pub fn render_percentiles_csv(rows: &[FrontRow], metadata: &Metadata) -> String {
    let mut out = metadata.comment_block();
    out.push_str("percentile,");
    out.push_str(FRONT_CSV_HEADER);
    out.push('\n');
    for (percentile, row) in percentile_rows(rows) {
        out.push_str(&format!("{percentile},"));
        out.push_str(&csv_row(&row));
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample_rows(count: usize) -> Vec<FrontRow> {
        (0..count)
            .map(|i| FrontRow {
                cost: 9.0 + i as f64 * 0.05,
                arl_delta: 9.0 - i as f64 * 0.07,
                n: 2,
                h: 0.36,
                decision_interval: 4.19,
                feasible: true,
            })
            .collect()
    }

    fn metadata() -> Metadata {
        Metadata::new(42, CostModelVariant::Literal, ConstraintPolicy::Enforce)
    }

    #[test]
    fn csv_header_and_formatting_are_stable() {
        let rows = sample_rows(2);
        let csv = render_front_csv(&rows, &metadata());
        let mut lines = csv.lines().skip_while(|l| l.starts_with('#'));
        assert_eq!(lines.next(), Some(FRONT_CSV_HEADER));
        assert_eq!(lines.next(), Some("9.00,9.00,2,0.36,4.19"));
        assert_eq!(lines.next(), Some("9.05,8.93,2,0.36,4.19"));
    }

    #[test]
    fn metadata_block_lists_provenance() {
        let csv = render_front_csv(&sample_rows(1), &metadata());
        assert!(csv.starts_with("# seed: 42\n# variant: literal\n# constraints: enforce\n"));
    }

    #[test]
    fn percentiles_are_a_front_subset_in_order() {
        let rows = sample_rows(82);
        let summary = percentile_rows(&rows);
        assert_eq!(summary.len(), 21);
        assert_eq!(summary[0].0, 1);
        assert_eq!(summary.last().unwrap().0, 100);
        // Last percentile hits the last row exactly.
        assert_eq!(summary.last().unwrap().1, rows[81]);
        let mut last_cost = f64::NEG_INFINITY;
        for (_, row) in &summary {
            assert!(rows.contains(row));
            assert!(row.cost >= last_cost);
            last_cost = row.cost;
        }
    }

    #[test]
    fn percentiles_of_tiny_fronts_repeat_rows() {
        let rows = sample_rows(2);
        let summary = percentile_rows(&rows);
        assert_eq!(summary.len(), 21);
        assert!(summary.iter().all(|(_, row)| rows.contains(row)));
    }

    #[test]
    fn json_mirrors_rows_at_full_precision() {
        let rows = vec![FrontRow {
            cost: 9.402323106194451,
            arl_delta: 8.72140350790599,
            n: 2,
            h: 0.3612345,
            decision_interval: 4.1923456,
            feasible: true,
        }];
        let json = render_front_json(&rows, &metadata());
        let value: serde_json::Value = serde_json::from_str(&json).unwrap();
        assert_eq!(value["front"][0]["C_E"], 9.402323106194451);
        assert_eq!(value["front"][0]["ARL_delta"], 8.72140350790599);
        assert_eq!(value["metadata"]["seed"], 42);
        assert_eq!(value["percentiles"][0]["percentile"], 1);
    }

    #[test]
    fn sibling_paths_keep_the_directory() {
        let path = Path::new("/tmp/out/front.csv");
        assert_eq!(
            sibling_path(path, "plot", "csv"),
            PathBuf::from("/tmp/out/front.plot.csv")
        );
    }
}
