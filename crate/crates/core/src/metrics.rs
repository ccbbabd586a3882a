//! Experiment result aggregation and CSV emission.
//!
//! The CSV layout is stable: optional `# key = value` metadata comment
//! lines, a header row, then one record per (sweep value, variant, metric)
//! with columns `sweep_param,sweep_value,variant,metric,mean,std_err,n_reps`.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::Path;

use crate::error::{Error, Result};
use crate::sim::ReplicationRecord;

pub const CSV_HEADER: &str = "sweep_param,sweep_value,variant,metric,mean,std_err,n_reps";

/// One aggregated record.
#[derive(Debug, Clone, PartialEq)]
pub struct AggregateRow {
    pub sweep_param: String,
    pub sweep_value: f64,
    pub variant: String,
    pub metric: String,
    pub mean: f64,
    pub std_err: f64,
    pub n_reps: usize,
}

/// Raw per-replication records at one sweep value.
#[derive(Debug, Clone)]
pub struct SweepPoint {
    pub value: f64,
    pub records: Vec<ReplicationRecord>,
}

/// Aggregated experiment results plus the raw records they came from.
#[derive(Debug, Clone, Default)]
pub struct MetricsReport {
    pub sweep_param: String,
    pub metadata: BTreeMap<String, String>,
    pub points: Vec<SweepPoint>,
    pub rows: Vec<AggregateRow>,
}

/// Sample mean and standard error. The standard error needs at least two
/// replications and is NaN below that.
pub fn mean_and_std_err(values: &[f64]) -> (f64, f64) {
    let n = values.len();
    if n == 0 {
        return (f64::NAN, f64::NAN);
    }
    let mean = values.iter().sum::<f64>() / n as f64;
    if n < 2 {
        return (mean, f64::NAN);
    }
    let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n - 1) as f64;
    (mean, (var / n as f64).sqrt())
}

impl MetricsReport {
    pub fn row(&self, sweep_value: f64, variant: &str, metric: &str) -> Option<&AggregateRow> {
        self.rows.iter().find(|r| {
            r.sweep_value == sweep_value && r.variant == variant && r.metric == metric
        })
    }

    pub fn sweep_values(&self) -> Vec<f64> {
        let mut values: Vec<f64> = self.rows.iter().map(|r| r.sweep_value).collect();
        values.sort_by(|a, b| a.partial_cmp(b).unwrap());
        values.dedup();
        values
    }

    /// Absorb another report's rows and points (e.g. the second procedure
    /// of a comparison experiment). Metadata of `self` wins on key clashes.
    pub fn merge(&mut self, other: MetricsReport) {
        for (k, v) in other.metadata {
            self.metadata.entry(k).or_insert(v);
        }
        self.points.extend(other.points);
        self.rows.extend(other.rows);
    }

    /// Rewrite every variant label through `f`.
    pub fn relabel_variants(&mut self, f: impl Fn(&str) -> String) {
        for row in &mut self.rows {
            row.variant = f(&row.variant);
        }
    }

    /// Drop all rows whose metric is not `metric`.
    pub fn retain_metric(&mut self, metric: &str) {
        self.rows.retain(|r| r.metric == metric);
    }

    pub fn to_csv_string(&self) -> String {
        let mut out = String::new();
        for (k, v) in &self.metadata {
            out.push_str(&format!("# {k} = {v}\n"));
        }
        out.push_str(CSV_HEADER);
        out.push('\n');
        for r in &self.rows {
            out.push_str(&format!(
                "{},{},{},{},{},{},{}\n",
                r.sweep_param, r.sweep_value, r.variant, r.metric, r.mean, r.std_err, r.n_reps
            ));
        }
        out
    }

    pub fn write_csv(&self, path: &Path) -> Result<()> {
        let mut file = std::fs::File::create(path)?;
        file.write_all(self.to_csv_string().as_bytes())?;
        Ok(())
    }

    /// Parse a CSV produced by [`to_csv_string`]; raw points are not part
    /// of the file, only metadata and aggregate rows come back.
    pub fn from_csv_str(text: &str) -> Result<MetricsReport> {
        let mut metadata = BTreeMap::new();
        let mut rows = Vec::new();
        let mut saw_header = false;
        for line in text.lines() {
            if line.is_empty() {
                continue;
            }
            if let Some(comment) = line.strip_prefix('#') {
                if let Some((k, v)) = comment.split_once('=') {
                    metadata.insert(k.trim().to_string(), v.trim().to_string());
                }
                continue;
            }
            if !saw_header {
                if line != CSV_HEADER {
                    return Err(Error::Config(format!("unexpected CSV header: {line}")));
                }
                saw_header = true;
                continue;
            }
            let fields: Vec<&str> = line.split(',').collect();
            if fields.len() != 7 {
                return Err(Error::Config(format!("malformed CSV record: {line}")));
            }
            let parse = |s: &str| -> Result<f64> {
                s.parse()
                    .map_err(|_| Error::Config(format!("bad number '{s}' in: {line}")))
            };
            rows.push(AggregateRow {
                sweep_param: fields[0].to_string(),
                sweep_value: parse(fields[1])?,
                variant: fields[2].to_string(),
                metric: fields[3].to_string(),
                mean: parse(fields[4])?,
                std_err: parse(fields[5])?,
                n_reps: fields[6]
                    .parse()
                    .map_err(|_| Error::Config(format!("bad count in: {line}")))?,
            });
        }
        let sweep_param = rows
            .first()
            .map(|r| r.sweep_param.clone())
            .unwrap_or_default();
        Ok(MetricsReport {
            sweep_param,
            metadata,
            points: Vec::new(),
            rows,
        })
    }
}
