//! Experiment orchestration behind the `fran` binary.
//!
//! Three built-in experiments mirror the study figures: `fig4` sweeps the
//! session arrival rate and compares the handover procedures, `fig5`
//! sweeps the mean session holding time at a fixed arrival rate, and
//! `fig6` sweeps the F-UE count per F-AP for three F-AP counts and
//! compares the allocation schemes. `custom` runs whatever sweep the
//! configuration file declares. Each run writes `<experiment>.csv` and
//! `summary.txt` into the output directory and nothing anywhere else.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use fran_core::{Error, HandoverKind, MetricsReport, Procedure, Result, Scheme, SimConfig, SweepParam};

/// Environment variable that overrides the default output directory when
/// `--out` is not given.
pub const OUT_DIR_ENV: &str = "FRAN_OUT_DIR";

/// fig4 arrival-rate grid (sessions per time unit).
pub const FIG4_ARRIVAL_RATES: [f64; 8] = [0.02, 0.06, 0.10, 0.14, 0.18, 0.22, 0.26, 0.30];
/// fig5 mean-holding-time grid, at arrival rate 0.1.
pub const FIG5_HOLDING_TIMES: [f64; 10] =
    [1.0, 2.0, 3.0, 4.0, 5.0, 6.0, 7.0, 8.0, 9.0, 10.0];
/// fig5 operating point.
pub const FIG5_ARRIVAL_RATE: f64 = 0.1;
/// fig6 F-UEs-per-F-AP grid.
pub const FIG6_FUES_PER_FAP: [f64; 8] = [1.0, 2.0, 3.0, 4.0, 5.0, 6.0, 7.0, 8.0];
/// fig6 F-AP counts, one curve set each.
pub const FIG6_N_FAPS: [usize; 3] = [10, 20, 40];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Experiment {
    Fig4,
    Fig5,
    Fig6,
    Custom,
}

impl Experiment {
    pub fn as_str(self) -> &'static str {
        match self {
            Experiment::Fig4 => "fig4",
            Experiment::Fig5 => "fig5",
            Experiment::Fig6 => "fig6",
            Experiment::Custom => "custom",
        }
    }
}

impl fmt::Display for Experiment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Experiment {
    type Err = Error;

    fn from_str(s: &str) -> Result<Experiment> {
        match s {
            "fig4" => Ok(Experiment::Fig4),
            "fig5" => Ok(Experiment::Fig5),
            "fig6" => Ok(Experiment::Fig6),
            "custom" => Ok(Experiment::Custom),
            other => Err(Error::Config(format!("unknown experiment '{other}'"))),
        }
    }
}

/// One resolved invocation.
#[derive(Debug, Clone)]
pub struct RunSpec {
    pub experiment: Experiment,
    /// Configuration file; absent means all defaults.
    pub config: Option<PathBuf>,
    pub out_dir: PathBuf,
    /// Overrides `sim.seed` from the configuration.
    pub seed: Option<u64>,
    /// Overrides `sim.replications` from the configuration.
    pub reps: Option<usize>,
    pub quiet: bool,
}

/// Load, override, and validate the configuration for `spec`.
pub fn load_config(spec: &RunSpec) -> Result<SimConfig> {
    let mut config = match &spec.config {
        Some(path) => SimConfig::from_file(path)?,
        None => SimConfig::default(),
    };
    if let Some(seed) = spec.seed {
        config.sim.seed = seed;
    }
    if let Some(reps) = spec.reps {
        config.sim.replications = reps;
    }
    config.validate()?;
    Ok(config)
}

/// Run both handover procedures over one sweep and merge the reports.
fn both_procedures(
    config: &SimConfig,
    param: SweepParam,
    values: &[f64],
) -> Result<MetricsReport> {
    let mut fran = config.clone();
    fran.sim.procedure = Procedure::Fran;
    let mut report = fran_core::run_experiment(&fran, param, values)?;
    let mut non_fran = config.clone();
    non_fran.sim.procedure = Procedure::NonFran;
    report.merge(fran_core::run_experiment(&non_fran, param, values)?);
    report
        .metadata
        .insert("procedure".into(), "fran,non_fran".into());
    Ok(report)
}

/// Build the report for `experiment` without touching the filesystem.
pub fn build_report(experiment: Experiment, config: &SimConfig) -> Result<MetricsReport> {
    match experiment {
        Experiment::Fig4 => {
            let mut cfg = config.clone();
            // The overhead study does not need the allocation game.
            cfg.sim.snapshots = 0;
            both_procedures(&cfg, SweepParam::ArrivalRate, &FIG4_ARRIVAL_RATES)
        }
        Experiment::Fig5 => {
            let mut cfg = config.clone();
            cfg.sim.snapshots = 0;
            cfg.session.arrival_rate = FIG5_ARRIVAL_RATE;
            both_procedures(&cfg, SweepParam::MeanHoldingTime, &FIG5_HOLDING_TIMES)
        }
        Experiment::Fig6 => {
            let mut cfg = config.clone();
            // The utility study needs snapshots and no session process.
            // Utility variance is dominated by the topology draw, which is
            // fixed within a replication, so trade snapshot averaging for
            // replication count: few snapshots, many replications.
            cfg.session.arrival_rate = 0.0;
            cfg.sim.snapshots = 2;
            cfg.sim.replications = config.sim.replications.saturating_mul(10);
            let mut merged: Option<MetricsReport> = None;
            for (idx, &n_faps) in FIG6_N_FAPS.iter().enumerate() {
                let mut point_cfg = cfg.clone();
                point_cfg.topology.n_faps = n_faps;
                // Decorrelate the three curve sets.
                point_cfg.sim.seed = cfg.sim.seed.wrapping_add(idx as u64);
                let mut report = fran_core::run_experiment(
                    &point_cfg,
                    SweepParam::NFuesPerFap,
                    &FIG6_FUES_PER_FAP,
                )?;
                report.retain_metric("net_utility_total");
                report.relabel_variants(|v| format!("{v}_nfaps{n_faps}"));
                match &mut merged {
                    None => merged = Some(report),
                    Some(m) => m.merge(report),
                }
            }
            let mut report = merged.expect("nonempty n_faps grid");
            report.metadata.insert(
                "n_faps".into(),
                FIG6_N_FAPS.map(|n| n.to_string()).join(","),
            );
            report.metadata.insert("arrival_rate".into(), "0".into());
            Ok(report)
        }
        Experiment::Custom => {
            let param: SweepParam = config
                .sweep
                .param
                .as_deref()
                .ok_or_else(|| {
                    Error::Config("custom experiment needs sweep.param in the config".into())
                })?
                .parse()?;
            if config.sweep.values.is_empty() {
                return Err(Error::Config(
                    "custom experiment needs nonempty sweep.values".into(),
                ));
            }
            fran_core::run_experiment(config, param, &config.sweep.values)
        }
    }
}

/// Is `rows` (already ordered by sweep value) strictly increasing in mean?
fn strictly_increasing(means: &[f64]) -> bool {
    means.windows(2).all(|w| w[1] > w[0])
}

fn means_for(report: &MetricsReport, variant: &str, metric: &str) -> Vec<f64> {
    report
        .sweep_values()
        .iter()
        .filter_map(|&v| report.row(v, variant, metric))
        .map(|r| r.mean)
        .collect()
}

struct Checks(Vec<(String, bool)>);

impl Checks {
    fn push(&mut self, name: &str, pass: bool) {
        self.0.push((name.to_string(), pass));
    }
}

/// Named property checks backing the summary's pass/fail lines.
pub fn property_checks(experiment: Experiment, report: &MetricsReport) -> Vec<(String, bool)> {
    checks(experiment, report).0
}

fn checks(experiment: Experiment, report: &MetricsReport) -> Checks {
    let mut checks = Checks(Vec::new());
    match experiment {
        Experiment::Fig4 => {
            // Per-kind procedure ordering with non-overlapping 3-SE bands.
            for kind in [HandoverKind::FapToFap, HandoverKind::FapToMrrh] {
                let metric = format!("overhead_rate_{kind}");
                let ordered = report.sweep_values().iter().all(|&v| {
                    match (report.row(v, "fran", &metric), report.row(v, "non_fran", &metric)) {
                        (Some(f), Some(n)) => {
                            f.mean + 3.0 * f.std_err < n.mean - 3.0 * n.std_err
                        }
                        _ => false,
                    }
                });
                checks.push(&format!("ordering_{metric}_fran_lt_non_fran"), ordered);
            }
            for procedure in ["fran", "non_fran"] {
                checks.push(
                    &format!("monotonic_overhead_rate_in_arrival_rate_{procedure}"),
                    strictly_increasing(&means_for(report, procedure, "overhead_rate")),
                );
            }
        }
        Experiment::Fig5 => {
            for procedure in ["fran", "non_fran"] {
                checks.push(
                    &format!("monotonic_overhead_rate_in_mean_holding_time_{procedure}"),
                    strictly_increasing(&means_for(report, procedure, "overhead_rate")),
                );
            }
        }
        Experiment::Fig6 => {
            for n_faps in FIG6_N_FAPS {
                let label = |scheme: Scheme| format!("{scheme}_nfaps{n_faps}");
                let ordered = report.sweep_values().iter().all(|&v| {
                    let row = |scheme: Scheme| {
                        report.row(v, &label(scheme), "net_utility_total")
                    };
                    match (
                        row(Scheme::Proposed),
                        row(Scheme::ExistingFran),
                        row(Scheme::NonFran),
                    ) {
                        (Some(p), Some(e), Some(n)) => {
                            p.mean >= e.mean
                                && e.mean >= n.mean
                                && p.mean - 3.0 * p.std_err > n.mean + 3.0 * n.std_err
                        }
                        _ => false,
                    }
                });
                checks.push(&format!("ordering_schemes_nfaps{n_faps}"), ordered);

                let means = means_for(report, &label(Scheme::Proposed), "net_utility_total");
                // "Generally increases": at most one non-monotone step.
                let dips = means.windows(2).filter(|w| w[1] < w[0]).count();
                checks.push(
                    &format!("trend_proposed_in_n_fues_per_fap_nfaps{n_faps}"),
                    !means.is_empty() && dips <= 1,
                );
            }
            // More F-APs must raise the proposed utility at every grid point.
            let increasing_in_faps = report.sweep_values().iter().all(|&v| {
                let mean = |n: usize| {
                    report
                        .row(v, &format!("proposed_nfaps{n}"), "net_utility_total")
                        .map(|r| r.mean)
                };
                match (mean(10), mean(20), mean(40)) {
                    (Some(a), Some(b), Some(c)) => a < b && b < c,
                    _ => false,
                }
            });
            checks.push("trend_proposed_in_n_faps", increasing_in_faps);
        }
        Experiment::Custom => {}
    }
    checks
}

/// Render the human-readable summary: the aggregate table plus one
/// greppable `check <name>: PASS|FAIL` line per property.
pub fn summarize(experiment: Experiment, report: &MetricsReport) -> String {
    let mut out = String::new();
    out.push_str(&format!("experiment: {experiment}\n"));
    for (k, v) in &report.metadata {
        out.push_str(&format!("{k}: {v}\n"));
    }
    out.push('\n');
    for row in &report.rows {
        out.push_str(&format!(
            "{} {} @ {}={}: {:.6e} +/- {:.3e} (n={})\n",
            row.metric,
            row.variant,
            row.sweep_param,
            row.sweep_value,
            row.mean,
            row.std_err,
            row.n_reps
        ));
    }
    out.push('\n');
    for (name, pass) in checks(experiment, report).0 {
        out.push_str(&format!(
            "check {name}: {}\n",
            if pass { "PASS" } else { "FAIL" }
        ));
    }
    out
}

/// Execute `spec`: run the experiment and write `<experiment>.csv` plus
/// `summary.txt` into the output directory. On any error the partially
/// written files are removed.
pub fn run(spec: &RunSpec) -> Result<()> {
    let config = load_config(spec)?;
    let report = build_report(spec.experiment, &config)?;
    let summary = summarize(spec.experiment, &report);

    std::fs::create_dir_all(&spec.out_dir).map_err(Error::Io)?;
    let csv_path = spec.out_dir.join(format!("{}.csv", spec.experiment));
    let summary_path = spec.out_dir.join("summary.txt");
    let written: [&Path; 2] = [&csv_path, &summary_path];
    let result = report
        .write_csv(&csv_path)
        .and_then(|()| std::fs::write(&summary_path, &summary).map_err(Error::Io));
    if let Err(e) = result {
        for path in written {
            let _ = std::fs::remove_file(path);
        }
        return Err(e);
    }
    if !spec.quiet {
        print!("{summary}");
        println!("wrote {} and {}", csv_path.display(), summary_path.display());
    }
    Ok(())
}
