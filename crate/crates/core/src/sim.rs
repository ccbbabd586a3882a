//! Monte Carlo discrete-event engine.
//!
//! One replication generates a topology, then drives session arrivals,
//! session ends, and cell-boundary crossings through an event queue over a
//! fixed horizon. Crossings become handovers (or are suppressed by the
//! speed gate) and accumulate signaling overhead from the frozen traces.
//! Optional snapshots run the three allocation schemes on fresh channel
//! draws. Experiments sweep one parameter, fan replications out over a
//! thread pool, and aggregate into a [`MetricsReport`].

use std::cmp::Ordering;
use std::collections::{BinaryHeap, BTreeMap, HashMap};
use std::str::FromStr;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::channel::draw_channel;
use crate::config::SimConfig;
use crate::error::{Error, Result};
use crate::game::{run_baseline, verify_ne, GameResult, Scheme, DEFAULT_EPSILON};
use crate::handover::{
    build_trace, expected_overhead_rate, speed_gate, trace_overhead, HandoverKind,
};
use crate::metrics::{mean_and_std_err, AggregateRow, MetricsReport, SweepPoint};
use crate::topology::generate_topology;

/// The parameter an experiment sweeps.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepParam {
    ArrivalRate,
    MeanHoldingTime,
    NFuesPerFap,
    NFaps,
}

impl SweepParam {
    pub fn as_str(self) -> &'static str {
        match self {
            SweepParam::ArrivalRate => "arrival_rate",
            SweepParam::MeanHoldingTime => "mean_holding_time",
            SweepParam::NFuesPerFap => "n_fues_per_fap",
            SweepParam::NFaps => "n_faps",
        }
    }

    /// Write `value` into the swept field of `config`. Count-valued
    /// parameters must be (close to) nonnegative integers.
    pub fn apply(self, config: &mut SimConfig, value: f64) -> Result<()> {
        let as_count = |v: f64| -> Result<usize> {
            if v < 0.0 || v.fract() != 0.0 {
                return Err(Error::Config(format!(
                    "sweep value {v} for {} must be a nonnegative integer",
                    self.as_str()
                )));
            }
            Ok(v as usize)
        };
        match self {
            SweepParam::ArrivalRate => config.session.arrival_rate = value,
            SweepParam::MeanHoldingTime => config.session.mean_holding_time = value,
            SweepParam::NFuesPerFap => config.topology.n_fues_per_fap = as_count(value)?,
            SweepParam::NFaps => config.topology.n_faps = as_count(value)?,
        }
        config.validate()
    }
}

impl std::fmt::Display for SweepParam {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for SweepParam {
    type Err = Error;

    fn from_str(s: &str) -> Result<SweepParam> {
        match s {
            "arrival_rate" => Ok(SweepParam::ArrivalRate),
            "mean_holding_time" => Ok(SweepParam::MeanHoldingTime),
            "n_fues_per_fap" => Ok(SweepParam::NFuesPerFap),
            "n_faps" => Ok(SweepParam::NFaps),
            other => Err(Error::Config(format!("unknown sweep parameter '{other}'"))),
        }
    }
}

#[derive(Debug, Clone, Copy)]
enum EventKind {
    SessionArrival,
    SessionEnd { session: u64 },
    BoundaryCrossing { session: u64 },
    Snapshot,
}

/// Queue entry; min-heap on (time, seq). `seq` makes the order total and
/// deterministic when times tie.
#[derive(Debug, Clone, Copy)]
struct Event {
    time: f64,
    seq: u64,
    kind: EventKind,
}

impl PartialEq for Event {
    fn eq(&self, other: &Event) -> bool {
        self.seq == other.seq
    }
}

impl Eq for Event {}

impl Ord for Event {
    fn cmp(&self, other: &Event) -> Ordering {
        // Reversed: BinaryHeap is a max-heap, we pop the earliest event.
        other
            .time
            .total_cmp(&self.time)
            .then(other.seq.cmp(&self.seq))
    }
}

impl PartialOrd for Event {
    fn partial_cmp(&self, other: &Event) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Everything one replication measured.
#[derive(Debug, Clone)]
pub struct ReplicationRecord {
    pub seed: u64,
    pub horizon: f64,
    /// Sessions started within the horizon.
    pub sessions: u64,
    /// Cell-boundary crossings of active sessions (gated or not).
    pub crossings: u64,
    /// Handovers actually performed.
    pub handovers: u64,
    /// Crossings suppressed by the speed gate.
    pub suppressed: u64,
    /// Performed handovers whose session had already crossed a boundary.
    pub scenario1: u64,
    /// Performed handovers that were the session's first crossing.
    pub scenario2: u64,
    pub handovers_by_kind: BTreeMap<HandoverKind, u64>,
    /// Performed macro-to-small handovers by F-UEs above the speed
    /// threshold; always zero under the FRAN gate.
    pub fast_macro_to_small_handovers: u64,
    pub overhead_total: f64,
    pub overhead_by_kind: BTreeMap<HandoverKind, f64>,
    /// Allocation snapshots run (0 when the game is disabled).
    pub snapshots: usize,
    /// Summed total net utility over snapshots, per scheme.
    pub scheme_utility_sum: BTreeMap<Scheme, f64>,
    /// Best-response games that converged, out of `games_total`.
    pub games_converged: usize,
    pub games_total: usize,
    /// Converged games whose outcome passed the deviation check.
    pub ne_certified: usize,
}

impl ReplicationRecord {
    /// Signaling overhead per unit time.
    pub fn overhead_rate(&self) -> f64 {
        self.overhead_total / self.horizon
    }

    /// Performed handovers per started session; 0 when no session started.
    pub fn handovers_per_session(&self) -> f64 {
        if self.sessions == 0 {
            0.0
        } else {
            self.handovers as f64 / self.sessions as f64
        }
    }

    /// Snapshot-mean total net utility of `scheme`.
    pub fn mean_utility(&self, scheme: Scheme) -> Option<f64> {
        if self.snapshots == 0 {
            return None;
        }
        self.scheme_utility_sum
            .get(&scheme)
            .map(|s| s / self.snapshots as f64)
    }
}

fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Deterministic per-replication seed from the base seed and the
/// (sweep point, replication) coordinates.
pub fn derive_seed(base: u64, point: usize, rep: usize) -> u64 {
    let mut s = mix64(base ^ 0x9e37_79b9_7f4a_7c15);
    s = mix64(s ^ (point as u64).wrapping_mul(0xd1b5_4a32_d192_ed03));
    mix64(s ^ (rep as u64).wrapping_mul(0x2545_f491_4f6c_dd1d))
}

fn exp_draw<R: Rng + ?Sized>(rate: f64, rng: &mut R) -> f64 {
    -(1.0 - rng.gen::<f64>()).ln() / rate
}

/// Sample a handover kind from the crossing mix.
fn sample_kind<R: Rng + ?Sized>(mix: &[(HandoverKind, f64)], rng: &mut R) -> HandoverKind {
    let u: f64 = rng.gen();
    let mut acc = 0.0;
    for &(kind, p) in mix {
        acc += p;
        if u < acc {
            return kind;
        }
    }
    mix.last().expect("nonempty mix").0
}

struct SessionState {
    fue_speed: f64,
    had_crossing: bool,
}

/// Run a single replication with the given seed.
pub fn run_replication(config: &SimConfig, seed: u64) -> Result<ReplicationRecord> {
    config.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let topology = generate_topology(&config.topology, &mut rng)?;
    let cparams = config.channel.params();
    let uparams = config.utility.params();
    let grid = config.power.grid()?;
    let session_model = config.session_model();
    let procedure = config.sim.procedure;
    let mix = config.handover_mix.entries();

    // Per-kind trace cost under this procedure, frozen for the run.
    let mut trace_costs: HashMap<HandoverKind, f64> = HashMap::new();
    for &(kind, _) in &mix {
        let trace = build_trace(kind, procedure);
        trace_costs.insert(kind, trace_overhead(&trace, &config.overhead)?.total());
    }

    let horizon = config.sim.horizon;
    let lambda = session_model.arrival_rate;
    let mu = session_model.holding_rate();
    let eta = session_model.residence_rate;

    let mut queue: BinaryHeap<Event> = BinaryHeap::new();
    let mut seq: u64 = 0;
    let push = |queue: &mut BinaryHeap<Event>, seq: &mut u64, time: f64, kind: EventKind| {
        queue.push(Event {
            time,
            seq: *seq,
            kind,
        });
        *seq += 1;
    };

    if lambda > 0.0 {
        let t = exp_draw(lambda, &mut rng);
        push(&mut queue, &mut seq, t, EventKind::SessionArrival);
    }
    for i in 1..=config.sim.snapshots {
        let t = horizon * i as f64 / (config.sim.snapshots + 1) as f64;
        push(&mut queue, &mut seq, t, EventKind::Snapshot);
    }

    let mut record = ReplicationRecord {
        seed,
        horizon,
        sessions: 0,
        crossings: 0,
        handovers: 0,
        suppressed: 0,
        scenario1: 0,
        scenario2: 0,
        handovers_by_kind: BTreeMap::new(),
        fast_macro_to_small_handovers: 0,
        overhead_total: 0.0,
        overhead_by_kind: BTreeMap::new(),
        snapshots: 0,
        scheme_utility_sum: BTreeMap::new(),
        games_converged: 0,
        games_total: 0,
        ne_certified: 0,
    };

    let mut active: HashMap<u64, SessionState> = HashMap::new();
    let mut next_session_id: u64 = 0;

    while let Some(event) = queue.pop() {
        if event.time > horizon {
            break;
        }
        match event.kind {
            EventKind::SessionArrival => {
                record.sessions += 1;
                let id = next_session_id;
                next_session_id += 1;
                let fue = &topology.fues[rng.gen_range(0..topology.fues.len())];
                active.insert(
                    id,
                    SessionState {
                        fue_speed: fue.speed,
                        had_crossing: false,
                    },
                );
                let end = event.time + exp_draw(mu, &mut rng);
                push(&mut queue, &mut seq, end, EventKind::SessionEnd { session: id });
                if eta > 0.0 {
                    let cross = event.time + exp_draw(eta, &mut rng);
                    push(
                        &mut queue,
                        &mut seq,
                        cross,
                        EventKind::BoundaryCrossing { session: id },
                    );
                }
                let next = event.time + exp_draw(lambda, &mut rng);
                push(&mut queue, &mut seq, next, EventKind::SessionArrival);
            }
            EventKind::SessionEnd { session } => {
                active.remove(&session);
            }
            EventKind::BoundaryCrossing { session } => {
                // The crossing clock keeps ticking only while the session
                // lives; a stale event for an ended session is dropped.
                let Some(state) = active.get_mut(&session) else {
                    continue;
                };
                record.crossings += 1;
                let kind = sample_kind(&mix, &mut rng);
                let first = !state.had_crossing;
                state.had_crossing = true;
                if speed_gate(state.fue_speed, config.sim.speed_threshold, kind, procedure) {
                    record.handovers += 1;
                    if first {
                        record.scenario2 += 1;
                    } else {
                        record.scenario1 += 1;
                    }
                    *record.handovers_by_kind.entry(kind).or_insert(0) += 1;
                    let cost = trace_costs[&kind];
                    record.overhead_total += cost;
                    *record.overhead_by_kind.entry(kind).or_insert(0.0) += cost;
                    if kind.is_macro_to_small() && state.fue_speed > config.sim.speed_threshold {
                        record.fast_macro_to_small_handovers += 1;
                    }
                } else {
                    record.suppressed += 1;
                }
                let next = event.time + exp_draw(eta, &mut rng);
                push(
                    &mut queue,
                    &mut seq,
                    next,
                    EventKind::BoundaryCrossing { session },
                );
            }
            EventKind::Snapshot => {
                let channel = draw_channel(&topology, &cparams, &mut rng);
                record.snapshots += 1;
                for scheme in Scheme::ALL {
                    let result: GameResult =
                        run_baseline(scheme, &topology, &channel, &cparams, &uparams, &grid)?;
                    *record.scheme_utility_sum.entry(scheme).or_insert(0.0) +=
                        result.total_net_utility;
                    if scheme != Scheme::NonFran {
                        record.games_total += 1;
                        if result.converged {
                            record.games_converged += 1;
                            let certified = verify_ne(
                                &result,
                                &channel,
                                &uparams,
                                &cparams,
                                &topology,
                                &grid,
                                DEFAULT_EPSILON,
                            )?;
                            if certified {
                                record.ne_certified += 1;
                            }
                        }
                    }
                }
            }
        }
    }

    Ok(record)
}

/// Analytic long-run overhead rate for `config` under its configured
/// procedure, mix, and session model. No speed gate: this is the ungated
/// model the simulation matches when all F-UEs are below the threshold.
pub fn analytic_overhead_rate(config: &SimConfig) -> Result<f64> {
    let mix = config.handover_mix.entries();
    let mut trace_costs = Vec::with_capacity(mix.len());
    for &(kind, _) in &mix {
        let trace = build_trace(kind, config.sim.procedure);
        trace_costs.push((kind, trace_overhead(&trace, &config.overhead)?.total()));
    }
    expected_overhead_rate(&config.session_model(), &trace_costs, &mix)
}

fn push_metric(
    rows: &mut Vec<AggregateRow>,
    sweep_param: &str,
    sweep_value: f64,
    variant: &str,
    metric: &str,
    values: &[f64],
) {
    let (mean, std_err) = mean_and_std_err(values);
    rows.push(AggregateRow {
        sweep_param: sweep_param.to_string(),
        sweep_value,
        variant: variant.to_string(),
        metric: metric.to_string(),
        mean,
        std_err,
        n_reps: values.len(),
    });
}

/// Sweep `param` over `values`, running `config.sim.replications`
/// replications per point in parallel. Seeds are derived from the base
/// seed and (point, replication), so results are independent of thread
/// scheduling.
pub fn run_experiment(
    config: &SimConfig,
    param: SweepParam,
    values: &[f64],
) -> Result<MetricsReport> {
    if values.is_empty() {
        return Err(Error::Config("sweep needs at least one value".into()));
    }
    let mut points = Vec::with_capacity(values.len());
    for (point_idx, &value) in values.iter().enumerate() {
        let mut cfg = config.clone();
        param.apply(&mut cfg, value)?;
        let records: Vec<ReplicationRecord> = (0..cfg.sim.replications)
            .into_par_iter()
            .map(|rep| run_replication(&cfg, derive_seed(config.sim.seed, point_idx, rep)))
            .collect::<Result<_>>()?;
        points.push(SweepPoint { value, records });
    }

    let sweep_param = param.as_str();
    let variant = config.sim.procedure.to_string();
    let mut rows = Vec::new();
    for point in &points {
        let collect = |f: &dyn Fn(&ReplicationRecord) -> f64| -> Vec<f64> {
            point.records.iter().map(f).collect()
        };
        push_metric(
            &mut rows,
            sweep_param,
            point.value,
            &variant,
            "overhead_rate",
            &collect(&|r| r.overhead_rate()),
        );
        for (kind, _) in config.handover_mix.entries() {
            push_metric(
                &mut rows,
                sweep_param,
                point.value,
                &variant,
                &format!("overhead_rate_{kind}"),
                &collect(&|r| {
                    r.overhead_by_kind.get(&kind).copied().unwrap_or(0.0) / r.horizon
                }),
            );
        }
        push_metric(
            &mut rows,
            sweep_param,
            point.value,
            &variant,
            "handovers_per_session",
            &collect(&|r| r.handovers_per_session()),
        );
        push_metric(
            &mut rows,
            sweep_param,
            point.value,
            &variant,
            "fast_macro_to_small_handovers",
            &collect(&|r| r.fast_macro_to_small_handovers as f64),
        );
        if config.sim.snapshots > 0 {
            for scheme in Scheme::ALL {
                push_metric(
                    &mut rows,
                    sweep_param,
                    point.value,
                    &scheme.to_string(),
                    "net_utility_total",
                    &collect(&|r| r.mean_utility(scheme).unwrap_or(f64::NAN)),
                );
            }
        }
    }

    let mut metadata = config.metadata();
    metadata.insert("sweep_param".into(), sweep_param.to_string());
    Ok(MetricsReport {
        sweep_param: sweep_param.to_string(),
        metadata,
        points,
        rows,
    })
}
