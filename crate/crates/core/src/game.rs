//! Interference-aware uplink subchannel and power allocation, modeled as a
//! non-cooperative game among F-AP-served F-UEs.
//!
//! Each player's net utility is its summed Shannon rate, minus a convex
//! price on the interference power it lands on the MRRH, plus a caching
//! reward proportional to its serving F-AP's cache hit ratio. Powers live
//! on a discrete grid; play starts from the lowest level and proceeds by
//! sequential best response until no player moves.

use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::channel::{rate, ChannelParams, ChannelRealization, RxNode};
use crate::error::{Error, Result};
use crate::topology::{FueId, ServingNode, Topology};

pub const DEFAULT_MAX_ITERS: usize = 100;
pub const DEFAULT_EPSILON: f64 = 1e-9;

/// Pricing and reward coefficients of the net utility.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct UtilityParams {
    /// Utility per watt of interference received at the MRRH.
    pub price_coefficient: f64,
    /// Convexity degree of the pricing function (>= 1).
    pub price_exponent: f64,
    /// Utility per unit cache-hit ratio of the serving F-AP.
    pub reward_coefficient: f64,
}

impl UtilityParams {
    pub fn validate(&self) -> Result<()> {
        if self.price_coefficient < 0.0 {
            return Err(Error::Config("price_coefficient must be >= 0".into()));
        }
        if self.price_exponent < 1.0 {
            return Err(Error::Config("price_exponent must be >= 1".into()));
        }
        if self.reward_coefficient < 0.0 {
            return Err(Error::Config("reward_coefficient must be >= 0".into()));
        }
        Ok(())
    }

    /// Same pricing, no caching reward.
    pub fn without_reward(&self) -> UtilityParams {
        UtilityParams {
            reward_coefficient: 0.0,
            ..*self
        }
    }
}

/// Discrete transmit power levels in watts, strictly increasing.
///
/// An optional total power budget caps one F-UE's summed power across its
/// subchannels; it is unlimited by default, so every entry ranges freely
/// over the grid.
#[derive(Debug, Clone, PartialEq)]
pub struct PowerGrid {
    levels: Vec<f64>,
    total_budget: f64,
}

impl PowerGrid {
    pub fn new(levels: Vec<f64>) -> Result<PowerGrid> {
        if levels.is_empty() {
            return Err(Error::Config("power grid must be nonempty".into()));
        }
        if levels[0] < 0.0 {
            return Err(Error::Config("power levels must be >= 0".into()));
        }
        if levels.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Config("power levels must be strictly increasing".into()));
        }
        Ok(PowerGrid {
            levels,
            total_budget: f64::INFINITY,
        })
    }

    /// Same grid with a finite total power budget.
    pub fn with_budget(mut self, total_budget: f64) -> Result<PowerGrid> {
        if total_budget <= 0.0 {
            return Err(Error::Config("total power budget must be > 0".into()));
        }
        if total_budget < self.levels[0] {
            return Err(Error::Config(
                "total power budget is below the smallest grid level".into(),
            ));
        }
        self.total_budget = total_budget;
        Ok(self)
    }

    pub fn total_budget(&self) -> f64 {
        self.total_budget
    }

    /// Budget with a relative slack absorbing float accumulation.
    fn budget_cap(&self) -> f64 {
        self.total_budget * (1.0 + 1e-12)
    }

    /// Logarithmically spaced grid from `p_min` to `p_max` (watts).
    pub fn logarithmic(p_min: f64, p_max: f64, n_levels: usize) -> Result<PowerGrid> {
        if p_min <= 0.0 || p_max <= p_min || n_levels < 2 {
            return Err(Error::Config(
                "logarithmic grid needs 0 < p_min < p_max and n_levels >= 2".into(),
            ));
        }
        let ratio = (p_max / p_min).powf(1.0 / (n_levels - 1) as f64);
        let levels = (0..n_levels)
            .map(|i| p_min * ratio.powi(i as i32))
            .collect();
        PowerGrid::new(levels)
    }

    pub fn n_levels(&self) -> usize {
        self.levels.len()
    }

    pub fn level_w(&self, idx: usize) -> f64 {
        self.levels[idx]
    }

    /// Largest grid level, in watts.
    pub fn p_max(&self) -> f64 {
        *self.levels.last().unwrap()
    }

    /// Probe level used during subchannel assignment: the grid midpoint.
    pub fn midpoint(&self) -> usize {
        self.levels.len() / 2
    }
}

/// Subchannel assignment plus per-(F-UE, subchannel) power level.
///
/// Stored densely: `entries[fue][k] = Some(level)` iff the pair is assigned.
#[derive(Debug, Clone, PartialEq)]
pub struct Allocation {
    grid: PowerGrid,
    entries: Vec<Vec<Option<usize>>>,
    by_subchannel: Vec<Vec<FueId>>,
}

impl Allocation {
    pub fn new(n_fues: usize, n_subchannels: usize, grid: PowerGrid) -> Allocation {
        Allocation {
            grid,
            entries: vec![vec![None; n_subchannels]; n_fues],
            by_subchannel: vec![Vec::new(); n_subchannels],
        }
    }

    pub fn grid(&self) -> &PowerGrid {
        &self.grid
    }

    pub fn n_fues(&self) -> usize {
        self.entries.len()
    }

    pub fn n_subchannels(&self) -> usize {
        self.by_subchannel.len()
    }

    pub fn contains(&self, fue: FueId) -> bool {
        fue.0 < self.entries.len()
    }

    pub fn assign(&mut self, fue: FueId, subchannel: usize, level: usize) -> Result<()> {
        if !self.contains(fue) {
            return Err(Error::Contract(format!("unknown F-UE {}", fue.0)));
        }
        if level >= self.grid.n_levels() {
            return Err(Error::Contract(format!("power level {level} out of range")));
        }
        let slot = &mut self.entries[fue.0][subchannel];
        if slot.is_some() {
            return Err(Error::Contract(format!(
                "F-UE {} already assigned subchannel {subchannel}",
                fue.0
            )));
        }
        *slot = Some(level);
        self.by_subchannel[subchannel].push(fue);
        Ok(())
    }

    pub fn power_index(&self, fue: FueId, subchannel: usize) -> Option<usize> {
        self.entries.get(fue.0)?.get(subchannel).copied().flatten()
    }

    pub fn power_w(&self, fue: FueId, subchannel: usize) -> Option<f64> {
        self.power_index(fue, subchannel).map(|l| self.grid.level_w(l))
    }

    pub fn set_power(&mut self, fue: FueId, subchannel: usize, level: usize) -> Result<()> {
        if self.power_index(fue, subchannel).is_none() {
            return Err(Error::Contract(format!(
                "F-UE {} is not assigned subchannel {subchannel}",
                fue.0
            )));
        }
        if level >= self.grid.n_levels() {
            return Err(Error::Contract(format!("power level {level} out of range")));
        }
        self.entries[fue.0][subchannel] = Some(level);
        Ok(())
    }

    /// F-UEs transmitting on `subchannel`, in assignment order.
    pub fn transmitters_on(&self, subchannel: usize) -> impl Iterator<Item = FueId> + '_ {
        self.by_subchannel[subchannel].iter().copied()
    }

    pub fn assigned_subchannels(&self, fue: FueId) -> Vec<usize> {
        self.entries[fue.0]
            .iter()
            .enumerate()
            .filter_map(|(k, lvl)| lvl.map(|_| k))
            .collect()
    }

    pub fn total_power_w(&self, fue: FueId) -> f64 {
        self.entries[fue.0]
            .iter()
            .flatten()
            .map(|&l| self.grid.level_w(l))
            .sum()
    }

    /// Check intra-cell orthogonality (per F-AP) and the per-F-UE total
    /// power budget.
    pub fn check_invariants(&self, topology: &Topology) -> Result<()> {
        let budget = self.grid.budget_cap();
        for fue in &topology.fues {
            if self.total_power_w(fue.id) > budget {
                return Err(Error::Contract(format!(
                    "F-UE {} exceeds the total power budget",
                    fue.id.0
                )));
            }
        }
        for (k, txs) in self.by_subchannel.iter().enumerate() {
            let mut seen_faps = Vec::new();
            for &fue in txs {
                if let ServingNode::Fap(fap) = topology.fue(fue).serving_node {
                    if seen_faps.contains(&fap) {
                        return Err(Error::Contract(format!(
                            "subchannel {k} assigned twice within F-AP {}",
                            fap.0
                        )));
                    }
                    seen_faps.push(fap);
                }
            }
        }
        Ok(())
    }
}

/// Outcome of one allocation game (or baseline evaluation).
#[derive(Debug, Clone)]
pub struct GameResult {
    pub allocation: Allocation,
    /// Number of full best-response sweeps performed.
    pub iterations: usize,
    pub converged: bool,
    pub total_net_utility: f64,
    pub per_fue_utility: Vec<(FueId, f64)>,
    /// Count of best responses that lowered a power index, across all
    /// sweeps. Zero means the trajectory was monotone nondecreasing.
    pub monotone_violations: usize,
    /// Count of best responses where no grid level fit the budget.
    pub budget_saturated_events: usize,
}

impl GameResult {
    pub const CSV_HEADER: &'static str =
        "scheme,n_faps,n_fues_per_fap,seed,iterations,converged,total_net_utility";

    /// One CSV row in the documented column order.
    pub fn csv_row(&self, scheme: Scheme, n_faps: usize, n_fues_per_fap: usize, seed: u64) -> String {
        format!(
            "{},{},{},{},{},{},{}",
            scheme, n_faps, n_fues_per_fap, seed, self.iterations, self.converged,
            self.total_net_utility
        )
    }
}

/// Resource allocation scheme to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Scheme {
    NonFran,
    ExistingFran,
    Proposed,
}

impl Scheme {
    pub const ALL: [Scheme; 3] = [Scheme::NonFran, Scheme::ExistingFran, Scheme::Proposed];
}

impl std::fmt::Display for Scheme {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Scheme::NonFran => "non_fran",
            Scheme::ExistingFran => "existing_fran",
            Scheme::Proposed => "proposed",
        })
    }
}

impl FromStr for Scheme {
    type Err = Error;

    fn from_str(s: &str) -> Result<Scheme> {
        match s {
            "non_fran" => Ok(Scheme::NonFran),
            "existing_fran" => Ok(Scheme::ExistingFran),
            "proposed" => Ok(Scheme::Proposed),
            other => Err(Error::Config(format!("unknown scheme '{other}'"))),
        }
    }
}

/// The rate-minus-price contribution of one (fue, subchannel) pair, with
/// the pair's power forced to `level` and everything else frozen.
///
/// The utility is separable across subchannels, so best responses and NE
/// deviation checks only need this term.
fn subchannel_term(
    fue: FueId,
    subchannel: usize,
    level: usize,
    allocation: &Allocation,
    channel: &ChannelRealization,
    uparams: &UtilityParams,
    cparams: &ChannelParams,
    topology: &Topology,
) -> f64 {
    let rx = RxNode::serving(topology.fue(fue).serving_node);
    let p = allocation.grid().level_w(level);
    let signal = p * channel.gain(fue, rx, subchannel);
    let mut interference = 0.0;
    for other in allocation.transmitters_on(subchannel) {
        if other == fue {
            continue;
        }
        let q = allocation.power_w(other, subchannel).expect("assigned");
        interference += q * channel.gain(other, rx, subchannel);
    }
    let sinr = signal / (cparams.noise_power + interference);
    let r = cparams.bandwidth_per_subchannel * (1.0 + sinr).log2();
    let price = uparams.price_coefficient
        * (p * channel.gain(fue, RxNode::Mrrh, subchannel)).powf(uparams.price_exponent);
    r - price
}

/// Net utility of one F-UE: summed rate - interference price + caching
/// reward.
pub fn net_utility(
    fue: FueId,
    allocation: &Allocation,
    channel: &ChannelRealization,
    uparams: &UtilityParams,
    cparams: &ChannelParams,
    topology: &Topology,
) -> Result<f64> {
    if !allocation.contains(fue) {
        return Err(Error::Contract(format!("F-UE {} absent from allocation", fue.0)));
    }
    let mut total = 0.0;
    for k in allocation.assigned_subchannels(fue) {
        let s = crate::channel::sinr(fue, k, allocation, channel, cparams, topology)?;
        let r = rate(s, cparams)?;
        let p = allocation.power_w(fue, k).expect("assigned");
        let price = uparams.price_coefficient
            * (p * channel.gain(fue, RxNode::Mrrh, k)).powf(uparams.price_exponent);
        total += r - price;
    }
    Ok(total + uparams.reward_coefficient * topology.cache_hit_ratio_of(fue))
}

/// Largest per-F-AP group size; errors if any F-AP has more F-UEs than
/// there are subchannels.
fn check_feasible(topology: &Topology, n_subchannels: usize) -> Result<()> {
    for fap in &topology.faps {
        let count = topology
            .fues
            .iter()
            .filter(|f| f.serving_node == ServingNode::Fap(fap.id))
            .count();
        if count > n_subchannels {
            return Err(Error::Infeasible(format!(
                "F-AP {} serves {count} F-UEs but only {n_subchannels} subchannels exist",
                fap.id.0
            )));
        }
    }
    Ok(())
}

/// Fixed power level for MRRH-served (macro) F-UEs, which transmit as
/// background interferers and are not game players.
fn background_level(grid: &PowerGrid) -> usize {
    grid.midpoint()
}

/// Assign macro F-UEs round-robin over subchannels at a fixed power.
fn assign_background(allocation: &mut Allocation, topology: &Topology) -> Result<()> {
    let level = background_level(allocation.grid());
    let n_sub = allocation.n_subchannels();
    for (i, fue) in topology.mrrh_served_fues().into_iter().enumerate() {
        allocation.assign(fue, i % n_sub, level)?;
    }
    Ok(())
}

/// Greedy interference-aware subchannel assignment.
///
/// Per F-AP, subchannels are handed out in index order to the F-UE with the
/// largest marginal net utility at the probe power (grid midpoint), ties to
/// the lowest F-UE id. When the remaining subchannels are exactly enough to
/// cover the F-UEs still empty-handed, only those are eligible, so every
/// F-UE ends with at least one subchannel. Player powers are then reset to
/// grid level 0; macro F-UEs keep a fixed background power.
pub fn assign_subchannels(
    topology: &Topology,
    channel: &ChannelRealization,
    uparams: &UtilityParams,
    cparams: &ChannelParams,
    grid: &PowerGrid,
) -> Result<Allocation> {
    check_feasible(topology, cparams.n_subchannels)?;
    let mut allocation = Allocation::new(topology.fues.len(), cparams.n_subchannels, grid.clone());
    assign_background(&mut allocation, topology)?;

    let probe = grid.midpoint();
    for fap in &topology.faps {
        let members: Vec<FueId> = topology
            .fues
            .iter()
            .filter(|f| f.serving_node == ServingNode::Fap(fap.id))
            .map(|f| f.id)
            .collect();
        if members.is_empty() {
            continue;
        }
        let mut counts = vec![0usize; members.len()];
        for k in 0..cparams.n_subchannels {
            let unserved = counts.iter().filter(|&&c| c == 0).count();
            let remaining = cparams.n_subchannels - k;
            let restrict_to_unserved = unserved == remaining;
            let mut best: Option<(usize, f64)> = None;
            for (mi, &fue) in members.iter().enumerate() {
                if restrict_to_unserved && counts[mi] > 0 {
                    continue;
                }
                // Marginal utility of taking this subchannel at the probe
                // power; the reward term is constant and cancels.
                allocation.assign(fue, k, probe)?;
                let gain = subchannel_term(
                    fue, k, probe, &allocation, channel, uparams, cparams, topology,
                );
                unassign(&mut allocation, fue, k);
                let better = match best {
                    None => true,
                    Some((_, g)) => gain > g,
                };
                if better {
                    best = Some((mi, gain));
                }
            }
            let (mi, _) = best.expect("nonempty candidate set");
            allocation.assign(members[mi], k, probe)?;
            counts[mi] += 1;
        }
    }

    // Power control starts from the smallest available level.
    for fue in topology.fap_served_fues() {
        for k in allocation.assigned_subchannels(fue) {
            allocation.set_power(fue, k, 0)?;
        }
    }
    allocation.check_invariants(topology)?;
    Ok(allocation)
}

fn unassign(allocation: &mut Allocation, fue: FueId, subchannel: usize) {
    allocation.entries[fue.0][subchannel] = None;
    allocation.by_subchannel[subchannel].retain(|&f| f != fue);
}

/// Best response of `fue` on `subchannel`: the utility-maximizing grid
/// level with everyone else frozen.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BestResponse {
    pub level: usize,
    /// True when every level violated the total power budget and level 0
    /// was returned as a fallback.
    pub budget_saturated: bool,
}

pub fn best_response(
    fue: FueId,
    subchannel: usize,
    allocation: &Allocation,
    channel: &ChannelRealization,
    uparams: &UtilityParams,
    cparams: &ChannelParams,
    topology: &Topology,
    grid: &PowerGrid,
) -> Result<BestResponse> {
    let Some(current) = allocation.power_index(fue, subchannel) else {
        return Err(Error::Contract(format!(
            "F-UE {} is not assigned subchannel {subchannel}",
            fue.0
        )));
    };
    let other_power = allocation.total_power_w(fue) - grid.level_w(current);
    let budget = grid.budget_cap();
    let mut best: Option<(usize, f64)> = None;
    for level in 0..grid.n_levels() {
        if other_power + grid.level_w(level) > budget {
            continue;
        }
        let term = subchannel_term(
            fue, subchannel, level, allocation, channel, uparams, cparams, topology,
        );
        // Strict improvement required, so ties break toward the lower level.
        if best.map_or(true, |(_, t)| term > t) {
            best = Some((level, term));
        }
    }
    match best {
        Some((level, _)) => Ok(BestResponse {
            level,
            budget_saturated: false,
        }),
        None => Ok(BestResponse {
            level: 0,
            budget_saturated: true,
        }),
    }
}

/// Run sequential best-response sweeps to an epsilon-Nash equilibrium.
///
/// Players (F-AP-served F-UEs) are visited in id order, their subchannels
/// in index order. Terminates when a full sweep changes no power index, or
/// after `max_iters` sweeps.
pub fn iterate_to_ne(
    mut allocation: Allocation,
    channel: &ChannelRealization,
    uparams: &UtilityParams,
    cparams: &ChannelParams,
    topology: &Topology,
    grid: &PowerGrid,
    max_iters: usize,
    epsilon: f64,
) -> Result<GameResult> {
    if max_iters == 0 {
        return Err(Error::Contract("max_iters must be >= 1".into()));
    }
    if epsilon <= 0.0 {
        return Err(Error::Contract("epsilon must be > 0".into()));
    }
    let players = topology.fap_served_fues();
    for &fue in &players {
        for k in allocation.assigned_subchannels(fue) {
            if allocation.power_index(fue, k) != Some(0) {
                return Err(Error::Contract(
                    "iterate_to_ne requires all player powers at grid level 0".into(),
                ));
            }
        }
    }

    let mut iterations = 0;
    let mut converged = false;
    let mut monotone_violations = 0;
    let mut budget_saturated_events = 0;
    while iterations < max_iters {
        iterations += 1;
        let mut changed = false;
        for &fue in &players {
            for k in allocation.assigned_subchannels(fue) {
                let old = allocation.power_index(fue, k).expect("assigned");
                let br = best_response(
                    fue, k, &allocation, channel, uparams, cparams, topology, grid,
                )?;
                if br.budget_saturated {
                    budget_saturated_events += 1;
                }
                if br.level != old {
                    if br.level < old {
                        monotone_violations += 1;
                    }
                    allocation.set_power(fue, k, br.level)?;
                    changed = true;
                }
            }
        }
        if !changed {
            converged = true;
            break;
        }
    }

    allocation.check_invariants(topology)?;
    let per_fue_utility: Vec<(FueId, f64)> = players
        .iter()
        .map(|&fue| {
            net_utility(fue, &allocation, channel, uparams, cparams, topology)
                .map(|u| (fue, u))
        })
        .collect::<Result<_>>()?;
    let total_net_utility = per_fue_utility.iter().map(|(_, u)| u).sum();
    Ok(GameResult {
        allocation,
        iterations,
        converged,
        total_net_utility,
        per_fue_utility,
        monotone_violations,
        budget_saturated_events,
    })
}

/// True iff no single (fue, subchannel) deviation to another budget-feasible
/// grid level raises that F-UE's net utility by more than `epsilon`.
pub fn verify_ne(
    result: &GameResult,
    channel: &ChannelRealization,
    uparams: &UtilityParams,
    cparams: &ChannelParams,
    topology: &Topology,
    grid: &PowerGrid,
    epsilon: f64,
) -> Result<bool> {
    let allocation = &result.allocation;
    let budget = grid.budget_cap();
    for fue in topology.fap_served_fues() {
        for k in allocation.assigned_subchannels(fue) {
            let current = allocation.power_index(fue, k).expect("assigned");
            let other_power = allocation.total_power_w(fue) - grid.level_w(current);
            let base = subchannel_term(
                fue, k, current, allocation, channel, uparams, cparams, topology,
            );
            for level in 0..grid.n_levels() {
                if level == current || other_power + grid.level_w(level) > budget {
                    continue;
                }
                let term = subchannel_term(
                    fue, k, level, allocation, channel, uparams, cparams, topology,
                );
                if term - base > epsilon {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

/// Rate-greedy assignment used by the conventional (non-FRAN) baseline:
/// each subchannel goes to the F-UE with the best own gain, and everyone
/// transmits at the highest level the total power budget allows.
fn non_fran_allocation(
    topology: &Topology,
    channel: &ChannelRealization,
    cparams: &ChannelParams,
    grid: &PowerGrid,
) -> Result<Allocation> {
    check_feasible(topology, cparams.n_subchannels)?;
    let mut allocation = Allocation::new(topology.fues.len(), cparams.n_subchannels, grid.clone());
    assign_background(&mut allocation, topology)?;
    for fap in &topology.faps {
        let members: Vec<FueId> = topology
            .fues
            .iter()
            .filter(|f| f.serving_node == ServingNode::Fap(fap.id))
            .map(|f| f.id)
            .collect();
        if members.is_empty() {
            continue;
        }
        let rx = RxNode::Fap(fap.id);
        for k in 0..cparams.n_subchannels {
            let winner = members
                .iter()
                .copied()
                .max_by(|&a, &b| {
                    channel
                        .gain(a, rx, k)
                        .partial_cmp(&channel.gain(b, rx, k))
                        .unwrap()
                        // On exact ties prefer the lower id.
                        .then(b.cmp(&a))
                })
                .unwrap();
            allocation.assign(winner, k, 0)?;
        }
    }
    // Uniform max feasible level per F-UE under the total budget.
    for fue in topology.fap_served_fues() {
        let assigned = allocation.assigned_subchannels(fue);
        if assigned.is_empty() {
            continue;
        }
        let budget = grid.budget_cap();
        let mut level = 0;
        for l in (0..grid.n_levels()).rev() {
            if assigned.len() as f64 * grid.level_w(l) <= budget {
                level = l;
                break;
            }
        }
        for k in assigned {
            allocation.set_power(fue, k, level)?;
        }
    }
    allocation.check_invariants(topology)?;
    Ok(allocation)
}

/// Evaluate the per-player and total net utility of an allocation under
/// the full utility parameters.
fn evaluate(
    allocation: &Allocation,
    channel: &ChannelRealization,
    uparams: &UtilityParams,
    cparams: &ChannelParams,
    topology: &Topology,
) -> Result<(f64, Vec<(FueId, f64)>)> {
    let per_fue: Vec<(FueId, f64)> = topology
        .fap_served_fues()
        .into_iter()
        .map(|fue| {
            net_utility(fue, allocation, channel, uparams, cparams, topology).map(|u| (fue, u))
        })
        .collect::<Result<_>>()?;
    let total = per_fue.iter().map(|(_, u)| u).sum();
    Ok((total, per_fue))
}

/// Run one of the three schemes on a fixed realization.
///
/// All three results report utilities evaluated under the same full
/// `uparams`, so the totals are directly comparable.
pub fn run_baseline(
    scheme: Scheme,
    topology: &Topology,
    channel: &ChannelRealization,
    cparams: &ChannelParams,
    uparams: &UtilityParams,
    grid: &PowerGrid,
) -> Result<GameResult> {
    match scheme {
        Scheme::Proposed | Scheme::ExistingFran => {
            let game_params = if scheme == Scheme::ExistingFran {
                uparams.without_reward()
            } else {
                *uparams
            };
            let allocation =
                assign_subchannels(topology, channel, &game_params, cparams, grid)?;
            let mut result = iterate_to_ne(
                allocation,
                channel,
                &game_params,
                cparams,
                topology,
                grid,
                DEFAULT_MAX_ITERS,
                DEFAULT_EPSILON,
            )?;
            let (total, per_fue) =
                evaluate(&result.allocation, channel, uparams, cparams, topology)?;
            result.total_net_utility = total;
            result.per_fue_utility = per_fue;
            Ok(result)
        }
        Scheme::NonFran => {
            let allocation = non_fran_allocation(topology, channel, cparams, grid)?;
            let (total, per_fue) = evaluate(&allocation, channel, uparams, cparams, topology)?;
            Ok(GameResult {
                allocation,
                iterations: 0,
                converged: false,
                total_net_utility: total,
                per_fue_utility: per_fue,
                monotone_violations: 0,
                budget_saturated_events: 0,
            })
        }
    }
}
