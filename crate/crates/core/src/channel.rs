//! Wireless channel model: power-law path loss with Rayleigh flat fading
//! per subchannel, SINR and Shannon rate.

use std::io::Write;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::game::Allocation;
use crate::topology::{FapId, FueId, Point, ServingNode, Topology};

/// Distances below this are clamped before applying path loss, removing the
/// d^(-gamma) singularity for co-located nodes.
pub const MIN_DISTANCE_M: f64 = 1.0;

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct ChannelParams {
    /// Path loss exponent gamma (> 2).
    pub pathloss_exponent: f64,
    /// Linear power gain at the 1 m reference distance.
    pub reference_gain: f64,
    /// Noise power per subchannel, watts.
    pub noise_power: f64,
    /// Bandwidth per subchannel, Hz.
    pub bandwidth_per_subchannel: f64,
    pub n_subchannels: usize,
}

impl ChannelParams {
    pub fn validate(&self) -> Result<()> {
        if self.pathloss_exponent <= 2.0 {
            return Err(Error::Config("pathloss_exponent must be > 2".into()));
        }
        if self.reference_gain <= 0.0 {
            return Err(Error::Config("reference_gain must be > 0".into()));
        }
        if self.noise_power <= 0.0 {
            return Err(Error::Config("noise_power must be > 0".into()));
        }
        if self.bandwidth_per_subchannel <= 0.0 {
            return Err(Error::Config("bandwidth_per_subchannel must be > 0".into()));
        }
        if self.n_subchannels == 0 {
            return Err(Error::Config("n_subchannels must be >= 1".into()));
        }
        Ok(())
    }

    /// Distance-dependent part of the link gain: K * max(d, 1m)^(-gamma).
    pub fn path_gain(&self, distance_m: f64) -> f64 {
        let d = distance_m.max(MIN_DISTANCE_M);
        self.reference_gain * d.powf(-self.pathloss_exponent)
    }
}

/// Receiving node of an uplink: the MRRH or one F-AP.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RxNode {
    Mrrh,
    Fap(FapId),
}

impl RxNode {
    fn index(self) -> usize {
        match self {
            RxNode::Mrrh => 0,
            RxNode::Fap(id) => 1 + id.0,
        }
    }

    pub fn serving(node: ServingNode) -> RxNode {
        match node {
            ServingNode::Mrrh => RxNode::Mrrh,
            ServingNode::Fap(id) => RxNode::Fap(id),
        }
    }
}

/// Per-link, per-subchannel linear power gains (path loss x Rayleigh fading).
///
/// Transmitters are F-UEs; receivers are the MRRH and every F-AP. Gains are
/// stored densely, indexed `[fue][rx][subchannel]`.
#[derive(Debug, Clone)]
pub struct ChannelRealization {
    n_rx: usize,
    n_subchannels: usize,
    gains: Vec<f64>,
}

impl ChannelRealization {
    pub fn gain(&self, tx: FueId, rx: RxNode, subchannel: usize) -> f64 {
        debug_assert!(subchannel < self.n_subchannels);
        self.gains[(tx.0 * self.n_rx + rx.index()) * self.n_subchannels + subchannel]
    }

    pub fn n_subchannels(&self) -> usize {
        self.n_subchannels
    }

    pub fn n_fues(&self) -> usize {
        self.gains.len() / (self.n_rx * self.n_subchannels)
    }

    /// Line-oriented debug dump, tab separated.
    ///
    /// Columns: `tx_fue  rx  subchannel  gain` where `rx` is `MRRH` or
    /// `FAP<i>`.
    pub fn write_tsv<W: Write>(&self, w: &mut W) -> Result<()> {
        let n_fues = self.n_fues();
        for fue in 0..n_fues {
            for rx in 0..self.n_rx {
                let rx_name = if rx == 0 {
                    "MRRH".to_string()
                } else {
                    format!("FAP{}", rx - 1)
                };
                for k in 0..self.n_subchannels {
                    let g = self.gains[(fue * self.n_rx + rx) * self.n_subchannels + k];
                    writeln!(w, "{fue}\t{rx_name}\t{k}\t{g}")?;
                }
            }
        }
        Ok(())
    }
}

/// Draw a fresh block-fading realization: gain(t,r,k) = K * d^(-gamma) * X
/// with X ~ exponential(mean 1), independent per (t,r,k).
pub fn draw_channel<R: Rng + ?Sized>(
    topology: &Topology,
    params: &ChannelParams,
    rng: &mut R,
) -> ChannelRealization {
    let n_rx = 1 + topology.faps.len();
    let n_sub = params.n_subchannels;
    let mut gains = Vec::with_capacity(topology.fues.len() * n_rx * n_sub);
    let mut rx_positions: Vec<Point> = Vec::with_capacity(n_rx);
    rx_positions.push(topology.mrrh_position);
    rx_positions.extend(topology.faps.iter().map(|f| f.position));

    for fue in &topology.fues {
        for rx_pos in &rx_positions {
            let pg = params.path_gain(fue.position.distance(rx_pos));
            for _ in 0..n_sub {
                // Exponential(1) via inverse CDF; 1 - u avoids ln(0).
                let x = -(1.0 - rng.gen::<f64>()).ln();
                gains.push(pg * x.max(f64::MIN_POSITIVE));
            }
        }
    }
    ChannelRealization {
        n_rx,
        n_subchannels: n_sub,
        gains,
    }
}

/// Uplink SINR of `fue` on `subchannel`, measured at its serving node.
///
/// Interferers are all other F-UEs assigned the same subchannel, regardless
/// of their cell.
pub fn sinr(
    fue: FueId,
    subchannel: usize,
    allocation: &Allocation,
    channel: &ChannelRealization,
    params: &ChannelParams,
    topology: &Topology,
) -> Result<f64> {
    let Some(own_level) = allocation.power_index(fue, subchannel) else {
        return Err(Error::Contract(format!(
            "F-UE {} is not assigned subchannel {subchannel}",
            fue.0
        )));
    };
    let rx = RxNode::serving(topology.fue(fue).serving_node);
    let own_power = allocation.grid().level_w(own_level);
    let signal = own_power * channel.gain(fue, rx, subchannel);
    let mut interference = 0.0;
    for other in allocation.transmitters_on(subchannel) {
        if other == fue {
            continue;
        }
        let p = allocation.power_w(other, subchannel).expect("assigned");
        interference += p * channel.gain(other, rx, subchannel);
    }
    Ok(signal / (params.noise_power + interference))
}

/// Shannon rate of a single subchannel: B * log2(1 + SINR), bits/s.
pub fn rate(sinr_value: f64, params: &ChannelParams) -> Result<f64> {
    if sinr_value < 0.0 {
        return Err(Error::Contract(format!("negative SINR {sinr_value}")));
    }
    Ok(params.bandwidth_per_subchannel * (1.0 + sinr_value).log2())
}
