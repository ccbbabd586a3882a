//! Simulation configuration: TOML sections mirroring the model parameters,
//! with documented defaults for every key.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::channel::ChannelParams;
use crate::error::{Error, Result};
use crate::game::{PowerGrid, UtilityParams};
use crate::handover::{
    fluid_flow_residence_rate, HandoverKind, OverheadProfile, Procedure, SessionModel,
};
use crate::topology::TopologyConfig;

fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

/// Raw channel section; converted to [`ChannelParams`] on demand.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ChannelConfig {
    pub pathloss_exponent: f64,
    /// Path gain at the 1 m reference distance, in dB.
    pub reference_gain_db: f64,
    /// Thermal noise power spectral density, dBm/Hz.
    pub noise_psd_dbm_per_hz: f64,
    pub bandwidth_per_subchannel_hz: f64,
    pub n_subchannels: usize,
}

impl Default for ChannelConfig {
    fn default() -> Self {
        ChannelConfig {
            pathloss_exponent: 3.76,
            reference_gain_db: -30.0,
            noise_psd_dbm_per_hz: -174.0,
            bandwidth_per_subchannel_hz: 180e3,
            n_subchannels: 8,
        }
    }
}

impl ChannelConfig {
    pub fn params(&self) -> ChannelParams {
        ChannelParams {
            pathloss_exponent: self.pathloss_exponent,
            reference_gain: db_to_linear(self.reference_gain_db),
            // dBm/Hz -> W/Hz, times bandwidth.
            noise_power: db_to_linear(self.noise_psd_dbm_per_hz) * 1e-3
                * self.bandwidth_per_subchannel_hz,
            bandwidth_per_subchannel: self.bandwidth_per_subchannel_hz,
            n_subchannels: self.n_subchannels,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PowerConfig {
    pub p_min_w: f64,
    pub p_max_w: f64,
    pub n_levels: usize,
    /// Optional cap on one F-UE's summed power across its subchannels;
    /// absent means each subchannel ranges freely over the grid.
    pub total_budget_w: Option<f64>,
}

impl Default for PowerConfig {
    fn default() -> Self {
        PowerConfig {
            p_min_w: 0.001,
            p_max_w: 0.2,
            n_levels: 10,
            total_budget_w: None,
        }
    }
}

impl PowerConfig {
    pub fn grid(&self) -> Result<PowerGrid> {
        let grid = PowerGrid::logarithmic(self.p_min_w, self.p_max_w, self.n_levels)?;
        match self.total_budget_w {
            Some(budget) => grid.with_budget(budget),
            None => Ok(grid),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct UtilityConfig {
    pub price_coefficient: f64,
    pub price_exponent: f64,
    pub reward_coefficient: f64,
}

impl Default for UtilityConfig {
    fn default() -> Self {
        // Rates are in bits/s (order 1e6 at cell scale) while interference
        // powers at the MRRH are order 1e-12 W, hence the large default
        // price coefficient. The reward spans a few rate units so that
        // serving an extra F-UE is worth more than the diversity it costs.
        UtilityConfig {
            price_coefficient: 1e18,
            price_exponent: 1.0,
            reward_coefficient: 1e7,
        }
    }
}

impl UtilityConfig {
    pub fn params(&self) -> UtilityParams {
        UtilityParams {
            price_coefficient: self.price_coefficient,
            price_exponent: self.price_exponent,
            reward_coefficient: self.reward_coefficient,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SessionConfig {
    /// Poisson session arrival rate, sessions per time unit.
    pub arrival_rate: f64,
    /// Mean exponential session holding time.
    pub mean_holding_time: f64,
    /// Cell-boundary crossing rate; when absent it is derived from the
    /// fluid-flow model using the low F-UE speed and the F-AP radius.
    pub residence_rate: Option<f64>,
}

impl Default for SessionConfig {
    fn default() -> Self {
        SessionConfig {
            arrival_rate: 0.1,
            mean_holding_time: 100.0,
            residence_rate: None,
        }
    }
}

/// Probability of each handover kind at a boundary crossing.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct HandoverMixConfig {
    pub fap_to_fap: f64,
    pub fap_to_mrrh: f64,
    pub mrrh_to_fap: f64,
}

impl Default for HandoverMixConfig {
    fn default() -> Self {
        HandoverMixConfig {
            fap_to_fap: 0.4,
            fap_to_mrrh: 0.4,
            mrrh_to_fap: 0.2,
        }
    }
}

impl HandoverMixConfig {
    pub fn entries(&self) -> Vec<(HandoverKind, f64)> {
        vec![
            (HandoverKind::FapToFap, self.fap_to_fap),
            (HandoverKind::FapToMrrh, self.fap_to_mrrh),
            (HandoverKind::MrrhToFap, self.mrrh_to_fap),
        ]
    }

    pub fn validate(&self) -> Result<()> {
        let sum: f64 = self.entries().iter().map(|(_, p)| p).sum();
        if self.entries().iter().any(|(_, p)| *p < 0.0) {
            return Err(Error::Config("handover mix probabilities must be >= 0".into()));
        }
        if (sum - 1.0).abs() > 1e-9 {
            return Err(Error::Config(format!(
                "handover mix must sum to 1, got {sum}"
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SimSection {
    /// Simulated time per replication.
    pub horizon: f64,
    pub seed: u64,
    pub replications: usize,
    /// Allocation-game snapshots per replication (0 disables the game).
    /// Snapshots are evenly spaced over the horizon and independent of the
    /// session process.
    pub snapshots: usize,
    pub procedure: Procedure,
    /// FRAN speed gate threshold, m/s.
    pub speed_threshold: f64,
}

impl Default for SimSection {
    fn default() -> Self {
        SimSection {
            horizon: 5000.0,
            seed: 42,
            replications: 30,
            snapshots: 10,
            procedure: Procedure::Fran,
            speed_threshold: 10.0,
        }
    }
}

/// Sweep definition for custom experiments; the built-in experiments set
/// their own grids and ignore this section.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SweepConfig {
    /// One of arrival_rate, mean_holding_time, n_fues_per_fap, n_faps.
    pub param: Option<String>,
    pub values: Vec<f64>,
}

/// Full simulation configuration; every section has defaults, so an empty
/// file parses to a valid configuration.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SimConfig {
    pub session: SessionConfig,
    pub topology: TopologyConfig,
    pub channel: ChannelConfig,
    pub utility: UtilityConfig,
    pub power: PowerConfig,
    pub overhead: OverheadProfile,
    pub handover_mix: HandoverMixConfig,
    pub sim: SimSection,
    pub sweep: SweepConfig,
}

impl SimConfig {
    /// Parse and validate a TOML configuration file.
    pub fn from_file(path: &Path) -> Result<SimConfig> {
        let text = std::fs::read_to_string(path).map_err(Error::Io)?;
        SimConfig::from_toml(&text)
    }

    pub fn from_toml(text: &str) -> Result<SimConfig> {
        let config: SimConfig =
            toml::from_str(text).map_err(|e| Error::Config(format!("TOML parse: {e}")))?;
        config.validate()?;
        Ok(config)
    }

    pub fn validate(&self) -> Result<()> {
        if self.session.arrival_rate < 0.0 {
            return Err(Error::Config("session.arrival_rate must be >= 0".into()));
        }
        if self.session.mean_holding_time <= 0.0 {
            return Err(Error::Config("session.mean_holding_time must be > 0".into()));
        }
        if let Some(eta) = self.session.residence_rate {
            if eta < 0.0 {
                return Err(Error::Config("session.residence_rate must be >= 0".into()));
            }
        }
        self.topology.validate()?;
        self.channel.params().validate()?;
        self.utility.params().validate()?;
        self.power.grid()?;
        self.overhead.validate()?;
        self.handover_mix.validate()?;
        if self.sim.horizon <= 0.0 {
            return Err(Error::Config("sim.horizon must be > 0".into()));
        }
        if self.sim.replications == 0 {
            return Err(Error::Config("sim.replications must be >= 1".into()));
        }
        if self.sim.speed_threshold <= 0.0 {
            return Err(Error::Config("sim.speed_threshold must be > 0".into()));
        }
        if self.topology.n_fues_per_fap > self.channel.n_subchannels && self.sim.snapshots > 0 {
            return Err(Error::Config(format!(
                "topology.n_fues_per_fap ({}) exceeds channel.n_subchannels ({})",
                self.topology.n_fues_per_fap, self.channel.n_subchannels
            )));
        }
        Ok(())
    }

    /// The session model with the residence rate resolved (configured or
    /// derived from the fluid-flow model over the F-AP cell).
    pub fn session_model(&self) -> SessionModel {
        let residence_rate = self.session.residence_rate.unwrap_or_else(|| {
            fluid_flow_residence_rate(self.topology.speed_low, self.topology.fap_radius)
        });
        SessionModel {
            arrival_rate: self.session.arrival_rate,
            mean_holding_time: self.session.mean_holding_time,
            residence_rate,
        }
    }

    /// Key-value metadata recorded in experiment outputs.
    pub fn metadata(&self) -> BTreeMap<String, String> {
        let mut m = BTreeMap::new();
        m.insert("arrival_rate".into(), self.session.arrival_rate.to_string());
        m.insert(
            "mean_holding_time".into(),
            self.session.mean_holding_time.to_string(),
        );
        m.insert("seed".into(), self.sim.seed.to_string());
        m.insert("replications".into(), self.sim.replications.to_string());
        m.insert("procedure".into(), self.sim.procedure.to_string());
        m
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_file_is_all_defaults() {
        let config = SimConfig::from_toml("").unwrap();
        assert_eq!(config.session.arrival_rate, 0.1);
        assert_eq!(config.channel.n_subchannels, 8);
        assert_eq!(config.sim.replications, 30);
        config.validate().unwrap();
    }

    #[test]
    fn invalid_value_names_the_key() {
        let err = SimConfig::from_toml("[session]\nmean_holding_time = -1.0\n").unwrap_err();
        assert!(err.to_string().contains("mean_holding_time"), "{err}");
    }

    #[test]
    fn arrival_rate_is_read() {
        let config = SimConfig::from_toml("[session]\narrival_rate = 0.1\n").unwrap();
        assert_eq!(config.session.arrival_rate, 0.1);
    }

    #[test]
    fn unknown_key_is_rejected() {
        assert!(SimConfig::from_toml("[session]\nbogus_key = 1\n").is_err());
    }

    #[test]
    fn noise_power_from_psd() {
        let config = SimConfig::from_toml("").unwrap();
        let params = config.channel.params();
        // -174 dBm/Hz over 180 kHz.
        let expected = 10f64.powf(-17.4) * 1e-3 * 180e3;
        assert!((params.noise_power - expected).abs() < 1e-20);
    }

    #[test]
    fn residence_rate_derivation() {
        let config = SimConfig::from_toml("").unwrap();
        let model = config.session_model();
        let expected = 2.0 * config.topology.speed_low
            / (std::f64::consts::PI * config.topology.fap_radius);
        assert!((model.residence_rate - expected).abs() < 1e-12);

        let config =
            SimConfig::from_toml("[session]\nresidence_rate = 0.25\n").unwrap();
        assert_eq!(config.session_model().residence_rate, 0.25);
    }

    #[test]
    fn invalid_mix_rejected() {
        let err = SimConfig::from_toml("[handover_mix]\nfap_to_fap = 0.9\n").unwrap_err();
        assert!(err.to_string().contains("mix"), "{err}");
    }
}
