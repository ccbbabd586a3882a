//! Fog radio access network (FRAN) simulator core.
//!
//! Models a single macro cell (MRRH) overlaid with cache-equipped fog
//! access points (F-APs) and their user equipments (F-UEs). Two studies are
//! supported: handover signaling overhead of the fog-assisted procedure
//! against the conventional core-anchored one, and the total net utility of
//! an interference-priced uplink resource allocation game against two
//! baselines.
//!
//! Module map:
//! - [`topology`]: cell geometry and node placement
//! - [`channel`]: path loss, fading, SINR, and rate
//! - [`game`]: subchannel assignment and the power allocation game
//! - [`handover`]: signaling traces, overhead accounting, session math
//! - [`sim`]: discrete-event engine and experiment sweeps
//! - [`config`]: TOML configuration with full defaults
//! - [`metrics`]: aggregation and CSV emission

pub mod channel;
pub mod config;
pub mod error;
pub mod game;
pub mod handover;
pub mod metrics;
pub mod sim;
pub mod topology;

pub use channel::{draw_channel, rate, sinr, ChannelParams, ChannelRealization, RxNode};
pub use config::SimConfig;
pub use error::{Error, Result};
pub use game::{
    assign_subchannels, best_response, iterate_to_ne, net_utility, run_baseline, verify_ne,
    Allocation, GameResult, PowerGrid, Scheme, UtilityParams,
};
pub use handover::{
    build_trace, expected_overhead_rate, fluid_flow_residence_rate, scenario_probabilities,
    speed_gate, trace_overhead, HandoverKind, OverheadBreakdown, OverheadProfile, Procedure,
    SessionModel, SignalingTrace,
};
pub use metrics::{mean_and_std_err, AggregateRow, MetricsReport, SweepPoint};
pub use sim::{
    analytic_overhead_rate, derive_seed, run_experiment, run_replication, ReplicationRecord,
    SweepParam,
};
pub use topology::{
    generate_topology, Fap, FapId, Fue, FueId, Point, ServingNode, Topology, TopologyConfig,
};
