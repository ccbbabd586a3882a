//! Property tests for the model invariants.
//!
//! Each block checks an invariant over randomized inputs: rate and SINR
//! monotonicity, the scenario split identities, the speed gate truth
//! table, and structural invariants (orthogonality, power budget) of the
//! allocations produced by the assignment and power control code.

use fran_core::{
    draw_channel, fluid_flow_residence_rate, rate, run_baseline, scenario_probabilities, sinr,
    speed_gate, ChannelParams, Fap, FapId, Fue, FueId, HandoverKind, Point, PowerGrid, Procedure,
    Scheme, ServingNode, SessionModel, Topology, UtilityParams,
};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn cparams(n_subchannels: usize) -> ChannelParams {
    ChannelParams {
        pathloss_exponent: 3.76,
        reference_gain: 1e-3,
        noise_power: 7.16e-16,
        bandwidth_per_subchannel: 180e3,
        n_subchannels,
    }
}

/// Two F-UEs in separate F-APs sharing subchannel 0.
fn two_player_topology(x1: f64, y1: f64, x2: f64, y2: f64) -> Topology {
    let faps = vec![
        Fap {
            id: FapId(0),
            position: Point { x: x1, y: y1 },
            radius: 30.0,
            cache_hit_ratio: 0.5,
        },
        Fap {
            id: FapId(1),
            position: Point { x: x2, y: y2 },
            radius: 30.0,
            cache_hit_ratio: 0.5,
        },
    ];
    let fues = vec![
        Fue {
            id: FueId(0),
            position: Point { x: x1, y: y1 },
            serving_node: ServingNode::Fap(FapId(0)),
            speed: 1.5,
        },
        Fue {
            id: FueId(1),
            position: Point { x: x2, y: y2 },
            serving_node: ServingNode::Fap(FapId(1)),
            speed: 1.5,
        },
    ];
    Topology {
        mrrh_position: Point::ORIGIN,
        mrrh_radius: 250.0,
        faps,
        fues,
    }
}

proptest! {
    #[test]
    fn rate_is_nonnegative_and_nondecreasing(a in 0.0f64..1e6, b in 0.0f64..1e6) {
        let params = cparams(1);
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        let r_lo = rate(lo, &params).unwrap();
        let r_hi = rate(hi, &params).unwrap();
        prop_assert!(r_lo >= 0.0);
        prop_assert!(r_hi >= r_lo);
    }

    #[test]
    fn scenario_split_identities_hold(
        arrival in 1e-3f64..10.0,
        holding in 1e-2f64..1e3,
        eta in 1e-4f64..10.0,
    ) {
        let session = SessionModel {
            arrival_rate: arrival,
            mean_holding_time: holding,
            residence_rate: eta,
        };
        session.validate().unwrap();
        let s = scenario_probabilities(&session);
        prop_assert!(s.p_s2 > 0.0 && s.p_s2 < 1.0);
        prop_assert!(s.p_s1 >= 0.0);
        let expected = eta * holding;
        prop_assert!((s.expected_handovers_per_session - expected).abs() <= 1e-9 * expected);
        prop_assert!(
            (s.p_s1 + s.p_s2 - s.expected_handovers_per_session).abs()
                <= 1e-9 * (1.0 + s.expected_handovers_per_session)
        );
    }

    #[test]
    fn speed_gate_truth_table(
        speed in 0.0f64..50.0,
        threshold in 0.0f64..50.0,
        kind_idx in 0usize..6,
        fran in any::<bool>(),
    ) {
        let kind = HandoverKind::ALL[kind_idx];
        let procedure = if fran { Procedure::Fran } else { Procedure::NonFran };
        let performed = speed_gate(speed, threshold, kind, procedure);
        let suppressed = fran && kind.is_macro_to_small() && speed > threshold;
        prop_assert_eq!(performed, !suppressed);
    }

    #[test]
    fn residence_rate_is_positive_and_monotone(
        v in 1e-3f64..50.0,
        r in 1.0f64..1e4,
        dv in 1e-3f64..10.0,
        dr in 1e-3f64..1e3,
    ) {
        let base = fluid_flow_residence_rate(v, r);
        prop_assert!(base > 0.0);
        prop_assert!(fluid_flow_residence_rate(v + dv, r) > base);
        prop_assert!(fluid_flow_residence_rate(v, r + dr) < base);
    }

    #[test]
    fn sinr_is_monotone_in_own_and_interferer_power(
        seed in any::<u64>(),
        x1 in -200.0f64..200.0,
        y1 in -200.0f64..200.0,
        x2 in -200.0f64..200.0,
        y2 in -200.0f64..200.0,
    ) {
        prop_assume!((x1 * x1 + y1 * y1).sqrt() <= 240.0);
        prop_assume!((x2 * x2 + y2 * y2).sqrt() <= 240.0);
        let topology = two_player_topology(x1, y1, x2, y2);
        let params = cparams(1);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let channel = draw_channel(&topology, &params, &mut rng);
        let grid = PowerGrid::new(vec![0.01, 0.05, 0.1]).unwrap();

        let mut allocation = fran_core::Allocation::new(2, 1, grid);
        allocation.assign(FueId(0), 0, 0).unwrap();
        allocation.assign(FueId(1), 0, 1).unwrap();
        let base = sinr(FueId(0), 0, &allocation, &channel, &params, &topology).unwrap();

        // More own power never hurts.
        allocation.set_power(FueId(0), 0, 2).unwrap();
        let boosted = sinr(FueId(0), 0, &allocation, &channel, &params, &topology).unwrap();
        prop_assert!(boosted >= base);

        // More interferer power never helps.
        allocation.set_power(FueId(0), 0, 0).unwrap();
        allocation.set_power(FueId(1), 0, 2).unwrap();
        let jammed = sinr(FueId(0), 0, &allocation, &channel, &params, &topology).unwrap();
        prop_assert!(jammed <= base);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    /// Every scheme's allocation must respect intra-cell orthogonality and
    /// a finite per-F-UE power budget when one is set.
    #[test]
    fn allocations_respect_orthogonality_and_finite_budget(
        seed in any::<u64>(),
        n_faps in 2usize..6,
        n_fues_per_fap in 1usize..4,
    ) {
        let config = fran_core::TopologyConfig {
            n_faps,
            n_fues_per_fap,
            n_macro_fues: 2,
            ..Default::default()
        };
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let topology = fran_core::generate_topology(&config, &mut rng).unwrap();
        let params = cparams(4);
        let channel = draw_channel(&topology, &params, &mut rng);
        let budget = 0.12;
        let grid = PowerGrid::new(vec![0.01, 0.02, 0.05, 0.1])
            .unwrap()
            .with_budget(budget)
            .unwrap();
        let uparams = UtilityParams {
            price_coefficient: 1e18,
            price_exponent: 1.0,
            reward_coefficient: 1e7,
        };

        for scheme in Scheme::ALL {
            let result =
                run_baseline(scheme, &topology, &channel, &params, &uparams, &grid).unwrap();
            result.allocation.check_invariants(&topology).unwrap();
            for fue in &topology.fues {
                prop_assert!(
                    result.allocation.total_power_w(fue.id) <= budget * (1.0 + 1e-9),
                    "{scheme:?}: F-UE {} over budget", fue.id.0
                );
                // Only the coordinated schemes guarantee coverage; the
                // uncoordinated baseline may starve a weak F-UE.
                if scheme != Scheme::NonFran {
                    if let ServingNode::Fap(_) = fue.serving_node {
                        prop_assert!(
                            !result.allocation.assigned_subchannels(fue.id).is_empty(),
                            "{scheme:?}: F-UE {} left uncovered", fue.id.0
                        );
                    }
                }
            }
        }
    }
}
