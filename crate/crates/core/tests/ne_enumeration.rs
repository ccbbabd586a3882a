//! Best-response outcomes versus brute force on small instances.
//!
//! For 200 randomized instances small enough to enumerate (up to 3
//! players, 3 power levels, and 2 subchannels), every converged run of the
//! sequential best-response dynamics must land on a profile that the
//! exhaustive search certifies as a pure Nash equilibrium. The convergence
//! rate itself must stay at or above 95% under default parameters.

use fran_core::{
    draw_channel, iterate_to_ne, net_utility, Allocation, ChannelParams, Fap, FapId, Fue, FueId,
    Point, PowerGrid, ServingNode, Topology, UtilityParams,
};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Each player sits in its own F-AP, so intra-cell orthogonality never
/// restricts the subchannel sharing pattern under test.
fn random_instance(
    rng: &mut ChaCha8Rng,
) -> (Topology, ChannelParams, PowerGrid, Vec<Vec<usize>>) {
    let n_players = rng.gen_range(1..=3);
    let n_subchannels = rng.gen_range(1..=2);
    let n_levels = rng.gen_range(2..=3);

    let mut faps = Vec::new();
    let mut fues = Vec::new();
    for i in 0..n_players {
        let angle = rng.gen::<f64>() * std::f64::consts::TAU;
        let r = 20.0 + 220.0 * rng.gen::<f64>();
        let position = Point {
            x: r * angle.cos(),
            y: r * angle.sin(),
        };
        faps.push(Fap {
            id: FapId(i),
            position,
            radius: 30.0,
            cache_hit_ratio: rng.gen_range(0.2..0.8),
        });
        fues.push(Fue {
            id: FueId(i),
            position: Point {
                x: position.x + rng.gen_range(-20.0..20.0),
                y: position.y + rng.gen_range(-20.0..20.0),
            },
            serving_node: ServingNode::Fap(FapId(i)),
            speed: 1.5,
        });
    }
    let topology = Topology {
        mrrh_position: Point::ORIGIN,
        mrrh_radius: 250.0,
        faps,
        fues,
    };
    topology.validate().unwrap();

    let cparams = ChannelParams {
        pathloss_exponent: 3.76,
        reference_gain: 1e-3,
        noise_power: 7.16e-16,
        bandwidth_per_subchannel: 180e3,
        n_subchannels,
    };
    let mut levels: Vec<f64> = (0..n_levels)
        .map(|_| rng.gen_range(1e-3..0.2))
        .collect();
    levels.sort_by(|a, b| a.partial_cmp(b).unwrap());
    levels.dedup_by(|a, b| (*a - *b).abs() < 1e-6);
    while levels.len() < n_levels {
        levels.push(levels.last().unwrap() * 1.5);
    }
    let grid = PowerGrid::new(levels).unwrap();

    // Random nonempty subchannel subset per player.
    let assignments: Vec<Vec<usize>> = (0..n_players)
        .map(|_| {
            let mut subs: Vec<usize> =
                (0..n_subchannels).filter(|_| rng.gen::<bool>()).collect();
            if subs.is_empty() {
                subs.push(rng.gen_range(0..n_subchannels));
            }
            subs
        })
        .collect();
    (topology, cparams, grid, assignments)
}

fn build_allocation(
    topology: &Topology,
    cparams: &ChannelParams,
    grid: &PowerGrid,
    assignments: &[Vec<usize>],
) -> Allocation {
    let mut allocation = Allocation::new(topology.fues.len(), cparams.n_subchannels, grid.clone());
    for (i, subs) in assignments.iter().enumerate() {
        for &k in subs {
            allocation.assign(FueId(i), k, 0).unwrap();
        }
    }
    allocation
}

/// True iff no single (player, subchannel) move to another level improves
/// that player's utility beyond float-scale tolerance.
fn is_pure_ne(
    allocation: &Allocation,
    topology: &Topology,
    channel: &fran_core::ChannelRealization,
    uparams: &UtilityParams,
    cparams: &ChannelParams,
    grid: &PowerGrid,
) -> bool {
    for fue in topology.fues.iter().map(|f| f.id) {
        let current = net_utility(fue, allocation, channel, uparams, cparams, topology).unwrap();
        for k in allocation.assigned_subchannels(fue) {
            let held = allocation.power_index(fue, k).unwrap();
            for level in 0..grid.n_levels() {
                if level == held {
                    continue;
                }
                let mut trial = allocation.clone();
                trial.set_power(fue, k, level).unwrap();
                let deviated =
                    net_utility(fue, &trial, channel, uparams, cparams, topology).unwrap();
                if deviated - current > 1e-9 * current.abs().max(1.0) {
                    return false;
                }
            }
        }
    }
    true
}

#[test]
fn converged_profiles_are_exact_equilibria_on_200_instances() {
    let uparams = UtilityParams {
        price_coefficient: 1e18,
        price_exponent: 1.0,
        reward_coefficient: 1e7,
    };
    let mut converged_count = 0;
    const INSTANCES: usize = 200;
    for seed in 0..INSTANCES as u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(1000 + seed);
        let (topology, cparams, grid, assignments) = random_instance(&mut rng);
        let channel = draw_channel(&topology, &cparams, &mut rng);
        let allocation = build_allocation(&topology, &cparams, &grid, &assignments);
        let result = iterate_to_ne(
            allocation, &channel, &uparams, &cparams, &topology, &grid, 100, 1e-9,
        )
        .unwrap();
        if result.converged {
            converged_count += 1;
            assert!(
                is_pure_ne(
                    &result.allocation,
                    &topology,
                    &channel,
                    &uparams,
                    &cparams,
                    &grid
                ),
                "seed {seed}: converged profile fails the enumeration check"
            );
        }
    }
    let rate = converged_count as f64 / INSTANCES as f64;
    println!("convergence rate: {rate:.3} ({converged_count}/{INSTANCES})");
    assert!(rate >= 0.95, "convergence rate {rate} below 0.95");
}

/// The dynamics must find the same equilibrium set membership that full
/// profile enumeration does, not merely a local stopping point: spot-check
/// by enumerating every profile on a handful of instances and confirming
/// the returned profile is in the enumerated equilibrium set.
#[test]
fn returned_profile_is_in_the_enumerated_equilibrium_set() {
    let uparams = UtilityParams {
        price_coefficient: 1e18,
        price_exponent: 1.0,
        reward_coefficient: 1e7,
    };
    for seed in 0..25u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(7000 + seed);
        let (topology, cparams, grid, assignments) = random_instance(&mut rng);
        let channel = draw_channel(&topology, &cparams, &mut rng);

        // Enumerate every joint level profile over the assigned pairs.
        let pairs: Vec<(FueId, usize)> = assignments
            .iter()
            .enumerate()
            .flat_map(|(i, subs)| subs.iter().map(move |&k| (FueId(i), k)))
            .collect();
        let n_levels = grid.n_levels();
        let mut equilibria: Vec<Vec<usize>> = Vec::new();
        let n_profiles = n_levels.pow(pairs.len() as u32);
        for code in 0..n_profiles {
            let mut profile = Vec::with_capacity(pairs.len());
            let mut rest = code;
            for _ in 0..pairs.len() {
                profile.push(rest % n_levels);
                rest /= n_levels;
            }
            let mut allocation =
                build_allocation(&topology, &cparams, &grid, &assignments);
            for (&(fue, k), &level) in pairs.iter().zip(&profile) {
                allocation.set_power(fue, k, level).unwrap();
            }
            if is_pure_ne(&allocation, &topology, &channel, &uparams, &cparams, &grid) {
                equilibria.push(profile);
            }
        }

        let allocation = build_allocation(&topology, &cparams, &grid, &assignments);
        let result = iterate_to_ne(
            allocation, &channel, &uparams, &cparams, &topology, &grid, 100, 1e-9,
        )
        .unwrap();
        if !result.converged {
            continue;
        }
        let reached: Vec<usize> = pairs
            .iter()
            .map(|&(fue, k)| result.allocation.power_index(fue, k).unwrap())
            .collect();
        assert!(
            equilibria.contains(&reached),
            "seed {seed}: reached profile {reached:?} not among {} equilibria",
            equilibria.len()
        );
    }
}
