//! Shared fixtures and independent oracles for the acceptance suite.
//!
//! The oracles deliberately reimplement their targets from first
//! principles: the minimax oracle keeps every value in player-0 terms and
//! applies explicit max/min by mover (no negation bookkeeping), and the
//! rollout oracle computes exact expectations by enumerating every
//! trajectory of the uniform rollout policy. Both share only the successor
//! function (action generation and state advancement) with the planners
//! under test, which is what the equivalence statements quantify over.

use std::sync::Mutex;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use squadplan_core::{
    both_can_move, evaluate, generate_joint_actions, is_terminal, player_to_move,
    squad_move_options, ActionLimits, GameState, JointAction, Order, Player, RegionGraph, Squad,
    SquadOrder, UnitType, UnitTypeCatalog, World,
};

/// Timing-sensitive criteria serialize on this lock so the default
/// multi-threaded test harness cannot skew their wall-clock measurements.
pub static SERIAL: Mutex<()> = Mutex::new(());

pub fn serial_guard() -> std::sync::MutexGuard<'static, ()> {
    SERIAL.lock().unwrap_or_else(|poisoned| poisoned.into_inner())
}

/// Ground bruiser and a faster flyer; enough to exercise both move rules
/// and both damage classes.
pub fn mixed_catalog() -> UnitTypeCatalog {
    UnitTypeCatalog::new(vec![
        UnitType {
            name: "grunt".into(),
            max_hp: 50.0,
            dps_ground: 10.0,
            dps_air: 10.0,
            flyer: false,
            speed: 2.0,
            destroy_score: 100.0,
        },
        UnitType {
            name: "wasp".into(),
            max_hp: 30.0,
            dps_ground: 6.0,
            dps_air: 9.0,
            flyer: true,
            speed: 3.0,
            destroy_score: 120.0,
        },
    ])
    .unwrap()
}

/// Connected random graph: spanning tree plus a few extra edges, lengths in
/// `[8, 16)`, no positions (air distance falls back to the longest edge).
pub fn random_graph(rng: &mut ChaCha8Rng, regions: usize) -> RegionGraph {
    let mut edges = Vec::new();
    for i in 1..regions {
        let j = rng.gen_range(0..i);
        edges.push((j, i, rng.gen_range(8.0..16.0)));
    }
    for _ in 0..regions / 2 {
        let a = rng.gen_range(0..regions);
        let b = rng.gen_range(0..regions);
        if a != b && !edges.iter().any(|&(x, y, _)| (x, y) == (a.min(b), a.max(b))) {
            edges.push((a.min(b), a.max(b), rng.gen_range(8.0..16.0)));
        }
    }
    RegionGraph::new(regions, edges, None).unwrap()
}

/// A small adversarial planning instance with every squad idle.
pub struct Instance {
    pub world: World,
    pub state: GameState,
    pub for_player: Player,
}

/// Seeded random instance within the oracle-tractable envelope: 2-4
/// regions, 1-2 squads per side, occasional in-flight enemy squads so the
/// same player moves at consecutive decision points.
pub fn random_small_instance(seed: u64) -> Instance {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let regions = rng.gen_range(2..=4);
    let graph = random_graph(&mut rng, regions);
    let catalog = mixed_catalog();
    let world = World::new(graph, catalog);

    let mut squads = Vec::new();
    for owner in [Player::P0, Player::P1] {
        for _ in 0..rng.gen_range(1..=2) {
            let ty = rng.gen_range(0..2);
            let count = rng.gen_range(1..=3);
            let max_hp = world.catalog().get(ty).max_hp;
            let region = rng.gen_range(0..regions);
            squads.push(Squad::at_full_health(owner, ty, count, max_hp, region));
        }
    }
    let for_player = if rng.gen_bool(0.5) { Player::P0 } else { Player::P1 };

    // A quarter of instances put every enemy squad in flight, creating
    // consecutive decision points for the planning player.
    if seed.is_multiple_of(4) {
        let enemy = for_player.opponent();
        for squad in squads.iter_mut().filter(|s| s.owner == enemy) {
            let targets = squad_move_options(
                &world,
                squad,
                &ActionLimits { action_cap: 128, flyer_k: 3 },
            )
            .unwrap();
            if targets.len() > 1 {
                if let squadplan_core::OrderKind::Move(target) = targets[1] {
                    let travel = world.travel_time(squad.unit_type, squad.region, target).unwrap();
                    // Stretch the flight so it outlasts a couple of plies.
                    squad.order =
                        Order::Moving { target, arrival: travel + rng.gen_range(6.0..12.0) };
                }
            }
        }
    }

    let state = squadplan_core::merge_idle_squads(&GameState::new(
        0.0,
        rng.gen_range(40.0..70.0),
        squads,
    ));
    Instance { world, state, for_player }
}

/// Exhaustive minimax value of a decision point, in player-0 terms.
///
/// `ls` is the pre-update serialization marker entering this node (the
/// player who acted at the last simultaneous decision point). Depth counts
/// decision points exactly as the planner under test does.
pub fn minimax_value_pov0(
    world: &World,
    state: &GameState,
    ls: Player,
    depth: usize,
    limits: &ActionLimits,
    seed: u64,
) -> f64 {
    if is_terminal(state) || depth == 0 {
        return evaluate(state, world.catalog(), Player::P0);
    }
    let mover = player_to_move(state, ls).expect("oracle called on a decision point");
    let ls = if both_can_move(state) { mover } else { ls };
    let actions = generate_joint_actions(world, state, mover, limits, seed).unwrap();
    let values = actions.iter().map(|action| {
        let issued = world.apply_joint_action(state, mover, action).unwrap();
        let child = world.advance_to_decision(issued, seed).unwrap();
        minimax_value_pov0(world, &child, ls, depth - 1, limits, seed)
    });
    if mover == Player::P0 {
        values.fold(f64::NEG_INFINITY, f64::max)
    } else {
        values.fold(f64::INFINITY, f64::min)
    }
}

/// Root decision by the exhaustive minimax: the chosen action and its
/// value in player-0 terms. Ties resolve to the earliest generated action.
pub fn minimax_root(
    world: &World,
    state: &GameState,
    for_player: Player,
    depth: usize,
    limits: &ActionLimits,
    seed: u64,
) -> (JointAction, f64) {
    assert!(depth >= 1);
    let ls = if both_can_move(state) { for_player } else { for_player.opponent() };
    let actions = generate_joint_actions(world, state, for_player, limits, seed).unwrap();
    let mut best: Option<(JointAction, f64)> = None;
    for action in actions {
        let issued = world.apply_joint_action(state, for_player, &action).unwrap();
        let child = world.advance_to_decision(issued, seed).unwrap();
        let value = minimax_value_pov0(world, &child, ls, depth - 1, limits, seed);
        let better = match &best {
            None => true,
            Some((_, incumbent)) => {
                if for_player == Player::P0 {
                    value > *incumbent
                } else {
                    value < *incumbent
                }
            }
        };
        if better {
            best = Some((action, value));
        }
    }
    best.expect("decision points have at least one action")
}

/// Exact expected reward (player-0 evaluation of the end state) of the
/// uniform-random rollout policy from `state`, stopping at terminal states
/// or once the clock has advanced `budget` seconds past `start_clock`.
///
/// Enumerates the full Cartesian product of per-squad options at every
/// decision, weighting each branch equally — the exact distribution
/// `random_joint_action` samples from.
pub fn expected_rollout_reward(
    world: &World,
    state: &GameState,
    ls: Player,
    start_clock: f64,
    budget: f64,
    limits: &ActionLimits,
) -> f64 {
    if is_terminal(state) || state.clock - start_clock >= budget {
        return evaluate(state, world.catalog(), Player::P0);
    }
    match player_to_move(state, ls) {
        None => {
            let next = world.forward(state, 0).unwrap();
            expected_rollout_reward(world, &next, ls, start_clock, budget, limits)
        }
        Some(mover) => {
            let ls = if both_can_move(state) { mover } else { ls };
            let idle = state.idle_squads(mover);
            let options: Vec<Vec<squadplan_core::OrderKind>> = idle
                .iter()
                .map(|&i| squad_move_options(world, &state.squads[i], limits).unwrap())
                .collect();
            let mut digits = vec![0usize; options.len()];
            let mut total = 0.0;
            let mut branches = 0u64;
            loop {
                let action = JointAction {
                    orders: digits
                        .iter()
                        .enumerate()
                        .map(|(i, &d)| SquadOrder { squad: idle[i], kind: options[i][d] })
                        .collect(),
                };
                let issued = world.apply_joint_action(state, mover, &action).unwrap();
                total +=
                    expected_rollout_reward(world, &issued, ls, start_clock, budget, limits);
                branches += 1;
                let mut pos = options.len();
                loop {
                    if pos == 0 {
                        return total / branches as f64;
                    }
                    pos -= 1;
                    digits[pos] += 1;
                    if digits[pos] < options[pos].len() {
                        break;
                    }
                    digits[pos] = 0;
                }
            }
        }
    }
}
