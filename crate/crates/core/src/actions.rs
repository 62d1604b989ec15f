//! Joint-action enumeration for the player to move.
//!
//! Every idle squad picks one option: `Hold`, or `Move` to a reachable
//! region (ground squads use adjacent regions; flyers pick among the `k`
//! nearest regions by air distance). A joint action assigns one option to
//! every idle squad, so the raw joint space is the Cartesian product of the
//! per-squad option lists. Small products are enumerated exhaustively;
//! larger ones are down-sampled to a deterministic, duplicate-free set of
//! `action_cap` actions that always contains the all-Hold action.

use std::collections::HashSet;
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graph::RegionId;
use crate::state::{GameState, Player, Squad};
use crate::world::World;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum OrderKind {
    /// Stay in place for the world's hold duration, then rejoin the
    /// decision set.
    Hold,
    Move(RegionId),
}

/// One order addressed to a squad by its index in the state's squad list.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SquadOrder {
    pub squad: usize,
    pub kind: OrderKind,
}

/// Exactly one order per idle squad of the acting player.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct JointAction {
    pub orders: Vec<SquadOrder>,
}

impl fmt::Display for OrderKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OrderKind::Hold => write!(f, "hold"),
            OrderKind::Move(r) => write!(f, "move->{r}"),
        }
    }
}

impl fmt::Display for SquadOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "s{}:{}", self.squad, self.kind)
    }
}

impl fmt::Display for JointAction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, order) in self.orders.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{order}")?;
        }
        write!(f, "]")
    }
}

/// Branching bounds shared by every planner.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ActionLimits {
    /// Maximum number of joint actions emitted per decision point.
    pub action_cap: usize,
    /// Flyers may move to any region; their option list keeps only the
    /// `flyer_k` nearest by air distance.
    pub flyer_k: usize,
}

impl Default for ActionLimits {
    fn default() -> ActionLimits {
        ActionLimits { action_cap: 128, flyer_k: 8 }
    }
}

/// Option list for one squad: `Hold` first, then moves in ascending region
/// order (ground) or nearest-first air order (flyers).
pub fn squad_move_options(
    world: &World,
    squad: &Squad,
    limits: &ActionLimits,
) -> Result<Vec<OrderKind>> {
    let mut options = vec![OrderKind::Hold];
    if world.catalog().get(squad.unit_type).flyer {
        let mut reachable: Vec<(f64, RegionId)> = Vec::new();
        for region in 0..world.graph().region_count() {
            if region != squad.region {
                reachable.push((world.graph().air_length(squad.region, region)?, region));
            }
        }
        reachable.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
        reachable.truncate(limits.flyer_k);
        options.extend(reachable.into_iter().map(|(_, r)| OrderKind::Move(r)));
    } else {
        for &(neighbor, _) in world.graph().neighbors(squad.region)? {
            options.push(OrderKind::Move(neighbor));
        }
    }
    Ok(options)
}

/// Enumerates (or samples) the joint actions available to `p`.
///
/// The output length is `min(action_cap, Π per-squad option counts)`, the
/// all-Hold action always comes first, and the list is a pure function of
/// `(state, p, limits, rng_seed)`.
pub fn generate_joint_actions(
    world: &World,
    state: &GameState,
    p: Player,
    limits: &ActionLimits,
    rng_seed: u64,
) -> Result<Vec<JointAction>> {
    if limits.action_cap == 0 {
        return Err(Error::InvalidConfig("action_cap must be at least 1".into()));
    }
    let idle = state.idle_squads(p);
    if idle.is_empty() {
        return Err(Error::NoIdleSquads(p));
    }
    let options: Vec<Vec<OrderKind>> = idle
        .iter()
        .map(|&i| squad_move_options(world, &state.squads[i], limits))
        .collect::<Result<_>>()?;
    let product = options
        .iter()
        .fold(1usize, |acc, opts| acc.saturating_mul(opts.len()));

    let assemble = |digits: &[usize]| JointAction {
        orders: digits
            .iter()
            .enumerate()
            .map(|(i, &d)| SquadOrder { squad: idle[i], kind: options[i][d] })
            .collect(),
    };

    let mut out = Vec::new();
    if product <= limits.action_cap {
        // Odometer over the full product, last squad cycling fastest; the
        // all-zero first tuple is the all-Hold action.
        let mut digits = vec![0usize; options.len()];
        loop {
            out.push(assemble(&digits));
            let mut pos = options.len();
            loop {
                if pos == 0 {
                    return Ok(out);
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

    let mut rng = ChaCha8Rng::seed_from_u64(rng_seed);
    let mut seen: HashSet<Vec<usize>> = HashSet::new();
    let all_hold = vec![0usize; options.len()];
    seen.insert(all_hold.clone());
    out.push(assemble(&all_hold));
    while out.len() < limits.action_cap {
        let digits: Vec<usize> = options
            .iter()
            .map(|opts| rng.gen_range(0..opts.len()))
            .collect();
        if seen.insert(digits.clone()) {
            out.push(assemble(&digits));
        }
    }
    Ok(out)
}

/// Draws one joint action with every squad choosing uniformly among its own
/// options, independently of the other squads. Used by rollout policies.
pub fn random_joint_action<R: Rng>(
    world: &World,
    state: &GameState,
    p: Player,
    limits: &ActionLimits,
    rng: &mut R,
) -> Result<JointAction> {
    let idle = state.idle_squads(p);
    if idle.is_empty() {
        return Err(Error::NoIdleSquads(p));
    }
    let mut orders = Vec::with_capacity(idle.len());
    for &squad in &idle {
        let options = squad_move_options(world, &state.squads[squad], limits)?;
        let kind = options[rng.gen_range(0..options.len())];
        orders.push(SquadOrder { squad, kind });
    }
    Ok(JointAction { orders })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::RegionGraph;
    use crate::units::{UnitType, UnitTypeCatalog};

    fn catalog() -> UnitTypeCatalog {
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
                dps_ground: 5.0,
                dps_air: 5.0,
                flyer: true,
                speed: 3.0,
                destroy_score: 120.0,
            },
        ])
        .unwrap()
    }

    fn squad(owner: Player, ty: usize, region: RegionId) -> Squad {
        Squad::at_full_health(owner, ty, 1, [50.0, 30.0][ty], region)
    }

    /// Triangle 0-1-2 plus a pendant region 3 off region 2.
    fn world() -> World {
        let graph = RegionGraph::new(
            4,
            vec![(0, 1, 10.0), (0, 2, 10.0), (1, 2, 10.0), (2, 3, 10.0)],
            None,
        )
        .unwrap();
        World::new(graph, catalog())
    }

    #[test]
    fn one_squad_two_neighbors_yields_three_actions() {
        let w = world();
        let state = GameState::new(
            0.0,
            100.0,
            vec![squad(Player::P0, 0, 0), squad(Player::P1, 0, 3)],
        );
        let actions =
            generate_joint_actions(&w, &state, Player::P0, &ActionLimits::default(), 0).unwrap();
        let kinds: Vec<OrderKind> = actions.iter().map(|a| a.orders[0].kind).collect();
        assert_eq!(
            kinds,
            vec![OrderKind::Hold, OrderKind::Move(1), OrderKind::Move(2)]
        );
    }

    #[test]
    fn two_squads_enumerate_the_full_product_in_odometer_order() {
        let w = world();
        let state = GameState::new(
            0.0,
            100.0,
            vec![
                squad(Player::P0, 0, 0),
                squad(Player::P0, 0, 1),
                squad(Player::P1, 0, 3),
            ],
        );
        let actions =
            generate_joint_actions(&w, &state, Player::P0, &ActionLimits::default(), 0).unwrap();
        assert_eq!(actions.len(), 9);
        // All-Hold first, second squad cycling fastest.
        let rendered: Vec<String> = actions.iter().map(|a| a.to_string()).collect();
        assert_eq!(
            rendered,
            vec![
                "[s0:hold s1:hold]",
                "[s0:hold s1:move->0]",
                "[s0:hold s1:move->2]",
                "[s0:move->1 s1:hold]",
                "[s0:move->1 s1:move->0]",
                "[s0:move->1 s1:move->2]",
                "[s0:move->2 s1:hold]",
                "[s0:move->2 s1:move->0]",
                "[s0:move->2 s1:move->2]",
            ]
        );
    }

    #[test]
    fn oversized_products_are_sampled_without_duplicates() {
        // Five squads in the triangle: region 0,1,2 give 3 options each, so
        // 3^5 = 243 > cap.
        let w = world();
        let mut squads = vec![
            squad(Player::P0, 0, 0),
            squad(Player::P0, 0, 1),
            squad(Player::P0, 0, 2),
            squad(Player::P1, 0, 3),
        ];
        squads.insert(0, squad(Player::P0, 1, 0)); // flyer: 3 regions to fly to + hold
        squads.insert(0, squad(Player::P0, 1, 1));
        let state = GameState::new(0.0, 100.0, squads);
        let limits = ActionLimits { action_cap: 100, flyer_k: 8 };
        let actions = generate_joint_actions(&w, &state, Player::P0, &limits, 42).unwrap();
        assert_eq!(actions.len(), 100);
        let distinct: HashSet<String> = actions.iter().map(|a| a.to_string()).collect();
        assert_eq!(distinct.len(), 100, "sampled actions are distinct");
        assert!(
            actions[0].orders.iter().all(|o| o.kind == OrderKind::Hold),
            "all-Hold anchor comes first"
        );
        let again = generate_joint_actions(&w, &state, Player::P0, &limits, 42).unwrap();
        assert_eq!(actions, again, "same seed, same list");
        let other = generate_joint_actions(&w, &state, Player::P0, &limits, 43).unwrap();
        assert_ne!(actions, other, "different seed explores differently");
    }

    #[test]
    fn flyer_options_keep_the_k_nearest_regions() {
        let graph = RegionGraph::new(
            4,
            vec![(0, 1, 1.0)],
            Some(vec![(0.0, 0.0), (3.0, 0.0), (1.0, 0.0), (2.0, 0.0)]),
        )
        .unwrap();
        let w = World::new(graph, catalog());
        let flyer = squad(Player::P0, 1, 0);
        let limits = ActionLimits { action_cap: 128, flyer_k: 2 };
        let options = squad_move_options(&w, &flyer, &limits).unwrap();
        // Distances from region 0: region 2 at 1.0, region 3 at 2.0,
        // region 1 at 3.0; k=2 keeps regions 2 and 3.
        assert_eq!(
            options,
            vec![OrderKind::Hold, OrderKind::Move(2), OrderKind::Move(3)]
        );
    }

    #[test]
    fn ground_squad_with_no_edges_can_only_hold() {
        let graph = RegionGraph::new(2, vec![], None).unwrap();
        let w = World::new(graph, catalog());
        let state = GameState::new(
            0.0,
            100.0,
            vec![squad(Player::P0, 0, 0), squad(Player::P1, 0, 1)],
        );
        let actions =
            generate_joint_actions(&w, &state, Player::P0, &ActionLimits::default(), 0).unwrap();
        assert_eq!(actions.len(), 1);
        assert_eq!(actions[0].orders[0].kind, OrderKind::Hold);
    }

    #[test]
    fn players_without_idle_squads_get_an_error() {
        let w = world();
        let state = GameState::new(0.0, 100.0, vec![squad(Player::P1, 0, 3)]);
        assert!(matches!(
            generate_joint_actions(&w, &state, Player::P0, &ActionLimits::default(), 0),
            Err(Error::NoIdleSquads(Player::P0))
        ));
    }

    #[test]
    fn zero_cap_is_rejected() {
        let w = world();
        let state = GameState::new(0.0, 100.0, vec![squad(Player::P0, 0, 0)]);
        let limits = ActionLimits { action_cap: 0, flyer_k: 8 };
        assert!(matches!(
            generate_joint_actions(&w, &state, Player::P0, &limits, 0),
            Err(Error::InvalidConfig(_))
        ));
    }

    #[test]
    fn random_joint_action_orders_every_idle_squad() {
        use rand::SeedableRng;
        let w = world();
        let state = GameState::new(
            0.0,
            100.0,
            vec![
                squad(Player::P0, 0, 0),
                squad(Player::P0, 0, 2),
                squad(Player::P1, 0, 3),
            ],
        );
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let action =
            random_joint_action(&w, &state, Player::P0, &ActionLimits::default(), &mut rng)
                .unwrap();
        assert_eq!(action.orders.len(), 2);
        assert!(w.apply_joint_action(&state, Player::P0, &action).is_ok());
    }

    mod properties {
        use super::*;
        use proptest::prelude::*;

        fn arb_state() -> impl Strategy<Value = GameState> {
            // 1-3 idle squads for each player on the 4-region test map.
            let squad_strategy = || (0usize..2, 0usize..4);
            (
                proptest::collection::vec(squad_strategy(), 1..=3),
                proptest::collection::vec(squad_strategy(), 1..=3),
            )
                .prop_map(|(p0, p1)| {
                    let mut squads = Vec::new();
                    for (ty, region) in p0 {
                        squads.push(squad(Player::P0, ty, region));
                    }
                    for (ty, region) in p1 {
                        squads.push(squad(Player::P1, ty, region));
                    }
                    crate::state::merge_idle_squads(&GameState::new(0.0, 100.0, squads))
                })
        }

        proptest! {
            #[test]
            fn generated_actions_are_always_applicable(
                state in arb_state(),
                cap in 1usize..40,
                seed in 0u64..500,
            ) {
                let w = world();
                let limits = ActionLimits { action_cap: cap, flyer_k: 3 };
                let actions =
                    generate_joint_actions(&w, &state, Player::P0, &limits, seed).unwrap();
                for action in &actions {
                    prop_assert!(w.apply_joint_action(&state, Player::P0, action).is_ok());
                }
            }

            #[test]
            fn output_size_is_min_of_cap_and_product(
                state in arb_state(),
                cap in 1usize..40,
                seed in 0u64..500,
            ) {
                let w = world();
                let limits = ActionLimits { action_cap: cap, flyer_k: 3 };
                let options: Vec<usize> = state
                    .idle_squads(Player::P0)
                    .iter()
                    .map(|&i| squad_move_options(&w, &state.squads[i], &limits).unwrap().len())
                    .collect();
                let product: usize = options.iter().product();
                let actions =
                    generate_joint_actions(&w, &state, Player::P0, &limits, seed).unwrap();
                prop_assert_eq!(actions.len(), product.min(cap));
                let distinct: HashSet<&JointAction> = actions.iter().collect();
                prop_assert_eq!(distinct.len(), actions.len());
            }

            #[test]
            fn generation_is_a_pure_function(state in arb_state(), seed in 0u64..500) {
                let w = world();
                let limits = ActionLimits { action_cap: 20, flyer_k: 3 };
                let a = generate_joint_actions(&w, &state, Player::P0, &limits, seed).unwrap();
                let b = generate_joint_actions(&w, &state, Player::P0, &limits, seed).unwrap();
                prop_assert_eq!(a, b);
            }
        }
    }
}
