//! Deterministic baseline opponents.
//!
//! `scripted_attack_policy` is a fixed aggressor: every idle squad heads for
//! the nearest enemy-occupied region — ground squads one edge at a time
//! along the shortest ground path, flyers in one direct flight — and holds
//! when already sharing a region with the enemy or when no enemy region is
//! reachable. `scripted_random_policy` plays the uniform-random rollout
//! policy as a standalone opponent.

use std::collections::BTreeSet;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::actions::{random_joint_action, ActionLimits, JointAction, OrderKind, SquadOrder};
use crate::error::{Error, Result};
use crate::graph::RegionId;
use crate::state::{GameState, Player};
use crate::world::World;

/// March every idle squad toward the closest enemy presence.
pub fn scripted_attack_policy(
    world: &World,
    state: &GameState,
    p: Player,
) -> Result<JointAction> {
    let idle = state.idle_squads(p);
    if idle.is_empty() {
        return Err(Error::NoIdleSquads(p));
    }
    let enemy_regions: BTreeSet<RegionId> =
        state.squads_of(p.opponent()).map(|s| s.region).collect();
    let mut orders = Vec::with_capacity(idle.len());
    for &index in &idle {
        let squad = &state.squads[index];
        let kind = if enemy_regions.contains(&squad.region) {
            OrderKind::Hold // stand and fight
        } else if world.catalog().get(squad.unit_type).flyer {
            match nearest_by_air(world, squad.region, &enemy_regions)? {
                Some(target) => OrderKind::Move(target),
                None => OrderKind::Hold,
            }
        } else {
            match nearest_by_ground(world, squad.region, &enemy_regions)? {
                Some(target) => {
                    let (_, path) = world
                        .graph()
                        .shortest_path(squad.region, target)?
                        .expect("a finite ground distance implies a path");
                    OrderKind::Move(path[1])
                }
                None => OrderKind::Hold, // enemy unreachable by ground
            }
        };
        orders.push(SquadOrder { squad: index, kind });
    }
    Ok(JointAction { orders })
}

/// Closest enemy region by straight-line distance; ties take the smallest
/// region id. `None` when the enemy holds no regions.
fn nearest_by_air(
    world: &World,
    from: RegionId,
    enemy_regions: &BTreeSet<RegionId>,
) -> Result<Option<RegionId>> {
    let mut best: Option<(f64, RegionId)> = None;
    for &region in enemy_regions {
        let distance = world.graph().air_length(from, region)?;
        if best.is_none_or(|(d, r)| (distance, region) < (d, r)) {
            best = Some((distance, region));
        }
    }
    Ok(best.map(|(_, r)| r))
}

/// Closest enemy region by shortest ground path; ties take the smallest
/// region id. `None` when no enemy region is ground-reachable.
fn nearest_by_ground(
    world: &World,
    from: RegionId,
    enemy_regions: &BTreeSet<RegionId>,
) -> Result<Option<RegionId>> {
    let mut best: Option<(f64, RegionId)> = None;
    for &region in enemy_regions {
        if let Some(distance) = world.graph().ground_distance(from, region)? {
            if best.is_none_or(|(d, r)| (distance, region) < (d, r)) {
                best = Some((distance, region));
            }
        }
    }
    Ok(best.map(|(_, r)| r))
}

/// Uniform-random legal joint action, reproducible from `seed`.
pub fn scripted_random_policy(
    world: &World,
    state: &GameState,
    p: Player,
    limits: &ActionLimits,
    seed: u64,
) -> Result<JointAction> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    random_joint_action(world, state, p, limits, &mut rng)
}
