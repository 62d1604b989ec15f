//! The rules container: map, unit catalog, and the durative state machine.
//!
//! `apply_joint_action` turns idle squads into moving ones; `forward`
//! advances the clock to the next arrival, lands squads, merges duplicates,
//! and resolves combat wherever both owners have squads stationed in the
//! same region. A squad holding position (moving to its own region) counts
//! as stationed: an enemy arrival interrupts the hold and drags it into the
//! fight. Squads in flight toward another region cannot be intercepted.

use std::sync::Arc;

use crate::actions::{JointAction, OrderKind};
use crate::combat::{evaluate_with, Attrition, CombatResolver, EvaluationKind};
use crate::error::{Error, Result};
use crate::graph::{RegionGraph, RegionId};
use crate::state::{merge_idle_in_place, terminal_reason, GameState, Order, Player};
use crate::units::{UnitTypeCatalog, UnitTypeId};

pub struct World {
    graph: RegionGraph,
    catalog: UnitTypeCatalog,
    hold_duration: f64,
    evaluation: EvaluationKind,
    combat: Arc<dyn CombatResolver>,
}

impl World {
    pub fn new(graph: RegionGraph, catalog: UnitTypeCatalog) -> World {
        World {
            graph,
            catalog,
            hold_duration: 6.0,
            evaluation: EvaluationKind::default(),
            combat: Arc::new(Attrition::default()),
        }
    }

    /// Seconds a hold order lasts before the squad re-enters the decision
    /// set. Must be positive.
    pub fn with_hold_duration(mut self, seconds: f64) -> World {
        assert!(seconds > 0.0, "hold duration must be positive");
        self.hold_duration = seconds;
        self
    }

    pub fn with_combat(mut self, resolver: Arc<dyn CombatResolver>) -> World {
        self.combat = resolver;
        self
    }

    pub fn with_evaluation(mut self, kind: EvaluationKind) -> World {
        self.evaluation = kind;
        self
    }

    pub fn graph(&self) -> &RegionGraph {
        &self.graph
    }

    pub fn catalog(&self) -> &UnitTypeCatalog {
        &self.catalog
    }

    pub fn hold_duration(&self) -> f64 {
        self.hold_duration
    }

    pub fn combat(&self) -> &dyn CombatResolver {
        self.combat.as_ref()
    }

    pub fn combat_arc(&self) -> Arc<dyn CombatResolver> {
        Arc::clone(&self.combat)
    }

    pub fn evaluation(&self) -> EvaluationKind {
        self.evaluation
    }

    /// Material balance from `pov`'s perspective under the configured
    /// evaluation.
    pub fn evaluate(&self, state: &GameState, pov: Player) -> f64 {
        evaluate_with(self.evaluation, state, &self.catalog, pov)
    }

    /// Seconds a squad of `unit_type` needs to travel `from -> to`.
    pub fn travel_time(&self, unit_type: UnitTypeId, from: RegionId, to: RegionId) -> Result<f64> {
        let ty = self.catalog.get(unit_type);
        let length = if ty.flyer {
            self.graph.air_length(from, to)?
        } else {
            self.graph.edge_length(from, to)?.ok_or_else(|| {
                Error::IllegalOrder(format!("regions {from} and {to} are not adjacent"))
            })?
        };
        Ok(length / ty.speed)
    }

    /// Issues `action` for player `p`: exactly one order per idle squad of
    /// `p`. Hold becomes a move to the squad's own region lasting
    /// [`World::hold_duration`]; a move's arrival time is the current clock
    /// plus travel time. The clock does not advance.
    pub fn apply_joint_action(
        &self,
        state: &GameState,
        p: Player,
        action: &JointAction,
    ) -> Result<GameState> {
        let idle = state.idle_squads(p);
        if idle.is_empty() {
            return Err(Error::NoIdleSquads(p));
        }
        let mut covered = vec![false; state.squads.len()];
        let mut next = state.clone();
        for order in &action.orders {
            let squad = state.squads.get(order.squad).ok_or_else(|| {
                Error::IllegalOrder(format!("no squad at index {}", order.squad))
            })?;
            if squad.owner != p {
                return Err(Error::IllegalOrder(format!(
                    "squad {} belongs to {}",
                    order.squad, squad.owner
                )));
            }
            if !squad.order.is_idle() {
                return Err(Error::IllegalOrder(format!(
                    "squad {} is already executing an order",
                    order.squad
                )));
            }
            if covered[order.squad] {
                return Err(Error::IllegalOrder(format!(
                    "duplicate order for squad {}",
                    order.squad
                )));
            }
            covered[order.squad] = true;
            let (target, duration) = match order.kind {
                OrderKind::Hold => (squad.region, self.hold_duration),
                OrderKind::Move(target) => {
                    if target >= self.graph.region_count() {
                        return Err(Error::RegionOutOfRange {
                            region: target,
                            count: self.graph.region_count(),
                        });
                    }
                    if target == squad.region {
                        return Err(Error::IllegalOrder(format!(
                            "squad {} ordered to move to its own region",
                            order.squad
                        )));
                    }
                    (target, self.travel_time(squad.unit_type, squad.region, target)?)
                }
            };
            next.squads[order.squad].order =
                Order::Moving { target, arrival: state.clock + duration };
        }
        if let Some(missed) = idle.iter().find(|&&i| !covered[i]) {
            return Err(Error::IllegalOrder(format!(
                "no order for idle squad {missed}"
            )));
        }
        Ok(next)
    }

    /// Advances to the next event: the clock jumps to the earliest arrival
    /// (clamped to the horizon), arriving squads land idle, duplicates
    /// merge, and every region stationed by both owners resolves combat.
    /// `rng_seed` is passed to the combat resolver; the default resolver
    /// ignores it.
    pub fn forward(&self, state: &GameState, rng_seed: u64) -> Result<GameState> {
        if let Some(reason) = terminal_reason(state) {
            return Err(Error::Terminal(reason.as_str()));
        }
        for p in [Player::P0, Player::P1] {
            if state.has_idle(p) {
                return Err(Error::OrdersPending(p));
            }
        }

        let mut next = state.clone();
        let earliest = next
            .squads
            .iter()
            .filter_map(|s| match s.order {
                Order::Moving { arrival, .. } => Some(arrival),
                Order::Idle => None,
            })
            .fold(f64::INFINITY, f64::min);
        debug_assert!(earliest.is_finite(), "non-terminal states always have arrivals");
        if earliest > next.horizon {
            next.clock = next.horizon;
            return Ok(next);
        }

        next.clock = earliest;
        for squad in &mut next.squads {
            if let Order::Moving { target, arrival } = squad.order {
                if arrival <= next.clock {
                    squad.region = target;
                    squad.order = Order::Idle;
                }
            }
        }
        merge_idle_in_place(&mut next.squads);

        // An arrival into a region held by the enemy interrupts the hold:
        // everyone stationed there fights.
        let mut contested: Vec<RegionId> = Vec::new();
        for region in regions_with_squads(&next) {
            let mut present = [false; 2];
            for s in next.squads.iter().filter(|s| s.region == region) {
                if s.is_stationed() {
                    present[s.owner.index()] = true;
                }
            }
            if present[0] && present[1] {
                contested.push(region);
            }
        }
        if !contested.is_empty() {
            for squad in &mut next.squads {
                if contested.contains(&squad.region) && squad.is_stationed() {
                    squad.order = Order::Idle;
                }
            }
            merge_idle_in_place(&mut next.squads);
            for region in contested {
                let first = next
                    .squads
                    .iter()
                    .position(|s| s.region == region && s.order.is_idle())
                    .expect("contested region keeps its combatants");
                let mut fighters = Vec::new();
                let mut index = 0;
                next.squads.retain(|s| {
                    let fighting = s.region == region && s.order.is_idle();
                    if fighting {
                        fighters.push(s.clone());
                    }
                    index += 1;
                    !fighting
                });
                let survivors = self.combat.resolve(&fighters, &self.catalog, rng_seed);
                for (offset, survivor) in survivors.into_iter().enumerate() {
                    next.squads.insert(first + offset, survivor);
                }
            }
        }
        Ok(next)
    }

    /// Repeats [`World::forward`] until the state is terminal or some squad
    /// is idle (a decision point). States already satisfying either
    /// condition are returned unchanged.
    pub fn advance_to_decision(&self, mut state: GameState, rng_seed: u64) -> Result<GameState> {
        loop {
            if terminal_reason(&state).is_some()
                || state.has_idle(Player::P0)
                || state.has_idle(Player::P1)
            {
                return Ok(state);
            }
            state = self.forward(&state, rng_seed)?;
        }
    }

    /// Checks the full set of state invariants; handy for tests and for
    /// validating externally constructed states.
    pub fn validate_state(&self, state: &GameState) -> Result<()> {
        let fail = |msg: String| Err(Error::InvalidScenario(msg));
        if state.horizon <= 0.0 || !state.horizon.is_finite() {
            return fail("horizon must be positive".into());
        }
        if state.clock < 0.0 || !state.clock.is_finite() {
            return fail("clock must be non-negative".into());
        }
        let mut idle_keys = std::collections::HashSet::new();
        for (i, s) in state.squads.iter().enumerate() {
            if s.unit_type >= self.catalog.len() {
                return fail(format!("squad {i} references unknown unit type"));
            }
            let ty = self.catalog.get(s.unit_type);
            if s.count == 0 {
                return fail(format!("squad {i} has zero units"));
            }
            if !s.pool_hp.is_finite()
                || s.pool_hp <= 0.0
                || s.pool_hp > s.count as f64 * ty.max_hp + 1e-9
            {
                return fail(format!("squad {i} pool_hp out of range"));
            }
            if s.region >= self.graph.region_count() {
                return Err(Error::RegionOutOfRange {
                    region: s.region,
                    count: self.graph.region_count(),
                });
            }
            match s.order {
                Order::Idle => {
                    if !idle_keys.insert((s.owner.index(), s.unit_type, s.region)) {
                        return fail(format!("squad {i} duplicates an idle squad key"));
                    }
                }
                Order::Moving { target, arrival } => {
                    if target >= self.graph.region_count() {
                        return Err(Error::RegionOutOfRange {
                            region: target,
                            count: self.graph.region_count(),
                        });
                    }
                    if arrival <= state.clock {
                        return fail(format!("squad {i} arrival not in the future"));
                    }
                    if !ty.flyer
                        && target != s.region
                        && self.graph.edge_length(s.region, target)?.is_none()
                    {
                        return fail(format!("squad {i} moving along a missing edge"));
                    }
                }
            }
        }
        Ok(())
    }
}

fn regions_with_squads(state: &GameState) -> Vec<RegionId> {
    let mut regions: Vec<RegionId> = state.squads.iter().map(|s| s.region).collect();
    regions.sort_unstable();
    regions.dedup();
    regions
}
