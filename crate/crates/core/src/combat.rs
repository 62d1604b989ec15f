//! Deterministic combat resolution and material evaluation.
//!
//! The default resolver plays fixed one-second rounds of pooled attrition:
//! each side's total applicable damage for the round (ground dps against
//! non-flyers, air dps against flyers) is poured into the opposing squads in
//! ascending `pool_hp` order, capped per squad at its remaining pool. Damage
//! a class cannot spend on living targets of that class is wasted, never
//! redirected. Both sides deal damage simultaneously from the round-start
//! composition; deaths are removed at round end and counts re-derived as
//! `ceil(pool_hp / max_hp)`.

use std::sync::Arc;

use crate::state::{GameState, Player, Squad};
use crate::units::UnitTypeCatalog;

/// Resolves one engagement. Implementations must be deterministic given
/// `rng_seed`; the seed is unused by the default resolver.
///
/// Preconditions: all squads share one region, both owners are present, and
/// every squad is idle.
pub trait CombatResolver: Send + Sync {
    fn resolve(&self, combatants: &[Squad], catalog: &UnitTypeCatalog, rng_seed: u64)
        -> Vec<Squad>;

    fn name(&self) -> &'static str;
}

/// Looks up a resolver by its configuration name.
pub fn resolver_by_name(name: &str) -> Option<Arc<dyn CombatResolver>> {
    match name {
        "attrition" => Some(Arc::new(Attrition::default())),
        _ => None,
    }
}

#[derive(Debug, Clone)]
pub struct Attrition {
    /// Engagements stop after this many rounds even if both sides survive.
    pub max_rounds: u32,
}

impl Default for Attrition {
    fn default() -> Self {
        Attrition { max_rounds: 600 }
    }
}

impl CombatResolver for Attrition {
    fn resolve(
        &self,
        combatants: &[Squad],
        catalog: &UnitTypeCatalog,
        _rng_seed: u64,
    ) -> Vec<Squad> {
        let mut squads: Vec<Squad> = combatants.to_vec();
        for _ in 0..self.max_rounds {
            let side_alive = |p: Player| squads.iter().any(|s| s.owner == p);
            if !side_alive(Player::P0) || !side_alive(Player::P1) {
                break;
            }
            if !can_damage(&squads, catalog, Player::P0)
                && !can_damage(&squads, catalog, Player::P1)
            {
                break;
            }

            // Damage budgets and target order are fixed at round start;
            // both sides strike simultaneously.
            let mut budgets = [[0.0f64; 2]; 2]; // [attacker][0 = vs ground, 1 = vs air]
            for s in &squads {
                let ty = catalog.get(s.unit_type);
                budgets[s.owner.index()][0] += s.count as f64 * ty.dps_ground;
                budgets[s.owner.index()][1] += s.count as f64 * ty.dps_air;
            }
            let mut order: Vec<usize> = (0..squads.len()).collect();
            order.sort_by(|&i, &j| {
                let (a, b) = (&squads[i], &squads[j]);
                a.pool_hp
                    .partial_cmp(&b.pool_hp)
                    .unwrap()
                    .then(a.owner.index().cmp(&b.owner.index()))
                    .then(a.unit_type.cmp(&b.unit_type))
                    .then(a.count.cmp(&b.count))
            });

            let mut damage = vec![0.0f64; squads.len()];
            for &i in &order {
                let target = &squads[i];
                let attacker = target.owner.opponent().index();
                let class = catalog.get(target.unit_type).flyer as usize;
                let budget = &mut budgets[attacker][class];
                let hit = budget.min(target.pool_hp);
                damage[i] = hit;
                *budget -= hit;
            }

            for (s, hit) in squads.iter_mut().zip(&damage) {
                s.pool_hp -= hit;
            }
            squads.retain(|s| s.pool_hp > 0.0);
            for s in &mut squads {
                let max_hp = catalog.get(s.unit_type).max_hp;
                s.count = (s.pool_hp / max_hp).ceil() as u32;
            }
        }
        // Canonical survivor order so the result is independent of the
        // order combatants were listed in.
        squads.sort_by(|a, b| {
            a.owner
                .index()
                .cmp(&b.owner.index())
                .then(a.unit_type.cmp(&b.unit_type))
                .then(a.count.cmp(&b.count))
                .then(a.pool_hp.partial_cmp(&b.pool_hp).unwrap())
        });
        squads
    }

    fn name(&self) -> &'static str {
        "attrition"
    }
}

fn can_damage(squads: &[Squad], catalog: &UnitTypeCatalog, attacker: Player) -> bool {
    let (mut vs_ground, mut vs_air) = (0.0, 0.0);
    for s in squads.iter().filter(|s| s.owner == attacker) {
        let ty = catalog.get(s.unit_type);
        vs_ground += ty.dps_ground;
        vs_air += ty.dps_air;
    }
    squads
        .iter()
        .filter(|s| s.owner == attacker.opponent())
        .any(|s| {
            if catalog.get(s.unit_type).flyer {
                vs_air > 0.0
            } else {
                vs_ground > 0.0
            }
        })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum EvaluationKind {
    /// Sum of squad count times the type's destroy score.
    #[default]
    DestroyScore,
    /// Destroy score weighted by remaining pool health.
    HpWeighted,
}

/// Total material of `player`'s squads under the destroy-score measure.
pub fn material_score(state: &GameState, catalog: &UnitTypeCatalog, player: Player) -> f64 {
    // An empty IEEE sum is -0.0; the leading +0.0 keeps eliminated sides
    // reporting a plain 0 instead of "-0".
    0.0 + state
        .squads_of(player)
        .map(|s| s.count as f64 * catalog.get(s.unit_type).destroy_score)
        .sum::<f64>()
}

/// Material balance from `pov`'s side: own material minus the opponent's.
/// Antisymmetric: `evaluate(s, p) == -evaluate(s, p.opponent())`.
pub fn evaluate(state: &GameState, catalog: &UnitTypeCatalog, pov: Player) -> f64 {
    evaluate_with(EvaluationKind::DestroyScore, state, catalog, pov)
}

pub fn evaluate_with(
    kind: EvaluationKind,
    state: &GameState,
    catalog: &UnitTypeCatalog,
    pov: Player,
) -> f64 {
    let side = |player: Player| -> f64 {
        state
            .squads_of(player)
            .map(|s| {
                let ty = catalog.get(s.unit_type);
                match kind {
                    EvaluationKind::DestroyScore => s.count as f64 * ty.destroy_score,
                    EvaluationKind::HpWeighted => ty.destroy_score * s.pool_hp / ty.max_hp,
                }
            })
            .sum()
    };
    side(pov) - side(pov.opponent())
}
