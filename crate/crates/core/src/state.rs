//! Game state: squads with durative orders on a shared clock.
//!
//! Decision points are serialized: at any instant at most one player issues
//! a joint action. When both players have idle squads at the same instant,
//! `player_to_move` alternates who acts first using a `last_simult` marker
//! carried by the caller (the player who acted first at the previous
//! simultaneous instant yields to the other).

use std::collections::BTreeMap;
use std::fmt;

use crate::graph::RegionId;
use crate::units::UnitTypeId;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Player {
    P0,
    P1,
}

impl Player {
    pub fn opponent(self) -> Player {
        match self {
            Player::P0 => Player::P1,
            Player::P1 => Player::P0,
        }
    }

    pub fn index(self) -> usize {
        match self {
            Player::P0 => 0,
            Player::P1 => 1,
        }
    }

    pub fn from_index(index: usize) -> Option<Player> {
        match index {
            0 => Some(Player::P0),
            1 => Some(Player::P1),
            _ => None,
        }
    }
}

impl fmt::Display for Player {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "p{}", self.index())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Order {
    /// Awaiting a new order; the squad sits in its region.
    Idle,
    /// Executing a move that completes at `arrival`. A hold is encoded as
    /// a move targeting the squad's own region.
    Moving { target: RegionId, arrival: f64 },
}

impl Order {
    pub fn is_idle(&self) -> bool {
        matches!(self, Order::Idle)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Squad {
    pub owner: Player,
    pub unit_type: UnitTypeId,
    pub count: u32,
    /// Pooled hit points of the whole squad; `count` is derived as
    /// `ceil(pool_hp / max_hp)` after damage.
    pub pool_hp: f64,
    pub region: RegionId,
    pub order: Order,
}

impl Squad {
    /// A squad at full strength, idle in `region`.
    pub fn at_full_health(
        owner: Player,
        unit_type: UnitTypeId,
        count: u32,
        max_hp: f64,
        region: RegionId,
    ) -> Squad {
        Squad {
            owner,
            unit_type,
            count,
            pool_hp: count as f64 * max_hp,
            region,
            order: Order::Idle,
        }
    }

    /// True when the squad is physically present in its region: idle, or
    /// holding (moving to its own region). In-flight squads are absent
    /// until arrival.
    pub fn is_stationed(&self) -> bool {
        match self.order {
            Order::Idle => true,
            Order::Moving { target, .. } => target == self.region,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GameState {
    pub clock: f64,
    /// Absolute time at which the state becomes terminal.
    pub horizon: f64,
    pub squads: Vec<Squad>,
}

impl GameState {
    pub fn new(clock: f64, horizon: f64, squads: Vec<Squad>) -> GameState {
        GameState { clock, horizon, squads }
    }

    pub fn squads_of(&self, player: Player) -> impl Iterator<Item = &Squad> {
        self.squads.iter().filter(move |s| s.owner == player)
    }

    /// Indices of `player`'s idle squads, in squad-list order.
    pub fn idle_squads(&self, player: Player) -> Vec<usize> {
        self.squads
            .iter()
            .enumerate()
            .filter(|(_, s)| s.owner == player && s.order.is_idle())
            .map(|(i, _)| i)
            .collect()
    }

    pub fn has_idle(&self, player: Player) -> bool {
        self.squads
            .iter()
            .any(|s| s.owner == player && s.order.is_idle())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TerminalReason {
    /// A player has no squads left.
    Elimination,
    /// The clock reached the horizon.
    Horizon,
}

impl TerminalReason {
    pub fn as_str(self) -> &'static str {
        match self {
            TerminalReason::Elimination => "elimination",
            TerminalReason::Horizon => "horizon",
        }
    }
}

pub fn terminal_reason(state: &GameState) -> Option<TerminalReason> {
    let p0_alive = state.squads.iter().any(|s| s.owner == Player::P0);
    let p1_alive = state.squads.iter().any(|s| s.owner == Player::P1);
    if !p0_alive || !p1_alive {
        Some(TerminalReason::Elimination)
    } else if state.clock >= state.horizon {
        Some(TerminalReason::Horizon)
    } else {
        None
    }
}

pub fn is_terminal(state: &GameState) -> bool {
    terminal_reason(state).is_some()
}

/// True when both players have at least one idle squad right now.
pub fn both_can_move(state: &GameState) -> bool {
    state.has_idle(Player::P0) && state.has_idle(Player::P1)
}

/// The player who issues the next joint action. With one side idle it is
/// that side; with both sides idle, the player other than `last_simult`
/// (who acted first last time) moves first.
pub fn player_to_move(state: &GameState, last_simult: Player) -> Option<Player> {
    match (state.has_idle(Player::P0), state.has_idle(Player::P1)) {
        (true, true) => Some(last_simult.opponent()),
        (true, false) => Some(Player::P0),
        (false, true) => Some(Player::P1),
        (false, false) => None,
    }
}

/// Collapses idle squads that share owner, unit type, and region into one
/// squad (counts and pools add). Moving squads are never merged. Squad
/// order is preserved at the first occurrence of each merged group.
pub fn merge_idle_squads(state: &GameState) -> GameState {
    let mut merged = state.clone();
    merge_idle_in_place(&mut merged.squads);
    merged
}

pub(crate) fn merge_idle_in_place(squads: &mut Vec<Squad>) {
    let mut first_at: BTreeMap<(usize, UnitTypeId, RegionId), usize> = BTreeMap::new();
    let mut keep = Vec::with_capacity(squads.len());
    for squad in squads.drain(..) {
        if !squad.order.is_idle() {
            keep.push(squad);
            continue;
        }
        let key = (squad.owner.index(), squad.unit_type, squad.region);
        match first_at.get(&key) {
            Some(&i) => {
                let target: &mut Squad = &mut keep[i];
                target.count += squad.count;
                target.pool_hp += squad.pool_hp;
            }
            None => {
                first_at.insert(key, keep.len());
                keep.push(squad);
            }
        }
    }
    *squads = keep;
}
