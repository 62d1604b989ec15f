//! Full-game experiment harness: replanning match loop and seeded
//! tournaments.
//!
//! A match replays the planning cycle an agent would run live: whenever a
//! player has idle squads, that player's planner is invoked for a joint
//! action; the world then forwards to the next arrival. Hold orders last
//! one replan interval, so stationary squads come back for fresh orders on
//! that cadence while travelling squads replan on arrival. Matches end at
//! elimination or at the game limit, where the higher material score wins.
//!
//! Tournaments run seeded match series with side alternation (odd games
//! swap which planner plays player 0) so neither planner benefits from
//! moving first. Games are independent and may run in parallel; records
//! are ordered by game index, so the output is identical either way.

use std::time::{Duration, Instant};

use rayon::prelude::*;

use crate::actions::{ActionLimits, JointAction};
use crate::combat::material_score;
use crate::error::{Error, Result};
use crate::graph::RegionGraph;
use crate::mcts::{mcts_plan, MctsConfig};
use crate::negamax::{negamax_plan, NegamaxConfig};
use crate::scenario::Scenario;
use crate::scripted::{scripted_attack_policy, scripted_random_policy};
use crate::state::{
    both_can_move, player_to_move, terminal_reason, Player, TerminalReason,
};
use crate::world::World;

/// A planner a match side can play.
#[derive(Debug, Clone, PartialEq)]
pub enum PlannerSpec {
    Mctscd(MctsConfig),
    Negamax(NegamaxConfig),
    ScriptedAttack,
    ScriptedRandom(ActionLimits),
}

impl PlannerSpec {
    pub fn name(&self) -> &'static str {
        match self {
            PlannerSpec::Mctscd(_) => "mctscd",
            PlannerSpec::Negamax(_) => "negamax",
            PlannerSpec::ScriptedAttack => "scripted-attack",
            PlannerSpec::ScriptedRandom(_) => "scripted-random",
        }
    }

    /// Key-value echo of the planner's parameters for reports.
    pub fn describe(&self) -> String {
        match self {
            PlannerSpec::Mctscd(cfg) => format!(
                "iterations={} depth={} max_sim_time={} exploration_c={} deadline_ms={} \
                 action_cap={} flyer_k={}",
                cfg.iterations,
                cfg.depth,
                cfg.max_sim_time,
                cfg.exploration_c,
                cfg.deadline
                    .map_or_else(|| "none".into(), |d| d.as_millis().to_string()),
                cfg.limits.action_cap,
                cfg.limits.flyer_k,
            ),
            PlannerSpec::Negamax(cfg) => format!(
                "depth={} alpha_beta={} action_cap={} flyer_k={}",
                cfg.depth, cfg.alpha_beta, cfg.limits.action_cap, cfg.limits.flyer_k,
            ),
            PlannerSpec::ScriptedAttack => String::new(),
            PlannerSpec::ScriptedRandom(limits) => {
                format!("action_cap={} flyer_k={}", limits.action_cap, limits.flyer_k)
            }
        }
    }

    /// Produces `p`'s joint action for the current decision point. `seed`
    /// varies per decision so stochastic planners don't repeat themselves;
    /// configured planner seeds are mixed with it.
    pub fn plan(
        &self,
        world: &World,
        state: &crate::state::GameState,
        p: Player,
        seed: u64,
    ) -> Result<JointAction> {
        match self {
            PlannerSpec::Mctscd(cfg) => {
                let cfg = MctsConfig { rng_seed: mix(cfg.rng_seed, seed), ..*cfg };
                mcts_plan(world, state, p, cfg)
            }
            PlannerSpec::Negamax(cfg) => {
                let cfg = NegamaxConfig { rng_seed: mix(cfg.rng_seed, seed), ..*cfg };
                negamax_plan(world, state, p, &cfg).map(|(action, _)| action)
            }
            PlannerSpec::ScriptedAttack => scripted_attack_policy(world, state, p),
            PlannerSpec::ScriptedRandom(limits) => {
                scripted_random_policy(world, state, p, limits, seed)
            }
        }
    }
}

/// SplitMix64 finalizer; spreads (seed, counter) pairs into decorrelated
/// planner seeds.
fn mix(a: u64, b: u64) -> u64 {
    let mut z = a ^ b.wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

#[derive(Debug, Clone, PartialEq)]
pub struct MatchConfig {
    /// Seconds a hold order lasts, hence how often stationary squads
    /// replan.
    pub replan_interval: f64,
    /// Game-clock bound; overrides the scenario horizon for the match.
    pub game_limit: f64,
    /// Base seed for the match's per-decision planner seeds.
    pub seed: u64,
    /// Planners by side: `planners[0]` commands player 0.
    pub planners: [PlannerSpec; 2],
}

impl MatchConfig {
    fn validate(&self) -> Result<()> {
        if self.replan_interval <= 0.0 || !self.replan_interval.is_finite() {
            return Err(Error::InvalidConfig(
                "replan_interval must be positive".into(),
            ));
        }
        if self.game_limit < self.replan_interval || !self.game_limit.is_finite() {
            return Err(Error::InvalidConfig(
                "game_limit must be at least replan_interval".into(),
            ));
        }
        Ok(())
    }
}

/// One planner invocation in the match log.
#[derive(Debug, Clone)]
pub struct DecisionRecord {
    pub clock: f64,
    pub player: Player,
    pub action: JointAction,
    /// Wall time the planner took; informational, excluded from
    /// determinism comparisons.
    pub wall_time: Duration,
}

#[derive(Debug, Clone)]
pub struct MatchResult {
    /// `None` is a draw (mutual elimination or equal material at timeout).
    pub winner: Option<Player>,
    pub reason: TerminalReason,
    pub end_clock: f64,
    pub final_material: [f64; 2],
    pub decisions: Vec<DecisionRecord>,
}

impl MatchResult {
    /// Equality on game outcomes, ignoring wall times.
    pub fn same_outcome(&self, other: &MatchResult) -> bool {
        self.winner == other.winner
            && self.reason == other.reason
            && self.end_clock == other.end_clock
            && self.final_material == other.final_material
            && self.decisions.len() == other.decisions.len()
            && self
                .decisions
                .iter()
                .zip(&other.decisions)
                .all(|(a, b)| a.clock == b.clock && a.player == b.player && a.action == b.action)
    }
}

/// Plays one full game on `graph` starting from `scenario`.
///
/// Aside from planner wall times, the result is a pure function of the
/// inputs whenever both planners are deterministic for a given seed (all
/// built-in planners are, unless an mctscd deadline cuts iterations short).
pub fn run_match(
    graph: &RegionGraph,
    scenario: &Scenario,
    cfg: &MatchConfig,
) -> Result<MatchResult> {
    cfg.validate()?;
    scenario.validate_against(graph)?;
    let world = World::new(graph.clone(), scenario.catalog.clone())
        .with_hold_duration(cfg.replan_interval);
    let mut state = scenario.initial_state();
    state.horizon = cfg.game_limit;

    // Player 0 acts first at simultaneous decision points.
    let mut last_simult = Player::P1;
    let mut decisions: Vec<DecisionRecord> = Vec::new();
    let reason = loop {
        if let Some(reason) = terminal_reason(&state) {
            break reason;
        }
        match player_to_move(&state, last_simult) {
            None => {
                let seed = mix(cfg.seed, 0x5EED ^ decisions.len() as u64);
                state = world.forward(&state, seed)?;
            }
            Some(mover) => {
                if both_can_move(&state) {
                    last_simult = mover;
                }
                let seed = mix(cfg.seed, decisions.len() as u64);
                let planner = &cfg.planners[mover.index()];
                let started = Instant::now();
                let action = planner.plan(&world, &state, mover, seed)?;
                let wall_time = started.elapsed();
                decisions.push(DecisionRecord {
                    clock: state.clock,
                    player: mover,
                    action: action.clone(),
                    wall_time,
                });
                state = world.apply_joint_action(&state, mover, &action)?;
            }
        }
    };

    let final_material = [
        material_score(&state, world.catalog(), Player::P0),
        material_score(&state, world.catalog(), Player::P1),
    ];
    let winner = match reason {
        TerminalReason::Elimination => {
            let alive = |p: Player| state.squads_of(p).next().is_some();
            match (alive(Player::P0), alive(Player::P1)) {
                (true, false) => Some(Player::P0),
                (false, true) => Some(Player::P1),
                _ => None, // mutual elimination
            }
        }
        TerminalReason::Horizon => {
            if final_material[0] > final_material[1] {
                Some(Player::P0)
            } else if final_material[1] > final_material[0] {
                Some(Player::P1)
            } else {
                None
            }
        }
    };
    Ok(MatchResult {
        winner,
        reason,
        end_clock: state.clock,
        final_material,
        decisions,
    })
}

/// Where each tournament game's map comes from.
#[derive(Debug, Clone)]
pub enum MapSource {
    /// Every game on the same fixed map.
    Fixed(RegionGraph),
    /// A fresh map per game, seeded `seed + game index`.
    Generated { regions: usize, isolated: usize, seed: u64 },
}

impl MapSource {
    pub fn graph_for_game(&self, game: u64) -> Result<RegionGraph> {
        match self {
            MapSource::Fixed(graph) => Ok(graph.clone()),
            MapSource::Generated { regions, isolated, seed } => {
                RegionGraph::generate(seed.wrapping_add(game), *regions, *isolated)
            }
        }
    }

    pub fn describe(&self) -> String {
        match self {
            MapSource::Fixed(graph) => format!("fixed(regions={})", graph.region_count()),
            MapSource::Generated { regions, isolated, seed } => {
                format!("generated(regions={regions} isolated={isolated} seed={seed})")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TournamentOptions {
    pub games: u64,
    pub base_seed: u64,
    /// Run games across threads; records are index-ordered either way.
    pub parallel: bool,
}

impl Default for TournamentOptions {
    fn default() -> TournamentOptions {
        TournamentOptions { games: 1, base_seed: 0, parallel: false }
    }
}

/// One tournament game: seed, side assignment, and outcome. `planners`
/// holds the names actually commanding player 0 and player 1 this game.
#[derive(Debug)]
pub struct GameRecord {
    pub index: u64,
    pub seed: u64,
    pub swapped: bool,
    pub planners: [String; 2],
    pub outcome: Result<MatchResult>,
}

/// Aggregates attributed to the configured planners: "a" is the planner
/// listed for player 0 in the template config, "b" the other, regardless of
/// which side they played in a given game.
#[derive(Debug, Clone, PartialEq)]
pub struct TournamentSummary {
    pub games: u64,
    pub completed: u64,
    pub errors: u64,
    pub wins_a: u64,
    pub wins_b: u64,
    pub draws: u64,
    pub win_ratio_a: f64,
    pub win_ratio_b: f64,
    pub mean_end_clock: f64,
    pub mean_plan_ms_a: f64,
    pub mean_plan_ms_b: f64,
}

#[derive(Debug)]
pub struct TournamentResult {
    pub games: Vec<GameRecord>,
    pub summary: TournamentSummary,
}

/// Runs `options.games` seeded matches of `template.planners[0]` ("a")
/// against `template.planners[1]` ("b"), swapping sides on odd games.
pub fn run_tournament(
    map: &MapSource,
    scenario: &Scenario,
    template: &MatchConfig,
    options: &TournamentOptions,
) -> Result<TournamentResult> {
    if options.games == 0 {
        return Err(Error::InvalidConfig("games must be at least 1".into()));
    }
    template.validate()?;
    let play = |game: u64| -> GameRecord {
        let seed = options.base_seed.wrapping_add(game);
        let swapped = game % 2 == 1;
        let mut cfg = template.clone();
        cfg.seed = seed;
        if swapped {
            cfg.planners.swap(0, 1);
        }
        let planners =
            [cfg.planners[0].name().to_string(), cfg.planners[1].name().to_string()];
        let outcome = map
            .graph_for_game(game)
            .and_then(|graph| run_match(&graph, scenario, &cfg));
        GameRecord { index: game, seed, swapped, planners, outcome }
    };
    let mut games: Vec<GameRecord> = if options.parallel {
        (0..options.games).into_par_iter().map(play).collect()
    } else {
        (0..options.games).map(play).collect()
    };
    games.sort_by_key(|g| g.index);
    let summary = summarize(&games);
    Ok(TournamentResult { games, summary })
}

fn summarize(games: &[GameRecord]) -> TournamentSummary {
    let mut s = TournamentSummary {
        games: games.len() as u64,
        completed: 0,
        errors: 0,
        wins_a: 0,
        wins_b: 0,
        draws: 0,
        win_ratio_a: 0.0,
        win_ratio_b: 0.0,
        mean_end_clock: 0.0,
        mean_plan_ms_a: 0.0,
        mean_plan_ms_b: 0.0,
    };
    let mut clock_sum = 0.0;
    let mut plan_ms = [0.0f64; 2]; // [a, b]
    let mut plan_counts = [0u64; 2];
    for game in games {
        let result = match &game.outcome {
            Ok(result) => result,
            Err(_) => {
                s.errors += 1;
                continue;
            }
        };
        s.completed += 1;
        clock_sum += result.end_clock;
        // Side of planner "a" this game.
        let a_side = if game.swapped { Player::P1 } else { Player::P0 };
        match result.winner {
            Some(p) if p == a_side => s.wins_a += 1,
            Some(_) => s.wins_b += 1,
            None => s.draws += 1,
        }
        for decision in &result.decisions {
            let slot = usize::from(decision.player != a_side);
            plan_ms[slot] += decision.wall_time.as_secs_f64() * 1e3;
            plan_counts[slot] += 1;
        }
    }
    if s.completed > 0 {
        s.win_ratio_a = s.wins_a as f64 / s.completed as f64;
        s.win_ratio_b = s.wins_b as f64 / s.completed as f64;
        s.mean_end_clock = clock_sum / s.completed as f64;
    }
    for (slot, target) in [&mut s.mean_plan_ms_a, &mut s.mean_plan_ms_b]
        .into_iter()
        .enumerate()
    {
        if plan_counts[slot] > 0 {
            *target = plan_ms[slot] / plan_counts[slot] as f64;
        }
    }
    s
}
