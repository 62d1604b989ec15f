//! Monte Carlo tree search over serialized durative decision points.
//!
//! Simultaneous decision points are serialized: when both players have idle
//! squads, the player who did NOT act at the previous simultaneous point
//! moves, tracked by a rolling `last_simult` marker that tree descent and
//! rollouts both maintain. Because orders take unequal amounts of game
//! time, the same player may act at several consecutive tree levels.
//!
//! Rewards are the material evaluation of the rollout's final state from
//! player 0's point of view, divided by the total destroy-score mass of the
//! root state so they land in [-1, 1]. Selection converts that canonical
//! reward into the acting player's perspective on the fly. The search is an
//! anytime algorithm: it stops at the iteration budget, a wall-clock
//! deadline, or an external cancellation flag, and always returns a legal
//! action.

use std::sync::atomic::{AtomicBool, Ordering};
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::actions::{generate_joint_actions, random_joint_action, ActionLimits, JointAction};
use crate::combat::material_score;
use crate::error::{Error, Result};
use crate::state::{
    both_can_move, is_terminal, player_to_move, terminal_reason, GameState, Player,
};
use crate::world::World;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MctsConfig {
    /// Tree depth at which nodes stop being expanded and are evaluated by
    /// rollout only.
    pub depth: usize,
    /// Iteration budget: one selection + rollout + backup per iteration.
    pub iterations: u64,
    /// Game-clock seconds a rollout may advance past its start state.
    pub max_sim_time: f64,
    /// Exploration constant of the tree policy's upper confidence bound.
    pub exploration_c: f64,
    /// Optional wall-clock budget. The search stops between iterations (so
    /// at least one iteration always completes) and truncates an in-flight
    /// rollout rather than overrunning; a small slice of the budget (a
    /// tenth, at most 5 ms) is reserved so the call returns within — not
    /// merely near — the deadline.
    pub deadline: Option<Duration>,
    pub rng_seed: u64,
    pub limits: ActionLimits,
}

impl Default for MctsConfig {
    fn default() -> MctsConfig {
        MctsConfig {
            depth: 10,
            iterations: 10_000,
            max_sim_time: 60.0,
            exploration_c: 1.0,
            deadline: None,
            rng_seed: 0,
            limits: ActionLimits::default(),
        }
    }
}

impl MctsConfig {
    fn validate(&self) -> Result<()> {
        let bad = |msg: &str| Err(Error::InvalidConfig(msg.into()));
        if self.depth == 0 {
            return bad("mcts depth must be at least 1");
        }
        if self.iterations == 0 {
            return bad("mcts iterations must be at least 1");
        }
        if self.max_sim_time < 0.0 || !self.max_sim_time.is_finite() {
            return bad("max_sim_time must be non-negative and finite");
        }
        if self.exploration_c < 0.0 || !self.exploration_c.is_finite() {
            return bad("exploration_c must be non-negative and finite");
        }
        Ok(())
    }
}

/// One search-tree node. Fields are public for tree inspection; the search
/// owns and mutates them.
#[derive(Debug, Clone)]
pub struct GameNode {
    pub parent: Option<usize>,
    /// Joint action that produced this node; `None` at the root.
    pub action: Option<JointAction>,
    /// Sum of backed-up rewards, stored from player 0's perspective.
    pub total_evaluation: f64,
    pub total_visits: u64,
    /// Rollouts launched from this node itself (rather than a descendant);
    /// `total_visits == own_rollouts + Σ children's total_visits`.
    pub own_rollouts: u64,
    pub game_state: GameState,
    /// Uniform prior over the parent's generated actions: 1 / sibling
    /// count. The root gets 1. Exposed for opponent models; the default
    /// tree policy does not consume it.
    pub actions_probability: f64,
    /// Player that acted at the most recent simultaneous decision point on
    /// the path to this node.
    pub last_simult: Player,
    /// Mover at this node; `None` when the state is terminal.
    pub player: Option<Player>,
    pub depth: usize,
    pub children: Vec<usize>,
    untried: Vec<JointAction>,
}

/// An in-progress search; create once per decision, [`MctsSearch::run`] to
/// completion (or cancellation), then inspect the tree if desired.
pub struct MctsSearch<'a> {
    world: &'a World,
    cfg: MctsConfig,
    nodes: Vec<GameNode>,
    rng: ChaCha8Rng,
    /// Total destroy-score mass of the root state; rewards divide by this.
    reward_scale: f64,
    iterations_completed: u64,
    /// Wall-clock instant past which the current rollout stops early; set
    /// by [`MctsSearch::run`] when the config carries a deadline.
    cutoff: Option<Instant>,
}

impl<'a> MctsSearch<'a> {
    pub fn new(
        world: &'a World,
        root: GameState,
        for_player: Player,
        cfg: MctsConfig,
    ) -> Result<MctsSearch<'a>> {
        cfg.validate()?;
        if let Some(reason) = terminal_reason(&root) {
            return Err(Error::Terminal(reason.as_str()));
        }
        if !root.has_idle(for_player) {
            return Err(Error::NoIdleSquads(for_player));
        }
        let mass = material_score(&root, world.catalog(), Player::P0)
            + material_score(&root, world.catalog(), Player::P1);
        let mut search = MctsSearch {
            world,
            cfg,
            nodes: Vec::new(),
            rng: ChaCha8Rng::seed_from_u64(cfg.rng_seed),
            reward_scale: mass,
            iterations_completed: 0,
            cutoff: None,
        };
        // Seeding last_simult with the opponent makes for_player the mover
        // when both sides could act.
        search.create_node(None, None, root, for_player.opponent(), 1.0)?;
        debug_assert_eq!(search.nodes[0].player, Some(for_player));
        Ok(search)
    }

    /// Runs until the iteration budget, the configured deadline, or
    /// `cancel` (checked between iterations) stops the search, then returns
    /// the most-visited root action. Ties prefer the higher accumulated
    /// evaluation from the root player's perspective, then creation order.
    pub fn run(&mut self, cancel: Option<&AtomicBool>) -> Result<JointAction> {
        let started = Instant::now();
        self.cutoff = self.cfg.deadline.map(|deadline| {
            let reserve = (deadline / 10).min(Duration::from_millis(5));
            started + deadline.saturating_sub(reserve)
        });
        while self.iterations_completed < self.cfg.iterations {
            if self.iterations_completed > 0 {
                if self.cutoff.is_some_and(|cutoff| Instant::now() >= cutoff) {
                    break;
                }
                if cancel.is_some_and(|flag| flag.load(Ordering::Relaxed)) {
                    break;
                }
            }
            let leaf = self.tree_policy()?;
            let reward = self.default_policy(leaf)?;
            self.backup(leaf, reward);
            self.iterations_completed += 1;
        }
        Ok(self.best_root_action())
    }

    pub fn nodes(&self) -> &[GameNode] {
        &self.nodes
    }

    pub fn iterations_completed(&self) -> u64 {
        self.iterations_completed
    }

    /// Descends by upper-confidence selection, expanding one untried action
    /// at the first opportunity; returns the index the rollout starts from.
    fn tree_policy(&mut self) -> Result<usize> {
        let mut index = 0;
        loop {
            let node = &self.nodes[index];
            if node.player.is_none() || node.depth >= self.cfg.depth {
                return Ok(index); // terminal or depth-capped leaf
            }
            if !node.untried.is_empty() {
                return self.expand(index);
            }
            index = self.select_child(index);
        }
    }

    /// Upper-confidence argmax among `index`'s children, scored from the
    /// perspective of the player acting at `index`. Unvisited children
    /// (possible only transiently) take absolute priority.
    fn select_child(&self, index: usize) -> usize {
        let node = &self.nodes[index];
        let mover = node.player.expect("selection only happens at decision nodes");
        let sign = perspective_sign(mover);
        let ln_parent = (node.total_visits.max(1) as f64).ln();
        let mut best = node.children[0];
        let mut best_score = f64::NEG_INFINITY;
        for &child_index in &node.children {
            let child = &self.nodes[child_index];
            if child.total_visits == 0 {
                return child_index;
            }
            let mean = sign * child.total_evaluation / child.total_visits as f64;
            let explore = (ln_parent / child.total_visits as f64).sqrt();
            let score = mean + self.cfg.exploration_c * explore;
            if score > best_score {
                best_score = score;
                best = child_index;
            }
        }
        best
    }

    /// Expands one untried action of `index` (seeded-uniform pick) into a
    /// new child node and returns the child's index.
    fn expand(&mut self, index: usize) -> Result<usize> {
        let pick = self.rng.gen_range(0..self.nodes[index].untried.len());
        let action = self.nodes[index].untried.swap_remove(pick);
        let node = &self.nodes[index];
        let mover = node.player.expect("expandable nodes have a mover");
        let prior = 1.0 / (node.children.len() + node.untried.len() + 1) as f64;
        let ls = node.last_simult;
        let issued = self.world.apply_joint_action(&node.game_state, mover, &action)?;
        let forward_seed = self.rng.gen::<u64>();
        let state = self.world.advance_to_decision(issued, forward_seed)?;
        self.create_node(Some(index), Some(action), state, ls, prior)
    }

    /// Appends a node, deriving mover and rolling `last_simult` from the
    /// state, and generating its untried actions unless it is a leaf.
    fn create_node(
        &mut self,
        parent: Option<usize>,
        action: Option<JointAction>,
        state: GameState,
        inherited_ls: Player,
        actions_probability: f64,
    ) -> Result<usize> {
        let depth = parent.map_or(0, |p| self.nodes[p].depth + 1);
        let player = player_to_move(&state, inherited_ls);
        let last_simult = match player {
            Some(p) if both_can_move(&state) => p,
            _ => inherited_ls,
        };
        let untried = match player {
            Some(p) if depth < self.cfg.depth => {
                let seed = self.rng.gen::<u64>();
                generate_joint_actions(self.world, &state, p, &self.cfg.limits, seed)?
            }
            _ => Vec::new(),
        };
        let index = self.nodes.len();
        self.nodes.push(GameNode {
            parent,
            action,
            total_evaluation: 0.0,
            total_visits: 0,
            own_rollouts: 0,
            game_state: state,
            actions_probability,
            last_simult,
            player,
            depth,
            children: Vec::new(),
            untried,
        });
        if let Some(parent_index) = parent {
            self.nodes[parent_index].children.push(index);
        }
        Ok(index)
    }

    /// Plays uniform-random joint actions from `index`'s state until the
    /// game ends or the rollout clock budget runs out, then scores the
    /// final state from player 0's perspective (scaled by the root mass).
    fn default_policy(&mut self, index: usize) -> Result<f64> {
        let node = &self.nodes[index];
        let mut state = node.game_state.clone();
        let start_clock = state.clock;
        // The stored last_simult already incorporates this node's own turn;
        // rewind it one step so the first rollout mover is the node's
        // player, exactly as tree expansion would serialize this state.
        let mut ls = match node.player {
            Some(p) if both_can_move(&state) => p.opponent(),
            _ => node.last_simult,
        };
        loop {
            if is_terminal(&state) || state.clock - start_clock >= self.cfg.max_sim_time {
                break;
            }
            // A blown deadline truncates this rollout; the evaluation of
            // the state reached so far still makes a usable sample.
            if self.cutoff.is_some_and(|cutoff| Instant::now() >= cutoff) {
                break;
            }
            match player_to_move(&state, ls) {
                None => {
                    let seed = self.rng.gen::<u64>();
                    state = self.world.forward(&state, seed)?;
                }
                Some(mover) => {
                    if both_can_move(&state) {
                        ls = mover;
                    }
                    let action = random_joint_action(
                        self.world,
                        &state,
                        mover,
                        &self.cfg.limits,
                        &mut self.rng,
                    )?;
                    state = self.world.apply_joint_action(&state, mover, &action)?;
                }
            }
        }
        Ok(self.world.evaluate(&state, Player::P0) / self.reward_scale)
    }

    /// Adds one visit and the canonical reward to every node from `index`
    /// up to the root.
    fn backup(&mut self, index: usize, reward: f64) {
        self.nodes[index].own_rollouts += 1;
        let mut cursor = Some(index);
        while let Some(i) = cursor {
            self.nodes[i].total_visits += 1;
            self.nodes[i].total_evaluation += reward;
            cursor = self.nodes[i].parent;
        }
    }

    fn best_root_action(&self) -> JointAction {
        let sign = perspective_sign(self.nodes[0].player.expect("root has a mover"));
        let mut best: Option<usize> = None;
        for &child_index in &self.nodes[0].children {
            let better = match best {
                None => true,
                Some(current) => {
                    let child = &self.nodes[child_index];
                    let incumbent = &self.nodes[current];
                    child.total_visits > incumbent.total_visits
                        || (child.total_visits == incumbent.total_visits
                            && sign * child.total_evaluation
                                > sign * incumbent.total_evaluation)
                }
            };
            if better {
                best = Some(child_index);
            }
        }
        let best = best.expect("run always expands at least one root child");
        self.nodes[best].action.clone().expect("non-root nodes carry actions")
    }
}

/// Rewards are stored from player 0's perspective; player 1 maximizes
/// their negation.
fn perspective_sign(player: Player) -> f64 {
    match player {
        Player::P0 => 1.0,
        Player::P1 => -1.0,
    }
}

/// One-shot convenience: build a search, run it to its budget, return the
/// chosen action.
pub fn mcts_plan(
    world: &World,
    state: &GameState,
    for_player: Player,
    cfg: MctsConfig,
) -> Result<JointAction> {
    MctsSearch::new(world, state.clone(), for_player, cfg)?.run(None)
}
