//! Squad movement planning over region graphs.
//!
//! The world is a graph of regions; armies are single-type squads that hold
//! position or travel between regions, and every order takes game time to
//! finish. Because orders outlast one another, decision points are not
//! strict turns: whoever has idle squads decides, and simultaneous decision
//! points are serialized by alternation. Two planners search this space — a
//! Monte Carlo tree search built for durative actions ([`mcts`]) and a
//! negamax baseline that negates values only when the mover changes
//! ([`negamax`]) — over a deterministic pooled-attrition combat model
//! ([`combat`]). A match harness ([`harness`]) replays full games between
//! planners and scripted opponents and aggregates seeded tournaments.
//!
//! # Example
//!
//! ```
//! use squadplan_core::{
//!     negamax_plan, GameState, NegamaxConfig, Player, RegionGraph, Scenario, World,
//! };
//!
//! let graph = RegionGraph::new(3, vec![(0, 1, 10.0), (1, 2, 10.0)], None)?;
//! let scenario = Scenario::parse(
//!     "horizon 120\n\
//!      unittype grunt 50 10 10 0 2 100\n\
//!      squad 0 grunt 2 0\n\
//!      squad 1 grunt 1 2\n",
//! )?;
//! scenario.validate_against(&graph)?;
//!
//! let world = World::new(graph, scenario.catalog.clone());
//! let state = scenario.initial_state();
//! let (action, value) =
//!     negamax_plan(&world, &state, Player::P0, &NegamaxConfig::default())?;
//! assert_eq!(action.orders.len(), 1, "one order per idle squad");
//! assert!(value >= 100.0, "player 0 outnumbers the defender");
//! # Ok::<(), squadplan_core::Error>(())
//! ```

pub mod actions;
pub mod combat;
pub mod error;
pub mod graph;
pub mod harness;
pub mod mcts;
pub mod negamax;
pub mod report;
pub mod scenario;
pub mod scripted;
pub mod state;
pub mod units;
pub mod world;

pub use actions::{
    generate_joint_actions, random_joint_action, squad_move_options, ActionLimits, JointAction,
    OrderKind, SquadOrder,
};
pub use combat::{
    evaluate, evaluate_with, material_score, resolver_by_name, Attrition, CombatResolver,
    EvaluationKind,
};
pub use error::{Error, Result};
pub use graph::{RegionGraph, RegionId};
pub use harness::{
    run_match, run_tournament, DecisionRecord, GameRecord, MapSource, MatchConfig, MatchResult,
    PlannerSpec, TournamentOptions, TournamentResult, TournamentSummary,
};
pub use mcts::{mcts_plan, GameNode, MctsConfig, MctsSearch};
pub use negamax::{negamax_plan, NegamaxConfig};
pub use report::render_report;
pub use scenario::{Scenario, SquadSpec};
pub use scripted::{scripted_attack_policy, scripted_random_policy};
pub use state::{
    both_can_move, is_terminal, merge_idle_squads, player_to_move, terminal_reason, GameState,
    Order, Player, Squad, TerminalReason,
};
pub use units::{UnitType, UnitTypeCatalog, UnitTypeId};
pub use world::World;
