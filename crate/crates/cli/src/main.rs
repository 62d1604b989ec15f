//! Tournament runner: pits two planners against each other on a map and
//! scenario, then writes a structured result report.

use std::fs;
use std::path::PathBuf;
use std::time::Duration;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};

use squadplan_core::{
    render_report, run_tournament, ActionLimits, MapSource, MatchConfig, MctsConfig,
    NegamaxConfig, PlannerSpec, RegionGraph, Scenario, TournamentOptions,
};

#[derive(Parser)]
#[command(name = "squadplan", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a seeded series of games between two planners.
    Run(RunArgs),
}

#[derive(Args)]
struct RunArgs {
    /// Map file; mutually exclusive with --gen-regions.
    #[arg(long, conflicts_with = "gen_regions")]
    map: Option<PathBuf>,
    /// Generate a fresh map per game with this many regions.
    #[arg(long)]
    gen_regions: Option<usize>,
    /// Regions left without ground connections on generated maps.
    #[arg(long, default_value_t = 0)]
    gen_isolated: usize,
    /// Base seed for generated maps (game index is added per game).
    #[arg(long, default_value_t = 0)]
    gen_seed: u64,
    /// Scenario file: unit types and starting squads.
    #[arg(long)]
    scenario: PathBuf,
    /// Planner for player 0: mctscd | negamax | scripted-attack | scripted-random.
    #[arg(long, default_value = "mctscd")]
    p0: String,
    /// Planner for player 1 (same choices as --p0).
    #[arg(long, default_value = "scripted-attack")]
    p1: String,
    /// Games to play; sides swap on odd game indices.
    #[arg(long, default_value_t = 1)]
    games: u64,
    /// Base seed; game g runs with seed + g.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Seconds a hold order lasts before its squad replans.
    #[arg(long, default_value_t = 10.0)]
    replan_interval: f64,
    /// Game-clock limit; higher material wins at timeout.
    #[arg(long, default_value_t = 600.0)]
    game_limit: f64,
    #[arg(long, default_value_t = 10_000)]
    mcts_iterations: u64,
    #[arg(long, default_value_t = 10)]
    mcts_depth: usize,
    /// Game-clock seconds each rollout may simulate.
    #[arg(long, default_value_t = 60.0)]
    max_sim_time: f64,
    #[arg(long, default_value_t = 1.0)]
    exploration_c: f64,
    /// Wall-clock budget per mctscd decision, in milliseconds.
    #[arg(long)]
    deadline_ms: Option<u64>,
    #[arg(long, default_value_t = 2)]
    negamax_depth: usize,
    /// Maximum joint actions generated per decision point.
    #[arg(long, default_value_t = 128)]
    action_cap: usize,
    /// Move options a flyer keeps (nearest regions by air distance).
    #[arg(long, default_value_t = 8)]
    flyer_k: usize,
    /// Report destination; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Play games across threads (per-game results are unaffected).
    #[arg(long)]
    parallel: bool,
}

fn main() -> Result<()> {
    let cli = Cli::parse();
    match cli.command {
        Command::Run(args) => run(args),
    }
}

fn run(args: RunArgs) -> Result<()> {
    let limits = ActionLimits { action_cap: args.action_cap, flyer_k: args.flyer_k };
    let map = match (&args.map, args.gen_regions) {
        (Some(path), None) => {
            let text = fs::read_to_string(path)
                .with_context(|| format!("reading map {}", path.display()))?;
            MapSource::Fixed(
                RegionGraph::parse(&text)
                    .with_context(|| format!("parsing map {}", path.display()))?,
            )
        }
        (None, Some(regions)) => MapSource::Generated {
            regions,
            isolated: args.gen_isolated,
            seed: args.gen_seed,
        },
        (None, None) => bail!("provide a map with --map FILE or --gen-regions N"),
        (Some(_), Some(_)) => unreachable!("clap rejects --map with --gen-regions"),
    };

    let scenario_text = fs::read_to_string(&args.scenario)
        .with_context(|| format!("reading scenario {}", args.scenario.display()))?;
    let scenario = Scenario::parse(&scenario_text)
        .with_context(|| format!("parsing scenario {}", args.scenario.display()))?;

    let planner = |name: &str| -> Result<PlannerSpec> {
        Ok(match name {
            "mctscd" => PlannerSpec::Mctscd(MctsConfig {
                depth: args.mcts_depth,
                iterations: args.mcts_iterations,
                max_sim_time: args.max_sim_time,
                exploration_c: args.exploration_c,
                deadline: args.deadline_ms.map(Duration::from_millis),
                rng_seed: 0,
                limits,
            }),
            "negamax" => PlannerSpec::Negamax(NegamaxConfig {
                depth: args.negamax_depth,
                limits,
                rng_seed: 0,
                alpha_beta: false,
            }),
            "scripted-attack" => PlannerSpec::ScriptedAttack,
            "scripted-random" => PlannerSpec::ScriptedRandom(limits),
            other => bail!(
                "unknown planner {other:?}; expected mctscd, negamax, \
                 scripted-attack, or scripted-random"
            ),
        })
    };

    let template = MatchConfig {
        replan_interval: args.replan_interval,
        game_limit: args.game_limit,
        seed: args.seed,
        planners: [planner(&args.p0)?, planner(&args.p1)?],
    };
    let options = TournamentOptions {
        games: args.games,
        base_seed: args.seed,
        parallel: args.parallel,
    };

    let result = run_tournament(&map, &scenario, &template, &options)?;
    let report = render_report(
        &map,
        &args.scenario.display().to_string(),
        &scenario,
        &template,
        &options,
        &result,
    );
    match &args.out {
        Some(path) => fs::write(path, &report)
            .with_context(|| format!("writing report {}", path.display()))?,
        None => print!("{report}"),
    }
    Ok(())
}
