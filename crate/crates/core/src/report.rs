//! Renders tournament results as a structured text document.
//!
//! The format is line-oriented `key = value` blocks with stable field
//! names: one `[config]` block echoing everything needed to reproduce the
//! run, one `[[game]]` block per game in index order, a `[summary]` block,
//! and — for single-game runs — `[[decision]]` blocks tracing every
//! planner invocation.

use std::fmt::Write as _;

use crate::harness::{MapSource, MatchConfig, TournamentOptions, TournamentResult};
use crate::scenario::Scenario;
use crate::state::Player;

/// Renders the full report document. `scenario_name` is an informational
/// label (usually the scenario file path).
pub fn render_report(
    map: &MapSource,
    scenario_name: &str,
    scenario: &Scenario,
    template: &MatchConfig,
    options: &TournamentOptions,
    result: &TournamentResult,
) -> String {
    let mut out = String::new();
    let planner_a = &template.planners[0];
    let planner_b = &template.planners[1];

    out.push_str("[config]\n");
    kv(&mut out, "map", &quoted(&map.describe()));
    kv(&mut out, "scenario", &quoted(scenario_name));
    kv(&mut out, "scenario_horizon", &scenario.horizon.to_string());
    kv(&mut out, "planner_a", &quoted(planner_a.name()));
    kv(&mut out, "planner_a_params", &quoted(&planner_a.describe()));
    kv(&mut out, "planner_b", &quoted(planner_b.name()));
    kv(&mut out, "planner_b_params", &quoted(&planner_b.describe()));
    kv(&mut out, "games", &options.games.to_string());
    kv(&mut out, "base_seed", &options.base_seed.to_string());
    kv(&mut out, "replan_interval", &template.replan_interval.to_string());
    kv(&mut out, "game_limit", &template.game_limit.to_string());

    for game in &result.games {
        out.push_str("\n[[game]]\n");
        kv(&mut out, "index", &game.index.to_string());
        kv(&mut out, "seed", &game.seed.to_string());
        kv(&mut out, "sides_swapped", &game.swapped.to_string());
        kv(&mut out, "planner_p0", &quoted(&game.planners[0]));
        kv(&mut out, "planner_p1", &quoted(&game.planners[1]));
        match &game.outcome {
            Ok(r) => {
                kv(&mut out, "winner", &quoted(&winner_label(r.winner)));
                kv(&mut out, "reason", &quoted(r.reason.as_str()));
                kv(&mut out, "end_clock", &r.end_clock.to_string());
                kv(&mut out, "material_p0", &r.final_material[0].to_string());
                kv(&mut out, "material_p1", &r.final_material[1].to_string());
                kv(&mut out, "decisions", &r.decisions.len().to_string());
            }
            Err(e) => {
                kv(&mut out, "error", &quoted(&e.to_string()));
            }
        }
    }

    if options.games == 1 {
        if let Some(Ok(r)) = result.games.first().map(|g| &g.outcome) {
            for d in &r.decisions {
                out.push_str("\n[[decision]]\n");
                kv(&mut out, "clock", &d.clock.to_string());
                kv(&mut out, "player", &quoted(&d.player.to_string()));
                kv(&mut out, "action", &quoted(&d.action.to_string()));
                kv(&mut out, "wall_ms", &format!("{:.3}", d.wall_time.as_secs_f64() * 1e3));
            }
        }
    }

    let s = &result.summary;
    out.push_str("\n[summary]\n");
    kv(&mut out, "games", &s.games.to_string());
    kv(&mut out, "completed", &s.completed.to_string());
    kv(&mut out, "errors", &s.errors.to_string());
    kv(&mut out, "planner_a", &quoted(planner_a.name()));
    kv(&mut out, "planner_b", &quoted(planner_b.name()));
    kv(&mut out, "wins_a", &s.wins_a.to_string());
    kv(&mut out, "wins_b", &s.wins_b.to_string());
    kv(&mut out, "draws", &s.draws.to_string());
    kv(&mut out, "win_ratio_a", &format!("{:.4}", s.win_ratio_a));
    kv(&mut out, "win_ratio_b", &format!("{:.4}", s.win_ratio_b));
    kv(&mut out, "mean_end_clock", &format!("{:.3}", s.mean_end_clock));
    kv(&mut out, "mean_plan_ms_a", &format!("{:.3}", s.mean_plan_ms_a));
    kv(&mut out, "mean_plan_ms_b", &format!("{:.3}", s.mean_plan_ms_b));
    out
}

fn kv(out: &mut String, key: &str, value: &str) {
    let _ = writeln!(out, "{key} = {value}");
}

fn quoted(value: &str) -> String {
    format!("{value:?}")
}

/// Winner string used in game blocks, exposed for tests.
pub fn winner_label(winner: Option<Player>) -> String {
    match winner {
        Some(p) => p.to_string(),
        None => "draw".to_string(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::actions::ActionLimits;
    use crate::graph::RegionGraph;
    use crate::harness::{run_tournament, PlannerSpec};

    fn demo_inputs() -> (MapSource, Scenario, MatchConfig) {
        let graph = RegionGraph::new(
            4,
            vec![(0, 1, 10.0), (1, 2, 10.0), (2, 3, 10.0)],
            None,
        )
        .unwrap();
        let scenario = Scenario::parse(
            "horizon 400\nunittype grunt 50 10 10 0 2 100\nsquad 0 grunt 3 0\nsquad 1 grunt 1 2\n",
        )
        .unwrap();
        let template = MatchConfig {
            replan_interval: 10.0,
            game_limit: 400.0,
            seed: 0,
            planners: [
                PlannerSpec::ScriptedAttack,
                PlannerSpec::ScriptedRandom(ActionLimits::default()),
            ],
        };
        (MapSource::Fixed(graph), scenario, template)
    }

    #[test]
    fn report_contains_config_games_and_summary() {
        let (map, scenario, template) = demo_inputs();
        let options = TournamentOptions { games: 2, base_seed: 5, parallel: false };
        let result = run_tournament(&map, &scenario, &template, &options).unwrap();
        let report =
            render_report(&map, "demo.scenario", &scenario, &template, &options, &result);
        assert!(report.starts_with("[config]\n"));
        assert!(report.contains("planner_a = \"scripted-attack\""));
        assert!(report.contains("[[game]]"));
        assert!(report.contains("index = 1"));
        assert!(report.contains("[summary]"));
        assert!(report.contains("wins_a = "));
        assert!(
            !report.contains("[[decision]]"),
            "multi-game reports omit decision traces"
        );
    }

    #[test]
    fn single_game_reports_trace_decisions() {
        let (map, scenario, template) = demo_inputs();
        let options = TournamentOptions::default();
        let result = run_tournament(&map, &scenario, &template, &options).unwrap();
        let report = render_report(&map, "demo", &scenario, &template, &options, &result);
        assert!(report.contains("[[decision]]"));
        assert!(report.contains("action = "));
    }

    #[test]
    fn reports_are_reproducible() {
        let (map, scenario, template) = demo_inputs();
        let options = TournamentOptions { games: 3, base_seed: 2, parallel: false };
        let a = run_tournament(&map, &scenario, &template, &options).unwrap();
        let b = run_tournament(&map, &scenario, &template, &options).unwrap();
        let strip = |report: String| -> String {
            report
                .lines()
                .filter(|l| !l.starts_with("wall_ms") && !l.starts_with("mean_plan_ms"))
                .collect::<Vec<_>>()
                .join("\n")
        };
        let ra = strip(render_report(&map, "demo", &scenario, &template, &options, &a));
        let rb = strip(render_report(&map, "demo", &scenario, &template, &options, &b));
        assert_eq!(ra, rb, "reports identical up to wall-time lines");
    }

    #[test]
    fn winner_labels() {
        assert_eq!(winner_label(Some(Player::P0)), "p0");
        assert_eq!(winner_label(Some(Player::P1)), "p1");
        assert_eq!(winner_label(None), "draw");
    }
}
