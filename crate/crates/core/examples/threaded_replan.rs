//! Anytime planning off the main thread.
//!
//! A live agent cannot block while the search thinks, so this example runs
//! the tree search on a worker thread, lets the "game loop" keep going, and
//! then flips a cancellation flag to collect the best action found so far.
//!
//! ```text
//! cargo run --example threaded_replan
//! ```

use std::sync::atomic::{AtomicBool, Ordering};
use std::sync::Arc;
use std::thread;
use std::time::{Duration, Instant};

use squadplan_core::{MctsConfig, MctsSearch, Player, RegionGraph, Scenario, World};

fn main() -> squadplan_core::Result<()> {
    let graph = RegionGraph::generate(11, 12, 2)?;
    let scenario = Scenario::parse(
        "horizon 600\n\
         unittype grunt 50 10 10 0 2 100\n\
         unittype wasp 30 5 5 1 3 120\n\
         squad 0 grunt 4 0\n\
         squad 0 wasp 2 1\n\
         squad 1 grunt 4 5\n\
         squad 1 wasp 2 6\n",
    )?;
    scenario.validate_against(&graph)?;
    let world = World::new(graph, scenario.catalog.clone());
    let state = scenario.initial_state();

    let cancel = Arc::new(AtomicBool::new(false));
    let worker = {
        let cancel = Arc::clone(&cancel);
        let cfg = MctsConfig { iterations: u64::MAX, rng_seed: 7, ..MctsConfig::default() };
        thread::spawn(move || -> squadplan_core::Result<_> {
            let mut search = MctsSearch::new(&world, state, Player::P0, cfg)?;
            let action = search.run(Some(&cancel))?;
            Ok((action, search.iterations_completed(), search.nodes().len()))
        })
    };

    // The caller stays responsive while the search runs...
    let started = Instant::now();
    thread::sleep(Duration::from_millis(120));

    // ...and stops it the moment a decision is due.
    cancel.store(true, Ordering::Relaxed);
    let (action, iterations, nodes) = worker.join().expect("search thread panicked")?;

    println!("planned for {:?}", started.elapsed());
    println!("iterations: {iterations}, tree nodes: {nodes}");
    println!("chosen action: {action}");
    Ok(())
}
