//! Compares anchored layouts against laying out every slice from scratch on
//! a slowly changing graph.
//!
//! ```text
//! cargo run --release --example anchored_layout -- [seed]
//! ```

use hologforge::graph::select_focus;
use hologforge::layout::{layout_chain, layout_independent, mean_displacement, trajectory_stats, LayoutParams};
use hologforge::synthetic::churn_graph;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let seed: u64 = std::env::args().nth(1).map(|s| s.parse()).transpose()?.unwrap_or(1);
    let graph = churn_graph(seed, 60, 90, 5, 0.10);
    let focus = select_focus(&graph, 5, false)?.partition;
    let params = LayoutParams { seed, ..LayoutParams::default() };

    let anchored = layout_chain(&graph, &focus, &params)?;
    let fresh = layout_independent(&graph, &focus, &params)?;
    println!("mean displacement per transition");
    println!("  anchored: {:8.3}", mean_displacement(&anchored));
    println!("  fresh:    {:8.3}", mean_displacement(&fresh));

    let stats = trajectory_stats(&anchored, &focus.focus_set());
    for (id, len) in &stats.path_length {
        println!("  {id} travels {len:.2} layout units");
    }
    Ok(())
}
