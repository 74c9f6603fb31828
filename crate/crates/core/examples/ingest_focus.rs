//! Parses an event file, filters to the heaviest edges and picks focus
//! nodes by degree centrality.
//!
//! ```text
//! cargo run --example ingest_focus -- data/small.csv [keep_fraction] [k]
//! ```

use std::fs::File;

use hologforge::graph::{
    aggregate, filter_top_percentile, parse_events, select_focus, split_focus_context,
    FilterScope, InputFormat,
};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1);
    let path = args.next().unwrap_or_else(|| "data/small.csv".into());
    let keep: f64 = args.next().map(|s| s.parse()).transpose()?.unwrap_or(0.25);
    let k: usize = args.next().map(|s| s.parse()).transpose()?.unwrap_or(5);

    let format = if path.ends_with(".json") { InputFormat::Json } else { InputFormat::Csv };
    let events = parse_events(File::open(&path)?, format)?;
    let raw = aggregate(&events)?;
    let graph = filter_top_percentile(&raw, keep, FilterScope::Global, false)?;
    let sel = select_focus(&graph, k, false)?;

    println!("{} events -> {} slices", events.len(), raw.slices.len());
    println!("kept {} of {} slice edges", graph.edge_count(), raw.edge_count());
    for id in &sel.partition.focus {
        println!("focus {id:>6}  degree {}", sel.centrality[id]);
    }
    for s in &graph.slices {
        let (f, c) = split_focus_context(s, &sel.partition)?;
        println!(
            "slice {:?}: {} focus edges, {} context edges",
            s.slice_key,
            f.edges.len(),
            c.edges.len()
        );
    }
    Ok(())
}
