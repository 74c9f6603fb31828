//! Generates the seeded case-study surrogate and prints its scale before and
//! after the default 10% weight filter.
//!
//! ```text
//! cargo run --example synth_dataset -- [seed] [out.csv]
//! ```

use std::fs::File;
use std::io::BufWriter;

use hologforge::graph::{aggregate, filter_top_percentile, select_focus, FilterScope};
use hologforge::synthetic::{case_study_events, write_events_csv};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1);
    let seed: u64 = args.next().map(|s| s.parse()).transpose()?.unwrap_or(7);
    let events = case_study_events(seed);
    let raw = aggregate(&events)?;
    let filtered = filter_top_percentile(&raw, 0.10, FilterScope::Global, false)?;
    let focus = select_focus(&filtered, 10, true)?;

    println!("{} events", events.len());
    println!("raw:      {} nodes, {} slice edges", raw.nodes.len(), raw.edge_count());
    println!("filtered: {} nodes, {} slice edges", filtered.nodes.len(), filtered.edge_count());
    for s in &filtered.slices {
        println!("  slice {:?}: {} edges, {} nodes", s.slice_key, s.edges.len(), s.present.len());
    }
    println!("focus: {}", focus.partition.focus.join(", "));
    for w in &focus.warnings {
        println!("warning: {w}");
    }

    if let Some(path) = args.next() {
        let mut out = BufWriter::new(File::create(&path)?);
        write_events_csv(&events, &mut out)?;
        println!("wrote {path}");
    }
    Ok(())
}
