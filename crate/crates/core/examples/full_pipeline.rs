//! Runs the whole build on the seeded case-study surrogate: about 110
//! characters over seven books, ten focus characters, A5 slides imposed on
//! A4, and a rack sized to the slide count.
//!
//! ```text
//! cargo run --release --example full_pipeline -- [out_dir]
//! ```

use std::fs::{self, File};
use std::io::BufWriter;
use std::path::PathBuf;

use hologforge::pipeline::{run_pipeline, RackConfig, PipelineConfig, RunOptions};
use hologforge::synthetic::{case_study_events, write_events_csv};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let out = std::env::args()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from("target/full_pipeline"));
    fs::create_dir_all(&out)?;
    let input = out.join("events.csv");
    write_events_csv(&case_study_events(7), &mut BufWriter::new(File::create(&input)?))?;

    let mut cfg = PipelineConfig::for_input(&input);
    cfg.output_dir = out.join("build");
    cfg.rack = Some(RackConfig::default());
    let report = run_pipeline(&cfg, RunOptions::default())?;

    println!(
        "{} -> {} nodes, {} -> {} edges, {} slices",
        report.before_filter.nodes,
        report.after_filter.nodes,
        report.before_filter.edges,
        report.after_filter.edges,
        report.slice_count
    );
    for f in &report.focus {
        println!("focus {} (degree {})", f.label, f.centrality);
    }
    for w in &report.warnings {
        println!("warning: {w}");
    }
    println!("{} files in {}", report.files.len(), cfg.output_dir.display());
    Ok(())
}
