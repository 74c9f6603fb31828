//! Renders the focus and context slides of one slice plus the two global
//! overlays, and writes them as SVG.
//!
//! ```text
//! cargo run --example render_slides -- [out_dir] [--taper]
//! ```

use std::fs::{self, File};
use std::io::BufWriter;
use std::path::PathBuf;

use hologforge::pipeline::{compute_layouts, ingest, render_documents, PipelineConfig};
use hologforge::render::{emit_svg, Role};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let out = args
        .iter()
        .find(|a| !a.starts_with("--"))
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from("target/render_slides"));
    let mut cfg = PipelineConfig::for_input(concat!(env!("CARGO_MANIFEST_DIR"), "/data/small.csv"));
    cfg.filter.keep_fraction = 0.25;
    cfg.focus.k = 5;
    cfg.focus.require_all_slices = false;
    cfg.flags.taper = args.iter().any(|a| a == "--taper");

    let ingested = ingest(&cfg)?;
    let layouts = compute_layouts(&cfg, &ingested, None)?;
    let set = render_documents(&cfg, &ingested, &layouts.layouts)?;

    fs::create_dir_all(&out)?;
    let docs = [
        ("focus_0.svg", &set.focus[0]),
        ("context_0.svg", &set.context[0]),
        ("trajectories.svg", &set.trajectories),
        ("labels.svg", &set.labels),
        ("preview.svg", &set.preview),
    ];
    for (name, doc) in docs {
        emit_svg(doc, &mut BufWriter::new(File::create(out.join(name))?))?;
        println!(
            "{name:<17} {:>3} edges {:>3} nodes {:>3} trajectory {:>3} markers {:>2} labels",
            doc.count(Role::Edge),
            doc.count(Role::Node),
            doc.count(Role::Trajectory),
            doc.count(Role::Marker),
            doc.count(Role::Label),
        );
    }
    println!("written to {}", out.display());
    Ok(())
}
