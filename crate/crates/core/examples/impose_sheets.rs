//! Places A5 slides two to an A4 sheet with cut lines.
//!
//! ```text
//! cargo run --example impose_sheets -- [out_dir]
//! ```

use std::fs::{self, File};
use std::io::BufWriter;
use std::path::PathBuf;

use hologforge::embed::PageSpec;
use hologforge::pipeline::{compute_layouts, ingest, render_documents, PipelineConfig};
use hologforge::render::{emit_sheet_svg, impose};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let out = std::env::args()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from("target/impose_sheets"));
    let mut cfg = PipelineConfig::for_input(concat!(env!("CARGO_MANIFEST_DIR"), "/data/small.csv"));
    cfg.filter.keep_fraction = 0.25;
    cfg.focus.require_all_slices = false;

    let ingested = ingest(&cfg)?;
    let layouts = compute_layouts(&cfg, &ingested, None)?;
    let slides = render_documents(&cfg, &ingested, &layouts.layouts)?.slides();
    let sheets = impose(&slides, &PageSpec::a4_portrait(), 2)?;

    fs::create_dir_all(&out)?;
    for (i, sheet) in sheets.iter().enumerate() {
        emit_sheet_svg(sheet, &mut BufWriter::new(File::create(out.join(format!("sheet_{i}.svg")))?))?;
        for p in &sheet.placed {
            println!(
                "sheet {i}: {:<18} at ({:6.1}, {:6.1}){}",
                format!("{}{}", p.doc.kind.as_str(), p.doc.slice_index.map_or(String::new(), |s| format!(" {s}"))),
                p.x,
                p.y,
                if p.rotated { " rotated" } else { "" }
            );
        }
    }
    println!("{} slides on {} sheets in {}", slides.len(), sheets.len(), out.display());
    Ok(())
}
