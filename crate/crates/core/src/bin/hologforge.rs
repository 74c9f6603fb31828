use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use hologforge::pipeline::{
    self, compute_layouts, ingest, read_graph_cache, read_layout_cache, validate_config,
    write_graph_cache, write_layout_cache, write_outputs, write_rack_only, BuildReport,
    PipelineConfig, PipelineError, RunOptions,
};

#[derive(Parser)]
#[command(name = "hologforge", version, about = "Print-ready slides and rack meshes for dynamic graph physicalizations")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// Pipeline config (JSON).
    #[arg(long)]
    config: PathBuf,
    /// Output directory, overriding `output_dir`.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Run every stage and promote the output tree atomically.
    Pipeline {
        #[command(flatten)]
        common: Common,
        /// Recompute layouts even when layouts.json matches.
        #[arg(long)]
        relayout: bool,
        /// Narrow trajectory strokes toward the last slice.
        #[arg(long)]
        taper: bool,
        /// Fill the printable area on both axes instead of scaling uniformly.
        #[arg(long)]
        stretch: bool,
    },
    /// Parse, filter and select focus nodes; writes graph.json.
    Ingest {
        #[command(flatten)]
        common: Common,
    },
    /// Compute anchored layouts; writes layouts.json.
    Layout {
        #[command(flatten)]
        common: Common,
        /// Recompute layouts even when layouts.json matches.
        #[arg(long)]
        relayout: bool,
    },
    /// Render slides, overlays, sheets and preview from the cached stages.
    Render {
        #[command(flatten)]
        common: Common,
        /// Narrow trajectory strokes toward the last slice.
        #[arg(long)]
        taper: bool,
        /// Fill the printable area on both axes instead of scaling uniformly.
        #[arg(long)]
        stretch: bool,
    },
    /// Write the rack meshes only.
    Rack {
        #[command(flatten)]
        common: Common,
    },
    /// Print the report of the last build.
    Report {
        #[command(flatten)]
        common: Common,
    },
}

fn load(common: &Common) -> Result<PipelineConfig, PipelineError> {
    let raw = std::fs::read(&common.config).map_err(|source| PipelineError::Io {
        stage: "config",
        path: common.config.clone(),
        source,
    })?;
    let mut cfg = validate_config(&raw)?;
    let base = common.config.parent().unwrap_or(Path::new("")).to_path_buf();
    cfg.rebase(&base);
    if let Some(out) = &common.out {
        cfg.output_dir = out.clone();
    }
    if let Ok(seed) = std::env::var("HOLOGFORGE_SEED") {
        cfg.layout.seed = seed.trim().parse().map_err(|_| {
            PipelineError::Config(hologforge::pipeline::ConfigError {
                path: "HOLOGFORGE_SEED".into(),
                message: format!("`{seed}` is not an unsigned 64-bit integer"),
            })
        })?;
    }
    Ok(cfg)
}

fn summarize(report: &BuildReport) {
    println!(
        "{} slices, {} -> {} nodes, {} -> {} edges after filtering",
        report.slice_count,
        report.before_filter.nodes,
        report.after_filter.nodes,
        report.before_filter.edges,
        report.after_filter.edges
    );
    let focus: Vec<String> = report
        .focus
        .iter()
        .map(|f| format!("{} ({})", f.label, f.centrality))
        .collect();
    println!("focus: {}", focus.join(", "));
    println!("{} files in {}", report.files.len(), report.config.output_dir.display());
    for w in &report.warnings {
        eprintln!("warning: {w}");
    }
}

fn run(cli: Cli) -> Result<(), PipelineError> {
    match cli.command {
        Command::Pipeline { common, relayout, taper, stretch } => {
            let mut cfg = load(&common)?;
            cfg.flags.taper |= taper;
            cfg.flags.stretch |= stretch;
            let report = pipeline::run_pipeline(&cfg, RunOptions { relayout })?;
            summarize(&report);
        }
        Command::Ingest { common } => {
            let cfg = load(&common)?;
            let ingested = ingest(&cfg)?;
            write_graph_cache(&ingested, &cfg.output_dir)?;
            println!(
                "{} slices, {} nodes, {} edges; focus: {}",
                ingested.graph.slices.len(),
                ingested.after_filter.nodes,
                ingested.after_filter.edges,
                ingested.partition.focus.join(", ")
            );
            for w in &ingested.warnings {
                eprintln!("warning: {w}");
            }
        }
        Command::Layout { common, relayout } => {
            let cfg = load(&common)?;
            let ingested = match read_graph_cache(&cfg.output_dir) {
                Ok(i) => i,
                Err(_) => {
                    let i = ingest(&cfg)?;
                    write_graph_cache(&i, &cfg.output_dir)?;
                    i
                }
            };
            let cached = if relayout { None } else { read_layout_cache(&cfg.output_dir) };
            let layouts = compute_layouts(&cfg, &ingested, cached.as_ref())?;
            write_layout_cache(&layouts, &cfg.output_dir)?;
            println!("{} slice layouts written", layouts.layouts.len());
        }
        Command::Render { common, taper, stretch } => {
            let mut cfg = load(&common)?;
            cfg.flags.taper |= taper;
            cfg.flags.stretch |= stretch;
            let ingested = read_graph_cache(&cfg.output_dir)?;
            let layouts = read_layout_cache(&cfg.output_dir).ok_or_else(|| PipelineError::Data {
                stage: "render",
                message: "no usable layouts.json; run `hologforge layout` first".into(),
            })?;
            let report = write_outputs(&cfg, &ingested, &layouts.layouts, &cfg.output_dir)?;
            summarize(&report);
        }
        Command::Rack { common } => {
            let cfg = load(&common)?;
            let rack = cfg.rack.clone().unwrap_or_default();
            let slides = match read_graph_cache(&cfg.output_dir) {
                Ok(i) => i.slide_count(),
                Err(_) => ingest(&cfg)?.slide_count(),
            };
            let spec = rack.resolve(&cfg.page_spec()?, slides);
            write_rack_only(&spec, &cfg.output_dir)?;
            println!(
                "rack for {} slides at {} mm pitch written to {}",
                spec.slot_count,
                spec.slot_pitch_mm,
                cfg.output_dir.display()
            );
        }
        Command::Report { common } => {
            let cfg = load(&common)?;
            let path = cfg.output_dir.join(pipeline::REPORT);
            let bytes = std::fs::read(&path).map_err(|source| PipelineError::Io {
                stage: "report",
                path: path.clone(),
                source,
            })?;
            let report: BuildReport = serde_json::from_slice(&bytes).map_err(|e| PipelineError::Data {
                stage: "report",
                message: e.to_string(),
            })?;
            summarize(&report);
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
