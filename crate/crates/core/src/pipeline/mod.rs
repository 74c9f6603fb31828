//! End-to-end build: events → filtered dynamic graph → focus selection →
//! anchored layouts → page mapping → slides, overlays, sheets, preview and
//! rack meshes, plus a manifest and a build report.
//!
//! Each stage is also callable on its own; intermediate results are cached
//! as `graph.json` and `layouts.json` in the output directory.

mod config;

use std::collections::{BTreeMap, HashMap};
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

pub use config::{
    validate_config, ConfigError, FilterConfig, Flags, FocusConfig, InputConfig, LabelConfig,
    MaterialConfig, PageConfig, PipelineConfig, RackConfig, SheetConfig,
};

use crate::embed::{map_to_page, PageSpec};
use crate::graph::{
    aggregate, filter_top_percentile, parse_events, select_focus, split_focus_context,
    DynamicGraph, FocusPartition, FocusSelection, NodeId,
};
use crate::layout::{layout_chain, trajectory_stats, SliceLayout, TrajectoryStats};
use crate::rack::{emit_stl, generate_base, generate_rack, RackSpec};
use crate::render::{
    add_registration_marks, emit_sheet_svg, emit_svg, impose, render_context_slice,
    render_focus_slice, render_label_overlay, render_preview, render_trajectory_overlay,
    slice_count_warning, DocKind, SliceDocument,
};

pub const GRAPH_CACHE: &str = "graph.json";
pub const LAYOUT_CACHE: &str = "layouts.json";
pub const MANIFEST: &str = "manifest.json";
pub const REPORT: &str = "report.json";

/// Decimal places kept for layout coordinates.
pub const LAYOUT_DECIMALS: usize = 6;

#[derive(Debug, Error)]
pub enum PipelineError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("{stage}: {message}")]
    Data { stage: &'static str, message: String },
    #[error("{stage}: {}: {source}", path.display())]
    Io {
        stage: &'static str,
        path: PathBuf,
        source: std::io::Error,
    },
}

impl PipelineError {
    fn data(stage: &'static str, e: impl ToString) -> Self {
        PipelineError::Data {
            stage,
            message: e.to_string(),
        }
    }

    fn io(stage: &'static str, path: &Path, source: std::io::Error) -> Self {
        PipelineError::Io {
            stage,
            path: path.to_path_buf(),
            source,
        }
    }

    /// Process exit code: 1 config, 2 data, 3 I/O.
    pub fn exit_code(&self) -> i32 {
        match self {
            PipelineError::Config(_) => 1,
            PipelineError::Data { .. } => 2,
            PipelineError::Io { .. } => 3,
        }
    }
}

type Result<T> = std::result::Result<T, PipelineError>;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GraphCounts {
    pub nodes: usize,
    pub edges: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FocusEntry {
    pub id: NodeId,
    pub label: String,
    pub centrality: usize,
}

/// Output of the ingest stage; cached as `graph.json`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Ingested {
    pub before_filter: GraphCounts,
    pub after_filter: GraphCounts,
    pub graph: DynamicGraph,
    pub partition: FocusPartition,
    pub centrality: BTreeMap<NodeId, usize>,
    pub warnings: Vec<String>,
}

impl Ingested {
    pub fn focus_entries(&self) -> Vec<FocusEntry> {
        self.partition
            .focus
            .iter()
            .map(|id| FocusEntry {
                id: id.clone(),
                label: self.graph.node(id).map_or_else(|| id.clone(), |n| n.label.clone()),
                centrality: self.centrality.get(id).copied().unwrap_or(0),
            })
            .collect()
    }

    /// Number of slides in the physical stack: focus and context per slice
    /// plus the two overlays.
    pub fn slide_count(&self) -> usize {
        2 * self.graph.slices.len() + 2
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LayoutCache {
    pub key: String,
    pub layouts: Vec<SliceLayout>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ManifestEntry {
    pub path: String,
    pub kind: String,
    pub slice_index: Option<usize>,
    pub page: Option<PageSpec>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub generator: String,
    pub material: MaterialConfig,
    pub files: Vec<ManifestEntry>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BuildReport {
    pub before_filter: GraphCounts,
    pub after_filter: GraphCounts,
    pub slice_count: usize,
    pub focus: Vec<FocusEntry>,
    pub trajectories: TrajectoryStats,
    pub files: Vec<String>,
    pub warnings: Vec<String>,
    pub rack: Option<RackSpec>,
    /// The fully defaulted configuration the build ran with.
    pub config: PipelineConfig,
}

fn read(stage: &'static str, path: &Path) -> Result<Vec<u8>> {
    fs::read(path).map_err(|e| PipelineError::io(stage, path, e))
}

fn write(stage: &'static str, path: &Path, bytes: &[u8]) -> Result<()> {
    if let Some(parent) = path.parent() {
        fs::create_dir_all(parent).map_err(|e| PipelineError::io(stage, parent, e))?;
    }
    fs::write(path, bytes).map_err(|e| PipelineError::io(stage, path, e))
}

fn to_json<T: Serialize>(v: &T) -> Vec<u8> {
    let mut out = serde_json::to_vec_pretty(v).expect("serialisable value");
    out.push(b'\n');
    out
}

fn read_labels(path: &Path) -> Result<HashMap<String, String>> {
    let bytes = read("ingest", path)?;
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_reader(bytes.as_slice());
    let mut labels = HashMap::new();
    for (i, rec) in reader.records().enumerate() {
        let rec = rec.map_err(|e| PipelineError::data("ingest", format!("labels line {}: {e}", i + 2)))?;
        if rec.len() != 2 {
            return Err(PipelineError::data(
                "ingest",
                format!("labels line {}: expected `id,label`", i + 2),
            ));
        }
        labels.insert(rec[0].to_string(), rec[1].to_string());
    }
    Ok(labels)
}

/// Parse, aggregate, filter and select focus nodes.
pub fn ingest(cfg: &PipelineConfig) -> Result<Ingested> {
    cfg.validate()?;
    let format = cfg.input.resolved_format()?;
    let bytes = read("ingest", &cfg.input.path)?;
    let events = parse_events(bytes.as_slice(), format).map_err(|e| PipelineError::data("ingest", e))?;
    let mut raw = aggregate(&events).map_err(|e| PipelineError::data("ingest", e))?;
    if let Some(path) = &cfg.input.labels {
        raw.apply_labels(&read_labels(path)?);
    }
    let before = GraphCounts {
        nodes: raw.nodes.len(),
        edges: raw.edge_count(),
    };
    let graph = filter_top_percentile(
        &raw,
        cfg.filter.keep_fraction,
        cfg.filter.scope,
        cfg.flags.keep_isolated,
    )
    .map_err(|e| PipelineError::data("filter", e))?;

    let FocusSelection {
        partition,
        centrality,
        warnings,
    } = match &cfg.focus.explicit_ids {
        Some(ids) => FocusSelection {
            partition: FocusPartition::from_focus(&graph, ids.clone())
                .map_err(|e| PipelineError::data("focus", e))?,
            centrality: crate::graph::degree_centrality(&graph),
            warnings: Vec::new(),
        },
        None => select_focus(&graph, cfg.focus.k, cfg.focus.require_all_slices)
            .map_err(|e| PipelineError::data("focus", e))?,
    };

    Ok(Ingested {
        before_filter: before,
        after_filter: GraphCounts {
            nodes: graph.nodes.len(),
            edges: graph.edge_count(),
        },
        graph,
        partition,
        centrality,
        warnings,
    })
}

/// Cache key for the layouts of `ingested` under `cfg`'s layout parameters.
pub fn layout_cache_key(cfg: &PipelineConfig, ingested: &Ingested) -> String {
    let mut h = Sha256::new();
    h.update(serde_json::to_vec(&ingested.graph).expect("serialisable"));
    h.update(serde_json::to_vec(&ingested.partition).expect("serialisable"));
    h.update(serde_json::to_vec(&cfg.layout).expect("serialisable"));
    h.finalize().iter().map(|b| format!("{b:02x}")).collect()
}

/// Anchored layouts rounded to [`LAYOUT_DECIMALS`]. Reuses `cached` when
/// its key matches.
pub fn compute_layouts(
    cfg: &PipelineConfig,
    ingested: &Ingested,
    cached: Option<&LayoutCache>,
) -> Result<LayoutCache> {
    let key = layout_cache_key(cfg, ingested);
    if let Some(c) = cached.filter(|c| c.key == key) {
        return Ok(c.clone());
    }
    let layouts = layout_chain(&ingested.graph, &ingested.partition, &cfg.layout)
        .map_err(|e| PipelineError::data("layout", e))?;
    Ok(LayoutCache {
        key,
        layouts: layouts.iter().map(|l| l.rounded(LAYOUT_DECIMALS)).collect(),
    })
}

/// All slide documents of a build, registration marks included.
#[derive(Debug, Clone)]
pub struct RenderedSet {
    pub focus: Vec<SliceDocument>,
    pub context: Vec<SliceDocument>,
    pub trajectories: SliceDocument,
    pub labels: SliceDocument,
    pub preview: SliceDocument,
}

impl RenderedSet {
    /// Slides in imposition order: per slice focus then context, then the
    /// trajectory and label overlays.
    pub fn slides(&self) -> Vec<SliceDocument> {
        let mut out = Vec::with_capacity(self.focus.len() * 2 + 2);
        for (f, c) in self.focus.iter().zip(&self.context) {
            out.push(f.clone());
            out.push(c.clone());
        }
        out.push(self.trajectories.clone());
        out.push(self.labels.clone());
        out
    }
}

pub fn render_documents(
    cfg: &PipelineConfig,
    ingested: &Ingested,
    layouts: &[SliceLayout],
) -> Result<RenderedSet> {
    let page = cfg.page_spec()?;
    let style = &cfg.style;
    let (physical, _) =
        map_to_page(layouts, &page, cfg.flags.stretch).map_err(|e| PipelineError::data("embed", e))?;
    let weights = ingested.graph.weight_range().unwrap_or((1.0, 1.0));
    let err = |e| PipelineError::data("render", e);

    let mut focus = Vec::new();
    let mut context = Vec::new();
    for (slice, phys) in ingested.graph.slices.iter().zip(&physical) {
        let (f, c) = split_focus_context(slice, &ingested.partition).map_err(|e| PipelineError::data("split", e))?;
        focus.push(render_focus_slice(&f, phys, weights, style, &ingested.partition, &page).map_err(err)?);
        context.push(render_context_slice(&c, phys, weights, style, &page).map_err(err)?);
    }
    let trajectories =
        render_trajectory_overlay(&physical, style, &ingested.partition, &page, cfg.flags.taper);
    let label_of = |id: &str| {
        ingested
            .graph
            .node(id)
            .map_or_else(|| id.to_string(), |n| n.label.clone())
    };
    let labels = render_label_overlay(
        &physical,
        &label_of,
        style,
        &ingested.partition,
        &page,
        cfg.labels.anchor,
    );
    let preview = render_preview(&context, &trajectories, &page, cfg.flags.preview_opacity);

    let mark = |d: SliceDocument| add_registration_marks(d, &page).map_err(err);
    Ok(RenderedSet {
        focus: focus.into_iter().map(mark).collect::<Result<_>>()?,
        context: context.into_iter().map(mark).collect::<Result<_>>()?,
        trajectories: mark(trajectories)?,
        labels: mark(labels)?,
        preview: mark(preview)?,
    })
}

fn svg_bytes(doc: &SliceDocument) -> Vec<u8> {
    let mut out = Vec::new();
    emit_svg(doc, &mut out).expect("writing to memory");
    out
}

fn doc_path(doc: &SliceDocument) -> String {
    match (doc.kind, doc.slice_index) {
        (DocKind::Focus, Some(i)) => format!("slices/focus_{i}.svg"),
        (DocKind::Context, Some(i)) => format!("slices/context_{i}.svg"),
        (DocKind::TrajectoryOverlay, _) => "overlays/trajectories.svg".into(),
        (DocKind::LabelOverlay, _) => "overlays/labels.svg".into(),
        (DocKind::Preview, _) => "preview.svg".into(),
        (kind, None) => format!("{}.svg", kind.as_str()),
    }
}

/// Renders every artefact into `out_dir`, which must already hold the
/// graph and layout caches, and writes the manifest and report.
pub fn write_outputs(
    cfg: &PipelineConfig,
    ingested: &Ingested,
    layouts: &[SliceLayout],
    out_dir: &Path,
) -> Result<BuildReport> {
    let page = cfg.page_spec()?;
    let sheet = cfg.sheet_spec()?;
    let set = render_documents(cfg, ingested, layouts)?;
    let mut entries = vec![
        ManifestEntry {
            path: GRAPH_CACHE.into(),
            kind: "graph".into(),
            slice_index: None,
            page: None,
        },
        ManifestEntry {
            path: LAYOUT_CACHE.into(),
            kind: "layouts".into(),
            slice_index: None,
            page: None,
        },
    ];

    let emit = |doc: &SliceDocument, entries: &mut Vec<ManifestEntry>| -> Result<()> {
        let rel = doc_path(doc);
        write("render", &out_dir.join(&rel), &svg_bytes(doc))?;
        entries.push(ManifestEntry {
            path: rel,
            kind: doc.kind.as_str().into(),
            slice_index: doc.slice_index,
            page: Some(doc.page.clone()),
        });
        Ok(())
    };
    for (f, c) in set.focus.iter().zip(&set.context) {
        emit(f, &mut entries)?;
        emit(c, &mut entries)?;
    }
    emit(&set.trajectories, &mut entries)?;
    emit(&set.labels, &mut entries)?;
    emit(&set.preview, &mut entries)?;

    let sheets = impose(&set.slides(), &sheet, cfg.sheet.per_sheet)
        .map_err(|e| PipelineError::data("impose", e))?;
    for (j, s) in sheets.iter().enumerate() {
        let rel = format!("sheets/sheet_{j}.svg");
        let mut bytes = Vec::new();
        emit_sheet_svg(s, &mut bytes).expect("writing to memory");
        write("impose", &out_dir.join(&rel), &bytes)?;
        entries.push(ManifestEntry {
            path: rel,
            kind: "sheet".into(),
            slice_index: None,
            page: Some(sheet.clone()),
        });
    }

    let rack = match &cfg.rack {
        None => None,
        Some(rc) => {
            let spec = rc.resolve(&page, ingested.slide_count());
            write_rack(&spec, out_dir, &mut entries)?;
            Some(spec)
        }
    };

    for (path, kind) in [(REPORT, "report"), (MANIFEST, "manifest")] {
        entries.push(ManifestEntry {
            path: path.into(),
            kind: kind.into(),
            slice_index: None,
            page: None,
        });
    }

    let mut warnings = ingested.warnings.clone();
    warnings.extend(slice_count_warning(set.focus.len() + set.context.len()));
    let report = BuildReport {
        before_filter: ingested.before_filter.clone(),
        after_filter: ingested.after_filter.clone(),
        slice_count: ingested.graph.slices.len(),
        focus: ingested.focus_entries(),
        trajectories: trajectory_stats(layouts, &ingested.partition.focus_set()),
        files: entries.iter().map(|f| f.path.clone()).collect(),
        warnings,
        rack,
        config: cfg.clone(),
    };
    let manifest = Manifest {
        generator: concat!("hologforge ", env!("CARGO_PKG_VERSION")).into(),
        material: cfg.material.clone(),
        files: entries,
    };
    write("manifest", &out_dir.join(MANIFEST), &to_json(&manifest))?;
    write("report", &out_dir.join(REPORT), &to_json(&report))?;
    Ok(report)
}

fn write_rack(spec: &RackSpec, out_dir: &Path, entries: &mut Vec<ManifestEntry>) -> Result<()> {
    let holder = generate_rack(spec).map_err(|e| PipelineError::data("rack", e))?;
    let base = generate_base(spec).map_err(|e| PipelineError::data("rack", e))?;
    for (name, kind, mesh) in [("rack_holder.stl", "rack_holder", &holder), ("rack_base.stl", "rack_base", &base)] {
        let mut bytes = Vec::new();
        emit_stl(mesh, &mut bytes).map_err(|e| PipelineError::data("rack", e))?;
        write("rack", &out_dir.join(name), &bytes)?;
        entries.push(ManifestEntry {
            path: name.into(),
            kind: kind.into(),
            slice_index: None,
            page: None,
        });
    }
    Ok(())
}

/// Writes only the rack meshes into `out_dir`.
pub fn write_rack_only(spec: &RackSpec, out_dir: &Path) -> Result<()> {
    write_rack(spec, out_dir, &mut Vec::new())
}

pub fn write_graph_cache(ingested: &Ingested, out_dir: &Path) -> Result<()> {
    write("ingest", &out_dir.join(GRAPH_CACHE), &to_json(ingested))
}

pub fn write_layout_cache(cache: &LayoutCache, out_dir: &Path) -> Result<()> {
    write("layout", &out_dir.join(LAYOUT_CACHE), &to_json(cache))
}

pub fn read_graph_cache(out_dir: &Path) -> Result<Ingested> {
    let path = out_dir.join(GRAPH_CACHE);
    serde_json::from_slice(&read("render", &path)?).map_err(|e| PipelineError::data("render", format!("{}: {e}", path.display())))
}

pub fn read_layout_cache(out_dir: &Path) -> Option<LayoutCache> {
    let bytes = fs::read(out_dir.join(LAYOUT_CACHE)).ok()?;
    serde_json::from_slice(&bytes).ok()
}

#[derive(Debug, Clone, Copy, Default)]
pub struct RunOptions {
    /// Ignore a matching `layouts.json` and recompute.
    pub relayout: bool,
}

/// Full build. Everything is written to a scratch directory next to
/// `output_dir` and moved into place only when every stage succeeded.
pub fn run_pipeline(cfg: &PipelineConfig, opts: RunOptions) -> Result<BuildReport> {
    cfg.validate()?;
    let out = &cfg.output_dir;
    let parent = match out.parent() {
        Some(p) if !p.as_os_str().is_empty() => p.to_path_buf(),
        _ => PathBuf::from("."),
    };
    fs::create_dir_all(&parent).map_err(|e| PipelineError::io("pipeline", &parent, e))?;
    let scratch = tempfile::Builder::new()
        .prefix(".hologforge-build-")
        .tempdir_in(&parent)
        .map_err(|e| PipelineError::io("pipeline", &parent, e))?;

    let ingested = ingest(cfg)?;
    write_graph_cache(&ingested, scratch.path())?;
    let cached = if opts.relayout { None } else { read_layout_cache(out) };
    let layouts = compute_layouts(cfg, &ingested, cached.as_ref())?;
    write_layout_cache(&layouts, scratch.path())?;
    let report = write_outputs(cfg, &ingested, &layouts.layouts, scratch.path())?;

    promote(scratch, out)?;
    Ok(report)
}

fn promote(scratch: tempfile::TempDir, out: &Path) -> Result<()> {
    let staged = scratch.keep();
    if out.exists() {
        let parent = staged.parent().unwrap_or(Path::new("."));
        let old = tempfile::Builder::new()
            .prefix(".hologforge-old-")
            .tempdir_in(parent)
            .map_err(|e| PipelineError::io("pipeline", parent, e))?
            .keep();
        let old_target = old.join("out");
        fs::rename(out, &old_target).map_err(|e| PipelineError::io("pipeline", out, e))?;
        if let Err(e) = fs::rename(&staged, out) {
            let _ = fs::rename(&old_target, out);
            return Err(PipelineError::io("pipeline", out, e));
        }
        let _ = fs::remove_dir_all(&old);
    } else {
        fs::rename(&staged, out).map_err(|e| PipelineError::io("pipeline", out, e))?;
    }
    Ok(())
}
