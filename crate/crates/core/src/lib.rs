//! Builds stacked-transparency physicalizations of dynamic networks.
//!
//! A time-sliced graph is laid out slice by slice, each slice starting from
//! the previous slice's positions so nodes move only where the structure
//! changes. Every slice is printed twice, once with the focus nodes in
//! colour and once with the remaining context in faint grey. Two global
//! overlays trace the focus nodes through time and name them. All slides
//! share one page transform and one set of registration marks, so the
//! printed transparencies line up when stacked in the rack.
//!
//! | module | contents |
//! |---|---|
//! | [`graph`] | ingestion, aggregation, weight filter, focus selection, focus/context split |
//! | [`layout`] | anchored force-directed layout with Barnes-Hut repulsion |
//! | [`embed`] | page and style specs, layout → millimetre transform |
//! | [`render`] | slide documents, overlays, imposition, SVG output |
//! | [`rack`] | slide rack meshes and binary STL |
//! | [`pipeline`] | config, staged build, manifest and report |

pub mod embed;
pub mod graph;
pub mod layout;
pub mod pipeline;
pub mod rack;
pub mod render;
pub mod synthetic;

pub use embed::{map_to_page, PageSpec, StyleSpec};
pub use graph::{aggregate, filter_top_percentile, parse_events, select_focus, DynamicGraph, FocusPartition};
pub use layout::{layout_chain, LayoutParams, SliceLayout};
pub use pipeline::{run_pipeline, validate_config, BuildReport, PipelineConfig, PipelineError};
pub use rack::{emit_stl, generate_rack, RackSpec, TriMesh};
pub use render::{emit_svg, SliceDocument};
