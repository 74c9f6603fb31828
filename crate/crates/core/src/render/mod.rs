//! Print documents for each slide of the stack: focus and context slices,
//! the global trajectory and label overlays, registration marks, sheet
//! imposition and a composite preview.

mod impose;
mod svg;

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::embed::{stroke_width, Color, EmbedError, PageSpec, PhysicalLayout, StyleSpec};
use crate::graph::{FocusPartition, NodeId, TimesliceGraph};
use crate::layout::Point;

pub use impose::{impose, Placement, SheetDocument};
pub use svg::{emit_sheet_svg, emit_svg, fmt_mm};

/// Above this many focus + context slides the stack stops being legible.
pub const LEGIBLE_SLICE_LIMIT: usize = 20;

/// Smallest margin that can host registration marks.
pub const MIN_MARK_MARGIN_MM: f64 = 2.0;

#[derive(Debug, Error)]
pub enum RenderError {
    #[error("node `{node}` has no page position in slice {slice}")]
    MissingPosition { node: NodeId, slice: usize },
    #[error("configuration error: {0}")]
    Config(String),
    #[error("slide of {slide_w}x{slide_h} mm does not fit {per_sheet} times on a {sheet_w}x{sheet_h} mm sheet")]
    DoesNotFit {
        slide_w: f64,
        slide_h: f64,
        sheet_w: f64,
        sheet_h: f64,
        per_sheet: usize,
    },
    #[error(transparent)]
    Embed(#[from] EmbedError),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DocKind {
    Focus,
    Context,
    TrajectoryOverlay,
    LabelOverlay,
    Preview,
}

impl DocKind {
    pub fn as_str(self) -> &'static str {
        match self {
            DocKind::Focus => "focus",
            DocKind::Context => "context",
            DocKind::TrajectoryOverlay => "trajectory_overlay",
            DocKind::LabelOverlay => "label_overlay",
            DocKind::Preview => "preview",
        }
    }
}

/// What an element depicts; written to SVG as its `class`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Role {
    Edge,
    Node,
    Trajectory,
    Marker,
    Label,
    Registration,
    Cut,
}

impl Role {
    pub fn as_str(self) -> &'static str {
        match self {
            Role::Edge => "edge",
            Role::Node => "node",
            Role::Trajectory => "trajectory",
            Role::Marker => "marker",
            Role::Label => "label",
            Role::Registration => "registration",
            Role::Cut => "cut",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Shape {
    Circle { center: Point, r: f64 },
    Line { from: Point, to: Point },
    Polyline { points: Vec<Point> },
    Text { at: Point, content: String, font_size_mm: f64, family: String },
}

#[derive(Debug, Clone, PartialEq)]
pub struct Paint {
    pub fill: Option<Color>,
    pub stroke: Option<Color>,
    pub stroke_width: f64,
    pub opacity: f64,
}

impl Paint {
    pub fn fill(c: &Color) -> Self {
        Paint {
            fill: Some(c.clone()),
            stroke: None,
            stroke_width: 0.0,
            opacity: 1.0,
        }
    }

    pub fn stroke(c: &Color, width: f64) -> Self {
        Paint {
            fill: None,
            stroke: Some(c.clone()),
            stroke_width: width,
            opacity: 1.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Element {
    pub role: Role,
    /// Node id, or `u|v` for an edge.
    pub key: Option<String>,
    pub shape: Shape,
    pub paint: Paint,
}

impl Element {
    /// Points that must lie on the page, widened by the visual radius where
    /// the shape has one.
    pub fn extent(&self) -> (Point, Point) {
        let grow = |lo: Point, hi: Point, by: f64| {
            (Point::new(lo.x - by, lo.y - by), Point::new(hi.x + by, hi.y + by))
        };
        let half = self.paint.stroke_width / 2.0;
        match &self.shape {
            Shape::Circle { center, r } => grow(*center, *center, r + half),
            Shape::Line { from, to } => grow(
                Point::new(from.x.min(to.x), from.y.min(to.y)),
                Point::new(from.x.max(to.x), from.y.max(to.y)),
                half,
            ),
            Shape::Polyline { points } => {
                let lo = points.iter().fold(Point::new(f64::INFINITY, f64::INFINITY), |a, p| {
                    Point::new(a.x.min(p.x), a.y.min(p.y))
                });
                let hi = points
                    .iter()
                    .fold(Point::new(f64::NEG_INFINITY, f64::NEG_INFINITY), |a, p| {
                        Point::new(a.x.max(p.x), a.y.max(p.y))
                    });
                grow(lo, hi, half)
            }
            Shape::Text { at, content, font_size_mm, .. } => {
                let b = LabelBox::at(*at, content, *font_size_mm);
                (Point::new(b.x0, b.y0), Point::new(b.x1, b.y1))
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SliceDocument {
    pub kind: DocKind,
    pub slice_index: Option<usize>,
    pub page: PageSpec,
    pub elements: Vec<Element>,
}

impl SliceDocument {
    pub fn new(kind: DocKind, slice_index: Option<usize>, page: &PageSpec) -> Self {
        SliceDocument {
            kind,
            slice_index,
            page: page.clone(),
            elements: Vec::new(),
        }
    }

    pub fn count(&self, role: Role) -> usize {
        self.elements.iter().filter(|e| e.role == role).count()
    }

    pub fn with_role(&self, role: Role) -> impl Iterator<Item = &Element> {
        self.elements.iter().filter(move |e| e.role == role)
    }

    /// True when every element's extent lies on the page (within `tol`).
    pub fn fits_page(&self, tol: f64) -> bool {
        self.elements.iter().all(|e| {
            let (lo, hi) = e.extent();
            lo.x >= -tol
                && lo.y >= -tol
                && hi.x <= self.page.width_mm + tol
                && hi.y <= self.page.height_mm + tol
        })
    }
}

fn position(layout: &PhysicalLayout, id: &str) -> Result<Point, RenderError> {
    layout
        .positions_mm
        .get(id)
        .copied()
        .ok_or_else(|| RenderError::MissingPosition {
            node: id.to_string(),
            slice: layout.slice_index,
        })
}

fn edge_elements(
    sub: &TimesliceGraph,
    layout: &PhysicalLayout,
    weights: (f64, f64),
    style: &StyleSpec,
    color: &Color,
) -> Result<Vec<Element>, RenderError> {
    sub.edges
        .iter()
        .map(|e| {
            Ok(Element {
                role: Role::Edge,
                key: Some(format!("{}|{}", e.u, e.v)),
                shape: Shape::Line {
                    from: position(layout, &e.u)?,
                    to: position(layout, &e.v)?,
                },
                paint: Paint::stroke(color, stroke_width(e.weight, weights.0, weights.1, style)?),
            })
        })
        .collect()
}

/// Focus slide: black weighted edges under palette-coloured nodes.
/// `weights` is the global weight range of the filtered graph.
pub fn render_focus_slice(
    focus_sub: &TimesliceGraph,
    layout: &PhysicalLayout,
    weights: (f64, f64),
    style: &StyleSpec,
    partition: &FocusPartition,
    page: &PageSpec,
) -> Result<SliceDocument, RenderError> {
    let mut doc = SliceDocument::new(DocKind::Focus, Some(focus_sub.index), page);
    let black = Color::parse(Color::BLACK).expect("constant colour");
    doc.elements = edge_elements(focus_sub, layout, weights, style, &black)?;
    let nodes: BTreeSet<&NodeId> = focus_sub
        .edges
        .iter()
        .flat_map(|e| [&e.u, &e.v])
        .chain(focus_sub.present.iter())
        .collect();
    // Draw in focus order so the output is stable across slices.
    for (rank, id) in partition.focus.iter().enumerate() {
        if !nodes.contains(id) {
            continue;
        }
        doc.elements.push(Element {
            role: Role::Node,
            key: Some(id.clone()),
            shape: Shape::Circle {
                center: position(layout, id)?,
                r: style.focus_radius_mm,
            },
            paint: Paint::fill(style.focus_color(rank)),
        });
    }
    Ok(doc)
}

/// Context slide: light grey edges and smaller grey nodes.
pub fn render_context_slice(
    context_sub: &TimesliceGraph,
    layout: &PhysicalLayout,
    weights: (f64, f64),
    style: &StyleSpec,
    page: &PageSpec,
) -> Result<SliceDocument, RenderError> {
    let mut doc = SliceDocument::new(DocKind::Context, Some(context_sub.index), page);
    doc.elements = edge_elements(context_sub, layout, weights, style, &style.context_color)?;
    for id in context_sub.endpoints() {
        doc.elements.push(Element {
            role: Role::Node,
            shape: Shape::Circle {
                center: position(layout, &id)?,
                r: style.context_radius_mm,
            },
            key: Some(id),
            paint: Paint::fill(&style.context_color),
        });
    }
    Ok(doc)
}

/// Runs of consecutive slices in which `id` is present.
fn presence_runs(layouts: &[PhysicalLayout], id: &str) -> Vec<Vec<(usize, Point)>> {
    let mut runs: Vec<Vec<(usize, Point)>> = Vec::new();
    let mut current: Vec<(usize, Point)> = Vec::new();
    for (t, l) in layouts.iter().enumerate() {
        match l.positions_mm.get(id) {
            Some(p) => current.push((t, *p)),
            None => {
                if !current.is_empty() {
                    runs.push(std::mem::take(&mut current));
                }
            }
        }
    }
    if !current.is_empty() {
        runs.push(current);
    }
    runs
}

/// Global overlay tracing each focus node through the slices, with a white
/// marker at every position. With `taper` the line narrows linearly from
/// the first slice to the last.
pub fn render_trajectory_overlay(
    layouts: &[PhysicalLayout],
    style: &StyleSpec,
    partition: &FocusPartition,
    page: &PageSpec,
    taper: bool,
) -> SliceDocument {
    let mut doc = SliceDocument::new(DocKind::TrajectoryOverlay, None, page);
    let white = Color::parse(Color::WHITE).expect("constant colour");
    let last = layouts.len().saturating_sub(1).max(1) as f64;
    let width_at = |t: usize| {
        if taper {
            style.trajectory_stroke_mm * (1.0 - 0.75 * t as f64 / last)
        } else {
            style.trajectory_stroke_mm
        }
    };
    let mut markers = Vec::new();
    for (rank, id) in partition.focus.iter().enumerate() {
        let color = style.focus_color(rank);
        for run in presence_runs(layouts, id) {
            if run.len() >= 2 {
                if taper {
                    for w in run.windows(2) {
                        doc.elements.push(Element {
                            role: Role::Trajectory,
                            key: Some(id.clone()),
                            shape: Shape::Line { from: w[0].1, to: w[1].1 },
                            paint: Paint::stroke(color, width_at(w[0].0)),
                        });
                    }
                } else {
                    doc.elements.push(Element {
                        role: Role::Trajectory,
                        key: Some(id.clone()),
                        shape: Shape::Polyline {
                            points: run.iter().map(|(_, p)| *p).collect(),
                        },
                        paint: Paint::stroke(color, width_at(0)),
                    });
                }
            }
            for (_, p) in &run {
                markers.push(Element {
                    role: Role::Marker,
                    key: Some(id.clone()),
                    shape: Shape::Circle {
                        center: *p,
                        r: style.trajectory_marker_radius_mm,
                    },
                    paint: Paint {
                        fill: Some(white.clone()),
                        stroke: Some(color.clone()),
                        stroke_width: style.trajectory_stroke_mm / 2.0,
                        opacity: 1.0,
                    },
                });
            }
        }
    }
    // Markers on top of every line.
    doc.elements.extend(markers);
    doc
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LabelAnchor {
    /// The last slice in which the node appears.
    #[default]
    Last,
    #[serde(untagged)]
    Slice(usize),
}

/// Approximate text box: average glyph advance of 0.6 em, ascent 0.8 em,
/// descent 0.2 em.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LabelBox {
    pub x0: f64,
    pub y0: f64,
    pub x1: f64,
    pub y1: f64,
}

impl LabelBox {
    pub fn at(baseline_start: Point, text: &str, font_size_mm: f64) -> Self {
        let w = 0.6 * font_size_mm * text.chars().count().max(1) as f64;
        LabelBox {
            x0: baseline_start.x,
            y0: baseline_start.y - 0.8 * font_size_mm,
            x1: baseline_start.x + w,
            y1: baseline_start.y + 0.2 * font_size_mm,
        }
    }

    pub fn intersects(&self, o: &LabelBox) -> bool {
        self.x0 < o.x1 && o.x0 < self.x1 && self.y0 < o.y1 && o.y0 < self.y1
    }

    pub fn inside(&self, w: f64, h: f64) -> bool {
        self.x0 >= 0.0 && self.y0 >= 0.0 && self.x1 <= w && self.y1 <= h
    }
}

/// Label overlay: one text per focus node at its anchor-slice position,
/// right of the node. Overlaps are resolved greedily in focus order by
/// moving a label down one line at a time (then up, if it runs off the
/// page).
pub fn render_label_overlay(
    layouts: &[PhysicalLayout],
    labels: &dyn Fn(&str) -> String,
    style: &StyleSpec,
    partition: &FocusPartition,
    page: &PageSpec,
    anchor: LabelAnchor,
) -> SliceDocument {
    let mut doc = SliceDocument::new(DocKind::LabelOverlay, None, page);
    let fs = style.label_font_size_mm();
    let line = 1.2 * fs;
    let gap = style.focus_radius_mm + 1.0;
    let mut placed: Vec<LabelBox> = Vec::new();

    for (rank, id) in partition.focus.iter().enumerate() {
        let last_seen = layouts.iter().rev().find_map(|l| l.positions_mm.get(id));
        let pos = match anchor {
            LabelAnchor::Last => last_seen,
            LabelAnchor::Slice(i) => layouts
                .get(i)
                .and_then(|l| l.positions_mm.get(id))
                .or(last_seen),
        };
        let Some(&pos) = pos else { continue };
        let text = labels(id);
        let baseline_y = pos.y + 0.3 * fs;
        let mut start = Point::new(pos.x + gap, baseline_y);
        if !LabelBox::at(start, &text, fs).inside(page.width_mm, page.height_mm) {
            let w = LabelBox::at(start, &text, fs);
            start.x = pos.x - gap - (w.x1 - w.x0);
        }
        let fits = |dy: f64| {
            let b = LabelBox::at(Point::new(start.x, start.y + dy), &text, fs);
            b.inside(page.width_mm, page.height_mm) && !placed.iter().any(|p| p.intersects(&b))
        };
        let downward = (0..).map(|k| k as f64 * line).take_while(|dy| {
            LabelBox::at(Point::new(start.x, start.y + dy), &text, fs).y1 <= page.height_mm
        });
        let upward = (1..).map(|k| -(k as f64) * line).take_while(|dy| {
            LabelBox::at(Point::new(start.x, start.y + dy), &text, fs).y0 >= 0.0
        });
        let dy = downward.chain(upward).find(|dy| fits(*dy)).unwrap_or(0.0);
        let at = Point::new(start.x, start.y + dy);
        placed.push(LabelBox::at(at, &text, fs));
        doc.elements.push(Element {
            role: Role::Label,
            key: Some(id.clone()),
            shape: Shape::Text {
                at,
                content: text,
                font_size_mm: fs,
                family: style.label_font_family.clone(),
            },
            paint: Paint::fill(style.focus_color(rank)),
        });
    }
    doc
}

/// Geometry of the punch/registration marks shared by every document.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RegistrationMarks {
    pub centers: [Point; 2],
    pub arm_mm: f64,
    pub ring_mm: f64,
}

impl RegistrationMarks {
    pub fn for_page(page: &PageSpec) -> Result<Self, RenderError> {
        if !(page.margin_mm >= MIN_MARK_MARGIN_MM) {
            return Err(RenderError::Config(format!(
                "margin {} mm is too small for registration marks (need at least {MIN_MARK_MARGIN_MM} mm)",
                page.margin_mm
            )));
        }
        let arm = (0.4 * page.margin_mm).min(3.5);
        let y = page.height_mm / 2.0;
        Ok(RegistrationMarks {
            centers: [
                Point::new(page.margin_mm / 2.0, y),
                Point::new(page.width_mm - page.margin_mm / 2.0, y),
            ],
            arm_mm: arm,
            ring_mm: 0.7 * arm,
        })
    }

    pub fn elements(&self) -> Vec<Element> {
        let black = Color::parse(Color::BLACK).expect("constant colour");
        let w = 0.15;
        self.centers
            .iter()
            .flat_map(|c| {
                [
                    Element {
                        role: Role::Registration,
                        key: None,
                        shape: Shape::Circle { center: *c, r: self.ring_mm },
                        paint: Paint::stroke(&black, w),
                    },
                    Element {
                        role: Role::Registration,
                        key: None,
                        shape: Shape::Line {
                            from: Point::new(c.x - self.arm_mm, c.y),
                            to: Point::new(c.x + self.arm_mm, c.y),
                        },
                        paint: Paint::stroke(&black, w),
                    },
                    Element {
                        role: Role::Registration,
                        key: None,
                        shape: Shape::Line {
                            from: Point::new(c.x, c.y - self.arm_mm),
                            to: Point::new(c.x, c.y + self.arm_mm),
                        },
                        paint: Paint::stroke(&black, w),
                    },
                ]
            })
            .collect()
    }
}

/// Appends the registration marks of `page` to `doc`.
pub fn add_registration_marks(
    mut doc: SliceDocument,
    page: &PageSpec,
) -> Result<SliceDocument, RenderError> {
    doc.elements.extend(RegistrationMarks::for_page(page)?.elements());
    Ok(doc)
}

/// Composite desk-check page: every context slide at `opacity` plus the
/// trajectory overlay on top.
pub fn render_preview(
    context_docs: &[SliceDocument],
    trajectory: &SliceDocument,
    page: &PageSpec,
    opacity: f64,
) -> SliceDocument {
    let mut doc = SliceDocument::new(DocKind::Preview, None, page);
    for c in context_docs {
        doc.elements.extend(c.elements.iter().cloned().map(|mut e| {
            e.paint.opacity = opacity;
            e
        }));
    }
    doc.elements.extend(trajectory.elements.iter().cloned());
    doc
}

/// Warning text when the slide stack exceeds the legibility limit.
pub fn slice_count_warning(slide_docs: usize) -> Option<String> {
    (slide_docs > LEGIBLE_SLICE_LIMIT).then(|| {
        format!(
            "{slide_docs} focus/context slides exceed the legibility limit of {LEGIBLE_SLICE_LIMIT}; deeper stacks become hard to read"
        )
    })
}
