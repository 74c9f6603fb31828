//! Physical embedding: page geometry, visual style, and the single shared
//! transform from layout units to page millimetres.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::NodeId;
use crate::layout::{Point, SliceLayout};

#[derive(Debug, Error)]
pub enum EmbedError {
    #[error("no positioned nodes in any slice")]
    Empty,
    #[error("invalid page: {0}")]
    Page(String),
    #[error("invalid style: {0}")]
    Style(String),
    #[error("weight {weight} lies outside the weight range [{min}, {max}]")]
    WeightOutOfRange { weight: f64, min: f64, max: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Orientation {
    Portrait,
    #[default]
    Landscape,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum PagePreset {
    A4,
    A5,
    Letter,
    #[serde(rename = "custom")]
    Custom,
}

impl PagePreset {
    /// Portrait (width, height) in millimetres.
    pub fn portrait_mm(self) -> Option<(f64, f64)> {
        match self {
            PagePreset::A4 => Some((210.0, 297.0)),
            PagePreset::A5 => Some((148.0, 210.0)),
            PagePreset::Letter => Some((215.9, 279.4)),
            PagePreset::Custom => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PageSpec {
    pub name: PagePreset,
    pub orientation: Orientation,
    pub width_mm: f64,
    pub height_mm: f64,
    pub margin_mm: f64,
}

impl PageSpec {
    pub fn preset(name: PagePreset, orientation: Orientation, margin_mm: f64) -> Self {
        let (w, h) = name
            .portrait_mm()
            .expect("custom pages need explicit dimensions");
        let (width_mm, height_mm) = match orientation {
            Orientation::Portrait => (w, h),
            Orientation::Landscape => (h, w),
        };
        PageSpec {
            name,
            orientation,
            width_mm,
            height_mm,
            margin_mm,
        }
    }

    pub fn custom(width_mm: f64, height_mm: f64, margin_mm: f64) -> Self {
        PageSpec {
            name: PagePreset::Custom,
            orientation: if width_mm > height_mm {
                Orientation::Landscape
            } else {
                Orientation::Portrait
            },
            width_mm,
            height_mm,
            margin_mm,
        }
    }

    /// A5 landscape with a 12 mm margin: half an A4 sheet.
    pub fn a5_landscape() -> Self {
        PageSpec::preset(PagePreset::A5, Orientation::Landscape, 12.0)
    }

    pub fn a4_portrait() -> Self {
        PageSpec::preset(PagePreset::A4, Orientation::Portrait, 0.0)
    }

    pub fn validate(&self) -> Result<(), EmbedError> {
        if !(self.width_mm > 0.0 && self.height_mm > 0.0) || !self.width_mm.is_finite() || !self.height_mm.is_finite() {
            return Err(EmbedError::Page("page extents must be positive".into()));
        }
        if !(self.margin_mm >= 0.0) {
            return Err(EmbedError::Page("margin must be non-negative".into()));
        }
        if 2.0 * self.margin_mm >= self.width_mm.min(self.height_mm) {
            return Err(EmbedError::Page(format!(
                "margin {} mm leaves no drawing area on a {}x{} mm page",
                self.margin_mm, self.width_mm, self.height_mm
            )));
        }
        Ok(())
    }

    pub fn available(&self) -> (f64, f64) {
        (
            self.width_mm - 2.0 * self.margin_mm,
            self.height_mm - 2.0 * self.margin_mm,
        )
    }
}

/// sRGB colour written as `#RRGGBB`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct Color(String);

impl Color {
    pub const WHITE: &'static str = "#FFFFFF";
    pub const BLACK: &'static str = "#000000";

    pub fn parse(s: &str) -> Result<Self, EmbedError> {
        let ok = s.len() == 7
            && s.starts_with('#')
            && s[1..].chars().all(|c| c.is_ascii_hexdigit());
        if ok {
            Ok(Color(s.to_ascii_uppercase()))
        } else {
            Err(EmbedError::Style(format!("`{s}` is not a #RRGGBB colour")))
        }
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl TryFrom<String> for Color {
    type Error = EmbedError;
    fn try_from(s: String) -> Result<Self, Self::Error> {
        Color::parse(&s)
    }
}

impl From<Color> for String {
    fn from(c: Color) -> String {
        c.0
    }
}

impl std::fmt::Display for Color {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct StyleSpec {
    pub focus_palette: Vec<Color>,
    pub focus_radius_mm: f64,
    pub context_radius_mm: f64,
    pub context_color: Color,
    pub stroke_min_mm: f64,
    pub stroke_max_mm: f64,
    pub trajectory_stroke_mm: f64,
    pub trajectory_marker_radius_mm: f64,
    pub label_font_size_pt: f64,
    pub label_font_family: String,
}

impl Default for StyleSpec {
    fn default() -> Self {
        // Ten distinguishable hues (Tableau 10).
        let palette = [
            "#4E79A7", "#F28E2B", "#E15759", "#76B7B2", "#59A14F", "#EDC948", "#B07AA1",
            "#FF9DA7", "#9C755F", "#BAB0AC",
        ];
        StyleSpec {
            focus_palette: palette.iter().map(|c| Color::parse(c).unwrap()).collect(),
            focus_radius_mm: 2.0,
            context_radius_mm: 1.0,
            context_color: Color::parse("#C8C8C8").unwrap(),
            stroke_min_mm: 0.25,
            stroke_max_mm: 2.0,
            trajectory_stroke_mm: 0.6,
            trajectory_marker_radius_mm: 1.5,
            label_font_size_pt: 9.0,
            label_font_family: "Helvetica".into(),
        }
    }
}

pub const MM_PER_PT: f64 = 25.4 / 72.0;

impl StyleSpec {
    pub fn validate(&self) -> Result<(), EmbedError> {
        let positive = [
            ("focus_radius_mm", self.focus_radius_mm),
            ("context_radius_mm", self.context_radius_mm),
            ("stroke_min_mm", self.stroke_min_mm),
            ("stroke_max_mm", self.stroke_max_mm),
            ("trajectory_stroke_mm", self.trajectory_stroke_mm),
            ("trajectory_marker_radius_mm", self.trajectory_marker_radius_mm),
            ("label_font_size_pt", self.label_font_size_pt),
        ];
        for (name, v) in positive {
            if !(v.is_finite() && v > 0.0) {
                return Err(EmbedError::Style(format!("{name} must be positive")));
            }
        }
        if self.context_radius_mm >= self.focus_radius_mm {
            return Err(EmbedError::Style(
                "context_radius_mm must be smaller than focus_radius_mm".into(),
            ));
        }
        if self.stroke_min_mm >= self.stroke_max_mm {
            return Err(EmbedError::Style(
                "stroke_min_mm must be smaller than stroke_max_mm".into(),
            ));
        }
        if self.focus_palette.is_empty() {
            return Err(EmbedError::Style("focus_palette needs at least one colour".into()));
        }
        if self.label_font_family.trim().is_empty() {
            return Err(EmbedError::Style("label_font_family is empty".into()));
        }
        Ok(())
    }

    /// Colour of the focus node at `rank` in the global focus ordering.
    pub fn focus_color(&self, rank: usize) -> &Color {
        &self.focus_palette[rank % self.focus_palette.len()]
    }

    pub fn label_font_size_mm(&self) -> f64 {
        self.label_font_size_pt * MM_PER_PT
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bounds {
    pub min_x: f64,
    pub min_y: f64,
    pub max_x: f64,
    pub max_y: f64,
}

/// Tight bounding box over every node of every slice.
pub fn global_bounds(layouts: &[SliceLayout]) -> Result<Bounds, EmbedError> {
    layouts
        .iter()
        .flat_map(|l| l.positions.values())
        .fold(None, |acc: Option<Bounds>, p| {
            Some(match acc {
                None => Bounds {
                    min_x: p.x,
                    min_y: p.y,
                    max_x: p.x,
                    max_y: p.y,
                },
                Some(b) => Bounds {
                    min_x: b.min_x.min(p.x),
                    min_y: b.min_y.min(p.y),
                    max_x: b.max_x.max(p.x),
                    max_y: b.max_y.max(p.y),
                },
            })
        })
        .ok_or(EmbedError::Empty)
}

/// Affine map from layout units to page millimetres, shared by all slices.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PageTransform {
    pub scale_x: f64,
    pub scale_y: f64,
    pub offset_x: f64,
    pub offset_y: f64,
}

impl PageTransform {
    /// Fits `bounds` into the margin box of `page`. With `stretch` each axis
    /// fills the available extent independently; otherwise one uniform scale
    /// is used and the result is centred. A zero-width axis counts as one
    /// layout unit wide.
    pub fn fit(bounds: Bounds, page: &PageSpec, stretch: bool) -> Self {
        let (avail_w, avail_h) = page.available();
        let bw = bounds.max_x - bounds.min_x;
        let bh = bounds.max_y - bounds.min_y;
        let bw_eff = if bw > 0.0 { bw } else { 1.0 };
        let bh_eff = if bh > 0.0 { bh } else { 1.0 };
        let (sx, sy) = if stretch {
            (avail_w / bw_eff, avail_h / bh_eff)
        } else {
            let s = (avail_w / bw_eff).min(avail_h / bh_eff);
            (s, s)
        };
        let pad_x = (avail_w - bw * sx) / 2.0;
        let pad_y = (avail_h - bh * sy) / 2.0;
        PageTransform {
            scale_x: sx,
            scale_y: sy,
            offset_x: page.margin_mm + pad_x - bounds.min_x * sx,
            offset_y: page.margin_mm + pad_y - bounds.min_y * sy,
        }
    }

    pub fn apply(&self, p: Point) -> Point {
        Point::new(
            self.offset_x + p.x * self.scale_x,
            self.offset_y + p.y * self.scale_y,
        )
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PhysicalLayout {
    pub slice_index: usize,
    pub positions_mm: BTreeMap<NodeId, Point>,
}

/// Maps every slice onto `page` through one shared transform, so a node at
/// the same layout coordinates lands on the same spot of every slide.
pub fn map_to_page(
    layouts: &[SliceLayout],
    page: &PageSpec,
    stretch: bool,
) -> Result<(Vec<PhysicalLayout>, PageTransform), EmbedError> {
    page.validate()?;
    let bounds = global_bounds(layouts)?;
    let t = PageTransform::fit(bounds, page, stretch);
    let (lo_x, hi_x) = (page.margin_mm, page.width_mm - page.margin_mm);
    let (lo_y, hi_y) = (page.margin_mm, page.height_mm - page.margin_mm);
    let physical = layouts
        .iter()
        .map(|l| PhysicalLayout {
            slice_index: l.slice_index,
            positions_mm: l
                .positions
                .iter()
                .map(|(id, p)| {
                    // Clamp away sub-ulp overshoot at the margin box edges.
                    let q = t.apply(*p);
                    (id.clone(), Point::new(q.x.clamp(lo_x, hi_x), q.y.clamp(lo_y, hi_y)))
                })
                .collect(),
        })
        .collect();
    Ok((physical, t))
}

/// Linear map of an edge weight onto the stroke range of `style`.
pub fn stroke_width(weight: f64, w_min: f64, w_max: f64, style: &StyleSpec) -> Result<f64, EmbedError> {
    let tol = 1e-12 * w_max.abs().max(1.0);
    if !(weight >= w_min - tol && weight <= w_max + tol) {
        return Err(EmbedError::WeightOutOfRange {
            weight,
            min: w_min,
            max: w_max,
        });
    }
    if w_max <= w_min {
        return Ok(style.stroke_min_mm);
    }
    let t = ((weight - w_min) / (w_max - w_min)).clamp(0.0, 1.0);
    Ok(style.stroke_min_mm + t * (style.stroke_max_mm - style.stroke_min_mm))
}
