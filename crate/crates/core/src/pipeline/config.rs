use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::embed::{Orientation, PagePreset, PageSpec, StyleSpec};
use crate::graph::{FilterScope, InputFormat};
use crate::layout::LayoutParams;
use crate::rack::RackSpec;
use crate::render::LabelAnchor;

/// A rejected configuration, with the dotted path of the offending key.
#[derive(Debug, Error)]
#[error("config error at `{path}`: {message}")]
pub struct ConfigError {
    pub path: String,
    pub message: String,
}

impl ConfigError {
    fn new(path: impl Into<String>, message: impl ToString) -> Self {
        ConfigError {
            path: path.into(),
            message: message.to_string(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InputConfig {
    pub path: PathBuf,
    /// Inferred from the file extension when absent.
    #[serde(default)]
    pub format: Option<InputFormat>,
    /// Optional `id,label` CSV with display names.
    #[serde(default)]
    pub labels: Option<PathBuf>,
}

impl InputConfig {
    pub fn resolved_format(&self) -> Result<InputFormat, ConfigError> {
        if let Some(f) = self.format {
            return Ok(f);
        }
        match self.path.extension().and_then(|e| e.to_str()).map(str::to_ascii_lowercase).as_deref() {
            Some("csv") => Ok(InputFormat::Csv),
            Some("json") => Ok(InputFormat::Json),
            _ => Err(ConfigError::new(
                "input.format",
                "cannot infer the format from the file extension; set `csv` or `json`",
            )),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct FilterConfig {
    pub keep_fraction: f64,
    pub scope: FilterScope,
}

impl Default for FilterConfig {
    fn default() -> Self {
        FilterConfig {
            keep_fraction: 0.10,
            scope: FilterScope::Global,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct FocusConfig {
    pub k: usize,
    pub require_all_slices: bool,
    /// Use these focus nodes (in this order) instead of the centrality ranking.
    pub explicit_ids: Option<Vec<String>>,
}

impl Default for FocusConfig {
    fn default() -> Self {
        FocusConfig {
            k: 10,
            require_all_slices: true,
            explicit_ids: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct PageConfig {
    pub preset: PagePreset,
    pub orientation: Orientation,
    pub margin_mm: f64,
    /// Only for `custom` pages.
    pub width_mm: Option<f64>,
    pub height_mm: Option<f64>,
}

impl Default for PageConfig {
    fn default() -> Self {
        PageConfig {
            preset: PagePreset::A5,
            orientation: Orientation::Landscape,
            margin_mm: 12.0,
            width_mm: None,
            height_mm: None,
        }
    }
}

impl PageConfig {
    fn resolve(&self, path: &str) -> Result<PageSpec, ConfigError> {
        let page = match (self.preset, self.width_mm, self.height_mm) {
            (PagePreset::Custom, Some(w), Some(h)) => {
                let mut p = PageSpec::custom(w, h, self.margin_mm);
                p.orientation = self.orientation;
                p
            }
            (PagePreset::Custom, _, _) => {
                return Err(ConfigError::new(
                    format!("{path}.width_mm"),
                    "custom pages need width_mm and height_mm",
                ))
            }
            (_, None, None) => PageSpec::preset(self.preset, self.orientation, self.margin_mm),
            _ => {
                return Err(ConfigError::new(
                    format!("{path}.width_mm"),
                    "explicit dimensions require preset `custom`",
                ))
            }
        };
        page.validate().map_err(|e| ConfigError::new(path, e))?;
        Ok(page)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SheetConfig {
    pub preset: PagePreset,
    pub orientation: Orientation,
    pub width_mm: Option<f64>,
    pub height_mm: Option<f64>,
    pub per_sheet: usize,
}

impl Default for SheetConfig {
    fn default() -> Self {
        SheetConfig {
            preset: PagePreset::A4,
            orientation: Orientation::Portrait,
            width_mm: None,
            height_mm: None,
            per_sheet: 2,
        }
    }
}

/// Rack section; unset dimensions fall back to the slide page and the
/// number of slides in the build.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RackConfig {
    pub slot_count: Option<usize>,
    pub slot_pitch_mm: Option<f64>,
    pub slot_width_mm: Option<f64>,
    pub slide_height_mm: Option<f64>,
    pub slide_width_mm: Option<f64>,
    pub wall_mm: Option<f64>,
    pub base_thickness_mm: Option<f64>,
    pub base_depth_mm: Option<f64>,
    pub printer_bed_mm: Option<[f64; 3]>,
}

impl RackConfig {
    pub fn resolve(&self, page: &PageSpec, slides: usize) -> RackSpec {
        let d = RackSpec::default();
        RackSpec {
            slot_count: self.slot_count.unwrap_or(slides.max(1)),
            slot_pitch_mm: self.slot_pitch_mm.unwrap_or(d.slot_pitch_mm),
            slot_width_mm: self.slot_width_mm.unwrap_or(d.slot_width_mm),
            slide_height_mm: self.slide_height_mm.unwrap_or(page.height_mm),
            slide_width_mm: self.slide_width_mm.unwrap_or(page.width_mm),
            wall_mm: self.wall_mm.unwrap_or(d.wall_mm),
            base_thickness_mm: self.base_thickness_mm.unwrap_or(d.base_thickness_mm),
            base_depth_mm: self.base_depth_mm.unwrap_or(d.base_depth_mm),
            printer_bed_mm: self.printer_bed_mm,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Flags {
    pub taper: bool,
    pub stretch: bool,
    pub keep_isolated: bool,
    pub preview_opacity: f64,
}

impl Default for Flags {
    fn default() -> Self {
        Flags {
            taper: false,
            stretch: false,
            keep_isolated: false,
            preview_opacity: 0.35,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct LabelConfig {
    pub anchor: LabelAnchor,
}

/// Print medium; documented in the manifest only.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct MaterialConfig {
    pub medium: String,
    pub transparent: bool,
}

impl Default for MaterialConfig {
    fn default() -> Self {
        MaterialConfig {
            medium: "laser-printable overhead transparency".into(),
            transparent: true,
        }
    }
}

fn default_output_dir() -> PathBuf {
    PathBuf::from("out")
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PipelineConfig {
    pub input: InputConfig,
    #[serde(default)]
    pub filter: FilterConfig,
    #[serde(default)]
    pub focus: FocusConfig,
    #[serde(default)]
    pub layout: LayoutParams,
    #[serde(default)]
    pub page: PageConfig,
    #[serde(default)]
    pub sheet: SheetConfig,
    #[serde(default)]
    pub style: StyleSpec,
    #[serde(default)]
    pub rack: Option<RackConfig>,
    #[serde(default)]
    pub labels: LabelConfig,
    #[serde(default)]
    pub material: MaterialConfig,
    #[serde(default = "default_output_dir")]
    pub output_dir: PathBuf,
    #[serde(default)]
    pub flags: Flags,
}

impl PipelineConfig {
    /// Minimal config for `input` with every other value defaulted.
    pub fn for_input(path: impl Into<PathBuf>) -> Self {
        PipelineConfig {
            input: InputConfig {
                path: path.into(),
                format: None,
                labels: None,
            },
            filter: FilterConfig::default(),
            focus: FocusConfig::default(),
            layout: LayoutParams::default(),
            page: PageConfig::default(),
            sheet: SheetConfig::default(),
            style: StyleSpec::default(),
            rack: None,
            labels: LabelConfig::default(),
            material: MaterialConfig::default(),
            output_dir: default_output_dir(),
            flags: Flags::default(),
        }
    }

    pub fn page_spec(&self) -> Result<PageSpec, ConfigError> {
        self.page.resolve("page")
    }

    pub fn sheet_spec(&self) -> Result<PageSpec, ConfigError> {
        let s = &self.sheet;
        PageConfig {
            preset: s.preset,
            orientation: s.orientation,
            margin_mm: 0.0,
            width_mm: s.width_mm,
            height_mm: s.height_mm,
        }
        .resolve("sheet")
    }

    /// Checks every cross-field invariant after parsing.
    pub fn validate(&self) -> Result<(), ConfigError> {
        let kf = self.filter.keep_fraction;
        if !(kf > 0.0 && kf <= 1.0) {
            return Err(ConfigError::new(
                "filter.keep_fraction",
                format!("{kf} is outside (0, 1]"),
            ));
        }
        if self.focus.k == 0 {
            return Err(ConfigError::new("focus.k", "must be at least 1"));
        }
        self.layout.validate().map_err(|e| match e {
            crate::layout::LayoutError::Param { name, reason } => {
                ConfigError::new(format!("layout.{name}"), reason)
            }
            other => ConfigError::new("layout", other),
        })?;
        self.page_spec()?;
        self.sheet_spec()?;
        if self.sheet.per_sheet == 0 {
            return Err(ConfigError::new("sheet.per_sheet", "must be at least 1"));
        }
        self.style.validate().map_err(|e| ConfigError::new("style", e))?;
        let op = self.flags.preview_opacity;
        if !(0.0..=1.0).contains(&op) {
            return Err(ConfigError::new("flags.preview_opacity", format!("{op} is outside [0, 1]")));
        }
        if let Some(rack) = &self.rack {
            let page = self.page_spec()?;
            rack.resolve(&page, rack.slot_count.unwrap_or(1))
                .validate()
                .map_err(|e| ConfigError::new("rack", e))?;
        }
        Ok(())
    }

    /// Resolves relative input and output paths against `base`.
    pub fn rebase(&mut self, base: &Path) {
        let fix = |p: &mut PathBuf| {
            if p.is_relative() {
                *p = base.join(&*p);
            }
        };
        fix(&mut self.input.path);
        if let Some(l) = &mut self.input.labels {
            fix(l);
        }
        fix(&mut self.output_dir);
    }
}

/// Strict parse of a JSON config: unknown keys and type mismatches are
/// errors naming the offending path; all invariants are checked.
pub fn validate_config(raw: &[u8]) -> Result<PipelineConfig, ConfigError> {
    let de = &mut serde_json::Deserializer::from_slice(raw);
    let cfg: PipelineConfig = serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        ConfigError::new(if path.is_empty() { ".".to_string() } else { path }, e.into_inner())
    })?;
    cfg.validate()?;
    Ok(cfg)
}
