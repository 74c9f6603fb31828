use crate::embed::{Color, PageSpec};
use crate::layout::Point;

use super::{Element, Paint, RenderError, Role, Shape, SliceDocument};

const FIT_EPS: f64 = 1e-9;

/// A slide placed on a sheet: its top-left corner lands at `(x, y)`;
/// `rotated` turns it 90 degrees clockwise first.
#[derive(Debug, Clone, PartialEq)]
pub struct Placement {
    pub doc: SliceDocument,
    pub x: f64,
    pub y: f64,
    pub rotated: bool,
}

impl Placement {
    /// Footprint on the sheet as (x0, y0, x1, y1).
    pub fn footprint(&self) -> (f64, f64, f64, f64) {
        let (w, h) = if self.rotated {
            (self.doc.page.height_mm, self.doc.page.width_mm)
        } else {
            (self.doc.page.width_mm, self.doc.page.height_mm)
        };
        (self.x, self.y, self.x + w, self.y + h)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SheetDocument {
    pub page: PageSpec,
    pub placed: Vec<Placement>,
    pub cut_lines: Vec<Element>,
}

struct Grid {
    cols: usize,
    rows: usize,
    cell_w: f64,
    cell_h: f64,
    rotated: bool,
}

fn grid_for(slide: &PageSpec, sheet: &PageSpec, per_sheet: usize) -> Option<Grid> {
    [false, true].into_iter().find_map(|rotated| {
        let (w, h) = if rotated {
            (slide.height_mm, slide.width_mm)
        } else {
            (slide.width_mm, slide.height_mm)
        };
        let cols = ((sheet.width_mm + FIT_EPS) / w).floor() as usize;
        let max_rows = ((sheet.height_mm + FIT_EPS) / h).floor() as usize;
        if cols == 0 || cols * max_rows < per_sheet {
            return None;
        }
        let cols = cols.min(per_sheet);
        Some(Grid {
            cols,
            rows: per_sheet.div_ceil(cols),
            cell_w: w,
            cell_h: h,
            rotated,
        })
    })
}

/// Places slides `per_sheet` to a sheet in reading order, centred on the
/// sheet, with cut lines between neighbouring cells. All slides must share
/// one page size.
pub fn impose(
    docs: &[SliceDocument],
    sheet: &PageSpec,
    per_sheet: usize,
) -> Result<Vec<SheetDocument>, RenderError> {
    if per_sheet == 0 {
        return Err(RenderError::Config("slides per sheet must be positive".into()));
    }
    let Some(first) = docs.first() else {
        return Ok(Vec::new());
    };
    if docs.iter().any(|d| d.page.width_mm != first.page.width_mm || d.page.height_mm != first.page.height_mm) {
        return Err(RenderError::Config("imposed slides must share one page size".into()));
    }
    let grid = grid_for(&first.page, sheet, per_sheet).ok_or(RenderError::DoesNotFit {
        slide_w: first.page.width_mm,
        slide_h: first.page.height_mm,
        sheet_w: sheet.width_mm,
        sheet_h: sheet.height_mm,
        per_sheet,
    })?;

    let used_w = grid.cols as f64 * grid.cell_w;
    let used_h = grid.rows as f64 * grid.cell_h;
    let x0 = (sheet.width_mm - used_w) / 2.0;
    let y0 = (sheet.height_mm - used_h) / 2.0;

    let grey = Color::parse("#808080").expect("constant colour");
    let mut cut_lines = Vec::new();
    for r in 1..grid.rows {
        let y = y0 + r as f64 * grid.cell_h;
        cut_lines.push(cut(Point::new(x0, y), Point::new(x0 + used_w, y), &grey));
    }
    for c in 1..grid.cols {
        let x = x0 + c as f64 * grid.cell_w;
        cut_lines.push(cut(Point::new(x, y0), Point::new(x, y0 + used_h), &grey));
    }

    Ok(docs
        .chunks(per_sheet)
        .map(|chunk| SheetDocument {
            page: sheet.clone(),
            placed: chunk
                .iter()
                .enumerate()
                .map(|(i, doc)| Placement {
                    doc: doc.clone(),
                    x: x0 + (i % grid.cols) as f64 * grid.cell_w,
                    y: y0 + (i / grid.cols) as f64 * grid.cell_h,
                    rotated: grid.rotated,
                })
                .collect(),
            cut_lines: cut_lines.clone(),
        })
        .collect())
}

fn cut(from: Point, to: Point, color: &Color) -> Element {
    Element {
        role: Role::Cut,
        key: None,
        shape: Shape::Line { from, to },
        paint: Paint::stroke(color, 0.1),
    }
}
