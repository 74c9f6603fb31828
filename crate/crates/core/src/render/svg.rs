//! SVG 1.1 writer. One user unit is one millimetre; numbers are written with
//! six decimals and attributes in a fixed order, so equal documents give
//! equal bytes.

use std::fmt::Write as _;
use std::io::Write;

use super::{Element, RenderError, Shape, SheetDocument, SliceDocument};

/// Six-decimal rendering of a coordinate, without negative zero.
pub fn fmt_mm(v: f64) -> String {
    let s = format!("{v:.6}");
    if s.starts_with('-') && s[1..].bytes().all(|b| b == b'0' || b == b'.') {
        s[1..].to_string()
    } else {
        s
    }
}

fn escape(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            '\'' => out.push_str("&apos;"),
            c => out.push(c),
        }
    }
    out
}

fn header(out: &mut String, width: f64, height: f64, kind: &str, extra: &str) {
    out.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\" standalone=\"no\"?>\n");
    let _ = write!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"{w}mm\" height=\"{h}mm\" viewBox=\"0 0 {w} {h}\" data-kind=\"{kind}\"{extra}>",
        w = fmt_mm(width),
        h = fmt_mm(height),
    );
}

fn paint_attrs(out: &mut String, e: &Element) {
    let p = &e.paint;
    let _ = write!(
        out,
        " fill=\"{}\" stroke=\"{}\" stroke-width=\"{}\" opacity=\"{}\"",
        p.fill.as_ref().map_or("none", |c| c.as_str()),
        p.stroke.as_ref().map_or("none", |c| c.as_str()),
        fmt_mm(p.stroke_width),
        fmt_mm(p.opacity),
    );
}

fn write_element(out: &mut String, e: &Element, indent: &str) {
    out.push('\n');
    out.push_str(indent);
    let class = e.role.as_str();
    let key = e
        .key
        .as_ref()
        .map(|k| format!(" data-key=\"{}\"", escape(k)))
        .unwrap_or_default();
    match &e.shape {
        Shape::Circle { center, r } => {
            let _ = write!(
                out,
                "<circle class=\"{class}\"{key} cx=\"{}\" cy=\"{}\" r=\"{}\"",
                fmt_mm(center.x),
                fmt_mm(center.y),
                fmt_mm(*r)
            );
            paint_attrs(out, e);
            out.push_str("/>");
        }
        Shape::Line { from, to } => {
            let _ = write!(
                out,
                "<line class=\"{class}\"{key} x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\"",
                fmt_mm(from.x),
                fmt_mm(from.y),
                fmt_mm(to.x),
                fmt_mm(to.y)
            );
            paint_attrs(out, e);
            out.push_str(" stroke-linecap=\"round\"/>");
        }
        Shape::Polyline { points } => {
            let pts: Vec<String> = points
                .iter()
                .map(|p| format!("{},{}", fmt_mm(p.x), fmt_mm(p.y)))
                .collect();
            let _ = write!(out, "<polyline class=\"{class}\"{key} points=\"{}\"", pts.join(" "));
            paint_attrs(out, e);
            out.push_str(" stroke-linecap=\"round\" stroke-linejoin=\"round\"/>");
        }
        Shape::Text { at, content, font_size_mm, family } => {
            let _ = write!(
                out,
                "<text class=\"{class}\"{key} x=\"{}\" y=\"{}\" font-size=\"{}\" font-family=\"{}\"",
                fmt_mm(at.x),
                fmt_mm(at.y),
                fmt_mm(*font_size_mm),
                escape(family)
            );
            paint_attrs(out, e);
            let _ = write!(out, ">{}</text>", escape(content));
        }
    }
}

pub(crate) fn slide_svg(doc: &SliceDocument) -> String {
    let mut out = String::new();
    let slice = doc
        .slice_index
        .map(|i| format!(" data-slice=\"{i}\""))
        .unwrap_or_default();
    header(&mut out, doc.page.width_mm, doc.page.height_mm, doc.kind.as_str(), &slice);
    for e in &doc.elements {
        write_element(&mut out, e, "  ");
    }
    if !doc.elements.is_empty() {
        out.push('\n');
    }
    out.push_str("</svg>\n");
    out
}

pub(crate) fn sheet_svg(sheet: &SheetDocument) -> String {
    let mut out = String::new();
    header(&mut out, sheet.page.width_mm, sheet.page.height_mm, "sheet", "");
    for p in &sheet.placed {
        let transform = if p.rotated {
            format!(
                "translate({} {}) rotate(90)",
                fmt_mm(p.x + p.doc.page.height_mm),
                fmt_mm(p.y)
            )
        } else {
            format!("translate({} {})", fmt_mm(p.x), fmt_mm(p.y))
        };
        let slice = p
            .doc
            .slice_index
            .map(|i| format!(" data-slice=\"{i}\""))
            .unwrap_or_default();
        let _ = write!(
            out,
            "\n  <g transform=\"{transform}\" data-kind=\"{}\"{slice}>",
            p.doc.kind.as_str()
        );
        for e in &p.doc.elements {
            write_element(&mut out, e, "    ");
        }
        out.push_str("\n  </g>");
    }
    for e in &sheet.cut_lines {
        write_element(&mut out, e, "  ");
    }
    out.push_str("\n</svg>\n");
    out
}

pub fn emit_svg(doc: &SliceDocument, sink: &mut dyn Write) -> Result<(), RenderError> {
    sink.write_all(slide_svg(doc).as_bytes())?;
    Ok(())
}

pub fn emit_sheet_svg(sheet: &SheetDocument, sink: &mut dyn Write) -> Result<(), RenderError> {
    sink.write_all(sheet_svg(sheet).as_bytes())?;
    Ok(())
}
