//! Maps layout coordinates onto an A5 landscape page with one shared
//! transform, and shows how edge weights become stroke widths.
//!
//! ```text
//! cargo run --example page_mapping
//! ```

use std::collections::BTreeMap;

use hologforge::embed::{map_to_page, stroke_width, PageSpec, StyleSpec};
use hologforge::layout::{Point, SliceLayout};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let positions: BTreeMap<String, Point> = [
        ("a", Point::new(0.0, 0.0)),
        ("b", Point::new(100.0, 0.0)),
        ("c", Point::new(100.0, 50.0)),
        ("d", Point::new(50.0, 25.0)),
    ]
    .into_iter()
    .map(|(k, p)| (k.to_string(), p))
    .collect();
    let layouts = vec![SliceLayout { slice_index: 0, positions }];

    let mut page = PageSpec::a5_landscape();
    page.margin_mm = 15.0;
    for stretch in [false, true] {
        let (physical, t) = map_to_page(&layouts, &page, stretch)?;
        println!("stretch={stretch}: scale ({:.3}, {:.3}) offset ({:.3}, {:.3})", t.scale_x, t.scale_y, t.offset_x, t.offset_y);
        for (id, p) in &physical[0].positions_mm {
            println!("  {id}: ({:.3}, {:.3}) mm", p.x, p.y);
        }
    }

    let style = StyleSpec::default();
    for w in [1.0, 5.0, 10.0] {
        println!("weight {w:>4} -> {:.3} mm stroke", stroke_width(w, 1.0, 10.0, &style)?);
    }
    Ok(())
}
