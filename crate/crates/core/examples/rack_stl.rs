//! Generates the slide rack and its base plate as binary STL.
//!
//! ```text
//! cargo run --example rack_stl -- [slot_count] [out_dir]
//! ```

use std::fs::{self, File};
use std::io::BufWriter;
use std::path::PathBuf;

use hologforge::rack::{emit_stl, generate_base, generate_rack, RackSpec};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1);
    let slots: usize = args.next().map(|s| s.parse()).transpose()?.unwrap_or(16);
    let out = args.next().map(PathBuf::from).unwrap_or_else(|| PathBuf::from("target/rack_stl"));
    let spec = RackSpec { slot_count: slots, printer_bed_mm: Some([250.0, 210.0, 210.0]), ..RackSpec::default() };

    let rack = generate_rack(&spec)?;
    let base = generate_base(&spec)?;
    fs::create_dir_all(&out)?;
    for (name, mesh) in [("rack_holder.stl", &rack), ("rack_base.stl", &base)] {
        emit_stl(mesh, &mut BufWriter::new(File::create(out.join(name))?))?;
        println!(
            "{name}: {} triangles, {:.1} cm^3",
            mesh.triangles.len(),
            mesh.signed_volume() / 1000.0
        );
    }
    println!(
        "{} slots at {} mm pitch, rail length {} mm, tooth height {} mm",
        spec.slot_count,
        spec.slot_pitch_mm,
        spec.rack_length(),
        spec.tooth_height()
    );
    Ok(())
}
