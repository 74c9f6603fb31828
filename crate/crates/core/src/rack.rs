//! Slide rack: two comb rails that hold the slides upright at a fixed
//! pitch, and a base plate with sockets for the rails. Each part is built
//! from extruded comb profiles, so the meshes are closed and 2-manifold
//! without any boolean operations.

use std::io::Write;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum RackError {
    #[error("invalid rack parameter: {0}")]
    Param(String),
    #[error("mesh has {0} triangles; binary STL holds at most u32::MAX")]
    TooManyTriangles(usize),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RackSpec {
    pub slot_count: usize,
    pub slot_pitch_mm: f64,
    /// Groove width: slide thickness plus clearance.
    pub slot_width_mm: f64,
    pub slide_height_mm: f64,
    pub slide_width_mm: f64,
    pub wall_mm: f64,
    pub base_thickness_mm: f64,
    /// Rail thickness across the slide edge; also the socket width in the base.
    pub base_depth_mm: f64,
    /// Optional printer build volume (x, y, z) the parts must fit.
    pub printer_bed_mm: Option<[f64; 3]>,
}

impl Default for RackSpec {
    fn default() -> Self {
        RackSpec {
            slot_count: 16,
            slot_pitch_mm: 10.0,
            slot_width_mm: 0.6,
            slide_height_mm: 148.0,
            slide_width_mm: 210.0,
            wall_mm: 5.0,
            base_thickness_mm: 4.0,
            base_depth_mm: 12.0,
            printer_bed_mm: None,
        }
    }
}

impl RackSpec {
    /// Length of a rail along the stacking axis.
    pub fn rack_length(&self) -> f64 {
        self.slot_count as f64 * self.slot_pitch_mm + self.wall_mm
    }

    /// Tooth height above the rail floor: a quarter of the slide height.
    pub fn tooth_height(&self) -> f64 {
        self.slide_height_mm / 4.0
    }

    /// x-centre of groove `i` in rail coordinates.
    pub fn groove_center(&self, i: usize) -> f64 {
        self.wall_mm / 2.0 + self.slot_pitch_mm / 2.0 + i as f64 * self.slot_pitch_mm
    }

    /// Gap between the inner faces of the two rails.
    pub fn rail_gap(&self) -> f64 {
        self.slide_width_mm - self.base_depth_mm
    }

    pub fn validate(&self) -> Result<(), RackError> {
        let err = |m: &str| Err(RackError::Param(m.to_string()));
        if self.slot_count == 0 {
            return err("slot_count must be positive");
        }
        let dims = [
            ("slot_pitch_mm", self.slot_pitch_mm),
            ("slot_width_mm", self.slot_width_mm),
            ("slide_height_mm", self.slide_height_mm),
            ("slide_width_mm", self.slide_width_mm),
            ("wall_mm", self.wall_mm),
            ("base_thickness_mm", self.base_thickness_mm),
            ("base_depth_mm", self.base_depth_mm),
        ];
        for (name, v) in dims {
            if !(v.is_finite() && v > 0.0) {
                return Err(RackError::Param(format!("{name} must be positive")));
            }
        }
        if self.slot_width_mm >= self.slot_pitch_mm {
            return err("slot_width_mm must be smaller than slot_pitch_mm");
        }
        if self.wall_mm <= self.slot_width_mm {
            return err("wall_mm must exceed slot_width_mm so the base sockets keep a rim");
        }
        if self.rail_gap() <= self.slot_width_mm {
            return err("slide_width_mm must exceed base_depth_mm + slot_width_mm");
        }
        if let Some(bed) = self.printer_bed_mm {
            let (bx, by) = self.base_footprint();
            let fits_plane = (bx <= bed[0] && by <= bed[1]) || (bx <= bed[1] && by <= bed[0]);
            let height = self.base_thickness_mm + self.tooth_height();
            if !fits_plane || height > bed[2] {
                return Err(RackError::Param(format!(
                    "rack ({bx:.1} x {by:.1} x {height:.1} mm) exceeds the printer volume {:?}",
                    bed
                )));
            }
        }
        Ok(())
    }

    fn base_footprint(&self) -> (f64, f64) {
        (
            self.rack_length() + 2.0 * self.wall_mm,
            2.0 * self.base_depth_mm + self.rail_gap() + 2.0 * self.wall_mm,
        )
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct TriMesh {
    pub vertices: Vec<[f64; 3]>,
    /// Counter-clockwise seen from outside.
    pub triangles: Vec<[usize; 3]>,
}

impl TriMesh {
    pub fn append(&mut self, other: &TriMesh) {
        let base = self.vertices.len();
        self.vertices.extend_from_slice(&other.vertices);
        self.triangles.extend(
            other
                .triangles
                .iter()
                .map(|t| [t[0] + base, t[1] + base, t[2] + base]),
        );
    }

    pub fn translate(&mut self, d: [f64; 3]) {
        for v in &mut self.vertices {
            v[0] += d[0];
            v[1] += d[1];
            v[2] += d[2];
        }
    }

    /// Signed enclosed volume (positive for outward winding).
    pub fn signed_volume(&self) -> f64 {
        self.triangles
            .iter()
            .map(|t| {
                let [a, b, c] = t.map(|i| self.vertices[i]);
                (a[0] * (b[1] * c[2] - b[2] * c[1]) - a[1] * (b[0] * c[2] - b[2] * c[0])
                    + a[2] * (b[0] * c[1] - b[1] * c[0]))
                    / 6.0
            })
            .sum()
    }

    fn flip(&mut self) {
        for t in &mut self.triangles {
            t.swap(1, 2);
        }
    }
}

/// Which world axes the comb's profile and extrusion run along.
#[derive(Debug, Clone, Copy)]
enum Frame {
    /// Profile along x, extruded along y.
    ProfileX,
    /// Profile along y, extruded along x.
    ProfileY,
}

/// Extrudes a comb profile: a floor `[u0, u1] x [0, floor]` with teeth up to
/// `top` everywhere except over the `grooves`, which must be sorted,
/// disjoint and strictly inside `(u0, u1)`.
fn comb_prism(
    u0: f64,
    u1: f64,
    grooves: &[(f64, f64)],
    floor: f64,
    top: f64,
    v0: f64,
    v1: f64,
    frame: Frame,
) -> TriMesh {
    // Outline, counter-clockwise in the (u, w) plane.
    let mut outline: Vec<(f64, f64)> = vec![(u0, 0.0), (u1, 0.0), (u1, floor), (u1, top)];
    for &(g0, g1) in grooves.iter().rev() {
        outline.extend([(g1, top), (g1, floor), (g0, floor), (g0, top)]);
    }
    outline.extend([(u0, top), (u0, floor)]);
    let index_of = |p: (f64, f64)| outline.iter().position(|q| *q == p).expect("outline vertex");

    let mut cap: Vec<[usize; 3]> = Vec::new();
    // Floor strip: a fan from (u0, 0) over the chain of floor-level vertices.
    let mut chain = vec![(u1, floor)];
    for &(g0, g1) in grooves.iter().rev() {
        chain.extend([(g1, floor), (g0, floor)]);
    }
    chain.push((u0, floor));
    cap.push([index_of((u0, 0.0)), index_of((u1, 0.0)), index_of((u1, floor))]);
    for w in chain.windows(2) {
        cap.push([index_of((u0, 0.0)), index_of(w[0]), index_of(w[1])]);
    }
    // Teeth.
    let mut edges = vec![u0];
    for &(g0, g1) in grooves {
        edges.extend([g0, g1]);
    }
    edges.push(u1);
    for pair in edges.chunks(2) {
        let (a, b) = (pair[0], pair[1]);
        let (p0, p1, p2, p3) = (
            index_of((a, floor)),
            index_of((b, floor)),
            index_of((b, top)),
            index_of((a, top)),
        );
        cap.push([p0, p1, p2]);
        cap.push([p0, p2, p3]);
    }
    for t in &mut cap {
        let [a, b, c] = t.map(|i| outline[i]);
        let area2 = (b.0 - a.0) * (c.1 - a.1) - (c.0 - a.0) * (b.1 - a.1);
        if area2 < 0.0 {
            t.swap(1, 2);
        }
    }

    let n = outline.len();
    let world = |(u, w): (f64, f64), v: f64| match frame {
        Frame::ProfileX => [u, v, w],
        Frame::ProfileY => [v, u, w],
    };
    let mut mesh = TriMesh::default();
    mesh.vertices.extend(outline.iter().map(|p| world(*p, v0)));
    mesh.vertices.extend(outline.iter().map(|p| world(*p, v1)));
    for t in &cap {
        mesh.triangles.push([t[0], t[2], t[1]]);
        mesh.triangles.push([t[0] + n, t[1] + n, t[2] + n]);
    }
    for i in 0..n {
        let j = (i + 1) % n;
        mesh.triangles.push([i, j, j + n]);
        mesh.triangles.push([i, j + n, i + n]);
    }
    if mesh.signed_volume() < 0.0 {
        mesh.flip();
    }
    mesh
}

/// The two mirrored comb rails. Rail length runs along x; the slides stand
/// in the y-z plane, each groove holding one slide edge.
pub fn generate_rack(spec: &RackSpec) -> Result<TriMesh, RackError> {
    spec.validate()?;
    let grooves: Vec<(f64, f64)> = (0..spec.slot_count)
        .map(|i| {
            let c = spec.groove_center(i);
            (c - spec.slot_width_mm / 2.0, c + spec.slot_width_mm / 2.0)
        })
        .collect();
    let top = spec.base_thickness_mm + spec.tooth_height();
    let rail = |v0: f64| {
        comb_prism(
            0.0,
            spec.rack_length(),
            &grooves,
            spec.base_thickness_mm,
            top,
            v0,
            v0 + spec.base_depth_mm,
            Frame::ProfileX,
        )
    };
    let mut mesh = rail(0.0);
    mesh.append(&rail(spec.base_depth_mm + spec.rail_gap()));
    Ok(mesh)
}

/// Base plate with one socket per rail, running the full rail length. In
/// the rack frame the plate occupies z in `[-2 * base_thickness, 0]`.
pub fn generate_base(spec: &RackSpec) -> Result<TriMesh, RackError> {
    spec.validate()?;
    let t = spec.base_thickness_mm;
    let d = spec.base_depth_mm;
    let clear = spec.slot_width_mm / 2.0;
    let second = d + spec.rail_gap();
    let sockets = [(0.0 - clear, d + clear), (second - clear, second + d + clear)];
    let mut mesh = comb_prism(
        -spec.wall_mm,
        second + d + spec.wall_mm,
        &sockets,
        t,
        2.0 * t,
        -spec.wall_mm,
        spec.rack_length() + spec.wall_mm,
        Frame::ProfileY,
    );
    mesh.translate([0.0, 0.0, -2.0 * t]);
    Ok(mesh)
}

pub const STL_HEADER_LEN: usize = 80;

fn normal(a: [f32; 3], b: [f32; 3], c: [f32; 3]) -> [f32; 3] {
    let u = [b[0] - a[0], b[1] - a[1], b[2] - a[2]];
    let v = [c[0] - a[0], c[1] - a[1], c[2] - a[2]];
    let n = [
        u[1] * v[2] - u[2] * v[1],
        u[2] * v[0] - u[0] * v[2],
        u[0] * v[1] - u[1] * v[0],
    ];
    let len = (n[0] * n[0] + n[1] * n[1] + n[2] * n[2]).sqrt();
    if len > 0.0 {
        [n[0] / len, n[1] / len, n[2] / len]
    } else {
        [0.0; 3]
    }
}

/// Binary STL: 80-byte header, little-endian u32 count, then per triangle a
/// recomputed unit normal, three vertices and a zero attribute word.
pub fn emit_stl(mesh: &TriMesh, sink: &mut dyn Write) -> Result<(), RackError> {
    let count =
        u32::try_from(mesh.triangles.len()).map_err(|_| RackError::TooManyTriangles(mesh.triangles.len()))?;
    let mut buf = Vec::with_capacity(STL_HEADER_LEN + 4 + 50 * mesh.triangles.len());
    let mut header = [0u8; STL_HEADER_LEN];
    let tag = concat!("hologforge ", env!("CARGO_PKG_VERSION"), " binary STL");
    header[..tag.len()].copy_from_slice(tag.as_bytes());
    buf.extend_from_slice(&header);
    buf.extend_from_slice(&count.to_le_bytes());
    for t in &mesh.triangles {
        let [a, b, c] = t.map(|i| mesh.vertices[i].map(|x| x as f32));
        for x in normal(a, b, c).iter().chain(&a).chain(&b).chain(&c) {
            buf.extend_from_slice(&x.to_le_bytes());
        }
        buf.extend_from_slice(&0u16.to_le_bytes());
    }
    sink.write_all(&buf)?;
    Ok(())
}
