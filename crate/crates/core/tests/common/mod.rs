#![allow(dead_code)]

use std::collections::{BTreeMap, HashMap};
use std::fs::File;
use std::io::BufWriter;
use std::path::Path;

use hologforge::pipeline::PipelineConfig;
use hologforge::render::{fmt_mm, Shape, SliceDocument};
use hologforge::synthetic::{case_study_events, write_events_csv};

/// Geometry attributes of one parsed SVG element, in document order.
#[derive(Debug, Clone)]
pub struct ParsedElement {
    pub tag: String,
    pub class: String,
    pub key: Option<String>,
    pub numbers: Vec<f64>,
    pub text: Option<String>,
}

fn num(node: roxmltree::Node, attr: &str) -> f64 {
    node.attribute(attr)
        .unwrap_or_else(|| panic!("missing {attr}"))
        .parse()
        .unwrap_or_else(|_| panic!("{attr} is not a number"))
}

/// Parses a slide SVG back into its drawable elements.
pub fn parse_slide(svg: &str) -> Vec<ParsedElement> {
    let doc = roxmltree::Document::parse(svg).expect("well-formed SVG");
    let root = doc.root_element();
    assert_eq!(root.tag_name().name(), "svg");
    root.children()
        .filter(|n| n.is_element())
        .map(parse_element)
        .collect()
}

pub fn parse_element(n: roxmltree::Node) -> ParsedElement {
    let tag = n.tag_name().name().to_string();
    let numbers = match tag.as_str() {
        "circle" => vec![num(n, "cx"), num(n, "cy"), num(n, "r")],
        "line" => vec![num(n, "x1"), num(n, "y1"), num(n, "x2"), num(n, "y2")],
        "polyline" => n
            .attribute("points")
            .expect("points")
            .split([' ', ','])
            .map(|s| s.parse().expect("coordinate"))
            .collect(),
        "text" => vec![num(n, "x"), num(n, "y"), num(n, "font-size")],
        other => panic!("unexpected element <{other}>"),
    };
    ParsedElement {
        tag,
        class: n.attribute("class").expect("class").to_string(),
        key: n.attribute("data-key").map(str::to_string),
        numbers,
        text: n.text().map(str::to_string),
    }
}

/// Geometry of the in-memory element, in the same order as [`parse_element`].
pub fn model_numbers(shape: &Shape) -> (&'static str, Vec<f64>) {
    match shape {
        Shape::Circle { center, r } => ("circle", vec![center.x, center.y, *r]),
        Shape::Line { from, to } => ("line", vec![from.x, from.y, to.x, to.y]),
        Shape::Polyline { points } => ("polyline", points.iter().flat_map(|p| [p.x, p.y]).collect()),
        Shape::Text { at, font_size_mm, .. } => ("text", vec![at.x, at.y, *font_size_mm]),
    }
}

/// Checks that `svg` carries exactly the elements of `doc` with every
/// coordinate equal to its 6-decimal rendering. Returns the largest
/// absolute difference seen.
pub fn assert_round_trip(doc: &SliceDocument, svg: &str) -> f64 {
    let parsed = parse_slide(svg);
    assert_eq!(parsed.len(), doc.elements.len(), "element count");
    let mut worst: f64 = 0.0;
    for (p, e) in parsed.iter().zip(&doc.elements) {
        let (tag, numbers) = model_numbers(&e.shape);
        assert_eq!(p.tag, tag);
        assert_eq!(p.class, e.role.as_str());
        assert_eq!(p.key, e.key);
        assert_eq!(p.numbers.len(), numbers.len());
        for (a, b) in p.numbers.iter().zip(&numbers) {
            assert_eq!(fmt_mm(*a), fmt_mm(*b), "re-rendered coordinate differs");
            worst = worst.max((a - b).abs());
        }
        if let Shape::Text { content, .. } = &e.shape {
            assert_eq!(p.text.as_deref(), Some(content.as_str()));
        }
    }
    worst
}

/// Triangles of a binary STL file as f32 vertex triples.
pub fn parse_stl(bytes: &[u8]) -> Vec<[[f32; 3]; 3]> {
    assert!(bytes.len() >= 84, "STL shorter than its header");
    let n = u32::from_le_bytes(bytes[80..84].try_into().unwrap()) as usize;
    assert_eq!(bytes.len(), 84 + 50 * n, "STL length disagrees with its count");
    let f = |at: usize| f32::from_le_bytes(bytes[at..at + 4].try_into().unwrap());
    (0..n)
        .map(|t| {
            let base = 84 + 50 * t + 12;
            let mut tri = [[0f32; 3]; 3];
            for (v, vert) in tri.iter_mut().enumerate() {
                for (c, coord) in vert.iter_mut().enumerate() {
                    *coord = f(base + 12 * v + 4 * c);
                }
            }
            assert_eq!(&bytes[base + 36..base + 38], &[0, 0], "attribute word");
            tri
        })
        .collect()
}

#[derive(Debug)]
pub struct MeshCheck {
    pub components: usize,
    pub vertices: usize,
    pub edges: usize,
    pub faces: usize,
    pub euler_per_component: Vec<i64>,
}

/// Welds vertices by exact position, then checks that every undirected
/// edge is used by exactly two triangles with opposite orientation, that no
/// triangle is degenerate, and reports the Euler characteristic of every
/// connected component.
pub fn check_closed_manifold(vertices: &[[f64; 3]], triangles: &[[usize; 3]]) -> Result<MeshCheck, String> {
    let mut weld: HashMap<[u64; 3], usize> = HashMap::new();
    let id: Vec<usize> = vertices
        .iter()
        .map(|v| {
            let key = v.map(|c| (c + 0.0).to_bits());
            let next = weld.len();
            *weld.entry(key).or_insert(next)
        })
        .collect();
    let tris: Vec<[usize; 3]> = triangles.iter().map(|t| t.map(|i| id[i])).collect();

    for (n, t) in triangles.iter().enumerate() {
        let [a, b, c] = t.map(|i| vertices[i]);
        let u = [b[0] - a[0], b[1] - a[1], b[2] - a[2]];
        let v = [c[0] - a[0], c[1] - a[1], c[2] - a[2]];
        let cross = [
            u[1] * v[2] - u[2] * v[1],
            u[2] * v[0] - u[0] * v[2],
            u[0] * v[1] - u[1] * v[0],
        ];
        let area = 0.5 * (cross[0].powi(2) + cross[1].powi(2) + cross[2].powi(2)).sqrt();
        if !(area > 1e-12) {
            return Err(format!("triangle {n} is degenerate"));
        }
    }

    let mut directed: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    for t in &tris {
        for k in 0..3 {
            *directed.entry((t[k], t[(k + 1) % 3])).or_insert(0) += 1;
        }
    }
    for (&(a, b), &n) in &directed {
        if n != 1 {
            return Err(format!("directed edge {a}->{b} used {n} times"));
        }
        if directed.get(&(b, a)) != Some(&1) {
            return Err(format!("edge {a}-{b} has no opposite half"));
        }
    }

    // Components by union-find over shared vertices.
    let nv = weld.len();
    let mut parent: Vec<usize> = (0..nv).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    for t in &tris {
        for k in 1..3 {
            let (a, b) = (find(&mut parent, t[0]), find(&mut parent, t[k]));
            parent[a] = b;
        }
    }
    let mut stats: BTreeMap<usize, (i64, i64, i64)> = BTreeMap::new();
    for v in 0..nv {
        let r = find(&mut parent, v);
        stats.entry(r).or_default().0 += 1;
    }
    for (&(a, b), _) in directed.iter().filter(|((a, b), _)| a < b) {
        let _ = b;
        let r = find(&mut parent, a);
        stats.entry(r).or_default().1 += 1;
    }
    for t in &tris {
        let r = find(&mut parent, t[0]);
        stats.entry(r).or_default().2 += 1;
    }
    Ok(MeshCheck {
        components: stats.len(),
        vertices: nv,
        edges: directed.len() / 2,
        faces: tris.len(),
        euler_per_component: stats.values().map(|(v, e, f)| v - e + f).collect(),
    })
}

/// Intersections of the ray `(x, y, z) + s (1, 0, 0)` with the mesh,
/// returned as sorted x-coordinates. Triangles parallel to the ray are
/// skipped. Uses Möller-Trumbore.
pub fn ray_x_crossings(vertices: &[[f64; 3]], triangles: &[[usize; 3]], y: f64, z: f64) -> Vec<f64> {
    let origin = [0.0, y, z];
    let dir = [1.0, 0.0, 0.0];
    let mut hits = Vec::new();
    for t in triangles {
        let [a, b, c] = t.map(|i| vertices[i]);
        let e1 = [b[0] - a[0], b[1] - a[1], b[2] - a[2]];
        let e2 = [c[0] - a[0], c[1] - a[1], c[2] - a[2]];
        let p = [
            dir[1] * e2[2] - dir[2] * e2[1],
            dir[2] * e2[0] - dir[0] * e2[2],
            dir[0] * e2[1] - dir[1] * e2[0],
        ];
        let det = e1[0] * p[0] + e1[1] * p[1] + e1[2] * p[2];
        if det.abs() < 1e-12 {
            continue;
        }
        let inv = 1.0 / det;
        let s = [origin[0] - a[0], origin[1] - a[1], origin[2] - a[2]];
        let u = (s[0] * p[0] + s[1] * p[1] + s[2] * p[2]) * inv;
        if !(0.0..=1.0).contains(&u) {
            continue;
        }
        let q = [
            s[1] * e1[2] - s[2] * e1[1],
            s[2] * e1[0] - s[0] * e1[2],
            s[0] * e1[1] - s[1] * e1[0],
        ];
        let v = (dir[0] * q[0] + dir[1] * q[1] + dir[2] * q[2]) * inv;
        if v < 0.0 || u + v > 1.0 {
            continue;
        }
        let tt = (e2[0] * q[0] + e2[1] * q[1] + e2[2] * q[2]) * inv;
        hits.push(tt);
    }
    hits.sort_by(f64::total_cmp);
    // A ray through a shared diagonal hits both triangles of a quad.
    hits.dedup_by(|a, b| (*a - *b).abs() < 1e-9);
    hits
}

/// Gaps between consecutive solid intervals along a crossing list.
pub fn gaps(crossings: &[f64]) -> Vec<(f64, f64)> {
    assert!(crossings.len().is_multiple_of(2), "odd number of crossings: {crossings:?}");
    crossings[1..crossings.len() - 1]
        .chunks(2)
        .map(|w| (w[0], w[1]))
        .collect()
}

/// Writes the seeded case-study surrogate into `dir` and returns a default
/// config over it that builds into `dir/out`.
pub fn surrogate_config(dir: &Path, seed: u64) -> PipelineConfig {
    let input = dir.join("events.csv");
    let mut w = BufWriter::new(File::create(&input).expect("create events"));
    write_events_csv(&case_study_events(seed), &mut w).expect("write events");
    drop(w);
    let mut cfg = PipelineConfig::for_input(input);
    cfg.output_dir = dir.join("out");
    cfg
}
