//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails. Tolerances and runtime budgets are
//! fixed below.

mod common;

use std::collections::{BTreeMap, BTreeSet};
use std::fs;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::{assert_round_trip, check_closed_manifold, gaps, parse_stl, ray_x_crossings, surrogate_config};
use hologforge::embed::{map_to_page, PageSpec};
use hologforge::graph::{
    filter_top_percentile, select_focus, split_focus_context, DynamicGraph, Edge, FilterScope,
    FocusPartition, Node, SliceKey, TimesliceGraph,
};
use hologforge::layout::{layout_chain, layout_independent, mean_displacement, LayoutParams, Point, SliceLayout};
use hologforge::pipeline::{
    ingest, read_graph_cache, read_layout_cache, render_documents, run_pipeline, Manifest,
    RunOptions,
};
use hologforge::rack::{emit_stl, generate_rack, RackSpec, TriMesh};
use hologforge::render::{Role, Shape};
use hologforge::synthetic::{case_study_events, churn_graph, random_slice, write_events_csv};

/// Coordinate tolerance for the worked page-mapping example.
const MAPPING_TOL_MM: f64 = 1e-9;
/// Marker-to-node registration tolerance.
const REGISTRATION_TOL_MM: f64 = 1e-6;
/// Geometry round-trip bound: half a unit in the sixth decimal, plus float
/// slack for the decimal parse.
const ROUND_TRIP_TOL_MM: f64 = 5e-7 + 1e-12;
/// Anchored layouts must win in at least this many of the 50 graphs.
const ANCHOR_WINS_REQUIRED: usize = 48;
/// Largest allowed edge churn between consecutive slices.
const MAX_CHURN: f64 = 0.10;
/// Cross-section tolerance for groove width and pitch.
const GROOVE_TOL_MM: f64 = 1e-9;

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn partition_law() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut edges_seen = 0;
    for case in 0..1000 {
        let n = rng.gen_range(2..40);
        let m = rng.gen_range(0..=(n * (n - 1) / 2).min(120));
        let slice = random_slice(&mut rng, n, m);
        let graph = DynamicGraph {
            nodes: (0..n).map(|i| Node::new(format!("v{i:02}"))).collect(),
            slices: vec![slice.clone()],
        };
        let focus: Vec<String> = (0..n).filter(|_| rng.gen_bool(0.3)).map(|i| format!("v{i:02}")).collect();
        let fset: BTreeSet<&str> = focus.iter().map(String::as_str).collect();
        let partition = FocusPartition::from_focus(&graph, focus.clone()).map_err(|e| e.to_string())?;
        let (f, c) = split_focus_context(&slice, &partition).map_err(|e| e.to_string())?;

        let key = |e: &Edge| (e.u.clone(), e.v.clone());
        let all: BTreeSet<_> = slice.edges.iter().map(key).collect();
        let ef: BTreeSet<_> = f.edges.iter().map(key).collect();
        let ec: BTreeSet<_> = c.edges.iter().map(key).collect();
        ensure(ef.is_disjoint(&ec), || format!("case {case}: focus and context share an edge"))?;
        ensure(&ef | &ec == all, || format!("case {case}: union differs from the slice"))?;
        // Membership oracle: an edge is a focus edge iff both ends are focus.
        for e in &slice.edges {
            let both = fset.contains(e.u.as_str()) && fset.contains(e.v.as_str());
            ensure(both == ef.contains(&key(e)), || format!("case {case}: {}-{} misassigned", e.u, e.v))?;
        }
        edges_seen += m;
    }
    Ok(format!("1000 instances, {edges_seen} edges"))
}

fn filter_law() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for case in 0..500 {
        let m = rng.gen_range(1..300);
        let per_mille: usize = rng.gen_range(1..=1000);
        let weights: Vec<f64> = (0..m).map(|_| rng.gen_range(1..60) as f64).collect();
        let slices: Vec<TimesliceGraph> = weights
            .iter()
            .enumerate()
            .map(|(i, &w)| TimesliceGraph::new(i, SliceKey::Int(i as i64), vec![Edge::new("a", "b", w)]))
            .collect();
        let graph = DynamicGraph {
            nodes: vec![Node::new("a"), Node::new("b")],
            slices,
        };
        let out = filter_top_percentile(&graph, per_mille as f64 / 1000.0, FilterScope::Global, true)
            .map_err(|e| e.to_string())?;

        let want_n = (per_mille * m).div_ceil(1000);
        let mut sorted = weights.clone();
        sorted.sort_by(|a, b| b.total_cmp(a));
        let kept: Vec<f64> = out.slices.iter().flat_map(|s| s.edges.iter().map(|e| e.weight)).collect();
        let dropped: Vec<f64> = graph
            .slices
            .iter()
            .zip(&out.slices)
            .filter(|(_, o)| o.edges.is_empty())
            .map(|(s, _)| s.edges[0].weight)
            .collect();
        ensure(kept.len() == want_n, || format!("case {case}: kept {} of {m}, want {want_n}", kept.len()))?;
        let min_kept = kept.iter().copied().fold(f64::INFINITY, f64::min);
        let max_dropped = dropped.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        ensure(min_kept >= max_dropped, || format!("case {case}: kept {min_kept} below dropped {max_dropped}"))?;
        let mut kept_sorted = kept.clone();
        kept_sorted.sort_by(|a, b| b.total_cmp(a));
        ensure(kept_sorted[..] == sorted[..want_n], || format!("case {case}: kept multiset differs from full sort"))?;
    }
    Ok("500 multisets".into())
}

fn churn(a: &TimesliceGraph, b: &TimesliceGraph) -> f64 {
    let ka: BTreeSet<_> = a.edges.iter().map(|e| e.key()).collect();
    let kb: BTreeSet<_> = b.edges.iter().map(|e| e.key()).collect();
    ka.symmetric_difference(&kb).count() as f64 / (ka.len() + kb.len()) as f64
}

fn anchoring_benefit() -> Outcome {
    let mut wins = 0;
    let mut ratios = Vec::new();
    for g in 0..50u64 {
        let graph = churn_graph(1000 + g, 60, 90, 5, MAX_CHURN);
        ensure(graph.nodes.len() <= 60 && graph.slices.len() == 5, || format!("graph {g}: wrong shape"))?;
        for w in graph.slices.windows(2) {
            let c = churn(&w[0], &w[1]);
            ensure(c <= MAX_CHURN, || format!("graph {g}: churn {c:.3}"))?;
        }
        let focus = select_focus(&graph, 10, false).map_err(|e| e.to_string())?.partition;
        let params = LayoutParams { seed: g, ..LayoutParams::default() };
        let anchored = mean_displacement(&layout_chain(&graph, &focus, &params).map_err(|e| e.to_string())?);
        let fresh = mean_displacement(&layout_independent(&graph, &focus, &params).map_err(|e| e.to_string())?);
        if anchored < fresh {
            wins += 1;
        }
        ratios.push(anchored / fresh);
    }
    ratios.sort_by(f64::total_cmp);
    let detail = format!("anchored wins {wins}/50, median anchored/fresh displacement {:.3}", ratios[25]);
    ensure(wins >= ANCHOR_WINS_REQUIRED, || detail.clone())?;
    Ok(detail)
}

fn surrogate() -> Result<(hologforge::graph::DynamicGraph, FocusPartition), String> {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let cfg = surrogate_config(dir.path(), 7);
    let ingested = ingest(&cfg).map_err(|e| e.to_string())?;
    Ok((ingested.graph, ingested.partition))
}

fn layout_determinism() -> Outcome {
    let (graph, partition) = surrogate()?;
    let params = LayoutParams { seed: 42, ..LayoutParams::default() };
    let a = layout_chain(&graph, &partition, &params).map_err(|e| e.to_string())?;
    let b = layout_chain(&graph, &partition, &params).map_err(|e| e.to_string())?;
    let mut coords = 0;
    for (la, lb) in a.iter().zip(&b) {
        ensure(la.positions.keys().eq(lb.positions.keys()), || "node sets differ".into())?;
        for (id, p) in &la.positions {
            let q = lb.positions[id];
            for (x, y) in [(p.x, q.x), (p.y, q.y)] {
                ensure(format!("{x:.6}") == format!("{y:.6}"), || format!("{id}: {x} vs {y}"))?;
                coords += 1;
            }
        }
    }
    Ok(format!("{coords} coordinates over {} slices agree to 6 decimals", a.len()))
}

fn mapping_arithmetic() -> Outcome {
    let mut page = PageSpec::a5_landscape();
    page.margin_mm = 15.0;
    let positions: BTreeMap<String, Point> = [("lo", (0.0, 0.0)), ("hi", (100.0, 50.0)), ("mid", (50.0, 25.0)), ("corner", (100.0, 0.0))]
        .into_iter()
        .map(|(k, (x, y))| (k.to_string(), Point::new(x, y)))
        .collect();
    let (phys, _) = map_to_page(&[SliceLayout { slice_index: 0, positions }], &page, false).map_err(|e| e.to_string())?;
    let p = &phys[0].positions_mm;
    for (id, want) in [("mid", (105.0, 74.0)), ("corner", (195.0, 29.0))] {
        let got = p[id];
        ensure(
            (got.x - want.0).abs() <= MAPPING_TOL_MM && (got.y - want.1).abs() <= MAPPING_TOL_MM,
            || format!("{id} mapped to ({}, {}), want {want:?}", got.x, got.y),
        )?;
    }

    // Random clouds: containment in the margin box and a single scale factor.
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut total = 0;
    while total < 10_000 {
        let n = rng.gen_range(2..200).min(10_000 - total).max(2);
        let (cx, cy, sx, sy) = (rng.gen_range(-1e4..1e4), rng.gen_range(-1e4..1e4), rng.gen_range(1e-2..1e4), rng.gen_range(1e-2..1e4));
        let positions: BTreeMap<String, Point> = (0..n)
            .map(|i| (format!("n{i}"), Point::new(cx + sx * rng.gen::<f64>(), cy + sy * rng.gen::<f64>())))
            .collect();
        let layout = SliceLayout { slice_index: 0, positions };
        let page = PageSpec::a5_landscape();
        let (phys, t) = map_to_page(std::slice::from_ref(&layout), &page, false).map_err(|e| e.to_string())?;
        let eps = 1e-9;
        ensure(t.scale_x == t.scale_y, || "non-uniform scale".into())?;
        for (id, q) in &phys[0].positions_mm {
            ensure(
                q.x >= page.margin_mm - eps
                    && q.x <= page.width_mm - page.margin_mm + eps
                    && q.y >= page.margin_mm - eps
                    && q.y <= page.height_mm - page.margin_mm + eps,
                || format!("{id} at ({}, {}) leaves the margin box", q.x, q.y),
            )?;
        }
        // Aspect: distance ratios are preserved between a few sampled pairs.
        let ids: Vec<&String> = layout.positions.keys().collect();
        for _ in 0..10 {
            let (a, b) = (ids[rng.gen_range(0..ids.len())], ids[rng.gen_range(0..ids.len())]);
            let d = layout.positions[a].distance(layout.positions[b]);
            let d_mm = phys[0].positions_mm[a].distance(phys[0].positions_mm[b]);
            ensure((d_mm - t.scale_x * d).abs() <= 1e-9 * (1.0 + d_mm), || format!("{a}-{b} distorted"))?;
        }
        total += n;
    }
    Ok(format!("worked example within {MAPPING_TOL_MM:e} mm, {total} random points"))
}

fn overlay_registration() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let cfg = surrogate_config(dir.path(), 7);
    let ingested = ingest(&cfg).map_err(|e| e.to_string())?;
    let n_nodes = ingested.after_filter.nodes;
    let n_edges = ingested.after_filter.edges;
    ensure((90..=130).contains(&n_nodes) && (500..=700).contains(&n_edges), || {
        format!("surrogate scale off: {n_nodes} nodes, {n_edges} edges")
    })?;
    let layouts = layout_chain(&ingested.graph, &ingested.partition, &cfg.layout).map_err(|e| e.to_string())?;
    let set = render_documents(&cfg, &ingested, &layouts).map_err(|e| e.to_string())?;

    let mut markers = 0;
    for (rank, id) in ingested.partition.focus.iter().enumerate() {
        let presence: Vec<usize> = ingested
            .graph
            .slices
            .iter()
            .filter(|s| s.present.contains(id))
            .map(|s| s.index)
            .collect();
        let mine: Vec<&hologforge::render::Element> = set
            .trajectories
            .elements
            .iter()
            .filter(|e| e.key.as_deref() == Some(id))
            .collect();
        let vertices: usize = mine
            .iter()
            .filter(|e| e.role == Role::Trajectory)
            .map(|e| match &e.shape {
                Shape::Polyline { points } => points.len(),
                _ => 0,
            })
            .sum();
        ensure(vertices == presence.len(), || {
            format!("focus #{rank} {id}: {vertices} polyline vertices, present in {} slices", presence.len())
        })?;
        let centers: Vec<Point> = mine
            .iter()
            .filter(|e| e.role == Role::Marker)
            .map(|e| match &e.shape {
                Shape::Circle { center, .. } => *center,
                _ => Point::new(f64::NAN, f64::NAN),
            })
            .collect();
        ensure(centers.len() == presence.len(), || format!("{id}: {} markers", centers.len()))?;
        for (c, &s) in centers.iter().zip(&presence) {
            let node = set.focus[s]
                .with_role(Role::Node)
                .find(|e| e.key.as_deref() == Some(id))
                .ok_or_else(|| format!("{id} missing from focus slide {s}"))?;
            let Shape::Circle { center, .. } = &node.shape else {
                return Err("node is not a circle".into());
            };
            let d = c.distance(*center);
            ensure(d <= REGISTRATION_TOL_MM, || format!("{id} slice {s}: marker off by {d} mm"))?;
            markers += 1;
        }
    }
    Ok(format!(
        "{n_nodes} nodes, {n_edges} edges, {} slices, {markers} markers registered",
        ingested.graph.slices.len()
    ))
}

fn end_to_end() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let cfg = surrogate_config(dir.path(), 7);
    let report = run_pipeline(&cfg, RunOptions::default()).map_err(|e| e.to_string())?;
    let out = &cfg.output_dir;
    let count = |prefix: &str| report.files.iter().filter(|f| f.starts_with(prefix)).count();
    ensure(report.slice_count == 7, || format!("{} slices", report.slice_count))?;
    ensure(count("slices/focus_") == 7 && count("slices/context_") == 7, || "slide count".into())?;
    for f in ["overlays/trajectories.svg", "overlays/labels.svg", "preview.svg", "manifest.json"] {
        ensure(out.join(f).is_file(), || format!("{f} missing"))?;
    }
    ensure(count("sheets/") == 8, || format!("{} sheets", count("sheets/")))?;

    let manifest: Manifest = serde_json::from_slice(&fs::read(out.join("manifest.json")).map_err(|e| e.to_string())?)
        .map_err(|e| e.to_string())?;
    let listed: BTreeSet<String> = manifest.files.iter().map(|f| f.path.clone()).collect();
    let mut on_disk = BTreeSet::new();
    for sub in ["", "slices", "overlays", "sheets"] {
        for e in fs::read_dir(out.join(sub)).map_err(|e| e.to_string())? {
            let e = e.map_err(|e| e.to_string())?;
            if e.path().is_file() {
                let name = e.file_name().to_string_lossy().into_owned();
                on_disk.insert(if sub.is_empty() { name } else { format!("{sub}/{name}") });
            }
        }
    }
    ensure(listed == on_disk, || format!("manifest {listed:?} vs disk {on_disk:?}"))?;

    let snapshot = |root: &std::path::Path| -> Vec<(String, Vec<u8>)> {
        on_disk.iter().map(|f| (f.clone(), fs::read(root.join(f)).unwrap_or_default())).collect()
    };
    let first = snapshot(out);
    run_pipeline(&cfg, RunOptions { relayout: true }).map_err(|e| e.to_string())?;
    let second = snapshot(out);
    for (a, b) in first.iter().zip(&second) {
        ensure(a.1 == b.1, || format!("{} changed on rerun", a.0))?;
    }

    let ingested = read_graph_cache(out).map_err(|e| e.to_string())?;
    let layouts = read_layout_cache(out).ok_or("layouts.json unreadable")?;
    let set = render_documents(&cfg, &ingested, &layouts.layouts).map_err(|e| e.to_string())?;
    let mut docs: Vec<(String, hologforge::render::SliceDocument)> = Vec::new();
    for (i, (f, c)) in set.focus.iter().zip(&set.context).enumerate() {
        docs.push((format!("slices/focus_{i}.svg"), f.clone()));
        docs.push((format!("slices/context_{i}.svg"), c.clone()));
    }
    docs.push(("overlays/trajectories.svg".into(), set.trajectories.clone()));
    docs.push(("overlays/labels.svg".into(), set.labels.clone()));
    docs.push(("preview.svg".into(), set.preview.clone()));
    let mut worst: f64 = 0.0;
    let mut elements = 0;
    for (path, doc) in &docs {
        let svg = fs::read_to_string(out.join(path)).map_err(|e| e.to_string())?;
        let w = catch_unwind(AssertUnwindSafe(|| assert_round_trip(doc, &svg)))
            .map_err(|_| format!("{path} does not round-trip"))?;
        worst = worst.max(w);
        elements += doc.elements.len();
    }
    ensure(worst <= ROUND_TRIP_TOL_MM, || format!("round-trip error {worst}"))?;
    for j in 0..8 {
        let svg = fs::read_to_string(out.join(format!("sheets/sheet_{j}.svg"))).map_err(|e| e.to_string())?;
        roxmltree::Document::parse(&svg).map_err(|e| format!("sheet {j}: {e}"))?;
    }
    Ok(format!(
        "{} files, {elements} slide elements re-parsed, max coordinate error {worst:.1e} mm",
        listed.len()
    ))
}

fn slice_count_warning() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let build = |slices: i64, name: &str| -> Result<Vec<String>, String> {
        // Books 1..=7 of one surrogate followed by books of a second one
        // renumbered to continue the sequence.
        let mut events = case_study_events(3);
        events.extend(case_study_events(4).into_iter().filter_map(|mut e| {
            let SliceKey::Int(k) = e.slice_key else { return None };
            (k + 7 <= slices).then(|| {
                e.slice_key = SliceKey::Int(k + 7);
                e
            })
        }));
        let path = dir.path().join(format!("{name}.csv"));
        let mut f = fs::File::create(&path).map_err(|e| e.to_string())?;
        write_events_csv(&events, &mut f).map_err(|e| e.to_string())?;
        let mut cfg = hologforge::pipeline::PipelineConfig::for_input(&path);
        cfg.output_dir = dir.path().join(name);
        cfg.layout.max_ticks = 20;
        Ok(run_pipeline(&cfg, RunOptions::default()).map_err(|e| e.to_string())?.warnings)
    };
    let over = build(11, "over")?;
    let at = build(10, "at")?;
    let warning = over.iter().find(|w| w.contains("legib")).ok_or_else(|| format!("no warning in {over:?}"))?;
    ensure(warning.contains("20"), || format!("warning does not cite 20: {warning}"))?;
    ensure(!at.iter().any(|w| w.contains("legib")), || "warning at exactly 20 slides".into())?;
    Ok(format!("22 slides warn, 20 do not: \"{warning}\""))
}

fn stl(mesh: &TriMesh) -> Vec<u8> {
    let mut out = Vec::new();
    emit_stl(mesh, &mut out).expect("in-memory STL");
    out
}

fn rack_mesh() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut triangles = 0;
    for case in 0..100 {
        let pitch = rng.gen_range(3.0..20.0);
        let wall = rng.gen_range(2.0..10.0);
        let depth = rng.gen_range(6.0..20.0);
        let spec = RackSpec {
            slot_count: rng.gen_range(1..40),
            slot_pitch_mm: pitch,
            slot_width_mm: f64::min(pitch, wall) * rng.gen_range(0.2..0.8),
            slide_height_mm: rng.gen_range(60.0..200.0),
            slide_width_mm: rng.gen_range(depth + 10.0..300.0),
            wall_mm: wall,
            base_thickness_mm: rng.gen_range(1.0..8.0),
            base_depth_mm: depth,
            printer_bed_mm: None,
        };
        let mesh = generate_rack(&spec).map_err(|e| format!("case {case}: {e}"))?;
        let check = check_closed_manifold(&mesh.vertices, &mesh.triangles).map_err(|e| format!("case {case}: {e}"))?;
        ensure(check.components == 2 && check.euler_per_component.iter().all(|&x| x == 2), || {
            format!("case {case}: {check:?}")
        })?;

        let z = spec.base_thickness_mm + rng.gen_range(0.1..0.9) * spec.tooth_height();
        let y = rng.gen_range(0.1..0.9) * spec.base_depth_mm;
        let g = gaps(&ray_x_crossings(&mesh.vertices, &mesh.triangles, y, z));
        ensure(g.len() == spec.slot_count, || format!("case {case}: {} grooves, want {}", g.len(), spec.slot_count))?;
        for (i, (a, b)) in g.iter().enumerate() {
            ensure((b - a - spec.slot_width_mm).abs() <= GROOVE_TOL_MM, || format!("case {case}: groove {i} width"))?;
            if i > 0 {
                let pitch = (a + b) / 2.0 - (g[i - 1].0 + g[i - 1].1) / 2.0;
                ensure((pitch - spec.slot_pitch_mm).abs() <= GROOVE_TOL_MM, || format!("case {case}: pitch {pitch}"))?;
            }
        }

        let parsed = parse_stl(&stl(&mesh));
        ensure(parsed.len() == mesh.triangles.len(), || format!("case {case}: STL triangle count"))?;
        for (t, got) in mesh.triangles.iter().zip(&parsed) {
            for k in 0..3 {
                ensure(got[k] == mesh.vertices[t[k]].map(|c| c as f32), || format!("case {case}: STL vertex"))?;
            }
        }
        triangles += mesh.triangles.len();
    }
    let one = TriMesh {
        vertices: vec![[0.0; 3], [1.0, 0.0, 0.0], [0.0, 1.0, 0.0]],
        triangles: vec![[0, 1, 2]],
    };
    let len = stl(&one).len();
    ensure(len == 134, || format!("single-triangle STL is {len} bytes"))?;
    Ok(format!("100 specs, {triangles} triangles, single-triangle STL {len} bytes"))
}

fn main() {
    let criteria: [(&str, Duration, fn() -> Outcome); 9] = [
        ("partition law", Duration::from_secs(5), partition_law),
        ("filter law", Duration::from_secs(5), filter_law),
        ("anchoring benefit", Duration::from_secs(120), anchoring_benefit),
        ("layout determinism", Duration::from_secs(30), layout_determinism),
        ("mapping arithmetic", Duration::from_secs(5), mapping_arithmetic),
        ("overlay registration", Duration::from_secs(60), overlay_registration),
        ("end-to-end build", Duration::from_secs(120), end_to_end),
        ("slice-count warning", Duration::from_secs(30), slice_count_warning),
        ("rack mesh", Duration::from_secs(60), rack_mesh),
    ];
    std::panic::set_hook(Box::new(|_| {}));
    let mut failed = 0;
    for (name, budget, run) in criteria {
        let start = Instant::now();
        let outcome = catch_unwind(run).unwrap_or_else(|p| {
            Err(p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panicked".into()))
        });
        let elapsed = start.elapsed();
        let outcome = match outcome {
            Ok(detail) if elapsed > budget => Err(format!("{detail}; took {elapsed:.2?}, budget {budget:?}")),
            other => other,
        };
        match outcome {
            Ok(detail) => println!("PASS  {name:<22} {elapsed:>9.2?}  {detail}"),
            Err(detail) => {
                failed += 1;
                println!("FAIL  {name:<22} {elapsed:>9.2?}  {detail}");
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", 9 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
