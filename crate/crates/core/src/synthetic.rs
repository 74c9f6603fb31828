//! Seeded generators for demo and test data.

use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::graph::{DynamicGraph, Edge, InteractionEvent, Node, SliceKey, TimesliceGraph};

/// Interaction events shaped like a book-series character network: seven
/// slices, a core cast active throughout, and a long tail of minor
/// characters. After keeping the top 10% of weights the graph has roughly
/// 110 nodes and 600 edges.
pub fn case_study_events(seed: u64) -> Vec<InteractionEvent> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let cast = 135usize;
    let core = 14usize;
    let slices = 7;
    let name = |i: usize| format!("c{i:03}");
    let popularity: Vec<f64> = (0..cast).map(|i| 1.0 / (1.0 + i as f64).powf(0.7)).collect();

    let mut events = Vec::new();
    for book in 1..=slices {
        let active: Vec<usize> = (0..cast)
            .filter(|&i| i < core || rng.gen_bool(0.45))
            .collect();
        let total: f64 = active.iter().map(|&i| popularity[i]).sum();
        let pick = |rng: &mut ChaCha8Rng| {
            let mut r = rng.gen::<f64>() * total;
            for &i in &active {
                r -= popularity[i];
                if r <= 0.0 {
                    return i;
                }
            }
            *active.last().expect("active cast")
        };
        for _ in 0..2200 {
            let a = pick(&mut rng);
            let b = pick(&mut rng);
            if a == b {
                continue;
            }
            // Heavy-tailed interaction counts.
            let w = (rng.gen::<f64>().powi(4) * 40.0).floor() + 1.0;
            events.push(InteractionEvent::new(name(a), name(b), SliceKey::Int(book), w));
        }
    }
    events
}

/// A graph of `nodes` nodes over `slices` slices where each slice swaps
/// `churn / 2` of its edges for new ones, so consecutive slices differ in at
/// most `churn` of their edges.
pub fn churn_graph(seed: u64, nodes: usize, edges: usize, slices: usize, churn: f64) -> DynamicGraph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let name = |i: usize| format!("n{i:03}");
    let mut current: BTreeSet<(usize, usize)> = BTreeSet::new();
    // Spanning tree first so the first slice is connected.
    for i in 1..nodes {
        let j = rng.gen_range(0..i);
        current.insert((j, i));
    }
    while current.len() < edges {
        let (a, b) = (rng.gen_range(0..nodes), rng.gen_range(0..nodes));
        if a != b {
            current.insert((a.min(b), a.max(b)));
        }
    }
    let swaps = ((churn * edges as f64) / 2.0).floor() as usize;

    let mut out = Vec::with_capacity(slices);
    for s in 0..slices {
        if s > 0 {
            let mut list: Vec<_> = current.iter().copied().collect();
            list.shuffle(&mut rng);
            for e in list.into_iter().take(swaps) {
                current.remove(&e);
            }
            let mut added = 0;
            while added < swaps {
                let (a, b) = (rng.gen_range(0..nodes), rng.gen_range(0..nodes));
                if a != b && current.insert((a.min(b), a.max(b))) {
                    added += 1;
                }
            }
        }
        let edges = current
            .iter()
            .map(|&(a, b)| Edge::new(name(a), name(b), 1.0 + rng.gen_range(0..5) as f64))
            .collect();
        out.push(TimesliceGraph::new(s, SliceKey::Int(s as i64), edges));
    }

    let used: BTreeSet<String> = out.iter().flat_map(|s| s.endpoints()).collect();
    DynamicGraph {
        nodes: used.into_iter().map(Node::new).collect(),
        slices: out,
    }
}

/// Uniform random slice over `nodes` ids with `edges` distinct edges.
pub fn random_slice(rng: &mut impl Rng, nodes: usize, edges: usize) -> TimesliceGraph {
    let mut set = BTreeSet::new();
    let max = nodes * (nodes - 1) / 2;
    while set.len() < edges.min(max) {
        let (a, b) = (rng.gen_range(0..nodes), rng.gen_range(0..nodes));
        if a != b {
            set.insert((a.min(b), a.max(b)));
        }
    }
    TimesliceGraph::new(
        0,
        SliceKey::Int(0),
        set.into_iter()
            .map(|(a, b)| Edge::new(format!("v{a:02}"), format!("v{b:02}"), rng.gen_range(1..10) as f64))
            .collect(),
    )
}

/// Writes events as `source,target,slice,weight` CSV with a header row.
pub fn write_events_csv(events: &[InteractionEvent], out: &mut dyn std::io::Write) -> std::io::Result<()> {
    writeln!(out, "source,target,slice,weight")?;
    for e in events {
        let slice = match &e.slice_key {
            SliceKey::Int(i) => i.to_string(),
            SliceKey::Text(t) => t.clone(),
        };
        writeln!(out, "{},{},{},{}", e.source, e.target, slice, e.weight)?;
    }
    Ok(())
}
