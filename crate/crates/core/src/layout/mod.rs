//! Deterministic force-directed layout of timeslices, with each slice
//! anchored on the converged layout of the slice before it.
//!
//! The integrator uses the alpha-cooled velocity scheme of d3-force: per
//! tick the cooling parameter `alpha` decays towards zero, every force adds
//! to node velocities scaled by `alpha`, and positions advance by the damped
//! velocity.

mod quadtree;

use std::collections::{BTreeMap, BTreeSet};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{drawable_nodes, DynamicGraph, FocusPartition, NodeId, TimesliceGraph};
pub use quadtree::QuadTree;

/// pi * (3 - sqrt(5))
pub const GOLDEN_ANGLE: f64 = 2.399_963_229_728_653;

#[derive(Debug, Error)]
pub enum LayoutError {
    #[error("invalid layout parameter `{name}`: {reason}")]
    Param { name: &'static str, reason: String },
    #[error("numerical divergence at tick {tick}: node `{node}` has a non-finite position")]
    Divergence { tick: usize, node: NodeId },
    #[error("no initial position for node `{0}`")]
    MissingInit(NodeId),
    #[error("graph has no timeslices")]
    NoSlices,
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub const fn new(x: f64, y: f64) -> Self {
        Point { x, y }
    }

    pub fn distance(self, other: Point) -> f64 {
        (self.x - other.x).hypot(self.y - other.y)
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct LayoutParams {
    pub link_distance: f64,
    pub link_strength_scale: f64,
    pub repulsion_strength: f64,
    pub theta: f64,
    pub center_strength: f64,
    /// Fraction of velocity retained after each tick.
    pub velocity_decay: f64,
    pub alpha_initial: f64,
    pub alpha_min: f64,
    pub alpha_decay: f64,
    /// Zero disables integration entirely.
    pub max_ticks: usize,
    pub seed: u64,
    /// Scale spring strength by `weight / max weight` of the slice.
    pub weighted_links: bool,
}

impl Default for LayoutParams {
    fn default() -> Self {
        LayoutParams {
            link_distance: 30.0,
            link_strength_scale: 1.0,
            repulsion_strength: -30.0,
            theta: 0.9,
            center_strength: 1.0,
            velocity_decay: 0.6,
            alpha_initial: 1.0,
            alpha_min: 0.001,
            alpha_decay: 1.0 - 0.001f64.powf(1.0 / 300.0),
            max_ticks: 300,
            seed: 0,
            weighted_links: false,
        }
    }
}

impl LayoutParams {
    pub fn validate(&self) -> Result<(), LayoutError> {
        fn check(ok: bool, name: &'static str, reason: &str) -> Result<(), LayoutError> {
            if ok {
                Ok(())
            } else {
                Err(LayoutError::Param {
                    name,
                    reason: reason.to_string(),
                })
            }
        }
        check(
            self.link_distance.is_finite() && self.link_distance > 0.0,
            "link_distance",
            "must be positive",
        )?;
        check(
            self.link_strength_scale > 0.0 && self.link_strength_scale <= 1.0,
            "link_strength_scale",
            "must lie in (0, 1]",
        )?;
        check(
            self.repulsion_strength.is_finite() && self.repulsion_strength < 0.0,
            "repulsion_strength",
            "must be negative",
        )?;
        check(self.theta > 0.0 && self.theta <= 1.0, "theta", "must lie in (0, 1]")?;
        check(
            (0.0..=1.0).contains(&self.center_strength),
            "center_strength",
            "must lie in [0, 1]",
        )?;
        check(
            self.velocity_decay > 0.0 && self.velocity_decay < 1.0,
            "velocity_decay",
            "must lie in (0, 1)",
        )?;
        check(
            self.alpha_initial > 0.0 && self.alpha_initial <= 1.0,
            "alpha_initial",
            "must lie in (0, 1]",
        )?;
        check(
            self.alpha_min > 0.0 && self.alpha_min < self.alpha_initial,
            "alpha_min",
            "must be positive and below alpha_initial",
        )?;
        check(
            self.alpha_decay > 0.0 && self.alpha_decay < 1.0,
            "alpha_decay",
            "must lie in (0, 1)",
        )?;
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SliceLayout {
    pub slice_index: usize,
    pub positions: BTreeMap<NodeId, Point>,
}

impl SliceLayout {
    /// Copy with every coordinate rounded to `decimals` places through its
    /// decimal representation, so that a serialise/parse cycle is lossless.
    pub fn rounded(&self, decimals: usize) -> SliceLayout {
        let r = |v: f64| -> f64 {
            let v: f64 = format!("{v:.decimals$}").parse().expect("formatted float parses");
            if v == 0.0 {
                0.0
            } else {
                v
            }
        };
        SliceLayout {
            slice_index: self.slice_index,
            positions: self
                .positions
                .iter()
                .map(|(id, p)| (id.clone(), Point::new(r(p.x), r(p.y))))
                .collect(),
        }
    }

    pub fn centroid(&self) -> Option<Point> {
        if self.positions.is_empty() {
            return None;
        }
        let n = self.positions.len() as f64;
        let (sx, sy) = self
            .positions
            .values()
            .fold((0.0, 0.0), |(sx, sy), p| (sx + p.x, sy + p.y));
        Some(Point::new(sx / n, sy / n))
    }
}

/// Phyllotaxis placement: node `i` at radius `spacing * sqrt(i)`, angle
/// `i * GOLDEN_ANGLE`. The spiral never repeats a point, so `seed` only
/// matters if callers start it at an offset that collides with existing
/// positions.
pub fn initial_positions(
    node_ids: &[NodeId],
    params: &LayoutParams,
) -> BTreeMap<NodeId, Point> {
    let spacing = params.link_distance / 2.0;
    node_ids
        .iter()
        .enumerate()
        .map(|(i, id)| (id.clone(), spiral_point(Point::default(), spacing, i)))
        .collect()
}

fn spiral_point(center: Point, spacing: f64, i: usize) -> Point {
    let r = spacing * (i as f64).sqrt();
    let a = i as f64 * GOLDEN_ANGLE;
    Point::new(center.x + r * a.cos(), center.y + r * a.sin())
}

fn slice_rng(seed: u64, slice_index: usize) -> ChaCha8Rng {
    let mixed = seed ^ (slice_index as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    ChaCha8Rng::seed_from_u64(mixed)
}

struct Link {
    source: usize,
    target: usize,
    strength: f64,
    bias: f64,
}

/// Runs the force simulation for one slice over `drawable` nodes, starting
/// from `init`. Deterministic for fixed inputs.
pub fn simulate(
    slice: &TimesliceGraph,
    drawable: &BTreeSet<NodeId>,
    init: &BTreeMap<NodeId, Point>,
    params: &LayoutParams,
) -> Result<SliceLayout, LayoutError> {
    params.validate()?;
    let ids: Vec<&NodeId> = drawable.iter().collect();
    let mut pos: Vec<Point> = ids
        .iter()
        .map(|id| init.get(*id).copied().ok_or_else(|| LayoutError::MissingInit((*id).clone())))
        .collect::<Result<_, _>>()?;
    let index: BTreeMap<&str, usize> = ids.iter().enumerate().map(|(i, id)| (id.as_str(), i)).collect();

    let n = ids.len();
    let mut count = vec![0usize; n];
    let mut pairs = Vec::with_capacity(slice.edges.len());
    for e in &slice.edges {
        let (Some(&s), Some(&t)) = (index.get(e.u.as_str()), index.get(e.v.as_str())) else {
            continue;
        };
        count[s] += 1;
        count[t] += 1;
        pairs.push((s, t, e.weight));
    }
    let max_weight = pairs.iter().map(|p| p.2).fold(0.0, f64::max);
    let links: Vec<Link> = pairs
        .into_iter()
        .map(|(s, t, w)| {
            let mut strength = params.link_strength_scale / count[s].min(count[t]) as f64;
            if params.weighted_links && max_weight > 0.0 {
                strength *= w / max_weight;
            }
            Link {
                source: s,
                target: t,
                strength,
                bias: count[s] as f64 / (count[s] + count[t]) as f64,
            }
        })
        .collect();

    let strengths = vec![params.repulsion_strength; n];
    let theta2 = params.theta * params.theta;
    let mut vel = vec![(0.0f64, 0.0f64); n];
    let mut rng = slice_rng(params.seed, slice.index);
    let mut jiggle = move || (rng.gen::<f64>() - 0.5) * 1e-6;
    let mut alpha = params.alpha_initial;

    for tick in 0..params.max_ticks {
        if alpha < params.alpha_min {
            break;
        }
        alpha += (0.0 - alpha) * params.alpha_decay;

        for link in &links {
            let (s, t) = (link.source, link.target);
            let mut dx = pos[t].x + vel[t].0 - pos[s].x - vel[s].0;
            let mut dy = pos[t].y + vel[t].1 - pos[s].y - vel[s].1;
            if dx == 0.0 {
                dx = jiggle();
            }
            if dy == 0.0 {
                dy = jiggle();
            }
            let len = (dx * dx + dy * dy).sqrt();
            let k = (len - params.link_distance) / len * alpha * link.strength;
            dx *= k;
            dy *= k;
            vel[t].0 -= dx * link.bias;
            vel[t].1 -= dy * link.bias;
            vel[s].0 += dx * (1.0 - link.bias);
            vel[s].1 += dy * (1.0 - link.bias);
        }

        let tree = QuadTree::build(&pos, &strengths);
        for i in 0..n {
            let dv = tree.apply(i, pos[i], &strengths, theta2, alpha, &mut jiggle);
            vel[i].0 += dv.0;
            vel[i].1 += dv.1;
        }

        if params.center_strength > 0.0 && n > 0 {
            let (sx, sy) = pos.iter().fold((0.0, 0.0), |(sx, sy), p| (sx + p.x, sy + p.y));
            let shift_x = sx / n as f64 * params.center_strength;
            let shift_y = sy / n as f64 * params.center_strength;
            for p in &mut pos {
                p.x -= shift_x;
                p.y -= shift_y;
            }
        }

        for (i, p) in pos.iter_mut().enumerate() {
            vel[i].0 *= params.velocity_decay;
            vel[i].1 *= params.velocity_decay;
            p.x += vel[i].0;
            p.y += vel[i].1;
            if !p.is_finite() {
                return Err(LayoutError::Divergence {
                    tick,
                    node: ids[i].clone(),
                });
            }
        }
    }

    Ok(SliceLayout {
        slice_index: slice.index,
        positions: ids.into_iter().cloned().zip(pos).collect(),
    })
}

/// Initial positions for slice `t > 0`: persisting nodes keep their previous
/// position; a newcomer goes to the centroid of its already placed
/// neighbours plus a small seeded offset, or onto an outer turn of the
/// phyllotaxis spiral around the current centroid when it has none.
pub fn anchored_init(
    slice: &TimesliceGraph,
    drawable: &BTreeSet<NodeId>,
    previous: &SliceLayout,
    params: &LayoutParams,
) -> BTreeMap<NodeId, Point> {
    let mut placed: BTreeMap<NodeId, Point> = drawable
        .iter()
        .filter_map(|id| previous.positions.get(id).map(|p| (id.clone(), *p)))
        .collect();
    let persisting = placed.len();
    let center = SliceLayout {
        slice_index: slice.index,
        positions: placed.clone(),
    }
    .centroid()
    .unwrap_or_default();

    let mut rng = slice_rng(params.seed.wrapping_add(1), slice.index);
    let jitter = params.link_distance / 10.0;
    let spacing = params.link_distance / 2.0;
    let mut lonely = 0usize;
    for id in drawable {
        if placed.contains_key(id) {
            continue;
        }
        let neighbours: Vec<Point> = slice
            .edges
            .iter()
            .filter(|e| e.touches(id))
            .filter_map(|e| {
                let other = if &e.u == id { &e.v } else { &e.u };
                placed.get(other).copied()
            })
            .collect();
        let p = if neighbours.is_empty() {
            let p = spiral_point(center, spacing, persisting + lonely);
            lonely += 1;
            p
        } else {
            let k = neighbours.len() as f64;
            let cx = neighbours.iter().map(|p| p.x).sum::<f64>() / k;
            let cy = neighbours.iter().map(|p| p.y).sum::<f64>() / k;
            let angle = rng.gen::<f64>() * std::f64::consts::TAU;
            Point::new(cx + jitter * angle.cos(), cy + jitter * angle.sin())
        };
        placed.insert(id.clone(), p);
    }
    placed
}

/// Lays out every slice, initialising slice `t` from slice `t - 1`.
pub fn layout_chain(
    graph: &DynamicGraph,
    partition: &FocusPartition,
    params: &LayoutParams,
) -> Result<Vec<SliceLayout>, LayoutError> {
    params.validate()?;
    if graph.slices.is_empty() {
        return Err(LayoutError::NoSlices);
    }
    let mut layouts: Vec<SliceLayout> = Vec::with_capacity(graph.slices.len());
    for slice in &graph.slices {
        let drawable = drawable_nodes(slice, partition);
        let init = match layouts.last() {
            None => fresh_init(&drawable, params),
            Some(prev) => anchored_init(slice, &drawable, prev, params),
        };
        layouts.push(simulate(slice, &drawable, &init, params)?);
    }
    Ok(layouts)
}

/// Baseline without anchoring: each slice starts from a fresh phyllotaxis
/// placement.
pub fn layout_independent(
    graph: &DynamicGraph,
    partition: &FocusPartition,
    params: &LayoutParams,
) -> Result<Vec<SliceLayout>, LayoutError> {
    params.validate()?;
    if graph.slices.is_empty() {
        return Err(LayoutError::NoSlices);
    }
    graph
        .slices
        .iter()
        .map(|slice| {
            let drawable = drawable_nodes(slice, partition);
            simulate(slice, &drawable, &fresh_init(&drawable, params), params)
        })
        .collect()
}

fn fresh_init(drawable: &BTreeSet<NodeId>, params: &LayoutParams) -> BTreeMap<NodeId, Point> {
    let ids: Vec<NodeId> = drawable.iter().cloned().collect();
    initial_positions(&ids, params)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrajectoryStats {
    pub path_length: BTreeMap<NodeId, f64>,
    /// Entry `t` covers the transition from slice `t` to slice `t + 1`.
    pub transition_mean_displacement: Vec<f64>,
}

/// Per-transition mean displacement of the nodes accepted by `include` that
/// appear in both slices of the transition (0 when none do).
pub fn transition_displacements(
    layouts: &[SliceLayout],
    include: impl Fn(&str) -> bool,
) -> Vec<f64> {
    layouts
        .windows(2)
        .map(|w| {
            let (mut sum, mut n) = (0.0, 0usize);
            for (id, p) in &w[0].positions {
                if !include(id) {
                    continue;
                }
                if let Some(q) = w[1].positions.get(id) {
                    sum += p.distance(*q);
                    n += 1;
                }
            }
            if n == 0 {
                0.0
            } else {
                sum / n as f64
            }
        })
        .collect()
}

/// Mean over all transitions of the all-node mean displacement.
pub fn mean_displacement(layouts: &[SliceLayout]) -> f64 {
    let per = transition_displacements(layouts, |_| true);
    if per.is_empty() {
        0.0
    } else {
        per.iter().sum::<f64>() / per.len() as f64
    }
}

/// Path length of each focus node across consecutive slices. A slice where
/// the node is absent breaks the path.
pub fn trajectory_stats(layouts: &[SliceLayout], focus: &BTreeSet<NodeId>) -> TrajectoryStats {
    let mut path_length: BTreeMap<NodeId, f64> =
        focus.iter().map(|id| (id.clone(), 0.0)).collect();
    for w in layouts.windows(2) {
        for (id, len) in path_length.iter_mut() {
            if let (Some(a), Some(b)) = (w[0].positions.get(id), w[1].positions.get(id)) {
                *len += a.distance(*b);
            }
        }
    }
    TrajectoryStats {
        path_length,
        transition_mean_displacement: transition_displacements(layouts, |id| focus.contains(id)),
    }
}
