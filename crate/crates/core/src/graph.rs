//! Time-sliced dynamic graphs: ingestion, aggregation, edge filtering,
//! focus selection and the focus/context split of each timeslice.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::io::Read;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub type NodeId = String;

#[derive(Debug, Error)]
pub enum GraphError {
    #[error("parse error at {location}: {message}")]
    Parse { location: String, message: String },
    #[error("self-loop at {location}: node `{node}` interacts with itself")]
    SelfLoop { location: String, node: String },
    #[error("mixed slice keys: `{integer}` is an integer key but `{text}` is not")]
    MixedSliceKeys { integer: String, text: String },
    #[error("no interaction events; use DynamicGraph::empty() for an intentionally empty graph")]
    EmptyInput,
    #[error("keep_fraction must lie in (0, 1], got {0}")]
    KeepFraction(f64),
    #[error("focus k must be at least 1")]
    ZeroFocus,
    #[error("node `{0}` is not covered by the focus partition")]
    NotInPartition(String),
    #[error("node `{0}` is not in the graph")]
    UnknownNode(String),
    #[error("i/o error while reading input: {0}")]
    Io(#[from] std::io::Error),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Node {
    pub id: NodeId,
    pub label: String,
}

impl Node {
    pub fn new(id: impl Into<String>) -> Self {
        let id = id.into();
        Node {
            label: id.clone(),
            id,
        }
    }
}

/// Discrete time key of a slice. Integer keys order numerically, text keys
/// lexicographically; a single graph never mixes the two.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(untagged)]
pub enum SliceKey {
    Int(i64),
    Text(String),
}

impl SliceKey {
    /// Interprets a textual field: anything that parses as an `i64` is an
    /// integer key.
    pub fn parse(raw: &str) -> Self {
        let trimmed = raw.trim();
        match trimmed.parse::<i64>() {
            Ok(v) => SliceKey::Int(v),
            Err(_) => SliceKey::Text(trimmed.to_string()),
        }
    }
}

impl Ord for SliceKey {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (SliceKey::Int(a), SliceKey::Int(b)) => a.cmp(b),
            (SliceKey::Text(a), SliceKey::Text(b)) => a.cmp(b),
            (SliceKey::Int(_), SliceKey::Text(_)) => Ordering::Less,
            (SliceKey::Text(_), SliceKey::Int(_)) => Ordering::Greater,
        }
    }
}

impl PartialOrd for SliceKey {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for SliceKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SliceKey::Int(v) => write!(f, "{v}"),
            SliceKey::Text(s) => f.write_str(s),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct InteractionEvent {
    pub source: NodeId,
    pub target: NodeId,
    pub slice_key: SliceKey,
    pub weight: f64,
}

impl InteractionEvent {
    pub fn new(
        source: impl Into<String>,
        target: impl Into<String>,
        slice_key: SliceKey,
        weight: f64,
    ) -> Self {
        InteractionEvent {
            source: source.into(),
            target: target.into(),
            slice_key,
            weight,
        }
    }
}

/// Undirected weighted edge, stored with `u < v`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Edge {
    pub u: NodeId,
    pub v: NodeId,
    pub weight: f64,
}

impl Edge {
    /// Builds an edge in canonical order. Panics on a self-loop.
    pub fn new(a: impl Into<String>, b: impl Into<String>, weight: f64) -> Self {
        let (a, b) = (a.into(), b.into());
        assert_ne!(a, b, "self-loops are not edges");
        let (u, v) = if a < b { (a, b) } else { (b, a) };
        Edge { u, v, weight }
    }

    pub fn key(&self) -> (&str, &str) {
        (&self.u, &self.v)
    }

    pub fn touches(&self, id: &str) -> bool {
        self.u == id || self.v == id
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TimesliceGraph {
    pub index: usize,
    pub slice_key: SliceKey,
    /// Sorted by `(u, v)`, no duplicates.
    pub edges: Vec<Edge>,
    /// Nodes that occur in this timeslice. Starts as the edge endpoints at
    /// aggregation; filtering may leave some of them without edges here.
    pub present: BTreeSet<NodeId>,
}

impl TimesliceGraph {
    pub fn new(index: usize, slice_key: SliceKey, mut edges: Vec<Edge>) -> Self {
        edges.sort_by(|a, b| a.key().cmp(&b.key()));
        edges.dedup_by(|a, b| a.key() == b.key());
        let present = edges
            .iter()
            .flat_map(|e| [e.u.clone(), e.v.clone()])
            .collect();
        TimesliceGraph {
            index,
            slice_key,
            edges,
            present,
        }
    }

    pub fn endpoints(&self) -> BTreeSet<NodeId> {
        self.edges
            .iter()
            .flat_map(|e| [e.u.clone(), e.v.clone()])
            .collect()
    }

    pub fn edge(&self, u: &str, v: &str) -> Option<&Edge> {
        let key = if u < v { (u, v) } else { (v, u) };
        self.edges
            .binary_search_by(|e| e.key().cmp(&key))
            .ok()
            .map(|i| &self.edges[i])
    }

    pub fn weight_range(&self) -> Option<(f64, f64)> {
        weight_range(self.edges.iter())
    }
}

fn weight_range<'a>(edges: impl Iterator<Item = &'a Edge>) -> Option<(f64, f64)> {
    edges.fold(None, |acc, e| match acc {
        None => Some((e.weight, e.weight)),
        Some((lo, hi)) => Some((lo.min(e.weight), hi.max(e.weight))),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DynamicGraph {
    /// Registry ordered by id.
    pub nodes: Vec<Node>,
    pub slices: Vec<TimesliceGraph>,
}

impl DynamicGraph {
    pub fn empty() -> Self {
        DynamicGraph {
            nodes: Vec::new(),
            slices: Vec::new(),
        }
    }

    /// Adds a node to the registry (no-op if present). Used for nodes that
    /// carry no edges at all.
    pub fn declare_node(&mut self, node: Node) {
        match self.nodes.binary_search_by(|n| n.id.cmp(&node.id)) {
            Ok(_) => {}
            Err(i) => self.nodes.insert(i, node),
        }
    }

    pub fn node(&self, id: &str) -> Option<&Node> {
        self.nodes
            .binary_search_by(|n| n.id.as_str().cmp(id))
            .ok()
            .map(|i| &self.nodes[i])
    }

    pub fn node_ids(&self) -> impl Iterator<Item = &str> {
        self.nodes.iter().map(|n| n.id.as_str())
    }

    pub fn edge_count(&self) -> usize {
        self.slices.iter().map(|s| s.edges.len()).sum()
    }

    /// Global weight extrema over every slice.
    pub fn weight_range(&self) -> Option<(f64, f64)> {
        weight_range(self.slices.iter().flat_map(|s| s.edges.iter()))
    }

    /// Replaces node labels from an id → label map; ids not in the map keep
    /// their current label.
    pub fn apply_labels(&mut self, labels: &HashMap<String, String>) {
        for node in &mut self.nodes {
            if let Some(l) = labels.get(&node.id).filter(|l| !l.is_empty()) {
                node.label = l.clone();
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum InputFormat {
    Csv,
    Json,
}

#[derive(Deserialize)]
struct JsonRecord {
    source: String,
    target: String,
    slice: serde_json::Value,
    #[serde(default)]
    weight: Option<f64>,
}

pub fn parse_events(
    mut input: impl Read,
    format: InputFormat,
) -> Result<Vec<InteractionEvent>, GraphError> {
    let mut buf = String::new();
    input.read_to_string(&mut buf)?;
    let events = match format {
        InputFormat::Csv => parse_csv(&buf)?,
        InputFormat::Json => parse_json(&buf)?,
    };
    check_key_kinds(&events)?;
    Ok(events)
}

fn parse_csv(text: &str) -> Result<Vec<InteractionEvent>, GraphError> {
    if text.trim().is_empty() {
        return Ok(Vec::new());
    }
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let mut events = Vec::new();
    let mut header_seen = false;
    for (i, record) in reader.records().enumerate() {
        let line = format!("line {}", i + 1);
        let record = record.map_err(|e| GraphError::Parse {
            location: line.clone(),
            message: e.to_string(),
        })?;
        if record.iter().all(|f| f.is_empty()) {
            continue;
        }
        if !header_seen && i == 0 && record.get(0) == Some("source") {
            header_seen = true;
            let expected = ["source", "target", "slice", "weight"];
            let ok = record.len() >= 3
                && record.len() <= 4
                && record.iter().zip(expected).all(|(a, b)| a == b);
            if !ok {
                return Err(GraphError::Parse {
                    location: line,
                    message: "header must be `source,target,slice[,weight]`".into(),
                });
            }
            continue;
        }
        if record.len() < 3 || record.len() > 4 {
            return Err(GraphError::Parse {
                location: line,
                message: format!("expected 3 or 4 fields, found {}", record.len()),
            });
        }
        let weight = match record.get(3) {
            None | Some("") => 1.0,
            Some(w) => w.parse::<f64>().map_err(|_| GraphError::Parse {
                location: line.clone(),
                message: format!("weight `{w}` is not a number"),
            })?,
        };
        let event = InteractionEvent::new(
            &record[0],
            &record[1],
            SliceKey::parse(&record[2]),
            weight,
        );
        validate_event(&event, &line)?;
        events.push(event);
    }
    Ok(events)
}

fn parse_json(text: &str) -> Result<Vec<InteractionEvent>, GraphError> {
    if text.trim().is_empty() {
        return Ok(Vec::new());
    }
    let values: Vec<serde_json::Value> =
        serde_json::from_str(text).map_err(|e| GraphError::Parse {
            location: format!("line {}", e.line()),
            message: e.to_string(),
        })?;
    let mut events = Vec::with_capacity(values.len());
    for (i, value) in values.into_iter().enumerate() {
        let location = format!("record {}", i + 1);
        let rec: JsonRecord = serde_json::from_value(value).map_err(|e| GraphError::Parse {
            location: location.clone(),
            message: e.to_string(),
        })?;
        let slice_key = match &rec.slice {
            serde_json::Value::Number(n) => match n.as_i64() {
                Some(v) => SliceKey::Int(v),
                None => {
                    return Err(GraphError::Parse {
                        location,
                        message: format!("slice key {n} is not an integer"),
                    })
                }
            },
            serde_json::Value::String(s) => SliceKey::parse(s),
            other => {
                return Err(GraphError::Parse {
                    location,
                    message: format!("slice key must be a string or integer, got {other}"),
                })
            }
        };
        let event = InteractionEvent::new(
            rec.source.trim(),
            rec.target.trim(),
            slice_key,
            rec.weight.unwrap_or(1.0),
        );
        validate_event(&event, &location)?;
        events.push(event);
    }
    Ok(events)
}

fn validate_event(event: &InteractionEvent, location: &str) -> Result<(), GraphError> {
    if event.source.is_empty() || event.target.is_empty() {
        return Err(GraphError::Parse {
            location: location.to_string(),
            message: "empty node id".into(),
        });
    }
    if event.source == event.target {
        return Err(GraphError::SelfLoop {
            location: location.to_string(),
            node: event.source.clone(),
        });
    }
    if !event.weight.is_finite() || event.weight < 0.0 {
        return Err(GraphError::Parse {
            location: location.to_string(),
            message: format!("weight {} must be a non-negative number", event.weight),
        });
    }
    Ok(())
}

fn check_key_kinds(events: &[InteractionEvent]) -> Result<(), GraphError> {
    let int = events.iter().find(|e| matches!(e.slice_key, SliceKey::Int(_)));
    let text = events.iter().find(|e| matches!(e.slice_key, SliceKey::Text(_)));
    match (int, text) {
        (Some(i), Some(t)) => Err(GraphError::MixedSliceKeys {
            integer: i.slice_key.to_string(),
            text: t.slice_key.to_string(),
        }),
        _ => Ok(()),
    }
}

/// Sums events into one timeslice per distinct key. Zero-weight pairs
/// register their endpoints but produce no edge.
pub fn aggregate(events: &[InteractionEvent]) -> Result<DynamicGraph, GraphError> {
    if events.is_empty() {
        return Err(GraphError::EmptyInput);
    }
    check_key_kinds(events)?;
    for e in events {
        validate_event(e, "event")?;
    }

    // Weights are summed in sorted order so the result does not depend on
    // the order of the input records.
    let mut per_slice: BTreeMap<&SliceKey, BTreeMap<(&str, &str), Vec<f64>>> = BTreeMap::new();
    let mut present: BTreeMap<&SliceKey, BTreeSet<&str>> = BTreeMap::new();
    for e in events {
        let (u, v) = if e.source < e.target {
            (e.source.as_str(), e.target.as_str())
        } else {
            (e.target.as_str(), e.source.as_str())
        };
        per_slice.entry(&e.slice_key).or_default().entry((u, v)).or_default().push(e.weight);
        present.entry(&e.slice_key).or_default().extend([u, v]);
    }

    let nodes: BTreeSet<&str> = present.values().flatten().copied().collect();
    let slices = per_slice
        .into_iter()
        .enumerate()
        .map(|(index, (key, pairs))| {
            let edges = pairs
                .into_iter()
                .map(|(pair, mut ws)| {
                    ws.sort_by(f64::total_cmp);
                    (pair, ws.iter().sum::<f64>())
                })
                .filter(|&(_, w)| w > 0.0)
                .map(|((u, v), w)| Edge {
                    u: u.to_string(),
                    v: v.to_string(),
                    weight: w,
                })
                .collect();
            let mut slice = TimesliceGraph::new(index, key.clone(), edges);
            slice.present = present[key].iter().map(|s| s.to_string()).collect();
            slice
        })
        .collect();

    Ok(DynamicGraph {
        nodes: nodes.into_iter().map(Node::new).collect(),
        slices,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FilterScope {
    #[default]
    Global,
    PerSlice,
}

/// Number of items kept when retaining `keep_fraction` of `m`.
pub fn retained_count(keep_fraction: f64, m: usize) -> usize {
    // Guard against products like 0.1 * 20 = 2.0000000000000004.
    let raw = keep_fraction * m as f64;
    let rounded = raw.round();
    let k = if (raw - rounded).abs() < 1e-9 {
        rounded
    } else {
        raw.ceil()
    };
    (k as usize).min(m)
}

/// Keeps the highest-weight `ceil(keep_fraction * m)` edges, globally or per
/// slice. Ties fall back to slice index, then `u`, then `v`.
pub fn filter_top_percentile(
    graph: &DynamicGraph,
    keep_fraction: f64,
    scope: FilterScope,
    keep_isolated: bool,
) -> Result<DynamicGraph, GraphError> {
    if !(keep_fraction > 0.0 && keep_fraction <= 1.0) {
        return Err(GraphError::KeepFraction(keep_fraction));
    }

    fn take(mut pool: Vec<(usize, &Edge)>, keep_fraction: f64) -> Vec<(usize, &str, &str)> {
        pool.sort_by(|a, b| {
            b.1.weight
                .total_cmp(&a.1.weight)
                .then(a.0.cmp(&b.0))
                .then(a.1.u.cmp(&b.1.u))
                .then(a.1.v.cmp(&b.1.v))
        });
        let n = retained_count(keep_fraction, pool.len());
        pool.into_iter().take(n).map(|(s, e)| (s, e.u.as_str(), e.v.as_str())).collect()
    }

    let mut keep: BTreeSet<(usize, &str, &str)> = BTreeSet::new();
    match scope {
        FilterScope::Global => {
            let pool = graph
                .slices
                .iter()
                .flat_map(|s| s.edges.iter().map(move |e| (s.index, e)))
                .collect();
            keep.extend(take(pool, keep_fraction));
        }
        FilterScope::PerSlice => {
            for s in &graph.slices {
                keep.extend(take(s.edges.iter().map(|e| (s.index, e)).collect(), keep_fraction));
            }
        }
    }

    let mut slices: Vec<TimesliceGraph> = graph
        .slices
        .iter()
        .map(|s| {
            let edges = s
                .edges
                .iter()
                .filter(|e| keep.contains(&(s.index, e.u.as_str(), e.v.as_str())))
                .cloned()
                .collect();
            TimesliceGraph {
                index: s.index,
                slice_key: s.slice_key.clone(),
                edges,
                present: s.present.clone(),
            }
        })
        .collect();

    let nodes = if keep_isolated {
        graph.nodes.clone()
    } else {
        let connected: BTreeSet<String> = slices
            .iter()
            .flat_map(|s| s.edges.iter().flat_map(|e| [e.u.clone(), e.v.clone()]))
            .collect();
        let kept: Vec<Node> = graph
            .nodes
            .iter()
            .filter(|n| connected.contains(&n.id))
            .cloned()
            .collect();
        for s in &mut slices {
            s.present.retain(|id| connected.contains(id));
        }
        kept
    };

    Ok(DynamicGraph { nodes, slices })
}

/// Unweighted degree in the deduplicated super graph.
pub fn degree_centrality(graph: &DynamicGraph) -> BTreeMap<NodeId, usize> {
    let mut super_edges: BTreeSet<(&str, &str)> = BTreeSet::new();
    for s in &graph.slices {
        super_edges.extend(s.edges.iter().map(|e| e.key()));
    }
    let mut degree: BTreeMap<NodeId, usize> =
        graph.nodes.iter().map(|n| (n.id.clone(), 0)).collect();
    for (u, v) in super_edges {
        *degree.entry(u.to_string()).or_insert(0) += 1;
        *degree.entry(v.to_string()).or_insert(0) += 1;
    }
    degree
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FocusPartition {
    /// Focus ids in rank order; this order fixes palette assignment.
    pub focus: Vec<NodeId>,
    pub context: BTreeSet<NodeId>,
}

impl FocusPartition {
    /// Partition with the given focus ids (in order) and every other graph
    /// node as context.
    pub fn from_focus(graph: &DynamicGraph, focus: Vec<NodeId>) -> Result<Self, GraphError> {
        for id in &focus {
            if graph.node(id).is_none() {
                return Err(GraphError::UnknownNode(id.clone()));
            }
        }
        let mut seen = BTreeSet::new();
        let focus: Vec<NodeId> = focus.into_iter().filter(|id| seen.insert(id.clone())).collect();
        let context = graph
            .node_ids()
            .filter(|id| !seen.contains(*id))
            .map(str::to_string)
            .collect();
        Ok(FocusPartition { focus, context })
    }

    pub fn is_focus(&self, id: &str) -> bool {
        self.focus.iter().any(|f| f == id)
    }

    pub fn focus_set(&self) -> BTreeSet<NodeId> {
        self.focus.iter().cloned().collect()
    }

    /// Position of a focus node in the focus ordering.
    pub fn focus_rank(&self, id: &str) -> Option<usize> {
        self.focus.iter().position(|f| f == id)
    }

    fn covers(&self, id: &str) -> bool {
        self.context.contains(id) || self.is_focus(id)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FocusSelection {
    pub partition: FocusPartition,
    pub centrality: BTreeMap<NodeId, usize>,
    pub warnings: Vec<String>,
}

/// Picks the top-`k` nodes by degree centrality (ties by id), optionally
/// restricted to nodes that have an edge in every slice.
pub fn select_focus(
    graph: &DynamicGraph,
    k: usize,
    require_all_slices: bool,
) -> Result<FocusSelection, GraphError> {
    if k == 0 {
        return Err(GraphError::ZeroFocus);
    }
    let centrality = degree_centrality(graph);
    let candidates: Vec<&str> = if require_all_slices {
        let per_slice: Vec<BTreeSet<NodeId>> = graph.slices.iter().map(|s| s.endpoints()).collect();
        graph
            .node_ids()
            .filter(|id| per_slice.iter().all(|s| s.contains(*id)))
            .collect()
    } else {
        graph.node_ids().collect()
    };

    let mut ranked = candidates;
    ranked.sort_by(|a, b| centrality[*b].cmp(&centrality[*a]).then(a.cmp(b)));
    let mut warnings = Vec::new();
    if ranked.len() < k {
        warnings.push(format!(
            "only {} focus candidates available (requested {k}){}",
            ranked.len(),
            if require_all_slices {
                "; candidates must have an edge in every slice"
            } else {
                ""
            }
        ));
    }
    let focus: Vec<NodeId> = ranked.into_iter().take(k).map(str::to_string).collect();
    let partition = FocusPartition::from_focus(graph, focus)?;
    Ok(FocusSelection {
        partition,
        centrality,
        warnings,
    })
}

/// Splits a slice into the focus subgraph (edges inside the focus set, plus
/// every focus node present in the slice) and the context subgraph (edges
/// touching a context node).
pub fn split_focus_context(
    slice: &TimesliceGraph,
    partition: &FocusPartition,
) -> Result<(TimesliceGraph, TimesliceGraph), GraphError> {
    for id in slice.endpoints().iter().chain(slice.present.iter()) {
        if !partition.covers(id) {
            return Err(GraphError::NotInPartition(id.clone()));
        }
    }
    let (focus_edges, context_edges): (Vec<Edge>, Vec<Edge>) = slice
        .edges
        .iter()
        .cloned()
        .partition(|e| partition.is_focus(&e.u) && partition.is_focus(&e.v));

    let mut focus = TimesliceGraph::new(slice.index, slice.slice_key.clone(), focus_edges);
    focus.present.extend(
        slice
            .present
            .iter()
            .filter(|id| partition.is_focus(id))
            .cloned(),
    );
    let context = TimesliceGraph::new(slice.index, slice.slice_key.clone(), context_edges);
    Ok((focus, context))
}

/// Nodes that get a position in a slice's layout: every edge endpoint plus
/// every focus node present in the slice.
pub fn drawable_nodes(slice: &TimesliceGraph, partition: &FocusPartition) -> BTreeSet<NodeId> {
    let mut nodes = slice.endpoints();
    nodes.extend(
        slice
            .present
            .iter()
            .filter(|id| partition.is_focus(id))
            .cloned(),
    );
    nodes
}
