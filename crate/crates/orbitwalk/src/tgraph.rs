//! Temporal graphs and time-respecting walks.
//!
//! A temporal graph is a fixed vertex set `0..n` together with one snapshot
//! edge set per time step `1..=lifetime`. Snapshots are stored once as
//! [`Layer`]s and the per-step assignment is a head sequence followed by a
//! repeating cycle, so periodic instances with quadratic lifetimes stay small.
//!
//! Time convention: a walk whose `start_time` is `t` occupies `positions[j]`
//! at the beginning of step `t + j`. The move from `positions[j]` to
//! `positions[j + 1]` either waits or traverses an edge of the snapshot at
//! step `t + j`, so the last usable step is `lifetime` and a walk may end at
//! the beginning of step `lifetime + 1`.

use fixedbitset::FixedBitSet;
use serde::Serialize;
use std::collections::HashMap;
use std::fmt;
use std::io::{BufRead, Write};
use thiserror::Error;

use crate::autgroup::Permutation;

/// One snapshot graph, stored as adjacency bit rows.
#[derive(Clone, PartialEq, Eq)]
pub struct Layer {
    n: usize,
    adj: Vec<FixedBitSet>,
    edge_count: usize,
}

impl Layer {
    pub fn new(n: usize, edges: &[(usize, usize)]) -> Self {
        let mut adj = vec![FixedBitSet::with_capacity(n); n];
        let mut edge_count = 0;
        for &(u, v) in edges {
            assert!(u < n && v < n && u != v, "edge ({u},{v}) out of range for n={n}");
            if !adj[u].contains(v) {
                adj[u].insert(v);
                adj[v].insert(u);
                edge_count += 1;
            }
        }
        Layer { n, adj, edge_count }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj[u].contains(v)
    }

    pub fn neighbors(&self, v: usize) -> &FixedBitSet {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].count_ones(..)
    }

    /// Edges as `(u, v)` pairs with `u < v`, ascending.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(self.edge_count);
        for u in 0..self.n {
            for v in self.adj[u].ones() {
                if u < v {
                    out.push((u, v));
                }
            }
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        if self.n == 0 {
            return true;
        }
        let mut seen = FixedBitSet::with_capacity(self.n);
        seen.insert(0);
        let mut stack = vec![0];
        let mut count = 1;
        while let Some(u) = stack.pop() {
            for v in self.adj[u].ones() {
                if !seen.contains(v) {
                    seen.insert(v);
                    count += 1;
                    stack.push(v);
                }
            }
        }
        count == self.n
    }

    /// Image of this layer under the vertex relabeling `image`.
    pub fn relabeled(&self, image: &[usize]) -> Layer {
        let mut adj = vec![FixedBitSet::with_capacity(self.n); self.n];
        for u in 0..self.n {
            for v in self.adj[u].ones() {
                adj[image[u]].insert(image[v]);
            }
        }
        Layer { n: self.n, adj, edge_count: self.edge_count }
    }

    fn canonical_edges_key(&self) -> Vec<(u32, u32)> {
        self.edges().iter().map(|&(u, v)| (u as u32, v as u32)).collect()
    }
}

impl fmt::Debug for Layer {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Layer(n={}, edges={:?})", self.n, self.edges())
    }
}

/// A vertex set evolving over `1..=lifetime` discrete steps.
#[derive(Clone, Debug)]
pub struct TemporalGraph {
    n: usize,
    lifetime: u64,
    layers: Vec<Layer>,
    /// Layer index per step for the first `head.len()` steps.
    head: Vec<u32>,
    /// After the head, steps repeat this pattern until `lifetime`.
    cycle: Vec<u32>,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum BuildError {
    #[error("vertex count must be positive")]
    EmptyVertexSet,
    #[error("lifetime must be positive")]
    EmptyLifetime,
    #[error("schedule covers {covered} steps but lifetime is {lifetime}")]
    ScheduleTooShort { covered: u64, lifetime: u64 },
    #[error("schedule references layer {id} but only {count} layers exist")]
    BadLayerRef { id: usize, count: usize },
}

impl TemporalGraph {
    /// Builds a graph from explicit per-step edge lists. Identical steps share
    /// one layer.
    pub fn from_step_edges(n: usize, steps: &[Vec<(usize, usize)>]) -> Result<Self, BuildError> {
        let mut layers: Vec<Layer> = Vec::new();
        let mut index: HashMap<Vec<(u32, u32)>, u32> = HashMap::new();
        let mut head = Vec::with_capacity(steps.len());
        for edges in steps {
            let layer = Layer::new(n, edges);
            let key = layer.canonical_edges_key();
            let id = *index.entry(key).or_insert_with(|| {
                layers.push(layer);
                (layers.len() - 1) as u32
            });
            head.push(id);
        }
        Self::from_parts(n, steps.len() as u64, layers, head, Vec::new())
    }

    /// Builds a graph from shared layers plus a head/cycle schedule.
    pub fn from_parts(
        n: usize,
        lifetime: u64,
        layers: Vec<Layer>,
        mut head: Vec<u32>,
        mut cycle: Vec<u32>,
    ) -> Result<Self, BuildError> {
        if n == 0 {
            return Err(BuildError::EmptyVertexSet);
        }
        if lifetime == 0 {
            return Err(BuildError::EmptyLifetime);
        }
        if (head.len() as u64) > lifetime {
            head.truncate(lifetime as usize);
        }
        if (head.len() as u64) == lifetime {
            cycle.clear();
        } else if cycle.is_empty() {
            return Err(BuildError::ScheduleTooShort { covered: head.len() as u64, lifetime });
        } else if lifetime - (head.len() as u64) < cycle.len() as u64 {
            // Short remainder: materialize it so every retained layer is used.
            let rest = (lifetime - head.len() as u64) as usize;
            head.extend_from_slice(&cycle[..rest]);
            cycle.clear();
        }
        for &id in head.iter().chain(cycle.iter()) {
            if id as usize >= layers.len() {
                return Err(BuildError::BadLayerRef { id: id as usize, count: layers.len() });
            }
        }
        let mut g = TemporalGraph { n, lifetime, layers, head, cycle };
        g.trim_unused_layers();
        Ok(g)
    }

    /// Drops layers no step refers to and renumbers the schedule. Keeps the
    /// invariant that every layer occurs at some step, which later lets layer
    /// membership stand in for the full step set of a vertex pair.
    fn trim_unused_layers(&mut self) {
        let mut used = vec![false; self.layers.len()];
        for &id in self.head.iter().chain(self.cycle.iter()) {
            used[id as usize] = true;
        }
        if used.iter().all(|&u| u) {
            return;
        }
        let mut remap = vec![u32::MAX; self.layers.len()];
        let mut kept = Vec::new();
        for (i, layer) in self.layers.drain(..).enumerate() {
            if used[i] {
                remap[i] = kept.len() as u32;
                kept.push(layer);
            }
        }
        self.layers = kept;
        for id in self.head.iter_mut().chain(self.cycle.iter_mut()) {
            *id = remap[*id as usize];
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn lifetime(&self) -> u64 {
        self.lifetime
    }

    pub fn layers(&self) -> &[Layer] {
        &self.layers
    }

    /// Layer index in effect at step `t` (1-based, `t <= lifetime`).
    pub fn layer_index_at(&self, t: u64) -> usize {
        assert!(t >= 1 && t <= self.lifetime, "step {t} outside 1..={}", self.lifetime);
        let idx = t - 1;
        if (idx as usize) < self.head.len() {
            self.head[idx as usize] as usize
        } else {
            let off = (idx - self.head.len() as u64) % self.cycle.len() as u64;
            self.cycle[off as usize] as usize
        }
    }

    pub fn layer_at(&self, t: u64) -> &Layer {
        &self.layers[self.layer_index_at(t)]
    }

    pub fn has_edge(&self, t: u64, u: usize, v: usize) -> bool {
        self.layer_at(t).has_edge(u, v)
    }

    /// Earliest step at which each layer occurs.
    pub fn first_step_of_layers(&self) -> Vec<u64> {
        let mut first = vec![u64::MAX; self.layers.len()];
        for (i, &id) in self.head.iter().enumerate() {
            let t = i as u64 + 1;
            if first[id as usize] == u64::MAX {
                first[id as usize] = t;
            }
        }
        for (i, &id) in self.cycle.iter().enumerate() {
            let t = self.head.len() as u64 + i as u64 + 1;
            if t <= self.lifetime && first[id as usize] == u64::MAX {
                first[id as usize] = t;
            }
        }
        debug_assert!(first.iter().all(|&t| t != u64::MAX));
        first
    }

    /// Runs of consecutive steps sharing a layer, as `(first_step, len, layer)`.
    /// The iterator is lazy; with a cyclic schedule it can be very long.
    pub fn runs(&self) -> impl Iterator<Item = (u64, u64, usize)> + '_ {
        RunIter { g: self, next_t: 1 }
    }

    /// Image of the whole temporal graph under a vertex relabeling.
    pub fn relabeled(&self, sigma: &Permutation) -> TemporalGraph {
        let image = sigma.as_slice();
        assert_eq!(image.len(), self.n);
        TemporalGraph {
            n: self.n,
            lifetime: self.lifetime,
            layers: self.layers.iter().map(|l| l.relabeled(image)).collect(),
            head: self.head.clone(),
            cycle: self.cycle.clone(),
        }
    }

    /// Writes the canonical text form: header `n lifetime`, then per step a
    /// header `t m_t` followed by `m_t` lines `u v` with `u < v`.
    pub fn write_to(&self, w: &mut impl Write) -> std::io::Result<()> {
        writeln!(w, "{} {}", self.n, self.lifetime)?;
        for t in 1..=self.lifetime {
            let layer = self.layer_at(t);
            writeln!(w, "{} {}", t, layer.edge_count())?;
            for (u, v) in layer.edges() {
                writeln!(w, "{u} {v}")?;
            }
        }
        Ok(())
    }
}

struct RunIter<'a> {
    g: &'a TemporalGraph,
    next_t: u64,
}

impl Iterator for RunIter<'_> {
    type Item = (u64, u64, usize);

    fn next(&mut self) -> Option<(u64, u64, usize)> {
        if self.next_t > self.g.lifetime {
            return None;
        }
        let start = self.next_t;
        let layer = self.g.layer_index_at(start);
        let mut end = start;
        while end < self.g.lifetime && self.g.layer_index_at(end + 1) == layer {
            end += 1;
        }
        self.next_t = end + 1;
        Some((start, end - start + 1, layer))
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ParseError {
    #[error("line {line}: expected '{expected}'")]
    Malformed { line: usize, expected: &'static str },
    #[error("line {line}: step header for step {expected} expected")]
    StepHeader { line: usize, expected: u64 },
    #[error("line {line}: vertex {v} out of range for n={n}")]
    VertexRange { line: usize, v: usize, n: usize },
    #[error("line {line}: edge endpoints must satisfy u < v")]
    EdgeOrder { line: usize },
    #[error("line {line}: duplicate edge ({u},{v})")]
    DuplicateEdge { line: usize, u: usize, v: usize },
    #[error("unexpected end of input at line {line}")]
    UnexpectedEof { line: usize },
    #[error("line {line}: trailing data after final step")]
    TrailingData { line: usize },
    #[error("line {1}: {0}")]
    Build(BuildError, usize),
    #[error("read failed: {0}")]
    Io(String),
}

/// Parses the canonical text form produced by [`TemporalGraph::write_to`].
pub fn parse_temporal_graph(reader: impl BufRead) -> Result<TemporalGraph, ParseError> {
    let mut lines = reader.lines();
    let mut line_no = 0usize;
    let mut next_line = |line_no: &mut usize| -> Result<Option<String>, ParseError> {
        match lines.next() {
            None => Ok(None),
            Some(Err(e)) => Err(ParseError::Io(e.to_string())),
            Some(Ok(l)) => {
                *line_no += 1;
                Ok(Some(l))
            }
        }
    };

    let header = next_line(&mut line_no)?.ok_or(ParseError::UnexpectedEof { line: 1 })?;
    let mut it = header.split_whitespace();
    let n: usize = it
        .next()
        .and_then(|s| s.parse().ok())
        .ok_or(ParseError::Malformed { line: line_no, expected: "n lifetime" })?;
    let lifetime: u64 = it
        .next()
        .and_then(|s| s.parse().ok())
        .ok_or(ParseError::Malformed { line: line_no, expected: "n lifetime" })?;
    if it.next().is_some() {
        return Err(ParseError::Malformed { line: line_no, expected: "n lifetime" });
    }
    if n == 0 {
        return Err(ParseError::Build(BuildError::EmptyVertexSet, line_no));
    }
    if lifetime == 0 {
        return Err(ParseError::Build(BuildError::EmptyLifetime, line_no));
    }

    let mut steps: Vec<Vec<(usize, usize)>> = Vec::new();
    for t in 1..=lifetime {
        let line =
            next_line(&mut line_no)?.ok_or(ParseError::UnexpectedEof { line: line_no + 1 })?;
        let mut it = line.split_whitespace();
        let (step, m): (u64, usize) = match (
            it.next().and_then(|s| s.parse().ok()),
            it.next().and_then(|s| s.parse().ok()),
            it.next(),
        ) {
            (Some(a), Some(b), None) => (a, b),
            _ => return Err(ParseError::Malformed { line: line_no, expected: "t m_t" }),
        };
        if step != t {
            return Err(ParseError::StepHeader { line: line_no, expected: t });
        }
        let mut edges = Vec::with_capacity(m);
        let mut seen = std::collections::HashSet::new();
        for _ in 0..m {
            let line =
                next_line(&mut line_no)?.ok_or(ParseError::UnexpectedEof { line: line_no + 1 })?;
            let mut it = line.split_whitespace();
            let (u, v): (usize, usize) = match (
                it.next().and_then(|s| s.parse().ok()),
                it.next().and_then(|s| s.parse().ok()),
                it.next(),
            ) {
                (Some(a), Some(b), None) => (a, b),
                _ => return Err(ParseError::Malformed { line: line_no, expected: "u v" }),
            };
            if u >= n || v >= n {
                let bad = if u >= n { u } else { v };
                return Err(ParseError::VertexRange { line: line_no, v: bad, n });
            }
            if u >= v {
                return Err(ParseError::EdgeOrder { line: line_no });
            }
            if !seen.insert((u, v)) {
                return Err(ParseError::DuplicateEdge { line: line_no, u, v });
            }
            edges.push((u, v));
        }
        steps.push(edges);
    }
    if next_line(&mut line_no)?.is_some() {
        return Err(ParseError::TrailingData { line: line_no });
    }
    TemporalGraph::from_step_edges(n, &steps).map_err(|e| ParseError::Build(e, line_no))
}

/// Per-step connectivity summary for a temporal graph.
#[derive(Debug, Clone)]
pub struct ConnectivityReport {
    per_layer: Vec<bool>,
    pub connected: bool,
    pub first_disconnected_step: Option<u64>,
}

impl ConnectivityReport {
    pub fn is_step_connected(&self, g: &TemporalGraph, t: u64) -> bool {
        self.per_layer[g.layer_index_at(t)]
    }
}

/// Checks every snapshot for connectivity. Each distinct layer is checked
/// once, so this stays cheap for long periodic schedules.
pub fn validate_connected(g: &TemporalGraph) -> ConnectivityReport {
    let per_layer: Vec<bool> = g.layers.iter().map(|l| l.is_connected()).collect();
    let connected = per_layer.iter().all(|&c| c);
    let first_disconnected_step = if connected {
        None
    } else {
        let firsts = g.first_step_of_layers();
        per_layer
            .iter()
            .enumerate()
            .filter(|(_, &c)| !c)
            .map(|(i, _)| firsts[i])
            .min()
    };
    ConnectivityReport { per_layer, connected, first_disconnected_step }
}

/// A time-respecting walk. See the module docs for the time convention.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TemporalWalk {
    pub start_time: u64,
    pub positions: Vec<usize>,
}

impl TemporalWalk {
    pub fn single(v: usize, t: u64) -> Self {
        TemporalWalk { start_time: t, positions: vec![v] }
    }

    pub fn span(&self) -> u64 {
        (self.positions.len() - 1) as u64
    }

    /// Beginning-of-step index at which the walk rests after its last move.
    pub fn end_time(&self) -> u64 {
        self.start_time + self.span()
    }

    pub fn start_vertex(&self) -> usize {
        self.positions[0]
    }

    pub fn end_vertex(&self) -> usize {
        *self.positions.last().unwrap()
    }

    /// Extends the walk by waiting until the beginning of step `t`.
    pub fn wait_until(&mut self, t: u64) {
        assert!(t >= self.end_time(), "cannot wait into the past");
        let last = self.end_vertex();
        let extra = (t - self.end_time()) as usize;
        self.positions.extend(std::iter::repeat(last).take(extra));
    }

    /// Position at the beginning of step `t`, if the walk covers it.
    pub fn position_at(&self, t: u64) -> Option<usize> {
        if t < self.start_time || t > self.end_time() {
            return None;
        }
        Some(self.positions[(t - self.start_time) as usize])
    }

    /// Serializes as `start_time` followed by the positions, one line.
    pub fn to_line(&self) -> String {
        let mut s = self.start_time.to_string();
        for p in &self.positions {
            s.push(' ');
            s.push_str(&p.to_string());
        }
        s
    }
}

/// Checks that `w` is a valid walk of `g`: every position in range, every
/// transition either a wait or an edge of the snapshot in effect, and no move
/// scheduled after the lifetime.
pub fn validate_walk(g: &TemporalGraph, w: &TemporalWalk) -> bool {
    if w.positions.is_empty() || w.start_time < 1 {
        return false;
    }
    if w.positions.iter().any(|&p| p >= g.n) {
        return false;
    }
    if w.span() > 0 && w.end_time() > g.lifetime + 1 {
        return false;
    }
    for j in 0..w.positions.len() - 1 {
        let (a, b) = (w.positions[j], w.positions[j + 1]);
        if a == b {
            continue;
        }
        let step = w.start_time + j as u64;
        if !g.has_edge(step, a, b) {
            return false;
        }
    }
    true
}

/// Maps a walk through a graph symmetry. The image walk keeps the schedule,
/// so it is valid whenever `sigma` preserves every snapshot.
pub fn apply_automorphism_to_walk(sigma: &Permutation, w: &TemporalWalk) -> TemporalWalk {
    TemporalWalk {
        start_time: w.start_time,
        positions: w.positions.iter().map(|&p| sigma.apply(p)).collect(),
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum WalkError {
    #[error("vertex {v} unreachable from {u} within lifetime (start step {t0})")]
    Unreachable { u: usize, v: usize, t0: u64 },
    #[error("start step {t0} outside 1..={lifetime}")]
    BadStartTime { t0: u64, lifetime: u64 },
    #[error("walks do not join: first ends at ({v1}, {t1}), second starts at ({v2}, {t2})")]
    Disjoint { v1: usize, t1: u64, v2: usize, t2: u64 },
}

/// Vertices reachable from `u` by walks that start at the beginning of step
/// `t` and move only during steps `t..t2-1`. `t2 = t` yields `{u}`; `t2` may
/// be `lifetime + 1`.
pub fn reach_set(g: &TemporalGraph, u: usize, t: u64, t2: u64) -> FixedBitSet {
    assert!(1 <= t && t <= t2 && t2 <= g.lifetime + 1, "reach window {t}..{t2} out of range");
    assert!(u < g.n);
    let mut reached = FixedBitSet::with_capacity(g.n);
    reached.insert(u);
    for step in t..t2 {
        // Waiting keeps old vertices usable and the edge set changes per
        // step, so every reached vertex is part of the frontier every step.
        let layer = g.layer_at(step);
        let mut grow = reached.clone();
        for v in reached.ones() {
            grow.union_with(layer.neighbors(v));
        }
        reached = grow;
        if reached.count_ones(..) == g.n {
            break;
        }
    }
    reached
}

/// Breadth-first sweep recording, for each reached vertex, its arrival step
/// and predecessor, for walk reconstruction.
pub(crate) struct SweepTrace {
    pub start: usize,
    pub t0: u64,
    pub arrival: Vec<u64>,
    pub pred: Vec<usize>,
    reached: FixedBitSet,
}

impl SweepTrace {
    pub fn new(n: usize, start: usize, t0: u64) -> Self {
        let mut reached = FixedBitSet::with_capacity(n);
        reached.insert(start);
        let mut arrival = vec![u64::MAX; n];
        arrival[start] = t0;
        SweepTrace { start, t0, arrival, pred: vec![usize::MAX; n], reached }
    }

    pub fn reached(&self, v: usize) -> bool {
        self.reached.contains(v)
    }

    pub fn count(&self) -> usize {
        self.reached.count_ones(..)
    }

    /// Advances the sweep through step `step`; returns vertices added.
    pub fn advance(&mut self, layer: &Layer, step: u64) -> Vec<usize> {
        let mut added = Vec::new();
        for v in self.reached.clone().ones() {
            for w in layer.neighbors(v).ones() {
                if !self.reached.contains(w) {
                    self.reached.insert(w);
                    self.arrival[w] = step + 1;
                    self.pred[w] = v;
                    added.push(w);
                }
            }
        }
        added
    }

    /// Advances through step `step` crossing only edges whose endpoints lie
    /// in different classes of `class_of`; returns vertices added.
    pub fn advance_across(&mut self, layer: &Layer, step: u64, class_of: &[usize]) -> Vec<usize> {
        let mut added = Vec::new();
        for v in self.reached.clone().ones() {
            for w in layer.neighbors(v).ones() {
                if class_of[w] != class_of[v] && !self.reached.contains(w) {
                    self.reached.insert(w);
                    self.arrival[w] = step + 1;
                    self.pred[w] = v;
                    added.push(w);
                }
            }
        }
        added
    }

    /// Reconstructs a foremost walk from the sweep start to `v`, waiting at
    /// intermediate vertices while their outgoing edge is absent.
    pub fn walk_to(&self, v: usize) -> TemporalWalk {
        assert!(self.reached(v), "no recorded walk to {v}");
        let mut stations = Vec::new();
        let mut cur = v;
        while cur != self.start {
            stations.push((cur, self.arrival[cur]));
            cur = self.pred[cur];
        }
        stations.push((self.start, self.t0));
        stations.reverse();
        let mut walk = TemporalWalk::single(self.start, self.t0);
        for &(vertex, arrive) in &stations[1..] {
            walk.wait_until(arrive - 1);
            walk.positions.push(vertex);
        }
        debug_assert_eq!(walk.end_time(), self.arrival[v]);
        walk
    }
}

/// Earliest-arrival walk from `u` to `v` starting at the beginning of step
/// `t0`. Waiting is allowed; the arrival step is minimal.
pub fn foremost_walk(
    g: &TemporalGraph,
    u: usize,
    v: usize,
    t0: u64,
) -> Result<TemporalWalk, WalkError> {
    if t0 < 1 || t0 > g.lifetime + 1 {
        return Err(WalkError::BadStartTime { t0, lifetime: g.lifetime });
    }
    assert!(u < g.n && v < g.n);
    if u == v {
        return Ok(TemporalWalk::single(u, t0));
    }
    let mut trace = SweepTrace::new(g.n, u, t0);
    let mut step = t0;
    while step <= g.lifetime {
        let added = trace.advance(g.layer_at(step), step);
        if trace.reached(v) {
            let walk = trace.walk_to(v);
            // With every swept snapshot connected the reachable set grows
            // each step, so arrival takes at most n - 1 steps.
            debug_assert!(
                walk.span() <= (g.n - 1) as u64
                    || (t0..step + 1).any(|s| !g.layer_at(s).is_connected())
            );
            return Ok(walk);
        }
        if added.is_empty() && trace.count() == g.n {
            break;
        }
        step += 1;
    }
    Err(WalkError::Unreachable { u, v, t0 })
}

/// Joins two walks where the second starts exactly where and when the first
/// ends.
pub fn concat_walks(
    g: &TemporalGraph,
    w1: &TemporalWalk,
    w2: &TemporalWalk,
) -> Result<TemporalWalk, WalkError> {
    if w1.end_time() != w2.start_time || w1.end_vertex() != w2.start_vertex() {
        return Err(WalkError::Disjoint {
            v1: w1.end_vertex(),
            t1: w1.end_time(),
            v2: w2.start_vertex(),
            t2: w2.start_time,
        });
    }
    let mut positions = w1.positions.clone();
    positions.extend_from_slice(&w2.positions[1..]);
    let joined = TemporalWalk { start_time: w1.start_time, positions };
    debug_assert!(
        !(validate_walk(g, w1) && validate_walk(g, w2)) || validate_walk(g, &joined)
    );
    Ok(joined)
}
