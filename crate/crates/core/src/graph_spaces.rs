//! Metric graphs with their intrinsic geodesic metric.
//!
//! A [`MetricGraph`] is a connected graph with positive edge lengths. Points
//! live on edges as [`PointOnGraph`] values (edge index plus offset), with
//! endpoint representations canonicalized to a single vertex form so that
//! equality and net deduplication are well defined.
//!
//! Distances are computed exactly (up to float rounding of edge-length sums)
//! by Dijkstra on a *split graph*: the graph with every sample point spliced
//! into its edge as an extra node.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::f64::consts::{FRAC_PI_4, PI};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::metric_core::FiniteMetricSpace;

/// Offsets closer than this to an edge endpoint collapse to the vertex.
const CANON_TOL: f64 = 1e-12;

/// Tolerance for treating two canonical points as the same sample.
const POINT_EQ_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GraphEdge {
    pub u: usize,
    pub v: usize,
    pub len: f64,
}

/// A point on a metric graph: an edge index and an offset measured from the
/// edge's `u` endpoint, in `[0, len]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PointOnGraph {
    pub edge: usize,
    pub offset: f64,
}

impl PointOnGraph {
    pub fn new(edge: usize, offset: f64) -> Self {
        Self { edge, offset }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct GraphDoc {
    vertices: Vec<String>,
    edges: Vec<GraphEdge>,
}

/// A connected metric graph: named vertices and weighted edges.
///
/// Multi-edges are allowed (they model bigons such as the figure-eight);
/// self-loops are not, so every edge has two distinct incident vertices.
#[derive(Debug, Clone, PartialEq)]
pub struct MetricGraph {
    vertices: Vec<String>,
    edges: Vec<GraphEdge>,
}

impl Serialize for MetricGraph {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        GraphDoc { vertices: self.vertices.clone(), edges: self.edges.clone() }
            .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for MetricGraph {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let doc = GraphDoc::deserialize(deserializer)?;
        MetricGraph::new(doc.vertices, doc.edges).map_err(serde::de::Error::custom)
    }
}

impl MetricGraph {
    pub fn new(vertices: Vec<String>, edges: Vec<GraphEdge>) -> Result<Self> {
        if vertices.len() < 2 || edges.is_empty() {
            // points are represented as edge offsets, so an edge-less graph
            // has no points at all
            return Err(Error::Domain("a metric graph needs at least one edge".into()));
        }
        for (i, e) in edges.iter().enumerate() {
            if e.u >= vertices.len() || e.v >= vertices.len() {
                return Err(Error::Structure(format!("edge {i} references a missing vertex")));
            }
            if e.u == e.v {
                return Err(Error::Domain(format!("edge {i} is a self-loop")));
            }
            if !(e.len > 0.0) || !e.len.is_finite() {
                return Err(Error::Domain(format!("edge {i} has nonpositive length {}", e.len)));
            }
        }
        let graph = Self { vertices, edges };
        if !graph.is_connected() {
            return Err(Error::Domain("graph is not connected".into()));
        }
        Ok(graph)
    }

    fn is_connected(&self) -> bool {
        let n = self.vertices.len();
        let mut seen = vec![false; n];
        let mut stack = vec![0usize];
        seen[0] = true;
        while let Some(v) = stack.pop() {
            for e in &self.edges {
                for (a, b) in [(e.u, e.v), (e.v, e.u)] {
                    if a == v && !seen[b] {
                        seen[b] = true;
                        stack.push(b);
                    }
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn vertex_labels(&self) -> &[String] {
        &self.vertices
    }

    pub fn edges(&self) -> &[GraphEdge] {
        &self.edges
    }

    pub fn edge(&self, i: usize) -> &GraphEdge {
        &self.edges[i]
    }

    pub fn total_length(&self) -> f64 {
        self.edges.iter().map(|e| e.len).sum()
    }

    /// Trees are recognized combinatorially: connected with
    /// `edge count = vertex count - 1`.
    pub fn is_tree(&self) -> bool {
        self.edges.len() == self.vertices.len() - 1
    }

    /// Number of independent cycles, `E - V + 1`.
    pub fn cycle_rank(&self) -> usize {
        self.edges.len() + 1 - self.vertices.len()
    }

    /// The canonical point representation of a vertex: offset 0 or `len` on
    /// the smallest incident edge.
    pub fn vertex_point(&self, v: usize) -> PointOnGraph {
        for (i, e) in self.edges.iter().enumerate() {
            if e.u == v {
                return PointOnGraph::new(i, 0.0);
            }
            if e.v == v {
                return PointOnGraph::new(i, e.len);
            }
        }
        // connected graphs with >= 2 vertices have no isolated vertex; a
        // 1-vertex graph has no points other than the vertex itself
        unreachable!("vertex {v} has no incident edge");
    }

    /// If `p` sits at an edge endpoint (within tolerance), returns that
    /// vertex.
    pub fn vertex_of_point(&self, p: PointOnGraph) -> Option<usize> {
        let e = &self.edges[p.edge];
        if p.offset.abs() <= CANON_TOL {
            Some(e.u)
        } else if (e.len - p.offset).abs() <= CANON_TOL {
            Some(e.v)
        } else {
            None
        }
    }

    /// Validates `p` and collapses endpoint representations to the canonical
    /// vertex form.
    pub fn canonicalize(&self, p: PointOnGraph) -> Result<PointOnGraph> {
        if p.edge >= self.edges.len() {
            return Err(Error::Structure(format!("point references missing edge {}", p.edge)));
        }
        let len = self.edges[p.edge].len;
        if !(-POINT_EQ_TOL..=len + POINT_EQ_TOL).contains(&p.offset) {
            return Err(Error::Domain(format!(
                "offset {} outside [0, {len}] on edge {}",
                p.offset, p.edge
            )));
        }
        let clamped = p.offset.clamp(0.0, len);
        let q = PointOnGraph::new(p.edge, clamped);
        Ok(match self.vertex_of_point(q) {
            Some(v) => self.vertex_point(v),
            None => q,
        })
    }

    /// Equality of points after canonicalization.
    pub fn points_equal(&self, p: PointOnGraph, q: PointOnGraph) -> Result<bool> {
        let p = self.canonicalize(p)?;
        let q = self.canonicalize(q)?;
        Ok(p.edge == q.edge && (p.offset - q.offset).abs() <= POINT_EQ_TOL)
    }

    /// Short printable form of a point, for labels and reports.
    pub fn describe_point(&self, p: PointOnGraph) -> String {
        match self.vertex_of_point(p) {
            Some(v) => self.vertices[v].clone(),
            None => format!("e{}@{:.9}", p.edge, p.offset),
        }
    }

    pub fn from_json_str(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("graph serialization")
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_json_str(&std::fs::read_to_string(path)?)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_json())?;
        Ok(())
    }
}

// ---------------------------------------------------------------------------
// Split graph: the graph with sample points spliced in as nodes.
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) enum NodeKind {
    Vertex(usize),
    Interior { edge: usize, offset: f64 },
}

#[derive(Debug, Clone)]
pub(crate) struct SplitGraph {
    pub(crate) kinds: Vec<NodeKind>,
    /// adjacency: (neighbor node, weight, edge id)
    pub(crate) adj: Vec<Vec<(usize, f64, usize)>>,
    pub(crate) vertex_node: Vec<usize>,
    /// node id for each input sample, in input order
    pub(crate) sample_node: Vec<usize>,
    /// per edge: interior nodes sorted by offset
    per_edge: Vec<Vec<(f64, usize)>>,
}

#[derive(Debug, Clone, Copy)]
pub(crate) struct PathSeg {
    pub(crate) from: usize,
    pub(crate) to: usize,
    pub(crate) weight: f64,
    pub(crate) edge: usize,
}

#[derive(Debug, Clone, Copy)]
struct HeapItem {
    dist: f64,
    node: usize,
}

impl PartialEq for HeapItem {
    fn eq(&self, other: &Self) -> bool {
        self.dist == other.dist && self.node == other.node
    }
}
impl Eq for HeapItem {}
impl PartialOrd for HeapItem {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for HeapItem {
    fn cmp(&self, other: &Self) -> Ordering {
        // min-heap on distance, ties by node for determinism
        other
            .dist
            .total_cmp(&self.dist)
            .then_with(|| other.node.cmp(&self.node))
    }
}

impl SplitGraph {
    pub(crate) fn new(graph: &MetricGraph, samples: &[PointOnGraph]) -> Result<Self> {
        let nv = graph.vertex_count();
        let mut kinds: Vec<NodeKind> = (0..nv).map(NodeKind::Vertex).collect();
        let vertex_node: Vec<usize> = (0..nv).collect();

        // canonicalize and bucket interior samples per edge
        let mut canonical = Vec::with_capacity(samples.len());
        let mut interior: Vec<Vec<(f64, usize)>> = vec![Vec::new(); graph.edges().len()];
        for (i, &p) in samples.iter().enumerate() {
            let c = graph.canonicalize(p)?;
            canonical.push(c);
            if graph.vertex_of_point(c).is_none() {
                interior[c.edge].push((c.offset, i));
            }
        }

        let mut per_edge: Vec<Vec<(f64, usize)>> = vec![Vec::new(); graph.edges().len()];
        let mut sample_node = vec![usize::MAX; samples.len()];
        for (e, mut bucket) in interior.into_iter().enumerate() {
            bucket.sort_by(|a, b| a.0.total_cmp(&b.0));
            let mut cluster_node = usize::MAX;
            let mut cluster_offset = f64::NEG_INFINITY;
            for (offset, sample_idx) in bucket {
                if (offset - cluster_offset).abs() > CANON_TOL {
                    cluster_node = kinds.len();
                    cluster_offset = offset;
                    kinds.push(NodeKind::Interior { edge: e, offset });
                    per_edge[e].push((offset, cluster_node));
                }
                sample_node[sample_idx] = cluster_node;
            }
        }
        for (i, &c) in canonical.iter().enumerate() {
            if let Some(v) = graph.vertex_of_point(c) {
                sample_node[i] = vertex_node[v];
            }
        }

        // chain each edge through its interior nodes
        let mut adj: Vec<Vec<(usize, f64, usize)>> = vec![Vec::new(); kinds.len()];
        for (e, edge) in graph.edges().iter().enumerate() {
            let mut chain = vec![(0.0, vertex_node[edge.u])];
            chain.extend(per_edge[e].iter().copied());
            chain.push((edge.len, vertex_node[edge.v]));
            for w in chain.windows(2) {
                let (o1, n1) = w[0];
                let (o2, n2) = w[1];
                let weight = (o2 - o1).max(0.0);
                adj[n1].push((n2, weight, e));
                adj[n2].push((n1, weight, e));
            }
        }

        Ok(Self { kinds, adj, vertex_node, sample_node, per_edge })
    }

    pub(crate) fn node_count(&self) -> usize {
        self.kinds.len()
    }

    /// Seed nodes for a point that may sit between split nodes: the nearest
    /// node(s) along its edge with the distances to them. Any path from the
    /// point passes one of the seeds.
    pub(crate) fn point_seeds(&self, graph: &MetricGraph, p: PointOnGraph) -> Result<Vec<(usize, f64)>> {
        let c = graph.canonicalize(p)?;
        if let Some(v) = graph.vertex_of_point(c) {
            return Ok(vec![(self.vertex_node[v], 0.0)]);
        }
        let edge = &graph.edges()[c.edge];
        let nodes = &self.per_edge[c.edge];
        // exact node hit
        for &(offset, node) in nodes {
            if (offset - c.offset).abs() <= CANON_TOL {
                return Ok(vec![(node, 0.0)]);
            }
        }
        let mut left = (0.0, self.vertex_node[edge.u]);
        let mut right = (edge.len, self.vertex_node[edge.v]);
        for &(offset, node) in nodes {
            if offset < c.offset && offset > left.0 {
                left = (offset, node);
            }
            if offset > c.offset && offset < right.0 {
                right = (offset, node);
            }
        }
        Ok(vec![(left.1, c.offset - left.0), (right.1, right.0 - c.offset)])
    }

    pub(crate) fn dijkstra(&self, seeds: &[(usize, f64)]) -> Vec<f64> {
        self.dijkstra_impl(seeds, None).0
    }

    pub(crate) fn dijkstra_with_prev(&self, seeds: &[(usize, f64)]) -> (Vec<f64>, Vec<(usize, usize)>) {
        let (dist, prev) = self.dijkstra_impl(seeds, Some(()));
        (dist, prev.expect("prev requested"))
    }

    fn dijkstra_impl(
        &self,
        seeds: &[(usize, f64)],
        want_prev: Option<()>,
    ) -> (Vec<f64>, Option<Vec<(usize, usize)>>) {
        let n = self.node_count();
        let mut dist = vec![f64::INFINITY; n];
        let mut prev = want_prev.map(|_| vec![(usize::MAX, usize::MAX); n]);
        let mut heap = BinaryHeap::new();
        for &(node, d) in seeds {
            if d < dist[node] {
                dist[node] = d;
                heap.push(HeapItem { dist: d, node });
            }
        }
        while let Some(HeapItem { dist: d, node }) = heap.pop() {
            if d > dist[node] {
                continue;
            }
            for &(next, weight, edge) in &self.adj[node] {
                let nd = d + weight;
                if nd < dist[next] {
                    dist[next] = nd;
                    if let Some(prev) = prev.as_mut() {
                        prev[next] = (node, edge);
                    }
                    heap.push(HeapItem { dist: nd, node: next });
                }
            }
        }
        (dist, prev)
    }

    /// Reconstructs the node path from a seed to `target` using the `prev`
    /// array of [`Self::dijkstra_with_prev`].
    pub(crate) fn path_to(&self, prev: &[(usize, usize)], target: usize) -> Vec<PathSeg> {
        let mut segs = Vec::new();
        let mut node = target;
        while prev[node].0 != usize::MAX {
            let (p, edge) = prev[node];
            let weight = self.adj[p]
                .iter()
                .find(|&&(n, _, e)| n == node && e == edge)
                .map(|&(_, w, _)| w)
                .unwrap_or(0.0);
            segs.push(PathSeg { from: p, to: node, weight, edge });
            node = p;
        }
        segs.reverse();
        segs
    }

    /// Offset of a node on a given edge.
    fn offset_on_edge(&self, graph: &MetricGraph, node: usize, edge: usize) -> f64 {
        match self.kinds[node] {
            NodeKind::Interior { edge: e, offset } => {
                debug_assert_eq!(e, edge);
                offset
            }
            NodeKind::Vertex(v) => {
                let e = &graph.edges()[edge];
                if e.u == v {
                    0.0
                } else {
                    e.len
                }
            }
        }
    }

    /// The point at arc distance `t` along a node path starting at the
    /// path's first node. `t` is clamped to the path length.
    pub(crate) fn point_along(
        &self,
        graph: &MetricGraph,
        start: usize,
        segs: &[PathSeg],
        t: f64,
    ) -> PointOnGraph {
        let start_point = |node: usize| -> PointOnGraph {
            match self.kinds[node] {
                NodeKind::Vertex(v) => graph.vertex_point(v),
                NodeKind::Interior { edge, offset } => PointOnGraph::new(edge, offset),
            }
        };
        if segs.is_empty() {
            return start_point(start);
        }
        let mut remaining = t.max(0.0);
        for seg in segs {
            if remaining <= seg.weight || std::ptr::eq(seg, segs.last().unwrap()) {
                let take = remaining.min(seg.weight);
                let o1 = self.offset_on_edge(graph, seg.from, seg.edge);
                let o2 = self.offset_on_edge(graph, seg.to, seg.edge);
                let frac = if seg.weight > 0.0 { take / seg.weight } else { 0.0 };
                let offset = o1 + (o2 - o1) * frac;
                return graph
                    .canonicalize(PointOnGraph::new(seg.edge, offset))
                    .expect("interpolated point is on its edge");
            }
            remaining -= seg.weight;
        }
        start_point(segs.last().unwrap().to)
    }
}

// ---------------------------------------------------------------------------
// Geodesic tables and sampling
// ---------------------------------------------------------------------------

/// A net of sample points on a graph together with their intrinsic distance
/// matrix.
#[derive(Debug, Clone)]
pub struct GeodesicTable {
    pub graph: MetricGraph,
    pub points: Vec<PointOnGraph>,
    pub metric: FiniteMetricSpace,
}

/// Pairwise geodesic distances between `pts`, treating each point as
/// splitting its edge. Exact for the given edge lengths.
pub fn graph_metric(graph: &MetricGraph, pts: &[PointOnGraph]) -> Result<GeodesicTable> {
    let split = SplitGraph::new(graph, pts)?;
    let n = pts.len();
    let mut dist = vec![vec![0.0; n]; n];
    for i in 0..n {
        let d = split.dijkstra(&[(split.sample_node[i], 0.0)]);
        for j in (i + 1)..n {
            let v = d[split.sample_node[j]];
            dist[i][j] = v;
            dist[j][i] = v;
        }
    }
    let labels = pts
        .iter()
        .map(|&p| graph.describe_point(graph.canonicalize(p).expect("validated above")))
        .collect();
    let metric = FiniteMetricSpace::from_parts(labels, dist)?;
    Ok(GeodesicTable { graph: graph.clone(), points: pts.to_vec(), metric })
}

/// Intrinsic distance between two arbitrary points of the graph.
pub fn point_distance(graph: &MetricGraph, p: PointOnGraph, q: PointOnGraph) -> Result<f64> {
    let table = graph_metric(graph, &[p, q])?;
    Ok(table.metric.d(0, 1))
}

/// Distances from one arbitrary point to every point of a net.
pub fn distances_from_point(
    graph: &MetricGraph,
    net: &[PointOnGraph],
    p: PointOnGraph,
) -> Result<Vec<f64>> {
    let split = SplitGraph::new(graph, net)?;
    let seeds = split.point_seeds(graph, p)?;
    let dist = split.dijkstra(&seeds);
    Ok(net.iter().enumerate().map(|(i, _)| dist[split.sample_node[i]]).collect())
}

/// An epsilon-net of the graph: all vertices, then per-edge uniform interior
/// samples at spacing `<= eps` (ceiling division). Output order is
/// deterministic: vertices by index, then edges by index with increasing
/// offset.
pub fn epsilon_net(graph: &MetricGraph, eps: f64) -> Result<Vec<PointOnGraph>> {
    if !(eps > 0.0) {
        return Err(Error::Domain(format!("epsilon must be positive, got {eps}")));
    }
    let mut net: Vec<PointOnGraph> = (0..graph.vertex_count()).map(|v| graph.vertex_point(v)).collect();
    for (i, e) in graph.edges().iter().enumerate() {
        let pieces = (e.len / eps).ceil().max(1.0) as usize;
        for j in 1..pieces {
            net.push(PointOnGraph::new(i, e.len * j as f64 / pieces as f64));
        }
    }
    Ok(net)
}

/// The geodesic circle sampled at `n >= 3` equally spaced angles:
/// `d(i, j) = (2 pi / n) * min(|i - j|, n - |i - j|)`.
pub fn circle_space(n: usize) -> Result<FiniteMetricSpace> {
    if n < 3 {
        return Err(Error::Domain(format!("circle_space needs n >= 3, got {n}")));
    }
    let step = 2.0 * PI / n as f64;
    let labels = (0..n).map(|i| format!("theta{i}")).collect();
    let dist = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let k = i.abs_diff(j);
                    step * k.min(n - k) as f64
                })
                .collect()
        })
        .collect();
    FiniteMetricSpace::from_parts(labels, dist)
}

// Vertex indices of the tripod built by `build_e` (and shared by
// `build_e_prime`).
pub const E_X_MINUS: usize = 0;
pub const E_M_MINUS: usize = 1;
pub const E_X0: usize = 2;
pub const E_M_PLUS: usize = 3;
pub const E_X_PLUS: usize = 4;
pub const E_X1: usize = 5;
/// Branch edge index in `build_e`.
pub const E_BRANCH_EDGE: usize = 4;
/// Tip of the extended branch in `build_e_prime`.
pub const E_PRIME_TIP: usize = 6;
/// Extension edge index in `build_e_prime`.
pub const E_PRIME_EXTENSION_EDGE: usize = 5;

/// The tripod with a spine of length pi (four quarter edges, midpoints kept
/// as vertices) and a quarter branch hanging from the spine midpoint. Total
/// length `5 pi / 4`.
pub fn build_e() -> MetricGraph {
    let q = FRAC_PI_4;
    MetricGraph::new(
        vec!["x-".into(), "m-".into(), "x0".into(), "m+".into(), "x+".into(), "x1".into()],
        vec![
            GraphEdge { u: E_X_MINUS, v: E_M_MINUS, len: q },
            GraphEdge { u: E_M_MINUS, v: E_X0, len: q },
            GraphEdge { u: E_X0, v: E_M_PLUS, len: q },
            GraphEdge { u: E_M_PLUS, v: E_X_PLUS, len: q },
            GraphEdge { u: E_X0, v: E_X1, len: q },
        ],
    )
    .expect("fixed construction")
}

/// The tripod of [`build_e`] with its branch extended from `pi/4` to `pi/2`;
/// the original tree embeds isometrically and the extension is the quarter
/// segment past `x1`.
pub fn build_e_prime() -> MetricGraph {
    let e = build_e();
    let mut vertices = e.vertices.clone();
    vertices.push("x1+".into());
    let mut edges = e.edges.clone();
    edges.push(GraphEdge { u: E_X1, v: E_PRIME_TIP, len: FRAC_PI_4 });
    MetricGraph::new(vertices, edges).expect("fixed construction")
}

/// Central vertex with four spokes of length `pi/4`; total length pi,
/// diameter `pi/2`. Tips are vertices `1..=4`.
pub fn build_star4() -> MetricGraph {
    let q = FRAC_PI_4;
    MetricGraph::new(
        vec!["center".into(), "p1".into(), "p2".into(), "p3".into(), "p4".into()],
        (1..=4).map(|i| GraphEdge { u: 0, v: i, len: q }).collect(),
    )
    .expect("fixed construction")
}

/// Three segments of the given lengths joined at a central vertex.
pub fn build_tripod(l1: f64, l2: f64, l3: f64) -> Result<MetricGraph> {
    for (i, l) in [l1, l2, l3].into_iter().enumerate() {
        if !(l > 0.0) {
            return Err(Error::Domain(format!("tripod leg {i} has nonpositive length {l}")));
        }
    }
    MetricGraph::new(
        vec!["center".into(), "leaf1".into(), "leaf2".into(), "leaf3".into()],
        vec![
            GraphEdge { u: 0, v: 1, len: l1 },
            GraphEdge { u: 0, v: 2, len: l2 },
            GraphEdge { u: 0, v: 3, len: l3 },
        ],
    )
}

/// A single segment of length `lambda`.
pub fn build_segment(lambda: f64) -> Result<MetricGraph> {
    if !(lambda > 0.0) {
        return Err(Error::Domain(format!("segment length must be positive, got {lambda}")));
    }
    MetricGraph::new(
        vec!["a".into(), "b".into()],
        vec![GraphEdge { u: 0, v: 1, len: lambda }],
    )
}

/// A cycle of `n >= 2` edges of equal length, vertices chained in order
/// (edge `i` joins vertices `i` and `i + 1 mod n`).
pub fn build_circle_graph(n: usize, edge_len: f64) -> Result<MetricGraph> {
    if n < 2 {
        return Err(Error::Domain(format!("circle graph needs >= 2 edges, got {n}")));
    }
    if !(edge_len > 0.0) {
        return Err(Error::Domain(format!("edge length must be positive, got {edge_len}")));
    }
    MetricGraph::new(
        (0..n).map(|i| format!("c{i}")).collect(),
        (0..n).map(|i| GraphEdge { u: i, v: (i + 1) % n, len: edge_len }).collect(),
    )
}

/// Maps an angle to the point of a chained circle graph at that arc
/// position (angle 0 is vertex 0, increasing along edge order).
pub fn circle_angle_to_point(graph: &MetricGraph, theta: f64) -> Result<PointOnGraph> {
    check_chained_circle(graph)?;
    let total = graph.total_length();
    let mut arc = theta.rem_euclid(2.0 * PI) / (2.0 * PI) * total;
    for (i, e) in graph.edges().iter().enumerate() {
        if arc <= e.len || i == graph.edges().len() - 1 {
            return graph.canonicalize(PointOnGraph::new(i, arc.min(e.len)));
        }
        arc -= e.len;
    }
    unreachable!()
}

/// Inverse of [`circle_angle_to_point`], returning an angle in `[0, 2 pi)`.
pub fn circle_point_to_angle(graph: &MetricGraph, p: PointOnGraph) -> Result<f64> {
    check_chained_circle(graph)?;
    let p = graph.canonicalize(p)?;
    let total = graph.total_length();
    let before: f64 = graph.edges()[..p.edge].iter().map(|e| e.len).sum();
    Ok(((before + p.offset) / total * 2.0 * PI).rem_euclid(2.0 * PI))
}

fn check_chained_circle(graph: &MetricGraph) -> Result<()> {
    let n = graph.edges().len();
    let chained = n >= 2
        && n == graph.vertex_count()
        && graph.edges().iter().enumerate().all(|(i, e)| e.u == i && e.v == (i + 1) % n);
    if chained {
        Ok(())
    } else {
        Err(Error::Domain("expected a chained circle graph".into()))
    }
}

/// Exact length of the shortest cycle, `None` for trees. Computed as the
/// minimum over edges `e = (u, v)` of `len(e) + d_{G - e}(u, v)`.
pub fn shortest_essential_cycle(graph: &MetricGraph) -> Option<f64> {
    if graph.is_tree() {
        return None;
    }
    let nv = graph.vertex_count();
    let mut best = f64::INFINITY;
    for skip in 0..graph.edges().len() {
        let e = &graph.edges()[skip];
        // vertex-level Dijkstra avoiding the skipped edge
        let mut dist = vec![f64::INFINITY; nv];
        let mut heap = BinaryHeap::new();
        dist[e.u] = 0.0;
        heap.push(HeapItem { dist: 0.0, node: e.u });
        while let Some(HeapItem { dist: d, node }) = heap.pop() {
            if d > dist[node] {
                continue;
            }
            for (i, edge) in graph.edges().iter().enumerate() {
                if i == skip {
                    continue;
                }
                for (a, b) in [(edge.u, edge.v), (edge.v, edge.u)] {
                    if a == node && d + edge.len < dist[b] {
                        dist[b] = d + edge.len;
                        heap.push(HeapItem { dist: dist[b], node: b });
                    }
                }
            }
        }
        best = best.min(e.len + dist[e.v]);
    }
    best.is_finite().then_some(best)
}

/// Deterministic spanning tree: BFS from vertex 0 taking edges in index
/// order. Returns the membership mask over edges.
pub(crate) fn spanning_tree(graph: &MetricGraph) -> Vec<bool> {
    let nv = graph.vertex_count();
    let mut in_tree = vec![false; graph.edges().len()];
    let mut seen = vec![false; nv];
    seen[0] = true;
    let mut frontier = vec![0usize];
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for (i, e) in graph.edges().iter().enumerate() {
            for (a, b) in [(e.u, e.v), (e.v, e.u)] {
                if frontier.contains(&a) && !seen[b] {
                    seen[b] = true;
                    in_tree[i] = true;
                    next.push(b);
                }
            }
        }
        frontier = next;
    }
    in_tree
}

/// Nearest point of the spine segment `[a, b]` to `x`, with its distance.
#[derive(Debug, Clone, Copy)]
pub struct SpineProjection {
    pub point: PointOnGraph,
    pub distance: f64,
}

/// Projects `x` onto the geodesic `[a, b]` of a tree. When two points have
/// distinct projections their distance decomposes as
/// `d(x, P(x)) + d(P(x), P(x')) + d(P(x'), x')`.
pub fn project_to_spine(
    graph: &MetricGraph,
    x: PointOnGraph,
    spine: (PointOnGraph, PointOnGraph),
) -> Result<SpineProjection> {
    if !graph.is_tree() {
        return Err(Error::Domain("spine projection requires a tree".into()));
    }
    let (a, b) = spine;
    if graph.points_equal(a, b)? {
        return Err(Error::Domain("spine endpoints must be distinct".into()));
    }
    let split = SplitGraph::new(graph, &[x, a, b])?;
    let (na, nx, nb) = (split.sample_node[1], split.sample_node[0], split.sample_node[2]);
    let (from_a, prev) = split.dijkstra_with_prev(&[(na, 0.0)]);
    let from_x = split.dijkstra(&[(nx, 0.0)]);
    let (dxa, dxb, dab) = (from_x[na], from_x[nb], from_a[nb]);
    // Gromov product in a tree: distance from `a` to the projection point
    let t = ((dab + dxa - dxb) / 2.0).clamp(0.0, dab);
    let segs = split.path_to(&prev, nb);
    let point = split.point_along(graph, na, &segs, t);
    let distance = ((dxa + dxb - dab) / 2.0).max(0.0);
    Ok(SpineProjection { point, distance })
}
