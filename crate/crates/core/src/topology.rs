//! Loops on metric graphs, their free-group classes, and loop transfer
//! across a glued space.
//!
//! Homotopy on a graph is decided combinatorially: fix a spanning tree, read
//! off the signed crossings of non-tree edges along the loop, and reduce the
//! word freely. The word is empty exactly when the loop is nulhomotopic.
//!
//! [`transfer_loop`] is the constructive half of the gluing story: given two
//! graph nets glued at Hausdorff distance below `D`, any loop in one part is
//! shadowed by a loop in the other part staying within `2 D` of it. The
//! certificate records the measured gap so the bound is checked on every run.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gh_solver::GluedSpace;
use crate::graph_spaces::{
    shortest_essential_cycle, spanning_tree, GeodesicTable, MetricGraph, NodeKind, PathSeg,
    PointOnGraph, SplitGraph,
};

const TOL: f64 = 1e-9;
/// Subdivision cap for the transfer construction.
const MAX_SUBDIVISION: usize = 1 << 16;

/// A sampled closed path: `points[0]` is the basepoint and the loop closes
/// from the last sample back to the first. Consecutive samples (including
/// the wrap) are at intrinsic distance at most `step_bound`.
#[derive(Debug, Clone)]
pub struct LoopPath {
    pub points: Vec<PointOnGraph>,
    pub step_bound: f64,
    /// Largest measured consecutive gap.
    pub max_gap: f64,
}

#[derive(Debug, Serialize, Deserialize)]
struct LoopDoc {
    points: Vec<PointOnGraph>,
    #[serde(default)]
    step_bound: Option<f64>,
}

impl LoopPath {
    pub fn new(graph: &MetricGraph, points: Vec<PointOnGraph>, step_bound: f64) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::Domain("a loop needs at least one sample".into()));
        }
        let mut canonical = points
            .into_iter()
            .map(|p| graph.canonicalize(p))
            .collect::<Result<Vec<_>>>()?;
        if canonical.len() > 1 {
            let first = canonical[0];
            if graph.points_equal(first, *canonical.last().unwrap())? {
                canonical.pop();
            }
        }
        let max_gap = Self::measure_max_gap(graph, &canonical)?;
        if max_gap > step_bound + TOL {
            return Err(Error::Domain(format!(
                "loop gap {max_gap} exceeds the declared step bound {step_bound}"
            )));
        }
        Ok(Self { points: canonical, step_bound, max_gap })
    }

    fn measure_max_gap(graph: &MetricGraph, points: &[PointOnGraph]) -> Result<f64> {
        if points.len() < 2 {
            return Ok(0.0);
        }
        let split = SplitGraph::new(graph, points)?;
        let mut worst = 0.0_f64;
        for k in 0..points.len() {
            let next = (k + 1) % points.len();
            let dist = split.dijkstra(&[(split.sample_node[k], 0.0)]);
            worst = worst.max(dist[split.sample_node[next]]);
        }
        Ok(worst)
    }

    pub fn basepoint(&self) -> PointOnGraph {
        self.points[0]
    }

    pub fn sample_count(&self) -> usize {
        self.points.len()
    }

    pub fn from_json_str(graph: &MetricGraph, text: &str) -> Result<Self> {
        let doc: LoopDoc = serde_json::from_str(text)?;
        let bound = doc.step_bound.unwrap_or(f64::INFINITY);
        let mut lp = Self::new(graph, doc.points, bound)?;
        if doc.step_bound.is_none() {
            lp.step_bound = lp.max_gap + TOL;
        }
        Ok(lp)
    }

    pub fn to_json(&self) -> String {
        let doc = LoopDoc { points: self.points.clone(), step_bound: Some(self.step_bound) };
        serde_json::to_string_pretty(&doc).expect("loop serialization")
    }
}

/// A reduced word in the free generators of the graph's fundamental group
/// (one generator per non-tree edge, sign +1 for a `u -> v` crossing).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FreeWord {
    letters: Vec<(usize, i8)>,
}

impl FreeWord {
    pub fn empty() -> Self {
        Self { letters: Vec::new() }
    }

    /// Free reduction: adjacent inverse pairs cancel until none remain.
    pub fn from_letters(seq: impl IntoIterator<Item = (usize, i8)>) -> Self {
        let mut stack: Vec<(usize, i8)> = Vec::new();
        for (g, s) in seq {
            if let Some(&(tg, ts)) = stack.last() {
                if tg == g && ts == -s {
                    stack.pop();
                    continue;
                }
            }
            stack.push((g, s));
        }
        Self { letters: stack }
    }

    pub fn letters(&self) -> &[(usize, i8)] {
        &self.letters
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }
}

impl std::fmt::Display for FreeWord {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.letters.is_empty() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self
            .letters
            .iter()
            .map(|&(g, s)| if s > 0 { format!("e{g}") } else { format!("e{g}^-1") })
            .collect();
        write!(f, "{}", parts.join(" "))
    }
}

/// Classifies a loop in the free fundamental group of the graph.
///
/// Generators are the non-tree edges of the deterministic spanning tree.
/// Sampling must be fine enough that consecutive samples are joined by a
/// unique shortest path: gaps at or above half the shortest essential cycle
/// are rejected as ambiguous.
pub fn loop_class(graph: &MetricGraph, lp: &LoopPath) -> Result<FreeWord> {
    if let Some(girth) = shortest_essential_cycle(graph) {
        if lp.max_gap > girth / 2.0 - TOL {
            return Err(Error::Ambiguity(format!(
                "loop gap {} reaches half the shortest essential cycle {girth}",
                lp.max_gap
            )));
        }
    }
    let in_tree = spanning_tree(graph);

    // stitch the per-gap shortest paths into one cyclic segment sequence
    let m = lp.points.len();
    let split = SplitGraph::new(graph, &lp.points)?;
    let mut segs: Vec<PathSeg> = Vec::new();
    if m > 1 {
        for k in 0..m {
            let next = (k + 1) % m;
            let (_, prev) = split.dijkstra_with_prev(&[(split.sample_node[k], 0.0)]);
            segs.extend(split.path_to(&prev, split.sample_node[next]));
        }
    }
    if segs.is_empty() {
        return Ok(FreeWord::empty());
    }

    // rotate the cyclic sequence to start at a vertex so partial edge
    // traversals do not straddle the seam
    let Some(first_vertex) = segs
        .iter()
        .position(|s| matches!(split.kinds[s.from], NodeKind::Vertex(_)))
    else {
        // the whole loop lives inside one open edge
        return Ok(FreeWord::empty());
    };
    segs.rotate_left(first_vertex);

    let mut letters: Vec<(usize, i8)> = Vec::new();
    // a pending traversal: the edge we are inside and the vertex we entered
    // it from
    let mut pending: Option<(usize, usize)> = None;
    for seg in &segs {
        let from = split.kinds[seg.from];
        let to = split.kinds[seg.to];
        match (from, to) {
            (NodeKind::Vertex(a), NodeKind::Vertex(b)) => {
                let e = graph.edge(seg.edge);
                debug_assert!((a, b) == (e.u, e.v) || (a, b) == (e.v, e.u));
                letters.push((seg.edge, if a == e.u { 1 } else { -1 }));
            }
            (NodeKind::Vertex(a), NodeKind::Interior { .. }) => {
                pending = Some((seg.edge, a));
            }
            (NodeKind::Interior { .. }, NodeKind::Vertex(b)) => {
                if let Some((edge, entered)) = pending.take() {
                    debug_assert_eq!(edge, seg.edge);
                    if b != entered {
                        let e = graph.edge(seg.edge);
                        letters.push((seg.edge, if entered == e.u { 1 } else { -1 }));
                    }
                }
            }
            (NodeKind::Interior { .. }, NodeKind::Interior { .. }) => {}
        }
    }

    Ok(FreeWord::from_letters(
        letters.into_iter().filter(|&(e, _)| !in_tree[e]),
    ))
}

/// Which block of the glued space the source loop lives in.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

/// Proof-of-work record for one transfer: the source and produced loops, the
/// measured Hausdorff gap, the subdivision used, and the observed
/// parameter-matched gap, which the construction keeps below `2 D`.
#[derive(Debug, Clone)]
pub struct TransferCertificate {
    pub alpha: LoopPath,
    pub beta: LoopPath,
    /// Chosen to-net index for each subdivision node.
    pub node_choices: Vec<usize>,
    pub d_bound: f64,
    pub hausdorff: f64,
    pub delta: f64,
    pub subdivision: usize,
    pub sup_gap: f64,
    pub basepoint_gap: f64,
}

/// Dijkstra over a merged from/to split graph with bridge arcs. Distances in
/// this graph equal glued-space distances: every multi-bridge route is at
/// least the glued distance by the triangle inequality, and some one-bridge
/// route attains it.
struct GluedSplit {
    n_from: usize,
    adj: Vec<Vec<(usize, f64)>>,
}

#[derive(Debug, Clone, Copy)]
struct QItem {
    dist: f64,
    node: usize,
}
impl PartialEq for QItem {
    fn eq(&self, other: &Self) -> bool {
        self.dist == other.dist && self.node == other.node
    }
}
impl Eq for QItem {}
impl PartialOrd for QItem {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for QItem {
    fn cmp(&self, other: &Self) -> Ordering {
        other.dist.total_cmp(&self.dist).then_with(|| other.node.cmp(&self.node))
    }
}

impl GluedSplit {
    fn new(from: &SplitGraph, to: &SplitGraph, pairs: &[(usize, usize)], bridge_cost: f64) -> Self {
        let n_from = from.node_count();
        let mut adj: Vec<Vec<(usize, f64)>> = Vec::with_capacity(n_from + to.node_count());
        for a in &from.adj {
            adj.push(a.iter().map(|&(n, w, _)| (n, w)).collect());
        }
        for a in &to.adj {
            adj.push(a.iter().map(|&(n, w, _)| (n + n_from, w)).collect());
        }
        for &(a, b) in pairs {
            let na = from.sample_node[a];
            let nb = to.sample_node[b] + n_from;
            adj[na].push((nb, bridge_cost));
            adj[nb].push((na, bridge_cost));
        }
        Self { n_from, adj }
    }

    fn dijkstra(&self, seeds: &[(usize, f64)]) -> Vec<f64> {
        let mut dist = vec![f64::INFINITY; self.adj.len()];
        let mut heap = BinaryHeap::new();
        for &(node, d) in seeds {
            if d < dist[node] {
                dist[node] = d;
                heap.push(QItem { dist: d, node });
            }
        }
        while let Some(QItem { dist: d, node }) = heap.pop() {
            if d > dist[node] {
                continue;
            }
            for &(next, w) in &self.adj[node] {
                let nd = d + w;
                if nd < dist[next] {
                    dist[next] = nd;
                    heap.push(QItem { dist: nd, node: next });
                }
            }
        }
        dist
    }
}

/// The loop as a continuous arc-length parametrized path through its
/// samples, each gap realized by a shortest path.
struct ArcParam {
    split: SplitGraph,
    gaps: Vec<(usize, Vec<PathSeg>, f64)>,
    cumulative: Vec<f64>,
    total: f64,
}

impl ArcParam {
    fn new(graph: &MetricGraph, lp: &LoopPath) -> Result<Self> {
        let split = SplitGraph::new(graph, &lp.points)?;
        let m = lp.points.len();
        let mut gaps = Vec::new();
        let mut cumulative = vec![0.0];
        let mut total = 0.0;
        if m > 1 {
            for k in 0..m {
                let next = (k + 1) % m;
                let (dist, prev) = split.dijkstra_with_prev(&[(split.sample_node[k], 0.0)]);
                let segs = split.path_to(&prev, split.sample_node[next]);
                let len = dist[split.sample_node[next]];
                total += len;
                gaps.push((split.sample_node[k], segs, len));
                cumulative.push(total);
            }
        }
        Ok(Self { split, gaps, cumulative, total })
    }

    fn eval(&self, graph: &MetricGraph, lp: &LoopPath, s: f64) -> PointOnGraph {
        if self.total <= 0.0 || self.gaps.is_empty() {
            return lp.points[0];
        }
        let s = s.clamp(0.0, self.total);
        let k = match self
            .cumulative
            .binary_search_by(|c| c.total_cmp(&s))
        {
            Ok(i) => i.min(self.gaps.len() - 1),
            Err(i) => i.saturating_sub(1).min(self.gaps.len() - 1),
        };
        let (start, segs, _) = &self.gaps[k];
        self.split.point_along(graph, *start, segs, s - self.cumulative[k])
    }
}

fn check_part(metric: &crate::metric_core::FiniteMetricSpace, glued: &GluedSpace, left: bool) -> Result<()> {
    let (len, base) = if left { (glued.left_len, 0) } else { (glued.right_len, glued.left_len) };
    if metric.len() != len {
        return Err(Error::Structure(format!(
            "part has {} points but the glued block has {len}",
            metric.len()
        )));
    }
    for i in 0..len {
        for j in 0..len {
            if metric.d(i, j) != glued.as_metric.d(base + i, base + j) {
                return Err(Error::Structure(
                    "part metric does not match the glued block".into(),
                ));
            }
        }
    }
    Ok(())
}

/// Transfers a loop across a glued pair of graph nets.
///
/// Requires the measured Hausdorff gap between the parts to be below
/// `d_bound`. With `delta` at half the slack, the loop is subdivided until
/// each segment is shorter than `delta`, every node is projected to the
/// lexicographically first nearest to-net point (within `d_bound - delta`),
/// and consecutive projections are joined by intrinsic geodesics. The
/// resulting loop stays within `2 d_bound` of the source at matched
/// parameters; the certificate records the measured supremum.
pub fn transfer_loop(
    glued: &GluedSpace,
    from: &GeodesicTable,
    to: &GeodesicTable,
    from_side: Side,
    alpha: &LoopPath,
    d_bound: f64,
) -> Result<TransferCertificate> {
    check_part(&from.metric, glued, from_side == Side::Left)?;
    check_part(&to.metric, glued, from_side == Side::Right)?;

    let hausdorff = glued.part_hausdorff();
    if !(hausdorff < d_bound) {
        return Err(Error::Domain(format!(
            "parts sit at Hausdorff distance {hausdorff}, not below {d_bound}"
        )));
    }
    let delta = (d_bound - hausdorff) / 2.0;

    let split_from = SplitGraph::new(&from.graph, &from.points)?;
    let split_to = SplitGraph::new(&to.graph, &to.points)?;
    let oriented_pairs: Vec<(usize, usize)> = match from_side {
        Side::Left => glued.bridge.pairs.clone(),
        Side::Right => glued.bridge.pairs.iter().map(|&(a, b)| (b, a)).collect(),
    };
    let merged = GluedSplit::new(&split_from, &split_to, &oriented_pairs, glued.bridge_cost);

    let to_node = |j: usize| split_to.sample_node[j] + merged.n_from;
    let cross_from_point = |p: PointOnGraph| -> Result<Vec<f64>> {
        let seeds = split_from.point_seeds(&from.graph, p)?;
        Ok(merged.dijkstra(&seeds))
    };
    let nearest_to_net = |dist: &[f64]| -> (usize, f64) {
        let mut best = (0usize, f64::INFINITY);
        for j in 0..to.points.len() {
            let d = dist[to_node(j)];
            if d < best.1 - 1e-12 {
                best = (j, d);
            }
        }
        best
    };

    // subdivide until segments are shorter than delta
    let arc = ArcParam::new(&from.graph, alpha)?;
    let mut subdivision = 1usize;
    while arc.total / subdivision as f64 >= delta {
        subdivision *= 2;
        if subdivision > MAX_SUBDIVISION {
            return Err(Error::Construction(format!(
                "subdivision exceeded {MAX_SUBDIVISION}; loop of length {} against delta {delta}",
                arc.total
            )));
        }
    }

    // project subdivision nodes; node 0 is the basepoint image
    let limit = d_bound - delta;
    let mut node_choices = Vec::with_capacity(subdivision);
    let mut node_dists: Vec<Vec<f64>> = Vec::with_capacity(subdivision);
    let mut gaps: Vec<f64> = Vec::with_capacity(subdivision);
    for n in 0..subdivision {
        let p = arc.eval(&from.graph, alpha, arc.total * n as f64 / subdivision as f64);
        let dist = cross_from_point(p)?;
        let (j, gap) = nearest_to_net(&dist);
        if !(gap < limit) {
            return Err(Error::Construction(format!(
                "no projection within {limit} at node {n} (nearest {gap})"
            )));
        }
        node_choices.push(j);
        node_dists.push(dist);
        gaps.push(gap);
    }
    let basepoint_gap = gaps[0];

    // consecutive projections must stay within 2D in the target part
    for n in 0..subdivision {
        let a = node_choices[n];
        let b = node_choices[(n + 1) % subdivision];
        let d = to.metric.d(a, b);
        if !(d < 2.0 * d_bound) {
            return Err(Error::Construction(format!(
                "projected nodes {n} and {} are {d} apart, not below {}",
                (n + 1) % subdivision,
                2.0 * d_bound
            )));
        }
    }

    // realize the target loop: nodes joined by geodesics, sampled finely,
    // and measure the parameter-matched gap at nodes and segment midpoints
    let mut sup_gap: f64 = gaps.iter().fold(0.0, |a, &b| a.max(b));
    let mut beta_points: Vec<PointOnGraph> = Vec::new();
    let sample_step = delta.min(0.1);
    for n in 0..subdivision {
        let a = node_choices[n];
        let b = node_choices[(n + 1) % subdivision];
        let na = split_to.sample_node[a];
        let nb = split_to.sample_node[b];
        beta_points.push(to.points[a]);
        let (dist, prev) = split_to.dijkstra_with_prev(&[(na, 0.0)]);
        let segs = split_to.path_to(&prev, nb);
        let len = dist[nb];

        // midpoint of the geodesic against the matched source parameter
        let beta_mid = split_to.point_along(&to.graph, na, &segs, len / 2.0);
        let alpha_mid =
            arc.eval(&from.graph, alpha, arc.total * (n as f64 + 0.5) / subdivision as f64);
        let dist_mid = cross_from_point(alpha_mid)?;
        let mid_seeds = split_to.point_seeds(&to.graph, beta_mid)?;
        let mid_gap = mid_seeds
            .iter()
            .map(|&(s, w)| dist_mid[s + merged.n_from] + w)
            .fold(f64::INFINITY, f64::min);
        sup_gap = sup_gap.max(mid_gap);

        if len > 0.0 {
            let pieces = (len / sample_step).ceil().max(1.0) as usize;
            for j in 1..pieces {
                beta_points.push(split_to.point_along(&to.graph, na, &segs, len * j as f64 / pieces as f64));
            }
        }
    }

    if !(sup_gap < 2.0 * d_bound) {
        return Err(Error::Construction(format!(
            "matched-parameter gap {sup_gap} reached 2D = {}",
            2.0 * d_bound
        )));
    }

    let beta = LoopPath::new(&to.graph, beta_points, 2.0 * d_bound)?;
    Ok(TransferCertificate {
        alpha: alpha.clone(),
        beta,
        node_choices,
        d_bound,
        hausdorff,
        delta,
        subdivision,
        sup_gap,
        basepoint_gap,
    })
}

/// Report of the random small-loop contractibility battery.
#[derive(Debug, Clone)]
pub struct ContractibilityReport {
    pub trials: usize,
    pub contractible: usize,
    pub fraction: f64,
    /// Exact length of the shortest essential cycle, `None` for trees.
    pub shortest_essential_cycle: Option<f64>,
    pub diameter_bound: f64,
}

/// Thread cap for internal parallelism: `GH_FORGE_THREADS` if set, else the
/// available parallelism (at most 8).
pub fn thread_cap() -> usize {
    if let Ok(v) = std::env::var("GH_FORGE_THREADS") {
        if let Ok(n) = v.parse::<usize>() {
            return n.max(1);
        }
    }
    std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1).min(8)
}

/// Samples `trials` random loops of diameter below `bound` and reports how
/// many classify as nulhomotopic, together with the graph's exact shortest
/// essential cycle. Loops are random vertex walks closed by a shortest path
/// and sampled at edge midpoints. Trials use per-index seeds, so the report
/// is deterministic for a given seed regardless of the thread count.
pub fn small_loops_contractible(
    graph: &MetricGraph,
    bound: f64,
    trials: usize,
    seed: u64,
) -> Result<ContractibilityReport> {
    if !(bound > 0.0) {
        return Err(Error::Domain(format!("diameter bound must be positive, got {bound}")));
    }
    let girth = shortest_essential_cycle(graph);

    let run_trial = |index: usize| -> Result<bool> {
        let lp = sample_small_loop(graph, bound, seed, index)?;
        Ok(loop_class(graph, &lp)?.is_empty())
    };

    let threads = thread_cap().min(trials.max(1));
    let mut outcomes: Vec<Option<Result<bool>>> = (0..trials).map(|_| None).collect();
    if threads <= 1 {
        for (i, slot) in outcomes.iter_mut().enumerate() {
            *slot = Some(run_trial(i));
        }
    } else {
        let chunks: Vec<Vec<usize>> =
            (0..threads).map(|t| (t..trials).step_by(threads).collect()).collect();
        let results: Vec<Vec<(usize, Result<bool>)>> = std::thread::scope(|scope| {
            let handles: Vec<_> = chunks
                .iter()
                .map(|chunk| {
                    scope.spawn(|| {
                        chunk.iter().map(|&i| (i, run_trial(i))).collect::<Vec<_>>()
                    })
                })
                .collect();
            handles.into_iter().map(|h| h.join().expect("trial thread")).collect()
        });
        for batch in results {
            for (i, r) in batch {
                outcomes[i] = Some(r);
            }
        }
    }

    let mut contractible = 0usize;
    for slot in outcomes {
        if slot.expect("all trials ran")? {
            contractible += 1;
        }
    }
    Ok(ContractibilityReport {
        trials,
        contractible,
        fraction: if trials == 0 { 1.0 } else { contractible as f64 / trials as f64 },
        shortest_essential_cycle: girth,
        diameter_bound: bound,
    })
}

/// One random loop of diameter below `bound`: a random vertex walk closed by
/// a shortest path, sampled at vertices and edge midpoints. Rejection-samples
/// until the diameter fits.
pub fn sample_small_loop(
    graph: &MetricGraph,
    bound: f64,
    seed: u64,
    index: usize,
) -> Result<LoopPath> {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(
        seed ^ (index as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15),
    );
    let nv = graph.vertex_count();
    for _attempt in 0..500 {
        let start = rng.random_range(0..nv);
        let walk_len = rng.random_range(1..=6);
        let mut vertex_walk = vec![start];
        let mut edge_walk: Vec<usize> = Vec::new();
        for _ in 0..walk_len {
            let at = *vertex_walk.last().unwrap();
            let incident: Vec<usize> = graph
                .edges()
                .iter()
                .enumerate()
                .filter(|(_, e)| e.u == at || e.v == at)
                .map(|(i, _)| i)
                .collect();
            let pick = incident[rng.random_range(0..incident.len())];
            let e = graph.edge(pick);
            vertex_walk.push(if e.u == at { e.v } else { e.u });
            edge_walk.push(pick);
        }
        // close by a shortest vertex path
        let closing = vertex_shortest_path(graph, *vertex_walk.last().unwrap(), start);
        for (v, e) in closing {
            vertex_walk.push(v);
            edge_walk.push(e);
        }

        let mut points: Vec<PointOnGraph> = Vec::new();
        for (k, &e) in edge_walk.iter().enumerate() {
            points.push(graph.vertex_point(vertex_walk[k]));
            points.push(PointOnGraph::new(e, graph.edge(e).len / 2.0));
        }
        if points.is_empty() {
            points.push(graph.vertex_point(start));
        }
        let lp = LoopPath::new(graph, points, f64::INFINITY)?;
        let table = crate::graph_spaces::graph_metric(graph, &lp.points)?;
        if table.metric.diameter() < bound - 1e-12 {
            let mut bounded = lp;
            bounded.step_bound = bounded.max_gap + TOL;
            return Ok(bounded);
        }
    }
    Err(Error::Construction(format!(
        "could not sample a loop of diameter below {bound} after 500 attempts"
    )))
}

/// Shortest vertex-to-vertex path, returned as `(next vertex, edge)` steps.
fn vertex_shortest_path(graph: &MetricGraph, from: usize, to: usize) -> Vec<(usize, usize)> {
    let nv = graph.vertex_count();
    let mut dist = vec![f64::INFINITY; nv];
    let mut prev: Vec<Option<(usize, usize)>> = vec![None; nv];
    let mut heap = BinaryHeap::new();
    dist[from] = 0.0;
    heap.push(QItem { dist: 0.0, node: from });
    while let Some(QItem { dist: d, node }) = heap.pop() {
        if d > dist[node] {
            continue;
        }
        for (i, e) in graph.edges().iter().enumerate() {
            for (a, b) in [(e.u, e.v), (e.v, e.u)] {
                if a == node && d + e.len < dist[b] {
                    dist[b] = d + e.len;
                    prev[b] = Some((node, i));
                    heap.push(QItem { dist: dist[b], node: b });
                }
            }
        }
    }
    let mut steps = Vec::new();
    let mut at = to;
    while at != from {
        let (p, e) = prev[at].expect("graph is connected");
        steps.push((at, e));
        at = p;
    }
    steps.reverse();
    steps
}
