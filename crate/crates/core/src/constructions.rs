//! The canonical circle-to-tripod map and the chordal-circle root.
//!
//! The map `phi` wraps the geodesic circle (circumference `2 pi`) around the
//! tripod of [`build_e`] as a walk of eight quarter-length edge steps. It is
//! locally isometric along each step, continuous except for a single jump of
//! length `pi/2` where the parameter wraps, and sends antipodal parameters to
//! points at distance exactly `pi/2`. Those properties force the graph of
//! `phi` to have distortion exactly `pi/2`, which certifies the GH upper
//! bound `pi/4` between the two spaces.
//!
//! The walk itself is not hard-coded: [`find_phi_walk`] searches all
//! eight-step edge walks in a fixed lexicographic order, keeps the invariants
//! above as filters, and confirms the survivor by a sampled distortion check,
//! making the construction self-validating.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};
use std::sync::OnceLock;

use crate::error::{Error, Result};
use crate::gh_solver::{self, Correspondence};
use crate::graph_spaces::{
    build_e, build_e_prime, circle_space, graph_metric, point_distance, GeodesicTable,
    MetricGraph, PointOnGraph, E_PRIME_EXTENSION_EDGE,
};
use crate::metric_core::FiniteMetricSpace;

const TOL: f64 = 1e-9;
/// Sampling resolution used to confirm a candidate walk.
const WALK_CHECK_SAMPLES: usize = 512; // spacing pi/256

/// One directed step of the walk: an edge traversed forward (`u` to `v`) or
/// backward.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct WalkStep {
    pub edge: usize,
    pub forward: bool,
}

/// An eight-step closed-up walk on the tripod: continuous from `start_vertex`
/// to `end_vertex`, covering every edge, with the two ends a distance `pi/2`
/// apart. Read as a `2 pi`-periodic parametrization, the discontinuity sits
/// at parameter 0, where `end_vertex` wraps back to `start_vertex`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgeWalk {
    pub steps: Vec<WalkStep>,
    pub start_vertex: usize,
    pub end_vertex: usize,
}

impl EdgeWalk {
    /// Vertex sequence `v_0 .. v_8` visited by the walk.
    pub fn vertex_sequence(&self, graph: &MetricGraph) -> Vec<usize> {
        let mut seq = vec![self.start_vertex];
        for s in &self.steps {
            let e = graph.edge(s.edge);
            seq.push(if s.forward { e.v } else { e.u });
        }
        seq
    }
}

/// Evaluates a walk at parameter `theta` (each step spans `pi/4`).
fn eval_walk(graph: &MetricGraph, walk: &EdgeWalk, theta: f64) -> PointOnGraph {
    let theta = theta.rem_euclid(2.0 * PI);
    let k = ((theta / FRAC_PI_4) as usize).min(walk.steps.len() - 1);
    let t = theta - k as f64 * FRAC_PI_4;
    let step = walk.steps[k];
    let len = graph.edge(step.edge).len;
    let offset = if step.forward { t.min(len) } else { (len - t).max(0.0) };
    graph
        .canonicalize(PointOnGraph::new(step.edge, offset))
        .expect("walk evaluation stays on its edge")
}

/// Max over sampled parameter pairs of the distortion of the walk's graph.
fn sampled_walk_distortion(graph: &MetricGraph, walk: &EdgeWalk, n: usize) -> Result<f64> {
    let thetas: Vec<f64> = (0..n).map(|i| 2.0 * PI * i as f64 / n as f64).collect();
    let images: Vec<PointOnGraph> = thetas.iter().map(|&t| eval_walk(graph, walk, t)).collect();
    let table = graph_metric(graph, &images)?;
    let mut worst = 0.0_f64;
    for i in 0..n {
        for j in (i + 1)..n {
            let gap = (thetas[j] - thetas[i]).min(2.0 * PI - (thetas[j] - thetas[i]));
            worst = worst.max((gap - table.metric.d(i, j)).abs());
        }
    }
    Ok(worst)
}

/// Worst deviation of sampled antipodal image distances from `pi/2`.
fn sampled_antipodal_defect(graph: &MetricGraph, walk: &EdgeWalk, n: usize) -> Result<f64> {
    let half = n / 2;
    let mut worst = 0.0_f64;
    for i in 0..half {
        let a = eval_walk(graph, walk, 2.0 * PI * i as f64 / n as f64);
        let b = eval_walk(graph, walk, 2.0 * PI * (i + half) as f64 / n as f64);
        worst = worst.max((point_distance(graph, a, b)? - FRAC_PI_2).abs());
    }
    Ok(worst)
}

/// Searches for the canonical walk.
///
/// Deterministic depth-first search over directed steps in lexicographic
/// order (edge index, forward before backward). Filters, in order: walk
/// continuity, feasible edge coverage, antipodal vertex pairs at distance
/// `pi/2`, antipodal step midpoints at distance `pi/2` (with the endpoint
/// checks this pins the whole step pair, since tree distances are piecewise
/// linear with at most one kink along a step), the end-to-start jump of
/// `pi/2`, full coverage, and finally a sampled distortion and antipodal
/// check at resolution `pi/256`. The first survivor is the canonical walk.
pub fn find_phi_walk() -> Result<EdgeWalk> {
    let graph = build_e();
    let ne = graph.edges().len();
    let nv = graph.vertex_count();
    let steps_total = 8usize;

    // vertex-to-vertex distances
    let vpoints: Vec<PointOnGraph> = (0..nv).map(|v| graph.vertex_point(v)).collect();
    let vdist = graph_metric(&graph, &vpoints)?.metric;

    // directed tokens in lexicographic order
    let tokens: Vec<WalkStep> = (0..ne)
        .flat_map(|edge| [WalkStep { edge, forward: true }, WalkStep { edge, forward: false }])
        .collect();

    struct Dfs<'a> {
        graph: &'a MetricGraph,
        vdist: &'a FiniteMetricSpace,
        tokens: &'a [WalkStep],
        steps_total: usize,
        steps: Vec<WalkStep>,
        vertices: Vec<usize>,
        covered: Vec<usize>,
    }

    impl Dfs<'_> {
        fn uncovered(&self) -> usize {
            self.covered.iter().filter(|&&c| c == 0).count()
        }

        fn midpoints_apart(&self, a: WalkStep, b: WalkStep) -> bool {
            let mid = |s: WalkStep| PointOnGraph::new(s.edge, self.graph.edge(s.edge).len / 2.0);
            match point_distance(self.graph, mid(a), mid(b)) {
                Ok(d) => (d - FRAC_PI_2).abs() <= TOL,
                Err(_) => false,
            }
        }

        fn search(&mut self) -> Option<EdgeWalk> {
            let depth = self.steps.len();
            if depth == self.steps_total {
                let start = self.vertices[0];
                let end = *self.vertices.last().unwrap();
                if self.uncovered() > 0 {
                    return None;
                }
                if (self.vdist.d(start, end) - FRAC_PI_2).abs() > TOL {
                    return None;
                }
                let walk = EdgeWalk {
                    steps: self.steps.clone(),
                    start_vertex: start,
                    end_vertex: end,
                };
                // confirm the survivor numerically; on failure keep searching
                let dis = sampled_walk_distortion(self.graph, &walk, WALK_CHECK_SAMPLES);
                let antipodal = sampled_antipodal_defect(self.graph, &walk, WALK_CHECK_SAMPLES);
                return match (dis, antipodal) {
                    (Ok(d), Ok(a)) if d <= FRAC_PI_2 + TOL && a <= TOL => Some(walk),
                    _ => None,
                };
            }
            let at = *self.vertices.last().unwrap();
            for &tok in self.tokens {
                let e = self.graph.edge(tok.edge);
                let (from, to) = if tok.forward { (e.u, e.v) } else { (e.v, e.u) };
                if from != at {
                    continue;
                }
                // coverage still feasible?
                let new_edge = self.covered[tok.edge] == 0;
                let uncovered_after = self.uncovered() - usize::from(new_edge);
                if uncovered_after > self.steps_total - depth - 1 {
                    continue;
                }
                // antipodal vertex pair (v_{k}, v_{k+4})
                if depth + 1 >= 4 {
                    let partner = self.vertices[depth + 1 - 4];
                    if (self.vdist.d(partner, to) - FRAC_PI_2).abs() > TOL {
                        continue;
                    }
                }
                // antipodal step pair midpoints
                if depth >= 4 && !self.midpoints_apart(self.steps[depth - 4], tok) {
                    continue;
                }
                self.steps.push(tok);
                self.vertices.push(to);
                self.covered[tok.edge] += 1;
                if let Some(found) = self.search() {
                    return Some(found);
                }
                self.covered[tok.edge] -= 1;
                self.vertices.pop();
                self.steps.pop();
            }
            None
        }
    }

    // start vertices in the order their first token appears; vertices are
    // numbered along edge order, so index order matches token order
    for start in 0..nv {
        let mut dfs = Dfs {
            graph: &graph,
            vdist: &vdist,
            tokens: &tokens,
            steps_total,
            steps: Vec::new(),
            vertices: vec![start],
            covered: vec![0; ne],
        };
        if let Some(walk) = dfs.search() {
            return Ok(walk);
        }
    }
    Err(Error::Construction(
        "no eight-step walk with the required invariants exists on the tripod".into(),
    ))
}

fn canonical_walk() -> Result<&'static EdgeWalk> {
    static WALK: OnceLock<std::result::Result<EdgeWalk, String>> = OnceLock::new();
    WALK.get_or_init(|| find_phi_walk().map_err(|e| e.to_string()))
        .as_ref()
        .map_err(|e| Error::Construction(e.clone()))
}

/// The canonical map from circle parameters to tripod points.
#[derive(Debug, Clone)]
pub struct PhiMap {
    pub graph: MetricGraph,
    pub walk: EdgeWalk,
}

impl PhiMap {
    pub fn canonical() -> Result<Self> {
        Ok(Self { graph: build_e(), walk: canonical_walk()?.clone() })
    }

    /// Arc-length evaluation along the walk; `theta` is taken mod `2 pi`.
    pub fn eval(&self, theta: f64) -> PointOnGraph {
        eval_walk(&self.graph, &self.walk, theta)
    }

    /// Image of parameter 0 (the walk start `P`).
    pub fn basepoint(&self) -> PointOnGraph {
        self.graph.vertex_point(self.walk.start_vertex)
    }

    /// Limit of the walk as the parameter approaches `2 pi` (the pre-jump
    /// point `Q`).
    pub fn pre_jump(&self) -> PointOnGraph {
        self.graph.vertex_point(self.walk.end_vertex)
    }
}

/// Evaluates the canonical map at `theta`.
pub fn phi(theta: f64) -> Result<PointOnGraph> {
    Ok(PhiMap::canonical()?.eval(theta))
}

/// A sampled correspondence: circle samples on the left, a net on a graph on
/// the right, and the relating pairs.
#[derive(Debug, Clone)]
pub struct SampledCorrespondence {
    pub left: FiniteMetricSpace,
    pub right: GeodesicTable,
    pub pairs: Correspondence,
}

impl SampledCorrespondence {
    pub fn distortion(&self) -> Result<f64> {
        gh_solver::distortion(&self.left, &self.right.metric, &self.pairs)
    }
}

/// Interns points of a graph up to tolerance, preserving first-seen order.
struct PointInterner<'a> {
    graph: &'a MetricGraph,
    points: Vec<PointOnGraph>,
    per_edge: Vec<Vec<(f64, usize)>>,
}

impl<'a> PointInterner<'a> {
    fn new(graph: &'a MetricGraph) -> Self {
        Self { graph, points: Vec::new(), per_edge: vec![Vec::new(); graph.edges().len()] }
    }

    fn intern(&mut self, p: PointOnGraph) -> usize {
        let c = self.graph.canonicalize(p).expect("intern expects valid points");
        for &(offset, idx) in &self.per_edge[c.edge] {
            if (offset - c.offset).abs() <= TOL {
                return idx;
            }
        }
        let idx = self.points.len();
        self.points.push(c);
        self.per_edge[c.edge].push((c.offset, idx));
        idx
    }
}

fn build_sampled_correspondence(
    graph: &MetricGraph,
    map: &PhiMap,
    n: usize,
    extra: impl FnOnce(&mut PointInterner<'_>, &mut Vec<(usize, usize)>),
) -> Result<SampledCorrespondence> {
    if n < 8 || !n.is_multiple_of(8) {
        return Err(Error::Domain(format!(
            "sample count must be a positive multiple of 8 (keeps samples off the jump), got {n}"
        )));
    }
    let left = circle_space(n)?;
    let mut interner = PointInterner::new(graph);
    let image_idx: Vec<usize> = (0..n)
        .map(|i| interner.intern(map.eval(2.0 * PI * i as f64 / n as f64)))
        .collect();
    let mut pairs: Vec<(usize, usize)> = image_idx.iter().enumerate().map(|(i, &r)| (i, r)).collect();

    extra(&mut interner, &mut pairs);

    // every graph vertex joins the net; a vertex that is nobody's image is
    // paired with the sample whose image lies nearest
    let first_extra = interner.points.len();
    let vertex_idx: Vec<usize> =
        (0..graph.vertex_count()).map(|v| interner.intern(graph.vertex_point(v))).collect();
    let table = graph_metric(graph, &interner.points)?;
    for idx in vertex_idx {
        if idx >= first_extra {
            let nearest = (0..n)
                .min_by(|&a, &b| table.metric.d(image_idx[a], idx).total_cmp(&table.metric.d(image_idx[b], idx)))
                .expect("n >= 8");
            pairs.push((nearest, idx));
        }
    }

    Ok(SampledCorrespondence { left, right: table, pairs: Correspondence::new(pairs) })
}

/// The graph of the canonical map at `n` circle samples (plus vertex
/// completion). `n` must be a positive multiple of 8 so the samples avoid
/// the jump and hit the step corners.
pub fn phi_graph(n: usize) -> Result<SampledCorrespondence> {
    let map = PhiMap::canonical()?;
    build_sampled_correspondence(&map.graph, &map, n, |_, _| {})
}

/// The extended-tree relation: the graph of the canonical map inside the
/// longer tripod of [`build_e_prime`], with the antipode of the basepoint
/// additionally related to every sample of the branch extension.
pub fn e_prime_graph(n: usize) -> Result<SampledCorrespondence> {
    let graph = build_e_prime();
    let walk = canonical_walk()?.clone();
    let map = PhiMap { graph: graph.clone(), walk };
    let antipode_sample = n / 2;
    build_sampled_correspondence(&graph, &map, n, |interner, pairs| {
        let ext = graph.edge(E_PRIME_EXTENSION_EDGE);
        let spacing = 2.0 * PI / n as f64;
        let pieces = (ext.len / spacing).ceil().max(1.0) as usize;
        for j in 0..=pieces {
            let p = PointOnGraph::new(E_PRIME_EXTENSION_EDGE, ext.len * j as f64 / pieces as f64);
            let idx = interner.intern(p);
            pairs.push((antipode_sample, idx));
        }
    })
}

/// Residual of the chordal-circle equation `D + sqrt(2 - 2 sqrt(1 - D^2)) = 1`
/// at `D`.
pub fn chordal_residual(d: f64) -> f64 {
    d + (2.0 - 2.0 * (1.0 - d * d).sqrt()).sqrt() - 1.0
}

/// The unique root of the chordal-circle equation in `(0, 1)`, by bisection
/// (the residual is strictly increasing there).
pub fn chordal_bound_root() -> f64 {
    let mut lo = 0.0_f64;
    let mut hi = 1.0_f64;
    while hi - lo > 1e-13 {
        let mid = 0.5 * (lo + hi);
        if chordal_residual(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}
