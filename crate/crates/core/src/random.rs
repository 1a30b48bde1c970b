//! Seeded instance generators for the randomized property batteries.
//!
//! Everything takes an explicit RNG so that a single `--seed` flag makes
//! whole report runs reproducible.

use rand::Rng;

use crate::gh_solver::Correspondence;
use crate::graph_spaces::{GraphEdge, MetricGraph, PointOnGraph};
use crate::metric_core::FiniteMetricSpace;

/// Random Euclidean point set (2 to `max_points` points in a box of the
/// given side), as a finite metric space. Euclidean distances always satisfy
/// the axioms; coincident samples are nudged apart.
pub fn random_euclidean_space<R: Rng>(rng: &mut R, dim: usize, max_points: usize, side: f64) -> FiniteMetricSpace {
    let n = rng.random_range(2..=max_points.max(2));
    let mut pts: Vec<Vec<f64>> = (0..n)
        .map(|_| (0..dim).map(|_| rng.random_range(0.0..side)).collect())
        .collect();
    // keep points distinct so the matrix is a true metric
    for i in 0..n {
        let mut guard = 0;
        while (0..i).any(|j| euclid(&pts[i], &pts[j]) < 1e-6) && guard < 100 {
            pts[i] = (0..dim).map(|_| rng.random_range(0.0..side)).collect();
            guard += 1;
        }
    }
    let dist = pts
        .iter()
        .map(|a| pts.iter().map(|b| euclid(a, b)).collect())
        .collect();
    FiniteMetricSpace::from_matrix(dist).expect("euclidean matrix is a metric")
}

fn euclid(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt()
}

/// Random correspondence between index sets: the union of the graphs of a
/// random map each way, so both projections are surjective.
pub fn random_correspondence<R: Rng>(rng: &mut R, left_len: usize, right_len: usize) -> Correspondence {
    let mut pairs = Vec::with_capacity(left_len + right_len);
    for i in 0..left_len {
        pairs.push((i, rng.random_range(0..right_len)));
    }
    for j in 0..right_len {
        pairs.push((rng.random_range(0..left_len), j));
    }
    Correspondence::new(pairs)
}

/// Random tree on 3 to `max_vertices` vertices: each new vertex attaches to
/// a uniformly chosen earlier one with a random edge length.
pub fn random_tree<R: Rng>(rng: &mut R, max_vertices: usize) -> MetricGraph {
    let n = rng.random_range(3..=max_vertices.max(3));
    let vertices = (0..n).map(|i| format!("t{i}")).collect();
    let edges = (1..n)
        .map(|i| GraphEdge {
            u: rng.random_range(0..i),
            v: i,
            len: rng.random_range(0.2..2.0),
        })
        .collect();
    MetricGraph::new(vertices, edges).expect("attachment construction is connected")
}

/// Uniformly random point on the graph (edge chosen by length, then offset).
pub fn random_point_on<R: Rng>(rng: &mut R, graph: &MetricGraph) -> PointOnGraph {
    let total = graph.total_length();
    let mut at = rng.random_range(0.0..total);
    for (i, e) in graph.edges().iter().enumerate() {
        if at <= e.len || i == graph.edges().len() - 1 {
            return PointOnGraph::new(i, at.min(e.len));
        }
        at -= e.len;
    }
    unreachable!()
}
