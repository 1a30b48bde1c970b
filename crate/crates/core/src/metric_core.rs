//! Finite metric spaces, axiom validation, and Hausdorff distance.
//!
//! A [`FiniteMetricSpace`] is the universal currency of the crate: point
//! labels plus a square, symmetric, zero-diagonal distance matrix that
//! satisfies the triangle inequality up to [`METRIC_TOL`]. Constructors only
//! check structure so that deliberately broken matrices can be fed to
//! [`validate_metric`]; everything read from disk is validated on load.

use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Global numeric tolerance for the metric axioms.
///
/// Constructions from edge lengths are exact up to floating error, so a
/// tight tolerance is safe.
pub const METRIC_TOL: f64 = 1e-9;

/// A finite metric space: point labels plus a symmetric distance matrix.
///
/// Points are index-identified; labels are opaque strings used only for
/// reporting. Values are immutable after construction.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FiniteMetricSpace {
    pub labels: Vec<String>,
    pub dist: Vec<Vec<f64>>,
}

impl FiniteMetricSpace {
    /// Builds a space from raw parts, checking structure only (the matrix is
    /// square, matches the label count, is nonempty, and all entries are
    /// finite). Metric axioms are the business of [`validate_metric`].
    pub fn from_parts(labels: Vec<String>, dist: Vec<Vec<f64>>) -> Result<Self> {
        if labels.is_empty() {
            return Err(Error::Domain("a metric space needs at least one point".into()));
        }
        if dist.len() != labels.len() {
            return Err(Error::Structure(format!(
                "matrix has {} rows but there are {} labels",
                dist.len(),
                labels.len()
            )));
        }
        for (i, row) in dist.iter().enumerate() {
            if row.len() != labels.len() {
                return Err(Error::Structure(format!(
                    "row {i} has {} entries, expected {}",
                    row.len(),
                    labels.len()
                )));
            }
            if let Some(j) = row.iter().position(|v| !v.is_finite()) {
                return Err(Error::Structure(format!("entry ({i},{j}) is not finite")));
            }
        }
        Ok(Self { labels, dist })
    }

    /// Convenience constructor with generated labels `p0, p1, ...`.
    pub fn from_matrix(dist: Vec<Vec<f64>>) -> Result<Self> {
        let labels = (0..dist.len()).map(|i| format!("p{i}")).collect();
        Self::from_parts(labels, dist)
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    #[inline]
    pub fn d(&self, i: usize, j: usize) -> f64 {
        self.dist[i][j]
    }

    /// Largest pairwise distance. The space is nonempty by construction, so
    /// a single point yields 0.
    pub fn diameter(&self) -> f64 {
        diameter(self)
    }

    /// Parses the JSON document `{"labels": [...], "dist": [[...]]}` and
    /// validates the metric axioms.
    pub fn from_json_str(text: &str) -> Result<Self> {
        let space: FiniteMetricSpace = serde_json::from_str(text)?;
        let space = Self::from_parts(space.labels, space.dist)?;
        let report = validate_metric(&space);
        if !report.is_ok() {
            return Err(Error::Structure(format!(
                "metric document violates the axioms: {report}"
            )));
        }
        Ok(space)
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_json_str(&std::fs::read_to_string(path)?)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        std::fs::write(path, serde_json::to_string_pretty(self)?)?;
        Ok(())
    }
}

/// One violated axiom together with a witness.
#[derive(Debug, Clone, PartialEq)]
pub enum MetricViolation {
    Negative { i: usize, j: usize, value: f64 },
    NonzeroDiagonal { i: usize, value: f64 },
    Asymmetry { i: usize, j: usize, forward: f64, backward: f64 },
    /// Off-diagonal zero: points are required to be distinct.
    CoincidentPoints { i: usize, j: usize },
    /// `d(i,j) > d(i,via) + d(via,j)` beyond tolerance.
    Triangle { i: usize, j: usize, via: usize, excess: f64 },
}

impl fmt::Display for MetricViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Negative { i, j, value } => write!(f, "negative entry d({i},{j}) = {value}"),
            Self::NonzeroDiagonal { i, value } => write!(f, "nonzero diagonal d({i},{i}) = {value}"),
            Self::Asymmetry { i, j, forward, backward } => {
                write!(f, "asymmetry d({i},{j}) = {forward} vs d({j},{i}) = {backward}")
            }
            Self::CoincidentPoints { i, j } => write!(f, "distinct points {i},{j} at distance 0"),
            Self::Triangle { i, j, via, excess } => {
                write!(f, "triangle violation d({i},{j}) > d({i},{via}) + d({via},{j}) by {excess:e}")
            }
        }
    }
}

/// Result of checking the metric axioms.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ValidationReport {
    pub violations: Vec<MetricViolation>,
}

impl ValidationReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_ok() {
            return write!(f, "ok");
        }
        let shown: Vec<String> = self.violations.iter().take(4).map(|v| v.to_string()).collect();
        write!(f, "{} violation(s): {}", self.violations.len(), shown.join("; "))
    }
}

/// Checks symmetry, zero diagonal, nonnegativity, point distinctness, and
/// the triangle inequality, all within [`METRIC_TOL`]. Returns every
/// violation found with a witness.
pub fn validate_metric(space: &FiniteMetricSpace) -> ValidationReport {
    let n = space.len();
    let d = &space.dist;
    let mut violations = Vec::new();

    for i in 0..n {
        if d[i][i].abs() > METRIC_TOL {
            violations.push(MetricViolation::NonzeroDiagonal { i, value: d[i][i] });
        }
        for j in (i + 1)..n {
            if d[i][j] < -METRIC_TOL {
                violations.push(MetricViolation::Negative { i, j, value: d[i][j] });
            }
            if (d[i][j] - d[j][i]).abs() > METRIC_TOL {
                violations.push(MetricViolation::Asymmetry {
                    i,
                    j,
                    forward: d[i][j],
                    backward: d[j][i],
                });
            }
            if d[i][j].abs() <= METRIC_TOL {
                violations.push(MetricViolation::CoincidentPoints { i, j });
            }
        }
    }

    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            for via in 0..n {
                if via == i || via == j {
                    continue;
                }
                let excess = d[i][j] - d[i][via] - d[via][j];
                if excess > METRIC_TOL {
                    violations.push(MetricViolation::Triangle { i, j, via, excess });
                }
            }
        }
    }

    ValidationReport { violations }
}

/// Largest pairwise distance of a space.
pub fn diameter(space: &FiniteMetricSpace) -> f64 {
    let mut best = 0.0_f64;
    for row in &space.dist {
        for &v in row {
            if v > best {
                best = v;
            }
        }
    }
    best
}

/// A nonempty subset of a finite metric space, by index.
#[derive(Debug, Clone)]
pub struct SubsetRef<'a> {
    space: &'a FiniteMetricSpace,
    members: Vec<usize>,
}

impl<'a> SubsetRef<'a> {
    pub fn new(space: &'a FiniteMetricSpace, members: Vec<usize>) -> Result<Self> {
        if members.is_empty() {
            return Err(Error::Domain("subset must be nonempty".into()));
        }
        if let Some(&bad) = members.iter().find(|&&m| m >= space.len()) {
            return Err(Error::Structure(format!(
                "subset index {bad} out of range for a {}-point space",
                space.len()
            )));
        }
        Ok(Self { space, members })
    }

    /// The whole space as a subset.
    pub fn full(space: &'a FiniteMetricSpace) -> Self {
        Self { space, members: (0..space.len()).collect() }
    }

    pub fn space(&self) -> &'a FiniteMetricSpace {
        self.space
    }

    pub fn members(&self) -> &[usize] {
        &self.members
    }
}

fn same_ambient(a: &SubsetRef<'_>, b: &SubsetRef<'_>) -> bool {
    std::ptr::eq(a.space, b.space) || a.space == b.space
}

/// Hausdorff distance between two subsets of one ambient space:
/// `max(sup_{a in A} d(a, B), sup_{b in B} d(b, A))`, exact over the
/// finite index sets.
pub fn hausdorff_distance(a: &SubsetRef<'_>, b: &SubsetRef<'_>) -> Result<f64> {
    if !same_ambient(a, b) {
        return Err(Error::Domain(
            "hausdorff_distance requires subsets of the same ambient space".into(),
        ));
    }
    let d = &a.space.dist;
    let sup_inf = |from: &[usize], to: &[usize]| -> f64 {
        from.iter()
            .map(|&i| {
                to.iter()
                    .map(|&j| d[i][j])
                    .fold(f64::INFINITY, f64::min)
            })
            .fold(0.0, f64::max)
    };
    Ok(sup_inf(&a.members, &b.members).max(sup_inf(&b.members, &a.members)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn space(dist: Vec<Vec<f64>>) -> FiniteMetricSpace {
        FiniteMetricSpace::from_matrix(dist).unwrap()
    }

    #[test]
    fn two_point_space_is_ok() {
        let m = space(vec![vec![0.0, 1.0], vec![1.0, 0.0]]);
        assert!(validate_metric(&m).is_ok());
    }

    #[test]
    fn asymmetry_is_reported_with_witness() {
        let m = space(vec![vec![0.0, 1.0], vec![2.0, 0.0]]);
        let report = validate_metric(&m);
        assert!(report
            .violations
            .iter()
            .any(|v| matches!(v, MetricViolation::Asymmetry { i: 0, j: 1, .. })));
    }

    #[test]
    fn triangle_violation_is_reported_with_witness() {
        // d(0,2) = 3 > d(0,1) + d(1,2) = 2
        let m = space(vec![
            vec![0.0, 1.0, 3.0],
            vec![1.0, 0.0, 1.0],
            vec![3.0, 1.0, 0.0],
        ]);
        let report = validate_metric(&m);
        assert!(report
            .violations
            .iter()
            .any(|v| matches!(v, MetricViolation::Triangle { i: 0, j: 2, via: 1, .. })));
    }

    #[test]
    fn coincident_points_are_rejected() {
        let m = space(vec![vec![0.0, 0.0], vec![0.0, 0.0]]);
        let report = validate_metric(&m);
        assert!(report
            .violations
            .iter()
            .any(|v| matches!(v, MetricViolation::CoincidentPoints { i: 0, j: 1 })));
    }

    #[test]
    fn empty_space_is_a_domain_error() {
        assert!(matches!(
            FiniteMetricSpace::from_matrix(vec![]),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn dimension_mismatch_is_a_structural_error() {
        assert!(matches!(
            FiniteMetricSpace::from_parts(vec!["a".into()], vec![vec![0.0, 1.0]]),
            Err(Error::Structure(_))
        ));
    }

    #[test]
    fn diameter_of_single_point_is_zero() {
        let m = space(vec![vec![0.0]]);
        assert_eq!(m.diameter(), 0.0);
    }

    #[test]
    fn diameter_is_invariant_under_relabeling() {
        let m = space(vec![
            vec![0.0, 1.0, 2.0],
            vec![1.0, 0.0, 1.5],
            vec![2.0, 1.5, 0.0],
        ]);
        // permute indices (2,0,1)
        let perm = [2usize, 0, 1];
        let permuted = space(
            (0..3)
                .map(|i| (0..3).map(|j| m.d(perm[i], perm[j])).collect())
                .collect(),
        );
        assert_eq!(m.diameter(), permuted.diameter());
        assert_eq!(m.diameter(), 2.0);
    }

    #[test]
    fn hausdorff_of_equal_subsets_is_zero() {
        let m = space(vec![
            vec![0.0, 1.0, 2.0],
            vec![1.0, 0.0, 1.0],
            vec![2.0, 1.0, 0.0],
        ]);
        let a = SubsetRef::new(&m, vec![0, 2]).unwrap();
        let b = SubsetRef::new(&m, vec![2, 0]).unwrap();
        assert_eq!(hausdorff_distance(&a, &b).unwrap(), 0.0);
    }

    #[test]
    fn hausdorff_of_point_against_full_circle_is_pi() {
        // one pole against all samples: the antipodal sample dominates
        let circle = crate::graph_spaces::circle_space(8).unwrap();
        let pole = SubsetRef::new(&circle, vec![0]).unwrap();
        let all = SubsetRef::full(&circle);
        let h = hausdorff_distance(&pole, &all).unwrap();
        assert!((h - std::f64::consts::PI).abs() < 1e-9);
    }

    #[test]
    fn hausdorff_rejects_different_ambient_spaces() {
        let m1 = space(vec![vec![0.0, 1.0], vec![1.0, 0.0]]);
        let m2 = space(vec![vec![0.0, 2.0], vec![2.0, 0.0]]);
        let a = SubsetRef::full(&m1);
        let b = SubsetRef::full(&m2);
        assert!(matches!(hausdorff_distance(&a, &b), Err(Error::Domain(_))));
    }

    #[test]
    fn json_round_trip_validates() {
        let m = space(vec![vec![0.0, 1.0], vec![1.0, 0.0]]);
        let text = serde_json::to_string(&m).unwrap();
        let back = FiniteMetricSpace::from_json_str(&text).unwrap();
        assert_eq!(m, back);

        let bad = r#"{"labels":["a","b"],"dist":[[0.0,1.0],[2.0,0.0]]}"#;
        assert!(FiniteMetricSpace::from_json_str(bad).is_err());
    }
}
