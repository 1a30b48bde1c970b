//! Correspondences, distortion, and Gromov-Hausdorff machinery.
//!
//! The GH distance between finite spaces is half the minimal distortion over
//! correspondences. [`exact_gh`] minimizes over correspondences expressed as
//! unions of two map graphs `f: X -> Y`, `g: Y -> X`, which realize the same
//! optimum with a factorially smaller search space. [`glue`] materializes the
//! ambient-space view: a metric on the disjoint union where the two parts
//! sit at Hausdorff distance at most `dis(R)/2 + eta`.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::metric_core::{
    diameter, hausdorff_distance, validate_metric, FiniteMetricSpace, SubsetRef,
};

/// A relation between two index-identified finite spaces whose projections
/// onto both factors are surjective. Pairs are kept sorted and deduplicated.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Correspondence {
    pub pairs: Vec<(usize, usize)>,
}

impl Correspondence {
    pub fn new(mut pairs: Vec<(usize, usize)>) -> Self {
        pairs.sort_unstable();
        pairs.dedup();
        Self { pairs }
    }

    /// The identity correspondence on an `n`-point space.
    pub fn identity(n: usize) -> Self {
        Self::new((0..n).map(|i| (i, i)).collect())
    }

    /// Swaps the two factors.
    pub fn transpose(&self) -> Self {
        Self::new(self.pairs.iter().map(|&(a, b)| (b, a)).collect())
    }

    /// Checks both projections are surjective onto spaces of the given sizes.
    pub fn validate(&self, left_len: usize, right_len: usize) -> Result<()> {
        if self.pairs.is_empty() {
            return Err(Error::Domain("correspondence has no pairs".into()));
        }
        let mut left = vec![false; left_len];
        let mut right = vec![false; right_len];
        for &(a, b) in &self.pairs {
            if a >= left_len || b >= right_len {
                return Err(Error::Structure(format!("pair ({a},{b}) out of range")));
            }
            left[a] = true;
            right[b] = true;
        }
        if let Some(i) = left.iter().position(|&c| !c) {
            return Err(Error::Domain(format!("left point {i} is unmatched")));
        }
        if let Some(j) = right.iter().position(|&c| !c) {
            return Err(Error::Domain(format!("right point {j} is unmatched")));
        }
        Ok(())
    }

    pub fn from_json_str(text: &str) -> Result<Self> {
        #[derive(Deserialize)]
        struct Doc {
            pairs: Vec<(usize, usize)>,
        }
        let doc: Doc = serde_json::from_str(text)?;
        Ok(Self::new(doc.pairs))
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_json_str(&std::fs::read_to_string(path)?)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        std::fs::write(path, serde_json::to_string_pretty(self)?)?;
        Ok(())
    }
}

/// `sup |d_X(x,x') - d_Y(y,y')|` over pairs of related pairs. Exact max over
/// the finite relation.
pub fn distortion(
    left: &FiniteMetricSpace,
    right: &FiniteMetricSpace,
    rel: &Correspondence,
) -> Result<f64> {
    rel.validate(left.len(), right.len())?;
    relation_distortion(left, right, rel)
}

/// Distortion of a nonempty relation that need not be surjective either way
/// (the star embedding bridges arcs to spoke tips only).
pub(crate) fn relation_distortion(
    left: &FiniteMetricSpace,
    right: &FiniteMetricSpace,
    rel: &Correspondence,
) -> Result<f64> {
    if rel.pairs.is_empty() {
        return Err(Error::Domain("relation has no pairs".into()));
    }
    if let Some(&(a, b)) = rel
        .pairs
        .iter()
        .find(|&&(a, b)| a >= left.len() || b >= right.len())
    {
        return Err(Error::Structure(format!("pair ({a},{b}) out of range")));
    }
    let mut worst = 0.0_f64;
    for (k, &(a, b)) in rel.pairs.iter().enumerate() {
        for &(a2, b2) in &rel.pairs[k..] {
            let gap = (left.d(a, a2) - right.d(b, b2)).abs();
            if gap > worst {
                worst = gap;
            }
        }
    }
    Ok(worst)
}

/// Certified bounds on a GH distance.
#[derive(Debug, Clone)]
pub struct GhBounds {
    pub lower: f64,
    pub upper: f64,
    /// Correspondence achieving `upper` (as half its distortion).
    pub witness: Option<Correspondence>,
    /// True when the search completed and `lower == upper`.
    pub exact: bool,
    pub nodes_visited: u64,
}

/// Certified lower bound for the GH distance: the maximum of the diameter
/// gap and a first-order distance-profile bound, halved.
///
/// For any correspondence and related pair `(x, y)`, the set of distances
/// out of `x` and the set out of `y` are within `dis(R)` of each other in
/// Hausdorff distance on the line; maximizing the best-case match over
/// related partners bounds `dis(R)` from below.
pub fn gh_lower_bounds(left: &FiniteMetricSpace, right: &FiniteMetricSpace) -> f64 {
    let diam_gap = (diameter(left) - diameter(right)).abs();

    let rows = |m: &FiniteMetricSpace| -> Vec<Vec<f64>> {
        m.dist
            .iter()
            .map(|row| {
                let mut r = row.clone();
                r.sort_by(f64::total_cmp);
                r
            })
            .collect()
    };
    let lrows = rows(left);
    let rrows = rows(right);

    // Hausdorff distance between two sorted sets of reals
    let line_hausdorff = |a: &[f64], b: &[f64]| -> f64 {
        let sup_inf = |from: &[f64], to: &[f64]| -> f64 {
            let mut j = 0usize;
            let mut worst = 0.0_f64;
            for &v in from {
                while j + 1 < to.len() && (to[j + 1] - v).abs() <= (to[j] - v).abs() {
                    j += 1;
                }
                worst = worst.max((to[j] - v).abs());
            }
            worst
        };
        sup_inf(a, b).max(sup_inf(b, a))
    };

    let one_side = |from: &[Vec<f64>], to: &[Vec<f64>]| -> f64 {
        from.iter()
            .map(|fr| {
                to.iter()
                    .map(|tr| line_hausdorff(fr, tr))
                    .fold(f64::INFINITY, f64::min)
            })
            .fold(0.0, f64::max)
    };
    let profile = one_side(&lrows, &rrows).max(one_side(&rrows, &lrows));

    diam_gap.max(profile) / 2.0
}

/// Exact GH distance by branch-and-bound over map pairs `(f, g)`.
///
/// Any correspondence contains the union of two map graphs with no larger
/// distortion, so minimizing over such unions attains the optimum. The DFS
/// assigns `f` then `g` values in index order with pruning by the running
/// maximum against the best found and by the certified lower bound; the
/// returned witness is the first optimum in that fixed order, so results are
/// reproducible. Exceeding `budget` nodes degrades to bounds with
/// `exact = false`, never to a wrong answer.
pub fn exact_gh(
    left: &FiniteMetricSpace,
    right: &FiniteMetricSpace,
    budget: Option<u64>,
) -> Result<GhBounds> {
    let nx = left.len();
    let ny = right.len();
    if nx == 0 || ny == 0 {
        return Err(Error::Domain("GH distance needs nonempty spaces".into()));
    }
    let budget = budget.unwrap_or(u64::MAX);
    let dis_floor = 2.0 * gh_lower_bounds(left, right);

    struct Search<'a> {
        left: &'a FiniteMetricSpace,
        right: &'a FiniteMetricSpace,
        f: Vec<usize>,
        g: Vec<usize>,
        best_dis: f64,
        best: Option<(Vec<usize>, Vec<usize>)>,
        nodes: u64,
        budget: u64,
        dis_floor: f64,
        out_of_budget: bool,
    }

    impl Search<'_> {
        fn done(&self) -> bool {
            self.out_of_budget || self.best_dis <= self.dis_floor + 1e-15
        }

        fn assign_f(&mut self, i: usize, running: f64) {
            if self.done() {
                return;
            }
            if i == self.f.len() {
                self.assign_g(0, running);
                return;
            }
            for y in 0..self.right.len() {
                self.nodes += 1;
                if self.nodes > self.budget {
                    self.out_of_budget = true;
                    return;
                }
                let mut local = running;
                for k in 0..i {
                    let gap = (self.left.d(i, k) - self.right.d(y, self.f[k])).abs();
                    local = local.max(gap);
                }
                if local >= self.best_dis - 1e-15 {
                    continue;
                }
                self.f[i] = y;
                self.assign_f(i + 1, local);
                if self.done() {
                    return;
                }
            }
        }

        fn assign_g(&mut self, j: usize, running: f64) {
            if self.done() {
                return;
            }
            if j == self.g.len() {
                if running < self.best_dis - 1e-15 {
                    self.best_dis = running;
                    self.best = Some((self.f.clone(), self.g.clone()));
                }
                return;
            }
            for x in 0..self.left.len() {
                self.nodes += 1;
                if self.nodes > self.budget {
                    self.out_of_budget = true;
                    return;
                }
                let mut local = running;
                for (k, &fk) in self.f.iter().enumerate() {
                    let gap = (self.left.d(x, k) - self.right.d(j, fk)).abs();
                    local = local.max(gap);
                }
                for l in 0..j {
                    let gap = (self.left.d(x, self.g[l]) - self.right.d(j, l)).abs();
                    local = local.max(gap);
                }
                if local >= self.best_dis - 1e-15 {
                    continue;
                }
                self.g[j] = x;
                self.assign_g(j + 1, local);
                if self.done() {
                    return;
                }
            }
        }
    }

    let mut search = Search {
        left,
        right,
        f: vec![0; nx],
        g: vec![0; ny],
        best_dis: f64::INFINITY,
        best: None,
        nodes: 0,
        budget,
        dis_floor,
        out_of_budget: false,
    };
    search.assign_f(0, 0.0);

    let witness = search.best.map(|(f, g)| {
        let mut pairs: Vec<(usize, usize)> = f.iter().enumerate().map(|(i, &y)| (i, y)).collect();
        pairs.extend(g.iter().enumerate().map(|(j, &x)| (x, j)));
        Correspondence::new(pairs)
    });
    let upper = if search.best_dis.is_finite() { search.best_dis / 2.0 } else { f64::INFINITY };
    let exact = !search.out_of_budget;
    let lower = if exact { upper } else { (dis_floor / 2.0).min(upper) };
    Ok(GhBounds { lower, upper, witness, exact, nodes_visited: search.nodes })
}

/// Disjoint union of two finite spaces metrized through a correspondence:
/// each part keeps its metric bitwise, and cross distances are
/// `min over related (x', y') of d(x, x') + dis(R)/2 + eta + d(y', y)`.
#[derive(Debug, Clone)]
pub struct GluedSpace {
    pub left_len: usize,
    pub right_len: usize,
    pub bridge: Correspondence,
    pub slack: f64,
    /// Bridge crossing cost `dis(bridge)/2 + slack`.
    pub bridge_cost: f64,
    pub as_metric: FiniteMetricSpace,
}

impl GluedSpace {
    pub fn left_subset(&self) -> SubsetRef<'_> {
        SubsetRef::new(&self.as_metric, (0..self.left_len).collect()).expect("nonempty part")
    }

    pub fn right_subset(&self) -> SubsetRef<'_> {
        SubsetRef::new(&self.as_metric, (self.left_len..self.left_len + self.right_len).collect())
            .expect("nonempty part")
    }

    pub fn cross(&self, left_idx: usize, right_idx: usize) -> f64 {
        self.as_metric.d(left_idx, self.left_len + right_idx)
    }

    /// Hausdorff distance between the two parts inside the glued space.
    pub fn part_hausdorff(&self) -> f64 {
        hausdorff_distance(&self.left_subset(), &self.right_subset()).expect("same ambient")
    }

    /// `sup over left points of d(x, right part)`.
    pub fn sup_left_to_right(&self) -> f64 {
        (0..self.left_len)
            .map(|i| {
                (0..self.right_len)
                    .map(|j| self.cross(i, j))
                    .fold(f64::INFINITY, f64::min)
            })
            .fold(0.0, f64::max)
    }

    /// `sup over right points of d(y, left part)`.
    pub fn sup_right_to_left(&self) -> f64 {
        (0..self.right_len)
            .map(|j| {
                (0..self.left_len)
                    .map(|i| self.cross(i, j))
                    .fold(f64::INFINITY, f64::min)
            })
            .fold(0.0, f64::max)
    }
}

pub(crate) fn glue_with_slack(
    left: &FiniteMetricSpace,
    right: &FiniteMetricSpace,
    rel: &Correspondence,
    eta: f64,
    validate: bool,
) -> Result<GluedSpace> {
    let dis = relation_distortion(left, right, rel)?;
    if !dis.is_finite() {
        return Err(Error::Precondition("distortion of the bridge must be finite".into()));
    }
    let w = dis / 2.0 + eta;
    let nx = left.len();
    let ny = right.len();
    let n = nx + ny;
    let mut dist = vec![vec![f64::INFINITY; n]; n];
    for i in 0..nx {
        for j in 0..nx {
            dist[i][j] = left.d(i, j);
        }
    }
    for i in 0..ny {
        for j in 0..ny {
            dist[nx + i][nx + j] = right.d(i, j);
        }
    }
    for &(a, b) in &rel.pairs {
        for i in 0..nx {
            let base = left.d(i, a) + w;
            let row = &mut dist[i];
            for j in 0..ny {
                let v = base + right.d(b, j);
                if v < row[nx + j] {
                    row[nx + j] = v;
                }
            }
        }
    }
    for i in 0..nx {
        for j in 0..ny {
            dist[nx + j][i] = dist[i][nx + j];
        }
    }

    let mut labels: Vec<String> = left.labels.iter().map(|l| format!("a:{l}")).collect();
    labels.extend(right.labels.iter().map(|l| format!("b:{l}")));
    let as_metric = FiniteMetricSpace::from_parts(labels, dist)?;
    if validate {
        let report = validate_metric(&as_metric);
        if !report.is_ok() {
            return Err(Error::Construction(format!("glued matrix is not a metric: {report}")));
        }
    }
    Ok(GluedSpace {
        left_len: nx,
        right_len: ny,
        bridge: rel.clone(),
        slack: eta,
        bridge_cost: w,
        as_metric,
    })
}

/// Glues two spaces through a correspondence with strictly positive slack.
///
/// `eta = 0` is rejected: with a distortion-free bridge between distinct
/// spaces it would merge points at distance zero.
pub fn glue(
    left: &FiniteMetricSpace,
    right: &FiniteMetricSpace,
    rel: &Correspondence,
    eta: f64,
) -> Result<GluedSpace> {
    if !(eta > 0.0) {
        return Err(Error::Domain(format!("glue slack must be positive, got {eta}")));
    }
    rel.validate(left.len(), right.len())?;
    glue_with_slack(left, right, rel, eta, true)
}

/// Product point set with the max metric
/// `d((x,z),(x',z')) = max(d_X(x,x'), d_Z(z,z'))`.
///
/// Product index convention: `(i, k) -> i * |Z| + k`.
pub fn max_product(x: &FiniteMetricSpace, z: &FiniteMetricSpace) -> FiniteMetricSpace {
    let nx = x.len();
    let nz = z.len();
    let mut labels = Vec::with_capacity(nx * nz);
    for lx in &x.labels {
        for lz in &z.labels {
            labels.push(format!("({lx}|{lz})"));
        }
    }
    let mut dist = vec![vec![0.0; nx * nz]; nx * nz];
    for i in 0..nx {
        for k in 0..nz {
            for j in 0..nx {
                for l in 0..nz {
                    dist[i * nz + k][j * nz + l] = x.d(i, j).max(z.d(k, l));
                }
            }
        }
    }
    FiniteMetricSpace::from_parts(labels, dist).expect("product of nonempty spaces")
}

/// Lifts `R` between `X` and `Y` to `R_Z = {((x, z), y) : (x, y) in R, z in Z}`
/// between `max_product(X, Z)` and `Y`. Requires `diam(Z) <= dis(R)`, which
/// guarantees `dis(R_Z) <= dis(R)`.
pub fn lift_correspondence(
    x: &FiniteMetricSpace,
    y: &FiniteMetricSpace,
    rel: &Correspondence,
    z: &FiniteMetricSpace,
) -> Result<(FiniteMetricSpace, Correspondence)> {
    let dis = distortion(x, y, rel)?;
    let dz = diameter(z);
    if dz > dis + 1e-9 {
        return Err(Error::Precondition(format!(
            "lift needs diam(Z) <= dis(R): {dz} > {dis}"
        )));
    }
    let nz = z.len();
    let product = max_product(x, z);
    let mut pairs = Vec::with_capacity(rel.pairs.len() * nz);
    for &(i, j) in &rel.pairs {
        for k in 0..nz {
            pairs.push((i * nz + k, j));
        }
    }
    Ok((product, Correspondence::new(pairs)))
}

/// The four-spoke star placed against a sampled circle: the circle is split
/// into four closed quarter arcs and every point of arc `i` is bridged to
/// spoke tip `p_i` at cost `pi/4`. Boundary samples shared by two arcs take
/// the better of the two bridges.
///
/// The result keeps every circle sample at distance exactly `pi/4` from the
/// star while the star's center stays `pi/2` away from the whole circle. Any
/// triangle-inequality failure of the assembled matrix is reported as a
/// construction error rather than being clamped.
pub fn star4_embedding(n: usize) -> Result<GluedSpace> {
    if n < 8 || !n.is_multiple_of(4) {
        return Err(Error::Domain(format!(
            "star4 embedding needs a sample count divisible by 4 and >= 8, got {n}"
        )));
    }
    let circle = crate::graph_spaces::circle_space(n)?;
    let star = crate::graph_spaces::build_star4();
    let net = crate::graph_spaces::epsilon_net(&star, 2.0 * std::f64::consts::PI / n as f64)?;
    let table = crate::graph_spaces::graph_metric(&star, &net)?;

    // net starts with the vertices, so tip p_i sits at net index i
    let quarter = n / 4;
    let mut pairs = Vec::new();
    for j in 0..n {
        for arc in 0..4usize {
            let lo = arc * quarter;
            let hi = (arc + 1) * quarter;
            // closed arcs: the wrap sample 0 also belongs to the last arc
            if (j >= lo && j <= hi) || (arc == 3 && j == 0) {
                pairs.push((j, arc + 1));
            }
        }
    }
    let rel = Correspondence::new(pairs);
    let dis = relation_distortion(&circle, &table.metric, &rel)?;
    if (dis - std::f64::consts::FRAC_PI_2).abs() > 1e-9 {
        return Err(Error::Construction(format!(
            "star bridge distortion should be pi/2, got {dis}"
        )));
    }
    glue_with_slack(&circle, &table.metric, &rel, 0.0, true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph_spaces::{build_e, epsilon_net, graph_metric};
    use crate::metric_core::validate_metric;
    use proptest::prelude::*;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

    const TOL: f64 = 1e-9;

    fn space(dist: Vec<Vec<f64>>) -> FiniteMetricSpace {
        FiniteMetricSpace::from_matrix(dist).unwrap()
    }

    fn two_point(d: f64) -> FiniteMetricSpace {
        space(vec![vec![0.0, d], vec![d, 0.0]])
    }

    fn one_point() -> FiniteMetricSpace {
        space(vec![vec![0.0]])
    }

    /// Test oracle: number of correspondences between index sets of the
    /// given sizes (subsets of the product with surjective projections).
    fn count_correspondences(nx: usize, ny: usize) -> usize {
        let cells = nx * ny;
        (1u32..(1 << cells))
            .filter(|mask| {
                let mut lcov = vec![false; nx];
                let mut rcov = vec![false; ny];
                for c in 0..cells {
                    if mask & (1 << c) != 0 {
                        lcov[c / ny] = true;
                        rcov[c % ny] = true;
                    }
                }
                lcov.into_iter().all(|c| c) && rcov.into_iter().all(|c| c)
            })
            .count()
    }

    /// Test oracle: minimal distortion over ALL correspondences, by subset
    /// enumeration. Only usable for |X| * |Y| <= 20.
    fn brute_force_min_distortion(x: &FiniteMetricSpace, y: &FiniteMetricSpace) -> f64 {
        let nx = x.len();
        let ny = y.len();
        let cells = nx * ny;
        assert!(cells <= 20);
        let mut best = f64::INFINITY;
        for mask in 1u32..(1 << cells) {
            let pairs: Vec<(usize, usize)> = (0..cells)
                .filter(|c| mask & (1 << c) != 0)
                .map(|c| (c / ny, c % ny))
                .collect();
            let mut lcov = vec![false; nx];
            let mut rcov = vec![false; ny];
            for &(a, b) in &pairs {
                lcov[a] = true;
                rcov[b] = true;
            }
            if !(lcov.iter().all(|&c| c) && rcov.iter().all(|&c| c)) {
                continue;
            }
            let mut dis = 0.0_f64;
            for &(a, b) in &pairs {
                for &(a2, b2) in &pairs {
                    dis = dis.max((x.d(a, a2) - y.d(b, b2)).abs());
                }
            }
            best = best.min(dis);
        }
        best
    }

    #[test]
    fn identity_correspondence_has_zero_distortion() {
        let m = space(vec![
            vec![0.0, 1.0, 2.0],
            vec![1.0, 0.0, 1.5],
            vec![2.0, 1.5, 0.0],
        ]);
        let id = Correspondence::identity(3);
        assert_eq!(distortion(&m, &m, &id).unwrap(), 0.0);
    }

    #[test]
    fn non_surjective_correspondence_is_rejected() {
        let m = two_point(1.0);
        let r = Correspondence::new(vec![(0, 0), (1, 0)]);
        assert!(matches!(distortion(&m, &m, &r), Err(Error::Domain(_))));
    }

    #[test]
    fn exact_gh_of_a_space_with_itself_is_zero() {
        let m = space(vec![
            vec![0.0, 1.0, 2.0],
            vec![1.0, 0.0, 1.5],
            vec![2.0, 1.5, 0.0],
        ]);
        let bounds = exact_gh(&m, &m, None).unwrap();
        assert!(bounds.exact);
        assert!(bounds.upper.abs() < TOL);
        let witness = bounds.witness.unwrap();
        assert_eq!(witness, Correspondence::identity(3));
    }

    #[test]
    fn exact_gh_to_a_point_is_half_diameter() {
        let m = space(vec![
            vec![0.0, 1.0, 2.0],
            vec![1.0, 0.0, 1.5],
            vec![2.0, 1.5, 0.0],
        ]);
        let bounds = exact_gh(&m, &one_point(), None).unwrap();
        assert!(bounds.exact);
        assert!((bounds.upper - 1.0).abs() < TOL);
    }

    #[test]
    fn exact_gh_between_two_point_spaces() {
        // all 7 correspondences between 2-point sets, enumerated by the
        // oracle, give |a - b| / 2
        assert_eq!(count_correspondences(2, 2), 7);
        let x = two_point(3.0);
        let y = two_point(1.25);
        let oracle = brute_force_min_distortion(&x, &y);
        assert!((oracle - 1.75).abs() < TOL);
        let bounds = exact_gh(&x, &y, None).unwrap();
        assert!((bounds.upper - oracle / 2.0).abs() < TOL);
        let back = exact_gh(&y, &x, None).unwrap();
        assert!((bounds.upper - back.upper).abs() < TOL);
    }

    #[test]
    fn exact_gh_matches_brute_force_on_mixed_sizes() {
        let x = space(vec![
            vec![0.0, 2.0, 1.0],
            vec![2.0, 0.0, 2.5],
            vec![1.0, 2.5, 0.0],
        ]);
        let y = two_point(0.75);
        let oracle = brute_force_min_distortion(&x, &y);
        let bounds = exact_gh(&x, &y, None).unwrap();
        assert!(bounds.exact);
        assert!((2.0 * bounds.upper - oracle).abs() < 1e-12);
    }

    #[test]
    fn budget_exhaustion_degrades_to_bounds() {
        let x = space(vec![
            vec![0.0, 1.0, 2.0, 1.2],
            vec![1.0, 0.0, 1.5, 0.7],
            vec![2.0, 1.5, 0.0, 1.9],
            vec![1.2, 0.7, 1.9, 0.0],
        ]);
        let y = space(vec![
            vec![0.0, 0.4, 1.1, 2.2],
            vec![0.4, 0.0, 0.8, 1.8],
            vec![1.1, 0.8, 0.0, 1.0],
            vec![2.2, 1.8, 1.0, 0.0],
        ]);
        let full = exact_gh(&x, &y, None).unwrap();
        assert!(full.exact);
        let starved = exact_gh(&x, &y, Some(10)).unwrap();
        assert!(!starved.exact);
        assert!(starved.lower <= starved.upper);
        assert!(full.upper <= starved.upper + TOL);
    }

    #[test]
    fn lower_bound_examples() {
        let m = space(vec![
            vec![0.0, 1.0, 2.0],
            vec![1.0, 0.0, 1.5],
            vec![2.0, 1.5, 0.0],
        ]);
        assert_eq!(gh_lower_bounds(&m, &m), 0.0);

        let circle = crate::graph_spaces::circle_space(8).unwrap();
        assert!((gh_lower_bounds(&circle, &one_point()) - FRAC_PI_2).abs() < TOL);
    }

    #[test]
    fn lower_bound_never_exceeds_exact() {
        let x = space(vec![
            vec![0.0, 1.0, 2.0],
            vec![1.0, 0.0, 1.5],
            vec![2.0, 1.5, 0.0],
        ]);
        let y = space(vec![vec![0.0, 0.5], vec![0.5, 0.0]]);
        let lb = gh_lower_bounds(&x, &y);
        let exact = exact_gh(&x, &y, None).unwrap();
        assert!(lb <= exact.upper + TOL);
    }

    #[test]
    fn circle_net_vs_e_net_lower_bound_is_positive_and_small() {
        let eps = PI / 32.0;
        let circle = crate::graph_spaces::build_circle_graph(8, FRAC_PI_4).unwrap();
        let cnet = epsilon_net(&circle, eps).unwrap();
        let ctable = graph_metric(&circle, &cnet).unwrap();
        let e = build_e();
        let enet = epsilon_net(&e, eps).unwrap();
        let etable = graph_metric(&e, &enet).unwrap();
        let lb = gh_lower_bounds(&ctable.metric, &etable.metric);
        assert!(lb > 0.0);
        assert!(lb <= FRAC_PI_4 + 2.0 * eps);
    }

    #[test]
    fn identity_glue_has_cross_distance_eta() {
        let m = space(vec![
            vec![0.0, 1.0, 2.0],
            vec![1.0, 0.0, 1.5],
            vec![2.0, 1.5, 0.0],
        ]);
        let eta = 1e-3;
        let glued = glue(&m, &m, &Correspondence::identity(3), eta).unwrap();
        for i in 0..3 {
            assert!((glued.cross(i, i) - eta).abs() < TOL);
        }
        // restriction isometry is bitwise
        for i in 0..3 {
            for j in 0..3 {
                assert_eq!(glued.as_metric.d(i, j), m.d(i, j));
                assert_eq!(glued.as_metric.d(3 + i, 3 + j), m.d(i, j));
            }
        }
        assert!(glued.part_hausdorff() <= eta + TOL);
        assert!(matches!(
            glue(&m, &m, &Correspondence::identity(3), 0.0),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn glue_respects_hausdorff_bound() {
        let x = space(vec![
            vec![0.0, 1.0, 2.0],
            vec![1.0, 0.0, 1.5],
            vec![2.0, 1.5, 0.0],
        ]);
        let y = two_point(2.4);
        let rel = Correspondence::new(vec![(0, 0), (1, 0), (2, 1)]);
        let eta = 1e-6;
        let dis = distortion(&x, &y, &rel).unwrap();
        let glued = glue(&x, &y, &rel, eta).unwrap();
        assert!(validate_metric(&glued.as_metric).is_ok());
        assert!(glued.part_hausdorff() <= dis / 2.0 + eta + TOL);
    }

    #[test]
    fn max_product_with_a_point_is_isometric() {
        let x = space(vec![
            vec![0.0, 1.0, 2.0],
            vec![1.0, 0.0, 1.5],
            vec![2.0, 1.5, 0.0],
        ]);
        let prod = max_product(&x, &one_point());
        assert_eq!(prod.dist, x.dist);
    }

    #[test]
    fn max_product_of_two_point_spaces() {
        let a = 2.0;
        let b = 1.0;
        let prod = max_product(&two_point(a), &two_point(b));
        // indices (0,0)=0,(0,1)=1,(1,0)=2,(1,1)=3
        assert_eq!(prod.d(0, 1), b);
        assert_eq!(prod.d(0, 2), a);
        assert_eq!(prod.d(0, 3), a);
        assert_eq!(prod.d(1, 2), a);
        assert_eq!(prod.diameter(), a);
    }

    proptest! {
        #[test]
        fn max_product_satisfies_triangle_inequality(
            xs in proptest::collection::vec((0.0_f64..10.0, 0.0_f64..10.0), 3),
            zs in proptest::collection::vec((0.0_f64..10.0, 0.0_f64..10.0), 2),
        ) {
            let euclid = |pts: &[(f64, f64)]| -> FiniteMetricSpace {
                let dist = pts
                    .iter()
                    .map(|&(x1, y1)| {
                        pts.iter().map(|&(x2, y2)| ((x1 - x2).powi(2) + (y1 - y2).powi(2)).sqrt()).collect()
                    })
                    .collect();
                FiniteMetricSpace::from_matrix(dist).unwrap()
            };
            let prod = max_product(&euclid(&xs), &euclid(&zs));
            let n = prod.len();
            for i in 0..n {
                for j in 0..n {
                    for k in 0..n {
                        prop_assert!(prod.d(i, j) <= prod.d(i, k) + prod.d(k, j) + 1e-12);
                    }
                }
            }
        }
    }

    #[test]
    fn lift_with_single_point_preserves_distortion() {
        let x = space(vec![
            vec![0.0, 1.0, 2.0],
            vec![1.0, 0.0, 1.5],
            vec![2.0, 1.5, 0.0],
        ]);
        let y = two_point(1.4);
        let rel = Correspondence::new(vec![(0, 0), (1, 0), (2, 1)]);
        let dis = distortion(&x, &y, &rel).unwrap();
        let (prod, lifted) = lift_correspondence(&x, &y, &rel, &one_point()).unwrap();
        let lifted_dis = distortion(&prod, &y, &lifted).unwrap();
        assert!((dis - lifted_dis).abs() < TOL);
    }

    #[test]
    fn lift_rejects_oversized_factor() {
        let x = two_point(1.0);
        let rel = Correspondence::identity(2);
        // dis(identity on equal spaces) = 0, so any spread factor is too big
        let z = two_point(0.5);
        assert!(matches!(
            lift_correspondence(&x, &x, &rel, &z),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn lift_battery_never_increases_distortion() {
        use crate::random::{random_correspondence, random_euclidean_space};
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        for trial in 0..40 {
            let x = random_euclidean_space(&mut rng, 2, 5, 4.0);
            let y = random_euclidean_space(&mut rng, 2, 5, 4.0);
            let rel = random_correspondence(&mut rng, x.len(), y.len());
            let dis = distortion(&x, &y, &rel).unwrap();
            let z = if dis > 0.0 {
                random_euclidean_space(&mut rng, 2, 4, dis * 0.45)
            } else {
                one_point()
            };
            let (prod, lifted) = lift_correspondence(&x, &y, &rel, &z).unwrap();
            let lifted_dis = distortion(&prod, &y, &lifted).unwrap();
            assert!(
                lifted_dis <= dis + 1e-12,
                "trial {trial}: lifted {lifted_dis} > original {dis}"
            );
        }
    }

    #[test]
    fn star4_embedding_realizes_the_quarter_bridge() {
        let n = 64;
        let glued = star4_embedding(n).unwrap();
        assert!(validate_metric(&glued.as_metric).is_ok());

        // interior of the first quarter arc sits exactly pi/4 from tip p1
        // (star part order: center, p1..p4)
        let z = n / 8;
        assert!((glued.cross(z, 1) - FRAC_PI_4).abs() < TOL);

        // center is pi/2 from every circle sample
        for j in 0..n {
            assert!((glued.cross(j, 0) - FRAC_PI_2).abs() < TOL);
        }

        // circle side is pi/4-close to the star, the star is not pi/4-close
        // to the circle (the center spoils it)
        assert!((glued.sup_left_to_right() - FRAC_PI_4).abs() < TOL);
        assert!(glued.sup_right_to_left() >= FRAC_PI_2 - TOL);

        // but the four tips alone cover the circle at pi/4
        let tips = SubsetRef::new(&glued.as_metric, (n + 1..n + 5).collect()).unwrap();
        let circle_part = glued.left_subset();
        let h = hausdorff_distance(&circle_part, &tips).unwrap();
        assert!((h - FRAC_PI_4).abs() < TOL);

        assert!(star4_embedding(10).is_err());
    }
}
