//! Cross-module invariants on randomized instances.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use gh_forge_core::gh_solver::{distortion, exact_gh, gh_lower_bounds, glue, Correspondence};
use gh_forge_core::graph_spaces::{build_circle_graph, build_e, epsilon_net, graph_metric};
use gh_forge_core::metric_core::{
    hausdorff_distance, validate_metric, FiniteMetricSpace, SubsetRef,
};
use gh_forge_core::random::{random_correspondence, random_euclidean_space, random_tree};

#[test]
fn hausdorff_is_symmetric_and_triangular_on_random_subsets() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let space = random_euclidean_space(&mut rng, 3, 12, 5.0);
    let n = space.len();
    let random_subset = |rng: &mut ChaCha8Rng| -> Vec<usize> {
        let size = rng.random_range(1..=n);
        let mut members: Vec<usize> = (0..size).map(|_| rng.random_range(0..n)).collect();
        members.sort_unstable();
        members.dedup();
        members
    };
    for _ in 0..60 {
        let a = SubsetRef::new(&space, random_subset(&mut rng)).unwrap();
        let b = SubsetRef::new(&space, random_subset(&mut rng)).unwrap();
        let c = SubsetRef::new(&space, random_subset(&mut rng)).unwrap();
        let ab = hausdorff_distance(&a, &b).unwrap();
        let ba = hausdorff_distance(&b, &a).unwrap();
        let bc = hausdorff_distance(&b, &c).unwrap();
        let ac = hausdorff_distance(&a, &c).unwrap();
        assert_eq!(ab, ba);
        assert!(ac <= ab + bc + 1e-12, "triangle failed: {ac} > {ab} + {bc}");
    }
}

#[test]
fn every_graph_metric_output_validates() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    let mut graphs = vec![build_e(), build_circle_graph(8, std::f64::consts::FRAC_PI_4).unwrap()];
    for _ in 0..6 {
        graphs.push(random_tree(&mut rng, 10));
    }
    for g in &graphs {
        let net = epsilon_net(g, 0.3).unwrap();
        let table = graph_metric(g, &net).unwrap();
        let report = validate_metric(&table.metric);
        assert!(report.is_ok(), "graph metric failed validation: {report}");
    }
}

#[test]
fn distortion_dominates_twice_the_lower_bound() {
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    for trial in 0..100 {
        let x = random_euclidean_space(&mut rng, 2, 6, 4.0);
        let y = random_euclidean_space(&mut rng, 2, 6, 4.0);
        let rel = random_correspondence(&mut rng, x.len(), y.len());
        let dis = distortion(&x, &y, &rel).unwrap();
        let lb = gh_lower_bounds(&x, &y);
        assert!(
            dis >= 2.0 * lb - 1e-12,
            "trial {trial}: distortion {dis} below twice the lower bound {lb}"
        );
    }
}

#[test]
fn exact_gh_is_symmetric_and_detects_isometry() {
    let mut rng = ChaCha8Rng::seed_from_u64(44);
    for _ in 0..10 {
        let x = random_euclidean_space(&mut rng, 2, 5, 3.0);
        let y = random_euclidean_space(&mut rng, 2, 5, 3.0);
        let xy = exact_gh(&x, &y, None).unwrap();
        let yx = exact_gh(&y, &x, None).unwrap();
        assert!((xy.upper - yx.upper).abs() <= 1e-12);

        // a relabeled copy is at distance zero
        let n = x.len();
        let mut perm: Vec<usize> = (0..n).collect();
        for i in (1..n).rev() {
            perm.swap(i, rng.random_range(0..=i));
        }
        let shuffled = FiniteMetricSpace::from_matrix(
            (0..n).map(|i| (0..n).map(|j| x.d(perm[i], perm[j])).collect()).collect(),
        )
        .unwrap();
        let zero = exact_gh(&x, &shuffled, None).unwrap();
        assert!(zero.upper.abs() <= 1e-12);
        assert!(is_isometric_by_permutation(&x, &shuffled));

        // zero only when some label bijection matches the matrices
        assert_eq!(xy.upper.abs() <= 1e-12, is_isometric_by_permutation(&x, &y));
    }
}

/// Test oracle: isometry detection by exhaustive permutation search.
fn is_isometric_by_permutation(x: &FiniteMetricSpace, y: &FiniteMetricSpace) -> bool {
    if x.len() != y.len() {
        return false;
    }
    let n = x.len();
    let mut perm: Vec<usize> = (0..n).collect();
    permute(&mut perm, 0, &mut |p| {
        (0..n).all(|i| (0..n).all(|j| (x.d(i, j) - y.d(p[i], p[j])).abs() <= 1e-9))
    })
}

fn permute(perm: &mut Vec<usize>, k: usize, check: &mut impl FnMut(&[usize]) -> bool) -> bool {
    if k == perm.len() {
        return check(perm);
    }
    for i in k..perm.len() {
        perm.swap(k, i);
        if permute(perm, k + 1, check) {
            perm.swap(k, i);
            return true;
        }
        perm.swap(k, i);
    }
    false
}

/// Test oracle: minimal distortion over all correspondences by subset
/// enumeration.
fn enumerate_min_distortion(x: &FiniteMetricSpace, y: &FiniteMetricSpace) -> f64 {
    let nx = x.len();
    let ny = y.len();
    let cells = nx * ny;
    assert!(cells <= 16);
    let mut best = f64::INFINITY;
    for mask in 1u32..(1 << cells) {
        let mut lcov = 0u32;
        let mut rcov = 0u32;
        for c in 0..cells {
            if mask & (1 << c) != 0 {
                lcov |= 1 << (c / ny);
                rcov |= 1 << (c % ny);
            }
        }
        if lcov.count_ones() as usize != nx || rcov.count_ones() as usize != ny {
            continue;
        }
        let mut dis = 0.0_f64;
        for a in 0..cells {
            if mask & (1 << a) == 0 {
                continue;
            }
            for b in a..cells {
                if mask & (1 << b) != 0 {
                    dis = dis.max((x.d(a / ny, b / ny) - y.d(a % ny, b % ny)).abs());
                }
            }
        }
        best = best.min(dis);
    }
    best
}

#[test]
fn exact_gh_satisfies_the_triangle_inequality_on_small_triples() {
    let mut rng = ChaCha8Rng::seed_from_u64(55);
    let family: Vec<FiniteMetricSpace> =
        (0..6).map(|_| random_euclidean_space(&mut rng, 2, 4, 3.0)).collect();
    for i in 0..family.len() {
        for j in 0..family.len() {
            for k in 0..family.len() {
                if i == j || j == k || i == k {
                    continue;
                }
                let dij = enumerate_min_distortion(&family[i], &family[j]) / 2.0;
                let djk = enumerate_min_distortion(&family[j], &family[k]) / 2.0;
                let dik = enumerate_min_distortion(&family[i], &family[k]) / 2.0;
                assert!(dik <= dij + djk + 1e-12, "triple ({i},{j},{k}) violates the triangle");
                // the search agrees with the oracle on every leg
                let search = exact_gh(&family[i], &family[k], None).unwrap();
                assert!((search.upper - dik).abs() <= 1e-12);
            }
        }
    }
}

#[test]
fn gluing_circle_and_tripod_nets_lands_at_quarter_pi() {
    // the canonical map's graph glues its two nets at Hausdorff distance
    // at most dis/2 + eta = pi/4 + eta
    let pg = gh_forge_core::constructions::phi_graph(256).unwrap();
    let eta = 1e-6;
    let glued = glue(&pg.left, &pg.right.metric, &pg.pairs, eta).unwrap();
    let h = glued.part_hausdorff();
    assert!(h <= std::f64::consts::FRAC_PI_4 + eta + 1e-12, "hausdorff {h}");
    assert!(h > 0.0);
}

#[test]
fn two_point_factor_of_width_half_pi_lifts_the_map_graph() {
    let pg = gh_forge_core::constructions::phi_graph(64).unwrap();
    let transposed = pg.pairs.transpose();
    let z = FiniteMetricSpace::from_matrix(vec![
        vec![0.0, std::f64::consts::FRAC_PI_2],
        vec![std::f64::consts::FRAC_PI_2, 0.0],
    ])
    .unwrap();
    let (product, lifted) =
        gh_forge_core::gh_solver::lift_correspondence(&pg.right.metric, &pg.left, &transposed, &z)
            .unwrap();
    let dis = distortion(&product, &pg.left, &lifted).unwrap();
    assert!(dis <= std::f64::consts::FRAC_PI_2 + 1e-9, "lifted distortion {dis}");
}

#[test]
fn glue_hausdorff_bound_is_achievable() {
    // gluing two copies of a two-point space through the identity realizes
    // the bound exactly: hausdorff = dis/2 + eta = eta
    let m = FiniteMetricSpace::from_matrix(vec![vec![0.0, 1.0], vec![1.0, 0.0]]).unwrap();
    let eta = 1e-4;
    let glued = glue(&m, &m, &Correspondence::identity(2), eta).unwrap();
    let h = glued.part_hausdorff();
    assert!((h - eta).abs() <= 1e-15);
}
