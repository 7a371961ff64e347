//! Exact-algorithm oracles and sampler checks for the Monte Carlo layer.

use std::collections::{HashMap, VecDeque};

use crt_core::laws::{DistLaw, LawKind};
use crt_core::montecarlo::bessel::{bessel_hitting_check, hitting_laplace_closed_form};
use crt_core::montecarlo::excursion::*;
use crt_core::montecarlo::labelled::{labelled_tree_with, sample_labelled_tree};
use crt_core::montecarlo::planar::{
    contour_stats, dyck_path_with, sample_planar_tree, tree_from_dyck,
};
use crt_core::montecarlo::rng::replicate_rng;
use crt_core::montecarlo::study::*;
use crt_core::montecarlo::tree::{tree_diameter_double_bfs, Tree, TreeStats};
use crt_core::series::SeriesSpec;
use proptest::prelude::*;
use rand::Rng;

/// Largest pairwise distance by a BFS from every vertex.
fn all_pairs_diameter(t: &Tree) -> u32 {
    let n = t.len();
    let mut best = 0;
    for s in 0..n {
        let mut dist = vec![u32::MAX; n];
        let mut queue = VecDeque::from([s]);
        dist[s] = 0;
        while let Some(u) = queue.pop_front() {
            for v in t.neighbors(u) {
                if dist[v] == u32::MAX {
                    dist[v] = dist[u] + 1;
                    queue.push_back(v);
                }
            }
        }
        best = best.max(*dist.iter().max().unwrap());
    }
    best
}

fn check_lemma(s: &TreeStats) {
    assert!(s.height <= s.diameter && s.diameter <= 2 * s.height);
    assert!(s.diameter as usize <= s.n_vertices - 1);
}

#[test]
fn double_bfs_matches_all_pairs() {
    let mut rng = replicate_rng(2024, 0);
    for i in 0..500 {
        let n = rng.random_range(1..=40);
        let t = if i % 2 == 0 {
            labelled_tree_with(&mut rng, n).unwrap()
        } else {
            tree_from_dyck(&dyck_path_with(&mut rng, n).unwrap()).unwrap()
        };
        let d = tree_diameter_double_bfs(&t);
        assert_eq!(d.diameter, all_pairs_diameter(&t));
        assert!(d.endpoint_attains_height());
        check_lemma(&t.stats());
    }
}

#[test]
fn contour_matches_reconstructed_tree() {
    let mut rng = replicate_rng(99, 0);
    for _ in 0..200 {
        let n = rng.random_range(1..=50);
        let steps = dyck_path_with(&mut rng, n).unwrap();
        let t = tree_from_dyck(&steps).unwrap();
        let s = contour_stats(&steps);
        assert_eq!(s, t.stats());
        check_lemma(&s);
    }
}

#[test]
fn excursion_scan_matches_brute_force() {
    let mut rng = replicate_rng(7, 0);
    for _ in 0..300 {
        let path = sample_excursion_with(&mut rng, 200, Normalization::PaperSqrt2).unwrap();
        let hd = excursion_height_diameter(&path);
        assert!((hd.diameter - brute_force_diameter(&path.values)).abs() <= 1e-12);
        assert!(hd.gamma <= hd.diameter && hd.diameter <= 2.0 * hd.gamma);
        assert_eq!(
            hd.spine.iter().map(|r| r.s + r.gamma).fold(0.0, f64::max),
            hd.diameter
        );
    }
}

#[test]
fn labelled_n3_frequencies() {
    // Key each rooted tree on {0, 1, 2} by (centre, root).
    let mut counts: HashMap<(usize, usize), u32> = HashMap::new();
    let draws = 90_000;
    for i in 0..draws {
        let t = labelled_tree_with(&mut replicate_rng(31, i), 3).unwrap();
        let centre = (0..3).find(|&v| t.neighbors(v).count() == 2).unwrap();
        *counts.entry((centre, t.root())).or_default() += 1;
    }
    assert_eq!(counts.len(), 9);
    let p = 1.0 / 9.0;
    let sigma = (draws as f64 * p * (1.0 - p)).sqrt();
    for c in counts.values() {
        assert!(
            (*c as f64 - draws as f64 * p).abs() <= 3.0 * sigma,
            "{counts:?}"
        );
    }
}

#[test]
fn planar_n3_frequencies() {
    let draws = 40_000;
    let paths = (0..draws)
        .filter(|&i| sample_planar_tree(3, i).unwrap().height == 2)
        .count();
    let sigma = (draws as f64 * 0.25).sqrt();
    assert!((paths as f64 - draws as f64 / 2.0).abs() <= 3.0 * sigma);
}

#[test]
fn trivial_sizes() {
    assert_eq!(
        sample_labelled_tree(1, 0).unwrap(),
        TreeStats {
            n_vertices: 1,
            height: 0,
            diameter: 0
        }
    );
    assert_eq!(
        sample_planar_tree(1, 0).unwrap(),
        TreeStats {
            n_vertices: 1,
            height: 0,
            diameter: 0
        }
    );
    for seed in 0..10 {
        let s = sample_labelled_tree(2, seed).unwrap();
        assert_eq!((s.height, s.diameter), (1, 1));
        let s = sample_planar_tree(2, seed).unwrap();
        assert_eq!((s.height, s.diameter), (1, 1));
    }
}

#[test]
fn excursion_examples() {
    let p = ExcursionPath::from_values(vec![0.0, 0.4, 1.0, 0.3, 0.0], Normalization::StandardIto)
        .unwrap();
    let hd = excursion_height_diameter(&p);
    assert_eq!(hd.diameter, hd.gamma);
    let p = ExcursionPath::from_values(vec![0.0, 1.0, 0.2, 0.9, 0.0], Normalization::StandardIto)
        .unwrap();
    let hd = excursion_height_diameter(&p);
    assert_eq!(hd.gamma, 1.0);
    assert!((hd.diameter - 1.5).abs() <= 1e-15);
}

#[test]
fn standard_excursion_mean_height() {
    let n = 1 << 14;
    let count = 20_000u64;
    let sum: f64 = (0..count)
        .map(|i| {
            sample_excursion_with(&mut replicate_rng(5, i), n, Normalization::StandardIto)
                .unwrap()
                .height()
        })
        .sum();
    let gamma = DistLaw::plain(LawKind::HeightGamma, SeriesSpec::default()).unwrap();
    let target = gamma.moment(1).unwrap().value / std::f64::consts::SQRT_2;
    assert!(
        (sum / count as f64 - target).abs() <= 0.02,
        "{} vs {target}",
        sum / count as f64
    );
}

#[test]
fn bessel_examples() {
    assert!((hitting_laplace_closed_form(1.0, 1.0).unwrap() - 1.0 / 1f64.sinh()).abs() <= 1e-15);
    assert!((hitting_laplace_closed_form(2.0, 1e-12).unwrap() - 1.0).abs() <= 1e-11);
    let c = bessel_hitting_check(2.0, 0.5, 1e-3, 4000, 1).unwrap();
    assert!(c.within, "{c:?}");
}

#[test]
fn study_is_deterministic_and_thread_independent() {
    let mut cfg = StudyConfig::new(Family::LabelledTree, 200, 400, 12);
    let strip = |mut r: StudyReport| {
        r.wall_time = 0.0;
        r.reports.iter_mut().for_each(|g| g.wall_time = 0.0);
        r.config.threads = None;
        r
    };
    let a = strip(convergence_study(&cfg).unwrap());
    cfg.threads = Some(1);
    let b = strip(convergence_study(&cfg).unwrap());
    cfg.threads = Some(4);
    let c = strip(convergence_study(&cfg).unwrap());
    assert_eq!(a, b);
    assert_eq!(a, c);
    assert_eq!(a.reports[0].reference_law, LawKind::SzekeresDelta);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn sampled_trees_satisfy_lemma(seed in any::<u64>(), n in 1usize..300) {
        check_lemma(&sample_labelled_tree(n, seed).unwrap());
        check_lemma(&sample_planar_tree(n, seed).unwrap());
        let t = labelled_tree_with(&mut replicate_rng(seed, 1), n).unwrap();
        prop_assert!(tree_diameter_double_bfs(&t).endpoint_attains_height());
    }

    #[test]
    fn sampled_excursions_are_valid(seed in any::<u64>(), n in 2usize..2000) {
        let p = sample_excursion(n, seed, Normalization::PaperSqrt2).unwrap();
        prop_assert_eq!(p.values.len(), n + 1);
        prop_assert!(p.values[0] == 0.0 && p.values[n] == 0.0);
        prop_assert!(p.values.iter().all(|&v| v >= 0.0));
        prop_assert!(p.values.iter().all(|&v| v <= p.values[p.argmax_index]));
        let hd = excursion_height_diameter(&p);
        prop_assert!(hd.gamma <= hd.diameter && hd.diameter <= 2.0 * hd.gamma);
        prop_assert_eq!(hd.spine.iter().map(|r| r.s + r.gamma).fold(0.0, f64::max), hd.diameter);
        prop_assert!(hd.spine.iter().all(|r| r.s >= 0.0 && r.s <= hd.gamma));
    }
}
