mod common;

use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;
use std::sync::Arc;

use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use proptest::prelude::*;

use horograph::connection::{ConnectionFunction, Preset};
use horograph::graphgen::{self, Graph};
use horograph::pointset::{self, Point, PointSet};
use horograph::rng::keyed_index;
use horograph::runner::ExperimentConfig;
use horograph::{spectral, stats, walks};

fn shipped_config() -> ExperimentConfig {
    ExperimentConfig::load(&Path::new(env!("CARGO_MANIFEST_DIR")).join("config/experiment.toml")).unwrap()
}

/// Hamilton apportionment in exact rational arithmetic.
fn largest_remainder_exact(weights: &[f64], n: usize) -> Vec<usize> {
    let ws: Vec<BigRational> = weights.iter().map(|&w| BigRational::from_float(w).unwrap()).collect();
    let total: BigRational = ws.iter().cloned().fold(BigRational::zero(), |a, b| a + b);
    let quotas: Vec<BigRational> = ws.iter().map(|w| w * BigRational::from_integer(n.into()) / &total).collect();
    let mut counts: Vec<usize> = quotas.iter().map(|q| q.floor().to_integer().to_usize().unwrap()).collect();
    let mut order: Vec<usize> = (0..weights.len()).collect();
    // stable sort keeps config order among equal remainders
    order.sort_by(|&a, &b| (&quotas[b] - quotas[b].floor()).cmp(&(&quotas[a] - quotas[a].floor())));
    let short = n - counts.iter().sum::<usize>();
    for &i in order.iter().take(short) {
        counts[i] += 1;
    }
    counts
}

#[test]
fn city_allocation_matches_exact_apportionment() {
    let cities = shipped_config().cities().unwrap();
    let weights: Vec<f64> = cities.iter().map(|c| c.weight).collect();
    let got = pointset::largest_remainder(&weights, 2400).unwrap();
    assert_eq!(got, largest_remainder_exact(&weights, 2400));
    assert_eq!(got.iter().sum::<usize>(), 2400);
    assert_eq!(pointset::largest_remainder(&[1.0, 1.0, 1.0], 4).unwrap(), vec![2, 1, 1]);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn allocation_agrees_with_rational_oracle(
        weights in prop::collection::vec(0.01f64..20.0, 1..9),
        n in 0usize..5000,
    ) {
        prop_assert_eq!(pointset::largest_remainder(&weights, n).unwrap(), largest_remainder_exact(&weights, n));
    }

    #[test]
    fn threshold_graph_matches_all_pairs(seed in any::<u64>(), n in 2usize..150, r in 0.05f64..3.0) {
        let ps = pointset::sample_uniform(n, 8.0, 8.0, seed).unwrap();
        let g = graphgen::threshold_graph(&ps, r).unwrap();
        let mut expected = BTreeSet::new();
        for i in 0..n {
            for j in i + 1..n {
                if ps.distance(i, j) <= r {
                    expected.insert((i, j));
                }
            }
        }
        prop_assert_eq!(g.edges().collect::<BTreeSet<_>>(), expected);
    }

    #[test]
    fn layered_edges_lie_in_their_bands(seed in any::<u64>(), n in 2usize..120) {
        let ps = Arc::new(pointset::sample_uniform(n, 8.0, 8.0, seed).unwrap());
        let cf = Preset::S.function();
        let lg = graphgen::generate(Arc::clone(&ps), &cf, seed ^ 1).unwrap();
        for e in lg.tagged_edges() {
            let (lo, hi, p) = cf.band(e.band as usize);
            let d = ps.distance(e.u as usize, e.v as usize);
            prop_assert!(p > 0.0);
            prop_assert!((d > lo || (lo == 0.0 && d >= 0.0)) && d <= hi);
        }
        // the first band has probability 1, so every close pair is present
        let g = lg.graph();
        for i in 0..n {
            for j in i + 1..n {
                if ps.distance(i, j) <= 0.15 {
                    prop_assert!(g.has_edge(i, j));
                }
            }
        }
    }

    #[test]
    fn lanczos_matches_dense(seed in any::<u64>(), n in 2usize..60, p in 0.02f64..0.5) {
        let mut rng = common::rng(seed);
        let g = common::random_connected(&mut rng, n, p);
        let it = spectral::lambda1(&g, 1e-10).unwrap().lambda1;
        let dense = spectral::dense_spectrum(&g).unwrap();
        prop_assert!((it - dense[1]).abs() < 1e-8, "{} vs {}", it, dense[1]);
        prop_assert!(dense[0].abs() < 1e-10);
        prop_assert!(dense.iter().all(|&x| (-1e-10..=2.0 + 1e-10).contains(&x)));
    }

    #[test]
    fn distance_stats_match_double_loop(seed in any::<u64>(), steps in 0usize..60) {
        let mut rng = common::rng(seed);
        let g = common::random_connected(&mut rng, 25, 0.15);
        let ps = pointset::sample_uniform(25, 8.0, 8.0, seed).unwrap();
        let trace = walks::simple_walk(&g, 0, steps, seed).unwrap();
        let got = walks::trace_distance_stats(&trace, &ps).unwrap();
        let set: Vec<usize> = trace.vertices.iter().copied().collect::<BTreeSet<_>>().into_iter().collect();
        let (mut sum, mut max, mut pairs) = (0.0, 0.0f64, 0usize);
        for a in 0..set.len() {
            for b in a + 1..set.len() {
                let d = ps.distance(set[a], set[b]);
                sum += d;
                max = max.max(d);
                pairs += 1;
            }
        }
        let mean = if pairs == 0 { 0.0 } else { sum / pairs as f64 };
        prop_assert!((got.mean_pairwise - mean).abs() < 1e-12);
        prop_assert_eq!(got.max_pairwise, max);
    }
}

/// Conductance by plain enumeration of every non-trivial subset, compared as floats.
fn conductance_naive(g: &Graph) -> f64 {
    let n = g.n();
    let vol = g.volume() as f64;
    let mut best = f64::INFINITY;
    for mask in 1u32..(1 << n) - 1 {
        let inside = |v: usize| mask >> v & 1 == 1;
        let boundary = g.edges().filter(|&(u, v)| inside(u) != inside(v)).count() as f64;
        let vs: f64 = (0..n).filter(|&v| inside(v)).map(|v| g.deg(v) as f64).sum();
        best = best.min(boundary / vs.min(vol - vs));
    }
    best
}

#[test]
fn conductance_matches_naive_enumeration() {
    let mut rng = common::rng(9);
    for trial in 0..60 {
        let n = 2 + trial % 10;
        let g = common::random_connected(&mut rng, n, 0.3);
        let w = spectral::conductance_bruteforce(&g).unwrap();
        assert!((w.conductance_value - conductance_naive(&g)).abs() < 1e-12, "trial {trial}");
        assert!(w.subset.contains(&0));
        let inside: BTreeSet<usize> = w.subset.iter().copied().collect();
        let boundary = g.edges().filter(|(u, v)| inside.contains(u) != inside.contains(v)).count();
        assert_eq!(boundary, w.boundary_edges);
    }
}

/// Straight-line replicating walk: a time-indexed schedule of pending
/// children instead of start-step checks on every replicant.
fn reference_replication(g: &Graph, start: usize, steps: usize, delay: usize, seed: u64) -> Vec<(usize, usize, usize)> {
    const REPLICANT_TAG: u64 = 3;
    let mut seen = vec![false; g.n()];
    seen[start] = true;
    let mut walking: Vec<(usize, usize)> = Vec::new(); // (id, position)
    let mut pending: BTreeMap<usize, Vec<(usize, usize)>> = BTreeMap::new();
    pending.entry(0).or_default().push((0, start));
    let mut next_id = 1;
    let mut events = Vec::new();
    for t in 0..=steps {
        if t > 0 {
            for slot in walking.iter_mut() {
                let (id, v) = *slot;
                let nb = g.neighbors(v);
                let w = nb[keyed_index(seed, &[REPLICANT_TAG, id as u64, t as u64], nb.len())] as usize;
                slot.1 = w;
                if !seen[w] {
                    seen[w] = true;
                    events.push((t, w, id));
                    pending.entry(t + delay).or_default().push((next_id, w));
                    next_id += 1;
                }
            }
        }
        if let Some(born) = pending.remove(&t) {
            walking.extend(born);
        }
    }
    events
}

#[test]
fn replication_matches_reference_scheduler() {
    let ten = Graph::from_edges(
        10,
        [(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 6), (6, 7), (7, 8), (8, 9), (9, 0), (0, 5), (2, 7), (3, 8)],
    )
    .unwrap();
    let mut rng = common::rng(17);
    let mut graphs = vec![(ten, 0usize)];
    for _ in 0..20 {
        let g = common::random_connected(&mut rng, 40, 0.05);
        graphs.push((g, 7));
    }
    for (gi, (g, start)) in graphs.iter().enumerate() {
        for (steps, delay, seed) in [(30, 3, 1u64), (100, 10, 2), (12, 0, 3), (5, 50, 4)] {
            let rec = walks::replicating_walk(g, *start, steps, delay, seed).unwrap();
            let got: Vec<(usize, usize, usize)> = rec.spawn_events.iter().map(|e| (e.step, e.vertex, e.parent)).collect();
            assert_eq!(got, reference_replication(g, *start, steps, delay, seed), "graph {gi}, steps {steps}, delay {delay}");
            let spawned: BTreeSet<usize> = rec.spawn_events.iter().map(|e| e.vertex).collect();
            assert_eq!(spawned.len(), rec.spawn_events.len());
            assert!(rec.visited_counts.windows(2).all(|w| w[0] <= w[1]));
        }
    }
}

#[test]
fn total_variation_is_non_increasing() {
    let mut rng = common::rng(23);
    for _ in 0..20 {
        let g = common::random_connected(&mut rng, 30, 0.15);
        if g.is_bipartite() {
            continue;
        }
        let pi = walks::stationary_distribution(&g).unwrap();
        for n in [1usize, 2, 5, 10, 25, 50] {
            let a = walks::total_variation(&walks::exact_distribution(&g, 0, n).unwrap(), &pi);
            let b = walks::total_variation(&walks::exact_distribution(&g, 0, 2 * n).unwrap(), &pi);
            assert!(b <= a + 1e-12, "TV rose from {a} to {b} between {n} and {}", 2 * n);
        }
    }
}

#[test]
fn empirical_step_frequencies_are_uniform() {
    let star = Graph::star(4);
    let mut counts = [0usize; 5];
    let draws = 10_000;
    for seed in 0..draws {
        let t = walks::simple_walk(&star, 0, 1, seed).unwrap();
        counts[t.vertices[1]] += 1;
    }
    let p = 0.25;
    let sigma = (draws as f64 * p * (1.0 - p)).sqrt();
    for &c in &counts[1..] {
        assert!((c as f64 - draws as f64 * p).abs() < 5.0 * sigma, "{counts:?}");
    }
}

#[test]
fn france_model_shape() {
    let cfg = shipped_config();
    let ps = cfg.build_points().unwrap();
    assert_eq!(ps.len(), 6000);
    let grid = pointset::make_grid(60, 60, 8.0, 8.0).unwrap();
    assert_eq!(&ps.points()[..3600], grid.points());
    assert!(ps.points().iter().all(|p| (0.0..=8.0).contains(&p.x) && (0.0..=8.0).contains(&p.y)));
    // grid spacing 8/60 is inside the first band, so Γ_I is connected
    let gi = graphgen::threshold_graph(&ps, 0.3).unwrap();
    assert!(gi.is_connected());
    let again = ExperimentConfig::load(&Path::new(env!("CARGO_MANIFEST_DIR")).join("config/experiment.toml"))
        .unwrap()
        .build_points()
        .unwrap();
    assert_eq!(again, ps);
}

#[test]
fn ladder_lambda1_matches_dense() {
    let pts: Vec<Point> = (0..20).map(|i| Point::new((i / 2) as f64 * 0.1 + 0.05, (i % 2) as f64 * 0.1 + 0.05)).collect();
    let ps = PointSet::new(pts, (8.0, 8.0), "ladder").unwrap();
    let g = graphgen::threshold_graph(&ps, 0.1 + 1e-9).unwrap();
    assert_eq!(g.edge_count(), 10 + 2 * 9);
    let lam = spectral::lambda1(&g, 1e-10).unwrap().lambda1;
    let dense = spectral::dense_spectrum(&g).unwrap()[1];
    assert!((lam - dense).abs() < 1e-8);
}

#[test]
fn summary_of_small_graphs() {
    let s = stats::summarize(&Graph::path(3), 1e-10).unwrap();
    let dense = spectral::dense_spectrum(&Graph::path(3)).unwrap()[1];
    assert!((s.lambda1 - dense).abs() < 1e-10);
    assert!((s.lambda1 - 1.0).abs() < 1e-10);
    assert!((s.sparsity - 2.0 / 3.0).abs() < 1e-15);
    assert_eq!(s.max_valency, 2);
    assert_eq!(s.avg_clustering, 0.0);
    let cf = ConnectionFunction::threshold(1.0, 1.0).unwrap();
    assert_eq!(cf.eval(1.0).unwrap(), 1.0);
    assert_eq!(cf.eval(1.0 + 1e-12).unwrap(), 0.0);
}
