//! Simple and replicating random walks, exact step distributions and the
//! mixing-bound diagnostic.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graphgen::Graph;
use crate::pointset::PointSet;
use crate::rng::{derive_seed, keyed_index, TAG_REPLICANT, TAG_START, TAG_WALK};
use crate::spectral;

/// Largest graph accepted by [`exact_distribution`] and [`mixing_bound_report`].
pub const EXACT_LIMIT: usize = 512;
/// Largest step count accepted by [`exact_distribution`].
pub const MAX_EXACT_STEPS: usize = 10_000;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WalkTrace {
    pub vertices: Vec<usize>,
    pub seed: u64,
}

impl WalkTrace {
    pub fn steps(&self) -> usize {
        self.vertices.len() - 1
    }
}

/// The move taken by a simple walk at `step` from `v`.
#[inline]
fn walk_move(g: &Graph, v: usize, seed: u64, keys: &[u64]) -> usize {
    let nb = g.neighbors(v);
    nb[keyed_index(seed, keys, nb.len())] as usize
}

/// A simple random walk: each step moves to a uniformly chosen neighbor.
/// The choice at step `t` is keyed by `(seed, t)`.
pub fn simple_walk(g: &Graph, start: usize, steps: usize, seed: u64) -> Result<WalkTrace> {
    g.check_vertex(start)?;
    if g.deg(start) == 0 {
        return Err(Error::IsolatedVertex(start));
    }
    let mut vertices = Vec::with_capacity(steps + 1);
    vertices.push(start);
    let mut v = start;
    for t in 1..=steps {
        v = walk_move(g, v, seed, &[TAG_WALK, t as u64]);
        vertices.push(v);
    }
    Ok(WalkTrace { vertices, seed })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DistanceStats {
    pub mean_pairwise: f64,
    pub max_pairwise: f64,
}

fn distinct(vertices: &[usize]) -> Vec<usize> {
    let mut v = vertices.to_vec();
    v.sort_unstable();
    v.dedup();
    v
}

/// Mean and max Euclidean distance over pairs of distinct visited vertices.
pub fn trace_distance_stats(trace: &WalkTrace, points: &PointSet) -> Result<DistanceStats> {
    if trace.vertices.is_empty() {
        return Err(Error::invalid("empty trace"));
    }
    if let Some(&v) = trace.vertices.iter().find(|&&v| v >= points.len()) {
        return Err(Error::VertexOutOfRange { vertex: v, n: points.len() });
    }
    let visited = distinct(&trace.vertices);
    let (mut sum, mut max, mut count) = (0.0, 0.0f64, 0usize);
    for (a, &i) in visited.iter().enumerate() {
        for &j in &visited[a + 1..] {
            let d = points.distance(i, j);
            sum += d;
            max = max.max(d);
            count += 1;
        }
    }
    let mean_pairwise = if count == 0 { 0.0 } else { sum / count as f64 };
    Ok(DistanceStats { mean_pairwise, max_pairwise: max })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct WalkBatchStats {
    pub mean_of_means: f64,
    pub sd_of_means: f64,
    pub mean_of_maxes: f64,
    pub sd_of_maxes: f64,
    pub num_walks: usize,
    pub steps: usize,
}

/// Mean and sample standard deviation (`n - 1` denominator, 0 for one sample).
pub fn mean_sd(xs: &[f64]) -> (f64, f64) {
    if xs.is_empty() {
        return (f64::NAN, 0.0);
    }
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    if xs.len() == 1 {
        return (mean, 0.0);
    }
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, var.sqrt())
}

/// Start vertex and walk seed of walk `index` in a batch.
pub fn batch_walk_params(n: usize, seed: u64, index: usize) -> (usize, u64) {
    let start = keyed_index(seed, &[TAG_START, index as u64], n);
    (start, derive_seed(seed, &[TAG_WALK, index as u64]))
}

/// `num_walks` independent walks from uniformly random start vertices.
pub fn batch_walks(g: &Graph, num_walks: usize, steps: usize, seed: u64) -> Result<Vec<WalkTrace>> {
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    (0..num_walks)
        .into_par_iter()
        .map(|w| {
            let (start, walk_seed) = batch_walk_params(g.n(), seed, w);
            simple_walk(g, start, steps, walk_seed)
        })
        .collect()
}

pub fn batch_walk_stats(
    g: &Graph,
    points: &PointSet,
    num_walks: usize,
    steps: usize,
    seed: u64,
) -> Result<WalkBatchStats> {
    if num_walks == 0 {
        return Err(Error::invalid("need at least one walk"));
    }
    if points.len() != g.n() {
        return Err(Error::invalid("point set and graph sizes differ"));
    }
    let traces = batch_walks(g, num_walks, steps, seed)?;
    let stats: Vec<DistanceStats> =
        traces.iter().map(|t| trace_distance_stats(t, points)).collect::<Result<_>>()?;
    let means: Vec<f64> = stats.iter().map(|s| s.mean_pairwise).collect();
    let maxes: Vec<f64> = stats.iter().map(|s| s.max_pairwise).collect();
    let (mean_of_means, sd_of_means) = mean_sd(&means);
    let (mean_of_maxes, sd_of_maxes) = mean_sd(&maxes);
    Ok(WalkBatchStats { mean_of_means, sd_of_means, mean_of_maxes, sd_of_maxes, num_walks, steps })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpawnEvent {
    /// Step at which the parent first entered `vertex`.
    pub step: usize,
    /// Step at which the child is placed at `vertex`; it moves from the next step on.
    pub start_step: usize,
    pub vertex: usize,
    pub parent: usize,
    pub child: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Replicant {
    pub id: usize,
    pub parent: Option<usize>,
    pub start_step: usize,
    /// Positions at steps `start_step, start_step + 1, …` up to the horizon.
    pub trace: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReplicationRecord {
    pub start: usize,
    pub steps: usize,
    pub delay: usize,
    pub seed: u64,
    pub spawn_events: Vec<SpawnEvent>,
    pub replicants: Vec<Replicant>,
    /// Globally visited vertices, ascending.
    pub visited: Vec<usize>,
    /// Number of visited vertices after each step `0..=steps`.
    pub visited_counts: Vec<usize>,
}

impl ReplicationRecord {
    /// Replicants that took at least one step within the horizon.
    pub fn walking_replicants(&self) -> usize {
        self.replicants.iter().filter(|r| r.trace.len() > 1).count()
    }

    /// Largest distance from the start vertex to any spawn position.
    pub fn max_spawn_distance(&self, points: &PointSet) -> f64 {
        self.spawn_events.iter().map(|e| points.distance(self.start, e.vertex)).fold(0.0, f64::max)
    }
}

/// Branching walk on a global synchronous clock. One replicant starts at
/// `start` (marked visited at step 0). At every step each placed replicant
/// moves to a uniform neighbor, keyed by `(seed, replicant id, step)`. When a
/// replicant enters a vertex nobody has visited, the vertex is marked and a
/// child is placed there `delay` steps later. Replicants are processed in id
/// order, so a vertex entered by several replicants in the same step is
/// credited to the lowest id.
pub fn replicating_walk(g: &Graph, start: usize, steps: usize, delay: usize, seed: u64) -> Result<ReplicationRecord> {
    g.check_vertex(start)?;
    if g.deg(start) == 0 {
        return Err(Error::IsolatedVertex(start));
    }
    let mut visited = vec![false; g.n()];
    visited[start] = true;
    let mut visited_counts = Vec::with_capacity(steps + 1);
    visited_counts.push(1);
    let mut replicants = vec![Replicant { id: 0, parent: None, start_step: 0, trace: vec![start] }];
    let mut spawn_events = Vec::new();
    let mut count = 1;
    for t in 1..=steps {
        let active = replicants.len();
        for id in 0..active {
            if replicants[id].start_step >= t {
                continue;
            }
            let here = *replicants[id].trace.last().unwrap();
            let next = walk_move(g, here, seed, &[TAG_REPLICANT, id as u64, t as u64]);
            replicants[id].trace.push(next);
            if !visited[next] {
                visited[next] = true;
                count += 1;
                let child = replicants.len();
                let start_step = t + delay;
                spawn_events.push(SpawnEvent { step: t, start_step, vertex: next, parent: id, child });
                replicants.push(Replicant { id: child, parent: Some(id), start_step, trace: vec![next] });
            }
        }
        visited_counts.push(count);
    }
    let visited = (0..g.n()).filter(|&v| visited[v]).collect();
    Ok(ReplicationRecord { start, steps, delay, seed, spawn_events, replicants, visited, visited_counts })
}

fn check_exact_size(g: &Graph) -> Result<()> {
    if g.n() > EXACT_LIMIT {
        return Err(Error::TooLarge { n: g.n(), limit: EXACT_LIMIT });
    }
    Ok(())
}

/// One step of the walk's law: `p'(y) = Σ_{x ~ y} p(x) / d_x`.
pub fn transition_apply(g: &Graph, p: &[f64]) -> Vec<f64> {
    (0..g.n())
        .map(|y| g.neighbors(y).iter().map(|&x| p[x as usize] / g.deg(x as usize) as f64).sum())
        .collect()
}

/// Law of `X_n` for the walk started at `start`.
pub fn exact_distribution(g: &Graph, start: usize, n: usize) -> Result<Vec<f64>> {
    check_exact_size(g)?;
    g.check_vertex(start)?;
    if n > MAX_EXACT_STEPS {
        return Err(Error::invalid(format!("at most {MAX_EXACT_STEPS} steps")));
    }
    if !g.is_connected() || g.deg(start) == 0 {
        return Err(Error::Disconnected);
    }
    let mut p = vec![0.0; g.n()];
    p[start] = 1.0;
    for _ in 0..n {
        p = transition_apply(g, &p);
    }
    Ok(p)
}

/// `π(x) = d_x / vol`.
pub fn stationary_distribution(g: &Graph) -> Result<Vec<f64>> {
    let vol = g.volume();
    if vol == 0 {
        return Err(Error::invalid("graph has no edges"));
    }
    Ok((0..g.n()).map(|v| g.deg(v) as f64 / vol as f64).collect())
}

pub fn total_variation(p: &[f64], q: &[f64]) -> f64 {
    0.5 * p.iter().zip(q).map(|(a, b)| (a - b).abs()).sum::<f64>()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MixingRow {
    pub vertex: usize,
    pub deviation: f64,
    pub bound: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MixingReport {
    pub start: usize,
    pub steps: usize,
    pub lambda1: f64,
    /// `max(|1 - λ₁|, |1 - λ_max|)`, the rate that actually governs the walk.
    pub spectral_radius: f64,
    pub rows: Vec<MixingRow>,
    /// Largest `deviation / bound` over vertices.
    pub worst_ratio: f64,
    pub violations: usize,
}

/// Compares `|P(X_n = x) - d_x/vol|` with `sqrt(d_x / d_min) |λ₁ - 1|^n` at
/// every vertex. Diagnostic only: the bound uses the bottom of the spectrum
/// alone, so violations are counted, not raised.
pub fn mixing_bound_report(g: &Graph, start: usize, n: usize) -> Result<MixingReport> {
    check_exact_size(g)?;
    if g.is_bipartite() {
        return Err(Error::Bipartite);
    }
    let spectrum = spectral::dense_spectrum(g)?;
    let lambda1 = spectral::lambda1(g, spectral::DEFAULT_TOL)?.lambda1;
    let lambda_max = *spectrum.last().unwrap();
    let spectral_radius = (1.0 - lambda1).abs().max((1.0 - lambda_max).abs());
    let dist = exact_distribution(g, start, n)?;
    let pi = stationary_distribution(g)?;
    let dmin = (0..g.n()).map(|v| g.deg(v)).min().unwrap() as f64;
    let rate = (lambda1 - 1.0).abs().powi(n as i32);
    let rows: Vec<MixingRow> = (0..g.n())
        .map(|x| MixingRow {
            vertex: x,
            deviation: (dist[x] - pi[x]).abs(),
            bound: (g.deg(x) as f64 / dmin).sqrt() * rate,
        })
        .collect();
    let ratio = |r: &MixingRow| {
        if r.bound > 0.0 {
            r.deviation / r.bound
        } else if r.deviation > 0.0 {
            f64::INFINITY
        } else {
            0.0
        }
    };
    let worst_ratio = rows.iter().map(ratio).fold(0.0, f64::max);
    let violations = rows.iter().filter(|r| r.deviation > r.bound).count();
    Ok(MixingReport { start, steps: n, lambda1, spectral_radius, rows, worst_ratio, violations })
}
