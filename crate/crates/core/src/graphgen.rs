//! Layered random graph generation over a point set.

use std::collections::VecDeque;
use std::sync::Arc;

use rayon::prelude::*;

use crate::connection::ConnectionFunction;
use crate::error::{Error, Result};
use crate::pointset::PointSet;
use crate::rng::{keyed_uniform, TAG_EDGE};

/// Undirected simple graph in compressed adjacency form. Neighbor lists are
/// sorted ascending.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    offsets: Vec<usize>,
    targets: Vec<u32>,
}

impl Graph {
    /// Builds a graph from unordered pairs. Self-loops, duplicates (in either
    /// orientation) and out-of-range endpoints are rejected.
    pub fn from_edges<I>(n: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut pairs: Vec<(u32, u32)> = Vec::new();
        for (u, v) in edges {
            if u >= n || v >= n {
                return Err(Error::VertexOutOfRange { vertex: u.max(v), n });
            }
            if u == v {
                return Err(Error::invalid(format!("self-loop at vertex {u}")));
            }
            pairs.push((u.min(v) as u32, u.max(v) as u32));
        }
        pairs.sort_unstable();
        if let Some(w) = pairs.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::invalid(format!("duplicate edge {{{}, {}}}", w[0].0, w[0].1)));
        }
        Ok(Self::from_canonical(n, &pairs))
    }

    /// `pairs` must be sorted, deduplicated and have `u < v`.
    fn from_canonical(n: usize, pairs: &[(u32, u32)]) -> Self {
        let mut deg = vec![0usize; n];
        for &(u, v) in pairs {
            deg[u as usize] += 1;
            deg[v as usize] += 1;
        }
        let mut offsets = Vec::with_capacity(n + 1);
        offsets.push(0);
        for d in &deg {
            offsets.push(offsets.last().unwrap() + d);
        }
        let mut fill = offsets[..n].to_vec();
        let mut targets = vec![0u32; offsets[n]];
        // Pairs are sorted by (u, v): for each vertex the smaller neighbors
        // arrive first in ascending order, then the larger ones.
        for &(u, v) in pairs {
            targets[fill[v as usize]] = u;
            fill[v as usize] += 1;
        }
        for &(u, v) in pairs {
            targets[fill[u as usize]] = v;
            fill[u as usize] += 1;
        }
        Graph { offsets, targets }
    }

    pub fn empty(n: usize) -> Self {
        Graph { offsets: vec![0; n + 1], targets: Vec::new() }
    }

    pub fn complete(n: usize) -> Self {
        let pairs: Vec<(u32, u32)> =
            (0..n as u32).flat_map(|u| (u + 1..n as u32).map(move |v| (u, v))).collect();
        Self::from_canonical(n, &pairs)
    }

    pub fn cycle(n: usize) -> Result<Self> {
        if n < 3 {
            return Err(Error::invalid("cycle needs at least 3 vertices"));
        }
        Self::from_edges(n, (0..n).map(|i| (i, (i + 1) % n)))
    }

    pub fn path(n: usize) -> Self {
        let pairs: Vec<(u32, u32)> = (1..n as u32).map(|i| (i - 1, i)).collect();
        Self::from_canonical(n, &pairs)
    }

    pub fn star(leaves: usize) -> Self {
        let pairs: Vec<(u32, u32)> = (1..=leaves as u32).map(|i| (0, i)).collect();
        Self::from_canonical(leaves + 1, &pairs)
    }

    pub fn n(&self) -> usize {
        self.offsets.len() - 1
    }

    pub fn edge_count(&self) -> usize {
        self.targets.len() / 2
    }

    #[inline]
    pub fn neighbors(&self, v: usize) -> &[u32] {
        &self.targets[self.offsets[v]..self.offsets[v + 1]]
    }

    #[inline]
    pub fn deg(&self, v: usize) -> usize {
        self.offsets[v + 1] - self.offsets[v]
    }

    pub fn degree(&self, v: usize) -> Result<usize> {
        self.check_vertex(v)?;
        Ok(self.deg(v))
    }

    pub fn degrees(&self) -> Vec<usize> {
        (0..self.n()).map(|v| self.deg(v)).collect()
    }

    /// Sum of degrees, i.e. twice the edge count.
    pub fn volume(&self) -> usize {
        self.targets.len()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.n() && v < self.n() && self.neighbors(u).binary_search(&(v as u32)).is_ok()
    }

    /// Edges as `(u, v)` with `u < v`, sorted.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n()).flat_map(move |u| {
            self.neighbors(u).iter().filter(move |&&v| (v as usize) > u).map(move |&v| (u, v as usize))
        })
    }

    pub fn check_vertex(&self, v: usize) -> Result<()> {
        if v < self.n() {
            Ok(())
        } else {
            Err(Error::VertexOutOfRange { vertex: v, n: self.n() })
        }
    }

    /// Adds one edge, returning a new graph.
    pub fn with_edge(&self, u: usize, v: usize) -> Result<Self> {
        Self::from_edges(self.n(), self.edges().chain(std::iter::once((u, v))))
    }

    /// Component label per vertex, numbered in order of lowest member.
    pub fn components(&self) -> Vec<usize> {
        let n = self.n();
        let mut label = vec![usize::MAX; n];
        let mut next = 0;
        let mut queue = VecDeque::new();
        for s in 0..n {
            if label[s] != usize::MAX {
                continue;
            }
            label[s] = next;
            queue.push_back(s);
            while let Some(u) = queue.pop_front() {
                for &w in self.neighbors(u) {
                    let w = w as usize;
                    if label[w] == usize::MAX {
                        label[w] = next;
                        queue.push_back(w);
                    }
                }
            }
            next += 1;
        }
        label
    }

    pub fn is_connected(&self) -> bool {
        self.n() <= 1 || self.components().iter().all(|&c| c == 0)
    }

    /// Two-colouring check by breadth-first search.
    pub fn is_bipartite(&self) -> bool {
        let n = self.n();
        let mut colour = vec![u8::MAX; n];
        let mut queue = VecDeque::new();
        for s in 0..n {
            if colour[s] != u8::MAX {
                continue;
            }
            colour[s] = 0;
            queue.push_back(s);
            while let Some(u) = queue.pop_front() {
                for &w in self.neighbors(u) {
                    let w = w as usize;
                    if colour[w] == u8::MAX {
                        colour[w] = 1 - colour[u];
                        queue.push_back(w);
                    } else if colour[w] == colour[u] {
                        return false;
                    }
                }
            }
        }
        true
    }
}

pub fn is_connected(g: &Graph) -> bool {
    g.is_connected()
}

/// An edge tagged with the 0-based band that added it.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TaggedEdge {
    pub u: u32,
    pub v: u32,
    pub band: u16,
}

/// Nested layers `E_1 ⊆ E_2 ⊆ … ⊆ E_m` over one point set. Each edge carries
/// the band in which it was drawn; layer `k` holds the edges of bands `1..=k`.
#[derive(Clone, Debug)]
pub struct LayeredGraph {
    points: Arc<PointSet>,
    cf: ConnectionFunction,
    seed: u64,
    edges: Vec<TaggedEdge>,
    band_counts: Vec<usize>,
}

impl LayeredGraph {
    /// Assembles a layered graph from tagged edges, checking that each edge
    /// is simple, appears once and lies in the annulus of its band.
    pub fn from_tagged_edges(
        points: Arc<PointSet>,
        cf: ConnectionFunction,
        seed: u64,
        mut edges: Vec<TaggedEdge>,
    ) -> Result<Self> {
        let n = points.len();
        for e in &mut edges {
            if e.u == e.v {
                return Err(Error::invalid(format!("self-loop at vertex {}", e.u)));
            }
            if e.u > e.v {
                std::mem::swap(&mut e.u, &mut e.v);
            }
            if e.v as usize >= n {
                return Err(Error::VertexOutOfRange { vertex: e.v as usize, n });
            }
            let k = e.band as usize;
            if k >= cf.num_bands() {
                return Err(Error::invalid(format!("edge {{{}, {}}} has band {} but only {} bands exist", e.u, e.v, k + 1, cf.num_bands())));
            }
            let (lo, hi, _) = cf.band(k);
            let d = points.distance(e.u as usize, e.v as usize);
            if !in_annulus(d, lo, hi) {
                return Err(Error::invalid(format!(
                    "edge {{{}, {}}} at distance {d} is outside band {} = ({lo}, {hi}]",
                    e.u,
                    e.v,
                    k + 1
                )));
            }
        }
        edges.sort_unstable();
        if let Some(w) = edges.windows(2).find(|w| (w[0].u, w[0].v) == (w[1].u, w[1].v)) {
            return Err(Error::invalid(format!("duplicate edge {{{}, {}}}", w[0].u, w[0].v)));
        }
        let mut band_counts = vec![0; cf.num_bands()];
        for e in &edges {
            band_counts[e.band as usize] += 1;
        }
        Ok(LayeredGraph { points, cf, seed, edges, band_counts })
    }

    pub fn points(&self) -> &PointSet {
        &self.points
    }

    pub fn shared_points(&self) -> Arc<PointSet> {
        Arc::clone(&self.points)
    }

    pub fn connection(&self) -> &ConnectionFunction {
        &self.cf
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn num_layers(&self) -> usize {
        self.cf.num_bands()
    }

    /// All edges, sorted by `(u, v)`.
    pub fn tagged_edges(&self) -> &[TaggedEdge] {
        &self.edges
    }

    /// Number of edges added by each band.
    pub fn band_counts(&self) -> &[usize] {
        &self.band_counts
    }

    /// Cumulative edge count of layer `k` (1-based).
    pub fn layer_edge_count(&self, k: usize) -> usize {
        self.band_counts[..k.min(self.band_counts.len())].iter().sum()
    }

    /// Layer `k`, 1-based: edges from bands `1..=k`.
    pub fn layer(&self, k: usize) -> Result<Graph> {
        if k == 0 || k > self.num_layers() {
            return Err(Error::invalid(format!("layer {k} out of range 1..={}", self.num_layers())));
        }
        let pairs: Vec<(u32, u32)> =
            self.edges.iter().filter(|e| (e.band as usize) < k).map(|e| (e.u, e.v)).collect();
        Ok(Graph::from_canonical(self.points.len(), &pairs))
    }

    /// The top layer.
    pub fn graph(&self) -> Graph {
        self.layer(self.num_layers()).expect("at least one band")
    }
}

#[inline]
fn in_annulus(d: f64, lo: f64, hi: f64) -> bool {
    d <= hi && (d > lo || lo == 0.0)
}

/// Uniform bucket grid over a point set with square cells.
struct BucketGrid {
    nx: usize,
    ny: usize,
    starts: Vec<usize>,
    members: Vec<u32>,
    cell_of: Vec<(usize, usize)>,
}

impl BucketGrid {
    fn new(points: &PointSet, cell: f64) -> Self {
        let (w, h) = points.bbox();
        let single = !(cell > 0.0) || cell >= points.diagonal();
        let (nx, ny) = if single {
            (1, 1)
        } else {
            (((w / cell).ceil() as usize).max(1), ((h / cell).ceil() as usize).max(1))
        };
        let cell_of: Vec<(usize, usize)> = points
            .points()
            .iter()
            .map(|p| {
                if single {
                    (0, 0)
                } else {
                    (((p.x / cell) as usize).min(nx - 1), ((p.y / cell) as usize).min(ny - 1))
                }
            })
            .collect();
        let mut counts = vec![0usize; nx * ny + 1];
        for &(cx, cy) in &cell_of {
            counts[cy * nx + cx + 1] += 1;
        }
        for i in 1..counts.len() {
            counts[i] += counts[i - 1];
        }
        let starts = counts.clone();
        let mut fill = counts;
        let mut members = vec![0u32; points.len()];
        for (i, &(cx, cy)) in cell_of.iter().enumerate() {
            let c = cy * nx + cx;
            members[fill[c]] = i as u32;
            fill[c] += 1;
        }
        BucketGrid { nx, ny, starts, members, cell_of }
    }

    /// Calls `f(j)` for every point in the 3 × 3 block of cells around `i`.
    fn for_each_candidate(&self, i: usize, mut f: impl FnMut(usize)) {
        let (cx, cy) = self.cell_of[i];
        for y in cy.saturating_sub(1)..=(cy + 1).min(self.ny - 1) {
            for x in cx.saturating_sub(1)..=(cx + 1).min(self.nx - 1) {
                let c = y * self.nx + x;
                for &j in &self.members[self.starts[c]..self.starts[c + 1]] {
                    f(j as usize);
                }
            }
        }
    }
}

/// For each vertex `i`, the sorted list of `(j, value)` with `j > i` and
/// `d(i, j) <= r_hi` for which `keep(i, j, d)` returns `Some(value)`.
fn collect_pairs<T, F>(points: &PointSet, r_hi: f64, keep: F) -> Vec<Vec<(u32, T)>>
where
    T: Send,
    F: Fn(usize, usize, f64) -> Option<T> + Sync,
{
    let grid = BucketGrid::new(points, r_hi);
    let pts = points.points();
    (0..points.len())
        .into_par_iter()
        .map(|i| {
            let mut row = Vec::new();
            grid.for_each_candidate(i, |j| {
                if j > i {
                    let d = crate::pointset::distance(pts[i], pts[j]);
                    if d <= r_hi {
                        if let Some(t) = keep(i, j, d) {
                            row.push((j as u32, t));
                        }
                    }
                }
            });
            row.sort_unstable_by_key(|&(j, _)| j);
            row
        })
        .collect()
}

/// All unordered pairs `{i, j}` with `r_lo < d(i, j) <= r_hi`, as `(i, j)`
/// with `i < j`, sorted. When `r_lo == 0` coincident points (d = 0) are
/// included, matching the first band of a connection function.
pub fn annulus_pairs(points: &PointSet, r_lo: f64, r_hi: f64) -> Result<Vec<(usize, usize)>> {
    if !(r_lo >= 0.0) || !(r_lo < r_hi) {
        return Err(Error::invalid(format!("annulus needs 0 <= r_lo < r_hi, got ({r_lo}, {r_hi}]")));
    }
    let rows = collect_pairs(points, r_hi, |_, _, d| in_annulus(d, r_lo, r_hi).then_some(()));
    Ok(rows
        .into_iter()
        .enumerate()
        .flat_map(|(i, row)| row.into_iter().map(move |(j, ())| (i, j as usize)))
        .collect())
}

/// The keyed Bernoulli draw behind [`generate`]: pair `{i, j}` in 0-based
/// band `k` is kept iff this value is below the band probability.
#[inline]
pub fn edge_draw(seed: u64, i: usize, j: usize, band: usize) -> f64 {
    let (a, b) = if i < j { (i, j) } else { (j, i) };
    keyed_uniform(seed, &[TAG_EDGE, a as u64, b as u64, band as u64])
}

/// Draws every layer of the random graph. Each pair in band `k` is kept
/// independently with probability `p_k`, decided by [`edge_draw`], so the
/// result depends only on `(points, cf, seed)`.
pub fn generate(points: Arc<PointSet>, cf: &ConnectionFunction, seed: u64) -> Result<LayeredGraph> {
    if points.is_empty() {
        return Err(Error::invalid("cannot generate a graph on an empty point set"));
    }
    if cf.num_bands() > u16::MAX as usize {
        return Err(Error::invalid("too many bands"));
    }
    let probs = cf.probs();
    let rows = collect_pairs(&points, cf.max_radius(), |i, j, d| {
        let k = cf.band_index(d)?;
        let p = probs[k];
        let keep = p >= 1.0 || (p > 0.0 && edge_draw(seed, i, j, k) < p);
        keep.then_some(k as u16)
    });
    let mut edges = Vec::with_capacity(rows.iter().map(Vec::len).sum());
    let mut band_counts = vec![0; cf.num_bands()];
    for (i, row) in rows.into_iter().enumerate() {
        for (j, band) in row {
            band_counts[band as usize] += 1;
            edges.push(TaggedEdge { u: i as u32, v: j, band });
        }
    }
    Ok(LayeredGraph { points, cf: cf.clone(), seed, edges, band_counts })
}

/// Deterministic geometric graph joining every pair at distance `<= r`.
pub fn threshold_graph(points: &PointSet, r: f64) -> Result<Graph> {
    if !(r > 0.0) {
        return Err(Error::invalid("threshold radius must be positive"));
    }
    let rows = collect_pairs(points, r, |_, _, _| Some(()));
    let pairs: Vec<(u32, u32)> = rows
        .into_iter()
        .enumerate()
        .flat_map(|(i, row)| row.into_iter().map(move |(j, ())| (i as u32, j)))
        .collect();
    Ok(Graph::from_canonical(points.len(), &pairs))
}
