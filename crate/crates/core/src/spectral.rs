//! Normalized-Laplacian spectra, conductance and the Cheeger inequality.
//!
//! [`lambda1`] finds the smallest non-zero eigenvalue of
//! `L = I - D^{-1/2} A D^{-1/2}` without forming the matrix. The kernel
//! vector `D^{1/2} 1` is known in closed form and is projected out of every
//! Krylov vector, so the lowest Ritz value of the deflated problem is λ₁
//! directly. The Krylov basis is kept fully orthogonal (two Gram-Schmidt
//! passes) and restarted thickly, keeping the lowest Ritz vectors, once it
//! reaches its size limit. Convergence is judged on the true residual
//! `‖L x - λ x‖`, which matters for nearly disconnected graphs whose λ₁ sits
//! a hair above zero.
//!
//! The dense and brute-force routines here are exact references for small
//! graphs.

use std::cmp::Ordering;

use nalgebra::{DMatrix, SymmetricEigen};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graphgen::{Graph, LayeredGraph};
use crate::rng::{keyed_uniform, TAG_LANCZOS};

pub const DEFAULT_TOL: f64 = 1e-8;
/// Largest graph accepted by the dense routines.
pub const DENSE_LIMIT: usize = 512;
/// Largest graph accepted by the exhaustive cut searches.
pub const BRUTE_FORCE_LIMIT: usize = 22;
/// Slack used by [`cheeger_check`].
pub const CHEEGER_SLACK: f64 = 1e-9;

const START_SEED: u64 = 0x5eed_1a4c_2024;
const PARALLEL_THRESHOLD: usize = 4096;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpectralReport {
    pub lambda1: f64,
    pub residual: f64,
    pub iterations: usize,
    pub method: String,
    /// Unit eigenvector for `lambda1`, orthogonal to `D^{1/2} 1`.
    #[serde(skip)]
    pub eigenvector: Vec<f64>,
}

impl SpectralReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

/// The normalized Laplacian of a graph without isolated vertices, as an operator.
pub struct NormalizedLaplacian<'g> {
    graph: &'g Graph,
    inv_sqrt_deg: Vec<f64>,
}

impl<'g> NormalizedLaplacian<'g> {
    pub fn new(graph: &'g Graph) -> Result<Self> {
        let mut inv_sqrt_deg = Vec::with_capacity(graph.n());
        for v in 0..graph.n() {
            let d = graph.deg(v);
            if d == 0 {
                return Err(Error::IsolatedVertex(v));
            }
            inv_sqrt_deg.push(1.0 / (d as f64).sqrt());
        }
        Ok(NormalizedLaplacian { graph, inv_sqrt_deg })
    }

    pub fn n(&self) -> usize {
        self.graph.n()
    }

    /// Unit vector spanning the kernel: entries `sqrt(d_i) / sqrt(vol)`.
    pub fn kernel_vector(&self) -> Vec<f64> {
        let vol = self.graph.volume() as f64;
        (0..self.n()).map(|v| (self.graph.deg(v) as f64 / vol).sqrt()).collect()
    }

    fn row(&self, i: usize, x: &[f64]) -> f64 {
        let s: f64 = self.graph.neighbors(i).iter().map(|&j| self.inv_sqrt_deg[j as usize] * x[j as usize]).sum();
        x[i] - self.inv_sqrt_deg[i] * s
    }

    pub fn apply_into(&self, x: &[f64], y: &mut [f64]) {
        if self.n() >= PARALLEL_THRESHOLD {
            y.par_iter_mut().enumerate().for_each(|(i, yi)| *yi = self.row(i, x));
        } else {
            for (i, yi) in y.iter_mut().enumerate() {
                *yi = self.row(i, x);
            }
        }
    }

    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        let mut y = vec![0.0; x.len()];
        self.apply_into(x, &mut y);
        y
    }
}

/// `L v` for the normalized Laplacian of `g`, computed from adjacency lists.
pub fn normalized_laplacian_apply(g: &Graph, v: &[f64]) -> Result<Vec<f64>> {
    if v.len() != g.n() {
        return Err(Error::invalid(format!("vector has length {}, graph has {} vertices", v.len(), g.n())));
    }
    Ok(NormalizedLaplacian::new(g)?.apply(v))
}

#[derive(Clone, Debug)]
pub struct LanczosOptions {
    pub tol: f64,
    /// Cap on operator applications; `None` means `10 n`.
    pub max_iter: Option<usize>,
    /// Krylov basis size that triggers a restart.
    pub max_basis: usize,
    /// Ritz vectors kept across a restart.
    pub keep: usize,
}

impl Default for LanczosOptions {
    fn default() -> Self {
        LanczosOptions { tol: DEFAULT_TOL, max_iter: None, max_basis: 160, keep: 48 }
    }
}

impl LanczosOptions {
    pub fn with_tol(tol: f64) -> Self {
        LanczosOptions { tol, ..Default::default() }
    }
}

#[inline]
fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

#[inline]
fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

/// Subtracts the projections of `w` on `basis` (and on `kernel`), twice.
/// Returns the accumulated coefficients on `basis`.
fn orthogonalize(w: &mut [f64], basis: &[Vec<f64>], kernel: &[f64]) -> Vec<f64> {
    let parallel = w.len() >= PARALLEL_THRESHOLD;
    let mut total = vec![0.0; basis.len()];
    for _ in 0..2 {
        let c: Vec<f64> = if parallel {
            basis.par_iter().map(|q| dot(q, w)).collect()
        } else {
            basis.iter().map(|q| dot(q, w)).collect()
        };
        let ck = dot(kernel, w);
        let update = |(idx, wi): (usize, &mut f64)| {
            let mut s = ck * kernel[idx];
            for (q, ci) in basis.iter().zip(&c) {
                s += ci * q[idx];
            }
            *wi -= s;
        };
        if parallel {
            w.par_iter_mut().enumerate().for_each(update);
        } else {
            w.iter_mut().enumerate().for_each(update);
        }
        for (t, ci) in total.iter_mut().zip(&c) {
            *t += ci;
        }
    }
    total
}

/// `basis^T coeffs`, i.e. `Σ coeffs[i] basis[i]`.
fn combine(basis: &[Vec<f64>], coeffs: &[f64], n: usize) -> Vec<f64> {
    let mut y = vec![0.0; n];
    let fill = |(idx, yi): (usize, &mut f64)| {
        *yi = basis.iter().zip(coeffs).map(|(q, c)| c * q[idx]).sum();
    };
    if n >= PARALLEL_THRESHOLD {
        y.par_iter_mut().enumerate().for_each(fill);
    } else {
        y.iter_mut().enumerate().for_each(fill);
    }
    y
}

fn random_vector(n: usize, counter: u64) -> Vec<f64> {
    (0..n).map(|i| keyed_uniform(START_SEED, &[TAG_LANCZOS, counter, i as u64]) - 0.5).collect()
}

/// Eigenpairs of a small symmetric matrix, ascending.
fn sorted_eigen(h: &DMatrix<f64>) -> (Vec<f64>, DMatrix<f64>) {
    let eig = SymmetricEigen::new(h.clone());
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].partial_cmp(&eig.eigenvalues[b]).unwrap_or(Ordering::Equal));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vectors = DMatrix::from_fn(h.nrows(), order.len(), |r, c| eig.eigenvectors[(r, order[c])]);
    (values, vectors)
}

struct Candidate {
    lambda: f64,
    residual: f64,
    vector: Vec<f64>,
}

/// Smallest non-zero eigenvalue of the normalized Laplacian of a connected graph.
pub fn lambda1(g: &Graph, tol: f64) -> Result<SpectralReport> {
    lambda1_with(g, &LanczosOptions::with_tol(tol))
}

pub fn lambda1_with(g: &Graph, opts: &LanczosOptions) -> Result<SpectralReport> {
    let n = g.n();
    if n < 2 {
        return Err(Error::invalid("lambda1 needs at least 2 vertices"));
    }
    if !(opts.tol > 0.0) {
        return Err(Error::invalid("tolerance must be positive"));
    }
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    let op = NormalizedLaplacian::new(g)?;
    let kernel = op.kernel_vector();
    let dim = n - 1;
    let max_basis = opts.max_basis.clamp(2, dim.max(2)).min(dim);
    let keep = opts.keep.clamp(1, max_basis.saturating_sub(1).max(1));
    let max_iter = opts.max_iter.unwrap_or(10 * n).max(1);
    let target = |lambda: f64| opts.tol * lambda.abs().max(1.0);

    let mut refills = 0u64;
    let mut fresh_vector = |basis: &[Vec<f64>]| -> Option<Vec<f64>> {
        for _ in 0..4 {
            let mut v = random_vector(n, refills);
            refills += 1;
            orthogonalize(&mut v, basis, &kernel);
            let nv = norm(&v);
            if nv > 1e-8 {
                v.iter_mut().for_each(|x| *x /= nv);
                return Some(v);
            }
        }
        None
    };

    let mut basis: Vec<Vec<f64>> = vec![fresh_vector(&[]).ok_or_else(|| Error::invalid("cannot build a start vector"))?];
    // Projected matrix over the expanded part of the basis.
    let mut h = DMatrix::<f64>::zeros(0, 0);
    let mut w = vec![0.0; n];
    let mut iterations = 0;
    let mut best: Option<Candidate> = None;

    let explicit_residual = |y: &[f64]| -> (f64, f64) {
        let ly = op.apply(y);
        let lambda = dot(y, &ly);
        let r: f64 = ly.iter().zip(y).map(|(a, b)| (a - lambda * b).powi(2)).sum::<f64>().sqrt();
        (lambda, r)
    };

    loop {
        let j = basis.len() - 1;
        op.apply_into(&basis[j], &mut w);
        iterations += 1;
        let coeffs = orthogonalize(&mut w, &basis, &kernel);
        h = h.resize(j + 1, j + 1, 0.0);
        for (i, c) in coeffs.iter().enumerate() {
            h[(i, j)] = *c;
            h[(j, i)] = *c;
        }
        let beta = norm(&w);
        let exhausted = basis.len() >= dim;
        let breakdown = beta < 1e-11;
        let restart = !exhausted && !breakdown && basis.len() >= max_basis;
        let check = exhausted || breakdown || restart || basis.len() < 24 || iterations % 4 == 0 || iterations >= max_iter;

        let mut ritz: Option<(Vec<f64>, DMatrix<f64>)> = None;
        if check {
            let (values, vectors) = sorted_eigen(&h);
            let estimate = beta * vectors[(j, 0)].abs();
            if estimate <= target(values[0]) || exhausted || iterations >= max_iter {
                let coeffs: Vec<f64> = vectors.column(0).iter().copied().collect();
                let mut y = combine(&basis, &coeffs, n);
                let ny = norm(&y);
                y.iter_mut().for_each(|x| *x /= ny);
                let (lambda, residual) = explicit_residual(&y);
                if best.as_ref().is_none_or(|b| residual < b.residual) {
                    best = Some(Candidate { lambda, residual, vector: y });
                }
                let b = best.as_ref().unwrap();
                if b.residual <= target(b.lambda) {
                    let b = best.take().unwrap();
                    return Ok(SpectralReport {
                        lambda1: b.lambda,
                        residual: b.residual,
                        iterations,
                        method: "thick-restart lanczos, full reorthogonalization, kernel deflation".into(),
                        eigenvector: b.vector,
                    });
                }
            }
            ritz = Some((values, vectors));
        }

        if exhausted || iterations >= max_iter {
            let b = best.expect("candidate recorded on final check");
            return Err(Error::NotConverged { lambda1: b.lambda, residual: b.residual, iterations });
        }

        let next = if breakdown {
            match fresh_vector(&basis) {
                Some(v) => v,
                None => {
                    let b = best.expect("candidate recorded on breakdown");
                    return Err(Error::NotConverged { lambda1: b.lambda, residual: b.residual, iterations });
                }
            }
        } else {
            w.iter().map(|x| x / beta).collect()
        };

        if restart {
            let (values, vectors) = ritz.expect("restart always checks");
            let kept: Vec<Vec<f64>> = (0..keep)
                .map(|c| {
                    let coeffs: Vec<f64> = vectors.column(c).iter().copied().collect();
                    combine(&basis, &coeffs, n)
                })
                .collect();
            basis = kept;
            h = DMatrix::from_diagonal(&nalgebra::DVector::from_iterator(keep, values.into_iter().take(keep)));
        }
        basis.push(next);
    }
}

fn check_dense_size(g: &Graph) -> Result<()> {
    if g.n() > DENSE_LIMIT {
        return Err(Error::TooLarge { n: g.n(), limit: DENSE_LIMIT });
    }
    Ok(())
}

pub fn dense_normalized_laplacian(g: &Graph) -> Result<DMatrix<f64>> {
    check_dense_size(g)?;
    let op = NormalizedLaplacian::new(g)?;
    let n = g.n();
    let mut m = DMatrix::identity(n, n);
    for u in 0..n {
        for &v in g.neighbors(u) {
            m[(u, v as usize)] = -op.inv_sqrt_deg[u] * op.inv_sqrt_deg[v as usize];
        }
    }
    Ok(m)
}

/// Full spectrum of the normalized Laplacian, ascending (dense solve).
pub fn dense_spectrum(g: &Graph) -> Result<Vec<f64>> {
    let m = dense_normalized_laplacian(g)?;
    Ok(sorted_eigen(&m).0)
}

/// Second-smallest eigenvalue of `D - A` (dense solve).
pub fn combinatorial_laplacian_lambda1(g: &Graph) -> Result<f64> {
    check_dense_size(g)?;
    let n = g.n();
    if n < 2 {
        return Err(Error::invalid("need at least 2 vertices"));
    }
    let mut m = DMatrix::zeros(n, n);
    for u in 0..n {
        m[(u, u)] = g.deg(u) as f64;
        for &v in g.neighbors(u) {
            m[(u, v as usize)] = -1.0;
        }
    }
    Ok(sorted_eigen(&m).0[1])
}

#[derive(Clone, Debug, PartialEq)]
pub struct CutWitness {
    /// Sorted vertex indices of the minimizing set.
    pub subset: Vec<usize>,
    pub boundary_edges: usize,
    /// The denominator of the minimizing ratio.
    pub denominator: usize,
    pub conductance_value: f64,
}

fn adjacency_masks(g: &Graph) -> Vec<u32> {
    (0..g.n()).map(|u| g.neighbors(u).iter().fold(0u32, |m, &v| m | (1 << v))).collect()
}

fn mask_to_vec(mask: u32) -> Vec<usize> {
    (0..32).filter(|&i| mask >> i & 1 == 1).collect()
}

/// Lexicographic order of the sorted element lists of two subsets.
fn lex_less(a: u32, b: u32) -> bool {
    if a == b {
        return false;
    }
    let t = (a ^ b).trailing_zeros();
    let a_has = a >> t & 1 == 1;
    let other = if a_has { b } else { a };
    // The set lacking t either ends before t (and is a prefix) or continues
    // with a larger element.
    let other_is_prefix = other >> t == 0;
    if a_has {
        !other_is_prefix
    } else {
        other_is_prefix
    }
}

/// Walks all subsets of `free` bits in Gray-code order, starting from `base`,
/// reporting `(mask, boundary, volume, size)` for each.
fn gray_walk(g: &Graph, adj: &[u32], base: u32, free: &[usize], mut visit: impl FnMut(u32, usize, usize, usize)) {
    let boundary_of = |mask: u32| -> usize {
        mask_to_vec(mask).iter().map(|&v| (adj[v] & !mask).count_ones() as usize).sum()
    };
    let mut mask = base;
    let mut boundary = boundary_of(mask);
    let mut volume: usize = mask_to_vec(mask).iter().map(|&v| g.deg(v)).sum();
    let mut size = mask.count_ones() as usize;
    visit(mask, boundary, volume, size);
    for step in 1u64..(1u64 << free.len()) {
        let v = free[step.trailing_zeros() as usize];
        let bit = 1u32 << v;
        let inside = (adj[v] & mask).count_ones() as usize;
        let d = g.deg(v);
        if mask & bit == 0 {
            boundary = boundary + d - 2 * inside;
            volume += d;
            size += 1;
            mask |= bit;
        } else {
            mask &= !bit;
            boundary = boundary + 2 * inside - d;
            volume -= d;
            size -= 1;
        }
        visit(mask, boundary, volume, size);
    }
}

/// Exact conductance by enumerating every cut. Vertex 0 is kept on the
/// counted side; ties go to the lexicographically smallest subset.
pub fn conductance_bruteforce(g: &Graph) -> Result<CutWitness> {
    let n = g.n();
    if n > BRUTE_FORCE_LIMIT {
        return Err(Error::TooLarge { n, limit: BRUTE_FORCE_LIMIT });
    }
    if n < 2 {
        return Err(Error::invalid("conductance needs at least 2 vertices"));
    }
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    let adj = adjacency_masks(g);
    let full = (1u32 << n) - 1;
    let vol = g.volume();
    let free: Vec<usize> = (1..n).collect();
    let mut best: Option<(u32, usize, usize)> = None;
    gray_walk(g, &adj, 1, &free, |mask, boundary, volume, _| {
        if mask == full {
            return;
        }
        let denom = volume.min(vol - volume);
        let better = match best {
            None => true,
            Some((bm, bb, bd)) => {
                let lhs = boundary * bd;
                let rhs = bb * denom;
                lhs < rhs || (lhs == rhs && lex_less(mask, bm))
            }
        };
        if better {
            best = Some((mask, boundary, denom));
        }
    });
    let (mask, boundary, denom) = best.expect("n >= 2 gives at least one cut");
    Ok(CutWitness {
        subset: mask_to_vec(mask),
        boundary_edges: boundary,
        denominator: denom,
        conductance_value: boundary as f64 / denom as f64,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct Expansion {
    /// `f64::INFINITY` for graphs with at most one vertex.
    pub value: f64,
    pub witness: Option<CutWitness>,
}

/// Exact expansion constant: min `|∂A| / |A|` over non-empty `A` with `2|A| <= n`.
pub fn expansion_constant_bruteforce(g: &Graph) -> Result<Expansion> {
    let n = g.n();
    if n > BRUTE_FORCE_LIMIT {
        return Err(Error::TooLarge { n, limit: BRUTE_FORCE_LIMIT });
    }
    if n == 0 {
        return Err(Error::invalid("expansion constant of the empty graph"));
    }
    if n == 1 {
        return Ok(Expansion { value: f64::INFINITY, witness: None });
    }
    let adj = adjacency_masks(g);
    let free: Vec<usize> = (0..n).collect();
    let mut best: Option<(u32, usize, usize)> = None;
    gray_walk(g, &adj, 0, &free, |mask, boundary, _, size| {
        if size == 0 || 2 * size > n {
            return;
        }
        let better = match best {
            None => true,
            Some((bm, bb, bs)) => {
                let lhs = boundary * bs;
                let rhs = bb * size;
                lhs < rhs || (lhs == rhs && lex_less(mask, bm))
            }
        };
        if better {
            best = Some((mask, boundary, size));
        }
    });
    let (mask, boundary, size) = best.expect("n >= 2 has a valid subset");
    let value = boundary as f64 / size as f64;
    Ok(Expansion {
        value,
        witness: Some(CutWitness { subset: mask_to_vec(mask), boundary_edges: boundary, denominator: size, conductance_value: value }),
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct CheegerReport {
    pub lambda1: f64,
    pub phi: f64,
    pub lower_ok: bool,
    pub upper_ok: bool,
}

impl CheegerReport {
    pub fn holds(&self) -> bool {
        self.lower_ok && self.upper_ok
    }
}

/// Checks `λ₁/2 <= φ <= sqrt(2 λ₁)` with exact φ and dense λ₁.
pub fn cheeger_check(g: &Graph) -> Result<CheegerReport> {
    let phi = conductance_bruteforce(g)?.conductance_value;
    let lambda1 = dense_spectrum(g)?[1];
    Ok(CheegerReport {
        lambda1,
        phi,
        lower_ok: lambda1 / 2.0 <= phi + CHEEGER_SLACK,
        upper_ok: phi <= (2.0 * lambda1.max(0.0)).sqrt() + CHEEGER_SLACK,
    })
}

/// λ₁ of each layer of a layered graph, with the layers where it dropped.
/// Disconnected layers report `None`. Edge addition does not force the
/// normalized spectrum upward, so drops are reported rather than treated as
/// errors.
#[derive(Clone, Debug, PartialEq)]
pub struct LayerTrend {
    pub lambda1: Vec<Option<f64>>,
    /// 1-based layers `k` with `λ₁(Γ_k) < λ₁(Γ_{k-1})`.
    pub decreases: Vec<usize>,
}

pub fn layer_trend(lg: &LayeredGraph, tol: f64) -> Result<LayerTrend> {
    let mut lambda1s = Vec::with_capacity(lg.num_layers());
    for k in 1..=lg.num_layers() {
        let g = lg.layer(k)?;
        lambda1s.push(if g.is_connected() { Some(lambda1(&g, tol)?.lambda1) } else { None });
    }
    let decreases = (1..lambda1s.len())
        .filter(|&k| matches!((lambda1s[k - 1], lambda1s[k]), (Some(a), Some(b)) if b < a - tol))
        .map(|k| k + 1)
        .collect();
    Ok(LayerTrend { lambda1: lambda1s, decreases })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn two_triangles() -> Graph {
        Graph::from_edges(6, [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5), (2, 3)]).unwrap()
    }

    #[test]
    fn apply_kills_kernel_and_matches_k2() {
        let g = two_triangles();
        let v: Vec<f64> = g.degrees().iter().map(|&d| (d as f64).sqrt()).collect();
        let out = normalized_laplacian_apply(&g, &v).unwrap();
        assert!(out.iter().all(|x| x.abs() < 1e-14));
        let k2 = Graph::complete(2);
        assert_eq!(normalized_laplacian_apply(&k2, &[1.0, -1.0]).unwrap(), vec![2.0, -2.0]);
        assert!(normalized_laplacian_apply(&Graph::empty(2), &[1.0, 1.0]).is_err());
        assert!(normalized_laplacian_apply(&k2, &[1.0]).is_err());
    }

    #[test]
    fn known_spectra() {
        let k4 = lambda1(&Graph::complete(4), DEFAULT_TOL).unwrap();
        assert!((k4.lambda1 - 4.0 / 3.0).abs() < 1e-8);
        let c4 = lambda1(&Graph::cycle(4).unwrap(), DEFAULT_TOL).unwrap();
        assert!((c4.lambda1 - (1.0 - (2.0 * PI / 4.0).cos())).abs() < 1e-8);
        let k2 = lambda1(&Graph::complete(2), DEFAULT_TOL).unwrap();
        assert!((k2.lambda1 - 2.0).abs() < 1e-12);
    }

    #[test]
    fn lambda1_errors() {
        assert!(matches!(lambda1(&Graph::empty(3), 1e-8), Err(Error::Disconnected)));
        let split = Graph::from_edges(4, [(0, 1), (2, 3)]).unwrap();
        assert!(matches!(lambda1(&split, 1e-8), Err(Error::Disconnected)));
        assert!(lambda1(&Graph::empty(1), 1e-8).is_err());
        assert!(lambda1(&Graph::complete(3), 0.0).is_err());
    }

    #[test]
    fn iteration_cap_reports_best_estimate() {
        let g = Graph::path(200);
        let opts = LanczosOptions { max_iter: Some(5), ..LanczosOptions::with_tol(1e-12) };
        match lambda1_with(&g, &opts) {
            Err(Error::NotConverged { lambda1, iterations, .. }) => {
                assert_eq!(iterations, 5);
                assert!(lambda1 > 0.0 && lambda1 <= 2.0);
            }
            other => panic!("expected non-convergence, got {other:?}"),
        }
    }

    #[test]
    fn eigenvector_is_deflated_and_unit() {
        let g = Graph::path(40);
        let rep = lambda1(&g, 1e-10).unwrap();
        let op = NormalizedLaplacian::new(&g).unwrap();
        let k = op.kernel_vector();
        assert!(dot(&rep.eigenvector, &k).abs() < 1e-8);
        assert!((norm(&rep.eigenvector) - 1.0).abs() < 1e-12);
        // path P_n: 1 - cos(pi / (n - 1))
        assert!((rep.lambda1 - (1.0 - (PI / 39.0).cos())).abs() < 1e-9);
    }

    #[test]
    fn small_restart_budget_still_converges() {
        let g = Graph::cycle(120).unwrap();
        let opts = LanczosOptions { tol: 1e-9, max_iter: None, max_basis: 12, keep: 4 };
        let rep = lambda1_with(&g, &opts).unwrap();
        assert!((rep.lambda1 - (1.0 - (2.0 * PI / 120.0).cos())).abs() < 1e-9);
    }

    #[test]
    fn dense_examples() {
        let k3 = dense_spectrum(&Graph::complete(3)).unwrap();
        for (a, b) in k3.iter().zip([0.0, 1.5, 1.5]) {
            assert!((a - b).abs() < 1e-10);
        }
        let k2 = dense_spectrum(&Graph::complete(2)).unwrap();
        assert!((k2[0]).abs() < 1e-10 && (k2[1] - 2.0).abs() < 1e-10);
        // P3: D = diag(1,2,1); L = [[1,-1/√2,0],[-1/√2,1,-1/√2],[0,-1/√2,1]];
        // characteristic polynomial (1-x)((1-x)^2 - 1) gives 0, 1, 2.
        let p3 = dense_spectrum(&Graph::path(3)).unwrap();
        for (a, b) in p3.iter().zip([0.0, 1.0, 2.0]) {
            assert!((a - b).abs() < 1e-10);
        }
        assert!(matches!(dense_spectrum(&Graph::path(513)), Err(Error::TooLarge { .. })));
    }

    #[test]
    fn combinatorial_examples() {
        for n in 2..8 {
            assert!((combinatorial_laplacian_lambda1(&Graph::complete(n)).unwrap() - n as f64).abs() < 1e-10);
        }
        assert!((combinatorial_laplacian_lambda1(&Graph::path(3)).unwrap() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn conductance_examples() {
        let k2 = conductance_bruteforce(&Graph::complete(2)).unwrap();
        assert_eq!((k2.subset.clone(), k2.boundary_edges, k2.denominator), (vec![0], 1, 1));
        let c4 = conductance_bruteforce(&Graph::cycle(4).unwrap()).unwrap();
        assert_eq!(c4.conductance_value, 0.5);
        assert_eq!(c4.subset, vec![0, 1]);
        let tt = conductance_bruteforce(&two_triangles()).unwrap();
        assert_eq!(tt.subset, vec![0, 1, 2]);
        assert_eq!((tt.boundary_edges, tt.denominator), (1, 7));
        assert!(conductance_bruteforce(&Graph::path(23)).is_err());
        assert!(conductance_bruteforce(&Graph::empty(3)).is_err());
    }

    #[test]
    fn expansion_examples() {
        assert_eq!(expansion_constant_bruteforce(&Graph::complete(2)).unwrap().value, 1.0);
        let c4 = expansion_constant_bruteforce(&Graph::cycle(4).unwrap()).unwrap();
        assert_eq!(c4.value, 1.0);
        assert_eq!(c4.witness.unwrap().subset, vec![0, 1]);
        assert_eq!(expansion_constant_bruteforce(&Graph::complete(4)).unwrap().value, 2.0);
        let single = expansion_constant_bruteforce(&Graph::empty(1)).unwrap();
        assert!(single.value.is_infinite() && single.witness.is_none());
    }

    #[test]
    fn lexicographic_tie_break() {
        // a prefix sorts first
        assert!(lex_less(0b001, 0b011));
        assert!(lex_less(0b011, 0b101));
        assert!(!lex_less(0b101, 0b011));
        assert!(lex_less(0b0011, 0b0100));
        assert!(!lex_less(0b0100, 0b0011));
    }

    #[test]
    fn cheeger_on_small_graphs() {
        let c4 = cheeger_check(&Graph::cycle(4).unwrap()).unwrap();
        assert!((c4.lambda1 - 1.0).abs() < 1e-10);
        assert_eq!(c4.phi, 0.5);
        assert!(c4.holds());
        let k4 = cheeger_check(&Graph::complete(4)).unwrap();
        // balanced cut of K4: 4 boundary edges over volume 6
        assert!((k4.phi - 2.0 / 3.0).abs() < 1e-15);
        assert!(k4.holds());
    }

    #[test]
    fn report_json_fields() {
        let rep = lambda1(&Graph::complete(4), 1e-8).unwrap();
        let v: serde_json::Value = serde_json::from_str(&rep.to_json()).unwrap();
        for key in ["lambda1", "residual", "iterations", "method"] {
            assert!(v.get(key).is_some(), "{key}");
        }
        assert!(v.get("eigenvector").is_none());
    }
}
