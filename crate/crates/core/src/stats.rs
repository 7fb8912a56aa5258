//! Clustering, sparsity and valency statistics.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graphgen::Graph;
use crate::spectral;

/// Number of common elements of two sorted slices.
fn sorted_intersection_len(a: &[u32], b: &[u32]) -> usize {
    let (mut i, mut j, mut count) = (0, 0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                count += 1;
                i += 1;
                j += 1;
            }
        }
    }
    count
}

/// Triangles through `v`, each counted once.
pub fn triangles_at(g: &Graph, v: usize) -> usize {
    let nv = g.neighbors(v);
    let twice: usize = nv.iter().map(|&u| sorted_intersection_len(nv, g.neighbors(u as usize))).sum();
    twice / 2
}

/// Fraction of neighbor pairs of `v` that are adjacent; 0 when `deg(v) <= 1`.
pub fn local_clustering(g: &Graph, v: usize) -> Result<f64> {
    g.check_vertex(v)?;
    Ok(clustering_unchecked(g, v))
}

fn clustering_unchecked(g: &Graph, v: usize) -> f64 {
    let d = g.deg(v);
    if d <= 1 {
        return 0.0;
    }
    let pairs = d * (d - 1) / 2;
    triangles_at(g, v) as f64 / pairs as f64
}

pub fn average_clustering(g: &Graph) -> Result<f64> {
    if g.n() == 0 {
        return Err(Error::invalid("average clustering of the empty graph"));
    }
    let sum: f64 = (0..g.n()).map(|v| clustering_unchecked(g, v)).sum();
    Ok(sum / g.n() as f64)
}

/// Edge density `2|E| / (n (n - 1))`.
pub fn sparsity(g: &Graph) -> Result<f64> {
    let n = g.n();
    if n < 2 {
        return Err(Error::invalid("sparsity needs at least 2 vertices"));
    }
    Ok(2.0 * g.edge_count() as f64 / (n as f64 * (n as f64 - 1.0)))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Valency {
    pub max: usize,
    pub avg: f64,
}

pub fn valency_stats(g: &Graph) -> Result<Valency> {
    if g.n() == 0 {
        return Err(Error::invalid("valency of the empty graph"));
    }
    let max = (0..g.n()).map(|v| g.deg(v)).max().unwrap_or(0);
    Ok(Valency { max, avg: g.volume() as f64 / g.n() as f64 })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GraphSummary {
    pub lambda1: f64,
    pub sparsity: f64,
    pub max_valency: usize,
    pub avg_valency: f64,
    pub avg_clustering: f64,
    pub n: usize,
    pub edge_count: usize,
}

/// Every summary statistic of a connected graph, λ₁ included.
pub fn summarize(g: &Graph, spectral_tol: f64) -> Result<GraphSummary> {
    let lambda1 = spectral::lambda1(g, spectral_tol)?.lambda1;
    let valency = valency_stats(g)?;
    Ok(GraphSummary {
        lambda1,
        sparsity: sparsity(g)?,
        max_valency: valency.max,
        avg_valency: valency.avg,
        avg_clustering: average_clustering(g)?,
        n: g.n(),
        edge_count: g.edge_count(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn clustering_examples() {
        let k3 = Graph::complete(3);
        assert!((0..3).all(|v| local_clustering(&k3, v).unwrap() == 1.0));
        let p3 = Graph::path(3);
        assert_eq!(local_clustering(&p3, 1).unwrap(), 0.0);
        assert_eq!(local_clustering(&p3, 0).unwrap(), 0.0);
        // K_{1,3} plus an edge between two leaves: hub sees 1 of 3 pairs closed
        let g = Graph::from_edges(4, [(0, 1), (0, 2), (0, 3), (1, 2)]).unwrap();
        assert!((local_clustering(&g, 0).unwrap() - 1.0 / 3.0).abs() < 1e-15);
        assert!(local_clustering(&g, 4).is_err());
    }

    #[test]
    fn average_clustering_extremes() {
        for n in 3..9 {
            assert_eq!(average_clustering(&Graph::complete(n)).unwrap(), 1.0);
        }
        assert_eq!(average_clustering(&Graph::path(10)).unwrap(), 0.0);
        assert_eq!(average_clustering(&Graph::star(6)).unwrap(), 0.0);
        assert_eq!(average_clustering(&Graph::cycle(4).unwrap()).unwrap(), 0.0);
    }

    #[test]
    fn sparsity_examples() {
        assert_eq!(sparsity(&Graph::complete(7)).unwrap(), 1.0);
        assert_eq!(sparsity(&Graph::empty(7)).unwrap(), 0.0);
        assert!(sparsity(&Graph::empty(1)).is_err());
    }

    #[test]
    fn valency_examples() {
        assert_eq!(valency_stats(&Graph::complete(4)).unwrap(), Valency { max: 3, avg: 3.0 });
        let star = valency_stats(&Graph::star(5)).unwrap();
        assert_eq!(star.max, 5);
        assert!((star.avg - 10.0 / 6.0).abs() < 1e-15);
    }

    #[test]
    fn summaries() {
        let k4 = summarize(&Graph::complete(4), 1e-10).unwrap();
        assert!((k4.lambda1 - 4.0 / 3.0).abs() < 1e-9);
        assert_eq!((k4.sparsity, k4.max_valency, k4.avg_valency, k4.avg_clustering), (1.0, 3, 3.0, 1.0));
        let p3 = summarize(&Graph::path(3), 1e-10).unwrap();
        assert!((p3.lambda1 - 1.0).abs() < 1e-9);
        assert!((p3.sparsity - 2.0 / 3.0).abs() < 1e-15);
        assert_eq!((p3.max_valency, p3.avg_clustering), (2, 0.0));
        assert!((p3.avg_valency - 4.0 / 3.0).abs() < 1e-15);
        assert!(summarize(&Graph::empty(3), 1e-8).is_err());
    }
}
