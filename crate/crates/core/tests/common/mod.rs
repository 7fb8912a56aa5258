#![allow(dead_code)]

use horograph::Graph;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random spanning tree plus each remaining pair with probability `p`.
pub fn random_connected(rng: &mut ChaCha8Rng, n: usize, p: f64) -> Graph {
    let mut edges = Vec::new();
    for v in 1..n {
        edges.push((rng.random_range(0..v), v));
    }
    for u in 0..n {
        for v in u + 1..n {
            if rng.random::<f64>() < p && !edges.contains(&(u, v)) {
                edges.push((u, v));
            }
        }
    }
    Graph::from_edges(n, edges).unwrap()
}

/// Any graph, possibly disconnected, with no isolated-vertex guarantee.
pub fn random_graph(rng: &mut ChaCha8Rng, n: usize, p: f64) -> Graph {
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.random::<f64>() < p {
                edges.push((u, v));
            }
        }
    }
    Graph::from_edges(n, edges).unwrap()
}

pub fn adjacency(g: &Graph) -> Vec<Vec<bool>> {
    let n = g.n();
    let mut a = vec![vec![false; n]; n];
    for (u, v) in g.edges() {
        a[u][v] = true;
        a[v][u] = true;
    }
    a
}

/// Local clustering as the ordered triple sum over neighbours, as an exact
/// fraction `(numerator, denominator)`; `None` for degree below 2.
pub fn clustering_triple_sum(a: &[Vec<bool>], i: usize) -> Option<(u64, u64)> {
    let n = a.len();
    let d = (0..n).filter(|&j| a[i][j]).count() as u64;
    if d < 2 {
        return None;
    }
    let mut sum = 0u64;
    for j in 0..n {
        for k in 0..n {
            if a[i][j] && a[j][k] && a[k][i] {
                sum += 1;
            }
        }
    }
    Some((sum, d * (d - 1)))
}
