//! Small named graphs and seeded random graphs.

use rand::Rng;

use crate::graph::{BipartiteGraph, Graph};

pub fn path(n: usize) -> Graph {
    Graph::from_edges(n, (1..n).map(|i| (i - 1, i))).expect("path edges are valid")
}

/// The cycle `C_n` (`n ≥ 3`).
pub fn cycle(n: usize) -> Graph {
    assert!(n >= 3, "cycle needs at least 3 vertices");
    Graph::from_edges(n, (0..n).map(|i| (i, (i + 1) % n))).expect("cycle edges are valid")
}

pub fn complete(n: usize) -> Graph {
    let edges = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v)));
    Graph::from_edges(n, edges).expect("complete edges are valid")
}

/// `K_{a,b}` on vertices `0..a` and `a..a+b`.
pub fn complete_bipartite(a: usize, b: usize) -> Graph {
    let edges = (0..a).flat_map(|u| (0..b).map(move |w| (u, a + w)));
    Graph::from_edges(a + b, edges).expect("complete bipartite edges are valid")
}

/// `K_{a,b}` as a [`BipartiteGraph`].
pub fn complete_bipartite_parts(a: usize, b: usize) -> BipartiteGraph {
    BipartiteGraph::from_rows(b, vec![(0..b).collect(); a]).expect("rows are in range")
}

/// The star `K_{1,leaves}` with center 0.
pub fn star(leaves: usize) -> Graph {
    complete_bipartite(1, leaves)
}

pub fn petersen() -> Graph {
    let outer = (0..5).map(|i| (i, (i + 1) % 5));
    let spokes = (0..5).map(|i| (i, i + 5));
    let inner = (0..5).map(|i| (5 + i, 5 + (i + 2) % 5));
    Graph::from_edges(10, outer.chain(spokes).chain(inner)).expect("petersen edges are valid")
}

/// Disjoint union; vertices of `b` are shifted by `a.vertex_count()`.
pub fn disjoint_union(a: &Graph, b: &Graph) -> Graph {
    let shift = a.vertex_count();
    let edges = a
        .edges()
        .chain(b.edges().map(|(u, v)| (u + shift, v + shift)));
    Graph::from_edges(shift + b.vertex_count(), edges).expect("union edges are valid")
}

/// Erdős–Rényi `G(n, p)`: each of the `n(n-1)/2` pairs independently, in
/// lexicographic order.
pub fn gnp<R: Rng + ?Sized>(n: usize, p: f64, rng: &mut R) -> Graph {
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.random::<f64>() < p {
                edges.push((u, v));
            }
        }
    }
    Graph::from_edges(n, edges).expect("random edges are valid")
}

/// Random bipartite graph with independent edges of probability `p`.
pub fn random_bipartite<R: Rng + ?Sized>(m: usize, n: usize, p: f64, rng: &mut R) -> BipartiteGraph {
    let mut edges = Vec::new();
    for u in 0..m {
        for w in 0..n {
            if rng.random::<f64>() < p {
                edges.push((u, w));
            }
        }
    }
    BipartiteGraph::from_edges(m, n, edges).expect("random edges are valid")
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn named_graphs() {
        let p = petersen();
        assert_eq!((p.vertex_count(), p.edge_count()), (10, 15));
        assert!(p.degrees().iter().all(|&d| d == 3));
        assert!(p.is_valid());
        assert_eq!(star(4).degrees(), vec![4, 1, 1, 1, 1]);
        assert_eq!(complete(5).edge_count(), 10);
        assert_eq!(complete_bipartite(2, 3).edge_count(), 6);
        assert_eq!(cycle(6).edge_count(), 6);
    }

    #[test]
    fn gnp_is_seeded() {
        let a = gnp(30, 0.3, &mut ChaCha8Rng::seed_from_u64(5));
        let b = gnp(30, 0.3, &mut ChaCha8Rng::seed_from_u64(5));
        assert_eq!(a, b);
        assert!(a.is_valid());
    }
}
