//! Simple undirected graphs, bipartite graphs, vertex sets and degree
//! statistics.
//!
//! Sequence norms follow the normalized convention used throughout the crate:
//! `mean` is the averaged ℓ¹ norm, `rms` the averaged ℓ² norm and `max` the
//! ℓ∞ norm. Plain Euclidean norms of vectors are written out explicitly.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::par::{self, Exec};

/// Rows shorter than this are multiplied on the calling thread.
const PAR_MATVEC_MIN: usize = 4096;

/// A simple undirected graph in compressed sparse row form.
///
/// Neighbor lists are sorted, duplicate-free, loop-free and symmetric.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    offsets: Vec<usize>,
    targets: Vec<u32>,
}

impl Graph {
    /// Graph on `n` vertices with no edges.
    pub fn empty(n: usize) -> Self {
        Graph {
            offsets: vec![0; n + 1],
            targets: Vec::new(),
        }
    }

    /// Builds a graph from undirected edges. Duplicate edges (in either
    /// orientation) are collapsed; self-loops and out-of-range endpoints are
    /// rejected.
    pub fn from_edges<I>(n: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        check_index_space(n)?;
        let mut adj: Vec<Vec<u32>> = vec![Vec::new(); n];
        for (u, v) in edges {
            for x in [u, v] {
                if x >= n {
                    return Err(Error::IndexOutOfRange { index: x, count: n });
                }
            }
            if u == v {
                return Err(Error::SelfLoop {
                    vertex: u as u64,
                    line: None,
                });
            }
            adj[u].push(v as u32);
            adj[v].push(u as u32);
        }
        Ok(Self::from_lists(adj))
    }

    /// Sorts and deduplicates each list and packs them. Callers guarantee
    /// symmetry and the absence of loops.
    pub(crate) fn from_lists(mut adj: Vec<Vec<u32>>) -> Self {
        let mut offsets = Vec::with_capacity(adj.len() + 1);
        offsets.push(0);
        let mut targets = Vec::new();
        for list in adj.iter_mut() {
            list.sort_unstable();
            list.dedup();
            targets.extend_from_slice(list);
            offsets.push(targets.len());
        }
        Graph { offsets, targets }
    }

    pub(crate) fn from_csr(offsets: Vec<usize>, targets: Vec<u32>) -> Self {
        debug_assert_eq!(*offsets.last().unwrap_or(&0), targets.len());
        Graph { offsets, targets }
    }

    pub fn vertex_count(&self) -> usize {
        self.offsets.len() - 1
    }

    pub fn edge_count(&self) -> usize {
        self.targets.len() / 2
    }

    pub fn neighbors(&self, v: usize) -> &[u32] {
        &self.targets[self.offsets[v]..self.offsets[v + 1]]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.offsets[v + 1] - self.offsets[v]
    }

    pub fn degrees(&self) -> Vec<usize> {
        (0..self.vertex_count()).map(|v| self.degree(v)).collect()
    }

    pub fn max_degree(&self) -> usize {
        (0..self.vertex_count())
            .map(|v| self.degree(v))
            .max()
            .unwrap_or(0)
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.neighbors(u).binary_search(&(v as u32)).is_ok()
    }

    /// Undirected edges `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.vertex_count()).flat_map(move |u| {
            self.neighbors(u)
                .iter()
                .map(|&v| v as usize)
                .filter(move |&v| v > u)
                .map(move |v| (u, v))
        })
    }

    /// Checks the structural invariants: sorted, loop-free, duplicate-free
    /// and symmetric neighbor lists.
    pub fn is_valid(&self) -> bool {
        let n = self.vertex_count();
        (0..n).all(|u| {
            let nb = self.neighbors(u);
            nb.windows(2).all(|w| w[0] < w[1])
                && nb.iter().all(|&v| {
                    let v = v as usize;
                    v < n && v != u && self.has_edge(v, u)
                })
        })
    }

    /// Neighborhood bitmasks; only meaningful for graphs with at most 64
    /// vertices.
    pub(crate) fn neighbor_masks(&self) -> Vec<u64> {
        debug_assert!(self.vertex_count() <= 64);
        (0..self.vertex_count())
            .map(|u| self.neighbors(u).iter().fold(0u64, |m, &v| m | (1 << v)))
            .collect()
    }

    /// `out = A x`, where `A` is the adjacency matrix. Each row is summed in
    /// neighbor order, so the result does not depend on `exec`.
    pub fn matvec(&self, x: &[f64], out: &mut [f64], exec: Exec) {
        par::fill(exec, out, PAR_MATVEC_MIN, |u| {
            self.neighbors(u).iter().map(|&v| x[v as usize]).sum()
        });
    }
}

/// A bipartite graph with left part `U` (rows) and right part `W` (columns),
/// stored as its biadjacency structure in both orientations.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BipartiteGraph {
    rows: Graphlike,
    cols: Graphlike,
}

#[derive(Clone, Debug, PartialEq, Eq)]
struct Graphlike {
    offsets: Vec<usize>,
    targets: Vec<u32>,
}

impl Graphlike {
    fn from_lists(mut lists: Vec<Vec<u32>>) -> Self {
        let mut offsets = Vec::with_capacity(lists.len() + 1);
        offsets.push(0);
        let mut targets = Vec::new();
        for list in lists.iter_mut() {
            list.sort_unstable();
            list.dedup();
            targets.extend_from_slice(list);
            offsets.push(targets.len());
        }
        Graphlike { offsets, targets }
    }

    fn count(&self) -> usize {
        self.offsets.len() - 1
    }

    fn list(&self, i: usize) -> &[u32] {
        &self.targets[self.offsets[i]..self.offsets[i + 1]]
    }

    fn transpose(&self, other_count: usize) -> Graphlike {
        let mut lists = vec![Vec::new(); other_count];
        for i in 0..self.count() {
            for &j in self.list(i) {
                lists[j as usize].push(i as u32);
            }
        }
        Graphlike::from_lists(lists)
    }
}

impl BipartiteGraph {
    /// Builds from `(left, right)` edges; duplicates collapse.
    pub fn from_edges<I>(left_count: usize, right_count: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut rows = vec![Vec::new(); left_count];
        for (u, w) in edges {
            if u >= left_count {
                return Err(Error::IndexOutOfRange {
                    index: u,
                    count: left_count,
                });
            }
            if w >= right_count {
                return Err(Error::IndexOutOfRange {
                    index: w,
                    count: right_count,
                });
            }
            rows[u].push(w);
        }
        Self::from_rows(right_count, rows)
    }

    /// Builds from one right-neighbor list per left vertex.
    pub fn from_rows(right_count: usize, rows: Vec<Vec<usize>>) -> Result<Self> {
        check_index_space(rows.len())?;
        check_index_space(right_count)?;
        let mut lists = Vec::with_capacity(rows.len());
        for row in rows {
            let mut list = Vec::with_capacity(row.len());
            for w in row {
                if w >= right_count {
                    return Err(Error::IndexOutOfRange {
                        index: w,
                        count: right_count,
                    });
                }
                list.push(w as u32);
            }
            lists.push(list);
        }
        let rows = Graphlike::from_lists(lists);
        let cols = rows.transpose(right_count);
        Ok(BipartiteGraph { rows, cols })
    }

    pub fn left_count(&self) -> usize {
        self.rows.count()
    }

    pub fn right_count(&self) -> usize {
        self.cols.count()
    }

    pub fn edge_count(&self) -> usize {
        self.rows.targets.len()
    }

    /// Right neighbors of left vertex `u`.
    pub fn row(&self, u: usize) -> &[u32] {
        self.rows.list(u)
    }

    /// Left neighbors of right vertex `w`.
    pub fn col(&self, w: usize) -> &[u32] {
        self.cols.list(w)
    }

    pub fn left_degrees(&self) -> Vec<usize> {
        (0..self.left_count()).map(|u| self.row(u).len()).collect()
    }

    pub fn right_degrees(&self) -> Vec<usize> {
        (0..self.right_count()).map(|w| self.col(w).len()).collect()
    }

    /// Swaps the roles of the two parts (biadjacency `Bᵗ`).
    pub fn transposed(&self) -> BipartiteGraph {
        BipartiteGraph {
            rows: self.cols.clone(),
            cols: self.rows.clone(),
        }
    }

    /// `out = B y` (length `left_count`).
    pub fn mul_b(&self, y: &[f64], out: &mut [f64], exec: Exec) {
        par::fill(exec, out, PAR_MATVEC_MIN, |u| {
            self.row(u).iter().map(|&w| y[w as usize]).sum()
        });
    }

    /// `out = Bᵗ x` (length `right_count`).
    pub fn mul_bt(&self, x: &[f64], out: &mut [f64], exec: Exec) {
        par::fill(exec, out, PAR_MATVEC_MIN, |w| {
            self.col(w).iter().map(|&u| x[u as usize]).sum()
        });
    }

    /// The same graph as a plain [`Graph`]: left vertex `u` becomes `u`,
    /// right vertex `w` becomes `left_count + w`.
    pub fn to_graph(&self) -> Graph {
        let m = self.left_count();
        let mut adj: Vec<Vec<u32>> = Vec::with_capacity(m + self.right_count());
        for u in 0..m {
            adj.push(self.row(u).iter().map(|&w| w + m as u32).collect());
        }
        for w in 0..self.right_count() {
            adj.push(self.col(w).to_vec());
        }
        Graph::from_lists(adj)
    }

    /// Number of edges between `x ⊆ U` and `y ⊆ W`.
    pub fn e_between(&self, x: &VertexSet, y: &VertexSet) -> Result<u64> {
        x.check_nonempty_in(self.left_count())?;
        y.check_nonempty_in(self.right_count())?;
        let mut in_y = vec![false; self.right_count()];
        for &w in y.members() {
            in_y[w] = true;
        }
        Ok(x.members()
            .iter()
            .map(|&u| self.row(u).iter().filter(|&&w| in_y[w as usize]).count() as u64)
            .sum())
    }

    /// `e(X,Y)/√(|X||Y|)` for `X ⊆ U`, `Y ⊆ W`.
    pub fn bi_average_degree(&self, x: &VertexSet, y: &VertexSet) -> Result<f64> {
        let e = self.e_between(x, y)?;
        Ok(density(e, x.len(), y.len()))
    }
}

fn check_index_space(n: usize) -> Result<()> {
    if n > u32::MAX as usize {
        return Err(Error::Domain(format!(
            "{n} vertices exceed the 32-bit index space"
        )));
    }
    Ok(())
}

/// The bipartite double cover `G × K₂`: both parts are copies of `V(g)` and
/// the biadjacency matrix is the adjacency matrix of `g`.
pub fn double_cover(g: &Graph) -> BipartiteGraph {
    let rows = Graphlike {
        offsets: g.offsets.clone(),
        targets: g.targets.clone(),
    };
    // A is symmetric, so the column structure is the row structure.
    let cols = rows.clone();
    BipartiteGraph { rows, cols }
}

/// A canonically sorted, duplicate-free set of vertex indices.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct VertexSet(Vec<usize>);

impl VertexSet {
    pub fn new<I: IntoIterator<Item = usize>>(members: I) -> Self {
        let mut v: Vec<usize> = members.into_iter().collect();
        v.sort_unstable();
        v.dedup();
        VertexSet(v)
    }

    /// All of `0..n`.
    pub fn full(n: usize) -> Self {
        VertexSet((0..n).collect())
    }

    pub fn from_mask(mask: u64) -> Self {
        VertexSet((0..64).filter(|i| mask >> i & 1 == 1).collect())
    }

    pub fn members(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, v: usize) -> bool {
        self.0.binary_search(&v).is_ok()
    }

    pub fn check_nonempty_in(&self, n: usize) -> Result<()> {
        if self.is_empty() {
            return Err(Error::EmptySet);
        }
        self.check_range(n)
    }

    pub fn check_range(&self, n: usize) -> Result<()> {
        match self.0.last() {
            Some(&v) if v >= n => Err(Error::IndexOutOfRange { index: v, count: n }),
            _ => Ok(()),
        }
    }
}

/// Number of ordered adjacent pairs `(u, v) ∈ X × Y`.
///
/// An edge with both endpoints in `X ∩ Y` is counted twice, so
/// `e(V, V) = 2·|E|` and `e(V, V)/|V|` is the average degree.
pub fn e_between(g: &Graph, x: &VertexSet, y: &VertexSet) -> Result<u64> {
    let n = g.vertex_count();
    x.check_nonempty_in(n)?;
    y.check_nonempty_in(n)?;
    let mut in_y = vec![false; n];
    for &v in y.members() {
        in_y[v] = true;
    }
    Ok(x.members()
        .iter()
        .map(|&u| g.neighbors(u).iter().filter(|&&v| in_y[v as usize]).count() as u64)
        .sum())
}

/// `e(X,Y)/√(|X||Y|)`.
pub fn bi_average_degree(g: &Graph, x: &VertexSet, y: &VertexSet) -> Result<f64> {
    let e = e_between(g, x, y)?;
    Ok(density(e, x.len(), y.len()))
}

pub(crate) fn density(edges: u64, x_len: usize, y_len: usize) -> f64 {
    edges as f64 / ((x_len as f64) * (y_len as f64)).sqrt()
}

/// A sequence of non-negative reals (degrees, localized degrees `d_X(v)`, or
/// any non-negative vector).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct DegreeSequence(Vec<f64>);

impl DegreeSequence {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        check_nonnegative(&values)?;
        Ok(DegreeSequence(values))
    }

    pub fn from_counts(counts: &[usize]) -> Self {
        DegreeSequence(counts.iter().map(|&c| c as f64).collect())
    }

    pub fn values(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Averaged ℓ¹ norm, `(1/n)Σdᵢ`.
    pub fn mean(&self) -> f64 {
        if self.0.is_empty() {
            return 0.0;
        }
        self.0.iter().sum::<f64>() / self.0.len() as f64
    }

    /// Averaged ℓ² norm, `√((1/n)Σdᵢ²)`.
    pub fn rms(&self) -> f64 {
        if self.0.is_empty() {
            return 0.0;
        }
        (self.0.iter().map(|d| d * d).sum::<f64>() / self.0.len() as f64).sqrt()
    }

    pub fn max(&self) -> f64 {
        self.0.iter().copied().fold(0.0, f64::max)
    }

    pub fn rho(&self) -> Rho {
        rho(&self.0)
    }
}

pub(crate) fn check_nonnegative(values: &[f64]) -> Result<()> {
    match values
        .iter()
        .enumerate()
        .find(|(_, v)| !(v.is_finite() && **v >= 0.0))
    {
        Some((index, &value)) => Err(Error::NegativeEntry { index, value }),
        None => Ok(()),
    }
}

/// The smoothness functional of a non-negative sequence together with its
/// witness index `k` (1-based, in non-increasing order).
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Rho {
    pub value: f64,
    pub k: usize,
}

/// `ρ(d) = d₁/d_k`, where `d₁ ≥ … ≥ d_n` is the non-increasing rearrangement
/// and `k` is the smallest index with `d₁² + … + d_k² ≥ d_{k+1}² + … + d_n²`;
/// `ρ = 1` for the zero (or empty) sequence.
pub fn rho(values: &[f64]) -> Rho {
    let mut sorted = values.to_vec();
    sorted.sort_by(|a, b| b.total_cmp(a));
    rho_of_sorted(&sorted)
}

/// [`rho`] for a sequence that is already sorted non-increasingly.
pub(crate) fn rho_of_sorted(sorted: &[f64]) -> Rho {
    let n = sorted.len();
    if n == 0 {
        return Rho { value: 1.0, k: 0 };
    }
    // suffix[i] = Σ_{j ≥ i} d_j²
    let mut suffix = vec![0.0; n + 1];
    for i in (0..n).rev() {
        suffix[i] = suffix[i + 1] + sorted[i] * sorted[i];
    }
    let mut prefix = 0.0;
    let mut k = n;
    for i in 0..n {
        prefix += sorted[i] * sorted[i];
        if prefix >= suffix[i + 1] {
            k = i + 1;
            break;
        }
    }
    let dk = sorted[k - 1];
    let value = if dk == 0.0 { 1.0 } else { sorted[0] / dk };
    Rho { value, k }
}

/// Degree sequence with its normalized norms.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DegreeStats {
    pub degrees: DegreeSequence,
    /// Average degree.
    pub avg: f64,
    /// Maximum degree Δ.
    pub max: usize,
    /// Root-mean-square degree.
    pub rms: f64,
}

pub fn degree_stats(g: &Graph) -> DegreeStats {
    let degrees = DegreeSequence::from_counts(&g.degrees());
    DegreeStats {
        avg: degrees.mean(),
        max: g.max_degree(),
        rms: degrees.rms(),
        degrees,
    }
}
