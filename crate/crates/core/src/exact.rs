//! Exact maximum bi-average degree by exhaustive search.
//!
//! One side is enumerated over all nonempty subsets `Y`. For a fixed `Y`, the
//! best partner set is a top-`k` set of the localized degrees `d_Y(v)`, so
//! only `n` prefixes need checking instead of all `2ⁿ` partners. Densities
//! are compared as exact rationals `e²/(|X||Y|)`.

use std::cmp::Ordering;
use std::ops::Range;
use std::sync::atomic::{AtomicBool, Ordering as AtomicOrdering};
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{degree_stats, density, rho, BipartiteGraph, Graph, VertexSet};
use crate::par::{self, Exec};
use crate::spectral::{lambda_max, SpectralParams};

pub const DEFAULT_CAP: usize = 26;
/// Hard ceiling for any configured cap.
pub const MAX_CAP: usize = 30;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ExactParams {
    pub cap: usize,
    pub time_limit: Option<Duration>,
    pub exec: Exec,
}

impl Default for ExactParams {
    fn default() -> Self {
        ExactParams {
            cap: DEFAULT_CAP,
            time_limit: None,
            exec: Exec::default(),
        }
    }
}

impl ExactParams {
    pub fn with_cap(cap: usize) -> Self {
        ExactParams {
            cap,
            ..Default::default()
        }
    }

    fn check(&self, count: usize) -> Result<()> {
        if self.cap > MAX_CAP {
            return Err(Error::Domain(format!("cap {} exceeds the maximum {MAX_CAP}", self.cap)));
        }
        if count > self.cap {
            return Err(Error::CapExceeded {
                count,
                cap: self.cap,
            });
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExactMResult {
    pub value: f64,
    /// `e(X, Y)` for the witnesses.
    pub edges: u64,
    pub x_witness: VertexSet,
    pub y_witness: VertexSet,
    pub subsets_scanned: u64,
}

impl ExactMResult {
    /// Exact comparison of `e²/(|X||Y|)`.
    pub fn cmp_value(&self, other: &ExactMResult) -> Ordering {
        cmp_density(
            self.edges,
            self.x_witness.len() as u64 * self.y_witness.len() as u64,
            other.edges,
            other.x_witness.len() as u64 * other.y_witness.len() as u64,
        )
    }

    pub fn same_value(&self, other: &ExactMResult) -> bool {
        self.cmp_value(other) == Ordering::Equal
    }
}

/// Compares `e1²/s1` with `e2²/s2`; a zero size means density 0.
pub(crate) fn cmp_density(e1: u64, s1: u64, e2: u64, s2: u64) -> Ordering {
    let lhs = (e1 as u128) * (e1 as u128) * (s2.max(1) as u128);
    let rhs = (e2 as u128) * (e2 as u128) * (s1.max(1) as u128);
    lhs.cmp(&rhs)
}

/// Best pair found for one enumerated set.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
struct Candidate {
    edges: u64,
    small_mask: u64,
    small_len: u64,
    big_len: u64,
}

impl Candidate {
    /// True when `self` should replace `other`: larger density, then smaller
    /// `(|small|, small mask, |big|)`.
    fn beats(&self, other: &Candidate) -> bool {
        match cmp_density(
            self.edges,
            self.small_len * self.big_len,
            other.edges,
            other.small_len * other.big_len,
        ) {
            Ordering::Greater => true,
            Ordering::Less => false,
            Ordering::Equal => {
                (self.small_len, self.small_mask, self.big_len)
                    < (other.small_len, other.small_mask, other.big_len)
            }
        }
    }
}

fn merge(a: Option<Candidate>, b: Option<Candidate>) -> Option<Candidate> {
    match (a, b) {
        (Some(a), Some(b)) => Some(if b.beats(&a) { b } else { a }),
        (a, None) => a,
        (None, b) => b,
    }
}

struct Search<'a> {
    /// For every vertex of the prefix-optimized side, its neighbors inside
    /// the enumerated side as a bitmask.
    masks: &'a [u64],
    small: usize,
    deadline: Option<Instant>,
    abort: AtomicBool,
}

impl Search<'_> {
    fn scan(&self, range: Range<u64>) -> Option<Candidate> {
        let mut counts = vec![0u64; self.small + 1];
        let mut best: Option<Candidate> = None;
        for (i, y) in range.enumerate() {
            if i % 4096 == 0 {
                if self.abort.load(AtomicOrdering::Relaxed) {
                    return None;
                }
                if self.deadline.is_some_and(|d| Instant::now() > d) {
                    self.abort.store(true, AtomicOrdering::Relaxed);
                    return None;
                }
            }
            counts.iter_mut().for_each(|c| *c = 0);
            for &m in self.masks {
                counts[(m & y).count_ones() as usize] += 1;
            }
            let (edges, big_len) = best_prefix(&counts);
            let cand = Candidate {
                edges,
                small_mask: y,
                small_len: y.count_ones() as u64,
                big_len,
            };
            if best.is_none_or(|b| cand.beats(&b)) {
                best = Some(cand);
            }
        }
        best
    }
}

/// Best `(e_k, k)` over prefixes of the degrees sorted non-increasingly,
/// given as a histogram; the smallest `k` wins ties.
fn best_prefix(counts: &[u64]) -> (u64, u64) {
    let (mut e, mut k) = (0u64, 0u64);
    let mut best = (0u64, 1u64);
    for d in (1..counts.len()).rev() {
        for _ in 0..counts[d] {
            e += d as u64;
            k += 1;
            if cmp_density(e, k, best.0, best.1) == Ordering::Greater {
                best = (e, k);
            }
        }
    }
    best
}

/// Top-`k` vertices by `d(v) = |masks[v] ∩ small_mask|`, ties by index.
fn top_k(masks: &[u64], small_mask: u64, k: usize) -> VertexSet {
    let mut order: Vec<usize> = (0..masks.len()).collect();
    order.sort_by_key(|&v| std::cmp::Reverse((masks[v] & small_mask).count_ones()));
    VertexSet::new(order.into_iter().take(k))
}

struct Found {
    small: VertexSet,
    big: VertexSet,
    edges: u64,
    scanned: u64,
}

fn search(masks: &[u64], small: usize, params: &ExactParams) -> Result<Found> {
    let total: u64 = 1u64 << small;
    let scanned = total - 1;
    if small == 0 || masks.is_empty() {
        return Ok(Found {
            small: VertexSet::default(),
            big: VertexSet::default(),
            edges: 0,
            scanned: 0,
        });
    }
    let search = Search {
        masks,
        small,
        deadline: params.time_limit.map(|t| Instant::now() + t),
        abort: AtomicBool::new(false),
    };
    let chunks = scanned.min(1024);
    let per = scanned.div_ceil(chunks);
    let parts = par::map_range(params.exec, 0..chunks as usize, 2, |c| {
        let start = 1 + c as u64 * per;
        let end = (start + per).min(total);
        search.scan(start..end)
    });
    if search.abort.load(AtomicOrdering::Relaxed) {
        return Err(Error::TimeLimit {
            scanned: parts.iter().filter(|p| p.is_some()).count() as u64 * per,
        });
    }
    let best = parts
        .into_iter()
        .fold(None, merge)
        .expect("at least one subset is scanned");
    Ok(Found {
        small: VertexSet::from_mask(best.small_mask),
        big: top_k(masks, best.small_mask, best.big_len as usize),
        edges: best.edges,
        scanned,
    })
}

/// `M(G) = max e(X,Y)/√(|X||Y|)` over nonempty `X, Y ⊆ V`.
///
/// The returned witnesses are the optimum with lexicographically smallest
/// `(|Y|, Y as bitmask, |X|)`. A graph without vertices gives 0 with empty
/// witnesses.
pub fn m_exact(g: &Graph, params: &ExactParams) -> Result<ExactMResult> {
    params.check(g.vertex_count())?;
    let masks = g.neighbor_masks();
    let found = search(&masks, g.vertex_count(), params)?;
    Ok(ExactMResult {
        value: if found.small.is_empty() {
            0.0
        } else {
            density(found.edges, found.big.len(), found.small.len())
        },
        edges: found.edges,
        x_witness: found.big,
        y_witness: found.small,
        subsets_scanned: found.scanned,
    })
}

/// Maximum of `e(X,Y)/√(|X||Y|)` over nonempty `X ⊆ U`, `Y ⊆ W`.
///
/// The smaller part is enumerated (the right part when sizes tie) and the
/// other is prefix-optimized; the tie-break key is
/// `(|enumerated|, enumerated bitmask, |other|)`.
pub fn m_exact_bipartite(bg: &BipartiteGraph, params: &ExactParams) -> Result<ExactMResult> {
    let (m, n) = (bg.left_count(), bg.right_count());
    params.check(m.min(n))?;
    let enumerate_right = n <= m;
    let masks: Vec<u64> = if enumerate_right {
        (0..m)
            .map(|u| bg.row(u).iter().fold(0, |acc, &w| acc | 1u64 << w))
            .collect()
    } else {
        (0..n)
            .map(|w| bg.col(w).iter().fold(0, |acc, &u| acc | 1u64 << u))
            .collect()
    };
    let found = search(&masks, m.min(n), params)?;
    let value = if found.small.is_empty() {
        0.0
    } else {
        density(found.edges, found.big.len(), found.small.len())
    };
    let (x, y) = if enumerate_right {
        (found.big, found.small)
    } else {
        (found.small, found.big)
    };
    Ok(ExactMResult {
        value,
        edges: found.edges,
        x_witness: x,
        y_witness: y,
        subsets_scanned: found.scanned,
    })
}

/// `K = max over nonempty Y ⊆ W of ρ((d_Y(u))_{u ∈ U})`, by enumeration of
/// the right part.
pub fn max_localized_rho(bg: &BipartiteGraph, params: &ExactParams) -> Result<f64> {
    let n = bg.right_count();
    params.check(n)?;
    let masks: Vec<u64> = (0..bg.left_count())
        .map(|u| bg.row(u).iter().fold(0, |acc, &w| acc | 1u64 << w))
        .collect();
    let total = 1u64 << n;
    let chunks = (total - 1).clamp(1, 1024);
    let per = (total - 1).div_ceil(chunks);
    let parts = par::map_range(params.exec, 0..chunks as usize, 2, |c| {
        let start = 1 + c as u64 * per;
        let end = (start + per).min(total);
        let mut best = 1.0f64;
        let mut d = vec![0.0; masks.len()];
        for y in start..end {
            for (dv, &m) in d.iter_mut().zip(&masks) {
                *dv = (m & y).count_ones() as f64;
            }
            best = best.max(rho(&d).value);
        }
        best
    });
    Ok(parts.into_iter().fold(1.0, f64::max))
}

/// The chain `avg degree ≤ M(G) ≤ Δ(G)` together with `M(G) ≤ λmax(G)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundsReport {
    pub avg_degree: f64,
    pub m_exact: f64,
    pub max_degree: usize,
    pub lambda: f64,
    pub lower_ok: bool,
    pub upper_ok: bool,
    pub lambda_ok: bool,
    pub ok: bool,
}

pub fn bounds_check(g: &Graph, params: &ExactParams, spectral: &SpectralParams) -> Result<BoundsReport> {
    let m = m_exact(g, params)?;
    let stats = degree_stats(g);
    let lambda = lambda_max(g, spectral)?.lambda_max;
    const SLACK: f64 = 1e-9;
    let lower_ok = stats.avg <= m.value + SLACK;
    let upper_ok = m.value <= stats.max as f64 + SLACK;
    let lambda_ok = m.value <= lambda + SLACK;
    Ok(BoundsReport {
        avg_degree: stats.avg,
        m_exact: m.value,
        max_degree: stats.max,
        lambda,
        lower_ok,
        upper_ok,
        lambda_ok,
        ok: lower_ok && upper_ok && lambda_ok,
    })
}
