//! Certificates `(X, Y)` whose bi-average degree is within a logarithmic
//! factor of `λmax`.
//!
//! Pipeline on a bipartite graph with biadjacency `B` (`m` rows, `n` columns):
//! take the non-negative top singular vector `x`, round `Bᵗx` to the best
//! prefix `η` (giving `Y`), then round `w = Bη` (the integer vector
//! `w_u = d_Y(u)`) to `ξ` (giving `X`). The second rounding decides the
//! guarantee:
//!
//! | variant | second rounding | factor |
//! |---|---|---|
//! | `t1` | prefix | `4/√((ln m + 4)(ln n + 4))` |
//! | `t2` | level sets, cap `Δ_U` | `2/√((ln Δ_U + 1)(ln n + 4))` |
//! | `t3` | ρ-construction | `1/√(2(ln ρ(w) + 1)(ln n + 4))` |
//!
//! The pipeline also runs on `Bᵗ` and the denser certificate is returned.
//! General graphs go through their bipartite double cover, whose parts are
//! both copies of `V`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::cmp_density;
use crate::graph::{density, double_cover, rho, BipartiteGraph, Graph, VertexSet};
use crate::par;
use crate::rounding::{round_prefix, round_smooth, round_threshold};
use crate::spectral::{lambda_max, lambda_max_bipartite, SpectralParams};

/// Absolute slack for the density inequalities.
pub const DENSITY_SLACK: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Variant {
    T1,
    T2,
    T3,
}

impl Variant {
    pub const ALL: [Variant; 3] = [Variant::T1, Variant::T2, Variant::T3];
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Variant::T1 => "t1",
            Variant::T2 => "t2",
            Variant::T3 => "t3",
        })
    }
}

impl FromStr for Variant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "t1" => Ok(Variant::T1),
            "t2" => Ok(Variant::T2),
            "t3" => Ok(Variant::T3),
            other => Err(Error::Domain(format!("unknown variant `{other}`"))),
        }
    }
}

/// Which matrix the pipeline ran on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Orientation {
    /// `B`: `Y` from the first rounding, `X` from the second.
    Direct,
    /// `Bᵗ`: `X` from the first rounding, `Y` from the second.
    Transposed,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    pub variant: Variant,
    /// Left part (`U`, or `V` for a graph).
    pub x: VertexSet,
    /// Right part (`W`, or `V` for a graph).
    pub y: VertexSet,
    pub edges: u64,
    pub orientation: Orientation,
    pub lambda: f64,
    /// `edges/√(|x||y|)`.
    pub density: f64,
    pub guarantee_factor: f64,
    /// `ρ(w)` of the second-stage vector; `t3` only.
    pub rho: Option<f64>,
    /// `1/(½ ln min(|U|,|W|) + 2)`, reported for reference.
    pub min_side_factor: f64,
    pub converged: bool,
}

impl Certificate {
    /// `guarantee_factor · lambda`, the lower end of the sandwich.
    pub fn guaranteed_density(&self) -> f64 {
        self.guarantee_factor * self.lambda
    }
}

/// Guarantee factor for one orientation: `rows`, `cols` are the part sizes
/// of the matrix the pipeline ran on, `row_max_degree` its largest row
/// degree and `rho` the ρ of the second-stage vector.
pub fn guarantee_factor(variant: Variant, rows: usize, cols: usize, row_max_degree: usize, rho: f64) -> f64 {
    let col_term = (cols as f64).ln() + 4.0;
    match variant {
        Variant::T1 => 4.0 / (((rows as f64).ln() + 4.0) * col_term).sqrt(),
        Variant::T2 => 2.0 / (((row_max_degree as f64).ln() + 1.0) * col_term).sqrt(),
        Variant::T3 => 1.0 / (2.0 * (rho.ln() + 1.0) * col_term).sqrt(),
    }
}

struct Run {
    /// Set in the row part of the matrix the pipeline ran on.
    rows: Vec<usize>,
    /// Set in the column part.
    cols: Vec<usize>,
    edges: u64,
    /// `ρ` of the second-stage vector.
    rho: f64,
}

fn run_pipeline(b: &BipartiteGraph, x: &[f64], variant: Variant) -> Result<Run> {
    let mut z = vec![0.0; b.right_count()];
    b.mul_bt(x, &mut z, par::Exec::Sequential);
    let cols = round_prefix(&z)?.support;
    let mut in_cols = vec![false; b.right_count()];
    for &w in &cols {
        in_cols[w] = true;
    }
    let w: Vec<u64> = (0..b.left_count())
        .map(|u| b.row(u).iter().filter(|&&c| in_cols[c as usize]).count() as u64)
        .collect();
    if w.iter().all(|&v| v == 0) {
        return Err(Error::Domain("second-stage vector vanished".into()));
    }
    let wf: Vec<f64> = w.iter().map(|&v| v as f64).collect();
    let row_max = b.left_degrees().into_iter().max().unwrap_or(0);
    let rows = match variant {
        Variant::T1 => round_prefix(&wf)?,
        Variant::T2 => round_threshold(&wf, row_max as u64)?,
        Variant::T3 => round_smooth(&wf)?,
    }
    .support;
    let edges = rows.iter().map(|&u| w[u]).sum();
    Ok(Run {
        rows,
        cols,
        edges,
        rho: rho(&wf).value,
    })
}

struct Candidate {
    x: VertexSet,
    y: VertexSet,
    edges: u64,
    orientation: Orientation,
    rho: f64,
}

impl Candidate {
    fn size(&self) -> u64 {
        (self.x.len() * self.y.len()) as u64
    }

    /// Denser wins; equal densities go to the smaller support.
    fn beats(&self, other: &Candidate) -> bool {
        match cmp_density(self.edges, self.size(), other.edges, other.size()) {
            std::cmp::Ordering::Greater => true,
            std::cmp::Ordering::Equal => self.size() < other.size(),
            std::cmp::Ordering::Less => false,
        }
    }
}

/// Both orientations on `b`, with set indices mapped through `lmap`/`rmap`.
fn both_orientations(
    b: &BipartiteGraph,
    left: &[f64],
    right: &[f64],
    variant: Variant,
    lmap: &dyn Fn(usize) -> usize,
    rmap: &dyn Fn(usize) -> usize,
    exec: par::Exec,
) -> Result<[Candidate; 2]> {
    let t = b.transposed();
    let (direct, flipped) = par::join(exec, || run_pipeline(b, left, variant), || run_pipeline(&t, right, variant));
    let (direct, flipped) = (direct?, flipped?);
    Ok([
        Candidate {
            x: VertexSet::new(direct.rows.iter().map(|&u| lmap(u))),
            y: VertexSet::new(direct.cols.iter().map(|&w| rmap(w))),
            edges: direct.edges,
            orientation: Orientation::Direct,
            rho: direct.rho,
        },
        Candidate {
            x: VertexSet::new(flipped.cols.iter().map(|&u| lmap(u))),
            y: VertexSet::new(flipped.rows.iter().map(|&w| rmap(w))),
            edges: flipped.edges,
            orientation: Orientation::Transposed,
            rho: flipped.rho,
        },
    ])
}

/// Connected components with at least one edge, as (left, right) vertex
/// lists, ordered by smallest left vertex.
fn components(bg: &BipartiteGraph) -> Vec<(Vec<usize>, Vec<usize>)> {
    let mut seen_left = vec![false; bg.left_count()];
    let mut seen_right = vec![false; bg.right_count()];
    let mut out = Vec::new();
    for s in 0..bg.left_count() {
        if seen_left[s] || bg.row(s).is_empty() {
            continue;
        }
        seen_left[s] = true;
        let (mut left, mut right) = (vec![s], Vec::new());
        let mut stack = vec![s];
        while let Some(u) = stack.pop() {
            for &w in bg.row(u) {
                let w = w as usize;
                if seen_right[w] {
                    continue;
                }
                seen_right[w] = true;
                right.push(w);
                for &v in bg.col(w) {
                    if !seen_left[v as usize] {
                        seen_left[v as usize] = true;
                        left.push(v as usize);
                        stack.push(v as usize);
                    }
                }
            }
        }
        left.sort_unstable();
        right.sort_unstable();
        out.push((left, right));
    }
    out
}

fn restrict(bg: &BipartiteGraph, left: &[usize], right: &[usize]) -> BipartiteGraph {
    let mut pos = vec![usize::MAX; bg.right_count()];
    for (i, &w) in right.iter().enumerate() {
        pos[w] = i;
    }
    let rows = left.iter().map(|&u| bg.row(u).iter().map(|&w| pos[w as usize]).collect()).collect();
    BipartiteGraph::from_rows(right.len(), rows).expect("component of a valid graph")
}

/// Certificate for a bipartite graph; `x ⊆ U` (left), `y ⊆ W` (right).
///
/// When the graph is disconnected the top singular space may be degenerate
/// and the iterate can mix several components. The pipeline then also runs
/// on each component's restriction of the singular vectors (itself a top
/// singular vector wherever it carries mass) and the best candidate wins.
pub fn certify_bipartite(bg: &BipartiteGraph, variant: Variant, params: &SpectralParams) -> Result<Certificate> {
    if bg.edge_count() == 0 {
        return Err(Error::Edgeless);
    }
    let spec = lambda_max_bipartite(bg, params)?;
    let id = |i: usize| i;
    let mut candidates: Vec<Candidate> =
        both_orientations(bg, &spec.left, &spec.right, variant, &id, &id, params.exec)?.into();

    let comps = components(bg);
    if comps.len() > 1 {
        let per_comp = par::map_range(params.exec, 0..comps.len(), 1, |c| {
            let (left, right) = &comps[c];
            let xl: Vec<f64> = left.iter().map(|&u| spec.left[u]).collect();
            let xr: Vec<f64> = right.iter().map(|&w| spec.right[w]).collect();
            // components the iterate never reached cannot carry the guarantee
            if xl.iter().all(|&v| v == 0.0) || xr.iter().all(|&v| v == 0.0) {
                return None;
            }
            let sub = restrict(bg, left, right);
            both_orientations(&sub, &xl, &xr, variant, &|i| left[i], &|i| right[i], par::Exec::Sequential).ok()
        });
        candidates.extend(per_comp.into_iter().flatten().flatten());
    }

    let mut best = 0;
    for (i, c) in candidates.iter().enumerate().skip(1) {
        if c.beats(&candidates[best]) {
            best = i;
        }
    }
    let run = candidates.swap_remove(best);
    let factor = match run.orientation {
        Orientation::Direct => {
            let dmax = bg.left_degrees().into_iter().max().unwrap_or(0);
            guarantee_factor(variant, bg.left_count(), bg.right_count(), dmax, run.rho)
        }
        Orientation::Transposed => {
            let dmax = bg.right_degrees().into_iter().max().unwrap_or(0);
            guarantee_factor(variant, bg.right_count(), bg.left_count(), dmax, run.rho)
        }
    };
    let (x, y) = (run.x, run.y);
    let min_side = bg.left_count().min(bg.right_count()) as f64;
    Ok(Certificate {
        variant,
        density: density(run.edges, x.len(), y.len()),
        x,
        y,
        edges: run.edges,
        orientation: run.orientation,
        lambda: spec.result.lambda_max,
        guarantee_factor: factor,
        rho: (variant == Variant::T3).then_some(run.rho),
        min_side_factor: 1.0 / (0.5 * min_side.ln() + 2.0),
        converged: spec.result.converged,
    })
}

/// Certificate for a graph via its double cover; `x`, `y ⊆ V`.
///
/// With both parts of size `|V|` the `t1` factor is `1/(¼ ln|V| + 1)`.
pub fn certify(g: &Graph, variant: Variant, params: &SpectralParams) -> Result<Certificate> {
    certify_bipartite(&double_cover(g), variant, params)
}

/// Independent re-check of a graph certificate: recounts `e(X,Y)`,
/// recomputes the density, the guarantee factor and `λmax` (by power
/// iteration on `g` itself), and tests both density inequalities.
pub fn verify_certificate(g: &Graph, cert: &Certificate) -> Result<bool> {
    let n = g.vertex_count();
    cert.x.check_range(n)?;
    cert.y.check_range(n)?;
    verify_with(&double_cover(g), &g.clone(), cert)
}

/// [`verify_certificate`] for a bipartite graph.
pub fn verify_bipartite_certificate(bg: &BipartiteGraph, cert: &Certificate) -> Result<bool> {
    cert.x.check_range(bg.left_count())?;
    cert.y.check_range(bg.right_count())?;
    verify_with(bg, &bg.to_graph(), cert)
}

fn verify_with(bg: &BipartiteGraph, plain: &Graph, cert: &Certificate) -> Result<bool> {
    if cert.x.is_empty() || cert.y.is_empty() {
        return Ok(false);
    }
    let edges = bg.e_between(&cert.x, &cert.y)?;
    if edges != cert.edges {
        return Ok(false);
    }
    let d = density(edges, cert.x.len(), cert.y.len());
    if (d - cert.density).abs() > 1e-12 * d.max(1.0) {
        return Ok(false);
    }

    let lambda = lambda_max(plain, &SpectralParams::default())?.lambda_max;
    if (lambda - cert.lambda).abs() > 1e-8 * lambda.max(1.0) {
        return Ok(false);
    }

    // Rebuild the second-stage vector from the first-stage set.
    let (b, first) = match cert.orientation {
        Orientation::Direct => (bg.clone(), &cert.y),
        Orientation::Transposed => (bg.transposed(), &cert.x),
    };
    let w: Vec<f64> = (0..b.left_count())
        .map(|u| b.row(u).iter().filter(|&&c| first.contains(c as usize)).count() as f64)
        .collect();
    let rho_w = rho(&w).value;
    let row_max = b.left_degrees().into_iter().max().unwrap_or(0);
    let factor = guarantee_factor(cert.variant, b.left_count(), b.right_count(), row_max, rho_w);
    if (factor - cert.guarantee_factor).abs() > 1e-12 || !(factor > 0.0 && factor <= 1.0 + 1e-12) {
        return Ok(false);
    }
    if cert.variant == Variant::T3 && cert.rho.is_none_or(|r| (r - rho_w).abs() > 1e-12 * rho_w) {
        return Ok(false);
    }

    Ok(cert.density <= cert.lambda + DENSITY_SLACK
        && cert.density >= cert.guarantee_factor * cert.lambda - DENSITY_SLACK)
}
