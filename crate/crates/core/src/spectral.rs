//! Largest adjacency eigenvalue and non-negative Perron vector.
//!
//! Bipartite graphs (double covers included) have a symmetric spectrum, so
//! plain power iteration on `A` can oscillate between `±λ`. The iteration
//! here runs on `A²` (on `BBᵗ` for a biadjacency matrix), which has `λ²` as
//! its top eigenvalue, and recovers the `+λ` eigenvector from the limit `z`
//! as `z + Az/λ`.
//!
//! All reductions are sequential; only the row products may run in
//! parallel, and each row is summed in a fixed order, so results are
//! bit-for-bit reproducible.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{degree_stats, BipartiteGraph, DegreeSequence, Graph};
use crate::par::Exec;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SpectralParams {
    /// Convergence threshold on the eigen-residual, relative to `max(1, λ)`.
    pub tol: f64,
    /// Iteration cap; `None` means `100·n + 1000`.
    pub max_iter: Option<usize>,
    pub exec: Exec,
}

impl Default for SpectralParams {
    fn default() -> Self {
        SpectralParams {
            tol: 1e-10,
            max_iter: None,
            exec: Exec::default(),
        }
    }
}

impl SpectralParams {
    fn validate(&self) -> Result<()> {
        if self.tol.is_nan() || self.tol <= 0.0 {
            return Err(Error::Domain(format!("tolerance must be positive, got {}", self.tol)));
        }
        Ok(())
    }

    fn iteration_cap(&self, n: usize) -> usize {
        self.max_iter.unwrap_or(100 * n + 1000)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpectralResult {
    pub lambda_max: f64,
    /// Unit-norm, entrywise non-negative eigenvector for `lambda_max`.
    pub perron: Vec<f64>,
    pub iterations: usize,
    /// `‖A·perron − lambda_max·perron‖`.
    pub residual: f64,
    /// Whether `residual ≤ tol·max(1, lambda_max)` was reached.
    pub converged: bool,
}

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

fn scale(v: &mut [f64], c: f64) {
    v.iter_mut().for_each(|x| *x *= c);
}

/// `‖w − μz‖`.
fn defect(w: &[f64], z: &[f64], mu: f64) -> f64 {
    w.iter()
        .zip(z)
        .map(|(a, b)| (a - mu * b) * (a - mu * b))
        .sum::<f64>()
        .sqrt()
}

/// Largest eigenvalue of the adjacency matrix with its Perron vector.
///
/// Starts from the all-ones vector, which has positive mass on every
/// component. Non-convergence is reported through `converged`, with the
/// last iterate returned.
pub fn lambda_max(g: &Graph, params: &SpectralParams) -> Result<SpectralResult> {
    params.validate()?;
    let n = g.vertex_count();
    if g.edge_count() == 0 {
        return Ok(SpectralResult {
            lambda_max: 0.0,
            perron: vec![1.0 / (n as f64).sqrt(); n],
            iterations: 0,
            residual: 0.0,
            converged: true,
        });
    }
    let cap = params.iteration_cap(n);
    let mut z = vec![1.0 / (n as f64).sqrt(); n];
    let mut y = vec![0.0; n];
    let mut w = vec![0.0; n];
    let mut prev_mu = 0.0;
    let mut last = None;
    for iter in 1..=cap.max(1) {
        g.matvec(&z, &mut y, params.exec);
        g.matvec(&y, &mut w, params.exec);
        let mu = y.iter().map(|a| a * a).sum::<f64>();
        let lambda = mu.sqrt();
        debug_assert!(mu >= prev_mu * (1.0 - 1e-12), "Rayleigh quotient decreased");
        prev_mu = mu;

        // p ∝ z + y/λ is the +λ component of z
        let mut p: Vec<f64> = z.iter().zip(&y).map(|(a, b)| a + b / lambda).collect();
        let p_norm = norm(&p);
        let residual = defect(&w, &z, mu) / (lambda * p_norm);
        let converged = residual <= params.tol * lambda.max(1.0);
        if converged || iter >= cap {
            scale(&mut p, 1.0 / p_norm);
            last = Some(SpectralResult {
                lambda_max: lambda,
                perron: p,
                iterations: iter,
                residual,
                converged,
            });
            break;
        }
        let w_norm = norm(&w);
        z.iter_mut().zip(&w).for_each(|(a, b)| *a = b / w_norm);
    }
    Ok(last.expect("at least one iteration runs"))
}

/// Top singular triple of a biadjacency matrix `B`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BipartiteSpectrum {
    /// `perron` is `(left, right)/√2`, the Perron vector of the full
    /// bipartite adjacency matrix.
    pub result: SpectralResult,
    /// Unit non-negative `x` over the left part with `‖Bᵗx‖ = ‖B‖`.
    pub left: Vec<f64>,
    /// `Bᵗx/‖B‖`.
    pub right: Vec<f64>,
}

/// `λmax = ‖B‖` for a bipartite graph, by power iteration on `BBᵗ`.
pub fn lambda_max_bipartite(bg: &BipartiteGraph, params: &SpectralParams) -> Result<BipartiteSpectrum> {
    params.validate()?;
    let (m, n) = (bg.left_count(), bg.right_count());
    if bg.edge_count() == 0 {
        let left = vec![1.0 / (m as f64).sqrt(); m];
        let right = vec![1.0 / (n as f64).sqrt(); n];
        let perron = left.iter().chain(&right).map(|v| v / 2f64.sqrt()).collect();
        return Ok(BipartiteSpectrum {
            result: SpectralResult {
                lambda_max: 0.0,
                perron,
                iterations: 0,
                residual: 0.0,
                converged: true,
            },
            left,
            right,
        });
    }
    let cap = params.iteration_cap(m + n);
    let mut z = vec![1.0 / (m as f64).sqrt(); m];
    let mut y = vec![0.0; n];
    let mut w = vec![0.0; m];
    let mut prev_mu = 0.0;
    for iter in 1..=cap.max(1) {
        bg.mul_bt(&z, &mut y, params.exec);
        bg.mul_b(&y, &mut w, params.exec);
        let mu = y.iter().map(|a| a * a).sum::<f64>();
        let lambda = mu.sqrt();
        debug_assert!(mu >= prev_mu * (1.0 - 1e-12), "Rayleigh quotient decreased");
        prev_mu = mu;
        let residual = defect(&w, &z, mu) / (lambda * 2f64.sqrt());
        let converged = residual <= params.tol * lambda.max(1.0);
        if converged || iter >= cap {
            let right: Vec<f64> = y.iter().map(|v| v / lambda).collect();
            let perron = z.iter().chain(&right).map(|v| v / 2f64.sqrt()).collect();
            return Ok(BipartiteSpectrum {
                result: SpectralResult {
                    lambda_max: lambda,
                    perron,
                    iterations: iter,
                    residual,
                    converged,
                },
                left: z,
                right,
            });
        }
        let w_norm = norm(&w);
        z.iter_mut().zip(&w).for_each(|(a, b)| *a = b / w_norm);
    }
    unreachable!("loop returns on its last iteration")
}

/// The chain `rms(d) ≤ λmax ≤ Δ`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EigenBoundChain {
    pub rms: f64,
    pub lambda: f64,
    pub delta: f64,
    pub converged: bool,
    pub ok: bool,
}

pub fn eigen_bound_chain(g: &Graph, params: &SpectralParams) -> Result<EigenBoundChain> {
    let stats = degree_stats(g);
    let spec = lambda_max(g, params)?;
    let delta = stats.max as f64;
    let slack = params.tol * delta.max(1.0);
    let lambda = spec.lambda_max;
    Ok(EigenBoundChain {
        rms: stats.rms,
        lambda,
        delta,
        converged: spec.converged,
        ok: stats.rms <= lambda + slack && lambda <= delta + slack,
    })
}

/// Degree-based eigenvalue and bi-average-degree bounds for a bipartite
/// graph with parts `U` (left) and `W` (right). Norms are normalized.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BipartiteBoundChain {
    /// `max{√(|U|/|W|)·rms(d_U), √(|W|/|U|)·rms(d_W)}`.
    pub lower_sided: f64,
    /// `√(rms(d_U)·rms(d_W))`.
    pub lower_geometric: f64,
    pub lambda: f64,
    /// `√(Δ_U·Δ_W)`, the upper bound for both λmax and M.
    pub upper: f64,
    /// `√(mean(d_U)·mean(d_W))`, the lower bound for M.
    pub m_lower: f64,
    pub lower_sided_ok: bool,
    pub lower_geometric_ok: bool,
    pub upper_ok: bool,
    pub m_bounds_ok: bool,
    pub converged: bool,
}

impl BipartiteBoundChain {
    pub fn ok(&self) -> bool {
        self.lower_sided_ok && self.lower_geometric_ok && self.upper_ok && self.m_bounds_ok
    }
}

pub fn bipartite_bound_chain(bg: &BipartiteGraph, params: &SpectralParams) -> Result<BipartiteBoundChain> {
    let (m, n) = (bg.left_count() as f64, bg.right_count() as f64);
    let du = DegreeSequence::from_counts(&bg.left_degrees());
    let dw = DegreeSequence::from_counts(&bg.right_degrees());
    let spec = lambda_max_bipartite(bg, params)?;
    let lambda = spec.result.lambda_max;
    let lower_sided = ((m / n).sqrt() * du.rms()).max((n / m).sqrt() * dw.rms());
    let lower_geometric = (du.rms() * dw.rms()).sqrt();
    let upper = (du.max() * dw.max()).sqrt();
    let m_lower = (du.mean() * dw.mean()).sqrt();
    let slack = params.tol * upper.max(1.0);
    Ok(BipartiteBoundChain {
        lower_sided,
        lower_geometric,
        lambda,
        upper,
        m_lower,
        lower_sided_ok: lower_sided <= lambda + slack,
        lower_geometric_ok: lower_geometric <= lower_sided + slack,
        upper_ok: lambda <= upper + slack,
        m_bounds_ok: m_lower <= upper + slack,
        converged: spec.result.converged,
    })
}
