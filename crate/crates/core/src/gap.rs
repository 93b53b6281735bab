//! The tensor-power family separating `M(G)` from `λmax(G)`.
//!
//! The base graph `A_s` on `2s` vertices is a clique on `0..s` plus the
//! matching `i ~ s + i`. Its `t`-th Kronecker power has `(2s)^t` vertices,
//! spectral radius `λ^t` with `λ = (s − 1 + √((s − 1)² + 4))/2`, and every
//! other eigenvalue bounded by `λ^{t−1}·φ` in absolute value. Because the
//! Perron vector is badly approximated by 0/1 vectors, `M` stays well below
//! `λ^t`.
//!
//! Quantities that overflow `f64` (binomials, `λ^t`, `e^{tH}`) are handled
//! in the log domain; [`binomial_big`] and [`ln_big`] give exact cross-checks.

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use crate::certify::{certify, Variant};
use crate::error::{Error, Result};
use crate::exact::{m_exact, ExactParams};
use crate::graph::Graph;
use crate::par::{self, Exec};
use crate::spectral::{lambda_max, SpectralParams};

/// Golden ratio, the largest non-principal eigenvalue magnitude of `A_s`.
pub const PHI: f64 = 1.618_033_988_749_895;
/// Default ceiling on ordered adjacency pairs for [`tensor_power`].
pub const DEFAULT_BUDGET: u64 = 200_000_000;

const LN_2: f64 = std::f64::consts::LN_2;

/// Neumaier-compensated `ln Σ exp(xᵢ)`, rescaling as the running maximum
/// grows so that no term underflows relative to the largest.
#[derive(Clone, Copy, Debug)]
struct LogSum {
    max: f64,
    sum: f64,
    comp: f64,
}

impl LogSum {
    fn new() -> Self {
        LogSum {
            max: f64::NEG_INFINITY,
            sum: 0.0,
            comp: 0.0,
        }
    }

    fn add(&mut self, x: f64) {
        if x > self.max {
            let scale = (self.max - x).exp();
            self.sum *= scale;
            self.comp *= scale;
            self.max = x;
        }
        let term = (x - self.max).exp();
        let t = self.sum + term;
        if self.sum.abs() >= term.abs() {
            self.comp += (self.sum - t) + term;
        } else {
            self.comp += (term - t) + self.sum;
        }
        self.sum = t;
    }

    fn ln(&self) -> f64 {
        self.max + (self.sum + self.comp).ln()
    }
}

/// Natural entropy `−x ln x − (1−x) ln(1−x)`, with `H(0) = H(1) = 0`.
pub fn entropy(x: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&x) {
        return Err(Error::Domain(format!("entropy needs x in [0, 1], got {x}")));
    }
    let term = |p: f64| if p == 0.0 { 0.0 } else { -p * p.ln() };
    Ok(term(x) + term(1.0 - x))
}

/// `ln C(t, q)` as a compensated sum of `ln((t − q + i)/i)`.
pub fn ln_binomial(t: u64, q: u64) -> f64 {
    if q > t {
        return f64::NEG_INFINITY;
    }
    let q = q.min(t - q);
    let (mut sum, mut comp) = (0.0f64, 0.0f64);
    for i in 1..=q {
        let term = ((t - q + i) as f64 / i as f64).ln();
        let s = sum + term;
        comp += if sum.abs() >= term.abs() { (sum - s) + term } else { (term - s) + sum };
        sum = s;
    }
    sum + comp
}

/// Exact `C(t, q)`.
pub fn binomial_big(t: u64, q: u64) -> BigUint {
    if q > t {
        return BigUint::from(0u8);
    }
    let q = q.min(t - q);
    let mut acc = BigUint::from(1u8);
    for i in 1..=q {
        acc *= t - q + i;
        acc /= i;
    }
    acc
}

/// Natural log of a big integer, accurate to a few ulps.
pub fn ln_big(x: &BigUint) -> f64 {
    let bits = x.bits();
    if bits == 0 {
        return f64::NEG_INFINITY;
    }
    let shift = bits.saturating_sub(64);
    let top = (x >> shift).to_u64_digits().first().copied().unwrap_or(0);
    (top as f64).ln() + shift as f64 * LN_2
}

/// The Stirling-type estimate `(1/3)e^{tH(q/t)}/√q < C(t,q) < (2/3)e^{tH(q/t)}/√q`,
/// every side as a natural log.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BinomialEstimate {
    pub t: u64,
    pub q: u64,
    pub ln_lower: f64,
    pub ln_binom: f64,
    pub ln_upper: f64,
    pub ok: bool,
}

pub fn check_binest(t: u64, q: u64) -> Result<BinomialEstimate> {
    if q < 1 || 2 * q > t {
        return Err(Error::Domain(format!("binomial estimate needs 1 <= q <= t/2, got t = {t}, q = {q}")));
    }
    let core = t as f64 * entropy(q as f64 / t as f64)? - 0.5 * (q as f64).ln();
    let ln_lower = core - 3f64.ln();
    let ln_upper = core + (2.0f64 / 3.0).ln();
    let ln_binom = ln_binomial(t, q);
    Ok(BinomialEstimate {
        t,
        q,
        ln_lower,
        ln_binom,
        ln_upper,
        ok: ln_lower < ln_binom && ln_binom < ln_upper,
    })
}

/// `Σ_{j≤q} C(t,j) λ^{t−j} ≤ λ^{t−q} e^{tH(q/t)}` for `q ≤ t/(λ+1)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LargeDeviation {
    pub lambda: f64,
    pub q: u64,
    pub t: u64,
    pub ln_lhs: f64,
    pub ln_rhs: f64,
    /// `rhs/lhs`.
    pub ratio: f64,
    pub ok: bool,
    /// `ratio ≤ 2`; observed, not guaranteed.
    pub soft_ok: bool,
}

pub fn large_deviation(lambda: f64, q: u64, t: u64) -> Result<LargeDeviation> {
    if !(lambda.is_finite() && lambda > 0.0) {
        return Err(Error::Domain(format!("lambda must be positive, got {lambda}")));
    }
    if q < 1 || t < 1 || q as f64 * (lambda + 1.0) > t as f64 {
        return Err(Error::Domain(format!(
            "large deviation needs 1 <= q <= t/(lambda+1), got q = {q}, t = {t}, lambda = {lambda}"
        )));
    }
    let ln_lambda = lambda.ln();
    let mut lhs = LogSum::new();
    let mut ln_c = 0.0;
    for j in 0..=q {
        if j > 0 {
            ln_c += ((t - j + 1) as f64 / j as f64).ln();
        }
        lhs.add(ln_c + (t - j) as f64 * ln_lambda);
    }
    let ln_lhs = lhs.ln();
    let ln_rhs = (t - q) as f64 * ln_lambda + t as f64 * entropy(q as f64 / t as f64)?;
    let ratio = (ln_rhs - ln_lhs).exp();
    Ok(LargeDeviation {
        lambda,
        q,
        t,
        ln_lhs,
        ln_rhs,
        ratio,
        ok: ln_lhs <= ln_rhs,
        soft_ok: ratio <= 2.0,
    })
}

/// `A_s`: clique on `0..s` plus the matching `i ~ s + i`.
pub fn base_matrix(s: usize) -> Result<Graph> {
    if s == 0 {
        return Err(Error::Domain("s must be at least 1".into()));
    }
    let clique = (0..s).flat_map(|i| (i + 1..s).map(move |j| (i, j)));
    Graph::from_edges(2 * s, clique.chain((0..s).map(|i| (i, s + i))))
}

/// Largest root of `x² − (s−1)x − 1`.
pub fn base_lambda(s: usize) -> f64 {
    let a = s as f64 - 1.0;
    (a + (a * a + 4.0).sqrt()) / 2.0
}

/// Perron vector of `A_s`, unnormalized: `λ` on the clique, 1 on the pendants.
pub fn base_perron(s: usize) -> Vec<f64> {
    let lambda = base_lambda(s);
    (0..2 * s).map(|i| if i < s { lambda } else { 1.0 }).collect()
}

/// Checks `(A² − (s−1)A − I)(A² + A − I) = 0` in exact integer arithmetic and
/// `A·e = λ·e` for `e` = [`base_perron`] to `1e-10`.
pub fn minimal_poly_check(s: usize) -> Result<bool> {
    let g = base_matrix(s)?;
    let n = 2 * s;
    let mut a = vec![vec![0i64; n]; n];
    for (u, v) in g.edges() {
        a[u][v] = 1;
        a[v][u] = 1;
    }
    let mul = |x: &[Vec<i64>], y: &[Vec<i64>]| -> Vec<Vec<i64>> {
        let mut out = vec![vec![0i64; n]; n];
        for i in 0..n {
            for k in 0..n {
                if x[i][k] != 0 {
                    for j in 0..n {
                        out[i][j] += x[i][k] * y[k][j];
                    }
                }
            }
        }
        out
    };
    let a2 = mul(&a, &a);
    let c = s as i64 - 1;
    let mut p = vec![vec![0i64; n]; n];
    let mut q = vec![vec![0i64; n]; n];
    for i in 0..n {
        for j in 0..n {
            let id = i64::from(i == j);
            p[i][j] = a2[i][j] - c * a[i][j] - id;
            q[i][j] = a2[i][j] + a[i][j] - id;
        }
    }
    let poly_zero = mul(&p, &q).iter().flatten().all(|&v| v == 0);

    let e = base_perron(s);
    let lambda = base_lambda(s);
    let mut ae = vec![0.0; n];
    g.matvec(&e, &mut ae, Exec::Sequential);
    let eig_ok = ae.iter().zip(&e).all(|(x, y)| (x - lambda * y).abs() <= 1e-10);
    Ok(poly_zero && eig_ok)
}

/// Parameters of the `t`-th tensor power of `A_s`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GapGraphSpec {
    pub s: usize,
    pub t: usize,
}

impl GapGraphSpec {
    pub fn new(s: usize, t: usize) -> Result<Self> {
        if s == 0 || t == 0 {
            return Err(Error::Domain(format!("s and t must be at least 1, got s = {s}, t = {t}")));
        }
        Ok(GapGraphSpec { s, t })
    }

    /// `(2s)^t`, if it fits in a `u64`.
    pub fn vertex_count(&self) -> Option<u64> {
        (2 * self.s as u64).checked_pow(self.t as u32).filter(|_| self.t <= u32::MAX as usize)
    }

    /// `ln (2s)^t`.
    pub fn ln_vertex_count(&self) -> f64 {
        self.t as f64 * (2.0 * self.s as f64).ln()
    }

    /// `(s² + s)^t` ordered adjacency pairs, saturating.
    pub fn ordered_pairs(&self) -> u128 {
        let base = (self.s as u128) * (self.s as u128 + 1);
        let mut acc: u128 = 1;
        for _ in 0..self.t {
            acc = acc.saturating_mul(base);
        }
        acc
    }
}

/// The Kronecker power as a sparse graph.
///
/// Vertex `v` has mixed-radix digits `(v₁, …, v_t)` in base `2s`, with `v₁`
/// the most significant; `u ~ v` iff `uᵢ ~ vᵢ` in `A_s` for every `i`.
/// Fails with [`Error::BudgetExceeded`] when `(s² + s)^t` ordered pairs
/// exceed `budget`.
pub fn tensor_power(spec: &GapGraphSpec, budget: u64, exec: Exec) -> Result<Graph> {
    let pairs = spec.ordered_pairs();
    if pairs > budget as u128 {
        return Err(Error::BudgetExceeded {
            required: pairs,
            budget,
        });
    }
    let n = match spec.vertex_count() {
        Some(n) if n <= u32::MAX as u64 => n as usize,
        _ => {
            return Err(Error::BudgetExceeded {
                required: pairs,
                budget,
            })
        }
    };
    let base = base_matrix(spec.s)?;
    let k = 2 * spec.s;
    let t = spec.t;
    let block = n / k;

    // One block per outermost digit; within a block, vertices in order.
    let blocks = par::map_range(exec, 0..k, 2, |d0| {
        let mut degrees = Vec::with_capacity(block);
        let mut targets = Vec::new();
        let mut digits = vec![0usize; t];
        let mut idx = vec![0usize; t];
        for local in 0..block {
            let v = d0 * block + local;
            let mut rest = v;
            for i in (0..t).rev() {
                digits[i] = rest % k;
                rest /= k;
            }
            let lists: Vec<&[u32]> = digits.iter().map(|&d| base.neighbors(d)).collect();
            let before = targets.len();
            if lists.iter().all(|l| !l.is_empty()) {
                idx.iter_mut().for_each(|x| *x = 0);
                'odometer: loop {
                    let w = lists.iter().zip(&idx).fold(0usize, |acc, (l, &j)| acc * k + l[j] as usize);
                    targets.push(w as u32);
                    for i in (0..t).rev() {
                        idx[i] += 1;
                        if idx[i] < lists[i].len() {
                            continue 'odometer;
                        }
                        idx[i] = 0;
                    }
                    break;
                }
            }
            degrees.push(targets.len() - before);
        }
        (degrees, targets)
    });

    let mut offsets = Vec::with_capacity(n + 1);
    offsets.push(0);
    let mut targets = Vec::with_capacity(pairs as usize);
    for (degrees, part) in blocks {
        for d in degrees {
            offsets.push(offsets.last().unwrap() + d);
        }
        targets.extend_from_slice(&part);
    }
    Ok(Graph::from_csr(offsets, targets))
}

/// The Perron vector of the tensor power, held implicitly: `C(t,j)·s^t`
/// coordinates equal `λ^j` for each `j ∈ [0, t]`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LevelVector {
    pub lambda: f64,
    pub s: usize,
    pub t: usize,
}

impl LevelVector {
    pub fn for_spec(spec: &GapGraphSpec) -> Self {
        LevelVector {
            lambda: base_lambda(spec.s),
            s: spec.s,
            t: spec.t,
        }
    }

    /// `ln ‖z‖² = t·ln(s(λ² + 1))`.
    pub fn ln_norm_sq(&self) -> f64 {
        self.t as f64 * (self.s as f64 * (self.lambda * self.lambda + 1.0)).ln()
    }

    /// The explicit vector in Kronecker order: coordinate `v` is `λ` raised
    /// to the number of digits of `v` below `s`. At most `limit` entries.
    pub fn materialize(&self, limit: usize) -> Result<Vec<f64>> {
        let k = 2 * self.s;
        let n = (k as u64)
            .checked_pow(self.t as u32)
            .filter(|&n| n <= limit as u64)
            .ok_or_else(|| Error::Domain(format!("level vector exceeds {limit} entries")))? as usize;
        Ok((0..n)
            .map(|v| {
                let mut rest = v;
                let mut j = 0;
                for _ in 0..self.t {
                    j += usize::from(rest % k < self.s);
                    rest /= k;
                }
                self.lambda.powi(j as i32)
            })
            .collect())
    }
}

/// Best normalized inner product of a level vector with a 0/1 vector.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LevelRatio {
    pub ratio: f64,
    /// The optimum takes the `q + 1` largest levels.
    pub q_witness: usize,
    /// `4λ/t^{1/4}`.
    pub bound: f64,
    pub bound_ok: bool,
    /// `λ ≥ 4`, under which `bound_ok` is a theorem.
    pub hypothesis_ok: bool,
}

/// Exact `max ⟨z,δ⟩/(‖z‖‖δ‖)` over nonzero 0/1 vectors `δ`.
///
/// The optimum is a prefix of the sorted vector. Inside one level the
/// prefix ratio is quasi-convex in the number of entries taken, so only
/// whole levels need checking. The ratio is invariant under `λ ↦ 1/λ`,
/// and `s^t` cancels.
pub fn level_max_ratio(lv: &LevelVector) -> Result<LevelRatio> {
    if !(lv.lambda.is_finite() && lv.lambda > 0.0) || lv.t == 0 {
        return Err(Error::Domain(format!(
            "level vector needs lambda > 0 and t >= 1, got lambda = {}, t = {}",
            lv.lambda, lv.t
        )));
    }
    let t = lv.t as u64;
    let bound = 4.0 * lv.lambda / (lv.t as f64).powf(0.25);
    let hypothesis_ok = lv.lambda >= 4.0;
    if lv.lambda == 1.0 {
        return Ok(LevelRatio {
            ratio: 1.0,
            q_witness: lv.t,
            bound,
            bound_ok: 1.0 <= bound,
            hypothesis_ok,
        });
    }
    let big = lv.lambda.max(1.0 / lv.lambda);
    let ln_big = big.ln();
    let ln_norm = 0.5 * t as f64 * (big * big + 1.0).ln();
    let mut sum = LogSum::new();
    let mut count = LogSum::new();
    let mut ln_c = 0.0;
    let mut best = (f64::NEG_INFINITY, 0usize);
    for j in 0..=t {
        if j > 0 {
            ln_c += ((t - j + 1) as f64 / j as f64).ln();
        }
        sum.add(ln_c + (t - j) as f64 * ln_big);
        count.add(ln_c);
        let ln_ratio = sum.ln() - ln_norm - 0.5 * count.ln();
        if ln_ratio > best.0 {
            best = (ln_ratio, j as usize);
        }
    }
    let ratio = best.0.exp().min(1.0);
    Ok(LevelRatio {
        ratio,
        q_witness: best.1,
        bound,
        bound_ok: ratio <= bound,
        hypothesis_ok,
    })
}

/// Explicit upper bound on `M` of the tensor power.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MUpperBound {
    pub lambda: f64,
    pub lambda_t: f64,
    pub ln_lambda_t: f64,
    pub level_ratio: f64,
    pub q_witness: usize,
    pub m_upper: f64,
    /// `m_upper / λ^t`.
    pub ratio_bound: f64,
    pub hypothesis_ok: bool,
}

/// For a 0/1 vector `δ` with `r = ⟨δ,ê⟩/‖δ‖` against the unit Perron vector
/// `ê`, splitting `δ` along `ê` gives
/// `‖Aδ‖² ≤ (λ^{2t} r² + μ²(1 − r²))‖δ‖²` with `μ = min(λ^t, λ^{t−1}φ)`
/// bounding every other eigenvalue. The right side grows with `r`, so
/// `r = level_max_ratio` yields `M ≤ max ‖Aδ‖/‖δ‖ ≤ m_upper`.
pub fn m_upper_bound(spec: &GapGraphSpec) -> Result<MUpperBound> {
    let lv = LevelVector::for_spec(spec);
    let level = level_max_ratio(&lv)?;
    let r = level.ratio;
    let c = (PHI / lv.lambda).min(1.0);
    let ratio_bound = (r * r + c * c * (1.0 - r * r)).sqrt().min(1.0);
    let ln_lambda_t = spec.t as f64 * lv.lambda.ln();
    let lambda_t = ln_lambda_t.exp();
    Ok(MUpperBound {
        lambda: lv.lambda,
        lambda_t,
        ln_lambda_t,
        level_ratio: r,
        q_witness: level.q_witness,
        m_upper: lambda_t * ratio_bound,
        ratio_bound,
        hypothesis_ok: level.hypothesis_ok,
    })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GapOptions {
    /// Build the graph and measure it; otherwise closed forms only.
    pub materialize: bool,
    pub budget: u64,
    pub exact: ExactParams,
    pub spectral: SpectralParams,
    pub variant: Variant,
}

impl Default for GapOptions {
    fn default() -> Self {
        GapOptions {
            materialize: false,
            budget: DEFAULT_BUDGET,
            exact: ExactParams::default(),
            spectral: SpectralParams::default(),
            variant: Variant::T1,
        }
    }
}

pub const BOUND_NOTE: &str =
    "m_upper = lambda^t * sqrt(r^2 + min(1, phi/lambda)^2 (1 - r^2)); explicit constants chosen by this library";

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GapReport {
    pub s: usize,
    pub t: usize,
    /// `(2s)^t`, absent when it overflows 64 bits.
    pub n: Option<u64>,
    pub ln_n: f64,
    pub lambda: f64,
    pub lambda_t: f64,
    pub ln_lambda_t: f64,
    pub level_ratio: f64,
    pub q_witness: usize,
    pub tensor_bound_ok: bool,
    pub m_upper: f64,
    pub ratio_bound: f64,
    pub hypothesis_ok: bool,
    pub materialized: bool,
    pub lambda_measured: Option<f64>,
    pub spectrum_ok: Option<bool>,
    pub certificate_density: Option<f64>,
    pub m_exact: Option<f64>,
    /// `certificate ≤ M ≤ m_upper ≤ λ^t` over the values present.
    pub ordering_ok: bool,
    /// `(ln ln n / ln n)^{1/8}`, for `n ≥ 3`.
    pub target_scaling: Option<f64>,
    /// `s⁸`, the asymptotic choice of `t`; never built.
    pub asymptotic_t: f64,
    pub bound_note: String,
}

pub fn gap_report(spec: &GapGraphSpec, opts: &GapOptions) -> Result<GapReport> {
    let bound = m_upper_bound(spec)?;
    let level = level_max_ratio(&LevelVector::for_spec(spec))?;
    let ln_n = spec.ln_vertex_count();

    let (mut lambda_measured, mut spectrum_ok, mut certificate_density, mut exact) = (None, None, None, None);
    if opts.materialize {
        let g = tensor_power(spec, opts.budget, opts.spectral.exec)?;
        let measured = lambda_max(&g, &opts.spectral)?.lambda_max;
        lambda_measured = Some(measured);
        spectrum_ok = Some((measured - bound.lambda_t).abs() <= 1e-8 * bound.lambda_t);
        certificate_density = Some(certify(&g, opts.variant, &opts.spectral)?.density);
        if g.vertex_count() <= opts.exact.cap {
            exact = Some(m_exact(&g, &opts.exact)?.value);
        }
    }

    let slack = 1e-9 * bound.lambda_t.max(1.0);
    let chain: Vec<f64> = [certificate_density, exact, Some(bound.m_upper), Some(bound.lambda_t)]
        .into_iter()
        .flatten()
        .collect();
    let ordering_ok = chain.windows(2).all(|w| w[0] <= w[1] + slack);

    Ok(GapReport {
        s: spec.s,
        t: spec.t,
        n: spec.vertex_count(),
        ln_n,
        lambda: bound.lambda,
        lambda_t: bound.lambda_t,
        ln_lambda_t: bound.ln_lambda_t,
        level_ratio: bound.level_ratio,
        q_witness: bound.q_witness,
        tensor_bound_ok: level.bound_ok,
        m_upper: bound.m_upper,
        ratio_bound: bound.ratio_bound,
        hypothesis_ok: bound.hypothesis_ok,
        materialized: opts.materialize,
        lambda_measured,
        spectrum_ok,
        certificate_density,
        m_exact: exact,
        ordering_ok,
        target_scaling: (ln_n > 1.0).then(|| (ln_n.ln() / ln_n).powf(0.125)),
        asymptotic_t: (spec.s as f64).powi(8),
        bound_note: BOUND_NOTE.to_string(),
    })
}
