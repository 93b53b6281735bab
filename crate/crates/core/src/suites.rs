//! Seeded self-check suites for the rounding lemmas and the estimates used by
//! the gap family. Trial `i` draws from ChaCha8 stream `i` of the seed, so a
//! report depends only on `(suite, seed)`, never on scheduling.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gap::{
    base_lambda, binomial_big, check_binest, entropy, large_deviation, level_max_ratio, ln_big, LevelVector,
};
use crate::par::{self, Exec};
use crate::rounding::{normalized_inner, round_prefix, round_smooth, round_threshold, smooth_construction};

pub const ROUNDING_TRIALS: usize = 1000;
/// Failures kept verbatim in a report.
const MAX_LISTED: usize = 20;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Rounding,
    Entropy,
    Deviation,
    Binest,
    Tensor,
}

impl Suite {
    pub const ALL: [Suite; 5] = [Suite::Rounding, Suite::Entropy, Suite::Deviation, Suite::Binest, Suite::Tensor];
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Suite::Rounding => "rounding",
            Suite::Entropy => "entropy",
            Suite::Deviation => "deviation",
            Suite::Binest => "binest",
            Suite::Tensor => "tensor",
        })
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|suite| suite.to_string() == s.to_ascii_lowercase())
            .ok_or_else(|| Error::Domain(format!("unknown suite `{s}`")))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub suite: Suite,
    pub seed: u64,
    pub trials: usize,
    pub passed: usize,
    /// Report-only properties that did not hold.
    pub soft_violations: usize,
    /// The first failing trials, described.
    pub failures: Vec<String>,
}

impl SuiteReport {
    pub fn ok(&self) -> bool {
        self.passed == self.trials
    }
}

impl fmt::Display for SuiteReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{} pass", self.passed, self.trials)
    }
}

/// Outcome of one trial: `Err` on a hard failure, `Ok(false)` when only a
/// soft property failed.
type Trial = std::result::Result<bool, String>;

fn collect(suite: Suite, seed: u64, outcomes: Vec<Trial>) -> SuiteReport {
    let trials = outcomes.len();
    let mut passed = 0;
    let mut soft_violations = 0;
    let mut failures = Vec::new();
    for o in outcomes {
        match o {
            Ok(soft) => {
                passed += 1;
                soft_violations += usize::from(!soft);
            }
            Err(msg) if failures.len() < MAX_LISTED => failures.push(msg),
            Err(_) => {}
        }
    }
    SuiteReport {
        suite,
        seed,
        trials,
        passed,
        soft_violations,
        failures,
    }
}

fn trial_rng(seed: u64, trial: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial as u64);
    rng
}

pub fn run_suite(suite: Suite, seed: u64, exec: Exec) -> SuiteReport {
    let outcomes = match suite {
        Suite::Rounding => par::map_range(exec, 0..ROUNDING_TRIALS, 8, |i| rounding_trial(&mut trial_rng(seed, i))),
        Suite::Entropy => par::map_range(exec, 0..1000, 8, |i| entropy_trial(&mut trial_rng(seed, i))),
        Suite::Deviation => {
            let mut grid: Vec<(f64, u64, u64)> = Vec::new();
            for lambda in [1.0, 2.0, 4.0, 8.0] {
                for t in 1..=60u64 {
                    for q in 1..=t {
                        if q as f64 * (lambda + 1.0) <= t as f64 {
                            grid.push((lambda, q, t));
                        }
                    }
                }
            }
            let fixed = grid.len();
            par::map_range(exec, 0..fixed + 500, 8, |i| {
                let (lambda, q, t) = if i < fixed {
                    grid[i]
                } else {
                    let mut rng = trial_rng(seed, i);
                    let lambda = 0.05 + 9.95 * rng.random::<f64>();
                    let t = rng.random_range(1..=400u64);
                    let q_max = (t as f64 / (lambda + 1.0)).floor() as u64;
                    if q_max == 0 {
                        return Ok(true);
                    }
                    (lambda, rng.random_range(1..=q_max), t)
                };
                deviation_trial(lambda, q, t)
            })
        }
        Suite::Binest => {
            let grid: Vec<(u64, u64)> = (2..=60u64).flat_map(|t| (1..=t / 2).map(move |q| (t, q))).collect();
            par::map_range(exec, 0..grid.len(), 8, |i| binest_trial(grid[i].0, grid[i].1))
        }
        Suite::Tensor => {
            let lambdas = [4.0, base_lambda(5), 8.0];
            let sweep = lambdas.len() * 200;
            let materialized = lambdas.len() * 20;
            par::map_range(exec, 0..sweep + materialized, 1, |i| {
                if i < sweep {
                    tensor_bound_trial(lambdas[i / 200], i % 200 + 1)
                } else {
                    let j = i - sweep;
                    tensor_endpoint_trial(lambdas[j / 20], j % 20 + 1)
                }
            })
        }
    };
    collect(suite, seed, outcomes)
}

fn random_vector(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    loop {
        let z: Vec<f64> = (0..n)
            .map(|_| match rng.random_range(0..6) {
                0 => 0.0,
                1 => rng.random::<f64>().max(1e-3).powi(-2),
                2 => rng.random_range(0..4) as f64,
                _ => rng.random::<f64>(),
            })
            .collect();
        if z.iter().any(|&v| v > 0.0) {
            return z;
        }
    }
}

/// Prefix exactness against all `2ⁿ − 1` supports plus the three guarantees.
fn rounding_trial(rng: &mut ChaCha8Rng) -> Trial {
    let n = rng.random_range(1..=12usize);
    let z = random_vector(rng, n);
    let p = round_prefix(&z).map_err(|e| e.to_string())?;
    let mut best = 0.0f64;
    for mask in 1u32..1 << n {
        let support: Vec<usize> = (0..n).filter(|i| mask >> i & 1 == 1).collect();
        best = best.max(normalized_inner(&z, &support));
    }
    if (p.achieved_ratio - best).abs() > 1e-12 * best {
        return Err(format!("prefix {} misses the optimum {best} on {z:?}", p.achieved_ratio));
    }
    if p.achieved_ratio < p.guarantee {
        return Err(format!("prefix guarantee violated on {z:?}"));
    }

    let s = smooth_construction(&z).map_err(|e| e.to_string())?;
    if s.achieved_ratio < s.guarantee {
        return Err(format!("smooth guarantee violated on {z:?}"));
    }
    let r = round_smooth(&z).map_err(|e| e.to_string())?;
    if r.achieved_ratio < s.achieved_ratio {
        return Err(format!("smooth rounding worse than its construction on {z:?}"));
    }

    let cap = rng.random_range(1..=64u64);
    let ints: Vec<f64> = loop {
        let v: Vec<f64> = (0..n).map(|_| rng.random_range(0..=cap) as f64).collect();
        if v.iter().any(|&x| x > 0.0) {
            break v;
        }
    };
    let t = round_threshold(&ints, cap).map_err(|e| e.to_string())?;
    if t.achieved_ratio < t.guarantee {
        return Err(format!("threshold guarantee violated on {ints:?} with cap {cap}"));
    }
    Ok(true)
}

/// Symmetry, range, concavity along a random chord and the series value.
fn entropy_trial(rng: &mut ChaCha8Rng) -> Trial {
    let x = rng.random::<f64>();
    let y = rng.random::<f64>();
    let h = |v: f64| entropy(v).map_err(|e| e.to_string());
    let (hx, hy, hm) = (h(x)?, h(y)?, h((x + y) / 2.0)?);
    if (hx - h(1.0 - x)?).abs() > 1e-15 {
        return Err(format!("H not symmetric at {x}"));
    }
    if !(0.0..=std::f64::consts::LN_2 + 1e-15).contains(&hx) {
        return Err(format!("H({x}) = {hx} out of range"));
    }
    if hm + 1e-15 < (hx + hy) / 2.0 {
        return Err(format!("H not concave between {x} and {y}"));
    }
    // H(x) = −x ln x + (1−x) Σ xᵏ/k for x ≤ 1/2
    let small = x.min(1.0 - x);
    let series: f64 = (1..400).map(|k| small.powi(k) / k as f64).sum();
    let want = if small == 0.0 { 0.0 } else { -small * small.ln() + (1.0 - small) * series };
    if (h(small)? - want).abs() > 1e-13 {
        return Err(format!("H({small}) disagrees with its series"));
    }
    Ok(true)
}

fn deviation_trial(lambda: f64, q: u64, t: u64) -> Trial {
    let r = large_deviation(lambda, q, t).map_err(|e| e.to_string())?;
    if !r.ok {
        return Err(format!("lhs > rhs at lambda={lambda} q={q} t={t}"));
    }
    Ok(r.soft_ok)
}

fn binest_trial(t: u64, q: u64) -> Trial {
    let b = check_binest(t, q).map_err(|e| e.to_string())?;
    let exact = ln_big(&binomial_big(t, q));
    if (b.ln_binom - exact).abs() > 1e-12 * exact.max(1.0) {
        return Err(format!("ln C({t},{q}) inaccurate"));
    }
    if !(b.ok && b.ln_lower < exact && exact < b.ln_upper) {
        return Err(format!("binomial estimate fails at t={t} q={q}"));
    }
    Ok(true)
}

fn tensor_bound_trial(lambda: f64, t: usize) -> Trial {
    let r = level_max_ratio(&LevelVector { lambda, s: 1, t }).map_err(|e| e.to_string())?;
    if !r.bound_ok || r.ratio > 1.0 {
        return Err(format!("level ratio {} exceeds {} at lambda={lambda} t={t}", r.ratio, r.bound));
    }
    Ok(true)
}

/// The whole-level scan against prefix search on the explicit vector.
fn tensor_endpoint_trial(lambda: f64, t: usize) -> Trial {
    let lv = LevelVector { lambda, s: 1, t };
    let z = lv.materialize(1 << 20).map_err(|e| e.to_string())?;
    let brute = round_prefix(&z).map_err(|e| e.to_string())?.achieved_ratio;
    let level = level_max_ratio(&lv).map_err(|e| e.to_string())?.ratio;
    if (brute - level).abs() > 1e-10 {
        return Err(format!("endpoint scan {level} vs prefix search {brute} at lambda={lambda} t={t}"));
    }
    Ok(true)
}
