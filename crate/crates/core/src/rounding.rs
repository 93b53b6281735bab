//! Rounding a non-negative vector `z` to a 0/1 vector `δ` with a large
//! normalized inner product `⟨z,δ⟩/(‖z‖‖δ‖)`.
//!
//! Three constructions, each with its own lower bound on the achieved ratio
//! (`ln` is the natural logarithm):
//!
//! | construction | guarantee |
//! |---|---|
//! | best prefix of the sorted vector | `2/√(ln n + 4)` |
//! | best level set of an integer vector in `[0, Δ]` | `1/√(ln Δ + 1)` |
//! | level sets of `⌊z/z_k⌋`, `k` the ρ-witness | `1/√(8(ln ρ(z) + 1))` |
//!
//! For a fixed support size the inner product is maximized by the largest
//! entries, so the best prefix is the exact optimum over all nonzero 0/1
//! vectors.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{check_nonnegative, rho_of_sorted};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LemmaTag {
    Prefix,
    Threshold,
    Smooth,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RoundingOutcome {
    /// Indices where `δ = 1`, sorted.
    pub support: Vec<usize>,
    /// `⟨z,δ⟩/(‖z‖‖δ‖)`.
    pub achieved_ratio: f64,
    /// Lower bound promised by the construction for this input.
    pub guarantee: f64,
    pub lemma: LemmaTag,
}

pub fn prefix_guarantee(n: usize) -> f64 {
    2.0 / ((n as f64).ln() + 4.0).sqrt()
}

pub fn threshold_guarantee(cap: u64) -> f64 {
    1.0 / ((cap as f64).ln() + 1.0).sqrt()
}

pub fn smooth_guarantee(rho: f64) -> f64 {
    1.0 / (8.0 * (rho.ln() + 1.0)).sqrt()
}

/// `⟨z,δ⟩/(‖z‖‖δ‖)` for the indicator `δ` of `support`, summing in the
/// order given.
pub fn normalized_inner(z: &[f64], support: &[usize]) -> f64 {
    let dot: f64 = support.iter().map(|&i| z[i]).sum();
    let z_norm = z.iter().map(|v| v * v).sum::<f64>().sqrt();
    dot / (z_norm * (support.len() as f64).sqrt())
}

fn validate(z: &[f64]) -> Result<()> {
    check_nonnegative(z)?;
    if !z.iter().any(|&v| v > 0.0) {
        return Err(Error::ZeroVector);
    }
    Ok(())
}

/// Indices ordered by non-increasing value; ties keep index order.
fn descending_order(z: &[f64]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..z.len()).collect();
    order.sort_by(|&a, &b| z[b].total_cmp(&z[a]));
    order
}

fn outcome(z: &[f64], mut support: Vec<usize>, guarantee: f64, lemma: LemmaTag) -> RoundingOutcome {
    support.sort_unstable();
    RoundingOutcome {
        achieved_ratio: normalized_inner(z, &support),
        support,
        guarantee,
        lemma,
    }
}

/// Best prefix of `z` sorted non-increasingly; the smallest prefix wins ties.
pub fn round_prefix(z: &[f64]) -> Result<RoundingOutcome> {
    validate(z)?;
    let order = descending_order(z);
    let k = best_prefix_len(order.iter().map(|&i| z[i]));
    Ok(outcome(z, order[..k].to_vec(), prefix_guarantee(z.len()), LemmaTag::Prefix))
}

/// Length `k ≥ 1` maximizing `(v₁ + … + v_k)/√k` over a non-increasing
/// sequence; the first maximizer wins.
pub(crate) fn best_prefix_len<I: IntoIterator<Item = f64>>(sorted: I) -> usize {
    let mut sum = 0.0;
    let mut best = (f64::NEG_INFINITY, 0);
    for (i, v) in sorted.into_iter().enumerate() {
        sum += v;
        let score = sum / ((i + 1) as f64).sqrt();
        if score > best.0 {
            best = (score, i + 1);
        }
    }
    best.1
}

/// Best level set `{j : z_j ≥ i}`, `i ∈ [1, cap]`, of an integer vector with
/// entries in `[0, cap]`. Ties go to the highest level (smallest support).
pub fn round_threshold(z: &[f64], cap: u64) -> Result<RoundingOutcome> {
    if cap == 0 {
        return Err(Error::Domain("the cap Δ must be at least 1".into()));
    }
    check_nonnegative(z)?;
    let mut ints = Vec::with_capacity(z.len());
    for (index, &value) in z.iter().enumerate() {
        if value.fract() != 0.0 {
            return Err(Error::NonInteger { index, value });
        }
        if value > cap as f64 {
            return Err(Error::EntryExceedsCap { index, value, cap });
        }
        ints.push(value as u64);
    }
    if ints.iter().all(|&v| v == 0) {
        return Err(Error::ZeroVector);
    }
    let mut support = best_level_set(&ints);
    support.sort_unstable();
    // integer sums keep the ratio exact up to the final division
    let dot: u128 = support.iter().map(|&i| ints[i] as u128).sum();
    let norm_sq: u128 = ints.iter().map(|&v| (v as u128) * (v as u128)).sum();
    Ok(RoundingOutcome {
        achieved_ratio: dot as f64 / ((norm_sq * support.len() as u128) as f64).sqrt(),
        support,
        guarantee: threshold_guarantee(cap),
        lemma: LemmaTag::Threshold,
    })
}

/// Support of the best level set of a nonzero integer vector, compared in
/// exact arithmetic: level `a` beats `b` iff `sum_a²·cnt_b > sum_b²·cnt_a`.
pub(crate) fn best_level_set(z: &[u64]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..z.len()).filter(|&i| z[i] > 0).collect();
    order.sort_by(|&a, &b| z[b].cmp(&z[a]));
    let mut best: Option<(u128, u128, usize)> = None; // (sum, count, prefix length)
    let mut sum: u128 = 0;
    let mut i = 0;
    // Each distinct value closes a level set; walk from the highest level.
    while i < order.len() {
        let level = z[order[i]];
        while i < order.len() && z[order[i]] == level {
            sum += level as u128;
            i += 1;
        }
        let count = i as u128;
        let better = match best {
            None => true,
            Some((bs, bc, _)) => sum * sum * bc > bs * bs * count,
        };
        if better {
            best = Some((sum, count, i));
        }
    }
    let (_, _, len) = best.expect("vector is nonzero");
    order.truncate(len);
    order
}

/// The level-set construction behind the ρ-guarantee, without the prefix
/// upgrade that [`round_smooth`] applies.
pub fn smooth_construction(z: &[f64]) -> Result<RoundingOutcome> {
    validate(z)?;
    let order = descending_order(z);
    let sorted: Vec<f64> = order.iter().map(|&i| z[i]).collect();
    let rho = rho_of_sorted(&sorted);
    // z nonzero forces z_k > 0
    let zk = sorted[rho.k - 1];
    let scaled: Vec<u64> = z.iter().map(|&v| (v / zk).floor() as u64).collect();
    let support = best_level_set(&scaled);
    Ok(outcome(z, support, smooth_guarantee(rho.value), LemmaTag::Smooth))
}

/// The better of [`smooth_construction`] and [`round_prefix`]; both satisfy
/// the ρ-guarantee, which is the one reported.
pub fn round_smooth(z: &[f64]) -> Result<RoundingOutcome> {
    let lemma = smooth_construction(z)?;
    let prefix = round_prefix(z)?;
    if prefix.achieved_ratio > lemma.achieved_ratio {
        Ok(RoundingOutcome {
            guarantee: lemma.guarantee,
            lemma: LemmaTag::Smooth,
            ..prefix
        })
    } else {
        Ok(lemma)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    /// Exhaustive maximum over all nonzero 0/1 vectors.
    fn brute_force(z: &[f64]) -> f64 {
        let n = z.len();
        let norm = z.iter().map(|v| v * v).sum::<f64>().sqrt();
        (1u32..1 << n)
            .map(|mask| {
                let (mut dot, mut cnt) = (0.0, 0u32);
                for (i, v) in z.iter().enumerate() {
                    if mask >> i & 1 == 1 {
                        dot += v;
                        cnt += 1;
                    }
                }
                dot / (norm * (cnt as f64).sqrt())
            })
            .fold(f64::NEG_INFINITY, f64::max)
    }

    #[test]
    fn prefix_single_coordinate_is_tight() {
        let r = round_prefix(&[5.0]).unwrap();
        assert_eq!(r.support, vec![0]);
        assert_eq!(r.achieved_ratio, 1.0);
        assert_eq!(r.guarantee, 1.0);
    }

    #[test]
    fn prefix_harmonic_root_family() {
        for n in 2..=64 {
            let z: Vec<f64> = (1..=n).map(|i| 1.0 / (i as f64).sqrt()).collect();
            let r = round_prefix(&z).unwrap();
            assert!(r.achieved_ratio < 2.0 / (n as f64).ln().sqrt(), "n = {n}");
            assert!(r.achieved_ratio >= r.guarantee);
        }
    }

    #[test]
    fn prefix_constant_vector() {
        let r = round_prefix(&[1.0; 4]).unwrap();
        assert_eq!(r.support, vec![0, 1, 2, 3]);
        assert_eq!(r.achieved_ratio, 1.0);
    }

    #[test]
    fn prefix_errors() {
        assert!(matches!(round_prefix(&[0.0, 0.0]), Err(Error::ZeroVector)));
        assert!(matches!(round_prefix(&[1.0, -1.0]), Err(Error::NegativeEntry { index: 1, .. })));
        assert!(matches!(round_prefix(&[]), Err(Error::ZeroVector)));
    }

    #[test]
    fn threshold_examples() {
        let r = round_threshold(&[1.0, 1.0, 0.0], 1).unwrap();
        assert_eq!(r.support, vec![0, 1]);
        assert!((r.achieved_ratio - 1.0).abs() < 1e-15);
        assert_eq!(r.guarantee, 1.0);

        // level 1 gives 4/(√10·√2) ≈ 0.894, levels 2 and 3 give 3/√10
        let r = round_threshold(&[3.0, 1.0], 3).unwrap();
        assert_eq!(r.support, vec![0]);
        assert!((r.achieved_ratio - 3.0 / 10f64.sqrt()).abs() < 1e-15);

        let r = round_threshold(&[7.0; 5], 7).unwrap();
        assert_eq!(r.support.len(), 5);
        assert!((r.achieved_ratio - 1.0).abs() < 1e-15);
    }

    #[test]
    fn threshold_errors() {
        assert!(matches!(round_threshold(&[0.0, 0.0], 2), Err(Error::ZeroVector)));
        assert!(matches!(round_threshold(&[3.0], 2), Err(Error::EntryExceedsCap { index: 0, .. })));
        assert!(matches!(round_threshold(&[1.5], 2), Err(Error::NonInteger { index: 0, .. })));
        assert!(matches!(round_threshold(&[1.0], 0), Err(Error::Domain(_))));
    }

    #[test]
    fn smooth_examples() {
        let r = round_smooth(&[2.5; 6]).unwrap();
        assert_eq!(r.guarantee, 1.0 / 8f64.sqrt());
        assert!((r.achieved_ratio - 1.0).abs() < 1e-15);

        let z = [2.0, 1.0, 1.0, 1.0, 1.0, 1.0];
        let r = round_smooth(&z).unwrap();
        assert_eq!(r.guarantee, 1.0 / (8.0 * (2f64.ln() + 1.0)).sqrt());
        assert!(r.achieved_ratio >= r.guarantee);
        assert!((r.achieved_ratio - brute_force(&z)).abs() < 1e-12);
        let c = smooth_construction(&z).unwrap();
        assert!(c.achieved_ratio >= c.guarantee);
    }

    fn nonneg_vec(max_len: usize) -> impl Strategy<Value = Vec<f64>> {
        prop::collection::vec(
            prop_oneof![
                3 => 0.0..1.0f64,
                1 => Just(0.0),
                1 => (0.001..1.0f64).prop_map(|u| u.powi(-2)),
            ],
            1..=max_len,
        )
        .prop_filter("nonzero", |v| v.iter().any(|&x| x > 0.0))
    }

    proptest! {
        #[test]
        fn prefix_is_exact(z in nonneg_vec(12)) {
            let r = round_prefix(&z).unwrap();
            let best = brute_force(&z);
            prop_assert!((r.achieved_ratio - best).abs() <= 1e-12 * best);
            prop_assert!(r.achieved_ratio >= r.guarantee);
        }

        #[test]
        fn smooth_guarantee_holds(z in nonneg_vec(40)) {
            let c = smooth_construction(&z).unwrap();
            prop_assert!(c.achieved_ratio >= c.guarantee, "{:?}", c);
            let r = round_smooth(&z).unwrap();
            prop_assert!(r.achieved_ratio >= c.achieved_ratio);
        }

        #[test]
        fn threshold_guarantee_holds(cap in 1u64..=50, raw in prop::collection::vec(0u64..=50, 1..40)) {
            let z: Vec<f64> = raw.iter().map(|&v| (v % (cap + 1)) as f64).collect();
            prop_assume!(z.iter().any(|&v| v > 0.0));
            let r = round_threshold(&z, cap).unwrap();
            prop_assert!(r.achieved_ratio >= r.guarantee);
        }

        #[test]
        fn prefix_permutation_equivariant(z in nonneg_vec(20), seed in any::<u64>()) {
            let n = z.len();
            let mut perm: Vec<usize> = (0..n).collect();
            let mut s = seed;
            for i in (1..n).rev() {
                s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                perm.swap(i, (s >> 33) as usize % (i + 1));
            }
            // permuted[i] = z[perm[i]]
            let permuted: Vec<f64> = perm.iter().map(|&p| z[p]).collect();
            let a = round_prefix(&z).unwrap();
            let b = round_prefix(&permuted).unwrap();
            prop_assert!((a.achieved_ratio - b.achieved_ratio).abs() <= 1e-12);
            // distinct values make the optimal support unique
            let mut sorted = z.clone();
            sorted.sort_by(f64::total_cmp);
            if sorted.windows(2).all(|w| w[0] != w[1]) {
                let mapped: Vec<usize> = b.support.iter().map(|&i| perm[i]).collect();
                let mut mapped = mapped;
                mapped.sort_unstable();
                prop_assert_eq!(mapped, a.support);
            }
        }

        #[test]
        fn prefix_scale_invariant(z in nonneg_vec(20), k in -20i32..20, c in 0.01..100.0f64) {
            let a = round_prefix(&z).unwrap();
            let scaled: Vec<f64> = z.iter().map(|v| v * 2f64.powi(k)).collect();
            let b = round_prefix(&scaled).unwrap();
            prop_assert_eq!(&a.support, &b.support);
            prop_assert_eq!(a.achieved_ratio, b.achieved_ratio);
            let scaled: Vec<f64> = z.iter().map(|v| v * c).collect();
            let b = round_prefix(&scaled).unwrap();
            prop_assert!((a.achieved_ratio - b.achieved_ratio).abs() <= 1e-12);
        }
    }
}
