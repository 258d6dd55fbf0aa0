//! Circle-method averaging for cross-union tuples: the exact rational bound
//! `Σ |G_i| / C(n, k_i) <= s`, a Monte Carlo estimator mirroring the
//! random-permutation argument behind it, and the equality-case structure for
//! nested tuples at `n = (s+1)k`.

use std::collections::HashSet;

use num_traits::Zero;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::combinat::binom_u;
use crate::family::{covering_transversal, elems_of, full_mask, Family, FamilyTuple};
use crate::{Error, Rational, Real, Result};

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CircleReport {
    /// Exact rational `Σ |G_i| / C(n, k_i)` rendered as `p/q`.
    pub lhs: String,
    pub s: u32,
    pub tight: bool,
    /// Covering transversal when the cross-union precondition fails.
    pub witness: Option<Vec<String>>,
}

fn format_sets(masks: &[u64]) -> Vec<String> {
    masks
        .iter()
        .map(|&m| {
            elems_of(m)
                .iter()
                .map(|e| e.to_string())
                .collect::<Vec<_>>()
                .join(",")
        })
        .collect()
}

/// The exact normalized size sum of a tuple of families over a common `[n]`
/// with possibly mixed uniformities.
pub fn normalized_size_sum(fams: &[Family]) -> Rational {
    let n = fams[0].n() as u64;
    fams.iter()
        .map(|f| {
            Rational::new(
                crate::Int::from(f.len()),
                binom_u(n, f.k() as u64),
            )
        })
        .fold(Rational::zero(), |a, b| a + b)
}

/// Verifies `Σ |G_i| / C(n, k_i) <= s` for a cross-union tuple with
/// `Σ k_i >= n`. Fails with a covering transversal when the tuple is not
/// cross-union.
pub fn circle_check(fams: &[Family]) -> Result<CircleReport> {
    if fams.len() < 2 {
        return Err(Error::Precondition("circle_check: need at least two families".into()));
    }
    let n = fams[0].n();
    if fams.iter().any(|f| f.n() != n) {
        return Err(Error::Precondition("circle_check: families must share the universe".into()));
    }
    if fams.iter().any(|f| f.is_empty()) {
        return Err(Error::Precondition("circle_check: families must be non-empty".into()));
    }
    let ksum: u64 = fams.iter().map(|f| f.k() as u64).sum();
    if ksum < n as u64 {
        return Err(Error::Precondition(format!(
            "circle_check: need Σ k_i >= n, got {ksum} < {n}"
        )));
    }
    let refs: Vec<&Family> = fams.iter().collect();
    if let Some(witness) = covering_transversal(&refs) {
        return Err(Error::Precondition(format!(
            "circle_check: tuple is not cross-union, covering transversal {:?}",
            format_sets(&witness)
        )));
    }
    let s = fams.len() as u32 - 1;
    let lhs = normalized_size_sum(fams);
    let tight = lhs == Rational::from_integer(crate::Int::from(s));
    Ok(CircleReport { lhs: lhs.to_string(), s, tight, witness: None })
}

/// Monte Carlo estimate of `E[X] = Σ_i P(α(A_i) ∈ G_i)` over a uniformly
/// random permutation `α` of `[n]`, for a fixed cover `A_0 ∪ ... ∪ A_s = [n]`.
///
/// Stream contract: trials are split into shards of 65536; shard `j` draws
/// from `ChaCha8Rng` seeded with `seed + j`, and shard means are summed in
/// shard order. The estimate is a pure function of `(fams, cover, trials,
/// seed)`. Families may be empty here: the estimator is meaningful for
/// degenerate tuples too.
pub fn circle_expectation(
    fams: &[Family],
    cover: &[u64],
    trials: u64,
    seed: u64,
) -> Result<Real> {
    if fams.len() != cover.len() {
        return Err(Error::Precondition("circle_expectation: one cover set per family".into()));
    }
    let n = fams[0].n();
    for (f, &a) in fams.iter().zip(cover) {
        if a.count_ones() != f.k() {
            return Err(Error::Precondition(format!(
                "circle_expectation: |A_i| = {} does not match k_i = {}",
                a.count_ones(),
                f.k()
            )));
        }
    }
    let union = cover.iter().fold(0u64, |m, &a| m | a);
    if union != full_mask(n) {
        return Err(Error::Precondition("circle_expectation: cover must union to [n]".into()));
    }
    if trials == 0 {
        return Err(Error::Precondition("circle_expectation: trials must be positive".into()));
    }

    let members: Vec<HashSet<u64>> = fams
        .iter()
        .map(|f| f.masks().iter().copied().collect())
        .collect();
    let cover_elems: Vec<Vec<u32>> = cover.iter().map(|&a| elems_of(a)).collect();

    const SHARD: u64 = 65536;
    let shards = trials.div_ceil(SHARD);
    let totals: Vec<u64> = (0..shards)
        .into_par_iter()
        .map(|j| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(j));
            let this_shard = SHARD.min(trials - j * SHARD);
            let mut perm: Vec<u32> = (1..=n).collect();
            let mut hits = 0u64;
            for _ in 0..this_shard {
                perm.shuffle(&mut rng);
                for (i, elems) in cover_elems.iter().enumerate() {
                    let image = elems
                        .iter()
                        .fold(0u64, |m, &e| m | 1u64 << (perm[(e - 1) as usize] - 1));
                    if members[i].contains(&image) {
                        hits += 1;
                    }
                }
            }
            hits
        })
        .collect();
    let total: u64 = totals.iter().sum();
    Ok(total as Real / trials as Real)
}

/// Equality-case consistency for nested tuples at `n = (s+1)k`, `s >= 2`:
/// when the normalized sum is exactly `s`, all families must coincide.
/// Returns `tight ⇒ all equal`.
pub fn equality_case_check(fams: &[Family]) -> Result<bool> {
    let s = fams.len() as u32 - 1;
    if s < 2 {
        return Err(Error::Precondition("equality_case_check: needs s >= 2".into()));
    }
    let n = fams[0].n();
    let k = fams[0].k();
    if fams.iter().any(|f| f.n() != n || f.k() != k) {
        return Err(Error::Precondition("equality_case_check: uniform (n, k) required".into()));
    }
    if n != (s + 1) * k {
        return Err(Error::Precondition(format!(
            "equality_case_check: needs n = (s+1)k, got n = {n}, (s+1)k = {}",
            (s + 1) * k
        )));
    }
    if fams.iter().any(|f| f.is_empty()) {
        return Err(Error::Precondition("equality_case_check: families must be non-empty".into()));
    }
    for w in fams.windows(2) {
        if !w[0].masks().iter().all(|&m| w[1].contains(m)) {
            return Err(Error::Precondition("equality_case_check: tuple must be nested".into()));
        }
    }
    let report = circle_check(fams)?;
    if !report.tight {
        return Ok(true);
    }
    Ok(fams.windows(2).all(|w| w[0] == w[1]))
}

/// For a tight nested tuple at `n = (s+1)k`, every ordered partition of `[n]`
/// into `s+1` k-sets has exactly one index `i` with `B_i` *outside* `G_i`.
/// Exhaustive over all ordered partitions; meant for small n.
pub fn partition_claim_holds(fams: &[Family]) -> bool {
    let n = fams[0].n();
    let k = fams[0].k();
    assert_eq!(n as usize, fams.len() * k as usize);
    assert!(n <= 12, "ordered-partition enumeration guarded at n <= 12");
    let blocks = crate::family::all_k_subsets(n, k);
    // enumerate ordered partitions (B_0, ..., B_s); each must miss exactly one G_i
    fn walk(fams: &[Family], blocks: &[u64], stack: &mut Vec<u64>, used: u64) -> bool {
        if stack.len() == fams.len() {
            let misses = fams
                .iter()
                .zip(stack.iter())
                .filter(|(f, &b)| !f.contains(b))
                .count();
            return misses == 1;
        }
        for &b in blocks {
            if b & used == 0 {
                stack.push(b);
                let ok = walk(fams, blocks, stack, used | b);
                stack.pop();
                if !ok {
                    return false;
                }
            }
        }
        true
    }
    let mut stack = Vec::with_capacity(fams.len());
    walk(fams, &blocks, &mut stack, 0)
}

/// Samples a non-empty cross-union tuple of families over `[n]` with the
/// given (possibly mixed) uniformities `1 <= k_i < n`.
///
/// Strategy: pick a random element `x` and draw each family mostly from the
/// star avoiding `x` (dense) with a sprinkle of sets through `x`, then
/// repair — while a covering transversal exists, its set is removed from one
/// family that can spare it. The star bias keeps repair short. If repair gets
/// stuck with all-singleton families, falls back to the star tuple avoiding
/// `n` (always cross-union).
pub fn random_cross_union_families(
    n: u32,
    ks: &[u32],
    rng: &mut ChaCha8Rng,
) -> Result<Vec<Family>> {
    if ks.len() < 2 {
        return Err(Error::Precondition("need at least two families".into()));
    }
    if ks.iter().any(|&k| k < 1 || k >= n) {
        return Err(Error::Precondition(format!("need 1 <= k_i < n = {n}")));
    }
    let x_bit = 1u64 << rng.gen_range(0..n);
    let mut fams: Vec<Vec<u64>> = ks
        .iter()
        .map(|&k| {
            let subs = crate::family::all_k_subsets(n, k);
            let mut sets: Vec<u64> = subs
                .iter()
                .copied()
                .filter(|&m| {
                    let p = if m & x_bit == 0 { 0.5 } else { 0.04 };
                    rng.gen_bool(p)
                })
                .collect();
            if sets.is_empty() {
                sets.push(subs[rng.gen_range(0..subs.len())]);
            }
            sets
        })
        .collect();
    for _ in 0..100_000 {
        let built: Vec<Family> = fams
            .iter()
            .zip(ks)
            .map(|(sets, &k)| Family::new(n, k, sets.clone()).expect("sets are k-subsets of [n]"))
            .collect();
        let refs: Vec<&Family> = built.iter().collect();
        let Some(witness) = covering_transversal(&refs) else {
            return Ok(built);
        };
        let removable: Vec<usize> = (0..fams.len()).filter(|&i| fams[i].len() > 1).collect();
        if removable.is_empty() {
            break;
        }
        let i = removable[rng.gen_range(0..removable.len())];
        fams[i].retain(|&m| m != witness[i]);
    }
    Ok(ks.iter().map(|&k| Family::star(n, k, n)).collect())
}

/// [`random_cross_union_families`] at a common uniformity, packed as a tuple.
pub fn random_cross_union_tuple(n: u32, k: u32, s: u32, rng: &mut ChaCha8Rng) -> Result<FamilyTuple> {
    let fams = random_cross_union_families(n, &vec![k; s as usize + 1], rng)?;
    FamilyTuple::new(fams)
}
