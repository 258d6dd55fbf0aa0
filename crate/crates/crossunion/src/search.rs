//! Certified exact maximization of `Σ |F_i|` over non-empty cross-union
//! tuples.
//!
//! Two independent routes compute the maximum:
//!
//! * [`max_sum_search`] works in the reduced space of *nested chains of
//!   shifted families* `G_0 ⊆ ... ⊆ G_s` (sum-preserving reductions), with
//!   branch-and-bound pruning;
//! * [`max_sum_raw`] enumerates arbitrary non-empty tuples with only
//!   soundness-certified value bounds and no structural reduction.
//!
//! Agreement of the two routes at small parameters certifies the reduction.
//! [`verify_main_theorem`] additionally enumerates every maximizer in the
//! unreduced space and checks that each one is a star tuple.

use std::sync::atomic::{AtomicU64, Ordering};

use num_traits::ToPrimitive;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::combinat::binom_u;
use crate::family::{all_k_subsets, full_mask, Family, FamilyTuple};
use crate::{Error, Result};

/// Enumeration budget: the search refuses instances with more than this many
/// k-subsets of `[n]`.
pub const MAX_UNIVERSE_SETS: usize = 40;
/// The raw (unreduced) oracle additionally needs subfamily bitmaps to stay
/// enumerable.
pub const MAX_RAW_UNIVERSE_SETS: usize = 20;

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SearchOpts {
    /// Cap the total sum by `s * C(n, k)` (circle-method bound).
    pub use_circle_bound: bool,
    /// Cap `|G_0|` by `C(n-1, k)` (r-wise union bound; valid for nested
    /// chains, where `G_0` is (s+1)-wise union).
    pub use_rwise_bound: bool,
    /// Cap `Σ_{i>=1} |G_i|` by `s * C(n, k) - C(ks, k)` (relative cross-union
    /// bound; valid for nested chains).
    pub use_rest_bound: bool,
    /// Worker threads for the value phase. With more than one thread the
    /// node/prune counters may vary between runs; results never do.
    pub threads: usize,
}

impl Default for SearchOpts {
    fn default() -> Self {
        SearchOpts {
            use_circle_bound: true,
            use_rwise_bound: true,
            use_rest_bound: true,
            threads: 1,
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SearchResult {
    pub n: u32,
    pub k: u32,
    pub s: u32,
    /// Exact maximum of `Σ |F_i|`.
    pub max_sum: u64,
    /// `(s+1) C(n-1, k)`, the star-tuple value; always a feasible lower bound.
    pub star_sum: u64,
    /// Maximizing nested chains of shifted families.
    pub certificates: Vec<FamilyTuple>,
    /// The explicit star tuples, when they attain the maximum.
    pub star_certificates: Vec<FamilyTuple>,
    pub nodes_explored: u64,
    pub nodes_pruned: u64,
    pub bounds_used: Vec<String>,
}

/// Shared immutable context for one search instance.
struct Ctx {
    n: u32,
    k: u32,
    s: u32,
    /// k-subsets of `[n]` as ground-set masks, colex (= numeric) order.
    univ: Vec<u64>,
    /// Immediate domination predecessors of each universe set, as bitmaps
    /// over universe indices. A family bitmap is shifted iff it is closed
    /// under these predecessors.
    preds: Vec<u64>,
    full: u64,
    /// Cap on the total sum (enabled bounds only).
    total_cap: u64,
    /// Cap on `Σ_{i>=1} |G_i|`, if enabled.
    rest_cap: Option<u64>,
    /// Cap on `|G_0|`, if enabled.
    g0_cap: Option<u64>,
    bounds_used: Vec<String>,
}

fn guard_params(n: u32, k: u32, s: u32) -> Result<()> {
    if k < 1 || s < 1 || n < 1 {
        return Err(Error::InvalidParameter("need n, k, s >= 1".into()));
    }
    if !(s * k < n && n <= (s + 1) * k) {
        return Err(Error::InvalidParameter(format!(
            "need sk < n <= (s+1)k, got n = {n}, k = {k}, s = {s}"
        )));
    }
    Ok(())
}

fn small_binom(a: u64, b: u64) -> u64 {
    binom_u(a, b).to_u64().expect("guarded instance fits u64")
}

fn build_ctx(n: u32, k: u32, s: u32, opts: &SearchOpts) -> Result<Ctx> {
    guard_params(n, k, s)?;
    let univ = all_k_subsets(n, k);
    if univ.len() > MAX_UNIVERSE_SETS {
        return Err(Error::InvalidParameter(format!(
            "C({n}, {k}) = {} exceeds the enumeration budget {MAX_UNIVERSE_SETS}",
            univ.len()
        )));
    }
    let index: std::collections::HashMap<u64, usize> =
        univ.iter().enumerate().map(|(i, &m)| (m, i)).collect();
    let preds = univ
        .iter()
        .map(|&set| {
            let mut p = 0u64;
            for j in 1..=n {
                let bj = 1u64 << (j - 1);
                if set & bj == 0 {
                    continue;
                }
                for i in 1..j {
                    let bi = 1u64 << (i - 1);
                    if set & bi == 0 {
                        p |= 1u64 << index[&((set & !bj) | bi)];
                    }
                }
            }
            p
        })
        .collect();

    let nsets = univ.len() as u64;
    let mut total_cap = (s as u64 + 1) * nsets;
    let mut bounds_used = vec!["trivial".to_string()];
    if opts.use_circle_bound {
        total_cap = total_cap.min(s as u64 * nsets);
        bounds_used.push("circle".to_string());
    }
    let rest_cap = if opts.use_rest_bound {
        bounds_used.push("rest".to_string());
        Some(s as u64 * nsets - small_binom((k * s) as u64, k as u64))
    } else {
        None
    };
    let g0_cap = if opts.use_rwise_bound {
        bounds_used.push("rwise".to_string());
        Some(small_binom((n - 1) as u64, k as u64))
    } else {
        None
    };

    Ok(Ctx {
        n,
        k,
        s,
        univ,
        preds,
        full: full_mask(n),
        total_cap,
        rest_cap,
        g0_cap,
        bounds_used,
    })
}

impl Ctx {
    fn family_from_bitmap(&self, bitmap: u64) -> Family {
        let sets = (0..self.univ.len())
            .filter(|&i| bitmap >> i & 1 == 1)
            .map(|i| self.univ[i])
            .collect();
        Family::new(self.n, self.k, sets).expect("bitmap indexes the universe")
    }

    /// Transversal-union masks reachable after appending one family.
    fn extend_reach(&self, reach: &[u64], bitmap: u64) -> Vec<u64> {
        let mut out: Vec<u64> = Vec::with_capacity(reach.len() * 2);
        for &r in reach {
            for (i, &set) in self.univ.iter().enumerate() {
                if bitmap >> i & 1 == 1 {
                    out.push(r | set);
                }
            }
        }
        out.sort_unstable();
        out.dedup();
        out
    }

    /// True when some completion by `times` further copies of `bitmap`
    /// (a lower bound for every remaining family) already covers `[n]`.
    fn forced_cover(&self, reach: &[u64], bitmap: u64, times: u32) -> bool {
        let mut cur = reach.to_vec();
        for _ in 0..times {
            let next = self.extend_reach(&cur, bitmap);
            if next.binary_search(&self.full).is_ok() {
                return true;
            }
            if next == cur {
                return false;
            }
            cur = next;
        }
        false
    }

    /// Universe sets whose addition as a final transversal element does not
    /// complete a cover.
    fn allowed_final(&self, reach: &[u64]) -> u64 {
        let mut allowed = 0u64;
        'sets: for (i, &set) in self.univ.iter().enumerate() {
            for &r in reach {
                if r | set == self.full {
                    continue 'sets;
                }
            }
            allowed |= 1u64 << i;
        }
        allowed
    }

    /// Largest shifted (domination-down-closed) subfamily of `allowed`.
    /// Contains every shifted subfamily of `allowed`.
    fn shifted_interior(&self, allowed: u64) -> u64 {
        let mut inc = 0u64;
        for i in 0..self.univ.len() {
            if allowed >> i & 1 == 1 && self.preds[i] & !inc == 0 {
                inc |= 1u64 << i;
            }
        }
        inc
    }

    /// Upper bound on the total sum for a node at `level` that has committed
    /// `g0_size` at level 0, accumulated `partial` over levels `< level` plus
    /// `cur_size` sets at the current level, with `pool` universe sets still
    /// undecided at the current level.
    fn node_bound(&self, level: u32, g0_size: u64, partial: u64, cur_size: u64, pool: u64) -> u64 {
        let nsets = self.univ.len() as u64;
        let later = (self.s - level) as u64 * nsets;
        let mut cur_max = cur_size + pool;
        if level == 0 {
            if let Some(cap) = self.g0_cap {
                cur_max = cur_max.min(cap);
            }
        }
        let mut bound = partial + cur_max + later;
        bound = bound.min(self.total_cap);
        if let Some(rest) = self.rest_cap {
            let g0 = if level == 0 { cur_max } else { g0_size };
            bound = bound.min(g0 + rest);
        }
        bound
    }
}

#[derive(Default)]
struct Counters {
    explored: AtomicU64,
    pruned: AtomicU64,
}

/// Enumerates shifted families `S ⊇ lower` at one chain level in colex
/// order and invokes `done` for each complete non-empty family. `keep`
/// decides from the node bound whether a subtree can still matter.
fn level_families(
    ctx: &Ctx,
    idx: usize,
    cur: u64,
    lower: u64,
    keep: &impl Fn(u64, u64) -> bool, // (cur_size, pool_left) -> continue?
    done: &mut impl FnMut(u64),
    counters: &Counters,
) {
    let cur_size = cur.count_ones() as u64;
    let pool = (ctx.univ.len() - idx) as u64;
    if !keep(cur_size, pool) {
        counters.pruned.fetch_add(1, Ordering::Relaxed);
        return;
    }
    if idx == ctx.univ.len() {
        if cur != 0 {
            done(cur);
        }
        return;
    }
    if ctx.preds[idx] & !cur == 0 {
        level_families(ctx, idx + 1, cur | 1u64 << idx, lower, keep, done, counters);
    }
    if lower >> idx & 1 == 0 {
        level_families(ctx, idx + 1, cur, lower, keep, done, counters);
    }
}

/// The closing move of a chain: given the transversal reach of
/// `G_0, ..., G_{s-1}`, the unique largest admissible final family is the
/// shifted interior of the non-covering sets. Returns it when it extends the
/// previous level.
fn close_chain(ctx: &Ctx, reach: &[u64], prev_family: u64) -> Option<u64> {
    let interior = ctx.shifted_interior(ctx.allowed_final(reach));
    // a shifted prev_family with no forced cover is inside the interior
    (prev_family & !interior == 0).then_some(interior)
}

enum Mode<'a> {
    /// Improve the shared incumbent (certificates not collected).
    Value(&'a AtomicU64),
    /// Collect every chain attaining exactly the target.
    Collect(u64, &'a mut Vec<Vec<u64>>),
}

#[allow(clippy::too_many_arguments)]
fn chain_dfs(
    ctx: &Ctx,
    level: u32,
    prefix: &mut Vec<u64>,
    g0_size: u64,
    partial: u64,
    reach: &[u64],
    mode: &mut Mode,
    counters: &Counters,
) {
    debug_assert!(level < ctx.s);
    let lower = *prefix.last().unwrap_or(&0);
    let threshold = match mode {
        Mode::Value(incumbent) => incumbent.load(Ordering::Relaxed) + 1,
        Mode::Collect(target, _) => *target,
    };
    let keep = |cur_size: u64, pool: u64| {
        ctx.node_bound(level, g0_size, partial, cur_size, pool) >= threshold
    };
    let mut families = Vec::new();
    level_families(ctx, 0, 0, lower, &keep, &mut |fam| families.push(fam), counters);
    for family in families {
        counters.explored.fetch_add(1, Ordering::Relaxed);
        let size = family.count_ones() as u64;
        let g0 = if level == 0 { size } else { g0_size };
        let sum = partial + size;
        let next_reach = ctx.extend_reach(reach, family);
        if next_reach.binary_search(&ctx.full).is_ok()
            || ctx.forced_cover(&next_reach, family, ctx.s - level)
        {
            counters.pruned.fetch_add(1, Ordering::Relaxed);
            continue;
        }
        if level == ctx.s - 1 {
            if let Some(interior) = close_chain(ctx, &next_reach, family) {
                let total = sum + interior.count_ones() as u64;
                match mode {
                    Mode::Value(incumbent) => {
                        incumbent.fetch_max(total, Ordering::Relaxed);
                    }
                    Mode::Collect(target, out) => {
                        if total == *target {
                            let mut chain = prefix.clone();
                            chain.push(family);
                            chain.push(interior);
                            out.push(chain);
                        }
                    }
                }
            }
        } else {
            prefix.push(family);
            chain_dfs(ctx, level + 1, prefix, g0, sum, &next_reach, mode, counters);
            prefix.pop();
        }
    }
}

fn star_sum(n: u32, k: u32, s: u32) -> u64 {
    (s as u64 + 1) * small_binom((n - 1) as u64, k as u64)
}

fn star_tuple(n: u32, k: u32, s: u32, avoid: u32) -> FamilyTuple {
    FamilyTuple::new(vec![Family::star(n, k, avoid); s as usize + 1]).expect("star tuple is valid")
}

/// Exact maximum of `Σ |F_i|` over non-empty cross-union tuples, computed in
/// the reduced space of nested chains of shifted families, with all
/// maximizing chains as certificates.
pub fn max_sum_search(n: u32, k: u32, s: u32, opts: &SearchOpts) -> Result<SearchResult> {
    let ctx = build_ctx(n, k, s, opts)?;
    let star = star_sum(n, k, s);
    // feasibility floor: the star tuple is always cross-union here
    debug_assert!(star_tuple(n, k, s, n).is_cross_union());

    let counters = Counters::default();
    let incumbent = AtomicU64::new(star);

    // value phase: branch over level-0 families ([k] is forced into any
    // non-empty shifted family), in parallel when requested
    let mut roots = Vec::new();
    {
        let keep = |cur_size: u64, _pool: u64| match ctx.g0_cap {
            Some(cap) => cur_size <= cap,
            None => true,
        };
        let quiet = Counters::default();
        level_families(&ctx, 0, 0, 1, &keep, &mut |fam| roots.push(fam), &quiet);
    }
    let run_root = |root: &u64| {
        let root = *root;
        counters.explored.fetch_add(1, Ordering::Relaxed);
        let size = root.count_ones() as u64;
        if ctx.node_bound(0, size, 0, size, 0) <= incumbent.load(Ordering::Relaxed) {
            counters.pruned.fetch_add(1, Ordering::Relaxed);
            return;
        }
        let reach0 = ctx.extend_reach(&[0], root);
        if reach0.binary_search(&ctx.full).is_ok() || ctx.forced_cover(&reach0, root, ctx.s) {
            counters.pruned.fetch_add(1, Ordering::Relaxed);
            return;
        }
        if ctx.s == 1 {
            if let Some(interior) = close_chain(&ctx, &reach0, root) {
                incumbent.fetch_max(size + interior.count_ones() as u64, Ordering::Relaxed);
            }
            return;
        }
        let mut prefix = vec![root];
        let mut mode = Mode::Value(&incumbent);
        chain_dfs(&ctx, 1, &mut prefix, size, size, &reach0, &mut mode, &counters);
    };
    if opts.threads > 1 {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(opts.threads)
            .build()
            .map_err(|e| Error::InvalidParameter(e.to_string()))?;
        pool.install(|| roots.par_iter().for_each(run_root));
    } else {
        roots.iter().for_each(run_root);
    }
    let max_sum = incumbent.load(Ordering::Relaxed);

    // certificate phase: deterministic sequential sweep at the proven value
    let mut chains = Vec::new();
    {
        let mut prefix = Vec::new();
        let mut mode = Mode::Collect(max_sum, &mut chains);
        chain_dfs(&ctx, 0, &mut prefix, 0, 0, &[0], &mut mode, &counters);
    }
    chains.sort_unstable();
    chains.dedup();
    let certificates: Vec<FamilyTuple> = chains
        .iter()
        .map(|chain| {
            FamilyTuple::new(chain.iter().map(|&b| ctx.family_from_bitmap(b)).collect())
                .expect("chain families are valid")
        })
        .collect();

    let star_certificates = if max_sum == star {
        (1..=n).map(|i| star_tuple(n, k, s, i)).collect()
    } else {
        Vec::new()
    };

    Ok(SearchResult {
        n,
        k,
        s,
        max_sum,
        star_sum: star,
        certificates,
        star_certificates,
        nodes_explored: counters.explored.load(Ordering::Relaxed),
        nodes_pruned: counters.pruned.load(Ordering::Relaxed),
        bounds_used: ctx.bounds_used.clone(),
    })
}

// ---------------------------------------------------------------------------
// Raw oracle: unreduced exhaustive search
// ---------------------------------------------------------------------------

struct RawCtx {
    univ: Vec<u64>,
    full: u64,
    s: u32,
    total_cap: u64,
}

fn raw_dfs(ctx: &RawCtx, level: u32, prev_sum: u64, reach: &[u64], best: &mut u64) {
    let nsets = ctx.univ.len() as u64;
    if level == ctx.s {
        // only the largest admissible final family matters for the value
        let mut allowed = 0u64;
        'sets: for &set in &ctx.univ {
            for &r in reach {
                if r | set == ctx.full {
                    continue 'sets;
                }
            }
            allowed += 1;
        }
        if allowed > 0 {
            *best = (*best).max(prev_sum + allowed);
        }
        return;
    }
    let limit: u64 = 1u64 << ctx.univ.len();
    for bitmap in 1..limit {
        let size = bitmap.count_ones() as u64;
        let optimistic = (prev_sum + size + (ctx.s - level) as u64 * nsets).min(ctx.total_cap);
        if optimistic <= *best {
            continue;
        }
        let mut next: Vec<u64> = Vec::with_capacity(reach.len() * 2);
        for &r in reach {
            for (i, &set) in ctx.univ.iter().enumerate() {
                if bitmap >> i & 1 == 1 {
                    next.push(r | set);
                }
            }
        }
        next.sort_unstable();
        next.dedup();
        if next.binary_search(&ctx.full).is_ok() {
            continue;
        }
        raw_dfs(ctx, level + 1, prev_sum + size, &next, best);
    }
}

/// Raw exhaustive oracle: exact maximum of `Σ |F_i|` over all non-empty
/// tuples, without the shifted/nested reduction. Only value bounds prune.
pub fn max_sum_raw(n: u32, k: u32, s: u32, use_circle_bound: bool) -> Result<u64> {
    guard_params(n, k, s)?;
    let univ = all_k_subsets(n, k);
    if univ.len() > MAX_RAW_UNIVERSE_SETS {
        return Err(Error::InvalidParameter(format!(
            "raw oracle budget exceeded: C({n}, {k}) = {}",
            univ.len()
        )));
    }
    let nsets = univ.len() as u64;
    let total_cap = if use_circle_bound {
        s as u64 * nsets
    } else {
        (s as u64 + 1) * nsets
    };
    let ctx = RawCtx { univ, full: full_mask(n), s, total_cap };
    let mut best = star_sum(n, k, s); // star tuple is always feasible
    raw_dfs(&ctx, 0, 0, &[0], &mut best);
    Ok(best)
}

// ---------------------------------------------------------------------------
// Main-theorem verification
// ---------------------------------------------------------------------------

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MainTheoremReport {
    pub n: u32,
    pub k: u32,
    pub s: u32,
    pub ell: u32,
    pub max_sum: u64,
    pub star_sum: u64,
    pub value_matches: bool,
    /// Every maximizer is a tuple of s+1 identical star families.
    pub uniqueness: bool,
    /// True when uniqueness was checked by full enumeration in the unreduced
    /// space; false when only shifted-space maximizers could be checked.
    pub uniqueness_exhaustive: bool,
    pub holds: bool,
}

/// The common avoided-element bit when every prefix family equals the same
/// star family, else `None`.
fn star_prefix_signature(univ: &[u64], full: u64, prefix: &[u64]) -> Option<u64> {
    let first = prefix[0];
    if prefix.iter().any(|&b| b != first) {
        return None;
    }
    let union = (0..univ.len())
        .filter(|&i| first >> i & 1 == 1)
        .fold(0u64, |m, i| m | univ[i]);
    let missing = !union & full;
    if missing == 0 {
        return None;
    }
    let avoid_bit = missing & missing.wrapping_neg();
    let star_bitmap = (0..univ.len())
        .filter(|&i| univ[i] & avoid_bit == 0)
        .fold(0u64, |b, i| b | 1u64 << i);
    (first == star_bitmap).then_some(avoid_bit)
}

/// Walks all unreduced maximizer prefixes `(F_0, ..., F_{s-1})`; reports
/// false as soon as some maximizer completion is not a star tuple.
#[allow(clippy::too_many_arguments)]
fn all_maximizers_are_stars(
    univ: &[u64],
    full: u64,
    s: u32,
    target: u64,
    level: u32,
    prefix: &mut Vec<u64>,
    prev_sum: u64,
    reach: &[u64],
) -> bool {
    let nsets = univ.len() as u64;
    if level == s {
        let needed = target - prev_sum;
        let mut allowed = 0u64;
        'sets: for (i, &set) in univ.iter().enumerate() {
            for &r in reach {
                if r | set == full {
                    continue 'sets;
                }
            }
            allowed |= 1u64 << i;
        }
        let navail = allowed.count_ones() as u64;
        if needed == 0 || needed > navail {
            return true; // no maximizer completes this prefix
        }
        // maximizers exist: F_s is any `needed`-subset of the allowed sets.
        // A star tuple needs the prefix to be s copies of one star family and
        // the completion forced to that same star.
        let Some(avoid_bit) = star_prefix_signature(univ, full, prefix) else {
            return false;
        };
        let star_bitmap = (0..univ.len())
            .filter(|&i| univ[i] & avoid_bit == 0)
            .fold(0u64, |b, i| b | 1u64 << i);
        allowed == star_bitmap && needed == navail
    } else {
        let limit: u64 = 1u64 << univ.len();
        for bitmap in 1..limit {
            let size = bitmap.count_ones() as u64;
            if prev_sum + size + (s - level) as u64 * nsets < target {
                continue;
            }
            let mut next: Vec<u64> = Vec::with_capacity(reach.len() * 2);
            for &r in reach {
                for (i, &set) in univ.iter().enumerate() {
                    if bitmap >> i & 1 == 1 {
                        next.push(r | set);
                    }
                }
            }
            next.sort_unstable();
            next.dedup();
            if next.binary_search(&full).is_ok() {
                continue;
            }
            prefix.push(bitmap);
            let ok = all_maximizers_are_stars(
                univ,
                full,
                s,
                target,
                level + 1,
                prefix,
                prev_sum + size,
                &next,
            );
            prefix.pop();
            if !ok {
                return false;
            }
        }
        true
    }
}

/// Verifies the extremal statement at `(n, k, s)` with `s >= 4ℓ`,
/// `ℓ = n - sk`: the maximum equals `(s+1) C(n-1, k)` and every maximizer is
/// a tuple of identical star families.
pub fn verify_main_theorem(n: u32, k: u32, s: u32) -> Result<MainTheoremReport> {
    guard_params(n, k, s)?;
    let ell = n - s * k;
    if s < 4 * ell {
        return Err(Error::Precondition(format!(
            "hypothesis requires s >= 4ℓ, got s = {s}, ℓ = {ell}"
        )));
    }
    let result = max_sum_search(n, k, s, &SearchOpts::default())?;
    let value_matches = result.max_sum == result.star_sum;

    let univ = all_k_subsets(n, k);
    let (uniqueness, uniqueness_exhaustive) = if !value_matches {
        (false, true)
    } else if univ.len() <= 12 {
        let mut prefix = Vec::new();
        let ok = all_maximizers_are_stars(
            &univ,
            full_mask(n),
            s,
            result.max_sum,
            0,
            &mut prefix,
            0,
            &[0],
        );
        (ok, true)
    } else {
        // shifted-space maximizers only: each certificate chain must be s+1
        // copies of one star family
        let ok = result.certificates.iter().all(|t| {
            let fams = t.families();
            fams.windows(2).all(|w| w[0] == w[1]) && fams[0].star_signature().is_some()
        });
        (ok, false)
    };

    Ok(MainTheoremReport {
        n,
        k,
        s,
        ell,
        max_sum: result.max_sum,
        star_sum: result.star_sum,
        value_matches,
        uniqueness,
        uniqueness_exhaustive,
        holds: value_matches && uniqueness,
    })
}

// ---------------------------------------------------------------------------
// Question 4.1 exploration
// ---------------------------------------------------------------------------

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Question41Report {
    pub n: u32,
    pub k: u32,
    pub s: u32,
    pub ell: u32,
    pub star_candidate: String,
    pub asymmetric_candidate: String,
    pub candidate_max: String,
    pub exact_max: u64,
    /// Whether the exact maximum equals the larger candidate. Reported, not
    /// asserted: the question is open.
    pub agrees: bool,
    pub nodes_explored: u64,
    pub nodes_pruned: u64,
}

/// Compares the exact maximum with
/// `max{(s+1)C(n-1,k), 1 + sC(n,k) - Σ_{i=0}^{k-ℓ} C(k,i)C(n-k,k-i)}`
/// for `0 < ℓ < k`.
pub fn explore_question41(n: u32, k: u32, s: u32) -> Result<Question41Report> {
    guard_params(n, k, s)?;
    let ell = n - s * k;
    if ell >= k {
        return Err(Error::Precondition(format!(
            "question requires 0 < ℓ < k, got ℓ = {ell}, k = {k}"
        )));
    }
    let star_candidate = binom_u((n - 1) as u64, k as u64) * crate::Int::from(s + 1);
    let mut asym = crate::Int::from(1) + crate::Int::from(s) * binom_u(n as u64, k as u64);
    for i in 0..=(k - ell) as u64 {
        asym -= binom_u(k as u64, i) * binom_u((n - k) as u64, (k as u64) - i);
    }
    let candidate_max = star_candidate.clone().max(asym.clone());
    let result = max_sum_search(n, k, s, &SearchOpts::default())?;
    let agrees = crate::Int::from(result.max_sum) == candidate_max;
    Ok(Question41Report {
        n,
        k,
        s,
        ell,
        star_candidate: star_candidate.to_string(),
        asymmetric_candidate: asym.to_string(),
        candidate_max: candidate_max.to_string(),
        exact_max: result.max_sum,
        agrees,
        nodes_explored: result.nodes_explored,
        nodes_pruned: result.nodes_pruned,
    })
}
