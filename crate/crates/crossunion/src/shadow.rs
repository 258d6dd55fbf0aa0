//! Shadows of uniform families and the Lovász form of the Kruskal–Katona
//! bound: if `|F| = C(x, k)` for real `x >= k`, then `|σ_ℓ(F)| >= C(x, ℓ)`.

use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use crate::combinat::{binom_real, solve_binom_x_on};
use crate::family::Family;
use crate::{Error, Int, Real, Result};

/// Conservative slack when comparing the integer shadow size against the
/// real-valued bound: compare against `ceil(bound - ROUNDING_SLACK)`.
pub const ROUNDING_SLACK: Real = 1e-9;

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ShadowReport {
    pub level: u32,
    pub shadow_size: u64,
    pub lovasz_x: Real,
    pub lovasz_bound: Real,
    pub holds: bool,
}

fn one_level_down(sets: &[u64]) -> Vec<u64> {
    let mut out: HashSet<u64> = HashSet::with_capacity(sets.len() * 4);
    for &s in sets {
        let mut rem = s;
        while rem != 0 {
            let bit = rem & rem.wrapping_neg();
            out.insert(s & !bit);
            rem &= rem - 1;
        }
    }
    out.into_iter().collect()
}

/// All ℓ-subsets contained in some member of `f`, for `1 <= ℓ <= k`.
pub fn shadow(f: &Family, level: u32) -> Result<Family> {
    if level < 1 || level > f.k() {
        return Err(Error::InvalidParameter(format!(
            "shadow level {level} out of [1, {}]",
            f.k()
        )));
    }
    let mut sets: Vec<u64> = f.masks().to_vec();
    for _ in level..f.k() {
        sets = one_level_down(&sets);
    }
    Family::new(f.n(), level, sets)
}

/// Computes the exact shadow size at `level` together with the Lovász bound
/// `C(x, level)` where `C(x, k) = |f|`.
///
/// `x` is solved on `[k, n]` rather than `[k, n-1]`: an arbitrary family may
/// be larger than `C(n-1, k)`, and the bound itself carries no such
/// restriction.
pub fn lovasz_check(f: &Family, level: u32) -> Result<ShadowReport> {
    if f.is_empty() {
        return Err(Error::Precondition("lovasz_check: family must be non-empty".into()));
    }
    let shadow_size = shadow(f, level)?.len() as u64;
    let x = solve_binom_x_on(&Int::from(f.len()), f.k(), f.k() as Real, f.n() as Real)?;
    let bound = binom_real(x, level);
    let holds = shadow_size as Real >= (bound - ROUNDING_SLACK).ceil();
    Ok(ShadowReport { level, shadow_size, lovasz_x: x, lovasz_bound: bound, holds })
}
