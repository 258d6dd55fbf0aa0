//! Shifting (compression) of set families and nested normalization of
//! cross-union tuples.
//!
//! The (i, j)-shift replaces j by i (i < j) in every member where the result
//! is not blocked by an existing member. Iterating over all pairs reaches a
//! shifted family: one closed under coordinatewise domination. Joint shifting
//! of a whole tuple preserves the cross-union property, and pairwise
//! intersection/union replacement turns a shifted tuple into a nested one
//! without changing the size sum.

use serde::{Deserialize, Serialize};

use crate::family::{Family, FamilyTuple};
use crate::{Error, Result};

/// Replay record for a run of shifts: the effective (i, j) pairs in
/// application order, plus the number of full sweeps performed.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ShiftTrace {
    pub applied: Vec<(u32, u32)>,
    pub rounds: u32,
}

fn shift_masks(sets: &[u64], i: u32, j: u32) -> Vec<u64> {
    let bi = 1u64 << (i - 1);
    let bj = 1u64 << (j - 1);
    let mut out: Vec<u64> = Vec::with_capacity(sets.len());
    for &s in sets {
        if s & bj != 0 && s & bi == 0 {
            let shifted = (s & !bj) | bi;
            // blocked when the shifted set is already a member
            if sets.binary_search(&shifted).is_ok() {
                out.push(s);
            } else {
                out.push(shifted);
            }
        } else {
            out.push(s);
        }
    }
    out.sort_unstable();
    out.dedup();
    out
}

/// The (i, j)-shift `S_ij` applied to every member, 1 <= i < j <= n.
/// Preserves the family size.
pub fn shift_ij(f: &Family, i: u32, j: u32) -> Result<Family> {
    if !(1 <= i && i < j && j <= f.n()) {
        return Err(Error::InvalidParameter(format!(
            "shift_ij: need 1 <= i < j <= n, got ({i}, {j}) with n = {}",
            f.n()
        )));
    }
    Family::new(f.n(), f.k(), shift_masks(f.masks(), i, j))
}

/// Sweeps all pairs i < j in lexicographic order until no shift changes the
/// family. The result is shifted; the trace replays to the same output.
pub fn shift_fixpoint(f: &Family) -> (Family, ShiftTrace) {
    let mut cur = f.clone();
    let mut trace = ShiftTrace::default();
    loop {
        let mut changed = false;
        for i in 1..f.n() {
            for j in (i + 1)..=f.n() {
                let next = shift_ij(&cur, i, j).expect("pair in range");
                if next != cur {
                    trace.applied.push((i, j));
                    cur = next;
                    changed = true;
                }
            }
        }
        trace.rounds += 1;
        if !changed {
            return (cur, trace);
        }
    }
}

/// Applies the same sweep of shifts simultaneously to every family of the
/// tuple until all of them are shifted. This joint form is the one that
/// preserves the cross-union property.
pub fn shift_tuple_fixpoint(t: &FamilyTuple) -> (FamilyTuple, ShiftTrace) {
    let n = t.n();
    let mut fams: Vec<Family> = t.families().to_vec();
    let mut trace = ShiftTrace::default();
    loop {
        let mut changed = false;
        for i in 1..n {
            for j in (i + 1)..=n {
                let next: Vec<Family> = fams
                    .iter()
                    .map(|f| shift_ij(f, i, j).expect("pair in range"))
                    .collect();
                if next != fams {
                    trace.applied.push((i, j));
                    fams = next;
                    changed = true;
                }
            }
        }
        trace.rounds += 1;
        if !changed {
            let out = FamilyTuple::new(fams).expect("shifting preserves tuple validity");
            return (out, trace);
        }
    }
}

/// Replays a trace on a family; used to certify traces.
pub fn replay(f: &Family, trace: &ShiftTrace) -> Result<Family> {
    let mut cur = f.clone();
    for &(i, j) in &trace.applied {
        cur = shift_ij(&cur, i, j)?;
    }
    Ok(cur)
}

/// Closed under coordinatewise domination: for every member and every single
/// replacement of an element j by a smaller absent i, the result is a member.
/// Single swaps generate the full domination order, so checking them suffices.
pub fn is_shifted(f: &Family) -> bool {
    for &s in f.masks() {
        for j in 1..=f.n() {
            let bj = 1u64 << (j - 1);
            if s & bj == 0 {
                continue;
            }
            for i in 1..j {
                let bi = 1u64 << (i - 1);
                if s & bi == 0 && !f.contains((s & !bj) | bi) {
                    return false;
                }
            }
        }
    }
    true
}

/// Normalizes a cross-union tuple into a nested one `G_0 ⊆ ... ⊆ G_s` with
/// the same size sum: joint shifting first, then repeated replacement of
/// `(F_u, F_v)` by `(F_u ∩ F_v, F_u ∪ F_v)` for all pairs u < v in
/// lexicographic order until stable.
pub fn nest_normalize(t: &FamilyTuple) -> Result<FamilyTuple> {
    if !t.is_cross_union() {
        return Err(Error::Precondition("nest_normalize: tuple is not cross-union".into()));
    }
    let (shifted, _) = shift_tuple_fixpoint(t);
    let n = shifted.n();
    let k = shifted.k();
    let mut fams: Vec<Vec<u64>> = shifted.families().iter().map(|f| f.masks().to_vec()).collect();
    loop {
        let mut changed = false;
        for u in 0..fams.len() {
            for v in (u + 1)..fams.len() {
                let inter: Vec<u64> = fams[u]
                    .iter()
                    .copied()
                    .filter(|m| fams[v].binary_search(m).is_ok())
                    .collect();
                if inter.len() == fams[u].len() {
                    continue; // already F_u ⊆ F_v
                }
                let mut union = fams[u].clone();
                union.extend_from_slice(&fams[v]);
                union.sort_unstable();
                union.dedup();
                fams[u] = inter;
                fams[v] = union;
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    let families: Result<Vec<Family>> = fams.into_iter().map(|s| Family::new(n, k, s)).collect();
    let out = FamilyTuple::new(families?)?;
    debug_assert!(out.is_nested());
    Ok(out)
}
