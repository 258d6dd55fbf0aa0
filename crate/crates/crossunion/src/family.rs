//! Bitmask set families over a ground set `[n]` with `n <= 64`, and the
//! property checkers built on them: cross-union, r-wise union, `U(s+1, q)`,
//! complement duality, and star recognition.
//!
//! A k-subset of `[n]` is an n-bit mask; within a fixed cardinality, numeric
//! order of masks is exactly colexicographic order of the sets, so families
//! keep their member list sorted numerically.

use std::collections::HashSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::combinat::binom_u;
use crate::{Error, Result};

/// Hard cap on the universe: one machine word.
pub const MAX_UNIVERSE: u32 = 64;
/// Guard for enumeration-heavy operations (transversal reachability).
pub const MAX_ENUM_UNIVERSE: u32 = 24;

/// Mask of the full ground set `[n]`.
pub fn full_mask(n: u32) -> u64 {
    if n == 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

/// Mask from 1-based elements.
pub fn mask_of(elems: &[u32]) -> u64 {
    elems.iter().fold(0u64, |m, &e| m | (1u64 << (e - 1)))
}

/// 1-based elements of a mask, increasing.
pub fn elems_of(mask: u64) -> Vec<u32> {
    (0..64).filter(|b| mask >> b & 1 == 1).map(|b| b + 1).collect()
}

/// All k-subsets of `[n]` as masks in colexicographic (numeric) order.
pub fn all_k_subsets(n: u32, k: u32) -> Vec<u64> {
    assert!(n <= MAX_UNIVERSE && k <= n);
    if k == 0 {
        return vec![0];
    }
    let mut out = Vec::new();
    let mut v = full_mask(k);
    let limit = full_mask(n);
    while v <= limit {
        out.push(v);
        // Gosper's hack: next mask with the same popcount
        let t = v | (v - 1);
        let next = (t + 1) | (((!t & t.wrapping_add(1)) - 1) >> (v.trailing_zeros() + 1));
        if next <= v {
            break;
        }
        v = next;
    }
    out
}

/// A k-uniform family of subsets of `[n]`, stored as sorted deduplicated masks.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Family {
    n: u32,
    k: u32,
    sets: Vec<u64>,
}

impl Family {
    pub fn new(n: u32, k: u32, mut sets: Vec<u64>) -> Result<Self> {
        if n == 0 || n > MAX_UNIVERSE {
            return Err(Error::InvalidParameter(format!("universe n = {n} out of range")));
        }
        if k > n {
            return Err(Error::InvalidParameter(format!("k = {k} exceeds n = {n}")));
        }
        let limit = full_mask(n);
        for &s in &sets {
            if s & !limit != 0 {
                return Err(Error::InvalidParameter(format!(
                    "set {:?} not contained in [{n}]",
                    elems_of(s)
                )));
            }
            if s.count_ones() != k {
                return Err(Error::InvalidParameter(format!(
                    "set {:?} is not a {k}-set",
                    elems_of(s)
                )));
            }
        }
        sets.sort_unstable();
        sets.dedup();
        Ok(Family { n, k, sets })
    }

    pub fn from_sets(n: u32, k: u32, sets: &[&[u32]]) -> Result<Self> {
        Family::new(n, k, sets.iter().map(|s| mask_of(s)).collect())
    }

    /// The complete family `C([n], k)`.
    pub fn full(n: u32, k: u32) -> Self {
        Family::new(n, k, all_k_subsets(n, k)).expect("full family is valid")
    }

    /// The star `C([n] \ {avoid}, k)`: all k-sets missing one fixed element.
    pub fn star(n: u32, k: u32, avoid: u32) -> Self {
        assert!((1..=n).contains(&avoid) && k <= n - 1);
        let bit = 1u64 << (avoid - 1);
        let sets = all_k_subsets(n, k).into_iter().filter(|s| s & bit == 0).collect();
        Family::new(n, k, sets).expect("star family is valid")
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn len(&self) -> usize {
        self.sets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sets.is_empty()
    }

    pub fn masks(&self) -> &[u64] {
        &self.sets
    }

    pub fn contains(&self, mask: u64) -> bool {
        self.sets.binary_search(&mask).is_ok()
    }

    /// `{[n] \ F : F ∈ self}`, an (n-k)-uniform family.
    pub fn complement_dual(&self) -> Family {
        let limit = full_mask(self.n);
        let sets = self.sets.iter().map(|&s| !s & limit).collect();
        Family::new(self.n, self.n - self.k, sets).expect("complement stays in universe")
    }

    /// Returns `i` when the family equals the star `C([n] \ {i}, k)`.
    pub fn star_signature(&self) -> Option<u32> {
        let expect = binom_u((self.n - 1) as u64, self.k as u64);
        if crate::Int::from(self.sets.len()) != expect {
            return None;
        }
        let union = self.sets.iter().fold(0u64, |m, &s| m | s);
        let missing = !union & full_mask(self.n);
        // the size pins the family: C(n-1, k) sets all avoiding i must be the star
        (1..=self.n).find(|i| missing >> (i - 1) & 1 == 1)
    }

    /// No `r` members (repetition allowed) cover `[n]`.
    pub fn is_r_wise_union(&self, r: u32) -> bool {
        assert!(r >= 1);
        let fams: Vec<&Family> = std::iter::repeat(self).take(r as usize).collect();
        covering_transversal(&fams).is_none()
    }

    /// Family text format: header `n=<n> k=<k>`, one set per line as
    /// comma-separated 1-based elements in increasing order.
    pub fn to_text(&self) -> String {
        let mut out = format!("n={} k={}\n", self.n, self.k);
        for &s in &self.sets {
            let elems: Vec<String> = elems_of(s).iter().map(|e| e.to_string()).collect();
            out.push_str(&elems.join(","));
            out.push('\n');
        }
        out
    }

    pub fn parse_text(text: &str) -> Result<Family> {
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let header = lines
            .next()
            .ok_or_else(|| Error::Parse("empty family file".into()))?;
        let mut n = None;
        let mut k = None;
        for tok in header.split_whitespace() {
            if let Some(v) = tok.strip_prefix("n=") {
                n = Some(v.parse::<u32>().map_err(|e| Error::Parse(e.to_string()))?);
            } else if let Some(v) = tok.strip_prefix("k=") {
                k = Some(v.parse::<u32>().map_err(|e| Error::Parse(e.to_string()))?);
            } else {
                return Err(Error::Parse(format!("unexpected header token {tok:?}")));
            }
        }
        let n = n.ok_or_else(|| Error::Parse("missing n= in header".into()))?;
        let k = k.ok_or_else(|| Error::Parse("missing k= in header".into()))?;
        let mut sets = Vec::new();
        for line in lines {
            let mut elems = Vec::new();
            for part in line.trim().split(',') {
                let e: u32 = part.trim().parse().map_err(|_| {
                    Error::Parse(format!("bad element {part:?} in line {line:?}"))
                })?;
                if e == 0 || e > n {
                    return Err(Error::Parse(format!("element {e} out of [1, {n}]")));
                }
                if let Some(&last) = elems.last() {
                    if e <= last {
                        return Err(Error::Parse(format!(
                            "elements not strictly increasing in line {line:?}"
                        )));
                    }
                }
                elems.push(e);
            }
            sets.push(mask_of(&elems));
        }
        Family::new(n, k, sets)
    }
}

impl fmt::Debug for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sets: Vec<Vec<u32>> = self.sets.iter().map(|&s| elems_of(s)).collect();
        f.debug_struct("Family")
            .field("n", &self.n)
            .field("k", &self.k)
            .field("sets", &sets)
            .finish()
    }
}

#[derive(Serialize, Deserialize)]
struct FamilyRepr {
    n: u32,
    k: u32,
    sets: Vec<String>,
}

impl Serialize for Family {
    fn serialize<S: serde::Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        let sets = self
            .sets
            .iter()
            .map(|&s| {
                elems_of(s)
                    .iter()
                    .map(|e| e.to_string())
                    .collect::<Vec<_>>()
                    .join(",")
            })
            .collect();
        FamilyRepr { n: self.n, k: self.k, sets }.serialize(ser)
    }
}

impl<'de> Deserialize<'de> for Family {
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        let repr = FamilyRepr::deserialize(de)?;
        let mut sets = Vec::with_capacity(repr.sets.len());
        for line in &repr.sets {
            let elems: std::result::Result<Vec<u32>, _> =
                line.split(',').map(|p| p.trim().parse::<u32>()).collect();
            let elems = elems.map_err(serde::de::Error::custom)?;
            sets.push(mask_of(&elems));
        }
        Family::new(repr.n, repr.k, sets).map_err(serde::de::Error::custom)
    }
}

/// An ordered tuple `(F_0, ..., F_s)` of non-empty k-uniform families over a
/// common `(n, k)`, the object carrying the cross-union property.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilyTuple {
    n: u32,
    k: u32,
    families: Vec<Family>,
}

impl FamilyTuple {
    pub fn new(families: Vec<Family>) -> Result<Self> {
        if families.len() < 2 {
            return Err(Error::InvalidParameter(
                "a tuple needs at least two families (s >= 1)".into(),
            ));
        }
        let n = families[0].n;
        let k = families[0].k;
        if k == 0 {
            return Err(Error::InvalidParameter("tuple members must be nonempty sets".into()));
        }
        for f in &families {
            if f.n != n || f.k != k {
                return Err(Error::InvalidParameter(
                    "families must share a common (n, k)".into(),
                ));
            }
            if f.is_empty() {
                return Err(Error::InvalidParameter("families must be non-empty".into()));
            }
        }
        Ok(FamilyTuple { n, k, families })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    /// s, the number of families minus one.
    pub fn s(&self) -> u32 {
        self.families.len() as u32 - 1
    }

    pub fn families(&self) -> &[Family] {
        &self.families
    }

    pub fn size_sum(&self) -> u64 {
        self.families.iter().map(|f| f.len() as u64).sum()
    }

    /// No transversal `A_0 ∈ F_0, ..., A_s ∈ F_s` has union `[n]`.
    pub fn is_cross_union(&self) -> bool {
        let fams: Vec<&Family> = self.families.iter().collect();
        covering_transversal(&fams).is_none()
    }

    /// `U(s+1, q)`: every transversal union has size at most `q`.
    pub fn u_property(&self, q: u32) -> bool {
        assert!(q <= self.n);
        let fams: Vec<&Family> = self.families.iter().collect();
        max_transversal_union(&fams) <= q
    }

    /// Nestedness `F_0 ⊆ F_1 ⊆ ... ⊆ F_s`.
    pub fn is_nested(&self) -> bool {
        self.families
            .windows(2)
            .all(|w| w[0].masks().iter().all(|&m| w[1].contains(m)))
    }
}

/// Finds a transversal whose union covers `[n]`, if one exists. Families may
/// have mixed cardinalities but must share the universe.
///
/// Memoizes on (family index, accumulated union mask): the cross-union
/// question is reachability over union masks, with at most `(s+1) 2^n` states.
pub fn covering_transversal(fams: &[&Family]) -> Option<Vec<u64>> {
    assert!(!fams.is_empty());
    let n = fams[0].n;
    assert!(fams.iter().all(|f| f.n == n));
    assert!(n <= MAX_ENUM_UNIVERSE, "enumeration guarded at n <= {MAX_ENUM_UNIVERSE}");
    let full = full_mask(n);
    let mut dead: HashSet<(usize, u64)> = HashSet::new();
    let mut witness = Vec::new();
    fn dfs(
        fams: &[&Family],
        idx: usize,
        acc: u64,
        full: u64,
        dead: &mut HashSet<(usize, u64)>,
        witness: &mut Vec<u64>,
    ) -> bool {
        if idx == fams.len() {
            return acc == full;
        }
        // even with every remaining set taken, missing elements outside all
        // remaining unions can never be covered
        if dead.contains(&(idx, acc)) {
            return false;
        }
        for &s in fams[idx].masks() {
            witness.push(s);
            if dfs(fams, idx + 1, acc | s, full, dead, witness) {
                return true;
            }
            witness.pop();
        }
        dead.insert((idx, acc));
        false
    }
    if dfs(fams, 0, 0, full, &mut dead, &mut witness) {
        Some(witness)
    } else {
        None
    }
}

/// Cross-union check for a slice of families with possibly mixed set sizes.
pub fn is_cross_union_mixed(fams: &[&Family]) -> bool {
    covering_transversal(fams).is_none()
}

/// All accumulated-union masks reachable by complete transversals.
pub fn reachable_unions(fams: &[&Family]) -> HashSet<u64> {
    assert!(!fams.is_empty());
    let n = fams[0].n;
    assert!(n <= MAX_ENUM_UNIVERSE);
    let mut reach: HashSet<u64> = HashSet::new();
    reach.insert(0);
    for f in fams {
        let mut next = HashSet::with_capacity(reach.len());
        for &r in &reach {
            for &s in f.masks() {
                next.insert(r | s);
            }
        }
        reach = next;
    }
    reach
}

/// Largest transversal-union size over complete transversals.
pub fn max_transversal_union(fams: &[&Family]) -> u32 {
    reachable_unions(fams)
        .into_iter()
        .map(|m| m.count_ones())
        .max()
        .unwrap_or(0)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fam(n: u32, k: u32, sets: &[&[u32]]) -> Family {
        Family::from_sets(n, k, sets).unwrap()
    }

    #[test]
    fn subset_enumeration_counts() {
        for n in 1..=8u32 {
            for k in 0..=n {
                let subs = all_k_subsets(n, k);
                assert_eq!(
                    crate::Int::from(subs.len()),
                    binom_u(n as u64, k as u64)
                );
                // colex order is numeric order on masks
                assert!(subs.windows(2).all(|w| w[0] < w[1]));
            }
        }
    }

    #[test]
    fn cross_union_singletons() {
        let t = FamilyTuple::new(vec![
            fam(3, 1, &[&[1]]),
            fam(3, 1, &[&[1]]),
            fam(3, 1, &[&[2]]),
        ])
        .unwrap();
        assert!(t.is_cross_union());

        let t = FamilyTuple::new(vec![
            fam(3, 1, &[&[1]]),
            fam(3, 1, &[&[2]]),
            fam(3, 1, &[&[3]]),
        ])
        .unwrap();
        assert!(!t.is_cross_union());
    }

    #[test]
    fn cross_union_stars() {
        // two copies of C([3],2) inside [4]: element 4 is never covered
        let star = Family::star(4, 2, 4);
        let t = FamilyTuple::new(vec![star.clone(), star]).unwrap();
        assert!(t.is_cross_union());
    }

    #[test]
    fn complement_dual_examples() {
        let f = fam(3, 2, &[&[1, 2]]);
        assert_eq!(f.complement_dual(), fam(3, 1, &[&[3]]));

        let star = Family::star(4, 2, 4);
        let dual = star.complement_dual();
        let expect = fam(4, 2, &[&[1, 4], &[2, 4], &[3, 4]]);
        assert_eq!(dual, expect);
        assert_eq!(star.complement_dual().complement_dual(), star);
    }

    #[test]
    fn duality_with_cross_intersecting() {
        // cross-union <=> complemented tuple is cross-intersecting,
        // checked by double enumeration at small n
        for (n, k) in [(4u32, 2u32), (5, 2), (5, 3)] {
            let subs = all_k_subsets(n, k);
            let mut rng = 0x9e3779b97f4a7c15u64;
            for _ in 0..200 {
                let mut fams = Vec::new();
                for _ in 0..3 {
                    let mut sets = Vec::new();
                    for &s in &subs {
                        rng = rng.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                        if rng >> 33 & 1 == 1 {
                            sets.push(s);
                        }
                    }
                    if sets.is_empty() {
                        sets.push(subs[0]);
                    }
                    fams.push(Family::new(n, k, sets).unwrap());
                }
                let t = FamilyTuple::new(fams.clone()).unwrap();
                let duals: Vec<Family> = fams.iter().map(|f| f.complement_dual()).collect();
                // brute-force cross-intersecting check over all transversals
                let mut cross_int = true;
                'outer: for &a in duals[0].masks() {
                    for &b in duals[1].masks() {
                        for &c in duals[2].masks() {
                            if a & b & c == 0 {
                                cross_int = false;
                                break 'outer;
                            }
                        }
                    }
                }
                assert_eq!(t.is_cross_union(), cross_int);
            }
        }
    }

    #[test]
    fn r_wise_union_examples() {
        // C([n-1], k) is r-wise union whenever rk >= n: element n is never covered
        assert!(Family::star(5, 2, 5).is_r_wise_union(3));
        assert!(!Family::full(4, 2).is_r_wise_union(2));
        let f = fam(6, 2, &[&[1, 2], &[1, 3], &[2, 3], &[1, 4]]);
        assert!(f.is_r_wise_union(3));
    }

    #[test]
    fn r_wise_union_matches_copies() {
        for (n, k, r) in [(4u32, 2u32, 2u32), (5, 2, 2), (5, 2, 3), (6, 2, 3)] {
            let subs = all_k_subsets(n, k);
            let mut rng = 0xdeadbeefu64;
            for _ in 0..100 {
                let mut sets = Vec::new();
                for &s in &subs {
                    rng = rng.wrapping_mul(6364136223846793005).wrapping_add(1);
                    if rng >> 40 & 1 == 1 {
                        sets.push(s);
                    }
                }
                if sets.is_empty() {
                    sets.push(subs[0]);
                }
                let f = Family::new(n, k, sets).unwrap();
                let copies = FamilyTuple::new(vec![f.clone(); r as usize + 1]).unwrap();
                assert_eq!(f.is_r_wise_union(r + 1), copies.is_cross_union());
            }
        }
    }

    #[test]
    fn u_property_examples() {
        let t = FamilyTuple::new(vec![
            fam(3, 1, &[&[1]]),
            fam(3, 1, &[&[2]]),
            fam(3, 1, &[&[3]]),
        ])
        .unwrap();
        assert!(t.u_property(3));
        assert!(!t.u_property(2));
        // cross-union is exactly U(s+1, n-1)
        let star = Family::star(4, 2, 4);
        let t = FamilyTuple::new(vec![star.clone(), star]).unwrap();
        assert!(t.is_cross_union());
        assert!(t.u_property(3));
    }

    #[test]
    fn star_signature_examples() {
        let f = fam(5, 1, &[&[1], &[2], &[3], &[4]]);
        assert_eq!(f.star_signature(), Some(5));
        assert_eq!(Family::star(4, 2, 4).star_signature(), Some(4));
        let f = fam(4, 2, &[&[1, 2], &[3, 4]]);
        assert_eq!(f.star_signature(), None);
    }

    #[test]
    fn tuple_order_invariance() {
        let a = fam(4, 2, &[&[1, 2], &[1, 3]]);
        let b = fam(4, 2, &[&[2, 3]]);
        let c = Family::full(4, 2);
        let t1 = FamilyTuple::new(vec![a.clone(), b.clone(), c.clone()]).unwrap();
        let t2 = FamilyTuple::new(vec![c, a, b]).unwrap();
        assert_eq!(t1.is_cross_union(), t2.is_cross_union());
        for q in 0..=4 {
            assert_eq!(t1.u_property(q), t2.u_property(q));
        }
    }

    #[test]
    fn text_round_trip() {
        let f = fam(6, 3, &[&[1, 2, 4], &[2, 3, 6], &[1, 5, 6]]);
        let text = f.to_text();
        assert!(text.starts_with("n=6 k=3\n"));
        let back = Family::parse_text(&text).unwrap();
        assert_eq!(back, f);
        assert_eq!(back.to_text(), text);
    }

    #[test]
    fn text_rejects_malformed() {
        assert!(Family::parse_text("").is_err());
        assert!(Family::parse_text("n=4\n1,2\n").is_err());
        assert!(Family::parse_text("n=4 k=2\n2,1\n").is_err());
        assert!(Family::parse_text("n=4 k=2\n1,5\n").is_err());
        assert!(Family::parse_text("n=4 k=2\n1,2,3\n").is_err());
    }

    #[test]
    fn json_round_trip() {
        let f = fam(5, 2, &[&[1, 3], &[2, 5]]);
        let json = serde_json::to_string(&f).unwrap();
        let back: Family = serde_json::from_str(&json).unwrap();
        assert_eq!(back, f);
    }
}
