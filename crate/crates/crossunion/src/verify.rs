//! Exact-arithmetic verification of the closed-form inequalities and
//! constructions: every record is decided in big-rational arithmetic, never
//! floating point. Logarithms enter one sufficient condition only, and there
//! through certified rational brackets.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::One;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::combinat::{binom_rational, binom_u, ln_bracket};
use crate::family::{covering_transversal, mask_of, Family};
use crate::{Error, Int, Rational, Result};

/// One verified inequality instance. `holds ⇔ lhs ≥ rhs` in the record's
/// orientation (or exact equality for identity records); `strict ⇔ lhs > rhs`.
/// Both sides are exact rationals rendered as strings.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InequalityRecord {
    pub name: String,
    pub parameters: BTreeMap<String, String>,
    pub lhs: String,
    pub rhs: String,
    pub holds: bool,
    pub strict: bool,
}

fn rat(i: Int) -> Rational {
    Rational::from_integer(i)
}

fn rat_u(v: u64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

fn params(pairs: &[(&str, String)]) -> BTreeMap<String, String> {
    pairs.iter().map(|(k, v)| (k.to_string(), v.clone())).collect()
}

/// Both cases of the key counting inequality: with `n = ks + ℓ`,
///
/// `(s+1)C(n-1,k) - sC(n,k) + C(ks,k) >= (ℓ/k)C(n,k)`         (case i, k >= 2ℓ)
/// `(s+1)C(n-1,k) - sC(n,k) + C(ks,k) >= C((1-1/k)n + 1, k)`  (case ii, k < 2ℓ)
///
/// Returns both records; the one matching the `k` vs `2ℓ` split carries
/// `applicable = true`.
pub fn check_lemma_computation(k: u32, ell: u32, s: u32) -> Result<(InequalityRecord, InequalityRecord)> {
    if !(1 <= ell && ell <= k) {
        return Err(Error::Precondition(format!("need 1 <= ℓ <= k, got ℓ = {ell}, k = {k}")));
    }
    if s < 4 * ell {
        return Err(Error::Precondition(format!("need s >= 4ℓ, got s = {s}, ℓ = {ell}")));
    }
    let n = (k * s + ell) as u64;
    let (k64, s64) = (k as u64, s as u64);
    let lhs = rat(
        Int::from(s64 + 1) * binom_u(n - 1, k64) - Int::from(s64) * binom_u(n, k64)
            + binom_u(k64 * s64, k64),
    );

    let rhs_i = Rational::new(BigInt::from(ell), BigInt::from(k)) * rat(binom_u(n, k64));
    // (1 - 1/k)n + 1 = ((k-1)n + k) / k, an exact rational point
    let x = Rational::new(BigInt::from((k64 - 1) * n + k64), BigInt::from(k64));
    let rhs_ii = binom_rational(&x, k);

    let case_i_applies = k >= 2 * ell;
    let base = [
        ("k", k.to_string()),
        ("l", ell.to_string()),
        ("s", s.to_string()),
        ("n", n.to_string()),
    ];
    let mut p_i = params(&base);
    p_i.insert("applicable".into(), case_i_applies.to_string());
    let mut p_ii = params(&base);
    p_ii.insert("applicable".into(), (!case_i_applies).to_string());

    let rec = |name: &str, p: BTreeMap<String, String>, rhs: &Rational| InequalityRecord {
        name: name.to_string(),
        parameters: p,
        lhs: lhs.to_string(),
        rhs: rhs.to_string(),
        holds: &lhs >= rhs,
        strict: &lhs > rhs,
    };
    Ok((rec("lemma26_case_i", p_i, &rhs_i), rec("lemma26_case_ii", p_ii, &rhs_ii)))
}

/// The slice-comparison inequality at a rational point `x0 ∈ [k, n-1]`:
/// under hypothesis `C(x0,ℓ)/C(n,ℓ) <= (k/ℓ) C(x0,k)/C(n,k)`,
///
/// `C(x0,ℓ)/C(n,ℓ) >= C(x0,k)/C(n,k) + (k-ℓ)/n`,
///
/// with equality exactly when `ℓ = k` or `x0 = n-1`. When the hypothesis
/// fails, the record is marked `applicable = false` and holds vacuously.
pub fn check_different_slices(n: u32, k: u32, ell: u32, x0: &Rational) -> Result<InequalityRecord> {
    if !(1 <= ell && ell <= k && k < n) {
        return Err(Error::Precondition(format!(
            "need 1 <= ℓ <= k < n, got n = {n}, k = {k}, ℓ = {ell}"
        )));
    }
    if x0 < &rat_u(k as u64) || x0 > &rat_u((n - 1) as u64) {
        return Err(Error::Precondition(format!("x0 = {x0} outside [{k}, {}]", n - 1)));
    }
    let ratio_l = binom_rational(x0, ell) / rat(binom_u(n as u64, ell as u64));
    let ratio_k = binom_rational(x0, k) / rat(binom_u(n as u64, k as u64));
    let hypothesis =
        ratio_l <= Rational::new(BigInt::from(k), BigInt::from(ell)) * ratio_k.clone();
    let rhs = ratio_k + Rational::new(BigInt::from(k - ell), BigInt::from(n));

    let equality = ratio_l == rhs;
    let characterized = ell == k || x0 == &rat_u((n - 1) as u64);
    let holds = if hypothesis {
        ratio_l >= rhs && equality == characterized
    } else {
        true
    };
    Ok(InequalityRecord {
        name: "lemma27".into(),
        parameters: params(&[
            ("n", n.to_string()),
            ("k", k.to_string()),
            ("l", ell.to_string()),
            ("x0", x0.to_string()),
            ("applicable", hypothesis.to_string()),
            ("equality", equality.to_string()),
        ]),
        lhs: ratio_l.to_string(),
        rhs: rhs.to_string(),
        holds,
        strict: hypothesis && ratio_l > rhs,
    })
}

/// Decides `(s+1)(c+2) ln k < k` exactly, refining a certified rational
/// bracket of `ln k` until one side is certain (always terminates: `ln k` is
/// irrational for integer k >= 2, so the bracket cannot straddle forever).
fn intro_condition(k: u32, c: u32, s: u32) -> bool {
    debug_assert!(k >= 2);
    let factor = rat_u((s as u64 + 1) * (c as u64 + 2));
    let target = rat_u(k as u64);
    let mut terms = 16;
    loop {
        let (lo, hi) = ln_bracket(k as u64, terms);
        if &factor * &hi < target {
            return true;
        }
        if &factor * &lo >= target {
            return false;
        }
        terms *= 2;
    }
}

/// The asymmetric construction: `F_0 = {[k]}`,
/// `F_1 = {A : |A ∩ [k]| >= c+1}`, `F_2 = ... = F_s` the complete family,
/// on `n = sk + ℓ` with `ℓ = k - c`. Its size sum is
/// `1 + sC(n,k) - Σ_{i=0}^{c} C(k,i)C(n-k,k-i)`; the record compares it
/// against the star value `(s+1)C(n-1,k)` (holds ⇔ the construction ties or
/// beats the star). Also reports the sufficient condition
/// `s < k/((c+2) ln k) - 1` and certifies the tuple is cross-union:
/// exhaustively for small `n`, otherwise by the counting argument that any
/// transversal union has at most `sk + ℓ - 1` elements.
pub fn example13_sum(k: u32, c: u32, s: u32) -> Result<InequalityRecord> {
    if s < 2 || c < 1 || k <= c {
        return Err(Error::Precondition(format!(
            "need s >= 2, 1 <= c < k, got k = {k}, c = {c}, s = {s}"
        )));
    }
    let ell = k - c;
    let n = s as u64 * k as u64 + ell as u64;
    let (k64, s64) = (k as u64, s as u64);
    let mut sum = Int::one() + Int::from(s64) * binom_u(n, k64);
    for i in 0..=c as u64 {
        sum -= binom_u(k64, i) * binom_u(n - k64, k64 - i);
    }
    let star = Int::from(s64 + 1) * binom_u(n - 1, k64);

    let cross_union_mode = if n <= 12 {
        let n32 = n as u32;
        let f0 = Family::new(n32, k, vec![mask_of(&(1..=k).collect::<Vec<_>>())])?;
        let head = mask_of(&(1..=k).collect::<Vec<_>>());
        let f1 = Family::new(
            n32,
            k,
            crate::family::all_k_subsets(n32, k)
                .into_iter()
                .filter(|m| (m & head).count_ones() >= c + 1)
                .collect(),
        )?;
        let full = Family::full(n32, k);
        let mut fams = vec![f0, f1];
        fams.extend(std::iter::repeat_n(full, s as usize - 1));
        let refs: Vec<&Family> = fams.iter().collect();
        if covering_transversal(&refs).is_some() {
            return Err(Error::Precondition("construction failed cross-union check".into()));
        }
        "enumerated"
    } else {
        // |A_0 ∪ ... ∪ A_s| <= k + (ℓ-1) + (s-1)k = n - 1 < n
        "structural"
    };

    Ok(InequalityRecord {
        name: "example13".into(),
        parameters: params(&[
            ("k", k.to_string()),
            ("c", c.to_string()),
            ("s", s.to_string()),
            ("l", ell.to_string()),
            ("n", n.to_string()),
            ("intro_condition", intro_condition(k, c, s).to_string()),
            ("cross_union", cross_union_mode.to_string()),
        ]),
        lhs: sum.to_string(),
        rhs: star.to_string(),
        holds: sum >= star,
        strict: sum > star,
    })
}

/// The exact identity `(s+1) C(n-1,k) / C(n,k) = s - (k-ℓ)/n`, `n = ks + ℓ`.
pub fn check_eq1_identity(n: u32, k: u32, s: u32) -> Result<InequalityRecord> {
    if k * s >= n || n > k * (s + 1) {
        return Err(Error::Precondition(format!(
            "need n = ks + ℓ with 1 <= ℓ <= k, got n = {n}, k = {k}, s = {s}"
        )));
    }
    let ell = n - k * s;
    let lhs = rat(Int::from(s as u64 + 1) * binom_u((n - 1) as u64, k as u64))
        / rat(binom_u(n as u64, k as u64));
    let rhs = rat_u(s as u64) - Rational::new(BigInt::from(k - ell), BigInt::from(n));
    Ok(InequalityRecord {
        name: "eq1".into(),
        parameters: params(&[
            ("n", n.to_string()),
            ("k", k.to_string()),
            ("s", s.to_string()),
            ("l", ell.to_string()),
        ]),
        lhs: lhs.to_string(),
        rhs: rhs.to_string(),
        holds: lhs == rhs,
        strict: false,
    })
}

// ---------------------------------------------------------------------------
// Grid sweeps
// ---------------------------------------------------------------------------

/// Both-case records over `1 <= ℓ <= k <= k_max`, `s ∈ [4ℓ, 4ℓ + s_span]`.
pub fn lemma26_grid(k_max: u32, s_span: u32) -> Vec<InequalityRecord> {
    let points: Vec<(u32, u32, u32)> = (1..=k_max)
        .flat_map(|k| (1..=k).map(move |l| (k, l)))
        .flat_map(|(k, l)| (4 * l..=4 * l + s_span).map(move |s| (k, l, s)))
        .collect();
    points
        .par_iter()
        .map(|&(k, l, s)| {
            let (a, b) = check_lemma_computation(k, l, s).expect("grid point satisfies pre");
            if k >= 2 * l {
                a
            } else {
                b
            }
        })
        .collect()
}

/// Slice-inequality records on a rational `x0` grid across `[k, n-1]` for
/// `n ∈ {10, 20, ..., 60}`, `k <= 8`, all `ℓ <= k`.
pub fn lemma27_grid() -> Vec<InequalityRecord> {
    let mut points = Vec::new();
    for n in (10..=60).step_by(10) {
        for k in 1..=8.min(n - 1) {
            for l in 1..=k {
                for t in 0..=12u32 {
                    // x0 = k + t(n-1-k)/12
                    let x0 = rat_u(k as u64)
                        + Rational::new(BigInt::from(t * (n - 1 - k)), BigInt::from(12));
                    points.push((n, k, l, x0));
                }
            }
        }
    }
    points
        .par_iter()
        .map(|(n, k, l, x0)| check_different_slices(*n, *k, *l, x0).expect("x0 in range"))
        .collect()
}

/// Identity records for all `n = ks + ℓ` with `k <= k_max`, `s <= s_max`.
pub fn eq1_grid(k_max: u32, s_max: u32) -> Vec<InequalityRecord> {
    let points: Vec<(u32, u32, u32)> = (1..=k_max)
        .flat_map(|k| (1..=s_max).map(move |s| (k, s)))
        .flat_map(|(k, s)| (1..=k).map(move |l| (k * s + l, k, s)))
        .collect();
    points
        .par_iter()
        .map(|&(n, k, s)| check_eq1_identity(n, k, s).expect("grid point satisfies pre"))
        .collect()
}

// ---------------------------------------------------------------------------
// Emission
// ---------------------------------------------------------------------------

fn csv_quote(field: &str) -> String {
    if field.contains(['"', ',', '\n', ';']) {
        format!("\"{}\"", field.replace('"', "\"\""))
    } else {
        field.to_string()
    }
}

/// CSV with columns name, parameters, lhs, rhs, holds, strict; parameters as
/// `key=value` pairs joined by `;`.
pub fn records_to_csv(records: &[InequalityRecord]) -> String {
    let mut out = String::from("name,parameters,lhs,rhs,holds,strict\n");
    for r in records {
        let p = r
            .parameters
            .iter()
            .map(|(k, v)| format!("{k}={v}"))
            .collect::<Vec<_>>()
            .join(";");
        out.push_str(&format!(
            "{},{},{},{},{},{}\n",
            csv_quote(&r.name),
            csv_quote(&p),
            csv_quote(&r.lhs),
            csv_quote(&r.rhs),
            r.holds,
            r.strict
        ));
    }
    out
}

pub fn records_to_json(records: &[InequalityRecord]) -> String {
    serde_json::to_string_pretty(records).expect("records serialize")
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::ToPrimitive;

    fn r(v: i64) -> Rational {
        Rational::from_integer(BigInt::from(v))
    }

    #[test]
    fn lemma26_examples() {
        let (i, ii) = check_lemma_computation(4, 2, 8).unwrap();
        assert_eq!(i.parameters["applicable"], "true");
        assert!(i.holds);
        assert_eq!(ii.parameters["applicable"], "false");

        let (i, ii) = check_lemma_computation(3, 2, 8).unwrap();
        assert_eq!(i.parameters["applicable"], "false");
        assert_eq!(ii.parameters["applicable"], "true");
        assert!(ii.holds);

        // k = 1 < 2ℓ = 2 routes to case (ii)
        let (i, ii) = check_lemma_computation(1, 1, 4).unwrap();
        assert_eq!(i.parameters["applicable"], "false");
        assert_eq!(ii.parameters["applicable"], "true");
        assert!(ii.holds);

        assert!(check_lemma_computation(2, 3, 12).is_err());
        assert!(check_lemma_computation(4, 2, 7).is_err());
    }

    #[test]
    fn lemma26_hand_value() {
        // k = ℓ = 1, s = 4, n = 5: lhs = 5·4 - 4·5 + 4 = 4; case (ii) rhs = C(1,1)·... at x = 1
        let (_, ii) = check_lemma_computation(1, 1, 4).unwrap();
        assert_eq!(ii.lhs, "4");
        assert_eq!(ii.rhs, "1");
        assert!(ii.strict);
    }

    #[test]
    fn lemma27_equality_cases() {
        // ℓ = k: both sides identical
        let rec = check_different_slices(10, 3, 3, &r(5)).unwrap();
        assert_eq!(rec.parameters["applicable"], "true");
        assert_eq!(rec.parameters["equality"], "true");
        assert!(rec.holds);
        assert!(!rec.strict);

        // ℓ < k, x0 = n-1: gap is exactly (k-ℓ)/n
        let rec = check_different_slices(10, 3, 1, &r(9)).unwrap();
        assert_eq!(rec.parameters["equality"], "true");
        assert!(rec.holds);
        assert!(!rec.strict);

        // x0 = 10 fails hypothesis (6): C(10,2)/C(20,2) > 2·C(10,4)/C(20,4)
        let rec = check_different_slices(20, 4, 2, &r(10)).unwrap();
        assert_eq!(rec.parameters["applicable"], "false");
        assert!(rec.holds);
        assert!(!rec.strict);

        // interior point where the hypothesis holds: strict inequality
        let rec = check_different_slices(20, 4, 2, &r(18)).unwrap();
        assert_eq!(rec.parameters["applicable"], "true");
        assert!(rec.holds);
        assert!(rec.strict);

        assert!(check_different_slices(10, 3, 1, &r(2)).is_err());
        assert!(check_different_slices(10, 3, 4, &r(5)).is_err());
    }

    #[test]
    fn example13_small_and_large() {
        // (k,c,s) = (2,1,2): n = 5, sum = 12 < 18 = 3·C(4,2)
        let rec = example13_sum(2, 1, 2).unwrap();
        assert_eq!(rec.lhs, "12");
        assert_eq!(rec.rhs, "18");
        assert!(!rec.holds);
        assert_eq!(rec.parameters["cross_union"], "enumerated");
        assert_eq!(rec.parameters["intro_condition"], "false");

        // (k,c,s) = (60,1,3): n = 239, beats the star strictly
        let rec = example13_sum(60, 1, 3).unwrap();
        assert!(rec.holds);
        assert!(rec.strict);
        assert_eq!(rec.parameters["n"], "239");
        assert_eq!(rec.parameters["cross_union"], "structural");
        // 3 < 60/(3 ln 60) - 1
        assert_eq!(rec.parameters["intro_condition"], "true");

        assert!(example13_sum(2, 2, 2).is_err());
        assert!(example13_sum(2, 1, 1).is_err());
    }

    #[test]
    fn intro_condition_matches_float() {
        for (k, c, s) in [(2u32, 1u32, 2u32), (60, 1, 3), (100, 1, 5), (10, 2, 2), (1000, 3, 40)] {
            let float = ((s + 1) * (c + 2)) as f64 * (k as f64).ln() < k as f64;
            assert_eq!(intro_condition(k, c, s), float, "at ({k}, {c}, {s})");
        }
    }

    #[test]
    fn eq1_examples() {
        let rec = check_eq1_identity(5, 1, 4).unwrap();
        assert!(rec.holds);
        assert_eq!(rec.lhs, "4");

        let rec = check_eq1_identity(9, 2, 4).unwrap();
        assert!(rec.holds);
        assert_eq!(rec.lhs, "35/9");
        assert_eq!(rec.rhs, "35/9");

        assert!(check_eq1_identity(14, 3, 4).unwrap().holds);
        assert!(check_eq1_identity(10, 2, 5).is_err()); // ℓ = 0
    }

    #[test]
    fn small_grids_hold() {
        assert!(lemma26_grid(8, 8).iter().all(|r| r.holds));
        assert!(eq1_grid(6, 20).iter().all(|r| r.holds));
    }

    #[test]
    fn lemma27_grid_holds_everywhere() {
        let recs = lemma27_grid();
        assert!(recs.iter().all(|r| r.holds));
        // the grid exercises both applicable and vacuous points
        assert!(recs.iter().any(|r| r.parameters["applicable"] == "true" && r.strict));
        assert!(recs.iter().any(|r| r.parameters["equality"] == "true"));
    }

    #[test]
    fn emission_formats() {
        let rec = check_eq1_identity(9, 2, 4).unwrap();
        let csv = records_to_csv(&[rec.clone()]);
        let mut lines = csv.lines();
        assert_eq!(lines.next().unwrap(), "name,parameters,lhs,rhs,holds,strict");
        let row = lines.next().unwrap();
        assert!(row.starts_with("eq1,"));
        assert!(row.contains("35/9"));
        assert!(row.ends_with(",true,false"));

        let json = records_to_json(&[rec.clone()]);
        let back: Vec<InequalityRecord> = serde_json::from_str(&json).unwrap();
        assert_eq!(back, vec![rec]);
    }

    #[test]
    fn lemma26_rhs_case_ii_is_rational_product() {
        // spot check the rational point evaluation against a float computation
        let (_, ii) = check_lemma_computation(3, 2, 8).unwrap();
        let rhs: Rational = ii.rhs.parse::<BigInt>().map(Rational::from_integer).unwrap_or_else(
            |_| {
                let parts: Vec<&str> = ii.rhs.split('/').collect();
                Rational::new(parts[0].parse().unwrap(), parts[1].parse().unwrap())
            },
        );
        let n = 26.0f64;
        let x = (1.0 - 1.0 / 3.0) * n + 1.0;
        let float = x * (x - 1.0) * (x - 2.0) / 6.0;
        assert!((rhs.to_f64().unwrap() - float).abs() < 1e-9 * float);
    }
}
