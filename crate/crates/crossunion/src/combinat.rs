//! Exact and real-extended binomial arithmetic.
//!
//! Everything downstream of this module that decides a logical predicate
//! works with [`Int`] / [`Rational`]; the real-valued extension
//! `C(x, k) = x(x-1)...(x-k+1)/k!` exists because the shadow bound is stated
//! for a real argument `x`.

use num_bigint::BigInt;
use num_traits::{FromPrimitive, Num, One, ToPrimitive, Zero};

use crate::{Error, Int, Rational, Real, Result};

/// C(a, b) as an exact integer. Returns 0 when `b > a`, rejects negatives.
pub fn binom(a: i64, b: i64) -> Result<Int> {
    if a < 0 || b < 0 {
        return Err(Error::InvalidParameter(format!(
            "binom({a}, {b}): negative input"
        )));
    }
    Ok(binom_u(a as u64, b as u64))
}

/// C(a, b) for unsigned arguments; 0 when `b > a`.
pub fn binom_u(a: u64, b: u64) -> Int {
    if b > a {
        return Int::zero();
    }
    let b = b.min(a - b);
    let mut res = Int::one();
    for i in 0..b {
        // exact: the running product of j consecutive integers is divisible by j!
        res = res * Int::from(a - i) / Int::from(i + 1);
    }
    res
}

/// Pascal-triangle table of C(a, b) for `0 <= b <= a <= n_max`.
///
/// Immutable after construction; shareable across threads.
#[derive(Debug, Clone)]
pub struct BinomTable {
    n_max: usize,
    rows: Vec<Vec<Int>>,
}

impl BinomTable {
    pub fn new(n_max: usize) -> Self {
        let mut rows: Vec<Vec<Int>> = Vec::with_capacity(n_max + 1);
        for a in 0..=n_max {
            let mut row = vec![Int::one(); a + 1];
            for b in 1..a {
                row[b] = &rows[a - 1][b - 1] + &rows[a - 1][b];
            }
            rows.push(row);
        }
        BinomTable { n_max, rows }
    }

    pub fn n_max(&self) -> usize {
        self.n_max
    }

    /// C(a, b); 0 when `b > a`. Panics when `a > n_max`.
    pub fn get(&self, a: usize, b: usize) -> Int {
        if b > a {
            Int::zero()
        } else {
            self.rows[a][b].clone()
        }
    }
}

/// Generalized binomial `C(x, k) = x(x-1)...(x-k+1)/k!` over any scalar that
/// supports exact or floating arithmetic (`f64`, [`Rational`]).
pub fn binom_real<T>(x: T, k: u32) -> T
where
    T: Num + Clone + FromPrimitive,
{
    let mut res = T::one();
    for i in 0..k {
        let factor = x.clone() - T::from_u32(i).expect("small integer fits scalar");
        res = res * factor / T::from_u32(i + 1).expect("small integer fits scalar");
    }
    res
}

/// [`binom_real`] at an exact rational point.
pub fn binom_rational(x: &Rational, k: u32) -> Rational {
    binom_real(x.clone(), k)
}

/// Solves `C(x, k) = m` for real `x` on the interval `[lo, hi]` by bisection.
///
/// `C(·, k)` is strictly increasing on `[k, ∞)` for `k >= 1`, so the root is
/// unique whenever it lies in the bracket. 200 fixed iterations; no
/// tolerance-driven early exit, so results are deterministic.
pub fn solve_binom_x_on(m: &Int, k: u32, lo: Real, hi: Real) -> Result<Real> {
    if k == 0 {
        return Err(Error::InvalidParameter("solve_binom_x: k must be >= 1".into()));
    }
    let target = m
        .to_f64()
        .ok_or_else(|| Error::InvalidParameter("solve_binom_x: m out of f64 range".into()))?;
    if target < 1.0 {
        return Err(Error::InvalidParameter(format!(
            "solve_binom_x: m = {m} out of range"
        )));
    }
    let f = |x: Real| binom_real(x, k);
    if f(lo) > target || f(hi) < target {
        return Err(Error::InvalidParameter(format!(
            "solve_binom_x: m = {m} not bracketed by [{lo}, {hi}] at k = {k}"
        )));
    }
    let (mut lo, mut hi) = (lo, hi);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if f(mid) < target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Solves `C(x, k) = m` for `x ∈ [k, n-1]`, the bracket used when `m` counts
/// a family known to be at most `C(n-1, k)` large.
pub fn solve_binom_x(m: &Int, k: u32, n: u32) -> Result<Real> {
    solve_binom_x_on(m, k, k as Real, (n - 1) as Real)
}

/// Bracket for `2 atanh(x)` via the odd power series: partial sums are lower
/// bounds, the tail is dominated by a geometric series. Needs `0 <= x < 1`.
fn atanh2_bracket(x: &Rational, terms: usize) -> (Rational, Rational) {
    let x2 = x * x;
    let mut sum = Rational::zero();
    let mut pow = x.clone();
    for j in 0..terms {
        sum += &pow / Rational::from_integer(BigInt::from(2 * j as u64 + 1));
        pow *= &x2;
    }
    // tail: sum_{j>=terms} x^(2j+1)/(2j+1) <= x^(2*terms+1) / (1 - x^2)
    let tail = &pow / (Rational::one() - &x2);
    let two = Rational::from_integer(BigInt::from(2));
    (&two * &sum, &two * (&sum + &tail))
}

/// Certified rational bracket `[lo, hi]` with `lo <= ln(k) <= hi`.
///
/// Writes `ln k = m ln 2 + ln(k / 2^m)` with `k / 2^m ∈ [1, 2)`, so every
/// series argument `(r-1)/(r+1)` is at most 1/3 and the bracket tightens
/// quickly. All arithmetic exact.
pub fn ln_bracket(k: u64, terms: usize) -> (Rational, Rational) {
    assert!(k >= 1);
    if k == 1 {
        return (Rational::zero(), Rational::zero());
    }
    let m = 63 - k.leading_zeros() as u64; // k / 2^m in [1, 2)
    let r = Rational::new(BigInt::from(k), BigInt::from(1u64 << m));
    let (ln2_lo, ln2_hi) = atanh2_bracket(&Rational::new(BigInt::from(1), BigInt::from(3)), terms);
    let xr = (&r - Rational::one()) / (&r + Rational::one());
    let (lr_lo, lr_hi) = atanh2_bracket(&xr, terms);
    let m = Rational::from_integer(BigInt::from(m));
    (&m * &ln2_lo + lr_lo, &m * &ln2_hi + lr_hi)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::ToPrimitive;
    use proptest::prelude::*;

    #[test]
    fn binom_examples() {
        assert_eq!(binom(5, 2).unwrap(), Int::from(10));
        assert_eq!(binom(7, 0).unwrap(), Int::from(1));
        assert_eq!(binom(4, 6).unwrap(), Int::from(0));
        assert!(binom(-1, 2).is_err());
        assert!(binom(3, -2).is_err());
    }

    #[test]
    fn table_matches_product_formula() {
        let t = BinomTable::new(30);
        for a in 0..=30usize {
            for b in 0..=a {
                assert_eq!(t.get(a, b), binom_u(a as u64, b as u64));
            }
        }
        assert_eq!(t.get(3, 5), Int::zero());
    }

    #[test]
    fn binom_real_examples() {
        assert_eq!(binom_real(2.5f64, 2), 1.875);
        assert_eq!(binom_real(3.0f64, 2), 3.0);
        assert_eq!(binom_real(17.25f64, 0), 1.0);
    }

    #[test]
    fn binom_real_rational_agrees_with_integer_binom() {
        for a in 0..=20i64 {
            for k in 0..=a as u32 {
                let x = Rational::from_integer(BigInt::from(a));
                let v = binom_rational(&x, k);
                assert!(v.is_integer());
                assert_eq!(v.to_integer(), binom(a, k as i64).unwrap());
            }
        }
    }

    #[test]
    fn solve_binom_x_trivial_points() {
        let x = solve_binom_x(&Int::from(3), 2, 10).unwrap();
        assert!((x - 3.0).abs() < 1e-10);
        let x = solve_binom_x(&Int::from(1), 4, 9).unwrap();
        assert!((x - 4.0).abs() < 1e-10);
    }

    #[test]
    fn solve_binom_x_quadratic_oracle() {
        // C(x,2) = 4  <=>  x^2 - x - 8 = 0  <=>  x = (1 + sqrt(33))/2
        let expected = (1.0 + 33.0f64.sqrt()) / 2.0;
        let x = solve_binom_x(&Int::from(4), 2, 10).unwrap();
        assert!((x - expected).abs() < 1e-12, "x = {x}, expected {expected}");
    }

    #[test]
    fn solve_round_trip() {
        for m in 1..=120u64 {
            let x = solve_binom_x(&Int::from(m), 3, 12).unwrap_or_else(|_| {
                // m > C(11,3) is out of the bracket by contract
                panic!("m = {m} should be solvable")
            });
            let back = binom_real(x, 3);
            assert!((back - m as f64).abs() <= 1e-12 * m as f64);
        }
    }

    #[test]
    fn ln_bracket_encloses_ln() {
        for k in [2u64, 3, 10, 60, 1000] {
            let (lo, hi) = ln_bracket(k, 40);
            let truth = (k as f64).ln();
            assert!(lo.to_f64().unwrap() <= truth + 1e-12);
            assert!(hi.to_f64().unwrap() >= truth - 1e-12);
            assert!((&hi - &lo).to_f64().unwrap() < 1e-6);
        }
    }

    proptest! {
        #[test]
        fn solver_monotone(m1 in 1u64..100, m2 in 1u64..100) {
            prop_assume!(m1 < m2);
            let x1 = solve_binom_x(&Int::from(m1), 3, 12);
            let x2 = solve_binom_x(&Int::from(m2), 3, 12);
            if let (Ok(x1), Ok(x2)) = (x1, x2) {
                prop_assert!(x1 < x2);
            }
        }

        #[test]
        fn real_matches_exact_on_integers(a in 0u32..40, k in 0u32..40) {
            let v = binom_real(a as f64, k);
            let exact = binom_u(a as u64, k as u64).to_f64().unwrap();
            prop_assert!((v - exact).abs() <= 1e-9 * exact.max(1.0));
        }
    }
}
