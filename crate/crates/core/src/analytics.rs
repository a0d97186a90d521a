//! Entropy calculus and counting formulas behind the thresholds.
//!
//! * `H(δ)` is the binary entropy in bits.
//! * `f(δ) = 1 + 2δ + H(δ)` is the exponent of the number of
//!   `(x, y, u, v)` quadruples with `u, v` in the box of a pair at distance
//!   `δn`; it peaks at `δ = 4/5`, and `f(4/5)/4 ≈ 0.8305` is the weaker
//!   clique exponent.
//! * `δ*` solves `H(δ) = 2δ - 1` on `(1/2, 1)`, equivalently
//!   `δ = (1 + H(δ))/2`; `2^(-δ* n)` is the clique threshold.
//!
//! Tuple counts are over *ordered* tuples. An unordered multiset with
//! multiplicities `m_1, ..., m_r` corresponds to `(2k)! / (m_1! ... m_r!)`
//! ordered tuples.

use std::collections::HashMap;
use std::sync::OnceLock;

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::hypercube::Point;
use crate::sampling::VertexSet;
use crate::typicality;

fn check_unit(d: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&d) {
        return Err(Error::OutOfUnitInterval(d));
    }
    Ok(())
}

fn entropy_unchecked(d: f64) -> f64 {
    let term = |v: f64| if v <= 0.0 { 0.0 } else { -v * v.log2() };
    term(d) + term(1.0 - d)
}

pub fn entropy(d: f64) -> Result<f64> {
    check_unit(d)?;
    Ok(entropy_unchecked(d))
}

pub fn f_exponent(d: f64) -> Result<f64> {
    check_unit(d)?;
    Ok(1.0 + 2.0 * d + entropy_unchecked(d))
}

/// Maximizer of `f`: `f'(δ) = 2 + log2((1-δ)/δ)` vanishes at `δ = 4/5`.
pub fn argmax_f() -> f64 {
    0.8
}

/// Ternary search for the maximizer of `f` on `[0, 1]`, used to cross-check
/// the closed form.
pub fn argmax_f_numeric(tol: f64) -> f64 {
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    while hi - lo > tol {
        let m1 = lo + (hi - lo) / 3.0;
        let m2 = hi - (hi - lo) / 3.0;
        if 2.0 * m1 + entropy_unchecked(m1) < 2.0 * m2 + entropy_unchecked(m2) {
            lo = m1;
        } else {
            hi = m2;
        }
    }
    0.5 * (lo + hi)
}

fn delta_gap(d: f64) -> f64 {
    entropy_unchecked(d) - 2.0 * d + 1.0
}

/// Root of `H(δ) = 2δ - 1` in `(1/2, 1)` by bisection.
///
/// `g(δ) = H(δ) - 2δ + 1` is positive at `1/2` and negative at `1`; the
/// bracket is halved until it collapses to adjacent floats.
pub fn solve_delta() -> f64 {
    static DELTA: OnceLock<f64> = OnceLock::new();
    *DELTA.get_or_init(|| {
        let (mut lo, mut hi) = (0.5 + 1e-9, 1.0 - 1e-9);
        debug_assert!(delta_gap(lo) > 0.0 && delta_gap(hi) < 0.0);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if delta_gap(mid) > 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        if delta_gap(lo).abs() <= delta_gap(hi).abs() {
            lo
        } else {
            hi
        }
    })
}

#[derive(Clone, Copy, Debug, PartialEq, serde::Serialize)]
pub struct ThresholdConstants {
    pub delta_star: f64,
    pub f_max_arg: f64,
    pub f_max: f64,
    pub weak_exponent: f64,
}

impl ThresholdConstants {
    pub fn compute() -> Self {
        let delta_star = solve_delta();
        let f_max_arg = argmax_f();
        let f_max = 1.0 + 2.0 * f_max_arg + entropy_unchecked(f_max_arg);
        ThresholdConstants {
            delta_star,
            f_max_arg,
            f_max,
            weak_exponent: f_max / 4.0,
        }
    }

    /// `|H(δ*) - (2δ* - 1)|`.
    pub fn residual(&self) -> f64 {
        delta_gap(self.delta_star).abs()
    }
}

/// Limit on the number of ordered half-tuples enumerated by
/// [`count_averaging_tuples`].
pub const HALF_TUPLE_BUDGET: u64 = 10_000_000;

/// Number of ordered `2k`-tuples from `s` whose mean is `(x + y) / 2`.
///
/// All points must lie in the box of `(x, y)`; only the coordinates where
/// `x` and `y` differ are free, and on each of them exactly `k` entries of
/// the tuple must be 1. With `exclude_endpoints` the points `x` and `y`
/// are removed from `s` first.
pub fn count_averaging_tuples(
    s: &[Point],
    x: &Point,
    y: &Point,
    k: u32,
    exclude_endpoints: bool,
) -> Result<BigUint> {
    if k == 0 {
        return Err(Error::Config("k must be >= 1".into()));
    }
    let interval = crate::hypercube::Interval::spanned_by(x, y)?;
    let mut pool: Vec<u64> = Vec::with_capacity(s.len());
    for z in s {
        if !interval.contains(z) {
            return Err(Error::Config(format!("{z} lies outside the box of ({x}, {y})")));
        }
        if exclude_endpoints && (z == x || z == y) {
            continue;
        }
        pool.push(z.bits());
    }
    let free = interval.free_mask();
    let coords: Vec<u32> = (0..64).filter(|i| free >> i & 1 == 1).collect();
    let half = half_tuple_sums(&pool, &coords, k)?;
    let mut total = BigUint::zero();
    for (key, &count) in &half {
        let complement: Vec<u8> = key.iter().map(|&c| k as u8 - c).collect();
        if let Some(&other) = half.get(&complement) {
            total += BigUint::from(count as u128 * other as u128);
        }
    }
    Ok(total)
}

/// Ordered `k`-tuples of `pool` grouped by their per-coordinate one-counts.
fn half_tuple_sums(pool: &[u64], coords: &[u32], k: u32) -> Result<HashMap<Vec<u8>, u64>> {
    let mut map = HashMap::new();
    if pool.is_empty() {
        return Ok(map);
    }
    let size = (pool.len() as u64).checked_pow(k).unwrap_or(u64::MAX);
    if size > HALF_TUPLE_BUDGET || k > 255 {
        return Err(Error::BudgetExceeded {
            what: "ordered half-tuples",
            size,
            limit: HALF_TUPLE_BUDGET,
        });
    }
    let mut idx = vec![0usize; k as usize];
    loop {
        let mut key = vec![0u8; coords.len()];
        for &i in &idx {
            let z = pool[i];
            for (slot, &c) in key.iter_mut().zip(coords) {
                *slot += (z >> c & 1) as u8;
            }
        }
        *map.entry(key).or_insert(0u64) += 1;
        // odometer
        let mut pos = 0;
        loop {
            if pos == idx.len() {
                return Ok(map);
            }
            idx[pos] += 1;
            if idx[pos] < pool.len() {
                break;
            }
            idx[pos] = 0;
            pos += 1;
        }
    }
}

pub fn binomial(n: u64, r: u64) -> BigUint {
    if r > n {
        return BigUint::zero();
    }
    let r = r.min(n - r);
    let mut acc = BigUint::one();
    for i in 0..r {
        acc = acc * BigUint::from(n - i) / BigUint::from(i + 1);
    }
    acc
}

/// `C(2k, k)^d`.
pub fn closed_form_tuple_count(d: u32, k: u32) -> BigUint {
    binomial(2 * k as u64, k as u64).pow(d)
}

/// Number of `(x, y, u, v)` with `x < y`, `u < v` and `u, v ∈ W(x, y)`,
/// optionally only for pairs with `lo < hamming(x, y) / n <= hi`.
pub fn count_witness_quadruples(q: &VertexSet, band: Option<(f64, f64)>) -> BigUint {
    let pts = q.points();
    let n = q.dim() as f64;
    let mut total: u128 = 0;
    for (i, x) in pts.iter().enumerate() {
        for y in &pts[i + 1..] {
            let (xb, yb) = (x.bits(), y.bits());
            if let Some((lo, hi)) = band {
                let r = (xb ^ yb).count_ones() as f64 / n;
                if !(r > lo && r <= hi) {
                    continue;
                }
            }
            let w = typicality::witness_count_capped(q, xb, yb, usize::MAX) as u128;
            total += w * w.saturating_sub(1) / 2;
        }
    }
    BigUint::from(total)
}
