//! Witness sets and (x, α)-typicality.
//!
//! `W(x, y)` is the set of points of `Q` other than `x` and `y` inside the
//! box `[x ∧ y, x ∨ y]`. Only witnesses can appear in a convex combination
//! that places a point of the segment `[x, y]` inside the hull of the
//! remaining points, so adjacency is decided on `W(x, y)` alone.
//!
//! A point `y` is `(x, α)`-typical when `|x ∧ y|` lies within `αn` of
//! `|x|/2` and `|(x ∨ y)^c|` lies within `αn` of `(n - |x|)/2`, both with
//! non-strict real-valued bounds. The windows are evaluated in doubled form
//! (`|2|x∧y| - |x|| <= 2αn`) with `t = α·n` computed once, so the
//! comparisons only ever scale `t` by powers of two.
//!
//! The finite-n bound on the number of atypical points used here is the
//! two-block union bound: `|x ∧ y|` depends only on the coordinates in the
//! support of `x` and `|(x ∨ y)^c|` only on the rest, so
//!
//! ```text
//! #atypical <= tail(|x|) * 2^(n-|x|) + 2^|x| * tail(n-|x|)
//! ```
//!
//! where `tail(w)` counts the `j in 0..=w` outside the window, weighted by
//! `C(w, j)`. The bound via Hamming-distance tails sometimes quoted for this
//! count relates typical *pairs* to distance, which does not bound the
//! number of atypical points from above; the union bound does.

use crate::error::{Error, Result};
use crate::hypercube::Point;
use crate::sampling::VertexSet;

/// Witness set of a pair, members ascending.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WitnessSet {
    pub x: Point,
    pub y: Point,
    pub members: Vec<Point>,
}

impl WitnessSet {
    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TypicalityParams {
    alpha: f64,
}

impl TypicalityParams {
    pub fn new(alpha: f64) -> Result<Self> {
        if !(alpha > 0.0 && alpha < 1.0) {
            return Err(Error::Config(format!("alpha {alpha} outside (0, 1)")));
        }
        Ok(TypicalityParams { alpha })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }
}

/// Whether enumerating the `2^d` interval points beats scanning `Q`.
#[inline]
fn enumerate_interval(q: &VertexSet, d: u32) -> bool {
    if d >= 40 {
        return false;
    }
    let box_size = 1u64 << d;
    let len = q.len() as u64;
    if q.has_bitmap() {
        box_size <= len
    } else {
        let log = 64 - len.leading_zeros() as u64;
        box_size.saturating_mul(log.max(1)) <= len
    }
}

/// Visits witness bit words in ascending order until `f` returns `false`.
pub(crate) fn for_each_witness<F: FnMut(u64) -> bool>(q: &VertexSet, x: u64, y: u64, mut f: F) {
    let lo = x & y;
    let hi = x | y;
    let free = x ^ y;
    if enumerate_interval(q, free.count_ones()) {
        let mut s = 0u64;
        loop {
            let z = lo | s;
            if z != x && z != y && q.contains_bits(z) && !f(z) {
                return;
            }
            s = (s | !free).wrapping_add(1) & free;
            if s == 0 {
                return;
            }
        }
    } else {
        for p in q.points() {
            let z = p.bits();
            if z & !hi == 0 && lo & !z == 0 && z != x && z != y && !f(z) {
                return;
            }
        }
    }
}

pub(crate) fn witness_bits(q: &VertexSet, x: u64, y: u64) -> Vec<u64> {
    let mut out = Vec::new();
    for_each_witness(q, x, y, |z| {
        out.push(z);
        true
    });
    out
}

/// Number of witnesses, stopping once `cap` is reached.
pub(crate) fn witness_count_capped(q: &VertexSet, x: u64, y: u64, cap: usize) -> usize {
    let mut count = 0;
    for_each_witness(q, x, y, |_| {
        count += 1;
        count < cap
    });
    count
}

pub(crate) fn check_pair(q: &VertexSet, x: &Point, y: &Point) -> Result<()> {
    for p in [x, y] {
        if !q.contains(p) {
            return Err(Error::NotInVertexSet(p.to_hex()));
        }
    }
    if x == y {
        return Err(Error::SameEndpoints);
    }
    Ok(())
}

/// `W(x, y) = {z in Q \ {x, y} : x ∧ y <= z <= x ∨ y}`.
pub fn witness_set(q: &VertexSet, x: &Point, y: &Point) -> Result<WitnessSet> {
    check_pair(q, x, y)?;
    let n = q.dim();
    let members = witness_bits(q, x.bits(), y.bits())
        .into_iter()
        .map(|b| Point::new(b, n).expect("witness inside the cube"))
        .collect();
    Ok(WitnessSet {
        x: *x,
        y: *y,
        members,
    })
}

/// `|2v - w| <= 2t`, i.e. `v` within `t` of `w / 2`.
#[inline]
fn in_window(v: u32, w: u32, t: f64) -> bool {
    let dev = 2.0 * v as f64 - w as f64;
    -2.0 * t <= dev && dev <= 2.0 * t
}

/// Whether `y` is `(x, α)`-typical.
///
/// # Panics
/// If `x` and `y` have different dimensions.
pub fn is_typical(x: &Point, y: &Point, alpha: f64) -> bool {
    assert_eq!(x.dim(), y.dim(), "dimension mismatch");
    let n = x.dim();
    let t = alpha * n as f64;
    let wx = x.weight();
    let meet = (x.bits() & y.bits()).count_ones();
    let outside = n - (x.bits() | y.bits()).count_ones();
    in_window(meet, wx, t) && in_window(outside, n - wx, t)
}

pub fn is_typical_pair(x: &Point, y: &Point, alpha: f64) -> bool {
    is_typical(x, y, alpha) && is_typical(y, x, alpha)
}

#[derive(Clone, Copy, Debug)]
pub enum Universe<'a> {
    FullCube,
    Set(&'a VertexSet),
}

pub const FULL_CUBE_MAX_DIM: u32 = 24;

/// Number of `y` in the universe that are `(x, α)`-atypical.
pub fn count_atypical(x: &Point, alpha: f64, universe: Universe<'_>) -> Result<u64> {
    match universe {
        Universe::FullCube => {
            let n = x.dim();
            if n > FULL_CUBE_MAX_DIM {
                return Err(Error::BudgetExceeded {
                    what: "full-cube atypical count dimension",
                    size: n as u64,
                    limit: FULL_CUBE_MAX_DIM as u64,
                });
            }
            let count = (0..1u64 << n)
                .filter(|&b| !is_typical(x, &Point::new(b, n).expect("in range"), alpha))
                .count();
            Ok(count as u64)
        }
        Universe::Set(q) => {
            if q.is_empty() {
                return Ok(0);
            }
            if q.dim() != x.dim() {
                return Err(Error::DimensionMismatch {
                    left: x.dim(),
                    right: q.dim(),
                });
            }
            Ok(q.points().iter().filter(|y| !is_typical(x, y, alpha)).count() as u64)
        }
    }
}

fn binomial_row(w: u32) -> Vec<u128> {
    let mut row = vec![1u128];
    for i in 0..w as u128 {
        let next = row[i as usize] * (w as u128 - i) / (i + 1);
        row.push(next);
    }
    row
}

/// `(Σ C(w,j) over j in the window, Σ C(w,j) outside it)`.
fn window_masses(w: u32, t: f64) -> (u128, u128) {
    let row = binomial_row(w);
    let mut inside = 0u128;
    let mut outside = 0u128;
    for (j, c) in row.into_iter().enumerate() {
        if in_window(j as u32, w, t) {
            inside += c;
        } else {
            outside += c;
        }
    }
    (inside, outside)
}

/// Two-block union bound on the number of `(x, α)`-atypical points of the cube.
pub fn atypical_union_bound(x: &Point, alpha: f64) -> u128 {
    let n = x.dim();
    let t = alpha * n as f64;
    let w = x.weight();
    let (_, tail_in) = window_masses(w, t);
    let (_, tail_out) = window_masses(n - w, t);
    tail_in * (1u128 << (n - w)) + (1u128 << w) * tail_out
}

/// Exact number of `(x, α)`-atypical points of the cube, by the product of
/// the two independent window masses. Valid for any `n <= 64`.
pub fn atypical_exact(x: &Point, alpha: f64) -> u128 {
    let n = x.dim();
    let t = alpha * n as f64;
    let w = x.weight();
    let (a, _) = window_masses(w, t);
    let (b, _) = window_masses(n - w, t);
    let total = if n == 64 { u128::from(u64::MAX) + 1 } else { 1u128 << n };
    total - a * b
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Point {
        Point::parse_binary(s).unwrap()
    }

    fn square() -> VertexSet {
        VertexSet::full_cube(2).unwrap()
    }

    #[test]
    fn witness_examples() {
        let q = square();
        let w = witness_set(&q, &p("00"), &p("11")).unwrap();
        assert_eq!(w.members, vec![p("10"), p("01")]);
        assert!(witness_set(&q, &p("00"), &p("01")).unwrap().is_empty());
        let pair = VertexSet::from_points(3, [p("000"), p("111")]).unwrap();
        assert!(witness_set(&pair, &p("000"), &p("111")).unwrap().is_empty());
    }

    #[test]
    fn witness_errors() {
        let q = VertexSet::from_points(2, [p("00"), p("11")]).unwrap();
        assert_eq!(
            witness_set(&q, &p("00"), &p("01")).unwrap_err(),
            Error::NotInVertexSet("2".into())
        );
        assert_eq!(witness_set(&q, &p("00"), &p("00")).unwrap_err(), Error::SameEndpoints);
    }

    #[test]
    fn scan_and_enumeration_agree() {
        let q = crate::sampling::sample_vertex_set(10, 0.4, 5).unwrap();
        let pts = q.points();
        for (i, x) in pts.iter().enumerate().step_by(7) {
            for y in pts[i + 1..].iter().step_by(5) {
                let (xb, yb) = (x.bits(), y.bits());
                let scan: Vec<u64> = pts
                    .iter()
                    .map(|z| z.bits())
                    .filter(|&z| z & !(xb | yb) == 0 && (xb & yb) & !z == 0 && z != xb && z != yb)
                    .collect();
                let mut enumerated = Vec::new();
                for s in crate::hypercube::interval_points(x, y).unwrap() {
                    if s != *x && s != *y && q.contains(&s) {
                        enumerated.push(s.bits());
                    }
                }
                assert_eq!(witness_bits(&q, xb, yb), scan);
                assert_eq!(enumerated, scan);
            }
        }
    }

    #[test]
    fn typical_examples() {
        assert!(is_typical(&p("0000"), &p("0011"), 0.25));
        assert!(!is_typical(&p("0000"), &p("1111"), 0.25));
        assert!(!is_typical(&p("1111"), &p("1111"), 0.25));
    }

    #[test]
    fn typical_pair_examples() {
        let x = p("00000000");
        let y = p("00001111");
        assert!(is_typical(&x, &y, 0.1));
        assert!(!is_typical_pair(&x, &y, 0.1));
        assert!(is_typical_pair(&p("01"), &p("10"), 0.3));
    }

    #[test]
    fn atypical_examples() {
        assert_eq!(count_atypical(&p("00"), 0.6, Universe::FullCube).unwrap(), 0);
        let empty = VertexSet::empty(3).unwrap();
        assert_eq!(count_atypical(&p("000"), 0.1, Universe::Set(&empty)).unwrap(), 0);
        assert!(count_atypical(&Point::zeros(25).unwrap(), 0.1, Universe::FullCube).is_err());
    }

    #[test]
    fn atypical_n12_within_bound() {
        for b in 0..1u64 << 12 {
            let x = Point::new(b, 12).unwrap();
            let count = count_atypical(&x, 0.1, Universe::FullCube).unwrap() as u128;
            assert_eq!(count, atypical_exact(&x, 0.1));
            assert!(count <= atypical_union_bound(&x, 0.1));
        }
    }

    #[test]
    fn params_validation() {
        assert!(TypicalityParams::new(0.0).is_err());
        assert!(TypicalityParams::new(1.0).is_err());
        assert_eq!(TypicalityParams::new(0.2).unwrap().alpha(), 0.2);
    }
}
