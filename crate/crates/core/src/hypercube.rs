//! Points of the Boolean hypercube `{0,1}^n` packed into a single `u64`.
//!
//! Coordinate `i` (1-based) lives in bit `i - 1`. Points order by the
//! unsigned value of their bit word. The textual binary form lists
//! coordinates left to right starting at coordinate 1; the hex form is the
//! bit word itself, most significant nibble first, `ceil(n/4)` digits.

use std::cmp::Ordering;
use std::fmt;

use crate::error::{Error, Result};

pub const MAX_DIM: u32 = 64;

#[inline]
pub(crate) fn dim_mask(n: u32) -> u64 {
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Point {
    bits: u64,
    n: u32,
}

impl Point {
    pub fn new(bits: u64, n: u32) -> Result<Self> {
        if n == 0 || n > MAX_DIM {
            return Err(Error::InvalidDimension(n));
        }
        if bits & !dim_mask(n) != 0 {
            return Err(Error::BitsOutOfRange { bits, n });
        }
        Ok(Point { bits, n })
    }

    /// Caller guarantees `1 <= n <= 64` and no bits above `n`.
    #[inline]
    pub(crate) fn from_raw(bits: u64, n: u32) -> Self {
        debug_assert!((1..=MAX_DIM).contains(&n) && bits & !dim_mask(n) == 0);
        Point { bits, n }
    }

    pub fn zeros(n: u32) -> Result<Self> {
        Point::new(0, n)
    }

    pub fn ones(n: u32) -> Result<Self> {
        if n == 0 || n > MAX_DIM {
            return Err(Error::InvalidDimension(n));
        }
        Ok(Point { bits: dim_mask(n), n })
    }

    /// Builds a point from 0/1 coordinates, coordinate 1 first.
    pub fn from_coords(coords: &[u8]) -> Result<Self> {
        let n = coords.len() as u32;
        let mut bits = 0u64;
        for (i, &c) in coords.iter().enumerate() {
            match c {
                0 => {}
                1 => bits |= 1 << i,
                other => return Err(Error::Parse(format!("coordinate value {other}"))),
            }
        }
        Point::new(bits, n)
    }

    /// Parses a string such as `"0110"`, coordinate 1 first.
    pub fn parse_binary(s: &str) -> Result<Self> {
        let coords = s
            .chars()
            .map(|c| match c {
                '0' => Ok(0),
                '1' => Ok(1),
                other => Err(Error::Parse(format!("unexpected character {other:?} in {s:?}"))),
            })
            .collect::<Result<Vec<u8>>>()?;
        Point::from_coords(&coords)
    }

    pub fn parse_hex(s: &str, n: u32) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() {
            return Err(Error::Parse("empty hex string".into()));
        }
        let bits = u64::from_str_radix(s, 16).map_err(|e| Error::Parse(format!("{s:?}: {e}")))?;
        Point::new(bits, n)
    }

    pub fn to_hex(&self) -> String {
        let digits = self.n.div_ceil(4) as usize;
        format!("{:0width$x}", self.bits, width = digits)
    }

    pub fn to_binary(&self) -> String {
        (0..self.n)
            .map(|i| if self.bit(i) { '1' } else { '0' })
            .collect()
    }

    #[inline]
    pub fn bits(&self) -> u64 {
        self.bits
    }

    #[inline]
    pub fn dim(&self) -> u32 {
        self.n
    }

    /// Value of the 0-based bit `i`.
    #[inline]
    pub fn bit(&self, i: u32) -> bool {
        (self.bits >> i) & 1 == 1
    }

    #[inline]
    pub fn weight(&self) -> u32 {
        self.bits.count_ones()
    }

    fn same_dim(&self, other: &Point) -> Result<()> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch {
                left: self.n,
                right: other.n,
            });
        }
        Ok(())
    }

    pub fn meet(&self, other: &Point) -> Result<Point> {
        self.same_dim(other)?;
        Ok(Point::from_raw(self.bits & other.bits, self.n))
    }

    pub fn join(&self, other: &Point) -> Result<Point> {
        self.same_dim(other)?;
        Ok(Point::from_raw(self.bits | other.bits, self.n))
    }

    pub fn hamming(&self, other: &Point) -> Result<u32> {
        self.same_dim(other)?;
        Ok((self.bits ^ other.bits).count_ones())
    }

    /// `|(x ∨ y)^c|`: coordinates where both points are 0.
    pub fn complement_count(&self, other: &Point) -> Result<u32> {
        self.same_dim(other)?;
        Ok(self.n - (self.bits | other.bits).count_ones())
    }

    /// Coordinate-wise `self <= other`.
    pub fn le(&self, other: &Point) -> bool {
        self.n == other.n && self.bits & !other.bits == 0
    }
}

impl PartialOrd for Point {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Point {
    fn cmp(&self, other: &Self) -> Ordering {
        self.n.cmp(&other.n).then(self.bits.cmp(&other.bits))
    }
}

impl fmt::Debug for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Point({})", self.to_binary())
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_binary())
    }
}

pub fn meet(x: &Point, y: &Point) -> Result<Point> {
    x.meet(y)
}

pub fn join(x: &Point, y: &Point) -> Result<Point> {
    x.join(y)
}

pub fn weight(x: &Point) -> u32 {
    x.weight()
}

pub fn hamming(x: &Point, y: &Point) -> Result<u32> {
    x.hamming(y)
}

pub fn complement_count(x: &Point, y: &Point) -> Result<u32> {
    x.complement_count(y)
}

/// The box `{z : lo <= z <= hi}` spanned by two points.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Interval {
    lo: Point,
    hi: Point,
}

impl Interval {
    pub fn spanned_by(x: &Point, y: &Point) -> Result<Self> {
        Ok(Interval {
            lo: x.meet(y)?,
            hi: x.join(y)?,
        })
    }

    pub fn lo(&self) -> Point {
        self.lo
    }

    pub fn hi(&self) -> Point {
        self.hi
    }

    pub fn dim(&self) -> u32 {
        self.lo.n
    }

    /// Mask of the free coordinates (where `lo` and `hi` differ).
    pub fn free_mask(&self) -> u64 {
        self.lo.bits ^ self.hi.bits
    }

    pub fn free_dims(&self) -> u32 {
        self.free_mask().count_ones()
    }

    /// `2^d`, saturating at `u64::MAX` for `d = 64`.
    pub fn cardinality(&self) -> u64 {
        let d = self.free_dims();
        if d >= 64 {
            u64::MAX
        } else {
            1u64 << d
        }
    }

    pub fn contains(&self, z: &Point) -> bool {
        z.n == self.lo.n && self.lo.le(z) && z.le(&self.hi)
    }

    pub fn points(&self) -> IntervalPoints {
        IntervalPoints {
            base: self.lo.bits,
            free: self.free_mask(),
            next: Some(0),
            n: self.lo.n,
        }
    }
}

/// Ascending iterator over an interval: `lo | s` for every submask `s` of
/// the free mask.
#[derive(Clone, Debug)]
pub struct IntervalPoints {
    base: u64,
    free: u64,
    next: Option<u64>,
    n: u32,
}

impl Iterator for IntervalPoints {
    type Item = Point;

    fn next(&mut self) -> Option<Point> {
        let s = self.next?;
        // next submask in increasing order; wraps to 0 after the full mask
        let succ = (s | !self.free).wrapping_add(1) & self.free;
        self.next = if succ == 0 { None } else { Some(succ) };
        Some(Point::from_raw(self.base | s, self.n))
    }
}

pub fn interval_points(x: &Point, y: &Point) -> Result<IntervalPoints> {
    Ok(Interval::spanned_by(x, y)?.points())
}
