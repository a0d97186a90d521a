//! Seeded sampling of random subsets of the hypercube.
//!
//! The generator is SplitMix64: the state advances by the odd constant
//! `GAMMA = 0x9E37_79B9_7F4A_7C15` and each output is the state passed
//! through [`fmix64`]:
//!
//! ```text
//! z = state += GAMMA
//! z = (z ^ (z >> 30)) * 0xBF58_476D_1CE4_E5B9
//! z = (z ^ (z >> 27)) * 0x94D0_49BB_1331_11EB
//! out = z ^ (z >> 31)
//! ```
//!
//! A point is included when the next output is below `floor(p * 2^64)`.
//! For `p <= SPARSE_CROSSOVER` the sampler instead draws geometric gaps
//! between included points (one draw per included point plus one).
//! All floating-point math that feeds a sampling decision goes through
//! `libm`, so a seed produces the same set on every platform.

use std::fmt;
use std::fs;
use std::io::Write;
use std::path::Path;

use crate::analytics;
use crate::error::{Error, Result};
use crate::hypercube::{dim_mask, Point, MAX_DIM};

pub const GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

/// Probabilities at or below this use geometric gap-skipping.
pub const SPARSE_CROSSOVER: f64 = 1.0 / (1u64 << 20) as f64;

/// Largest dimension for which the dense (enumerate every point) sampler runs.
pub const DENSE_MAX_DIM: u32 = 34;

/// Dimensions up to this get a bitmap membership index.
const BITMAP_MAX_DIM: u32 = 24;

/// SplitMix64 output finalizer; a bijection on `u64`.
#[inline]
pub fn fmix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Per-cell seed: `fmix64(base + (index + 1) * GAMMA)`.
///
/// Injective in `index` for a fixed base, since `GAMMA` is odd and
/// `fmix64` is a bijection.
#[inline]
pub fn mix64(base: u64, index: u64) -> u64 {
    fmix64(base.wrapping_add(index.wrapping_add(1).wrapping_mul(GAMMA)))
}

#[derive(Clone, Debug)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        SplitMix64 { state: seed }
    }

    #[inline]
    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(GAMMA);
        fmix64(self.state)
    }

    /// Uniform in `(0, 1]` with 53 bits.
    #[inline]
    pub fn next_open01(&mut self) -> f64 {
        ((self.next_u64() >> 11) + 1) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform in `[0, bound)`, by rejection.
    pub fn below(&mut self, bound: u64) -> u64 {
        assert!(bound > 0);
        let zone = u64::MAX - (u64::MAX - bound + 1) % bound;
        loop {
            let v = self.next_u64();
            if v <= zone {
                return v % bound;
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    fn factor(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }

    fn symbol(self) -> char {
        match self {
            Sign::Plus => '+',
            Sign::Minus => '-',
        }
    }
}

/// A probability schedule `p(n)`.
#[derive(Clone, Copy, Debug, PartialEq, serde::Serialize, serde::Deserialize)]
pub enum RateSpec {
    /// `p` itself.
    Explicit(f64),
    /// `p = 2^(-c n)`.
    Pow2(f64),
    /// `p = ((1 ± eps) / sqrt 2)^n`.
    HalfScaled { eps: f64, sign: Sign },
    /// `p = ((1 ± eps) 2^(-delta*))^n`, `delta*` the clique exponent.
    DeltaScaled { eps: f64, sign: Sign },
}

impl RateSpec {
    /// Canonical text form, e.g. `pow2:c=0.6000`.
    pub fn label(&self) -> String {
        match *self {
            RateSpec::Explicit(p) => format!("explicit:p={}", crate::fmt_sig(p)),
            RateSpec::Pow2(c) => format!("pow2:c={c:.4}"),
            RateSpec::HalfScaled { eps, sign } => format!("half:eps={}{eps:.4}", sign.symbol()),
            RateSpec::DeltaScaled { eps, sign } => format!("delta:eps={}{eps:.4}", sign.symbol()),
        }
    }

    /// Accepts the canonical label or the short forms `explicit:0.5`,
    /// `pow2:0.6`, `half:-0.1`, `delta:+0.03`.
    pub fn parse(s: &str) -> Result<Self> {
        let bad = || Error::InvalidRate(s.to_string());
        let (kind, rest) = s.trim().split_once(':').ok_or_else(bad)?;
        let value = rest.split_once('=').map_or(rest, |(_, v)| v).trim();
        let signed = |v: &str| -> Result<(f64, Sign)> {
            let (sign, mag) = match v.as_bytes().first() {
                Some(b'-') => (Sign::Minus, &v[1..]),
                Some(b'+') => (Sign::Plus, &v[1..]),
                _ => (Sign::Plus, v),
            };
            let eps: f64 = mag.parse().map_err(|_| bad())?;
            Ok((eps, sign))
        };
        let spec = match kind {
            "explicit" | "p" => RateSpec::Explicit(value.parse().map_err(|_| bad())?),
            "pow2" => RateSpec::Pow2(value.parse().map_err(|_| bad())?),
            "half" => {
                let (eps, sign) = signed(value)?;
                RateSpec::HalfScaled { eps, sign }
            }
            "delta" => {
                let (eps, sign) = signed(value)?;
                RateSpec::DeltaScaled { eps, sign }
            }
            _ => return Err(bad()),
        };
        Ok(spec)
    }
}

impl fmt::Display for RateSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

fn scaled_base(eps: f64, sign: Sign, spec: &RateSpec) -> Result<f64> {
    let factor = 1.0 + sign.factor() * eps;
    if !factor.is_finite() || factor < 0.0 {
        return Err(Error::InvalidRate(format!("{spec}: 1 ± eps = {factor} is negative")));
    }
    Ok(factor)
}

/// Evaluates a schedule at dimension `n`, clamped to `[0, 1]`.
pub fn resolve_rate(spec: &RateSpec, n: u32) -> Result<f64> {
    if n == 0 {
        return Err(Error::InvalidDimension(n));
    }
    let nf = n as f64;
    let p = match *spec {
        RateSpec::Explicit(p) => {
            if !(0.0..=1.0).contains(&p) {
                return Err(Error::InvalidProbability(p));
            }
            p
        }
        RateSpec::Pow2(c) => {
            if c.is_nan() || c < 0.0 || !c.is_finite() {
                return Err(Error::InvalidRate(format!("{spec}: c must be >= 0")));
            }
            libm::exp2(-c * nf)
        }
        RateSpec::HalfScaled { eps, sign } => {
            let base = scaled_base(eps, sign, spec)? * std::f64::consts::FRAC_1_SQRT_2;
            libm::pow(base, nf)
        }
        RateSpec::DeltaScaled { eps, sign } => {
            let delta = analytics::solve_delta();
            let base = scaled_base(eps, sign, spec)? * libm::exp2(-delta);
            libm::pow(base, nf)
        }
    };
    Ok(p.clamp(0.0, 1.0))
}

#[derive(Clone, Debug, PartialEq, serde::Serialize, serde::Deserialize)]
pub enum Provenance {
    Explicit,
    Sampled {
        seed: u64,
        p: f64,
        rate: Option<RateSpec>,
    },
}

/// A subset of `{0,1}^n`, strictly ascending.
#[derive(Clone)]
pub struct VertexSet {
    n: u32,
    points: Vec<Point>,
    provenance: Provenance,
    bitmap: Option<Vec<u64>>,
}

impl PartialEq for VertexSet {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.points == other.points
    }
}

impl fmt::Debug for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("VertexSet")
            .field("n", &self.n)
            .field("points", &self.points)
            .field("provenance", &self.provenance)
            .finish()
    }
}

impl VertexSet {
    fn from_sorted_bits(n: u32, bits: Vec<u64>, provenance: Provenance) -> Self {
        let bitmap = (n <= BITMAP_MAX_DIM).then(|| {
            let mut map = vec![0u64; (1usize << n).div_ceil(64)];
            for &b in &bits {
                map[(b >> 6) as usize] |= 1 << (b & 63);
            }
            map
        });
        let points = bits.into_iter().map(|b| Point::from_raw(b, n)).collect();
        VertexSet {
            n,
            points,
            provenance,
            bitmap,
        }
    }

    /// Sorts and deduplicates; every point must have dimension `n`.
    pub fn from_points<I: IntoIterator<Item = Point>>(n: u32, points: I) -> Result<Self> {
        if n == 0 || n > MAX_DIM {
            return Err(Error::InvalidDimension(n));
        }
        let mut bits = Vec::new();
        for p in points {
            if p.dim() != n {
                return Err(Error::DimensionMismatch {
                    left: n,
                    right: p.dim(),
                });
            }
            bits.push(p.bits());
        }
        bits.sort_unstable();
        bits.dedup();
        Ok(Self::from_sorted_bits(n, bits, Provenance::Explicit))
    }

    pub fn full_cube(n: u32) -> Result<Self> {
        if n == 0 || n > BITMAP_MAX_DIM {
            return Err(Error::BudgetExceeded {
                what: "full cube dimension",
                size: n as u64,
                limit: BITMAP_MAX_DIM as u64,
            });
        }
        let bits = (0..(1u64 << n)).collect();
        Ok(Self::from_sorted_bits(n, bits, Provenance::Explicit))
    }

    pub fn empty(n: u32) -> Result<Self> {
        Self::from_points(n, std::iter::empty())
    }

    pub fn dim(&self) -> u32 {
        self.n
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn provenance(&self) -> &Provenance {
        &self.provenance
    }

    pub fn with_provenance(mut self, provenance: Provenance) -> Self {
        self.provenance = provenance;
        self
    }

    #[inline]
    pub fn contains_bits(&self, bits: u64) -> bool {
        match &self.bitmap {
            Some(map) => {
                bits >> self.n == 0 && (map[(bits >> 6) as usize] >> (bits & 63)) & 1 == 1
            }
            None => self.index_of_bits(bits).is_some(),
        }
    }

    pub fn contains(&self, p: &Point) -> bool {
        p.dim() == self.n && self.contains_bits(p.bits())
    }

    pub fn index_of_bits(&self, bits: u64) -> Option<usize> {
        self.points.binary_search_by(|q| q.bits().cmp(&bits)).ok()
    }

    pub fn index_of(&self, p: &Point) -> Option<usize> {
        if p.dim() != self.n {
            return None;
        }
        self.index_of_bits(p.bits())
    }

    /// Whether membership tests are O(1).
    pub(crate) fn has_bitmap(&self) -> bool {
        self.bitmap.is_some()
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("n={}\n", self.n);
        for p in &self.points {
            out.push_str(&p.to_hex());
            out.push('\n');
        }
        out
    }

    pub fn parse_text(text: &str) -> Result<Self> {
        let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty());
        let header = lines.next().ok_or(Error::Parse("missing `n=` header".into()))?;
        let n: u32 = header
            .strip_prefix("n=")
            .and_then(|v| v.trim().parse().ok())
            .ok_or_else(|| Error::Parse(format!("bad header {header:?}")))?;
        if n == 0 || n > MAX_DIM {
            return Err(Error::InvalidDimension(n));
        }
        let mut bits = Vec::new();
        for line in lines {
            let p = Point::parse_hex(line, n)?;
            if bits.last().is_some_and(|&last| last >= p.bits()) {
                return Err(Error::Parse(format!("points not strictly ascending at {line}")));
            }
            bits.push(p.bits());
        }
        Ok(Self::from_sorted_bits(n, bits, Provenance::Explicit))
    }

    pub fn write_file(&self, path: &Path) -> Result<()> {
        let mut f = fs::File::create(path)?;
        f.write_all(self.to_text().as_bytes())?;
        Ok(())
    }

    pub fn read_file(path: &Path) -> Result<Self> {
        Self::parse_text(&fs::read_to_string(path)?)
    }
}

/// Integer inclusion threshold `floor(p * 2^64)` for `0 < p < 1`.
fn threshold(p: f64) -> u64 {
    (p * 18_446_744_073_709_551_616.0) as u64
}

/// Samples `Q_p^n`: each point of `{0,1}^n` independently with probability `p`.
pub fn sample_vertex_set(n: u32, p: f64, seed: u64) -> Result<VertexSet> {
    if n == 0 || n > MAX_DIM {
        return Err(Error::InvalidDimension(n));
    }
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidProbability(p));
    }
    let provenance = Provenance::Sampled {
        seed,
        p,
        rate: None,
    };
    let mut rng = SplitMix64::new(seed);
    let mut bits = Vec::new();
    if p == 0.0 {
    } else if p == 1.0 || p > SPARSE_CROSSOVER {
        if n > DENSE_MAX_DIM {
            return Err(Error::BudgetExceeded {
                what: "dense sampling dimension",
                size: n as u64,
                limit: DENSE_MAX_DIM as u64,
            });
        }
        let total = 1u64 << n;
        if p == 1.0 {
            bits.extend(0..total);
        } else {
            let thr = threshold(p);
            for idx in 0..total {
                if rng.next_u64() < thr {
                    bits.push(idx);
                }
            }
        }
    } else {
        let total = dim_mask(n) as u128 + 1;
        let log_q = libm::log1p(-p);
        let mut idx: u128 = 0;
        loop {
            let u = rng.next_open01();
            let gap = (libm::log(u) / log_q).floor();
            // gap >= 0 since both logs are <= 0
            let gap = if gap >= 1.8e19 { u64::MAX as u128 } else { gap as u128 };
            idx += gap;
            if idx >= total {
                break;
            }
            bits.push(idx as u64);
            idx += 1;
        }
    }
    Ok(VertexSet::from_sorted_bits(n, bits, provenance))
}

/// Resolves a schedule and samples, recording the schedule in the provenance.
pub fn sample_with_rate(n: u32, rate: &RateSpec, seed: u64) -> Result<VertexSet> {
    let p = resolve_rate(rate, n)?;
    let q = sample_vertex_set(n, p, seed)?;
    Ok(q.with_provenance(Provenance::Sampled {
        seed,
        p,
        rate: Some(*rate),
    }))
}
