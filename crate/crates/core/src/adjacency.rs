//! Edge decisions for `conv(Q)` with replayable certificates.
//!
//! For `x, y ∈ Q`, `[x, y]` is an edge iff no point of the segment lies in
//! the hull of `Q \ {x, y}`, and only witnesses `W(x, y)` can take part in
//! such a convex combination. At most one witness means edge outright.
//!
//! The projected witness LP works on the `d` coordinates where `x` and `y`
//! differ, flipped so that `x` reads `1…1` and `y` reads `0…0`. A witness
//! `z` becomes `z'` with `z'_i = 1` iff `z` agrees with `x` on coordinate
//! `i`. The pair is a non-edge iff some convex combination of the `z'` has
//! all coordinates equal; the common value is the weight `α` on `x`.
//!
//! When that LP is infeasible its Farkas vector is a functional `φ` on the
//! projected coordinates with `Σ c_i = 0` and `φ(z') <= -μ < 0` on every
//! witness. Adding a penalty `M` per fixed coordinate on which `z` leaves
//! the box extends it to a hyperplane through `x` and `y` with every other
//! point of `Q` on the strict side, which is what an edge certificate
//! stores.
//!
//! Every sampled point of `{0,1}^n` is a vertex of the hull, so the
//! characterization applies to every pair of `Q`.

use std::fmt;

use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::hypercube::Point;
use crate::lp::{self, FeasibilitySystem, LpVerdict, Rational};
use crate::sampling::{Provenance, SplitMix64, VertexSet};
use crate::typicality::{check_pair, witness_bits, witness_count_capped};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub enum Method {
    /// Witness count, then the projected LP with a coordinate-coverage shortcut.
    Auto,
    /// Projected witness LP only.
    Lp,
    /// Segment-vs-hull LP over all of `Q \ {x, y}` with an explicit `α`.
    OracleFull,
    /// Search for a supporting hyperplane through `x` and `y`.
    OracleHyperplane,
}

impl Method {
    pub const ALL: [Method; 4] = [Method::Auto, Method::Lp, Method::OracleFull, Method::OracleHyperplane];

    pub fn name(&self) -> &'static str {
        match self {
            Method::Auto => "auto",
            Method::Lp => "lp",
            Method::OracleFull => "oracle-full",
            Method::OracleHyperplane => "oracle-hyperplane",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        Method::ALL
            .into_iter()
            .find(|m| m.name() == s || m.name().replace('-', "_") == s)
            .ok_or_else(|| Error::Parse(format!("unknown method {s:?}")))
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Edge,
    NonEdge,
}

/// `2k` points of `Q \ {x, y}` whose mean is `(x + y) / 2`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AveragingTuple {
    pub k: u32,
    pub points: Vec<Point>,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Certificate {
    /// `|W(x, y)| <= 1`.
    WitnessCount { count: usize },
    /// `normal·x = normal·y = offset` and `normal·z <= offset - 1` on the rest.
    Hyperplane { normal: Vec<Rational>, offset: Rational },
    /// `normal·x > offset`, `normal·y > offset`, `normal·z <= offset` on the rest.
    SegmentSeparator { normal: Vec<Rational>, offset: Rational },
    /// `Σ λ_z z = α x + (1 - α) y` over witnesses.
    ConvexCombination {
        support: Vec<Point>,
        lambda: Vec<Rational>,
        alpha: Rational,
    },
    AveragingTuple(AveragingTuple),
}

impl Certificate {
    pub fn proves(&self) -> Verdict {
        match self {
            Certificate::WitnessCount { .. }
            | Certificate::Hyperplane { .. }
            | Certificate::SegmentSeparator { .. } => Verdict::Edge,
            Certificate::ConvexCombination { .. } | Certificate::AveragingTuple(_) => Verdict::NonEdge,
        }
    }

    /// Exact check against `Q` and the pair.
    pub fn replays(&self, q: &VertexSet, x: &Point, y: &Point) -> bool {
        if check_pair(q, x, y).is_err() {
            return false;
        }
        let n = q.dim() as usize;
        let others = || q.points().iter().filter(move |z| *z != x && *z != y);
        match self {
            Certificate::WitnessCount { count } => {
                *count <= 1 && witness_count_capped(q, x.bits(), y.bits(), usize::MAX) == *count
            }
            Certificate::Hyperplane { normal, offset } => {
                if normal.len() != n {
                    return false;
                }
                let bound = offset - Rational::one();
                dot(normal, x) == *offset
                    && dot(normal, y) == *offset
                    && others().all(|z| dot(normal, z) <= bound)
            }
            Certificate::SegmentSeparator { normal, offset } => {
                normal.len() == n
                    && dot(normal, x) > *offset
                    && dot(normal, y) > *offset
                    && others().all(|z| dot(normal, z) <= *offset)
            }
            Certificate::ConvexCombination {
                support,
                lambda,
                alpha,
            } => {
                let lo = x.bits() & y.bits();
                let hi = x.bits() | y.bits();
                if support.is_empty()
                    || support.len() != lambda.len()
                    || !alpha.is_positive()
                    || *alpha >= Rational::one()
                    || lambda.iter().any(|l| !l.is_positive())
                    || lambda.iter().sum::<Rational>() != Rational::one()
                    || support.windows(2).any(|w| w[0] >= w[1])
                {
                    return false;
                }
                let in_box = |z: &Point| z.bits() & !hi == 0 && lo & !z.bits() == 0;
                if support.iter().any(|z| z == x || z == y || !q.contains(z) || !in_box(z)) {
                    return false;
                }
                let beta = Rational::one() - alpha;
                (0..n as u32).all(|i| {
                    let lhs: Rational = support
                        .iter()
                        .zip(lambda)
                        .filter(|(z, _)| z.bit(i))
                        .map(|(_, l)| l.clone())
                        .sum();
                    let mut rhs = Rational::zero();
                    if x.bit(i) {
                        rhs += alpha;
                    }
                    if y.bit(i) {
                        rhs += &beta;
                    }
                    lhs == rhs
                })
            }
            Certificate::AveragingTuple(t) => {
                if t.k == 0 || t.points.len() != 2 * t.k as usize {
                    return false;
                }
                if t.points.iter().any(|z| z == x || z == y || !q.contains(z)) {
                    return false;
                }
                (0..n as u32).all(|i| {
                    let sum = t.points.iter().filter(|z| z.bit(i)).count() as u32;
                    sum == t.k * (x.bit(i) as u32 + y.bit(i) as u32)
                })
            }
        }
    }

    pub fn to_json(&self) -> Value {
        let rats = |v: &[Rational]| v.iter().map(|r| r.to_string()).collect::<Vec<_>>();
        let hexes = |v: &[Point]| v.iter().map(Point::to_hex).collect::<Vec<_>>();
        match self {
            Certificate::WitnessCount { count } => json!({"kind": "witness_count", "count": count}),
            Certificate::Hyperplane { normal, offset } => json!({
                "kind": "hyperplane", "normal": rats(normal), "offset": offset.to_string()
            }),
            Certificate::SegmentSeparator { normal, offset } => json!({
                "kind": "segment_separator", "normal": rats(normal), "offset": offset.to_string()
            }),
            Certificate::ConvexCombination {
                support,
                lambda,
                alpha,
            } => json!({
                "kind": "convex_combination",
                "support": hexes(support),
                "lambda": rats(lambda),
                "alpha": alpha.to_string()
            }),
            Certificate::AveragingTuple(t) => json!({
                "kind": "averaging_tuple", "k": t.k, "points": hexes(&t.points)
            }),
        }
    }
}

fn dot(normal: &[Rational], z: &Point) -> Rational {
    let mut acc = Rational::zero();
    for (i, c) in normal.iter().enumerate() {
        if z.bit(i as u32) {
            acc += c;
        }
    }
    acc
}

#[derive(Clone, Debug, PartialEq)]
pub struct EdgeStatus {
    pub verdict: Verdict,
    pub certificate: Certificate,
}

impl EdgeStatus {
    fn new(certificate: Certificate) -> Self {
        EdgeStatus {
            verdict: certificate.proves(),
            certificate,
        }
    }

    pub fn is_edge(&self) -> bool {
        self.verdict == Verdict::Edge
    }

    /// Verdict matches the certificate and the certificate replays.
    pub fn replays(&self, q: &VertexSet, x: &Point, y: &Point) -> bool {
        self.certificate.proves() == self.verdict && self.certificate.replays(q, x, y)
    }
}

/// Projected coordinates of a pair: free bit positions and the bits of `x` there.
struct Projection {
    coords: Vec<u32>,
    x: u64,
}

impl Projection {
    fn new(x: u64, y: u64) -> Self {
        let free = x ^ y;
        Projection {
            coords: (0..64).filter(|i| free >> i & 1 == 1).collect(),
            x,
        }
    }

    /// `z'_i = 1` iff `z` agrees with `x` on free coordinate `i`.
    #[inline]
    fn agrees(&self, z: u64, i: usize) -> bool {
        let c = self.coords[i];
        (z >> c & 1) == (self.x >> c & 1)
    }
}

fn projected_system(proj: &Projection, witnesses: &[u64]) -> FeasibilitySystem {
    let d = proj.coords.len();
    let k = witnesses.len();
    let mut a = Vec::with_capacity(d);
    a.push(vec![lp::int(1); k]);
    for i in 1..d {
        a.push(
            witnesses
                .iter()
                .map(|&z| lp::int(proj.agrees(z, i) as i64 - proj.agrees(z, 0) as i64))
                .collect(),
        );
    }
    let mut b = vec![lp::int(0); d];
    b[0] = lp::int(1);
    FeasibilitySystem::new(a, b, k).expect("consistent dimensions")
}

fn convex_combination(n: u32, witnesses: &[u64], lambda: &[Rational], alpha: Rational) -> Certificate {
    let (support, lambda): (Vec<Point>, Vec<Rational>) = witnesses
        .iter()
        .zip(lambda)
        .filter(|(_, l)| l.is_positive())
        .map(|(&z, l)| (Point::from_raw(z, n), l.clone()))
        .unzip();
    Certificate::ConvexCombination {
        support,
        lambda,
        alpha,
    }
}

/// Extends a separating functional on the projected coordinates to a
/// hyperplane through `x` and `y`.
///
/// `coef[i]` multiplies `z'_i`; requires `Σ coef = 0` and
/// `Σ coef_i z'_i <= -margin` for every witness.
fn materialize_hyperplane(n: u32, proj: &Projection, coef: &[Rational], margin: &Rational) -> Certificate {
    debug_assert!(margin.is_positive());
    let penalty: Rational = margin + coef.iter().filter(|c| c.is_positive()).sum::<Rational>();
    let mut normal = vec![Rational::zero(); n as usize];
    let mut constant = Rational::zero();
    let free = proj.coords.iter().fold(0u64, |m, &c| m | 1 << c);
    for (c, &coord) in coef.iter().zip(&proj.coords) {
        // z' = z where x is 1, 1 - z where x is 0
        if proj.x >> coord & 1 == 1 {
            normal[coord as usize] += c;
        } else {
            normal[coord as usize] -= c;
            constant += c;
        }
    }
    for j in (0..n).filter(|j| free >> j & 1 == 0) {
        // [z_j != x_j] = z_j where x is 0, 1 - z_j where x is 1
        if proj.x >> j & 1 == 0 {
            normal[j as usize] -= &penalty;
        } else {
            normal[j as usize] += &penalty;
            constant -= &penalty;
        }
    }
    // h(z) = normal·z + constant vanishes at x and y, <= -margin elsewhere
    let normal: Vec<Rational> = normal.into_iter().map(|v| v / margin).collect();
    let offset = -(constant / margin);
    Certificate::Hyperplane { normal, offset }
}

/// Edge certificate when some free coordinate is constant over all witnesses.
fn coverage_certificate(n: u32, proj: &Projection, witnesses: &[u64]) -> Option<Certificate> {
    let d = proj.coords.len();
    let dm1 = lp::int(d as i64 - 1);
    for j in 0..d {
        let ones = witnesses.iter().filter(|&&z| proj.agrees(z, j)).count();
        let coef: Vec<Rational> = if ones == 0 {
            // (d-1) z'_j - Σ_{i≠j} z'_i <= -|z'| <= -1
            (0..d).map(|i| if i == j { dm1.clone() } else { lp::int(-1) }).collect()
        } else if ones == witnesses.len() {
            // Σ_{i≠j} z'_i - (d-1) <= -1, as a homogeneous functional with the
            // constant carried by z'_j = 1
            (0..d).map(|i| if i == j { -dm1.clone() } else { lp::int(1) }).collect()
        } else {
            continue;
        };
        return Some(materialize_hyperplane(n, proj, &coef, &lp::int(1)));
    }
    None
}

/// Projected LP by column generation: solve on a spread subset of the
/// witnesses, price the rest against the Farkas vector, add the worst
/// offenders and repeat. A subset solution or an unviolated Farkas vector is
/// final for the whole witness set.
fn projected_lp(n: u32, x: u64, y: u64, witnesses: &[u64]) -> Certificate {
    let proj = Projection::new(x, y);
    let d = proj.coords.len();
    let target = 2 * d + 2;
    let mut active: Vec<usize> = if witnesses.len() <= target {
        (0..witnesses.len()).collect()
    } else {
        let step = witnesses.len() / target;
        (0..target).map(|i| i * step).collect()
    };
    loop {
        let cols: Vec<u64> = active.iter().map(|&i| witnesses[i]).collect();
        let sys = projected_system(&proj, &cols);
        match lp::solve_feasibility(&sys).expect("well-formed system") {
            LpVerdict::Feasible(lambda) => {
                // α = common projected coordinate value
                let alpha: Rational = cols
                    .iter()
                    .zip(&lambda)
                    .filter(|(&z, _)| proj.agrees(z, 0))
                    .map(|(_, l)| l.clone())
                    .sum();
                return convex_combination(n, &cols, &lambda, alpha);
            }
            LpVerdict::Infeasible(farkas) => {
                let mut coef = vec![Rational::zero(); d];
                coef[1..d].clone_from_slice(&farkas[1..d]);
                for f in &farkas[1..d] {
                    coef[0] -= f;
                }
                let mut in_active = vec![false; witnesses.len()];
                for &i in &active {
                    in_active[i] = true;
                }
                let mut violated: Vec<(Rational, usize)> = (0..witnesses.len())
                    .filter(|&i| !in_active[i])
                    .filter_map(|i| {
                        let z = witnesses[i];
                        let phi: Rational = (0..d).filter(|&c| proj.agrees(z, c)).map(|c| &coef[c]).sum();
                        let slack = phi + &farkas[0];
                        slack.is_positive().then_some((slack, i))
                    })
                    .collect();
                if violated.is_empty() {
                    return materialize_hyperplane(n, &proj, &coef, &farkas[0]);
                }
                violated.sort_by(|a, b| b.0.cmp(&a.0).then(a.1.cmp(&b.1)));
                active.extend(violated.into_iter().take(d + 1).map(|(_, i)| i));
                active.sort_unstable();
            }
        }
    }
}

fn oracle_full(q: &VertexSet, x: u64, y: u64) -> Certificate {
    let n = q.dim();
    let rest: Vec<u64> = q.points().iter().map(|p| p.bits()).filter(|&z| z != x && z != y).collect();
    let k = rest.len() + 2;
    let alpha_col = rest.len();
    // rows: n coordinates, Σλ = 1, α + s = 1
    let mut a = Vec::with_capacity(n as usize + 2);
    let mut b = Vec::with_capacity(n as usize + 2);
    for i in 0..n {
        let mut row: Vec<Rational> = rest.iter().map(|&z| lp::int((z >> i & 1) as i64)).collect();
        row.push(lp::int(-((x >> i & 1) as i64 - (y >> i & 1) as i64)));
        row.push(lp::int(0));
        a.push(row);
        b.push(lp::int((y >> i & 1) as i64));
    }
    let mut sum_row = vec![lp::int(1); rest.len()];
    sum_row.extend([lp::int(0), lp::int(0)]);
    a.push(sum_row);
    b.push(lp::int(1));
    let mut cap_row = vec![lp::int(0); k];
    cap_row[alpha_col] = lp::int(1);
    cap_row[alpha_col + 1] = lp::int(1);
    a.push(cap_row);
    b.push(lp::int(1));
    let sys = FeasibilitySystem::new(a, b, k).expect("consistent dimensions");
    match lp::solve_feasibility(&sys).expect("well-formed system") {
        LpVerdict::Feasible(sol) => {
            let alpha = sol[alpha_col].clone();
            convex_combination(n, &rest, &sol[..rest.len()], alpha)
        }
        LpVerdict::Infeasible(u) => {
            // u·z + u_0 <= 0 on the rest, > 0 at x and y
            let normal = u[..n as usize].to_vec();
            let offset = -u[n as usize].clone();
            Certificate::SegmentSeparator { normal, offset }
        }
    }
}

/// Hyperplane search with constraint generation: the `c·z <= b - 1` rows
/// start from a spread subset of `Q \ {x, y}`, and points the current
/// hyperplane misses are added until none remain. An infeasible subset is
/// already a non-edge.
fn oracle_hyperplane(q: &VertexSet, x: u64, y: u64) -> Certificate {
    let n = q.dim() as usize;
    let rest: Vec<u64> = q.points().iter().map(|p| p.bits()).filter(|&z| z != x && z != y).collect();
    let target = 2 * n + 2;
    let mut active: Vec<usize> = if rest.len() <= target {
        (0..rest.len()).collect()
    } else {
        let step = rest.len() / target;
        (0..target).map(|i| i * step).collect()
    };
    loop {
        let cols: Vec<u64> = active.iter().map(|&i| rest[i]).collect();
        match hyperplane_lp(n, x, y, &cols) {
            Ok((normal, offset)) => {
                let bound = &offset - Rational::one();
                let mut missed: Vec<(Rational, usize)> = (0..rest.len())
                    .filter_map(|i| {
                        let excess = dot(&normal, &Point::from_raw(rest[i], n as u32)) - &bound;
                        excess.is_positive().then_some((excess, i))
                    })
                    .collect();
                if missed.is_empty() {
                    return Certificate::Hyperplane { normal, offset };
                }
                missed.sort_by(|a, b| b.0.cmp(&a.0).then(a.1.cmp(&b.1)));
                active.extend(missed.into_iter().take(n + 1).map(|(_, i)| i));
                active.sort_unstable();
            }
            Err((lambda, alpha)) => return convex_combination(q.dim(), &cols, &lambda, alpha),
        }
    }
}

/// `Ok((c, b))` with `c·x = c·y = b` and `c·z <= b - 1` over `rest`, or
/// `Err((λ, α))` from the Farkas vector.
fn hyperplane_lp(n: usize, x: u64, y: u64, rest: &[u64]) -> std::result::Result<(Vec<Rational>, Rational), (Vec<Rational>, Rational)> {
    // columns: c+ (n), c- (n), b+, b-, one slack per rest point
    let k = 2 * n + 2 + rest.len();
    let row_for = |z: u64, slack: Option<usize>, rhs: i64| {
        let mut row = vec![lp::int(0); k];
        for i in 0..n {
            let v = (z >> i & 1) as i64;
            row[i] = lp::int(v);
            row[n + i] = lp::int(-v);
        }
        row[2 * n] = lp::int(-1);
        row[2 * n + 1] = lp::int(1);
        if let Some(s) = slack {
            row[2 * n + 2 + s] = lp::int(1);
        }
        (row, lp::int(rhs))
    };
    let mut rows = vec![row_for(x, None, 0), row_for(y, None, 0)];
    rows.extend(rest.iter().enumerate().map(|(s, &z)| row_for(z, Some(s), -1)));
    let (a, b): (Vec<_>, Vec<_>) = rows.into_iter().unzip();
    let sys = FeasibilitySystem::new(a, b, k).expect("consistent dimensions");
    match lp::solve_feasibility(&sys).expect("well-formed system") {
        LpVerdict::Feasible(sol) => {
            let normal = (0..n).map(|i| &sol[i] - &sol[n + i]).collect();
            let offset = &sol[2 * n] - &sol[2 * n + 1];
            Ok((normal, offset))
        }
        LpVerdict::Infeasible(yv) => {
            // μ_z = -y_z >= 0, and y_x x + y_y y = Σ μ_z z with y_x + y_y = Σ μ_z
            let mu: Vec<Rational> = yv[2..].iter().map(|v| -v.clone()).collect();
            let total: Rational = mu.iter().sum();
            let lambda: Vec<Rational> = mu.iter().map(|m| m / &total).collect();
            let alpha = &yv[0] / &total;
            Err((lambda, alpha))
        }
    }
}

fn classify(q: &VertexSet, x: u64, y: u64, method: Method) -> Certificate {
    let n = q.dim();
    match method {
        Method::Auto => {
            let count = witness_count_capped(q, x, y, 2);
            if count <= 1 {
                return Certificate::WitnessCount { count };
            }
            let witnesses = witness_bits(q, x, y);
            let proj = Projection::new(x, y);
            coverage_certificate(n, &proj, &witnesses).unwrap_or_else(|| projected_lp(n, x, y, &witnesses))
        }
        Method::Lp => projected_lp(n, x, y, &witness_bits(q, x, y)),
        Method::OracleFull => oracle_full(q, x, y),
        Method::OracleHyperplane => oracle_hyperplane(q, x, y),
    }
}

/// Decides whether `[x, y]` is an edge of `conv(Q)`.
pub fn edge_status(q: &VertexSet, x: &Point, y: &Point, method: Method) -> Result<EdgeStatus> {
    check_pair(q, x, y)?;
    Ok(EdgeStatus::new(classify(q, x.bits(), y.bits(), method)))
}

/// Limit on `k`-multisets enumerated per half of the meet-in-the-middle search.
pub const MULTISET_BUDGET: u64 = 2_000_000;

fn multiset_count(items: u64, k: u32) -> u64 {
    // C(items + k - 1, k), saturating
    let mut acc: u128 = 1;
    for i in 0..k as u128 {
        acc = acc * (items as u128 + i) / (i + 1);
        if acc > u64::MAX as u128 {
            return u64::MAX;
        }
    }
    acc as u64
}

/// Smallest `k <= k_max` with a `2k`-multiset of `W(x, y)` averaging to the
/// midpoint of `x` and `y`.
///
/// Meet in the middle: every `k`-multiset is keyed by its one-counts on the
/// free coordinates, and a partner must fill each count up to `k`.
pub fn averaging_certificate_search(
    q: &VertexSet,
    x: &Point,
    y: &Point,
    k_max: u32,
) -> Result<Option<AveragingTuple>> {
    check_pair(q, x, y)?;
    let w = witness_bits(q, x.bits(), y.bits());
    if w.len() < 2 {
        return Ok(None);
    }
    let proj = Projection::new(x.bits(), y.bits());
    let d = proj.coords.len();
    let key_of = |z: u64| -> Vec<u8> { proj.coords.iter().map(|&c| (z >> c & 1) as u8).collect() };
    let keys: Vec<Vec<u8>> = w.iter().map(|&z| key_of(z)).collect();
    for k in 1..=k_max.min(255) {
        let size = multiset_count(w.len() as u64, k);
        if size > MULTISET_BUDGET {
            return Err(Error::BudgetExceeded {
                what: "averaging multisets",
                size,
                limit: MULTISET_BUDGET,
            });
        }
        let mut halves: std::collections::HashMap<Vec<u8>, Vec<usize>> = Default::default();
        let mut idx = vec![0usize; k as usize];
        loop {
            let mut sum = vec![0u8; d];
            for &i in &idx {
                for (s, v) in sum.iter_mut().zip(&keys[i]) {
                    *s += v;
                }
            }
            let target: Vec<u8> = sum.iter().map(|&s| k as u8 - s).collect();
            if let Some(other) = halves.get(&target).or(if target == sum { Some(&idx) } else { None }) {
                let points = idx
                    .iter()
                    .chain(other)
                    .map(|&i| Point::from_raw(w[i], q.dim()))
                    .collect();
                return Ok(Some(AveragingTuple { k, points }));
            }
            halves.entry(sum).or_insert_with(|| idx.clone());
            // next nondecreasing index vector
            let mut pos = idx.len();
            loop {
                if pos == 0 {
                    break;
                }
                pos -= 1;
                if idx[pos] + 1 < w.len() {
                    let v = idx[pos] + 1;
                    for slot in &mut idx[pos..] {
                        *slot = v;
                    }
                    pos = usize::MAX;
                    break;
                }
            }
            if pos != usize::MAX {
                break;
            }
        }
    }
    Ok(None)
}

#[derive(Clone, Debug, PartialEq)]
pub struct PairRecord {
    pub i: u32,
    pub j: u32,
    pub certificate: Option<Certificate>,
}

#[derive(Clone, Copy, Debug)]
pub struct BuildOptions {
    pub method: Method,
    /// Classify a uniform random subset of this many pairs instead of all.
    pub pair_budget: Option<u64>,
    pub keep_certificates: bool,
    pub sample_seed: u64,
    pub parallel: bool,
}

impl Default for BuildOptions {
    fn default() -> Self {
        BuildOptions {
            method: Method::Auto,
            pair_budget: None,
            keep_certificates: false,
            sample_seed: 0,
            parallel: true,
        }
    }
}

impl BuildOptions {
    pub fn with_method(method: Method) -> Self {
        BuildOptions {
            method,
            ..Default::default()
        }
    }
}

#[derive(Clone, Debug)]
pub struct PolytopeGraph {
    pub vertices: VertexSet,
    pub method: Method,
    pub edges: Vec<PairRecord>,
    pub non_edges: Vec<PairRecord>,
    /// True when only a random subset of pairs was classified.
    pub sampled: bool,
}

impl PolytopeGraph {
    pub fn num_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn num_pairs_classified(&self) -> usize {
        self.edges.len() + self.non_edges.len()
    }

    pub fn edge_pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.edges.iter().map(|r| (r.i as usize, r.j as usize))
    }

    pub fn to_json(&self) -> Value {
        let (p, seed) = match self.vertices.provenance() {
            Provenance::Sampled { seed, p, .. } => (json!(p), json!(seed)),
            Provenance::Explicit => (Value::Null, Value::Null),
        };
        let vertices: Vec<String> = self.vertices.points().iter().map(Point::to_hex).collect();
        let edges: Vec<Value> = self.edges.iter().map(|r| json!([r.i, r.j])).collect();
        let non_edges: Vec<Value> = self
            .non_edges
            .iter()
            .map(|r| json!([r.i, r.j, r.certificate.as_ref().map_or(Value::Null, Certificate::to_json)]))
            .collect();
        json!({
            "n": self.vertices.dim(),
            "p": p,
            "seed": seed,
            "method": self.method.name(),
            "vertices": vertices,
            "edges": edges,
            "non_edges": non_edges,
        })
    }
}

fn pair_from_index(idx: u64, m: u64) -> (u32, u32) {
    // row i holds pairs (i, i+1..m); offset(i) = i*m - i(i+1)/2
    let offset = |i: u64| i * m - i * (i + 1) / 2;
    let (mut lo, mut hi) = (0u64, m - 1);
    while lo + 1 < hi {
        let mid = (lo + hi) / 2;
        if offset(mid) <= idx {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let i = lo;
    let j = i + 1 + (idx - offset(i));
    (i as u32, j as u32)
}

/// Uniform sample of `budget` distinct pair indices (Floyd's algorithm), ascending.
fn sample_pairs(total: u64, budget: u64, seed: u64) -> Vec<u64> {
    let mut rng = SplitMix64::new(seed);
    let mut chosen = std::collections::BTreeSet::new();
    for t in total - budget..total {
        let r = rng.below(t + 1);
        if !chosen.insert(r) {
            chosen.insert(t);
        }
    }
    chosen.into_iter().collect()
}

/// Classifies every pair of `Q` (or a uniform sample of pairs).
pub fn build_graph(q: &VertexSet, opts: &BuildOptions) -> PolytopeGraph {
    let m = q.len() as u64;
    let total = m * m.saturating_sub(1) / 2;
    let (pairs, sampled): (Vec<(u32, u32)>, bool) = match opts.pair_budget {
        Some(budget) if budget < total => (
            sample_pairs(total, budget, opts.sample_seed)
                .into_iter()
                .map(|idx| pair_from_index(idx, m))
                .collect(),
            true,
        ),
        _ => (
            (0..m as u32)
                .flat_map(|i| (i + 1..m as u32).map(move |j| (i, j)))
                .collect(),
            false,
        ),
    };
    let pts = q.points();
    let run = |&(i, j): &(u32, u32)| {
        let cert = classify(q, pts[i as usize].bits(), pts[j as usize].bits(), opts.method);
        (i, j, cert)
    };
    let results: Vec<(u32, u32, Certificate)> = if opts.parallel {
        pairs.par_iter().map(run).collect()
    } else {
        pairs.iter().map(run).collect()
    };
    let mut edges = Vec::new();
    let mut non_edges = Vec::new();
    for (i, j, cert) in results {
        let verdict = cert.proves();
        let record = PairRecord {
            i,
            j,
            certificate: opts.keep_certificates.then_some(cert),
        };
        match verdict {
            Verdict::Edge => edges.push(record),
            Verdict::NonEdge => non_edges.push(record),
        }
    }
    PolytopeGraph {
        vertices: q.clone(),
        method: opts.method,
        edges,
        non_edges,
        sampled,
    }
}

/// First non-adjacent pair in index order, if any.
///
/// Pairs with at most one witness are skipped without an LP.
pub fn find_non_edge(q: &VertexSet, method: Method) -> Option<(usize, usize, EdgeStatus)> {
    let pts = q.points();
    for i in 0..pts.len() {
        for j in i + 1..pts.len() {
            let (x, y) = (pts[i].bits(), pts[j].bits());
            if method == Method::Auto && witness_count_capped(q, x, y, 2) <= 1 {
                continue;
            }
            let cert = classify(q, x, y, method);
            if cert.proves() == Verdict::NonEdge {
                return Some((i, j, EdgeStatus::new(cert)));
            }
        }
    }
    None
}
