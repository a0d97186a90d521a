//! Exact feasibility of `A λ = b, λ >= 0` over the rationals.
//!
//! Phase-1 simplex with Bland's rule on an integer tableau. Every row of the
//! input is scaled to integers, rows with negative right-hand side are
//! negated, and one artificial column per row forms the starting basis.
//! Pivots use the fraction-free update
//!
//! ```text
//! T[i][j] <- (T[i][j] * T[r][s] - T[i][s] * T[r][j]) / D,   D <- T[r][s]
//! ```
//!
//! where `D` is the previous pivot. All divisions are exact and `D` stays
//! positive, so the true tableau is `T / D`. The solver first runs on
//! `i128` with checked arithmetic and falls back to `BigInt` on overflow.
//!
//! A feasible system yields `λ`; an infeasible one yields a Farkas vector
//! `y` with `yᵀA <= 0` and `yᵀb > 0`, read off the phase-1 duals.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Rational = BigRational;

pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(v: i64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

#[derive(Clone, Debug, PartialEq)]
pub struct FeasibilitySystem {
    a: Vec<Vec<Rational>>,
    b: Vec<Rational>,
    cols: usize,
}

impl FeasibilitySystem {
    /// `a` is row-major, `m x k`; `b` has length `m`.
    pub fn new(a: Vec<Vec<Rational>>, b: Vec<Rational>, cols: usize) -> Result<Self> {
        if a.len() != b.len() {
            return Err(Error::DimensionMismatch {
                left: a.len() as u32,
                right: b.len() as u32,
            });
        }
        if let Some(row) = a.iter().find(|r| r.len() != cols) {
            return Err(Error::DimensionMismatch {
                left: cols as u32,
                right: row.len() as u32,
            });
        }
        Ok(FeasibilitySystem { a, b, cols })
    }

    pub fn from_integers(a: &[Vec<i64>], b: &[i64]) -> Result<Self> {
        let cols = a.first().map_or(0, Vec::len);
        FeasibilitySystem::new(
            a.iter().map(|r| r.iter().map(|&v| int(v)).collect()).collect(),
            b.iter().map(|&v| int(v)).collect(),
            cols,
        )
    }

    pub fn rows(&self) -> usize {
        self.b.len()
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn a(&self) -> &[Vec<Rational>] {
        &self.a
    }

    pub fn b(&self) -> &[Rational] {
        &self.b
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum LpVerdict {
    Feasible(Vec<Rational>),
    Infeasible(Vec<Rational>),
}

impl LpVerdict {
    pub fn is_feasible(&self) -> bool {
        matches!(self, LpVerdict::Feasible(_))
    }
}

/// Exact replay: `λ >= 0` and `A λ = b`.
pub fn verify_feasible(sys: &FeasibilitySystem, lambda: &[Rational]) -> bool {
    if lambda.len() != sys.cols || lambda.iter().any(Signed::is_negative) {
        return false;
    }
    sys.a.iter().zip(&sys.b).all(|(row, bi)| {
        let lhs: Rational = row
            .iter()
            .zip(lambda)
            .filter(|(aij, l)| !aij.is_zero() && !l.is_zero())
            .map(|(aij, l)| aij * l)
            .sum();
        lhs == *bi
    })
}

/// Exact replay: `yᵀA <= 0` componentwise and `yᵀb > 0`.
pub fn verify_farkas(sys: &FeasibilitySystem, y: &[Rational]) -> bool {
    if y.len() != sys.rows() {
        return false;
    }
    let yb: Rational = y.iter().zip(&sys.b).map(|(yi, bi)| yi * bi).sum();
    if !yb.is_positive() {
        return false;
    }
    (0..sys.cols).all(|j| {
        let v: Rational = y
            .iter()
            .zip(&sys.a)
            .filter(|(yi, row)| !yi.is_zero() && !row[j].is_zero())
            .map(|(yi, row)| yi * &row[j])
            .sum();
        !v.is_positive()
    })
}

trait TabNum: Clone + Ord + Sized {
    fn zero() -> Self;
    fn one() -> Self;
    fn from_big(v: &BigInt) -> Option<Self>;
    fn to_big(&self) -> BigInt;
    fn mul(&self, o: &Self) -> Option<Self>;
    fn sub(&self, o: &Self) -> Option<Self>;
    /// Exact division.
    fn div(&self, o: &Self) -> Self;
    fn is_zero(&self) -> bool;
    fn is_pos(&self) -> bool;
    fn is_neg(&self) -> bool;
}

impl TabNum for i128 {
    fn zero() -> Self {
        0
    }
    fn one() -> Self {
        1
    }
    fn from_big(v: &BigInt) -> Option<Self> {
        v.to_i128()
    }
    fn to_big(&self) -> BigInt {
        BigInt::from(*self)
    }
    fn mul(&self, o: &Self) -> Option<Self> {
        self.checked_mul(*o)
    }
    fn sub(&self, o: &Self) -> Option<Self> {
        self.checked_sub(*o)
    }
    fn div(&self, o: &Self) -> Self {
        debug_assert_eq!(self % o, 0);
        self / o
    }
    fn is_zero(&self) -> bool {
        *self == 0
    }
    fn is_pos(&self) -> bool {
        *self > 0
    }
    fn is_neg(&self) -> bool {
        *self < 0
    }
}

impl TabNum for BigInt {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn from_big(v: &BigInt) -> Option<Self> {
        Some(v.clone())
    }
    fn to_big(&self) -> BigInt {
        self.clone()
    }
    fn mul(&self, o: &Self) -> Option<Self> {
        Some(self * o)
    }
    fn sub(&self, o: &Self) -> Option<Self> {
        Some(self - o)
    }
    fn div(&self, o: &Self) -> Self {
        debug_assert!(Zero::is_zero(&(self % o)));
        self / o
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn is_pos(&self) -> bool {
        Signed::is_positive(self)
    }
    fn is_neg(&self) -> bool {
        Signed::is_negative(self)
    }
}

/// Integer form of the system after row scaling and sign normalization.
struct IntegerForm {
    rows: Vec<Vec<BigInt>>,
    rhs: Vec<BigInt>,
    /// Multiplier applied to each original row (nonzero, sign included).
    scale: Vec<BigInt>,
}

fn integer_form(sys: &FeasibilitySystem) -> IntegerForm {
    let mut rows = Vec::with_capacity(sys.rows());
    let mut rhs = Vec::with_capacity(sys.rows());
    let mut scale = Vec::with_capacity(sys.rows());
    for (row, bi) in sys.a.iter().zip(&sys.b) {
        let mut l = bi.denom().clone();
        for v in row {
            l = l.lcm(v.denom());
        }
        if bi.is_negative() {
            l = -l;
        }
        let to_int = |v: &Rational| (v.numer() * &l) / v.denom();
        rows.push(row.iter().map(to_int).collect());
        rhs.push(to_int(bi));
        scale.push(l);
    }
    IntegerForm { rows, rhs, scale }
}

enum RawVerdict<T> {
    Feasible { values: Vec<T>, denom: T },
    Infeasible { duals: Vec<T> },
}

struct Tableau<T> {
    /// m constraint rows then the objective row; columns: k originals,
    /// m artificials, rhs.
    t: Vec<Vec<T>>,
    basis: Vec<usize>,
    denom: T,
    k: usize,
    m: usize,
}

impl<T: TabNum> Tableau<T> {
    fn build(form: &IntegerForm, k: usize) -> Option<Self> {
        let m = form.rows.len();
        let width = k + m + 1;
        let mut t = Vec::with_capacity(m + 1);
        let mut obj = vec![T::zero(); width];
        for (i, (row, bi)) in form.rows.iter().zip(&form.rhs).enumerate() {
            let mut r = Vec::with_capacity(width);
            for v in row {
                r.push(T::from_big(v)?);
            }
            r.extend((0..m).map(|a| if a == i { T::one() } else { T::zero() }));
            r.push(T::from_big(bi)?);
            for j in 0..k {
                obj[j] = obj[j].sub(&r[j])?;
            }
            obj[width - 1] = obj[width - 1].sub(&r[width - 1])?;
            t.push(r);
        }
        t.push(obj);
        Some(Tableau {
            t,
            basis: (k..k + m).collect(),
            denom: T::one(),
            k,
            m,
        })
    }

    fn pivot(&mut self, r: usize, s: usize) -> Option<()> {
        let pivot_row = self.t[r].clone();
        let prs = pivot_row[s].clone();
        for (i, row) in self.t.iter_mut().enumerate() {
            if i == r {
                continue;
            }
            let ris = row[s].clone();
            if ris.is_zero() {
                // (T_ij * T_rs - 0) / D
                for v in row.iter_mut() {
                    if !v.is_zero() {
                        *v = v.mul(&prs)?.div(&self.denom);
                    }
                }
                continue;
            }
            for (v, prj) in row.iter_mut().zip(&pivot_row) {
                let a = v.mul(&prs)?;
                let next = if prj.is_zero() { a } else { a.sub(&ris.mul(prj)?)? };
                *v = next.div(&self.denom);
            }
        }
        self.denom = prs;
        self.basis[r] = s;
        Some(())
    }

    fn run(mut self) -> Option<RawVerdict<T>> {
        let width = self.k + self.m + 1;
        let rhs = width - 1;
        // Dantzig's rule, switching to Bland's rule for good after a run of
        // m degenerate pivots
        let mut bland = false;
        let mut degenerate_run = 0usize;
        loop {
            let obj = &self.t[self.m];
            let entering = if bland {
                (0..rhs).find(|&j| obj[j].is_neg())
            } else {
                (0..rhs).filter(|&j| obj[j].is_neg()).min_by(|&a, &b| obj[a].cmp(&obj[b]).then(a.cmp(&b)))
            };
            let Some(s) = entering else {
                break;
            };
            let mut best: Option<usize> = None;
            for i in 0..self.m {
                let ais = &self.t[i][s];
                if !ais.is_pos() {
                    continue;
                }
                best = match best {
                    None => Some(i),
                    Some(b) => {
                        // compare rhs_i / a_is against rhs_b / a_bs
                        let lhs = self.t[i][rhs].mul(&self.t[b][s])?;
                        let rhs_v = self.t[b][rhs].mul(ais)?;
                        match lhs.cmp(&rhs_v) {
                            Ordering::Less => Some(i),
                            Ordering::Equal if self.basis[i] < self.basis[b] => Some(i),
                            _ => Some(b),
                        }
                    }
                };
            }
            // phase 1 is bounded below by zero, so some entry is positive
            let r = best.expect("phase-1 objective is bounded");
            if self.t[r][rhs].is_zero() {
                degenerate_run += 1;
                bland |= degenerate_run >= self.m;
            } else {
                degenerate_run = 0;
            }
            self.pivot(r, s)?;
        }
        let obj = &self.t[self.m];
        if obj[rhs].is_zero() {
            let mut values = vec![T::zero(); self.k];
            for (i, &bv) in self.basis.iter().enumerate() {
                if bv < self.k {
                    values[bv] = self.t[i][rhs].clone();
                }
            }
            Some(RawVerdict::Feasible {
                values,
                denom: self.denom.clone(),
            })
        } else {
            let mut duals = Vec::with_capacity(self.m);
            for i in 0..self.m {
                duals.push(self.denom.sub(&obj[self.k + i])?);
            }
            Some(RawVerdict::Infeasible { duals })
        }
    }
}

fn finish<T: TabNum>(raw: RawVerdict<T>, form: &IntegerForm) -> LpVerdict {
    match raw {
        RawVerdict::Feasible { values, denom } => {
            let d = denom.to_big();
            LpVerdict::Feasible(
                values
                    .into_iter()
                    .map(|v| Rational::new(v.to_big(), d.clone()))
                    .collect(),
            )
        }
        RawVerdict::Infeasible { duals } => {
            let mut y: Vec<BigInt> = duals
                .into_iter()
                .zip(&form.scale)
                .map(|(v, s)| v.to_big() * s)
                .collect();
            let g = y.iter().fold(<BigInt as Zero>::zero(), |acc, v| acc.gcd(v));
            let g: BigInt = g;
            if !Zero::is_zero(&g) && !One::is_one(&g) {
                for v in &mut y {
                    *v = &*v / &g;
                }
            }
            LpVerdict::Infeasible(y.into_iter().map(Rational::from_integer).collect())
        }
    }
}

/// Decides whether some `λ >= 0` satisfies `A λ = b`.
pub fn solve_feasibility(sys: &FeasibilitySystem) -> Result<LpVerdict> {
    let k = sys.cols;
    let m = sys.rows();
    if k == 0 {
        // feasible iff b = 0; otherwise y = b certifies (no columns to check)
        return Ok(if sys.b.iter().all(Zero::is_zero) {
            LpVerdict::Feasible(Vec::new())
        } else {
            LpVerdict::Infeasible(sys.b.clone())
        });
    }
    if m == 0 {
        return Ok(LpVerdict::Feasible(vec![Rational::zero(); k]));
    }
    let form = integer_form(sys);
    if let Some(raw) = Tableau::<i128>::build(&form, k).and_then(Tableau::run) {
        return Ok(finish(raw, &form));
    }
    let raw = Tableau::<BigInt>::build(&form, k)
        .and_then(Tableau::run)
        .expect("BigInt arithmetic does not overflow");
    Ok(finish(raw, &form))
}
