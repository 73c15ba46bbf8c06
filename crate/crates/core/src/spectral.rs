//! An equivariant Dirac operator on `L^2(Z_p)`.
//!
//! `D` acts diagonally on characters, `D chi_{m,n} = lambda_n chi_{m,n}` with
//! `lambda_n = ((n+1)^2 p^{n+1})^{1/s}`, the same formula being used for the
//! trivial character (`lambda_0 = p^{1/s}`) so that `D` has no kernel.
//! Everything here is computed at a finite truncation level `L`, i.e. on
//! the span of the `p^L` characters of level at most `L`.
//!
//! The observables are:
//! - partial sums of `Tr |D|^{-t}`, finite as `L -> oo` exactly when
//!   `t >= s`;
//! - commutators `[D, pi(chi_c)]` with multiplication operators, which are
//!   scaled partial permutations supported on characters of level at most
//!   `level(c)`;
//! - equivariance under right translations, which act diagonally on
//!   characters.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::Zero;
use serde_json::json;

use crate::arith;
use crate::dual::{self, CharIndex};
use crate::error::{Error, Result};
use crate::harmonic::CoefficientMap;
use crate::parallel::{self, Strategy};
use crate::report::{float, Table};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiracOperator {
    p: u32,
    s: f64,
}

impl DiracOperator {
    pub fn new(p: u32, s: f64) -> Result<Self> {
        arith::check_prime(p as u64)?;
        if !(s.is_finite() && s > 0.0) {
            return Err(Error::InvalidArgument(format!("summability parameter must be positive, got {s}")));
        }
        Ok(Self { p, s })
    }

    pub fn prime(&self) -> u32 {
        self.p
    }

    pub fn summability(&self) -> f64 {
        self.s
    }

    /// `(n+1)^2 p^{n+1}`.
    fn base(&self, level: u32) -> f64 {
        let n = level as f64;
        (n + 1.0).powi(2) * (self.p as f64).powf(n + 1.0)
    }

    /// `ln((n+1)^2 p^{n+1})`, finite for every level.
    fn ln_base(&self, level: u32) -> f64 {
        let n = level as f64;
        2.0 * (n + 1.0).ln() + (n + 1.0) * (self.p as f64).ln()
    }

    /// Eigenvalue on every character of the given level.
    pub fn eigenvalue_at(&self, level: u32) -> f64 {
        if self.s == 1.0 {
            self.base(level)
        } else {
            self.base(level).powf(1.0 / self.s)
        }
    }

    pub fn eigenvalue(&self, c: &CharIndex) -> f64 {
        self.eigenvalue_at(c.level())
    }

    /// Number of characters of exactly this level.
    fn multiplicity(&self, level: u32) -> f64 {
        let p = self.p as f64;
        if level == 0 {
            1.0
        } else {
            (p - 1.0) * p.powf(level as f64 - 1.0)
        }
    }

    /// `lambda_n^{-t}`; exactly `1 / ((n+1)^2 p^{n+1})` when `t = s`.
    fn term(&self, t: f64, level: u32) -> f64 {
        if t == self.s {
            1.0 / self.base(level)
        } else {
            (-(t / self.s) * self.ln_base(level)).exp()
        }
    }

    /// Sum of `lambda^{-t}` over all characters of one level.
    fn level_sum(&self, t: f64, level: u32) -> f64 {
        let p = self.p as f64;
        if level == 0 {
            return self.term(t, 0);
        }
        if t == self.s {
            let n1 = level as f64 + 1.0;
            return (p - 1.0) / (p * p * n1 * n1);
        }
        let ln = (p - 1.0).ln() + (level as f64 - 1.0) * p.ln() - (t / self.s) * self.ln_base(level);
        ln.exp()
    }

    /// Upper bound for the sum over all levels above `level`.
    fn tail_bound(&self, t: f64, level: u32) -> f64 {
        let p = self.p as f64;
        let alpha = t / self.s;
        if t == self.s {
            (1.0 - 1.0 / p) / p / (level as f64 + 1.0)
        } else if alpha > 1.0 {
            // successive level sums shrink by at least p^{1-alpha}
            let ratio = p.powf(1.0 - alpha);
            self.level_sum(t, level) * ratio / (1.0 - ratio)
        } else {
            f64::INFINITY
        }
    }

    /// Limit of the `t = s` partial sums:
    /// `1/p + ((1 - 1/p)/p) (pi^2/6 - 1)`.
    pub fn trace_limit(&self) -> f64 {
        let p = self.p as f64;
        1.0 / p + (1.0 - 1.0 / p) / p * (PI * PI / 6.0 - 1.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TraceRow {
    pub level: u32,
    /// Number of characters of this level.
    pub count: f64,
    /// `lambda^{-t}` for one character of this level.
    pub term: f64,
    pub level_sum: f64,
    pub partial_sum: f64,
    pub tail_bound: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TraceReport {
    pub p: u32,
    pub s: f64,
    pub t: f64,
    pub rows: Vec<TraceRow>,
}

impl TraceReport {
    pub fn partial_sum(&self) -> f64 {
        self.rows.last().map_or(0.0, |r| r.partial_sum)
    }

    /// Ratios of successive level sums, indexed by the upper level.
    pub fn increment_ratios(&self) -> Vec<(u32, f64)> {
        self.rows.windows(2).map(|w| (w[1].level, w[1].level_sum / w[0].level_sum)).collect()
    }

    /// Rows `level,count,term,partial_sum,tail_bound`.
    pub fn to_table(&self) -> Table {
        let mut t = Table::new(["level", "count", "term", "partial_sum", "tail_bound"]);
        for r in &self.rows {
            t.push(vec![json!(r.level), float(r.count), float(r.term), float(r.partial_sum), float(r.tail_bound)]);
        }
        t
    }

    pub fn to_csv(&self) -> Result<String> {
        self.to_table().to_csv()
    }
}

/// Partial sums of `Tr |D|^{-t}` over the characters of level at most `L`.
pub fn trace_power(d: &DiracOperator, t: f64, max_level: u32) -> Result<TraceReport> {
    trace_power_with(d, t, max_level, Strategy::default())
}

pub fn trace_power_with(d: &DiracOperator, t: f64, max_level: u32, strategy: Strategy) -> Result<TraceReport> {
    if !(t.is_finite() && t > 0.0) {
        return Err(Error::InvalidArgument(format!("exponent must be positive, got {t}")));
    }
    let sums = parallel::map_range(strategy, max_level as usize + 1, |n| d.level_sum(t, n as u32));
    let mut partial = 0.0;
    let rows = sums
        .into_iter()
        .enumerate()
        .map(|(n, level_sum)| {
            let level = n as u32;
            partial += level_sum;
            TraceRow {
                level,
                count: d.multiplicity(level),
                term: d.term(t, level),
                level_sum,
                partial_sum: partial,
                tail_bound: d.tail_bound(t, level),
            }
        })
        .collect();
    Ok(TraceReport { p: d.p, s: d.s, t, rows })
}

/// The `t = s` partial sum `sum_{level(c) <= L} 1/((n+1)^2 p^{n+1})` as an
/// exact rational.
pub fn trace_exact(p: u32, max_level: u32) -> Result<BigRational> {
    arith::check_prime(p as u64)?;
    let p = BigInt::from(p);
    let mut total = BigRational::zero();
    for n in 0..=max_level as usize {
        let count = if n == 0 { BigInt::from(1) } else { (&p - 1) * num_traits::pow(p.clone(), n - 1) };
        let den = BigInt::from((n + 1) * (n + 1)) * num_traits::pow(p.clone(), n + 1);
        total += BigRational::new(count, den);
    }
    Ok(total)
}

/// `D` applied to a function given by its character coefficients.
pub fn apply_dirac(coeffs: &CoefficientMap<Complex64>, d: &DiracOperator) -> Result<CoefficientMap<Complex64>> {
    if coeffs.prime() != d.p {
        return Err(Error::PrimeMismatch { left: d.p, right: coeffs.prime() });
    }
    Ok(coeffs.map(|c, v| v * d.eigenvalue(c)))
}

/// `[D, pi(chi_c)]` in the character basis of level `<= L`. Column `c'`
/// has at most one nonzero entry, `lambda(c + c') - lambda(c')` in row
/// `c + c'`.
#[derive(Debug, Clone, PartialEq)]
pub struct CommutatorMatrix {
    dim: usize,
    columns: Vec<(usize, f64)>,
}

impl CommutatorMatrix {
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// `(row, value)` for each column, in canonical order.
    pub fn columns(&self) -> &[(usize, f64)] {
        &self.columns
    }

    pub fn entry(&self, row: usize, col: usize) -> f64 {
        let (r, v) = self.columns[col];
        if r == row {
            v
        } else {
            0.0
        }
    }

    /// Row-major dense copy.
    pub fn to_dense(&self) -> Vec<Vec<f64>> {
        let mut out = vec![vec![0.0; self.dim]; self.dim];
        for (col, &(row, v)) in self.columns.iter().enumerate() {
            out[row][col] = v;
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CommutatorReport {
    pub character: CharIndex,
    pub level: u32,
    /// Basis characters on which the commutator is nonzero.
    pub columns: Vec<CharIndex>,
    pub rank: usize,
    /// Operator norm: the largest `|lambda(c + c') - lambda(c')|`.
    pub norm: f64,
    /// `(column, row, value)` for each nonzero entry.
    pub entries: Vec<(CharIndex, CharIndex, f64)>,
}

impl CommutatorReport {
    pub fn to_table(&self) -> Table {
        let columns: Vec<String> = self.columns.iter().map(ToString::to_string).collect();
        let mut t = Table::new(["column", "row", "value"])
            .meta("c", json!(self.character.to_string()))
            .meta("L", json!(self.level))
            .meta("columns", json!(columns))
            .meta("rank", json!(self.rank))
            .meta("norm", float(self.norm));
        for (col, row, v) in &self.entries {
            t.push(vec![json!(col.to_string()), json!(row.to_string()), float(*v)]);
        }
        t
    }

    pub fn to_json(&self) -> String {
        self.to_table().to_json()
    }
}

pub fn commutator_matrix(c: &CharIndex, d: &DiracOperator, level: u32) -> Result<(CommutatorReport, CommutatorMatrix)> {
    if c.prime() != d.p {
        return Err(Error::PrimeMismatch { left: d.p, right: c.prime() });
    }
    if level < c.level() {
        return Err(Error::InsufficientLevel { needed: c.level(), available: level });
    }
    let basis = dual::enumerate(d.p, level)?;
    let lambda = d.eigenvalue(c);
    let mut columns = Vec::with_capacity(basis.len());
    let mut entries = Vec::new();
    for b in &basis {
        let image = c.dual_add(b)?;
        let value = d.eigenvalue(&image) - d.eigenvalue(b);
        columns.push((image.position(), value));
        if value != 0.0 {
            entries.push((*b, image, value));
        }
    }
    debug_assert!(lambda > 0.0);
    let norm = entries.iter().map(|e| e.2.abs()).fold(0.0, f64::max);
    let report = CommutatorReport {
        character: *c,
        level,
        columns: entries.iter().map(|e| e.0).collect(),
        rank: entries.len(),
        norm,
        entries,
    };
    Ok((report, CommutatorMatrix { dim: basis.len(), columns }))
}

/// Sparse square matrix used to check that `D` commutes with translations.
#[derive(Debug, Clone, Default, PartialEq)]
struct SparseMatrix {
    entries: BTreeMap<(usize, usize), Complex64>,
}

impl SparseMatrix {
    fn diagonal(values: impl IntoIterator<Item = Complex64>) -> Self {
        Self { entries: values.into_iter().enumerate().map(|(i, v)| ((i, i), v)).collect() }
    }

    fn mul(&self, other: &Self) -> Self {
        let mut by_row: BTreeMap<usize, Vec<(usize, Complex64)>> = BTreeMap::new();
        for (&(i, j), &v) in &other.entries {
            by_row.entry(i).or_default().push((j, v));
        }
        let mut out = Self::default();
        for (&(i, k), &a) in &self.entries {
            for &(j, b) in by_row.get(&k).map(Vec::as_slice).unwrap_or(&[]) {
                *out.entries.entry((i, j)).or_default() += a * b;
            }
        }
        out
    }

    fn max_abs_diff(&self, other: &Self) -> f64 {
        let keys: std::collections::BTreeSet<_> = self.entries.keys().chain(other.entries.keys()).collect();
        keys.into_iter()
            .map(|k| {
                let a = self.entries.get(k).copied().unwrap_or_default();
                let b = other.entries.get(k).copied().unwrap_or_default();
                (a - b).norm()
            })
            .fold(0.0, f64::max)
    }
}

/// `max |D R_y - R_y D|` at truncation level `L`, where `R_y` is right
/// translation by `y`, acting on `chi_c` as multiplication by `chi_c(y)`.
pub fn check_equivariance(y: i128, d: &DiracOperator, level: u32) -> Result<f64> {
    let basis = dual::enumerate(d.p, level)?;
    let translation = basis
        .iter()
        .map(|c| Ok(c.eval(&y)?.to_complex()))
        .collect::<Result<Vec<_>>>()?;
    let r = SparseMatrix::diagonal(translation);
    let dirac = SparseMatrix::diagonal(basis.iter().map(|c| Complex64::new(d.eigenvalue(c), 0.0)));
    Ok(dirac.mul(&r).max_abs_diff(&r.mul(&dirac)))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ResolventReport {
    /// Number of characters with eigenvalue below the bound.
    pub count: u128,
    /// Smallest level whose eigenvalue reaches the bound.
    pub first_level: u32,
}

/// Counts the eigenvalues below `bound`, a finite number for every bound.
pub fn resolvent_compactness_check(d: &DiracOperator, bound: f64) -> Result<ResolventReport> {
    if !(bound.is_finite() && bound > 0.0) {
        return Err(Error::InvalidArgument(format!("bound must be positive and finite, got {bound}")));
    }
    let mut count = 0u128;
    let mut level = 0u32;
    while d.eigenvalue_at(level) < bound {
        count += d.multiplicity(level) as u128;
        level += 1;
    }
    Ok(ResolventReport { count, first_level: level })
}
