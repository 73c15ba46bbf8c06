//! Balls `x + p^r Z_p`, their indicator functions and character expansions.
//!
//! For each radius `r` the `p^r` balls with `0 <= x < p^r` partition `Z_p`
//! into clopen sets, so their indicators are continuous projections.
//! Writing `C(Z_p)` as the inductive limit of the `C(Z/p^n Z)` along the
//! pullbacks [`LevelFunction::lift`], the classes of these indicators
//! generate `K_0(C(Z_p))`, and `K_1(C(Z_p)) = 0` because every finite
//! stage has trivial `K_1`. No group structure is computed here: the module
//! exposes the generators and their finite character expansions
//!
//! ```text
//! 1_{x + p^r Z_p} = sum_{(m,n), n <= r} p^{-r} exp(-2 pi i m x / p^n) chi_{m,n}
//! ```
//!
//! together with the Monna-map picture of each ball as an interval of
//! length `p^{-r}` in `[0, 1]`. Nothing is claimed about relations among
//! the generators.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde_json::json;

use crate::arith;
use crate::dual;
use crate::error::{Error, Result};
use crate::harmonic::{CoefficientMap, LevelFunction};
use crate::parallel::{self, Strategy};
use crate::report::Table;
use crate::scalar::{RootTable, Scalar};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Ball {
    p: u32,
    r: u32,
    x: u64,
}

impl Ball {
    pub fn new(p: u32, x: u64, r: u32) -> Result<Self> {
        arith::check_prime(p as u64)?;
        let q = arith::pow(p, r)?;
        if x >= q {
            return Err(Error::InvalidArgument(format!("ball center {x} must lie in [0, {q})")));
        }
        Ok(Self { p, r, x })
    }

    /// `Z_p` itself.
    pub fn whole(p: u32) -> Result<Self> {
        Self::new(p, 0, 0)
    }

    pub fn prime(&self) -> u32 {
        self.p
    }

    pub fn radius(&self) -> u32 {
        self.r
    }

    pub fn center(&self) -> u64 {
        self.x
    }

    /// Base-`p` digits of the center, `r` of them, little-endian.
    fn center_digits(&self) -> impl Iterator<Item = u64> + '_ {
        let p = self.p as u64;
        (0..self.r).scan(self.x, move |rest, _| {
            let d = *rest % p;
            *rest /= p;
            Some(d)
        })
    }

    /// Numerator of `T(x)` over `p^r`: the digit reversal of `x`.
    fn monna_numerator(&self) -> u64 {
        self.center_digits().fold(0, |acc, d| acc * self.p as u64 + d)
    }

    /// Parses `ball(x, r)`.
    pub fn parse(s: &str, p: u32) -> Result<Self> {
        let bad = || Error::Parse(format!("{s}: expected ball(x, r)"));
        let inner = s
            .trim()
            .strip_prefix("ball(")
            .and_then(|r| r.strip_suffix(')'))
            .ok_or_else(bad)?;
        let (x, r) = inner.split_once(',').ok_or_else(bad)?;
        Self::new(p, x.trim().parse().map_err(|_| bad())?, r.trim().parse().map_err(|_| bad())?)
    }
}

impl fmt::Display for Ball {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ball({}, {})", self.x, self.r)
    }
}

/// `1_{x + p^r Z_p}` sampled on `Z/p^L Z`.
pub fn ball_indicator<T: Scalar>(b: &Ball, level: u32) -> Result<LevelFunction<T>> {
    if level < b.r {
        return Err(Error::InsufficientLevel { needed: b.r, available: level });
    }
    let q = arith::pow(b.p, b.r)?;
    LevelFunction::from_fn(b.p, level, |y| T::from_ratio((y % q == b.x) as i64, 1))
}

/// Closed-form coefficients: `p^{-r} exp(-2 pi i m x / p^n)` at every
/// `(m, n)` with `n <= r`. The map has level `r`; every higher coefficient
/// is zero.
pub fn ball_coefficients<T: Scalar>(b: &Ball) -> Result<CoefficientMap<T>> {
    let roots = T::roots(b.p, b.r)?;
    let q = roots.modulus();
    let scale = T::from_ratio(1, q);
    let coeffs = dual::enumerate(b.p, b.r)?
        .iter()
        .map(|c| {
            let k = c.frequency(b.r).expect("index level within radius");
            let e = (k as u128 * b.x as u128 % q as u128) as u64;
            roots.rotate(&scale, (q - e) % q)
        })
        .collect();
    CoefficientMap::from_values(b.p, b.r, coeffs)
}

/// Image of the ball under the Monna map: `[T(x), T(x) + p^{-r}]`.
pub fn monna_interval(b: &Ball) -> (BigRational, BigRational) {
    let den = num_traits::pow(BigInt::from(b.p), b.r as usize);
    let lo = BigRational::new(BigInt::from(b.monna_numerator()), den.clone());
    let hi = &lo + BigRational::new(BigInt::one(), den);
    (lo, hi)
}

/// Outcome of [`verify_partition`].
#[derive(Debug, Clone, PartialEq)]
pub struct PartitionReport {
    pub p: u32,
    pub radius: u32,
    pub level: u32,
    pub balls: Vec<Ball>,
    /// Every residue mod `p^L` lies in exactly one ball.
    pub covers_pointwise: bool,
    /// The Monna intervals have pairwise disjoint interiors and union `[0, 1]`.
    pub tiles_unit_interval: bool,
    pub interval_length: BigRational,
    pub total_length: BigRational,
}

impl PartitionReport {
    pub fn passed(&self) -> bool {
        let one = BigRational::one();
        self.covers_pointwise && self.tiles_unit_interval && self.total_length == one
    }

    /// Rows `x,r,lo,hi,length` with exact rational strings.
    pub fn to_table(&self) -> Table {
        let mut t = Table::new(["x", "r", "lo", "hi", "length"])
            .meta("p", json!(self.p))
            .meta("r", json!(self.radius))
            .meta("level", json!(self.level))
            .meta("balls", json!(self.balls.len()))
            .meta("covers_pointwise", json!(self.covers_pointwise))
            .meta("tiles_unit_interval", json!(self.tiles_unit_interval))
            .meta("total_length", json!(self.total_length.to_string()))
            .meta("passed", json!(self.passed()));
        for b in &self.balls {
            let (lo, hi) = monna_interval(b);
            let len = &hi - &lo;
            t.push(vec![json!(b.x), json!(b.r), json!(lo.to_string()), json!(hi.to_string()), json!(len.to_string())]);
        }
        t
    }
}

/// Checks that the radius-`r` balls partition `Z/p^L Z` and that their Monna
/// intervals tile `[0, 1]`, all in exact arithmetic.
pub fn verify_partition(p: u32, r: u32, level: u32) -> Result<PartitionReport> {
    verify_partition_with(p, r, level, Strategy::default())
}

pub fn verify_partition_with(p: u32, r: u32, level: u32, strategy: Strategy) -> Result<PartitionReport> {
    if level < r {
        return Err(Error::InsufficientLevel { needed: r, available: level });
    }
    let balls = k0_balls(p, r)?;
    let fine = arith::size(p, level)?;
    let coarse = balls.len() as u64;

    let mut hits = vec![0u32; fine];
    for b in &balls {
        for y in (b.x..fine as u64).step_by(coarse as usize) {
            hits[y as usize] += 1;
        }
    }
    let covers_pointwise = hits.iter().all(|&h| h == 1);

    // Interval k/p^r .. (k+1)/p^r for each numerator k; a tiling means the
    // numerators are exactly 0..p^r.
    let mut numerators = parallel::map_slice(strategy, &balls, Ball::monna_numerator);
    numerators.sort_unstable();
    let tiles_unit_interval = numerators.iter().copied().eq(0..coarse);

    let (lo, hi) = monna_interval(&balls[0]);
    let interval_length = hi - lo;
    let all_equal = balls.iter().all(|b| {
        let (lo, hi) = monna_interval(b);
        hi - lo == interval_length
    });
    let total_length = if all_equal {
        &interval_length * BigRational::from_integer(BigInt::from(coarse))
    } else {
        balls.iter().fold(BigRational::zero(), |acc, b| {
            let (lo, hi) = monna_interval(b);
            acc + hi - lo
        })
    };
    Ok(PartitionReport { p, radius: r, level, balls, covers_pointwise, tiles_unit_interval, interval_length, total_length })
}

fn k0_balls(p: u32, r: u32) -> Result<Vec<Ball>> {
    arith::check_prime(p as u64)?;
    let q = arith::pow(p, r)?;
    Ok((0..q).map(|x| Ball { p, r, x }).collect())
}

/// A ball together with its closed-form character expansion.
#[derive(Debug, Clone, PartialEq)]
pub struct K0Generator<T> {
    pub ball: Ball,
    pub coefficients: CoefficientMap<T>,
}

/// The `p^r` radius-`r` balls, each with its expansion attached.
pub fn k0_generator_list<T: Scalar>(p: u32, r: u32) -> Result<Vec<K0Generator<T>>> {
    if r < 1 {
        return Err(Error::InvalidArgument("generator radius must be at least 1".into()));
    }
    k0_balls(p, r)?
        .into_iter()
        .map(|ball| Ok(K0Generator { ball, coefficients: ball_coefficients(&ball)? }))
        .collect()
}
