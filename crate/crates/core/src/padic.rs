//! Fixed-precision p-adic integers.
//!
//! A [`PadicInt`] is an element of `Z_p` known modulo `p^N`, stored as its
//! little-endian base-`p` digits `d_0, ..., d_{N-1}`. All equalities are
//! equalities modulo `p^N`; the reduction maps `Z/p^N Z -> Z/p^n Z` for
//! `n <= N` are exposed through [`PadicInt::project`] and
//! [`PadicInt::truncate`].

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::arith;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PadicInt {
    p: u32,
    digits: Vec<u32>,
}

/// p-adic valuation of a fixed-precision element.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Valuation {
    Known(usize),
    /// Every stored digit is zero, so only `v >= N` is certain.
    AtLeast(usize),
}

/// The p-adic absolute value `|x|_p`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Norm {
    Exact(BigRational),
    /// The element is zero to the available precision; its norm is at
    /// most the carried bound `p^{-N}` and is reported as `0`.
    AtMost(BigRational),
}

impl Norm {
    /// `p^{-v}`, or `0` when the element is zero at this precision.
    pub fn value(&self) -> BigRational {
        match self {
            Norm::Exact(v) => v.clone(),
            Norm::AtMost(_) => BigRational::zero(),
        }
    }
}

fn inv_pow(p: u32, e: usize) -> BigRational {
    let den = num_traits::pow(BigInt::from(p), e);
    BigRational::new(BigInt::one(), den)
}

fn mod_pow(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1u64 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = ((acc as u128 * base as u128) % m as u128) as u64;
        }
        base = ((base as u128 * base as u128) % m as u128) as u64;
        exp >>= 1;
    }
    acc
}

impl PadicInt {
    fn validate(p: u64, precision: usize) -> Result<u32> {
        let p = arith::check_prime(p)?;
        if precision < 1 {
            return Err(Error::InvalidPrecision(precision));
        }
        Ok(p)
    }

    /// Builds an element from explicit little-endian digits.
    pub fn from_digits(p: u64, digits: Vec<u32>) -> Result<Self> {
        let p = Self::validate(p, digits.len())?;
        if let Some(&d) = digits.iter().find(|&&d| d >= p) {
            return Err(Error::InvalidArgument(format!("digit {d} out of range for p={p}")));
        }
        Ok(Self { p, digits })
    }

    pub fn zero(p: u64, precision: usize) -> Result<Self> {
        let p = Self::validate(p, precision)?;
        Ok(Self { p, digits: vec![0; precision] })
    }

    pub fn one(p: u64, precision: usize) -> Result<Self> {
        Self::from_integer(1, p, precision)
    }

    /// Base-`p` expansion of `k mod p^N` (nonnegative representative).
    pub fn from_integer(k: i128, p: u64, precision: usize) -> Result<Self> {
        let p = Self::validate(p, precision)?;
        let mut rest = k.unsigned_abs();
        let mut digits = Vec::with_capacity(precision);
        for _ in 0..precision {
            digits.push((rest % p as u128) as u32);
            rest /= p as u128;
        }
        let x = Self { p, digits };
        Ok(if k < 0 { x.neg() } else { x })
    }

    /// The unique `r` with `b * r = a mod p^N`; requires `p` not dividing `b`.
    pub fn from_rational(a: i128, b: i128, p: u64, precision: usize) -> Result<Self> {
        if b == 0 {
            return Err(Error::DivisionByZero);
        }
        let num = Self::from_integer(a, p, precision)?;
        let den = Self::from_integer(b, p, precision)?;
        if b % p as i128 == 0 {
            return Err(Error::NotAUnit);
        }
        num.mul(&den.invert()?)
    }

    pub fn prime(&self) -> u32 {
        self.p
    }

    pub fn precision(&self) -> usize {
        self.digits.len()
    }

    pub fn digits(&self) -> &[u32] {
        &self.digits
    }

    pub fn is_zero(&self) -> bool {
        self.digits.iter().all(|&d| d == 0)
    }

    /// Reduction to a lower precision.
    pub fn truncate(&self, precision: usize) -> Result<Self> {
        if precision < 1 {
            return Err(Error::InvalidPrecision(precision));
        }
        if precision > self.precision() {
            return Err(Error::InsufficientPrecision {
                needed: precision,
                available: self.precision(),
            });
        }
        Ok(Self { p: self.p, digits: self.digits[..precision].to_vec() })
    }

    fn check_prime_match(&self, other: &Self) -> Result<()> {
        if self.p != other.p {
            return Err(Error::PrimeMismatch { left: self.p, right: other.p });
        }
        Ok(())
    }

    #[allow(clippy::should_implement_trait)]
    pub fn neg(&self) -> Self {
        let p = self.p as u64;
        let mut digits = Vec::with_capacity(self.digits.len());
        // -x = (complement of x) + 1
        let mut carry = 1u64;
        for &d in &self.digits {
            let t = (p - 1 - d as u64) + carry;
            digits.push((t % p) as u32);
            carry = t / p;
        }
        Self { p: self.p, digits }
    }

    /// Sum modulo `p^min(N_x, N_y)`.
    #[allow(clippy::should_implement_trait)]
    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_prime_match(other)?;
        let n = self.precision().min(other.precision());
        let p = self.p as u64;
        let mut digits = Vec::with_capacity(n);
        let mut carry = 0u64;
        for k in 0..n {
            let t = self.digits[k] as u64 + other.digits[k] as u64 + carry;
            digits.push((t % p) as u32);
            carry = t / p;
        }
        Ok(Self { p: self.p, digits })
    }

    #[allow(clippy::should_implement_trait)]
    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    /// Product modulo `p^min(N_x, N_y)`.
    #[allow(clippy::should_implement_trait)]
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_prime_match(other)?;
        let n = self.precision().min(other.precision());
        let p = self.p as u128;
        let mut acc = vec![0u32; n];
        for i in 0..n {
            let a = self.digits[i] as u128;
            if a == 0 {
                continue;
            }
            let mut carry = 0u128;
            for j in 0..n - i {
                let t = acc[i + j] as u128 + a * other.digits[j] as u128 + carry;
                acc[i + j] = (t % p) as u32;
                carry = t / p;
            }
        }
        Ok(Self { p: self.p, digits: acc })
    }

    /// Multiplicative inverse of a unit, by Newton iteration
    /// `y <- y (2 - x y)`, which doubles the number of correct digits.
    pub fn invert(&self) -> Result<Self> {
        let d0 = self.digits[0];
        if d0 == 0 {
            return Err(Error::NotAUnit);
        }
        let p = self.p as u64;
        let n = self.precision();
        let seed = mod_pow(d0 as u64, p - 2, p);
        let mut y = Self::from_integer(seed as i128, p, n)?;
        let two = Self::from_integer(2, p, n)?;
        let mut correct = 1;
        while correct < n {
            let xy = self.mul(&y)?;
            y = y.mul(&two.sub(&xy)?)?;
            correct *= 2;
        }
        debug_assert!(self.mul(&y)? == Self::one(p, n)?);
        Ok(y)
    }

    pub fn valuation(&self) -> Valuation {
        match self.digits.iter().position(|&d| d != 0) {
            Some(v) => Valuation::Known(v),
            None => Valuation::AtLeast(self.precision()),
        }
    }

    pub fn abs_p(&self) -> Norm {
        match self.valuation() {
            Valuation::Known(v) => Norm::Exact(inv_pow(self.p, v)),
            Valuation::AtLeast(n) => Norm::AtMost(inv_pow(self.p, n)),
        }
    }

    /// Image in `Z/p^n Z`: `sum_{k<n} d_k p^k`.
    pub fn project(&self, n: usize) -> Result<u64> {
        if n > self.precision() {
            return Err(Error::InsufficientPrecision { needed: n, available: self.precision() });
        }
        let exponent = u32::try_from(n).map_err(|_| Error::Overflow { p: self.p, exponent: u32::MAX })?;
        arith::pow(self.p, exponent)?;
        Ok(self.digits[..n]
            .iter()
            .rev()
            .fold(0u64, |acc, &d| acc * self.p as u64 + d as u64))
    }

    /// Monna map `sum d_k p^k -> sum d_k / p^{k+1}`, exact with denominator `p^N`.
    pub fn monna(&self) -> BigRational {
        let p = BigInt::from(self.p);
        let mut num = BigInt::zero();
        for &d in &self.digits {
            num = num * &p + BigInt::from(d);
        }
        let den = num_traits::pow(p, self.precision());
        BigRational::new(num, den)
    }

    /// Parses the full textual form, or `int:<k>` / `rat:<a>/<b>` using
    /// the given prime and precision.
    pub fn parse(s: &str, p: u64, precision: usize) -> Result<Self> {
        let s = s.trim();
        if let Some(k) = s.strip_prefix("int:") {
            let k = k.trim().parse::<i128>().map_err(|e| Error::Parse(format!("{s}: {e}")))?;
            return Self::from_integer(k, p, precision);
        }
        if let Some(r) = s.strip_prefix("rat:") {
            let (a, b) = r
                .split_once('/')
                .ok_or_else(|| Error::Parse(format!("{s}: expected rat:<a>/<b>")))?;
            let a = a.trim().parse::<i128>().map_err(|e| Error::Parse(format!("{s}: {e}")))?;
            let b = b.trim().parse::<i128>().map_err(|e| Error::Parse(format!("{s}: {e}")))?;
            return Self::from_rational(a, b, p, precision);
        }
        s.parse()
    }
}

impl fmt::Display for PadicInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "p={} N={} digits=", self.p, self.precision())?;
        for (k, d) in self.digits.iter().enumerate() {
            if k > 0 {
                f.write_str(",")?;
            }
            write!(f, "{d}")?;
        }
        Ok(())
    }
}

impl FromStr for PadicInt {
    type Err = Error;

    /// Parses `p=<p> N=<N> digits=<d0>,<d1>,...`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("{s}: expected `p=<p> N=<N> digits=<d0>,...`"));
        let mut p = None;
        let mut n = None;
        let mut digits = None;
        for field in s.split_whitespace() {
            let (key, value) = field.split_once('=').ok_or_else(bad)?;
            match key {
                "p" => p = Some(value.parse::<u64>().map_err(|_| bad())?),
                "N" => n = Some(value.parse::<usize>().map_err(|_| bad())?),
                "digits" => {
                    digits = Some(
                        value
                            .split(',')
                            .map(|d| d.parse::<u32>())
                            .collect::<std::result::Result<Vec<_>, _>>()
                            .map_err(|_| bad())?,
                    )
                }
                _ => return Err(bad()),
            }
        }
        let (p, n, digits) = (p.ok_or_else(bad)?, n.ok_or_else(bad)?, digits.ok_or_else(bad)?);
        if digits.len() != n {
            return Err(Error::InvalidLength { expected: n, actual: digits.len() });
        }
        Self::from_digits(p, digits)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn int(k: i128, p: u64, n: usize) -> PadicInt {
        PadicInt::from_integer(k, p, n).unwrap()
    }

    fn rat(a: i64, b: i64) -> BigRational {
        BigRational::new(a.into(), b.into())
    }

    #[test]
    fn from_integer_examples() {
        assert_eq!(int(5, 2, 4).digits(), &[1, 0, 1, 0]);
        assert_eq!(int(-1, 3, 3).digits(), &[2, 2, 2]);
        assert_eq!(int(12, 2, 3).digits(), &[0, 0, 1]);
    }

    #[test]
    fn construction_errors() {
        assert_eq!(PadicInt::from_integer(1, 4, 3), Err(Error::InvalidPrime(4)));
        assert_eq!(PadicInt::from_integer(1, 2, 0), Err(Error::InvalidPrecision(0)));
        assert!(PadicInt::from_digits(3, vec![0, 3]).is_err());
    }

    #[test]
    fn from_rational_examples() {
        let x = PadicInt::from_rational(1, 3, 2, 4).unwrap();
        assert_eq!(x.digits(), &[1, 1, 0, 1]);
        assert_eq!(PadicInt::from_rational(7, 1, 2, 3).unwrap().digits(), &[1, 1, 1]);
        assert_eq!(PadicInt::from_rational(1, 2, 2, 4), Err(Error::NotAUnit));
        assert_eq!(PadicInt::from_rational(1, 0, 2, 4), Err(Error::DivisionByZero));
    }

    #[test]
    fn add_mul_examples() {
        assert!(int(1, 5, 6).add(&int(-1, 5, 6)).unwrap().is_zero());
        assert_eq!(int(3, 2, 3).add(&int(1, 2, 3)).unwrap().digits(), &[0, 0, 1]);
        assert_eq!(int(3, 2, 4).mul(&int(5, 2, 4)).unwrap().digits(), &[1, 1, 1, 1]);
    }

    #[test]
    fn mixed_precision_and_primes() {
        let s = int(7, 2, 6).add(&int(1, 2, 3)).unwrap();
        assert_eq!(s.precision(), 3);
        assert_eq!(s.digits(), &[0, 0, 0]);
        assert_eq!(
            int(1, 2, 3).mul(&int(1, 3, 3)),
            Err(Error::PrimeMismatch { left: 2, right: 3 })
        );
    }

    #[test]
    fn invert_examples() {
        assert_eq!(int(3, 2, 4).invert().unwrap(), int(11, 2, 4));
        assert_eq!(int(1, 7, 5).invert().unwrap(), int(1, 7, 5));
        assert_eq!(int(2, 2, 4).invert(), Err(Error::NotAUnit));
    }

    #[test]
    fn valuation_examples() {
        let x = int(12, 2, 8);
        assert_eq!(x.valuation(), Valuation::Known(2));
        assert_eq!(x.abs_p().value(), rat(1, 4));
        let zero = int(0, 3, 5);
        assert_eq!(zero.valuation(), Valuation::AtLeast(5));
        assert_eq!(zero.abs_p(), Norm::AtMost(rat(1, 243)));
        assert_eq!(zero.abs_p().value(), rat(0, 1));
        assert_eq!(int(1, 5, 2).valuation(), Valuation::Known(0));
        assert_eq!(int(1, 5, 2).abs_p().value(), rat(1, 1));
    }

    #[test]
    fn project_examples() {
        assert_eq!(int(5, 2, 4).project(2).unwrap(), 1);
        assert_eq!(int(5, 2, 4).project(0).unwrap(), 0);
        assert_eq!(PadicInt::from_rational(1, 3, 2, 4).unwrap().project(3).unwrap(), 3);
        assert_eq!(
            int(5, 2, 4).project(5),
            Err(Error::InsufficientPrecision { needed: 5, available: 4 })
        );
    }

    #[test]
    fn monna_examples() {
        assert_eq!(int(1, 2, 5).monna(), rat(1, 2));
        assert_eq!(int(0, 3, 5).monna(), rat(0, 1));
        // -1 has every digit p-1: sum (p-1)/p^{k+1} = 1 - p^{-N}
        assert_eq!(int(-1, 3, 4).monna(), rat(80, 81));
        assert_eq!(int(-1, 2, 10).monna(), rat(1023, 1024));
    }

    #[test]
    fn textual_forms() {
        let x = PadicInt::from_rational(1, 3, 2, 4).unwrap();
        assert_eq!(x.to_string(), "p=2 N=4 digits=1,1,0,1");
        assert_eq!("p=2 N=4 digits=1,1,0,1".parse::<PadicInt>().unwrap(), x);
        assert_eq!(PadicInt::parse("rat:1/3", 2, 4).unwrap(), x);
        assert_eq!(PadicInt::parse("int:-1", 3, 3).unwrap().digits(), &[2, 2, 2]);
        assert!("p=2 N=3 digits=1,1".parse::<PadicInt>().is_err());
        assert!(PadicInt::parse("garbage", 2, 4).is_err());
    }

    fn modulus(p: u64, n: usize) -> i128 {
        (p as i128).pow(n as u32)
    }

    fn value(x: &PadicInt) -> i128 {
        x.project(x.precision()).unwrap() as i128
    }

    proptest! {
        #[test]
        fn ring_laws(a in -10_000i128..10_000, b in -10_000i128..10_000, c in -10_000i128..10_000,
                     p in prop::sample::select(vec![2u64, 3, 5, 7]), n in 1usize..8) {
            let (x, y, z) = (int(a, p, n), int(b, p, n), int(c, p, n));
            prop_assert_eq!(x.add(&y).unwrap(), y.add(&x).unwrap());
            prop_assert_eq!(x.mul(&y).unwrap(), y.mul(&x).unwrap());
            prop_assert_eq!(x.add(&y).unwrap().add(&z).unwrap(), x.add(&y.add(&z).unwrap()).unwrap());
            prop_assert_eq!(x.mul(&y).unwrap().mul(&z).unwrap(), x.mul(&y.mul(&z).unwrap()).unwrap());
            prop_assert_eq!(
                x.mul(&y.add(&z).unwrap()).unwrap(),
                x.mul(&y).unwrap().add(&x.mul(&z).unwrap()).unwrap()
            );
            prop_assert_eq!(x.add(&int(0, p, n)).unwrap(), x.clone());
            prop_assert_eq!(x.mul(&int(1, p, n)).unwrap(), x.clone());
            let q = modulus(p, n);
            prop_assert_eq!(value(&x.add(&y).unwrap()), (a + b).rem_euclid(q));
            prop_assert_eq!(value(&x.mul(&y).unwrap()), (a * b).rem_euclid(q));
        }

        #[test]
        fn valuation_is_multiplicative(a in 1i128..5_000, b in 1i128..5_000,
                                       p in prop::sample::select(vec![2u64, 3, 5])) {
            let n = 24;
            let (x, y) = (int(a, p, n), int(b, p, n));
            if let (Valuation::Known(vx), Valuation::Known(vy)) = (x.valuation(), y.valuation()) {
                if vx + vy < n {
                    prop_assert_eq!(x.mul(&y).unwrap().valuation(), Valuation::Known(vx + vy));
                }
            }
        }

        #[test]
        fn ultrametric(a in -5_000i128..5_000, b in -5_000i128..5_000,
                       p in prop::sample::select(vec![2u64, 3, 5])) {
            let n = 16;
            let (x, y) = (int(a, p, n), int(b, p, n));
            let s = x.add(&y).unwrap();
            if !x.is_zero() && !y.is_zero() {
                let bound = x.abs_p().value().max(y.abs_p().value());
                prop_assert!(s.abs_p().value() <= bound);
            }
        }

        #[test]
        fn projection_compatibility(a in -100_000i128..100_000, n in 1usize..10,
                                    p in prop::sample::select(vec![2u64, 3, 5])) {
            let x = int(a, p, 10);
            let upper = x.project(n).unwrap();
            prop_assert_eq!(upper % p.pow(n as u32 - 1), x.project(n - 1).unwrap());
        }

        #[test]
        fn monna_cylinder(a in 0i128..100_000, r in 0usize..8,
                          p in prop::sample::select(vec![2u64, 3, 5])) {
            let n = 10;
            let x = int(a, p, n);
            let c = x.project(r).unwrap();
            let t_c = if r == 0 { BigRational::zero() } else { int(c as i128, p, r).monna() };
            let width = inv_pow(p as u32, r);
            let t = x.monna();
            prop_assert!(t_c <= t && t < t_c + width);
        }

        #[test]
        fn inverse_round_trip(a in 1i128..1_000_000, n in 1usize..20,
                              p in prop::sample::select(vec![2u64, 3, 5, 11])) {
            prop_assume!(a % p as i128 != 0);
            let x = int(a, p, n);
            prop_assert_eq!(x.mul(&x.invert().unwrap()).unwrap(), int(1, p, n));
        }
    }
}
