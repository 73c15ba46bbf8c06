//! Exact arithmetic in the cyclotomic fields `Q(zeta_{p^k})`.
//!
//! An element is stored in the power basis `1, z, ..., z^{phi(q)-1}` of
//! `Q(z)`, `z = exp(2 pi i / q)`, `q = p^k`, as a sparse map from exponent to
//! rational coefficient. Since `Phi_q(x) = sum_{j<p} x^{j q/p}`, any exponent
//! `e = phi(q) + b` in the top block rewrites as
//! `-sum_{j<p-1} z^{b + j q/p}`, which keeps every element canonical and
//! makes equality structural.
//!
//! Elements of different levels are compared and combined through the
//! embedding `z_{p^k} = z_{p^K}^{p^{K-k}}`. Level 0 is `Q` itself; rational
//! constants carry no prime until they meet an element that has one.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

use crate::dual::{unit_root, Phase};

#[derive(Clone, Debug)]
pub struct Cyclotomic {
    /// 0 for rational constants that have not been tied to a prime.
    p: u32,
    level: u32,
    terms: BTreeMap<u64, BigRational>,
}

fn order(p: u32, level: u32) -> u64 {
    (p as u64).pow(level)
}

fn totient(p: u32, level: u32) -> u64 {
    if level == 0 {
        1
    } else {
        (p as u64 - 1) * (p as u64).pow(level - 1)
    }
}

fn accumulate(map: &mut BTreeMap<u64, BigRational>, k: u64, c: BigRational) {
    if c.is_zero() {
        return;
    }
    let entry = map.entry(k).or_insert_with(BigRational::zero);
    *entry += c;
    if entry.is_zero() {
        map.remove(&k);
    }
}

impl Cyclotomic {
    pub fn rational(value: BigRational) -> Self {
        let mut terms = BTreeMap::new();
        accumulate(&mut terms, 0, value);
        Self { p: 0, level: 0, terms }
    }

    pub fn zero() -> Self {
        Self { p: 0, level: 0, terms: BTreeMap::new() }
    }

    /// `sum_k c_k z^k` for arbitrary exponents `k` (taken mod `p^level`).
    pub fn from_terms<I>(p: u32, level: u32, terms: I) -> Self
    where
        I: IntoIterator<Item = (u64, BigRational)>,
    {
        let q = order(p, level);
        let phi = totient(p, level);
        let step = if level == 0 { 0 } else { order(p, level - 1) };
        let mut out = BTreeMap::new();
        for (k, c) in terms {
            let k = if level == 0 { 0 } else { k % q };
            if k < phi {
                accumulate(&mut out, k, c);
            } else {
                let b = k - phi;
                for j in 0..(p as u64 - 1) {
                    accumulate(&mut out, b + j * step, -c.clone());
                }
            }
        }
        Self { p, level, terms: out }
    }

    /// The root of unity named by an exact phase.
    pub fn from_phase(phase: &Phase, p: u32) -> Self {
        let one = BigRational::from_integer(1.into());
        Self::from_terms(p, phase.level(), [(phase.numerator(), one)])
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// The coefficient of `1`, if the element is rational.
    pub fn as_rational(&self) -> Option<BigRational> {
        match self.terms.len() {
            0 => Some(BigRational::zero()),
            1 => self.terms.get(&0).cloned(),
            _ => None,
        }
    }

    /// Nonzero power-basis coefficients, ordered by exponent.
    pub fn terms(&self) -> impl Iterator<Item = (u64, &BigRational)> {
        self.terms.iter().map(|(&k, c)| (k, c))
    }

    fn embed(&self, p: u32, level: u32) -> Self {
        debug_assert!(level >= self.level);
        if self.p != 0 && p != 0 {
            assert_eq!(self.p, p, "cyclotomic elements over different primes");
        }
        if level == self.level {
            return Self { p, level, terms: self.terms.clone() };
        }
        let scale = order(p, level - self.level);
        Self { p, level, terms: self.terms.iter().map(|(&k, c)| (k * scale, c.clone())).collect() }
    }

    fn common(&self, other: &Self) -> (u32, u32) {
        let p = if self.p != 0 { self.p } else { other.p };
        (p, self.level.max(other.level))
    }

    /// `self * exp(2 pi i a / p^level)`.
    pub fn rotate(&self, p: u32, a: u64, level: u32) -> Self {
        let (p, target) = (p, self.level.max(level));
        let base = self.embed(p, target);
        let shift = a * order(p, target - level);
        let q = order(p, target);
        Self::from_terms(p, target, base.terms.into_iter().map(|(k, c)| ((k + shift) % q, c)))
    }

    pub fn conj(&self) -> Self {
        if self.level == 0 {
            return self.clone();
        }
        let q = order(self.p, self.level);
        Self::from_terms(self.p, self.level, self.terms.iter().map(|(&k, c)| ((q - k) % q, c.clone())))
    }

    pub fn scale(&self, factor: &BigRational) -> Self {
        if factor.is_zero() {
            return Self { p: self.p, level: self.level, terms: BTreeMap::new() };
        }
        Self {
            p: self.p,
            level: self.level,
            terms: self.terms.iter().map(|(&k, c)| (k, c * factor)).collect(),
        }
    }

    pub fn to_complex(&self) -> Complex64 {
        let q = order(self.p.max(1), self.level);
        self.terms
            .iter()
            .map(|(&k, c)| unit_root(k, q) * c.to_f64().unwrap_or(f64::NAN))
            .sum()
    }
}

impl PartialEq for Cyclotomic {
    fn eq(&self, other: &Self) -> bool {
        let (p, level) = self.common(other);
        self.embed(p, level).terms == other.embed(p, level).terms
    }
}

impl Add for Cyclotomic {
    type Output = Cyclotomic;

    fn add(self, other: Cyclotomic) -> Cyclotomic {
        let (p, level) = self.common(&other);
        let mut out = self.embed(p, level);
        for (k, c) in other.embed(p, level).terms {
            accumulate(&mut out.terms, k, c);
        }
        out
    }
}

impl Neg for Cyclotomic {
    type Output = Cyclotomic;

    fn neg(mut self) -> Cyclotomic {
        for c in self.terms.values_mut() {
            *c = -c.clone();
        }
        self
    }
}

impl Sub for Cyclotomic {
    type Output = Cyclotomic;

    fn sub(self, other: Cyclotomic) -> Cyclotomic {
        self + (-other)
    }
}

impl Mul for Cyclotomic {
    type Output = Cyclotomic;

    fn mul(self, other: Cyclotomic) -> Cyclotomic {
        if let Some(r) = other.as_rational() {
            return self.scale(&r);
        }
        if let Some(r) = self.as_rational() {
            return other.scale(&r);
        }
        let (p, level) = self.common(&other);
        let q = order(p, level);
        let (a, b) = (self.embed(p, level), other.embed(p, level));
        let products = a
            .terms
            .iter()
            .flat_map(|(&i, x)| b.terms.iter().map(move |(&j, y)| ((i + j) % q, x * y)));
        Self::from_terms(p, level, products)
    }
}

impl fmt::Display for Cyclotomic {
    /// Power-basis form, e.g. `1/2 + -1/2*z8^3` with `z8 = exp(2 pi i / 8)`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let q = order(self.p.max(1), self.level);
        for (i, (k, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            if *k == 0 {
                write!(f, "{c}")?;
            } else if *k == 1 {
                write!(f, "{c}*z{q}")?;
            } else {
                write!(f, "{c}*z{q}^{k}")?;
            }
        }
        Ok(())
    }
}

pub(crate) fn ratio(num: i64, den: u64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn root(p: u32, a: u64, level: u32) -> Cyclotomic {
        Cyclotomic::from_terms(p, level, [(a, ratio(1, 1))])
    }

    #[test]
    fn sum_of_primitive_roots_vanishes() {
        // the p-th roots of unity sum to zero at every level
        for (p, level) in [(2u32, 1u32), (3, 1), (5, 1), (2, 3), (3, 2), (5, 2)] {
            let q = order(p, level);
            let step = q / p as u64;
            let s = (0..p as u64).fold(Cyclotomic::zero(), |acc, j| acc + root(p, 3 + j * step, level));
            assert!(s.is_zero(), "p={p} level={level}");
        }
    }

    #[test]
    fn embedding_is_consistent() {
        // z_3 = z_9^3
        assert_eq!(root(3, 1, 1), root(3, 3, 2));
        assert_ne!(root(3, 1, 1), root(3, 1, 2));
        assert_eq!(root(2, 1, 1), Cyclotomic::rational(ratio(-1, 1)));
        assert_eq!(root(2, 0, 4), Cyclotomic::rational(ratio(1, 1)));
    }

    #[test]
    fn conj_and_norm() {
        for (p, a, level) in [(5u32, 7u64, 2u32), (2, 3, 3), (3, 1, 1)] {
            let z = root(p, a, level);
            assert_eq!(z.clone() * z.conj(), Cyclotomic::rational(ratio(1, 1)));
        }
    }

    #[test]
    fn rotation_matches_multiplication() {
        let x = root(3, 2, 2) + Cyclotomic::rational(ratio(1, 3));
        assert_eq!(x.rotate(3, 5, 2), x.clone() * root(3, 5, 2));
        assert_eq!(x.rotate(3, 1, 1), x * root(3, 1, 1));
    }

    #[test]
    fn complex_value() {
        let i = root(2, 1, 2);
        let v = i.to_complex();
        assert!((v - Complex64::new(0.0, 1.0)).norm() < 1e-15);
        let w = (root(5, 1, 1) + root(5, 4, 1)).to_complex();
        assert!((w.re - 2.0 * (std::f64::consts::TAU / 5.0).cos()).abs() < 1e-14);
        assert!(w.im.abs() < 1e-14);
    }

    #[test]
    fn display() {
        assert_eq!(Cyclotomic::zero().to_string(), "0");
        let x = Cyclotomic::rational(ratio(1, 2)) + root(2, 3, 3).scale(&ratio(-1, 2));
        assert_eq!(x.to_string(), "1/2 + -1/2*z8^3");
    }
}
