//! The dual group of `Z_p`.
//!
//! Characters are indexed by reduced pairs `(m, n)`: either the trivial
//! character `(1, 0)`, or `n >= 1`, `0 < m < p^n` with `p` not dividing `m`.
//! The character `chi(m,n)` sends `1` to `exp(2 pi i m / p^n)`, so the
//! index set is the Prüfer group of fractions `m / p^n mod 1` and the
//! group law is addition of fractions.
//!
//! Values are exact [`Phase`]s; floating point appears only through
//! [`Phase::to_complex`].

use std::f64::consts::TAU;
use std::fmt;

use num_complex::Complex64;

use crate::arith;
use crate::error::{Error, Result};
use crate::padic::PadicInt;

/// A reduced character index. Orders by level, then numerator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CharIndex {
    p: u32,
    n: u32,
    m: u64,
}

/// The unit complex number `exp(2 pi i a / p^n)`, stored as the reduced
/// fraction `a / p^n` in `[0, 1)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Phase {
    p: u32,
    num: u64,
    level: u32,
}

fn reduce_fraction(p: u32, a: i128, n: u32) -> Result<(u64, u32)> {
    let q = arith::pow(p, n)?;
    let a = a.rem_euclid(q as i128) as u64;
    if a == 0 {
        return Ok((0, 0));
    }
    let v = arith::p_adic_order(a, p);
    Ok((a / (p as u64).pow(v), n - v))
}

impl CharIndex {
    /// Validates a pair as an element of the index set.
    pub fn new(p: u32, m: u64, n: u32) -> Result<Self> {
        arith::check_prime(p as u64)?;
        let ok = if n == 0 {
            m == 1
        } else {
            let q = arith::pow(p, n)?;
            m > 0 && m < q && !m.is_multiple_of(p as u64)
        };
        if !ok {
            return Err(Error::InvalidArgument(format!("({m},{n}) is not a reduced character index for p={p}")));
        }
        Ok(Self { p, n, m })
    }

    pub fn trivial(p: u32) -> Self {
        Self { p, n: 0, m: 1 }
    }

    /// Canonical index of the fraction `a / p^n mod 1`.
    pub fn reduce(p: u32, a: i128, n: u32) -> Result<Self> {
        arith::check_prime(p as u64)?;
        let (num, level) = reduce_fraction(p, a, n)?;
        Ok(if num == 0 { Self::trivial(p) } else { Self { p, n: level, m: num } })
    }

    pub fn prime(&self) -> u32 {
        self.p
    }

    pub fn m(&self) -> u64 {
        self.m
    }

    pub fn level(&self) -> u32 {
        self.n
    }

    pub fn is_trivial(&self) -> bool {
        self.n == 0
    }

    /// Numerator of this index as a fraction over `p^level`, i.e. the raw
    /// frequency `k` with `chi(x) = exp(2 pi i k x / p^level)`.
    pub fn frequency(&self, level: u32) -> Result<u64> {
        if level < self.n {
            return Err(Error::InsufficientLevel { needed: self.n, available: level });
        }
        if self.is_trivial() {
            return Ok(0);
        }
        Ok(self.m * arith::pow(self.p, level - self.n)?)
    }

    /// Position in the canonical `(n, m)` order of [`enumerate`].
    pub fn position(&self) -> usize {
        if self.is_trivial() {
            return 0;
        }
        let p = self.p as u64;
        let below = p.pow(self.n - 1);
        let units_before = (self.m - 1) - (self.m - 1) / p;
        (below + units_before) as usize
    }

    /// Group law of the dual: pointwise product of characters.
    pub fn dual_add(&self, other: &Self) -> Result<Self> {
        if self.p != other.p {
            return Err(Error::PrimeMismatch { left: self.p, right: other.p });
        }
        let n = self.n.max(other.n);
        let a = self.frequency(n)? as i128 + other.frequency(n)? as i128;
        Self::reduce(self.p, a, n)
    }

    /// Inverse in the dual group (the complex conjugate character).
    pub fn dual_neg(&self) -> Self {
        if self.is_trivial() {
            return *self;
        }
        let q = (self.p as u64).pow(self.n);
        Self { p: self.p, n: self.n, m: q - self.m }
    }

    /// `chi(m,n)(x) = exp(2 pi i m (x mod p^n) / p^n)`.
    pub fn eval<X: CharArgument + ?Sized>(&self, x: &X) -> Result<Phase> {
        let r = x.residue(self.p, self.n)?;
        let q = arith::pow(self.p, self.n)?;
        let a = (self.m as u128 * r as u128 % q as u128) as i128;
        Phase::new(self.p, a, self.n)
    }

    /// Parses `chi(m,n)`.
    pub fn parse(s: &str, p: u32) -> Result<Self> {
        let bad = || Error::Parse(format!("{s}: expected chi(m,n)"));
        let inner = s
            .trim()
            .strip_prefix("chi(")
            .and_then(|r| r.strip_suffix(')'))
            .ok_or_else(bad)?;
        let (m, n) = inner.split_once(',').ok_or_else(bad)?;
        let m = m.trim().parse().map_err(|_| bad())?;
        let n = n.trim().parse().map_err(|_| bad())?;
        Self::new(p, m, n)
    }
}

impl fmt::Display for CharIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "chi({},{})", self.m, self.n)
    }
}

/// Anything a character can be evaluated at: ordinary integers, or a
/// p-adic integer carrying at least `n` digits.
pub trait CharArgument {
    /// `x mod p^n`.
    fn residue(&self, p: u32, n: u32) -> Result<u64>;
}

macro_rules! int_argument {
    ($($t:ty),*) => {$(
        impl CharArgument for $t {
            fn residue(&self, p: u32, n: u32) -> Result<u64> {
                let q = arith::pow(p, n)?;
                Ok((*self as i128).rem_euclid(q as i128) as u64)
            }
        }
    )*};
}

int_argument!(i32, i64, i128, u32, u64, usize);

impl CharArgument for PadicInt {
    fn residue(&self, p: u32, n: u32) -> Result<u64> {
        if self.prime() != p {
            return Err(Error::PrimeMismatch { left: p, right: self.prime() });
        }
        self.project(n as usize)
    }
}

/// All indices of level at most `max_level`, sorted by `(n, m)`.
/// There are exactly `p^max_level` of them.
pub fn enumerate(p: u32, max_level: u32) -> Result<Vec<CharIndex>> {
    arith::check_prime(p as u64)?;
    let total = arith::size(p, max_level)?;
    let mut out = Vec::with_capacity(total);
    out.push(CharIndex::trivial(p));
    for n in 1..=max_level {
        let q = arith::pow(p, n)?;
        out.extend((1..q).filter(|m| m % p as u64 != 0).map(|m| CharIndex { p, n, m }));
    }
    Ok(out)
}

impl Phase {
    /// The reduced phase `a / p^n mod 1`.
    pub fn new(p: u32, a: i128, n: u32) -> Result<Self> {
        let (num, level) = reduce_fraction(p, a, n)?;
        Ok(Self { p, num, level })
    }

    pub fn zero(p: u32) -> Self {
        Self { p, num: 0, level: 0 }
    }

    pub fn numerator(&self) -> u64 {
        self.num
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn is_zero(&self) -> bool {
        self.num == 0
    }

    /// Multiplication of the represented roots of unity.
    pub fn add(&self, other: &Phase) -> Result<Phase> {
        if self.p != other.p && !(self.is_zero() || other.is_zero()) {
            return Err(Error::PrimeMismatch { left: self.p, right: other.p });
        }
        let p = if self.is_zero() { other.p } else { self.p };
        let n = self.level.max(other.level);
        let lift = |ph: &Phase| -> Result<i128> { Ok(ph.num as i128 * arith::pow(p, n - ph.level)? as i128) };
        Phase::new(p, lift(self)? + lift(other)?, n)
    }

    pub fn neg(&self) -> Phase {
        if self.is_zero() {
            return *self;
        }
        let q = (self.p as u64).pow(self.level);
        Phase { p: self.p, num: q - self.num, level: self.level }
    }

    /// Numerator over the common denominator `p^level`.
    pub fn numerator_at(&self, level: u32) -> Result<u64> {
        if level < self.level {
            return Err(Error::InsufficientLevel { needed: self.level, available: level });
        }
        Ok(self.num * arith::pow(self.p, level - self.level)?)
    }

    pub fn to_complex(&self) -> Complex64 {
        if self.num == 0 {
            return Complex64::new(1.0, 0.0);
        }
        unit_root(self.num, (self.p as u64).pow(self.level))
    }
}

impl fmt::Display for Phase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}^{}", self.num, self.p, self.level)
    }
}

/// `exp(2 pi i a / q)`, exact at the quarter turns.
pub(crate) fn unit_root(a: u64, q: u64) -> Complex64 {
    let a = a % q;
    let quarter = (a as u128 * 4).is_multiple_of(q as u128);
    if quarter {
        return match (a as u128 * 4 / q as u128) as u8 {
            0 => Complex64::new(1.0, 0.0),
            1 => Complex64::new(0.0, 1.0),
            2 => Complex64::new(-1.0, 0.0),
            _ => Complex64::new(0.0, -1.0),
        };
    }
    let (s, c) = (TAU * a as f64 / q as f64).sin_cos();
    Complex64::new(c, s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn ci(p: u32, m: u64, n: u32) -> CharIndex {
        CharIndex::new(p, m, n).unwrap()
    }

    #[test]
    fn reduce_examples() {
        assert_eq!(CharIndex::reduce(2, 4, 3).unwrap(), ci(2, 1, 1));
        assert_eq!(CharIndex::reduce(2, 0, 5).unwrap(), CharIndex::trivial(2));
        assert_eq!(CharIndex::reduce(3, 3, 2).unwrap(), ci(3, 1, 1));
        assert_eq!(CharIndex::reduce(3, -1, 2).unwrap(), ci(3, 8, 2));
    }

    #[test]
    fn rejects_unreduced_pairs() {
        assert!(CharIndex::new(2, 2, 2).is_err());
        assert!(CharIndex::new(2, 0, 1).is_err());
        assert!(CharIndex::new(2, 4, 2).is_err());
        assert!(CharIndex::new(2, 3, 0).is_err());
        assert!(CharIndex::new(4, 1, 1).is_err());
    }

    #[test]
    fn eval_examples() {
        let half = ci(2, 1, 1).eval(&1i64).unwrap();
        assert_eq!((half.numerator(), half.level()), (1, 1));
        assert_eq!(half.to_string(), "1/2^1");
        assert_eq!(half.to_complex(), Complex64::new(-1.0, 0.0));
        for x in [-7i64, 0, 1, 12345] {
            assert!(CharIndex::trivial(2).eval(&x).unwrap().is_zero());
        }
        let ph = ci(2, 1, 2).eval(&3i64).unwrap();
        assert_eq!((ph.numerator(), ph.level()), (3, 2));
    }

    #[test]
    fn eval_on_padic_needs_precision() {
        let x = PadicInt::from_integer(3, 2, 2).unwrap();
        assert_eq!(ci(2, 1, 2).eval(&x).unwrap(), ci(2, 1, 2).eval(&3i64).unwrap());
        assert!(matches!(ci(2, 1, 3).eval(&x), Err(Error::InsufficientPrecision { .. })));
    }

    #[test]
    fn dual_add_examples() {
        assert_eq!(ci(2, 1, 1).dual_add(&ci(2, 1, 1)).unwrap(), CharIndex::trivial(2));
        let c = ci(5, 7, 2);
        assert_eq!(c.dual_add(&CharIndex::trivial(5)).unwrap(), c);
        assert_eq!(ci(2, 1, 2).dual_add(&ci(2, 1, 2)).unwrap(), ci(2, 1, 1));
        assert!(ci(2, 1, 1).dual_add(&ci(3, 1, 1)).is_err());
    }

    #[test]
    fn enumerate_examples() {
        let got: Vec<(u64, u32)> = enumerate(2, 3).unwrap().iter().map(|c| (c.m(), c.level())).collect();
        assert_eq!(got, vec![(1, 0), (1, 1), (1, 2), (3, 2), (1, 3), (3, 3), (5, 3), (7, 3)]);
        assert_eq!(enumerate(7, 0).unwrap(), vec![CharIndex::trivial(7)]);
        let got: Vec<(u64, u32)> = enumerate(3, 1).unwrap().iter().map(|c| (c.m(), c.level())).collect();
        assert_eq!(got, vec![(1, 0), (1, 1), (2, 1)]);
    }

    #[test]
    fn level_counts_and_positions() {
        for p in [2u32, 3, 5, 7] {
            let all = enumerate(p, 4).unwrap();
            assert_eq!(all.len(), p.pow(4) as usize);
            for n in 1..=4u32 {
                let count = all.iter().filter(|c| c.level() == n).count() as u32;
                assert_eq!(count, p.pow(n) - p.pow(n - 1));
            }
            for (i, c) in all.iter().enumerate() {
                assert_eq!(c.position(), i);
            }
            assert!(all.windows(2).all(|w| w[0] < w[1]));
        }
    }

    #[test]
    fn frequency_bijection() {
        // raw frequencies 0..p^L correspond one-to-one with indices of level <= L
        let (p, l) = (3, 4);
        let mut seen = [false; 81];
        for c in enumerate(p, l).unwrap() {
            let k = c.frequency(l).unwrap() as usize;
            assert!(!seen[k]);
            seen[k] = true;
            assert_eq!(CharIndex::reduce(p, k as i128, l).unwrap(), c);
        }
    }

    #[test]
    fn textual_form() {
        let c = ci(3, 2, 1);
        assert_eq!(c.to_string(), "chi(2,1)");
        assert_eq!(CharIndex::parse("chi(2,1)", 3).unwrap(), c);
        assert!(CharIndex::parse("chi(3,1)", 3).is_err());
        assert!(CharIndex::parse("psi(1,1)", 3).is_err());
    }

    fn index(p: u32, a: i128, n: u32) -> CharIndex {
        CharIndex::reduce(p, a, n).unwrap()
    }

    proptest! {
        #[test]
        fn homomorphism(a in 0i128..1_000_000, n in 0u32..8, x in -100_000i64..100_000, y in -100_000i64..100_000,
                        p in prop::sample::select(vec![2u32, 3, 5])) {
            let c = index(p, a, n);
            let lhs = c.eval(&(x + y)).unwrap();
            let rhs = c.eval(&x).unwrap().add(&c.eval(&y).unwrap()).unwrap();
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn group_laws(a in 0i128..100_000, b in 0i128..100_000, d in 0i128..100_000,
                      n in 0u32..7, p in prop::sample::select(vec![2u32, 3, 5])) {
            let (c1, c2, c3) = (index(p, a, n), index(p, b, n), index(p, d, n));
            prop_assert_eq!(c1.dual_add(&c2).unwrap(), c2.dual_add(&c1).unwrap());
            prop_assert_eq!(
                c1.dual_add(&c2).unwrap().dual_add(&c3).unwrap(),
                c1.dual_add(&c2.dual_add(&c3).unwrap()).unwrap()
            );
            prop_assert_eq!(c1.dual_add(&c1.dual_neg()).unwrap(), CharIndex::trivial(p));
        }

        #[test]
        fn dual_add_is_pointwise_product(a in 0i128..10_000, b in 0i128..10_000, n in 0u32..6,
                                         x in -10_000i64..10_000, p in prop::sample::select(vec![2u32, 3, 5])) {
            let (c1, c2) = (index(p, a, n), index(p, b, n));
            let lhs = c1.dual_add(&c2).unwrap().eval(&x).unwrap();
            let rhs = c1.eval(&x).unwrap().add(&c2.eval(&x).unwrap()).unwrap();
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn locality(a in 0i128..10_000, n in 0u32..6, x in 0i128..1_000_000,
                    p in prop::sample::select(vec![2u32, 3, 5])) {
            let c = index(p, a, n);
            let px = PadicInt::from_integer(x, p as u64, 8).unwrap();
            let r = px.project(n as usize).unwrap();
            prop_assert_eq!(c.eval(&px).unwrap(), c.eval(&r).unwrap());
        }
    }
}
