//! Level-`n` harmonic analysis: functions on `Z/p^n Z` with the normalized
//! Haar inner product, the pullback maps between levels, and transforms to
//! and from character coefficients.
//!
//! Coefficients are keyed by reduced [`CharIndex`] values in the canonical
//! `(n, m)` order. The raw frequency `k` in `0..p^n` and the index
//! `reduce(k, n)` name the same character, so a transform of length `p^n`
//! produces exactly one coefficient per index of level at most `n`.

use num_complex::Complex64;
use serde_json::json;

use crate::arith;
use crate::dual::{self, CharIndex};
use crate::error::{Error, Result};
use crate::parallel::{self, Strategy};
use crate::report::{float, Table};
use crate::scalar::{RootTable, Scalar};

/// Largest `p^n` for which exact (cyclotomic) transforms are run by default.
pub const DEFAULT_EXACT_CAP: u64 = 4096;

/// Sub-transforms shorter than this run sequentially.
const PARALLEL_THRESHOLD: usize = 1 << 10;

pub fn check_exact_cap(p: u32, level: u32, cap: u64) -> Result<()> {
    let q = arith::pow(p, level)?;
    if q > cap {
        return Err(Error::ExactnessCap { cap, requested: q });
    }
    Ok(())
}

/// A function on `Z/p^n Z`, indexed by residues `0..p^n`.
#[derive(Debug, Clone, PartialEq)]
pub struct LevelFunction<T> {
    p: u32,
    level: u32,
    values: Vec<T>,
}

impl<T: Scalar> LevelFunction<T> {
    pub fn new(p: u32, level: u32, values: Vec<T>) -> Result<Self> {
        arith::check_prime(p as u64)?;
        let expected = arith::size(p, level)?;
        if values.len() != expected {
            return Err(Error::InvalidLength { expected, actual: values.len() });
        }
        Ok(Self { p, level, values })
    }

    pub fn from_fn(p: u32, level: u32, f: impl FnMut(u64) -> T) -> Result<Self> {
        arith::check_prime(p as u64)?;
        let q = arith::pow(p, level)?;
        arith::size(p, level)?;
        Ok(Self { p, level, values: (0..q).map(f).collect() })
    }

    pub fn constant(p: u32, level: u32, value: T) -> Result<Self> {
        Self::from_fn(p, level, |_| value.clone())
    }

    /// The character `c` sampled on `Z/p^level Z`.
    pub fn character(c: &CharIndex, level: u32) -> Result<Self> {
        let k = c.frequency(level)?;
        let roots = T::roots(c.prime(), level)?;
        let q = roots.modulus();
        Self::from_fn(c.prime(), level, |x| roots.root((k as u128 * x as u128 % q as u128) as u64))
    }

    pub fn prime(&self) -> u32 {
        self.p
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn into_values(self) -> Vec<T> {
        self.values
    }

    fn check_compatible(&self, other: &Self) -> Result<()> {
        if self.p != other.p {
            return Err(Error::PrimeMismatch { left: self.p, right: other.p });
        }
        if self.level != other.level {
            return Err(Error::LevelMismatch { left: self.level, right: other.level });
        }
        Ok(())
    }

    /// `(1/p^n) sum_x f(x) conj(g(x))`.
    pub fn haar_inner(&self, other: &Self) -> Result<T> {
        self.check_compatible(other)?;
        let sum = self
            .values
            .iter()
            .zip(&other.values)
            .filter(|(f, g)| !f.is_zero() && !g.is_zero())
            .fold(T::zero(), |acc, (f, g)| acc + f.clone() * g.conj());
        Ok(sum.div_int(self.values.len() as u64))
    }

    /// Pullback along `Z/p^L Z -> Z/p^n Z`: `result(x) = f(x mod p^n)`.
    pub fn lift(&self, level: u32) -> Result<Self> {
        if level < self.level {
            return Err(Error::CannotLower { from: self.level, to: level });
        }
        let len = self.values.len() as u64;
        Self::from_fn(self.p, level, |x| self.values[(x % len) as usize].clone())
    }

    /// Right translation `x -> f(x + y)`.
    pub fn translate(&self, y: i128) -> Self {
        let q = self.values.len() as i128;
        let shift = y.rem_euclid(q) as usize;
        let values = (0..self.values.len()).map(|x| self.values[(x + shift) % q as usize].clone()).collect();
        Self { p: self.p, level: self.level, values }
    }

    pub fn to_complex(&self) -> LevelFunction<Complex64> {
        LevelFunction { p: self.p, level: self.level, values: self.values.iter().map(T::to_complex).collect() }
    }

    /// Largest pointwise `|f(x) - g(x)|`, through the complex embedding.
    pub fn max_abs_diff(&self, other: &Self) -> Result<f64> {
        self.check_compatible(other)?;
        Ok(self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a.to_complex() - b.to_complex()).norm())
            .fold(0.0, f64::max))
    }
}

/// Character coefficients of a level-`n` function, one per index in
/// `dual::enumerate(p, n)`.
#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientMap<T> {
    p: u32,
    level: u32,
    indices: Vec<CharIndex>,
    coeffs: Vec<T>,
}

impl<T: Scalar> CoefficientMap<T> {
    pub fn zeros(p: u32, level: u32) -> Result<Self> {
        let indices = dual::enumerate(p, level)?;
        let coeffs = vec![T::zero(); indices.len()];
        Ok(Self { p, level, indices, coeffs })
    }

    /// Coefficients listed in canonical order.
    pub fn from_values(p: u32, level: u32, coeffs: Vec<T>) -> Result<Self> {
        let indices = dual::enumerate(p, level)?;
        if coeffs.len() != indices.len() {
            return Err(Error::InvalidLength { expected: indices.len(), actual: coeffs.len() });
        }
        Ok(Self { p, level, indices, coeffs })
    }

    pub fn prime(&self) -> u32 {
        self.p
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn get(&self, c: &CharIndex) -> Option<&T> {
        if c.prime() != self.p || c.level() > self.level {
            return None;
        }
        self.coeffs.get(c.position())
    }

    pub fn set(&mut self, c: &CharIndex, value: T) -> Result<()> {
        if c.prime() != self.p {
            return Err(Error::PrimeMismatch { left: self.p, right: c.prime() });
        }
        if c.level() > self.level {
            return Err(Error::InsufficientLevel { needed: c.level(), available: self.level });
        }
        self.coeffs[c.position()] = value;
        Ok(())
    }

    pub fn iter(&self) -> impl Iterator<Item = (&CharIndex, &T)> {
        self.indices.iter().zip(&self.coeffs)
    }

    pub fn values(&self) -> &[T] {
        &self.coeffs
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn nonzero_count(&self) -> usize {
        self.coeffs.iter().filter(|c| !c.is_zero()).count()
    }

    /// Pads with zero coefficients for the characters of level above `n`.
    pub fn extend_to(&self, level: u32) -> Result<Self> {
        if level < self.level {
            return Err(Error::CannotLower { from: self.level, to: level });
        }
        let mut out = Self::zeros(self.p, level)?;
        out.coeffs[..self.coeffs.len()].clone_from_slice(&self.coeffs);
        Ok(out)
    }

    /// Applies `f(index, coefficient)` to every entry.
    pub fn map<U: Scalar>(&self, mut f: impl FnMut(&CharIndex, &T) -> U) -> CoefficientMap<U> {
        CoefficientMap {
            p: self.p,
            level: self.level,
            indices: self.indices.clone(),
            coeffs: self.iter().map(|(c, v)| f(c, v)).collect(),
        }
    }

    pub fn to_complex(&self) -> CoefficientMap<Complex64> {
        self.map(|_, v| v.to_complex())
    }

    /// `sum |coef|^2`.
    pub fn energy(&self) -> f64 {
        self.coeffs.iter().map(|c| c.to_complex().norm_sqr()).sum()
    }

    pub fn max_abs_diff(&self, other: &Self) -> Result<f64> {
        if self.level != other.level {
            return Err(Error::LevelMismatch { left: self.level, right: other.level });
        }
        Ok(self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| (a.to_complex() - b.to_complex()).norm())
            .fold(0.0, f64::max))
    }

    /// Rows `m,n,re,im` in canonical order.
    pub fn to_table(&self) -> Table {
        let mut t = Table::new(["m", "n", "re", "im"]);
        for (c, v) in self.iter() {
            let z = v.to_complex();
            t.push(vec![json!(c.m()), json!(c.level()), float(z.re), float(z.im)]);
        }
        t
    }

    pub fn to_json(&self) -> String {
        self.to_table().to_json()
    }

    pub fn to_csv(&self) -> Result<String> {
        self.to_table().to_csv()
    }
}

/// Direct summation of `<f, chi_c>` for every index `c` of level at most `n`.
pub fn dft<T: Scalar>(f: &LevelFunction<T>) -> Result<CoefficientMap<T>> {
    dft_with(f, Strategy::default())
}

pub fn dft_with<T: Scalar>(f: &LevelFunction<T>, strategy: Strategy) -> Result<CoefficientMap<T>> {
    let (p, level) = (f.p, f.level);
    let indices = dual::enumerate(p, level)?;
    let roots = T::roots(p, level)?;
    let q = roots.modulus();
    let support: Vec<(u64, &T)> = f
        .values
        .iter()
        .enumerate()
        .filter(|(_, v)| !v.is_zero())
        .map(|(x, v)| (x as u64, v))
        .collect();
    let coeffs = parallel::map_slice(strategy, &indices, |c| {
        let k = c.frequency(level).expect("index level within transform level");
        support
            .iter()
            .fold(T::zero(), |acc, (x, v)| {
                let e = (k as u128 * *x as u128 % q as u128) as u64;
                acc + roots.rotate(v, (q - e) % q)
            })
            .div_int(q)
    });
    Ok(CoefficientMap { p, level, indices, coeffs })
}

/// Radix-`p` decimation in time over the tower `Z/p^n Z, ..., Z/p Z`:
/// `out[k] = sum_x input[x] w^{sign k x}` with `w = exp(2 pi i / len)`.
/// `step = q / len` converts exponents to the shared level-`n` table.
fn radix_transform<T, R>(input: &[T], p: usize, roots: &R, step: u64, forward: bool, strategy: Strategy) -> Vec<T>
where
    T: Scalar,
    R: RootTable<T>,
{
    let len = input.len();
    if len == 1 {
        return vec![input[0].clone()];
    }
    let sub_len = len / p;
    let strategy = if len >= PARALLEL_THRESHOLD { strategy } else { Strategy::Sequential };
    let subs: Vec<Vec<T>> = parallel::map_range(strategy, p, |j| {
        let decimated: Vec<T> = input[j..].iter().step_by(p).cloned().collect();
        radix_transform(&decimated, p, roots, step * p as u64, forward, strategy)
    });
    let q = roots.modulus();
    parallel::map_range(strategy, len, |k| {
        let r = k % sub_len;
        (1..p).fold(subs[0][r].clone(), |acc, j| {
            let e = (k as u128 * j as u128 * step as u128 % q as u128) as u64;
            let e = if forward { (q - e) % q } else { e };
            acc + roots.rotate(&subs[j][r], e)
        })
    })
}

/// Same contract as [`dft`], in `O(n p^{n+1})` operations.
pub fn fft<T: Scalar>(f: &LevelFunction<T>) -> Result<CoefficientMap<T>> {
    fft_with(f, Strategy::default())
}

pub fn fft_with<T: Scalar>(f: &LevelFunction<T>, strategy: Strategy) -> Result<CoefficientMap<T>> {
    let (p, level) = (f.p, f.level);
    let roots = T::roots(p, level)?;
    let q = roots.modulus();
    let raw = radix_transform(&f.values, p as usize, &roots, 1, true, strategy);
    let indices = dual::enumerate(p, level)?;
    let coeffs = indices
        .iter()
        .map(|c| raw[c.frequency(level).expect("index level within transform level") as usize].div_int(q))
        .collect();
    Ok(CoefficientMap { p, level, indices, coeffs })
}

/// `x -> sum_c coef(c) chi_c(x)` on `Z/p^L Z`.
pub fn synthesize<T: Scalar>(coeffs: &CoefficientMap<T>, level: u32) -> Result<LevelFunction<T>> {
    synthesize_with(coeffs, level, Strategy::default())
}

pub fn synthesize_with<T: Scalar>(coeffs: &CoefficientMap<T>, level: u32, strategy: Strategy) -> Result<LevelFunction<T>> {
    if level < coeffs.level {
        return Err(Error::CannotLower { from: coeffs.level, to: level });
    }
    let p = coeffs.p;
    let roots = T::roots(p, level)?;
    let mut spectrum = vec![T::zero(); arith::size(p, level)?];
    for (c, v) in coeffs.iter() {
        spectrum[c.frequency(level)? as usize] = v.clone();
    }
    let values = radix_transform(&spectrum, p as usize, &roots, 1, false, strategy);
    Ok(LevelFunction { p, level, values })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cyclotomic::Cyclotomic;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    fn c64(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn random_function(p: u32, level: u32, rng: &mut StdRng) -> LevelFunction<Complex64> {
        LevelFunction::from_fn(p, level, |_| c64(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))).unwrap()
    }

    fn ci(p: u32, m: u64, n: u32) -> CharIndex {
        CharIndex::new(p, m, n).unwrap()
    }

    #[test]
    fn inner_product_examples() {
        let c = ci(3, 5, 2);
        let chi = LevelFunction::<Complex64>::character(&c, 2).unwrap();
        assert!((chi.haar_inner(&chi).unwrap() - c64(1.0, 0.0)).norm() < 1e-15);
        let a = LevelFunction::<Complex64>::character(&ci(2, 1, 1), 1).unwrap();
        let b = LevelFunction::<Complex64>::character(&CharIndex::trivial(2), 1).unwrap();
        assert_eq!(a.haar_inner(&b).unwrap(), c64(0.0, 0.0));
        let one = LevelFunction::constant(5, 2, c64(1.0, 0.0)).unwrap();
        assert_eq!(one.haar_inner(&one).unwrap(), c64(1.0, 0.0));
        let other = LevelFunction::constant(5, 1, c64(1.0, 0.0)).unwrap();
        assert_eq!(one.haar_inner(&other), Err(Error::LevelMismatch { left: 2, right: 1 }));
    }

    #[test]
    fn exact_orthonormality() {
        for p in [2u32, 3] {
            let level = 3;
            let chars: Vec<_> = dual::enumerate(p, level)
                .unwrap()
                .iter()
                .map(|c| LevelFunction::<Cyclotomic>::character(c, level).unwrap())
                .collect();
            for (i, f) in chars.iter().enumerate() {
                for (j, g) in chars.iter().enumerate() {
                    let expect = Cyclotomic::from_ratio((i == j) as i64, 1);
                    assert_eq!(f.haar_inner(g).unwrap(), expect, "p={p} i={i} j={j}");
                }
            }
        }
    }

    #[test]
    fn lift_examples() {
        let f = LevelFunction::new(2, 1, vec![c64(1.0, 0.0), c64(2.0, 0.0)]).unwrap();
        let g = f.lift(2).unwrap();
        let want: Vec<_> = [1.0, 2.0, 1.0, 2.0].iter().map(|&x| c64(x, 0.0)).collect();
        assert_eq!(g.values(), &want[..]);
        let k = LevelFunction::constant(3, 1, c64(0.25, -1.0)).unwrap().lift(4).unwrap();
        assert!(k.values().iter().all(|&v| v == c64(0.25, -1.0)));
        assert_eq!(g.lift(1), Err(Error::CannotLower { from: 2, to: 1 }));
    }

    #[test]
    fn lift_is_an_isometry_and_intertwines_analysis() {
        let mut rng = StdRng::seed_from_u64(7);
        for p in [2u32, 3, 5] {
            let f = random_function(p, 2, &mut rng);
            let g = random_function(p, 2, &mut rng);
            let (fl, gl) = (f.lift(4).unwrap(), g.lift(4).unwrap());
            assert!((fl.haar_inner(&gl).unwrap() - f.haar_inner(&g).unwrap()).norm() < 1e-12);
            let lifted = fft(&fl).unwrap();
            let extended = fft(&f).unwrap().extend_to(4).unwrap();
            assert!(lifted.max_abs_diff(&extended).unwrap() < 1e-12);
        }
    }

    #[test]
    fn dft_of_character_is_delta() {
        let c = ci(5, 3, 1);
        let chi = LevelFunction::<Complex64>::character(&c, 2).unwrap();
        let coeffs = dft(&chi).unwrap();
        for (d, v) in coeffs.iter() {
            let want = if *d == c { 1.0 } else { 0.0 };
            assert!((v - c64(want, 0.0)).norm() < 1e-13, "{d}");
        }
    }

    #[test]
    fn dft_of_even_ball() {
        // indicator of 0 + 2Z_2 at level 1: coefficients 1/2, 1/2
        let f = LevelFunction::new(2, 1, vec![c64(1.0, 0.0), c64(0.0, 0.0)]).unwrap();
        let coeffs = dft(&f).unwrap();
        assert_eq!(coeffs.values(), &[c64(0.5, 0.0), c64(0.5, 0.0)]);
        assert_eq!(fft(&f).unwrap().values(), coeffs.values());
    }

    #[test]
    fn dft_of_point_mass() {
        for (p, level) in [(2u32, 4u32), (3, 3), (5, 2)] {
            let f = LevelFunction::<Cyclotomic>::from_fn(p, level, |x| Cyclotomic::from_ratio((x == 0) as i64, 1)).unwrap();
            let q = p.pow(level) as u64;
            for (_, v) in dft(&f).unwrap().iter() {
                assert_eq!(*v, Cyclotomic::from_ratio(1, q));
            }
        }
    }

    #[test]
    fn fft_of_constant() {
        let f = LevelFunction::constant(3, 3, c64(2.0, 1.0)).unwrap();
        let coeffs = fft(&f).unwrap();
        assert!((coeffs.values()[0] - c64(2.0, 1.0)).norm() < 1e-14);
        assert!(coeffs.values()[1..].iter().all(|v| v.norm() < 1e-14));
    }

    #[test]
    fn fft_matches_dft() {
        let mut rng = StdRng::seed_from_u64(11);
        for (p, level) in [(2u32, 7u32), (3, 4), (5, 3), (7, 2)] {
            for _ in 0..5 {
                let f = random_function(p, level, &mut rng);
                let d = dft(&f).unwrap().max_abs_diff(&fft(&f).unwrap()).unwrap();
                assert!(d < 1e-12, "p={p} level={level} diff={d}");
            }
        }
    }

    #[test]
    fn exact_fft_matches_exact_dft() {
        let f = LevelFunction::<Cyclotomic>::from_fn(3, 2, |x| Cyclotomic::from_ratio(x as i64 * x as i64 - 3, 2)).unwrap();
        assert_eq!(fft(&f).unwrap(), dft(&f).unwrap());
        assert_eq!(synthesize(&dft(&f).unwrap(), 2).unwrap(), f);
    }

    #[test]
    fn sequential_and_parallel_agree_bitwise() {
        let mut rng = StdRng::seed_from_u64(3);
        let f = random_function(2, 12, &mut rng);
        let a = fft_with(&f, Strategy::Sequential).unwrap();
        let b = fft_with(&f, Strategy::Parallel).unwrap();
        assert_eq!(a, b);
        let g = random_function(3, 5, &mut rng);
        assert_eq!(dft_with(&g, Strategy::Sequential).unwrap(), dft_with(&g, Strategy::Parallel).unwrap());
    }

    #[test]
    fn synthesis_round_trip() {
        let mut rng = StdRng::seed_from_u64(5);
        for (p, level) in [(2u32, 6u32), (3, 4), (5, 3)] {
            let f = random_function(p, level, &mut rng);
            let back = synthesize(&dft(&f).unwrap(), level).unwrap();
            assert!(back.max_abs_diff(&f).unwrap() <= 1e-12);
        }
    }

    #[test]
    fn synthesize_single_character() {
        let c = ci(3, 4, 2);
        let mut coeffs = CoefficientMap::<Cyclotomic>::zeros(3, 2).unwrap();
        coeffs.set(&c, Cyclotomic::from_ratio(1, 1)).unwrap();
        assert_eq!(synthesize(&coeffs, 3).unwrap(), LevelFunction::character(&c, 3).unwrap());
        assert_eq!(synthesize(&coeffs, 1), Err(Error::CannotLower { from: 2, to: 1 }));
    }

    #[test]
    fn parseval() {
        let mut rng = StdRng::seed_from_u64(9);
        for (p, level) in [(2u32, 8u32), (3, 5), (5, 3)] {
            let f = random_function(p, level, &mut rng);
            let lhs = f.haar_inner(&f).unwrap().re;
            let rhs = fft(&f).unwrap().energy();
            assert!((lhs - rhs).abs() < 1e-12);
        }
    }

    #[test]
    fn translation_multiplies_coefficients_by_character_values() {
        let mut rng = StdRng::seed_from_u64(13);
        let f = random_function(3, 3, &mut rng);
        let y = 5;
        let shifted = fft(&f.translate(y)).unwrap();
        let base = fft(&f).unwrap();
        for ((c, a), b) in shifted.iter().zip(base.values()) {
            let phase = c.eval(&y).unwrap().to_complex();
            assert!((a - b * phase).norm() < 1e-12);
        }
    }

    #[test]
    fn coefficient_serialization() {
        let f = LevelFunction::new(2, 1, vec![c64(0.0, 0.0), c64(1.0, 0.0)]).unwrap();
        let coeffs = fft(&f).unwrap();
        assert_eq!(coeffs.to_csv().unwrap(), "m,n,re,im\n1,0,0.5,0\n1,1,-0.5,0\n");
        let v: serde_json::Value = serde_json::from_str(&coeffs.to_json()).unwrap();
        assert_eq!(v["rows"][1], json!({"m": 1, "n": 1, "re": -0.5, "im": 0.0}));
    }

    #[test]
    fn exactness_cap() {
        assert!(check_exact_cap(2, 12, DEFAULT_EXACT_CAP).is_ok());
        assert_eq!(
            check_exact_cap(2, 13, DEFAULT_EXACT_CAP),
            Err(Error::ExactnessCap { cap: 4096, requested: 8192 })
        );
    }
}
