//! Scalars the transforms run over: double-precision complex numbers, or
//! exact [`Cyclotomic`] elements.

use std::collections::HashMap;
use std::fmt::Debug;
use std::ops::{Add, Mul, Sub};
use std::sync::{Arc, Mutex, OnceLock};

use num_complex::Complex64;

use crate::arith;
use crate::cyclotomic::{ratio, Cyclotomic};
use crate::dual::unit_root;
use crate::error::Result;

pub trait Scalar:
    Clone + Debug + PartialEq + Send + Sync + Add<Output = Self> + Sub<Output = Self> + Mul<Output = Self>
{
    type Roots: RootTable<Self>;

    /// Roots of unity of order dividing `p^level`.
    fn roots(p: u32, level: u32) -> Result<Self::Roots>;
    fn zero() -> Self;
    fn from_ratio(num: i64, den: u64) -> Self;
    fn conj(&self) -> Self;
    fn div_int(&self, d: u64) -> Self;
    fn to_complex(&self) -> Complex64;
    fn is_zero(&self) -> bool;
}

pub trait RootTable<T>: Send + Sync {
    /// The order `q = p^level` of the table.
    fn modulus(&self) -> u64;
    /// `exp(2 pi i a / q)`.
    fn root(&self, a: u64) -> T;
    /// `value * exp(2 pi i a / q)`.
    fn rotate(&self, value: &T, a: u64) -> T;
}

/// Shared twiddle tables, built once per `(p, level)`.
#[derive(Clone, Debug)]
pub struct ComplexRoots {
    table: Arc<Vec<Complex64>>,
}

type TwiddleCache = Mutex<HashMap<(u32, u32), Arc<Vec<Complex64>>>>;

fn twiddle_cache() -> &'static TwiddleCache {
    static CACHE: OnceLock<TwiddleCache> = OnceLock::new();
    CACHE.get_or_init(Default::default)
}

impl ComplexRoots {
    pub fn new(p: u32, level: u32) -> Result<Self> {
        let q = arith::size(p, level)?;
        let mut cache = twiddle_cache().lock().unwrap_or_else(|e| e.into_inner());
        let table = cache
            .entry((p, level))
            .or_insert_with(|| Arc::new((0..q as u64).map(|a| unit_root(a, q as u64)).collect()))
            .clone();
        Ok(Self { table })
    }
}

impl RootTable<Complex64> for ComplexRoots {
    fn modulus(&self) -> u64 {
        self.table.len() as u64
    }

    fn root(&self, a: u64) -> Complex64 {
        self.table[(a % self.modulus()) as usize]
    }

    fn rotate(&self, value: &Complex64, a: u64) -> Complex64 {
        value * self.root(a)
    }
}

impl Scalar for Complex64 {
    type Roots = ComplexRoots;

    fn roots(p: u32, level: u32) -> Result<ComplexRoots> {
        ComplexRoots::new(p, level)
    }

    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }

    fn from_ratio(num: i64, den: u64) -> Self {
        Complex64::new(num as f64 / den as f64, 0.0)
    }

    fn conj(&self) -> Self {
        Complex64::conj(self)
    }

    fn div_int(&self, d: u64) -> Self {
        self / d as f64
    }

    fn to_complex(&self) -> Complex64 {
        *self
    }

    fn is_zero(&self) -> bool {
        self.re == 0.0 && self.im == 0.0
    }
}

#[derive(Clone, Copy, Debug)]
pub struct CyclotomicRoots {
    p: u32,
    level: u32,
    q: u64,
}

impl RootTable<Cyclotomic> for CyclotomicRoots {
    fn modulus(&self) -> u64 {
        self.q
    }

    fn root(&self, a: u64) -> Cyclotomic {
        Cyclotomic::from_terms(self.p, self.level, [(a, ratio(1, 1))])
    }

    fn rotate(&self, value: &Cyclotomic, a: u64) -> Cyclotomic {
        value.rotate(self.p, a % self.q, self.level)
    }
}

impl Scalar for Cyclotomic {
    type Roots = CyclotomicRoots;

    fn roots(p: u32, level: u32) -> Result<CyclotomicRoots> {
        Ok(CyclotomicRoots { p, level, q: arith::pow(p, level)? })
    }

    fn zero() -> Self {
        Cyclotomic::zero()
    }

    fn from_ratio(num: i64, den: u64) -> Self {
        Cyclotomic::rational(ratio(num, den))
    }

    fn conj(&self) -> Self {
        Cyclotomic::conj(self)
    }

    fn div_int(&self, d: u64) -> Self {
        self.scale(&ratio(1, d))
    }

    fn to_complex(&self) -> Complex64 {
        Cyclotomic::to_complex(self)
    }

    fn is_zero(&self) -> bool {
        Cyclotomic::is_zero(self)
    }
}
