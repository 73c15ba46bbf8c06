//! Small integer helpers shared by the other modules.

use crate::error::{Error, Result};

/// Trial-division primality test; the primes used here are small.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    let mut d = 3u64;
    while d.saturating_mul(d) <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

pub fn check_prime(p: u64) -> Result<u32> {
    if p > u32::MAX as u64 || !is_prime(p) {
        return Err(Error::InvalidPrime(p));
    }
    Ok(p as u32)
}

/// `p^e` as a `u64`, failing on overflow.
pub fn pow(p: u32, e: u32) -> Result<u64> {
    (p as u64)
        .checked_pow(e)
        .ok_or(Error::Overflow { p, exponent: e })
}

/// `p^e` as a `usize`, for sizing level-`e` buffers.
pub fn size(p: u32, e: u32) -> Result<usize> {
    let q = pow(p, e)?;
    usize::try_from(q).map_err(|_| Error::Overflow { p, exponent: e })
}

/// Largest `v` with `p^v | a`, for `a != 0`.
pub fn p_adic_order(mut a: u64, p: u32) -> u32 {
    debug_assert!(a != 0);
    let p = p as u64;
    let mut v = 0;
    while a.is_multiple_of(p) {
        a /= p;
        v += 1;
    }
    v
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primes_below_thirty() {
        let primes: Vec<u64> = (0..30).filter(|&n| is_prime(n)).collect();
        assert_eq!(primes, vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29]);
    }

    #[test]
    fn pow_overflow() {
        assert_eq!(pow(2, 10).unwrap(), 1024);
        assert!(matches!(pow(2, 64), Err(Error::Overflow { .. })));
    }

    #[test]
    fn order() {
        assert_eq!(p_adic_order(12, 2), 2);
        assert_eq!(p_adic_order(7, 2), 0);
        assert_eq!(p_adic_order(81, 3), 4);
    }
}
