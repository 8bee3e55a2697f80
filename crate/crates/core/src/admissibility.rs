//! Modular arithmetic primitives and the admissible-prime criterion.
//!
//! A prime `p` is admissible in dimension `n` when `p = 2` or the
//! multiplicative order of `-2` modulo `p` is at most `n + 2`. These are
//! exactly the primes occurring as orders of automorphisms of smooth cubic
//! `n`-folds, and all of them lie below `2^(n+1)`.

use std::fmt;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

/// A rational prime, checked at construction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Prime(u64);

impl Prime {
    pub fn new(value: u64) -> Result<Self> {
        if is_prime(value) {
            Ok(Prime(value))
        } else {
            Err(Error::NotPrime(value))
        }
    }

    #[inline]
    pub fn get(self) -> u64 {
        self.0
    }

    /// Reduces a signed integer into `[0, p)`.
    #[inline]
    pub fn reduce(self, value: i64) -> u64 {
        value.rem_euclid(self.0 as i64) as u64
    }

    /// Multiplicative inverse of a nonzero residue.
    pub fn inv(self, value: u64) -> Option<u64> {
        let v = value % self.0;
        if v == 0 {
            None
        } else {
            Some(pow_mod(v, self.0 - 2, self.0))
        }
    }
}

impl fmt::Display for Prime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl Serialize for Prime {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_u64(self.0)
    }
}

#[inline]
pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut acc = 1u64;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

// The first twelve primes form a witness set that is exhaustive below 3.3e24.
const MR_WITNESSES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];

/// Deterministic Miller-Rabin, exact for every `u64`.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for &w in &MR_WITNESSES {
        if n % w == 0 {
            return n == w;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for &w in &MR_WITNESSES {
        let mut x = pow_mod(w, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Distinct prime factors by trial division.
fn prime_factors(mut m: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut f = 2;
    while f * f <= m {
        if m % f == 0 {
            out.push(f);
            while m % f == 0 {
                m /= f;
            }
        }
        f += if f == 2 { 1 } else { 2 };
    }
    if m > 1 {
        out.push(m);
    }
    out
}

/// Smallest `l >= 1` with `a^l = 1 (mod p)`, or `None` when `a = 0 (mod p)`.
pub fn mult_order(a: i64, p: Prime) -> Option<u64> {
    let pv = p.get();
    let a = p.reduce(a);
    if a == 0 {
        return None;
    }
    if pv < 64 {
        let mut x = a;
        let mut l = 1;
        while x != 1 {
            x = mul_mod(x, a, pv);
            l += 1;
        }
        return Some(l);
    }
    // Strip prime factors from p - 1 while the power stays trivial.
    let mut order = pv - 1;
    for f in prime_factors(pv - 1) {
        while order % f == 0 && pow_mod(a, order / f, pv) == 1 {
            order /= f;
        }
    }
    Some(order)
}

fn check_dimension(n: usize) -> Result<()> {
    if n < 2 {
        Err(Error::InvalidDimension { n, min: 2 })
    } else {
        Ok(())
    }
}

pub fn is_admissible(p: Prime, n: usize) -> Result<bool> {
    check_dimension(n)?;
    if p.get() == 2 {
        return Ok(true);
    }
    Ok(mult_order(-2, p).is_some_and(|l| l <= n as u64 + 2))
}

/// Primes below `limit` by the sieve of Eratosthenes.
fn sieve(limit: usize) -> Vec<u64> {
    if limit < 3 {
        return Vec::new();
    }
    let mut composite = vec![false; limit];
    let mut out = Vec::new();
    for i in 2..limit {
        if !composite[i] {
            out.push(i as u64);
            let mut j = i * i;
            while j < limit {
                composite[j] = true;
                j += i;
            }
        }
    }
    out
}

/// All admissible primes for dimension `n`, increasing. Every admissible
/// prime is below `2^(n+1)`, so the sieve range is complete.
pub fn admissible_primes(n: usize) -> Result<Vec<Prime>> {
    check_dimension(n)?;
    if n > 40 {
        return Err(Error::UnsupportedDimension(n));
    }
    let bound = 1usize << (n + 1);
    let mut out = Vec::new();
    for v in sieve(bound) {
        let p = Prime(v);
        if is_admissible(p, n)? {
            out.push(p);
        }
    }
    Ok(out)
}

pub fn max_admissible_prime(n: usize) -> Result<Prime> {
    let primes = admissible_primes(n)?;
    // 2 is always admissible, so the list is never empty.
    Ok(*primes.last().expect("2 is admissible in every dimension"))
}
