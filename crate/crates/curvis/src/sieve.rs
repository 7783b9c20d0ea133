//! Prime sieves and factorization tables shared by the counting and density
//! code: an ascending prime list, a smallest-prime-factor table, and a
//! Möbius table. All three are plain read-only arrays once built, so they can
//! be shared freely across worker threads.

use crate::error::Error;
use crate::gcdk::{self, CurveExponent};

/// Hard cap for [`primes_up_to`]: the bitset stays under ~128 MiB.
pub const MAX_PRIME_SIEVE_LIMIT: u64 = 1 << 31;

/// Hard cap for [`SpfTable::new`]: the table stays under ~256 MiB.
pub const MAX_SPF_LIMIT: u64 = 1 << 26;

/// Hard cap for [`mobius_table`]: table plus scratch stays under ~200 MiB.
pub const MAX_MOBIUS_LIMIT: u64 = 1 << 27;

/// All primes `<= limit`, ascending. Limits below 2 yield an empty list.
///
/// Classic sieve of Eratosthenes over odd numbers, bit-packed.
///
/// ```
/// use curvis::sieve::primes_up_to;
///
/// assert_eq!(primes_up_to(10)?, vec![2, 3, 5, 7]);
/// assert_eq!(primes_up_to(2)?, vec![2]);
/// # Ok::<(), curvis::Error>(())
/// ```
pub fn primes_up_to(limit: u64) -> Result<Vec<u64>, Error> {
    if limit > MAX_PRIME_SIEVE_LIMIT {
        return Err(Error::LimitExceeded {
            what: "prime sieve limit",
            requested: limit,
            limit: MAX_PRIME_SIEVE_LIMIT,
        });
    }
    if limit < 2 {
        return Ok(Vec::new());
    }
    let mut primes = vec![2u64];
    if limit == 2 {
        return Ok(primes);
    }
    // Bit i stands for the odd number 2i + 3; set bits are composite.
    let odd_count = ((limit - 1) / 2) as usize;
    let mut composite = vec![0u64; odd_count.div_ceil(64)];
    let is_set = |bits: &[u64], i: usize| bits[i / 64] >> (i % 64) & 1 == 1;
    let mut i = 0usize;
    loop {
        let p = 2 * i as u64 + 3;
        if p * p > limit {
            break;
        }
        if !is_set(&composite, i) {
            // First multiple worth crossing is p^2; smaller ones have a
            // smaller prime factor. Index of odd m is (m - 3) / 2, and
            // consecutive odd multiples of p are p indices apart.
            let mut j = ((p * p - 3) / 2) as usize;
            while j < odd_count {
                composite[j / 64] |= 1 << (j % 64);
                j += p as usize;
            }
        }
        i += 1;
    }
    primes.extend(
        (0..odd_count)
            .filter(|&i| !is_set(&composite, i))
            .map(|i| 2 * i as u64 + 3),
    );
    Ok(primes)
}

/// Smallest-prime-factor table for `2..=limit`.
///
/// One array lookup factors any in-range value, which is what makes the
/// brute-force counting engine's inner gcd loop cheap. Out-of-range values
/// fall back to trial division transparently in [`SpfTable::gcd_k`].
#[derive(Debug, Clone)]
pub struct SpfTable {
    spf: Vec<u32>,
}

impl SpfTable {
    pub fn new(limit: u64) -> Result<Self, Error> {
        if limit > MAX_SPF_LIMIT {
            return Err(Error::LimitExceeded {
                what: "smallest-prime-factor table limit",
                requested: limit,
                limit: MAX_SPF_LIMIT,
            });
        }
        let n = limit as usize;
        let mut spf: Vec<u32> = vec![0; n + 1];
        for i in 2..=n {
            if spf[i] == 0 {
                // i is prime; claim every multiple not already claimed by a
                // smaller prime.
                for j in (i..=n).step_by(i) {
                    if spf[j] == 0 {
                        spf[j] = i as u32;
                    }
                }
            }
        }
        Ok(SpfTable { spf })
    }

    /// Largest value the table covers.
    pub fn limit(&self) -> u64 {
        (self.spf.len() - 1) as u64
    }

    /// Smallest prime factor of `n`, or `None` when `n < 2` or `n` is out of
    /// range.
    pub fn smallest_factor(&self, n: u64) -> Option<u64> {
        self.spf
            .get(n as usize)
            .copied()
            .filter(|&p| p != 0)
            .map(u64::from)
    }

    /// [`crate::gcd_k`] backed by this table: table lookups while the
    /// running gcd stays in range, trial division past it.
    pub fn gcd_k(&self, m: i64, n: i64, k: CurveExponent) -> Result<u64, Error> {
        if m == 0 || n == 0 {
            return Err(Error::ZeroGcdInput { m, n });
        }
        Ok(self.gcd_k_magnitudes(m.unsigned_abs(), n.unsigned_abs(), k.get()))
    }

    /// Core used by the counting engines, which have already reduced to
    /// nonzero magnitudes.
    pub(crate) fn gcd_k_magnitudes(&self, ma: u64, na: u64, k: u32) -> u64 {
        gcdk::gcd_k_magnitudes(ma, na, k, |g| {
            self.smallest_factor(g)
                .unwrap_or_else(|| gcdk::smallest_factor_trial(g))
        })
    }
}

/// Möbius function values for `0..=limit` (index 0 is a filler zero).
///
/// Linear sieve: every composite is struck exactly once, by its smallest
/// prime factor, so the recurrences `mu[i*p] = -mu[i]` (new prime factor)
/// and `mu[i*p] = 0` (repeated prime factor) apply verbatim.
///
/// ```
/// use curvis::sieve::mobius_table;
///
/// let mu = mobius_table(12)?;
/// assert_eq!(mu[1], 1);
/// assert_eq!(mu[6], 1);   // two distinct prime factors
/// assert_eq!(mu[12], 0);  // divisible by 4
/// # Ok::<(), curvis::Error>(())
/// ```
pub fn mobius_table(limit: u64) -> Result<Vec<i8>, Error> {
    if limit > MAX_MOBIUS_LIMIT {
        return Err(Error::LimitExceeded {
            what: "Moebius table limit",
            requested: limit,
            limit: MAX_MOBIUS_LIMIT,
        });
    }
    let n = limit as usize;
    let mut mu = vec![0i8; n + 1];
    if n >= 1 {
        mu[1] = 1;
    }
    let mut primes: Vec<usize> = Vec::new();
    let mut composite = vec![false; n + 1];
    for i in 2..=n {
        if !composite[i] {
            primes.push(i);
            mu[i] = -1;
        }
        for &p in &primes {
            let Some(ip) = i.checked_mul(p).filter(|&ip| ip <= n) else {
                break;
            };
            composite[ip] = true;
            if i % p == 0 {
                mu[ip] = 0;
                break;
            }
            mu[ip] = -mu[i];
        }
    }
    Ok(mu)
}
