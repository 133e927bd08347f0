//! Exact factorization primitives: largest and smallest prime factors,
//! the Möbius function, friability tests, `Psi(N, y)` and enumeration of
//! sifted squarefree integers.
//!
//! Conventions: `P+(0) = 0`, `P+(±1) = 1`, `P-(0) = 0`, `P-(±1) = +inf`,
//! `mu(0) = 0`. Under these conventions 0 is `y`-friable for every `y`.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};

/// Default number of entries sieved per segment.
pub const DEFAULT_SEGMENT_SIZE: usize = 1 << 22;

/// Largest integer any sieve operation accepts.
pub const MAX_SUPPORTED_N: u64 = 1 << 40;

/// Sentinel stored in the raw `spf` table for `P-(1) = +inf`.
pub const SPF_INFINITY: u64 = u64::MAX;

/// Memory and range limits for sieving.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SieveConfig {
    /// Maximal number of entries in one [`FactorSieve`].
    pub segment_size: usize,
    /// Maximal integer that may be sieved.
    pub max_n: u64,
}

impl Default for SieveConfig {
    fn default() -> Self {
        SieveConfig {
            segment_size: DEFAULT_SEGMENT_SIZE,
            max_n: MAX_SUPPORTED_N,
        }
    }
}

/// Smallest prime factor on the extended integers.
///
/// `Infinite` compares greater than every finite value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum MinPrime {
    Finite(u64),
    Infinite,
}

impl MinPrime {
    /// `true` iff this value is strictly greater than `y`.
    pub fn exceeds(self, y: f64) -> bool {
        match self {
            MinPrime::Finite(p) => p as f64 > y,
            MinPrime::Infinite => true,
        }
    }

    fn from_raw(raw: u64) -> Self {
        if raw == SPF_INFINITY {
            MinPrime::Infinite
        } else {
            MinPrime::Finite(raw)
        }
    }
}

/// Largest prime factor, smallest prime factor and Möbius tables for every
/// integer of the inclusive segment `[lo, hi]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FactorSieve {
    lo: u64,
    hi: u64,
    lpf: Vec<u64>,
    spf: Vec<u64>,
    mu: Vec<i8>,
}

impl FactorSieve {
    /// Sieves `[lo, hi]` with the default configuration.
    pub fn new(lo: u64, hi: u64) -> Result<Self> {
        Self::with_config(lo, hi, &SieveConfig::default())
    }

    pub fn with_config(lo: u64, hi: u64, config: &SieveConfig) -> Result<Self> {
        check_segment(lo, hi, config)?;
        let primes = primes_up_to(isqrt(hi));
        Ok(Self::sieve_segment(lo, hi, &primes))
    }

    /// Sieves `[lo, hi]` given every prime up to `sqrt(hi)`, in order.
    fn sieve_segment(lo: u64, hi: u64, base_primes: &[u64]) -> Self {
        let len = (hi - lo + 1) as usize;
        let mut rem: Vec<u64> = (lo..=hi).collect();
        let mut lpf = vec![1u64; len];
        let mut spf = vec![SPF_INFINITY; len];
        let mut mu = vec![1i8; len];

        for &p in base_primes {
            if p * p > hi {
                break;
            }
            let first = if lo <= p { 2 * p } else { lo.div_ceil(p) * p };
            let mut m = first;
            while m <= hi {
                let i = (m - lo) as usize;
                let mut r = rem[i] / p;
                let mut e = 1u32;
                while r % p == 0 {
                    r /= p;
                    e += 1;
                }
                rem[i] = r;
                if spf[i] == SPF_INFINITY {
                    spf[i] = p;
                }
                lpf[i] = p;
                mu[i] = if e >= 2 { 0 } else { -mu[i] };
                m += p;
            }
        }
        for i in 0..len {
            let r = rem[i];
            if r > 1 {
                // remaining cofactor is a prime above sqrt(hi)
                lpf[i] = r;
                if spf[i] == SPF_INFINITY {
                    spf[i] = r;
                }
                mu[i] = -mu[i];
            }
        }
        if lo == 0 {
            lpf[0] = 0;
            spf[0] = 0;
            mu[0] = 0;
        }
        FactorSieve { lo, hi, lpf, spf, mu }
    }

    pub fn lo(&self) -> u64 {
        self.lo
    }

    pub fn hi(&self) -> u64 {
        self.hi
    }

    pub fn len(&self) -> usize {
        self.lpf.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lpf.is_empty()
    }

    pub fn contains(&self, n: u64) -> bool {
        (self.lo..=self.hi).contains(&n)
    }

    #[inline]
    fn index(&self, n: u64) -> usize {
        assert!(
            self.contains(n),
            "{n} outside sieved segment [{}, {}]",
            self.lo,
            self.hi
        );
        (n - self.lo) as usize
    }

    /// `P+(n)`. Panics if `n` is outside the segment.
    #[inline]
    pub fn largest_prime_factor(&self, n: u64) -> u64 {
        self.lpf[self.index(n)]
    }

    /// `P-(n)`. Panics if `n` is outside the segment.
    #[inline]
    pub fn smallest_prime_factor(&self, n: u64) -> MinPrime {
        MinPrime::from_raw(self.spf[self.index(n)])
    }

    /// `mu(n)`. Panics if `n` is outside the segment.
    #[inline]
    pub fn mobius(&self, n: u64) -> i8 {
        self.mu[self.index(n)]
    }

    /// `P+(n) <= y`. Panics if `n` is outside the segment.
    #[inline]
    pub fn is_friable(&self, n: u64, y: f64) -> bool {
        self.largest_prime_factor(n) as f64 <= y
    }

    /// Raw `P+` table, indexed from `lo`.
    pub fn lpf_table(&self) -> &[u64] {
        &self.lpf
    }

    /// Raw `P-` table, indexed from `lo`; `P-(1)` is [`SPF_INFINITY`].
    pub fn spf_table(&self) -> &[u64] {
        &self.spf
    }

    pub fn mu_table(&self) -> &[i8] {
        &self.mu
    }
}

/// Sieves `[lo, hi]` with the default configuration.
pub fn build_factor_sieve(lo: u64, hi: u64) -> Result<FactorSieve> {
    FactorSieve::new(lo, hi)
}

fn check_segment(lo: u64, hi: u64, config: &SieveConfig) -> Result<()> {
    if lo > hi {
        return Err(Error::arg(format!("empty segment: lo = {lo} > hi = {hi}")));
    }
    if hi > config.max_n {
        return Err(Error::resource(format!(
            "hi = {hi} exceeds the supported maximum {}",
            config.max_n
        )));
    }
    let len = hi - lo + 1;
    if len > config.segment_size as u64 {
        return Err(Error::resource(format!(
            "segment of {len} entries exceeds the configured budget of {}",
            config.segment_size
        )));
    }
    Ok(())
}

/// Sieves `[lo, hi]` in consecutive segments of at most
/// `config.segment_size` entries and hands each one to `visit`, in order.
/// Segments are built in parallel.
pub fn map_segments<T, F>(lo: u64, hi: u64, config: &SieveConfig, visit: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(&FactorSieve) -> T + Sync,
{
    if lo > hi {
        return Err(Error::arg(format!("empty range: lo = {lo} > hi = {hi}")));
    }
    if hi > config.max_n {
        return Err(Error::resource(format!(
            "hi = {hi} exceeds the supported maximum {}",
            config.max_n
        )));
    }
    if config.segment_size == 0 {
        return Err(Error::arg("segment size must be positive"));
    }
    let seg = config.segment_size as u64;
    let primes = primes_up_to(isqrt(hi));
    let count = (hi - lo) / seg + 1;
    Ok((0..count)
        .into_par_iter()
        .map(|s| {
            let a = lo + s * seg;
            let b = (a + seg - 1).min(hi);
            visit(&FactorSieve::sieve_segment(a, b, &primes))
        })
        .collect())
}

/// All primes `<= n` by the sieve of Eratosthenes.
pub fn primes_up_to(n: u64) -> Vec<u64> {
    if n < 2 {
        return Vec::new();
    }
    let n = n as usize;
    let mut composite = vec![false; n + 1];
    let mut primes = Vec::new();
    for i in 2..=n {
        if !composite[i] {
            primes.push(i as u64);
            let mut j = i.saturating_mul(i);
            while j <= n {
                composite[j] = true;
                j += i;
            }
        }
    }
    primes
}

/// Integer square root.
pub fn isqrt(n: u64) -> u64 {
    if n < 2 {
        return n;
    }
    let mut r = (n as f64).sqrt() as u64;
    while r.checked_mul(r).is_none_or(|sq| sq > n) {
        r -= 1;
    }
    while (r + 1).checked_mul(r + 1).is_some_and(|sq| sq <= n) {
        r += 1;
    }
    r
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
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

/// Deterministic Miller-Rabin for 64-bit integers.
pub fn is_prime(n: u64) -> bool {
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    if n < 2 {
        return false;
    }
    for &p in &BASES {
        if n % p == 0 {
            return n == p;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for &a in &BASES {
        let mut x = pow_mod(a, d, n);
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

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// A nontrivial factor of the odd composite `n` (Pollard-Brent).
fn pollard_brent(n: u64) -> u64 {
    for c in 1u64.. {
        let f = |x: u64| (mul_mod(x, x, n) + c) % n;
        let (mut y, mut r, mut q) = (2u64, 1u64, 1u64);
        let mut g = 1u64;
        let mut x = y;
        let mut ys = y;
        while g == 1 {
            x = y;
            for _ in 0..r {
                y = f(y);
            }
            let mut k = 0;
            while k < r && g == 1 {
                ys = y;
                for _ in 0..(128.min(r - k)) {
                    y = f(y);
                    q = mul_mod(q, x.abs_diff(y), n);
                }
                g = gcd(q, n);
                k += 128;
            }
            r *= 2;
        }
        if g == n {
            loop {
                ys = f(ys);
                g = gcd(x.abs_diff(ys), n);
                if g > 1 {
                    break;
                }
            }
        }
        if g != n {
            return g;
        }
    }
    unreachable!()
}

/// Prime factorization `[(p, e)]` of `n >= 1`, primes ascending.
pub fn factorize(n: u64) -> Vec<(u64, u32)> {
    let mut primes = Vec::new();
    let mut n = n;
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        while n % p == 0 {
            primes.push(p);
            n /= p;
        }
    }
    let mut stack = vec![n];
    while let Some(m) = stack.pop() {
        if m == 1 {
            continue;
        }
        if is_prime(m) {
            primes.push(m);
            continue;
        }
        let d = pollard_brent(m);
        stack.push(d);
        stack.push(m / d);
    }
    primes.sort_unstable();
    let mut out: Vec<(u64, u32)> = Vec::new();
    for p in primes {
        match out.last_mut() {
            Some((q, e)) if *q == p => *e += 1,
            _ => out.push((p, 1)),
        }
    }
    out
}

/// `P+(|n|)` with `P+(0) = 0` and `P+(±1) = 1`.
pub fn largest_prime_factor(n: i64) -> u64 {
    match n.unsigned_abs() {
        0 => 0,
        1 => 1,
        m => factorize(m).last().map(|&(p, _)| p).unwrap_or(1),
    }
}

/// `P-(|n|)` with `P-(0) = 0` and `P-(±1) = +inf`.
pub fn smallest_prime_factor(n: i64) -> MinPrime {
    match n.unsigned_abs() {
        0 => MinPrime::Finite(0),
        1 => MinPrime::Infinite,
        m => MinPrime::Finite(factorize(m)[0].0),
    }
}

/// `mu(|n|)`, with `mu(0) = 0`.
pub fn mobius(n: i64) -> i8 {
    match n.unsigned_abs() {
        0 => 0,
        m => {
            let f = factorize(m);
            if f.iter().any(|&(_, e)| e > 1) {
                0
            } else if f.len() % 2 == 0 {
                1
            } else {
                -1
            }
        }
    }
}

/// `P+(n) <= y`.
pub fn is_friable(n: i64, y: f64) -> bool {
    largest_prime_factor(n) as f64 <= y
}

/// `Psi(N, y) = #{1 <= n <= N : P+(n) <= y}`.
pub fn psi_count(n: u64, y: f64) -> Result<u64> {
    psi_count_with(n, y, &SieveConfig::default())
}

pub fn psi_count_with(n: u64, y: f64, config: &SieveConfig) -> Result<u64> {
    if n < 1 {
        return Err(Error::arg("psi_count requires N >= 1"));
    }
    if !(y > 1.0) {
        return Err(Error::arg(format!("friability bound y = {y} must exceed 1")));
    }
    if n > config.max_n {
        return Err(Error::resource(format!(
            "N = {n} exceeds the supported maximum {}",
            config.max_n
        )));
    }
    if y >= n as f64 {
        return Ok(n);
    }
    let counts = map_segments(1, n, config, |seg| {
        seg.lpf_table().iter().filter(|&&p| p as f64 <= y).count() as u64
    })?;
    Ok(counts.into_iter().sum())
}

/// Every squarefree `k <= limit` with `P-(k) > y`, paired with `mu(k)`,
/// ascending. `k = 1` is always present.
pub fn enumerate_sifted_squarefree(limit: u64, y: f64) -> Result<Vec<(u64, i8)>> {
    enumerate_sifted_squarefree_with(limit, y, &SieveConfig::default())
}

pub fn enumerate_sifted_squarefree_with(
    limit: u64,
    y: f64,
    config: &SieveConfig,
) -> Result<Vec<(u64, i8)>> {
    if limit < 1 {
        return Err(Error::arg("limit must be at least 1"));
    }
    if y >= limit as f64 {
        return Ok(vec![(1, 1)]);
    }
    let parts = map_segments(1, limit, config, |seg| {
        let lo = seg.lo();
        seg.mu_table()
            .iter()
            .zip(seg.spf_table())
            .enumerate()
            .filter(|&(_, (&m, &s))| m != 0 && MinPrime::from_raw(s).exceeds(y))
            .map(|(i, (&m, _))| (lo + i as u64, m))
            .collect::<Vec<_>>()
    })?;
    Ok(parts.into_iter().flatten().collect())
}
