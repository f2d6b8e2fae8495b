//! Exact arithmetic functions: factorization, gcd/lcm, Euler's totient,
//! the Möbius function, Jordan's totient and Ramanujan sums.
//!
//! Arguments are machine integers; anything that can outgrow them
//! (`J_k(n) = n^k * ...`) is returned as a [`BigUint`].

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::One;

use crate::{Error, Result};

/// Inputs at or below this bound are factored by plain trial division.
const TRIAL_DIVISION_LIMIT: u64 = 1_000_000_000_000;

/// Above [`TRIAL_DIVISION_LIMIT`], small factors are still stripped by trial
/// division up to this bound before Pollard rho takes over.
const SMALL_PRIME_BOUND: u64 = 1 << 16;

/// Prime-power decomposition `value = prod p_i^{e_i}` with `p_i` strictly
/// increasing. The factorization of 1 is empty.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Factorization {
    value: u64,
    factors: Vec<(u64, u32)>,
}

impl Factorization {
    pub fn value(&self) -> u64 {
        self.value
    }

    pub fn factors(&self) -> &[(u64, u32)] {
        &self.factors
    }

    pub fn primes(&self) -> impl Iterator<Item = u64> + '_ {
        self.factors.iter().map(|&(p, _)| p)
    }

    /// Exponent of `p` in the value; zero when `p` does not divide it.
    pub fn exponent(&self, p: u64) -> u32 {
        self.factors
            .iter()
            .find(|&&(q, _)| q == p)
            .map_or(0, |&(_, e)| e)
    }

    pub fn is_square_free(&self) -> bool {
        self.factors.iter().all(|&(_, e)| e == 1)
    }

    /// All positive divisors, ascending.
    pub fn divisors(&self) -> Vec<u64> {
        let mut divs = vec![1u64];
        for &(p, e) in &self.factors {
            let len = divs.len();
            let mut pk = 1u64;
            for _ in 0..e {
                pk *= p;
                for i in 0..len {
                    divs.push(divs[i] * pk);
                }
            }
        }
        divs.sort_unstable();
        divs
    }
}

/// Factors `n` into primes. Deterministic; rejects `n = 0`.
pub fn factorize(n: u64) -> Result<Factorization> {
    if n == 0 {
        return Err(Error::Domain("cannot factor 0".into()));
    }
    let mut primes = Vec::new();
    let mut rest = n;
    let bound = if n <= TRIAL_DIVISION_LIMIT {
        u64::MAX
    } else {
        SMALL_PRIME_BOUND
    };
    rest = trial_divide(rest, bound, &mut primes);
    if rest > 1 {
        split_large(rest, &mut primes);
    }
    primes.sort_unstable();

    let mut factors: Vec<(u64, u32)> = Vec::new();
    for p in primes {
        match factors.last_mut() {
            Some((q, e)) if *q == p => *e += 1,
            _ => factors.push((p, 1)),
        }
    }
    Ok(Factorization { value: n, factors })
}

/// Strips every prime `p <= bound` with `p * p <= rest`, pushing each prime
/// once per multiplicity. Returns the unfactored cofactor.
fn trial_divide(mut rest: u64, bound: u64, out: &mut Vec<u64>) -> u64 {
    for p in [2u64, 3, 5] {
        while rest.is_multiple_of(p) {
            out.push(p);
            rest /= p;
        }
    }
    // 2-3-5 wheel
    const GAPS: [u64; 8] = [4, 2, 4, 2, 4, 6, 2, 6];
    let mut p = 7u64;
    let mut gap = 0;
    while p <= bound && p.saturating_mul(p) <= rest {
        while rest.is_multiple_of(p) {
            out.push(p);
            rest /= p;
        }
        p += GAPS[gap];
        gap = (gap + 1) % GAPS.len();
    }
    if rest > 1 && (bound == u64::MAX || rest < p.saturating_mul(p)) {
        out.push(rest);
        return 1;
    }
    rest
}

fn split_large(n: u64, out: &mut Vec<u64>) {
    if n == 1 {
        return;
    }
    if is_prime(n) {
        out.push(n);
        return;
    }
    let d = pollard_rho(n);
    split_large(d, out);
    split_large(n / d, out);
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

/// Deterministic primality for all of `u64`: Miller-Rabin with the first
/// twelve prime bases is exact below 3.3 * 10^24.
pub fn is_prime(n: u64) -> bool {
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    if n < 2 {
        return false;
    }
    for p in BASES {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for a in BASES {
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

/// Brent's variant of Pollard rho. `n` must be an odd composite; the
/// polynomial constant is stepped deterministically until a split appears.
fn pollard_rho(n: u64) -> u64 {
    if n.is_multiple_of(2) {
        return 2;
    }
    for c in 1..u64::MAX {
        let f = |x: u64| (mul_mod(x, x, n) + c) % n;
        let (mut y, mut r, mut q) = (2u64, 1u64, 1u64);
        let (mut x, mut ys);
        let mut g;
        const BATCH: u64 = 128;
        loop {
            x = y;
            for _ in 0..r {
                y = f(y);
            }
            let mut k = 0;
            loop {
                ys = y;
                for _ in 0..BATCH.min(r - k) {
                    y = f(y);
                    q = mul_mod(q, x.abs_diff(y), n);
                }
                g = q.gcd(&n);
                k += BATCH;
                if k >= r || g != 1 {
                    break;
                }
            }
            r *= 2;
            if g != 1 {
                break;
            }
        }
        if g == n {
            // Batch overshot; replay one step at a time.
            loop {
                ys = f(ys);
                g = x.abs_diff(ys).gcd(&n);
                if g != 1 {
                    break;
                }
            }
        }
        if g != n {
            return g;
        }
    }
    unreachable!("pollard rho exhausted every constant for {n}")
}

/// Positive divisors of `n`, ascending.
pub fn divisors(n: u64) -> Result<Vec<u64>> {
    Ok(factorize(n)?.divisors())
}

/// Exponent of the prime `p` in `x`; `x` must be nonzero.
pub(crate) fn valuation(p: u64, mut x: u128) -> u32 {
    debug_assert!(x != 0 && p >= 2);
    let p = p as u128;
    let mut v = 0;
    while x.is_multiple_of(p) {
        x /= p;
        v += 1;
    }
    v
}

pub fn euler_phi(n: u64) -> Result<u64> {
    let f = factorize(n).map_err(|_| Error::Domain("euler_phi requires n >= 1".into()))?;
    Ok(phi_of(&f))
}

pub(crate) fn phi_of(f: &Factorization) -> u64 {
    f.factors()
        .iter()
        .fold(1u64, |acc, &(p, e)| acc * p.pow(e - 1) * (p - 1))
}

/// `mu(n)`: 1 for `n = 1`, 0 unless square-free, else `(-1)^(number of primes)`.
pub fn mobius(n: u64) -> Result<i8> {
    let f = factorize(n).map_err(|_| Error::Domain("mobius requires n >= 1".into()))?;
    Ok(mobius_of(&f))
}

pub(crate) fn mobius_of(f: &Factorization) -> i8 {
    if !f.is_square_free() {
        0
    } else if f.factors().len().is_multiple_of(2) {
        1
    } else {
        -1
    }
}

/// Jordan's totient `J_k(n) = n^k prod_{p | n} (1 - p^-k)`, evaluated as
/// `prod p^{k(e-1)} (p^k - 1)`.
pub fn jordan_totient(k: u32, n: u64) -> Result<BigUint> {
    if k == 0 {
        return Err(Error::Domain("jordan_totient requires k >= 1".into()));
    }
    let f = factorize(n).map_err(|_| Error::Domain("jordan_totient requires n >= 1".into()))?;
    let mut acc = BigUint::one();
    for &(p, e) in f.factors() {
        let pk = BigUint::from(p).pow(k);
        acc *= pk.pow(e - 1) * (&pk - 1u32);
    }
    Ok(acc)
}

/// Ramanujan sum `c_n(m)` via `sum_{d | gcd(m, n)} d * mu(n / d)`.
///
/// `m` is reduced into `[0, n)` first; `gcd(0, n) = n`.
pub fn ramanujan_sum(n: u64, m: i64) -> Result<i128> {
    if n == 0 {
        return Err(Error::Domain("ramanujan_sum requires n >= 1".into()));
    }
    let residue = (m as i128).rem_euclid(n as i128) as u64;
    let g = residue.gcd(&n);
    let mut sum = 0i128;
    for d in divisors(g)? {
        let mu = mobius(n / d)?;
        sum += d as i128 * mu as i128;
    }
    Ok(sum)
}

/// gcd of a list; the empty list has gcd 0. Zero entries are rejected.
pub fn gcd_list(values: &[u64]) -> Result<u64> {
    check_positive(values, "gcd_list")?;
    Ok(values.iter().fold(0u64, |acc, v| acc.gcd(v)))
}

/// lcm of a list; the empty list has lcm 1. Zero entries are rejected.
pub fn lcm_list(values: &[u64]) -> Result<u64> {
    check_positive(values, "lcm_list")?;
    values.iter().try_fold(1u64, |acc, &v| {
        (acc / acc.gcd(&v))
            .checked_mul(v)
            .ok_or_else(|| Error::Overflow(format!("lcm of {values:?} exceeds u64")))
    })
}

fn check_positive(values: &[u64], what: &str) -> Result<()> {
    if values.contains(&0) {
        return Err(Error::Domain(format!("{what} requires positive entries")));
    }
    Ok(())
}
