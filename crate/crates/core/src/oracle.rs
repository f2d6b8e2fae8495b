//! Brute-force ground truth.
//!
//! Everything here enumerates directly from definitions and shares no code
//! path with the closed forms it checks: element orders are computed as
//! `d / gcd(x, d)`, generation as a gcd over all images, and the Ramanujan
//! sum as a floating-point exponential sum. Enumeration size is capped by a
//! budget; exceeding it is an error, never a sampled estimate.

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::congruence::CongruenceInstance;
use crate::fuchsian::FuchsianSignature;
use crate::{Error, Result};

pub const DEFAULT_BUDGET: u64 = 100_000_000;

/// Largest residual accepted from [`ramanujan_float`].
pub const RESIDUAL_TOLERANCE: f64 = 1e-6;

const RAMANUJAN_FLOAT_MAX_N: u64 = 10_000;

/// Checks `base^exp <= budget`.
fn check_budget(base: u64, exp: u32, budget: u64) -> Result<()> {
    let needed = BigUint::from(base).pow(exp);
    if needed > BigUint::from(budget) {
        return Err(Error::BudgetExceeded {
            needed: needed.to_string(),
            budget,
        });
    }
    Ok(())
}

/// Calls `visit` on every tuple in `choices[0] x choices[1] x ...`.
fn for_each_tuple(choices: &[Vec<u64>], mut visit: impl FnMut(&[u64])) {
    if choices.iter().any(|c| c.is_empty()) {
        return;
    }
    let k = choices.len();
    let mut idx = vec![0usize; k];
    let mut tuple: Vec<u64> = choices.iter().map(|c| c[0]).collect();
    loop {
        visit(&tuple);
        let mut pos = 0;
        loop {
            if pos == k {
                return;
            }
            idx[pos] += 1;
            if idx[pos] < choices[pos].len() {
                tuple[pos] = choices[pos][idx[pos]];
                break;
            }
            idx[pos] = 0;
            tuple[pos] = choices[pos][0];
            pos += 1;
        }
    }
}

/// For each `b` in `[0, n)`, the number of tuples in `Z_n^k` with
/// `gcd(x_i, n) = t_i` and `sum a_i x_i = b (mod n)`. The right-hand side of
/// `inst` is ignored.
pub fn enumerate_congruence_by_rhs(inst: &CongruenceInstance, budget: u64) -> Result<Vec<u64>> {
    let n = inst.modulus();
    check_budget(n, inst.terms().len() as u32, budget)?;
    let allowed: Vec<Vec<u64>> = inst
        .terms()
        .iter()
        .map(|t| (0..n).filter(|x| x.gcd(&n) == t.gcd_target).collect())
        .collect();
    let coeffs: Vec<u128> = inst
        .terms()
        .iter()
        .map(|t| (t.coefficient as i128).rem_euclid(n as i128) as u128)
        .collect();
    let mut histogram = vec![0u64; n as usize];
    for_each_tuple(&allowed, |x| {
        let sum = x
            .iter()
            .zip(&coeffs)
            .fold(0u128, |acc, (&xi, &a)| (acc + a * xi as u128) % n as u128);
        histogram[sum as usize] += 1;
    });
    Ok(histogram)
}

/// Number of solutions of the instance, by full enumeration.
pub fn enumerate_congruence(inst: &CongruenceInstance, budget: u64) -> Result<u64> {
    let histogram = enumerate_congruence_by_rhs(inst, budget)?;
    Ok(histogram[inst.rhs_residue() as usize])
}

/// The solutions themselves, in lexicographic order of the reversed tuple.
pub fn enumerate_congruence_solutions(
    inst: &CongruenceInstance,
    budget: u64,
) -> Result<Vec<Vec<u64>>> {
    let n = inst.modulus();
    check_budget(n, inst.terms().len() as u32, budget)?;
    let allowed: Vec<Vec<u64>> = inst
        .terms()
        .iter()
        .map(|t| (0..n).filter(|x| x.gcd(&n) == t.gcd_target).collect())
        .collect();
    let b = inst.rhs_residue() as i128;
    let mut out = Vec::new();
    for_each_tuple(&allowed, |x| {
        let sum: i128 = x
            .iter()
            .zip(inst.terms())
            .map(|(&xi, t)| t.coefficient as i128 * xi as i128)
            .sum();
        if sum.rem_euclid(n as i128) == b {
            out.push(x.to_vec());
        }
    });
    Ok(out)
}

/// Images of the elliptic generators in `Z_d`, one per period, each of
/// additive order exactly `n_i`.
fn elliptic_choices(sig: &FuchsianSignature, d: u64) -> Vec<Vec<u64>> {
    sig.periods()
        .iter()
        .map(|&order| (0..d).filter(|&x| d / x.gcd(&d) == order).collect())
        .collect()
}

/// Surface-kernel homomorphisms `Gamma -> Z_d`: elliptic images of the right
/// orders summing to zero, times `d^{2g}` free hyperbolic images.
pub fn brute_hom_s(sig: &FuchsianSignature, d: u64, budget: u64) -> Result<BigUint> {
    if d == 0 {
        return Err(Error::Domain("d must be >= 1".into()));
    }
    check_budget(d, sig.len() as u32, budget)?;
    let mut elliptic = 0u64;
    for_each_tuple(&elliptic_choices(sig, d), |x| {
        if x.iter().fold(0u64, |acc, &xi| (acc + xi) % d) == 0 {
            elliptic += 1;
        }
    });
    Ok(BigUint::from(d).pow(2 * sig.genus()) * elliptic)
}

/// Surface-kernel epimorphisms `Gamma -> Z_n`: every generator tuple that
/// keeps the periods, satisfies the relation, and generates `Z_n`.
pub fn brute_epi_s(sig: &FuchsianSignature, n: u64, budget: u64) -> Result<BigUint> {
    if n == 0 {
        return Err(Error::Domain("n must be >= 1".into()));
    }
    let hyperbolic = 2 * sig.genus();
    check_budget(n, hyperbolic + sig.len() as u32, budget)?;

    let mut valid_elliptic: Vec<u64> = Vec::new();
    for_each_tuple(&elliptic_choices(sig, n), |x| {
        if x.iter().fold(0u64, |acc, &xi| (acc + xi) % n) == 0 {
            valid_elliptic.push(x.iter().fold(n, |acc, xi| acc.gcd(xi)));
        }
    });

    let all_residues: Vec<Vec<u64>> = vec![(0..n).collect(); hyperbolic as usize];
    let mut count = BigUint::zero();
    for g in valid_elliptic {
        let mut hits = 0u64;
        if hyperbolic == 0 {
            hits = u64::from(g == 1);
        } else {
            for_each_tuple(&all_residues, |h| {
                if h.iter().fold(g, |acc, hi| acc.gcd(hi)) == 1 {
                    hits += 1;
                }
            });
        }
        count += hits;
    }
    Ok(count)
}

/// `c_n(m) = sum_{1 <= j <= n, gcd(j, n) = 1} exp(2 pi i j m / n)` in
/// floating point. Returns the nearest integer and the distance to it.
pub fn ramanujan_float(n: u64, m: i64) -> Result<(i64, f64)> {
    if n == 0 || n > RAMANUJAN_FLOAT_MAX_N {
        return Err(Error::Domain(format!(
            "ramanujan_float requires 1 <= n <= {RAMANUJAN_FLOAT_MAX_N}"
        )));
    }
    let (mut re, mut im) = (0.0f64, 0.0f64);
    let m_red = (m as i128).rem_euclid(n as i128) as u64;
    for j in (1..=n).filter(|j| j.gcd(&n) == 1) {
        // reduce j*m mod n before scaling to keep the angle accurate
        let angle = 2.0 * std::f64::consts::PI * ((j * m_red) % n) as f64 / n as f64;
        re += angle.cos();
        im += angle.sin();
    }
    let rounded = re.round();
    let residual = (re - rounded).hypot(im);
    if residual >= RESIDUAL_TOLERANCE {
        return Err(Error::Residual { n, m, residual });
    }
    Ok((rounded as i64, residual))
}

/// `phi(n)` by counting units.
pub fn brute_phi(n: u64) -> u64 {
    (1..=n).filter(|j| j.gcd(&n) == 1).count() as u64
}

/// `J_k(n)` by counting `k`-tuples in `Z_n^k` whose gcd with `n` is 1.
pub fn brute_jordan(k: u32, n: u64, budget: u64) -> Result<u64> {
    check_budget(n, k, budget)?;
    let choices = vec![(0..n).collect::<Vec<u64>>(); k as usize];
    let mut hits = 0u64;
    for_each_tuple(&choices, |x| {
        if x.iter().fold(n, |acc, xi| acc.gcd(xi)) == 1 {
            hits += 1;
        }
    });
    Ok(hits)
}

/// `mu(n)` from its definition by trial division.
pub fn brute_mobius(mut n: u64) -> i8 {
    let mut sign = 1i8;
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            n /= p;
            if n.is_multiple_of(p) {
                return 0;
            }
            sign = -sign;
        }
        p += 1;
    }
    if n > 1 {
        sign = -sign;
    }
    sign
}

/// Whether `gcd(values..., n) = 1`.
pub fn generates(values: &[u64], n: u64) -> bool {
    values.iter().fold(n, |acc, v| acc.gcd(v)).is_one()
}
