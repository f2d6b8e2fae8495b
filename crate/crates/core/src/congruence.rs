//! Counting solutions of restricted linear congruences
//!
//! ```text
//! a_1 x_1 + ... + a_k x_k = b (mod n),   gcd(x_i, n) = t_i,
//! ```
//!
//! by two independent closed forms: an explicit product over the primes of
//! `n` driven by per-prime data `(r_p, m_p, e_p)`, and a divisor sum of
//! products of Ramanujan sums. [`classify_solvability`] names the reason an
//! instance has no solutions.

use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::arith::{self, Factorization};
use crate::{Error, Result};

/// One unknown of the congruence: coefficient `a` and required `gcd(x, n) = t`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Term {
    pub coefficient: i64,
    pub gcd_target: u64,
}

impl Term {
    pub fn new(coefficient: i64, gcd_target: u64) -> Self {
        Term {
            coefficient,
            gcd_target,
        }
    }

    /// `|a * t|` without overflow.
    fn weight(&self) -> u128 {
        self.coefficient.unsigned_abs() as u128 * self.gcd_target as u128
    }
}

/// A validated instance: `n >= 1` and every `t_i` a positive divisor of `n`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CongruenceInstance {
    modulus: u64,
    rhs: i64,
    terms: Vec<Term>,
}

impl CongruenceInstance {
    pub fn new(modulus: u64, rhs: i64, terms: Vec<Term>) -> Result<Self> {
        if modulus == 0 {
            return Err(Error::Domain("modulus must be >= 1".into()));
        }
        for (i, term) in terms.iter().enumerate() {
            if term.gcd_target == 0 || !modulus.is_multiple_of(term.gcd_target) {
                return Err(Error::Constraint(format!(
                    "t_{} = {} does not divide n = {}",
                    i + 1,
                    term.gcd_target,
                    modulus
                )));
            }
        }
        Ok(CongruenceInstance {
            modulus,
            rhs,
            terms,
        })
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn rhs(&self) -> i64 {
        self.rhs
    }

    /// `b mod n` in `[0, n)`.
    pub fn rhs_residue(&self) -> u64 {
        (self.rhs as i128).rem_euclid(self.modulus as i128) as u64
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn all_coefficients_zero(&self) -> bool {
        self.terms.iter().all(|t| t.coefficient == 0)
    }
}

/// Per-prime quantities for a prime `p | n`.
///
/// `m_p` is the least `j >= 1` such that `p^j` fails to divide some `a_i t_i`,
/// and `e_p` counts the terms that `p^{m_p}` fails to divide.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PrimeLocalData {
    pub prime: u64,
    /// Exponent of `p` in `n`.
    pub r: u32,
    pub m: u32,
    pub e: usize,
}

/// The five ways an instance with some `a_i != 0` can have no solutions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum NoSolutionClause {
    /// `m_p <= r_p` and `p^{m_p - 1}` does not divide `b`.
    I,
    /// `m_p > r_p` and `p^{r_p}` does not divide `b`.
    II,
    /// `m_p <= r_p`, `e_p = 1` and `p^{m_p} | b`.
    III,
    /// `p = 2`, `m_2 <= r_2`, `e_2` odd and `2^{m_2} | b`.
    IV,
    /// `p = 2`, `m_2 <= r_2`, `e_2` even and `2^{m_2 - 1}` exactly divides `b`.
    V,
}

impl NoSolutionClause {
    pub fn label(&self) -> &'static str {
        match self {
            NoSolutionClause::I => "i",
            NoSolutionClause::II => "ii",
            NoSolutionClause::III => "iii",
            NoSolutionClause::IV => "iv",
            NoSolutionClause::V => "v",
        }
    }
}

impl fmt::Display for NoSolutionClause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.label())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SolvabilityVerdict {
    /// A positive number of solutions.
    Count(BigUint),
    /// No solutions, for the given clause at the given prime.
    NoSolution {
        clause: NoSolutionClause,
        prime: u64,
    },
    /// Every `a_i` is zero and `b` is not `0 mod n`.
    ZeroCoefficientsInconsistent,
}

impl SolvabilityVerdict {
    /// The number of solutions, zero for the unsolvable verdicts.
    pub fn count(&self) -> BigUint {
        match self {
            SolvabilityVerdict::Count(c) => c.clone(),
            _ => BigUint::zero(),
        }
    }

    pub fn is_solvable(&self) -> bool {
        matches!(self, SolvabilityVerdict::Count(_))
    }
}

/// Solution count when every coefficient is zero (including `k = 0`):
/// `prod phi(n / t_i)` when `b = 0 mod n`, otherwise nothing.
fn zero_coefficient_verdict(inst: &CongruenceInstance) -> Result<SolvabilityVerdict> {
    if inst.rhs_residue() != 0 {
        return Ok(SolvabilityVerdict::ZeroCoefficientsInconsistent);
    }
    let mut count = BigUint::one();
    for term in inst.terms() {
        count *= arith::euler_phi(inst.modulus() / term.gcd_target)?;
    }
    Ok(SolvabilityVerdict::Count(count))
}

pub fn prime_local_data(inst: &CongruenceInstance) -> Result<Vec<PrimeLocalData>> {
    if inst.terms().is_empty() {
        return Err(Error::Domain(
            "prime_local_data needs at least one term".into(),
        ));
    }
    if inst.all_coefficients_zero() {
        return Err(Error::Domain(
            "prime_local_data needs some nonzero coefficient".into(),
        ));
    }
    let f = arith::factorize(inst.modulus())?;
    Ok(local_data(inst, &f))
}

fn local_data(inst: &CongruenceInstance, f: &Factorization) -> Vec<PrimeLocalData> {
    f.factors()
        .iter()
        .map(|&(p, r)| {
            let vals: Vec<u32> = inst
                .terms()
                .iter()
                .filter(|t| t.coefficient != 0)
                .map(|t| arith::valuation(p, t.weight()))
                .collect();
            let min = *vals.iter().min().expect("some nonzero coefficient");
            PrimeLocalData {
                prime: p,
                r,
                m: min + 1,
                e: vals.iter().filter(|&&v| v == min).count(),
            }
        })
        .collect()
}

/// Whether `p^j` divides the residue `b` (with `b = 0` divisible by everything).
fn divides_residue(p: u64, j: u32, b: u64) -> bool {
    b == 0 || arith::valuation(p, b as u128) >= j
}

fn first_clause(data: &[PrimeLocalData], b: u64) -> Option<(NoSolutionClause, u64)> {
    use NoSolutionClause::*;
    for d in data {
        let p = d.prime;
        let clauses = [
            (I, d.m <= d.r && !divides_residue(p, d.m - 1, b)),
            (II, d.m > d.r && !divides_residue(p, d.r, b)),
            (III, d.m <= d.r && d.e == 1 && divides_residue(p, d.m, b)),
            (
                IV,
                p == 2 && d.m <= d.r && d.e % 2 == 1 && divides_residue(p, d.m, b),
            ),
            (
                V,
                p == 2
                    && d.m <= d.r
                    && d.e % 2 == 0
                    && divides_residue(p, d.m - 1, b)
                    && !divides_residue(p, d.m, b),
            ),
        ];
        if let Some(&(clause, _)) = clauses.iter().find(|(_, holds)| *holds) {
            return Some((clause, p));
        }
    }
    None
}

/// `1 - (-1)^j / (p - 1)^j`
fn signed_factor(p: u64, j: usize) -> BigRational {
    let denom = BigInt::from(p - 1).pow(j as u32);
    let numer = if j.is_multiple_of(2) {
        BigInt::one()
    } else {
        -BigInt::one()
    };
    BigRational::one() - BigRational::new(numer, denom)
}

/// `p^exp` as a rational, for possibly negative `exp`.
fn prime_power(p: u64, exp: i64) -> BigRational {
    let base = BigInt::from(p).pow(exp.unsigned_abs() as u32);
    if exp >= 0 {
        BigRational::from_integer(base)
    } else {
        BigRational::new(BigInt::one(), base)
    }
}

pub(crate) fn to_biguint(value: BigRational, context: &'static str) -> Result<BigUint> {
    if !value.is_integer() || value.is_negative() {
        return Err(Error::NonIntegral {
            context,
            detail: format!("value {value} is not a nonnegative integer"),
        });
    }
    Ok(value.to_integer().to_biguint().expect("nonnegative"))
}

/// The explicit prime-product count, assuming no vanishing condition fired.
fn explicit_product(
    inst: &CongruenceInstance,
    data: &[PrimeLocalData],
    b: u64,
) -> Result<BigRational> {
    let mut value = BigRational::one();
    for term in inst.terms() {
        value *= BigInt::from(arith::euler_phi(inst.modulus() / term.gcd_target)?);
    }
    for d in data.iter().filter(|d| d.m <= d.r) {
        let scale = prime_power(d.prime, d.m as i64 - d.r as i64 - 1);
        if divides_residue(d.prime, d.m, b) {
            value *= scale * signed_factor(d.prime, d.e - 1);
        } else if divides_residue(d.prime, d.m - 1, b) {
            value *= scale * signed_factor(d.prime, d.e);
        }
    }
    Ok(value)
}

/// Counts solutions with the explicit prime-product formula.
///
/// A zero count is always reported as the [`SolvabilityVerdict::NoSolution`]
/// clause responsible for it.
pub fn count_explicit(inst: &CongruenceInstance) -> Result<SolvabilityVerdict> {
    if inst.all_coefficients_zero() {
        return zero_coefficient_verdict(inst);
    }
    let f = arith::factorize(inst.modulus())?;
    let data = local_data(inst, &f);
    let b = inst.rhs_residue();

    let vanishes = data.iter().any(|d| {
        (d.m <= d.r && !divides_residue(d.prime, d.m - 1, b))
            || (d.m > d.r && !divides_residue(d.prime, d.r, b))
    });
    let count = if vanishes {
        BigUint::zero()
    } else {
        to_biguint(
            explicit_product(inst, &data, b)?,
            "explicit congruence count",
        )?
    };
    if !count.is_zero() {
        return Ok(SolvabilityVerdict::Count(count));
    }
    match first_clause(&data, b) {
        Some((clause, prime)) => Ok(SolvabilityVerdict::NoSolution { clause, prime }),
        None => Err(Error::Inconsistent {
            context: "count_explicit",
            detail: format!("zero count but no unsolvability clause holds for {inst:?}"),
        }),
    }
}

/// Names the first unsolvability clause that holds (smallest prime first, then
/// lowest clause number), or returns the positive count.
pub fn classify_solvability(inst: &CongruenceInstance) -> Result<SolvabilityVerdict> {
    let data = prime_local_data(inst)?;
    let b = inst.rhs_residue();
    if let Some((clause, prime)) = first_clause(&data, b) {
        return Ok(SolvabilityVerdict::NoSolution { clause, prime });
    }
    let count = to_biguint(explicit_product(inst, &data, b)?, "classify_solvability")?;
    if count.is_zero() {
        return Err(Error::Inconsistent {
            context: "classify_solvability",
            detail: format!("no clause holds but the count vanishes for {inst:?}"),
        });
    }
    Ok(SolvabilityVerdict::Count(count))
}

fn exact_div(numer: &BigInt, denom: &BigInt, context: &'static str) -> Result<BigInt> {
    let (q, r) = numer.div_rem(denom);
    if !r.is_zero() {
        return Err(Error::NonIntegral {
            context,
            detail: format!("{numer} / {denom} leaves remainder {r}"),
        });
    }
    Ok(q)
}

/// Counts solutions as a divisor sum of products of Ramanujan sums,
///
/// ```text
/// N = (1/n) prod_i phi(n/t_i) / phi(n/(t_i d_i)) * sum_{d | n} c_d(b) prod_i c_{n/(t_i d_i)}(n/d)
/// ```
///
/// with `d_i = gcd(a_i, n/t_i)`. The equivalent Möbius/totient form is
/// evaluated alongside and the two must agree.
pub fn count_ramanujan(inst: &CongruenceInstance) -> Result<BigUint> {
    if inst.terms().is_empty() {
        return Err(Error::Domain(
            "count_ramanujan needs at least one term".into(),
        ));
    }
    let n = inst.modulus();
    let b = inst.rhs_residue() as i64;
    let divisors = arith::divisors(n)?;

    // n / (t_i d_i) for every term
    let reduced: Vec<u64> = inst
        .terms()
        .iter()
        .map(|t| {
            let m = n / t.gcd_target;
            m / t.coefficient.unsigned_abs().gcd(&m)
        })
        .collect();

    let mut sum = BigInt::zero();
    for &d in &divisors {
        let mut prod = BigInt::from(arith::ramanujan_sum(d, b)?);
        for &m in &reduced {
            if prod.is_zero() {
                break;
            }
            prod *= arith::ramanujan_sum(m, (n / d) as i64)?;
        }
        sum += prod;
    }

    let mut scale = BigInt::one();
    for (term, &m) in inst.terms().iter().zip(&reduced) {
        let full = BigInt::from(arith::euler_phi(n / term.gcd_target)?);
        let part = BigInt::from(arith::euler_phi(m)?);
        scale *= exact_div(&full, &part, "totient ratio in count_ramanujan")?;
    }
    let count = exact_div(
        &(scale * sum),
        &BigInt::from(n),
        "division by n in count_ramanujan",
    )?;
    if count.is_negative() {
        return Err(Error::NonIntegral {
            context: "count_ramanujan",
            detail: format!("negative count {count}"),
        });
    }
    let count = count.to_biguint().expect("nonnegative");

    let mobius_form = count_ramanujan_mobius(inst, &divisors)?;
    if mobius_form != count {
        return Err(Error::Inconsistent {
            context: "count_ramanujan",
            detail: format!("Ramanujan form {count} != Möbius form {mobius_form} for {inst:?}"),
        });
    }
    Ok(count)
}

/// `(1/n) prod_i phi(n/t_i) * sum_{d | n} c_d(b) prod_i mu(d/g_i) / phi(d/g_i)`
/// with `g_i = gcd(a_i t_i, d)`.
fn count_ramanujan_mobius(inst: &CongruenceInstance, divisors: &[u64]) -> Result<BigUint> {
    let n = inst.modulus();
    let b = inst.rhs_residue() as i64;
    let mut sum = BigRational::zero();
    for &d in divisors {
        let mut term = BigRational::from_integer(BigInt::from(arith::ramanujan_sum(d, b)?));
        for t in inst.terms() {
            if term.is_zero() {
                break;
            }
            let g = (t.weight() % d as u128) as u64;
            let q = d / g.gcd(&d);
            let mu = arith::mobius(q)?;
            let phi = arith::euler_phi(q)?;
            term *= BigRational::new(BigInt::from(mu), BigInt::from(phi));
        }
        sum += term;
    }
    for t in inst.terms() {
        sum *= BigInt::from(arith::euler_phi(n / t.gcd_target)?);
    }
    sum /= BigInt::from(n);
    to_biguint(sum, "Möbius form of count_ramanujan")
}

/// Solutions of `x_1 + ... + x_k = b (mod n)` with every `x_i` a unit:
///
/// ```text
/// phi(n)^k / n * prod_{p | n, p | b} (1 - (-1)^{k-1}/(p-1)^{k-1})
///              * prod_{p | n, p !| b} (1 - (-1)^k/(p-1)^k)
/// ```
pub fn count_rademacher_brauer(n: u64, b: i64, k: u32) -> Result<BigUint> {
    if n == 0 || k == 0 {
        return Err(Error::Domain(
            "count_rademacher_brauer requires n >= 1 and k >= 1".into(),
        ));
    }
    let f = arith::factorize(n)?;
    let residue = (b as i128).rem_euclid(n as i128) as u64;
    let phi = BigInt::from(arith::phi_of(&f));
    let mut value = BigRational::new(phi.pow(k), BigInt::from(n));
    for p in f.primes() {
        value *= if residue.is_multiple_of(p) {
            signed_factor(p, k as usize - 1)
        } else {
            signed_factor(p, k as usize)
        };
    }
    to_biguint(value, "count_rademacher_brauer")
}

/// `N_d = (1/d) sum_{q=1}^{d} prod_i c_{n_i}(q)`: the number of
/// `x_1 + ... + x_k = 0 (mod d)` with `gcd(x_i, d) = d / n_i`.
pub fn count_via_period_sum(periods: &[u64], d: u64) -> Result<BigUint> {
    if d == 0 {
        return Err(Error::Domain("count_via_period_sum requires d >= 1".into()));
    }
    if let Some(&bad) = periods.iter().find(|&&p| p == 0 || !d.is_multiple_of(p)) {
        return Err(Error::Constraint(format!(
            "period {bad} does not divide d = {d}"
        )));
    }
    let d_signed = i64::try_from(d).map_err(|_| Error::Overflow(format!("d = {d} exceeds i64")))?;
    let mut sum = BigInt::zero();
    for q in 1..=d_signed {
        let mut prod = BigInt::one();
        for &p in periods {
            prod *= arith::ramanujan_sum(p, q)?;
            if prod.is_zero() {
                break;
            }
        }
        sum += prod;
    }
    let count = exact_div(&sum, &BigInt::from(d), "count_via_period_sum")?;
    count.to_biguint().ok_or_else(|| Error::NonIntegral {
        context: "count_via_period_sum",
        detail: format!("negative count {count}"),
    })
}
