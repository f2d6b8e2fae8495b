//! Co-compact Fuchsian signatures and counts of surface-kernel maps onto
//! cyclic groups.
//!
//! For a signature `(g; n_1, ..., n_k)` with `L = lcm(n_i)`, a homomorphism
//! to `Z_d` is surface-kernel when every elliptic generator keeps its order.
//! The counts here are closed forms in `L`, `phi(n_i)` and, for each prime
//! `p | L`, the number `e_p` of periods carrying the full power of `p`.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::arith;
use crate::congruence::to_biguint;
use crate::{Error, Result};

/// `(g; n_1, ..., n_k)` with periods stored sorted ascending.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FuchsianSignature {
    genus: u32,
    periods: Vec<u64>,
    period_lcm: u64,
}

impl FuchsianSignature {
    /// Validates `n_i >= 2` and that the lcm fits in a `u64`. The periods are
    /// sorted; their order carries no information.
    pub fn new(genus: u32, mut periods: Vec<u64>) -> Result<Self> {
        if let Some(&bad) = periods.iter().find(|&&p| p < 2) {
            return Err(Error::Domain(format!("period {bad} is below 2")));
        }
        periods.sort_unstable();
        let period_lcm = arith::lcm_list(&periods)?;
        Ok(FuchsianSignature {
            genus,
            periods,
            period_lcm,
        })
    }

    pub fn genus(&self) -> u32 {
        self.genus
    }

    pub fn periods(&self) -> &[u64] {
        &self.periods
    }

    /// Number of periods `k`.
    pub fn len(&self) -> usize {
        self.periods.len()
    }

    pub fn is_empty(&self) -> bool {
        self.periods.is_empty()
    }

    /// `lcm(n_1, ..., n_k)`, or 1 for a signature without periods.
    pub fn period_lcm(&self) -> u64 {
        self.period_lcm
    }

    /// `2g - 2 + sum (1 - 1/n_i) > 0`, i.e. the signature is realised by a
    /// genuine co-compact Fuchsian group.
    pub fn is_hyperbolic(&self) -> bool {
        self.orbifold_area().is_positive()
    }

    /// `2g - 2 + sum (1 - 1/n_i)`, the area up to a factor `2 pi`.
    pub fn orbifold_area(&self) -> BigRational {
        let mut area = BigRational::from_integer(BigInt::from(2 * self.genus as i64 - 2));
        for &n in &self.periods {
            area += BigRational::one() - BigRational::new(BigInt::one(), BigInt::from(n));
        }
        area
    }
}

impl fmt::Display for FuchsianSignature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({};", self.genus)?;
        for (i, p) in self.periods.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{p}")?;
        }
        f.write_str(")")
    }
}

/// `e_p = #{i : p does not divide L / n_i}` for every prime `p | L`.
/// Empty when there are no periods.
pub fn e_p_table(sig: &FuchsianSignature) -> Result<BTreeMap<u64, usize>> {
    let lcm = sig.period_lcm();
    let f = arith::factorize(lcm)?;
    Ok(f.primes()
        .map(|p| {
            let e = sig
                .periods()
                .iter()
                .filter(|&&n| !(lcm / n).is_multiple_of(p))
                .count();
            (p, e)
        })
        .collect())
}

/// Conditions of Harvey's theorem for a surface-kernel epimorphism onto `Z_n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum HarveyCondition {
    /// Deleting any one period leaves the lcm unchanged.
    LcmStable,
    /// `L | n`, and `L = n` when `g = 0`.
    Divides,
    /// `k != 1`, and `k > 2` when `g = 0`.
    PeriodCount,
    /// When `L` is even, the number of `n_i` with `L / n_i` odd is even.
    Parity,
}

/// Conditions of the `e_p` form of Harvey's theorem.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum EpCondition {
    /// `L | n`, and `L = n` when `g = 0`.
    Divides,
    /// `e_p > 1` for every prime `p | L`.
    EpAboveOne,
    /// `e_2` even when `L` is even.
    EvenE2,
}

impl HarveyCondition {
    pub fn label(&self) -> &'static str {
        match self {
            HarveyCondition::LcmStable => "i",
            HarveyCondition::Divides => "ii",
            HarveyCondition::PeriodCount => "iii",
            HarveyCondition::Parity => "iv",
        }
    }
}

impl EpCondition {
    pub fn label(&self) -> &'static str {
        match self {
            EpCondition::Divides => "i",
            EpCondition::EpAboveOne => "ii",
            EpCondition::EvenE2 => "iii",
        }
    }
}

/// Which set of conditions decides [`AdmissibilityReport::admissible`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Criterion {
    Harvey,
    EpForm,
}

/// Both condition sets evaluated on one `(signature, n)` pair. The
/// `admissible` flag follows the set named by `criterion`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AdmissibilityReport {
    pub criterion: Criterion,
    pub admissible: bool,
    pub harvey_failures: Vec<HarveyCondition>,
    pub ep_failures: Vec<EpCondition>,
    pub e_p: BTreeMap<u64, usize>,
    pub hyperbolic: bool,
}

impl AdmissibilityReport {
    pub fn harvey_admissible(&self) -> bool {
        self.harvey_failures.is_empty()
    }

    pub fn ep_admissible(&self) -> bool {
        self.ep_failures.is_empty()
    }
}

fn divides_condition(sig: &FuchsianSignature, n: u64) -> bool {
    let lcm = sig.period_lcm();
    n.is_multiple_of(lcm) && (sig.genus() > 0 || lcm == n)
}

fn harvey_failures(sig: &FuchsianSignature, n: u64) -> Result<Vec<HarveyCondition>> {
    let lcm = sig.period_lcm();
    let periods = sig.periods();
    let k = periods.len();
    let mut failed = Vec::new();

    let mut rest = Vec::with_capacity(k.saturating_sub(1));
    let mut lcm_stable = true;
    for i in 0..k {
        rest.clear();
        rest.extend(
            periods
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != i)
                .map(|(_, &p)| p),
        );
        if arith::lcm_list(&rest)? != lcm {
            lcm_stable = false;
            break;
        }
    }
    if !lcm_stable {
        failed.push(HarveyCondition::LcmStable);
    }
    if !divides_condition(sig, n) {
        failed.push(HarveyCondition::Divides);
    }
    if k == 1 || (sig.genus() == 0 && k <= 2) {
        failed.push(HarveyCondition::PeriodCount);
    }
    if lcm.is_multiple_of(2) {
        let odd = periods.iter().filter(|&&p| (lcm / p) % 2 == 1).count();
        if odd % 2 == 1 {
            failed.push(HarveyCondition::Parity);
        }
    }
    Ok(failed)
}

fn ep_failures(sig: &FuchsianSignature, n: u64, e_p: &BTreeMap<u64, usize>) -> Vec<EpCondition> {
    let mut failed = Vec::new();
    if !divides_condition(sig, n) {
        failed.push(EpCondition::Divides);
    }
    if e_p.values().any(|&e| e <= 1) {
        failed.push(EpCondition::EpAboveOne);
    }
    if e_p.get(&2).is_some_and(|e| e % 2 == 1) {
        failed.push(EpCondition::EvenE2);
    }
    failed
}

fn report(sig: &FuchsianSignature, n: u64, criterion: Criterion) -> Result<AdmissibilityReport> {
    if n == 0 {
        return Err(Error::Domain("target order n must be >= 1".into()));
    }
    let e_p = e_p_table(sig)?;
    let harvey_failures = harvey_failures(sig, n)?;
    let ep_failures = ep_failures(sig, n, &e_p);
    let admissible = match criterion {
        Criterion::Harvey => harvey_failures.is_empty(),
        Criterion::EpForm => ep_failures.is_empty(),
    };
    Ok(AdmissibilityReport {
        criterion,
        admissible,
        harvey_failures,
        ep_failures,
        e_p,
        hyperbolic: sig.is_hyperbolic(),
    })
}

/// Harvey's four conditions for a surface-kernel epimorphism onto `Z_n`.
pub fn harvey_admissible(sig: &FuchsianSignature, n: u64) -> Result<AdmissibilityReport> {
    report(sig, n, Criterion::Harvey)
}

/// The equivalent three conditions phrased through `e_p`. These agree with
/// [`harvey_admissible`] on hyperbolic signatures only; `(0; m, m)` passes
/// here and fails Harvey's period-count condition.
pub fn ep_form_admissible(sig: &FuchsianSignature, n: u64) -> Result<AdmissibilityReport> {
    report(sig, n, Criterion::EpForm)
}

/// `prod_{p | L} (1 - (-1)^{e_p - 1} / (p - 1)^{e_p - 1})`
fn ep_product(e_p: &BTreeMap<u64, usize>) -> BigRational {
    let mut acc = BigRational::one();
    for (&p, &e) in e_p {
        let j = (e - 1) as u32;
        let sign = if j.is_multiple_of(2) {
            BigInt::one()
        } else {
            -BigInt::one()
        };
        acc *= BigRational::one() - BigRational::new(sign, BigInt::from(p - 1).pow(j));
    }
    acc
}

fn phi_product(sig: &FuchsianSignature) -> Result<BigInt> {
    let mut acc = BigInt::one();
    for &n in sig.periods() {
        acc *= arith::euler_phi(n)?;
    }
    Ok(acc)
}

/// Surface-kernel homomorphisms `Gamma -> Z_d`:
/// `d^{2g} / L * prod phi(n_i) * prod_{p | L} (1 - (-1)^{e_p-1}/(p-1)^{e_p-1})`
/// when `L | d`, and 0 otherwise.
pub fn count_hom_s(sig: &FuchsianSignature, d: u64) -> Result<BigUint> {
    if d == 0 {
        return Err(Error::Domain("d must be >= 1".into()));
    }
    let lcm = sig.period_lcm();
    if !d.is_multiple_of(lcm) {
        return Ok(BigUint::zero());
    }
    let e_p = e_p_table(sig)?;
    let mut value = BigRational::new(
        BigInt::from(d).pow(2 * sig.genus()) * phi_product(sig)?,
        BigInt::from(lcm),
    );
    value *= ep_product(&e_p);
    to_biguint(value, "count_hom_s")
}

/// Surface-kernel epimorphisms `Gamma -> Z_n`:
///
/// ```text
/// n^{2g} / L * prod phi(n_i) * prod_{p | n/L} (1 - p^{-2g})
///            * prod_{p | L} (1 - (-1)^{e_p-1}/(p-1)^{e_p-1})
/// ```
///
/// and 0 when `L` does not divide `n`.
pub fn count_epi_s(sig: &FuchsianSignature, n: u64) -> Result<BigUint> {
    if n == 0 {
        return Err(Error::Domain("n must be >= 1".into()));
    }
    let lcm = sig.period_lcm();
    if !n.is_multiple_of(lcm) {
        return Ok(BigUint::zero());
    }
    let e_p = e_p_table(sig)?;
    let mut value = BigRational::new(
        BigInt::from(n).pow(2 * sig.genus()) * phi_product(sig)?,
        BigInt::from(lcm),
    );
    value *= cofactor_product(n / lcm, sig.genus())?;
    value *= ep_product(&e_p);
    to_biguint(value, "count_epi_s")
}

/// `prod_{p | m} (1 - 1/p^{2g})`; vanishes for `g = 0` unless `m = 1`.
fn cofactor_product(m: u64, genus: u32) -> Result<BigRational> {
    let mut acc = BigRational::one();
    for p in arith::factorize(m)?.primes() {
        acc *= BigRational::one() - BigRational::new(BigInt::one(), BigInt::from(p).pow(2 * genus));
    }
    Ok(acc)
}

/// The same count for `k` equal periods `L`, where every `e_p = k`.
pub fn count_epi_s_equal_periods(genus: u32, k: u32, lcm: u64, n: u64) -> Result<BigUint> {
    if lcm < 2 || k == 0 {
        return Err(Error::Domain(
            "equal-period count needs L >= 2 and k >= 1".into(),
        ));
    }
    if n == 0 {
        return Err(Error::Domain("n must be >= 1".into()));
    }
    if !n.is_multiple_of(lcm) {
        return Ok(BigUint::zero());
    }
    let phi = BigInt::from(arith::euler_phi(lcm)?);
    let mut value = BigRational::new(
        BigInt::from(n).pow(2 * genus) * phi.pow(k),
        BigInt::from(lcm),
    );
    value *= cofactor_product(n / lcm, genus)?;
    let j = k - 1;
    for p in arith::factorize(lcm)?.primes() {
        let sign = if j.is_multiple_of(2) {
            BigInt::one()
        } else {
            -BigInt::one()
        };
        value *= BigRational::one() - BigRational::new(sign, BigInt::from(p - 1).pow(j));
    }
    to_biguint(value, "count_epi_s_equal_periods")
}

/// `sum_{d | n} mu(n/d) |Hom_S(Gamma, Z_d)|`, summing only over `d = v L`
/// since the other terms vanish.
pub fn epi_from_hom_inversion(sig: &FuchsianSignature, n: u64) -> Result<BigUint> {
    if n == 0 {
        return Err(Error::Domain("n must be >= 1".into()));
    }
    let lcm = sig.period_lcm();
    if !n.is_multiple_of(lcm) {
        return Ok(BigUint::zero());
    }
    let quotient = n / lcm;
    let mut total = BigInt::zero();
    for v in arith::divisors(quotient)? {
        let mu = arith::mobius(quotient / v)?;
        if mu == 0 {
            continue;
        }
        let hom = BigInt::from(count_hom_s(sig, v * lcm)?);
        total += hom * mu;
    }
    total.to_biguint().ok_or_else(|| Error::NonIntegral {
        context: "epi_from_hom_inversion",
        detail: format!("negative inversion sum {total}"),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::congruence::{count_explicit, CongruenceInstance, Term};

    fn sig(g: u32, periods: &[u64]) -> FuchsianSignature {
        FuchsianSignature::new(g, periods.to_vec()).unwrap()
    }

    #[test]
    fn signature_validation() {
        assert!(matches!(
            FuchsianSignature::new(1, vec![2, 1]),
            Err(Error::Domain(_))
        ));
        let s = sig(2, &[36, 500, 125, 9]);
        assert_eq!(s.periods(), &[9, 36, 125, 500]);
        assert_eq!(s.period_lcm(), 4500);
        assert_eq!(s.to_string(), "(2;9,36,125,500)");
        assert_eq!(sig(1, &[]).period_lcm(), 1);
        assert_eq!(sig(1, &[]).to_string(), "(1;)");
        assert_eq!(arith::lcm_list(s.periods()).unwrap(), s.period_lcm());
    }

    #[test]
    fn hyperbolicity() {
        assert!(sig(1, &[2, 3, 4]).is_hyperbolic());
        assert!(sig(0, &[2, 3, 7]).is_hyperbolic());
        assert!(!sig(0, &[2, 3, 6]).is_hyperbolic());
        assert!(!sig(0, &[5, 5]).is_hyperbolic());
        assert!(!sig(1, &[]).is_hyperbolic());
        assert!(sig(2, &[]).is_hyperbolic());
    }

    #[test]
    fn e_p_examples() {
        let t = e_p_table(&sig(2, &[36, 500, 125, 9])).unwrap();
        assert_eq!(t, BTreeMap::from([(2, 2), (3, 2), (5, 2)]));
        // L = 12: 12/2 = 6, 12/3 = 4, 12/4 = 3; only 4 escapes 2, only 3 escapes 3
        let t = e_p_table(&sig(1, &[2, 3, 4])).unwrap();
        assert_eq!(t, BTreeMap::from([(2, 1), (3, 1)]));
        let t = e_p_table(&sig(3, &[30; 5])).unwrap();
        assert_eq!(t, BTreeMap::from([(2, 5), (3, 5), (5, 5)]));
        assert!(e_p_table(&sig(1, &[])).unwrap().is_empty());
    }

    #[test]
    fn admissibility_examples() {
        let r = harvey_admissible(&sig(0, &[36, 500, 125, 9]), 9000).unwrap();
        assert!(!r.admissible);
        assert_eq!(r.harvey_failures, vec![HarveyCondition::Divides]);

        let r = harvey_admissible(&sig(1, &[2, 3, 4]), 24).unwrap();
        assert!(!r.admissible);
        assert!(r.harvey_failures.contains(&HarveyCondition::LcmStable));

        assert!(
            harvey_admissible(&sig(2, &[36, 500, 125, 9]), 9000)
                .unwrap()
                .admissible
        );

        let r = ep_form_admissible(&sig(1, &[2, 3, 4]), 24).unwrap();
        assert!(!r.admissible);
        assert!(r.ep_failures.contains(&EpCondition::EpAboveOne));

        let r = ep_form_admissible(&sig(2, &[36, 500, 125, 9]), 9000).unwrap();
        assert!(r.admissible);

        for m in 2..12 {
            let s = sig(0, &[m, m]);
            let ep = ep_form_admissible(&s, m).unwrap();
            assert!(ep.admissible && !ep.hyperbolic);
            assert!(!ep.harvey_admissible());
            assert_eq!(ep.harvey_failures, vec![HarveyCondition::PeriodCount]);
        }
    }

    #[test]
    fn hom_examples() {
        assert_eq!(count_hom_s(&sig(0, &[2, 2]), 2).unwrap(), BigUint::one());
        assert_eq!(count_hom_s(&sig(1, &[3, 5]), 1).unwrap(), BigUint::zero());
        assert_eq!(count_hom_s(&sig(2, &[]), 1).unwrap(), BigUint::one());
        // (4500^4 / 4500) * 1440000 * 15/4
        let expected = BigUint::from(4500u32).pow(3) * 1_440_000u32 * 15u32 / 4u32;
        assert_eq!(
            count_hom_s(&sig(2, &[36, 500, 125, 9]), 4500).unwrap(),
            expected
        );
    }

    #[test]
    fn hom_matches_congruence_count() {
        for g in 0..=2 {
            for periods in [&[2u64, 2][..], &[2, 3, 6], &[4, 4, 2], &[6, 10, 15], &[3]] {
                let s = sig(g, periods);
                for d in 1..=60u64 {
                    let terms = if d % s.period_lcm() == 0 {
                        periods.iter().map(|&p| Term::new(1, d / p)).collect()
                    } else {
                        continue;
                    };
                    let inst = CongruenceInstance::new(d, 0, terms).unwrap();
                    let expected =
                        BigUint::from(d).pow(2 * g) * count_explicit(&inst).unwrap().count();
                    assert_eq!(count_hom_s(&s, d).unwrap(), expected, "{s} d={d}");
                }
            }
        }
    }

    #[test]
    fn epi_examples() {
        assert!(count_epi_s(&sig(1, &[2, 3, 4]), 24).unwrap().is_zero());
        assert_eq!(
            count_epi_s(&sig(2, &[36, 500, 125, 9]), 9000)
                .unwrap()
                .to_string(),
            "7381125000000000000"
        );
        assert!(count_epi_s(&sig(0, &[36, 500, 125, 9]), 9000)
            .unwrap()
            .is_zero());
        assert_eq!(
            count_epi_s(&sig(0, &[2, 2, 2, 2]), 2).unwrap(),
            BigUint::one()
        );
        for n in 1..=100 {
            assert_eq!(
                count_epi_s(&sig(1, &[]), n).unwrap(),
                arith::jordan_totient(2, n).unwrap()
            );
        }
        assert_eq!(count_epi_s(&sig(0, &[]), 1).unwrap(), BigUint::one());
    }

    #[test]
    fn equal_periods_examples() {
        assert_eq!(
            count_epi_s_equal_periods(0, 4, 2, 2).unwrap(),
            BigUint::one()
        );
        assert!(count_epi_s_equal_periods(1, 3, 5, 12).unwrap().is_zero());
        for g in 0..=2 {
            for k in 1..=4u32 {
                for lcm in 2..=8u64 {
                    let s = sig(g, &vec![lcm; k as usize]);
                    for n in 1..=32 {
                        assert_eq!(
                            count_epi_s_equal_periods(g, k, lcm, n).unwrap(),
                            count_epi_s(&s, n).unwrap(),
                            "{s} n={n}"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn inversion_examples() {
        assert!(epi_from_hom_inversion(&sig(1, &[2, 3, 4]), 24)
            .unwrap()
            .is_zero());
        assert_eq!(
            epi_from_hom_inversion(&sig(0, &[]), 1).unwrap(),
            BigUint::one()
        );
        assert_eq!(
            epi_from_hom_inversion(&sig(2, &[36, 500, 125, 9]), 9000).unwrap(),
            count_epi_s(&sig(2, &[36, 500, 125, 9]), 9000).unwrap()
        );
    }

    #[test]
    fn vanishing_when_lcm_misses_n() {
        let s = sig(2, &[4, 6, 6]);
        for n in (1..=60).filter(|n| n % 12 != 0) {
            assert!(count_epi_s(&s, n).unwrap().is_zero());
            for d in arith::divisors(n).unwrap() {
                assert!(count_hom_s(&s, d).unwrap().is_zero());
            }
        }
        // genus 0 with n a proper multiple of L
        let s = sig(0, &[3, 3, 3]);
        assert!(count_epi_s(&s, 3).unwrap() > BigUint::zero());
        for n in [6, 9, 12, 30] {
            assert!(count_epi_s(&s, n).unwrap().is_zero());
        }
    }
}
