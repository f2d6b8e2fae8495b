#![no_main]

//! Closed-form counts agree with Möbius inversion of the homomorphism
//! counts and with the congruence route, on small inputs.

use fuchsian_core::congruence::{count_explicit, count_ramanujan, CongruenceInstance, Term};
use fuchsian_core::fuchsian::{count_epi_s, epi_from_hom_inversion, FuchsianSignature};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if data.len() < 3 {
        return;
    }
    let genus = u32::from(data[0] % 4);
    let n = u64::from(data[1]) + 1;
    let periods: Vec<u64> = data[2..]
        .iter()
        .take(6)
        .map(|&b| u64::from(b % 30) + 2)
        .collect();
    let sig = FuchsianSignature::new(genus, periods.clone()).unwrap();
    assert_eq!(
        count_epi_s(&sig, n).unwrap(),
        epi_from_hom_inversion(&sig, n).unwrap()
    );

    let terms: Vec<Term> = data[2..]
        .iter()
        .take(6)
        .map(|&b| {
            let divisor = (1..=n)
                .rev()
                .find(|t| n % t == 0 && *t <= u64::from(b) + 1)
                .unwrap();
            Term::new(i64::from(b as i8), divisor)
        })
        .collect();
    let inst = CongruenceInstance::new(n, i64::from(data[0]), terms).unwrap();
    let explicit = count_explicit(&inst).unwrap().count();
    if !inst.terms().is_empty() && !inst.all_coefficients_zero() {
        assert_eq!(explicit, count_ramanujan(&inst).unwrap());
    }
});
