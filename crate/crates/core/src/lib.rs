//! Exact counting of surface-kernel homomorphisms and epimorphisms from a
//! co-compact Fuchsian group onto a cyclic group `Z_n`.
//!
//! The crate is layered bottom-up:
//!
//! - [`arith`]: factorization, Euler and Jordan totients, Möbius function,
//!   Ramanujan sums, all in exact integer arithmetic.
//! - [`congruence`]: solution counts for restricted linear congruences
//!   `a_1 x_1 + ... + a_k x_k = b (mod n)` with `gcd(x_i, n) = t_i`, by an
//!   explicit prime-product formula and by a Ramanujan-sum formula, plus the
//!   classification of unsolvable instances.
//! - [`fuchsian`]: signatures `(g; n_1, ..., n_k)`, Harvey's admissibility
//!   conditions and the `e_p` form of them, and the closed-form counts.
//! - [`oracle`]: brute-force enumerations used to validate everything above.
//! - [`parse`]: text formats for signatures, period lists and congruence terms.
//!
//! Counts are returned as [`num_bigint::BigUint`]; no intermediate value is
//! ever held in a fixed-width type that could overflow.

pub mod arith;
pub mod congruence;
mod error;
pub mod fuchsian;
pub mod oracle;
pub mod parse;

pub use error::{Error, ParseError, Result};
