//! Integer and floating-point primitives shared by every other module.

mod arith;
mod sieve;
mod summation;

pub use arith::{factorize, gcd, lcm, mod_mul, mod_pow, primitive_root, totient, Factorization};
pub use sieve::{sieve_primes, sum_reciprocal_primes, PrimeTable, MAX_SIEVE_LIMIT, SEGMENTED_THRESHOLD};
pub use summation::{compensated_sum, compensated_sum_real, ComplexSum, Compensated, NeumaierSum};
