use super::rectangle::{rectangle_max_with, RectangleForm, RectangleMaxWitness, ScanOptions};
use super::{CoefficientVector, SumSpec};
use crate::characters::Character;
use crate::error::Result;
use crate::number_core::PrimeTable;
use serde::Serialize;

/// Bound on `M_rect / M_1` asserted by [`abel_reduction_check`].
pub const ABEL_RATIO_BOUND: f64 = 2.0;
pub const ABEL_TOLERANCE: f64 = 1e-6;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AbelReport {
    /// Maximum over `y` and `t` at `σ = 1`.
    pub m1: f64,
    /// Maximum over the full `(σ, t)` rectangle.
    pub m_rect: f64,
    pub ratio: f64,
    pub bound: f64,
    pub passed: bool,
    pub sigma_one: RectangleMaxWitness,
    pub rectangle: RectangleMaxWitness,
}

/// Compares the `σ = 1` maximum with the full rectangle maximum.
///
/// With weights `p^{1-σ}` non-increasing in `p`, partial summation against
/// the `σ = 1` prefix sums bounds every `σ > 1` value by the `σ = 1`
/// maximum at the same `t`, so the observed ratio should sit at 1.
pub fn abel_reduction_check(
    chi: &Character,
    a: &CoefficientVector,
    spec: &SumSpec,
    table: &PrimeTable,
) -> Result<AbelReport> {
    let opts = ScanOptions::default();
    let sigma_one = rectangle_max_with(
        chi,
        a,
        spec,
        table,
        RectangleForm::Full,
        &ScanOptions { sigma_one_only: true, ..opts.clone() },
    )?;
    let rectangle = rectangle_max_with(chi, a, spec, table, RectangleForm::Full, &opts)?;
    let (m1, m_rect) = (sigma_one.value, rectangle.value);
    let ratio = if m1 > 0.0 { m_rect / m1 } else { 1.0 };
    Ok(AbelReport {
        m1,
        m_rect,
        ratio,
        bound: ABEL_RATIO_BOUND,
        passed: m_rect <= ABEL_RATIO_BOUND * m1 + ABEL_TOLERANCE,
        sigma_one,
        rectangle,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::characters::character_group;
    use crate::number_core::sieve_primes;
    use num_complex::Complex64;
    use rand::SeedableRng;

    #[test]
    fn single_prime_ratio_is_one() {
        let table = sieve_primes(10_000).unwrap();
        let spec = SumSpec::new(5, 10_000, 1.0).unwrap();
        let a = CoefficientVector::from_pairs(&table, 5, 10_000, &[(7919, Complex64::new(0.0, 2.0))]).unwrap();
        let chi = &character_group(5).unwrap()[1];
        let r = abel_reduction_check(chi, &a, &spec, &table).unwrap();
        assert_eq!(r.ratio, 1.0);
        assert!(r.passed);
    }

    #[test]
    fn random_coefficients_within_bound() {
        let table = sieve_primes(10_000).unwrap();
        let spec = SumSpec::new(5, 10_000, 1.0).unwrap();
        let g = character_group(5).unwrap();
        for seed in 0..4 {
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let a = CoefficientVector::random_complex(&table, 5, 10_000, &mut rng).unwrap();
            let r = abel_reduction_check(&g[1 + seed as usize % 3], &a, &spec, &table).unwrap();
            assert!(r.passed);
            assert!(r.ratio <= 2.0 + 1e-6);
            assert!(r.ratio >= 1.0 - 1e-12);
        }
    }

    #[test]
    fn aligned_coefficients_ratio_near_one() {
        let table = sieve_primes(10_000).unwrap();
        let spec = SumSpec::new(5, 10_000, 1.0).unwrap();
        let chi = &character_group(5).unwrap()[1];
        let theta = 1.7;
        // a_p χ(p) p^{-1-iθ} = 1/p > 0 at t = θ
        let a = CoefficientVector::from_fn(&table, 5, 10_000, |p| {
            chi.evaluate(p).conj() * Complex64::new(0.0, theta * (p as f64).ln()).exp()
        })
        .unwrap();
        let r = abel_reduction_check(chi, &a, &spec, &table).unwrap();
        assert!((r.ratio - 1.0).abs() < 1e-9);
        assert!((r.sigma_one.t_star - theta).abs() < 1e-6);
        assert_eq!(r.sigma_one.y_star, 9973);
    }
}
