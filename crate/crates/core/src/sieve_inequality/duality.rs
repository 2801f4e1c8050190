use super::delta::{DeltaMatrix, DenseDelta};
use super::eigen::{norm, power_iteration, random_unit, top_eigenpair_seeded};
use super::gram::gram_matrix;
use crate::error::{domain, Result};
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

/// Relative tolerance for the two `λ_max` computations and the pullback.
pub const DUALITY_RTOL: f64 = 1e-8;
/// Random dual quotients may exceed `λ_max` by this relative amount.
pub const TRIAL_RTOL: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DualityReport {
    pub k: usize,
    pub columns: usize,
    pub trials: usize,
    pub seed: u64,
    /// `λ_max` of the `k×k` Gram matrix.
    pub lambda_rows: f64,
    /// `λ_max` of `Δ^*Δ` on the prime side.
    pub lambda_columns: f64,
    pub lambda_rel_diff: f64,
    /// Largest `‖Δa‖² / ‖a‖²` over the random trials.
    pub max_trial_quotient: f64,
    /// `‖Δa‖² / ‖a‖²` at `a = Δ^* v` for the top eigenvector `v`.
    pub pullback_quotient: f64,
    pub pullback_rel_diff: f64,
    pub passed: bool,
}

/// `‖Δa‖² / ‖a‖²`, the dual Rayleigh quotient.
pub fn dual_quotient(delta: &DenseDelta, a: &[Complex64]) -> f64 {
    let img = delta.apply(a);
    let (num, den) = (norm(&img), norm(a));
    if den == 0.0 {
        0.0
    } else {
        (num / den).powi(2)
    }
}

/// Checks numerically that the row and column sides of `Δ` share `λ_max`,
/// that random coefficient vectors never beat it, and that the pullback of
/// the top eigenvector attains it.
pub fn duality_check(delta: &DeltaMatrix, trials: usize, seed: u64) -> Result<DualityReport> {
    if trials == 0 {
        return domain("duality check needs at least one trial");
    }
    let dense = delta.to_dense();
    let n = dense.columns();
    let gram = gram_matrix(delta);
    let top = top_eigenpair_seeded(&gram, seed)?;
    let lambda_rows = top.lambda;

    let lambda_columns = if n == 0 {
        0.0
    } else {
        power_iteration(|a| dense.apply_adjoint(&dense.apply(a)), n, gram.trace(), seed).lambda
    };
    let rel = |u: f64, v: f64| if u == v { 0.0 } else { (u - v).abs() / u.abs().max(v.abs()) };

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut max_trial_quotient = 0.0f64;
    if n > 0 {
        for _ in 0..trials {
            let a = random_unit(n, &mut rng);
            max_trial_quotient = max_trial_quotient.max(dual_quotient(&dense, &a));
        }
    }
    let pullback = dense.apply_adjoint(&top.vector);
    let pullback_quotient = dual_quotient(&dense, &pullback);

    let lambda_rel_diff = rel(lambda_rows, lambda_columns);
    let pullback_rel_diff = rel(lambda_rows, pullback_quotient);
    let passed = lambda_rel_diff <= DUALITY_RTOL
        && pullback_rel_diff <= DUALITY_RTOL
        && max_trial_quotient <= lambda_rows * (1.0 + TRIAL_RTOL);
    Ok(DualityReport {
        k: dense.k(),
        columns: n,
        trials,
        seed,
        lambda_rows,
        lambda_columns,
        lambda_rel_diff,
        max_trial_quotient,
        pullback_quotient,
        pullback_rel_diff,
        passed,
    })
}
