use super::delta::build_delta;
use super::eigen::top_eigenpair;
use super::gram::gram_matrix;
use super::theorem::WitnessEntry;
use crate::characters::Character;
use crate::error::Result;
use crate::euler_sums::SumSpec;
use crate::number_core::{sum_reciprocal_primes, PrimeTable};
use serde::Serialize;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PullbackEntry {
    pub p: u64,
    pub re: f64,
    pub im: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExtremalReport {
    pub d: u64,
    pub x: u64,
    pub k: usize,
    pub character_indices: Vec<usize>,
    pub shifts: Vec<f64>,
    pub cutoffs: Vec<u64>,
    pub l: f64,
    pub c1: f64,
    pub lambda_max: f64,
    /// `λ_max / L`.
    pub ratio_to_l: f64,
    /// `λ_max / (L + (k-1)ĉ₁)`.
    pub ratio_to_real_bound: f64,
    /// `max_j M_{jj} / L`.
    pub max_diagonal_ratio: f64,
    /// `λ_max` of the Gram matrix with its off-diagonal part removed.
    pub lambda_diagonal_only: f64,
    pub offdiag_frobenius: f64,
    pub eigen_iterations: usize,
    /// `a = Δ^* v` for the top eigenvector `v`; attains `λ_max` in the dual form.
    pub pullback: Vec<PullbackEntry>,
}

/// Top eigenvalue of the Gram matrix at the given shifts and cutoffs,
/// compared with `L` and with `L + (k-1)ĉ₁`.
pub fn extremal_ratio(
    characters: &[Character],
    spec: &SumSpec,
    shifts: &[f64],
    cutoffs: &[u64],
    c1: f64,
    table: &PrimeTable,
) -> Result<ExtremalReport> {
    let delta = build_delta(characters, shifts, cutoffs, spec, table)?;
    let gram = gram_matrix(&delta);
    let top = top_eigenpair(&gram)?;
    let l = if spec.d < spec.x { sum_reciprocal_primes(spec.d, spec.x, table)? } else { 0.0 };
    let k = characters.len();
    let div = |u: f64, v: f64| if v > 0.0 { u / v } else { 0.0 };
    let diag = gram.diagonal();
    let max_diag = diag.iter().copied().fold(0.0, f64::max);
    let dense = delta.to_dense();
    let pullback = dense
        .apply_adjoint(&top.vector)
        .into_iter()
        .zip(delta.column_primes().unwrap_or(&[]))
        .map(|(v, &p)| PullbackEntry { p, re: v.re, im: v.im })
        .collect();
    Ok(ExtremalReport {
        d: spec.d,
        x: spec.x,
        k,
        character_indices: characters.iter().map(Character::index).collect(),
        shifts: shifts.to_vec(),
        cutoffs: cutoffs.to_vec(),
        l,
        c1,
        lambda_max: top.lambda,
        ratio_to_l: div(top.lambda, l),
        ratio_to_real_bound: div(top.lambda, l + (k as f64 - 1.0) * c1),
        max_diagonal_ratio: div(max_diag, l),
        lambda_diagonal_only: max_diag,
        offdiag_frobenius: gram.offdiag_frobenius(),
        eigen_iterations: top.iterations,
        pullback,
    })
}

/// [`extremal_ratio`] at the rectangle witnesses of a verification run.
pub fn extremal_ratio_for(
    characters: &[Character],
    witnesses: &[WitnessEntry],
    spec: &SumSpec,
    c1: f64,
    table: &PrimeTable,
) -> Result<ExtremalReport> {
    let shifts: Vec<f64> = witnesses.iter().map(|w| w.t_star).collect();
    let cutoffs: Vec<u64> = witnesses.iter().map(|w| w.y_star).collect();
    extremal_ratio(characters, spec, &shifts, &cutoffs, c1, table)
}
