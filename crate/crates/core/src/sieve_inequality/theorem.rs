use crate::characters::Character;
use crate::error::{domain, Result};
use crate::euler_sums::{rectangle_max_with, CoefficientVector, RectangleForm, RectangleMaxWitness, ScanOptions, SumSpec};
use crate::number_core::{sum_reciprocal_primes, NeumaierSum, PrimeTable};
use serde::Serialize;

/// `passed` means `lhs ≤ rhs · (1 + PASS_RTOL)`.
pub const PASS_RTOL: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct WitnessEntry {
    pub character_index: usize,
    pub y_star: u64,
    pub t_star: f64,
    pub sigma_star: f64,
    pub value: f64,
}

impl WitnessEntry {
    fn new(chi: &Character, w: &RectangleMaxWitness) -> Self {
        Self { character_index: chi.index(), y_star: w.y_star, t_star: w.t_star, sigma_star: w.sigma_star, value: w.value }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerificationReport {
    pub d: u64,
    pub x: u64,
    pub b_exponent: f64,
    pub k: usize,
    pub form: RectangleForm,
    pub lhs: f64,
    pub rhs: f64,
    pub ratio: f64,
    pub c_used: f64,
    /// `Σ_{D<p≤x} 1/p`.
    pub l: f64,
    /// `Σ |a_p|² / p`.
    pub coefficient_norm: f64,
    /// The right side with `4(L + kc/4)` in place of `4L + (k-1)c`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rhs_dual_normalization: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lambda_max: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub witnesses: Vec<WitnessEntry>,
    pub passed: bool,
}

impl VerificationReport {
    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = Some(seed);
        self
    }

    pub fn with_lambda_max(mut self, lambda: f64) -> Self {
        self.lambda_max = Some(lambda);
        self
    }

    /// Shifts `t_j` and cutoffs `y_j` of the witnesses, for building a δ-matrix.
    pub fn witness_rows(&self) -> (Vec<f64>, Vec<u64>) {
        (self.witnesses.iter().map(|w| w.t_star).collect(), self.witnesses.iter().map(|w| w.y_star).collect())
    }
}

struct Sides {
    lhs: f64,
    l: f64,
    norm: f64,
    witnesses: Vec<WitnessEntry>,
}

fn sides(
    a: &CoefficientVector,
    characters: &[Character],
    spec: &SumSpec,
    table: &PrimeTable,
    form: RectangleForm,
    c: f64,
) -> Result<Sides> {
    spec.validate()?;
    if characters.is_empty() {
        return domain("need at least one character");
    }
    if !(c >= 0.0 && c.is_finite()) {
        return domain(format!("c must be a finite nonnegative number, got {c}"));
    }
    if a.d() != spec.d || a.x() != spec.x {
        return domain("coefficient vector does not match D and x");
    }
    if a.is_zero() {
        return domain("coefficient vector is identically zero");
    }
    let opts = ScanOptions::default();
    let mut lhs = NeumaierSum::new();
    let mut witnesses = Vec::with_capacity(characters.len());
    for chi in characters {
        let w = rectangle_max_with(chi, a, spec, table, form, &opts)?;
        lhs.add(w.value * w.value);
        witnesses.push(WitnessEntry::new(chi, &w));
    }
    let l = if spec.d < spec.x { sum_reciprocal_primes(spec.d, spec.x, table)? } else { 0.0 };
    Ok(Sides { lhs: lhs.value(), l, norm: a.weighted_norm_sq(), witnesses })
}

fn report(spec: &SumSpec, k: usize, form: RectangleForm, s: Sides, rhs: f64, dual: Option<f64>, c: f64) -> VerificationReport {
    VerificationReport {
        d: spec.d,
        x: spec.x,
        b_exponent: spec.b_exponent,
        k,
        form,
        lhs: s.lhs,
        rhs,
        ratio: if rhs > 0.0 { s.lhs / rhs } else { f64::INFINITY },
        c_used: c,
        l: s.l,
        coefficient_norm: s.norm,
        rhs_dual_normalization: dual,
        lambda_max: None,
        seed: None,
        witnesses: s.witnesses,
        passed: s.lhs <= rhs * (1.0 + PASS_RTOL),
    }
}

/// Checks `Σ_j max |Σ_{D<p≤y} a_p χ_j(p) p^{-s}|² ≤ (4L + (k-1)c) Σ |a_p|²/p`
/// with each maximum over `y ≤ x`, `σ ≥ 1`, `|t| ≤ D^B`.
pub fn verify_theorem(
    a: &CoefficientVector,
    characters: &[Character],
    spec: &SumSpec,
    c: f64,
    table: &PrimeTable,
) -> Result<VerificationReport> {
    for (i, chi) in characters.iter().enumerate() {
        if characters[..i].contains(chi) {
            return domain(format!("character {} listed twice", chi.index()));
        }
    }
    let s = sides(a, characters, spec, table, RectangleForm::Full, c)?;
    let k = characters.len() as f64;
    let rhs = (4.0 * s.l + (k - 1.0) * c) * s.norm;
    let dual = (4.0 * s.l + k * c) * s.norm;
    Ok(report(spec, characters.len(), RectangleForm::Full, s, rhs, Some(dual), c))
}

/// Real-part form `Σ a_p Re(χ_j(p) p^{-s})` against `2(L + kc) Σ |a_p|²/p`.
///
/// Conjugate pairs may both be listed and are kept; only exact repeats are
/// rejected.
pub fn variant_re_bound(
    a: &CoefficientVector,
    characters: &[Character],
    spec: &SumSpec,
    c: f64,
    table: &PrimeTable,
) -> Result<VerificationReport> {
    for (i, chi) in characters.iter().enumerate() {
        if characters[..i].contains(chi) {
            return domain(format!("character {} listed twice", chi.index()));
        }
    }
    let s = sides(a, characters, spec, table, RectangleForm::RealPart, c)?;
    let k = characters.len() as f64;
    let rhs = 2.0 * (s.l + k * c) * s.norm;
    Ok(report(spec, characters.len(), RectangleForm::RealPart, s, rhs, None, c))
}
