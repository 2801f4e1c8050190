//! Truncated Euler-product prime sums `Σ_{w<p≤y} a_p χ(p) p^{-s}` and their
//! maxima over `y ≤ x`, `σ ≥ 1` and `|t| ≤ D^B`.

mod abel;
mod lemma;
mod rectangle;
pub(crate) mod scan;

pub use abel::{abel_reduction_check, AbelReport};
pub use lemma::{dyadic_grid, lemma_sup_scan, lemma_sup_scan_with, LemmaPoint, LemmaScanReport, YGrid};
pub use rectangle::{rectangle_max, rectangle_max_with, RectangleForm, RectangleMaxWitness, ScanOptions};
pub use scan::{t_spacing, TGrid};

use crate::characters::Character;
use crate::error::{domain, Error, Result};
use crate::number_core::{ComplexSum, NeumaierSum, PrimeTable};
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;
use serde::Serialize;
use std::ops::Range;

/// Parameters of one experiment: modulus `D` (also the excluded prime
/// bound), outer limit `x`, exponent `B` in `|t| ≤ D^B`, and an optional
/// truncation height for `σ`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SumSpec {
    pub d: u64,
    pub x: u64,
    pub b_exponent: f64,
    pub sigma_max: Option<f64>,
}

impl SumSpec {
    pub fn new(d: u64, x: u64, b_exponent: f64) -> Result<Self> {
        let spec = Self { d, x, b_exponent, sigma_max: None };
        spec.validate()?;
        Ok(spec)
    }

    pub fn with_sigma_max(mut self, sigma_max: f64) -> Result<Self> {
        self.sigma_max = Some(sigma_max);
        self.validate()?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        if self.d == 0 || self.d > self.x {
            return domain(format!("need 1 ≤ D ≤ x, got D = {}, x = {}", self.d, self.x));
        }
        if !(self.b_exponent > 0.0 && self.b_exponent.is_finite()) {
            return domain(format!("B must be positive, got {}", self.b_exponent));
        }
        if let Some(s) = self.sigma_max {
            if !(s >= 1.0 && s.is_finite()) {
                return domain(format!("sigma_max must be ≥ 1, got {s}"));
            }
        }
        Ok(())
    }

    /// `D^B`, the bound on `|t|`.
    pub fn t_half_width(&self) -> f64 {
        (self.d as f64).powf(self.b_exponent)
    }

    /// Default grid spacing `π/(8 ln x)`.
    pub fn t_spacing(&self) -> f64 {
        t_spacing(self.x, 8.0)
    }
}

/// Coefficients `a_p` for the primes `D < p ≤ x`, stored densely in
/// ascending prime order.
#[derive(Clone, Debug, PartialEq)]
pub struct CoefficientVector {
    d: u64,
    x: u64,
    primes: Vec<u64>,
    values: Vec<Complex64>,
}

impl CoefficientVector {
    pub fn from_fn(table: &PrimeTable, d: u64, x: u64, mut f: impl FnMut(u64) -> Complex64) -> Result<Self> {
        if d == 0 || d > x {
            return domain(format!("need 1 ≤ D ≤ x, got D = {d}, x = {x}"));
        }
        table.check_covers(x)?;
        let primes = table.primes()[table.index_range(d, x)].to_vec();
        let values = primes.iter().map(|&p| f(p)).collect::<Vec<_>>();
        if values.iter().any(|v| !(v.re.is_finite() && v.im.is_finite())) {
            return domain("coefficients must be finite");
        }
        Ok(Self { d, x, primes, values })
    }

    pub fn ones(table: &PrimeTable, d: u64, x: u64) -> Result<Self> {
        Self::from_fn(table, d, x, |_| Complex64::new(1.0, 0.0))
    }

    /// Independent standard normal real and imaginary parts.
    pub fn random_complex<R: Rng>(table: &PrimeTable, d: u64, x: u64, rng: &mut R) -> Result<Self> {
        Self::from_fn(table, d, x, |_| Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)))
    }

    /// Standard normal real coefficients.
    pub fn random_real<R: Rng>(table: &PrimeTable, d: u64, x: u64, rng: &mut R) -> Result<Self> {
        Self::from_fn(table, d, x, |_| Complex64::new(rng.sample(StandardNormal), 0.0))
    }

    /// Builds from explicit `(p, a_p)` pairs; unlisted primes get 0.
    /// Every listed `p` must be a prime in `(D, x]` and appear once.
    pub fn from_pairs(table: &PrimeTable, d: u64, x: u64, pairs: &[(u64, Complex64)]) -> Result<Self> {
        let mut out = Self::from_fn(table, d, x, |_| Complex64::new(0.0, 0.0))?;
        let mut seen = vec![false; out.primes.len()];
        for &(p, v) in pairs {
            let i = out
                .primes
                .binary_search(&p)
                .map_err(|_| Error::Domain(format!("{p} is not a prime in ({d}, {x}]")))?;
            if seen[i] {
                return domain(format!("prime {p} listed twice"));
            }
            if !(v.re.is_finite() && v.im.is_finite()) {
                return domain(format!("coefficient for {p} is not finite"));
            }
            seen[i] = true;
            out.values[i] = v;
        }
        Ok(out)
    }

    pub fn d(&self) -> u64 {
        self.d
    }

    pub fn x(&self) -> u64 {
        self.x
    }

    pub fn primes(&self) -> &[u64] {
        &self.primes
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn get(&self, p: u64) -> Option<Complex64> {
        self.primes.binary_search(&p).ok().map(|i| self.values[i])
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|v| v.re == 0.0 && v.im == 0.0)
    }

    pub fn is_real(&self) -> bool {
        self.values.iter().all(|v| v.im == 0.0)
    }

    pub fn scaled(&self, lambda: Complex64) -> Self {
        Self { values: self.values.iter().map(|v| v * lambda).collect(), ..self.clone() }
    }

    pub fn conj(&self) -> Self {
        Self { values: self.values.iter().map(|v| v.conj()).collect(), ..self.clone() }
    }

    /// `Σ_{D<p≤x} |a_p|²/p`.
    pub fn weighted_norm_sq(&self) -> f64 {
        let mut acc = NeumaierSum::new();
        for (v, &p) in self.values.iter().zip(&self.primes) {
            acc.add(v.norm_sqr() / p as f64);
        }
        acc.value()
    }

    /// Index range into `table.primes()` covered by this vector.
    pub(crate) fn table_range(&self, table: &PrimeTable) -> Result<Range<usize>> {
        table.check_covers(self.x)?;
        let r = table.index_range(self.d, self.x);
        if r.len() != self.primes.len() || table.primes()[r.clone()] != self.primes[..] {
            return domain("coefficient vector does not match the prime table");
        }
        Ok(r)
    }
}

/// `Σ_{w<p≤y} a_p χ(p) p^{-s}` with `p^{-s} = exp(-s log p)`, summed in
/// ascending prime order with compensation.
pub fn char_prime_sum(
    chi: &Character,
    a: &CoefficientVector,
    w: u64,
    y: u64,
    s: Complex64,
    table: &PrimeTable,
) -> Result<Complex64> {
    if chi.modulus() != a.d {
        return domain(format!("character modulus {} differs from D = {}", chi.modulus(), a.d));
    }
    if !(a.d <= w && w <= y && y <= a.x) {
        return domain(format!("need D ≤ w ≤ y ≤ x, got D = {}, w = {w}, y = {y}, x = {}", a.d, a.x));
    }
    if !(s.re >= 1.0) {
        return domain(format!("need Re(s) ≥ 1, got {s}"));
    }
    let base = a.table_range(table)?.start;
    let logs = table.log_p();
    let mut acc = ComplexSum::new();
    for i in table.index_range(w, y) {
        let v = a.values[i - base];
        if v.re == 0.0 && v.im == 0.0 {
            continue;
        }
        acc.add(v * chi.evaluate(table.primes()[i]) * (-s * logs[i]).exp());
    }
    Ok(acc.value())
}

/// `χ(p)/p` for the primes `p` at the given table indices.
pub(crate) fn unit_terms(chi: &Character, table: &PrimeTable, range: Range<usize>) -> Vec<Complex64> {
    table.primes()[range]
        .iter()
        .map(|&p| chi.evaluate(p) / p as f64)
        .collect()
}
