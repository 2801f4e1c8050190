use super::scan::{better, golden_max, scan, FullKernel, ModulusMax, ReVariantKernel, TGrid, TIE_RTOL};
use super::{unit_terms, CoefficientVector, SumSpec};
use crate::characters::Character;
use crate::error::{domain, Result};
use crate::number_core::{ComplexSum, NeumaierSum, PrimeTable};
use num_complex::Complex64;
use serde::Serialize;

/// Which prime sum is maximised.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum RectangleForm {
    /// `Σ a_p χ(p) p^{-s}`
    Full,
    /// `Σ a_p Re(χ(p) p^{-s})`
    RealPart,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ScanOptions {
    /// Grid spacing is `π/(spacing_divisor · ln x)`.
    pub spacing_divisor: f64,
    /// Golden-section refinement around the best grid cell.
    pub refine: bool,
    /// Restrict the rectangle to `σ = 1`.
    pub sigma_one_only: bool,
}

impl Default for ScanOptions {
    fn default() -> Self {
        Self { spacing_divisor: 8.0, refine: true, sigma_one_only: false }
    }
}

/// Where the maximum of `|Σ_{D<p≤y} a_p χ(p) p^{-s}|` was found.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RectangleMaxWitness {
    pub value: f64,
    pub y_star: u64,
    pub t_star: f64,
    pub sigma_star: f64,
    pub refined: bool,
}

/// Approximate maximum of `|Σ_{D<p≤y} a_p χ(p) p^{-σ-it}|` over every `y ≤ x`,
/// `|t| ≤ D^B` and `1 ≤ σ ≤ sigma_max`.
pub fn rectangle_max(
    chi: &Character,
    a: &CoefficientVector,
    spec: &SumSpec,
    table: &PrimeTable,
) -> Result<RectangleMaxWitness> {
    rectangle_max_with(chi, a, spec, table, RectangleForm::Full, &ScanOptions::default())
}

struct Candidate {
    value: f64,
    t: f64,
    idx: usize,
    sigma: f64,
}

impl Candidate {
    fn key(&self) -> (f64, usize, f64) {
        (self.t, self.idx, self.sigma)
    }

    fn offer(best: &mut Option<Candidate>, c: Candidate) {
        let replace = match best {
            None => true,
            Some(b) => better(c.value, c.key(), b.value, b.key()),
        };
        if replace {
            *best = Some(c);
        }
    }
}

/// Terms of one σ level: the kernel inputs and the suffix bound on `|term|`.
struct Level {
    sigma: f64,
    amp: Vec<Complex64>,
    tail: Vec<f64>,
}

struct Problem<'a> {
    form: RectangleForm,
    a: &'a [Complex64],
    unit: Vec<Complex64>,
    logs: &'a [f64],
}

impl Problem<'_> {
    fn level(&self, sigma: f64) -> Level {
        let amp: Vec<Complex64> = self
            .a
            .iter()
            .zip(self.logs)
            .map(|(&v, &lg)| if sigma == 1.0 { v } else { v * ((1.0 - sigma) * lg).exp() })
            .collect();
        let mut tail = vec![0.0; amp.len() + 1];
        for i in (0..amp.len()).rev() {
            tail[i] = tail[i + 1] + amp[i].norm() * self.unit[i].norm();
        }
        Level { sigma, amp, tail }
    }

    /// Per grid point: `(max |S|², first prefix index attaining it)`.
    fn scan_level(&self, level: &Level, grid: &TGrid, floors: Option<&[f64]>) -> Vec<(f64, usize)> {
        let make = |c: &super::scan::Chunk| match floors {
            Some(f) => ModulusMax::with_pruning(c.count, &level.tail, f[c.first..c.first + c.count].to_vec()),
            None => ModulusMax::new(c.count),
        };
        let chunks = match self.form {
            RectangleForm::Full => {
                let coeff: Vec<Complex64> = level.amp.iter().zip(&self.unit).map(|(a, u)| a * u).collect();
                scan(&FullKernel { coeff: &coeff, logs: self.logs }, grid, make)
            }
            RectangleForm::RealPart => {
                scan(&ReVariantKernel { amp: &level.amp, unit: &self.unit, logs: self.logs }, grid, make)
            }
        };
        chunks
            .into_iter()
            .flat_map(|(c, obs)| (0..c.count).map(move |l| (obs.best_sq[l], obs.best_idx[l])))
            .collect()
    }

    /// Exact `max_y |S_σ(y, t)|` with its first prefix index.
    fn profile_max(&self, level: &Level, t: f64) -> (f64, usize) {
        let mut acc = ComplexSum::new();
        let mut best = (-1.0, 0);
        for i in 0..level.amp.len() {
            let (s, c) = (-t * self.logs[i]).sin_cos();
            let ph = Complex64::new(c, s);
            let u = self.unit[i];
            let term = match self.form {
                RectangleForm::Full => level.amp[i] * u * ph,
                RectangleForm::RealPart => level.amp[i] * (u.re * ph.re - u.im * ph.im),
            };
            acc.add(term);
            let sq = acc.value().norm_sqr();
            if sq > best.0 {
                best = (sq, i);
            }
        }
        (best.0.max(0.0).sqrt(), best.1)
    }
}

/// Smallest `σ ≥ 1` with `Σ |a_p| p^{-σ} < 10^{-3}·m1`.
fn default_sigma_max(a: &[Complex64], logs: &[f64], m1: f64) -> f64 {
    let g = |sigma: f64| {
        let mut acc = NeumaierSum::new();
        for (v, &lg) in a.iter().zip(logs) {
            acc.add(v.norm() * (-sigma * lg).exp());
        }
        acc.value()
    };
    let target = 1e-3 * m1;
    if g(1.0) < target {
        return 1.0;
    }
    let (mut lo, mut hi) = (1.0, 2.0);
    while g(hi) >= target && hi < 1024.0 {
        lo = hi;
        hi *= 2.0;
    }
    for _ in 0..60 {
        let mid = 0.5 * (lo + hi);
        if g(mid) < target {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    hi
}

/// [`rectangle_max`] with an explicit summand form and scan options.
///
/// The `σ` levels are `r^k`, `r = 1 + 1/ln(x+2)`, up to `sigma_max` (given in
/// `spec` or the smallest `σ` where `Σ|a_p|p^{-σ}` drops below `10^{-3}` of the
/// `σ = 1` maximum). Levels above 1 stop early on a grid cell once the suffix
/// bound shows they cannot reach that cell's `σ = 1` value.
pub fn rectangle_max_with(
    chi: &Character,
    a: &CoefficientVector,
    spec: &SumSpec,
    table: &PrimeTable,
    form: RectangleForm,
    opts: &ScanOptions,
) -> Result<RectangleMaxWitness> {
    spec.validate()?;
    if chi.modulus() != spec.d || a.d() != spec.d || a.x() != spec.x {
        return domain("character, coefficients and spec disagree on D or x");
    }
    let range = a.table_range(table)?;
    let half = spec.t_half_width();
    if range.is_empty() {
        return Ok(RectangleMaxWitness { value: 0.0, y_star: spec.x, t_star: -half, sigma_star: 1.0, refined: false });
    }
    if a.is_zero() {
        return domain("coefficient vector is identically zero");
    }
    let primes = &table.primes()[range.clone()];
    let problem = Problem { form, a: a.values(), unit: unit_terms(chi, table, range.clone()), logs: &table.log_p()[range] };
    let grid = TGrid::new(half, super::t_spacing(spec.x, opts.spacing_divisor));
    let points = grid.points();

    let mut best: Option<Candidate> = None;
    let base = problem.level(1.0);
    let first = problem.scan_level(&base, &grid, None);
    let m1: Vec<f64> = first.iter().map(|&(sq, _)| sq.max(0.0).sqrt()).collect();
    for (j, &(sq, idx)) in first.iter().enumerate() {
        Candidate::offer(&mut best, Candidate { value: sq.max(0.0).sqrt(), t: points[j], idx, sigma: 1.0 });
    }

    let mut levels = vec![base];
    if !opts.sigma_one_only {
        let m1_max = m1.iter().cloned().fold(0.0, f64::max);
        let sigma_max = spec.sigma_max.unwrap_or_else(|| default_sigma_max(a.values(), problem.logs, m1_max));
        let ratio = 1.0 + 1.0 / ((spec.x + 2) as f64).ln();
        let floors: Vec<f64> = m1.iter().map(|v| v * (1.0 - 4.0 * TIE_RTOL)).collect();
        for k in 1.. {
            let sigma = ratio.powi(k);
            if sigma > sigma_max {
                break;
            }
            let level = problem.level(sigma);
            for (j, &(sq, idx)) in problem.scan_level(&level, &grid, Some(&floors)).iter().enumerate() {
                Candidate::offer(&mut best, Candidate { value: sq.max(0.0).sqrt(), t: points[j], idx, sigma });
            }
            levels.push(level);
        }
    }

    let mut best = best.expect("grid is never empty");
    let mut refined = false;
    if opts.refine {
        let level = levels.iter().find(|l| l.sigma == best.sigma).expect("level of the best candidate");
        let h = grid.spacing();
        let lo = (best.t - h).max(-half);
        let hi = (best.t + h).min(half);
        let (t_ref, _) = golden_max(|t| problem.profile_max(level, t).0, lo, hi, 1e-9);
        let (value, idx) = problem.profile_max(level, t_ref);
        if value > best.value * (1.0 + TIE_RTOL) {
            best = Candidate { value, t: t_ref, idx, sigma: best.sigma };
            refined = true;
        }
    }
    Ok(RectangleMaxWitness {
        value: best.value,
        y_star: primes[best.idx],
        t_star: best.t,
        sigma_star: best.sigma,
        refined,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::characters::character_group;
    use crate::euler_sums::char_prime_sum;
    use crate::number_core::sieve_primes;
    use rand::SeedableRng;

    #[test]
    fn single_prime_support() {
        let table = sieve_primes(1000).unwrap();
        let spec = SumSpec::new(5, 1000, 1.0).unwrap();
        let one = Complex64::new(1.0, 0.0);
        let a = CoefficientVector::from_pairs(&table, 5, 1000, &[(101, one)]).unwrap();
        for chi in character_group(5).unwrap() {
            let w = rectangle_max(&chi, &a, &spec, &table).unwrap();
            assert!((w.value - 1.0 / 101.0).abs() < 1e-15);
            assert_eq!(w.sigma_star, 1.0);
            assert_eq!(w.t_star, -5.0);
            assert_eq!(w.y_star, 101);
            assert!(!w.refined);
        }
    }

    #[test]
    fn principal_mod_two_peaks_at_zero() {
        let table = sieve_primes(100).unwrap();
        let spec = SumSpec::new(2, 10, 1.0).unwrap();
        let chi = &character_group(2).unwrap()[0];
        let a = CoefficientVector::ones(&table, 2, 10).unwrap();
        let w = rectangle_max(chi, &a, &spec, &table).unwrap();
        assert!((w.value - 71.0 / 105.0).abs() < 1e-14);
        assert_eq!(w.y_star, 7);
        assert_eq!(w.sigma_star, 1.0);
        assert!(w.t_star.abs() < 1e-9);
        // dense t oracle
        let mut best: f64 = 0.0;
        for k in -20_000..=20_000 {
            let t = 2.0 * k as f64 / 20_000.0;
            let s = char_prime_sum(chi, &a, 2, 10, Complex64::new(1.0, t), &table).unwrap();
            best = best.max(s.norm());
        }
        assert!(w.value >= best - 1e-15);
    }

    #[test]
    fn homogeneity() {
        let table = sieve_primes(2000).unwrap();
        let spec = SumSpec::new(7, 2000, 1.0).unwrap();
        let g = character_group(7).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        let a = CoefficientVector::random_complex(&table, 7, 2000, &mut rng).unwrap();
        let w1 = rectangle_max(&g[2], &a, &spec, &table).unwrap();
        let w2 = rectangle_max(&g[2], &a.scaled(Complex64::new(2.5, 0.0)), &spec, &table).unwrap();
        assert!((w2.value - 2.5 * w1.value).abs() < 1e-12 * w2.value);
        assert_eq!((w1.y_star, w1.sigma_star), (w2.y_star, w2.sigma_star));
        assert!((w1.t_star - w2.t_star).abs() < 1e-6);
    }

    #[test]
    fn bounded_by_triangle_inequality_and_probes() {
        let table = sieve_primes(5000).unwrap();
        let spec = SumSpec::new(11, 5000, 1.0).unwrap();
        let g = character_group(11).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        let a = CoefficientVector::random_complex(&table, 11, 5000, &mut rng).unwrap();
        let ceiling: f64 = a.values().iter().zip(a.primes()).map(|(v, &p)| v.norm() / p as f64).sum();
        for chi in &g[..4] {
            let w = rectangle_max(chi, &a, &spec, &table).unwrap();
            assert!(w.value <= ceiling);
            assert!(w.t_star.abs() <= 11.0 && w.sigma_star >= 1.0 && w.y_star > 11 && w.y_star <= 5000);
            let at = char_prime_sum(chi, &a, 11, w.y_star, Complex64::new(w.sigma_star, w.t_star), &table).unwrap();
            assert!((at.norm() - w.value).abs() < 1e-12);
            for (y, t, s) in [(13u64, 0.0, 1.0), (997, 3.3, 1.0), (5000, -10.9, 1.2), (211, 7.0, 2.0)] {
                let probe = char_prime_sum(chi, &a, 11, y, Complex64::new(s, t), &table).unwrap();
                assert!(w.value >= probe.norm() - 1e-12);
            }
        }
    }

    #[test]
    fn sigma_scan_never_beats_sigma_one_by_more_than_roundoff() {
        let table = sieve_primes(3000).unwrap();
        let spec = SumSpec::new(5, 3000, 1.0).unwrap();
        let g = character_group(5).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        let a = CoefficientVector::random_complex(&table, 5, 3000, &mut rng).unwrap();
        let unpruned_opts = ScanOptions { refine: false, ..ScanOptions::default() };
        let full = rectangle_max_with(&g[1], &a, &spec, &table, RectangleForm::Full, &unpruned_opts).unwrap();
        let one = rectangle_max_with(
            &g[1],
            &a,
            &spec,
            &table,
            RectangleForm::Full,
            &ScanOptions { sigma_one_only: true, ..unpruned_opts },
        )
        .unwrap();
        assert!((full.value - one.value).abs() <= 1e-12 * one.value);
    }

    #[test]
    fn degenerate_and_error_cases() {
        let table = sieve_primes(100).unwrap();
        let chi = &character_group(10).unwrap()[0];
        let spec = SumSpec::new(10, 10, 1.0).unwrap();
        let a = CoefficientVector::ones(&table, 10, 10).unwrap();
        assert_eq!(rectangle_max(chi, &a, &spec, &table).unwrap().value, 0.0);
        let spec = SumSpec::new(10, 50, 1.0).unwrap();
        let zero = CoefficientVector::from_pairs(&table, 10, 50, &[]).unwrap();
        assert!(rectangle_max(chi, &zero, &spec, &table).is_err());
    }

    #[test]
    fn default_sigma_max_rule() {
        let logs = [(17f64).ln()];
        let a = [Complex64::new(1.0, 0.0)];
        let m1 = 1.0 / 17.0;
        let s = default_sigma_max(&a, &logs, m1);
        // 17^{-σ} < 1e-3/17  ⇔  σ > 1 + 3 ln 10 / ln 17
        let exact = 1.0 + 3.0 * 10f64.ln() / 17f64.ln();
        assert!((s - exact).abs() < 1e-9);
    }
}
