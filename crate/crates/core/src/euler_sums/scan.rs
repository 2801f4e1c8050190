//! Lane-blocked evaluation of `S(y, t) = Σ_{i < y} term_i(p_i^{-it})` on a
//! symmetric grid of `t` values.
//!
//! The grid is cut into chunks of at most [`LANES`] equally spaced points.
//! Within a chunk the phases `p^{-it}` advance by one complex multiplication
//! per lane, spread over a few interleaved recurrences; each chunk re-seeds
//! from `exp(-i t_0 log p)`, so rounding drift is bounded by `LANES` steps.
//! Chunk boundaries depend only on the grid, which keeps results independent
//! of the number of worker threads.

use crate::number_core::Compensated;
use num_complex::Complex64;
use rayon::prelude::*;
use std::f64::consts::PI;

pub(crate) const LANES: usize = 64;

/// Independent phase recurrences per chunk; a power of two.
const CHAINS: usize = 4;

/// Relative tolerance under which two maxima count as tied.
pub(crate) const TIE_RTOL: f64 = 1e-12;

/// Spacing `π/(divisor·ln x)` used for t grids.
pub fn t_spacing(x: u64, divisor: f64) -> f64 {
    PI / (divisor * (x.max(2) as f64).ln())
}

/// Points of a symmetric grid on `[-T, T]`: `-T`, every `m·h` with
/// `|m·h| < T`, and `T`.
#[derive(Clone, Debug)]
pub struct TGrid {
    half_width: f64,
    spacing: f64,
    m_max: i64,
}

#[derive(Clone, Copy, Debug)]
pub(crate) struct Chunk {
    /// Index of the first point in the full grid.
    pub first: usize,
    pub t0: f64,
    pub count: usize,
}

impl TGrid {
    pub fn new(half_width: f64, spacing: f64) -> Self {
        assert!(half_width > 0.0 && spacing > 0.0);
        let mut m_max = (half_width / spacing).floor() as i64;
        if m_max as f64 * spacing >= half_width {
            m_max -= 1;
        }
        Self { half_width, spacing, m_max: m_max.max(0) }
    }

    pub fn half_width(&self) -> f64 {
        self.half_width
    }

    pub fn spacing(&self) -> f64 {
        self.spacing
    }

    pub fn len(&self) -> usize {
        2 * self.m_max as usize + 3
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn point(&self, idx: usize) -> f64 {
        let last = self.len() - 1;
        if idx == 0 {
            -self.half_width
        } else if idx == last {
            self.half_width
        } else {
            (idx as i64 - 1 - self.m_max) as f64 * self.spacing
        }
    }

    pub fn points(&self) -> Vec<f64> {
        (0..self.len()).map(|i| self.point(i)).collect()
    }

    pub(crate) fn chunks(&self) -> Vec<Chunk> {
        let last = self.len() - 1;
        let mut out = vec![Chunk { first: 0, t0: -self.half_width, count: 1 }];
        let mut idx = 1;
        while idx < last {
            let count = LANES.min(last - idx);
            out.push(Chunk { first: idx, t0: self.point(idx), count });
            idx += count;
        }
        out.push(Chunk { first: last, t0: self.half_width, count: 1 });
        out
    }
}

/// Term generator for the scan: `term(i, p_i^{-it})`.
pub(crate) trait Kernel: Sync {
    type Value: Compensated;
    fn len(&self) -> usize;
    fn log(&self, i: usize) -> f64;
    fn term(&self, i: usize, phase: Complex64) -> Self::Value;
}

/// `coeff_i · phase`.
pub(crate) struct FullKernel<'a> {
    pub coeff: &'a [Complex64],
    pub logs: &'a [f64],
}

impl Kernel for FullKernel<'_> {
    type Value = Complex64;
    fn len(&self) -> usize {
        self.coeff.len()
    }
    #[inline(always)]
    fn log(&self, i: usize) -> f64 {
        self.logs[i]
    }
    #[inline(always)]
    fn term(&self, i: usize, phase: Complex64) -> Complex64 {
        self.coeff[i] * phase
    }
}

/// `Re(coeff_i · phase)`.
pub(crate) struct RealPartKernel<'a> {
    pub coeff: &'a [Complex64],
    pub logs: &'a [f64],
}

impl Kernel for RealPartKernel<'_> {
    type Value = f64;
    fn len(&self) -> usize {
        self.coeff.len()
    }
    #[inline(always)]
    fn log(&self, i: usize) -> f64 {
        self.logs[i]
    }
    #[inline(always)]
    fn term(&self, i: usize, phase: Complex64) -> f64 {
        let c = self.coeff[i];
        c.re * phase.re - c.im * phase.im
    }
}

/// `amp_i · Re(unit_i · phase)`.
pub(crate) struct ReVariantKernel<'a> {
    pub amp: &'a [Complex64],
    pub unit: &'a [Complex64],
    pub logs: &'a [f64],
}

impl Kernel for ReVariantKernel<'_> {
    type Value = Complex64;
    fn len(&self) -> usize {
        self.amp.len()
    }
    #[inline(always)]
    fn log(&self, i: usize) -> f64 {
        self.logs[i]
    }
    #[inline(always)]
    fn term(&self, i: usize, phase: Complex64) -> Complex64 {
        let u = self.unit[i];
        self.amp[i] * (u.re * phase.re - u.im * phase.im)
    }
}

/// Receives the running lane sums after each prime.
pub(crate) trait Observer<V>: Send {
    /// Return `false` to stop scanning this chunk.
    fn observe(&mut self, i: usize, sums: &[V]) -> bool;
}

fn run_chunk<K: Kernel, O: Observer<K::Value>>(kernel: &K, steps: &[Complex64], chunk: Chunk, obs: &mut O) {
    let mut acc = [<K::Value as Compensated>::Acc::default(); LANES];
    let mut totals = [K::Value::default(); LANES];
    let n = chunk.count;
    for i in 0..kernel.len() {
        let (s, c) = (-chunk.t0 * kernel.log(i)).sin_cos();
        // chain r holds lanes r, r + CHAINS, ...
        let mut ph = [Complex64::new(c, s); CHAINS];
        for r in 1..CHAINS {
            ph[r] = ph[r - 1] * steps[i];
        }
        let mut stride = steps[i];
        for _ in 0..CHAINS.trailing_zeros() {
            stride = stride * stride;
        }
        let mut base = 0;
        while base < n {
            for (r, p) in ph.iter_mut().enumerate() {
                let l = base + r;
                if l < n {
                    K::Value::accumulate(&mut acc[l], kernel.term(i, *p));
                    totals[l] = K::Value::total(&acc[l]);
                }
                *p *= stride;
            }
            base += CHAINS;
        }
        if !obs.observe(i, &totals[..n]) {
            break;
        }
    }
}

/// Runs `kernel` over every chunk of `grid`, one observer per chunk, and
/// returns the finished observers in grid order.
pub(crate) fn scan<K, O, F>(kernel: &K, grid: &TGrid, make: F) -> Vec<(Chunk, O)>
where
    K: Kernel,
    O: Observer<K::Value>,
    F: Fn(&Chunk) -> O + Sync,
{
    let h = grid.spacing();
    let steps: Vec<Complex64> = (0..kernel.len())
        .map(|i| {
            let (s, c) = (-h * kernel.log(i)).sin_cos();
            Complex64::new(c, s)
        })
        .collect();
    grid.chunks()
        .into_par_iter()
        .map(|chunk| {
            let mut obs = make(&chunk);
            run_chunk(kernel, &steps, chunk, &mut obs);
            (chunk, obs)
        })
        .collect()
}

/// Per lane: the largest `|S|²` over all prefixes and the first index
/// attaining it. Optionally stops once no lane can beat its floor.
pub(crate) struct ModulusMax<'a> {
    pub best_sq: Vec<f64>,
    pub best_idx: Vec<usize>,
    /// `tail[i] ≥ |S(∞) - S(i)|`, suffix bound used for pruning.
    pub tail: Option<&'a [f64]>,
    /// Per-lane values a lane must strictly exceed to matter.
    pub floors: Vec<f64>,
}

impl<'a> ModulusMax<'a> {
    pub fn new(lanes: usize) -> Self {
        Self { best_sq: vec![-1.0; lanes], best_idx: vec![0; lanes], tail: None, floors: Vec::new() }
    }

    pub fn with_pruning(lanes: usize, tail: &'a [f64], floors: Vec<f64>) -> Self {
        Self { tail: Some(tail), floors, ..Self::new(lanes) }
    }
}

impl Observer<Complex64> for ModulusMax<'_> {
    #[inline(always)]
    fn observe(&mut self, i: usize, sums: &[Complex64]) -> bool {
        for (l, s) in sums.iter().enumerate() {
            let sq = s.norm_sqr();
            if sq > self.best_sq[l] {
                self.best_sq[l] = sq;
                self.best_idx[l] = i;
            }
        }
        match self.tail {
            Some(tail) if i % 8 == 7 => {
                let rest = tail[i + 1];
                sums.iter()
                    .zip(&self.floors)
                    .any(|(s, &floor)| s.norm() + rest >= floor)
            }
            _ => true,
        }
    }
}

/// Per lane: the real sums at the given prefix lengths.
pub(crate) struct Checkpoints<'a> {
    /// Prefix lengths (number of primes), ascending, each ≥ 1.
    pub counts: &'a [usize],
    next: usize,
    /// `values[c][l]`
    pub values: Vec<Vec<f64>>,
}

impl<'a> Checkpoints<'a> {
    pub fn new(counts: &'a [usize], lanes: usize) -> Self {
        Self { counts, next: 0, values: vec![vec![0.0; lanes]; counts.len()] }
    }
}

impl Observer<f64> for Checkpoints<'_> {
    #[inline(always)]
    fn observe(&mut self, i: usize, sums: &[f64]) -> bool {
        while self.next < self.counts.len() && self.counts[self.next] == i + 1 {
            self.values[self.next].copy_from_slice(sums);
            self.next += 1;
        }
        self.next < self.counts.len()
    }
}

/// Compares candidates by value with [`TIE_RTOL`] ties broken on a key.
pub(crate) fn better<K: PartialOrd>(value: f64, key: K, best_value: f64, best_key: K) -> bool {
    let tol = TIE_RTOL * value.abs().max(best_value.abs());
    if value > best_value + tol {
        true
    } else if (value - best_value).abs() <= tol {
        key < best_key
    } else {
        false
    }
}

/// Golden-section search for a maximum of `f` on `[lo, hi]`.
pub(crate) fn golden_max<F: FnMut(f64) -> f64>(mut f: F, mut lo: f64, mut hi: f64, tol: f64) -> (f64, f64) {
    let r = (5f64.sqrt() - 1.0) / 2.0;
    let mut a = hi - r * (hi - lo);
    let mut b = lo + r * (hi - lo);
    let mut fa = f(a);
    let mut fb = f(b);
    while hi - lo > tol {
        if fa >= fb {
            hi = b;
            b = a;
            fb = fa;
            a = hi - r * (hi - lo);
            fa = f(a);
        } else {
            lo = a;
            a = b;
            fa = fb;
            b = lo + r * (hi - lo);
            fb = f(b);
        }
    }
    if fa >= fb {
        (a, fa)
    } else {
        (b, fb)
    }
}
