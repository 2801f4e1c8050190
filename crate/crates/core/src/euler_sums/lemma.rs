use super::rectangle::ScanOptions;
use super::scan::{better, golden_max, scan, Checkpoints, Chunk, Observer, RealPartKernel, TGrid, TIE_RTOL};
use super::{char_prime_sum, unit_terms, CoefficientVector, SumSpec};
use crate::characters::Character;
use crate::error::{domain, Result};
use crate::number_core::{NeumaierSum, PrimeTable};
use num_complex::Complex64;
use serde::Serialize;

/// Upper ends `y` scanned by a lemma scan.
#[derive(Clone, Debug, PartialEq)]
pub enum YGrid {
    Points(Vec<u64>),
    /// Every prime in `(D, x]`; requires the lower-end grid to be `{D}`.
    AllPrimes,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LemmaPoint {
    pub w: u64,
    pub y: u64,
    pub t: f64,
    pub sigma: f64,
    pub re_value: f64,
    pub abs_value: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LemmaScanReport {
    pub modulus: u64,
    pub character_index: usize,
    pub x: u64,
    pub b_exponent: f64,
    pub t_half_width: f64,
    pub t_spacing: f64,
    pub t_points: usize,
    pub max_value: f64,
    pub refined: bool,
    pub witness: LemmaPoint,
    /// Best `(y, t)` for each lower end `w`, ascending in `w`.
    pub profile: Vec<LemmaPoint>,
}

/// `{D} ∪ {D·2^k < x} ∪ {x}`.
pub fn dyadic_grid(d: u64, x: u64) -> Vec<u64> {
    let mut out = vec![d];
    let mut g = d.max(1) * 2;
    while g < x {
        out.push(g);
        g *= 2;
    }
    if x > d {
        out.push(x);
    }
    out
}

/// Empirical maximum of `Re Σ_{w<p≤y} χ(p) p^{-1-it}` over the `(w, y)` grid
/// pairs with `y ≥ w` and the `σ = 1` grid of `|t| ≤ D^B`.
pub fn lemma_sup_scan(
    chi: &Character,
    spec: &SumSpec,
    w_grid: &[u64],
    y_grid: &[u64],
    table: &PrimeTable,
) -> Result<LemmaScanReport> {
    lemma_sup_scan_with(
        chi,
        spec,
        w_grid,
        &YGrid::Points(y_grid.to_vec()),
        table,
        spec.t_half_width(),
        &ScanOptions::default(),
    )
}

struct RunningMax {
    best: Vec<f64>,
    count: Vec<usize>,
}

impl Observer<f64> for RunningMax {
    #[inline(always)]
    fn observe(&mut self, i: usize, sums: &[f64]) -> bool {
        for (l, &s) in sums.iter().enumerate() {
            if s > self.best[l] {
                self.best[l] = s;
                self.count[l] = i + 1;
            }
        }
        true
    }
}

/// Best pair for one `(t, w)`.
#[derive(Clone, Copy)]
struct PairBest {
    value: f64,
    t: f64,
    y: u64,
}

/// Lemma scan with an explicit `t` window `[-half_width, half_width]`, a
/// general `y` grid and scan options. [`lemma_sup_scan`] uses `D^B`.
pub fn lemma_sup_scan_with(
    chi: &Character,
    spec: &SumSpec,
    w_grid: &[u64],
    y_grid: &YGrid,
    table: &PrimeTable,
    half_width: f64,
    opts: &ScanOptions,
) -> Result<LemmaScanReport> {
    spec.validate()?;
    if chi.is_principal() {
        return domain("the lemma scan excludes the principal character");
    }
    if chi.modulus() != spec.d {
        return domain("character modulus differs from D");
    }
    table.check_covers(spec.x)?;
    let (d, x) = (spec.d, spec.x);
    let in_range = |g: &u64| (d..=x).contains(g);
    let mut ws = w_grid.to_vec();
    ws.sort_unstable();
    ws.dedup();
    if ws.is_empty() || !ws.iter().all(in_range) {
        return domain(format!("w grid must be non-empty and inside [{d}, {x}]"));
    }
    let ys: Option<Vec<u64>> = match y_grid {
        YGrid::Points(p) => {
            let mut v = p.clone();
            v.sort_unstable();
            v.dedup();
            if v.is_empty() || !v.iter().all(in_range) {
                return domain(format!("y grid must be non-empty and inside [{d}, {x}]"));
            }
            if v.last() < ws.first() {
                return domain("no admissible pair with y ≥ w");
            }
            Some(v)
        }
        YGrid::AllPrimes => {
            if ws != [d] {
                return domain("the all-primes y grid requires w = D");
            }
            None
        }
    };

    let range = table.index_range(d, x);
    let count_of = |g: u64| table.count_upto(g) - range.start;
    let unit = unit_terms(chi, table, range.clone());
    let logs = &table.log_p()[range.clone()];
    let primes = &table.primes()[range.clone()];
    let grid = TGrid::new(half_width, super::t_spacing(x, opts.spacing_divisor));
    let points = grid.points();

    // best[w index][grid index]
    let mut per_w: Vec<Vec<Option<PairBest>>> = vec![vec![None; points.len()]; ws.len()];
    match &ys {
        Some(ys) => {
            let mut counts: Vec<usize> = ws.iter().chain(ys).map(|&g| count_of(g)).filter(|&c| c > 0).collect();
            counts.sort_unstable();
            counts.dedup();
            let top = counts.last().copied().unwrap_or(0);
            let kernel = RealPartKernel { coeff: &unit[..top], logs: &logs[..top] };
            let chunks = scan(&kernel, &grid, |c: &Chunk| Checkpoints::new(&counts, c.count));
            let prefix = |obs: &Checkpoints, g: u64, l: usize| -> f64 {
                let c = count_of(g);
                if c == 0 {
                    0.0
                } else {
                    obs.values[counts.binary_search(&c).expect("checkpoint")][l]
                }
            };
            for (chunk, obs) in &chunks {
                for l in 0..chunk.count {
                    let j = chunk.first + l;
                    for (wi, &w) in ws.iter().enumerate() {
                        let pw = prefix(obs, w, l);
                        let mut best: Option<PairBest> = None;
                        for &y in ys.iter().filter(|&&y| y >= w) {
                            let v = prefix(obs, y, l) - pw;
                            if best.is_none_or(|b| better(v, y, b.value, b.y)) {
                                best = Some(PairBest { value: v, t: points[j], y });
                            }
                        }
                        per_w[wi][j] = best;
                    }
                }
            }
        }
        None => {
            let kernel = RealPartKernel { coeff: &unit, logs };
            let chunks = scan(&kernel, &grid, |c: &Chunk| RunningMax {
                best: vec![f64::NEG_INFINITY; c.count],
                count: vec![0; c.count],
            });
            for (chunk, obs) in &chunks {
                for l in 0..chunk.count {
                    let j = chunk.first + l;
                    if obs.count[l] > 0 {
                        per_w[0][j] = Some(PairBest { value: obs.best[l], t: points[j], y: primes[obs.count[l] - 1] });
                    }
                }
            }
        }
    }

    // Reduce over t for each w, then over w.
    let mut profile_best: Vec<Option<PairBest>> = Vec::with_capacity(ws.len());
    for row in &per_w {
        let mut best: Option<PairBest> = None;
        for cand in row.iter().flatten() {
            if best.is_none_or(|b| better(cand.value, (cand.t, cand.y), b.value, (b.t, b.y))) {
                best = Some(*cand);
            }
        }
        profile_best.push(best);
    }
    let mut arg: Option<(usize, PairBest)> = None;
    for (wi, b) in profile_best.iter().enumerate() {
        if let Some(b) = b {
            if arg.is_none_or(|(ai, a)| better(b.value, (b.t, ws[wi], b.y), a.value, (a.t, ws[ai], a.y))) {
                arg = Some((wi, *b));
            }
        }
    }
    let (arg_w, mut top) = match arg {
        Some(v) => v,
        None => return domain("no admissible (w, y) pair"),
    };

    let mut refined = false;
    if opts.refine && count_of(ws[arg_w]) < range.len() {
        let w = ws[arg_w];
        let objective = |t: f64| restricted_re_max(&unit, logs, primes, count_of(w), ys.as_deref(), t);
        let h = grid.spacing();
        let (lo, hi) = ((top.t - h).max(-half_width), (top.t + h).min(half_width));
        let (t_ref, _) = golden_max(|t| objective(t).0, lo, hi, 1e-9);
        let (value, y) = objective(t_ref);
        if let Some(y) = y.filter(|_| value > top.value + TIE_RTOL * top.value.abs().max(f64::MIN_POSITIVE)) {
            top = PairBest { value, t: t_ref, y };
            profile_best[arg_w] = Some(top);
            refined = true;
        }
    }

    let ones = CoefficientVector::ones(table, d, x)?;
    let point = |w: u64, b: &PairBest| -> Result<LemmaPoint> {
        let s = char_prime_sum(chi, &ones, w, b.y, Complex64::new(1.0, b.t), table)?;
        Ok(LemmaPoint { w, y: b.y, t: b.t, sigma: 1.0, re_value: b.value, abs_value: s.norm() })
    };
    let profile = ws
        .iter()
        .zip(&profile_best)
        .filter_map(|(&w, b)| b.as_ref().map(|b| point(w, b)))
        .collect::<Result<Vec<_>>>()?;
    Ok(LemmaScanReport {
        modulus: d,
        character_index: chi.index(),
        x,
        b_exponent: spec.b_exponent,
        t_half_width: half_width,
        t_spacing: grid.spacing(),
        t_points: points.len(),
        max_value: top.value,
        refined,
        witness: point(ws[arg_w], &top)?,
        profile,
    })
}

/// `max_y Re Σ_{w<p≤y} χ(p) p^{-1-it}` for `y` in `ys` (or every prime), by
/// direct summation from the prime after `w`.
fn restricted_re_max(
    unit: &[Complex64],
    logs: &[f64],
    primes: &[u64],
    start: usize,
    ys: Option<&[u64]>,
    t: f64,
) -> (f64, Option<u64>) {
    let mut acc = NeumaierSum::new();
    let mut best = (f64::NEG_INFINITY, None);
    let mut next_y = 0;
    let end = match ys {
        Some(ys) => primes.partition_point(|&p| p <= *ys.last().expect("non-empty")),
        None => primes.len(),
    };
    for i in start..end {
        let (s, c) = (-t * logs[i]).sin_cos();
        let u = unit[i];
        acc.add(u.re * c - u.im * s);
        let v = acc.value();
        match ys {
            None => {
                if v > best.0 {
                    best = (v, Some(primes[i]));
                }
            }
            Some(ys) => {
                let upto = if i + 1 < primes.len() { primes[i + 1] } else { u64::MAX };
                while next_y < ys.len() && ys[next_y] < upto {
                    if ys[next_y] >= primes[i] && v > best.0 {
                        best = (v, Some(ys[next_y]));
                    }
                    next_y += 1;
                }
            }
        }
    }
    best
}
