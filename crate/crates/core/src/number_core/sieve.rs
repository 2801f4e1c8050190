use super::summation::NeumaierSum;
use crate::error::{domain, Error, Result};
use std::ops::Range;

/// Largest sieve limit accepted by [`sieve_primes`].
pub const MAX_SIEVE_LIMIT: u64 = 100_000_000;
/// Limits above this are sieved segment by segment.
pub const SEGMENTED_THRESHOLD: u64 = 10_000_000;

const SEGMENT_LEN: u64 = 1 << 18;

/// Primes up to `limit` with their logarithms and compensated prefix sums of
/// reciprocals. Immutable after construction.
#[derive(Clone, Debug)]
pub struct PrimeTable {
    limit: u64,
    primes: Vec<u64>,
    log_p: Vec<f64>,
    recip_prefix: Vec<f64>,
}

impl PrimeTable {
    fn from_primes(limit: u64, primes: Vec<u64>) -> Self {
        let log_p = primes.iter().map(|&p| (p as f64).ln()).collect();
        let mut acc = NeumaierSum::new();
        let recip_prefix = primes
            .iter()
            .map(|&p| {
                acc.add(1.0 / p as f64);
                acc.value()
            })
            .collect();
        Self { limit, primes, log_p, recip_prefix }
    }

    pub fn limit(&self) -> u64 {
        self.limit
    }

    pub fn primes(&self) -> &[u64] {
        &self.primes
    }

    pub fn log_p(&self) -> &[f64] {
        &self.log_p
    }

    /// `recip_prefix()[i] = Σ_{j ≤ i} 1/primes[j]`.
    pub fn recip_prefix(&self) -> &[f64] {
        &self.recip_prefix
    }

    pub fn len(&self) -> usize {
        self.primes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.primes.is_empty()
    }

    /// Number of primes `≤ n`.
    pub fn count_upto(&self, n: u64) -> usize {
        self.primes.partition_point(|&p| p <= n)
    }

    /// Index range of the primes `p` with `lo < p ≤ hi`.
    pub fn index_range(&self, lo: u64, hi: u64) -> Range<usize> {
        let start = self.count_upto(lo);
        start..self.count_upto(hi).max(start)
    }

    /// `Σ_{lo < p ≤ hi} 1/p` as a difference of prefix sums.
    pub fn recip_sum_by_prefix(&self, lo: u64, hi: u64) -> f64 {
        let r = self.index_range(lo, hi);
        let at = |i: usize| if i == 0 { 0.0 } else { self.recip_prefix[i - 1] };
        at(r.end) - at(r.start)
    }

    pub(crate) fn check_covers(&self, x: u64) -> Result<()> {
        if x > self.limit {
            return Err(Error::Range(format!(
                "x = {x} exceeds the prime table limit {}",
                self.limit
            )));
        }
        Ok(())
    }
}

/// Sieve of Eratosthenes up to `limit`, segmented above [`SEGMENTED_THRESHOLD`].
pub fn sieve_primes(limit: u64) -> Result<PrimeTable> {
    if !(2..=MAX_SIEVE_LIMIT).contains(&limit) {
        return Err(Error::Range(format!(
            "sieve limit {limit} outside [2, {MAX_SIEVE_LIMIT}]"
        )));
    }
    let primes = if limit <= SEGMENTED_THRESHOLD {
        simple_sieve(limit)
    } else {
        segmented_sieve(limit)
    };
    Ok(PrimeTable::from_primes(limit, primes))
}

/// Odd-only sieve.
fn simple_sieve(limit: u64) -> Vec<u64> {
    if limit < 2 {
        return Vec::new();
    }
    // index i represents 2i+1
    let n = ((limit - 1) / 2 + 1) as usize;
    let mut composite = vec![false; n];
    composite[0] = true;
    let mut i = 1usize;
    while {
        let p = 2 * i as u64 + 1;
        p * p <= limit
    } {
        if !composite[i] {
            let p = 2 * i + 1;
            let mut j = (p * p) / 2;
            while j < n {
                composite[j] = true;
                j += p;
            }
        }
        i += 1;
    }
    let mut primes = Vec::with_capacity(estimate_count(limit));
    primes.push(2);
    primes.extend(
        composite
            .iter()
            .enumerate()
            .filter(|&(_, &c)| !c)
            .map(|(i, _)| 2 * i as u64 + 1),
    );
    primes
}

pub(crate) fn segmented_sieve(limit: u64) -> Vec<u64> {
    let root = (limit as f64).sqrt() as u64 + 1;
    let base = simple_sieve(root);
    let mut primes = Vec::with_capacity(estimate_count(limit));
    let mut seg = vec![false; SEGMENT_LEN as usize];
    let mut lo = 2u64;
    while lo <= limit {
        let hi = (lo + SEGMENT_LEN - 1).min(limit);
        let len = (hi - lo + 1) as usize;
        seg[..len].fill(false);
        for &p in &base {
            if p * p > hi {
                break;
            }
            let mut m = (p * p).max(lo.div_ceil(p) * p);
            while m <= hi {
                seg[(m - lo) as usize] = true;
                m += p;
            }
        }
        primes.extend((0..len).filter(|&i| !seg[i]).map(|i| lo + i as u64));
        lo = hi + 1;
    }
    primes
}

fn estimate_count(limit: u64) -> usize {
    let x = limit.max(3) as f64;
    (1.26 * x / x.ln()) as usize + 16
}

/// `L = Σ_{D < p ≤ x} 1/p`, summed in ascending order with compensation.
pub fn sum_reciprocal_primes(d: u64, x: u64, table: &PrimeTable) -> Result<f64> {
    if d == 0 {
        return domain("modulus D must be at least 1");
    }
    if d > x {
        return domain(format!("D = {d} exceeds x = {x}"));
    }
    table.check_covers(x)?;
    let mut acc = NeumaierSum::new();
    for &p in &table.primes[table.index_range(d, x)] {
        acc.add(1.0 / p as f64);
    }
    Ok(acc.value())
}
