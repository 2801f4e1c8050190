use crate::characters::Character;
use crate::error::{domain, Result};
use crate::euler_sums::{char_prime_sum, lemma_sup_scan_with, CoefficientVector, ScanOptions, SumSpec, YGrid};
use crate::number_core::PrimeTable;
use num_complex::Complex64;
use serde::Serialize;

/// `Re Σ_{D<p≤y} χ_j χ̄_ℓ(p) p^{-1-i(t_j-t_ℓ)}`; `y` above `x` is clipped.
pub fn cross_term(
    chi_j: &Character,
    chi_l: &Character,
    t_j: f64,
    t_l: f64,
    y: u64,
    spec: &SumSpec,
    table: &PrimeTable,
) -> Result<f64> {
    spec.validate()?;
    if chi_j == chi_l {
        return domain("cross terms need two different characters");
    }
    let psi = chi_j.product(&chi_l.conjugate())?;
    if psi.modulus() != spec.d {
        return domain("character modulus differs from D");
    }
    let y = y.min(spec.x);
    if y <= spec.d {
        return Ok(0.0);
    }
    let ones = CoefficientVector::ones(table, spec.d, spec.x)?;
    Ok(char_prime_sum(&psi, &ones, spec.d, y, Complex64::new(1.0, t_j - t_l), table)?.re)
}

/// Largest cross term found for one product character `χ_j χ̄_ℓ`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CrossWitness {
    /// Indices (in the character group) of the first ordered pair giving the product.
    pub j_index: usize,
    pub l_index: usize,
    pub product_index: usize,
    pub delta_t: f64,
    pub y: u64,
    pub value: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct C1Estimate {
    /// `max(0, largest cross term)`.
    pub c1: f64,
    /// Largest cross term before clamping; `None` when no prime lies in `(D, x]`.
    pub raw_max: Option<f64>,
    /// Scanned `t_j - t_ℓ` range is `[-2D^B, 2D^B]`.
    pub delta_t_half_width: f64,
    pub t_spacing: f64,
    pub witness: Option<CrossWitness>,
    /// One entry per distinct product character, ascending product index.
    pub products: Vec<CrossWitness>,
}

/// Empirical `ĉ₁`: the largest cross term over ordered pairs of distinct
/// characters, every `y ∈ (D, x]` and `|t_j - t_ℓ| ≤ 2D^B`.
pub fn estimate_c1(spec: &SumSpec, characters: &[Character], table: &PrimeTable) -> Result<C1Estimate> {
    estimate_c1_with(spec, characters, table, &ScanOptions::default())
}

pub fn estimate_c1_with(
    spec: &SumSpec,
    characters: &[Character],
    table: &PrimeTable,
    opts: &ScanOptions,
) -> Result<C1Estimate> {
    spec.validate()?;
    table.check_covers(spec.x)?;
    if characters.len() < 2 {
        return domain("estimating c1 needs at least two characters");
    }
    for (i, a) in characters.iter().enumerate() {
        if a.modulus() != spec.d {
            return domain("character modulus differs from D");
        }
        if characters[..i].contains(a) {
            return domain(format!("character {} listed twice", a.index()));
        }
    }
    let half = 2.0 * spec.t_half_width();
    let spacing = crate::euler_sums::t_spacing(spec.x, opts.spacing_divisor);

    // distinct products, each tagged with its first ordered pair
    let mut products: Vec<(Character, usize, usize)> = Vec::new();
    for a in characters {
        for b in characters {
            if a == b {
                continue;
            }
            let psi = a.product(&b.conjugate())?;
            if !products.iter().any(|(p, _, _)| *p == psi) {
                products.push((psi, a.index(), b.index()));
            }
        }
    }
    products.sort_by_key(|(p, _, _)| p.index());

    if table.index_range(spec.d, spec.x).is_empty() {
        return Ok(C1Estimate {
            c1: 0.0,
            raw_max: None,
            delta_t_half_width: half,
            t_spacing: spacing,
            witness: None,
            products: Vec::new(),
        });
    }

    let mut found = Vec::with_capacity(products.len());
    for (psi, j, l) in &products {
        let r = lemma_sup_scan_with(psi, spec, &[spec.d], &YGrid::AllPrimes, table, half, opts)?;
        found.push(CrossWitness {
            j_index: *j,
            l_index: *l,
            product_index: psi.index(),
            delta_t: r.witness.t,
            y: r.witness.y,
            value: r.max_value,
        });
    }
    let mut witness: Option<&CrossWitness> = None;
    for w in &found {
        if witness.is_none_or(|b| w.value > b.value) {
            witness = Some(w);
        }
    }
    let raw = witness.map(|w| w.value);
    Ok(C1Estimate {
        c1: raw.unwrap_or(0.0).max(0.0),
        raw_max: raw,
        delta_t_half_width: half,
        t_spacing: spacing,
        witness: witness.cloned(),
        products: found,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::characters::character_group;
    use crate::euler_sums::lemma_sup_scan;
    use crate::number_core::sieve_primes;

    #[test]
    fn cross_term_quadratic_example() {
        let table = sieve_primes(100).unwrap();
        let spec = SumSpec::new(5, 100, 1.0).unwrap();
        let g = character_group(5).unwrap();
        // g[1] times conj(g[3]) = g[1]^2 = quadratic character
        let v = cross_term(&g[1], &g[3], 0.0, 0.0, 20, &spec, &table).unwrap();
        // primes 7, 11, 13, 17, 19 with Legendre symbols -1, 1, -1, -1, 1
        let want = -1.0 / 7.0 + 1.0 / 11.0 - 1.0 / 13.0 - 1.0 / 17.0 + 1.0 / 19.0;
        assert!((v - want).abs() < 1e-15);
    }

    #[test]
    fn cross_term_edge_cases() {
        let table = sieve_primes(100).unwrap();
        let spec = SumSpec::new(5, 100, 1.0).unwrap();
        let g = character_group(5).unwrap();
        assert_eq!(cross_term(&g[1], &g[2], 0.3, 0.1, 6, &spec, &table).unwrap(), 0.0);
        assert!(cross_term(&g[1], &g[1], 0.0, 0.0, 50, &spec, &table).is_err());
        let a = cross_term(&g[1], &g[2], 0.7, -1.1, 80, &spec, &table).unwrap();
        let b = cross_term(&g[2], &g[1], -0.7, 1.1, 80, &spec, &table).unwrap();
        assert!((a - b).abs() < 1e-15);
    }

    #[test]
    fn needs_two_characters() {
        let table = sieve_primes(100).unwrap();
        let spec = SumSpec::new(5, 100, 1.0).unwrap();
        let g = character_group(5).unwrap();
        assert!(estimate_c1(&spec, &g[1..2], &table).is_err());
        assert!(estimate_c1(&spec, &[g[1].clone(), g[1].clone()], &table).is_err());
    }

    #[test]
    fn matches_lemma_scan_over_products() {
        let table = sieve_primes(10_000).unwrap();
        let spec = SumSpec::new(5, 10_000, 1.0).unwrap();
        let g = character_group(5).unwrap();
        let est = estimate_c1(&spec, &g[1..], &table).unwrap();
        // the products of distinct non-principal characters mod 5 are the non-principal characters
        assert_eq!(est.products.iter().map(|w| w.product_index).collect::<Vec<_>>(), vec![1, 2, 3]);
        let mut oracle = f64::NEG_INFINITY;
        for psi in &g[1..] {
            let ys: Vec<u64> = table.primes().iter().copied().filter(|&p| p > 5 && p <= 10_000).collect();
            let r = lemma_sup_scan_with(psi, &spec, &[5], &YGrid::Points(ys), &table, 10.0, &ScanOptions::default()).unwrap();
            oracle = oracle.max(r.max_value);
        }
        assert!((est.c1 - oracle.max(0.0)).abs() < 1e-12);
        let w = est.witness.clone().unwrap();
        let direct = cross_term(&g[w.j_index], &g[w.l_index], w.delta_t, 0.0, w.y, &spec, &table).unwrap();
        assert!((direct - w.value).abs() < 1e-10);
        // the D^B window is a subset of the 2D^B window
        let narrow = lemma_sup_scan(&g[2], &spec, &[5], &[10_000], &table).unwrap();
        assert!(est.products[1].value >= narrow.max_value - 1e-12);
    }

    #[test]
    fn finer_grid_never_lower() {
        let table = sieve_primes(3000).unwrap();
        let spec = SumSpec::new(7, 3000, 1.0).unwrap();
        let g = character_group(7).unwrap();
        let coarse = ScanOptions { spacing_divisor: 4.0, refine: false, ..ScanOptions::default() };
        let fine = ScanOptions { spacing_divisor: 8.0, refine: false, ..ScanOptions::default() };
        let a = estimate_c1_with(&spec, &g[1..4], &table, &coarse).unwrap();
        let b = estimate_c1_with(&spec, &g[1..4], &table, &fine).unwrap();
        // spacing halves, so the fine grid contains the coarse one
        assert!(b.c1 >= a.c1 - 1e-12);
    }
}
