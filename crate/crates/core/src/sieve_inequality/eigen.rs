use super::gram::GramMatrix;
use crate::error::{domain, Result};
use crate::number_core::{ComplexSum, NeumaierSum};
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::Serialize;

pub const POWER_MAX_ITERATIONS: usize = 100_000;
pub const DEFAULT_EIGEN_SEED: u64 = 0x5eed;
/// Stop once `‖Mv - λv‖ ≤ RESIDUAL_RTOL · trace(M)`.
pub const RESIDUAL_RTOL: f64 = 1e-10;
const HERMITIAN_TOL: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EigenPair {
    pub lambda: f64,
    /// Unit vector; its largest component is real and positive.
    pub vector: Vec<Complex64>,
    pub iterations: usize,
    pub residual: f64,
    pub converged: bool,
}

/// Largest eigenvalue of a Hermitian positive semidefinite matrix.
pub fn top_eigenpair(m: &GramMatrix) -> Result<EigenPair> {
    top_eigenpair_seeded(m, DEFAULT_EIGEN_SEED)
}

pub fn top_eigenpair_seeded(m: &GramMatrix, seed: u64) -> Result<EigenPair> {
    let scale = m.data().iter().fold(1.0f64, |acc, v| acc.max(v.norm()));
    let defect = m.hermitian_defect();
    if defect > HERMITIAN_TOL * scale {
        return domain(format!("matrix is not Hermitian (defect {defect:e})"));
    }
    if m.k() == 0 {
        return domain("empty matrix");
    }
    if m.k() == 1 {
        return Ok(EigenPair {
            lambda: m.get(0, 0).re,
            vector: vec![Complex64::new(1.0, 0.0)],
            iterations: 0,
            residual: 0.0,
            converged: true,
        });
    }
    Ok(power_iteration(|v| m.mul_vec(v), m.k(), m.trace(), seed))
}

pub(crate) fn norm(v: &[Complex64]) -> f64 {
    let mut acc = NeumaierSum::new();
    for x in v {
        acc.add(x.norm_sqr());
    }
    acc.value().sqrt()
}

pub(crate) fn inner(u: &[Complex64], v: &[Complex64]) -> Complex64 {
    let mut acc = ComplexSum::new();
    for (a, b) in u.iter().zip(v) {
        acc.add(a.conj() * b);
    }
    acc.value()
}

pub(crate) fn random_unit(n: usize, rng: &mut ChaCha8Rng) -> Vec<Complex64> {
    loop {
        let v: Vec<Complex64> = (0..n)
            .map(|_| Complex64::new(StandardNormal.sample(rng), StandardNormal.sample(rng)))
            .collect();
        let r = norm(&v);
        if r > 0.0 {
            return v.into_iter().map(|x| x / r).collect();
        }
    }
}

/// Rotates `v` so its largest component (first on ties) is real positive.
pub(crate) fn fix_phase(v: &mut [Complex64]) {
    let mut best = 0;
    for (i, x) in v.iter().enumerate() {
        if x.norm() > v[best].norm() {
            best = i;
        }
    }
    let r = v[best].norm();
    if r > 0.0 {
        let rot = v[best].conj() / r;
        for x in v.iter_mut() {
            *x *= rot;
        }
    }
}

/// Power iteration for a PSD operator given by `apply`.
pub(crate) fn power_iteration<F>(apply: F, n: usize, trace: f64, seed: u64) -> EigenPair
where
    F: Fn(&[Complex64]) -> Vec<Complex64>,
{
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut v = random_unit(n, &mut rng);
    let tol = RESIDUAL_RTOL * trace.abs();
    let mut lambda = 0.0;
    let mut residual = f64::INFINITY;
    let mut iterations = 0;
    while iterations < POWER_MAX_ITERATIONS {
        iterations += 1;
        let w = apply(&v);
        lambda = inner(&v, &w).re;
        let r: Vec<Complex64> = w.iter().zip(&v).map(|(a, b)| a - lambda * b).collect();
        residual = norm(&r);
        let wn = norm(&w);
        if residual <= tol || wn == 0.0 {
            break;
        }
        v = w.into_iter().map(|x| x / wn).collect();
    }
    fix_phase(&mut v);
    EigenPair { lambda, vector: v, iterations, residual, converged: residual <= tol }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Cyclic Jacobi rotations on a real symmetric matrix; returns eigenvalues.
    fn jacobi_eigenvalues(mut a: Vec<Vec<f64>>) -> Vec<f64> {
        let n = a.len();
        for _sweep in 0..100 {
            let off: f64 = (0..n).flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j))).map(|(i, j)| a[i][j] * a[i][j]).sum();
            if off < 1e-30 {
                break;
            }
            for p in 0..n {
                for q in p + 1..n {
                    if a[p][q].abs() < 1e-300 {
                        continue;
                    }
                    let theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
                    let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                    let t = if theta == 0.0 { 1.0 } else { t };
                    let c = 1.0 / (t * t + 1.0).sqrt();
                    let s = t * c;
                    for k in 0..n {
                        let (akp, akq) = (a[k][p], a[k][q]);
                        a[k][p] = c * akp - s * akq;
                        a[k][q] = s * akp + c * akq;
                    }
                    for k in 0..n {
                        let (apk, aqk) = (a[p][k], a[q][k]);
                        a[p][k] = c * apk - s * aqk;
                        a[q][k] = s * apk + c * aqk;
                    }
                }
            }
        }
        (0..n).map(|i| a[i][i]).collect()
    }

    fn random_psd(k: usize, seed: u64) -> GramMatrix {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let rows: Vec<Vec<Complex64>> = (0..k).map(|_| random_unit(2 * k, &mut rng)).collect();
        let mut data = vec![Complex64::new(0.0, 0.0); k * k];
        for j in 0..k {
            for l in 0..k {
                data[j * k + l] = rows[j].iter().zip(&rows[l]).map(|(a, b)| a * b.conj()).sum();
            }
        }
        // force exact symmetry
        for j in 0..k {
            data[j * k + j].im = 0.0;
            for l in 0..j {
                data[j * k + l] = data[l * k + j].conj();
            }
        }
        GramMatrix::from_rows(k, data)
    }

    #[test]
    fn single_entry() {
        let m = GramMatrix::from_rows(1, vec![Complex64::new(0.7, 0.0)]);
        let e = top_eigenpair(&m).unwrap();
        assert_eq!(e.lambda, 0.7);
        assert_eq!(e.vector, vec![Complex64::new(1.0, 0.0)]);
    }

    #[test]
    fn diagonal_matrix() {
        let z = Complex64::new(0.0, 0.0);
        let m = GramMatrix::from_rows(2, vec![Complex64::new(1.0, 0.0), z, z, Complex64::new(4.0, 0.0)]);
        let e = top_eigenpair(&m).unwrap();
        assert!((e.lambda - 4.0).abs() < 1e-12);
        assert!(e.vector[0].norm() < 1e-6);
        assert!((e.vector[1] - Complex64::new(1.0, 0.0)).norm() < 1e-9);
    }

    #[test]
    fn agrees_with_jacobi_oracle() {
        for seed in 0..10 {
            let m = random_psd(6, seed);
            // real symmetric embedding [[A, -B], [B, A]] of M = A + iB
            let n = 12;
            let mut e = vec![vec![0.0; n]; n];
            for j in 0..6 {
                for l in 0..6 {
                    let v = m.get(j, l);
                    e[j][l] = v.re;
                    e[j + 6][l + 6] = v.re;
                    e[j][l + 6] = -v.im;
                    e[j + 6][l] = v.im;
                }
            }
            let oracle = jacobi_eigenvalues(e).into_iter().fold(f64::NEG_INFINITY, f64::max);
            let got = top_eigenpair_seeded(&m, seed).unwrap();
            assert!(got.converged);
            assert!((got.lambda - oracle).abs() <= 1e-8 * oracle, "seed {seed}: {} vs {oracle}", got.lambda);
            assert!((norm(&got.vector) - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn rejects_non_hermitian() {
        let m = GramMatrix::from_rows(
            2,
            vec![Complex64::new(1.0, 0.0), Complex64::new(0.5, 0.5), Complex64::new(0.5, 0.5), Complex64::new(1.0, 0.0)],
        );
        assert!(top_eigenpair(&m).is_err());
    }

    #[test]
    fn seeded_runs_repeat() {
        let m = random_psd(5, 42);
        assert_eq!(top_eigenpair_seeded(&m, 3).unwrap(), top_eigenpair_seeded(&m, 3).unwrap());
    }
}
