use super::delta::{DeltaMatrix, DenseDelta};
use crate::number_core::{ComplexSum, NeumaierSum};
use num_complex::Complex64;
use rayon::prelude::*;

/// Hermitian `k×k` matrix `M_{jℓ} = Σ_p δ_{j,p} conj(δ_{ℓ,p})`, row major.
#[derive(Clone, Debug, PartialEq)]
pub struct GramMatrix {
    k: usize,
    data: Vec<Complex64>,
}

impl GramMatrix {
    /// Wraps row-major entries. Panics unless `data.len() == k*k`.
    pub fn from_rows(k: usize, data: Vec<Complex64>) -> Self {
        assert_eq!(data.len(), k * k, "Gram data must be k*k");
        Self { k, data }
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn get(&self, j: usize, l: usize) -> Complex64 {
        self.data[j * self.k + l]
    }

    pub fn data(&self) -> &[Complex64] {
        &self.data
    }

    pub fn diagonal(&self) -> Vec<f64> {
        (0..self.k).map(|j| self.get(j, j).re).collect()
    }

    pub fn trace(&self) -> f64 {
        self.diagonal().iter().sum()
    }

    /// Largest `|M_{jℓ} - conj(M_{ℓj})|`.
    pub fn hermitian_defect(&self) -> f64 {
        let mut worst = 0.0f64;
        for j in 0..self.k {
            for l in 0..self.k {
                worst = worst.max((self.get(j, l) - self.get(l, j).conj()).norm());
            }
        }
        worst
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermitian_defect() <= tol
    }

    /// `(Mv)_j = Σ_ℓ M_{jℓ} v_ℓ`.
    pub fn mul_vec(&self, v: &[Complex64]) -> Vec<Complex64> {
        (0..self.k)
            .map(|j| {
                let mut acc = ComplexSum::new();
                for (l, x) in v.iter().enumerate() {
                    acc.add(self.get(j, l) * x);
                }
                acc.value()
            })
            .collect()
    }

    /// `Σ_{j,ℓ} b_j conj(b_ℓ) M_{jℓ} = Σ_p |Σ_j b_j δ_{j,p}|²`.
    pub fn quadratic_form(&self, b: &[Complex64]) -> f64 {
        let mut acc = NeumaierSum::new();
        for j in 0..self.k {
            for l in 0..self.k {
                acc.add((b[j] * b[l].conj() * self.get(j, l)).re);
            }
        }
        acc.value()
    }

    /// `Σ_j b_j² M_{jj} + 2 Σ_{j<ℓ} b_j b_ℓ Re M_{jℓ}` for real `b`.
    pub fn expanded_real_form(&self, b: &[f64]) -> f64 {
        let mut acc = NeumaierSum::new();
        for j in 0..self.k {
            acc.add(b[j] * b[j] * self.get(j, j).re);
            for l in j + 1..self.k {
                acc.add(2.0 * b[j] * b[l] * self.get(j, l).re);
            }
        }
        acc.value()
    }

    /// Same matrix with the off-diagonal entries set to zero.
    pub fn zero_offdiag(&self) -> Self {
        let mut out = self.clone();
        for j in 0..self.k {
            for l in 0..self.k {
                if j != l {
                    out.data[j * self.k + l] = Complex64::new(0.0, 0.0);
                }
            }
        }
        out
    }

    pub fn offdiag_frobenius(&self) -> f64 {
        let mut acc = NeumaierSum::new();
        for j in 0..self.k {
            for l in 0..self.k {
                if j != l {
                    acc.add(self.get(j, l).norm_sqr());
                }
            }
        }
        acc.value().sqrt()
    }
}

/// Gram matrix of `Δ`.
///
/// Euler rows are summed directly from their `(χ, t, y)` triples:
/// `M_{jℓ} = Σ_{D<p≤min(y_j,y_ℓ)} χ_j χ̄_ℓ(p) p^{-1-i(t_j-t_ℓ)}`. Dense
/// fixtures go through [`gram_matrix_dense`].
pub fn gram_matrix(delta: &DeltaMatrix) -> GramMatrix {
    let (rows, primes, logs) = match (delta.rows(), delta.column_primes(), delta.column_logs()) {
        (Some(r), Some(p), Some(l)) => (r, p, l),
        _ => return gram_matrix_dense(&delta.to_dense()),
    };
    let k = rows.len();
    let values: Vec<Vec<Complex64>> = rows.iter().map(|r| r.character.values_at(primes)).collect();
    let counts: Vec<usize> = rows.iter().map(|r| primes.partition_point(|&p| p <= r.cutoff)).collect();
    let pairs: Vec<(usize, usize)> = (0..k).flat_map(|j| (j..k).map(move |l| (j, l))).collect();
    let upper: Vec<Complex64> = pairs
        .par_iter()
        .map(|&(j, l)| {
            let n = counts[j].min(counts[l]);
            if j == l {
                let mut acc = NeumaierSum::new();
                for &p in &primes[..n] {
                    acc.add(1.0 / p as f64);
                }
                return Complex64::new(acc.value(), 0.0);
            }
            let s = Complex64::new(-1.0, rows[l].shift - rows[j].shift);
            let mut acc = ComplexSum::new();
            for i in 0..n {
                acc.add(values[j][i] * values[l][i].conj() * (s * logs[i]).exp());
            }
            acc.value()
        })
        .collect();
    let mut data = vec![Complex64::new(0.0, 0.0); k * k];
    for (&(j, l), v) in pairs.iter().zip(upper) {
        data[j * k + l] = v;
        data[l * k + j] = v.conj();
    }
    GramMatrix { k, data }
}

/// Gram matrix by the double loop over materialised entries.
pub fn gram_matrix_dense(delta: &DenseDelta) -> GramMatrix {
    let k = delta.k();
    let mut data = vec![Complex64::new(0.0, 0.0); k * k];
    for j in 0..k {
        for l in 0..k {
            let mut acc = ComplexSum::new();
            for (u, v) in delta.rows[j].iter().zip(&delta.rows[l]) {
                acc.add(u * v.conj());
            }
            data[j * k + l] = acc.value();
        }
    }
    GramMatrix { k, data }
}
