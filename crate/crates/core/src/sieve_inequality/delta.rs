use crate::characters::Character;
use crate::error::{domain, Result};
use crate::euler_sums::SumSpec;
use crate::number_core::{ComplexSum, PrimeTable};
use num_complex::Complex64;

/// One row of the δ-matrix: character `χ_j`, shift `t_j` and cutoff `y_j`.
#[derive(Clone, Debug, PartialEq)]
pub struct DeltaRow {
    pub character: Character,
    pub shift: f64,
    pub cutoff: u64,
}

#[derive(Clone, Debug)]
enum Source {
    Euler { d: u64, x: u64, primes: Vec<u64>, logs: Vec<f64>, rows: Vec<DeltaRow> },
    Dense(Vec<Vec<Complex64>>),
}

/// `δ_{j,p} = χ_j(p) p^{-1/2 - i t_j}` for `D < p ≤ y_j`, zero otherwise.
///
/// Rows are kept as their defining triples; entries are produced on demand.
/// A dense variant exists for synthetic test fixtures.
#[derive(Clone, Debug)]
pub struct DeltaMatrix {
    source: Source,
}

/// Materialised entries, row major.
#[derive(Clone, Debug, PartialEq)]
pub struct DenseDelta {
    pub rows: Vec<Vec<Complex64>>,
}

impl DenseDelta {
    pub fn k(&self) -> usize {
        self.rows.len()
    }

    pub fn columns(&self) -> usize {
        self.rows.first().map_or(0, Vec::len)
    }

    /// `(Δa)_j = Σ_p a_p δ_{j,p}`.
    pub fn apply(&self, a: &[Complex64]) -> Vec<Complex64> {
        self.rows
            .iter()
            .map(|row| {
                let mut acc = ComplexSum::new();
                for (d, v) in row.iter().zip(a) {
                    acc.add(d * v);
                }
                acc.value()
            })
            .collect()
    }

    /// `(Δ^*b)_p = Σ_j conj(δ_{j,p}) b_j`.
    pub fn apply_adjoint(&self, b: &[Complex64]) -> Vec<Complex64> {
        (0..self.columns())
            .map(|p| {
                let mut acc = ComplexSum::new();
                for (row, v) in self.rows.iter().zip(b) {
                    acc.add(row[p].conj() * v);
                }
                acc.value()
            })
            .collect()
    }

    /// `Σ_j b_j δ_{j,p}` for every column.
    pub fn combine(&self, b: &[Complex64]) -> Vec<Complex64> {
        (0..self.columns())
            .map(|p| {
                let mut acc = ComplexSum::new();
                for (row, v) in self.rows.iter().zip(b) {
                    acc.add(row[p] * v);
                }
                acc.value()
            })
            .collect()
    }
}

impl DeltaMatrix {
    /// Synthetic fixture with arbitrary entries (no `p^{-1/2}` structure).
    pub fn from_dense(rows: Vec<Vec<Complex64>>) -> Result<Self> {
        if rows.is_empty() {
            return domain("δ-matrix needs at least one row");
        }
        let n = rows[0].len();
        if rows.iter().any(|r| r.len() != n) {
            return domain("rows of a dense δ-matrix must have equal length");
        }
        Ok(Self { source: Source::Dense(rows) })
    }

    pub fn k(&self) -> usize {
        match &self.source {
            Source::Euler { rows, .. } => rows.len(),
            Source::Dense(rows) => rows.len(),
        }
    }

    pub fn columns(&self) -> usize {
        match &self.source {
            Source::Euler { primes, .. } => primes.len(),
            Source::Dense(rows) => rows[0].len(),
        }
    }

    /// Defining rows; `None` for dense fixtures.
    pub fn rows(&self) -> Option<&[DeltaRow]> {
        match &self.source {
            Source::Euler { rows, .. } => Some(rows),
            Source::Dense(_) => None,
        }
    }

    /// Column primes `D < p ≤ x`; `None` for dense fixtures.
    pub fn column_primes(&self) -> Option<&[u64]> {
        match &self.source {
            Source::Euler { primes, .. } => Some(primes),
            Source::Dense(_) => None,
        }
    }

    pub(crate) fn column_logs(&self) -> Option<&[f64]> {
        match &self.source {
            Source::Euler { logs, .. } => Some(logs),
            Source::Dense(_) => None,
        }
    }

    pub fn modulus(&self) -> Option<u64> {
        match &self.source {
            Source::Euler { d, .. } => Some(*d),
            Source::Dense(_) => None,
        }
    }

    pub fn x(&self) -> Option<u64> {
        match &self.source {
            Source::Euler { x, .. } => Some(*x),
            Source::Dense(_) => None,
        }
    }

    pub fn entry(&self, j: usize, col: usize) -> Complex64 {
        match &self.source {
            Source::Euler { primes, logs, rows, .. } => {
                let row = &rows[j];
                let p = primes[col];
                if p > row.cutoff {
                    Complex64::new(0.0, 0.0)
                } else {
                    row.character.evaluate(p) * (Complex64::new(-0.5, -row.shift) * logs[col]).exp()
                }
            }
            Source::Dense(rows) => rows[j][col],
        }
    }

    pub fn to_dense(&self) -> DenseDelta {
        DenseDelta { rows: (0..self.k()).map(|j| (0..self.columns()).map(|c| self.entry(j, c)).collect()).collect() }
    }
}

/// Builds the δ-matrix for distinct characters mod `D`, shifts `|t_j| ≤ D^B`
/// and cutoffs `D < y_j ≤ x`.
pub fn build_delta(
    characters: &[Character],
    shifts: &[f64],
    cutoffs: &[u64],
    spec: &SumSpec,
    table: &PrimeTable,
) -> Result<DeltaMatrix> {
    for (i, a) in characters.iter().enumerate() {
        if characters[..i].contains(a) {
            return domain(format!("character {} listed twice; the rows need distinct characters", a.index()));
        }
    }
    build_delta_allowing_duplicates(characters, shifts, cutoffs, spec, table)
}

/// [`build_delta`] without the distinctness check. Test fixtures only.
pub fn build_delta_allowing_duplicates(
    characters: &[Character],
    shifts: &[f64],
    cutoffs: &[u64],
    spec: &SumSpec,
    table: &PrimeTable,
) -> Result<DeltaMatrix> {
    spec.validate()?;
    table.check_covers(spec.x)?;
    let k = characters.len();
    if k == 0 || shifts.len() != k || cutoffs.len() != k {
        return domain("need k ≥ 1 rows with one shift and one cutoff each");
    }
    let half = spec.t_half_width();
    let mut rows = Vec::with_capacity(k);
    for ((chi, &t), &y) in characters.iter().zip(shifts).zip(cutoffs) {
        if chi.modulus() != spec.d {
            return domain(format!("character modulus {} differs from D = {}", chi.modulus(), spec.d));
        }
        if !(t.abs() <= half) {
            return domain(format!("shift {t} outside |t| ≤ D^B = {half}"));
        }
        if !(spec.d < y && y <= spec.x) {
            return domain(format!("cutoff {y} outside ({}, {}]", spec.d, spec.x));
        }
        rows.push(DeltaRow { character: chi.clone(), shift: t, cutoff: y });
    }
    let range = table.index_range(spec.d, spec.x);
    Ok(DeltaMatrix {
        source: Source::Euler {
            d: spec.d,
            x: spec.x,
            primes: table.primes()[range.clone()].to_vec(),
            logs: table.log_p()[range].to_vec(),
            rows,
        },
    })
}
