use super::gram::GramMatrix;
use num_complex::Complex64;
use serde::Serialize;

/// Phases of the four parts: `1, -1, i, -i`.
pub const SPLIT_PHASES: [Complex64; 4] = [
    Complex64::new(1.0, 0.0),
    Complex64::new(-1.0, 0.0),
    Complex64::new(0.0, 1.0),
    Complex64::new(0.0, -1.0),
];

/// `b = Σ_r SPLIT_PHASES[r] · parts[r]` with every part real and nonnegative.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FourWaySplit {
    pub parts: [Vec<f64>; 4],
}

impl FourWaySplit {
    pub fn reconstruct(&self) -> Vec<Complex64> {
        let n = self.parts[0].len();
        (0..n)
            .map(|j| {
                // real and imaginary parts recombined without rounding
                Complex64::new(self.parts[0][j] - self.parts[1][j], self.parts[2][j] - self.parts[3][j])
            })
            .collect()
    }
}

pub fn four_way_split(b: &[Complex64]) -> FourWaySplit {
    FourWaySplit {
        parts: [
            b.iter().map(|v| v.re.max(0.0)).collect(),
            b.iter().map(|v| (-v.re).max(0.0)).collect(),
            b.iter().map(|v| v.im.max(0.0)).collect(),
            b.iter().map(|v| (-v.im).max(0.0)).collect(),
        ],
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FourWayBound {
    /// `b·M·b`.
    pub form: f64,
    /// `v·M·v` for each nonnegative part.
    pub part_forms: [f64; 4],
    /// `4 Σ_r v_r·M·v_r`.
    pub split_bound: f64,
    /// `(L + (k-1)c)‖v_r‖²` for each part.
    pub part_bounds: [f64; 4],
    /// `4(L + (k-1)c)‖b‖²`.
    pub constant_bound: f64,
    /// Each part obeys its real-coefficient bound up to `slack`.
    pub parts_within_real_bound: bool,
    pub holds: bool,
}

/// Evaluates the chain `b·M·b ≤ 4 Σ_r v_r·M·v_r ≤ 4(L + (k-1)c)‖b‖²`.
pub fn four_way_bound(m: &GramMatrix, b: &[Complex64], l: f64, c1: f64, slack: f64) -> FourWayBound {
    let split = four_way_split(b);
    let form = m.quadratic_form(b);
    let k = m.k() as f64;
    let delta = l + (k - 1.0) * c1;
    let mut part_forms = [0.0; 4];
    let mut part_bounds = [0.0; 4];
    for (r, part) in split.parts.iter().enumerate() {
        part_forms[r] = m.expanded_real_form(part);
        part_bounds[r] = delta * part.iter().map(|v| v * v).sum::<f64>();
    }
    let split_bound = 4.0 * part_forms.iter().sum::<f64>();
    let norm_sq: f64 = b.iter().map(|v| v.norm_sqr()).sum();
    let constant_bound = 4.0 * delta * norm_sq;
    let parts_within_real_bound = part_forms.iter().zip(&part_bounds).all(|(f, g)| *f <= g + slack);
    let holds = form <= split_bound + slack && form <= constant_bound + slack;
    FourWayBound { form, part_forms, split_bound, part_bounds, constant_bound, parts_within_real_bound, holds }
}
