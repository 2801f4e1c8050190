//! Kahan–Babuška–Neumaier compensated summation.

use num_complex::Complex64;

/// Running Neumaier sum of `f64` values.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct NeumaierSum {
    sum: f64,
    comp: f64,
}

impl NeumaierSum {
    pub const fn new() -> Self {
        Self { sum: 0.0, comp: 0.0 }
    }

    #[inline(always)]
    pub fn add(&mut self, v: f64) {
        let t = self.sum + v;
        // Branch-free select keeps the lane loops vectorisable.
        let low = if self.sum.abs() >= v.abs() {
            (self.sum - t) + v
        } else {
            (v - t) + self.sum
        };
        self.comp += low;
        self.sum = t;
    }

    #[inline(always)]
    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

impl Extend<f64> for NeumaierSum {
    fn extend<I: IntoIterator<Item = f64>>(&mut self, iter: I) {
        for v in iter {
            self.add(v);
        }
    }
}

/// Component-wise Neumaier sum of complex values.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct ComplexSum {
    re: NeumaierSum,
    im: NeumaierSum,
}

impl ComplexSum {
    pub const fn new() -> Self {
        Self { re: NeumaierSum::new(), im: NeumaierSum::new() }
    }

    #[inline(always)]
    pub fn add(&mut self, v: Complex64) {
        self.re.add(v.re);
        self.im.add(v.im);
    }

    #[inline(always)]
    pub fn value(&self) -> Complex64 {
        Complex64::new(self.re.value(), self.im.value())
    }
}

impl Extend<Complex64> for ComplexSum {
    fn extend<I: IntoIterator<Item = Complex64>>(&mut self, iter: I) {
        for v in iter {
            self.add(v);
        }
    }
}

/// A scalar that has a compensated accumulator.
///
/// Lets the scan kernels run the same loop for real-part sums and full
/// complex sums.
pub trait Compensated: Copy + Default + Send + Sync {
    type Acc: Copy + Default + Send + Sync;
    fn accumulate(acc: &mut Self::Acc, v: Self);
    fn total(acc: &Self::Acc) -> Self;
}

impl Compensated for f64 {
    type Acc = NeumaierSum;
    #[inline(always)]
    fn accumulate(acc: &mut NeumaierSum, v: f64) {
        acc.add(v)
    }
    #[inline(always)]
    fn total(acc: &NeumaierSum) -> f64 {
        acc.value()
    }
}

impl Compensated for Complex64 {
    type Acc = ComplexSum;
    #[inline(always)]
    fn accumulate(acc: &mut ComplexSum, v: Complex64) {
        acc.add(v)
    }
    #[inline(always)]
    fn total(acc: &ComplexSum) -> Complex64 {
        acc.value()
    }
}

/// Compensated sum of complex values in the given order.
pub fn compensated_sum<I: IntoIterator<Item = Complex64>>(values: I) -> Complex64 {
    let mut acc = ComplexSum::new();
    acc.extend(values);
    acc.value()
}

/// Compensated sum of real values in the given order.
pub fn compensated_sum_real<I: IntoIterator<Item = f64>>(values: I) -> f64 {
    let mut acc = NeumaierSum::new();
    acc.extend(values);
    acc.value()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::seq::SliceRandom;
    use rand::{Rng, SeedableRng};

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn empty_is_zero() {
        assert_eq!(compensated_sum(std::iter::empty()), Complex64::new(0.0, 0.0));
    }

    #[test]
    fn keeps_tiny_term_after_cancellation() {
        assert_eq!(compensated_sum([c(1.0), c(-1.0), c(1e-16)]).re, 1e-16);
        // Naive left-to-right loses the tiny term in this order.
        let naive: f64 = [1.0, 1e-16, -1.0].iter().sum();
        assert_eq!(naive, 0.0);
        assert_eq!(compensated_sum([c(1.0), c(1e-16), c(-1.0)]).re, 1e-16);
    }

    #[test]
    fn million_tenths() {
        let s = compensated_sum(std::iter::repeat_n(Complex64::new(0.1, -0.1), 1_000_000));
        assert!((s.re - 1e5).abs() < 1e-9);
        assert!((s.im + 1e5).abs() < 1e-9);
    }

    #[test]
    fn permutation_invariance_on_random_data() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let mut v: Vec<Complex64> = (0..10_000)
            .map(|_| Complex64::new(rng.random_range(-1e3..1e3), rng.random_range(-1.0..1.0)))
            .collect();
        let a = compensated_sum(v.iter().copied());
        v.shuffle(&mut rng);
        let b = compensated_sum(v.iter().copied());
        assert!((a - b).norm() <= 1e-10 * a.norm().max(1.0));
    }

    proptest! {
        #[test]
        fn permuted_sum_agrees(mut v in proptest::collection::vec(-1e6f64..1e6, 0..200), seed in any::<u64>()) {
            let a = compensated_sum_real(v.iter().copied());
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            v.shuffle(&mut rng);
            let b = compensated_sum_real(v.iter().copied());
            let scale = v.iter().map(|x| x.abs()).fold(1.0, f64::max);
            prop_assert!((a - b).abs() <= 1e-10 * scale);
        }
    }
}
