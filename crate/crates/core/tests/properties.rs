use large_sieve::characters::non_principal_characters;
use large_sieve::cli::commands::random_fixture;
use large_sieve::euler_sums::{CoefficientVector, SumSpec};
use large_sieve::number_core::{sieve_primes, sum_reciprocal_primes, PrimeTable};
use large_sieve::sieve_inequality::{
    build_delta, dual_quotient, estimate_c1, gram_matrix, top_eigenpair, verify_theorem, C1Estimate,
};
use large_sieve::Complex64;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::sync::OnceLock;

const X: u64 = 3000;

fn table() -> &'static PrimeTable {
    static T: OnceLock<PrimeTable> = OnceLock::new();
    T.get_or_init(|| sieve_primes(X).unwrap())
}

fn c1_for(d: u64) -> &'static C1Estimate {
    static C: OnceLock<Vec<(u64, C1Estimate)>> = OnceLock::new();
    let all = C.get_or_init(|| {
        [5u64, 7, 11]
            .iter()
            .map(|&d| (d, estimate_c1(&SumSpec::new(d, X, 1.0).unwrap(), &non_principal_characters(d).unwrap(), table()).unwrap()))
            .collect()
    });
    &all.iter().find(|(m, _)| *m == d).unwrap().1
}

fn modulus() -> impl Strategy<Value = u64> {
    prop::sample::select(vec![5u64, 7, 11])
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn real_bound_on_scanned_shifts(
        d in modulus(),
        picks in prop::collection::vec((any::<prop::sample::Index>(), any::<prop::sample::Index>()), 9),
        b in prop::collection::vec(0.0f64..1.0, 9),
    ) {
        let spec = SumSpec::new(d, X, 1.0).unwrap();
        let chars = non_principal_characters(d).unwrap();
        let k = chars.len();
        let est = c1_for(d);
        let h = est.t_spacing;
        let m_max = (spec.t_half_width() / h).ceil() as usize - 1;
        let shifts: Vec<f64> = picks[..k].iter().map(|(m, _)| (m.index(2 * m_max + 1) as f64 - m_max as f64) * h).collect();
        let span = (X - d) as usize;
        let cutoffs: Vec<u64> = picks[..k].iter().map(|(_, y)| d + 1 + y.index(span) as u64).collect();
        let m = gram_matrix(&build_delta(&chars, &shifts, &cutoffs, &spec, table()).unwrap());
        let b = &b[..k];
        let bc: Vec<Complex64> = b.iter().map(|&v| Complex64::new(v, 0.0)).collect();
        let l = sum_reciprocal_primes(d, X, table()).unwrap();
        let norm_sq: f64 = b.iter().map(|v| v * v).sum();
        let form = m.quadratic_form(&bc);
        prop_assert!((form - m.expanded_real_form(b)).abs() <= 1e-12);
        prop_assert!(form <= (l + (k as f64 - 1.0) * est.c1) * norm_sq + 1e-9);
    }

    #[test]
    fn dual_quotient_bounded_by_gram_lambda(
        k in 1usize..6,
        n in 1usize..60,
        seed in any::<u64>(),
        a in prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 60),
    ) {
        let delta = random_fixture(k, n, seed).unwrap();
        let lambda = top_eigenpair(&gram_matrix(&delta)).unwrap().lambda;
        let a: Vec<Complex64> = a[..n].iter().map(|&(re, im)| Complex64::new(re, im)).collect();
        prop_assume!(a.iter().any(|v| v.norm_sqr() > 0.0));
        let q = dual_quotient(&delta.to_dense(), &a);
        prop_assert!(q <= lambda * (1.0 + 1e-9), "{q} > {lambda}");
    }

    #[test]
    fn ratio_is_scale_invariant(seed in any::<u64>(), re in -3.0f64..3.0, im in -3.0f64..3.0) {
        let scale = Complex64::new(re, im);
        prop_assume!(scale.norm() > 1e-2);
        let d = 5;
        let spec = SumSpec::new(d, X, 1.0).unwrap();
        let chars = non_principal_characters(d).unwrap();
        let a = CoefficientVector::random_complex(table(), d, X, &mut ChaCha8Rng::seed_from_u64(seed)).unwrap();
        let c = 4.0 * c1_for(d).c1;
        let r1 = verify_theorem(&a, &chars, &spec, c, table()).unwrap();
        let r2 = verify_theorem(&a.scaled(scale), &chars, &spec, c, table()).unwrap();
        let s2 = scale.norm_sqr();
        prop_assert!((r2.lhs / s2 - r1.lhs).abs() <= 1e-12 * r1.lhs);
        prop_assert!((r2.rhs / s2 - r1.rhs).abs() <= 1e-12 * r1.rhs);
        prop_assert!((r2.ratio - r1.ratio).abs() <= 1e-12);
    }

    #[test]
    fn l_is_monotone_in_x(d in 1u64..50, x1 in 50u64..X, x2 in 50u64..X) {
        let (lo, hi) = (x1.min(x2), x1.max(x2));
        let l_lo = sum_reciprocal_primes(d, lo, table()).unwrap();
        let l_hi = sum_reciprocal_primes(d, hi, table()).unwrap();
        prop_assert!(l_lo <= l_hi);
    }
}

#[test]
fn rhs_l_term_grows_with_x() {
    let d = 7;
    let chars = non_principal_characters(d).unwrap();
    let mut last = 0.0;
    for x in [100, 400, 1000, 3000] {
        let spec = SumSpec::new(d, x, 1.0).unwrap();
        let a = CoefficientVector::ones(table(), d, x).unwrap();
        let r = verify_theorem(&a, &chars, &spec, 1.0, table()).unwrap();
        assert!(r.l >= last);
        last = r.l;
    }
}
