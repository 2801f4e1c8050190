use crate::error::{domain, Result};

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

pub fn lcm(a: u64, b: u64) -> u64 {
    if a == 0 || b == 0 {
        0
    } else {
        a / gcd(a, b) * b
    }
}

#[inline]
pub fn mod_mul(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn mod_pow(mut base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut acc = 1u64;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mod_mul(acc, base, m);
        }
        base = mod_mul(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Canonical prime factorisation: distinct primes in ascending order.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Factorization {
    pub pairs: Vec<(u64, u32)>,
}

impl Factorization {
    /// Multiplies the factorisation back out.
    pub fn value(&self) -> u64 {
        self.pairs.iter().map(|&(p, e)| p.pow(e)).product()
    }

    pub fn primes(&self) -> impl Iterator<Item = u64> + '_ {
        self.pairs.iter().map(|&(p, _)| p)
    }
}

/// Trial-division factorisation of `n ≥ 1`. `n = 1` has no factors.
pub fn factorize(n: u64) -> Result<Factorization> {
    if n == 0 {
        return domain("cannot factorize 0");
    }
    let mut pairs = Vec::new();
    let mut m = n;
    let mut push = |p: u64, m: &mut u64| {
        let mut e = 0;
        while m.is_multiple_of(p) {
            *m /= p;
            e += 1;
        }
        if e > 0 {
            pairs.push((p, e));
        }
    };
    push(2, &mut m);
    let mut p = 3;
    while p * p <= m {
        push(p, &mut m);
        p += 2;
    }
    if m > 1 {
        pairs.push((m, 1));
    }
    Ok(Factorization { pairs })
}

/// Euler's totient.
pub fn totient(n: u64) -> Result<u64> {
    let f = factorize(n)?;
    Ok(f.pairs.iter().fold(n, |acc, &(p, _)| acc / p * (p - 1)))
}

/// Smallest generator of the multiplicative group modulo `q`.
///
/// `q` must be 2, 4 or an odd prime power; every other modulus has a
/// non-cyclic unit group.
pub fn primitive_root(q: u64) -> Result<u64> {
    match q {
        2 => return Ok(1),
        4 => return Ok(3),
        _ => {}
    }
    let f = factorize(q)?;
    if f.pairs.len() != 1 || f.pairs[0].0 == 2 {
        return domain(format!("unit group modulo {q} is not cyclic"));
    }
    let (p, e) = f.pairs[0];
    let order = p.pow(e - 1) * (p - 1);
    let order_primes: Vec<u64> = factorize(order)?.primes().collect();
    (2..q)
        .find(|&g| g % p != 0 && order_primes.iter().all(|&r| mod_pow(g, order / r, q) != 1))
        .ok_or_else(|| crate::Error::Domain(format!("no primitive root modulo {q}")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn brute_order(g: u64, q: u64) -> u64 {
        let mut v = g % q;
        let mut k = 1;
        while v != 1 {
            v = v * g % q;
            k += 1;
        }
        k
    }

    #[test]
    fn factorize_examples() {
        assert!(factorize(1).unwrap().pairs.is_empty());
        assert_eq!(factorize(12).unwrap().pairs, vec![(2, 2), (3, 1)]);
        let f = factorize(784).unwrap();
        assert_eq!(f.pairs, vec![(2, 4), (7, 2)]);
        assert_eq!(f.value(), 784);
        assert!(factorize(0).is_err());
    }

    #[test]
    fn primitive_root_examples() {
        assert_eq!(primitive_root(5).unwrap(), 2);
        assert_eq!(brute_order(2, 5), 4);
        assert_eq!(primitive_root(4).unwrap(), 3);
        assert_eq!(primitive_root(9).unwrap(), 2);
        assert_eq!(brute_order(2, 9), 6);
        assert_eq!(primitive_root(2).unwrap(), 1);
        for bad in [1, 8, 12, 15, 16] {
            assert!(primitive_root(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn primitive_root_is_smallest_generator() {
        for q in [3u64, 7, 11, 13, 25, 27, 49, 121, 125, 243, 343, 1331] {
            let phi = totient(q).unwrap();
            let g = primitive_root(q).unwrap();
            assert_eq!(brute_order(g, q), phi, "q={q}");
            for h in 2..g {
                if gcd(h, q) == 1 {
                    assert!(brute_order(h, q) < phi);
                }
            }
        }
    }

    #[test]
    fn totient_matches_gcd_count() {
        for n in 1..300u64 {
            let brute = (1..=n).filter(|&k| gcd(k, n) == 1).count() as u64;
            assert_eq!(totient(n).unwrap(), brute, "n={n}");
        }
    }

    proptest! {
        #[test]
        fn factorization_multiplies_back(n in 1u64..5_000_000) {
            let f = factorize(n).unwrap();
            prop_assert_eq!(f.value(), n);
            prop_assert!(f.pairs.windows(2).all(|w| w[0].0 < w[1].0));
        }

        #[test]
        fn primitive_root_passes_order_test(k in 0usize..60) {
            let primes = [3u64, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53];
            let p = primes[k % primes.len()];
            let q = p.pow(1 + (k / primes.len()) as u32);
            let g = primitive_root(q).unwrap();
            let order = totient(q).unwrap();
            for r in factorize(order).unwrap().primes() {
                prop_assert_ne!(mod_pow(g, order / r, q), 1);
            }
        }
    }
}
