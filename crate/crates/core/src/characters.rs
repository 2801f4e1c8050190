//! Dirichlet characters modulo `D`.
//!
//! The unit group `(Z/DZ)^*` is split into cyclic pieces, one per odd prime
//! power (plus `2` and `4`), with `2^e` for `e ≥ 3` contributing the pair
//! generated by `-1` (cycle 2) and `5` (cycle `2^{e-2}`). A character is an
//! exponent vector against that basis; evaluation goes through a discrete-log
//! table per component, built once per modulus.

use crate::error::{domain, Result};
use crate::number_core::{factorize, gcd, lcm, mod_mul, primitive_root, totient, ComplexSum};
use num_complex::Complex64;
use serde::Serialize;
use std::f64::consts::TAU;
use std::fmt;
use std::sync::Arc;

const NOT_A_UNIT: u32 = u32::MAX;

/// One cyclic factor of the unit group.
#[derive(Clone, Debug)]
pub struct Component {
    /// The prime power this component lives on.
    pub prime_power: u64,
    /// Generator residue modulo `prime_power`.
    pub generator: u64,
    /// Order of the generator.
    pub cycle: u64,
    dlog: Vec<u32>,
}

impl Component {
    #[inline]
    fn log_of(&self, n: u64) -> u32 {
        self.dlog[(n % self.prime_power) as usize]
    }
}

#[derive(Debug)]
pub struct UnitGroupBasis {
    modulus: u64,
    components: Vec<Component>,
    exponent_lcm: u64,
}

impl UnitGroupBasis {
    pub fn new(modulus: u64) -> Result<Self> {
        if modulus == 0 {
            return domain("modulus must be at least 1");
        }
        let mut components = Vec::new();
        for (p, e) in factorize(modulus)?.pairs {
            let q = p.pow(e);
            if p == 2 && e >= 3 {
                let (minus_one, five) = two_power_components(q);
                components.push(minus_one);
                components.push(five);
            } else {
                components.push(cyclic_component(q)?);
            }
        }
        let exponent_lcm = components.iter().fold(1, |acc, c| lcm(acc, c.cycle));
        Ok(Self { modulus, components, exponent_lcm })
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn components(&self) -> &[Component] {
        &self.components
    }

    /// Size of the unit group, `φ(D)`.
    pub fn order(&self) -> u64 {
        self.components.iter().map(|c| c.cycle).product()
    }

    /// `Σ_i e_i·log_i(n)·(lcm/n_i) mod lcm`, or `None` when `gcd(n, D) > 1`.
    #[inline]
    fn phase_numerator(&self, exponents: &[u64], n: u64) -> Option<u64> {
        let l = self.exponent_lcm;
        let mut k = 0u64;
        for (c, &e) in self.components.iter().zip(exponents) {
            let lg = c.log_of(n);
            if lg == NOT_A_UNIT {
                return None;
            }
            if e != 0 {
                k = (k + mod_mul(mod_mul(e, lg as u64, l), l / c.cycle, l)) % l;
            }
        }
        Some(k)
    }
}

fn cyclic_component(q: u64) -> Result<Component> {
    let g = primitive_root(q)?;
    let cycle = totient(q)?;
    let mut dlog = vec![NOT_A_UNIT; q as usize];
    let mut v = 1 % q;
    for j in 0..cycle {
        dlog[v as usize] = j as u32;
        v = mod_mul(v, g, q);
    }
    if q == 2 {
        dlog[1] = 0;
    }
    Ok(Component { prime_power: q, generator: g, cycle, dlog })
}

fn two_power_components(q: u64) -> (Component, Component) {
    let half = q / 4;
    let mut sign = vec![NOT_A_UNIT; q as usize];
    let mut log5 = vec![NOT_A_UNIT; q as usize];
    let mut v = 1u64;
    for b in 0..half {
        // 5^b ≡ 1 (mod 4); its negative is ≡ 3 (mod 4)
        sign[v as usize] = 0;
        sign[(q - v) as usize] = 1;
        log5[v as usize] = b as u32;
        log5[(q - v) as usize] = b as u32;
        v = v * 5 % q;
    }
    (
        Component { prime_power: q, generator: q - 1, cycle: 2, dlog: sign },
        Component { prime_power: q, generator: 5, cycle: half, dlog: log5 },
    )
}

/// `exp(2πi·k/n)`, exact at multiples of a quarter turn and conjugate
/// symmetric: `root_of_unity(n-k, n) == root_of_unity(k, n).conj()` bit for bit.
pub fn root_of_unity(k: u64, n: u64) -> Complex64 {
    let k = k % n;
    if k == 0 {
        return Complex64::new(1.0, 0.0);
    }
    if 2 * k == n {
        return Complex64::new(-1.0, 0.0);
    }
    if 4 * k == n {
        return Complex64::new(0.0, 1.0);
    }
    if 4 * k == 3 * n {
        return Complex64::new(0.0, -1.0);
    }
    if 2 * k > n {
        return root_of_unity(n - k, n).conj();
    }
    let (s, c) = (TAU * k as f64 / n as f64).sin_cos();
    Complex64::new(c, s)
}

/// A Dirichlet character, stored as exponents against a shared basis.
#[derive(Clone)]
pub struct Character {
    basis: Arc<UnitGroupBasis>,
    exponents: Vec<u64>,
}

impl PartialEq for Character {
    fn eq(&self, other: &Self) -> bool {
        self.modulus() == other.modulus() && self.exponents == other.exponents
    }
}

impl Eq for Character {}

impl fmt::Debug for Character {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "χ[{} mod {}; {:?}]", self.index(), self.modulus(), self.exponents)
    }
}

impl Character {
    pub fn principal(basis: Arc<UnitGroupBasis>) -> Self {
        let exponents = vec![0; basis.components.len()];
        Self { basis, exponents }
    }

    pub fn from_exponents(basis: Arc<UnitGroupBasis>, exponents: Vec<u64>) -> Result<Self> {
        if exponents.len() != basis.components.len()
            || exponents.iter().zip(&basis.components).any(|(&e, c)| e >= c.cycle)
        {
            return domain(format!("exponent vector {exponents:?} does not fit the basis mod {}", basis.modulus));
        }
        Ok(Self { basis, exponents })
    }

    pub fn modulus(&self) -> u64 {
        self.basis.modulus
    }

    pub fn basis(&self) -> &Arc<UnitGroupBasis> {
        &self.basis
    }

    pub fn exponents(&self) -> &[u64] {
        &self.exponents
    }

    /// Position in the lexicographic enumeration of [`character_group`].
    pub fn index(&self) -> usize {
        self.basis
            .components
            .iter()
            .zip(&self.exponents)
            .fold(0usize, |acc, (c, &e)| acc * c.cycle as usize + e as usize)
    }

    #[inline]
    pub fn evaluate(&self, n: u64) -> Complex64 {
        match self.basis.phase_numerator(&self.exponents, n) {
            Some(k) => root_of_unity(k, self.basis.exponent_lcm),
            None => Complex64::new(0.0, 0.0),
        }
    }

    pub fn values_at(&self, ns: &[u64]) -> Vec<Complex64> {
        ns.iter().map(|&n| self.evaluate(n)).collect()
    }

    pub fn is_principal(&self) -> bool {
        self.exponents.iter().all(|&e| e == 0)
    }

    /// True when every value is real (the character has order ≤ 2).
    pub fn is_real(&self) -> bool {
        self.order() <= 2
    }

    pub fn conjugate(&self) -> Self {
        let exponents = self
            .exponents
            .iter()
            .zip(&self.basis.components)
            .map(|(&e, c)| (c.cycle - e) % c.cycle)
            .collect();
        Self { basis: Arc::clone(&self.basis), exponents }
    }

    pub fn product(&self, other: &Self) -> Result<Self> {
        if self.modulus() != other.modulus() {
            return domain(format!(
                "cannot multiply characters mod {} and mod {}",
                self.modulus(),
                other.modulus()
            ));
        }
        let exponents = self
            .exponents
            .iter()
            .zip(&other.exponents)
            .zip(&self.basis.components)
            .map(|((&a, &b), c)| (a + b) % c.cycle)
            .collect();
        Ok(Self { basis: Arc::clone(&self.basis), exponents })
    }

    /// Least `m ≥ 1` with `χ^m` principal.
    pub fn order(&self) -> u64 {
        self.exponents
            .iter()
            .zip(&self.basis.components)
            .fold(1, |acc, (&e, c)| lcm(acc, c.cycle / gcd(e, c.cycle)))
    }

    /// Smallest `f | D` such that `χ(n) = 1` whenever `n ≡ 1 (mod f)` and
    /// `gcd(n, D) = 1`. Brute force over residues; meant for small moduli.
    pub fn conductor(&self) -> u64 {
        let d = self.modulus();
        let one = Complex64::new(1.0, 0.0);
        (1..=d)
            .filter(|f| d.is_multiple_of(*f))
            .find(|&f| {
                (1..=d)
                    .step_by(f as usize)
                    .filter(|&n| gcd(n, d) == 1)
                    .all(|n| self.evaluate(n) == one)
            })
            .unwrap_or(d)
    }

    pub fn is_primitive(&self) -> bool {
        self.conductor() == self.modulus()
    }
}

/// All `φ(D)` characters modulo `D`, principal first, lexicographic in the
/// exponent vectors.
pub fn character_group(d: u64) -> Result<Vec<Character>> {
    let basis = Arc::new(UnitGroupBasis::new(d)?);
    let cycles: Vec<u64> = basis.components.iter().map(|c| c.cycle).collect();
    let mut out = Vec::with_capacity(basis.order() as usize);
    let mut exps = vec![0u64; cycles.len()];
    loop {
        out.push(Character { basis: Arc::clone(&basis), exponents: exps.clone() });
        // odometer, last component fastest
        let mut i = cycles.len();
        loop {
            if i == 0 {
                return Ok(out);
            }
            i -= 1;
            exps[i] += 1;
            if exps[i] < cycles[i] {
                break;
            }
            exps[i] = 0;
        }
    }
}

/// Characters mod `d` other than the principal one.
pub fn non_principal_characters(d: u64) -> Result<Vec<Character>> {
    Ok(character_group(d)?.into_iter().filter(|c| !c.is_principal()).collect())
}

#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct OrthogonalityReport {
    pub modulus: u64,
    pub group_size: usize,
    pub pairs_checked: usize,
    pub max_deviation: f64,
}

/// Checks `Σ_{n=1}^{D} χ(n)·conj(ψ(n)) = φ(D)·[χ = ψ]` over every pair.
pub fn verify_orthogonality(d: u64) -> Result<OrthogonalityReport> {
    let group = character_group(d)?;
    let phi = totient(d)? as f64;
    let ns: Vec<u64> = (1..=d).collect();
    let table: Vec<Vec<Complex64>> = group.iter().map(|c| c.values_at(&ns)).collect();
    let mut max_deviation: f64 = 0.0;
    let mut pairs_checked = 0;
    for (i, a) in table.iter().enumerate() {
        for (j, b) in table.iter().enumerate() {
            let mut acc = ComplexSum::new();
            for (u, v) in a.iter().zip(b) {
                acc.add(u * v.conj());
            }
            let want = if i == j { phi } else { 0.0 };
            max_deviation = max_deviation.max((acc.value() - want).norm());
            pairs_checked += 1;
        }
    }
    Ok(OrthogonalityReport { modulus: d, group_size: group.len(), pairs_checked, max_deviation })
}
