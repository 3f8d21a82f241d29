use num::{BigInt, BigRational, Integer, One, Signed, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{factor_u128, Field, FieldElement, FieldError, FieldKind, FieldResult};
use crate::upoly::Poly;

/// Outcome of a `d`-th root extraction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RootResult {
    Root(FieldElement),
    NoRoot,
    /// The field arithmetic cannot decide (general number fields).
    Unknown,
}

fn gcd_u128(a: u128, b: u128) -> u128 {
    a.gcd(&b)
}

/// A generator of the multiplicative group of a finite field, found by
/// seeded random search so repeated calls agree.
pub(crate) fn multiplicative_generator(field: &Field) -> FieldElement {
    let q = field.order().expect("finite field");
    if q == 2 {
        return field.one();
    }
    let primes: Vec<u128> = factor_u128(q - 1).into_iter().map(|(r, _)| r).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(q as u64 ^ 0x5eed);
    loop {
        let g = field.random_nonzero(&mut rng);
        if primes.iter().all(|r| !g.pow_u128((q - 1) / r).is_one()) {
            return g;
        }
    }
}

/// An element of exact multiplicative order `m`.
pub fn primitive_root_of_unity(field: &Field, m: u64) -> FieldResult<FieldElement> {
    if m == 0 {
        return Err(FieldError::NoSuchRoot { m, witness: "order must be positive".into() });
    }
    if m == 1 {
        return Ok(field.one());
    }
    if let Some(q) = field.order() {
        if (q - 1) % m as u128 != 0 {
            return Err(FieldError::NoSuchRoot { m, witness: format!("{m} does not divide {}", q - 1) });
        }
        return Ok(multiplicative_generator(field).pow_u128((q - 1) / m as u128));
    }
    if m == 2 {
        return Ok(field.from_i64(-1));
    }
    match field.cyclotomic_order() {
        Some(big_m) if big_m % m == 0 => Ok(field.generator().pow_u128((big_m / m) as u128)),
        Some(big_m) => Err(FieldError::NoSuchRoot { m, witness: format!("{m} does not divide {big_m}") }),
        None => Err(FieldError::NoSuchRoot {
            m,
            witness: "only cyclotomic number fields expose roots of unity beyond -1".into(),
        }),
    }
}

/// Some `r` with `r^d = a`, if one exists and can be found.
pub fn dth_root(a: &FieldElement, d: u64) -> RootResult {
    assert!(d > 0, "dth_root with d = 0");
    if a.is_zero() || d == 1 {
        return RootResult::Root(a.clone());
    }
    let field = a.field();
    match field.kind() {
        FieldKind::PrimeField { .. } | FieldKind::ExtField { .. } => finite_root(a, d),
        FieldKind::Rationals => match rational_root(&a.as_rational().unwrap(), d) {
            Some(r) => RootResult::Root(field.from_rational(&r).unwrap()),
            None => RootResult::NoRoot,
        },
        FieldKind::NumberField { .. } => number_field_root(a, d),
    }
}

fn finite_root(a: &FieldElement, d: u64) -> RootResult {
    let field = a.field();
    let q = field.order().expect("finite field");
    let g = gcd_u128(d as u128, q - 1);
    if !a.pow_u128((q - 1) / g).is_one() {
        return RootResult::NoRoot;
    }
    if g == 1 {
        let e = mod_inverse(d as u128 % (q - 1), q - 1).unwrap();
        return RootResult::Root(a.pow_u128(e));
    }
    if q <= 1 << 16 {
        return field
            .elements()
            .find(|r| r.pow_u128(d as u128) == *a)
            .map(RootResult::Root)
            .unwrap_or(RootResult::NoRoot);
    }
    let gen = multiplicative_generator(field);
    let k = discrete_log(&gen, a, q - 1);
    // d*j = k (mod q-1) is solvable since g | k
    let n = (q - 1) / g;
    let j = (k / g) * mod_inverse((d as u128 / g) % n, n).unwrap() % n;
    let r = gen.pow_u128(j);
    debug_assert_eq!(r.pow_u128(d as u128), *a);
    RootResult::Root(r)
}

fn mod_inverse(a: u128, n: u128) -> Option<u128> {
    if n == 1 {
        return Some(0);
    }
    let (mut t, mut new_t) = (BigInt::zero(), BigInt::one());
    let (mut r, mut new_r) = (BigInt::from(n), BigInt::from(a));
    while !new_r.is_zero() {
        let quot = &r / &new_r;
        (t, new_t) = (new_t.clone(), t - &quot * &new_t);
        (r, new_r) = (new_r.clone(), r - &quot * &new_r);
    }
    if !r.is_one() {
        return None;
    }
    let t = t.mod_floor(&BigInt::from(n));
    u128::try_from(t).ok()
}

/// Baby-step giant-step: `k` with `gen^k = a` in a cyclic group of order `n`.
fn discrete_log(gen: &FieldElement, a: &FieldElement, n: u128) -> u128 {
    let m = (n as f64).sqrt().ceil() as u128 + 1;
    let mut table = std::collections::HashMap::with_capacity(m as usize);
    let mut cur = gen.field().one();
    for j in 0..m {
        table.entry(cur.clone()).or_insert(j);
        cur = &cur * gen;
    }
    let giant = gen.pow_u128(n - m % n);
    let mut gamma = a.clone();
    for i in 0..m {
        if let Some(&j) = table.get(&gamma) {
            return (i * m + j) % n;
        }
        gamma = &gamma * &giant;
    }
    unreachable!("element outside the cyclic group")
}

fn rational_root(r: &BigRational, d: u64) -> Option<BigRational> {
    let d32 = u32::try_from(d).ok()?;
    if r.is_negative() && d.is_multiple_of(2) {
        return None;
    }
    let int_root = |n: &BigInt| -> Option<BigInt> {
        let root = n.abs().nth_root(d32);
        (num::pow(root.clone(), d as usize) == n.abs()).then_some(root)
    };
    let num = int_root(r.numer())?;
    let den = int_root(r.denom())?;
    let root = BigRational::new(num, den);
    Some(if r.is_negative() { -root } else { root })
}

/// Roots of unity available as powers of the field generator.
fn known_roots_of_unity(field: &Field) -> Vec<FieldElement> {
    match field.cyclotomic_order() {
        Some(m) => {
            let order = if m % 2 == 0 { m } else { 2 * m };
            let z = primitive_root_of_unity(field, order).expect("contained by construction");
            let mut out = Vec::with_capacity(order as usize);
            let mut cur = field.one();
            for _ in 0..order {
                out.push(cur.clone());
                cur = &cur * &z;
            }
            out
        }
        None => vec![field.one(), field.from_i64(-1)],
    }
}

fn number_field_root(a: &FieldElement, d: u64) -> RootResult {
    let field = a.field();
    // candidates u*b with u a known root of unity and b rational
    for u in known_roots_of_unity(field) {
        let ud = u.pow_u128(d as u128);
        let Some(b_d) = (a / &ud).as_rational() else { continue };
        if let Some(b) = rational_root(&b_d, d) {
            return RootResult::Root(&u * &field.from_rational(&b).unwrap());
        }
    }
    // N(r^d) = N(r)^d, so a norm that is not a rational d-th power rules out a root
    let norm = a.norm().expect("characteristic 0");
    if rational_root(&norm, d).is_none() {
        return RootResult::NoRoot;
    }
    RootResult::Unknown
}

/// Monic minimal polynomial over `Q` of an element of a number field.
pub fn minimal_polynomial_over_q(a: &FieldElement) -> FieldResult<Poly> {
    let field = a.field();
    if field.is_finite() {
        return Err(FieldError::Unsupported("minimal polynomial over Q in positive characteristic".into()));
    }
    let dim = field.degree();
    // echelon rows: (vector, pivot, combination of powers of a)
    let mut rows: Vec<(Vec<BigRational>, usize, Vec<BigRational>)> = Vec::new();
    let mut power = field.one();
    for k in 0..=dim {
        let mut v = power.rational_coefficients().unwrap();
        v.resize(dim, BigRational::zero());
        let mut combo = vec![BigRational::zero(); k + 1];
        combo[k] = BigRational::one();
        for (row, pivot, row_combo) in &rows {
            if v[*pivot].is_zero() {
                continue;
            }
            let factor = &v[*pivot] / &row[*pivot];
            for (x, y) in v.iter_mut().zip(row) {
                *x -= &factor * y;
            }
            for (x, y) in combo.iter_mut().zip(row_combo) {
                *x -= &factor * y;
            }
        }
        match v.iter().position(|c| !c.is_zero()) {
            Some(pivot) => rows.push((v, pivot, combo)),
            None => {
                let q = Field::rationals();
                let coeffs = combo.iter().map(|c| q.from_rational(c).unwrap()).collect();
                return Ok(Poly::new(&q, coeffs));
            }
        }
        power = &power * a;
    }
    unreachable!("powers of a span a space of dimension at most the field degree")
}
