//! Dense univariate polynomials over an exact [`Field`].

use std::fmt;

use num::{BigInt, BigRational, One, Signed, ToPrimitive, Zero};
use serde_json::Value as Json;
use thiserror::Error;

use crate::exactfield::{dth_root, Field, FieldElement, FieldError, FieldKind, RootResult};

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum PolyError {
    #[error("division by the zero polynomial")]
    DivisionByZero,
    #[error("polynomials over different fields")]
    MixedFields,
    #[error("degree too small")]
    DegreeTooSmall,
    #[error("not a perfect power")]
    NoRoot,
    #[error("cannot decide whether the leading coefficient is a perfect power")]
    UnknownLeadingRoot,
    #[error("characteristic divides the exponent")]
    CharacteristicDividesExponent,
    #[error(transparent)]
    Field(#[from] FieldError),
}

pub type PolyResult<T> = Result<T, PolyError>;

/// Polynomial with coefficients lowest degree first and no trailing zeros.
#[derive(Clone, PartialEq, Eq)]
pub struct Poly {
    field: Field,
    coeffs: Vec<FieldElement>,
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let simple = c.coefficients().len() == 1;
            let coeff = if simple { c.to_string() } else { format!("({c})") };
            match i {
                0 => write!(f, "{coeff}")?,
                1 if c.is_one() => write!(f, "x")?,
                1 => write!(f, "{coeff}*x")?,
                _ if c.is_one() => write!(f, "x^{i}")?,
                _ => write!(f, "{coeff}*x^{i}")?,
            }
        }
        Ok(())
    }
}

impl Poly {
    pub fn new(field: &Field, mut coeffs: Vec<FieldElement>) -> Poly {
        debug_assert!(coeffs.iter().all(|c| c.field() == field));
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly { field: field.clone(), coeffs }
    }

    pub fn zero(field: &Field) -> Poly {
        Poly { field: field.clone(), coeffs: Vec::new() }
    }

    pub fn one(field: &Field) -> Poly {
        Poly::constant(field.one())
    }

    pub fn constant(c: FieldElement) -> Poly {
        let field = c.field().clone();
        Poly::new(&field, vec![c])
    }

    /// The polynomial `x`.
    pub fn x(field: &Field) -> Poly {
        Poly::monomial(field.one(), 1)
    }

    /// `c * x^k`.
    pub fn monomial(c: FieldElement, k: usize) -> Poly {
        let field = c.field().clone();
        let mut coeffs = vec![field.zero(); k];
        coeffs.push(c);
        Poly::new(&field, coeffs)
    }

    /// `x - a`.
    pub fn linear_root(a: &FieldElement) -> Poly {
        let field = a.field().clone();
        Poly::new(&field, vec![-a, field.one()])
    }

    pub fn from_i64s(field: &Field, coeffs: &[i64]) -> Poly {
        Poly::new(field, coeffs.iter().map(|&c| field.from_i64(c)).collect())
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn coeffs(&self) -> &[FieldElement] {
        &self.coeffs
    }

    /// Coefficient of `x^i` (zero beyond the degree).
    pub fn coeff(&self, i: usize) -> FieldElement {
        self.coeffs.get(i).cloned().unwrap_or_else(|| self.field.zero())
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn leading_coeff(&self) -> Option<&FieldElement> {
        self.coeffs.last()
    }

    pub fn is_monic(&self) -> bool {
        self.leading_coeff().is_some_and(|c| c.is_one())
    }

    fn check(&self, other: &Poly) -> PolyResult<()> {
        if self.field == other.field {
            Ok(())
        } else {
            Err(PolyError::MixedFields)
        }
    }

    pub fn try_add(&self, other: &Poly) -> PolyResult<Poly> {
        self.check(other)?;
        let n = self.coeffs.len().max(other.coeffs.len());
        Ok(Poly::new(&self.field, (0..n).map(|i| &self.coeff(i) + &other.coeff(i)).collect()))
    }

    pub fn try_sub(&self, other: &Poly) -> PolyResult<Poly> {
        self.check(other)?;
        let n = self.coeffs.len().max(other.coeffs.len());
        Ok(Poly::new(&self.field, (0..n).map(|i| &self.coeff(i) - &other.coeff(i)).collect()))
    }

    pub fn try_mul(&self, other: &Poly) -> PolyResult<Poly> {
        self.check(other)?;
        if self.is_zero() || other.is_zero() {
            return Ok(Poly::zero(&self.field));
        }
        let mut out = vec![self.field.zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] = &out[i + j] + &(a * b);
            }
        }
        Ok(Poly::new(&self.field, out))
    }

    pub fn scale(&self, c: &FieldElement) -> Poly {
        Poly::new(&self.field, self.coeffs.iter().map(|a| a * c).collect())
    }

    pub fn neg(&self) -> Poly {
        Poly::new(&self.field, self.coeffs.iter().map(|a| -a).collect())
    }

    pub fn pow(&self, mut e: u32) -> Poly {
        let mut acc = Poly::one(&self.field);
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// `(q, r)` with `self = q*other + r` and `deg r < deg other`.
    pub fn divrem(&self, other: &Poly) -> PolyResult<(Poly, Poly)> {
        self.check(other)?;
        let Some(db) = other.degree() else { return Err(PolyError::DivisionByZero) };
        let lead_inv = other.coeffs[db].inv()?;
        let mut rem = self.coeffs.clone();
        let Some(da) = self.degree().filter(|&da| da >= db) else {
            return Ok((Poly::zero(&self.field), self.clone()));
        };
        let mut quot = vec![self.field.zero(); da - db + 1];
        for k in (0..=da - db).rev() {
            let c = &rem[k + db] * &lead_inv;
            if c.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                rem[k + j] = &rem[k + j] - &(&c * b);
            }
            quot[k] = c;
        }
        rem.truncate(db);
        Ok((Poly::new(&self.field, quot), Poly::new(&self.field, rem)))
    }

    pub fn rem(&self, other: &Poly) -> PolyResult<Poly> {
        Ok(self.divrem(other)?.1)
    }

    /// Exact quotient, `None` if `other` does not divide `self`.
    pub fn exact_div(&self, other: &Poly) -> PolyResult<Option<Poly>> {
        let (q, r) = self.divrem(other)?;
        Ok(r.is_zero().then_some(q))
    }

    pub fn monic(&self) -> Poly {
        match self.leading_coeff() {
            Some(lc) => self.scale(&lc.inv().expect("nonzero leading coefficient")),
            None => self.clone(),
        }
    }

    /// Monic gcd; `gcd(0, 0) = 0`.
    pub fn gcd(&self, other: &Poly) -> PolyResult<Poly> {
        self.check(other)?;
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(&b)?;
            a = b;
            b = r;
        }
        Ok(a.monic())
    }

    pub fn eval(&self, x: &FieldElement) -> FieldElement {
        let mut acc = self.field.zero();
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * x) + c;
        }
        acc
    }

    pub fn derivative(&self) -> Poly {
        let coeffs = self.coeffs.iter().enumerate().skip(1).map(|(i, c)| c * &self.field.from_i64(i as i64)).collect();
        Poly::new(&self.field, coeffs)
    }

    /// `self(g(x))`.
    pub fn compose(&self, g: &Poly) -> Poly {
        let mut acc = Poly::zero(&self.field);
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * g) + &Poly::constant(c.clone());
        }
        acc
    }

    /// `self(x + a)`.
    pub fn shift(&self, a: &FieldElement) -> Poly {
        self.compose_linear(&self.field.one(), a)
    }

    /// `self(lambda*x + mu)`.
    pub fn compose_linear(&self, lambda: &FieldElement, mu: &FieldElement) -> Poly {
        self.compose(&Poly::new(&self.field, vec![mu.clone(), lambda.clone()]))
    }

    /// `(c*t + d)^n * self((a*t + b)/(c*t + d))` with `n = deg self`.
    pub fn homogeneous_substitution(
        &self,
        a: &FieldElement,
        b: &FieldElement,
        c: &FieldElement,
        d: &FieldElement,
    ) -> Poly {
        let Some(n) = self.degree() else { return self.clone() };
        let num = Poly::new(&self.field, vec![b.clone(), a.clone()]);
        let den = Poly::new(&self.field, vec![d.clone(), c.clone()]);
        let mut acc = Poly::zero(&self.field);
        for (i, coeff) in self.coeffs.iter().enumerate() {
            let term = &num.pow(i as u32) * &den.pow((n - i) as u32);
            acc = &acc + &term.scale(coeff);
        }
        acc
    }

    /// Transport coefficients along a field map.
    pub fn map_coeffs(&self, target: &Field, f: impl Fn(&FieldElement) -> FieldElement) -> Poly {
        Poly::new(target, self.coeffs.iter().map(f).collect())
    }

    /// Array of element serializations, lowest degree first.
    pub fn to_json(&self) -> Json {
        Json::Array(self.coeffs.iter().map(FieldElement::to_json).collect())
    }

    pub fn from_json(field: &Field, json: &Json) -> PolyResult<Poly> {
        let Json::Array(items) = json else {
            return Err(FieldError::Malformed("polynomial must be an array".into()).into());
        };
        let coeffs = items.iter().map(|c| field.parse_element(c)).collect::<Result<Vec<_>, _>>()?;
        Ok(Poly::new(field, coeffs))
    }
}

macro_rules! poly_binop {
    ($trait:ident, $method:ident, $try:ident) => {
        impl std::ops::$trait<&Poly> for &Poly {
            type Output = Poly;
            fn $method(self, rhs: &Poly) -> Poly {
                self.$try(rhs).expect("polynomials over different fields")
            }
        }
        impl std::ops::$trait<Poly> for Poly {
            type Output = Poly;
            fn $method(self, rhs: Poly) -> Poly {
                (&self).$try(&rhs).expect("polynomials over different fields")
            }
        }
    };
}

poly_binop!(Add, add, try_add);
poly_binop!(Sub, sub, try_sub);
poly_binop!(Mul, mul, try_mul);

/// True iff `gcd(f, f')` is constant. A vanishing derivative (a `p`-th
/// power in characteristic `p`) counts as not squarefree unless `f` is
/// constant.
pub fn is_squarefree(f: &Poly) -> bool {
    if f.is_constant() {
        return true;
    }
    let df = f.derivative();
    if df.is_zero() {
        return false;
    }
    f.gcd(&df).expect("same field").is_constant()
}

/// Resultant of `a` and `b` with respect to their actual degrees, by the
/// subresultant pseudo-remainder sequence.
pub fn resultant(a: &Poly, b: &Poly) -> PolyResult<FieldElement> {
    a.check(b)?;
    let field = a.field.clone();
    let (Some(da), Some(db)) = (a.degree(), b.degree()) else { return Ok(field.zero()) };
    let (mut a, mut b) = (a.clone(), b.clone());
    let mut s = field.one();
    if da < db {
        std::mem::swap(&mut a, &mut b);
        if (da * db) % 2 == 1 {
            s = -&s;
        }
    }
    if b.degree() == Some(0) {
        let deg_a = a.degree().unwrap() as i64;
        return Ok(&s * &b.coeffs[0].pow(deg_a)?);
    }
    let mut g = field.one();
    let mut h = field.one();
    loop {
        let deg_a = a.degree().unwrap();
        let deg_b = b.degree().unwrap();
        let delta = deg_a - deg_b;
        if deg_a % 2 == 1 && deg_b % 2 == 1 {
            s = -&s;
        }
        let lb = b.leading_coeff().unwrap().pow(delta as i64 + 1)?;
        let r = a.scale(&lb).rem(&b)?;
        a = b;
        let divisor = &g * &h.pow(delta as i64)?;
        b = r.scale(&divisor.inv()?);
        g = a.leading_coeff().unwrap().clone();
        h = &h.pow(1 - delta as i64)? * &g.pow(delta as i64)?;
        match b.degree() {
            None => return Ok(field.zero()),
            Some(0) => {
                let deg_a = a.degree().unwrap() as i64;
                let h = &h.pow(1 - deg_a)? * &b.coeffs[0].pow(deg_a)?;
                return Ok(&s * &h);
            }
            Some(_) => {}
        }
    }
}

/// `(-1)^{n(n-1)/2} Res(f, f') / lc(f)`, with `f'` taken at formal degree
/// `n - 1`.
pub fn discriminant(f: &Poly) -> PolyResult<FieldElement> {
    let n = match f.degree() {
        Some(n) if n >= 2 => n,
        _ => return Err(PolyError::DegreeTooSmall),
    };
    let lc = f.leading_coeff().unwrap();
    let df = f.derivative();
    let Some(m) = df.degree() else { return Ok(f.field.zero()) };
    let res = &resultant(f, &df)? * &lc.pow((n - 1 - m) as i64)?;
    let sign = if (n * (n - 1) / 2) % 2 == 0 { f.field.one() } else { f.field.from_i64(-1) };
    Ok(&(&sign * &res) / lc)
}

/// Some `v` with `v^d = g`, verified by re-expansion.
pub fn poly_dth_root(g: &Poly, d: u32) -> PolyResult<Poly> {
    let field = g.field();
    let p = field.characteristic();
    if d == 0 {
        return Err(PolyError::NoRoot);
    }
    if p != 0 && (d as u64).is_multiple_of(p) {
        return Err(PolyError::CharacteristicDividesExponent);
    }
    let Some(deg) = g.degree() else { return Ok(g.clone()) };
    if deg % d as usize != 0 {
        return Err(PolyError::NoRoot);
    }
    let lambda = match dth_root(g.leading_coeff().unwrap(), d as u64) {
        RootResult::Root(r) => r,
        RootResult::NoRoot => return Err(PolyError::NoRoot),
        RootResult::Unknown => return Err(PolyError::UnknownLeadingRoot),
    };
    let h = g.monic();
    let k = deg / d as usize;
    let d_inv = field.from_i64(d as i64).inv()?;
    let mut v = Poly::monomial(field.one(), k);
    // coefficient of x^{dk-j} in v^d is d*v_{k-j} plus terms in higher coefficients
    for j in 1..=k {
        let current = v.pow(d).coeff(deg - j);
        let next = &(&h.coeff(deg - j) - &current) * &d_inv;
        let mut coeffs = v.coeffs.clone();
        coeffs[k - j] = next;
        v = Poly::new(field, coeffs);
    }
    let v = v.scale(&lambda);
    if v.pow(d) != *g {
        return Err(PolyError::NoRoot);
    }
    Ok(v)
}

/// Roots found in the base field, with multiplicities.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RootsReport {
    pub roots: Vec<(FieldElement, usize)>,
    /// Every root in the field is listed.
    pub complete: bool,
}

impl RootsReport {
    /// Roots with multiplicity account for the whole degree.
    pub fn splits(&self, f: &Poly) -> bool {
        self.roots.iter().map(|(_, m)| m).sum::<usize>() == f.degree().unwrap_or(0)
    }
}

fn strip_root(f: &Poly, a: &FieldElement) -> (Poly, usize) {
    let lin = Poly::linear_root(a);
    let mut g = f.clone();
    let mut mult = 0;
    while let Some(q) = g.exact_div(&lin).expect("same field") {
        g = q;
        mult += 1;
    }
    (g, mult)
}

/// Roots of `f` in its field. Finite fields and `Q` are searched
/// completely; other number fields only test the caller's `candidates`.
pub fn roots_in_field(f: &Poly, candidates: &[FieldElement]) -> RootsReport {
    assert!(!f.is_zero(), "roots of the zero polynomial");
    let field = f.field();
    let mut roots = Vec::new();
    let mut rest = f.clone();
    let complete = match field.kind() {
        FieldKind::PrimeField { .. } | FieldKind::ExtField { .. } => {
            for a in finite_root_candidates(f) {
                let (g, m) = strip_root(&rest, &a);
                if m > 0 {
                    roots.push((a, m));
                    rest = g;
                }
            }
            true
        }
        FieldKind::Rationals => match rational_root_candidates(f) {
            Some(cands) => {
                for a in cands {
                    let (g, m) = strip_root(&rest, &a);
                    if m > 0 {
                        roots.push((a, m));
                        rest = g;
                    }
                }
                true
            }
            None => false,
        },
        FieldKind::NumberField { .. } => {
            for a in candidates {
                if roots.iter().any(|(r, _)| r == a) {
                    continue;
                }
                let (g, m) = strip_root(&rest, a);
                if m > 0 {
                    roots.push((a.clone(), m));
                    rest = g;
                }
            }
            rest.is_constant()
        }
    };
    roots.sort();
    RootsReport { roots, complete }
}

fn finite_root_candidates(f: &Poly) -> Vec<FieldElement> {
    let field = f.field();
    let q = field.order().expect("finite field");
    if let (FieldKind::PrimeField { p }, true) = (field.kind(), q > 1 << 16) {
        let residues: Vec<u64> = f.coeffs.iter().map(|c| c.as_residue().unwrap()).collect();
        return crate::exactfield::prime_field_roots(&residues, *p)
            .into_iter()
            .map(|r| field.from_residues(&[r]).unwrap())
            .collect();
    }
    field.elements().filter(|a| f.eval(a).is_zero()).collect()
}

/// All `±r/s` with `r | a_0`, `s | a_n` on the primitive integer form
/// (plus `0`), or `None` if the coefficients are too large to factor.
fn rational_root_candidates(f: &Poly) -> Option<Vec<FieldElement>> {
    let q = f.field();
    let rat: Vec<BigRational> = f.coeffs.iter().map(|c| c.as_rational().unwrap()).collect();
    let lcm = rat.iter().fold(BigInt::one(), |acc, r| num::integer::lcm(acc, r.denom().clone()));
    let ints: Vec<BigInt> = rat.iter().map(|r| (r * BigRational::from_integer(lcm.clone())).to_integer()).collect();
    let mut out = vec![q.zero()];
    let low = ints.iter().position(|c| !c.is_zero())?;
    let a0 = ints[low].abs().to_u64()?;
    let an = ints.last()?.abs().to_u64()?;
    for r in divisors(a0) {
        for s in divisors(an) {
            let x = BigRational::new(r.into(), s.into());
            out.push(q.from_rational(&x).unwrap());
            out.push(q.from_rational(&-x).unwrap());
        }
    }
    out.sort();
    out.dedup();
    Some(out)
}

fn divisors(n: u64) -> Vec<u64> {
    let mut out = vec![1u64];
    for (p, e) in crate::exactfield::factor_u64(n) {
        let len = out.len();
        let mut pk = 1u64;
        for _ in 0..e {
            pk *= p;
            for i in 0..len {
                out.push(out[i] * pk);
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn q() -> Field {
        Field::rationals()
    }

    fn random_poly(field: &Field, deg: usize, rng: &mut ChaCha8Rng) -> Poly {
        Poly::new(field, (0..=deg).map(|_| field.random_element(rng)).collect())
    }

    /// Sylvester determinant, independent of the remainder sequence.
    fn sylvester_resultant(a: &Poly, b: &Poly) -> FieldElement {
        let field = a.field().clone();
        let (m, n) = (a.degree().unwrap(), b.degree().unwrap());
        let size = m + n;
        let mut mat = vec![vec![field.zero(); size]; size];
        for i in 0..n {
            for (j, c) in a.coeffs().iter().rev().enumerate() {
                mat[i][i + j] = c.clone();
            }
        }
        for i in 0..m {
            for (j, c) in b.coeffs().iter().rev().enumerate() {
                mat[n + i][i + j] = c.clone();
            }
        }
        let mut det = field.one();
        for col in 0..size {
            let Some(piv) = (col..size).find(|&r| !mat[r][col].is_zero()) else { return field.zero() };
            if piv != col {
                mat.swap(piv, col);
                det = -det;
            }
            det = &det * &mat[col][col];
            let inv = mat[col][col].inv().unwrap();
            for r in col + 1..size {
                let factor = &mat[r][col] * &inv;
                for c in col..size {
                    let t = &factor * &mat[col][c];
                    mat[r][c] = &mat[r][c] - &t;
                }
            }
        }
        det
    }

    #[test]
    fn arithmetic_examples() {
        let q = q();
        let a = Poly::from_i64s(&q, &[-1, 0, 1]);
        let b = Poly::from_i64s(&q, &[1, -2, 1]);
        assert_eq!(a.gcd(&b).unwrap(), Poly::from_i64s(&q, &[-1, 1]));
        let f7 = Field::prime(7).unwrap();
        assert_eq!(Poly::from_i64s(&f7, &[1, 0, 0, 0, 1]).eval(&f7.zero()), f7.one());
        let x4 = Poly::monomial(q.one(), 4);
        assert_eq!(x4.compose_linear(&q.one(), &q.one()), Poly::from_i64s(&q, &[1, 4, 6, 4, 1]));
        assert_eq!(Poly::from_i64s(&q, &[1, 4, 6, 4, 1]).shift(&q.from_i64(-1)), x4);
        assert_eq!(a.divrem(&Poly::zero(&q)), Err(PolyError::DivisionByZero));
        assert_eq!(a.try_add(&Poly::one(&f7)), Err(PolyError::MixedFields));
    }

    #[test]
    fn squarefree_examples() {
        let q = q();
        assert!(is_squarefree(&Poly::from_i64s(&q, &[1, 0, 0, 0, 1])));
        let f5 = Field::prime(5).unwrap();
        let lin = Poly::from_i64s(&f5, &[1, 2]);
        let f = &Poly::monomial(f5.one(), 5) + &lin.pow(3);
        assert!(is_squarefree(&f));
        let g = &Poly::from_i64s(&q, &[-1, 1]).pow(2) * &Poly::from_i64s(&q, &[2, 1]);
        assert!(!is_squarefree(&g));
        // x^5 - 1 = (x - 1)^5 in characteristic 5
        assert!(!is_squarefree(&Poly::from_i64s(&f5, &[-1, 0, 0, 0, 0, 1])));
    }

    #[test]
    fn discriminant_examples() {
        let q = q();
        let lin = Poly::from_i64s(&q, &[2, 1]);
        let f = &Poly::monomial(q.one(), 4) + &lin.pow(3);
        assert_eq!(discriminant(&f).unwrap(), q.from_i64(124160));
        assert_eq!(discriminant(&Poly::from_i64s(&q, &[-2, 0, 1])).unwrap(), q.from_i64(8));
        assert_eq!(discriminant(&Poly::from_i64s(&q, &[1, 0, 0, 0, 1])).unwrap(), q.from_i64(256));
        assert_eq!(discriminant(&Poly::from_i64s(&q, &[1, 1])), Err(PolyError::DegreeTooSmall));
        // cubic x^3 + a x + b: -4a^3 - 27b^2
        assert_eq!(discriminant(&Poly::from_i64s(&q, &[5, -2, 0, 1])).unwrap(), q.from_i64(32 - 675));
    }

    #[test]
    fn discriminant_of_quartic_family_matches_formula() {
        let q = q();
        for a in -3i64..=3 {
            for b in -3i64..=3 {
                let lin = Poly::from_i64s(&q, &[b, a]);
                let f = &Poly::monomial(q.one(), 4) + &lin.pow(3);
                let expected = -27 * a.pow(4) * b.pow(8) + 256 * b.pow(9);
                assert_eq!(discriminant(&f).unwrap(), q.from_i64(expected), "a={a} b={b}");
            }
        }
    }

    #[test]
    fn resultant_matches_sylvester() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for field in [q(), Field::prime(13).unwrap(), Field::cyclotomic(12).unwrap(), Field::finite(5, 2).unwrap()] {
            for _ in 0..40 {
                let a = random_poly(&field, 1 + (rng.next_u32_mod(5) as usize), &mut rng);
                let b = random_poly(&field, 1 + (rng.next_u32_mod(5) as usize), &mut rng);
                if a.degree().unwrap_or(0) == 0 || b.degree().unwrap_or(0) == 0 {
                    continue;
                }
                assert_eq!(resultant(&a, &b).unwrap(), sylvester_resultant(&a, &b), "{a} ; {b}");
            }
        }
    }

    trait SmallRange {
        fn next_u32_mod(&mut self, m: u32) -> u32;
    }

    impl SmallRange for ChaCha8Rng {
        fn next_u32_mod(&mut self, m: u32) -> u32 {
            use rand::Rng;
            self.gen_range(0..m)
        }
    }

    #[test]
    fn dth_root_examples() {
        let q = q();
        assert_eq!(poly_dth_root(&Poly::from_i64s(&q, &[8, 12, 6, 1]), 3).unwrap(), Poly::from_i64s(&q, &[2, 1]));
        assert_eq!(poly_dth_root(&Poly::from_i64s(&q, &[1, 0, 1]), 2), Err(PolyError::NoRoot));
        let f7 = Field::prime(7).unwrap();
        let v = poly_dth_root(&Poly::from_i64s(&f7, &[2, 5, 4]), 2).unwrap();
        assert!(v == Poly::from_i64s(&f7, &[3, 2]) || v == Poly::from_i64s(&f7, &[4, 5]));
        let f5 = Field::prime(5).unwrap();
        assert_eq!(
            poly_dth_root(&Poly::from_i64s(&f5, &[1, 0, 0, 0, 0, 1]), 5),
            Err(PolyError::CharacteristicDividesExponent)
        );
    }

    #[test]
    fn roots_examples() {
        let f13 = Field::prime(13).unwrap();
        let rep = roots_in_field(&Poly::from_i64s(&f13, &[-1, 0, 0, 0, 1]), &[]);
        let found: Vec<_> = rep.roots.iter().map(|(r, m)| (r.as_residue().unwrap(), *m)).collect();
        assert_eq!(found, vec![(1, 1), (5, 1), (8, 1), (12, 1)]);
        assert!(rep.complete);

        let q = q();
        let rep = roots_in_field(&Poly::from_i64s(&q, &[-2, 0, 1]), &[]);
        assert!(rep.roots.is_empty() && rep.complete);
        let rep = roots_in_field(&Poly::from_i64s(&q, &[2, -3, 0, 1]), &[]);
        // x^3 - 3x + 2 = (x - 1)^2 (x + 2)
        assert_eq!(rep.roots, vec![(q.from_i64(-2), 1), (q.one(), 2)]);

        let c12 = Field::cyclotomic(12).unwrap();
        let i = c12.generator().pow(3).unwrap();
        let half = c12.from_rational(&BigRational::new(1.into(), 2.into())).unwrap();
        let cands = vec![-&half, &(&c12.from_i64(-1) + &i) * &half, &(&c12.from_i64(-1) - &i) * &half];
        let rep = roots_in_field(&Poly::from_i64s(&c12, &[1, 4, 6, 4]), &cands);
        assert_eq!(rep.roots.len(), 3);
        assert!(rep.complete);
    }

    #[test]
    fn large_prime_field_roots() {
        let f = Field::prime(1_000_003).unwrap();
        let roots = [5, 77, 999_999];
        let mut g = Poly::one(&f);
        for r in roots {
            g = &g * &Poly::linear_root(&f.from_i64(r));
        }
        g = &g * &Poly::from_i64s(&f, &[2, 0, 1]);
        let rep = roots_in_field(&g, &[]);
        for r in roots {
            assert!(rep.roots.iter().any(|(a, _)| *a == f.from_i64(r)));
        }
        for (a, _) in &rep.roots {
            assert!(g.eval(a).is_zero());
        }
    }

    #[test]
    fn divrem_reconstructs_on_random_pairs() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for field in [q(), Field::prime(13).unwrap(), Field::cyclotomic(12).unwrap(), Field::finite(3, 2).unwrap()] {
            for _ in 0..1000 {
                let a = random_poly(&field, rng.next_u32_mod(8) as usize, &mut rng);
                let b = random_poly(&field, rng.next_u32_mod(5) as usize, &mut rng);
                if b.is_zero() {
                    continue;
                }
                let (quot, r) = a.divrem(&b).unwrap();
                assert_eq!(&(&quot * &b) + &r, a);
                assert!(r.degree() < b.degree() || r.is_zero());
            }
        }
    }

    #[test]
    fn dth_root_round_trip() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for field in [q(), Field::prime(13).unwrap(), Field::cyclotomic(12).unwrap()] {
            for d in 2..=4u32 {
                for _ in 0..15 {
                    // rational leading coefficient so its d-th power is recognizable
                    let deg = 1 + rng.next_u32_mod(5) as usize;
                    let mut coeffs: Vec<_> = (0..deg).map(|_| field.random_element(&mut rng)).collect();
                    coeffs.push(field.from_i64(1 + rng.next_u32_mod(6) as i64));
                    let v = Poly::new(&field, coeffs);
                    let g = v.pow(d);
                    let r = poly_dth_root(&g, d).unwrap();
                    assert_eq!(r.pow(d), g);
                    // r = zeta * v for a d-th root of unity zeta
                    let ratio = r.leading_coeff().unwrap() / v.leading_coeff().unwrap();
                    assert!(ratio.pow(d as i64).unwrap().is_one());
                    assert_eq!(v.scale(&ratio), r);
                }
            }
        }
    }

    #[test]
    fn squarefree_agrees_with_discriminant() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        // number-field gcds grow fast, so fewer and smaller samples there
        let cases = [
            (q(), 200, 6),
            (Field::cyclotomic(12).unwrap(), 40, 3),
            (Field::prime(11).unwrap(), 200, 6),
            (Field::prime(13).unwrap(), 200, 6),
        ];
        for (field, count, spread) in cases {
            for _ in 0..count {
                let deg = 2 + rng.next_u32_mod(spread) as usize;
                let mut f = random_poly(&field, deg, &mut rng);
                if f.degree() != Some(deg) {
                    continue;
                }
                if rng.next_u32_mod(3) == 0 {
                    let r = random_poly(&field, 1, &mut rng);
                    if r.degree() == Some(1) {
                        f = &f * &r.pow(2);
                    }
                }
                assert_eq!(is_squarefree(&f), !discriminant(&f).unwrap().is_zero(), "{f}");
            }
        }
    }

    #[test]
    fn homogeneous_substitution_matches_direct_evaluation() {
        let q = q();
        let f = Poly::from_i64s(&q, &[1, 0, 0, 0, 1]);
        // (t-1)^4 f(1/(t-1)) = 1 + (t-1)^4
        let g = f.homogeneous_substitution(&q.zero(), &q.one(), &q.one(), &q.from_i64(-1));
        assert_eq!(g, Poly::from_i64s(&q, &[2, -4, 6, -4, 1]));
    }

    proptest! {
        #[test]
        fn compose_linear_inverts(coeffs in proptest::collection::vec(-20i64..20, 1..7), l in 1i64..12, m in 0i64..13) {
            let f13 = Field::prime(13).unwrap();
            let f = Poly::from_i64s(&f13, &coeffs);
            let lambda = f13.from_i64(l);
            let mu = f13.from_i64(m);
            let li = lambda.inv().unwrap();
            let back = f.compose_linear(&lambda, &mu).compose_linear(&li, &(-&(&mu * &li)));
            prop_assert_eq!(back, f);
        }

        #[test]
        fn compose_linear_inverts_over_q(coeffs in proptest::collection::vec(-20i64..20, 1..7), l in 1i64..5, m in -5i64..5) {
            let q = Field::rationals();
            let f = Poly::from_i64s(&q, &coeffs);
            let lambda = q.from_i64(l);
            let mu = q.from_i64(m);
            let li = lambda.inv().unwrap();
            let back = f.compose_linear(&lambda, &mu).compose_linear(&li, &(-&(&mu * &li)));
            prop_assert_eq!(back, f);
        }
    }
}
