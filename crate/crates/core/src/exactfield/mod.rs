//! Exact fields: `Q`, number fields in a power basis (cyclotomic fields
//! in particular) and finite fields `F_p`, `F_{p^k}`.
//!
//! A [`Field`] is a cheap, shareable handle. Every [`FieldElement`]
//! carries its handle and is kept in canonical form: rationals in lowest
//! terms with positive denominator, number-field and extension-field
//! elements reduced modulo the defining polynomial and padded to the
//! field degree, residues in `0..p`.
//!
//! Operator overloads (`+`, `-`, `*`, `/`) panic on mixed fields and on
//! division by zero; the `try_*` methods report those as [`FieldError`].

pub(crate) mod modp;
pub(crate) mod qpoly;
mod roots;

use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::sync::Arc;

use num::{BigInt, BigRational, One, ToPrimitive, Zero};
use rand::Rng;
use serde::{Deserialize, Serialize};
use serde_json::Value as Json;
use thiserror::Error;

pub use modp::{factor_u64, is_prime_u64};
pub use roots::{dth_root, minimal_polynomial_over_q, primitive_root_of_unity, RootResult};

use qpoly::QIrreducibility;

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum FieldError {
    #[error("defining polynomial is reducible")]
    ReducibleModulus,
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("defining polynomial must be monic of degree >= 1")]
    NotMonic,
    #[error("division by zero")]
    DivisionByZero,
    #[error("operands belong to different fields")]
    MixedFields,
    #[error("no primitive {m}-th root of unity: {witness}")]
    NoSuchRoot { m: u64, witness: String },
    #[error("malformed field element: {0}")]
    Malformed(String),
    #[error("operation unsupported for this field: {0}")]
    Unsupported(String),
}

pub type FieldResult<T> = Result<T, FieldError>;

/// Whether the defining polynomial was proven irreducible.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Irreducibility {
    Proven,
    /// Degree above the verification bound; accepted as given.
    Trusted,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FieldKind {
    Rationals,
    /// `Q[z]/(minpoly)`, minpoly monic over `Q`.
    NumberField {
        minpoly: Vec<BigRational>,
    },
    PrimeField {
        p: u64,
    },
    /// `F_p[t]/(minpoly)`, minpoly monic and irreducible over `F_p`.
    ExtField {
        p: u64,
        minpoly: Vec<u64>,
    },
}

#[derive(Debug)]
struct FieldData {
    kind: FieldKind,
    cyclotomic: Option<u64>,
    irreducibility: Irreducibility,
}

/// Handle to an exact field. Clones share the same data.
#[derive(Clone)]
pub struct Field(Arc<FieldData>);

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0.kind == other.0.kind
    }
}

impl Eq for Field {}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (&self.0.kind, self.0.cyclotomic) {
            (FieldKind::Rationals, _) => write!(f, "Q"),
            (FieldKind::NumberField { .. }, Some(m)) => write!(f, "Q(zeta_{m})"),
            (FieldKind::NumberField { minpoly }, None) => write!(f, "Q[z]/({})", fmt_qvec(minpoly, "z")),
            (FieldKind::PrimeField { p }, _) => write!(f, "F_{p}"),
            (FieldKind::ExtField { p, minpoly }, _) => write!(f, "F_{}^{}", p, minpoly.len() - 1),
        }
    }
}

fn fmt_qvec(v: &[BigRational], var: &str) -> String {
    let terms: Vec<String> = v
        .iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .map(|(i, c)| match i {
            0 => format!("{c}"),
            1 => format!("({c})*{var}"),
            _ => format!("({c})*{var}^{i}"),
        })
        .collect();
    if terms.is_empty() {
        "0".into()
    } else {
        terms.join(" + ")
    }
}

/// Field description as read from and written to JSON.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum FieldDescriptor {
    #[serde(rename = "Q")]
    Rationals,
    #[serde(rename = "cyclotomic")]
    Cyclotomic { m: u64 },
    #[serde(rename = "numberfield")]
    NumberField { minpoly: Vec<Json> },
    #[serde(rename = "Fp")]
    PrimeField { p: u64 },
    #[serde(rename = "Fq")]
    ExtField {
        p: u64,
        deg: usize,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        minpoly: Option<Vec<u64>>,
    },
}

impl Field {
    fn from_kind(kind: FieldKind, cyclotomic: Option<u64>, irreducibility: Irreducibility) -> Field {
        Field(Arc::new(FieldData { kind, cyclotomic, irreducibility }))
    }

    pub fn rationals() -> Field {
        Field::from_kind(FieldKind::Rationals, None, Irreducibility::Proven)
    }

    pub fn prime(p: u64) -> FieldResult<Field> {
        if !is_prime_u64(p) || p >= (1u64 << 62) {
            return Err(FieldError::NotPrime(p));
        }
        Ok(Field::from_kind(FieldKind::PrimeField { p }, None, Irreducibility::Proven))
    }

    /// `F_{p^k}`, using the first irreducible polynomial of degree `k`.
    pub fn finite(p: u64, k: usize) -> FieldResult<Field> {
        if k == 0 {
            return Err(FieldError::NotMonic);
        }
        if k == 1 {
            return Field::prime(p);
        }
        if !is_prime_u64(p) || p >= (1u64 << 31) {
            return Err(FieldError::NotPrime(p));
        }
        let minpoly = modp::first_irreducible(p, k);
        Ok(Field::from_kind(FieldKind::ExtField { p, minpoly }, None, Irreducibility::Proven))
    }

    /// `F_p[t]/(minpoly)`; irreducibility is checked with Rabin's test.
    pub fn finite_with_modulus(p: u64, minpoly: Vec<u64>) -> FieldResult<Field> {
        if !is_prime_u64(p) || p >= (1u64 << 31) {
            return Err(FieldError::NotPrime(p));
        }
        let mut minpoly: Vec<u64> = minpoly.into_iter().map(|c| c % p).collect();
        modp::trim(&mut minpoly);
        if minpoly.len() < 2 || *minpoly.last().unwrap() != 1 {
            return Err(FieldError::NotMonic);
        }
        if !modp::is_irreducible(&minpoly, p) {
            return Err(FieldError::ReducibleModulus);
        }
        if minpoly.len() == 2 {
            return Field::prime(p);
        }
        Ok(Field::from_kind(FieldKind::ExtField { p, minpoly }, None, Irreducibility::Proven))
    }

    /// `Q(zeta_m)` in the power basis of a primitive `m`-th root of unity.
    pub fn cyclotomic(m: u64) -> FieldResult<Field> {
        if m == 0 {
            return Err(FieldError::Malformed("cyclotomic order must be positive".into()));
        }
        let minpoly: Vec<BigRational> =
            qpoly::cyclotomic_integer(m).into_iter().map(BigRational::from_integer).collect();
        if minpoly.len() == 2 {
            // Q(zeta_1) = Q(zeta_2) = Q, still remembered as cyclotomic
            return Ok(Field::from_kind(FieldKind::Rationals, Some(m), Irreducibility::Proven));
        }
        Ok(Field::from_kind(FieldKind::NumberField { minpoly }, Some(m), Irreducibility::Proven))
    }

    /// Number field from a monic minimal polynomial over `Q`.
    pub fn number_field(minpoly: Vec<BigRational>) -> FieldResult<Field> {
        let mut minpoly = minpoly;
        qpoly::trim(&mut minpoly);
        if minpoly.len() < 2 || !minpoly.last().unwrap().is_one() {
            return Err(FieldError::NotMonic);
        }
        let irreducibility = match qpoly::irreducible_over_q(&minpoly) {
            QIrreducibility::Irreducible => Irreducibility::Proven,
            QIrreducibility::Reducible => return Err(FieldError::ReducibleModulus),
            QIrreducibility::Undecided => Irreducibility::Trusted,
        };
        if minpoly.len() == 2 {
            return Ok(Field::rationals());
        }
        Ok(Field::from_kind(FieldKind::NumberField { minpoly }, None, irreducibility))
    }

    pub fn from_descriptor(desc: &FieldDescriptor) -> FieldResult<Field> {
        match desc {
            FieldDescriptor::Rationals => Ok(Field::rationals()),
            FieldDescriptor::Cyclotomic { m } => Field::cyclotomic(*m),
            FieldDescriptor::NumberField { minpoly } => {
                let coeffs = minpoly.iter().map(parse_rational_json).collect::<FieldResult<Vec<_>>>()?;
                Field::number_field(coeffs)
            }
            FieldDescriptor::PrimeField { p } => Field::prime(*p),
            FieldDescriptor::ExtField { p, deg, minpoly: None } => Field::finite(*p, *deg),
            FieldDescriptor::ExtField { p, deg, minpoly: Some(m) } => {
                if m.len() != deg + 1 {
                    return Err(FieldError::Malformed(format!("minpoly of length {} for degree {deg}", m.len())));
                }
                Field::finite_with_modulus(*p, m.clone())
            }
        }
    }

    pub fn descriptor(&self) -> FieldDescriptor {
        match (&self.0.kind, self.0.cyclotomic) {
            (_, Some(m)) => FieldDescriptor::Cyclotomic { m },
            (FieldKind::Rationals, None) => FieldDescriptor::Rationals,
            (FieldKind::NumberField { minpoly }, None) => {
                FieldDescriptor::NumberField { minpoly: minpoly.iter().map(rational_to_json).collect() }
            }
            (FieldKind::PrimeField { p }, _) => FieldDescriptor::PrimeField { p: *p },
            (FieldKind::ExtField { p, minpoly }, _) => {
                FieldDescriptor::ExtField { p: *p, deg: minpoly.len() - 1, minpoly: Some(minpoly.clone()) }
            }
        }
    }

    pub fn kind(&self) -> &FieldKind {
        &self.0.kind
    }

    pub fn irreducibility(&self) -> Irreducibility {
        self.0.irreducibility
    }

    /// `Some(m)` when built as `Q(zeta_m)`.
    pub fn cyclotomic_order(&self) -> Option<u64> {
        self.0.cyclotomic
    }

    /// Extension degree over the prime field or `Q`.
    pub fn degree(&self) -> usize {
        match &self.0.kind {
            FieldKind::Rationals | FieldKind::PrimeField { .. } => 1,
            FieldKind::NumberField { minpoly } => minpoly.len() - 1,
            FieldKind::ExtField { minpoly, .. } => minpoly.len() - 1,
        }
    }

    pub fn characteristic(&self) -> u64 {
        match &self.0.kind {
            FieldKind::Rationals | FieldKind::NumberField { .. } => 0,
            FieldKind::PrimeField { p } | FieldKind::ExtField { p, .. } => *p,
        }
    }

    pub fn is_finite(&self) -> bool {
        self.characteristic() != 0
    }

    /// Number of elements, if finite and representable.
    pub fn order(&self) -> Option<u128> {
        match &self.0.kind {
            FieldKind::PrimeField { p } => Some(*p as u128),
            FieldKind::ExtField { p, minpoly } => (*p as u128).checked_pow((minpoly.len() - 1) as u32),
            _ => None,
        }
    }

    /// The defining polynomial over `Q` (`x` for `Q` itself).
    pub fn rational_minpoly(&self) -> Option<Vec<BigRational>> {
        match &self.0.kind {
            FieldKind::Rationals => Some(vec![BigRational::zero(), BigRational::one()]),
            FieldKind::NumberField { minpoly } => Some(minpoly.clone()),
            _ => None,
        }
    }

    fn make(&self, value: Value) -> FieldElement {
        FieldElement { field: self.clone(), value }
    }

    pub fn zero(&self) -> FieldElement {
        self.from_i64(0)
    }

    pub fn one(&self) -> FieldElement {
        self.from_i64(1)
    }

    pub fn from_i64(&self, n: i64) -> FieldElement {
        match &self.0.kind {
            FieldKind::Rationals => self.make(Value::Rat(BigRational::from_integer(n.into()))),
            FieldKind::NumberField { minpoly } => {
                let mut v = vec![BigRational::zero(); minpoly.len() - 1];
                v[0] = BigRational::from_integer(n.into());
                self.make(Value::Nf(v))
            }
            FieldKind::PrimeField { p } => self.make(Value::Fp(n.rem_euclid(*p as i64) as u64)),
            FieldKind::ExtField { p, minpoly } => {
                let mut v = vec![0; minpoly.len() - 1];
                v[0] = n.rem_euclid(*p as i64) as u64;
                self.make(Value::Fq(v))
            }
        }
    }

    /// Image of a rational number; fails when the denominator vanishes in
    /// positive characteristic.
    pub fn from_rational(&self, r: &BigRational) -> FieldResult<FieldElement> {
        match &self.0.kind {
            FieldKind::Rationals => Ok(self.make(Value::Rat(r.clone()))),
            FieldKind::NumberField { minpoly } => {
                let mut v = vec![BigRational::zero(); minpoly.len() - 1];
                v[0] = r.clone();
                Ok(self.make(Value::Nf(v)))
            }
            FieldKind::PrimeField { p } | FieldKind::ExtField { p, .. } => {
                let num = reduce_bigint(r.numer(), *p);
                let den = reduce_bigint(r.denom(), *p);
                if den == 0 {
                    return Err(FieldError::DivisionByZero);
                }
                let c = modp::mul_mod(num, modp::inv_mod(den, *p), *p);
                let mut e = self.zero();
                e.set_constant_residue(c);
                Ok(e)
            }
        }
    }

    /// The generator of the power basis: `zeta_m` for `Q(zeta_m)`, the
    /// class of `t` for `F_p[t]/(m)`. For `Q` and `F_p` this is `1`.
    pub fn generator(&self) -> FieldElement {
        match &self.0.kind {
            FieldKind::NumberField { minpoly } => {
                let mut v = vec![BigRational::zero(); minpoly.len() - 1];
                v[1] = BigRational::one();
                self.make(Value::Nf(v))
            }
            FieldKind::ExtField { minpoly, .. } => {
                let mut v = vec![0; minpoly.len() - 1];
                v[1] = 1;
                self.make(Value::Fq(v))
            }
            _ => self.one(),
        }
    }

    /// Element with the given power-basis coefficients (rationals for
    /// characteristic 0, residues otherwise).
    pub fn from_rational_coeffs(&self, coeffs: &[BigRational]) -> FieldResult<FieldElement> {
        let d = self.degree();
        if coeffs.len() > d && !matches!(self.0.kind, FieldKind::Rationals) {
            return Err(FieldError::Malformed(format!("{} coefficients for degree {d}", coeffs.len())));
        }
        let mut acc = self.zero();
        let mut power = self.one();
        let g = self.generator();
        for c in coeffs {
            acc = &acc + &(&power * &self.from_rational(c)?);
            power = &power * &g;
        }
        Ok(acc)
    }

    pub fn from_residues(&self, coeffs: &[u64]) -> FieldResult<FieldElement> {
        match &self.0.kind {
            FieldKind::PrimeField { p } => {
                if coeffs.len() > 1 {
                    return Err(FieldError::Malformed("prime field elements have one coefficient".into()));
                }
                Ok(self.make(Value::Fp(coeffs.first().copied().unwrap_or(0) % p)))
            }
            FieldKind::ExtField { p, minpoly } => {
                let d = minpoly.len() - 1;
                if coeffs.len() > d {
                    return Err(FieldError::Malformed(format!("{} coefficients for degree {d}", coeffs.len())));
                }
                let mut v: Vec<u64> = coeffs.iter().map(|c| c % p).collect();
                v.resize(d, 0);
                Ok(self.make(Value::Fq(v)))
            }
            _ => Err(FieldError::Unsupported("residues in characteristic 0".into())),
        }
    }

    /// The `i`-th element in the canonical enumeration of a finite field
    /// (base-`p` digits of `i` as power-basis coefficients).
    pub fn element_from_index(&self, mut i: u128) -> FieldElement {
        match &self.0.kind {
            FieldKind::PrimeField { p } => self.make(Value::Fp((i % *p as u128) as u64)),
            FieldKind::ExtField { p, minpoly } => {
                let v = (0..minpoly.len() - 1)
                    .map(|_| {
                        let c = (i % *p as u128) as u64;
                        i /= *p as u128;
                        c
                    })
                    .collect();
                self.make(Value::Fq(v))
            }
            _ => panic!("element_from_index on an infinite field"),
        }
    }

    /// All elements of a finite field, in canonical order.
    pub fn elements(&self) -> impl Iterator<Item = FieldElement> + '_ {
        let q = self.order().expect("elements() requires a finite field");
        (0..q).map(move |i| self.element_from_index(i))
    }

    /// Uniform element for finite fields; small random rational
    /// coefficients (numerators in `-9..=9`, denominators in `1..=4`) in
    /// characteristic 0.
    pub fn random_element<R: Rng + ?Sized>(&self, rng: &mut R) -> FieldElement {
        match self.order() {
            Some(q) => self.element_from_index(rng.gen_range(0..q)),
            None => {
                let coeffs: Vec<BigRational> = (0..self.degree())
                    .map(|_| BigRational::new(rng.gen_range(-9i64..=9).into(), rng.gen_range(1i64..=4).into()))
                    .collect();
                self.from_rational_coeffs(&coeffs).expect("characteristic 0")
            }
        }
    }

    pub fn random_nonzero<R: Rng + ?Sized>(&self, rng: &mut R) -> FieldElement {
        loop {
            let e = self.random_element(rng);
            if !e.is_zero() {
                return e;
            }
        }
    }

    /// Parse an element from its JSON serialization: an array of
    /// power-basis coefficients, or a bare scalar (integer, or `"a/b"`).
    pub fn parse_element(&self, json: &Json) -> FieldResult<FieldElement> {
        let scalars: Vec<&Json> = match json {
            Json::Array(items) => items.iter().collect(),
            other => vec![other],
        };
        if self.is_finite() {
            let mut coeffs = Vec::with_capacity(scalars.len());
            for s in scalars {
                let r = parse_rational_json(s)?;
                coeffs.push(r);
            }
            let p = self.characteristic();
            let residues = coeffs
                .iter()
                .map(|r| {
                    let num = reduce_bigint(r.numer(), p);
                    let den = reduce_bigint(r.denom(), p);
                    if den == 0 {
                        Err(FieldError::DivisionByZero)
                    } else {
                        Ok(modp::mul_mod(num, modp::inv_mod(den, p), p))
                    }
                })
                .collect::<FieldResult<Vec<u64>>>()?;
            self.from_residues(&residues)
        } else {
            let coeffs = scalars.into_iter().map(parse_rational_json).collect::<FieldResult<Vec<_>>>()?;
            self.from_rational_coeffs(&coeffs)
        }
    }

    /// Parse from command-line text: JSON if it parses, else one scalar.
    pub fn parse_element_str(&self, text: &str) -> FieldResult<FieldElement> {
        let text = text.trim();
        match serde_json::from_str::<Json>(text) {
            Ok(json) => self.parse_element(&json),
            Err(_) => self.parse_element(&Json::String(text.to_string())),
        }
    }
}

fn reduce_bigint(n: &BigInt, p: u64) -> u64 {
    use num::Integer;
    n.mod_floor(&BigInt::from(p)).to_u64().unwrap()
}

/// Parse `5`, `"-3"`, `"2/3"` into a rational.
pub fn parse_rational_json(json: &Json) -> FieldResult<BigRational> {
    match json {
        Json::Number(n) => n
            .as_i64()
            .map(|i| BigRational::from_integer(i.into()))
            .ok_or_else(|| FieldError::Malformed(format!("non-integer number {n}"))),
        Json::String(s) => parse_rational_str(s),
        other => Err(FieldError::Malformed(format!("expected a scalar, got {other}"))),
    }
}

pub fn parse_rational_str(s: &str) -> FieldResult<BigRational> {
    let s = s.trim();
    let bad = || FieldError::Malformed(format!("bad rational {s:?}"));
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(FieldError::DivisionByZero);
            }
            Ok(BigRational::new(n, d))
        }
        None => Ok(BigRational::from_integer(s.parse().map_err(|_| bad())?)),
    }
}

/// `"num/den"` with positive denominator.
pub fn rational_to_json(r: &BigRational) -> Json {
    Json::String(format!("{}/{}", r.numer(), r.denom()))
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
enum Value {
    Rat(BigRational),
    Nf(Vec<BigRational>),
    Fp(u64),
    Fq(Vec<u64>),
}

/// Scalar coefficient of an element in its power basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Scalar {
    Rational(BigRational),
    Residue(u64),
}

/// An element of a [`Field`], always in canonical form.
#[derive(Clone)]
pub struct FieldElement {
    field: Field,
    value: Value,
}

impl PartialEq for FieldElement {
    fn eq(&self, other: &Self) -> bool {
        self.value == other.value && self.field == other.field
    }
}

impl Eq for FieldElement {}

impl Hash for FieldElement {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.value.hash(state)
    }
}

impl PartialOrd for FieldElement {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Canonical (not algebraic) order: coefficient vectors compared
/// lexicographically from the constant term.
impl Ord for FieldElement {
    fn cmp(&self, other: &Self) -> Ordering {
        self.value.cmp(&other.value)
    }
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.value {
            Value::Rat(r) => write!(f, "{r}"),
            Value::Fp(c) => write!(f, "{c}"),
            Value::Nf(v) => write!(f, "{}", fmt_qvec(v, "z")),
            Value::Fq(v) => {
                let terms: Vec<String> = v
                    .iter()
                    .enumerate()
                    .filter(|(_, &c)| c != 0)
                    .map(|(i, c)| match i {
                        0 => format!("{c}"),
                        1 => format!("{c}*t"),
                        _ => format!("{c}*t^{i}"),
                    })
                    .collect();
                if terms.is_empty() {
                    write!(f, "0")
                } else {
                    write!(f, "{}", terms.join(" + "))
                }
            }
        }
    }
}

impl Serialize for FieldElement {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        self.to_json().serialize(serializer)
    }
}

impl FieldElement {
    pub fn field(&self) -> &Field {
        &self.field
    }

    /// Coefficient array; rationals as `"num/den"` strings.
    pub fn to_json(&self) -> Json {
        match &self.value {
            Value::Rat(r) => Json::Array(vec![rational_to_json(r)]),
            Value::Nf(v) => Json::Array(v.iter().map(rational_to_json).collect()),
            Value::Fp(c) => Json::Array(vec![Json::from(*c)]),
            Value::Fq(v) => Json::Array(v.iter().map(|&c| Json::from(c)).collect()),
        }
    }

    pub fn coefficients(&self) -> Vec<Scalar> {
        match &self.value {
            Value::Rat(r) => vec![Scalar::Rational(r.clone())],
            Value::Nf(v) => v.iter().cloned().map(Scalar::Rational).collect(),
            Value::Fp(c) => vec![Scalar::Residue(*c)],
            Value::Fq(v) => v.iter().copied().map(Scalar::Residue).collect(),
        }
    }

    /// Power-basis coefficients over `Q` (characteristic 0 only).
    pub fn rational_coefficients(&self) -> Option<Vec<BigRational>> {
        match &self.value {
            Value::Rat(r) => Some(vec![r.clone()]),
            Value::Nf(v) => Some(v.clone()),
            _ => None,
        }
    }

    /// Power-basis residues (positive characteristic only).
    pub fn residues(&self) -> Option<Vec<u64>> {
        match &self.value {
            Value::Fp(c) => Some(vec![*c]),
            Value::Fq(v) => Some(v.clone()),
            _ => None,
        }
    }

    /// Index of this element in [`Field::elements`].
    pub fn index(&self) -> Option<u128> {
        let p = self.field.characteristic() as u128;
        self.residues().map(|v| v.iter().rev().fold(0u128, |acc, &c| acc * p + c as u128))
    }

    /// The rational value if the element lies in the prime field `Q`.
    pub fn as_rational(&self) -> Option<BigRational> {
        match &self.value {
            Value::Rat(r) => Some(r.clone()),
            Value::Nf(v) if v[1..].iter().all(|c| c.is_zero()) => Some(v[0].clone()),
            _ => None,
        }
    }

    /// The residue if the element lies in the prime field `F_p`.
    pub fn as_residue(&self) -> Option<u64> {
        match &self.value {
            Value::Fp(c) => Some(*c),
            Value::Fq(v) if v[1..].iter().all(|&c| c == 0) => Some(v[0]),
            _ => None,
        }
    }

    pub fn is_zero(&self) -> bool {
        match &self.value {
            Value::Rat(r) => r.is_zero(),
            Value::Nf(v) => v.iter().all(|c| c.is_zero()),
            Value::Fp(c) => *c == 0,
            Value::Fq(v) => v.iter().all(|&c| c == 0),
        }
    }

    pub fn is_one(&self) -> bool {
        match &self.value {
            Value::Rat(r) => r.is_one(),
            Value::Nf(v) => v[0].is_one() && v[1..].iter().all(|c| c.is_zero()),
            Value::Fp(c) => *c == 1,
            Value::Fq(v) => v[0] == 1 && v[1..].iter().all(|&c| c == 0),
        }
    }

    fn same_field(&self, other: &Self) -> FieldResult<()> {
        if self.field == other.field {
            Ok(())
        } else {
            Err(FieldError::MixedFields)
        }
    }

    fn set_constant_residue(&mut self, c: u64) {
        match &mut self.value {
            Value::Fp(x) => *x = c,
            Value::Fq(v) => v[0] = c,
            _ => unreachable!(),
        }
    }

    pub fn try_add(&self, other: &Self) -> FieldResult<Self> {
        self.same_field(other)?;
        let value = match (&self.value, &other.value) {
            (Value::Rat(a), Value::Rat(b)) => Value::Rat(a + b),
            (Value::Nf(a), Value::Nf(b)) => Value::Nf(a.iter().zip(b).map(|(x, y)| x + y).collect()),
            (Value::Fp(a), Value::Fp(b)) => Value::Fp(modp::add_mod(*a, *b, self.field.characteristic())),
            (Value::Fq(a), Value::Fq(b)) => {
                let p = self.field.characteristic();
                Value::Fq(a.iter().zip(b).map(|(&x, &y)| modp::add_mod(x, y, p)).collect())
            }
            _ => return Err(FieldError::MixedFields),
        };
        Ok(self.field.make(value))
    }

    pub fn try_sub(&self, other: &Self) -> FieldResult<Self> {
        self.same_field(other)?;
        let value = match (&self.value, &other.value) {
            (Value::Rat(a), Value::Rat(b)) => Value::Rat(a - b),
            (Value::Nf(a), Value::Nf(b)) => Value::Nf(a.iter().zip(b).map(|(x, y)| x - y).collect()),
            (Value::Fp(a), Value::Fp(b)) => Value::Fp(modp::sub_mod(*a, *b, self.field.characteristic())),
            (Value::Fq(a), Value::Fq(b)) => {
                let p = self.field.characteristic();
                Value::Fq(a.iter().zip(b).map(|(&x, &y)| modp::sub_mod(x, y, p)).collect())
            }
            _ => return Err(FieldError::MixedFields),
        };
        Ok(self.field.make(value))
    }

    pub fn try_mul(&self, other: &Self) -> FieldResult<Self> {
        self.same_field(other)?;
        let value = match (&self.value, &other.value, &self.field.0.kind) {
            (Value::Rat(a), Value::Rat(b), _) => Value::Rat(a * b),
            (Value::Nf(a), Value::Nf(b), FieldKind::NumberField { minpoly }) => {
                Value::Nf(qpoly::reduce_padded(&qpoly::mul(a, b), minpoly))
            }
            (Value::Fp(a), Value::Fp(b), FieldKind::PrimeField { p }) => Value::Fp(modp::mul_mod(*a, *b, *p)),
            (Value::Fq(a), Value::Fq(b), FieldKind::ExtField { p, minpoly }) => {
                let mut r = modp::rem(&modp::mul(a, b, *p), minpoly, *p);
                r.resize(minpoly.len() - 1, 0);
                Value::Fq(r)
            }
            _ => return Err(FieldError::MixedFields),
        };
        Ok(self.field.make(value))
    }

    pub fn inv(&self) -> FieldResult<Self> {
        if self.is_zero() {
            return Err(FieldError::DivisionByZero);
        }
        let value = match (&self.value, &self.field.0.kind) {
            (Value::Rat(a), _) => Value::Rat(a.recip()),
            (Value::Nf(a), FieldKind::NumberField { minpoly }) => {
                let mut trimmed = a.clone();
                qpoly::trim(&mut trimmed);
                let mut r = qpoly::inv_mod(&trimmed, minpoly).ok_or(FieldError::ReducibleModulus)?;
                r.resize(minpoly.len() - 1, BigRational::zero());
                Value::Nf(r)
            }
            (Value::Fp(a), FieldKind::PrimeField { p }) => Value::Fp(modp::inv_mod(*a, *p)),
            (Value::Fq(a), FieldKind::ExtField { p, minpoly }) => {
                let mut trimmed = a.clone();
                modp::trim(&mut trimmed);
                let mut r = modp::inv_poly_mod(&trimmed, minpoly, *p).ok_or(FieldError::ReducibleModulus)?;
                r.resize(minpoly.len() - 1, 0);
                Value::Fq(r)
            }
            _ => unreachable!("value kind always matches its field"),
        };
        Ok(self.field.make(value))
    }

    pub fn try_div(&self, other: &Self) -> FieldResult<Self> {
        self.same_field(other)?;
        self.try_mul(&other.inv()?)
    }

    pub fn neg(&self) -> Self {
        let value = match &self.value {
            Value::Rat(a) => Value::Rat(-a),
            Value::Nf(a) => Value::Nf(a.iter().map(|x| -x).collect()),
            Value::Fp(a) => Value::Fp(modp::sub_mod(0, *a, self.field.characteristic())),
            Value::Fq(a) => {
                let p = self.field.characteristic();
                Value::Fq(a.iter().map(|&x| modp::sub_mod(0, x, p)).collect())
            }
        };
        self.field.make(value)
    }

    /// Integer power; negative exponents invert first.
    pub fn pow(&self, exp: i64) -> FieldResult<Self> {
        if exp < 0 {
            return Ok(self.inv()?.pow_u128(exp.unsigned_abs() as u128));
        }
        Ok(self.pow_u128(exp as u128))
    }

    pub fn pow_u128(&self, mut exp: u128) -> Self {
        let mut acc = self.field.one();
        let mut base = self.clone();
        while exp > 0 {
            if exp & 1 == 1 {
                acc = &acc * &base;
            }
            exp >>= 1;
            if exp > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Multiplicative order for finite fields (`None` for zero).
    pub fn multiplicative_order(&self) -> Option<u128> {
        if self.is_zero() {
            return None;
        }
        let q = self.field.order()?;
        let mut ord = q - 1;
        for (r, _) in factor_u128(q - 1) {
            while ord % r == 0 && self.pow_u128(ord / r).is_one() {
                ord /= r;
            }
        }
        Some(ord)
    }

    /// Norm to `Q` (determinant of multiplication), characteristic 0 only.
    pub fn norm(&self) -> Option<BigRational> {
        match (&self.value, &self.field.0.kind) {
            (Value::Rat(r), _) => Some(r.clone()),
            (Value::Nf(_), FieldKind::NumberField { minpoly }) => {
                let d = minpoly.len() - 1;
                let g = self.field.generator();
                let mut rows = Vec::with_capacity(d);
                let mut basis = self.field.one();
                for _ in 0..d {
                    rows.push((&basis * self).rational_coefficients().unwrap());
                    basis = &basis * &g;
                }
                Some(rational_determinant(rows))
            }
            _ => None,
        }
    }
}

/// Distinct roots in `F_p` of a nonzero polynomial given by residues,
/// via `gcd(f, x^p - x)` and equal-degree splitting.
pub(crate) fn prime_field_roots(f: &[u64], p: u64) -> Vec<u64> {
    use rand::SeedableRng;
    let mut f = f.to_vec();
    modp::trim(&mut f);
    if f.len() < 2 {
        return Vec::new();
    }
    let f = modp::make_monic(&f, p);
    let xp = modp::powmod_poly_u64(&[0, 1], p, &f, p);
    let g = modp::gcd(&modp::sub(&xp, &[0, 1], p), &f, p);
    if g.len() < 2 {
        return Vec::new();
    }
    if p == 2 {
        return (0..2).filter(|&a| eval_residues(&g, a, p) == 0).collect();
    }
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(p);
    let mut roots: Vec<u64> =
        modp::equal_degree(&g, 1, p, &mut rng).into_iter().map(|lin| modp::sub_mod(0, lin[0], p)).collect();
    roots.sort_unstable();
    roots
}

fn eval_residues(f: &[u64], a: u64, p: u64) -> u64 {
    f.iter().rev().fold(0, |acc, &c| modp::add_mod(modp::mul_mod(acc, a, p), c, p))
}

/// Field homomorphism `source -> target`, determined by the image of the
/// power-basis generator.
#[derive(Clone, Debug)]
pub struct Embedding {
    source: Field,
    target: Field,
    image: FieldElement,
}

impl Embedding {
    /// Embed `source` into `target`: prime fields map canonically; a
    /// finite extension maps its generator to the first root of its
    /// defining polynomial in `target` (canonical enumeration order).
    pub fn new(source: &Field, target: &Field) -> FieldResult<Embedding> {
        let unsupported = || FieldError::Unsupported(format!("no embedding of {source} into {target}"));
        if source == target {
            return Ok(Embedding { source: source.clone(), target: target.clone(), image: target.generator() });
        }
        let image = match (source.kind(), target.kind()) {
            (FieldKind::Rationals, FieldKind::NumberField { .. }) => target.one(),
            (FieldKind::PrimeField { p }, _) if target.characteristic() == *p => target.one(),
            (FieldKind::ExtField { p, minpoly }, _)
                if target.characteristic() == *p && target.degree().is_multiple_of(source.degree()) =>
            {
                let coeffs: Vec<FieldElement> = minpoly.iter().map(|&c| target.from_i64(c as i64)).collect();
                target
                    .elements()
                    .find(|e| coeffs.iter().rev().fold(target.zero(), |acc, c| &(&acc * e) + c).is_zero())
                    .ok_or_else(unsupported)?
            }
            _ => return Err(unsupported()),
        };
        Ok(Embedding { source: source.clone(), target: target.clone(), image })
    }

    pub fn source(&self) -> &Field {
        &self.source
    }

    pub fn target(&self) -> &Field {
        &self.target
    }

    pub fn apply(&self, e: &FieldElement) -> FieldElement {
        assert!(e.field() == &self.source, "element outside the embedding source");
        if self.source == self.target {
            return e.clone();
        }
        let coeffs: Vec<FieldElement> = match &e.value {
            Value::Rat(r) => vec![self.target.from_rational(r).unwrap()],
            Value::Nf(v) => v.iter().map(|r| self.target.from_rational(r).unwrap()).collect(),
            Value::Fp(c) => vec![self.target.from_i64(*c as i64)],
            Value::Fq(v) => v.iter().map(|&c| self.target.from_i64(c as i64)).collect(),
        };
        coeffs.iter().rev().fold(self.target.zero(), |acc, c| &(&acc * &self.image) + c)
    }
}

pub(crate) fn factor_u128(n: u128) -> Vec<(u128, u32)> {
    if let Ok(small) = u64::try_from(n) {
        return factor_u64(small).into_iter().map(|(p, e)| (p as u128, e)).collect();
    }
    let mut out = Vec::new();
    let mut n = n;
    let mut q = 2u128;
    while q * q <= n {
        if n.is_multiple_of(q) {
            let mut e = 0;
            while n.is_multiple_of(q) {
                n /= q;
                e += 1;
            }
            out.push((q, e));
        }
        q += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

pub(crate) fn rational_determinant(mut m: Vec<Vec<BigRational>>) -> BigRational {
    let n = m.len();
    let mut det = BigRational::one();
    for col in 0..n {
        let Some(piv) = (col..n).find(|&r| !m[r][col].is_zero()) else {
            return BigRational::zero();
        };
        if piv != col {
            m.swap(piv, col);
            det = -det;
        }
        let pv = m[col][col].clone();
        det *= &pv;
        for r in col + 1..n {
            if m[r][col].is_zero() {
                continue;
            }
            let factor = &m[r][col] / &pv;
            for c in col..n {
                let delta = &factor * &m[col][c];
                m[r][c] -= delta;
            }
        }
    }
    det
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident, $try:ident, $msg:expr) => {
        impl $trait<&FieldElement> for &FieldElement {
            type Output = FieldElement;
            fn $method(self, rhs: &FieldElement) -> FieldElement {
                self.$try(rhs).expect($msg)
            }
        }
        impl $trait<FieldElement> for FieldElement {
            type Output = FieldElement;
            fn $method(self, rhs: FieldElement) -> FieldElement {
                (&self).$try(&rhs).expect($msg)
            }
        }
        impl $trait<&FieldElement> for FieldElement {
            type Output = FieldElement;
            fn $method(self, rhs: &FieldElement) -> FieldElement {
                (&self).$try(rhs).expect($msg)
            }
        }
    };
}

forward_binop!(Add, add, try_add, "field elements from different fields");
forward_binop!(Sub, sub, try_sub, "field elements from different fields");
forward_binop!(Mul, mul, try_mul, "field elements from different fields");
forward_binop!(Div, div, try_div, "division by zero or mixed fields");

impl Neg for &FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        FieldElement::neg(self)
    }
}

impl Neg for FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        FieldElement::neg(&self)
    }
}
