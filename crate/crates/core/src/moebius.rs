//! Points of the projective line, linear fractional maps and cross-ratios.
//!
//! Cross-ratio convention: `[z1, z2; z3, z4] = ((z3 - z1)(z4 - z2)) / ((z3 - z2)(z4 - z1))`,
//! so that `[1, e; e^2, e^3] = ((e^2 - 1)(e^3 - e)) / ((e^2 - e)(e^3 - 1))`.
//! A point at infinity cancels the two factors it appears in.

use std::fmt;

use serde_json::{json, Value as Json};
use thiserror::Error;

use crate::exactfield::{minimal_polynomial_over_q, Field, FieldElement, FieldError};

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum MoebiusError {
    #[error("points are not pairwise distinct")]
    RepeatedPoint,
    #[error("ad - bc = 0")]
    Singular,
    #[error("1, e, e^2, e^3 are not distinct for n = {0}")]
    DegenerateQuadruple(u32),
    #[error("n = {0} is below 3")]
    TooSmall(u32),
    #[error(transparent)]
    Field(#[from] FieldError),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ProjPoint {
    Finite(FieldElement),
    Infinity,
}

impl ProjPoint {
    pub fn finite(&self) -> Option<&FieldElement> {
        match self {
            ProjPoint::Finite(z) => Some(z),
            ProjPoint::Infinity => None,
        }
    }

    pub fn to_json(&self) -> Json {
        match self {
            ProjPoint::Finite(z) => z.to_json(),
            ProjPoint::Infinity => json!("inf"),
        }
    }
}

impl From<FieldElement> for ProjPoint {
    fn from(z: FieldElement) -> ProjPoint {
        ProjPoint::Finite(z)
    }
}

impl fmt::Display for ProjPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ProjPoint::Finite(z) => write!(f, "{z}"),
            ProjPoint::Infinity => write!(f, "inf"),
        }
    }
}

/// `z -> (a z + b)/(c z + d)`, stored with the first nonzero entry equal to 1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MobiusMap {
    a: FieldElement,
    b: FieldElement,
    c: FieldElement,
    d: FieldElement,
}

impl MobiusMap {
    pub fn new(a: FieldElement, b: FieldElement, c: FieldElement, d: FieldElement) -> Result<MobiusMap, MoebiusError> {
        let m = MobiusMap::unnormalized(a, b, c, d)?;
        let lead = [&m.a, &m.b, &m.c].into_iter().find(|e| !e.is_zero()).unwrap_or(&m.d).inv()?;
        Ok(m.scaled(&lead))
    }

    /// Keeps the given representative as is.
    pub fn unnormalized(
        a: FieldElement,
        b: FieldElement,
        c: FieldElement,
        d: FieldElement,
    ) -> Result<MobiusMap, MoebiusError> {
        if (&(&a * &d) - &(&b * &c)).is_zero() {
            return Err(MoebiusError::Singular);
        }
        Ok(MobiusMap { a, b, c, d })
    }

    pub fn identity(field: &Field) -> MobiusMap {
        MobiusMap { a: field.one(), b: field.zero(), c: field.zero(), d: field.one() }
    }

    pub fn entries(&self) -> [&FieldElement; 4] {
        [&self.a, &self.b, &self.c, &self.d]
    }

    pub fn determinant(&self) -> FieldElement {
        &(&self.a * &self.d) - &(&self.b * &self.c)
    }

    pub fn scaled(&self, s: &FieldElement) -> MobiusMap {
        MobiusMap { a: &self.a * s, b: &self.b * s, c: &self.c * s, d: &self.d * s }
    }

    /// `self` after `other`.
    pub fn compose(&self, other: &MobiusMap) -> MobiusMap {
        let (a, b, c, d) = (&self.a, &self.b, &self.c, &self.d);
        let (e, f, g, h) = (&other.a, &other.b, &other.c, &other.d);
        MobiusMap::new(&(a * e) + &(b * g), &(a * f) + &(b * h), &(c * e) + &(d * g), &(c * f) + &(d * h))
            .expect("product of invertible maps")
    }

    pub fn inverse(&self) -> MobiusMap {
        MobiusMap::new(self.d.clone(), -&self.b, -&self.c, self.a.clone()).expect("invertible")
    }

    pub fn to_json(&self) -> Json {
        json!([self.a.to_json(), self.b.to_json(), self.c.to_json(), self.d.to_json()])
    }
}

pub fn apply_mobius(m: &MobiusMap, z: &ProjPoint) -> ProjPoint {
    match z {
        ProjPoint::Infinity if m.c.is_zero() => ProjPoint::Infinity,
        ProjPoint::Infinity => ProjPoint::Finite(&m.a / &m.c),
        ProjPoint::Finite(z) => {
            let den = &(&m.c * z) + &m.d;
            if den.is_zero() {
                ProjPoint::Infinity
            } else {
                ProjPoint::Finite(&(&(&m.a * z) + &m.b) / &den)
            }
        }
    }
}

fn distinct(points: &[&ProjPoint]) -> bool {
    (0..points.len()).all(|i| (i + 1..points.len()).all(|j| points[i] != points[j]))
}

pub fn cross_ratio(
    z1: &ProjPoint,
    z2: &ProjPoint,
    z3: &ProjPoint,
    z4: &ProjPoint,
) -> Result<FieldElement, MoebiusError> {
    if !distinct(&[z1, z2, z3, z4]) {
        return Err(MoebiusError::RepeatedPoint);
    }
    let diff = |u: &ProjPoint, v: &ProjPoint| -> Option<FieldElement> { Some(u.finite()? - v.finite()?) };
    let factors = [diff(z3, z1), diff(z4, z2), diff(z3, z2), diff(z4, z1)];
    let field =
        [z1, z2, z3, z4].iter().find_map(|z| z.finite()).expect("at most one point at infinity").field().clone();
    let pick = |f: &Option<FieldElement>| f.clone().unwrap_or_else(|| field.one());
    let num = &pick(&factors[0]) * &pick(&factors[1]);
    let den = &pick(&factors[2]) * &pick(&factors[3]);
    Ok(&num / &den)
}

/// The map sending `(z1, z2, z3)` to `(0, 1, inf)`.
fn to_standard(z: [&ProjPoint; 3], field: &Field) -> MobiusMap {
    let one = field.one();
    let zero = field.zero();
    let entries = match z {
        [ProjPoint::Infinity, ProjPoint::Finite(z2), ProjPoint::Finite(z3)] => (zero, z2 - z3, one, -z3),
        [ProjPoint::Finite(z1), ProjPoint::Infinity, ProjPoint::Finite(z3)] => (one.clone(), -z1, one, -z3),
        [ProjPoint::Finite(z1), ProjPoint::Finite(z2), ProjPoint::Infinity] => (one, -z1, zero, z2 - z1),
        [ProjPoint::Finite(z1), ProjPoint::Finite(z2), ProjPoint::Finite(z3)] => {
            let s = z2 - z3;
            let t = z2 - z1;
            (s.clone(), -&(z1 * &s), t.clone(), -&(z3 * &t))
        }
        _ => unreachable!("points are distinct"),
    };
    MobiusMap::new(entries.0, entries.1, entries.2, entries.3).expect("distinct points")
}

/// The unique map with `sources[i] -> targets[i]`.
pub fn mobius_through(sources: [&ProjPoint; 3], targets: [&ProjPoint; 3]) -> Result<MobiusMap, MoebiusError> {
    if !distinct(&sources) || !distinct(&targets) {
        return Err(MoebiusError::RepeatedPoint);
    }
    let field = sources
        .iter()
        .chain(targets.iter())
        .find_map(|z| z.finite())
        .expect("three distinct points include a finite one")
        .field()
        .clone();
    let m = to_standard(targets, &field).inverse().compose(&to_standard(sources, &field));
    for (s, t) in sources.iter().zip(targets) {
        assert_eq!(&apply_mobius(&m, s), t, "mobius_through misses {s} -> {t}");
    }
    Ok(m)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LemmaGenReport {
    pub n: u32,
    pub r: FieldElement,
    pub minpoly_degree: usize,
    pub obstructed: bool,
}

impl LemmaGenReport {
    pub fn to_json(&self) -> Json {
        json!({
            "n": self.n,
            "r": self.r.to_json(),
            "minpolyDegree": self.minpoly_degree,
            "obstructed": self.obstructed,
        })
    }
}

/// Cross-ratio of `1, e, e^2, e^3` for a primitive `n`-th root `e` in
/// `Q(zeta_n)`. A map over `K` sending these to four prescribed points with
/// rational cross-ratio can only exist when this value is rational.
pub fn lemma_gen_check(n: u32) -> Result<LemmaGenReport, MoebiusError> {
    if n < 3 {
        return Err(MoebiusError::TooSmall(n));
    }
    if n == 3 {
        return Err(MoebiusError::DegenerateQuadruple(n));
    }
    let field = Field::cyclotomic(n as u64)?;
    let e = field.generator();
    let powers: Vec<ProjPoint> = (0..4).map(|k| ProjPoint::Finite(e.pow(k).expect("nonnegative"))).collect();
    let r = cross_ratio(&powers[0], &powers[1], &powers[2], &powers[3])?;
    let minpoly_degree = minimal_polynomial_over_q(&r)?.degree().unwrap_or(0);
    Ok(LemmaGenReport { n, r, minpoly_degree, obstructed: minpoly_degree > 1 })
}
