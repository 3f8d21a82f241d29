//! Superelliptic curves `y^d = f(x)`, their points, the `mu_d` action
//! `omega: (a, c) -> (a, zeta*c)`, divisors and valuations.
//!
//! A curve has a single point at infinity because `gcd(n, d) = 1`; there
//! `x` has a pole of order `d` and `y` one of order `n`.

use std::collections::BTreeMap;
use std::fmt;

use num::Integer;
use rand::Rng;
use serde_json::{json, Value as Json};
use thiserror::Error;

use crate::exactfield::{
    dth_root, primitive_root_of_unity, Field, FieldDescriptor, FieldElement, FieldError, RootResult,
};
use crate::rr_oracle::local_expansion;
use crate::upoly::{is_squarefree, roots_in_field, Poly, PolyError};

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum CurveError {
    #[error("need 2 <= d < n, got d = {d}, n = {n}")]
    DegreeOrder { d: u32, n: u32 },
    #[error("gcd(n, d) = {0}, expected 1")]
    NotCoprime(u32),
    #[error("characteristic {p} divides d = {d}")]
    BadCharacteristic { p: u64, d: u32 },
    #[error("f is not monic")]
    NotMonic,
    #[error("deg f = {actual:?}, expected n = {expected}")]
    DegreeMismatch { expected: u32, actual: Option<usize> },
    #[error("f has a repeated root")]
    NotSquarefree,
    #[error("field lacks a primitive d-th root of unity ({0}); enlarge the field")]
    NoDthRootOfUnity(String),
    #[error("cannot decide whether f(a) is a d-th power in this field")]
    UndecidableRoot,
    #[error("roots of F are not all known in the field")]
    IncompleteFactorization,
    #[error("points over the root {0} are not defined over the field")]
    PointsNotRational(String),
    #[error("lambda^n has no d-th root in the field; enlarge the field")]
    RootNotInField,
    #[error("point is not on the curve")]
    NotOnCurve,
    #[error("the zero function has no valuation")]
    ZeroFunction,
    #[error("the two abscissas must differ")]
    SameAbscissa,
    #[error("divisor must have degree 0, has degree {0}")]
    NonzeroDegree(i64),
    #[error("malformed input: {0}")]
    Malformed(String),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Field(#[from] FieldError),
}

pub type CurveResult<T> = Result<T, CurveError>;

/// A validated curve `y^d = f(x)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Curve {
    field: Field,
    d: u32,
    n: u32,
    f: Poly,
    zeta: FieldElement,
    genus: u32,
}

impl fmt::Display for Curve {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "y^{} = {} over {}", self.d, self.f, self.field)
    }
}

impl Curve {
    pub fn new(field: &Field, d: u32, n: u32, f: Poly) -> CurveResult<Curve> {
        if d < 2 || d >= n {
            return Err(CurveError::DegreeOrder { d, n });
        }
        let g = n.gcd(&d);
        if g != 1 {
            return Err(CurveError::NotCoprime(g));
        }
        let p = field.characteristic();
        if p != 0 && (d as u64).is_multiple_of(p) {
            return Err(CurveError::BadCharacteristic { p, d });
        }
        if f.field() != field {
            return Err(CurveError::Field(FieldError::MixedFields));
        }
        if !f.is_monic() {
            return Err(CurveError::NotMonic);
        }
        if f.degree() != Some(n as usize) {
            return Err(CurveError::DegreeMismatch { expected: n, actual: f.degree() });
        }
        if !is_squarefree(&f) {
            return Err(CurveError::NotSquarefree);
        }
        let zeta = primitive_root_of_unity(field, d as u64).map_err(|e| CurveError::NoDthRootOfUnity(e.to_string()))?;
        Ok(Curve { field: field.clone(), d, n, f, zeta, genus: (n - 1) * (d - 1) / 2 })
    }

    /// A curve with uniformly random monic squarefree `f` of degree `n`.
    pub fn random<R: Rng + ?Sized>(field: &Field, d: u32, n: u32, rng: &mut R) -> CurveResult<Curve> {
        loop {
            let mut coeffs: Vec<FieldElement> = (0..n).map(|_| field.random_element(rng)).collect();
            coeffs.push(field.one());
            match Curve::new(field, d, n, Poly::new(field, coeffs)) {
                Err(CurveError::NotSquarefree) => continue,
                other => return other,
            }
        }
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn d(&self) -> u32 {
        self.d
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn f(&self) -> &Poly {
        &self.f
    }

    /// The primitive `d`-th root of unity defining `omega`.
    pub fn zeta(&self) -> &FieldElement {
        &self.zeta
    }

    pub fn genus(&self) -> u32 {
        self.genus
    }

    pub fn contains(&self, p: &CurvePoint) -> bool {
        match p {
            CurvePoint::Infinity => true,
            CurvePoint::Affine { x, y } => {
                x.field() == &self.field
                    && y.field() == &self.field
                    && y.pow(self.d as i64).ok() == Some(self.f.eval(x))
            }
        }
    }

    /// Checked affine point.
    pub fn point(&self, x: FieldElement, y: FieldElement) -> CurveResult<CurvePoint> {
        let p = CurvePoint::Affine { x, y };
        if self.contains(&p) {
            Ok(p)
        } else {
            Err(CurveError::NotOnCurve)
        }
    }

    /// All points with abscissa `a`, sorted.
    pub fn lift_x(&self, a: &FieldElement) -> CurveResult<Vec<CurvePoint>> {
        let fa = self.f.eval(a);
        if fa.is_zero() {
            return Ok(vec![CurvePoint::Affine { x: a.clone(), y: fa }]);
        }
        match dth_root(&fa, self.d as u64) {
            RootResult::Root(c) => Ok(self.omega_orbit(&CurvePoint::Affine { x: a.clone(), y: c })),
            RootResult::NoRoot => Ok(Vec::new()),
            RootResult::Unknown => Err(CurveError::UndecidableRoot),
        }
    }

    /// Every affine point over a finite field.
    pub fn affine_points(&self) -> Vec<CurvePoint> {
        self.field.elements().flat_map(|a| self.lift_x(&a).expect("finite fields decide roots")).collect()
    }

    pub fn omega(&self, p: &CurvePoint) -> CurvePoint {
        match p {
            CurvePoint::Infinity => CurvePoint::Infinity,
            CurvePoint::Affine { x, y } => CurvePoint::Affine { x: x.clone(), y: y * &self.zeta },
        }
    }

    /// `{omega^i P}`, deduplicated and sorted.
    pub fn omega_orbit(&self, p: &CurvePoint) -> Vec<CurvePoint> {
        let mut out = Vec::with_capacity(self.d as usize);
        let mut cur = p.clone();
        for _ in 0..self.d {
            out.push(cur.clone());
            cur = self.omega(&cur);
        }
        out.sort();
        out.dedup();
        out
    }

    /// Divisor of a polynomial in `x`: each root `a` of multiplicity `c`
    /// contributes `c * sum_i (omega^i P)` and infinity gets `-d deg F`.
    /// Number-field roots are looked up among `candidates`.
    pub fn div_of_x_poly(&self, big_f: &Poly, candidates: &[FieldElement]) -> CurveResult<Divisor> {
        let roots = roots_in_field(big_f, candidates);
        if !roots.splits(big_f) {
            return Err(CurveError::IncompleteFactorization);
        }
        let mut div = Divisor::zero();
        for (a, mult) in &roots.roots {
            let pts = self.lift_x(a)?;
            if pts.is_empty() {
                return Err(CurveError::PointsNotRational(a.to_string()));
            }
            let per_point = (self.d as usize / pts.len() * mult) as i64;
            for p in pts {
                div.add_point(p, per_point);
            }
        }
        div.add_point(CurvePoint::Infinity, -(self.d as i64) * big_f.degree().unwrap_or(0) as i64);
        Ok(div)
    }

    /// `v_P(h)`.
    pub fn valuation_at(&self, p: &CurvePoint, h: &CurveFunction) -> CurveResult<i64> {
        if h.is_zero() {
            return Err(CurveError::ZeroFunction);
        }
        let pole = h.pole_order(self);
        let CurvePoint::Affine { .. } = p else { return Ok(-pole) };
        if !self.contains(p) {
            return Err(CurveError::NotOnCurve);
        }
        // a nonzero function has at most `pole` zeros counted with multiplicity
        let bound = pole as usize + 1;
        let mut precision = bound.min(16);
        loop {
            let exp = local_expansion(self, p, precision);
            let series = exp.evaluate(h);
            if let Some(v) = series.iter().position(|c| !c.is_zero()) {
                return Ok(v as i64);
            }
            if precision >= bound {
                unreachable!("valuation exceeds the pole order of a nonzero function");
            }
            precision = (precision * 2).min(bound);
        }
    }

    /// True iff `div(h) = m(P) - m(infinity)`.
    pub fn verify_certificate(&self, p: &CurvePoint, m: u32, h: &CurveFunction) -> bool {
        if h.is_zero() || !matches!(p, CurvePoint::Affine { .. }) {
            return false;
        }
        if h.pole_order(self) != m as i64 {
            return false;
        }
        self.valuation_at(p, h).ok() == Some(m as i64)
    }

    /// `sum_i omega^i D`.
    pub fn omega_trace(&self, div: &Divisor) -> Divisor {
        let mut out = Divisor::zero();
        for (p, c) in div.iter() {
            let mut cur = p.clone();
            for _ in 0..self.d {
                out.add_point(cur.clone(), c);
                cur = self.omega(&cur);
            }
        }
        out
    }

    /// For `D` of degree 0, the rational function `F(x)` with
    /// `div F = sum_i omega^i D`, checked against [`Curve::div_of_x_poly`].
    pub fn trace_principal_witness(&self, div: &Divisor) -> CurveResult<RationalFunction> {
        if div.degree() != 0 {
            return Err(CurveError::NonzeroDegree(div.degree()));
        }
        let mut num = Poly::one(&self.field);
        let mut den = Poly::one(&self.field);
        let mut abscissas = Vec::new();
        for (p, c) in div.iter() {
            if let CurvePoint::Affine { x, .. } = p {
                if !self.contains(p) {
                    return Err(CurveError::NotOnCurve);
                }
                let factor = Poly::linear_root(x).pow(c.unsigned_abs() as u32);
                if c > 0 {
                    num = &num * &factor;
                } else {
                    den = &den * &factor;
                }
                abscissas.push(x.clone());
            }
        }
        let g = num.gcd(&den)?;
        let num = num.exact_div(&g)?.expect("gcd divides");
        let den = den.exact_div(&g)?.expect("gcd divides");
        let witness = RationalFunction { num, den };
        let principal =
            self.div_of_x_poly(&witness.num, &abscissas)?.sub(&self.div_of_x_poly(&witness.den, &abscissas)?);
        assert_eq!(principal, self.omega_trace(div), "trace witness has the wrong divisor");
        Ok(witness)
    }

    /// Move `a0, a1` to abscissas `0, -1` via `x = lambda*x' + mu` with
    /// `mu = a0`, `lambda = a0 - a1`.
    pub fn renormalize_two_points(&self, a0: &FieldElement, a1: &FieldElement) -> CurveResult<(Curve, PointMap)> {
        if a0 == a1 {
            return Err(CurveError::SameAbscissa);
        }
        let lambda = a0 - a1;
        let mu = a0.clone();
        let lambda_n = lambda.pow(self.n as i64)?;
        let kappa = match dth_root(&lambda_n, self.d as u64) {
            RootResult::Root(r) => r,
            _ => return Err(CurveError::RootNotInField),
        };
        let f_new = self.f.compose_linear(&lambda, &mu).scale(&lambda_n.inv()?);
        let mut curve = Curve::new(&self.field, self.d, self.n, f_new)?;
        curve.zeta = self.zeta.clone();
        Ok((curve, PointMap { lambda, mu, kappa }))
    }

    pub fn to_json(&self) -> Json {
        json!({
            "field": self.field.descriptor(),
            "d": self.d,
            "n": self.n,
            "f": self.f.to_json(),
        })
    }

    pub fn from_json(json: &Json) -> CurveResult<Curve> {
        let bad = |what: &str| CurveError::Malformed(format!("curve JSON: {what}"));
        let desc: FieldDescriptor =
            serde_json::from_value(json.get("field").cloned().ok_or_else(|| bad("missing field"))?)
                .map_err(|e| bad(&e.to_string()))?;
        let field = Field::from_descriptor(&desc)?;
        let d = json.get("d").and_then(Json::as_u64).ok_or_else(|| bad("missing d"))? as u32;
        let n = json.get("n").and_then(Json::as_u64).ok_or_else(|| bad("missing n"))? as u32;
        let f = Poly::from_json(&field, json.get("f").ok_or_else(|| bad("missing f"))?)?;
        Curve::new(&field, d, n, f)
    }

    pub fn parse_point(&self, json: &Json) -> CurveResult<CurvePoint> {
        match json {
            Json::String(s) if s == "inf" => Ok(CurvePoint::Infinity),
            Json::Object(map) => {
                let get = |k: &str| map.get(k).ok_or_else(|| CurveError::Malformed(format!("point missing {k}")));
                let x = self.field.parse_element(get("x")?)?;
                let y = self.field.parse_element(get("y")?)?;
                self.point(x, y)
            }
            other => Err(CurveError::Malformed(format!("bad point {other}"))),
        }
    }
}

/// `(x, y) = (lambda*x' + mu, kappa*y')` between a renormalized curve
/// (primed) and the original, with `kappa^d = lambda^n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PointMap {
    pub lambda: FieldElement,
    pub mu: FieldElement,
    pub kappa: FieldElement,
}

impl PointMap {
    pub fn to_original(&self, p: &CurvePoint) -> CurvePoint {
        match p {
            CurvePoint::Infinity => CurvePoint::Infinity,
            CurvePoint::Affine { x, y } => CurvePoint::Affine { x: &(&self.lambda * x) + &self.mu, y: &self.kappa * y },
        }
    }

    pub fn to_renormalized(&self, p: &CurvePoint) -> CurvePoint {
        match p {
            CurvePoint::Infinity => CurvePoint::Infinity,
            CurvePoint::Affine { x, y } => CurvePoint::Affine { x: &(x - &self.mu) / &self.lambda, y: y / &self.kappa },
        }
    }
}

/// A point of the smooth model: the point at infinity or `(x, y)`.
/// Ordered with infinity first, then by canonical coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CurvePoint {
    Infinity,
    Affine { x: FieldElement, y: FieldElement },
}

impl CurvePoint {
    pub fn x(&self) -> Option<&FieldElement> {
        match self {
            CurvePoint::Affine { x, .. } => Some(x),
            CurvePoint::Infinity => None,
        }
    }

    pub fn y(&self) -> Option<&FieldElement> {
        match self {
            CurvePoint::Affine { y, .. } => Some(y),
            CurvePoint::Infinity => None,
        }
    }

    pub fn to_json(&self) -> Json {
        match self {
            CurvePoint::Infinity => json!("inf"),
            CurvePoint::Affine { x, y } => json!({ "x": x.to_json(), "y": y.to_json() }),
        }
    }
}

impl fmt::Display for CurvePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CurvePoint::Infinity => write!(f, "inf"),
            CurvePoint::Affine { x, y } => write!(f, "({x}, {y})"),
        }
    }
}

/// Finite formal sum of points; zero coefficients are never stored.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Divisor {
    support: BTreeMap<CurvePoint, i64>,
}

impl Divisor {
    pub fn zero() -> Divisor {
        Divisor::default()
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (CurvePoint, i64)>) -> Divisor {
        let mut d = Divisor::zero();
        for (p, c) in terms {
            d.add_point(p, c);
        }
        d
    }

    pub fn add_point(&mut self, p: CurvePoint, c: i64) {
        let entry = self.support.entry(p.clone()).or_insert(0);
        *entry += c;
        if *entry == 0 {
            self.support.remove(&p);
        }
    }

    pub fn coefficient(&self, p: &CurvePoint) -> i64 {
        self.support.get(p).copied().unwrap_or(0)
    }

    pub fn degree(&self) -> i64 {
        self.support.values().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.support.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&CurvePoint, i64)> {
        self.support.iter().map(|(p, &c)| (p, c))
    }

    pub fn add(&self, other: &Divisor) -> Divisor {
        let mut out = self.clone();
        for (p, c) in other.iter() {
            out.add_point(p.clone(), c);
        }
        out
    }

    pub fn sub(&self, other: &Divisor) -> Divisor {
        self.add(&other.scale(-1))
    }

    pub fn scale(&self, k: i64) -> Divisor {
        if k == 0 {
            return Divisor::zero();
        }
        Divisor { support: self.support.iter().map(|(p, &c)| (p.clone(), c * k)).collect() }
    }

    pub fn to_json(&self) -> Json {
        Json::Array(self.iter().map(|(p, c)| json!({ "point": p.to_json(), "coeff": c })).collect())
    }
}

impl fmt::Display for Divisor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let terms: Vec<String> = self.iter().map(|(p, c)| format!("{c}{p}")).collect();
        write!(f, "{}", terms.join(" + "))
    }
}

/// A function regular away from infinity, in reduced form
/// `sum_{j<d} s_j(x) y^j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CurveFunction {
    parts: Vec<Poly>,
}

impl CurveFunction {
    pub fn zero(curve: &Curve) -> CurveFunction {
        CurveFunction { parts: vec![Poly::zero(curve.field()); curve.d() as usize] }
    }

    /// `sum_j parts[j] * y^j`; `parts` may be shorter than `d`.
    pub fn from_parts(curve: &Curve, parts: Vec<Poly>) -> CurveFunction {
        assert!(parts.len() <= curve.d() as usize, "parts beyond y^(d-1)");
        let mut parts = parts;
        parts.resize(curve.d() as usize, Poly::zero(curve.field()));
        CurveFunction { parts }
    }

    pub fn from_x_poly(curve: &Curve, s: Poly) -> CurveFunction {
        CurveFunction::from_parts(curve, vec![s])
    }

    /// `y - v(x)`, the shape of every order-`n` certificate.
    pub fn y_minus(curve: &Curve, v: &Poly) -> CurveFunction {
        CurveFunction::from_parts(curve, vec![v.neg(), Poly::one(curve.field())])
    }

    /// `x^i y^j` with `j < d`.
    pub fn monomial(curve: &Curve, i: usize, j: usize) -> CurveFunction {
        let mut f = CurveFunction::zero(curve);
        f.parts[j] = Poly::monomial(curve.field().one(), i);
        f
    }

    pub fn parts(&self) -> &[Poly] {
        &self.parts
    }

    pub fn is_zero(&self) -> bool {
        self.parts.iter().all(Poly::is_zero)
    }

    pub fn add(&self, other: &CurveFunction) -> CurveFunction {
        CurveFunction { parts: self.parts.iter().zip(&other.parts).map(|(a, b)| a + b).collect() }
    }

    pub fn scale(&self, c: &FieldElement) -> CurveFunction {
        CurveFunction { parts: self.parts.iter().map(|p| p.scale(c)).collect() }
    }

    /// Product reduced by `y^d = f(x)`.
    pub fn mul(&self, other: &CurveFunction, curve: &Curve) -> CurveFunction {
        let d = curve.d() as usize;
        let mut parts = vec![Poly::zero(curve.field()); d];
        for (i, a) in self.parts.iter().enumerate() {
            for (j, b) in other.parts.iter().enumerate() {
                if a.is_zero() || b.is_zero() {
                    continue;
                }
                let mut term = a * b;
                if i + j >= d {
                    term = &term * curve.f();
                }
                parts[(i + j) % d] = &parts[(i + j) % d] + &term;
            }
        }
        CurveFunction { parts }
    }

    /// Pole order at infinity: the largest `d deg s_j + n j`, attained by
    /// a single term since those values are distinct mod `d`.
    pub fn pole_order(&self, curve: &Curve) -> i64 {
        self.parts
            .iter()
            .enumerate()
            .filter_map(|(j, s)| s.degree().map(|deg| (curve.d() as usize * deg + curve.n() as usize * j) as i64))
            .max()
            .unwrap_or(i64::MIN)
    }

    pub fn eval(&self, p: &CurvePoint) -> Option<FieldElement> {
        let CurvePoint::Affine { x, y } = p else { return None };
        let mut acc = x.field().zero();
        for s in self.parts.iter().rev() {
            acc = &(&acc * y) + &s.eval(x);
        }
        Some(acc)
    }

    pub fn to_json(&self) -> Json {
        Json::Array(self.parts.iter().map(Poly::to_json).collect())
    }
}

impl fmt::Display for CurveFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<String> = self
            .parts
            .iter()
            .enumerate()
            .filter(|(_, s)| !s.is_zero())
            .map(|(j, s)| match j {
                0 => format!("({s})"),
                1 => format!("({s})*y"),
                _ => format!("({s})*y^{j}"),
            })
            .collect();
        if terms.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", terms.join(" + "))
        }
    }
}

/// `num(x) / den(x)` in lowest terms.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalFunction {
    pub num: Poly,
    pub den: Poly,
}
