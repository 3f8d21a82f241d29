//! Points of order `d` and `n` on `y^d = f(x)`.
//!
//! Order `d`: exactly the ramification points `(w, 0)`. Order `n`: a point
//! `(a, c)` has order `n` iff `f = (x - a)^n + v(x)^d` with
//! `deg v <= (n - 1)/d` and `v(a) != 0`; then `c = zeta^i v(a)` and the `d`
//! points over `a` form one packet, each certified by `y - zeta^i v(x)`.

use std::fmt;

use serde_json::{json, Value as Json};
use thiserror::Error;

use crate::curve::{Curve, CurveError, CurveFunction, CurvePoint, CurveResult};
use crate::exactfield::{primitive_root_of_unity, Field, FieldElement, FieldError};
use crate::moebius::{apply_mobius, MobiusMap, ProjPoint};
use crate::upoly::{is_squarefree, poly_dth_root, roots_in_field, Poly, PolyError};

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum TorsionError {
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("hypothesis failed: {0}")]
    HypothesisFailed(String),
    #[error(transparent)]
    Curve(#[from] CurveError),
    #[error(transparent)]
    Field(#[from] FieldError),
}

/// The `d` points of order `n` over one abscissa, with the certificate
/// polynomial `v`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Packet {
    pub a: FieldElement,
    pub v: Poly,
    pub points: Vec<CurvePoint>,
}

impl Packet {
    /// `y - zeta^i v(x)` for the point `(a, zeta^i v(a))`.
    pub fn certificate_for(&self, curve: &Curve, p: &CurvePoint) -> Option<CurveFunction> {
        let y = p.y()?;
        let va = self.v.eval(&self.a);
        let rotation = y / &va;
        Some(CurveFunction::y_minus(curve, &self.v.scale(&rotation)))
    }

    pub fn to_json(&self) -> Json {
        json!({
            "a": self.a.to_json(),
            "v": self.v.to_json(),
            "points": self.points.iter().map(CurvePoint::to_json).collect::<Vec<_>>(),
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PacketResult {
    Packet(Packet),
    NoPacket,
    /// The leading coefficient's `d`-th root is undecidable in the field.
    Unknown,
}

/// Ramification points `(w, 0)` over the field. `complete` means every
/// such point of the curve over the base field is listed: always for
/// finite fields, and in characteristic 0 only when `f` splits.
pub fn points_of_order_d(curve: &Curve, candidates: &[FieldElement]) -> (Vec<CurvePoint>, bool) {
    let roots = roots_in_field(curve.f(), candidates);
    let complete = curve.field().is_finite() || roots.splits(curve.f());
    let points = roots.roots.into_iter().map(|(w, _)| CurvePoint::Affine { x: w, y: curve.field().zero() }).collect();
    (points, complete)
}

pub fn check_order_n_at(curve: &Curve, a: &FieldElement) -> PacketResult {
    let n = curve.n();
    let d = curve.d();
    let g = curve.f() - &Poly::linear_root(a).pow(n);
    let v = match poly_dth_root(&g, d) {
        Ok(v) => v,
        Err(PolyError::UnknownLeadingRoot) => return PacketResult::Unknown,
        Err(_) => return PacketResult::NoPacket,
    };
    let va = v.eval(a);
    if va.is_zero() || v.degree().unwrap_or(0) > ((n - 1) / d) as usize {
        return PacketResult::NoPacket;
    }
    let points = curve.omega_orbit(&CurvePoint::Affine { x: a.clone(), y: va });
    PacketResult::Packet(Packet { a: a.clone(), v, points })
}

/// Result of a packet scan. `complete` only for finite fields, where every
/// abscissa is tried.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PacketScan {
    pub packets: Vec<Packet>,
    pub complete: bool,
    pub undecided: Vec<FieldElement>,
}

pub fn scan_n_packets(curve: &Curve, candidates: &[FieldElement]) -> PacketScan {
    let field = curve.field();
    let abscissas: Vec<FieldElement> = if field.is_finite() { field.elements().collect() } else { candidates.to_vec() };
    let mut packets = Vec::new();
    let mut undecided = Vec::new();
    for a in abscissas {
        match check_order_n_at(curve, &a) {
            PacketResult::Packet(p) => packets.push(p),
            PacketResult::NoPacket => {}
            PacketResult::Unknown => undecided.push(a),
        }
    }
    packets.sort_by(|p, q| p.a.cmp(&q.a));
    PacketScan { packets, complete: field.is_finite() && undecided.is_empty(), undecided }
}

/// `y^d = x^n + 1`, with a packet at `a = 0` (`v = 1`).
pub fn family_mu(field: &Field, d: u32, n: u32) -> CurveResult<Curve> {
    let mut f = Poly::monomial(field.one(), n as usize);
    f = &f + &Poly::one(field);
    Curve::new(field, d, n, f)
}

/// `y^d = x^n + (b x + 1)^d` in characteristic `p` with `n` a power of `p`;
/// packet at `a = 0` with `v = b x + 1`.
pub fn family_char_p(field: &Field, d: u32, n: u32, b: &FieldElement) -> Result<Curve, TorsionError> {
    let p = field.characteristic();
    if p == 0 || !is_power_of(n as u64, p) {
        return Err(TorsionError::Precondition(format!("n = {n} must be a power of the characteristic {p}")));
    }
    if b.is_zero() {
        return Err(TorsionError::Precondition("b must be nonzero".into()));
    }
    let v = Poly::new(field, vec![field.one(), b.clone()]);
    let f = &Poly::monomial(field.one(), n as usize) + &v.pow(d);
    Ok(Curve::new(field, d, n, f)?)
}

fn is_power_of(n: u64, p: u64) -> bool {
    let mut k = n;
    while k > 1 && k.is_multiple_of(p) {
        k /= p;
    }
    k == 1 && n > 1
}

/// `{1/(gamma - 1) : gamma in mu_n, gamma != 1}`, the roots of
/// `(x + 1)^n - x^n`, ordered by the exponent of `gamma`.
pub fn eta_set(field: &Field, n: u32) -> Result<Vec<FieldElement>, TorsionError> {
    let p = field.characteristic();
    if p != 0 && (n as u64).is_multiple_of(p) {
        return Err(TorsionError::Precondition(format!("characteristic divides n = {n}")));
    }
    let zeta = primitive_root_of_unity(field, n as u64)?;
    let check = &Poly::from_i64s(field, &[1, 1]).pow(n) - &Poly::monomial(field.one(), n as usize);
    let mut out = Vec::with_capacity(n as usize - 1);
    let mut gamma = zeta.clone();
    for _ in 1..n {
        let eta = (&gamma - &field.one()).inv()?;
        assert!(check.eval(&eta).is_zero(), "eta is not a root of (x+1)^n - x^n");
        out.push(eta);
        gamma = &gamma * &zeta;
    }
    Ok(out)
}

/// Conclusions of the honest-transformation check. `constant_identity`
/// compares constant terms, `b^(n-1) = 1 + d^(n-1)`; the shorter
/// `b^(n-1) = d^(n-1)` drops the constant of `(x + 1)^n` and is reported
/// separately in `unshifted_constant_identity` without counting towards
/// [`HonestReport::all_hold`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HonestReport {
    pub leading_identity: bool,
    pub constant_identity: bool,
    pub unshifted_constant_identity: bool,
    pub b_d_nonzero: bool,
    pub determinant_nonzero: bool,
    pub eta_maps_onto_roots_of_unity: bool,
}

impl HonestReport {
    pub fn all_hold(&self) -> bool {
        self.leading_identity
            && self.constant_identity
            && self.b_d_nonzero
            && self.determinant_nonzero
            && self.eta_maps_onto_roots_of_unity
    }
}

impl fmt::Display for HonestReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "a^(n-1) = n + c^(n-1): {}, b^(n-1) = 1 + d^(n-1): {} (b^(n-1) = d^(n-1): {}), b, d != 0: {}, ad - bc != 0: {}, T(eta) = mu_(n-1): {}",
            self.leading_identity,
            self.constant_identity,
            self.unshifted_constant_identity,
            self.b_d_nonzero,
            self.determinant_nonzero,
            self.eta_maps_onto_roots_of_unity
        )
    }
}

/// Given `x^n + (a x + b)^(n-1) = (x + 1)^n + (c x + d)^(n-1)` with the
/// left side squarefree, report the consequences for `T = (a z + b)/(c z + d)`.
pub fn honest_check(
    field: &Field,
    n: u32,
    a: &FieldElement,
    b: &FieldElement,
    c: &FieldElement,
    d: &FieldElement,
) -> Result<HonestReport, TorsionError> {
    honest_check_scaled(field, n, &field.one(), a, b, c, d)
}

/// [`honest_check`] for the coefficients `lambda*a, ..., lambda*d` where
/// only `scale = lambda^(n-1)` is known, so `lambda` need not lie in the
/// field. `T` does not depend on `lambda`.
pub fn honest_check_scaled(
    field: &Field,
    n: u32,
    scale: &FieldElement,
    a: &FieldElement,
    b: &FieldElement,
    c: &FieldElement,
    d: &FieldElement,
) -> Result<HonestReport, TorsionError> {
    let p = field.characteristic();
    if p != 0 && (n as u64 * (n as u64 - 1)).is_multiple_of(p) {
        return Err(TorsionError::Precondition(format!("characteristic divides n(n-1) = {}", n * (n - 1))));
    }
    if scale.is_zero() {
        return Err(TorsionError::Precondition("scale must be nonzero".into()));
    }
    let e = n - 1;
    let lhs =
        &Poly::monomial(field.one(), n as usize) + &Poly::new(field, vec![b.clone(), a.clone()]).pow(e).scale(scale);
    let rhs =
        &Poly::from_i64s(field, &[1, 1]).pow(n) + &Poly::new(field, vec![d.clone(), c.clone()]).pow(e).scale(scale);
    if lhs != rhs {
        return Err(TorsionError::HypothesisFailed(format!(
            "x^n + (ax+b)^(n-1) = {lhs} differs from (x+1)^n + (cx+d)^(n-1) = {rhs}"
        )));
    }
    if !is_squarefree(&lhs) {
        return Err(TorsionError::HypothesisFailed(format!("{lhs} has a repeated root")));
    }
    let pow = |z: &FieldElement| z.pow(e as i64).expect("nonnegative exponent");
    let leading_identity = (scale * &pow(a)) == (&field.from_i64(n as i64) + &(scale * &pow(c)));
    let constant_identity = (scale * &pow(b)) == (&field.one() + &(scale * &pow(d)));
    let unshifted_constant_identity = pow(b) == pow(d);
    let b_d_nonzero = !b.is_zero() && !d.is_zero();
    let det = &(a * d) - &(b * c);
    let determinant_nonzero = !det.is_zero();
    let eta_maps_onto_roots_of_unity = determinant_nonzero && maps_eta_onto_mu(field, n, a, b, c, d)?;
    Ok(HonestReport {
        leading_identity,
        constant_identity,
        unshifted_constant_identity,
        b_d_nonzero,
        determinant_nonzero,
        eta_maps_onto_roots_of_unity,
    })
}

fn maps_eta_onto_mu(
    field: &Field,
    n: u32,
    a: &FieldElement,
    b: &FieldElement,
    c: &FieldElement,
    d: &FieldElement,
) -> Result<bool, TorsionError> {
    let etas = eta_set(field, n)?;
    let t = MobiusMap::new(a.clone(), b.clone(), c.clone(), d.clone()).expect("nonzero determinant");
    let mut images = Vec::with_capacity(etas.len());
    for eta in &etas {
        match apply_mobius(&t, &ProjPoint::Finite(eta.clone())) {
            ProjPoint::Finite(z) if z.pow((n - 1) as i64)?.is_one() => images.push(z),
            _ => return Ok(false),
        }
    }
    images.sort();
    images.dedup();
    Ok(images.len() == (n - 1) as usize)
}
