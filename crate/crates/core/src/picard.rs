//! Monic quartics `f` whose curve `y^3 = f(x)` has all points over `x = 0`
//! and `x = -1` of order 4, built from bijections `phi: H -> mu_3` where `H`
//! is the root set of `(x + 1)^4 - x^4`.
//!
//! The map `T = (a z + b)/(c z + d)` with `T|H = phi` is only determined up to
//! scale; the quartic needs the scale `lambda` with `(lambda a)^3 - (lambda c)^3 = 4`.
//! Everything here is written in terms of `L = lambda^3`, which lies in
//! `Q(zeta_12)`, so `lambda` is never adjoined:
//! `f = x^4 + L (a x + b)^3 = (x + 1)^4 + L (c x + d)^3`.

use serde_json::{json, Value as Json};
use thiserror::Error;

use crate::curve::{Curve, CurvePoint};
use crate::exactfield::{dth_root, primitive_root_of_unity, Field, FieldElement, FieldError, RootResult};
use crate::moebius::{apply_mobius, mobius_through, MobiusMap, ProjPoint};
use crate::rr_oracle::point_order;
use crate::torsion::{eta_set, honest_check_scaled, HonestReport, TorsionError};
use crate::upoly::{discriminant, is_squarefree, poly_dth_root, Poly};

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum PicardError {
    #[error("not of the form x^4 + (ax+b)^3 = (x+1)^4 + (cx+d)^3: {0}")]
    NotPicardForm(String),
    #[error("bad prime {0}: {1}")]
    BadPrime(u64, String),
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Torsion(#[from] TorsionError),
}

/// `Q(zeta_12)`.
pub fn picard_field() -> Field {
    Field::cyclotomic(12).expect("cyclotomic(12)")
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PicardDatum {
    /// `(eta, phi(eta))` in the order of [`eta_set`].
    pub phi: Vec<(FieldElement, FieldElement)>,
    pub map0: MobiusMap,
    pub lambda_cubed: FieldElement,
    pub f: Poly,
    /// `L (a x + b)^3` and `L (c x + d)^3`.
    pub v0_cubed: Poly,
    pub v1_cubed: Poly,
    /// `y(P)/y(Q) = b/(d - c)` for the packet representatives
    /// `P = (0, lambda b)`, `Q = (-1, lambda (d - c))`.
    pub pair_ratio: FieldElement,
    pub orbit_id: usize,
}

impl PicardDatum {
    fn coefficients(&self) -> [&FieldElement; 4] {
        self.map0.entries()
    }

    pub fn to_json(&self) -> Json {
        json!({
            "phi": self.phi.iter().map(|(e, m)| json!([e.to_json(), m.to_json()])).collect::<Vec<_>>(),
            "map0": self.map0.to_json(),
            "lambdaCubed": self.lambda_cubed.to_json(),
            "f": self.f.to_json(),
            "v0Cubed": self.v0_cubed.to_json(),
            "v1Cubed": self.v1_cubed.to_json(),
            "pairRatio": self.pair_ratio.to_json(),
            "orbit": self.orbit_id,
        })
    }

    /// `disc(x^4 + (A x + B)^3)` against `B^8 (256 B - 27 A^4)` with
    /// `A = lambda a`, `B = lambda b`, both sides expressed in `L`.
    pub fn discriminant_identity_holds(&self) -> bool {
        let [a, b, _, _] = self.coefficients();
        let l = &self.lambda_cubed;
        let b8 = b.pow(8).expect("nonnegative");
        let rhs = &(&self.field().from_i64(256) * &(&l.pow(3).unwrap() * &(&b8 * b)))
            - &(&self.field().from_i64(27) * &(&l.pow(4).unwrap() * &(&a.pow(4).unwrap() * &b8)));
        discriminant(&self.f).map(|d| d == rhs).unwrap_or(false) && !rhs.is_zero()
    }

    /// `A - C = 4` for `A = L a^3`, `C = L c^3`, matching the `x^3`
    /// coefficient of `f`; `b != 0`, `d != c`, and neither repeated-root
    /// branch `256 B = 27 A^4` nor `256 (D - C') = 27 C'^4` is taken
    /// (`B = lambda b`, `C' = lambda c`, `D = lambda d`).
    pub fn normalization_holds(&self) -> bool {
        let [a, b, c, d] = self.coefficients();
        let field = self.field();
        let l = &self.lambda_cubed;
        let big_a = l * &a.pow(3).unwrap();
        let big_c = l * &c.pow(3).unwrap();
        let k256 = field.from_i64(256);
        let k27 = field.from_i64(27);
        let dc = d - c;
        &big_a - &big_c == field.from_i64(4)
            && self.f.coeff(3) == big_a
            && !b.is_zero()
            && !dc.is_zero()
            && &k256 * b != &k27 * &(l * &a.pow(4).unwrap())
            && &k256 * &dc != &k27 * &(l * &c.pow(4).unwrap())
    }

    pub fn honest_report(&self) -> Result<HonestReport, TorsionError> {
        let [a, b, c, d] = self.coefficients();
        honest_check_scaled(self.field(), 4, &self.lambda_cubed, a, b, c, d)
    }

    fn field(&self) -> &Field {
        self.f.field()
    }
}

fn permutations(k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(k - 1) {
        for pos in 0..=p.len() {
            let mut q = p.clone();
            q.insert(pos, k - 1);
            out.push(q);
        }
    }
    out.sort();
    out
}

/// Cube roots of unity `1, w, w^2` with `w = zeta_12^4`.
fn mu3(field: &Field) -> Vec<FieldElement> {
    let w = primitive_root_of_unity(field, 3).expect("mu_3 in Q(zeta_12)");
    vec![field.one(), w.clone(), &w * &w]
}

fn datum_for(field: &Field, etas: &[FieldElement], targets: Vec<FieldElement>) -> PicardDatum {
    let src: Vec<ProjPoint> = etas.iter().cloned().map(ProjPoint::Finite).collect();
    let dst: Vec<ProjPoint> = targets.iter().cloned().map(ProjPoint::Finite).collect();
    let map0 = mobius_through([&src[0], &src[1], &src[2]], [&dst[0], &dst[1], &dst[2]]).expect("distinct points");
    let [a, b, c, d] = map0.entries().map(Clone::clone);
    let lambda_cubed = (&field.from_i64(4) / &(&a.pow(3).unwrap() - &c.pow(3).unwrap())).clone();
    let v0_cubed = Poly::new(field, vec![b.clone(), a.clone()]).pow(3).scale(&lambda_cubed);
    let v1_cubed = Poly::new(field, vec![d.clone(), c.clone()]).pow(3).scale(&lambda_cubed);
    let f = &Poly::monomial(field.one(), 4) + &v0_cubed;
    let other = &Poly::from_i64s(field, &[1, 1]).pow(4) + &v1_cubed;
    assert_eq!(f, other, "double representation fails for phi = {targets:?}");
    assert!(is_squarefree(&f), "{f} has a repeated root");
    let pair_ratio = &b / &(&d - &c);
    PicardDatum {
        phi: etas.iter().cloned().zip(targets).collect(),
        map0,
        lambda_cubed,
        f,
        v0_cubed,
        v1_cubed,
        pair_ratio,
        orbit_id: 0,
    }
}

/// All six data, one per bijection, with orbit ids assigned by the order in
/// which each quartic first appears.
pub fn enumerate_picard() -> Vec<PicardDatum> {
    let field = picard_field();
    let etas = eta_set(&field, 4).expect("eta set in Q(zeta_12)");
    let mu = mu3(&field);
    let mut quartics: Vec<Poly> = Vec::new();
    let mut data = Vec::with_capacity(6);
    for perm in permutations(3) {
        let mut datum = datum_for(&field, &etas, perm.iter().map(|&k| mu[k].clone()).collect());
        datum.orbit_id = match quartics.iter().position(|q| *q == datum.f) {
            Some(i) => i,
            None => {
                quartics.push(datum.f.clone());
                quartics.len() - 1
            }
        };
        data.push(datum);
    }
    assert_eq!(quartics.len(), 2, "expected two quartics");
    data
}

/// The distinct quartics, in orbit order.
pub fn picard_quartics(data: &[PicardDatum]) -> Vec<Poly> {
    let mut out: Vec<Poly> = Vec::new();
    for d in data {
        if !out.contains(&d.f) {
            out.push(d.f.clone());
        }
    }
    out
}

/// `phi` for the quartic `f` and the order-4 pair `P = (0, c0)`, `Q = (-1, c1)`,
/// given through `pair_ratio = c0/c1` (the pair itself may need a cube root
/// outside the field). Rotating both points by `mu_3` leaves the ratio and
/// hence `phi` unchanged.
pub fn picard_inverse(f: &Poly, pair_ratio: &FieldElement) -> Result<Vec<(FieldElement, FieldElement)>, PicardError> {
    let field = f.field().clone();
    let not_form = |why: &str| PicardError::NotPicardForm(format!("{f}: {why}"));
    if f.degree() != Some(4) || !f.is_monic() || !is_squarefree(f) {
        return Err(not_form("need a squarefree monic quartic"));
    }
    let g0 = f - &Poly::monomial(field.one(), 4);
    let g1 = f - &Poly::from_i64s(&field, &[1, 1]).pow(4);
    if g0.degree() != Some(3) || g1.degree() != Some(3) {
        return Err(not_form("differences with x^4 and (x+1)^4 are not cubics"));
    }
    // g0 = A (x + beta)^3, g1 = C (x + delta)^3
    let cube_root_monic = |g: &Poly| poly_dth_root(&g.monic(), 3).map_err(|_| not_form("difference is not a cube"));
    let (r0, r1) = (cube_root_monic(&g0)?, cube_root_monic(&g1)?);
    let (beta, delta) = (r0.coeff(0), r1.coeff(0));
    let ratio_cubed = &f.eval(&field.zero()) / &f.eval(&field.from_i64(-1));
    if pair_ratio.pow(3)? != ratio_cubed {
        return Err(not_form("pair ratio is not y(P)/y(Q) for points over 0 and -1"));
    }
    // c0/c1 = b/(d - c) = rho beta/(delta - 1) with rho = a/c
    if beta.is_zero() || delta == field.one() {
        return Err(not_form("a packet ordinate vanishes"));
    }
    let rho = &(pair_ratio * &(&delta - &field.one())) / &beta;
    if rho.pow(3)? != g0.leading_coeff().unwrap() / g1.leading_coeff().unwrap() {
        return Err(not_form("inconsistent leading coefficients"));
    }
    let t = MobiusMap::new(rho.clone(), &rho * &beta, field.one(), delta).map_err(|_| not_form("singular map"))?;
    let etas = eta_set(&field, 4)?;
    let mut out = Vec::with_capacity(3);
    for eta in etas {
        match apply_mobius(&t, &ProjPoint::Finite(eta.clone())) {
            ProjPoint::Finite(z) if z.pow(3)?.is_one() => out.push((eta, z)),
            _ => return Err(not_form("T does not send H into mu_3")),
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PicardOrderReport {
    pub p: u64,
    pub field: Field,
    pub zeta12_image: FieldElement,
    pub orders: Vec<(CurvePoint, Option<u32>)>,
}

impl PicardOrderReport {
    pub fn all_order_four(&self) -> bool {
        self.orders.len() == 6 && self.orders.iter().all(|(_, o)| *o == Some(4))
    }

    pub fn to_json(&self) -> Json {
        json!({
            "p": self.p,
            "field": self.field.to_string(),
            "zeta12": self.zeta12_image.to_json(),
            "orders": self.orders.iter().map(|(pt, o)| json!({"point": pt.to_json(), "order": o})).collect::<Vec<_>>(),
            "pass": self.all_order_four(),
        })
    }
}

/// Reduce `f` modulo a prime of `Q(zeta_12)` over `p` (sending `zeta_12` to
/// a primitive 12th root of unity mod `p`) and run the order oracle on the
/// six points over `0` and `-1`, in `F_p` or in `F_{p^3}` when the ordinates
/// need a cube root.
pub fn picard_verify_orders(datum: &PicardDatum, p: u64) -> Result<PicardOrderReport, PicardError> {
    if p % 12 != 1 || !crate::exactfield::is_prime_u64(p) {
        return Err(PicardError::BadPrime(p, "need a prime congruent to 1 mod 12".into()));
    }
    let fp = Field::prime(p)?;
    let w = primitive_root_of_unity(&fp, 12)?;
    let reduce = |e: &FieldElement| -> Result<FieldElement, PicardError> {
        let mut acc = fp.zero();
        let mut power = fp.one();
        for c in e.rational_coefficients().expect("number field element") {
            let c = fp.from_rational(&c).map_err(|_| PicardError::BadPrime(p, "denominator divisible by p".into()))?;
            acc = &acc + &(&c * &power);
            power = &power * &w;
        }
        Ok(acc)
    };
    let coeffs = datum.f.coeffs().iter().map(reduce).collect::<Result<Vec<_>, _>>()?;
    let fbar = Poly::new(&fp, coeffs);
    let ordinates_cubed = [fbar.eval(&fp.zero()), fbar.eval(&fp.from_i64(-1))];
    let needs_extension = ordinates_cubed.iter().any(|v| !matches!(dth_root(v, 3), RootResult::Root(_)));
    let field = if needs_extension { Field::finite(p, 3)? } else { fp.clone() };
    let lift = |e: &FieldElement| field.from_i64(e.as_residue().expect("prime field residue") as i64);
    let f_target = Poly::new(&field, fbar.coeffs().iter().map(lift).collect());
    let curve = Curve::new(&field, 3, 4, f_target).map_err(|e| PicardError::BadPrime(p, e.to_string()))?;
    let mut orders = Vec::with_capacity(6);
    for x in [field.zero(), field.from_i64(-1)] {
        for pt in curve.lift_x(&x).map_err(|e| PicardError::BadPrime(p, e.to_string()))? {
            let order = point_order(&curve, &pt, 4).order();
            orders.push((pt, order));
        }
    }
    Ok(PicardOrderReport { p, field, zeta12_image: w, orders })
}

/// The quartic `x^4 + 2x^3 + (s+3)x^2 + (s+2)x + (5s/18 + 1/2)` for `s = ±√3`,
/// with `√3 = zeta_12 + zeta_12^{-1}`.
pub fn explicit_quartic(conjugate: bool) -> Poly {
    let field = picard_field();
    let z = field.generator();
    let mut s = &z + &z.inv().expect("nonzero");
    if conjugate {
        s = -&s;
    }
    let q = |n: i64, d: i64| field.from_rational(&num::BigRational::new(n.into(), d.into())).unwrap();
    let c0 = &(&q(5, 18) * &s) + &q(1, 2);
    let c1 = &s + &q(2, 1);
    let c2 = &s + &q(3, 1);
    Poly::new(&field, vec![c0, c1, c2, q(2, 1), q(1, 1)])
}

#[cfg(test)]
mod tests {
    use super::*;
    use num::BigRational;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn six_data_two_quartics() {
        let data = enumerate_picard();
        assert_eq!(data.len(), 6);
        let quartics = picard_quartics(&data);
        assert_eq!(quartics.len(), 2);
        for q in &quartics {
            assert_eq!(data.iter().filter(|d| &d.f == q).count(), 3);
        }
        let expected = [explicit_quartic(false), explicit_quartic(true)];
        assert!(quartics.contains(&expected[0]));
        assert!(quartics.contains(&expected[1]));
    }

    #[test]
    fn explicit_quartic_has_two_cube_forms() {
        // x^4 + 2(x + (3+s)/6)^3 = (x+1)^4 + 2(-x + (-3+s)/6)^3
        let field = picard_field();
        let f = explicit_quartic(false);
        let s = &f.coeff(2) - &field.from_i64(3);
        let six = field.from_i64(6);
        let two = field.from_i64(2);
        let left = &Poly::monomial(field.one(), 4)
            + &Poly::new(&field, vec![&(&field.from_i64(3) + &s) / &six, field.one()]).pow(3).scale(&two);
        let right = &Poly::from_i64s(&field, &[1, 1]).pow(4)
            + &Poly::new(&field, vec![&(&s - &field.from_i64(3)) / &six, field.from_i64(-1)]).pow(3).scale(&two);
        assert_eq!(f, left);
        assert_eq!(f, right);
        assert_eq!(s.pow(2).unwrap(), field.from_i64(3));
    }

    #[test]
    fn mu3_action_is_free_with_two_orbits() {
        let data = enumerate_picard();
        let w = mu3(&picard_field())[1].clone();
        for d in &data {
            let rotated: Vec<FieldElement> = d.phi.iter().map(|(_, m)| m * &w).collect();
            let image =
                data.iter().find(|e| e.phi.iter().map(|(_, m)| m.clone()).collect::<Vec<_>>() == rotated).unwrap();
            assert_ne!(image.phi, d.phi);
            assert_eq!(image.f, d.f);
            assert_eq!(image.orbit_id, d.orbit_id);
            assert_eq!(image.pair_ratio, &d.pair_ratio * &w);
        }
    }

    #[test]
    fn datum_invariants() {
        for d in enumerate_picard() {
            assert!(d.discriminant_identity_holds(), "discriminant for {}", d.f);
            assert!(d.normalization_holds(), "normalization for {}", d.f);
            let report = d.honest_report().unwrap();
            assert!(report.all_hold(), "{report}");
            assert!(!report.unshifted_constant_identity);
        }
    }

    #[test]
    fn inverse_round_trip() {
        let data = enumerate_picard();
        let w = mu3(&picard_field())[1].clone();
        for d in &data {
            assert_eq!(picard_inverse(&d.f, &d.pair_ratio).unwrap(), d.phi);
            let twisted = picard_inverse(&d.f, &(&d.pair_ratio * &w)).unwrap();
            assert_ne!(twisted, d.phi);
        }
        let field = picard_field();
        let f = Poly::from_i64s(&field, &[1, 0, 0, 0, 1]);
        assert!(matches!(picard_inverse(&f, &field.one()), Err(PicardError::NotPicardForm(_))));
    }

    #[test]
    fn orders_mod_p() {
        let data = enumerate_picard();
        for p in [13, 37] {
            let report = picard_verify_orders(&data[0], p).unwrap();
            assert!(report.all_order_four(), "{}", report.to_json());
        }
        assert!(matches!(picard_verify_orders(&data[0], 7), Err(PicardError::BadPrime(7, _))));
    }

    #[test]
    fn degenerate_branch_has_no_solution() {
        // with A = C + 4 the x^2 condition forces C = -2, which violates the x^1 condition
        let q = |n: i64, d: i64| BigRational::new(n.into(), d.into());
        let c = q(-2, 1);
        let a = &c + q(4, 1);
        let x2 = q(81, 256) * &a * &a - q(3, 1) * &c * (q(1, 1) + q(27, 256) * &c);
        assert_eq!(x2, q(6, 1));
        let inner = q(1, 1) + q(27, 256) * &c;
        let x1 = q(3 * 27 * 27, 256 * 256) * &a * &a * &a - q(3, 1) * &c * &inner * &inner;
        assert_ne!(x1, q(4, 1));
    }

    #[test]
    fn discriminant_formula_random_rationals() {
        let q = Field::rationals();
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        for _ in 0..20 {
            let r = |rng: &mut ChaCha8Rng| {
                q.from_rational(&BigRational::new(rng.gen_range(-30..30).into(), rng.gen_range(1..9).into())).unwrap()
            };
            let (a, b) = (r(&mut rng), r(&mut rng));
            let f = &Poly::monomial(q.one(), 4) + &Poly::new(&q, vec![b.clone(), a.clone()]).pow(3);
            let b8 = b.pow(8).unwrap();
            let rhs = &b8 * &(&(&q.from_i64(256) * &b) - &(&q.from_i64(27) * &a.pow(4).unwrap()));
            assert_eq!(discriminant(&f).unwrap(), rhs);
        }
    }
}
