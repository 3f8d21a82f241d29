//! Torsion orders of `(P) - (infinity)` decided from Riemann-Roch spaces.
//!
//! `L(m*infinity)` has the basis `x^i y^j` with `d*i + n*j <= m`, `j < d`.
//! The class of `(P) - (infinity)` has order dividing `m` iff some nonzero
//! `h` in that space vanishes to order `m` at `P`; degree bookkeeping then
//! forces `div(h) = m(P) - m(infinity)`. The search reads off the first `m`
//! Taylor coefficients of every basis monomial at `P` and looks for a
//! kernel vector.

use serde_json::{json, Value as Json};

use crate::curve::{Curve, CurveFunction, CurvePoint};
use crate::exactfield::FieldElement;
use crate::upoly::Poly;

/// Monomials `x^i y^j` spanning `L(m*infinity)`, by increasing pole order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RRBasis {
    pub m: u32,
    pub monomials: Vec<(usize, usize)>,
}

impl RRBasis {
    pub fn pole_orders(&self, curve: &Curve) -> Vec<u32> {
        self.monomials.iter().map(|&(i, j)| curve.d() * i as u32 + curve.n() * j as u32).collect()
    }
}

pub fn rr_basis(curve: &Curve, m: u32) -> RRBasis {
    let (d, n) = (curve.d(), curve.n());
    let mut monomials: Vec<(usize, usize)> = (0..d)
        .filter(|j| n * j <= m)
        .flat_map(|j| (0..=(m - n * j) / d).map(move |i| (i as usize, j as usize)))
        .collect();
    monomials.sort_by_key(|&(i, j)| d as usize * i + n as usize * j);
    RRBasis { m, monomials }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Uniformizer {
    /// `t = x - a` at a point with `y != 0`.
    XMinusA,
    /// `t = y` at a ramification point `(a, 0)`.
    Y,
}

/// Truncated Taylor expansions of `x` and `y` in a local parameter.
#[derive(Clone, Debug)]
pub struct LocalExpansion {
    pub center: CurvePoint,
    pub uniformizer: Uniformizer,
    pub x: Vec<FieldElement>,
    pub y: Vec<FieldElement>,
}

impl LocalExpansion {
    pub fn precision(&self) -> usize {
        self.x.len()
    }

    /// Expansion of `h(x(t), y(t))` to the same precision.
    pub fn evaluate(&self, h: &CurveFunction) -> Vec<FieldElement> {
        let prec = self.precision();
        let field = self.x[0].field().clone();
        let mut acc = vec![field.zero(); prec];
        for s in h.parts().iter().rev() {
            acc = mul_trunc(&acc, &self.y, prec);
            let sx = eval_poly_series(s, &self.x, prec);
            for (a, b) in acc.iter_mut().zip(&sx) {
                *a = &*a + b;
            }
        }
        acc
    }
}

fn mul_trunc(a: &[FieldElement], b: &[FieldElement], prec: usize) -> Vec<FieldElement> {
    let field = a[0].field();
    let mut out = vec![field.zero(); prec];
    for (i, ai) in a.iter().enumerate().take(prec) {
        if ai.is_zero() {
            continue;
        }
        for (j, bj) in b.iter().enumerate().take(prec - i) {
            out[i + j] = &out[i + j] + &(ai * bj);
        }
    }
    out
}

fn inverse_series(a: &[FieldElement], prec: usize) -> Vec<FieldElement> {
    let inv0 = a[0].inv().expect("series with a unit constant term");
    let mut out = vec![inv0.clone(); 1];
    for k in 1..prec {
        let mut acc = a[0].field().zero();
        for i in 1..=k.min(a.len() - 1) {
            acc = &acc + &(&a[i] * &out[k - i]);
        }
        out.push(-&(&acc * &inv0));
    }
    out
}

fn eval_poly_series(p: &Poly, s: &[FieldElement], prec: usize) -> Vec<FieldElement> {
    let field = s[0].field();
    let mut acc = vec![field.zero(); prec];
    for c in p.coeffs().iter().rev() {
        acc = mul_trunc(&acc, s, prec);
        acc[0] = &acc[0] + c;
    }
    acc
}

fn padded(v: &[FieldElement], prec: usize) -> Vec<FieldElement> {
    let mut out = v.to_vec();
    out.resize(prec, v[0].field().zero());
    out
}

/// Newton iteration with doubling precision, to `prec` terms.
pub fn local_expansion(curve: &Curve, p: &CurvePoint, prec: usize) -> LocalExpansion {
    let CurvePoint::Affine { x: a, y: c } = p else { panic!("local expansion at infinity") };
    assert!(prec >= 1);
    let field = curve.field();
    let d = curve.d();
    let mut t = vec![field.zero(); prec.max(2)];
    t[1] = field.one();
    t.truncate(prec);
    if !c.is_zero() {
        // y(t)^d = f(a + t)
        let mut x_at = padded(&t, prec);
        x_at[0] = a.clone();
        let target = padded(curve.f().shift(a).coeffs(), prec.max(curve.n() as usize + 1));
        let d_elem = field.from_i64(d as i64);
        let mut y = vec![c.clone()];
        let mut cur = 1;
        while cur < prec {
            cur = (2 * cur).min(prec);
            y = padded(&y, cur);
            let mut ydm1 = padded(std::slice::from_ref(&field.one()), cur);
            for _ in 0..d - 1 {
                ydm1 = mul_trunc(&ydm1, &y, cur);
            }
            let yd = mul_trunc(&ydm1, &y, cur);
            let resid: Vec<FieldElement> = yd.iter().zip(&target).map(|(u, v)| u - v).collect();
            let deriv: Vec<FieldElement> = ydm1.iter().map(|u| u * &d_elem).collect();
            let corr = mul_trunc(&resid, &inverse_series(&deriv, cur), cur);
            y = y.iter().zip(&corr).map(|(u, v)| u - v).collect();
        }
        return LocalExpansion { center: p.clone(), uniformizer: Uniformizer::XMinusA, x: x_at, y: padded(&y, prec) };
    }
    // f(x(t)) = t^d with x(0) = a
    let df = curve.f().derivative();
    let mut x = vec![a.clone()];
    let mut cur = 1;
    while cur < prec {
        cur = (2 * cur).min(prec);
        x = padded(&x, cur);
        let mut resid = eval_poly_series(curve.f(), &x, cur);
        if (d as usize) < cur {
            resid[d as usize] = &resid[d as usize] - &field.one();
        }
        let deriv = eval_poly_series(&df, &x, cur);
        let corr = mul_trunc(&resid, &inverse_series(&deriv, cur), cur);
        x = x.iter().zip(&corr).map(|(u, v)| u - v).collect();
    }
    LocalExpansion { center: p.clone(), uniformizer: Uniformizer::Y, x: padded(&x, prec), y: t }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum OrderResult {
    Order(u32),
    ExceedsBound(u32),
}

/// Outcome of [`point_order`], with a certificate `h` satisfying
/// `div(h) = m(P) - m(infinity)` when an order was found.
#[derive(Clone, Debug)]
pub struct TorsionReport {
    pub point: CurvePoint,
    pub result: OrderResult,
    pub bound: u32,
    /// Nonzero coefficients of `h` on the monomials `x^i y^j`.
    pub certificate: Option<Vec<((usize, usize), FieldElement)>>,
    pub verified: bool,
}

impl TorsionReport {
    pub fn order(&self) -> Option<u32> {
        match self.result {
            OrderResult::Order(m) => Some(m),
            OrderResult::ExceedsBound(_) => None,
        }
    }

    pub fn certificate_function(&self, curve: &Curve) -> Option<CurveFunction> {
        let cert = self.certificate.as_ref()?;
        let mut h = CurveFunction::zero(curve);
        for ((i, j), c) in cert {
            h = h.add(&CurveFunction::monomial(curve, *i, *j).scale(c));
        }
        Some(h)
    }

    pub fn to_json(&self) -> Json {
        let cert = self.certificate.as_ref().map(|terms| {
            terms.iter().map(|((i, j), c)| json!({ "x": i, "y": j, "coeff": c.to_json() })).collect::<Vec<_>>()
        });
        json!({
            "point": self.point.to_json(),
            "order": self.order(),
            "bound": self.bound,
            "certificate": cert,
            "verified": self.verified,
        })
    }
}

/// A nonzero kernel vector of `rows` (all of length `ncols`), if any.
pub(crate) fn kernel_vector(mut rows: Vec<Vec<FieldElement>>, ncols: usize) -> Option<Vec<FieldElement>> {
    let field = rows.first()?.first()?.field().clone();
    let mut pivots: Vec<usize> = Vec::new();
    let mut r = 0;
    for col in 0..ncols {
        let Some(piv) = (r..rows.len()).find(|&i| !rows[i][col].is_zero()) else { continue };
        rows.swap(r, piv);
        let inv = rows[r][col].inv().unwrap();
        rows[r] = rows[r].iter().map(|v| v * &inv).collect();
        for i in 0..rows.len() {
            if i != r && !rows[i][col].is_zero() {
                let factor = rows[i][col].clone();
                for k in col..ncols {
                    let delta = &factor * &rows[r][k];
                    rows[i][k] = &rows[i][k] - &delta;
                }
            }
        }
        pivots.push(col);
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    // highest free column, so the certificate uses the top pole order
    let free = (0..ncols).rev().find(|c| !pivots.contains(c))?;
    let mut v = vec![field.zero(); ncols];
    v[free] = field.one();
    for (row, &pc) in pivots.iter().enumerate() {
        v[pc] = -&rows[row][free];
    }
    Some(v)
}

/// Least `m` in `2..=max_m` with `m((P) - (infinity))` principal.
pub fn point_order(curve: &Curve, p: &CurvePoint, max_m: u32) -> TorsionReport {
    if let CurvePoint::Infinity = p {
        return TorsionReport {
            point: p.clone(),
            result: OrderResult::Order(1),
            bound: max_m,
            certificate: Some(vec![((0, 0), curve.field().one())]),
            verified: true,
        };
    }
    assert!(curve.contains(p), "point not on the curve");
    let prec = (max_m + curve.d() + curve.n()) as usize;
    let exp = local_expansion(curve, p, prec);
    let full = rr_basis(curve, max_m);
    let series: Vec<Vec<FieldElement>> =
        full.monomials.iter().map(|&(i, j)| exp.evaluate(&CurveFunction::monomial(curve, i, j))).collect();
    for m in 2..=max_m {
        let cols = rr_basis(curve, m).monomials.len();
        let rows: Vec<Vec<FieldElement>> =
            (0..m as usize).map(|r| (0..cols).map(|c| series[c][r].clone()).collect()).collect();
        let Some(v) = kernel_vector(rows, cols) else { continue };
        let lead = v.iter().rev().find(|c| !c.is_zero()).unwrap().inv().unwrap();
        let certificate: Vec<((usize, usize), FieldElement)> = full.monomials[..cols]
            .iter()
            .zip(&v)
            .filter(|(_, c)| !c.is_zero())
            .map(|(&mono, c)| (mono, c * &lead))
            .collect();
        let mut report = TorsionReport {
            point: p.clone(),
            result: OrderResult::Order(m),
            bound: max_m,
            certificate: Some(certificate),
            verified: false,
        };
        let h = report.certificate_function(curve).unwrap();
        report.verified = curve.verify_certificate(p, m, &h);
        assert!(report.verified, "kernel vector failed certificate verification");
        return report;
    }
    TorsionReport {
        point: p.clone(),
        result: OrderResult::ExceedsBound(max_m),
        bound: max_m,
        certificate: None,
        verified: false,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactfield::Field;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn curve(p: u64, d: u32, coeffs: &[i64]) -> Curve {
        let f = Field::prime(p).unwrap();
        Curve::new(&f, d, coeffs.len() as u32 - 1, Poly::from_i64s(&f, coeffs)).unwrap()
    }

    fn pt(c: &Curve, x: i64, y: i64) -> CurvePoint {
        c.point(c.field().from_i64(x), c.field().from_i64(y)).unwrap()
    }

    fn residues(v: &[FieldElement]) -> Vec<u64> {
        v.iter().map(|c| c.as_residue().unwrap()).collect()
    }

    #[test]
    fn basis_examples() {
        let c = curve(7, 3, &[1, 0, 0, 0, 1]);
        assert_eq!(rr_basis(&c, 6).monomials, vec![(0, 0), (1, 0), (0, 1), (2, 0)]);
        assert_eq!(rr_basis(&c, 4).monomials, vec![(0, 0), (1, 0), (0, 1)]);
        assert_eq!(rr_basis(&c, 0).monomials, vec![(0, 0)]);
    }

    #[test]
    fn expansion_examples() {
        let c = curve(7, 3, &[1, 0, 0, 0, 1]);
        let e = local_expansion(&c, &pt(&c, 0, 1), 8);
        assert_eq!(e.uniformizer, Uniformizer::XMinusA);
        assert_eq!(residues(&e.y), vec![1, 0, 0, 0, 5, 0, 0, 0]);
        let c = curve(13, 3, &[-1, 0, 0, 0, 1]);
        let e = local_expansion(&c, &pt(&c, 1, 0), 6);
        assert_eq!(e.uniformizer, Uniformizer::Y);
        assert_eq!(residues(&e.x), vec![1, 0, 0, 10, 0, 0]);
        let c = curve(7, 2, &[1, 0, 0, 1]);
        let e = local_expansion(&c, &pt(&c, 0, 1), 4);
        assert_eq!(residues(&e.y), vec![1, 0, 0, 4]);
    }

    #[test]
    fn expansions_satisfy_the_curve_equation() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for (p, d, n) in [(7, 3, 4), (13, 4, 5), (11, 2, 7)] {
            let c = Curve::random(&Field::prime(p).unwrap(), d, n, &mut rng).unwrap();
            for pt in c.affine_points() {
                let e = local_expansion(&c, &pt, 20);
                let mut yd = padded(std::slice::from_ref(&c.field().one()), 20);
                for _ in 0..d {
                    yd = mul_trunc(&yd, &e.y, 20);
                }
                assert_eq!(yd, eval_poly_series(c.f(), &e.x, 20));
            }
        }
    }

    #[test]
    fn order_examples() {
        let c = curve(7, 3, &[1, 0, 0, 0, 1]);
        assert_eq!(point_order(&c, &pt(&c, 0, 1), 10).result, OrderResult::Order(4));
        assert_eq!(point_order(&c, &pt(&c, 0, 1), 3).result, OrderResult::ExceedsBound(3));
        let c = curve(13, 3, &[-1, 0, 0, 0, 1]);
        let r = point_order(&c, &pt(&c, 1, 0), 10);
        assert_eq!(r.result, OrderResult::Order(3));
        assert!(r.verified);
    }

    #[test]
    fn riemann_roch_dimension_and_gaps() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for (p, d, n) in [(7, 3, 4), (7, 2, 5), (7, 3, 5), (13, 4, 5), (11, 2, 7), (13, 3, 7)] {
            let c = Curve::random(&Field::prime(p).unwrap(), d, n, &mut rng).unwrap();
            let g = c.genus();
            for m in 2 * g - 1..=4 * g {
                assert_eq!(rr_basis(&c, m).monomials.len() as u32, m - g + 1);
            }
            let orders: std::collections::HashSet<u32> = rr_basis(&c, 2 * g).pole_orders(&c).into_iter().collect();
            assert_eq!((0..=2 * g).filter(|k| !orders.contains(k)).count() as u32, g);
        }
    }

    #[test]
    fn orders_are_omega_invariant() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        for _ in 0..10 {
            let c = Curve::random(&Field::prime(13).unwrap(), 3, 4, &mut rng).unwrap();
            let pts = c.affine_points();
            if pts.is_empty() {
                continue;
            }
            let p = &pts[rng.gen_range(0..pts.len())];
            let base = point_order(&c, p, 12).result;
            for q in c.omega_orbit(p) {
                assert_eq!(point_order(&c, &q, 12).result, base);
            }
        }
    }

    #[test]
    fn gap_between_d_and_n() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        for (p, d, n) in [(7, 3, 4), (7, 2, 5), (13, 4, 5), (11, 2, 7)] {
            for _ in 0..5 {
                let c = Curve::random(&Field::prime(p).unwrap(), d, n, &mut rng).unwrap();
                for pt in c.affine_points() {
                    let r = point_order(&c, &pt, n - 1).result;
                    if pt.y().unwrap().is_zero() {
                        assert_eq!(r, OrderResult::Order(d));
                    } else {
                        assert_eq!(r, OrderResult::ExceedsBound(n - 1));
                    }
                }
            }
        }
    }

    #[test]
    fn kernel_vector_basics() {
        let f = Field::prime(7).unwrap();
        let e = |v: i64| f.from_i64(v);
        assert_eq!(kernel_vector(vec![vec![e(1), e(0)], vec![e(0), e(1)]], 2), None);
        let v = kernel_vector(vec![vec![e(1), e(2)]], 2).unwrap();
        assert_eq!(v, vec![e(-2), e(1)]);
    }
}
