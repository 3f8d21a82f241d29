//! Point counts and the L-polynomial of `y^d = f(x)` over a finite field.
//!
//! `L(T) = sum c_k T^k` has degree `2g` and `#J(F_q) = L(1)`. The counts
//! `N_1..N_g` determine it through Newton's identities on the power sums
//! `s_k = q^k + 1 - N_k`; the rest follows from `c_{2g-i} = q^(g-i) c_i`.

use num::{BigInt, BigRational, Integer, One, Signed, ToPrimitive, Zero};
use serde_json::{json, Value as Json};
use thiserror::Error;

use crate::curve::Curve;
use crate::exactfield::{Embedding, Field, FieldError};

/// Default cap on `q^g`, the size of the largest field enumerated.
pub const DEFAULT_BUDGET: u128 = 1 << 22;

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum ZetaError {
    #[error("curve is not over a finite field")]
    NotFinite,
    #[error("q^g = {needed} exceeds the budget {budget}")]
    BudgetExceeded { needed: u128, budget: u128 },
    #[error("coefficient c_{0} of L is not an integer")]
    NonIntegralCoefficient(usize),
    #[error("N_{0} violates the Weil bound")]
    WeilBound(usize),
    #[error(transparent)]
    Field(#[from] FieldError),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ZetaData {
    pub q: u128,
    pub genus: u32,
    pub counts: Vec<u128>,
    pub l: Vec<BigInt>,
    pub jacobian_order: BigInt,
}

fn int_json(v: &BigInt) -> Json {
    match v.to_i64() {
        Some(x) => json!(x),
        None => json!(v.to_string()),
    }
}

impl ZetaData {
    /// `N_k` for `k = 1..=k_max` recovered from `L` alone.
    pub fn counts_from_l(&self, k_max: usize) -> Vec<BigInt> {
        let c = |k: usize| self.l.get(k).cloned().unwrap_or_else(BigInt::zero);
        let mut s: Vec<BigInt> = vec![BigInt::zero()];
        let mut out = Vec::with_capacity(k_max);
        let q = BigInt::from(self.q);
        for k in 1..=k_max {
            // k c_k = -sum_{i=1..k} s_i c_{k-i}
            let mut sk = -BigInt::from(k) * c(k);
            for i in 1..k {
                sk -= &s[i] * c(k - i);
            }
            out.push(num::pow(q.clone(), k) + 1 - &sk);
            s.push(sk);
        }
        out
    }

    pub fn to_json(&self) -> Json {
        json!({
            "q": self.q as u64,
            "counts": self.counts.iter().map(|&n| n as u64).collect::<Vec<_>>(),
            "L": self.l.iter().map(int_json).collect::<Vec<_>>(),
            "jacobianOrder": int_json(&self.jacobian_order),
        })
    }
}

/// `#C(F_{q^k})`, including the point at infinity.
pub fn count_points(curve: &Curve, k: usize) -> Result<u128, ZetaError> {
    let base = curve.field();
    let q = base.order().ok_or(ZetaError::NotFinite)?;
    let target = if k == 1 { base.clone() } else { Field::finite(base.characteristic(), base.degree() * k)? };
    let big_q = q.pow(k as u32);
    let embed = Embedding::new(base, &target)?;
    let f = curve.f().map_coeffs(&target, |c| embed.apply(c));
    let g = (curve.d() as u128).gcd(&(big_q - 1));
    let exponent = (big_q - 1) / g;
    let mut total = 1u128;
    for a in target.elements() {
        let b = f.eval(&a);
        if b.is_zero() {
            total += 1;
        } else if b.pow_u128(exponent).is_one() {
            total += g;
        }
    }
    Ok(total)
}

pub fn l_polynomial(curve: &Curve, budget: u128) -> Result<ZetaData, ZetaError> {
    let q = curve.field().order().ok_or(ZetaError::NotFinite)?;
    let g = curve.genus() as usize;
    let needed = q.checked_pow(g as u32).unwrap_or(u128::MAX);
    if needed > budget {
        return Err(ZetaError::BudgetExceeded { needed, budget });
    }
    let counts = (1..=g).map(|k| count_points(curve, k)).collect::<Result<Vec<_>, _>>()?;
    let qz = BigInt::from(q);
    let mut s = vec![BigInt::zero()];
    for (i, &n) in counts.iter().enumerate() {
        let k = i + 1;
        let qk = num::pow(qz.clone(), k);
        let sk = &qk + 1 - BigInt::from(n);
        // s_k^2 <= 4 g^2 q^k
        if &sk * &sk > BigInt::from(4 * g * g) * &qk {
            return Err(ZetaError::WeilBound(k));
        }
        s.push(sk);
    }
    let mut c: Vec<BigRational> = vec![BigRational::one()];
    for k in 1..=g {
        let mut acc = BigRational::zero();
        for i in 1..=k {
            acc += BigRational::from_integer(s[i].clone()) * &c[k - i];
        }
        c.push(-acc / BigRational::from_integer(BigInt::from(k)));
    }
    let mut l = Vec::with_capacity(2 * g + 1);
    for (k, ck) in c.iter().enumerate() {
        if !ck.is_integer() {
            return Err(ZetaError::NonIntegralCoefficient(k));
        }
        l.push(ck.to_integer());
    }
    for i in (0..g).rev() {
        l.push(num::pow(qz.clone(), g - i) * &l[i]);
    }
    let jacobian_order: BigInt = l.iter().sum();
    assert!(jacobian_order.is_positive(), "L(1) = {jacobian_order}");
    Ok(ZetaData { q, genus: g as u32, counts, l, jacobian_order })
}

pub fn jacobian_order(curve: &Curve) -> Result<BigInt, ZetaError> {
    Ok(l_polynomial(curve, DEFAULT_BUDGET)?.jacobian_order)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rr_oracle::{point_order, OrderResult};
    use crate::upoly::Poly;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn curve(field: &Field, d: u32, coeffs: &[i64]) -> Curve {
        Curve::new(field, d, coeffs.len() as u32 - 1, Poly::from_i64s(field, coeffs)).unwrap()
    }

    fn naive_count(curve: &Curve, k: usize) -> u128 {
        let base = curve.field();
        let target = Field::finite(base.characteristic(), base.degree() * k).unwrap();
        let embed = Embedding::new(base, &target).unwrap();
        let f = curve.f().map_coeffs(&target, |c| embed.apply(c));
        let ys: Vec<_> = target.elements().map(|y| y.pow(curve.d() as i64).unwrap()).collect();
        1 + target
            .elements()
            .map(|x| {
                let fx = f.eval(&x);
                ys.iter().filter(|&yd| *yd == fx).count() as u128
            })
            .sum::<u128>()
    }

    #[test]
    fn elliptic_example() {
        let f7 = Field::prime(7).unwrap();
        let c = curve(&f7, 2, &[1, 0, 0, 1]);
        assert_eq!(count_points(&c, 1).unwrap(), 12);
        let z = l_polynomial(&c, DEFAULT_BUDGET).unwrap();
        assert_eq!(z.l, vec![BigInt::from(1), BigInt::from(4), BigInt::from(7)]);
        assert_eq!(jacobian_order(&c).unwrap(), BigInt::from(12));
        assert_eq!(count_points(&c, 2).unwrap(), naive_count(&c, 2));
        assert_eq!(z.to_json(), json!({"q": 7, "counts": [12], "L": [1, 4, 7], "jacobianOrder": 12}));
    }

    #[test]
    fn counts_match_naive_loop() {
        let f7 = Field::prime(7).unwrap();
        let f13 = Field::prime(13).unwrap();
        let f25 = Field::finite(5, 2).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let curves = [
            curve(&f7, 3, &[1, 0, 0, 0, 1]),
            curve(&f13, 3, &[-1, 0, 0, 0, 1]),
            Curve::random(&f7, 2, 5, &mut rng).unwrap(),
            Curve::random(&f25, 3, 4, &mut rng).unwrap(),
        ];
        for c in &curves {
            for k in 1..=3 {
                if c.field().order().unwrap().pow(k as u32) <= 10_000 {
                    assert_eq!(count_points(c, k).unwrap(), naive_count(c, k), "{c} k={k}");
                }
            }
        }
    }

    #[test]
    fn genus_three_examples() {
        let f13 = Field::prime(13).unwrap();
        let f7 = Field::prime(7).unwrap();
        let z = l_polynomial(&curve(&f13, 3, &[1, 0, 0, 0, 1]), DEFAULT_BUDGET).unwrap();
        assert_eq!(z.l.len(), 7);
        assert!((&z.jacobian_order % 4u32).is_zero());
        assert!((jacobian_order(&curve(&f13, 3, &[-1, 0, 0, 0, 1])).unwrap() % 3u32).is_zero());
        assert!((jacobian_order(&curve(&f7, 3, &[1, 0, 0, 0, 1])).unwrap() % 4u32).is_zero());
    }

    #[test]
    fn functional_equation_and_round_trip() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for (p, d, n) in [(7u64, 2u32, 5u32), (11, 2, 5), (7, 3, 4), (13, 2, 3), (5, 2, 7)] {
            let field = Field::prime(p).unwrap();
            let c = Curve::random(&field, d, n, &mut rng).unwrap();
            let z = l_polynomial(&c, DEFAULT_BUDGET).unwrap();
            let g = z.genus as usize;
            assert_eq!(z.l.len(), 2 * g + 1);
            assert!(z.l[0].is_one());
            for i in 0..=g {
                assert_eq!(z.l[2 * g - i], num::pow(BigInt::from(p), g - i) * &z.l[i]);
            }
            let recovered = z.counts_from_l(g + 1);
            for k in 1..=g {
                assert_eq!(recovered[k - 1], BigInt::from(z.counts[k - 1]));
            }
            if (p as u128).pow(g as u32 + 1) <= 10_000 {
                assert_eq!(recovered[g], BigInt::from(count_points(&c, g + 1).unwrap()));
            }
        }
    }

    #[test]
    fn budget_and_field_errors() {
        let f13 = Field::prime(13).unwrap();
        let c = curve(&f13, 3, &[1, 0, 0, 0, 1]);
        assert_eq!(l_polynomial(&c, 100), Err(ZetaError::BudgetExceeded { needed: 2197, budget: 100 }));
        let q = Field::cyclotomic(3).unwrap();
        assert_eq!(count_points(&curve(&q, 3, &[1, 0, 0, 0, 1]), 1), Err(ZetaError::NotFinite));
    }

    #[test]
    fn point_orders_divide_jacobian_order() {
        let f7 = Field::prime(7).unwrap();
        let f13 = Field::prime(13).unwrap();
        for c in [curve(&f7, 2, &[1, 0, 0, 1]), curve(&f7, 3, &[1, 0, 0, 0, 1]), curve(&f13, 3, &[-1, 0, 0, 0, 1])] {
            let order = jacobian_order(&c).unwrap();
            for p in c.affine_points() {
                if let OrderResult::Order(m) = point_order(&c, &p, 2 * c.n()).result {
                    assert!((&order % m).is_zero(), "{p} has order {m}, #J = {order}");
                }
            }
        }
    }
}
