//! Raw polynomial helpers over `Q` (coefficient vectors, lowest degree
//! first) and the irreducibility decision used when a number field is
//! built from a caller-supplied minimal polynomial.

use num::{BigInt, BigRational, Integer, One, Signed, ToPrimitive, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::modp;

pub(crate) type QVec = Vec<BigRational>;

pub(crate) fn trim(v: &mut QVec) {
    while v.last().is_some_and(|c| c.is_zero()) {
        v.pop();
    }
}

pub(crate) fn sub(a: &[BigRational], b: &[BigRational]) -> QVec {
    let z = BigRational::zero();
    let mut out: QVec = (0..a.len().max(b.len())).map(|i| a.get(i).unwrap_or(&z) - b.get(i).unwrap_or(&z)).collect();
    trim(&mut out);
    out
}

pub(crate) fn mul(a: &[BigRational], b: &[BigRational]) -> QVec {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![BigRational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    trim(&mut out);
    out
}

pub(crate) fn divrem(a: &[BigRational], b: &[BigRational]) -> (QVec, QVec) {
    assert!(!b.is_empty(), "division by the zero polynomial");
    let db = b.len() - 1;
    let mut r = a.to_vec();
    trim(&mut r);
    if r.len() < b.len() {
        return (Vec::new(), r);
    }
    let lc_inv = b[db].recip();
    let mut q = vec![BigRational::zero(); r.len() - db];
    while r.len() > db && !r.is_empty() {
        let k = r.len() - 1 - db;
        let c = r.last().unwrap() * &lc_inv;
        for (i, bi) in b.iter().enumerate() {
            r[k + i] -= &c * bi;
        }
        q[k] = c;
        trim(&mut r);
    }
    trim(&mut q);
    (q, r)
}

/// Reduce `a` modulo a monic `m`, padding to `deg m` coefficients.
pub(crate) fn reduce_padded(a: &[BigRational], m: &[BigRational]) -> QVec {
    let mut r = divrem(a, m).1;
    r.resize(m.len() - 1, BigRational::zero());
    r
}

pub(crate) fn inv_mod(a: &[BigRational], m: &[BigRational]) -> Option<QVec> {
    let mut r0 = m.to_vec();
    let mut r1 = divrem(a, m).1;
    let mut t0: QVec = Vec::new();
    let mut t1: QVec = vec![BigRational::one()];
    while !r1.is_empty() {
        let (q, r) = divrem(&r0, &r1);
        let t = sub(&t0, &mul(&q, &t1));
        r0 = r1;
        r1 = r;
        t0 = t1;
        t1 = t;
    }
    if r0.len() != 1 {
        return None;
    }
    let c = r0[0].recip();
    let scaled: QVec = t0.iter().map(|x| x * &c).collect();
    Some(divrem(&scaled, m).1)
}

fn derivative(a: &[BigRational]) -> QVec {
    let mut out: QVec =
        a.iter().enumerate().skip(1).map(|(i, c)| c * BigRational::from_integer(BigInt::from(i))).collect();
    trim(&mut out);
    out
}

fn gcd_degree(a: &[BigRational], b: &[BigRational]) -> usize {
    let mut x = a.to_vec();
    let mut y = b.to_vec();
    while !y.is_empty() {
        let r = divrem(&x, &y).1;
        x = y;
        y = r;
    }
    x.len().saturating_sub(1)
}

/// Primitive integer polynomial proportional to `a` (positive leading
/// coefficient).
pub(crate) fn primitive_integer_form(a: &[BigRational]) -> Vec<BigInt> {
    let lcm = a.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let ints: Vec<BigInt> = a.iter().map(|c| (c * &lcm).to_integer()).collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
    let mut out: Vec<BigInt> = if g.is_zero() { ints } else { ints.into_iter().map(|c| c / &g).collect() };
    if out.last().is_some_and(|c| c.is_negative()) {
        out.iter_mut().for_each(|c| *c = -c.clone());
    }
    out
}

fn reduce_mod(a: &[BigInt], p: u64) -> Vec<u64> {
    let pb = BigInt::from(p);
    let mut out: Vec<u64> = a.iter().map(|c| c.mod_floor(&pb).to_u64().unwrap()).collect();
    modp::trim(&mut out);
    out
}

/// Outcome of the irreducibility decision over `Q`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum QIrreducibility {
    Irreducible,
    Reducible,
    /// Degree above the verification bound, or a coefficient bound too
    /// large for single-word modular recombination.
    Undecided,
}

pub(crate) const IRREDUCIBILITY_DEGREE_BOUND: usize = 12;

/// Decide irreducibility of `f` over `Q` for degree up to 12.
///
/// Small primes first give factor-degree patterns; if no factor degree up
/// to `n/2` survives all patterns, `f` is irreducible. Otherwise `f` is
/// factored modulo one prime larger than twice the coefficient bound for
/// any factor of degree `<= n/2`, and every subset of modular factors of
/// such degree is tested for an integer divisor.
pub(crate) fn irreducible_over_q(f: &[BigRational]) -> QIrreducibility {
    let mut f = f.to_vec();
    trim(&mut f);
    let n = match f.len() {
        0 | 1 => return QIrreducibility::Reducible,
        len => len - 1,
    };
    if n == 1 {
        return QIrreducibility::Irreducible;
    }
    if n > IRREDUCIBILITY_DEGREE_BOUND {
        return QIrreducibility::Undecided;
    }
    if gcd_degree(&f, &derivative(&f)) > 0 {
        return QIrreducibility::Reducible;
    }
    let zf = primitive_integer_form(&f);
    let lc = zf[n].clone();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);

    // degree sieve over small primes
    let mut possible: Vec<bool> = (0..=n).map(|k| k >= 1 && k <= n / 2).collect();
    let mut good_primes = 0;
    let mut p = 3u64;
    while good_primes < 8 && p < 2000 {
        if modp::is_prime_u64(p) && !(&lc % BigInt::from(p)).is_zero() {
            let fp = reduce_mod(&zf, p);
            if modp::is_squarefree(&fp, p) {
                good_primes += 1;
                let degs: Vec<usize> = modp::distinct_degree(&fp, p)
                    .into_iter()
                    .flat_map(|(g, k)| std::iter::repeat_n(k, (g.len() - 1) / k))
                    .collect();
                let mut reach = vec![false; n + 1];
                reach[0] = true;
                for d in degs {
                    for s in (d..=n).rev() {
                        if reach[s - d] {
                            reach[s] = true;
                        }
                    }
                }
                for (k, slot) in possible.iter_mut().enumerate() {
                    *slot = *slot && reach[k];
                }
                if !possible.iter().any(|&b| b) {
                    return QIrreducibility::Irreducible;
                }
            }
        }
        p += 2;
    }

    // coefficient bound: |coeff of lc(f)/lc(g) * g| <= |lc| * 2^(n/2) * ||f||_2
    let norm_sq: BigInt = zf.iter().map(|c| c * c).sum();
    let bound_sq = &lc * &lc * (BigInt::one() << n) * norm_sq * 4u32;
    let bound = bound_sq.sqrt() + 1u32;
    let start = match bound.to_u64() {
        Some(b) if b < (1u64 << 62) => b.max(1 << 20),
        _ => return QIrreducibility::Undecided,
    };
    let mut p = start | 1;
    loop {
        if modp::is_prime_u64(p) && !(&lc % BigInt::from(p)).is_zero() {
            let fp = reduce_mod(&zf, p);
            if modp::is_squarefree(&fp, p) {
                break;
            }
        }
        p += 2;
    }
    let fp = reduce_mod(&zf, p);
    let factors = modp::factor_squarefree(&fp, p, &mut rng);
    if factors.len() == 1 {
        return QIrreducibility::Irreducible;
    }
    let r = factors.len();
    let lc_mod = reduce_mod(std::slice::from_ref(&lc), p);
    let lc_mod = lc_mod.first().copied().unwrap_or(0);
    let pb = BigInt::from(p);
    let half = &pb / 2u32;
    let fq: QVec = zf.iter().map(|c| BigRational::from_integer(c.clone())).collect();
    for mask in 1u32..(1u32 << r) {
        let deg: usize = (0..r).filter(|i| mask & (1 << i) != 0).map(|i| factors[i].len() - 1).sum();
        if deg == 0 || deg > n / 2 {
            continue;
        }
        let mut prod = vec![lc_mod];
        for (i, g) in factors.iter().enumerate() {
            if mask & (1 << i) != 0 {
                prod = modp::mul(&prod, g, p);
            }
        }
        let cand: Vec<BigInt> = prod
            .iter()
            .map(|&c| {
                let c = BigInt::from(c);
                if c > half {
                    c - &pb
                } else {
                    c
                }
            })
            .collect();
        let cand_q: QVec =
            primitive_integer_form(&cand.iter().map(|c| BigRational::from_integer(c.clone())).collect::<Vec<_>>())
                .into_iter()
                .map(BigRational::from_integer)
                .collect();
        let (q, rem) = divrem(&fq, &cand_q);
        if rem.is_empty() && q.iter().all(|c| c.is_integer()) {
            return QIrreducibility::Reducible;
        }
    }
    QIrreducibility::Irreducible
}

/// Integer coefficients of the `m`-th cyclotomic polynomial.
pub(crate) fn cyclotomic_integer(m: u64) -> Vec<BigInt> {
    // x^m - 1 divided by every Phi_e for proper divisors e of m
    let mut num: QVec = vec![BigRational::zero(); m as usize + 1];
    num[0] = -BigRational::one();
    num[m as usize] = BigRational::one();
    for e in 1..m {
        if m.is_multiple_of(e) {
            let phi: QVec = cyclotomic_integer(e).into_iter().map(BigRational::from_integer).collect();
            num = divrem(&num, &phi).0;
        }
    }
    num.into_iter().map(|c| c.to_integer()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(v: &[i64]) -> QVec {
        v.iter().map(|&c| BigRational::from_integer(c.into())).collect()
    }

    #[test]
    fn cyclotomic_polynomials() {
        let phi12: Vec<i64> = cyclotomic_integer(12).iter().map(|c| c.to_i64().unwrap()).collect();
        assert_eq!(phi12, vec![1, 0, -1, 0, 1]);
        let phi6: Vec<i64> = cyclotomic_integer(6).iter().map(|c| c.to_i64().unwrap()).collect();
        assert_eq!(phi6, vec![1, -1, 1]);
        assert_eq!(cyclotomic_integer(9).len(), 7);
    }

    #[test]
    fn irreducibility_decisions() {
        use QIrreducibility::*;
        // x^4 + 1 and Phi_12 split modulo every prime but are irreducible
        assert_eq!(irreducible_over_q(&q(&[1, 0, 0, 0, 1])), Irreducible);
        assert_eq!(irreducible_over_q(&q(&[1, 0, -1, 0, 1])), Irreducible);
        assert_eq!(irreducible_over_q(&q(&[-2, 0, 1])), Irreducible);
        assert_eq!(irreducible_over_q(&q(&[-1, 0, 1])), Reducible);
        // (x^2 + 1)(x^2 + x + 1) = x^4 + x^3 + 2x^2 + x + 1
        assert_eq!(irreducible_over_q(&q(&[1, 1, 2, 1, 1])), Reducible);
        // x^4 - 10x^2 + 1 = minpoly of sqrt2 + sqrt3
        assert_eq!(irreducible_over_q(&q(&[1, 0, -10, 0, 1])), Irreducible);
        // (x^2 - 2)(x^2 - 3)
        assert_eq!(irreducible_over_q(&q(&[6, 0, -5, 0, 1])), Reducible);
        // 4x^2 - 1 with a non-monic leading coefficient
        assert_eq!(irreducible_over_q(&q(&[-1, 0, 4])), Reducible);
        let deg13: QVec = {
            let mut v = q(&[2]);
            v.resize(13, BigRational::zero());
            v.push(BigRational::one());
            v
        };
        assert_eq!(irreducible_over_q(&deg13), Undecided);
    }
}
