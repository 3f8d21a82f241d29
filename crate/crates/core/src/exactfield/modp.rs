//! Raw arithmetic on residues and dense polynomials over `Z/pZ`.
//!
//! Polynomials are coefficient vectors, lowest degree first, without
//! trailing zeros. The modulus is any prime below `2^63`; products go
//! through `u128`.

use num::BigUint;
use rand::Rng;

pub(crate) fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

pub(crate) fn add_mod(a: u64, b: u64, p: u64) -> u64 {
    let s = a as u128 + b as u128;
    (s % p as u128) as u64
}

pub(crate) fn sub_mod(a: u64, b: u64, p: u64) -> u64 {
    if a >= b {
        a - b
    } else {
        p - (b - a)
    }
}

pub(crate) fn pow_mod(mut base: u64, mut exp: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
    base %= p;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, p);
        }
        base = mul_mod(base, base, p);
        exp >>= 1;
    }
    acc
}

/// Inverse of a nonzero residue via Fermat.
pub(crate) fn inv_mod(a: u64, p: u64) -> u64 {
    debug_assert!(!a.is_multiple_of(p));
    pow_mod(a, p - 2, p)
}

/// Deterministic Miller-Rabin for 64-bit integers.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for small in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n.is_multiple_of(small) {
            return n == small;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Trial-division factorization, adequate for group orders of the fields
/// this crate enumerates.
pub fn factor_u64(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut q = 2u64;
    while q.saturating_mul(q) <= n {
        if n.is_multiple_of(q) {
            let mut e = 0;
            while n.is_multiple_of(q) {
                n /= q;
                e += 1;
            }
            out.push((q, e));
        }
        q += if q == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

pub(crate) fn trim(v: &mut Vec<u64>) {
    while v.last() == Some(&0) {
        v.pop();
    }
}

pub(crate) fn degree(v: &[u64]) -> Option<usize> {
    if v.is_empty() {
        None
    } else {
        Some(v.len() - 1)
    }
}

pub(crate) fn sub(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut out: Vec<u64> =
        (0..a.len().max(b.len())).map(|i| sub_mod(*a.get(i).unwrap_or(&0), *b.get(i).unwrap_or(&0), p)).collect();
    trim(&mut out);
    out
}

pub(crate) fn scale(a: &[u64], c: u64, p: u64) -> Vec<u64> {
    let mut out: Vec<u64> = a.iter().map(|&x| mul_mod(x, c, p)).collect();
    trim(&mut out);
    out
}

pub(crate) fn mul(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut acc = vec![0u128; a.len() + b.len() - 1];
    let pp = p as u128;
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            acc[i + j] = (acc[i + j] + x as u128 * y as u128) % pp;
        }
    }
    let mut out: Vec<u64> = acc.into_iter().map(|c| c as u64).collect();
    trim(&mut out);
    out
}

/// Quotient and remainder; `b` must be nonzero.
pub(crate) fn divrem(a: &[u64], b: &[u64], p: u64) -> (Vec<u64>, Vec<u64>) {
    assert!(!b.is_empty(), "division by the zero polynomial");
    let db = b.len() - 1;
    let mut r = a.to_vec();
    trim(&mut r);
    if r.len() < b.len() {
        return (Vec::new(), r);
    }
    let lc_inv = inv_mod(b[db], p);
    let mut q = vec![0u64; r.len() - db];
    while r.len() > db && !r.is_empty() {
        let k = r.len() - 1 - db;
        let c = mul_mod(*r.last().unwrap(), lc_inv, p);
        q[k] = c;
        for (i, &bi) in b.iter().enumerate() {
            r[k + i] = sub_mod(r[k + i], mul_mod(c, bi, p), p);
        }
        trim(&mut r);
    }
    trim(&mut q);
    (q, r)
}

pub(crate) fn rem(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    divrem(a, b, p).1
}

pub(crate) fn make_monic(a: &[u64], p: u64) -> Vec<u64> {
    match a.last() {
        None => Vec::new(),
        Some(&lc) => scale(a, inv_mod(lc, p), p),
    }
}

/// Monic gcd.
pub(crate) fn gcd(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut x = a.to_vec();
    let mut y = b.to_vec();
    trim(&mut x);
    trim(&mut y);
    while !y.is_empty() {
        let r = rem(&x, &y, p);
        x = y;
        y = r;
    }
    make_monic(&x, p)
}

/// Inverse of `a` modulo `m` when they are coprime.
pub(crate) fn inv_poly_mod(a: &[u64], m: &[u64], p: u64) -> Option<Vec<u64>> {
    // extended Euclid tracking the coefficient of `a`
    let mut r0 = m.to_vec();
    let mut r1 = rem(a, m, p);
    let mut t0: Vec<u64> = Vec::new();
    let mut t1: Vec<u64> = vec![1];
    while !r1.is_empty() {
        let (q, r) = divrem(&r0, &r1, p);
        let t = sub(&t0, &mul(&q, &t1, p), p);
        r0 = r1;
        r1 = r;
        t0 = t1;
        t1 = t;
    }
    if r0.len() != 1 {
        return None;
    }
    let c = inv_mod(r0[0], p);
    Some(rem(&scale(&t0, c, p), m, p))
}

pub(crate) fn mulmod_poly(a: &[u64], b: &[u64], m: &[u64], p: u64) -> Vec<u64> {
    rem(&mul(a, b, p), m, p)
}

pub(crate) fn powmod_poly_u64(base: &[u64], mut exp: u64, m: &[u64], p: u64) -> Vec<u64> {
    let mut acc = rem(&[1], m, p);
    let mut b = rem(base, m, p);
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mulmod_poly(&acc, &b, m, p);
        }
        b = mulmod_poly(&b, &b, m, p);
        exp >>= 1;
    }
    acc
}

pub(crate) fn powmod_poly_big(base: &[u64], exp: &BigUint, m: &[u64], p: u64) -> Vec<u64> {
    let mut acc = rem(&[1], m, p);
    let b = rem(base, m, p);
    for i in (0..exp.bits()).rev() {
        acc = mulmod_poly(&acc, &acc, m, p);
        if exp.bit(i) {
            acc = mulmod_poly(&acc, &b, m, p);
        }
    }
    acc
}

pub(crate) fn derivative(a: &[u64], p: u64) -> Vec<u64> {
    let mut out: Vec<u64> = a.iter().enumerate().skip(1).map(|(i, &c)| mul_mod(c, (i as u64) % p, p)).collect();
    trim(&mut out);
    out
}

pub(crate) fn is_squarefree(a: &[u64], p: u64) -> bool {
    let d = derivative(a, p);
    if d.is_empty() {
        return a.len() <= 1;
    }
    gcd(a, &d, p).len() == 1
}

/// Rabin's test: `f` of degree `k` is irreducible iff `x^(p^k) = x mod f`
/// and `gcd(x^(p^(k/r)) - x, f) = 1` for every prime `r | k`.
pub(crate) fn is_irreducible(f: &[u64], p: u64) -> bool {
    let k = match degree(f) {
        None | Some(0) => return false,
        Some(k) => k,
    };
    if k == 1 {
        return true;
    }
    let f = make_monic(f, p);
    let x = vec![0, 1];
    let frob = |g: &Vec<u64>, times: usize| {
        let mut h = g.clone();
        for _ in 0..times {
            h = powmod_poly_u64(&h, p, &f, p);
        }
        h
    };
    let xr = rem(&x, &f, p);
    if frob(&xr, k) != xr {
        return false;
    }
    for (r, _) in factor_u64(k as u64) {
        let h = frob(&xr, k / r as usize);
        let g = gcd(&sub(&h, &xr, p), &f, p);
        if g.len() != 1 {
            return false;
        }
    }
    true
}

/// Distinct-degree factorization of a monic squarefree polynomial:
/// pairs `(product of all irreducible factors of degree i, i)`.
pub(crate) fn distinct_degree(f: &[u64], p: u64) -> Vec<(Vec<u64>, usize)> {
    let mut rest = make_monic(f, p);
    let mut out = Vec::new();
    let x = vec![0, 1];
    let mut h = rem(&x, &rest, p);
    let mut i = 0;
    while rest.len() > 1 {
        i += 1;
        if 2 * i > rest.len() - 1 {
            let deg = rest.len() - 1;
            out.push((rest, deg));
            break;
        }
        h = powmod_poly_u64(&h, p, &rest, p);
        let g = gcd(&sub(&h, &x, p), &rest, p);
        if g.len() > 1 {
            rest = divrem(&rest, &g, p).0;
            h = rem(&h, &rest, p);
            out.push((g, i));
        }
    }
    out
}

/// Cantor-Zassenhaus splitting of a product of distinct irreducibles of
/// degree `k`; `p` must be odd.
pub(crate) fn equal_degree<R: Rng>(f: &[u64], k: usize, p: u64, rng: &mut R) -> Vec<Vec<u64>> {
    let n = f.len() - 1;
    if n == k {
        return vec![make_monic(f, p)];
    }
    let exp = (BigUint::from(p).pow(k as u32) - 1u32) / 2u32;
    loop {
        let a: Vec<u64> = {
            let mut v: Vec<u64> = (0..n).map(|_| rng.gen_range(0..p)).collect();
            trim(&mut v);
            v
        };
        if a.len() < 2 {
            continue;
        }
        let b = sub(&powmod_poly_big(&a, &exp, f, p), &[1], p);
        let g = gcd(&b, f, p);
        if g.len() > 1 && g.len() < f.len() {
            let other = divrem(f, &g, p).0;
            let mut out = equal_degree(&g, k, p, rng);
            out.extend(equal_degree(&other, k, p, rng));
            return out;
        }
    }
}

/// Complete factorization of a squarefree polynomial into monic irreducibles.
pub(crate) fn factor_squarefree<R: Rng>(f: &[u64], p: u64, rng: &mut R) -> Vec<Vec<u64>> {
    let mut out = Vec::new();
    for (g, k) in distinct_degree(f, p) {
        out.extend(equal_degree(&g, k, p, rng));
    }
    out.sort();
    out
}

/// First monic irreducible polynomial of degree `k` over `F_p`, ordered by
/// the base-`p` integer formed from the lower coefficients.
pub(crate) fn first_irreducible(p: u64, k: usize) -> Vec<u64> {
    let mut counter: u128 = 0;
    loop {
        let mut c = counter;
        let mut f = Vec::with_capacity(k + 1);
        for _ in 0..k {
            f.push((c % p as u128) as u64);
            c /= p as u128;
        }
        f.push(1);
        if f[0] != 0 && is_irreducible(&f, p) {
            return f;
        }
        counter += 1;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn primality() {
        let primes: Vec<u64> = (0..60).filter(|&n| is_prime_u64(n)).collect();
        assert_eq!(primes, vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59]);
        assert!(is_prime_u64(2_305_843_009_213_693_951));
        assert!(!is_prime_u64(3_215_031_751));
    }

    #[test]
    fn rabin_matches_known_cases() {
        // x^2 + 1 is irreducible mod 7 but not mod 5
        assert!(is_irreducible(&[1, 0, 1], 7));
        assert!(!is_irreducible(&[1, 0, 1], 5));
        // x^4 + 1 splits mod every prime
        for p in [3, 5, 7, 11, 13] {
            assert!(!is_irreducible(&[1, 0, 0, 0, 1], p));
        }
        let f = first_irreducible(5, 3);
        assert_eq!(f.len(), 4);
        assert!(is_irreducible(&f, 5));
    }

    #[test]
    fn factorization_recovers_product() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let p = 13;
        let a = vec![1, 1];
        let b = vec![2, 0, 1];
        let c = first_irreducible(p, 3);
        let f = mul(&mul(&a, &b, p), &c, p);
        let mut factors = factor_squarefree(&f, p, &mut rng);
        let prod = factors.iter().fold(vec![1], |acc, g| mul(&acc, g, p));
        assert_eq!(prod, f);
        factors.retain(|g| g.len() == 4);
        assert_eq!(factors, vec![c]);
    }
}
