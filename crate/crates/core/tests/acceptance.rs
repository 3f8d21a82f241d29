//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use num::{BigInt, BigRational, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use superelliptic::curve::{Curve, CurvePoint};
use superelliptic::exactfield::{Embedding, Field, FieldElement};
use superelliptic::moebius::{cross_ratio, lemma_gen_check, ProjPoint};
use superelliptic::picard::{enumerate_picard, explicit_quartic, picard_quartics, picard_verify_orders};
use superelliptic::rr_oracle::{point_order, rr_basis, OrderResult};
use superelliptic::torsion::{check_order_n_at, family_char_p, family_mu, scan_n_packets, PacketResult};
use superelliptic::upoly::{discriminant, is_squarefree, Poly};
use superelliptic::zeta::{count_points, l_polynomial, DEFAULT_BUDGET};

type Outcome = Result<String, String>;

/// Name, check, time limit in seconds.
type Criterion = (&'static str, fn() -> Outcome, u64);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn prime(p: u64) -> Field {
    Field::prime(p).unwrap()
}

/// A random curve `y^d = (x - a)^n + v^d` with a packet over `a`.
fn planted_curve(field: &Field, d: u32, n: u32, rng: &mut ChaCha8Rng) -> (Curve, FieldElement) {
    let deg_v = ((n - 1) / d) as usize;
    loop {
        let a = field.random_element(rng);
        let v = Poly::new(field, (0..=deg_v).map(|_| field.random_element(rng)).collect());
        if v.eval(&a).is_zero() {
            continue;
        }
        let f = &Poly::linear_root(&a).pow(n) + &v.pow(d);
        if is_squarefree(&f) {
            return (Curve::new(field, d, n, f).unwrap(), a);
        }
    }
}

fn family_curves() -> Vec<Curve> {
    [(3, 4, 7), (2, 5, 7), (3, 5, 7), (4, 5, 13), (2, 7, 13)]
        .into_iter()
        .map(|(d, n, p)| family_mu(&prime(p), d, n).unwrap())
        .collect()
}

fn criterion_1() -> Outcome {
    for c in family_curves() {
        let field = c.field();
        let p = CurvePoint::Affine { x: field.zero(), y: field.one() };
        let r = point_order(&c, &p, c.n());
        ensure(r.result == OrderResult::Order(c.n()), || format!("{c}: {:?}", r.result))?;
        let cert = r.certificate_function(&c).ok_or_else(|| format!("{c}: no certificate"))?;
        ensure(r.verified && c.verify_certificate(&p, c.n(), &cert), || format!("{c}: certificate fails"))?;
    }
    Ok("(0,1) has order n on y^d = x^n + 1 for all five (d,n)".into())
}

fn order_d_check(curves: &[Curve]) -> Result<usize, String> {
    let mut points = 0;
    for c in curves {
        let (d, n) = (c.d(), c.n());
        for p in c.affine_points() {
            points += 1;
            let ramified = p.y().unwrap().is_zero();
            let r = point_order(c, &p, n - 1).result;
            if ramified {
                ensure(r == OrderResult::Order(d), || format!("{c} at {p}: {r:?}, expected order {d}"))?;
            } else if let OrderResult::Order(m) = r {
                ensure(m == d, || format!("{c} at {p}: order {m} in the gap"))?;
            }
        }
    }
    Ok(points)
}

fn criterion_2_curves() -> Vec<Curve> {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let f13 = prime(13);
    let mut curves = Vec::new();
    for (d, n) in [(3, 4), (2, 5)] {
        for _ in 0..100 {
            curves.push(Curve::random(&f13, d, n, &mut rng).unwrap());
        }
    }
    curves
}

fn criterion_2() -> Outcome {
    let curves = criterion_2_curves();
    let points = order_d_check(&curves)?;
    Ok(format!("{} curves over F_13, {points} affine points", curves.len()))
}

fn criterion_3_pairs() -> Vec<(Curve, FieldElement)> {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let shapes = [(7, 3, 4), (7, 2, 5), (11, 2, 5), (11, 2, 7), (13, 3, 4), (13, 4, 5), (13, 2, 7), (13, 3, 5)];
    let mut pairs = Vec::new();
    for i in 0..200 {
        let (p, d, n) = shapes[i % shapes.len()];
        let field = prime(p);
        if i % 2 == 0 {
            pairs.push(planted_curve(&field, d, n, &mut rng));
        } else {
            let c = Curve::random(&field, d, n, &mut rng).unwrap();
            let a = field.random_element(&mut rng);
            pairs.push((c, a));
        }
    }
    pairs
}

fn criterion_3() -> Outcome {
    let mut packets = 0;
    let mut lifts = 0;
    for (c, a) in criterion_3_pairs() {
        let result = check_order_n_at(&c, &a);
        if matches!(result, PacketResult::Packet(_)) {
            packets += 1;
        }
        for p in c.lift_x(&a).unwrap() {
            lifts += 1;
            let oracle = point_order(&c, &p, c.n()).result == OrderResult::Order(c.n());
            let criterion = matches!(&result, PacketResult::Packet(pk) if pk.points.contains(&p));
            ensure(oracle == criterion, || format!("{c} at {p}: oracle {oracle}, criterion {criterion}"))?;
        }
    }
    Ok(format!("200 pairs, {lifts} points, {packets} packets"))
}

fn criterion_4_curves() -> Vec<Curve> {
    let f5 = prime(5);
    let f25 = Field::finite(5, 2).unwrap();
    let into25 = Embedding::new(&f5, &f25).unwrap();
    let mut curves = Vec::new();
    for b in f5.elements().filter(|b| !b.is_zero()) {
        curves.push(family_char_p(&f5, 2, 5, &b).unwrap());
        curves.push(family_char_p(&f25, 3, 5, &into25.apply(&b)).unwrap());
    }
    for b in f25.elements().filter(|b| !b.is_zero()) {
        for d in [2, 3] {
            curves.push(family_char_p(&f25, d, 5, &b).unwrap());
        }
    }
    curves
}

fn criterion_4() -> Outcome {
    let family = criterion_4_curves();
    for c in &family {
        let scan = scan_n_packets(c, &[]);
        ensure(scan.complete && scan.packets.len() == 1 && scan.packets[0].a.is_zero(), || {
            format!("{c}: {} packets", scan.packets.len())
        })?;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let f5 = prime(5);
    let f25 = Field::finite(5, 2).unwrap();
    let into25 = Embedding::new(&f5, &f25).unwrap();
    let mut histogram = [0usize; 2];
    for i in 0..150 {
        let c = match i % 3 {
            0 => Curve::random(&f5, 2, 5, &mut rng).unwrap(),
            1 => loop {
                let base = Poly::new(&f5, (0..5).map(|_| f5.random_element(&mut rng)).chain([f5.one()]).collect());
                if let Ok(c) = Curve::new(&f25, 3, 5, base.map_coeffs(&f25, |e| into25.apply(e))) {
                    break c;
                }
            },
            _ => Curve::random(&f25, 3, 5, &mut rng).unwrap(),
        };
        let k = scan_n_packets(&c, &[]).packets.len();
        ensure(k <= 1, || format!("{c}: {k} packets"))?;
        histogram[k] += 1;
    }
    Ok(format!(
        "{} family curves with one packet each; 150 random curves: {} with none, {} with one",
        family.len(),
        histogram[0],
        histogram[1]
    ))
}

fn criterion_5() -> Outcome {
    let data = enumerate_picard();
    ensure(data.len() == 6, || format!("{} data", data.len()))?;
    let quartics = picard_quartics(&data);
    ensure(quartics.len() == 2, || format!("{} quartics", quartics.len()))?;
    for conj in [false, true] {
        let q = explicit_quartic(conj);
        ensure(quartics.contains(&q), || format!("{q} missing"))?;
    }
    for (i, d) in data.iter().enumerate() {
        for p in [13, 37] {
            let r = picard_verify_orders(d, p).map_err(|e| e.to_string())?;
            ensure(r.all_order_four(), || format!("datum {i} mod {p}: {}", r.to_json()))?;
        }
    }
    Ok("6 data, 2 quartics matching the explicit pair, 72 order-4 checks mod 13 and 37".into())
}

fn criterion_6() -> Outcome {
    let q = Field::rationals();
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for _ in 0..20 {
        let mut r =
            || q.from_rational(&BigRational::new(rng.gen_range(-50..50).into(), rng.gen_range(1..12).into())).unwrap();
        let (a, b) = (r(), r());
        let f = &Poly::monomial(q.one(), 4) + &Poly::new(&q, vec![b.clone(), a.clone()]).pow(3);
        let b8 = b.pow(8).unwrap();
        let rhs = &b8 * &(&(&q.from_i64(256) * &b) - &(&q.from_i64(27) * &a.pow(4).unwrap()));
        let lhs = discriminant(&f).map_err(|e| e.to_string())?;
        ensure(lhs == rhs, || format!("a = {a}, b = {b}: {lhs} != {rhs}"))?;
    }
    for d in enumerate_picard() {
        ensure(d.discriminant_identity_holds(), || format!("{}: identity fails", d.f))?;
    }
    Ok("20 rational points and the six Picard data".into())
}

fn criterion_7() -> Outcome {
    let mut rational = Vec::new();
    for n in 4..=12 {
        let r = lemma_gen_check(n).map_err(|e| e.to_string())?;
        if !r.obstructed {
            rational.push(n);
        }
    }
    ensure(rational == [4, 6], || format!("rational for n in {rational:?}"))?;
    let k = Field::cyclotomic(12).unwrap();
    let i = k.generator().pow(3).unwrap();
    let pts: Vec<ProjPoint> = [k.one(), i.clone(), k.from_i64(-1), -&i].into_iter().map(ProjPoint::Finite).collect();
    let r = cross_ratio(&pts[0], &pts[1], &pts[2], &pts[3]).map_err(|e| e.to_string())?;
    ensure(r == k.from_i64(2), || format!("cross_ratio(1, i, -1, -i) = {r}"))?;
    Ok("rational exactly for n = 4, 6".into())
}

fn criterion_8() -> Outcome {
    let f7 = prime(7);
    let e = Curve::new(&f7, 2, 3, Poly::from_i64s(&f7, &[1, 0, 0, 1])).unwrap();
    let order = l_polynomial(&e, DEFAULT_BUDGET).map_err(|e| e.to_string())?.jacobian_order;
    ensure(order == BigInt::from(12), || format!("#J(y^2 = x^3 + 1 / F_7) = {order}"))?;

    let mut curves = family_curves();
    curves.extend(criterion_2_curves());
    curves.extend(criterion_3_pairs().into_iter().map(|(c, _)| c));
    curves.extend(criterion_4_curves());
    let small: Vec<Curve> = curves.into_iter().filter(|c| c.genus() <= 3 && c.field().order().unwrap() <= 13).collect();
    let (mut orders, mut round_trips) = (0, 0);
    for c in &small {
        let z = l_polynomial(c, DEFAULT_BUDGET).map_err(|e| format!("{c}: {e}"))?;
        for p in c.affine_points() {
            if let OrderResult::Order(m) = point_order(c, &p, c.n()).result {
                orders += 1;
                ensure((&z.jacobian_order % m).is_zero(), || {
                    format!("{c}: {p} has order {m}, #J = {}", z.jacobian_order)
                })?;
            }
        }
        let g = z.genus as usize;
        let extra = if z.q.pow(g as u32 + 1) <= 10_000 { 1 } else { 0 };
        let recovered = z.counts_from_l(g + extra);
        for k in 1..=g + extra {
            let direct = count_points(c, k).map_err(|e| e.to_string())?;
            ensure(recovered[k - 1] == BigInt::from(direct), || format!("{c}: N_{k} round trip"))?;
            round_trips += 1;
        }
    }
    Ok(format!("#J = 12; {} curves, {orders} point orders divide #J, {round_trips} counts recovered", small.len()))
}

fn criterion_9() -> Outcome {
    let mut curves = family_curves();
    curves.extend(criterion_2_curves().into_iter().step_by(20));
    let picard = enumerate_picard().remove(0).f;
    curves.push(Curve::new(&picard.field().clone(), 3, 4, picard).unwrap());
    for c in &curves {
        let g = c.genus();
        for m in (2 * g).saturating_sub(1)..=4 * g {
            let dim = rr_basis(c, m).monomials.len() as i64;
            ensure(dim == m as i64 - g as i64 + 1, || format!("{c}: dim L({m}) = {dim}"))?;
        }
        let gaps =
            (1..=2 * g).filter(|&m| rr_basis(c, m).monomials.len() == rr_basis(c, m - 1).monomials.len()).count();
        ensure(gaps == g as usize, || format!("{c}: {gaps} gaps, genus {g}"))?;
    }
    Ok(format!("{} curves", curves.len()))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        ("order-n families", criterion_1, 5),
        ("order-d classification and gaps", criterion_2, 60),
        ("criterion agrees with oracle", criterion_3, 60),
        ("char-p uniqueness", criterion_4, 120),
        ("Picard enumeration", criterion_5, 10),
        ("discriminant identity", criterion_6, 10),
        ("cross-ratio rationality", criterion_7, 10),
        ("zeta consistency", criterion_8, 120),
        ("Riemann-Roch dimensions", criterion_9, 1),
    ];
    let mut failures = 0;
    for (i, (name, run, limit)) in criteria.into_iter().enumerate() {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|_| Err("panicked".into()));
        let elapsed = start.elapsed();
        let outcome = match outcome {
            Ok(_) if elapsed > Duration::from_secs(limit) => Err(format!("took {elapsed:.2?}, limit {limit} s")),
            other => other,
        };
        match outcome {
            Ok(detail) => println!("criterion {}: PASS  {name} ({elapsed:.2?}): {detail}", i + 1),
            Err(why) => {
                failures += 1;
                println!("criterion {}: FAIL  {name} ({elapsed:.2?}): {why}", i + 1);
            }
        }
    }
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
