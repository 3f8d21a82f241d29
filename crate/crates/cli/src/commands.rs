use std::fs;
use std::io::Read;
use std::path::Path;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::{json, Value as Json};

use superelliptic::curve::{Curve, CurvePoint};
use superelliptic::exactfield::{Field, FieldElement};
use superelliptic::moebius::lemma_gen_check;
use superelliptic::picard::{enumerate_picard, explicit_quartic, picard_quartics, picard_verify_orders};
use superelliptic::rr_oracle::{point_order, OrderResult};
use superelliptic::torsion::{family_char_p, points_of_order_d, scan_n_packets};
use superelliptic::zeta::l_polynomial;

use crate::report::{InputError, RunReport};

pub type CmdResult = Result<RunReport, InputError>;

pub fn load_curve(path: &Path) -> Result<Curve, InputError> {
    let text = if path.as_os_str() == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s).map_err(|e| InputError::new("io", e))?;
        s
    } else {
        fs::read_to_string(path).map_err(|e| InputError::new("io", format!("{}: {e}", path.display())))?
    };
    let json: Json = serde_json::from_str(&text).map_err(|e| InputError::new("json", e))?;
    Curve::from_json(&json).map_err(|e| InputError::new("curve", e))
}

fn parse_element(curve: &Curve, text: &str) -> Result<FieldElement, InputError> {
    curve.field().parse_element_str(text).map_err(|e| InputError::new("element", format!("{text}: {e}")))
}

fn report(command: &str, inputs: Json, seed: Option<u64>, findings: Json, pass: bool) -> RunReport {
    RunReport { command: command.into(), inputs, seed, findings, pass }
}

pub fn validate(curve: &Curve) -> CmdResult {
    let findings = json!({"curve": curve.to_json(), "genus": curve.genus(), "zeta": curve.zeta().to_json()});
    Ok(report("validate", json!({"curve": curve.to_json()}), None, findings, true))
}

fn order_entry(curve: &Curve, p: &CurvePoint, max: u32) -> (Json, bool) {
    let r = point_order(curve, p, max);
    let entry = match r.result {
        OrderResult::Order(m) => json!({"point": p.to_json(), "order": m, "verified": r.verified}),
        OrderResult::ExceedsBound(b) => json!({"point": p.to_json(), "exceedsBound": b}),
    };
    (entry, r.result == OrderResult::ExceedsBound(max) || r.verified)
}

pub fn order(curve: &Curve, x: &str, y: Option<&str>, max: u32) -> CmdResult {
    let a = parse_element(curve, x)?;
    let points = match y {
        Some(y) => vec![curve.point(a, parse_element(curve, y)?).map_err(|e| InputError::new("point", e))?],
        None => curve.lift_x(&a).map_err(|e| InputError::new("point", e))?,
    };
    if points.is_empty() {
        return Err(InputError::new("point", format!("no point with x = {x} over {}", curve.field())));
    }
    let mut entries = Vec::new();
    let mut pass = true;
    for p in &points {
        let (entry, ok) = order_entry(curve, p, max);
        entries.push(entry);
        pass &= ok;
    }
    let first = entries[0].get("order").cloned();
    let common = if entries.iter().all(|e| e.get("order").cloned() == first) { first } else { None };
    let findings = json!({"order": common, "points": entries});
    let inputs = json!({"curve": curve.to_json(), "x": x, "y": y, "max": max});
    Ok(report("order", inputs, None, findings, pass))
}

pub fn order_d(curve: &Curve) -> CmdResult {
    let (points, complete) = points_of_order_d(curve, &[]);
    let d = curve.d();
    let mut pass = true;
    let mut entries = Vec::new();
    for p in &points {
        let r = point_order(curve, p, d);
        pass &= r.result == OrderResult::Order(d) && r.verified;
        entries.push(p.to_json());
    }
    let findings = json!({"d": d, "points": entries, "complete": complete});
    Ok(report("order-d", json!({"curve": curve.to_json()}), None, findings, pass))
}

pub fn packets(curve: &Curve, candidates: &[String]) -> CmdResult {
    let cands = candidates.iter().map(|c| parse_element(curve, c)).collect::<Result<Vec<_>, _>>()?;
    let scan = scan_n_packets(curve, &cands);
    let n = curve.n();
    let mut pass = true;
    for pk in &scan.packets {
        for p in &pk.points {
            let cert = pk.certificate_for(curve, p).expect("affine packet point");
            pass &= curve.verify_certificate(p, n, &cert);
        }
    }
    let findings = json!({
        "packets": scan.packets.iter().map(|p| p.to_json()).collect::<Vec<_>>(),
        "complete": scan.complete,
        "undecided": scan.undecided.iter().map(FieldElement::to_json).collect::<Vec<_>>(),
    });
    let inputs = json!({"curve": curve.to_json(), "candidates": candidates});
    Ok(report("packets", inputs, None, findings, pass))
}

pub fn picard(dump: bool) -> CmdResult {
    let data = enumerate_picard();
    let quartics = picard_quartics(&data);
    let expected = [explicit_quartic(false), explicit_quartic(true)];
    let matches_explicit = expected.iter().all(|q| quartics.contains(q));
    let mut verifications = Vec::new();
    let mut orders_ok = true;
    for (i, datum) in data.iter().enumerate() {
        for p in [13u64, 37] {
            let r = picard_verify_orders(datum, p).map_err(|e| InputError::new("picard", e))?;
            orders_ok &= r.all_order_four();
            verifications.push(json!({"datum": i, "p": p, "allOrderFour": r.all_order_four()}));
        }
    }
    let invariants_ok = data.iter().all(|d| {
        d.discriminant_identity_holds()
            && d.normalization_holds()
            && d.honest_report().map(|r| r.all_hold()).unwrap_or(false)
    });
    let mut findings = json!({
        "data": data.len(),
        "quartics": quartics.iter().map(|q| q.to_json()).collect::<Vec<_>>(),
        "matchesExplicit": matches_explicit,
        "invariants": invariants_ok,
        "orderChecks": verifications,
    });
    if dump {
        findings["dump"] = Json::Array(data.iter().map(|d| d.to_json()).collect());
    }
    let pass = data.len() == 6 && quartics.len() == 2 && matches_explicit && orders_ok && invariants_ok;
    Ok(report("picard", json!({"dump": dump}), None, findings, pass))
}

pub fn zeta(curve: &Curve, budget: u128) -> CmdResult {
    let z = l_polynomial(curve, budget).map_err(|e| InputError::new("zeta", e))?;
    let inputs = json!({"curve": curve.to_json(), "budget": budget.to_string()});
    Ok(report("zeta", inputs, None, z.to_json(), true))
}

fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

/// No affine point has order in `{2, ..., n-1}` other than `d`, and order
/// `d` occurs exactly at `y = 0`.
pub fn verify_gap(p: u64, d: u32, n: u32, trials: u64, seed: u64) -> CmdResult {
    let field = Field::prime(p).map_err(|e| InputError::new("field", e))?;
    Curve::random(&field, d, n, &mut trial_rng(seed, 0)).map_err(|e| InputError::new("curve", e))?;
    let results: Vec<(Json, u64, bool)> = (0..trials)
        .into_par_iter()
        .map(|t| {
            let curve = Curve::random(&field, d, n, &mut trial_rng(seed, t)).expect("parameters checked");
            let mut violations = Vec::new();
            let mut checked = 0u64;
            for pt in curve.affine_points() {
                checked += 1;
                let ramified = pt.y().map(FieldElement::is_zero).unwrap_or(false);
                let ok = match point_order(&curve, &pt, n - 1).result {
                    OrderResult::Order(m) => m == d && ramified,
                    OrderResult::ExceedsBound(_) => !ramified,
                };
                if !ok {
                    violations.push(pt.to_json());
                }
            }
            let pass = violations.is_empty();
            (json!({"trial": t, "f": curve.f().to_json(), "violations": violations}), checked, pass)
        })
        .collect();
    let pass = results.iter().all(|r| r.2);
    let points: u64 = results.iter().map(|r| r.1).sum();
    let failures: Vec<Json> = results.into_iter().filter(|r| !r.2).map(|r| r.0).collect();
    let findings = json!({"trials": trials, "pointsChecked": points, "failures": failures});
    let inputs = json!({"p": p, "d": d, "n": n, "trials": trials});
    Ok(report("verify gap", inputs, Some(seed), findings, pass))
}

/// Smallest `k` with `d | p^k - 1`.
fn extension_for_mu(p: u64, d: u32) -> usize {
    let mut q = p % d as u64;
    let mut k = 1;
    while q != 1 % d as u64 {
        q = q * p % d as u64;
        k += 1;
    }
    k
}

/// Every `x^n + (b x + 1)^d` with `b != 0` has exactly one packet, at `0`.
pub fn verify_uniqueness_charp(p: u64, n: u32, d: u32, ext: Option<usize>) -> CmdResult {
    if (d as u64).is_multiple_of(p) {
        return Err(InputError::new("field", format!("characteristic {p} divides d = {d}")));
    }
    let k = ext.unwrap_or_else(|| extension_for_mu(p, d));
    let field = Field::finite(p, k).map_err(|e| InputError::new("field", e))?;
    let bs: Vec<FieldElement> = field.elements().filter(|b| !b.is_zero()).collect();
    family_char_p(&field, d, n, &bs[0]).map_err(|e| InputError::new("curve", e))?;
    let results: Vec<(Json, bool)> = bs
        .par_iter()
        .map(|b| {
            let curve = family_char_p(&field, d, n, b).expect("parameters checked");
            let scan = scan_n_packets(&curve, &[]);
            let ok = scan.complete && scan.packets.len() == 1 && scan.packets[0].a.is_zero();
            (json!({"b": b.to_json(), "packets": scan.packets.len()}), ok)
        })
        .collect();
    let pass = results.iter().all(|r| r.1);
    let failures: Vec<Json> = results.iter().filter(|r| !r.1).map(|r| r.0.clone()).collect();
    let findings = json!({"field": field.to_string(), "curves": results.len(), "failures": failures});
    let inputs = json!({"p": p, "n": n, "d": d, "ext": k});
    Ok(report("verify uniqueness-charp", inputs, None, findings, pass))
}

/// Rational cross-ratio exactly for `n` in `{4, 6}`.
pub fn verify_lemma_gen(nmax: u32) -> CmdResult {
    if nmax < 4 {
        return Err(InputError::new("range", "nmax must be at least 4"));
    }
    let reports = (4..=nmax)
        .into_par_iter()
        .map(lemma_gen_check)
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| InputError::new("lemma-gen", e))?;
    let pass = reports.iter().all(|r| r.obstructed == !matches!(r.n, 4 | 6));
    let findings = json!({"verdicts": reports.iter().map(|r| r.to_json()).collect::<Vec<_>>()});
    Ok(report("verify lemma-gen", json!({"nmax": nmax}), None, findings, pass))
}
