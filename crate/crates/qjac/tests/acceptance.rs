//! Acceptance gate: one test per criterion, each printing a single
//! PASS/FAIL line and asserting the outcome.

use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use num::Zero;

use qjac::certify::{b_prime_sigma, certify_equal, BPrime};
use qjac::jacobi::{appendix_values, registry, theta, NamedKey};
use qjac::modular::{delta, membership, verify_strong_bound_range, Membership};
use qjac::rational::{int, rat, Rational};
use qjac::tables::{bps_numbers_k3e, invariant_n};
use qjac::verify::{run_suite, VerifyConfig};
use qjac::ycoords::{bps_expand, ck_equivalence, support_check};

fn report(name: &str, pass: bool, detail: &str) {
    if pass {
        println!("PASS {name}");
    } else {
        println!("FAIL {name}: {detail}");
    }
    assert!(pass, "{name}: {detail}");
}

#[test]
fn criterion_01_b_prime_table() {
    let start = Instant::now();
    let expect = [2, 6, 10, 12, 14, 18, 20, 24, 26, 28];
    let mut ok = true;
    for (i, sigma) in (-2..=16).step_by(2).enumerate() {
        ok &= b_prime_sigma(sigma).unwrap() == BPrime::Value(expect[i]);
    }
    let elapsed = start.elapsed();
    report(
        "b-prime-table",
        ok && elapsed < Duration::from_secs(1),
        &format!("values ok: {ok}, elapsed: {elapsed:?}"),
    );
}

#[test]
fn criterion_02_strong_vanishing_bound() {
    let start = Instant::now();
    let results = verify_strong_bound_range(120);
    let all_full = results.iter().all(|(_, c)| c.is_full_rank());
    let elapsed = start.elapsed();
    report(
        "strong-vanishing-bound",
        all_full && results.len() == 60 && elapsed < Duration::from_secs(300),
        &format!("full rank: {all_full}, weights checked: {}, elapsed: {elapsed:?}", results.len()),
    );
}

#[test]
fn criterion_03_g_normalization() {
    let g = registry(NamedKey::BigG, &[], 4, 25).unwrap().series;
    let mut ok = true;
    for n in 0..25 {
        ok &= g.coefficient(0, n).unwrap() == int(i64::from(n == 0));
        ok &= g.coefficient(2, n).unwrap() == int(0);
    }
    report("g-normalization", ok, "constant or u^2 layer deviates");
}

#[test]
fn criterion_04_polar_part_identity() {
    let g = registry(NamedKey::BigG, &[], 8, 16).unwrap().series;
    let kkv = registry(NamedKey::Kkv, &[], 8, 16).unwrap().series;
    let inv_delta = delta(11).invert().unwrap();
    let mut ok = true;
    let mut detail = String::new();
    for d in 0..=4u32 {
        let f = g.pow(d).mul(&kkv);
        for h in 0..=8 {
            let lhs = f.coefficient(-2, h - 1).unwrap();
            let rhs = inv_delta.coefficient(h - 1).unwrap();
            if lhs != rhs {
                ok = false;
                detail = format!("d={d}, h={h}: {lhs} != {rhs}");
            }
        }
    }
    report("polar-part-identity", ok, &detail);
}

#[test]
fn criterion_05_uniqueness_application() {
    // the combination G + Theta * D(Theta), whose u^m layer lies in
    // QMod_m; checked for all layers up to u^22
    let f = registry(NamedKey::Utut, &[], 24, 25).unwrap().series;
    let mut prop_a = true;
    for (&m, layer) in f.layers() {
        if m > 22 {
            continue;
        }
        prop_a &= m >= 0
            && m % 2 == 0
            && matches!(membership(layer, m, 5).unwrap(), Membership::Member(_));
    }
    let table = bps_expand(&f, 1).unwrap();
    let prop_c = support_check(&table).pass;

    // independent second construction: G + (1/2) D(Theta^2)
    let th = theta(26, 27);
    let g = registry(NamedKey::BigG, &[], 24, 25).unwrap().series;
    let f2 = g
        .add(&th.mul(&th).d_dq_log().scale(&rat(1, 2)))
        .truncate(24, 25);
    let rep = certify_equal(&f, &f2, 0, true, 5).unwrap();
    report(
        "uniqueness-application",
        prop_a && prop_c && rep.certified(),
        &format!("prop_a: {prop_a}, prop_c: {prop_c}, verdict: {:?}", rep.verdict),
    );
}

#[test]
fn criterion_06_appendix_test_vectors() {
    let vals = appendix_values(20);
    let dl = delta(20);
    let weights = [4, 6, 6, 6];
    let expected: [BTreeMap<(u32, u32, u32), Rational>; 4] = [
        BTreeMap::from([((2, 0, 0), int(-2)), ((0, 1, 0), int(10))]),
        BTreeMap::from([
            ((3, 0, 0), rat(-8, 3)),
            ((1, 1, 0), int(16)),
            ((0, 0, 1), int(-7)),
        ]),
        BTreeMap::from([
            ((3, 0, 0), int(-4)),
            ((1, 1, 0), int(12)),
            ((0, 0, 1), int(21)),
        ]),
        BTreeMap::from([((3, 0, 0), int(-4)), ((1, 1, 0), int(20))]),
    ];
    let mut ok = true;
    let mut detail = String::new();
    for i in 0..4 {
        let f = vals[i].mul(&dl);
        match membership(&f, weights[i], 5).unwrap() {
            Membership::Member(el) => {
                let coords: BTreeMap<_, _> = el
                    .coords
                    .iter()
                    .filter(|(_, v)| !v.is_zero())
                    .map(|(k, v)| (*k, v.clone()))
                    .collect();
                if coords != expected[i] {
                    ok = false;
                    detail = format!("value {i}: coordinates {coords:?}");
                }
            }
            Membership::NotMember => {
                ok = false;
                detail = format!("value {i}: not a member at weight {}", weights[i]);
            }
        }
    }
    report("appendix-test-vectors", ok, &detail);
}

#[test]
fn criterion_07_ck_equivalence_sweep() {
    let start = Instant::now();
    let rep = ck_equivalence(2, 200, 200).unwrap();
    let elapsed = start.elapsed();
    report(
        "ck-equivalence-sweep",
        rep.implication_holds && rep.equivalent_at_d2 && elapsed < Duration::from_secs(1),
        &format!("counterexamples: {:?}, elapsed: {elapsed:?}", rep.counterexamples),
    );
}

#[test]
fn criterion_08_bps_integrality_and_genus0() {
    let inv_delta = delta(9).invert().unwrap();
    let mut ok = true;
    let mut detail = String::new();
    for h in 0..=6 {
        // integrality is enforced inside bps_numbers_k3e
        match bps_numbers_k3e(h) {
            Ok(table) => {
                let n0 = table.get(&0).cloned().unwrap_or_default();
                let expect = inv_delta.coefficient(h - 1).unwrap();
                if Rational::from(n0.clone()) != expect.clone() * int(24) {
                    ok = false;
                    detail = format!("h={h}: n_0 = {n0}, expected 24 * {expect}");
                }
            }
            Err(e) => {
                ok = false;
                detail = format!("h={h}: {e}");
            }
        }
    }
    report("bps-integrality-genus0", ok, &detail);
}

#[test]
fn criterion_09_property_suites() {
    let start = Instant::now();
    let cfg = VerifyConfig {
        u_prec: 16,
        q_prec: 18,
        guard: 5,
        max_weight: 24,
        seed: 0,
    };
    let core = run_suite("series-core", &cfg).unwrap();
    let yc = run_suite("ycoords", &cfg).unwrap();
    let elapsed = start.elapsed();
    report(
        "property-suites",
        core.all_pass() && yc.all_pass() && elapsed < Duration::from_secs(60),
        &format!(
            "series-core: {}, ycoords: {}, elapsed: {elapsed:?}",
            core.all_pass(),
            yc.all_pass()
        ),
    );
}

#[test]
fn criterion_10_theorem_shaped_vanishing() {
    let mut ok = true;
    for m in 0..=5 {
        for g in -1..=5 {
            for h in 0..=5 {
                ok &= invariant_n(m, 0, g, h).unwrap() == int(0);
            }
        }
    }
    report("theorem-shaped-vanishing", ok, "a vanishing invariant is nonzero");
}
