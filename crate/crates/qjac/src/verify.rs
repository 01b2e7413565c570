//! Invariant suites runnable from the command line: each suite executes
//! a fixed list of checks and reports one PASS/FAIL line per check,
//! sorted by check name.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::certify::{self, BPrime};
use crate::jacobi::{self, NamedKey};
use crate::modular::{self, RankCertificate};
use crate::rational::{rat, Rational};
use crate::series::{QLaurent, UQSeries};
use crate::tables;
use crate::ycoords;

#[derive(Debug, Clone)]
pub struct CheckResult {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

#[derive(Debug, Clone)]
pub struct SuiteReport {
    pub suite: String,
    pub checks: Vec<CheckResult>,
}

impl SuiteReport {
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    /// One line per check, sorted by name, plus a summary line.
    pub fn render(&self) -> String {
        let mut checks = self.checks.clone();
        checks.sort_by(|a, b| a.name.cmp(&b.name));
        let mut out = String::new();
        for c in &checks {
            if c.pass {
                out.push_str(&format!("PASS {}\n", c.name));
            } else {
                out.push_str(&format!("FAIL {}: {}\n", c.name, c.detail));
            }
        }
        let failed = checks.iter().filter(|c| !c.pass).count();
        out.push_str(&format!(
            "{}: {} checks, {} passed, {} failed\n",
            self.suite,
            checks.len(),
            checks.len() - failed,
            failed
        ));
        out
    }
}

#[derive(Debug, Clone, Copy)]
pub struct VerifyConfig {
    pub u_prec: i64,
    pub q_prec: i64,
    pub guard: i64,
    pub max_weight: i64,
    pub seed: u64,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig {
            u_prec: 24,
            q_prec: 25,
            guard: 5,
            max_weight: 120,
            seed: 0,
        }
    }
}

pub const SUITES: [&str; 7] = [
    "series-core",
    "qmod-rank",
    "jacobi",
    "ycoords",
    "certify",
    "tables",
    "all",
];

/// Run a named suite; `None` for an unknown name.
pub fn run_suite(name: &str, cfg: &VerifyConfig) -> Option<SuiteReport> {
    match name {
        "series-core" => Some(series_core_suite(cfg)),
        "qmod-rank" => Some(qmod_rank_suite(cfg)),
        "jacobi" => Some(jacobi_suite(cfg)),
        "ycoords" => Some(ycoords_suite(cfg)),
        "certify" => Some(certify_suite(cfg)),
        "tables" => Some(tables_suite(cfg)),
        "all" => {
            let mut checks = Vec::new();
            for sub in &SUITES[..6] {
                let rep = run_suite(sub, cfg).expect("known suite");
                for mut c in rep.checks {
                    c.name = format!("{sub}/{}", c.name);
                    checks.push(c);
                }
            }
            Some(SuiteReport {
                suite: "all".into(),
                checks,
            })
        }
        _ => None,
    }
}

fn check(name: &str, pass: bool, detail: &str) -> CheckResult {
    CheckResult {
        name: name.to_string(),
        pass,
        detail: detail.to_string(),
    }
}

fn random_q(rng: &mut ChaCha8Rng, prec: i64, min_exp: i64) -> QLaurent {
    let mut coeffs = BTreeMap::new();
    for e in min_exp..prec {
        if rng.gen_bool(0.6) {
            let n = rng.gen_range(-12i64..=12);
            let d = rng.gen_range(1i64..=6);
            if n != 0 {
                coeffs.insert(e, rat(n, d));
            }
        }
    }
    QLaurent::from_coeffs(coeffs, prec)
}

fn random_uq(rng: &mut ChaCha8Rng, u_prec: i64, q_prec: i64) -> UQSeries {
    let mut layers = BTreeMap::new();
    for e in -2..u_prec {
        if rng.gen_bool(0.4) {
            layers.insert(e, random_q(rng, q_prec, -1));
        }
    }
    UQSeries::from_layers(layers, u_prec, q_prec).expect("floor respected")
}

fn series_core_suite(cfg: &VerifyConfig) -> SuiteReport {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let trials = 25;
    let mut checks = Vec::new();

    let mut comm = true;
    let mut assoc = true;
    let mut distrib = true;
    let mut derivation = true;
    for _ in 0..trials {
        let a = random_uq(&mut rng, 8, 8);
        let b = random_uq(&mut rng, 8, 8);
        let c = random_uq(&mut rng, 8, 8);
        comm &= a.mul(&b).eq_to_prec(&b.mul(&a));
        assoc &= a.mul(&b).mul(&c).eq_to_prec(&a.mul(&b.mul(&c)));
        distrib &= a.mul(&b.add(&c)).eq_to_prec(&a.mul(&b).add(&a.mul(&c)));
        let lhs = a.mul(&b).d_dq_log();
        let rhs = a.d_dq_log().mul(&b).add(&a.mul(&b.d_dq_log()));
        derivation &= lhs.eq_to_prec(&rhs);
    }
    checks.push(check("mul-commutative", comm, "a*b != b*a"));
    checks.push(check("mul-associative", assoc, "(a*b)*c != a*(b*c)"));
    checks.push(check("mul-distributive", distrib, "a*(b+c) != a*b + a*c"));
    checks.push(check("d-derivation", derivation, "D(ab) != D(a)b + aD(b)"));

    let mut inv_ok = true;
    for _ in 0..trials {
        // a unit: 1 plus a perturbation with positive q-valuation
        let mut layers = BTreeMap::new();
        for e in 0..8 {
            if rng.gen_bool(0.5) {
                layers.insert(e, random_q(&mut rng, 8, 1));
            }
        }
        let pert = UQSeries::from_layers(layers, 8, 8).expect("floor respected");
        let a = UQSeries::one(8, 8).add(&pert);
        match a.invert() {
            Ok(inv) => {
                let p = a.mul(&inv);
                inv_ok &= p.eq_to_prec(&UQSeries::one(p.u_prec(), p.q_prec()));
            }
            Err(_) => inv_ok = false,
        }
    }
    checks.push(check("invert-roundtrip", inv_ok, "a * invert(a) != 1"));

    let mut wire = true;
    for _ in 0..trials {
        let a = random_uq(&mut rng, 7, 7);
        wire &= UQSeries::from_json(&a.to_json()).map(|b| b == a).unwrap_or(false);
    }
    checks.push(check("wire-roundtrip", wire, "JSON roundtrip changed the series"));

    SuiteReport {
        suite: "series-core".into(),
        checks,
    }
}

fn qmod_rank_suite(cfg: &VerifyConfig) -> SuiteReport {
    let mut checks = Vec::new();
    for (weight, cert) in modular::verify_strong_bound_range(cfg.max_weight) {
        let (pass, detail) = match cert {
            RankCertificate::FullRank { dim, .. } => (true, format!("dim {dim}")),
            RankCertificate::ViolationCandidate { .. } => {
                (false, "rank-deficient coefficient matrix".into())
            }
        };
        checks.push(check(&format!("weight-{weight:03}"), pass, &detail));
    }
    SuiteReport {
        suite: "qmod-rank".into(),
        checks,
    }
}

fn jacobi_suite(cfg: &VerifyConfig) -> SuiteReport {
    let mut checks = Vec::new();
    let q_prec = cfg.q_prec.min(25);

    let g = jacobi::big_g(12, q_prec);
    let mut norm = true;
    for n in 0..q_prec {
        let expect0 = if n == 0 { rat(1, 1) } else { rat(0, 1) };
        norm &= g.coefficient(0, n).map(|c| c == expect0).unwrap_or(false);
        norm &= g.coefficient(2, n).map(|c| c.eq(&rat(0, 1))).unwrap_or(false);
    }
    checks.push(check("g-normalization", norm, "u^0/u^2 layers off"));

    let inv_delta = modular::delta(12).invert().expect("Delta invertible");
    let mut polar = true;
    for d in 1..=4 {
        let p = jacobi::registry(NamedKey::Polar, &[d], 2, 10)
            .expect("polar series")
            .series;
        for h in 0..=8i64 {
            let lhs = p.coefficient(-2, h - 1).expect("in precision");
            let rhs = inv_delta.coefficient(h - 1).expect("in precision");
            polar &= lhs == rhs;
        }
    }
    checks.push(check("polar-part-identity", polar, "u^-2 row differs from 1/Delta"));

    let l0 = jacobi::registry(NamedKey::L0, &[], 10, 10).expect("L0").series;
    let th = jacobi::theta(11, 12);
    let alt = th
        .mul(&th)
        .d_dq_log()
        .mul(&UQSeries::from_q(
            &modular::delta(12).invert().expect("invertible"),
            11,
        ))
        .scale(&rat(1, 4));
    checks.push(check(
        "l0-product-rule",
        l0.eq_to_prec(&alt),
        "L0 != D(Theta^2)/(4 Delta)",
    ));

    let mut recon = true;
    for (m, n) in [(0i64, 1i64), (1, 1), (2, 1), (1, 2)] {
        let hodge = jacobi::registry(NamedKey::HodgeMn, &[m, n], 8, 8)
            .expect("hodge series")
            .series;
        let shift = 2 * m + 2 * n;
        let direct = {
            let pad = 8 + shift + 2;
            let g = jacobi::big_g(pad, 9).sub(&UQSeries::one(pad, 9));
            let th = jacobi::theta(pad, 9);
            let kkv = jacobi::registry(NamedKey::Kkv, &[], pad, 9).expect("kkv").series;
            g.pow(m as u32).mul(&th.pow(2 * n as u32)).mul(&kkv)
        };
        recon &= hodge
            .shift_u(shift)
            .map(|s| s.eq_to_prec(&direct))
            .unwrap_or(false);
    }
    checks.push(check(
        "hodge-reconstruction",
        recon,
        "u^{2m+2n} * HODGE_MN != (G-1)^m Theta^{2n}/(Theta^2 Delta)",
    ));

    let utut = jacobi::registry(NamedKey::Utut, &[], 12, 14).expect("utut").series;
    let mut member = true;
    for (&m, layer) in utut.layers() {
        if m % 2 != 0 {
            member = false;
            continue;
        }
        member &= matches!(
            modular::membership(layer, m, cfg.guard).unwrap_or(modular::Membership::NotMember),
            modular::Membership::Member(_)
        );
    }
    checks.push(check(
        "utut-layer-membership",
        member,
        "a u^m layer is not quasi-modular of weight m",
    ));

    SuiteReport {
        suite: "jacobi".into(),
        checks,
    }
}

fn ycoords_suite(cfg: &VerifyConfig) -> SuiteReport {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 0x79);
    let mut checks = Vec::new();

    let mut roundtrip = true;
    let basis = ycoords::r_basis(14);
    for _ in 0..20 {
        // random even polynomial
        let mut coeffs = BTreeMap::new();
        for l in 0..6i64 {
            if rng.gen_bool(0.7) {
                coeffs.insert(2 * l, rat(rng.gen_range(-9i64..=9), rng.gen_range(1i64..=4)));
            }
        }
        let f = QLaurent::from_coeffs(coeffs, 14);
        let (b, rem) = ycoords::decompose_r(&f, 6);
        let mut recon = QLaurent::zero(14);
        for (l, bl) in b.iter().enumerate() {
            recon = recon.add(&basis[l].scale(bl));
        }
        // degree <= 12 inputs lie in the span of r^0..r^12 exactly
        roundtrip &= rem.is_zero_to_prec();
        roundtrip &= recon.eq_to_prec(&f);
    }
    checks.push(check("decompose-roundtrip", roundtrip, "sum b_l r^{2l} + rem != f"));

    let mut triangular = true;
    for k in 0..5i64 {
        let (b, _) = ycoords::decompose_r(&QLaurent::monomial(2 * k, rat(1, 1), 14), 6);
        triangular &= b[k as usize] == rat(1, 1);
        triangular &= b[..k as usize].iter().all(|x| *x == rat(0, 1));
    }
    checks.push(check("triangularity", triangular, "leading fit coefficient not 1"));

    let mut yr = true;
    for l in 0..5i64 {
        // binomial y-expansion of r^{2l}
        let mut c: BTreeMap<i64, Rational> = BTreeMap::new();
        for j in 0..=2 * l {
            let v = Rational::from(crate::rational::binomial((2 * l) as u64, j as u64));
            *c.entry(l - j).or_insert_with(|| rat(0, 1)) += v;
        }
        let s = ycoords::y_poly_to_u(&c, 14).expect("symmetric");
        yr &= s.eq_to_prec(&basis[l as usize]);
    }
    checks.push(check("y-r-consistency", yr, "y expansion of r^{2l} mismatch"));

    let rep = ycoords::ck_equivalence(2, 200, 200).expect("d=2 valid");
    checks.push(check(
        "ck-d2-equivalence",
        rep.implication_holds && rep.equivalent_at_d2,
        "genus bound and quadratic bound disagree at d=2",
    ));
    let mut implied = true;
    for d in 3..=5 {
        let r = ycoords::ck_equivalence(d, 80, 80).expect("valid degree");
        implied &= r.implication_holds;
    }
    checks.push(check(
        "ck-implication",
        implied,
        "genus bound fails to imply the quadratic bound",
    ));

    let _ = cfg;
    SuiteReport {
        suite: "ycoords".into(),
        checks,
    }
}

fn certify_suite(cfg: &VerifyConfig) -> SuiteReport {
    let mut checks = Vec::new();

    let expect = [2i64, 6, 10, 12, 14, 18, 20, 24, 26, 28];
    let mut table_ok = true;
    let mut strengthens = true;
    for (i, sigma) in (-2..=16).step_by(2).enumerate() {
        match certify::b_prime_sigma(sigma) {
            Ok(BPrime::Value(v)) => {
                table_ok &= v == expect[i];
                strengthens &= v <= certify::b_sigma(sigma);
            }
            _ => table_ok = false,
        }
    }
    checks.push(check("b-prime-table", table_ok, "tabulated values differ"));
    checks.push(check(
        "b-prime-strengthens",
        strengthens,
        "B' exceeds B at a tabulated sigma",
    ));
    checks.push(check(
        "b-prime-sentinel",
        matches!(certify::b_prime_sigma(-6), Ok(BPrime::MinusInfinity)),
        "sigma < -2 should be always-satisfied",
    ));

    let utut = jacobi::registry(NamedKey::Utut, &[], cfg.u_prec, cfg.q_prec)
        .expect("utut")
        .series;
    let rep = certify::check_candidate(&utut, 0, true, cfg.guard);
    let hyp = rep
        .map(|r| r.prop_a.iter().all(|&(_, ok)| ok) && r.prop_c_pass)
        .unwrap_or(false);
    checks.push(check(
        "utut-hypotheses",
        hyp,
        "UTUT fails (a) or (c) at sigma 0",
    ));

    let zero = UQSeries::zero(12, 12);
    checks.push(check(
        "zero-certifies",
        certify::check_candidate(&zero, 0, true, cfg.guard)
            .map(|r| r.certified())
            .unwrap_or(false),
        "the zero series must certify",
    ));

    SuiteReport {
        suite: "certify".into(),
        checks,
    }
}

fn tables_suite(_cfg: &VerifyConfig) -> SuiteReport {
    let mut checks = Vec::new();

    let mut integral = true;
    let mut genus0 = true;
    let inv_delta = modular::delta(10).invert().expect("invertible");
    for h in 0..=6i64 {
        match tables::bps_numbers_k3e(h) {
            Ok(t) => {
                let expect = inv_delta.coefficient(h - 1).expect("in precision")
                    * Rational::from(num::BigInt::from(24));
                genus0 &= t
                    .get(&0)
                    .map(|v| Rational::from(v.clone()) == expect)
                    .unwrap_or(expect == rat(0, 1));
            }
            Err(_) => integral = false,
        }
    }
    checks.push(check("bps-integrality", integral, "non-integer BPS fit"));
    checks.push(check(
        "bps-genus0-factorization",
        genus0,
        "n_{0,h,1} != 24 * [1/Delta]_{q^{h-1}}",
    ));

    let mut zeros = true;
    for m in 0..4 {
        for g in -1..3 {
            for h in 0..3 {
                zeros &= tables::invariant_n(m, 0, g, h)
                    .map(|v| v == rat(0, 1))
                    .unwrap_or(false);
            }
        }
    }
    checks.push(check("n0-vanishing", zeros, "n = 0 invariants must vanish"));

    let a = tables::WeightedPartition::new(&[(1, "F"), (1, "F"), (2, "p")]);
    let b = tables::WeightedPartition::new(&[(1, "W"), (1, "W"), (2, "q")]);
    checks.push(check(
        "z-factor-relabel",
        tables::z_factor(&a) == tables::z_factor(&b),
        "relabeling changed the z-factor",
    ));

    SuiteReport {
        suite: "tables".into(),
        checks,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quick_suites_pass() {
        let cfg = VerifyConfig {
            max_weight: 30,
            u_prec: 12,
            q_prec: 14,
            ..Default::default()
        };
        for suite in ["series-core", "ycoords", "certify", "tables", "jacobi", "qmod-rank"] {
            let rep = run_suite(suite, &cfg).unwrap();
            assert!(rep.all_pass(), "{}:\n{}", suite, rep.render());
        }
        assert!(run_suite("nosuch", &cfg).is_none());
    }

    #[test]
    fn deterministic_output() {
        let cfg = VerifyConfig {
            max_weight: 10,
            ..Default::default()
        };
        let a = run_suite("series-core", &cfg).unwrap().render();
        let b = run_suite("series-core", &cfg).unwrap().render();
        assert_eq!(a, b);
    }
}
