//! The theta function, the Weierstrass function, the function G, and a
//! registry of named closed-form generating series built from them.
//!
//! Conventions: Theta = u exp(sum (-1)^{k-1} C_2k u^{2k}),
//! wp = -u^{-2} - sum_{k>=2} (-1)^k (2k-1)(2k) C_2k u^{2k-2},
//! G = -Theta^2 (wp + 2 C_2), D = q d/dq.

use std::collections::BTreeMap;
use std::str::FromStr;

use num::One;

use crate::modular::{delta, eisenstein};
use crate::rational::{factorial, int, rat, Rational};
use crate::series::{QLaurent, SeriesError, UQSeries};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum JacobiError {
    #[error("unknown series key: {0}")]
    UnknownKey(String),
    #[error("bad parameters for {key}: {reason}")]
    BadParams { key: String, reason: String },
    #[error(transparent)]
    Series(#[from] SeriesError),
}

/// Theta to the given precisions: `u * exp(sum (-1)^{k-1} C_2k u^{2k})`.
pub fn theta(u_prec: i64, q_prec: i64) -> UQSeries {
    let mut layers = BTreeMap::new();
    let mut k = 1i64;
    while 2 * k < u_prec {
        let c = eisenstein((2 * k) as u32, q_prec);
        let signed = if k % 2 == 1 { c } else { c.neg() };
        layers.insert(2 * k, signed);
        k += 1;
    }
    let arg = UQSeries::from_layers(layers, u_prec, q_prec).expect("positive exponents");
    arg.exp()
        .expect("argument is nilpotent")
        .shift_u(1)
        .expect("shift up")
        .truncate(u_prec, q_prec)
}

/// The Weierstrass function:
/// `-u^{-2} - sum_{k>=2} (-1)^k (2k-1)(2k) C_2k u^{2k-2}`.
pub fn weierstrass_p(u_prec: i64, q_prec: i64) -> UQSeries {
    let mut layers = BTreeMap::new();
    layers.insert(-2, QLaurent::monomial(0, -Rational::one(), q_prec));
    let mut k = 2i64;
    while 2 * k - 2 < u_prec {
        let sign = if k % 2 == 0 { -1 } else { 1 };
        let factor = int(sign * (2 * k - 1) * (2 * k));
        layers.insert(2 * k - 2, eisenstein(2 * k as u32, q_prec).scale(&factor));
        k += 1;
    }
    UQSeries::from_layers(layers, u_prec, q_prec).expect("floor respected")
}

/// `G = -Theta^2 (wp + 2 C_2)`; normalized so the u^0 layer is 1 and the
/// u^2 layer vanishes.
pub fn big_g(u_prec: i64, q_prec: i64) -> UQSeries {
    let th = theta(u_prec + 2, q_prec);
    let wp = weierstrass_p(u_prec, q_prec);
    let c2 = UQSeries::from_q(&eisenstein(2, q_prec).scale(&int(2)), u_prec);
    th.mul(&th)
        .mul(&wp.add(&c2))
        .neg()
        .truncate(u_prec, q_prec)
}

/// `J_1 = Theta'/Theta` (logarithmic u-derivative) and the u-derivative
/// of the Weierstrass function.
pub fn j1_and_p_dot(u_prec: i64, q_prec: i64) -> (UQSeries, UQSeries) {
    let th = theta(u_prec + 3, q_prec);
    let j1 = th
        .d_du()
        .mul(&th.invert().expect("Theta is invertible"))
        .truncate(u_prec, q_prec);
    let p_dot = weierstrass_p(u_prec + 1, q_prec).d_du().truncate(u_prec, q_prec);
    (j1, p_dot)
}

/// Registry keys for the named closed-form series.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum NamedKey {
    Theta,
    WeierstrassP,
    BigG,
    J1,
    PDot,
    MainThm1b,
    HodgeMn,
    ThmMiddle,
    Kkv,
    FiberN,
    L0,
    L1,
    L2,
    HodgeEvalI,
    HodgeEvalII,
    P1ePoint,
    Abelian,
    Utut,
    Polar,
}

impl NamedKey {
    pub fn as_str(&self) -> &'static str {
        match self {
            NamedKey::Theta => "THETA",
            NamedKey::WeierstrassP => "WP",
            NamedKey::BigG => "G",
            NamedKey::J1 => "J1",
            NamedKey::PDot => "PDOT",
            NamedKey::MainThm1b => "MAINTHM_1B",
            NamedKey::HodgeMn => "HODGE_MN",
            NamedKey::ThmMiddle => "THM_MIDDLE",
            NamedKey::Kkv => "KKV",
            NamedKey::FiberN => "FIBER_N",
            NamedKey::L0 => "L0",
            NamedKey::L1 => "L1",
            NamedKey::L2 => "L2",
            NamedKey::HodgeEvalI => "HODGE_EVAL_I",
            NamedKey::HodgeEvalII => "HODGE_EVAL_II",
            NamedKey::P1ePoint => "P1E_POINT",
            NamedKey::Abelian => "ABELIAN",
            NamedKey::Utut => "UTUT",
            NamedKey::Polar => "POLAR",
        }
    }

    /// Number of integer parameters the key expects.
    pub fn arity(&self) -> usize {
        match self {
            NamedKey::MainThm1b | NamedKey::HodgeMn => 2,
            NamedKey::FiberN | NamedKey::Polar => 1,
            _ => 0,
        }
    }
}

impl FromStr for NamedKey {
    type Err = JacobiError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let all = [
            NamedKey::Theta,
            NamedKey::WeierstrassP,
            NamedKey::BigG,
            NamedKey::J1,
            NamedKey::PDot,
            NamedKey::MainThm1b,
            NamedKey::HodgeMn,
            NamedKey::ThmMiddle,
            NamedKey::Kkv,
            NamedKey::FiberN,
            NamedKey::L0,
            NamedKey::L1,
            NamedKey::L2,
            NamedKey::HodgeEvalI,
            NamedKey::HodgeEvalII,
            NamedKey::P1ePoint,
            NamedKey::Abelian,
            NamedKey::Utut,
            NamedKey::Polar,
        ];
        all.into_iter()
            .find(|k| k.as_str() == s.to_uppercase())
            .ok_or_else(|| JacobiError::UnknownKey(s.to_string()))
    }
}

/// A registry series together with its declared weight offset (sigma)
/// and Jacobi index, where those are part of the series' contract.
#[derive(Debug, Clone)]
pub struct NamedSeries {
    pub key: NamedKey,
    pub params: Vec<i64>,
    pub series: UQSeries,
    pub declared_weight: Option<i64>,
    pub declared_index: Option<i64>,
}

/// `1/(Theta^2 Delta)` with padded generators so the requested
/// precisions survive the inversion.
fn kkv_series(u_prec: i64, q_prec: i64) -> UQSeries {
    let th = theta(u_prec + 5, q_prec + 2);
    let dl = UQSeries::from_q(&delta(q_prec + 2), u_prec + 5);
    th.mul(&th)
        .mul(&dl)
        .invert()
        .expect("Theta^2 Delta is invertible")
        .truncate(u_prec, q_prec)
}

fn inv_delta_uq(u_prec: i64, q_prec: i64) -> UQSeries {
    UQSeries::from_q(&delta(q_prec + 2).invert().expect("Delta invertible"), u_prec)
}

/// Construct the named series at the requested precisions.
pub fn registry(
    key: NamedKey,
    params: &[i64],
    u_prec: i64,
    q_prec: i64,
) -> Result<NamedSeries, JacobiError> {
    let bad = |reason: &str| JacobiError::BadParams {
        key: key.as_str().to_string(),
        reason: reason.to_string(),
    };
    if params.len() != key.arity() {
        return Err(bad(&format!("expected {} parameters", key.arity())));
    }
    if params.iter().any(|&p| p < 0) {
        return Err(bad("parameters must be nonnegative"));
    }
    let mut declared_weight = None;
    let mut declared_index = None;
    let series = match key {
        NamedKey::Theta => theta(u_prec, q_prec),
        NamedKey::WeierstrassP => weierstrass_p(u_prec, q_prec),
        NamedKey::BigG => big_g(u_prec, q_prec),
        NamedKey::J1 => j1_and_p_dot(u_prec, q_prec).0,
        NamedKey::PDot => j1_and_p_dot(u_prec, q_prec).1,
        NamedKey::MainThm1b => {
            let (m, n) = (params[0], params[1]);
            if n == 0 {
                // the invariants all vanish at n = 0
                UQSeries::zero(u_prec, q_prec)
            } else {
                let pad_u = u_prec + 2;
                let g = big_g(pad_u, q_prec + 1);
                let th = theta(pad_u, q_prec + 1);
                let kkv = kkv_series(pad_u, q_prec + 1);
                let scale = Rational::one()
                    / (factorial(m as u32) * factorial(n as u32) * factorial(n as u32));
                g.pow(m as u32)
                    .mul(&th.pow(2 * n as u32))
                    .mul(&kkv)
                    .scale(&scale)
                    .truncate(u_prec, q_prec)
            }
        }
        NamedKey::HodgeMn => {
            let (m, n) = (params[0], params[1]);
            let shift = 2 * m + 2 * n;
            let pad_u = u_prec + shift + 4;
            let g1 = big_g(pad_u, q_prec + 1).sub(&UQSeries::one(pad_u, q_prec + 1));
            let th = theta(pad_u, q_prec + 1);
            let kkv = kkv_series(pad_u, q_prec + 1);
            g1.pow(m as u32)
                .mul(&th.pow(2 * n as u32))
                .mul(&kkv)
                .shift_u(-shift)?
                .truncate(u_prec, q_prec)
        }
        NamedKey::ThmMiddle => {
            let pad_u = u_prec + 6;
            let g1 = big_g(pad_u, q_prec).sub(&UQSeries::one(pad_u, q_prec));
            g1.mul(&inv_delta_uq(pad_u, q_prec))
                .shift_u(-4)?
                .truncate(u_prec, q_prec)
        }
        NamedKey::Kkv => {
            declared_index = Some(0);
            kkv_series(u_prec, q_prec)
        }
        NamedKey::FiberN => {
            let n = params[0];
            let shift = 2 * n;
            let pad_u = u_prec + shift + 2;
            let th = theta(pad_u, q_prec + 1);
            let kkv = kkv_series(pad_u, q_prec + 1);
            th.pow(2 * n as u32)
                .mul(&kkv)
                .shift_u(-shift)?
                .truncate(u_prec, q_prec)
        }
        NamedKey::L0 => {
            let th = theta(u_prec + 1, q_prec + 2);
            th.mul(&th.d_dq_log())
                .mul(&inv_delta_uq(u_prec + 1, q_prec))
                .scale(&rat(1, 2))
                .truncate(u_prec, q_prec)
        }
        NamedKey::L1 => {
            let g = big_g(u_prec + 2, q_prec + 2);
            g.d_du()
                .mul(&inv_delta_uq(u_prec + 1, q_prec))
                .scale(&rat(1, 4))
                .truncate(u_prec, q_prec)
        }
        NamedKey::L2 => {
            let dth = theta(u_prec + 1, q_prec + 2).d_dq_log();
            dth.mul(&dth)
                .mul(&inv_delta_uq(u_prec + 1, q_prec))
                .truncate(u_prec, q_prec)
        }
        NamedKey::HodgeEvalI => {
            let pad_u = u_prec + 4;
            let g1 = big_g(pad_u, q_prec + 1).sub(&UQSeries::one(pad_u, q_prec + 1));
            g1.mul(&kkv_series(pad_u, q_prec + 1))
                .shift_u(-2)?
                .truncate(u_prec, q_prec)
        }
        NamedKey::HodgeEvalII => inv_delta_uq(u_prec + 2, q_prec)
            .shift_u(-2)?
            .scale(&int(-2))
            .truncate(u_prec, q_prec),
        NamedKey::P1ePoint => {
            let th = theta(u_prec + 3, q_prec + 2);
            th.d_dq_log()
                .mul(&th.invert()?)
                .truncate(u_prec, q_prec)
        }
        NamedKey::Abelian => {
            declared_weight = Some(-2);
            declared_index = Some(1);
            let th = theta(u_prec, q_prec);
            th.mul(&th).truncate(u_prec, q_prec)
        }
        NamedKey::Utut => {
            declared_weight = Some(0);
            declared_index = Some(1);
            let th = theta(u_prec + 1, q_prec);
            let g = big_g(u_prec, q_prec);
            g.add(&th.mul(&th.d_dq_log())).truncate(u_prec, q_prec)
        }
        NamedKey::Polar => {
            let d = params[0];
            declared_index = Some(d - 1);
            let pad_u = u_prec + 2;
            let g = big_g(pad_u, q_prec + 1);
            g.pow(d as u32)
                .mul(&kkv_series(pad_u, q_prec + 1))
                .truncate(u_prec, q_prec)
        }
    };
    Ok(NamedSeries {
        key,
        params: params.to_vec(),
        series,
        declared_weight,
        declared_index,
    })
}

/// Table of the `P(g,k)` series from the trivariate exponential
/// `sum P(g,k) u^{2g} w^k = exp(sum_{r>=1} C_2r u^{2r} w^{r-1})`.
pub fn p_gk(g_max: i64, k_max: i64, q_prec: i64) -> BTreeMap<(i64, i64), QLaurent> {
    let u_prec = 2 * g_max + 1;
    let wlen = (k_max + 1) as usize;
    // argument as a w-polynomial with UQSeries coefficients
    let mut arg: Vec<UQSeries> = vec![UQSeries::zero(u_prec, q_prec); wlen];
    let mut r = 1i64;
    while 2 * r < u_prec + 2 && (r - 1) < wlen as i64 {
        let mut layers = BTreeMap::new();
        layers.insert(2 * r, eisenstein(2 * r as u32, q_prec));
        arg[(r - 1) as usize] =
            UQSeries::from_layers(layers, u_prec, q_prec).expect("positive exponent");
        r += 1;
    }
    let wmul = |a: &[UQSeries], b: &[UQSeries]| -> Vec<UQSeries> {
        let mut out = vec![UQSeries::zero(u_prec, q_prec); wlen];
        for (i, ai) in a.iter().enumerate() {
            if ai.is_zero_to_prec() {
                continue;
            }
            for (j, bj) in b.iter().enumerate() {
                if i + j >= wlen || bj.is_zero_to_prec() {
                    continue;
                }
                out[i + j] = out[i + j].add(&ai.mul(bj).truncate(u_prec, q_prec));
            }
        }
        out
    };
    let mut acc: Vec<UQSeries> = vec![UQSeries::zero(u_prec, q_prec); wlen];
    acc[0] = UQSeries::one(u_prec, q_prec);
    let mut term = acc.clone();
    let mut k = 1i64;
    loop {
        term = wmul(&term, &arg);
        let scale = Rational::new(1.into(), k.into());
        for t in term.iter_mut() {
            *t = t.scale(&scale);
        }
        if term.iter().all(|t| t.is_zero_to_prec()) {
            break;
        }
        for (a, t) in acc.iter_mut().zip(&term) {
            *a = a.add(t);
        }
        k += 1;
    }
    let mut table = BTreeMap::new();
    for g in 0..=g_max {
        for k in 0..=k_max {
            table.insert((g, k), acc[k as usize].layer(2 * g));
        }
    }
    table
}

/// The four worked example series: `1/Delta` times a fixed weight-4 or
/// weight-6 quasi-modular combination.
pub fn appendix_values(q_prec: i64) -> [QLaurent; 4] {
    let pad = q_prec + 2;
    let c2 = eisenstein(2, pad);
    let c4 = eisenstein(4, pad);
    let c6 = eisenstein(6, pad);
    let inv = delta(pad).invert().expect("Delta invertible");
    let w4 = c2.mul(&c2).scale(&int(-2)).add(&c4.scale(&int(10)));
    let c2cube = c2.mul(&c2).mul(&c2);
    let w6a = c2cube
        .scale(&rat(-8, 3))
        .add(&c2.mul(&c4).scale(&int(16)))
        .add(&c6.scale(&int(-7)));
    let w6b = c2cube
        .scale(&int(-4))
        .add(&c2.mul(&c4).scale(&int(12)))
        .add(&c6.scale(&int(21)));
    let w6c = c2.scale(&int(2)).mul(&w4);
    [
        inv.mul(&w4).truncate(q_prec),
        inv.mul(&w6a).truncate(q_prec),
        inv.mul(&w6b).truncate(q_prec),
        inv.mul(&w6c).truncate(q_prec),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::modular;

    #[test]
    fn theta_low_coefficients() {
        let th = theta(8, 5);
        assert_eq!(th.coefficient(1, 0).unwrap(), int(1));
        assert_eq!(th.coefficient(3, 0).unwrap(), rat(-1, 24));
        assert_eq!(th.coefficient(3, 1).unwrap(), int(1));
        assert!(th.layers().keys().all(|e| e % 2 == 1));
    }

    #[test]
    fn theta_at_q0_is_sine() {
        // q^0 slice is 2 sin(u/2) = u - u^3/24 + u^5/1920 - ...
        let th = theta(8, 3);
        assert_eq!(th.coefficient(5, 0).unwrap(), rat(1, 1920));
        assert_eq!(th.coefficient(7, 0).unwrap(), rat(-1, 322560));
    }

    #[test]
    fn weierstrass_low_coefficients() {
        let wp = weierstrass_p(8, 5);
        assert_eq!(wp.coefficient(-2, 0).unwrap(), int(-1));
        assert_eq!(wp.coefficient(2, 0).unwrap(), rat(-1, 240));
        for n in 0..5 {
            assert_eq!(wp.coefficient(0, n).unwrap(), int(0));
        }
    }

    #[test]
    fn big_g_normalization() {
        let g = big_g(10, 8);
        for n in 0..8 {
            let expect = if n == 0 { int(1) } else { int(0) };
            assert_eq!(g.coefficient(0, n).unwrap(), expect);
            assert_eq!(g.coefficient(2, n).unwrap(), int(0));
        }
        // definition restated: G + Theta^2 wp + 2 C2 Theta^2 = 0
        let th = theta(12, 8);
        let th2 = th.mul(&th);
        let wp = weierstrass_p(10, 8);
        let c2 = UQSeries::from_q(&eisenstein(2, 8).scale(&int(2)), 10);
        let recon = th2.mul(&wp.add(&c2)).neg();
        assert!(g.eq_to_prec(&recon));
    }

    #[test]
    fn j1_and_p_dot_leading_terms() {
        let (j1, pd) = j1_and_p_dot(6, 4);
        assert_eq!(j1.coefficient(-1, 0).unwrap(), int(1));
        assert!(j1.layers().keys().all(|e| e.rem_euclid(2) == 1));
        assert_eq!(pd.coefficient(-3, 0).unwrap(), int(2));
    }

    #[test]
    fn registry_mainthm_cases() {
        // (0,1) collapses to 1/Delta
        let s = registry(NamedKey::MainThm1b, &[0, 1], 6, 8).unwrap().series;
        let inv = modular::delta(10).invert().unwrap();
        let expect = UQSeries::from_q(&inv, 6).truncate(6, 8);
        assert!(s.eq_to_prec(&expect));
        // n = 0 vanishes structurally
        let z = registry(NamedKey::MainThm1b, &[3, 0], 6, 8).unwrap().series;
        assert!(z.is_zero_to_prec());
    }

    #[test]
    fn registry_kkv_leading_row() {
        let kkv = registry(NamedKey::Kkv, &[], 4, 6).unwrap().series;
        assert_eq!(kkv.u_min(), -2);
        assert_eq!(kkv.coefficient(-2, -1).unwrap(), int(1));
        assert_eq!(kkv.coefficient(-2, 0).unwrap(), int(24));
        assert_eq!(kkv.coefficient(-2, 1).unwrap(), int(324));
    }

    #[test]
    fn registry_abelian_and_utut() {
        let ab = registry(NamedKey::Abelian, &[], 8, 6).unwrap();
        assert_eq!(ab.series.coefficient(2, 0).unwrap(), int(1));
        assert_eq!(ab.declared_index, Some(1));
        let utut = registry(NamedKey::Utut, &[], 10, 8).unwrap();
        assert!(utut.series.is_even_in_u());
        assert_eq!(utut.declared_weight, Some(0));
    }

    #[test]
    fn registry_l0_is_half_d_of_theta_squared() {
        // product rule: Theta * D(Theta) = (1/2) D(Theta^2)
        let l0 = registry(NamedKey::L0, &[], 8, 6).unwrap().series;
        let th = theta(9, 8);
        let alt = th
            .mul(&th)
            .d_dq_log()
            .mul(&inv_delta_uq(9, 6))
            .scale(&rat(1, 4));
        assert!(l0.eq_to_prec(&alt));
    }

    #[test]
    fn registry_rejects_bad_input() {
        assert!(matches!(
            registry(NamedKey::FiberN, &[], 4, 4),
            Err(JacobiError::BadParams { .. })
        ));
        assert!(matches!(
            "NOSUCH".parse::<NamedKey>(),
            Err(JacobiError::UnknownKey(_))
        ));
        assert_eq!("kkv".parse::<NamedKey>().unwrap(), NamedKey::Kkv);
    }

    #[test]
    fn p_gk_first_entries() {
        let table = p_gk(2, 2, 6);
        assert!(table[&(0, 0)].eq_to_prec(&QLaurent::one(6)));
        assert!(table[&(1, 0)].eq_to_prec(&eisenstein(2, 6)));
        let c2 = eisenstein(2, 6);
        assert!(table[&(2, 0)].eq_to_prec(&c2.mul(&c2).scale(&rat(1, 2))));
        assert!(table[&(2, 1)].eq_to_prec(&eisenstein(4, 6)));
    }

    #[test]
    fn appendix_fourth_is_product() {
        let vals = appendix_values(8);
        let c2 = eisenstein(2, 10);
        let prod = vals[0].mul(&c2.scale(&int(2)));
        assert!(vals[3].eq_to_prec(&prod));
        // first value: Delta * v passes the weight-4 reconstruction
        let w4 = modular::delta(10).mul(&vals[0]);
        let c4 = eisenstein(4, 8);
        let c2t = eisenstein(2, 8);
        let expect = c2t.mul(&c2t).scale(&int(-2)).add(&c4.scale(&int(10)));
        assert!(w4.eq_to_prec(&expect));
    }
}
