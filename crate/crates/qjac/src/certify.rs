//! The uniqueness gate: thresholds B(sigma) and B'(sigma), the
//! hypothesis checks (a), (c), (d)/(d') for a candidate series, and
//! certification that two series agreeing in low u-order coincide.
//!
//! A `CertifiedZero` verdict is exact modulo the underlying vanishing
//! proposition: the hypotheses are checked to finite precision in exact
//! arithmetic, and the proposition supplies the infinite conclusion.
//! Rationality in y (property (b)) is replaced by the strictly stronger
//! finite-support fit of property (c); the report records this.

use serde::Serialize;

use crate::modular::{dim_qmod, membership, Membership, ModularError};
use crate::rational::isqrt;
use crate::series::UQSeries;
use crate::ycoords::{bps_expand, support_check, YError};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CertifyError {
    #[error("sigma {0} exceeds 42; the strengthened threshold is unavailable")]
    SigmaTooLarge(i64),
    #[error("sigma {0} is odd; only even sigma is supported")]
    OddSigma(i64),
    #[error(transparent)]
    Modular(#[from] ModularError),
}

/// `B(sigma) = 2 floor(sigma + 1 + sqrt(2 sigma^2 + 3 sigma + 4))`,
/// computed with an exact integer square root.
pub fn b_sigma(sigma: i64) -> i64 {
    let disc = 2 * sigma * sigma + 3 * sigma + 4;
    debug_assert!(disc >= 0);
    2 * (sigma + 1 + isqrt(disc))
}

/// The strengthened threshold, or the always-satisfied sentinel.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum BPrime {
    Value(i64),
    MinusInfinity,
}

/// `B'(sigma) = 2 min{ b~ : b(b+2)/4 > dim QMod_{sigma+2b+2} - 1 for all
/// b >= b~ }`, defined for even sigma <= 42; minus infinity below -2.
pub fn b_prime_sigma(sigma: i64) -> Result<BPrime, CertifyError> {
    if sigma % 2 != 0 {
        return Err(CertifyError::OddSigma(sigma));
    }
    if sigma > 42 {
        return Err(CertifyError::SigmaTooLarge(sigma));
    }
    if sigma < -2 {
        return Ok(BPrime::MinusInfinity);
    }
    // Beyond this horizon b(b+2)/4 dominates the dimension for every
    // sigma <= 42, so the last failure occurs below it.
    const HORIZON: i64 = 200;
    let mut last_failure = -1i64;
    for b in 0..=HORIZON {
        let weight = sigma + 2 * b + 2;
        // b(b+2)/4 > dim - 1  <=>  b(b+2) > 4 dim - 4
        if weight >= 0 && b * (b + 2) <= 4 * dim_qmod(weight) - 4 {
            last_failure = b;
        }
    }
    Ok(BPrime::Value(2 * (last_failure + 1)))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum Verdict {
    CertifiedZero,
    NotCertified(String),
}

/// Outcome of the hypothesis checks for one candidate series.
#[derive(Debug, Clone, Serialize)]
pub struct UniquenessReport {
    pub sigma: i64,
    /// per even u-exponent: does the layer lie in the right graded piece
    pub prop_a: Vec<(i64, bool)>,
    pub prop_c_pass: bool,
    pub prop_c_detail: String,
    /// largest m such that every layer u^{m'} with m' <= m vanishes
    pub low_vanishing: i64,
    /// threshold compared against; None encodes minus infinity
    pub threshold_used: Option<i64>,
    pub strong: bool,
    pub verdict: Verdict,
    /// epistemic status of the verdict
    pub note: String,
}

impl UniquenessReport {
    pub fn certified(&self) -> bool {
        matches!(self.verdict, Verdict::CertifiedZero)
    }
}

const NOTE: &str = "exact modulo the vanishing proposition; property (b) replaced \
by the finite-support fit of property (c)";

/// Check hypotheses (a), (c) and (d)/(d') for `f` at weight offset
/// `sigma` and report whether the vanishing conclusion applies.
pub fn check_candidate(
    f: &UQSeries,
    sigma: i64,
    use_strong: bool,
    guard: i64,
) -> Result<UniquenessReport, CertifyError> {
    if sigma % 2 != 0 {
        return Err(CertifyError::OddSigma(sigma));
    }
    let threshold = if use_strong {
        match b_prime_sigma(sigma)? {
            BPrime::Value(v) => Some(v),
            BPrime::MinusInfinity => None,
        }
    } else {
        Some(b_sigma(sigma))
    };

    // (a): every even layer is quasi-modular of weight m + sigma; odd
    // layers and layers below u^0 must vanish outright.
    let mut prop_a = Vec::new();
    let mut all_a = true;
    for (&m, layer) in f.layers() {
        let ok = if m < 0 || m % 2 != 0 {
            false
        } else {
            matches!(membership(layer, m + sigma, guard)?, Membership::Member(_))
        };
        prop_a.push((m, ok));
        all_a &= ok;
    }

    // (c): index-1 Fourier support with zero residual.
    let (prop_c_pass, prop_c_detail) = if f.u_min() < 0 {
        (false, "series has negative u-exponents".to_string())
    } else {
        match bps_expand(f, 1) {
            Ok(table) => {
                let rep = support_check(&table);
                if rep.pass {
                    (true, "support bound satisfied, residual zero".to_string())
                } else {
                    (false, format!("support violations at {:?}", rep.violations))
                }
            }
            Err(YError::ResidualNonzero { n, order }) => (
                false,
                format!("q-row {n}: nonzero residual at u-order {order}"),
            ),
            Err(e) => (false, e.to_string()),
        }
    };

    // (d)/(d'): vanishing of all layers up to the threshold.
    let low_vanishing = f.u_min() - 1; // u_prec - 1 when zero to precision
    let prop_d = match threshold {
        None => true,
        Some(t) => low_vanishing >= t,
    };

    let verdict = if !all_a {
        Verdict::NotCertified("property (a) fails: a layer is not quasi-modular".into())
    } else if !prop_c_pass {
        Verdict::NotCertified(format!("property (c) fails: {prop_c_detail}"))
    } else if !prop_d {
        Verdict::NotCertified(format!(
            "property (d) fails: first nonzero layer at u^{} is at or below the threshold {}",
            f.u_min(),
            threshold.unwrap()
        ))
    } else if !f.is_zero_to_prec() {
        Verdict::NotCertified(
            "hypotheses pass but the series is nonzero within precision".into(),
        )
    } else {
        Verdict::CertifiedZero
    };

    Ok(UniquenessReport {
        sigma,
        prop_a,
        prop_c_pass,
        prop_c_detail,
        low_vanishing,
        threshold_used: threshold,
        strong: use_strong,
        verdict,
        note: NOTE.to_string(),
    })
}

/// Certify `f1 = f2` by checking the difference. Both inputs must pass
/// (a) and (c) on their own first.
pub fn certify_equal(
    f1: &UQSeries,
    f2: &UQSeries,
    sigma: i64,
    use_strong: bool,
    guard: i64,
) -> Result<UniquenessReport, CertifyError> {
    for (label, f) in [("lhs", f1), ("rhs", f2)] {
        let rep = check_candidate(f, sigma, use_strong, guard)?;
        if !rep.prop_a.iter().all(|&(_, ok)| ok) || !rep.prop_c_pass {
            let mut out = rep;
            out.verdict = Verdict::NotCertified(format!(
                "{label} does not satisfy hypotheses (a) and (c) on its own"
            ));
            return Ok(out);
        }
    }
    check_candidate(&f1.sub(f2), sigma, use_strong, guard)
}
