//! Exact truncated Laurent-series arithmetic in the variables `q` and `u`.
//!
//! [`QLaurent`] is a truncated univariate Laurent series with rational
//! coefficients. [`UQSeries`] is a Laurent polynomial in `u` whose
//! coefficients are `QLaurent` in `q`; it is the container for every
//! bivariate generating series in the engine.
//!
//! Truncation bookkeeping: every series carries a precision exponent per
//! variable (coefficients are known for all exponents strictly below it).
//! Multiplication propagates precision conservatively:
//! `prec(a*b) = min(prec(a) + min_deg(b), prec(b) + min_deg(a))`,
//! so a reported precision is never optimistic.

use std::collections::BTreeMap;
use std::fmt;

use num::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::rational::{format_rational, parse_rational, Rational};

/// Lowest u-exponent admitted by constructors. The most singular objects
/// in the engine (the Weierstrass function and the reciprocal of
/// `Theta^2 Delta`) attain exactly this floor.
pub const U_FLOOR: i64 = -2;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SeriesError {
    #[error("leading coefficient vanishes to precision; series is not invertible")]
    ZeroLeadingCoefficient,
    #[error("exp argument has a nonzero constant term or negative exponents")]
    NonNilpotentArgument,
    #[error("requested coefficient at exponent ({u}, {q}) is beyond recorded precision")]
    OutOfPrecision { u: i64, q: i64 },
    #[error("u-exponent {0} below the systemwide floor {U_FLOOR}")]
    UFloorViolation(i64),
    #[error("malformed series data: {0}")]
    Malformed(String),
}

pub type SeriesResult<T> = Result<T, SeriesError>;

// ---------------------------------------------------------------------------
// QLaurent
// ---------------------------------------------------------------------------

/// Truncated Laurent series in one variable with exact rational coefficients.
///
/// Only nonzero coefficients are stored; all stored exponents are < `prec`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QLaurent {
    prec: i64,
    coeffs: BTreeMap<i64, Rational>,
}

impl QLaurent {
    pub fn zero(prec: i64) -> Self {
        QLaurent {
            prec,
            coeffs: BTreeMap::new(),
        }
    }

    pub fn one(prec: i64) -> Self {
        Self::monomial(0, Rational::one(), prec)
    }

    pub fn monomial(exp: i64, coeff: Rational, prec: i64) -> Self {
        let mut s = Self::zero(prec);
        if exp < prec && !coeff.is_zero() {
            s.coeffs.insert(exp, coeff);
        }
        s
    }

    pub fn from_coeffs(coeffs: BTreeMap<i64, Rational>, prec: i64) -> Self {
        let mut s = Self::zero(prec);
        for (e, c) in coeffs {
            if e < prec && !c.is_zero() {
                s.coeffs.insert(e, c);
            }
        }
        s
    }

    pub fn prec(&self) -> i64 {
        self.prec
    }

    /// Lowest exponent with a nonzero coefficient; `prec` for the series
    /// that is zero to precision (a sound stand-in for +infinity in the
    /// precision calculus).
    pub fn min_deg(&self) -> i64 {
        self.coeffs.keys().next().copied().unwrap_or(self.prec)
    }

    pub fn is_zero_to_prec(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeffs(&self) -> &BTreeMap<i64, Rational> {
        &self.coeffs
    }

    /// Exact coefficient at `exp`; zero if absent, error beyond precision.
    pub fn coefficient(&self, exp: i64) -> SeriesResult<Rational> {
        if exp >= self.prec {
            return Err(SeriesError::OutOfPrecision { u: 0, q: exp });
        }
        Ok(self.coeffs.get(&exp).cloned().unwrap_or_else(Rational::zero))
    }

    /// Coefficient at `exp`, zero if absent (no precision check).
    pub fn coeff_or_zero(&self, exp: i64) -> Rational {
        self.coeffs.get(&exp).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn truncate(&self, prec: i64) -> Self {
        let prec = prec.min(self.prec);
        let mut s = Self::zero(prec);
        for (&e, c) in self.coeffs.range(..prec) {
            s.coeffs.insert(e, c.clone());
        }
        s
    }

    pub fn add(&self, other: &Self) -> Self {
        let prec = self.prec.min(other.prec);
        let mut s = self.truncate(prec);
        for (&e, c) in other.coeffs.range(..prec) {
            let entry = s.coeffs.entry(e).or_insert_with(Rational::zero);
            *entry += c;
            if entry.is_zero() {
                s.coeffs.remove(&e);
            }
        }
        s
    }

    pub fn neg(&self) -> Self {
        let mut s = Self::zero(self.prec);
        for (&e, c) in &self.coeffs {
            s.coeffs.insert(e, -c.clone());
        }
        s
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn scale(&self, k: &Rational) -> Self {
        if k.is_zero() {
            return Self::zero(self.prec);
        }
        let mut s = Self::zero(self.prec);
        for (&e, c) in &self.coeffs {
            s.coeffs.insert(e, c * k);
        }
        s
    }

    pub fn mul(&self, other: &Self) -> Self {
        let prec = (self.prec + other.min_deg()).min(other.prec + self.min_deg());
        let mut acc: BTreeMap<i64, Rational> = BTreeMap::new();
        for (&ea, ca) in &self.coeffs {
            for (&eb, cb) in &other.coeffs {
                let e = ea + eb;
                if e >= prec {
                    continue;
                }
                let entry = acc.entry(e).or_insert_with(Rational::zero);
                *entry += ca * cb;
            }
        }
        acc.retain(|_, c| !c.is_zero());
        QLaurent { prec, coeffs: acc }
    }

    /// Shift all exponents by `k`; precision shifts along.
    pub fn shift(&self, k: i64) -> Self {
        let mut s = Self::zero(self.prec + k);
        for (&e, c) in &self.coeffs {
            s.coeffs.insert(e + k, c.clone());
        }
        s
    }

    /// Multiplicative inverse by forward substitution. The result has
    /// `min_deg = -self.min_deg()` and precision `prec - 2*min_deg()`.
    pub fn invert(&self) -> SeriesResult<Self> {
        if self.is_zero_to_prec() {
            return Err(SeriesError::ZeroLeadingCoefficient);
        }
        let m = self.min_deg();
        // Strip the leading monomial: a = x^m * A with A a unit power series.
        let unit = self.shift(-m); // constant term nonzero, prec - m terms known
        let n = unit.prec; // number of known coefficients of A (exponents 0..n)
        let lead = unit.coeff_or_zero(0);
        debug_assert!(!lead.is_zero());
        let lead_inv = Rational::one() / lead;
        let mut inv: Vec<Rational> = Vec::with_capacity(n.max(0) as usize);
        for k in 0..n {
            if k == 0 {
                inv.push(lead_inv.clone());
                continue;
            }
            let mut acc = Rational::zero();
            for j in 1..=k {
                let a_j = unit.coeff_or_zero(j);
                if a_j.is_zero() {
                    continue;
                }
                acc += a_j * &inv[(k - j) as usize];
            }
            inv.push(-acc * &lead_inv);
        }
        let mut coeffs = BTreeMap::new();
        for (k, c) in inv.into_iter().enumerate() {
            if !c.is_zero() {
                coeffs.insert(k as i64 - m, c);
            }
        }
        Ok(QLaurent {
            prec: self.prec - 2 * m,
            coeffs,
        })
    }

    /// The operator `D = q d/dq`: multiply each coefficient by its exponent.
    pub fn d_log(&self) -> Self {
        let mut s = Self::zero(self.prec);
        for (&e, c) in &self.coeffs {
            if e != 0 {
                s.coeffs.insert(e, c * Rational::from(num::BigInt::from(e)));
            }
        }
        s
    }

    /// Exponential of a series with positive valuation.
    pub fn exp(&self) -> SeriesResult<Self> {
        if self.min_deg() <= 0 && !self.is_zero_to_prec() {
            return Err(SeriesError::NonNilpotentArgument);
        }
        if self.coeffs.keys().next().map(|&e| e < 0).unwrap_or(false) {
            return Err(SeriesError::NonNilpotentArgument);
        }
        let mut acc = Self::one(self.prec);
        let mut term = Self::one(self.prec);
        let mut k: i64 = 1;
        loop {
            term = term.mul(self).scale(&Rational::new(1.into(), k.into()));
            // restore the argument's precision: term precision only improves
            term.prec = self.prec;
            term = term.truncate(self.prec);
            if term.is_zero_to_prec() {
                break;
            }
            acc = acc.add(&term);
            k += 1;
        }
        acc.prec = self.prec;
        Ok(acc)
    }

    /// Integer power by repeated squaring (nonnegative exponents).
    pub fn pow(&self, n: u32) -> Self {
        let mut result = Self::one(self.prec + (n as i64).saturating_sub(1) * self.min_deg());
        let mut base = self.clone();
        let mut e = n;
        if n == 0 {
            return Self::one(self.prec);
        }
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        result
    }

    /// Coefficientwise equality on the shared known range.
    pub fn eq_to_prec(&self, other: &Self) -> bool {
        let prec = self.prec.min(other.prec);
        self.truncate(prec).sub(&other.truncate(prec)).is_zero_to_prec()
    }
}

impl fmt::Display for QLaurent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            write!(f, "0")?;
        } else {
            for (i, (e, c)) in self.coeffs.iter().enumerate() {
                if i > 0 {
                    write!(f, " + ")?;
                }
                write!(f, "({})*q^{}", format_rational(c), e)?;
            }
        }
        write!(f, " + O(q^{})", self.prec)
    }
}

// ---------------------------------------------------------------------------
// UQSeries
// ---------------------------------------------------------------------------

/// Laurent polynomial in `u` with `QLaurent` coefficients.
///
/// All u-layers share a single q-precision. Most named series are even in
/// u; that is asserted where the mathematics requires it, not here.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UQSeries {
    u_prec: i64,
    q_prec: i64,
    terms: BTreeMap<i64, QLaurent>,
}

impl UQSeries {
    pub fn zero(u_prec: i64, q_prec: i64) -> Self {
        UQSeries {
            u_prec,
            q_prec,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(u_prec: i64, q_prec: i64) -> Self {
        let mut s = Self::zero(u_prec, q_prec);
        s.set_layer(0, QLaurent::one(q_prec));
        s
    }

    /// A pure power of `u`.
    pub fn u_monomial(exp: i64, u_prec: i64, q_prec: i64) -> SeriesResult<Self> {
        if exp < U_FLOOR {
            return Err(SeriesError::UFloorViolation(exp));
        }
        let mut s = Self::zero(u_prec, q_prec);
        s.set_layer(exp, QLaurent::one(q_prec));
        Ok(s)
    }

    /// Embed a q-series as a u-constant.
    pub fn from_q(q: &QLaurent, u_prec: i64) -> Self {
        let q_prec = q.prec();
        let mut s = Self::zero(u_prec, q_prec);
        s.set_layer(0, q.clone());
        s
    }

    /// Build from explicit layers, validating the u-floor.
    pub fn from_layers(
        layers: BTreeMap<i64, QLaurent>,
        u_prec: i64,
        q_prec: i64,
    ) -> SeriesResult<Self> {
        let mut s = Self::zero(u_prec, q_prec);
        for (e, layer) in layers {
            if e < U_FLOOR {
                return Err(SeriesError::UFloorViolation(e));
            }
            s.set_layer(e, layer);
        }
        Ok(s)
    }

    fn set_layer(&mut self, u_exp: i64, layer: QLaurent) {
        if u_exp >= self.u_prec {
            return;
        }
        let layer = layer.truncate(self.q_prec);
        if layer.is_zero_to_prec() {
            self.terms.remove(&u_exp);
        } else {
            self.terms.insert(u_exp, layer);
        }
    }

    pub fn u_prec(&self) -> i64 {
        self.u_prec
    }

    pub fn q_prec(&self) -> i64 {
        self.q_prec
    }

    /// Lowest u-exponent with a nonzero layer; `u_prec` if zero to precision.
    pub fn u_min(&self) -> i64 {
        self.terms.keys().next().copied().unwrap_or(self.u_prec)
    }

    /// Lowest q-exponent appearing in any layer; `q_prec` if zero.
    pub fn q_min(&self) -> i64 {
        self.terms
            .values()
            .map(|l| l.min_deg())
            .min()
            .unwrap_or(self.q_prec)
    }

    pub fn is_zero_to_prec(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn layers(&self) -> &BTreeMap<i64, QLaurent> {
        &self.terms
    }

    /// The q-series at a given u-exponent (zero series if absent).
    pub fn layer(&self, u_exp: i64) -> QLaurent {
        self.terms
            .get(&u_exp)
            .cloned()
            .unwrap_or_else(|| QLaurent::zero(self.q_prec))
    }

    /// The u-series at a fixed q-exponent (a "q-row").
    pub fn q_row(&self, q_exp: i64) -> QLaurent {
        let mut coeffs = BTreeMap::new();
        for (&u, layer) in &self.terms {
            let c = layer.coeff_or_zero(q_exp);
            if !c.is_zero() {
                coeffs.insert(u, c);
            }
        }
        QLaurent { prec: self.u_prec, coeffs }
    }

    pub fn coefficient(&self, u_exp: i64, q_exp: i64) -> SeriesResult<Rational> {
        if u_exp >= self.u_prec || q_exp >= self.q_prec {
            return Err(SeriesError::OutOfPrecision { u: u_exp, q: q_exp });
        }
        Ok(self
            .terms
            .get(&u_exp)
            .map(|l| l.coeff_or_zero(q_exp))
            .unwrap_or_else(Rational::zero))
    }

    pub fn truncate(&self, u_prec: i64, q_prec: i64) -> Self {
        let u_prec = u_prec.min(self.u_prec);
        let q_prec = q_prec.min(self.q_prec);
        let mut s = Self::zero(u_prec, q_prec);
        for (&e, layer) in self.terms.range(..u_prec) {
            s.set_layer(e, layer.truncate(q_prec));
        }
        s
    }

    pub fn add(&self, other: &Self) -> Self {
        let u_prec = self.u_prec.min(other.u_prec);
        let q_prec = self.q_prec.min(other.q_prec);
        let mut s = self.truncate(u_prec, q_prec);
        for (&e, layer) in other.terms.range(..u_prec) {
            let merged = s.layer(e).truncate(q_prec).add(&layer.truncate(q_prec));
            s.set_layer(e, merged);
        }
        s
    }

    pub fn neg(&self) -> Self {
        let mut s = Self::zero(self.u_prec, self.q_prec);
        for (&e, layer) in &self.terms {
            s.terms.insert(e, layer.neg());
        }
        s
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn scale(&self, k: &Rational) -> Self {
        let mut s = Self::zero(self.u_prec, self.q_prec);
        for (&e, layer) in &self.terms {
            s.set_layer(e, layer.scale(k));
        }
        s
    }

    pub fn mul(&self, other: &Self) -> Self {
        let u_prec = (self.u_prec + other.u_min()).min(other.u_prec + self.u_min());
        let q_prec = (self.q_prec + other.q_min()).min(other.q_prec + self.q_min());
        let mut s = Self::zero(u_prec, q_prec);
        for (&ea, la) in &self.terms {
            for (&eb, lb) in &other.terms {
                let e = ea + eb;
                if e >= u_prec {
                    continue;
                }
                let prod = la.mul(lb).truncate(q_prec);
                let merged = s.layer(e).add(&prod);
                // keep the common q-precision; layer() hands back q_prec
                s.set_layer(e, merged.truncate(q_prec));
            }
        }
        s
    }

    /// Shift all u-exponents by `k` (division by `u^{-k}`), guarding the floor.
    pub fn shift_u(&self, k: i64) -> SeriesResult<Self> {
        let new_min = self.u_min() + k;
        if !self.is_zero_to_prec() && new_min < U_FLOOR {
            return Err(SeriesError::UFloorViolation(new_min));
        }
        let mut s = Self::zero(self.u_prec + k, self.q_prec);
        for (&e, layer) in &self.terms {
            s.terms.insert(e + k, layer.clone());
        }
        Ok(s)
    }

    /// Multiplicative inverse: solves `self * b = 1` layer by layer.
    pub fn invert(&self) -> SeriesResult<Self> {
        if self.is_zero_to_prec() {
            return Err(SeriesError::ZeroLeadingCoefficient);
        }
        let m = self.u_min();
        let lead = self.layer(m);
        let lead_inv = lead.invert()?; // errors if the pivot layer vanishes
        let u_prec_out = self.u_prec - 2 * m;
        let q_prec_out = self.q_prec - 2 * self.q_min();
        let count = u_prec_out + m; // layers of the inverse: exponents -m .. u_prec_out
        let mut layers: Vec<QLaurent> = Vec::new();
        for t in 0..count.max(0) {
            if t == 0 {
                layers.push(lead_inv.truncate(q_prec_out));
                continue;
            }
            let mut acc = QLaurent::zero(q_prec_out);
            for j in 1..=t {
                let a_j = self.layer(m + j);
                if a_j.is_zero_to_prec() {
                    continue;
                }
                acc = acc.add(&a_j.mul(&layers[(t - j) as usize]).truncate(q_prec_out));
            }
            layers.push(acc.mul(&lead_inv).neg().truncate(q_prec_out));
        }
        let mut s = Self::zero(u_prec_out, q_prec_out);
        for (t, layer) in layers.into_iter().enumerate() {
            s.set_layer(t as i64 - m, layer);
        }
        Ok(s)
    }

    /// Exponential; requires zero constant term and no negative exponents
    /// in either variable so powers eventually leave the precision window.
    pub fn exp(&self) -> SeriesResult<Self> {
        if self.u_min() < 0 || self.q_min() < 0 {
            return Err(SeriesError::NonNilpotentArgument);
        }
        match self.coefficient(0, 0) {
            Ok(c) if c.is_zero() => {}
            _ => return Err(SeriesError::NonNilpotentArgument),
        }
        let mut acc = Self::one(self.u_prec, self.q_prec);
        let mut term = Self::one(self.u_prec, self.q_prec);
        let mut k: i64 = 1;
        loop {
            term = term
                .mul(self)
                .scale(&Rational::new(1.into(), k.into()))
                .truncate(self.u_prec, self.q_prec);
            term.u_prec = self.u_prec;
            term.q_prec = self.q_prec;
            if term.is_zero_to_prec() {
                break;
            }
            acc = acc.add(&term);
            k += 1;
        }
        Ok(acc)
    }

    /// The operator `D = q d/dq`, applied layerwise.
    pub fn d_dq_log(&self) -> Self {
        let mut s = Self::zero(self.u_prec, self.q_prec);
        for (&e, layer) in &self.terms {
            s.set_layer(e, layer.d_log());
        }
        s
    }

    /// Termwise u-derivative; u-precision drops by one.
    pub fn d_du(&self) -> Self {
        let mut s = Self::zero(self.u_prec - 1, self.q_prec);
        for (&e, layer) in &self.terms {
            if e == 0 {
                continue;
            }
            s.set_layer(e - 1, layer.scale(&Rational::from(num::BigInt::from(e))));
        }
        s
    }

    pub fn pow(&self, n: u32) -> Self {
        if n == 0 {
            return Self::one(self.u_prec, self.q_prec);
        }
        let mut result = self.clone();
        for _ in 1..n {
            result = result.mul(self);
        }
        result
    }

    /// Coefficientwise equality within the shared precision window.
    pub fn eq_to_prec(&self, other: &Self) -> bool {
        let u_prec = self.u_prec.min(other.u_prec);
        let q_prec = self.q_prec.min(other.q_prec);
        self.truncate(u_prec, q_prec)
            .sub(&other.truncate(u_prec, q_prec))
            .is_zero_to_prec()
    }

    /// True if every odd-u layer vanishes to precision.
    pub fn is_even_in_u(&self) -> bool {
        self.terms.keys().all(|e| e % 2 == 0)
    }
}

// ---------------------------------------------------------------------------
// Canonical JSON wire format
// ---------------------------------------------------------------------------

#[derive(Debug, Serialize, Deserialize)]
struct WireEntry {
    u: i64,
    q: i64,
    v: String,
}

/// The canonical JSON series format shared by all modules:
/// `{"u_min", "u_prec", "q_min", "q_prec", "coeffs": [{"u","q","v"}]}`
/// with coefficients as decimal `num/den` strings, entries sorted by
/// `(u, q)`, zeros omitted.
#[derive(Debug, Serialize, Deserialize)]
pub struct WireSeries {
    pub u_min: i64,
    pub u_prec: i64,
    pub q_min: i64,
    pub q_prec: i64,
    coeffs: Vec<WireEntry>,
}

impl UQSeries {
    pub fn to_wire(&self) -> WireSeries {
        let mut coeffs = Vec::new();
        for (&u, layer) in &self.terms {
            for (&q, c) in layer.coeffs() {
                coeffs.push(WireEntry {
                    u,
                    q,
                    v: format_rational(c),
                });
            }
        }
        coeffs.sort_by_key(|e| (e.u, e.q));
        WireSeries {
            u_min: if self.is_zero_to_prec() { 0 } else { self.u_min() },
            u_prec: self.u_prec,
            q_min: if self.is_zero_to_prec() { 0 } else { self.q_min() },
            q_prec: self.q_prec,
            coeffs,
        }
    }

    pub fn from_wire(w: &WireSeries) -> SeriesResult<Self> {
        let mut layers: BTreeMap<i64, BTreeMap<i64, Rational>> = BTreeMap::new();
        for e in &w.coeffs {
            let v = parse_rational(&e.v)
                .ok_or_else(|| SeriesError::Malformed(format!("bad rational {:?}", e.v)))?;
            if e.u >= w.u_prec || e.q >= w.q_prec {
                return Err(SeriesError::Malformed(format!(
                    "entry ({}, {}) beyond declared precision",
                    e.u, e.q
                )));
            }
            if !v.is_zero() {
                layers.entry(e.u).or_default().insert(e.q, v);
            }
        }
        let layers = layers
            .into_iter()
            .map(|(u, m)| (u, QLaurent::from_coeffs(m, w.q_prec)))
            .collect();
        Self::from_layers(layers, w.u_prec, w.q_prec)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_wire()).expect("serialization cannot fail")
    }

    pub fn from_json(s: &str) -> SeriesResult<Self> {
        let w: WireSeries =
            serde_json::from_str(s).map_err(|e| SeriesError::Malformed(e.to_string()))?;
        Self::from_wire(&w)
    }

    /// CSV of `(u, q, value)` triples, sorted, exact fractions.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("u,q,value\n");
        for (&u, layer) in &self.terms {
            for (&q, c) in layer.coeffs() {
                out.push_str(&format!("{},{},{}\n", u, q, format_rational(c)));
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat};

    fn q_series(pairs: &[(i64, i64, i64)], prec: i64) -> QLaurent {
        let mut m = BTreeMap::new();
        for &(e, n, d) in pairs {
            m.insert(e, rat(n, d));
        }
        QLaurent::from_coeffs(m, prec)
    }

    #[test]
    fn add_identity_and_inverse() {
        let a = q_series(&[(0, -1, 24), (1, 1, 1)], 10);
        assert_eq!(a.add(&QLaurent::zero(10)), a);
        assert!(a.add(&a.neg()).is_zero_to_prec());
    }

    #[test]
    fn mul_precision_rule() {
        // (q^-1 + ...) known to prec 5 times q^2 known to prec 5:
        // result precision min(5+2, 5-1) = 4
        let a = q_series(&[(-1, 1, 1)], 5);
        let b = q_series(&[(2, 1, 1)], 5);
        let p = a.mul(&b);
        assert_eq!(p.prec(), 4);
        assert_eq!(p.coefficient(1).unwrap(), int(1));
    }

    #[test]
    fn invert_forward_substitution() {
        // 1/(1 - q) = 1 + q + q^2 + ...
        let a = q_series(&[(0, 1, 1), (1, -1, 1)], 8);
        let inv = a.invert().unwrap();
        for k in 0..8 {
            assert_eq!(inv.coefficient(k).unwrap(), int(1));
        }
        // shifted unit: 1/(q^2 - q^3) = q^-2 + q^-1 + ...
        let b = a.shift(2);
        let binv = b.invert().unwrap();
        assert_eq!(binv.min_deg(), -2);
        assert_eq!(binv.coefficient(-2).unwrap(), int(1));
        assert_eq!(binv.prec(), 8 + 2 - 2 * 2);
    }

    #[test]
    fn invert_zero_errors() {
        assert_eq!(
            QLaurent::zero(5).invert(),
            Err(SeriesError::ZeroLeadingCoefficient)
        );
    }

    #[test]
    fn exp_log_consistency() {
        // exp(q) to precision 6
        let a = q_series(&[(1, 1, 1)], 6);
        let e = a.exp().unwrap();
        assert_eq!(e.coefficient(0).unwrap(), int(1));
        assert_eq!(e.coefficient(3).unwrap(), rat(1, 6));
        assert_eq!(e.coefficient(5).unwrap(), rat(1, 120));
        assert!(q_series(&[(0, 1, 1)], 6).exp().is_err());
    }

    #[test]
    fn d_operator_on_q() {
        let a = q_series(&[(0, 5, 1), (3, 2, 1)], 9);
        let d = a.d_log();
        assert_eq!(d.coefficient(0).unwrap(), int(0));
        assert_eq!(d.coefficient(3).unwrap(), int(6));
    }

    #[test]
    fn uq_mul_and_shift() {
        let u2 = UQSeries::u_monomial(2, 10, 10).unwrap();
        let um2 = UQSeries::u_monomial(-2, 10, 10).unwrap();
        let p = u2.mul(&um2);
        assert_eq!(p.coefficient(0, 0).unwrap(), int(1));
        assert!(u2.shift_u(-6).is_err());
        assert!(UQSeries::u_monomial(-3, 10, 10).is_err());
    }

    #[test]
    fn uq_invert_roundtrip() {
        // (u^2 + u^4 q) inverse
        let mut layers = BTreeMap::new();
        layers.insert(2, QLaurent::one(12));
        layers.insert(4, q_series(&[(1, 1, 1)], 12));
        let a = UQSeries::from_layers(layers, 12, 12).unwrap();
        let inv = a.invert().unwrap();
        assert_eq!(inv.u_min(), -2);
        let prod = a.mul(&inv);
        assert!(prod.eq_to_prec(&UQSeries::one(prod.u_prec(), prod.q_prec())));
    }

    #[test]
    fn d_du_drops_precision() {
        let u2 = UQSeries::u_monomial(2, 10, 10).unwrap();
        let d = u2.d_du();
        assert_eq!(d.u_prec(), 9);
        assert_eq!(d.coefficient(1, 0).unwrap(), int(2));
    }

    #[test]
    fn wire_roundtrip() {
        let mut layers = BTreeMap::new();
        layers.insert(-2, q_series(&[(-1, 1, 1), (0, 24, 1)], 7));
        layers.insert(0, q_series(&[(2, -5, 3)], 7));
        let a = UQSeries::from_layers(layers, 9, 7).unwrap();
        let json = a.to_json();
        let b = UQSeries::from_json(&json).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn out_of_precision_is_an_error() {
        let a = UQSeries::one(4, 4);
        assert!(matches!(
            a.coefficient(5, 0),
            Err(SeriesError::OutOfPrecision { .. })
        ));
        assert!(matches!(
            a.coefficient(0, 4),
            Err(SeriesError::OutOfPrecision { .. })
        ));
    }
}
