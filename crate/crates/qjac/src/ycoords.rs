//! Conversions between even u-series, symmetric y-Laurent polynomials
//! (y = -e^{iu}), and the basis of powers of r = y^{1/2} + y^{-1/2}
//! = -2 sin(u/2); BPS tables with Fourier-support checks; the
//! Ciliberto-Knutsen genus bound.
//!
//! All trigonometric expansions are exact rational Taylor series; the
//! imaginary unit is eliminated by parity before it ever appears.

use std::collections::BTreeMap;

use num::Zero;

use crate::rational::{binomial, factorial, isqrt, Rational};
use crate::series::{QLaurent, UQSeries};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum YError {
    #[error("y-coefficients are not symmetric: c({0}) != c({1})")]
    AsymmetricInput(i64, i64),
    #[error("series has a nonzero odd u-layer; expected even parity")]
    OddSeries,
    #[error("q-row {n}: residual nonzero at u-order {order} after the support-forced fit")]
    ResidualNonzero { n: i64, order: i64 },
    #[error("q-row {n}: fit requires a negative power of r; not a y-polynomial")]
    NonPolynomialRow { n: i64 },
    #[error("degree {0} below 2: the genus-bound floor is undefined")]
    BadDegree(i64),
}

/// The series `r = -2 sin(u/2) = -u + u^3/24 - u^5/1920 + ...` as a
/// u-Laurent series (the variable of the returned `QLaurent` is u).
pub fn r_series(u_prec: i64) -> QLaurent {
    let mut coeffs = BTreeMap::new();
    let mut j = 0i64;
    while 2 * j + 1 < u_prec {
        // -2 * (-1)^j (u/2)^{2j+1} / (2j+1)!
        let sign = if j % 2 == 0 { -1 } else { 1 };
        let denom = factorial((2 * j + 1) as u32)
            * Rational::from(num::BigInt::from(2).pow(2 * j as u32));
        coeffs.insert(2 * j + 1, Rational::from(num::BigInt::from(sign)) / denom);
        j += 1;
    }
    QLaurent::from_coeffs(coeffs, u_prec)
}

/// Even powers `r^0, r^2, r^4, ...` with exponent `2l < u_prec`.
pub fn r_basis(u_prec: i64) -> Vec<QLaurent> {
    let r = r_series(u_prec + 1);
    let r2 = r.mul(&r).truncate(u_prec);
    let mut out = vec![QLaurent::one(u_prec)];
    while 2 * (out.len() as i64) < u_prec {
        out.push(out.last().unwrap().mul(&r2).truncate(u_prec));
    }
    out
}

/// Solve `f = sum_{l=0}^{L} b_l r^{2l}` by back-substitution down the
/// triangle (r^{2l} = u^{2l} + higher). Returns the coefficients and the
/// residual to the full precision of `f`.
pub fn decompose_r(f: &QLaurent, big_l: i64) -> (Vec<Rational>, QLaurent) {
    assert!(f.min_deg() >= 0, "decompose_r needs a power series in u");
    let prec = f.prec();
    let r = r_series(prec + 1);
    let r2 = r.mul(&r).truncate(prec);
    let mut rem = f.clone();
    let mut rpow = QLaurent::one(prec);
    let mut coeffs = Vec::with_capacity(big_l as usize + 1);
    for l in 0..=big_l {
        let b = if 2 * l < prec {
            rem.coeff_or_zero(2 * l)
        } else {
            Rational::zero()
        };
        rem = rem.sub(&rpow.scale(&b));
        coeffs.push(b);
        if l < big_l {
            rpow = rpow.mul(&r2).truncate(prec);
        }
    }
    (coeffs, rem)
}

/// Fit `row = sum_{l=ell_min}^{ell_max} b_l r^{2l}`; `ell_min` may be
/// negative (the row is multiplied by a power of r^2 first). Returns the
/// coefficients keyed by l and the residual of the shifted fit.
pub fn fit_r_series(
    row: &QLaurent,
    ell_min: i64,
    ell_max: i64,
) -> (BTreeMap<i64, Rational>, QLaurent) {
    let shift = (-ell_min).max(0);
    let mut g = row.clone();
    if shift > 0 {
        let prec = row.prec() + 2 * shift;
        let r = r_series(prec + 1);
        let r2 = r.mul(&r).truncate(prec);
        for _ in 0..shift {
            g = g.mul(&r2);
        }
        g = g.truncate(prec);
    }
    let (coeffs, rem) = decompose_r(&g, ell_max + shift);
    let map = coeffs
        .into_iter()
        .enumerate()
        .map(|(j, b)| (j as i64 - shift, b))
        .filter(|(_, b)| !b.is_zero())
        .collect();
    (map, rem)
}

/// Symmetric y-Laurent coefficients to the even u-series
/// `c_0 + sum_{r>0} 2 c_r (-1)^r cos(ru)`.
pub fn y_poly_to_u(c: &BTreeMap<i64, Rational>, u_prec: i64) -> Result<QLaurent, YError> {
    for (&r, v) in c {
        let mirror = c.get(&-r).cloned().unwrap_or_else(Rational::zero);
        if *v != mirror {
            return Err(YError::AsymmetricInput(r, -r));
        }
    }
    let mut out = QLaurent::monomial(0, c.get(&0).cloned().unwrap_or_else(Rational::zero), u_prec);
    for (&r, v) in c.range(1..) {
        if v.is_zero() {
            continue;
        }
        // 2 c_r (-1)^r cos(ru)
        let sign = if r % 2 == 0 { 2 } else { -2 };
        let scale = v * Rational::from(num::BigInt::from(sign));
        let mut cos = BTreeMap::new();
        let mut j = 0i64;
        while 2 * j < u_prec {
            let s = if j % 2 == 0 { 1 } else { -1 };
            let term = Rational::from(num::BigInt::from(s) * num::BigInt::from(r).pow(2 * j as u32))
                / factorial((2 * j) as u32);
            cos.insert(2 * j, term);
            j += 1;
        }
        out = out.add(&QLaurent::from_coeffs(cos, u_prec).scale(&scale));
    }
    Ok(out)
}

/// BPS table: per q-exponent n, the symmetric y-coefficients c(n,r).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BpsTable {
    pub index: i64,
    pub rows: BTreeMap<i64, BTreeMap<i64, Rational>>,
    pub residual_order: i64,
}

/// Fit every q-row of an even series against powers of r up to the
/// support-forced degree `floor(sqrt(4 n index + index^2))`, then convert
/// to y-coefficients via the binomial expansion of r^{2l}.
pub fn bps_expand(f: &UQSeries, index: i64) -> Result<BpsTable, YError> {
    if !f.is_even_in_u() {
        return Err(YError::OddSeries);
    }
    let mut rows = BTreeMap::new();
    for n in f.q_min()..f.q_prec() {
        let row = f.q_row(n);
        let disc = 4 * n * index + index * index;
        if disc < 0 {
            // support forces the whole row to vanish
            if !row.is_zero_to_prec() {
                return Err(YError::ResidualNonzero {
                    n,
                    order: row.min_deg(),
                });
            }
            continue;
        }
        let ell_max = isqrt(disc);
        let ell_min = if row.min_deg() < 0 { row.min_deg() / 2 } else { 0 };
        let (b, rem) = fit_r_series(&row, ell_min, ell_max);
        if !rem.is_zero_to_prec() {
            return Err(YError::ResidualNonzero {
                n,
                order: rem.min_deg(),
            });
        }
        if b.keys().any(|&l| l < 0) {
            return Err(YError::NonPolynomialRow { n });
        }
        // r^{2l} = sum_j C(2l, j) y^{l-j}
        let mut ycoeffs: BTreeMap<i64, Rational> = BTreeMap::new();
        for (&l, bl) in &b {
            for j in 0..=2 * l {
                let term = bl * Rational::from(binomial((2 * l) as u64, j as u64));
                let entry = ycoeffs.entry(l - j).or_insert_with(Rational::zero);
                *entry += term;
            }
        }
        ycoeffs.retain(|_, v| !v.is_zero());
        if !ycoeffs.is_empty() {
            rows.insert(n, ycoeffs);
        }
    }
    Ok(BpsTable {
        index,
        rows,
        residual_order: f.u_prec(),
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SupportReport {
    pub pass: bool,
    pub violations: Vec<(i64, i64)>,
}

/// Verify `r^2 <= 4 n index + index^2` for every nonzero table entry.
pub fn support_check(t: &BpsTable) -> SupportReport {
    let mut violations = Vec::new();
    for (&n, row) in &t.rows {
        for (&r, v) in row {
            if !v.is_zero() && r * r > 4 * n * t.index + t.index * t.index {
                violations.push((n, r));
            }
        }
    }
    SupportReport {
        pass: violations.is_empty(),
        violations,
    }
}

/// The genus bound `h >= g + alpha (g - (d-1)(alpha+1))` with
/// `alpha = floor(g / (2d-2))`.
pub fn ck_bound(h: i64, d: i64, g: i64) -> Result<bool, YError> {
    if d < 2 {
        return Err(YError::BadDegree(d));
    }
    assert!(g >= 0 && h >= 0);
    let alpha = g / (2 * d - 2);
    Ok(h >= g + alpha * (g - (d - 1) * (alpha + 1)))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CkReport {
    pub d: i64,
    pub implication_holds: bool,
    pub equivalent_at_d2: bool,
    pub counterexamples: Vec<(i64, i64)>,
}

/// Brute-force check over `0 <= g <= g_max`, `0 <= h <= h_max` that the
/// genus bound implies `(g+d-1)^2 <= 4h(d-1) + (d-1)^2`, and that the two
/// are equivalent when d = 2.
pub fn ck_equivalence(d: i64, h_max: i64, g_max: i64) -> Result<CkReport, YError> {
    if d < 2 {
        return Err(YError::BadDegree(d));
    }
    let mut counterexamples = Vec::new();
    let mut equivalent = true;
    for g in 0..=g_max {
        for h in 0..=h_max {
            let ck = ck_bound(h, d, g)?;
            let quad = (g + d - 1) * (g + d - 1) <= 4 * h * (d - 1) + (d - 1) * (d - 1);
            if ck && !quad {
                counterexamples.push((g, h));
            }
            if d == 2 && ck != quad {
                equivalent = false;
            }
        }
    }
    Ok(CkReport {
        d,
        implication_holds: counterexamples.is_empty(),
        equivalent_at_d2: d != 2 || equivalent,
        counterexamples,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::jacobi;
    use crate::rational::{int, rat};

    #[test]
    fn r_series_leading_terms() {
        let r = r_series(8);
        assert_eq!(r.coeff_or_zero(1), int(-1));
        assert_eq!(r.coeff_or_zero(3), rat(1, 24));
        assert_eq!(r.coeff_or_zero(5), rat(-1, 1920));
        let basis = r_basis(8);
        assert!(basis[0].eq_to_prec(&QLaurent::one(8)));
        assert_eq!(basis[1].coeff_or_zero(2), int(1));
        assert_eq!(basis[1].coeff_or_zero(4), rat(-1, 12));
    }

    #[test]
    fn decompose_constant_and_u2() {
        let one = QLaurent::one(10);
        let (b, rem) = decompose_r(&one, 3);
        assert_eq!(b[0], int(1));
        assert!(b[1..].iter().all(|x| x.is_zero()));
        assert!(rem.is_zero_to_prec());

        let u2 = QLaurent::monomial(2, int(1), 8);
        let (b, _) = decompose_r(&u2, 3);
        assert_eq!(b[0], int(0));
        assert_eq!(b[1], int(1));
        assert_eq!(b[2], rat(1, 12));
    }

    #[test]
    fn basis_roundtrip() {
        let basis = r_basis(12);
        let (b, rem) = decompose_r(&basis[2], 4);
        assert_eq!(b[2], int(1));
        assert!(b.iter().enumerate().all(|(l, x)| l == 2 || x.is_zero()));
        assert!(rem.is_zero_to_prec());
    }

    #[test]
    fn fit_handles_negative_floor() {
        // r^{-2}'s u-expansion is not polynomial, but row * r^2 = 1 is:
        // feed the row u^{-2} + 1/12 + ... which is r^{-2} up to available prec
        let r = r_series(11);
        let r2 = r.mul(&r).truncate(10);
        let row = r2.invert().unwrap();
        let (b, rem) = fit_r_series(&row, -1, 2);
        assert_eq!(b.get(&-1), Some(&int(1)));
        assert_eq!(b.len(), 1);
        assert!(rem.is_zero_to_prec());
    }

    #[test]
    fn y_poly_conversions() {
        let c0: BTreeMap<i64, Rational> = BTreeMap::from([(0, int(1))]);
        assert!(y_poly_to_u(&c0, 8).unwrap().eq_to_prec(&QLaurent::one(8)));

        // {-1:1, 1:1} -> -2 cos u
        let c1 = BTreeMap::from([(-1, int(1)), (1, int(1))]);
        let s = y_poly_to_u(&c1, 8).unwrap();
        assert_eq!(s.coeff_or_zero(0), int(-2));
        assert_eq!(s.coeff_or_zero(2), int(1));
        assert_eq!(s.coeff_or_zero(4), rat(-1, 12));

        // y + 2 + 1/y is r^2
        let c2 = BTreeMap::from([(-1, int(1)), (0, int(2)), (1, int(1))]);
        let s2 = y_poly_to_u(&c2, 12).unwrap();
        assert!(s2.eq_to_prec(&r_basis(12)[1]));

        let bad = BTreeMap::from([(1, int(1))]);
        assert!(matches!(
            y_poly_to_u(&bad, 8),
            Err(YError::AsymmetricInput(_, _))
        ));
    }

    #[test]
    fn bps_of_theta_squared() {
        let th = jacobi::theta(12, 5);
        let t = bps_expand(&th.mul(&th), 1).unwrap();
        let row0 = &t.rows[&0];
        assert_eq!(row0[&0], int(2));
        assert_eq!(row0[&1], int(1));
        assert_eq!(row0[&-1], int(1));
        assert!(support_check(&t).pass);
        for row in t.rows.values() {
            for (&r, v) in row {
                assert_eq!(Some(v), row.get(&-r).as_deref());
            }
        }
    }

    #[test]
    fn bps_of_one_and_injected_violation() {
        let t = bps_expand(&UQSeries::one(8, 4), 1).unwrap();
        assert_eq!(t.rows[&0][&0], int(1));
        assert_eq!(t.rows.len(), 1);

        let mut tampered = t.clone();
        tampered.rows.entry(0).or_default().insert(3, int(5));
        let rep = support_check(&tampered);
        assert!(!rep.pass);
        assert_eq!(rep.violations, vec![(0, 3)]);
    }

    #[test]
    fn bps_of_big_g() {
        let g = jacobi::big_g(14, 5);
        let t = bps_expand(&g, 1).unwrap();
        assert!(support_check(&t).pass);
    }

    #[test]
    fn ck_examples() {
        assert!(ck_bound(7, 2, 0).unwrap());
        assert!(ck_bound(2, 2, 2).unwrap());
        assert!(!ck_bound(2, 2, 3).unwrap());
        assert!(matches!(ck_bound(1, 1, 1), Err(YError::BadDegree(1))));
    }

    #[test]
    fn ck_equivalence_small_sweep() {
        let rep = ck_equivalence(2, 40, 40).unwrap();
        assert!(rep.implication_holds);
        assert!(rep.equivalent_at_d2);
        let rep3 = ck_equivalence(3, 30, 30).unwrap();
        assert!(rep3.implication_holds);
    }
}
