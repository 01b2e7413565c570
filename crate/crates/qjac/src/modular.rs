//! Eisenstein series, the discriminant, and the graded ring of
//! quasi-modular forms: dimension counts, membership tests, vanishing
//! orders, and per-weight full-rank certificates for the strong
//! vanishing bound.
//!
//! The Eisenstein normalization used everywhere is
//! `C_2k = -B_2k/(2k (2k)!) + (2/(2k)!) sum sigma_{2k-1}(n) q^n`,
//! not the classical `E_2k`.

use std::collections::BTreeMap;

use num::bigint::BigInt;
use num::{One, Zero};

use crate::linalg;
use crate::rational::{binomial, Rational};
use crate::series::QLaurent;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ModularError {
    #[error("need at least {needed} known q-coefficients, have {have}")]
    InsufficientPrecision { needed: i64, have: i64 },
    #[error("weight must be a nonnegative even integer, got {0}")]
    BadWeight(i64),
}

/// Monomial exponent triple `(a, b, c)` for `C2^a C4^b C6^c`.
pub type Monomial = (u32, u32, u32);

/// Coordinates of a weight-homogeneous quasi-modular form in the
/// monomial basis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QModElement {
    pub weight: i64,
    pub coords: BTreeMap<Monomial, Rational>,
}

impl QModElement {
    pub fn zero(weight: i64) -> Self {
        QModElement {
            weight,
            coords: BTreeMap::new(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coords.values().all(|c| c.is_zero())
    }

    /// Exact q-expansion via the monomial expansions.
    pub fn expand(&self, q_prec: i64) -> QLaurent {
        let mut acc = QLaurent::zero(q_prec);
        for (&(a, b, c), coeff) in &self.coords {
            if coeff.is_zero() {
                continue;
            }
            acc = acc.add(&monomial_expansion(a, b, c, q_prec).scale(coeff));
        }
        acc
    }
}

/// Bernoulli number `B_n` via the standard recurrence
/// `sum_{j<=n} C(n+1, j) B_j = 0`, `B_0 = 1`.
pub fn bernoulli(n: u32) -> Rational {
    let mut b: Vec<Rational> = Vec::with_capacity(n as usize + 1);
    for m in 0..=n as u64 {
        if m == 0 {
            b.push(Rational::one());
            continue;
        }
        let mut acc = Rational::zero();
        for (j, bj) in b.iter().enumerate() {
            acc += Rational::from(binomial(m + 1, j as u64)) * bj;
        }
        b.push(-acc / Rational::from(BigInt::from(m + 1)));
    }
    b[n as usize].clone()
}

/// Divisor power sum `sigma_k(n)` as a big integer.
pub fn sigma(k: u32, n: u64) -> BigInt {
    let mut acc = BigInt::zero();
    let mut d = 1u64;
    while d * d <= n {
        if n % d == 0 {
            acc += BigInt::from(d).pow(k);
            let e = n / d;
            if e != d {
                acc += BigInt::from(e).pow(k);
            }
        }
        d += 1;
    }
    acc
}

/// The Eisenstein series `C_2k` to the given q-precision.
pub fn eisenstein(k2: u32, q_prec: i64) -> QLaurent {
    assert!(k2 >= 2 && k2 % 2 == 0, "C_2k needs even 2k >= 2");
    let fact: Rational = crate::rational::factorial(k2);
    let constant = -bernoulli(k2) / (Rational::from(BigInt::from(k2)) * &fact);
    let scale = Rational::from(BigInt::from(2)) / &fact;
    let mut coeffs = BTreeMap::new();
    if !constant.is_zero() {
        coeffs.insert(0, constant);
    }
    for n in 1..q_prec.max(0) {
        coeffs.insert(n, &scale * Rational::from(sigma(k2 - 1, n as u64)));
    }
    QLaurent::from_coeffs(coeffs, q_prec)
}

/// The modular discriminant `Delta = q prod (1-q^m)^24`.
pub fn delta(q_prec: i64) -> QLaurent {
    let mut euler = QLaurent::one(q_prec);
    for m in 1..q_prec.max(0) {
        let factor = QLaurent::from_coeffs(
            BTreeMap::from([(0, Rational::one()), (m, -Rational::one())]),
            q_prec,
        );
        euler = euler.mul(&factor).truncate(q_prec);
    }
    euler.pow(24).truncate(q_prec - 1).shift(1).truncate(q_prec)
}

/// Monomial triples of the given weight, in a fixed deterministic order.
pub fn monomials_of_weight(weight: i64) -> Vec<Monomial> {
    let mut out = Vec::new();
    if weight < 0 || weight % 2 != 0 {
        return out;
    }
    let half = weight / 2;
    for c in 0..=(half / 3) {
        for b in 0..=((half - 3 * c) / 2) {
            let a = half - 3 * c - 2 * b;
            out.push((a as u32, b as u32, c as u32));
        }
    }
    out.sort();
    out
}

/// Exact count of basis monomials at the given weight.
pub fn dim_qmod(weight: i64) -> i64 {
    monomials_of_weight(weight).len() as i64
}

/// Exact q-expansion of `C2^a C4^b C6^c`.
pub fn monomial_expansion(a: u32, b: u32, c: u32, q_prec: i64) -> QLaurent {
    let mut acc = QLaurent::one(q_prec);
    if a > 0 {
        acc = acc.mul(&eisenstein(2, q_prec).pow(a)).truncate(q_prec);
    }
    if b > 0 {
        acc = acc.mul(&eisenstein(4, q_prec).pow(b)).truncate(q_prec);
    }
    if c > 0 {
        acc = acc.mul(&eisenstein(6, q_prec).pow(c)).truncate(q_prec);
    }
    acc
}

/// All monomials of a weight paired with their exact q-expansions.
pub fn qmod_basis(weight: i64, q_prec: i64) -> Vec<(Monomial, QLaurent)> {
    monomials_of_weight(weight)
        .into_iter()
        .map(|(a, b, c)| ((a, b, c), monomial_expansion(a, b, c, q_prec)))
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Membership {
    Member(QModElement),
    NotMember,
}

/// Decide membership of a q-series in the weight-homogeneous space by
/// exact linear algebra against the monomial basis. Requires at least
/// `dim + guard` known coefficients; every known coefficient must match.
pub fn membership(f: &QLaurent, weight: i64, guard: i64) -> Result<Membership, ModularError> {
    if weight < 0 || weight % 2 != 0 {
        return Ok(if f.is_zero_to_prec() {
            Membership::Member(QModElement::zero(weight))
        } else {
            Membership::NotMember
        });
    }
    let dim = dim_qmod(weight);
    let needed = dim + guard;
    if f.prec() < needed {
        return Err(ModularError::InsufficientPrecision {
            needed,
            have: f.prec(),
        });
    }
    if f.min_deg() < 0 && !f.is_zero_to_prec() {
        return Ok(Membership::NotMember);
    }
    let prec = f.prec();
    let basis = qmod_basis(weight, prec);
    let rows = prec as usize;
    let mat: Vec<Vec<Rational>> = (0..rows)
        .map(|n| {
            basis
                .iter()
                .map(|(_, s)| s.coeff_or_zero(n as i64))
                .collect()
        })
        .collect();
    let rhs: Vec<Rational> = (0..rows).map(|n| f.coeff_or_zero(n as i64)).collect();
    let Some(x) = linalg::solve(&mat, &rhs) else {
        return Ok(Membership::NotMember);
    };
    let coords: BTreeMap<Monomial, Rational> = basis
        .iter()
        .map(|(m, _)| *m)
        .zip(x)
        .filter(|(_, v)| !v.is_zero())
        .collect();
    let elem = QModElement { weight, coords };
    // re-expansion check: the solved coordinates must reproduce f exactly
    if elem.expand(prec).eq_to_prec(f) {
        Ok(Membership::Member(elem))
    } else {
        Ok(Membership::NotMember)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum VanishingOrder {
    Order(i64),
    AllZeroToPrecision,
}

/// Order of vanishing at q = 0: smallest exponent with nonzero coefficient.
pub fn vanishing_order(f: &QLaurent) -> VanishingOrder {
    if f.is_zero_to_prec() {
        VanishingOrder::AllZeroToPrecision
    } else {
        VanishingOrder::Order(f.min_deg())
    }
}

/// Saradha's bound `k(k+1)/6` on the vanishing order at weight `2k`.
pub fn saradha_bound(k: i64) -> Rational {
    assert!(k >= 0);
    Rational::new(BigInt::from(k * (k + 1)), BigInt::from(6))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RankCertificate {
    /// The dim x dim coefficient matrix of the monomial basis has full
    /// rank, hence every nonzero form of this weight has vanishing order
    /// strictly below the dimension. `modulus` records the prime field
    /// used when the certificate came from mod-p elimination (full rank
    /// mod p implies full rank over Q).
    FullRank {
        weight: i64,
        dim: i64,
        modulus: Option<u64>,
    },
    /// Exact rational kernel vector of the coefficient matrix: a
    /// candidate violating combination (coordinates in monomial order).
    ViolationCandidate { weight: i64, kernel: Vec<Rational> },
}

impl RankCertificate {
    pub fn is_full_rank(&self) -> bool {
        matches!(self, RankCertificate::FullRank { .. })
    }
}

/// Shared cache for the mod-p rank sweep: classical-normalization
/// Eisenstein power series over F_p. Column scaling relates these to the
/// `C_2k` monomials, so ranks agree.
pub struct RankSweep {
    p: u64,
    len: usize,
    e2_pows: Vec<Vec<u64>>,
    e4_pows: Vec<Vec<u64>>,
    e6_pows: Vec<Vec<u64>>,
}

fn conv_mod(a: &[u64], b: &[u64], len: usize, p: u64) -> Vec<u64> {
    let mut out = vec![0u64; len];
    for (i, &x) in a.iter().enumerate().take(len) {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate().take(len - i) {
            if y == 0 {
                continue;
            }
            out[i + j] = (out[i + j] + linalg::mul_mod(x, y, p)) % p;
        }
    }
    out
}

fn eis_classical_mod(k2: u32, scale: i64, len: usize, p: u64) -> Vec<u64> {
    // 1 + scale * sum sigma_{k2-1}(n) q^n mod p
    let mut out = vec![0u64; len];
    out[0] = 1;
    let s = if scale >= 0 {
        scale as u64 % p
    } else {
        p - ((-scale) as u64 % p)
    };
    for n in 1..len {
        let mut sig = 0u64;
        let mut d = 1u64;
        let n64 = n as u64;
        while d * d <= n64 {
            if n64 % d == 0 {
                sig = (sig + linalg::pow_mod(d, (k2 - 1) as u64, p)) % p;
                let e = n64 / d;
                if e != d {
                    sig = (sig + linalg::pow_mod(e, (k2 - 1) as u64, p)) % p;
                }
            }
            d += 1;
        }
        out[n] = linalg::mul_mod(s, sig, p);
    }
    out
}

impl RankSweep {
    pub fn new(max_weight: i64, p: u64) -> Self {
        let len = dim_qmod(max_weight).max(1) as usize;
        let half = (max_weight / 2).max(0) as usize;
        let e2 = eis_classical_mod(2, -24, len, p);
        let e4 = eis_classical_mod(4, 240, len, p);
        let e6 = eis_classical_mod(6, -504, len, p);
        let pows = |base: &[u64], max: usize| -> Vec<Vec<u64>> {
            let mut v = Vec::with_capacity(max + 1);
            let mut one = vec![0u64; len];
            one[0] = 1;
            v.push(one);
            for k in 1..=max {
                let next = conv_mod(&v[k - 1], base, len, p);
                v.push(next);
            }
            v
        };
        RankSweep {
            p,
            len,
            e2_pows: pows(&e2, half),
            e4_pows: pows(&e4, half / 2),
            e6_pows: pows(&e6, half / 3),
        }
    }

    /// Rank of the weight's dim x dim coefficient matrix over F_p.
    pub fn rank_at(&self, weight: i64) -> (usize, i64) {
        let monos = monomials_of_weight(weight);
        let dim = monos.len();
        let rows: Vec<Vec<u64>> = monos
            .iter()
            .map(|&(a, b, c)| {
                let bc = conv_mod(
                    &self.e4_pows[b as usize],
                    &self.e6_pows[c as usize],
                    dim.min(self.len),
                    self.p,
                );
                let full = conv_mod(&self.e2_pows[a as usize], &bc, dim.min(self.len), self.p);
                full
            })
            .collect();
        (linalg::rank_mod_p(rows, self.p), dim as i64)
    }
}

/// Full-rank certificate for one weight via mod-p elimination, with an
/// exact rational fallback when the prime field is rank deficient.
pub fn verify_strong_bound(weight: i64, q_prec: i64) -> Result<RankCertificate, ModularError> {
    if weight < 0 || weight % 2 != 0 {
        return Err(ModularError::BadWeight(weight));
    }
    let dim = dim_qmod(weight);
    if q_prec < dim {
        return Err(ModularError::InsufficientPrecision {
            needed: dim,
            have: q_prec,
        });
    }
    for p in [linalg::P61, linalg::P61B] {
        let sweep = RankSweep::new(weight, p);
        let (rank, d) = sweep.rank_at(weight);
        if rank == d as usize {
            return Ok(RankCertificate::FullRank {
                weight,
                dim,
                modulus: Some(p),
            });
        }
    }
    verify_strong_bound_exact(weight, q_prec)
}

/// Certificates for every even weight up to `max_weight`, sharing one
/// power cache per prime across the sweep.
pub fn verify_strong_bound_range(max_weight: i64) -> Vec<(i64, RankCertificate)> {
    let sweep = RankSweep::new(max_weight, linalg::P61);
    let mut backup: Option<RankSweep> = None;
    let mut out = Vec::new();
    for weight in (2..=max_weight).step_by(2) {
        let (rank, dim) = sweep.rank_at(weight);
        let cert = if rank == dim as usize {
            RankCertificate::FullRank {
                weight,
                dim,
                modulus: Some(linalg::P61),
            }
        } else {
            let b = backup.get_or_insert_with(|| RankSweep::new(max_weight, linalg::P61B));
            let (rank_b, _) = b.rank_at(weight);
            if rank_b == dim as usize {
                RankCertificate::FullRank {
                    weight,
                    dim,
                    modulus: Some(linalg::P61B),
                }
            } else {
                verify_strong_bound_exact(weight, dim).expect("precision matches dim")
            }
        };
        out.push((weight, cert));
    }
    out
}

/// Fully exact certificate over the rationals (slow at large weights).
pub fn verify_strong_bound_exact(
    weight: i64,
    q_prec: i64,
) -> Result<RankCertificate, ModularError> {
    if weight < 0 || weight % 2 != 0 {
        return Err(ModularError::BadWeight(weight));
    }
    let dim = dim_qmod(weight);
    if q_prec < dim {
        return Err(ModularError::InsufficientPrecision {
            needed: dim,
            have: q_prec,
        });
    }
    let basis = qmod_basis(weight, dim);
    let mat: Vec<Vec<Rational>> = basis
        .iter()
        .map(|(_, s)| (0..dim).map(|n| s.coeff_or_zero(n)).collect())
        .collect();
    if linalg::rank(mat.clone()) == dim as usize {
        Ok(RankCertificate::FullRank {
            weight,
            dim,
            modulus: None,
        })
    } else {
        // transpose so the kernel vector combines monomials
        let t: Vec<Vec<Rational>> = (0..dim as usize)
            .map(|j| mat.iter().map(|row| row[j].clone()).collect())
            .collect();
        let kernel = linalg::kernel_vector(t).expect("rank-deficient matrix has a kernel");
        Ok(RankCertificate::ViolationCandidate { weight, kernel })
    }
}
