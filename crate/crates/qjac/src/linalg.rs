//! Exact linear algebra: fraction-full Gaussian elimination over the
//! rationals, and elimination over a 61-bit prime field used as a sound
//! one-sided full-rank certificate for large matrices (full rank mod p
//! implies full rank over Q).

use num::{One, Zero};

use crate::rational::Rational;

/// Row-reduce a rational matrix in place; returns the pivot columns.
pub fn rref(mat: &mut Vec<Vec<Rational>>) -> Vec<usize> {
    let rows = mat.len();
    if rows == 0 {
        return Vec::new();
    }
    let cols = mat[0].len();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows).find(|&i| !mat[i][c].is_zero()) else {
            continue;
        };
        mat.swap(r, p);
        let inv = Rational::one() / mat[r][c].clone();
        for x in mat[r].iter_mut() {
            *x *= &inv;
        }
        for i in 0..rows {
            if i != r && !mat[i][c].is_zero() {
                let f = mat[i][c].clone();
                for j in 0..cols {
                    let delta = &mat[r][j] * &f;
                    mat[i][j] -= delta;
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows {
            break;
        }
    }
    pivots
}

/// Rank of a rational matrix (exact).
pub fn rank(mut mat: Vec<Vec<Rational>>) -> usize {
    rref(&mut mat).len()
}

/// A nonzero kernel vector of a square rational matrix, if one exists.
/// Columns index the unknowns.
pub fn kernel_vector(mut mat: Vec<Vec<Rational>>) -> Option<Vec<Rational>> {
    if mat.is_empty() {
        return None;
    }
    let cols = mat[0].len();
    let pivots = rref(&mut mat);
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    let &f = free.first()?;
    let mut v = vec![Rational::zero(); cols];
    v[f] = Rational::one();
    for (row, &p) in pivots.iter().enumerate() {
        v[p] = -mat[row][f].clone();
    }
    Some(v)
}

/// Solve the (possibly overdetermined) system `A x = b` exactly.
/// Returns `None` when the system is inconsistent. When the solution
/// space is positive-dimensional, free variables are set to zero.
pub fn solve(a: &[Vec<Rational>], b: &[Rational]) -> Option<Vec<Rational>> {
    let rows = a.len();
    assert_eq!(rows, b.len());
    let cols = if rows == 0 { 0 } else { a[0].len() };
    let mut aug: Vec<Vec<Rational>> = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            let mut r = row.clone();
            r.push(rhs.clone());
            r
        })
        .collect();
    let pivots = rref(&mut aug);
    if pivots.contains(&cols) {
        return None; // pivot in the augmented column: inconsistent
    }
    let mut x = vec![Rational::zero(); cols];
    for (row, &p) in pivots.iter().enumerate() {
        x[p] = aug[row][cols].clone();
        // any free-column entries in this row would make the particular
        // solution with zero free variables wrong only if nonzero there;
        // with free vars fixed at zero the pivot value is exactly the rhs.
    }
    Some(x)
}

// ---------------------------------------------------------------------------
// Prime-field elimination
// ---------------------------------------------------------------------------

/// 61-bit Mersenne prime.
pub const P61: u64 = (1u64 << 61) - 1;
/// Backup prime for rank retries.
pub const P61B: u64 = 2_305_843_009_213_693_921; // 2^61 - 31, prime

pub fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

pub fn pow_mod(mut base: u64, mut exp: u64, p: u64) -> u64 {
    let mut acc = 1u64;
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

pub fn inv_mod(a: u64, p: u64) -> u64 {
    pow_mod(a, p - 2, p)
}

/// Rank of a matrix over F_p by Gaussian elimination.
pub fn rank_mod_p(mut mat: Vec<Vec<u64>>, p: u64) -> usize {
    let rows = mat.len();
    if rows == 0 {
        return 0;
    }
    let cols = mat[0].len();
    let mut rank = 0;
    for c in 0..cols {
        let Some(piv) = (rank..rows).find(|&i| mat[i][c] % p != 0) else {
            continue;
        };
        mat.swap(rank, piv);
        let inv = inv_mod(mat[rank][c] % p, p);
        for x in mat[rank].iter_mut() {
            *x = mul_mod(*x % p, inv, p);
        }
        for i in (rank + 1)..rows {
            let f = mat[i][c] % p;
            if f != 0 {
                for j in c..cols {
                    let sub = mul_mod(mat[rank][j], f, p);
                    mat[i][j] = (mat[i][j] % p + p - sub) % p;
                }
            }
        }
        rank += 1;
        if rank == rows {
            break;
        }
    }
    rank
}
