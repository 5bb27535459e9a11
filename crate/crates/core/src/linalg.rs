//! Exact integer and rational matrix kernels: Hermite and Smith normal forms,
//! fraction-free determinants, integral kernels and rational solves.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::matrix::{IntMatrix, RatMatrix};

/// `(g, s, t)` with `g = s·a + t·b`, `g ≥ 0`.
fn ext_gcd(a: &BigInt, b: &BigInt) -> (BigInt, BigInt, BigInt) {
    let e = a.extended_gcd(b);
    if e.gcd.is_negative() {
        (-e.gcd, -e.x, -e.y)
    } else {
        (e.gcd, e.x, e.y)
    }
}

/// row[dst] += k · row[src]
fn add_row_multiple(m: &mut IntMatrix, dst: usize, src: usize, k: &BigInt) {
    if k.is_zero() {
        return;
    }
    for j in 0..m.cols() {
        let v = &m[(src, j)] * k;
        if !v.is_zero() {
            m[(dst, j)] += v;
        }
    }
}

fn add_col_multiple(m: &mut IntMatrix, dst: usize, src: usize, k: &BigInt) {
    if k.is_zero() {
        return;
    }
    for i in 0..m.rows() {
        let v = &m[(i, src)] * k;
        if !v.is_zero() {
            m[(i, dst)] += v;
        }
    }
}

fn negate_row(m: &mut IntMatrix, i: usize) {
    for x in m.row_mut(i) {
        *x = -std::mem::take(x);
    }
}

/// Replaces rows (r, i) by `[[s, t], [-b/g, a/g]]·(r, i)`; unimodular.
fn combine_rows(m: &mut IntMatrix, r: usize, i: usize, s: &BigInt, t: &BigInt, u: &BigInt, v: &BigInt) {
    for j in 0..m.cols() {
        let x = m[(r, j)].clone();
        let y = m[(i, j)].clone();
        m[(r, j)] = s * &x + t * &y;
        m[(i, j)] = u * &x + v * &y;
    }
}

fn combine_cols(m: &mut IntMatrix, c: usize, k: usize, s: &BigInt, t: &BigInt, u: &BigInt, v: &BigInt) {
    for i in 0..m.rows() {
        let x = m[(i, c)].clone();
        let y = m[(i, k)].clone();
        m[(i, c)] = s * &x + t * &y;
        m[(i, k)] = u * &x + v * &y;
    }
}

/// Zeroes `m[(i, c)]` against the pivot `m[(r, c)]` with a unimodular row
/// operation mirrored onto `t`.
fn eliminate_row_entry(m: &mut IntMatrix, t: &mut IntMatrix, r: usize, i: usize, c: usize) {
    let a = m[(r, c)].clone();
    let b = m[(i, c)].clone();
    if b.is_zero() {
        return;
    }
    if !a.is_zero() && b.is_multiple_of(&a) {
        let q = -(&b / &a);
        add_row_multiple(m, i, r, &q);
        add_row_multiple(t, i, r, &q);
        return;
    }
    let (g, s, tt) = ext_gcd(&a, &b);
    let u = -(&b / &g);
    let v = &a / &g;
    combine_rows(m, r, i, &s, &tt, &u, &v);
    combine_rows(t, r, i, &s, &tt, &u, &v);
}

fn eliminate_col_entry(m: &mut IntMatrix, t: &mut IntMatrix, c: usize, k: usize, r: usize) {
    let a = m[(r, c)].clone();
    let b = m[(r, k)].clone();
    if b.is_zero() {
        return;
    }
    if !a.is_zero() && b.is_multiple_of(&a) {
        let q = -(&b / &a);
        add_col_multiple(m, k, c, &q);
        add_col_multiple(t, k, c, &q);
        return;
    }
    let (g, s, tt) = ext_gcd(&a, &b);
    let u = -(&b / &g);
    let v = &a / &g;
    combine_cols(m, c, k, &s, &tt, &u, &v);
    combine_cols(t, c, k, &s, &tt, &u, &v);
}

/// Row Hermite normal form.
///
/// Returns `(H, T)` with `T` unimodular and `T·M = H`. Pivots are positive,
/// entries above a pivot lie in `[0, pivot)`, zero rows come last.
pub fn hermite_normal_form(m: &IntMatrix) -> (IntMatrix, IntMatrix) {
    let mut h = m.clone();
    let mut t = IntMatrix::identity(m.rows());
    let mut r = 0;
    for c in 0..h.cols() {
        if r == h.rows() {
            break;
        }
        // Bring the smallest nonzero entry to the pivot slot to limit growth.
        let Some(best) =
            (r..h.rows()).filter(|&i| !h[(i, c)].is_zero()).min_by(|&x, &y| h[(x, c)].abs().cmp(&h[(y, c)].abs()))
        else {
            continue;
        };
        h.swap_rows(r, best);
        t.swap_rows(r, best);
        for i in r + 1..h.rows() {
            eliminate_row_entry(&mut h, &mut t, r, i, c);
        }
        if h[(r, c)].is_negative() {
            negate_row(&mut h, r);
            negate_row(&mut t, r);
        }
        let p = h[(r, c)].clone();
        for i in 0..r {
            let q = -h[(i, c)].div_floor(&p);
            add_row_multiple(&mut h, i, r, &q);
            add_row_multiple(&mut t, i, r, &q);
        }
        r += 1;
    }
    (h, t)
}

/// Smith normal form.
///
/// Returns `(U, S, V)` with `U·M·V = S`, `U` and `V` unimodular and `S`
/// diagonal with non-negative entries `d₁ | d₂ | …`, zeros last.
pub fn smith_normal_form(m: &IntMatrix) -> (IntMatrix, IntMatrix, IntMatrix) {
    let mut s = m.clone();
    let mut u = IntMatrix::identity(m.rows());
    let mut v = IntMatrix::identity(m.cols());
    let bound = m.rows().min(m.cols());
    for t in 0..bound {
        let mut best: Option<(usize, usize)> = None;
        for i in t..s.rows() {
            for j in t..s.cols() {
                if s[(i, j)].is_zero() {
                    continue;
                }
                if best.is_none_or(|(bi, bj)| s[(i, j)].abs() < s[(bi, bj)].abs()) {
                    best = Some((i, j));
                }
            }
        }
        let Some((bi, bj)) = best else { break };
        s.swap_rows(t, bi);
        u.swap_rows(t, bi);
        s.swap_cols(t, bj);
        v.swap_cols(t, bj);
        loop {
            for i in t + 1..s.rows() {
                eliminate_row_entry(&mut s, &mut u, t, i, t);
            }
            for j in t + 1..s.cols() {
                eliminate_col_entry(&mut s, &mut v, t, j, t);
            }
            let column_clear = (t + 1..s.rows()).all(|i| s[(i, t)].is_zero());
            if !column_clear {
                continue;
            }
            let d = s[(t, t)].clone();
            let offender = (t + 1..s.rows()).find(|&i| (t + 1..s.cols()).any(|j| !s[(i, j)].is_multiple_of(&d)));
            match offender {
                Some(i) => {
                    let one = BigInt::one();
                    add_row_multiple(&mut s, t, i, &one);
                    add_row_multiple(&mut u, t, i, &one);
                }
                None => break,
            }
        }
        if s[(t, t)].is_negative() {
            negate_row(&mut s, t);
            negate_row(&mut u, t);
        }
    }
    (u, s, v)
}

/// Non-zero diagonal entries of the Smith form, in divisibility order.
pub fn invariant_factors(m: &IntMatrix) -> Vec<BigInt> {
    let (_, s, _) = smith_normal_form(m);
    (0..s.rows().min(s.cols())).map(|i| s[(i, i)].clone()).filter(|d| !d.is_zero()).collect()
}

/// Determinant by fraction-free (Bareiss) elimination.
pub fn det_exact(m: &IntMatrix) -> Result<BigInt> {
    if !m.is_square() {
        return Err(Error::NonSquare { rows: m.rows(), cols: m.cols() });
    }
    let n = m.rows();
    if n == 0 {
        return Ok(BigInt::one());
    }
    let mut a = m.clone();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[(k, k)].is_zero() {
            let Some(p) = (k + 1..n).find(|&i| !a[(i, k)].is_zero()) else {
                return Ok(BigInt::zero());
            };
            a.swap_rows(k, p);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = &a[(i, j)] * &a[(k, k)] - &a[(i, k)] * &a[(k, j)];
                a[(i, j)] = num / &prev;
            }
            a[(i, k)] = BigInt::zero();
        }
        prev = a[(k, k)].clone();
    }
    Ok(sign * &a[(n - 1, n - 1)])
}

/// Rank over the rationals.
pub fn rank(m: &IntMatrix) -> usize {
    let (h, _) = hermite_normal_form(m);
    (0..h.rows()).filter(|&i| h.row(i).iter().any(|x| !x.is_zero())).count()
}

/// Saturated integral basis (in row HNF) of the left kernel `{x : x·M = 0}`.
pub fn kernel_basis(m: &IntMatrix) -> IntMatrix {
    let (h, t) = hermite_normal_form(m);
    let zero_rows: Vec<usize> = (0..h.rows()).filter(|&i| h.row(i).iter().all(Zero::is_zero)).collect();
    let k = t.select_rows(&zero_rows);
    if k.rows() == 0 {
        return IntMatrix::zeros(0, m.rows());
    }
    hermite_normal_form(&k).0
}

/// Removes the zero rows of a matrix in row echelon form.
pub fn nonzero_rows(m: &IntMatrix) -> IntMatrix {
    let keep: Vec<usize> = (0..m.rows()).filter(|&i| m.row(i).iter().any(|x| !x.is_zero())).collect();
    let mut out = m.select_rows(&keep);
    if out.rows() == 0 {
        out = IntMatrix::zeros(0, m.cols());
    }
    out
}

/// Solves `M·x = b` exactly for square non-singular `M`.
pub fn solve_rational(m: &IntMatrix, b: &RatMatrix) -> Result<RatMatrix> {
    if !m.is_square() {
        return Err(Error::NonSquare { rows: m.rows(), cols: m.cols() });
    }
    if b.rows() != m.rows() {
        return Err(Error::DimensionMismatch(format!(
            "right-hand side has {} rows, matrix has {}",
            b.rows(),
            m.rows()
        )));
    }
    solve_rational_general(&m.to_rational(), b)
}

/// Gauss–Jordan over ℚ.
pub fn solve_rational_general(m: &RatMatrix, b: &RatMatrix) -> Result<RatMatrix> {
    let n = m.rows();
    let k = b.cols();
    let mut a = m.clone();
    let mut x = b.clone();
    for c in 0..n {
        let p = (c..n).find(|&i| !a[(i, c)].is_zero()).ok_or(Error::SingularMatrix)?;
        a.swap_rows(c, p);
        x.swap_rows(c, p);
        let inv = a[(c, c)].recip();
        for j in 0..n {
            a[(c, j)] = &a[(c, j)] * &inv;
        }
        for j in 0..k {
            x[(c, j)] = &x[(c, j)] * &inv;
        }
        for i in 0..n {
            if i == c || a[(i, c)].is_zero() {
                continue;
            }
            let f = a[(i, c)].clone();
            for j in 0..n {
                let d = &f * &a[(c, j)];
                a[(i, j)] -= d;
            }
            for j in 0..k {
                let d = &f * &x[(c, j)];
                x[(i, j)] -= d;
            }
        }
    }
    Ok(x)
}

pub fn inverse_rational(m: &IntMatrix) -> Result<RatMatrix> {
    solve_rational(m, &RatMatrix::identity(m.rows()))
}

pub fn inverse_rational_general(m: &RatMatrix) -> Result<RatMatrix> {
    if !m.is_square() {
        return Err(Error::NonSquare { rows: m.rows(), cols: m.cols() });
    }
    solve_rational_general(m, &RatMatrix::identity(m.rows()))
}

/// Scales a rational row to a primitive integer row with the same direction
/// (positive multiple). Zero rows map to zero.
pub fn primitive_integer_row(row: &[BigRational]) -> Vec<BigInt> {
    let den = row.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let ints: Vec<BigInt> = row.iter().map(|x| (x * BigRational::from_integer(den.clone())).to_integer()).collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if g.is_zero() {
        return ints;
    }
    ints.into_iter().map(|x| x / &g).collect()
}

/// Clears the denominators of a rational matrix: returns `(den, den·M)`.
pub fn clear_denominators(m: &RatMatrix) -> (BigInt, IntMatrix) {
    let den = m.common_denominator();
    let r = BigRational::from_integer(den.clone());
    (den, m.map(|x| (x * &r).to_integer()))
}
