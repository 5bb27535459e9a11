//! Exact enumeration of vectors of a given norm in a definite lattice.
//!
//! The positive-definite form is written as a sum of squares
//! `Q(x) = Σᵢ dᵢ (xᵢ + Σ_{j<i} mᵢⱼ xⱼ)²` with rational `dᵢ > 0`, so a
//! depth-first search that fixes `x₀, x₁, …` in that order visits vectors
//! in lexicographic order. Every bound is an exact rational comparison.

use std::ops::ControlFlow;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::lattice::Lattice;
use crate::matrix::RatMatrix;

/// Sum-of-squares decomposition of a positive-definite Gram matrix.
struct SquareDecomposition {
    diag: Vec<BigRational>,
    /// `mix[i][j]` for `j < i`.
    mix: Vec<Vec<BigRational>>,
}

impl SquareDecomposition {
    fn new(gram: &RatMatrix) -> Self {
        let n = gram.rows();
        let mut a = gram.clone();
        let mut diag = vec![BigRational::zero(); n];
        let mut mix = vec![Vec::new(); n];
        for i in (0..n).rev() {
            let p = a[(i, i)].clone();
            debug_assert!(p.is_positive());
            mix[i] = (0..i).map(|j| &a[(i, j)] / &p).collect();
            for j in 0..i {
                for k in 0..i {
                    let d = &a[(j, i)] * &a[(i, k)] / &p;
                    a[(j, k)] -= d;
                }
            }
            diag[i] = p;
        }
        SquareDecomposition { diag, mix }
    }
}

/// Integer interval `{x : (x + c)² ≤ s}`, `s ≥ 0`.
fn integer_window(c: &BigRational, s: &BigRational) -> Option<(i64, i64)> {
    let fits = |x: i64| {
        let t = BigRational::from_integer(BigInt::from(x)) + c;
        &(&t * &t) <= s
    };
    let centre = (-c).floor().to_integer().to_i64().expect("search window fits in i64");
    let anchor = if fits(centre) {
        centre
    } else if fits(centre + 1) {
        centre + 1
    } else {
        return None;
    };
    let cf = c.to_f64().unwrap_or(0.0);
    let rf = s.to_f64().unwrap_or(0.0).sqrt();
    let mut lo = ((-cf - rf).floor() as i64).min(anchor);
    if fits(lo) {
        while fits(lo - 1) {
            lo -= 1;
        }
    } else {
        while !fits(lo) {
            lo += 1;
        }
    }
    let mut hi = ((-cf + rf).ceil() as i64).max(anchor);
    if fits(hi) {
        while fits(hi + 1) {
            hi += 1;
        }
    } else {
        while !fits(hi) {
            hi -= 1;
        }
    }
    Some((lo, hi))
}

/// Sign of a definite lattice: `1` for positive, `-1` for negative definite.
pub fn definite_sign(lattice: &Lattice) -> Result<i8> {
    let sig = lattice.signature();
    if sig.minus == 0 {
        Ok(1)
    } else if sig.plus == 0 {
        Ok(-1)
    } else {
        Err(Error::NotDefinite)
    }
}

/// Calls `visit` on every vector with `ψ(v,v) = norm`, in lexicographic order,
/// until it returns `Break`.
pub fn for_each_vector_of_norm<F>(lattice: &Lattice, norm: &BigInt, mut visit: F) -> Result<()>
where
    F: FnMut(&[i64]) -> ControlFlow<()>,
{
    let sign = definite_sign(lattice)?;
    let target = if sign > 0 { norm.clone() } else { -norm };
    if target.is_negative() {
        return Ok(());
    }
    let gram = if sign > 0 { lattice.gram().to_rational() } else { (-lattice.gram()).to_rational() };
    let dec = SquareDecomposition::new(&gram);
    let n = lattice.rank();
    let mut x = vec![0i64; n];
    let _ = search(&dec, 0, BigRational::from_integer(target), &mut x, &mut visit);
    Ok(())
}

fn search<F>(dec: &SquareDecomposition, i: usize, budget: BigRational, x: &mut [i64], visit: &mut F) -> ControlFlow<()>
where
    F: FnMut(&[i64]) -> ControlFlow<()>,
{
    if i == x.len() {
        return if budget.is_zero() { visit(x) } else { ControlFlow::Continue(()) };
    }
    let c: BigRational = dec.mix[i]
        .iter()
        .zip(x.iter())
        .filter(|(_, &xj)| xj != 0)
        .map(|(m, &xj)| m * BigRational::from_integer(BigInt::from(xj)))
        .sum();
    let s = &budget / &dec.diag[i];
    let Some((lo, hi)) = integer_window(&c, &s) else {
        return ControlFlow::Continue(());
    };
    for xi in lo..=hi {
        let t = BigRational::from_integer(BigInt::from(xi)) + &c;
        let rest = &budget - &dec.diag[i] * &t * &t;
        x[i] = xi;
        search(dec, i + 1, rest, x, visit)?;
    }
    x[i] = 0;
    ControlFlow::Continue(())
}

fn to_big(v: &[i64]) -> Vec<BigInt> {
    v.iter().map(|&x| BigInt::from(x)).collect()
}

/// All vectors of the given norm, lexicographically ordered.
pub fn vectors_of_norm(lattice: &Lattice, norm: &BigInt) -> Result<Vec<Vec<BigInt>>> {
    let mut out = Vec::new();
    for_each_vector_of_norm(lattice, norm, |v| {
        out.push(to_big(v));
        ControlFlow::Continue(())
    })?;
    Ok(out)
}

pub fn count_vectors_of_norm(lattice: &Lattice, norm: &BigInt) -> Result<usize> {
    let mut count = 0;
    for_each_vector_of_norm(lattice, norm, |_| {
        count += 1;
        ControlFlow::Continue(())
    })?;
    Ok(count)
}

/// The lexicographically least primitive vector `v` with `ψ(v,v) = norm`.
pub fn find_primitive_vector(lattice: &Lattice, norm: &BigInt) -> Result<Vec<BigInt>> {
    definite_sign(lattice)?;
    if lattice.is_even() && norm.is_odd() {
        return Err(Error::ParityViolation(norm.to_string()));
    }
    let mut found = None;
    for_each_vector_of_norm(lattice, norm, |v| {
        let g = v.iter().fold(0i64, |acc, &x| acc.gcd(&x));
        if g == 1 {
            found = Some(to_big(v));
            ControlFlow::Break(())
        } else {
            ControlFlow::Continue(())
        }
    })?;
    found.ok_or_else(|| Error::NotRepresented(norm.to_string()))
}

/// Convenience check used by tests and callers that hold a candidate.
pub fn is_primitive_vector(v: &[BigInt]) -> bool {
    v.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x)).is_one()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn e8_roots() {
        let e8m = Lattice::e8_minus();
        let roots = vectors_of_norm(&e8m, &BigInt::from(-2)).unwrap();
        assert_eq!(roots.len(), 240);
        let v = find_primitive_vector(&e8m, &BigInt::from(-2)).unwrap();
        assert_eq!(v, roots[0]);
        assert_eq!(e8m.inner(&v, &v), BigInt::from(-2));
    }

    #[test]
    fn e8_norm_four_count() {
        // 240·σ₃(2) = 2160
        assert_eq!(count_vectors_of_norm(&Lattice::e8(), &BigInt::from(4)).unwrap(), 2160);
    }

    #[test]
    fn error_paths() {
        let e8m = Lattice::e8_minus();
        assert!(matches!(find_primitive_vector(&e8m, &BigInt::from(-3)), Err(Error::ParityViolation(_))));
        let g = Lattice::gen(-2).unwrap();
        assert!(matches!(find_primitive_vector(&g, &BigInt::from(-8)), Err(Error::NotRepresented(_))));
        assert_eq!(
            vectors_of_norm(&g, &BigInt::from(-8)).unwrap(),
            vec![vec![BigInt::from(-2)], vec![BigInt::from(2)]]
        );
        assert!(matches!(find_primitive_vector(&Lattice::u(), &BigInt::from(2)), Err(Error::NotDefinite)));
    }

    #[test]
    fn windows() {
        let half = BigRational::new(1.into(), 2.into());
        assert_eq!(integer_window(&half, &BigRational::from_integer(4.into())), Some((-2, 1)));
        assert_eq!(integer_window(&half, &BigRational::new(1.into(), 8.into())), None);
        assert_eq!(integer_window(&BigRational::zero(), &BigRational::zero()), Some((0, 0)));
    }
}
