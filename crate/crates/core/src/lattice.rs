//! Non-degenerate integral lattices given by their Gram matrices, and the
//! named lattices used throughout the crate.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::linalg;
use crate::matrix::{IntMatrix, RatMatrix};

/// Counts of positive and negative squares of a real diagonalization.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Signature {
    pub plus: usize,
    pub minus: usize,
}

impl Signature {
    pub fn new(plus: usize, minus: usize) -> Self {
        Signature { plus, minus }
    }

    pub fn rank(&self) -> usize {
        self.plus + self.minus
    }
}

impl fmt::Display for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.plus, self.minus)
    }
}

/// A free ℤ-module with a non-degenerate symmetric integral bilinear form.
#[derive(Clone, PartialEq, Eq)]
pub struct Lattice {
    gram: IntMatrix,
    label: Option<String>,
}

impl fmt::Debug for Lattice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.label {
            Some(l) => write!(f, "Lattice({l}: {:?})", self.gram),
            None => write!(f, "Lattice({:?})", self.gram),
        }
    }
}

/// The named lattices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Standard {
    /// Hyperbolic plane `[[0,1],[1,0]]`.
    U,
    /// Positive-definite E8 in the root basis; see [`e8_gram`].
    E8,
    /// Positive-definite root lattice `A_n` (Cartan matrix), `n ≥ 1`.
    A(usize),
    /// Rank one lattice `⟨k⟩`, `k ≠ 0`.
    Gen(BigInt),
    /// `E8(-1)² ⊕ U² ⊕ ⟨-2d⟩`, `d ≥ 1`.
    Lambda2d(BigInt),
    /// `E8(-1)³ ⊕ U²`, the even unimodular lattice of signature (2,26).
    LambdaSharp,
    /// `E8(-1)² ⊕ U³`, the K3 lattice.
    LambdaK3,
}

/// Gram matrix of E8 in the simple-root basis, Bourbaki numbering.
///
/// Roots 1‥8 are coordinates 0‥7. The Dynkin diagram is the chain
/// 1–3–4–5–6–7–8 with root 2 attached to root 4; the Gram matrix has 2 on the
/// diagonal and −1 for every edge. Its determinant is +1. This basis is
/// frozen: embeddings and enumeration orders are stated in it.
pub fn e8_gram() -> IntMatrix {
    const EDGES: [(usize, usize); 7] = [(0, 2), (2, 3), (3, 4), (4, 5), (5, 6), (6, 7), (1, 3)];
    let mut g = IntMatrix::zeros(8, 8);
    for i in 0..8 {
        g[(i, i)] = BigInt::from(2);
    }
    for (a, b) in EDGES {
        g[(a, b)] = BigInt::from(-1);
        g[(b, a)] = BigInt::from(-1);
    }
    g
}

fn a_n_gram(n: usize) -> IntMatrix {
    let mut g = IntMatrix::zeros(n, n);
    for i in 0..n {
        g[(i, i)] = BigInt::from(2);
        if i + 1 < n {
            g[(i, i + 1)] = BigInt::from(-1);
            g[(i + 1, i)] = BigInt::from(-1);
        }
    }
    g
}

impl Lattice {
    /// Validates a Gram matrix: square, symmetric, non-degenerate.
    pub fn new(gram: IntMatrix) -> Result<Self> {
        if !gram.is_square() {
            return Err(Error::NonSquare { rows: gram.rows(), cols: gram.cols() });
        }
        if !gram.is_symmetric() {
            return Err(Error::NotSymmetric);
        }
        if linalg::det_exact(&gram)?.is_zero() {
            return Err(Error::Degenerate);
        }
        Ok(Lattice { gram, label: None })
    }

    pub fn from_i64(rows: &[&[i64]]) -> Result<Self> {
        Self::new(IntMatrix::from_i64(rows))
    }

    /// The zero lattice; the identity for `direct_sum`.
    pub fn zero() -> Self {
        Lattice { gram: IntMatrix::zeros(0, 0), label: None }
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = Some(label.into());
        self
    }

    pub fn label(&self) -> Option<&str> {
        self.label.as_deref()
    }

    pub fn gram(&self) -> &IntMatrix {
        &self.gram
    }

    pub fn rank(&self) -> usize {
        self.gram.rows()
    }

    pub fn standard(which: &Standard) -> Result<Self> {
        let lattice = match which {
            Standard::U => Lattice::from_i64(&[&[0, 1], &[1, 0]])?.with_label("U"),
            Standard::E8 => Lattice::new(e8_gram())?.with_label("E8"),
            Standard::A(n) => {
                if *n == 0 {
                    return Err(Error::BadParameter("A_n needs n >= 1".into()));
                }
                Lattice::new(a_n_gram(*n))?.with_label(format!("A{n}"))
            }
            Standard::Gen(k) => {
                if k.is_zero() {
                    return Err(Error::BadParameter("gen(k) needs k != 0".into()));
                }
                Lattice::new(IntMatrix::diagonal(std::slice::from_ref(k)))?.with_label(format!("gen({k})"))
            }
            Standard::Lambda2d(d) => {
                if !d.is_positive() {
                    return Err(Error::BadParameter(format!("Lambda2d needs d >= 1, got {d}")));
                }
                let e8m = Self::e8_minus();
                let u = Self::standard(&Standard::U)?;
                let tail = Self::standard(&Standard::Gen(-BigInt::from(2) * d))?;
                e8m.direct_sum(&e8m)
                    .direct_sum(&u)
                    .direct_sum(&u)
                    .direct_sum(&tail)
                    .with_label(format!("Lambda2d({d})"))
            }
            Standard::LambdaSharp => {
                let e8m = Self::e8_minus();
                let u = Self::standard(&Standard::U)?;
                e8m.direct_sum(&e8m).direct_sum(&e8m).direct_sum(&u).direct_sum(&u).with_label("LambdaSharp")
            }
            Standard::LambdaK3 => {
                let e8m = Self::e8_minus();
                let u = Self::standard(&Standard::U)?;
                e8m.direct_sum(&e8m).direct_sum(&u).direct_sum(&u).direct_sum(&u).with_label("LambdaK3")
            }
        };
        Ok(lattice)
    }

    pub fn u() -> Self {
        Self::standard(&Standard::U).expect("U is valid")
    }

    pub fn e8() -> Self {
        Self::standard(&Standard::E8).expect("E8 is valid")
    }

    /// `E8(-1)`
    pub fn e8_minus() -> Self {
        Self::e8().rescale(&BigInt::from(-1)).expect("nonzero scale").with_label("E8(-1)")
    }

    pub fn gen(k: i64) -> Result<Self> {
        Self::standard(&Standard::Gen(BigInt::from(k)))
    }

    pub fn lambda_2d(d: u64) -> Result<Self> {
        Self::standard(&Standard::Lambda2d(BigInt::from(d)))
    }

    pub fn lambda_sharp() -> Self {
        Self::standard(&Standard::LambdaSharp).expect("valid")
    }

    pub fn lambda_k3() -> Self {
        Self::standard(&Standard::LambdaK3).expect("valid")
    }

    /// Twist by `n`: the Gram matrix multiplied by `n`.
    pub fn rescale(&self, n: &BigInt) -> Result<Self> {
        if n.is_zero() {
            return Err(Error::BadParameter("rescale factor must be nonzero".into()));
        }
        Ok(Lattice { gram: self.gram.map(|x| x * n), label: None })
    }

    /// Orthogonal direct sum; block-diagonal Gram.
    pub fn direct_sum(&self, other: &Lattice) -> Lattice {
        Lattice { gram: self.gram.block_diag(&other.gram), label: None }
    }

    /// Direct sum of `k` copies.
    pub fn power(&self, k: usize) -> Lattice {
        (0..k).fold(Lattice::zero(), |acc, _| acc.direct_sum(self))
    }

    pub fn det(&self) -> BigInt {
        linalg::det_exact(&self.gram).expect("Gram is square")
    }

    pub fn is_even(&self) -> bool {
        (0..self.rank()).all(|i| self.gram[(i, i)].is_even())
    }

    pub fn is_unimodular(&self) -> bool {
        self.det().abs().is_one()
    }

    pub fn signature(&self) -> Signature {
        let (plus, minus, zero) = inertia(&self.gram.to_rational());
        debug_assert_eq!(zero, 0);
        Signature { plus, minus }
    }

    pub fn is_positive_definite(&self) -> bool {
        self.signature().minus == 0
    }

    pub fn is_negative_definite(&self) -> bool {
        self.signature().plus == 0
    }

    /// Basis of the dual lattice in coordinates of this lattice: the inverse
    /// Gram matrix.
    pub fn dual_basis(&self) -> RatMatrix {
        linalg::inverse_rational(&self.gram).expect("non-degenerate Gram")
    }

    /// `ψ(x, y)` for integer coordinate vectors.
    pub fn inner(&self, x: &[BigInt], y: &[BigInt]) -> BigInt {
        self.gram.bilinear(x, y)
    }

    /// `ψ(x, y)` for rational coordinate vectors.
    pub fn inner_rational(&self, x: &[BigRational], y: &[BigRational]) -> BigRational {
        let mut acc = BigRational::zero();
        for (i, xi) in x.iter().enumerate() {
            if xi.is_zero() {
                continue;
            }
            for (j, yj) in y.iter().enumerate() {
                let g = &self.gram[(i, j)];
                if g.is_zero() || yj.is_zero() {
                    continue;
                }
                acc += xi * yj * BigRational::from_integer(g.clone());
            }
        }
        acc
    }
}

/// Inertia `(plus, minus, zero)` of a symmetric rational matrix, by
/// simultaneous row/column reduction.
pub fn inertia(m: &RatMatrix) -> (usize, usize, usize) {
    assert!(m.is_square());
    let mut a = m.clone();
    let n = a.rows();
    let (mut plus, mut minus) = (0, 0);
    let mut k = 0;
    while k < n {
        let diag = (k..n).find(|&i| !a[(i, i)].is_zero());
        let p = match diag {
            Some(p) => p,
            None => {
                // All remaining diagonal entries vanish. An off-diagonal
                // a_ij ≠ 0 spans a hyperbolic block; adding row/col j to i
                // makes a_ii = 2·a_ij nonzero.
                let Some((i, j)) =
                    (k..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).find(|&(i, j)| !a[(i, j)].is_zero())
                else {
                    break;
                };
                for c in 0..n {
                    let v = a[(j, c)].clone();
                    a[(i, c)] += v;
                }
                for r in 0..n {
                    let v = a[(r, j)].clone();
                    a[(r, i)] += v;
                }
                i
            }
        };
        a.swap_rows(k, p);
        a.swap_cols(k, p);
        let pivot = a[(k, k)].clone();
        if pivot.is_positive() {
            plus += 1;
        } else {
            minus += 1;
        }
        for i in k + 1..n {
            if a[(i, k)].is_zero() {
                continue;
            }
            let f = &a[(i, k)] / &pivot;
            for j in k..n {
                let d = &f * &a[(k, j)];
                a[(i, j)] -= d;
            }
        }
        for i in k + 1..n {
            a[(k, i)] = BigRational::zero();
        }
        k += 1;
    }
    (plus, minus, n - plus - minus)
}
