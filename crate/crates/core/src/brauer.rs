//! Finite computations behind Brauer-group bounds: torsion orders from the
//! Kummer sequence, fixed subspaces of matrix groups over `𝔽_ℓ`,
//! Minkowski's bound for finite subgroups of `GL_n(ℤ)`, and exhaustive point
//! counts of small classical groups for Nori's inequality.
//!
//! Matrices act on row vectors, `x ↦ x·g`, as everywhere else in the crate.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Pow, ToPrimitive};

use crate::embeddings::SublatticeEmbedding;
use crate::error::{Error, Result};
use crate::lattice::Lattice;
use crate::linalg;
use crate::matrix::IntMatrix;

/// Ceiling on `ℓ^{n²}` for exhaustive scans.
pub const POINT_SCAN_LIMIT: u64 = 100_000_000;

/// A cohomology lattice `H` of rank `b₂` with an algebraic sublattice `N`
/// of rank `ρ`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CohomologyPair {
    pub h: Lattice,
    pub n: SublatticeEmbedding,
}

impl CohomologyPair {
    pub fn new(n: SublatticeEmbedding) -> Self {
        CohomologyPair { h: n.ambient().clone(), n }
    }

    pub fn b2(&self) -> usize {
        self.h.rank()
    }

    pub fn rho(&self) -> usize {
        self.n.rank()
    }
}

/// `H/N ≅ ℤ^{free_rank} ⊕ ⨁ ℤ/dᵢ`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuotientStructure {
    pub free_rank: usize,
    /// Nontrivial torsion invariant factors, each dividing the next.
    pub torsion: Vec<BigInt>,
}

pub fn quotient_structure(pair: &CohomologyPair) -> QuotientStructure {
    let factors = linalg::invariant_factors(pair.n.basis());
    QuotientStructure {
        free_rank: pair.b2() - factors.len(),
        torsion: factors.into_iter().filter(|d| !d.is_one()).collect(),
    }
}

fn check_prime(ell: u64) -> Result<()> {
    if ell < 2 || (2..).take_while(|p| p * p <= ell).any(|p| ell.is_multiple_of(p)) {
        return Err(Error::BadParameter(format!("{ell} is not prime")));
    }
    Ok(())
}

/// `|Br[ℓⁿ]| = |H / (N + ℓⁿH)|`, read off the Smith form of `[N; ℓⁿ·I]`.
pub fn brauer_torsion_order(pair: &CohomologyPair, ell: u64, n: u32) -> Result<BigInt> {
    check_prime(ell)?;
    if n == 0 {
        return Err(Error::BadParameter("n must be positive".into()));
    }
    let index = pair.n.saturation_index();
    if !index.is_one() {
        return Err(Error::NotSaturated(index.to_string()));
    }
    let b2 = pair.b2();
    let scaled = IntMatrix::identity(b2).map(|x| x * BigInt::from(ell).pow(n));
    let stacked = if pair.rho() == 0 { scaled } else { pair.n.basis().vstack(&scaled)? };
    Ok(linalg::invariant_factors(&stacked).iter().product())
}

/// `ℓ^{n(b₂−ρ)}`, the order predicted by `Br ⊗ ℤ_ℓ ≅ (ℚ_ℓ/ℤ_ℓ)^{b₂−ρ}`.
pub fn brauer_formula_order(b2: usize, rho: usize, ell: u64, n: u32) -> BigInt {
    BigInt::from(ell).pow(n * (b2 - rho) as u32)
}

/// Reduced row echelon form over `𝔽_p`, in place; returns the pivot
/// columns. Zero rows are dropped.
fn row_reduce_mod(m: &mut Vec<Vec<u64>>, p: u64) -> Vec<usize> {
    let cols = m.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(k) = (r..m.len()).find(|&i| m[i][c] != 0) else { continue };
        m.swap(r, k);
        let inv = inv_mod(m[r][c], p);
        for x in m[r].iter_mut() {
            *x = *x * inv % p;
        }
        for i in 0..m.len() {
            if i != r && m[i][c] != 0 {
                let f = m[i][c];
                for j in 0..cols {
                    m[i][j] = (m[i][j] + (p - f) * m[r][j]) % p;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    m.truncate(r);
    pivots
}

fn inv_mod(a: u64, p: u64) -> u64 {
    let e = i128::from(a).extended_gcd(&i128::from(p));
    e.x.rem_euclid(i128::from(p)) as u64
}

/// A subgroup of `GL_dim(𝔽_ℓ)` given by generators.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteMatrixGroupModL {
    ell: u64,
    dim: usize,
    generators: Vec<Vec<Vec<u64>>>,
}

impl FiniteMatrixGroupModL {
    /// Reduces integer generators mod `ℓ`; each must be invertible there.
    pub fn new(ell: u64, dim: usize, generators: &[IntMatrix]) -> Result<Self> {
        check_prime(ell)?;
        if ell >= 1 << 31 {
            return Err(Error::BadParameter(format!("ell = {ell} is too large")));
        }
        let modulus = BigInt::from(ell);
        let mut reduced = Vec::with_capacity(generators.len());
        for g in generators {
            if g.rows() != dim || g.cols() != dim {
                return Err(Error::DimensionMismatch(format!(
                    "generator is {}x{}, expected {dim}x{dim}",
                    g.rows(),
                    g.cols()
                )));
            }
            let rows: Vec<Vec<u64>> = g
                .iter_rows()
                .map(|r| r.iter().map(|x| x.mod_floor(&modulus).to_u64().expect("reduced")).collect())
                .collect();
            let mut work = rows.clone();
            if row_reduce_mod(&mut work, ell).len() != dim {
                return Err(Error::NotInvertible(ell));
            }
            reduced.push(rows);
        }
        Ok(FiniteMatrixGroupModL { ell, dim, generators: reduced })
    }

    pub fn ell(&self) -> u64 {
        self.ell
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn generators(&self) -> &[Vec<Vec<u64>>] {
        &self.generators
    }
}

/// Vectors fixed by every generator, as a reduced row echelon basis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FixedSubspace {
    pub dim: usize,
    pub basis: Vec<Vec<u64>>,
}

/// Solves `x·(g − 1) = 0` simultaneously for all generators over `𝔽_ℓ`.
pub fn fixed_subspace_mod_ell(group: &FiniteMatrixGroupModL) -> FixedSubspace {
    let (p, n) = (group.ell, group.dim);
    // Each generator contributes the rows of (g − 1)ᵀ; the fixed space is
    // their right kernel.
    let mut system: Vec<Vec<u64>> = Vec::new();
    for g in &group.generators {
        for j in 0..n {
            system.push((0..n).map(|i| (g[i][j] + if i == j { p - 1 } else { 0 }) % p).collect());
        }
    }
    let pivots = if system.is_empty() { Vec::new() } else { row_reduce_mod(&mut system, p) };
    let free: Vec<usize> = (0..n).filter(|c| !pivots.contains(c)).collect();
    let mut basis: Vec<Vec<u64>> = free
        .iter()
        .map(|&f| {
            let mut v = vec![0u64; n];
            v[f] = 1;
            for (r, &c) in pivots.iter().enumerate() {
                v[c] = (p - system[r][f]) % p;
            }
            v
        })
        .collect();
    row_reduce_mod(&mut basis, p);
    FixedSubspace { dim: basis.len(), basis }
}

/// Minkowski's bound `M(n) = ∏_p p^{Σ_k ⌊n / (p^k (p−1))⌋}`: the order of
/// every finite subgroup of `GL_n(ℤ)` divides it.
pub fn minkowski_bound(n: u64) -> Result<BigInt> {
    if n == 0 {
        return Err(Error::BadParameter("n must be positive".into()));
    }
    let mut m = BigInt::one();
    for p in (2..=n + 1).filter(|&p| check_prime(p).is_ok()) {
        let mut exponent = 0u64;
        let mut pk = 1u64;
        while pk * (p - 1) <= n {
            exponent += n / (pk * (p - 1));
            pk *= p;
        }
        m *= BigInt::from(p).pow(exponent as u32);
    }
    Ok(m)
}

/// `(ℓ−1)^dim ≤ count ≤ (ℓ+1)^dim`.
pub fn nori_sandwich_check(count: &BigInt, dim: u32, ell: u64) -> bool {
    let lo = BigInt::from(ell - 1).pow(dim);
    let hi = BigInt::from(ell + 1).pow(dim);
    &lo <= count && count <= &hi
}

/// Classical groups whose `𝔽_ℓ`-points can be counted exhaustively.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PointGroup {
    SpecialLinear,
    /// Preserves `J = diag([[0,1],[−1,0]], …)`; the size must be even.
    Symplectic,
    /// Preserves the Gram matrix of the lattice reduced mod `ℓ`.
    OrthogonalOf(Lattice),
}

/// Determinant mod `p` of a flat row-major `n×n` matrix.
fn det_mod(flat: &[u64], n: usize, p: u64) -> u64 {
    let mut m: Vec<Vec<u64>> = flat.chunks(n).map(<[u64]>::to_vec).collect();
    let mut det = 1u64;
    for c in 0..n {
        let Some(k) = (c..n).find(|&i| m[i][c] != 0) else { return 0 };
        if k != c {
            m.swap(k, c);
            det = (p - det) % p;
        }
        det = det * m[c][c] % p;
        let inv = inv_mod(m[c][c], p);
        for i in c + 1..n {
            let f = m[i][c] * inv % p;
            if f != 0 {
                for j in c..n {
                    m[i][j] = (m[i][j] + (p - f) * m[c][j]) % p;
                }
            }
        }
    }
    det
}

/// `gᵀ·Q·g == Q` over `𝔽_p` for a flat row-major `g`.
fn preserves(g: &[u64], q: &[Vec<u64>], n: usize, p: u64) -> bool {
    (0..n).all(|i| {
        (0..n).all(|j| {
            let mut s = 0u64;
            for a in 0..n {
                let gi = g[a * n + i];
                if gi == 0 {
                    continue;
                }
                for b in 0..n {
                    s = (s + gi * q[a][b] % p * g[b * n + j]) % p;
                }
            }
            s == q[i][j]
        })
    })
}

/// Number of `n×n` matrices over `𝔽_ℓ` in the given group.
pub fn brute_force_points(group: &PointGroup, n: usize, ell: u64) -> Result<u64> {
    check_prime(ell)?;
    let cells = (n * n) as u32;
    let total = u128::from(ell).checked_pow(cells).unwrap_or(u128::MAX);
    if total > u128::from(POINT_SCAN_LIMIT) {
        return Err(Error::TooLarge { order: total, cap: POINT_SCAN_LIMIT });
    }
    let form: Option<Vec<Vec<u64>>> = match group {
        PointGroup::SpecialLinear => None,
        PointGroup::Symplectic => {
            if !n.is_multiple_of(2) {
                return Err(Error::BadParameter("symplectic groups need even size".into()));
            }
            let mut j = vec![vec![0u64; n]; n];
            for k in (0..n).step_by(2) {
                j[k][k + 1] = 1;
                j[k + 1][k] = ell - 1;
            }
            Some(j)
        }
        PointGroup::OrthogonalOf(lattice) => {
            if lattice.rank() != n {
                return Err(Error::DimensionMismatch(format!("lattice has rank {}, size is {n}", lattice.rank())));
            }
            let modulus = BigInt::from(ell);
            Some(
                lattice
                    .gram()
                    .iter_rows()
                    .map(|r| r.iter().map(|x| x.mod_floor(&modulus).to_u64().expect("reduced")).collect())
                    .collect(),
            )
        }
    };
    let mut g = vec![0u64; n * n];
    let mut count = 0u64;
    loop {
        let member = match &form {
            None => det_mod(&g, n, ell) == 1,
            Some(q) => preserves(&g, q, n, ell),
        };
        if member {
            count += 1;
        }
        // Odometer step.
        let mut k = 0;
        loop {
            if k == g.len() {
                return Ok(count);
            }
            g[k] += 1;
            if g[k] < ell {
                break;
            }
            g[k] = 0;
            k += 1;
        }
    }
}

/// `|SL₂(𝔽_ℓ)| = |Sp₂(𝔽_ℓ)| = ℓ³ − ℓ`.
pub fn sl2_order(ell: u64) -> BigInt {
    let l = BigInt::from(ell);
    &l * &l * &l - &l
}
