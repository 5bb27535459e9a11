//! Sublattices of a fixed ambient lattice: saturation, orthogonal
//! complements, the existence criterion for primitive embeddings into even
//! unimodular lattices, the explicit embedding `Λ_{2d} ↪ Λ_#`, and extension
//! of isometries across it.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed};

use crate::discriminant::DiscriminantGroup;
use crate::error::{Error, Result};
use crate::lattice::{Lattice, Signature};
use crate::linalg;
use crate::matrix::{IntMatrix, RatMatrix};
use crate::vectors;

pub use crate::vectors::find_primitive_vector;

/// A sublattice given by integer basis rows in ambient coordinates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SublatticeEmbedding {
    ambient: Lattice,
    basis: IntMatrix,
}

impl SublatticeEmbedding {
    /// Checks that the rows are independent and have the ambient width.
    pub fn new(ambient: Lattice, basis: IntMatrix) -> Result<Self> {
        let basis = if basis.rows() == 0 { IntMatrix::zeros(0, ambient.rank()) } else { basis };
        if basis.cols() != ambient.rank() {
            return Err(Error::DimensionMismatch(format!(
                "basis has {} columns, ambient rank is {}",
                basis.cols(),
                ambient.rank()
            )));
        }
        if linalg::rank(&basis) != basis.rows() {
            return Err(Error::BadParameter("basis rows are linearly dependent".into()));
        }
        Ok(SublatticeEmbedding { ambient, basis })
    }

    pub fn ambient(&self) -> &Lattice {
        &self.ambient
    }

    pub fn basis(&self) -> &IntMatrix {
        &self.basis
    }

    pub fn rank(&self) -> usize {
        self.basis.rows()
    }

    /// `B·G·Bᵀ`
    pub fn induced_gram(&self) -> IntMatrix {
        self.ambient.gram().congruence(&self.basis).expect("widths checked")
    }

    /// The sublattice as an abstract lattice; fails when the restricted form
    /// is degenerate.
    pub fn induced_lattice(&self) -> Result<Lattice> {
        Lattice::new(self.induced_gram())
    }

    /// `[sat : sub]`, the product of the invariant factors of the basis.
    pub fn saturation_index(&self) -> BigInt {
        linalg::invariant_factors(&self.basis).iter().product()
    }

    pub fn is_primitive(&self) -> bool {
        self.saturation_index().is_one()
    }

    /// `span_ℚ(basis) ∩ ambient`, in row Hermite form.
    pub fn saturate(&self) -> SublatticeEmbedding {
        let annihilator = linalg::kernel_basis(&self.basis.transpose());
        let sat = linalg::kernel_basis(&annihilator.transpose());
        SublatticeEmbedding { ambient: self.ambient.clone(), basis: sat }
    }

    /// `{x ∈ ambient : ψ(x, s) = 0 for all s in the sublattice}`; primitive.
    pub fn orthogonal_complement(&self) -> SublatticeEmbedding {
        let pairing = self.ambient.gram().try_mul(&self.basis.transpose()).expect("widths checked");
        SublatticeEmbedding { ambient: self.ambient.clone(), basis: linalg::kernel_basis(&pairing) }
    }

    /// Basis rows in row Hermite form; equal sublattices give equal bases.
    pub fn normalized(&self) -> SublatticeEmbedding {
        let h = linalg::nonzero_rows(&linalg::hermite_normal_form(&self.basis).0);
        let h = if h.rows() == 0 { IntMatrix::zeros(0, self.ambient.rank()) } else { h };
        SublatticeEmbedding { ambient: self.ambient.clone(), basis: h }
    }

    /// True when every row of `other` lies in this sublattice.
    pub fn contains(&self, other: &SublatticeEmbedding) -> bool {
        let stacked = self.basis.vstack(&other.basis).expect("same ambient");
        let h = linalg::nonzero_rows(&linalg::hermite_normal_form(&stacked).0);
        h == linalg::nonzero_rows(&linalg::hermite_normal_form(&self.basis).0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum NikulinCondition {
    /// `n₊ − n₋ ≡ 0 (mod 8)`
    I,
    /// `n₊ ≥ m₊` and `n₋ ≥ m₋`
    II,
    /// `(n₊ + n₋) − (m₊ + m₋) ≥ s(A)`
    III,
}

impl fmt::Display for NikulinCondition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            NikulinCondition::I => "i",
            NikulinCondition::II => "ii",
            NikulinCondition::III => "iii",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NikulinOutcome {
    /// A primitive embedding into the even unimodular target exists.
    Guaranteed,
    /// The sufficient criterion does not apply; existence is undecided.
    Unknown,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NikulinVerdict {
    pub outcome: NikulinOutcome,
    pub failed_conditions: Vec<NikulinCondition>,
}

/// Sufficient criterion for a primitive embedding of an even lattice into an
/// even unimodular lattice of signature `target`.
pub fn nikulin_check(lattice: &Lattice, target: Signature) -> Result<NikulinVerdict> {
    if !lattice.is_even() {
        return Err(Error::OddLattice);
    }
    let m = lattice.signature();
    let s = DiscriminantGroup::of(lattice).min_generators();
    let (np, nm) = (target.plus as i64, target.minus as i64);
    let mut failed = Vec::new();
    if (np - nm).rem_euclid(8) != 0 {
        failed.push(NikulinCondition::I);
    }
    if target.plus < m.plus || target.minus < m.minus {
        failed.push(NikulinCondition::II);
    }
    if (np + nm) - (m.rank() as i64) < s as i64 {
        failed.push(NikulinCondition::III);
    }
    let outcome = if failed.is_empty() { NikulinOutcome::Guaranteed } else { NikulinOutcome::Unknown };
    Ok(NikulinVerdict { outcome, failed_conditions: failed })
}

/// Offset of the third `E8(-1)` summand inside `Λ_#`.
const SHARP_THIRD_E8: usize = 16;
/// Offset of the `U²` block inside `Λ_#`.
const SHARP_U_BLOCK: usize = 24;

/// The primitive embedding `Λ_{2d} ↪ Λ_# = E8(-1)³ ⊕ U²`.
///
/// The two `E8(-1)` and the two `U` summands of `Λ_{2d}` go identically onto
/// the first two `E8(-1)` and the `U²` block of `Λ_#`; the generator of
/// `⟨-2d⟩` goes to the lexicographically least primitive vector of norm
/// `-2d` in the third `E8(-1)` (root-basis coordinates, see
/// [`crate::lattice::e8_gram`]).
pub fn build_iota2d(d: u64) -> Result<SublatticeEmbedding> {
    if d == 0 {
        return Err(Error::BadParameter("d must be >= 1".into()));
    }
    let v = vectors::find_primitive_vector(&Lattice::e8_minus(), &BigInt::from(-2 * d as i128))?;
    let mut basis = IntMatrix::zeros(21, 28);
    for i in 0..16 {
        basis[(i, i)] = BigInt::one();
    }
    for i in 0..4 {
        basis[(16 + i, SHARP_U_BLOCK + i)] = BigInt::one();
    }
    for (j, vj) in v.into_iter().enumerate() {
        basis[(20, SHARP_THIRD_E8 + j)] = vj;
    }
    SublatticeEmbedding::new(Lattice::lambda_sharp(), basis)
}

fn check_square(lattice: &Lattice, g: &IntMatrix) -> Result<()> {
    if !g.is_square() || g.rows() != lattice.rank() {
        return Err(Error::DimensionMismatch(format!(
            "{}x{} matrix on a rank {} lattice",
            g.rows(),
            g.cols(),
            lattice.rank()
        )));
    }
    Ok(())
}

/// `g·G·gᵀ = G` with `det g = ±1`; `g` acts on row vectors.
pub fn is_isometry(lattice: &Lattice, g: &IntMatrix) -> Result<bool> {
    check_square(lattice, g)?;
    if !linalg::det_exact(g)?.abs().is_one() {
        return Ok(false);
    }
    Ok(&lattice.gram().congruence(g)? == lattice.gram())
}

/// Isometry acting trivially on the discriminant group.
pub fn in_tilde_o(lattice: &Lattice, g: &IntMatrix) -> Result<bool> {
    if !is_isometry(lattice, g)? {
        return Ok(false);
    }
    Ok(acts_trivially_on_discriminant(lattice, g))
}

fn acts_trivially_on_discriminant(lattice: &Lattice, g: &IntMatrix) -> bool {
    let group = DiscriminantGroup::of(lattice);
    let gq = g.to_rational();
    let trivial = group.generator_lifts().iter_rows().all(|x| {
        let image = gq.vec_mul(x);
        image.iter().zip(x).all(|(a, b)| (a - b).is_integer())
    });
    trivial
}

/// Extends an isometry `g` of the embedded lattice to the ambient lattice by
/// the identity on the orthogonal complement.
pub fn extend_isometry(embedding: &SublatticeEmbedding, g: &IntMatrix) -> Result<IntMatrix> {
    let sub = embedding.induced_lattice()?;
    check_square(&sub, g)?;
    if !is_isometry(&sub, g)? {
        return Err(Error::NotAnIsometry);
    }
    if !linalg::det_exact(g)?.is_one() {
        return Err(Error::NotSpecialOrthogonal);
    }
    if !acts_trivially_on_discriminant(&sub, g) {
        return Err(Error::NotInTildeO);
    }
    let complement = embedding.orthogonal_complement();
    let frame = embedding.basis().vstack(complement.basis())?;
    let action = g.block_diag(&IntMatrix::identity(complement.rank()));
    let frame_q = frame.to_rational();
    let frame_inv = linalg::inverse_rational_general(&frame_q)?;
    let candidate: RatMatrix = &(&frame_inv * &action.to_rational()) * &frame_q;
    let r = candidate.to_integer().ok_or(Error::NotInTildeO)?;
    if !is_isometry(embedding.ambient(), &r)? {
        return Err(Error::NotAnIsometry);
    }
    Ok(r)
}

/// Primitive vector check in ambient coordinates.
pub fn is_primitive_vector(v: &[BigInt]) -> bool {
    vectors::is_primitive_vector(v)
}
