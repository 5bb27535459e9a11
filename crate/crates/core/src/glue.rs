//! Overlattices `L ⊂ M ⊂ L^∨` from isotropic subgroups of the discriminant
//! form, and enumeration of reduced even binary definite forms.

use std::collections::{BTreeSet, HashSet};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::discriminant::{DiscriminantForm, FiniteForm};
use crate::error::{Error, Result};
use crate::lattice::Lattice;
use crate::limits::Limits;
use crate::linalg;
use crate::matrix::{IntMatrix, RatMatrix};

/// A subgroup of `A_L` given by dual-lattice lifts of its generators.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GlueSubgroup {
    base: Lattice,
    /// Rows in `L`-coordinates; each lies in `L^∨`.
    generators: RatMatrix,
    order: u64,
}

impl GlueSubgroup {
    /// Wraps explicit glue vectors. The order is recomputed from the span.
    pub fn new(base: Lattice, generators: RatMatrix, limits: &Limits) -> Result<Self> {
        if generators.rows() > 0 && generators.cols() != base.rank() {
            return Err(Error::DimensionMismatch("glue vectors must have the lattice rank".into()));
        }
        let form = DiscriminantForm::of(&base)?;
        let fin = form.finite(limits)?;
        let gens = generators
            .iter_rows()
            .map(|r| {
                let c = form.group().coordinates(r)?;
                Ok(c.iter().map(|x| x.to_u64().expect("reduced coordinate")).collect())
            })
            .collect::<Result<Vec<Vec<u64>>>>()?;
        let order = fin.span(&gens).len() as u64;
        let generators = if generators.rows() == 0 { RatMatrix::zeros(0, base.rank()) } else { generators };
        Ok(GlueSubgroup { base, generators, order })
    }

    pub fn base(&self) -> &Lattice {
        &self.base
    }

    pub fn generators(&self) -> &RatMatrix {
        &self.generators
    }

    /// `|G|`
    pub fn order(&self) -> u64 {
        self.order
    }
}

/// An overlattice with its glue and a basis in base coordinates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Overlattice {
    pub glue: GlueSubgroup,
    /// Rows span `M` inside `L ⊗ ℚ`, in `L`-coordinates.
    pub basis: RatMatrix,
    pub lattice: Lattice,
}

/// Canonical generating set: greedily keep elements (in index order) that
/// enlarge the span.
fn canonical_generators(fin: &FiniteForm, members: &[u64]) -> Vec<Vec<u64>> {
    let mut gens: Vec<Vec<u64>> = Vec::new();
    let mut span: HashSet<u64> = [0].into_iter().collect();
    for &idx in members {
        if span.contains(&idx) {
            continue;
        }
        gens.push(fin.element(idx));
        span = fin.span(&gens).into_iter().collect();
        if span.len() == members.len() {
            break;
        }
    }
    gens
}

/// All subgroups of `A_L` on which `q ≡ 0 (mod 2ℤ)`, trivial one included,
/// ordered by order and then by their sorted element indices.
pub fn isotropic_subgroups(form: &DiscriminantForm, limits: &Limits) -> Result<Vec<GlueSubgroup>> {
    let fin = form.finite(limits)?;
    let isotropic: Vec<Vec<u64>> = fin.elements().filter(|x| !fin.is_zero(x) && fin.q(x) == 0).collect();
    let mut found: BTreeSet<(usize, Vec<u64>)> = BTreeSet::new();
    let mut stack: Vec<(Vec<Vec<u64>>, Vec<u64>)> = vec![(Vec::new(), vec![0])];
    found.insert((1, vec![0]));
    while let Some((gens, members)) = stack.pop() {
        let member_set: HashSet<u64> = members.iter().copied().collect();
        for x in &isotropic {
            if member_set.contains(&fin.index(x)) {
                continue;
            }
            // q vanishes on H + ⟨x⟩ iff additionally b(x, H) = 0.
            if gens.iter().any(|g| fin.b(x, g) != 0) {
                continue;
            }
            let mut next = gens.clone();
            next.push(x.clone());
            let span = fin.span(&next);
            if found.insert((span.len(), span.clone())) {
                stack.push((next, span));
            }
        }
    }
    let group = form.group();
    found
        .into_iter()
        .map(|(order, members)| {
            let gens = canonical_generators(&fin, &members);
            let rows: Vec<Vec<BigRational>> =
                gens.iter().map(|g| group.lift(&g.iter().map(|&c| BigInt::from(c)).collect::<Vec<_>>())).collect();
            let generators = if rows.is_empty() {
                RatMatrix::zeros(0, group.lattice().rank())
            } else {
                RatMatrix::from_rows(&rows)?
            };
            Ok(GlueSubgroup { base: group.lattice().clone(), generators, order: order as u64 })
        })
        .collect()
}

/// The lattice spanned by `L` and the glue vectors.
pub fn overlattice_from_glue(glue: &GlueSubgroup) -> Result<Overlattice> {
    let base = &glue.base;
    let n = base.rank();
    let spanning = RatMatrix::identity(n).vstack(&glue.generators)?;
    let (den, ints) = linalg::clear_denominators(&spanning);
    let h = linalg::nonzero_rows(&linalg::hermite_normal_form(&ints).0);
    let d = BigRational::from_integer(den);
    let basis = h.to_rational().map(|x| x / &d);
    let gram = base.gram().to_rational().congruence(&basis)?;
    let gram = gram.to_integer().ok_or_else(|| Error::NotIsotropic("glued form is not integral".into()))?;
    let lattice = Lattice::new(gram)?;
    if !lattice.is_even() {
        return Err(Error::NotIsotropic("glued form is odd".into()));
    }
    Ok(Overlattice { glue: glue.clone(), basis, lattice })
}

/// One even overlattice per isotropic subgroup; no isometry deduplication.
pub fn even_overlattices(lattice: &Lattice, limits: &Limits) -> Result<Vec<Overlattice>> {
    let form = DiscriminantForm::of(lattice)?;
    isotropic_subgroups(&form, limits)?.iter().map(overlattice_from_glue).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DefiniteSign {
    Positive,
    Negative,
}

/// Reduced even binary definite forms of determinant `det`, one per
/// isometry class.
///
/// For the positive form `[[a, b], [b, c]]` (`a`, `c` even) the reduction
/// conditions are `a ≤ c`, `-a < 2b ≤ a`, and `b ≥ 0` when `a = c`.
/// Negative-definite forms are the negatives of positive ones.
pub fn enumerate_even_binary(det: &BigInt, sign: DefiniteSign, limits: &Limits) -> Result<Vec<Lattice>> {
    if det.is_zero() {
        return Err(Error::BadParameter("determinant must be nonzero".into()));
    }
    if det.abs() > BigInt::from(limits.det_cap) {
        return Err(Error::BadParameter(format!("|det| = {} exceeds the cap {}", det.abs(), limits.det_cap)));
    }
    if det.is_negative() {
        // Definite binary forms have positive determinant.
        return Ok(Vec::new());
    }
    let mut out = Vec::new();
    let mut a = BigInt::from(2);
    while BigInt::from(3) * &a * &a <= BigInt::from(4) * det {
        // a is even, so -a < 2b means b > -a/2.
        let mut b: BigInt = BigInt::from(1) - &a / BigInt::from(2);
        while BigInt::from(2) * &b <= a {
            let num = det + &b * &b;
            if num.is_multiple_of(&a) {
                let c = &num / &a;
                if c.is_even() && c >= a && (c != a || !b.is_negative()) {
                    let gram = IntMatrix::from_rows(&[vec![a.clone(), b.clone()], vec![b.clone(), c.clone()]])?;
                    let gram = match sign {
                        DefiniteSign::Positive => gram,
                        DefiniteSign::Negative => -&gram,
                    };
                    out.push(Lattice::new(gram)?);
                }
            }
            b += 1;
        }
        a += 2;
    }
    Ok(out)
}
