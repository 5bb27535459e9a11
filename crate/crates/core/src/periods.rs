//! Period vectors with coordinates in an imaginary quadratic field, the
//! period-domain conditions, and the Néron–Severi / transcendental splitting
//! they induce.
//!
//! A period is stored as `ω = re + √D·im` with rational coordinate vectors
//! `re`, `im` and a squarefree `D < 0`; complex conjugation flips the sign of
//! `√D`. The algebraic classes are the lattice vectors orthogonal to both
//! `re` and `im`.

use std::fmt;
use std::ops::{Add, Mul};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::embeddings::SublatticeEmbedding;
use crate::error::{Error, Result};
use crate::lattice::Lattice;
use crate::linalg;
use crate::matrix::IntMatrix;

fn is_squarefree(n: &BigInt) -> bool {
    let n = n.abs();
    let mut p = BigInt::from(2);
    while &p * &p <= n {
        if n.is_multiple_of(&(&p * &p)) {
            return false;
        }
        p += 1;
    }
    true
}

fn check_field(d: &BigInt) -> Result<()> {
    if !d.is_negative() || !is_squarefree(d) {
        return Err(Error::BadParameter(format!("D = {d} must be a squarefree negative integer")));
    }
    Ok(())
}

/// `a + b·√D` in `ℚ(√D)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuadScalar {
    pub a: BigRational,
    pub b: BigRational,
    d: BigInt,
}

impl QuadScalar {
    pub fn new(a: BigRational, b: BigRational, d: BigInt) -> Result<Self> {
        check_field(&d)?;
        Ok(QuadScalar { a, b, d })
    }

    pub fn field(&self) -> &BigInt {
        &self.d
    }

    pub fn conj(&self) -> Self {
        QuadScalar { a: self.a.clone(), b: -&self.b, d: self.d.clone() }
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    /// The rational value, when the irrational part vanishes.
    pub fn as_rational(&self) -> Option<&BigRational> {
        self.b.is_zero().then_some(&self.a)
    }
}

impl Add for &QuadScalar {
    type Output = QuadScalar;

    fn add(self, rhs: &QuadScalar) -> QuadScalar {
        assert_eq!(self.d, rhs.d, "scalars from different fields");
        QuadScalar { a: &self.a + &rhs.a, b: &self.b + &rhs.b, d: self.d.clone() }
    }
}

impl Mul for &QuadScalar {
    type Output = QuadScalar;

    fn mul(self, rhs: &QuadScalar) -> QuadScalar {
        assert_eq!(self.d, rhs.d, "scalars from different fields");
        let d = BigRational::from_integer(self.d.clone());
        QuadScalar {
            a: &self.a * &rhs.a + &self.b * &rhs.b * d,
            b: &self.a * &rhs.b + &self.b * &rhs.a,
            d: self.d.clone(),
        }
    }
}

impl fmt::Display for QuadScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} + {}·√{}", self.a, self.b, self.d)
    }
}

/// `ω = re + √D·im ∈ Λ ⊗ ℚ(√D)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PeriodVector {
    lattice: Lattice,
    d: BigInt,
    re: Vec<BigRational>,
    im: Vec<BigRational>,
}

impl PeriodVector {
    pub fn new(lattice: Lattice, d: BigInt, re: Vec<BigRational>, im: Vec<BigRational>) -> Result<Self> {
        check_field(&d)?;
        let n = lattice.rank();
        if re.len() != n || im.len() != n {
            return Err(Error::DimensionMismatch(format!(
                "period coordinates have lengths {} and {}, lattice rank is {n}",
                re.len(),
                im.len()
            )));
        }
        if im.iter().all(Zero::is_zero) {
            return Err(Error::BadParameter("period must have a nonzero √D part".into()));
        }
        Ok(PeriodVector { lattice, d, re, im })
    }

    pub fn from_i64(lattice: Lattice, d: i64, re: &[i64], im: &[i64]) -> Result<Self> {
        let conv = |v: &[i64]| v.iter().map(|&x| BigRational::from_integer(x.into())).collect();
        Self::new(lattice, BigInt::from(d), conv(re), conv(im))
    }

    pub fn lattice(&self) -> &Lattice {
        &self.lattice
    }

    pub fn field(&self) -> &BigInt {
        &self.d
    }

    pub fn re(&self) -> &[BigRational] {
        &self.re
    }

    pub fn im(&self) -> &[BigRational] {
        &self.im
    }

    pub fn conj(&self) -> Self {
        PeriodVector { im: self.im.iter().map(|x| -x).collect(), ..self.clone() }
    }

    /// Multiplies by a nonzero rational.
    pub fn scaled(&self, c: &BigRational) -> Result<Self> {
        if c.is_zero() {
            return Err(Error::BadParameter("scale must be nonzero".into()));
        }
        Ok(PeriodVector {
            re: self.re.iter().map(|x| x * c).collect(),
            im: self.im.iter().map(|x| x * c).collect(),
            ..self.clone()
        })
    }

    /// `ψ(self, other)`, extended bilinearly (not sesquilinearly).
    pub fn pairing(&self, other: &PeriodVector) -> QuadScalar {
        let l = &self.lattice;
        let d = BigRational::from_integer(self.d.clone());
        QuadScalar {
            a: l.inner_rational(&self.re, &other.re) + d * l.inner_rational(&self.im, &other.im),
            b: l.inner_rational(&self.re, &other.im) + l.inner_rational(&self.im, &other.re),
            d: self.d.clone(),
        }
    }

    /// `re` and `im` as primitive integer rows.
    fn integer_span(&self) -> IntMatrix {
        let rows = vec![linalg::primitive_integer_row(&self.re), linalg::primitive_integer_row(&self.im)];
        let rows: Vec<Vec<BigInt>> = rows.into_iter().filter(|r| r.iter().any(|x| !x.is_zero())).collect();
        IntMatrix::from_rows(&rows).expect("equal lengths")
    }
}

/// A period that satisfies `ψ(ω,ω) = 0`, `ψ(ω,ω̄) > 0` on a lattice with two
/// positive directions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CheckedPeriod {
    period: PeriodVector,
    self_pairing: BigRational,
}

impl CheckedPeriod {
    pub fn period(&self) -> &PeriodVector {
        &self.period
    }

    /// `ψ(ω, ω̄)`, a positive rational.
    pub fn self_pairing(&self) -> &BigRational {
        &self.self_pairing
    }

    /// Dimensions `(h^{-1,1}, h^{0,0}, h^{1,-1})` of the induced Hodge
    /// decomposition.
    pub fn hodge_numbers(&self) -> (usize, usize, usize) {
        let span = linalg::rank(&self.period.integer_span());
        debug_assert_eq!(span, 2);
        (1, self.period.lattice.rank() - span, 1)
    }
}

pub fn validate_period(omega: &PeriodVector) -> Result<CheckedPeriod> {
    let sig = omega.lattice.signature();
    if sig.plus != 2 {
        return Err(Error::WrongSignature(sig.to_string()));
    }
    let square = omega.pairing(omega);
    if !square.is_zero() {
        return Err(Error::NotIsotropic(format!("psi(w, w) = {square}")));
    }
    let hermitian = omega.pairing(&omega.conj());
    let value = hermitian.as_rational().expect("psi(w, conj w) is conjugation invariant").clone();
    if !value.is_positive() {
        return Err(Error::NotPositive(format!("psi(w, conj w) = {value}")));
    }
    Ok(CheckedPeriod { period: omega.clone(), self_pairing: value })
}

/// `{x ∈ Λ : ψ(x, re) = ψ(x, im) = 0}`, saturated.
pub fn neron_severi(omega: &CheckedPeriod) -> SublatticeEmbedding {
    let p = &omega.period;
    let pairing = p.lattice.gram().try_mul(&p.integer_span().transpose()).expect("widths agree");
    SublatticeEmbedding::new(p.lattice.clone(), linalg::kernel_basis(&pairing)).expect("kernel basis is independent")
}

/// The Néron–Severi sublattice and its orthogonal complement.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HodgeSplit {
    pub ns: SublatticeEmbedding,
    pub trans: SublatticeEmbedding,
}

pub fn transcendental(omega: &CheckedPeriod) -> Result<HodgeSplit> {
    let ns = neron_severi(omega);
    if linalg::det_exact(&ns.induced_gram())?.is_zero() {
        return Err(Error::DegenerateRestriction);
    }
    let trans = ns.orthogonal_complement();
    Ok(HodgeSplit { ns, trans })
}

impl HodgeSplit {
    /// Whether `re` and `im` lie in the rational span of the transcendental
    /// lattice.
    pub fn trans_contains_period(&self, omega: &CheckedPeriod) -> bool {
        let span =
            SublatticeEmbedding::new(self.trans.ambient().clone(), omega.period.integer_span()).expect("independent");
        self.trans.saturate().contains(&span)
    }
}

/// Saturation of `Λ ∩ span_ℚ{re, im}`.
pub fn minimal_hodge_sublattice(omega: &CheckedPeriod) -> SublatticeEmbedding {
    let p = &omega.period;
    SublatticeEmbedding::new(p.lattice.clone(), p.integer_span()).expect("validated periods span a plane").saturate()
}

/// Comparison of the span closure with the complement closure `(NS^⊥)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HodgeClosureReport {
    pub span_closure: SublatticeEmbedding,
    /// `None` when the form restricted to NS is degenerate.
    pub complement_closure: Option<SublatticeEmbedding>,
    pub agree: bool,
}

pub fn hodge_closure_report(omega: &CheckedPeriod) -> HodgeClosureReport {
    let span_closure = minimal_hodge_sublattice(omega).normalized();
    let complement_closure = transcendental(omega).ok().map(|s| s.trans.normalized());
    let agree = complement_closure.as_ref().is_some_and(|c| c.basis() == span_closure.basis());
    HodgeClosureReport { span_closure, complement_closure, agree }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::discriminant::{disc_form_isomorphic, DiscriminantForm};
    use crate::limits::Limits;

    fn uu() -> Lattice {
        Lattice::u().direct_sum(&Lattice::u())
    }

    fn example() -> CheckedPeriod {
        let w = PeriodVector::from_i64(uu(), -1, &[1, 1, 0, 0], &[0, 0, 1, 1]).unwrap();
        validate_period(&w).unwrap()
    }

    #[test]
    fn scalar_arithmetic() {
        let r = |x: i64| BigRational::from_integer(x.into());
        let i = QuadScalar::new(r(0), r(1), BigInt::from(-1)).unwrap();
        let m = &i * &i;
        assert_eq!(m.as_rational(), Some(&r(-1)));
        assert!((&i + &i.conj()).is_zero());
        assert!(QuadScalar::new(r(0), r(1), BigInt::from(-4)).is_err());
        assert!(QuadScalar::new(r(0), r(1), BigInt::from(3)).is_err());
    }

    #[test]
    fn validation() {
        let c = example();
        assert_eq!(c.self_pairing(), &BigRational::from_integer(4.into()));
        assert_eq!(c.hodge_numbers(), (1, 2, 1));
        let w = PeriodVector::from_i64(uu(), -1, &[1, 0, 0, 0], &[0, 1, 0, 0]).unwrap();
        assert!(matches!(validate_period(&w), Err(Error::NotIsotropic(_))));
        let w = PeriodVector::from_i64(Lattice::e8_minus(), -1, &[1; 8], &[1; 8]).unwrap();
        assert!(matches!(validate_period(&w), Err(Error::WrongSignature(_))));
        let w = PeriodVector::from_i64(uu(), -1, &[1, -1, 0, 0], &[0, 0, 1, -1]).unwrap();
        assert!(matches!(validate_period(&w), Err(Error::NotPositive(_))));
    }

    #[test]
    fn split_of_example() {
        let c = example();
        let ns = neron_severi(&c);
        assert_eq!(ns.induced_gram(), IntMatrix::from_i64(&[&[-2, 0], &[0, -2]]));
        let split = transcendental(&c).unwrap();
        assert_eq!(split.trans.induced_gram(), IntMatrix::from_i64(&[&[2, 0], &[0, 2]]));
        assert!(split.trans_contains_period(&c));
        let qt = DiscriminantForm::of(&split.trans.induced_lattice().unwrap()).unwrap();
        let qn = DiscriminantForm::of(&split.ns.induced_lattice().unwrap()).unwrap();
        assert!(disc_form_isomorphic(&qt, &qn, true, &Limits::default()).unwrap());
        let m = minimal_hodge_sublattice(&c);
        assert_eq!(m.normalized().basis(), split.trans.normalized().basis());
        assert!(hodge_closure_report(&c).agree);
    }

    #[test]
    fn rank_two_lattice_has_no_algebraic_classes() {
        let l = Lattice::from_i64(&[&[2, 0], &[0, 2]]).unwrap();
        let c = validate_period(&PeriodVector::from_i64(l, -1, &[1, 0], &[0, 1]).unwrap()).unwrap();
        let split = transcendental(&c).unwrap();
        assert_eq!(split.ns.rank(), 0);
        assert_eq!(split.trans.rank(), 2);
    }

    #[test]
    fn scaling_does_not_move_ns() {
        let c = example();
        let half = BigRational::new(3.into(), 7.into());
        let scaled = validate_period(&c.period().scaled(&half).unwrap()).unwrap();
        assert_eq!(neron_severi(&scaled).normalized(), neron_severi(&c).normalized());
        assert_eq!(minimal_hodge_sublattice(&scaled), minimal_hodge_sublattice(&c));
    }
}
