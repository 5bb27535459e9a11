//! Discriminant groups `Λ^∨/Λ` and their finite quadratic forms.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::lattice::Lattice;
use crate::limits::Limits;
use crate::linalg;
use crate::matrix::{IntMatrix, RatMatrix};

/// The finite abelian group `A_Λ = Λ^∨/Λ` with chosen generators.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiscriminantGroup {
    invariant_factors: Vec<BigInt>,
    /// Row `i` is a lift of generator `i` to `Λ^∨`, in `Λ`-coordinates.
    generator_lifts: RatMatrix,
    lattice: Lattice,
    /// Maps `x·G` (an integer vector for `x ∈ Λ^∨`) to generator coefficients.
    coords: IntMatrix,
}

impl DiscriminantGroup {
    pub fn of(lattice: &Lattice) -> Self {
        let gram = lattice.gram();
        let n = lattice.rank();
        let (u, s, v) = linalg::smith_normal_form(gram);
        // From U·G·V = S the dual element U_i/d_i maps to the i-th cyclic factor.
        let keep: Vec<usize> = (0..n).filter(|&i| !s[(i, i)].is_one()).collect();
        let invariant_factors: Vec<BigInt> = keep.iter().map(|&i| s[(i, i)].clone()).collect();
        let mut lifts = RatMatrix::zeros(keep.len(), n);
        let mut coords = IntMatrix::zeros(n, keep.len());
        for (k, &i) in keep.iter().enumerate() {
            for j in 0..n {
                lifts[(k, j)] = BigRational::new(u[(i, j)].clone(), s[(i, i)].clone());
                coords[(j, k)] = v[(j, i)].clone();
            }
        }
        DiscriminantGroup { invariant_factors, generator_lifts: lifts, lattice: lattice.clone(), coords }
    }

    /// `d₁ | d₂ | …`, all greater than one.
    pub fn invariant_factors(&self) -> &[BigInt] {
        &self.invariant_factors
    }

    /// The lattice `Λ` whose discriminant group this is.
    pub fn lattice(&self) -> &Lattice {
        &self.lattice
    }

    pub fn generator_lifts(&self) -> &RatMatrix {
        &self.generator_lifts
    }

    pub fn order(&self) -> BigInt {
        self.invariant_factors.iter().product()
    }

    pub fn is_trivial(&self) -> bool {
        self.invariant_factors.is_empty()
    }

    /// `s(A)`: the minimum number of generators.
    pub fn min_generators(&self) -> usize {
        self.invariant_factors.len()
    }

    /// Exponent (largest invariant factor), one for the trivial group.
    pub fn exponent(&self) -> BigInt {
        self.invariant_factors.last().cloned().unwrap_or_else(BigInt::one)
    }

    /// Generator coefficients of the class of `x ∈ Λ^∨`, reduced mod `dᵢ`.
    /// Fails when `x` is not in the dual lattice.
    pub fn coordinates(&self, x: &[BigRational]) -> Result<Vec<BigInt>> {
        let n = self.lattice.rank();
        if x.len() != n {
            return Err(Error::DimensionMismatch(format!("vector of length {} in rank {n}", x.len())));
        }
        let gram_q = self.lattice.gram().to_rational();
        let pairing = gram_q.vec_mul(x);
        if pairing.iter().any(|p| !p.is_integer()) {
            return Err(Error::BadParameter("vector is not in the dual lattice".into()));
        }
        let y: Vec<BigInt> = pairing.iter().map(BigRational::to_integer).collect();
        let a = self.coords.vec_mul(&y);
        Ok(a.iter().zip(&self.invariant_factors).map(|(ai, d)| ai.mod_floor(d)).collect())
    }

    /// A dual-lattice lift of the element with the given coefficients.
    pub fn lift(&self, coeffs: &[BigInt]) -> Vec<BigRational> {
        let c: Vec<BigRational> = coeffs.iter().map(|x| BigRational::from_integer(x.clone())).collect();
        self.generator_lifts.vec_mul(&c)
    }
}

fn mod_q(x: BigRational, m: i64) -> BigRational {
    let m = BigRational::from_integer(BigInt::from(m));
    let k = (&x / &m).floor();
    x - k * m
}

/// `q` reduced into `[0, 2)`.
pub fn reduce_mod2(x: BigRational) -> BigRational {
    mod_q(x, 2)
}

/// `b` reduced into `[0, 1)`.
pub fn reduce_mod1(x: BigRational) -> BigRational {
    mod_q(x, 1)
}

/// The discriminant quadratic form `q: A_Λ → ℚ/2ℤ` with its bilinear form
/// `b: A_Λ × A_Λ → ℚ/ℤ`, tabulated on generators.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiscriminantForm {
    group: DiscriminantGroup,
    q_values: Vec<BigRational>,
    b_values: RatMatrix,
}

impl DiscriminantForm {
    pub fn of(lattice: &Lattice) -> Result<Self> {
        if !lattice.is_even() {
            return Err(Error::OddLattice);
        }
        let group = DiscriminantGroup::of(lattice);
        let k = group.min_generators();
        let lifts = group.generator_lifts.to_rows();
        let q_values = lifts.iter().map(|g| reduce_mod2(lattice.inner_rational(g, g))).collect();
        let mut b_values = RatMatrix::zeros(k, k);
        for i in 0..k {
            for j in 0..k {
                b_values[(i, j)] = reduce_mod1(lattice.inner_rational(&lifts[i], &lifts[j]));
            }
        }
        Ok(DiscriminantForm { group, q_values, b_values })
    }

    pub fn group(&self) -> &DiscriminantGroup {
        &self.group
    }

    pub fn q_values(&self) -> &[BigRational] {
        &self.q_values
    }

    pub fn b_values(&self) -> &RatMatrix {
        &self.b_values
    }

    /// `q` of the element with the given generator coefficients.
    pub fn q(&self, coeffs: &[BigInt]) -> BigRational {
        let mut acc = BigRational::zero();
        for (i, a) in coeffs.iter().enumerate() {
            let a = BigRational::from_integer(a.clone());
            acc += &a * &a * &self.q_values[i];
            for (j, c) in coeffs.iter().enumerate().skip(i + 1) {
                acc += BigRational::from_integer(BigInt::from(2))
                    * &a
                    * BigRational::from_integer(c.clone())
                    * &self.b_values[(i, j)];
            }
        }
        reduce_mod2(acc)
    }

    /// `b` of two elements given by generator coefficients.
    pub fn b(&self, x: &[BigInt], y: &[BigInt]) -> BigRational {
        let mut acc = BigRational::zero();
        for (i, a) in x.iter().enumerate() {
            for (j, c) in y.iter().enumerate() {
                acc += BigRational::from_integer(a * c) * &self.b_values[(i, j)];
            }
        }
        reduce_mod1(acc)
    }

    /// The same group with `-q`.
    pub fn negated(&self) -> Self {
        DiscriminantForm {
            group: self.group.clone(),
            q_values: self.q_values.iter().map(|q| reduce_mod2(-q)).collect(),
            b_values: self.b_values.map(|b| reduce_mod1(-b)),
        }
    }

    /// Compact machine-integer model, checked against the cap.
    pub fn finite(&self, limits: &Limits) -> Result<FiniteForm> {
        FiniteForm::from_form(self, limits.group_cap)
    }
}

/// Machine-integer tabulation of a discriminant form for exhaustive search.
///
/// With `e` the exponent of the group, `q` values are stored as numerators
/// over `e` modulo `2e` and `b` values as numerators over `e` modulo `e`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteForm {
    factors: Vec<u64>,
    exponent: u64,
    q_num: Vec<u64>,
    b_num: Vec<Vec<u64>>,
    strides: Vec<u64>,
    order: u64,
}

fn rat_numerator_over(x: &BigRational, e: u64, modulus: u64) -> u64 {
    let scaled = x * BigRational::from_integer(BigInt::from(e));
    assert!(scaled.is_integer(), "value {x} has denominator not dividing {e}");
    scaled.to_integer().mod_floor(&BigInt::from(modulus)).to_u64().expect("reduced")
}

impl FiniteForm {
    pub fn from_form(form: &DiscriminantForm, cap: u64) -> Result<Self> {
        let order = form.group.order();
        match order.to_u64() {
            Some(o) if o <= cap => {}
            _ => return Err(Error::TooLarge { order: order.to_u128().unwrap_or(u128::MAX), cap }),
        }
        let factors: Vec<u64> = form.group.invariant_factors.iter().map(|d| d.to_u64().expect("capped")).collect();
        let exponent = factors.last().copied().unwrap_or(1);
        let q_num = form.q_values.iter().map(|q| rat_numerator_over(q, exponent, 2 * exponent)).collect();
        let k = factors.len();
        let b_num = (0..k)
            .map(|i| (0..k).map(|j| rat_numerator_over(&form.b_values[(i, j)], exponent, exponent)).collect())
            .collect();
        let mut strides = vec![1u64; k];
        for i in (0..k.saturating_sub(1)).rev() {
            strides[i] = strides[i + 1] * factors[i + 1];
        }
        let order = factors.iter().product();
        Ok(FiniteForm { factors, exponent, q_num, b_num, strides, order })
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn factors(&self) -> &[u64] {
        &self.factors
    }

    pub fn exponent(&self) -> u64 {
        self.exponent
    }

    pub fn rank(&self) -> usize {
        self.factors.len()
    }

    /// Mixed-radix index of an element (first coordinate most significant).
    pub fn index(&self, a: &[u64]) -> u64 {
        a.iter().zip(&self.strides).map(|(x, s)| x * s).sum()
    }

    pub fn element(&self, mut idx: u64) -> Vec<u64> {
        let mut a = vec![0; self.rank()];
        for i in 0..self.rank() {
            a[i] = idx / self.strides[i];
            idx %= self.strides[i];
        }
        a
    }

    pub fn elements(&self) -> impl Iterator<Item = Vec<u64>> + '_ {
        (0..self.order).map(|i| self.element(i))
    }

    pub fn add(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        a.iter().zip(b).zip(&self.factors).map(|((x, y), d)| (x + y) % d).collect()
    }

    pub fn scale(&self, a: &[u64], k: u64) -> Vec<u64> {
        a.iter().zip(&self.factors).map(|(x, d)| (x * (k % d)) % d).collect()
    }

    pub fn is_zero(&self, a: &[u64]) -> bool {
        a.iter().all(|&x| x == 0)
    }

    /// Numerator of `q(a)` over the exponent, modulo `2e`.
    pub fn q(&self, a: &[u64]) -> u64 {
        let m = 2 * self.exponent;
        let mut acc = 0u64;
        for i in 0..a.len() {
            if a[i] == 0 {
                continue;
            }
            let ai = a[i] % m;
            acc = (acc + ai * ai % m * self.q_num[i]) % m;
            for j in i + 1..a.len() {
                if a[j] == 0 {
                    continue;
                }
                acc = (acc + 2 * (ai * (a[j] % m) % m) % m * self.b_num[i][j]) % m;
            }
        }
        acc
    }

    /// Numerator of `b(x, y)` over the exponent, modulo `e`.
    pub fn b(&self, x: &[u64], y: &[u64]) -> u64 {
        let m = self.exponent;
        let mut acc = 0u64;
        for i in 0..x.len() {
            if x[i] == 0 {
                continue;
            }
            for j in 0..y.len() {
                if y[j] == 0 {
                    continue;
                }
                acc = (acc + (x[i] % m) * (y[j] % m) % m * self.b_num[i][j]) % m;
            }
        }
        acc
    }

    /// Additive order of an element.
    pub fn element_order(&self, a: &[u64]) -> u64 {
        a.iter().zip(&self.factors).fold(1, |acc, (&x, &d)| acc.lcm(&(d / x.gcd(&d))))
    }

    /// All elements of the subgroup generated by `gens`, as sorted indices.
    pub fn span(&self, gens: &[Vec<u64>]) -> Vec<u64> {
        let mut seen = vec![false; self.order as usize];
        let mut frontier = vec![vec![0u64; self.rank()]];
        seen[0] = true;
        let mut out = vec![0u64];
        while let Some(x) = frontier.pop() {
            for g in gens {
                let y = self.add(&x, g);
                let iy = self.index(&y);
                if !seen[iy as usize] {
                    seen[iy as usize] = true;
                    out.push(iy);
                    frontier.push(y);
                }
            }
        }
        out.sort_unstable();
        out
    }

    fn negated(&self) -> Self {
        let m = 2 * self.exponent;
        let mut out = self.clone();
        out.q_num = self.q_num.iter().map(|&q| (m - q) % m).collect();
        out.b_num =
            self.b_num.iter().map(|r| r.iter().map(|&b| (self.exponent - b) % self.exponent).collect()).collect();
        out
    }
}

/// Decides whether two discriminant forms are isomorphic (with `q₂`
/// replaced by `-q₂` when `negate` is set) by exhaustive search over
/// generator images.
pub fn disc_form_isomorphic(
    f1: &DiscriminantForm,
    f2: &DiscriminantForm,
    negate: bool,
    limits: &Limits,
) -> Result<bool> {
    let a = f1.finite(limits)?;
    let mut b = f2.finite(limits)?;
    if negate {
        b = b.negated();
    }
    Ok(finite_forms_isomorphic(&a, &b))
}

pub fn finite_forms_isomorphic(a: &FiniteForm, b: &FiniteForm) -> bool {
    if a.factors != b.factors {
        return false;
    }
    // A homomorphism preserving b is injective because b is non-degenerate
    // on a discriminant group; equal orders make it bijective.
    let k = a.rank();
    let gens: Vec<Vec<u64>> = (0..k)
        .map(|i| {
            let mut g = vec![0; k];
            g[i] = 1;
            g
        })
        .collect();
    let mut candidates: Vec<Vec<Vec<u64>>> = Vec::with_capacity(k);
    for (i, g) in gens.iter().enumerate() {
        let d = a.factors[i];
        let qa = a.q(g);
        let cands: Vec<Vec<u64>> =
            b.elements().filter(|h| d.is_multiple_of(b.element_order(h)) && b.q(h) == qa).collect();
        if cands.is_empty() {
            return false;
        }
        candidates.push(cands);
    }
    let mut images: Vec<Vec<u64>> = Vec::with_capacity(k);
    search_images(a, b, &gens, &candidates, &mut images)
}

fn search_images(
    a: &FiniteForm,
    b: &FiniteForm,
    gens: &[Vec<u64>],
    candidates: &[Vec<Vec<u64>>],
    images: &mut Vec<Vec<u64>>,
) -> bool {
    let i = images.len();
    if i == gens.len() {
        return true;
    }
    for h in &candidates[i] {
        let compatible = (0..i).all(|j| b.b(h, &images[j]) == a.b(&gens[i], &gens[j]));
        if !compatible {
            continue;
        }
        images.push(h.clone());
        if search_images(a, b, gens, candidates, images) {
            return true;
        }
        images.pop();
    }
    false
}
