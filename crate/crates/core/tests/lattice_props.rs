#![allow(clippy::needless_range_loop)]

mod common;

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use quadlat::discriminant::{reduce_mod1, reduce_mod2};
use quadlat::embeddings::{extend_isometry, in_tilde_o, is_isometry};
use quadlat::glue::{enumerate_even_binary, even_overlattices, DefiniteSign};
use quadlat::vectors::{count_vectors_of_norm, find_primitive_vector};
use quadlat::{
    disc_form_isomorphic, DiscriminantForm, DiscriminantGroup, Error, IntMatrix, Lattice, Limits, SublatticeEmbedding,
};

use common::{lattice, Mat};

fn even_gram(max_rank: usize, max_det: i128) -> impl Strategy<Value = Vec<Vec<i64>>> {
    (1..=max_rank, any::<u64>())
        .prop_map(move |(r, seed)| common::random_even_gram(&mut ChaCha8Rng::seed_from_u64(seed), r, max_det))
}

fn positive_gram(max_rank: usize) -> impl Strategy<Value = Vec<Vec<i64>>> {
    (1..=max_rank, any::<u64>())
        .prop_map(|(r, seed)| common::random_positive_even_gram(&mut ChaCha8Rng::seed_from_u64(seed), r, 60))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn discriminant_order_is_abs_det(g in even_gram(5, 400)) {
        let l = lattice(&g);
        let group = DiscriminantGroup::of(&l);
        prop_assert_eq!(group.order(), l.det().abs());
        prop_assert!(group.min_generators() <= l.rank());
        // every generator lift is dual: integral pairing with the lattice
        for lift in group.generator_lifts().iter_rows() {
            for i in 0..l.rank() {
                let e: Vec<BigRational> = (0..l.rank()).map(|j| BigRational::from_integer(BigInt::from(u8::from(i == j)))).collect();
                prop_assert!(l.inner_rational(lift, &e).is_integer());
            }
        }
    }

    #[test]
    fn dual_basis_inverts_gram(g in even_gram(5, 400)) {
        let l = lattice(&g);
        let prod = &l.dual_basis() * &l.gram().to_rational();
        prop_assert!(prod.is_identity());
    }

    #[test]
    fn quadratic_form_refines_bilinear(g in even_gram(4, 200), c1 in prop::collection::vec(0u64..50, 4), c2 in prop::collection::vec(0u64..50, 4)) {
        let l = lattice(&g);
        let form = DiscriminantForm::of(&l).unwrap();
        let k = form.group().invariant_factors().len();
        let x: Vec<BigInt> = c1[..k].iter().map(|&v| BigInt::from(v)).collect();
        let y: Vec<BigInt> = c2[..k].iter().map(|&v| BigInt::from(v)).collect();
        let sum: Vec<BigInt> = x.iter().zip(&y).map(|(a, b)| a + b).collect();
        let lhs = reduce_mod2(form.q(&sum) - form.q(&x) - form.q(&y));
        let rhs = reduce_mod2(BigRational::from_integer(2.into()) * form.b(&x, &y));
        prop_assert_eq!(lhs, rhs);
        // q(-x) = q(x), b symmetric
        let neg: Vec<BigInt> = x.iter().map(|a| -a).collect();
        prop_assert_eq!(form.q(&neg), form.q(&x));
        prop_assert_eq!(form.b(&x, &y), form.b(&y, &x));
        prop_assert_eq!(reduce_mod1(form.b(&x, &y)), form.b(&x, &y));
    }

    #[test]
    fn form_isomorphism_is_reflexive_and_sees_sign(g in even_gram(3, 60)) {
        let l = lattice(&g);
        let f = DiscriminantForm::of(&l).unwrap();
        let lim = Limits::default();
        prop_assert!(disc_form_isomorphic(&f, &f, false, &lim).unwrap());
        let minus = DiscriminantForm::of(&l.rescale(&BigInt::from(-1)).unwrap()).unwrap();
        prop_assert!(disc_form_isomorphic(&f, &minus, true, &lim).unwrap());
        prop_assert!(disc_form_isomorphic(&f.negated(), &minus, false, &lim).unwrap());
    }

    #[test]
    fn rescale_and_direct_sum(g in even_gram(3, 50), h in even_gram(3, 50), n in 1i64..4) {
        let (a, b) = (lattice(&g), lattice(&h));
        let s = a.direct_sum(&b);
        prop_assert_eq!(s.det(), a.det() * b.det());
        let (sa, sb, ss) = (a.signature(), b.signature(), s.signature());
        prop_assert_eq!((ss.plus, ss.minus), (sa.plus + sb.plus, sa.minus + sb.minus));
        let r = a.rescale(&BigInt::from(-n)).unwrap();
        prop_assert_eq!(r.det(), a.det() * BigInt::from(-n).pow(a.rank() as u32));
        prop_assert_eq!((r.signature().plus, r.signature().minus), (sa.minus, sa.plus));
        prop_assert_eq!(s.is_even(), true);
    }

    #[test]
    fn vector_counts_match_box_search(g in positive_gram(3), norm in 1i64..=4) {
        let l = lattice(&g);
        let norm = 2 * norm;
        let m: Mat = g.iter().map(|r| r.iter().map(|&x| i128::from(x)).collect()).collect();
        let (det, adj) = (common::det(&m), common::adjugate(&m));
        // |x_i| ≤ sqrt(norm · (G⁻¹)_ii)
        let bounds: Vec<i64> = (0..g.len())
            .map(|i| ((norm as f64) * (adj[i][i] as f64) / (det as f64)).sqrt().floor() as i64 + 1)
            .collect();
        let mut count = 0usize;
        let mut x = bounds.iter().map(|b| -b).collect::<Vec<_>>();
        'outer: loop {
            let q: i64 = (0..g.len()).map(|i| (0..g.len()).map(|j| x[i] * g[i][j] * x[j]).sum::<i64>()).sum();
            if q == norm {
                count += 1;
            }
            for i in 0..x.len() {
                x[i] += 1;
                if x[i] <= bounds[i] {
                    continue 'outer;
                }
                x[i] = -bounds[i];
            }
            break;
        }
        prop_assert_eq!(count_vectors_of_norm(&l, &BigInt::from(norm)).unwrap(), count);
        let minus = l.rescale(&BigInt::from(-1)).unwrap();
        prop_assert_eq!(count_vectors_of_norm(&minus, &BigInt::from(-norm)).unwrap(), count);
    }

    #[test]
    fn complement_of_a_vector(g in even_gram(4, 100), v in prop::collection::vec(-3i64..=3, 4)) {
        let l = lattice(&g);
        let n = l.rank();
        let v: Vec<BigInt> = v[..n].iter().map(|&x| BigInt::from(x)).collect();
        prop_assume!(v.iter().any(|x| !x.is_zero()));
        let sub = SublatticeEmbedding::new(l.clone(), IntMatrix::from_rows(std::slice::from_ref(&v)).unwrap()).unwrap();
        let comp = sub.orthogonal_complement();
        prop_assert!(comp.is_primitive());
        prop_assert_eq!(comp.rank(), n - 1);
        for row in comp.basis().iter_rows() {
            prop_assert!(l.inner(row, &v).is_zero());
        }
        // the complement of the complement is the saturation
        prop_assert_eq!(comp.orthogonal_complement().normalized(), sub.saturate().normalized());
    }

    #[test]
    fn overlattices_match_brute_force(g in even_gram(3, 30)) {
        check_glue(&g)?;
    }

    #[test]
    fn binary_enumeration_matches_gauss(det in 1i64..=120) {
        let mut oracle = BTreeSet::new();
        let amax = 2 * det + 2;
        for a in (2..=amax).step_by(2) {
            for b in -a..=a {
                let num = det + b * b;
                if num % a == 0 && (num / a) % 2 == 0 {
                    oracle.insert(common::gauss_reduce(a, b, num / a));
                }
            }
        }
        let forms = enumerate_even_binary(&BigInt::from(det), DefiniteSign::Positive, &Limits::default()).unwrap();
        let lib: BTreeSet<(i64, i64, i64)> = forms
            .iter()
            .map(|l| {
                let m = l.gram();
                (m[(0, 0)].to_i64().unwrap(), m[(0, 1)].to_i64().unwrap(), m[(1, 1)].to_i64().unwrap())
            })
            .collect();
        prop_assert_eq!(lib.len(), forms.len());
        prop_assert_eq!(lib, oracle);
    }
}

pub fn check_glue(g: &[Vec<i64>]) -> Result<(), TestCaseError> {
    let l = lattice(g);
    let d = l.det().abs();
    let lib = even_overlattices(&l, &Limits::default()).unwrap();
    let lib_set: BTreeSet<Mat> = lib
        .iter()
        .map(|o| {
            let scaled = o.basis.map(|x| x * BigRational::from_integer(d.clone()));
            common::hnf(&common::to_mat(&scaled.to_integer().unwrap()))
        })
        .collect();
    prop_assert_eq!(lib_set.len(), lib.len(), "distinct glue gave equal overlattices");
    prop_assert_eq!(lib_set, common::glue_oracle(g));
    for o in &lib {
        prop_assert!(o.lattice.is_even());
        prop_assert_eq!(o.lattice.det().abs() * BigInt::from(o.glue.order() * o.glue.order()), d.clone());
    }
    Ok(())
}

#[test]
fn isometry_extension_by_identity_and_swap() {
    // U ⊕ U ⊂ U³; swapping the two summands of the sublattice extends.
    let amb = Lattice::u().power(3);
    let basis =
        IntMatrix::from_i64(&[&[1, 0, 0, 0, 0, 0], &[0, 1, 0, 0, 0, 0], &[0, 0, 1, 0, 0, 0], &[0, 0, 0, 1, 0, 0]]);
    let emb = SublatticeEmbedding::new(amb.clone(), basis).unwrap();
    let swap = IntMatrix::from_i64(&[&[0, 0, 1, 0], &[0, 0, 0, 1], &[1, 0, 0, 0], &[0, 1, 0, 0]]);
    let g = extend_isometry(&emb, &swap).unwrap();
    assert!(is_isometry(&amb, &g).unwrap());
    assert!(in_tilde_o(&amb, &g).unwrap());
    // the extension is the identity on the complementary U
    assert_eq!(g.submatrix(4..6, 4..6), IntMatrix::identity(2));
}

#[test]
fn parity_and_representation_errors() {
    let e8m = Lattice::e8_minus();
    assert!(matches!(find_primitive_vector(&e8m, &BigInt::from(-5)), Err(Error::ParityViolation(_))));
    assert!(matches!(find_primitive_vector(&e8m, &BigInt::from(2)), Err(Error::NotRepresented(_))));
    assert!(DiscriminantForm::of(&Lattice::gen(1).unwrap()).is_err());
    assert!(lattice(&[vec![2, 1], vec![1, 2]]).is_positive_definite());
    assert!(Lattice::from_i64(&[&[2, 2], &[2, 2]]).is_err());
}
