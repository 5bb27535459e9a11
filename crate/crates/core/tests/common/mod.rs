//! Independent small-integer oracles shared by the integration tests. None
//! of this goes through the library's normal forms.

#![allow(dead_code)]

use std::collections::{BTreeSet, HashMap, VecDeque};

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use rand::Rng;

use quadlat::{IntMatrix, Lattice};

pub type Mat = Vec<Vec<i128>>;

pub fn to_mat(m: &IntMatrix) -> Mat {
    m.iter_rows().map(|r| r.iter().map(|x| x.to_i128().expect("small entry")).collect()).collect()
}

pub fn to_int_matrix(m: &[Vec<i64>]) -> IntMatrix {
    let rows: Vec<Vec<BigInt>> = m.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect();
    IntMatrix::from_rows(&rows).unwrap()
}

/// Laplace expansion.
pub fn det(m: &Mat) -> i128 {
    let n = m.len();
    if n == 0 {
        return 1;
    }
    if n == 1 {
        return m[0][0];
    }
    (0..n)
        .map(|j| {
            let minor: Mat = m[1..]
                .iter()
                .map(|r| r.iter().enumerate().filter(|&(k, _)| k != j).map(|(_, &x)| x).collect())
                .collect();
            let sign = if j % 2 == 0 { 1 } else { -1 };
            sign * m[0][j] * det(&minor)
        })
        .sum()
}

/// Adjugate, so that `m · adj = det · I`.
pub fn adjugate(m: &Mat) -> Mat {
    let n = m.len();
    let mut adj = vec![vec![0i128; n]; n];
    for i in 0..n {
        for j in 0..n {
            let minor: Mat =
                (0..n).filter(|&r| r != i).map(|r| (0..n).filter(|&c| c != j).map(|c| m[r][c]).collect()).collect();
            let sign = if (i + j) % 2 == 0 { 1 } else { -1 };
            adj[j][i] = sign * det(&minor);
        }
    }
    adj
}

pub fn mul(a: &Mat, b: &Mat) -> Mat {
    let (n, k, m) = (a.len(), b.len(), b.first().map_or(0, Vec::len));
    (0..n).map(|i| (0..m).map(|j| (0..k).map(|t| a[i][t] * b[t][j]).sum()).collect()).collect()
}

/// Row Hermite form by plain Euclidean elimination: pivots positive,
/// entries above a pivot in `[0, pivot)`, zero rows dropped.
pub fn hnf(rows: &Mat) -> Mat {
    let mut m = rows.clone();
    let cols = m.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..cols {
        loop {
            let nonzero: Vec<usize> = (r..m.len()).filter(|&i| m[i][c] != 0).collect();
            if nonzero.is_empty() {
                break;
            }
            let best = *nonzero.iter().min_by_key(|&&i| m[i][c].abs()).unwrap();
            m.swap(r, best);
            let mut done = true;
            for i in r + 1..m.len() {
                let q = m[i][c].div_euclid(m[r][c]);
                if q != 0 {
                    let pivot_row = m[r].clone();
                    for (x, p) in m[i].iter_mut().zip(&pivot_row) {
                        *x -= q * p;
                    }
                }
                if m[i][c] != 0 {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if r < m.len() && m[r][c] != 0 {
            if m[r][c] < 0 {
                m[r].iter_mut().for_each(|x| *x = -*x);
            }
            for i in 0..r {
                let q = m[i][c].div_euclid(m[r][c]);
                let pivot_row = m[r].clone();
                for (x, p) in m[i].iter_mut().zip(&pivot_row) {
                    *x -= q * p;
                }
            }
            r += 1;
        }
    }
    m.truncate(r);
    m
}

/// Random even symmetric matrix with `0 < |det| ≤ max_det`.
pub fn random_even_gram<R: Rng>(rng: &mut R, rank: usize, max_det: i128) -> Vec<Vec<i64>> {
    loop {
        let mut g = vec![vec![0i64; rank]; rank];
        for i in 0..rank {
            g[i][i] = 2 * rng.gen_range(-3..=3);
            for j in 0..i {
                let x = rng.gen_range(-3..=3);
                g[i][j] = x;
                g[j][i] = x;
            }
        }
        let d = det(&g.iter().map(|r| r.iter().map(|&x| i128::from(x)).collect()).collect());
        if d != 0 && d.abs() <= max_det {
            return g;
        }
    }
}

/// Random positive-definite even Gram matrix of small determinant.
pub fn random_positive_even_gram<R: Rng>(rng: &mut R, rank: usize, max_det: i128) -> Vec<Vec<i64>> {
    loop {
        let g = random_even_gram(rng, rank, max_det);
        let m: Mat = g.iter().map(|r| r.iter().map(|&x| i128::from(x)).collect()).collect();
        if (1..=rank).all(|k| det(&m[..k].iter().map(|r| r[..k].to_vec()).collect()) > 0) {
            return g;
        }
    }
}

/// Every even overlattice of `L`, as the row Hermite form of `|det|·basis`
/// in `L`-coordinates.
///
/// `A = L^∨/L` is modelled as `ℤⁿ / ℤⁿ·G` through `x ↦ x·G`; the class of
/// `y` corresponds to `y·G⁻¹ = y·adj(G)/det`. Subgroups are grown one
/// generator at a time from the trivial one.
pub fn glue_oracle(gram: &[Vec<i64>]) -> BTreeSet<Mat> {
    let g: Mat = gram.iter().map(|r| r.iter().map(|&x| i128::from(x)).collect()).collect();
    let n = g.len();
    let d = det(&g);
    let adj = adjugate(&g);
    let h = hnf(&g);
    let reduce = |mut y: Vec<i128>| {
        for (i, row) in h.iter().enumerate() {
            let q = y[i].div_euclid(row[i]);
            for (x, r) in y.iter_mut().zip(row) {
                *x -= q * r;
            }
        }
        y
    };
    let mut elements: Vec<Vec<i128>> = vec![vec![]];
    for i in 0..n {
        elements = elements
            .into_iter()
            .flat_map(|p| (0..h[i][i]).map(move |v| p.iter().copied().chain([v]).collect::<Vec<_>>()))
            .collect();
    }
    let index: HashMap<Vec<i128>, usize> = elements.iter().cloned().enumerate().map(|(i, e)| (e, i)).collect();
    let add = |a: usize, b: usize| {
        let s: Vec<i128> = elements[a].iter().zip(&elements[b]).map(|(x, y)| x + y).collect();
        index[&reduce(s)]
    };
    let closure = |gens: &BTreeSet<usize>| {
        let zero = index[&vec![0; n]];
        let mut seen: BTreeSet<usize> = [zero].into();
        let mut queue: VecDeque<usize> = [zero].into();
        while let Some(x) = queue.pop_front() {
            for &gen in gens {
                let y = add(x, gen);
                if seen.insert(y) {
                    queue.push_back(y);
                }
            }
        }
        seen
    };
    let even = |e: usize| {
        let y = &elements[e];
        let v: i128 = (0..n).map(|i| (0..n).map(|j| y[i] * adj[i][j] * y[j]).sum::<i128>()).sum();
        v % (2 * d) == 0
    };
    let mut subgroups: BTreeSet<BTreeSet<usize>> = BTreeSet::new();
    let mut frontier = vec![closure(&BTreeSet::new())];
    subgroups.insert(frontier[0].clone());
    while let Some(sub) = frontier.pop() {
        for a in 0..elements.len() {
            if sub.contains(&a) {
                continue;
            }
            let bigger = closure(&sub.iter().copied().chain([a]).collect());
            if subgroups.insert(bigger.clone()) {
                frontier.push(bigger);
            }
        }
    }
    subgroups
        .into_iter()
        .filter(|s| s.iter().all(|&e| even(e)))
        .map(|s| {
            let mut rows: Mat = (0..n).map(|i| (0..n).map(|j| if i == j { d.abs() } else { 0 }).collect()).collect();
            for &e in &s {
                let y = &elements[e];
                // d·(y·adj/d) up to sign
                rows.push((0..n).map(|j| (0..n).map(|i| y[i] * adj[i][j]).sum::<i128>() * d.signum()).collect());
            }
            hnf(&rows)
        })
        .collect()
}

/// Gauss reduction of a positive-definite binary form `[[a, b], [b, c]]`:
/// `|2b| ≤ a ≤ c`, and `b ≥ 0` when `|2b| = a` or `a = c`.
pub fn gauss_reduce(mut a: i64, mut b: i64, mut c: i64) -> (i64, i64, i64) {
    loop {
        if 2 * b.abs() > a {
            // x ↦ x − k·y with k the nearest integer to b/a
            let k = (2 * b + a).div_euclid(2 * a);
            c = c - 2 * k * b + k * k * a;
            b -= k * a;
        } else if a > c {
            std::mem::swap(&mut a, &mut c);
            b = -b;
        } else {
            if b < 0 && (2 * b.abs() == a || a == c) {
                b = -b;
            }
            return (a, b, c);
        }
    }
}

pub fn lattice(m: &[Vec<i64>]) -> Lattice {
    Lattice::new(to_int_matrix(m)).unwrap()
}

/// `n = sf·k²` with `sf` squarefree.
pub fn squarefree_split(n: i64) -> (i64, i64) {
    let (mut sf, mut k) = (1i64, 1i64);
    let mut rest = n;
    let mut p = 2;
    while p * p <= rest {
        let mut e = 0;
        while rest % p == 0 {
            rest /= p;
            e += 1;
        }
        sf *= p.pow(e % 2);
        k *= p.pow(e / 2);
        p += 1;
    }
    (sf * rest, k)
}

/// A period on `U² ⊕ E8(-1)` whose rational span is a random positive
/// definite plane `P = span{x, y}`: `re = x`, `im = t·(y − (b/a)·x)` with
/// `t = a/(sf·k)` where `det P = sf·k²` and `D = −sf`. Returns the period
/// and the integer vectors `x`, `y`.
pub fn random_split<R: Rng>(rng: &mut R) -> (quadlat::periods::PeriodVector, Vec<i64>, Vec<i64>) {
    use num_rational::BigRational;
    let ambient = Lattice::u().power(2).direct_sum(&Lattice::e8_minus());
    let g = to_mat(ambient.gram());
    let inner = |u: &[i64], v: &[i64]| -> i64 {
        (0..12).map(|i| (0..12).map(|j| i64::try_from(g[i][j]).unwrap() * u[i] * v[j]).sum::<i64>()).sum()
    };
    loop {
        let x: Vec<i64> = (0..12).map(|i| rng.gen_range(if i < 4 { -3..=3 } else { -1..=1 })).collect();
        let y: Vec<i64> = (0..12).map(|i| rng.gen_range(if i < 4 { -3..=3 } else { -1..=1 })).collect();
        let (a, b, c) = (inner(&x, &x), inner(&x, &y), inner(&y, &y));
        let det = a * c - b * b;
        if a <= 0 || det <= 0 || det > 400 {
            continue;
        }
        let (sf, k) = squarefree_split(det);
        let r = |n: i64| BigRational::from_integer(BigInt::from(n));
        let t = BigRational::new(BigInt::from(a), BigInt::from(sf * k));
        let re: Vec<BigRational> = x.iter().map(|&v| r(v)).collect();
        let im: Vec<BigRational> =
            (0..12).map(|i| &t * (r(y[i]) - BigRational::new(BigInt::from(b), BigInt::from(a)) * r(x[i]))).collect();
        let w = quadlat::periods::PeriodVector::new(ambient.clone(), BigInt::from(-sf), re, im).unwrap();
        return (w, x, y);
    }
}
