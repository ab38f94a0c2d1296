//! Independent reference implementations used as test oracles. None of
//! these share code with the library beyond the basic `Rat`/`Poly`/`Mat`
//! containers.

#![allow(dead_code)]

use std::collections::HashMap;

use cydyn_core::chow::{triple_form, Ambient, CompleteIntersection};
use cydyn_core::lattice::LatticeContext;
use cydyn_core::linalg::{rat, Mat, Poly, Rat};
use num_bigint::BigInt;
use num_traits::{One, Zero};

/// `det(A - tI)` by Faddeev–LeVerrier.
pub fn faddeev_leverrier(a: &Mat) -> Poly {
    let n = a.rows();
    // c[k] is the coefficient of t^k in det(tI - A).
    let mut c = vec![Rat::zero(); n + 1];
    c[n] = Rat::one();
    let mut mk = Mat::zeros(n, n);
    for k in 1..=n {
        mk = a
            .mul(&mk)
            .unwrap()
            .add(&Mat::identity(n).scale(&c[n - k + 1]))
            .unwrap();
        let am = a.mul(&mk).unwrap();
        c[n - k] = -am.trace().unwrap() / rat(k as i64);
    }
    let sign = if n.is_multiple_of(2) { rat(1) } else { rat(-1) };
    Poly::new(c).scale(&sign)
}

/// Laplace expansion along the first row.
pub fn cofactor_det(a: &[Vec<Rat>]) -> Rat {
    let n = a.len();
    if n == 0 {
        return Rat::one();
    }
    let mut total = Rat::zero();
    for j in 0..n {
        if a[0][j].is_zero() {
            continue;
        }
        let minor: Vec<Vec<Rat>> = a[1..]
            .iter()
            .map(|row| {
                row.iter()
                    .enumerate()
                    .filter(|(c, _)| *c != j)
                    .map(|(_, v)| v.clone())
                    .collect()
            })
            .collect();
        let term = &a[0][j] * cofactor_det(&minor);
        if j % 2 == 0 {
            total += term;
        } else {
            total -= term;
        }
    }
    total
}

/// Laplace expansion of `det(A - tI)` with polynomial entries.
pub fn cofactor_char_poly(a: &Mat) -> Poly {
    fn det(m: &[Vec<Poly>]) -> Poly {
        if m.is_empty() {
            return Poly::one();
        }
        let mut total = Poly::zero();
        for j in 0..m.len() {
            let minor: Vec<Vec<Poly>> = m[1..]
                .iter()
                .map(|row| {
                    row.iter()
                        .enumerate()
                        .filter(|(c, _)| *c != j)
                        .map(|(_, v)| v.clone())
                        .collect()
                })
                .collect();
            let term = &m[0][j] * &det(&minor);
            total = if j % 2 == 0 {
                &total + &term
            } else {
                &total - &term
            };
        }
        total
    }
    let n = a.rows();
    let m: Vec<Vec<Poly>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let c = Poly::constant(a.get(i, j).clone());
                    if i == j {
                        &c - &Poly::t()
                    } else {
                        c
                    }
                })
                .collect()
        })
        .collect();
    det(&m)
}

type Multi = HashMap<Vec<u32>, BigInt>;

fn multi_mul(a: &Multi, b: &Multi) -> Multi {
    let mut out = Multi::new();
    for (ea, ca) in a {
        for (eb, cb) in b {
            let e: Vec<u32> = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
            *out.entry(e).or_insert_with(BigInt::zero) += ca * cb;
        }
    }
    out
}

fn linear(coeffs: &[u32]) -> Multi {
    let k = coeffs.len();
    let mut out = Multi::new();
    for (a, &d) in coeffs.iter().enumerate() {
        if d != 0 {
            let mut e = vec![0; k];
            e[a] = 1;
            out.insert(e, BigInt::from(d));
        }
    }
    out
}

/// `T(i, j, l)` by expanding `h_i h_j h_l ∏_r (Σ_a d_ra h_a)` fully in
/// `Z[h_1..h_k]`, with no truncation, and reading off the coefficient of
/// `∏ h_a^{n_a}`.
pub fn brute_force_triple(
    dims: &[u32],
    multidegrees: &[Vec<u32>],
    i: usize,
    j: usize,
    l: usize,
) -> BigInt {
    let k = dims.len();
    let unit = |a: usize| {
        let mut c = vec![0; k];
        c[a] = 1;
        linear(&c)
    };
    let mut prod: Multi = [(vec![0; k], BigInt::one())].into_iter().collect();
    for a in [i, j, l] {
        prod = multi_mul(&prod, &unit(a));
    }
    for d in multidegrees {
        prod = multi_mul(&prod, &linear(d));
    }
    prod.get(dims).cloned().unwrap_or_default()
}

pub fn example_ci() -> CompleteIntersection {
    CompleteIntersection::new(Ambient::new(vec![2, 2, 2]).unwrap(), vec![vec![1, 1, 1]; 3]).unwrap()
}

pub fn example_ctx() -> LatticeContext {
    LatticeContext::new(triple_form(&example_ci()).unwrap())
        .with_fiber_curves(&[0, 1, 2])
        .unwrap()
}

pub fn m123() -> Mat {
    Mat::from_ints(&[vec![1, 12, 6], vec![0, 4, 3], vec![0, -3, -2]])
}

pub fn m231() -> Mat {
    Mat::from_ints(&[vec![-2, 0, -3], vec![6, 1, 12], vec![3, 0, 4]])
}

pub fn m312() -> Mat {
    Mat::from_ints(&[vec![4, 3, 0], vec![-3, -2, 0], vec![12, 6, 1]])
}

pub fn big_m() -> Mat {
    Mat::from_ints(&[
        vec![-44, -330, -615],
        vec![60, 451, 840],
        vec![165, 1230, 2296],
    ])
}

/// Number of real roots of a squarefree cubic from the sign of its
/// discriminant.
pub fn cubic_real_root_count(c: &[i64; 4]) -> usize {
    let [d, cc, b, a] = c.map(BigInt::from);
    let disc = BigInt::from(18) * &a * &b * &cc * &d - BigInt::from(4) * b.pow(3) * &d
        + b.pow(2) * cc.pow(2)
        - BigInt::from(4) * &a * cc.pow(3)
        - BigInt::from(27) * a.pow(2) * d.pow(2);
    if disc > BigInt::zero() {
        3
    } else {
        1
    }
}
