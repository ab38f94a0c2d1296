//! Truncated Chow ring of a product of projective spaces
//! `P^{n_1} × ... × P^{n_k}`: `Z[h_1, ..., h_k] / (h_i^{n_i + 1})`.
//!
//! Intersection numbers on a complete intersection `X` are computed in the
//! ambient ring against the class `∏_i (Σ_j d_ij h_j)` of `X`.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ChowError {
    #[error("projective factors must have dimension >= 1, got {0:?}")]
    InvalidAmbient(Vec<u32>),
    #[error("ambient mismatch: {left:?} vs {right:?}")]
    AmbientMismatch { left: Vec<u32>, right: Vec<u32> },
    #[error("multidegree {0:?} has the wrong number of entries")]
    InvalidMultidegree(Vec<u32>),
    #[error("complete intersection of codimension {codim} does not fit in dimension {dim}")]
    CodimensionTooLarge { codim: usize, dim: usize },
    #[error("exponents {exponents:?} have degree {degree}, need {expected} to reach a point")]
    DegreeMismatch {
        exponents: Vec<u32>,
        degree: u32,
        expected: u32,
    },
    #[error("triple form needs a threefold, complete intersection has dimension {0}")]
    NotAThreefold(usize),
    #[error("factor index {index} out of range for {factors} factors")]
    FactorOutOfRange { index: usize, factors: usize },
}

/// `P^{n_1} × ... × P^{n_k}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Ambient {
    dims: Vec<u32>,
}

impl Ambient {
    pub fn new(dims: Vec<u32>) -> Result<Self, ChowError> {
        if dims.is_empty() || dims.contains(&0) {
            return Err(ChowError::InvalidAmbient(dims));
        }
        Ok(Ambient { dims })
    }

    pub fn dims(&self) -> &[u32] {
        &self.dims
    }

    pub fn factors(&self) -> usize {
        self.dims.len()
    }

    pub fn dim(&self) -> u32 {
        self.dims.iter().sum()
    }

    fn fits(&self, exps: &[u32]) -> bool {
        exps.iter().zip(&self.dims).all(|(e, n)| e <= n)
    }
}

/// Element of the truncated Chow ring; monomials are exponent vectors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChowPoly {
    ambient: Ambient,
    terms: BTreeMap<Vec<u32>, BigInt>,
}

impl ChowPoly {
    pub fn zero(ambient: &Ambient) -> Self {
        ChowPoly {
            ambient: ambient.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn one(ambient: &Ambient) -> Self {
        ChowPoly::monomial(ambient, vec![0; ambient.factors()], BigInt::one())
            .expect("unit monomial fits")
    }

    /// `coeff · h^exps`, zero if it is truncated away.
    pub fn monomial(ambient: &Ambient, exps: Vec<u32>, coeff: BigInt) -> Result<Self, ChowError> {
        if exps.len() != ambient.factors() {
            return Err(ChowError::InvalidMultidegree(exps));
        }
        let mut p = ChowPoly::zero(ambient);
        if ambient.fits(&exps) && !coeff.is_zero() {
            p.terms.insert(exps, coeff);
        }
        Ok(p)
    }

    /// Hyperplane class `h_i` (0-based).
    pub fn hyperplane(ambient: &Ambient, i: usize) -> Result<Self, ChowError> {
        if i >= ambient.factors() {
            return Err(ChowError::FactorOutOfRange {
                index: i,
                factors: ambient.factors(),
            });
        }
        let mut exps = vec![0; ambient.factors()];
        exps[i] = 1;
        ChowPoly::monomial(ambient, exps, BigInt::one())
    }

    /// `Σ_j c_j h_j`.
    pub fn divisor(ambient: &Ambient, coeffs: &[u32]) -> Result<Self, ChowError> {
        if coeffs.len() != ambient.factors() {
            return Err(ChowError::InvalidMultidegree(coeffs.to_vec()));
        }
        let mut p = ChowPoly::zero(ambient);
        for (j, &c) in coeffs.iter().enumerate() {
            p = p.add(&ChowPoly::hyperplane(ambient, j)?.scale(&BigInt::from(c)))?;
        }
        Ok(p)
    }

    pub fn ambient(&self) -> &Ambient {
        &self.ambient
    }

    pub fn terms(&self) -> &BTreeMap<Vec<u32>, BigInt> {
        &self.terms
    }

    pub fn coefficient(&self, exps: &[u32]) -> BigInt {
        self.terms.get(exps).cloned().unwrap_or_else(BigInt::zero)
    }

    fn same_ambient(&self, other: &ChowPoly) -> Result<(), ChowError> {
        if self.ambient == other.ambient {
            Ok(())
        } else {
            Err(ChowError::AmbientMismatch {
                left: self.ambient.dims.clone(),
                right: other.ambient.dims.clone(),
            })
        }
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        let mut out = ChowPoly::zero(&self.ambient);
        if !c.is_zero() {
            for (e, v) in &self.terms {
                out.terms.insert(e.clone(), v * c);
            }
        }
        out
    }

    pub fn add(&self, other: &ChowPoly) -> Result<Self, ChowError> {
        self.same_ambient(other)?;
        let mut out = self.clone();
        for (e, v) in &other.terms {
            let entry = out.terms.entry(e.clone()).or_insert_with(BigInt::zero);
            *entry += v;
            if entry.is_zero() {
                out.terms.remove(e);
            }
        }
        Ok(out)
    }

    /// Product with `h_i^{n_i + 1} = 0` applied.
    pub fn mul(&self, other: &ChowPoly) -> Result<Self, ChowError> {
        self.same_ambient(other)?;
        let mut out: BTreeMap<Vec<u32>, BigInt> = BTreeMap::new();
        for (ea, va) in &self.terms {
            for (eb, vb) in &other.terms {
                let e: Vec<u32> = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
                if !self.ambient.fits(&e) {
                    continue;
                }
                *out.entry(e).or_insert_with(BigInt::zero) += va * vb;
            }
        }
        out.retain(|_, v| !v.is_zero());
        Ok(ChowPoly {
            ambient: self.ambient.clone(),
            terms: out,
        })
    }

    pub fn pow(&self, e: u32) -> Result<Self, ChowError> {
        (0..e).try_fold(ChowPoly::one(&self.ambient), |acc, _| acc.mul(self))
    }

    /// Coefficient of the point class `h_1^{n_1} ⋯ h_k^{n_k}`.
    pub fn degree(&self) -> BigInt {
        self.coefficient(&self.ambient.dims)
    }
}

/// Complete intersection of hypersurfaces with the given multidegrees.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CompleteIntersection {
    ambient: Ambient,
    multidegrees: Vec<Vec<u32>>,
}

impl CompleteIntersection {
    pub fn new(ambient: Ambient, multidegrees: Vec<Vec<u32>>) -> Result<Self, ChowError> {
        if let Some(bad) = multidegrees.iter().find(|d| d.len() != ambient.factors()) {
            return Err(ChowError::InvalidMultidegree(bad.clone()));
        }
        if multidegrees.len() > ambient.dim() as usize {
            return Err(ChowError::CodimensionTooLarge {
                codim: multidegrees.len(),
                dim: ambient.dim() as usize,
            });
        }
        Ok(CompleteIntersection {
            ambient,
            multidegrees,
        })
    }

    pub fn ambient(&self) -> &Ambient {
        &self.ambient
    }

    pub fn multidegrees(&self) -> &[Vec<u32>] {
        &self.multidegrees
    }

    pub fn codim(&self) -> usize {
        self.multidegrees.len()
    }

    pub fn dim(&self) -> usize {
        self.ambient.dim() as usize - self.codim()
    }

    /// `∏_i (Σ_j d_ij h_j)` in the ambient ring.
    pub fn class(&self) -> Result<ChowPoly, ChowError> {
        self.multidegrees
            .iter()
            .try_fold(ChowPoly::one(&self.ambient), |acc, d| {
                acc.mul(&ChowPoly::divisor(&self.ambient, d)?)
            })
    }
}

/// `∫_X h^exponents`: the top-degree coefficient of
/// `h^exponents · [X]` in the ambient ring.
pub fn intersection_number(
    ci: &CompleteIntersection,
    exponents: &[u32],
) -> Result<BigInt, ChowError> {
    if exponents.len() != ci.ambient.factors() {
        return Err(ChowError::InvalidMultidegree(exponents.to_vec()));
    }
    let degree: u32 = exponents.iter().sum();
    let expected = ci.dim() as u32;
    if degree != expected {
        return Err(ChowError::DegreeMismatch {
            exponents: exponents.to_vec(),
            degree,
            expected,
        });
    }
    let mono = ChowPoly::monomial(&ci.ambient, exponents.to_vec(), BigInt::one())?;
    Ok(mono.mul(&ci.class()?)?.degree())
}

/// Symmetric trilinear form of triple intersection numbers
/// `T(L_i, L_j, L_l)` on a rank-`ρ` lattice.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TripleForm {
    rank: usize,
    table: Vec<BigInt>,
}

impl TripleForm {
    /// Builds the table from a function on sorted index triples.
    pub fn from_fn(rank: usize, mut f: impl FnMut(usize, usize, usize) -> BigInt) -> Self {
        let mut table = vec![BigInt::zero(); rank * rank * rank];
        for i in 0..rank {
            for j in i..rank {
                for l in j..rank {
                    let v = f(i, j, l);
                    for (a, b, c) in [
                        (i, j, l),
                        (i, l, j),
                        (j, i, l),
                        (j, l, i),
                        (l, i, j),
                        (l, j, i),
                    ] {
                        table[(a * rank + b) * rank + c] = v.clone();
                    }
                }
            }
        }
        TripleForm { rank, table }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    /// `T(L_i, L_j, L_l)`, 0-based.
    pub fn get(&self, i: usize, j: usize, l: usize) -> &BigInt {
        &self.table[(i * self.rank + j) * self.rank + l]
    }

    pub fn is_symmetric(&self) -> bool {
        let r = self.rank;
        (0..r).all(|i| {
            (0..r).all(|j| {
                (0..r).all(|l| {
                    let v = self.get(i, j, l);
                    v == self.get(j, i, l) && v == self.get(i, l, j) && v == self.get(l, j, i)
                })
            })
        })
    }
}

/// All triple intersection numbers of the hyperplane pullbacks on a
/// threefold complete intersection, one basis class per ambient factor.
pub fn triple_form(ci: &CompleteIntersection) -> Result<TripleForm, ChowError> {
    if ci.dim() != 3 {
        return Err(ChowError::NotAThreefold(ci.dim()));
    }
    let k = ci.ambient.factors();
    let mut err = None;
    let form = TripleForm::from_fn(k, |i, j, l| {
        let mut e = vec![0u32; k];
        e[i] += 1;
        e[j] += 1;
        e[l] += 1;
        intersection_number(ci, &e).unwrap_or_else(|x| {
            err = Some(x);
            BigInt::zero()
        })
    });
    match err {
        Some(e) => Err(e),
        None => Ok(form),
    }
}
