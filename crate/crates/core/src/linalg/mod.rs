//! Exact rational linear algebra: matrices over Q, univariate polynomials
//! over Q, and factorization of small-degree characteristic polynomials.
//!
//! Nothing in here touches floating point.

mod factor;
mod matrix;
mod poly;

pub(crate) use factor::squarefree_decompose;
pub use factor::{factor_over_q, rational_roots, Factor, FactorKind, Factorization};
pub use matrix::{Mat, Perm};
pub use poly::Poly;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

/// Exact rational number, always kept in lowest terms with a positive
/// denominator.
pub type Rat = BigRational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LinalgError {
    #[error("{op}: dimension mismatch ({left_rows}x{left_cols} vs {right_rows}x{right_cols})")]
    DimensionMismatch {
        op: &'static str,
        left_rows: usize,
        left_cols: usize,
        right_rows: usize,
        right_cols: usize,
    },
    #[error("{op}: matrix is {rows}x{cols}, expected square")]
    NotSquare {
        op: &'static str,
        rows: usize,
        cols: usize,
    },
    #[error("matrix is singular (determinant {det})")]
    Singular { det: Rat },
    #[error("expected {expected} entries, got {got}")]
    EntryCount { expected: usize, got: usize },
    #[error("{0}: zero polynomial")]
    ZeroPolynomial(&'static str),
    #[error("polynomial {0} is not squarefree")]
    NotSquarefree(String),
    #[error("division by the zero polynomial")]
    DivisionByZero,
    #[error("invalid permutation {0:?}")]
    InvalidPermutation(Vec<usize>),
}

pub fn rat(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

pub fn rat_frac(num: i64, den: i64) -> Rat {
    Rat::new(BigInt::from(num), BigInt::from(den))
}

pub fn rat_int(n: &BigInt) -> Rat {
    Rat::from_integer(n.clone())
}

/// Formats a rational as `p` or `p/q`.
pub fn fmt_rat(r: &Rat) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Formats a vector as `(a, b, c)`.
pub fn fmt_vec(v: &[Rat]) -> String {
    let parts: Vec<String> = v.iter().map(fmt_rat).collect();
    format!("({})", parts.join(", "))
}

pub(crate) fn lcm_of_denominators<'a>(values: impl IntoIterator<Item = &'a Rat>) -> BigInt {
    values
        .into_iter()
        .fold(BigInt::one(), |acc, r| acc.lcm(r.denom()))
}

/// Scales a rational vector to a primitive integer vector whose first
/// nonzero entry is positive. The zero vector is returned unchanged.
pub fn primitive_integer_vector(v: &[Rat]) -> Vec<Rat> {
    let lcm = lcm_of_denominators(v.iter());
    let ints: Vec<BigInt> = v.iter().map(|r| (r * rat_int(&lcm)).to_integer()).collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if g.is_zero() {
        return v.to_vec();
    }
    let lead_negative = ints
        .iter()
        .find(|x| !x.is_zero())
        .is_some_and(|x| x.is_negative());
    let g = if lead_negative { -g } else { g };
    ints.iter().map(|x| rat_int(&(x / &g))).collect()
}

/// Dot product of two rational vectors of equal length.
pub fn dot(a: &[Rat], b: &[Rat]) -> Rat {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}
