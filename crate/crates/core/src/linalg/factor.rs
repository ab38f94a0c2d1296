use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::{rat_int, LinalgError, Poly, Rat};

/// How much is known about a returned factor.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FactorKind {
    Linear,
    /// Degree 2 or 3 with no rational root.
    Irreducible,
    /// Degree >= 4 residue left unfactored.
    PossiblyReducible,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Factor {
    /// Monic.
    pub poly: Poly,
    pub kind: FactorKind,
}

impl Factor {
    pub fn is_resolved(&self) -> bool {
        self.kind != FactorKind::PossiblyReducible
    }
}

/// `scalar * prod(factors)` reproduces the input polynomial.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Factorization {
    pub scalar: Rat,
    pub factors: Vec<Factor>,
}

impl Factorization {
    pub fn product(&self) -> Poly {
        self.factors
            .iter()
            .fold(Poly::constant(self.scalar.clone()), |acc, f| &acc * &f.poly)
    }

    pub fn is_complete(&self) -> bool {
        self.factors.iter().all(Factor::is_resolved)
    }
}

/// All positive divisors of `n != 0`, ascending.
fn divisors(n: &BigInt) -> Vec<BigInt> {
    let n = n.abs();
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = BigInt::one();
    while &d * &d <= n {
        if (&n % &d).is_zero() {
            let q = &n / &d;
            if q != d {
                large.push(q);
            }
            small.push(d.clone());
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

/// Rational roots with multiplicity, ascending, each confirmed by exact
/// evaluation.
pub fn rational_roots(p: &Poly) -> Result<Vec<Rat>, LinalgError> {
    if p.is_zero() {
        return Err(LinalgError::ZeroPolynomial("rational_roots"));
    }
    let mut rest = p.clone();
    let mut roots = Vec::new();
    while rest.coeff(0).is_zero() && rest.degree() > Some(0) {
        roots.push(Rat::zero());
        rest = rest.div_exact(&Poly::t())?;
    }
    if rest.degree() == Some(0) {
        return Ok(roots);
    }
    let ints = rest.primitive_integer_coeffs();
    let lead = ints.last().expect("nonconstant");
    let nums = divisors(&ints[0]);
    let dens = divisors(lead);
    let mut candidates: Vec<Rat> = Vec::new();
    for a in &nums {
        for b in &dens {
            let r = Rat::new(a.clone(), b.clone());
            candidates.push(r.clone());
            candidates.push(-r);
        }
    }
    candidates.sort();
    candidates.dedup();
    for r in candidates {
        while rest.degree() > Some(0) && rest.eval(&r).is_zero() {
            roots.push(r.clone());
            rest = rest.div_exact(&Poly::linear_root(&r))?;
        }
    }
    roots.sort();
    Ok(roots)
}

/// Exact square root of a nonnegative rational, if it is a square.
fn rational_sqrt(r: &Rat) -> Option<Rat> {
    if r.is_negative() {
        return None;
    }
    let n = r.numer().sqrt();
    let d = r.denom().sqrt();
    (&n * &n == *r.numer() && &d * &d == *r.denom()).then(|| Rat::new(n, d))
}

/// Factors a squarefree polynomial over Q into monic factors: rational
/// roots are split off first; a remaining quadratic is split via its
/// discriminant, a remaining cubic is irreducible, anything larger is
/// returned whole and marked [`FactorKind::PossiblyReducible`].
pub fn factor_over_q(p: &Poly) -> Result<Factorization, LinalgError> {
    if p.is_zero() {
        return Err(LinalgError::ZeroPolynomial("factor_over_q"));
    }
    if !p.is_squarefree() {
        return Err(LinalgError::NotSquarefree(p.to_string()));
    }
    let scalar = p.leading();
    let mut factors = Vec::new();
    let roots = rational_roots(p)?;
    let mut residue = p.monic();
    for r in &roots {
        let lin = Poly::linear_root(r);
        residue = residue.div_exact(&lin)?;
        factors.push(Factor {
            poly: lin,
            kind: FactorKind::Linear,
        });
    }
    match residue.degree() {
        Some(0) => {}
        Some(2) => {
            // Rational roots are already gone, so a square discriminant
            // cannot occur; checked anyway.
            let b = residue.coeff(1);
            let c = residue.coeff(0);
            let disc = &b * &b - rat_int(&BigInt::from(4)) * &c;
            if let Some(s) = rational_sqrt(&disc) {
                let two = rat_int(&BigInt::from(2));
                for r in [(-&b - &s) / &two, (-&b + &s) / &two] {
                    factors.push(Factor {
                        poly: Poly::linear_root(&r),
                        kind: FactorKind::Linear,
                    });
                }
            } else {
                factors.push(Factor {
                    poly: residue,
                    kind: FactorKind::Irreducible,
                });
            }
        }
        Some(3) => factors.push(Factor {
            poly: residue,
            kind: FactorKind::Irreducible,
        }),
        Some(_) => factors.push(Factor {
            poly: residue,
            kind: FactorKind::PossiblyReducible,
        }),
        None => unreachable!("monic residue of a nonzero polynomial"),
    }
    Ok(Factorization { scalar, factors })
}

/// `n = k^2 * d` with `d` squarefree; returns `(k, d)`. Sign stays on `d`.
pub(crate) fn squarefree_decompose(n: &BigInt) -> (BigInt, BigInt) {
    let sign = if n.is_negative() {
        -BigInt::one()
    } else {
        BigInt::one()
    };
    let mut rest = n.abs();
    let mut k = BigInt::one();
    let mut d = BigInt::one();
    let mut p = BigInt::from(2);
    while &p * &p <= rest {
        let mut e = 0u32;
        while (&rest % &p).is_zero() {
            rest /= &p;
            e += 1;
        }
        k *= p.pow(e / 2);
        if e % 2 == 1 {
            d *= &p;
        }
        p += 1;
    }
    d *= rest;
    (k, sign * d)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::rat;

    #[test]
    fn rational_roots_of_dynamical_cubic() {
        let p = Poly::from_ints(&[1, -2703, 2703, -1]);
        assert_eq!(rational_roots(&p).unwrap(), vec![rat(1)]);
    }

    #[test]
    fn rational_roots_simple_cases() {
        assert_eq!(
            rational_roots(&Poly::from_ints(&[2, -3, 1])).unwrap(),
            vec![rat(1), rat(2)]
        );
        assert!(rational_roots(&Poly::from_ints(&[-3, 0, 1]))
            .unwrap()
            .is_empty());
        assert_eq!(
            rational_roots(&Poly::from_ints(&[1, -2, 1])).unwrap(),
            vec![rat(1), rat(1)]
        );
        // 6t^2 - 5t + 1 = (2t - 1)(3t - 1)
        assert_eq!(
            rational_roots(&Poly::from_ints(&[1, -5, 6])).unwrap(),
            vec![Rat::new(1.into(), 3.into()), Rat::new(1.into(), 2.into())]
        );
        assert_eq!(
            rational_roots(&Poly::from_ints(&[0, 0, 1])).unwrap(),
            vec![rat(0), rat(0)]
        );
        assert!(rational_roots(&Poly::zero()).is_err());
    }

    #[test]
    fn factor_dynamical_cubic() {
        let p = Poly::from_ints(&[1, -2703, 2703, -1]);
        let f = factor_over_q(&p).unwrap();
        assert_eq!(f.factors.len(), 2);
        assert_eq!(f.factors[0].poly, Poly::from_ints(&[-1, 1]));
        assert_eq!(f.factors[1].poly, Poly::from_ints(&[1, -2702, 1]));
        assert_eq!(f.factors[1].kind, FactorKind::Irreducible);
        assert_eq!(f.product(), p);
    }

    #[test]
    fn factor_irreducible_quadratic() {
        let p = Poly::from_ints(&[-3, 0, 1]);
        let f = factor_over_q(&p).unwrap();
        assert_eq!(f.factors.len(), 1);
        assert_eq!(f.factors[0].kind, FactorKind::Irreducible);
    }

    #[test]
    fn factor_rejects_square() {
        assert!(matches!(
            factor_over_q(&Poly::from_ints(&[1, -2, 1])),
            Err(LinalgError::NotSquarefree(_))
        ));
    }

    #[test]
    fn quartic_residue_is_flagged() {
        // (t^2 - 2)(t^2 - 3)
        let p = &Poly::from_ints(&[-2, 0, 1]) * &Poly::from_ints(&[-3, 0, 1]);
        let f = factor_over_q(&p).unwrap();
        assert_eq!(f.factors.len(), 1);
        assert_eq!(f.factors[0].kind, FactorKind::PossiblyReducible);
        assert!(!f.is_complete());
    }

    #[test]
    fn squarefree_decomposition() {
        assert_eq!(
            squarefree_decompose(&BigInt::from(7300800)),
            (BigInt::from(1560), BigInt::from(3))
        );
        assert_eq!(
            squarefree_decompose(&BigInt::from(12)),
            (BigInt::from(2), BigInt::from(3))
        );
        assert_eq!(
            squarefree_decompose(&BigInt::from(-8)),
            (BigInt::from(2), BigInt::from(-2))
        );
    }
}
