//! Integer matrices on `N^1(X)` of fiberwise translations on a threefold
//! with three elliptic fibrations `π_i: X → P^2`.
//!
//! On the generic fiber of `π_i`, translation by a degree-zero class `y`
//! acts on `Pic` by `x ↦ x + deg(x)·y`. That fixes the action modulo
//! `L_i`; the missing row (the `L_i` components of the images of `L_j` and
//! `L_k`) is solved from two constraints:
//!
//! 1. the map for `(i, k, j)` is both the inverse of the `(i, j, k)` map
//!    and its conjugate by the transposition of `j` and `k`;
//! 2. restricted to the surface `π_i^{-1}(line)`, the map preserves the
//!    self-intersection of `L_j`.
//!
//! Matrices are pushforwards acting on coordinate columns.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::lattice::{restrict_to_surface, LatticeContext, LatticeError};
use crate::linalg::{
    dot, fmt_rat, rat, rat_int, rational_roots, LinalgError, Mat, Perm, Poly, Rat,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TranslationError {
    #[error("translation synthesis supports rank 3 only, context has rank {0}")]
    UnsupportedRank(usize),
    #[error("indices ({0}, {1}, {2}) must be distinct and below the rank")]
    InvalidSpec(usize, usize, usize),
    #[error("translation class has degree {0} on the generic fiber, expected 0")]
    NonzeroDegree(String),
    #[error("quotient block is not invertible over the integers (det {0})")]
    BlockNotUnimodular(String),
    #[error("constraints are inconsistent: conjugation residual {conjugation}, surface residual {surface}")]
    Inconsistent {
        conjugation: String,
        surface: String,
    },
    #[error("constraints do not determine the unknown row: {0}")]
    Underdetermined(String),
    #[error("constraints admit several integer solutions: {0}")]
    Ambiguous(String),
    #[error("no integer solution; rational candidates for m: {0}")]
    NonInteger(String),
    #[error("synthesized matrix has determinant {0}, expected ±1")]
    NotUnimodular(String),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// A fibration `π_i` with the fiber degrees `deg(E_ij) = T(L_j, L_i, L_i)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FibrationSpec {
    pub index: usize,
    pub degrees: Vec<BigInt>,
}

impl FibrationSpec {
    pub fn from_context(ctx: &LatticeContext, index: usize) -> Result<Self, TranslationError> {
        if index >= ctx.rank() {
            return Err(LatticeError::IndexOutOfRange {
                index,
                rank: ctx.rank(),
            }
            .into());
        }
        Ok(FibrationSpec {
            index,
            degrees: (0..ctx.rank())
                .map(|j| ctx.form().get(j, index, index).clone())
                .collect(),
        })
    }
}

/// Translation by `E_ij - E_ik` on the generic fiber of `π_i` (0-based).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct TranslationSpec {
    fibration: usize,
    plus: usize,
    minus: usize,
}

impl TranslationSpec {
    pub fn new(
        fibration: usize,
        plus: usize,
        minus: usize,
        rank: usize,
    ) -> Result<Self, TranslationError> {
        let distinct = fibration != plus && plus != minus && fibration != minus;
        if !distinct || fibration >= rank || plus >= rank || minus >= rank {
            return Err(TranslationError::InvalidSpec(
                fibration + 1,
                plus + 1,
                minus + 1,
            ));
        }
        Ok(TranslationSpec {
            fibration,
            plus,
            minus,
        })
    }

    pub fn fibration(&self) -> usize {
        self.fibration
    }

    pub fn plus(&self) -> usize {
        self.plus
    }

    pub fn minus(&self) -> usize {
        self.minus
    }

    /// Translation in the opposite direction, `(i, k, j)`.
    pub fn reversed(&self) -> TranslationSpec {
        TranslationSpec {
            fibration: self.fibration,
            plus: self.minus,
            minus: self.plus,
        }
    }
}

impl fmt::Display for TranslationSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "({},{},{})",
            self.fibration + 1,
            self.plus + 1,
            self.minus + 1
        )
    }
}

/// Action of `x ↦ x + deg(x)·y` on `Pic / L_i` in the basis
/// `(E_ij, E_ik)`, with `y = y_j E_ij + y_k E_ik`. Columns are images.
#[allow(clippy::needless_range_loop)]
pub fn translation_block(
    deg_j: &BigInt,
    deg_k: &BigInt,
    y_j: &BigInt,
    y_k: &BigInt,
) -> Result<Mat, TranslationError> {
    let deg_y = deg_j * y_j + deg_k * y_k;
    if !deg_y.is_zero() {
        return Err(TranslationError::NonzeroDegree(deg_y.to_string()));
    }
    let y = [rat_int(y_j), rat_int(y_k)];
    let d = [rat_int(deg_j), rat_int(deg_k)];
    let mut block = Mat::identity(2);
    for r in 0..2 {
        for c in 0..2 {
            let v = block.get(r, c) + &y[r] * &d[c];
            block.set(r, c, v);
        }
    }
    Ok(block)
}

/// Quotient action of the translation `spec` (translation class
/// `E_ij - E_ik`).
pub fn quotient_action(
    spec: &TranslationSpec,
    ctx: &LatticeContext,
) -> Result<Mat, TranslationError> {
    let fib = FibrationSpec::from_context(ctx, spec.fibration)?;
    translation_block(
        &fib.degrees[spec.plus],
        &fib.degrees[spec.minus],
        &BigInt::one(),
        &-BigInt::one(),
    )
}

/// How the unknown row `(m, n)` was pinned down. `m` sits in row `i` of
/// the `L_j` column, `n` in row `i` of the `L_k` column.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolverTrace {
    /// The conjugation constraint as `q·m = p·n`; `None` when it forces
    /// `m = n = 0`.
    pub conjugation_direction: Option<(BigInt, BigInt)>,
    /// Human-readable form of the conjugation constraint, e.g. `m = 2n`.
    pub conjugation_relation: String,
    /// Surface constraint `c2·m^2 + c1·m + c0 = target`, as `[c0, c1, c2]`.
    pub surface_coefficients: [Rat; 3],
    pub surface_target: Rat,
    /// E.g. `(m·Λ1 + 4·Λ2 - 3·Λ3)^2 = Λ2^2 = 3`.
    pub surface_equation: String,
    /// E.g. `6m - 69 = 3`.
    pub surface_expanded: String,
    /// Rational values of `m` satisfying the surface constraint.
    pub surface_candidates: Vec<Rat>,
    pub m: BigInt,
    pub n: BigInt,
}

fn fmt_coeff_var(c: &BigInt, var: &str) -> String {
    if c.is_one() {
        var.to_string()
    } else if *c == -BigInt::one() {
        format!("-{var}")
    } else {
        format!("{c}{var}")
    }
}

fn fmt_relation(p: &BigInt, q: &BigInt) -> String {
    format!("{} = {}", fmt_coeff_var(q, "m"), fmt_coeff_var(p, "n"))
}

/// Renders `c0 + c1·m + c2·m^2` with descending powers.
fn fmt_quadratic_in_m(c: &[Rat; 3]) -> String {
    let p = Poly::new(vec![c[0].clone(), c[1].clone(), c[2].clone()]);
    if p.is_zero() {
        return "0".into();
    }
    let mut out = String::new();
    for (i, var) in [(2, "m^2"), (1, "m"), (0, "")] {
        let v = &c[i];
        if v.is_zero() {
            continue;
        }
        let mag = v.abs();
        if out.is_empty() {
            if v.is_negative() {
                out.push('-');
            }
        } else {
            out.push_str(if v.is_negative() { " - " } else { " + " });
        }
        if i == 0 || !mag.is_one() {
            out.push_str(&fmt_rat(&mag));
        }
        out.push_str(var);
    }
    out
}

fn fmt_surface_image(spec: &TranslationSpec, block: &Mat) -> String {
    let mut terms = vec![(spec.fibration, "m".to_string())];
    terms.push((spec.plus, fmt_rat(block.get(0, 0))));
    terms.push((spec.minus, fmt_rat(block.get(1, 0))));
    terms.sort_by_key(|(idx, _)| *idx);
    let mut out = String::new();
    for (idx, coeff) in terms {
        if coeff == "0" {
            continue;
        }
        let (neg, mag) = match coeff.strip_prefix('-') {
            Some(m) => (true, m.to_string()),
            None => (false, coeff),
        };
        if out.is_empty() {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        if mag != "1" {
            out.push_str(&mag);
            out.push('·');
        }
        out.push_str(&format!("Λ{}", idx + 1));
    }
    out
}

/// Solves for `(m, n)`. `block` is the quotient action on `(E_ij, E_ik)`.
pub fn solve_unknown_row(
    spec: &TranslationSpec,
    block: &Mat,
    ctx: &LatticeContext,
) -> Result<SolverTrace, TranslationError> {
    if ctx.rank() != 3 {
        return Err(TranslationError::UnsupportedRank(ctx.rank()));
    }
    let det = block.det()?;
    if !block.is_integral() || det.abs() != Rat::one() {
        return Err(TranslationError::BlockNotUnimodular(fmt_rat(&det)));
    }
    let (i, j) = (spec.fibration, spec.plus);

    // (1) With M = [[1, r], [0, B]] in the ordering (i, j, k) and S the swap,
    // M^{-1} = [[1, -rB^{-1}], [0, B^{-1}]] and PMP = [[1, rS], [0, SBS]].
    // Equality needs B^{-1} = SBS and r(B^{-1} + S) = 0.
    let inv = block.inverse()?;
    let swap = Perm::transposition(2, 0, 1)?.to_mat();
    let conj_residual = inv.sub(&block.perm_conjugate(&Perm::transposition(2, 0, 1)?)?)?;
    let conj_matrix = inv.add(&swap)?;
    let family = conj_matrix.transpose().kernel();

    // (2) image of L_j is m·L_i + B00·L_j + B10·L_k; its self-intersection
    // on the surface must equal b(L_j, L_j).
    let b = restrict_to_surface(ctx, i)?;
    let mut w = vec![Rat::zero(); 3];
    w[spec.plus] = block.get(0, 0).clone();
    w[spec.minus] = block.get(1, 0).clone();
    let bw = b.mul_vec(&w)?;
    let c2 = b.get(i, i).clone();
    let c1 = &bw[i] * rat(2);
    let c0 = dot(&w, &bw);
    let target = b.get(j, j).clone();
    let coeffs = [c0.clone(), c1.clone(), c2.clone()];
    let surface_equation = format!(
        "({})^2 = Λ{}^2 = {}",
        fmt_surface_image(spec, block),
        j + 1,
        fmt_rat(&target)
    );
    let surface_expanded = format!("{} = {}", fmt_quadratic_in_m(&coeffs), fmt_rat(&target));
    let surface_poly = Poly::new(vec![&c0 - &target, c1, c2]);

    if !conj_residual.is_zero() {
        return Err(TranslationError::Inconsistent {
            conjugation: conj_residual.to_string(),
            surface: fmt_rat(&surface_poly.eval(&Rat::zero())),
        });
    }

    let direction = match family.len() {
        0 => None,
        1 => Some((family[0][0].to_integer(), family[0][1].to_integer())),
        _ => {
            return Err(TranslationError::Underdetermined(
                "conjugation constraint is vacuous".into(),
            ))
        }
    };

    let base = |candidates: Vec<Rat>, m: BigInt, n: BigInt, relation: String| SolverTrace {
        conjugation_direction: direction.clone(),
        conjugation_relation: relation,
        surface_coefficients: coeffs.clone(),
        surface_target: target.clone(),
        surface_equation: surface_equation.clone(),
        surface_expanded: surface_expanded.clone(),
        surface_candidates: candidates,
        m,
        n,
    };

    let Some((p, q)) = direction.clone() else {
        // Only m = n = 0 is allowed; the surface equation must hold there.
        let residual = surface_poly.eval(&Rat::zero());
        if !residual.is_zero() {
            return Err(TranslationError::Inconsistent {
                conjugation: "0".into(),
                surface: fmt_rat(&residual),
            });
        }
        return Ok(base(
            vec![],
            BigInt::zero(),
            BigInt::zero(),
            "m = n = 0".into(),
        ));
    };
    let relation = fmt_relation(&p, &q);
    if p.is_zero() {
        return Err(TranslationError::Underdetermined(format!(
            "{relation} forces m = 0 and leaves n free"
        )));
    }
    if surface_poly.is_zero() {
        return Err(TranslationError::Underdetermined(format!(
            "surface equation {surface_expanded} holds for every m"
        )));
    }
    let candidates = if surface_poly.degree() == Some(0) {
        Vec::new()
    } else {
        let mut r = rational_roots(&surface_poly)?;
        r.dedup();
        r
    };
    if candidates.is_empty() {
        return Err(TranslationError::Inconsistent {
            conjugation: relation,
            surface: format!("{surface_expanded} has no rational solution"),
        });
    }
    // n = q·m / p must be an integer as well.
    let integral: Vec<(BigInt, BigInt)> = candidates
        .iter()
        .filter(|m| m.is_integer())
        .map(|m| m.to_integer())
        .filter(|m| (m * &q % &p).is_zero())
        .map(|m| {
            let n = &m * &q / &p;
            (m, n)
        })
        .collect();
    let list = || {
        candidates
            .iter()
            .map(fmt_rat)
            .collect::<Vec<_>>()
            .join(", ")
    };
    match integral.as_slice() {
        [] => Err(TranslationError::NonInteger(list())),
        [(m, n)] => Ok(base(candidates.clone(), m.clone(), n.clone(), relation)),
        _ => Err(TranslationError::Ambiguous(list())),
    }
}

/// A synthesized pushforward matrix with its derivation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SynthesizedMap {
    pub spec: TranslationSpec,
    pub block: Mat,
    pub matrix: Mat,
    pub trace: SolverTrace,
}

impl SynthesizedMap {
    /// `M^T b M = b` for the surface form `b` of the map's own fibration,
    /// on all basis pairs.
    pub fn preserves_surface_form(&self, ctx: &LatticeContext) -> Result<bool, TranslationError> {
        let b = restrict_to_surface(ctx, self.spec.fibration)?;
        let pulled = self.matrix.transpose().mul(&b)?.mul(&self.matrix)?;
        Ok(pulled == b)
    }
}

/// Assembles the full pushforward matrix of `spec`.
pub fn build_matrix(
    spec: &TranslationSpec,
    ctx: &LatticeContext,
) -> Result<SynthesizedMap, TranslationError> {
    let block = quotient_action(spec, ctx)?;
    let trace = solve_unknown_row(spec, &block, ctx)?;
    let (i, j, k) = (spec.fibration, spec.plus, spec.minus);
    let mut m = Mat::identity(3);
    m.set(j, j, block.get(0, 0).clone());
    m.set(k, j, block.get(1, 0).clone());
    m.set(j, k, block.get(0, 1).clone());
    m.set(k, k, block.get(1, 1).clone());
    m.set(i, j, rat_int(&trace.m));
    m.set(i, k, rat_int(&trace.n));
    let det = m.det()?;
    if det.abs() != Rat::one() {
        return Err(TranslationError::NotUnimodular(fmt_rat(&det)));
    }
    Ok(SynthesizedMap {
        spec: *spec,
        block,
        matrix: m,
        trace,
    })
}

/// Pullback matrix of the composite `f_1 ∘ f_2 ∘ ... ∘ f_r`:
/// `(M_1 M_2 ⋯ M_r)^{-1}`. The empty composite is the identity.
pub fn compose_pullback(maps: &[&Mat], rank: usize) -> Result<Mat, TranslationError> {
    let product = maps
        .iter()
        .try_fold(Mat::identity(rank), |acc, m| acc.mul(m))?;
    Ok(product.inverse()?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chow::{triple_form, Ambient, CompleteIntersection};

    fn ctx() -> LatticeContext {
        let ci =
            CompleteIntersection::new(Ambient::new(vec![2, 2, 2]).unwrap(), vec![vec![1, 1, 1]; 3])
                .unwrap();
        LatticeContext::new(triple_form(&ci).unwrap())
    }

    fn spec(i: usize, j: usize, k: usize) -> TranslationSpec {
        TranslationSpec::new(i - 1, j - 1, k - 1, 3).unwrap()
    }

    #[test]
    fn quotient_block_for_degree_three() {
        let b = quotient_action(&spec(1, 2, 3), &ctx()).unwrap();
        assert_eq!(b, Mat::from_ints(&[vec![4, 3], vec![-3, -2]]));
    }

    #[test]
    fn quotient_block_edge_cases() {
        let zero = translation_block(&3.into(), &3.into(), &0.into(), &0.into()).unwrap();
        assert_eq!(zero, Mat::identity(2));
        let two = translation_block(&2.into(), &2.into(), &1.into(), &(-1).into()).unwrap();
        assert_eq!(two, Mat::from_ints(&[vec![3, 2], vec![-2, -1]]));
        assert_eq!(two.det().unwrap(), rat(1));
        assert!(matches!(
            translation_block(&2.into(), &3.into(), &1.into(), &(-1).into()),
            Err(TranslationError::NonzeroDegree(_))
        ));
    }

    #[test]
    fn quotient_blocks_add() {
        let d = BigInt::from(3);
        let a = translation_block(&d, &d, &2.into(), &(-2).into()).unwrap();
        let b = translation_block(&d, &d, &(-5).into(), &5.into()).unwrap();
        let sum = translation_block(&d, &d, &(-3).into(), &3.into()).unwrap();
        assert_eq!(a.mul(&b).unwrap(), sum);
    }

    #[test]
    fn solves_m_and_n() {
        let s = spec(1, 2, 3);
        let t = solve_unknown_row(&s, &quotient_action(&s, &ctx()).unwrap(), &ctx()).unwrap();
        assert_eq!((t.m.clone(), t.n.clone()), (12.into(), 6.into()));
        assert_eq!(t.conjugation_relation, "m = 2n");
        assert_eq!(t.surface_equation, "(m·Λ1 + 4·Λ2 - 3·Λ3)^2 = Λ2^2 = 3");
        assert_eq!(t.surface_expanded, "6m - 69 = 3");
        assert_eq!(t.surface_candidates, vec![rat(12)]);
    }

    #[test]
    fn identity_block_gives_zero_row() {
        let t = solve_unknown_row(&spec(1, 2, 3), &Mat::identity(2), &ctx()).unwrap();
        assert_eq!((t.m, t.n), (BigInt::zero(), BigInt::zero()));
    }

    #[test]
    fn builds_displayed_matrices() {
        let c = ctx();
        assert_eq!(
            build_matrix(&spec(1, 2, 3), &c).unwrap().matrix,
            Mat::from_ints(&[vec![1, 12, 6], vec![0, 4, 3], vec![0, -3, -2]])
        );
        assert_eq!(
            build_matrix(&spec(2, 3, 1), &c).unwrap().matrix,
            Mat::from_ints(&[vec![-2, 0, -3], vec![6, 1, 12], vec![3, 0, 4]])
        );
        assert_eq!(
            build_matrix(&spec(3, 1, 2), &c).unwrap().matrix,
            Mat::from_ints(&[vec![4, 3, 0], vec![-3, -2, 0], vec![12, 6, 1]])
        );
    }

    #[test]
    fn reversed_translation_is_inverse_and_conjugate() {
        let c = ctx();
        for (i, j, k) in [(1, 2, 3), (2, 3, 1), (3, 1, 2)] {
            let s = spec(i, j, k);
            let fwd = build_matrix(&s, &c).unwrap();
            let back = build_matrix(&s.reversed(), &c).unwrap();
            assert_eq!(fwd.matrix.mul(&back.matrix).unwrap(), Mat::identity(3));
            let p = Perm::transposition(3, j - 1, k - 1).unwrap();
            assert_eq!(fwd.matrix.perm_conjugate(&p).unwrap(), back.matrix);
        }
    }

    #[test]
    fn synthesized_maps_fix_their_fibration_and_surface_form() {
        let c = ctx();
        for (i, j, k) in [
            (1, 2, 3),
            (1, 3, 2),
            (2, 3, 1),
            (2, 1, 3),
            (3, 1, 2),
            (3, 2, 1),
        ] {
            let s = spec(i, j, k);
            let m = build_matrix(&s, &c).unwrap();
            assert_eq!(m.matrix.det().unwrap(), rat(1));
            let mut e = vec![rat(0); 3];
            e[i - 1] = rat(1);
            assert_eq!(m.matrix.mul_vec(&e).unwrap(), e);
            assert!(m.preserves_surface_form(&c).unwrap());
        }
    }

    #[test]
    fn composite_pullback() {
        let c = ctx();
        let ms: Vec<Mat> = [(1, 2, 3), (2, 3, 1), (3, 1, 2)]
            .iter()
            .map(|&(i, j, k)| build_matrix(&spec(i, j, k), &c).unwrap().matrix)
            .collect();
        let refs: Vec<&Mat> = ms.iter().collect();
        assert_eq!(
            compose_pullback(&refs, 3).unwrap(),
            Mat::from_ints(&[
                vec![-44, -330, -615],
                vec![60, 451, 840],
                vec![165, 1230, 2296]
            ])
        );
        assert_eq!(compose_pullback(&[], 3).unwrap(), Mat::identity(3));
        assert_eq!(
            compose_pullback(&refs[..1], 3).unwrap(),
            ms[0].inverse().unwrap()
        );
    }

    #[test]
    fn rejects_bad_specs_and_ranks() {
        assert!(TranslationSpec::new(0, 0, 1, 3).is_err());
        assert!(TranslationSpec::new(0, 1, 3, 3).is_err());
        let form = crate::chow::TripleForm::from_fn(2, |_, _, _| 1.into());
        let small = LatticeContext::new(form);
        let s = TranslationSpec::new(0, 1, 1, 2);
        assert!(s.is_err());
        let s = TranslationSpec {
            fibration: 0,
            plus: 1,
            minus: 0,
        };
        assert!(matches!(
            solve_unknown_row(&s, &Mat::identity(2), &small),
            Err(TranslationError::UnsupportedRank(2))
        ));
    }
}
