//! Primitivity criteria for a birational self-map acting on `N^1(X)`.
//!
//! Two routes are checked. The classical one needs `f^*` to act
//! irreducibly over Q. The variant needs (1) the fixed subspace of `f^*`
//! to meet the pseudoeffective cone only in zero and (2) no proper
//! `f^*`-stable face of that cone defined over Q. Only the Eff-cone branch
//! of the variant is implemented; the geometric hypotheses are declared by
//! the caller and echoed, never verified.

use num_traits::{One, ToPrimitive, Zero};
use thiserror::Error;

use crate::lattice::{
    exclude_from_eff, exclude_nef_curve, exclude_via_transport, CurveClass, DivisorClass,
    ExclusionCertificate, LatticeContext, LatticeError, Transport,
};
use crate::linalg::{factor_over_q, FactorKind, LinalgError, Mat, Poly, Rat};
use crate::roots::{spectral_radius, RootError, SpectralRadius};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PrimitivityError {
    #[error("characteristic polynomial {0} is not squarefree; stable subspaces cannot be enumerated completely")]
    NotSquarefree(String),
    #[error("factor {0} of the characteristic polynomial is not resolved over Q")]
    UnresolvedFactor(String),
    #[error("subspace from factor {0} is not stable")]
    NotStable(String),
    #[error("annihilator {0} is not an eigenvector of the transpose")]
    NotEigenvector(String),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error(transparent)]
    Roots(#[from] RootError),
}

/// Outcome of the classical irreducibility test on `χ(f^*)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Irreducibility {
    Irreducible {
        chi: Poly,
    },
    /// `witness` is a nontrivial monic factor of `χ`.
    Reducible {
        chi: Poly,
        witness: Poly,
    },
    /// A residue of degree at least four was left unfactored.
    Unresolved {
        chi: Poly,
        residue: Poly,
    },
}

impl Irreducibility {
    pub fn is_irreducible(&self) -> bool {
        matches!(self, Irreducibility::Irreducible { .. })
    }

    pub fn chi(&self) -> &Poly {
        match self {
            Irreducibility::Irreducible { chi }
            | Irreducibility::Reducible { chi, .. }
            | Irreducibility::Unresolved { chi, .. } => chi,
        }
    }
}

pub fn check_irreducibility(m: &Mat) -> Result<Irreducibility, PrimitivityError> {
    let chi = m.char_poly()?;
    if !chi.is_squarefree() {
        let witness = chi.gcd(&chi.derivative());
        return Ok(Irreducibility::Reducible { chi, witness });
    }
    let f = factor_over_q(&chi)?;
    if f.factors.len() > 1 {
        let witness = f.factors[0].poly.clone();
        return Ok(Irreducibility::Reducible { chi, witness });
    }
    let only = &f.factors[0];
    Ok(match only.kind {
        FactorKind::PossiblyReducible => Irreducibility::Unresolved {
            residue: only.poly.clone(),
            chi,
        },
        FactorKind::Linear | FactorKind::Irreducible => Irreducibility::Irreducible { chi },
    })
}

/// Exclusion of both rays `±generator` from the pseudoeffective cone.
/// Every certificate found is kept: the first one for each sign from the
/// full search, plus a transport-only certificate when the first one was a
/// direct covering-curve test.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RayExclusion {
    pub generator: DivisorClass,
    pub positive: Vec<ExclusionCertificate>,
    pub negative: Vec<ExclusionCertificate>,
}

impl RayExclusion {
    pub fn is_certified(&self) -> bool {
        !self.positive.is_empty() && !self.negative.is_empty()
    }

    pub fn certificates(&self) -> impl Iterator<Item = &ExclusionCertificate> {
        self.positive.iter().chain(self.negative.iter())
    }
}

fn certificates_for(
    ctx: &LatticeContext,
    d: &DivisorClass,
    transports: &[Transport],
    depth: usize,
) -> Result<Vec<ExclusionCertificate>, PrimitivityError> {
    let mut out = Vec::new();
    if let Some(c) = exclude_from_eff(ctx, d, transports, depth)? {
        let direct = matches!(c, ExclusionCertificate::CoveringCurve { .. });
        out.push(c);
        if direct {
            if let Some(t) = exclude_via_transport(ctx, d, transports, depth)? {
                out.push(t);
            }
        }
    }
    Ok(out)
}

pub fn exclude_ray(
    ctx: &LatticeContext,
    generator: &DivisorClass,
    transports: &[Transport],
    depth: usize,
) -> Result<RayExclusion, PrimitivityError> {
    Ok(RayExclusion {
        generator: generator.clone(),
        positive: certificates_for(ctx, generator, transports, depth)?,
        negative: certificates_for(ctx, &generator.neg(), transports, depth)?,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FixedSubspaceCondition {
    /// `ker(f^* - I) = 0`.
    Trivial,
    /// One-dimensional fixed subspace; certified iff both rays are excluded.
    Ray(RayExclusion),
    /// Fixed subspace of dimension at least two; certificates for a
    /// spanning set would not cover interior combinations.
    Inconclusive { basis: Vec<Vec<Rat>> },
}

impl FixedSubspaceCondition {
    pub fn is_certified(&self) -> bool {
        match self {
            FixedSubspaceCondition::Trivial => true,
            FixedSubspaceCondition::Ray(r) => r.is_certified(),
            FixedSubspaceCondition::Inconclusive { .. } => false,
        }
    }
}

pub fn fixed_subspace_condition(
    m: &Mat,
    ctx: &LatticeContext,
    transports: &[Transport],
    depth: usize,
) -> Result<FixedSubspaceCondition, PrimitivityError> {
    let n = m.rows();
    let basis = m.sub(&Mat::identity(n))?.kernel();
    Ok(match basis.len() {
        0 => FixedSubspaceCondition::Trivial,
        1 => FixedSubspaceCondition::Ray(exclude_ray(
            ctx,
            &DivisorClass::new(basis[0].clone()),
            transports,
            depth,
        )?),
        _ => FixedSubspaceCondition::Inconclusive { basis },
    })
}

/// `ker g(M)` for a monic product `g` of rational factors of `χ(M)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StableSubspace {
    /// Primitive integer vectors.
    pub basis: Vec<Vec<Rat>>,
    pub factor: Poly,
}

impl StableSubspace {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// The matrix `C` with `M·B = B·C`, where `B` has the basis as
    /// columns; `None` if the span is not `M`-stable.
    pub fn restriction(&self, m: &Mat) -> Result<Option<Mat>, LinalgError> {
        let b = Mat::from_columns(&self.basis)?;
        let bt = b.transpose();
        let mb = m.mul(&b)?;
        let c = bt.mul(&b)?.inverse()?.mul(&bt)?.mul(&mb)?;
        Ok((b.mul(&c)? == mb).then_some(c))
    }
}

/// All rational `M`-stable proper nonzero subspaces, one per proper
/// nonempty subset of the rational factors of a squarefree `χ(M)`, in
/// subset-bitmask order.
pub fn enumerate_stable_subspaces(m: &Mat) -> Result<Vec<StableSubspace>, PrimitivityError> {
    let chi = m.char_poly()?;
    if !chi.is_squarefree() {
        return Err(PrimitivityError::NotSquarefree(chi.to_string()));
    }
    let f = factor_over_q(&chi)?;
    if let Some(bad) = f.factors.iter().find(|x| !x.is_resolved()) {
        return Err(PrimitivityError::UnresolvedFactor(bad.poly.to_string()));
    }
    let k = f.factors.len();
    let mut out = Vec::new();
    for mask in 1..(1u64 << k) - 1 {
        let g = (0..k)
            .filter(|i| mask >> i & 1 == 1)
            .fold(Poly::one(), |acc, i| &acc * &f.factors[i].poly);
        let basis = g.eval_mat(m)?.kernel();
        let s = StableSubspace { basis, factor: g };
        if s.restriction(m)?.is_none() {
            return Err(PrimitivityError::NotStable(s.factor.to_string()));
        }
        out.push(s);
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq)]
#[allow(clippy::large_enum_variant)]
pub enum Discharge {
    /// One-dimensional subspace whose two rays are not pseudoeffective.
    FaceExclusion(RayExclusion),
    /// Codimension-one subspace whose annihilator `u` (an eigenvector of
    /// the transpose) contains no nonzero nef curve class.
    DualFaceExclusion {
        annihilator: CurveClass,
        eigenvalue: Rat,
        positive: ExclusionCertificate,
        negative: ExclusionCertificate,
    },
    Unresolved {
        reason: String,
    },
}

impl Discharge {
    pub fn is_discharged(&self) -> bool {
        match self {
            Discharge::FaceExclusion(r) => r.is_certified(),
            Discharge::DualFaceExclusion { .. } => true,
            Discharge::Unresolved { .. } => false,
        }
    }

    pub fn certificates(&self) -> Vec<&ExclusionCertificate> {
        match self {
            Discharge::FaceExclusion(r) => r.certificates().collect(),
            Discharge::DualFaceExclusion {
                positive, negative, ..
            } => vec![positive, negative],
            Discharge::Unresolved { .. } => Vec::new(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubspaceDischarge {
    pub subspace: StableSubspace,
    pub discharge: Discharge,
}

pub fn stable_face_condition(
    subspaces: &[StableSubspace],
    m: &Mat,
    ctx: &LatticeContext,
    transports: &[Transport],
    depth: usize,
) -> Result<Vec<SubspaceDischarge>, PrimitivityError> {
    let n = m.rows();
    let mut out = Vec::with_capacity(subspaces.len());
    for s in subspaces {
        let discharge = if s.dim() == 1 {
            let ray = exclude_ray(
                ctx,
                &DivisorClass::new(s.basis[0].clone()),
                transports,
                depth,
            )?;
            if ray.is_certified() {
                Discharge::FaceExclusion(ray)
            } else {
                Discharge::Unresolved {
                    reason: "a ray of the subspace was not excluded from the pseudoeffective cone"
                        .into(),
                }
            }
        } else if s.dim() + 1 == n {
            let ann = Mat::from_columns(&s.basis)?.transpose().kernel();
            let u = ann[0].clone();
            let image = m.transpose().mul_vec(&u)?;
            let pivot = u
                .iter()
                .position(|x| !x.is_zero())
                .expect("kernel vectors are nonzero");
            let eigenvalue = &image[pivot] / &u[pivot];
            if image.iter().zip(&u).any(|(a, b)| *a != &eigenvalue * b) {
                return Err(PrimitivityError::NotEigenvector(crate::linalg::fmt_vec(&u)));
            }
            let annihilator = CurveClass::new(u);
            match exclude_nef_curve(ctx, &annihilator)? {
                Some((positive, negative)) => Discharge::DualFaceExclusion {
                    annihilator,
                    eigenvalue,
                    positive,
                    negative,
                },
                None => Discharge::Unresolved {
                    reason: "the annihilator line may contain a nef curve class".into(),
                },
            }
        } else {
            Discharge::Unresolved {
                reason: format!(
                    "no discharge strategy for a {}-dimensional subspace in rank {n}",
                    s.dim()
                ),
            }
        };
        out.push(SubspaceDischarge {
            subspace: s.clone(),
            discharge,
        });
    }
    Ok(out)
}

/// Geometric hypotheses of the theorems, declared by the user.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Hypotheses {
    pub minimal_calabi_yau: Option<bool>,
    pub dimension: Option<u32>,
    pub picard_number: Option<u32>,
    /// Automatic for minimal Calabi–Yau threefolds.
    pub m_abundant: Option<bool>,
}

impl Hypotheses {
    pub fn calabi_yau_threefold(picard_number: u32) -> Self {
        Hypotheses {
            minimal_calabi_yau: Some(true),
            dimension: Some(3),
            picard_number: Some(picard_number),
            m_abundant: None,
        }
    }

    /// Reasons the hypotheses do not hold as declared; empty when they
    /// all do.
    pub fn gaps(&self, rank: usize) -> Vec<String> {
        let mut out = Vec::new();
        if self.minimal_calabi_yau != Some(true) {
            out.push("minimal Calabi–Yau not declared".to_string());
        }
        match self.dimension {
            None => out.push("dimension not declared".into()),
            Some(d) if d < 3 => out.push(format!("dimension {d} is below 3")),
            Some(_) => {}
        }
        match self.picard_number {
            None => out.push("Picard number not declared".into()),
            Some(p) if p < 2 => out.push(format!("Picard number {p} is below 2")),
            Some(p) if p as usize != rank => out.push(format!(
                "declared Picard number {p} differs from lattice rank {rank}"
            )),
            Some(_) => {}
        }
        if self.m_abundant != Some(true) && self.dimension != Some(3) {
            out.push("m-abundance not declared".into());
        }
        out
    }

    /// m-abundance is automatic in dimension three for minimal CY.
    pub fn m_abundance_automatic(&self) -> bool {
        self.dimension == Some(3) && self.minimal_calabi_yau == Some(true)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    Primitive,
    /// Both conditions hold but the geometric hypotheses are incomplete.
    ConditionsVerified {
        gaps: Vec<String>,
    },
    Inconclusive {
        reasons: Vec<String>,
    },
}

impl Verdict {
    pub fn label(&self) -> &'static str {
        match self {
            Verdict::Primitive => "primitive",
            Verdict::ConditionsVerified { .. } => {
                "conditions verified; theorem hypotheses undeclared"
            }
            Verdict::Inconclusive { .. } => "inconclusive",
        }
    }
}

/// Bounds on `log d_1`, from the rational enclosure of `d_1`, widened
/// outward so that rounding cannot exclude the true value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EntropyBound {
    pub lower: f64,
    pub upper: f64,
}

impl EntropyBound {
    pub fn from_enclosure(lo: &Rat, hi: &Rat) -> Self {
        let ln = |x: &Rat| x.to_f64().map_or(f64::NAN, f64::ln);
        let pad = |x: f64| 1e-12 * x.abs().max(1.0);
        let l = ln(lo);
        let u = ln(hi);
        EntropyBound {
            lower: l - pad(l),
            upper: u + pad(u),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CriterionReport {
    pub verdict: Verdict,
    /// Always the pseudoeffective-cone branch.
    pub branch: &'static str,
    pub irreducibility: Irreducibility,
    pub oguiso_applicable: bool,
    pub oguiso_reason: String,
    pub condition1: FixedSubspaceCondition,
    /// `Err` holds the reason enumeration was not possible.
    pub condition2: Result<Vec<SubspaceDischarge>, String>,
    pub spectral_radius: SpectralRadius,
    /// Spectral radius of the inverse matrix, reported without
    /// interpretation.
    pub inverse_spectral_radius: Option<SpectralRadius>,
    pub entropy: EntropyBound,
    pub hypotheses: Hypotheses,
}

impl CriterionReport {
    pub fn condition1_certified(&self) -> bool {
        self.condition1.is_certified()
    }

    pub fn condition2_discharged(&self) -> bool {
        self.condition2
            .as_ref()
            .is_ok_and(|v| v.iter().all(|d| d.discharge.is_discharged()))
    }

    /// Every certificate in the report, in emission order.
    pub fn certificates(&self) -> Vec<&ExclusionCertificate> {
        let mut out: Vec<&ExclusionCertificate> = match &self.condition1 {
            FixedSubspaceCondition::Ray(r) => r.certificates().collect(),
            _ => Vec::new(),
        };
        if let Ok(ds) = &self.condition2 {
            for d in ds {
                out.extend(d.discharge.certificates());
            }
        }
        out
    }
}

/// Runs every check on the pullback matrix `pullback` and assembles the
/// report. Errors only for malformed input; failed checks make the verdict
/// inconclusive.
pub fn verdict(
    pullback: &Mat,
    ctx: &LatticeContext,
    transports: &[Transport],
    depth: usize,
    width: &Rat,
    hypotheses: &Hypotheses,
) -> Result<CriterionReport, PrimitivityError> {
    let irreducibility = check_irreducibility(pullback)?;
    let (oguiso_applicable, oguiso_reason) = match &irreducibility {
        Irreducibility::Irreducible { chi } => (
            true,
            format!("characteristic polynomial {chi} is irreducible over Q"),
        ),
        Irreducibility::Reducible { witness, .. } => (
            false,
            format!("characteristic polynomial has the factor {witness}"),
        ),
        Irreducibility::Unresolved { residue, .. } => {
            (false, format!("irreducibility of {residue} is unresolved"))
        }
    };
    let condition1 = fixed_subspace_condition(pullback, ctx, transports, depth)?;
    let condition2 = match enumerate_stable_subspaces(pullback) {
        Ok(subs) => Ok(stable_face_condition(
            &subs, pullback, ctx, transports, depth,
        )?),
        Err(e @ (PrimitivityError::NotSquarefree(_) | PrimitivityError::UnresolvedFactor(_))) => {
            Err(e.to_string())
        }
        Err(e) => return Err(e),
    };
    let sr = spectral_radius(pullback, width)?;
    let inverse_spectral_radius = match pullback.inverse() {
        Ok(inv) => Some(spectral_radius(&inv, width)?),
        Err(LinalgError::Singular { .. }) => None,
        Err(e) => return Err(e.into()),
    };
    let entropy = EntropyBound::from_enclosure(&sr.lower, &sr.upper);

    let mut reasons = Vec::new();
    match &condition1 {
        FixedSubspaceCondition::Inconclusive { basis } => {
            reasons.push(format!("fixed subspace has dimension {}", basis.len()))
        }
        FixedSubspaceCondition::Ray(r) if !r.is_certified() => reasons.push(format!(
            "fixed class {} not excluded in both directions",
            r.generator
        )),
        _ => {}
    }
    match &condition2 {
        Err(e) => reasons.push(e.clone()),
        Ok(ds) => {
            for d in ds {
                if let Discharge::Unresolved { reason } = &d.discharge {
                    reasons.push(format!(
                        "stable subspace of {}: {reason}",
                        d.subspace.factor
                    ));
                }
            }
        }
    }
    let gaps = hypotheses.gaps(ctx.rank());
    let verdict = if !reasons.is_empty() {
        Verdict::Inconclusive { reasons }
    } else if !gaps.is_empty() {
        Verdict::ConditionsVerified { gaps }
    } else {
        Verdict::Primitive
    };
    Ok(CriterionReport {
        verdict,
        branch: "Eff",
        irreducibility,
        oguiso_applicable,
        oguiso_reason,
        condition1,
        condition2,
        spectral_radius: sr,
        inverse_spectral_radius,
        entropy,
        hypotheses: hypotheses.clone(),
    })
}

/// Companion matrix of a monic polynomial (columns are images of the
/// standard basis under multiplication by `t`).
pub fn companion(p: &Poly) -> Mat {
    let p = p.monic();
    let n = p.degree().unwrap_or(0);
    let mut m = Mat::zeros(n, n);
    for i in 1..n {
        m.set(i, i - 1, Rat::one());
    }
    for i in 0..n {
        m.set(i, n - 1, -p.coeff(i));
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chow::{triple_form, Ambient, CompleteIntersection};
    use crate::linalg::rat;
    use crate::roots::ExactValue;

    fn ctx() -> LatticeContext {
        let ci =
            CompleteIntersection::new(Ambient::new(vec![2, 2, 2]).unwrap(), vec![vec![1, 1, 1]; 3])
                .unwrap();
        LatticeContext::new(triple_form(&ci).unwrap())
            .with_fiber_curves(&[0, 1, 2])
            .unwrap()
    }

    fn big_m() -> Mat {
        Mat::from_ints(&[
            vec![-44, -330, -615],
            vec![60, 451, 840],
            vec![165, 1230, 2296],
        ])
    }

    fn m123() -> Transport {
        Transport::new(
            "phi123",
            Mat::from_ints(&[vec![1, 12, 6], vec![0, 4, 3], vec![0, -3, -2]]),
        )
        .unwrap()
    }

    fn ints(v: &[i64]) -> Vec<Rat> {
        v.iter().map(|&x| rat(x)).collect()
    }

    #[test]
    fn irreducibility_examples() {
        match check_irreducibility(&big_m()).unwrap() {
            Irreducibility::Reducible { witness, .. } => {
                assert_eq!(witness, Poly::from_ints(&[-1, 1]))
            }
            other => panic!("{other:?}"),
        }
        assert!(
            check_irreducibility(&companion(&Poly::from_ints(&[-3, 0, 1])))
                .unwrap()
                .is_irreducible()
        );
        match check_irreducibility(&Mat::identity(2)).unwrap() {
            Irreducibility::Reducible { witness, .. } => {
                assert_eq!(witness, Poly::from_ints(&[-1, 1]))
            }
            other => panic!("{other:?}"),
        }
        let quartic = &Poly::from_ints(&[-2, 0, 1]) * &Poly::from_ints(&[-3, 0, 1]);
        assert!(matches!(
            check_irreducibility(&companion(&quartic)).unwrap(),
            Irreducibility::Unresolved { .. }
        ));
    }

    #[test]
    fn companion_has_its_polynomial() {
        let p = Poly::from_ints(&[5, -1, 0, 1]);
        let chi = companion(&p).char_poly().unwrap();
        assert_eq!(chi, p.scale(&rat(-1)));
    }

    #[test]
    fn fixed_subspace_examples() {
        let c = ctx();
        let t = [m123()];
        match fixed_subspace_condition(&big_m(), &c, &t, 1).unwrap() {
            FixedSubspaceCondition::Ray(r) => {
                assert_eq!(r.generator, DivisorClass::from_ints(&[1, -2, 1]));
                assert!(r.is_certified());
                assert!(r
                    .positive
                    .iter()
                    .any(|x| matches!(x, ExclusionCertificate::OrbitTransport { path, .. } if path == &vec![0])));
                assert!(matches!(
                    r.negative[0],
                    ExclusionCertificate::CoveringCurve { .. }
                ));
                for x in r.certificates() {
                    x.revalidate(&c, &t).unwrap();
                }
            }
            other => panic!("{other:?}"),
        }
        assert!(matches!(
            fixed_subspace_condition(&Mat::identity(3), &c, &t, 1).unwrap(),
            FixedSubspaceCondition::Inconclusive { .. }
        ));
        let two = Mat::identity(3).scale(&rat(2));
        assert_eq!(
            fixed_subspace_condition(&two, &c, &t, 1).unwrap(),
            FixedSubspaceCondition::Trivial
        );
    }

    #[test]
    fn stable_subspaces_of_composite() {
        let subs = enumerate_stable_subspaces(&big_m()).unwrap();
        assert_eq!(subs.len(), 2);
        assert_eq!(subs[0].basis, vec![ints(&[1, -2, 1])]);
        assert_eq!(subs[0].factor, Poly::from_ints(&[-1, 1]));
        assert_eq!(subs[1].dim(), 2);
        assert_eq!(subs[1].factor, Poly::from_ints(&[1, -2702, 1]));
        assert_eq!(subs.iter().map(StableSubspace::dim).sum::<usize>(), 3);
    }

    #[test]
    fn stable_subspace_edge_cases() {
        let cubic = Poly::from_ints(&[-2, 0, 0, 1]);
        assert!(enumerate_stable_subspaces(&companion(&cubic))
            .unwrap()
            .is_empty());
        let diag = Mat::from_ints(&[vec![1, 0], vec![0, 2]]);
        let subs = enumerate_stable_subspaces(&diag).unwrap();
        assert_eq!(
            subs.iter().map(StableSubspace::dim).collect::<Vec<_>>(),
            vec![1, 1]
        );
        assert!(matches!(
            enumerate_stable_subspaces(&Mat::identity(2)),
            Err(PrimitivityError::NotSquarefree(_))
        ));
    }

    #[test]
    fn stable_faces_discharged() {
        let c = ctx();
        let t = [m123()];
        let m = big_m();
        let ds =
            stable_face_condition(&enumerate_stable_subspaces(&m).unwrap(), &m, &c, &t, 1).unwrap();
        assert!(matches!(ds[0].discharge, Discharge::FaceExclusion(_)));
        match &ds[1].discharge {
            Discharge::DualFaceExclusion {
                annihilator,
                eigenvalue,
                positive,
                negative,
            } => {
                assert_eq!(annihilator, &CurveClass::from_ints(&[1, -2, 1]));
                assert_eq!(eigenvalue, &rat(1));
                assert!(matches!(
                    positive,
                    ExclusionCertificate::NefCurveExclusion { witness: 1, .. }
                ));
                assert!(matches!(
                    negative,
                    ExclusionCertificate::NefCurveExclusion { witness: 0, .. }
                ));
            }
            other => panic!("{other:?}"),
        }
        assert!(stable_face_condition(&[], &m, &c, &t, 1)
            .unwrap()
            .is_empty());
    }

    #[test]
    fn full_verdict_is_primitive() {
        let c = ctx();
        let t = [m123()];
        let r = verdict(
            &big_m(),
            &c,
            &t,
            3,
            &Rat::new(1.into(), 1_000_000_000.into()),
            &Hypotheses::calabi_yau_threefold(3),
        )
        .unwrap();
        assert_eq!(r.verdict, Verdict::Primitive);
        assert!(!r.oguiso_applicable);
        assert!(r.spectral_radius.exceeds_one());
        match &r.spectral_radius.exact {
            Some(ExactValue::Surd(s)) => assert_eq!(s.to_string(), "1351 + 780√3"),
            other => panic!("{other:?}"),
        }
        let log_d1 = (1351.0 + 780.0 * 3f64.sqrt()).ln();
        assert!(r.entropy.lower < log_d1 && log_d1 < r.entropy.upper);
        // inverse has the same spectrum here since χ is palindromic up to sign
        assert_eq!(
            r.inverse_spectral_radius.as_ref().unwrap().exact,
            r.spectral_radius.exact
        );
        for x in r.certificates() {
            x.revalidate(&c, &t).unwrap();
        }
    }

    #[test]
    fn undeclared_hypotheses_cap_the_verdict() {
        let r = verdict(
            &big_m(),
            &ctx(),
            &[m123()],
            3,
            &rat(1),
            &Hypotheses::default(),
        )
        .unwrap();
        assert!(matches!(r.verdict, Verdict::ConditionsVerified { .. }));
        let wrong_rank = verdict(
            &big_m(),
            &ctx(),
            &[m123()],
            3,
            &rat(1),
            &Hypotheses::calabi_yau_threefold(4),
        )
        .unwrap();
        assert!(matches!(
            wrong_rank.verdict,
            Verdict::ConditionsVerified { .. }
        ));
    }

    #[test]
    fn identity_is_inconclusive() {
        let r = verdict(
            &Mat::identity(3),
            &ctx(),
            &[],
            3,
            &rat(1),
            &Hypotheses::calabi_yau_threefold(3),
        )
        .unwrap();
        assert!(matches!(r.verdict, Verdict::Inconclusive { .. }));
        assert!(r.condition2.is_err());
    }

    #[test]
    fn irreducible_action_is_primitive_directly() {
        // companion of t^3 - 3t - 1: irreducible, no eigenvalue 1
        let m = companion(&Poly::from_ints(&[-1, -3, 0, 1]));
        let r = verdict(
            &m,
            &ctx(),
            &[],
            1,
            &rat(1),
            &Hypotheses::calabi_yau_threefold(3),
        )
        .unwrap();
        assert!(r.oguiso_applicable);
        assert_eq!(r.condition1, FixedSubspaceCondition::Trivial);
        assert_eq!(r.verdict, Verdict::Primitive);
    }
}
