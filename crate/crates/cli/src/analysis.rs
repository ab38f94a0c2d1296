//! End-to-end pipeline: intersection numbers, lattice, translation
//! synthesis, composite, spectral data and the primitivity criterion.

use cydyn_core::chow::{triple_form, Ambient, CompleteIntersection, TripleForm};
use cydyn_core::lattice::{DivisorClass, LatticeContext, Transport};
use cydyn_core::linalg::{factor_over_q, rat_int, FactorKind, Factorization, Mat, Poly, Rat};
use cydyn_core::primitivity::{verdict, CriterionReport, PrimitivityError};
use cydyn_core::roots::{
    isolate_real_roots, quadratic_roots, ExactValue, IsolatingInterval, QuadraticSurd,
};
use cydyn_core::translation::{build_matrix, compose_pullback, SynthesizedMap};
use num_bigint::BigInt;
use num_traits::Signed;

use crate::config::{parse_rational, Config, Reference};
use crate::fmt::{int_matrix, int_vector, rat_vector};

pub const WIDTH_ENV: &str = "CYDYN_REPORT_WIDTH";

/// Default refinement width, `10^-12`.
pub fn default_width() -> Rat {
    Rat::new(BigInt::from(1), BigInt::from(10).pow(12))
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum AnalysisError {
    #[error("{stage}: {message}")]
    Input {
        stage: &'static str,
        message: String,
    },
    #[error("internal invariant violated in {stage}: {message}")]
    Invariant {
        stage: &'static str,
        message: String,
    },
}

impl AnalysisError {
    pub fn exit_code(&self) -> u8 {
        match self {
            AnalysisError::Input { .. } => 1,
            AnalysisError::Invariant { .. } => 2,
        }
    }
}

fn input(stage: &'static str) -> impl Fn(String) -> AnalysisError {
    move |message| AnalysisError::Input { stage, message }
}

fn invariant(stage: &'static str) -> impl Fn(String) -> AnalysisError {
    move |message| AnalysisError::Invariant { stage, message }
}

#[derive(Debug, Clone)]
pub struct MapAnalysis {
    pub name: String,
    pub synth: SynthesizedMap,
    pub char_poly: Poly,
    pub surface_form_preserved: bool,
}

/// Roots of one rational factor of `χ`.
#[derive(Debug, Clone)]
#[allow(clippy::large_enum_variant)]
pub enum EigenData {
    Rational(Rat),
    /// Conjugate real pair `a ∓ b√d` with their isolating intervals.
    Surds {
        minus: QuadraticSurd,
        plus: QuadraticSurd,
        intervals: Vec<IsolatingInterval>,
    },
    /// Real roots known only through intervals, plus the count of
    /// non-real roots.
    Isolated {
        intervals: Vec<IsolatingInterval>,
        nonreal: usize,
    },
}

#[derive(Debug, Clone)]
pub struct FactorAnalysis {
    pub poly: Poly,
    pub kind: FactorKind,
    pub eigen: EigenData,
}

#[derive(Debug, Clone)]
pub struct CompositeAnalysis {
    pub order: Vec<String>,
    /// `M_1 M_2 ⋯ M_r` of the pushforwards.
    pub pushforward: Mat,
    pub pullback: Mat,
    pub char_poly: Poly,
    pub palindromic_up_to_sign: bool,
    /// Factorization of the squarefree part of `χ`.
    pub factorization: Factorization,
    pub squarefree: bool,
    pub factors: Vec<FactorAnalysis>,
    pub transports: Vec<Transport>,
    pub criterion: CriterionReport,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReferenceCheck {
    pub kind: &'static str,
    pub subject: String,
    pub computed: String,
    pub reference: String,
    pub matches: bool,
    /// Extra `(key, value)` observations, e.g. whether a conclusion
    /// survives the discrepancy.
    pub notes: Vec<(String, String)>,
}

#[derive(Debug, Clone)]
pub struct Analysis {
    pub config: Config,
    pub width: Rat,
    pub depth: usize,
    pub form: TripleForm,
    pub ctx: LatticeContext,
    pub maps: Vec<MapAnalysis>,
    pub composite: Option<CompositeAnalysis>,
    pub references: Vec<ReferenceCheck>,
}

/// Width precedence: the config, then `CYDYN_REPORT_WIDTH`, then
/// [`default_width`].
pub fn resolve_width(cfg: &Config) -> Result<Rat, AnalysisError> {
    if let Some(w) = &cfg.width {
        return Ok(w.clone());
    }
    match std::env::var(WIDTH_ENV) {
        Ok(s) => parse_rational(&s).map_err(|e| AnalysisError::Input {
            stage: "environment",
            message: format!("{WIDTH_ENV}: {e}"),
        }),
        Err(_) => Ok(default_width()),
    }
}

fn eigen_data(f: &Poly, kind: FactorKind, width: &Rat) -> Result<EigenData, AnalysisError> {
    let fail = invariant("eigenvalues");
    let refine = |p: &Poly| -> Result<Vec<IsolatingInterval>, AnalysisError> {
        isolate_real_roots(p)
            .and_then(|ivs| ivs.iter().map(|iv| iv.refine(width)).collect())
            .map_err(|e| fail(e.to_string()))
    };
    if kind == FactorKind::Linear {
        return Ok(EigenData::Rational(-f.coeff(0)));
    }
    let intervals = refine(f)?;
    if let Some((minus, plus)) = quadratic_roots(f) {
        return Ok(EigenData::Surds {
            minus,
            plus,
            intervals,
        });
    }
    let nonreal = f.degree().unwrap_or(0) - intervals.len();
    Ok(EigenData::Isolated { intervals, nonreal })
}

fn is_palindromic_up_to_sign(p: &Poly) -> bool {
    let c = p.coeffs();
    let rev: Vec<Rat> = c.iter().rev().cloned().collect();
    let neg: Vec<Rat> = c.iter().map(|x| -x).collect();
    rev == c || rev == neg
}

fn analyze_composite(
    cfg: &Config,
    ctx: &LatticeContext,
    maps: &[MapAnalysis],
    depth: usize,
    width: &Rat,
) -> Result<CompositeAnalysis, AnalysisError> {
    let rank = cfg.rank();
    let matrices: Vec<&Mat> = cfg.order.iter().map(|&i| &maps[i].synth.matrix).collect();
    let pushforward = matrices
        .iter()
        .try_fold(Mat::identity(rank), |acc, m| acc.mul(m))
        .map_err(|e| invariant("composition")(e.to_string()))?;
    let pullback =
        compose_pullback(&matrices, rank).map_err(|e| invariant("composition")(e.to_string()))?;
    let char_poly = pullback
        .char_poly()
        .map_err(|e| invariant("char_poly")(e.to_string()))?;
    let squarefree = char_poly.is_squarefree();
    let sf = char_poly
        .squarefree_part()
        .map_err(|e| invariant("char_poly")(e.to_string()))?;
    let factorization =
        factor_over_q(&sf).map_err(|e| invariant("factorization")(e.to_string()))?;
    if squarefree && factorization.product() != char_poly {
        return Err(invariant("factorization")(format!(
            "factors do not multiply back to {char_poly}"
        )));
    }
    let factors = factorization
        .factors
        .iter()
        .map(|f| {
            Ok(FactorAnalysis {
                poly: f.poly.clone(),
                kind: f.kind,
                eigen: eigen_data(&f.poly, f.kind, width)?,
            })
        })
        .collect::<Result<Vec<_>, AnalysisError>>()?;
    let transports = cfg
        .transports
        .iter()
        .map(|&i| Transport::new(maps[i].name.clone(), maps[i].synth.matrix.clone()))
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| invariant("transports")(e.to_string()))?;
    let criterion = verdict(&pullback, ctx, &transports, depth, width, &cfg.hypotheses).map_err(
        |e| match e {
            PrimitivityError::Lattice(_) => input("primitivity")(e.to_string()),
            _ => invariant("primitivity")(e.to_string()),
        },
    )?;
    for cert in criterion.certificates() {
        cert.revalidate(ctx, &transports)
            .map_err(|e| invariant("certificates")(e.to_string()))?;
    }
    Ok(CompositeAnalysis {
        order: cfg.order.iter().map(|&i| maps[i].name.clone()).collect(),
        pushforward,
        pullback,
        palindromic_up_to_sign: is_palindromic_up_to_sign(&char_poly),
        char_poly,
        factorization,
        squarefree,
        factors,
        transports,
        criterion,
    })
}

fn negatives(v: &[Rat]) -> usize {
    v.iter().filter(|x| x.is_negative()).count()
}

fn check_references(
    cfg: &Config,
    maps: &[MapAnalysis],
    composite: Option<&CompositeAnalysis>,
) -> Result<Vec<ReferenceCheck>, AnalysisError> {
    let mut out = Vec::new();
    let unavailable = || "unavailable".to_string();
    for r in &cfg.references {
        out.push(match r {
            Reference::Matrix { map, value } => {
                let computed = maps[*map].synth.matrix.to_string();
                let reference = int_matrix(value);
                ReferenceCheck {
                    kind: "matrix",
                    subject: maps[*map].name.clone(),
                    matches: computed == reference,
                    computed,
                    reference,
                    notes: Vec::new(),
                }
            }
            Reference::Pullback { value } => {
                let computed = composite.map_or_else(unavailable, |c| c.pullback.to_string());
                let reference = int_matrix(value);
                ReferenceCheck {
                    kind: "pullback",
                    subject: "composite".into(),
                    matches: computed == reference,
                    computed,
                    reference,
                    notes: Vec::new(),
                }
            }
            Reference::CharPoly { value } => {
                let computed =
                    composite.map_or_else(unavailable, |c| rat_vector(c.char_poly.coeffs()));
                let reference = int_vector(value);
                ReferenceCheck {
                    kind: "char_poly",
                    subject: "composite".into(),
                    matches: computed == reference,
                    computed,
                    reference,
                    notes: Vec::new(),
                }
            }
            Reference::DynamicalDegree { value } => {
                let computed =
                    match composite.and_then(|c| c.criterion.spectral_radius.exact.as_ref()) {
                        Some(ExactValue::Surd(s)) => crate::fmt::surd(s),
                        Some(ExactValue::Rational(q)) => crate::fmt::rat(q),
                        None => unavailable(),
                    };
                let reference = format!("({}, {}, {})", value[0], value[1], value[2]);
                ReferenceCheck {
                    kind: "dynamical_degree",
                    subject: "composite".into(),
                    matches: computed == reference,
                    computed,
                    reference,
                    notes: Vec::new(),
                }
            }
            Reference::TransportImage {
                map,
                divisor,
                value,
            } => {
                let d =
                    DivisorClass::new(divisor.iter().map(|&x| rat_int(&BigInt::from(x))).collect());
                let image = d
                    .apply(&maps[*map].synth.matrix)
                    .map_err(|e| invariant("references")(e.to_string()))?;
                let reference: Vec<Rat> =
                    value.iter().map(|&x| rat_int(&BigInt::from(x))).collect();
                let (nc, nr) = (negatives(image.coords()), negatives(&reference));
                ReferenceCheck {
                    kind: "transport_image",
                    subject: format!("{} pushforward of {}", maps[*map].name, int_vector(divisor)),
                    matches: image.coords() == reference.as_slice(),
                    computed: rat_vector(image.coords()),
                    reference: rat_vector(&reference),
                    notes: vec![
                        ("negative_coefficients.computed".into(), nc.to_string()),
                        ("negative_coefficients.reference".into(), nr.to_string()),
                        (
                            "two_negative_property.computed".into(),
                            (nc >= 2).to_string(),
                        ),
                        (
                            "two_negative_property.reference".into(),
                            (nr >= 2).to_string(),
                        ),
                    ],
                }
            }
        });
    }
    Ok(out)
}

/// Runs the full pipeline on a validated configuration.
pub fn run_analysis(cfg: &Config) -> Result<Analysis, AnalysisError> {
    let width = resolve_width(cfg)?;
    let depth = cfg.depth;
    let ambient = Ambient::new(cfg.dims.clone()).map_err(|e| input("ambient")(e.to_string()))?;
    let ci = CompleteIntersection::new(ambient, cfg.multidegrees.clone())
        .map_err(|e| input("complete intersection")(e.to_string()))?;
    let form = triple_form(&ci).map_err(|e| input("intersection numbers")(e.to_string()))?;
    if !form.is_symmetric() {
        return Err(invariant("intersection numbers")(
            "triple form is not symmetric".into(),
        ));
    }
    let mut ctx = LatticeContext::new(form.clone())
        .with_fiber_curves(&cfg.fibrations)
        .map_err(|e| input("lattice")(e.to_string()))?;
    if let Some(ws) = &cfg.effective_witnesses {
        let ws = ws
            .iter()
            .map(|w| DivisorClass::new(w.iter().map(|&x| rat_int(&BigInt::from(x))).collect()))
            .collect();
        ctx = ctx
            .with_effective_witnesses(ws)
            .map_err(|e| input("lattice")(e.to_string()))?;
    }

    let mut maps = Vec::with_capacity(cfg.maps.len());
    for m in &cfg.maps {
        let synth = build_matrix(&m.spec, &ctx).map_err(|e| AnalysisError::Input {
            stage: "translation synthesis",
            message: format!("{} {}: {e}", m.name, m.spec),
        })?;
        let char_poly = synth
            .matrix
            .char_poly()
            .map_err(|e| invariant("char_poly")(e.to_string()))?;
        let surface_form_preserved = synth
            .preserves_surface_form(&ctx)
            .map_err(|e| invariant("translation synthesis")(e.to_string()))?;
        maps.push(MapAnalysis {
            name: m.name.clone(),
            synth,
            char_poly,
            surface_form_preserved,
        });
    }

    let composite = if cfg.order.is_empty() {
        None
    } else {
        Some(analyze_composite(cfg, &ctx, &maps, depth, &width)?)
    };
    let references = check_references(cfg, &maps, composite.as_ref())?;
    Ok(Analysis {
        config: cfg.clone(),
        width,
        depth,
        form,
        ctx,
        maps,
        composite,
        references,
    })
}
