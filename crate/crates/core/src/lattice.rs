//! Divisor and curve classes on a Néron–Severi lattice with basis
//! `L_1, ..., L_ρ`, and one-sided cone reasoning.
//!
//! Neither the pseudoeffective cone nor the nef curve cone is represented.
//! Non-membership is proved with certificates: a covering curve that pairs
//! negatively with a class (possibly after pushing it forward along a
//! birational self-map), or an effective divisor that pairs negatively with
//! a curve class. Membership is never claimed.

use std::fmt;

use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::chow::TripleForm;
use crate::linalg::{dot, fmt_rat, fmt_vec, rat, rat_int, LinalgError, Mat, Rat};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LatticeError {
    #[error("rank mismatch: expected {expected}, got {got}")]
    RankMismatch { expected: usize, got: usize },
    #[error("index {index} out of range for rank {rank}")]
    IndexOutOfRange { index: usize, rank: usize },
    #[error("curve class must be nonzero")]
    ZeroCurve,
    #[error("transport {label}: {reason}")]
    InvalidTransport { label: String, reason: String },
    #[error("certificate does not re-validate: {0}")]
    InvalidCertificate(String),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

fn fmt_combination(f: &mut fmt::Formatter<'_>, coords: &[Rat], suffix: &str) -> fmt::Result {
    let mut first = true;
    for (i, c) in coords.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let mag = c.abs();
        if first {
            if c.is_negative() {
                write!(f, "-")?;
            }
        } else {
            write!(f, " {} ", if c.is_negative() { '-' } else { '+' })?;
        }
        first = false;
        if !mag.is_one() {
            write!(f, "{}", fmt_rat(&mag))?;
        }
        write!(f, "L{}{suffix}", i + 1)?;
    }
    if first {
        write!(f, "0")?;
    }
    Ok(())
}

/// Divisor class in the basis `L_1, ..., L_ρ`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DivisorClass(Vec<Rat>);

impl DivisorClass {
    pub fn new(coords: Vec<Rat>) -> Self {
        DivisorClass(coords)
    }

    pub fn from_ints(coords: &[i64]) -> Self {
        DivisorClass(coords.iter().map(|&c| rat(c)).collect())
    }

    pub fn basis(rank: usize, i: usize) -> Self {
        DivisorClass(
            (0..rank)
                .map(|j| if i == j { Rat::one() } else { Rat::zero() })
                .collect(),
        )
    }

    pub fn coords(&self) -> &[Rat] {
        &self.0
    }

    pub fn rank(&self) -> usize {
        self.0.len()
    }

    pub fn neg(&self) -> Self {
        DivisorClass(self.0.iter().map(|x| -x).collect())
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    /// Pushforward along a map given by its matrix on coordinate columns.
    pub fn apply(&self, m: &Mat) -> Result<Self, LatticeError> {
        Ok(DivisorClass(m.mul_vec(&self.0)?))
    }
}

impl fmt::Display for DivisorClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_combination(f, &self.0, "")
    }
}

/// Curve class in the dual basis `L_1^∨, ..., L_ρ^∨`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CurveClass(Vec<Rat>);

impl CurveClass {
    pub fn new(coords: Vec<Rat>) -> Self {
        CurveClass(coords)
    }

    pub fn from_ints(coords: &[i64]) -> Self {
        CurveClass(coords.iter().map(|&c| rat(c)).collect())
    }

    pub fn coords(&self) -> &[Rat] {
        &self.0
    }

    pub fn rank(&self) -> usize {
        self.0.len()
    }

    pub fn neg(&self) -> Self {
        CurveClass(self.0.iter().map(|x| -x).collect())
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }
}

impl fmt::Display for CurveClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_combination(f, &self.0, "^∨")
    }
}

/// `D · C = Σ d_i c_i`.
pub fn pair(d: &DivisorClass, c: &CurveClass) -> Result<Rat, LatticeError> {
    if d.rank() != c.rank() {
        return Err(LatticeError::RankMismatch {
            expected: d.rank(),
            got: c.rank(),
        });
    }
    Ok(dot(&d.0, &c.0))
}

/// A curve class whose deformations cover the variety, so it pairs
/// nonnegatively with every pseudoeffective divisor.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoveringCurve {
    pub class: CurveClass,
    pub provenance: String,
}

/// Everything the cone arguments are allowed to use.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LatticeContext {
    form: TripleForm,
    effective_witnesses: Vec<DivisorClass>,
    covering_curves: Vec<CoveringCurve>,
}

impl LatticeContext {
    /// Context with the basis classes as effective witnesses and no
    /// covering curves yet.
    pub fn new(form: TripleForm) -> Self {
        let rank = form.rank();
        LatticeContext {
            effective_witnesses: (0..rank).map(|i| DivisorClass::basis(rank, i)).collect(),
            covering_curves: Vec::new(),
            form,
        }
    }

    pub fn rank(&self) -> usize {
        self.form.rank()
    }

    pub fn form(&self) -> &TripleForm {
        &self.form
    }

    pub fn effective_witnesses(&self) -> &[DivisorClass] {
        &self.effective_witnesses
    }

    pub fn covering_curves(&self) -> &[CoveringCurve] {
        &self.covering_curves
    }

    fn check_rank(&self, got: usize) -> Result<(), LatticeError> {
        if got == self.rank() {
            Ok(())
        } else {
            Err(LatticeError::RankMismatch {
                expected: self.rank(),
                got,
            })
        }
    }

    fn check_index(&self, index: usize) -> Result<(), LatticeError> {
        if index < self.rank() {
            Ok(())
        } else {
            Err(LatticeError::IndexOutOfRange {
                index,
                rank: self.rank(),
            })
        }
    }

    pub fn with_effective_witnesses(
        mut self,
        witnesses: Vec<DivisorClass>,
    ) -> Result<Self, LatticeError> {
        for w in &witnesses {
            self.check_rank(w.rank())?;
        }
        self.effective_witnesses = witnesses;
        Ok(self)
    }

    pub fn with_covering_curve(
        mut self,
        class: CurveClass,
        provenance: impl Into<String>,
    ) -> Result<Self, LatticeError> {
        self.check_rank(class.rank())?;
        self.covering_curves.push(CoveringCurve {
            class,
            provenance: provenance.into(),
        });
        Ok(self)
    }

    /// Registers the fiber class of each listed fibration (0-based).
    pub fn with_fiber_curves(self, fibrations: &[usize]) -> Result<Self, LatticeError> {
        fibrations.iter().try_fold(self, |ctx, &i| {
            let class = fiber_curve_class(&ctx, i)?;
            ctx.with_covering_curve(class, format!("fiber of projection {}", i + 1))
        })
    }
}

/// Class of a fiber of the `i`-th projection: `L_i^2`, which pairs with
/// `L_j` as `T(L_j, L_i, L_i)`.
pub fn fiber_curve_class(ctx: &LatticeContext, i: usize) -> Result<CurveClass, LatticeError> {
    ctx.check_index(i)?;
    Ok(CurveClass(
        (0..ctx.rank())
            .map(|j| rat_int(ctx.form.get(j, i, i)))
            .collect(),
    ))
}

/// Intersection form on the surface cut out by `L_i`:
/// `b(L_x, L_y) = T(L_x, L_y, L_i)`.
pub fn restrict_to_surface(ctx: &LatticeContext, i: usize) -> Result<Mat, LatticeError> {
    ctx.check_index(i)?;
    let r = ctx.rank();
    let data = (0..r)
        .flat_map(|x| (0..r).map(move |y| (x, y)))
        .map(|(x, y)| rat_int(ctx.form.get(x, y, i)))
        .collect();
    Ok(Mat::new(r, r, data)?)
}

/// Pushforward matrix of a birational self-map, usable to move classes
/// around inside the pseudoeffective cone.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Transport {
    label: String,
    matrix: Mat,
}

impl Transport {
    /// Requires a square integer matrix with determinant ±1.
    pub fn new(label: impl Into<String>, matrix: Mat) -> Result<Self, LatticeError> {
        let label = label.into();
        let invalid = |reason: String| LatticeError::InvalidTransport {
            label: label.clone(),
            reason,
        };
        if !matrix.is_square() {
            return Err(invalid(format!(
                "{}x{} is not square",
                matrix.rows(),
                matrix.cols()
            )));
        }
        if !matrix.is_integral() {
            return Err(invalid("entries must be integers".into()));
        }
        let det = matrix.det()?;
        if det.abs() != Rat::one() {
            return Err(invalid(format!("determinant {} is not ±1", fmt_rat(&det))));
        }
        Ok(Transport { label, matrix })
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn matrix(&self) -> &Mat {
        &self.matrix
    }
}

/// Proof that a divisor class is not pseudoeffective, or that no nonzero
/// multiple of a curve class is nef. Indices refer to the
/// [`LatticeContext`] and transport list the certificate was issued
/// against.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ExclusionCertificate {
    /// `divisor · curve < 0` for a covering curve.
    CoveringCurve {
        divisor: DivisorClass,
        curve: usize,
        pairing: Rat,
    },
    /// Pushing `divisor` forward along `path` (first index applied first)
    /// gives `image`, and `image · curve < 0`.
    OrbitTransport {
        divisor: DivisorClass,
        path: Vec<usize>,
        image: DivisorClass,
        curve: usize,
        pairing: Rat,
    },
    /// `witness · curve < 0` for an effective witness divisor.
    NefCurveExclusion {
        curve: CurveClass,
        witness: usize,
        pairing: Rat,
    },
}

impl ExclusionCertificate {
    pub fn kind(&self) -> &'static str {
        match self {
            ExclusionCertificate::CoveringCurve { .. } => "covering_curve",
            ExclusionCertificate::OrbitTransport { .. } => "orbit_transport",
            ExclusionCertificate::NefCurveExclusion { .. } => "nef_curve_exclusion",
        }
    }

    pub fn pairing(&self) -> &Rat {
        match self {
            ExclusionCertificate::CoveringCurve { pairing, .. }
            | ExclusionCertificate::OrbitTransport { pairing, .. }
            | ExclusionCertificate::NefCurveExclusion { pairing, .. } => pairing,
        }
    }

    /// Recomputes every recorded quantity from raw data.
    pub fn revalidate(
        &self,
        ctx: &LatticeContext,
        transports: &[Transport],
    ) -> Result<(), LatticeError> {
        let bad = |msg: String| Err(LatticeError::InvalidCertificate(msg));
        let (value, recorded) = match self {
            ExclusionCertificate::CoveringCurve {
                divisor,
                curve,
                pairing,
            } => {
                let Some(c) = ctx.covering_curves.get(*curve) else {
                    return bad(format!("no covering curve #{curve}"));
                };
                (self::pair(divisor, &c.class)?, pairing)
            }
            ExclusionCertificate::OrbitTransport {
                divisor,
                path,
                image,
                curve,
                pairing,
            } => {
                if path.is_empty() {
                    return bad("empty transport path".into());
                }
                let mut moved = divisor.clone();
                for &t in path {
                    let Some(tr) = transports.get(t) else {
                        return bad(format!("no transport #{t}"));
                    };
                    moved = moved.apply(&tr.matrix)?;
                }
                if &moved != image {
                    return bad(format!("image {moved} differs from recorded {image}"));
                }
                let Some(c) = ctx.covering_curves.get(*curve) else {
                    return bad(format!("no covering curve #{curve}"));
                };
                (self::pair(&moved, &c.class)?, pairing)
            }
            ExclusionCertificate::NefCurveExclusion {
                curve,
                witness,
                pairing,
            } => {
                let Some(w) = ctx.effective_witnesses.get(*witness) else {
                    return bad(format!("no effective witness #{witness}"));
                };
                (self::pair(w, curve)?, pairing)
            }
        };
        if &value != recorded {
            return bad(format!(
                "pairing {} differs from recorded {}",
                fmt_rat(&value),
                fmt_rat(recorded)
            ));
        }
        if !value.is_negative() {
            return bad(format!("pairing {} is not negative", fmt_rat(&value)));
        }
        Ok(())
    }
}

impl fmt::Display for ExclusionCertificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExclusionCertificate::CoveringCurve {
                divisor,
                curve,
                pairing,
            } => write!(
                f,
                "covering curve #{} pairs with {} to {}",
                curve + 1,
                fmt_vec(divisor.coords()),
                fmt_rat(pairing)
            ),
            ExclusionCertificate::OrbitTransport {
                divisor,
                path,
                image,
                curve,
                pairing,
            } => {
                let p: Vec<String> = path.iter().map(|t| format!("#{}", t + 1)).collect();
                write!(
                    f,
                    "transport {} sends {} to {}, covering curve #{} pairs to {}",
                    p.join(" then "),
                    fmt_vec(divisor.coords()),
                    fmt_vec(image.coords()),
                    curve + 1,
                    fmt_rat(pairing)
                )
            }
            ExclusionCertificate::NefCurveExclusion {
                curve,
                witness,
                pairing,
            } => write!(
                f,
                "effective witness #{} pairs with {} to {}",
                witness + 1,
                fmt_vec(curve.coords()),
                fmt_rat(pairing)
            ),
        }
    }
}

fn covering_curve_test(
    ctx: &LatticeContext,
    d: &DivisorClass,
) -> Result<Option<(usize, Rat)>, LatticeError> {
    for (idx, c) in ctx.covering_curves.iter().enumerate() {
        let p = pair(d, &c.class)?;
        if p.is_negative() {
            return Ok(Some((idx, p)));
        }
    }
    Ok(None)
}

/// Transport words of length `len` in lexicographic order.
fn words(count: usize, len: usize) -> Vec<Vec<usize>> {
    (0..len).fold(vec![Vec::new()], |acc, _| {
        acc.into_iter()
            .flat_map(|w| {
                (0..count).map(move |t| {
                    let mut w = w.clone();
                    w.push(t);
                    w
                })
            })
            .collect()
    })
}

fn search_orbit(
    ctx: &LatticeContext,
    d: &DivisorClass,
    transports: &[Transport],
    min_len: usize,
    max_len: usize,
) -> Result<Option<ExclusionCertificate>, LatticeError> {
    ctx.check_rank(d.rank())?;
    for t in transports {
        ctx.check_rank(t.matrix.rows())?;
    }
    if min_len == 0 {
        if let Some((curve, pairing)) = covering_curve_test(ctx, d)? {
            return Ok(Some(ExclusionCertificate::CoveringCurve {
                divisor: d.clone(),
                curve,
                pairing,
            }));
        }
    }
    if transports.is_empty() {
        return Ok(None);
    }
    for len in min_len.max(1)..=max_len {
        for path in words(transports.len(), len) {
            let mut image = d.clone();
            for &t in &path {
                image = image.apply(&transports[t].matrix)?;
            }
            if let Some((curve, pairing)) = covering_curve_test(ctx, &image)? {
                return Ok(Some(ExclusionCertificate::OrbitTransport {
                    divisor: d.clone(),
                    path,
                    image,
                    curve,
                    pairing,
                }));
            }
        }
    }
    Ok(None)
}

/// Tries to prove `d ∉ Eff(X)`: first against the covering curves
/// directly, then against pushforwards of `d` along transport words of
/// length up to `depth`, shortest first. `None` is inconclusive.
pub fn exclude_from_eff(
    ctx: &LatticeContext,
    d: &DivisorClass,
    transports: &[Transport],
    depth: usize,
) -> Result<Option<ExclusionCertificate>, LatticeError> {
    search_orbit(ctx, d, transports, 0, depth)
}

/// Like [`exclude_from_eff`] but only accepts orbit-transport certificates
/// (word length at least one).
pub fn exclude_via_transport(
    ctx: &LatticeContext,
    d: &DivisorClass,
    transports: &[Transport],
    depth: usize,
) -> Result<Option<ExclusionCertificate>, LatticeError> {
    search_orbit(ctx, d, transports, 1, depth)
}

/// Shows that no nonzero multiple of `u` is nef: an effective witness
/// pairs negatively with `u`, and another with `-u`. Returns the pair
/// `(certificate for u, certificate for -u)`.
pub fn exclude_nef_curve(
    ctx: &LatticeContext,
    u: &CurveClass,
) -> Result<Option<(ExclusionCertificate, ExclusionCertificate)>, LatticeError> {
    ctx.check_rank(u.rank())?;
    if u.is_zero() {
        return Err(LatticeError::ZeroCurve);
    }
    let find = |c: &CurveClass| -> Result<Option<ExclusionCertificate>, LatticeError> {
        for (idx, w) in ctx.effective_witnesses.iter().enumerate() {
            let p = pair(w, c)?;
            if p.is_negative() {
                return Ok(Some(ExclusionCertificate::NefCurveExclusion {
                    curve: c.clone(),
                    witness: idx,
                    pairing: p,
                }));
            }
        }
        Ok(None)
    };
    let neg = u.neg();
    match (find(u)?, find(&neg)?) {
        (Some(a), Some(b)) => Ok(Some((a, b))),
        _ => Ok(None),
    }
}
