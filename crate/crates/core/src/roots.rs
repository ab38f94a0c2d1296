//! Real-root isolation with Sturm sequences, exact quadratic surds, and the
//! spectral radius of an integer matrix.
//!
//! Non-real roots are never located; their moduli are only bounded above by
//! the Cauchy bound of the factor that carries them.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::linalg::{
    factor_over_q, fmt_rat, rat, rat_int, squarefree_decompose, LinalgError, Mat, Poly, Rat,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RootError {
    #[error("polynomial {0} is not squarefree")]
    NotSquarefree(String),
    #[error("cannot isolate the roots of the zero polynomial")]
    ZeroPolynomial,
    #[error("refinement width must be positive, got {0}")]
    NonPositiveWidth(String),
    #[error("quadratic surd needs b != 0 and a non-square radicand, got ({a}, {b}, {d})")]
    DegenerateSurd { a: String, b: String, d: String },
    #[error("interval {0} does not isolate exactly one root")]
    NotIsolating(String),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// Standard Sturm chain `p, p', -rem(p, p'), ...` of a squarefree polynomial.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SturmSeq {
    polys: Vec<Poly>,
}

impl SturmSeq {
    pub fn new(p: &Poly) -> Result<Self, RootError> {
        if p.is_zero() {
            return Err(RootError::ZeroPolynomial);
        }
        if !p.is_squarefree() {
            return Err(RootError::NotSquarefree(p.to_string()));
        }
        let mut polys = vec![p.clone()];
        let d = p.derivative();
        if !d.is_zero() {
            polys.push(d);
        }
        while polys.len() >= 2 {
            let n = polys.len();
            let (_, r) = polys[n - 2].div_rem(&polys[n - 1])?;
            if r.is_zero() {
                break;
            }
            polys.push(-&r);
        }
        Ok(SturmSeq { polys })
    }

    pub fn polys(&self) -> &[Poly] {
        &self.polys
    }

    /// Sign variations of the chain at `x`, zeros dropped.
    pub fn variations_at(&self, x: &Rat) -> usize {
        count_variations(self.polys.iter().map(|p| p.sign_at(x)))
    }

    fn variations_at_infinity(&self, positive: bool) -> usize {
        count_variations(self.polys.iter().map(|p| {
            let lead = if p.leading().is_positive() { 1 } else { -1 };
            let odd = p.degree().unwrap_or(0) % 2 == 1;
            if !positive && odd {
                -lead
            } else {
                lead
            }
        }))
    }

    /// Number of distinct real roots in `(lo, hi]`.
    pub fn count_in(&self, lo: &Rat, hi: &Rat) -> usize {
        self.variations_at(lo)
            .saturating_sub(self.variations_at(hi))
    }

    /// Number of distinct real roots.
    pub fn count_real(&self) -> usize {
        self.variations_at_infinity(false)
            .saturating_sub(self.variations_at_infinity(true))
    }
}

fn count_variations(signs: impl Iterator<Item = i32>) -> usize {
    let mut last = 0;
    let mut count = 0;
    for s in signs.filter(|&s| s != 0) {
        if last != 0 && s != last {
            count += 1;
        }
        last = s;
    }
    count
}

/// `1 + max |c_i / c_n|`; every complex root has modulus strictly below it.
pub fn cauchy_bound(p: &Poly) -> Rat {
    let lead = p.leading();
    let n = p.coeffs().len().saturating_sub(1);
    let max = p.coeffs()[..n]
        .iter()
        .map(|c| (c / &lead).abs())
        .max()
        .unwrap_or_else(Rat::zero);
    Rat::one() + max
}

/// Smallest power of two `>= x` (for `x > 0`).
fn dyadic_ceiling(x: &Rat) -> Rat {
    let mut b = Rat::one();
    while &b < x {
        b *= rat(2);
    }
    b
}

/// Half-open interval `(lo, hi]` holding exactly one real root of `poly`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IsolatingInterval {
    lo: Rat,
    hi: Rat,
    poly: Poly,
}

impl IsolatingInterval {
    /// Validates the isolation with a Sturm count.
    pub fn new(lo: Rat, hi: Rat, poly: Poly) -> Result<Self, RootError> {
        let sturm = SturmSeq::new(&poly)?;
        if lo >= hi || sturm.count_in(&lo, &hi) != 1 {
            return Err(RootError::NotIsolating(format!(
                "({}, {}]",
                fmt_rat(&lo),
                fmt_rat(&hi)
            )));
        }
        Ok(IsolatingInterval { lo, hi, poly })
    }

    pub fn lo(&self) -> &Rat {
        &self.lo
    }

    pub fn hi(&self) -> &Rat {
        &self.hi
    }

    pub fn poly(&self) -> &Poly {
        &self.poly
    }

    pub fn width(&self) -> Rat {
        &self.hi - &self.lo
    }

    /// True when the isolated root is exactly `hi`.
    pub fn endpoint_root(&self) -> bool {
        self.poly.eval(&self.hi).is_zero()
    }

    pub fn contains(&self, x: &Rat) -> bool {
        &self.lo < x && x <= &self.hi
    }

    /// Bisects until the width is at most `width`. Each step re-runs the
    /// Sturm count so the isolated root never changes.
    pub fn refine(&self, width: &Rat) -> Result<IsolatingInterval, RootError> {
        if !width.is_positive() {
            return Err(RootError::NonPositiveWidth(fmt_rat(width)));
        }
        let sturm = SturmSeq::new(&self.poly)?;
        let mut lo = self.lo.clone();
        let mut hi = self.hi.clone();
        while &(&hi - &lo) > width {
            let mid = (&lo + &hi) / rat(2);
            if sturm.count_in(&lo, &mid) == 1 {
                hi = mid;
            } else {
                lo = mid;
            }
            debug_assert_eq!(sturm.count_in(&lo, &hi), 1);
        }
        Ok(IsolatingInterval {
            lo,
            hi,
            poly: self.poly.clone(),
        })
    }
}

impl fmt::Display for IsolatingInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}]", fmt_rat(&self.lo), fmt_rat(&self.hi))
    }
}

/// One isolating interval per distinct real root, ascending. Endpoints are
/// dyadic rationals.
pub fn isolate_real_roots(p: &Poly) -> Result<Vec<IsolatingInterval>, RootError> {
    let sturm = SturmSeq::new(p)?;
    if p.degree() == Some(0) {
        return Ok(Vec::new());
    }
    let bound = dyadic_ceiling(&cauchy_bound(p));
    let mut out = Vec::new();
    let mut stack = vec![(-bound.clone(), bound)];
    while let Some((lo, hi)) = stack.pop() {
        match sturm.count_in(&lo, &hi) {
            0 => {}
            1 => out.push(IsolatingInterval {
                lo,
                hi,
                poly: p.clone(),
            }),
            _ => {
                let mid = (&lo + &hi) / rat(2);
                stack.push((lo, mid.clone()));
                stack.push((mid, hi));
            }
        }
    }
    out.sort_by(|a, b| a.lo.cmp(&b.lo));
    Ok(out)
}

/// `a + b·√d` with `d > 1` squarefree and `b != 0`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct QuadraticSurd {
    a: Rat,
    b: Rat,
    d: BigInt,
}

impl QuadraticSurd {
    /// Pulls square factors out of `d`. Fails if the result is rational.
    pub fn new(a: Rat, b: Rat, d: BigInt) -> Result<Self, RootError> {
        let degenerate = || RootError::DegenerateSurd {
            a: fmt_rat(&a),
            b: fmt_rat(&b),
            d: d.to_string(),
        };
        if !d.is_positive() || b.is_zero() {
            return Err(degenerate());
        }
        let (k, core) = squarefree_decompose(&d);
        if core.is_one() {
            return Err(degenerate());
        }
        Ok(QuadraticSurd {
            b: &b * rat_int(&k),
            a,
            d: core,
        })
    }

    pub fn a(&self) -> &Rat {
        &self.a
    }

    pub fn b(&self) -> &Rat {
        &self.b
    }

    pub fn d(&self) -> &BigInt {
        &self.d
    }

    pub fn conjugate(&self) -> QuadraticSurd {
        QuadraticSurd {
            a: self.a.clone(),
            b: -&self.b,
            d: self.d.clone(),
        }
    }

    /// `a^2 - d·b^2`, the product with the conjugate.
    pub fn norm(&self) -> Rat {
        &self.a * &self.a - rat_int(&self.d) * &self.b * &self.b
    }

    /// `2a`, the sum with the conjugate.
    pub fn trace(&self) -> Rat {
        &self.a * rat(2)
    }

    /// Exact comparison of `self` with a rational.
    pub fn cmp_rat(&self, x: &Rat) -> Ordering {
        // sign of (a - x) + b√d
        let u = &self.a - x;
        let b_sign = self.b.signum();
        if u.is_zero() || u.signum() == b_sign {
            return if b_sign.is_positive() {
                Ordering::Greater
            } else {
                Ordering::Less
            };
        }
        // u and b√d have opposite signs; compare magnitudes squared.
        let u2 = &u * &u;
        let b2d = &self.b * &self.b * rat_int(&self.d);
        match b2d.cmp(&u2) {
            Ordering::Greater if b_sign.is_positive() => Ordering::Greater,
            Ordering::Greater => Ordering::Less,
            Ordering::Less if u.is_positive() => Ordering::Greater,
            Ordering::Less => Ordering::Less,
            Ordering::Equal => unreachable!("√d is irrational"),
        }
    }

    pub fn is_positive(&self) -> bool {
        self.cmp_rat(&Rat::zero()) == Ordering::Greater
    }

    pub fn abs(&self) -> QuadraticSurd {
        if self.is_positive() {
            self.clone()
        } else {
            QuadraticSurd {
                a: -&self.a,
                b: -&self.b,
                d: self.d.clone(),
            }
        }
    }

    /// `lo < value <= hi`, decided exactly.
    pub fn within(&self, lo: &Rat, hi: &Rat) -> bool {
        self.cmp_rat(lo) == Ordering::Greater && self.cmp_rat(hi) != Ordering::Greater
    }
}

impl fmt::Display for QuadraticSurd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sign = if self.b.is_negative() { '-' } else { '+' };
        let mag = self.b.abs();
        let coeff = if mag.is_one() {
            String::new()
        } else {
            fmt_rat(&mag)
        };
        if self.a.is_zero() {
            if self.b.is_negative() {
                write!(f, "-")?;
            }
            write!(f, "{coeff}√{}", self.d)
        } else {
            write!(f, "{} {sign} {coeff}√{}", fmt_rat(&self.a), self.d)
        }
    }
}

/// An exactly known real algebraic number of degree at most two.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum ExactValue {
    Rational(Rat),
    Surd(QuadraticSurd),
}

impl ExactValue {
    pub fn within(&self, lo: &Rat, hi: &Rat) -> bool {
        match self {
            ExactValue::Rational(r) => lo < r && r <= hi,
            ExactValue::Surd(s) => s.within(lo, hi),
        }
    }

    pub fn cmp_rat(&self, x: &Rat) -> Ordering {
        match self {
            ExactValue::Rational(r) => r.cmp(x),
            ExactValue::Surd(s) => s.cmp_rat(x),
        }
    }
}

impl fmt::Display for ExactValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExactValue::Rational(r) => write!(f, "{}", fmt_rat(r)),
            ExactValue::Surd(s) => write!(f, "{s}"),
        }
    }
}

/// Roots of the monic quadratic `t^2 + c1·t + c0` with positive
/// discriminant, as the pair `(a - b√d, a + b√d)` with `b > 0`, or `None`
/// when the roots are rational or non-real.
pub fn quadratic_roots(monic: &Poly) -> Option<(QuadraticSurd, QuadraticSurd)> {
    if monic.degree() != Some(2) {
        return None;
    }
    let m = monic.monic();
    let c1 = m.coeff(1);
    let c0 = m.coeff(0);
    let disc = &c1 * &c1 - rat(4) * &c0;
    if !disc.is_positive() {
        return None;
    }
    // √(p/q) = √(p·q) / q
    let radicand = disc.numer() * disc.denom();
    let a = -&c1 / rat(2);
    let b = Rat::new(BigInt::one(), disc.denom() * BigInt::from(2));
    let plus = QuadraticSurd::new(a, b, radicand).ok()?;
    Some((plus.conjugate(), plus))
}

/// Dominant modulus of the spectrum of a square rational matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpectralRadius {
    /// Exact value when the dominant real root has degree <= 2 and the
    /// result is certified.
    pub exact: Option<ExactValue>,
    /// The dominant real modulus as the largest root of
    /// `squarefree(g(t)·g(-t))` for the achieving factor `g`.
    pub interval: Option<IsolatingInterval>,
    /// Rational enclosure `[lower, upper]` of the spectral radius.
    pub lower: Rat,
    pub upper: Rat,
    pub achieving_factor: Option<Poly>,
    /// Largest Cauchy bound over factors that have non-real roots.
    pub nonreal_bound: Option<Rat>,
    /// False when some non-real modulus bound is not dominated by the
    /// largest real modulus, leaving only the enclosure.
    pub certified: bool,
}

impl SpectralRadius {
    /// `d > 1` holds for certain: the enclosure lies strictly above one.
    pub fn exceeds_one(&self) -> bool {
        self.lower > Rat::one()
    }
}

struct Candidate {
    factor: Poly,
    interval: IsolatingInterval,
}

/// Decides which of two isolated real algebraic numbers is larger,
/// refining as needed. Equal roots are detected through the gcd.
fn compare_isolated(a: &IsolatingInterval, b: &IsolatingInterval) -> Result<Ordering, RootError> {
    let g = a.poly.gcd(&b.poly);
    let mut a = a.clone();
    let mut b = b.clone();
    loop {
        if a.hi <= b.lo {
            // a ≤ a.hi ≤ b.lo < b
            return Ok(Ordering::Less);
        }
        if b.hi <= a.lo {
            return Ok(Ordering::Greater);
        }
        if g.degree() > Some(0) {
            let lo = (&a.lo).max(&b.lo).clone();
            let hi = (&a.hi).min(&b.hi).clone();
            if lo < hi && SturmSeq::new(&g)?.count_in(&lo, &hi) > 0 {
                return Ok(Ordering::Equal);
            }
        }
        a = a.refine(&(a.width() / rat(2)))?;
        b = b.refine(&(b.width() / rat(2)))?;
    }
}

/// Spectral radius of `m`, isolated to `width`.
///
/// Works factor by factor on the squarefree part of the characteristic
/// polynomial. For each rational factor `g`, the largest real root of
/// `squarefree(g(t)·g(-t))` is the largest modulus of a real root of `g`.
pub fn spectral_radius(m: &Mat, width: &Rat) -> Result<SpectralRadius, RootError> {
    if !width.is_positive() {
        return Err(RootError::NonPositiveWidth(fmt_rat(width)));
    }
    let chi = m.char_poly()?;
    let sf = chi.squarefree_part()?;
    let factorization = factor_over_q(&sf)?;

    let mut best: Option<Candidate> = None;
    let mut nonreal_bound: Option<Rat> = None;
    for factor in &factorization.factors {
        let g = &factor.poly;
        let sturm = SturmSeq::new(g)?;
        let real = sturm.count_real();
        if real < g.degree().unwrap_or(0) {
            let cb = cauchy_bound(g);
            if nonreal_bound.as_ref().is_none_or(|b| &cb > b) {
                nonreal_bound = Some(cb);
            }
        }
        if real == 0 {
            continue;
        }
        let symmetric = (g * &g.reflect()).squarefree_part()?;
        let top = isolate_real_roots(&symmetric)?
            .pop()
            .expect("g has a real root");
        let replace = match &best {
            None => true,
            Some(c) => compare_isolated(&top, &c.interval)? == Ordering::Greater,
        };
        if replace {
            best = Some(Candidate {
                factor: g.clone(),
                interval: top,
            });
        }
    }

    let Some(best) = best else {
        // No real eigenvalues at all: only the bound is known.
        let upper = nonreal_bound.clone().unwrap_or_else(Rat::zero);
        return Ok(SpectralRadius {
            exact: None,
            interval: None,
            lower: Rat::zero(),
            upper,
            achieving_factor: None,
            nonreal_bound,
            certified: false,
        });
    };

    let interval = best.interval.refine(width)?;
    let lower = interval.lo.clone().max(Rat::zero());
    let certified = nonreal_bound.as_ref().is_none_or(|b| b <= &lower);
    let upper = match (&nonreal_bound, certified) {
        (Some(b), false) => b.clone().max(interval.hi.clone()),
        _ => interval.hi.clone(),
    };
    let exact = if certified {
        exact_modulus(&best.factor)
    } else {
        None
    };
    if let Some(e) = &exact {
        debug_assert!(e.within(&interval.lo, &interval.hi));
    }
    Ok(SpectralRadius {
        exact,
        interval: Some(interval),
        lower,
        upper,
        achieving_factor: Some(best.factor),
        nonreal_bound,
        certified,
    })
}

/// Largest modulus of a real root of `g`, exactly, when `deg g <= 2`.
fn exact_modulus(g: &Poly) -> Option<ExactValue> {
    match g.degree()? {
        1 => {
            let root = -g.coeff(0) / g.coeff(1);
            Some(ExactValue::Rational(root.abs()))
        }
        2 => {
            let (_, plus) = quadratic_roots(g)?;
            // max(|a + b√d|, |a - b√d|) = |a| + |b|√d
            QuadraticSurd::new(plus.a.abs(), plus.b.abs(), plus.d.clone())
                .ok()
                .map(ExactValue::Surd)
        }
        _ => None,
    }
}
