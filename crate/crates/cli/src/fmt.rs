//! Canonical text forms shared by both report renderings.

use cydyn_core::linalg::{fmt_rat, Rat};
use cydyn_core::roots::{IsolatingInterval, QuadraticSurd};

pub fn rat(r: &Rat) -> String {
    fmt_rat(r)
}

/// `[a,b,c]`.
pub fn rat_vector(v: &[Rat]) -> String {
    let parts: Vec<String> = v.iter().map(fmt_rat).collect();
    format!("[{}]", parts.join(","))
}

pub fn int_vector(v: &[i64]) -> String {
    let parts: Vec<String> = v.iter().map(i64::to_string).collect();
    format!("[{}]", parts.join(","))
}

/// Same layout as the `Display` of a matrix: `[[1,2],[3,4]]`.
pub fn int_matrix(rows: &[Vec<i64>]) -> String {
    let parts: Vec<String> = rows.iter().map(|r| int_vector(r)).collect();
    format!("[{}]", parts.join(","))
}

/// `a + b√d` as the triple `(a, b, d)`.
pub fn surd(s: &QuadraticSurd) -> String {
    format!("({}, {}, {})", fmt_rat(s.a()), fmt_rat(s.b()), s.d())
}

/// Closed rational enclosure `[lo, hi]`.
pub fn enclosure(lo: &Rat, hi: &Rat) -> String {
    format!("[{}, {}]", fmt_rat(lo), fmt_rat(hi))
}

/// Half-open isolating interval `(lo, hi]`.
pub fn interval(iv: &IsolatingInterval) -> String {
    iv.to_string()
}

/// Fixed-precision decimal for the floating-point entropy bounds.
pub fn float(x: f64) -> String {
    format!("{x:.12}")
}

pub fn names(v: &[String]) -> String {
    format!("[{}]", v.join(","))
}
