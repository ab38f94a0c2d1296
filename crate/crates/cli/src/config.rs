//! Input configuration: TOML text, integers only, versioned by
//! `schema_version`. Fibration indices in the file are 1-based; the
//! validated [`Config`] is 0-based.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::Range;

use cydyn_core::linalg::Rat;
use cydyn_core::primitivity::Hypotheses;
use cydyn_core::translation::TranslationSpec;
use num_bigint::BigInt;
use num_traits::Zero;
use serde::Deserialize;
use toml::Spanned;

pub const SCHEMA_VERSION: i64 = 1;
pub const DEFAULT_DEPTH: usize = 3;
pub const MAX_DEPTH: usize = 8;

/// Schema or validation failure, located by line when the offending value
/// can be traced back to the source.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub struct ConfigError {
    pub line: Option<usize>,
    pub field: String,
    pub message: String,
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.line {
            Some(l) => write!(f, "line {l}: {}: {}", self.field, self.message),
            None => write!(f, "{}: {}", self.field, self.message),
        }
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    schema_version: Spanned<i64>,
    ambient: RawAmbient,
    complete_intersection: RawCi,
    lattice: RawLattice,
    #[serde(default)]
    maps: Vec<RawMap>,
    composition: Option<RawComposition>,
    #[serde(default)]
    hypotheses: RawHypotheses,
    #[serde(default)]
    analysis: RawAnalysis,
    #[serde(default)]
    reference: Vec<RawReference>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawAmbient {
    dims: Spanned<Vec<i64>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawCi {
    multidegrees: Spanned<Vec<Vec<i64>>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawLattice {
    fibrations: Vec<Spanned<i64>>,
    effective_witnesses: Option<Vec<Spanned<Vec<i64>>>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawMap {
    name: Spanned<String>,
    fibration: Spanned<i64>,
    plus: Spanned<i64>,
    minus: Spanned<i64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawComposition {
    #[serde(default)]
    order: Vec<Spanned<String>>,
    transports: Option<Vec<Spanned<String>>>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawHypotheses {
    minimal_calabi_yau: Option<bool>,
    dimension: Option<Spanned<i64>>,
    picard_number: Option<Spanned<i64>>,
    m_abundant: Option<bool>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawAnalysis {
    depth: Option<Spanned<i64>>,
    width: Option<Spanned<[i64; 2]>>,
}

#[derive(Debug, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
enum RawReference {
    Matrix {
        map: String,
        value: Vec<Vec<i64>>,
    },
    Pullback {
        value: Vec<Vec<i64>>,
    },
    CharPoly {
        value: Vec<i64>,
    },
    DynamicalDegree {
        value: [i64; 3],
    },
    TransportImage {
        map: String,
        divisor: Vec<i64>,
        value: Vec<i64>,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MapConfig {
    pub name: String,
    pub spec: TranslationSpec,
}

/// A published value to compare the computation against. Map references
/// are indices into [`Config::maps`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Reference {
    Matrix {
        map: usize,
        value: Vec<Vec<i64>>,
    },
    Pullback {
        value: Vec<Vec<i64>>,
    },
    CharPoly {
        value: Vec<i64>,
    },
    /// `a + b√d`.
    DynamicalDegree {
        value: [i64; 3],
    },
    /// Pushforward of `divisor` along the map.
    TransportImage {
        map: usize,
        divisor: Vec<i64>,
        value: Vec<i64>,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Config {
    pub dims: Vec<u32>,
    pub multidegrees: Vec<Vec<u32>>,
    /// 0-based; each contributes the class of its fiber as a covering curve.
    pub fibrations: Vec<usize>,
    /// `None` means the basis divisors.
    pub effective_witnesses: Option<Vec<Vec<i64>>>,
    pub maps: Vec<MapConfig>,
    /// Indices into `maps`; the composite is `f_1 ∘ ... ∘ f_r` in this order.
    pub order: Vec<usize>,
    /// Indices into `maps` whose pushforwards drive orbit transport.
    pub transports: Vec<usize>,
    pub hypotheses: Hypotheses,
    pub depth: usize,
    /// `None` defers to the environment or the built-in default.
    pub width: Option<Rat>,
    pub references: Vec<Reference>,
}

impl Config {
    pub fn rank(&self) -> usize {
        self.dims.len()
    }

    pub fn map_index(&self, name: &str) -> Option<usize> {
        self.maps.iter().position(|m| m.name == name)
    }
}

struct Ctx<'a> {
    text: &'a str,
}

impl Ctx<'_> {
    fn line(&self, span: Range<usize>) -> usize {
        self.text[..span.start.min(self.text.len())]
            .matches('\n')
            .count()
            + 1
    }

    fn err<T>(
        &self,
        span: Option<Range<usize>>,
        field: impl Into<String>,
        message: impl Into<String>,
    ) -> Result<T, ConfigError> {
        Err(ConfigError {
            line: span.map(|s| self.line(s)),
            field: field.into(),
            message: message.into(),
        })
    }

    fn index(&self, v: &Spanned<i64>, rank: usize, field: &str) -> Result<usize, ConfigError> {
        let i = *v.get_ref();
        if i < 1 || i as usize > rank {
            return self.err(
                Some(v.span()),
                field,
                format!("index {i} out of range 1..={rank}"),
            );
        }
        Ok(i as usize - 1)
    }
}

/// Parses and validates configuration text.
pub fn parse_config(text: &str) -> Result<Config, ConfigError> {
    let cx = Ctx { text };
    let raw: RawConfig = toml::from_str(text).map_err(|e| ConfigError {
        line: e.span().map(|s| cx.line(s)),
        field: "schema".into(),
        message: e.message().to_string(),
    })?;

    if *raw.schema_version.get_ref() != SCHEMA_VERSION {
        return cx.err(
            Some(raw.schema_version.span()),
            "schema_version",
            format!(
                "unsupported version {}, expected {SCHEMA_VERSION}",
                raw.schema_version.get_ref()
            ),
        );
    }

    let dims_span = raw.ambient.dims.span();
    let mut dims = Vec::new();
    for &d in raw.ambient.dims.get_ref() {
        if !(1..=64).contains(&d) {
            return cx.err(
                Some(dims_span),
                "ambient.dims",
                format!("dimension {d} must lie in 1..=64"),
            );
        }
        dims.push(d as u32);
    }
    if dims.is_empty() {
        return cx.err(
            Some(dims_span),
            "ambient.dims",
            "at least one projective factor is required",
        );
    }
    let rank = dims.len();

    let md_span = raw.complete_intersection.multidegrees.span();
    let mut multidegrees = Vec::new();
    for (r, row) in raw
        .complete_intersection
        .multidegrees
        .get_ref()
        .iter()
        .enumerate()
    {
        let field = format!("complete_intersection.multidegrees[{r}]");
        if row.len() != rank {
            return cx.err(
                Some(md_span.clone()),
                field,
                format!("has {} entries, expected {rank}", row.len()),
            );
        }
        if row.iter().any(|&d| d < 0) {
            return cx.err(Some(md_span.clone()), field, "degrees must be nonnegative");
        }
        multidegrees.push(row.iter().map(|&d| d as u32).collect::<Vec<u32>>());
    }
    let ambient_dim: u32 = dims.iter().sum();
    if ambient_dim as usize != multidegrees.len() + 3 {
        return cx.err(
            Some(md_span),
            "complete_intersection.multidegrees",
            format!(
                "{} equations in dimension {ambient_dim} do not cut out a threefold",
                multidegrees.len()
            ),
        );
    }

    let mut fibrations = Vec::new();
    for (n, f) in raw.lattice.fibrations.iter().enumerate() {
        let i = cx.index(f, rank, &format!("lattice.fibrations[{n}]"))?;
        if fibrations.contains(&i) {
            return cx.err(
                Some(f.span()),
                format!("lattice.fibrations[{n}]"),
                "duplicate fibration",
            );
        }
        fibrations.push(i);
    }
    let effective_witnesses = match raw.lattice.effective_witnesses {
        None => None,
        Some(ws) => {
            let mut out = Vec::new();
            for (n, w) in ws.iter().enumerate() {
                if w.get_ref().len() != rank {
                    return cx.err(
                        Some(w.span()),
                        format!("lattice.effective_witnesses[{n}]"),
                        format!("has {} entries, expected {rank}", w.get_ref().len()),
                    );
                }
                out.push(w.get_ref().clone());
            }
            Some(out)
        }
    };

    let mut maps: Vec<MapConfig> = Vec::new();
    let mut by_name = BTreeMap::new();
    for (n, m) in raw.maps.iter().enumerate() {
        let name = m.name.get_ref().trim().to_string();
        let field = |k: &str| format!("maps[{n}].{k}");
        if name.is_empty()
            || !name
                .chars()
                .all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '-')
        {
            return cx.err(
                Some(m.name.span()),
                field("name"),
                "names use ASCII letters, digits, '_' and '-'",
            );
        }
        if by_name.insert(name.clone(), n).is_some() {
            return cx.err(
                Some(m.name.span()),
                field("name"),
                format!("duplicate map name {name:?}"),
            );
        }
        let i = cx.index(&m.fibration, rank, &field("fibration"))?;
        let j = cx.index(&m.plus, rank, &field("plus"))?;
        let k = cx.index(&m.minus, rank, &field("minus"))?;
        let Ok(spec) = TranslationSpec::new(i, j, k, rank) else {
            return cx.err(
                Some(m.fibration.span()),
                format!("maps[{n}]"),
                "fibration, plus and minus must be distinct",
            );
        };
        maps.push(MapConfig { name, spec });
    }

    let lookup = |s: &Spanned<String>, field: String| -> Result<usize, ConfigError> {
        match by_name.get(s.get_ref().trim()) {
            Some(&i) => Ok(i),
            None => cx.err(
                Some(s.span()),
                field,
                format!("unknown map {:?}", s.get_ref()),
            ),
        }
    };
    let (order, transports) = match raw.composition {
        None => ((0..maps.len()).collect(), (0..maps.len()).collect()),
        Some(c) => {
            let order = c
                .order
                .iter()
                .enumerate()
                .map(|(n, s)| lookup(s, format!("composition.order[{n}]")))
                .collect::<Result<Vec<_>, _>>()?;
            let transports = match c.transports {
                None => (0..maps.len()).collect(),
                Some(ts) => ts
                    .iter()
                    .enumerate()
                    .map(|(n, s)| lookup(s, format!("composition.transports[{n}]")))
                    .collect::<Result<Vec<_>, _>>()?,
            };
            (order, transports)
        }
    };

    let positive = |v: &Option<Spanned<i64>>, field: &str| -> Result<Option<u32>, ConfigError> {
        match v {
            None => Ok(None),
            Some(s) if *s.get_ref() >= 1 && *s.get_ref() <= u32::MAX as i64 => {
                Ok(Some(*s.get_ref() as u32))
            }
            Some(s) => cx.err(Some(s.span()), field, "must be a positive integer"),
        }
    };
    let hypotheses = Hypotheses {
        minimal_calabi_yau: raw.hypotheses.minimal_calabi_yau,
        dimension: positive(&raw.hypotheses.dimension, "hypotheses.dimension")?,
        picard_number: positive(&raw.hypotheses.picard_number, "hypotheses.picard_number")?,
        m_abundant: raw.hypotheses.m_abundant,
    };

    let depth = match &raw.analysis.depth {
        None => DEFAULT_DEPTH,
        Some(d) if (0..=MAX_DEPTH as i64).contains(d.get_ref()) => *d.get_ref() as usize,
        Some(d) => {
            return cx.err(
                Some(d.span()),
                "analysis.depth",
                format!("must lie in 0..={MAX_DEPTH}"),
            )
        }
    };
    let width = match &raw.analysis.width {
        None => None,
        Some(w) => {
            let [num, den] = *w.get_ref();
            if num <= 0 || den <= 0 {
                return cx.err(
                    Some(w.span()),
                    "analysis.width",
                    "numerator and denominator must be positive",
                );
            }
            Some(Rat::new(BigInt::from(num), BigInt::from(den)))
        }
    };

    let mut references = Vec::new();
    for (n, r) in raw.reference.into_iter().enumerate() {
        let field = |k: &str| format!("reference[{n}].{k}");
        let map_ix = |name: &str| match by_name.get(name.trim()) {
            Some(&i) => Ok(i),
            None => cx.err(None, field("map"), format!("unknown map {name:?}")),
        };
        let square = |v: &Vec<Vec<i64>>| {
            if v.len() != rank || v.iter().any(|r| r.len() != rank) {
                cx.err(
                    None,
                    field("value"),
                    format!("expected a {rank}x{rank} matrix"),
                )
            } else {
                Ok(())
            }
        };
        let vector = |v: &Vec<i64>, k: &str| {
            if v.len() != rank {
                cx.err(None, field(k), format!("expected {rank} entries"))
            } else {
                Ok(())
            }
        };
        references.push(match r {
            RawReference::Matrix { map, value } => {
                square(&value)?;
                Reference::Matrix {
                    map: map_ix(&map)?,
                    value,
                }
            }
            RawReference::Pullback { value } => {
                square(&value)?;
                Reference::Pullback { value }
            }
            RawReference::CharPoly { value } => {
                if value.len() != rank + 1 {
                    return cx.err(
                        None,
                        field("value"),
                        format!("expected {} coefficients", rank + 1),
                    );
                }
                Reference::CharPoly { value }
            }
            RawReference::DynamicalDegree { value } => {
                if value[2] < 2 {
                    return cx.err(None, field("value"), "radicand must be at least 2");
                }
                Reference::DynamicalDegree { value }
            }
            RawReference::TransportImage {
                map,
                divisor,
                value,
            } => {
                vector(&divisor, "divisor")?;
                vector(&value, "value")?;
                Reference::TransportImage {
                    map: map_ix(&map)?,
                    divisor,
                    value,
                }
            }
        });
    }

    Ok(Config {
        dims,
        multidegrees,
        fibrations,
        effective_witnesses,
        maps,
        order,
        transports,
        hypotheses,
        depth,
        width,
        references,
    })
}

/// Parses `p/q`, an integer, or a finite decimal such as `0.000001`,
/// exactly. The result must be positive.
pub fn parse_rational(s: &str) -> Result<Rat, String> {
    let s = s.trim();
    let bad = || format!("{s:?} is not a positive rational (use p/q, an integer or a decimal)");
    let r = if let Some((p, q)) = s.split_once('/') {
        let p: BigInt = p.trim().parse().map_err(|_| bad())?;
        let q: BigInt = q.trim().parse().map_err(|_| bad())?;
        if q.is_zero() {
            return Err(bad());
        }
        Rat::new(p, q)
    } else if let Some((int, frac)) = s.split_once('.') {
        if frac.is_empty() || !frac.chars().all(|c| c.is_ascii_digit()) {
            return Err(bad());
        }
        let digits: BigInt = format!("{int}{frac}").parse().map_err(|_| bad())?;
        Rat::new(digits, BigInt::from(10).pow(frac.len() as u32))
    } else {
        Rat::from_integer(s.parse().map_err(|_| bad())?)
    };
    if r <= Rat::zero() {
        return Err(bad());
    }
    Ok(r)
}
