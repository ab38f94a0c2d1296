//! Report rendering. The machine form is a flat list of `key = value`
//! lines in a fixed order; the human form is prose assembled from the very
//! same value strings, so the two never disagree on a number.

use cydyn_core::lattice::{ExclusionCertificate, LatticeContext, Transport};
use cydyn_core::primitivity::{Discharge, FixedSubspaceCondition, Irreducibility, Verdict};
use cydyn_core::roots::{ExactValue, SpectralRadius};

use crate::analysis::{Analysis, CompositeAnalysis, EigenData};
use crate::config::SCHEMA_VERSION;
use crate::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Human,
    Machine,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Report {
    entries: Vec<(String, String)>,
    human: String,
}

impl Report {
    pub fn entries(&self) -> &[(String, String)] {
        &self.entries
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.entries
            .iter()
            .find(|(k, _)| k == key)
            .map(|(_, v)| v.as_str())
    }

    /// Keys starting with `prefix`, in report order.
    pub fn with_prefix<'a>(
        &'a self,
        prefix: &'a str,
    ) -> impl Iterator<Item = (&'a str, &'a str)> + 'a {
        self.entries
            .iter()
            .filter(move |(k, _)| k.starts_with(prefix))
            .map(|(k, v)| (k.as_str(), v.as_str()))
    }

    pub fn machine(&self) -> String {
        let mut out = String::new();
        for (k, v) in &self.entries {
            out.push_str(k);
            out.push_str(" = ");
            out.push_str(v);
            out.push('\n');
        }
        out
    }

    pub fn human(&self) -> &str {
        &self.human
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Human => self.human.clone(),
            Format::Machine => self.machine(),
        }
    }
}

#[derive(Default)]
struct Builder {
    entries: Vec<(String, String)>,
    human: String,
}

impl Builder {
    /// Records `key = value` and hands the value back for the prose.
    fn put(&mut self, key: impl Into<String>, value: impl Into<String>) -> String {
        let key = key.into();
        let value = value.into();
        debug_assert!(
            !self.entries.iter().any(|(k, _)| *k == key),
            "duplicate key {key}"
        );
        self.entries.push((key, value.clone()));
        value
    }

    fn line(&mut self, indent: usize, text: impl AsRef<str>) {
        for _ in 0..indent {
            self.human.push_str("  ");
        }
        self.human.push_str(text.as_ref());
        self.human.push('\n');
    }

    fn blank(&mut self) {
        self.human.push('\n');
    }
}

/// Emits one certificate under `prefix` and returns its prose.
fn certificate(
    b: &mut Builder,
    prefix: &str,
    cert: &ExclusionCertificate,
    ctx: &LatticeContext,
    transports: &[Transport],
) -> String {
    b.put(format!("{prefix}.kind"), cert.kind());
    match cert {
        ExclusionCertificate::CoveringCurve {
            divisor,
            curve,
            pairing,
        } => {
            let d = b.put(
                format!("{prefix}.divisor"),
                fmt::rat_vector(divisor.coords()),
            );
            let c = b.put(format!("{prefix}.curve"), (curve + 1).to_string());
            let src = b.put(
                format!("{prefix}.curve_source"),
                ctx.covering_curves()[*curve].provenance.clone(),
            );
            let p = b.put(format!("{prefix}.pairing"), fmt::rat(pairing));
            format!("covering curve {c} ({src}) pairs with {d} to {p}")
        }
        ExclusionCertificate::OrbitTransport {
            divisor,
            path,
            image,
            curve,
            pairing,
        } => {
            let d = b.put(
                format!("{prefix}.divisor"),
                fmt::rat_vector(divisor.coords()),
            );
            let names: Vec<String> = path
                .iter()
                .map(|&t| transports[t].label().to_string())
                .collect();
            let p_names = b.put(format!("{prefix}.path"), fmt::names(&names));
            b.put(format!("{prefix}.depth"), path.len().to_string());
            let img = b.put(format!("{prefix}.image"), fmt::rat_vector(image.coords()));
            let c = b.put(format!("{prefix}.curve"), (curve + 1).to_string());
            let src = b.put(
                format!("{prefix}.curve_source"),
                ctx.covering_curves()[*curve].provenance.clone(),
            );
            let p = b.put(format!("{prefix}.pairing"), fmt::rat(pairing));
            format!("pushforward along {p_names} sends {d} to {img}; covering curve {c} ({src}) pairs to {p}")
        }
        ExclusionCertificate::NefCurveExclusion {
            curve,
            witness,
            pairing,
        } => {
            let c = b.put(format!("{prefix}.curve"), fmt::rat_vector(curve.coords()));
            let w = b.put(format!("{prefix}.witness"), (witness + 1).to_string());
            let wc = b.put(
                format!("{prefix}.witness_class"),
                fmt::rat_vector(ctx.effective_witnesses()[*witness].coords()),
            );
            let p = b.put(format!("{prefix}.pairing"), fmt::rat(pairing));
            format!("effective witness {w} {wc} pairs with {c} to {p}")
        }
    }
}

fn spectral(b: &mut Builder, prefix: &str, sr: &SpectralRadius) -> String {
    let exact = match &sr.exact {
        Some(ExactValue::Surd(s)) => {
            let v = b.put(format!("{prefix}.exact"), fmt::surd(s));
            b.put(format!("{prefix}.exact.norm"), fmt::rat(&s.norm()));
            Some((s.to_string(), v))
        }
        Some(ExactValue::Rational(q)) => {
            let v = b.put(format!("{prefix}.exact"), fmt::rat(q));
            Some((v.clone(), v))
        }
        None => {
            b.put(format!("{prefix}.exact"), "none");
            None
        }
    };
    let enc = b.put(
        format!("{prefix}.enclosure"),
        fmt::enclosure(&sr.lower, &sr.upper),
    );
    let w = b.put(
        format!("{prefix}.enclosure_width"),
        fmt::rat(&(&sr.upper - &sr.lower)),
    );
    if let Some(iv) = &sr.interval {
        b.put(format!("{prefix}.isolating_interval"), fmt::interval(iv));
    }
    if let Some(f) = &sr.achieving_factor {
        b.put(format!("{prefix}.achieving_factor"), f.to_string());
    }
    b.put(
        format!("{prefix}.nonreal_bound"),
        sr.nonreal_bound
            .as_ref()
            .map_or("none".to_string(), fmt::rat),
    );
    let cert = b.put(format!("{prefix}.certified"), sr.certified.to_string());
    let gt1 = b.put(
        format!("{prefix}.exceeds_one"),
        sr.exceeds_one().to_string(),
    );
    match exact {
        Some((pretty, triple)) => format!(
            "{pretty} {triple} in {enc}, enclosure width {w}, certified {cert}, exceeds one {gt1}"
        ),
        None => format!("in {enc}, enclosure width {w}, certified {cert}, exceeds one {gt1}"),
    }
}

fn header(b: &mut Builder, a: &Analysis) {
    b.put("report.schema_version", SCHEMA_VERSION.to_string());
    b.put(
        "report.generator",
        format!("cydyn {}", env!("CARGO_PKG_VERSION")),
    );
    b.line(0, "Birational dynamics report");
    b.blank();
    let cfg = &a.config;
    let dims: Vec<i64> = cfg.dims.iter().map(|&d| d as i64).collect();
    let dims = b.put("input.ambient.dims", fmt::int_vector(&dims));
    let md: Vec<Vec<i64>> = cfg
        .multidegrees
        .iter()
        .map(|r| r.iter().map(|&d| d as i64).collect())
        .collect();
    let md = b.put(
        "input.complete_intersection.multidegrees",
        fmt::int_matrix(&md),
    );
    let fibs: Vec<i64> = cfg.fibrations.iter().map(|&i| i as i64 + 1).collect();
    let fibs = b.put("input.lattice.fibrations", fmt::int_vector(&fibs));
    let depth = b.put("input.analysis.depth", a.depth.to_string());
    let width = b.put("input.analysis.width", fmt::rat(&a.width));
    b.line(0, "Input");
    b.line(
        1,
        format!("product of projective spaces of dimensions {dims}"),
    );
    b.line(1, format!("complete intersection of multidegrees {md}"));
    b.line(
        1,
        format!("fibrations {fibs}, transport depth {depth}, refinement width {width}"),
    );
    b.blank();
}

fn lattice(b: &mut Builder, a: &Analysis) {
    let rank = a.form.rank();
    let r = b.put("lattice.rank", rank.to_string());
    b.line(0, format!("Lattice of rank {r}"));
    let mut triples = Vec::new();
    for i in 0..rank {
        for j in i..rank {
            for l in j..rank {
                let key = format!("lattice.triple.{}.{}.{}", i + 1, j + 1, l + 1);
                let v = b.put(key, a.form.get(i, j, l).to_string());
                triples.push(format!("T({},{},{}) = {v}", i + 1, j + 1, l + 1));
            }
        }
    }
    b.line(1, format!("triple intersections {}", triples.join(", ")));
    for (n, c) in a.ctx.covering_curves().iter().enumerate() {
        let cls = b.put(
            format!("lattice.covering_curve.{}.class", n + 1),
            fmt::rat_vector(c.class.coords()),
        );
        let src = b.put(
            format!("lattice.covering_curve.{}.source", n + 1),
            c.provenance.clone(),
        );
        b.line(1, format!("covering curve {} {cls} ({src})", n + 1));
    }
    for (n, w) in a.ctx.effective_witnesses().iter().enumerate() {
        let v = b.put(
            format!("lattice.effective_witness.{}", n + 1),
            fmt::rat_vector(w.coords()),
        );
        b.line(1, format!("effective witness {} {v}", n + 1));
    }
    b.blank();
}

fn maps(b: &mut Builder, a: &Analysis) {
    if a.maps.is_empty() {
        b.put("maps.count", "0");
        b.line(0, "No translation maps configured");
        b.blank();
        return;
    }
    b.put("maps.count", a.maps.len().to_string());
    b.line(
        0,
        "Translation maps (pushforward matrices, columns are images)",
    );
    for m in &a.maps {
        let p = format!("map.{}", m.name);
        let t = &m.synth.trace;
        let spec = b.put(format!("{p}.spec"), m.synth.spec.to_string());
        let block = b.put(format!("{p}.quotient_block"), m.synth.block.to_string());
        let rel = b.put(
            format!("{p}.conjugation_relation"),
            t.conjugation_relation.clone(),
        );
        let eq = b.put(format!("{p}.surface_equation"), t.surface_equation.clone());
        let ex = b.put(format!("{p}.surface_expanded"), t.surface_expanded.clone());
        let cands = b.put(
            format!("{p}.surface_candidates"),
            fmt::rat_vector(&t.surface_candidates),
        );
        let mm = b.put(format!("{p}.m"), t.m.to_string());
        let nn = b.put(format!("{p}.n"), t.n.to_string());
        let mat = b.put(format!("{p}.matrix"), m.synth.matrix.to_string());
        let det = b.put(
            format!("{p}.det"),
            m.synth
                .matrix
                .det()
                .map(|d| fmt::rat(&d))
                .unwrap_or_else(|e| e.to_string()),
        );
        let chi = b.put(format!("{p}.char_poly"), m.char_poly.to_string());
        let sf = b.put(
            format!("{p}.surface_form_preserved"),
            m.surface_form_preserved.to_string(),
        );
        b.line(1, format!("{} {spec}", m.name));
        b.line(
            2,
            format!("action on Pic modulo the fibration class: {block}"),
        );
        b.line(2, format!("conjugation constraint gives {rel}"));
        b.line(
            2,
            format!("surface constraint {eq}, that is {ex}, solutions {cands}"),
        );
        b.line(2, format!("m = {mm}, n = {nn}"));
        b.line(2, format!("matrix {mat}, determinant {det}"));
        b.line(
            2,
            format!("characteristic polynomial {chi}, surface form preserved {sf}"),
        );
    }
    b.blank();
}

fn composite(b: &mut Builder, a: &Analysis, c: &CompositeAnalysis) {
    let order = b.put("composite.order", fmt::names(&c.order));
    b.line(0, format!("Composite of {order}"));
    let push = b.put("composite.pushforward", c.pushforward.to_string());
    let pull = b.put("composite.pullback", c.pullback.to_string());
    b.line(1, format!("pushforward product {push}"));
    b.line(1, format!("pullback (inverse) {pull}"));
    let chi = b.put("composite.char_poly", c.char_poly.to_string());
    b.put(
        "composite.char_poly.coefficients",
        fmt::rat_vector(c.char_poly.coeffs()),
    );
    let pal = b.put(
        "composite.char_poly.palindromic_up_to_sign",
        c.palindromic_up_to_sign.to_string(),
    );
    let sqf = b.put("composite.char_poly.squarefree", c.squarefree.to_string());
    b.line(1, format!("characteristic polynomial det(M - tI) = {chi}"));
    b.line(1, format!("palindromic up to sign {pal}, squarefree {sqf}"));
    b.put("composite.factor.count", c.factors.len().to_string());
    b.line(1, "rational factorization of the squarefree part:");
    for (n, f) in c.factors.iter().enumerate() {
        let p = format!("composite.factor.{}", n + 1);
        let poly = b.put(p.clone(), f.poly.to_string());
        let kind = b.put(
            format!("{p}.kind"),
            match f.kind {
                cydyn_core::linalg::FactorKind::Linear => "linear",
                cydyn_core::linalg::FactorKind::Irreducible => "irreducible",
                cydyn_core::linalg::FactorKind::PossiblyReducible => "possibly_reducible",
            },
        );
        let roots = match &f.eigen {
            EigenData::Rational(q) => {
                let v = b.put(format!("{p}.root"), fmt::rat(q));
                format!("root {v}")
            }
            EigenData::Surds {
                minus,
                plus,
                intervals,
            } => {
                let mut parts = Vec::new();
                for (k, (s, iv)) in [minus, plus].into_iter().zip(intervals).enumerate() {
                    let e = b.put(format!("{p}.root.{}.exact", k + 1), fmt::surd(s));
                    let i = b.put(format!("{p}.root.{}.interval", k + 1), fmt::interval(iv));
                    parts.push(format!("{s} {e} in {i}"));
                }
                format!("roots {}", parts.join(" and "))
            }
            EigenData::Isolated { intervals, nonreal } => {
                let mut parts = Vec::new();
                for (k, iv) in intervals.iter().enumerate() {
                    let i = b.put(format!("{p}.root.{}.interval", k + 1), fmt::interval(iv));
                    parts.push(format!("real root in {i}"));
                }
                let nr = b.put(format!("{p}.nonreal_roots"), nonreal.to_string());
                parts.push(format!("{nr} non-real roots"));
                parts.join(", ")
            }
        };
        b.line(2, format!("{poly} ({kind}): {roots}"));
    }

    let r = &c.criterion;
    b.put("dynamical_degree.requested_width", fmt::rat(&a.width));
    let d1 = spectral(b, "dynamical_degree", &r.spectral_radius);
    b.line(1, format!("first dynamical degree d1 = {d1}"));
    match &r.inverse_spectral_radius {
        Some(sr) => {
            let s = spectral(b, "inverse_spectral_radius", sr);
            b.line(1, format!("spectral radius of the inverse {s}"));
        }
        None => {
            b.put("inverse_spectral_radius.exact", "none");
        }
    }
    let lo = b.put("entropy.log_d1.lower", fmt::float(r.entropy.lower));
    let hi = b.put("entropy.log_d1.upper", fmt::float(r.entropy.upper));
    b.line(1, format!("log d1 in [{lo}, {hi}]"));
    b.blank();
}

fn criterion(b: &mut Builder, a: &Analysis, c: &CompositeAnalysis) {
    let r = &c.criterion;
    let ctx = &a.ctx;
    let ts = &c.transports;
    let branch = b.put("criterion.branch", r.branch);
    b.line(0, format!("Primitivity criterion ({branch} branch)"));
    let t: Vec<String> = ts.iter().map(|t| t.label().to_string()).collect();
    let t = b.put("criterion.transports", fmt::names(&t));
    b.line(1, format!("orbit transport along {t}"));

    let irr = match &r.irreducibility {
        Irreducibility::Irreducible { .. } => b.put("criterion.irreducibility", "irreducible"),
        Irreducibility::Reducible { witness, .. } => {
            let v = b.put("criterion.irreducibility", "reducible");
            b.put("criterion.irreducibility.witness", witness.to_string());
            v
        }
        Irreducibility::Unresolved { residue, .. } => {
            let v = b.put("criterion.irreducibility", "unresolved");
            b.put("criterion.irreducibility.residue", residue.to_string());
            v
        }
    };
    let app = b.put(
        "criterion.oguiso_applicable",
        r.oguiso_applicable.to_string(),
    );
    let why = b.put("criterion.oguiso_reason", r.oguiso_reason.clone());
    b.line(
        1,
        format!("irreducible action criterion: {irr}, applicable {app} ({why})"),
    );

    let status = match &r.condition1 {
        FixedSubspaceCondition::Trivial => "trivial",
        FixedSubspaceCondition::Ray(x) if x.is_certified() => "certified",
        FixedSubspaceCondition::Ray(_) => "failed",
        FixedSubspaceCondition::Inconclusive { .. } => "inconclusive",
    };
    let s = b.put("criterion.condition1.status", status);
    b.line(
        1,
        format!("condition 1, fixed subspace meets the pseudoeffective cone trivially: {s}"),
    );
    match &r.condition1 {
        FixedSubspaceCondition::Trivial => b.line(2, "no nonzero fixed class"),
        FixedSubspaceCondition::Ray(ray) => {
            let g = b.put(
                "criterion.condition1.generator",
                fmt::rat_vector(ray.generator.coords()),
            );
            b.line(2, format!("fixed subspace spanned by {g}"));
            for (sign, certs) in [("positive", &ray.positive), ("negative", &ray.negative)] {
                b.put(
                    format!("criterion.condition1.{sign}.count"),
                    certs.len().to_string(),
                );
                for (n, cert) in certs.iter().enumerate() {
                    let text = certificate(
                        b,
                        &format!("criterion.condition1.{sign}.{}", n + 1),
                        cert,
                        ctx,
                        ts,
                    );
                    b.line(2, format!("{sign} ray: {text}"));
                }
            }
        }
        FixedSubspaceCondition::Inconclusive { basis } => {
            let v: Vec<String> = basis.iter().map(|x| fmt::rat_vector(x)).collect();
            let v = b.put("criterion.condition1.basis", format!("[{}]", v.join(",")));
            b.line(2, format!("fixed subspace {v} has dimension at least two"));
        }
    }

    match &r.condition2 {
        Err(reason) => {
            let s = b.put("criterion.condition2.status", "not_enumerated");
            let why = b.put("criterion.condition2.reason", reason.clone());
            b.line(
                1,
                format!("condition 2, no rational stable face: {s} ({why})"),
            );
        }
        Ok(ds) => {
            let s = b.put(
                "criterion.condition2.status",
                if r.condition2_discharged() {
                    "discharged"
                } else {
                    "unresolved"
                },
            );
            let count = b.put("criterion.condition2.subspace_count", ds.len().to_string());
            b.line(
                1,
                format!(
                    "condition 2, no rational stable face: {s} ({count} proper stable subspaces)"
                ),
            );
            for (n, d) in ds.iter().enumerate() {
                let p = format!("criterion.condition2.subspace.{}", n + 1);
                let f = b.put(format!("{p}.factor"), d.subspace.factor.to_string());
                let dim = b.put(format!("{p}.dim"), d.subspace.dim().to_string());
                let basis: Vec<String> = d
                    .subspace
                    .basis
                    .iter()
                    .map(|x| fmt::rat_vector(x))
                    .collect();
                let basis = b.put(format!("{p}.basis"), format!("[{}]", basis.join(",")));
                b.line(
                    2,
                    format!("kernel of {f} at M, dimension {dim}, basis {basis}"),
                );
                match &d.discharge {
                    Discharge::FaceExclusion(ray) => {
                        let k = b.put(format!("{p}.discharge"), "face_exclusion");
                        b.line(3, format!("{k}: both rays leave the pseudoeffective cone"));
                        for (sign, certs) in
                            [("positive", &ray.positive), ("negative", &ray.negative)]
                        {
                            for (m, cert) in certs.iter().enumerate() {
                                let text =
                                    certificate(b, &format!("{p}.{sign}.{}", m + 1), cert, ctx, ts);
                                b.line(3, format!("{sign} ray: {text}"));
                            }
                        }
                    }
                    Discharge::DualFaceExclusion {
                        annihilator,
                        eigenvalue,
                        positive,
                        negative,
                    } => {
                        let k = b.put(format!("{p}.discharge"), "dual_face_exclusion");
                        let u = b.put(
                            format!("{p}.annihilator"),
                            fmt::rat_vector(annihilator.coords()),
                        );
                        let ev = b.put(format!("{p}.annihilator_eigenvalue"), fmt::rat(eigenvalue));
                        b.line(
                            3,
                            format!("{k}: annihilator {u}, eigenvalue {ev} of the transpose"),
                        );
                        let tp = certificate(b, &format!("{p}.positive"), positive, ctx, ts);
                        let tn = certificate(b, &format!("{p}.negative"), negative, ctx, ts);
                        b.line(
                            3,
                            format!("{tp}; {tn}; so the line holds no nonzero nef class"),
                        );
                    }
                    Discharge::Unresolved { reason } => {
                        let k = b.put(format!("{p}.discharge"), "unresolved");
                        let why = b.put(format!("{p}.reason"), reason.clone());
                        b.line(3, format!("{k}: {why}"));
                    }
                }
            }
        }
    }

    let certs = r.certificates();
    let n = b.put("criterion.certificates.count", certs.len().to_string());
    let ok = certs.iter().all(|c| c.revalidate(ctx, ts).is_ok());
    let ok = b.put("criterion.certificates.revalidated", ok.to_string());
    b.line(
        1,
        format!("{n} certificates, all recomputed from raw data: {ok}"),
    );

    let h = &r.hypotheses;
    let opt_bool = |v: Option<bool>| v.map_or("undeclared".to_string(), |x| x.to_string());
    let opt_num = |v: Option<u32>| v.map_or("undeclared".to_string(), |x| x.to_string());
    let cy = b.put(
        "criterion.hypotheses.minimal_calabi_yau",
        opt_bool(h.minimal_calabi_yau),
    );
    let dim = b.put("criterion.hypotheses.dimension", opt_num(h.dimension));
    let pic = b.put(
        "criterion.hypotheses.picard_number",
        opt_num(h.picard_number),
    );
    let ab = b.put(
        "criterion.hypotheses.m_abundant",
        match h.m_abundant {
            Some(x) => x.to_string(),
            None if h.m_abundance_automatic() => "automatic".to_string(),
            None => "undeclared".to_string(),
        },
    );
    b.line(
        1,
        format!("declared hypotheses (not verified): minimal Calabi-Yau {cy}, dimension {dim}, Picard number {pic}, m-abundant {ab}"),
    );

    let v = b.put("criterion.verdict", r.verdict.label());
    b.line(1, format!("verdict: {v}"));
    let reasons: &[String] = match &r.verdict {
        Verdict::Primitive => &[],
        Verdict::ConditionsVerified { gaps } => gaps,
        Verdict::Inconclusive { reasons } => reasons,
    };
    for (n, why) in reasons.iter().enumerate() {
        let w = b.put(format!("criterion.verdict.reason.{}", n + 1), why.clone());
        b.line(2, w);
    }
    b.blank();
}

fn references(b: &mut Builder, a: &Analysis) {
    b.put("reference.count", a.references.len().to_string());
    if a.references.is_empty() {
        return;
    }
    b.line(0, "Reference values");
    for (n, r) in a.references.iter().enumerate() {
        let p = format!("reference.{}", n + 1);
        let k = b.put(format!("{p}.kind"), r.kind);
        let s = b.put(format!("{p}.subject"), r.subject.clone());
        let st = b.put(
            format!("{p}.status"),
            if r.matches { "match" } else { "mismatch" },
        );
        b.put(format!("{p}.computed"), r.computed.clone());
        b.put(format!("{p}.reference"), r.reference.clone());
        b.line(1, format!("{k} {s}: {st}"));
    }
    b.blank();

    let mismatches: Vec<_> = a
        .references
        .iter()
        .enumerate()
        .filter(|(_, r)| !r.matches)
        .collect();
    b.put("discrepancy.count", mismatches.len().to_string());
    if mismatches.is_empty() {
        return;
    }
    b.line(0, "Discrepancy ledger");
    for (n, (ix, r)) in mismatches.into_iter().enumerate() {
        let p = format!("discrepancy.{}", n + 1);
        b.put(format!("{p}.reference_index"), (ix + 1).to_string());
        let k = b.put(format!("{p}.kind"), r.kind);
        let s = b.put(format!("{p}.subject"), r.subject.clone());
        let c = b.put(format!("{p}.computed"), r.computed.clone());
        let rf = b.put(format!("{p}.reference"), r.reference.clone());
        b.line(1, format!("{k} {s}: computed {c}, reference {rf}"));
        for (key, value) in &r.notes {
            let v = b.put(format!("{p}.{key}"), value.clone());
            b.line(2, format!("{key}: {v}"));
        }
    }
    b.blank();
}

pub fn render(a: &Analysis) -> Report {
    let mut b = Builder::default();
    header(&mut b, a);
    lattice(&mut b, a);
    maps(&mut b, a);
    match &a.composite {
        Some(c) => {
            composite(&mut b, a, c);
            criterion(&mut b, a, c);
        }
        None => {
            b.put("composite.order", "[]");
            b.line(0, "No composition configured; lattice data only");
            b.blank();
        }
    }
    references(&mut b, a);
    Report {
        entries: b.entries,
        human: b.human,
    }
}

/// `a^2 - d·b^2` for the dynamical degree, when it is a surd.
pub fn surd_norm(a: &Analysis) -> Option<cydyn_core::linalg::Rat> {
    match a
        .composite
        .as_ref()?
        .criterion
        .spectral_radius
        .exact
        .as_ref()?
    {
        ExactValue::Surd(s) => Some(s.norm()),
        ExactValue::Rational(_) => None,
    }
}
