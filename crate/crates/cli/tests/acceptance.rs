//! Acceptance suite. Runs without the libtest harness so that every
//! criterion prints exactly one PASS/FAIL line; exits nonzero on any FAIL.

use std::collections::{BTreeMap, HashMap};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::Command;
use std::time::{Duration, Instant};

use cydyn_cli::analysis::run_analysis;
use cydyn_cli::config::parse_config;
use cydyn_cli::EXAMPLE_CONFIG;
use cydyn_core::chow::{triple_form, Ambient, CompleteIntersection};
use cydyn_core::lattice::{exclude_from_eff, DivisorClass, LatticeContext, Transport};
use cydyn_core::linalg::{rat, Mat, Poly, Rat};
use cydyn_core::roots::SturmSeq;
use cydyn_core::translation::{build_matrix, TranslationSpec};
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;
use proptest::test_runner::{Config as PtConfig, TestRunner};

type Machine = BTreeMap<String, String>;
type Criterion = (&'static str, fn(&Run, &mut Checks));

#[derive(Default)]
struct Checks {
    failures: Vec<String>,
}

impl Checks {
    fn check(&mut self, ok: bool, what: impl Into<String>) {
        if !ok {
            self.failures.push(what.into());
        }
    }

    fn eq(&mut self, m: &Machine, key: &str, expected: &str) {
        let got = m.get(key).map(String::as_str);
        self.check(
            got == Some(expected),
            format!("{key}: expected {expected:?}, got {got:?}"),
        );
    }
}

struct Run {
    machine: Machine,
    elapsed: Duration,
}

fn run_binary() -> Run {
    let start = Instant::now();
    let out = Command::new(env!("CARGO_BIN_EXE_cydyn"))
        .args(["reproduce-paper", "--format", "machine"])
        .output()
        .expect("spawn cydyn");
    let elapsed = start.elapsed();
    assert!(
        out.status.success(),
        "reproduce-paper failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    let text = String::from_utf8(out.stdout).expect("utf8");
    let machine = text
        .lines()
        .filter_map(|l| l.split_once(" = "))
        .map(|(k, v)| (k.to_string(), v.to_string()))
        .collect();
    Run { machine, elapsed }
}

fn ctx() -> LatticeContext {
    let ci =
        CompleteIntersection::new(Ambient::new(vec![2, 2, 2]).unwrap(), vec![vec![1, 1, 1]; 3])
            .unwrap();
    LatticeContext::new(triple_form(&ci).unwrap())
        .with_fiber_curves(&[0, 1, 2])
        .unwrap()
}

fn m123() -> Mat {
    Mat::from_ints(&[vec![1, 12, 6], vec![0, 4, 3], vec![0, -3, -2]])
}
fn m231() -> Mat {
    Mat::from_ints(&[vec![-2, 0, -3], vec![6, 1, 12], vec![3, 0, 4]])
}
fn m312() -> Mat {
    Mat::from_ints(&[vec![4, 3, 0], vec![-3, -2, 0], vec![12, 6, 1]])
}

fn parse_rat(s: &str) -> Rat {
    match s.split_once('/') {
        Some((n, d)) => Rat::new(n.trim().parse().unwrap(), d.trim().parse().unwrap()),
        None => Rat::from_integer(s.trim().parse().unwrap()),
    }
}

fn parse_enclosure(s: &str) -> (Rat, Rat) {
    let inner = s.trim().trim_start_matches('[').trim_end_matches(']');
    let (lo, hi) = inner.split_once(',').expect("enclosure");
    (parse_rat(lo), parse_rat(hi))
}

fn c1_matrix_synthesis(run: &Run, c: &mut Checks) {
    let m = &run.machine;
    c.eq(m, "map.phi123.matrix", "[[1,12,6],[0,4,3],[0,-3,-2]]");
    c.eq(m, "map.phi231.matrix", "[[-2,0,-3],[6,1,12],[3,0,4]]");
    c.eq(m, "map.phi312.matrix", "[[4,3,0],[-3,-2,0],[12,6,1]]");
    c.eq(m, "map.phi123.conjugation_relation", "m = 2n");
    c.eq(
        m,
        "map.phi123.surface_equation",
        "(m·Λ1 + 4·Λ2 - 3·Λ3)^2 = Λ2^2 = 3",
    );
    c.eq(m, "map.phi123.surface_candidates", "[12]");
    c.eq(m, "map.phi123.m", "12");
    c.eq(m, "map.phi123.n", "6");

    let start = Instant::now();
    let ctx = ctx();
    let specs = [(0, 1, 2), (1, 2, 0), (2, 0, 1)];
    let built: Vec<Mat> = specs
        .iter()
        .map(|&(f, p, q)| {
            build_matrix(&TranslationSpec::new(f, p, q, 3).unwrap(), &ctx)
                .unwrap()
                .matrix
        })
        .collect();
    let elapsed = start.elapsed();
    for (got, want) in built.iter().zip([m123(), m231(), m312()]) {
        c.check(
            *got == want,
            format!("in-process synthesis gave {got}, expected {want}"),
        );
    }
    c.check(
        elapsed < Duration::from_secs(1),
        format!("synthesis took {elapsed:?}"),
    );
}

fn c2_composite_pullback(run: &Run, c: &mut Checks) {
    c.eq(
        &run.machine,
        "composite.pullback",
        "[[-44,-330,-615],[60,451,840],[165,1230,2296]]",
    );
    let product = m123().mul(&m231()).unwrap().mul(&m312()).unwrap();
    let want = Mat::from_ints(&[
        vec![-44, -330, -615],
        vec![60, 451, 840],
        vec![165, 1230, 2296],
    ]);
    c.check(
        product.inverse().unwrap() == want,
        "inverse of the product differs",
    );
    c.check(
        product.mul(&want).unwrap() == Mat::identity(3),
        "product times pullback is not the identity",
    );
}

fn c3_char_poly(run: &Run, c: &mut Checks) {
    let m = &run.machine;
    c.eq(m, "composite.char_poly", "1 - 2703t + 2703t^2 - t^3");
    c.eq(m, "composite.char_poly.coefficients", "[1,-2703,2703,-1]");
    c.eq(m, "composite.char_poly.palindromic_up_to_sign", "true");
    let pull = Mat::from_ints(&[
        vec![-44, -330, -615],
        vec![60, 451, 840],
        vec![165, 1230, 2296],
    ]);
    let chi = pull.char_poly().unwrap();
    c.check(
        chi.coeffs() == [rat(1), rat(-2703), rat(2703), rat(-1)],
        format!("char_poly {chi}"),
    );
    let k = chi.coeffs();
    let n = k.len() - 1;
    let pal = (0..=n).all(|i| k[i] == k[n - i]) || (0..=n).all(|i| k[i] == -k[n - i].clone());
    c.check(pal, "coefficient vector is not palindromic up to sign");
}

fn c4_dynamical_degree(run: &Run, c: &mut Checks) {
    let m = &run.machine;
    let factors: Vec<&str> = (1..=2)
        .filter_map(|i| m.get(&format!("composite.factor.{i}")).map(String::as_str))
        .collect();
    c.eq(m, "composite.factor.count", "2");
    c.check(
        factors.contains(&"-1 + t"),
        format!("factors {factors:?} lack t - 1"),
    );
    c.check(
        factors.contains(&"1 - 2702t + t^2"),
        format!("factors {factors:?} lack t^2 - 2702t + 1"),
    );
    c.eq(m, "dynamical_degree.exact", "(1351, 780, 3)");
    c.eq(m, "dynamical_degree.exact.norm", "1");
    let (a, b) = (BigInt::from(1351), BigInt::from(780));
    c.check(
        &a * &a - BigInt::from(3) * &b * &b == BigInt::one(),
        "1351^2 - 3*780^2 != 1",
    );

    let (lo, hi) = parse_enclosure(
        m.get("dynamical_degree.enclosure")
            .map_or("[0, 0]", String::as_str),
    );
    let tol = Rat::new(BigInt::one(), BigInt::from(10).pow(9));
    c.check(
        &hi - &lo <= tol,
        format!("enclosure width {} exceeds 1e-9", &hi - &lo),
    );
    c.check(lo > Rat::one(), "lower bound does not exceed 1");
    c.eq(m, "dynamical_degree.exceeds_one", "true");
    let window_lo = Rat::new(BigInt::from(27019999996i64), BigInt::from(10).pow(7));
    let window_hi = Rat::new(BigInt::from(27020000001i64), BigInt::from(10).pow(7));
    c.check(
        lo >= window_lo && hi <= window_hi,
        format!(
            "enclosure [{:.10}, {:.10}] not inside [2701.9999996, 2702.0000001]",
            to_f64(&lo),
            to_f64(&hi)
        ),
    );
}

fn to_f64(r: &Rat) -> f64 {
    r.numer().to_string().parse::<f64>().unwrap() / r.denom().to_string().parse::<f64>().unwrap()
}

fn c5_primitivity(run: &Run, c: &mut Checks) {
    let m = &run.machine;
    c.eq(m, "criterion.verdict", "primitive");
    c.eq(m, "criterion.oguiso_applicable", "false");
    c.eq(m, "criterion.irreducibility.witness", "-1 + t");
    c.eq(m, "criterion.condition1.status", "certified");
    c.eq(m, "criterion.condition1.generator", "[1,-2,1]");

    let certs = |sign: &str| -> Vec<String> {
        (1..)
            .map_while(|i| {
                m.get(&format!("criterion.condition1.{sign}.{i}.kind"))
                    .map(|_| format!("criterion.condition1.{sign}.{i}"))
            })
            .collect()
    };
    let neg_cover = certs("negative")
        .iter()
        .any(|p| m.get(&format!("{p}.kind")).map(String::as_str) == Some("covering_curve"));
    c.check(neg_cover, "no covering-curve certificate for -D_fixed");
    let pos_transport = certs("positive").iter().any(|p| {
        m.get(&format!("{p}.kind")).map(String::as_str) == Some("orbit_transport")
            && m.get(&format!("{p}.path")).map(String::as_str) == Some("[phi123]")
            && m.get(&format!("{p}.depth")).map(String::as_str) == Some("1")
    });
    c.check(
        pos_transport,
        "no depth-1 transport certificate via phi123 for +D_fixed",
    );

    c.eq(m, "criterion.condition2.status", "discharged");
    let subs: Vec<String> = (1..)
        .map_while(|i| {
            let p = format!("criterion.condition2.subspace.{i}");
            m.contains_key(&format!("{p}.dim")).then_some(p)
        })
        .collect();
    let by_dim = |d: &str| {
        subs.iter()
            .find(|p| m.get(&format!("{p}.dim")).map(String::as_str) == Some(d))
    };
    match by_dim("1") {
        Some(p) => c.eq(m, &format!("{p}.discharge"), "face_exclusion"),
        None => c.check(false, "no 1-dimensional stable subspace"),
    }
    match by_dim("2") {
        Some(p) => {
            c.eq(m, &format!("{p}.discharge"), "dual_face_exclusion");
            c.eq(m, &format!("{p}.annihilator"), "[1,-2,1]");
            for sign in ["positive", "negative"] {
                c.eq(m, &format!("{p}.{sign}.kind"), "nef_curve_exclusion");
                let w = m.get(&format!("{p}.{sign}.witness")).map(String::as_str);
                c.check(
                    matches!(w, Some("1" | "2" | "3")),
                    format!("{sign} witness {w:?} not among L1, L2, L3"),
                );
                let pairing = m
                    .get(&format!("{p}.{sign}.pairing"))
                    .map_or(rat(0), |s| parse_rat(s));
                c.check(
                    pairing.is_negative(),
                    format!("{sign} witness pairing {pairing} is not negative"),
                );
            }
        }
        None => c.check(false, "no 2-dimensional stable subspace"),
    }
}

/// Degree of `H^e` on the complete intersection by expanding the full
/// product of linear forms in `Z[h1, h2, h3]` and reading off the top
/// monomial `h1^2 h2^2 h3^2`.
fn brute_force_degree(extra: [usize; 3]) -> i64 {
    let mut poly: HashMap<[u32; 3], i64> = HashMap::from([([0, 0, 0], 1)]);
    let mut factors: Vec<[i64; 3]> = vec![[1, 1, 1]; 3];
    for (i, &e) in extra.iter().enumerate() {
        for _ in 0..e {
            let mut f = [0; 3];
            f[i] = 1;
            factors.push(f);
        }
    }
    for f in factors {
        let mut next = HashMap::new();
        for (mono, coeff) in &poly {
            for (i, &w) in f.iter().enumerate() {
                if w != 0 {
                    let mut m2 = *mono;
                    m2[i] += 1;
                    *next.entry(m2).or_insert(0) += coeff * w;
                }
            }
        }
        poly = next;
    }
    poly.get(&[2, 2, 2]).copied().unwrap_or(0)
}

fn c6_triple_form(run: &Run, c: &mut Checks) {
    let ctx = ctx();
    let form = ctx.form();
    for i in 0..3 {
        for j in 0..3 {
            for l in 0..3 {
                let mut e = [0; 3];
                e[i] += 1;
                e[j] += 1;
                e[l] += 1;
                let brute = BigInt::from(brute_force_degree(e));
                let got = form.get(i, j, l);
                c.check(
                    *got == brute,
                    format!(
                        "T({},{},{}) = {got}, brute force {brute}",
                        i + 1,
                        j + 1,
                        l + 1
                    ),
                );
            }
        }
    }
    for i in 0..3 {
        c.check(
            *form.get(i, i, i) == BigInt::zero(),
            format!("T({0},{0},{0}) != 0", i + 1),
        );
        for j in (0..3).filter(|&j| j != i) {
            c.check(
                *form.get(i, i, j) == BigInt::from(3),
                format!("T({0},{0},{1}) != 3", i + 1, j + 1),
            );
        }
    }
    c.check(*form.get(0, 1, 2) == BigInt::from(6), "T(1,2,3) != 6");
    c.eq(&run.machine, "lattice.triple.1.2.3", "6");
    c.eq(&run.machine, "lattice.triple.1.1.2", "3");
    c.eq(&run.machine, "lattice.triple.1.1.1", "0");
}

fn faddeev_leverrier(a: &Mat) -> Poly {
    let n = a.rows();
    let mut c = vec![Rat::zero(); n + 1];
    c[n] = Rat::one();
    let mut mk = Mat::zeros(n, n);
    for k in 1..=n {
        mk = a
            .mul(&mk)
            .unwrap()
            .add(&Mat::identity(n).scale(&c[n - k + 1]))
            .unwrap();
        c[n - k] = -a.mul(&mk).unwrap().trace().unwrap() / rat(k as i64);
    }
    let sign = if n.is_multiple_of(2) { rat(1) } else { rat(-1) };
    Poly::new(c).scale(&sign)
}

fn cubic_disc(c: &[i64; 4]) -> BigInt {
    let [d, cc, b, a] = c.map(BigInt::from);
    BigInt::from(18) * &a * &b * &cc * &d - BigInt::from(4) * b.pow(3) * &d + b.pow(2) * cc.pow(2)
        - BigInt::from(4) * &a * cc.pow(3)
        - BigInt::from(27) * a.pow(2) * d.pow(2)
}

fn runner(cases: u32) -> TestRunner {
    TestRunner::new(PtConfig {
        cases,
        failure_persistence: None,
        ..PtConfig::default()
    })
}

fn c7_properties(run: &Run, c: &mut Checks) {
    // unimodular round trip
    let ops = prop::collection::vec((0usize..4, 0usize..4, -3i64..=3, any::<bool>()), 0..12);
    let r = runner(200).run(&(1usize..=4, ops), |(n, ops)| {
        let mut m = Mat::identity(n);
        for (i, j, k, swap) in ops {
            let (i, j) = (i % n, j % n);
            let mut e = Mat::identity(n);
            if swap {
                e.set(i, i, rat(0));
                e.set(j, j, rat(0));
                e.set(i, j, rat(1));
                e.set(j, i, rat(1));
            } else if i != j {
                e.set(i, j, rat(k));
            }
            m = m.mul(&e).unwrap();
        }
        let inv = m.inverse().unwrap();
        prop_assert!(inv.is_integral());
        prop_assert_eq!(m.mul(&inv).unwrap(), Mat::identity(n));
        prop_assert_eq!(inv.mul(&m).unwrap(), Mat::identity(n));
        Ok(())
    });
    c.check(r.is_ok(), format!("unimodular inverse round trip: {r:?}"));

    // char_poly against Faddeev-LeVerrier
    let entry = (-20i64..=20, 1i64..=6);
    let r = runner(200).run(&prop::collection::vec(entry, 9), |es| {
        let data: Vec<Rat> = es
            .into_iter()
            .map(|(n, d)| Rat::new(n.into(), d.into()))
            .collect();
        let a = Mat::new(3, 3, data).unwrap();
        prop_assert_eq!(a.char_poly().unwrap(), faddeev_leverrier(&a));
        Ok(())
    });
    c.check(r.is_ok(), format!("char_poly agreement: {r:?}"));

    // Sturm counts on squarefree cubics
    let r = runner(200).run(
        &(prop::array::uniform3(-30i64..=30), 1i64..=5),
        |([d, cc, b], a)| {
            let coeffs = [d, cc, b, a];
            let disc = cubic_disc(&coeffs);
            prop_assume!(!disc.is_zero());
            let p = Poly::new(coeffs.iter().map(|&x| rat(x)).collect());
            let expected = if disc.is_positive() { 3 } else { 1 };
            prop_assert_eq!(SturmSeq::new(&p).unwrap().count_real(), expected);
            Ok(())
        },
    );
    c.check(r.is_ok(), format!("Sturm counts: {r:?}"));

    // every emitted certificate re-validates
    let cfg = parse_config(EXAMPLE_CONFIG).unwrap();
    let analysis = run_analysis(&cfg).unwrap();
    let comp = analysis.composite.as_ref().unwrap();
    let certs = comp.criterion.certificates();
    c.check(!certs.is_empty(), "no certificates emitted");
    for cert in &certs {
        let ok = cert.revalidate(&analysis.ctx, &comp.transports);
        c.check(
            ok.is_ok(),
            format!("certificate {cert} failed re-validation: {ok:?}"),
        );
    }
    c.eq(&run.machine, "criterion.certificates.revalidated", "true");
    c.eq(
        &run.machine,
        "criterion.certificates.count",
        &certs.len().to_string(),
    );

    // exclusion soundness
    let ctx = ctx();
    let transports: Vec<Transport> = [("phi123", m123()), ("phi231", m231()), ("phi312", m312())]
        .into_iter()
        .map(|(l, m)| Transport::new(l, m).unwrap())
        .collect();
    let r = runner(500).run(
        &(prop::collection::vec((0i64..=12, 1i64..=4), 3), 0usize..=3),
        |(ws, depth)| {
            let mut coords = vec![Rat::zero(); 3];
            for (w, (num, den)) in ctx.effective_witnesses().iter().zip(&ws) {
                for (acc, x) in coords.iter_mut().zip(w.coords()) {
                    *acc += Rat::new((*num).into(), (*den).into()) * x;
                }
            }
            let d = DivisorClass::new(coords);
            prop_assert!(exclude_from_eff(&ctx, &d, &transports, depth)
                .unwrap()
                .is_none());
            Ok(())
        },
    );
    c.check(r.is_ok(), format!("exclusion soundness: {r:?}"));
}

fn c8_discrepancy(run: &Run, c: &mut Checks) {
    let m = &run.machine;
    let entries: Vec<String> = (1..)
        .map_while(|i| {
            let p = format!("discrepancy.{i}");
            m.contains_key(&format!("{p}.kind")).then_some(p)
        })
        .collect();
    let hit = entries.iter().find(|p| {
        m.get(&format!("{p}.kind")).map(String::as_str) == Some("transport_image")
            && m.get(&format!("{p}.subject"))
                .is_some_and(|s| s.starts_with("phi123"))
    });
    match hit {
        Some(p) => {
            c.eq(m, &format!("{p}.computed"), "[-17,-5,4]");
            c.eq(m, &format!("{p}.reference"), "[-17,-1,4]");
            c.eq(m, &format!("{p}.two_negative_property.computed"), "true");
            c.eq(m, &format!("{p}.two_negative_property.reference"), "true");
        }
        None => c.check(false, "no discrepancy entry for the phi123 transport image"),
    }
    let image = m123().mul_vec(&[rat(1), rat(-2), rat(1)]).unwrap();
    c.check(
        image == [rat(-17), rat(-5), rat(4)],
        "phi123 pushforward of [1,-2,1] is not [-17,-5,4]",
    );
}

fn main() {
    let run = run_binary();
    let criteria: [Criterion; 8] = [
        ("matrix synthesis", c1_matrix_synthesis),
        ("composite pullback", c2_composite_pullback),
        ("characteristic polynomial", c3_char_poly),
        ("eigenvalues and dynamical degree", c4_dynamical_degree),
        ("primitivity verdict", c5_primitivity),
        ("intersection-theory oracle", c6_triple_form),
        ("property suites", c7_properties),
        ("discrepancy ledger", c8_discrepancy),
    ];
    let mut failed = 0;
    for (n, (name, f)) in criteria.into_iter().enumerate() {
        let mut checks = Checks::default();
        if let Err(e) = catch_unwind(AssertUnwindSafe(|| f(&run, &mut checks))) {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            checks.failures.push(format!("panicked: {msg}"));
        }
        if checks.failures.is_empty() {
            println!("criterion {}: PASS {name}", n + 1);
        } else {
            failed += 1;
            println!(
                "criterion {}: FAIL {name}: {}",
                n + 1,
                checks.failures.join("; ")
            );
        }
    }
    let ok = run.elapsed < Duration::from_secs(5);
    println!(
        "runtime: {} reproduce-paper took {:?} (limit 5s)",
        if ok { "PASS" } else { "FAIL" },
        run.elapsed
    );
    if !ok {
        failed += 1;
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
