//! One PASS/FAIL line per acceptance criterion. Exits nonzero when any
//! criterion fails.

mod common;

use std::sync::Arc;
use std::time::{Duration, Instant};

use common::{element, field, minor_valuations, quadratic_disc, reduced_forms, squarefree, QUADRATICS};
use logcl::capitulation::{ext_group_from_fixture, extension_from_fixture, Verdict};
use logcl::fixtures::{default_dir, load_extension, load_extensions, ExtensionFixture};
use logcl::logclass::{log_class_group, FieldElementWord, LogClassGroup, LogContext};
use logcl::numfield::{AlgebraicNum, NumberField};
use logcl::padic::PadicScalar;
use logcl::units_classes::{class_group, SearchCaps};
use logcl::zlmod::{smith_normal_form, ModuleDecomposition, ZlMatrix};
use num_bigint::{BigInt, BigUint};
use num_traits::ToPrimitive;
use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

const N: u32 = 64;
const SLACK: u32 = 4;
const SEED: u64 = 0x10c_c1a5;

type Outcome = Result<String, String>;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn random_element(rng: &mut ChaCha8Rng, n: usize) -> AlgebraicNum {
    loop {
        let c: Vec<i64> = (0..n).map(|_| rng.random_range(-50..=50)).collect();
        if c.iter().any(|&x| x != 0) {
            return element(&c);
        }
    }
}

fn product_formula(prec: u32) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut count = 0;
    for poly in QUADRATICS {
        for ell in [2u64, 3, 5] {
            let ctx = LogContext::new(field(poly), ell, prec).map_err(err)?;
            for _ in 0..7 {
                let x = random_element(&mut rng, 2);
                let d = ctx.element_divisor(&x).map_err(err)?;
                ensure(ctx.degree_vanishes(&d, SLACK).map_err(err)?, || {
                    format!("{} l={}: deg div({:?}) = {}", poly, ell, x, ctx.degree(&d).unwrap())
                })?;
                count += 1;
            }
        }
    }
    Ok(format!("{} elements, 10 fields, l in {{2,3,5}}, N = {}", count, prec))
}

fn away_from_ell() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 1);
    let mut triples = 0;
    let mut i = 0;
    while triples < 100 {
        let poly = QUADRATICS[i % QUADRATICS.len()];
        let ell = [2u64, 3, 5][i % 3];
        i += 1;
        let ctx = LogContext::new(field(poly), ell, N).map_err(err)?;
        let k = ctx.field().clone();
        let x = random_element(&mut rng, 2);
        let mut primes: Vec<_> = k.element_divisor(&x).map_err(err)?.into_iter().map(|(p, _)| p).collect();
        for q in [7u64, 11, 13] {
            primes.extend(k.primes_above(q).map_err(err)?.iter().cloned());
        }
        for pr in primes.into_iter().filter(|p| p.p() != ell) {
            let want = pr.valuation(&k, &x).map_err(err)?;
            let got = ctx.element_valuation(&x, &ctx.place(&pr).map_err(err)?).map_err(err)?;
            ensure(got.eq_at_prec(&PadicScalar::from_i64(ell, want, N + 8)), || {
                format!("{} l={} at {}: {} vs {}", poly, ell, pr, got, want)
            })?;
            triples += 1;
        }
    }
    Ok(format!("{} triples", triples))
}

fn log_unit_hallmark() -> Outcome {
    let q = field("x");
    for ell in [2u64, 3, 5] {
        let ctx = LogContext::new(q.clone(), ell, N).map_err(err)?;
        for p in [2i64, 3, 5, 7, 11, 13] {
            let w = FieldElementWord::from_element(ell, N, &q.from_i64(p)).map_err(err)?;
            let got = ctx.is_log_unit(&w).map_err(err)?;
            ensure(got == (p as u64 == ell), || format!("l={}: is_log_unit({}) = {}", ell, p, got))?;
        }
    }
    Ok("l in {2,3,5} against primes up to 13".into())
}

struct SnfCase {
    ell: u64,
    prec: u32,
    ints: Vec<Vec<BigInt>>,
}

fn snf_cases() -> Vec<SnfCase> {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 2);
    (0..500)
        .map(|t| {
            let ell = [2u64, 3][t % 2];
            let prec = [16u32, 64][(t / 2) % 2];
            let (m, n) = (rng.random_range(1..=6usize), rng.random_range(1..=6usize));
            let ints = (0..m)
                .map(|_| {
                    (0..n)
                        .map(|_| {
                            let x: i64 = rng.random_range(-40..=40);
                            BigInt::from(x) * BigInt::from(ell).pow(rng.random_range(0..5u32))
                        })
                        .collect()
                })
                .collect();
            SnfCase { ell, prec, ints }
        })
        .collect()
}

fn decompose(c: &SnfCase, prec: u32) -> (ZlMatrix, ModuleDecomposition) {
    let (m, n) = (c.ints.len(), c.ints[0].len());
    let a = ZlMatrix::from_fn(c.ell, prec, m, n, |i, j| c.ints[i][j].clone());
    let dec = smith_normal_form(&a);
    (a, dec)
}

fn check_snf(c: &SnfCase) -> Result<(), String> {
    let (a, dec) = decompose(c, c.prec);
    let (m, n) = (a.rows(), a.cols());
    ensure(dec.u().mul(&a).mul(dec.v()) == dec.d(), || format!("U A V != D for {:?}", c.ints))?;
    ensure(dec.u().mul(dec.u_inv()) == ZlMatrix::identity(c.ell, c.prec, m), || "U U^-1 != 1".into())?;
    ensure(dec.v().mul(dec.v_inv()) == ZlMatrix::identity(c.ell, c.prec, n), || "V V^-1 != 1".into())?;
    ensure(dec.u().det().is_unit() && dec.v().det().is_unit(), || "transform not unimodular".into())?;
    let d = dec.diagonal();
    let chain = d.windows(2).all(|w| match (w[0], w[1]) {
        (Some(x), Some(y)) => x <= y,
        (None, Some(_)) => false,
        _ => true,
    });
    ensure(chain, || format!("divisibility chain {:?}", d))?;
    let mut acc = 0;
    let cumulative: Vec<u32> = d
        .iter()
        .map(|a| {
            acc = (acc + a.unwrap_or(c.prec)).min(c.prec);
            acc
        })
        .collect();
    let minors = minor_valuations(c.ell, c.prec, &c.ints);
    ensure(cumulative == minors, || format!("{:?}: diagonal {:?}, minors {:?}", c.ints, d, minors))
}

fn snf_contract() -> Outcome {
    let cases = snf_cases();
    cases.par_iter().try_for_each(check_snf)?;
    Ok(format!("{} matrices up to 6x6, l in {{2,3}}, N in {{16,64}}", cases.len()))
}

fn class_group_oracle() -> Outcome {
    let ds: Vec<i64> = (-99..-2).filter(|&d| squarefree(d)).collect();
    let caps = SearchCaps::default();
    ds.par_iter().try_for_each(|&d| {
        let k = field(&format!("x^2+{}", -d));
        let cg = class_group(&k, &caps).map_err(err)?;
        let want = reduced_forms(quadratic_disc(d));
        let got = cg.class_number.to_u64().unwrap_or(0);
        ensure(got == want && cg.certified, || format!("d = {}: h = {}, forms give {}", d, got, want))
    })?;
    Ok(format!("{} fields -100 < d < -2 against reduced forms", ds.len()))
}

fn never_finite_cases() -> Vec<(&'static str, u64)> {
    let mut v = vec![("x", 2), ("x", 3), ("x", 5)];
    for poly in ["x^2+23", "x^2+31", "x^2-10", "x^2+149", "x^2+146", "x^2+35", "x^2-7", "x^2+5", "x^2-3"] {
        for ell in [2u64, 3, 5] {
            v.push((poly, ell));
        }
    }
    v
}

fn group(poly: &str, ell: u64, prec: u32) -> Result<LogClassGroup, String> {
    log_class_group(field(poly), ell, prec, &SearchCaps::default()).map_err(|e| format!("{} l={}: {}", poly, ell, e))
}

fn never_finite() -> Outcome {
    let cases = never_finite_cases();
    cases.par_iter().try_for_each(|&(poly, ell)| -> Result<(), String> {
        let g = group(poly, ell, N)?;
        ensure(g.full_invariants().free_at_precision >= 1, || format!("{} l={}: C_K finite", poly, ell))?;
        if poly == "x" {
            let z = g.degree_zero_invariants();
            ensure(z.torsion.is_empty() && z.free_at_precision == 0, || format!("Q l={}: {:?}", ell, z))?;
        }
        Ok(())
    })?;
    let fixtures = all_fixtures()?;
    fixtures.par_iter().filter(|f| f.ext.s_units.is_some()).try_for_each(|fx| -> Result<(), String> {
        let e = extension_from_fixture(fx, N, &SearchCaps::default()).map_err(err)?;
        let (lg, _) = ext_group_from_fixture(&e, fx).map_err(err)?;
        ensure(lg.full_invariants().free_at_precision >= 1, || format!("{}: C_L finite", fx.name))
    })?;
    Ok(format!("{} groups plus extension fields of the fixtures, rationals trivial in degree zero", cases.len()))
}

fn all_fixtures() -> Result<Vec<ExtensionFixture>, String> {
    load_extensions(&default_dir()).map_err(err)
}

fn functoriality() -> Outcome {
    let caps = SearchCaps::default();
    let fixtures = all_fixtures()?;
    for name in ["q_qi_3", "qi_zeta8_2", "qi_zeta8_3"] {
        ensure(fixtures.iter().any(|f| f.name == name), || format!("fixture {} missing", name))?;
    }
    let checked: Vec<usize> = fixtures
        .par_iter()
        .map(|fx| -> Result<usize, String> {
            let mut rng = ChaCha8Rng::seed_from_u64(SEED + 3);
            let e = extension_from_fixture(fx, N, &caps).map_err(err)?;
            let k: Arc<NumberField> = e.base().field().clone();
            let deg = PadicScalar::from_i64(fx.ell, e.relative_degree() as i64, N + 8);
            let mut primes = Vec::new();
            for _ in 0..50 {
                let x = random_element(&mut rng, k.degree());
                let dk = e.base().element_divisor(&x).map_err(err)?;
                let dl = e.ext().element_divisor(&e.embed(&x)).map_err(err)?;
                let ok = e.extend_divisor(&dk).map_err(err)?.agrees(&dl, N - SLACK).map_err(err)?;
                ensure(ok, || format!("{}: j(div x) != div(j x) for {:?}", fx.name, x))?;
                primes.extend(dk.support().iter().map(|p| p.p()));
            }
            primes.sort_unstable();
            primes.dedup();
            for q in primes {
                for (p, s) in e.degree_sums(q).map_err(err)? {
                    ensure(s.agrees(&deg, SLACK), || format!("{}: sum e f at {} is {}", fx.name, p, s))?;
                }
            }
            Ok(50)
        })
        .collect::<Result<_, _>>()?;
    Ok(format!("{} fixtures x 50 elements", checked.len()))
}

struct Analysis {
    kernel_order: Option<BigUint>,
    verdicts: Vec<Verdict>,
    base_torsion: Vec<BigUint>,
    certified: bool,
    unramified: bool,
}

fn analyse(name: &str) -> Result<Analysis, String> {
    let caps = SearchCaps::default();
    let fx = load_extension(&default_dir().join(format!("ext_{}.json", name))).map_err(err)?;
    let e = extension_from_fixture(&fx, N, &caps).map_err(err)?;
    let kg = log_class_group(e.base().field().clone(), fx.ell, N, &caps).map_err(err)?;
    let (lg, checks) = ext_group_from_fixture(&e, &fx).map_err(err)?;
    let report = e.capitulation_kernel(&kg, &lg).map_err(err)?;
    Ok(Analysis {
        kernel_order: report.kernel.order.clone(),
        verdicts: report.classes.iter().map(|c| c.verdict).collect(),
        base_torsion: kg.degree_zero_invariants().torsion,
        certified: report.certified && checks.all() && kg.certified() && lg.certified(),
        unramified: report.log_unramified.global,
    })
}

fn capitulation_desk_check() -> Outcome {
    let mut done = Vec::new();
    for name in ["m35_htilde_2", "m35_quartic_2"] {
        let a = analyse(name)?;
        ensure(a.certified, || format!("{}: not certified", name))?;
        ensure(!a.base_torsion.is_empty(), || format!("{}: base torsion trivial", name))?;
        ensure(a.unramified, || format!("{}: not logarithmically unramified", name))?;
        ensure(!a.verdicts.is_empty() && a.verdicts.iter().all(|v| *v == Verdict::Capitulates), || {
            format!("{}: verdicts {:?}", name, a.verdicts)
        })?;
        let whole: BigUint = a.base_torsion.iter().product();
        ensure(a.kernel_order.as_ref() == Some(&whole), || format!("{}: kernel {:?}", name, a.kernel_order))?;
        done.push(name);
    }
    Ok(format!("every torsion class capitulates in {}", done.join(", ")))
}

fn hilbert_failure() -> Outcome {
    let name = "m31_hilbert_3";
    let a = analyse(name)?;
    ensure(a.certified, || format!("{}: not certified", name))?;
    ensure(a.base_torsion == vec![BigUint::from(3u32)], || format!("{}: base {:?}", name, a.base_torsion))?;
    ensure(a.unramified, || format!("{}: not logarithmically unramified", name))?;
    ensure(a.verdicts == vec![Verdict::Survives], || format!("{}: verdicts {:?}", name, a.verdicts))?;
    Ok(format!("{}: the class of order 3 survives", name))
}

fn precision_stability() -> Outcome {
    let hi = N + 8;
    // Product formula at N + 8, and agreement of the divisors after truncation.
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    for poly in QUADRATICS {
        for ell in [2u64, 3, 5] {
            let lo_ctx = LogContext::new(field(poly), ell, N).map_err(err)?;
            let hi_ctx = LogContext::new(field(poly), ell, hi).map_err(err)?;
            for _ in 0..7 {
                let x = random_element(&mut rng, 2);
                let dl = lo_ctx.element_divisor(&x).map_err(err)?;
                let dh = hi_ctx.element_divisor(&x).map_err(err)?;
                ensure(hi_ctx.degree_vanishes(&dh, SLACK).map_err(err)?, || format!("{} l={}: degree", poly, ell))?;
                ensure(dh.agrees(&dl, N).map_err(err)?, || format!("{} l={}: divisor of {:?}", poly, ell, x))?;
            }
        }
    }
    // Smith forms: exponents below N are unchanged.
    snf_cases().par_iter().try_for_each(|c| {
        let (_, lo) = decompose(c, c.prec);
        let (_, high) = decompose(c, c.prec + 8);
        let cut = |d: &[Option<u32>], p: u32| -> Vec<Option<u32>> {
            d.iter().map(|a| a.filter(|&x| x < p)).collect()
        };
        ensure(cut(lo.diagonal(), c.prec) == cut(high.diagonal(), c.prec), || {
            format!("{:?}: {:?} vs {:?}", c.ints, lo.diagonal(), high.diagonal())
        })
    })?;
    // Group invariants and the exponent.
    never_finite_cases().par_iter().try_for_each(|&(poly, ell)| {
        let a = group(poly, ell, N)?;
        let b = group(poly, ell, hi)?;
        ensure(b.full_invariants().free_at_precision >= 1, || format!("{} l={}: finite at N+8", poly, ell))?;
        let (za, zb) = (a.degree_zero_invariants(), b.degree_zero_invariants());
        ensure(za == zb, || format!("{} l={}: {:?} vs {:?}", poly, ell, za, zb))?;
        ensure(a.epsilon_tilde() == b.epsilon_tilde(), || format!("{} l={}: exponent moved", poly, ell))
    })?;
    Ok(format!("product formula, Smith forms and groups recomputed at N + 8 = {}", hi))
}

fn main() {
    let criteria: Vec<(&str, Duration, fn() -> Outcome)> = vec![
        ("product formula", Duration::from_secs(60), || product_formula(N)),
        ("away from l", Duration::from_secs(5), away_from_ell),
        ("logarithmic units", Duration::from_secs(5), log_unit_hallmark),
        ("Smith form contract", Duration::from_secs(30), snf_contract),
        ("class group oracle", Duration::from_secs(120), class_group_oracle),
        ("never finite", Duration::from_secs(120), never_finite),
        ("functoriality", Duration::from_secs(60), functoriality),
        ("capitulation desk check", Duration::from_secs(600), capitulation_desk_check),
        ("surviving class in a cubic", Duration::from_secs(600), hilbert_failure),
        ("precision stability", Duration::from_secs(120), precision_stability),
    ];
    let mut failed = 0;
    for (i, (name, budget, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = std::panic::catch_unwind(f).unwrap_or_else(|_| Err("panicked".into()));
        let t = start.elapsed();
        let outcome = match outcome {
            Ok(msg) if t > *budget => Err(format!("{} (took {:.1?}, budget {:?})", msg, t, budget)),
            other => other,
        };
        match outcome {
            Ok(msg) => println!("PASS {:2} {}: {} [{:.1?}]", i + 1, name, msg, t),
            Err(msg) => {
                failed += 1;
                println!("FAIL {:2} {}: {} [{:.1?}]", i + 1, name, msg, t);
            }
        }
    }
    println!("{} of {} criteria pass", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
