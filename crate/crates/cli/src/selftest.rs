//! Seeded invariant suites. Each suite reports the number of checks run and
//! the first few failures.

use std::sync::Arc;

use logcl::capitulation::extension_from_fixture;
use logcl::fixtures::{default_dir, load_extension};
use logcl::logclass::{log_class_group, FieldElementWord, LogContext};
use logcl::numfield::{parse_field, AlgebraicNum, FieldCaps, NumberField};
use logcl::padic::PadicScalar;
use logcl::zlmod::{smith_normal_form, ZlMatrix};
use logcl::Result;
use num_bigint::BigInt;
use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::{JobSpec, Outcome};

const FIELDS: [&str; 10] =
    ["x^2+1", "x^2+2", "x^2-2", "x^2+5", "x^2-5", "x^2+23", "x^2-7", "x^2+31", "x^2-11", "x^2+14"];
const ELLS: [u64; 3] = [2, 3, 5];
const MAX_FAILURES: usize = 5;

#[derive(Default)]
struct Suite {
    checks: usize,
    failures: Vec<String>,
}

impl Suite {
    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok && self.failures.len() < MAX_FAILURES {
            self.failures.push(what());
        }
    }

    fn error(&mut self, e: logcl::Error, what: &str) {
        self.check(false, || format!("{}: {}", what, e));
    }

    fn to_value(&self, name: &str) -> Value {
        json!({
            "suite": name,
            "passed": self.failures.is_empty(),
            "checks": self.checks,
            "failures": self.failures,
        })
    }
}

fn field(s: &str) -> Result<Arc<NumberField>> {
    Ok(Arc::new(parse_field(s, &FieldCaps::default())?))
}

fn random_element(rng: &mut ChaCha8Rng, n: usize) -> AlgebraicNum {
    loop {
        let c: Vec<i64> = (0..n).map(|_| rng.random_range(-40..=40)).collect();
        if c.iter().any(|&x| x != 0) {
            return AlgebraicNum::from_ints(&c);
        }
    }
}

fn slack(prec: u32) -> u32 {
    if prec >= 32 {
        4
    } else {
        6
    }
}

fn product_formula(spec: &JobSpec, rng: &mut ChaCha8Rng) -> Suite {
    let mut s = Suite::default();
    for poly in FIELDS {
        for ell in ELLS {
            let run = |s: &mut Suite, rng: &mut ChaCha8Rng| -> Result<()> {
                let ctx = LogContext::new(field(poly)?, ell, spec.prec)?;
                for _ in 0..7 {
                    let x = random_element(rng, 2);
                    let d = ctx.element_divisor(&x)?;
                    let ok = ctx.degree_vanishes(&d, slack(spec.prec))?;
                    s.check(ok, || format!("{} l={}: deg of div({:?}) nonzero", poly, ell, x));
                }
                Ok(())
            };
            if let Err(e) = run(&mut s, rng) {
                s.error(e, &format!("{} l={}", poly, ell));
            }
        }
    }
    s
}

fn away_from_ell(spec: &JobSpec, rng: &mut ChaCha8Rng) -> Suite {
    let mut s = Suite::default();
    let mut i = 0;
    while s.checks < 100 && i < 1000 {
        let poly = FIELDS[i % FIELDS.len()];
        let ell = ELLS[i % ELLS.len()];
        i += 1;
        let run = |s: &mut Suite, rng: &mut ChaCha8Rng| -> Result<()> {
            let ctx = LogContext::new(field(poly)?, ell, spec.prec)?;
            let k = ctx.field().clone();
            let x = random_element(rng, 2);
            for (pr, v) in k.element_divisor(&x)? {
                if pr.p() == ell {
                    continue;
                }
                let place = ctx.place(&pr)?;
                let got = ctx.element_valuation(&x, &place)?;
                let want = PadicScalar::from_i64(ell, v, spec.prec + 8);
                s.check(got.eq_at_prec(&want), || format!("{} l={}: valuation at {} of {:?}", poly, ell, pr, x));
            }
            Ok(())
        };
        if let Err(e) = run(&mut s, rng) {
            s.error(e, &format!("{} l={}", poly, ell));
        }
    }
    s
}

fn snf_contract(spec: &JobSpec, rng: &mut ChaCha8Rng) -> Suite {
    let mut s = Suite::default();
    for t in 0..100 {
        let ell = [2u64, 3][t % 2];
        let (m, n) = (rng.random_range(1..=6usize), rng.random_range(1..=6usize));
        let entries: Vec<i64> = (0..m * n)
            .map(|_| {
                let x: i64 = rng.random_range(-20..=20);
                x * (ell as i64).pow(rng.random_range(0..4u32))
            })
            .collect();
        let a = ZlMatrix::from_fn(ell, spec.prec, m, n, |i, j| BigInt::from(entries[i * n + j]));
        let dec = smith_normal_form(&a);
        s.check(dec.u().mul(&a).mul(dec.v()) == dec.d(), || format!("U A V != D for {:?}", entries));
        s.check(dec.u().mul(dec.u_inv()) == ZlMatrix::identity(ell, spec.prec, m), || "U not invertible".into());
        s.check(dec.v().mul(dec.v_inv()) == ZlMatrix::identity(ell, spec.prec, n), || "V not invertible".into());
        let diag = dec.diagonal();
        let chain = diag.windows(2).all(|w| match (w[0], w[1]) {
            (Some(a), Some(b)) => a <= b,
            (None, Some(_)) => false,
            _ => true,
        });
        s.check(chain, || format!("divisibility chain fails: {:?}", diag));
    }
    s
}

fn precision_stability(spec: &JobSpec, rng: &mut ChaCha8Rng) -> Suite {
    let mut s = Suite::default();
    let hi = spec.prec + 8;
    for (poly, ell) in [("x^2+23", 3u64), ("x^2+149", 3), ("x^2+146", 2), ("x^2-10", 3), ("x^2+31", 5)] {
        let run = |s: &mut Suite, rng: &mut ChaCha8Rng| -> Result<()> {
            let k = field(poly)?;
            let a = log_class_group(k.clone(), ell, spec.prec, &spec.search)?;
            let b = log_class_group(k.clone(), ell, hi, &spec.search)?;
            let (ia, ib) = (a.degree_zero_invariants(), b.degree_zero_invariants());
            s.check(ia == ib, || format!("{} l={}: {:?} vs {:?}", poly, ell, ia, ib));
            s.check(a.epsilon_tilde() == b.epsilon_tilde(), || format!("{} l={}: epsilon moved", poly, ell));
            s.check(a.full_invariants().free_at_precision >= 1, || format!("{} l={}: C_K finite", poly, ell));
            for _ in 0..4 {
                let x = random_element(rng, 2);
                let da = a.context().element_divisor(&x)?;
                let db = b.context().element_divisor(&x)?;
                s.check(db.agrees(&da, spec.prec)?, || format!("{} l={}: divisor of {:?} moved", poly, ell, x));
            }
            Ok(())
        };
        if let Err(e) = run(&mut s, rng) {
            s.error(e, &format!("{} l={}", poly, ell));
        }
    }
    s
}

fn functoriality(spec: &JobSpec, rng: &mut ChaCha8Rng) -> Suite {
    let mut s = Suite::default();
    for name in ["ext_q_qi_3.json", "ext_qi_zeta8_2.json", "ext_qi_zeta8_3.json", "ext_m35_quartic_2.json"] {
        let run = |s: &mut Suite, rng: &mut ChaCha8Rng| -> Result<()> {
            let fx = load_extension(&default_dir().join(name))?;
            let e = extension_from_fixture(&fx, spec.prec, &spec.search)?;
            let k = e.base().field().clone();
            let deg = PadicScalar::from_i64(fx.ell, e.relative_degree() as i64, spec.prec + 8);
            for _ in 0..10 {
                let x = random_element(rng, k.degree());
                let dk = e.base().element_divisor(&x)?;
                let dl = e.ext().element_divisor(&e.embed(&x))?;
                let ok = e.extend_divisor(&dk)?.agrees(&dl, spec.prec - slack(spec.prec))?;
                s.check(ok, || format!("{}: j(div x) != div(x) for {:?}", fx.name, x));
                for pr in dk.support() {
                    for (_, sum) in e.degree_sums(pr.p())? {
                        s.check(sum.agrees(&deg, slack(spec.prec)), || format!("{}: sum e f at {}", fx.name, pr));
                    }
                }
            }
            Ok(())
        };
        if let Err(e) = run(&mut s, rng) {
            s.error(e, name);
        }
    }
    s
}

fn log_units(spec: &JobSpec) -> Suite {
    let mut s = Suite::default();
    let run = |s: &mut Suite| -> Result<()> {
        let q = field("x")?;
        for ell in ELLS {
            let ctx = LogContext::new(q.clone(), ell, spec.prec)?;
            for p in [2i64, 3, 5, 7, 11] {
                let w = FieldElementWord::from_element(ell, spec.prec, &q.from_i64(p))?;
                let want = p as u64 == ell;
                s.check(ctx.is_log_unit(&w)? == want, || format!("l={}: is_log_unit({})", ell, p));
            }
        }
        Ok(())
    };
    if let Err(e) = run(&mut s) {
        s.error(e, "rationals");
    }
    s
}

pub fn run(spec: &JobSpec, seed: u64) -> Result<Outcome> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let suites = vec![
        product_formula(spec, &mut rng).to_value("product_formula"),
        away_from_ell(spec, &mut rng).to_value("away_from_ell"),
        snf_contract(spec, &mut rng).to_value("snf_contract"),
        precision_stability(spec, &mut rng).to_value("precision_stability"),
        functoriality(spec, &mut rng).to_value("functoriality"),
        log_units(spec).to_value("log_unit_hallmark"),
    ];
    let passed = suites.iter().all(|v| v["passed"] == json!(true));
    Ok(Outcome {
        doc: json!({"seed": seed, "precision": spec.prec, "passed": passed, "suites": suites}),
        status: if passed { 0 } else { 3 },
    })
}
