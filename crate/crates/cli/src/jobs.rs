use std::path::Path;
use std::sync::Arc;

use logcl::capitulation::{build_extension, ext_group_from_fixture, extension_from_fixture};
use logcl::fixtures::{element, load_extension, load_extensions, load_quadratic, ExtensionFixture, QuadraticRow};
use logcl::logclass::{log_class_group, LogClassGroup};
use logcl::numfield::{parse_field, NumberField};
use logcl::{Error, Result};
use num_bigint::{BigInt, BigUint};
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::{JobSpec, Outcome};

fn to_value<T: serde::Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("reports serialize")
}

fn field(s: &str, spec: &JobSpec) -> Result<Arc<NumberField>> {
    Ok(Arc::new(parse_field(s, &spec.field_caps)?))
}

fn field_invariants(k: &NumberField) -> Value {
    let (r1, r2) = k.signature();
    json!({
        "poly": k.poly().to_string(),
        "degree": k.degree(),
        "disc": k.disc().to_string(),
        "signature": [r1, r2],
    })
}

fn group_doc(g: &LogClassGroup) -> Value {
    let mut doc = to_value(&g.report());
    doc["field_invariants"] = field_invariants(g.field());
    doc
}

pub fn compute(spec: &JobSpec, poly: &str) -> Result<Outcome> {
    let k = field(poly, spec)?;
    let g = log_class_group(k, spec.ell, spec.prec, &spec.search)?;
    Ok(Outcome::ok(group_doc(&g)))
}

fn parse_embedding(l: &NumberField, s: &str) -> Result<logcl::numfield::AlgebraicNum> {
    let coords: Vec<String> = s.split(',').map(|c| c.trim().to_string()).collect();
    element(l, &coords)
}

pub fn capitulate(
    spec: &JobSpec,
    base: Option<&str>,
    ext: Option<&str>,
    embedding: Option<&str>,
    fixture: Option<&Path>,
) -> Result<Outcome> {
    if let Some(path) = fixture {
        if base.is_some() || ext.is_some() || embedding.is_some() {
            return Err(Error::Invalid("--fixtures excludes --base, --ext and --embedding".into()));
        }
        let fx = load_extension(path)?;
        if spec.ell_given && spec.ell != fx.ell {
            return Err(Error::Invalid(format!("fixture {} is for l = {}, not {}", fx.name, fx.ell, spec.ell)));
        }
        let e = extension_from_fixture(&fx, spec.prec, &spec.search)?;
        let kg = log_class_group(e.base().field().clone(), fx.ell, spec.prec, &spec.search)?;
        let (lg, checks) = ext_group_from_fixture(&e, &fx)?;
        let report = e.capitulation_kernel(&kg, &lg)?;
        let mut doc = to_value(&report);
        doc["certified"] = json!(report.certified && checks.all());
        doc["ext_source"] = json!({"fixture": fx.name, "checks": to_value(&checks)});
        return Ok(Outcome::ok(doc));
    }
    let (Some(base), Some(ext)) = (base, ext) else {
        return Err(Error::Invalid("capitulate needs --base and --ext, or --fixtures".into()));
    };
    let k = field(base, spec)?;
    let l = field(ext, spec)?;
    let hint = embedding.map(|s| parse_embedding(&l, s)).transpose()?;
    let e = build_extension(k.clone(), l.clone(), spec.ell, spec.prec, hint, &spec.search)?;
    let kg = log_class_group(k, spec.ell, spec.prec, &spec.search)?;
    let lg = log_class_group(l, spec.ell, spec.prec, &spec.search)?;
    let report = e.capitulation_kernel(&kg, &lg)?;
    let mut doc = to_value(&report);
    doc["ext_source"] = json!("computed");
    Ok(Outcome::ok(doc))
}

fn parse_range(s: &str) -> Result<(i64, i64)> {
    let bad = || Error::Invalid(format!("bad range {:?}, expected a..b", s));
    let (a, b) = s.split_once("..").ok_or_else(bad)?;
    let a: i64 = a.trim().parse().map_err(|_| bad())?;
    let b: i64 = b.trim().parse().map_err(|_| bad())?;
    Ok((a, b))
}

fn squarefree(d: i64) -> bool {
    if d == 0 || d == 1 {
        return false;
    }
    let n = d.unsigned_abs();
    (2u64..).take_while(|p| p * p <= n).all(|p| !n.is_multiple_of(p * p))
}

fn quadratic_poly(d: i64) -> String {
    if d < 0 {
        format!("x^2+{}", -d)
    } else {
        format!("x^2-{}", d)
    }
}

fn error_value(e: &Error) -> Value {
    json!({"kind": e.kind(), "message": e.to_string()})
}

fn scan_row(spec: &JobSpec, d: i64) -> Value {
    let poly = quadratic_poly(d);
    let run = || -> Result<Value> {
        let g = log_class_group(field(&poly, spec)?, spec.ell, spec.prec, &spec.search)?;
        let cl: Vec<BigInt> = g.class_group().cloned().unwrap_or_default();
        let h: BigInt = cl.iter().product();
        let inv = g.degree_zero_invariants();
        Ok(json!({
            "d": d,
            "field": poly,
            "class_number": h.to_string(),
            "class_group": cl.iter().map(|x| x.to_string()).collect::<Vec<_>>(),
            "ell_divides_h": (&h % BigInt::from(spec.ell)) == BigInt::from(0),
            "log_torsion": inv.torsion.iter().map(|x| x.to_string()).collect::<Vec<_>>(),
            "free_in_degree_zero": inv.free_at_precision,
            "epsilon_tilde": g.epsilon_tilde(),
            "certified": g.certified(),
        }))
    };
    run().unwrap_or_else(|e| json!({"d": d, "field": poly, "error": error_value(&e)}))
}

pub fn scan(spec: &JobSpec, range: &str) -> Result<Outcome> {
    let (a, b) = parse_range(range)?;
    let ds: Vec<i64> = if a <= b { (a..=b).filter(|&d| squarefree(d)).collect() } else { Vec::new() };
    if ds.len() > spec.max_rows {
        return Err(Error::CapExceeded(format!("{} fields in range, cap {}", ds.len(), spec.max_rows)));
    }
    let rows: Vec<Value> = ds.par_iter().map(|&d| scan_row(spec, d)).collect();
    Ok(Outcome::ok(json!({
        "ell": spec.ell,
        "precision": spec.prec,
        "range": [a, b],
        "rows": rows,
    })))
}

fn sorted(v: impl IntoIterator<Item = BigUint>) -> Vec<BigUint> {
    let mut v: Vec<BigUint> = v.into_iter().collect();
    v.sort();
    v
}

fn from_u64s(v: &[u64]) -> Vec<BigUint> {
    sorted(v.iter().map(|&x| BigUint::from(x)))
}

fn show(v: &[BigUint]) -> String {
    format!("[{}]", v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", "))
}

fn mismatch(out: &mut Vec<String>, what: &str, want: &[BigUint], got: &[BigUint]) {
    if want != got {
        out.push(format!("{}: expected {}, got {}", what, show(want), show(got)));
    }
}

fn epsilon_of(ell: u64, torsion: &[BigUint]) -> u32 {
    torsion.iter().map(|t| logcl::padic::val_biguint(ell, t)).max().unwrap_or(0)
}

fn compare_row(spec: &JobSpec, row: &QuadraticRow) -> Vec<String> {
    let tag = format!("{} l={}", row.poly, row.ell);
    let run = || -> Result<Vec<String>> {
        let g = log_class_group(field(&row.poly, spec)?, row.ell, spec.prec, &spec.search)?;
        let mut out = Vec::new();
        let cl = g.class_group().cloned().unwrap_or_default();
        let cl = sorted(cl.iter().map(|x| x.magnitude().clone()));
        mismatch(&mut out, &format!("{}: class group", tag), &from_u64s(&row.class_group), &cl);
        let want = from_u64s(&row.log_torsion);
        let got = g.degree_zero_invariants().torsion;
        mismatch(&mut out, &format!("{}: log torsion", tag), &want, &got);
        let (we, ge) = (epsilon_of(row.ell, &want), g.epsilon_tilde());
        if want == got && we != ge {
            out.push(format!("{}: epsilon expected {}, got {}", tag, we, ge));
        }
        Ok(out)
    };
    run().unwrap_or_else(|e| vec![format!("{}: error: {}", tag, e)])
}

fn compare_extension(spec: &JobSpec, fx: &ExtensionFixture) -> Vec<String> {
    let Some(want) = &fx.expected else { return Vec::new() };
    let tag = fx.name.clone();
    let run = || -> Result<Vec<String>> {
        let e = extension_from_fixture(fx, spec.prec, &spec.search)?;
        let kg = log_class_group(e.base().field().clone(), fx.ell, spec.prec, &spec.search)?;
        let (lg, checks) = ext_group_from_fixture(&e, fx)?;
        let report = e.capitulation_kernel(&kg, &lg)?;
        let mut out = Vec::new();
        if !checks.all() {
            out.push(format!("{}: fixture data failed checks {:?}", tag, checks));
        }
        let cl = sorted(kg.class_group().cloned().unwrap_or_default().iter().map(|x| x.magnitude().clone()));
        mismatch(&mut out, &format!("{}: base class group", tag), &from_u64s(&want.base_class_group), &cl);
        let bt = kg.degree_zero_invariants().torsion;
        mismatch(&mut out, &format!("{}: base log torsion", tag), &from_u64s(&want.base_log_torsion), &bt);
        let lt = lg.degree_zero_invariants().torsion;
        mismatch(&mut out, &format!("{}: ext log torsion", tag), &from_u64s(&want.ext_log_torsion), &lt);
        let mut wv = want.verdicts.clone();
        let mut gv: Vec<String> = report.classes.iter().map(|c| c.verdict.as_str().to_string()).collect();
        wv.sort();
        gv.sort();
        if wv != gv {
            out.push(format!("{}: verdicts expected {:?}, got {:?}", tag, wv, gv));
        }
        let order = report.kernel.order.clone();
        if order != Some(BigUint::from(want.kernel_order)) {
            out.push(format!(
                "{}: kernel order expected {}, got {}",
                tag,
                want.kernel_order,
                order.map_or("unknown".to_string(), |o| o.to_string())
            ));
        }
        if report.log_unramified.global != want.log_unramified {
            out.push(format!(
                "{}: log_unramified expected {}, got {}",
                tag, want.log_unramified, report.log_unramified.global
            ));
        }
        Ok(out)
    };
    run().unwrap_or_else(|e| vec![format!("{}: error: {}", tag, e)])
}

enum Fixture {
    Table(Vec<QuadraticRow>),
    Extension(Box<ExtensionFixture>),
}

fn load_any(path: &Path) -> Result<Fixture> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Invalid(format!("cannot read fixture {}: {}", path.display(), e)))?;
    let v: Value =
        serde_json::from_str(&text).map_err(|e| Error::Invalid(format!("malformed fixture {}: {}", path.display(), e)))?;
    if v.get("rows").is_some() {
        Ok(Fixture::Table(load_quadratic(path)?.rows))
    } else {
        Ok(Fixture::Extension(Box::new(load_extension(path)?)))
    }
}

pub fn compare(spec: &JobSpec, path: &Path) -> Result<Outcome> {
    let mut fixtures = Vec::new();
    if path.is_dir() {
        let table = path.join("quadratic_logclass.json");
        if table.exists() {
            fixtures.push(load_any(&table)?);
        }
        fixtures.extend(load_extensions(path)?.into_iter().map(|f| Fixture::Extension(Box::new(f))));
        if fixtures.is_empty() {
            return Err(Error::Invalid(format!("no fixtures in {}", path.display())));
        }
    } else {
        fixtures.push(load_any(path)?);
    }
    let mut compared = 0usize;
    let mut diff = Vec::new();
    for fx in &fixtures {
        match fx {
            Fixture::Table(rows) => {
                compared += rows.len();
                let lines: Vec<Vec<String>> = rows.par_iter().map(|r| compare_row(spec, r)).collect();
                diff.extend(lines.into_iter().flatten());
            }
            Fixture::Extension(f) => {
                if f.expected.is_some() {
                    compared += 1;
                }
                diff.extend(compare_extension(spec, f));
            }
        }
    }
    Ok(Outcome::ok(json!({
        "precision": spec.prec,
        "compared": compared,
        "diff": diff,
    })))
}
