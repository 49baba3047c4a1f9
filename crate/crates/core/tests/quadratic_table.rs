use std::sync::Arc;

use logcl::fixtures::{default_dir, load_quadratic};
use logcl::logclass::log_class_group;
use logcl::numfield::{parse_field, FieldCaps};
use logcl::units_classes::SearchCaps;
use num_bigint::BigUint;
use rayon::prelude::*;

#[test]
fn log_torsion_matches_oracle_table() {
    let table = load_quadratic(&default_dir().join("quadratic_logclass.json")).unwrap();
    let caps = SearchCaps::default();
    let failures: Vec<String> = table
        .rows
        .par_iter()
        .filter_map(|row| {
            let k = Arc::new(parse_field(&row.poly, &FieldCaps::default()).unwrap());
            let got = match log_class_group(k, row.ell, 32, &caps) {
                Ok(g) => g,
                Err(e) => return Some(format!("{} l={}: {}", row.poly, row.ell, e)),
            };
            let inv = got.degree_zero_invariants();
            let mut want: Vec<BigUint> = row.log_torsion.iter().map(|&x| BigUint::from(x)).collect();
            want.sort();
            let h: u64 = got.class_group().unwrap().iter().map(|x| x.to_string().parse::<u64>().unwrap()).product();
            if inv.torsion != want || inv.free_at_precision != 0 || h != row.class_number || !got.certified() {
                Some(format!(
                    "{} l={}: got {:?} free {} h {} certified {}, want {:?} h {}",
                    row.poly, row.ell, inv.torsion, inv.free_at_precision, h, got.certified(), want, row.class_number
                ))
            } else {
                None
            }
        })
        .collect();
    assert!(failures.is_empty(), "{} mismatches:\n{}", failures.len(), failures.join("\n"));
}
