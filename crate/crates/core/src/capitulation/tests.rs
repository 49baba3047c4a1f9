use super::*;
use crate::fixtures::{default_dir, load_extension};
use crate::logclass::log_class_group;

fn field(s: &str) -> Arc<NumberField> {
    Arc::new(parse_field(s, &FieldCaps::default()).unwrap())
}

fn one() -> BigRational {
    BigRational::one()
}

#[test]
fn rationals_in_gaussian_field() {
    let caps = SearchCaps::default();
    let e = build_extension(field("x"), field("x^2+1"), 3, 32, None, &caps).unwrap();
    for pair in e.pairs_above(5).unwrap().iter() {
        assert_eq!(pair.e_tilde, one());
    }
    let two = e.pairs_above(2).unwrap();
    assert_eq!(two.len(), 1);
    assert_eq!(two[0].e_tilde, BigRational::from_integer(2.into()));
    let three = e.pairs_above(3).unwrap();
    assert_eq!(three[0].e_tilde, one());
    for q in [2u64, 3, 5, 7] {
        for (_, s) in e.degree_sums(q).unwrap() {
            assert!(s.eq_at_prec(&PadicScalar::from_i64(3, 2, 40)), "q = {}", q);
        }
    }
    let k = e.base().field().clone();
    let x = k.from_i64(2);
    let dk = e.base().element_divisor(&x).unwrap();
    let dl = e.ext().element_divisor(&e.embed(&x)).unwrap();
    assert!(e.extend_divisor(&dk).unwrap().agrees(&dl, 32).unwrap());
}

#[test]
fn ramified_at_ell() {
    let caps = SearchCaps::default();
    let e = build_extension(field("x"), field("x^2-3"), 3, 32, None, &caps).unwrap();
    let pairs = e.pairs_above(3).unwrap();
    assert_eq!(pairs[0].e_tilde, BigRational::from_integer(2.into()));
    assert!(!e.is_log_unramified(&[]).unwrap().global);
}

#[test]
fn identity_extension() {
    let caps = SearchCaps::default();
    let k = field("x^2+23");
    let e = build_extension(k.clone(), k.clone(), 3, 32, None, &caps).unwrap();
    let r = e.is_log_unramified(&[2, 3, 23]).unwrap();
    assert!(r.global);
    let g = log_class_group(k, 3, 32, &caps).unwrap();
    let report = e.capitulation_kernel(&g, &g).unwrap();
    assert_eq!(report.kernel.order, Some(BigUint::one()));
    assert!(report.classes.iter().all(|c| c.verdict == Verdict::Survives));
}

#[test]
fn kernel_invariants_from_elements() {
    // Z/4 x Z/2 with kernel everything.
    let members: Vec<Vec<u64>> = (0..4).flat_map(|a| (0..2).map(move |b| vec![a, b])).collect();
    assert_eq!(kernel_invariants(2, &[4, 2], &members), vec![BigUint::from(2u32), BigUint::from(4u32)]);
    assert_eq!(kernel_invariants(3, &[9], &[vec![0]]), Vec::<BigUint>::new());
    assert_eq!(kernel_invariants(3, &[9], &[vec![0], vec![3], vec![6]]), vec![BigUint::from(3u32)]);
}

#[test]
fn quartic_fixture_capitulates() {
    let caps = SearchCaps::default();
    let fx = load_extension(&default_dir().join("ext_m35_quartic_2.json")).unwrap();
    let e = extension_from_fixture(&fx, 32, &caps).unwrap();
    let (lg, checks) = ext_group_from_fixture(&e, &fx).unwrap();
    assert!(checks.all(), "{:?}", checks);
    let kg = log_class_group(e.base().field().clone(), fx.ell, 32, &caps).unwrap();
    let report = e.capitulation_kernel(&kg, &lg).unwrap();
    let want = fx.expected.unwrap();
    let verdicts: Vec<&str> = report.classes.iter().map(|c| c.verdict.as_str()).collect();
    assert_eq!(verdicts, want.verdicts);
    assert_eq!(report.kernel.order, Some(BigUint::from(want.kernel_order)));
    assert_eq!(report.log_unramified.global, want.log_unramified);
}
