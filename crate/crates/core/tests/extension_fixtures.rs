use logcl::capitulation::{ext_group_from_fixture, extension_from_fixture};
use logcl::fixtures::{default_dir, load_extensions};
use logcl::logclass::log_class_group;
use logcl::units_classes::SearchCaps;
use num_bigint::BigUint;

fn big(v: &[u64]) -> Vec<BigUint> {
    let mut v: Vec<BigUint> = v.iter().map(|&x| BigUint::from(x)).collect();
    v.sort();
    v
}

#[test]
fn capitulation_verdicts_match_oracle() {
    let caps = SearchCaps::default();
    let mut checked = 0;
    for fx in load_extensions(&default_dir()).unwrap() {
        let Some(want) = fx.expected.clone() else { continue };
        let e = extension_from_fixture(&fx, 32, &caps).unwrap();
        let kg = log_class_group(e.base().field().clone(), fx.ell, 32, &caps).unwrap();
        assert!(kg.certified(), "{}", fx.name);
        assert_eq!(kg.degree_zero_invariants().torsion, big(&want.base_log_torsion), "{}", fx.name);
        let (lg, checks) = ext_group_from_fixture(&e, &fx).unwrap();
        assert!(checks.all(), "{}: {:?}", fx.name, checks);
        assert_eq!(lg.degree_zero_invariants().torsion, big(&want.ext_log_torsion), "{}", fx.name);
        assert_eq!(lg.degree_zero_invariants().free_at_precision, 0, "{}", fx.name);
        let report = e.capitulation_kernel(&kg, &lg).unwrap();
        let verdicts: Vec<&str> = report.classes.iter().map(|c| c.verdict.as_str()).collect();
        assert_eq!(verdicts, want.verdicts, "{}", fx.name);
        assert_eq!(report.kernel.order, Some(BigUint::from(want.kernel_order)), "{}", fx.name);
        assert_eq!(report.log_unramified.global, want.log_unramified, "{}", fx.name);
        let table = e.e_tilde_table().unwrap();
        for (q, es) in &want.e_tilde {
            let got: Vec<String> = table[&q.parse::<u64>().unwrap()].iter().map(|x| x.to_string()).collect();
            let (mut a, mut b) = (got.clone(), es.clone());
            a.sort();
            b.sort();
            assert_eq!(a, b, "{} at {}", fx.name, q);
        }
        checked += 1;
    }
    assert_eq!(checked, 5);
}
