mod common;

use std::collections::BTreeMap;
use std::sync::{Arc, Mutex, OnceLock};

use common::{element, field, minor_valuations, QUADRATICS};
use logcl::logclass::LogContext;
use logcl::padic::PadicScalar;
use logcl::zlmod::{smith_normal_form, ZlMatrix};
use num_bigint::BigInt;
use proptest::prelude::*;

fn context(poly: &str, ell: u64) -> Arc<LogContext> {
    static CACHE: OnceLock<Mutex<BTreeMap<(String, u64), Arc<LogContext>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    let key = (poly.to_string(), ell);
    if let Some(c) = cache.lock().unwrap().get(&key) {
        return c.clone();
    }
    let c = Arc::new(LogContext::new(field(poly), ell, 32).unwrap());
    cache.lock().unwrap().insert(key, c.clone());
    c
}

fn nonzero() -> impl Strategy<Value = Vec<i64>> {
    prop::collection::vec(-60i64..=60, 2).prop_filter("nonzero", |v| v.iter().any(|&x| x != 0))
}

fn setting() -> impl Strategy<Value = (&'static str, u64)> {
    (prop::sample::select(QUADRATICS.to_vec()), prop::sample::select(vec![2u64, 3, 5]))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn principal_divisors_have_degree_zero((poly, ell) in setting(), c in nonzero()) {
        let ctx = context(poly, ell);
        let d = ctx.element_divisor(&element(&c)).unwrap();
        prop_assert!(ctx.degree_vanishes(&d, 4).unwrap());
    }

    #[test]
    fn divisor_is_a_homomorphism((poly, ell) in setting(), a in nonzero(), b in nonzero()) {
        let ctx = context(poly, ell);
        let k = ctx.field();
        let (x, y) = (element(&a), element(&b));
        let lhs = ctx.element_divisor(&k.mul(&x, &y)).unwrap();
        let rhs = ctx.element_divisor(&x).unwrap().add(&ctx.element_divisor(&y).unwrap()).unwrap();
        prop_assert!(lhs.agrees(&rhs, 28).unwrap());
    }

    #[test]
    fn valuations_away_from_ell_are_ordinary((poly, ell) in setting(), c in nonzero()) {
        let ctx = context(poly, ell);
        let k = ctx.field().clone();
        let x = element(&c);
        for (pr, v) in k.element_divisor(&x).unwrap() {
            if pr.p() == ell {
                continue;
            }
            let got = ctx.element_valuation(&x, &ctx.place(&pr).unwrap()).unwrap();
            prop_assert!(got.eq_at_prec(&PadicScalar::from_i64(ell, v, 40)));
        }
    }

    #[test]
    fn smith_form_contract(
        ell in prop::sample::select(vec![2u64, 3]),
        (m, n, entries) in (1usize..=5, 1usize..=5).prop_flat_map(|(m, n)| {
            (Just(m), Just(n), prop::collection::vec((-30i64..=30, 0u32..4), m * n))
        }),
    ) {
        let prec = 16;
        let ints: Vec<Vec<BigInt>> = (0..m)
            .map(|i| (0..n).map(|j| {
                let (x, e) = entries[i * n + j];
                BigInt::from(x) * BigInt::from(ell).pow(e)
            }).collect())
            .collect();
        let a = ZlMatrix::from_fn(ell, prec, m, n, |i, j| ints[i][j].clone());
        let dec = smith_normal_form(&a);
        prop_assert_eq!(dec.u().mul(&a).mul(dec.v()), dec.d());
        prop_assert_eq!(dec.u().mul(dec.u_inv()), ZlMatrix::identity(ell, prec, m));
        prop_assert_eq!(dec.v().mul(dec.v_inv()), ZlMatrix::identity(ell, prec, n));
        let mut acc = 0u32;
        let cumulative: Vec<u32> = dec.diagonal().iter().map(|a| {
            acc = (acc + a.unwrap_or(prec)).min(prec);
            acc
        }).collect();
        prop_assert_eq!(cumulative, minor_valuations(ell, prec, &ints));
        let d = dec.diagonal();
        for w in d.windows(2) {
            let ordered = match (w[0], w[1]) {
                (Some(x), Some(y)) => x <= y,
                (None, Some(_)) => false,
                _ => true,
            };
            prop_assert!(ordered, "{:?}", d);
        }
    }

    #[test]
    fn iwasawa_log_is_additive(ell in prop::sample::select(vec![2u64, 3, 5, 7]), a in 1i64..10_000, b in 1i64..10_000) {
        let (a, b) = (a * ell as i64 + 1, b * ell as i64 - 1);
        let x = PadicScalar::from_i64(ell, a, 40);
        let y = PadicScalar::from_i64(ell, b, 40);
        let lhs = x.checked_mul(&y).unwrap().iwasawa_log().unwrap();
        let rhs = x.iwasawa_log().unwrap().checked_add(&y.iwasawa_log().unwrap()).unwrap();
        prop_assert!(lhs.agrees(&rhs, 2));
    }
}
