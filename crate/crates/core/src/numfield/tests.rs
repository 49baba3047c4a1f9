use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::*;

fn field(s: &str) -> NumberField {
    parse_field(s, &FieldCaps::default()).unwrap()
}

fn ef(k: &NumberField, p: u64) -> Vec<(u32, u32)> {
    let mut v: Vec<(u32, u32)> = k.primes_above(p).unwrap().iter().map(|q| (q.e(), q.f())).collect();
    v.sort();
    v
}

fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

#[test]
fn quadratic_discriminants() {
    assert_eq!(field("x^2+1").disc(), &BigInt::from(-4));
    assert_eq!(field("x^2+23").disc(), &BigInt::from(-23));
    let k = field("x^2-5");
    assert_eq!(k.disc(), &BigInt::from(5));
    let b = k.integral_basis();
    assert_eq!(b[1], vec![q(1, 2), q(1, 2)]);
    assert_eq!(k.signature(), (2, 0));
}

#[test]
fn rejects_bad_polynomials() {
    let caps = FieldCaps::default();
    assert_eq!(parse_field("x^2-4", &caps).unwrap_err().kind(), "invalid");
    assert_eq!(parse_field("2*x^2+1", &caps).unwrap_err().kind(), "invalid");
    assert_eq!(parse_field("x^9+x+1", &caps).unwrap_err().kind(), "cap_exceeded");
}

#[test]
fn gaussian_primes() {
    let k = field("x^2+1");
    assert_eq!(ef(&k, 5), vec![(1, 1), (1, 1)]);
    assert_eq!(ef(&k, 2), vec![(2, 1)]);
    assert_eq!(ef(&k, 3), vec![(1, 2)]);
    let ps = k.primes_above(5).unwrap();
    let prod = Ideal::from_prime(&ps[0]).mul(&k, &Ideal::from_prime(&ps[1]));
    assert_eq!(prod, Ideal::principal(&k, &k.from_i64(5)).unwrap());
    let a = AlgebraicNum::from_ints(&[2, 1]);
    let div = k.element_divisor(&a).unwrap();
    assert_eq!(div.len(), 1);
    assert_eq!(div[0].0.p(), 5);
    assert_eq!(div[0].1, 1);
    assert_eq!(k.norm(&a), q(5, 1));
}

#[test]
fn common_index_divisor() {
    // 2 divides every index of this cubic, so Kummer-Dedekind cannot apply.
    let k = field("x^3-x^2-2*x-8");
    assert_eq!(k.disc(), &BigInt::from(-503));
    assert_eq!(k.index(), &BigInt::from(2));
    assert_eq!(ef(&k, 2), vec![(1, 1), (1, 1), (1, 1)]);
    assert_eq!(ef(&k, 5), vec![(1, 1), (1, 2)]);
}

#[test]
fn octic_decomposition() {
    let k = field("x^8-4*x^7+14*x^6-28*x^5+93*x^4-144*x^3+416*x^2-348*x+711");
    assert_eq!(k.disc(), &BigInt::from(6146560000u64));
    assert_eq!(ef(&k, 2), vec![(2, 2), (2, 2)]);
    assert_eq!(ef(&k, 3), vec![(1, 2), (1, 2), (1, 2), (1, 2)]);
    assert_eq!(ef(&k, 5), vec![(2, 2), (2, 2)]);
    assert_eq!(ef(&k, 7), vec![(2, 2), (2, 2)]);
}

#[test]
fn kummer_and_general_agree() {
    for (f, primes) in [
        ("x^2+1", vec![2u64, 3, 5, 13]),
        ("x^4-x^3+5*x^2+2*x+4", vec![5, 7, 11, 29]),
        ("x^6-3*x^5+7*x^4-9*x^3+7*x^2-3*x+1", vec![2, 3, 5, 31, 47]),
        ("x^3-2", vec![3, 5, 7, 31]),
    ] {
        let k = field(f);
        for p in primes {
            if k.index() % BigInt::from(p) == BigInt::zero() {
                continue;
            }
            let a = k.decompose_kummer(p).unwrap();
            let b = k.decompose_general(p).unwrap();
            assert_eq!(a, b, "{} at {}", f, p);
            for (x, y) in a.iter().zip(&b) {
                assert_eq!((x.e(), x.f()), (y.e(), y.f()));
            }
        }
    }
}

#[test]
fn prime_product_recovers_p() {
    let k = field("x^4-x^3+5*x^2+2*x+4");
    for p in [2u64, 3, 5, 7, 11] {
        let ps = k.primes_above(p).unwrap();
        let fac: Vec<(PrimeIdeal, i64)> = ps.iter().map(|q| (q.clone(), q.e() as i64)).collect();
        let prod = Ideal::from_factorization(&k, &fac).unwrap();
        assert_eq!(prod, Ideal::principal(&k, &k.from_i64(p as i64)).unwrap(), "p = {}", p);
        let total: u32 = ps.iter().map(|q| q.e() * q.f()).sum();
        assert_eq!(total, 4);
    }
}

#[test]
fn inverse_and_norm() {
    let k = field("x^3-x^2-2*x-8");
    let a = k.add(&k.theta(), &k.from_i64(3));
    let ai = k.inv(&a).unwrap();
    assert_eq!(k.mul(&a, &ai), k.one());
    let n = k.norm(&a);
    assert_eq!(k.norm(&ai), BigRational::one() / n);
}

#[test]
fn local_norms_multiply_to_global() {
    for (f, ell) in [("x^4-x^3+5*x^2+2*x+4", 2u64), ("x^4-x^3+5*x^2+2*x+4", 3), ("x^3-x^2-2*x-8", 2), ("x^2+1", 5)] {
        let k = field(f);
        let places = k.local_places(ell).unwrap();
        let n = k.degree();
        for s in 1..6i64 {
            let coords: Vec<i64> = (0..n as i64).map(|i| (s * 7 + i * i * 3 - 5 * i) % 11).collect();
            let a = AlgebraicNum::new(coords.iter().map(|&x| BigInt::from(x)).collect(), BigInt::from(s));
            if a.is_zero() {
                continue;
            }
            let global = crate::padic::PadicScalar::from_rational(ell, &k.norm(&a), 30);
            let mut prod = crate::padic::PadicScalar::one(ell, 30);
            for pl in &places {
                prod = prod.checked_mul(&pl.local_norm(&k, &a, 30).unwrap()).unwrap();
            }
            assert!(prod.eq_at_prec(&global), "{} at {}: {} vs {}", f, ell, prod, global);
        }
    }
}
