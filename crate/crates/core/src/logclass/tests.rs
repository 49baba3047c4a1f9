use std::sync::Arc;

use num_bigint::BigInt;

use super::*;
use crate::numfield::{parse_field, FieldCaps};
use crate::units_classes::SearchCaps;

fn field(s: &str) -> Arc<NumberField> {
    Arc::new(parse_field(s, &FieldCaps::default()).unwrap())
}

fn ctx(s: &str, ell: u64) -> LogContext {
    LogContext::new(field(s), ell, 32).unwrap()
}

fn int(c: &LogContext, n: i64) -> AlgebraicNum {
    c.field().from_i64(n)
}

#[test]
fn rational_valuations() {
    let c = ctx("x", 3);
    let k = c.field().clone();
    let p5 = c.place(&k.primes_above(5).unwrap()[0]).unwrap();
    let p3 = c.ell_places()[0].clone();
    let v = c.element_valuation(&int(&c, 50), &p5).unwrap();
    assert_eq!(v.residue(32).unwrap(), 2u32.into());
    assert!(c.element_valuation(&int(&c, 3), &p3).unwrap().is_zero());
    let four = c.element_valuation(&int(&c, 4), &p3).unwrap();
    assert!(four.eq_at_prec(&PadicScalar::from_i64(3, -1, 40)));
    let two = c.element_valuation(&int(&c, 2), &p3).unwrap();
    let twice = two.scale(&BigInt::from(2));
    assert!(twice.eq_at_prec(&PadicScalar::from_i64(3, -1, 40)));
    assert!(p3.degree().eq_at_prec(&log_cyclotomic(3, 60).unwrap()));
    assert_eq!(p3.degree().valuation(), Some(1));
}

#[test]
fn rational_divisors() {
    let c = ctx("x", 3);
    let k = c.field().clone();
    let w = FieldElementWord::from_element(3, 32, &int(&c, 2)).unwrap();
    let d = c.log_divisor(&w).unwrap();
    let p2 = k.primes_above(2).unwrap()[0].clone();
    let p3 = k.primes_above(3).unwrap()[0].clone();
    assert_eq!(d.support().len(), 2);
    assert_eq!(d.coefficient(&p2).unwrap().residue(32).unwrap(), 1u32.into());
    let half = PadicScalar::from_i64(3, -1, 40).checked_div(&PadicScalar::from_i64(3, 2, 40)).unwrap();
    assert!(d.coefficient(&p3).unwrap().eq_at_prec(&half));
    assert!(c.degree_vanishes(&d, 2).unwrap());
    assert!(!c.is_log_unit(&w).unwrap());
    for n in [-1i64, 3, -3, 9] {
        let w = FieldElementWord::from_element(3, 32, &int(&c, n)).unwrap();
        assert!(c.is_log_unit(&w).unwrap(), "{}", n);
    }
}

#[test]
fn degrees_of_rational_places() {
    for ell in [2u64, 3, 5, 7] {
        let c = ctx("x", ell);
        let p = &c.ell_places()[0];
        assert_eq!(p.degree().valuation(), Some(cyclotomic_valuation(ell) as i64));
        assert_eq!((p.e_tilde(), p.f_tilde()), (1, 1));
    }
}

#[test]
fn word_arithmetic() {
    let c = ctx("x^2+5", 3);
    let k = c.field().clone();
    let a = AlgebraicNum::from_ints(&[1, 2]);
    let b = AlgebraicNum::from_ints(&[3, -1]);
    let wa = FieldElementWord::from_element(3, 32, &a).unwrap();
    let wb = FieldElementWord::from_element(3, 32, &b).unwrap();
    let wab = FieldElementWord::from_element(3, 32, &k.mul(&a, &b)).unwrap();
    let sum = c.log_divisor(&wa).unwrap().add(&c.log_divisor(&wb).unwrap()).unwrap();
    assert!(sum.agrees(&c.log_divisor(&wab).unwrap(), 32).unwrap());
    let prod = c.log_divisor(&wa.mul(&wb).unwrap()).unwrap();
    assert!(prod.agrees(&sum, 32).unwrap());
    let inv = c.log_divisor(&wa.pow(&BigInt::from(-1))).unwrap();
    assert!(inv.add(&c.log_divisor(&wa).unwrap()).unwrap().is_zero_at(32));
    assert!(c.degree_vanishes(&prod, 4).unwrap());
}

#[test]
fn rationals_have_trivial_degree_zero_part() {
    let caps = SearchCaps::default();
    for ell in [2u64, 3, 5] {
        let g = log_class_group(field("x"), ell, 32, &caps).unwrap();
        assert_eq!(g.full_invariants().free_at_precision, 1);
        assert!(g.full_invariants().torsion.is_empty());
        assert_eq!(g.degree_zero_invariants().free_at_precision, 0);
        assert_eq!(g.epsilon_tilde(), 0);
    }
}

#[test]
fn small_imaginary_quadratics() {
    let caps = SearchCaps::default();
    let g = log_class_group(field("x^2+1"), 3, 32, &caps).unwrap();
    assert!(g.certified());
    assert!(g.degree_zero_invariants().torsion.is_empty());
    let g = log_class_group(field("x^2+149"), 3, 32, &caps).unwrap();
    assert_eq!(g.degree_zero_invariants().torsion_exponents, vec![2]);
    assert_eq!(g.epsilon_tilde(), 2);
    assert_eq!(g.full_invariants().free_at_precision, 1);
    let g = log_class_group(field("x^2+146"), 2, 32, &caps).unwrap();
    assert_eq!(g.degree_zero_invariants().torsion_exponents, vec![3]);
}
