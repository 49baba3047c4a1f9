#![allow(dead_code)]

use std::sync::Arc;

use logcl::numfield::{parse_field, AlgebraicNum, FieldCaps, NumberField};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

pub const QUADRATICS: [&str; 10] =
    ["x^2+1", "x^2+2", "x^2-2", "x^2+5", "x^2-5", "x^2+23", "x^2-7", "x^2+31", "x^2-11", "x^2+14"];

pub fn field(s: &str) -> Arc<NumberField> {
    Arc::new(parse_field(s, &FieldCaps::default()).unwrap())
}

pub fn element(c: &[i64]) -> AlgebraicNum {
    AlgebraicNum::from_ints(c)
}

/// Number of reduced primitive binary quadratic forms of discriminant
/// `disc < 0`: `|b| <= a <= c`, `b >= 0` when `|b| = a` or `a = c`.
pub fn reduced_forms(disc: i64) -> u64 {
    assert!(disc < 0 && disc.rem_euclid(4) <= 1);
    let mut h = 0;
    let mut a: i64 = 1;
    while 3 * a * a <= -disc {
        for b in -a + 1..=a {
            let num = b * b - disc;
            if num % (4 * a) != 0 {
                continue;
            }
            let c = num / (4 * a);
            if c < a || (c == a && b < 0) || a.gcd(&b).gcd(&c) != 1 {
                continue;
            }
            h += 1;
        }
        a += 1;
    }
    h
}

pub fn squarefree(d: i64) -> bool {
    let n = d.unsigned_abs();
    d != 0 && d != 1 && (2u64..).take_while(|p| p * p <= n).all(|p| !n.is_multiple_of(p * p))
}

pub fn quadratic_disc(d: i64) -> i64 {
    if d.rem_euclid(4) == 1 {
        d
    } else {
        4 * d
    }
}

/// Determinant by fraction-free elimination.
pub fn bareiss(mut m: Vec<Vec<BigInt>>) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::from(1);
    }
    let mut sign = 1;
    let mut prev = BigInt::from(1);
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&i| !m[i][k].is_zero()) {
                Some(i) => {
                    m.swap(i, k);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let t = &m[i][j] * &m[k][k] - &m[i][k] * &m[k][j];
                m[i][j] = t / &prev;
            }
        }
        prev = m[k][k].clone();
    }
    m[n - 1][n - 1].clone() * sign
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    if n < k {
        return vec![];
    }
    let mut out = subsets(n - 1, k);
    for mut s in subsets(n - 1, k - 1) {
        s.push(n - 1);
        out.push(s);
    }
    out
}

fn valuation(ell: u64, x: &BigInt) -> Option<u32> {
    if x.is_zero() {
        return None;
    }
    let l = BigInt::from(ell);
    let mut x = x.abs();
    let mut v = 0;
    while (&x % &l).is_zero() {
        x /= &l;
        v += 1;
    }
    Some(v)
}

/// `min(N, v(gcd of k x k minors))` for `k = 1 ..= min(rows, cols)`.
pub fn minor_valuations(ell: u64, prec: u32, a: &[Vec<BigInt>]) -> Vec<u32> {
    let (m, n) = (a.len(), a[0].len());
    (1..=m.min(n))
        .map(|k| {
            let mut best = prec;
            for rs in subsets(m, k) {
                for cs in subsets(n, k) {
                    let sub: Vec<Vec<BigInt>> = rs.iter().map(|&i| cs.iter().map(|&j| a[i][j].clone()).collect()).collect();
                    if let Some(v) = valuation(ell, &bareiss(sub)) {
                        best = best.min(v);
                    }
                }
            }
            best
        })
        .collect()
}

#[test]
fn oracle_sanity() {
    assert_eq!(reduced_forms(-3), 1);
    assert_eq!(reduced_forms(-4), 1);
    assert_eq!(reduced_forms(-23), 3);
    assert_eq!(reduced_forms(-20), 2);
    assert_eq!(reduced_forms(-84), 4);
    let m = |r: &[&[i64]]| r.iter().map(|x| x.iter().map(|&y| BigInt::from(y)).collect()).collect::<Vec<Vec<BigInt>>>();
    assert_eq!(bareiss(m(&[&[2, 1], &[1, 3]])), BigInt::from(5));
    assert_eq!(bareiss(m(&[&[0, 1, 0], &[1, 0, 0], &[0, 0, 7]])), BigInt::from(-7));
    assert_eq!(minor_valuations(3, 10, &m(&[&[3, 6], &[9, 12]])), vec![1, 2]);
}
