//! Deterministic enumeration of small lattice vectors and smoothness tests.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::Result;
use crate::numfield::{AlgebraicNum, NumberField, PrimeIdeal};

/// Integer vectors of `[-b, b]^n` with sup norm exactly `b` and first
/// nonzero coordinate positive, in lexicographic order.
pub(crate) fn shell(n: usize, b: i64) -> Vec<Vec<i64>> {
    let mut out = Vec::new();
    if b == 0 {
        return out;
    }
    let mut cur = vec![-b; n];
    loop {
        let top = cur.iter().any(|c| c.abs() == b);
        let first_pos = cur.iter().find(|c| **c != 0).is_some_and(|c| *c > 0);
        if top && first_pos {
            out.push(cur.clone());
        }
        let mut i = n;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if cur[i] < b {
                cur[i] += 1;
                for c in cur.iter_mut().skip(i + 1) {
                    *c = -b;
                }
                break;
            }
        }
    }
}

/// Combination `sum c_i rows_i` as an integral element.
pub(crate) fn combine(rows: &[Vec<BigInt>], c: &[i64]) -> AlgebraicNum {
    let n = rows[0].len();
    let mut v = vec![BigInt::zero(); n];
    for (ci, r) in c.iter().zip(rows) {
        if *ci != 0 {
            for (x, y) in v.iter_mut().zip(r) {
                *x += y * BigInt::from(*ci);
            }
        }
    }
    AlgebraicNum::new(v, BigInt::one())
}

/// Divisor of an integral element over `primes` when it is supported there.
pub(crate) fn divisor_over(k: &NumberField, primes: &[PrimeIdeal], x: &AlgebraicNum) -> Result<Option<Vec<i64>>> {
    if x.is_zero() {
        return Ok(None);
    }
    let mut norm = k.norm(x).to_integer().abs();
    let mut rational: Vec<u64> = primes.iter().map(|p| p.p()).collect();
    rational.sort_unstable();
    rational.dedup();
    let mut vp = Vec::with_capacity(rational.len());
    for &p in &rational {
        let pb = BigInt::from(p);
        let mut e = 0i64;
        while !norm.is_zero() && norm.is_multiple_of(&pb) {
            norm /= &pb;
            e += 1;
        }
        vp.push(e);
    }
    if !norm.is_one() {
        return Ok(None);
    }
    let mut out = vec![0i64; primes.len()];
    for (&p, &e) in rational.iter().zip(&vp) {
        if e == 0 {
            continue;
        }
        let mut seen = 0i64;
        for (i, pr) in primes.iter().enumerate() {
            if pr.p() == p {
                let v = pr.valuation(k, x)?;
                out[i] = v;
                seen += v * pr.f() as i64;
            }
        }
        if seen != e {
            return Ok(None);
        }
    }
    Ok(Some(out))
}
