use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::numfield::{AlgebraicNum, NumberField};

/// Roots of unity and fundamental units.
#[derive(Clone, Debug, Serialize)]
pub struct UnitGroup {
    /// Generator of the roots of unity.
    pub torsion: AlgebraicNum,
    /// Number of roots of unity.
    pub torsion_order: u64,
    pub fundamental: Vec<AlgebraicNum>,
}

/// Units of `K` modulo roots of unity. Supported when the unit rank is 0,
/// or 1 for real quadratic fields.
pub fn unit_group(k: &NumberField) -> Result<UnitGroup> {
    let (torsion, torsion_order) = roots_of_unity(k)?;
    let fundamental = match (k.degree(), k.unit_rank()) {
        (_, 0) => vec![],
        (2, 1) => vec![real_quadratic_unit(k)?],
        (_, r) => {
            return Err(Error::Unsupported(format!("unit rank {} outside quadratic fields", r)));
        }
    };
    Ok(UnitGroup { torsion, torsion_order, fundamental })
}

fn roots_of_unity(k: &NumberField) -> Result<(AlgebraicNum, u64)> {
    let minus_one = k.from_i64(-1);
    if k.signature().0 > 0 {
        return Ok((minus_one, 2));
    }
    if k.degree() > 2 {
        return Err(Error::Unsupported("roots of unity of totally complex fields of degree > 2".into()));
    }
    let d = k.disc().to_i64().unwrap_or(0);
    let (order, target) = match d {
        -4 => (4u64, k.from_i64(-1)),
        -3 => (6u64, k.from_i64(-1)),
        _ => return Ok((minus_one, 2)),
    };
    // x with x^2 = -1, or x^3 = -1 and x != -1.
    for a in -2i64..=2 {
        for b in -2i64..=2 {
            let x = AlgebraicNum::from_ints(&[a, b]);
            let ok = if order == 4 {
                k.mul(&x, &x) == target
            } else {
                x != minus_one && k.pow(&x, 3)? == target
            };
            if ok {
                return Ok((x, order));
            }
        }
    }
    Err(Error::Invalid("missing root of unity".into()))
}

/// `sqrt(D)` for the field discriminant `D` of a quadratic field.
pub(crate) fn sqrt_disc(k: &NumberField) -> Result<AlgebraicNum> {
    let c = k.poly().coeffs();
    let (b, a) = (&c[0], &c[1]);
    let dp = a * a - BigInt::from(4) * b;
    let m2 = &dp / k.disc();
    let m = m2.sqrt();
    if &m * &m != m2 {
        return Err(Error::Invalid("inconsistent quadratic discriminant".into()));
    }
    let theta = k.theta();
    let two_theta_a = k.add(&k.mul(&k.from_i64(2), &theta), &k.from_int(a));
    Ok(k.mul(&two_theta_a, &AlgebraicNum::new(k.one().num().to_vec(), m)))
}

/// Fundamental unit of a real quadratic field, from the period of the
/// continued fraction of the reduced number `(b + sqrt D)/2`.
fn real_quadratic_unit(k: &NumberField) -> Result<AlgebraicNum> {
    let d = k.disc().clone();
    let s = sqrt_disc(k)?;
    let root = d.sqrt();
    let two = BigInt::from(2);
    // Largest b < sqrt(D) with b = D mod 2.
    let mut b = root.clone();
    if &b * &b == d {
        return Err(Error::Invalid("square discriminant".into()));
    }
    if (&b - &d) % &two != BigInt::zero() {
        b -= 1;
    }
    let (p0, q0) = (b.clone(), two.clone());
    let (mut p, mut q) = (p0.clone(), q0.clone());
    let mut eps = k.one();
    for _ in 0..100_000 {
        // alpha = (p + sqrt D)/q
        let alpha = k.mul(&k.add(&k.from_int(&p), &s), &AlgebraicNum::new(k.one().num().to_vec(), q.clone()));
        eps = k.mul(&eps, &alpha);
        let a = (&p + &root) / &q;
        let np = &a * &q - &p;
        let nq = (&d - &np * &np) / &q;
        p = np;
        q = nq;
        if p == p0 && q == q0 {
            let n = k.norm(&eps);
            if !n.abs().is_one() || !eps.is_integral() {
                return Err(Error::Invalid("continued fraction did not produce a unit".into()));
            }
            return Ok(eps);
        }
    }
    Err(Error::CapExceeded("continued fraction period too long".into()))
}
