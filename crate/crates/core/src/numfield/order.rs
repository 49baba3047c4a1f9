//! Round-2 maximal order computation.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::linalg::{fp_kernel, hnf, q_det, q_inverse, FpMat, IMat, QMat};
use crate::poly::{QPoly, ZPoly};

pub(super) type MultTable = Vec<Vec<Vec<BigInt>>>;

pub(super) fn table_mul(mult: &MultTable, a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let n = a.len();
    let mut out = vec![BigInt::zero(); n];
    for i in 0..n {
        if a[i].is_zero() {
            continue;
        }
        for j in 0..n {
            if b[j].is_zero() {
                continue;
            }
            let c = &a[i] * &b[j];
            for (k, m) in mult[i][j].iter().enumerate() {
                if !m.is_zero() {
                    out[k] += &c * m;
                }
            }
        }
    }
    out
}

fn table_mul_mod(mult: &MultTable, a: &[BigInt], b: &[BigInt], p: &BigInt) -> Vec<BigInt> {
    table_mul(mult, a, b).into_iter().map(|x| x.mod_floor(p)).collect()
}

fn unit_vec(n: usize, i: usize) -> Vec<BigInt> {
    let mut e = vec![BigInt::zero(); n];
    e[i] = BigInt::one();
    e
}

pub(super) fn pow_mod(mult: &MultTable, a: &[BigInt], mut e: u64, p: &BigInt, one: &[BigInt]) -> Vec<BigInt> {
    let mut base: Vec<BigInt> = a.iter().map(|x| x.mod_floor(p)).collect();
    let mut r = one.to_vec();
    while e > 0 {
        if e & 1 == 1 {
            r = table_mul_mod(mult, &r, &base, p);
        }
        e >>= 1;
        if e > 0 {
            base = table_mul_mod(mult, &base, &base, p);
        }
    }
    r
}

pub(super) fn to_fp(v: &[BigInt], p: u64) -> Vec<u64> {
    let pb = BigInt::from(p);
    v.iter().map(|x| x.mod_floor(&pb).to_u64().unwrap()).collect()
}

pub(super) fn from_fp(v: &[u64]) -> Vec<BigInt> {
    v.iter().map(|&x| BigInt::from(x)).collect()
}

fn transpose(m: &FpMat, cols: usize) -> FpMat {
    (0..cols).map(|c| m.iter().map(|r| r[c]).collect()).collect()
}

/// Left kernel `{x : x M = 0}` of an `F_p` matrix with `rows` rows.
pub(super) fn left_kernel(m: &FpMat, rows: usize, p: u64) -> FpMat {
    if m.is_empty() {
        return vec![];
    }
    let cols = m[0].len();
    fp_kernel(&transpose(m, cols), rows, p)
}

/// The `p`-radical of an order with structure constants `mult`, as an HNF
/// lattice containing `pO`. `one` holds the coordinates of 1.
pub(super) fn radical(mult: &MultTable, one: &[BigInt], p: u64) -> IMat {
    let n = one.len();
    let pb = BigInt::from(p);
    let mut j = 1u32;
    let mut pj = p as u128;
    while pj < n as u128 {
        pj *= p as u128;
        j += 1;
    }
    // Rows of F are the images of basis elements under x -> x^p.
    let f: Vec<Vec<BigInt>> = (0..n).map(|i| pow_mod(mult, &unit_vec(n, i), p, &pb, one)).collect();
    let mut g: Vec<Vec<BigInt>> = (0..n).map(|i| unit_vec(n, i)).collect();
    for _ in 0..j {
        g = g
            .iter()
            .map(|row| {
                let mut out = vec![BigInt::zero(); n];
                for (k, c) in row.iter().enumerate() {
                    if !c.is_zero() {
                        for (o, x) in out.iter_mut().zip(&f[k]) {
                            *o += c * x;
                        }
                    }
                }
                out.into_iter().map(|x| x.mod_floor(&pb)).collect()
            })
            .collect();
    }
    let gm: FpMat = g.iter().map(|r| to_fp(r, p)).collect();
    let ker = left_kernel(&gm, n, p);
    let gens: Vec<Vec<BigInt>> = ker.iter().map(|r| from_fp(r)).collect();
    hnf(&gens, n, Some(&pb))
}

/// Solves `y H = x` for an upper-triangular full-rank `H`; `None` if `y` is
/// not integral.
pub(super) fn solve_upper(h: &IMat, x: &[BigInt]) -> Option<Vec<BigInt>> {
    let n = x.len();
    let mut r = x.to_vec();
    let mut y = vec![BigInt::zero(); n];
    for i in 0..n {
        let (q, rem) = r[i].div_rem(&h[i][i]);
        if !rem.is_zero() {
            return None;
        }
        if !q.is_zero() {
            for k in i..n {
                r[k] -= &q * &h[i][k];
            }
        }
        y[i] = q;
    }
    Some(y)
}

/// Ring of multipliers `{x : x I ⊆ p I}` as an HNF lattice in order
/// coordinates (it contains `pO`).
fn multipliers(mult: &MultTable, rad: &IMat, p: u64) -> IMat {
    let n = rad.len();
    let m: FpMat = (0..n)
        .map(|i| {
            let mut row = Vec::with_capacity(n * n);
            for g in rad {
                let prod = table_mul(mult, &unit_vec(n, i), g);
                let y = solve_upper(rad, &prod).expect("radical is an ideal");
                row.extend(to_fp(&y, p));
            }
            row
        })
        .collect();
    let ker = left_kernel(&m, n, p);
    let gens: Vec<Vec<BigInt>> = ker.iter().map(|r| from_fp(r)).collect();
    hnf(&gens, n, Some(&BigInt::from(p)))
}

struct Order {
    b: QMat,
    mult: MultTable,
    one: Vec<BigInt>,
}

impl Order {
    fn new(f: &ZPoly, b: QMat) -> Result<Self> {
        let n = b.len();
        let b_inv = q_inverse(&b).ok_or_else(|| Error::Invalid("singular order basis".into()))?;
        let fq = f.to_q();
        let mut mult = vec![vec![vec![]; n]; n];
        for i in 0..n {
            for j in i..n {
                let prod = QPoly::new(b[i].clone()).mul(&QPoly::new(b[j].clone())).rem(&fq);
                let mut pc = prod.0;
                pc.resize(n, BigRational::zero());
                let c: Vec<BigInt> = (0..n)
                    .map(|k| {
                        let mut acc = BigRational::zero();
                        for (t, x) in pc.iter().enumerate() {
                            acc += x * &b_inv[t][k];
                        }
                        if acc.is_integer() {
                            Ok(acc.to_integer())
                        } else {
                            Err(Error::Invalid("order not closed under multiplication".into()))
                        }
                    })
                    .collect::<Result<_>>()?;
                mult[i][j] = c.clone();
                mult[j][i] = c;
            }
        }
        let mut one_pc = vec![BigRational::zero(); n];
        one_pc[0] = BigRational::one();
        let one: Vec<BigInt> = (0..n)
            .map(|k| {
                let mut acc = BigRational::zero();
                for (t, x) in one_pc.iter().enumerate() {
                    acc += x * &b_inv[t][k];
                }
                acc.to_integer()
            })
            .collect();
        Ok(Order { b, mult, one })
    }

    /// Enlarges the order at `p` once; `None` when already `p`-maximal.
    fn enlarge(&self, p: u64) -> Option<QMat> {
        let n = self.b.len();
        let rad = radical(&self.mult, &self.one, p);
        let u = multipliers(&self.mult, &rad, p);
        let pb = BigInt::from(p);
        let full = (0..n).all(|i| u[i][i] == pb);
        if full {
            return None;
        }
        let new_b: QMat = u
            .iter()
            .map(|row| {
                (0..n)
                    .map(|k| {
                        let mut acc = BigRational::zero();
                        for (t, c) in row.iter().enumerate() {
                            if !c.is_zero() {
                                acc += BigRational::from_integer(c.clone()) * &self.b[t][k];
                            }
                        }
                        acc / BigRational::from_integer(pb.clone())
                    })
                    .collect()
            })
            .collect();
        Some(new_b)
    }
}

/// Primes `p` with `p^2 | d`.
pub(super) fn square_divisors(d: &BigInt) -> Result<Vec<u64>> {
    if d.is_zero() {
        return Err(Error::Invalid("zero discriminant".into()));
    }
    let mag: BigUint = d.magnitude().clone();
    if mag.is_one() {
        return Ok(vec![]);
    }
    let (fac, rest) = num_prime::nt_funcs::factors(mag, None);
    if rest.map(|r| !r.is_empty()).unwrap_or(false) {
        return Err(Error::Unsupported(format!("could not factor discriminant {}", d)));
    }
    let mut out = Vec::new();
    for (p, e) in fac {
        if e >= 2 {
            let p = p.to_u64().ok_or_else(|| Error::Unsupported(format!("prime {} too large", p)))?;
            out.push(p);
        }
    }
    Ok(out)
}

/// Integral basis of `Q[x]/(f)` as `(numerators, denominator, disc, index)`
/// where row `i` of the numerators holds the power-basis coordinates of
/// `omega_i` times the denominator. Rows are lower triangular with
/// `omega_0 = 1`.
pub(super) fn integral_basis(f: &ZPoly) -> Result<(IMat, BigInt, BigInt, BigInt)> {
    let n = f.degree() as usize;
    let dpoly = f.discriminant();
    let mut b: QMat = (0..n)
        .map(|i| {
            let mut r = vec![BigRational::zero(); n];
            r[i] = BigRational::one();
            r
        })
        .collect();
    for p in square_divisors(&dpoly)? {
        loop {
            let ord = Order::new(f, b.clone())?;
            match ord.enlarge(p) {
                Some(nb) => b = nb,
                None => break,
            }
        }
    }
    let den = b.iter().flatten().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    // Lower-triangular HNF: reverse columns, take the usual HNF, reverse back.
    let rev: IMat = b
        .iter()
        .map(|r| r.iter().rev().map(|x| x.numer() * (&den / x.denom())).collect())
        .collect();
    let h = hnf(&rev, n, None);
    let mut num: IMat = h.into_iter().map(|r| r.into_iter().rev().collect()).collect();
    num.reverse();
    let detb = q_det(&b).abs();
    let index = (BigRational::one() / detb).to_integer();
    let disc = &dpoly / (&index * &index);
    debug_assert!(num[0][0] == den);
    Ok((num, den, disc, index))
}
