//! `p`-saturation of finitely generated subgroups of `S`-units, tested with
//! `p`-th power residue characters at degree-one primes outside `S`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;

use crate::error::{Error, Result};
use crate::linalg::{fp_rank, FpMat};
use crate::numfield::{AlgebraicNum, NumberField, PrimeIdeal};

fn mulmod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn powmod(mut a: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1 % m;
    a %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = mulmod(r, a, m);
        }
        a = mulmod(a, a, m);
        e >>= 1;
    }
    r
}

/// Linear form `r` with `x -> sum r_i x_i` the reduction `O -> O/P = F_q`
/// for a degree-one prime `P`.
pub(crate) fn residue_map(pr: &PrimeIdeal) -> Vec<u64> {
    let q = pr.p();
    let h = pr.hnf();
    let n = h.len();
    let qb = BigInt::from(q);
    let mut r = vec![0u64; n];
    for i in (0..n).rev() {
        if h[i][i] == qb {
            r[i] = 1;
            continue;
        }
        // omega_i + sum_{j>i} h_ij omega_j lies in P.
        let mut acc = 0u64;
        for j in i + 1..n {
            let c = h[i][j].mod_floor(&qb).to_u64().unwrap();
            acc = (acc + mulmod(c, r[j], q)) % q;
        }
        r[i] = (q - acc) % q;
    }
    // Normalize so that 1 maps to 1.
    let r0 = r[0];
    let inv = crate::poly::inv_mod_p(r0, q);
    r.iter().map(|&x| mulmod(x, inv, q)).collect()
}

pub(crate) fn reduce(r: &[u64], q: u64, a: &AlgebraicNum) -> Option<u64> {
    let qb = BigInt::from(q);
    let d = a.den().mod_floor(&qb).to_u64().unwrap();
    if d == 0 {
        return None;
    }
    let mut acc = 0u64;
    for (c, ri) in a.num().iter().zip(r) {
        let c = c.mod_floor(&qb).to_u64().unwrap();
        acc = (acc + mulmod(c, *ri, q)) % q;
    }
    if acc == 0 {
        return None;
    }
    Some(mulmod(acc, crate::poly::inv_mod_p(d, q), q))
}

/// Characters `x -> x^((q-1)/p)` at degree-one primes `q = 1 mod p` outside
/// `S`, as discrete logs in `Z/p`. Each entry of the result is one
/// character evaluated on every generator.
pub(crate) fn characters(
    k: &NumberField,
    gens: &[AlgebraicNum],
    s: &[PrimeIdeal],
    p: u64,
    count: usize,
) -> Result<Vec<Vec<u64>>> {
    if p > 2_000_000 {
        return Err(Error::Unsupported(format!("power residue characters of order {}", p)));
    }
    let below: Vec<u64> = s.iter().map(|pr| pr.p()).collect();
    let mut out = Vec::new();
    let mut t = 0u64;
    while out.len() < count {
        t += 1;
        if t > 200_000 {
            break;
        }
        let q = 1 + p * t;
        if !num_prime::nt_funcs::is_prime64(q) || below.contains(&q) {
            continue;
        }
        let e = (q - 1) / p;
        // A primitive p-th root of unity mod q and its discrete-log table.
        let zeta = (2..q).map(|h| powmod(h, e, q)).find(|&z| z != 1).unwrap();
        let mut table = std::collections::HashMap::with_capacity(p as usize);
        let mut z = 1u64;
        for i in 0..p {
            table.insert(z, i);
            z = mulmod(z, zeta, q);
        }
        for pr in k.primes_above(q)?.iter().filter(|pr| pr.f() == 1) {
            let r = residue_map(pr);
            let vals: Option<Vec<u64>> = gens
                .iter()
                .map(|g| reduce(&r, q, g).map(|x| *table.get(&powmod(x, e, q)).expect("p-th root of unity")))
                .collect();
            if let Some(v) = vals {
                out.push(v);
            }
            if out.len() >= count {
                break;
            }
        }
    }
    Ok(out)
}

/// Whether the group generated by `gens` (which must contain generators of
/// the roots of unity and of the units, and whose quotient by `p`-th powers
/// has dimension `dim`) is `p`-saturated in the `S`-units. `Ok(false)`
/// means the characters did not reach full rank.
pub(crate) fn is_saturated(k: &NumberField, gens: &[AlgebraicNum], s: &[PrimeIdeal], p: u64, dim: usize) -> Result<bool> {
    if dim == 0 {
        return Ok(true);
    }
    let want = 3 * dim + 24;
    let chars = characters(k, gens, s, p, want)?;
    if chars.is_empty() {
        return Ok(false);
    }
    // Rows = generators, columns = characters.
    let m: FpMat = (0..gens.len()).map(|j| chars.iter().map(|c| c[j]).collect()).collect();
    Ok(fp_rank(&m, p) == dim)
}
