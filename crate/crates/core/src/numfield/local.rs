use std::sync::Mutex;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::One;

use super::order::{from_fp, to_fp};
use super::{AlgebraicNum, Ideal, NumberField, PrimeIdeal};
use crate::error::{Error, Result};
use crate::linalg::{fp_row_basis, fp_solve_left, FpMat};
use crate::padic::{val_bigint, PadicScalar};
use crate::zlmod::ZlMatrix;

/// A place of `K` above `l` with the idempotent cutting out its
/// completion inside `O_K ⊗ Z_l`.
#[derive(Debug)]
pub struct LocalPlace {
    prime: PrimeIdeal,
    lifted: Mutex<(u32, Vec<BigInt>)>,
}

impl Clone for LocalPlace {
    fn clone(&self) -> Self {
        LocalPlace {
            prime: self.prime.clone(),
            lifted: Mutex::new(self.lifted.lock().expect("lift cache").clone()),
        }
    }
}

fn image_mod(ideal: &Ideal, p: u64) -> FpMat {
    let rows: FpMat = ideal.hnf().iter().map(|r| to_fp(r, p)).collect();
    fp_row_basis(&rows, p)
}

impl NumberField {
    /// Places above `p` with their idempotents.
    pub fn local_places(&self, p: u64) -> Result<Vec<LocalPlace>> {
        let primes = self.primes_above(p)?;
        let powers: Vec<Ideal> = primes.iter().map(|pr| Ideal::from_prime(pr).pow(self, pr.e())).collect();
        let one = to_fp(self.one().num(), p);
        let mut out = Vec::new();
        for (i, pr) in primes.iter().enumerate() {
            let a = image_mod(&powers[i], p);
            let mut rest = Ideal::unit(self.degree());
            for (j, q) in powers.iter().enumerate() {
                if j != i {
                    rest = rest.mul(self, q);
                }
            }
            let b = image_mod(&rest, p);
            let mut stacked = a.clone();
            stacked.extend(b.iter().cloned());
            let x = fp_solve_left(&stacked, &one, p)
                .ok_or_else(|| Error::Invalid(format!("no idempotent at {}", pr)))?;
            let mut eps = vec![0u64; self.degree()];
            for (c, row) in x[a.len()..].iter().zip(&b) {
                for (e, r) in eps.iter_mut().zip(row) {
                    *e = ((*e as u128 + *c as u128 * *r as u128) % p as u128) as u64;
                }
            }
            let eps0 = from_fp(&eps);
            out.push(LocalPlace { prime: pr.clone(), lifted: Mutex::new((1, eps0)) });
        }
        Ok(out)
    }
}

impl LocalPlace {
    pub fn prime(&self) -> &PrimeIdeal {
        &self.prime
    }

    /// Local degree `e f`.
    pub fn local_degree(&self) -> u32 {
        self.prime.e() * self.prime.f()
    }

    /// Idempotent modulo `p^m`.
    pub fn idempotent(&self, k: &NumberField, m: u32) -> Vec<BigInt> {
        let p = BigInt::from(self.prime.p());
        let mut guard = self.lifted.lock().expect("lift cache");
        while guard.0 < m {
            let next = (guard.0 * 2).min(m);
            let modulus = num_traits::pow(p.clone(), next as usize);
            let e = &guard.1;
            let e2 = k.mul_coords_mod(e, e, &modulus);
            let e3 = k.mul_coords_mod(&e2, e, &modulus);
            let ne: Vec<BigInt> =
                e2.iter().zip(&e3).map(|(a, b)| (BigInt::from(3) * a - BigInt::from(2) * b).mod_floor(&modulus)).collect();
            *guard = (next, ne);
        }
        let modulus = num_traits::pow(p, m as usize);
        guard.1.iter().map(|x| x.mod_floor(&modulus)).collect()
    }

    /// Local norm `N_{K_P/Q_p}(a)` with relative precision `prec`.
    pub fn local_norm(&self, k: &NumberField, a: &AlgebraicNum, prec: u32) -> Result<PadicScalar> {
        if a.is_zero() {
            return Err(Error::Zero("local norm of zero".into()));
        }
        let p = self.prime.p();
        let pb = BigInt::from(p);
        let v = self.prime.valuation_integral(k, a.num())?;
        let m = prec + 2 + self.prime.f() * v as u32;
        let modulus = num_traits::pow(pb.clone(), m as usize);
        let eps = self.idempotent(k, m);
        let one = k.one();
        let ea = k.mul_coords_mod(&eps, a.num(), &modulus);
        let y: Vec<BigInt> =
            ea.iter().zip(&eps).zip(one.num()).map(|((x, e), o)| (x + o - e).mod_floor(&modulus)).collect();
        let mm = k.mult_matrix(&y);
        let n = k.degree();
        let z = ZlMatrix::from_fn(p, m, n, n, |i, j| mm[i][j].clone());
        let det = z.det();
        let mut out = det;
        if !a.den().is_one() {
            let d = num_traits::pow(a.den().clone(), self.local_degree() as usize);
            let dv = val_bigint(p, &d);
            let ds = PadicScalar::from_bigint(p, &d, m + dv);
            out = out.checked_div(&ds)?;
        }
        if out.is_zero() {
            return Err(Error::Precision(format!("local norm at {} vanished at precision {}", self.prime, m)));
        }
        Ok(out.with_rel_prec(prec))
    }
}
