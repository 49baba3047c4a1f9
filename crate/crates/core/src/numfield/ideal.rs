use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::order::solve_upper;
use super::{AlgebraicNum, NumberField, PrimeIdeal};
use crate::error::{Error, Result};
use crate::linalg::{hnf, IMat};

/// Nonzero integral ideal of `O_K`, stored by its HNF in integral
/// coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Ideal {
    hnf: IMat,
}

impl Ideal {
    pub fn unit(n: usize) -> Self {
        Ideal {
            hnf: (0..n)
                .map(|i| {
                    let mut r = vec![BigInt::zero(); n];
                    r[i] = BigInt::one();
                    r
                })
                .collect(),
        }
    }

    /// Ideal generated by integral elements.
    pub fn from_generators(k: &NumberField, gens: &[AlgebraicNum]) -> Result<Self> {
        let n = k.degree();
        let first = gens
            .iter()
            .find(|g| !g.is_zero())
            .ok_or_else(|| Error::Zero("ideal generated by zero".into()))?;
        if gens.iter().any(|g| !g.is_integral()) {
            return Err(Error::Invalid("generators must be integral".into()));
        }
        let m = k.norm(first).to_integer().abs();
        let mut rows = Vec::new();
        for g in gens {
            rows.extend(k.mult_matrix(g.num()));
        }
        Ok(Ideal { hnf: hnf(&rows, n, Some(&m)) })
    }

    pub fn principal(k: &NumberField, a: &AlgebraicNum) -> Result<Self> {
        Ideal::from_generators(k, std::slice::from_ref(a))
    }

    pub fn from_prime(pr: &PrimeIdeal) -> Self {
        Ideal { hnf: pr.hnf().clone() }
    }

    pub fn hnf(&self) -> &IMat {
        &self.hnf
    }

    /// Absolute norm `[O_K : I]`.
    pub fn norm(&self) -> BigInt {
        self.hnf.iter().enumerate().map(|(i, r)| r[i].clone()).product()
    }

    pub fn is_unit(&self) -> bool {
        self.norm().is_one()
    }

    pub fn contains(&self, x: &[BigInt]) -> bool {
        solve_upper(&self.hnf, x).is_some()
    }

    pub fn mul(&self, k: &NumberField, o: &Ideal) -> Ideal {
        let n = k.degree();
        let m = self.norm() * o.norm();
        let mut rows = Vec::with_capacity(n * n);
        for a in &self.hnf {
            for b in &o.hnf {
                rows.push(k.mul_coords(a, b));
            }
        }
        Ideal { hnf: hnf(&rows, n, Some(&m)) }
    }

    pub fn pow(&self, k: &NumberField, e: u32) -> Ideal {
        let mut r = Ideal::unit(k.degree());
        for _ in 0..e {
            r = r.mul(k, self);
        }
        r
    }

    /// Product `prod P^{v}` over nonnegative exponents.
    pub fn from_factorization(k: &NumberField, f: &[(PrimeIdeal, i64)]) -> Result<Ideal> {
        let mut r = Ideal::unit(k.degree());
        for (pr, v) in f {
            if *v < 0 {
                return Err(Error::Invalid("negative exponent in integral ideal".into()));
            }
            r = r.mul(k, &Ideal::from_prime(pr).pow(k, *v as u32));
        }
        Ok(r)
    }
}
