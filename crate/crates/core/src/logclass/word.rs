use num_bigint::{BigInt, BigUint};
use num_traits::Zero;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::numfield::AlgebraicNum;
use crate::padic::{ell_pow, reduce_signed};

/// Element of `Z_l ⊗ K^x` written as `prod x_i^{e_i}` with exponents
/// modulo `l^N`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FieldElementWord {
    ell: u64,
    prec: u32,
    degree: usize,
    #[serde(serialize_with = "serialize_factors")]
    factors: Vec<(AlgebraicNum, BigUint)>,
}

fn serialize_factors<S: serde::Serializer>(
    f: &[(AlgebraicNum, BigUint)],
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    let v: Vec<(&AlgebraicNum, String)> = f.iter().map(|(a, e)| (a, e.to_string())).collect();
    v.serialize(s)
}

impl FieldElementWord {
    /// The empty word of a field of degree `degree`.
    pub fn one(ell: u64, prec: u32, degree: usize) -> Self {
        FieldElementWord { ell, prec, degree, factors: Vec::new() }
    }

    /// The word `x`.
    pub fn from_element(ell: u64, prec: u32, x: &AlgebraicNum) -> Result<Self> {
        let mut w = Self::one(ell, prec, x.num().len());
        w.push(x.clone(), &BigInt::from(1))?;
        Ok(w)
    }

    pub fn ell(&self) -> u64 {
        self.ell
    }

    pub fn precision(&self) -> u32 {
        self.prec
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    /// Factors with exponents reduced modulo `l^N`.
    pub fn factors(&self) -> &[(AlgebraicNum, BigUint)] {
        &self.factors
    }

    /// Multiplies by `x^e`.
    pub fn push(&mut self, x: AlgebraicNum, e: &BigInt) -> Result<()> {
        if x.is_zero() {
            return Err(Error::Zero("zero factor in a word".into()));
        }
        if x.num().len() != self.degree {
            return Err(Error::Invalid("factor from another field".into()));
        }
        let m = ell_pow(self.ell, self.prec);
        let e = reduce_signed(e, &m);
        if e.is_zero() {
            return Ok(());
        }
        if let Some(slot) = self.factors.iter_mut().find(|(a, _)| *a == x) {
            slot.1 = (&slot.1 + e) % &m;
        } else {
            self.factors.push((x, e));
        }
        self.factors.retain(|(_, e)| !e.is_zero());
        Ok(())
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.ell != other.ell || self.degree != other.degree {
            return Err(Error::Invalid("words over different fields or primes".into()));
        }
        let mut out = self.clone();
        out.prec = self.prec.min(other.prec);
        let m = ell_pow(out.ell, out.prec);
        for (_, e) in out.factors.iter_mut() {
            *e %= &m;
        }
        out.factors.retain(|(_, e)| !e.is_zero());
        for (x, e) in &other.factors {
            out.push(x.clone(), &BigInt::from(e.clone()))?;
        }
        Ok(out)
    }

    pub fn pow(&self, k: &BigInt) -> Self {
        let m = ell_pow(self.ell, self.prec);
        let k = reduce_signed(k, &m);
        let mut out = self.clone();
        for (_, e) in out.factors.iter_mut() {
            *e = (&*e * &k) % &m;
        }
        out.factors.retain(|(_, e)| !e.is_zero());
        out
    }
}
