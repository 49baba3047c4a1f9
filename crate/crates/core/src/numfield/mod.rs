//! Number fields at desk scale: integral bases, elements, ideals in Hermite
//! normal form, prime decomposition and local data above `l`.

mod element;
mod ideal;
mod local;
mod order;
mod primes;

use std::collections::BTreeMap;
use std::sync::{Arc, RwLock};

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

pub use element::AlgebraicNum;
pub use ideal::Ideal;
pub use local::LocalPlace;
pub use primes::PrimeIdeal;
pub(crate) use primes::factor_primes;

use crate::error::{Error, Result};
use crate::linalg::{q_inverse, IMat, QMat};
use crate::poly::{factor_monic, ZPoly};

/// Limits applied when building fields.
#[derive(Clone, Debug, Serialize)]
pub struct FieldCaps {
    pub max_degree: usize,
    /// Bound on `|disc(K)|`.
    #[serde(serialize_with = "crate::ser::display")]
    pub max_disc: BigUint,
}

impl Default for FieldCaps {
    fn default() -> Self {
        FieldCaps { max_degree: 8, max_disc: BigUint::from(10u64).pow(10) }
    }
}

/// A number field `Q[x]/(f)` with its ring of integers.
///
/// Elements are written on the integral basis `omega_0 = 1, ..., omega_{n-1}`,
/// where `omega_i = (sum_j basis_num[i][j] x^j) / basis_den`.
pub struct NumberField {
    poly: ZPoly,
    n: usize,
    basis_num: IMat,
    basis_den: BigInt,
    to_basis: QMat,
    mult: Vec<Vec<Vec<BigInt>>>,
    disc: BigInt,
    index: BigInt,
    r1: usize,
    r2: usize,
    primes: RwLock<BTreeMap<u64, Arc<Vec<PrimeIdeal>>>>,
}

impl Clone for NumberField {
    fn clone(&self) -> Self {
        NumberField {
            poly: self.poly.clone(),
            n: self.n,
            basis_num: self.basis_num.clone(),
            basis_den: self.basis_den.clone(),
            to_basis: self.to_basis.clone(),
            mult: self.mult.clone(),
            disc: self.disc.clone(),
            index: self.index.clone(),
            r1: self.r1,
            r2: self.r2,
            primes: RwLock::new(self.primes.read().expect("cache").clone()),
        }
    }
}

impl std::fmt::Debug for NumberField {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("NumberField").field("poly", &self.poly.to_string()).field("disc", &self.disc).finish()
    }
}

impl PartialEq for NumberField {
    fn eq(&self, other: &Self) -> bool {
        self.poly == other.poly
    }
}

/// Builds the field defined by a monic irreducible polynomial.
pub fn build_field(f: &ZPoly, caps: &FieldCaps) -> Result<NumberField> {
    if f.degree() < 1 {
        return Err(Error::Invalid(format!("`{}` has no roots", f)));
    }
    if !f.is_monic() {
        return Err(Error::Invalid(format!("`{}` is not monic", f)));
    }
    let n = f.degree() as usize;
    if n > caps.max_degree {
        return Err(Error::CapExceeded(format!("degree {} above cap {}", n, caps.max_degree)));
    }
    if f.discriminant().is_zero() {
        return Err(Error::Invalid(format!("`{}` is not squarefree", f)));
    }
    let factors = factor_monic(f)?;
    if factors.len() > 1 {
        return Err(Error::Invalid(format!("`{}` is reducible", f)));
    }
    let (basis_num, basis_den, disc, index) = order::integral_basis(f)?;
    if disc.magnitude() > &caps.max_disc {
        return Err(Error::CapExceeded(format!("|disc| = {} above cap {}", disc.abs(), caps.max_disc)));
    }
    let r1 = f.count_real_roots();
    let r2 = (n - r1) / 2;
    NumberField::from_parts(f.clone(), basis_num, basis_den, disc, index, r1, r2)
}

/// Parses and builds a field.
pub fn parse_field(s: &str, caps: &FieldCaps) -> Result<NumberField> {
    build_field(&ZPoly::parse(s)?, caps)
}

impl NumberField {
    fn from_parts(
        poly: ZPoly,
        basis_num: IMat,
        basis_den: BigInt,
        disc: BigInt,
        index: BigInt,
        r1: usize,
        r2: usize,
    ) -> Result<Self> {
        let n = poly.degree() as usize;
        let b: QMat = basis_num
            .iter()
            .map(|r| r.iter().map(|x| BigRational::new(x.clone(), basis_den.clone())).collect())
            .collect();
        let to_basis = q_inverse(&b).ok_or_else(|| Error::Invalid("singular integral basis".into()))?;
        let mut k = NumberField {
            poly,
            n,
            basis_num,
            basis_den,
            to_basis,
            mult: vec![],
            disc,
            index,
            r1,
            r2,
            primes: RwLock::new(BTreeMap::new()),
        };
        let omegas: Vec<Vec<BigRational>> = b;
        let fq = k.poly.to_q();
        let mut mult = vec![vec![vec![]; n]; n];
        for i in 0..n {
            for j in i..n {
                let prod = crate::poly::QPoly::new(omegas[i].clone()).mul(&crate::poly::QPoly::new(omegas[j].clone())).rem(&fq);
                let mut pc = prod.0.clone();
                pc.resize(n, BigRational::zero());
                let c = k.power_to_basis_q(&pc);
                let ci: Vec<BigInt> = c
                    .iter()
                    .map(|x| {
                        if x.is_integer() {
                            Ok(x.to_integer())
                        } else {
                            Err(Error::Invalid("integral basis is not closed under multiplication".into()))
                        }
                    })
                    .collect::<Result<_>>()?;
                mult[i][j] = ci.clone();
                mult[j][i] = ci;
            }
        }
        k.mult = mult;
        Ok(k)
    }

    pub fn poly(&self) -> &ZPoly {
        &self.poly
    }

    pub fn degree(&self) -> usize {
        self.n
    }

    pub fn disc(&self) -> &BigInt {
        &self.disc
    }

    /// Index `[O_K : Z[x]]`.
    pub fn index(&self) -> &BigInt {
        &self.index
    }

    pub fn signature(&self) -> (usize, usize) {
        (self.r1, self.r2)
    }

    /// Unit rank `r1 + r2 - 1`.
    pub fn unit_rank(&self) -> usize {
        self.r1 + self.r2 - 1
    }

    /// Integral basis as rational power-basis rows.
    pub fn integral_basis(&self) -> QMat {
        self.basis_num
            .iter()
            .map(|r| r.iter().map(|x| BigRational::new(x.clone(), self.basis_den.clone())).collect())
            .collect()
    }

    /// Structure constants: `omega_i * omega_j = sum_k mult[i][j][k] omega_k`.
    pub fn mult_table(&self) -> &Vec<Vec<Vec<BigInt>>> {
        &self.mult
    }

    fn power_to_basis_q(&self, pc: &[BigRational]) -> Vec<BigRational> {
        (0..self.n)
            .map(|j| {
                let mut acc = BigRational::zero();
                for (i, c) in pc.iter().enumerate() {
                    if !c.is_zero() {
                        acc += c * &self.to_basis[i][j];
                    }
                }
                acc
            })
            .collect()
    }

    /// Element with the given power-basis coordinates.
    pub fn from_power_basis(&self, pc: &[BigRational]) -> AlgebraicNum {
        let mut v = pc.to_vec();
        let fq = self.poly.to_q();
        let reduced = crate::poly::QPoly::new(v.clone()).rem(&fq);
        v = reduced.0;
        v.resize(self.n, BigRational::zero());
        AlgebraicNum::from_rationals(&self.power_to_basis_q(&v))
    }

    /// Power-basis coordinates of an element.
    pub fn to_power_basis(&self, a: &AlgebraicNum) -> Vec<BigRational> {
        let mut out = vec![BigRational::zero(); self.n];
        for (i, c) in a.num().iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for j in 0..self.n {
                if !self.basis_num[i][j].is_zero() {
                    out[j] += BigRational::new(c * &self.basis_num[i][j], self.basis_den.clone() * a.den());
                }
            }
        }
        out
    }

    /// The generator `x` of the defining polynomial.
    pub fn theta(&self) -> AlgebraicNum {
        let mut pc = vec![BigRational::zero(); self.n.max(2)];
        pc[1] = BigRational::one();
        self.from_power_basis(&pc)
    }

    pub fn from_int(&self, k: &BigInt) -> AlgebraicNum {
        let mut v = vec![BigInt::zero(); self.n];
        v[0] = k.clone();
        AlgebraicNum::new(v, BigInt::one())
    }

    pub fn from_i64(&self, k: i64) -> AlgebraicNum {
        self.from_int(&BigInt::from(k))
    }

    pub fn one(&self) -> AlgebraicNum {
        self.from_i64(1)
    }

    /// Product of integral coordinate vectors.
    pub(crate) fn mul_coords(&self, a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
        let n = self.n;
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
                for (k, m) in self.mult[i][j].iter().enumerate() {
                    if !m.is_zero() {
                        out[k] += &c * m;
                    }
                }
            }
        }
        out
    }

    /// Product of integral coordinate vectors modulo `m`.
    pub(crate) fn mul_coords_mod(&self, a: &[BigInt], b: &[BigInt], m: &BigInt) -> Vec<BigInt> {
        use num_integer::Integer;
        self.mul_coords(a, b).into_iter().map(|x| x.mod_floor(m)).collect()
    }

    /// Matrix of multiplication by an integral element: row `i` holds the
    /// coordinates of `a * omega_i`.
    pub(crate) fn mult_matrix(&self, a: &[BigInt]) -> IMat {
        (0..self.n)
            .map(|i| {
                let mut e = vec![BigInt::zero(); self.n];
                e[i] = BigInt::one();
                self.mul_coords(a, &e)
            })
            .collect()
    }

    pub fn mul(&self, a: &AlgebraicNum, b: &AlgebraicNum) -> AlgebraicNum {
        AlgebraicNum::new(self.mul_coords(a.num(), b.num()), a.den() * b.den())
    }

    pub fn add(&self, a: &AlgebraicNum, b: &AlgebraicNum) -> AlgebraicNum {
        let num = a.num().iter().zip(b.num()).map(|(x, y)| x * b.den() + y * a.den()).collect();
        AlgebraicNum::new(num, a.den() * b.den())
    }

    pub fn sub(&self, a: &AlgebraicNum, b: &AlgebraicNum) -> AlgebraicNum {
        self.add(a, &a_neg(b))
    }

    pub fn pow(&self, a: &AlgebraicNum, e: i64) -> Result<AlgebraicNum> {
        if e < 0 {
            return self.pow(&self.inv(a)?, -e);
        }
        let mut base = a.clone();
        let mut r = self.one();
        let mut e = e as u64;
        while e > 0 {
            if e & 1 == 1 {
                r = self.mul(&r, &base);
            }
            e >>= 1;
            if e > 0 {
                base = self.mul(&base, &base);
            }
        }
        Ok(r)
    }

    /// Norm `N_{K/Q}`.
    pub fn norm(&self, a: &AlgebraicNum) -> BigRational {
        let m = self.mult_matrix(a.num());
        let d = crate::linalg::det(&m);
        BigRational::new(d, num_traits::pow(a.den().clone(), self.n))
    }

    /// Trace `Tr_{K/Q}`.
    pub fn trace(&self, a: &AlgebraicNum) -> BigRational {
        let m = self.mult_matrix(a.num());
        let t: BigInt = (0..self.n).map(|i| m[i][i].clone()).sum();
        BigRational::new(t, a.den().clone())
    }

    pub fn inv(&self, a: &AlgebraicNum) -> Result<AlgebraicNum> {
        if a.is_zero() {
            return Err(Error::Zero("inverse of zero".into()));
        }
        // Solve x * M_a = e_0 for the row vector x, M_a the multiplication
        // matrix of the numerator.
        let m: QMat = self
            .mult_matrix(a.num())
            .into_iter()
            .map(|r| r.into_iter().map(BigRational::from_integer).collect())
            .collect();
        let inv = q_inverse(&m).ok_or_else(|| Error::Zero("singular multiplication matrix".into()))?;
        let one = self.one();
        let mut x = vec![BigRational::zero(); self.n];
        for (i, c) in one.num().iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for j in 0..self.n {
                x[j] += BigRational::from_integer(c.clone()) * &inv[i][j];
            }
        }
        let x = AlgebraicNum::from_rationals(&x);
        Ok(AlgebraicNum::new(x.num().iter().map(|c| c * a.den()).collect(), x.den().clone()))
    }

    pub fn div(&self, a: &AlgebraicNum, b: &AlgebraicNum) -> Result<AlgebraicNum> {
        Ok(self.mul(a, &self.inv(b)?))
    }

    /// Minimal polynomial test: `g(a) = 0` for an integer polynomial `g`.
    pub fn is_root(&self, g: &ZPoly, a: &AlgebraicNum) -> bool {
        let mut acc = AlgebraicNum::zero(self.n);
        for c in g.coeffs().iter().rev() {
            acc = self.add(&self.mul(&acc, a), &self.from_int(c));
        }
        acc.is_zero()
    }

    /// Rational prime as `u64`.
    pub(crate) fn small_prime(p: &BigInt) -> Result<u64> {
        p.to_u64()
            .filter(|&x| x < (1u64 << 62))
            .ok_or_else(|| Error::Unsupported(format!("prime {} too large for residue arithmetic", p)))
    }
}

fn a_neg(a: &AlgebraicNum) -> AlgebraicNum {
    AlgebraicNum::new(a.num().iter().map(|x| -x).collect(), a.den().clone())
}

#[cfg(test)]
mod tests;
