//! Logarithmic valuations, degrees and divisors, and the logarithmic class
//! group `C_K` with its degree-zero part.
//!
//! Away from `l` the logarithmic valuation is the ordinary one. At a place
//! `L | l` it is `-Log N_L(x) / deg(L)`, where `Log` is the Iwasawa
//! logarithm of `Q_l` and `deg(L)` generates `Log N_L(K_L^x)` as a
//! `Z_l`-module.

mod group;
mod word;

use std::collections::BTreeMap;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::ser::SerializeMap;
use serde::{Serialize, Serializer};

pub use group::{log_class_group, GroupInvariants, GrossKuzmin, LogClassGroup, LogClassReport};
pub use word::FieldElementWord;

use crate::error::{Error, Result};
use crate::numfield::{AlgebraicNum, LocalPlace, NumberField, PrimeIdeal};
use crate::padic::{ell_pow, reduce_signed, PadicScalar};
use crate::units_classes::SearchCaps;

/// Extra `l`-adic digits carried through intermediate computations.
pub const GUARD_DIGITS: u32 = 8;
const SAMPLE_SEED: u64 = 0x6c6f_6763_6c61_7373;

/// `1 + l`, or `5` for `l = 2`: `Log` of it generates `Log(Z_l^x)`.
pub fn cyclotomic_unit(ell: u64) -> u64 {
    if ell == 2 {
        5
    } else {
        1 + ell
    }
}

/// Valuation of `Log(Z_l^x)`: 1, or 2 for `l = 2`.
pub fn cyclotomic_valuation(ell: u64) -> u32 {
    if ell == 2 {
        2
    } else {
        1
    }
}

/// A place of `K` with its logarithmic degree.
#[derive(Clone, Debug, Serialize)]
pub struct LogPlace {
    #[serde(serialize_with = "crate::ser::display")]
    prime: PrimeIdeal,
    #[serde(serialize_with = "crate::ser::display")]
    degree: PadicScalar,
    /// Logarithmic ramification and residue degrees over `Q`.
    e_tilde: u64,
    f_tilde: u64,
    #[serde(skip)]
    local: Option<LocalPlace>,
    /// Elements whose logarithmic valuation here is a unit of `Z_l`.
    #[serde(skip)]
    witnesses: Vec<AlgebraicNum>,
}

impl LogPlace {
    pub fn prime(&self) -> &PrimeIdeal {
        &self.prime
    }

    pub fn degree(&self) -> &PadicScalar {
        &self.degree
    }

    /// True for places above `l`.
    pub fn above_ell(&self) -> bool {
        self.local.is_some()
    }

    pub fn e_tilde(&self) -> u64 {
        self.e_tilde
    }

    pub fn f_tilde(&self) -> u64 {
        self.f_tilde
    }

    pub fn witnesses(&self) -> &[AlgebraicNum] {
        &self.witnesses
    }
}

/// Formal `Z_l`-combination of places.
#[derive(Clone, Debug, PartialEq)]
pub struct LogDivisor {
    ell: u64,
    coeffs: BTreeMap<PrimeIdeal, PadicScalar>,
}

impl LogDivisor {
    pub fn zero(ell: u64) -> Self {
        LogDivisor { ell, coeffs: BTreeMap::new() }
    }

    pub fn ell(&self) -> u64 {
        self.ell
    }

    /// Coefficient at `pr`, or `None` outside the support.
    pub fn coefficient(&self, pr: &PrimeIdeal) -> Option<&PadicScalar> {
        self.coeffs.get(pr)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&PrimeIdeal, &PadicScalar)> {
        self.coeffs.iter()
    }

    pub fn support(&self) -> Vec<&PrimeIdeal> {
        self.coeffs.keys().collect()
    }

    /// Adds `c * pr`, dropping coefficients that vanish at precision.
    pub fn add_term(&mut self, pr: PrimeIdeal, c: PadicScalar) -> Result<()> {
        let next = match self.coeffs.remove(&pr) {
            Some(old) => old.checked_add(&c)?,
            None => c,
        };
        if !next.is_zero() {
            self.coeffs.insert(pr, next);
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        let mut out = self.clone();
        for (pr, c) in &other.coeffs {
            out.add_term(pr.clone(), c.clone())?;
        }
        Ok(out)
    }

    pub fn scale(&self, k: &PadicScalar) -> Result<Self> {
        let mut out = LogDivisor::zero(self.ell);
        for (pr, c) in &self.coeffs {
            out.add_term(pr.clone(), c.checked_mul(k)?)?;
        }
        Ok(out)
    }

    /// Every coefficient vanishes modulo `l^prec`.
    pub fn is_zero_at(&self, prec: u32) -> bool {
        self.coeffs.values().all(|c| c.is_zero() || c.valuation_bound() >= prec as i64)
    }

    /// Equality of coefficients modulo `l^prec`.
    pub fn agrees(&self, other: &Self, prec: u32) -> Result<bool> {
        Ok(self.add(&other.scale(&PadicScalar::from_i64(self.ell, -1, prec + 64))?)?.is_zero_at(prec))
    }
}

impl Serialize for LogDivisor {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut m = s.serialize_map(Some(self.coeffs.len()))?;
        for (pr, c) in &self.coeffs {
            m.serialize_entry(&pr.to_string(), &c.to_string())?;
        }
        m.end()
    }
}

/// Logarithmic arithmetic of one field at a fixed prime `l` and precision.
#[derive(Clone, Debug)]
pub struct LogContext {
    field: Arc<NumberField>,
    ell: u64,
    prec: u32,
    work: u32,
    ell_places: Vec<LogPlace>,
}

fn check_ell(ell: u64) -> Result<()> {
    if ell < 2 || !num_prime::nt_funcs::is_prime64(ell) || ell > 1 << 20 {
        return Err(Error::Invalid(format!("l = {} is not a supported prime", ell)));
    }
    Ok(())
}

impl LogContext {
    /// Context at precision `prec` (results are reported modulo `l^prec`).
    pub fn new(field: Arc<NumberField>, ell: u64, prec: u32) -> Result<Self> {
        Self::with_caps(field, ell, prec, &SearchCaps::default())
    }

    /// As [`LogContext::new`], with `caps.degree_samples` random samples.
    pub fn with_caps(field: Arc<NumberField>, ell: u64, prec: u32, caps: &SearchCaps) -> Result<Self> {
        check_ell(ell)?;
        if prec == 0 {
            return Err(Error::Invalid("precision must be positive".into()));
        }
        let work = prec + GUARD_DIGITS;
        let mut ctx = LogContext { field, ell, prec, work, ell_places: Vec::new() };
        let locals = ctx.field.local_places(ell)?;
        let samples = ctx.samples(caps.degree_samples);
        for local in locals {
            let place = ctx.normalize(local, &samples)?;
            ctx.ell_places.push(place);
        }
        Ok(ctx)
    }

    pub fn field(&self) -> &Arc<NumberField> {
        &self.field
    }

    pub fn ell(&self) -> u64 {
        self.ell
    }

    pub fn precision(&self) -> u32 {
        self.prec
    }

    /// Internal precision, `precision + GUARD_DIGITS`.
    pub fn work_precision(&self) -> u32 {
        self.work
    }

    pub fn ell_places(&self) -> &[LogPlace] {
        &self.ell_places
    }

    /// Sampling set for degree normalization, in a fixed order.
    fn samples(&self, random: usize) -> Vec<AlgebraicNum> {
        let k = &*self.field;
        let n = k.degree();
        let ell = self.ell as i64;
        let mut out = vec![k.from_i64(1 + ell)];
        for q in [2i64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47] {
            if q != ell {
                out.push(k.from_i64(q));
            }
        }
        let basis: Vec<AlgebraicNum> = (0..n)
            .map(|i| {
                let mut v = vec![BigInt::zero(); n];
                v[i] = BigInt::one();
                AlgebraicNum::new(v, BigInt::one())
            })
            .collect();
        for w in basis.iter().skip(1) {
            out.push(w.clone());
            for j in 1..=(ell + 1).min(8) {
                out.push(k.add(w, &k.from_i64(j)));
            }
            out.push(k.add(&k.mul(w, &k.from_i64(ell)), &k.one()));
        }
        for (i, a) in basis.iter().enumerate().skip(1) {
            for b in basis.iter().skip(i) {
                out.push(k.add(&k.mul(a, b), &k.one()));
            }
        }
        let mut rng = ChaCha8Rng::seed_from_u64(SAMPLE_SEED);
        let bound = (ell * ell).clamp(4, 50);
        for _ in 0..random {
            let c: Vec<i64> = (0..n).map(|_| rng.random_range(-bound..=bound)).collect();
            out.push(AlgebraicNum::from_ints(&c));
        }
        out.retain(|x| !x.is_zero());
        out
    }

    /// Degree of a place above `l`: `f~ Log(1 + l~)`, where `l^c` with
    /// `c = v(f~) + v(Log(1 + l~))` is the minimal valuation of `Log N_L(x)`
    /// over the samples and the prime-to-`l` part of `f~` is that of the
    /// residue degree.
    fn normalize(&self, local: LocalPlace, samples: &[AlgebraicNum]) -> Result<LogPlace> {
        let k = &*self.field;
        let ell = self.ell;
        let sample_prec = self.work + 16;
        let mut best: Option<i64> = None;
        let mut witnesses: Vec<AlgebraicNum> = Vec::new();
        for x in samples {
            let n = local.local_norm(k, x, sample_prec)?;
            let lg = n.iwasawa_log()?;
            let Some(v) = lg.valuation() else { continue };
            match best {
                Some(b) if v > b => {}
                Some(b) if v == b => {
                    if witnesses.len() < 2 {
                        witnesses.push(x.clone());
                    }
                }
                _ => {
                    best = Some(v);
                    witnesses = vec![x.clone()];
                }
            }
        }
        let c = best.ok_or_else(|| Error::Precision(format!("no sample with nonzero log norm at {}", local.prime())))?;
        let c0 = cyclotomic_valuation(ell) as i64;
        if c < c0 || c - c0 > 16 {
            return Err(Error::Invalid(format!("unexpected log norm valuation {} at {}", c, local.prime())));
        }
        let pr = local.prime().clone();
        let mut f_coprime = pr.f() as u64;
        while f_coprime.is_multiple_of(ell) {
            f_coprime /= ell;
        }
        let f_tilde = ell.pow((c - c0) as u32) * f_coprime;
        let local_degree = (pr.e() * pr.f()) as u64;
        if !local_degree.is_multiple_of(f_tilde) {
            return Err(Error::Invalid(format!("logarithmic degree {} does not divide {} at {}", f_tilde, local_degree, pr)));
        }
        let degree = log_cyclotomic(ell, self.work + 32)?.scale(&BigInt::from(f_tilde));
        Ok(LogPlace {
            prime: pr,
            degree,
            e_tilde: local_degree / f_tilde,
            f_tilde,
            local: Some(local),
            witnesses,
        })
    }

    /// The place attached to `pr`.
    pub fn place(&self, pr: &PrimeIdeal) -> Result<LogPlace> {
        if pr.p() == self.ell {
            return self
                .ell_places
                .iter()
                .find(|q| &q.prime == pr)
                .cloned()
                .ok_or_else(|| Error::Invalid(format!("{} is not a prime of this field", pr)));
        }
        let norm = PadicScalar::from_bigint(self.ell, &pr.norm(), self.work + 32);
        let degree = norm.iwasawa_log()?;
        let witness = self.uniformizer(pr);
        Ok(LogPlace {
            prime: pr.clone(),
            degree,
            e_tilde: pr.e() as u64,
            f_tilde: pr.f() as u64,
            local: None,
            witnesses: vec![witness],
        })
    }

    /// An element of `P` outside `P^2`.
    fn uniformizer(&self, pr: &PrimeIdeal) -> AlgebraicNum {
        let k = &*self.field;
        let p = k.from_i64(pr.p() as i64);
        if pr.e() == 1 {
            return p;
        }
        let g = pr.generator().map(|g| AlgebraicNum::new(g.to_vec(), BigInt::one()));
        match g {
            Some(g) if pr.valuation(k, &g).ok() == Some(1) => g,
            Some(g) => k.add(&g, &p),
            None => p,
        }
    }

    /// `deg(place)`.
    pub fn log_degree_of_place(&self, place: &LogPlace) -> PadicScalar {
        place.degree.clone()
    }

    /// Logarithmic valuation of a single element, modulo `l^work`.
    pub fn element_valuation(&self, x: &AlgebraicNum, place: &LogPlace) -> Result<PadicScalar> {
        if x.is_zero() {
            return Err(Error::Zero("logarithmic valuation of zero".into()));
        }
        let k = &*self.field;
        let Some(local) = &place.local else {
            let v = place.prime.valuation(k, x)?;
            return Ok(self.integer(&BigInt::from(v)));
        };
        let c = place.degree.valuation().expect("nonzero degree") as u32;
        let n = local.local_norm(k, x, self.work + c + 4)?;
        let lg = n.iwasawa_log()?;
        let v = (-lg).checked_div(&place.degree)?;
        if !v.is_zero() && v.valuation_bound() < 0 {
            return Err(Error::Invalid(format!("non-integral logarithmic valuation at {}", place.prime)));
        }
        if v.abs_prec() < self.work as i64 {
            return Err(Error::Precision(format!("logarithmic valuation at {} lost precision", place.prime)));
        }
        Ok(v.with_abs_prec(self.work as i64))
    }

    /// `n` as an element of `Z_l` known modulo `l^work`.
    fn integer(&self, n: &BigInt) -> PadicScalar {
        PadicScalar::from_residue(self.ell, &reduce_signed(n, &ell_pow(self.ell, self.work)), self.work)
    }

    /// Logarithmic valuation of a word, modulo `l^precision`.
    pub fn log_valuation(&self, x: &FieldElementWord, place: &LogPlace) -> Result<PadicScalar> {
        self.check_word(x)?;
        let mut acc = PadicScalar::zero(self.ell, self.prec as i64);
        for (a, e) in x.factors() {
            let v = self.element_valuation(a, place)?;
            let e = PadicScalar::from_residue(self.ell, e, self.prec);
            acc = acc.checked_add(&v.checked_mul(&e)?)?;
        }
        Ok(acc.with_abs_prec(self.prec as i64))
    }

    fn check_word(&self, x: &FieldElementWord) -> Result<()> {
        if x.ell() != self.ell {
            return Err(Error::MixedPrimes(x.ell(), self.ell));
        }
        if x.degree() != self.field.degree() {
            return Err(Error::Invalid("element of another field".into()));
        }
        Ok(())
    }

    /// Logarithmic divisor of a single element, modulo `l^work`.
    pub fn element_divisor(&self, x: &AlgebraicNum) -> Result<LogDivisor> {
        if x.is_zero() {
            return Err(Error::Zero("logarithmic divisor of zero".into()));
        }
        let k = &*self.field;
        let mut d = LogDivisor::zero(self.ell);
        for (pr, v) in k.element_divisor(x)? {
            if pr.p() != self.ell {
                d.add_term(pr, self.integer(&BigInt::from(v)))?;
            }
        }
        for place in &self.ell_places {
            let v = self.element_valuation(x, place)?;
            d.add_term(place.prime.clone(), v)?;
        }
        Ok(d)
    }

    /// Logarithmic divisor of a word, modulo `l^precision`.
    pub fn log_divisor(&self, x: &FieldElementWord) -> Result<LogDivisor> {
        self.check_word(x)?;
        let mut d = LogDivisor::zero(self.ell);
        for (a, e) in x.factors() {
            let e = PadicScalar::from_residue(self.ell, e, self.prec);
            d = d.add(&self.element_divisor(a)?.scale(&e)?)?;
        }
        let mut out = LogDivisor::zero(self.ell);
        for (pr, c) in d.coeffs {
            out.add_term(pr, c.with_abs_prec(self.prec as i64))?;
        }
        Ok(out)
    }

    /// Whether `x` is a logarithmic unit at precision.
    pub fn is_log_unit(&self, x: &FieldElementWord) -> Result<bool> {
        Ok(self.log_divisor(x)?.is_zero_at(self.prec))
    }

    /// `sum c_P deg(P)`.
    pub fn degree(&self, d: &LogDivisor) -> Result<PadicScalar> {
        let mut acc = PadicScalar::zero(self.ell, (self.work + 32) as i64);
        for (pr, c) in d.iter() {
            let place = self.place(pr)?;
            acc = acc.checked_add(&c.checked_mul(&place.degree)?)?;
        }
        Ok(acc)
    }

    /// `d` has degree `0` up to `slack` digits below its known precision.
    pub fn degree_vanishes(&self, d: &LogDivisor, slack: u32) -> Result<bool> {
        let g = self.degree(d)?;
        Ok(g.is_zero() || g.valuation_bound() >= g.abs_prec().min(self.prec as i64) - slack as i64)
    }
}

/// `Log(1 + l~)`.
pub fn log_cyclotomic(ell: u64, prec: u32) -> Result<PadicScalar> {
    PadicScalar::from_i64(ell, cyclotomic_unit(ell) as i64, prec).iwasawa_log()
}

#[cfg(test)]
mod tests;
