//! Class groups, units and `S`-units of number fields at desk scale.

mod saturation;
mod search;
mod units;

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

pub use units::{unit_group, UnitGroup};

pub(crate) use saturation::is_saturated;
pub(crate) use search::{divisor_over, shell};

use crate::error::{Error, Result};
use crate::linalg::{hnf, int_snf, IMat, IntSnf};
use crate::numfield::{AlgebraicNum, Ideal, NumberField, PrimeIdeal};
use search::combine;

/// Limits for relation and witness searches.
#[derive(Clone, Debug, Serialize)]
pub struct SearchCaps {
    /// Largest coordinate bound of the enumeration box.
    pub max_box: i64,
    /// Total number of enumerated elements.
    pub max_elements: usize,
    /// Random elements sampled when normalizing degrees of places above `l`.
    pub degree_samples: usize,
}

impl Default for SearchCaps {
    fn default() -> Self {
        SearchCaps { max_box: 96, max_elements: 400_000, degree_samples: 200 }
    }
}

/// Class group of `K` presented on the primes of norm at most the Minkowski
/// bound.
#[derive(Clone, Debug, Serialize)]
pub struct ClassGroupData {
    pub factor_base: Vec<PrimeIdeal>,
    /// Principal elements whose divisors generate the relation lattice.
    pub witnesses: Vec<AlgebraicNum>,
    /// Row `j` is the divisor of witness `j` over the factor base.
    #[serde(serialize_with = "crate::ser::display_mat")]
    pub relations: IMat,
    /// Invariants `d_1 | d_2 | ...`, all `> 1`.
    #[serde(serialize_with = "crate::ser::display_vec")]
    pub elementary_divisors: Vec<BigInt>,
    #[serde(serialize_with = "crate::ser::display")]
    pub class_number: BigInt,
    pub certified: bool,
    #[serde(skip)]
    pub units: Option<UnitGroup>,
    #[serde(skip)]
    snf: Option<IntSnf>,
}

/// Outcome of a principality test.
#[derive(Clone, Debug, PartialEq)]
pub enum Principality {
    Principal(AlgebraicNum),
    NotPrincipal,
    Inconclusive,
}

/// `S`-unit witnesses: elements whose divisors are supported on `S`.
#[derive(Clone, Debug, Serialize)]
pub struct SUnitBasis {
    pub s: Vec<PrimeIdeal>,
    pub witnesses: Vec<AlgebraicNum>,
    /// Row `j` is the divisor of witness `j` over `S`.
    pub exponents: Vec<Vec<i64>>,
}

/// Minkowski bound `(4/pi)^r2 n!/n^n sqrt|d|`.
pub fn minkowski_bound(k: &NumberField) -> f64 {
    let n = k.degree();
    let (_, r2) = k.signature();
    let mut fact_ratio = 1.0f64;
    for i in 1..=n {
        fact_ratio *= i as f64 / n as f64;
    }
    let d = k.disc().abs().to_f64().unwrap_or(f64::INFINITY);
    (4.0 / std::f64::consts::PI).powi(r2 as i32) * fact_ratio * d.sqrt()
}

/// Primes of norm at most `bound`, sorted by norm.
pub fn primes_up_to_norm(k: &NumberField, bound: u64) -> Result<Vec<PrimeIdeal>> {
    let mut out = Vec::new();
    for p in crate::poly::small_primes(bound) {
        for pr in k.primes_above(p)?.iter() {
            if pr.norm() <= BigInt::from(bound) {
                out.push(pr.clone());
            }
        }
    }
    out.sort_by_key(|a| (a.norm(), a.p(), a.index()));
    Ok(out)
}

/// Relation lattice being assembled from witnesses.
struct Lattice {
    dim: usize,
    h: IMat,
    witnesses: Vec<AlgebraicNum>,
    rows: IMat,
}

impl Lattice {
    fn new(dim: usize) -> Self {
        Lattice { dim, h: vec![], witnesses: vec![], rows: vec![] }
    }

    fn full_rank(&self) -> bool {
        self.h.len() == self.dim
    }

    fn det(&self) -> BigInt {
        self.h.iter().enumerate().map(|(i, r)| r[i].clone()).product()
    }

    /// Keeps the witness when it enlarges the lattice.
    fn offer(&mut self, x: AlgebraicNum, v: Vec<i64>) {
        let row: Vec<BigInt> = v.iter().map(|&e| BigInt::from(e)).collect();
        if row.iter().all(Zero::is_zero) {
            return;
        }
        let mut gens = self.h.clone();
        gens.push(row.clone());
        let m = if self.full_rank() { Some(self.det()) } else { None };
        let nh = hnf(&gens, self.dim, m.as_ref());
        if nh != self.h {
            self.h = nh;
            self.witnesses.push(x);
            self.rows.push(row);
        }
    }
}

fn vec_i64(v: &[BigInt]) -> Vec<i64> {
    v.iter().map(|x| x.to_i64().expect("small exponent")).collect()
}

/// Class group by relation search on the Minkowski factor base.
pub fn class_group(k: &NumberField, caps: &SearchCaps) -> Result<ClassGroupData> {
    let units = match unit_group(k) {
        Ok(u) => Some(u),
        Err(Error::Unsupported(_)) => None,
        Err(e) => return Err(e),
    };
    let bound = minkowski_bound(k);
    if !bound.is_finite() || bound > 1.0e7 {
        return Err(Error::CapExceeded(format!("Minkowski bound {:.0} too large", bound)));
    }
    let bound = (bound * (1.0 + 1e-9)).floor() as u64;
    let fb = primes_up_to_norm(k, bound)?;
    let g = fb.len();
    let mut lat = Lattice::new(g);
    let mut certified = g == 0;
    if g > 0 {
        let rational: BTreeSet<u64> = fb.iter().map(|p| p.p()).collect();
        for &p in &rational {
            let x = k.from_i64(p as i64);
            if let Some(v) = divisor_over(k, &fb, &x)? {
                lat.offer(x, v);
            }
        }
        let rows: Vec<Vec<BigInt>> = (0..k.degree())
            .map(|i| {
                let mut e = vec![BigInt::zero(); k.degree()];
                e[i] = BigInt::one();
                e
            })
            .collect();
        let mut seen = 0usize;
        let mut last_det: Option<BigInt> = None;
        'outer: for b in 1..=caps.max_box {
            for c in shell(k.degree(), b) {
                seen += 1;
                if seen > caps.max_elements {
                    break 'outer;
                }
                let x = combine(&rows, &c);
                if let Some(v) = divisor_over(k, &fb, &x)? {
                    lat.offer(x, v);
                }
            }
            if !lat.full_rank() {
                continue;
            }
            let det = lat.det();
            if last_det.as_ref() == Some(&det) {
                if let Some(u) = &units {
                    if saturated_at_all(k, &lat.witnesses, u, &fb, &det)? {
                        certified = true;
                        break;
                    }
                }
            }
            last_det = Some(det);
        }
        if !lat.full_rank() {
            return Err(Error::CapExceeded("relation search did not reach full rank".into()));
        }
    }
    let a = transpose(&lat.rows, g);
    let snf = int_snf(&a, lat.rows.len());
    let elementary_divisors: Vec<BigInt> = snf.diag.iter().filter(|d| !d.is_one()).cloned().collect();
    let class_number = elementary_divisors.iter().product();
    Ok(ClassGroupData {
        factor_base: fb,
        witnesses: lat.witnesses,
        relations: lat.rows,
        elementary_divisors,
        class_number,
        certified,
        units,
        snf: Some(snf),
    })
}

fn transpose(rows: &IMat, g: usize) -> IMat {
    (0..g).map(|i| rows.iter().map(|r| r[i].clone()).collect()).collect()
}

/// Generators of the group spanned by witnesses, units and roots of unity.
fn group_gens(witnesses: &[AlgebraicNum], units: &UnitGroup) -> Vec<AlgebraicNum> {
    let mut gens = witnesses.to_vec();
    gens.extend(units.fundamental.iter().cloned());
    gens.push(units.torsion.clone());
    gens
}

fn saturated_at_all(k: &NumberField, w: &[AlgebraicNum], u: &UnitGroup, s: &[PrimeIdeal], det: &BigInt) -> Result<bool> {
    if det.is_one() {
        return Ok(true);
    }
    let (fac, rest) = num_prime::nt_funcs::factors(det.magnitude().clone(), None);
    if rest.map(|r| !r.is_empty()).unwrap_or(false) {
        return Ok(false);
    }
    let gens = group_gens(w, u);
    for p in fac.keys() {
        let p = p.to_u64().ok_or_else(|| Error::Unsupported("large prime in relation determinant".into()))?;
        let dim = s.len() + u.fundamental.len() + usize::from(u.torsion_order.is_multiple_of(p));
        if !is_saturated(k, &gens, s, p, dim)? {
            return Ok(false);
        }
    }
    Ok(true)
}

impl ClassGroupData {
    fn snf(&self) -> &IntSnf {
        self.snf.as_ref().expect("class group presentation")
    }

    /// Coordinates of a factor-base divisor in the cyclic decomposition,
    /// reduced modulo the elementary divisors.
    pub fn class_of_fb(&self, v: &[i64]) -> Vec<BigInt> {
        let snf = self.snf();
        let g = self.factor_base.len();
        let mut out = Vec::new();
        for (i, d) in snf.diag.iter().enumerate() {
            if d.is_one() {
                continue;
            }
            let z: BigInt = (0..g).map(|j| &snf.u[i][j] * BigInt::from(v[j])).sum();
            out.push(z.mod_floor(d));
        }
        out
    }

    /// Writes a factor-base divisor in the relation lattice as integer
    /// combination of witnesses, if it lies there.
    fn express(&self, v: &[i64]) -> Option<Vec<BigInt>> {
        let snf = self.snf();
        let g = self.factor_base.len();
        let r = self.relations.len();
        let mut y = vec![BigInt::zero(); r];
        for i in 0..g {
            let z: BigInt = (0..g).map(|j| &snf.u[i][j] * BigInt::from(v[j])).sum();
            let d = snf.diag.get(i).cloned().unwrap_or_else(BigInt::zero);
            if d.is_zero() {
                if !z.is_zero() {
                    return None;
                }
                continue;
            }
            let (q, rem) = z.div_rem(&d);
            if !rem.is_zero() {
                return None;
            }
            y[i] = q;
        }
        Some((0..r).map(|j| (0..r).map(|t| &snf.v[j][t] * &y[t]).sum()).collect())
    }

    /// Element `x` and factor-base divisor `a` with `div(x) = P + a`.
    pub fn reduce_prime(&self, k: &NumberField, pr: &PrimeIdeal, caps: &SearchCaps) -> Result<(AlgebraicNum, Vec<i64>)> {
        let g = self.factor_base.len();
        if let Some(i) = self.factor_base.iter().position(|q| q == pr) {
            let mut v = vec![0i64; g];
            v[i] = -1;
            return Ok((k.one(), v));
        }
        let mut primes = self.factor_base.clone();
        primes.push(pr.clone());
        let rows = Ideal::from_prime(pr).hnf().clone();
        let mut seen = 0usize;
        for b in 1..=caps.max_box {
            for c in shell(k.degree(), b) {
                seen += 1;
                if seen > caps.max_elements {
                    break;
                }
                let x = combine(&rows, &c);
                if let Some(v) = divisor_over(k, &primes, &x)? {
                    if v[g] == 1 {
                        return Ok((x, v[..g].to_vec()));
                    }
                }
            }
        }
        Err(Error::CapExceeded(format!("no smooth element in {}", pr)))
    }

    /// Class of `prod P^v` in the cyclic decomposition.
    pub fn class_of(&self, k: &NumberField, fact: &[(PrimeIdeal, i64)], caps: &SearchCaps) -> Result<Vec<BigInt>> {
        let (_, a) = self.reduce_ideal(k, fact, caps)?;
        let neg: Vec<i64> = a.iter().map(|x| -x).collect();
        Ok(self.class_of_fb(&neg))
    }

    /// Word `prod x_P^v` and `a` with `div(word) = I + a`.
    fn reduce_ideal(
        &self,
        k: &NumberField,
        fact: &[(PrimeIdeal, i64)],
        caps: &SearchCaps,
    ) -> Result<(Vec<(AlgebraicNum, i64)>, Vec<i64>)> {
        let g = self.factor_base.len();
        let mut a = vec![0i64; g];
        let mut word = Vec::new();
        for (pr, v) in fact {
            let (x, w) = self.reduce_prime(k, pr, caps)?;
            for (ai, wi) in a.iter_mut().zip(&w) {
                *ai += v * wi;
            }
            word.push((x, *v));
        }
        Ok((word, a))
    }

    /// Order of the class of `prod P^v`.
    pub fn order_of(&self, k: &NumberField, fact: &[(PrimeIdeal, i64)], caps: &SearchCaps) -> Result<BigInt> {
        let c = self.class_of(k, fact, caps)?;
        let divs: Vec<&BigInt> = self.snf().diag.iter().filter(|d| !d.is_one()).collect();
        Ok(c.iter().zip(divs).fold(BigInt::one(), |acc, (x, d)| acc.lcm(&(d / x.gcd(d)))))
    }

    /// Generator of `prod P^v` when principal.
    pub fn principality_test(&self, k: &NumberField, fact: &[(PrimeIdeal, i64)], caps: &SearchCaps) -> Result<Principality> {
        let (word, a) = self.reduce_ideal(k, fact, caps)?;
        let Some(c) = self.express(&a) else {
            return Ok(if self.certified { Principality::NotPrincipal } else { Principality::Inconclusive });
        };
        let mut gen = k.one();
        for (x, v) in &word {
            gen = k.mul(&gen, &k.pow(x, *v)?);
        }
        for (w, cj) in self.witnesses.iter().zip(&c) {
            if !cj.is_zero() {
                let e = cj.to_i64().ok_or_else(|| Error::CapExceeded("witness exponent".into()))?;
                gen = k.div(&gen, &k.pow(w, e)?)?;
            }
        }
        Ok(Principality::Principal(self.size_reduce(k, gen)))
    }

    /// Multiplies by powers of the fundamental unit while the height drops.
    pub fn size_reduce(&self, k: &NumberField, mut x: AlgebraicNum) -> AlgebraicNum {
        let Some(u) = self.units.as_ref().and_then(|u| u.fundamental.first()) else {
            return x;
        };
        let Ok(ui) = k.inv(u) else { return x };
        loop {
            let h = x.height();
            let a = k.mul(&x, u);
            let b = k.mul(&x, &ui);
            if a.height() < h {
                x = a;
            } else if b.height() < h {
                x = b;
            } else {
                return x;
            }
        }
    }
}

/// `S`-unit witnesses for a set `S` of primes, together with the units of
/// `K` generating the `S`-units up to finite index prime to every checked
/// prime. For each `P` in `S` a generator of `P^{h_P}` is included.
pub fn s_unit_relations(
    k: &NumberField,
    cg: &ClassGroupData,
    s: &[PrimeIdeal],
    caps: &SearchCaps,
) -> Result<SUnitBasis> {
    let g = cg.factor_base.len();
    let extra: Vec<PrimeIdeal> = s.iter().filter(|p| !cg.factor_base.contains(p)).cloned().collect();
    let mut all = cg.factor_base.clone();
    all.extend(extra.iter().cloned());
    let m = all.len();
    let mut elems: Vec<AlgebraicNum> = cg.witnesses.clone();
    let mut rows: IMat = cg
        .relations
        .iter()
        .map(|r| {
            let mut v = r.clone();
            v.resize(m, BigInt::zero());
            v
        })
        .collect();
    for (i, pr) in extra.iter().enumerate() {
        let (x, a) = cg.reduce_prime(k, pr, caps)?;
        let mut v: Vec<BigInt> = a.iter().map(|&e| BigInt::from(e)).collect();
        v.resize(m, BigInt::zero());
        v[g + i] = BigInt::one();
        elems.push(x);
        rows.push(v);
    }
    // Column order: primes outside S first, then S in the given order.
    let outside: Vec<usize> = (0..m).filter(|&j| !s.contains(&all[j])).collect();
    let inside: Vec<usize> = s.iter().map(|p| all.iter().position(|q| q == p).unwrap()).collect();
    let r = rows.len();
    let aug: IMat = rows
        .iter()
        .enumerate()
        .map(|(j, row)| {
            let mut v: Vec<BigInt> = outside.iter().chain(&inside).map(|&c| row[c].clone()).collect();
            v.extend((0..r).map(|t| if t == j { BigInt::one() } else { BigInt::zero() }));
            v
        })
        .collect();
    let h = hnf(&aug, outside.len() + inside.len() + r, None);
    let mut witnesses = Vec::new();
    let mut exponents = Vec::new();
    for row in &h {
        if row[..outside.len()].iter().any(|x| !x.is_zero()) {
            continue;
        }
        let sv = &row[outside.len()..outside.len() + inside.len()];
        if sv.iter().all(Zero::is_zero) {
            continue;
        }
        let coeffs = &row[outside.len() + inside.len()..];
        let mut x = k.one();
        for (e, c) in elems.iter().zip(coeffs) {
            if !c.is_zero() {
                let c = c.to_i64().ok_or_else(|| Error::CapExceeded("S-unit exponent".into()))?;
                x = k.mul(&x, &k.pow(e, c)?);
            }
        }
        witnesses.push(cg.size_reduce(k, x));
        exponents.push(vec_i64(sv));
    }
    for (i, pr) in s.iter().enumerate() {
        let o = cg.order_of(k, &[(pr.clone(), 1)], caps)?;
        let o = o.to_i64().ok_or_else(|| Error::CapExceeded("class order".into()))?;
        if let Principality::Principal(x) = cg.principality_test(k, &[(pr.clone(), o)], caps)? {
            let mut v = vec![0i64; s.len()];
            v[i] = o;
            witnesses.push(x);
            exponents.push(v);
        }
    }
    Ok(SUnitBasis { s: s.to_vec(), witnesses, exponents })
}

/// Whether witnesses, units and roots of unity generate the `S`-units up to
/// an index prime to `p`.
pub fn sunits_saturated(k: &NumberField, basis: &SUnitBasis, units: &UnitGroup, p: u64) -> Result<bool> {
    let gens = group_gens(&basis.witnesses, units);
    let dim = basis.s.len() + units.fundamental.len() + usize::from(units.torsion_order.is_multiple_of(p));
    is_saturated(k, &gens, &basis.s, p, dim)
}
