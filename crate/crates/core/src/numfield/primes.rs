//! Prime ideals: decomposition of rational primes and valuations.

use std::cmp::Ordering;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::order::{from_fp, left_kernel, radical, solve_upper, to_fp};
use super::{AlgebraicNum, NumberField};
use crate::error::{Error, Result};
use crate::linalg::{fp_row_basis, hnf, FpMat, IMat};
use crate::poly::FpPoly;

/// A nonzero prime ideal of `O_K`.
#[derive(Clone, Debug, Serialize)]
pub struct PrimeIdeal {
    p: u64,
    e: u32,
    f: u32,
    /// Position in the sorted decomposition of `p`.
    index: usize,
    #[serde(serialize_with = "crate::ser::display_mat")]
    hnf: IMat,
    #[serde(skip)]
    anti: Vec<BigInt>,
    /// `gen` with `P = pO + gen O`, when one was found.
    #[serde(skip)]
    gen: Option<Vec<BigInt>>,
}

impl PartialEq for PrimeIdeal {
    fn eq(&self, o: &Self) -> bool {
        self.p == o.p && self.hnf == o.hnf
    }
}

impl Eq for PrimeIdeal {}

impl std::hash::Hash for PrimeIdeal {
    fn hash<H: std::hash::Hasher>(&self, h: &mut H) {
        self.p.hash(h);
        self.hnf.hash(h);
    }
}

impl PartialOrd for PrimeIdeal {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

impl Ord for PrimeIdeal {
    fn cmp(&self, o: &Self) -> Ordering {
        (self.p, self.f, self.e, &self.hnf).cmp(&(o.p, o.f, o.e, &o.hnf))
    }
}

impl std::fmt::Display for PrimeIdeal {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "P{}_{}", self.p, self.index + 1)
    }
}

impl PrimeIdeal {
    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn e(&self) -> u32 {
        self.e
    }

    pub fn f(&self) -> u32 {
        self.f
    }

    pub fn index(&self) -> usize {
        self.index
    }

    /// Absolute norm `p^f`.
    pub fn norm(&self) -> BigInt {
        num_traits::pow(BigInt::from(self.p), self.f as usize)
    }

    /// HNF basis in integral coordinates.
    pub fn hnf(&self) -> &IMat {
        &self.hnf
    }

    pub fn generator(&self) -> Option<&[BigInt]> {
        self.gen.as_deref()
    }

    /// Whether an integral element (coordinates) lies in the ideal.
    pub fn contains(&self, x: &[BigInt]) -> bool {
        solve_upper(&self.hnf, x).is_some()
    }

    /// Valuation of a nonzero integral element.
    pub fn valuation_integral(&self, k: &NumberField, x: &[BigInt]) -> Result<i64> {
        if x.iter().all(Zero::is_zero) {
            return Err(Error::Zero("valuation of zero".into()));
        }
        let pb = BigInt::from(self.p);
        let mut y = x.to_vec();
        let mut c = 0i64;
        while y.iter().all(|t| t.is_multiple_of(&pb)) {
            for t in y.iter_mut() {
                *t = &*t / &pb;
            }
            c += 1;
        }
        Ok(c * self.e as i64 + self.strip(k, y))
    }

    /// Number of times `x -> x b / p` stays integral.
    fn strip(&self, k: &NumberField, mut y: Vec<BigInt>) -> i64 {
        let pb = BigInt::from(self.p);
        let mut v = 0;
        loop {
            let z = k.mul_coords(&y, &self.anti);
            if !z.iter().all(|t| t.is_multiple_of(&pb)) {
                break;
            }
            y = z.into_iter().map(|t| t / &pb).collect();
            v += 1;
        }
        v
    }

    /// Valuation of a nonzero element.
    pub fn valuation(&self, k: &NumberField, a: &AlgebraicNum) -> Result<i64> {
        let vn = self.valuation_integral(k, a.num())?;
        let vd = crate::padic::val_bigint(self.p, a.den()) as i64;
        Ok(vn - vd * self.e as i64)
    }
}

/// `F_p`-subspace of `O/pO` in reduced echelon form.
struct Subspace {
    p: u64,
    rows: FpMat,
    pivots: Vec<usize>,
}

impl Subspace {
    fn new(gens: &FpMat, p: u64) -> Self {
        let rows = fp_row_basis(gens, p);
        let pivots = rows.iter().map(|r| r.iter().position(|&x| x != 0).unwrap()).collect();
        Subspace { p, rows, pivots }
    }

    fn reduce(&self, v: &[u64]) -> Vec<u64> {
        let p = self.p as u128;
        let mut v = v.to_vec();
        for (r, &c) in self.rows.iter().zip(&self.pivots) {
            let f = v[c];
            if f != 0 {
                for (x, y) in v.iter_mut().zip(r) {
                    *x = ((*x as u128 + (p - f as u128) * *y as u128) % p) as u64;
                }
            }
        }
        v
    }

    fn dim(&self) -> usize {
        self.rows.len()
    }
}

impl NumberField {
    /// Prime ideals above `p`, sorted, cached per field.
    pub fn primes_above(&self, p: u64) -> Result<Arc<Vec<PrimeIdeal>>> {
        if let Some(v) = self.primes.read().expect("cache").get(&p) {
            return Ok(v.clone());
        }
        let v = Arc::new(self.decompose_prime(p)?);
        self.primes.write().expect("cache").insert(p, v.clone());
        Ok(v)
    }

    /// Decomposition of `p`, using Kummer-Dedekind when `p` does not divide
    /// the index and the general splitting algorithm otherwise.
    pub fn decompose_prime(&self, p: u64) -> Result<Vec<PrimeIdeal>> {
        if !num_prime::nt_funcs::is_prime64(p) {
            return Err(Error::Invalid(format!("{} is not prime", p)));
        }
        if self.index().is_multiple_of(&BigInt::from(p)) {
            self.decompose_general(p)
        } else {
            self.decompose_kummer(p)
        }
    }

    pub(crate) fn decompose_kummer(&self, p: u64) -> Result<Vec<PrimeIdeal>> {
        let n = self.degree();
        let pb = BigInt::from(p);
        let theta = self.theta();
        let mut out = Vec::new();
        for (g, e) in self.poly().to_fp(p).factor() {
            // g(theta) in integral coordinates.
            let gz = g.to_z();
            let mut acc = AlgebraicNum::zero(n);
            for c in gz.coeffs().iter().rev() {
                acc = self.add(&self.mul(&acc, &theta), &self.from_int(c));
            }
            debug_assert!(acc.is_integral());
            let gen: Vec<BigInt> = acc.num().iter().map(|x| x.mod_floor(&pb)).collect();
            let gens: Vec<Vec<BigInt>> = self.mult_matrix(&gen);
            let h = hnf(&gens, n, Some(&pb));
            let mut pr = self.make_prime(p, h)?;
            pr.e = e;
            pr.gen = Some(gen);
            out.push(pr);
        }
        Ok(self.finish(out))
    }

    pub(crate) fn decompose_general(&self, p: u64) -> Result<Vec<PrimeIdeal>> {
        let n = self.degree();
        let one = self.one().num().to_vec();
        let rad = radical(self.mult_table(), &one, p);
        let rad_fp: FpMat = rad.iter().map(|r| to_fp(r, p)).collect();
        let start = Subspace::new(&rad_fp, p);
        let mut maximal = Vec::new();
        let mut stack = vec![start];
        let mut rng = ChaCha8Rng::seed_from_u64(p ^ 0x5eed);
        while let Some(j) = stack.pop() {
            let d = n - j.dim();
            if d == 1 {
                maximal.push(j);
                continue;
            }
            let mut done = false;
            for attempt in 0..400usize {
                let alpha: Vec<u64> = if attempt + 1 < n {
                    let mut v = vec![0u64; n];
                    v[attempt + 1] = 1;
                    v
                } else {
                    (0..n).map(|_| rng.random_range(0..p.min(1 << 20))).collect()
                };
                let Some(g) = self.min_poly_mod(&alpha, &j, p) else { continue };
                let facs = g.factor();
                if facs.len() >= 2 {
                    for (h, _) in facs {
                        let ha = self.eval_fp(&h, &alpha, p);
                        let mut gens = j.rows.clone();
                        for t in 0..n {
                            let mut e = vec![BigInt::zero(); n];
                            e[t] = BigInt::one();
                            gens.push(to_fp(&self.mul_coords(&from_fp(&ha), &e), p));
                        }
                        stack.push(Subspace::new(&gens, p));
                    }
                    done = true;
                    break;
                }
                if g.degree() as usize == d {
                    maximal.push(j);
                    done = true;
                    break;
                }
            }
            if !done {
                return Err(Error::Unsupported(format!("could not split the residue algebra at {}", p)));
            }
        }
        let pb = BigInt::from(p);
        let mut out = Vec::new();
        for j in maximal {
            let gens: Vec<Vec<BigInt>> = j.rows.iter().map(|r| from_fp(r)).collect();
            let h = hnf(&gens, n, Some(&pb));
            let mut pr = self.make_prime(p, h)?;
            pr.e = pr.strip(self, self.from_i64(p as i64).num().to_vec()) as u32;
            pr.gen = self.find_two_element(&pr);
            out.push(pr);
        }
        Ok(self.finish(out))
    }

    fn finish(&self, mut out: Vec<PrimeIdeal>) -> Vec<PrimeIdeal> {
        out.sort();
        for (i, pr) in out.iter_mut().enumerate() {
            pr.index = i;
        }
        out
    }

    /// Builds a prime from its HNF: residue degree and anti-uniformizer.
    fn make_prime(&self, p: u64, h: IMat) -> Result<PrimeIdeal> {
        let n = self.degree();
        let pb = BigInt::from(p);
        let f = h.iter().enumerate().filter(|(i, r)| r[*i] == pb).count() as u32;
        // b with b * P ⊆ pO and b not in pO.
        let m: FpMat = (0..n)
            .map(|i| {
                let mut e = vec![BigInt::zero(); n];
                e[i] = BigInt::one();
                let mut row = Vec::with_capacity(n * n);
                for g in &h {
                    row.extend(to_fp(&self.mul_coords(&e, g), p));
                }
                row
            })
            .collect();
        let ker = left_kernel(&m, n, p);
        let anti = ker
            .first()
            .map(|r| from_fp(r))
            .ok_or_else(|| Error::Invalid(format!("no anti-uniformizer at {}", p)))?;
        Ok(PrimeIdeal { p, e: 0, f, index: 0, hnf: h, anti, gen: None })
    }

    fn find_two_element(&self, pr: &PrimeIdeal) -> Option<Vec<BigInt>> {
        let n = self.degree();
        let pb = BigInt::from(pr.p);
        let mut cands: Vec<Vec<BigInt>> = pr.hnf.clone();
        for i in 0..n {
            for j in (i + 1)..n {
                cands.push(pr.hnf[i].iter().zip(&pr.hnf[j]).map(|(a, b)| a + b).collect());
            }
        }
        let pp = &pb * &pb;
        for c in cands {
            if c.iter().all(|x| x.is_multiple_of(&pb)) {
                continue;
            }
            let mut gens = self.mult_matrix(&c);
            for r in gens.iter_mut() {
                for x in r.iter_mut() {
                    *x = x.mod_floor(&pp);
                }
            }
            if hnf(&gens, n, Some(&pb)) == pr.hnf {
                return Some(c);
            }
        }
        None
    }

    /// Minimal polynomial of `alpha` acting on `O / J`, or `None` when the
    /// candidate is useless.
    fn min_poly_mod(&self, alpha: &[u64], j: &Subspace, p: u64) -> Option<FpPoly> {
        let n = self.degree();
        let d = n - j.dim();
        let pb = BigInt::from(p);
        let a = from_fp(alpha);
        let one = self.one().num().to_vec();
        let mut pows: FpMat = vec![j.reduce(&to_fp(&one, p))];
        let mut cur = one;
        for k in 1..=d {
            cur = self.mul_coords_mod(&cur, &a, &pb);
            pows.push(j.reduce(&to_fp(&cur, p)));
            let ker = left_kernel(&pows, k + 1, p);
            if let Some(v) = ker.first() {
                let lead = v[k];
                if lead == 0 {
                    return None;
                }
                let inv = crate::poly::inv_mod_p(lead, p);
                let c: Vec<u64> = v.iter().map(|&x| ((x as u128 * inv as u128) % p as u128) as u64).collect();
                return Some(FpPoly::new(p, c));
            }
        }
        None
    }

    fn eval_fp(&self, h: &FpPoly, alpha: &[u64], p: u64) -> Vec<u64> {
        let n = self.degree();
        let pb = BigInt::from(p);
        let a = from_fp(alpha);
        let mut acc = vec![BigInt::zero(); n];
        let one = self.one().num().to_vec();
        for &c in h.c.iter().rev() {
            acc = self.mul_coords_mod(&acc, &a, &pb);
            for (x, o) in acc.iter_mut().zip(&one) {
                *x = (&*x + BigInt::from(c) * o).mod_floor(&pb);
            }
        }
        to_fp(&acc, p)
    }

    /// Divisor of a nonzero element as sorted `(prime, valuation)` pairs.
    pub fn element_divisor(&self, a: &AlgebraicNum) -> Result<Vec<(PrimeIdeal, i64)>> {
        if a.is_zero() {
            return Err(Error::Zero("divisor of zero".into()));
        }
        let nrm = self.norm(&AlgebraicNum::new(a.num().to_vec(), BigInt::one()));
        let mut support = factor_primes(&nrm.to_integer())?;
        support.extend(factor_primes(a.den())?);
        support.sort_unstable();
        support.dedup();
        let mut out = Vec::new();
        for p in support {
            for pr in self.primes_above(p)?.iter() {
                let v = pr.valuation(self, a)?;
                if v != 0 {
                    out.push((pr.clone(), v));
                }
            }
        }
        Ok(out)
    }
}

/// Distinct prime factors of a nonzero integer, as `u64`.
pub(crate) fn factor_primes(n: &BigInt) -> Result<Vec<u64>> {
    let m = n.abs();
    if m.is_zero() {
        return Err(Error::Zero("factoring zero".into()));
    }
    if m.is_one() {
        return Ok(vec![]);
    }
    let (fac, rest) = num_prime::nt_funcs::factors(m.magnitude().clone(), None);
    if rest.map(|r| !r.is_empty()).unwrap_or(false) {
        return Err(Error::Unsupported(format!("could not factor {}", n)));
    }
    fac.keys().map(NumberField::small_prime_u).collect()
}

impl NumberField {
    fn small_prime_u(p: &num_bigint::BigUint) -> Result<u64> {
        NumberField::small_prime(&BigInt::from(p.clone()))
    }
}
