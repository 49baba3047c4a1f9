//! Univariate polynomials over `Z`, `Q` and `F_p`.
//!
//! Coefficient vectors are stored lowest degree first with no trailing
//! zeros; the zero polynomial is the empty vector.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

/// Polynomial with integer coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ZPoly(pub Vec<BigInt>);

fn trim<T: Zero>(v: &mut Vec<T>) {
    while v.last().is_some_and(|c| c.is_zero()) {
        v.pop();
    }
}

impl ZPoly {
    pub fn new(mut c: Vec<BigInt>) -> Self {
        trim(&mut c);
        ZPoly(c)
    }

    pub fn from_i64(c: &[i64]) -> Self {
        Self::new(c.iter().map(|&x| BigInt::from(x)).collect())
    }

    /// Degree; the zero polynomial has degree `-1`.
    pub fn degree(&self) -> isize {
        self.0.len() as isize - 1
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.0
    }

    pub fn lead(&self) -> BigInt {
        self.0.last().cloned().unwrap_or_default()
    }

    pub fn is_monic(&self) -> bool {
        self.lead().is_one()
    }

    pub fn to_q(&self) -> QPoly {
        QPoly::new(self.0.iter().map(|c| BigRational::from_integer(c.clone())).collect())
    }

    pub fn eval(&self, x: &BigInt) -> BigInt {
        let mut acc = BigInt::zero();
        for c in self.0.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn derivative(&self) -> ZPoly {
        ZPoly::new(self.0.iter().enumerate().skip(1).map(|(i, c)| c * BigInt::from(i)).collect())
    }

    pub fn mul(&self, other: &ZPoly) -> ZPoly {
        if self.0.is_empty() || other.0.is_empty() {
            return ZPoly(vec![]);
        }
        let mut out = vec![BigInt::zero(); self.0.len() + other.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            for (j, b) in other.0.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        ZPoly::new(out)
    }

    /// Reduction of the coefficients modulo `p`.
    pub fn to_fp(&self, p: u64) -> FpPoly {
        let pb = BigInt::from(p);
        FpPoly::new(p, self.0.iter().map(|c| c.mod_floor(&pb).to_u64().expect("residue")).collect())
    }

    /// Euclidean norm bound `||f||_2` rounded up.
    fn l2_bound(&self) -> BigInt {
        let s: BigInt = self.0.iter().map(|c| c * c).sum();
        s.sqrt() + 1
    }

    /// Exact division by another integer polynomial, if it divides.
    pub fn exact_div(&self, d: &ZPoly) -> Option<ZPoly> {
        let (q, r) = self.to_q().divrem(&d.to_q());
        if !r.is_zero() || q.0.iter().any(|c| !c.is_integer()) {
            return None;
        }
        Some(ZPoly::new(q.0.iter().map(|c| c.to_integer()).collect()))
    }

    /// Discriminant of a polynomial of positive degree.
    pub fn discriminant(&self) -> BigInt {
        let n = self.degree();
        assert!(n >= 1);
        let r = resultant(&self.to_q(), &self.derivative().to_q());
        let mut d = (r / BigRational::from_integer(self.lead())).to_integer();
        if (n * (n - 1) / 2) % 2 == 1 {
            d = -d;
        }
        d
    }

    /// Number of real roots, by Sturm's theorem.
    pub fn count_real_roots(&self) -> usize {
        let f = self.to_q();
        let mut seq = vec![f.clone(), f.derivative()];
        loop {
            let k = seq.len();
            if seq[k - 1].is_zero() {
                seq.pop();
                break;
            }
            let (_, r) = seq[k - 2].divrem(&seq[k - 1]);
            if r.is_zero() {
                break;
            }
            seq.push(r.neg());
        }
        let changes = |signs: Vec<i32>| -> usize {
            let s: Vec<i32> = signs.into_iter().filter(|&x| x != 0).collect();
            s.windows(2).filter(|w| w[0] != w[1]).count()
        };
        let at_pos: Vec<i32> = seq.iter().map(|p| sign(&p.lead())).collect();
        let at_neg: Vec<i32> = seq
            .iter()
            .map(|p| {
                let s = sign(&p.lead());
                if p.degree() % 2 == 0 {
                    s
                } else {
                    -s
                }
            })
            .collect();
        changes(at_neg) - changes(at_pos)
    }

    /// Parses a polynomial in `x`, e.g. `x^4 - x^3 + 5*x^2 + 2*x + 4`.
    pub fn parse(s: &str) -> Result<ZPoly> {
        let bad = |why: &str| Error::Invalid(format!("cannot parse polynomial `{}`: {}", s, why));
        let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if t.is_empty() {
            return Err(bad("empty"));
        }
        let mut coeffs: Vec<BigInt> = Vec::new();
        let bytes = t.as_bytes();
        let mut i = 0;
        let mut first = true;
        while i < bytes.len() {
            let mut neg = false;
            if bytes[i] == b'+' || bytes[i] == b'-' {
                neg = bytes[i] == b'-';
                i += 1;
            } else if !first {
                return Err(bad("expected + or -"));
            }
            first = false;
            let start = i;
            while i < bytes.len() && bytes[i].is_ascii_digit() {
                i += 1;
            }
            let mut c = if i > start {
                t[start..i].parse::<BigInt>().map_err(|_| bad("bad coefficient"))?
            } else {
                BigInt::one()
            };
            let mut deg = 0usize;
            let had_digits = i > start;
            if i < bytes.len() && bytes[i] == b'*' {
                if !had_digits {
                    return Err(bad("dangling *"));
                }
                i += 1;
                if i >= bytes.len() || bytes[i] != b'x' {
                    return Err(bad("expected x after *"));
                }
            }
            if i < bytes.len() && bytes[i] == b'x' {
                i += 1;
                deg = 1;
                if i < bytes.len() && bytes[i] == b'^' {
                    i += 1;
                    let s2 = i;
                    while i < bytes.len() && bytes[i].is_ascii_digit() {
                        i += 1;
                    }
                    if s2 == i {
                        return Err(bad("missing exponent"));
                    }
                    deg = t[s2..i].parse().map_err(|_| bad("bad exponent"))?;
                    if deg > 64 {
                        return Err(bad("exponent too large"));
                    }
                }
            } else if !had_digits {
                return Err(bad("empty term"));
            }
            if neg {
                c = -c;
            }
            if coeffs.len() <= deg {
                coeffs.resize(deg + 1, BigInt::zero());
            }
            coeffs[deg] += c;
        }
        Ok(ZPoly::new(coeffs))
    }
}

fn sign(x: &BigRational) -> i32 {
    if x.is_positive() {
        1
    } else if x.is_negative() {
        -1
    } else {
        0
    }
}

impl fmt::Display for ZPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.0.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let a = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, "{}", if neg { " - " } else { " + " })?;
            }
            first = false;
            match i {
                0 => write!(f, "{}", a)?,
                _ => {
                    if !a.is_one() {
                        write!(f, "{}*", a)?;
                    }
                    if i == 1 {
                        write!(f, "x")?;
                    } else {
                        write!(f, "x^{}", i)?;
                    }
                }
            }
        }
        Ok(())
    }
}

/// Polynomial with rational coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QPoly(pub Vec<BigRational>);

impl QPoly {
    pub fn new(mut c: Vec<BigRational>) -> Self {
        trim(&mut c);
        QPoly(c)
    }

    pub fn degree(&self) -> isize {
        self.0.len() as isize - 1
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn lead(&self) -> BigRational {
        self.0.last().cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn neg(&self) -> QPoly {
        QPoly(self.0.iter().map(|c| -c).collect())
    }

    pub fn derivative(&self) -> QPoly {
        QPoly::new(
            self.0.iter().enumerate().skip(1).map(|(i, c)| c * BigRational::from_integer(BigInt::from(i))).collect(),
        )
    }

    pub fn add(&self, o: &QPoly) -> QPoly {
        let n = self.0.len().max(o.0.len());
        QPoly::new(
            (0..n)
                .map(|i| {
                    self.0.get(i).cloned().unwrap_or_else(BigRational::zero)
                        + o.0.get(i).cloned().unwrap_or_else(BigRational::zero)
                })
                .collect(),
        )
    }

    pub fn mul(&self, o: &QPoly) -> QPoly {
        if self.is_zero() || o.is_zero() {
            return QPoly(vec![]);
        }
        let mut out = vec![BigRational::zero(); self.0.len() + o.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.0.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        QPoly::new(out)
    }

    pub fn divrem(&self, d: &QPoly) -> (QPoly, QPoly) {
        assert!(!d.is_zero(), "division by zero polynomial");
        let mut r = self.0.clone();
        let dd = d.0.len();
        if r.len() < dd {
            return (QPoly(vec![]), self.clone());
        }
        let mut q = vec![BigRational::zero(); r.len() - dd + 1];
        let inv = d.lead().recip();
        for k in (0..q.len()).rev() {
            let c = &r[k + dd - 1] * &inv;
            if !c.is_zero() {
                for (j, dj) in d.0.iter().enumerate() {
                    r[k + j] -= &c * dj;
                }
            }
            q[k] = c;
        }
        r.truncate(dd - 1);
        (QPoly::new(q), QPoly::new(r))
    }

    /// Remainder modulo a monic polynomial.
    pub fn rem(&self, d: &QPoly) -> QPoly {
        self.divrem(d).1
    }
}

/// Resultant over `Q`, by the Euclidean algorithm.
pub fn resultant(a: &QPoly, b: &QPoly) -> BigRational {
    if a.is_zero() || b.is_zero() {
        return BigRational::zero();
    }
    let (da, db) = (a.degree(), b.degree());
    if db == 0 {
        return num_traits::pow(b.lead(), da as usize);
    }
    if da < db {
        let r = resultant(b, a);
        return if (da * db) % 2 == 1 { -r } else { r };
    }
    let (_, r) = a.divrem(b);
    if r.is_zero() {
        return BigRational::zero();
    }
    let dr = r.degree();
    let mut res = num_traits::pow(b.lead(), (da - dr) as usize) * resultant(b, &r);
    if (da * db) % 2 == 1 {
        res = -res;
    }
    res
}

fn mulmod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn powmod_u64(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1 % p;
    a %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = mulmod(r, a, p);
        }
        a = mulmod(a, a, p);
        e >>= 1;
    }
    r
}

/// Inverse modulo a prime.
pub fn inv_mod_p(a: u64, p: u64) -> u64 {
    assert!(!a.is_multiple_of(p), "inverse of zero mod p");
    powmod_u64(a, p - 2, p)
}

/// Polynomial over the prime field `F_p`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FpPoly {
    pub p: u64,
    pub c: Vec<u64>,
}

impl FpPoly {
    pub fn new(p: u64, mut c: Vec<u64>) -> Self {
        for x in c.iter_mut() {
            *x %= p;
        }
        trim(&mut c);
        FpPoly { p, c }
    }

    pub fn zero(p: u64) -> Self {
        FpPoly { p, c: vec![] }
    }

    pub fn one(p: u64) -> Self {
        FpPoly::new(p, vec![1])
    }

    pub fn x(p: u64) -> Self {
        FpPoly::new(p, vec![0, 1])
    }

    pub fn degree(&self) -> isize {
        self.c.len() as isize - 1
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    pub fn lead(&self) -> u64 {
        self.c.last().copied().unwrap_or(0)
    }

    pub fn monic(&self) -> FpPoly {
        if self.is_zero() {
            return self.clone();
        }
        let inv = inv_mod_p(self.lead(), self.p);
        FpPoly::new(self.p, self.c.iter().map(|&x| mulmod(x, inv, self.p)).collect())
    }

    pub fn add(&self, o: &FpPoly) -> FpPoly {
        let n = self.c.len().max(o.c.len());
        FpPoly::new(
            self.p,
            (0..n)
                .map(|i| (self.c.get(i).copied().unwrap_or(0) + o.c.get(i).copied().unwrap_or(0)) % self.p)
                .collect(),
        )
    }

    pub fn sub(&self, o: &FpPoly) -> FpPoly {
        let n = self.c.len().max(o.c.len());
        FpPoly::new(
            self.p,
            (0..n)
                .map(|i| (self.c.get(i).copied().unwrap_or(0) + self.p - o.c.get(i).copied().unwrap_or(0)) % self.p)
                .collect(),
        )
    }

    pub fn scale(&self, k: u64) -> FpPoly {
        FpPoly::new(self.p, self.c.iter().map(|&x| mulmod(x, k, self.p)).collect())
    }

    pub fn mul(&self, o: &FpPoly) -> FpPoly {
        if self.is_zero() || o.is_zero() {
            return FpPoly::zero(self.p);
        }
        let p = self.p;
        let mut out = vec![0u128; self.c.len() + o.c.len() - 1];
        for (i, &a) in self.c.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in o.c.iter().enumerate() {
                out[i + j] = (out[i + j] + a as u128 * b as u128) % p as u128;
            }
        }
        FpPoly::new(p, out.into_iter().map(|x| x as u64).collect())
    }

    pub fn divrem(&self, d: &FpPoly) -> (FpPoly, FpPoly) {
        assert!(!d.is_zero(), "division by zero polynomial");
        let p = self.p;
        let mut r = self.c.clone();
        let dd = d.c.len();
        if r.len() < dd {
            return (FpPoly::zero(p), self.clone());
        }
        let inv = inv_mod_p(d.lead(), p);
        let mut q = vec![0u64; r.len() - dd + 1];
        for k in (0..q.len()).rev() {
            let c = mulmod(r[k + dd - 1], inv, p);
            if c != 0 {
                for (j, &dj) in d.c.iter().enumerate() {
                    r[k + j] = (r[k + j] + p - mulmod(c, dj, p)) % p;
                }
            }
            q[k] = c;
        }
        r.truncate(dd - 1);
        (FpPoly::new(p, q), FpPoly::new(p, r))
    }

    pub fn rem(&self, d: &FpPoly) -> FpPoly {
        self.divrem(d).1
    }

    pub fn gcd(&self, o: &FpPoly) -> FpPoly {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Returns `(g, s, t)` with `s a + t b = g`, `g` monic.
    pub fn ext_gcd(&self, o: &FpPoly) -> (FpPoly, FpPoly, FpPoly) {
        let p = self.p;
        let (mut r0, mut r1) = (self.clone(), o.clone());
        let (mut s0, mut s1) = (FpPoly::one(p), FpPoly::zero(p));
        let (mut t0, mut t1) = (FpPoly::zero(p), FpPoly::one(p));
        while !r1.is_zero() {
            let (q, r) = r0.divrem(&r1);
            r0 = r1;
            r1 = r;
            let s = s0.sub(&q.mul(&s1));
            s0 = s1;
            s1 = s;
            let t = t0.sub(&q.mul(&t1));
            t0 = t1;
            t1 = t;
        }
        let inv = inv_mod_p(r0.lead(), p);
        (r0.scale(inv), s0.scale(inv), t0.scale(inv))
    }

    pub fn derivative(&self) -> FpPoly {
        FpPoly::new(self.p, self.c.iter().enumerate().skip(1).map(|(i, &c)| mulmod(c, i as u64 % self.p, self.p)).collect())
    }

    /// `self^e mod m`.
    pub fn powmod(&self, mut e: u128, m: &FpPoly) -> FpPoly {
        let mut base = self.rem(m);
        let mut r = FpPoly::one(self.p).rem(m);
        while e > 0 {
            if e & 1 == 1 {
                r = r.mul(&base).rem(m);
            }
            base = base.mul(&base).rem(m);
            e >>= 1;
        }
        r
    }

    /// `self^(p^k) mod m`, by repeated `p`-th powers.
    pub fn frobenius_pow(&self, k: u32, m: &FpPoly) -> FpPoly {
        let mut r = self.rem(m);
        for _ in 0..k {
            r = r.powmod(self.p as u128, m);
        }
        r
    }

    pub fn eval(&self, x: u64) -> u64 {
        let mut acc = 0;
        for &c in self.c.iter().rev() {
            acc = (mulmod(acc, x, self.p) + c) % self.p;
        }
        acc
    }

    /// Factorization into monic irreducibles with multiplicities, sorted by
    /// degree and then coefficients.
    pub fn factor(&self) -> Vec<(FpPoly, u32)> {
        assert!(!self.is_zero());
        let mut out = Vec::new();
        for (g, m) in self.monic().squarefree() {
            for h in g.distinct_degree() {
                for q in h.0.equal_degree(h.1) {
                    out.push((q, m));
                }
            }
        }
        out.sort_by(|a, b| (a.0.c.len(), &a.0.c).cmp(&(b.0.c.len(), &b.0.c)));
        out
    }

    /// Squarefree decomposition of a monic polynomial.
    fn squarefree(&self) -> Vec<(FpPoly, u32)> {
        let p = self.p;
        let mut out = Vec::new();
        if self.degree() < 1 {
            return out;
        }
        let d = self.derivative();
        if d.is_zero() {
            let root = self.pth_root();
            for (g, m) in root.squarefree() {
                out.push((g, m * p as u32));
            }
            return out;
        }
        let mut c = self.gcd(&d);
        let mut w = self.divrem(&c).0;
        let mut i = 1;
        while w.degree() > 0 {
            let y = w.gcd(&c);
            let z = w.divrem(&y).0;
            if z.degree() > 0 {
                out.push((z.monic(), i));
            }
            i += 1;
            w = y;
            c = c.divrem(&w).0;
        }
        if c.degree() > 0 {
            let root = c.pth_root();
            for (g, m) in root.squarefree() {
                out.push((g, m * p as u32));
            }
        }
        out
    }

    fn pth_root(&self) -> FpPoly {
        let p = self.p as usize;
        FpPoly::new(self.p, self.c.iter().step_by(p).copied().collect())
    }

    /// Products of the irreducible factors of each degree, for a squarefree
    /// monic polynomial.
    fn distinct_degree(&self) -> Vec<(FpPoly, usize)> {
        let mut out = Vec::new();
        let mut f = self.clone();
        let x = FpPoly::x(self.p);
        let mut h = x.clone();
        let mut d = 0;
        while f.degree() >= 2 * (d as isize + 1) {
            d += 1;
            h = h.powmod(self.p as u128, &f);
            let g = h.sub(&x).gcd(&f);
            if g.degree() > 0 {
                f = f.divrem(&g).0;
                h = h.rem(&f);
                out.push((g, d));
            }
        }
        if f.degree() > 0 {
            let deg = f.degree() as usize;
            out.push((f.monic(), deg));
        }
        out
    }

    /// Splits a squarefree product of irreducibles of degree `d`.
    fn equal_degree(&self, d: usize) -> Vec<FpPoly> {
        let n = self.degree() as usize;
        if n == d {
            return vec![self.monic()];
        }
        let p = self.p;
        let mut rng = ChaCha8Rng::seed_from_u64(0x5eed ^ (n as u64) ^ (p << 8));
        loop {
            let a = FpPoly::new(p, (0..n).map(|_| rng.random_range(0..p)).collect());
            if a.degree() < 1 {
                continue;
            }
            let g = if p == 2 {
                let mut t = a.rem(self);
                let mut acc = t.clone();
                for _ in 1..d {
                    t = t.mul(&t).rem(self);
                    acc = acc.add(&t);
                }
                acc.gcd(self)
            } else {
                let e = (num_traits::pow(p as u128, d) - 1) / 2;
                a.powmod(e, self).sub(&FpPoly::one(p)).gcd(self)
            };
            if g.degree() > 0 && g.degree() < n as isize {
                let h = self.divrem(&g).0.monic();
                let mut out = g.equal_degree(d);
                out.extend(h.equal_degree(d));
                return out;
            }
        }
    }

    /// Lifts the coefficients to `[0, p)`.
    pub fn to_z(&self) -> ZPoly {
        ZPoly::new(self.c.iter().map(|&x| BigInt::from(x)).collect())
    }
}

/// Polynomial arithmetic modulo an integer `m` (not necessarily prime).
fn zmod(f: &ZPoly, m: &BigInt) -> ZPoly {
    ZPoly::new(f.0.iter().map(|c| c.mod_floor(m)).collect())
}

fn zsub(a: &ZPoly, b: &ZPoly) -> ZPoly {
    let n = a.0.len().max(b.0.len());
    ZPoly::new(
        (0..n)
            .map(|i| a.0.get(i).cloned().unwrap_or_default() - b.0.get(i).cloned().unwrap_or_default())
            .collect(),
    )
}

fn zadd(a: &ZPoly, b: &ZPoly) -> ZPoly {
    let n = a.0.len().max(b.0.len());
    ZPoly::new(
        (0..n)
            .map(|i| a.0.get(i).cloned().unwrap_or_default() + b.0.get(i).cloned().unwrap_or_default())
            .collect(),
    )
}

/// Division by a monic polynomial modulo `m`.
fn zdivrem_monic(a: &ZPoly, d: &ZPoly, m: &BigInt) -> (ZPoly, ZPoly) {
    debug_assert!(d.is_monic());
    let mut r = zmod(a, m).0;
    let dd = d.0.len();
    if r.len() < dd {
        return (ZPoly(vec![]), ZPoly::new(r));
    }
    let mut q = vec![BigInt::zero(); r.len() - dd + 1];
    for k in (0..q.len()).rev() {
        let c = r[k + dd - 1].mod_floor(m);
        if !c.is_zero() {
            for (j, dj) in d.0.iter().enumerate() {
                r[k + j] = (&r[k + j] - &c * dj).mod_floor(m);
            }
        }
        q[k] = c;
    }
    r.truncate(dd - 1);
    (ZPoly::new(q), zmod(&ZPoly::new(r), m))
}

/// One quadratic Hensel step: from `f = g h`, `s g + t h = 1` modulo `m`
/// to the same identities modulo `m^2` (g, h monic).
fn hensel_step(f: &ZPoly, g: &ZPoly, h: &ZPoly, s: &ZPoly, t: &ZPoly, m: &BigInt) -> (ZPoly, ZPoly, ZPoly, ZPoly) {
    let m2 = m * m;
    let e = zmod(&zsub(f, &g.mul(h)), &m2);
    let (q, r) = zdivrem_monic(&s.mul(&e), h, &m2);
    let g2 = zmod(&zadd(&zadd(g, &t.mul(&e)), &q.mul(g)), &m2);
    let h2 = zmod(&zadd(h, &r), &m2);
    let b = zmod(&zsub(&zadd(&s.mul(&g2), &t.mul(&h2)), &ZPoly::from_i64(&[1])), &m2);
    let (c, d) = zdivrem_monic(&s.mul(&b), &h2, &m2);
    let s2 = zmod(&zsub(s, &d), &m2);
    let t2 = zmod(&zsub(&zsub(t, &t.mul(&b)), &c.mul(&g2)), &m2);
    (g2, h2, s2, t2)
}

/// Lifts a factorization of a monic `f` into pairwise coprime monic factors
/// modulo `p` to a factorization modulo `p^(2^k) >= p^min_exp`.
pub fn hensel_lift(f: &ZPoly, factors: &[FpPoly], p: u64, min_exp: u32) -> (Vec<ZPoly>, BigInt) {
    let target = BigInt::from(p).pow(min_exp);
    let mut modulus = BigInt::from(p);
    while modulus < target {
        modulus = &modulus * &modulus;
    }
    (lift_tree(f, factors, p, &modulus), modulus)
}

fn lift_tree(f: &ZPoly, factors: &[FpPoly], p: u64, target: &BigInt) -> Vec<ZPoly> {
    if factors.len() == 1 {
        return vec![zmod(f, target)];
    }
    let mid = factors.len() / 2;
    let gl = factors[..mid].iter().fold(FpPoly::one(p), |a, b| a.mul(b));
    let hl = factors[mid..].iter().fold(FpPoly::one(p), |a, b| a.mul(b));
    let (one, s, t) = gl.ext_gcd(&hl);
    assert_eq!(one.degree(), 0, "factors must be coprime");
    let (mut g, mut h, mut s, mut t) = (gl.to_z(), hl.to_z(), s.to_z(), t.to_z());
    let mut m = BigInt::from(p);
    while &m < target {
        let next = hensel_step(f, &g, &h, &s, &t, &m);
        g = next.0;
        h = next.1;
        s = next.2;
        t = next.3;
        m = &m * &m;
    }
    let g = zmod(&g, target);
    let h = zmod(&h, target);
    let mut out = lift_tree(&g, &factors[..mid], p, target);
    out.extend(lift_tree(&h, &factors[mid..], p, target));
    out
}

fn symmetric(f: &ZPoly, m: &BigInt) -> ZPoly {
    let half = m / 2;
    ZPoly::new(
        f.0.iter()
            .map(|c| {
                let r = c.mod_floor(m);
                if r > half {
                    r - m
                } else {
                    r
                }
            })
            .collect(),
    )
}

/// Small primes by trial division.
pub fn small_primes(limit: u64) -> Vec<u64> {
    let mut sieve = vec![true; (limit + 1) as usize];
    let mut out = Vec::new();
    for i in 2..=limit as usize {
        if sieve[i] {
            out.push(i as u64);
            let mut j = i * i;
            while j <= limit as usize {
                sieve[j] = false;
                j += i;
            }
        }
    }
    out
}

/// Factorization of a monic squarefree integer polynomial into monic
/// irreducibles (Zassenhaus).
pub fn factor_monic(f: &ZPoly) -> Result<Vec<ZPoly>> {
    if !f.is_monic() {
        return Err(Error::Invalid(format!("{} is not monic", f)));
    }
    if f.degree() <= 1 {
        return Ok(vec![f.clone()]);
    }
    let disc = f.discriminant();
    if disc.is_zero() {
        return Err(Error::Invalid(format!("{} is not squarefree", f)));
    }
    let mut best: Option<(u64, Vec<FpPoly>)> = None;
    let mut tried = 0;
    for p in small_primes(2000) {
        if (&disc % BigInt::from(p)).is_zero() {
            continue;
        }
        let fac: Vec<FpPoly> = f.to_fp(p).factor().into_iter().map(|x| x.0).collect();
        if fac.len() == 1 {
            return Ok(vec![f.clone()]);
        }
        if best.as_ref().is_none_or(|b| fac.len() < b.1.len()) {
            best = Some((p, fac));
        }
        tried += 1;
        if tried >= 6 {
            break;
        }
    }
    let (p, fac) = best.ok_or_else(|| Error::Unsupported("no good reduction prime below 2000".into()))?;
    let n = f.degree() as u32;
    let bound = f.l2_bound() * BigInt::from(2).pow(n) * 2 + 1;
    let mut e = 1;
    while BigInt::from(p).pow(e) <= bound {
        e += 1;
    }
    let (mut lifted, m) = hensel_lift(f, &fac, p, e);
    let mut rest = f.clone();
    let mut out = Vec::new();
    let mut size = 1;
    while 2 * size <= lifted.len() {
        let mut found = false;
        for subset in combinations(lifted.len(), size) {
            let prod = subset.iter().fold(ZPoly::from_i64(&[1]), |a, &i| zmod(&a.mul(&lifted[i]), &m));
            let cand = symmetric(&prod, &m);
            if let Some(q) = rest.exact_div(&cand) {
                out.push(cand);
                rest = q;
                let keep: Vec<ZPoly> =
                    lifted.iter().enumerate().filter(|(i, _)| !subset.contains(i)).map(|(_, g)| g.clone()).collect();
                lifted = keep;
                found = true;
                break;
            }
        }
        if !found {
            size += 1;
        }
    }
    out.push(rest);
    Ok(out)
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_print() {
        let f = ZPoly::parse("x^4 - x^3 + 5*x^2 + 2*x + 4").unwrap();
        assert_eq!(f, ZPoly::from_i64(&[4, 2, 5, -1, 1]));
        assert_eq!(f.to_string(), "x^4 - x^3 + 5*x^2 + 2*x + 4");
        assert_eq!(ZPoly::parse("x").unwrap(), ZPoly::from_i64(&[0, 1]));
        assert_eq!(ZPoly::parse("-3x^2+x-1").unwrap(), ZPoly::from_i64(&[-1, 1, -3]));
        for bad in ["", "x^", "x+*2", "y^2+1", "2**x", "x^2+"] {
            assert!(ZPoly::parse(bad).is_err(), "{}", bad);
        }
    }

    #[test]
    fn discriminants() {
        assert_eq!(ZPoly::parse("x^2+1").unwrap().discriminant(), BigInt::from(-4));
        assert_eq!(ZPoly::parse("x^2-5").unwrap().discriminant(), BigInt::from(20));
        assert_eq!(ZPoly::parse("x^3-2").unwrap().discriminant(), BigInt::from(-108));
    }

    #[test]
    fn real_roots() {
        assert_eq!(ZPoly::parse("x^2+1").unwrap().count_real_roots(), 0);
        assert_eq!(ZPoly::parse("x^3-2").unwrap().count_real_roots(), 1);
        assert_eq!(ZPoly::parse("x^4-10*x^2+1").unwrap().count_real_roots(), 4);
    }

    #[test]
    fn factor_mod_p() {
        let f = ZPoly::parse("x^2+1").unwrap();
        let fac = f.to_fp(5).factor();
        assert_eq!(fac.len(), 2);
        let fac = f.to_fp(2).factor();
        assert_eq!(fac, vec![(FpPoly::new(2, vec![1, 1]), 2)]);
        assert_eq!(f.to_fp(3).factor().len(), 1);
        let g = ZPoly::parse("x^8-1").unwrap().to_fp(17).factor();
        assert_eq!(g.len(), 8);
        let h = ZPoly::parse("x^6+x^5+x^3+x+1").unwrap().to_fp(2).factor();
        let prod = h.iter().fold(FpPoly::one(2), |a, (q, m)| (0..*m).fold(a, |b, _| b.mul(q)));
        assert_eq!(prod, ZPoly::parse("x^6+x^5+x^3+x+1").unwrap().to_fp(2));
    }

    #[test]
    fn zassenhaus() {
        assert_eq!(factor_monic(&ZPoly::parse("x^4+1").unwrap()).unwrap().len(), 1);
        let f = ZPoly::parse("x^4-10*x^2+1").unwrap();
        assert_eq!(factor_monic(&f).unwrap().len(), 1);
        let g = ZPoly::parse("x^4+4").unwrap();
        let fac = factor_monic(&g).unwrap();
        assert_eq!(fac.len(), 2);
        assert_eq!(fac[0].mul(&fac[1]), g);
        assert_eq!(factor_monic(&ZPoly::parse("x^6-1").unwrap()).unwrap().len(), 4);
    }
}
