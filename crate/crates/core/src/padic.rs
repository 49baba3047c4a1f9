//! Fixed-precision arithmetic in `Q_l`.
//!
//! A [`PadicScalar`] stores `l^v * u` where the unit `u` is known modulo
//! `l^N` (the relative precision). A value indistinguishable from zero is
//! stored with `N = 0`; its `v` is then the absolute bound, i.e. the value is
//! known to be `0 mod l^v`.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Default relative precision (in `l`-adic digits).
pub const DEFAULT_PREC: u32 = 64;
/// Digits of slack allowed in equality assertions.
pub const DEFAULT_SLACK: u32 = 4;
/// Absolute bound used for an exact zero.
const EXACT_ZERO_ABS: i64 = 1 << 40;

/// `l^k` as a big integer.
pub fn ell_pow(ell: u64, k: u32) -> BigUint {
    BigUint::from(ell).pow(k)
}

/// `l`-adic valuation of a nonzero big integer.
pub fn val_biguint(ell: u64, n: &BigUint) -> u32 {
    debug_assert!(!n.is_zero());
    let l = BigUint::from(ell);
    let mut v = 0;
    let mut m = n.clone();
    loop {
        let (q, r) = m.div_rem(&l);
        if !r.is_zero() {
            return v;
        }
        m = q;
        v += 1;
    }
}

fn split_ell(ell: u64, n: &BigUint) -> (u32, BigUint) {
    let l = BigUint::from(ell);
    let mut v = 0;
    let mut m = n.clone();
    loop {
        let (q, r) = m.div_rem(&l);
        if !r.is_zero() {
            return (v, m);
        }
        m = q;
        v += 1;
    }
}

/// Inverse of `a` modulo `m`, when it exists.
pub fn mod_inverse(a: &BigUint, m: &BigUint) -> Option<BigUint> {
    if m.is_one() {
        return Some(BigUint::zero());
    }
    let a = BigInt::from(a % m);
    let mi = BigInt::from(m.clone());
    let e = a.extended_gcd(&mi);
    if !e.gcd.is_one() {
        return None;
    }
    let x = e.x.mod_floor(&mi);
    x.to_biguint()
}

/// Reduce a signed integer into `[0, m)`.
pub fn reduce_signed(a: &BigInt, m: &BigUint) -> BigUint {
    let mi = BigInt::from(m.clone());
    a.mod_floor(&mi).to_biguint().expect("nonnegative")
}

/// An element of `Q_l` known to finite precision.
#[derive(Clone, Debug)]
pub struct PadicScalar {
    ell: u64,
    val: i64,
    prec: u32,
    unit: BigUint,
}

impl PadicScalar {
    /// The value `0 mod l^abs`.
    pub fn zero(ell: u64, abs: i64) -> Self {
        PadicScalar { ell, val: abs, prec: 0, unit: BigUint::zero() }
    }

    pub fn one(ell: u64, prec: u32) -> Self {
        Self::from_i64(ell, 1, prec)
    }

    /// Builds `l^m * s`, where `s` is known modulo `l^digits`.
    fn normalized(ell: u64, m: i64, s: BigUint, digits: u32) -> Self {
        if digits == 0 {
            return Self::zero(ell, m);
        }
        let s = s % ell_pow(ell, digits);
        if s.is_zero() {
            return Self::zero(ell, m + digits as i64);
        }
        let (v, u) = split_ell(ell, &s);
        PadicScalar { ell, val: m + v as i64, prec: digits - v, unit: u }
    }

    /// An integer, stored with `prec` digits of relative precision.
    /// Zero becomes `O(l^prec)`.
    pub fn from_bigint(ell: u64, n: &BigInt, prec: u32) -> Self {
        if n.is_zero() {
            return Self::zero(ell, prec as i64);
        }
        let (v, u) = split_ell(ell, n.magnitude());
        let modulus = ell_pow(ell, prec);
        let mut unit = u % &modulus;
        if n.sign() == Sign::Minus && !unit.is_zero() {
            unit = &modulus - unit;
        }
        PadicScalar { ell, val: v as i64, prec, unit }
    }

    pub fn from_i64(ell: u64, n: i64, prec: u32) -> Self {
        Self::from_bigint(ell, &BigInt::from(n), prec)
    }

    /// A rational number, stored with `prec` digits of relative precision.
    pub fn from_rational(ell: u64, q: &BigRational, prec: u32) -> Self {
        let a = Self::from_bigint(ell, q.numer(), prec);
        if a.is_zero() {
            return a;
        }
        let b = Self::from_bigint(ell, q.denom(), prec);
        (a / b).expect("nonzero denominator")
    }

    /// The residue `r mod l^abs`, as an element of `Z_l` with absolute
    /// precision `abs`.
    pub fn from_residue(ell: u64, r: &BigUint, abs: u32) -> Self {
        Self::normalized(ell, 0, r.clone(), abs)
    }

    pub fn ell(&self) -> u64 {
        self.ell
    }

    /// The valuation, or `None` for a value indistinguishable from zero.
    pub fn valuation(&self) -> Option<i64> {
        if self.prec == 0 {
            None
        } else {
            Some(self.val)
        }
    }

    /// The valuation, with zero reported as its absolute bound.
    pub fn valuation_bound(&self) -> i64 {
        self.val
    }

    /// Relative precision (digits of the unit part).
    pub fn rel_prec(&self) -> u32 {
        self.prec
    }

    /// Absolute precision: the value is known modulo `l^abs_prec`.
    pub fn abs_prec(&self) -> i64 {
        self.val + self.prec as i64
    }

    pub fn unit(&self) -> &BigUint {
        &self.unit
    }

    pub fn is_zero(&self) -> bool {
        self.prec == 0
    }

    /// True for a unit of `Z_l`.
    pub fn is_unit(&self) -> bool {
        self.prec > 0 && self.val == 0
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.ell != other.ell {
            Err(Error::MixedPrimes(self.ell, other.ell))
        } else {
            Ok(())
        }
    }

    /// Reduces the absolute precision to at most `abs`.
    pub fn with_abs_prec(&self, abs: i64) -> Self {
        if abs >= self.abs_prec() {
            return self.clone();
        }
        if abs <= self.val {
            return Self::zero(self.ell, abs);
        }
        let digits = (abs - self.val) as u32;
        Self::normalized(self.ell, self.val, self.unit.clone(), digits)
    }

    /// Reduces the relative precision to at most `prec`.
    pub fn with_rel_prec(&self, prec: u32) -> Self {
        if self.is_zero() || prec >= self.prec {
            return self.clone();
        }
        self.with_abs_prec(self.val + prec as i64)
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let abs = self.abs_prec().min(other.abs_prec());
        let m = self.val.min(other.val);
        if abs <= m {
            return Ok(Self::zero(self.ell, abs));
        }
        let digits = (abs - m) as u32;
        let lift = |x: &Self| -> BigUint {
            if x.is_zero() {
                BigUint::zero()
            } else {
                &x.unit * ell_pow(x.ell, (x.val - m) as u32)
            }
        };
        let s = lift(self) + lift(other);
        Ok(Self::normalized(self.ell, m, s, digits))
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.checked_add(&other.neg_ref())
    }

    fn neg_ref(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let m = ell_pow(self.ell, self.prec);
        PadicScalar { unit: (&m - &self.unit) % &m, ..self.clone() }
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        if self.is_zero() || other.is_zero() {
            return Ok(Self::zero(self.ell, (self.val + other.val).min(EXACT_ZERO_ABS)));
        }
        let prec = self.prec.min(other.prec);
        let unit = (&self.unit * &other.unit) % ell_pow(self.ell, prec);
        Ok(PadicScalar { ell: self.ell, val: self.val + other.val, prec, unit })
    }

    pub fn checked_div(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        if other.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if self.is_zero() {
            return Ok(Self::zero(self.ell, self.val - other.val));
        }
        let prec = self.prec.min(other.prec);
        let m = ell_pow(self.ell, prec);
        let inv = mod_inverse(&other.unit, &m).expect("unit part is invertible");
        let unit = (&self.unit * inv) % &m;
        Ok(PadicScalar { ell: self.ell, val: self.val - other.val, prec, unit })
    }

    pub fn inv(&self) -> Result<Self> {
        Self::one(self.ell, self.prec.max(1)).checked_div(self)
    }

    /// Integer power; negative exponents require a nonzero value.
    pub fn pow(&self, e: i64) -> Result<Self> {
        if e < 0 {
            return self.inv()?.pow(-e);
        }
        if self.is_zero() {
            return Ok(if e == 0 {
                Self::one(self.ell, DEFAULT_PREC)
            } else {
                Self::zero(self.ell, self.val.saturating_mul(e).min(EXACT_ZERO_ABS))
            });
        }
        let m = ell_pow(self.ell, self.prec);
        let unit = self.unit.modpow(&BigUint::from(e as u64), &m);
        Ok(PadicScalar { ell: self.ell, val: self.val * e, prec: self.prec, unit })
    }

    /// Multiplication by an exact integer.
    pub fn scale(&self, k: &BigInt) -> Self {
        if k.is_zero() {
            return Self::zero(self.ell, EXACT_ZERO_ABS);
        }
        let kk = Self::from_bigint(self.ell, k, self.prec.max(1) + 64);
        self * &kk
    }

    /// Equality at the weaker of the two precisions.
    pub fn eq_at_prec(&self, other: &Self) -> bool {
        self.checked_sub(other).map(|d| d.is_zero()).unwrap_or(false)
    }

    /// `self - other` has valuation at least `min(abs precisions) - slack`.
    pub fn agrees(&self, other: &Self, slack: u32) -> bool {
        if self.ell != other.ell {
            return false;
        }
        let abs = self.abs_prec().min(other.abs_prec());
        let d = self.checked_sub(other).expect("same prime");
        d.is_zero() || d.val >= abs - slack as i64
    }

    /// The residue modulo `l^k` of an element of `Z_l`.
    pub fn residue(&self, k: u32) -> Result<BigUint> {
        if self.abs_prec() < k as i64 {
            if self.val >= k as i64 {
                return Ok(BigUint::zero());
            }
            return Err(Error::Precision(format!(
                "value known to {} digits, {} requested",
                self.abs_prec(),
                k
            )));
        }
        if self.is_zero() || self.val >= k as i64 {
            return Ok(BigUint::zero());
        }
        if self.val < 0 {
            return Err(Error::Invalid(format!("{} is not l-adically integral", self)));
        }
        Ok((&self.unit * ell_pow(self.ell, self.val as u32)) % ell_pow(self.ell, k))
    }

    /// The represented value as a rational number: `l^v * u` with
    /// `0 <= u < l^N`.
    pub fn to_rational(&self) -> BigRational {
        if self.is_zero() {
            return BigRational::zero();
        }
        let u = BigInt::from(self.unit.clone());
        let l = BigInt::from(self.ell);
        if self.val >= 0 {
            BigRational::from_integer(u * l.pow(self.val as u32))
        } else {
            BigRational::new(u, l.pow((-self.val) as u32))
        }
    }

    /// Iwasawa logarithm: `Log(l) = 0`, `Log(zeta) = 0`, and the series
    /// `log(1 + t)` on principal units.
    pub fn iwasawa_log(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::Zero("logarithm of zero".into()));
        }
        let ell = self.ell;
        let n = self.prec;
        let m = ell_pow(ell, n);
        let k: u64 = if ell == 2 { 2 } else { ell - 1 };
        let w = self.unit.modpow(&BigUint::from(k), &m);
        let t = (w + &m - 1u32) % &m;
        let log_w = if t.is_zero() {
            Self::zero(ell, n as i64)
        } else {
            let (a, s) = split_ell(ell, &t);
            Self::from_residue(ell, &log1p_series(ell, a, &s, n), n)
        };
        log_w.checked_div(&Self::from_i64(ell, k as i64, n + 64))
    }

    /// Teichmuller representative of a unit.
    pub fn teichmuller(&self) -> Result<Self> {
        if !self.is_unit() {
            return Err(Error::NotUnit(self.to_string()));
        }
        let n = self.prec;
        let m = ell_pow(self.ell, n);
        if self.ell == 2 {
            let s = if (&self.unit % 4u32) == BigUint::one() { 1 } else { -1 };
            return Ok(Self::from_i64(2, s, n));
        }
        let l = BigUint::from(self.ell);
        let mut y = self.unit.clone();
        for _ in 0..n {
            y = y.modpow(&l, &m);
        }
        Ok(PadicScalar { ell: self.ell, val: 0, prec: n, unit: y })
    }
}

/// `sum_{j >= 1} (-1)^{j+1} (l^a s)^j / j  mod l^n`, for `a >= 1`.
fn log1p_series(ell: u64, a: u32, s: &BigUint, n: u32) -> BigUint {
    let m = ell_pow(ell, n);
    let mut acc = BigInt::zero();
    let s = s % &m;
    let mut spow = BigUint::one();
    let mut j: u64 = 0;
    loop {
        j += 1;
        spow = (&spow * &s) % &m;
        let vj = val_biguint(ell, &BigUint::from(j));
        let floor_log = floor_log(ell, j);
        if j * a as u64 >= n as u64 + 2 + floor_log as u64 {
            break;
        }
        let e = j as i64 * a as i64 - vj as i64;
        if e >= n as i64 {
            continue;
        }
        let jp = BigUint::from(j / ell.pow(vj));
        let inv = mod_inverse(&jp, &m).expect("unit");
        let term = (&spow * inv * ell_pow(ell, e as u32)) % &m;
        if j % 2 == 1 {
            acc += BigInt::from(term);
        } else {
            acc -= BigInt::from(term);
        }
    }
    reduce_signed(&acc, &m)
}

fn floor_log(ell: u64, j: u64) -> u32 {
    let mut k = 0;
    let mut p = ell;
    while p <= j {
        k += 1;
        p = p.saturating_mul(ell);
    }
    k
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident, $checked:ident) => {
        impl<'a> $tr<&'a PadicScalar> for &'a PadicScalar {
            type Output = PadicScalar;
            /// # Panics
            /// Panics on mixed primes.
            fn $method(self, rhs: &'a PadicScalar) -> PadicScalar {
                self.$checked(rhs).expect("padic operation")
            }
        }
        impl $tr<PadicScalar> for PadicScalar {
            type Output = PadicScalar;
            fn $method(self, rhs: PadicScalar) -> PadicScalar {
                (&self).$method(&rhs)
            }
        }
    };
}

forward_binop!(Add, add, checked_add);
forward_binop!(Sub, sub, checked_sub);
forward_binop!(Mul, mul, checked_mul);

impl Div for PadicScalar {
    type Output = Result<PadicScalar>;
    fn div(self, rhs: PadicScalar) -> Result<PadicScalar> {
        self.checked_div(&rhs)
    }
}

impl<'a> Div<&'a PadicScalar> for &'a PadicScalar {
    type Output = Result<PadicScalar>;
    fn div(self, rhs: &'a PadicScalar) -> Result<PadicScalar> {
        self.checked_div(rhs)
    }
}

impl Neg for PadicScalar {
    type Output = PadicScalar;
    fn neg(self) -> PadicScalar {
        self.neg_ref()
    }
}

impl Neg for &PadicScalar {
    type Output = PadicScalar;
    fn neg(self) -> PadicScalar {
        self.neg_ref()
    }
}

/// Renders `l^v * (d0 + d1*l + d2*l^2 + ... + O(l^N))`, zero digits omitted.
/// A value indistinguishable from zero renders as `O(l^v)`.
impl fmt::Display for PadicScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let l = self.ell;
        if self.is_zero() {
            return write!(f, "O({}^{})", l, self.val);
        }
        write!(f, "{}^{} * (", l, self.val)?;
        let lb = BigUint::from(l);
        let mut u = self.unit.clone();
        let mut i = 0;
        while !u.is_zero() {
            let (q, r) = u.div_rem(&lb);
            if !r.is_zero() {
                match i {
                    0 => write!(f, "{} + ", r)?,
                    1 => write!(f, "{}*{} + ", r, l)?,
                    _ => write!(f, "{}*{}^{} + ", r, l, i)?,
                }
            }
            u = q;
            i += 1;
        }
        write!(f, "O({}^{}))", l, self.prec)
    }
}

impl FromStr for PadicScalar {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Invalid(format!("malformed l-adic literal `{}`", s));
        let s = s.trim();
        let parse_pow = |t: &str| -> Result<(u64, i64)> {
            let (b, e) = t.trim().split_once('^').ok_or_else(bad)?;
            Ok((b.trim().parse().map_err(|_| bad())?, e.trim().parse().map_err(|_| bad())?))
        };
        let parse_big_o = |t: &str| -> Result<(u64, i64)> {
            let inner = t.trim().strip_prefix("O(").and_then(|r| r.strip_suffix(')')).ok_or_else(bad)?;
            parse_pow(inner)
        };
        if s.starts_with("O(") {
            let (l, v) = parse_big_o(s)?;
            return Ok(Self::zero(l, v));
        }
        let (head, body) = s.split_once('*').ok_or_else(bad)?;
        let (ell, val) = parse_pow(head)?;
        let body = body.trim().strip_prefix('(').and_then(|r| r.strip_suffix(')')).ok_or_else(bad)?;
        let terms: Vec<&str> = body.split('+').map(str::trim).collect();
        let (last, digits) = terms.split_last().ok_or_else(bad)?;
        let (l2, prec) = parse_big_o(last)?;
        if l2 != ell || prec <= 0 {
            return Err(bad());
        }
        let mut unit = BigUint::zero();
        for t in digits {
            let (d, i) = match t.split_once('*') {
                None => (t.parse::<u64>().map_err(|_| bad())?, 0u32),
                Some((d, p)) => {
                    let d = d.trim().parse::<u64>().map_err(|_| bad())?;
                    let i = if p.trim() == ell.to_string() {
                        1
                    } else {
                        let (b, e) = parse_pow(p)?;
                        if b != ell {
                            return Err(bad());
                        }
                        e.to_u32().ok_or_else(bad)?
                    };
                    (d, i)
                }
            };
            if d >= ell {
                return Err(bad());
            }
            unit += BigUint::from(d) * ell_pow(ell, i);
        }
        let prec = prec as u32;
        if unit.is_zero() || (&unit % ell) .is_zero() || unit >= ell_pow(ell, prec) {
            return Err(bad());
        }
        Ok(PadicScalar { ell, val, prec, unit })
    }
}

impl PartialEq for PadicScalar {
    /// Representation equality (same valuation, precision and digits).
    fn eq(&self, other: &Self) -> bool {
        self.ell == other.ell && self.val == other.val && self.prec == other.prec && self.unit == other.unit
    }
}

impl Eq for PadicScalar {}

/// Integer `l`-adic valuation of a nonzero signed integer.
pub fn val_bigint(ell: u64, n: &BigInt) -> u32 {
    val_biguint(ell, n.magnitude())
}

/// `l`-adic valuation of a nonzero rational number.
pub fn val_rational(ell: u64, q: &BigRational) -> i64 {
    val_bigint(ell, q.numer()) as i64 - val_bigint(ell, q.denom()) as i64
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(ell: u64, n: i64, prec: u32) -> PadicScalar {
        PadicScalar::from_i64(ell, n, prec)
    }

    #[test]
    fn one_plus_two_has_valuation_one() {
        let s = p(3, 1, 10) + p(3, 2, 10);
        assert_eq!(s.valuation(), Some(1));
        assert!(s.eq_at_prec(&p(3, 3, 10)));
    }

    #[test]
    fn inverse_identity() {
        let x = p(3, 2, 10);
        let y = (&x * &x.inv().unwrap()).residue(10).unwrap();
        assert_eq!(y, BigUint::one());
    }

    #[test]
    fn half_mod_power_of_three() {
        let n = 12;
        let h = (p(3, 1, n) / p(3, 2, n)).unwrap();
        let m = ell_pow(3, n);
        assert_eq!(h.residue(n).unwrap(), (&m + 1u32) / 2u32);
        assert_eq!((h.residue(n).unwrap() * 2u32) % &m, BigUint::one());
    }

    #[test]
    fn cancellation_lowers_precision() {
        let a = p(3, 1 + 3i64.pow(6), 10);
        let d = &a - &p(3, 1, 10);
        assert_eq!(d.valuation(), Some(6));
        assert_eq!(d.abs_prec(), 10);
        assert_eq!(d.rel_prec(), 4);
    }

    #[test]
    fn log_conventions() {
        for &l in &[2u64, 3, 5, 7] {
            assert!(p(l, l as i64, 20).iwasawa_log().unwrap().is_zero());
            assert!(p(l, -1, 20).iwasawa_log().unwrap().is_zero());
        }
        assert_eq!(p(3, 4, 20).iwasawa_log().unwrap().valuation(), Some(1));
        assert_eq!(p(2, 5, 20).iwasawa_log().unwrap().valuation(), Some(2));
    }

    #[test]
    fn log_of_four_is_twice_log_of_two() {
        let l4 = p(3, 4, 8).iwasawa_log().unwrap();
        let l2 = p(3, 2, 8).iwasawa_log().unwrap();
        assert!(l4.eq_at_prec(&(&l2 + &l2)));
        assert!(p(3, 0, 8).iwasawa_log().is_err());
    }

    #[test]
    fn teichmuller_examples() {
        assert!(p(3, 4, 10).teichmuller().unwrap().eq_at_prec(&p(3, 1, 10)));
        assert!(p(3, 2, 10).teichmuller().unwrap().eq_at_prec(&p(3, -1, 10)));
        let w = p(5, 2, 6).teichmuller().unwrap();
        assert_eq!(w.residue(1).unwrap(), BigUint::from(2u32));
        assert!(w.pow(4).unwrap().eq_at_prec(&p(5, 1, 6)));
        assert!(p(3, 3, 10).teichmuller().is_err());
    }

    #[test]
    fn render_and_parse() {
        let x = PadicScalar::from_rational(3, &BigRational::new(BigInt::from(-7), BigInt::from(9)), 6);
        let s = x.to_string();
        assert_eq!(s.parse::<PadicScalar>().unwrap(), x);
        assert_eq!("O(5^3)".parse::<PadicScalar>().unwrap(), PadicScalar::zero(5, 3));
        assert_eq!(p(3, 10, 4).to_string(), "3^0 * (1 + 1*3^2 + O(3^4))");
        assert!("3^0 * (3 + O(3^2))".parse::<PadicScalar>().is_err());
    }

    #[test]
    fn mixed_primes_rejected() {
        assert!(p(3, 1, 5).checked_add(&p(5, 1, 5)).is_err());
        assert!(p(3, 1, 5).checked_div(&PadicScalar::zero(3, 5)).is_err());
    }
}
