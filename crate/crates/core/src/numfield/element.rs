use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Serialize, Serializer};

/// Element of a number field, written on the integral basis as
/// `(num_0 omega_0 + ... + num_{n-1} omega_{n-1}) / den` with `den > 0` and
/// `gcd(num, den) = 1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct AlgebraicNum {
    num: Vec<BigInt>,
    den: BigInt,
}

impl AlgebraicNum {
    pub fn new(num: Vec<BigInt>, den: BigInt) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        let mut g = den.abs();
        for x in &num {
            if g.is_one() {
                break;
            }
            g = g.gcd(x);
        }
        let sign = if den.is_negative() { -BigInt::one() } else { BigInt::one() };
        let g = g * sign;
        AlgebraicNum { num: num.iter().map(|x| x / &g).collect(), den: den / g }
    }

    pub fn zero(n: usize) -> Self {
        AlgebraicNum { num: vec![BigInt::zero(); n], den: BigInt::one() }
    }

    pub fn from_rationals(c: &[BigRational]) -> Self {
        let den = c.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
        let num = c.iter().map(|x| x.numer() * (&den / x.denom())).collect();
        AlgebraicNum::new(num, den)
    }

    pub fn from_ints(c: &[i64]) -> Self {
        AlgebraicNum::new(c.iter().map(|&x| BigInt::from(x)).collect(), BigInt::one())
    }

    pub fn num(&self) -> &[BigInt] {
        &self.num
    }

    pub fn den(&self) -> &BigInt {
        &self.den
    }

    pub fn coords(&self) -> Vec<BigRational> {
        self.num.iter().map(|x| BigRational::new(x.clone(), self.den.clone())).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.num.iter().all(Zero::is_zero)
    }

    pub fn is_integral(&self) -> bool {
        self.den.is_one()
    }

    /// Largest absolute coordinate of the numerator.
    pub fn height(&self) -> BigInt {
        self.num.iter().map(|x| x.abs()).max().unwrap_or_default()
    }
}

impl Serialize for AlgebraicNum {
    /// Serialized as rational coordinate strings on the integral basis.
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let v: Vec<String> = self.coords().iter().map(|c| c.to_string()).collect();
        v.serialize(s)
    }
}
