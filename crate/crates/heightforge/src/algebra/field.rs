use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

/// The coefficient field k: exact rationals or a prime field F_p, p < 2^31.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BaseField {
    Rationals,
    PrimeField(u32),
}

impl BaseField {
    pub fn rationals() -> Self {
        BaseField::Rationals
    }

    pub fn prime(p: u32) -> Result<Self> {
        if is_prime(p as u64) {
            Ok(BaseField::PrimeField(p))
        } else {
            Err(Error::NotPrime(p as u64))
        }
    }

    pub fn characteristic(&self) -> u32 {
        match self {
            BaseField::Rationals => 0,
            BaseField::PrimeField(p) => *p,
        }
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, BaseField::PrimeField(_))
    }
}

impl fmt::Display for BaseField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BaseField::Rationals => write!(f, "Q"),
            BaseField::PrimeField(p) => write!(f, "F{}", p),
        }
    }
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for q in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31] {
        if n == q {
            return true;
        }
        if n % q == 0 {
            return false;
        }
    }
    // deterministic Miller-Rabin, valid for n < 3.2e18
    let d = (n - 1) >> (n - 1).trailing_zeros();
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a % n, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        let mut r = d;
        while r != n - 1 {
            x = mul_mod(x, x, n);
            r <<= 1;
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1u64;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, b, m);
        }
        b = mul_mod(b, b, m);
        e >>= 1;
    }
    acc
}

/// A base-field element. Prime-field values carry their modulus so that
/// scalars are self-contained; mixing moduli is a programming error.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Scalar {
    Rat(BigRational),
    Mod { p: u32, val: u64 },
}

impl Scalar {
    pub fn field(&self) -> BaseField {
        match self {
            Scalar::Rat(_) => BaseField::Rationals,
            Scalar::Mod { p, .. } => BaseField::PrimeField(*p),
        }
    }

    pub fn zero(field: BaseField) -> Self {
        match field {
            BaseField::Rationals => Scalar::Rat(BigRational::zero()),
            BaseField::PrimeField(p) => Scalar::Mod { p, val: 0 },
        }
    }

    pub fn one(field: BaseField) -> Self {
        match field {
            BaseField::Rationals => Scalar::Rat(BigRational::one()),
            BaseField::PrimeField(p) => Scalar::Mod { p, val: 1 },
        }
    }

    pub fn from_integer(field: BaseField, n: i64) -> Self {
        match field {
            BaseField::Rationals => Scalar::Rat(BigRational::from(BigInt::from(n))),
            BaseField::PrimeField(p) => {
                let m = p as i64;
                Scalar::Mod { p, val: n.rem_euclid(m) as u64 }
            }
        }
    }

    /// Builds num/den in the field; fails when den vanishes there.
    pub fn from_ratio(field: BaseField, num: &BigInt, den: &BigInt) -> Result<Self> {
        match field {
            BaseField::Rationals => {
                if den.is_zero() {
                    return Err(Error::DivisionByZero("rational literal"));
                }
                Ok(Scalar::Rat(BigRational::new(num.clone(), den.clone())))
            }
            BaseField::PrimeField(p) => {
                let n = bigint_mod(num, p);
                let d = bigint_mod(den, p);
                if d == 0 {
                    return Err(Error::DivisionByZero("rational literal in F_p"));
                }
                let inv = pow_mod(d, p as u64 - 2, p as u64);
                Ok(Scalar::Mod { p, val: mul_mod(n, inv, p as u64) })
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Rat(r) => r.is_zero(),
            Scalar::Mod { val, .. } => *val == 0,
        }
    }

    pub fn add(&self, other: &Scalar) -> Scalar {
        match (self, other) {
            (Scalar::Rat(a), Scalar::Rat(b)) => Scalar::Rat(a + b),
            (Scalar::Mod { p, val: a }, Scalar::Mod { p: q, val: b }) => {
                assert_eq!(p, q, "mixed prime fields");
                Scalar::Mod { p: *p, val: (a + b) % *p as u64 }
            }
            _ => panic!("mixed base fields"),
        }
    }

    pub fn mul(&self, other: &Scalar) -> Scalar {
        match (self, other) {
            (Scalar::Rat(a), Scalar::Rat(b)) => Scalar::Rat(a * b),
            (Scalar::Mod { p, val: a }, Scalar::Mod { p: q, val: b }) => {
                assert_eq!(p, q, "mixed prime fields");
                Scalar::Mod { p: *p, val: mul_mod(*a, *b, *p as u64) }
            }
            _ => panic!("mixed base fields"),
        }
    }

    pub fn neg(&self) -> Scalar {
        match self {
            Scalar::Rat(a) => Scalar::Rat(-a),
            Scalar::Mod { p, val } => {
                Scalar::Mod { p: *p, val: if *val == 0 { 0 } else { *p as u64 - *val } }
            }
        }
    }

    pub fn inv(&self) -> Result<Scalar> {
        if self.is_zero() {
            return Err(Error::DivisionByZero("scalar inverse"));
        }
        Ok(match self {
            Scalar::Rat(a) => Scalar::Rat(a.recip()),
            Scalar::Mod { p, val } => {
                Scalar::Mod { p: *p, val: pow_mod(*val, *p as u64 - 2, *p as u64) }
            }
        })
    }
}

fn bigint_mod(n: &BigInt, p: u32) -> u64 {
    let m = BigInt::from(p);
    let r = ((n % &m) + &m) % &m;
    let (_, digits) = r.to_u64_digits();
    digits.first().copied().unwrap_or(0)
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Rat(r) => write!(f, "{}", r),
            Scalar::Mod { val, .. } => write!(f, "{}", val),
        }
    }
}

/// Internal coefficient-arithmetic context. Polynomial kernels are generic
/// over this so the same algorithms serve Q and F_p.
pub(crate) trait CoeffField {
    type Elem: Clone + PartialEq + fmt::Debug + Send + Sync;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn inv(&self, a: &Self::Elem) -> Self::Elem;
    fn add_assign(&self, a: &mut Self::Elem, b: &Self::Elem) {
        *a = self.add(a, b);
    }
}

pub(crate) struct QF;

impl CoeffField for QF {
    type Elem = BigRational;

    fn zero(&self) -> BigRational {
        BigRational::zero()
    }
    fn one(&self) -> BigRational {
        BigRational::one()
    }
    fn is_zero(&self, a: &BigRational) -> bool {
        a.is_zero()
    }
    fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a + b
    }
    fn sub(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a - b
    }
    fn neg(&self, a: &BigRational) -> BigRational {
        -a
    }
    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }
    fn inv(&self, a: &BigRational) -> BigRational {
        a.recip()
    }
}

pub(crate) struct FpF {
    pub p: u64,
}

impl CoeffField for FpF {
    type Elem = u64;

    fn zero(&self) -> u64 {
        0
    }
    fn one(&self) -> u64 {
        1
    }
    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }
    fn add(&self, a: &u64, b: &u64) -> u64 {
        (a + b) % self.p
    }
    fn sub(&self, a: &u64, b: &u64) -> u64 {
        (a + self.p - b) % self.p
    }
    fn neg(&self, a: &u64) -> u64 {
        if *a == 0 {
            0
        } else {
            self.p - a
        }
    }
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        // p < 2^31, so the product fits in u64
        (a * b) % self.p
    }
    fn inv(&self, a: &u64) -> u64 {
        assert!(*a != 0, "inverse of zero in F_p");
        pow_mod(*a, self.p - 2, self.p)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primality() {
        assert!(BaseField::prime(2).is_ok());
        assert!(BaseField::prime(3).is_ok());
        assert!(BaseField::prime(2147483647).is_ok()); // 2^31 - 1
        assert!(BaseField::prime(1).is_err());
        assert!(BaseField::prime(91).is_err());
    }

    #[test]
    fn scalar_mod_arithmetic() {
        let f = BaseField::prime(7).unwrap();
        let a = Scalar::from_integer(f, -3);
        assert_eq!(a, Scalar::Mod { p: 7, val: 4 });
        let inv = a.inv().unwrap();
        assert!(a.mul(&inv) == Scalar::one(f));
    }

    #[test]
    fn scalar_ratio_in_fp() {
        let f = BaseField::prime(3).unwrap();
        let s = Scalar::from_ratio(f, &BigInt::from(1), &BigInt::from(2)).unwrap();
        // 1/2 = 2 mod 3
        assert_eq!(s, Scalar::Mod { p: 3, val: 2 });
        assert!(Scalar::from_ratio(f, &BigInt::from(1), &BigInt::from(3)).is_err());
    }
}
