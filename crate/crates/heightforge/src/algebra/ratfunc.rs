use std::fmt;

use super::field::{BaseField, Scalar};
use super::poly::Poly;
use crate::error::{Error, Result};

/// Element of K = k(t), reduced with monic denominator.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RatFunc {
    num: Poly,
    den: Poly,
}

impl RatFunc {
    pub fn new(num: Poly, den: Poly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero("rational function"));
        }
        Ok(Self::reduced(num, den))
    }

    fn reduced(num: Poly, den: Poly) -> Self {
        if num.is_zero() {
            return RatFunc { num: Poly::zero(den.field()), den: Poly::one(den.field()) };
        }
        let g = num.gcd(&den);
        let mut num = num.exact_div(&g);
        let mut den = den.exact_div(&g);
        let lc = den.leading_coeff();
        let inv = lc.inv().expect("nonzero leading coefficient");
        num = num.mul_scalar(&inv);
        den = den.mul_scalar(&inv);
        RatFunc { num, den }
    }

    pub fn from_poly(p: Poly) -> Self {
        let one = Poly::one(p.field());
        RatFunc { num: p, den: one }
    }

    pub fn constant(c: Scalar) -> Self {
        RatFunc::from_poly(Poly::constant(c))
    }

    pub fn field(&self) -> BaseField {
        self.num.field()
    }

    pub fn numerator(&self) -> &Poly {
        &self.num
    }

    pub fn denominator(&self) -> &Poly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.degree() == 0
    }

    pub fn add(&self, other: &RatFunc) -> RatFunc {
        RatFunc::reduced(
            self.num.mul(&other.den).add(&other.num.mul(&self.den)),
            self.den.mul(&other.den),
        )
    }

    pub fn sub(&self, other: &RatFunc) -> RatFunc {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> RatFunc {
        RatFunc { num: self.num.neg(), den: self.den.clone() }
    }

    pub fn mul(&self, other: &RatFunc) -> RatFunc {
        RatFunc::reduced(self.num.mul(&other.num), self.den.mul(&other.den))
    }

    pub fn div(&self, other: &RatFunc) -> Result<RatFunc> {
        if other.is_zero() {
            return Err(Error::DivisionByZero("rational function"));
        }
        Ok(RatFunc::reduced(self.num.mul(&other.den), self.den.mul(&other.num)))
    }

    pub fn pow(&self, e: u32) -> RatFunc {
        RatFunc { num: self.num.pow(e), den: self.den.pow(e) }
    }

    /// Base substitution t -> u(t).
    pub fn substitute(&self, u: &Poly) -> Result<RatFunc> {
        let num = self.num.substitute(u)?;
        let den = self.den.substitute(u)?;
        Ok(RatFunc::reduced(num, den))
    }
}

impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_polynomial() {
            return write!(f, "{}", self.num);
        }
        write!(f, "({})/({})", self.num, self.den)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(coeffs: &[i64]) -> Poly {
        Poly::from_int_coeffs(BaseField::Rationals, coeffs)
    }

    #[test]
    fn reduction_and_monic_denominator() {
        // (2t^2 + 2t) / (4t) = (t + 1) / 2
        let r = RatFunc::new(q(&[0, 2, 2]), q(&[0, 4])).unwrap();
        assert_eq!(r.denominator(), &q(&[1]));
        // numerator (t+1)/2
        assert_eq!(r.numerator().mul_scalar(&Scalar::from_integer(BaseField::Rationals, 2)), q(&[1, 1]));
    }

    #[test]
    fn substitute_example() {
        // t/(t+1) with u = t+1 -> (t+1)/(t+2)
        let r = RatFunc::new(q(&[0, 1]), q(&[1, 1])).unwrap();
        let s = r.substitute(&q(&[1, 1])).unwrap();
        assert_eq!(s.numerator(), &q(&[1, 1]));
        assert_eq!(s.denominator(), &q(&[2, 1]));
    }

    #[test]
    fn field_arithmetic() {
        let a = RatFunc::new(q(&[0, 1]), q(&[1, 1])).unwrap(); // t/(t+1)
        let b = RatFunc::new(q(&[1]), q(&[1, 1])).unwrap(); // 1/(t+1)
        let s = a.add(&b); // (t+1)/(t+1) = 1
        assert_eq!(s, RatFunc::from_poly(q(&[1])));
        let d = a.div(&b).unwrap(); // t
        assert_eq!(d, RatFunc::from_poly(q(&[0, 1])));
    }
}
