use std::fmt;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::dense;
use super::field::{BaseField, CoeffField, FpF, Scalar, QF};
use crate::error::{Error, Result};

/// Dense univariate polynomial in t over the base field. Exact everywhere;
/// the zero polynomial has degree -1.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Poly {
    repr: Repr,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
enum Repr {
    Rat(Vec<BigRational>),
    Mod { p: u32, coeffs: Vec<u64> },
}

impl Poly {
    pub fn zero(field: BaseField) -> Self {
        match field {
            BaseField::Rationals => Poly { repr: Repr::Rat(Vec::new()) },
            BaseField::PrimeField(p) => Poly { repr: Repr::Mod { p, coeffs: Vec::new() } },
        }
    }

    pub fn one(field: BaseField) -> Self {
        Poly::constant(Scalar::one(field))
    }

    pub fn constant(c: Scalar) -> Self {
        match c {
            Scalar::Rat(r) => {
                let mut v = vec![r];
                dense::trim(&QF, &mut v);
                Poly { repr: Repr::Rat(v) }
            }
            Scalar::Mod { p, val } => {
                let mut v = vec![val % p as u64];
                dense::trim(&FpF { p: p as u64 }, &mut v);
                Poly { repr: Repr::Mod { p, coeffs: v } }
            }
        }
    }

    /// The variable t.
    pub fn var(field: BaseField) -> Self {
        match field {
            BaseField::Rationals => {
                Poly { repr: Repr::Rat(vec![BigRational::zero(), BigRational::one()]) }
            }
            BaseField::PrimeField(p) => Poly { repr: Repr::Mod { p, coeffs: vec![0, 1] } },
        }
    }

    /// Coefficients low-to-high from integers.
    pub fn from_int_coeffs(field: BaseField, coeffs: &[i64]) -> Self {
        let scalars: Vec<Scalar> =
            coeffs.iter().map(|&c| Scalar::from_integer(field, c)).collect();
        Poly::from_scalars(field, scalars)
    }

    pub fn from_scalars(field: BaseField, coeffs: Vec<Scalar>) -> Self {
        match field {
            BaseField::Rationals => {
                let mut v: Vec<BigRational> = coeffs
                    .into_iter()
                    .map(|s| match s {
                        Scalar::Rat(r) => r,
                        _ => panic!("mixed base fields"),
                    })
                    .collect();
                dense::trim(&QF, &mut v);
                Poly { repr: Repr::Rat(v) }
            }
            BaseField::PrimeField(p) => {
                let mut v: Vec<u64> = coeffs
                    .into_iter()
                    .map(|s| match s {
                        Scalar::Mod { p: q, val } => {
                            assert_eq!(p, q, "mixed prime fields");
                            val
                        }
                        _ => panic!("mixed base fields"),
                    })
                    .collect();
                dense::trim(&FpF { p: p as u64 }, &mut v);
                Poly { repr: Repr::Mod { p, coeffs: v } }
            }
        }
    }

    pub fn field(&self) -> BaseField {
        match &self.repr {
            Repr::Rat(_) => BaseField::Rationals,
            Repr::Mod { p, .. } => BaseField::PrimeField(*p),
        }
    }

    /// Degree in t; -1 for the zero polynomial.
    pub fn degree(&self) -> isize {
        match &self.repr {
            Repr::Rat(v) => v.len() as isize - 1,
            Repr::Mod { coeffs, .. } => coeffs.len() as isize - 1,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.degree() < 0
    }

    pub fn coeff(&self, i: usize) -> Scalar {
        match &self.repr {
            Repr::Rat(v) => {
                Scalar::Rat(v.get(i).cloned().unwrap_or_else(BigRational::zero))
            }
            Repr::Mod { p, coeffs } => {
                Scalar::Mod { p: *p, val: coeffs.get(i).copied().unwrap_or(0) }
            }
        }
    }

    pub fn leading_coeff(&self) -> Scalar {
        if self.is_zero() {
            Scalar::zero(self.field())
        } else {
            self.coeff(self.degree() as usize)
        }
    }

    pub fn add(&self, other: &Poly) -> Poly {
        match (&self.repr, &other.repr) {
            (Repr::Rat(a), Repr::Rat(b)) => Poly { repr: Repr::Rat(dense::add(&QF, a, b)) },
            (Repr::Mod { p, coeffs: a }, Repr::Mod { p: q, coeffs: b }) => {
                assert_eq!(p, q, "mixed prime fields");
                Poly {
                    repr: Repr::Mod { p: *p, coeffs: dense::add(&FpF { p: *p as u64 }, a, b) },
                }
            }
            _ => panic!("mixed base fields"),
        }
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        match (&self.repr, &other.repr) {
            (Repr::Rat(a), Repr::Rat(b)) => Poly { repr: Repr::Rat(dense::sub(&QF, a, b)) },
            (Repr::Mod { p, coeffs: a }, Repr::Mod { p: q, coeffs: b }) => {
                assert_eq!(p, q, "mixed prime fields");
                Poly {
                    repr: Repr::Mod { p: *p, coeffs: dense::sub(&FpF { p: *p as u64 }, a, b) },
                }
            }
            _ => panic!("mixed base fields"),
        }
    }

    pub fn neg(&self) -> Poly {
        match &self.repr {
            Repr::Rat(a) => Poly { repr: Repr::Rat(dense::neg(&QF, a)) },
            Repr::Mod { p, coeffs } => Poly {
                repr: Repr::Mod { p: *p, coeffs: dense::neg(&FpF { p: *p as u64 }, coeffs) },
            },
        }
    }

    pub fn is_one(&self) -> bool {
        self.degree() == 0 && {
            let lc = self.leading_coeff();
            lc == Scalar::one(lc.field())
        }
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        // constant-one factors are common in evaluation pipelines and the
        // coefficients can be megabyte-scale; skip the full pass
        if self.is_one() {
            return other.clone();
        }
        if other.is_one() {
            return self.clone();
        }
        match (&self.repr, &other.repr) {
            (Repr::Rat(a), Repr::Rat(b)) => Poly { repr: Repr::Rat(rat_mul(a, b)) },
            (Repr::Mod { p, coeffs: a }, Repr::Mod { p: q, coeffs: b }) => {
                assert_eq!(p, q, "mixed prime fields");
                Poly {
                    repr: Repr::Mod { p: *p, coeffs: dense::mul(&FpF { p: *p as u64 }, a, b) },
                }
            }
            _ => panic!("mixed base fields"),
        }
    }

    pub fn mul_scalar(&self, c: &Scalar) -> Poly {
        if *c == Scalar::one(c.field()) {
            return self.clone();
        }
        match (&self.repr, c) {
            (Repr::Rat(a), Scalar::Rat(c)) => Poly { repr: Repr::Rat(dense::scale(&QF, a, c)) },
            (Repr::Mod { p, coeffs }, Scalar::Mod { p: q, val }) => {
                assert_eq!(p, q, "mixed prime fields");
                Poly {
                    repr: Repr::Mod {
                        p: *p,
                        coeffs: dense::scale(&FpF { p: *p as u64 }, coeffs, val),
                    },
                }
            }
            _ => panic!("mixed base fields"),
        }
    }

    /// Multiply by t^k.
    pub fn shift_up(&self, k: usize) -> Poly {
        if self.is_zero() || k == 0 {
            return self.clone();
        }
        match &self.repr {
            Repr::Rat(a) => {
                let mut v = vec![BigRational::zero(); k];
                v.extend(a.iter().cloned());
                Poly { repr: Repr::Rat(v) }
            }
            Repr::Mod { p, coeffs } => {
                let mut v = vec![0u64; k];
                v.extend(coeffs.iter().copied());
                Poly { repr: Repr::Mod { p: *p, coeffs: v } }
            }
        }
    }

    pub fn pow(&self, e: u32) -> Poly {
        let mut acc = Poly::one(self.field());
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Euclidean division; `other` must be nonzero.
    pub fn divrem(&self, other: &Poly) -> (Poly, Poly) {
        assert!(!other.is_zero(), "division by zero polynomial");
        match (&self.repr, &other.repr) {
            (Repr::Rat(a), Repr::Rat(b)) => {
                let (q, r) = dense::divrem(&QF, a, b);
                (Poly { repr: Repr::Rat(q) }, Poly { repr: Repr::Rat(r) })
            }
            (Repr::Mod { p, coeffs: a }, Repr::Mod { p: q0, coeffs: b }) => {
                assert_eq!(p, q0, "mixed prime fields");
                let (q, r) = dense::divrem(&FpF { p: *p as u64 }, a, b);
                (
                    Poly { repr: Repr::Mod { p: *p, coeffs: q } },
                    Poly { repr: Repr::Mod { p: *p, coeffs: r } },
                )
            }
            _ => panic!("mixed base fields"),
        }
    }

    pub fn divides(&self, other: &Poly) -> bool {
        if self.is_zero() {
            return other.is_zero();
        }
        other.divrem(self).1.is_zero()
    }

    pub fn exact_div(&self, other: &Poly) -> Poly {
        let (q, r) = self.divrem(other);
        assert!(r.is_zero(), "division was not exact");
        q
    }

    pub fn derivative(&self) -> Poly {
        match &self.repr {
            Repr::Rat(a) => {
                let mut v: Vec<BigRational> = a
                    .iter()
                    .enumerate()
                    .skip(1)
                    .map(|(i, c)| c * BigRational::from(BigInt::from(i)))
                    .collect();
                dense::trim(&QF, &mut v);
                Poly { repr: Repr::Rat(v) }
            }
            Repr::Mod { p, coeffs } => {
                let f = FpF { p: *p as u64 };
                let mut v: Vec<u64> = coeffs
                    .iter()
                    .enumerate()
                    .skip(1)
                    .map(|(i, c)| f.mul(&(i as u64 % f.p), c))
                    .collect();
                dense::trim(&f, &mut v);
                Poly { repr: Repr::Mod { p: *p, coeffs: v } }
            }
        }
    }

    pub fn eval(&self, x: &Scalar) -> Scalar {
        match (&self.repr, x) {
            (Repr::Rat(a), Scalar::Rat(x)) => Scalar::Rat(dense::eval(&QF, a, x)),
            (Repr::Mod { p, coeffs }, Scalar::Mod { p: q, val }) => {
                assert_eq!(p, q, "mixed prime fields");
                Scalar::Mod { p: *p, val: dense::eval(&FpF { p: *p as u64 }, coeffs, val) }
            }
            _ => panic!("mixed base fields"),
        }
    }

    pub fn make_monic(&self) -> Poly {
        match &self.repr {
            Repr::Rat(a) => Poly { repr: Repr::Rat(dense::make_monic(&QF, a)) },
            Repr::Mod { p, coeffs } => Poly {
                repr: Repr::Mod { p: *p, coeffs: dense::make_monic(&FpF { p: *p as u64 }, coeffs) },
            },
        }
    }

    /// Over Q, rewrites c*g with g integer-primitive and positive leading
    /// coefficient, returning (g, c). Over F_p returns (monic, lc).
    pub fn unit_normal(&self) -> (Poly, Scalar) {
        if self.is_zero() {
            return (self.clone(), Scalar::one(self.field()));
        }
        match &self.repr {
            Repr::Rat(a) => {
                let mut denom_lcm = BigInt::one();
                for c in a {
                    denom_lcm = denom_lcm.lcm(c.denom());
                }
                let ints: Vec<BigInt> =
                    a.iter().map(|c| (c * BigRational::from(denom_lcm.clone())).to_integer()).collect();
                let mut g = BigInt::zero();
                for c in &ints {
                    g = g.gcd(c);
                }
                if g.is_zero() {
                    g = BigInt::one();
                }
                if ints.last().map(|c| c.is_negative()).unwrap_or(false) {
                    g = -g;
                }
                let scale = BigRational::new(g.clone(), denom_lcm.clone());
                let prim: Vec<BigRational> =
                    ints.iter().map(|c| BigRational::from(c / &g)).collect();
                (Poly { repr: Repr::Rat(prim) }, Scalar::Rat(scale))
            }
            Repr::Mod { .. } => (self.make_monic(), self.leading_coeff()),
        }
    }

    /// gcd with monic unit normalization; gcd(0, 0) = 0.
    pub fn gcd(&self, other: &Poly) -> Poly {
        match (&self.repr, &other.repr) {
            (Repr::Rat(a), Repr::Rat(b)) => Poly { repr: Repr::Rat(dense::gcd(&QF, a, b)) },
            (Repr::Mod { p, coeffs: a }, Repr::Mod { p: q, coeffs: b }) => {
                assert_eq!(p, q, "mixed prime fields");
                Poly {
                    repr: Repr::Mod { p: *p, coeffs: dense::gcd(&FpF { p: *p as u64 }, a, b) },
                }
            }
            _ => panic!("mixed base fields"),
        }
    }

    /// Base substitution t -> u(t); errors when u is constant.
    pub fn substitute(&self, u: &Poly) -> Result<Poly> {
        if u.degree() < 1 {
            return Err(Error::ConstantSubstitution);
        }
        Ok(self.substitute_unchecked(u))
    }

    pub(crate) fn substitute_unchecked(&self, u: &Poly) -> Poly {
        match (&self.repr, &u.repr) {
            (Repr::Rat(a), Repr::Rat(b)) => Poly { repr: Repr::Rat(dense::compose(&QF, a, b)) },
            (Repr::Mod { p, coeffs: a }, Repr::Mod { p: q, coeffs: b }) => {
                assert_eq!(p, q, "mixed prime fields");
                Poly {
                    repr: Repr::Mod { p: *p, coeffs: dense::compose(&FpF { p: *p as u64 }, a, b) },
                }
            }
            _ => panic!("mixed base fields"),
        }
    }

    /// Coefficient reversal: t^deg * self(1/t).
    pub fn reverse(&self) -> Poly {
        match &self.repr {
            Repr::Rat(a) => {
                let mut v: Vec<BigRational> = a.iter().rev().cloned().collect();
                dense::trim(&QF, &mut v);
                Poly { repr: Repr::Rat(v) }
            }
            Repr::Mod { p, coeffs } => {
                let mut v: Vec<u64> = coeffs.iter().rev().copied().collect();
                dense::trim(&FpF { p: *p as u64 }, &mut v);
                Poly { repr: Repr::Mod { p: *p, coeffs: v } }
            }
        }
    }

    /// Rational coefficient view; panics over F_p.
    pub fn rat_coeffs(&self) -> &[BigRational] {
        match &self.repr {
            Repr::Rat(v) => v,
            _ => panic!("rat_coeffs on a prime-field polynomial"),
        }
    }

    pub fn from_rat_coeffs(mut v: Vec<BigRational>) -> Poly {
        dense::trim(&QF, &mut v);
        Poly { repr: Repr::Rat(v) }
    }
}

/// poly_gcd per the module contract: unit-normalized (monic) gcd.
pub fn poly_gcd(a: &Poly, b: &Poly) -> Poly {
    a.gcd(b)
}

// -- fast rational multiplication ----------------------------------------

fn rat_mul(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let small = a.len().min(b.len());
    if small < 64 {
        return dense::mul(&QF, a, b);
    }
    // clear denominators, multiply over Z via Kronecker substitution
    let (ai, da) = clear_denoms(a);
    let (bi, db) = clear_denoms(b);
    let prod = kronecker_mul_int(&ai, &bi);
    let scale = BigRational::new(BigInt::one(), &da * &db);
    let mut out: Vec<BigRational> =
        prod.into_iter().map(|c| BigRational::from(c) * &scale).collect();
    dense::trim(&QF, &mut out);
    out
}

fn clear_denoms(a: &[BigRational]) -> (Vec<BigInt>, BigInt) {
    let mut l = BigInt::one();
    for c in a {
        l = l.lcm(c.denom());
    }
    let lr = BigRational::from(l.clone());
    (a.iter().map(|c| (c * &lr).to_integer()).collect(), l)
}

/// Exact signed Kronecker-substitution product of integer polynomials.
fn kronecker_mul_int(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let bits_a = a.iter().map(|c| c.magnitude().bits()).max().unwrap_or(0);
    let bits_b = b.iter().map(|c| c.magnitude().bits()).max().unwrap_or(0);
    let small = a.len().min(b.len()) as u64;
    let need = bits_a + bits_b + 64 - small.leading_zeros() as u64 + 2;
    let slot_bits = ((need + 7) / 8 * 8) as usize;
    let slot = slot_bits / 8;
    let pack = |v: &[BigInt]| -> BigInt {
        let mut pos = vec![0u8; v.len() * slot];
        let mut neg = vec![0u8; v.len() * slot];
        for (i, c) in v.iter().enumerate() {
            let bytes = c.magnitude().to_bytes_le();
            let dst = if c.is_negative() { &mut neg } else { &mut pos };
            dst[i * slot..i * slot + bytes.len()].copy_from_slice(&bytes);
        }
        BigInt::from_biguint(Sign::Plus, BigUint::from_bytes_le(&pos))
            - BigInt::from_biguint(Sign::Plus, BigUint::from_bytes_le(&neg))
    };
    let prod = pack(a) * pack(b);
    let negate = prod.is_negative();
    let bytes = prod.magnitude().to_bytes_le();
    let nslots = a.len() + b.len() - 1;
    let half = BigUint::one() << (slot_bits - 1);
    let full = BigUint::one() << slot_bits;
    let mut out = Vec::with_capacity(nslots);
    let mut carry = BigUint::zero();
    for i in 0..nslots {
        let lo = (i * slot).min(bytes.len());
        let hi = ((i + 1) * slot).min(bytes.len());
        let digit = BigUint::from_bytes_le(&bytes[lo..hi]) + &carry;
        if digit >= half {
            out.push(BigInt::from_biguint(Sign::Plus, &full - &digit).neg_unless_zero());
            carry = BigUint::one();
        } else {
            out.push(BigInt::from_biguint(Sign::Plus, digit));
            carry = BigUint::zero();
        }
    }
    if negate {
        out.iter_mut().for_each(|c| *c = -(std::mem::take(c)));
    }
    out
}

trait NegUnlessZero {
    fn neg_unless_zero(self) -> Self;
}
impl NegUnlessZero for BigInt {
    fn neg_unless_zero(self) -> Self {
        if self.is_zero() {
            self
        } else {
            -self
        }
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_terms(
            f,
            (0..=self.degree().max(0) as usize)
                .rev()
                .map(|i| (self.coeff(i), i))
                .filter(|(c, _)| !c.is_zero()),
            "t",
        )
    }
}

/// Shared term printer; keeps output inside the expression grammar
/// (binary +/-, signed rational literals, explicit `*`).
pub(crate) fn write_terms<I>(f: &mut fmt::Formatter<'_>, terms: I, var: &str) -> fmt::Result
where
    I: Iterator<Item = (Scalar, usize)>,
{
    let mut first = true;
    let mut empty = true;
    for (c, e) in terms {
        empty = false;
        let (neg, mag) = match &c {
            Scalar::Rat(r) if r.is_negative() => (true, Scalar::Rat(-r)),
            other => (false, other.clone()),
        };
        // a leading minus must stay inside the literal: "-1*t", not "-t"
        let force_coeff = first && neg;
        if first {
            if neg {
                write!(f, "-")?;
            }
            first = false;
        } else if neg {
            write!(f, " - ")?;
        } else {
            write!(f, " + ")?;
        }
        let mag_is_one = mag == Scalar::one(mag.field());
        match e {
            0 => write!(f, "{}", mag)?,
            _ => {
                if !mag_is_one || force_coeff {
                    write!(f, "{}*", mag)?;
                }
                if e == 1 {
                    write!(f, "{}", var)?;
                } else {
                    write!(f, "{}^{}", var, e)?;
                }
            }
        }
    }
    if empty {
        write!(f, "0")?;
    }
    Ok(())
}
