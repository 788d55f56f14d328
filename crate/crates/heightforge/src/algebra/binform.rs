use std::fmt;

use super::field::{BaseField, Scalar};
use super::poly::Poly;
use crate::error::{Error, Result};

/// Which homogeneous coordinate pair a form lives in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum VarPair {
    X,
    Y,
}

impl VarPair {
    pub fn names(&self) -> (&'static str, &'static str) {
        match self {
            VarPair::X => ("x0", "x1"),
            VarPair::Y => ("y0", "y1"),
        }
    }
}

/// Homogeneous binary form over k[t]. `coeffs[e]` multiplies V0^e V1^(d-e),
/// so the list is indexed by the V0-exponent and has length d+1.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BinaryForm {
    pub pair: VarPair,
    degree: usize,
    coeffs: Vec<Poly>,
}

impl BinaryForm {
    pub fn new(pair: VarPair, degree: usize, coeffs: Vec<Poly>) -> Self {
        assert_eq!(coeffs.len(), degree + 1, "coefficient list length");
        BinaryForm { pair, degree, coeffs }
    }

    pub fn zero(field: BaseField, pair: VarPair, degree: usize) -> Self {
        BinaryForm { pair, degree, coeffs: vec![Poly::zero(field); degree + 1] }
    }

    /// The form b*V0 - a*V1 vanishing at the point (a : b).
    pub fn from_point(pair: VarPair, a: &Poly, b: &Poly) -> Self {
        BinaryForm { pair, degree: 1, coeffs: vec![a.neg(), b.clone()] }
    }

    pub fn form_degree(&self) -> usize {
        self.degree
    }

    pub fn field(&self) -> BaseField {
        self.coeffs[0].field()
    }

    pub fn coeff(&self, v0_exp: usize) -> &Poly {
        &self.coeffs[v0_exp]
    }

    pub fn coeffs(&self) -> &[Poly] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn deg_t(&self) -> isize {
        self.coeffs.iter().map(|c| c.degree()).max().unwrap_or(-1)
    }

    pub fn mul(&self, other: &BinaryForm) -> BinaryForm {
        assert_eq!(self.pair, other.pair);
        let field = self.field();
        let d = self.degree + other.degree;
        let mut out = vec![Poly::zero(field); d + 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                out[i + j] = out[i + j].add(&a.mul(b));
            }
        }
        BinaryForm { pair: self.pair, degree: d, coeffs: out }
    }

    pub fn mul_poly(&self, p: &Poly) -> BinaryForm {
        BinaryForm {
            pair: self.pair,
            degree: self.degree,
            coeffs: self.coeffs.iter().map(|c| c.mul(p)).collect(),
        }
    }

    /// Substitute (V0, V1) = (a, b); the value is a polynomial in t.
    pub fn eval_point(&self, a: &Poly, b: &Poly) -> Poly {
        let field = self.field();
        let mut acc = Poly::zero(field);
        for (e, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let term = c.mul(&a.pow(e as u32)).mul(&b.pow((self.degree - e) as u32));
            acc = acc.add(&term);
        }
        acc
    }

    pub fn substitute(&self, u: &Poly) -> Result<BinaryForm> {
        if u.degree() < 1 {
            return Err(Error::ConstantSubstitution);
        }
        Ok(BinaryForm {
            pair: self.pair,
            degree: self.degree,
            coeffs: self.coeffs.iter().map(|c| c.substitute_unchecked(u)).collect(),
        })
    }

    /// Content/primitive split with the canonical unit normalization.
    pub fn primitive_part(&self) -> Result<(BinaryForm, Poly)> {
        if self.is_zero() {
            return Err(Error::ZeroForm);
        }
        let (prim, content) = normalize_coeff_list(&self.coeffs);
        Ok((BinaryForm { pair: self.pair, degree: self.degree, coeffs: prim }, content))
    }

    pub fn is_primitive(&self) -> bool {
        match self.primitive_part() {
            Ok((p, _)) => p == *self,
            Err(_) => false,
        }
    }

    /// Multiplicity of V1 as a factor, i.e. the count of roots at (1 : 0).
    pub fn infinity_multiplicity(&self) -> usize {
        let mut k = 0;
        for e in (0..=self.degree).rev() {
            if self.coeffs[e].is_zero() {
                k += 1;
            } else {
                break;
            }
        }
        k
    }
}

/// Divide a coefficient list by its k[t] gcd, then scale so that over Q all
/// coefficients are integers with joint content 1 and the first nonzero
/// entry (highest index) has positive leading coefficient; over F_p that
/// leading coefficient becomes 1. Returns (normalized, content) with
/// original = content * normalized entrywise.
pub(crate) fn normalize_coeff_list(coeffs: &[Poly]) -> (Vec<Poly>, Poly) {
    let field = coeffs[0].field();
    let mut g = Poly::zero(field);
    for c in coeffs {
        g = g.gcd(c);
    }
    if g.is_zero() {
        return (coeffs.to_vec(), Poly::one(field));
    }
    let divided: Vec<Poly> = coeffs.iter().map(|c| c.exact_div(&g)).collect();
    // joint scalar normalization
    let lambda = joint_unit(&divided);
    let inv = lambda.inv().expect("nonzero unit");
    let prim: Vec<Poly> = divided.iter().map(|c| c.mul_scalar(&inv)).collect();
    (prim, g.mul_scalar(&lambda))
}

/// Apply only the scalar part of the canonical normalization; the list is
/// assumed coprime over k[t] already.
pub(crate) fn scalar_normalize_list(polys: &[Poly]) -> Vec<Poly> {
    let lambda = joint_unit(polys);
    let inv = lambda.inv().expect("nonzero unit");
    polys.iter().map(|c| c.mul_scalar(&inv)).collect()
}

/// The unit lambda such that dividing the list by lambda yields the
/// canonical representative.
fn joint_unit(polys: &[Poly]) -> Scalar {
    let field = polys[0].field();
    match field {
        BaseField::PrimeField(_) => {
            for p in polys.iter().rev() {
                if !p.is_zero() {
                    return p.leading_coeff();
                }
            }
            Scalar::one(field)
        }
        BaseField::Rationals => {
            use num_bigint::BigInt;
            use num_integer::Integer;
            use num_rational::BigRational;
            use num_traits::{One, Signed, Zero};
            let mut denom_lcm = BigInt::one();
            for p in polys {
                for c in p.rat_coeffs() {
                    if !c.denom().is_one() {
                        denom_lcm = denom_lcm.lcm(c.denom());
                    }
                }
            }
            let integral = denom_lcm.is_one();
            let mut num_gcd = BigInt::zero();
            'outer: for p in polys {
                for c in p.rat_coeffs() {
                    let int = if integral {
                        c.numer().clone()
                    } else {
                        (c * BigRational::from(denom_lcm.clone())).to_integer()
                    };
                    num_gcd = num_gcd.gcd(&int);
                    if num_gcd.is_one() {
                        break 'outer;
                    }
                }
            }
            if num_gcd.is_zero() {
                return Scalar::one(field);
            }
            // sign from the first nonzero entry, highest index first
            let mut sign_neg = false;
            for p in polys.iter().rev() {
                if !p.is_zero() {
                    if let Scalar::Rat(lc) = p.leading_coeff() {
                        sign_neg = lc.is_negative();
                    }
                    break;
                }
            }
            if sign_neg {
                num_gcd = -num_gcd;
            }
            Scalar::Rat(BigRational::new(num_gcd, denom_lcm))
        }
    }
}

impl fmt::Display for BinaryForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<(String, bool)> = (0..=self.degree)
            .rev()
            .filter(|&e| !self.coeffs[e].is_zero())
            .map(|e| {
                let (v0, v1) = self.pair.names();
                render_signed_term(&self.coeffs[e], &[(v0, e), (v1, self.degree - e)])
            })
            .collect();
        write_joined(f, &terms)
    }
}

/// Renders one term as (magnitude string, is_negative). Sign splitting
/// happens only for monomial coefficients, where the magnitude is still a
/// single grammar atom/product.
pub(crate) fn render_signed_term(coeff: &Poly, vars: &[(&str, usize)]) -> (String, bool) {
    let mono: Vec<String> = vars
        .iter()
        .filter(|(_, e)| *e > 0)
        .map(|(v, e)| if *e == 1 { v.to_string() } else { format!("{}^{}", v, e) })
        .collect();
    let nonzero: Vec<usize> = (0..=coeff.degree().max(0) as usize)
        .filter(|&i| !coeff.coeff(i).is_zero())
        .collect();
    // monomial coefficient: pull the sign out
    if nonzero.len() == 1 {
        let k = nonzero[0];
        let c = coeff.coeff(k);
        let (neg, mag) = match &c {
            Scalar::Rat(r) => {
                use num_traits::Signed;
                (r.is_negative(), Scalar::Rat(r.abs()))
            }
            other => (false, other.clone()),
        };
        let mag_is_one = mag == Scalar::one(mag.field());
        let mut pieces: Vec<String> = Vec::new();
        if !mag_is_one || (k == 0 && mono.is_empty()) {
            pieces.push(format!("{}", mag));
        }
        if k == 1 {
            pieces.push("t".into());
        } else if k > 1 {
            pieces.push(format!("t^{}", k));
        }
        pieces.extend(mono);
        if pieces.is_empty() {
            pieces.push("1".into());
        }
        return (pieces.join("*"), neg);
    }
    // general polynomial coefficient: parenthesize, no sign extraction
    let body = if mono.is_empty() {
        format!("({})", coeff)
    } else {
        format!("({})*{}", coeff, mono.join("*"))
    };
    (body, false)
}

pub(crate) fn write_joined(f: &mut fmt::Formatter<'_>, terms: &[(String, bool)]) -> fmt::Result {
    write!(f, "{}", join_signed_terms(terms))
}

pub(crate) fn join_signed_terms(terms: &[(String, bool)]) -> String {
    if terms.is_empty() {
        return "0".into();
    }
    let mut out = String::new();
    for (i, (mag, neg)) in terms.iter().enumerate() {
        if i == 0 {
            if *neg {
                // keep the leading sign inside a literal product
                out.push_str("-1*");
            }
            out.push_str(mag);
        } else if *neg {
            out.push_str(" - ");
            out.push_str(mag);
        } else {
            out.push_str(" + ");
            out.push_str(mag);
        }
    }
    out
}

/// Bihomogeneous form on P1 x P1 over k[t]: `x_coeffs[e]` is the Y-form
/// multiplying X0^e X1^(dx - e); all Y-forms share the Y-degree.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BiForm {
    deg_x: usize,
    deg_y: usize,
    x_coeffs: Vec<BinaryForm>,
}

impl BiForm {
    pub fn new(deg_x: usize, deg_y: usize, x_coeffs: Vec<BinaryForm>) -> Self {
        assert_eq!(x_coeffs.len(), deg_x + 1);
        for c in &x_coeffs {
            assert_eq!(c.form_degree(), deg_y);
            assert_eq!(c.pair, VarPair::Y);
        }
        BiForm { deg_x, deg_y, x_coeffs }
    }

    pub fn deg_x(&self) -> usize {
        self.deg_x
    }

    pub fn deg_y(&self) -> usize {
        self.deg_y
    }

    pub fn field(&self) -> BaseField {
        self.x_coeffs[0].field()
    }

    pub fn x_coeff(&self, e: usize) -> &BinaryForm {
        &self.x_coeffs[e]
    }

    pub fn is_zero(&self) -> bool {
        self.x_coeffs.iter().all(|c| c.is_zero())
    }

    pub fn deg_t(&self) -> isize {
        self.x_coeffs.iter().map(|c| c.deg_t()).max().unwrap_or(-1)
    }

    /// The Y-form coefficient list transposed to X-forms: `y_coeff(j)` is
    /// the X-form multiplying Y0^j Y1^(dy - j).
    pub fn y_coeff(&self, j: usize) -> BinaryForm {
        let field = self.field();
        let coeffs: Vec<Poly> =
            (0..=self.deg_x).map(|e| self.x_coeffs[e].coeff(j).clone()).collect();
        let _ = field;
        BinaryForm::new(VarPair::X, self.deg_x, coeffs)
    }

    /// Substitute the X-point (a : b); the fiber cycle as a Y-form.
    pub fn eval_x_point(&self, a: &Poly, b: &Poly) -> BinaryForm {
        let field = self.field();
        let mut acc = BinaryForm::zero(field, VarPair::Y, self.deg_y);
        for (e, c) in self.x_coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let w = a.pow(e as u32).mul(&b.pow((self.deg_x - e) as u32));
            acc = acc.add_form(&c.mul_poly(&w));
        }
        acc
    }

    pub fn substitute(&self, u: &Poly) -> Result<BiForm> {
        if u.degree() < 1 {
            return Err(Error::ConstantSubstitution);
        }
        Ok(BiForm {
            deg_x: self.deg_x,
            deg_y: self.deg_y,
            x_coeffs: self
                .x_coeffs
                .iter()
                .map(|c| c.substitute(u))
                .collect::<Result<Vec<_>>>()?,
        })
    }

    pub fn all_poly_coeffs(&self) -> Vec<Poly> {
        let mut v = Vec::new();
        for c in &self.x_coeffs {
            v.extend(c.coeffs().iter().cloned());
        }
        v
    }

    pub fn primitive_part(&self) -> Result<(BiForm, Poly)> {
        if self.is_zero() {
            return Err(Error::ZeroForm);
        }
        let flat = self.all_poly_coeffs();
        let (prim, content) = normalize_coeff_list(&flat);
        let mut it = prim.into_iter();
        let x_coeffs: Vec<BinaryForm> = (0..=self.deg_x)
            .map(|_| {
                let coeffs: Vec<Poly> = (0..=self.deg_y).map(|_| it.next().unwrap()).collect();
                BinaryForm::new(VarPair::Y, self.deg_y, coeffs)
            })
            .collect();
        Ok((BiForm { deg_x: self.deg_x, deg_y: self.deg_y, x_coeffs }, content))
    }
}

impl BinaryForm {
    fn add_form(&self, other: &BinaryForm) -> BinaryForm {
        assert_eq!(self.pair, other.pair);
        assert_eq!(self.degree, other.degree);
        BinaryForm {
            pair: self.pair,
            degree: self.degree,
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a.add(b))
                .collect(),
        }
    }
}

impl fmt::Display for BiForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut terms = Vec::new();
        for e in (0..=self.deg_x).rev() {
            for j in (0..=self.deg_y).rev() {
                let c = self.x_coeffs[e].coeff(j);
                if c.is_zero() {
                    continue;
                }
                terms.push(render_signed_term(
                    c,
                    &[
                        ("x0", e),
                        ("x1", self.deg_x - e),
                        ("y0", j),
                        ("y1", self.deg_y - j),
                    ],
                ));
            }
        }
        write_joined(f, &terms)
    }
}

// -- resultants ------------------------------------------------------------

/// Dense polynomial in y with k[t] coefficients; the coefficient ring of the
/// resultant computation.
#[derive(Debug, Clone, PartialEq)]
struct YPoly {
    c: Vec<Poly>,
}

impl YPoly {
    fn zero() -> Self {
        YPoly { c: Vec::new() }
    }
    fn constant(p: Poly) -> Self {
        let mut v = vec![p];
        Self::trim(&mut v);
        YPoly { c: v }
    }
    fn trim(v: &mut Vec<Poly>) {
        while v.last().map(|p| p.is_zero()).unwrap_or(false) {
            v.pop();
        }
    }
    fn is_zero(&self) -> bool {
        self.c.is_empty()
    }
    fn deg(&self) -> isize {
        self.c.len() as isize - 1
    }
    fn lc(&self) -> &Poly {
        self.c.last().expect("lc of zero")
    }
    fn sub(&self, o: &YPoly) -> YPoly {
        let n = self.c.len().max(o.c.len());
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            let v = match (self.c.get(i), o.c.get(i)) {
                (Some(a), Some(b)) => a.sub(b),
                (Some(a), None) => a.clone(),
                (None, Some(b)) => b.neg(),
                (None, None) => unreachable!(),
            };
            out.push(v);
        }
        Self::trim(&mut out);
        YPoly { c: out }
    }
    fn is_one(&self) -> bool {
        self.c.len() == 1 && self.c[0].is_one()
    }
    fn mul(&self, o: &YPoly) -> YPoly {
        if self.is_zero() || o.is_zero() {
            return YPoly::zero();
        }
        if self.is_one() {
            return o.clone();
        }
        if o.is_one() {
            return self.clone();
        }
        let field = self.c[0].field();
        let mut out = vec![Poly::zero(field); self.c.len() + o.c.len() - 1];
        for (i, a) in self.c.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.c.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                out[i + j] = out[i + j].add(&a.mul(b));
            }
        }
        Self::trim(&mut out);
        YPoly { c: out }
    }
    fn pow(&self, e: usize) -> YPoly {
        let mut acc = YPoly::constant(Poly::one(self.c.first().map(|p| p.field()).unwrap_or(BaseField::Rationals)));
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }
    /// Division known to be exact in k[t][y].
    fn exact_div(&self, o: &YPoly) -> YPoly {
        assert!(!o.is_zero(), "exact_div by zero");
        if self.is_zero() {
            return YPoly::zero();
        }
        let field = self.c[0].field();
        let mut rem = self.clone();
        let dd = o.deg();
        let mut q = vec![Poly::zero(field); (self.deg() - dd + 1).max(0) as usize];
        while !rem.is_zero() && rem.deg() >= dd {
            let k = (rem.deg() - dd) as usize;
            let qc = rem.lc().exact_div(o.lc());
            // rem -= qc * y^k * o
            let mut shifted = vec![Poly::zero(field); k];
            shifted.extend(o.c.iter().map(|c| c.mul(&qc)));
            rem = rem.sub(&YPoly { c: shifted });
            q[k] = qc;
        }
        assert!(rem.is_zero(), "division was not exact in k[t][y]");
        let mut q = q;
        Self::trim(&mut q);
        YPoly { c: q }
    }
}

/// x-polynomial with YPoly coefficients (dense, low-to-high).
type XPoly = Vec<YPoly>;

fn xp_trim(v: &mut XPoly) {
    while v.last().map(|c| c.is_zero()).unwrap_or(false) {
        v.pop();
    }
}

fn xp_deg(v: &XPoly) -> isize {
    v.len() as isize - 1
}

fn xp_scale(v: &XPoly, c: &YPoly) -> XPoly {
    let mut out: XPoly = v.iter().map(|a| a.mul(c)).collect();
    xp_trim(&mut out);
    out
}

fn xp_sub(a: &XPoly, b: &XPoly) -> XPoly {
    let n = a.len().max(b.len());
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let v = match (a.get(i), b.get(i)) {
            (Some(x), Some(y)) => x.sub(y),
            (Some(x), None) => x.clone(),
            (None, Some(y)) => YPoly::zero().sub(y),
            (None, None) => unreachable!(),
        };
        out.push(v);
    }
    xp_trim(&mut out);
    out
}

/// Pseudo-remainder: lc(b)^(deg a - deg b + 1) * a mod b.
fn xp_prem(a: &XPoly, b: &XPoly) -> XPoly {
    let db = xp_deg(b);
    let c = b.last().unwrap().clone();
    let c_is_one = c.is_one();
    let mut r = a.clone();
    let mut e = xp_deg(a) - db + 1;
    while !r.is_empty() && xp_deg(&r) >= db {
        let s = r.last().unwrap().clone();
        let k = (xp_deg(&r) - db) as usize;
        let mut shifted: XPoly = vec![YPoly::zero(); k];
        shifted.extend(b.iter().map(|bc| bc.mul(&s)));
        let scaled = if c_is_one { r } else { xp_scale(&r, &c) };
        r = xp_sub(&scaled, &shifted);
        e -= 1;
    }
    if !c_is_one {
        for _ in 0..e.max(0) {
            r = xp_scale(&r, &c);
        }
    }
    r
}

/// Classical resultant of nonzero x-polynomials over k[t][y], computed by
/// pseudo-remainder reduction with exact divisions.
fn xp_resultant(a: &XPoly, b: &XPoly) -> YPoly {
    let m = xp_deg(a);
    let n = xp_deg(b);
    assert!(m >= 0 && n >= 0, "resultant of zero polynomial");
    if m == 0 && n == 0 {
        let field = a[0].c.first().map(|p| p.field()).unwrap_or(BaseField::Rationals);
        return YPoly::constant(Poly::one(field));
    }
    if m == 0 {
        return a[0].pow(n as usize);
    }
    if n == 0 {
        return b[0].pow(m as usize);
    }
    if m < n {
        let r = xp_resultant(b, a);
        return if (m * n) % 2 == 1 { YPoly::zero().sub(&r) } else { r };
    }
    let rt = xp_prem(a, b);
    if rt.is_empty() {
        return YPoly::zero();
    }
    let r = xp_deg(&rt);
    let c = b.last().unwrap();
    let e = m - n + 1;
    let sub = xp_resultant(b, &rt);
    let exp = m - r - e * n;
    let mut res = if exp >= 0 {
        sub.mul(&c.pow(exp as usize))
    } else {
        let mut v = sub;
        let div = c.pow((-exp) as usize);
        v = v.exact_div(&div);
        v
    };
    if (m * n) % 2 == 1 {
        res = YPoly::zero().sub(&res);
    }
    res
}

fn binary_to_xpoly(g: &BinaryForm) -> XPoly {
    // dehomogenize (X0, X1) = (x, 1); index e is already the x-power
    let mut v: XPoly = g.coeffs().iter().map(|c| YPoly::constant(c.clone())).collect();
    xp_trim(&mut v);
    v
}

fn yform_to_ypoly(g: &BinaryForm) -> YPoly {
    let mut v = g.coeffs().to_vec();
    YPoly::trim(&mut v);
    YPoly { c: v }
}

fn biform_to_xpoly(f: &BiForm) -> XPoly {
    let mut v: XPoly = (0..=f.deg_x()).map(|e| yform_to_ypoly(f.x_coeff(e))).collect();
    xp_trim(&mut v);
    v
}

fn ypoly_to_yform(field: BaseField, r: &YPoly, degree: usize) -> BinaryForm {
    let mut coeffs = vec![Poly::zero(field); degree + 1];
    for (j, c) in r.c.iter().enumerate() {
        assert!(j <= degree, "resultant exceeded its homogeneous degree");
        coeffs[j] = c.clone();
    }
    BinaryForm::new(VarPair::Y, degree, coeffs)
}

/// Res_X(g, f): the pushforward kernel. `g` is an X-form, `f` bihomogeneous
/// in (X; Y); the result is a Y-form of degree deg_X(g) * deg_Y(f).
pub fn binary_resultant(g: &BinaryForm, f: &BiForm) -> Result<BinaryForm> {
    if g.is_zero() || f.is_zero() {
        return Err(Error::DegenerateResultant);
    }
    let field = g.field();
    let n = g.form_degree();
    let dy = f.deg_y();
    let out_degree = n * dy;

    let kg = g.infinity_multiplicity();
    let kf = {
        let mut k = 0;
        for e in (0..=f.deg_x()).rev() {
            if f.x_coeff(e).is_zero() {
                k += 1;
            } else {
                break;
            }
        }
        k
    };
    if kg > 0 && kf > 0 {
        // both vanish at (1 : 0): shared root, resultant is identically zero
        return Err(Error::DegenerateResultant);
    }

    let ga = binary_to_xpoly(g);
    let fa = biform_to_xpoly(f);

    let mut acc = if ga.is_empty() || fa.is_empty() {
        // one side is a pure power of X1 (affine part constant)
        YPoly::constant(Poly::one(field))
    } else {
        let r = xp_resultant(&ga, &fa);
        if r.is_zero() {
            return Err(Error::DegenerateResultant);
        }
        r
    };
    if kg > 0 {
        // roots of g at infinity hit f(1, 0; Y)
        let top = yform_to_ypoly(f.x_coeff(f.deg_x()));
        for _ in 0..kg {
            acc = acc.mul(&top);
        }
    }
    if kf > 0 {
        // X1-factors of f pair against g(1, 0)
        let top = YPoly::constant(g.coeff(n).clone());
        for _ in 0..kf {
            acc = acc.mul(&top);
        }
    }
    if acc.is_zero() {
        return Err(Error::DegenerateResultant);
    }
    Ok(ypoly_to_yform(field, &acc, out_degree))
}

/// Resultant of two binary forms in the same pair; an element of k[t].
/// Nonzero exactly when the forms share no projective root, which is the
/// base-point-freeness certificate for P1 coordinate pairs.
pub fn form_pair_resultant(a: &BinaryForm, b: &BinaryForm) -> Poly {
    assert_eq!(a.pair, b.pair);
    let field = a.field();
    if a.is_zero() || b.is_zero() {
        return Poly::zero(field);
    }
    let ka = a.infinity_multiplicity();
    let kb = b.infinity_multiplicity();
    if ka > 0 && kb > 0 {
        return Poly::zero(field);
    }
    let xa = binary_to_xpoly(a);
    let xb = binary_to_xpoly(b);
    let mut acc = if xa.is_empty() || xb.is_empty() {
        Poly::one(field)
    } else {
        let r = xp_resultant(&xa, &xb);
        if r.is_zero() {
            return Poly::zero(field);
        }
        debug_assert!(r.deg() <= 0);
        r.c.first().cloned().unwrap_or_else(|| Poly::zero(field))
    };
    if ka > 0 {
        acc = acc.mul(&b.coeff(b.form_degree()).pow(ka as u32));
    }
    if kb > 0 {
        acc = acc.mul(&a.coeff(a.form_degree()).pow(kb as u32));
    }
    acc
}

/// Nonconstant common factor test for a family of X-forms over k(t),
/// counting a shared root at infinity. Used to validate correspondences.
pub fn forms_have_common_factor(forms: &[&BinaryForm]) -> bool {
    let nonzero: Vec<&&BinaryForm> = forms.iter().filter(|f| !f.is_zero()).collect();
    if nonzero.is_empty() {
        return true;
    }
    if nonzero.iter().all(|f| f.infinity_multiplicity() > 0) {
        return true;
    }
    // affine part: gcd over k(t)[x] via primitive pseudo-remainders
    let mut g: Vec<Poly> = {
        let f = nonzero[0];
        let mut v: Vec<Poly> = f.coeffs().to_vec();
        while v.last().map(|c| c.is_zero()).unwrap_or(false) {
            v.pop();
        }
        v
    };
    for f in nonzero.iter().skip(1) {
        let mut b: Vec<Poly> = f.coeffs().to_vec();
        while b.last().map(|c| c.is_zero()).unwrap_or(false) {
            b.pop();
        }
        g = bivariate_gcd(&g, &b);
        if g.len() <= 1 {
            return false;
        }
    }
    g.len() > 1
}

/// gcd in k(t)[x] of dense x-polynomials with k[t] coefficients,
/// primitive-part pseudo-remainder scheme.
fn bivariate_gcd(a: &[Poly], b: &[Poly]) -> Vec<Poly> {
    fn prim(v: &[Poly]) -> Vec<Poly> {
        if v.is_empty() {
            return Vec::new();
        }
        let (p, _) = normalize_coeff_list(v);
        p
    }
    let mut x = prim(a);
    let mut y = prim(b);
    if x.len() < y.len() {
        std::mem::swap(&mut x, &mut y);
    }
    while !y.is_empty() {
        // pseudo remainder of x by y
        let c = y.last().unwrap().clone();
        let mut r = x.clone();
        while r.len() >= y.len() && !r.is_empty() {
            let s = r.last().unwrap().clone();
            let k = r.len() - y.len();
            let mut shifted = vec![Poly::zero(c.field()); k];
            shifted.extend(y.iter().map(|yc| yc.mul(&s)));
            let scaled: Vec<Poly> = r.iter().map(|rc| rc.mul(&c)).collect();
            let n = scaled.len().max(shifted.len());
            let mut out = Vec::with_capacity(n);
            for i in 0..n {
                let v = match (scaled.get(i), shifted.get(i)) {
                    (Some(p), Some(q)) => p.sub(q),
                    (Some(p), None) => p.clone(),
                    (None, Some(q)) => q.neg(),
                    (None, None) => unreachable!(),
                };
                out.push(v);
            }
            while out.last().map(|p| p.is_zero()).unwrap_or(false) {
                out.pop();
            }
            if out.len() >= r.len() {
                // degree must strictly drop; defensive guard
                break;
            }
            r = out;
        }
        x = y;
        y = prim(&r);
    }
    prim(&x)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(coeffs: &[i64]) -> Poly {
        Poly::from_int_coeffs(BaseField::Rationals, coeffs)
    }

    fn yform(coeffs: Vec<Poly>) -> BinaryForm {
        let d = coeffs.len() - 1;
        BinaryForm::new(VarPair::Y, d, coeffs)
    }

    #[test]
    fn primitive_part_examples() {
        // (t^2+t) Y0 + t Y1 -> ((t+1) Y0 + Y1, t)
        let f = yform(vec![q(&[0, 1]), q(&[0, 1, 1])]);
        let (p, c) = f.primitive_part().unwrap();
        assert_eq!(p, yform(vec![q(&[1]), q(&[1, 1])]));
        assert_eq!(c, q(&[0, 1]));
        // Y0 Y1 is already primitive
        let g = BinaryForm::new(VarPair::Y, 2, vec![q(&[0]), q(&[1]), q(&[0])]);
        let (p, c) = g.primitive_part().unwrap();
        assert_eq!(p, g);
        assert_eq!(c, q(&[1]));
        // 6 Y0^2 + 4 Y1^2 -> (3 Y0^2 + 2 Y1^2, 2), verified by re-multiplication
        let h = BinaryForm::new(VarPair::Y, 2, vec![q(&[4]), q(&[0]), q(&[6])]);
        let (p, c) = h.primitive_part().unwrap();
        assert_eq!(p, BinaryForm::new(VarPair::Y, 2, vec![q(&[2]), q(&[0]), q(&[3])]));
        assert_eq!(c, q(&[2]));
        let mut back = p.clone();
        back = back.mul_poly(&c);
        assert_eq!(back, h);
        // zero form errors
        assert_eq!(
            BinaryForm::zero(BaseField::Rationals, VarPair::Y, 1).primitive_part(),
            Err(Error::ZeroForm)
        );
    }

    fn squaring_graph() -> BiForm {
        // F = Y1 X0^2 - Y0 X1^2
        let f = BaseField::Rationals;
        let y1 = yform(vec![q(&[1]), q(&[0])]); // Y1
        let my0 = yform(vec![q(&[0]), q(&[-1])]); // -Y0
        let zero = BinaryForm::zero(f, VarPair::Y, 1);
        BiForm::new(2, 1, vec![my0, zero, y1])
    }

    #[test]
    fn resultant_point_pushforward() {
        // g = X0 - t X1 (the point (t : 1)) against the squaring graph
        let g = BinaryForm::new(VarPair::X, 1, vec![q(&[0, -1]), q(&[1])]);
        let r = binary_resultant(&g, &squaring_graph()).unwrap();
        assert_eq!(r.form_degree(), 1);
        // expect (up to unit) Y1 t^2 - Y0, the cycle of (t^2 : 1)
        let (rp, _) = r.primitive_part().unwrap();
        let expect = yform(vec![q(&[0, 0, 1]), q(&[-1])]);
        let (ep, _) = expect.primitive_part().unwrap();
        assert_eq!(rp, ep);
        // oracle: substituting the root x = t gives the same cycle
        let fiber = squaring_graph().eval_x_point(&q(&[0, 1]), &q(&[1]));
        let (fp, _) = fiber.primitive_part().unwrap();
        assert_eq!(rp, fp);
    }

    #[test]
    fn resultant_zero_fixed_point() {
        // g = X0, the point (0 : 1); 0 -> 0^2 is fixed, cycle form Y0 up to unit
        let g = BinaryForm::new(VarPair::X, 1, vec![q(&[0]), q(&[1])]);
        let r = binary_resultant(&g, &squaring_graph()).unwrap();
        let (rp, _) = r.primitive_part().unwrap();
        let (ep, _) = yform(vec![q(&[0]), q(&[1])]).primitive_part().unwrap();
        assert_eq!(rp, ep);
    }

    #[test]
    fn resultant_infinity_point() {
        // g = X1, the point (1 : 0), fixed by squaring
        let g = BinaryForm::new(VarPair::X, 1, vec![q(&[1]), q(&[0])]);
        let r = binary_resultant(&g, &squaring_graph()).unwrap();
        assert_eq!(r.form_degree(), 1);
        let (rp, _) = r.primitive_part().unwrap();
        // cycle of (1 : 0) is the form Y1
        let (ep, _) = yform(vec![q(&[1]), q(&[0])]).primitive_part().unwrap();
        assert_eq!(rp, ep);
    }

    #[test]
    fn resultant_conjugate_cycle() {
        // g = X0^2 - t^3 X1^2, f = Y1^2 X0^3 - Y0^2 X1^3 -> Y0^4 - t^9 Y1^4
        let g = BinaryForm::new(VarPair::X, 2, vec![q(&[0, 0, 0, -1]), q(&[0]), q(&[1])]);
        let f = BaseField::Rationals;
        let y1sq = BinaryForm::new(VarPair::Y, 2, vec![q(&[1]), q(&[0]), q(&[0])]);
        let my0sq = BinaryForm::new(VarPair::Y, 2, vec![q(&[0]), q(&[0]), q(&[-1])]);
        let zero = BinaryForm::zero(f, VarPair::Y, 2);
        let cusp = BiForm::new(3, 2, vec![my0sq, zero.clone(), zero, y1sq]);
        let r = binary_resultant(&g, &cusp).unwrap();
        // deg_X(g) * deg_Y(f) = 2 * 2
        assert_eq!(r.form_degree(), 4);
        let (rp, _) = r.primitive_part().unwrap();
        // up to unit: Y0^4 - t^9 Y1^4
        let mut t9 = vec![0i64; 10];
        t9[9] = -1;
        let expect =
            BinaryForm::new(VarPair::Y, 4, vec![q(&t9), q(&[0]), q(&[0]), q(&[0]), q(&[1])]);
        let (ep, _) = expect.primitive_part().unwrap();
        assert_eq!(rp, ep);
    }

    #[test]
    fn degree_law() {
        let g = BinaryForm::new(VarPair::X, 2, vec![q(&[0, 0, 0, -1]), q(&[0]), q(&[1])]);
        let r = binary_resultant(&g, &squaring_graph()).unwrap();
        assert_eq!(r.form_degree(), g.form_degree() * squaring_graph().deg_y());
    }

    #[test]
    fn pair_resultant_certificate() {
        // (X0^2 + t X1^2, X1^2): resultant is 1 up to sign -> base-point free
        let a = BinaryForm::new(VarPair::X, 2, vec![q(&[0, 1]), q(&[0]), q(&[1])]);
        let b = BinaryForm::new(VarPair::X, 2, vec![q(&[1]), q(&[0]), q(&[0])]);
        let r = form_pair_resultant(&a, &b);
        assert_eq!(r.degree(), 0);
        // (X0 X1, X1^2) share the root (1 : 0)
        let c = BinaryForm::new(VarPair::X, 2, vec![q(&[0]), q(&[1]), q(&[0])]);
        assert!(form_pair_resultant(&c, &b).is_zero());
    }

    #[test]
    fn common_factor_detection() {
        let a = BinaryForm::new(VarPair::X, 2, vec![q(&[0]), q(&[1]), q(&[0])]); // X0 X1
        let b = BinaryForm::new(VarPair::X, 1, vec![q(&[0]), q(&[1])]); // X0
        assert!(forms_have_common_factor(&[&a, &b]));
        let c = BinaryForm::new(VarPair::X, 1, vec![q(&[1]), q(&[0])]); // X1
        assert!(!forms_have_common_factor(&[&b, &c]));
    }
}
