//! Exact root location for rational polynomials: Sturm chains, cyclotomic
//! factors, factorization over Q of monic integer polynomials, and
//! certified counts of roots on and inside circles.
//!
//! Disk counts use the Cayley transform: for q with no roots on the unit
//! circle, W(s) = sum_j c_j (1+is)^j (1-is)^(m-j) has no real roots, and
//! the roots of q inside the disk correspond to roots of W in the upper
//! half plane. The Hermite-Biehler index n_minus - n_plus = I(Q/P) is then
//! an exact Sturm-chain computation on the real and imaginary parts of W.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::algebra::{BaseField, Poly, Scalar};

pub(crate) fn qp(coeffs: &[i64]) -> Poly {
    Poly::from_int_coeffs(BaseField::Rationals, coeffs)
}

pub(crate) fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

fn eval(p: &Poly, x: &BigRational) -> BigRational {
    match p.eval(&Scalar::Rat(x.clone())) {
        Scalar::Rat(v) => v,
        _ => unreachable!(),
    }
}

fn rc(p: &Poly, i: usize) -> BigRational {
    match p.coeff(i) {
        Scalar::Rat(v) => v,
        _ => panic!("rational polynomial expected"),
    }
}

fn sign(v: &BigRational) -> i32 {
    if v.is_zero() {
        0
    } else if v.is_positive() {
        1
    } else {
        -1
    }
}

// -- Sturm machinery ---------------------------------------------------------

/// Negated-remainder chain starting from (f0, f1).
fn sturm_like_chain(f0: &Poly, f1: &Poly) -> Vec<Poly> {
    let mut chain = vec![f0.clone()];
    if f1.is_zero() {
        return chain;
    }
    chain.push(f1.clone());
    loop {
        let n = chain.len();
        let (a, b) = (&chain[n - 2], &chain[n - 1]);
        let (_, r) = a.divrem(b);
        if r.is_zero() {
            return chain;
        }
        chain.push(r.neg());
    }
}

fn variations<I: Iterator<Item = i32>>(signs: I) -> usize {
    let mut last = 0i32;
    let mut v = 0usize;
    for s in signs {
        if s == 0 {
            continue;
        }
        if last != 0 && s != last {
            v += 1;
        }
        last = s;
    }
    v
}

fn variations_at(chain: &[Poly], x: &BigRational) -> usize {
    variations(chain.iter().map(|p| sign(&eval(p, x))))
}

fn variations_at_inf(chain: &[Poly], positive: bool) -> usize {
    variations(chain.iter().map(|p| {
        if p.is_zero() {
            return 0;
        }
        let lc = match p.leading_coeff() {
            Scalar::Rat(v) => v,
            _ => unreachable!(),
        };
        let s = sign(&lc);
        if positive || p.degree() % 2 == 0 {
            s
        } else {
            -s
        }
    }))
}

/// Number of distinct real roots of squarefree `p` in the open interval
/// (lo, hi); endpoints must not be roots.
pub fn count_real_roots_between(p: &Poly, lo: &BigRational, hi: &BigRational) -> usize {
    debug_assert!(!eval(p, lo).is_zero() && !eval(p, hi).is_zero());
    let chain = sturm_like_chain(p, &p.derivative());
    variations_at(&chain, lo) - variations_at(&chain, hi)
}

pub fn count_real_roots(p: &Poly) -> usize {
    let chain = sturm_like_chain(p, &p.derivative());
    variations_at_inf(&chain, false) - variations_at_inf(&chain, true)
}

/// Cauchy index of Q/P over the whole real line: V(-inf) - V(+inf) of the
/// negated-remainder chain on (P, Q).
fn cauchy_index(p: &Poly, q: &Poly) -> i64 {
    if p.is_zero() || q.is_zero() {
        return 0;
    }
    let chain = sturm_like_chain(p, q);
    variations_at_inf(&chain, false) as i64 - variations_at_inf(&chain, true) as i64
}

/// All roots of a nonzero polynomial have |z| < 1 + max |c_i / lc|.
pub fn cauchy_bound(p: &Poly) -> BigRational {
    let d = p.degree();
    assert!(d >= 0);
    let lc = rc(p, d as usize);
    let mut best = BigRational::zero();
    for i in 0..d as usize {
        let v = (rc(p, i) / &lc).abs();
        if v > best {
            best = v;
        }
    }
    best + BigRational::one()
}

// -- circle and disk counts ---------------------------------------------------

/// t^deg * p(1/t), monic-normalized.
fn reversed_monic(p: &Poly) -> Poly {
    p.reverse().make_monic()
}

fn is_palindromic(p: &Poly) -> bool {
    let d = p.degree();
    if d < 0 {
        return false;
    }
    let d = d as usize;
    (0..=d).all(|i| rc(p, i) == rc(p, d - i))
}

/// Rewrite an even-degree palindromic q as z^k Q(z + 1/z); returns Q.
fn palindromic_to_w(q: &Poly) -> Poly {
    let d = q.degree() as usize;
    assert!(d % 2 == 0 && is_palindromic(q));
    let k = d / 2;
    // z^j + z^-j as polynomials in w
    let mut pj: Vec<Poly> = vec![qp(&[2]), qp(&[0, 1])];
    for j in 2..=k {
        let next = qp(&[0, 1]).mul(&pj[j - 1]).sub(&pj[j - 2]);
        pj.push(next);
    }
    let mut acc = Poly::constant(Scalar::Rat(rc(q, k)));
    for j in 1..=k {
        acc = acc.add(&pj[j].mul_scalar(&Scalar::Rat(rc(q, k + j))));
    }
    acc
}

/// Number of roots of squarefree `q` with |z| = 1 exactly.
pub fn circle_root_count(q: &Poly) -> usize {
    if q.degree() < 1 {
        return 0;
    }
    // roots on the circle are common to q and its reversal
    let mut g = q.make_monic().gcd(&reversed_monic(q));
    if g.degree() < 1 {
        return 0;
    }
    let mut count = 0usize;
    for root in [BigRational::one(), -BigRational::one()] {
        let lin = Poly::from_rat_coeffs(vec![-root.clone(), BigRational::one()]);
        while g.degree() >= 1 && eval(&g, &root).is_zero() {
            g = g.exact_div(&lin);
            count += 1;
        }
    }
    if g.degree() < 1 {
        return count;
    }
    // what remains has inversion-closed roots avoiding +-1, so it is
    // palindromic of even degree
    debug_assert!(is_palindromic(&g), "inversion-closed remainder must be palindromic");
    if !is_palindromic(&g) {
        return count;
    }
    let w = palindromic_to_w(&g);
    let two = rat(2, 1);
    count + 2 * count_real_roots_between(&w, &(-two.clone()), &two)
}

/// Number of roots of `q` with |z| < 1, requiring no roots on the circle.
/// Exact for any q with that property (multiplicities counted).
pub fn roots_in_unit_disk(q: &Poly) -> usize {
    let m = q.degree();
    assert!(m >= 0, "zero polynomial");
    if m == 0 {
        return 0;
    }
    let m = m as usize;
    // W(s) = sum c_j (1+is)^j (1-is)^(m-j); real/imaginary parts
    let a_re = qp(&[1]);
    let a_im = qp(&[0, 1]); // 1 + i s
    let b_re = qp(&[1]);
    let b_im = qp(&[0, -1]); // 1 - i s
    let mut apow: Vec<(Poly, Poly)> = vec![(qp(&[1]), qp(&[]))];
    let mut bpow: Vec<(Poly, Poly)> = vec![(qp(&[1]), qp(&[]))];
    for j in 1..=m {
        let (re, im) = &apow[j - 1];
        apow.push(cx_mul(re, im, &a_re, &a_im));
        let (re, im) = &bpow[j - 1];
        bpow.push(cx_mul(re, im, &b_re, &b_im));
    }
    let mut p_re = qp(&[]);
    let mut p_im = qp(&[]);
    for j in 0..=m {
        let c = rc(q, j);
        if c.is_zero() {
            continue;
        }
        let (re, im) = cx_mul(&apow[j].0, &apow[j].1, &bpow[m - j].0, &bpow[m - j].1);
        let cs = Scalar::Rat(c);
        p_re = p_re.add(&re.mul_scalar(&cs));
        p_im = p_im.add(&im.mul_scalar(&cs));
    }
    // rotate so that deg(re) > deg(im); multiplying W by a + ib keeps roots
    let mut rotated = None;
    for (a, b) in [(1i64, 0i64), (0, 1), (1, 1), (1, 2), (2, 1), (3, 1), (1, 3)] {
        let re = p_re
            .mul_scalar(&Scalar::from_integer(BaseField::Rationals, a))
            .sub(&p_im.mul_scalar(&Scalar::from_integer(BaseField::Rationals, b)));
        let im = p_re
            .mul_scalar(&Scalar::from_integer(BaseField::Rationals, b))
            .add(&p_im.mul_scalar(&Scalar::from_integer(BaseField::Rationals, a)));
        if re.degree() > im.degree() {
            rotated = Some((re, im));
            break;
        }
    }
    let (p, q_im) = rotated.expect("some rotation separates the leading coefficients");
    let index = cauchy_index(&p, &q_im); // n_minus - n_plus
    let upper = (m as i64 - index) / 2;
    debug_assert_eq!((m as i64 - index) % 2, 0, "parity defect in disk count");
    upper.max(0) as usize
}

fn cx_mul(ar: &Poly, ai: &Poly, br: &Poly, bi: &Poly) -> (Poly, Poly) {
    (ar.mul(br).sub(&ai.mul(bi)), ar.mul(bi).add(&ai.mul(br)))
}

/// Roots of squarefree `q` with |z| < R, provided none lie on |z| = R;
/// None when some root has modulus exactly R.
pub fn count_in_disk(q: &Poly, radius: &BigRational) -> Option<usize> {
    assert!(radius.is_positive());
    let scaled = q
        .substitute_unchecked(&Poly::from_rat_coeffs(vec![BigRational::zero(), radius.clone()]))
        .make_monic();
    if circle_root_count(&scaled) > 0 {
        return None;
    }
    Some(roots_in_unit_disk(&scaled))
}

// -- cyclotomic and integer factorization -------------------------------------

pub fn euler_phi(n: u64) -> u64 {
    let mut result = n;
    let mut m = n;
    let mut p = 2;
    while p * p <= m {
        if m % p == 0 {
            while m % p == 0 {
                m /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if m > 1 {
        result -= result / m;
    }
    result
}

/// n-th cyclotomic polynomial over Q, by recursive exact division of
/// x^n - 1 by the proper-divisor cyclotomics.
pub fn cyclotomic(n: u64) -> Poly {
    assert!(n >= 1);
    if n == 1 {
        return qp(&[-1, 1]);
    }
    let mut num = {
        let mut c = vec![0i64; n as usize + 1];
        c[0] = -1;
        c[n as usize] = 1;
        qp(&c)
    };
    for d in 1..n {
        if n % d == 0 {
            num = num.exact_div(&cyclotomic(d));
        }
    }
    num
}

/// Yun's squarefree decomposition of a squarefree-able monic rational
/// polynomial: returns [(g_i, i)] with p = prod g_i^i, g_i squarefree.
fn squarefree_decomposition(p: &Poly) -> Vec<(Poly, usize)> {
    let mut out = Vec::new();
    let a = p.make_monic();
    if a.degree() < 1 {
        return out;
    }
    let g = a.gcd(&a.derivative());
    if g.degree() < 1 {
        out.push((a, 1));
        return out;
    }
    let mut b = a.exact_div(&g);
    let mut c = a.derivative().exact_div(&g);
    let mut i = 1usize;
    loop {
        let d = c.sub(&b.derivative());
        let gi = b.gcd(&d);
        if gi.degree() >= 1 {
            out.push((gi.clone(), i));
        }
        if gi.degree() < 1 && d.is_zero() {
            break;
        }
        b = b.exact_div(&gi);
        if b.degree() < 1 {
            break;
        }
        c = d.exact_div(&gi);
        i += 1;
    }
    out
}

fn to_bigints(p: &Poly) -> Vec<BigInt> {
    let mut l = BigInt::one();
    for c in p.rat_coeffs() {
        l = l.lcm(c.denom());
    }
    p.rat_coeffs()
        .iter()
        .map(|c| (c * BigRational::from(l.clone())).to_integer())
        .collect()
}

fn divisors_signed(n: &BigInt) -> Vec<BigInt> {
    let n = n.abs();
    let mut out = Vec::new();
    if n.is_zero() {
        return out;
    }
    let mut i = BigInt::one();
    while &i * &i <= n {
        if (&n % &i).is_zero() {
            out.push(i.clone());
            out.push(-i.clone());
            let j = &n / &i;
            if j != i {
                out.push(j.clone());
                out.push(-j);
            }
        }
        i += 1;
    }
    out
}

/// Factor a monic polynomial with integer coefficients into monic
/// irreducibles over Q with multiplicities. Complete for degree <= 7 (and
/// for higher degrees whose hard part contains a factor of degree <= 3);
/// panics past that desk boundary.
pub fn factor_monic_integer(p: &Poly) -> Vec<(Poly, usize)> {
    let mut factors: Vec<(Poly, usize)> = Vec::new();
    for (sf, mult) in squarefree_decomposition(p) {
        for q in factor_squarefree(&sf) {
            merge_factor(&mut factors, q, mult);
        }
    }
    factors
}

fn merge_factor(factors: &mut Vec<(Poly, usize)>, q: Poly, mult: usize) {
    for (f, m) in factors.iter_mut() {
        if *f == q {
            *m += mult;
            return;
        }
    }
    factors.push((q, mult));
}

fn factor_squarefree(p: &Poly) -> Vec<Poly> {
    let mut rest = p.make_monic();
    let mut out = Vec::new();
    // powers of x
    while rest.degree() >= 1 && rc(&rest, 0).is_zero() {
        out.push(qp(&[0, 1]));
        rest = rest.exact_div(&qp(&[0, 1]));
    }
    if rest.degree() < 1 {
        return out;
    }
    // integer roots: monic integral, so rational roots are integers
    // dividing the constant term
    'roots: loop {
        let ints = to_bigints(&rest);
        let c0 = ints[0].clone();
        for d in divisors_signed(&c0) {
            let x = BigRational::from(d.clone());
            if eval(&rest, &x).is_zero() {
                let lin = Poly::from_rat_coeffs(vec![-x, BigRational::one()]);
                out.push(lin.clone());
                rest = rest.exact_div(&lin);
                if rest.degree() < 1 {
                    return out;
                }
                continue 'roots;
            }
        }
        break;
    }
    // cyclotomic factors
    let mut n = 1u64;
    while rest.degree() >= 1 {
        let d = rest.degree() as u64;
        if euler_phi(n) > d {
            if n > 2 * d * d + 2 {
                break;
            }
            n += 1;
            continue;
        }
        let phi_n = cyclotomic(n);
        if phi_n.degree() <= rest.degree() && phi_n.divides(&rest) {
            out.push(phi_n.clone());
            rest = rest.exact_div(&phi_n);
            continue;
        }
        n += 1;
        if n > 2 * d * d + 2 {
            break;
        }
    }
    if rest.degree() < 1 {
        return out;
    }
    if rest.degree() <= 3 {
        // no rational roots left: quadratics and cubics are irreducible
        out.push(rest);
        return out;
    }
    // quadratic factors x^2 + a x + b with b | c0 and |a| <= 2H
    'again: loop {
        if rest.degree() < 4 {
            break;
        }
        let ints = to_bigints(&rest);
        let c0 = ints[0].clone();
        let h = cauchy_bound(&rest);
        let a_cap: BigInt = (rat(2, 1) * &h).ceil().to_integer();
        for b in divisors_signed(&c0) {
            let mut a = -a_cap.clone();
            while a <= a_cap {
                let cand = Poly::from_rat_coeffs(vec![
                    BigRational::from(b.clone()),
                    BigRational::from(a.clone()),
                    BigRational::one(),
                ]);
                if cand.divides(&rest) {
                    rest = rest.exact_div(&cand);
                    out.push(cand);
                    continue 'again;
                }
                a += 1;
            }
        }
        break;
    }
    if rest.degree() < 1 {
        return out;
    }
    if rest.degree() <= 5 {
        // a reducible quintic with no roots needs a quadratic factor
        out.push(rest);
        return out;
    }
    // cubic factors x^3 + a x^2 + b x + c with c | c0
    'cubes: loop {
        if rest.degree() < 6 {
            break;
        }
        let ints = to_bigints(&rest);
        let c0 = ints[0].clone();
        let h = cauchy_bound(&rest);
        let a_cap: BigInt = (rat(3, 1) * &h).ceil().to_integer();
        let b_cap: BigInt = (rat(3, 1) * &h * &h).ceil().to_integer();
        for c in divisors_signed(&c0) {
            let mut a = -a_cap.clone();
            while a <= a_cap {
                let mut b = -b_cap.clone();
                while b <= b_cap {
                    let cand = Poly::from_rat_coeffs(vec![
                        BigRational::from(c.clone()),
                        BigRational::from(b.clone()),
                        BigRational::from(a.clone()),
                        BigRational::one(),
                    ]);
                    if cand.divides(&rest) {
                        rest = rest.exact_div(&cand);
                        out.push(cand);
                        continue 'cubes;
                    }
                    b += 1;
                }
                a += 1;
            }
        }
        break;
    }
    if rest.degree() < 1 {
        return out;
    }
    if rest.degree() <= 7 {
        // 4..7 with no factor of degree <= 3 is irreducible
        out.push(rest);
        return out;
    }
    panic!(
        "factorization of degree {} with no small factors is beyond desk scope",
        rest.degree()
    );
}
