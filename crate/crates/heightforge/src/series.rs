//! Intersection-number sequences d_m along an orbit, exact linear
//! recurrence detection, rational generating functions, and extraction of
//! the algebraic limit d_m / kappa^m.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::algebra::{BaseField, Poly};
use crate::canheight::{DynState, OrbitCache};
use crate::dynparse::DynSystem;
use crate::error::{Error, Result};
use crate::nslattice::{
    cauchy_bound, count_in_disk, count_real_roots_between, factor_monic_integer, ns_action,
};

/// Exact sequence d_0..d_M of observed intersection numbers: height
/// pairings for morphism orbits, unnormalized t-degrees for cycle orbits.
#[derive(Debug, Clone)]
pub struct DSequence {
    pub terms: Vec<BigRational>,
    /// NS rank of the source system; the transient allowance is rank + 1.
    pub rank: usize,
}

/// d_m = h_0(iterate_m(a), e) * deg(a); for correspondences the cycle
/// degree grows, so the unnormalized t-degree is the observed number.
pub fn d_sequence(
    dyn_: &DynSystem,
    start: &DynState,
    e: &[BigRational],
    m_max: usize,
) -> Result<DSequence> {
    let rank = ns_action(dyn_).rank();
    if e.len() != rank {
        return Err(Error::SpaceMismatch("pairing vector rank mismatch".into()));
    }
    let mut cache = OrbitCache::new(dyn_, start)?;
    let mut terms = Vec::with_capacity(m_max + 1);
    for m in 0..=m_max {
        let state = cache.get(m)?;
        let d = match state {
            DynState::Point(p) => {
                let h = p.height();
                h.pairing(e)
            }
            DynState::Cycle(c) => {
                BigRational::from_integer(c.form().deg_t().max(0).into()) * &e[0]
            }
        };
        terms.push(d);
    }
    Ok(DSequence { terms, rank })
}

/// The limit of d_m / root^m read off the dominant simple real root.
#[derive(Debug, Clone, PartialEq)]
pub enum LimitValue {
    Exact { root: BigRational, value: BigRational },
    Enclosure {
        root_lo: BigRational,
        root_hi: BigRational,
        value_lo: BigRational,
        value_hi: BigRational,
    },
}

#[derive(Debug, Clone)]
pub struct RecurrenceReport {
    /// d_{m+r} = sum c_i d_{m+i} for m >= transient; empty means the
    /// sequence is eventually zero (order 0).
    pub coefficients: Vec<BigRational>,
    pub order: usize,
    pub transient: usize,
    /// Coprime integer polynomials (low-to-high in z) with
    /// sum d_m z^m = numerator / denominator.
    pub gf_numerator: Vec<BigInt>,
    pub gf_denominator: Vec<BigInt>,
    pub limit: Option<LimitValue>,
}

/// Minimal exact linear recurrence via a Hankel-style kernel search with a
/// transient allowance of rank + 1 terms.
pub fn find_recurrence(seq: &DSequence, max_order: usize) -> Result<RecurrenceReport> {
    let t_allow = seq.rank + 1;
    let m_top = seq.terms.len() as isize - 1;
    if m_top < 0 {
        return Err(Error::NoRecurrenceFound(max_order));
    }
    let feasible = ((seq.terms.len() as isize - t_allow as isize) / 2).max(0) as usize;
    let max_order = max_order.min(feasible);
    for r in 0..=max_order {
        if let Some(c) = try_order(seq, r, t_allow) {
            let transient = tighten_transient(seq, &c, t_allow);
            let (num, den) = generating_function(seq, &c, transient);
            let limit = extract_limit(&c, &num, &den);
            return Ok(RecurrenceReport {
                order: r,
                coefficients: c,
                transient,
                gf_numerator: num,
                gf_denominator: den,
                limit,
            });
        }
    }
    Err(Error::NoRecurrenceFound(max_order))
}

fn holds_from(seq: &DSequence, c: &[BigRational], from: usize) -> bool {
    let r = c.len();
    let m_last = seq.terms.len() as isize - 1 - r as isize;
    for m in from as isize..=m_last {
        let m = m as usize;
        let mut acc = BigRational::zero();
        for (i, ci) in c.iter().enumerate() {
            acc += ci * &seq.terms[m + i];
        }
        if acc != seq.terms[m + r] {
            return false;
        }
    }
    true
}

fn try_order(seq: &DSequence, r: usize, t_allow: usize) -> Option<Vec<BigRational>> {
    if r == 0 {
        let ok = seq.terms.iter().skip(t_allow).all(|d| d.is_zero());
        return ok.then(Vec::new);
    }
    let rows: Vec<usize> = (t_allow..=(seq.terms.len() - 1 - r)).collect();
    if rows.len() < r {
        return None;
    }
    // least-index consistent solution of the Hankel system
    let mut aug = crate::nslattice::QMat::zero(rows.len(), r + 1);
    for (row, &m) in rows.iter().enumerate() {
        for i in 0..r {
            *aug.at_mut(row, i) = seq.terms[m + i].clone();
        }
        *aug.at_mut(row, r) = seq.terms[m + r].clone();
    }
    let pivots = aug.rref();
    if pivots.contains(&r) {
        return None; // inconsistent
    }
    let mut c = vec![BigRational::zero(); r];
    for (row, &p) in pivots.iter().enumerate() {
        c[p] = aug.at(row, r).clone();
    }
    holds_from(seq, &c, t_allow).then_some(c)
}

fn tighten_transient(seq: &DSequence, c: &[BigRational], t_allow: usize) -> usize {
    let mut t = t_allow;
    while t > 0 && holds_from(seq, c, t - 1) {
        t -= 1;
    }
    t
}

/// N(z)/D(z) with D = 1 - sum c_i z^(r-i); N has degree < transient + r.
fn generating_function(
    seq: &DSequence,
    c: &[BigRational],
    transient: usize,
) -> (Vec<BigInt>, Vec<BigInt>) {
    let r = c.len();
    let mut den = vec![BigRational::zero(); r + 1];
    den[0] = BigRational::one();
    for (i, ci) in c.iter().enumerate() {
        den[r - i] = -ci.clone();
    }
    // numerator = truncation of (series * den) below degree transient + r
    let cutoff = transient + r;
    let mut num = vec![BigRational::zero(); cutoff.max(1)];
    for (m, d) in seq.terms.iter().enumerate() {
        for (k, dk) in den.iter().enumerate() {
            let idx = m + k;
            if idx < cutoff {
                num[idx] += d * dk;
            }
        }
    }
    while num.last().map(|x| x.is_zero()).unwrap_or(false) {
        num.pop();
    }
    // scale both to coprime integer vectors
    let mut denom_lcm = BigInt::one();
    for v in num.iter().chain(&den) {
        denom_lcm = denom_lcm.lcm(v.denom());
    }
    let scale = BigRational::from(denom_lcm);
    let mut ni: Vec<BigInt> = num.iter().map(|v| (v * &scale).to_integer()).collect();
    let mut di: Vec<BigInt> = den.iter().map(|v| (v * &scale).to_integer()).collect();
    let mut g = BigInt::zero();
    for v in ni.iter().chain(&di) {
        g = g.gcd(v);
    }
    if !g.is_zero() && !g.is_one() {
        ni.iter_mut().for_each(|v| *v = &*v / &g);
        di.iter_mut().for_each(|v| *v = &*v / &g);
    }
    if di[0].is_negative() {
        ni.iter_mut().for_each(|v| *v = -std::mem::take(v));
        di.iter_mut().for_each(|v| *v = -std::mem::take(v));
    }
    (ni, di)
}

/// Expand the generating function back into its power series; used to
/// verify the reconstruction exactly.
pub fn expand_generating_function(
    num: &[BigInt],
    den: &[BigInt],
    terms: usize,
) -> Vec<BigRational> {
    assert!(!den.is_empty() && !den[0].is_zero());
    let d0 = BigRational::from(den[0].clone());
    let mut out: Vec<BigRational> = Vec::with_capacity(terms);
    for m in 0..terms {
        let mut acc = if m < num.len() {
            BigRational::from(num[m].clone())
        } else {
            BigRational::zero()
        };
        for k in 1..den.len().min(m + 1) {
            acc -= BigRational::from(den[k].clone()) * &out[m - k];
        }
        out.push(acc / &d0);
    }
    out
}

/// Dominant-root limit of d_m / root^m: defined when the recurrence has a
/// simple real root of strictly maximal modulus. The value is
/// -N(z0) / (z0 D'(z0)) at z0 = 1/root.
fn extract_limit(
    c: &[BigRational],
    num: &[BigInt],
    den: &[BigInt],
) -> Option<LimitValue> {
    let r = c.len();
    if r == 0 {
        return Some(LimitValue::Exact {
            root: BigRational::zero(),
            value: BigRational::zero(),
        });
    }
    // characteristic polynomial x^r - sum c_i x^i
    let mut chi_c = vec![BigRational::zero(); r + 1];
    chi_c[r] = BigRational::one();
    for (i, ci) in c.iter().enumerate() {
        chi_c[i] = -ci.clone();
    }
    let chi = Poly::from_rat_coeffs(chi_c);
    // clear to integer-monic by root scaling x -> y / s
    let mut s = BigInt::one();
    for i in 0..r {
        s = s.lcm(rat_at(&chi, i).denom());
    }
    let srat = BigRational::from(s.clone());
    let chi_int = scale_roots_up(&chi, &srat);
    let factors = factor_monic_integer(&chi_int);

    // enclose the maximal root modulus per factor and find a real simple
    // dominant root
    let width = BigRational::new(BigInt::one(), BigInt::from(10u64).pow(9));
    let mut best: Option<(BigRational, BigRational, &Poly)> = None; // (lo, hi, factor)
    for (q, _) in &factors {
        let (lo, hi) = max_modulus_enclosure(q, &width);
        match &best {
            None => best = Some((lo, hi, q)),
            Some((blo, bhi, _)) => {
                if lo > *bhi {
                    best = Some((lo, hi, q));
                } else if hi < *blo {
                    // keep current
                } else {
                    // ambiguous tie between factors: refuse
                    let same = lo == *blo && hi == *bhi;
                    if !same {
                        return None;
                    }
                }
            }
        }
    }
    let (lo, hi, qdom) = best?;
    // strict dominance over the other factors
    for (q, _) in &factors {
        if std::ptr::eq(q, qdom) {
            continue;
        }
        let (_, ohi) = max_modulus_enclosure(q, &width);
        if ohi >= lo {
            return None;
        }
    }
    // the dominant factor must contribute one simple real positive root of
    // that modulus: linear factor gives it exactly
    if qdom.degree() == 1 {
        let root_scaled = -rat_at(qdom, 0);
        if !root_scaled.is_positive() {
            return None;
        }
        let root = root_scaled / &BigRational::from(s.clone());
        // multiplicity of the factor must be 1 for a simple dominant pole
        let mult = factors.iter().find(|(q, _)| std::ptr::eq(q, qdom)).unwrap().1;
        if mult != 1 {
            return None;
        }
        let z0 = root.recip();
        let nz = eval_int_poly(num, &z0);
        let dz = eval_int_poly_derivative(den, &z0);
        if dz.is_zero() {
            return None;
        }
        let value = -nz / (&z0 * dz);
        return Some(LimitValue::Exact { root, value });
    }
    // irrational dominant factor: the maximal modulus must be attained by
    // exactly one root of the factor (all others strictly inside radius lo)
    let mult = factors.iter().find(|(q, _)| std::ptr::eq(q, qdom)).unwrap().1;
    if mult != 1 {
        return None;
    }
    let qdeg = qdom.degree().max(0) as usize;
    if count_in_disk(qdom, &lo) != Some(qdeg - 1) {
        return None;
    }
    // and that root must be real positive: one real root in the annulus
    let sl = &lo / BigRational::from(s.clone());
    let sh = &hi / BigRational::from(s.clone());
    let chi_rational = chi.clone();
    let reals = count_real_roots_between(&chi_rational, &sl, &sh);
    if reals != 1 {
        return None;
    }
    // interval arithmetic for the value
    let (zlo, zhi) = (sh.recip(), sl.recip());
    let (nlo, nhi) = eval_int_poly_interval(num, &zlo, &zhi);
    let (dlo, dhi) = eval_int_poly_derivative_interval(den, &zlo, &zhi);
    // value = -N(z0)/(z0 D'(z0)); require the denominator interval to
    // avoid zero
    let (plo, phi) = interval_mul(&zlo, &zhi, &dlo, &dhi);
    if !(plo.is_positive() || phi.is_negative()) {
        return None;
    }
    let (ilo, ihi) = (phi.recip(), plo.recip());
    let (vlo, vhi) = interval_mul(&(-nhi), &(-nlo), &ilo, &ihi);
    Some(LimitValue::Enclosure { root_lo: sl, root_hi: sh, value_lo: vlo, value_hi: vhi })
}

fn rat_at(p: &Poly, i: usize) -> BigRational {
    match p.coeff(i) {
        crate::algebra::Scalar::Rat(v) => v,
        _ => unreachable!(),
    }
}

/// p(x) -> s^deg * p(x/s): scales roots UP by s, keeps monic.
fn scale_roots_up(p: &Poly, s: &BigRational) -> Poly {
    let d = p.degree().max(0) as usize;
    let mut out = Vec::with_capacity(d + 1);
    let mut pow = BigRational::one();
    for i in (0..=d).rev() {
        out.push((rat_at(p, i) * &pow, i));
        pow *= s;
    }
    let mut coeffs = vec![BigRational::zero(); d + 1];
    for (v, i) in out {
        coeffs[i] = v;
    }
    Poly::from_rat_coeffs(coeffs)
}

/// Enclosure of the maximal root modulus of q by disk-count bisection.
fn max_modulus_enclosure(q: &Poly, width: &BigRational) -> (BigRational, BigRational) {
    let deg = q.degree().max(0) as usize;
    let mut lo = BigRational::zero();
    let mut hi = cauchy_bound(q);
    while &hi - &lo > *width {
        let mid = (&lo + &hi) / BigRational::from_integer(2.into());
        match count_in_disk(q, &mid) {
            Some(n) if n == deg => hi = mid,
            // some root has modulus >= mid (outside or exactly on the
            // circle), so the maximum is at least mid
            Some(_) | None => lo = mid,
        }
    }
    (lo, hi)
}

fn eval_int_poly(p: &[BigInt], x: &BigRational) -> BigRational {
    let mut acc = BigRational::zero();
    for c in p.iter().rev() {
        acc = acc * x + BigRational::from(c.clone());
    }
    acc
}

fn eval_int_poly_derivative(p: &[BigInt], x: &BigRational) -> BigRational {
    let mut acc = BigRational::zero();
    for (i, c) in p.iter().enumerate().skip(1) {
        let mut pow = BigRational::one();
        for _ in 0..i - 1 {
            pow *= x;
        }
        acc += BigRational::from(c.clone() * BigInt::from(i)) * pow;
    }
    acc
}

fn interval_mul(
    alo: &BigRational,
    ahi: &BigRational,
    blo: &BigRational,
    bhi: &BigRational,
) -> (BigRational, BigRational) {
    let cands = [alo * blo, alo * bhi, ahi * blo, ahi * bhi];
    let mut lo = cands[0].clone();
    let mut hi = cands[0].clone();
    for c in &cands[1..] {
        if *c < lo {
            lo = c.clone();
        }
        if *c > hi {
            hi = c.clone();
        }
    }
    (lo, hi)
}

fn eval_int_poly_interval(
    p: &[BigInt],
    xlo: &BigRational,
    xhi: &BigRational,
) -> (BigRational, BigRational) {
    let mut lo = BigRational::zero();
    let mut hi = BigRational::zero();
    let mut plo = BigRational::one();
    let mut phi = BigRational::one();
    for c in p {
        let cr = BigRational::from(c.clone());
        let (tlo, thi) = interval_mul(&plo, &phi, &cr, &cr);
        lo += tlo;
        hi += thi;
        let (nlo, nhi) = interval_mul(&plo, &phi, xlo, xhi);
        plo = nlo;
        phi = nhi;
    }
    (lo, hi)
}

fn eval_int_poly_derivative_interval(
    p: &[BigInt],
    xlo: &BigRational,
    xhi: &BigRational,
) -> (BigRational, BigRational) {
    let dp: Vec<BigInt> = p
        .iter()
        .enumerate()
        .skip(1)
        .map(|(i, c)| c * BigInt::from(i))
        .collect();
    eval_int_poly_interval(&dp, xlo, xhi)
}

/// The coefficients of charPoly(S^t) * (x - 1): the candidate recurrence
/// every observed-height sequence should satisfy past the transient.
pub fn candidate_recurrence(dyn_: &DynSystem) -> Vec<BigRational> {
    let action = ns_action(dyn_);
    let chi = action.st_mat().charpoly();
    let xm1 = Poly::from_int_coeffs(BaseField::Rationals, &[-1, 1]);
    let ext = chi.mul(&xm1);
    let d = ext.degree().max(0) as usize;
    (0..=d).map(|i| rat_at(&ext, i)).collect()
}

#[derive(Debug, Clone)]
pub struct CandidateReport {
    pub holds: bool,
    pub first_violation: Option<usize>,
    pub order: usize,
}

/// Check sum chi_i d_{m+i} = 0 exactly for m >= transient, with chi the
/// extended candidate polynomial.
pub fn candidate_check(seq: &DSequence, dyn_: &DynSystem) -> CandidateReport {
    let chi = candidate_recurrence(dyn_);
    let order = chi.len() - 1;
    let t = seq.rank + 1;
    let m_last = seq.terms.len() as isize - 1 - order as isize;
    for m in t as isize..=m_last {
        let m = m as usize;
        let mut acc = BigRational::zero();
        for (i, ci) in chi.iter().enumerate() {
            acc += ci * &seq.terms[m + i];
        }
        if !acc.is_zero() {
            return CandidateReport { holds: false, first_violation: Some(m), order };
        }
    }
    CandidateReport { holds: true, first_violation: None, order }
}
