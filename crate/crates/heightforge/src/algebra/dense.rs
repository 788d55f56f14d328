//! Dense univariate kernels, generic over the coefficient field.
//!
//! Coefficients are stored low-to-high with no trailing zeros; the empty
//! vector is the zero polynomial. `gcd` switches from the classical
//! Euclidean scheme to a half-gcd divide-and-conquer above a degree
//! threshold. The half-gcd only ever applies unimodular transforms, so the
//! gcd it feeds is correct unconditionally; the recursion is a speed
//! heuristic with a classical fallback when it fails to make progress.

use super::field::CoeffField;

pub(crate) const KARATSUBA_THRESHOLD: usize = 32;
/// Degree above which gcd switches to the subquadratic path.
pub(crate) const FAST_GCD_THRESHOLD: usize = 512;

pub(crate) fn trim<F: CoeffField>(f: &F, v: &mut Vec<F::Elem>) {
    while let Some(last) = v.last() {
        if f.is_zero(last) {
            v.pop();
        } else {
            break;
        }
    }
}

pub(crate) fn deg<T>(v: &[T]) -> isize {
    v.len() as isize - 1
}

pub(crate) fn add<F: CoeffField>(f: &F, a: &[F::Elem], b: &[F::Elem]) -> Vec<F::Elem> {
    let n = a.len().max(b.len());
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let x = match (a.get(i), b.get(i)) {
            (Some(x), Some(y)) => f.add(x, y),
            (Some(x), None) => x.clone(),
            (None, Some(y)) => y.clone(),
            (None, None) => unreachable!(),
        };
        out.push(x);
    }
    trim(f, &mut out);
    out
}

pub(crate) fn sub<F: CoeffField>(f: &F, a: &[F::Elem], b: &[F::Elem]) -> Vec<F::Elem> {
    let n = a.len().max(b.len());
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let x = match (a.get(i), b.get(i)) {
            (Some(x), Some(y)) => f.sub(x, y),
            (Some(x), None) => x.clone(),
            (None, Some(y)) => f.neg(y),
            (None, None) => unreachable!(),
        };
        out.push(x);
    }
    trim(f, &mut out);
    out
}

pub(crate) fn neg<F: CoeffField>(f: &F, a: &[F::Elem]) -> Vec<F::Elem> {
    a.iter().map(|x| f.neg(x)).collect()
}

pub(crate) fn scale<F: CoeffField>(f: &F, a: &[F::Elem], c: &F::Elem) -> Vec<F::Elem> {
    if f.is_zero(c) {
        return Vec::new();
    }
    a.iter().map(|x| f.mul(x, c)).collect()
}

fn mul_school<F: CoeffField>(f: &F, a: &[F::Elem], b: &[F::Elem]) -> Vec<F::Elem> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![f.zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if f.is_zero(x) {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            if f.is_zero(y) {
                continue;
            }
            let t = f.mul(x, y);
            f.add_assign(&mut out[i + j], &t);
        }
    }
    trim(f, &mut out);
    out
}

pub(crate) fn mul<F: CoeffField>(f: &F, a: &[F::Elem], b: &[F::Elem]) -> Vec<F::Elem> {
    if a.len().min(b.len()) < KARATSUBA_THRESHOLD {
        return mul_school(f, a, b);
    }
    let m = a.len().max(b.len()) / 2;
    let (a0, a1) = split_at_clamped(a, m);
    let (b0, b1) = split_at_clamped(b, m);
    let z0 = mul(f, a0, b0);
    let z2 = mul(f, a1, b1);
    let sa = add(f, a0, a1);
    let sb = add(f, b0, b1);
    let z1 = sub(f, &mul(f, &sa, &sb), &add(f, &z0, &z2));
    // out = z0 + z1 x^m + z2 x^2m
    let mut out = vec![f.zero(); a.len() + b.len() - 1];
    for (i, c) in z0.into_iter().enumerate() {
        f.add_assign(&mut out[i], &c);
    }
    for (i, c) in z1.into_iter().enumerate() {
        f.add_assign(&mut out[i + m], &c);
    }
    for (i, c) in z2.into_iter().enumerate() {
        f.add_assign(&mut out[i + 2 * m], &c);
    }
    trim(f, &mut out);
    out
}

fn split_at_clamped<T>(a: &[T], m: usize) -> (&[T], &[T]) {
    if a.len() <= m {
        (a, &[])
    } else {
        a.split_at(m)
    }
}

/// Euclidean division by a nonzero divisor over a field.
pub(crate) fn divrem<F: CoeffField>(
    f: &F,
    a: &[F::Elem],
    b: &[F::Elem],
) -> (Vec<F::Elem>, Vec<F::Elem>) {
    assert!(!b.is_empty(), "division by zero polynomial");
    if a.len() < b.len() {
        return (Vec::new(), a.to_vec());
    }
    let lead_inv = f.inv(b.last().unwrap());
    let mut rem = a.to_vec();
    let qlen = a.len() - b.len() + 1;
    let mut q = vec![f.zero(); qlen];
    for k in (0..qlen).rev() {
        let top = rem[k + b.len() - 1].clone();
        if f.is_zero(&top) {
            continue;
        }
        let c = f.mul(&top, &lead_inv);
        for (j, bj) in b.iter().enumerate() {
            if f.is_zero(bj) {
                continue;
            }
            let t = f.mul(&c, bj);
            rem[k + j] = f.sub(&rem[k + j], &t);
        }
        q[k] = c;
    }
    rem.truncate(b.len() - 1);
    trim(f, &mut rem);
    trim(f, &mut q);
    (q, rem)
}

pub(crate) fn make_monic<F: CoeffField>(f: &F, a: &[F::Elem]) -> Vec<F::Elem> {
    match a.last() {
        None => Vec::new(),
        Some(lc) => {
            let inv = f.inv(lc);
            scale(f, a, &inv)
        }
    }
}

fn gcd_classical<F: CoeffField>(f: &F, a: &[F::Elem], b: &[F::Elem]) -> Vec<F::Elem> {
    let mut x = a.to_vec();
    let mut y = b.to_vec();
    while !y.is_empty() {
        // monic normalization each round keeps Q coefficients tame
        y = make_monic(f, &y);
        let (_, r) = divrem(f, &x, &y);
        x = y;
        y = r;
    }
    make_monic(f, &x)
}

type Mat<E> = [Vec<E>; 4]; // row-major 2x2 over k[x]

fn mat_identity<F: CoeffField>(f: &F) -> Mat<F::Elem> {
    [vec![f.one()], Vec::new(), Vec::new(), vec![f.one()]]
}

fn mat_mul<F: CoeffField>(f: &F, m: &Mat<F::Elem>, n: &Mat<F::Elem>) -> Mat<F::Elem> {
    [
        add(f, &mul(f, &m[0], &n[0]), &mul(f, &m[1], &n[2])),
        add(f, &mul(f, &m[0], &n[1]), &mul(f, &m[1], &n[3])),
        add(f, &mul(f, &m[2], &n[0]), &mul(f, &m[3], &n[2])),
        add(f, &mul(f, &m[2], &n[1]), &mul(f, &m[3], &n[3])),
    ]
}

fn mat_apply<F: CoeffField>(
    f: &F,
    m: &Mat<F::Elem>,
    a: &[F::Elem],
    b: &[F::Elem],
) -> (Vec<F::Elem>, Vec<F::Elem>) {
    (
        add(f, &mul(f, &m[0], a), &mul(f, &m[1], b)),
        add(f, &mul(f, &m[2], a), &mul(f, &m[3], b)),
    )
}

/// One Euclidean step as a unimodular matrix: (a, b) -> (b, a mod b).
fn step_matrix<F: CoeffField>(f: &F, a: &[F::Elem], b: &[F::Elem]) -> (Mat<F::Elem>, Vec<F::Elem>) {
    let (q, r) = divrem(f, a, b);
    ([Vec::new(), vec![f.one()], vec![f.one()], neg(f, &q)], r)
}

fn shift_down<F: CoeffField>(a: &[F::Elem], k: usize) -> Vec<F::Elem> {
    if a.len() <= k {
        Vec::new()
    } else {
        a[k..].to_vec()
    }
}

/// Half-gcd: returns a unimodular M with (c, d) = M (a, b) and, when the
/// divide-and-conquer premises hold, deg c >= ceil(deg a / 2) > deg d.
/// Unimodularity holds unconditionally, which is all `gcd` relies on.
fn hgcd<F: CoeffField>(f: &F, a: &[F::Elem], b: &[F::Elem]) -> Mat<F::Elem> {
    let n = deg(a);
    let m = (n + 1) / 2; // ceil(n/2)
    if deg(b) < m || b.is_empty() {
        return mat_identity(f);
    }
    let mu = m as usize;
    let a1 = shift_down::<F>(a, mu);
    let b1 = shift_down::<F>(b, mu);
    let r = hgcd(f, &a1, &b1);
    let (c, d) = mat_apply(f, &r, a, b);
    if d.is_empty() || deg(&d) < m {
        return r;
    }
    if deg(&c) <= deg(&d) {
        // divide-and-conquer premise failed; recover with explicit steps
        return finish_classically(f, r, c, d, m);
    }
    let (q, c2) = step_matrix(f, &c, &d);
    let (c, d) = (d, c2);
    let mq = mat_mul(f, &q, &r);
    if d.is_empty() || deg(&d) < m {
        return mq;
    }
    let k = (2 * m - deg(&c)).max(0) as usize;
    let c1 = shift_down::<F>(&c, k);
    let d1 = shift_down::<F>(&d, k);
    if c1.is_empty() || deg(&d1) >= deg(&c1) {
        return finish_classically(f, mq, c, d, m);
    }
    let s = hgcd(f, &c1, &d1);
    let (cc, dd) = mat_apply(f, &s, &c, &d);
    let ms = mat_mul(f, &s, &mq);
    if !dd.is_empty() && deg(&dd) >= m || deg(&cc) <= deg(&dd) {
        return finish_classically(f, ms, cc, dd, m);
    }
    ms
}

fn finish_classically<F: CoeffField>(
    f: &F,
    mut m: Mat<F::Elem>,
    mut c: Vec<F::Elem>,
    mut d: Vec<F::Elem>,
    target: isize,
) -> Mat<F::Elem> {
    if deg(&c) < deg(&d) {
        m = mat_mul(f, &[Vec::new(), vec![f.one()], vec![f.one()], Vec::new()], &m);
        std::mem::swap(&mut c, &mut d);
    }
    while !d.is_empty() && deg(&d) >= target {
        let (q, r) = step_matrix(f, &c, &d);
        m = mat_mul(f, &q, &m);
        c = d;
        d = r;
    }
    m
}

/// Monic gcd; the classical scheme below `FAST_GCD_THRESHOLD`, half-gcd
/// reduction above it.
pub(crate) fn gcd<F: CoeffField>(f: &F, a: &[F::Elem], b: &[F::Elem]) -> Vec<F::Elem> {
    let mut x = a.to_vec();
    let mut y = b.to_vec();
    if deg(&x) < deg(&y) {
        std::mem::swap(&mut x, &mut y);
    }
    loop {
        if y.is_empty() {
            return make_monic(f, &x);
        }
        if deg(&y) < FAST_GCD_THRESHOLD as isize {
            return gcd_classical(f, &x, &y);
        }
        let m = hgcd(f, &x, &y);
        let (c, d) = mat_apply(f, &m, &x, &y);
        let (mut c, mut d) = (c, d);
        if deg(&c) < deg(&d) {
            std::mem::swap(&mut c, &mut d);
        }
        if deg(&c) >= deg(&x) {
            // no progress from the fast path: take one honest step
            let (_, r) = divrem(f, &x, &y);
            c = y;
            d = r;
        }
        x = c;
        y = d;
    }
}

pub(crate) fn eval<F: CoeffField>(f: &F, a: &[F::Elem], x: &F::Elem) -> F::Elem {
    let mut acc = f.zero();
    for c in a.iter().rev() {
        acc = f.add(&f.mul(&acc, x), c);
    }
    acc
}

/// Substitution a(u(x)) by Horner over polynomials.
pub(crate) fn compose<F: CoeffField>(f: &F, a: &[F::Elem], u: &[F::Elem]) -> Vec<F::Elem> {
    let mut acc: Vec<F::Elem> = Vec::new();
    for c in a.iter().rev() {
        acc = mul(f, &acc, u);
        if !f.is_zero(c) {
            if acc.is_empty() {
                acc.push(c.clone());
            } else {
                acc[0] = f.add(&acc[0], c);
            }
        }
        trim(f, &mut acc);
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::field::FpF;

    fn p(v: &[u64]) -> Vec<u64> {
        let f = FpF { p: 17 };
        let mut v = v.to_vec();
        trim(&f, &mut v);
        v
    }

    #[test]
    fn divrem_roundtrip() {
        let f = FpF { p: 17 };
        let a = p(&[3, 1, 4, 1, 5, 9, 2]);
        let b = p(&[2, 7, 1]);
        let (q, r) = divrem(&f, &a, &b);
        let back = add(&f, &mul(&f, &q, &b), &r);
        assert_eq!(back, a);
        assert!(deg(&r) < deg(&b));
    }

    #[test]
    fn gcd_planted_factor() {
        let f = FpF { p: 5 };
        let g = p(&[1, 2, 1]); // (x+... ) some factor
        let a = mul(&f, &g, &p(&[3, 1, 0, 2]));
        let b = mul(&f, &g, &p(&[4, 0, 1]));
        let d = gcd(&f, &a, &b);
        let (_, r1) = divrem(&f, &a, &d);
        let (_, r2) = divrem(&f, &b, &d);
        assert!(r1.is_empty() && r2.is_empty());
        let (_, rg) = divrem(&f, &d, &g);
        assert!(rg.is_empty(), "gcd must contain the planted factor");
    }

    #[test]
    fn karatsuba_matches_schoolbook() {
        let f = FpF { p: 101 };
        let mut state = 0x9e3779b97f4a7c15u64;
        let mut next = move || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            state % 101
        };
        for n in [40usize, 65, 130] {
            let a: Vec<u64> = (0..n).map(|_| next()).collect();
            let b: Vec<u64> = (0..n + 13).map(|_| next()).collect();
            let mut a = a;
            let mut b = b;
            trim(&f, &mut a);
            trim(&f, &mut b);
            assert_eq!(mul(&f, &a, &b), mul_school(&f, &a, &b));
        }
    }

    #[test]
    fn fast_gcd_matches_classical() {
        let f = FpF { p: 3 };
        let mut state = 42u64;
        let mut next = move || {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            (state >> 33) % 3
        };
        for trial in 0..8 {
            let n = 600 + 37 * trial;
            let g: Vec<u64> = {
                let mut v: Vec<u64> = (0..(trial * 5 + 1)).map(|_| next()).collect();
                v.push(1);
                v
            };
            let mut a: Vec<u64> = (0..n).map(|_| next()).collect();
            let mut b: Vec<u64> = (0..n / 2 + 7).map(|_| next()).collect();
            trim(&f, &mut a);
            trim(&f, &mut b);
            let a = mul(&f, &a, &g);
            let b = mul(&f, &b, &g);
            assert_eq!(gcd(&f, &a, &b), gcd_classical(&f, &a, &b), "trial {}", trial);
        }
    }
}
