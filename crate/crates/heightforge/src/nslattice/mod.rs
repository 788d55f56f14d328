//! The Neron-Severi pullback action S^t / S*, its exact spectral splitting
//! E+ (+) E-, the contraction rate kappa, and the Kronecker classification
//! of contracting integer actions.

mod qmat;
mod zpoly;

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::algebra::{BaseField, Poly, Scalar};
use crate::dynparse::DynSystem;
use crate::error::{Error, Result};

pub use qmat::QMat;
pub use zpoly::{
    cauchy_bound, circle_root_count, count_in_disk, count_real_roots,
    count_real_roots_between, cyclotomic, euler_phi, factor_monic_integer, roots_in_unit_disk,
};

/// The integer action S^t on NS together with the backward degree d; the
/// rational action is S* = S^t / d.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NSAction {
    pub st: Vec<Vec<i64>>,
    pub d: u64,
}

impl NSAction {
    pub fn new(st: Vec<Vec<i64>>, d: u64) -> Self {
        assert!(d >= 1);
        let n = st.len();
        for row in &st {
            assert_eq!(row.len(), n);
        }
        NSAction { st, d }
    }

    pub fn rank(&self) -> usize {
        self.st.len()
    }

    pub fn st_mat(&self) -> QMat {
        QMat::from_int_rows(&self.st)
    }

    pub fn sstar(&self) -> QMat {
        self.st_mat().scale(&BigRational::new(BigInt::one(), self.d.into()))
    }
}

/// The action of the dynamics on NS of the ambient space.
pub fn ns_action(dyn_: &DynSystem) -> NSAction {
    match dyn_ {
        DynSystem::Morphism(m) => {
            let md = m.multidegree();
            if m.space().len() == 1 {
                // NS(P^n) is one-dimensional: the algebraic degree
                NSAction::new(vec![vec![md[0][0] as i64]], 1)
            } else {
                let st: Vec<Vec<i64>> =
                    md.iter().map(|row| row.iter().map(|&x| x as i64).collect()).collect();
                NSAction::new(st, 1)
            }
        }
        DynSystem::Correspondence(c) => {
            NSAction::new(vec![vec![c.d_prime() as i64]], c.d() as u64)
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FactorClass {
    /// Every root has modulus <= 1.
    Small,
    /// Every root has modulus > 1.
    Large,
}

/// kappa: exact rational value or a certified enclosure.
#[derive(Debug, Clone, PartialEq)]
pub enum Kappa {
    Exact(BigRational),
    Interval { lo: BigRational, hi: BigRational },
}

impl Kappa {
    pub fn lo(&self) -> BigRational {
        match self {
            Kappa::Exact(v) => v.clone(),
            Kappa::Interval { lo, .. } => lo.clone(),
        }
    }

    pub fn hi(&self) -> BigRational {
        match self {
            Kappa::Exact(v) => v.clone(),
            Kappa::Interval { hi, .. } => hi.clone(),
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, Kappa::Exact(_))
    }
}

/// Exact spectral data of S* on NS (x) R.
#[derive(Debug, Clone)]
pub struct SpectralSplit {
    /// Characteristic polynomial of S*, monic over Q.
    pub char_poly: Poly,
    /// Irreducible monic factors with multiplicity and class.
    pub factors: Vec<(Poly, usize, FactorClass)>,
    /// Columns span E+ (expanding part). May be empty.
    pub eplus: Vec<Vec<BigRational>>,
    /// Columns span E- (contracting part).
    pub eminus: Vec<Vec<BigRational>>,
    /// min { |alpha| : alpha in spec(S*), |alpha| > 1 }; None when E+ = 0.
    pub kappa: Option<Kappa>,
}

impl SpectralSplit {
    pub fn dim_eplus(&self) -> usize {
        self.eplus.len()
    }

    pub fn dim_eminus(&self) -> usize {
        self.eminus.len()
    }
}

/// Default width of the kappa enclosure.
pub fn default_kappa_width() -> BigRational {
    BigRational::new(BigInt::one(), BigInt::from(10u64).pow(12))
}

/// Split NS (x) R into the expanding and contracting parts of S*.
///
/// Irreducible factors of the characteristic polynomial are classified by
/// exact counts of roots on and inside the unit circle; a factor with
/// roots on both sides yields `UnsupportedSplit` since the invariant
/// splitting would be irrational.
pub fn spectral_split(action: &NSAction, kappa_width: &BigRational) -> Result<SpectralSplit> {
    let n = action.rank();
    let sstar = action.sstar();
    let chi_int = action.st_mat().charpoly();
    let d = BigRational::from_integer(BigInt::from(action.d));

    // factor chi_{S^t} over Q (monic integer), then rescale roots by 1/d
    let int_factors = factor_monic_integer(&chi_int);
    let mut factors: Vec<(Poly, usize, FactorClass)> = Vec::new();
    for (q_int, mult) in int_factors {
        let q = scale_roots(&q_int, &d);
        let class = classify_factor(&q)?;
        factors.push((q, mult, class));
    }

    let mut p_large = Poly::one(BaseField::Rationals);
    let mut p_small = Poly::one(BaseField::Rationals);
    for (q, mult, class) in &factors {
        let pow = q.pow(*mult as u32);
        match class {
            FactorClass::Large => p_large = p_large.mul(&pow),
            FactorClass::Small => p_small = p_small.mul(&pow),
        }
    }

    // primary decomposition: E+ = ker p_large(S*), E- = ker p_small(S*)
    let eplus = sstar.eval_poly(&p_large).kernel();
    let eminus = sstar.eval_poly(&p_small).kernel();
    debug_assert_eq!(eplus.len() + eminus.len(), n);
    debug_assert_eq!(eplus.len() as isize, p_large.degree().max(0));

    let kappa = min_modulus_of_large(&factors, kappa_width)?;

    let char_poly = {
        let dr = BigRational::from_integer(BigInt::from(action.d));
        scale_roots(&chi_int, &dr)
    };

    Ok(SpectralSplit { char_poly, factors, eplus, eminus, kappa })
}

/// q(x) -> monic polynomial whose roots are (roots of q) / d.
fn scale_roots(q: &Poly, d: &BigRational) -> Poly {
    // q(d x), made monic
    let u = Poly::from_rat_coeffs(vec![BigRational::zero(), d.clone()]);
    q.substitute_unchecked(&u).make_monic()
}

fn classify_factor(q: &Poly) -> Result<FactorClass> {
    let m = q.degree();
    assert!(m >= 1);
    let m = m as usize;
    // q = x: the zero eigenvalue
    if m == 1 && rat_coeff(q, 0).is_zero() {
        return Ok(FactorClass::Small);
    }
    let on_circle = circle_root_count(q);
    if on_circle == m {
        return Ok(FactorClass::Small);
    }
    if on_circle > 0 {
        // reciprocal factor with off-circle roots straddles the circle
        return Err(Error::UnsupportedSplit);
    }
    let inside = roots_in_unit_disk(q);
    if inside == 0 {
        Ok(FactorClass::Large)
    } else if inside == m {
        Ok(FactorClass::Small)
    } else {
        Err(Error::UnsupportedSplit)
    }
}

fn rat_coeff(p: &Poly, i: usize) -> BigRational {
    match p.coeff(i) {
        Scalar::Rat(r) => r,
        _ => unreachable!(),
    }
}

/// Certified enclosure of the minimal root modulus over the LARGE factors.
fn min_modulus_of_large(
    factors: &[(Poly, usize, FactorClass)],
    width: &BigRational,
) -> Result<Option<Kappa>> {
    let mut best: Option<Kappa> = None;
    for (q, _, class) in factors {
        if *class != FactorClass::Large {
            continue;
        }
        let k = if q.degree() == 1 {
            Kappa::Exact(rat_coeff(q, 0).abs())
        } else {
            // bisect on [1, cauchy bound]; count(lo) = 0 stays invariant
            let mut lo = BigRational::one();
            let mut hi = cauchy_bound(q);
            while &hi - &lo > *width {
                let mid = (&lo + &hi) / BigRational::from_integer(2.into());
                match count_in_disk(q, &mid) {
                    Some(0) => lo = mid,
                    // some root is inside or exactly on |z| = mid, so the
                    // minimum modulus is at most mid
                    Some(_) | None => hi = mid,
                }
            }
            Kappa::Interval { lo, hi }
        };
        best = Some(match best {
            None => k,
            Some(b) => min_kappa(b, k),
        });
    }
    Ok(best)
}

fn min_kappa(a: Kappa, b: Kappa) -> Kappa {
    // conservative interval min; collapses to Exact when unambiguous
    let lo = a.lo().min(b.lo());
    let hi = a.hi().min(b.hi());
    match (&a, &b) {
        (Kappa::Exact(x), Kappa::Exact(y)) => Kappa::Exact(x.min(y).clone()),
        (Kappa::Exact(x), Kappa::Interval { lo: bl, .. }) if x <= bl => Kappa::Exact(x.clone()),
        (Kappa::Interval { lo: al, .. }, Kappa::Exact(y)) if y <= al => Kappa::Exact(y.clone()),
        _ => Kappa::Interval { lo, hi },
    }
}

/// Verdicts of the integral Kronecker screen.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum KroneckerVerdict {
    AllTorsionOrNilpotent,
    HasExpandingEigenvalue,
    /// Impossible for integer matrices (Kronecker); kept for reporting
    /// symmetry with the rational spectral classification.
    OnCircleNonCyclotomic,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KroneckerReport {
    pub verdict: KroneckerVerdict,
    /// (index n, multiplicity) of cyclotomic factors Phi_n.
    pub cyclotomic_factors: Vec<(u64, usize)>,
    /// Multiplicity of the eigenvalue 0.
    pub nilpotent_order: usize,
}

/// Classify an integer matrix: either its spectrum consists of 0 and roots
/// of unity (so the characteristic polynomial is x^a * prod Phi_n^m), or
/// some eigenvalue has modulus > 1. Nothing else can occur for an integer
/// matrix, so no numeric radii are needed.
pub fn kronecker_classify(m: &[Vec<i64>]) -> KroneckerReport {
    let mat = QMat::from_int_rows(m);
    let mut chi = mat.charpoly();
    let mut nilpotent_order = 0usize;
    let x = Poly::from_int_coeffs(BaseField::Rationals, &[0, 1]);
    while chi.degree() >= 1 && rat_coeff(&chi, 0).is_zero() {
        chi = chi.exact_div(&x);
        nilpotent_order += 1;
    }
    let mut cyclotomic_factors: Vec<(u64, usize)> = Vec::new();
    let mut n = 1u64;
    while chi.degree() >= 1 {
        let d = chi.degree() as u64;
        if n > 2 * d * d + 2 {
            break;
        }
        if euler_phi(n) <= d {
            let phi = cyclotomic(n);
            let mut mult = 0usize;
            while phi.divides(&chi) {
                chi = chi.exact_div(&phi);
                mult += 1;
            }
            if mult > 0 {
                cyclotomic_factors.push((n, mult));
                continue;
            }
        }
        n += 1;
    }
    let verdict = if chi.degree() < 1 {
        KroneckerVerdict::AllTorsionOrNilpotent
    } else {
        KroneckerVerdict::HasExpandingEigenvalue
    };
    KroneckerReport { verdict, cyclotomic_factors, nilpotent_order }
}

/// Independent oracle: entries of M^m for m <= `steps` stay bounded by
/// max(1, rank * |M|_inf)^rank.
pub fn power_boundedness_oracle(m: &[Vec<i64>], steps: usize) -> bool {
    let n = m.len();
    let norm: i64 = m
        .iter()
        .map(|row| row.iter().map(|x| x.abs()).sum::<i64>())
        .max()
        .unwrap_or(0);
    let bound = BigInt::from((n as i64 * norm).max(1)).pow(n as u32);
    let a: Vec<Vec<BigInt>> =
        m.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect();
    let mut p = a.clone();
    for _ in 1..=steps {
        if p.iter().flatten().any(|e| e.abs() > bound) {
            return false;
        }
        // p = p * a
        let mut next = vec![vec![BigInt::zero(); n]; n];
        for i in 0..n {
            for k in 0..n {
                if p[i][k].is_zero() {
                    continue;
                }
                for j in 0..n {
                    let v = &p[i][k] * &a[k][j];
                    next[i][j] += v;
                }
            }
        }
        p = next;
    }
    p.iter().flatten().all(|e| e.abs() <= bound)
}

/// Render a rational polynomial in the variable x (char-poly reporting).
pub fn poly_in_x(p: &Poly) -> String {
    struct W<'a>(&'a Poly);
    impl fmt::Display for W<'_> {
        fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
            crate::algebra::write_terms(
                f,
                (0..=self.0.degree().max(0) as usize)
                    .rev()
                    .map(|i| (self.0.coeff(i), i))
                    .filter(|(c, _)| !c.is_zero()),
                "x",
            )
        }
    }
    format!("{}", W(p))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynparse::load_dynamics;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn ns_action_examples() {
        let swap =
            load_dynamics("base: Q\nspace: P1xP1\nout1: (y0^2, y1^2)\nout2: (x0^3, x1^3)\n")
                .unwrap();
        let a = ns_action(&swap);
        assert_eq!(a.st, vec![vec![0, 3], vec![2, 0]]);
        assert_eq!(a.d, 1);

        let sq = load_dynamics("base: Q\nspace: P1\nout1: (x0^2 + t*x1^2, x1^2)\n").unwrap();
        assert_eq!(ns_action(&sq).st, vec![vec![2]]);

        let cusp = load_dynamics("base: Q\nspace: P1\ncorr: y1^2*x0^3 - y0^2*x1^3\n").unwrap();
        let a = ns_action(&cusp);
        assert_eq!((a.st.clone(), a.d), (vec![vec![3]], 2));
        assert_eq!(*a.sstar().at(0, 0), rat(3, 2));
    }

    #[test]
    fn kronecker_examples() {
        // rotation by i: Phi_4
        let r = kronecker_classify(&[vec![0, -1], vec![1, 0]]);
        assert_eq!(r.verdict, KroneckerVerdict::AllTorsionOrNilpotent);
        assert_eq!(r.cyclotomic_factors, vec![(4, 1)]);
        // unipotent: Phi_1 twice
        let r = kronecker_classify(&[vec![1, 1], vec![0, 1]]);
        assert_eq!(r.verdict, KroneckerVerdict::AllTorsionOrNilpotent);
        assert_eq!(r.cyclotomic_factors, vec![(1, 2)]);
        // companion of x^2 - x - 1: golden expansion
        let r = kronecker_classify(&[vec![0, 1], vec![1, 1]]);
        assert_eq!(r.verdict, KroneckerVerdict::HasExpandingEigenvalue);
        // nilpotent block
        let r = kronecker_classify(&[vec![0, 1], vec![0, 0]]);
        assert_eq!(r.verdict, KroneckerVerdict::AllTorsionOrNilpotent);
        assert_eq!(r.nilpotent_order, 2);
    }

    #[test]
    fn spectral_diag() {
        let a = NSAction::new(vec![vec![2, 0], vec![0, 1]], 1);
        let s = spectral_split(&a, &default_kappa_width()).unwrap();
        assert_eq!(s.dim_eplus(), 1);
        assert_eq!(s.dim_eminus(), 1);
        assert_eq!(s.kappa, Some(Kappa::Exact(rat(2, 1))));
        assert_eq!(s.eplus[0], vec![rat(1, 1), rat(0, 1)]);
        assert_eq!(s.eminus[0], vec![rat(0, 1), rat(1, 1)]);
    }

    #[test]
    fn spectral_swap_sqrt6() {
        let a = NSAction::new(vec![vec![0, 3], vec![2, 0]], 1);
        let s = spectral_split(&a, &default_kappa_width()).unwrap();
        assert_eq!(s.dim_eplus(), 2);
        assert_eq!(s.dim_eminus(), 0);
        let k = s.kappa.unwrap();
        assert!(!k.is_exact());
        let (lo, hi) = (k.lo(), k.hi());
        assert!(&hi - &lo < default_kappa_width());
        // contains sqrt(6): lo^2 <= 6 <= hi^2
        assert!(&lo * &lo <= rat(6, 1));
        assert!(&hi * &hi >= rat(6, 1));
    }

    #[test]
    fn spectral_golden_unsupported() {
        let a = NSAction::new(vec![vec![0, 1], vec![1, 1]], 1);
        assert_eq!(
            spectral_split(&a, &default_kappa_width()).unwrap_err(),
            Error::UnsupportedSplit
        );
    }

    #[test]
    fn spectral_correspondence_exact() {
        let a = NSAction::new(vec![vec![3]], 2);
        let s = spectral_split(&a, &default_kappa_width()).unwrap();
        assert_eq!(s.kappa, Some(Kappa::Exact(rat(3, 2))));
        assert_eq!(s.dim_eplus(), 1);
    }

    #[test]
    fn spectral_invariance_identity() {
        // S* maps E+ into itself: check rank([B | S*B]) = rank(B)
        let a = NSAction::new(vec![vec![2, 1], vec![0, 3]], 1);
        let s = spectral_split(&a, &default_kappa_width()).unwrap();
        let sstar = a.sstar();
        for basis in [&s.eplus, &s.eminus] {
            if basis.is_empty() {
                continue;
            }
            let b = QMat::from_columns(2, basis.clone());
            let sb = sstar.mul(&b);
            let mut joined = QMat::zero(2, b.cols + sb.cols);
            for i in 0..2 {
                for j in 0..b.cols {
                    *joined.at_mut(i, j) = b.at(i, j).clone();
                }
                for j in 0..sb.cols {
                    *joined.at_mut(i, b.cols + j) = sb.at(i, j).clone();
                }
            }
            assert_eq!(joined.rank(), b.rank());
        }
    }

    #[test]
    fn power_oracle_agrees() {
        assert!(power_boundedness_oracle(&[vec![0, -1], vec![1, 0]], 200));
        assert!(!power_boundedness_oracle(&[vec![0, 1], vec![1, 1]], 200));
        assert!(power_boundedness_oracle(&[vec![0, 0], vec![0, 0]], 200));
    }

    #[test]
    fn charpoly_small_factor_law() {
        // charPoly(S*|E+) = product of LARGE factors
        let a = NSAction::new(vec![vec![2, 0], vec![0, 1]], 1);
        let s = spectral_split(&a, &default_kappa_width()).unwrap();
        let mut large = Poly::one(BaseField::Rationals);
        for (q, m, c) in &s.factors {
            if *c == FactorClass::Large {
                large = large.mul(&q.pow(*m as u32));
            }
        }
        assert_eq!(large.degree() as usize, s.dim_eplus());
    }
}
