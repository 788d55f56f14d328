//! The canonical-height engine: exact Tate telescoping for morphisms and
//! correspondences, scalar and vector-valued, with certified error radii.
//!
//! For a dynamics with expanding part E+ and inverse restriction
//! s = (S*|E+)^-1, the coordinate of the canonical height against a basis
//! vector e is the limit of h_0(iterate_m(a), s^m e). All iterates, NS
//! vectors and height pairings are exact rationals; only the reported
//! enclosure widths involve the certified kappa interval.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::algebra::Poly;
use crate::correspondence::ZeroCycle;
use crate::dynparse::DynSystem;
use crate::error::{Error, Result};
use crate::nslattice::{ns_action, spectral_split, Kappa, NSAction, QMat, SpectralSplit};
use crate::projective::MultiPoint;

/// How trustworthy a certificate's error radius is.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Rigor {
    /// The value sequence was observed constant from some m0 <= m; the
    /// radius is zero.
    Exact,
    /// Radius from the computed drift constant and the certified tail sum.
    Rigorous,
    /// Radius from the last increment and kappa only.
    Heuristic,
}

impl std::fmt::Display for Rigor {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Rigor::Exact => write!(f, "exact"),
            Rigor::Rigorous => write!(f, "rigorous"),
            Rigor::Heuristic => write!(f, "heuristic"),
        }
    }
}

/// A certified real enclosure [lo, hi].
#[derive(Debug, Clone, PartialEq)]
pub struct Enclosure {
    pub lo: BigRational,
    pub hi: BigRational,
}

impl Enclosure {
    pub fn exact(v: BigRational) -> Self {
        Enclosure { lo: v.clone(), hi: v }
    }

    pub fn around(mid: BigRational, radius: BigRational) -> Self {
        Enclosure { lo: &mid - &radius, hi: &mid + &radius }
    }

    pub fn mid(&self) -> BigRational {
        (&self.lo + &self.hi) / BigRational::from_integer(2.into())
    }

    pub fn radius(&self) -> BigRational {
        (&self.hi - &self.lo) / BigRational::from_integer(2.into())
    }

    pub fn contains_zero(&self) -> bool {
        !self.lo.is_positive() && !self.hi.is_negative()
    }

    pub fn strictly_positive(&self) -> bool {
        self.lo.is_positive()
    }
}

/// Canonical-height value with convergence evidence.
#[derive(Debug, Clone)]
pub struct HeightCertificate {
    /// Coordinates of h-hat(a) against the E+ basis (one entry in the
    /// scalar case).
    pub value: Vec<Enclosure>,
    pub iterations: usize,
    pub last_increment: BigRational,
    pub error_radius: BigRational,
    pub rigor: Rigor,
}

impl HeightCertificate {
    pub fn all_enclose_zero(&self) -> bool {
        self.value.iter().all(|e| e.contains_zero())
    }

    pub fn any_strictly_positive(&self) -> bool {
        self.value.iter().any(|e| e.strictly_positive())
    }
}

/// Engine options; iteration budgets follow the base field.
#[derive(Debug, Clone)]
pub struct TateOptions {
    pub tol: BigRational,
    pub max_iter: usize,
    pub kappa_width: BigRational,
}

impl TateOptions {
    pub fn for_field(field: crate::algebra::BaseField) -> Self {
        let max_iter = if field.is_finite() { 20 } else { 12 };
        TateOptions {
            tol: BigRational::new(BigInt::one(), BigInt::from(1_000_000u64)),
            max_iter,
            kappa_width: crate::nslattice::default_kappa_width(),
        }
    }

    pub fn with_tol(mut self, tol: BigRational) -> Self {
        self.tol = tol;
        self
    }

    pub fn with_max_iter(mut self, max_iter: usize) -> Self {
        self.max_iter = max_iter;
        self
    }
}

/// A point orbit (morphisms) or cycle orbit (correspondences).
#[derive(Debug, Clone, PartialEq)]
pub enum DynState {
    Point(MultiPoint),
    Cycle(ZeroCycle),
}

impl DynState {
    /// Per-NS-coordinate heights: the height vector of a point, or the
    /// normalized cycle height.
    pub fn height_vec(&self) -> Vec<BigRational> {
        match self {
            DynState::Point(p) => p
                .height()
                .per_factor()
                .iter()
                .map(|&h| BigRational::from_integer(h.into()))
                .collect(),
            DynState::Cycle(c) => vec![c.height()],
        }
    }

    pub fn substitute(&self, u: &Poly) -> Result<DynState> {
        Ok(match self {
            DynState::Point(p) => DynState::Point(p.substitute(u)?),
            DynState::Cycle(c) => DynState::Cycle(c.substitute(u)?),
        })
    }
}

/// One dynamics step.
pub fn step(dyn_: &DynSystem, state: &DynState) -> Result<DynState> {
    match (dyn_, state) {
        (DynSystem::Morphism(m), DynState::Point(p)) => Ok(DynState::Point(m.apply(p)?)),
        (DynSystem::Correspondence(s), DynState::Cycle(c)) => {
            Ok(DynState::Cycle(s.pushforward(c)?.0))
        }
        (DynSystem::Correspondence(s), DynState::Point(p)) => {
            let c = ZeroCycle::from_point(p)?;
            Ok(DynState::Cycle(s.pushforward(&c)?.0))
        }
        (DynSystem::Morphism(_), DynState::Cycle(_)) => Err(Error::SpaceMismatch(
            "morphisms iterate points, not cycles".into(),
        )),
    }
}

/// The orbit a, T(a), ..., T^steps(a).
pub fn orbit(dyn_: &DynSystem, start: &DynState, steps: usize) -> Result<Vec<DynState>> {
    let mut cache = OrbitCache::new(dyn_, start)?;
    cache.get(steps)?;
    Ok(cache.states)
}

/// Orbit prefix computed on demand, so engines that stop early never pay
/// for deep iterates.
pub struct OrbitCache<'a> {
    dyn_: &'a DynSystem,
    states: Vec<DynState>,
}

impl<'a> OrbitCache<'a> {
    pub fn new(dyn_: &'a DynSystem, start: &DynState) -> Result<Self> {
        let first = match (dyn_, start) {
            (DynSystem::Correspondence(_), DynState::Point(p)) => {
                DynState::Cycle(ZeroCycle::from_point(p)?)
            }
            _ => start.clone(),
        };
        Ok(OrbitCache { dyn_, states: vec![first] })
    }

    pub fn get(&mut self, m: usize) -> Result<&DynState> {
        while self.states.len() <= m {
            let next = step(self.dyn_, self.states.last().unwrap())?;
            self.states.push(next);
        }
        Ok(&self.states[m])
    }

    pub fn computed(&self) -> &[DynState] {
        &self.states
    }
}

/// Drift constant C with |h(T(x)) - (S* pairing)| <= C per unit NS vector:
/// exact for certified P1-block morphisms and for correspondences, absent
/// (heuristic mode) otherwise.
pub fn drift_constant(dyn_: &DynSystem) -> Option<BigRational> {
    match dyn_ {
        DynSystem::Morphism(m) => m
            .drift_constant()
            .map(|c| BigRational::from_integer(c.into())),
        DynSystem::Correspondence(c) => {
            Some(BigRational::from_integer(c.deg_t().max(0).into()))
        }
    }
}

/// Precomputed spectral data for repeated height computations against one
/// dynamics.
pub struct CanonicalHeightEngine {
    dyn_: DynSystem,
    action: NSAction,
    split: SpectralSplit,
    basis: QMat,
    restriction: QMat,
    s_inv: QMat,
    drift: Option<BigRational>,
    /// (P, rho) with |s^P|_1 = rho < 1, for geometric tail bounds.
    decay: Option<(usize, BigRational)>,
    basis_norm: BigRational,
}

impl CanonicalHeightEngine {
    pub fn new(dyn_: &DynSystem, kappa_width: &BigRational) -> Result<Self> {
        let action = ns_action(dyn_);
        let split = spectral_split(&action, kappa_width)?;
        let r = split.dim_eplus();
        if r == 0 {
            return Err(Error::EmptyEplus);
        }
        let n = action.rank();
        let basis = QMat::from_columns(n, split.eplus.clone());
        let sstar = action.sstar();
        // restriction R with S* B = B R
        let sb = sstar.mul(&basis);
        let mut rcols = Vec::new();
        for j in 0..r {
            let col: Vec<BigRational> = (0..n).map(|i| sb.at(i, j).clone()).collect();
            let x = basis.solve(&col).expect("E+ is S*-invariant");
            rcols.push(x);
        }
        let restriction = QMat::from_columns(r, rcols);
        let s_inv = restriction
            .inverse()
            .expect("S* restricted to E+ is invertible");
        let drift = drift_constant(dyn_);
        let decay = find_decay(&s_inv);
        let basis_norm = basis.one_norm();
        Ok(CanonicalHeightEngine {
            dyn_: dyn_.clone(),
            action,
            split,
            basis,
            restriction,
            s_inv,
            drift,
            decay,
            basis_norm,
        })
    }

    pub fn split(&self) -> &SpectralSplit {
        &self.split
    }

    pub fn action(&self) -> &NSAction {
        &self.action
    }

    pub fn restriction(&self) -> &QMat {
        &self.restriction
    }

    pub fn dim(&self) -> usize {
        self.split.dim_eplus()
    }

    pub fn kappa(&self) -> &Kappa {
        self.split.kappa.as_ref().expect("E+ nonempty has kappa")
    }

    /// Vector canonical height from a fresh orbit, computing only as many
    /// iterates as the stopping rule demands.
    pub fn vector_height(&self, start: &DynState, opts: &TateOptions) -> Result<HeightCertificate> {
        let mut cache = OrbitCache::new(&self.dyn_, start)?;
        self.vector_height_cached(&mut cache, 0, opts)
    }

    /// Vector canonical height reading iterates `offset`, `offset+1`, ...
    /// from a shared orbit cache.
    pub fn vector_height_cached(
        &self,
        cache: &mut OrbitCache,
        offset: usize,
        opts: &TateOptions,
    ) -> Result<HeightCertificate> {
        self.vector_core(
            |m| cache.get(offset + m).map(|s| Some(s.height_vec())),
            opts,
        )
    }

    /// Vector canonical height from a precomputed orbit prefix; uses at
    /// most `opts.max_iter` steps and whatever the orbit provides.
    pub fn vector_height_on_orbit(
        &self,
        states: &[DynState],
        opts: &TateOptions,
    ) -> HeightCertificate {
        self.vector_core(|m| Ok(states.get(m).map(|s| s.height_vec())), opts)
            .expect("slice fetch cannot fail")
    }

    fn vector_core(
        &self,
        mut fetch: impl FnMut(usize) -> Result<Option<Vec<BigRational>>>,
        opts: &TateOptions,
    ) -> Result<HeightCertificate> {
        let r = self.dim();
        // column j of s^m is w_m^{(j)} = s^m e_j
        let mut spow = QMat::identity(r);
        let mut values: Vec<Vec<BigRational>> = Vec::new(); // values[m][j]
        let mut rigor = Rigor::Heuristic;
        for m in 0..=opts.max_iter {
            let Some(h) = fetch(m)? else { break };
            let mut row = Vec::with_capacity(r);
            for j in 0..r {
                let w: Vec<BigRational> = (0..r).map(|i| spow.at(i, j).clone()).collect();
                let v = self.basis.mul_vec(&w);
                let mut val = BigRational::zero();
                for (vi, hi) in v.iter().zip(&h) {
                    val += vi * hi;
                }
                row.push(val);
            }
            values.push(row);
            // exact stabilization: three equal consecutive value vectors
            if m >= 2 && values[m] == values[m - 1] && values[m - 1] == values[m - 2] {
                rigor = Rigor::Exact;
                break;
            }
            // rigorous stop on tolerance
            if let Some(rad) = self.rigorous_radius(&spow) {
                if rad <= opts.tol {
                    rigor = Rigor::Rigorous;
                    break;
                }
            }
            spow = self.s_inv.mul(&spow);
        }
        let m = values.len() - 1;
        let last_increment = if m == 0 {
            BigRational::zero()
        } else {
            let mut best = BigRational::zero();
            for j in 0..r {
                let d = (&values[m][j] - &values[m - 1][j]).abs();
                if d > best {
                    best = d;
                }
            }
            best
        };
        let (radius, rigor) = match rigor {
            Rigor::Exact => (BigRational::zero(), Rigor::Exact),
            _ => match self.rigorous_radius(&spow_at(&self.s_inv, m)) {
                Some(rad) if rad.is_zero() => (rad, Rigor::Exact),
                Some(rad) => (rad, Rigor::Rigorous),
                None => (self.heuristic_radius(&last_increment), Rigor::Heuristic),
            },
        };
        let value: Vec<Enclosure> = (0..r)
            .map(|j| Enclosure::around(values[m][j].clone(), radius.clone()))
            .collect();
        Ok(HeightCertificate {
            value,
            iterations: m,
            last_increment,
            error_radius: radius,
            rigor,
        })
    }

    /// Rigorous tail bound C * |B|_1 * (sum_{l=m+1}^{m+P} |s^l|_1) / (1 - rho),
    /// uniform over unit basis vectors, given s^m. None without a drift
    /// constant or decay certificate.
    fn rigorous_radius(&self, spow_m: &QMat) -> Option<BigRational> {
        let c = self.drift.as_ref()?;
        let (p, rho) = self.decay.as_ref()?;
        if c.is_zero() {
            return Some(BigRational::zero());
        }
        // sum of |s^l|_1 for l = m+1 .. m+P
        let mut acc = BigRational::zero();
        let mut cur = spow_m.clone();
        for _ in 0..*p {
            cur = self.s_inv.mul(&cur);
            acc += cur.one_norm();
        }
        let tail = acc / (BigRational::one() - rho);
        Some(c * &self.basis_norm * tail)
    }

    fn heuristic_radius(&self, last_increment: &BigRational) -> BigRational {
        let k = self.kappa().lo();
        if k <= BigRational::one() {
            return last_increment.clone();
        }
        last_increment * &k / (&k - &BigRational::one())
    }

    /// Max over E+ basis vectors e of |h-hat(T a)(e) - h-hat(a)(S* e)|,
    /// with the acceptance bound (combined radii + tol).
    pub fn functional_equation(
        &self,
        start: &DynState,
        opts: &TateOptions,
    ) -> Result<FunctionalEquationReport> {
        let mut cache = OrbitCache::new(&self.dyn_, start)?;
        let cert_a = self.vector_height_cached(&mut cache, 0, opts)?;
        let cert_fa = self.vector_height_cached(&mut cache, 1, opts)?;
        let r = self.dim();
        let mut max_residual = BigRational::zero();
        let mut allowed = opts.tol.clone();
        let mut ok = true;
        for j in 0..r {
            // h-hat(a)(S* e_j) = sum_k R[k][j] h-hat(a)(e_k)
            let mut rhs = BigRational::zero();
            let mut rhs_rad = BigRational::zero();
            for k in 0..r {
                rhs += self.restriction.at(k, j) * cert_a.value[k].mid();
                rhs_rad += self.restriction.at(k, j).abs() * cert_a.value[k].radius();
            }
            let lhs = cert_fa.value[j].mid();
            let resid = (lhs - rhs).abs();
            let allow_j = cert_fa.value[j].radius() + rhs_rad + &opts.tol;
            // the bound is per coordinate; the reported numbers are maxima
            ok = ok && resid <= allow_j;
            if resid > max_residual {
                max_residual = resid;
            }
            if allow_j > allowed {
                allowed = allow_j;
            }
        }
        Ok(FunctionalEquationReport { max_residual, allowed, ok, cert_a, cert_fa })
    }
}

fn spow_at(s: &QMat, m: usize) -> QMat {
    let mut acc = QMat::identity(s.rows);
    for _ in 0..m {
        acc = s.mul(&acc);
    }
    acc
}

/// Find P with |s^P|_1 < 1 by repeated squaring, up to P = 64.
fn find_decay(s: &QMat) -> Option<(usize, BigRational)> {
    let mut p = 1usize;
    let mut cur = s.clone();
    while p <= 64 {
        let norm = cur.one_norm();
        if norm < BigRational::one() {
            return Some((p, norm));
        }
        cur = cur.mul(&cur);
        p *= 2;
    }
    None
}

#[derive(Debug, Clone)]
pub struct FunctionalEquationReport {
    pub max_residual: BigRational,
    pub allowed: BigRational,
    pub ok: bool,
    pub cert_a: HeightCertificate,
    pub cert_fa: HeightCertificate,
}

/// Scalar Call-Silverman canonical height against an exact eigenvector: e with
/// S* e = kappa e, kappa > 1.
pub fn canonical_height_scalar(
    dyn_: &DynSystem,
    start: &DynState,
    e: &[BigRational],
    opts: &TateOptions,
) -> Result<HeightCertificate> {
    let action = ns_action(dyn_);
    if e.len() != action.rank() {
        return Err(Error::SpaceMismatch("eigenvector rank mismatch".into()));
    }
    let sstar = action.sstar();
    let se = sstar.mul_vec(e);
    // kappa from the first nonzero coordinate; then verify exactly
    let mut kappa: Option<BigRational> = None;
    for (a, b) in e.iter().zip(&se) {
        if !a.is_zero() {
            kappa = Some(b / a);
            break;
        }
    }
    let kappa = kappa.ok_or_else(|| Error::SpaceMismatch("zero eigenvector".into()))?;
    for (a, b) in e.iter().zip(&se) {
        if *b != a * &kappa {
            return Err(Error::SpaceMismatch("not an eigenvector of S*".into()));
        }
    }
    if kappa <= BigRational::one() {
        return Err(Error::NotExpanding);
    }
    let mut cache = OrbitCache::new(dyn_, start)?;
    let enorm: BigRational = e.iter().map(|x| x.abs()).sum();
    let drift = drift_constant(dyn_).map(|c| c * &enorm);
    let mut kpow = BigRational::one();
    let mut values: Vec<BigRational> = Vec::new();
    let mut rigor = Rigor::Heuristic;
    for m in 0..=opts.max_iter {
        let h = cache.get(m)?.height_vec();
        let mut val = BigRational::zero();
        for (c, hi) in e.iter().zip(&h) {
            val += c * hi;
        }
        values.push(val / &kpow);
        if m >= 2 && values[m] == values[m - 1] && values[m - 1] == values[m - 2] {
            rigor = Rigor::Exact;
            break;
        }
        if let Some(c) = &drift {
            let rad = c / &kpow / (&kappa - BigRational::one());
            if rad <= opts.tol {
                rigor = Rigor::Rigorous;
                break;
            }
        }
        kpow *= &kappa;
    }
    let m = values.len() - 1;
    let last_increment =
        if m == 0 { BigRational::zero() } else { (&values[m] - &values[m - 1]).abs() };
    let (radius, rigor) = match rigor {
        Rigor::Exact => (BigRational::zero(), Rigor::Exact),
        _ => match &drift {
            Some(c) => {
                let mut kp = BigRational::one();
                for _ in 0..m {
                    kp *= &kappa;
                }
                let rad = c / kp / (&kappa - BigRational::one());
                let rigor = if rad.is_zero() { Rigor::Exact } else { Rigor::Rigorous };
                (rad, rigor)
            }
            None => {
                let f = &kappa / (&kappa - BigRational::one());
                (&last_increment * f, Rigor::Heuristic)
            }
        },
    };
    Ok(HeightCertificate {
        value: vec![Enclosure::around(values[m].clone(), radius.clone())],
        iterations: m,
        last_increment,
        error_radius: radius,
        rigor,
    })
}

/// Vector canonical height; one enclosure per E+ basis vector.
pub fn canonical_height_vector(
    dyn_: &DynSystem,
    start: &DynState,
    opts: &TateOptions,
) -> Result<HeightCertificate> {
    let engine = CanonicalHeightEngine::new(dyn_, &opts.kappa_width)?;
    engine.vector_height(start, opts)
}

/// Base-change pullback: substitute t -> u(t) in every coefficient of the
/// dynamics. Heights then scale by deg(u).
pub fn basechange_pullback(dyn_: &DynSystem, u: &Poly) -> Result<DynSystem> {
    if u.degree() < 1 {
        return Err(Error::ConstantSubstitution);
    }
    Ok(match dyn_ {
        DynSystem::Morphism(m) => DynSystem::Morphism(m.substitute(u)?),
        DynSystem::Correspondence(c) => DynSystem::Correspondence(c.substitute(u)?),
    })
}

/// Empirical boundedness report over a seeded point sample: the maximum
/// over E+ basis vectors e of |h-hat(a)(e) - h_0(a, e)|, with the telescoped
/// drift bound when one is available.
#[derive(Debug, Clone)]
pub struct BoundednessReport {
    pub samples: usize,
    pub height_cap: u64,
    pub empirical_max: BigRational,
    pub drift_bound: Option<BigRational>,
}

pub fn boundedness_report(
    dyn_: &DynSystem,
    samples: usize,
    height_cap: u64,
    seed: u64,
    opts: &TateOptions,
) -> Result<BoundednessReport> {
    let engine = CanonicalHeightEngine::new(dyn_, &opts.kappa_width)?;
    let mut rng = crate::rng::SplitMix64::new(seed);
    let field = dyn_.field();
    let dims = dyn_.space();
    let mut empirical_max = BigRational::zero();
    for _ in 0..samples {
        let start = match dyn_ {
            DynSystem::Morphism(_) => {
                DynState::Point(crate::rng::random_point(&mut rng, field, &dims, height_cap))
            }
            DynSystem::Correspondence(_) => {
                let deg = 1 + rng.below(3) as usize;
                DynState::Cycle(crate::rng::random_cycle(&mut rng, field, deg, height_cap))
            }
        };
        let cert = engine.vector_height(&start, opts)?;
        let h = start.height_vec();
        for (j, enc) in cert.value.iter().enumerate() {
            // h_0(a, e_j) with e_j the j-th E+ basis vector
            let mut h0 = BigRational::zero();
            for (i, hi) in h.iter().enumerate() {
                h0 += &engine.split.eplus[j][i] * hi;
            }
            let gap = (enc.mid() - h0).abs() + enc.radius();
            if gap > empirical_max {
                empirical_max = gap;
            }
        }
    }
    // |h-hat - h_0| <= C * sum_{l>=1} |B s^l|_1, bounded by the engine's
    // geometric tail at m = 0
    let drift_bound = engine.rigorous_radius(&QMat::identity(engine.dim()));
    Ok(BoundednessReport { samples, height_cap, empirical_max, drift_bound })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::BaseField;
    use crate::dynparse::{load_dynamics, parse_point};

    fn opts_q() -> TateOptions {
        TateOptions::for_field(BaseField::Rationals)
    }

    fn point(text: &str, dims: &[usize]) -> DynState {
        DynState::Point(parse_point(text, BaseField::Rationals, dims).unwrap())
    }

    #[test]
    fn scalar_squaring_exact_one() {
        let dyn_ = load_dynamics("base: Q\nspace: P1\nout1: (x0^2, x1^2)\n").unwrap();
        let cert = canonical_height_scalar(
            &dyn_,
            &point("[t:1]", &[1]),
            &[BigRational::one()],
            &opts_q(),
        )
        .unwrap();
        assert_eq!(cert.rigor, Rigor::Exact);
        assert!(cert.iterations <= 5);
        assert_eq!(cert.value[0], Enclosure::exact(BigRational::one()));
    }

    #[test]
    fn scalar_square_plus_t_exact_one() {
        let dyn_ = load_dynamics("base: Q\nspace: P1\nout1: (x0^2 + t*x1^2, x1^2)\n").unwrap();
        let cert = canonical_height_scalar(
            &dyn_,
            &point("[t:1]", &[1]),
            &[BigRational::one()],
            &opts_q(),
        )
        .unwrap();
        assert_eq!(cert.rigor, Rigor::Exact);
        assert!(cert.iterations <= 5);
        assert_eq!(cert.value[0], Enclosure::exact(BigRational::one()));
    }

    #[test]
    fn scalar_cusp_correspondence() {
        let dyn_ = load_dynamics("base: Q\nspace: P1\ncorr: y1^2*x0^3 - y0^2*x1^3\n").unwrap();
        let cert = canonical_height_scalar(
            &dyn_,
            &point("[t:1]", &[1]),
            &[BigRational::one()],
            &TateOptions::for_field(BaseField::Rationals).with_max_iter(6),
        )
        .unwrap();
        assert_eq!(cert.rigor, Rigor::Exact);
        assert_eq!(cert.value[0], Enclosure::exact(BigRational::one()));
    }

    #[test]
    fn not_expanding_rejected() {
        // the transpose correspondence has S* = 1/2
        let dyn_ = load_dynamics("base: Q\nspace: P1\ncorr: x1*y0^2 - x0*y1^2\n").unwrap();
        let err = canonical_height_scalar(
            &dyn_,
            &point("[t:1]", &[1]),
            &[BigRational::one()],
            &opts_q(),
        );
        assert_eq!(err.unwrap_err(), Error::NotExpanding);
        // and the vector engine reports an empty E+
        assert_eq!(
            canonical_height_vector(&dyn_, &point("[t:1]", &[1]), &opts_q()).unwrap_err(),
            Error::EmptyEplus
        );
    }

    #[test]
    fn vector_product_map() {
        // (x^2, y) on P1 x P1: E+ = span(H1), E- = span(H2)
        let dyn_ =
            load_dynamics("base: Q\nspace: P1xP1\nout1: (x0^2, x1^2)\nout2: (y0, y1)\n").unwrap();
        let cert = canonical_height_vector(
            &dyn_,
            &point("[t:1],[t^5:1]", &[1, 1]),
            &opts_q(),
        )
        .unwrap();
        assert_eq!(cert.value.len(), 1);
        assert_eq!(cert.value[0], Enclosure::exact(BigRational::one()));
    }

    #[test]
    fn vector_fixed_point_zero() {
        let dyn_ =
            load_dynamics("base: Q\nspace: P1xP1\nout1: (y0^2, y1^2)\nout2: (x0^3, x1^3)\n")
                .unwrap();
        let cert = canonical_height_vector(&dyn_, &point("[0:1],[0:1]", &[1, 1]), &opts_q())
            .unwrap();
        assert_eq!(cert.rigor, Rigor::Exact);
        assert!(cert.all_enclose_zero());
        assert!(cert.value.iter().all(|e| e.lo.is_zero() && e.hi.is_zero()));
    }

    #[test]
    fn swap_functional_equation_exact() {
        let dyn_ =
            load_dynamics("base: Q\nspace: P1xP1\nout1: (y0^2, y1^2)\nout2: (x0^3, x1^3)\n")
                .unwrap();
        let engine = CanonicalHeightEngine::new(&dyn_, &opts_q().kappa_width).unwrap();
        let rep = engine
            .functional_equation(&point("[t:1],[1:1]", &[1, 1]), &opts_q())
            .unwrap();
        assert!(rep.ok);
        assert!(rep.max_residual.is_zero());
    }

    #[test]
    fn functional_equation_scalar_case() {
        let dyn_ = load_dynamics("base: Q\nspace: P1\nout1: (x0^2 + t*x1^2, x1^2)\n").unwrap();
        let engine = CanonicalHeightEngine::new(&dyn_, &opts_q().kappa_width).unwrap();
        let rep = engine.functional_equation(&point("[t:1]", &[1]), &opts_q()).unwrap();
        assert!(rep.ok);
        // |h-hat(f a) - 2 h-hat(a)| = 0 exactly
        assert!(rep.max_residual.is_zero());
    }

    #[test]
    fn basechange_scaling() {
        let dyn_ = load_dynamics("base: Q\nspace: P1\nout1: (x0^2 + t*x1^2, x1^2)\n").unwrap();
        let u = Poly::from_int_coeffs(BaseField::Rationals, &[0, 0, 1]); // t^2
        let pulled = basechange_pullback(&dyn_, &u).unwrap();
        let a = point("[t:1]", &[1]);
        let a_u = match &a {
            DynState::Point(p) => DynState::Point(p.substitute(&u).unwrap()),
            _ => unreachable!(),
        };
        let h1 = canonical_height_scalar(&dyn_, &a, &[BigRational::one()], &opts_q()).unwrap();
        let h2 =
            canonical_height_scalar(&pulled, &a_u, &[BigRational::one()], &opts_q()).unwrap();
        // h-hat_pullback(a o u) = deg(u) * h-hat(a), both exact here
        assert_eq!(
            h2.value[0].mid(),
            h1.value[0].mid() * BigRational::from_integer(2.into())
        );
    }

    #[test]
    fn monotone_radius() {
        let dyn_ = load_dynamics("base: Q\nspace: P1\nout1: (x0^2 + t*x1^2, x1^2)\n").unwrap();
        // a heuristic-free rigorous radius should shrink with the budget
        let a = point("[t + 1:t]", &[1]);
        let mut last: Option<BigRational> = None;
        for mi in [2usize, 4, 6, 8] {
            let cert = canonical_height_scalar(
                &dyn_,
                &a,
                &[BigRational::one()],
                &opts_q().with_max_iter(mi).with_tol(BigRational::new(1.into(), 10u64.pow(18).into())),
            )
            .unwrap();
            if let Some(prev) = last {
                assert!(cert.error_radius <= prev);
            }
            last = Some(cert.error_radius.clone());
        }
    }

    #[test]
    fn scalar_vector_coherence() {
        let dyn_ = load_dynamics("base: Q\nspace: P1\nout1: (x0^2 + t*x1^2, x1^2)\n").unwrap();
        let a = point("[t^2 + 1:t]", &[1]);
        let sc =
            canonical_height_scalar(&dyn_, &a, &[BigRational::one()], &opts_q()).unwrap();
        let vc = canonical_height_vector(&dyn_, &a, &opts_q()).unwrap();
        let gap = (sc.value[0].mid() - vc.value[0].mid()).abs();
        assert!(gap <= sc.value[0].radius() + vc.value[0].radius());
    }
}
