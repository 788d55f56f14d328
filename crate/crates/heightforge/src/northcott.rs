//! Bounded-height enumeration over F_p(t), orbit classification, and the
//! desk-scale Northcott verification: the canonical-height-zero locus must
//! coincide with the preperiodic locus, and bounded sets admit a finite
//! chain bound.

use std::collections::HashMap;

use num_rational::BigRational;
use rayon::prelude::*;

use crate::algebra::{BaseField, Poly, Scalar};
use crate::canheight::{CanonicalHeightEngine, DynState, HeightCertificate, TateOptions};
use crate::dynparse::DynSystem;
use crate::error::{Error, Result};
use crate::nslattice::{kronecker_classify, ns_action, KroneckerVerdict};
use crate::projective::{MorphismSpec, MultiPoint};

/// Default ceiling on the number of enumerated points.
pub const DEFAULT_ENUMERATION_LIMIT: u64 = 1_000_000;

/// Enumerate every point of the product space over F_p(t) with per-factor
/// height at most `caps[i]`, each exactly once.
///
/// Canonical order: factors vary outermost-first; within a factor,
/// candidate coordinate tuples are scanned in lexicographic order of the
/// concatenated coefficient vectors (coordinate 0 outermost, each
/// coordinate's coefficients from t^0 up), keeping exactly the tuples in
/// canonical form: some coordinate nonzero, coordinates coprime, and the
/// highest-index nonzero coordinate monic.
pub fn enumerate_points(
    field: BaseField,
    dims: &[usize],
    caps: &[u64],
    limit: u64,
) -> Result<Vec<MultiPoint>> {
    let p = match field {
        BaseField::PrimeField(p) => p as u64,
        BaseField::Rationals => return Err(Error::RationalsNotEnumerable),
    };
    assert_eq!(dims.len(), caps.len());
    // resource estimate: points per factor ~ p^((B+1)(n+1)) / (p - 1)
    let mut est: u128 = 1;
    for (n, b) in dims.iter().zip(caps) {
        let raw = (p as u128).checked_pow(((b + 1) as u32) * ((*n as u32) + 1));
        let raw = raw.ok_or(Error::EnumerationTooLarge(u128::MAX, limit))?;
        est = est
            .checked_mul(raw / (p as u128 - 1).max(1))
            .ok_or(Error::EnumerationTooLarge(u128::MAX, limit))?;
    }
    if est > limit as u128 {
        return Err(Error::EnumerationTooLarge(est, limit));
    }

    let mut per_factor: Vec<Vec<Vec<Poly>>> = Vec::new();
    for (n, b) in dims.iter().zip(caps) {
        per_factor.push(enumerate_factor(field, p, *n, *b));
    }
    let mut out = Vec::new();
    let mut idx = vec![0usize; dims.len()];
    'outer: loop {
        let factors: Vec<Vec<Poly>> =
            idx.iter().enumerate().map(|(i, &j)| per_factor[i][j].clone()).collect();
        out.push(
            MultiPoint::new(field, factors).expect("enumerated tuples are canonical"),
        );
        if out.len() as u64 > limit {
            return Err(Error::EnumerationTooLarge(out.len() as u128, limit));
        }
        // odometer over factors, last factor fastest
        for i in (0..dims.len()).rev() {
            idx[i] += 1;
            if idx[i] < per_factor[i].len() {
                continue 'outer;
            }
            idx[i] = 0;
        }
        break;
    }
    Ok(out)
}

fn enumerate_factor(field: BaseField, p: u64, n: usize, b: u64) -> Vec<Vec<Poly>> {
    let ncoords = n + 1;
    let ncoeffs = (b + 1) as usize;
    let total = ncoords * ncoeffs;
    let mut out = Vec::new();
    let mut digits = vec![0u64; total];
    'outer: loop {
        // coordinate j reads digits[j*ncoeffs .. (j+1)*ncoeffs], low-to-high
        let coords: Vec<Poly> = (0..ncoords)
            .map(|j| {
                let scalars: Vec<Scalar> = (0..ncoeffs)
                    .map(|k| Scalar::Mod { p: p as u32, val: digits[j * ncoeffs + k] })
                    .collect();
                Poly::from_scalars(field, scalars)
            })
            .collect();
        if is_canonical_tuple(field, &coords) {
            out.push(coords);
        }
        // odometer, last digit fastest
        for i in (0..total).rev() {
            digits[i] += 1;
            if digits[i] < p {
                continue 'outer;
            }
            digits[i] = 0;
        }
        break;
    }
    out
}

fn is_canonical_tuple(field: BaseField, coords: &[Poly]) -> bool {
    if coords.iter().all(|c| c.is_zero()) {
        return false;
    }
    // highest-index nonzero coordinate must be monic
    let last = coords.iter().rev().find(|c| !c.is_zero()).unwrap();
    if last.leading_coeff() != Scalar::one(field) {
        return false;
    }
    let mut g = Poly::zero(field);
    for c in coords {
        g = g.gcd(c);
    }
    g.degree() == 0
}

/// Outcome of a single-orbit analysis.
#[derive(Debug, Clone, PartialEq)]
pub enum OrbitVerdict {
    Preperiodic { tail: usize, cycle: usize },
    UnboundedCertified { hhat_lower: BigRational },
    Unknown { steps_run: usize, max_height_seen: u64 },
}

impl OrbitVerdict {
    pub fn is_preperiodic(&self) -> bool {
        matches!(self, OrbitVerdict::Preperiodic { .. })
    }
}

#[derive(Debug, Clone)]
pub struct OrbitOptions {
    pub max_steps: usize,
    pub height_cap: u64,
}

impl Default for OrbitOptions {
    fn default() -> Self {
        OrbitOptions { max_steps: 256, height_cap: 4096 }
    }
}

/// Classify an orbit: exact revisit proves preperiodicity; a strictly
/// positive canonical-height coordinate certifies an unbounded orbit;
/// anything else stays Unknown.
pub fn orbit_analyze(
    morphism: &MorphismSpec,
    engine: Option<&CanonicalHeightEngine>,
    a: &MultiPoint,
    orbit_opts: &OrbitOptions,
    tate_opts: &TateOptions,
) -> Result<OrbitVerdict> {
    let mut seen: HashMap<MultiPoint, usize> = HashMap::new();
    let mut cur = a.clone();
    let mut max_height = cur.height().total();
    for step in 0..=orbit_opts.max_steps {
        if let Some(&first) = seen.get(&cur) {
            return Ok(OrbitVerdict::Preperiodic { tail: first, cycle: step - first });
        }
        seen.insert(cur.clone(), step);
        if cur.height().total() > orbit_opts.height_cap {
            break;
        }
        cur = morphism.apply(&cur)?;
        max_height = max_height.max(cur.height().total());
    }
    if let Some(engine) = engine {
        let cert = engine.vector_height(&DynState::Point(a.clone()), tate_opts)?;
        if cert.any_strictly_positive() {
            let lower = cert
                .value
                .iter()
                .filter(|e| e.strictly_positive())
                .map(|e| e.lo.clone())
                .max()
                .unwrap();
            return Ok(OrbitVerdict::UnboundedCertified { hhat_lower: lower });
        }
    }
    Ok(OrbitVerdict::Unknown { steps_run: orbit_opts.max_steps, max_height_seen: max_height })
}

/// Exact chain bound for Y = {h <= caps}: the least n such that no
/// enumerated non-preperiodic point keeps its first n iterates inside Y.
#[derive(Debug, Clone)]
pub struct ChainBound {
    pub caps: Vec<u64>,
    pub n: usize,
    pub witnesses: Vec<MultiPoint>,
}

#[derive(Debug, Clone)]
pub struct NorthcottReport {
    pub total_points: usize,
    pub preperiodic: usize,
    pub unbounded: usize,
    pub unknown: usize,
    /// Pointwise agreement of {h-hat encloses 0} with {preperiodic}.
    pub biconditional_ok: bool,
    pub counterexamples: Vec<MultiPoint>,
    pub chain: ChainBound,
}

/// Classify every point of height <= caps, check the height-zero locus
/// against the preperiodic locus, and compute the exact chain bound.
pub fn northcott_verify(
    dyn_: &DynSystem,
    caps: &[u64],
    limit: u64,
    orbit_opts: &OrbitOptions,
    tate_opts: &TateOptions,
) -> Result<NorthcottReport> {
    let morphism = match dyn_ {
        DynSystem::Morphism(m) => m,
        DynSystem::Correspondence(_) => {
            return Err(Error::MixedBlockUnsupported(
                "northcott verification runs on morphisms".into(),
            ))
        }
    };
    let field = morphism.field();
    // hypothesis: no power of the pullback fixes a non-torsion class, i.e.
    // no cyclotomic factor in the integral action
    let action = ns_action(dyn_);
    let kr = kronecker_classify(&action.st);
    if !kr.cyclotomic_factors.is_empty() || kr.verdict == KroneckerVerdict::AllTorsionOrNilpotent
    {
        return Err(Error::HypothesisFailed(format!(
            "cyclotomic factors {:?} in the characteristic polynomial of S^t",
            kr.cyclotomic_factors
        )));
    }
    let engine = CanonicalHeightEngine::new(dyn_, &tate_opts.kappa_width)?;
    let points = enumerate_points(field, morphism.space(), caps, limit)?;

    // any orbit that stays inside the enumerated set must revisit within
    // |Y| steps, so give the cycle detector at least that budget
    let orbit_opts = OrbitOptions {
        max_steps: orbit_opts.max_steps.max(points.len() + 1),
        height_cap: orbit_opts.height_cap,
    };
    let orbit_opts = &orbit_opts;

    let rows: Vec<(OrbitVerdict, HeightCertificate)> = points
        .par_iter()
        .map(|a| {
            let verdict = orbit_analyze(morphism, Some(&engine), a, orbit_opts, tate_opts)
                .expect("enumerated points stay in the certified locus");
            let cert = engine
                .vector_height(&DynState::Point(a.clone()), tate_opts)
                .expect("height certificate");
            (verdict, cert)
        })
        .collect();

    let mut preperiodic = 0usize;
    let mut unbounded = 0usize;
    let mut unknown = 0usize;
    let mut counterexamples = Vec::new();
    for ((verdict, cert), point) in rows.iter().zip(&points) {
        match verdict {
            OrbitVerdict::Preperiodic { .. } => preperiodic += 1,
            OrbitVerdict::UnboundedCertified { .. } => unbounded += 1,
            OrbitVerdict::Unknown { .. } => unknown += 1,
        }
        let zero_side = cert.all_enclose_zero() && !cert.any_strictly_positive();
        let pre_side = verdict.is_preperiodic();
        if zero_side != pre_side {
            counterexamples.push(point.clone());
        }
    }
    let biconditional_ok = counterexamples.is_empty() && unknown == 0;

    // chain bound over non-preperiodic points
    let chain_lengths: Vec<Option<usize>> = rows
        .par_iter()
        .zip(&points)
        .map(|((verdict, _), a)| {
            if verdict.is_preperiodic() {
                return None;
            }
            let mut len = 0usize;
            let mut cur = a.clone();
            loop {
                let next = morphism.apply(&cur).expect("certified morphism");
                if inside_caps(&next, caps) {
                    len += 1;
                    cur = next;
                    assert!(
                        len <= points.len() + 1,
                        "non-preperiodic orbit cannot stay inside a finite set"
                    );
                } else {
                    break;
                }
            }
            Some(len)
        })
        .collect();
    let max_len = chain_lengths.iter().flatten().max().copied();
    let n = match max_len {
        Some(l) => l + 1,
        None => 0,
    };
    let witnesses: Vec<MultiPoint> = chain_lengths
        .iter()
        .zip(&points)
        .filter(|(l, _)| **l == max_len && max_len.is_some())
        .map(|(_, p)| p.clone())
        .take(3)
        .collect();

    Ok(NorthcottReport {
        total_points: points.len(),
        preperiodic,
        unbounded,
        unknown,
        biconditional_ok,
        counterexamples,
        chain: ChainBound { caps: caps.to_vec(), n, witnesses },
    })
}

fn inside_caps(p: &MultiPoint, caps: &[u64]) -> bool {
    p.height().per_factor().iter().zip(caps).all(|(h, c)| h <= c)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynparse::{load_dynamics, parse_point};

    fn f2() -> BaseField {
        BaseField::prime(2).unwrap()
    }

    #[test]
    fn enumerate_constants() {
        // P1(F2(t)), B = 0: exactly the 3 points of P1(F2)
        let pts = enumerate_points(f2(), &[1], &[0], 1000).unwrap();
        assert_eq!(pts.len(), 3);
    }

    #[test]
    fn enumerate_matches_generate_and_filter() {
        // independent oracle: all coprime pairs (not just canonical),
        // divided by the number of unit scalars
        for (p, b) in [(2u32, 1u64), (2, 2), (3, 1), (5, 1)] {
            let field = BaseField::prime(p).unwrap();
            let pts = enumerate_points(field, &[1], &[b], 1_000_000).unwrap();
            let ncoeffs = (b + 1) as usize;
            let total = (p as u64).pow(2 * ncoeffs as u32);
            let mut coprime = 0u64;
            for code in 0..total {
                let mut digits = Vec::with_capacity(2 * ncoeffs);
                let mut c = code;
                for _ in 0..2 * ncoeffs {
                    digits.push((c % p as u64) as i64);
                    c /= p as u64;
                }
                let a = Poly::from_int_coeffs(field, &digits[..ncoeffs]);
                let bpol = Poly::from_int_coeffs(field, &digits[ncoeffs..]);
                if a.is_zero() && bpol.is_zero() {
                    continue;
                }
                if a.gcd(&bpol).degree() <= 0 {
                    coprime += 1;
                }
            }
            assert_eq!(
                pts.len() as u64,
                coprime / (p as u64 - 1),
                "count mismatch for p={} b={}",
                p,
                b
            );
            // no duplicates: canonical representation makes Eq meaningful
            let set: std::collections::HashSet<_> = pts.iter().cloned().collect();
            assert_eq!(set.len(), pts.len());
        }
    }

    #[test]
    fn rationals_not_enumerable() {
        assert!(matches!(
            enumerate_points(BaseField::Rationals, &[1], &[1], 100),
            Err(Error::RationalsNotEnumerable)
        ));
    }

    #[test]
    fn enumeration_too_large() {
        assert!(matches!(
            enumerate_points(BaseField::prime(5).unwrap(), &[1], &[20], 1000),
            Err(Error::EnumerationTooLarge(..))
        ));
    }

    fn sq_t_f2() -> DynSystem {
        load_dynamics("base: F2\nspace: P1\nout1: (x0^2 + t*x1^2, x1^2)\n").unwrap()
    }

    #[test]
    fn orbit_infinity_fixed() {
        let dyn_ = sq_t_f2();
        let m = match &dyn_ {
            DynSystem::Morphism(m) => m,
            _ => unreachable!(),
        };
        let engine = CanonicalHeightEngine::new(&dyn_, &TateOptions::for_field(f2()).kappa_width)
            .unwrap();
        let inf = parse_point("[1:0]", f2(), &[1]).unwrap();
        let v = orbit_analyze(
            m,
            Some(&engine),
            &inf,
            &OrbitOptions::default(),
            &TateOptions::for_field(f2()),
        )
        .unwrap();
        assert_eq!(v, OrbitVerdict::Preperiodic { tail: 0, cycle: 1 });
    }

    #[test]
    fn orbit_t_unbounded() {
        let dyn_ = sq_t_f2();
        let m = match &dyn_ {
            DynSystem::Morphism(m) => m,
            _ => unreachable!(),
        };
        let engine = CanonicalHeightEngine::new(&dyn_, &TateOptions::for_field(f2()).kappa_width)
            .unwrap();
        let a = parse_point("[t:1]", f2(), &[1]).unwrap();
        let v = orbit_analyze(
            m,
            Some(&engine),
            &a,
            &OrbitOptions::default(),
            &TateOptions::for_field(f2()),
        )
        .unwrap();
        match v {
            OrbitVerdict::UnboundedCertified { hhat_lower } => {
                assert!(hhat_lower > BigRational::new(1.into(), 2.into()));
            }
            other => panic!("expected certified unbounded, got {:?}", other),
        }
    }

    #[test]
    fn orbit_finite_field_cycle() {
        // x^2 over F3: 2 -> 4 = 1 -> 1
        let dyn_ = load_dynamics("base: F3\nspace: P1\nout1: (x0^2, x1^2)\n").unwrap();
        let m = match &dyn_ {
            DynSystem::Morphism(m) => m,
            _ => unreachable!(),
        };
        let f3 = BaseField::prime(3).unwrap();
        let a = parse_point("[2:1]", f3, &[1]).unwrap();
        let v = orbit_analyze(
            m,
            None,
            &a,
            &OrbitOptions::default(),
            &TateOptions::for_field(f3),
        )
        .unwrap();
        assert_eq!(v, OrbitVerdict::Preperiodic { tail: 1, cycle: 1 });
    }

    #[test]
    fn northcott_square_plus_t() {
        let dyn_ = sq_t_f2();
        let rep = northcott_verify(
            &dyn_,
            &[2],
            1_000_000,
            &OrbitOptions::default(),
            &TateOptions::for_field(f2()),
        )
        .unwrap();
        assert!(rep.biconditional_ok, "counterexamples: {:?}", rep.counterexamples);
        assert!(rep.chain.n >= 1);
        assert_eq!(rep.total_points, rep.preperiodic + rep.unbounded + rep.unknown);
        assert_eq!(rep.unknown, 0);
    }

    #[test]
    fn northcott_isotrivial_square() {
        // x^2 over F2: h-hat = 0 exactly on the constants, which are
        // preperiodic
        let dyn_ = load_dynamics("base: F2\nspace: P1\nout1: (x0^2, x1^2)\n").unwrap();
        let rep = northcott_verify(
            &dyn_,
            &[1],
            1_000_000,
            &OrbitOptions::default(),
            &TateOptions::for_field(f2()),
        )
        .unwrap();
        assert!(rep.biconditional_ok);
        assert_eq!(rep.preperiodic, 3);
    }

    #[test]
    fn hypothesis_failure_detected() {
        // (x^2, y): the second factor class is fixed, Phi_1 divides
        let dyn_ =
            load_dynamics("base: F2\nspace: P1xP1\nout1: (x0^2, x1^2)\nout2: (y0, y1)\n")
                .unwrap();
        let err = northcott_verify(
            &dyn_,
            &[1, 1],
            1_000_000,
            &OrbitOptions::default(),
            &TateOptions::for_field(f2()),
        );
        assert!(matches!(err, Err(Error::HypothesisFailed(_))));
    }

    #[test]
    fn chain_bound_monotone() {
        let dyn_ = sq_t_f2();
        let mut last = 0usize;
        for b in [0u64, 1, 2] {
            let rep = northcott_verify(
                &dyn_,
                &[b],
                1_000_000,
                &OrbitOptions::default(),
                &TateOptions::for_field(f2()),
            )
            .unwrap();
            assert!(rep.chain.n >= last, "chain bound must not shrink");
            last = rep.chain.n;
        }
    }
}
