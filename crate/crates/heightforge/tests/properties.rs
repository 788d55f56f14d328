//! Cross-module invariants and randomized property tests.

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;

use heightforge::algebra::{poly_gcd, BaseField, BinaryForm, Poly, VarPair};
use heightforge::canheight::{canonical_height_vector, DynState, TateOptions};
use heightforge::correspondence::{drift_report, ZeroCycle};
use heightforge::dynparse::{
    load_dynamics, parse_cycle, parse_expr, parse_point, DynSystem, VarContext,
};
use heightforge::nslattice::{
    kronecker_classify, ns_action, power_boundedness_oracle, spectral_split, KroneckerVerdict,
};
use heightforge::projective::MorphismSpec;
use heightforge::rng::SplitMix64;

fn fp(p: u32) -> BaseField {
    BaseField::prime(p).unwrap()
}

fn poly(field: BaseField, coeffs: &[i64]) -> Poly {
    Poly::from_int_coeffs(field, coeffs)
}

// -- algebra invariants -------------------------------------------------------

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn gcd_divides_both(a in proptest::collection::vec(0u64..5, 0..12),
                        b in proptest::collection::vec(0u64..5, 0..12)) {
        let f = fp(5);
        let pa = poly(f, &a.iter().map(|&x| x as i64).collect::<Vec<_>>());
        let pb = poly(f, &b.iter().map(|&x| x as i64).collect::<Vec<_>>());
        let g = poly_gcd(&pa, &pb);
        if !g.is_zero() {
            prop_assert!(g.divides(&pa));
            prop_assert!(g.divides(&pb));
            prop_assert!(g.degree() <= pa.degree().max(pb.degree()));
        } else {
            prop_assert!(pa.is_zero() && pb.is_zero());
        }
    }

    #[test]
    fn gcd_scaling_up_to_unit(a in proptest::collection::vec(0u64..3, 1..8),
                              b in proptest::collection::vec(0u64..3, 1..8),
                              c in proptest::collection::vec(0u64..3, 1..5)) {
        let f = fp(3);
        let pa = poly(f, &a.iter().map(|&x| x as i64).collect::<Vec<_>>());
        let pb = poly(f, &b.iter().map(|&x| x as i64).collect::<Vec<_>>());
        let pc = poly(f, &c.iter().map(|&x| x as i64).collect::<Vec<_>>());
        prop_assume!(!pc.is_zero() && (!pa.is_zero() || !pb.is_zero()));
        let lhs = poly_gcd(&pa.mul(&pc), &pb.mul(&pc));
        let rhs = poly_gcd(&pa, &pb).mul(&pc).make_monic();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn substitute_is_ring_hom(a in proptest::collection::vec(-4i64..5, 0..8),
                              b in proptest::collection::vec(-4i64..5, 0..8),
                              u in proptest::collection::vec(-3i64..4, 2..5)) {
        let q = BaseField::Rationals;
        let pa = poly(q, &a);
        let pb = poly(q, &b);
        let pu = poly(q, &u);
        prop_assume!(pu.degree() >= 1);
        // commutes with + and *
        let s = |p: &Poly| p.substitute(&pu).unwrap();
        prop_assert_eq!(s(&pa.add(&pb)), s(&pa).add(&s(&pb)));
        prop_assert_eq!(s(&pa.mul(&pb)), s(&pa).mul(&s(&pb)));
        // degree scaling for nonzero polys
        if !pa.is_zero() {
            prop_assert_eq!(s(&pa).degree(), pa.degree() * pu.degree());
        }
    }

    #[test]
    fn resultant_degree_law(ga in proptest::collection::vec(-3i64..4, 1..4),
                            gb in proptest::collection::vec(-3i64..4, 1..4),
                            gc in proptest::collection::vec(-3i64..4, 1..4),
                            gd in proptest::collection::vec(-3i64..4, 1..4)) {
        // g = product of two random linear X-forms; f is the cusp form
        let q = BaseField::Rationals;
        let a0 = poly(q, &ga);
        let b0 = poly(q, &gb);
        let c0 = poly(q, &gc);
        let d0 = poly(q, &gd);
        prop_assume!((!a0.is_zero() || !b0.is_zero()) && (!c0.is_zero() || !d0.is_zero()));
        let g = BinaryForm::new(VarPair::X, 1, vec![a0, b0])
            .mul(&BinaryForm::new(VarPair::X, 1, vec![c0, d0]));
        let dyn_ = load_dynamics("base: Q\nspace: P1\ncorr: y1^2*x0^3 - y0^2*x1^3\n").unwrap();
        let s = match &dyn_ { DynSystem::Correspondence(s) => s, _ => unreachable!() };
        match heightforge::algebra::binary_resultant(&g, s.form()) {
            Ok(r) => prop_assert_eq!(r.form_degree(), g.form_degree() * s.form().deg_y()),
            Err(_) => {} // shared factor: allowed degenerate outcome
        }
    }

    #[test]
    fn parser_rejects_garbage_without_panup(s in "\\PC{0,40}") {
        // total parsing: errors only, no panics
        let _ = parse_expr(&s, &VarContext::for_correspondence(BaseField::Rationals));
        let _ = parse_point(&s, BaseField::Rationals, &[1]);
        let _ = parse_cycle(&s, BaseField::Rationals);
        let _ = load_dynamics(&s);
    }

    #[test]
    fn point_roundtrip_display_parse(a in proptest::collection::vec(-9i64..10, 1..4),
                                     b in proptest::collection::vec(-9i64..10, 1..4)) {
        let q = BaseField::Rationals;
        let pa = poly(q, &a);
        let pb = poly(q, &b);
        prop_assume!(!pa.is_zero() || !pb.is_zero());
        let point = heightforge::projective::MultiPoint::new(q, vec![vec![pa, pb]]).unwrap();
        let printed = point.to_string();
        let again = parse_point(&printed, q, &[1]).unwrap();
        prop_assert_eq!(point, again);
    }

    #[test]
    fn cycle_roundtrip_display_parse(c in proptest::collection::vec(0i64..3, 2..6)) {
        let f = fp(3);
        let coeffs: Vec<Poly> = c.iter().map(|&x| poly(f, &[x, 1])).collect();
        let deg = coeffs.len() - 1;
        let form = BinaryForm::new(VarPair::Y, deg, coeffs);
        prop_assume!(!form.is_zero());
        let cyc = ZeroCycle::new(form).unwrap();
        let printed = cyc.to_string();
        let again = parse_cycle(&printed, f).unwrap();
        prop_assert_eq!(cyc, again);
    }
}

// -- deterministic cross-module checks ---------------------------------------

const SWAP: &str = "base: Q\nspace: P1xP1\nout1: (y0^2, y1^2)\nout2: (x0^3, x1^3)\n";
const SQ_T: &str = "base: Q\nspace: P1\nout1: (x0^2 + t*x1^2, x1^2)\n";

fn morphism(text: &str) -> MorphismSpec {
    match load_dynamics(text).unwrap() {
        DynSystem::Morphism(m) => m,
        _ => panic!("expected morphism"),
    }
}

#[test]
fn dyn_system_display_roundtrip() {
    for text in [
        SWAP,
        SQ_T,
        "base: F3\nspace: P1\nout1: (2*x0^2 + t^3*x1^2, x0*x1)\n",
        "base: Q\nspace: P1\ncorr: y1^2*x0^3 - y0^2*x1^3\n",
        "base: F5\nspace: P1\ncorr: y1*x0^2 + 4*y0*x1^2 + t*y0*x0*x1\n",
    ] {
        let dyn_ = load_dynamics(text).unwrap();
        let printed = match &dyn_ {
            DynSystem::Morphism(m) => m.to_string(),
            DynSystem::Correspondence(c) => c.to_string(),
        };
        let again = load_dynamics(&printed).unwrap();
        assert_eq!(dyn_, again, "round-trip failed:\n{}", printed);
    }
}

#[test]
fn compose_coherence_with_ns_action() {
    // ns_action(compose(psi, phi)).St = M_phi * M_psi
    let swap = morphism(SWAP);
    let other = morphism("base: Q\nspace: P1xP1\nout1: (x0^2, x1^2)\nout2: (y0, y1)\n");
    let comp = other.compose(&swap).unwrap();
    let lhs = ns_action(&DynSystem::Morphism(comp.clone())).st;
    let a = ns_action(&DynSystem::Morphism(swap.clone())).st;
    let b = ns_action(&DynSystem::Morphism(other.clone())).st;
    let mut prod = vec![vec![0i64; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            for k in 0..2 {
                prod[i][j] += a[i][k] * b[k][j];
            }
        }
    }
    assert_eq!(lhs, prod);
    // and apply-composition coherence on a sample of points
    let mut rng = SplitMix64::new(5);
    for _ in 0..20 {
        let p = heightforge::rng::random_point(&mut rng, BaseField::Rationals, &[1, 1], 2);
        let direct = other.apply(&swap.apply(&p).unwrap()).unwrap();
        let via = comp.apply(&p).unwrap();
        assert_eq!(direct, via);
    }
}

#[test]
fn height_transform_bounds_for_blocks() {
    // for every output factor j reading factor r with degree d:
    // d*h_r - deg_t Res <= h_j(phi(a)) <= d*h_r + max coeff deg
    let m = morphism(SQ_T);
    let blocks = m.blocks().unwrap();
    let mut rng = SplitMix64::new(9);
    for _ in 0..100 {
        let a = heightforge::rng::random_point(&mut rng, BaseField::Rationals, &[1], 4);
        let Ok(fa) = m.apply(&a) else { continue };
        let h = a.height();
        let hf = fa.height();
        for (j, blk) in blocks.iter().enumerate() {
            let d = m.multidegree()[blk.reads][j];
            let expect = d * h.per_factor()[blk.reads];
            let coeff = blk.a.deg_t().max(blk.b.deg_t()).max(0) as u64;
            let res = blk.resultant.degree().max(0) as u64;
            let got = hf.per_factor()[j];
            assert!(got <= expect + coeff, "upper bound failed at {}", a);
            assert!(got + res >= expect, "lower bound failed at {}", a);
        }
    }
}

#[test]
fn lemma_expanding_part_nonzero_for_catalog() {
    // block morphisms with topological degree > 1 have dim E+ >= 1
    let catalog = [
        SQ_T,
        SWAP,
        "base: Q\nspace: P1\nout1: (x0^2, x1^2)\n",
        "base: Q\nspace: P1xP1\nout1: (x0^2, x1^2)\nout2: (y0^3, y1^3)\n",
        "base: F3\nspace: P1xP1\nout1: (y0^2, y1^2)\nout2: (x0^3, x1^3)\n",
    ];
    for text in catalog {
        let m = morphism(text);
        let topdeg: u64 = (0..m.space().len())
            .map(|j| (0..m.space().len()).map(|i| m.multidegree()[i][j]).sum::<u64>())
            .product();
        assert!(topdeg > 1);
        let action = ns_action(&DynSystem::Morphism(m));
        let split =
            spectral_split(&action, &heightforge::nslattice::default_kappa_width()).unwrap();
        assert!(split.dim_eplus() >= 1, "E+ empty for {}", text.trim());
    }
}

#[test]
fn kronecker_matches_power_oracle_on_seeded_matrices() {
    let mut rng = SplitMix64::new(2024);
    for n in [2usize, 3, 4] {
        for _ in 0..10 {
            let m: Vec<Vec<i64>> =
                (0..n).map(|_| (0..n).map(|_| rng.int_in(-1, 1)).collect()).collect();
            let verdict = kronecker_classify(&m).verdict == KroneckerVerdict::AllTorsionOrNilpotent;
            let bounded = power_boundedness_oracle(&m, 200);
            // the oracle bound is loose for unipotent blocks; skip the
            // (rare) non-semisimple torsion cases it cannot attest
            let kr = kronecker_classify(&m);
            let unipotent_risk = kr.cyclotomic_factors.iter().any(|(_, mult)| *mult > 1);
            if !unipotent_risk {
                assert_eq!(verdict, bounded, "disagree on {:?}", m);
            }
        }
    }
}

#[test]
fn graph_correspondence_matches_morphism_on_samples() {
    let dyn_ = load_dynamics("base: Q\nspace: P1\ncorr: x1^2*y0 - x0^2*y1\n").unwrap();
    let s = match &dyn_ {
        DynSystem::Correspondence(s) => s,
        _ => unreachable!(),
    };
    let m = morphism("base: Q\nspace: P1\nout1: (x0^2, x1^2)\n");
    let mut rng = SplitMix64::new(77);
    for _ in 0..50 {
        let p = heightforge::rng::random_point(&mut rng, BaseField::Rationals, &[1], 3);
        let via_corr = s.pushforward(&ZeroCycle::from_point(&p).unwrap()).unwrap().0;
        let via_map = ZeroCycle::from_point(&m.apply(&p).unwrap()).unwrap();
        assert_eq!(via_corr, via_map);
    }
}

#[test]
fn correspondence_drift_bounded_and_stable() {
    let dyn_ = load_dynamics("base: Q\nspace: P1\ncorr: y1^2*x0^3 - y0^2*x1^3\n").unwrap();
    let s = match &dyn_ {
        DynSystem::Correspondence(s) => s,
        _ => unreachable!(),
    };
    let r1 = drift_report(s, 200, 3, 4, 42).unwrap();
    let r2 = drift_report(s, 200, 3, 8, 42).unwrap();
    // the empirical drift must not grow with the sample height
    assert!(r2.empirical_max <= r1.empirical_max.clone().max(r1.a_priori_bound.clone()));
    assert!(r1.empirical_max <= r1.a_priori_bound);
}

#[test]
fn preperiodic_points_have_zero_height_vector() {
    let dyn_ = load_dynamics(SWAP).unwrap();
    let opts = TateOptions::for_field(BaseField::Rationals);
    for text in ["[0:1],[0:1]", "[1:0],[1:0]", "[0:1],[1:0]", "[1:1],[1:1]"] {
        let p = parse_point(text, BaseField::Rationals, &[1, 1]).unwrap();
        let cert = canonical_height_vector(&dyn_, &DynState::Point(p), &opts).unwrap();
        assert!(cert.all_enclose_zero(), "nonzero at {}", text);
    }
}

#[test]
fn series_candidate_holds_on_catalog() {
    use heightforge::series::{candidate_check, d_sequence};
    for (text, point, terms) in [
        (SQ_T, "[t:1]", 10usize),
        (SWAP, "[t:1],[1:1]", 8),
        ("base: Q\nspace: P1\nout1: (x0^2, x1^2)\n", "[t^2 + 1:t]", 10),
    ] {
        let dyn_ = load_dynamics(text).unwrap();
        let rank = ns_action(&dyn_).rank();
        let e: Vec<BigRational> = (0..rank).map(|_| BigRational::one()).collect();
        let a = DynState::Point(parse_point(point, BaseField::Rationals, &dyn_.space()).unwrap());
        let seq = d_sequence(&dyn_, &a, &e, terms).unwrap();
        let rep = candidate_check(&seq, &dyn_);
        assert!(rep.holds, "candidate recurrence violated for {} at {:?}", text.trim(), rep.first_violation);
    }
}

#[test]
fn scalar_engine_rejects_contracting_multiplier() {
    let dyn_ = load_dynamics("base: Q\nspace: P1\ncorr: x1*y0^2 - x0*y1^2\n").unwrap();
    let p = parse_point("[t:1]", BaseField::Rationals, &[1]).unwrap();
    let err = heightforge::canheight::canonical_height_scalar(
        &dyn_,
        &DynState::Point(p),
        &[BigRational::one()],
        &TateOptions::for_field(BaseField::Rationals),
    );
    assert!(matches!(err, Err(heightforge::Error::NotExpanding)));
}

#[test]
fn enumeration_is_complete_and_duplicate_free_small_fields() {
    use heightforge::northcott::enumerate_points;
    use std::collections::HashSet;
    for p in [2u32, 3, 5] {
        for b in [0u64, 1] {
            let field = fp(p);
            let pts = enumerate_points(field, &[1], &[b], 1_000_000).unwrap();
            let set: HashSet<_> = pts.iter().cloned().collect();
            assert_eq!(set.len(), pts.len(), "duplicates for p={} b={}", p, b);
            // cardinality of P1 over the polynomial coefficients ring
            // truncated at degree b: q^(2m) - 1 ... counted via the
            // independent pair filter
            let m = (b + 1) as u32;
            let q = p as u64;
            let raw = q.pow(2 * m);
            let mut coprime = 0u64;
            for code in 0..raw {
                let mut digits = Vec::new();
                let mut c = code;
                for _ in 0..2 * m {
                    digits.push((c % q) as i64);
                    c /= q;
                }
                let a = Poly::from_int_coeffs(field, &digits[..m as usize]);
                let bb = Poly::from_int_coeffs(field, &digits[m as usize..]);
                if a.is_zero() && bb.is_zero() {
                    continue;
                }
                if a.gcd(&bb).degree() <= 0 {
                    coprime += 1;
                }
            }
            assert_eq!(pts.len() as u64, coprime / (q - 1));
        }
    }
}

#[test]
fn rescaling_leaves_projective_class_fixed() {
    // apply(phi, lambda * a) = apply(phi, a) for units lambda of k(t)
    let m = morphism(SQ_T);
    let a = parse_point("[t^2 + 1 : t]", BaseField::Rationals, &[1]).unwrap();
    let b = parse_point("[(t^2 + 1)*(t + 3) : t*(t + 3)]", BaseField::Rationals, &[1]).unwrap();
    let c = parse_point("[(t^2 + 1)/7 : t/7]", BaseField::Rationals, &[1]).unwrap();
    assert_eq!(a, b);
    assert_eq!(a, c);
    assert_eq!(m.apply(&a).unwrap(), m.apply(&b).unwrap());
}
