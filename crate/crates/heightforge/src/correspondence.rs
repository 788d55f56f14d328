//! Correspondences on P1 over k(t) and the exact pushforward on effective
//! 0-cycles represented as primitive binary forms.

use std::fmt;

use num_rational::BigRational;
use num_traits::Signed;

use crate::algebra::{
    binary_resultant, forms_have_common_factor, BaseField, BiForm, BinaryForm, Poly, VarPair,
};
use crate::error::{Error, Result};
use crate::projective::{MultiPoint, MAX_COORD_DEGREE};

/// A correspondence S in P1 x P1 cut out by a primitive bihomogeneous form
/// F(x0, x1; y0, y1). The first projection has degree d = deg_Y F, the
/// second degree d' = deg_X F.
#[derive(Debug, Clone, PartialEq)]
pub struct Correspondence {
    form: BiForm,
}

impl Correspondence {
    pub fn new(form: BiForm) -> Result<Self> {
        if form.is_zero() {
            return Err(Error::ZeroForm);
        }
        let (prim, _) = form.primitive_part()?;
        if prim.deg_x() < 1 || prim.deg_y() < 1 {
            return Err(Error::MixedBlockUnsupported(
                "correspondence form must involve both the x-pair and the y-pair".into(),
            ));
        }
        // no irreducible factor free of the y-pair: such a factor divides
        // every y-coefficient, read as X-forms
        let y_slices: Vec<BinaryForm> =
            (0..=prim.deg_y()).map(|j| prim.y_coeff(j)).collect();
        let refs: Vec<&BinaryForm> = y_slices.iter().collect();
        if forms_have_common_factor(&refs) {
            return Err(Error::MixedBlockUnsupported(
                "correspondence form has a factor free of the y-pair".into(),
            ));
        }
        // and symmetrically for the x-pair
        let x_slices: Vec<BinaryForm> =
            (0..=prim.deg_x()).map(|e| prim.x_coeff(e).clone()).collect();
        let refs: Vec<&BinaryForm> = x_slices.iter().collect();
        if forms_have_common_factor(&refs) {
            return Err(Error::MixedBlockUnsupported(
                "correspondence form has a factor free of the x-pair".into(),
            ));
        }
        Ok(Correspondence { form: prim })
    }

    /// Graph of the P1 map x -> (a(x) : b(x)): the form b(X) y0 - a(X) y1.
    pub fn graph(a: &BinaryForm, b: &BinaryForm) -> Result<Self> {
        assert_eq!(a.form_degree(), b.form_degree());
        let d = a.form_degree();
        let x_coeffs: Vec<BinaryForm> = (0..=d)
            .map(|e| {
                BinaryForm::new(
                    VarPair::Y,
                    1,
                    vec![a.coeff(e).neg(), b.coeff(e).clone()],
                )
            })
            .collect();
        Correspondence::new(BiForm::new(d, 1, x_coeffs))
    }

    pub fn form(&self) -> &BiForm {
        &self.form
    }

    pub fn field(&self) -> BaseField {
        self.form.field()
    }

    /// Backward degree d = deg(p), the first projection.
    pub fn d(&self) -> usize {
        self.form.deg_y()
    }

    /// Forward degree d' = deg(q), the second projection.
    pub fn d_prime(&self) -> usize {
        self.form.deg_x()
    }

    /// The action of S* on NS(P1) (x) R: the scalar d'/d.
    pub fn multiplier(&self) -> BigRational {
        BigRational::new((self.d_prime() as i64).into(), (self.d() as i64).into())
    }

    pub fn deg_t(&self) -> isize {
        self.form.deg_t()
    }

    /// S_*(c) = q_* p^*(c): resultant against the cycle, then primitive
    /// part. Returns the new cycle and the removed k[t] content.
    pub fn pushforward(&self, c: &ZeroCycle) -> Result<(ZeroCycle, Poly)> {
        // the cycle lives on the source copy of P1: relabel to the x-pair
        let g = BinaryForm::new(VarPair::X, c.form.form_degree(), c.form.coeffs().to_vec());
        let raw = binary_resultant(&g, &self.form)?;
        debug_assert_eq!(
            raw.form_degree(),
            self.d() * c.cycle_degree(),
            "degree law d * deg(c) violated"
        );
        if raw.deg_t() > MAX_COORD_DEGREE {
            return Err(Error::ResourceLimit(format!(
                "cycle form t-degree {} exceeds {}",
                raw.deg_t(),
                MAX_COORD_DEGREE
            )));
        }
        let (prim, content) = raw.primitive_part()?;
        Ok((ZeroCycle { form: prim }, content))
    }

    /// Base substitution t -> u(t).
    pub fn substitute(&self, u: &Poly) -> Result<Correspondence> {
        Correspondence::new(self.form.substitute(u)?)
    }
}

impl fmt::Display for Correspondence {
    /// Dyn-file form, re-readable by `load_dynamics`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "base: {}", self.field())?;
        writeln!(f, "space: P1")?;
        writeln!(f, "map: correspondence")?;
        writeln!(f, "corr: {}", self.form)
    }
}

/// An effective Galois-stable 0-cycle on P1 over k(t)^alg: a primitive
/// binary form in (y0, y1) whose roots are the points of the cycle.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ZeroCycle {
    form: BinaryForm,
}

impl ZeroCycle {
    pub fn new(form: BinaryForm) -> Result<Self> {
        if form.is_zero() {
            return Err(Error::ZeroForm);
        }
        let (prim, _) = form.primitive_part()?;
        Ok(ZeroCycle { form: prim })
    }

    /// The degree-1 cycle of a rational point of P1.
    pub fn from_point(p: &MultiPoint) -> Result<Self> {
        if p.space() != vec![1] {
            return Err(Error::SpaceMismatch("cycles live on P1".into()));
        }
        let coords = p.factor(0);
        ZeroCycle::new(BinaryForm::from_point(VarPair::Y, &coords[0], &coords[1]))
    }

    pub fn form(&self) -> &BinaryForm {
        &self.form
    }

    pub fn field(&self) -> BaseField {
        self.form.field()
    }

    pub fn cycle_degree(&self) -> usize {
        self.form.form_degree()
    }

    /// Weil height of the cycle: deg_t(form) / cycleDegree, exact.
    pub fn height(&self) -> BigRational {
        BigRational::new(
            self.form.deg_t().max(0).into(),
            (self.cycle_degree() as i64).into(),
        )
    }

    /// Formal sum of cycles is the product of their forms.
    pub fn add(&self, other: &ZeroCycle) -> Result<ZeroCycle> {
        ZeroCycle::new(self.form.mul(&other.form))
    }

    pub fn substitute(&self, u: &Poly) -> Result<ZeroCycle> {
        ZeroCycle::new(self.form.substitute(u)?)
    }
}

impl fmt::Display for ZeroCycle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.form)
    }
}

/// cycle_height per the operation contract.
pub fn cycle_height(c: &ZeroCycle) -> BigRational {
    c.height()
}

/// Empirical height-drift report over a seeded cycle sample: the maximum
/// of |h(S_* c) - (d'/d) h(c)|, against the a-priori bound deg_t(F).
#[derive(Debug, Clone)]
pub struct DriftReport {
    pub samples: usize,
    pub height_cap: u64,
    pub empirical_max: BigRational,
    pub a_priori_bound: BigRational,
}

pub fn drift_report(
    s: &Correspondence,
    samples: usize,
    max_cycle_degree: usize,
    height_cap: u64,
    seed: u64,
) -> Result<DriftReport> {
    let mut rng = crate::rng::SplitMix64::new(seed);
    let mult = s.multiplier();
    let mut empirical_max = BigRational::from_integer(0.into());
    for _ in 0..samples {
        let deg = 1 + rng.below(max_cycle_degree as u64) as usize;
        let c = crate::rng::random_cycle(&mut rng, s.field(), deg, height_cap);
        let (next, _) = s.pushforward(&c)?;
        let drift = (next.height() - &mult * c.height()).abs();
        if drift > empirical_max {
            empirical_max = drift;
        }
    }
    Ok(DriftReport {
        samples,
        height_cap,
        empirical_max,
        a_priori_bound: BigRational::from_integer(s.deg_t().max(0).into()),
    })
}
