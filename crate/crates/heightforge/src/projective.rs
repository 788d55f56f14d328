//! Points of products of projective spaces over k(t) in coprime normal
//! form, Weil heights, morphism evaluation and composition.

use std::collections::BTreeMap;
use std::fmt;

use num_rational::BigRational;
use num_traits::Zero;

use crate::algebra::{
    form_pair_resultant, normalize_coeff_list, BaseField, BinaryForm, Poly, RatFunc, VarPair,
};
use crate::dynparse::Expanded;
use crate::error::{Error, Result};

/// Iterates abort once a coordinate degree passes this bound.
pub const MAX_COORD_DEGREE: isize = 200_000;

/// Per-factor Weil heights h_i = max coordinate degree in t.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HeightVector(Vec<u64>);

impl HeightVector {
    pub fn per_factor(&self) -> &[u64] {
        &self.0
    }

    pub fn total(&self) -> u64 {
        self.0.iter().sum()
    }

    /// Pairing h_0(a, e) = sum e_i h_i against a rational NS vector.
    pub fn pairing(&self, e: &[BigRational]) -> BigRational {
        assert_eq!(e.len(), self.0.len(), "NS vector rank mismatch");
        let mut acc = BigRational::zero();
        for (h, c) in self.0.iter().zip(e) {
            acc += c * BigRational::from_integer((*h).into());
        }
        acc
    }
}

/// A point of P^{n_1} x ... x P^{n_k}(k(t)): per factor, a coprime
/// unit-normalized tuple of polynomial coordinates. The representation is
/// canonical, so equality and hashing decide projective equality.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MultiPoint {
    field: BaseField,
    factors: Vec<Vec<Poly>>,
}

impl MultiPoint {
    /// Normalize raw polynomial coordinates: reject all-zero tuples, strip
    /// the k[t] gcd, apply the canonical unit scaling.
    pub fn new(field: BaseField, factors: Vec<Vec<Poly>>) -> Result<Self> {
        let mut out = Vec::with_capacity(factors.len());
        for (i, coords) in factors.into_iter().enumerate() {
            if coords.iter().all(|c| c.is_zero()) {
                return Err(Error::AllZeroCoordinates(i));
            }
            let (norm, _) = normalize_coeff_list(&coords);
            out.push(norm);
        }
        Ok(MultiPoint { field, factors: out })
    }

    /// Like `new` for tuples already known coprime; only the unit scaling
    /// is applied. The coprimality is a debug assertion.
    pub(crate) fn from_coprime(field: BaseField, factors: Vec<Vec<Poly>>) -> Result<Self> {
        for (i, coords) in factors.iter().enumerate() {
            if coords.iter().all(|c| c.is_zero()) {
                return Err(Error::AllZeroCoordinates(i));
            }
            // full gcd re-checks on rational coefficients blow up fast;
            // only sample the invariant on small tuples
            debug_assert!(
                coords.iter().any(|c| c.degree() > 8) || {
                    let mut g = Poly::zero(field);
                    for c in coords {
                        g = g.gcd(c);
                    }
                    g.degree() <= 0
                },
                "tuple was not coprime"
            );
        }
        let factors = factors
            .into_iter()
            .map(|coords| crate::algebra::scalar_normalize_list(&coords))
            .collect();
        Ok(MultiPoint { field, factors })
    }

    /// Clear denominators of rational-function coordinates, then normalize.
    pub fn from_ratfuncs(field: BaseField, factors: Vec<Vec<RatFunc>>) -> Result<Self> {
        let mut polys = Vec::with_capacity(factors.len());
        for coords in factors {
            // common denominator per factor
            let mut den = Poly::one(field);
            for c in &coords {
                let g = den.gcd(c.denominator());
                den = den.mul(&c.denominator().exact_div(&g));
            }
            let cleared: Vec<Poly> = coords
                .iter()
                .map(|c| c.numerator().mul(&den.exact_div(c.denominator())))
                .collect();
            polys.push(cleared);
        }
        MultiPoint::new(field, polys)
    }

    pub fn field(&self) -> BaseField {
        self.field
    }

    pub fn space(&self) -> Vec<usize> {
        self.factors.iter().map(|c| c.len() - 1).collect()
    }

    pub fn factor(&self, i: usize) -> &[Poly] {
        &self.factors[i]
    }

    pub fn height(&self) -> HeightVector {
        HeightVector(
            self.factors
                .iter()
                .map(|coords| coords.iter().map(|c| c.degree().max(0) as u64).max().unwrap_or(0))
                .collect(),
        )
    }

    /// Base substitution t -> u(t) on every coordinate.
    pub fn substitute(&self, u: &Poly) -> Result<MultiPoint> {
        if u.degree() < 1 {
            return Err(Error::ConstantSubstitution);
        }
        let factors: Vec<Vec<Poly>> = self
            .factors
            .iter()
            .map(|coords| coords.iter().map(|c| c.substitute_unchecked(u)).collect())
            .collect();
        MultiPoint::new(self.field, factors)
    }
}

impl fmt::Display for MultiPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, coords) in self.factors.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "[")?;
            for (j, c) in coords.iter().enumerate() {
                if j > 0 {
                    write!(f, " : ")?;
                }
                write!(f, "{}", c)?;
            }
            write!(f, "]")?;
        }
        Ok(())
    }
}

/// Sparse homogeneous form in n+1 variables over k[t], for single P^n
/// ambient spaces with n >= 2.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MvForm {
    pub nvars: usize,
    pub degree: u32,
    pub terms: BTreeMap<Vec<u32>, Poly>,
}

impl MvForm {
    pub fn eval(&self, coords: &[Poly]) -> Poly {
        assert_eq!(coords.len(), self.nvars);
        let field = coords[0].field();
        let mut acc = Poly::zero(field);
        for (key, c) in &self.terms {
            let mut term = c.clone();
            for (v, &e) in key.iter().enumerate() {
                if e > 0 {
                    term = term.mul(&coords[v].pow(e));
                }
            }
            acc = acc.add(&term);
        }
        acc
    }

    fn eval_forms(&self, coords: &[MvForm], field: BaseField) -> MvForm {
        let inner_n = coords[0].nvars;
        let inner_deg = coords[0].degree;
        let mut out = MvForm {
            nvars: inner_n,
            degree: self.degree * inner_deg,
            terms: BTreeMap::new(),
        };
        for (key, c) in &self.terms {
            let mut term = MvForm {
                nvars: inner_n,
                degree: 0,
                terms: BTreeMap::from([(vec![0; inner_n], c.clone())]),
            };
            for (v, &e) in key.iter().enumerate() {
                for _ in 0..e {
                    term = term.mul(&coords[v], field);
                }
            }
            for (k, p) in term.terms {
                merge_term(&mut out.terms, k, p);
            }
        }
        out.terms.retain(|_, p| !p.is_zero());
        out
    }

    fn mul(&self, other: &MvForm, _field: BaseField) -> MvForm {
        let mut terms = BTreeMap::new();
        for (ka, va) in &self.terms {
            for (kb, vb) in &other.terms {
                let k: Vec<u32> = ka.iter().zip(kb).map(|(a, b)| a + b).collect();
                merge_term(&mut terms, k, va.mul(vb));
            }
        }
        terms.retain(|_, p: &mut Poly| !p.is_zero());
        MvForm { nvars: self.nvars, degree: self.degree + other.degree, terms }
    }

    fn substitute(&self, u: &Poly) -> MvForm {
        MvForm {
            nvars: self.nvars,
            degree: self.degree,
            terms: self
                .terms
                .iter()
                .map(|(k, p)| (k.clone(), p.substitute_unchecked(u)))
                .collect(),
        }
    }

    pub fn deg_t(&self) -> isize {
        self.terms.values().map(|p| p.degree()).max().unwrap_or(-1)
    }
}

fn merge_term(terms: &mut BTreeMap<Vec<u32>, Poly>, k: Vec<u32>, p: Poly) {
    if p.is_zero() {
        return;
    }
    match terms.remove(&k) {
        None => {
            terms.insert(k, p);
        }
        Some(q) => {
            let s = q.add(&p);
            if !s.is_zero() {
                terms.insert(k, s);
            }
        }
    }
}

/// One output factor of a block morphism on a product of P1s: a pair of
/// binary forms in the coordinates of the single input factor it reads.
#[derive(Debug, Clone, PartialEq)]
pub struct BlockOutput {
    pub reads: usize,
    pub a: BinaryForm,
    pub b: BinaryForm,
    /// Res(a, b) over k[t]; nonzero certifies base-point-freeness.
    pub resultant: Poly,
}

#[derive(Debug, Clone, PartialEq)]
enum MorKind {
    /// Products of P1 (including a single P1): per-output form pairs.
    Blocks(Vec<BlockOutput>),
    /// Single P^n, n >= 2: rational-map mode, indeterminacy caught at
    /// evaluation time.
    Pn(Vec<MvForm>),
}

/// A self-map of the ambient space with its multidegree matrix
/// (column j = multidegree vector of output j).
#[derive(Debug, Clone, PartialEq)]
pub struct MorphismSpec {
    field: BaseField,
    space: Vec<usize>,
    kind: MorKind,
    multidegree: Vec<Vec<u64>>,
}

impl MorphismSpec {
    pub fn from_expanded(
        field: BaseField,
        space: &[usize],
        outputs: Vec<Vec<Expanded>>,
    ) -> Result<Self> {
        let k = space.len();
        let slots: Vec<usize> = space.iter().map(|n| n + 1).collect();
        let offsets: Vec<usize> = {
            let mut v = vec![0usize];
            for s in &slots {
                v.push(v.last().unwrap() + s);
            }
            v
        };
        // multidegree of each output, with homogeneity checks
        let mut multidegree = vec![vec![0u64; k]; k.max(1)];
        let mut cols: Vec<Vec<u64>> = Vec::new();
        for (j, coords) in outputs.iter().enumerate() {
            if coords.iter().all(|c| c.is_zero()) {
                return Err(Error::InhomogeneousForm(format!(
                    "output {} is identically zero",
                    j + 1
                )));
            }
            let mut col: Option<Vec<u64>> = None;
            for c in coords {
                if c.is_zero() {
                    continue;
                }
                for key in c.terms.keys() {
                    let mut d = vec![0u64; k];
                    for i in 0..k {
                        let s: u32 = key[offsets[i]..offsets[i + 1]].iter().sum();
                        d[i] = s as u64;
                    }
                    match &col {
                        None => col = Some(d),
                        Some(expect) if *expect == d => {}
                        Some(_) => {
                            return Err(Error::InhomogeneousForm(format!(
                                "output {} is not multihomogeneous",
                                j + 1
                            )))
                        }
                    }
                }
            }
            cols.push(col.expect("nonzero output"));
        }
        for (j, col) in cols.iter().enumerate() {
            for i in 0..k {
                multidegree[i][j] = col[i];
            }
        }

        if space.iter().all(|&n| n == 1) {
            // block class
            let mut blocks = Vec::new();
            for (j, coords) in outputs.iter().enumerate() {
                let col = &cols[j];
                let nonzero: Vec<usize> = (0..k).filter(|&i| col[i] > 0).collect();
                if nonzero.len() > 1 {
                    return Err(Error::MixedBlockUnsupported(format!(
                        "output {} reads factors {:?}",
                        j + 1,
                        nonzero
                    )));
                }
                let reads = nonzero.first().copied().unwrap_or(0);
                let d = col[reads] as usize;
                let pair = if reads == 0 { VarPair::X } else { VarPair::Y };
                let mut pair_forms = Vec::new();
                for c in coords {
                    let mut fc = vec![Poly::zero(field); d + 1];
                    for (key, p) in &c.terms {
                        let e = key[offsets[reads]] as usize;
                        fc[e] = fc[e].add(p);
                    }
                    pair_forms.push(BinaryForm::new(pair, d, fc));
                }
                let a = pair_forms[0].clone();
                let b = pair_forms[1].clone();
                let resultant = form_pair_resultant(&a, &b);
                blocks.push(BlockOutput { reads, a, b, resultant });
            }
            return Ok(MorphismSpec {
                field,
                space: space.to_vec(),
                kind: MorKind::Blocks(blocks),
                multidegree,
            });
        }

        // single P^n, n >= 2
        if k != 1 {
            return Err(Error::MixedBlockUnsupported(
                "products are supported only with P1 factors".into(),
            ));
        }
        let n = space[0];
        let deg = cols[0][0] as u32;
        let mut forms = Vec::new();
        for c in &outputs[0] {
            let terms: BTreeMap<Vec<u32>, Poly> =
                c.terms.iter().map(|(k, p)| (k.clone(), p.clone())).collect();
            forms.push(MvForm { nvars: n + 1, degree: deg, terms });
        }
        Ok(MorphismSpec { field, space: space.to_vec(), kind: MorKind::Pn(forms), multidegree })
    }

    pub fn field(&self) -> BaseField {
        self.field
    }

    pub fn space(&self) -> &[usize] {
        &self.space
    }

    /// M[i][j] = degree of output j in input factor i.
    pub fn multidegree(&self) -> &[Vec<u64>] {
        &self.multidegree
    }

    /// All block outputs carry a nonzero pair resultant; P^n maps are never
    /// pre-certified.
    pub fn is_certified(&self) -> bool {
        match &self.kind {
            MorKind::Blocks(blocks) => blocks.iter().all(|b| !b.resultant.is_zero()),
            MorKind::Pn(_) => false,
        }
    }

    pub fn blocks(&self) -> Option<&[BlockOutput]> {
        match &self.kind {
            MorKind::Blocks(b) => Some(b),
            MorKind::Pn(_) => None,
        }
    }

    /// Max over outputs of (coefficient t-degree + t-degree of the pair
    /// resultant); the exact height-drift constant for certified blocks.
    pub fn drift_constant(&self) -> Option<u64> {
        match &self.kind {
            MorKind::Blocks(blocks) if self.is_certified() => {
                let mut c = 0u64;
                for b in blocks {
                    let coeff = b.a.deg_t().max(b.b.deg_t()).max(0) as u64;
                    let res = b.resultant.degree().max(0) as u64;
                    c = c.max(coeff + res);
                }
                Some(c)
            }
            _ => None,
        }
    }

    /// Evaluate at a point, renormalizing to coprime form.
    pub fn apply(&self, a: &MultiPoint) -> Result<MultiPoint> {
        if a.space() != self.space {
            return Err(Error::SpaceMismatch(format!(
                "point lives in {:?}, morphism in {:?}",
                a.space(),
                self.space
            )));
        }
        match &self.kind {
            MorKind::Blocks(blocks) => {
                let mut factors = Vec::with_capacity(blocks.len());
                let mut certified_coprime = true;
                for (j, blk) in blocks.iter().enumerate() {
                    let src = a.factor(blk.reads);
                    let va = blk.a.eval_point(&src[0], &src[1]);
                    let vb = blk.b.eval_point(&src[0], &src[1]);
                    if va.is_zero() && vb.is_zero() {
                        return Err(Error::IndeterminatePoint(j));
                    }
                    guard_degree(&va)?;
                    guard_degree(&vb)?;
                    if blk.resultant.is_zero() {
                        certified_coprime = false;
                        factors.push(vec![va, vb]);
                    } else if blk.resultant.degree() == 0 {
                        // unit resultant: outputs are already coprime
                        factors.push(vec![va, vb]);
                    } else {
                        // gcd(va, vb) divides Res(a, b), so the coprime
                        // reduction only needs gcds against a small fixed
                        // polynomial
                        let g = blk.resultant.gcd(&va).gcd(&vb);
                        if g.degree() > 0 {
                            factors.push(vec![va.exact_div(&g), vb.exact_div(&g)]);
                        } else {
                            factors.push(vec![va, vb]);
                        }
                    }
                }
                if certified_coprime {
                    MultiPoint::from_coprime(self.field, factors)
                } else {
                    MultiPoint::new(self.field, factors)
                }
            }
            MorKind::Pn(forms) => {
                let coords = a.factor(0);
                let out: Vec<Poly> = forms.iter().map(|f| f.eval(coords)).collect();
                if out.iter().all(|c| c.is_zero()) {
                    return Err(Error::IndeterminatePoint(0));
                }
                for c in &out {
                    guard_degree(c)?;
                }
                MultiPoint::new(self.field, vec![out])
            }
        }
    }

    /// Formal composition self . inner (apply inner first).
    pub fn compose(&self, inner: &MorphismSpec) -> Result<MorphismSpec> {
        if self.space != inner.space {
            return Err(Error::SpaceMismatch("composition spaces differ".into()));
        }
        let k = self.space.len();
        // M_{self . inner} = M_inner * M_self
        let mut multidegree = vec![vec![0u64; k]; k];
        for i in 0..k {
            for j in 0..k {
                let mut s = 0u64;
                for l in 0..k {
                    s += inner.multidegree[i][l] * self.multidegree[l][j];
                }
                multidegree[i][j] = s;
            }
        }
        match (&self.kind, &inner.kind) {
            (MorKind::Blocks(outer), MorKind::Blocks(inner_b)) => {
                let mut blocks = Vec::new();
                for blk in outer {
                    let src = &inner_b[blk.reads];
                    let a = eval_form_at_forms(&blk.a, &src.a, &src.b);
                    let b = eval_form_at_forms(&blk.b, &src.a, &src.b);
                    // remove any common k[t] content across the pair
                    let mut coeffs: Vec<Poly> = a.coeffs().to_vec();
                    coeffs.extend(b.coeffs().iter().cloned());
                    let (norm, _) = normalize_coeff_list(&coeffs);
                    let d = a.form_degree();
                    let pair = if src.reads == 0 { VarPair::X } else { VarPair::Y };
                    let na = BinaryForm::new(pair, d, norm[..=d].to_vec());
                    let nb = BinaryForm::new(pair, d, norm[d + 1..].to_vec());
                    let resultant = form_pair_resultant(&na, &nb);
                    blocks.push(BlockOutput { reads: src.reads, a: na, b: nb, resultant });
                }
                Ok(MorphismSpec {
                    field: self.field,
                    space: self.space.clone(),
                    kind: MorKind::Blocks(blocks),
                    multidegree,
                })
            }
            (MorKind::Pn(outer), MorKind::Pn(inner_f)) => {
                let forms: Vec<MvForm> =
                    outer.iter().map(|f| f.eval_forms(inner_f, self.field)).collect();
                Ok(MorphismSpec {
                    field: self.field,
                    space: self.space.clone(),
                    kind: MorKind::Pn(forms),
                    multidegree,
                })
            }
            _ => Err(Error::MixedBlockUnsupported("cannot compose across ambient classes".into())),
        }
    }

    pub fn identity(field: BaseField, space: &[usize]) -> Result<MorphismSpec> {
        if space.iter().all(|&n| n == 1) {
            let mut blocks = Vec::new();
            for i in 0..space.len() {
                let pair = if i == 0 { VarPair::X } else { VarPair::Y };
                let a = BinaryForm::new(pair, 1, vec![Poly::zero(field), Poly::one(field)]);
                let b = BinaryForm::new(pair, 1, vec![Poly::one(field), Poly::zero(field)]);
                let resultant = form_pair_resultant(&a, &b);
                blocks.push(BlockOutput { reads: i, a, b, resultant });
            }
            let k = space.len();
            let mut m = vec![vec![0u64; k]; k];
            for i in 0..k {
                m[i][i] = 1;
            }
            Ok(MorphismSpec {
                field,
                space: space.to_vec(),
                kind: MorKind::Blocks(blocks),
                multidegree: m,
            })
        } else {
            let n = space[0];
            let forms: Vec<MvForm> = (0..=n)
                .map(|v| {
                    let mut key = vec![0u32; n + 1];
                    key[v] = 1;
                    MvForm {
                        nvars: n + 1,
                        degree: 1,
                        terms: BTreeMap::from([(key, Poly::one(field))]),
                    }
                })
                .collect();
            Ok(MorphismSpec {
                field,
                space: space.to_vec(),
                kind: MorKind::Pn(forms),
                multidegree: vec![vec![1]],
            })
        }
    }

    /// Base-change pullback: substitute t -> u(t) in every coefficient.
    pub fn substitute(&self, u: &Poly) -> Result<MorphismSpec> {
        if u.degree() < 1 {
            return Err(Error::ConstantSubstitution);
        }
        let kind = match &self.kind {
            MorKind::Blocks(blocks) => MorKind::Blocks(
                blocks
                    .iter()
                    .map(|b| {
                        Ok(BlockOutput {
                            reads: b.reads,
                            a: b.a.substitute(u)?,
                            b: b.b.substitute(u)?,
                            resultant: b.resultant.substitute_unchecked(u),
                        })
                    })
                    .collect::<Result<Vec<_>>>()?,
            ),
            MorKind::Pn(forms) => MorKind::Pn(forms.iter().map(|f| f.substitute(u)).collect()),
        };
        Ok(MorphismSpec {
            field: self.field,
            space: self.space.clone(),
            kind,
            multidegree: self.multidegree.clone(),
        })
    }

    /// Output tuple as display strings in the dyn-file variable names.
    fn format_output(&self, j: usize) -> String {
        match &self.kind {
            MorKind::Blocks(blocks) => {
                let blk = &blocks[j];
                let names = factor_var_names(self.space.len(), blk.reads);
                format!(
                    "({}, {})",
                    format_binary(&blk.a, &names.0, &names.1),
                    format_binary(&blk.b, &names.0, &names.1)
                )
            }
            MorKind::Pn(forms) => {
                let names: Vec<String> =
                    (0..=self.space[0]).map(|v| format!("x{}", v)).collect();
                let rendered: Vec<String> =
                    forms.iter().map(|f| format_mvform(f, &names)).collect();
                format!("({})", rendered.join(", "))
            }
        }
    }
}

fn guard_degree(p: &Poly) -> Result<()> {
    if p.degree() > MAX_COORD_DEGREE {
        return Err(Error::ResourceLimit(format!(
            "coordinate degree {} exceeds {}",
            p.degree(),
            MAX_COORD_DEGREE
        )));
    }
    Ok(())
}

/// Substitute a pair of forms into a binary form: f(A(x), B(x)).
fn eval_form_at_forms(f: &BinaryForm, a: &BinaryForm, b: &BinaryForm) -> BinaryForm {
    let field = a.field();
    let d = f.form_degree();
    let inner = a.form_degree();
    let mut acc = BinaryForm::zero(field, a.pair, d * inner);
    for e in 0..=d {
        let c = f.coeff(e);
        if c.is_zero() {
            continue;
        }
        let mut term = BinaryForm::new(a.pair, 0, vec![Poly::one(field)]);
        for _ in 0..e {
            term = term.mul(a);
        }
        for _ in 0..(d - e) {
            term = term.mul(b);
        }
        acc = add_forms(&acc, &term.mul_poly(c));
    }
    acc
}

fn add_forms(a: &BinaryForm, b: &BinaryForm) -> BinaryForm {
    assert_eq!(a.form_degree(), b.form_degree());
    BinaryForm::new(
        a.pair,
        a.form_degree(),
        a.coeffs().iter().zip(b.coeffs()).map(|(x, y)| x.add(y)).collect(),
    )
}

fn factor_var_names(k: usize, factor: usize) -> (String, String) {
    if k == 1 {
        ("x0".into(), "x1".into())
    } else if k == 2 {
        if factor == 0 {
            ("x0".into(), "x1".into())
        } else {
            ("y0".into(), "y1".into())
        }
    } else {
        (format!("x{}_0", factor + 1), format!("x{}_1", factor + 1))
    }
}

fn format_binary(form: &BinaryForm, v0: &str, v1: &str) -> String {
    let d = form.form_degree();
    let terms: Vec<(String, bool)> = (0..=d)
        .rev()
        .filter(|&e| !form.coeff(e).is_zero())
        .map(|e| {
            crate::algebra::render_signed_term(form.coeff(e), &[(v0, e), (v1, d - e)])
        })
        .collect();
    crate::algebra::join_signed_terms(&terms)
}

fn format_mvform(form: &MvForm, names: &[String]) -> String {
    let terms: Vec<(String, bool)> = form
        .terms
        .iter()
        .rev()
        .map(|(key, c)| {
            let vars: Vec<(&str, usize)> = key
                .iter()
                .enumerate()
                .map(|(v, &e)| (names[v].as_str(), e as usize))
                .collect();
            crate::algebra::render_signed_term(c, &vars)
        })
        .collect();
    crate::algebra::join_signed_terms(&terms)
}

impl fmt::Display for MorphismSpec {
    /// Prints the dyn-file form; `load_dynamics` re-reads it.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "base: {}", self.field)?;
        let space: Vec<String> = self.space.iter().map(|n| format!("P{}", n)).collect();
        writeln!(f, "space: {}", space.join("x"))?;
        writeln!(f, "map: morphism")?;
        for j in 0..self.space.len() {
            writeln!(f, "out{}: {}", j + 1, self.format_output(j))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynparse::{load_dynamics, parse_point, DynSystem};

    fn morphism(text: &str) -> MorphismSpec {
        match load_dynamics(text).unwrap() {
            DynSystem::Morphism(m) => m,
            _ => panic!("expected morphism"),
        }
    }

    const SQ_T: &str = "base: Q\nspace: P1\nout1: (x0^2 + t*x1^2, x1^2)\n";
    const SWAP: &str = "base: Q\nspace: P1xP1\nout1: (y0^2, y1^2)\nout2: (x0^3, x1^3)\n";

    #[test]
    fn heights() {
        let p = parse_point("[t:1]", BaseField::Rationals, &[1]).unwrap();
        assert_eq!(p.height().per_factor(), &[1]);
        let p2 =
            parse_point("[t^2 + t : 1],[1 : t^3]", BaseField::Rationals, &[1, 1]).unwrap();
        assert_eq!(p2.height().per_factor(), &[2, 3]);
        // (t^2 + t : t^2) normalizes to (t + 1 : t)
        let p3 = parse_point("[t^2 + t : t^2]", BaseField::Rationals, &[1]).unwrap();
        assert_eq!(p3.height().per_factor(), &[1]);
    }

    #[test]
    fn apply_square_plus_t() {
        let m = morphism(SQ_T);
        let p = parse_point("[t:1]", BaseField::Rationals, &[1]).unwrap();
        let q = m.apply(&p).unwrap();
        let expect = parse_point("[t^2 + t:1]", BaseField::Rationals, &[1]).unwrap();
        assert_eq!(q, expect);
        assert!(m.is_certified());
        assert_eq!(m.drift_constant(), Some(1));
    }

    #[test]
    fn apply_swap() {
        let m = morphism(SWAP);
        let p = parse_point("[t:1],[1:t]", BaseField::Rationals, &[1, 1]).unwrap();
        let q = m.apply(&p).unwrap();
        let expect = parse_point("[1:t^2],[t^3:1]", BaseField::Rationals, &[1, 1]).unwrap();
        assert_eq!(q, expect);
    }

    #[test]
    fn apply_indeterminate() {
        let m = morphism("base: Q\nspace: P1\nout1: (x0^2, x0*x1)\n");
        assert!(!m.is_certified());
        let p = parse_point("[0:1]", BaseField::Rationals, &[1]).unwrap();
        assert!(matches!(m.apply(&p), Err(Error::IndeterminatePoint(0))));
    }

    #[test]
    fn compose_swap_squared() {
        let swap = morphism(SWAP);
        let sq = swap.compose(&swap).unwrap();
        assert_eq!(sq.multidegree(), &[vec![6, 0], vec![0, 6]]);
        // (x^6, y^6): spot-check on a point
        let p = parse_point("[t:1],[1:1]", BaseField::Rationals, &[1, 1]).unwrap();
        let direct = swap.apply(&swap.apply(&p).unwrap()).unwrap();
        let via = sq.apply(&p).unwrap();
        assert_eq!(direct, via);
    }

    #[test]
    fn compose_matrix_law() {
        let swap = morphism(SWAP);
        let other = morphism("base: Q\nspace: P1xP1\nout1: (x0^2, x1^2)\nout2: (y0, y1)\n");
        // (x^2, y) . swap -> (y^4, x^3)
        let comp = other.compose(&swap).unwrap();
        assert_eq!(comp.multidegree(), &[vec![0, 3], vec![4, 0]]);
    }

    #[test]
    fn compose_identity() {
        let m = morphism(SQ_T);
        let id = MorphismSpec::identity(BaseField::Rationals, &[1]).unwrap();
        assert_eq!(m.compose(&id).unwrap(), m);
        assert_eq!(id.compose(&m).unwrap(), m);
    }

    #[test]
    fn rescaling_invariance() {
        // the same projective point through different representatives
        let a = parse_point("[t^2 + t : t]", BaseField::Rationals, &[1]).unwrap();
        let b = parse_point("[(t + 1)*3 : 3]", BaseField::Rationals, &[1]).unwrap();
        assert_eq!(a, b);
        let m = morphism(SQ_T);
        assert_eq!(m.apply(&a).unwrap(), m.apply(&b).unwrap());
    }

    #[test]
    fn base_change_height_scaling() {
        let u = Poly::from_int_coeffs(BaseField::Rationals, &[0, 0, 1]); // t^2
        let p = parse_point("[t^3 + t : 1 + 2*t]", BaseField::Rationals, &[1]).unwrap();
        let q = p.substitute(&u).unwrap();
        assert_eq!(q.height().per_factor()[0], 2 * p.height().per_factor()[0]);
    }

    #[test]
    fn display_roundtrip() {
        for text in [SQ_T, SWAP, "base: F3\nspace: P2\nout1: (x0^2, x1^2, x2^2 + t*x0*x1)\n"] {
            let m = morphism(text);
            let printed = m.to_string();
            let again = morphism(&printed);
            assert_eq!(m, again, "round-trip failed for {}", printed);
        }
    }
}
