//! Parsing of polynomial expressions, dynamics files, and point/cycle
//! literals into validated domain objects.
//!
//! Grammar (normative, UTF-8):
//!
//! ```text
//! expr   := term (("+" | "-") term)*
//! term   := factor (("*" | "/") factor)*
//! factor := "-" factor | atom ("^" nat)?
//! atom   := rational | var | "(" expr ")"
//! ```
//!
//! Rationals are written `p/q` in lowest terms; `/` between non-constant
//! operands is only meaningful where rational functions are allowed (point
//! coordinates). Implicit multiplication is rejected. Files are
//! line-oriented `key: value` records with keys `base`, `space`, `map`,
//! `out<j>`, `corr`; `#` starts a comment.

use std::collections::BTreeMap;

use num_bigint::BigInt;

use crate::algebra::{BaseField, BiForm, BinaryForm, Poly, RatFunc, Scalar, VarPair};
use crate::correspondence::{Correspondence, ZeroCycle};
use crate::error::{Error, Result};
use crate::projective::{MorphismSpec, MultiPoint};

// -- tokens -----------------------------------------------------------------

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    Colon,
    Comma,
    LBracket,
    RBracket,
}

#[derive(Debug, Clone)]
struct Lexed {
    tok: Tok,
    line: usize,
    col: usize,
}

fn lex(text: &str) -> Result<Vec<Lexed>> {
    let mut out = Vec::new();
    let mut line = 1usize;
    let mut col = 1usize;
    let mut chars = text.chars().peekable();
    while let Some(&c) = chars.peek() {
        let (l, co) = (line, col);
        let mut push = |tok: Tok| out.push(Lexed { tok, line: l, col: co });
        match c {
            '\n' => {
                chars.next();
                line += 1;
                col = 1;
            }
            c if c.is_whitespace() => {
                chars.next();
                col += 1;
            }
            '0'..='9' => {
                let mut s = String::new();
                while let Some(&d) = chars.peek() {
                    if d.is_ascii_digit() {
                        s.push(d);
                        chars.next();
                        col += 1;
                    } else {
                        break;
                    }
                }
                push(Tok::Int(s.parse().expect("digits")));
            }
            c if c.is_ascii_alphabetic() => {
                let mut s = String::new();
                while let Some(&d) = chars.peek() {
                    if d.is_ascii_alphanumeric() || d == '_' {
                        s.push(d);
                        chars.next();
                        col += 1;
                    } else {
                        break;
                    }
                }
                push(Tok::Ident(s));
            }
            '+' => {
                chars.next();
                col += 1;
                push(Tok::Plus);
            }
            '-' | '\u{2212}' => {
                chars.next();
                col += 1;
                push(Tok::Minus);
            }
            '*' => {
                chars.next();
                col += 1;
                push(Tok::Star);
            }
            '/' => {
                chars.next();
                col += 1;
                push(Tok::Slash);
            }
            '^' => {
                chars.next();
                col += 1;
                push(Tok::Caret);
            }
            '(' => {
                chars.next();
                col += 1;
                push(Tok::LParen);
            }
            ')' => {
                chars.next();
                col += 1;
                push(Tok::RParen);
            }
            ':' => {
                chars.next();
                col += 1;
                push(Tok::Colon);
            }
            ',' => {
                chars.next();
                col += 1;
                push(Tok::Comma);
            }
            '[' => {
                chars.next();
                col += 1;
                push(Tok::LBracket);
            }
            ']' => {
                chars.next();
                col += 1;
                push(Tok::RBracket);
            }
            other => {
                return Err(Error::SyntaxError {
                    line,
                    col,
                    msg: format!("unexpected character `{}`", other),
                });
            }
        }
    }
    Ok(out)
}

// -- AST --------------------------------------------------------------------

/// Reference to a declared variable: `t` or coordinate `index` of `factor`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VarRef {
    T,
    Coord { factor: usize, index: usize },
}

#[derive(Debug, Clone, PartialEq)]
pub enum ExprAST {
    Const(Scalar),
    Var(VarRef),
    Add(Box<ExprAST>, Box<ExprAST>),
    Sub(Box<ExprAST>, Box<ExprAST>),
    Mul(Box<ExprAST>, Box<ExprAST>),
    Div(Box<ExprAST>, Box<ExprAST>),
    Neg(Box<ExprAST>),
    Pow(Box<ExprAST>, u32),
}

/// Declares which variables an expression may use.
#[derive(Debug, Clone)]
pub struct VarContext {
    pub field: BaseField,
    /// Dimensions n_i of the declared factors; empty means "t only".
    pub dims: Vec<usize>,
    /// Correspondence contexts use the fixed pairs x0,x1 (source) and
    /// y0,y1 (target) on P1.
    pub corr: bool,
}

impl VarContext {
    pub fn t_only(field: BaseField) -> Self {
        VarContext { field, dims: Vec::new(), corr: false }
    }

    pub fn for_space(field: BaseField, dims: &[usize]) -> Self {
        VarContext { field, dims: dims.to_vec(), corr: false }
    }

    pub fn for_correspondence(field: BaseField) -> Self {
        VarContext { field, dims: vec![1, 1], corr: true }
    }

    fn resolve(&self, name: &str, line: usize, col: usize) -> Result<VarRef> {
        if name == "t" {
            return Ok(VarRef::T);
        }
        let unknown = || Error::UnknownVariable { name: name.to_string(), line, col };
        if self.corr {
            return match name {
                "x0" => Ok(VarRef::Coord { factor: 0, index: 0 }),
                "x1" => Ok(VarRef::Coord { factor: 0, index: 1 }),
                "y0" => Ok(VarRef::Coord { factor: 1, index: 0 }),
                "y1" => Ok(VarRef::Coord { factor: 1, index: 1 }),
                _ => Err(unknown()),
            };
        }
        if self.dims.is_empty() {
            return Err(unknown());
        }
        // general form: x<i>_<j> with 1-based factor index
        if let Some(rest) = name.strip_prefix('x') {
            if let Some((i, j)) = rest.split_once('_') {
                if let (Ok(i), Ok(j)) = (i.parse::<usize>(), j.parse::<usize>()) {
                    if i >= 1 && i <= self.dims.len() && j <= self.dims[i - 1] {
                        return Ok(VarRef::Coord { factor: i - 1, index: j });
                    }
                }
                return Err(unknown());
            }
            // single-factor shorthand x<j>
            if let Ok(j) = rest.parse::<usize>() {
                if j <= self.dims[0] {
                    return Ok(VarRef::Coord { factor: 0, index: j });
                }
                // x0/x1 as the first factor of a product of P1s
                if self.dims.iter().all(|&d| d == 1) && j <= 1 {
                    return Ok(VarRef::Coord { factor: 0, index: j });
                }
                return Err(unknown());
            }
        }
        // y<j> aliases the second factor when it exists and is a P1
        if let Some(rest) = name.strip_prefix('y') {
            if let Ok(j) = rest.parse::<usize>() {
                if self.dims.len() >= 2 && self.dims[1] == 1 && j <= 1 {
                    return Ok(VarRef::Coord { factor: 1, index: j });
                }
            }
        }
        Err(unknown())
    }
}

struct Parser<'a> {
    toks: &'a [Lexed],
    pos: usize,
    ctx: &'a VarContext,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&Lexed> {
        self.toks.get(self.pos)
    }

    fn next(&mut self) -> Option<Lexed> {
        let t = self.toks.get(self.pos).cloned();
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn here(&self) -> (usize, usize) {
        self.toks
            .get(self.pos)
            .or_else(|| self.toks.last())
            .map(|l| (l.line, l.col))
            .unwrap_or((1, 1))
    }

    fn err(&self, msg: impl Into<String>) -> Error {
        let (line, col) = self.here();
        Error::SyntaxError { line, col, msg: msg.into() }
    }

    fn expr(&mut self) -> Result<ExprAST> {
        let mut acc = self.term()?;
        loop {
            match self.peek().map(|l| l.tok.clone()) {
                Some(Tok::Plus) => {
                    self.next();
                    acc = ExprAST::Add(Box::new(acc), Box::new(self.term()?));
                }
                Some(Tok::Minus) => {
                    self.next();
                    acc = ExprAST::Sub(Box::new(acc), Box::new(self.term()?));
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<ExprAST> {
        let mut acc = self.factor()?;
        loop {
            match self.peek().map(|l| l.tok.clone()) {
                Some(Tok::Star) => {
                    self.next();
                    acc = ExprAST::Mul(Box::new(acc), Box::new(self.factor()?));
                }
                Some(Tok::Slash) => {
                    self.next();
                    acc = ExprAST::Div(Box::new(acc), Box::new(self.factor()?));
                }
                _ => return Ok(acc),
            }
        }
    }

    fn factor(&mut self) -> Result<ExprAST> {
        if matches!(self.peek().map(|l| &l.tok), Some(Tok::Minus)) {
            self.next();
            return Ok(ExprAST::Neg(Box::new(self.factor()?)));
        }
        let base = self.atom()?;
        if matches!(self.peek().map(|l| &l.tok), Some(Tok::Caret)) {
            self.next();
            match self.next() {
                Some(Lexed { tok: Tok::Int(n), .. }) => {
                    let e: u32 = n.try_into().map_err(|_| self.err("exponent too large"))?;
                    return Ok(ExprAST::Pow(Box::new(base), e));
                }
                Some(Lexed { line, col, .. }) => {
                    return Err(Error::NonLiteralExponent { line, col });
                }
                None => {
                    let (line, col) = self.here();
                    return Err(Error::NonLiteralExponent { line, col });
                }
            }
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<ExprAST> {
        match self.next() {
            Some(Lexed { tok: Tok::Int(n), .. }) => {
                Ok(ExprAST::Const(Scalar::from_ratio(self.ctx.field, &n, &BigInt::from(1))?))
            }
            Some(Lexed { tok: Tok::Ident(name), line, col }) => {
                Ok(ExprAST::Var(self.ctx.resolve(&name, line, col)?))
            }
            Some(Lexed { tok: Tok::LParen, .. }) => {
                let e = self.expr()?;
                match self.next() {
                    Some(Lexed { tok: Tok::RParen, .. }) => Ok(e),
                    _ => Err(self.err("expected `)`")),
                }
            }
            Some(other) => Err(Error::SyntaxError {
                line: other.line,
                col: other.col,
                msg: format!("unexpected token {:?}", other.tok),
            }),
            None => Err(self.err("unexpected end of input")),
        }
    }
}

/// Parse one expression against a variable declaration.
pub fn parse_expr(text: &str, ctx: &VarContext) -> Result<ExprAST> {
    let toks = lex(text)?;
    let mut p = Parser { toks: &toks, pos: 0, ctx };
    let e = p.expr()?;
    if p.pos != toks.len() {
        return Err(p.err("trailing input"));
    }
    Ok(e)
}

// -- expansion to dense monomial form ---------------------------------------

/// A multihomogeneous polynomial expanded over the coordinate variables:
/// monomial exponents (flattened across factors) -> coefficient in k[t].
#[derive(Debug, Clone, PartialEq)]
pub struct Expanded {
    pub nslots: usize,
    pub terms: BTreeMap<Vec<u32>, Poly>,
}

impl Expanded {
    fn zero(nslots: usize) -> Self {
        Expanded { nslots, terms: BTreeMap::new() }
    }

    fn constant(nslots: usize, p: Poly) -> Self {
        let mut e = Expanded::zero(nslots);
        if !p.is_zero() {
            e.terms.insert(vec![0; nslots], p);
        }
        e
    }

    fn insert(&mut self, key: Vec<u32>, p: Poly) {
        if p.is_zero() {
            return;
        }
        match self.terms.remove(&key) {
            None => {
                self.terms.insert(key, p);
            }
            Some(q) => {
                let s = q.add(&p);
                if !s.is_zero() {
                    self.terms.insert(key, s);
                }
            }
        }
    }

    fn add(&self, o: &Expanded) -> Expanded {
        let mut out = self.clone();
        for (k, v) in &o.terms {
            out.insert(k.clone(), v.clone());
        }
        out
    }

    fn neg(&self) -> Expanded {
        Expanded {
            nslots: self.nslots,
            terms: self.terms.iter().map(|(k, v)| (k.clone(), v.neg())).collect(),
        }
    }

    fn mul(&self, o: &Expanded) -> Expanded {
        let mut out = Expanded::zero(self.nslots);
        for (ka, va) in &self.terms {
            for (kb, vb) in &o.terms {
                let k: Vec<u32> = ka.iter().zip(kb).map(|(a, b)| a + b).collect();
                out.insert(k, va.mul(vb));
            }
        }
        out
    }

    fn pow(&self, e: u32) -> Expanded {
        let mut acc = Expanded::constant(self.nslots, Poly::one(self.field()));
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    fn field(&self) -> BaseField {
        self.terms
            .values()
            .next()
            .map(|p| p.field())
            .unwrap_or(BaseField::Rationals)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

/// Evaluate an AST into the dense monomial form. `slot_of` maps a
/// coordinate variable to its flattened slot.
fn expand(
    ast: &ExprAST,
    field: BaseField,
    nslots: usize,
    slot_of: &dyn Fn(usize, usize) -> usize,
) -> Result<Expanded> {
    Ok(match ast {
        ExprAST::Const(c) => Expanded::constant(nslots, Poly::constant(c.clone())),
        ExprAST::Var(VarRef::T) => Expanded::constant(nslots, Poly::var(field)),
        ExprAST::Var(VarRef::Coord { factor, index }) => {
            let mut key = vec![0u32; nslots];
            key[slot_of(*factor, *index)] = 1;
            let mut e = Expanded::zero(nslots);
            e.insert(key, Poly::one(field));
            e
        }
        ExprAST::Add(a, b) => {
            expand(a, field, nslots, slot_of)?.add(&expand(b, field, nslots, slot_of)?)
        }
        ExprAST::Sub(a, b) => {
            expand(a, field, nslots, slot_of)?.add(&expand(b, field, nslots, slot_of)?.neg())
        }
        ExprAST::Neg(a) => expand(a, field, nslots, slot_of)?.neg(),
        ExprAST::Mul(a, b) => {
            expand(a, field, nslots, slot_of)?.mul(&expand(b, field, nslots, slot_of)?)
        }
        ExprAST::Div(a, b) => {
            let den = expand(b, field, nslots, slot_of)?;
            // only division by a nonzero constant scalar keeps us polynomial
            if den.terms.len() == 1 {
                let (k, v) = den.terms.iter().next().unwrap();
                if k.iter().all(|&e| e == 0) && v.degree() == 0 {
                    let inv = v.leading_coeff().inv()?;
                    let a = expand(a, field, nslots, slot_of)?;
                    return Ok(Expanded {
                        nslots,
                        terms: a
                            .terms
                            .into_iter()
                            .map(|(k, p)| (k, p.mul_scalar(&inv)))
                            .collect(),
                    });
                }
            }
            return Err(Error::InhomogeneousForm(
                "division by a non-constant is not allowed in forms".into(),
            ));
        }
        ExprAST::Pow(a, e) => expand(a, field, nslots, slot_of)?.pow(*e),
    })
}

/// Evaluate an AST in t only, with rational-function arithmetic.
fn eval_ratfunc(ast: &ExprAST, field: BaseField) -> Result<RatFunc> {
    Ok(match ast {
        ExprAST::Const(c) => RatFunc::constant(c.clone()),
        ExprAST::Var(VarRef::T) => RatFunc::from_poly(Poly::var(field)),
        ExprAST::Var(VarRef::Coord { .. }) => {
            return Err(Error::SyntaxError {
                line: 1,
                col: 1,
                msg: "coordinate variables are not allowed here".into(),
            })
        }
        ExprAST::Add(a, b) => eval_ratfunc(a, field)?.add(&eval_ratfunc(b, field)?),
        ExprAST::Sub(a, b) => eval_ratfunc(a, field)?.sub(&eval_ratfunc(b, field)?),
        ExprAST::Neg(a) => eval_ratfunc(a, field)?.neg(),
        ExprAST::Mul(a, b) => eval_ratfunc(a, field)?.mul(&eval_ratfunc(b, field)?),
        ExprAST::Div(a, b) => eval_ratfunc(a, field)?.div(&eval_ratfunc(b, field)?)?,
        ExprAST::Pow(a, e) => eval_ratfunc(a, field)?.pow(*e),
    })
}

// -- dynamics files ----------------------------------------------------------

#[derive(Debug, Clone, PartialEq)]
pub enum DynSystem {
    Morphism(MorphismSpec),
    Correspondence(Correspondence),
}

impl DynSystem {
    pub fn field(&self) -> BaseField {
        match self {
            DynSystem::Morphism(m) => m.field(),
            DynSystem::Correspondence(c) => c.field(),
        }
    }

    pub fn space(&self) -> Vec<usize> {
        match self {
            DynSystem::Morphism(m) => m.space().to_vec(),
            DynSystem::Correspondence(_) => vec![1],
        }
    }
}

fn parse_base(value: &str) -> Result<BaseField> {
    let v = value.trim();
    if v == "Q" {
        return Ok(BaseField::Rationals);
    }
    if let Some(p) = v.strip_prefix('F') {
        if let Ok(p) = p.parse::<u32>() {
            return BaseField::prime(p);
        }
    }
    Err(Error::SyntaxError { line: 0, col: 0, msg: format!("unknown base field `{}`", v) })
}

fn parse_space(value: &str) -> Result<Vec<usize>> {
    let v: String = value.chars().filter(|c| !c.is_whitespace()).collect();
    let parts: Vec<&str> = v.split(['x', 'X']).collect();
    let mut dims = Vec::new();
    for part in &parts {
        let n = part
            .strip_prefix('P')
            .and_then(|s| s.parse::<usize>().ok())
            .filter(|&n| n >= 1)
            .ok_or_else(|| Error::SpaceMismatch(format!("cannot parse space `{}`", value)))?;
        dims.push(n);
    }
    if dims.len() > 1 && dims.iter().any(|&n| n != 1) {
        return Err(Error::MixedBlockUnsupported(
            "products are supported only with P1 factors".into(),
        ));
    }
    Ok(dims)
}

/// Parse a dynamics file (text form) into a validated system.
pub fn load_dynamics(text: &str) -> Result<DynSystem> {
    let mut base: Option<BaseField> = None;
    let mut space: Option<Vec<usize>> = None;
    let mut kind: Option<String> = None;
    let mut outs: Vec<(usize, String)> = Vec::new();
    let mut corr: Option<String> = None;

    for (lineno, raw) in text.lines().enumerate() {
        let line = match raw.find('#') {
            Some(i) => &raw[..i],
            None => raw,
        };
        if line.trim().is_empty() {
            continue;
        }
        let (key, value) = line.split_once(':').ok_or_else(|| Error::SyntaxError {
            line: lineno + 1,
            col: 1,
            msg: "expected `key: value`".into(),
        })?;
        let key = key.trim();
        let value = value.trim().to_string();
        match key {
            "base" => base = Some(parse_base(&value)?),
            "space" => space = Some(parse_space(&value)?),
            "map" => kind = Some(value),
            "corr" => corr = Some(value),
            k if k.starts_with("out") => {
                let j: usize = k[3..].parse().map_err(|_| Error::SyntaxError {
                    line: lineno + 1,
                    col: 1,
                    msg: format!("bad output key `{}`", k),
                })?;
                if j == 0 {
                    return Err(Error::SyntaxError {
                        line: lineno + 1,
                        col: 1,
                        msg: "output factors are numbered from 1".into(),
                    });
                }
                outs.push((j, value));
            }
            other => {
                return Err(Error::SyntaxError {
                    line: lineno + 1,
                    col: 1,
                    msg: format!("unknown key `{}`", other),
                })
            }
        }
    }

    let base = base.ok_or_else(|| Error::SyntaxError {
        line: 0,
        col: 0,
        msg: "missing `base:` line".into(),
    })?;
    let space = space.ok_or_else(|| Error::SyntaxError {
        line: 0,
        col: 0,
        msg: "missing `space:` line".into(),
    })?;

    let is_corr = match kind.as_deref() {
        Some("morphism") => false,
        Some("correspondence") => true,
        Some(other) => {
            return Err(Error::SyntaxError {
                line: 0,
                col: 0,
                msg: format!("unknown map kind `{}`", other),
            })
        }
        None => corr.is_some(),
    };

    if is_corr {
        let text = corr.ok_or_else(|| Error::SyntaxError {
            line: 0,
            col: 0,
            msg: "correspondence files need a `corr:` line".into(),
        })?;
        if space != vec![1] {
            return Err(Error::SpaceMismatch("correspondences live on P1".into()));
        }
        let biform = parse_biform(&text, base)?;
        return Ok(DynSystem::Correspondence(Correspondence::new(biform)?));
    }

    if corr.is_some() {
        return Err(Error::SyntaxError {
            line: 0,
            col: 0,
            msg: "`corr:` given but map kind is morphism".into(),
        });
    }
    outs.sort_by_key(|(j, _)| *j);
    let expected: Vec<usize> = (1..=space.len()).collect();
    let got: Vec<usize> = outs.iter().map(|(j, _)| *j).collect();
    if got != expected {
        return Err(Error::SpaceMismatch(format!(
            "need outputs out1..out{}, found {:?}",
            space.len(),
            got
        )));
    }

    let ctx = VarContext::for_space(base, &space);
    let slots: Vec<usize> = space.iter().map(|n| n + 1).collect();
    let nslots: usize = slots.iter().sum();
    let offsets: Vec<usize> = {
        let mut v = vec![0usize];
        for s in &slots {
            v.push(v.last().unwrap() + s);
        }
        v
    };
    let slot_of = move |factor: usize, index: usize| offsets[factor] + index;

    let mut outputs: Vec<Vec<Expanded>> = Vec::new();
    for (j, text) in &outs {
        let tuple = parse_tuple(text, &ctx)?;
        if tuple.len() != space[j - 1] + 1 {
            return Err(Error::WrongArity { expected: space[j - 1] + 1, found: tuple.len() });
        }
        let mut coords = Vec::new();
        for ast in &tuple {
            coords.push(expand(ast, base, nslots, &slot_of)?);
        }
        outputs.push(coords);
    }

    Ok(DynSystem::Morphism(MorphismSpec::from_expanded(base, &space, outputs)?))
}

/// Parse "(expr, expr, ...)" or a bare expr as a 1-tuple.
fn parse_tuple(text: &str, ctx: &VarContext) -> Result<Vec<ExprAST>> {
    let toks = lex(text)?;
    let mut p = Parser { toks: &toks, pos: 0, ctx };
    let mut out = Vec::new();
    let parened = matches!(p.peek().map(|l| &l.tok), Some(Tok::LParen)) && {
        // only treat as tuple syntax when the parens wrap the whole text
        let mut depth = 0usize;
        let mut wraps = true;
        for (i, l) in toks.iter().enumerate() {
            match l.tok {
                Tok::LParen => depth += 1,
                Tok::RParen => {
                    depth -= 1;
                    if depth == 0 && i + 1 != toks.len() {
                        wraps = false;
                        break;
                    }
                }
                _ => {}
            }
        }
        wraps
    };
    if parened {
        p.next();
        loop {
            out.push(p.expr()?);
            match p.next() {
                Some(Lexed { tok: Tok::Comma, .. }) => continue,
                Some(Lexed { tok: Tok::RParen, .. }) => break,
                _ => return Err(p.err("expected `,` or `)` in tuple")),
            }
        }
        if p.pos != toks.len() {
            return Err(p.err("trailing input after tuple"));
        }
    } else {
        out.push(p.expr()?);
        if p.pos != toks.len() {
            return Err(p.err("trailing input"));
        }
    }
    Ok(out)
}

/// Parse a bihomogeneous form in (x0, x1; y0, y1) over k[t].
pub fn parse_biform(text: &str, field: BaseField) -> Result<BiForm> {
    let ctx = VarContext::for_correspondence(field);
    let ast = parse_expr(text, &ctx)?;
    // slots: x0 x1 y0 y1
    let exp = expand(&ast, field, 4, &|factor, index| 2 * factor + index)?;
    if exp.is_zero() {
        return Err(Error::ZeroForm);
    }
    let mut dx = None;
    let mut dy = None;
    for key in exp.terms.keys() {
        let (tx, ty) = (key[0] + key[1], key[2] + key[3]);
        if *dx.get_or_insert(tx) != tx || *dy.get_or_insert(ty) != ty {
            return Err(Error::InhomogeneousForm(
                "correspondence form must be bihomogeneous in (x0,x1) and (y0,y1)".into(),
            ));
        }
    }
    let (dx, dy) = (dx.unwrap() as usize, dy.unwrap() as usize);
    let mut x_coeffs =
        vec![BinaryForm::zero(field, VarPair::Y, dy); dx + 1];
    for (key, poly) in &exp.terms {
        let e = key[0] as usize;
        let j = key[2] as usize;
        let mut coeffs = x_coeffs[e].coeffs().to_vec();
        coeffs[j] = coeffs[j].add(poly);
        x_coeffs[e] = BinaryForm::new(VarPair::Y, dy, coeffs);
    }
    Ok(BiForm::new(dx, dy, x_coeffs))
}

// -- points and cycles -------------------------------------------------------

/// Parse a point literal: bracketed coordinate tuples, one per factor,
/// separated by commas, e.g. `[t:1],[1:1]`. Coordinates are rational
/// functions of t; the result is normalized to coprime polynomial form.
pub fn parse_point(text: &str, field: BaseField, dims: &[usize]) -> Result<MultiPoint> {
    let toks = lex(text)?;
    let ctx = VarContext::t_only(field);
    let mut p = Parser { toks: &toks, pos: 0, ctx: &ctx };
    let mut factors: Vec<Vec<RatFunc>> = Vec::new();
    loop {
        match p.next() {
            Some(Lexed { tok: Tok::LBracket, .. }) => {}
            _ => return Err(p.err("expected `[`")),
        }
        let mut coords = Vec::new();
        loop {
            let e = p.expr()?;
            coords.push(eval_ratfunc(&e, field)?);
            match p.next() {
                Some(Lexed { tok: Tok::Colon, .. }) => continue,
                Some(Lexed { tok: Tok::RBracket, .. }) => break,
                _ => return Err(p.err("expected `:` or `]`")),
            }
        }
        factors.push(coords);
        match p.next() {
            Some(Lexed { tok: Tok::Comma, .. }) => continue,
            None => break,
            _ => return Err(p.err("expected `,` between factors")),
        }
    }
    if factors.len() != dims.len() {
        return Err(Error::SpaceMismatch(format!(
            "point has {} factors, space has {}",
            factors.len(),
            dims.len()
        )));
    }
    for (i, (coords, dim)) in factors.iter().zip(dims).enumerate() {
        if coords.len() != dim + 1 {
            let _ = i;
            return Err(Error::WrongArity { expected: dim + 1, found: coords.len() });
        }
    }
    MultiPoint::from_ratfuncs(field, factors)
}

/// Parse a polynomial in t (no coordinate variables, no denominators).
pub fn parse_poly(text: &str, field: BaseField) -> Result<Poly> {
    let ctx = VarContext::t_only(field);
    let ast = parse_expr(text, &ctx)?;
    let r = eval_ratfunc(&ast, field)?;
    if !r.is_polynomial() {
        return Err(Error::SyntaxError {
            line: 1,
            col: 1,
            msg: "expected a polynomial in t".into(),
        });
    }
    let inv = r.denominator().leading_coeff().inv()?;
    Ok(r.numerator().mul_scalar(&inv))
}

/// Parse a cycle literal: a binary form in (y0, y1) over k[t].
pub fn parse_cycle(text: &str, field: BaseField) -> Result<ZeroCycle> {
    let ctx = VarContext::for_correspondence(field);
    let ast = parse_expr(text, &ctx)?;
    let exp = expand(&ast, field, 4, &|factor, index| 2 * factor + index)?;
    if exp.is_zero() {
        return Err(Error::ZeroForm);
    }
    let mut deg = None;
    for key in exp.terms.keys() {
        if key[0] != 0 || key[1] != 0 {
            return Err(Error::InhomogeneousForm(
                "cycle forms use only y0, y1".into(),
            ));
        }
        let d = key[2] + key[3];
        if *deg.get_or_insert(d) != d {
            return Err(Error::InhomogeneousForm("cycle form must be homogeneous".into()));
        }
    }
    let deg = deg.unwrap() as usize;
    let mut coeffs = vec![Poly::zero(field); deg + 1];
    for (key, poly) in &exp.terms {
        coeffs[key[2] as usize] = poly.clone();
    }
    ZeroCycle::new(BinaryForm::new(VarPair::Y, deg, coeffs))
}
