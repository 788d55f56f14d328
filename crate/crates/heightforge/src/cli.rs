//! Command-line surface: one verb per pipeline stage, machine-readable
//! tab-separated records before any prose, deterministic output.
//!
//! Exit codes: 0 success, 2 validation error, 3 resource abort. Every
//! error path emits a single `error<TAB>code<TAB>message` record.

use std::collections::BTreeMap;
use std::sync::Once;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::canheight::{
    basechange_pullback, boundedness_report, CanonicalHeightEngine, DynState, Enclosure,
    TateOptions,
};
use crate::correspondence::{drift_report, ZeroCycle};
use crate::dynparse::{load_dynamics, parse_cycle, parse_point, parse_poly, DynSystem};
use crate::error::{Error, Result};
use crate::northcott::{
    enumerate_points, northcott_verify, orbit_analyze, OrbitOptions, OrbitVerdict,
    DEFAULT_ENUMERATION_LIMIT,
};
use crate::nslattice::{kronecker_classify, ns_action, poly_in_x, FactorClass, Kappa};
use crate::series::{candidate_check, d_sequence, find_recurrence, LimitValue};

/// Result of one CLI invocation.
#[derive(Debug, Clone)]
pub struct CommandResult {
    pub exit_code: i32,
    pub stdout: Vec<String>,
}

impl CommandResult {
    pub fn text(&self) -> String {
        let mut s = self.stdout.join("\n");
        if !s.is_empty() {
            s.push('\n');
        }
        s
    }
}

static THREAD_INIT: Once = Once::new();

fn init_threads() -> Result<()> {
    let mut result = Ok(());
    if let Ok(v) = std::env::var("HEIGHTFORGE_THREADS") {
        match v.parse::<usize>() {
            Ok(n) if n >= 1 => {
                THREAD_INIT.call_once(|| {
                    let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
                });
            }
            _ => {
                result = Err(Error::Usage(format!(
                    "HEIGHTFORGE_THREADS must be a positive integer, got `{}`",
                    v
                )))
            }
        }
    }
    result
}

/// Dispatch a full argv (program name excluded).
pub fn run(argv: &[String]) -> CommandResult {
    match run_inner(argv) {
        Ok(lines) => CommandResult { exit_code: 0, stdout: lines },
        Err(e) => CommandResult {
            exit_code: e.exit_code(),
            stdout: vec![format!("error\t{}\t{}", e.code(), e)],
        },
    }
}

const USAGE: &str = "usage: heightforge <height|ns|classify|canheight|orbit|pushforward|series|enumerate|northcott|basechange> [--dyn FILE] [--point STR] [--cycle STR] [--tol R] [--max-iter N] [--terms N] [--height-max N] [--subst POLY] [--seed N]";

struct Flags {
    map: BTreeMap<String, String>,
}

impl Flags {
    fn parse(args: &[String]) -> Result<Flags> {
        let known = [
            "--dyn", "--point", "--cycle", "--tol", "--max-iter", "--terms", "--height-max",
            "--subst", "--seed",
        ];
        let mut map = BTreeMap::new();
        let mut i = 0;
        while i < args.len() {
            let key = &args[i];
            if !known.contains(&key.as_str()) {
                return Err(Error::Usage(format!("unknown flag `{}`; {}", key, USAGE)));
            }
            let val = args
                .get(i + 1)
                .ok_or_else(|| Error::Usage(format!("flag {} needs a value", key)))?;
            map.insert(key.trim_start_matches("--").to_string(), val.clone());
            i += 2;
        }
        Ok(Flags { map })
    }

    fn get(&self, key: &str) -> Option<&str> {
        self.map.get(key).map(|s| s.as_str())
    }

    fn required(&self, key: &str) -> Result<&str> {
        self.get(key)
            .ok_or_else(|| Error::Usage(format!("missing required flag --{}", key)))
    }

    fn usize_or(&self, key: &str, default: usize) -> Result<usize> {
        match self.get(key) {
            None => Ok(default),
            Some(v) => v
                .parse()
                .map_err(|_| Error::Usage(format!("--{} expects an integer", key))),
        }
    }

    fn u64_or(&self, key: &str, default: u64) -> Result<u64> {
        match self.get(key) {
            None => Ok(default),
            Some(v) => v
                .parse()
                .map_err(|_| Error::Usage(format!("--{} expects an integer", key))),
        }
    }

    fn tol_or_default(&self) -> Result<BigRational> {
        match self.get("tol") {
            None => Ok(BigRational::new(BigInt::one(), BigInt::from(1_000_000u64))),
            Some(v) => parse_tolerance(v),
        }
    }
}

/// Tolerances accept `p/q`, integers, and decimal/scientific forms like
/// `1e-6` or `0.02`.
fn parse_tolerance(v: &str) -> Result<BigRational> {
    let bad = || Error::Usage(format!("cannot parse tolerance `{}`", v));
    if let Some((m, e)) = v.split_once(['e', 'E']) {
        let mant = parse_tolerance(m)?;
        let exp: i32 = e.parse().map_err(|_| bad())?;
        let base = BigRational::from_integer(10.into());
        let mut scale = BigRational::one();
        for _ in 0..exp.abs() {
            scale *= &base;
        }
        return Ok(if exp >= 0 { mant * scale } else { mant / scale });
    }
    if let Some((a, b)) = v.split_once('/') {
        let n: BigInt = a.parse().map_err(|_| bad())?;
        let d: BigInt = b.parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(bad());
        }
        return Ok(BigRational::new(n, d));
    }
    if let Some((i, f)) = v.split_once('.') {
        let int: BigInt = if i.is_empty() || i == "-" {
            BigInt::zero()
        } else {
            i.parse().map_err(|_| bad())?
        };
        let neg = i.starts_with('-');
        let frac_digits = f.len() as u32;
        let frac: BigInt = if f.is_empty() { BigInt::zero() } else { f.parse().map_err(|_| bad())? };
        let den = BigInt::from(10u32).pow(frac_digits);
        let mag = int.magnitude().clone() * den.magnitude().clone() + frac.magnitude().clone();
        let mut r = BigRational::new(BigInt::from_biguint(num_bigint::Sign::Plus, mag), den);
        if neg {
            r = -r;
        }
        return Ok(r);
    }
    let n: BigInt = v.parse().map_err(|_| bad())?;
    Ok(BigRational::from_integer(n))
}

fn run_inner(argv: &[String]) -> Result<Vec<String>> {
    init_threads()?;
    let cmd = argv.first().ok_or_else(|| Error::Usage(USAGE.into()))?;
    let flags = Flags::parse(&argv[1..])?;
    match cmd.as_str() {
        "height" => cmd_height(&flags),
        "ns" => cmd_ns(&flags),
        "classify" => cmd_classify(&flags),
        "canheight" => cmd_canheight(&flags),
        "orbit" => cmd_orbit(&flags),
        "pushforward" => cmd_pushforward(&flags),
        "series" => cmd_series(&flags),
        "enumerate" => cmd_enumerate(&flags),
        "northcott" => cmd_northcott(&flags),
        "basechange" => cmd_basechange(&flags),
        other => Err(Error::Usage(format!("unknown subcommand `{}`; {}", other, USAGE))),
    }
}

fn load_dyn(flags: &Flags) -> Result<DynSystem> {
    let path = flags.required("dyn")?;
    let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {}", path, e)))?;
    load_dynamics(&text)
}

fn point_state(flags: &Flags, dyn_: &DynSystem) -> Result<DynState> {
    if let Some(text) = flags.get("point") {
        let p = parse_point(text, dyn_.field(), &dyn_.space())?;
        return Ok(DynState::Point(p));
    }
    if let Some(text) = flags.get("cycle") {
        let c = parse_cycle(text, dyn_.field())?;
        return Ok(DynState::Cycle(c));
    }
    Err(Error::Usage("need --point or --cycle".into()))
}

// -- output formatting -------------------------------------------------------

fn rat_str(x: &BigRational) -> String {
    format!("{}", x)
}

/// Fixed-point decimal with `digits` fractional digits, exact rounding
/// toward zero, trailing zeros trimmed.
fn decimal_str(x: &BigRational, digits: u32) -> String {
    let neg = x.is_negative();
    let ax = x.abs();
    let scale = BigInt::from(10u32).pow(digits);
    let scaled = (&ax * BigRational::from_integer(scale.clone())).to_integer();
    let int = &scaled / &scale;
    let frac = &scaled % &scale;
    let mut f = format!("{:0width$}", frac, width = digits as usize);
    while f.ends_with('0') {
        f.pop();
    }
    let mut s = String::new();
    if neg {
        s.push('-');
    }
    s.push_str(&int.to_string());
    if !f.is_empty() {
        s.push('.');
        s.push_str(&f);
    }
    s
}

/// Upper bound on the radius as a one-significant-digit power of ten.
fn radius_str(r: &BigRational) -> String {
    if r.is_zero() {
        return "0".into();
    }
    if *r >= BigRational::one() {
        return decimal_str(r, 3);
    }
    // smallest k with r <= 10^-k ... largest such k
    let mut k = 0i32;
    let tenth = BigRational::new(1.into(), 10.into());
    let mut bound = BigRational::one();
    while &bound * &tenth >= *r && k < 64 {
        bound *= &tenth;
        k += 1;
    }
    format!("1e-{}", k)
}

fn enclosure_str(e: &Enclosure) -> String {
    if e.lo == e.hi {
        rat_str(&e.lo)
    } else {
        format!("{}±{}", decimal_str(&e.mid(), 15), radius_str(&e.radius()))
    }
}

fn kappa_str(k: &Kappa) -> String {
    match k {
        Kappa::Exact(v) => format!("{}\texact", rat_str(v)),
        Kappa::Interval { lo, hi } => {
            let mid = (lo + hi) / BigRational::from_integer(2.into());
            let rad = (hi - lo) / BigRational::from_integer(2.into());
            format!("{}±{}\tinterval", decimal_str(&mid, 15), radius_str(&rad))
        }
    }
}

fn int_matrix_str(m: &[Vec<i64>]) -> String {
    let rows: Vec<String> = m
        .iter()
        .map(|r| {
            let cells: Vec<String> = r.iter().map(|x| x.to_string()).collect();
            format!("[{}]", cells.join(","))
        })
        .collect();
    format!("[{}]", rows.join(","))
}

fn int_poly_str(p: &[BigInt], var: &str) -> String {
    if p.iter().all(|c| c.is_zero()) {
        return "0".into();
    }
    let mut parts: Vec<String> = Vec::new();
    for (i, c) in p.iter().enumerate().rev() {
        if c.is_zero() {
            continue;
        }
        let mono = match i {
            0 => String::new(),
            1 => var.to_string(),
            _ => format!("{}^{}", var, i),
        };
        let lead = parts.is_empty();
        let mag = c.abs();
        let coeff = if mag.is_one() && i > 0 {
            if lead && c.is_negative() {
                "-1*".into()
            } else {
                String::new()
            }
        } else if lead && c.is_negative() {
            format!("-{}{}", mag, if i > 0 { "*" } else { "" })
        } else {
            format!("{}{}", mag, if i > 0 { "*" } else { "" })
        };
        let term = format!("{}{}", coeff, mono);
        if lead {
            parts.push(term);
        } else if c.is_negative() {
            parts.push(format!(" - {}", term));
        } else {
            parts.push(format!(" + {}", term));
        }
    }
    parts.concat()
}

// -- subcommands ---------------------------------------------------------------

fn cmd_height(flags: &Flags) -> Result<Vec<String>> {
    let dyn_ = load_dyn(flags)?;
    match point_state(flags, &dyn_)? {
        DynState::Point(p) => {
            let h = p.height();
            let cells: Vec<String> =
                h.per_factor().iter().map(|x| x.to_string()).collect();
            Ok(vec![format!("h\t{}", cells.join(","))])
        }
        DynState::Cycle(c) => Ok(vec![
            format!("h\t{}", rat_str(&c.height())),
            format!("cycle_degree\t{}", c.cycle_degree()),
        ]),
    }
}

fn mode_line(dyn_: &DynSystem, out: &mut Vec<String>) {
    if let DynSystem::Morphism(m) = dyn_ {
        if !m.is_certified() {
            out.push("mode\trational-map".to_string());
        }
    }
}

fn cmd_ns(flags: &Flags) -> Result<Vec<String>> {
    let dyn_ = load_dyn(flags)?;
    let action = ns_action(&dyn_);
    let mut out = vec![
        format!("st\t{}", int_matrix_str(&action.st)),
        format!("d\t{}", action.d),
    ];
    mode_line(&dyn_, &mut out);
    let split = crate::nslattice::spectral_split(&action, &crate::nslattice::default_kappa_width())?;
    out.push(format!("charpoly\t{}", poly_in_x(&split.char_poly)));
    for (q, mult, class) in &split.factors {
        let cls = match class {
            FactorClass::Small => "SMALL",
            FactorClass::Large => "LARGE",
        };
        out.push(format!("factor\t{}\t{}\t{}", poly_in_x(q), mult, cls));
    }
    out.push(format!("eplus_dim\t{}", split.dim_eplus()));
    out.push(format!("eminus_dim\t{}", split.dim_eminus()));
    match &split.kappa {
        Some(k) => out.push(format!("kappa\t{}", kappa_str(k))),
        None => out.push("kappa\tnone".into()),
    }
    let kr = kronecker_classify(&action.st);
    out.push(format!("kronecker\t{:?}", kr.verdict));
    Ok(out)
}

fn cmd_classify(flags: &Flags) -> Result<Vec<String>> {
    let dyn_ = load_dyn(flags)?;
    let action = ns_action(&dyn_);
    let kr = kronecker_classify(&action.st);
    let mut out = vec![format!("verdict\t{:?}", kr.verdict)];
    for (n, mult) in &kr.cyclotomic_factors {
        out.push(format!("cyclotomic\t{}\t{}", n, mult));
    }
    out.push(format!("nilpotent_order\t{}", kr.nilpotent_order));
    Ok(out)
}

fn cmd_canheight(flags: &Flags) -> Result<Vec<String>> {
    let dyn_ = load_dyn(flags)?;
    let start = point_state(flags, &dyn_)?;
    let mut opts = TateOptions::for_field(dyn_.field()).with_tol(flags.tol_or_default()?);
    let budget = flags.usize_or("max-iter", opts.max_iter)?;
    opts = opts.with_max_iter(budget);
    let engine = CanonicalHeightEngine::new(&dyn_, &opts.kappa_width)?;
    let cert = engine.vector_height(&start, &opts)?;
    let mut out = Vec::new();
    mode_line(&dyn_, &mut out);
    if cert.value.len() == 1 {
        out.push(format!("hhat\t{}\t{}", enclosure_str(&cert.value[0]), cert.rigor));
    } else {
        for (j, e) in cert.value.iter().enumerate() {
            out.push(format!("hhat{}\t{}\t{}", j + 1, enclosure_str(e), cert.rigor));
        }
    }
    out.push(format!("iters\t{}", cert.iterations));
    out.push(format!("radius\t{}", radius_str(&cert.error_radius)));
    out.push(format!("kappa\t{}", kappa_str(engine.kappa())));
    if let Some(seed) = flags.get("seed") {
        let seed: u64 =
            seed.parse().map_err(|_| Error::Usage("--seed expects an integer".into()))?;
        let cap = flags.u64_or("height-max", 3)?;
        let rep = boundedness_report(&dyn_, 200, cap, seed, &opts)?;
        out.push(format!("bound_samples\t{}", rep.samples));
        out.push(format!("bound_max\t{}", rat_str(&rep.empirical_max)));
        match &rep.drift_bound {
            Some(b) => out.push(format!("bound_drift\t{}", rat_str(b))),
            None => out.push("bound_drift\tnone".into()),
        }
    }
    Ok(out)
}

fn cmd_orbit(flags: &Flags) -> Result<Vec<String>> {
    let dyn_ = load_dyn(flags)?;
    let m = match &dyn_ {
        DynSystem::Morphism(m) => m,
        _ => return Err(Error::MixedBlockUnsupported("orbit analysis runs on morphisms".into())),
    };
    let p = match point_state(flags, &dyn_)? {
        DynState::Point(p) => p,
        _ => return Err(Error::Usage("orbit needs --point".into())),
    };
    let opts = TateOptions::for_field(dyn_.field()).with_tol(flags.tol_or_default()?);
    let orbit_opts = OrbitOptions {
        max_steps: flags.usize_or("max-iter", OrbitOptions::default().max_steps)?,
        height_cap: flags.u64_or("height-max", OrbitOptions::default().height_cap)?,
    };
    let engine = CanonicalHeightEngine::new(&dyn_, &opts.kappa_width).ok();
    let verdict = orbit_analyze(m, engine.as_ref(), &p, &orbit_opts, &opts)?;
    let mut prefix = Vec::new();
    mode_line(&dyn_, &mut prefix);
    let mut out = prefix;
    match verdict {
        OrbitVerdict::Preperiodic { tail, cycle } => {
            out.push("verdict\tpreperiodic".to_string());
            out.push(format!("tail\t{}", tail));
            out.push(format!("cycle\t{}", cycle));
        }
        OrbitVerdict::UnboundedCertified { hhat_lower } => {
            out.push("verdict\tunbounded".to_string());
            out.push(format!("hhat_lower\t{}", rat_str(&hhat_lower)));
        }
        OrbitVerdict::Unknown { steps_run, max_height_seen } => {
            out.push("verdict\tunknown".to_string());
            out.push(format!("steps\t{}", steps_run));
            out.push(format!("max_height\t{}", max_height_seen));
        }
    }
    Ok(out)
}

fn cmd_pushforward(flags: &Flags) -> Result<Vec<String>> {
    let dyn_ = load_dyn(flags)?;
    let s = match &dyn_ {
        DynSystem::Correspondence(s) => s,
        _ => {
            return Err(Error::MixedBlockUnsupported(
                "pushforward runs on correspondences".into(),
            ))
        }
    };
    let c = match point_state(flags, &dyn_)? {
        DynState::Cycle(c) => c,
        DynState::Point(p) => ZeroCycle::from_point(&p)?,
    };
    let before = c.cycle_degree();
    let (next, content) = s.pushforward(&c)?;
    let mut out = vec![
        format!("cycle\t{}", next),
        format!("degree\t{}", next.cycle_degree()),
        format!("height\t{}", rat_str(&next.height())),
        format!("content\t{}", content),
        format!(
            "degree_law\t{}",
            if next.cycle_degree() == s.d() * before { "ok" } else { "violated" }
        ),
    ];
    if let Some(seed) = flags.get("seed") {
        let seed: u64 =
            seed.parse().map_err(|_| Error::Usage("--seed expects an integer".into()))?;
        let cap = flags.u64_or("height-max", 4)?;
        let rep = drift_report(s, 200, 3, cap, seed)?;
        out.push(format!("drift_samples\t{}", rep.samples));
        out.push(format!("drift_max\t{}", rat_str(&rep.empirical_max)));
        out.push(format!("drift_bound\t{}", rat_str(&rep.a_priori_bound)));
    }
    Ok(out)
}

fn cmd_series(flags: &Flags) -> Result<Vec<String>> {
    let dyn_ = load_dyn(flags)?;
    let start = point_state(flags, &dyn_)?;
    let terms = flags.usize_or("terms", 13)?;
    if terms == 0 {
        return Err(Error::Usage("--terms must be at least 1".into()));
    }
    let rank = ns_action(&dyn_).rank();
    let e: Vec<BigRational> = (0..rank).map(|_| BigRational::one()).collect();
    let seq = d_sequence(&dyn_, &start, &e, terms - 1)?;
    let cells: Vec<String> = seq.terms.iter().map(rat_str).collect();
    let mut out = vec![format!("d\t{}", cells.join(","))];
    let cand = candidate_check(&seq, &dyn_);
    match cand.first_violation {
        None => out.push(format!("candidate\tok\torder\t{}", cand.order)),
        Some(m) => out.push(format!("candidate\tviolated\tfirst_m\t{}", m)),
    }
    match find_recurrence(&seq, rank + 2) {
        Ok(rep) => {
            out.push(format!("rec_order\t{}", rep.order));
            let cc: Vec<String> = rep.coefficients.iter().map(rat_str).collect();
            out.push(format!("rec_coeffs\t{}", if cc.is_empty() { "-".into() } else { cc.join(",") }));
            out.push(format!("transient\t{}", rep.transient));
            out.push(format!("gf_num\t{}", int_poly_str(&rep.gf_numerator, "z")));
            out.push(format!("gf_den\t{}", int_poly_str(&rep.gf_denominator, "z")));
            match rep.limit {
                Some(LimitValue::Exact { root, value }) => {
                    out.push(format!("limit_root\t{}\texact", rat_str(&root)));
                    out.push(format!("limit\t{}\texact", rat_str(&value)));
                }
                Some(LimitValue::Enclosure { root_lo, root_hi, value_lo, value_hi }) => {
                    let rm = (&root_lo + &root_hi) / BigRational::from_integer(2.into());
                    let rr = (&root_hi - &root_lo) / BigRational::from_integer(2.into());
                    let vm = (&value_lo + &value_hi) / BigRational::from_integer(2.into());
                    let vr = (&value_hi - &value_lo) / BigRational::from_integer(2.into());
                    out.push(format!(
                        "limit_root\t{}±{}\tinterval",
                        decimal_str(&rm, 12),
                        radius_str(&rr)
                    ));
                    out.push(format!(
                        "limit\t{}±{}\tinterval",
                        decimal_str(&vm, 12),
                        radius_str(&vr)
                    ));
                }
                None => out.push("limit\tundefined".into()),
            }
        }
        Err(Error::NoRecurrenceFound(ord)) => {
            out.push(format!("rec_order\tnone_up_to_{}", ord));
        }
        Err(e) => return Err(e),
    }
    Ok(out)
}

fn cmd_enumerate(flags: &Flags) -> Result<Vec<String>> {
    let dyn_ = load_dyn(flags)?;
    let b = flags.u64_or("height-max", 1)?;
    let dims = dyn_.space();
    let caps = vec![b; dims.len()];
    let pts = enumerate_points(dyn_.field(), &dims, &caps, DEFAULT_ENUMERATION_LIMIT)?;
    let mut out = vec![format!("count\t{}", pts.len())];
    for p in &pts {
        out.push(format!("point\t{}", p));
    }
    Ok(out)
}

fn cmd_northcott(flags: &Flags) -> Result<Vec<String>> {
    let dyn_ = load_dyn(flags)?;
    let b = flags.u64_or("height-max", 1)?;
    let dims = dyn_.space();
    let caps = vec![b; dims.len()];
    let opts = TateOptions::for_field(dyn_.field()).with_tol(flags.tol_or_default()?);
    let rep = northcott_verify(
        &dyn_,
        &caps,
        DEFAULT_ENUMERATION_LIMIT,
        &OrbitOptions::default(),
        &opts,
    )?;
    let mut out = vec![
        format!("total\t{}", rep.total_points),
        format!("preperiodic\t{}", rep.preperiodic),
        format!("unbounded\t{}", rep.unbounded),
        format!("unknown\t{}", rep.unknown),
        format!("biconditional\t{}", if rep.biconditional_ok { "ok" } else { "violated" }),
        format!("chain_n\t{}", rep.chain.n),
    ];
    for w in &rep.chain.witnesses {
        out.push(format!("witness\t{}", w));
    }
    for c in rep.counterexamples.iter().take(5) {
        out.push(format!("counterexample\t{}", c));
    }
    Ok(out)
}

fn cmd_basechange(flags: &Flags) -> Result<Vec<String>> {
    let dyn_ = load_dyn(flags)?;
    let u = parse_poly(flags.required("subst")?, dyn_.field())?;
    if u.degree() < 1 {
        return Err(Error::ConstantSubstitution);
    }
    let pulled = basechange_pullback(&dyn_, &u)?;
    let mut out = vec![format!("deg_u\t{}", u.degree())];
    if let Some(text) = flags.get("point") {
        let p = parse_point(text, dyn_.field(), &dyn_.space())?;
        let pu = p.substitute(&u)?;
        let h: u64 = p.height().total();
        let hu: u64 = pu.height().total();
        out.push(format!("h\t{}", h));
        out.push(format!("h_pullback\t{}", hu));
        out.push(format!(
            "scaling\t{}",
            if hu == h * u.degree() as u64 { "exact" } else { "violated" }
        ));
    }
    let rendered = match &pulled {
        DynSystem::Morphism(m) => format!("{}", m),
        DynSystem::Correspondence(c) => format!("{}", c),
    };
    for line in rendered.lines() {
        out.push(format!("dyn\t{}", line));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tolerance_forms() {
        assert_eq!(parse_tolerance("1/2").unwrap(), BigRational::new(1.into(), 2.into()));
        assert_eq!(
            parse_tolerance("1e-6").unwrap(),
            BigRational::new(1.into(), 1_000_000.into())
        );
        assert_eq!(
            parse_tolerance("0.02").unwrap(),
            BigRational::new(1.into(), 50.into())
        );
        assert_eq!(parse_tolerance("3").unwrap(), BigRational::from_integer(3.into()));
        assert!(parse_tolerance("abc").is_err());
    }

    #[test]
    fn decimal_rendering() {
        assert_eq!(decimal_str(&BigRational::new(3.into(), 2.into()), 6), "1.5");
        assert_eq!(decimal_str(&BigRational::new((-1).into(), 3.into()), 4), "-0.3333");
        assert_eq!(decimal_str(&BigRational::from_integer(7.into()), 4), "7");
    }

    #[test]
    fn radius_rendering() {
        assert_eq!(radius_str(&BigRational::zero()), "0");
        assert_eq!(radius_str(&BigRational::new(1.into(), 1_000_000.into())), "1e-6");
        // 3e-7 <= 1e-6, reported conservatively at 1e-6
        assert_eq!(radius_str(&BigRational::new(3.into(), 10_000_000.into())), "1e-6");
    }

    #[test]
    fn int_poly_rendering() {
        use num_bigint::BigInt;
        let p = [BigInt::from(1), BigInt::from(-2)];
        assert_eq!(int_poly_str(&p, "z"), "-2*z + 1");
        let q = [BigInt::from(0), BigInt::from(1)];
        assert_eq!(int_poly_str(&q, "z"), "z");
    }
}
