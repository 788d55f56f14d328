//! A complete bounded-height census over F2(t): classify every point of
//! height at most 2 under x -> x^2 + t, check that canonical height zero
//! means preperiodic, and compute the exact chain bound.

use heightforge::algebra::BaseField;
use heightforge::canheight::TateOptions;
use heightforge::dynparse::load_dynamics;
use heightforge::northcott::{enumerate_points, northcott_verify, OrbitOptions};

fn main() -> heightforge::Result<()> {
    let f2 = BaseField::prime(2)?;
    let dyn_ = load_dynamics("base: F2\nspace: P1\nout1: (x0^2 + t*x1^2, x1^2)\n")?;

    let pts = enumerate_points(f2, &[1], &[2], 1_000_000)?;
    println!("points of P1(F2(t)) with h <= 2: {}", pts.len());

    let report = northcott_verify(
        &dyn_,
        &[2],
        1_000_000,
        &OrbitOptions::default(),
        &TateOptions::for_field(f2),
    )?;
    println!(
        "preperiodic: {}, certified unbounded: {}, unknown: {}",
        report.preperiodic, report.unbounded, report.unknown
    );
    println!(
        "hhat-zero locus equals the preperiodic locus: {}",
        report.biconditional_ok
    );
    println!("chain bound n(h <= 2) = {}", report.chain.n);
    for w in &report.chain.witnesses {
        println!("  longest-chain witness: {}", w);
    }
    Ok(())
}
