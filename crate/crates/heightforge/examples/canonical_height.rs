//! The scalar canonical height by exact Tate telescoping: iterate, divide
//! by kappa^m, and watch the sequence freeze.

use num_rational::BigRational;
use num_traits::One;

use heightforge::algebra::BaseField;
use heightforge::canheight::{canonical_height_scalar, DynState, OrbitCache, TateOptions};
use heightforge::dynparse::{load_dynamics, parse_point};

fn main() -> heightforge::Result<()> {
    let dyn_ = load_dynamics("base: Q\nspace: P1\nout1: (x0^2 + t*x1^2, x1^2)\n")?;
    let a = DynState::Point(parse_point("[t:1]", BaseField::Rationals, &[1])?);

    // the orbit heights double exactly: 1, 2, 4, 8, ...
    let mut cache = OrbitCache::new(&dyn_, &a)?;
    print!("orbit heights:");
    for m in 0..=5 {
        let h = cache.get(m)?.height_vec();
        print!(" {}", h[0]);
    }
    println!();

    let opts = TateOptions::for_field(BaseField::Rationals);
    let cert = canonical_height_scalar(&dyn_, &a, &[BigRational::one()], &opts)?;
    println!(
        "hhat = [{}, {}]  rigor = {}  iterations = {}",
        cert.value[0].lo, cert.value[0].hi, cert.rigor, cert.iterations
    );

    // a point with a height defect: hhat picks up the drift exactly
    let b = DynState::Point(parse_point("[1:t]", BaseField::Rationals, &[1])?);
    let cert = canonical_height_scalar(&dyn_, &b, &[BigRational::one()], &opts)?;
    println!(
        "hhat((1:t)) = {}  (Weil height was {})",
        cert.value[0].lo,
        match &b {
            DynState::Point(p) => p.height().total(),
            _ => unreachable!(),
        }
    );
    Ok(())
}
