//! Pushing 0-cycles through the correspondence y^2 = x^3: the first
//! projection has degree 2, the second degree 3, so cycles double in
//! degree while heights scale by 3/2.

use num_rational::BigRational;
use num_traits::One;

use heightforge::algebra::BaseField;
use heightforge::canheight::{canonical_height_scalar, DynState, TateOptions};
use heightforge::correspondence::ZeroCycle;
use heightforge::dynparse::{load_dynamics, parse_point, DynSystem};

fn main() -> heightforge::Result<()> {
    let dyn_ = load_dynamics("base: Q\nspace: P1\ncorr: y1^2*x0^3 - y0^2*x1^3\n")?;
    let s = match &dyn_ {
        DynSystem::Correspondence(s) => s,
        _ => unreachable!(),
    };
    println!("(d', d) = ({}, {}), multiplier S* = {}", s.d_prime(), s.d(), s.multiplier());

    let p = parse_point("[t:1]", BaseField::Rationals, &[1])?;
    let mut c = ZeroCycle::from_point(&p)?;
    for m in 0..=4 {
        println!("m = {}: deg = {:>2}, height = {:>6}, form = {}", m, c.cycle_degree(), c.height(), c);
        let (next, _content) = s.pushforward(&c)?;
        c = next;
    }

    let opts = TateOptions::for_field(BaseField::Rationals).with_max_iter(6);
    let cert = canonical_height_scalar(
        &dyn_,
        &DynState::Point(p),
        &[BigRational::one()],
        &opts,
    )?;
    println!("hhat((t:1)) = {}  rigor = {}", cert.value[0].lo, cert.rigor);
    Ok(())
}
