//! Vector-valued canonical heights: the value space is the dual of the
//! expanding part E+, and the functional equation
//! hhat(T a)(e) = hhat(a)(S* e) holds coordinate by coordinate.

use heightforge::algebra::BaseField;
use heightforge::canheight::{CanonicalHeightEngine, DynState, TateOptions};
use heightforge::dynparse::{load_dynamics, parse_point};
use heightforge::northcott::enumerate_points;

fn main() -> heightforge::Result<()> {
    let f3 = BaseField::prime(3)?;
    let dyn_ = load_dynamics("base: F3\nspace: P1xP1\nout1: (y0^2, y1^2)\nout2: (x0^3, x1^3)\n")?;
    let opts = TateOptions::for_field(f3).with_max_iter(10);
    let engine = CanonicalHeightEngine::new(&dyn_, &opts.kappa_width)?;
    println!(
        "dim E+ = {}, kappa in [{}, {}]",
        engine.dim(),
        engine.kappa().lo(),
        engine.kappa().hi()
    );

    let a = DynState::Point(parse_point("[t:1],[1:1]", f3, &[1, 1])?);
    let cert = engine.vector_height(&a, &opts)?;
    for (j, e) in cert.value.iter().enumerate() {
        println!("hhat(a)(e{}) = [{}, {}]  ({})", j + 1, e.lo, e.hi, cert.rigor);
    }
    let rep = engine.functional_equation(&a, &opts)?;
    println!(
        "functional-equation residual: {} (allowed {})",
        rep.max_residual, rep.allowed
    );

    // the residual stays within the certified radii across a sample
    let pts = enumerate_points(f3, &[1, 1], &[1, 1], 1_000_000)?;
    let mut worst = num_rational::BigRational::from_integer(0.into());
    for p in pts.iter().step_by(97) {
        let rep = engine.functional_equation(&DynState::Point(p.clone()), &opts)?;
        assert!(rep.ok);
        if rep.max_residual > worst {
            worst = rep.max_residual.clone();
        }
    }
    println!("worst residual over a height <= 1 sample: {}", worst);
    Ok(())
}
