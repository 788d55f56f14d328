//! Orbit verdicts: exact revisits prove preperiodicity, strictly positive
//! canonical-height enclosures certify unbounded orbits, and anything
//! undecided stays Unknown.

use heightforge::algebra::BaseField;
use heightforge::canheight::{CanonicalHeightEngine, TateOptions};
use heightforge::dynparse::{load_dynamics, parse_point, DynSystem};
use heightforge::northcott::{orbit_analyze, OrbitOptions};

fn main() -> heightforge::Result<()> {
    let f3 = BaseField::prime(3)?;
    let dyn_ = load_dynamics("base: F3\nspace: P1\nout1: (x0^2 + t*x1^2, x1^2)\n")?;
    let m = match &dyn_ {
        DynSystem::Morphism(m) => m,
        _ => unreachable!(),
    };
    let opts = TateOptions::for_field(f3);
    let engine = CanonicalHeightEngine::new(&dyn_, &opts.kappa_width)?;

    for text in ["[1:0]", "[0:1]", "[2:1]", "[t:1]", "[t^2 + 1:t]"] {
        let p = parse_point(text, f3, &[1])?;
        let verdict =
            orbit_analyze(m, Some(&engine), &p, &OrbitOptions::default(), &opts)?;
        println!("{:<12} -> {:?}", text, verdict);
    }
    Ok(())
}
