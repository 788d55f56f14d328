//! The pullback action on the Neron-Severi lattice and its exact
//! splitting into expanding and contracting parts.

use heightforge::dynparse::load_dynamics;
use heightforge::nslattice::{
    default_kappa_width, ns_action, poly_in_x, spectral_split, FactorClass, Kappa, NSAction,
};

fn main() -> heightforge::Result<()> {
    // the swap map (y^2, x^3) on P1 x P1 has S^t = [[0,3],[2,0]]
    let dyn_ = load_dynamics("base: Q\nspace: P1xP1\nout1: (y0^2, y1^2)\nout2: (x0^3, x1^3)\n")?;
    let action = ns_action(&dyn_);
    println!("S^t = {:?}, d = {}", action.st, action.d);

    let split = spectral_split(&action, &default_kappa_width())?;
    println!("charpoly = {}", poly_in_x(&split.char_poly));
    for (q, mult, class) in &split.factors {
        let c = match class {
            FactorClass::Small => "SMALL",
            FactorClass::Large => "LARGE",
        };
        println!("  factor {} (multiplicity {}): {}", poly_in_x(q), mult, c);
    }
    println!("dim E+ = {}, dim E- = {}", split.dim_eplus(), split.dim_eminus());
    match split.kappa.as_ref().unwrap() {
        Kappa::Exact(v) => println!("kappa = {} exactly", v),
        Kappa::Interval { lo, hi } => {
            println!("kappa in [{}, {}]", lo, hi);
            println!("  (an enclosure of sqrt 6, width < 1e-12)");
        }
    }

    // a correspondence acts by the rational scalar d'/d
    let dyn_ = load_dynamics("base: Q\nspace: P1\ncorr: y1^2*x0^3 - y0^2*x1^3\n")?;
    let action = ns_action(&dyn_);
    let split = spectral_split(&action, &default_kappa_width())?;
    println!("cusp correspondence: S* = 3/2, kappa = {:?}", split.kappa);

    // a mixed expanding/contracting irreducible factor is refused: the
    // golden-ratio companion matrix straddles the unit circle
    let golden = NSAction::new(vec![vec![0, 1], vec![1, 1]], 1);
    match spectral_split(&golden, &default_kappa_width()) {
        Err(e) => println!("companion(x^2 - x - 1): {}", e),
        Ok(_) => unreachable!(),
    }
    Ok(())
}
