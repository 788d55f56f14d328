//! Base substitution t -> u(t) multiplies heights by deg(u), exactly, and
//! the same scaling law passes to canonical heights of pulled-back
//! dynamics.

use num_rational::BigRational;
use num_traits::One;

use heightforge::algebra::{BaseField, Poly};
use heightforge::canheight::{basechange_pullback, canonical_height_scalar, DynState, TateOptions};
use heightforge::dynparse::{load_dynamics, parse_point};
use heightforge::rng::{random_point, SplitMix64};

fn main() -> heightforge::Result<()> {
    let q = BaseField::Rationals;
    let u = Poly::from_int_coeffs(q, &[0, 0, 1]); // t^2

    // Weil-height level: exact scaling on a random sample
    let mut rng = SplitMix64::new(1);
    let mut ok = 0;
    for _ in 0..100 {
        let a = random_point(&mut rng, q, &[1], 4);
        let au = a.substitute(&u)?;
        if au.height().total() == 2 * a.height().total() {
            ok += 1;
        }
    }
    println!("height(a o u) = deg(u) * height(a): {}/100 exact", ok);

    // canonical-height level for x^2 + t under t -> t^2
    let dyn_ = load_dynamics("base: Q\nspace: P1\nout1: (x0^2 + t*x1^2, x1^2)\n")?;
    let pulled = basechange_pullback(&dyn_, &u)?;
    let a = parse_point("[t:1]", q, &[1])?;
    let au = a.substitute(&u)?;
    let opts = TateOptions::for_field(q);
    let h = canonical_height_scalar(&dyn_, &DynState::Point(a), &[BigRational::one()], &opts)?;
    let hu =
        canonical_height_scalar(&pulled, &DynState::Point(au), &[BigRational::one()], &opts)?;
    println!(
        "hhat((t:1)) = {} under x^2 + t;  hhat((t^2:1)) = {} under the pullback",
        h.value[0].lo, hu.value[0].lo
    );
    Ok(())
}
