//! The orbit degree sequence d_m is linearly recurrent, its generating
//! series is rational, and the normalized limit recovers the canonical
//! height as an algebraic number.

use num_rational::BigRational;
use num_traits::One;

use heightforge::algebra::BaseField;
use heightforge::canheight::DynState;
use heightforge::dynparse::{load_dynamics, parse_point};
use heightforge::series::{
    candidate_check, d_sequence, expand_generating_function, find_recurrence, LimitValue,
};

fn main() -> heightforge::Result<()> {
    let dyn_ = load_dynamics("base: Q\nspace: P1\nout1: (x0^2 + t*x1^2, x1^2)\n")?;
    let a = DynState::Point(parse_point("[t:1]", BaseField::Rationals, &[1])?);

    let seq = d_sequence(&dyn_, &a, &[BigRational::one()], 12)?;
    let rendered: Vec<String> = seq.terms.iter().map(|d| d.to_string()).collect();
    println!("d_m = {}", rendered.join(", "));

    // the extended candidate charPoly(S^t)(x - 1) annihilates the sequence
    let cand = candidate_check(&seq, &dyn_);
    println!("candidate recurrence of order {} holds: {}", cand.order, cand.holds);

    let rep = find_recurrence(&seq, 3)?;
    println!(
        "minimal recurrence: order {}, coefficients {:?}, transient {}",
        rep.order,
        rep.coefficients.iter().map(|c| c.to_string()).collect::<Vec<_>>(),
        rep.transient
    );
    println!(
        "generating function: ({:?}) / ({:?})   [coefficient lists in z]",
        rep.gf_numerator, rep.gf_denominator
    );
    let back = expand_generating_function(&rep.gf_numerator, &rep.gf_denominator, 13);
    println!("reconstruction matches: {}", back == seq.terms);
    match rep.limit.unwrap() {
        LimitValue::Exact { root, value } => {
            println!("lim d_m / {}^m = {} exactly", root, value)
        }
        LimitValue::Enclosure { root_lo, root_hi, value_lo, value_hi } => println!(
            "lim d_m / root^m with root in [{}, {}], value in [{}, {}]",
            root_lo, root_hi, value_lo, value_hi
        ),
    }
    Ok(())
}
