//! Weil heights of points over k(t): parsing, coprime normal form, and the
//! max-degree height on products of projective spaces.

use heightforge::algebra::BaseField;
use heightforge::dynparse::parse_point;

fn main() -> heightforge::Result<()> {
    let q = BaseField::Rationals;

    // the height of a point with coprime polynomial coordinates is the
    // maximal coordinate degree
    let p = parse_point("[t : 1]", q, &[1])?;
    println!("{}  ->  h = {:?}", p, p.height().per_factor());

    // rational-function coordinates are cleared and reduced first
    let p = parse_point("[t/(t+1) : 1]", q, &[1])?;
    println!("[t/(t+1) : 1] normalizes to {}  ->  h = {:?}", p, p.height().per_factor());

    // common factors disappear: (t^2 + t : t^2) = (t + 1 : t)
    let p = parse_point("[t^2 + t : t^2]", q, &[1])?;
    println!("[t^2 + t : t^2] normalizes to {}  ->  h = {:?}", p, p.height().per_factor());

    // products of P1 carry one height per factor
    let p = parse_point("[t^2 + t : 1],[1 : t^3]", q, &[1, 1])?;
    println!("{}  ->  h = {:?}", p, p.height().per_factor());

    // the same works over a prime field
    let f5 = BaseField::prime(5)?;
    let p = parse_point("[t^2 + 4 : 2*t]", f5, &[1])?;
    println!("over F5(t): {}  ->  h = {:?}", p, p.height().per_factor());

    // canonical representatives make equality decidable
    let a = parse_point("[t^2 + 1 : t]", q, &[1])?;
    let b = parse_point("[3*t^2 + 3 : 3*t]", q, &[1])?;
    println!("equal after rescaling: {}", a == b);
    Ok(())
}
