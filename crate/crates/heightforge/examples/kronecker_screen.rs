//! Kronecker's screen for integer NS actions: either the spectrum is all
//! zeros and roots of unity (the characteristic polynomial is a product of
//! x-powers and cyclotomics), or some eigenvalue expands. No numerics are
//! involved; the classification is exact division by cyclotomics.

use heightforge::nslattice::{kronecker_classify, power_boundedness_oracle};
use heightforge::rng::SplitMix64;

fn main() {
    let samples: Vec<(&str, Vec<Vec<i64>>)> = vec![
        ("rotation by i", vec![vec![0, -1], vec![1, 0]]),
        ("unipotent shear", vec![vec![1, 1], vec![0, 1]]),
        ("golden companion", vec![vec![0, 1], vec![1, 1]]),
        ("nilpotent block", vec![vec![0, 1], vec![0, 0]]),
        ("swap action", vec![vec![0, 3], vec![2, 0]]),
    ];
    for (name, m) in &samples {
        let r = kronecker_classify(m);
        println!(
            "{:<18} -> {:?}, cyclotomic {:?}, nilpotent order {}",
            name, r.verdict, r.cyclotomic_factors, r.nilpotent_order
        );
    }

    // agreement with the independent power-boundedness oracle on a seeded
    // random family
    let mut rng = SplitMix64::new(42);
    let mut agree = 0;
    for _ in 0..20 {
        let m: Vec<Vec<i64>> =
            (0..4).map(|_| (0..4).map(|_| rng.int_in(-2, 2)).collect()).collect();
        let torsion = kronecker_classify(&m).verdict
            == heightforge::nslattice::KroneckerVerdict::AllTorsionOrNilpotent;
        if torsion == power_boundedness_oracle(&m, 200) {
            agree += 1;
        }
    }
    println!("power-boundedness oracle agreement: {}/20", agree);
}
