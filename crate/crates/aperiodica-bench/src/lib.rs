//! Shared fixtures for the criterion benchmarks.

use aperiodica::generators::CombGenerator;
use aperiodica::geometry::BoxRegion;
use aperiodica::measures::WeightedComb;

pub fn fibonacci_comb(len: f64) -> WeightedComb {
    CombGenerator::fibonacci(1)
        .produce(&BoxRegion::line(0.0, len))
        .expect("fibonacci comb")
}

pub fn lattice_comb(len: f64) -> WeightedComb {
    CombGenerator::unit_lattice(1)
        .produce(&BoxRegion::line(0.0, len))
        .expect("lattice comb")
}

pub fn thue_morse_comb(len: f64) -> WeightedComb {
    CombGenerator::thue_morse(1)
        .produce(&BoxRegion::line(0.0, len))
        .expect("thue-morse comb")
}
