//! Shared fixtures for the criterion benchmarks.

use netform::equilibrium::{construct_symmetric_equilibrium, SymmetricEquilibrium};
use netform::harness::InstanceFile;
use netform::{OpportunityDistribution, ParamPoint, Population, Rational};
use num_bigint::BigInt;

pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// A small two-group instance at `n_green + n_blue` nodes with one
/// recommendation per node.
pub fn small_instance(n_green: usize, n_blue: usize) -> InstanceFile {
    let text = format!(
        "n_green = {n_green}\nn_blue = {n_blue}\ngreen = 0.5 0 0.5\nblue = 0.9 0 0.1\ngamma = 0.1\nk = 1\nrho = 1\n"
    );
    InstanceFile::parse(&text).expect("fixture parses")
}

/// The group-symmetric equilibrium on `n` greens and `n` blues.
pub fn symmetric(n: usize) -> SymmetricEquilibrium {
    let green = OpportunityDistribution::two_point(ratio(1, 2)).unwrap();
    let blue = OpportunityDistribution::two_point(ratio(9, 10)).unwrap();
    let pop = Population::new(n, n, green, blue).unwrap();
    let params = ParamPoint::new(ratio(1, 10), 2, ratio(1, 2)).unwrap();
    construct_symmetric_equilibrium(&pop, &params).unwrap().expect("blues stay put at this cost")
}
