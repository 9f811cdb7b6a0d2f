//! Shared fixtures for the benchmark targets.

use cavnet_core::models::JCParams;
use cavnet_core::params::RateSet;

pub const TWO_PI: f64 = std::f64::consts::TAU;

/// The strong-coupling reference system used across the benches.
pub fn reference_rates() -> RateSet {
    RateSet::new(TWO_PI * 7e6, TWO_PI * 2.3e6, TWO_PI * 0.1e6, TWO_PI * 0.1e6, TWO_PI * 3e6)
        .expect("valid reference rates")
}

pub fn reference_params(n_max: usize) -> JCParams {
    JCParams::new(reference_rates(), n_max).expect("valid params")
}
