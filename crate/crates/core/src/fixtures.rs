//! Shared tolerances and measured constants, loaded from `fixtures.toml`.

use std::sync::OnceLock;

use serde::Deserialize;

const RAW: &str = include_str!("fixtures.toml");

#[derive(Debug, Clone, Deserialize)]
pub struct Fixtures {
    pub constants: Constants,
    pub measured: Measured,
    pub tolerances: Tolerances,
}

#[derive(Debug, Clone, Deserialize)]
pub struct Constants {
    pub zeta_prime_minus_one: f64,
    pub glaisher: f64,
}

#[derive(Debug, Clone, Deserialize)]
pub struct Measured {
    pub theta11_prime_over_chi1: f64,
    pub unit_vector: usize,
    pub g_generator_signs: [i8; 4],
    pub chi2_generator_characters: [i8; 4],
}

#[derive(Debug, Clone, Deserialize)]
pub struct Tolerances {
    pub jacobi_discriminant: f64,
    pub kronecker_limit: f64,
    pub chi1_eighth_power: f64,
    pub gram_diagonal: f64,
    pub gram_offdiagonal: f64,
    pub kummer_vanishing: f64,
    pub f2g_unit_vector: f64,
    pub discriminant_consistency: f64,
    pub doubling: f64,
    pub second_derivative_exact: f64,
    pub second_derivative_fd: f64,
    pub chi2_limit_factorized: f64,
    pub chi2_limit_extrapolated: f64,
    pub i_limit_extrapolated: f64,
    pub i_limit_intermediate: f64,
    pub bracket_slope: f64,
    pub first_derivative_zero: f64,
    pub det_imag_covariance: f64,
    pub petersson_invariance: f64,
    pub torsion_invariance: f64,
    pub certification_slack: f64,
    pub divergence_slope: f64,
    pub faltings: f64,
}

pub fn fixtures() -> &'static Fixtures {
    static CELL: OnceLock<Fixtures> = OnceLock::new();
    CELL.get_or_init(|| toml::from_str(RAW).expect("embedded fixtures.toml is valid"))
}

pub fn tolerances() -> &'static Tolerances {
    &fixtures().tolerances
}

/// `zeta'(-1)`, from the Glaisher-constant fixture.
pub fn zeta_prime_minus_one() -> f64 {
    fixtures().constants.zeta_prime_minus_one
}
