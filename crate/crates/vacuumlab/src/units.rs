//! Physical constants used when converting dimensionless results.
//! Everything else in the crate works in Planck units.

/// Planck length in metres (CODATA 2018).
pub const PLANCK_LENGTH_M: f64 = 1.616_255e-35;
/// Planck length in kilometres.
pub const PLANCK_LENGTH_KM: f64 = 1.616_255e-38;
/// Astronomical unit in kilometres.
pub const AU_KM: f64 = 1.495_978_707e8;
/// Reduced Planck constant in J·s (exact since 2019).
pub const HBAR: f64 = 1.054_571_817e-34;
/// Speed of light in m/s (exact).
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;

pub fn km_to_planck(km: f64) -> f64 {
    km / PLANCK_LENGTH_KM
}

pub fn planck_to_km(x: f64) -> f64 {
    x * PLANCK_LENGTH_KM
}

pub fn planck_to_au(x: f64) -> f64 {
    x * PLANCK_LENGTH_KM / AU_KM
}

pub fn metres_to_planck(m: f64) -> f64 {
    m / PLANCK_LENGTH_M
}

/// ħc/ℓ⁴ in pascal.
pub fn pressure_unit_pa() -> f64 {
    HBAR * SPEED_OF_LIGHT / PLANCK_LENGTH_M.powi(4)
}
