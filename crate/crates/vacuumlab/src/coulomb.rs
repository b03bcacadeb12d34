//! Vacuum-averaged static potential of a point charge, the compensating
//! field, sign-change radii and the Yukawa-type experimental bound.
//!
//! Potentials take the physical charge and return the interaction energy
//! q·⟨φ⟩ in Planck units. For a profile with peak Z and bare charge q the
//! physical charge is q√Z.

use std::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quadrature::QuadratureSpec;
use crate::specfun::{bessel_k, bessel_k0_complex, sine_integral};
use crate::vacuum::{physical_charge, ProfileKind, VacuumProfile};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PotentialCurve {
    pub r_values: Vec<f64>,
    pub v_values: Vec<f64>,
    pub profile_tag: String,
}

/// Shell profile: −(q_ph²/4πr)·(Si(k₂r) − Si(k₁r))/(π/2).
pub fn potential_box(q_ph: f64, k1: f64, k2: f64, r: f64) -> Result<f64> {
    if !(k1 > 0.0 && k2 > k1) {
        return Err(Error::Domain(format!("need 0 < k1 < k2 (got {k1}, {k2})")));
    }
    if r < 0.0 || r.is_nan() {
        return Err(Error::Domain(format!("r must be >= 0, got {r}")));
    }
    let q2 = q_ph * q_ph;
    if r == 0.0 {
        return Ok(-q2 * (k2 - k1) / (2.0 * PI * PI));
    }
    let diff = if k2 * r < 1e-6 {
        // Si(x) = x − x³/18 + …
        r * (k2 - k1) - r.powi(3) * (k2.powi(3) - k1.powi(3)) / 18.0
    } else {
        sine_integral(k2 * r) - sine_integral(k1 * r)
    };
    Ok(-q2 / (4.0 * PI * r) * diff / FRAC_PI_2)
}

/// Exponential profile:
/// i(q_ph²/2π²)e^{2λ}[K₀(2λ√(1−ir/y₀)) − K₀(2λ√(1+ir/y₀))]/r.
/// λ² = 0 gives the limiting form −q_ph² atan(r/y₀)/(2π²r).
pub fn potential_lorentz(q_ph: f64, lambda2: f64, y0: f64, r: f64) -> Result<f64> {
    if !(lambda2 >= 0.0 && lambda2.is_finite() && y0 > 0.0 && y0.is_finite()) {
        return Err(Error::Domain(format!(
            "need lambda2 >= 0, y0 > 0 (got {lambda2}, {y0})"
        )));
    }
    if r < 0.0 || r.is_nan() {
        return Err(Error::Domain(format!("r must be >= 0, got {r}")));
    }
    let q2 = q_ph * q_ph;
    let lam = lambda2.sqrt();
    if r == 0.0 {
        if lambda2 == 0.0 {
            return Ok(-q2 / (2.0 * PI * PI * y0));
        }
        let k1 = bessel_k(1, 2.0 * lam)?;
        return Ok(-q2 * (2.0 * lam).exp() * 2.0 * lam * k1 / (2.0 * PI * PI * y0));
    }
    if lambda2 == 0.0 {
        return Ok(-q2 * (r / y0).atan() / (2.0 * PI * PI * r));
    }
    let u = r / y0;
    let w_minus = 2.0 * lam * Complex64::new(1.0, -u).sqrt();
    let w_plus = 2.0 * lam * Complex64::new(1.0, u).sqrt();
    let d = bessel_k0_complex(w_minus)? - bessel_k0_complex(w_plus)?;
    // conjugate arguments: the difference must be purely imaginary
    if d.re.abs() > 1e-12 * d.norm().max(f64::MIN_POSITIVE) {
        return Err(Error::Branch(r));
    }
    Ok(-q2 * (2.0 * lam).exp() * d.im / (2.0 * PI * PI * r))
}

/// S(a) = ∫₀^∞ |O₀(κ)|² sin(aκ)/κ dκ in closed form. Odd in a.
pub fn sine_transform(profile: &VacuumProfile, a: f64) -> Result<f64> {
    if a == 0.0 {
        return Ok(0.0);
    }
    match profile.kind {
        ProfileKind::BoxShell { k1, k2 } => {
            Ok(profile.z * (sine_integral(k2 * a) - sine_integral(k1 * a)))
        }
        ProfileKind::LorentzExp { lambda2, y0 } => {
            if lambda2 == 0.0 {
                return Ok(profile.norm_const * (a / y0).atan());
            }
            let w = 2.0 * lambda2.sqrt() * Complex64::new(1.0, -a / y0).sqrt();
            Ok(2.0 * profile.norm_const * bessel_k0_complex(w)?.im)
        }
    }
}

/// The same transform by radial quadrature.
pub fn sine_transform_quad(profile: &VacuumProfile, a: f64, spec: &QuadratureSpec) -> Result<f64> {
    if a == 0.0 {
        return Ok(0.0);
    }
    let period = 2.0 * PI / a.abs();
    // radial_integral carries the measure κ/(4π²)
    let v = profile.radial_integral(
        |k| {
            if k == 0.0 {
                a
            } else {
                (a * k).sin() / (k * k)
            }
        },
        Some(period),
        spec,
    )?;
    Ok(4.0 * PI * PI * v)
}

/// q·⟨φ_gC(r)⟩ for any profile, with q the bare charge: −q² S(r)/(2π² r).
pub fn potential(profile: &VacuumProfile, q: f64, r: f64) -> Result<f64> {
    let q_ph = physical_charge(q, profile);
    match profile.kind {
        ProfileKind::BoxShell { k1, k2 } => potential_box(q_ph, k1, k2, r),
        ProfileKind::LorentzExp { lambda2, y0 } => potential_lorentz(q_ph, lambda2, y0, r),
    }
}

/// Standard-representation compensating field q/(4πr)·θ(r − |Δt|), θ(0) = 1/2.
pub fn compensating_field_closed(q: f64, r: f64, dt: f64) -> Result<f64> {
    if !(r > 0.0) {
        return Err(Error::Domain(format!("r must be > 0, got {r}")));
    }
    let step = crate::deltaseq::theta(r - dt.abs());
    Ok(q / (4.0 * PI * r) * step)
}

/// Oscillation periods above which S is taken from its closed form.
const QUAD_PERIOD_BUDGET: f64 = 2e4;

fn sine_transform_auto(profile: &VacuumProfile, a: f64, spec: &QuadratureSpec) -> Result<f64> {
    let k_max = profile.radial_points(None).last().copied().unwrap_or(0.0);
    if a.abs() * k_max / (2.0 * PI) > QUAD_PERIOD_BUDGET {
        sine_transform(profile, a)
    } else {
        sine_transform_quad(profile, a, spec)
    }
}

/// Vacuum-averaged compensating field
/// (q/2π²r) ∫ |O₀|² sin(κr) cos(κΔt)/κ dκ = (q/4π²r)[S(r+Δt) + S(r−Δt)],
/// by quadrature unless |r ± Δt| spans too many oscillations.
pub fn compensating_field_avg(
    profile: &VacuumProfile,
    q: f64,
    r: f64,
    dt: f64,
    spec: &QuadratureSpec,
) -> Result<f64> {
    if !(r > 0.0) {
        return Err(Error::Domain(format!("r must be > 0, got {r}")));
    }
    if q == 0.0 {
        return Ok(0.0);
    }
    let s = sine_transform_auto(profile, r + dt, spec)? + sine_transform_auto(profile, r - dt, spec)?;
    Ok(q * s / (4.0 * PI * PI * r))
}

/// Bisection for a sign change inside the bracket.
pub fn sign_change_radius<F: Fn(f64) -> Result<f64>>(potential: F, bracket: (f64, f64)) -> Result<f64> {
    let (mut lo, mut hi) = bracket;
    let mut flo = potential(lo)?;
    let fhi = potential(hi)?;
    if flo == 0.0 {
        return Ok(lo);
    }
    if fhi == 0.0 {
        return Ok(hi);
    }
    if flo.signum() == fhi.signum() {
        return Err(Error::NoSignChange(lo, hi));
    }
    for _ in 0..300 {
        let mid = 0.5 * (lo + hi);
        if (hi - lo) <= 1e-12 * mid.abs() {
            break;
        }
        let fm = potential(mid)?;
        if fm == 0.0 {
            return Ok(mid);
        }
        if fm.signum() == flo.signum() {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Scan outward geometrically (factor 1.5) from `r_start` until the sign
/// flips, then bisect.
pub fn first_sign_change<F: Fn(f64) -> Result<f64>>(
    potential: F,
    r_start: f64,
    max_steps: usize,
) -> Result<f64> {
    if !(r_start > 0.0) {
        return Err(Error::Domain(format!("r_start must be > 0, got {r_start}")));
    }
    let mut lo = r_start;
    let f0 = potential(lo)?;
    for _ in 0..max_steps {
        let hi = lo * 1.5;
        let fh = potential(hi)?;
        if fh == 0.0 || fh.signum() != f0.signum() {
            return sign_change_radius(&potential, (lo, hi));
        }
        lo = hi;
    }
    Err(Error::NoSignChange(r_start, lo))
}

/// Smallest x > 0 with Si(x) = π/2. The shell potential first changes
/// sign near this value divided by k₁.
pub fn si_sign_change_constant() -> f64 {
    sign_change_radius(|x| Ok(FRAC_PI_2 - sine_integral(x)), (1.0, 3.0))
        .expect("Si crosses pi/2 on [1, 3]")
}

/// π(1 − e^{−r/λ_min}) − Si(k₁r) ≥ 0 at every grid point (r and λ_min
/// in the same units, k₁ its inverse).
pub fn yukawa_bound_check(k1: f64, lambda_min_ratio: f64, r_grid: &[f64]) -> bool {
    r_grid.iter().all(|&r| {
        let lhs = -PI * (-r / lambda_min_ratio).exp_m1();
        lhs - sine_integral(k1 * r) >= 0.0
    })
}

/// Potential on a grid.
pub fn tabulate(profile: &VacuumProfile, q: f64, r_values: &[f64]) -> Result<PotentialCurve> {
    if r_values.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::Domain("r grid must be strictly increasing".into()));
    }
    let v_values = r_values
        .iter()
        .map(|&r| potential(profile, q, r))
        .collect::<Result<Vec<_>>>()?;
    Ok(PotentialCurve {
        r_values: r_values.to_vec(),
        v_values,
        profile_tag: profile.tag().to_string(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::vacuum::{make_box_profile, make_lorentz_profile};

    #[test]
    fn si_constant() {
        assert!((si_sign_change_constant() - 1.926_447_660_317_37).abs() < 1e-10);
    }

    #[test]
    fn box_origin() {
        let v = potential_box(1.0, 1.0, 3.0, 1e-9).unwrap();
        assert!((v + 2.0 / (2.0 * PI * PI)).abs() < 1e-12);
    }

    #[test]
    fn lorentz_closed_form_agrees_with_transform() {
        let p = make_lorentz_profile(0.0625, 0.25).unwrap();
        for r in [0.1, 1.0, 7.0] {
            let a = sine_transform(&p, r).unwrap();
            let b = sine_transform_quad(&p, r, &QuadratureSpec::default()).unwrap();
            assert!((a - b).abs() < 1e-9 * a.abs(), "{r} {a} {b}");
        }
        let b = make_box_profile(1.0, 3.0).unwrap();
        let a = sine_transform(&b, 2.0).unwrap();
        let c = sine_transform_quad(&b, 2.0, &QuadratureSpec::default()).unwrap();
        assert!((a - c).abs() < 1e-10);
    }

    #[test]
    fn coulomb_has_no_sign_change() {
        let r = first_sign_change(|r| Ok(-1.0 / r), 1.0, 40);
        assert!(matches!(r, Err(Error::NoSignChange(..))));
    }
}
