//! Vacuum wave-function profiles |O₀(k)|² in the rest frame: a flat shell
//! between two radii and the Lorentz-invariant exponential profile.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quadrature::{integrate_with_points, QuadratureSpec};
use crate::specfun::bessel_k;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum ProfileKind {
    BoxShell { k1: f64, k2: f64 },
    LorentzExp { lambda2: f64, y0: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VacuumProfile {
    pub kind: ProfileKind,
    /// peak of |O₀|²
    pub z: f64,
    /// |C|² for the exponential profile, Z for the shell
    pub norm_const: f64,
}

/// λ²K₂(2λ), continuous at λ = 0 where it equals 1/2.
fn lambda2_k2(lambda2: f64) -> Result<f64> {
    if lambda2 == 0.0 {
        return Ok(0.5);
    }
    let lam = lambda2.sqrt();
    Ok(lambda2 * bessel_k(2, 2.0 * lam)?)
}

/// Exponential profile |O₀|² = |C|² exp(−λ²/(y₀κ) − y₀κ). λ² = 0 is accepted
/// as the limiting profile (it has no infrared suppression).
pub fn make_lorentz_profile(lambda2: f64, y0: f64) -> Result<VacuumProfile> {
    if !(lambda2 >= 0.0 && lambda2.is_finite()) || !(y0 > 0.0 && y0.is_finite()) {
        return Err(Error::Domain(format!(
            "need lambda2 >= 0 and y0 > 0 (got {lambda2}, {y0})"
        )));
    }
    let norm = 2.0 * PI * PI * y0 * y0 / lambda2_k2(lambda2)?;
    let z = norm * (-2.0 * lambda2.sqrt()).exp();
    Ok(VacuumProfile {
        kind: ProfileKind::LorentzExp { lambda2, y0 },
        z,
        norm_const: norm,
    })
}

pub fn make_box_profile(k1: f64, k2: f64) -> Result<VacuumProfile> {
    if !(k1 > 0.0 && k2 > k1 && k2.is_finite()) {
        return Err(Error::Domain(format!("need 0 < k1 < k2 (got {k1}, {k2})")));
    }
    let z = 8.0 * PI * PI / (k2 * k2 - k1 * k1);
    Ok(VacuumProfile {
        kind: ProfileKind::BoxShell { k1, k2 },
        z,
        norm_const: z,
    })
}

impl VacuumProfile {
    pub fn tag(&self) -> &'static str {
        match self.kind {
            ProfileKind::BoxShell { .. } => "box",
            ProfileKind::LorentzExp { .. } => "lorentz",
        }
    }

    pub fn density(&self, k_abs: f64) -> f64 {
        match self.kind {
            ProfileKind::BoxShell { k1, k2 } => {
                if k_abs >= k1 && k_abs <= k2 {
                    self.z
                } else {
                    0.0
                }
            }
            ProfileKind::LorentzExp { lambda2, y0 } => {
                if k_abs <= 0.0 {
                    return if lambda2 == 0.0 { self.norm_const } else { 0.0 };
                }
                self.norm_const * (-lambda2 / (y0 * k_abs) - y0 * k_abs).exp()
            }
        }
    }

    pub fn cutoff(&self, k_abs: f64) -> f64 {
        match self.kind {
            ProfileKind::BoxShell { .. } => self.density(k_abs) / self.z,
            ProfileKind::LorentzExp { lambda2, y0 } => {
                if k_abs <= 0.0 {
                    return if lambda2 == 0.0 { 1.0 } else { 0.0 };
                }
                let lam = lambda2.sqrt();
                (-lambda2 / (y0 * k_abs) - y0 * k_abs + 2.0 * lam).exp()
            }
        }
    }

    /// Where the cutoff equals one.
    pub fn peak_k(&self) -> f64 {
        match self.kind {
            ProfileKind::BoxShell { k1, k2 } => 0.5 * (k1 + k2),
            ProfileKind::LorentzExp { lambda2, y0 } => lambda2.sqrt() / y0,
        }
    }

    /// Radial breakpoints covering the support, with extra points every
    /// `period` when the integrand oscillates.
    pub fn radial_points(&self, period: Option<f64>) -> Vec<f64> {
        let mut pts = match self.kind {
            ProfileKind::BoxShell { k1, k2 } => vec![k1, k2],
            ProfileKind::LorentzExp { lambda2, y0 } => {
                let hi = 48.0 / y0;
                let lo = if lambda2 > 0.0 {
                    (lambda2 / (750.0 * y0)).max(1e-300)
                } else {
                    0.0
                };
                let mut v = vec![lo, hi];
                if lo > 0.0 {
                    // geometric points from the essential singularity to the bulk
                    let decades = (hi / lo).log10();
                    let m = (decades * 6.0).ceil() as usize;
                    for i in 1..m {
                        v.push(lo * (hi / lo).powf(i as f64 / m as f64));
                    }
                } else {
                    for i in 1..48 {
                        v.push(i as f64 / y0);
                    }
                }
                v
            }
        };
        if let Some(p) = period {
            let lo = pts.iter().cloned().fold(f64::INFINITY, f64::min);
            let hi = pts.iter().cloned().fold(0.0, f64::max);
            let step = p;
            let count = ((hi - lo) / step).ceil();
            if count.is_finite() && count < 2e6 {
                let mut x = (lo / step).ceil() * step;
                while x < hi {
                    pts.push(x);
                    x += step;
                }
            }
        }
        pts.sort_by(f64::total_cmp);
        pts.dedup();
        pts
    }

    /// ∫ dk |O₀|² g(|k|) with dk = d³k/((2π)³ 2|k|), i.e.
    /// (1/4π²) ∫ κ |O₀(κ)|² g(κ) dκ.
    pub fn radial_integral<G: Fn(f64) -> f64>(
        &self,
        g: G,
        period: Option<f64>,
        spec: &QuadratureSpec,
    ) -> Result<f64> {
        let pts = self.radial_points(period);
        let mut loose = *spec;
        loose.max_subdivisions = spec.max_subdivisions.max(8 * pts.len());
        let v = integrate_with_points(|k| k * self.density(k) * g(k), &pts, &loose)?;
        Ok(v / (4.0 * PI * PI))
    }

    /// ∫ dk |O₀|² (should be 1).
    pub fn normalization(&self, spec: &QuadratureSpec) -> Result<f64> {
        self.radial_integral(|_| 1.0, None, spec)
    }
}

/// True when |O₀(κ)|²/κⁿ → 0 at the origin and ∫ dk |O₀|²/|k|ⁿ converges there.
pub fn infrared_condition_check(profile: &VacuumProfile, n: u32) -> bool {
    let n = n as i32;
    let k_ref = match profile.kind {
        ProfileKind::BoxShell { k1, k2 } => {
            if k1 > 0.0 {
                k1
            } else {
                k2
            }
        }
        ProfileKind::LorentzExp { lambda2, y0 } => {
            if lambda2 > 0.0 {
                lambda2.sqrt() / y0
            } else {
                1.0 / y0
            }
        }
    };
    let ratios: Vec<f64> = (1..=24)
        .map(|i| {
            let k = k_ref * 10f64.powf(-0.5 * i as f64);
            profile.density(k) / k.powi(n)
        })
        .collect();
    // the ratio may rise first (essential singularity onset) but must end
    // decreasing and negligible against its largest value
    let peak = ratios.iter().cloned().fold(0.0, f64::max);
    let tail = &ratios[ratios.len() - 6..];
    let decays = ratios.iter().all(|r| r.is_finite())
        && tail.windows(2).all(|w| w[1] <= w[0] * (1.0 + 1e-12))
        && *ratios.last().unwrap() <= 1e-12 * peak;
    if !decays {
        return false;
    }
    // the small-κ part of the integral has to settle as the lower limit shrinks
    let spec = QuadratureSpec {
        abs_tol: 1e-300,
        rel_tol: 1e-10,
        ..Default::default()
    };
    let piece = |lo: f64| {
        integrate_with_points(
            |k| k.powi(1 - n) * profile.density(k),
            &[lo, k_ref * 1e-2, k_ref],
            &spec,
        )
    };
    match (piece(k_ref * 1e-4), piece(k_ref * 1e-10)) {
        (Ok(a), Ok(b)) => a.is_finite() && b.is_finite() && (a - b).abs() <= 1e-8 * (1.0 + a.abs()),
        _ => false,
    }
}

pub fn physical_charge(q: f64, profile: &VacuumProfile) -> f64 {
    q * profile.z.sqrt()
}
