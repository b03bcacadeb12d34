//! Two delta barriers: sewing coefficients, mode functions, resonance poles
//! and the boundary form of the mode inner product.
//!
//! Mode functions use the coordinate w in which the barriers sit at ±L/4
//! and the derivative jumps by 2α·f and 2β·f. The field-operator modes f̃
//! reuse the same machinery with (α/2, β/2, 2L), which moves the barriers
//! to ±L/2 with jumps α·f̃ and β·f̃.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quadrature::{integrate_complex, QuadratureSpec};
use crate::specfun::lambert_w;

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CavityConfig {
    pub alpha: f64,
    pub beta: f64,
    pub l: f64,
    /// both barriers infinitely strong; alpha and beta are then ignored
    pub dirichlet: bool,
}

impl CavityConfig {
    pub fn new(alpha: f64, beta: f64, l: f64) -> Result<Self> {
        let c = CavityConfig {
            alpha,
            beta,
            l,
            dirichlet: false,
        };
        c.validate()?;
        Ok(c)
    }

    pub fn symmetric(alpha: f64, l: f64) -> Result<Self> {
        Self::new(alpha, alpha, l)
    }

    pub fn dirichlet(l: f64) -> Result<Self> {
        let c = CavityConfig {
            alpha: f64::INFINITY,
            beta: f64::INFINITY,
            l,
            dirichlet: true,
        };
        c.validate()?;
        Ok(c)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.l > 0.0 && self.l.is_finite()) {
            return Err(Error::Domain(format!("L must be positive, got {}", self.l)));
        }
        if !self.dirichlet
            && !(self.alpha >= 0.0 && self.beta >= 0.0 && self.alpha.is_finite() && self.beta.is_finite())
        {
            return Err(Error::Domain(format!(
                "barrier strengths must be finite and >= 0 (got {}, {})",
                self.alpha, self.beta
            )));
        }
        Ok(())
    }

    fn is_symmetric(&self) -> bool {
        self.dirichlet || self.alpha == self.beta
    }

    /// Configuration whose f-modes are this configuration's f̃-modes.
    pub fn tilde(&self) -> CavityConfig {
        CavityConfig {
            alpha: self.alpha / 2.0,
            beta: self.beta / 2.0,
            l: 2.0 * self.l,
            dirichlet: self.dirichlet,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Side {
    Left,
    Right,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScatteringCoefficients {
    pub a: Complex64,
    pub b: Complex64,
    pub c: Complex64,
    pub d: Complex64,
    pub e: Complex64,
    pub f: Complex64,
}

/// Δ = k² + i(α+β)k + (e^{ikL} − 1)αβ.
pub fn sewing_denominator(k: f64, alpha: f64, beta: f64, l: f64) -> Complex64 {
    let phase = Complex64::new(0.0, k * l).exp();
    Complex64::new(k * k, (alpha + beta) * k) + (phase - 1.0) * alpha * beta
}

/// Left-incidence amplitudes (A = 1) for finite barriers.
fn left_coeffs(k: f64, alpha: f64, beta: f64, l: f64) -> Result<(Complex64, Complex64, Complex64, Complex64)> {
    let delta = sewing_denominator(k, alpha, beta, l);
    let scale = k * k + (alpha + beta) * k + alpha * beta;
    if delta.norm() <= 1e-14 * scale || delta.norm() == 0.0 {
        return Err(Error::DegenerateMode(format!(
            "sewing denominator vanishes at k = {k}"
        )));
    }
    let e_full = Complex64::new(0.0, k * l).exp();
    let e_half = Complex64::new(0.0, 0.5 * k * l).exp();
    let b = -I * e_half.conj() * (k * (alpha + e_full * beta) - I * (e_full - 1.0) * alpha * beta) / delta;
    let c = k * Complex64::new(k, beta) / delta;
    let d = -I * e_half * k * beta / delta;
    let e = Complex64::new(k * k, 0.0) / delta;
    Ok((b, c, d, e))
}

fn dirichlet_left(k: f64, l: f64) -> (Complex64, Complex64, Complex64, Complex64) {
    let e_half = Complex64::new(0.0, 0.5 * k * l).exp();
    let b = -e_half.conj();
    let resonant = (Complex64::new(0.0, k * l).exp() - 1.0).norm() < 1e-9;
    if resonant {
        (b, Complex64::new(0.5, 0.0), -0.5 * e_half, Complex64::new(0.0, 0.0))
    } else {
        let z = Complex64::new(0.0, 0.0);
        (b, z, z, z)
    }
}

/// Sewing amplitudes for a wave incident from the given side.
/// Left: (A, B, C, D, E) with A = 1 and F unused (0).
/// Right: (B, C, D, E, F) with F = 1 and A unused (0); obtained from the
/// left problem with α and β exchanged.
pub fn scattering_coeffs(k: f64, cfg: &CavityConfig, side: Side) -> Result<ScatteringCoefficients> {
    cfg.validate()?;
    if !(k > 0.0 && k.is_finite()) {
        return Err(Error::Domain(format!("k must be positive, got {k}")));
    }
    let (alpha, beta) = match side {
        Side::Left => (cfg.alpha, cfg.beta),
        Side::Right => (cfg.beta, cfg.alpha),
    };
    let (b1, c1, d1, e1) = if cfg.dirichlet {
        dirichlet_left(k, cfg.l)
    } else {
        left_coeffs(k, alpha, beta, cfg.l)?
    };
    let one = Complex64::new(1.0, 0.0);
    let zero = Complex64::new(0.0, 0.0);
    Ok(match side {
        Side::Left => ScatteringCoefficients {
            a: one,
            b: b1,
            c: c1,
            d: d1,
            e: e1,
            f: zero,
        },
        Side::Right => ScatteringCoefficients {
            a: zero,
            b: e1,
            c: d1,
            d: c1,
            e: b1,
            f: one,
        },
    })
}

fn mode_and_derivative(k_z: f64, w: f64, cfg: &CavityConfig) -> Result<(Complex64, Complex64)> {
    if k_z == 0.0 {
        let free = !cfg.dirichlet && cfg.alpha == 0.0 && cfg.beta == 0.0;
        let v = if free { 1.0 } else { 0.0 };
        return Ok((Complex64::new(v, 0.0), Complex64::new(0.0, 0.0)));
    }
    let k = k_z.abs();
    let edge = cfg.l / 4.0;
    let plus = Complex64::new(0.0, k * w).exp();
    let minus = plus.conj();
    let ik = Complex64::new(0.0, k);
    let (p, m) = if k_z > 0.0 {
        let s = scattering_coeffs(k, cfg, Side::Left)?;
        if w < -edge {
            (s.a, s.b)
        } else if w <= edge {
            (s.c, s.d)
        } else {
            (s.e, Complex64::new(0.0, 0.0))
        }
    } else {
        let s = scattering_coeffs(k, cfg, Side::Right)?;
        if w < -edge {
            (Complex64::new(0.0, 0.0), s.b)
        } else if w <= edge {
            (s.c, s.d)
        } else {
            (s.e, s.f)
        }
    };
    Ok((p * plus + m * minus, ik * (p * plus - m * minus)))
}

/// Combined mode f(k_z, w) = θ(k_z) f₁(|k_z|, w) + θ(−k_z) f₃(|k_z|, w).
pub fn mode_function(k_z: f64, w: f64, cfg: &CavityConfig) -> Result<Complex64> {
    mode_and_derivative(k_z, w, cfg).map(|p| p.0)
}

/// ∂f/∂w, one-sided at the barriers (value from the inner region).
pub fn mode_derivative(k_z: f64, w: f64, cfg: &CavityConfig) -> Result<Complex64> {
    mode_and_derivative(k_z, w, cfg).map(|p| p.1)
}

/// Field-operator mode f̃(k_z, z): barriers at ±L/2 with derivative jumps
/// α·f̃ and β·f̃.
pub fn field_mode(k_z: f64, z: f64, cfg: &CavityConfig) -> Result<Complex64> {
    mode_function(k_z, z, &cfg.tilde())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Resonance {
    pub branch: i64,
    /// +1 or −1, the sign inside the Lambert argument
    pub sign: i8,
    pub k: Complex64,
    pub residual: f64,
}

/// k² + 2iαk + (e^{ikL} − 1)α² at complex k.
pub fn resonance_residual(k: Complex64, alpha: f64, l: f64) -> Complex64 {
    k * k + 2.0 * I * alpha * k + ((I * k * l).exp() - 1.0) * alpha * alpha
}

/// Poles k = −i(Lα − 2W_n(±e^{Lα/2}Lα/2))/L for each branch in the range
/// and both signs, ordered by branch then sign.
pub fn resonance_roots(cfg: &CavityConfig, branches: std::ops::RangeInclusive<i64>) -> Result<Vec<Resonance>> {
    cfg.validate()?;
    if cfg.dirichlet || !cfg.is_symmetric() || !(cfg.alpha > 0.0) {
        return Err(Error::Unsupported(
            "resonances need equal finite barriers with alpha > 0".into(),
        ));
    }
    let (alpha, l) = (cfg.alpha, cfg.l);
    let la = l * alpha;
    let arg = (0.5 * la).exp() * la / 2.0;
    let mut out = Vec::new();
    for n in branches {
        for sign in [1i8, -1] {
            let w = lambert_w(n, Complex64::new(sign as f64 * arg, 0.0))?;
            let k = -I * (la - 2.0 * w) / l;
            let residual = resonance_residual(k, alpha, l).norm();
            out.push(Resonance {
                branch: n,
                sign,
                k,
                residual,
            });
        }
    }
    Ok(out)
}

/// Window form of ∫_{−n}^{n} conj f(l, w) f(k, w) dw valid for n beyond
/// the barriers.
pub fn boundary_inner_product(l_z: f64, k_z: f64, window_n: f64, cfg: &CavityConfig) -> Result<Complex64> {
    if cfg.dirichlet || !cfg.is_symmetric() {
        return Err(Error::Unsupported("needs equal finite barriers".into()));
    }
    if l_z == 0.0 || k_z == 0.0 {
        return Err(Error::Domain("k_z and l_z must be nonzero".into()));
    }
    if !(window_n > cfg.l / 4.0) {
        return Err(Error::Domain(format!(
            "window must lie outside the barriers (n = {window_n}, L/4 = {})",
            cfg.l / 4.0
        )));
    }
    let den = k_z * k_z - l_z * l_z;
    if den.abs() <= 1e-12 * (k_z * k_z + l_z * l_z) {
        return Err(Error::DegenerateMode(
            "k_z^2 = l_z^2: use the delta-channel weights".into(),
        ));
    }
    let n = window_n;
    let (fk_p, dfk_p) = mode_and_derivative(k_z, n, cfg)?;
    let (fl_p, dfl_p) = mode_and_derivative(l_z, n, cfg)?;
    let (fk_m, dfk_m) = mode_and_derivative(k_z, -n, cfg)?;
    let (fl_m, dfl_m) = mode_and_derivative(l_z, -n, cfg)?;
    let upper = -fl_p.conj() * dfk_p + fk_p * dfl_p.conj();
    let lower = fl_m.conj() * dfk_m - fk_m * dfl_m.conj();
    Ok((upper + lower) / den)
}

/// Mean of the window form over n ∈ [n_min, n_max] (Cesàro average).
pub fn cesaro_mean(
    l_z: f64,
    k_z: f64,
    n_min: f64,
    n_max: f64,
    cfg: &CavityConfig,
    spec: &QuadratureSpec,
) -> Result<Complex64> {
    if !(n_max > n_min) {
        return Err(Error::Domain("need n_max > n_min".into()));
    }
    let freq = k_z.abs() + l_z.abs();
    let period = 2.0 * PI / freq;
    let count = ((n_max - n_min) / period).ceil().clamp(1.0, 1e6) as usize;
    let pts: Vec<f64> = (0..=count)
        .map(|i| n_min + (n_max - n_min) * i as f64 / count as f64)
        .collect();
    let mut loose = *spec;
    loose.max_subdivisions = spec.max_subdivisions.max(4 * count);
    // the mean is tiny compared with the integrand, so the relative
    // tolerance alone would never be met
    loose.abs_tol = spec.abs_tol.max(1e-10 * (n_max - n_min));
    let mut failure = None;
    let v = integrate_complex(
        |n| match boundary_inner_product(l_z, k_z, n, cfg) {
            Ok(v) => v,
            Err(e) => {
                failure.get_or_insert(e);
                Complex64::new(0.0, 0.0)
            }
        },
        &pts,
        &loose,
    )?;
    if let Some(e) = failure {
        return Err(e);
    }
    Ok(v / (n_max - n_min))
}

/// Coefficient of δ(k − l) in the same-sign channel: π(1 + |B|² + |E|²).
pub fn delta_channel_weight(k: f64, cfg: &CavityConfig) -> Result<f64> {
    let s = scattering_coeffs(k, cfg, Side::Left)?;
    Ok(PI * (1.0 + s.b.norm_sqr() + s.e.norm_sqr()))
}

/// Coefficient of δ(k + l) between the two incidence channels:
/// π(B Ē + E B̄). Vanishes for equal barriers.
pub fn cross_channel_weight(k: f64, cfg: &CavityConfig) -> Result<Complex64> {
    let s = scattering_coeffs(k, cfg, Side::Left)?;
    Ok(PI * (s.b * s.e.conj() + s.e * s.b.conj()))
}
