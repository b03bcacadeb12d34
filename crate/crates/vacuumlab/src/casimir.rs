//! Casimir pressure between two plates.
//!
//! 1+1 dimensions: finite barrier strength α by a term-by-term series and
//! by direct quadrature, the Dirichlet comb and the Euler–MacLaurin value.
//! 3+1 dimensions: the mode sum over Γ(1, x, b) for the exponential vacuum
//! profile, split into the leading term and its corrections.
//!
//! Sign convention: negative pressure pulls the plates together.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quadrature::{integrate_complex, integrate_panels, integrate_to_infinity, QuadratureSpec};
use crate::specfun::{
    bernoulli_number, bessel_k, expint_e1, gen_incomplete_gamma, gen_incomplete_gamma_diff,
    zeta_negative_odd, ZETA_PRIME_MINUS_2,
};
use crate::units::pressure_unit_pa;
use crate::vacuum::{ProfileKind, VacuumProfile};

/// r(k) = 1/(1 − 2ik/α)².
pub fn reflection_coeff(k: f64, alpha: f64) -> Result<Complex64> {
    if !(k > 0.0 && alpha > 0.0) {
        return Err(Error::Domain(format!("need k, alpha > 0 (got {k}, {alpha})")));
    }
    let d = Complex64::new(1.0, -2.0 * k / alpha);
    Ok(1.0 / (d * d))
}

fn check_alpha_l(alpha: f64, l: f64) -> Result<()> {
    if !(alpha > 0.0 && alpha.is_finite() && l > 0.0 && l.is_finite()) {
        return Err(Error::Domain(format!(
            "need finite alpha, L > 0 (got {alpha}, {l})"
        )));
    }
    Ok(())
}

/// ρ(t) = r(it)e^{−2Lt} on the imaginary axis, as a logarithm.
fn log_rho(t: f64, alpha: f64, l: f64) -> f64 {
    -2.0 * l * t - 2.0 * (2.0 * t / alpha).ln_1p()
}

/// n-th series term −(1/π)∫₀^∞ t ρ(t)ⁿ dt.
fn series_term(n: u32, alpha: f64, l: f64, spec: &QuadratureSpec) -> Result<f64> {
    let nf = n as f64;
    let scale = 1.0 / (2.0 * nf * l);
    let v = integrate_to_infinity(|t| t * (nf * log_rho(t, alpha, l)).exp(), 0.0, scale, spec)?;
    Ok(-v / PI)
}

/// Exact remainder after N terms: −(1/π)∫ t ρ^{N+1}/(1 − ρ) dt.
fn series_remainder(n: u32, alpha: f64, l: f64, spec: &QuadratureSpec) -> Result<f64> {
    let np1 = (n + 1) as f64;
    let scale = 1.0 / (2.0 * np1 * l);
    let v = integrate_to_infinity(
        |t| {
            if t == 0.0 {
                return 0.0;
            }
            let lr = log_rho(t, alpha, l);
            t * (np1 * lr).exp() / -lr.exp_m1()
        },
        0.0,
        scale,
        spec,
    )?;
    Ok(-v / PI)
}

fn series_sum(terms: u32, alpha: f64, l: f64, spec: &QuadratureSpec) -> Result<f64> {
    let mut s = 0.0;
    for n in 1..=terms {
        s += series_term(n, alpha, l, spec)?;
    }
    Ok(s + series_remainder(terms, alpha, l, spec)?)
}

/// Σₙ (1/2π)∫₀^∞ k rⁿ e^{2inkL} dk + c.c., each term on the imaginary k
/// axis, closed with the exact geometric remainder. Two truncation depths
/// must agree.
pub fn pressure_1p1_series(alpha: f64, l: f64, spec: &QuadratureSpec) -> Result<f64> {
    check_alpha_l(alpha, l)?;
    let coarse = series_sum(16, alpha, l, spec)?;
    let fine = series_sum(32, alpha, l, spec)?;
    let tol = (10.0 * spec.rel_tol * fine.abs()).max(spec.abs_tol).max(1e-13 * fine.abs());
    if (fine - coarse).abs() > tol {
        return Err(Error::NonConvergence(format!(
            "series truncations disagree: {coarse} vs {fine}"
        )));
    }
    Ok(fine)
}

/// φ(k) = 2kL + 2 atan(2k/α); peaks of the integrand sit at φ = 2πm.
fn peak_phase(k: f64, alpha: f64, l: f64) -> f64 {
    2.0 * k * l + 2.0 * (2.0 * k / alpha).atan()
}

fn solve_phase(target: f64, alpha: f64, l: f64) -> f64 {
    let mut lo = 0.0;
    let mut hi = target / (2.0 * l);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if peak_phase(mid, alpha, l) < target {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= 1e-16 * hi {
            break;
        }
    }
    0.5 * (lo + hi)
}

/// k·rE/(1 − rE) with E = e^{2ikL}, written as k·E/((1 − 2ik/α)² − E).
fn meijer_kernel(k: Complex64, alpha: f64, l: f64) -> Complex64 {
    let theta = 2.0 * l * k;
    let e = (Complex64::new(0.0, 1.0) * theta).exp();
    let expm1 = if k.im == 0.0 {
        let s = (0.5 * theta.re).sin();
        Complex64::new(-2.0 * s * s, theta.re.sin())
    } else {
        e - 1.0
    };
    let u = Complex64::new(0.0, 2.0) * k / alpha;
    let num = -expm1 - 2.0 * u + u * u;
    k * e / num
}

/// (1/2π)∫₀^∞ k·2Re[rE/(1 − rE)] dk by quadrature along the real axis up
/// to a cutoff between peaks and a vertical ray above it.
pub fn pressure_1p1_quad(alpha: f64, l: f64, spec: &QuadratureSpec) -> Result<f64> {
    check_alpha_l(alpha, l)?;
    let m_c = 3;
    let cut = solve_phase(2.0 * PI * (m_c as f64 + 0.5), alpha, l);
    let mut pts = vec![0.0];
    for m in 1..=m_c {
        let kp = solve_phase(2.0 * PI * m as f64, alpha, l);
        // bracket each peak tightly so the adaptive rule sees its width
        let width = (kp / alpha).powi(2).max(1e-12 * kp) + 1e-14;
        for off in [-64.0, -8.0, -1.0, 0.0, 1.0, 8.0, 64.0] {
            let p = kp + off * width;
            if p > 0.0 && p < cut {
                pts.push(p);
            }
        }
    }
    pts.push(cut);
    pts.sort_by(f64::total_cmp);
    pts.dedup();
    let mut loose = *spec;
    loose.max_subdivisions = spec.max_subdivisions.max(20 * pts.len());
    let real_part = integrate_complex(|k| meijer_kernel(Complex64::new(k, 0.0), alpha, l), &pts, &loose)?;
    let scale = 1.0 / (2.0 * l);
    let tail_re = integrate_to_infinity(|y| meijer_kernel(Complex64::new(cut, y), alpha, l).re, 0.0, scale, spec)?;
    let tail_im = integrate_to_infinity(|y| meijer_kernel(Complex64::new(cut, y), alpha, l).im, 0.0, scale, spec)?;
    let tail = Complex64::new(0.0, 1.0) * Complex64::new(tail_re, tail_im);
    Ok(2.0 * (real_part + tail).re / (2.0 * PI))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AlphaSweep {
    pub l: f64,
    pub alphas: Vec<f64>,
    pub pressures: Vec<f64>,
    /// −π/(16L²), the comb value
    pub comb16: f64,
    /// −π/(24L²), the Euler–MacLaurin value
    pub em24: f64,
    /// which endpoint the largest-α value is closer to: 16 or 24
    pub nearer: u32,
}

/// Finite-α pressures over a sweep; reports which analytic endpoint the
/// trend approaches without asserting either.
pub fn alpha_sweep(l: f64, alphas: &[f64], spec: &QuadratureSpec) -> Result<AlphaSweep> {
    if alphas.is_empty() {
        return Err(Error::Domain("empty alpha sweep".into()));
    }
    let pressures = alphas
        .iter()
        .map(|&a| pressure_1p1_series(a, l, spec))
        .collect::<Result<Vec<_>>>()?;
    let comb16 = -PI / (16.0 * l * l);
    let em24 = pressure_euler_maclaurin(l)?;
    let last = *pressures.last().unwrap();
    let nearer = if (last - em24).abs() <= (last - comb16).abs() { 24 } else { 16 };
    Ok(AlphaSweep {
        l,
        alphas: alphas.to_vec(),
        pressures,
        comb16,
        em24,
        nearer,
    })
}

/// (−L²κ² + Jπ(π − 2Lκ))/(4L²π).
pub fn pressure_dirichlet_comb(l: f64, kappa: f64, j: u64) -> Result<f64> {
    if !(l > 0.0) || j == 0 {
        return Err(Error::Domain(format!("need L > 0 and J >= 1 (got {l}, {j})")));
    }
    if !(kappa > 0.0 && kappa < PI / l) {
        return Err(Error::Domain(format!("kappa must lie in (0, pi/L), got {kappa}")));
    }
    let jf = j as f64;
    Ok((-l * l * kappa * kappa + jf * PI * (PI - 2.0 * l * kappa)) / (4.0 * l * l * PI))
}

/// −(1/2π)(π²/L²)(B₂/2) = −π/(24L²).
pub fn pressure_euler_maclaurin(l: f64) -> Result<f64> {
    if !(l > 0.0) {
        return Err(Error::Domain(format!("L must be positive, got {l}")));
    }
    Ok(-(1.0 / (2.0 * PI)) * (PI * PI / (l * l)) * bernoulli_number(2)? / 2.0)
}

/// Σ₀^N f(n) − [f(0) + f(N)]/2 − ∫₀^N f.
pub fn euler_maclaurin_gap<F: Fn(f64) -> f64>(f: F, n: u64, spec: &QuadratureSpec) -> Result<f64> {
    if n == 0 {
        return Err(Error::Domain("N must be positive".into()));
    }
    let nf = n as f64;
    let sum: f64 = (0..=n).map(|i| f(i as f64)).sum();
    let pts: Vec<f64> = (0..=n).map(|i| i as f64).collect();
    let integral = integrate_panels(&f, &pts, spec)?.value;
    Ok(sum - 0.5 * (f(0.0) + f(nf)) - integral)
}

/// Σ_{j=1}^{orders} B₂ⱼ/(2j)!·[f^{(2j−1)}(N) − f^{(2j−1)}(0)], with the
/// caller supplying derivatives as `deriv(order, x)`.
pub fn euler_maclaurin_series<D: Fn(u32, f64) -> f64>(deriv: D, n: u64, orders: u32) -> Result<f64> {
    let nf = n as f64;
    let mut fact = 1.0;
    let mut s = 0.0;
    for j in 1..=orders {
        fact *= ((2 * j - 1) * (2 * j)) as f64;
        let d = 2 * j - 1;
        s += bernoulli_number(2 * j)? / fact * (deriv(d, nf) - deriv(d, 0.0));
    }
    Ok(s)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PressureBreakdown {
    pub total: f64,
    /// −Zπ²/(240L⁴)
    pub leading: f64,
    pub y0_corrections: f64,
    pub lambda2_correction: f64,
    pub terms_used: usize,
}

/// g(x) + 1/240 where g(x) = eˣ(1+eˣ)/(2x(eˣ−1)³) − 1/x⁴.
fn stairs_y0_part(x: f64) -> Result<f64> {
    if x < 1.0 {
        // Σ_{m≥3} B₂ₘ(2m−1)(2m−2)x^{2m−4}/(2(2m)!)
        let mut s = 0.0;
        let mut fact = 24.0;
        for m in 3..=10u32 {
            fact *= ((2 * m - 1) * (2 * m)) as f64;
            let c = bernoulli_number(2 * m)? * ((2 * m - 1) * (2 * m - 2)) as f64 / (2.0 * fact);
            s += c * x.powi(2 * m as i32 - 4);
        }
        Ok(s)
    } else {
        let em = x.exp_m1();
        let e = x.exp();
        Ok(e * (1.0 + e) / (2.0 * x * em.powi(3)) - x.powi(-4) + 1.0 / 240.0)
    }
}

/// 2/3 − Σⱼ Δx (jΔx)² E₁(jΔx).
pub fn stairs_gap(dx: f64) -> Result<(f64, usize)> {
    if !(dx > 0.0) {
        return Err(Error::Domain(format!("dx must be positive, got {dx}")));
    }
    if dx < 0.1 {
        // ζ′(−2)Δx³ + Σ_{odd p≥3} Δx^{p+1} ζ(−p)/((p−2)(p−2)!)
        let mut s = ZETA_PRIME_MINUS_2 * dx.powi(3);
        let mut fact = 1.0;
        for p in (3..=19u32).step_by(2) {
            if p > 3 {
                fact *= ((p - 3) * (p - 2)) as f64;
            }
            s += dx.powi(p as i32 + 1) * zeta_negative_odd(p)? / ((p - 2) as f64 * fact);
        }
        return Ok((-s, 0));
    }
    let mut s = 0.0;
    let mut j = 1usize;
    loop {
        let t = j as f64 * dx;
        let term = dx * t * t * expint_e1(t)?;
        s += term;
        if term < 1e-17 * s {
            break;
        }
        j += 1;
        if j > 100_000 {
            return Err(Error::NonConvergence("stairs sum".into()));
        }
    }
    Ok((2.0 / 3.0 - s, j))
}

/// Crude bound ∫₀^{Δx/2} x²E₁(x) dx = (a³/3)E₁(a) + γ(3, a)/3 with a = Δx/2.
pub fn stairs_gap_crude(dx: f64) -> Result<f64> {
    let a = 0.5 * dx;
    // γ(3, a) = 2 − e^{−a}(a² + 2a + 2), by series when a is small
    let lower = if a < 0.1 {
        let mut s = 0.0;
        let mut term = a.powi(3) / 3.0;
        for k in 0..30 {
            s += term;
            term *= -a * (3 + k) as f64 / (((k + 1) * (4 + k)) as f64);
        }
        s
    } else {
        2.0 - (-a).exp() * (a * a + 2.0 * a + 2.0)
    };
    Ok(a.powi(3) / 3.0 * expint_e1(a)? + lower / 3.0)
}

fn lorentz_params(profile: &VacuumProfile) -> Result<(f64, f64)> {
    match profile.kind {
        ProfileKind::LorentzExp { lambda2, y0 } => Ok((lambda2, y0)),
        ProfileKind::BoxShell { .. } => Err(Error::Unsupported(
            "3+1 pressure needs the exponential profile".into(),
        )),
    }
}

/// 3+1 pressure for the exponential profile, split into parts.
pub fn pressure_3p1(profile: &VacuumProfile, l: f64, spec: &QuadratureSpec) -> Result<PressureBreakdown> {
    spec.validate()?;
    let (b, y0) = lorentz_params(profile)?;
    if !(l > 0.0) {
        return Err(Error::Domain(format!("L must be positive, got {l}")));
    }
    if !(y0 / l < 0.1) {
        return Err(Error::Domain(format!(
            "expansion needs y0/L < 0.1, got {}",
            y0 / l
        )));
    }
    let z = profile.z;
    let x = PI * y0 / l;
    let l4 = l.powi(4);
    let leading = -z * PI * PI / (240.0 * l4);
    let y0_corrections = z * PI * PI / l4 * stairs_y0_part(x)?;
    let pref = z / (2.0 * PI * PI * y0.powi(4));
    let (lambda2_correction, terms_used) = if b == 0.0 {
        (0.0, 0)
    } else if b / x < 1e-10 {
        // Γ(1,t,b) = e^{−t} − bΓ(0,t) + O(b²) and λ⁴K₄(2λ) = 3 − λ² + O(λ⁴)
        let (gap, n) = stairs_gap(x)?;
        (pref * b * gap, n)
    } else {
        let lam = b.sqrt();
        let k4_part = b * b * bessel_k(4, 2.0 * lam)? - 3.0;
        let mut s = 0.0;
        let mut small = 0;
        let mut j = 1usize;
        loop {
            let t = j as f64 * x;
            let term = x * t * t * gen_incomplete_gamma_diff(t, b)?;
            s += term;
            if term.abs() < 1e-17 * s.abs() {
                small += 1;
                if small >= 3 {
                    break;
                }
            } else {
                small = 0;
            }
            j += 1;
            if j > 10_000_000 {
                return Err(Error::NonConvergence("Gamma(1, jx, b) sum does not decay".into()));
            }
        }
        (pref * (s - 2.0 / 3.0 * k4_part), j)
    };
    Ok(PressureBreakdown {
        total: leading + y0_corrections + lambda2_correction,
        leading,
        y0_corrections,
        lambda2_correction,
        terms_used,
    })
}

/// The unsplit mode sum Σⱼ (Zj²π/2L³y₀)Γ(1, jπy₀/L, λ²) − (Zλ⁴/3π²y₀⁴)K₄(2λ).
/// Loses digits to cancellation as y₀/L shrinks; meant as a cross-check.
pub fn pressure_3p1_direct(profile: &VacuumProfile, l: f64) -> Result<f64> {
    let (b, y0) = lorentz_params(profile)?;
    let z = profile.z;
    let x = PI * y0 / l;
    let k4 = if b == 0.0 { 3.0 } else { b * b * bessel_k(4, 2.0 * b.sqrt())? };
    let mut s = 0.0;
    let mut small = 0;
    let mut j = 1usize;
    loop {
        let jf = j as f64;
        let term = jf * jf * gen_incomplete_gamma(1.0, jf * x, b)?;
        s += term;
        if term < 1e-17 * s {
            small += 1;
            if small >= 3 {
                break;
            }
        } else {
            small = 0;
        }
        j += 1;
        if j > 10_000_000 {
            return Err(Error::NonConvergence("direct mode sum".into()));
        }
    }
    Ok(z * PI / (2.0 * l.powi(3) * y0) * s - 2.0 * z * k4 / (6.0 * PI * PI * y0.powi(4)))
}

/// Multiply by ħc/ℓ⁴ to get pascal.
pub fn to_physical_pressure(p: f64) -> f64 {
    p * pressure_unit_pa()
}
