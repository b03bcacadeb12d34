//! Special functions: sine and cosine integrals, modified Bessel K,
//! complex K₀, Lambert W on every branch, the generalized incomplete gamma
//! function and even Bernoulli numbers.

use std::f64::consts::{E, FRAC_PI_2, PI};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::quadrature::{integrate_panels, QuadratureSpec};

pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_860_606_512_090_082;
/// ζ′(−2) = −ζ(3)/(4π²)
pub const ZETA_PRIME_MINUS_2: f64 = -0.030_448_457_058_393_270_780;

pub type ComplexValue = Complex64;

fn tight() -> QuadratureSpec {
    QuadratureSpec {
        abs_tol: 1e-300,
        rel_tol: 1e-13,
        max_subdivisions: 2000,
        ..Default::default()
    }
}

/// (Si(x), Ci(x)) for x > 0.
fn si_ci_positive(t: f64) -> (f64, f64) {
    const EPS: f64 = 1e-16;
    if t < 2.0 {
        if t < 1e-150 {
            return (t, EULER_GAMMA + t.ln());
        }
        // power series, alternating between the odd and even parts
        let mut sum = 0.0;
        let mut sums = 0.0;
        let mut sumc = 0.0;
        let mut sign = 1.0;
        let mut fact = 1.0;
        let mut odd = true;
        for k in 1..200 {
            fact *= t / k as f64;
            let term = fact / k as f64;
            sum += sign * term;
            let err = term / sum.abs();
            if odd {
                sign = -sign;
                sums = sum;
                sum = sumc;
            } else {
                sumc = sum;
                sum = sums;
            }
            if err < EPS {
                break;
            }
            odd = !odd;
        }
        (sums, sumc + t.ln() + EULER_GAMMA)
    } else {
        // continued fraction for E1(it), modified Lentz
        let tiny = 1e-300;
        let mut b = Complex64::new(1.0, t);
        let mut c = Complex64::new(1.0 / tiny, 0.0);
        let mut d = 1.0 / b;
        let mut h = d;
        for i in 2..1000 {
            let a = -((i - 1) * (i - 1)) as f64;
            b += 2.0;
            d = 1.0 / (a * d + b);
            c = b + a / c;
            let del = c * d;
            h *= del;
            if (del.re - 1.0).abs() + del.im.abs() < EPS {
                break;
            }
        }
        let h = Complex64::new(t.cos(), -t.sin()) * h;
        (FRAC_PI_2 + h.im, -h.re)
    }
}

/// Si(x) = ∫₀ˣ sin t / t dt.
pub fn sine_integral(x: f64) -> f64 {
    if x == 0.0 {
        0.0
    } else if x < 0.0 {
        -si_ci_positive(-x).0
    } else {
        si_ci_positive(x).0
    }
}

/// Ci(x) = γ + ln x + ∫₀ˣ (cos t − 1)/t dt.
pub fn cosine_integral(x: f64) -> Result<f64> {
    if x > 0.0 && x.is_finite() {
        Ok(si_ci_positive(x).1)
    } else if x == f64::INFINITY {
        Ok(0.0)
    } else {
        Err(Error::Domain(format!("Ci needs x > 0, got {x}")))
    }
}

/// Ci(2x) − ln x, stable down to x → 0 where it tends to γ + ln 2.
pub fn ci_log_combination(x: f64) -> Result<f64> {
    if x <= 0.0 {
        return Err(Error::Domain(format!("x must be positive, got {x}")));
    }
    if x < 1.0 {
        // Ci(2x) − ln(2x) = γ + Σ (−1)^k (2x)^{2k}/(2k (2k)!)
        let y = 2.0 * x;
        let mut s = 0.0;
        let mut term = 1.0;
        for k in 1..40 {
            term *= -y * y / ((2 * k - 1) as f64 * (2 * k) as f64);
            let add = term / (2 * k) as f64;
            s += add;
            if add.abs() < 1e-17 * s.abs().max(1e-300) {
                break;
            }
        }
        Ok(EULER_GAMMA + s + 2f64.ln())
    } else {
        Ok(cosine_integral(2.0 * x)? - x.ln())
    }
}

fn k0_k1_series(x: f64) -> (f64, f64) {
    let y = 0.25 * x * x;
    let ln_half = (0.5 * x).ln();
    let mut i0 = 0.0;
    let mut k0_tail = 0.0;
    let mut i1 = 0.0;
    let mut k1_tail = 0.0;
    let mut term0 = 1.0; // y^k / (k!)^2
    let mut term1 = 1.0; // y^k / (k!(k+1)!)
    let mut h = 0.0; // harmonic number H_k
    for k in 0..60 {
        if k > 0 {
            let kf = k as f64;
            term0 *= y / (kf * kf);
            term1 *= y / (kf * (kf + 1.0));
            h += 1.0 / kf;
        }
        let h_next = h + 1.0 / (k as f64 + 1.0);
        i0 += term0;
        k0_tail += h * term0;
        i1 += term1;
        // ψ(k+1) + ψ(k+2) = −2γ + H_k + H_{k+1}
        k1_tail += (-2.0 * EULER_GAMMA + h + h_next) * term1;
        if term0 < 1e-18 * i0 && k > 2 {
            break;
        }
    }
    let i1 = 0.5 * x * i1;
    let k0 = -(ln_half + EULER_GAMMA) * i0 + k0_tail;
    let k1 = 1.0 / x + ln_half * i1 - 0.25 * x * k1_tail;
    (k0, k1)
}

fn k_integral(nu: f64, x: f64) -> f64 {
    // K_ν(x) = e^{−x} ∫₀^∞ exp(−2x sinh²(t/2)) cosh(νt) dt
    let tmax = (1.0 + 800.0 / x).acosh();
    let f = |t: f64| {
        let s = (0.5 * t).sinh();
        (-2.0 * x * s * s).exp() * (nu * t).cosh()
    };
    let est = integrate_panels(f, &[0.0, 0.25 * tmax, tmax], &tight())
        .map(|e| e.value)
        .unwrap_or(f64::NAN);
    est * (-x).exp()
}

/// Modified Bessel function of the second kind for integer order 0..=4.
pub fn bessel_k(order: u32, x: f64) -> Result<f64> {
    if !(x > 0.0) {
        return Err(Error::Domain(format!("K needs x > 0, got {x}")));
    }
    if order > 4 {
        return Err(Error::Domain(format!("order {order} not supported")));
    }
    let (k0, k1) = if x <= 2.0 {
        k0_k1_series(x)
    } else {
        (k_integral(0.0, x), k_integral(1.0, x))
    };
    let mut prev = k0;
    let mut cur = k1;
    if order == 0 {
        return Ok(k0);
    }
    for nu in 1..order {
        let next = prev + 2.0 * nu as f64 / x * cur;
        prev = cur;
        cur = next;
    }
    Ok(cur)
}

/// K₀(z), principal branch, cut along the negative real axis.
pub fn bessel_k0_complex(z: Complex64) -> Result<Complex64> {
    if z.im == 0.0 && z.re <= 0.0 {
        return Err(Error::Domain(format!("K0 branch cut at z = {z}")));
    }
    if !(z.re.is_finite() && z.im.is_finite()) {
        return Err(Error::Domain("K0 argument must be finite".into()));
    }
    if z.norm() < 2.0 {
        let y = 0.25 * z * z;
        let mut i0 = Complex64::new(0.0, 0.0);
        let mut tail = Complex64::new(0.0, 0.0);
        let mut term = Complex64::new(1.0, 0.0);
        let mut h = 0.0;
        for k in 0..80 {
            if k > 0 {
                let kf = k as f64;
                term *= y / (kf * kf);
                h += 1.0 / kf;
            }
            i0 += term;
            tail += term * h;
            if term.norm() < 1e-18 && k > 2 {
                break;
            }
        }
        Ok(-((0.5 * z).ln() + EULER_GAMMA) * i0 + tail)
    } else if z.re > 0.0 {
        let tmax = (1.0 + 800.0 / z.re).acosh();
        let f = |t: f64| {
            let s = (0.5 * t).sinh();
            (-2.0 * z * s * s).exp()
        };
        let mut pts = vec![0.0];
        let n = 8;
        for i in 1..=n {
            pts.push(tmax * i as f64 / n as f64);
        }
        let v = integrate_panels(f, &pts, &tight())?.value;
        Ok(v * (-z).exp())
    } else {
        Err(Error::Domain(format!(
            "K0 integral representation needs Re z > 0 for |z| >= 2, got {z}"
        )))
    }
}

fn lambert_branch_point(z: Complex64, sign: f64) -> Complex64 {
    let p = (2.0 * (E * z + 1.0)).sqrt() * sign;
    -1.0 + p - p * p / 3.0 + 11.0 / 72.0 * p * p * p
}

fn lambert_asymptotic(k: i64, z: Complex64) -> Complex64 {
    let l1 = z.ln() + Complex64::new(0.0, 2.0 * PI * k as f64);
    let l2 = l1.ln();
    l1 - l2 + l2 / l1
}

/// Lambert W on branch `k` (standard branch numbering), W e^W = z.
pub fn lambert_w(k: i64, z: Complex64) -> Result<Complex64> {
    if z == Complex64::new(0.0, 0.0) {
        return if k == 0 {
            Ok(z)
        } else {
            Err(Error::Domain(format!("W_{k}(0) is -infinity")))
        };
    }
    if !(z.re.is_finite() && z.im.is_finite()) {
        return Err(Error::Domain("Lambert W argument must be finite".into()));
    }
    let near_bp = (z + (-1.0f64).exp()).norm() < 0.3;
    let mut w = match k {
        0 if near_bp => lambert_branch_point(z, 1.0),
        0 if z.norm() < 3.0 && z.re > -0.5 => (1.0 + z).ln(),
        -1 if near_bp && z.im >= 0.0 => lambert_branch_point(z, -1.0),
        1 if near_bp && z.im < 0.0 => lambert_branch_point(z, -1.0),
        _ => lambert_asymptotic(k, z),
    };
    for _ in 0..100 {
        let ew = w.exp();
        let f = w * ew - z;
        let wp1 = w + 1.0;
        let step = f / (ew * wp1 - (w + 2.0) * f / (2.0 * wp1));
        if !(step.re.is_finite() && step.im.is_finite()) {
            break;
        }
        w -= step;
        if step.norm() <= 1e-15 * (1.0 + w.norm()) {
            return Ok(w);
        }
    }
    // accept if the defining residual is already at round-off level
    if (w * w.exp() - z).norm() <= 1e-13 * (1.0 + z.norm()) {
        Ok(w)
    } else {
        Err(Error::NonConvergence(format!("Lambert W_{k}({z})")))
    }
}

/// Γ(α, x, b) = ∫ₓ^∞ t^{α−1} e^{−t−b/t} dt.
pub fn gen_incomplete_gamma(alpha: f64, x: f64, b: f64) -> Result<f64> {
    if !(x > 0.0) || b < 0.0 || !alpha.is_finite() {
        return Err(Error::Domain(format!(
            "generalized incomplete gamma needs x > 0, b >= 0 (x={x}, b={b})"
        )));
    }
    // t = e^s flattens both the t → 0 and the b/t regions
    let f = |s: f64| {
        let t = s.exp();
        (alpha * s - t - b / t).exp()
    };
    log_axis_integral(f, alpha, x, b)
}

/// Γ(1, x, b) − e^{−x} = ∫ₓ^∞ e^{−t} (e^{−b/t} − 1) dt without cancellation.
pub fn gen_incomplete_gamma_diff(x: f64, b: f64) -> Result<f64> {
    if !(x > 0.0) || b < 0.0 {
        return Err(Error::Domain(format!("need x > 0, b >= 0 (x={x}, b={b})")));
    }
    if b == 0.0 {
        return Ok(0.0);
    }
    let f = |s: f64| {
        let t = s.exp();
        (s - t).exp() * (-b / t).exp_m1()
    };
    log_axis_integral(f, 1.0, x, b)
}

fn log_axis_integral<F: FnMut(f64) -> f64>(f: F, alpha: f64, x: f64, b: f64) -> Result<f64> {
    let lo = x.ln();
    let hi = (x.max(alpha.abs()) + 800.0 + 10.0 * alpha.abs()).ln();
    let mut pts = vec![lo];
    for cand in [0.5 * b.ln(), 0.0, (alpha.abs() + 1.0).ln()] {
        if cand.is_finite() && cand > lo && cand < hi {
            pts.push(cand);
        }
    }
    pts.push(hi);
    pts.sort_by(f64::total_cmp);
    pts.dedup();
    let spec = QuadratureSpec {
        abs_tol: 1e-300,
        rel_tol: 1e-13,
        max_subdivisions: 4000,
        ..Default::default()
    };
    integrate_panels(f, &pts, &spec).map(|e| e.value)
}

/// Exponential integral E₁(x) = Γ(0, x).
pub fn expint_e1(x: f64) -> Result<f64> {
    if !(x > 0.0) {
        return Err(Error::Domain(format!("E1 needs x > 0, got {x}")));
    }
    if x <= 1.0 {
        let mut sum = 0.0;
        let mut fact = 1.0;
        for k in 1..100 {
            fact *= -x / k as f64;
            let del = -fact / k as f64;
            sum += del;
            if del.abs() < 1e-17 * sum.abs().max(1e-300) {
                break;
            }
        }
        Ok(-x.ln() - EULER_GAMMA + sum)
    } else {
        let tiny = 1e-300;
        let mut b = x + 1.0;
        let mut c = 1.0 / tiny;
        let mut d = 1.0 / b;
        let mut h = d;
        for i in 1..1000 {
            let an = -((i * i) as f64);
            b += 2.0;
            d = 1.0 / (an * d + b);
            c = b + an / c;
            let del = c * d;
            h *= del;
            if (del - 1.0).abs() < 1e-16 {
                break;
            }
        }
        Ok(h * (-x).exp())
    }
}

const BERNOULLI: [(i64, i64); 10] = [
    (1, 6),
    (-1, 30),
    (1, 42),
    (-1, 30),
    (5, 66),
    (-691, 2730),
    (7, 6),
    (-3617, 510),
    (43867, 798),
    (-174611, 330),
];

/// B_index for even index 2..=20 as (numerator, denominator).
pub fn bernoulli_rational(index: u32) -> Result<(i64, i64)> {
    if index == 0 {
        return Ok((1, 1));
    }
    if !index.is_multiple_of(2) || index > 20 {
        return Err(Error::Domain(format!(
            "Bernoulli index must be even and at most 20, got {index}"
        )));
    }
    Ok(BERNOULLI[(index / 2 - 1) as usize])
}

pub fn bernoulli_number(index: u32) -> Result<f64> {
    let (p, q) = bernoulli_rational(index)?;
    Ok(p as f64 / q as f64)
}

/// ζ(−p) for odd p ≥ 1 via −B_{p+1}/(p+1).
pub fn zeta_negative_odd(p: u32) -> Result<f64> {
    if p.is_multiple_of(2) {
        return Err(Error::Domain(format!("p must be odd, got {p}")));
    }
    Ok(-bernoulli_number(p + 1)? / (p + 1) as f64)
}
