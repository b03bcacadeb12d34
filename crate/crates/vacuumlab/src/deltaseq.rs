//! Delta sequences: triangular (Λ), M-shaped, shifted symmetric pairs and the
//! principal-value sequence, with limit-ordered filtering integrals,
//! products, convolutions and composition with a function.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quadrature::{integrate_oscillatory_tail, integrate_panels, integrate_with_points, richardson, QuadratureSpec};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Shape {
    LambdaTriangle,
    MShape,
    ShiftedPair,
    PrincipalValue,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DeltaFamily {
    pub shape: Shape,
    pub n: u64,
    /// shift, ShiftedPair only
    pub j: u64,
    /// value at the origin, MShape only
    pub a: f64,
}

/// Outcome of a limit that may fail to exist.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Limit {
    Finite(f64),
    Divergent,
}

impl Limit {
    pub fn finite(self) -> Option<f64> {
        match self {
            Limit::Finite(v) => Some(v),
            Limit::Divergent => None,
        }
    }
}

/// Heaviside step with θ(0) = 1/2.
pub fn theta(x: f64) -> f64 {
    if x > 0.0 {
        1.0
    } else if x < 0.0 {
        0.0
    } else {
        0.5
    }
}

/// Sign with sgn(0) = 0.
pub fn sgn(x: f64) -> f64 {
    if x > 0.0 {
        1.0
    } else if x < 0.0 {
        -1.0
    } else {
        0.0
    }
}

fn lambda_eval(n: f64, k: f64) -> f64 {
    n * tent(n * k)
}

/// max(0, 1 − |u|); working in u = nk keeps huge indices well conditioned.
fn tent(u: f64) -> f64 {
    let a = u.abs();
    if a < 1.0 {
        1.0 - a
    } else {
        0.0
    }
}

fn sinc2(u: f64) -> f64 {
    if u.abs() < 1e-4 {
        1.0 - u * u / 3.0
    } else {
        let s = u.sin() / u;
        s * s
    }
}

impl DeltaFamily {
    pub fn lambda(n: u64) -> Self {
        DeltaFamily {
            shape: Shape::LambdaTriangle,
            n,
            j: 0,
            a: 0.0,
        }
    }

    pub fn m_shape(n: u64, a: f64) -> Self {
        DeltaFamily {
            shape: Shape::MShape,
            n,
            j: 0,
            a,
        }
    }

    pub fn shifted_pair(n: u64, j: u64) -> Self {
        DeltaFamily {
            shape: Shape::ShiftedPair,
            n,
            j,
            a: 0.0,
        }
    }

    pub fn principal_value(n: u64) -> Self {
        DeltaFamily {
            shape: Shape::PrincipalValue,
            n,
            j: 0,
            a: 0.0,
        }
    }

    pub fn with_n(&self, n: u64) -> Self {
        DeltaFamily { n, ..*self }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(Error::Domain("sequence index n must be positive".into()));
        }
        if self.shape == Shape::MShape && !(self.a >= 0.0 && self.a.is_finite()) {
            return Err(Error::Domain(format!("M-shape height must be >= 0, got {}", self.a)));
        }
        Ok(())
    }

    fn nf(&self) -> f64 {
        self.n as f64
    }

    /// Pointwise value of the n-th member.
    pub fn eval(&self, k: f64) -> f64 {
        let n = self.nf();
        match self.shape {
            Shape::LambdaTriangle => lambda_eval(n, k),
            Shape::MShape => {
                let eps = 1.0 / n;
                let a = self.a;
                let q = eps / 4.0;
                if k < -2.0 * q || k >= 2.0 * q {
                    0.0
                } else if k < -q {
                    (4.0 * k / eps + 2.0) * (2.0 / eps - a / 2.0)
                } else if k < 0.0 {
                    -(4.0 * k / eps) * (2.0 / eps - 1.5 * a) + a
                } else if k < q {
                    (4.0 * k / eps) * (2.0 / eps - 1.5 * a) + a
                } else {
                    (-4.0 * k / eps + 2.0) * (2.0 / eps - a / 2.0)
                }
            }
            Shape::ShiftedPair => {
                let (u, j) = (n * k, self.j as f64);
                0.5 * n * (tent(u - j) + tent(-u - j))
            }
            Shape::PrincipalValue => {
                if k == 0.0 {
                    n / PI
                } else {
                    (n * k).sin() / (PI * k)
                }
            }
        }
    }

    /// Compact support, if any.
    pub fn support(&self) -> Option<(f64, f64)> {
        let n = self.nf();
        match self.shape {
            Shape::LambdaTriangle => Some((-1.0 / n, 1.0 / n)),
            Shape::MShape => Some((-0.5 / n, 0.5 / n)),
            Shape::ShiftedPair => {
                let j = self.j as f64;
                Some((-(j + 1.0) / n, (j + 1.0) / n))
            }
            Shape::PrincipalValue => None,
        }
    }

    /// Points where the member is not smooth.
    pub fn knots(&self) -> Vec<f64> {
        let n = self.nf();
        let mut v = match self.shape {
            Shape::LambdaTriangle => vec![-1.0 / n, 0.0, 1.0 / n],
            Shape::MShape => {
                let e = 1.0 / n;
                vec![-e / 2.0, -e / 4.0, 0.0, e / 4.0, e / 2.0]
            }
            Shape::ShiftedPair => {
                let j = self.j as f64;
                let mut v = Vec::new();
                for c in [j - 1.0, j, j + 1.0] {
                    v.push(c / n);
                    v.push(-c / n);
                }
                v
            }
            Shape::PrincipalValue => vec![0.0],
        };
        v.sort_by(f64::total_cmp);
        v.dedup();
        v
    }

    /// The value the sequence takes at the origin, which keys its class.
    pub fn class_key(&self) -> f64 {
        match self.shape {
            Shape::LambdaTriangle | Shape::PrincipalValue => f64::INFINITY,
            Shape::MShape => self.a,
            Shape::ShiftedPair => {
                if self.j == 0 {
                    f64::INFINITY
                } else {
                    0.0
                }
            }
        }
    }

    /// (1/2π) ∫ δₙ(k) e^{ikx} dk in closed form.
    pub fn fourier(&self, x: f64) -> f64 {
        let n = self.nf();
        match self.shape {
            Shape::LambdaTriangle => sinc2(x / (2.0 * n)) / (2.0 * PI),
            Shape::ShiftedPair => {
                sinc2(x / (2.0 * n)) / (2.0 * PI) * (self.j as f64 * x / n).cos()
            }
            Shape::MShape => {
                let eps = 1.0 / n;
                let a = self.a;
                let ex = eps * x;
                if ex.abs() < 1e-3 {
                    // series in εx about 0
                    let u = ex;
                    return (1.0 - (14.0 - 3.0 * eps * a) / 384.0 * u * u) / (2.0 * PI);
                }
                let s = (ex / 8.0).sin();
                8.0 / PI * (eps * a + (4.0 - eps * a) * (ex / 4.0).cos()) / (ex * ex) * s * s
            }
            Shape::PrincipalValue => {
                let ax = x.abs();
                if ax < n {
                    1.0 / (2.0 * PI)
                } else if ax == n {
                    1.0 / (4.0 * PI)
                } else {
                    0.0
                }
            }
        }
    }
}

/// ∫ δₙ over ℝ by quadrature (compact families only).
pub fn total_mass(family: &DeltaFamily, spec: &QuadratureSpec) -> Result<f64> {
    family.validate()?;
    if family.support().is_none() {
        return Err(Error::Unsupported("total mass needs compact support".into()));
    }
    integrate_with_points(|k| family.eval(k), &family.knots(), spec)
}

/// ∫ℝ fourier(family, x) dx by period-aligned oscillatory quadrature.
pub fn fourier_integral(family: &DeltaFamily, spec: &QuadratureSpec) -> Result<f64> {
    family.validate()?;
    let n = family.nf();
    match family.shape {
        Shape::PrincipalValue => Ok(n / PI),
        _ => {
            // even integrand; the slowest oscillation of sin²(x/2n) has period 2πn
            let period = 2.0 * PI * n;
            let half = integrate_oscillatory_tail(|x| family.fourier(x), 0.0, period, spec)?;
            Ok(2.0 * half)
        }
    }
}

fn integration_points(families: &[DeltaFamily], extra: &[f64]) -> Vec<f64> {
    let mut pts: Vec<f64> = families.iter().flat_map(|f| f.knots()).collect();
    pts.extend_from_slice(extra);
    let (lo, hi) = families
        .iter()
        .filter_map(|f| f.support())
        .fold((f64::NEG_INFINITY, f64::INFINITY), |(l, h), (a, b)| (l.max(a), h.min(b)));
    pts.retain(|p| *p >= lo && *p <= hi);
    pts.push(lo);
    pts.push(hi);
    pts.sort_by(f64::total_cmp);
    pts.dedup();
    pts
}

const SWEEP_START: u32 = 4;
const SWEEP_LEN: u32 = 9;

/// n = base·2⁴, base·2⁵, ... so that an inner index always outruns the
/// outer one.
fn sweep_indices(base: u64) -> impl Iterator<Item = u64> {
    (SWEEP_START..SWEEP_START + SWEEP_LEN).map(move |p| base << p)
}

/// Extrapolate a sequence sampled at n = 2⁴, 2⁵, ... toward n → ∞.
/// `noise` bounds the error already present in the samples; the result
/// carries an error estimate for the next level of nesting.
fn extrapolate(seq: &[f64], tol: f64, noise: f64) -> Result<(Limit, f64)> {
    let m = seq.len();
    let last = seq[m - 1];
    let scale = seq.iter().fold(0.0f64, |a, v| a.max(v.abs())).max(1.0);
    // growth like n (or faster) means no limit
    if m >= 3 {
        let r1 = seq[m - 1] / seq[m - 2];
        let r2 = seq[m - 2] / seq[m - 3];
        if last.abs() > 1.0 && r1 > 1.6 && r2 > 1.6 {
            return Ok((Limit::Divergent, 0.0));
        }
    }
    // Richardson weights amplify sample noise by at most a few tens
    let slack = tol * scale + 64.0 * noise;
    let window = &seq[m.saturating_sub(5)..];
    let (a, b) = richardson(window);
    if (a - b).abs() <= slack {
        Ok((Limit::Finite(a), (a - b).abs().max(noise)))
    } else if (last - seq[m - 2]).abs() <= slack {
        Ok((Limit::Finite(last), (last - seq[m - 2]).abs().max(noise)))
    } else {
        Err(Error::NonConvergence(format!(
            "extrapolants {a} and {b} differ by more than {tol}"
        )))
    }
}

/// limₙ ∫ δₙ(k) f(k) dk.
pub fn filtering_integral<F: Fn(f64) -> f64>(
    family: &DeltaFamily,
    f: F,
    spec: &QuadratureSpec,
) -> Result<f64> {
    product_filtering_integral(std::slice::from_ref(family), f, spec, LimitOrder::InnermostFirst)?
        .finite()
        .ok_or_else(|| Error::NonConvergence("filtering integral diverged".into()))
}

/// Which index is driven to its limit first in a product of deltas.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LimitOrder {
    /// the last factor's index is taken to infinity first
    InnermostFirst,
    /// the first factor's index is taken to infinity first
    OutermostFirst,
}

/// lim ∫ Π δ_{n_i}(k) f(k) dk with one independent index per factor; each
/// limit is an index sweep with Richardson extrapolation.
pub fn product_filtering_integral<F: Fn(f64) -> f64>(
    families: &[DeltaFamily],
    f: F,
    spec: &QuadratureSpec,
    order: LimitOrder,
) -> Result<Limit> {
    if families.is_empty() {
        return Err(Error::Domain("need at least one factor".into()));
    }
    for fam in families {
        fam.validate()?;
        if fam.shape == Shape::PrincipalValue {
            return Err(Error::Unsupported(
                "principal-value sequence has no compact support".into(),
            ));
        }
    }
    let key = families[0].class_key();
    for fam in &families[1..] {
        let k2 = fam.class_key();
        if !(key == k2 || (key.is_infinite() && k2.is_infinite())) {
            return Err(Error::IncompatibleClasses(key, k2));
        }
    }
    let mut ordered: Vec<DeltaFamily> = families.to_vec();
    if order == LimitOrder::OutermostFirst {
        ordered.reverse();
    }
    nested_limit(&ordered, &f, 1, spec).map(|r| r.0)
}

fn nested_limit(
    fams: &[DeltaFamily],
    f: &dyn Fn(f64) -> f64,
    base: u64,
    spec: &QuadratureSpec,
) -> Result<(Limit, f64)> {
    let (outer, rest) = fams.split_first().expect("non-empty");
    let mut seq = Vec::new();
    let mut noise = 0.0f64;
    for n in sweep_indices(base) {
        let fam = outer.with_n(n);
        let (value, err) = if rest.is_empty() {
            let pts = integration_points(&[fam], &[0.0]);
            let est = integrate_panels(|k| fam.eval(k) * f(k), &pts, spec)?;
            (est.value, est.error)
        } else {
            let g = |k: f64| fam.eval(k) * f(k);
            match nested_limit(rest, &g, n, spec)? {
                (Limit::Finite(v), e) => (v, e),
                (Limit::Divergent, _) => return Ok((Limit::Divergent, 0.0)),
            }
        };
        noise = noise.max(err);
        seq.push(value);
    }
    extrapolate(&seq, spec.rel_tol.max(1e-10), noise)
}

/// ∫ δ(k)^power f(k) dk with independent indices per factor.
pub fn power_filtering_integral<F: Fn(f64) -> f64>(
    family: &DeltaFamily,
    power: u32,
    f: F,
    spec: &QuadratureSpec,
) -> Result<Limit> {
    if power == 0 {
        return Err(Error::Domain("power must be at least 1".into()));
    }
    let fams = vec![*family; power as usize];
    product_filtering_integral(&fams, f, spec, LimitOrder::InnermostFirst)
}

/// δ*ₙₘ(k) = ∫ δₙ(k − k′) δₘ(k′) dk′.
pub fn convolve_eval(
    fam1: &DeltaFamily,
    n: u64,
    fam2: &DeltaFamily,
    m: u64,
    k: f64,
    spec: &QuadratureSpec,
) -> Result<f64> {
    let d1 = fam1.with_n(n);
    let d2 = fam2.with_n(m);
    d1.validate()?;
    d2.validate()?;
    let (Some((a1, b1)), Some((a2, b2))) = (d1.support(), d2.support()) else {
        return Err(Error::Unsupported("convolution needs square-integrable compact members".into()));
    };
    let lo = a2.max(k - b1);
    let hi = b2.min(k - a1);
    if lo >= hi {
        return Ok(0.0);
    }
    let mut pts = vec![lo, hi];
    pts.extend(d2.knots());
    pts.extend(d1.knots().iter().map(|c| k - c));
    pts.retain(|p| *p >= lo && *p <= hi);
    pts.sort_by(f64::total_cmp);
    pts.dedup();
    integrate_with_points(|kp| d1.eval(k - kp) * d2.eval(kp), &pts, spec)
}

/// Breakpoints of δ*ₙₘ as a function of k.
pub fn convolution_knots(fam1: &DeltaFamily, n: u64, fam2: &DeltaFamily, m: u64) -> Vec<f64> {
    let k1 = fam1.with_n(n).knots();
    let k2 = fam2.with_n(m).knots();
    let mut v: Vec<f64> = k1.iter().flat_map(|a| k2.iter().map(move |b| a + b)).collect();
    v.sort_by(f64::total_cmp);
    v.dedup_by(|a, b| (*a - *b).abs() < 1e-15);
    v
}

/// Which way the two indices of δ*ₙₘ(k) go to infinity.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConvolutionLimit {
    /// n fixed, m → ∞
    SecondIndex(u64),
    /// n = m → ∞
    Diagonal,
}

pub fn convolution_limit(
    fam1: &DeltaFamily,
    fam2: &DeltaFamily,
    k: f64,
    how: ConvolutionLimit,
    spec: &QuadratureSpec,
) -> Result<Limit> {
    let mut seq = Vec::new();
    let base = match how {
        ConvolutionLimit::SecondIndex(n) => n,
        ConvolutionLimit::Diagonal => 1,
    };
    for m in sweep_indices(base) {
        let v = match how {
            ConvolutionLimit::SecondIndex(n) => convolve_eval(fam1, n, fam2, m, k, spec)?,
            ConvolutionLimit::Diagonal => convolve_eval(fam1, m, fam2, m, k, spec)?,
        };
        seq.push(v);
    }
    extrapolate(&seq, spec.rel_tol.max(1e-10), 0.0).map(|r| r.0)
}

/// Density of a measure dμ(p) = ρ(p) dp.
pub struct MeasureDensity {
    pub rho: Box<dyn Fn(f64) -> f64 + Send + Sync>,
    pub is_constant: bool,
}

impl MeasureDensity {
    pub fn constant(c: f64) -> Self {
        MeasureDensity {
            rho: Box::new(move |_| c),
            is_constant: true,
        }
    }

    /// ρ(p) = 2√(p² + m²)
    pub fn relativistic(mass: f64) -> Self {
        MeasureDensity {
            rho: Box::new(move |p| 2.0 * (p * p + mass * mass).sqrt()),
            is_constant: false,
        }
    }
}

/// An M-shaped delta with height a can be adapted to the measure only if
/// a = 0 or the measure density is constant.
pub fn measure_consistency_check(rho: &MeasureDensity, a: f64) -> bool {
    a == 0.0 || rho.is_constant
}

/// Roots and weights 1/|f′| for δ[f(k)].
pub fn composed_delta_weights<F, G>(f: F, f_prime: G, roots: &[f64]) -> Result<Vec<(f64, f64)>>
where
    F: Fn(f64) -> f64,
    G: Fn(f64) -> f64,
{
    const SINGULAR: f64 = 1e-12;
    let mut out = Vec::with_capacity(roots.len());
    for &r in roots {
        let d = f_prime(r);
        if !(d.abs() > SINGULAR) {
            return Err(Error::SingularRoot(r));
        }
        let scale = 1.0 + r.abs() * d.abs();
        if f(r).abs() > 1e-9 * scale {
            return Err(Error::Domain(format!("f({r}) = {} is not a root", f(r))));
        }
        out.push((r, 1.0 / d.abs()));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn point_values() {
        assert_eq!(DeltaFamily::lambda(8).eval(0.0), 8.0);
        assert_eq!(DeltaFamily::lambda(8).eval(0.2), 0.0);
        assert_eq!(DeltaFamily::m_shape(2, 1.0).eval(0.0), 1.0);
        assert_eq!(DeltaFamily::shifted_pair(5, 1).eval(0.0), 0.0);
    }

    #[test]
    fn theta_at_zero() {
        assert_eq!(theta(0.0), 0.5);
        assert_eq!(sgn(0.0), 0.0);
    }

    #[test]
    fn m_shape_fourier_small_argument_matches_closed_form() {
        let d = DeltaFamily::m_shape(3, 0.7);
        let x = 0.0031 * 3.0; // εx just above the series switch
        let eps = 1.0 / 3.0;
        let ex: f64 = eps * x;
        let s = (ex / 8.0).sin();
        let closed = 8.0 / PI * (eps * 0.7 + (4.0 - eps * 0.7) * (ex / 4.0).cos()) / (ex * ex) * s * s;
        assert!((d.fourier(x) - closed).abs() < 1e-12);
        let y = 0.0029 * 3.0;
        let ey: f64 = eps * y;
        let s = (ey / 8.0).sin();
        let closed = 8.0 / PI * (eps * 0.7 + (4.0 - eps * 0.7) * (ey / 4.0).cos()) / (ey * ey) * s * s;
        assert!((d.fourier(y) - closed).abs() < 1e-9);
    }
}
