//! Adaptive Gauss-Kronrod quadrature (21-point rule, global subdivision),
//! semi-infinite mappings, period-aligned oscillatory tails and Richardson
//! extrapolation of sequences.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::ops::{Add, Mul, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum OscillatoryStrategy {
    /// Sum a convergent series term by term and close it with its remainder.
    SeriesTermwise,
    /// Integrate period-aligned segments and extrapolate in the cutoff.
    FilonSegments,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureSpec {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_subdivisions: usize,
    pub oscillatory_strategy: OscillatoryStrategy,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        QuadratureSpec {
            abs_tol: 1e-14,
            rel_tol: 1e-12,
            max_subdivisions: 4000,
            oscillatory_strategy: OscillatoryStrategy::FilonSegments,
        }
    }
}

impl QuadratureSpec {
    pub fn new(abs_tol: f64, rel_tol: f64, max_subdivisions: usize) -> Result<Self> {
        let spec = QuadratureSpec {
            abs_tol,
            rel_tol,
            max_subdivisions,
            ..Default::default()
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.abs_tol > 0.0 && self.rel_tol > 0.0) {
            return Err(Error::Domain("quadrature tolerances must be positive".into()));
        }
        if self.max_subdivisions == 0 {
            return Err(Error::Domain("max_subdivisions must be at least 1".into()));
        }
        Ok(())
    }

    fn tolerance(&self, value: f64) -> f64 {
        self.abs_tol.max(self.rel_tol * value)
    }
}

/// Values the integrator can accumulate.
pub trait QuadValue:
    Copy + Add<Output = Self> + Sub<Output = Self> + Mul<f64, Output = Self>
{
    fn zero() -> Self;
    fn magnitude(&self) -> f64;
}

impl QuadValue for f64 {
    fn zero() -> Self {
        0.0
    }
    fn magnitude(&self) -> f64 {
        self.abs()
    }
}

impl QuadValue for Complex64 {
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn magnitude(&self) -> f64 {
        self.norm()
    }
}

const XGK: [f64; 11] = [
    0.995_657_163_025_808_080_735_527_280_689_003,
    0.973_906_528_517_171_720_077_964_012_084_452,
    0.930_157_491_355_708_226_001_207_180_059_508,
    0.865_063_366_688_984_510_732_096_688_423_493,
    0.780_817_726_586_416_897_063_717_578_345_042,
    0.679_409_568_299_024_406_234_327_365_114_874,
    0.562_757_134_668_604_683_339_000_099_272_694,
    0.433_395_394_129_247_190_799_265_943_165_784,
    0.294_392_862_701_460_198_131_126_603_103_866,
    0.148_874_338_981_631_210_884_826_001_129_720,
    0.0,
];

const WGK: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062_192,
    0.032_558_162_307_964_727_478_818_972_459_390,
    0.054_755_896_574_351_996_031_381_300_244_580,
    0.075_039_674_810_919_952_767_043_140_916_190,
    0.093_125_454_583_697_605_535_065_465_083_366,
    0.109_387_158_802_297_641_899_210_590_325_805,
    0.123_491_976_262_065_851_077_600_525_952_894,
    0.134_709_217_311_473_325_928_054_001_771_707,
    0.142_775_938_577_060_080_797_094_273_138_717,
    0.147_739_104_901_338_491_374_841_515_972_068,
    0.149_445_554_002_916_905_664_936_468_389_821,
];

// Gauss weights for XGK[1], XGK[3], ..., XGK[9].
const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893_332,
    0.149_451_349_150_580_593_145_776_339_657_697,
    0.219_086_362_515_982_043_995_534_934_228_163,
    0.269_266_719_309_996_355_091_226_921_569_469,
    0.295_524_224_714_752_870_173_892_994_651_338,
];

/// One 21-point Kronrod panel. Returns (estimate, error estimate).
pub fn gk21<V: QuadValue, F: FnMut(f64) -> V>(f: &mut F, a: f64, b: f64) -> (V, f64) {
    let (v, e, _) = gk21_floor(f, a, b);
    (v, e)
}

/// gk21 plus the roundoff floor 50ε∫|f| that the error estimate cannot go below.
fn gk21_floor<V: QuadValue, F: FnMut(f64) -> V>(f: &mut F, a: f64, b: f64) -> (V, f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut kron = fc * WGK[10];
    let mut gauss = V::zero();
    let mut abs_sum = fc.magnitude() * WGK[10];
    let mut vals = [(V::zero(), V::zero()); 10];
    for (i, &x) in XGK[..10].iter().enumerate() {
        let dx = h * x;
        let f1 = f(c - dx);
        let f2 = f(c + dx);
        kron = kron + (f1 + f2) * WGK[i];
        abs_sum += (f1.magnitude() + f2.magnitude()) * WGK[i];
        if i % 2 == 1 {
            gauss = gauss + (f1 + f2) * WG[i / 2];
        }
        vals[i] = (f1, f2);
    }
    let mean = kron * 0.5;
    let mut asc = (fc - mean).magnitude() * WGK[10];
    for (i, (f1, f2)) in vals.iter().enumerate() {
        asc += ((*f1 - mean).magnitude() + (*f2 - mean).magnitude()) * WGK[i];
    }
    let result = kron * h;
    let resasc = asc * h.abs();
    let resabs = abs_sum * h.abs();
    let mut err = ((kron - gauss) * h).magnitude();
    if resasc != 0.0 && err != 0.0 {
        err = resasc * (200.0 * err / resasc).powf(1.5).min(1.0);
    }
    let floor = 50.0 * f64::EPSILON * resabs;
    if resabs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        err = err.max(floor);
    }
    (result, err, floor)
}

struct Panel<V> {
    a: f64,
    b: f64,
    value: V,
    err: f64,
    floor: f64,
}

impl<V> PartialEq for Panel<V> {
    fn eq(&self, other: &Self) -> bool {
        self.err == other.err
    }
}
impl<V> Eq for Panel<V> {}
impl<V> PartialOrd for Panel<V> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl<V> Ord for Panel<V> {
    fn cmp(&self, other: &Self) -> Ordering {
        self.err.total_cmp(&other.err)
    }
}

/// Result of an adaptive integration.
#[derive(Debug, Clone, Copy)]
pub struct Estimate<V> {
    pub value: V,
    pub error: f64,
    pub panels: usize,
}

/// Global adaptive integration over consecutive breakpoints.
pub fn integrate_panels<V: QuadValue, F: FnMut(f64) -> V>(
    mut f: F,
    points: &[f64],
    spec: &QuadratureSpec,
) -> Result<Estimate<V>> {
    if points.len() < 2 {
        return Ok(Estimate {
            value: V::zero(),
            error: 0.0,
            panels: 0,
        });
    }
    let mut heap = BinaryHeap::new();
    let mut total = V::zero();
    let mut total_err = 0.0;
    let mut total_floor = 0.0;
    for w in points.windows(2) {
        if w[1] == w[0] {
            continue;
        }
        if !(w[0].is_finite() && w[1].is_finite()) {
            return Err(Error::Domain("integration limits must be finite".into()));
        }
        let (v, e, fl) = gk21_floor(&mut f, w[0], w[1]);
        total = total + v;
        total_err += e;
        total_floor += fl;
        heap.push(Panel {
            a: w[0],
            b: w[1],
            value: v,
            err: e,
            floor: fl,
        });
    }
    let mut panels = heap.len();
    while total_err > spec.tolerance(total.magnitude()) {
        // the estimate is at the roundoff level of ∫|f|: more panels cannot help
        if total_err <= 2.0 * total_floor {
            break;
        }
        if panels >= spec.max_subdivisions {
            return Err(Error::NonConvergence(format!(
                "adaptive quadrature: error {:e} after {} panels",
                total_err, panels
            )));
        }
        let Some(worst) = heap.pop() else { break };
        let m = 0.5 * (worst.a + worst.b);
        if m <= worst.a.min(worst.b) || m >= worst.a.max(worst.b) {
            // cannot split further; accept what we have
            heap.push(worst);
            break;
        }
        let (v1, e1, f1) = gk21_floor(&mut f, worst.a, m);
        let (v2, e2, f2) = gk21_floor(&mut f, m, worst.b);
        total = total - worst.value + v1 + v2;
        total_err += e1 + e2 - worst.err;
        total_floor += f1 + f2 - worst.floor;
        heap.push(Panel {
            a: worst.a,
            b: m,
            value: v1,
            err: e1,
            floor: f1,
        });
        heap.push(Panel {
            a: m,
            b: worst.b,
            value: v2,
            err: e2,
            floor: f2,
        });
        panels += 1;
    }
    // re-sum to shed the drift of incremental updates
    let mut value = V::zero();
    let mut error = 0.0;
    for p in heap.iter() {
        value = value + p.value;
        error += p.err;
    }
    Ok(Estimate {
        value,
        error,
        panels,
    })
}

pub fn integrate<F: FnMut(f64) -> f64>(f: F, a: f64, b: f64, spec: &QuadratureSpec) -> Result<f64> {
    integrate_panels(f, &[a, b], spec).map(|e| e.value)
}

/// Integrate with user breakpoints (must be sorted).
pub fn integrate_with_points<F: FnMut(f64) -> f64>(
    f: F,
    points: &[f64],
    spec: &QuadratureSpec,
) -> Result<f64> {
    integrate_panels(f, points, spec).map(|e| e.value)
}

pub fn integrate_complex<F: FnMut(f64) -> Complex64>(
    f: F,
    points: &[f64],
    spec: &QuadratureSpec,
) -> Result<Complex64> {
    integrate_panels(f, points, spec).map(|e| e.value)
}

/// ∫_a^∞ f via t = a + s/(1-s). `scale` sets where the map puts s = 1/2.
pub fn integrate_to_infinity<F: FnMut(f64) -> f64>(
    mut f: F,
    a: f64,
    scale: f64,
    spec: &QuadratureSpec,
) -> Result<f64> {
    let g = move |s: f64| {
        if s >= 1.0 {
            return 0.0;
        }
        let d = 1.0 - s;
        let t = a + scale * s / d;
        let v = f(t) * scale / (d * d);
        if v.is_finite() {
            v
        } else {
            0.0
        }
    };
    integrate_panels(g, &[0.0, 0.5, 1.0], spec).map(|e| e.value)
}

/// Richardson table for a sequence sampled at step h, h/2, h/4, ...
/// assuming an error expansion in integer powers of h.
/// Returns the last two diagonal entries.
pub fn richardson(seq: &[f64]) -> (f64, f64) {
    let m = seq.len();
    assert!(m >= 2, "need at least two samples");
    let mut prev: Vec<f64> = vec![seq[0]];
    let mut diag = vec![seq[0]];
    for (i, &s) in seq.iter().enumerate().skip(1) {
        let mut row = vec![s];
        for j in 1..=i {
            let f = (1u64 << j) as f64 - 1.0;
            let v = row[j - 1] + (row[j - 1] - prev[j - 1]) / f;
            row.push(v);
        }
        diag.push(row[i]);
        prev = row;
    }
    (diag[m - 1], diag[m - 2])
}

/// ∫_a^∞ f where f decays algebraically while oscillating with a known
/// period. Partial integrals up to period-aligned cutoffs X·2^m are
/// extrapolated in 1/X.
pub fn integrate_oscillatory_tail<F: FnMut(f64) -> f64>(
    mut f: F,
    a: f64,
    period: f64,
    spec: &QuadratureSpec,
) -> Result<f64> {
    let base_periods = 8usize;
    let mut partial = 0.0;
    let mut lo = a;
    let mut hi = a + period * base_periods as f64;
    let mut seq = Vec::new();
    let mut last = f64::NAN;
    // magnitude of the partial integrals: the accuracy yardstick when the
    // limit itself is (close to) zero
    let mut scale = 0.0f64;
    for round in 0..14 {
        let n_seg = if round == 0 {
            base_periods
        } else {
            base_periods << (round - 1)
        };
        let pts: Vec<f64> = (0..=n_seg)
            .map(|i| lo + (hi - lo) * i as f64 / n_seg as f64)
            .collect();
        let mut loose = *spec;
        loose.max_subdivisions = spec.max_subdivisions.max(4 * n_seg);
        if round == 0 {
            // crude ∫|f| over the first chunk
            let peak = pts.iter().map(|&x| f(x).abs()).fold(0.0, f64::max);
            scale = peak * (hi - lo);
        }
        loose.abs_tol = spec.abs_tol.max(spec.rel_tol * scale);
        partial += integrate_panels(&mut f, &pts, &loose)?.value;
        scale = scale.max(partial.abs());
        seq.push(partial);
        if seq.len() >= 3 {
            let start = seq.len().saturating_sub(7);
            let (best, _) = richardson(&seq[start..]);
            if (best - last).abs() <= spec.tolerance(best.abs().max(scale)) * 10.0 {
                return Ok(best);
            }
            last = best;
        }
        lo = hi;
        hi = a + (hi - a) * 2.0;
    }
    Err(Error::NonConvergence(
        "oscillatory tail extrapolation did not settle".into(),
    ))
}
