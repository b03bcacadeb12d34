#![allow(clippy::excessive_precision)]
use std::f64::consts::PI;

use num_complex::Complex64;
use proptest::prelude::*;
use vacuumlab::casimir::*;
use vacuumlab::quadrature::QuadratureSpec;
use vacuumlab::units::{metres_to_planck, HBAR, SPEED_OF_LIGHT};
use vacuumlab::vacuum::{make_box_profile, make_lorentz_profile, VacuumProfile};

fn spec() -> QuadratureSpec {
    QuadratureSpec {
        abs_tol: 1e-15,
        rel_tol: 1e-12,
        ..Default::default()
    }
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

// -(1/π)∫ t ρ/(1−ρ) dt with ρ = e^{−2Lt}/(1+2t/α)², 40-digit mpmath
const P11_ORACLE: [(f64, f64, f64); 5] = [
    (20.0, 1.0, -0.10908286080325587788),
    (70.0, 1.0, -0.12382997829106685878),
    (10.0, 0.5, -0.28780122522149450191),
    (1000.0, 2.0, -0.032659607357401528691),
    (0.5, 1.0, -0.010449677876083740609),
];

#[test]
fn reflection_limits_and_modulus() {
    let r = reflection_coeff(1e-4, 100.0).unwrap();
    assert!((r - Complex64::new(1.0, 0.0)).norm() < 1e-5);
    assert!(reflection_coeff(1e4, 1.0).unwrap().norm() < 1e-8);
    for (k, a) in [(0.3, 1.0), (2.0, 0.5), (7.0, 40.0), (1e-3, 1e3)] {
        let m = reflection_coeff(k, a).unwrap().norm();
        let want = 1.0 / (1.0 + 4.0 * k * k / (a * a));
        assert!(rel(m, want) < 1e-14, "{k} {a}");
        assert!(m < 1.0);
    }
    assert!(reflection_coeff(0.0, 1.0).is_err());
    assert!(reflection_coeff(1.0, -1.0).is_err());
}

#[test]
fn series_and_quad_match_oracle() {
    let s = spec();
    for (a, l, want) in P11_ORACLE {
        let ps = pressure_1p1_series(a, l, &s).unwrap();
        let pq = pressure_1p1_quad(a, l, &s).unwrap();
        assert!(rel(ps, want) < 1e-10, "series {a} {l}: {ps} vs {want}");
        assert!(rel(pq, want) < 1e-8, "quad {a} {l}: {pq} vs {want}");
    }
}

#[test]
fn series_quad_grid() {
    let s = spec();
    for a in [10.0, 100.0, 1000.0] {
        for l in [0.5, 1.0, 2.0] {
            let ps = pressure_1p1_series(a, l, &s).unwrap();
            let pq = pressure_1p1_quad(a, l, &s).unwrap();
            assert!(rel(ps, pq) < 1e-8, "{a} {l}: {ps} {pq}");
        }
    }
}

#[test]
fn transparent_plates() {
    let s = spec();
    let mut prev = f64::INFINITY;
    for a in [1e-1, 1e-2, 1e-3] {
        let p = pressure_1p1_series(a, 1.0, &s).unwrap();
        assert!(p < 0.0 && p.abs() < prev);
        prev = p.abs();
    }
    assert!(prev < 1e-6);
    assert!(pressure_1p1_quad(1e-3, 1.0, &s).unwrap().abs() < 1e-6);
}

#[test]
fn sweep_is_monotone_and_reports_endpoint() {
    let sw = alpha_sweep(1.0, &[10.0, 100.0, 1000.0, 10000.0], &spec()).unwrap();
    assert!(sw.pressures.windows(2).all(|w| w[1] < w[0]));
    assert_eq!(sw.comb16, -PI / 16.0);
    assert!(rel(sw.em24, -PI / 24.0) < 1e-15);
    assert!(sw.nearer == 16 || sw.nearer == 24);
    // finite-α values stay between zero and the Dirichlet value
    assert!(sw.pressures.iter().all(|&p| p < 0.0 && p > sw.em24));
    assert!(alpha_sweep(1.0, &[], &spec()).is_err());
}

/// k[1 − (1−|r|²)/|1−re^{2ikL}|²]/(2π), written out from r alone.
fn s_matrix_integrand(k: f64, a: f64, l: f64) -> f64 {
    let r = reflection_coeff(k, a).unwrap();
    let e = Complex64::from_polar(1.0, 2.0 * k * l);
    let m2 = r.norm_sqr();
    k * (1.0 - (1.0 - m2) / (1.0 - r * e).norm_sqr()) / (2.0 * PI)
}

#[test]
fn peaks_narrow_with_alpha() {
    let l = 1.0;
    let mut widths = Vec::new();
    for a in [50.0, 100.0, 200.0, 400.0] {
        // first peak of the transmission-like part, near kL ≈ π
        let g = |k: f64| -s_matrix_integrand(k, a, l) / k;
        let mut kp = PI / l * (1.0 - 2.0 / (a * l));
        let mut h = 0.05;
        for _ in 0..200 {
            let (gl, gc, gr) = (g(kp - h), g(kp), g(kp + h));
            if gl > gc {
                kp -= h;
            } else if gr > gc {
                kp += h;
            } else {
                h *= 0.5;
            }
            if h < 1e-14 {
                break;
            }
        }
        let half = 0.5 * (g(kp) + g(kp + 0.5));
        let (mut lo, mut hi) = (kp, kp + 0.5);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if g(mid) > half {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        widths.push(lo - kp);
    }
    for w in widths.windows(2) {
        assert!(w[1] < 0.5 * w[0], "{widths:?}");
    }
}

#[test]
fn comb_and_euler_maclaurin() {
    for l in [0.5, 1.0, 2.0, PI] {
        for j in [5, 50, 500] {
            let p = pressure_dirichlet_comb(l, PI / (2.0 * l), j).unwrap();
            assert!(rel(p, -PI / (16.0 * l * l)) < 1e-14);
        }
        let p5 = pressure_dirichlet_comb(l, PI / (4.0 * l), 5).unwrap();
        let p50 = pressure_dirichlet_comb(l, PI / (4.0 * l), 50).unwrap();
        let p500 = pressure_dirichlet_comb(l, PI / (4.0 * l), 500).unwrap();
        assert!(rel((p500 - p50) / (p50 - p5), 10.0) < 1e-12);
    }
    let p = pressure_dirichlet_comb(PI, 0.5, 7).unwrap();
    assert!(rel(p, -1.0 / (16.0 * PI)) < 1e-14);
    assert!(pressure_dirichlet_comb(1.0, 0.5, 0).is_err());
    assert!(pressure_dirichlet_comb(1.0, 4.0, 1).is_err());

    assert!(rel(pressure_euler_maclaurin(1.0).unwrap(), -PI / 24.0) < 1e-15);
    assert!(rel(pressure_euler_maclaurin(PI).unwrap(), -1.0 / (24.0 * PI)) < 1e-15);
    for l in [0.3, 1.0, 5.0] {
        let a = pressure_euler_maclaurin(l).unwrap();
        let b = pressure_euler_maclaurin(2.0 * l).unwrap();
        assert!(rel(b, a / 4.0) < 1e-15);
    }
    assert!(pressure_euler_maclaurin(0.0).is_err());
}

#[test]
fn euler_maclaurin_gaps() {
    let s = spec();
    assert!(euler_maclaurin_gap(|x| x, 10, &s).unwrap().abs() < 1e-12);
    let g2 = euler_maclaurin_gap(|x| x * x, 10, &s).unwrap();
    assert!((g2 - 10.0 / 6.0).abs() < 1e-12);
    let b2 = euler_maclaurin_series(|o, x| if o == 1 { 2.0 * x } else { 0.0 }, 10, 3).unwrap();
    assert!((b2 - 10.0 / 6.0).abs() < 1e-14);

    let ge = euler_maclaurin_gap(|x| (-x).exp(), 10, &s).unwrap();
    let odd = |o: u32, x: f64| if o % 2 == 1 { -(-x).exp() } else { (-x).exp() };
    let series = euler_maclaurin_series(odd, 10, 2).unwrap();
    assert!((ge - series).abs() < 1e-4, "{ge} {series}");
    // closed form of the gap for e^{−x}
    let e = (-1.0f64).exp();
    let exact = (1.0 - e.powi(11)) / (1.0 - e) - 0.5 * (1.0 + e.powi(10)) - (1.0 - e.powi(10));
    assert!((ge - exact).abs() < 1e-12);
    assert!(euler_maclaurin_gap(|x| x, 0, &s).is_err());
}

#[test]
fn stairs_gap_at_tiny_step() {
    let dx = 1e-26;
    let (gap, _) = stairs_gap(dx).unwrap();
    let crude = stairs_gap_crude(dx).unwrap();
    assert!(gap > 0.0 && gap.is_finite());
    // both are O(Δx³ log Δx) with different constants; the crude bound is
    // the right order of magnitude
    let ratio = gap / crude;
    assert!(ratio > 1e-3 && ratio < 1e3, "{gap} {crude}");
    assert!(crude > 1e-79 && crude < 1e-76);
    assert!(stairs_gap(0.0).is_err());
}

#[test]
fn stairs_gap_branches_agree() {
    // series below 0.1 and the direct sum above it bracket the switch smoothly
    let a = stairs_gap(0.0999999).unwrap().0;
    let b = stairs_gap(0.1).unwrap().0;
    assert!(rel(a, b) < 1e-4);
}

fn lorentz(b: f64, y0: f64) -> VacuumProfile {
    make_lorentz_profile(b, y0).unwrap()
}

#[test]
fn leading_term_at_tiny_y0() {
    let p = lorentz(0.0, 1e-6);
    let br = pressure_3p1(&p, 1.0, &spec()).unwrap();
    let lead = -p.z * PI * PI / 240.0;
    assert!(rel(br.leading, lead) < 1e-15);
    assert!((br.total / lead - 1.0).abs() < 1e-6);
}

#[test]
fn y0_correction_leading_coefficient() {
    for (y0, l) in [(1e-3, 1.0), (2e-3, 0.5), (0.01, 2.0)] {
        let p = lorentz(0.0, y0);
        let br = pressure_3p1(&p, l, &spec()).unwrap();
        let want = p.z * PI.powi(4) * y0 * y0 / (3024.0 * l.powi(6));
        assert!(br.y0_corrections > 0.0);
        assert!(rel(br.y0_corrections, want) < 10.0 * (y0 / l).powi(2), "{y0} {l}");
    }
}

// Σⱼ (Zj²π/2L³y₀)Γ(1, jπy₀/L, λ²) − (Zλ⁴/3π²y₀⁴)K₄(2λ), 40-digit mpmath
#[test]
fn pressure_3p1_matches_mode_sum_oracle() {
    let cases = [
        (0.01, 0.05, 1.0, 0.081601213676337238764, -0.002662551799550638131),
        (0.25, 0.2, 3.0, 0.71506403342869445157, 0.00005546300117399346195),
    ];
    for (b, y0, l, z, want) in cases {
        let p = lorentz(b, y0);
        assert!(rel(p.z, z) < 1e-13);
        let br = pressure_3p1(&p, l, &spec()).unwrap();
        assert!(rel(br.total, want) < 1e-8, "{b} {y0} {l}: {} vs {want}", br.total);
        let d = pressure_3p1_direct(&p, l).unwrap();
        assert!(rel(d, want) < 1e-6, "direct {d}");
    }
}

#[test]
fn negligible_lambda2_at_nanometres() {
    let y0 = vacuumlab::units::km_to_planck(1e-38);
    let l = metres_to_planck(1e-9);
    let br = pressure_3p1(&lorentz(1e-49, y0), l, &spec()).unwrap();
    assert!(br.lambda2_correction.abs() < 1e-10 * br.leading.abs());
}

#[test]
fn breakdown_preconditions() {
    let s = spec();
    assert!(pressure_3p1(&lorentz(0.01, 0.5), 1.0, &s).is_err());
    assert!(pressure_3p1(&make_box_profile(1.0, 2.0).unwrap(), 10.0, &s).is_err());
    assert!(pressure_3p1(&lorentz(0.01, 0.05), 0.0, &s).is_err());
}

#[test]
fn physical_conversion() {
    assert_eq!(to_physical_pressure(0.0), 0.0);
    assert!(to_physical_pressure(-2.0) < 0.0 && to_physical_pressure(3.0) > 0.0);
    let l0 = 1e-6;
    let l = metres_to_planck(l0);
    let got = to_physical_pressure(-PI * PI / (240.0 * l.powi(4)));
    let want = -HBAR * SPEED_OF_LIGHT * PI * PI / (240.0 * l0.powi(4));
    assert!(rel(got, want) < 1e-12, "{got} {want}");
    // about 1.3 mPa at one micron
    assert!((got + 1.3e-3).abs() < 0.05e-3);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn breakdown_adds_up(b in 0.0f64..0.5, y0 in 0.01f64..0.09, l in 1.0f64..4.0) {
        let br = pressure_3p1(&lorentz(b, y0), l, &spec()).unwrap();
        let sum = br.leading + br.y0_corrections + br.lambda2_correction;
        prop_assert!((sum - br.total).abs() <= 1e-12 * br.total.abs());
    }

    #[test]
    fn linear_in_z(b in 0.0f64..0.5, y0 in 0.01f64..0.09, l in 1.0f64..4.0, c in 0.1f64..10.0) {
        let p = lorentz(b, y0);
        let mut q = p;
        q.z *= c;
        let a = pressure_3p1(&p, l, &spec()).unwrap();
        let bq = pressure_3p1(&q, l, &spec()).unwrap();
        // the total can be a near-cancellation of its parts
        let parts = c * a.leading.abs().max(a.lambda2_correction.abs());
        prop_assert!((bq.total - c * a.total).abs() <= 1e-12 * parts);
        prop_assert!((bq.leading - c * a.leading).abs() <= 1e-14 * parts);
        let da = pressure_3p1_direct(&p, l).unwrap();
        let db = pressure_3p1_direct(&q, l).unwrap();
        // the unsplit sum cancels terms of size Z/y₀⁴ against each other
        let cancelled = c * p.z / y0.powi(4);
        prop_assert!((db - c * da).abs() <= 1e-13 * cancelled);
    }

    #[test]
    fn comb_is_j_free_only_at_midpoint(l in 0.2f64..5.0, frac in 0.05f64..0.95, j in 1u64..1000) {
        let k = frac * PI / l;
        let a = pressure_dirichlet_comb(l, k, j).unwrap();
        let b = pressure_dirichlet_comb(l, k, j + 1).unwrap();
        if (frac - 0.5).abs() > 1e-3 {
            prop_assert!((a - b).abs() > 1e-6 * a.abs().max(1e-3));
        }
    }
}
