use std::f64::consts::PI;

use nalgebra::{Matrix4, Vector4};
use num_complex::Complex64;
use proptest::prelude::*;
use vacuumlab::cavity::*;
use vacuumlab::quadrature::QuadratureSpec;
use vacuumlab::Error;

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

/// Left-incidence amplitudes (B, C, D, E) for barriers at ±x0 whose
/// derivative jumps are ja·ψ and jb·ψ, from the raw matching conditions.
fn sewing_oracle(k: f64, x0: f64, ja: f64, jb: f64) -> [Complex64; 4] {
    let ep = |x: f64| (I * k * x).exp();
    let em = |x: f64| (-I * k * x).exp();
    let ik = I * k;
    let (a, b) = (-x0, x0);
    let mut mat = Matrix4::<Complex64>::zeros();
    let mut rhs = Vector4::<Complex64>::zeros();
    // continuity at a: e^{ika} + B e^{−ika} = C e^{ika} + D e^{−ika}
    mat[(0, 0)] = em(a);
    mat[(0, 1)] = -ep(a);
    mat[(0, 2)] = -em(a);
    rhs[0] = -ep(a);
    // jump at a: ψ′(a⁺) − ψ′(a⁻) = ja ψ(a), with ψ(a) from the left side
    // ψ′(a⁺) = ik(C e^{ika} − D e^{−ika}); ψ′(a⁻) = ik(e^{ika} − B e^{−ika})
    mat[(1, 0)] = ik * em(a) - ja * em(a);
    mat[(1, 1)] = ik * ep(a);
    mat[(1, 2)] = -ik * em(a);
    rhs[1] = ik * ep(a) + ja * ep(a);
    // continuity at b: C e^{ikb} + D e^{−ikb} = E e^{ikb}
    mat[(2, 1)] = ep(b);
    mat[(2, 2)] = em(b);
    mat[(2, 3)] = -ep(b);
    // jump at b: ik E e^{ikb} − ik(C e^{ikb} − D e^{−ikb}) = jb E e^{ikb}
    mat[(3, 1)] = -ik * ep(b);
    mat[(3, 2)] = ik * em(b);
    mat[(3, 3)] = ik * ep(b) - jb * ep(b);
    let sol = mat.lu().solve(&rhs).expect("regular sewing system");
    [sol[0], sol[1], sol[2], sol[3]]
}

fn close(a: Complex64, b: Complex64, tol: f64) -> bool {
    (a - b).norm() <= tol * (1.0 + b.norm())
}

#[test]
fn coefficients_match_direct_sewing() {
    for (k, alpha, beta, l) in [(0.7, 1.0, 1.0, 1.0), (2.3, 0.4, 3.0, 2.5), (10.0, 5.0, 0.1, 0.3)] {
        let cfg = CavityConfig::new(alpha, beta, l).unwrap();
        let s = scattering_coeffs(k, &cfg, Side::Left).unwrap();
        let o = sewing_oracle(k, l / 4.0, 2.0 * alpha, 2.0 * beta);
        for (got, want) in [s.b, s.c, s.d, s.e].iter().zip(o) {
            assert!(close(*got, want, 1e-12), "{got} vs {want}");
        }
        // field-operator modes: barriers at ±L/2 with jumps α, β
        let t = scattering_coeffs(k, &cfg.tilde(), Side::Left).unwrap();
        let o = sewing_oracle(k, l / 2.0, alpha, beta);
        for (got, want) in [t.b, t.c, t.d, t.e].iter().zip(o) {
            assert!(close(*got, want, 1e-12), "tilde {got} vs {want}");
        }
    }
}

#[test]
fn transparency_and_low_k_limits() {
    let free = scattering_coeffs(1.7, &CavityConfig::symmetric(0.0, 2.0).unwrap(), Side::Left).unwrap();
    assert!(free.b.norm() < 1e-15 && free.d.norm() < 1e-15);
    assert!(close(free.c, Complex64::new(1.0, 0.0), 1e-15) && close(free.e, Complex64::new(1.0, 0.0), 1e-15));

    let (alpha, beta, l) = (0.8, 0.8, 1.3);
    let cfg = CavityConfig::new(alpha, beta, l).unwrap();
    let s = scattering_coeffs(1e-9, &cfg, Side::Left).unwrap();
    assert!(close(s.b, Complex64::new(-1.0, 0.0), 1e-7));
    assert!(s.e.norm() < 1e-7);
    let c0 = beta / (alpha + beta + l * alpha * beta);
    assert!(close(s.c, Complex64::new(c0, 0.0), 1e-7), "{}", s.c);

    // transparent again at high k
    let s = scattering_coeffs(1e7, &cfg, Side::Left).unwrap();
    assert!((s.e.norm() - 1.0).abs() < 1e-6);
}

#[test]
fn dirichlet_limits() {
    let l = 1.0;
    let wall = CavityConfig::dirichlet(l).unwrap();
    let k = 1.3;
    let s = scattering_coeffs(k, &wall, Side::Left).unwrap();
    assert!(close(s.b, -(-I * k * l / 2.0).exp(), 1e-15));
    assert_eq!(s.c.norm() + s.d.norm() + s.e.norm(), 0.0);
    // resonant interior wave and its large-α counterpart
    let k = 2.0 * PI * 3.0 / l;
    let hard = CavityConfig::symmetric(1e6, l).unwrap();
    let s = scattering_coeffs(k, &hard, Side::Left).unwrap();
    assert!((s.c.norm() - 0.5).abs() < 1e-4, "{}", s.c.norm());
    assert!(s.e.norm() < 1e-4);
    let s = scattering_coeffs(k, &wall, Side::Left).unwrap();
    assert!((s.c.norm() - 0.5).abs() < 1e-15);
    assert_eq!(s.e.norm(), 0.0);
}

#[test]
fn right_incidence_mirrors_left() {
    let cfg = CavityConfig::new(0.3, 2.0, 1.1).unwrap();
    let r = scattering_coeffs(0.9, &cfg, Side::Right).unwrap();
    let swapped = scattering_coeffs(0.9, &CavityConfig::new(2.0, 0.3, 1.1).unwrap(), Side::Left).unwrap();
    assert_eq!(r.f, Complex64::new(1.0, 0.0));
    assert_eq!(r.a, Complex64::new(0.0, 0.0));
    assert_eq!((r.b, r.c, r.d, r.e), (swapped.e, swapped.d, swapped.c, swapped.b));
}

#[test]
fn sewing_denominator_has_no_real_zero() {
    // Re Δ = 0 forces k = √(2αβ)|sin(kL/2)|, and then Im Δ > 0
    for (alpha, beta, l) in [(1.0, 1.0, 1.0), (40.0, 0.5, 3.0), (1e4, 1e4, 0.01)] {
        for i in 1..2000 {
            let k = i as f64 * 0.01;
            assert!(sewing_denominator(k, alpha, beta, l).norm() > 0.0);
        }
    }
    let cfg = CavityConfig::symmetric(1.0, 1.0).unwrap();
    assert!(matches!(scattering_coeffs(0.0, &cfg, Side::Left), Err(Error::Domain(_))));
    assert!(matches!(scattering_coeffs(-1.0, &cfg, Side::Left), Err(Error::Domain(_))));
}

#[test]
fn free_mode_functions() {
    let cfg = CavityConfig::symmetric(0.0, 1.0).unwrap();
    for (k, z) in [(0.7, 3.0), (-2.0, 0.1), (5.0, -4.0)] {
        assert!(close(mode_function(k, z, &cfg).unwrap(), (I * k * z).exp(), 1e-14));
        assert!(close(field_mode(k, z, &cfg).unwrap(), (I * k * z).exp(), 1e-14));
    }
    assert_eq!(mode_function(0.0, 2.0, &cfg).unwrap(), Complex64::new(1.0, 0.0));
    let walls = CavityConfig::symmetric(2.0, 1.0).unwrap();
    assert!(mode_function(1e-10, 0.1, &walls).unwrap().norm() < 1e-9);
}

#[test]
fn field_mode_matching_conditions() {
    let (alpha, beta, l) = (1.5, 0.7, 2.0);
    let cfg = CavityConfig::new(alpha, beta, l).unwrap();
    let h = 1e-5;
    for k in [0.4, 1.9, -1.1] {
        for (edge, jump) in [(-l / 2.0, alpha), (l / 2.0, beta)] {
            let g = |z: f64| field_mode(k, z, &cfg).unwrap();
            assert!((g(edge - 1e-13) - g(edge + 1e-13)).norm() < 1e-12);
            let f = g(edge);
            // second-order one-sided stencils
            let right = (-3.0 * f + 4.0 * g(edge + h) - g(edge + 2.0 * h)) / (2.0 * h);
            let left = (3.0 * f - 4.0 * g(edge - h) + g(edge - 2.0 * h)) / (2.0 * h);
            assert!(((right - left) - jump * f).norm() < 1e-8, "{k} {edge}: {} vs {}", right - left, jump * f);
        }
    }
}

#[test]
fn lambert_resonances() {
    let cfg = CavityConfig::symmetric(1.0, 1.0).unwrap();
    let roots = resonance_roots(&cfg, 0..=2).unwrap();
    let listed = [
        (0, 1, 0.0, 0.0),
        (0, -1, -2.42855, -1.90448),
        (1, 1, -8.66349, -4.46676),
        (1, -1, -15.1274, -5.51848),
        (2, 1, -21.5174, -6.19436),
        (2, -1, -27.8711, -6.6961),
    ];
    for (branch, sign, re, im) in listed {
        let r = roots.iter().find(|r| r.branch == branch && r.sign == sign).unwrap();
        assert!((r.k.re - re).abs() < 1e-4 && (r.k.im - im).abs() < 1e-4, "{r:?}");
        assert!(r.residual < 1e-8);
    }
    assert!(matches!(
        resonance_roots(&CavityConfig::new(1.0, 2.0, 1.0).unwrap(), 0..=1),
        Err(Error::Unsupported(_))
    ));
}

#[test]
fn only_real_resonance_is_zero() {
    for alpha in [0.1, 1.0, 7.0] {
        for l in [0.2, 1.0, 4.0] {
            let cfg = CavityConfig::symmetric(alpha, l).unwrap();
            for r in resonance_roots(&cfg, -3..=3).unwrap() {
                assert!(r.residual < 1e-8 * alpha * alpha * (1.0 + r.k.norm_sqr()), "{r:?}");
                if r.k.norm() > 1e-9 {
                    assert!(r.k.im < 0.0, "alpha {alpha} L {l}: {r:?}");
                }
            }
        }
    }
}

#[test]
fn window_form() {
    let free = CavityConfig::symmetric(0.0, 1.0).unwrap();
    let (k, l, n) = (1.3, 0.4, 17.0);
    let v = boundary_inner_product(l, k, n, &free).unwrap();
    let exact = 2.0 * ((k - l) * n).sin() / (k - l);
    assert!((v - exact).norm() < 1e-12);
    let cfg = CavityConfig::symmetric(1.0, 1.0).unwrap();
    assert!(matches!(boundary_inner_product(1.0, 1.0, 5.0, &cfg), Err(Error::DegenerateMode(_))));
    assert!(matches!(boundary_inner_product(1.0, 1.0, 0.1, &cfg), Err(Error::Domain(_))));
}

#[test]
fn window_form_equals_direct_integral() {
    use vacuumlab::quadrature::integrate_complex;
    let cfg = CavityConfig::symmetric(1.2, 1.0).unwrap();
    let (l, k, n) = (-0.6, 1.4, 3.3);
    let pts = [-n, -0.25, 0.25, n];
    let direct = integrate_complex(
        |w| mode_function(l, w, &cfg).unwrap().conj() * mode_function(k, w, &cfg).unwrap(),
        &pts,
        &QuadratureSpec::default(),
    )
    .unwrap();
    let window = boundary_inner_product(l, k, n, &cfg).unwrap();
    assert!((direct - window).norm() < 1e-10, "{direct} {window}");
}

#[test]
fn cesaro_cross_channel_vanishes() {
    let cfg = CavityConfig::symmetric(1.0, 1.0).unwrap();
    let (l, k) = (-0.5, 1.0);
    let n_max = 1e3 / (k - l);
    let m = cesaro_mean(l, k, 1.0, n_max, &cfg, &QuadratureSpec::default()).unwrap();
    assert!(m.norm() < 1e-3, "{m}");
}

#[test]
fn channel_weights() {
    let cfg = CavityConfig::symmetric(2.0, 0.5).unwrap();
    for k in [0.1, 1.0, 30.0] {
        assert!((delta_channel_weight(k, &cfg).unwrap() - 2.0 * PI).abs() < 1e-12);
        assert!(cross_channel_weight(k, &cfg).unwrap().norm() < 1e-12);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn unitarity(k in 1e-3f64..1e3, alpha in 0.0f64..1e3, l in 1e-2f64..1e2) {
        let cfg = CavityConfig::symmetric(alpha, l).unwrap();
        let s = scattering_coeffs(k, &cfg, Side::Left).unwrap();
        prop_assert!((s.b.norm_sqr() + s.e.norm_sqr() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn reflection_symmetry(k in -20.0f64..20.0, w in -5.0f64..5.0, alpha in 0.0f64..10.0, l in 0.1f64..4.0) {
        prop_assume!(k.abs() > 1e-6);
        let cfg = CavityConfig::symmetric(alpha, l).unwrap();
        let a = mode_function(-k, -w, &cfg).unwrap();
        let b = mode_function(k, w, &cfg).unwrap();
        prop_assert!((a - b).norm() < 1e-12 * (1.0 + b.norm()));
    }

    #[test]
    fn tilde_modes_use_halved_strengths(k in 1e-2f64..50.0, alpha in 0.0f64..20.0, beta in 0.0f64..20.0, l in 0.1f64..5.0) {
        let cfg = CavityConfig::new(alpha, beta, l).unwrap();
        let z = 0.75 * l;
        let t = scattering_coeffs(k, &CavityConfig::new(alpha / 2.0, beta / 2.0, 2.0 * l).unwrap(), Side::Left).unwrap();
        let expected = t.e * (I * k * z).exp();
        prop_assert!((field_mode(k, z, &cfg).unwrap() - expected).norm() < 1e-12);
        let d = sewing_denominator(k, alpha / 2.0, beta / 2.0, 2.0 * l);
        prop_assert!((t.e - Complex64::new(k * k, 0.0) / d).norm() < 1e-12);
    }
}
