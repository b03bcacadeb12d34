use proptest::prelude::*;
use vacuumlab::deltaseq::*;
use vacuumlab::quadrature::{integrate_with_points, QuadratureSpec};
use vacuumlab::Error;

fn spec() -> QuadratureSpec {
    QuadratureSpec::default()
}

#[test]
fn point_values_and_zero_at_zero() {
    assert_eq!(DeltaFamily::lambda(8).eval(0.0), 8.0);
    assert_eq!(DeltaFamily::m_shape(2, 1.0).eval(0.0), 1.0);
    assert_eq!(DeltaFamily::lambda(8).eval(0.2), 0.0);
    for n in [1, 3, 17, 1000] {
        assert_eq!(DeltaFamily::m_shape(n, 0.0).eval(0.0), 0.0);
        for j in 1..4 {
            assert_eq!(DeltaFamily::shifted_pair(n, j).eval(0.0), 0.0);
        }
    }
}

#[test]
fn normalization_up_to_large_index() {
    let s = spec();
    for n in [1, 2, 10, 333, 10_000] {
        for fam in [
            DeltaFamily::lambda(n),
            DeltaFamily::m_shape(n, 0.0),
            DeltaFamily::m_shape(n, 3.0),
            DeltaFamily::shifted_pair(n, 1),
            DeltaFamily::shifted_pair(n, 5),
        ] {
            let m = total_mass(&fam, &s).unwrap();
            assert!((m - 1.0).abs() < 1e-10, "{fam:?}: {m}");
        }
    }
    assert!(matches!(total_mass(&DeltaFamily::principal_value(3), &s), Err(Error::Unsupported(_))));
}

#[test]
fn filtering_examples() {
    let s = spec();
    let step = |k: f64| theta(k);
    for fam in [DeltaFamily::lambda(1), DeltaFamily::shifted_pair(1, 1), DeltaFamily::m_shape(1, 0.0)] {
        assert!((filtering_integral(&fam, step, &s).unwrap() - 0.5).abs() < 1e-10);
    }
    assert!((filtering_integral(&DeltaFamily::lambda(1), f64::cos, &s).unwrap() - 1.0).abs() < 1e-10);
    // jump from −1 to 2: the mean of the one-sided limits
    let jump = |k: f64| if k < 0.0 { -1.0 + k } else { 2.0 + k * k };
    let v = filtering_integral(&DeltaFamily::shifted_pair(1, 2), jump, &s).unwrap();
    assert!((v - 0.5).abs() < 1e-9, "{v}");
}

#[test]
fn fourier_transform_values_and_dichotomy() {
    let s = spec();
    for n in [1, 4, 30] {
        let l = DeltaFamily::lambda(n);
        assert!((l.fourier(1e-9) - 1.0 / (2.0 * std::f64::consts::PI)).abs() < 1e-15);
        for x in [0.3, 5.0, 400.0] {
            assert!(l.fourier(x).abs() <= 1.0 / (2.0 * std::f64::consts::PI));
        }
    }
    let f = fourier_integral(&DeltaFamily::lambda(4), &s).unwrap();
    assert!((f - 4.0).abs() < 4e-6, "{f}");
    for j in 1..=3 {
        let f = fourier_integral(&DeltaFamily::shifted_pair(4, j), &s).unwrap();
        assert!(f.abs() < 1e-6, "j={j}: {f}");
    }
    // M-shape transform tends to 1/2π as ε → 0
    let m = DeltaFamily::m_shape(1_000_000, 2.0);
    assert!((m.fourier(3.0) - 1.0 / (2.0 * std::f64::consts::PI)).abs() < 1e-10);
}

#[test]
fn powers_of_deltas() {
    let s = spec();
    let one = |_: f64| 1.0;
    // three nested extrapolations carry roughly a thousandfold of the quadrature noise
    for (power, tol) in [(2, 1e-12), (3, 1e-8)] {
        let v = power_filtering_integral(&DeltaFamily::shifted_pair(1, 1), power, one, &s).unwrap();
        assert!(v.finite().unwrap().abs() < tol, "{v:?}");
    }
    let v = power_filtering_integral(&DeltaFamily::lambda(1), 2, one, &s).unwrap();
    assert_eq!(v, Limit::Divergent);
    let v = power_filtering_integral(&DeltaFamily::m_shape(1, 0.0), 1, f64::cos, &s).unwrap();
    assert!((v.finite().unwrap() - 1.0).abs() < 1e-10);
    // nonvanishing height: δ(0)·f(0)
    let v = power_filtering_integral(&DeltaFamily::m_shape(1, 0.75), 2, f64::cos, &s).unwrap();
    assert!((v.finite().unwrap() - 0.75).abs() < 1e-8);
    assert!(power_filtering_integral(&DeltaFamily::lambda(1), 0, one, &s).is_err());
}

#[test]
fn limit_order_independence() {
    let s = spec();
    let f = |k: f64| (1.0 + k).exp() * if k < 0.0 { 1.0 } else { 3.0 };
    for fams in [
        vec![DeltaFamily::m_shape(1, 0.5), DeltaFamily::m_shape(1, 0.5)],
        vec![DeltaFamily::shifted_pair(1, 1), DeltaFamily::shifted_pair(1, 2)],
    ] {
        let a = product_filtering_integral(&fams, f, &s, LimitOrder::InnermostFirst).unwrap();
        let b = product_filtering_integral(&fams, f, &s, LimitOrder::OutermostFirst).unwrap();
        let (a, b) = (a.finite().unwrap(), b.finite().unwrap());
        assert!((a - b).abs() < 1e-8, "{a} vs {b}");
    }
}

#[test]
fn incompatible_classes_are_rejected() {
    let s = spec();
    let fams = [DeltaFamily::m_shape(1, 0.0), DeltaFamily::m_shape(1, 1.0)];
    let r = product_filtering_integral(&fams, |_| 1.0, &s, LimitOrder::InnermostFirst);
    assert!(matches!(r, Err(Error::IncompatibleClasses(..))));
}

#[test]
fn convolution_reference_values() {
    let s = spec();
    let sp = DeltaFamily::shifted_pair(1, 1);
    let v = convolve_eval(&sp, 3, &sp, 3, 0.1, &s).unwrap();
    assert!((v - 0.888_625).abs() < 1e-12, "{v}");
    let v = convolve_eval(&DeltaFamily::m_shape(1, 0.5), 2, &DeltaFamily::shifted_pair(1, 2), 4, 0.3, &s).unwrap();
    assert!((v - 0.6785).abs() < 1e-12, "{v}");
}

#[test]
fn convolution_is_a_delta_sequence() {
    let s = spec();
    let f1 = DeltaFamily::m_shape(1, 0.0);
    let f2 = DeltaFamily::shifted_pair(1, 1);
    let (n, m) = (3, 5);
    let knots = convolution_knots(&f1, n, &f2, m);
    let mass = integrate_with_points(|k| convolve_eval(&f1, n, &f2, m, k, &s).unwrap(), &knots, &s).unwrap();
    assert!((mass - 1.0).abs() < 1e-10, "{mass}");
    let lim = convolution_limit(&f1, &f1, 0.0, ConvolutionLimit::SecondIndex(3), &s).unwrap();
    assert!(lim.finite().unwrap().abs() < 1e-10);
    let diag = convolution_limit(&f1, &f1, 0.0, ConvolutionLimit::Diagonal, &s).unwrap();
    assert_eq!(diag, Limit::Divergent);
}

#[test]
fn measure_consistency() {
    assert!(measure_consistency_check(&MeasureDensity::constant(1.0), 3.0));
    assert!(measure_consistency_check(&MeasureDensity::relativistic(1.0), 0.0));
    assert!(!measure_consistency_check(&MeasureDensity::relativistic(1.0), 1.0));
    assert_eq!((MeasureDensity::relativistic(0.0).rho)(2.0), 4.0);
}

#[test]
fn composed_delta() {
    let (p2, m2) = (2.0f64, 0.25f64);
    let e = (p2 + m2).sqrt();
    let w = composed_delta_weights(|p0| p0 * p0 - p2 - m2, |p0| 2.0 * p0, &[-e, e]).unwrap();
    for (_, wt) in &w {
        assert!((wt - 1.0 / (2.0 * e)).abs() < 1e-15);
    }
    let w = composed_delta_weights(|k| -3.0 * k, |_| -3.0, &[0.0]).unwrap();
    assert_eq!(w, vec![(0.0, 1.0 / 3.0)]);
    assert!(matches!(
        composed_delta_weights(|k| k * k, |k| 2.0 * k, &[0.0]),
        Err(Error::SingularRoot(_))
    ));

    // (k−1)(k+1) against a narrow Λ member composed with f, by quadrature
    let w = composed_delta_weights(|k| (k - 1.0) * (k + 1.0), |k| 2.0 * k, &[-1.0, 1.0]).unwrap();
    assert_eq!(w.iter().map(|p| p.1).collect::<Vec<_>>(), vec![0.5, 0.5]);
    let big_f = |k: f64| 2.0 + k.sin();
    let predicted: f64 = w.iter().map(|(r, wt)| wt * big_f(*r)).sum();
    let s = spec();
    let lam = DeltaFamily::lambda(20_000);
    let h = 1e-4;
    let pts: Vec<f64> = [-1.0 - h, -1.0, -1.0 + h, 1.0 - h, 1.0, 1.0 + h].to_vec();
    let direct = integrate_with_points(
        |k| lam.eval((k - 1.0) * (k + 1.0)) * big_f(k),
        &[-1.0 - 2.0 * h, pts[0], pts[1], pts[2], -1.0 + 2.0 * h],
        &s,
    )
    .unwrap()
        + integrate_with_points(
            |k| lam.eval((k - 1.0) * (k + 1.0)) * big_f(k),
            &[1.0 - 2.0 * h, pts[3], pts[4], pts[5], 1.0 + 2.0 * h],
            &s,
        )
        .unwrap();
    assert!((direct - predicted).abs() < 1e-6, "{direct} vs {predicted}");
}

#[test]
fn step_and_sign_conventions() {
    assert_eq!(theta(0.0), 0.5);
    assert_eq!(theta(-1e-300), 0.0);
    assert_eq!(sgn(0.0), 0.0);
    assert_eq!(sgn(-2.0), -1.0);
}

fn any_family() -> impl Strategy<Value = DeltaFamily> {
    prop_oneof![
        (1u64..5000).prop_map(DeltaFamily::lambda),
        ((1u64..5000), 0.0f64..10.0).prop_map(|(n, a)| DeltaFamily::m_shape(n, a)),
        ((1u64..5000), 0u64..6).prop_map(|(n, j)| DeltaFamily::shifted_pair(n, j)),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn every_member_has_unit_mass(fam in any_family()) {
        let m = total_mass(&fam, &QuadratureSpec::default()).unwrap();
        prop_assert!((m - 1.0).abs() < 1e-10);
    }

    #[test]
    fn members_are_even_and_nonnegative(fam in any_family(), u in -1.0f64..1.0) {
        let (lo, hi) = fam.support().unwrap();
        let k = u * hi;
        prop_assert!(lo == -hi);
        prop_assert!(fam.eval(k) >= -1e-12);
        // the M-shape switches pieces on half-open intervals, so compare away from knots
        if fam.knots().iter().all(|c| (c - k).abs() > 1e-12) {
            prop_assert!((fam.eval(k) - fam.eval(-k)).abs() <= 1e-9 * (1.0 + fam.eval(k)));
        }
    }

    #[test]
    fn convolution_is_symmetric(n in 1u64..12, m in 1u64..12, j in 1u64..4, a in 0.0f64..3.0, k in -0.6f64..0.6) {
        let s = QuadratureSpec::default();
        let f1 = DeltaFamily::shifted_pair(1, j);
        let f2 = DeltaFamily::m_shape(1, a);
        let x = convolve_eval(&f1, n, &f2, m, k, &s).unwrap();
        let y = convolve_eval(&f2, m, &f1, n, k, &s).unwrap();
        prop_assert!((x - y).abs() < 1e-10 * (1.0 + x.abs()));
    }
}
