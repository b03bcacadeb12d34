//! One test per acceptance criterion; each prints its report line.

use std::io::Write;

use vacuumlab::validate::run_criterion;

fn check(n: u32) {
    let report = run_criterion(n).expect("criterion exists");
    // straight to the handle so the line shows without --nocapture
    let _ = writeln!(std::io::stderr().lock(), "{}", report.line());
    assert!(report.pass, "{}", report.line());
}

macro_rules! criteria {
    ($($name:ident => $n:expr),* $(,)?) => {
        $(#[test]
        fn $name() {
            check($n);
        })*
    };
}

criteria! {
    criterion_01_si_sign_change => 1,
    criterion_02_lambert_resonances => 2,
    criterion_03_casimir_1p1_endpoints => 3,
    criterion_04_casimir_1p1_oracles => 4,
    criterion_05_casimir_3p1_leading => 5,
    criterion_06_profile_normalization => 6,
    criterion_07_coulomb_recovery => 7,
    criterion_08_yukawa_bound => 8,
    criterion_09_scattering_unitarity => 9,
    criterion_10_delta_calculus => 10,
    criterion_11_statistics_oracle => 11,
    criterion_12_mirror_identity => 12,
}

#[test]
fn unknown_criterion_is_none() {
    assert!(run_criterion(0).is_none());
    assert!(run_criterion(13).is_none());
}
