//! Reference values computed independently at 30 significant digits.

use num_complex::Complex64;
use zsc_core::theta;
use zsc_core::zeta::{self, zeta_critical, zeta_prime_critical};
use zsc_core::{EvalConfig, Method};

const ZEROS: [f64; 30] = [
    14.134725141734693790,
    21.022039638771554993,
    25.010857580145688763,
    30.424876125859513210,
    32.935061587739189691,
    37.586178158825671257,
    40.918719012147495187,
    43.327073280914999519,
    48.005150881167159728,
    49.773832477672302182,
    52.970321477714460644,
    56.446247697063394804,
    59.347044002602353080,
    60.831778524609809844,
    65.112544048081606661,
    67.079810529494173714,
    69.546401711173979253,
    72.067157674481907583,
    75.704690699083933168,
    77.144840068874805373,
    79.337375020249367923,
    82.910380854086030183,
    84.735492980517050106,
    87.425274613125229407,
    88.809111207634465424,
    92.491899270558484296,
    94.651344040519886967,
    95.870634228245309759,
    98.831194218193692233,
    101.31785100573139123,
];

const VALUES: [(f64, f64, f64); 13] = [
    (5.0, 0.70181237116568663, 0.23103800839141993),
    (20.0, 0.42991386043784337, -1.06429144308058911),
    (30.0, -0.12064228759004370, -0.58369121476370629),
    (40.0, 0.79304495256192867, -1.04127461465106502),
    (45.0, 2.71352553563081526, 1.80005515140083483),
    (50.0, -0.08171210832097998, 0.33079219403866130),
    (60.0, 0.54120083514634811, 0.22718392236826873),
    (77.7, 0.28532407081544503, 0.79393152936590121),
    (100.0, 2.69261988568132409, -0.02038602960259816),
    (150.0, -0.06350505654860523, -0.06519275992580523),
    (200.0, 4.59057737496905266, -3.18940124757914413),
    (333.3, 0.04851089240907427, -0.99575665973303066),
    (500.0, -0.39625650727514662, -1.41812674134537082),
];

const DERIVATIVES: [(f64, f64, f64); 4] = [
    (5.0, 0.11274475935154673, 0.12661688673493142),
    (20.0, -1.00524088394701316, 0.71450679084377599),
    (50.0, -0.03514350641749265, 1.61577961385630306),
    (100.0, 0.19422870257374323, -3.72731270964464824),
];

#[test]
fn zeta_at_half() {
    let s = zeta_critical(0.0, &EvalConfig::certified()).unwrap();
    assert!((s.value - Complex64::new(-1.460354508809586812889, 0.0)).norm() < 1e-12);
    let d = zeta_prime_critical(0.0, &EvalConfig::certified()).unwrap();
    // d/dt ζ(½ + it) = i ζ'(½)
    assert!((d.value - Complex64::new(0.0, -3.922646139209151727)).norm() < 1e-11);
}

#[test]
fn values_within_error_bounds() {
    for cfg in [EvalConfig::default(), EvalConfig::certified()] {
        for &(t, re, im) in &VALUES {
            let s = zeta_critical(t, &cfg).unwrap();
            let diff = (s.value - Complex64::new(re, im)).norm();
            assert!(diff <= s.err + 1e-15, "t = {t}: diff {diff:e} > err {:e} ({:?})", s.err, s.method);
            assert!(s.err <= cfg.target_abs_err);
        }
    }
}

#[test]
fn riemann_siegel_is_used_above_switch() {
    let s = zeta_critical(200.0, &EvalConfig::default()).unwrap();
    assert_eq!(s.method, Method::RiemannSiegel);
    let s = zeta_critical(200.0, &EvalConfig::certified()).unwrap();
    assert_eq!(s.method, Method::EulerMaclaurin);
}

#[test]
fn derivatives() {
    let cfg = EvalConfig::certified();
    for &(t, re, im) in &DERIVATIVES {
        let s = zeta_prime_critical(t, &cfg).unwrap();
        assert!((s.value - Complex64::new(re, im)).norm() < 1e-10, "t = {t}: {:?}", s.value);
    }
}

#[test]
fn conjugate_symmetry() {
    let cfg = EvalConfig::certified();
    for t in [3.3, 17.0, 64.5] {
        let a = zeta_critical(t, &cfg).unwrap().value;
        let b = zeta_critical(-t, &cfg).unwrap().value;
        assert!((a - b.conj()).norm() < 1e-13);
    }
}

#[test]
fn zeros_located() {
    let cfg = EvalConfig::certified();
    let found = theta::bracket_zeros(1.0, 102.0, 0.05, &cfg).unwrap();
    assert_eq!(found.len(), ZEROS.len());
    for (f, z) in found.iter().zip(ZEROS) {
        assert!((f - z).abs() < 1e-10, "{f} vs {z}");
    }
    for z in ZEROS {
        assert!(zeta_critical(z, &cfg).unwrap().value.norm() < 1e-10);
    }
}

#[test]
fn phase_function_values() {
    assert!((theta::g(10.0) - 3.0670743962898952917).abs() < 1e-13);
    assert!((theta::g(2.0) - 2.5259109188161326900).abs() < 1e-13);
    assert!((theta::g(20.0) - -1.1868948084444840448).abs() < 1e-13);
    assert!((theta::g_prime(0.0) - 2.686091709612832791).abs() < 1e-13);
}

#[test]
fn theta_root() {
    let root = theta::find_theta_root().unwrap();
    assert!((root - 6.289835988836902779665).abs() < 1e-12, "{root}");
    assert!(theta::g_prime(root).abs() < 1e-14);
}

#[test]
fn zero_counts() {
    let cfg = EvalConfig::certified();
    for (t, n) in [(10.0, 0), (14.0, 0), (15.0, 1), (50.0, 10), (100.0, 29), (101.5, 30)] {
        let c = theta::count_zeros(t, &cfg).unwrap();
        assert_eq!(c.n, n, "N({t})");
        assert!(c.certified);
    }
}

#[test]
fn hardy_z_is_real_rotation() {
    let cfg = EvalConfig::certified();
    for t in [20.0, 77.7, 150.0] {
        let (z, _) = zeta::hardy_z(t, &cfg).unwrap();
        let f = zeta_critical(t, &cfg).unwrap().value;
        assert!((z.abs() - f.norm()).abs() < 1e-12);
    }
}
