use zsc_core::selfcross::{find_intersections, multiplicity_histogram, refine_pair, verify_local_injectivity, CLUSTER_TOL};
use zsc_core::{EvalConfig, Error};

#[test]
fn window_overlap_agrees() {
    let cfg = EvalConfig::default();
    let w1 = find_intersections(0.0, 100.0, &cfg, 0.05).unwrap();
    let w2 = find_intersections(50.0, 150.0, &cfg, 0.05).unwrap();
    let inside = |p: &&zsc_core::selfcross::IntersectionPair| p.a >= 50.5 && p.b <= 99.5;
    let o1: Vec<_> = w1.iter().filter(inside).collect();
    let o2: Vec<_> = w2.iter().filter(inside).collect();
    assert!(!o1.is_empty());
    assert_eq!(o1.len(), o2.len());
    for p in &o1 {
        let matched = o2.iter().any(|q| (p.a - q.a).abs() < 1e-8 && (p.b - q.b).abs() < 1e-8);
        assert!(matched, "{p:?} missing from the second window");
    }
}

#[test]
fn pairs_are_genuine_and_reproducible() {
    let cfg = EvalConfig::default();
    let pairs = find_intersections(0.0, 100.0, &cfg, 0.05).unwrap();
    let zeros_pairs = pairs.iter().filter(|p| p.z.norm() < 1e-8).count();
    // 29 zeros below 100 give C(29, 2) crossings at the origin.
    assert_eq!(zeros_pairs, 29 * 28 / 2);
    let nonzero: Vec<_> = pairs.iter().filter(|p| p.z.norm() > 1e-6).collect();
    assert!(!nonzero.is_empty());
    for p in &pairs {
        assert!(p.residual <= 1e-10);
        assert!(p.b - p.a > 1e-3);
    }
    for p in nonzero.iter().take(10) {
        let again = refine_pair(p.a, p.b, &cfg).unwrap();
        assert!((again.a - p.a).abs() < 1e-9 && (again.b - p.b).abs() < 1e-9);
        let moved = refine_pair(p.a + 0.01, p.b - 0.01, &cfg).unwrap();
        assert!((moved.a - p.a).abs() < 1e-8 && (moved.b - p.b).abs() < 1e-8, "{p:?} -> {moved:?}");
    }
    let h = multiplicity_histogram(&pairs, CLUSTER_TOL);
    assert_eq!(h.flagged, 0);
    assert_eq!(h.zero_value.unwrap().count, 29);
}

#[test]
fn collapsed_seed() {
    let cfg = EvalConfig::default();
    assert!(matches!(refine_pair(40.0 + 1e-9, 40.0, &cfg), Err(Error::CollapsedPair { .. })));
}

#[test]
fn injectivity_windows() {
    let cfg = EvalConfig::default();
    let r = verify_local_injectivity(14.0, 15.0, &cfg).unwrap();
    assert_eq!(r.zeros.len(), 1);
    assert!((r.zeros[0].ordinate - 14.134725141734693790).abs() < 1e-6);
    assert!(r.passed);

    let r = verify_local_injectivity(0.0, 14.0, &cfg).unwrap();
    assert!(r.zeros.is_empty());
    assert!(r.suspect_points.is_empty());
    assert!(r.passed);

    let r = verify_local_injectivity(20.0, 26.0, &cfg).unwrap();
    assert_eq!(r.zeros.len(), 2);
    assert!(r.passed, "{r:?}");
}
