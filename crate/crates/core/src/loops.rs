//! Sampled-curve tools for shared arcs: the transition map ϕ_{a,b} between
//! parameters whose image arcs coincide, and fundamental domains of loop
//! curves.
//!
//! Two parameters a, b are *equivalent* when short arcs around them have the
//! same image; ϕ_{a,b} then sends t near a to the parameter near b with the
//! same image point. For a curve that traces a loop, a period pair γ < δ
//! (δ the first parameter after γ equivalent to it) gives the fundamental
//! domain [γ, δ): every parameter is equivalent to exactly one point of it.

use num_complex::Complex64;
use serde::Serialize;

use crate::geometry::{directed_distance, nearest_on_curve, SampledCurve, SegmentGrid};
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Monotonicity {
    Increasing,
    Decreasing,
    NotMonotone,
}

/// Sampled ϕ_{a,b}: `phi[i]` is the parameter near b whose image matches
/// the sample at `t[i]` near a.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PhiTable {
    pub a: f64,
    pub b: f64,
    pub t: Vec<f64>,
    pub phi: Vec<f64>,
    /// Largest image distance between a sample and its match.
    pub max_gap: f64,
    /// ϕ(a) by interpolation in the table.
    pub phi_at_a: f64,
    pub monotonicity: Monotonicity,
}

impl PhiTable {
    /// Linear interpolation of ϕ at `t`; `None` outside the table.
    pub fn eval(&self, t: f64) -> Option<f64> {
        let (lo, hi) = (*self.t.first()?, *self.t.last()?);
        if t < lo || t > hi {
            return None;
        }
        let i = self.t.partition_point(|&x| x <= t).clamp(1, self.t.len() - 1) - 1;
        let w = (t - self.t[i]) / (self.t[i + 1] - self.t[i]);
        Some(self.phi[i] + w * (self.phi[i + 1] - self.phi[i]))
    }
}

fn grid_cell(curve: &SampledCurve) -> f64 {
    let total: f64 = curve.z.windows(2).map(|w| (w[1] - w[0]).norm()).sum();
    (4.0 * total / curve.segments() as f64).max(f64::MIN_POSITIVE)
}

fn monotonicity(v: &[f64]) -> Monotonicity {
    if v.windows(2).all(|w| w[1] > w[0]) {
        Monotonicity::Increasing
    } else if v.windows(2).all(|w| w[1] < w[0]) {
        Monotonicity::Decreasing
    } else {
        Monotonicity::NotMonotone
    }
}

/// Builds ϕ_{a,b} on the samples within `radius` of a, matching against the
/// polyline within `2·radius` of b. Fails with [`Error::NoOverlap`] when
/// F(a) and F(b) differ, or some image near a has no point of the arc near b
/// within `tol` (an isolated crossing rather than a shared arc).
pub fn phi_map(curve: &SampledCurve, a: f64, b: f64, radius: f64, tol: f64) -> Result<PhiTable> {
    if !(radius > 0.0 && tol > 0.0) {
        return Err(Error::InvalidArgument(format!("radius {radius} and tol {tol} must be positive")));
    }
    let (lo, hi) = (curve.t[0], *curve.t.last().unwrap());
    for x in [a, b] {
        if !(lo..=hi).contains(&x) {
            return Err(Error::InvalidArgument(format!("parameter {x} outside the sampled window [{lo}, {hi}]")));
        }
    }
    let gap0 = (curve.at(a) - curve.at(b)).norm();
    if gap0 > tol {
        return Err(Error::NoOverlap { a, b, gap: gap0 });
    }
    let arc_b = curve.restrict(b - 2.0 * radius, b + 2.0 * radius)?;
    let grid = SegmentGrid::for_curve(&arc_b, grid_cell(&arc_b));
    let cap = (1e3 * tol).max(grid.cell_size());
    let mut t = Vec::new();
    let mut phi = Vec::new();
    let mut max_gap = 0.0f64;
    for (ti, zi) in curve.t.iter().zip(&curve.z).filter(|(t, _)| (**t - a).abs() <= radius) {
        let (gap, p) = match nearest_on_curve(&arc_b, &grid, *zi, cap, |_| true) {
            Some((d, p, _)) => (d, p),
            None => (cap, f64::NAN),
        };
        if gap > tol {
            return Err(Error::NoOverlap { a, b, gap });
        }
        max_gap = max_gap.max(gap);
        t.push(*ti);
        phi.push(p);
    }
    if t.len() < 2 {
        return Err(Error::InsufficientSamples(format!("{} samples within {radius} of {a}", t.len())));
    }
    let monotonicity = monotonicity(&phi);
    let mut table = PhiTable { a, b, t, phi, max_gap, phi_at_a: f64::NAN, monotonicity };
    table.phi_at_a = table.eval(a).unwrap_or(f64::NAN);
    Ok(table)
}

/// Outcome of [`fundamental_domain`].
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FundamentalDomainReport {
    pub gamma: f64,
    pub delta: f64,
    pub window: (f64, f64),
    pub samples: usize,
    /// (i) every window sample has an equivalent in [γ, δ).
    pub every_sample_represented: bool,
    pub unrepresented: usize,
    pub max_representative_gap: f64,
    /// Representatives confirmed by building ϕ between sample and representative.
    pub phi_checks: usize,
    pub phi_failures: usize,
    /// (ii) no two distinct samples of [γ, δ) are equivalent.
    pub distinct_inequivalent: bool,
    pub equivalent_pairs_in_domain: usize,
    /// Hausdorff distance between F(window) and F([γ, δ]).
    pub hausdorff: f64,
    pub loop_closed: bool,
    pub passed: bool,
}

/// Number of ϕ confirmations spread over the window in check (i).
const PHI_CHECKS: usize = 64;
/// Local ϕ radius, in units of the mean parameter step.
const PHI_RADIUS_STEPS: f64 = 16.0;

/// Verifies on the sampled window that [γ, δ) is a fundamental domain:
/// (i) each sample has an equivalent representative in [γ, δ), (ii) no two
/// distinct samples of [γ, δ) are equivalent, and F(window) = F([γ, δ])
/// within `tol` (Hausdorff), i.e. the image is the loop F([γ, δ]).
///
/// Fails with [`Error::NotAPeriodPair`] unless δ is equivalent to γ with no
/// equivalent parameter strictly between them.
pub fn fundamental_domain(curve: &SampledCurve, gamma: f64, delta: f64, tol: f64) -> Result<FundamentalDomainReport> {
    if !(gamma < delta) {
        return Err(Error::InvalidArgument(format!("need gamma < delta, got {gamma} >= {delta}")));
    }
    let not_period = |reason: String| Error::NotAPeriodPair { gamma, delta, reason };
    let (lo, hi) = (curve.t[0], *curve.t.last().unwrap());
    let step = (hi - lo) / curve.segments() as f64;
    let radius = PHI_RADIUS_STEPS * step;
    match phi_map(curve, gamma, delta, radius, tol) {
        Ok(p) if p.monotonicity != Monotonicity::NotMonotone => {}
        Ok(_) => return Err(not_period("ϕ between gamma and delta is not monotone".into())),
        Err(Error::NoOverlap { gap, .. }) => {
            return Err(not_period(format!("image arcs at gamma and delta do not coincide (gap {gap:.3e})")))
        }
        Err(e) => return Err(e),
    }

    let domain = curve.restrict(gamma, delta)?;
    let domain = if domain.t.last() != Some(&delta) || domain.t[0] != gamma {
        // Pin the end points exactly.
        let mut t = vec![gamma];
        t.extend(domain.t.iter().copied().filter(|&x| x > gamma && x < delta));
        t.push(delta);
        let z = t.iter().map(|&x| curve.at(x)).collect();
        SampledCurve::new(t, z)?
    } else {
        domain
    };
    let grid = SegmentGrid::for_curve(&domain, grid_cell(&domain));
    let cap = (1e3 * tol).max(grid.cell_size());
    let near_end = |x: f64| x - gamma <= radius || delta - x <= radius;

    // Immediate predecessor: nothing strictly inside (γ, δ) equivalent to γ.
    let z_gamma = curve.at(gamma);
    for i in grid.near(z_gamma, tol) {
        let (d, s) = crate::geometry::point_segment_distance(z_gamma, domain.z[i], domain.z[i + 1]);
        let r = domain.lerp(i, s).0;
        if d <= tol && !near_end(r) && phi_map(curve, gamma, r, radius, tol).is_ok() {
            return Err(not_period(format!("parameter {r} inside (gamma, delta) is equivalent to gamma")));
        }
    }

    // (i) representatives, with ϕ confirmations on a spread of samples.
    let mut unrepresented = 0;
    let mut max_gap = 0.0f64;
    let mut phi_checks = 0;
    let mut phi_failures = 0;
    let stride = (curve.len() / PHI_CHECKS).max(1);
    for (k, (t, z)) in curve.t.iter().zip(&curve.z).enumerate() {
        match nearest_on_curve(&domain, &grid, *z, cap, |_| true) {
            Some((d, r, _)) if d <= tol => {
                max_gap = max_gap.max(d);
                let interior = *t - lo > radius && hi - *t > radius;
                if k % stride == 0 && interior {
                    phi_checks += 1;
                    if phi_map(curve, *t, r.min(delta - step * 1e-6).max(gamma), radius, tol).is_err() {
                        phi_failures += 1;
                    }
                }
            }
            Some((d, _, _)) => {
                unrepresented += 1;
                max_gap = max_gap.max(d);
            }
            None => {
                unrepresented += 1;
                max_gap = max_gap.max(cap);
            }
        }
    }

    // (ii) distinct samples of [γ, δ) are inequivalent.
    let n_dom = domain.len() - 1; // samples of [γ, δ)
    let mut equivalent_pairs = 0;
    for j in 0..n_dom {
        let (tj, zj) = (domain.t[j], domain.z[j]);
        for i in grid.near(zj, tol) {
            let wraps = (j < 2 && i + 3 >= domain.segments()) || (i < 2 && j + 3 >= n_dom);
            if i + 2 >= j && i <= j + 1 || wraps {
                continue;
            }
            let (d, s) = crate::geometry::point_segment_distance(zj, domain.z[i], domain.z[i + 1]);
            let r = domain.lerp(i, s).0;
            if d <= tol && r < delta && phi_map(curve, tj, r, radius, tol).is_ok() {
                equivalent_pairs += 1;
            }
        }
    }

    let hausdorff = directed_distance(&curve.z, &domain, &grid, cap)
        .max(directed_distance(&domain.z, curve, &SegmentGrid::for_curve(curve, grid_cell(curve)), cap));
    let every = unrepresented == 0 && phi_failures == 0;
    let distinct = equivalent_pairs == 0;
    let loop_closed = hausdorff <= tol;
    Ok(FundamentalDomainReport {
        gamma,
        delta,
        window: (lo, hi),
        samples: curve.len(),
        every_sample_represented: every,
        unrepresented,
        max_representative_gap: max_gap,
        phi_checks,
        phi_failures,
        distinct_inequivalent: distinct,
        equivalent_pairs_in_domain: equivalent_pairs,
        hausdorff,
        loop_closed,
        passed: every && distinct && loop_closed,
    })
}

/// The unit circle t ↦ e^{it}.
pub fn circle(t: f64) -> Complex64 {
    Complex64::from_polar(1.0, t)
}

/// The reparametrized circle t ↦ e^{i(t + 0.1 sin t)}, period 2π.
pub fn wobbly_circle(t: f64) -> Complex64 {
    Complex64::from_polar(1.0, t + 0.1 * t.sin())
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn circle_phi_is_translation() {
        let c = SampledCurve::from_fn_including(circle, -1.0, 8.0, 90_000, &[0.0, 2.0 * PI]).unwrap();
        let p = phi_map(&c, 0.0, 2.0 * PI, 0.3, 1e-8).unwrap();
        assert_eq!(p.monotonicity, Monotonicity::Increasing);
        assert!((p.phi_at_a - 2.0 * PI).abs() < 1e-7);
        for (t, phi) in p.t.iter().zip(&p.phi) {
            assert!((phi - t - 2.0 * PI).abs() < 1e-6);
        }
    }

    #[test]
    fn crossing_is_not_overlap() {
        // Figure eight: t ↦ (sin t, sin t cos t) crosses itself at 0 and π.
        let fig8 = |t: f64| Complex64::new(t.sin(), t.sin() * t.cos());
        let c = SampledCurve::from_fn_including(fig8, -0.5, 4.0, 20_000, &[0.0, PI]).unwrap();
        assert!(matches!(phi_map(&c, 0.0, PI, 0.2, 1e-6), Err(Error::NoOverlap { .. })));
        assert!(matches!(phi_map(&c, 0.0, 1.0, 0.2, 1e-6), Err(Error::NoOverlap { .. })));
    }

    #[test]
    fn equivalence_relation_on_wobbly_circle() {
        let c = SampledCurve::from_fn_including(wobbly_circle, -1.0, 14.0, 150_000, &[0.5, 0.5 + 2.0 * PI, 0.5 + 4.0 * PI])
            .unwrap();
        let (a, b, d) = (0.5, 0.5 + 2.0 * PI, 0.5 + 4.0 * PI);
        let refl = phi_map(&c, a, a, 0.2, 1e-7).unwrap();
        assert!(refl.t.iter().zip(&refl.phi).all(|(t, p)| (t - p).abs() < 1e-9));
        let ab = phi_map(&c, a, b, 0.2, 1e-7).unwrap();
        let ba = phi_map(&c, b, a, 0.4, 1e-7).unwrap();
        let bd = phi_map(&c, b, d, 0.4, 1e-7).unwrap();
        let ad = phi_map(&c, a, d, 0.2, 1e-7).unwrap();
        for &t in ab.t.iter().step_by(97) {
            let x = ab.eval(t).unwrap();
            assert!((ba.eval(x).unwrap() - t).abs() < 1e-6, "symmetry at {t}");
            assert!((bd.eval(x).unwrap() - ad.eval(t).unwrap()).abs() < 1e-6, "transitivity at {t}");
        }
        assert_eq!(ab.monotonicity, Monotonicity::Increasing);
    }

    #[test]
    fn circle_fundamental_domain() {
        let c = SampledCurve::from_fn_including(circle, -10.0, 10.0, 400_000, &[-2.0 * PI, 0.0, 2.0 * PI]).unwrap();
        let r = fundamental_domain(&c, 0.0, 2.0 * PI, 1e-9).unwrap();
        assert!(r.passed, "{r:?}");
        assert!(r.phi_checks > 10);
        // A shorter domain misses part of the circle; a longer one is not a period pair.
        let r = fundamental_domain(&c, 0.0, PI, 1e-9);
        assert!(matches!(r, Err(Error::NotAPeriodPair { .. })));
        let r = fundamental_domain(&c, -2.0 * PI, 2.0 * PI, 1e-9);
        assert!(matches!(r, Err(Error::NotAPeriodPair { .. })), "{r:?}");
    }
}
