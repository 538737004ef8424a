//! The phase function g(t) = -arg Γ(¼ + it/2) + (t/2) log π, its
//! derivatives, the root Θ of g', the continuous argument ϑ(t) of f and the
//! zero count N(t) recovered from ϑ(t) = π(N(t) - 1) + g(t).

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::gamma;
use crate::roots;
use crate::zeta::{self, zeta_em, EvalConfig};
use crate::{Error, Result};

const U: f64 = f64::EPSILON * 0.5;
const HALF_LN_PI: f64 = 0.572_364_942_924_700_1;

/// |f(t)| at or below this counts as a zero of f.
pub const ZERO_TOLERANCE: f64 = 1e-8;

/// Rounding margin required before a zero count is certified.
pub const CERTIFY_MARGIN: f64 = 0.25;

/// g(t) together with an absolute rounding estimate.
pub fn g_with_err(t: f64) -> (f64, f64) {
    let ta = t.abs();
    let arg = gamma::arg_gamma(Complex64::new(0.25, 0.5 * ta));
    let v = -arg + ta * HALF_LN_PI;
    let err = 16.0 * U * (ta * (ta.max(1.0)).ln() + 1.0);
    (if t < 0.0 { -v } else { v }, err)
}

/// g(t), with arg Γ taken by continuous variation from t = 0. Odd in t.
pub fn g(t: f64) -> f64 {
    g_with_err(t).0
}

/// g'(t) = -½ Re ψ(¼ + it/2) + ½ log π. Even in t.
pub fn g_prime(t: f64) -> f64 {
    let psi = gamma::digamma(Complex64::new(0.25, 0.5 * t.abs()));
    -0.5 * psi.re + HALF_LN_PI
}

/// g''(t) = -16t Σ_{n≥0} (4n+1)/((4n+1)² + 4t²)².
///
/// The series is summed directly up to N and the tail replaced by its
/// integral plus the first two Euler–Maclaurin corrections; N is chosen so
/// that 16|t|·|h'(N)|/12, which dominates the neglected remainder, is below
/// 1e-15.
pub fn g_double_prime(t: f64) -> f64 {
    if t == 0.0 {
        return 0.0;
    }
    let ta = t.abs();
    let t2 = 4.0 * ta * ta;
    let h = |x: f64| {
        let a = 4.0 * x + 1.0;
        let d = a * a + t2;
        a / (d * d)
    };
    let dh = |x: f64| {
        let a = 4.0 * x + 1.0;
        let d = a * a + t2;
        4.0 / (d * d) - 16.0 * a * a / (d * d * d)
    };
    // 16|t| / (4N+1)^4 <= 1e-15, and at least past the peak of h.
    let n_min = ((16.0 * ta * 1e15).powf(0.25) - 1.0) / 4.0;
    let n = n_min.max(ta).max(16.0).ceil() as usize;
    let mut sum = 0.0;
    for k in (0..n).rev() {
        sum += h(k as f64);
    }
    let nf = n as f64;
    let a = 4.0 * nf + 1.0;
    let tail = 1.0 / (8.0 * (a * a + t2)) + 0.5 * h(nf) - dh(nf) / 12.0;
    let v = -16.0 * ta * (sum + tail);
    if t < 0.0 {
        -v
    } else {
        v
    }
}

/// Θ, the unique positive root of g', by bracketing on (0, 100), bisection
/// and a Newton polish with g''.
pub fn find_theta_root() -> Result<f64> {
    let grid: Vec<f64> = (1..=200).map(|i| i as f64 * 0.5).collect();
    let vals: Vec<f64> = grid.iter().map(|&t| g_prime(t)).collect();
    let (lo, hi) = *roots::sign_change_brackets(&grid, &vals)
        .first()
        .ok_or(Error::BracketFailure { lo: 0.0, hi: 100.0 })?;
    let coarse = roots::bisect(g_prime, lo, hi, 1e-6, 100).ok_or(Error::BracketFailure { lo, hi })?;
    let mut x = roots::newton(g_prime, g_double_prime, coarse, 4.0 * f64::EPSILON, 20).unwrap_or(coarse);
    if !(x > lo && x < hi) {
        x = roots::bisect(g_prime, lo, hi, 1e-15, 200).ok_or(Error::BracketFailure { lo, hi })?;
    }
    Ok(x)
}

/// True iff g' < 0 on all of [t_lo, t_hi]. g'' has the sign of -t, so g'
/// is monotone on each side of 0 and its maximum over a grid cell sits at
/// an endpoint, or at 0 for the cell that straddles it.
pub fn check_monotone_g(t_lo: f64, t_hi: f64, step: f64) -> bool {
    if !(t_lo < t_hi) || !(step > 0.0) {
        return false;
    }
    let n = ((t_hi - t_lo) / step).ceil() as usize;
    let mut prev_t = t_lo;
    if g_prime(t_lo) >= 0.0 {
        return false;
    }
    for i in 1..=n {
        let t = if i == n { t_hi } else { t_lo + step * i as f64 };
        if g_prime(t) >= 0.0 || (prev_t < 0.0 && t > 0.0 && g_prime(0.0) >= 0.0) {
            return false;
        }
        prev_t = t;
    }
    true
}

/// Continuous argument of f at t along 2 → 2+it → ½+it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhaseState {
    pub t: f64,
    pub vartheta: f64,
    pub path_points: usize,
    pub err: f64,
}

const MAX_ARG_STEP: f64 = PI / 4.0;

/// ϑ(t) with a horizontal continuation beginning at Δσ = `initial_step`.
///
/// On the vertical leg Re ζ(2+it) ≥ 2 - ζ(2) > 0, so the principal argument
/// there is already the continuous one.
pub fn vartheta_with_step(t: f64, cfg: &EvalConfig, initial_step: f64) -> Result<PhaseState> {
    if !t.is_finite() {
        return Err(Error::InvalidArgument(format!("t must be finite, got {t}")));
    }
    if t == 0.0 {
        return Err(Error::InvalidArgument("the continuation path meets the pole at t = 0".into()));
    }
    if t < 0.0 {
        // conjugate path: ϑ(-t) = -ϑ(t)
        let s = vartheta_with_step(-t, cfg, initial_step)?;
        return Ok(PhaseState { t, vartheta: -s.vartheta, ..s });
    }
    let target = cfg.target_abs_err;
    let end = zeta_em(Complex64::new(0.5, t), cfg.em_terms, target, false)?;
    if end.value.norm() <= ZERO_TOLERANCE {
        return Err(Error::OnZero { t, abs_f: end.value.norm() });
    }
    let start = zeta_em(Complex64::new(2.0, t), cfg.em_terms, target, false)?;
    let mut phase = start.value.arg();
    let mut prev = start.value;
    let mut sigma = 2.0;
    let mut step = initial_step;
    let mut points = 1usize;
    while sigma > 0.5 {
        let next_sigma = (sigma - step).max(0.5);
        let z = if next_sigma == 0.5 {
            end.value
        } else {
            zeta_em(Complex64::new(next_sigma, t), cfg.em_terms, target, false)?.value
        };
        let d = (z / prev).arg();
        if d.abs() > MAX_ARG_STEP {
            step *= 0.5;
            if step < 1e-10 {
                return Err(Error::UnwindAmbiguity { t });
            }
            continue;
        }
        phase += d;
        prev = z;
        sigma = next_sigma;
        points += 1;
        if d.abs() < 0.25 * MAX_ARG_STEP {
            step = (step * 1.5).min(initial_step.max(0.05));
        }
    }
    let err = (end.err / end.value.norm()).min(PI)
        + (start.err / start.value.norm()).min(PI)
        + 4.0 * U * PI * points as f64
        + 4.0 * U * phase.abs();
    Ok(PhaseState { t, vartheta: phase, path_points: points, err })
}

pub fn vartheta(t: f64, cfg: &EvalConfig) -> Result<PhaseState> {
    vartheta_with_step(t, cfg, 0.05)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ZeroCount {
    pub t: f64,
    pub n: u64,
    pub certified: bool,
    /// (ϑ(t) - g(t))/π + 1 before rounding.
    pub raw: f64,
}

/// N(t) = round((ϑ(t) - g(t))/π + 1), certified when the unrounded value
/// is within 0.25 of the integer.
pub fn count_zeros(t: f64, cfg: &EvalConfig) -> Result<ZeroCount> {
    if !(t > 0.0) {
        return Err(Error::InvalidArgument(format!("count_zeros needs t > 0, got {t}")));
    }
    let phase = vartheta(t, cfg)?;
    let raw = (phase.vartheta - g(t)) / PI + 1.0;
    let n = raw.round();
    let certified = (raw - n).abs() <= CERTIFY_MARGIN && n >= 0.0;
    Ok(ZeroCount { t, n: n.max(0.0) as u64, certified, raw })
}

/// Ordinates in [t_lo, t_hi] where Hardy's Z changes sign, located on a
/// grid of spacing `step` and refined to ~1e-13.
pub fn bracket_zeros(t_lo: f64, t_hi: f64, step: f64, cfg: &EvalConfig) -> Result<Vec<f64>> {
    if !(t_lo < t_hi) || !(step > 0.0) {
        return Err(Error::InvalidArgument("bracket_zeros needs t_lo < t_hi and step > 0".into()));
    }
    let n = ((t_hi - t_lo) / step).ceil() as usize;
    let grid: Vec<f64> = (0..=n).map(|i| (t_lo + step * i as f64).min(t_hi)).collect();
    let vals = grid
        .iter()
        .map(|&t| zeta::hardy_z(t, cfg).map(|(z, _)| z))
        .collect::<Result<Vec<f64>>>()?;
    let z = |t: f64| zeta::hardy_z(t, cfg).map(|(z, _)| z).unwrap_or(f64::NAN);
    let mut out = Vec::new();
    for (a, b) in roots::sign_change_brackets(&grid, &vals) {
        if let Some(r) = roots::illinois(z, a, b, 1e-13, 200) {
            out.push(r);
        }
    }
    Ok(out)
}

/// Diagnostics row emitted by the CLI `phase` command.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhaseRecord {
    pub t: f64,
    pub g: f64,
    pub g_prime: f64,
    pub vartheta: f64,
    #[serde(rename = "N")]
    pub n: u64,
    pub certified: bool,
}

pub fn phase_record(t: f64, cfg: &EvalConfig) -> Result<PhaseRecord> {
    let count = count_zeros(t, cfg)?;
    let phase = vartheta(t, cfg)?;
    Ok(PhaseRecord {
        t,
        g: g(t),
        g_prime: g_prime(t),
        vartheta: phase.vartheta,
        n: count.n,
        certified: count.certified,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn g_vanishes_at_origin_and_is_odd() {
        assert_eq!(g(0.0), 0.0);
        for &t in &[0.3, 7.0, 55.5, 1234.5] {
            assert_eq!(g(-t), -g(t));
        }
    }

    #[test]
    fn g_double_prime_signs() {
        assert_eq!(g_double_prime(0.0), 0.0);
        assert!(g_double_prime(1.0) < 0.0);
        assert!(g_double_prime(-1.0) > 0.0);
    }

    #[test]
    fn g_double_prime_matches_trigamma_route() {
        // g'' = ¼ Im ψ'(¼ + it/2)
        for &t in &[0.5, 3.0, 6.3, 40.0, 900.0] {
            let tri = 0.25 * gamma::trigamma(Complex64::new(0.25, 0.5 * t)).im;
            assert!((g_double_prime(t) - tri).abs() < 1e-13, "t = {t}");
        }
    }

    #[test]
    fn monotone_check_rejects_rising_stretch() {
        assert!(!check_monotone_g(0.0, 6.0, 0.01));
        assert!(check_monotone_g(7.0, 100.0, 0.01));
        assert!(check_monotone_g(-100.0, -7.0, 0.01));
    }

    #[test]
    fn phase_at_zero_ordinate_is_refused() {
        let cfg = EvalConfig::certified();
        let z1 = 14.134_725_141_734_694;
        assert!(matches!(vartheta(z1, &cfg), Err(Error::OnZero { .. })));
        assert!(vartheta(0.0, &cfg).is_err());
    }
}
