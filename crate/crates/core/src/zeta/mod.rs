//! ζ and ζ' on the critical line with absolute error bounds.
//!
//! Below `rs_switch_t` values come from Euler–Maclaurin summation, above it
//! from the Riemann–Siegel formula. Derivatives always come from the
//! termwise-differentiated Euler–Maclaurin sum.

mod em;
mod rs;
mod rs_coeffs;

use std::fmt;
use std::io::Write;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub use em::{zeta_em, EmResult};

use crate::theta;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Method {
    EulerMaclaurin,
    RiemannSiegel,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::EulerMaclaurin => "EulerMaclaurin",
            Method::RiemannSiegel => "RiemannSiegel",
        })
    }
}

/// One point of the curve f(t) = ζ(½ + it).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CriticalSample {
    pub t: f64,
    pub value: Complex64,
    pub err: f64,
    pub method: Method,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EvalConfig {
    pub target_abs_err: f64,
    /// Maximum number of Bernoulli correction terms.
    pub em_terms: usize,
    pub rs_switch_t: f64,
    pub working_precision_bits: u32,
}

impl Default for EvalConfig {
    /// Euler–Maclaurin below t = 40, Riemann–Siegel above. The target is
    /// loose enough for the Riemann–Siegel remainder at t = 40.
    fn default() -> Self {
        EvalConfig {
            target_abs_err: 1e-5,
            em_terms: 60,
            rs_switch_t: 40.0,
            working_precision_bits: 128,
        }
    }
}

/// Smallest error the binary64 evaluator can promise.
pub const ARITHMETIC_FLOOR: f64 = 1e-15;

impl EvalConfig {
    /// Euler–Maclaurin everywhere up to |t| = 10^4 with a 1e-11 target:
    /// the setting used for certified refinement and phase computations.
    pub fn certified() -> Self {
        EvalConfig {
            target_abs_err: 1e-11,
            em_terms: 60,
            rs_switch_t: 1e4,
            working_precision_bits: 128,
        }
    }

    pub fn with_precision(mut self, bits: u32) -> Self {
        self.working_precision_bits = bits;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.target_abs_err > 0.0 && self.target_abs_err.is_finite()) {
            return Err(Error::InvalidConfig("target_abs_err must be positive".into()));
        }
        if self.em_terms == 0 {
            return Err(Error::InvalidConfig("em_terms must be positive".into()));
        }
        if !(self.rs_switch_t >= 30.0) {
            return Err(Error::InvalidConfig("rs_switch_t must be >= 30".into()));
        }
        if self.working_precision_bits == 0 {
            return Err(Error::InvalidConfig("working_precision_bits must be positive".into()));
        }
        let granularity = 2f64.powi(1 - self.working_precision_bits.min(1000) as i32);
        if self.target_abs_err < granularity {
            return Err(Error::InvalidConfig(format!(
                "target_abs_err {:e} is below the working granularity {:e}",
                self.target_abs_err, granularity
            )));
        }
        Ok(())
    }

    pub fn method_for(&self, t: f64) -> Method {
        if t.abs() < self.rs_switch_t {
            Method::EulerMaclaurin
        } else {
            Method::RiemannSiegel
        }
    }
}

fn check_t(t: f64) -> Result<()> {
    if t.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!("t must be finite, got {t}")))
    }
}

fn unreachable_if(t: f64, err: f64, cfg: &EvalConfig) -> Result<()> {
    if err <= cfg.target_abs_err && err.is_finite() {
        Ok(())
    } else {
        Err(Error::PrecisionUnreachable { t, target: cfg.target_abs_err, achieved: err })
    }
}

fn em_critical(t_abs: f64, cfg: &EvalConfig, derivative: bool) -> Result<EmResult> {
    zeta_em(Complex64::new(0.5, t_abs), cfg.em_terms, cfg.target_abs_err, derivative)
}

/// f(t) = ζ(½ + it) by the method `cfg` selects for |t|.
pub fn zeta_critical(t: f64, cfg: &EvalConfig) -> Result<CriticalSample> {
    check_t(t)?;
    cfg.validate()?;
    let method = cfg.method_for(t);
    let ta = t.abs();
    let (value, err) = match method {
        Method::EulerMaclaurin => {
            let r = em_critical(ta, cfg, false)?;
            (r.value, r.err)
        }
        Method::RiemannSiegel => {
            let (g, g_err) = theta::g_with_err(ta);
            rs::zeta_rs(ta, -g, g_err)
        }
    };
    unreachable_if(t, err, cfg)?;
    let value = if t < 0.0 { value.conj() } else { value };
    Ok(CriticalSample { t, value, err, method })
}

/// f'(t) = i ζ'(½ + it).
pub fn zeta_prime_critical(t: f64, cfg: &EvalConfig) -> Result<CriticalSample> {
    check_t(t)?;
    cfg.validate()?;
    let r = em_critical(t.abs(), cfg, true)?;
    let (d, err) = r.derivative.expect("derivative requested");
    unreachable_if(t, err, cfg)?;
    let fp = Complex64::i() * d;
    // f(-t) = conj f(t)  =>  f'(-t) = -conj f'(t)
    let value = if t < 0.0 { -fp.conj() } else { fp };
    Ok(CriticalSample { t, value, err, method: Method::EulerMaclaurin })
}

/// f(t) and f'(t) from one Euler–Maclaurin pass.
pub(crate) fn value_and_derivative(t: f64, cfg: &EvalConfig) -> Result<(CriticalSample, Complex64)> {
    check_t(t)?;
    let r = em_critical(t.abs(), cfg, true)?;
    let (d, derr) = r.derivative.expect("derivative requested");
    unreachable_if(t, r.err.max(derr), cfg)?;
    let mut value = r.value;
    let mut fp = Complex64::i() * d;
    if t < 0.0 {
        value = value.conj();
        fp = -fp.conj();
    }
    Ok((CriticalSample { t, value, err: r.err, method: Method::EulerMaclaurin }, fp))
}

/// Hardy's Z(t) = e^{-i g(t)} f(t), real on the real line.
pub fn hardy_z(t: f64, cfg: &EvalConfig) -> Result<(f64, f64)> {
    check_t(t)?;
    cfg.validate()?;
    let ta = t.abs();
    let (g, g_err) = theta::g_with_err(ta);
    let (z, err) = match cfg.method_for(ta) {
        Method::EulerMaclaurin => {
            let r = em_critical(ta, cfg, false)?;
            let rot = Complex64::from_polar(1.0, -g);
            ((rot * r.value).re, r.err + r.value.norm() * g_err)
        }
        Method::RiemannSiegel => rs::hardy_z(ta, -g, g_err),
    };
    // Z is even in t.
    Ok((z, err))
}

const MIN_STEP: f64 = 1e-12;

fn scan_piece(lo: f64, hi: f64, max_step: f64, cfg: &EvalConfig) -> Result<Vec<CriticalSample>> {
    let mut out = Vec::new();
    let (first, mut fp) = value_and_derivative(lo, cfg)?;
    let mut cur = first;
    out.push(sample_for(cur, lo, cfg)?);
    let mut t = lo;
    while t < hi {
        let speed = fp.norm().max(1e-3);
        let mut dt = (0.9 * max_step / speed).min(hi - t);
        loop {
            let t_next = if dt >= hi - t { hi } else { t + dt };
            let (next, next_fp) = value_and_derivative(t_next, cfg)?;
            if (next.value - cur.value).norm() <= max_step {
                t = t_next;
                cur = next;
                fp = next_fp;
                out.push(sample_for(cur, t, cfg)?);
                break;
            }
            dt *= 0.5;
            if dt < MIN_STEP * t.abs().max(1.0) {
                return Err(Error::StepUnderflow { t });
            }
        }
    }
    Ok(out)
}

/// Samples from the Euler–Maclaurin pass are reported under the method the
/// configuration assigns to t; Riemann–Siegel points are re-evaluated.
fn sample_for(s: CriticalSample, t: f64, cfg: &EvalConfig) -> Result<CriticalSample> {
    match cfg.method_for(t) {
        Method::EulerMaclaurin => Ok(s),
        Method::RiemannSiegel => zeta_critical(t, cfg),
    }
}

/// Adaptive polyline through the curve on [t_lo, t_hi] whose consecutive
/// images are at most `max_arclength_step` apart. Sub-windows are scanned
/// in parallel; the split is fixed by the window so output is deterministic.
pub fn scan_curve(t_lo: f64, t_hi: f64, max_arclength_step: f64, cfg: &EvalConfig) -> Result<Vec<CriticalSample>> {
    check_t(t_lo)?;
    check_t(t_hi)?;
    cfg.validate()?;
    if !(t_lo < t_hi) {
        return Err(Error::InvalidArgument(format!("empty window [{t_lo}, {t_hi}]")));
    }
    if !(max_arclength_step > 0.0) {
        return Err(Error::InvalidArgument("max_arclength_step must be positive".into()));
    }
    let pieces = (((t_hi - t_lo) / 4.0).ceil() as usize).clamp(1, 4096);
    let width = (t_hi - t_lo) / pieces as f64;
    let parts: Vec<Result<Vec<CriticalSample>>> = (0..pieces)
        .into_par_iter()
        .map(|i| {
            let lo = t_lo + width * i as f64;
            let hi = if i + 1 == pieces { t_hi } else { t_lo + width * (i + 1) as f64 };
            scan_piece(lo, hi, max_arclength_step, cfg)
        })
        .collect();
    let mut out = Vec::new();
    for part in parts {
        let part = part?;
        let skip = usize::from(!out.is_empty());
        out.extend(part.into_iter().skip(skip));
    }
    Ok(out)
}

/// Largest |f| among samples; reported for growth diagnostics only.
pub fn max_modulus(samples: &[CriticalSample]) -> f64 {
    samples.iter().map(|s| s.value.norm()).fold(0.0, f64::max)
}

pub const SAMPLE_CSV_HEADER: &str = "t,re,im,err,method";

pub fn write_samples_csv<W: Write>(mut w: W, samples: &[CriticalSample]) -> std::io::Result<()> {
    writeln!(w, "{SAMPLE_CSV_HEADER}")?;
    for s in samples {
        writeln!(w, "{},{},{},{},{}", s.t, s.value.re, s.value.im, s.err, s.method)?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn config_validation() {
        assert!(EvalConfig::default().validate().is_ok());
        let bad = EvalConfig { rs_switch_t: 20.0, ..EvalConfig::default() };
        assert!(matches!(bad.validate(), Err(Error::InvalidConfig(_))));
        let tiny = EvalConfig { target_abs_err: 1e-20, working_precision_bits: 53, ..EvalConfig::default() };
        assert!(tiny.validate().is_err());
    }

    #[test]
    fn method_follows_switch() {
        let cfg = EvalConfig::default();
        assert_eq!(zeta_critical(10.0, &cfg).unwrap().method, Method::EulerMaclaurin);
        assert_eq!(zeta_critical(45.0, &cfg).unwrap().method, Method::RiemannSiegel);
        assert_eq!(zeta_critical(-45.0, &cfg).unwrap().method, Method::RiemannSiegel);
    }

    #[test]
    fn unreachable_target_is_reported() {
        let cfg = EvalConfig { target_abs_err: 1e-12, ..EvalConfig::default() };
        assert!(matches!(zeta_critical(100.0, &cfg), Err(Error::PrecisionUnreachable { .. })));
    }

    #[test]
    fn non_finite_t_rejected() {
        assert!(zeta_critical(f64::NAN, &EvalConfig::default()).is_err());
    }

    #[test]
    fn csv_layout() {
        let cfg = EvalConfig::certified();
        let s = zeta_critical(0.0, &cfg).unwrap();
        let mut buf = Vec::new();
        write_samples_csv(&mut buf, &[s]).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next(), Some(SAMPLE_CSV_HEADER));
        let row: Vec<&str> = lines.next().unwrap().split(',').collect();
        assert_eq!(row.len(), 5);
        assert_eq!(row[4], "EulerMaclaurin");
        assert!((row[1].parse::<f64>().unwrap() + 1.4603545088).abs() < 1e-9);
    }
}
