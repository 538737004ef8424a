//! Euler–Maclaurin summation for ζ(s) and ζ'(s).
//!
//! ζ(s) = Σ_{n<N} n^-s + N^{1-s}/(s-1) + N^-s/2 + Σ_{k=1}^{M} T_k + R_M with
//! T_k = B_{2k}/(2k)! · s(s+1)…(s+2k-2) · N^{-s-2k+1} and
//! |R_M| ≤ |s+2M+1| / (σ+2M+1) · |T_{M+1}|.

use std::f64::consts::PI;
use std::sync::OnceLock;

use num_complex::Complex64;

use crate::{Error, Result};

const TABLE_LEN: usize = 4096;
const U: f64 = f64::EPSILON * 0.5;

fn ln_table() -> &'static [(f64, f64)] {
    static TABLE: OnceLock<Vec<(f64, f64)>> = OnceLock::new();
    TABLE.get_or_init(|| crate::fixed::ln_table(TABLE_LEN))
}

/// (hi, lo) split of ln n; `exact` is false beyond the precomputed table.
#[inline]
pub(crate) fn ln_n(n: usize) -> (f64, f64, bool) {
    if n <= TABLE_LEN {
        let (hi, lo) = ln_table()[n - 1];
        (hi, lo, true)
    } else {
        ((n as f64).ln(), 0.0, false)
    }
}

const TWO_PI_HI: f64 = 6.283_185_307_179_586;
const TWO_PI_LO: f64 = 2.449_293_598_294_706_4e-16;

/// t · ln n reduced modulo 2π, carried in extended precision.
/// Returns the reduced phase and its absolute error estimate.
#[inline]
pub(crate) fn reduced_phase(t: f64, n: usize) -> (f64, f64) {
    let (hi, lo, exact) = ln_n(n);
    let ph = t * hi;
    let pl = t.mul_add(hi, -ph) + t * lo;
    let k = (ph / TWO_PI_HI).round();
    let q = k * TWO_PI_HI;
    let qe = k.mul_add(TWO_PI_HI, -q);
    let r = ((ph - q) - qe) - k * TWO_PI_LO + pl;
    let mut err = 4.0 * U * r.abs().max(1.0) + U * (k.abs() * TWO_PI_LO + pl.abs());
    if !exact {
        err += U * (t * hi).abs();
    }
    (r, err)
}

/// Neumaier-compensated complex accumulator.
#[derive(Default, Clone, Copy)]
pub(crate) struct CompSum {
    sum: Complex64,
    comp: Complex64,
    abs_sum: f64,
}

impl CompSum {
    #[inline]
    fn add_real(s: &mut f64, c: &mut f64, x: f64) {
        let t = *s + x;
        if s.abs() >= x.abs() {
            *c += (*s - t) + x;
        } else {
            *c += (x - t) + *s;
        }
        *s = t;
    }

    #[inline]
    pub(crate) fn add(&mut self, z: Complex64) {
        Self::add_real(&mut self.sum.re, &mut self.comp.re, z.re);
        Self::add_real(&mut self.sum.im, &mut self.comp.im, z.im);
        self.abs_sum += z.norm();
    }

    pub(crate) fn value(&self) -> Complex64 {
        self.sum + self.comp
    }

    /// Rounding bound of the compensated sum itself.
    pub(crate) fn rounding(&self) -> f64 {
        4.0 * U * self.value().norm() + 8.0 * U * U * self.abs_sum * 64.0
    }
}

/// 2ζ(2k)/(2π)^{2k} with alternating sign: B_{2k}/(2k)!.
fn bernoulli_over_factorial(k: usize) -> f64 {
    const EXACT: [f64; 5] = [
        1.0 / 12.0,
        -1.0 / 720.0,
        1.0 / 30240.0,
        -1.0 / 1209600.0,
        1.0 / 47900160.0,
    ];
    if k <= EXACT.len() {
        return EXACT[k - 1];
    }
    let two_k = 2 * k as i32;
    let mut z = 0.0;
    for n in (1..=40).rev() {
        z += (n as f64).powi(-two_k);
    }
    let sign = if k % 2 == 1 { 1.0 } else { -1.0 };
    sign * 2.0 * z / (2.0 * PI).powi(two_k)
}

fn em_coeffs() -> &'static [f64] {
    static C: OnceLock<Vec<f64>> = OnceLock::new();
    C.get_or_init(|| (1..=200).map(bernoulli_over_factorial).collect())
}

#[derive(Debug, Clone, Copy)]
pub struct EmResult {
    pub value: Complex64,
    pub err: f64,
    pub derivative: Option<(Complex64, f64)>,
}

/// Direct-sum length for a given |Im s|.
pub(crate) fn main_sum_length(t: f64) -> usize {
    ((t.abs() / PI).ceil() as usize + 15).max(15)
}

/// Evaluates ζ(s) (and optionally ζ'(s)) with a Backlund-style remainder
/// bound plus a floating-point rounding bound.
pub fn zeta_em(s: Complex64, max_terms: usize, target: f64, want_derivative: bool) -> Result<EmResult> {
    if !(s.re.is_finite() && s.im.is_finite()) {
        return Err(Error::InvalidArgument(format!("non-finite s = {s}")));
    }
    if (s - 1.0).norm() < 1e-12 {
        return Err(Error::InvalidArgument("pole at s = 1".into()));
    }
    let sigma = s.re;
    let t = s.im;
    let n_main = main_sum_length(t);

    let mut acc = CompSum::default();
    let mut dacc = CompSum::default();
    let mut term_err = 0.0;
    let mut dterm_err = 0.0;
    for n in (1..n_main).rev() {
        let (hi, lo, _) = ln_n(n);
        let ln = hi + lo;
        let (phase, perr) = reduced_phase(t, n);
        let modulus = (-sigma * ln).exp();
        let z = Complex64::from_polar(modulus, -phase);
        acc.add(z);
        let e = modulus * (perr + 4.0 * U + U * (sigma * ln).abs());
        term_err += e;
        if want_derivative {
            dacc.add(-z * ln);
            dterm_err += e * ln + modulus * ln * U;
        }
    }

    let (hi_n, lo_n, _) = ln_n(n_main);
    let ln_big = hi_n + lo_n;
    let (phase_n, perr_n) = reduced_phase(t, n_main);
    // N^-s
    let n_pow = Complex64::from_polar((-sigma * ln_big).exp(), -phase_n);
    let nf = n_main as f64;
    let sm1 = s - 1.0;
    let tail0 = n_pow * nf / sm1;
    let half = n_pow * 0.5;
    let mut value = acc.value() + tail0 + half;
    let mut rounding = acc.rounding() + term_err + (tail0.norm() + half.norm()) * (perr_n + 8.0 * U);

    let mut dvalue = Complex64::new(0.0, 0.0);
    let mut drounding = 0.0;
    if want_derivative {
        let d_tail0 = -tail0 * (ln_big + sm1.inv());
        let d_half = -half * ln_big;
        dvalue = dacc.value() + d_tail0 + d_half;
        drounding = dacc.rounding() + dterm_err + (d_tail0.norm() + d_half.norm()) * (perr_n + 8.0 * U);
    }

    // Bernoulli tail.
    let coeffs = em_coeffs();
    let n_inv2 = 1.0 / (nf * nf);
    // poly = s(s+1)...(s+2k-2) * N^{-s-2k+1}
    let mut poly = n_pow * s / nf;
    // Σ_{j=0}^{2k-2} 1/(s+j)
    let mut harmonic = s.inv();
    let max_terms = max_terms.min(coeffs.len() - 1).max(1);
    let remainder;
    let dremainder;
    let mut prev_norm = f64::INFINITY;
    let mut k = 1;
    loop {
        let term = poly * coeffs[k - 1];
        let tn = term.norm();
        // candidate remainder if we stop before adding this term
        let m = (k - 1) as f64;
        let backlund = (s + 2.0 * m + 1.0).norm() / (sigma + 2.0 * m + 1.0);
        let bound_here = backlund * tn;
        let dbound_here = 2.0 * bound_here * (ln_big + harmonic.norm() + 1.0);
        if bound_here <= 1e-3 * target || k > max_terms || tn > prev_norm {
            remainder = bound_here;
            dremainder = dbound_here;
            break;
        }
        value += term;
        rounding += tn * 8.0 * U;
        if want_derivative {
            let dterm = term * (harmonic - ln_big);
            dvalue += dterm;
            drounding += dterm.norm() * 8.0 * U;
        }
        prev_norm = tn;
        // advance to k+1
        let a = s + (2 * k - 1) as f64;
        let b = s + (2 * k) as f64;
        poly = poly * a * b * n_inv2;
        harmonic += a.inv() + b.inv();
        k += 1;
    }

    Ok(EmResult {
        value,
        err: remainder + rounding,
        derivative: want_derivative.then_some((dvalue, dremainder + drounding)),
    })
}
