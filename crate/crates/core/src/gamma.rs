//! Complex log-gamma and polygamma in the right half-plane.
//!
//! `ln_gamma` returns the branch obtained by continuous variation from the
//! positive real axis, so its imaginary part has no 2π jumps as a function
//! of `Im z`. The recurrence shift uses principal logarithms of `z + k`,
//! which are continuous for `Re z > 0`.

use num_complex::Complex64;

/// B_{2k} for k = 1..=15.
pub(crate) const BERNOULLI_2K: [f64; 15] = [
    1.0 / 6.0,
    -1.0 / 30.0,
    1.0 / 42.0,
    -1.0 / 30.0,
    5.0 / 66.0,
    -691.0 / 2730.0,
    7.0 / 6.0,
    -3617.0 / 510.0,
    43867.0 / 798.0,
    -174611.0 / 330.0,
    854513.0 / 138.0,
    -236364091.0 / 2730.0,
    8553103.0 / 6.0,
    -23749461029.0 / 870.0,
    8615841276005.0 / 14322.0,
];

const SHIFT_RADIUS: f64 = 16.0;
const STIRLING_TERMS: usize = 12;

fn shift_count(z: Complex64) -> usize {
    if z.norm() >= SHIFT_RADIUS {
        0
    } else {
        (SHIFT_RADIUS - z.re).ceil().max(0.0) as usize
    }
}

/// ln Γ(z), continuous branch, for `Re z > 0`.
pub fn ln_gamma(z: Complex64) -> Complex64 {
    debug_assert!(z.re > 0.0);
    let n = shift_count(z);
    let mut shift = Complex64::new(0.0, 0.0);
    for k in 0..n {
        shift += (z + k as f64).ln();
    }
    let w = z + n as f64;
    let half_ln_2pi = 0.918_938_533_204_672_7;
    let mut s = (w - 0.5) * w.ln() - w + half_ln_2pi;
    let w_inv = w.inv();
    let w_inv2 = w_inv * w_inv;
    let mut p = w_inv;
    for (k, b) in BERNOULLI_2K.iter().take(STIRLING_TERMS).enumerate() {
        let kk = (k + 1) as f64;
        s += p * (b / (2.0 * kk * (2.0 * kk - 1.0)));
        p *= w_inv2;
    }
    s - shift
}

/// Imaginary part of ln Γ(z) along the same branch, summed so that the
/// large terms are combined last.
pub fn arg_gamma(z: Complex64) -> f64 {
    debug_assert!(z.re > 0.0);
    let n = shift_count(z);
    let mut shift = 0.0;
    for k in (0..n).rev() {
        shift += z.im.atan2(z.re + k as f64);
    }
    let w = z + n as f64;
    let arg_w = w.im.atan2(w.re);
    let ln_abs_w = 0.5 * (w.re * w.re + w.im * w.im).ln();
    let mut corr = Complex64::new(0.0, 0.0);
    let w_inv = w.inv();
    let w_inv2 = w_inv * w_inv;
    let mut p = w_inv;
    for (k, b) in BERNOULLI_2K.iter().take(STIRLING_TERMS).enumerate() {
        let kk = (k + 1) as f64;
        corr += p * (b / (2.0 * kk * (2.0 * kk - 1.0)));
        p *= w_inv2;
    }
    // Im[(w - 1/2) ln w - w]
    let main = (w.re - 0.5) * arg_w + w.im * ln_abs_w - w.im;
    (main - shift) + corr.im
}

/// Digamma ψ(z) for `Re z > 0`.
pub fn digamma(z: Complex64) -> Complex64 {
    let n = shift_count(z);
    let mut shift = Complex64::new(0.0, 0.0);
    for k in (0..n).rev() {
        shift += (z + k as f64).inv();
    }
    let w = z + n as f64;
    let w_inv = w.inv();
    let w_inv2 = w_inv * w_inv;
    let mut s = w.ln() - w_inv * 0.5;
    let mut p = w_inv2;
    for (k, b) in BERNOULLI_2K.iter().take(STIRLING_TERMS).enumerate() {
        let kk = (k + 1) as f64;
        s -= p * (b / (2.0 * kk));
        p *= w_inv2;
    }
    s - shift
}

/// Trigamma ψ'(z) for `Re z > 0`.
pub fn trigamma(z: Complex64) -> Complex64 {
    let n = shift_count(z);
    let mut shift = Complex64::new(0.0, 0.0);
    for k in (0..n).rev() {
        let u = (z + k as f64).inv();
        shift += u * u;
    }
    let w = z + n as f64;
    let w_inv = w.inv();
    let w_inv2 = w_inv * w_inv;
    let mut s = w_inv + w_inv2 * 0.5;
    let mut p = w_inv2 * w_inv;
    for b in BERNOULLI_2K.iter().take(STIRLING_TERMS) {
        s += p * *b;
        p *= w_inv2;
    }
    s + shift
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn real_axis_values() {
        // ln Γ(1/2) = ln √π
        let v = ln_gamma(Complex64::new(0.5, 0.0));
        assert!((v.re - 0.5 * std::f64::consts::PI.ln()).abs() < 1e-14);
        assert!(v.im.abs() < 1e-15);
        // ψ(1) = -γ
        let d = digamma(Complex64::new(1.0, 0.0));
        assert!((d.re + 0.577_215_664_901_532_9).abs() < 1e-14);
        // ψ'(1) = π²/6
        let t = trigamma(Complex64::new(1.0, 0.0));
        assert!((t.re - std::f64::consts::PI.powi(2) / 6.0).abs() < 1e-14);
    }

    #[test]
    fn arg_is_continuous_across_branch_of_principal_log() {
        // Im ln Γ(1/4 + i y) grows without bound; consecutive values must not jump.
        let mut prev = arg_gamma(Complex64::new(0.25, 0.0));
        for k in 1..4000 {
            let y = k as f64 * 0.25;
            let cur = arg_gamma(Complex64::new(0.25, y));
            assert!((cur - prev).abs() < 2.0, "jump at y = {y}");
            prev = cur;
        }
        let direct = ln_gamma(Complex64::new(0.25, 30.0)).im;
        assert!((direct - arg_gamma(Complex64::new(0.25, 30.0))).abs() < 1e-12);
    }

    #[test]
    fn polygamma_match_differences() {
        let z = Complex64::new(0.25, 3.0);
        let h = 1e-5;
        let fd = (ln_gamma(z + h) - ln_gamma(z - h)) / (2.0 * h);
        assert!((fd - digamma(z)).norm() < 1e-9);
        let fd2 = (digamma(z + h) - digamma(z - h)) / (2.0 * h);
        assert!((fd2 - trigamma(z)).norm() < 1e-9);
    }
}
