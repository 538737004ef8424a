//! Scalar root finding: bracketing scan, bisection, Illinois and Newton.

/// Roots of a sign-changing function on [lo, hi] via bisection.
/// Returns `None` if f(lo) and f(hi) share a sign.
pub fn bisect<F: Fn(f64) -> f64>(f: F, mut lo: f64, mut hi: f64, tol: f64, max_iter: usize) -> Option<f64> {
    let mut flo = f(lo);
    let fhi = f(hi);
    if flo == 0.0 {
        return Some(lo);
    }
    if fhi == 0.0 {
        return Some(hi);
    }
    if flo.signum() == fhi.signum() {
        return None;
    }
    for _ in 0..max_iter {
        let mid = 0.5 * (lo + hi);
        if hi - lo <= tol || mid <= lo || mid >= hi {
            break;
        }
        let fm = f(mid);
        if fm == 0.0 {
            return Some(mid);
        }
        if fm.signum() == flo.signum() {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    Some(0.5 * (lo + hi))
}

/// Illinois-modified regula falsi; keeps the bracket, converges superlinearly.
pub fn illinois<F: Fn(f64) -> f64>(f: F, mut a: f64, mut b: f64, tol: f64, max_iter: usize) -> Option<f64> {
    let mut fa = f(a);
    let mut fb = f(b);
    if fa == 0.0 {
        return Some(a);
    }
    if fb == 0.0 {
        return Some(b);
    }
    if fa.signum() == fb.signum() {
        return None;
    }
    let mut side = 0i8;
    for _ in 0..max_iter {
        let c = (a * fb - b * fa) / (fb - fa);
        let c = if c.is_finite() && c > a.min(b) && c < a.max(b) { c } else { 0.5 * (a + b) };
        let fc = f(c);
        if fc == 0.0 || (b - a).abs() <= tol {
            return Some(c);
        }
        if fc.signum() == fb.signum() {
            b = c;
            fb = fc;
            if side == -1 {
                fa *= 0.5;
            }
            side = -1;
        } else {
            a = c;
            fa = fc;
            if side == 1 {
                fb *= 0.5;
            }
            side = 1;
        }
        if (b - a).abs() <= tol {
            return Some(0.5 * (a + b));
        }
    }
    Some(0.5 * (a + b))
}

/// Plain Newton; `None` on a vanishing derivative or non-convergence.
pub fn newton<F, D>(f: F, df: D, mut x: f64, tol: f64, max_iter: usize) -> Option<f64>
where
    F: Fn(f64) -> f64,
    D: Fn(f64) -> f64,
{
    for _ in 0..max_iter {
        let d = df(x);
        if d == 0.0 || !d.is_finite() {
            return None;
        }
        let step = f(x) / d;
        x -= step;
        if !x.is_finite() {
            return None;
        }
        if step.abs() <= tol * x.abs().max(1.0) {
            return Some(x);
        }
    }
    None
}

/// Grid intervals [t_i, t_{i+1}] on which `values` change sign.
pub fn sign_change_brackets(grid: &[f64], values: &[f64]) -> Vec<(f64, f64)> {
    grid.windows(2)
        .zip(values.windows(2))
        .filter(|(_, v)| v[0] != 0.0 && v[0].signum() != v[1].signum())
        .map(|(t, _)| (t[0], t[1]))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn methods_agree_on_cosine_root() {
        let r1 = bisect(f64::cos, 1.0, 2.0, 1e-15, 200).unwrap();
        let r2 = illinois(f64::cos, 1.0, 2.0, 1e-15, 200).unwrap();
        let r3 = newton(f64::cos, |x| -x.sin(), 1.4, 1e-15, 50).unwrap();
        let half_pi = std::f64::consts::FRAC_PI_2;
        for r in [r1, r2, r3] {
            assert!((r - half_pi).abs() < 1e-14);
        }
    }

    #[test]
    fn no_bracket_no_root() {
        assert!(bisect(|x| x * x + 1.0, -1.0, 1.0, 1e-12, 100).is_none());
        assert!(newton(|_| 1.0, |_| 0.0, 0.0, 1e-12, 10).is_none());
    }

    #[test]
    fn brackets_found_on_grid() {
        let grid: Vec<f64> = (0..=100).map(|i| i as f64 * 0.1).collect();
        let vals: Vec<f64> = grid.iter().map(|t| t.sin()).collect();
        let b = sign_change_brackets(&grid, &vals);
        assert_eq!(b.len(), 3); // π, 2π, 3π
    }
}
