//! Truncated power series over a [`Scalar`] ring.
//!
//! A series stores coefficients of degrees `0..=trunc_order`; terms beyond
//! the truncation order are unknown, not zero. Every operation tracks how
//! many output terms are determined by the known input terms, so callers
//! see [`Error::TruncationExhausted`] instead of silently padded results.

use std::path::Path;

use num_complex::Complex64;
use num_rational::BigRational;

use crate::rational::{parse_rational, recip, GaussRational};
use crate::scalar::Scalar;
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
pub struct Series<S> {
    coeffs: Vec<S>,
}

/// Series with exact Gaussian-rational coefficients, as read from input.
pub type PowerSeries = Series<GaussRational>;

impl<S: Scalar> Series<S> {
    /// `coeffs[k]` is the degree-k coefficient; the truncation order is
    /// `coeffs.len() - 1`. Panics on an empty vector.
    pub fn new(coeffs: Vec<S>) -> Self {
        assert!(!coeffs.is_empty(), "a series needs at least one known coefficient");
        Series { coeffs }
    }

    pub fn coeffs(&self) -> &[S] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> &S {
        &self.coeffs[k]
    }

    pub fn set_coeff(&mut self, k: usize, c: S) {
        self.coeffs[k] = c;
    }

    pub fn trunc_order(&self) -> usize {
        self.coeffs.len() - 1
    }

    fn zero_s(&self) -> S {
        self.coeffs[0].zero_like()
    }

    fn zeros(&self, order: usize) -> Vec<S> {
        vec![self.zero_s(); order + 1]
    }

    /// Index of the first nonzero known coefficient.
    pub fn valuation(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    fn valuation_or_beyond(&self) -> usize {
        self.valuation().unwrap_or(self.coeffs.len())
    }

    /// Keeps degrees `0..=order`; fails if fewer terms are known.
    pub fn truncate(&self, order: usize) -> Result<Self> {
        if order > self.trunc_order() {
            return Err(Error::TruncationExhausted { needed: order, available: self.trunc_order() });
        }
        Ok(Series { coeffs: self.coeffs[..=order].to_vec() })
    }

    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T) -> Series<T> {
        Series { coeffs: self.coeffs.iter().map(f).collect() }
    }

    pub fn add(&self, o: &Self) -> Self {
        let n = self.trunc_order().min(o.trunc_order());
        Series { coeffs: (0..=n).map(|k| self.coeffs[k].add(&o.coeffs[k])).collect() }
    }

    pub fn sub(&self, o: &Self) -> Self {
        let n = self.trunc_order().min(o.trunc_order());
        Series { coeffs: (0..=n).map(|k| self.coeffs[k].sub(&o.coeffs[k])).collect() }
    }

    pub fn scale(&self, c: &S) -> Self {
        self.map(|x| x.mul(c))
    }

    pub fn scale_rational(&self, q: &BigRational) -> Self {
        self.map(|x| x.scale(q))
    }

    /// Product; known to `min(N_a + v_b, N_b + v_a)`.
    pub fn mul(&self, o: &Self) -> Self {
        let n = (self.trunc_order() + o.valuation_or_beyond()).min(o.trunc_order() + self.valuation_or_beyond());
        self.mul_to(o, n)
    }

    /// Product truncated at `order` (the caller guarantees validity).
    fn mul_to(&self, o: &Self, order: usize) -> Self {
        let mut out = self.zeros(order);
        for (i, a) in self.coeffs.iter().enumerate().take(order + 1) {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate().take(order + 1 - i) {
                if !b.is_zero() {
                    out[i + j] = out[i + j].add(&a.mul(b));
                }
            }
        }
        Series { coeffs: out }
    }

    /// Substitutes `z^k` for `z`; known to degree `(N+1)k - 1`.
    pub fn substitute_power(&self, k: usize) -> Self {
        assert!(k >= 1);
        let order = (self.trunc_order() + 1) * k - 1;
        let mut out = self.zeros(order);
        for (i, c) in self.coeffs.iter().enumerate() {
            out[i * k] = c.clone();
        }
        Series { coeffs: out }
    }

    /// Substitutes `-z` for `z`.
    pub fn reflect(&self) -> Self {
        Series {
            coeffs: self.coeffs.iter().enumerate().map(|(k, c)| if k % 2 == 1 { c.neg() } else { c.clone() }).collect(),
        }
    }

    /// Divides by `z^l`; the first `l` coefficients must vanish.
    pub fn shift_down(&self, l: usize) -> Result<Self> {
        if self.valuation_or_beyond() < l {
            return Err(Error::InvalidArgument(format!("series is not divisible by z^{l}")));
        }
        if l > self.trunc_order() {
            return Err(Error::TruncationExhausted { needed: l, available: self.trunc_order() });
        }
        Ok(Series { coeffs: self.coeffs[l..].to_vec() })
    }

    /// Multiplies by `z`.
    pub fn shift_up(&self) -> Self {
        let mut coeffs = Vec::with_capacity(self.coeffs.len() + 1);
        coeffs.push(self.zero_s());
        coeffs.extend(self.coeffs.iter().cloned());
        Series { coeffs }
    }

    /// Formal derivative; known to `N - 1` (a constant gives the zero series).
    pub fn derivative(&self) -> Self {
        if self.trunc_order() == 0 {
            return Series { coeffs: vec![self.zero_s()] };
        }
        Series {
            coeffs: (1..self.coeffs.len())
                .map(|k| self.coeffs[k].scale(&BigRational::from_integer((k as i64).into())))
                .collect(),
        }
    }

    /// Multiplicative inverse of a series with nonzero constant term.
    pub fn recip(&self) -> Result<Self> {
        let a0_inv = self.coeffs[0].inv().ok_or(Error::NotInvertible)?;
        let n = self.trunc_order();
        let mut out: Vec<S> = Vec::with_capacity(n + 1);
        out.push(a0_inv.clone());
        for k in 1..=n {
            let mut acc = self.zero_s();
            for j in 1..=k {
                if !self.coeffs[j].is_zero() {
                    acc = acc.add(&self.coeffs[j].mul(&out[k - j]));
                }
            }
            out.push(acc.mul(&a0_inv).neg());
        }
        Ok(Series { coeffs: out })
    }

    /// Composition `self ∘ g` for `g(0) = 0`; known to
    /// `min((N_f + 1)·v_g - 1, N_g)`.
    pub fn compose(&self, g: &Self) -> Result<Self> {
        if !g.coeffs[0].is_zero() {
            return Err(Error::NonzeroConstantTerm);
        }
        let v = g.valuation_or_beyond().max(1);
        let order = ((self.trunc_order() + 1) * v - 1).min(g.trunc_order());
        let g = Series { coeffs: g.coeffs[..=order].to_vec() };
        // Horner: (((f_N) g + f_{N-1}) g + ...) + f_0
        let mut acc = Series { coeffs: self.zeros(order) };
        for c in self.coeffs.iter().rev() {
            acc = acc.mul_to(&g, order);
            acc.coeffs[0] = acc.coeffs[0].add(c);
        }
        Ok(acc)
    }

    /// Compositional inverse R with `self(R(z)) = z`, by Lagrange inversion:
    /// `[z^k] R = (1/k) [w^{k-1}] (w / S(w))^k`.
    pub fn reversion(&self) -> Result<Self> {
        if !self.coeffs[0].is_zero() {
            return Err(Error::NonzeroConstantTerm);
        }
        let n = self.trunc_order();
        if n == 0 || self.coeffs[1].is_zero() {
            return Err(Error::NotInvertible);
        }
        let p = self.shift_down(1)?.recip()?;
        let mut out = self.zeros(n);
        let mut pk = Series { coeffs: vec![self.coeffs[0].one_like()] };
        for k in 1..=n {
            pk = pk.mul_to(&p, n - 1);
            out[k] = pk.coeffs[k - 1].scale(&recip(k as i64));
        }
        Ok(Series { coeffs: out })
    }

    /// `(1 + A)^alpha` for `A(0) = 0` and rational `alpha`, by the recurrence
    /// `k b_k = Σ_{j=1}^{k} (alpha·j - (k - j)) a_j b_{k-j}`.
    pub fn one_plus_pow(&self, alpha: &BigRational) -> Result<Self> {
        if !self.coeffs[0].is_zero() {
            return Err(Error::NonzeroConstantTerm);
        }
        let n = self.trunc_order();
        let mut out: Vec<S> = Vec::with_capacity(n + 1);
        out.push(self.coeffs[0].one_like());
        for k in 1..=n {
            let mut acc = self.zero_s();
            for j in 1..=k {
                if self.coeffs[j].is_zero() {
                    continue;
                }
                let w = alpha * BigRational::from_integer((j as i64).into())
                    - BigRational::from_integer(((k - j) as i64).into());
                acc = acc.add(&self.coeffs[j].mul(&out[k - j]).scale(&w));
            }
            out.push(acc.scale(&recip(k as i64)));
        }
        Ok(Series { coeffs: out })
    }

    /// `log(1 + A)` for `A(0) = 0`.
    pub fn log_one_plus(&self) -> Result<Self> {
        if !self.coeffs[0].is_zero() {
            return Err(Error::NonzeroConstantTerm);
        }
        let mut one_plus = self.clone();
        one_plus.coeffs[0] = self.coeffs[0].one_like();
        let d = self.derivative().mul(&one_plus.recip()?);
        Ok(d.integral())
    }

    /// `exp(A)` for `A(0) = 0`, from `E' = A'E`.
    pub fn exp(&self) -> Result<Self> {
        if !self.coeffs[0].is_zero() {
            return Err(Error::NonzeroConstantTerm);
        }
        let n = self.trunc_order();
        let mut out: Vec<S> = Vec::with_capacity(n + 1);
        out.push(self.coeffs[0].one_like());
        for k in 1..=n {
            let mut acc = self.zero_s();
            for j in 1..=k {
                if !self.coeffs[j].is_zero() {
                    acc = acc.add(&self.coeffs[j].mul(&out[k - j]).scale(&BigRational::from_integer((j as i64).into())));
                }
            }
            out.push(acc.scale(&recip(k as i64)));
        }
        Ok(Series { coeffs: out })
    }

    /// Antiderivative vanishing at 0; known to `N + 1`.
    pub fn integral(&self) -> Self {
        let mut coeffs = Vec::with_capacity(self.coeffs.len() + 1);
        coeffs.push(self.zero_s());
        for (k, c) in self.coeffs.iter().enumerate() {
            coeffs.push(c.scale(&recip(k as i64 + 1)));
        }
        Series { coeffs }
    }

    /// `self^k` for a positive integer `k`.
    pub fn powi(&self, k: usize) -> Self {
        if k == 0 {
            // The constant 1 is exact, so it is known as far as self is.
            let mut coeffs = self.zeros(self.trunc_order());
            coeffs[0] = self.coeffs[0].one_like();
            return Series { coeffs };
        }
        let mut out = self.clone();
        for _ in 1..k {
            out = out.mul(self);
        }
        out
    }

    /// Binary64 evaluation of the known polynomial part at `z`.
    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.coeffs.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, c| {
            let (re, im) = c.to_f64_pair();
            acc * z + Complex64::new(re, im)
        })
    }

    /// Binary64 evaluation of the derivative at `z`.
    pub fn eval_derivative(&self, z: Complex64) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for (k, c) in self.coeffs.iter().enumerate().skip(1).rev() {
            let (re, im) = c.to_f64_pair();
            acc = acc * z + Complex64::new(re, im) * k as f64;
        }
        acc
    }

    pub fn to_c64(&self) -> Vec<Complex64> {
        self.coeffs
            .iter()
            .map(|c| {
                let (re, im) = c.to_f64_pair();
                Complex64::new(re, im)
            })
            .collect()
    }
}

impl PowerSeries {
    /// Reads the plain-text format: one coefficient per line (degree = line
    /// index among non-comment lines), each `re` or `re im` with `re`, `im`
    /// rational (`p/q`) or decimal; `#` starts a comment.
    pub fn parse(text: &str) -> Result<Self> {
        let mut coeffs = Vec::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let mut parts = line.split_whitespace();
            let ctx = |e: Error| Error::Parse(format!("line {}: {e}", lineno + 1));
            let re = parse_rational(parts.next().unwrap_or_default()).map_err(ctx)?;
            let im = match parts.next() {
                Some(p) => parse_rational(p).map_err(ctx)?,
                None => BigRational::from_integer(0.into()),
            };
            if parts.next().is_some() {
                return Err(Error::Parse(format!("line {}: expected `re` or `re im`", lineno + 1)));
            }
            coeffs.push(GaussRational::new(re, im));
        }
        if coeffs.is_empty() {
            return Err(Error::Parse("series file has no coefficients".into()));
        }
        Ok(Series::new(coeffs))
    }

    pub fn read(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn to_text(&self) -> String {
        self.coeffs.iter().map(|c| format!("{c}\n")).collect()
    }

    /// Real-coefficient series from integers (convenience for tests and
    /// examples).
    pub fn from_ints(coeffs: &[i64]) -> Self {
        Series::new(coeffs.iter().map(|&c| GaussRational::from_int(c)).collect())
    }

    /// True when every known coefficient has zero imaginary part.
    pub fn is_real(&self) -> bool {
        self.coeffs.iter().all(GaussRational::is_real)
    }
}
