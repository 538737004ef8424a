//! Binary fixed-point reals backed by `BigInt`: value = mantissa / 2^bits.
//!
//! Used where binary64 is not enough: the `ln n` table that keeps the
//! Dirichlet-sum phases accurate, and the high-precision branch of the
//! series engine. All operations round to nearest at the operand precision.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

#[derive(Clone, PartialEq, Eq)]
pub struct Fixed {
    mant: BigInt,
    bits: u32,
}

fn shr_round(x: &BigInt, k: u32) -> BigInt {
    if k == 0 {
        return x.clone();
    }
    let half = BigInt::one() << (k - 1);
    if x.is_negative() {
        -((-x + &half) >> k)
    } else {
        (x + &half) >> k
    }
}

impl Fixed {
    pub fn zero(bits: u32) -> Self {
        Fixed { mant: BigInt::zero(), bits }
    }

    pub fn one(bits: u32) -> Self {
        Fixed { mant: BigInt::one() << bits, bits }
    }

    pub fn from_int(n: i64, bits: u32) -> Self {
        Fixed { mant: BigInt::from(n) << bits, bits }
    }

    pub fn bits(&self) -> u32 {
        self.bits
    }

    pub fn mantissa(&self) -> &BigInt {
        &self.mant
    }

    /// Exact for every finite binary64 whose exponent fits the precision.
    pub fn from_f64(x: f64, bits: u32) -> Self {
        assert!(x.is_finite(), "Fixed::from_f64 on non-finite value");
        if x == 0.0 {
            return Self::zero(bits);
        }
        let raw = x.to_bits();
        let neg = raw >> 63 == 1;
        let exp = ((raw >> 52) & 0x7ff) as i64;
        let frac = raw & ((1u64 << 52) - 1);
        let (m, e) = if exp == 0 {
            (frac, -1074)
        } else {
            (frac | (1u64 << 52), exp - 1075)
        };
        let mut mant = BigInt::from(m);
        let shift = e + bits as i64;
        mant = if shift >= 0 {
            mant << shift as u32
        } else {
            shr_round(&mant, (-shift) as u32)
        };
        if neg {
            mant = -mant;
        }
        Fixed { mant, bits }
    }

    pub fn from_rational(q: &BigRational, bits: u32) -> Self {
        let num = q.numer() << bits;
        let den = q.denom();
        let (quo, rem) = num.div_mod_floor(den);
        // round half up on the floor quotient
        let twice = rem << 1u32;
        let mant = if &twice >= den { quo + 1 } else { quo };
        Fixed { mant, bits }
    }

    pub fn to_rational(&self) -> BigRational {
        BigRational::new(self.mant.clone(), BigInt::one() << self.bits)
    }

    pub fn to_f64(&self) -> f64 {
        // Keep 64 significant bits of the mantissa, then scale.
        let nbits = self.mant.bits() as i64;
        if nbits == 0 {
            return 0.0;
        }
        let drop = (nbits - 64).max(0) as u32;
        let top = shr_round(&self.mant, drop);
        let v = top.to_f64().unwrap_or(f64::NAN);
        v * 2f64.powi(drop as i32 - self.bits as i32)
    }

    pub fn is_zero(&self) -> bool {
        self.mant.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.mant.is_negative()
    }

    pub fn abs(&self) -> Self {
        Fixed { mant: self.mant.abs(), bits: self.bits }
    }

    fn align(&self, other: &Self) -> u32 {
        assert_eq!(self.bits, other.bits, "mixed Fixed precisions");
        self.bits
    }

    pub fn add(&self, other: &Self) -> Self {
        let bits = self.align(other);
        Fixed { mant: &self.mant + &other.mant, bits }
    }

    pub fn sub(&self, other: &Self) -> Self {
        let bits = self.align(other);
        Fixed { mant: &self.mant - &other.mant, bits }
    }

    pub fn neg(&self) -> Self {
        Fixed { mant: -&self.mant, bits: self.bits }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let bits = self.align(other);
        Fixed { mant: shr_round(&(&self.mant * &other.mant), bits), bits }
    }

    pub fn mul_int(&self, k: i64) -> Self {
        Fixed { mant: &self.mant * k, bits: self.bits }
    }

    /// `None` on division by zero.
    pub fn div(&self, other: &Self) -> Option<Self> {
        let bits = self.align(other);
        if other.mant.is_zero() {
            return None;
        }
        let num: BigInt = &self.mant << (bits + 1);
        let q = num / &other.mant;
        // q carries one extra bit; round it away
        Some(Fixed { mant: shr_round(&q, 1), bits })
    }

    pub fn div_int(&self, k: i64) -> Self {
        assert!(k != 0);
        let num: BigInt = &self.mant << 1u32;
        Fixed { mant: shr_round(&(num / k), 1), bits: self.bits }
    }

    pub fn cmp_value(&self, other: &Self) -> Ordering {
        self.align(other);
        self.mant.cmp(&other.mant)
    }

    pub fn with_bits(&self, bits: u32) -> Self {
        let mant = match bits.cmp(&self.bits) {
            Ordering::Equal => self.mant.clone(),
            Ordering::Greater => &self.mant << (bits - self.bits),
            Ordering::Less => shr_round(&self.mant, self.bits - bits),
        };
        Fixed { mant, bits }
    }

    pub fn sqrt(&self) -> Option<Self> {
        if self.is_negative() {
            return None;
        }
        // sqrt(m / 2^b) = sqrt(m * 2^b) / 2^b
        let scaled: BigInt = &self.mant << self.bits;
        Some(Fixed { mant: scaled.sqrt(), bits: self.bits })
    }

    /// Positive real `k`-th root by Newton iteration; `None` for x <= 0.
    pub fn nth_root(&self, k: u32) -> Option<Self> {
        if k == 0 || self.is_negative() || self.is_zero() {
            return None;
        }
        if k == 1 {
            return Some(self.clone());
        }
        let guard = self.bits + 32;
        let x = self.with_bits(guard);
        let mut r = Fixed::from_f64(self.to_f64().powf(1.0 / k as f64), guard);
        for _ in 0..200 {
            // r <- r - (r^k - x) / (k r^{k-1})
            let mut rk1 = Fixed::one(guard);
            for _ in 0..k - 1 {
                rk1 = rk1.mul(&r);
            }
            let rk = rk1.mul(&r);
            let delta = rk.sub(&x).div(&rk1.mul_int(k as i64))?;
            r = r.sub(&delta);
            if delta.mant.bits() <= 2 {
                break;
            }
        }
        Some(r.with_bits(self.bits))
    }

    /// Natural logarithm of a positive value.
    pub fn ln(&self) -> Option<Self> {
        if self.is_negative() || self.is_zero() {
            return None;
        }
        let bits = self.bits;
        let guard = bits + 24;
        let x = self.with_bits(guard);
        // x = 2^k * y with y in [1, 2)
        let k = x.mant.bits() as i64 - 1 - guard as i64;
        let y = if k >= 0 {
            Fixed { mant: &x.mant >> k as u32, bits: guard }
        } else {
            Fixed { mant: &x.mant << (-k) as u32, bits: guard }
        };
        let one = Fixed::one(guard);
        let z = y.sub(&one).div(&y.add(&one))?;
        let ln_y = atanh_series(&z).mul_int(2);
        let ln2 = ln2(guard);
        Some(ln_y.add(&ln2.mul_int(k)).with_bits(bits))
    }
}

/// atanh(z) = z + z^3/3 + z^5/5 + ... for |z| <= 1/3.
fn atanh_series(z: &Fixed) -> Fixed {
    let z2 = z.mul(z);
    let mut pow = z.clone();
    let mut sum = z.clone();
    let mut k = 1i64;
    loop {
        pow = pow.mul(&z2);
        k += 2;
        let term = pow.div_int(k);
        if term.is_zero() {
            break;
        }
        sum = sum.add(&term);
    }
    sum
}

pub fn ln2(bits: u32) -> Fixed {
    let g = bits + 16;
    let third = Fixed::one(g).div_int(3);
    atanh_series(&third).mul_int(2).with_bits(bits)
}

/// π by Machin's formula.
pub fn pi(bits: u32) -> Fixed {
    let g = bits + 16;
    let atan_inv = |n: i64| {
        let x = Fixed::one(g).div_int(n);
        let x2 = x.mul(&x);
        let mut pow = x.clone();
        let mut sum = x.clone();
        let mut k = 1i64;
        let mut sign = 1i64;
        loop {
            pow = pow.mul(&x2);
            k += 2;
            sign = -sign;
            let term = pow.div_int(k);
            if term.is_zero() {
                break;
            }
            sum = if sign > 0 { sum.add(&term) } else { sum.sub(&term) };
        }
        sum
    };
    atan_inv(5).mul_int(16).sub(&atan_inv(239).mul_int(4)).with_bits(bits)
}

/// `ln n` for n = 1..=count, each split as (hi, lo) with hi + lo
/// accurate to about 2^-100. Built by the telescoping recurrence
/// ln n = ln(n-1) + 2 atanh(1/(2n-1)).
pub fn ln_table(count: usize) -> Vec<(f64, f64)> {
    const BITS: u32 = 160;
    let mut out = Vec::with_capacity(count);
    let mut acc = Fixed::zero(BITS);
    for n in 1..=count {
        if n > 1 {
            let z = Fixed::one(BITS).div_int(2 * n as i64 - 1);
            acc = acc.add(&atanh_series(&z).mul_int(2));
        }
        let hi = acc.to_f64();
        let lo = acc.sub(&Fixed::from_f64(hi, BITS)).to_f64();
        out.push((hi, lo));
    }
    out
}

impl fmt::Debug for Fixed {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Fixed({:e}; {} bits)", self.to_f64(), self.bits)
    }
}

impl fmt::Display for Fixed {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_f64())
    }
}

impl Fixed {
    pub fn sign(&self) -> Sign {
        self.mant.sign()
    }

    /// Decimal expansion rounded to `digits` places after the point.
    pub fn to_decimal(&self, digits: usize) -> String {
        let scaled = &self.mant * num_traits::Pow::pow(&BigInt::from(10), digits);
        let q = shr_round(&scaled, self.bits);
        let neg = q.is_negative();
        let s = q.abs().to_string();
        let s = if s.len() <= digits { format!("{}{s}", "0".repeat(digits + 1 - s.len())) } else { s };
        let (int, frac) = s.split_at(s.len() - digits);
        let body = if digits == 0 { int.to_string() } else { format!("{int}.{frac}") };
        if neg {
            format!("-{body}")
        } else {
            body
        }
    }
}
