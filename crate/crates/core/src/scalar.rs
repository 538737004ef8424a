//! Coefficient rings for the series engine.
//!
//! [`GaussRational`] gives exact answers; [`FixedComplex`] carries a
//! binary fixed-point approximation when an irrational constant (an
//! ℓ-th root) enters the computation.

use std::fmt::Debug;

use num_rational::BigRational;

use crate::fixed::Fixed;
use crate::rational::GaussRational;

pub trait Scalar: Clone + Debug + Send + Sync {
    /// True when arithmetic in this ring is exact.
    const EXACT: bool;

    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    /// The real rational `q` in the same ring (and precision) as `self`.
    fn rational_like(&self, q: &BigRational) -> Self;
    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn neg(&self) -> Self;
    fn scale(&self, q: &BigRational) -> Self;
    fn inv(&self) -> Option<Self>;
    fn conj(&self) -> Self;
    fn is_zero(&self) -> bool;
    /// (re, im) rounded to binary64.
    fn to_f64_pair(&self) -> (f64, f64);

    fn abs_f64(&self) -> f64 {
        let (re, im) = self.to_f64_pair();
        re.hypot(im)
    }
}

impl Scalar for GaussRational {
    const EXACT: bool = true;

    fn zero_like(&self) -> Self {
        GaussRational::zero()
    }
    fn one_like(&self) -> Self {
        GaussRational::one()
    }
    fn rational_like(&self, q: &BigRational) -> Self {
        GaussRational::real(q.clone())
    }
    fn add(&self, o: &Self) -> Self {
        GaussRational::add(self, o)
    }
    fn sub(&self, o: &Self) -> Self {
        GaussRational::sub(self, o)
    }
    fn mul(&self, o: &Self) -> Self {
        GaussRational::mul(self, o)
    }
    fn neg(&self) -> Self {
        GaussRational::neg(self)
    }
    fn scale(&self, q: &BigRational) -> Self {
        GaussRational::scale(self, q)
    }
    fn inv(&self) -> Option<Self> {
        GaussRational::inv(self)
    }
    fn conj(&self) -> Self {
        GaussRational::conj(self)
    }
    fn is_zero(&self) -> bool {
        GaussRational::is_zero(self)
    }
    fn to_f64_pair(&self) -> (f64, f64) {
        GaussRational::to_f64_pair(self)
    }
}

/// Complex number with [`Fixed`] parts at a common precision.
#[derive(Clone, Debug, PartialEq)]
pub struct FixedComplex {
    pub re: Fixed,
    pub im: Fixed,
}

impl FixedComplex {
    pub fn new(re: Fixed, im: Fixed) -> Self {
        FixedComplex { re, im }
    }

    pub fn from_gauss(z: &GaussRational, bits: u32) -> Self {
        FixedComplex { re: Fixed::from_rational(&z.re, bits), im: Fixed::from_rational(&z.im, bits) }
    }

    pub fn bits(&self) -> u32 {
        self.re.bits()
    }
}

impl Scalar for FixedComplex {
    const EXACT: bool = false;

    fn zero_like(&self) -> Self {
        let b = self.bits();
        FixedComplex { re: Fixed::zero(b), im: Fixed::zero(b) }
    }
    fn one_like(&self) -> Self {
        let b = self.bits();
        FixedComplex { re: Fixed::one(b), im: Fixed::zero(b) }
    }
    fn rational_like(&self, q: &BigRational) -> Self {
        let b = self.bits();
        FixedComplex { re: Fixed::from_rational(q, b), im: Fixed::zero(b) }
    }
    fn add(&self, o: &Self) -> Self {
        FixedComplex { re: self.re.add(&o.re), im: self.im.add(&o.im) }
    }
    fn sub(&self, o: &Self) -> Self {
        FixedComplex { re: self.re.sub(&o.re), im: self.im.sub(&o.im) }
    }
    fn mul(&self, o: &Self) -> Self {
        FixedComplex {
            re: self.re.mul(&o.re).sub(&self.im.mul(&o.im)),
            im: self.re.mul(&o.im).add(&self.im.mul(&o.re)),
        }
    }
    fn neg(&self) -> Self {
        FixedComplex { re: self.re.neg(), im: self.im.neg() }
    }
    fn scale(&self, q: &BigRational) -> Self {
        let f = Fixed::from_rational(q, self.bits());
        FixedComplex { re: self.re.mul(&f), im: self.im.mul(&f) }
    }
    fn inv(&self) -> Option<Self> {
        let d = self.re.mul(&self.re).add(&self.im.mul(&self.im));
        Some(FixedComplex { re: self.re.div(&d)?, im: self.im.neg().div(&d)? })
    }
    fn conj(&self) -> Self {
        FixedComplex { re: self.re.clone(), im: self.im.neg() }
    }
    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }
    fn to_f64_pair(&self) -> (f64, f64) {
        (self.re.to_f64(), self.im.to_f64())
    }
}
