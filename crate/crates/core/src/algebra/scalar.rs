//! Coefficient backends: exact cyclotomic numbers or complex doubles.

use std::fmt::Debug;
use std::sync::atomic::{AtomicU64, Ordering};

use num_complex::Complex64;
use num_rational::Rational64;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use super::cyclotomic::CycNumber;
use crate::phase::Phase;

pub const DEFAULT_TOLERANCE: f64 = 1e-9;

static TOLERANCE_BITS: AtomicU64 = AtomicU64::new(0x3E11_2E0B_E826_D695); // 1e-9

/// Sets the absolute tolerance used by the float backend. Non-positive values are ignored.
pub fn set_float_tolerance(tol: f64) {
    if tol > 0.0 && tol.is_finite() {
        TOLERANCE_BITS.store(tol.to_bits(), Ordering::Relaxed);
    }
}

pub fn float_tolerance() -> f64 {
    f64::from_bits(TOLERANCE_BITS.load(Ordering::Relaxed))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Backend {
    Exact,
    Float,
}

pub trait Scalar: Clone + Debug + Send + Sync + 'static {
    const BACKEND: Backend;

    fn zero() -> Self;
    fn one() -> Self;
    fn from_phase(p: Phase) -> Self;
    fn from_ratio(r: Rational64) -> Self;
    fn from_cyc(c: &CycNumber) -> Self;
    /// Only the float backend accepts arbitrary complex values.
    fn from_c64(z: Complex64) -> Option<Self>;

    fn plus(&self, o: &Self) -> Self;
    fn minus(&self, o: &Self) -> Self;
    fn times(&self, o: &Self) -> Self;
    fn negated(&self) -> Self;
    fn conj(&self) -> Self;
    fn mul_phase(&self, p: Phase) -> Self;

    /// Exact for the cyclotomic backend, within [`float_tolerance`] for floats.
    fn is_zero(&self) -> bool;
    fn to_c64(&self) -> Complex64;
    /// `Some(p)` when the value is the root of unity `exp(2πi p)`.
    fn to_phase(&self) -> Option<Phase>;
    /// `Some(k)` when the value is the integer `k`.
    fn to_integer(&self) -> Option<i64>;

    fn equals(&self, o: &Self) -> bool {
        self.minus(o).is_zero()
    }
}

impl Scalar for CycNumber {
    const BACKEND: Backend = Backend::Exact;

    fn zero() -> Self {
        CycNumber::zero()
    }
    fn one() -> Self {
        CycNumber::one()
    }
    fn from_phase(p: Phase) -> Self {
        CycNumber::root(p)
    }
    fn from_ratio(r: Rational64) -> Self {
        CycNumber::rational(r)
    }
    fn from_cyc(c: &CycNumber) -> Self {
        c.clone()
    }
    fn from_c64(_: Complex64) -> Option<Self> {
        None
    }
    fn plus(&self, o: &Self) -> Self {
        self.add(o)
    }
    fn minus(&self, o: &Self) -> Self {
        self.sub(o)
    }
    fn times(&self, o: &Self) -> Self {
        self.mul(o)
    }
    fn negated(&self) -> Self {
        self.neg()
    }
    fn conj(&self) -> Self {
        CycNumber::conj(self)
    }
    fn mul_phase(&self, p: Phase) -> Self {
        CycNumber::mul_phase(self, p)
    }
    fn is_zero(&self) -> bool {
        CycNumber::is_zero(self)
    }
    fn to_c64(&self) -> Complex64 {
        CycNumber::to_c64(self)
    }
    fn to_phase(&self) -> Option<Phase> {
        self.as_root_of_unity()
    }
    fn to_integer(&self) -> Option<i64> {
        let r = self.as_rational()?;
        r.is_integer().then(|| r.to_integer())
    }
}

impl Scalar for Complex64 {
    const BACKEND: Backend = Backend::Float;

    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn one() -> Self {
        Complex64::new(1.0, 0.0)
    }
    fn from_phase(p: Phase) -> Self {
        p.to_complex()
    }
    fn from_ratio(r: Rational64) -> Self {
        Complex64::new(r.to_f64().unwrap_or(f64::NAN), 0.0)
    }
    fn from_cyc(c: &CycNumber) -> Self {
        c.to_c64()
    }
    fn from_c64(z: Complex64) -> Option<Self> {
        Some(z)
    }
    fn plus(&self, o: &Self) -> Self {
        self + o
    }
    fn minus(&self, o: &Self) -> Self {
        self - o
    }
    fn times(&self, o: &Self) -> Self {
        self * o
    }
    fn negated(&self) -> Self {
        -self
    }
    fn conj(&self) -> Self {
        Complex64::conj(self)
    }
    fn mul_phase(&self, p: Phase) -> Self {
        if p.is_zero() {
            *self
        } else {
            self * p.to_complex()
        }
    }
    fn is_zero(&self) -> bool {
        self.norm() <= float_tolerance()
    }
    fn to_c64(&self) -> Complex64 {
        *self
    }
    fn to_phase(&self) -> Option<Phase> {
        if (self.norm() - 1.0).abs() > float_tolerance() {
            return None;
        }
        let p = Phase::approximate(self.arg() / std::f64::consts::TAU, super::cyclotomic::MAX_CONDUCTOR);
        ((p.to_complex() - self).norm() <= float_tolerance()).then_some(p)
    }
    fn to_integer(&self) -> Option<i64> {
        let k = self.re.round();
        (Complex64::new(k, 0.0) - self).norm().le(&float_tolerance()).then_some(k as i64)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_tolerance_bits() {
        assert_eq!(f64::from_bits(0x3E11_2E0B_E826_D695), DEFAULT_TOLERANCE);
    }

    fn roundtrip<S: Scalar>() {
        let p = Phase::new(5, 12);
        let x = S::from_phase(p);
        assert_eq!(x.to_phase(), Some(p));
        assert!(x.times(&x.conj()).equals(&S::one()));
        assert_eq!(S::from_ratio(Rational64::new(3, 1)).to_integer(), Some(3));
        assert!(S::from_phase(Phase::HALF).plus(&S::one()).is_zero());
        assert_eq!(S::from_ratio(Rational64::new(1, 2)).to_phase(), None);
    }

    #[test]
    fn both_backends_behave() {
        roundtrip::<CycNumber>();
        roundtrip::<Complex64>();
    }
}
