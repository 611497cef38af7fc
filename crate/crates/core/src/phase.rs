//! Exact points of the circle group, stored as reduced fractions in `[0, 1)`.
//!
//! A phase `p/q` stands for `exp(2πi·p/q)`. The group law is written
//! additively, so multiplying unitaries adds their phases.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Neg, Sub};
use std::str::FromStr;

use num_complex::Complex64;
use num_integer::Integer;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::Error;

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct Phase {
    num: u64,
    den: u64,
}

impl Phase {
    pub const ZERO: Phase = Phase { num: 0, den: 1 };
    pub const HALF: Phase = Phase { num: 1, den: 2 };

    /// Builds `num/den mod 1`. Panics on a zero denominator.
    pub fn new(num: i64, den: i64) -> Phase {
        assert!(den != 0, "phase with zero denominator");
        let (num, den) = if den < 0 { (-(num as i128), -(den as i128)) } else { (num as i128, den as i128) };
        let r = num.rem_euclid(den);
        let g = r.gcd(&den);
        Phase { num: (r / g) as u64, den: (den / g) as u64 }
    }

    pub fn numer(&self) -> u64 {
        self.num
    }

    pub fn denom(&self) -> u64 {
        self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num == 0
    }

    /// `k·self` in the additive notation, i.e. the k-th power of the root of unity.
    pub fn scale(self, k: i64) -> Phase {
        let n = (self.num as i128 * k as i128).rem_euclid(self.den as i128);
        Phase::reduced(n as u64, self.den)
    }

    pub fn to_f64(self) -> f64 {
        self.num as f64 / self.den as f64
    }

    pub fn to_complex(self) -> Complex64 {
        Complex64::from_polar(1.0, std::f64::consts::TAU * self.to_f64())
    }

    /// Nearest phase with denominator at most `max_den` to the angle `turns` (in units of 2π).
    pub fn approximate(turns: f64, max_den: u64) -> Phase {
        let x = turns.rem_euclid(1.0);
        // Stern-Brocot style search through continued fraction convergents.
        let (mut p0, mut q0, mut p1, mut q1) = (0i64, 1i64, 1i64, 0i64);
        let mut v = x;
        let mut best = Phase::ZERO;
        let mut best_err = x.min(1.0 - x);
        for _ in 0..64 {
            let a = v.floor();
            let a_i = a as i64;
            let p2 = a_i * p1 + p0;
            let q2 = a_i * q1 + q0;
            if q2 as u64 > max_den || q2 <= 0 {
                break;
            }
            let cand = Phase::new(p2, q2);
            let err = (cand.to_f64() - x).abs().min(1.0 - (cand.to_f64() - x).abs());
            if err < best_err {
                best = cand;
                best_err = err;
            }
            let frac = v - a;
            if frac < 1e-15 {
                break;
            }
            v = 1.0 / frac;
            p0 = p1;
            q0 = q1;
            p1 = p2;
            q1 = q2;
        }
        best
    }

    fn reduced(num: u64, den: u64) -> Phase {
        if num == 0 {
            return Phase::ZERO;
        }
        let g = num.gcd(&den);
        Phase { num: num / g, den: den / g }
    }
}

impl Default for Phase {
    fn default() -> Self {
        Phase::ZERO
    }
}

impl Add for Phase {
    type Output = Phase;
    fn add(self, rhs: Phase) -> Phase {
        if self.den == rhs.den {
            let n = (self.num + rhs.num) % self.den;
            return Phase::reduced(n, self.den);
        }
        let l = self.den.lcm(&rhs.den);
        let n = (self.num as u128 * (l / self.den) as u128 + rhs.num as u128 * (l / rhs.den) as u128) % l as u128;
        Phase::reduced(n as u64, l)
    }
}

impl AddAssign for Phase {
    fn add_assign(&mut self, rhs: Phase) {
        *self = *self + rhs;
    }
}

impl Neg for Phase {
    type Output = Phase;
    fn neg(self) -> Phase {
        if self.num == 0 {
            self
        } else {
            Phase { num: self.den - self.num, den: self.den }
        }
    }
}

impl Sub for Phase {
    type Output = Phase;
    fn sub(self, rhs: Phase) -> Phase {
        self + (-rhs)
    }
}

impl std::iter::Sum for Phase {
    fn sum<I: Iterator<Item = Phase>>(iter: I) -> Phase {
        iter.fold(Phase::ZERO, |a, b| a + b)
    }
}

impl PartialOrd for Phase {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Phase {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.num as u128 * other.den as u128)
            .cmp(&(other.num as u128 * self.den as u128))
            .then(self.den.cmp(&other.den))
    }
}

impl fmt::Display for Phase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

impl FromStr for Phase {
    type Err = Error;

    fn from_str(s: &str) -> Result<Phase, Error> {
        let bad = || Error::Input(format!("malformed phase {s:?}, expected \"p/q\""));
        let s = s.trim();
        match s.split_once('/') {
            Some((p, q)) => {
                let p: i64 = p.trim().parse().map_err(|_| bad())?;
                let q: i64 = q.trim().parse().map_err(|_| bad())?;
                if q == 0 {
                    return Err(bad());
                }
                Ok(Phase::new(p, q))
            }
            None => {
                let p: i64 = s.parse().map_err(|_| bad())?;
                Ok(Phase::new(p, 1))
            }
        }
    }
}

impl Serialize for Phase {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Phase {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Phase, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}
