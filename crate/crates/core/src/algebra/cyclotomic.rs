//! Exact elements of cyclotomic fields as sparse ℚ-combinations of roots of unity.
//!
//! A number is `Σ r_i·ζ^{p_i}` with `p_i` a [`Phase`]. The representation is
//! not canonical (e.g. `1 + ζ_2` is zero), so zero testing reduces the sum
//! modulo the cyclotomic polynomial `Φ_N`, with `N` the lcm of the phase
//! denominators.

use std::collections::HashMap;
use std::fmt;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::{Arc, Mutex, OnceLock};

use num_complex::Complex64;
use num_integer::Integer;
use num_rational::Rational64;
use num_traits::{One, Signed, ToPrimitive, Zero};
use smallvec::{smallvec, SmallVec};

use crate::phase::Phase;

/// Largest conductor handled by exact reduction: 2⁴·3²·5·7.
pub const MAX_CONDUCTOR: u64 = 5040;

static FLOAT_FALLBACKS: AtomicU64 = AtomicU64::new(0);

/// Number of zero tests that exceeded [`MAX_CONDUCTOR`] and were decided in floating point.
pub fn float_fallback_count() -> u64 {
    FLOAT_FALLBACKS.load(Ordering::Relaxed)
}

type Terms = SmallVec<[(Phase, Rational64); 2]>;

#[derive(Clone, Default)]
pub struct CycNumber {
    /// Sorted by phase, distinct phases, nonzero weights.
    terms: Terms,
}

impl fmt::Debug for CycNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for CycNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (p, r)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "{r}·ζ[{p}]")?;
        }
        Ok(())
    }
}

impl CycNumber {
    pub fn zero() -> CycNumber {
        CycNumber { terms: SmallVec::new() }
    }

    pub fn one() -> CycNumber {
        CycNumber::root(Phase::ZERO)
    }

    pub fn root(p: Phase) -> CycNumber {
        CycNumber { terms: smallvec![(p, Rational64::one())] }
    }

    pub fn rational(r: Rational64) -> CycNumber {
        CycNumber::from_terms([(Phase::ZERO, r)])
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (Phase, Rational64)>) -> CycNumber {
        let mut v: Terms = terms.into_iter().filter(|(_, r)| !r.is_zero()).collect();
        canonical_merge(&mut v);
        CycNumber { terms: v }
    }

    pub fn terms(&self) -> &[(Phase, Rational64)] {
        &self.terms
    }

    pub fn add(&self, other: &CycNumber) -> CycNumber {
        if other.terms.is_empty() {
            return self.clone();
        }
        if self.terms.is_empty() {
            return other.clone();
        }
        let mut out: Terms = SmallVec::with_capacity(self.terms.len() + other.terms.len());
        let (mut i, mut j) = (0, 0);
        while i < self.terms.len() && j < other.terms.len() {
            let (pa, ra) = self.terms[i];
            let (pb, rb) = other.terms[j];
            match pa.cmp(&pb) {
                std::cmp::Ordering::Less => {
                    out.push((pa, ra));
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    out.push((pb, rb));
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    let r = ra + rb;
                    if !r.is_zero() {
                        out.push((pa, r));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&self.terms[i..]);
        out.extend_from_slice(&other.terms[j..]);
        let mut n = CycNumber { terms: out };
        n.compact();
        n
    }

    pub fn neg(&self) -> CycNumber {
        CycNumber { terms: self.terms.iter().map(|&(p, r)| (p, -r)).collect() }
    }

    pub fn sub(&self, other: &CycNumber) -> CycNumber {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &CycNumber) -> CycNumber {
        if self.terms.is_empty() || other.terms.is_empty() {
            return CycNumber::zero();
        }
        if self.terms.len() == 1 && other.terms.len() == 1 {
            let (pa, ra) = self.terms[0];
            let (pb, rb) = other.terms[0];
            return CycNumber { terms: smallvec![(pa + pb, ra * rb)] };
        }
        let mut v: Terms = SmallVec::with_capacity(self.terms.len() * other.terms.len());
        for &(pa, ra) in &self.terms {
            for &(pb, rb) in &other.terms {
                v.push((pa + pb, ra * rb));
            }
        }
        canonical_merge(&mut v);
        let mut n = CycNumber { terms: v };
        n.compact();
        n
    }

    pub fn mul_phase(&self, p: Phase) -> CycNumber {
        if p.is_zero() {
            return self.clone();
        }
        let mut v: Terms = self.terms.iter().map(|&(q, r)| (q + p, r)).collect();
        canonical_merge(&mut v);
        CycNumber { terms: v }
    }

    pub fn scale(&self, r: Rational64) -> CycNumber {
        if r.is_zero() {
            return CycNumber::zero();
        }
        CycNumber { terms: self.terms.iter().map(|&(p, x)| (p, x * r)).collect() }
    }

    pub fn conj(&self) -> CycNumber {
        let mut v: Terms = self.terms.iter().map(|&(p, r)| (-p, r)).collect();
        canonical_merge(&mut v);
        CycNumber { terms: v }
    }

    pub fn to_c64(&self) -> Complex64 {
        self.terms.iter().map(|(p, r)| p.to_complex() * r.to_f64().unwrap_or(f64::NAN)).sum()
    }

    fn conductor(&self) -> u64 {
        self.terms.iter().fold(1u64, |acc, (p, _)| acc.lcm(&p.denom()))
    }

    /// Exact zero test via reduction modulo `Φ_N`.
    pub fn is_zero(&self) -> bool {
        match self.terms.len() {
            0 => true,
            1 => false,
            _ => match self.reduced() {
                Some(r) => r.terms.is_empty(),
                None => {
                    FLOAT_FALLBACKS.fetch_add(1, Ordering::Relaxed);
                    self.to_c64().norm() < 1e-9
                }
            },
        }
    }

    pub fn equals(&self, other: &CycNumber) -> bool {
        self.sub(other).is_zero()
    }

    /// The same number written in the basis `ζ_N^0, …, ζ_N^{φ(N)-1}`; `None` above the conductor cap.
    pub fn reduced(&self) -> Option<CycNumber> {
        let n = self.conductor();
        if n > MAX_CONDUCTOR {
            return None;
        }
        if n <= 2 {
            // ζ_2 = -1 and ζ_1 = 1: fold into a rational.
            let r: Rational64 = self.terms.iter().map(|(p, r)| if p.is_zero() { *r } else { -*r }).sum();
            return Some(CycNumber::rational(r));
        }
        let phi = cyclotomic_polynomial(n);
        let deg = phi.len() - 1;
        let mut coef = vec![Rational64::zero(); n as usize];
        for (p, r) in &self.terms {
            let k = (p.numer() * (n / p.denom())) as usize;
            coef[k] += *r;
        }
        for i in (deg..n as usize).rev() {
            let c = coef[i];
            if c.is_zero() {
                continue;
            }
            for (j, &a) in phi.iter().enumerate().take(deg) {
                if a != 0 {
                    coef[i - deg + j] -= c * Rational64::from_integer(a);
                }
            }
            coef[i] = Rational64::zero();
        }
        let terms = coef
            .iter()
            .enumerate()
            .take(deg)
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, &c)| (Phase::new(k as i64, n as i64), c));
        Some(CycNumber::from_terms(terms))
    }

    /// Keeps long sums bounded by rewriting them in a reduced basis.
    fn compact(&mut self) {
        if self.terms.len() > 6 {
            if let Some(r) = self.reduced() {
                if r.terms.len() < self.terms.len() {
                    *self = r;
                }
            }
        }
    }

    /// `Some(p)` iff the number equals `ζ^p` exactly.
    pub fn as_root_of_unity(&self) -> Option<Phase> {
        if self.terms.len() == 1 && self.terms[0].1.is_one() {
            return Some(self.terms[0].0);
        }
        if self.terms.len() == 1 && self.terms[0].1 == -Rational64::one() {
            return Some(self.terms[0].0 + Phase::HALF);
        }
        if self.terms.is_empty() {
            return None;
        }
        let z = self.to_c64();
        if (z.norm() - 1.0).abs() > 1e-6 {
            return None;
        }
        let cand = Phase::approximate(z.arg() / std::f64::consts::TAU, self.conductor().max(2) * 2);
        self.sub(&CycNumber::root(cand)).is_zero().then_some(cand)
    }

    /// `Some(r)` iff the number is the rational `r`.
    pub fn as_rational(&self) -> Option<Rational64> {
        if self.terms.is_empty() {
            return Some(Rational64::zero());
        }
        if self.terms.len() == 1 && self.terms[0].0.is_zero() {
            return Some(self.terms[0].1);
        }
        let z = self.to_c64();
        let approx = Rational64::approximate_float(z.re)?;
        self.sub(&CycNumber::rational(approx)).is_zero().then_some(approx)
    }

    pub fn is_real_nonnegative_rational(&self) -> bool {
        self.as_rational().is_some_and(|r| !r.is_negative())
    }
}

fn canonical_merge(v: &mut Terms) {
    v.sort_by_key(|a| a.0);
    let mut out: Terms = SmallVec::with_capacity(v.len());
    for &(p, r) in v.iter() {
        match out.last_mut() {
            Some((q, s)) if *q == p => *s += r,
            _ => out.push((p, r)),
        }
    }
    out.retain(|(_, r)| !r.is_zero());
    *v = out;
}

fn poly_div_exact(num: &[i64], den: &[i64]) -> Vec<i64> {
    // coefficients in increasing degree; den monic
    let mut rem = num.to_vec();
    let dn = den.len() - 1;
    let qn = num.len() - 1 - dn;
    let mut q = vec![0i64; qn + 1];
    for i in (0..=qn).rev() {
        let c = rem[i + dn];
        q[i] = c;
        if c != 0 {
            for (j, &d) in den.iter().enumerate() {
                rem[i + j] -= c * d;
            }
        }
    }
    debug_assert!(rem.iter().all(|&x| x == 0), "inexact cyclotomic division");
    q
}

/// Coefficients of `Φ_n`, lowest degree first.
pub fn cyclotomic_polynomial(n: u64) -> Arc<Vec<i64>> {
    static CACHE: OnceLock<Mutex<HashMap<u64, Arc<Vec<i64>>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(p) = cache.lock().expect("cyclotomic cache poisoned").get(&n) {
        return p.clone();
    }
    let mut poly = vec![0i64; n as usize + 1];
    poly[0] = -1;
    poly[n as usize] = 1;
    for d in 1..n {
        if n.is_multiple_of(d) {
            let phi_d = cyclotomic_polynomial(d);
            poly = poly_div_exact(&poly, &phi_d);
        }
    }
    let p = Arc::new(poly);
    cache.lock().expect("cyclotomic cache poisoned").insert(n, p.clone());
    p
}
