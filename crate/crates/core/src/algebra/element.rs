use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_complex::Complex64;

use super::scalar::Scalar;
use super::{same_algebra, AlgRef};
use crate::error::{input, Result};
use crate::phase::Phase;

/// A sparse linear combination of basis elements; zero coefficients are never stored.
#[derive(Clone)]
pub struct Element<S: Scalar> {
    alg: AlgRef,
    terms: BTreeMap<usize, S>,
}

impl<S: Scalar> fmt::Debug for Element<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (l, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({c:?})·{}", self.alg.label(*l))?;
        }
        Ok(())
    }
}

impl<S: Scalar> Element<S> {
    pub fn zero(alg: &AlgRef) -> Element<S> {
        Element { alg: alg.clone(), terms: BTreeMap::new() }
    }

    pub fn one(alg: &AlgRef) -> Element<S> {
        Element { alg: alg.clone(), terms: alg.unit_support().iter().map(|&l| (l, S::one())).collect() }
    }

    pub fn basis(alg: &AlgRef, l: usize) -> Element<S> {
        Self::phased(alg, l, Phase::ZERO)
    }

    pub fn phased(alg: &AlgRef, l: usize, p: Phase) -> Element<S> {
        assert!(l < alg.dim(), "label {l} out of range");
        Element { alg: alg.clone(), terms: BTreeMap::from([(l, S::from_phase(p))]) }
    }

    /// Sums repeated labels and drops zeros.
    pub fn from_terms(alg: &AlgRef, terms: impl IntoIterator<Item = (usize, S)>) -> Result<Element<S>> {
        let mut acc = Accumulator::new();
        for (l, c) in terms {
            if l >= alg.dim() {
                return input(format!("label {l} outside an algebra of dimension {}", alg.dim()));
            }
            acc.add(l, c);
        }
        Ok(acc.finish(alg))
    }

    /// `Σ ζ^{p_i}·b_{l_i}` for distinct or repeated labels.
    pub fn from_phases(alg: &AlgRef, terms: impl IntoIterator<Item = (usize, Phase)>) -> Element<S> {
        let mut acc = Accumulator::new();
        for (l, p) in terms {
            acc.add(l, S::from_phase(p));
        }
        acc.finish(alg)
    }

    pub fn algebra(&self) -> &AlgRef {
        &self.alg
    }

    pub fn terms(&self) -> &BTreeMap<usize, S> {
        &self.terms
    }

    pub fn coeff(&self, l: usize) -> S {
        self.terms.get(&l).cloned().unwrap_or_else(S::zero)
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.values().all(|c| c.is_zero())
    }

    fn check_same(&self, o: &Element<S>) -> Result<()> {
        if same_algebra(&self.alg, &o.alg) {
            Ok(())
        } else {
            input(format!("algebra mismatch: {} vs {}", self.alg.signature(), o.alg.signature()))
        }
    }

    pub fn add(&self, o: &Element<S>) -> Result<Element<S>> {
        self.check_same(o)?;
        let mut acc = Accumulator::from_map(self.terms.clone());
        for (&l, c) in &o.terms {
            acc.add(l, c.clone());
        }
        Ok(acc.finish(&self.alg))
    }

    pub fn sub(&self, o: &Element<S>) -> Result<Element<S>> {
        self.add(&o.negated())
    }

    pub fn negated(&self) -> Element<S> {
        Element { alg: self.alg.clone(), terms: self.terms.iter().map(|(&l, c)| (l, c.negated())).collect() }
    }

    pub fn scale(&self, s: &S) -> Element<S> {
        if s.is_zero() {
            return Element::zero(&self.alg);
        }
        let terms = self.terms.iter().map(|(&l, c)| (l, c.times(s))).filter(|(_, c)| !c.is_zero()).collect();
        Element { alg: self.alg.clone(), terms }
    }

    pub fn mul_phase(&self, p: Phase) -> Element<S> {
        Element { alg: self.alg.clone(), terms: self.terms.iter().map(|(&l, c)| (l, c.mul_phase(p))).collect() }
    }

    pub fn mul(&self, o: &Element<S>) -> Result<Element<S>> {
        self.check_same(o)?;
        let alg = &self.alg;
        let mut by_key: HashMap<u64, Vec<(usize, &S)>> = HashMap::new();
        for (&b, y) in &o.terms {
            by_key.entry(alg.left_key(b)).or_default().push((b, y));
        }
        let mut acc = Accumulator::new();
        for (&a, x) in &self.terms {
            let Some(partners) = by_key.get(&alg.right_key(a)) else { continue };
            for &(b, y) in partners {
                if let Some((c, p)) = alg.product(a, b) {
                    acc.add(c, x.times(y).mul_phase(p));
                }
            }
        }
        Ok(acc.finish(alg))
    }

    pub fn adjoint(&self) -> Element<S> {
        let mut acc = Accumulator::new();
        for (&l, c) in &self.terms {
            let (m, p) = self.alg.adjoint(l);
            acc.add(m, c.conj().mul_phase(p));
        }
        acc.finish(&self.alg)
    }

    pub fn equals(&self, o: &Element<S>) -> bool {
        if !same_algebra(&self.alg, &o.alg) {
            return false;
        }
        let keys: std::collections::BTreeSet<usize> = self.terms.keys().chain(o.terms.keys()).copied().collect();
        keys.into_iter().all(|l| match (self.terms.get(&l), o.terms.get(&l)) {
            (Some(a), Some(b)) => a.equals(b),
            (Some(a), None) | (None, Some(a)) => a.is_zero(),
            (None, None) => true,
        })
    }

    /// `Some(s)` when the element is `s·1`.
    pub fn as_scalar(&self) -> Option<S> {
        let unit = self.alg.unit_support();
        let s = self.coeff(*unit.first()?);
        let one = Element::<S>::one(&self.alg).scale(&s);
        self.equals(&one).then_some(s)
    }

    pub fn is_unitary(&self) -> bool {
        let one = Element::one(&self.alg);
        let u_star = self.adjoint();
        matches!(u_star.mul(self), Ok(x) if x.equals(&one)) && matches!(self.mul(&u_star), Ok(x) if x.equals(&one))
    }

    pub fn is_self_adjoint(&self) -> bool {
        self.equals(&self.adjoint())
    }

    pub fn is_projection(&self) -> bool {
        self.is_self_adjoint() && matches!(self.mul(self), Ok(x) if x.equals(self))
    }

    pub fn commutator(&self, o: &Element<S>) -> Result<Element<S>> {
        self.mul(o)?.sub(&o.mul(self)?)
    }

    pub fn commutes_with(&self, o: &Element<S>) -> Result<bool> {
        Ok(self.commutator(o)?.is_zero())
    }

    /// Largest coefficientwise distance to another element, measured in ℂ.
    pub fn max_distance<T: Scalar>(&self, o: &Element<T>) -> f64 {
        let mut keys: Vec<usize> = self.terms.keys().chain(o.terms().keys()).copied().collect();
        keys.sort_unstable();
        keys.dedup();
        keys.into_iter()
            .map(|l| {
                let a = self.terms.get(&l).map_or(Complex64::new(0.0, 0.0), |c| c.to_c64());
                let b = o.terms().get(&l).map_or(Complex64::new(0.0, 0.0), |c| c.to_c64());
                (a - b).norm()
            })
            .fold(0.0, f64::max)
    }

    /// `Some(terms)` when every coefficient is a root of unity.
    pub fn as_phased_terms(&self) -> Option<Vec<(usize, Phase)>> {
        self.terms.iter().map(|(&l, c)| Some((l, c.to_phase()?))).collect()
    }

    pub fn map_scalars<T: Scalar>(&self, f: impl Fn(&S) -> T) -> Element<T> {
        let mut acc = Accumulator::new();
        for (&l, c) in &self.terms {
            acc.add(l, f(c));
        }
        acc.finish(&self.alg)
    }
}

/// Sparse coefficient accumulator that drops zeros on completion.
pub(crate) struct Accumulator<S: Scalar> {
    map: BTreeMap<usize, S>,
}

impl<S: Scalar> Accumulator<S> {
    pub(crate) fn new() -> Self {
        Accumulator { map: BTreeMap::new() }
    }

    fn from_map(map: BTreeMap<usize, S>) -> Self {
        Accumulator { map }
    }

    pub(crate) fn add(&mut self, l: usize, c: S) {
        match self.map.entry(l) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let s = o.get().plus(&c);
                *o.get_mut() = s;
            }
        }
    }

    pub(crate) fn finish(mut self, alg: &AlgRef) -> Element<S> {
        self.map.retain(|_, c| !c.is_zero());
        Element { alg: alg.clone(), terms: self.map }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{multi_matrix, CycNumber, MultiMatrixAlgebra};
    use proptest::prelude::*;

    type E = Element<CycNumber>;

    fn m2() -> (AlgRef, MultiMatrixAlgebra) {
        let m = MultiMatrixAlgebra::from_dims(&[2]).unwrap();
        (multi_matrix(m.clone()), m)
    }

    #[test]
    fn matrix_unit_products() {
        let (a, m) = m2();
        let e = |i, j| E::basis(&a, m.index(0, i, j));
        assert!(e(0, 0).mul(&e(0, 1)).unwrap().equals(&e(0, 1)));
        assert!(e(0, 1).mul(&e(0, 0)).unwrap().is_zero());
        let h = E::phased(&a, m.index(0, 0, 0), Phase::HALF);
        let sq = h.mul(&h).unwrap();
        assert!(sq.equals(&e(0, 0)));
        assert_eq!(sq.as_phased_terms(), Some(vec![(m.index(0, 0, 0), Phase::ZERO)]));
    }

    #[test]
    fn adjoint_and_predicates() {
        let (a, m) = m2();
        let one = E::one(&a);
        assert!(one.is_unitary() && one.is_projection());
        let q = Phase::new(1, 3);
        let x = E::phased(&a, m.index(0, 0, 1), q);
        assert!(x.adjoint().equals(&E::phased(&a, m.index(0, 1, 0), -q)));
        let swap = E::from_phases(&a, [(m.index(0, 0, 1), Phase::ZERO), (m.index(0, 1, 0), q)]);
        assert!(swap.is_unitary());
        assert!(!swap.is_projection());
        assert!(E::basis(&a, m.index(0, 0, 0)).is_projection());
        assert!(one.scale(&CycNumber::root(q)).as_scalar().is_some());
        assert!(swap.as_scalar().is_none());
    }

    #[test]
    fn mismatched_algebras_are_rejected() {
        let (a, _) = m2();
        let b = multi_matrix(MultiMatrixAlgebra::from_dims(&[1, 1]).unwrap());
        assert!(E::one(&a).mul(&E::one(&b)).is_err());
    }

    fn arb_element(alg: AlgRef) -> impl Strategy<Value = E> {
        let d = alg.dim();
        proptest::collection::vec((0..d, 0i64..6, 1i64..3), 0..6).prop_map(move |v| {
            E::from_terms(
                &alg,
                v.into_iter().map(|(l, p, r)| {
                    (l, CycNumber::root(Phase::new(p, 6)).scale(num_rational::Rational64::from_integer(r)))
                }),
            )
            .unwrap()
        })
    }

    fn alg32() -> AlgRef {
        multi_matrix(MultiMatrixAlgebra::from_dims(&[3, 2]).unwrap())
    }

    proptest! {
        #[test]
        fn product_is_associative(x in arb_element(alg32()), y in arb_element(alg32()), z in arb_element(alg32())) {
            let l = x.mul(&y).unwrap().mul(&z).unwrap();
            let r = x.mul(&y.mul(&z).unwrap()).unwrap();
            prop_assert!(l.equals(&r));
        }

        #[test]
        fn adjoint_is_an_involutive_antihomomorphism(x in arb_element(alg32()), y in arb_element(alg32())) {
            prop_assert!(x.adjoint().adjoint().equals(&x));
            let l = x.mul(&y).unwrap().adjoint();
            let r = y.adjoint().mul(&x.adjoint()).unwrap();
            prop_assert!(l.equals(&r));
        }
    }
}
