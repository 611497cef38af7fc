//! Linear maps between basis algebras.
//!
//! A [`MonomialMap`] sends each basis label to a sum `Σ ζ^{p}·b_c` of distinct
//! codomain labels with unimodular phases. Automorphisms built from group data and
//! the connecting maps of AF towers all have this form, which lets equality and
//! homomorphism checks run on labels and phases alone. A [`GeneralMap`] stores
//! arbitrary images and is used for averages and float-backend computations.

use std::collections::HashMap;
use std::sync::Arc;

use serde::Serialize;
use smallvec::SmallVec;

use super::element::{Accumulator, Element};
use super::scalar::{Backend, Scalar};
use super::{same_algebra, AlgRef};
use crate::error::{input, Result};
use crate::phase::Phase;

pub type PhasedImage = SmallVec<[(usize, Phase); 1]>;

const EXAMPLE_LIMIT: usize = 32;

#[derive(Clone, Debug)]
pub struct MonomialMap {
    dom: AlgRef,
    cod: AlgRef,
    images: Arc<Vec<PhasedImage>>,
}

impl MonomialMap {
    pub fn new(dom: &AlgRef, cod: &AlgRef, mut images: Vec<PhasedImage>) -> Result<MonomialMap> {
        if images.len() != dom.dim() {
            return input(format!("map has {} images for a domain of dimension {}", images.len(), dom.dim()));
        }
        for (l, img) in images.iter_mut().enumerate() {
            img.sort_by_key(|t| t.0);
            if img.iter().any(|t| t.0 >= cod.dim()) {
                return input(format!("image of label {l} leaves the codomain"));
            }
            if img.windows(2).any(|w| w[0].0 == w[1].0) {
                return input(format!("image of label {l} repeats a codomain label"));
            }
        }
        Ok(MonomialMap { dom: dom.clone(), cod: cod.clone(), images: Arc::new(images) })
    }

    /// One phased codomain label per domain label.
    pub fn from_single(dom: &AlgRef, cod: &AlgRef, images: Vec<(usize, Phase)>) -> Result<MonomialMap> {
        Self::new(dom, cod, images.into_iter().map(|t| SmallVec::from_elem(t, 1)).collect())
    }

    pub fn identity(alg: &AlgRef) -> MonomialMap {
        Self::from_single(alg, alg, (0..alg.dim()).map(|l| (l, Phase::ZERO)).collect()).expect("identity map")
    }

    pub fn domain(&self) -> &AlgRef {
        &self.dom
    }

    pub fn codomain(&self) -> &AlgRef {
        &self.cod
    }

    pub fn images(&self) -> &[PhasedImage] {
        &self.images
    }

    pub fn image(&self, l: usize) -> &[(usize, Phase)] {
        &self.images[l]
    }

    /// The label permutation when every image is a single basis element.
    pub fn single_labels(&self) -> Option<Vec<usize>> {
        self.images.iter().map(|img| (img.len() == 1).then(|| img[0].0)).collect()
    }

    pub fn is_label_bijection(&self) -> bool {
        if self.dom.dim() != self.cod.dim() {
            return false;
        }
        let Some(labels) = self.single_labels() else { return false };
        let mut seen = vec![false; self.cod.dim()];
        labels.into_iter().all(|c| !std::mem::replace(&mut seen[c], true))
    }

    pub fn inverse(&self) -> Result<MonomialMap> {
        if !self.is_label_bijection() {
            return input("only bijective single-label maps can be inverted");
        }
        let mut inv = vec![(0, Phase::ZERO); self.cod.dim()];
        for (l, img) in self.images.iter().enumerate() {
            let (c, p) = img[0];
            inv[c] = (l, -p);
        }
        Self::from_single(&self.cod, &self.dom, inv)
    }

    /// `self ∘ inner`; `None` when the result stops being monomial.
    pub fn compose(&self, inner: &MonomialMap) -> Result<Option<MonomialMap>> {
        if !same_algebra(&inner.cod, &self.dom) {
            return input("composition: codomain of the inner map differs from the domain of the outer map");
        }
        let mut out = Vec::with_capacity(inner.images.len());
        for img in inner.images.iter() {
            let mut v: PhasedImage = SmallVec::new();
            for &(m, p) in img {
                for &(c, q) in &self.images[m] {
                    v.push((c, p + q));
                }
            }
            v.sort_by_key(|t| t.0);
            if v.windows(2).any(|w| w[0].0 == w[1].0) {
                return Ok(None);
            }
            out.push(v);
        }
        Ok(Some(MonomialMap { dom: inner.dom.clone(), cod: self.cod.clone(), images: Arc::new(out) }))
    }
}

impl PartialEq for MonomialMap {
    fn eq(&self, o: &MonomialMap) -> bool {
        same_algebra(&self.dom, &o.dom) && same_algebra(&self.cod, &o.cod) && self.images == o.images
    }
}

#[derive(Clone, Debug)]
pub struct GeneralMap<S: Scalar> {
    dom: AlgRef,
    cod: AlgRef,
    images: Arc<Vec<Element<S>>>,
}

impl<S: Scalar> GeneralMap<S> {
    pub fn new(dom: &AlgRef, cod: &AlgRef, images: Vec<Element<S>>) -> Result<GeneralMap<S>> {
        if images.len() != dom.dim() {
            return input(format!("map has {} images for a domain of dimension {}", images.len(), dom.dim()));
        }
        if let Some(l) = images.iter().position(|e| !same_algebra(e.algebra(), cod)) {
            return input(format!("image of label {l} lies in the wrong algebra"));
        }
        Ok(GeneralMap { dom: dom.clone(), cod: cod.clone(), images: Arc::new(images) })
    }

    pub fn images(&self) -> &[Element<S>] {
        &self.images
    }
}

#[derive(Clone, Debug)]
pub enum AlgebraMap<S: Scalar> {
    Monomial(MonomialMap),
    General(GeneralMap<S>),
}

impl<S: Scalar> From<MonomialMap> for AlgebraMap<S> {
    fn from(m: MonomialMap) -> Self {
        AlgebraMap::Monomial(m)
    }
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct HomReport {
    pub unital: bool,
    pub adjoint_failures: usize,
    pub multiplicative_failures: usize,
    pub pairs_checked: usize,
    /// Decided for multi-matrix domains and for bijective monomial maps.
    pub injective: Option<bool>,
    pub bijective_labels: bool,
    pub examples: Vec<String>,
}

impl HomReport {
    pub fn is_homomorphism(&self) -> bool {
        self.unital && self.adjoint_failures == 0 && self.multiplicative_failures == 0
    }

    pub fn is_automorphism(&self) -> bool {
        self.is_homomorphism() && self.bijective_labels
    }

    fn note(&mut self, msg: impl FnOnce() -> String) {
        if self.examples.len() < EXAMPLE_LIMIT {
            self.examples.push(msg());
        }
    }
}

impl<S: Scalar> AlgebraMap<S> {
    /// Monomial on the exact backend, general with the same images on floats.
    pub fn from_phased(dom: &AlgRef, cod: &AlgRef, images: Vec<PhasedImage>) -> Result<AlgebraMap<S>> {
        let m = MonomialMap::new(dom, cod, images)?;
        Ok(match S::BACKEND {
            Backend::Exact => AlgebraMap::Monomial(m),
            Backend::Float => AlgebraMap::General(m.to_general()),
        })
    }

    pub fn identity(alg: &AlgRef) -> AlgebraMap<S> {
        Self::from_phased(alg, alg, (0..alg.dim()).map(|l| SmallVec::from_elem((l, Phase::ZERO), 1)).collect())
            .expect("identity map")
    }

    /// Prefers the monomial representation when every image has unimodular, distinct terms.
    pub fn from_images(dom: &AlgRef, cod: &AlgRef, images: Vec<Element<S>>) -> Result<AlgebraMap<S>> {
        if S::BACKEND == Backend::Exact {
            let phased: Option<Vec<PhasedImage>> =
                images.iter().map(|e| e.as_phased_terms().map(SmallVec::from_vec)).collect();
            if let Some(p) = phased {
                return MonomialMap::new(dom, cod, p).map(AlgebraMap::Monomial);
            }
        }
        GeneralMap::new(dom, cod, images).map(AlgebraMap::General)
    }

    pub fn domain(&self) -> &AlgRef {
        match self {
            AlgebraMap::Monomial(m) => &m.dom,
            AlgebraMap::General(m) => &m.dom,
        }
    }

    pub fn codomain(&self) -> &AlgRef {
        match self {
            AlgebraMap::Monomial(m) => &m.cod,
            AlgebraMap::General(m) => &m.cod,
        }
    }

    pub fn as_monomial(&self) -> Option<&MonomialMap> {
        match self {
            AlgebraMap::Monomial(m) => Some(m),
            AlgebraMap::General(_) => None,
        }
    }

    pub fn image(&self, l: usize) -> Element<S> {
        match self {
            AlgebraMap::Monomial(m) => Element::from_phases(&m.cod, m.images[l].iter().copied()),
            AlgebraMap::General(m) => m.images[l].clone(),
        }
    }

    pub fn apply(&self, x: &Element<S>) -> Result<Element<S>> {
        if !same_algebra(x.algebra(), self.domain()) {
            return input("apply: element does not lie in the domain");
        }
        let mut acc = Accumulator::new();
        match self {
            AlgebraMap::Monomial(m) => {
                for (&l, c) in x.terms() {
                    for &(t, p) in &m.images[l] {
                        acc.add(t, c.mul_phase(p));
                    }
                }
            }
            AlgebraMap::General(m) => {
                for (&l, c) in x.terms() {
                    for (&t, y) in m.images[l].terms() {
                        acc.add(t, c.times(y));
                    }
                }
            }
        }
        Ok(acc.finish(self.codomain()))
    }

    /// `self ∘ inner`.
    pub fn compose(&self, inner: &AlgebraMap<S>) -> Result<AlgebraMap<S>> {
        if !same_algebra(inner.codomain(), self.domain()) {
            return input("composition: codomain of the inner map differs from the domain of the outer map");
        }
        if let (AlgebraMap::Monomial(a), AlgebraMap::Monomial(b)) = (self, inner) {
            if let Some(m) = a.compose(b)? {
                return Ok(AlgebraMap::Monomial(m));
            }
        }
        let images = (0..inner.domain().dim()).map(|l| self.apply(&inner.image(l))).collect::<Result<Vec<_>>>()?;
        Self::from_images(inner.domain(), self.codomain(), images)
    }

    pub fn inverse(&self) -> Result<AlgebraMap<S>> {
        match self {
            AlgebraMap::Monomial(m) => Ok(AlgebraMap::Monomial(m.inverse()?)),
            AlgebraMap::General(g) => {
                let mut inv: Vec<Option<Element<S>>> = vec![None; g.cod.dim()];
                for (l, img) in g.images.iter().enumerate() {
                    let (&c, coef) = match (img.len(), img.terms().iter().next()) {
                        (1, Some(t)) => t,
                        _ => return input("only single-label maps can be inverted"),
                    };
                    let p = coef.to_phase().ok_or_else(|| crate::Error::Input("non-unimodular coefficient".into()))?;
                    if inv[c].replace(Element::phased(&g.dom, l, -p)).is_some() {
                        return input("map is not injective on labels");
                    }
                }
                let images = inv.into_iter().collect::<Option<Vec<_>>>();
                match images {
                    Some(v) => GeneralMap::new(&g.cod, &g.dom, v).map(AlgebraMap::General),
                    None => input("map is not surjective on labels"),
                }
            }
        }
    }

    pub fn equals(&self, o: &AlgebraMap<S>) -> bool {
        if !same_algebra(self.domain(), o.domain()) || !same_algebra(self.codomain(), o.codomain()) {
            return false;
        }
        if let (AlgebraMap::Monomial(a), AlgebraMap::Monomial(b)) = (self, o) {
            return a.images == b.images;
        }
        (0..self.domain().dim()).all(|l| self.image(l).equals(&o.image(l)))
    }

    /// Labels on which two maps disagree.
    pub fn differences(&self, o: &AlgebraMap<S>) -> Vec<usize> {
        (0..self.domain().dim()).filter(|&l| !self.image(l).equals(&o.image(l))).collect()
    }

    /// Largest coefficient distance between the images of two maps on the same basis.
    pub fn max_distance<T: Scalar>(&self, o: &AlgebraMap<T>) -> f64 {
        (0..self.domain().dim()).map(|l| self.image(l).max_distance(&o.image(l))).fold(0.0, f64::max)
    }

    fn label_bijection(&self) -> bool {
        match self {
            AlgebraMap::Monomial(m) => m.is_label_bijection(),
            AlgebraMap::General(g) => {
                if g.dom.dim() != g.cod.dim() {
                    return false;
                }
                let mut seen = vec![false; g.cod.dim()];
                g.images.iter().all(|img| {
                    img.len() == 1
                        && img.terms().values().all(|c| c.to_phase().is_some())
                        && img.terms().keys().all(|&c| !std::mem::replace(&mut seen[c], true))
                })
            }
        }
    }

    /// Checks unit preservation, *-compatibility and multiplicativity on the
    /// domain's test pairs, plus injectivity where it is decidable from labels.
    pub fn is_star_homomorphism(&self) -> HomReport {
        let dom = self.domain().clone();
        let cod = self.codomain().clone();
        let mut r = HomReport {
            unital: self.apply(&Element::one(&dom)).is_ok_and(|x| x.equals(&Element::one(&cod))),
            bijective_labels: self.label_bijection(),
            ..HomReport::default()
        };
        if !r.unital {
            r.note(|| "unit is not preserved".into());
        }
        for l in 0..dom.dim() {
            let (m, p) = dom.adjoint(l);
            let lhs = self.image(m).mul_phase(p);
            if !lhs.equals(&self.image(l).adjoint()) {
                r.adjoint_failures += 1;
                r.note(|| format!("adjoint fails at {}", dom.label(l)));
            }
        }
        let singles = self.as_monomial().and_then(|m| m.single_labels().map(|s| (m, s)));
        let mut checked = 0usize;
        let mut fails = 0usize;
        let mut examples = Vec::new();
        dom.for_each_test_pair(&mut |a, b| {
            checked += 1;
            let ok = match &singles {
                Some((m, _)) => {
                    let (ca, pa) = m.images[a][0];
                    let (cb, pb) = m.images[b][0];
                    let rhs = cod.product(ca, cb).map(|(c, q)| (c, q + pa + pb));
                    let lhs = dom.product(a, b).map(|(c, q)| {
                        let (t, s) = m.images[c][0];
                        (t, s + q)
                    });
                    lhs == rhs
                }
                None => {
                    let lhs = match dom.product(a, b) {
                        Some((c, q)) => self.image(c).mul_phase(q),
                        None => Element::zero(&cod),
                    };
                    matches!(self.image(a).mul(&self.image(b)), Ok(x) if x.equals(&lhs))
                }
            };
            if !ok {
                fails += 1;
                if examples.len() < EXAMPLE_LIMIT {
                    examples.push(format!("product fails at ({}, {})", dom.label(a), dom.label(b)));
                }
            }
            true
        });
        r.pairs_checked = checked;
        r.multiplicative_failures = fails;
        for e in examples {
            r.note(|| e);
        }
        r.injective = if let Some(mm) = dom.as_multi_matrix() {
            Some((0..mm.block_count()).all(|s| !self.image(mm.index(s, 0, 0)).is_zero()))
        } else if r.bijective_labels {
            Some(true)
        } else {
            None
        };
        r
    }
}

impl MonomialMap {
    pub fn to_general<S: Scalar>(&self) -> GeneralMap<S> {
        let images = self.images.iter().map(|img| Element::from_phases(&self.cod, img.iter().copied())).collect();
        GeneralMap { dom: self.dom.clone(), cod: self.cod.clone(), images: Arc::new(images) }
    }
}

/// Fixed unitary viewed through its key buckets, for repeated conjugations.
struct Conjugator<'a, S: Scalar> {
    alg: &'a AlgRef,
    u_by_right: HashMap<u64, Vec<(usize, S)>>,
    ustar_by_left: HashMap<u64, Vec<(usize, S)>>,
}

impl<'a, S: Scalar> Conjugator<'a, S> {
    fn new(u: &'a Element<S>) -> Self {
        let alg = u.algebra();
        let mut u_by_right: HashMap<u64, Vec<(usize, S)>> = HashMap::new();
        for (&a, c) in u.terms() {
            u_by_right.entry(alg.right_key(a)).or_default().push((a, c.clone()));
        }
        let mut ustar_by_left: HashMap<u64, Vec<(usize, S)>> = HashMap::new();
        for (&a, c) in u.adjoint().terms() {
            ustar_by_left.entry(alg.left_key(a)).or_default().push((a, c.clone()));
        }
        Conjugator { alg, u_by_right, ustar_by_left }
    }

    /// `u·b_l·u*`.
    fn conjugate_basis(&self, l: usize) -> Element<S> {
        let alg = self.alg;
        let mut left = Accumulator::new();
        if let Some(terms) = self.u_by_right.get(&alg.left_key(l)) {
            for (a, c) in terms {
                if let Some((t, p)) = alg.product(*a, l) {
                    left.add(t, c.mul_phase(p));
                }
            }
        }
        let left = left.finish(alg);
        let mut acc = Accumulator::new();
        for (&t, c) in left.terms() {
            if let Some(terms) = self.ustar_by_left.get(&alg.right_key(t)) {
                for (b, d) in terms {
                    if let Some((r, p)) = alg.product(t, *b) {
                        acc.add(r, c.times(d).mul_phase(p));
                    }
                }
            }
        }
        acc.finish(alg)
    }
}

/// `x ↦ u x u*`; monomial on the exact backend whenever the images allow it.
pub fn ad_unitary<S: Scalar>(u: &Element<S>) -> Result<AlgebraMap<S>> {
    if !u.is_unitary() {
        return input("Ad(u) needs a unitary u");
    }
    let alg = u.algebra();
    let conj = Conjugator::new(u);
    let images = (0..alg.dim()).map(|l| conj.conjugate_basis(l)).collect();
    AlgebraMap::from_images(alg, alg, images)
}

/// `E = (1/|G|)·Σ_g α_g` for a genuine action given as maps indexed by group elements.
pub fn fixed_point_expectation<S: Scalar>(
    group: &crate::groups::GroupTable,
    action: &[AlgebraMap<S>],
) -> Result<GeneralMap<S>> {
    let n = group.order();
    if action.len() != n || n == 0 {
        return input("fixed_point_expectation needs one map per group element");
    }
    let alg = action[0].domain().clone();
    for g in group.elements() {
        for h in group.elements() {
            if !action[g].compose(&action[h])?.equals(&action[group.mul(g, h)]) {
                return input(format!("maps do not form an action: α({g})α({h}) ≠ α({})", group.mul(g, h)));
            }
        }
    }
    let w = S::from_ratio(num_rational::Rational64::new(1, n as i64));
    let mut images = Vec::with_capacity(alg.dim());
    for l in 0..alg.dim() {
        let mut acc = Accumulator::new();
        for a in action {
            for (&t, c) in a.image(l).terms() {
                acc.add(t, c.times(&w));
            }
        }
        images.push(acc.finish(&alg));
    }
    GeneralMap::new(&alg, &alg, images)
}
