//! Anomalous actions `(α, u)` of a finite group on a basis algebra.
//!
//! `α_g` are automorphisms, `u_{g,h}` unitaries with `α_g α_h = Ad(u_{g,h}) α_{gh}`,
//! and the associator `α_g(u_{h,k}) u_{g,hk} u_{gh,k}* u_{g,h}*` is a scalar, whose
//! phase is the anomaly. Everything is normalized: `α_e = id`, `u_{e,g} = u_{g,e} = 1`.

mod rokhlin;

use serde::Serialize;

use crate::algebra::maps::{ad_unitary, AlgebraMap};
use crate::algebra::{multi_matrix, same_algebra, AlgRef, BasisAlgebra, Element, MultiMatrixAlgebra, Scalar};
use crate::cohomology::{cocycle_violation, Cochain};
use crate::error::{input, Error, Result};
use crate::groups::Group;
use crate::phase::Phase;

pub use rokhlin::{
    permutation_unitary_from_units, random_unital_embedding, rokhlin_average, trivialize_cocycle, twist_matrix_units,
    verify_rokhlin_partition, AverageReport, RokhlinPartition, RokhlinReport,
};

const LIST_LIMIT: usize = 64;

#[derive(Clone, Debug)]
pub struct AnomalousAction<S: Scalar> {
    pub group: Group,
    pub algebra: AlgRef,
    pub alpha: Vec<AlgebraMap<S>>,
    /// `u_{g,h}` at index `g·|G| + h`.
    pub u: Vec<Element<S>>,
}

impl<S: Scalar> AnomalousAction<S> {
    pub fn new(group: Group, algebra: AlgRef, alpha: Vec<AlgebraMap<S>>, u: Vec<Element<S>>) -> Result<Self> {
        let n = group.order();
        if alpha.len() != n || u.len() != n * n {
            return input(format!("an action of a group of order {n} needs {n} maps and {} unitaries", n * n));
        }
        for a in &alpha {
            if !same_algebra(a.domain(), &algebra) || !same_algebra(a.codomain(), &algebra) {
                return input("action maps must be endomorphisms of the action's algebra");
            }
        }
        if u.iter().any(|x| !same_algebra(x.algebra(), &algebra)) {
            return input("u-table entries must lie in the action's algebra");
        }
        Ok(AnomalousAction { group, algebra, alpha, u })
    }

    /// A genuine action with `u ≡ 1`.
    pub fn genuine(group: Group, algebra: AlgRef, alpha: Vec<AlgebraMap<S>>) -> Result<Self> {
        let one = Element::one(&algebra);
        let n = group.order();
        Self::new(group, algebra, alpha, vec![one; n * n])
    }

    #[inline]
    pub fn u(&self, g: usize, h: usize) -> &Element<S> {
        &self.u[g * self.group.order() + h]
    }

    pub fn u_is_trivial(&self) -> bool {
        let one = Element::one(&self.algebra);
        self.u.iter().all(|x| x.equals(&one))
    }

    /// `α_g(u_{h,k}) u_{g,hk} u_{gh,k}* u_{g,h}*`.
    pub fn associator(&self, g: usize, h: usize, k: usize) -> Result<Element<S>> {
        let gr = &self.group;
        let a = self.alpha[g].apply(self.u(h, k))?;
        a.mul(self.u(g, gr.mul(h, k)))?.mul(&self.u(gr.mul(g, h), k).adjoint())?.mul(&self.u(g, h).adjoint())
    }

    pub fn equals(&self, o: &AnomalousAction<S>) -> bool {
        self.group.product_table() == o.group.product_table()
            && same_algebra(&self.algebra, &o.algebra)
            && self.alpha.iter().zip(&o.alpha).all(|(a, b)| a.equals(b))
            && self.u.iter().zip(&o.u).all(|(a, b)| a.equals(b))
    }
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct ActionReport {
    /// `g` with `α_g` not a *-automorphism.
    pub non_automorphisms: Vec<usize>,
    /// `(g, h)` with `u_{g,h}` not unitary.
    pub non_unitaries: Vec<(usize, usize)>,
    /// Violations of `α_e = id`, `u_{e,g} = u_{g,e} = 1`, as `(g, h)`; `(0, 0)` flags `α_e`.
    pub normalization_failures: Vec<(usize, usize)>,
    /// `(g, h)` with `α_g α_h ≠ Ad(u_{g,h}) α_{gh}`.
    pub composition_failures: Vec<(usize, usize)>,
    /// `(g, h, k)` whose associator is not a scalar.
    pub non_scalar_associators: Vec<(usize, usize, usize)>,
}

impl ActionReport {
    pub fn is_valid(&self) -> bool {
        self.non_automorphisms.is_empty()
            && self.non_unitaries.is_empty()
            && self.normalization_failures.is_empty()
            && self.composition_failures.is_empty()
            && self.non_scalar_associators.is_empty()
    }
}

fn push_limited<T>(v: &mut Vec<T>, x: T) {
    if v.len() < LIST_LIMIT {
        v.push(x);
    }
}

pub fn validate_action<S: Scalar>(a: &AnomalousAction<S>) -> Result<ActionReport> {
    let g = &a.group;
    let n = g.order();
    let mut r = ActionReport::default();
    for x in g.elements() {
        if !a.alpha[x].is_star_homomorphism().is_automorphism() {
            r.non_automorphisms.push(x);
        }
    }
    if !a.alpha[0].equals(&AlgebraMap::identity(&a.algebra)) {
        r.normalization_failures.push((0, 0));
    }
    let one = Element::one(&a.algebra);
    for x in g.elements() {
        if x != 0 && !a.u(0, x).equals(&one) {
            r.normalization_failures.push((0, x));
        }
        if x != 0 && !a.u(x, 0).equals(&one) {
            r.normalization_failures.push((x, 0));
        }
    }
    let mut unitary = vec![true; n * n];
    for x in g.elements() {
        for y in g.elements() {
            if !a.u(x, y).is_unitary() {
                unitary[x * n + y] = false;
                push_limited(&mut r.non_unitaries, (x, y));
            }
        }
    }
    for x in g.elements() {
        for y in g.elements() {
            if !unitary[x * n + y] {
                push_limited(&mut r.composition_failures, (x, y));
                continue;
            }
            let lhs = a.alpha[x].compose(&a.alpha[y])?;
            let rhs = ad_unitary(a.u(x, y))?.compose(&a.alpha[g.mul(x, y)])?;
            if !lhs.equals(&rhs) {
                push_limited(&mut r.composition_failures, (x, y));
            }
        }
    }
    for x in g.elements() {
        for y in g.elements() {
            for z in g.elements() {
                if a.associator(x, y, z)?.as_scalar().is_none() {
                    push_limited(&mut r.non_scalar_associators, (x, y, z));
                }
            }
        }
    }
    Ok(r)
}

/// Associator scalars in tuple order, for backend comparisons.
pub fn anomaly_values<S: Scalar>(a: &AnomalousAction<S>) -> Result<Vec<S>> {
    let g = &a.group;
    let mut out = Vec::with_capacity(g.order().pow(3));
    for x in g.elements() {
        for y in g.elements() {
            for z in g.elements() {
                let s = a.associator(x, y, z)?.as_scalar().ok_or_else(|| {
                    Error::Invariant(format!("associator at ({x}, {y}, {z}) is not a multiple of the unit"))
                })?;
                out.push(s);
            }
        }
    }
    Ok(out)
}

/// The anomaly as a normalized 3-cocycle; errors name the first offending triple.
pub fn extract_anomaly<S: Scalar>(a: &AnomalousAction<S>) -> Result<Cochain> {
    let n = a.group.order();
    let vals = anomaly_values(a)?;
    let mut phases = Vec::with_capacity(vals.len());
    for (i, s) in vals.iter().enumerate() {
        let p = s.to_phase().ok_or_else(|| {
            let (x, y, z) = (i / (n * n), (i / n) % n, i % n);
            Error::Invariant(format!("associator at ({x}, {y}, {z}) is not a root of unity"))
        })?;
        phases.push(p);
    }
    let w = Cochain::from_values(a.group.clone(), 3, phases)?;
    if let Some(t) = w.normalization_violation() {
        return Err(Error::Invariant(format!("anomaly is not normalized at {:?}", t.as_slice())));
    }
    if let Some(t) = cocycle_violation(&w)? {
        return Err(Error::Invariant(format!("anomaly fails the cocycle identity at {:?}", t.as_slice())));
    }
    Ok(w)
}

fn check_unitaries<S: Scalar>(a: &AnomalousAction<S>, v: &[Element<S>]) -> Result<()> {
    if v.len() != a.group.order() {
        return input("need one unitary per group element");
    }
    for (g, x) in v.iter().enumerate() {
        if !same_algebra(x.algebra(), &a.algebra) || !x.is_unitary() {
            return input(format!("v_{g} is not a unitary of the action's algebra"));
        }
    }
    Ok(())
}

/// `α^v_g = Ad(v_g) α_g`, `u^v_{g,h} = v_g α_g(v_h) u_{g,h} v_{gh}*`.
pub fn unitary_perturbation<S: Scalar>(a: &AnomalousAction<S>, v: &[Element<S>]) -> Result<AnomalousAction<S>> {
    check_unitaries(a, v)?;
    let g = &a.group;
    let alpha = g.elements().map(|x| ad_unitary(&v[x])?.compose(&a.alpha[x])).collect::<Result<Vec<_>>>()?;
    let mut u = Vec::with_capacity(a.u.len());
    for x in g.elements() {
        for y in g.elements() {
            let w = v[x].mul(&a.alpha[x].apply(&v[y])?)?.mul(a.u(x, y))?.mul(&v[g.mul(x, y)].adjoint())?;
            u.push(w);
        }
    }
    AnomalousAction::new(a.group.clone(), a.algebra.clone(), alpha, u)
}

/// `Σ x_a y_b · (e_a ⊗ e_b)`.
pub fn tensor_element<S: Scalar>(
    left: &MultiMatrixAlgebra,
    right: &MultiMatrixAlgebra,
    product: &MultiMatrixAlgebra,
    prod_ref: &AlgRef,
    x: &Element<S>,
    y: &Element<S>,
) -> Result<Element<S>> {
    let terms = x
        .terms()
        .iter()
        .flat_map(|(&a, c)| y.terms().iter().map(move |(&b, d)| (left.tensor_index(right, product, a, b), c.times(d))));
    Element::from_terms(prod_ref, terms)
}

fn tensor_map<S: Scalar>(
    (l, r, p, pref): (&MultiMatrixAlgebra, &MultiMatrixAlgebra, &MultiMatrixAlgebra, &AlgRef),
    m1: &AlgebraMap<S>,
    m2: &AlgebraMap<S>,
) -> Result<AlgebraMap<S>> {
    let mut images = vec![Element::zero(pref); p.dim()];
    let im2: Vec<Element<S>> = (0..r.dim()).map(|b| m2.image(b)).collect();
    for a in 0..l.dim() {
        let ia = m1.image(a);
        for (b, ib) in im2.iter().enumerate() {
            images[l.tensor_index(r, p, a, b)] = tensor_element(l, r, p, pref, &ia, ib)?;
        }
    }
    AlgebraMap::from_images(pref, pref, images)
}

/// `(α¹ ⊗ α², u¹ ⊗ u²)` on the block-wise Kronecker product; asserts that the
/// anomaly is the pointwise sum of the two input anomalies.
pub fn tensor_actions<S: Scalar>(a1: &AnomalousAction<S>, a2: &AnomalousAction<S>) -> Result<AnomalousAction<S>> {
    if a1.group.product_table() != a2.group.product_table() {
        return input("tensor_actions needs actions of the same group");
    }
    let (Some(l), Some(r)) = (a1.algebra.as_multi_matrix(), a2.algebra.as_multi_matrix()) else {
        return input("tensor_actions supports multi-matrix algebras only");
    };
    let p = l.tensor(r);
    let pref = multi_matrix(p.clone());
    let ctx = (l, r, &p, &pref);
    let alpha = a1.alpha.iter().zip(&a2.alpha).map(|(x, y)| tensor_map(ctx, x, y)).collect::<Result<Vec<_>>>()?;
    let u = a1.u.iter().zip(&a2.u).map(|(x, y)| tensor_element(l, r, &p, &pref, x, y)).collect::<Result<Vec<_>>>()?;
    let out = AnomalousAction::new(a1.group.clone(), pref, alpha, u)?;
    let expected = extract_anomaly(a1)?.add(&extract_anomaly(a2)?)?;
    if extract_anomaly(&out)? != expected {
        return Err(Error::Invariant("tensor product anomaly differs from the sum of the anomalies".into()));
    }
    Ok(out)
}

/// `β_g = θ α_g θ⁻¹`, `v_{g,h} = θ(u_{g,h})` for a *-isomorphism `θ`.
pub fn conjugate_action<S: Scalar>(a: &AnomalousAction<S>, iso: &AlgebraMap<S>) -> Result<AnomalousAction<S>> {
    if !same_algebra(iso.domain(), &a.algebra) {
        return input("conjugating map must start at the action's algebra");
    }
    if !iso.is_star_homomorphism().is_automorphism() {
        return input("conjugating map is not a *-isomorphism");
    }
    let inv = iso.inverse()?;
    let alpha = a.alpha.iter().map(|x| iso.compose(&x.compose(&inv)?)).collect::<Result<Vec<_>>>()?;
    let u = a.u.iter().map(|x| iso.apply(x)).collect::<Result<Vec<_>>>()?;
    AnomalousAction::new(a.group.clone(), iso.codomain().clone(), alpha, u)
}

/// A random automorphism of a multi-matrix algebra: blocks of equal size are permuted,
/// then each block is conjugated by a phased permutation matrix.
/// Returns the map and the block permutation (`block s ↦ perm[s]`).
pub fn random_block_relabeling<S: Scalar, R: rand::Rng>(
    alg: &AlgRef,
    phase_den: i64,
    rng: &mut R,
) -> Result<(AlgebraMap<S>, Vec<usize>)> {
    use rand::seq::SliceRandom;
    let Some(mm) = alg.as_multi_matrix() else {
        return input("block relabeling needs a multi-matrix algebra");
    };
    let nb = mm.block_count();
    let mut perm: Vec<usize> = (0..nb).collect();
    for d in mm.dims().into_iter().collect::<std::collections::BTreeSet<_>>() {
        let same: Vec<usize> = (0..nb).filter(|&s| mm.block_dim(s) == d).collect();
        let mut shuffled = same.clone();
        shuffled.shuffle(rng);
        for (a, b) in same.into_iter().zip(shuffled) {
            perm[a] = b;
        }
    }
    let den = phase_den.max(1);
    let rows: Vec<(Vec<usize>, Vec<Phase>)> = (0..nb)
        .map(|s| {
            let d = mm.block_dim(s);
            let mut sigma: Vec<usize> = (0..d).collect();
            sigma.shuffle(rng);
            let ph = (0..d).map(|_| Phase::new(rng.gen_range(0..den), den)).collect();
            (sigma, ph)
        })
        .collect();
    // e_{ij} ↦ ζ^{φ_i − φ_j} e_{σ(i)σ(j)} in block perm[s]
    let images = (0..mm.dim())
        .map(|l| {
            let (s, i, j) = mm.entry(l);
            let (sigma, ph) = &rows[s];
            smallvec::SmallVec::from_elem((mm.index(perm[s], sigma[i], sigma[j]), ph[i] - ph[j]), 1)
        })
        .collect();
    Ok((AlgebraMap::from_phased(alg, alg, images)?, perm))
}

/// Unitaries `s_g` and an isomorphism `θ` claimed to carry one action onto another.
#[derive(Clone, Debug)]
pub struct ConjugacyWitness<S: Scalar> {
    pub s: Vec<Element<S>>,
    pub theta: AlgebraMap<S>,
}

pub fn verify_cocycle_conjugacy<S: Scalar>(
    a1: &AnomalousAction<S>,
    a2: &AnomalousAction<S>,
    w: &ConjugacyWitness<S>,
) -> Result<bool> {
    if a1.group.product_table() != a2.group.product_table() {
        return Ok(false);
    }
    let moved = conjugate_action(&unitary_perturbation(a1, &w.s)?, &w.theta)?;
    Ok(moved.equals(a2))
}

/// `v_g α_g(v_h) = v_{gh}` for all pairs.
pub fn is_alpha_cocycle<S: Scalar>(a: &AnomalousAction<S>, v: &[Element<S>]) -> Result<bool> {
    check_unitaries(a, v)?;
    let g = &a.group;
    for x in g.elements() {
        for y in g.elements() {
            if !v[x].mul(&a.alpha[x].apply(&v[y])?)?.equals(&v[g.mul(x, y)]) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// `v_g = w α_g(w*)`.
pub fn coboundary_cocycle<S: Scalar>(a: &AnomalousAction<S>, w: &Element<S>) -> Result<Vec<Element<S>>> {
    let ws = w.adjoint();
    a.alpha.iter().map(|al| w.mul(&al.apply(&ws)?)).collect()
}

/// Phase-valued unitaries `v_g = ζ^{f(g)}·1`; perturbing by them changes `u` by `df`.
pub fn scalar_unitaries<S: Scalar>(alg: &AlgRef, f: &[Phase]) -> Vec<Element<S>> {
    f.iter().map(|&p| Element::one(alg).mul_phase(p)).collect()
}

#[cfg(test)]
mod tests;
