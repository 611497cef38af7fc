//! Twisted crossed products `B ⋊_{π,c̄} K` of a basis algebra by a finite group.
//!
//! The basis is `b·v_k` with label `pos(k)·dim B + b`, where `pos` is the position of
//! `k` in the sorted kernel. Products and adjoints follow
//! `(a v_k)(b v_l) = a·π_k(b)·c̄(k,l)·v_{kl}` and `(a v_k)* = c(k,k⁻¹)·π_{k⁻¹}(a*)·v_{k⁻¹}`.

use std::collections::hash_map::DefaultHasher;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use serde::Serialize;

use crate::algebra::{AlgRef, BasisAlgebra, Element, MonomialMap, Scalar};
use crate::cohomology::{cocycle_violation, restrict, Cochain};
use crate::error::{input, Result};
use crate::groups::Group;
use crate::phase::Phase;

/// Exhaustive triple checks run up to this many triples; larger algebras check the
/// structural hypotheses plus every triple with a unit or canonical-unitary entry.
pub const TRIPLE_CHECK_LIMIT: usize = 1 << 24;

#[derive(Debug)]
pub struct TwistedCrossedProduct {
    base: AlgRef,
    gamma: Group,
    kernel: Vec<usize>,
    position: Vec<Option<usize>>,
    /// `π_γ` for every `γ ∈ Γ`, each a single-label monomial automorphism of `B`.
    pi: Vec<Vec<(usize, Phase)>>,
    c: Cochain,
    unit: Vec<usize>,
    signature: String,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct AxiomReport {
    pub triples_checked: usize,
    pub exhaustive: bool,
    pub associativity_failures: Vec<(usize, usize, usize)>,
    pub adjoint_failures: Vec<(usize, usize)>,
    pub involution_failures: Vec<usize>,
}

impl AxiomReport {
    pub fn passed(&self) -> bool {
        self.associativity_failures.is_empty()
            && self.adjoint_failures.is_empty()
            && self.involution_failures.is_empty()
    }
}

impl TwistedCrossedProduct {
    /// `pi[γ]` must be a genuine Γ-action on `base` by label-permuting monomial automorphisms,
    /// `kernel` a normal subgroup of Γ, and `c` a normalized 2-cochain on Γ that is a cocycle on `kernel`.
    pub fn new(base: &AlgRef, gamma: &Group, kernel: &[usize], pi: &[MonomialMap], c: &Cochain) -> Result<Arc<Self>> {
        let n = gamma.order();
        if pi.len() != n {
            return input(format!("need one automorphism per element of a group of order {n}"));
        }
        if c.degree() != 2 || c.group().product_table() != gamma.product_table() {
            return input("the twist must be a 2-cochain on the acting group");
        }
        if !c.is_normalized() {
            return input("the twist must be normalized");
        }
        let mut kernel = kernel.to_vec();
        kernel.sort_unstable();
        kernel.dedup();
        if kernel.first() != Some(&0) || !gamma.is_subgroup(&kernel) {
            return input("the kernel must be a subgroup containing the identity");
        }
        if gamma.elements().any(|x| kernel.iter().any(|&k| kernel.binary_search(&gamma.conjugate(x, k)).is_err())) {
            return input("the kernel must be normal");
        }
        let mut maps = Vec::with_capacity(n);
        for (x, m) in pi.iter().enumerate() {
            if !crate::algebra::same_algebra(m.domain(), base) || !crate::algebra::same_algebra(m.codomain(), base) {
                return input(format!("π({x}) is not an endomorphism of the base algebra"));
            }
            let single: Option<Vec<(usize, Phase)>> =
                m.images().iter().map(|img| (img.len() == 1).then(|| img[0])).collect();
            match single {
                Some(s) if m.is_label_bijection() => maps.push(s),
                _ => return input(format!("π({x}) must send basis labels bijectively to phased basis labels")),
            }
        }
        let pim: Vec<crate::algebra::AlgebraMap<crate::algebra::CycNumber>> =
            pi.iter().map(|m| m.clone().into()).collect();
        for (x, m) in pim.iter().enumerate() {
            if !m.is_star_homomorphism().is_automorphism() {
                return input(format!("π({x}) is not a *-automorphism"));
            }
        }
        for x in gamma.elements() {
            for y in gamma.elements() {
                if !pim[x].compose(&pim[y])?.equals(&pim[gamma.mul(x, y)]) {
                    return input(format!("π is not an action: π({x})π({y}) ≠ π({})", gamma.mul(x, y)));
                }
            }
        }
        let ck = restrict(c, &kernel)?;
        if let Some(t) = cocycle_violation(&ck)? {
            return input(format!("the twist restricted to the kernel is not a cocycle at {:?}", t.as_slice()));
        }
        let mut position = vec![None; n];
        for (i, &k) in kernel.iter().enumerate() {
            position[k] = Some(i);
        }
        let unit = base.unit_support().to_vec();
        let mut h = DefaultHasher::new();
        gamma.product_table().hash(&mut h);
        kernel.hash(&mut h);
        maps.hash(&mut h);
        for &a in &kernel {
            for &b in &kernel {
                c.get(&[a, b]).hash(&mut h);
            }
        }
        let signature = format!("tcp[{}|K{}|{:016x}]", base.signature(), kernel.len(), h.finish());
        let cp = Arc::new(TwistedCrossedProduct {
            base: base.clone(),
            gamma: gamma.clone(),
            kernel,
            position,
            pi: maps,
            c: c.clone(),
            unit,
            signature,
        });
        let rep = cp.verify_axioms(TRIPLE_CHECK_LIMIT);
        if !rep.passed() {
            return input(format!(
                "crossed product axioms fail: {} associativity, {} adjoint, {} involution",
                rep.associativity_failures.len(),
                rep.adjoint_failures.len(),
                rep.involution_failures.len()
            ));
        }
        Ok(cp)
    }

    pub fn base(&self) -> &AlgRef {
        &self.base
    }

    pub fn gamma(&self) -> &Group {
        &self.gamma
    }

    pub fn kernel(&self) -> &[usize] {
        &self.kernel
    }

    pub fn twist(&self) -> &Cochain {
        &self.c
    }

    /// `π_γ` as a table of phased labels, indexed by `γ` then by base label.
    pub fn pi_table(&self) -> &[Vec<(usize, Phase)>] {
        &self.pi
    }

    /// `π_γ(b) = ζ^p·b'` as `(b', p)`.
    pub fn pi(&self, x: usize, b: usize) -> (usize, Phase) {
        self.pi[x][b]
    }

    /// Label of `b·v_k`, or `None` when `k` is outside the kernel.
    pub fn index(&self, b: usize, k: usize) -> Option<usize> {
        self.position[k].map(|p| p * self.base.dim() + b)
    }

    /// `(b, k)` for a label.
    pub fn entry(&self, l: usize) -> (usize, usize) {
        let d = self.base.dim();
        (l % d, self.kernel[l / d])
    }

    /// The canonical unitary `v_k = Σ_{unit} e·v_k`.
    pub fn v<S: Scalar>(self: &Arc<Self>, k: usize) -> Result<Element<S>> {
        let pos = match self.position.get(k).copied().flatten() {
            Some(p) => p,
            None => return input(format!("{k} is not in the kernel")),
        };
        let alg: AlgRef = self.clone();
        let d = self.base.dim();
        Ok(Element::from_phases(&alg, self.unit.iter().map(|&b| (pos * d + b, Phase::ZERO))))
    }

    /// Embeds a base element as `b·v_e`.
    pub fn embed<S: Scalar>(self: &Arc<Self>, b: &Element<S>) -> Result<Element<S>> {
        if !crate::algebra::same_algebra(b.algebra(), &self.base) {
            return input("element does not lie in the base algebra");
        }
        let alg: AlgRef = self.clone();
        Element::from_terms(&alg, b.terms().iter().map(|(&l, c)| (l, c.clone())))
    }

    pub fn verify_axioms(&self, limit: usize) -> AxiomReport {
        let d = self.dim();
        let mut r = AxiomReport::default();
        for a in 0..d {
            let (s, p) = self.adjoint(a);
            let (t, q) = self.adjoint(s);
            if t != a || !(p - q).is_zero() {
                r.involution_failures.push(a);
            }
            let ad = self.adjoint(a);
            for b in 0..d {
                // (ab)* = b* a*
                let left = self.product(a, b).map(|(x, p)| {
                    let (y, q) = self.adjoint(x);
                    (y, q - p)
                });
                let bd = self.adjoint(b);
                let right = self.product(bd.0, ad.0).map(|(x, p)| (x, p + bd.1 + ad.1));
                if left != right && r.adjoint_failures.len() < 64 {
                    r.adjoint_failures.push((a, b));
                }
            }
        }
        let triple = |r: &mut AxiomReport, a: usize, b: usize, c: usize| {
            r.triples_checked += 1;
            let left = self.product(a, b).and_then(|(x, p)| self.product(x, c).map(|(y, q)| (y, p + q)));
            let right = self.product(b, c).and_then(|(x, p)| self.product(a, x).map(|(y, q)| (y, p + q)));
            if left != right && r.associativity_failures.len() < 64 {
                r.associativity_failures.push((a, b, c));
            }
        };
        r.exhaustive = d.saturating_mul(d).saturating_mul(d) <= limit;
        if r.exhaustive {
            for a in 0..d {
                for b in 0..d {
                    for c in 0..d {
                        triple(&mut r, a, b, c);
                    }
                }
            }
        } else {
            // unit-supported labels times everything, with each of the three slots
            let special: Vec<usize> = self
                .kernel
                .iter()
                .flat_map(|&k| self.unit.iter().map(move |&u| (u, k)))
                .filter_map(|(u, k)| self.index(u, k))
                .collect();
            for &s in &special {
                for a in 0..d {
                    for &t in &special {
                        triple(&mut r, s, a, t);
                        triple(&mut r, a, s, t);
                        triple(&mut r, s, t, a);
                    }
                }
            }
        }
        r
    }
}

impl BasisAlgebra for TwistedCrossedProduct {
    fn dim(&self) -> usize {
        self.base.dim() * self.kernel.len()
    }

    fn product(&self, a: usize, b: usize) -> Option<(usize, Phase)> {
        let (x, k) = self.entry(a);
        let (y, l) = self.entry(b);
        let (y2, p) = self.pi[k][y];
        let (z, q) = self.base.product(x, y2)?;
        let kl = self.gamma.mul(k, l);
        Some((self.index(z, kl).expect("kernel is closed"), p + q - self.c.get(&[k, l])))
    }

    fn adjoint(&self, a: usize) -> (usize, Phase) {
        let (x, k) = self.entry(a);
        let ki = self.gamma.inv(k);
        let (xs, p) = self.base.adjoint(x);
        let (y, q) = self.pi[ki][xs];
        (self.index(y, ki).expect("kernel is closed"), self.c.get(&[k, ki]) + p + q)
    }

    fn unit_support(&self) -> &[usize] {
        &self.unit
    }

    fn label(&self, a: usize) -> String {
        let (x, k) = self.entry(a);
        format!("{}·v{}", self.base.label(x), k)
    }

    fn signature(&self) -> &str {
        &self.signature
    }

    fn as_any(&self) -> &dyn std::any::Any {
        self
    }
}
