//! Rokhlin partitions at a finite stage and the averaging, trivialization and
//! matrix-unit formulas built on them.

use rand::seq::SliceRandom;
use rand::Rng;
use serde::Serialize;
use smallvec::SmallVec;

use super::{is_alpha_cocycle, push_limited, AnomalousAction};
use crate::algebra::maps::{AlgebraMap, HomReport, PhasedImage};
use crate::algebra::{multi_matrix, same_algebra, AlgRef, BasisAlgebra, Element, MultiMatrixAlgebra, Scalar};
use crate::error::{input, Error, Result};
use crate::groups::GroupTable;
use crate::phase::Phase;

/// Projections `p_g` indexed by group elements, plus elements they must commute with.
#[derive(Clone, Debug)]
pub struct RokhlinPartition<S: Scalar> {
    pub p: Vec<Element<S>>,
    pub context: Vec<Element<S>>,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct RokhlinReport {
    pub sums_to_unit: bool,
    pub non_projections: Vec<usize>,
    pub non_orthogonal: Vec<(usize, usize)>,
    /// `(g, h)` with `α_g(p_h) ≠ p_{gh}`.
    pub equivariance_failures: Vec<(usize, usize)>,
    /// `(g, i)` with `p_g` not commuting with context element `i`.
    pub commutation_failures: Vec<(usize, usize)>,
    pub context_size: usize,
}

impl RokhlinReport {
    pub fn passed(&self) -> bool {
        self.sums_to_unit
            && self.non_projections.is_empty()
            && self.non_orthogonal.is_empty()
            && self.equivariance_failures.is_empty()
            && self.commutation_failures.is_empty()
    }

    fn partition_ok(&self) -> bool {
        self.sums_to_unit && self.non_projections.is_empty() && self.non_orthogonal.is_empty()
    }
}

pub fn verify_rokhlin_partition<S: Scalar>(a: &AnomalousAction<S>, p: &RokhlinPartition<S>) -> Result<RokhlinReport> {
    let g = &a.group;
    if p.p.len() != g.order() {
        return input("a Rokhlin partition needs one projection per group element");
    }
    if p.p.iter().chain(&p.context).any(|x| !same_algebra(x.algebra(), &a.algebra)) {
        return input("partition elements must lie in the action's algebra");
    }
    let mut r = RokhlinReport { context_size: p.context.len(), ..RokhlinReport::default() };
    let mut sum = Element::zero(&a.algebra);
    for x in &p.p {
        sum = sum.add(x)?;
    }
    r.sums_to_unit = sum.equals(&Element::one(&a.algebra));
    for (i, x) in p.p.iter().enumerate() {
        if !x.is_projection() {
            r.non_projections.push(i);
        }
        for j in i + 1..p.p.len() {
            if !x.mul(&p.p[j])?.is_zero() {
                push_limited(&mut r.non_orthogonal, (i, j));
            }
        }
    }
    for x in g.elements() {
        for y in g.elements() {
            if !a.alpha[x].apply(&p.p[y])?.equals(&p.p[g.mul(x, y)]) {
                push_limited(&mut r.equivariance_failures, (x, y));
            }
        }
    }
    for (x, px) in p.p.iter().enumerate() {
        for (i, c) in p.context.iter().enumerate() {
            if !px.commutes_with(c)? {
                push_limited(&mut r.commutation_failures, (x, i));
            }
        }
    }
    Ok(r)
}

#[derive(Clone, Debug, Serialize)]
pub struct AverageReport {
    pub homomorphism: HomReport,
    /// Whether every `p_g` commutes with every `α_g(ψ(b))`.
    pub commutation_hypothesis: bool,
    pub u_trivial: bool,
    /// Number of `(k, label)` with `α_k(φ(b)) ≠ φ(b)`.
    pub defect_count: usize,
    pub defects: Vec<(usize, usize)>,
    pub defect_max_abs: f64,
}

impl AverageReport {
    pub fn equivariant(&self) -> bool {
        self.defect_count == 0
    }
}

/// `φ(m) = Σ_g α_g(ψ(m)) p_g`. The equivariance defect `α_k φ(m) − φ(m)` is reported
/// per basis label; it must vanish when `u ≡ 1` and the partition is valid.
pub fn rokhlin_average<S: Scalar>(
    a: &AnomalousAction<S>,
    p: &RokhlinPartition<S>,
    psi: &AlgebraMap<S>,
) -> Result<(AlgebraMap<S>, AverageReport)> {
    if !same_algebra(psi.codomain(), &a.algebra) {
        return input("ψ must map into the action's algebra");
    }
    if !psi.is_star_homomorphism().is_homomorphism() {
        return input("ψ is not a unital *-homomorphism");
    }
    let rep = verify_rokhlin_partition(a, p)?;
    if !rep.partition_ok() || !rep.equivariance_failures.is_empty() {
        return input("the Rokhlin partition does not verify");
    }
    let dom = psi.domain().clone();
    let mut commutation = true;
    let mut images = Vec::with_capacity(dom.dim());
    for l in 0..dom.dim() {
        let m = psi.image(l);
        let mut acc = Element::zero(&a.algebra);
        for (x, px) in p.p.iter().enumerate() {
            let moved = a.alpha[x].apply(&m)?;
            if commutation && !moved.commutes_with(px)? {
                commutation = false;
            }
            acc = acc.add(&moved.mul(px)?)?;
        }
        images.push(acc);
    }
    let phi = AlgebraMap::from_images(&dom, &a.algebra, images)?;
    let mut report = AverageReport {
        homomorphism: phi.is_star_homomorphism(),
        commutation_hypothesis: commutation,
        u_trivial: a.u_is_trivial(),
        defect_count: 0,
        defects: vec![],
        defect_max_abs: 0.0,
    };
    for k in a.group.elements() {
        for l in 0..dom.dim() {
            let img = phi.image(l);
            let d = a.alpha[k].apply(&img)?.sub(&img)?;
            if !d.is_zero() {
                report.defect_count += 1;
                report.defect_max_abs = report.defect_max_abs.max(d.max_distance(&Element::<S>::zero(&a.algebra)));
                push_limited(&mut report.defects, (k, l));
            }
        }
    }
    if commutation && !report.homomorphism.is_homomorphism() {
        return Err(Error::Invariant("averaged map is not a *-homomorphism".into()));
    }
    if commutation && report.u_trivial && report.defect_count > 0 {
        return Err(Error::Invariant("averaged map of a genuine action is not equivariant".into()));
    }
    Ok((phi, report))
}

/// `u = Σ_g v_g p_g`, which satisfies `u α_g(u*) = v_g` for an α-cocycle `v`
/// commuting with the partition.
pub fn trivialize_cocycle<S: Scalar>(
    a: &AnomalousAction<S>,
    p: &RokhlinPartition<S>,
    v: &[Element<S>],
) -> Result<Element<S>> {
    if !is_alpha_cocycle(a, v)? {
        return input("v is not an α-cocycle");
    }
    let rep = verify_rokhlin_partition(a, p)?;
    if !rep.partition_ok() || !rep.equivariance_failures.is_empty() {
        return input("the Rokhlin partition does not verify");
    }
    for (g, vg) in v.iter().enumerate() {
        for (h, ph) in p.p.iter().enumerate() {
            if !vg.commutes_with(ph)? {
                return input(format!("v_{g} does not commute with p_{h}"));
            }
        }
    }
    let mut u = Element::zero(&a.algebra);
    for (vg, pg) in v.iter().zip(&p.p) {
        u = u.add(&vg.mul(pg)?)?;
    }
    let us = u.adjoint();
    for (g, vg) in v.iter().enumerate() {
        if !u.mul(&a.alpha[g].apply(&us)?)?.equals(vg) {
            return Err(Error::Invariant(format!("u α_{g}(u*) differs from v_{g}")));
        }
    }
    if !u.is_unitary() {
        return Err(Error::Invariant("trivializing element is not unitary".into()));
    }
    Ok(u)
}

fn check_matrix_units<S: Scalar>(group: &GroupTable, e: &[Element<S>]) -> Result<AlgRef> {
    let n = group.order();
    if e.len() != n * n || n == 0 {
        return input(format!("a matrix-unit family for a group of order {n} has {} entries", n * n));
    }
    let alg = e[0].algebra().clone();
    let at = |g: usize, h: usize| &e[g * n + h];
    let mut diag = Element::zero(&alg);
    for g in 0..n {
        diag = diag.add(at(g, g))?;
        for h in 0..n {
            if !at(g, h).adjoint().equals(at(h, g)) {
                return input(format!("e({g},{h})* ≠ e({h},{g})"));
            }
            for k in 0..n {
                for l in 0..n {
                    let prod = at(g, h).mul(at(k, l))?;
                    let ok = if h == k { prod.equals(at(g, l)) } else { prod.is_zero() };
                    if !ok {
                        return input(format!("e({g},{h})·e({k},{l}) breaks the matrix-unit relations"));
                    }
                }
            }
        }
    }
    if !diag.equals(&Element::one(&alg)) {
        return input("diagonal matrix units do not sum to the unit");
    }
    Ok(alg)
}

/// `v_g = Σ_h e_{gh,h}` for matrix units `e` indexed by `G × G` at `g·|G| + h`.
pub fn permutation_unitary_from_units<S: Scalar>(group: &GroupTable, e: &[Element<S>]) -> Result<Vec<Element<S>>> {
    let alg = check_matrix_units(group, e)?;
    let n = group.order();
    let mut v = Vec::with_capacity(n);
    for g in group.elements() {
        let mut acc = Element::zero(&alg);
        for h in group.elements() {
            acc = acc.add(&e[group.mul(g, h) * n + h])?;
        }
        v.push(acc);
    }
    for g in group.elements() {
        if !v[g].is_unitary() {
            return Err(Error::Invariant(format!("v_{g} is not unitary")));
        }
        for h in group.elements() {
            if !v[g].mul(&v[h])?.equals(&v[group.mul(g, h)]) {
                return Err(Error::Invariant(format!("v_{g} v_{h} ≠ v_{}", group.mul(g, h))));
            }
        }
    }
    Ok(v)
}

/// `f_{g,h} = u* e_{g,h} u`, checked to satisfy `α_k(f_{g,h}) = f_{kg,kh}`.
pub fn twist_matrix_units<S: Scalar>(
    a: &AnomalousAction<S>,
    e: &[Element<S>],
    u: &Element<S>,
) -> Result<Vec<Element<S>>> {
    let g = &a.group;
    let n = g.order();
    check_matrix_units(g, e)?;
    for (i, x) in e.iter().enumerate() {
        for k in g.elements() {
            if !a.alpha[k].apply(x)?.equals(x) {
                return input(format!("e({},{}) is not fixed by α_{k}", i / n, i % n));
            }
        }
    }
    let v = permutation_unitary_from_units(g, e)?;
    let us = u.adjoint();
    for k in g.elements() {
        if !u.mul(&a.alpha[k].apply(&us)?)?.equals(&v[k]) {
            return input(format!("u α_{k}(u*) differs from the permutation unitary v_{k}"));
        }
    }
    let f = e.iter().map(|x| us.mul(x)?.mul(u)).collect::<Result<Vec<_>>>()?;
    for k in g.elements() {
        for x in g.elements() {
            for y in g.elements() {
                let moved = a.alpha[k].apply(&f[x * n + y])?;
                if !moved.equals(&f[g.mul(k, x) * n + g.mul(k, y)]) {
                    return Err(Error::Invariant(format!("α_{k}(f({x},{y})) ≠ f({},{})", g.mul(k, x), g.mul(k, y))));
                }
            }
        }
    }
    Ok(f)
}

/// A random unital *-homomorphism from `⊕_{i<m} M_d` into a multi-matrix algebra whose
/// block sizes are multiples of `d`: each block is cut into `d`-row slots, each slot is
/// assigned a random summand, and rows are scrambled by a random permutation with phases.
pub fn random_unital_embedding<S: Scalar, R: Rng>(
    target: &MultiMatrixAlgebra,
    target_ref: &AlgRef,
    m: usize,
    d: usize,
    phase_den: i64,
    rng: &mut R,
) -> Result<AlgebraMap<S>> {
    if m == 0 || d == 0 {
        return input("embedding needs a nonzero domain");
    }
    if let Some(s) = (0..target.block_count()).find(|&s| !target.block_dim(s).is_multiple_of(d)) {
        return input(format!("block {s} has dimension {} which is not a multiple of {d}", target.block_dim(s)));
    }
    let domain = MultiMatrixAlgebra::from_dims(&vec![d; m])?;
    let dom_ref = multi_matrix(domain.clone());
    let mut images: Vec<PhasedImage> = vec![SmallVec::new(); domain.dim()];
    for s in 0..target.block_count() {
        let big = target.block_dim(s);
        let mut perm: Vec<usize> = (0..big).collect();
        perm.shuffle(rng);
        let phases: Vec<Phase> =
            (0..big).map(|_| Phase::new(rng.gen_range(0..phase_den.max(1)), phase_den.max(1))).collect();
        for slot in 0..big / d {
            let i = rng.gen_range(0..m);
            for a in 0..d {
                for b in 0..d {
                    let (ra, rb) = (perm[slot * d + a], perm[slot * d + b]);
                    images[domain.index(i, a, b)].push((target.index(s, ra, rb), phases[ra] - phases[rb]));
                }
            }
        }
    }
    AlgebraMap::from_phased(&dom_ref, target_ref, images)
}
