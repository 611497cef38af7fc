//! The AF tower `A_n = C(G) ⊗ B(l²G)^{⊗(n-1)}` with an ω-anomalous action at every stage.
//!
//! `A_n` is stored as `⊕_{k∈G} M_{q^{n-1}}` (`q = |G|`). The matrix unit
//! `δ_k ⊗ e_{x_1,y_1} ⊗ … ⊗ e_{x_{n-1},y_{n-1}}` sits in block `k` at row
//! `Σ x_i q^{i-1}` and column `Σ y_i q^{i-1}`, so `x_1` is the least significant digit.
//!
//! * `φ_n(δ_k ⊗ T) = 1 ⊗ e_{k,k} ⊗ T`, i.e. `(k; R; C) ↦ Σ_r (r; k + qR; k + qC)`.
//! * `θ'_n(g)` translates every index by `g`.
//! * `θ_n(g) = d_n(g) θ'_n(g)` with the diagonal phase `d_n` evaluated on the translated label.
//! * `u_n(g,h) = φ_{1,n}(u_1(g,h))`, the diagonal with phase `ω(x_{n-1}⁻¹, g, h)`
//!   (or `ω(k⁻¹, g, h)` on `A_1`).

use rand::seq::SliceRandom;
use rand::Rng;
use serde::Serialize;
use smallvec::SmallVec;

use crate::actions::{
    extract_anomaly, validate_action, verify_rokhlin_partition, AnomalousAction, RokhlinPartition, RokhlinReport,
};
use crate::algebra::maps::{AlgebraMap, HomReport, PhasedImage};
use crate::algebra::{multi_matrix, AlgRef, BasisAlgebra, Block, Element, MultiMatrixAlgebra, Scalar};
use crate::cohomology::{cocycle_violation, Cochain};
use crate::error::{input, Result};
use crate::groups::{Group, GroupTable};
use crate::k_theory::{k0_of_hom, K0Map};
use crate::phase::Phase;

pub const DEFAULT_BASIS_BUDGET: usize = 100_000;

#[derive(Clone, Debug)]
pub struct AfStage<S: Scalar> {
    pub n: usize,
    pub mm: MultiMatrixAlgebra,
    pub action: AnomalousAction<S>,
    pub rokhlin: RokhlinPartition<S>,
}

#[derive(Clone, Debug)]
pub struct AfTower<S: Scalar> {
    pub group: Group,
    pub omega: Cochain,
    pub depth: usize,
    pub stages: Vec<AfStage<S>>,
    /// `φ_n : A_n → A_{n+1}` at index `n - 1`.
    pub connect: Vec<AlgebraMap<S>>,
}

/// Digits `x_1, …, x_{len}` of a row or column index, least significant first.
pub fn digits(mut r: usize, q: usize, len: usize) -> Vec<usize> {
    (0..len)
        .map(|_| {
            let d = r % q;
            r /= q;
            d
        })
        .collect()
}

fn undigits(xs: &[usize], q: usize) -> usize {
    xs.iter().rev().fold(0, |acc, &x| acc * q + x)
}

impl<S: Scalar> AfStage<S> {
    pub fn q(&self) -> usize {
        self.action.group.order()
    }

    pub fn label(&self, k: usize, xs: &[usize], ys: &[usize]) -> usize {
        let q = self.q();
        self.mm.index(k, undigits(xs, q), undigits(ys, q))
    }

    /// `(k, x_1..x_{n-1}, y_1..y_{n-1})`.
    pub fn decode(&self, l: usize) -> (usize, Vec<usize>, Vec<usize>) {
        let (k, r, c) = self.mm.entry(l);
        (k, digits(r, self.q(), self.n - 1), digits(c, self.q(), self.n - 1))
    }

    pub fn algebra(&self) -> &AlgRef {
        &self.action.algebra
    }

    /// A random block-diagonal monomial unitary whose last tensor factor is diagonal,
    /// so that it commutes with every `u_n(g,h)` and every `α_g` of it does too.
    pub fn random_compatible_unitary<R: Rng>(&self, phase_den: i64, rng: &mut R) -> Element<S> {
        let q = self.q();
        let rows = self.mm.block_dim(0);
        let inner = rows / q.max(1);
        let mut terms = Vec::with_capacity(q * rows);
        for k in 0..q {
            let mut perm: Vec<usize> = (0..rows).collect();
            if self.n >= 2 {
                // permute the lower digits inside each fixed value of x_{n-1}
                for top in 0..q {
                    let mut lower: Vec<usize> = (0..inner).collect();
                    lower.shuffle(rng);
                    for (i, &j) in lower.iter().enumerate() {
                        perm[top * inner + i] = top * inner + j;
                    }
                }
            }
            for (c, &r) in perm.iter().enumerate() {
                let p = Phase::new(rng.gen_range(0..phase_den.max(1)), phase_den.max(1));
                terms.push((self.mm.index(k, r, c), p));
            }
        }
        Element::from_phases(self.algebra(), terms)
    }
}

/// The closed form of the `d_n` recursion:
/// `d_n(g)(k; x; y) = P(x) − P(y)` with `P(x) = Σ_{m ≡ n (2), 2 ≤ m ≤ n} F(x_{m-1}, x_{m-2}) − [m ≥ 3] F(x_{m-3}, x_{m-2})`,
/// `F(a, b) = ω(a⁻¹, g, g⁻¹b)` and `x_0 = k`.
fn d_phase(g: &GroupTable, w: &Cochain, n: usize, x: usize, k: usize, xs: &[usize], ys: &[usize]) -> Phase {
    let ginv = g.inv(x);
    let f = |a: usize, b: usize| w.get(&[g.inv(a), x, g.mul(ginv, b)]);
    let digit = |v: &[usize], i: usize| if i == 0 { k } else { v[i - 1] };
    let side = |v: &[usize]| {
        let mut p = Phase::ZERO;
        let mut m = n;
        while m >= 2 {
            p += f(digit(v, m - 1), digit(v, m - 2));
            if m >= 3 {
                p = p - f(digit(v, m - 3), digit(v, m - 2));
            }
            m -= 2;
        }
        p
    };
    side(xs) - side(ys)
}

/// The `d_n(g)` phase on `(k; xs; ys)` by the two-step recursion itself
/// (`d_1 = id`, the explicit `d_2`, and `d_n` in terms of `d_{n-2}` with `x_0 = y_0 = k`).
pub fn d_n_phase(
    g: &GroupTable,
    w: &Cochain,
    n: usize,
    x: usize,
    k: usize,
    xs: &[usize],
    ys: &[usize],
) -> Result<Phase> {
    if n == 0 || xs.len() != n - 1 || ys.len() != n - 1 {
        return input(format!("stage {n} labels carry {} row and column digits", n.saturating_sub(1)));
    }
    let om = |a: usize, b: usize, c: usize| w.get(&[a, b, c]);
    let gi = g.inv(x);
    Ok(match n {
        1 => Phase::ZERO,
        2 => om(g.inv(xs[0]), x, g.mul(gi, k)) - om(g.inv(ys[0]), x, g.mul(gi, k)),
        _ => {
            let at = |v: &[usize], i: usize| if i == 0 { k } else { v[i - 1] };
            let (xa, xb, xc) = (at(xs, n - 1), at(xs, n - 2), at(xs, n - 3));
            let (ya, yb, yc) = (at(ys, n - 1), at(ys, n - 2), at(ys, n - 3));
            let factor =
                om(g.inv(xa), x, g.mul(gi, xb)) - om(g.inv(xc), x, g.mul(gi, xb)) - om(g.inv(ya), x, g.mul(gi, yb))
                    + om(g.inv(yc), x, g.mul(gi, yb));
            factor + d_n_phase(g, w, n - 2, x, k, &xs[..n - 3], &ys[..n - 3])?
        }
    })
}

fn stage_algebra(q: usize, n: usize) -> MultiMatrixAlgebra {
    let d = q.pow(n as u32 - 1);
    MultiMatrixAlgebra::new((0..q).map(|k| Block { label: format!("δ{k}"), dim: d }).collect()).expect("positive dims")
}

/// Largest stage dimension `|G|^{2N-1}`.
pub fn tower_dimension(q: usize, depth: usize) -> Option<usize> {
    q.checked_pow(2 * depth as u32 - 1)
}

pub fn build_af_tower<S: Scalar>(g: &Group, w: &Cochain, depth: usize) -> Result<AfTower<S>> {
    build_af_tower_with_budget(g, w, depth, DEFAULT_BASIS_BUDGET)
}

pub fn build_af_tower_with_budget<S: Scalar>(
    g: &Group,
    w: &Cochain,
    depth: usize,
    budget: usize,
) -> Result<AfTower<S>> {
    if depth == 0 {
        return input("tower depth must be at least 1");
    }
    if w.degree() != 3 || w.group().product_table() != g.product_table() {
        return input("the tower needs a 3-cochain on the given group");
    }
    if let Some(t) = w.normalization_violation() {
        return input(format!("cocycle is not normalized at {:?}", t.as_slice()));
    }
    if let Some(t) = cocycle_violation(w)? {
        return input(format!("cochain fails the cocycle identity at {:?}", t.as_slice()));
    }
    let q = g.order();
    match tower_dimension(q, depth) {
        Some(d) if d <= budget => {}
        _ => {
            return input(format!(
                "depth {depth} over a group of order {q} exceeds the basis budget of {budget} labels"
            ))
        }
    }
    let mut stages: Vec<AfStage<S>> = Vec::with_capacity(depth);
    for n in 1..=depth {
        stages.push(build_stage(g, w, n)?);
    }
    let mut connect = Vec::with_capacity(depth.saturating_sub(1));
    for n in 1..depth {
        connect.push(connecting_map(&stages[n - 1], &stages[n])?);
    }
    Ok(AfTower { group: g.clone(), omega: w.clone(), depth, stages, connect })
}

fn build_stage<S: Scalar>(g: &Group, w: &Cochain, n: usize) -> Result<AfStage<S>> {
    let q = g.order();
    let mm = stage_algebra(q, n);
    let alg = multi_matrix(mm.clone());
    let rows = mm.block_dim(0);
    let mut alpha = Vec::with_capacity(q);
    for x in g.elements() {
        let translate = |r: usize| undigits(&digits(r, q, n - 1).iter().map(|&d| g.mul(x, d)).collect::<Vec<_>>(), q);
        let moved: Vec<usize> = (0..rows).map(translate).collect();
        let mut images: Vec<PhasedImage> = Vec::with_capacity(mm.dim());
        for l in 0..mm.dim() {
            let (k, r, c) = mm.entry(l);
            let (k2, r2, c2) = (g.mul(x, k), moved[r], moved[c]);
            let xs = digits(r2, q, n - 1);
            let ys = digits(c2, q, n - 1);
            let p = d_phase(g, w, n, x, k2, &xs, &ys);
            images.push(SmallVec::from_elem((mm.index(k2, r2, c2), p), 1));
        }
        alpha.push(AlgebraMap::from_phased(&alg, &alg, images)?);
    }
    let mut u = Vec::with_capacity(q * q);
    for x in g.elements() {
        for y in g.elements() {
            // x_{n-1} is the most significant digit of the row
            let top = |k: usize, r: usize| if n == 1 { k } else { r / (rows / q) };
            let terms = (0..q).flat_map(|k| (0..rows).map(move |r| (k, r)));
            let terms: Vec<(usize, Phase)> =
                terms.map(|(k, r)| (mm.index(k, r, r), w.get(&[g.inv(top(k, r)), x, y]))).collect();
            u.push(Element::from_phases(&alg, terms));
        }
    }
    let action = AnomalousAction::new(g.clone(), alg.clone(), alpha, u)?;
    let p = (0..q).map(|x| Element::from_phases(&alg, (0..rows).map(|r| (mm.index(x, r, r), Phase::ZERO)))).collect();
    let mut context = Vec::new();
    for k in 0..q {
        for r in 0..rows {
            context.push(Element::basis(&alg, mm.index(k, r, 0)));
            if r > 0 {
                context.push(Element::basis(&alg, mm.index(k, 0, r)));
            }
        }
    }
    Ok(AfStage { n, mm, action, rokhlin: RokhlinPartition { p, context } })
}

fn connecting_map<S: Scalar>(from: &AfStage<S>, to: &AfStage<S>) -> Result<AlgebraMap<S>> {
    let q = from.q();
    let images = (0..from.mm.dim())
        .map(|l| {
            let (k, r, c) = from.mm.entry(l);
            (0..q).map(|s| (to.mm.index(s, k + q * r, k + q * c), Phase::ZERO)).collect()
        })
        .collect();
    AlgebraMap::from_phased(from.algebra(), to.algebra(), images)
}

#[derive(Clone, Debug, Serialize)]
pub struct StageReport {
    pub stage: usize,
    pub dimension: usize,
    pub non_automorphisms: Vec<usize>,
    pub normalization_failures: Vec<(usize, usize)>,
    /// Condition (1): `(g, h)` with `θ_n(g)θ_n(h) ≠ Ad(u_n(g,h))θ_n(gh)`.
    pub condition1_failures: Vec<(usize, usize)>,
    /// Condition (2): triples where the extracted anomaly differs from ω.
    pub condition2_failures: Vec<(usize, usize, usize)>,
    pub anomaly_error: Option<String>,
    /// Condition (3): `(g, h)` with `φ_n(u_n(g,h)) ≠ u_{n+1}(g,h)`.
    pub condition3_failures: Vec<(usize, usize)>,
    /// Condition (4): `g` with `φ_n θ_n(g) ≠ θ_{n+1}(g) φ_n`.
    pub condition4_failures: Vec<usize>,
    /// `(g, label)` where θ disagrees with the independent `d_n` recursion.
    pub recursion_mismatches: Vec<(usize, usize)>,
    pub rokhlin: RokhlinReport,
    pub connecting_map: Option<HomReport>,
    pub connecting_k0: Option<K0Map>,
    pub bratteli_complete: Option<bool>,
    /// For ω = 0: `θ_n = θ'_n` and `u_n = 1`.
    pub untwisted: Option<bool>,
}

impl StageReport {
    pub fn passed(&self) -> bool {
        self.non_automorphisms.is_empty()
            && self.normalization_failures.is_empty()
            && self.condition1_failures.is_empty()
            && self.condition2_failures.is_empty()
            && self.anomaly_error.is_none()
            && self.condition3_failures.is_empty()
            && self.condition4_failures.is_empty()
            && self.recursion_mismatches.is_empty()
            && self.rokhlin.passed()
            && self.connecting_map.as_ref().is_none_or(|h| h.is_homomorphism() && h.injective == Some(true))
            && self.bratteli_complete != Some(false)
            && self.untwisted != Some(false)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct TowerReport {
    pub group: String,
    pub depth: usize,
    pub stages: Vec<StageReport>,
}

impl TowerReport {
    pub fn passed(&self) -> bool {
        self.stages.iter().all(StageReport::passed)
    }

    pub fn failing_stages(&self) -> Vec<usize> {
        self.stages.iter().filter(|s| !s.passed()).map(|s| s.stage).collect()
    }
}

/// `θ'_n(g)` on its own.
pub fn untwisted_map<S: Scalar>(stage: &AfStage<S>, x: usize) -> Result<AlgebraMap<S>> {
    let g = &stage.action.group;
    let q = g.order();
    let images = (0..stage.mm.dim())
        .map(|l| {
            let (k, xs, ys) = stage.decode(l);
            let tx: Vec<usize> = xs.iter().map(|&d| g.mul(x, d)).collect();
            let ty: Vec<usize> = ys.iter().map(|&d| g.mul(x, d)).collect();
            SmallVec::from_elem((stage.label(g.mul(x, k), &tx, &ty), Phase::ZERO), 1)
        })
        .collect();
    let _ = q;
    AlgebraMap::from_phased(stage.algebra(), stage.algebra(), images)
}

pub fn verify_tower<S: Scalar>(t: &AfTower<S>) -> Result<TowerReport> {
    let g = &t.group;
    let mut stages = Vec::with_capacity(t.depth);
    for (i, st) in t.stages.iter().enumerate() {
        let a = &st.action;
        let v = validate_action(a)?;
        let mut rep = StageReport {
            stage: st.n,
            dimension: st.mm.dim(),
            non_automorphisms: v.non_automorphisms,
            normalization_failures: v.normalization_failures,
            condition1_failures: v.composition_failures,
            condition2_failures: vec![],
            anomaly_error: None,
            condition3_failures: vec![],
            condition4_failures: vec![],
            recursion_mismatches: vec![],
            rokhlin: verify_rokhlin_partition(a, &st.rokhlin)?,
            connecting_map: None,
            connecting_k0: None,
            bratteli_complete: None,
            untwisted: None,
        };
        match extract_anomaly(a) {
            Ok(w) => {
                rep.condition2_failures =
                    w.pointwise_differences(&t.omega).into_iter().map(|t| (t[0], t[1], t[2])).collect()
            }
            Err(e) => rep.anomaly_error = Some(e.to_string()),
        }
        if !v.non_scalar_associators.is_empty() && rep.anomaly_error.is_none() {
            rep.anomaly_error = Some("non-scalar associators".into());
        }
        for x in g.elements() {
            let theta = &a.alpha[x];
            for l in 0..st.mm.dim() {
                let img = theta.image(l);
                let (k, xs, ys) = st.decode(l);
                let tk = g.mul(x, k);
                let tx: Vec<usize> = xs.iter().map(|&d| g.mul(x, d)).collect();
                let ty: Vec<usize> = ys.iter().map(|&d| g.mul(x, d)).collect();
                let p = d_n_phase(g, &t.omega, st.n, x, tk, &tx, &ty)?;
                let expected = Element::<S>::phased(st.algebra(), st.label(tk, &tx, &ty), p);
                if !img.equals(&expected) && rep.recursion_mismatches.len() < 64 {
                    rep.recursion_mismatches.push((x, l));
                }
            }
        }
        if t.omega.is_zero() {
            let one = Element::one(st.algebra());
            let plain = g.elements().all(|x| untwisted_map(st, x).is_ok_and(|m| m.equals(&a.alpha[x])));
            rep.untwisted = Some(plain && a.u.iter().all(|u| u.equals(&one)));
        }
        if let Some(phi) = t.connect.get(i) {
            let next = &t.stages[i + 1];
            for x in g.elements() {
                for y in g.elements() {
                    if !phi.apply(a.u(x, y))?.equals(next.action.u(x, y)) {
                        rep.condition3_failures.push((x, y));
                    }
                }
                if !phi.compose(&a.alpha[x])?.equals(&next.action.alpha[x].compose(phi)?) {
                    rep.condition4_failures.push(x);
                }
            }
            rep.connecting_map = Some(phi.is_star_homomorphism());
            let k0 = k0_of_hom(phi)?;
            rep.bratteli_complete = Some(k0.matrix.iter().all(|row| row.iter().all(|&m| m == 1)));
            rep.connecting_k0 = Some(k0);
        }
        stages.push(rep);
    }
    Ok(TowerReport { group: g.name().to_string(), depth: t.depth, stages })
}

impl<S: Scalar> AfTower<S> {
    /// A copy with `θ_n(g)` multiplied by an extra phase on one label.
    pub fn with_corrupted_theta(&self, n: usize, g: usize, label: usize, delta: Phase) -> Result<AfTower<S>> {
        if n == 0 || n > self.depth {
            return input(format!("stage {n} is outside the tower"));
        }
        let mut t = self.clone();
        let st = &mut t.stages[n - 1];
        let alg = st.action.algebra.clone();
        let old = &st.action.alpha[g];
        let images =
            (0..alg.dim()).map(|l| if l == label { old.image(l).mul_phase(delta) } else { old.image(l) }).collect();
        st.action.alpha[g] = AlgebraMap::from_images(&alg, &alg, images)?;
        Ok(t)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::CycNumber;
    use crate::cohomology::{cohomology_group, standard_cyclic_cocycle};
    use crate::groups::make_named_group;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn cyclic(n: usize, j: usize) -> (Group, Cochain) {
        let w = standard_cyclic_cocycle(n, j).unwrap();
        (w.group().clone(), w)
    }

    #[test]
    fn zero_cocycle_degenerates_to_translation() {
        let (g, w) = cyclic(2, 0);
        let t = build_af_tower::<CycNumber>(&g, &w, 3).unwrap();
        for st in &t.stages {
            assert!(st.action.u_is_trivial());
            for x in g.elements() {
                assert!(untwisted_map(st, x).unwrap().equals(&st.action.alpha[x]));
            }
        }
        let r = verify_tower(&t).unwrap();
        assert!(r.passed(), "{r:?}");
        assert!(r.stages.iter().all(|s| s.untwisted == Some(true)));
    }

    #[test]
    fn c2_stage_two_u_table() {
        let (g, w) = cyclic(2, 1);
        let t = build_af_tower::<CycNumber>(&g, &w, 2).unwrap();
        let st = &t.stages[1];
        for x in g.elements() {
            for y in g.elements() {
                let u = st.action.u(x, y);
                for k in 0..2 {
                    for x1 in 0..2 {
                        let l = st.label(k, &[x1], &[x1]);
                        assert!(u.coeff(l).equals(&CycNumber::root(w.get(&[g.inv(x1), x, y]))));
                    }
                }
                assert_eq!(u.len(), 4);
            }
        }
        assert!(!t.stages[0].action.u(1, 1).equals(&Element::one(t.stages[0].algebra())));
    }

    #[test]
    fn stage_dimensions_and_budget() {
        let (g, w) = cyclic(3, 1);
        let t = build_af_tower::<CycNumber>(&g, &w, 2).unwrap();
        assert_eq!(t.stages[0].mm.dim(), 3);
        assert_eq!(t.stages[1].mm.dim(), 3 * 9);
        assert!(build_af_tower_with_budget::<CycNumber>(&g, &w, 3, 100).is_err());
        assert!(build_af_tower::<CycNumber>(&g, &w, 0).is_err());
        let mut bad = w.clone();
        bad.set(&[0, 1, 1], Phase::new(1, 3));
        assert!(build_af_tower::<CycNumber>(&g, &bad, 2).is_err());
    }

    #[test]
    fn c3_generator_depth_three_verifies() {
        let (g, w) = cyclic(3, 1);
        let t = build_af_tower::<CycNumber>(&g, &w, 3).unwrap();
        let r = verify_tower(&t).unwrap();
        assert!(r.passed(), "{:?}", r.failing_stages());
        for s in &r.stages[..2] {
            let k = s.connecting_k0.as_ref().unwrap();
            assert_eq!(k.matrix, vec![vec![1; 3]; 3]);
        }
    }

    #[test]
    fn recursion_oracle_stage_one_and_two() {
        let (g, w) = cyclic(4, 1);
        for x in g.elements() {
            assert!(d_n_phase(&g, &w, 1, x, 2, &[], &[]).unwrap().is_zero());
        }
        let p = d_n_phase(&g, &w, 2, 1, 3, &[2], &[1]).unwrap();
        let gi = g.inv(1);
        let expect = w.get(&[g.inv(2), 1, g.mul(gi, 3)]) - w.get(&[g.inv(1), 1, g.mul(gi, 3)]);
        assert_eq!(p, expect);
        assert!(d_n_phase(&g, &w, 3, 1, 0, &[0], &[0]).is_err());
    }

    #[test]
    fn closed_form_matches_recursion_at_stage_four() {
        let s3 = make_named_group("S3").unwrap();
        let h = cohomology_group(&s3, 3, 6).unwrap();
        let w = h.class_by_index(&s3, 1).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..400 {
            let x = rng.gen_range(0..6);
            let k = rng.gen_range(0..6);
            let xs: Vec<usize> = (0..3).map(|_| rng.gen_range(0..6)).collect();
            let ys: Vec<usize> = (0..3).map(|_| rng.gen_range(0..6)).collect();
            assert_eq!(d_phase(&s3, &w, 4, x, k, &xs, &ys), d_n_phase(&s3, &w, 4, x, k, &xs, &ys).unwrap());
        }
    }

    #[test]
    fn corruption_is_localized() {
        let (g, w) = cyclic(2, 1);
        let t = build_af_tower::<CycNumber>(&g, &w, 3).unwrap();
        let bad = t.with_corrupted_theta(2, 1, 5, Phase::new(1, 4)).unwrap();
        let r = verify_tower(&bad).unwrap();
        assert_eq!(r.failing_stages(), vec![2]);
        let s = &r.stages[1];
        assert!(!s.recursion_mismatches.is_empty());
        assert!(!s.non_automorphisms.is_empty() || !s.condition1_failures.is_empty() || s.anomaly_error.is_some());
    }

    #[test]
    fn compatible_unitaries_give_alpha_cocycles() {
        let (g, w) = cyclic(4, 1);
        let t = build_af_tower::<CycNumber>(&g, &w, 2).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for st in &t.stages {
            let u = st.random_compatible_unitary(4, &mut rng);
            assert!(u.is_unitary());
            let v = crate::actions::coboundary_cocycle(&st.action, &u).unwrap();
            assert!(crate::actions::is_alpha_cocycle(&st.action, &v).unwrap());
        }
    }
}
