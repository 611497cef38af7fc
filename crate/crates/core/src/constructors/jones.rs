//! Induction of a `(G, ω)` action on `B ⋊_{π,c̄} K` from a central extension
//! `K → Γ → G` with `ρ*ω = dc`.
//!
//! The automorphisms are
//! `θ_g(a·v_k) = c(ĝkĝ⁻¹, ĝ)·c̄(ĝ, k)·π_ĝ(a)·v_{ĝkĝ⁻¹}`, i.e. formally `Ad(v_ĝ)`, and
//! `u_{g,h} = c(κ, \widehat{gh})·c̄(ĝ, ĥ)·v_κ` with `κ = ĝĥ\widehat{gh}⁻¹ ∈ K`.

use std::sync::Arc;

use serde::Serialize;
use smallvec::SmallVec;

use super::crossed_product::TwistedCrossedProduct;
use crate::actions::{extract_anomaly, validate_action, ActionReport, AnomalousAction, RokhlinPartition};
use crate::algebra::{
    multi_matrix, AlgRef, AlgebraMap, BasisAlgebra, Element, MonomialMap, MultiMatrixAlgebra, Scalar,
};
use crate::cohomology::{class_equal, differential, pullback, Cochain};
use crate::error::{input, Result};
use crate::groups::{Group, Surjection};
use crate::phase::Phase;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum PrefactorConvention {
    /// `c(ĝkĝ⁻¹, ĝ)·c̄(ĝ, k)`.
    #[default]
    Conjugation,
    /// `c(ĝkĝ⁻¹, ĝ⁻¹)·c̄(ĝ, k)`, read literally off the displayed formula.
    AsPrinted,
}

/// `B(l²Γ)^{⊗f}` as `M_{|Γ|^f}` with `π_γ = Ad(λ_Γ(γ))^{⊗f}`.
/// Row digits are ordered with the first tensor factor most significant.
pub fn regular_conjugation(gamma: &Group, factors: usize) -> Result<(AlgRef, Vec<MonomialMap>)> {
    let n = gamma.order();
    if factors == 0 {
        return input("need at least one tensor factor");
    }
    let d = match (n as u64).checked_pow(factors as u32) {
        Some(d) if d <= 4096 => d as usize,
        _ => return input(format!("B(l²Γ)^⊗{factors} is too large for |Γ| = {n}")),
    };
    let mm = MultiMatrixAlgebra::full_matrix(d);
    let alg = multi_matrix(mm.clone());
    let translate = |x: usize, mut r: usize| {
        let mut out = 0;
        let mut scale = 1;
        for _ in 0..factors {
            out += gamma.mul(x, r % n) * scale;
            r /= n;
            scale *= n;
        }
        out
    };
    let maps = gamma
        .elements()
        .map(|x| {
            let moved: Vec<usize> = (0..d).map(|r| translate(x, r)).collect();
            let images = (0..d * d)
                .map(|l| {
                    let (_, i, j) = mm.entry(l);
                    (mm.index(0, moved[i], moved[j]), Phase::ZERO)
                })
                .collect();
            MonomialMap::from_single(&alg, &alg, images)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok((alg, maps))
}

#[derive(Clone, Debug)]
pub struct JonesInduced<S: Scalar> {
    pub cp: Arc<TwistedCrossedProduct>,
    pub rho: Surjection,
    pub omega: Cochain,
    pub convention: PrefactorConvention,
    pub action: AnomalousAction<S>,
}

pub fn jones_induce<S: Scalar>(
    base: &AlgRef,
    pi: &[MonomialMap],
    rho: &Surjection,
    c: &Cochain,
    omega: &Cochain,
    convention: PrefactorConvention,
) -> Result<JonesInduced<S>> {
    let gamma = &rho.source;
    let g = &rho.target;
    if omega.degree() != 3 || omega.group().product_table() != g.product_table() {
        return input("ω must be a 3-cochain on the quotient group");
    }
    if c.degree() != 2 || c.group().product_table() != gamma.product_table() {
        return input("c must be a 2-cochain on the extension group");
    }
    let dc = differential(c)?;
    let pulled = pullback(rho, omega)?;
    if let Some(t) = dc.pointwise_differences(&pulled).first() {
        return input(format!("dc differs from ρ*ω at {:?}", t.as_slice()));
    }
    let cp = TwistedCrossedProduct::new(base, gamma, &rho.kernel, pi, c)?;
    let alg: AlgRef = cp.clone();
    let bd = base.dim();
    let mut alpha = Vec::with_capacity(g.order());
    for x in g.elements() {
        let gh = rho.lift(x);
        let ghi = gamma.inv(gh);
        let images = (0..alg.dim())
            .map(|l| {
                let (b, k) = cp.entry(l);
                let k2 = gamma.mul(gamma.mul(gh, k), ghi);
                let (b2, p) = cp.pi(gh, b);
                let pref = match convention {
                    PrefactorConvention::Conjugation => c.get(&[k2, gh]),
                    PrefactorConvention::AsPrinted => c.get(&[k2, ghi]),
                } - c.get(&[gh, k]);
                let target = cp.index(b2, k2).expect("kernel is normal");
                SmallVec::from_elem((target, p + pref), 1)
            })
            .collect();
        alpha.push(AlgebraMap::from_phased(&alg, &alg, images)?);
    }
    let mut u = Vec::with_capacity(g.order() * g.order());
    for x in g.elements() {
        for y in g.elements() {
            let (a, b, ab) = (rho.lift(x), rho.lift(y), rho.lift(g.mul(x, y)));
            let kappa = gamma.mul(gamma.mul(a, b), gamma.inv(ab));
            let mu = c.get(&[kappa, ab]) - c.get(&[a, b]);
            let pos = cp.index(0, kappa).expect("κ lies in the kernel") / bd;
            u.push(Element::from_phases(&alg, base.unit_support().iter().map(|&e| (pos * bd + e, mu))));
        }
    }
    let action = AnomalousAction::new(g.clone(), alg, alpha, u)?;
    Ok(JonesInduced { cp, rho: rho.clone(), omega: omega.clone(), convention, action })
}

#[derive(Clone, Debug, Serialize)]
pub struct JonesReport {
    pub convention: PrefactorConvention,
    pub dimension: usize,
    pub kernel: Vec<usize>,
    pub action: ActionReport,
    pub anomaly_error: Option<String>,
    pub anomaly_pointwise_equal: bool,
    /// The extracted anomaly equals `−ω` pointwise (sign-convention signal).
    pub anomaly_negated: bool,
    pub anomaly_class_equal: bool,
}

impl JonesReport {
    pub fn passed(&self) -> bool {
        self.action.is_valid() && self.anomaly_error.is_none() && self.anomaly_class_equal
    }
}

pub fn verify_jones<S: Scalar>(ind: &JonesInduced<S>) -> Result<JonesReport> {
    let action = validate_action(&ind.action)?;
    let mut rep = JonesReport {
        convention: ind.convention,
        dimension: ind.cp.dim(),
        kernel: ind.cp.kernel().to_vec(),
        action,
        anomaly_error: None,
        anomaly_pointwise_equal: false,
        anomaly_negated: false,
        anomaly_class_equal: false,
    };
    if !rep.action.is_valid() {
        rep.anomaly_error = Some("the induced data is not an anomalous action".into());
        return Ok(rep);
    }
    match extract_anomaly(&ind.action) {
        Ok(w) => {
            rep.anomaly_pointwise_equal = w.pointwise_differences(&ind.omega).is_empty();
            rep.anomaly_negated = w.pointwise_differences(&ind.omega.negated()).is_empty();
            rep.anomaly_class_equal = rep.anomaly_pointwise_equal || class_equal(&w, &ind.omega)?;
        }
        Err(e) => rep.anomaly_error = Some(e.to_string()),
    }
    Ok(rep)
}

/// Number of `B(l²Γ)` factors when the base is `B(l²Γ)^{⊗f}` with the regular conjugation action.
fn regular_factor_count(cp: &TwistedCrossedProduct) -> Result<usize> {
    let n = cp.gamma().order();
    let base = cp.base();
    let Some(mm) = base.as_multi_matrix() else {
        return input("the base algebra must be B(l²Γ)^⊗f");
    };
    let d = mm.block_dim(0);
    if n < 2 {
        return input("the extension group must be nontrivial");
    }
    let mut f = 1;
    while n.pow(f as u32) < d {
        f += 1;
    }
    if mm.block_count() != 1 || n.pow(f as u32) != d {
        return input("the base algebra must be B(l²Γ)^⊗f");
    }
    let (_, reference) = regular_conjugation(cp.gamma(), f)?;
    for x in cp.gamma().elements() {
        if (0..base.dim()).any(|b| reference[x].image(b) != [cp.pi(x, b)]) {
            return input("π must be the regular conjugation action");
        }
    }
    Ok(f)
}

/// `p_g = Ad(λ_Γ(ĝ))(e_K)` in the last tensor factor, where `e_K` projects onto `l²(K)`.
///
/// The context holds the canonical unitaries `v_k` and, with more than one factor,
/// the matrix units of the first factor.
pub fn rokhlin_from_ek<S: Scalar>(ind: &JonesInduced<S>) -> Result<RokhlinPartition<S>> {
    let cp = &ind.cp;
    let f = regular_factor_count(cp)?;
    let gamma = cp.gamma();
    let n = gamma.order();
    let alg: AlgRef = cp.clone();
    let mm = cp.base().as_multi_matrix().expect("checked above").clone();
    let d = mm.block_dim(0);
    let kernel = cp.kernel();
    let mut p = Vec::with_capacity(ind.rho.target.order());
    for x in ind.rho.target.elements() {
        let gh = ind.rho.lift(x);
        let coset: Vec<usize> = kernel.iter().map(|&k| gamma.mul(gh, k)).collect();
        let terms = (0..d).filter(|r| coset.contains(&(r % n))).map(|r| (mm.index(0, r, r), Phase::ZERO));
        p.push(Element::from_phases(&alg, terms));
    }
    let mut context: Vec<Element<S>> = kernel.iter().map(|&k| cp.v(k)).collect::<Result<_>>()?;
    if f > 1 {
        let rest = d / n;
        for i in 0..n {
            for j in 0..n {
                let terms = (0..rest).map(|r| (mm.index(0, i * rest + r, j * rest + r), Phase::ZERO));
                context.push(Element::from_phases(&alg, terms));
            }
        }
    }
    Ok(RokhlinPartition { p, context })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::actions::verify_rokhlin_partition;
    use crate::algebra::CycNumber;
    use crate::cohomology::{find_trivializing_extension, standard_cyclic_cocycle};

    fn c2_setup(j: usize) -> (Cochain, crate::cohomology::TrivializingExtension) {
        let w = standard_cyclic_cocycle(2, j).unwrap();
        let ext = find_trivializing_extension(w.group(), &w, 2).unwrap().unwrap();
        (w, ext)
    }

    #[test]
    fn trivial_kernel_reproduces_pi() {
        let g = standard_cyclic_cocycle(3, 0).unwrap().group().clone();
        let rho = Surjection::identity(g.clone());
        let (b, pi) = regular_conjugation(&g, 1).unwrap();
        let w = Cochain::zero(g.clone(), 3);
        let c = Cochain::zero(g.clone(), 2);
        let ind = jones_induce::<CycNumber>(&b, &pi, &rho, &c, &w, PrefactorConvention::default()).unwrap();
        assert_eq!(ind.cp.dim(), 9);
        for x in g.elements() {
            assert_eq!(ind.action.alpha[x].as_monomial().unwrap().images(), pi[x].images());
        }
        assert!(ind.action.u_is_trivial());
        let r = verify_jones(&ind).unwrap();
        assert!(r.passed() && r.anomaly_pointwise_equal);
    }

    #[test]
    fn c2_generator_through_c4() {
        let (w, ext) = c2_setup(1);
        assert_eq!(ext.rho.source.order(), 4);
        let (b, pi) = regular_conjugation(&ext.rho.source, 1).unwrap();
        let ind = jones_induce::<CycNumber>(&b, &pi, &ext.rho, &ext.c, &w, PrefactorConvention::default()).unwrap();
        assert_eq!(ind.cp.dim(), 32);
        let r = verify_jones(&ind).unwrap();
        assert!(r.passed(), "{r:?}");
        assert!(r.anomaly_pointwise_equal);

        let part = rokhlin_from_ek(&ind).unwrap();
        let rr = verify_rokhlin_partition(&ind.action, &part).unwrap();
        assert!(rr.passed(), "{rr:?}");
        for q in &part.p {
            assert_eq!(q.len(), 2);
        }
    }

    #[test]
    fn zero_class_gives_genuine_action() {
        let (w, ext) = c2_setup(0);
        assert_eq!(ext.kernel_order, 1);
        let (b, pi) = regular_conjugation(&ext.rho.source, 1).unwrap();
        let ind = jones_induce::<CycNumber>(&b, &pi, &ext.rho, &ext.c, &w, PrefactorConvention::default()).unwrap();
        assert!(ind.action.u_is_trivial());
        assert!(verify_jones(&ind).unwrap().passed());
    }

    #[test]
    fn two_factor_variant_commutes_with_first_factor() {
        let (w, ext) = c2_setup(1);
        let (b, pi) = regular_conjugation(&ext.rho.source, 2).unwrap();
        let ind = jones_induce::<CycNumber>(&b, &pi, &ext.rho, &ext.c, &w, PrefactorConvention::default()).unwrap();
        assert_eq!(ind.cp.dim(), 2 * 256);
        let part = rokhlin_from_ek(&ind).unwrap();
        assert_eq!(part.context.len(), 2 + 16);
        assert!(verify_rokhlin_partition(&ind.action, &part).unwrap().passed());
    }

    #[test]
    fn mismatched_coboundary_rejected() {
        let (w, ext) = c2_setup(1);
        let (b, pi) = regular_conjugation(&ext.rho.source, 1).unwrap();
        let zero = Cochain::zero(ext.rho.source.clone(), 2);
        assert!(jones_induce::<CycNumber>(&b, &pi, &ext.rho, &zero, &w, PrefactorConvention::default()).is_err());
    }

    /// Every normalized `c` with `dc = ρ*ω` and values in `(1/4)ℤ/ℤ`.
    fn all_twists(ext: &crate::cohomology::TrivializingExtension) -> Vec<Cochain> {
        let gamma = &ext.rho.source;
        let free: Vec<usize> = (0..16).filter(|&i| i % 4 != 0 && i / 4 != 0).collect();
        let mut out = Vec::new();
        for code in 0..4usize.pow(free.len() as u32) {
            let mut z = Cochain::zero(gamma.clone(), 2);
            let mut r = code;
            for &i in &free {
                z.set(&[i / 4, i % 4], Phase::new((r % 4) as i64, 4));
                r /= 4;
            }
            if differential(&z).unwrap().is_zero() {
                out.push(ext.c.add(&z).unwrap());
            }
        }
        out
    }

    #[test]
    fn conventions_over_all_twists() {
        let (w, ext) = c2_setup(1);
        let (b, pi) = regular_conjugation(&ext.rho.source, 1).unwrap();
        let twists = all_twists(&ext);
        assert_eq!(twists.len(), 64);
        let mut printed_ok = 0;
        for c in &twists {
            let ind = jones_induce::<CycNumber>(&b, &pi, &ext.rho, c, &w, PrefactorConvention::Conjugation).unwrap();
            let r = verify_jones(&ind).unwrap();
            assert!(r.passed() && r.anomaly_pointwise_equal, "{r:?}");
            let ind = jones_induce::<CycNumber>(&b, &pi, &ext.rho, c, &w, PrefactorConvention::AsPrinted).unwrap();
            let r = verify_jones(&ind).unwrap();
            assert_eq!(r.convention, PrefactorConvention::AsPrinted);
            printed_ok += usize::from(r.passed());
        }
        // the literal prefactor fails on part of the solution set and the failures are reported
        assert!(printed_ok < twists.len());
    }
}
