use std::path::Path;

use anomaly_core::actions::{
    coboundary_cocycle, extract_anomaly, random_unital_embedding, rokhlin_average, tensor_actions, trivialize_cocycle,
    unitary_perturbation, validate_action, verify_rokhlin_partition, AnomalousAction,
};
use anomaly_core::algebra::{AlgRef, BasisAlgebra, Element, Scalar};
use anomaly_core::cohomology::{
    class_order, cocycle_violation, cohomology_group, find_trivializing_extension, solve_coboundary,
    standard_cyclic_cocycle, subgroup_nontriviality_scan, Cochain,
};
use anomaly_core::constructors::{
    build_af_tower_with_budget, jones_induce, regular_conjugation, rokhlin_from_ek, verify_jones, verify_tower,
    AfStage, AfTower, JonesInduced, PrefactorConvention, TwistedCrossedProduct,
};
use anomaly_core::groups::{make_named_group, NAMED_GROUPS};
use anomaly_core::io::{ActionBundle, CochainJson, TowerBundle};
use anomaly_core::k_theory::{compare_invariants, CompareMode};
use anomaly_core::{Error, Phase};
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::de::DeserializeOwned;
use serde_json::json;

use crate::args::*;
use crate::report::{emit, resolve, Report};

#[derive(Debug)]
pub enum CliError {
    /// Bad arguments, unreadable files, unwritable paths: exit 2.
    Input(String),
    /// A construction broke an identity it guarantees: recorded as a failed check.
    Internal(String),
}

impl From<Error> for CliError {
    fn from(e: Error) -> CliError {
        match e {
            Error::Invariant(m) => CliError::Internal(m),
            other => CliError::Input(other.to_string()),
        }
    }
}

type Res<T> = Result<T, CliError>;

fn bad<T>(msg: impl Into<String>) -> Res<T> {
    Err(CliError::Input(msg.into()))
}

pub struct Ctx {
    pub rng: ChaCha8Rng,
    pub budget: usize,
    pub report: Report,
}

fn read_json<T: DeserializeOwned>(path: &Path) -> Res<T> {
    let p = resolve(path);
    let text = std::fs::read_to_string(&p).map_err(|e| CliError::Input(format!("cannot read {}: {e}", p.display())))?;
    serde_json::from_str(&text).map_err(|e| CliError::Input(format!("{}: {e}", p.display())))
}

fn write_json(value: &impl serde::Serialize, path: &Path) -> Res<()> {
    emit(value, Some(path)).map_err(CliError::Input)
}

fn cyclic_order(name: &str) -> Option<usize> {
    name.strip_prefix('C').and_then(|n| n.parse().ok())
}

pub fn load_cocycle(a: &CocycleArgs) -> Res<Cochain> {
    match (&a.file, &a.group, a.class) {
        (Some(f), _, None) => {
            let w = read_json::<CochainJson>(f)?.load()?;
            if w.degree() != 3 {
                return bad(format!("expected a 3-cochain, the file holds degree {}", w.degree()));
            }
            Ok(w)
        }
        (Some(_), _, Some(_)) => bad("give either --file or --class, not both"),
        (None, Some(g), Some(j)) => {
            let group = make_named_group(g)?;
            if let Some(n) = cyclic_order(g) {
                if j >= n as u64 {
                    return bad(format!("class index {j} out of range for {g}"));
                }
                let w = standard_cyclic_cocycle(n, j as usize)?;
                return Ok(Cochain::from_values(group, 3, w.values().to_vec())?);
            }
            let h = cohomology_group(&group, 3, group.order() as u64)?;
            Ok(h.class_by_index(&group, j)?)
        }
        (None, _, _) => bad("a cocycle needs --group and --class, or --file"),
    }
}

fn load_tower<S: Scalar>(ctx: &Ctx, t: &TowerSource) -> Res<AfTower<S>> {
    if let Some(b) = &t.bundle {
        return Ok(read_json::<TowerBundle>(b)?.load()?);
    }
    let w = load_cocycle(&t.cocycle)?;
    Ok(build_af_tower_with_budget(w.group(), &w, t.depth, ctx.budget)?)
}

fn selected_stages<'a, S: Scalar>(tower: &'a AfTower<S>, t: &TowerSource) -> Res<Vec<&'a AfStage<S>>> {
    match t.stage {
        None => Ok(tower.stages.iter().collect()),
        Some(n) if n >= 1 && n <= tower.stages.len() => Ok(vec![&tower.stages[n - 1]]),
        Some(n) => bad(format!("stage {n} out of range 1..={}", tower.stages.len())),
    }
}

fn load_action<S: Scalar>(path: &Path) -> Res<AnomalousAction<S>> {
    Ok(read_json::<ActionBundle>(path)?.load()?)
}

fn describe_tower<S: Scalar>(t: &AfTower<S>) -> serde_json::Value {
    json!({
        "group": t.group.name(),
        "depth": t.depth,
        "omega": CochainJson::from_cochain(&t.omega),
        "stage_dimensions": t.stages.iter().map(|s| s.mm.dim()).collect::<Vec<_>>(),
        "stage_blocks": t.stages.iter().map(|s| s.mm.dims()).collect::<Vec<_>>(),
    })
}

fn verify_tower_checks<S: Scalar>(ctx: &mut Ctx, t: &AfTower<S>) -> Res<()> {
    let r = verify_tower(t)?;
    for s in &r.stages {
        ctx.report.check(format!("stage {}", s.stage), s.passed(), s);
    }
    Ok(())
}

/// A phased permutation unitary of a multi-matrix algebra, or of the base of a crossed product.
fn random_unitary<S: Scalar>(alg: &AlgRef, den: i64, rng: &mut ChaCha8Rng) -> Res<Element<S>> {
    let (mm, lift): (_, Box<dyn Fn(usize) -> usize>) = if let Some(mm) = alg.as_multi_matrix() {
        (mm.clone(), Box::new(|l| l))
    } else if let Some(cp) = alg.as_any().downcast_ref::<TwistedCrossedProduct>() {
        let Some(mm) = cp.base().as_multi_matrix() else {
            return bad("perturbation needs a multi-matrix base algebra");
        };
        (mm.clone(), Box::new(|l| cp.index(l, 0).expect("identity lies in the kernel")))
    } else {
        return bad("perturbation needs a multi-matrix algebra or a crossed product");
    };
    let mut terms = Vec::new();
    for s in 0..mm.block_count() {
        let mut perm: Vec<usize> = (0..mm.block_dim(s)).collect();
        perm.shuffle(rng);
        for (i, &j) in perm.iter().enumerate() {
            terms.push((lift(mm.index(s, j, i)), Phase::new(rng.gen_range(0..den), den)));
        }
    }
    Ok(Element::from_phases(alg, terms))
}

fn convention(c: ConventionArg) -> PrefactorConvention {
    match c {
        ConventionArg::Conjugation => PrefactorConvention::Conjugation,
        ConventionArg::AsPrinted => PrefactorConvention::AsPrinted,
    }
}

fn induce<S: Scalar>(ctx: &mut Ctx, j: &JonesArgs) -> Res<Option<JonesInduced<S>>> {
    let w = load_cocycle(&j.cocycle)?;
    let Some(ext) = find_trivializing_extension(w.group(), &w, j.max_kernel)? else {
        ctx.report.check("extension found", false, json!({ "max_kernel": j.max_kernel }));
        return Ok(None);
    };
    ctx.report.check("extension found", true, json!(null));
    let (base, pi) = regular_conjugation(&ext.rho.source, j.factors)?;
    if base.dim() > ctx.budget {
        return bad(format!("base algebra of dimension {} exceeds the budget {}", base.dim(), ctx.budget));
    }
    let ind = jones_induce::<S>(&base, &pi, &ext.rho, &ext.c, &w, convention(j.convention))?;
    ctx.report.set("gamma", ext.rho.source.to_json());
    ctx.report.set("rho", &ext.rho.map);
    ctx.report.set("dimension", ind.cp.dim());
    Ok(Some(ind))
}

pub fn dispatch<S: Scalar>(cmd: &Command, ctx: &mut Ctx) -> Res<()> {
    match cmd {
        Command::Group(GroupCmd::List) => {
            let groups = NAMED_GROUPS
                .iter()
                .map(|n| make_named_group(n).map(|g| json!({ "name": n, "order": g.order() })))
                .collect::<Result<Vec<_>, _>>()?;
            ctx.report.set("groups", groups);
        }
        Command::Group(GroupCmd::Show { name }) => {
            let g = make_named_group(name)?;
            ctx.report.set("group", g.to_json());
            ctx.report.set("inverses", g.elements().map(|x| g.inv(x)).collect::<Vec<_>>());
            ctx.report.set("element_orders", g.elements().map(|x| g.element_order(x)).collect::<Vec<_>>());
            ctx.report.set("abelian", g.is_abelian());
        }
        Command::Coh(c) => coh(c, ctx)?,
        Command::Tower(TowerCmd::Build { cocycle, depth, verify, bundle_out, action_out, export_stage }) => {
            let w = load_cocycle(cocycle)?;
            let t = build_af_tower_with_budget::<S>(w.group(), &w, *depth, ctx.budget)?;
            ctx.report.lap("build");
            ctx.report.set("tower", describe_tower(&t));
            if let Some(p) = bundle_out {
                write_json(&TowerBundle::from_tower(&t), p)?;
            }
            if let (Some(p), Some(n)) = (action_out, export_stage) {
                let Some(st) = n.checked_sub(1).and_then(|i| t.stages.get(i)) else {
                    return bad(format!("stage {n} out of range 1..={}", t.stages.len()));
                };
                write_json(&ActionBundle::from_action(&st.action)?, p)?;
            }
            if *verify == VerifyArg::All {
                verify_tower_checks(ctx, &t)?;
                ctx.report.lap("verify");
            }
        }
        Command::Tower(TowerCmd::Verify { bundle }) => {
            let t: AfTower<S> = read_json::<TowerBundle>(bundle)?.load()?;
            ctx.report.set("tower", describe_tower(&t));
            verify_tower_checks(ctx, &t)?;
            ctx.report.lap("verify");
        }
        Command::Jones(j) => jones::<S>(j, ctx)?,
        Command::Action(a) => action::<S>(a, ctx)?,
        Command::Rokhlin(r) => rokhlin::<S>(r, ctx)?,
    }
    Ok(())
}

fn coh(c: &CohCmd, ctx: &mut Ctx) -> Res<()> {
    match c {
        CohCmd::Compute { group, degree, coeff } => {
            let g = make_named_group(group)?;
            let m = coeff.unwrap_or(g.order() as u64);
            let h = cohomology_group(&g, *degree, m)?;
            ctx.report.set("order", h.order());
            ctx.report.set("elementary_divisors", &h.elementary_divisors);
            ctx.report
                .set("representatives", h.representatives.iter().map(CochainJson::from_cochain).collect::<Vec<_>>());
        }
        CohCmd::Check { cocycle } => {
            let w = load_cocycle(cocycle)?;
            let norm = w.normalization_violation();
            ctx.report.check("normalized", norm.is_none(), json!({ "tuple": norm.map(|t| t.to_vec()) }));
            let bad = cocycle_violation(&w)?;
            ctx.report.check("cocycle", bad.is_none(), json!({ "tuple": bad.map(|t| t.to_vec()) }));
        }
        CohCmd::ClassOrder { cocycle } => {
            let w = load_cocycle(cocycle)?;
            ctx.report.set("class_order", class_order(&w)?);
            ctx.report.set("coboundary", solve_coboundary(&w)?.is_some());
        }
        CohCmd::RestrictScan { cocycle } => {
            let w = load_cocycle(cocycle)?;
            let scan = subgroup_nontriviality_scan(&w)?;
            let entries: Vec<_> =
                scan.entries.iter().map(|(h, nt)| json!({ "subgroup": h, "nontrivial": nt })).collect();
            ctx.report.set("entries", entries);
            ctx.report.set("nontrivial_on_every_subgroup", scan.hypothesis_holds);
        }
    }
    Ok(())
}

fn jones<S: Scalar>(j: &JonesCmd, ctx: &mut Ctx) -> Res<()> {
    match j {
        JonesCmd::FindExtension { cocycle, max_kernel } => {
            let w = load_cocycle(cocycle)?;
            let ext = find_trivializing_extension(w.group(), &w, *max_kernel)?;
            ctx.report.check("extension found", ext.is_some(), json!({ "max_kernel": max_kernel }));
            if let Some(e) = ext {
                ctx.report.set("gamma", e.rho.source.to_json());
                ctx.report.set("rho", &e.rho.map);
                ctx.report.set("kernel_order", e.kernel_order);
                ctx.report.set("kernel_trivial", e.kernel_trivial);
                ctx.report.set("extension_class", &e.extension_class);
                ctx.report.set("c", CochainJson::from_cochain(&e.c));
            }
        }
        JonesCmd::Induce { jones, bundle_out } => {
            if let Some(ind) = induce::<S>(ctx, jones)? {
                let r = validate_action(&ind.action)?;
                ctx.report.check("action valid", r.is_valid(), &r);
                if let Some(p) = bundle_out {
                    write_json(&ActionBundle::from_action(&ind.action)?, p)?;
                }
            }
        }
        JonesCmd::Verify { jones } => {
            if let Some(ind) = induce::<S>(ctx, jones)? {
                let r = verify_jones(&ind)?;
                ctx.report.check("action valid", r.action.is_valid(), &r.action);
                ctx.report.check(
                    "anomaly class equals omega",
                    r.anomaly_class_equal,
                    json!({ "error": r.anomaly_error, "pointwise": r.anomaly_pointwise_equal, "negated": r.anomaly_negated }),
                );
                let part = rokhlin_from_ek(&ind)?;
                let rr = verify_rokhlin_partition(&ind.action, &part)?;
                ctx.report.check("rokhlin partition", rr.passed(), &rr);
            }
        }
    }
    ctx.report.lap("jones");
    Ok(())
}

fn action<S: Scalar>(a: &ActionCmd, ctx: &mut Ctx) -> Res<()> {
    match a {
        ActionCmd::Validate { bundle } => {
            let act = load_action::<S>(bundle)?;
            let r = validate_action(&act)?;
            ctx.report.check("action valid", r.is_valid(), &r);
        }
        ActionCmd::Anomaly { bundle } => {
            let act = load_action::<S>(bundle)?;
            match extract_anomaly(&act) {
                Ok(w) => {
                    ctx.report.check("anomaly extracted", true, json!(null));
                    ctx.report.set("anomaly", CochainJson::from_cochain(&w));
                }
                Err(e) => ctx.report.check("anomaly extracted", false, json!({ "error": e.to_string() })),
            }
        }
        ActionCmd::Perturb { bundle, samples, bundle_out } => {
            let act = load_action::<S>(bundle)?;
            let w0 = extract_anomaly(&act)?;
            let den = 2 * act.group.order() as i64;
            let mut changed = Vec::new();
            let mut last = None;
            for i in 0..*samples {
                let mut v = vec![Element::one(&act.algebra)];
                for _ in 1..act.group.order() {
                    v.push(random_unitary::<S>(&act.algebra, den, &mut ctx.rng)?);
                }
                let b = unitary_perturbation(&act, &v)?;
                let w = extract_anomaly(&b)?;
                let diff = w.pointwise_differences(&w0);
                if !diff.is_empty() {
                    changed.push(json!({ "sample": i, "tuple": diff[0].to_vec() }));
                }
                last = Some(b);
            }
            ctx.report.check("anomaly unchanged", changed.is_empty(), changed);
            ctx.report.set("samples", samples);
            if let (Some(p), Some(b)) = (bundle_out, last) {
                write_json(&ActionBundle::from_action(&b)?, p)?;
            }
        }
        ActionCmd::Tensor { left, right, bundle_out } => {
            let (a1, a2) = (load_action::<S>(left)?, load_action::<S>(right)?);
            let t = tensor_actions(&a1, &a2)?;
            let expected = extract_anomaly(&a1)?.add(&extract_anomaly(&a2)?)?;
            let w = extract_anomaly(&t)?;
            let diff: Vec<Vec<usize>> = w.pointwise_differences(&expected).iter().map(|t| t.to_vec()).collect();
            ctx.report.check("anomaly is the sum", diff.is_empty(), diff);
            ctx.report.set("anomaly", CochainJson::from_cochain(&w));
            ctx.report.set("dimension", t.algebra.dim());
            if let Some(p) = bundle_out {
                write_json(&ActionBundle::from_action(&t)?, p)?;
            }
        }
        ActionCmd::Compare { left, right, mode, expect } => {
            let (a1, a2) = (load_action::<S>(left)?, load_action::<S>(right)?);
            let mode = match mode {
                ModeArg::Pointwise => CompareMode::Pointwise,
                ModeArg::Class => CompareMode::Class,
            };
            let r = compare_invariants(&a1, &a2, mode, None)?;
            if let Some(e) = expect {
                ctx.report.check(
                    format!("invariants {}", if *e == ExpectArg::Agree { "agree" } else { "differ" }),
                    r.agree == (*e == ExpectArg::Agree),
                    json!(null),
                );
            }
            ctx.report.set("comparison", &r);
        }
    }
    Ok(())
}

fn rokhlin<S: Scalar>(r: &RokhlinCmd, ctx: &mut Ctx) -> Res<()> {
    let src = match r {
        RokhlinCmd::Verify { tower } | RokhlinCmd::Average { tower, .. } | RokhlinCmd::Trivialize { tower, .. } => {
            tower
        }
    };
    let tower = load_tower::<S>(ctx, src)?;
    ctx.report.set("tower", describe_tower(&tower));
    let q = tower.group.order();
    let trivial = tower.omega.is_zero();
    for st in selected_stages(&tower, src)? {
        match r {
            RokhlinCmd::Verify { .. } => {
                let rep = verify_rokhlin_partition(&st.action, &st.rokhlin)?;
                ctx.report.check(format!("stage {} partition", st.n), rep.passed(), &rep);
            }
            RokhlinCmd::Average { samples, .. } => {
                let (m, d) = if st.n == 1 { (q, 1) } else { (1, q) };
                let mut rows = Vec::new();
                for i in 0..*samples {
                    let psi = random_unital_embedding::<S, _>(&st.mm, st.algebra(), m, d, 2 * q as i64, &mut ctx.rng)?;
                    let (_, rep) = rokhlin_average(&st.action, &st.rokhlin, &psi)?;
                    rows.push(json!({ "sample": i, "homomorphism": rep.homomorphism.is_homomorphism(), "defect_count": rep.defect_count }));
                    ctx.report.check(
                        format!("stage {} sample {i} homomorphism", st.n),
                        rep.homomorphism.is_homomorphism(),
                        &rep.homomorphism,
                    );
                    if trivial {
                        ctx.report.check(
                            format!("stage {} sample {i} equivariant", st.n),
                            rep.equivariant(),
                            &rep.defects,
                        );
                    }
                }
                ctx.report.set(&format!("stage {} averages", st.n), rows);
            }
            RokhlinCmd::Trivialize { samples, .. } => {
                let mut failures = Vec::new();
                for i in 0..*samples {
                    let w = st.random_compatible_unitary(2 * q as i64, &mut ctx.rng);
                    let v = coboundary_cocycle(&st.action, &w)?;
                    let u = trivialize_cocycle(&st.action, &st.rokhlin, &v)?;
                    for g in tower.group.elements() {
                        if !u.mul(&st.action.alpha[g].apply(&u.adjoint())?)?.equals(&v[g]) {
                            failures.push(json!({ "sample": i, "g": g }));
                        }
                    }
                }
                ctx.report.check(format!("stage {} trivialization", st.n), failures.is_empty(), failures);
            }
        }
    }
    ctx.report.lap("rokhlin");
    Ok(())
}
