//! JSON forms of groups, cochains, elements, actions and towers.
//!
//! Phases are written as canonical fraction strings (`"1/2"`). Exact coefficients that
//! are not roots of unity are written as lists of `[phase, rational]` pairs, and float
//! coefficients as `{"re", "im"}`.

use num_complex::Complex64;
use num_rational::Rational64;
use serde::{Deserialize, Serialize};

use crate::actions::{AnomalousAction, RokhlinPartition};
use crate::algebra::maps::PhasedImage;
use crate::algebra::{
    multi_matrix, AlgRef, AlgebraMap, Backend, Block, CycNumber, Element, MonomialMap, MultiMatrixAlgebra, Scalar,
};
use crate::cohomology::{normalize_cocycle, Cochain};
use crate::constructors::{AfStage, AfTower, TwistedCrossedProduct};
use crate::error::{input, Result};
use crate::groups::{Group, GroupJson};
use crate::phase::Phase;

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct CochainJson {
    pub group: GroupJson,
    pub degree: usize,
    /// Values in lexicographic order of arguments, first argument most significant.
    pub values: Vec<Phase>,
    /// Replace the cochain by a normalized cohomologous one on load.
    #[serde(default)]
    pub normalize: bool,
}

impl CochainJson {
    pub fn from_cochain(c: &Cochain) -> CochainJson {
        CochainJson { group: c.group().to_json(), degree: c.degree(), values: c.values().to_vec(), normalize: false }
    }

    pub fn load(self) -> Result<Cochain> {
        let g = self.group.clone().load()?;
        self.load_on(&g)
    }

    /// Loads onto an existing group object, which must have the same table.
    pub fn load_on(self, g: &Group) -> Result<Cochain> {
        if self.group.product != g.rows() {
            return input("cochain group table does not match");
        }
        let c = Cochain::from_values(g.clone(), self.degree, self.values)?;
        if self.normalize && self.degree == 3 {
            return Ok(normalize_cocycle(&c)?.0);
        }
        Ok(c)
    }
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(untagged)]
pub enum CoeffJson {
    Phase(Phase),
    Cyclotomic(Vec<(Phase, String)>),
    Float { re: f64, im: f64 },
}

fn coeff_json<S: Scalar>(c: &S) -> CoeffJson {
    if S::BACKEND == Backend::Float {
        let z = c.to_c64();
        return CoeffJson::Float { re: z.re, im: z.im };
    }
    if let Some(p) = c.to_phase() {
        return CoeffJson::Phase(p);
    }
    let any: &dyn std::any::Any = c;
    match any.downcast_ref::<CycNumber>() {
        Some(x) => CoeffJson::Cyclotomic(x.terms().iter().map(|(p, r)| (*p, r.to_string())).collect()),
        None => {
            let z = c.to_c64();
            CoeffJson::Float { re: z.re, im: z.im }
        }
    }
}

fn coeff_load<S: Scalar>(c: &CoeffJson) -> Result<S> {
    match c {
        CoeffJson::Phase(p) => Ok(S::from_phase(*p)),
        CoeffJson::Cyclotomic(terms) => {
            let parsed = terms
                .iter()
                .map(|(p, r)| r.parse::<Rational64>().map(|r| (*p, r)))
                .collect::<std::result::Result<Vec<_>, _>>()
                .map_err(|e| crate::Error::Input(format!("bad rational coefficient: {e}")))?;
            Ok(S::from_cyc(&CycNumber::from_terms(parsed)))
        }
        CoeffJson::Float { re, im } => match S::from_c64(Complex64::new(*re, *im)) {
            Some(x) => Ok(x),
            None => input("float coefficients cannot be loaded on the exact backend"),
        },
    }
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct ElementJson {
    pub terms: Vec<(usize, CoeffJson)>,
}

impl ElementJson {
    pub fn from_element<S: Scalar>(e: &Element<S>) -> ElementJson {
        ElementJson { terms: e.terms().iter().map(|(&l, c)| (l, coeff_json(c))).collect() }
    }

    pub fn load<S: Scalar>(&self, alg: &AlgRef) -> Result<Element<S>> {
        let terms = self.terms.iter().map(|(l, c)| coeff_load::<S>(c).map(|x| (*l, x))).collect::<Result<Vec<_>>>()?;
        Element::from_terms(alg, terms)
    }
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum MapJson {
    Monomial { images: Vec<Vec<(usize, Phase)>> },
    General { images: Vec<ElementJson> },
}

impl MapJson {
    pub fn from_map<S: Scalar>(m: &AlgebraMap<S>) -> MapJson {
        match m {
            AlgebraMap::Monomial(m) => MapJson::Monomial { images: m.images().iter().map(|i| i.to_vec()).collect() },
            AlgebraMap::General(g) => {
                MapJson::General { images: g.images().iter().map(ElementJson::from_element).collect() }
            }
        }
    }

    pub fn load<S: Scalar>(&self, dom: &AlgRef, cod: &AlgRef) -> Result<AlgebraMap<S>> {
        match self {
            MapJson::Monomial { images } => {
                AlgebraMap::from_phased(dom, cod, images.iter().map(|i| PhasedImage::from_vec(i.clone())).collect())
            }
            MapJson::General { images } => {
                let els = images.iter().map(|e| e.load::<S>(cod)).collect::<Result<Vec<_>>>()?;
                AlgebraMap::from_images(dom, cod, els)
            }
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum AlgebraJson {
    MultiMatrix {
        blocks: Vec<Block>,
    },
    CrossedProduct {
        base: Box<AlgebraJson>,
        gamma: GroupJson,
        kernel: Vec<usize>,
        pi: Vec<Vec<(usize, Phase)>>,
        /// 2-cochain values on Γ.
        twist: Vec<Phase>,
    },
}

impl AlgebraJson {
    pub fn from_algebra(a: &AlgRef) -> Result<AlgebraJson> {
        if let Some(mm) = a.as_multi_matrix() {
            return Ok(AlgebraJson::MultiMatrix { blocks: mm.blocks().to_vec() });
        }
        let any: &dyn std::any::Any = a.as_any();
        match any.downcast_ref::<TwistedCrossedProduct>() {
            Some(cp) => Ok(AlgebraJson::CrossedProduct {
                base: Box::new(AlgebraJson::from_algebra(cp.base())?),
                gamma: cp.gamma().to_json(),
                kernel: cp.kernel().to_vec(),
                pi: cp.pi_table().to_vec(),
                twist: cp.twist().values().to_vec(),
            }),
            None => input(format!("no JSON form for algebra {}", a.signature())),
        }
    }

    pub fn load(&self) -> Result<AlgRef> {
        match self {
            AlgebraJson::MultiMatrix { blocks } => Ok(multi_matrix(MultiMatrixAlgebra::new(blocks.clone())?)),
            AlgebraJson::CrossedProduct { base, gamma, kernel, pi, twist } => {
                let b = base.load()?;
                let gamma = gamma.clone().load()?;
                let maps =
                    pi.iter().map(|t| MonomialMap::from_single(&b, &b, t.clone())).collect::<Result<Vec<_>>>()?;
                let c = Cochain::from_values(gamma.clone(), 2, twist.clone())?;
                let cp: AlgRef = TwistedCrossedProduct::new(&b, &gamma, kernel, &maps, &c)?;
                Ok(cp)
            }
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct ActionBundle {
    pub group: GroupJson,
    pub algebra: AlgebraJson,
    pub alpha: Vec<MapJson>,
    /// `u_{g,h}` at index `g·|G| + h`.
    pub u: Vec<ElementJson>,
}

impl ActionBundle {
    pub fn from_action<S: Scalar>(a: &AnomalousAction<S>) -> Result<ActionBundle> {
        Ok(ActionBundle {
            group: a.group.to_json(),
            algebra: AlgebraJson::from_algebra(&a.algebra)?,
            alpha: a.alpha.iter().map(MapJson::from_map).collect(),
            u: a.u.iter().map(ElementJson::from_element).collect(),
        })
    }

    pub fn load<S: Scalar>(&self) -> Result<AnomalousAction<S>> {
        let g = self.group.clone().load()?;
        let alg = self.algebra.load()?;
        self.load_on(&g, &alg)
    }

    fn load_on<S: Scalar>(&self, g: &Group, alg: &AlgRef) -> Result<AnomalousAction<S>> {
        let alpha = self.alpha.iter().map(|m| m.load::<S>(alg, alg)).collect::<Result<Vec<_>>>()?;
        let u = self.u.iter().map(|e| e.load::<S>(alg)).collect::<Result<Vec<_>>>()?;
        AnomalousAction::new(g.clone(), alg.clone(), alpha, u)
    }
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct PartitionJson {
    pub p: Vec<ElementJson>,
    pub context: Vec<ElementJson>,
}

impl PartitionJson {
    pub fn from_partition<S: Scalar>(p: &RokhlinPartition<S>) -> PartitionJson {
        PartitionJson {
            p: p.p.iter().map(ElementJson::from_element).collect(),
            context: p.context.iter().map(ElementJson::from_element).collect(),
        }
    }

    pub fn load<S: Scalar>(&self, alg: &AlgRef) -> Result<RokhlinPartition<S>> {
        Ok(RokhlinPartition {
            p: self.p.iter().map(|e| e.load(alg)).collect::<Result<_>>()?,
            context: self.context.iter().map(|e| e.load(alg)).collect::<Result<_>>()?,
        })
    }
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct StageJson {
    pub n: usize,
    pub blocks: Vec<Block>,
    pub theta: Vec<MapJson>,
    pub u: Vec<ElementJson>,
    pub rokhlin: PartitionJson,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct TowerBundle {
    pub group: GroupJson,
    pub omega: Vec<Phase>,
    pub depth: usize,
    pub stages: Vec<StageJson>,
    /// `φ_n` at index `n - 1`.
    pub connect: Vec<MapJson>,
}

impl TowerBundle {
    pub fn from_tower<S: Scalar>(t: &AfTower<S>) -> TowerBundle {
        TowerBundle {
            group: t.group.to_json(),
            omega: t.omega.values().to_vec(),
            depth: t.depth,
            stages: t
                .stages
                .iter()
                .map(|s| StageJson {
                    n: s.n,
                    blocks: s.mm.blocks().to_vec(),
                    theta: s.action.alpha.iter().map(MapJson::from_map).collect(),
                    u: s.action.u.iter().map(ElementJson::from_element).collect(),
                    rokhlin: PartitionJson::from_partition(&s.rokhlin),
                })
                .collect(),
            connect: t.connect.iter().map(MapJson::from_map).collect(),
        }
    }

    pub fn load<S: Scalar>(&self) -> Result<AfTower<S>> {
        let g = self.group.clone().load()?;
        let omega = Cochain::from_values(g.clone(), 3, self.omega.clone())?;
        if self.stages.len() != self.depth || self.connect.len() + 1 != self.depth.max(1) {
            return input("tower bundle has inconsistent depth");
        }
        let mut stages = Vec::with_capacity(self.depth);
        for s in &self.stages {
            let mm = MultiMatrixAlgebra::new(s.blocks.clone())?;
            let alg = multi_matrix(mm.clone());
            let alpha = s.theta.iter().map(|m| m.load::<S>(&alg, &alg)).collect::<Result<Vec<_>>>()?;
            let u = s.u.iter().map(|e| e.load::<S>(&alg)).collect::<Result<Vec<_>>>()?;
            let action = AnomalousAction::new(g.clone(), alg.clone(), alpha, u)?;
            let rokhlin = s.rokhlin.load(&alg)?;
            stages.push(AfStage { n: s.n, mm, action, rokhlin });
        }
        let connect = self
            .connect
            .iter()
            .enumerate()
            .map(|(i, m)| m.load::<S>(stages[i].algebra(), stages[i + 1].algebra()))
            .collect::<Result<Vec<_>>>()?;
        Ok(AfTower { group: g, omega, depth: self.depth, stages, connect })
    }
}

/// Serializes with object keys in sorted order.
pub fn to_canonical_json<T: Serialize>(value: &T) -> Result<String> {
    let v = serde_json::to_value(value)?;
    Ok(serde_json::to_string_pretty(&v)?)
}

pub fn group_from_json(text: &str) -> Result<Group> {
    serde_json::from_str::<GroupJson>(text)?.load()
}
