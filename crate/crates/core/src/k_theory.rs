//! K₀ of multi-matrix algebras and of maps between them.
//!
//! `K₀(⊕_s M_{d_s}) = ℤ^s` with order unit `(d_s)`. A *-homomorphism induces the
//! multiplicity matrix whose `(t, s)` entry is the rank, inside block `t` of the
//! codomain, of the image of a minimal projection of block `s`. K₁ vanishes for
//! finite-dimensional algebras and is recorded as such.

use serde::Serialize;

use crate::actions::{extract_anomaly, AnomalousAction};
use crate::algebra::{AlgRef, AlgebraMap, MultiMatrixAlgebra, Scalar};
use crate::cohomology::class_equal;
use crate::error::{input, Result};

pub const K1_NOTE: &str = "K1 of a finite-dimensional algebra is 0";
pub const PROXY_NOTE: &str = "per-stage K0 data of finite-dimensional algebras; not the invariant of the limit algebra";

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct K0Data {
    pub rank: usize,
    pub dims: Vec<usize>,
    pub block_labels: Vec<String>,
}

/// Rows are codomain blocks, columns are domain blocks.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct K0Map {
    pub matrix: Vec<Vec<i64>>,
}

impl K0Map {
    pub fn identity(n: usize) -> K0Map {
        K0Map { matrix: (0..n).map(|i| (0..n).map(|j| i64::from(i == j)).collect()).collect() }
    }

    pub fn rows(&self) -> usize {
        self.matrix.len()
    }

    pub fn cols(&self) -> usize {
        self.matrix.first().map_or(0, Vec::len)
    }

    /// `self ∘ inner` as a matrix product.
    pub fn compose(&self, inner: &K0Map) -> Result<K0Map> {
        if self.cols() != inner.rows() {
            return input(format!("cannot compose a {}-column K0 map with a {}-row one", self.cols(), inner.rows()));
        }
        let matrix = self
            .matrix
            .iter()
            .map(|row| (0..inner.cols()).map(|j| row.iter().zip(&inner.matrix).map(|(a, r)| a * r[j]).sum()).collect())
            .collect();
        Ok(K0Map { matrix })
    }

    pub fn apply(&self, v: &[i64]) -> Vec<i64> {
        self.matrix.iter().map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum()).collect()
    }

    pub fn is_nonnegative(&self) -> bool {
        self.matrix.iter().flatten().all(|&m| m >= 0)
    }
}

fn as_mm(a: &AlgRef) -> Result<&MultiMatrixAlgebra> {
    match a.as_multi_matrix() {
        Some(m) => Ok(m),
        None => input(format!("K0 is only computed for multi-matrix algebras, not {}", a.signature())),
    }
}

pub fn k0_of_multi_matrix(a: &MultiMatrixAlgebra) -> K0Data {
    K0Data { rank: a.block_count(), dims: a.dims(), block_labels: a.blocks().iter().map(|b| b.label.clone()).collect() }
}

pub fn k0_of_algebra(a: &AlgRef) -> Result<K0Data> {
    as_mm(a).map(k0_of_multi_matrix)
}

/// Multiplicities of a *-homomorphism between multi-matrix algebras.
///
/// Every diagonal matrix unit of the domain must go to a projection, and the diagonal
/// units of one block must have images of equal rank in each codomain block; a map
/// failing either is rejected as a non-homomorphism.
pub fn k0_of_hom<S: Scalar>(m: &AlgebraMap<S>) -> Result<K0Map> {
    let dom = as_mm(m.domain())?;
    let cod = as_mm(m.codomain())?;
    let mut matrix = vec![vec![0i64; dom.block_count()]; cod.block_count()];
    for s in 0..dom.block_count() {
        for i in 0..dom.block_dim(s) {
            let img = m.image(dom.index(s, i, i));
            if !img.is_projection() {
                return input(format!("image of the minimal projection e[{s}]({i},{i}) is not a projection"));
            }
            let mut trace = vec![S::zero(); cod.block_count()];
            for (&l, c) in img.terms() {
                let (t, r, col) = cod.entry(l);
                if r == col {
                    trace[t] = trace[t].plus(c);
                }
            }
            for (t, tr) in trace.iter().enumerate() {
                let rank = match tr.to_integer() {
                    Some(k) if k >= 0 => k,
                    _ => return input(format!("block {t} trace of a projection image is not a nonnegative integer")),
                };
                if i == 0 {
                    matrix[t][s] = rank;
                } else if matrix[t][s] != rank {
                    return input(format!("diagonal units of block {s} have images of different rank in block {t}"));
                }
            }
        }
    }
    Ok(K0Map { matrix })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CompareMode {
    Pointwise,
    Class,
}

#[derive(Clone, Debug, Serialize)]
pub struct InvariantComparison {
    pub mode: CompareMode,
    pub anomaly_pointwise_equal: bool,
    pub anomaly_class_equal: bool,
    pub anomaly_error: Option<String>,
    /// `None` when either algebra is not multi-matrix.
    pub k0_actions_equal: Option<bool>,
    pub k0_actions: Option<(Vec<K0Map>, Vec<K0Map>)>,
    pub k1_note: &'static str,
    pub proxy_note: &'static str,
    pub agree: bool,
}

/// Compares anomalies and the K₀-actions `g ↦ K₀(α_g)`.
///
/// `relabel[s]` (when given) is the block of the second algebra matched with block `s`
/// of the first, and the second action's K₀ matrices are conjugated accordingly.
pub fn compare_invariants<S: Scalar>(
    a1: &AnomalousAction<S>,
    a2: &AnomalousAction<S>,
    mode: CompareMode,
    relabel: Option<&[usize]>,
) -> Result<InvariantComparison> {
    if a1.group.product_table() != a2.group.product_table() {
        return input("actions of different groups cannot be compared");
    }
    let (mut pointwise, mut class, mut anomaly_error) = (false, false, None);
    match (extract_anomaly(a1), extract_anomaly(a2)) {
        (Ok(w1), Ok(w2)) => {
            pointwise = w1.pointwise_differences(&w2).is_empty();
            class = pointwise || class_equal(&w1, &w2)?;
        }
        (Err(e), _) | (_, Err(e)) => anomaly_error = Some(e.to_string()),
    }
    let k0_actions = match (a1.algebra.as_multi_matrix(), a2.algebra.as_multi_matrix()) {
        (Some(_), Some(_)) => {
            let k1: Vec<K0Map> = a1.alpha.iter().map(k0_of_hom).collect::<Result<_>>()?;
            let mut k2: Vec<K0Map> = a2.alpha.iter().map(k0_of_hom).collect::<Result<_>>()?;
            if let Some(p) = relabel {
                let n = k0_of_algebra(&a2.algebra)?.rank;
                if p.len() != n || k0_of_algebra(&a1.algebra)?.rank != n {
                    return input("block relabeling has the wrong length");
                }
                k2 = k2
                    .into_iter()
                    .map(|m| K0Map { matrix: p.iter().map(|&t| p.iter().map(|&s| m.matrix[t][s]).collect()).collect() })
                    .collect();
            }
            Some((k1, k2))
        }
        _ => None,
    };
    let k0_equal = k0_actions.as_ref().map(|(x, y)| x == y);
    let anomaly_ok = anomaly_error.is_none()
        && match mode {
            CompareMode::Pointwise => pointwise,
            CompareMode::Class => class,
        };
    Ok(InvariantComparison {
        mode,
        anomaly_pointwise_equal: pointwise,
        anomaly_class_equal: class,
        anomaly_error,
        k0_actions_equal: k0_equal,
        k0_actions,
        k1_note: K1_NOTE,
        proxy_note: PROXY_NOTE,
        agree: anomaly_ok && k0_equal != Some(false),
    })
}
