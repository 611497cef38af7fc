use std::fmt;

use serde::{Deserialize, Serialize};

use super::BasisAlgebra;
use crate::error::{input, Result};
use crate::phase::Phase;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Block {
    pub label: String,
    pub dim: usize,
}

/// `⊕_s M_{d_s}` with matrix units `e_{s,i,j}` numbered block by block, row-major.
#[derive(Clone, PartialEq, Eq)]
pub struct MultiMatrixAlgebra {
    blocks: Vec<Block>,
    offsets: Vec<usize>,
    decode: Vec<(u32, u32, u32)>,
    unit: Vec<usize>,
    signature: String,
}

impl fmt::Debug for MultiMatrixAlgebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MultiMatrixAlgebra{:?}", self.dims())
    }
}

impl MultiMatrixAlgebra {
    pub fn new(blocks: Vec<Block>) -> Result<MultiMatrixAlgebra> {
        if blocks.is_empty() {
            return input("an algebra needs at least one block");
        }
        if let Some(b) = blocks.iter().find(|b| b.dim == 0) {
            return input(format!("block {:?} has dimension 0", b.label));
        }
        let mut offsets = Vec::with_capacity(blocks.len() + 1);
        let mut decode = Vec::new();
        let mut unit = Vec::new();
        let mut off = 0;
        for (s, b) in blocks.iter().enumerate() {
            offsets.push(off);
            for i in 0..b.dim {
                for j in 0..b.dim {
                    if i == j {
                        unit.push(decode.len());
                    }
                    decode.push((s as u32, i as u32, j as u32));
                }
            }
            off += b.dim * b.dim;
        }
        offsets.push(off);
        let dims: Vec<usize> = blocks.iter().map(|b| b.dim).collect();
        let signature = format!("mm{dims:?}");
        Ok(MultiMatrixAlgebra { blocks, offsets, decode, unit, signature })
    }

    pub fn from_dims(dims: &[usize]) -> Result<MultiMatrixAlgebra> {
        Self::new(dims.iter().enumerate().map(|(s, &d)| Block { label: s.to_string(), dim: d }).collect())
    }

    pub fn full_matrix(d: usize) -> MultiMatrixAlgebra {
        Self::from_dims(&[d]).expect("positive dimension")
    }

    pub fn blocks(&self) -> &[Block] {
        &self.blocks
    }

    pub fn block_count(&self) -> usize {
        self.blocks.len()
    }

    pub fn block_dim(&self, s: usize) -> usize {
        self.blocks[s].dim
    }

    pub fn dims(&self) -> Vec<usize> {
        self.blocks.iter().map(|b| b.dim).collect()
    }

    #[inline]
    pub fn index(&self, s: usize, i: usize, j: usize) -> usize {
        let d = self.blocks[s].dim;
        debug_assert!(i < d && j < d);
        self.offsets[s] + i * d + j
    }

    /// `(block, row, col)` of a label.
    #[inline]
    pub fn entry(&self, l: usize) -> (usize, usize, usize) {
        let (s, i, j) = self.decode[l];
        (s as usize, i as usize, j as usize)
    }

    pub fn block_labels(&self, s: usize) -> std::ops::Range<usize> {
        self.offsets[s]..self.offsets[s + 1]
    }

    pub fn diagonal_labels(&self) -> &[usize] {
        &self.unit
    }

    /// Block-wise Kronecker product; block `(s, t)` has index `s·|B| + t` and
    /// row `i·d_t + i'` for the pair of rows `(i, i')`.
    pub fn tensor(&self, other: &MultiMatrixAlgebra) -> MultiMatrixAlgebra {
        let blocks = self
            .blocks
            .iter()
            .flat_map(|a| {
                other
                    .blocks
                    .iter()
                    .map(move |b| Block { label: format!("{}⊗{}", a.label, b.label), dim: a.dim * b.dim })
            })
            .collect();
        MultiMatrixAlgebra::new(blocks).expect("tensor of valid algebras")
    }

    /// Label of `e_a ⊗ e_b` in [`MultiMatrixAlgebra::tensor`].
    pub fn tensor_index(&self, other: &MultiMatrixAlgebra, product: &MultiMatrixAlgebra, a: usize, b: usize) -> usize {
        let (s, i, j) = self.entry(a);
        let (t, k, l) = other.entry(b);
        let dt = other.block_dim(t);
        product.index(s * other.block_count() + t, i * dt + k, j * dt + l)
    }
}

impl BasisAlgebra for MultiMatrixAlgebra {
    fn dim(&self) -> usize {
        self.decode.len()
    }

    fn product(&self, a: usize, b: usize) -> Option<(usize, Phase)> {
        let (s, i, j) = self.decode[a];
        let (t, k, l) = self.decode[b];
        (s == t && j == k).then(|| (self.index(s as usize, i as usize, l as usize), Phase::ZERO))
    }

    fn adjoint(&self, a: usize) -> (usize, Phase) {
        let (s, i, j) = self.entry(a);
        (self.index(s, j, i), Phase::ZERO)
    }

    fn unit_support(&self) -> &[usize] {
        &self.unit
    }

    fn right_key(&self, a: usize) -> u64 {
        let (s, _, j) = self.decode[a];
        ((s as u64) << 32) | j as u64
    }

    fn left_key(&self, b: usize) -> u64 {
        let (s, i, _) = self.decode[b];
        ((s as u64) << 32) | i as u64
    }

    fn label(&self, a: usize) -> String {
        let (s, i, j) = self.entry(a);
        format!("e[{}]({},{})", self.blocks[s].label, i, j)
    }

    fn signature(&self) -> &str {
        &self.signature
    }

    fn as_any(&self) -> &dyn std::any::Any {
        self
    }

    fn as_multi_matrix(&self) -> Option<&MultiMatrixAlgebra> {
        Some(self)
    }

    fn for_each_test_pair(&self, f: &mut dyn FnMut(usize, usize) -> bool) {
        for (s, b) in self.blocks.iter().enumerate() {
            let d = b.dim;
            for i in 0..d {
                for j in 0..d {
                    for k in 0..d {
                        if !f(self.index(s, i, j), self.index(s, j, k)) {
                            return;
                        }
                    }
                }
            }
        }
        for &a in &self.unit {
            for &b in &self.unit {
                if a != b && !f(a, b) {
                    return;
                }
            }
        }
    }
}
