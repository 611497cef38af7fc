//! Finite-dimensional *-algebras given by a basis with monomial structure constants.
//!
//! Every algebra here has a basis `b_0, …, b_{d-1}` in which products and adjoints
//! of basis elements are again phase multiples of basis elements (or zero). Matrix
//! units of a multi-matrix algebra have this shape, and so do the spanning sets
//! `a·v_k` of the twisted crossed products built in [`crate::constructors`].

pub mod cyclotomic;
pub mod element;
pub mod maps;
pub mod multimatrix;
pub mod scalar;

use std::fmt::Debug;
use std::sync::Arc;

pub use cyclotomic::CycNumber;
pub use element::Element;
pub use maps::{ad_unitary, fixed_point_expectation, AlgebraMap, GeneralMap, HomReport, MonomialMap};
pub use multimatrix::{Block, MultiMatrixAlgebra};
pub use scalar::{float_tolerance, set_float_tolerance, Backend, Scalar};

use crate::phase::Phase;

pub trait BasisAlgebra: Debug + Send + Sync {
    fn dim(&self) -> usize;

    /// `b_a·b_b = ζ^p·b_c` as `Some((c, p))`, or `None` when the product vanishes.
    fn product(&self, a: usize, b: usize) -> Option<(usize, Phase)>;

    /// `b_a* = ζ^p·b_c` as `(c, p)`.
    fn adjoint(&self, a: usize) -> (usize, Phase);

    /// Labels whose sum is the unit, each with coefficient one.
    fn unit_support(&self) -> &[usize];

    /// Products `b_a·b_b` can only be nonzero when `right_key(a) == left_key(b)`.
    fn right_key(&self, _a: usize) -> u64 {
        0
    }

    fn left_key(&self, _b: usize) -> u64 {
        0
    }

    fn label(&self, a: usize) -> String;

    /// Two algebras with equal signatures have identical structure constants.
    fn signature(&self) -> &str;

    fn as_multi_matrix(&self) -> Option<&MultiMatrixAlgebra> {
        None
    }

    fn as_any(&self) -> &dyn std::any::Any;

    /// Pairs on which multiplicativity of a *-preserving linear map must be tested.
    /// The default is every pair; the callback returns `false` to stop early.
    fn for_each_test_pair(&self, f: &mut dyn FnMut(usize, usize) -> bool) {
        let d = self.dim();
        for a in 0..d {
            for b in 0..d {
                if !f(a, b) {
                    return;
                }
            }
        }
    }
}

pub type AlgRef = Arc<dyn BasisAlgebra>;

pub fn same_algebra(a: &AlgRef, b: &AlgRef) -> bool {
    std::ptr::eq(Arc::as_ptr(a) as *const u8, Arc::as_ptr(b) as *const u8) || a.signature() == b.signature()
}

pub fn multi_matrix(a: MultiMatrixAlgebra) -> AlgRef {
    Arc::new(a)
}
