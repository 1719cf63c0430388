//! Compilation of single-qubit informationally complete POVMs into
//! two-qubit measurement circuits with as few CNOTs as possible, and a
//! density-matrix simulator for POVM-based shadow estimation.
//!
//! The numerical core is generic over [`Real`] (`f32` or `f64`); the
//! shadow simulator runs in `f64`.

#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod dilation;
pub mod equivalence;
pub mod error;
pub mod gates;
pub mod io;
pub mod linalg;
pub mod optimizer;
pub mod povm;
pub mod scalar;
pub mod shadows;

pub use error::{Error, Result};
pub use scalar::{Cx, Real};

pub type CMat2F64 = linalg::CMat2<f64>;
pub type CMat4F64 = linalg::CMat4<f64>;
pub type CMat4x2F64 = linalg::CMat4x2<f64>;
pub type CVec2F64 = linalg::CVec2<f64>;
pub type QubitPovm4F64 = povm::QubitPovm4<f64>;
pub type DilationUnitaryF64 = dilation::DilationUnitary<f64>;
pub type ThetaDeltaF64 = dilation::ThetaDelta<f64>;
pub type CanonicalVectorF64 = equivalence::CanonicalVector<f64>;
pub type CircuitF64 = gates::Circuit<f64>;

pub type CMat2F32 = linalg::CMat2<f32>;
pub type CMat4F32 = linalg::CMat4<f32>;
pub type QubitPovm4F32 = povm::QubitPovm4<f32>;
pub type DilationUnitaryF32 = dilation::DilationUnitary<f32>;
pub type CircuitF32 = gates::Circuit<f32>;
