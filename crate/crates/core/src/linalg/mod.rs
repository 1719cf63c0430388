//! Fixed-size complex linear algebra.

mod decomp;
mod eig;
mod matrix;

pub use decomp::{complete_to_unitary, factor_local, inverse2, pseudo_inverse, singular_values_4x2, to_su4};
pub use eig::{char_poly4, eig4, jacobi_sym4, quartic_roots, Eig4};
pub use matrix::{kron, CMat2, CMat2x4, CMat4, CMat4x2, CMatrix, CVec2, CVec4, CVector};
