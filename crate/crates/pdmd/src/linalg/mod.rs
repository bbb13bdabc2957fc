//! Dense matrix kernels: thin SVD, general eigendecomposition,
//! pseudo-inverse, and interpolation weights. Everything here is a pure
//! function of its inputs and deterministic for fixed input bits.

mod dense;
mod eig;
mod lagrange;
mod lu;
mod pinv;
mod qr;
mod svd;

pub use dense::{CMatrix, Matrix};
pub use eig::{eig_general, EigenPair, DEFECTIVE_COND_BOUND};
pub use lagrange::lagrange_weights;
pub use lu::{inverse_complex, solve_complex};
pub use pinv::{pinv, pinv_apply_complex, pinv_complex, DEFAULT_PINV_TOL};
pub use qr::{householder_qr, householder_qr_complex};
pub use svd::{svd_invocations, thin_svd, SvdFactors};
