//! Dense and sparse linear algebra kernels shared by all solvers.

pub mod dense;
pub mod fft;
pub mod gmres;
pub mod operator;
pub mod sparse;
pub mod spectrum;
pub mod toeplitz;

pub use dense::{kron_dense, solve_dense, sylvester_dense, SchurPair};
pub use fft::{fft_forward, fft_inverse, RowFft};
pub use gmres::{gmres, GmresOptions, GmresResult};
pub use operator::{
    IdentitySolver, LinearOperator, LinearSolver, SpacePencil, SparsePencil,
};
pub use sparse::{sparse_factor, Scalar, SparseLu, SparseMatrix};
pub use spectrum::lanczos_extremes;
pub use toeplitz::{toeplitz_matvec, ToeplitzMatvec};

pub type C64 = num_complex::Complex64;
pub type CMatrix = nalgebra::DMatrix<C64>;

pub fn c64(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

pub fn norm2(v: &[C64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// `Σ conj(a_i) b_i`
pub fn dot(a: &[C64], b: &[C64]) -> C64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

pub fn axpy(alpha: C64, x: &[C64], y: &mut [C64]) {
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi += alpha * xi;
    }
}

pub fn to_complex_matrix(m: &nalgebra::DMatrix<f64>) -> CMatrix {
    m.map(|v| C64::new(v, 0.0))
}
