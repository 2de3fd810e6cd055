use nalgebra::DMatrix;

use super::sparse::{Scalar, SparseLu, SparseMatrix};
use super::{CMatrix, C64};
use crate::error::{Error, Result};

/// A square matrix available only through its action.
pub trait LinearOperator: Sync {
    fn dim(&self) -> usize;
    fn apply(&self, x: &[C64], y: &mut [C64]);
}

/// Applies the inverse of some matrix.
pub trait LinearSolver: Send + Sync {
    fn dim(&self) -> usize;
    fn solve_in_place(&self, b: &mut [C64]) -> Result<()>;
}

impl<T: Scalar> LinearOperator for SparseMatrix<T> {
    fn dim(&self) -> usize {
        self.nrows()
    }
    fn apply(&self, x: &[C64], y: &mut [C64]) {
        self.matvec(x, y)
    }
}

/// Wraps a closure as a [`LinearOperator`].
pub struct FnOperator<F> {
    pub n: usize,
    pub f: F,
}

impl<F: Fn(&[C64], &mut [C64]) + Sync> LinearOperator for FnOperator<F> {
    fn dim(&self) -> usize {
        self.n
    }
    fn apply(&self, x: &[C64], y: &mut [C64]) {
        (self.f)(x, y)
    }
}

impl LinearSolver for SparseLu {
    fn dim(&self) -> usize {
        SparseLu::dim(self)
    }
    fn solve_in_place(&self, b: &mut [C64]) -> Result<()> {
        SparseLu::solve_in_place(self, b);
        Ok(())
    }
}

pub struct IdentitySolver(pub usize);

impl LinearSolver for IdentitySolver {
    fn dim(&self) -> usize {
        self.0
    }
    fn solve_in_place(&self, _b: &mut [C64]) -> Result<()> {
        Ok(())
    }
}

/// LU of a small dense complex matrix.
pub struct DenseSolver {
    lu: nalgebra::LU<C64, nalgebra::Dyn, nalgebra::Dyn>,
}

impl DenseSolver {
    pub fn new(m: CMatrix) -> Result<Self> {
        let scale = m.iter().map(|z| z.norm()).fold(0.0, f64::max);
        let lu = m.lu();
        let u = lu.u();
        for i in 0..u.nrows() {
            if u[(i, i)].norm() <= 1e-14 * scale {
                return Err(Error::NumericallySingular { index: i, pivot: u[(i, i)].norm() });
            }
        }
        Ok(Self { lu })
    }
}

impl LinearSolver for DenseSolver {
    fn dim(&self) -> usize {
        self.lu.l().nrows()
    }
    fn solve_in_place(&self, b: &mut [C64]) -> Result<()> {
        let mut v = nalgebra::DVector::from_column_slice(b);
        if !self.lu.solve_mut(&mut v) {
            return Err(Error::NumericallySingular { index: 0, pivot: 0.0 });
        }
        b.copy_from_slice(v.as_slice());
        Ok(())
    }
}

/// The spatial pair `(A, M)` of a space-time problem.
pub trait SpacePencil: Send + Sync {
    fn dim(&self) -> usize;
    /// Whether `A` and `M` have real entries.
    fn is_real(&self) -> bool;
    fn apply_a(&self, x: &[C64], y: &mut [C64]);
    fn apply_m(&self, x: &[C64], y: &mut [C64]) {
        y.copy_from_slice(x);
    }
    fn identity_mass(&self) -> bool {
        true
    }
    /// Solver for `c_m·M + c_a·A`.
    fn combination_solver(&self, c_m: C64, c_a: C64) -> Result<Box<dyn LinearSolver>>;

    fn dense_a(&self) -> CMatrix {
        dense_of(self.dim(), |x, y| self.apply_a(x, y))
    }
    fn dense_m(&self) -> CMatrix {
        dense_of(self.dim(), |x, y| self.apply_m(x, y))
    }
}

pub fn dense_of(n: usize, f: impl Fn(&[C64], &mut [C64])) -> CMatrix {
    let mut out = CMatrix::zeros(n, n);
    let mut e = vec![C64::new(0.0, 0.0); n];
    let mut y = vec![C64::new(0.0, 0.0); n];
    for j in 0..n {
        e[j] = C64::new(1.0, 0.0);
        f(&e, &mut y);
        out.column_mut(j).copy_from_slice(&y);
        e[j] = C64::new(0.0, 0.0);
    }
    out
}

/// Sparse real `A` with optional sparse `M` (identity when absent).
#[derive(Clone, Debug)]
pub struct SparsePencil {
    pub a: SparseMatrix<f64>,
    pub m: Option<SparseMatrix<f64>>,
}

impl SparsePencil {
    pub fn new(a: SparseMatrix<f64>, m: Option<SparseMatrix<f64>>) -> Self {
        if let Some(m) = &m {
            assert_eq!((m.nrows(), m.ncols()), (a.nrows(), a.ncols()));
        }
        Self { a, m }
    }

    pub fn combination(&self, c_m: C64, c_a: C64) -> SparseMatrix<C64> {
        let a = self.a.to_complex();
        let m = match &self.m {
            Some(m) => m.to_complex(),
            None => SparseMatrix::identity(self.a.nrows()),
        };
        a.lin_comb(c_a, &m, c_m)
    }
}

impl SpacePencil for SparsePencil {
    fn dim(&self) -> usize {
        self.a.nrows()
    }
    fn is_real(&self) -> bool {
        true
    }
    fn apply_a(&self, x: &[C64], y: &mut [C64]) {
        self.a.matvec(x, y)
    }
    fn apply_m(&self, x: &[C64], y: &mut [C64]) {
        match &self.m {
            Some(m) => m.matvec(x, y),
            None => y.copy_from_slice(x),
        }
    }
    fn identity_mass(&self) -> bool {
        self.m.is_none()
    }
    fn combination_solver(&self, c_m: C64, c_a: C64) -> Result<Box<dyn LinearSolver>> {
        if self.m.is_none() && c_a == C64::new(0.0, 0.0) {
            if c_m == C64::new(0.0, 0.0) {
                return Err(Error::NumericallySingular { index: 0, pivot: 0.0 });
            }
            return Ok(Box::new(ScaledIdentity { n: self.dim(), inv: 1.0 / c_m }));
        }
        Ok(Box::new(SparseLu::new(&self.combination(c_m, c_a))?))
    }
    fn dense_a(&self) -> CMatrix {
        self.a.to_dense().map(|v| C64::new(v, 0.0))
    }
    fn dense_m(&self) -> CMatrix {
        match &self.m {
            Some(m) => m.to_dense().map(|v| C64::new(v, 0.0)),
            None => CMatrix::identity(self.dim(), self.dim()),
        }
    }
}

struct ScaledIdentity {
    n: usize,
    inv: C64,
}

impl LinearSolver for ScaledIdentity {
    fn dim(&self) -> usize {
        self.n
    }
    fn solve_in_place(&self, b: &mut [C64]) -> Result<()> {
        b.iter_mut().for_each(|z| *z *= self.inv);
        Ok(())
    }
}

pub fn real_dense_to_sparse(m: &DMatrix<f64>) -> SparseMatrix<f64> {
    SparseMatrix::from_dense(m)
}
