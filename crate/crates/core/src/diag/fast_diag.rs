use rayon::prelude::*;

use super::{is_real_matrix, SpaceTimeSystem};
use crate::error::{Error, Result};
use crate::la::{CMatrix, LinearSolver, RowFft, C64};
use crate::time_disc::{alpha_circulant, circulant_eigs, AlphaCirculantEig};

/// Solver for `A X (C2^{(α)})ᵀ + M X (C1^{(α)})ᵀ = F` by diagonalizing
/// the alpha-circulants with the scaled DFT.
pub struct DiagSolver<'a, S: SpaceTimeSystem + ?Sized> {
    sys: &'a S,
    eig: AlphaCirculantEig,
    fft: RowFft,
    /// Whether frequencies `j` and `n_t - j` are conjugate pairs.
    symmetric: bool,
    solvers: Option<Vec<Box<dyn LinearSolver + 'a>>>,
}

impl<'a, S: SpaceTimeSystem + ?Sized> DiagSolver<'a, S> {
    /// Computes the circulant eigenvalues; with `cache` the frequency
    /// systems are factored once here instead of on every solve.
    pub fn new(sys: &'a S, alpha: C64, cache: bool) -> Result<Self> {
        if alpha == C64::new(0.0, 0.0) {
            return Err(Error::InvalidArgument("alpha must be nonzero".into()));
        }
        let eig = circulant_eigs(&alpha_circulant(sys.b1(), alpha), &alpha_circulant(sys.b2(), alpha))?;
        let scale = eig.lam1.iter().chain(&eig.lam2).map(|z| z.norm()).fold(0.0, f64::max);
        for j in 0..eig.n_t {
            if eig.lam1[j].norm() < 1e-14 * scale && eig.lam2[j].norm() < 1e-14 * scale {
                return Err(Error::SingularFrequency { index: j });
            }
        }
        let symmetric = sys.is_real() && alpha.im == 0.0 && alpha.re > 0.0;
        let mut out = Self { sys, fft: RowFft::new(eig.n_t), eig, symmetric, solvers: None };
        if cache {
            let solvers = out
                .frequencies(true)
                .into_par_iter()
                .map(|j| out.factor(j))
                .collect::<Result<Vec<_>>>()?;
            out.solvers = Some(solvers);
        }
        Ok(out)
    }

    pub fn eigenvalues(&self) -> &AlphaCirculantEig {
        &self.eig
    }

    fn frequencies(&self, symmetric: bool) -> Vec<usize> {
        let n = self.eig.n_t;
        if symmetric {
            (0..=n / 2).collect()
        } else {
            (0..n).collect()
        }
    }

    fn factor(&self, j: usize) -> Result<Box<dyn LinearSolver + 'a>> {
        self.sys.frequency_solver(self.eig.lam1[j], self.eig.lam2[j]).map_err(|e| match e {
            Error::NumericallySingular { .. } | Error::StructurallySingular(_) => Error::SingularFrequency { index: j },
            other => other,
        })
    }

    pub fn solve(&self, f: &CMatrix) -> Result<CMatrix> {
        let n_t = self.eig.n_t;
        if f.ncols() != n_t || f.nrows() != self.sys.space_dim() {
            return Err(Error::Dimension(format!("right-hand side is {:?}", f.shape())));
        }
        let symmetric = self.symmetric && is_real_matrix(f);
        let cached = self.solvers.as_ref().filter(|_| symmetric || !self.symmetric);
        let mut x = f.clone();
        for (j, d) in self.eig.d_alpha.iter().enumerate() {
            let mut c = x.column_mut(j);
            c *= *d;
        }
        self.fft.forward_rows(&mut x);
        let freqs = self.frequencies(symmetric);
        let cols: Vec<Vec<C64>> = freqs
            .par_iter()
            .map(|&j| {
                let mut col = x.column(j).as_slice().to_vec();
                match cached {
                    Some(s) => s[j].solve_in_place(&mut col),
                    None => self.factor(j)?.solve_in_place(&mut col),
                }
                .map_err(|_| Error::SingularFrequency { index: j })?;
                Ok(col)
            })
            .collect::<Result<_>>()?;
        for (&j, c) in freqs.iter().zip(&cols) {
            x.column_mut(j).copy_from_slice(c);
        }
        if symmetric {
            for j in n_t / 2 + 1..n_t {
                let src: Vec<C64> = x.column(n_t - j).iter().map(|z| z.conj()).collect();
                x.column_mut(j).copy_from_slice(&src);
            }
        }
        self.fft.inverse_rows(&mut x);
        for (j, d) in self.eig.d_alpha.iter().enumerate() {
            let mut c = x.column_mut(j);
            c *= d.inv();
        }
        Ok(x)
    }
}

impl<S: SpaceTimeSystem + ?Sized> LinearSolver for DiagSolver<'_, S> {
    fn dim(&self) -> usize {
        self.sys.space_dim() * self.eig.n_t
    }
    fn solve_in_place(&self, b: &mut [C64]) -> Result<()> {
        let f = CMatrix::from_column_slice(self.sys.space_dim(), self.eig.n_t, b);
        b.copy_from_slice(self.solve(&f)?.as_slice());
        Ok(())
    }
}

/// Solves the alpha-circulant equation for the system's right-hand side.
pub fn fast_diag_solve<S: SpaceTimeSystem + ?Sized>(sys: &S, alpha: C64) -> Result<CMatrix> {
    fast_diag_solve_rhs(sys, alpha, sys.rhs())
}

pub fn fast_diag_solve_rhs<S: SpaceTimeSystem + ?Sized>(sys: &S, alpha: C64, f: &CMatrix) -> Result<CMatrix> {
    DiagSolver::new(sys, alpha, false)?.solve(f)
}
