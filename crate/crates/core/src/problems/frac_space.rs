use std::sync::Arc;

use nalgebra::{DMatrix, SymmetricEigen};

use crate::diag::SpaceTimeProblem;
use crate::error::{Error, Result};
use crate::la::{CMatrix, LinearSolver, SchurPair, SpacePencil, ToeplitzMatvec, C64};
use crate::time_disc::{build_euler, grunwald_weights};
use crate::zolotarev::{Disc, Enclosures, RealInterval};

/// Coefficients of the two-sided fractional diffusion problem.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FracSpaceParams {
    pub gamma1: f64,
    pub gamma2: f64,
    pub a1: f64,
    pub b1: f64,
    pub a2: f64,
    pub b2: f64,
    pub t_final: f64,
}

impl Default for FracSpaceParams {
    fn default() -> Self {
        Self { gamma1: 1.75, gamma2: 1.5, a1: 1.0, b1: 0.2, a2: 0.5, b2: 1.0, t_final: 5.0 }
    }
}

/// Second-order weighted and shifted Grünwald weights:
/// `w_0 = (γ/2) g_0`, `w_k = (γ/2) g_k + ((2-γ)/2) g_{k-1}`.
pub fn wsgd_weights(n: usize, gamma: f64) -> Vec<f64> {
    let g = grunwald_weights(n, gamma);
    (0..n)
        .map(|k| 0.5 * gamma * g[k] + if k > 0 { 0.5 * (2.0 - gamma) * g[k - 1] } else { 0.0 })
        .collect()
}

/// `-(a G + b Gᵀ) / h^γ` with `G` the lower Hessenberg Toeplitz matrix of
/// the left-sided derivative, `G_{ij} = w_{i-j+1}`.
fn fractional_toeplitz(n: usize, gamma: f64, a: f64, b: f64, h: f64) -> (Vec<f64>, Vec<f64>) {
    let w = wsgd_weights(n + 1, gamma);
    let s = -h.powf(-gamma);
    let mut col = vec![0.0; n];
    let mut row = vec![0.0; n];
    for k in 0..n {
        let lower = w[k + 1];
        let upper = if k <= 1 { w[1 - k] } else { 0.0 };
        col[k] = s * (a * lower + b * upper);
        row[k] = s * (a * upper + b * lower);
    }
    (col, row)
}

fn toeplitz_dense(col: &[f64], row: &[f64]) -> DMatrix<f64> {
    let n = col.len();
    DMatrix::from_fn(n, n, |i, j| if i >= j { col[i - j] } else { row[j - i] })
}

/// `A = I ⊗ T1 + T2 ⊗ I` with dense Toeplitz `T1, T2`, applied by FFT.
/// Shifted solves are Sylvester equations `(qI + pT1) X + X (pT2)ᵀ = R`
/// using Schur forms of `T1, T2` computed once.
pub struct FracSpacePencil {
    n_side: usize,
    t1: ToeplitzMatvec,
    t2: ToeplitzMatvec,
    dense1: DMatrix<f64>,
    dense2: DMatrix<f64>,
    schur: Arc<SchurPair>,
}

impl FracSpacePencil {
    pub fn new(n_side: usize, h: f64, prm: &FracSpaceParams) -> Result<Self> {
        let (c1, r1) = fractional_toeplitz(n_side, prm.gamma1, prm.a1, prm.b1, h);
        let (c2, r2) = fractional_toeplitz(n_side, prm.gamma2, prm.a2, prm.b2, h);
        let cplx = |v: &[f64]| v.iter().map(|&x| C64::new(x, 0.0)).collect::<Vec<_>>();
        let dense1 = toeplitz_dense(&c1, &r1);
        let dense2 = toeplitz_dense(&c2, &r2);
        let schur = SchurPair::new(&dense1.map(|v| C64::new(v, 0.0)), &dense2.map(|v| C64::new(v, 0.0)))?;
        Ok(Self {
            n_side,
            t1: ToeplitzMatvec::new(&cplx(&c1), &cplx(&r1)),
            t2: ToeplitzMatvec::new(&cplx(&c2), &cplx(&r2)),
            dense1,
            dense2,
            schur: Arc::new(schur),
        })
    }

    pub fn factors(&self) -> (&DMatrix<f64>, &DMatrix<f64>) {
        (&self.dense1, &self.dense2)
    }

    /// Extremal eigenvalues of the Hermitian part of `A`.
    pub fn real_part_range(&self) -> (f64, f64) {
        let ext = |t: &DMatrix<f64>| {
            let ev = SymmetricEigen::new(0.5 * (t + t.transpose())).eigenvalues;
            (ev.min(), ev.max())
        };
        let (l1, h1) = ext(&self.dense1);
        let (l2, h2) = ext(&self.dense2);
        (l1 + l2, h1 + h2)
    }
}

struct FracSolver {
    n: usize,
    schur: Arc<SchurPair>,
    p: C64,
    q: C64,
}

impl LinearSolver for FracSolver {
    fn dim(&self) -> usize {
        self.n * self.n
    }
    fn solve_in_place(&self, b: &mut [C64]) -> Result<()> {
        let r = CMatrix::from_column_slice(self.n, self.n, b);
        let x = self.schur.solve(self.p, self.q, self.p, &r).map_err(|_| Error::NumericallySingular { index: 0, pivot: 0.0 })?;
        b.copy_from_slice(x.as_slice());
        Ok(())
    }
}

impl SpacePencil for FracSpacePencil {
    fn dim(&self) -> usize {
        self.n_side * self.n_side
    }
    fn is_real(&self) -> bool {
        true
    }
    fn apply_a(&self, x: &[C64], y: &mut [C64]) {
        let n = self.n_side;
        for j in 0..n {
            let col = self.t1.apply(&x[j * n..(j + 1) * n]);
            y[j * n..(j + 1) * n].copy_from_slice(&col);
        }
        let mut row = vec![C64::new(0.0, 0.0); n];
        for i in 0..n {
            for j in 0..n {
                row[j] = x[i + j * n];
            }
            for (j, v) in self.t2.apply(&row).into_iter().enumerate() {
                y[i + j * n] += v;
            }
        }
    }
    fn combination_solver(&self, c_m: C64, c_a: C64) -> Result<Box<dyn LinearSolver>> {
        Ok(Box::new(FracSolver { n: self.n_side, schur: self.schur.clone(), p: c_a, q: c_m }))
    }
}

pub fn frac_space(n_side: usize, n_t: usize) -> Result<SpaceTimeProblem> {
    frac_space_with(n_side, n_t, FracSpaceParams::default())
}

/// Two-sided space-fractional diffusion on `(0,1)²`, zero initial and
/// boundary data, source `10 sin(3xyt)`, implicit Euler in time.
pub fn frac_space_with(n_side: usize, n_t: usize, prm: FracSpaceParams) -> Result<SpaceTimeProblem> {
    if n_side < 2 || n_t == 0 {
        return Err(Error::InvalidArgument(format!("need n_side >= 2 and n_t >= 1, got {n_side}, {n_t}")));
    }
    let h = 1.0 / (n_side + 1) as f64;
    let pencil = FracSpacePencil::new(n_side, h, &prm)?;
    let (lo, hi) = pencil.real_part_range();
    let dt = prm.t_final / n_t as f64;
    let (b1, b2) = build_euler(n_t, dt);
    let n = n_side * n_side;
    let f = CMatrix::from_fn(n, n_t, |r, k| {
        let (x, y) = (((r % n_side) + 1) as f64 * h, ((r / n_side) + 1) as f64 * h);
        C64::new(10.0 * (3.0 * x * y * (k + 1) as f64 * dt).sin(), 0.0)
    });
    let mut p = SpaceTimeProblem::new("frac-space", Arc::new(pencil), b1, b2, f, dt)?;
    if lo > 0.0 {
        p = p.with_enclosures(Enclosures {
            a_interval: RealInterval::new(lo, hi),
            neg_b_disc: Disc::new(C64::new(-1.0 / dt, 0.0), (std::f64::consts::PI / (n_t + 1) as f64).cos() / dt),
        });
    }
    Ok(p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diag::{dense_solve, residual};
    use crate::la::operator::dense_of;
    use crate::la::kron_dense;
    use crate::problems::probe::check_enclosures;

    #[test]
    fn gamma_two_gives_three_point_stencil() {
        let w = wsgd_weights(5, 2.0);
        assert_eq!(w, vec![1.0, -2.0, 1.0, 0.0, 0.0]);
        let (col, row) = fractional_toeplitz(4, 2.0, 1.0, 0.0, 1.0);
        assert_eq!(col, vec![2.0, -1.0, 0.0, 0.0]);
        assert_eq!(row, vec![2.0, -1.0, 0.0, 0.0]);
    }

    #[test]
    fn matvec_matches_dense_assembly() {
        let n = 8;
        let pencil = FracSpacePencil::new(n, 1.0 / 9.0, &FracSpaceParams::default()).unwrap();
        let (t1, t2) = pencil.factors();
        let c = |m: &DMatrix<f64>| m.map(|v| C64::new(v, 0.0));
        let id = CMatrix::identity(n, n);
        let dense = kron_dense(&id, &c(t1)) + kron_dense(&c(t2), &id);
        let a = dense_of(n * n, |x, y| pencil.apply_a(x, y));
        assert!((&a - &dense).norm() <= 1e-12 * dense.norm());
        let s = pencil.combination_solver(C64::new(3.0, 1.0), C64::new(0.5, -0.2)).unwrap();
        let mut v: Vec<C64> = (0..n * n).map(|i| C64::new((i as f64).sin(), 0.0)).collect();
        let orig = CMatrix::from_column_slice(n * n, 1, &v);
        s.solve_in_place(&mut v).unwrap();
        let back = (&dense * C64::new(0.5, -0.2) + CMatrix::identity(n * n, n * n) * C64::new(3.0, 1.0))
            * CMatrix::from_column_slice(n * n, 1, &v);
        assert!((back - &orig).norm() <= 1e-11 * orig.norm());
    }

    #[test]
    fn enclosure_holds() {
        let p = frac_space(6, 5).unwrap();
        assert!(p.enclosures.is_some());
        check_enclosures(&p);
        assert!(residual(&p, &dense_solve(&p).unwrap()).unwrap() <= 1e-11);
    }
}
