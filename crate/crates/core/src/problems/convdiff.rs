use std::sync::Arc;

use crate::diag::SpaceTimeProblem;
use crate::error::{Error, Result};
use crate::la::{lanczos_extremes, CMatrix, SparseLu, SparseMatrix, SparsePencil, C64};
use crate::time_disc::build_euler;
use crate::zolotarev::{Disc, Enclosures, RealInterval};

/// Parameters of the cavity problem `u_t - εΔu + w·∇u = 0` on `(-1,1)²`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ConvDiffParams {
    pub eps: f64,
    pub wind: bool,
    /// Lanczos steps for the enclosure estimate.
    pub lanczos_steps: usize,
    pub inflation: f64,
}

impl Default for ConvDiffParams {
    fn default() -> Self {
        Self { eps: 0.005, wind: true, lanczos_steps: 40, inflation: 0.05 }
    }
}

fn wind(x: f64, y: f64) -> (f64, f64) {
    (2.0 * y * (1.0 - x * x), -2.0 * x * (1.0 - y * y))
}

pub fn convdiff2d(n_side: usize, n_t: usize) -> Result<SpaceTimeProblem> {
    convdiff2d_with(n_side, n_t, ConvDiffParams::default())
}

/// Central differences for diffusion, first-order upwinding for
/// convection, implicit Euler in time. Boundary value 1 on `x = 1` and 0
/// elsewhere; the interior starts at 0.
pub fn convdiff2d_with(n_side: usize, n_t: usize, prm: ConvDiffParams) -> Result<SpaceTimeProblem> {
    if n_side < 2 || n_t == 0 {
        return Err(Error::InvalidArgument(format!("need n_side >= 2 and n_t >= 1, got {n_side}, {n_t}")));
    }
    let h = 2.0 / (n_side + 1) as f64;
    let coord = |i: isize| -1.0 + (i + 1) as f64 * h;
    let idx = |i: usize, j: usize| i + j * n_side;
    let boundary = |i: isize, _j: isize| if i >= n_side as isize { 1.0 } else { 0.0 };
    let n = n_side * n_side;
    let mut trip = Vec::with_capacity(5 * n);
    let mut g = vec![0.0; n];
    let d = prm.eps / (h * h);
    for j in 0..n_side {
        for i in 0..n_side {
            let (x, y) = (coord(i as isize), coord(j as isize));
            let (wx, wy) = if prm.wind { wind(x, y) } else { (0.0, 0.0) };
            let row = idx(i, j);
            let mut diag = 4.0 * d;
            let mut nb = [(-1isize, 0isize, -d), (1, 0, -d), (0, -1, -d), (0, 1, -d)];
            if wx > 0.0 {
                diag += wx / h;
                nb[0].2 -= wx / h;
            } else {
                diag -= wx / h;
                nb[1].2 += wx / h;
            }
            if wy > 0.0 {
                diag += wy / h;
                nb[2].2 -= wy / h;
            } else {
                diag -= wy / h;
                nb[3].2 += wy / h;
            }
            trip.push((row, row, diag));
            for (di, dj, c) in nb {
                let (ii, jj) = (i as isize + di, j as isize + dj);
                if ii < 0 || jj < 0 || ii >= n_side as isize || jj >= n_side as isize {
                    g[row] -= c * boundary(ii, jj);
                } else if c != 0.0 {
                    trip.push((row, idx(ii as usize, jj as usize), c));
                }
            }
        }
    }
    let a = SparseMatrix::from_triplets(n, n, &trip);
    let dt = 1.0 / n_t as f64;
    let (b1, b2) = build_euler(n_t, dt);
    let f = CMatrix::from_fn(n, n_t, |i, _| C64::new(g[i], 0.0));
    let interval = real_part_range(&a, prm.lanczos_steps)?;
    let (lo, hi) = (interval.0 * (1.0 - prm.inflation), interval.1 * (1.0 + prm.inflation));
    let mut p = SpaceTimeProblem::new("convdiff2d", Arc::new(SparsePencil::new(a, None)), b1, b2, f, dt)?;
    p.notes.push("finite differences with upwinding stand in for Q1 SUPG elements".into());
    if lo > 0.0 {
        p = p.with_enclosures(Enclosures {
            a_interval: RealInterval::new(lo, hi),
            neg_b_disc: Disc::new(C64::new(-1.0 / dt, 0.0), (std::f64::consts::PI / (n_t + 1) as f64).cos() / dt),
        });
    } else {
        p.notes.push("Hermitian part of A is not positive definite; no enclosures".into());
    }
    Ok(p)
}

/// Extremal eigenvalues of the Hermitian part `(A + Aᵀ)/2`, which bound the
/// real parts of `W(A)`: the largest by Lanczos, the smallest by Lanczos on
/// the inverse.
fn real_part_range(a: &SparseMatrix<f64>, steps: usize) -> Result<(f64, f64)> {
    let h = a.lin_comb(0.5, &a.transpose(), 0.5);
    let n = h.nrows();
    let (_, hi) = lanczos_extremes(n, steps, |x, y| h.matvec(x, y));
    let lu = SparseLu::new(&h)?;
    let (_, inv_hi) = lanczos_extremes(n, steps, |x, y| {
        y.copy_from_slice(x);
        lu.solve_in_place(y);
    });
    Ok((1.0 / inv_hi, hi))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diag::{dense_solve, residual, SpaceTimeSystem};
    use crate::problems::laplacian_2d;
    use crate::problems::probe::check_enclosures;

    #[test]
    fn pure_diffusion_is_scaled_laplacian() {
        let prm = ConvDiffParams { wind: false, ..Default::default() };
        let p = convdiff2d_with(6, 4, prm).unwrap();
        let a = p.pencil.dense_a();
        assert!((&a - a.transpose()).norm() <= 1e-12);
        let h = 2.0 / 7.0;
        let l = laplacian_2d(6, prm.eps / (h * h)).to_dense();
        assert!((a.map(|z| z.re) - l).norm() <= 1e-12 * a.norm());
    }

    #[test]
    fn real_parts_positive_and_enclosed() {
        let p = convdiff2d(12, 8).unwrap();
        let enc = p.enclosures.expect("enclosures");
        assert!(enc.a_interval.a > 0.0);
        check_enclosures(&p);
        let ev = p.pencil.dense_a().map(|z| z.re).complex_eigenvalues();
        assert!(ev.iter().all(|z| z.re > 0.0));
    }

    #[test]
    fn boundary_data_enters_rhs() {
        let p = convdiff2d(5, 3).unwrap();
        assert!(p.rhs.column(0).iter().any(|z| z.re > 0.0));
        assert_eq!(p.rhs.column(0), p.rhs.column(2));
        assert!(residual(&p, &dense_solve(&p).unwrap()).unwrap() <= 1e-11);
        assert_eq!(p.space_dim(), 25);
    }
}
