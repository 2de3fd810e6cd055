use crate::error::{Error, Result};
use crate::la::{CMatrix, LinearSolver, SparseLu, SparseMatrix, C64};

/// Solver for `A X N1 + X N2 = F` with sparse `A` and small dense `N1, N2`.
///
/// A generalized Schur form `N1 = Q T1 Zᴴ`, `N2 = Q T2 Zᴴ` is obtained from
/// the Schur form of `(N2 + c N1)^{-1} N1` for a `c` making the sum
/// well conditioned; the triangular equation is then solved column by
/// column with one sparse factorization of `T1_kk A + T2_kk I` each.
pub struct GenSylvester {
    n: usize,
    q: CMatrix,
    z: CMatrix,
    t1: CMatrix,
    t2: CMatrix,
    a: SparseMatrix<C64>,
    diag: Vec<DiagSolve>,
}

enum DiagSolve {
    Scaled(C64),
    Lu(SparseLu),
}

const SHIFT_CANDIDATES: [(f64, f64); 8] =
    [(1.0, 0.0), (-1.0, 0.0), (0.0, 1.0), (0.0, -1.0), (2.0, 0.0), (0.5, 0.7), (-0.3, 1.9), (3.1, -2.3)];

fn rcond(m: &CMatrix) -> f64 {
    let sv = m.singular_values();
    let (lo, hi) = sv.iter().fold((f64::INFINITY, 0.0f64), |(l, h), v| (l.min(*v), h.max(*v)));
    if hi == 0.0 {
        0.0
    } else {
        lo / hi
    }
}

impl GenSylvester {
    pub fn new(a: &SparseMatrix<f64>, n1: &CMatrix, n2: &CMatrix) -> Result<Self> {
        let k = n1.nrows();
        if !n1.is_square() || n2.shape() != n1.shape() || a.nrows() != a.ncols() {
            return Err(Error::Dimension(format!("A {:?}, N1 {:?}, N2 {:?}", (a.nrows(), a.ncols()), n1.shape(), n2.shape())));
        }
        let mut best: Option<(f64, CMatrix, C64)> = None;
        for (re, im) in SHIFT_CANDIDATES {
            let c = C64::new(re, im);
            let p = n2 + n1 * c;
            let r = rcond(&p);
            if best.as_ref().is_none_or(|(b, _, _)| r > *b) {
                best = Some((r, p, c));
            }
            if r > 1e-4 {
                break;
            }
        }
        let (r, p, c) = best.unwrap();
        if r <= 1e-13 {
            return Err(Error::SingularPencil { i: 0, j: 0 });
        }
        let pinv = p.clone().try_inverse().ok_or(Error::SingularPencil { i: 0, j: 0 })?;
        let (u, s) = nalgebra::Schur::new(&pinv * n1).unpack();
        let qr = (&p * &u).qr();
        let (q, rr) = (qr.q(), qr.r());
        let t1 = &rr * &s;
        let t2 = &rr - &t1 * c;
        let scale = t1.iter().chain(t2.iter()).map(|z| z.norm()).fold(0.0, f64::max);
        let a = a.to_complex();
        let mut diag = Vec::with_capacity(k);
        for i in 0..k {
            let (d1, d2) = (t1[(i, i)], t2[(i, i)]);
            let tiny = 1e-13 * scale;
            if d1.norm() <= tiny && d2.norm() <= tiny {
                return Err(Error::SingularPencil { i, j: i });
            }
            diag.push(if d1.norm() <= tiny {
                DiagSolve::Scaled(1.0 / d2)
            } else {
                DiagSolve::Lu(SparseLu::new(&a.lin_comb(d1, &SparseMatrix::identity(a.nrows()), d2))?)
            });
        }
        Ok(Self { n: a.nrows(), q, z: u, t1, t2, a, diag })
    }

    pub fn size(&self) -> usize {
        self.t1.nrows()
    }

    /// `X` with `A X N1 + X N2 = F`.
    pub fn solve(&self, f: &CMatrix) -> Result<CMatrix> {
        let (n, k) = (self.n, self.size());
        if f.shape() != (n, k) {
            return Err(Error::Dimension(format!("F is {:?}, expected {:?}", f.shape(), (n, k))));
        }
        let ft = f * &self.z;
        let mut y = CMatrix::zeros(n, k);
        let mut ay = CMatrix::zeros(n, k);
        let zero = C64::new(0.0, 0.0);
        for j in 0..k {
            let mut rhs: Vec<C64> = ft.column(j).iter().copied().collect();
            for i in 0..j {
                let (c1, c2) = (self.t1[(i, j)], self.t2[(i, j)]);
                for r in 0..n {
                    rhs[r] -= c1 * ay[(r, i)] + c2 * y[(r, i)];
                }
            }
            match &self.diag[j] {
                DiagSolve::Scaled(s) => rhs.iter_mut().for_each(|v| *v *= s),
                DiagSolve::Lu(lu) => lu.solve_in_place(&mut rhs),
            }
            y.column_mut(j).copy_from_slice(&rhs);
            if (j + 1..k).any(|l| self.t1[(j, l)] != zero) {
                let mut out = vec![zero; n];
                self.a.matvec(&rhs, &mut out);
                ay.column_mut(j).copy_from_slice(&out);
            }
        }
        Ok(y * self.q.adjoint())
    }
}

impl LinearSolver for GenSylvester {
    fn dim(&self) -> usize {
        self.n * self.size()
    }
    fn solve_in_place(&self, b: &mut [C64]) -> Result<()> {
        let f = CMatrix::from_column_slice(self.n, self.size(), b);
        b.copy_from_slice(self.solve(&f)?.as_slice());
        Ok(())
    }
}

/// `X` with `A X N1 + X N2 = F`.
pub fn gen_sylvester_qz(a: &SparseMatrix<f64>, n1: &CMatrix, n2: &CMatrix, f: &CMatrix) -> Result<CMatrix> {
    GenSylvester::new(a, n1, n2)?.solve(f)
}
