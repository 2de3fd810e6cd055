use nalgebra::Schur;

use super::{CMatrix, C64};
use crate::error::{Error, Result};

/// Kronecker product `a ⊗ b`.
pub fn kron_dense(a: &CMatrix, b: &CMatrix) -> CMatrix {
    let (ar, ac) = a.shape();
    let (br, bc) = b.shape();
    let mut out = CMatrix::zeros(ar * br, ac * bc);
    for j in 0..ac {
        for i in 0..ar {
            let s = a[(i, j)];
            if s == C64::new(0.0, 0.0) {
                continue;
            }
            out.view_mut((i * br, j * bc), (br, bc)).copy_from(&(b * s));
        }
    }
    out
}

pub fn solve_dense(a: &CMatrix, b: &CMatrix) -> Result<CMatrix> {
    let scale = a.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let lu = a.clone().lu();
    let u = lu.u();
    for i in 0..u.nrows() {
        if u[(i, i)].norm() <= 1e-15 * scale {
            return Err(Error::NumericallySingular { index: i, pivot: u[(i, i)].norm() });
        }
    }
    lu.solve(b).ok_or(Error::NumericallySingular { index: 0, pivot: 0.0 })
}

/// Solves `A Y + Y Bᵀ = C` by complex Schur forms of `A` and `B`.
pub fn sylvester_dense(a: &CMatrix, b: &CMatrix, c: &CMatrix) -> Result<CMatrix> {
    SchurPair::new(a, b)?.solve(C64::new(1.0, 0.0), C64::new(0.0, 0.0), C64::new(1.0, 0.0), c)
}

/// Complex Schur forms of a pair `(A, B)`, reusable for the family
/// `(pA + qI) Y + Y (rB)ᵀ = C`.
pub struct SchurPair {
    q1: CMatrix,
    t1: CMatrix,
    q2: CMatrix,
    t2: CMatrix,
}

impl SchurPair {
    pub fn new(a: &CMatrix, b: &CMatrix) -> Result<Self> {
        if !a.is_square() || !b.is_square() {
            return Err(Error::Dimension(format!("sylvester: A {:?}, B {:?}", a.shape(), b.shape())));
        }
        let (q1, t1) = if a.nrows() == 0 { (a.clone(), a.clone()) } else { Schur::new(a.clone()).unpack() };
        let (q2, t2) = if b.nrows() == 0 { (b.clone(), b.clone()) } else { Schur::new(b.clone()).unpack() };
        Ok(Self { q1, t1, q2, t2 })
    }

    pub fn solve(&self, p: C64, q: C64, r: C64, c: &CMatrix) -> Result<CMatrix> {
        let (m, n) = c.shape();
        if self.t1.nrows() != m || self.t2.nrows() != n {
            return Err(Error::Dimension(format!(
                "sylvester: A {:?}, B {:?}, C {:?}",
                self.t1.shape(),
                self.t2.shape(),
                c.shape()
            )));
        }
        if m == 0 || n == 0 {
            return Ok(CMatrix::zeros(m, n));
        }
        let (t1, t2) = (&self.t1, &self.t2);
        let ct = self.q1.adjoint() * c * self.q2.map(|z| z.conj());
        let scale = t1.iter().map(|z| (z * p).norm()).chain(t2.iter().map(|z| (z * r).norm())).fold(q.norm(), f64::max);
        let tiny = 1e-14 * scale.max(f64::MIN_POSITIVE);
        let mut y = CMatrix::zeros(m, n);
        for j in (0..n).rev() {
            let mut rhs = ct.column(j).clone_owned();
            for l in j + 1..n {
                let t = t2[(j, l)] * r;
                if t != C64::new(0.0, 0.0) {
                    rhs -= y.column(l) * t;
                }
            }
            let shift = t2[(j, j)] * r + q;
            for i in (0..m).rev() {
                let mut acc = C64::new(0.0, 0.0);
                for k in i + 1..m {
                    acc += t1[(i, k)] * y[(k, j)];
                }
                let d = t1[(i, i)] * p + shift;
                if d.norm() <= tiny {
                    return Err(Error::SingularPencil { i, j });
                }
                y[(i, j)] = (rhs[i] - acc * p) / d;
            }
        }
        Ok(&self.q1 * y * self.q2.transpose())
    }
}
