use crate::la::{CMatrix, C64};

/// `X = left · middle · rightᴴ`
#[derive(Clone, Debug)]
pub struct LowRankSolution {
    pub left: CMatrix,
    pub middle: CMatrix,
    pub right: CMatrix,
}

impl LowRankSolution {
    pub fn zeros(n: usize, n_t: usize) -> Self {
        Self { left: CMatrix::zeros(n, 0), middle: CMatrix::zeros(0, 0), right: CMatrix::zeros(n_t, 0) }
    }

    pub fn rank(&self) -> usize {
        self.middle.nrows().min(self.middle.ncols())
    }

    pub fn dense(&self) -> CMatrix {
        &self.left * &self.middle * self.right.adjoint()
    }

    /// Singular values of the product, descending.
    pub fn singular_values(&self) -> Vec<f64> {
        let (_, core, _) = self.orthogonal_core();
        let mut s: Vec<f64> = core.singular_values().iter().copied().collect();
        s.sort_by(|a, b| b.total_cmp(a));
        s
    }

    pub fn norm(&self) -> f64 {
        self.singular_values().iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    fn orthogonal_core(&self) -> (CMatrix, CMatrix, CMatrix) {
        let ql = self.left.clone().qr();
        let qr = self.right.clone().qr();
        let core = ql.r() * &self.middle * qr.r().adjoint();
        (ql.q(), core, qr.q())
    }
}

/// Truncated SVD of the product: keeps the smallest rank whose discarded
/// singular values have Frobenius norm at most `tol · ‖X‖_F`.
pub fn recompress(sol: &LowRankSolution, tol: f64) -> LowRankSolution {
    let (n, n_t) = (sol.left.nrows(), sol.right.nrows());
    if sol.rank() == 0 || sol.left.ncols() == 0 || sol.right.ncols() == 0 {
        return LowRankSolution::zeros(n, n_t);
    }
    let (ql, core, qr) = sol.orthogonal_core();
    let svd = core.svd(true, true);
    let (u, vt) = (svd.u.unwrap(), svd.v_t.unwrap());
    let mut order: Vec<usize> = (0..svd.singular_values.len()).collect();
    order.sort_by(|&a, &b| svd.singular_values[b].total_cmp(&svd.singular_values[a]));
    let s: Vec<f64> = order.iter().map(|&i| svd.singular_values[i]).collect();
    let total: f64 = s.iter().map(|v| v * v).sum::<f64>().sqrt();
    let mut r = s.len();
    let mut tail = 0.0;
    while r > 0 && (tail + s[r - 1] * s[r - 1]).sqrt() <= tol * total {
        tail += s[r - 1] * s[r - 1];
        r -= 1;
    }
    let left = CMatrix::from_fn(ql.ncols(), r, |i, j| u[(i, order[j])]);
    let right = CMatrix::from_fn(qr.ncols(), r, |i, j| vt[(order[j], i)].conj());
    LowRankSolution {
        left: ql * left,
        middle: CMatrix::from_fn(r, r, |i, j| if i == j { C64::new(s[i], 0.0) } else { C64::new(0.0, 0.0) }),
        right: qr * right,
    }
}
