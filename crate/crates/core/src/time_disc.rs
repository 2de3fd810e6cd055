//! Lower-triangular Toeplitz time matrices, their alpha-circulant
//! modifications, low-rank deltas and circulant eigenvalues.

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::la::{fft_forward, CMatrix, ToeplitzMatvec, C64};

/// Default rank limit of [`delta_lowrank`].
pub const MAX_DELTA_RANK: usize = 8;

/// Lower-triangular Toeplitz matrix given by its first column.
#[derive(Clone, Debug, PartialEq)]
pub struct LowerToeplitz {
    first_col: Vec<f64>,
}

impl LowerToeplitz {
    pub fn new(first_col: Vec<f64>) -> Self {
        assert!(!first_col.is_empty(), "empty Toeplitz matrix");
        Self { first_col }
    }

    pub fn identity(n_t: usize) -> Self {
        let mut c = vec![0.0; n_t];
        c[0] = 1.0;
        Self::new(c)
    }

    pub fn n_t(&self) -> usize {
        self.first_col.len()
    }

    pub fn first_col(&self) -> &[f64] {
        &self.first_col
    }

    /// Index of the last nonzero coefficient.
    pub fn bandwidth(&self) -> usize {
        self.first_col.iter().rposition(|&v| v != 0.0).unwrap_or(0)
    }

    pub fn dense(&self) -> DMatrix<f64> {
        let n = self.n_t();
        DMatrix::from_fn(n, n, |i, j| if i >= j { self.first_col[i - j] } else { 0.0 })
    }

    /// `a·self + b·other`
    pub fn lin_comb(&self, a: f64, other: &Self, b: f64) -> Self {
        assert_eq!(self.n_t(), other.n_t());
        Self::new(self.first_col.iter().zip(&other.first_col).map(|(x, y)| a * x + b * y).collect())
    }

    pub fn matvec(&self, x: &[C64]) -> Vec<C64> {
        let n = self.n_t();
        assert_eq!(x.len(), n);
        let w = self.bandwidth();
        if w > 32 {
            return self.fft_operator().apply(x);
        }
        (0..n)
            .map(|k| (0..=w.min(k)).map(|l| x[k - l] * self.first_col[l]).sum())
            .collect()
    }

    /// Solves `T y = r` by forward substitution.
    pub fn solve(&self, r: &[C64]) -> Result<Vec<C64>> {
        let n = self.n_t();
        let d = self.first_col[0];
        let scale = self.first_col.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        if d.abs() <= 1e-14 * scale || d == 0.0 {
            return Err(Error::NumericallySingular { index: 0, pivot: d.abs() });
        }
        let w = self.bandwidth();
        let mut y = r.to_vec();
        for k in 0..n {
            let mut acc = y[k];
            for l in 1..=w.min(k) {
                acc -= y[k - l] * self.first_col[l];
            }
            y[k] = acc / d;
        }
        Ok(y)
    }

    fn fft_operator(&self) -> ToeplitzMatvec {
        let col: Vec<C64> = self.first_col.iter().map(|&v| C64::new(v, 0.0)).collect();
        let mut row = vec![C64::new(0.0, 0.0); self.n_t()];
        row[0] = col[0];
        ToeplitzMatvec::new(&col, &row)
    }

    /// `X Tᵀ` for `X` with `n_t` columns.
    pub fn apply_right_transpose(&self, x: &CMatrix) -> CMatrix {
        let (nr, n) = x.shape();
        assert_eq!(n, self.n_t());
        let w = self.bandwidth();
        let mut out = CMatrix::zeros(nr, n);
        if w > 32 {
            let op = self.fft_operator();
            for r in 0..nr {
                let row: Vec<C64> = x.row(r).iter().copied().collect();
                let y = op.apply(&row);
                for (k, v) in y.into_iter().enumerate() {
                    out[(r, k)] = v;
                }
            }
            return out;
        }
        for k in 0..n {
            let mut col = out.column_mut(k);
            for l in 0..=w.min(k) {
                let b = self.first_col[l];
                if b != 0.0 {
                    col.axpy(C64::new(b, 0.0), &x.column(k - l), C64::new(1.0, 0.0));
                }
            }
        }
        out
    }
}

/// Implicit Euler: `B1 = [1, -1]/dt`, `B2 = I`.
pub fn build_euler(n_t: usize, dt: f64) -> (LowerToeplitz, LowerToeplitz) {
    assert!(n_t >= 1 && dt > 0.0);
    let mut c = vec![0.0; n_t];
    c[0] = 1.0 / dt;
    if n_t > 1 {
        c[1] = -1.0 / dt;
    }
    (LowerToeplitz::new(c), LowerToeplitz::identity(n_t))
}

/// Implicit leap-frog: `B1 = [1, -2, 1]/dt²`, `B2 = [1/2, 0, 1/2]`.
pub fn build_wave(n_t: usize, dt: f64) -> (LowerToeplitz, LowerToeplitz) {
    assert!(n_t >= 3 && dt > 0.0);
    let mut c1 = vec![0.0; n_t];
    let mut c2 = vec![0.0; n_t];
    let s = 1.0 / (dt * dt);
    c1[0] = s;
    c1[1] = -2.0 * s;
    c1[2] = s;
    c2[0] = 0.5;
    c2[2] = 0.5;
    (LowerToeplitz::new(c1), LowerToeplitz::new(c2))
}

/// Grünwald-Letnikov weights `g_0 = 1`, `g_j = (1 - (γ+1)/j) g_{j-1}`.
pub fn grunwald_weights(n: usize, gamma: f64) -> Vec<f64> {
    let mut g = Vec::with_capacity(n);
    if n == 0 {
        return g;
    }
    g.push(1.0);
    for j in 1..n {
        let prev = g[j - 1];
        g.push((1.0 - (gamma + 1.0) / j as f64) * prev);
    }
    g
}

/// Caputo derivative of order `gamma` by the unshifted Grünwald-Letnikov
/// formula: first column `dt^{-γ} g_j`.
pub fn build_gl_fractional(n_t: usize, gamma: f64, dt: f64) -> LowerToeplitz {
    assert!(gamma > 0.0 && gamma <= 1.0 && dt > 0.0);
    let s = dt.powf(-gamma);
    LowerToeplitz::new(grunwald_weights(n_t, gamma).into_iter().map(|g| g * s).collect())
}

/// Strang alpha-circulant: the lower band reflected to the upper right
/// corner and multiplied by `alpha`.
#[derive(Clone, Debug)]
pub struct AlphaCirculant {
    pub base: LowerToeplitz,
    pub alpha: C64,
}

pub fn alpha_circulant(t: &LowerToeplitz, alpha: C64) -> AlphaCirculant {
    AlphaCirculant { base: t.clone(), alpha }
}

impl AlphaCirculant {
    pub fn n_t(&self) -> usize {
        self.base.n_t()
    }

    pub fn dense(&self) -> CMatrix {
        let n = self.n_t();
        let b = self.base.first_col();
        CMatrix::from_fn(n, n, |i, j| {
            if i >= j {
                C64::new(b[i - j], 0.0)
            } else {
                self.alpha * b[n + i - j]
            }
        })
    }
}

/// `U V*` factorization of `C^{(α)} - T`.
#[derive(Clone, Debug)]
pub struct LowRankDelta {
    pub u: CMatrix,
    pub v: CMatrix,
}

impl LowRankDelta {
    pub fn rank(&self) -> usize {
        self.u.ncols()
    }

    pub fn dense(&self) -> CMatrix {
        &self.u * self.v.adjoint()
    }
}

pub fn delta_lowrank(t: &LowerToeplitz, alpha: C64) -> Result<LowRankDelta> {
    delta_lowrank_with_limit(t, alpha, MAX_DELTA_RANK)
}

pub fn delta_lowrank_with_limit(t: &LowerToeplitz, alpha: C64, limit: usize) -> Result<LowRankDelta> {
    let n = t.n_t();
    let w = t.bandwidth();
    if w > limit {
        return Err(Error::BandwidthTooLarge { bandwidth: w, limit });
    }
    let b = t.first_col();
    let mut cols = Vec::new();
    for c in 0..w {
        let u: Vec<C64> = (0..n).map(|i| if i <= c { alpha * b[w + i - c] } else { C64::new(0.0, 0.0) }).collect();
        if u.iter().any(|z| *z != C64::new(0.0, 0.0)) {
            cols.push((u, n - w + c));
        }
    }
    let k = cols.len();
    let mut u = CMatrix::zeros(n, k);
    let mut v = CMatrix::zeros(n, k);
    for (c, (col, row)) in cols.into_iter().enumerate() {
        u.column_mut(c).copy_from_slice(&col);
        v[(row, c)] = C64::new(1.0, 0.0);
    }
    Ok(LowRankDelta { u, v })
}

/// Eigenvalues of a pair of alpha-circulants sharing `alpha`, with the
/// scaling `D_α` such that `C = D_α^{-1} Ω diag(λ) Ω* D_α`.
#[derive(Clone, Debug)]
pub struct AlphaCirculantEig {
    pub alpha: C64,
    pub n_t: usize,
    pub lam1: Vec<C64>,
    pub lam2: Vec<C64>,
    pub d_alpha: Vec<C64>,
}

/// `d_i = α^{i/n}` with the principal branch of the logarithm.
pub fn alpha_scaling(alpha: C64, n_t: usize) -> Vec<C64> {
    let l = alpha.ln();
    (0..n_t).map(|i| (l * (i as f64 / n_t as f64)).exp()).collect()
}

/// Eigenvalues of `C^{(α)}` for a lower Toeplitz `t`.
pub fn circulant_eigenvalues(t: &LowerToeplitz, alpha: C64) -> Result<Vec<C64>> {
    if alpha == C64::new(0.0, 0.0) {
        return Err(Error::InvalidArgument("alpha = 0 has no circulant diagonalization".into()));
    }
    let n = t.n_t();
    let d = alpha_scaling(alpha, n);
    let v: Vec<C64> = t.first_col().iter().zip(&d).map(|(&b, di)| di * b).collect();
    let s = (n as f64).sqrt();
    Ok(fft_forward(&v).into_iter().map(|z| z * s).collect())
}

pub fn circulant_eigs(c1: &AlphaCirculant, c2: &AlphaCirculant) -> Result<AlphaCirculantEig> {
    if c1.n_t() != c2.n_t() || c1.alpha != c2.alpha {
        return Err(Error::InvalidArgument("alpha-circulants must share n_t and alpha".into()));
    }
    Ok(AlphaCirculantEig {
        alpha: c1.alpha,
        n_t: c1.n_t(),
        lam1: circulant_eigenvalues(&c1.base, c1.alpha)?,
        lam2: circulant_eigenvalues(&c2.base, c2.alpha)?,
        d_alpha: alpha_scaling(c1.alpha, c1.n_t()),
    })
}

impl AlphaCirculantEig {
    /// `D_α^{-1} Ω diag(λ) Ω* D_α` assembled densely.
    pub fn reconstruct(&self, lam: &[C64]) -> CMatrix {
        let n = self.n_t;
        let mut cols = CMatrix::zeros(n, n);
        for j in 0..n {
            let mut e = vec![C64::new(0.0, 0.0); n];
            e[j] = self.d_alpha[j];
            let mut w = fft_forward(&e);
            w.iter_mut().zip(lam).for_each(|(a, l)| *a *= l);
            let back = crate::la::fft_inverse(&w);
            for i in 0..n {
                cols[(i, j)] = back[i] / self.d_alpha[i];
            }
        }
        cols
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn c(x: f64) -> C64 {
        C64::new(x, 0.0)
    }

    #[test]
    fn euler_builders() {
        let (b1, b2) = build_euler(3, 1.0);
        let expect = DMatrix::from_row_slice(3, 3, &[1.0, 0.0, 0.0, -1.0, 1.0, 0.0, 0.0, -1.0, 1.0]);
        assert_eq!(b1.dense(), expect);
        assert_eq!(b2.dense(), DMatrix::identity(3, 3));
        assert_eq!(build_euler(1, 0.25).0.first_col(), &[4.0]);
        assert_eq!(build_euler(2, 0.5).0.first_col(), &[2.0, -2.0]);
    }

    #[test]
    fn wave_builders() {
        let (b1, b2) = build_wave(4, 1.0);
        let d = b1.dense();
        assert_eq!(d.row(3).iter().copied().collect::<Vec<_>>(), vec![0.0, 1.0, -2.0, 1.0]);
        assert_eq!(d.row(2).iter().copied().collect::<Vec<_>>(), vec![1.0, -2.0, 1.0, 0.0]);
        assert!(b2.dense().diagonal().iter().all(|&v| v == 0.5));
        let (b1s, _) = build_wave(4, 2.0);
        assert_eq!(b1s.dense(), b1.dense() / 4.0);
    }

    #[test]
    fn grunwald_recurrence() {
        let g = grunwald_weights(4, 0.3);
        assert!((g[1] + 0.3).abs() < 1e-15);
        assert!((g[2] + 0.105).abs() < 1e-15);
        let g = grunwald_weights(5, 1.0);
        assert_eq!(&g[..3], &[1.0, -1.0, 0.0]);
        assert!(g[3..].iter().all(|&v| v == 0.0));
        let b = build_gl_fractional(4, 0.5, 0.25);
        assert!((b.first_col()[0] - 2.0).abs() < 1e-15);
    }

    #[test]
    fn fractional_weight_signs() {
        let g = grunwald_weights(400, 0.3);
        assert_eq!(g[0], 1.0);
        assert!(g[1..].iter().all(|&v| v < 0.0));
        let mut s = 0.0;
        for v in &g {
            s += v;
            assert!(s > 0.0 && s <= 1.0);
        }
    }

    #[test]
    fn euler_circulant_corner() {
        let (b1, _) = build_euler(5, 0.5);
        let alpha = C64::new(0.3, 0.2);
        let d = alpha_circulant(&b1, alpha).dense();
        assert_eq!(d[(0, 4)], -alpha * 2.0);
        assert_eq!(alpha_circulant(&b1, c(0.0)).dense(), b1.dense().map(c));
        let delta = delta_lowrank(&b1, alpha).unwrap();
        assert_eq!(delta.rank(), 1);
        assert_eq!(delta.u[(0, 0)], -alpha * 2.0);
        assert_eq!(delta.v[(4, 0)], c(1.0));
    }

    #[test]
    fn banded_reflection_touches_triangle() {
        let t = LowerToeplitz::new(vec![1.0, 2.0, 3.0, 0.0]);
        let alpha = c(0.5);
        let diff = alpha_circulant(&t, alpha).dense() - t.dense().map(c);
        let nz: Vec<(usize, usize)> = (0..4)
            .flat_map(|i| (0..4).map(move |j| (i, j)))
            .filter(|&(i, j)| diff[(i, j)] != c(0.0))
            .collect();
        assert_eq!(nz, vec![(0, 2), (0, 3), (1, 3)]);
        assert_eq!(diff[(0, 2)], c(1.5));
        assert_eq!(diff[(0, 3)], c(1.0));
        assert_eq!(diff[(1, 3)], c(1.5));
    }

    #[test]
    fn identity_delta_is_empty_and_wave_rank_two() {
        let (b1, b2) = build_wave(9, 0.1);
        assert_eq!(delta_lowrank(&b2, c(1.0)).unwrap().rank(), 2);
        assert_eq!(delta_lowrank(&b1, c(1.0)).unwrap().rank(), 2);
        assert_eq!(delta_lowrank(&LowerToeplitz::identity(6), c(1.0)).unwrap().rank(), 0);
        let frac = build_gl_fractional(32, 0.3, 0.1);
        assert!(matches!(delta_lowrank(&frac, c(1.0)), Err(Error::BandwidthTooLarge { bandwidth: 31, limit: 8 })));
    }

    #[test]
    fn euler_eigenvalues_are_roots_of_unity_shifts() {
        let (b1, b2) = build_euler(4, 1.0);
        let e = circulant_eigs(&alpha_circulant(&b1, c(1.0)), &alpha_circulant(&b2, c(1.0))).unwrap();
        for k in 0..4 {
            let omega = C64::from_polar(1.0, 2.0 * std::f64::consts::PI * k as f64 / 4.0);
            assert!((e.lam1[k] - (c(1.0) - omega.inv())).norm() < 1e-14);
            assert!((e.lam2[k] - c(1.0)).norm() < 1e-14);
        }
        let dense = alpha_circulant(&b1, c(1.0)).dense();
        let ev = dense.clone().eigenvalues().unwrap();
        for z in ev.iter() {
            assert!(e.lam1.iter().any(|l| (l - z).norm() < 1e-12));
        }
    }

    #[test]
    fn scaled_euler_eigenvalues_lie_on_disc() {
        let n = 50;
        let (b1, _) = build_euler(n, 1.0);
        let z = C64::from_polar(0.01, 0.7);
        let lam = circulant_eigenvalues(&b1, z).unwrap();
        let r = z.norm().powf(1.0 / n as f64);
        for l in lam {
            assert!(((l - c(1.0)).norm() - r).abs() < 1e-12);
        }
    }

    #[test]
    fn zero_alpha_rejected() {
        let (b1, b2) = build_euler(4, 1.0);
        assert!(circulant_eigs(&alpha_circulant(&b1, c(0.0)), &alpha_circulant(&b2, c(0.0))).is_err());
    }

    #[test]
    fn right_transpose_products() {
        let t = LowerToeplitz::new((0..40).map(|k| 1.0 / (k as f64 + 1.0)).collect());
        let x = CMatrix::from_fn(3, 40, |i, j| C64::new((i * j) as f64 * 0.01, (i + j) as f64 * 0.1));
        let expect = &x * t.dense().map(c).transpose();
        assert!((t.apply_right_transpose(&x) - &expect).norm() <= 1e-12 * expect.norm());
        let (b1, _) = build_wave(40, 0.5);
        let expect = &x * b1.dense().map(c).transpose();
        assert!((b1.apply_right_transpose(&x) - &expect).norm() <= 1e-12 * expect.norm());
        let v: Vec<C64> = (0..40).map(|i| c(i as f64)).collect();
        let y = t.solve(&t.matvec(&v)).unwrap();
        assert!(y.iter().zip(&v).all(|(a, b)| (a - b).norm() < 1e-9));
    }

    fn builders() -> impl Strategy<Value = LowerToeplitz> {
        (1usize..=64, 0usize..3, 0.01f64..2.0, 0.05f64..0.95).prop_map(|(n, kind, dt, g)| match kind {
            0 => build_euler(n, dt).0,
            1 => build_wave(n.max(3), dt).0,
            _ => build_gl_fractional(n.min(9), g, dt),
        })
    }

    proptest! {
        #[test]
        fn low_rank_identity_is_exact(t in builders(), re in -1.0f64..1.0, im in -1.0f64..1.0) {
            let alpha = C64::new(re, im);
            let delta = delta_lowrank(&t, alpha).unwrap();
            prop_assert!(delta.rank() <= t.bandwidth());
            let diff = alpha_circulant(&t, alpha).dense() - t.dense().map(c);
            prop_assert_eq!(delta.dense(), diff);
        }

        #[test]
        fn diagonalization_reconstructs(t in builders(), logr in -4.0f64..0.0, th in 0.0f64..6.28) {
            let alpha = C64::from_polar(10f64.powf(logr), th);
            let circ = alpha_circulant(&t, alpha);
            let eig = circulant_eigs(&circ, &circ).unwrap();
            let dense = circ.dense();
            let err = (eig.reconstruct(&eig.lam1) - &dense).norm();
            prop_assert!(err <= 1e-12 * dense.norm());
        }
    }
}
