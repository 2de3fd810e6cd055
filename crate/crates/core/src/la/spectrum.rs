use nalgebra::{DMatrix, SymmetricEigen};

use super::{axpy, dot, norm2, C64};

/// Extremal Ritz values of a Hermitian operator after `steps` Lanczos
/// steps with full reorthogonalization. Ritz values lie inside the true
/// spectral range.
pub fn lanczos_extremes(n: usize, steps: usize, apply: impl Fn(&[C64], &mut [C64])) -> (f64, f64) {
    assert!(n > 0);
    let m = steps.clamp(1, n);
    let mut v: Vec<C64> = (0..n).map(|i| C64::new(1.0 + 0.5 * ((i as f64) * 0.7548776662).sin(), 0.0)).collect();
    let nv = norm2(&v);
    v.iter_mut().for_each(|z| *z /= nv);
    let mut basis = vec![v];
    let mut alpha = Vec::with_capacity(m);
    let mut beta: Vec<f64> = Vec::with_capacity(m);
    let mut w = vec![C64::new(0.0, 0.0); n];
    for k in 0..m {
        apply(&basis[k], &mut w);
        let a = dot(&basis[k], &w).re;
        alpha.push(a);
        for _ in 0..2 {
            for q in &basis {
                let h = dot(q, &w);
                axpy(-h, q, &mut w);
            }
        }
        let b = norm2(&w);
        let anorm = alpha.iter().map(|x| x.abs()).fold(0.0, f64::max);
        if k + 1 == m || b <= 1e-12 * anorm.max(f64::MIN_POSITIVE) {
            break;
        }
        beta.push(b);
        basis.push(w.iter().map(|z| z / b).collect());
    }
    let k = alpha.len();
    let t = DMatrix::from_fn(k, k, |i, j| {
        if i == j {
            alpha[i]
        } else if i == j + 1 {
            beta[j]
        } else if j == i + 1 {
            beta[i]
        } else {
            0.0
        }
    });
    let ev = SymmetricEigen::new(t).eigenvalues;
    (ev.min(), ev.max())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn diagonal_extremes() {
        let d: Vec<f64> = (1..=60).map(|i| i as f64).collect();
        let (lo, hi) = lanczos_extremes(60, 60, |x, y| {
            for i in 0..60 {
                y[i] = x[i] * d[i];
            }
        });
        assert!((lo - 1.0).abs() < 1e-8 && (hi - 60.0).abs() < 1e-8);
        let (lo, hi) = lanczos_extremes(60, 10, |x, y| {
            for i in 0..60 {
                y[i] = x[i] * d[i];
            }
        });
        assert!(lo >= 1.0 - 1e-12 && hi <= 60.0 + 1e-12);
    }
}
