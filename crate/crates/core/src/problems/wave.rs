use std::f64::consts::PI;
use std::sync::Arc;

use crate::diag::SpaceTimeProblem;
use crate::error::{Error, Result};
use crate::la::{CMatrix, SparsePencil, C64};
use crate::time_disc::build_wave;

use super::laplacian_2d;

/// Wave equation `u_tt - Δu = (1+2π²)eᵗ sin(πx)sin(πy)` on `(0,1)²`,
/// `T = 1`, `u_0 = u_1 = sin(πx)sin(πy)`, with implicit leap-frog.
/// The unknowns are `u(t_2), …, u(t_{n_t+1})` with `Δt = T/(n_t+1)`;
/// `u(t_1)` comes from a second-order Taylor step.
pub fn wave2d(n_side: usize, n_t: usize) -> Result<SpaceTimeProblem> {
    if n_side < 1 || n_t < 3 {
        return Err(Error::InvalidArgument(format!("need n_side >= 1 and n_t >= 3, got {n_side}, {n_t}")));
    }
    let h = 1.0 / (n_side + 1) as f64;
    let a = laplacian_2d(n_side, 1.0 / (h * h));
    let n = n_side * n_side;
    let dt = 1.0 / (n_t + 1) as f64;
    let (b1, b2) = build_wave(n_t, dt);
    let shape: Vec<C64> = (0..n)
        .map(|r| {
            let (x, y) = (((r % n_side) + 1) as f64 * h, ((r / n_side) + 1) as f64 * h);
            C64::new((PI * x).sin() * (PI * y).sin(), 0.0)
        })
        .collect();
    let force = |t: f64| (1.0 + 2.0 * PI * PI) * t.exp();
    let mut au0 = vec![C64::new(0.0, 0.0); n];
    a.matvec(&shape, &mut au0);
    let u0 = shape.clone();
    let u1: Vec<C64> = (0..n).map(|i| u0[i] + dt * shape[i] + 0.5 * dt * dt * (force(0.0) * shape[i] - au0[i])).collect();
    let mut au1 = vec![C64::new(0.0, 0.0); n];
    a.matvec(&u1, &mut au1);
    let s2 = 1.0 / (dt * dt);
    let mut f = CMatrix::from_fn(n, n_t, |i, k| shape[i] * force((k + 1) as f64 * dt));
    for i in 0..n {
        f[(i, 0)] += (2.0 * u1[i] - u0[i]) * s2 - 0.5 * au0[i];
        f[(i, 1)] += -u1[i] * s2 - 0.5 * au1[i];
    }
    let mut p = SpaceTimeProblem::new("wave2d", Arc::new(SparsePencil::new(a, None)), b1, b2, f, dt)?;
    p.notes.push("no Zolotarev enclosures; use extended Krylov shifts".into());
    Ok(p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diag::{dense_solve, residual};
    use crate::time_disc::delta_lowrank;

    #[test]
    fn delta_rank_two() {
        let p = wave2d(3, 8).unwrap();
        assert_eq!(p.b2.bandwidth(), 2);
        assert_eq!(delta_lowrank(&p.b2, C64::new(1.0, 0.0)).unwrap().rank(), 2);
        assert_eq!(delta_lowrank(&p.b1, C64::new(1.0, 0.0)).unwrap().rank(), 2);
    }

    #[test]
    fn tracks_exact_solution() {
        let (n_side, n_t) = (7, 31);
        let p = wave2d(n_side, n_t).unwrap();
        let x = dense_solve(&p).unwrap();
        assert!(residual(&p, &x).unwrap() <= 1e-11);
        let h = 1.0 / 8.0;
        let (i, j) = (3, 3);
        let exact = (1.0f64).exp() * (PI * (i + 1) as f64 * h).sin() * (PI * (j + 1) as f64 * h).sin();
        let got = x[(i + j * n_side, n_t - 1)].re;
        assert!((got - exact).abs() < 2e-2 * exact, "{got} vs {exact}");
    }
}
