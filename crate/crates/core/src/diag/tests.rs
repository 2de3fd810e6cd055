use std::sync::Arc;

use super::*;
use crate::la::{sparse::SparseMatrix, SparsePencil};
use crate::problems::heat1d;
use crate::time_disc::{alpha_circulant, build_euler};

fn c(x: f64) -> C64 {
    C64::new(x, 0.0)
}

fn scalar_problem(a: f64, b1: LowerToeplitz, f: Vec<f64>) -> SpaceTimeProblem {
    let n_t = f.len();
    let pencil = SparsePencil::new(SparseMatrix::from_triplets(1, 1, &[(0, 0, a)]), None);
    let rhs = CMatrix::from_fn(1, n_t, |_, j| c(f[j]));
    SpaceTimeProblem::new("scalar", Arc::new(pencil), b1, LowerToeplitz::identity(n_t), rhs, 1.0).unwrap()
}

/// Residual of `A X C2ᵀ + M X C1ᵀ = F` with the alpha-circulants formed densely.
fn circulant_residual(p: &SpaceTimeProblem, x: &CMatrix, alpha: C64) -> f64 {
    let a = p.pencil.dense_a();
    let m = p.pencil.dense_m();
    let c1 = alpha_circulant(&p.b1, alpha).dense();
    let c2 = alpha_circulant(&p.b2, alpha).dense();
    (a * x * c2.transpose() + m * x * c1.transpose() - &p.rhs).norm() / p.rhs.norm()
}

#[test]
fn scalar_identity_case() {
    let p = scalar_problem(1.0, LowerToeplitz::identity(4), vec![2.0, -1.0, 0.5, 3.0]);
    let x = fast_diag_solve(&p, c(1.0)).unwrap();
    for j in 0..4 {
        assert!((x[(0, j)] - p.rhs[(0, j)] / 2.0).norm() < 1e-15);
    }
}

#[test]
fn heat_circulant_equation() {
    let p = heat1d(32, 32).unwrap();
    let x = fast_diag_solve(&p, c(1.0)).unwrap();
    assert!(circulant_residual(&p, &x, c(1.0)) <= 1e-10);
    let res = residual(&p, &x).unwrap();
    assert!(res > 1e-2 && res < 10.0, "{res}");
}

#[test]
fn circulant_consistency_over_alpha() {
    let p = heat1d(40, 24).unwrap();
    for alpha in [c(1.0), c(0.3), c(1e-2), c(1e-4), C64::from_polar(0.05, 2.0), c(-0.5)] {
        let x = fast_diag_solve(&p, alpha).unwrap();
        assert!(circulant_residual(&p, &x, alpha) <= 1e-9, "alpha = {alpha}");
    }
}

#[test]
fn complex_rhs_takes_full_path() {
    let mut p = heat1d(10, 9).unwrap();
    p.rhs[(3, 4)] += C64::new(0.0, 2.0);
    let x = fast_diag_solve(&p, c(0.5)).unwrap();
    assert!(circulant_residual(&p, &x, c(0.5)) <= 1e-11);
}

#[test]
fn singular_frequency_is_reported() {
    let (b1, _) = build_euler(4, 1.0);
    let p = scalar_problem(0.0, b1, vec![1.0; 4]);
    match fast_diag_solve(&p, c(1.0)) {
        Err(Error::SingularFrequency { index }) => assert_eq!(index, 0),
        other => panic!("unexpected {other:?}"),
    }
    assert!(matches!(ev_int(&p, 1.0, 2), Err(Error::EvaluationNode { node: 0, .. })));
    assert!(matches!(fast_diag_solve(&p, c(0.0)), Err(Error::InvalidArgument(_))));
}

#[test]
fn zero_rhs_is_rejected() {
    let p = scalar_problem(1.0, LowerToeplitz::identity(3), vec![0.0; 3]);
    assert!(matches!(residual(&p, &CMatrix::zeros(1, 3)), Err(Error::ZeroRightHandSide)));
}

#[test]
fn evint_single_node_is_fast_diag() {
    let p = heat1d(20, 16).unwrap();
    let rep = ev_int(&p, 0.1, 1).unwrap();
    let x = fast_diag_solve(&p, c(0.1)).unwrap();
    assert!((&rep.x - &x).norm() <= 1e-14 * x.norm());
}

#[test]
fn interpolation_identity() {
    let p = heat1d(16, 16).unwrap();
    let (rho, d) = (0.2, 5);
    let mut coeff = CMatrix::zeros(16, 16);
    for k in 0..d {
        let z = C64::from_polar(rho, 2.0 * std::f64::consts::PI * k as f64 / d as f64);
        coeff += fast_diag_solve(&p, z).unwrap();
    }
    coeff /= c(d as f64);
    let rep = ev_int(&p, rho, d).unwrap();
    assert!((&rep.x - &coeff).norm() <= 1e-13 * coeff.norm());
}

#[test]
fn evint_improves_geometrically() {
    let p = heat1d(64, 64).unwrap();
    let r1 = ev_int(&p, 1e-2, 1).unwrap().relres;
    let r2 = ev_int(&p, 1e-2, 2).unwrap().relres;
    assert!(r2 <= 1e-3 * r1, "{r1} {r2}");
}

#[test]
fn adaptive_doubling() {
    let p = heat1d(64, 64).unwrap();
    let rep = ev_int_adaptive(&p, 1e-2, 1e-8, 1, 16).unwrap();
    assert!(rep.converged);
    assert!(rep.d.unwrap() <= 4);
    assert_eq!(rep.evaluations, rep.d);
    assert!(rep.relres <= 1e-8);
    let full = ev_int_adaptive(&p, 1e-2, 0.0, 1, 8).unwrap();
    assert!(!full.converged);
    assert_eq!((full.d, full.evaluations), (Some(8), Some(8)));
    let direct = ev_int(&p, 1e-2, 8).unwrap();
    assert!((&full.x - &direct.x).norm() <= 1e-12 * direct.x.norm());
}

#[test]
fn pgmres_heat_iterations() {
    let p = heat1d(64, 64).unwrap();
    let rep = pgmres_solve(&p, c(1.0), 1e-8, 50).unwrap();
    assert!(rep.converged && rep.iterations.unwrap() <= 4, "{:?}", rep.iterations);
    assert!(rep.relres <= 1e-8);
}

#[test]
fn pgmres_exact_preconditioner() {
    let f: Vec<f64> = (0..6).map(|i| 1.0 + i as f64).collect();
    let p = scalar_problem(2.0, LowerToeplitz::new(vec![3.0, 0.0, 0.0, 0.0, 0.0, 0.0]), f);
    let rep = pgmres_solve(&p, c(1.0), 1e-10, 10).unwrap();
    assert_eq!(rep.iterations, Some(1));
}

#[test]
fn matches_dense_oracle() {
    let p = heat1d(12, 10).unwrap();
    let x = dense_solve(&p).unwrap();
    let rep = pgmres_solve(&p, c(1.0), 1e-12, 50).unwrap();
    assert!((&rep.x - &x).norm() <= 1e-9 * x.norm());
    let rep = ev_int(&p, 1e-3, 3).unwrap();
    assert!((&rep.x - &x).norm() <= 1e-8 * x.norm());
}

#[test]
fn thread_count_invariance() {
    let p = heat1d(30, 33).unwrap();
    let run = |threads| {
        rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap().install(|| ev_int(&p, 1e-2, 3).unwrap().x)
    };
    assert_eq!(run(1), run(4));
}
