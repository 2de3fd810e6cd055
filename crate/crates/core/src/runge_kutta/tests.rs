use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::diag::{apply_operator, dense_solve, residual};
use crate::la::{kron_dense, solve_dense, SparseMatrix, C64};
use crate::problems::rk_heat;
use crate::rksm::{dense_operator, RksmOptions, UpdateOptions};
use crate::time_disc::alpha_circulant;

fn c(x: f64) -> C64 {
    C64::new(x, 0.0)
}

fn random(m: usize, n: usize, rng: &mut ChaCha8Rng) -> CMatrix {
    CMatrix::from_fn(m, n, |_, _| C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
}

fn rel(a: &CMatrix, b: &CMatrix) -> f64 {
    (a - b).norm() / b.norm()
}

#[test]
fn builtin_tableaux() {
    let t = ButcherTableau::dirk43();
    assert!(t.is_consistent() && t.is_diagonally_implicit());
    assert!((0..4).all(|i| t.g[i][i] == 0.5));
    assert!((t.b.iter().sum::<f64>() - 1.0).abs() < 1e-15);
    let json = serde_json::to_string(&t).unwrap();
    assert!(json.contains("\"G\""));
    assert_eq!(ButcherTableau::from_json(&json).unwrap(), t);
    assert_eq!(ButcherTableau::builtin("implicit-euler"), Some(ButcherTableau::implicit_euler()));
    assert!(ButcherTableau::from_json(r#"{"s":2,"G":[[1]],"b":[1],"c":[1]}"#).is_err());
}

#[test]
fn gen_sylvester_scalar_and_zero() {
    let a = crate::problems::laplacian_1d(6, 1.0);
    let n1 = CMatrix::from_element(1, 1, c(1.0));
    let n2 = CMatrix::from_element(1, 1, c(0.7));
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let f = random(6, 1, &mut rng);
    let x = gen_sylvester_qz(&a, &n1, &n2, &f).unwrap();
    let shifted = a.to_dense().map(c) + CMatrix::identity(6, 6) * c(0.7);
    assert!(rel(&x, &solve_dense(&shifted, &f).unwrap()) < 1e-13);
    let n1 = random(3, 3, &mut rng);
    let n2 = random(3, 3, &mut rng);
    let x = gen_sylvester_qz(&a, &n1, &n2, &CMatrix::zeros(6, 3)).unwrap();
    assert_eq!(x.norm(), 0.0);
}

#[test]
fn gen_sylvester_matches_kronecker_and_is_rotation_invariant() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let n = 7;
    let diag: Vec<f64> = (0..n).map(|i| 1.0 + i as f64).collect();
    let a = SparseMatrix::diagonal(&diag);
    let n1 = random(3, 3, &mut rng);
    let n2 = random(3, 3, &mut rng) + CMatrix::identity(3, 3) * c(2.0);
    let f = random(n, 3, &mut rng);
    let x = gen_sylvester_qz(&a, &n1, &n2, &f).unwrap();
    let ad = a.to_dense().map(c);
    let big = kron_dense(&n1.transpose(), &ad) + kron_dense(&n2.transpose(), &CMatrix::identity(n, n));
    let vx = solve_dense(&big, &CMatrix::from_column_slice(3 * n, 1, f.as_slice())).unwrap();
    assert!(rel(&CMatrix::from_column_slice(n, 3, vx.as_slice()), &x) <= 1e-10);
    let res = &ad * &x * &n1 + &x * &n2 - &f;
    assert!(res.norm() <= 1e-10 * f.norm());

    let w = random(3, 3, &mut rng).qr().q();
    let xr = gen_sylvester_qz(&a, &(&n1 * &w), &(&n2 * &w), &(&f * &w)).unwrap();
    assert!(rel(&xr, &x) <= 1e-10);
}

#[test]
fn singular_pencil_is_rejected() {
    let a = crate::problems::laplacian_1d(4, 1.0);
    let z = CMatrix::zeros(2, 2);
    let mut n1 = z.clone();
    n1[(0, 0)] = c(1.0);
    let err = GenSylvester::new(&a, &n1, &n1).err().unwrap();
    assert!(matches!(err, Error::SingularPencil { .. }));
}

/// The block system written out row by row.
fn hand_assembled(a: &CMatrix, tab: &ButcherTableau, n_t: usize, dt: f64) -> CMatrix {
    let (n, s) = (a.nrows(), tab.s);
    let m = n * (s + 1);
    let mut big = CMatrix::zeros(m * n_t, m * n_t);
    let id = CMatrix::identity(n, n);
    for j in 0..n_t {
        let o = j * m;
        for i in 0..s {
            for l in 0..s {
                let mut blk = -a * c(dt * tab.g[i][l]);
                if i == l {
                    blk += &id;
                }
                big.view_mut((o + i * n, o + l * n), (n, n)).copy_from(&blk);
            }
            big.view_mut((o + s * n, o + i * n), (n, n)).copy_from(&(-&id * c(dt * tab.b[i])));
            if j > 0 {
                big.view_mut((o + i * n, o - n), (n, n)).copy_from(&(-a));
            }
        }
        big.view_mut((o + s * n, o + s * n), (n, n)).copy_from(&id);
        if j > 0 {
            big.view_mut((o + s * n, o - n), (n, n)).copy_from(&(-&id));
        }
    }
    big
}

#[test]
fn structure_matches_hand_assembly() {
    let tab = ButcherTableau::dirk43();
    for (n, n_t) in [(2, 2), (3, 3), (4, 1)] {
        let p = rk_heat(n, n_t);
        let sys = assemble_rk_heat(&p, &tab).unwrap();
        let ah = sys.pencil.dense_a();
        let mh = sys.pencil.dense_m();
        let b1 = sys.problem.b1.dense().map(c);
        let coef = kron_dense(&CMatrix::identity(n_t, n_t), &ah) + kron_dense(&b1, &mh);
        let expect = hand_assembled(&p.a.to_dense().map(c), &tab, n_t, p.dt);
        assert!((coef - &expect).norm() <= 1e-12 * expect.norm(), "n={n}, n_t={n_t}");
    }
}

#[test]
fn implicit_euler_matches_multistep_path() {
    let a = -3.0;
    let (n_t, dt) = (3, 0.25);
    let am = SparseMatrix::from_triplets(1, 1, &[(0, 0, a)]);
    let sys = assemble_rk(&am, &[2.0], &|_| vec![0.0], &ButcherTableau::implicit_euler(), n_t, dt).unwrap();
    let x = dense_solve(&sys.problem).unwrap();
    let states = sys.states(&x);
    for (j, s) in states.iter().enumerate() {
        let expect = 2.0 / (1.0 - a * dt).powi(j as i32 + 1);
        assert!((s[0] - c(expect)).norm() <= 1e-13);
    }
    let oracle = sequential_rk_oracle(&am, &[2.0], &|_| vec![0.0], &ButcherTableau::implicit_euler(), n_t, dt).unwrap();
    for (o, s) in oracle.iter().zip(&states) {
        assert!((s[0].re - o[0]).abs() <= 1e-13);
    }
}

#[test]
fn oracle_quadrature_for_zero_operator() {
    let am = SparseMatrix::<f64>::zeros(2, 2);
    let f = |t: f64| vec![1.0, 2.0 * t];
    let out = sequential_rk_oracle(&am, &[1.0, 0.0], &f, &ButcherTableau::dirk43(), 4, 0.5).unwrap();
    for (j, x) in out.iter().enumerate() {
        let t = (j + 1) as f64 * 0.5;
        assert!((x[0] - (1.0 + t)).abs() < 1e-13);
        assert!((x[1] - t * t).abs() < 1e-13);
    }
}

#[test]
fn single_step_equals_direct_solve() {
    let p = rk_heat(6, 1);
    let sys = assemble_rk_heat(&p, &ButcherTableau::dirk43()).unwrap();
    let x = rk_fast_diag_solve(&sys, c(0.3)).unwrap();
    assert!(rel(&x, &dense_solve(&sys.problem).unwrap()) <= 1e-11);
}

#[test]
fn alpha_cyclic_system_residual() {
    let p = rk_heat(32, 16);
    let sys = assemble_rk_heat(&p, &ButcherTableau::dirk43()).unwrap();
    for alpha in [c(1.0), c(0.05), C64::new(0.0, 0.5)] {
        let x = rk_fast_diag_solve(&sys, alpha).unwrap();
        let c1 = alpha_circulant(&sys.problem.b1, alpha).dense();
        let ah = sys.pencil.dense_a();
        let mh = sys.pencil.dense_m();
        let f = &sys.problem.rhs;
        let res = (&ah * &x + &mh * &x * c1.transpose() - f).norm() / f.norm();
        assert!(res <= 1e-10, "alpha {alpha}: {res:e}");
    }
}

#[test]
fn shifted_time_operator() {
    let p = rk_heat(4, 3);
    let sys = assemble_rk_heat(&p, &ButcherTableau::dirk43()).unwrap();
    let eq = rk_update_transform(&sys, -2.0).unwrap();
    let bt = dense_operator(&eq.op_b).unwrap();
    let expect = [1.0 / 3.0, -1.0 / 9.0, -2.0 / 27.0];
    for i in 0..3 {
        assert!((bt[(i, 0)] - c(expect[i])).norm() <= 1e-14);
    }
    assert!((0..3).all(|i| (0..i).all(|j| bt[(j, i)].norm() <= 1e-15)));
    assert!((0..3).all(|i| (bt[(i, i)] - c(1.0 / 3.0)).norm() <= 1e-10));
    assert!(matches!(rk_update_transform(&sys, 0.0), Err(Error::SigmaShift { .. })));
}

#[test]
fn update_equation_reproduces_correction() {
    let p = rk_heat(6, 5);
    let sys = assemble_rk_heat(&p, &ButcherTableau::dirk43()).unwrap();
    let eq = rk_update_transform(&sys, DEFAULT_SIGMA).unwrap();
    let ta = dense_operator(&eq.op_a).unwrap();
    let tb = dense_operator(&eq.op_b).unwrap();
    let dx = crate::la::sylvester_dense(&ta, &tb, &(&eq.u * eq.v.transpose())).unwrap();
    let exact = dense_solve(&sys.problem).unwrap();
    assert!(rel(&(&eq.x0 + dx), &exact) <= 1e-10);
}

fn forced_system(n: usize, n_t: usize) -> (RkAllAtOnce, Vec<Vec<f64>>) {
    let p = rk_heat(n, n_t);
    let tab = ButcherTableau::dirk43();
    let f = move |t: f64| (0..n).map(|i| (3.0 * t).sin() * (1.0 + i as f64 / n as f64)).collect::<Vec<_>>();
    let sys = assemble_rk(&p.a, &p.x0, &f, &tab, n_t, p.dt).unwrap();
    let states = sequential_rk_oracle(&p.a, &p.x0, &f, &tab, n_t, p.dt).unwrap();
    (sys, states)
}

fn state_error(sys: &RkAllAtOnce, x: &CMatrix, oracle: &[Vec<f64>]) -> f64 {
    let got = sys.states(x);
    let (mut num, mut den) = (0.0, 0.0);
    for (g, o) in got.iter().zip(oracle) {
        for (a, b) in g.iter().zip(o) {
            num += (a - c(*b)).norm_sqr();
            den += b * b;
        }
    }
    (num / den).sqrt()
}

#[test]
fn solvers_agree_with_sequential_oracle() {
    let (sys, oracle) = forced_system(30, 24);
    let pg = rk_pgmres(&sys, c(1.0), 1e-10, 50).unwrap();
    assert!(pg.iterations.unwrap() <= 6);
    assert!(state_error(&sys, &pg.x, &oracle) <= 1e-8);
    let ev = rk_ev_int(&sys, 0.05, 3).unwrap();
    assert!(state_error(&sys, &ev.x, &oracle) <= 1e-8);
    let opts = UpdateOptions { rksm: RksmOptions { tol: 1e-10, max_dim: 400 }, recompress_tol: 1e-12 };
    let up = rk_low_rank_update(&sys, DEFAULT_SIGMA, &opts).unwrap();
    assert!(up.converged);
    assert!(state_error(&sys, &up.x, &oracle) <= 1e-8);
    assert!((residual(&sys.problem, &up.x).unwrap() - up.relres).abs() <= 1e-14);
}

#[test]
fn heat_benchmark_small() {
    let p = rk_heat(50, 32);
    let sys = assemble_rk_heat(&p, &ButcherTableau::dirk43()).unwrap();
    let oracle = sequential_rk_oracle(&p.a, &p.x0, &|_| vec![0.0; 50], &ButcherTableau::dirk43(), 32, p.dt).unwrap();
    let up = rk_low_rank_update(&sys, DEFAULT_SIGMA, &UpdateOptions::default()).unwrap();
    assert!(up.relres <= 1e-9, "Res {:e}", up.relres);
    assert!(up.rank.unwrap() <= 4);
    assert!(state_error(&sys, &up.x, &oracle) <= 1e-8);
    let ev = rk_ev_int(&sys, 0.05, 2).unwrap();
    assert!(ev.relres <= 1e-9, "Res {:e}", ev.relres);
    let pg = rk_pgmres(&sys, c(1.0), 1e-8, 50).unwrap();
    assert!(pg.iterations.unwrap() <= 4);
    let y = apply_operator(&sys.problem, &up.x);
    assert!(rel(&y, &sys.problem.rhs) <= 1e-9);
}

#[test]
fn dirk_is_third_order() {
    let n = 50;
    let tab = ButcherTableau::dirk43();
    let mut errs = Vec::new();
    for n_t in [25, 50, 100, 200] {
        let p = rk_heat(n, n_t);
        let out = sequential_rk_oracle(&p.a, &p.x0, &|_| vec![0.0; n], &tab, n_t, p.dt).unwrap();
        let exact = p.exact(1.0);
        let last = out.last().unwrap();
        let num: f64 = last.iter().zip(&exact).map(|(a, b)| (a - b).powi(2)).sum::<f64>().sqrt();
        let den: f64 = exact.iter().map(|v| v * v).sum::<f64>().sqrt();
        errs.push(num / den);
    }
    for w in errs.windows(2) {
        let slope = (w[0] / w[1]).log2();
        assert!((slope - 3.0).abs() <= 0.2, "slope {slope}, errors {errs:?}");
    }
}
