//! Fast paths against dense assembly.

mod common;

use common::*;
use fraclap::stepper::*;
use fraclap::structured::fft::{fft_count, reset_fft_count};
use fraclap::structured::{gs_precompute, tau_spec_2d, SymToeplitz, TauSpec};
use fraclap::{Field, FracOrder, Grid2D};

fn example1(n: usize, alpha: f64) -> (Problem<f64>, Grid2D<f64>) {
    let p = Example::SineGordon.problem::<f64>(FracOrder::new(alpha).unwrap());
    let grid = Grid2D::new(p.a, p.b, n).unwrap();
    (p, grid)
}

fn random_state(n: usize, seed: u64, tau: f64) -> SchemeState<f64> {
    let mut r = rng(seed);
    SchemeState {
        u_prev: Field::from_vec(n, rand_vec(&mut r, n * n)).unwrap(),
        u_curr: Field::from_vec(n, rand_vec(&mut r, n * n)).unwrap(),
        n: 1,
        t: tau,
    }
}

#[test]
fn general_rhs_matches_dense() {
    let (p, grid) = example1(8, 1.3);
    let tau = 0.2;
    let ops = build_operators(&p, &grid, tau, &SolverOptions::default()).unwrap();
    let d = dense_grid_ops(p.alpha, &grid);
    let s = random_state(8, 1, tau);
    let lu = d.lap.matvec(s.u_curr.as_slice());
    let expect: Vec<f64> = s
        .u_curr
        .as_slice()
        .iter()
        .zip(&lu)
        .map(|(&u, &l)| -tau * tau * l - tau * tau * u.sin())
        .collect();
    let got = rhs_general(&s, &ops, &p.nonlinearity).unwrap();
    assert!(rel_diff(got.as_slice(), &expect) < 1e-12);
}

#[test]
fn first_rhs_matches_dense() {
    let (mut p, grid) = example1(8, 1.7);
    p.phi1 = InitialData::Gaussian {
        amplitude: 0.7,
        width: 3.0,
    };
    let tau = 0.25;
    let ops = build_operators(&p, &grid, tau, &SolverOptions::default()).unwrap();
    let d = dense_grid_ops(p.alpha, &grid);
    let u0 = p.phi1.sample(&grid);
    let v0 = p.phi2.sample(&grid);
    let lu = d.lap.matvec(u0.as_slice());
    let expect: Vec<f64> = (0..64)
        .map(|k| {
            let u = u0.as_slice()[k];
            tau * v0.as_slice()[k] - tau * tau / 2.0 * lu[k] - tau * tau / 2.0 * u.sin()
        })
        .collect();
    let got = rhs_first(&u0, &v0, &ops, &p.nonlinearity).unwrap();
    assert!(rel_diff(got.as_slice(), &expect) < 1e-12);
}

/// `(I + cA_x)(I + cA_y)` with `c = τ²κ/2`.
fn dense_adi(d: &DenseGridOps, c: f64) -> Dense {
    let nn = d.ax.n;
    Dense::identity(nn)
        .scaled_add(c, &d.ax)
        .mul(&Dense::identity(nn).scaled_add(c, &d.ay))
}

#[test]
fn first_step_matches_dense_solve() {
    let (p, grid) = example1(12, 1.5);
    let tau = 0.3;
    let ops = build_operators(&p, &grid, tau, &SolverOptions::default()).unwrap();
    let d = dense_grid_ops(p.alpha, &grid);
    let u0 = p.phi1.sample(&grid);
    let v0 = p.phi2.sample(&grid);
    let lu = d.lap.matvec(u0.as_slice());
    let b: Vec<f64> = (0..144)
        .map(|k| {
            let u = u0.as_slice()[k];
            tau * v0.as_slice()[k] - tau * tau / 2.0 * lu[k] - tau * tau / 2.0 * u.sin()
        })
        .collect();
    let uhat = dense_adi(&d, tau * tau / 2.0).solve(&b);
    let expect: Vec<f64> = uhat.iter().zip(u0.as_slice()).map(|(a, b)| a + b).collect();
    let got = sadi_first_step(&p, &ops).unwrap();
    assert_eq!(got.n, 1);
    assert!(rel_diff(got.u_curr.as_slice(), &expect) < 1e-10);
}

#[test]
fn adi_solve_matches_kronecker_solve() {
    let (mut p, grid) = example1(12, 1.9);
    p.kappa = 2.5;
    let tau = 0.4;
    let ops = build_operators(&p, &grid, tau, &SolverOptions::default()).unwrap();
    let d = dense_grid_ops(p.alpha, &grid);
    let mut r = rng(9);
    let b = Field::from_vec(12, rand_vec(&mut r, 144)).unwrap();
    let expect = dense_adi(&d, tau * tau * p.kappa / 2.0).solve(b.as_slice());
    let got = adi_solve(&ops, &b).unwrap();
    assert!(rel_diff(got.as_slice(), &expect) < 1e-10);
}

#[test]
fn nonadi_step_matches_dense_solve() {
    let (p, grid) = example1(16, 1.4);
    let tau = 0.2;
    let ops = NonAdiOperators::build(&p, &grid, tau, &SolverOptions::default()).unwrap();
    let d = dense_grid_ops(p.alpha, &grid);
    let c = tau * tau / 2.0;
    let s = random_state(16, 2, tau);
    let lp = d.lap.matvec(s.u_prev.as_slice());
    let b: Vec<f64> = (0..256)
        .map(|k| {
            let (u, up) = (s.u_curr.as_slice()[k], s.u_prev.as_slice()[k]);
            2.0 * u - up - c * lp[k] - tau * tau * u.sin()
        })
        .collect();
    let expect = Dense::identity(256).scaled_add(c, &d.lap).solve(&b);
    let (got, report) = nonadi_step(s, &ops, &p.nonlinearity).unwrap();
    assert!(report.converged);
    assert!(rel_diff(got.u_curr.as_slice(), &expect) < 1e-9);
}

#[test]
fn nonadi_first_step_matches_dense_solve() {
    let (p, grid) = example1(10, 1.6);
    let tau = 0.2;
    let ops = NonAdiOperators::build(&p, &grid, tau, &SolverOptions::default()).unwrap();
    let d = dense_grid_ops(p.alpha, &grid);
    let u0 = p.phi1.sample(&grid);
    let v0 = p.phi2.sample(&grid);
    let b: Vec<f64> = (0..100)
        .map(|k| u0.as_slice()[k] + tau * v0.as_slice()[k] - tau * tau / 2.0 * u0.as_slice()[k].sin())
        .collect();
    let expect = Dense::identity(100).scaled_add(tau * tau / 2.0, &d.lap).solve(&b);
    let (got, _) = nonadi_first_step(&p, &ops).unwrap();
    assert!(rel_diff(got.u_curr.as_slice(), &expect) < 1e-9);
}

#[test]
fn laplacian_is_spd_on_small_grids() {
    for alpha in [1.1, 1.5, 1.9] {
        let (_, grid) = example1(6, alpha);
        let d = dense_grid_ops(FracOrder::new(alpha).unwrap(), &grid);
        assert!(d.lap.is_spd());
        // Ã − A is positive semidefinite: shift by a hair and factor.
        let mut gap = d.ax.scaled_add(1.0, &d.ay).scaled_add(-1.0, &d.lap);
        for k in 0..36 {
            gap.a[k * 36 + k] += 1e-10;
        }
        assert!(gap.is_spd(), "alpha {alpha}");
    }
}

#[test]
fn gs_solves_random_spd_toeplitz() {
    let mut r = rng(17);
    for (k, n) in [3usize, 8, 40, 97].into_iter().enumerate() {
        for kind in 0..2 {
            let col = random_spd_toeplitz(&mut r, n, kind);
            let h = SymToeplitz::new(col.clone()).unwrap();
            let gs = gs_precompute(&h, &TauSpec::from_toeplitz(&col).unwrap(), 1e-14).unwrap();
            let v = rand_vec(&mut r, n);
            reset_fft_count();
            let x = gs.solve(&v).unwrap();
            assert_eq!(fft_count(), 4, "n = {n}");
            let expect = Dense::symmetric_toeplitz(&col).solve(&v);
            assert!(rel_diff(&x, &expect) < 1e-10, "case {k}/{kind}");
        }
    }
}

#[test]
fn tau_2d_preconditioner_inverts_its_own_matrix() {
    // M = S diag(d) S with S the orthonormal 2D DST-I; check M⁻¹(M v) = v by
    // building M densely from basis vectors.
    let n = 5;
    let tau = tau_spec_2d::<f64>(FracOrder::new(1.5).unwrap(), n, 0.3).unwrap();
    let mut m = Dense::zeros(n * n);
    let sines = |p: usize, i: usize| {
        (2.0 / (n + 1) as f64).sqrt()
            * (std::f64::consts::PI * ((p + 1) * (i + 1)) as f64 / (n + 1) as f64).sin()
    };
    let eig = tau.eigenvalues();
    for r in 0..n * n {
        for c in 0..n * n {
            let mut s = 0.0;
            for q in 0..n {
                for p in 0..n {
                    s += sines(p, r % n) * sines(q, r / n) * eig[q * n + p] * sines(p, c % n) * sines(q, c / n);
                }
            }
            m.a[r * n * n + c] = s;
        }
    }
    let v = rand_vec(&mut rng(4), n * n);
    // tau.apply is the preconditioner solve, i.e. M⁻¹.
    let back = tau.apply(&m.matvec(&v)).unwrap();
    assert!(rel_diff(&back, &v) < 1e-12);
}
