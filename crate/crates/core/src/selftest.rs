//! Fast invariant suite behind the `selftest` subcommand.
//!
//! The report carries no timings so that repeated runs are byte-identical.

use std::fmt::Write as _;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::Result;
use crate::fraccoef::{
    coeff_quadrature_oracle, laplacian_coeffs_2d, riesz_center_weight, riesz_coeffs_1d, FracOrder,
};
use crate::grid::{Field, Grid2D};
use crate::harness::{lemma2_gap, EnergyTrace, NormOperators};
use crate::stepper::{
    build_operators, nonadi_step, run, sadi_step, InitialData, NonAdiOperators, Nonlinearity,
    Problem, Scheme, SchemeState, SolverOptions,
};
use crate::structured::{fft::FftPair, gs_precompute, SymToeplitz, TauSpec};

/// Test hooks.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SelftestOptions {
    /// Perturbs the generated coefficient tables before they are checked.
    pub corrupt_coefficients: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CheckOutcome {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SelftestReport {
    pub checks: Vec<CheckOutcome>,
}

impl SelftestReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failed(&self) -> impl Iterator<Item = &CheckOutcome> {
        self.checks.iter().filter(|c| !c.passed)
    }

    pub fn render(&self) -> String {
        let mut s = String::new();
        for c in &self.checks {
            let tag = if c.passed { "PASS" } else { "FAIL" };
            let _ = writeln!(s, "{tag} {}: {}", c.name, c.detail);
        }
        let n_pass = self.checks.iter().filter(|c| c.passed).count();
        let _ = writeln!(s, "{n_pass}/{} checks passed", self.checks.len());
        s
    }
}

/// `(passed, detail)`; an `Err` counts as a failure.
type Check = fn(&SelftestOptions) -> Result<(bool, String)>;

const CHECKS: [(&str, Check); 8] = [
    ("fft_round_trip", fft_round_trip),
    ("riesz_1d_gamma", riesz_1d_gamma),
    ("laplacian_2d_quadrature", laplacian_2d_quadrature),
    ("gs_dense", gs_dense),
    ("sadi_dense", sadi_dense),
    ("nonadi_dense", nonadi_dense),
    ("lemma2_trials", lemma2_trials),
    ("energy_conservation", energy_conservation),
];

pub fn selftest(opts: &SelftestOptions) -> SelftestReport {
    let checks = CHECKS
        .iter()
        .map(|&(name, check)| match check(opts) {
            Ok((passed, detail)) => CheckOutcome { name, passed, detail },
            Err(e) => CheckOutcome {
                name,
                passed: false,
                detail: format!("error: {e}"),
            },
        })
        .collect();
    SelftestReport { checks }
}

fn verdict(err: f64, tol: f64, what: &str) -> (bool, String) {
    (err <= tol, format!("{what} {err:.3e} (limit {tol:.0e})"))
}

fn rand_vec(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect()
}

/// Gaussian elimination with partial pivoting on a row-major `n × n` matrix.
fn dense_solve(mut a: Vec<f64>, mut b: Vec<f64>) -> Vec<f64> {
    let n = b.len();
    for k in 0..n {
        let p = (k..n)
            .max_by(|&i, &j| a[i * n + k].abs().total_cmp(&a[j * n + k].abs()))
            .expect("nonempty");
        if p != k {
            for c in 0..n {
                a.swap(k * n + c, p * n + c);
            }
            b.swap(k, p);
        }
        for i in k + 1..n {
            let f = a[i * n + k] / a[k * n + k];
            for c in k..n {
                a[i * n + c] -= f * a[k * n + c];
            }
            b[i] -= f * b[k];
        }
    }
    for k in (0..n).rev() {
        let s: f64 = (k + 1..n).map(|c| a[k * n + c] * b[c]).sum();
        b[k] = (b[k] - s) / a[k * n + k];
    }
    b
}

fn matvec(a: &[f64], v: &[f64]) -> Vec<f64> {
    let n = v.len();
    (0..n).map(|i| (0..n).map(|j| a[i * n + j] * v[j]).sum()).collect()
}

fn rel_diff(a: &[f64], b: &[f64]) -> f64 {
    let num: f64 = a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum();
    let den: f64 = b.iter().map(|y| y * y).sum();
    (num / den.max(f64::MIN_POSITIVE)).sqrt()
}

fn fft_round_trip(_: &SelftestOptions) -> Result<(bool, String)> {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut worst = 0.0f64;
    for n in [1usize, 7, 64, 799] {
        let plan = FftPair::<f64>::new(n);
        let x: Vec<_> = (0..n)
            .map(|_| num_complex::Complex::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
            .collect();
        let back = plan.ifft(&plan.fft(&x));
        for (a, b) in back.iter().zip(&x) {
            worst = worst.max((a - b).norm());
        }
    }
    Ok(verdict(worst, 1e-13, "max round-trip error"))
}

fn riesz_1d_gamma(opts: &SelftestOptions) -> Result<(bool, String)> {
    let mut worst = 0.0f64;
    for alpha in [1.1, 1.5, 1.9] {
        let order = FracOrder::new(alpha)?;
        let mut c = riesz_coeffs_1d::<f64>(order, 21)?.weights;
        if opts.corrupt_coefficients {
            c[3] *= 1.001;
        }
        for (k, &ck) in c.iter().enumerate() {
            let k = k as f64;
            let direct = (-1f64).powi(k as i32) * libm::tgamma(alpha + 1.0)
                / (libm::tgamma(alpha / 2.0 - k + 1.0) * libm::tgamma(alpha / 2.0 + k + 1.0));
            worst = worst.max(((ck - direct) / direct).abs());
        }
        worst = worst.max((c[0] - riesz_center_weight(order)).abs());
    }
    Ok(verdict(worst, 1e-12, "max relative deviation"))
}

fn laplacian_2d_quadrature(opts: &SelftestOptions) -> Result<(bool, String)> {
    let mut worst = 0.0f64;
    for alpha in [1.1, 1.9] {
        let order = FracOrder::new(alpha)?;
        let mut c = laplacian_coeffs_2d::<f64>(order, 64, 8)?;
        if opts.corrupt_coefficients {
            c.quadrant_mut()[0] += 1e-4;
        }
        for (i, j) in [(0, 0), (1, 0), (1, 1), (2, 1)] {
            let q = coeff_quadrature_oracle(order, i, j, 1e-10)?;
            worst = worst.max((c.get(i as isize, j as isize) - q).abs());
        }
    }
    Ok(verdict(worst, 1e-7, "max absolute deviation"))
}

fn gs_dense(_: &SelftestOptions) -> Result<(bool, String)> {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut worst = 0.0f64;
    for n in [5usize, 16] {
        // Diagonally dominant, hence SPD.
        let mut col: Vec<f64> = (0..n).map(|k| rng.gen_range(-1.0..1.0) / (1.0 + k as f64)).collect();
        col[0] = 1.0 + 2.0 * col[1..].iter().map(|x| x.abs()).sum::<f64>();
        let h = SymToeplitz::new(col)?;
        let gs = gs_precompute(&h, &TauSpec::from_toeplitz(h.first_col())?, 1e-14)?;
        let dense: Vec<f64> = (0..n * n).map(|k| h.entry(k / n, k % n)).collect();
        let v = rand_vec(&mut rng, n);
        worst = worst.max(rel_diff(&gs.solve(&v)?, &dense_solve(dense, v)));
    }
    Ok(verdict(worst, 1e-10, "max relative error"))
}

struct DenseOps {
    /// `h^{−α}` scaled fractional Laplacian on `N² × N²`.
    lap: Vec<f64>,
    ax: Vec<f64>,
    ay: Vec<f64>,
}

fn dense_ops(alpha: FracOrder, grid: &Grid2D<f64>) -> Result<DenseOps> {
    let n = grid.n;
    let s = grid.h.powf(-alpha.value());
    let c2 = laplacian_coeffs_2d::<f64>(alpha, n, 8)?;
    let c1 = riesz_coeffs_1d::<f64>(alpha, n)?;
    let nn = n * n;
    let (mut lap, mut ax, mut ay) = (vec![0.0; nn * nn], vec![0.0; nn * nn], vec![0.0; nn * nn]);
    for r in 0..nn {
        let (ri, rj) = (r % n, r / n);
        for c in 0..nn {
            let (ci, cj) = (c % n, c / n);
            let di = (ri as isize - ci as isize).abs();
            let dj = (rj as isize - cj as isize).abs();
            lap[r * nn + c] = s * c2.get(di, dj);
            if dj == 0 {
                ax[r * nn + c] = s * c1.get(di);
            }
            if di == 0 {
                ay[r * nn + c] = s * c1.get(dj);
            }
        }
    }
    Ok(DenseOps { lap, ax, ay })
}

fn test_problem(kappa: f64) -> Problem<f64> {
    Problem {
        a: -5.0,
        b: 5.0,
        kappa,
        alpha: FracOrder::new(1.5).expect("valid order"),
        nonlinearity: Nonlinearity::SineGordon,
        phi1: InitialData::Gaussian {
            amplitude: 1.0,
            width: 2.0,
        },
        phi2: InitialData::SechRadial,
    }
}

fn sadi_dense(_: &SelftestOptions) -> Result<(bool, String)> {
    let p = test_problem(0.8);
    let grid = Grid2D::new(p.a, p.b, 8)?;
    let tau = 0.3;
    let ops = build_operators(&p, &grid, tau, &SolverOptions::default())?;
    let d = dense_ops(p.alpha, &grid)?;
    let nn = grid.n * grid.n;
    let c = tau * tau * p.kappa / 2.0;
    // (I + cA_x)(I + cA_y), dense.
    let mut ix = d.ax.iter().map(|v| c * v).collect::<Vec<_>>();
    let mut iy = d.ay.iter().map(|v| c * v).collect::<Vec<_>>();
    for k in 0..nn {
        ix[k * nn + k] += 1.0;
        iy[k * nn + k] += 1.0;
    }
    let mut m = vec![0.0; nn * nn];
    for r in 0..nn {
        for k in 0..nn {
            let v = ix[r * nn + k];
            if v != 0.0 {
                for col in 0..nn {
                    m[r * nn + col] += v * iy[k * nn + col];
                }
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let state = SchemeState {
        u_prev: Field::from_vec(grid.n, rand_vec(&mut rng, nn))?,
        u_curr: Field::from_vec(grid.n, rand_vec(&mut rng, nn))?,
        n: 1,
        t: tau,
    };
    let lu = matvec(&d.lap, state.u_curr.as_slice());
    let rhs: Vec<f64> = (0..nn)
        .map(|k| {
            let u = state.u_curr.as_slice()[k];
            -tau * tau * p.kappa * lu[k] + tau * tau * p.nonlinearity.eval(u)
        })
        .collect();
    let uhat = dense_solve(m, rhs);
    let expect: Vec<f64> = (0..nn)
        .map(|k| uhat[k] + 2.0 * state.u_curr.as_slice()[k] - state.u_prev.as_slice()[k])
        .collect();
    let got = sadi_step(state, &ops, &p.nonlinearity)?;
    Ok(verdict(rel_diff(got.u_curr.as_slice(), &expect), 1e-10, "relative error"))
}

fn nonadi_dense(_: &SelftestOptions) -> Result<(bool, String)> {
    let p = test_problem(1.0);
    let grid = Grid2D::new(p.a, p.b, 8)?;
    let tau = 0.3;
    let ops = NonAdiOperators::build(&p, &grid, tau, &SolverOptions::default())?;
    let d = dense_ops(p.alpha, &grid)?;
    let nn = grid.n * grid.n;
    let c = tau * tau * p.kappa / 2.0;
    let mut m: Vec<f64> = d.lap.iter().map(|v| c * v).collect();
    for k in 0..nn {
        m[k * nn + k] += 1.0;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let state = SchemeState {
        u_prev: Field::from_vec(grid.n, rand_vec(&mut rng, nn))?,
        u_curr: Field::from_vec(grid.n, rand_vec(&mut rng, nn))?,
        n: 1,
        t: tau,
    };
    let lp = matvec(&d.lap, state.u_prev.as_slice());
    let rhs: Vec<f64> = (0..nn)
        .map(|k| {
            let (u, up) = (state.u_curr.as_slice()[k], state.u_prev.as_slice()[k]);
            2.0 * u - up - c * lp[k] + tau * tau * p.nonlinearity.eval(u)
        })
        .collect();
    let expect = dense_solve(m, rhs);
    let (got, _) = nonadi_step(state, &ops, &p.nonlinearity)?;
    Ok(verdict(rel_diff(got.u_curr.as_slice(), &expect), 1e-9, "relative error"))
}

fn lemma2_trials(_: &SelftestOptions) -> Result<(bool, String)> {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut worst = f64::INFINITY;
    for alpha in [1.1, 1.5, 1.9] {
        let grid = Grid2D::new(0.0, 17.0, 16)?;
        let norms = NormOperators::build(FracOrder::new(alpha)?, &grid, &SolverOptions::default())?;
        for _ in 0..50 {
            let w = Field::from_vec(16, rand_vec(&mut rng, 256))?;
            let gap = lemma2_gap(&w, &norms)?;
            let scale = norms.norm_sq(crate::harness::NormKind::ATilde, &w)?;
            worst = worst.min(gap / scale);
        }
    }
    Ok((
        worst >= -1e-11,
        format!("min relative gap {worst:.3e} over 150 fields (limit -1e-11)"),
    ))
}

fn energy_conservation(_: &SelftestOptions) -> Result<(bool, String)> {
    let mut p = test_problem(1.0);
    p.nonlinearity = Nonlinearity::Zero;
    let grid = Grid2D::new(p.a, p.b, 32)?;
    let tau = 2.0 * grid.h;
    let opts = SolverOptions::default();
    let norms = NormOperators::build(p.alpha, &grid, &opts)?;
    let mut trace = EnergyTrace::new(norms, tau, p.kappa);
    run(&p, &grid, Scheme::Sadi, tau, 50, &opts, &mut trace)?;
    Ok(verdict(trace.relative_drift(), 1e-10, "relative drift"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn clean_run_passes_and_is_deterministic() {
        let a = selftest(&SelftestOptions::default());
        assert!(a.passed(), "{}", a.render());
        assert_eq!(a.render(), selftest(&SelftestOptions::default()).render());
    }

    #[test]
    fn corruption_is_named() {
        let r = selftest(&SelftestOptions {
            corrupt_coefficients: true,
        });
        let failed: Vec<_> = r.failed().map(|c| c.name).collect();
        assert_eq!(failed, vec!["riesz_1d_gamma", "laplacian_2d_quadrature"]);
    }
}
