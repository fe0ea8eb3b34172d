mod common;

use common::*;
use fraclap::fraccoef::{laplacian_coeffs_2d, riesz_coeffs_1d};
use fraclap::stepper::*;
use fraclap::structured::{dst1, gs_precompute, toeplitz_matvec, SymToeplitz, TauSpec};
use fraclap::{Field, FracOrder, Grid2D};
use proptest::prelude::*;

fn config() -> ProptestConfig {
    ProptestConfig::with_cases(32)
}

fn linear_problem(alpha: f64, kappa: f64, phi1: InitialData<f64>, phi2: InitialData<f64>) -> Problem<f64> {
    Problem {
        a: -6.0,
        b: 6.0,
        kappa,
        alpha: FracOrder::new(alpha).unwrap(),
        nonlinearity: Nonlinearity::Zero,
        phi1,
        phi2,
    }
}

proptest! {
    #![proptest_config(config())]

    #[test]
    fn toeplitz_matvec_is_dense_product(
        col in prop::collection::vec(-1.0f64..1.0, 1..40),
        seed in any::<u64>(),
    ) {
        let v = rand_vec(&mut rng(seed), col.len());
        let fast = toeplitz_matvec(&col, &v).unwrap();
        let dense = Dense::symmetric_toeplitz(&col).matvec(&v);
        let scale = 1.0 + dense.iter().map(|x| x.abs()).fold(0.0, f64::max);
        for (a, b) in fast.iter().zip(&dense) {
            prop_assert!((a - b).abs() < 1e-12 * scale);
        }
    }

    #[test]
    fn gs_inverts_spd_toeplitz(n in 1usize..60, kind in 0u64..2, seed in any::<u64>()) {
        let mut r = rng(seed);
        let col = random_spd_toeplitz(&mut r, n, kind);
        let h = SymToeplitz::new(col.clone()).unwrap();
        let gs = gs_precompute(&h, &TauSpec::from_toeplitz(&col).unwrap(), 1e-14).unwrap();
        let x = rand_vec(&mut r, n);
        let hx = Dense::symmetric_toeplitz(&col).matvec(&x);
        prop_assert!(rel_diff(&gs.solve(&hx).unwrap(), &x) < 1e-9);
    }

    #[test]
    fn dst1_is_an_involution(v in prop::collection::vec(-10.0f64..10.0, 1..50)) {
        let back = dst1(&dst1(&v).unwrap()).unwrap();
        for (a, b) in back.iter().zip(&v) {
            prop_assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn riesz_weights_sum_to_zero_and_alternate(alpha in 1.01f64..1.99) {
        let c = riesz_coeffs_1d::<f64>(FracOrder::new(alpha).unwrap(), 64).unwrap();
        prop_assert!(c.get(0) > 0.0);
        for k in 1..64 {
            prop_assert!(c.get(k) < 0.0);
            prop_assert!(c.get(k).abs() <= c.get(k - 1).abs() || k == 1);
        }
        // Full-line sum vanishes; the tail past 64 is O(64^{-α}).
        prop_assert!(c.symmetric_sum().abs() < 2.0 * 64f64.powf(-alpha));
    }

    #[test]
    fn laplacian_weights_symmetric_with_negative_off_center(alpha in 1.01f64..1.99) {
        let c = laplacian_coeffs_2d::<f64>(FracOrder::new(alpha).unwrap(), 12, 8).unwrap();
        prop_assert!(c.get(0, 0) > 0.0);
        for i in 0..12isize {
            for j in 0..12isize {
                prop_assert_eq!(c.get(i, j), c.get(j, i));
                prop_assert_eq!(c.get(i, j), c.get(-i, j));
                if (i, j) != (0, 0) {
                    prop_assert!(c.get(i, j) < 0.0, "a[{}][{}] = {}", i, j, c.get(i, j));
                }
            }
        }
    }

    #[test]
    fn refined_grid_restricts_to_coarse(n in 1usize..20, a in -5.0f64..0.0, len in 0.5f64..10.0) {
        let coarse = Grid2D::new(a, a + len, n).unwrap();
        let f = |x: f64, y: f64| (x * 1.3).sin() + y * y;
        let fine = Field::from_fn(&coarse.refined(), f).restrict_to_coarse().unwrap();
        let direct = Field::from_fn(&coarse, f);
        for (x, y) in fine.as_slice().iter().zip(direct.as_slice()) {
            prop_assert!((x - y).abs() < 1e-12 * (1.0 + y.abs()));
        }
    }

    #[test]
    fn tabulated_g_hits_its_knots(ys in prop::collection::vec(-5.0f64..5.0, 2..10)) {
        let xs: Vec<f64> = (0..ys.len()).map(|k| k as f64 * 0.5 - 1.0).collect();
        let t = Tabulated::new(xs.clone(), ys.clone()).unwrap();
        for (x, y) in xs.iter().zip(&ys) {
            prop_assert!((t.eval(*x) - y).abs() < 1e-14);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn zero_data_stays_exactly_zero(
        alpha in 1.01f64..1.99,
        tau in 0.01f64..2.0,
        n in 1usize..12,
        klein in any::<bool>(),
    ) {
        let mut p = linear_problem(alpha, 1.0, InitialData::Zero, InitialData::Zero);
        p.nonlinearity = if klein { Nonlinearity::KleinGordon } else { Nonlinearity::SineGordon };
        let grid = Grid2D::new(p.a, p.b, n).unwrap();
        for scheme in [Scheme::Sadi, Scheme::NonAdi] {
            let out = run(&p, &grid, scheme, tau, 6, &SolverOptions::default(), &mut NoRecorder).unwrap();
            prop_assert!(out.state.u_curr.is_zero() && out.state.u_prev.is_zero());
        }
    }

    #[test]
    fn linear_stepping_is_homogeneous(
        alpha in 1.01f64..1.99,
        scale in -3.0f64..3.0,
        tau in 0.05f64..1.0,
    ) {
        let base = linear_problem(
            alpha,
            1.0,
            InitialData::Gaussian { amplitude: 1.0, width: 1.5 },
            InitialData::SechRadial,
        );
        let mut scaled = base.clone();
        scaled.phi1 = InitialData::Gaussian { amplitude: scale, width: 1.5 };
        scaled.phi2 = InitialData::Custom(std::sync::Arc::new(move |x: f64, y: f64| {
            scale / (x * x + y * y).sqrt().cosh()
        }));
        let grid = Grid2D::new(base.a, base.b, 11).unwrap();
        let opts = SolverOptions::default();
        let a = run(&base, &grid, Scheme::Sadi, tau, 8, &opts, &mut NoRecorder).unwrap();
        let b = run(&scaled, &grid, Scheme::Sadi, tau, 8, &opts, &mut NoRecorder).unwrap();
        let peak = a.state.u_curr.max_abs();
        for (x, y) in a.state.u_curr.as_slice().iter().zip(b.state.u_curr.as_slice()) {
            prop_assert!((scale * x - y).abs() <= 1e-12 * peak * (1.0 + scale.abs()));
        }
    }
}
