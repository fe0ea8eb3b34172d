//! Operator assembly shared by the S-ADI and non-ADI steppers.

use crate::error::{Error, Result};
use crate::fraccoef::{
    laplacian_coeffs_2d_with_budget, riesz_coeffs_1d, Coeffs1D, Coeffs2D, FracOrder,
    DEFAULT_MEMORY_BUDGET, DEFAULT_OVERSAMPLING,
};
use crate::grid::Grid2D;
use crate::scalar::Real;
use crate::structured::{
    gs_precompute, tau_spec_1d, tau_spec_2d, BttbOperator, GsData, SymToeplitz, TauSpec,
};

use super::problem::Problem;

/// Numerical knobs. The defaults are the ones every study and test uses.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverOptions {
    /// Relative residual for the one-time `H c = e₁` solve.
    pub gs_tol: f64,
    /// Relative residual for the per-step non-ADI solves.
    pub pcg_tol: f64,
    pub pcg_max_iter: usize,
    pub oversampling: usize,
    pub memory_budget: usize,
    /// A step whose largest `|u|` exceeds this (or is not finite) aborts the run.
    pub blow_up: f64,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self {
            gs_tol: 1e-14,
            pcg_tol: 1e-11,
            pcg_max_iter: 1000,
            oversampling: DEFAULT_OVERSAMPLING,
            memory_budget: DEFAULT_MEMORY_BUDGET,
            blow_up: 1e12,
        }
    }
}

impl SolverOptions {
    pub fn validate(&self) -> Result<()> {
        for (name, v) in [("gs_tol", self.gs_tol), ("pcg_tol", self.pcg_tol)] {
            if !(v > 0.0 && v < 1.0) {
                return Err(Error::invalid(format!("{name} = {v} must lie in (0, 1)")));
            }
        }
        if self.pcg_max_iter == 0 {
            return Err(Error::invalid("pcg_max_iter must be positive"));
        }
        if self.oversampling < 2 {
            return Err(Error::invalid("oversampling must be at least 2"));
        }
        if !(self.blow_up > 0.0) {
            return Err(Error::invalid("blow-up threshold must be positive"));
        }
        Ok(())
    }
}

fn check_tau<T: Real>(tau_step: T) -> Result<()> {
    if !(tau_step > T::zero()) || !tau_step.is_finite() {
        return Err(Error::invalid(format!("time step {tau_step} must be positive")));
    }
    Ok(())
}

/// Coefficients and the `h^{−α}`-scaled fractional Laplacian `L_h^α` on `grid`.
#[derive(Debug, Clone)]
pub struct SpatialOperators<T: Real> {
    pub grid: Grid2D<T>,
    pub alpha: FracOrder,
    pub coeffs_2d: Coeffs2D<T>,
    pub riesz_1d: Coeffs1D<T>,
    /// `h^{−α}` as used by every operator here.
    pub scale: T,
    pub lap: BttbOperator<T>,
}

impl<T: Real> SpatialOperators<T> {
    pub fn build(alpha: FracOrder, grid: &Grid2D<T>, opts: &SolverOptions) -> Result<Self> {
        let n = grid.n;
        let coeffs_2d =
            laplacian_coeffs_2d_with_budget(alpha, n, opts.oversampling, opts.memory_budget)?;
        let riesz_1d = riesz_coeffs_1d(alpha, n)?;
        let scale = grid.h.powf(-alpha.as_real::<T>());
        let lap = BttbOperator::build(&coeffs_2d, n, scale)?;
        Ok(Self {
            grid: *grid,
            alpha,
            coeffs_2d,
            riesz_1d,
            scale,
            lap,
        })
    }

    /// First column of `I + c·h^{−α}[a_{|i−j|}]`.
    pub fn shifted_riesz_column(&self, c: T) -> Vec<T> {
        let mut col: Vec<T> = (0..self.grid.n)
            .map(|k| c * self.scale * self.riesz_1d.get(k as isize))
            .collect();
        col[0] = col[0] + T::one();
        col
    }
}

/// Everything an S-ADI step needs; `H` is shared by the x- and y-sweeps.
#[derive(Debug, Clone)]
pub struct StepOperators<T: Real> {
    pub tau_step: T,
    pub kappa: T,
    pub spatial: SpatialOperators<T>,
    pub h_matrix: SymToeplitz<T>,
    pub gs: GsData<T>,
}

impl<T: Real> StepOperators<T> {
    pub fn grid(&self) -> &Grid2D<T> {
        &self.spatial.grid
    }

    pub fn lap(&self) -> &BttbOperator<T> {
        &self.spatial.lap
    }

    /// `τ²κ/2`.
    pub fn half_coupling(&self) -> T {
        self.tau_step * self.tau_step * self.kappa / T::lit(2.0)
    }

    pub fn from_spatial(
        spatial: SpatialOperators<T>,
        kappa: T,
        tau_step: T,
        opts: &SolverOptions,
    ) -> Result<Self> {
        check_tau(tau_step)?;
        let c = tau_step * tau_step * kappa / T::lit(2.0);
        let h_matrix = SymToeplitz::new(spatial.shifted_riesz_column(c))?;
        let tau = tau_spec_1d(spatial.alpha, spatial.grid.n, c * spatial.scale)?;
        let gs = gs_precompute(&h_matrix, &tau, opts.gs_tol)?;
        Ok(Self {
            tau_step,
            kappa,
            spatial,
            h_matrix,
            gs,
        })
    }
}

/// Assembles `L_h^α`, `H = I + (τ²κ/2)h^{−α}[a_{|i−j|}]` and its
/// Gohberg–Semencul data.
pub fn build_operators<T: Real>(
    problem: &Problem<T>,
    grid: &Grid2D<T>,
    tau_step: T,
    opts: &SolverOptions,
) -> Result<StepOperators<T>> {
    problem.validate()?;
    opts.validate()?;
    check_tau(tau_step)?;
    let spatial = SpatialOperators::build(problem.alpha, grid, opts)?;
    StepOperators::from_spatial(spatial, problem.kappa, tau_step, opts)
}

/// Non-ADI baseline: `I + (τ²κ/2)L_h^α` solved by PCG with a 2D tau
/// preconditioner.
#[derive(Debug, Clone)]
pub struct NonAdiOperators<T: Real> {
    pub tau_step: T,
    pub kappa: T,
    pub spatial: SpatialOperators<T>,
    pub precond: TauSpec<T>,
    pub tol: f64,
    pub max_iter: usize,
}

impl<T: Real> NonAdiOperators<T> {
    pub fn grid(&self) -> &Grid2D<T> {
        &self.spatial.grid
    }

    pub fn half_coupling(&self) -> T {
        self.tau_step * self.tau_step * self.kappa / T::lit(2.0)
    }

    pub fn build(
        problem: &Problem<T>,
        grid: &Grid2D<T>,
        tau_step: T,
        opts: &SolverOptions,
    ) -> Result<Self> {
        problem.validate()?;
        opts.validate()?;
        check_tau(tau_step)?;
        let spatial = SpatialOperators::build(problem.alpha, grid, opts)?;
        Self::from_spatial(spatial, problem.kappa, tau_step, opts)
    }

    pub fn from_spatial(
        spatial: SpatialOperators<T>,
        kappa: T,
        tau_step: T,
        opts: &SolverOptions,
    ) -> Result<Self> {
        check_tau(tau_step)?;
        let c = tau_step * tau_step * kappa / T::lit(2.0);
        let precond = tau_spec_2d(spatial.alpha, spatial.grid.n, c * spatial.scale)?;
        Ok(Self {
            tau_step,
            kappa,
            spatial,
            precond,
            tol: opts.pcg_tol,
            max_iter: opts.pcg_max_iter,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::stepper::problem::Example;

    #[test]
    fn h_first_column() {
        let alpha = FracOrder::new(1.5).unwrap();
        let p = Example::SineGordon.problem::<f64>(alpha);
        let grid = Grid2D::new(-10.0, 10.0, 16).unwrap();
        let tau = 0.1;
        let ops = build_operators(&p, &grid, tau, &SolverOptions::default()).unwrap();
        let a = riesz_coeffs_1d::<f64>(alpha, 16).unwrap();
        let scale = grid.h.powf(-1.5);
        for i in 0..16 {
            for j in 0..16 {
                let k = (i as isize - j as isize).abs();
                let dense = f64::from(u8::from(i == j)) + tau * tau / 2.0 * scale * a.get(k);
                assert!((ops.h_matrix.entry(i, j) - dense).abs() < 1e-14);
            }
        }
        assert!(ops.h_matrix.entry(0, 0) > 1.0);
    }

    #[test]
    fn zero_coupling_gives_identity() {
        let mut p = Example::SineGordon.problem::<f64>(FracOrder::new(1.3).unwrap());
        p.kappa = 0.0;
        let grid = Grid2D::new(-1.0, 1.0, 9).unwrap();
        let ops = build_operators(&p, &grid, 0.5, &SolverOptions::default()).unwrap();
        let v: Vec<f64> = (0..9).map(|k| k as f64 - 4.0).collect();
        for (a, b) in ops.gs.solve(&v).unwrap().iter().zip(&v) {
            assert!((a - b).abs() < 1e-14);
        }
    }

    #[test]
    fn bad_inputs() {
        let p = Example::SineGordon.problem::<f64>(FracOrder::new(1.3).unwrap());
        let grid = Grid2D::new(-1.0, 1.0, 9).unwrap();
        let opts = SolverOptions::default();
        assert!(build_operators(&p, &grid, 0.0, &opts).is_err());
        assert!(build_operators(&p, &grid, f64::NAN, &opts).is_err());
        let bad = SolverOptions {
            oversampling: 1,
            ..opts
        };
        assert!(build_operators(&p, &grid, 0.1, &bad).is_err());
    }
}
