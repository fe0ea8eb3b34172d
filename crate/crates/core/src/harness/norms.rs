//! Discrete inner products `⟨w₁, w₂⟩ = h² Σ w₁w₂` and the operator-weighted
//! variants, plus the conserved energy of the linear scheme.

use crate::error::{Error, Result};
use crate::fraccoef::{riesz_sum_coeffs_2d, FracOrder};
use crate::grid::{Field, Grid2D};
use crate::scalar::Real;
use crate::stepper::{SchemeState, SolverOptions, SpatialOperators};
use crate::structured::{BttbOperator, ToeplitzOperator};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum NormKind {
    L2,
    /// `⟨L_h^α ·, ·⟩`.
    A,
    /// `⟨(δ_x^α + δ_y^α) ·, ·⟩`.
    ATilde,
    /// `⟨δ_x^α δ_y^α ·, ·⟩`.
    B,
}

/// The three SPD operators behind the weighted norms, all scaled by `h^{−α}`
/// per direction.
#[derive(Debug, Clone)]
pub struct NormOperators<T: Real> {
    pub grid: Grid2D<T>,
    pub alpha: FracOrder,
    a: BttbOperator<T>,
    a_tilde: BttbOperator<T>,
    riesz: ToeplitzOperator<T>,
}

impl<T: Real> NormOperators<T> {
    pub fn build(alpha: FracOrder, grid: &Grid2D<T>, opts: &SolverOptions) -> Result<Self> {
        Self::from_spatial(&SpatialOperators::build(alpha, grid, opts)?)
    }

    pub fn from_spatial(spatial: &SpatialOperators<T>) -> Result<Self> {
        let n = spatial.grid.n;
        let cross = riesz_sum_coeffs_2d(spatial.alpha, n)?;
        let line: Vec<T> = (0..n)
            .map(|k| spatial.scale * spatial.riesz_1d.get(k as isize))
            .collect();
        Ok(Self {
            grid: spatial.grid,
            alpha: spatial.alpha,
            a: spatial.lap.clone(),
            a_tilde: BttbOperator::build(&cross, n, spatial.scale)?,
            riesz: ToeplitzOperator::new(&line)?,
        })
    }

    /// The operator inducing `kind` applied to `w` (identity for `L2`).
    pub fn apply(&self, kind: NormKind, w: &Field<T>) -> Result<Field<T>> {
        if w.n() != self.grid.n {
            return Err(Error::ShapeMismatch {
                expected: self.grid.n,
                found: w.n(),
            });
        }
        match kind {
            NormKind::L2 => Ok(w.clone()),
            NormKind::A => self.a.apply(w),
            NormKind::ATilde => self.a_tilde.apply(w),
            NormKind::B => {
                let mut x = w.clone();
                self.riesz.apply_lines(x.as_mut_slice())?;
                let mut y = x.transpose();
                self.riesz.apply_lines(y.as_mut_slice())?;
                Ok(y.transpose())
            }
        }
    }

    fn l2(&self, w1: &Field<T>, w2: &Field<T>) -> Result<T> {
        w1.check_same(w2)?;
        let s: T = w1.as_slice().iter().zip(w2.as_slice()).map(|(&a, &b)| a * b).sum();
        Ok(self.grid.h * self.grid.h * s)
    }

    pub fn norm_sq(&self, kind: NormKind, w: &Field<T>) -> Result<T> {
        inner_product(kind, w, w, self)
    }
}

/// `⟨K w₁, w₂⟩` with `K` the operator of `kind`.
pub fn inner_product<T: Real>(
    kind: NormKind,
    w1: &Field<T>,
    w2: &Field<T>,
    ops: &NormOperators<T>,
) -> Result<T> {
    w1.check_same(w2)?;
    let k1 = ops.apply(kind, w1)?;
    ops.l2(&k1, w2)
}

/// `‖w‖²_Ã − ‖w‖²_A`, nonnegative up to round-off.
pub fn lemma2_gap<T: Real>(w: &Field<T>, ops: &NormOperators<T>) -> Result<T> {
    Ok(ops.norm_sq(NormKind::ATilde, w)? - ops.norm_sq(NormKind::A, w)?)
}

/// Squared energy of the pair `(uⁿ, u^{n+1}) = (state.u_prev, state.u_curr)`
/// with `d = (u^{n+1} − uⁿ)/τ`:
///
/// `‖d‖² + (τ²κ/2)(‖d‖²_Ã − ‖d‖²_A) + (κ/2)(‖u^{n+1}‖²_A + ‖uⁿ‖²_A) + (κ²τ⁴/4)‖d‖²_B`.
///
/// Constant in `n` for the S-ADI scheme when `g ≡ 0`, including the first pair.
pub fn discrete_energy<T: Real>(
    state: &SchemeState<T>,
    ops: &NormOperators<T>,
    tau_step: T,
    kappa: T,
) -> Result<T> {
    let mut d = state.u_curr.clone();
    d.axpy(-T::one(), &state.u_prev)?;
    d.scale(T::one() / tau_step);
    let half = T::lit(0.5);
    let tau2 = tau_step * tau_step;
    let kinetic = ops.norm_sq(NormKind::L2, &d)?;
    let split = half * tau2 * kappa * lemma2_gap(&d, ops)?;
    let potential = half
        * kappa
        * (ops.norm_sq(NormKind::A, &state.u_curr)? + ops.norm_sq(NormKind::A, &state.u_prev)?);
    let remainder = T::lit(0.25) * kappa * kappa * tau2 * tau2 * ops.norm_sq(NormKind::B, &d)?;
    Ok(kinetic + split + potential + remainder)
}

/// `H_n²` for every pair a run produces, starting from `(u⁰, u¹)`.
#[derive(Debug, Clone)]
pub struct EnergyTrace<T: Real> {
    ops: NormOperators<T>,
    tau_step: T,
    kappa: T,
    pub values: Vec<T>,
}

impl<T: Real> EnergyTrace<T> {
    pub fn new(ops: NormOperators<T>, tau_step: T, kappa: T) -> Self {
        Self {
            ops,
            tau_step,
            kappa,
            values: Vec::new(),
        }
    }

    /// `max_n |H_n² − H_0²| / H_0²`; zero for an empty or all-zero trace.
    pub fn relative_drift(&self) -> f64 {
        let Some(&first) = self.values.first() else {
            return 0.0;
        };
        let first = first.as_f64();
        if first == 0.0 {
            return 0.0;
        }
        self.values
            .iter()
            .map(|v| ((v.as_f64() - first) / first).abs())
            .fold(0.0, f64::max)
    }
}

impl<T: Real> crate::stepper::Recorder<T> for EnergyTrace<T> {
    fn record(&mut self, state: &SchemeState<T>) -> Result<()> {
        if state.n >= 1 {
            let e = discrete_energy(state, &self.ops, self.tau_step, self.kappa)?;
            self.values.push(e);
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn ops(n: usize, h: f64, alpha: f64) -> NormOperators<f64> {
        let grid = Grid2D::with_spacing(0.0, h * (n + 1) as f64, h).unwrap();
        NormOperators::build(FracOrder::new(alpha).unwrap(), &grid, &SolverOptions::default())
            .unwrap()
    }

    #[test]
    fn l2_of_ones() {
        let o = ops(4, 0.5, 1.5);
        let w = Field::from_vec(4, vec![1.0; 16]).unwrap();
        assert!((inner_product(NormKind::L2, &w, &w, &o).unwrap() - 4.0).abs() < 1e-15);
    }

    #[test]
    fn weighted_products_are_symmetric_and_positive() {
        let o = ops(9, 0.3, 1.3);
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let mut rand_field = || Field::from_vec(9, (0..81).map(|_| rng.gen_range(-1.0..1.0)).collect()).unwrap();
        for _ in 0..5 {
            let (w1, w2) = (rand_field(), rand_field());
            for kind in [NormKind::A, NormKind::ATilde, NormKind::B] {
                let ab = inner_product(kind, &w1, &w2, &o).unwrap();
                let ba = inner_product(kind, &w2, &w1, &o).unwrap();
                assert!((ab - ba).abs() <= 1e-11 * ab.abs().max(1.0));
                assert!(o.norm_sq(kind, &w1).unwrap() > 0.0);
            }
            assert!(lemma2_gap(&w1, &o).unwrap() >= 0.0);
        }
    }

    #[test]
    fn zero_state_has_zero_energy() {
        let o = ops(5, 0.5, 1.7);
        let s = SchemeState::initial(Field::zeros(5));
        assert_eq!(discrete_energy(&s, &o, 0.1, 1.0).unwrap(), 0.0);
        assert_eq!(lemma2_gap(&Field::zeros(5), &o).unwrap(), 0.0);
    }

    #[test]
    fn shape_checked() {
        let o = ops(5, 0.5, 1.7);
        assert!(o.apply(NormKind::A, &Field::zeros(4)).is_err());
    }
}
