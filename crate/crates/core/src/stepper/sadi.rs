//! Splitting ADI: `(I + cA_x)(I + cA_y) û = B` with `c = τ²κ/2`.

use crate::error::Result;
use crate::grid::Field;
use crate::scalar::Real;
use crate::structured::BttbWork;

use super::ops::StepOperators;
use super::problem::{Nonlinearity, Problem};
use super::state::SchemeState;

/// `out = s_lap·L_h^α u + s_g·g(u)`.
fn lap_plus_g<T: Real>(
    ops: &StepOperators<T>,
    u: &Field<T>,
    g: &Nonlinearity<T>,
    s_lap: T,
    s_g: T,
    work: &mut BttbWork<T>,
) -> Result<Field<T>> {
    let mut out = Field::zeros(u.n());
    if s_lap != T::zero() {
        ops.lap().apply_into(u.as_slice(), out.as_mut_slice(), work)?;
    }
    for (o, &v) in out.as_mut_slice().iter_mut().zip(u.as_slice()) {
        *o = s_lap * *o + s_g * g.eval(v);
    }
    Ok(out)
}

pub(crate) fn rhs_general_with<T: Real>(
    state: &SchemeState<T>,
    ops: &StepOperators<T>,
    g: &Nonlinearity<T>,
    work: &mut BttbWork<T>,
) -> Result<Field<T>> {
    let tau2 = ops.tau_step * ops.tau_step;
    lap_plus_g(ops, &state.u_curr, g, -tau2 * ops.kappa, tau2, work)
}

/// `Bⁿ = −τ²κ L_h^α uⁿ + τ² g(uⁿ)` for `n ≥ 1`.
pub fn rhs_general<T: Real>(
    state: &SchemeState<T>,
    ops: &StepOperators<T>,
    g: &Nonlinearity<T>,
) -> Result<Field<T>> {
    rhs_general_with(state, ops, g, &mut ops.lap().work())
}

pub(crate) fn rhs_first_with<T: Real>(
    u0: &Field<T>,
    phi2: &Field<T>,
    ops: &StepOperators<T>,
    g: &Nonlinearity<T>,
    work: &mut BttbWork<T>,
) -> Result<Field<T>> {
    u0.check_same(phi2)?;
    let half_tau2 = ops.tau_step * ops.tau_step / T::lit(2.0);
    let mut b = lap_plus_g(ops, u0, g, -half_tau2 * ops.kappa, half_tau2, work)?;
    b.axpy(ops.tau_step, phi2)?;
    Ok(b)
}

/// `B⁰ = τφ₂ − (τ²/2)κ L_h^α u⁰ + (τ²/2) g(u⁰)`.
pub fn rhs_first<T: Real>(
    u0: &Field<T>,
    phi2: &Field<T>,
    ops: &StepOperators<T>,
    g: &Nonlinearity<T>,
) -> Result<Field<T>> {
    rhs_first_with(u0, phi2, ops, g, &mut ops.lap().work())
}

/// `û = H⁻¹ B H⁻¹`: a Gohberg–Semencul solve along every x-line, then along
/// every y-line through a transpose. `2N` solves in total.
pub fn adi_solve<T: Real>(ops: &StepOperators<T>, b: &Field<T>) -> Result<Field<T>> {
    if b.n() != ops.grid().n {
        return Err(crate::Error::ShapeMismatch {
            expected: ops.grid().n,
            found: b.n(),
        });
    }
    let mut x = b.clone();
    ops.gs.solve_lines(x.as_mut_slice())?;
    let mut y = x.transpose();
    ops.gs.solve_lines(y.as_mut_slice())?;
    Ok(y.transpose())
}

pub(crate) fn sadi_first_step_with<T: Real>(
    problem: &Problem<T>,
    ops: &StepOperators<T>,
    work: &mut BttbWork<T>,
) -> Result<SchemeState<T>> {
    let u0 = problem.phi1.sample(ops.grid());
    let phi2 = problem.phi2.sample(ops.grid());
    let b = rhs_first_with(&u0, &phi2, ops, &problem.nonlinearity, work)?;
    let mut u1 = adi_solve(ops, &b)?;
    u1.axpy(T::one(), &u0)?;
    Ok(SchemeState::initial(u0).advance(u1, ops.tau_step))
}

/// `u¹ = u⁰ + û⁰`; returns the state `(u⁰, u¹)` at `n = 1`.
pub fn sadi_first_step<T: Real>(
    problem: &Problem<T>,
    ops: &StepOperators<T>,
) -> Result<SchemeState<T>> {
    sadi_first_step_with(problem, ops, &mut ops.lap().work())
}

pub(crate) fn sadi_step_with<T: Real>(
    state: SchemeState<T>,
    ops: &StepOperators<T>,
    g: &Nonlinearity<T>,
    work: &mut BttbWork<T>,
) -> Result<SchemeState<T>> {
    let b = rhs_general_with(&state, ops, g, work)?;
    let mut next = adi_solve(ops, &b)?;
    let two = T::lit(2.0);
    for ((o, &c), &p) in next
        .as_mut_slice()
        .iter_mut()
        .zip(state.u_curr.as_slice())
        .zip(state.u_prev.as_slice())
    {
        *o = *o + two * c - p;
    }
    Ok(state.advance(next, ops.tau_step))
}

/// `u^{n+1} = ûⁿ + 2uⁿ − u^{n−1}` for `n ≥ 1`.
pub fn sadi_step<T: Real>(
    state: SchemeState<T>,
    ops: &StepOperators<T>,
    g: &Nonlinearity<T>,
) -> Result<SchemeState<T>> {
    sadi_step_with(state, ops, g, &mut ops.lap().work())
}
