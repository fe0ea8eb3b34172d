//! Baseline scheme: one 2D system `(I + cL_h^α) u^{n+1} = rhs` per step,
//! `c = τ²κ/2`, solved by tau-preconditioned CG warm-started from `uⁿ`.

use crate::error::Result;
use crate::grid::Field;
use crate::scalar::Real;
use crate::structured::{pcg, BttbWork, PcgReport};

use super::ops::NonAdiOperators;
use super::problem::{Nonlinearity, Problem};
use super::state::SchemeState;

fn solve_shifted<T: Real>(
    ops: &NonAdiOperators<T>,
    rhs: &Field<T>,
    guess: &Field<T>,
    work: &mut BttbWork<T>,
) -> Result<(Field<T>, PcgReport)> {
    let c = ops.half_coupling();
    let lap = &ops.spatial.lap;
    let (x, report) = pcg(
        |v, out| {
            lap.apply_into(v, out, work)?;
            for (o, &vi) in out.iter_mut().zip(v) {
                *o = vi + c * *o;
            }
            Ok(())
        },
        |r, out| ops.precond.apply_into(r, out),
        rhs.as_slice(),
        Some(guess.as_slice()),
        ops.tol,
        ops.max_iter,
    )?;
    let report = report.ensure_converged()?;
    Ok((Field::from_vec(rhs.n(), x)?, report))
}

pub(crate) fn nonadi_first_step_with<T: Real>(
    problem: &Problem<T>,
    ops: &NonAdiOperators<T>,
    work: &mut BttbWork<T>,
) -> Result<(SchemeState<T>, PcgReport)> {
    let grid = ops.grid();
    let u0 = problem.phi1.sample(grid);
    let phi2 = problem.phi2.sample(grid);
    let half_tau2 = ops.tau_step * ops.tau_step / T::lit(2.0);
    let mut rhs = u0.clone();
    rhs.axpy(ops.tau_step, &phi2)?;
    for (r, &u) in rhs.as_mut_slice().iter_mut().zip(u0.as_slice()) {
        *r = *r + half_tau2 * problem.nonlinearity.eval(u);
    }
    let (u1, report) = solve_shifted(ops, &rhs, &u0, work)?;
    Ok((SchemeState::initial(u0).advance(u1, ops.tau_step), report))
}

/// `(I + cL_h^α) u¹ = u⁰ + τφ₂ + (τ²/2) g(u⁰)`.
pub fn nonadi_first_step<T: Real>(
    problem: &Problem<T>,
    ops: &NonAdiOperators<T>,
) -> Result<(SchemeState<T>, PcgReport)> {
    nonadi_first_step_with(problem, ops, &mut ops.spatial.lap.work())
}

pub(crate) fn nonadi_step_with<T: Real>(
    state: SchemeState<T>,
    ops: &NonAdiOperators<T>,
    g: &Nonlinearity<T>,
    work: &mut BttbWork<T>,
) -> Result<(SchemeState<T>, PcgReport)> {
    let c = ops.half_coupling();
    let tau2 = ops.tau_step * ops.tau_step;
    let mut rhs = Field::zeros(state.u_curr.n());
    if c != T::zero() {
        ops.spatial
            .lap
            .apply_into(state.u_prev.as_slice(), rhs.as_mut_slice(), work)?;
    }
    let two = T::lit(2.0);
    for ((r, &u), &p) in rhs
        .as_mut_slice()
        .iter_mut()
        .zip(state.u_curr.as_slice())
        .zip(state.u_prev.as_slice())
    {
        *r = two * u - p - c * *r + tau2 * g.eval(u);
    }
    let (next, report) = solve_shifted(ops, &rhs, &state.u_curr, work)?;
    Ok((state.advance(next, ops.tau_step), report))
}

/// `(I + cL_h^α) u^{n+1} = 2uⁿ − u^{n−1} − cL_h^α u^{n−1} + τ² g(uⁿ)`.
pub fn nonadi_step<T: Real>(
    state: SchemeState<T>,
    ops: &NonAdiOperators<T>,
    g: &Nonlinearity<T>,
) -> Result<(SchemeState<T>, PcgReport)> {
    nonadi_step_with(state, ops, g, &mut ops.spatial.lap.work())
}
