//! Whole-run driver: first step, `M − 1` general steps, recorder callbacks.

use std::time::Instant;

use crate::error::{Error, Result};
use crate::grid::Grid2D;
use crate::scalar::Real;
use crate::structured::PcgReport;

use super::nonadi::{nonadi_first_step_with, nonadi_step_with};
use super::ops::{NonAdiOperators, SolverOptions, SpatialOperators, StepOperators};
use super::problem::Problem;
use super::sadi::{sadi_first_step_with, sadi_step_with};
use super::state::SchemeState;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Scheme {
    Sadi,
    NonAdi,
}

impl Scheme {
    pub fn id(self) -> &'static str {
        match self {
            Self::Sadi => "sadi",
            Self::NonAdi => "nonadi",
        }
    }

    pub fn from_id(id: &str) -> Result<Self> {
        match id.trim().to_ascii_lowercase().replace(['-', '_'], "").as_str() {
            "sadi" => Ok(Self::Sadi),
            "nonadi" => Ok(Self::NonAdi),
            _ => Err(Error::Parse(format!("unknown scheme `{id}`"))),
        }
    }
}

impl std::fmt::Display for Scheme {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.id())
    }
}

/// Observer called with the initial state (`n = 0`, `u_prev = u_curr = u⁰`)
/// and after every step.
pub trait Recorder<T> {
    fn record(&mut self, state: &SchemeState<T>) -> Result<()>;
}

impl<T, F: FnMut(&SchemeState<T>) -> Result<()>> Recorder<T> for F {
    fn record(&mut self, state: &SchemeState<T>) -> Result<()> {
        self(state)
    }
}

/// Records nothing.
#[derive(Debug, Default, Clone, Copy)]
pub struct NoRecorder;

impl<T> Recorder<T> for NoRecorder {
    fn record(&mut self, _: &SchemeState<T>) -> Result<()> {
        Ok(())
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct RunStats {
    pub steps: usize,
    /// Coefficients, operators and (S-ADI) the `H⁻¹e₁` solve.
    pub setup_seconds: f64,
    pub loop_seconds: f64,
    pub gs_setup: Option<PcgReport>,
    pub pcg_iterations_total: usize,
    pub pcg_iterations_max: usize,
    pub pcg_residual_max: f64,
}

impl RunStats {
    pub fn total_seconds(&self) -> f64 {
        self.setup_seconds + self.loop_seconds
    }

    fn absorb(&mut self, report: &PcgReport) {
        self.pcg_iterations_total += report.iterations;
        self.pcg_iterations_max = self.pcg_iterations_max.max(report.iterations);
        self.pcg_residual_max = self.pcg_residual_max.max(report.final_relative_residual);
    }
}

#[derive(Debug, Clone)]
pub struct RunOutput<T> {
    pub state: SchemeState<T>,
    pub stats: RunStats,
}

fn check_finite<T: Real>(state: &SchemeState<T>, limit: f64) -> Result<()> {
    let mut worst = 0.0f64;
    for &v in state.u_curr.as_slice() {
        let a = v.as_f64().abs();
        if !a.is_finite() {
            worst = f64::INFINITY;
            break;
        }
        worst = worst.max(a);
    }
    if worst > limit {
        return Err(Error::BlowUp {
            step: state.n,
            time: state.t.as_f64(),
            magnitude: worst,
        });
    }
    Ok(())
}

enum Operators<T: Real> {
    Sadi(StepOperators<T>),
    NonAdi(NonAdiOperators<T>),
}

/// Runs `m_steps` steps of `scheme` from the problem's initial data.
pub fn run<T: Real>(
    problem: &Problem<T>,
    grid: &Grid2D<T>,
    scheme: Scheme,
    tau_step: T,
    m_steps: usize,
    opts: &SolverOptions,
    recorder: &mut dyn Recorder<T>,
) -> Result<RunOutput<T>> {
    if m_steps == 0 {
        return Err(Error::invalid("a run needs at least one step"));
    }
    problem.validate()?;
    opts.validate()?;
    let mut stats = RunStats {
        steps: m_steps,
        ..RunStats::default()
    };

    let setup = Instant::now();
    let spatial = SpatialOperators::build(problem.alpha, grid, opts)?;
    let ops = match scheme {
        Scheme::Sadi => {
            let ops = StepOperators::from_spatial(spatial, problem.kappa, tau_step, opts)?;
            stats.gs_setup = Some(ops.gs.setup);
            Operators::Sadi(ops)
        }
        Scheme::NonAdi => Operators::NonAdi(NonAdiOperators::from_spatial(
            spatial,
            problem.kappa,
            tau_step,
            opts,
        )?),
    };
    stats.setup_seconds = setup.elapsed().as_secs_f64();

    let clock = Instant::now();
    let g = &problem.nonlinearity;
    let lap = match &ops {
        Operators::Sadi(o) => o.lap(),
        Operators::NonAdi(o) => &o.spatial.lap,
    };
    let mut work = lap.work();
    recorder.record(&SchemeState::initial(problem.phi1.sample(grid)))?;
    let mut state = match &ops {
        Operators::Sadi(o) => sadi_first_step_with(problem, o, &mut work)?,
        Operators::NonAdi(o) => {
            let (s, report) = nonadi_first_step_with(problem, o, &mut work)?;
            stats.absorb(&report);
            s
        }
    };
    check_finite(&state, opts.blow_up)?;
    recorder.record(&state)?;
    for _ in 1..m_steps {
        state = match &ops {
            Operators::Sadi(o) => sadi_step_with(state, o, g, &mut work)?,
            Operators::NonAdi(o) => {
                let (s, report) = nonadi_step_with(state, o, g, &mut work)?;
                stats.absorb(&report);
                s
            }
        };
        check_finite(&state, opts.blow_up)?;
        recorder.record(&state)?;
    }
    stats.loop_seconds = clock.elapsed().as_secs_f64();
    Ok(RunOutput { state, stats })
}

/// Number of steps of size `tau_step` reaching `t_final`; errors unless the
/// ratio is an integer to within `1e-9` relative.
pub fn step_count(t_final: f64, tau_step: f64) -> Result<usize> {
    if !(tau_step > 0.0) || !(t_final > 0.0) {
        return Err(Error::invalid(format!(
            "t_final = {t_final} and tau = {tau_step} must be positive"
        )));
    }
    let m = t_final / tau_step;
    let r = m.round();
    if (m - r).abs() > 1e-9 * m.max(1.0) || r < 1.0 {
        return Err(Error::invalid(format!(
            "t_final = {t_final} is not an integral multiple of tau = {tau_step}"
        )));
    }
    Ok(r as usize)
}
