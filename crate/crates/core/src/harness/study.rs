//! Self-refinement error studies and their CSV tables.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Error, Result};
use crate::fraccoef::FracOrder;
use crate::grid::{Field, Grid2D};
use crate::scalar::Real;
use crate::stepper::{run, step_count, Example, NoRecorder, Problem, RunStats, Scheme, SolverOptions};

/// One line of an error/order table.
#[derive(Debug, Clone, PartialEq)]
pub struct StudyRow {
    pub scheme: Scheme,
    pub alpha: f64,
    /// `τ` for time studies, `h` for space studies.
    pub step: f64,
    pub error: f64,
    /// `log₂(previous error / this error)`; absent on a block's first row.
    pub order: Option<f64>,
    pub cpu_setup: f64,
    pub cpu_loop: f64,
}

impl StudyRow {
    pub fn cpu_seconds(&self) -> f64 {
        self.cpu_setup + self.cpu_loop
    }
}

pub const CSV_HEADER: &str = "scheme,alpha,step,error,order,cpu_seconds,cpu_setup,cpu_loop";

/// `sqrt(h² Σ (coarse − fine)²)`.
pub fn refinement_error<T: Real>(coarse: &Field<T>, fine: &Field<T>, h: T) -> Result<f64> {
    coarse.check_same(fine)?;
    let s: f64 = coarse
        .as_slice()
        .iter()
        .zip(fine.as_slice())
        .map(|(&a, &b)| {
            let d = (a - b).as_f64();
            d * d
        })
        .sum();
    Ok(h.as_f64() * s.sqrt())
}

fn fill_orders(rows: &mut [StudyRow]) {
    for k in 1..rows.len() {
        rows[k].order = Some((rows[k - 1].error / rows[k].error).log2());
    }
}

fn check_halving(steps: &[f64], what: &str) -> Result<()> {
    for w in steps.windows(2) {
        if ((w[1] - w[0] / 2.0) / w[1]).abs() > 1e-12 {
            return Err(Error::invalid(format!(
                "{what} list must halve at each entry ({} then {})",
                w[0], w[1]
            )));
        }
    }
    if steps.iter().any(|&s| !(s > 0.0 && s.is_finite())) {
        return Err(Error::invalid(format!("{what} values must be positive")));
    }
    Ok(())
}

type Solved<T> = (Field<T>, RunStats);

fn solve<T: Real>(
    problem: &Problem<T>,
    grid: &Grid2D<T>,
    scheme: Scheme,
    tau: f64,
    t_final: f64,
    opts: &SolverOptions,
) -> Result<Solved<T>> {
    let m = step_count(t_final, tau)?;
    let out = run(problem, grid, scheme, T::lit(tau), m, opts, &mut NoRecorder)?;
    Ok((out.state.u_curr, out.stats))
}

/// Error₁ on a fixed grid: for each `τ` compares the solutions at `t_final`
/// obtained with `τ` and `τ/2`. The `τ/2` run is reused as the next row's
/// coarse run, so `taus` must halve. CPU columns time the run at `τ`.
pub fn error_time_refinement<T: Real>(
    problem: &Problem<T>,
    scheme: Scheme,
    grid: &Grid2D<T>,
    taus: &[f64],
    t_final: f64,
    opts: &SolverOptions,
) -> Result<Vec<StudyRow>> {
    check_halving(taus, "tau")?;
    let mut cache: HashMap<usize, Solved<T>> = HashMap::new();
    let mut rows = Vec::with_capacity(taus.len());
    for &tau in taus {
        for t in [tau, tau / 2.0] {
            let m = step_count(t_final, t)?;
            if !cache.contains_key(&m) {
                let r = solve(problem, grid, scheme, t, t_final, opts)?;
                cache.insert(m, r);
            }
        }
        let m = step_count(t_final, tau)?;
        let (coarse, stats) = &cache[&m];
        let (fine, _) = &cache[&(2 * m)];
        rows.push(StudyRow {
            scheme,
            alpha: problem.alpha.value(),
            step: tau,
            error: refinement_error(coarse, fine, grid.h)?,
            order: None,
            cpu_setup: stats.setup_seconds,
            cpu_loop: stats.loop_seconds,
        });
        cache.remove(&m);
    }
    fill_orders(&mut rows);
    Ok(rows)
}

/// Error₂ at fixed `τ`: for each `h` compares the solution on the `h` grid
/// with the `h/2` grid restricted to coincident nodes. The `h/2` run is
/// reused as the next row's coarse run. CPU columns time the run at `h`.
pub fn error_space_refinement<T: Real>(
    problem: &Problem<T>,
    scheme: Scheme,
    tau: f64,
    hs: &[f64],
    t_final: f64,
    opts: &SolverOptions,
) -> Result<Vec<StudyRow>> {
    check_halving(hs, "h")?;
    let mut cache: HashMap<usize, Solved<T>> = HashMap::new();
    let mut rows = Vec::with_capacity(hs.len());
    for &h in hs {
        let grid = Grid2D::with_spacing(problem.a, problem.b, T::lit(h))?;
        for g in [grid, grid.refined()] {
            if !cache.contains_key(&g.n) {
                let r = solve(problem, &g, scheme, tau, t_final, opts)?;
                cache.insert(g.n, r);
            }
        }
        let (coarse, stats) = &cache[&grid.n];
        let (fine, _) = &cache[&grid.refined().n];
        rows.push(StudyRow {
            scheme,
            alpha: problem.alpha.value(),
            step: h,
            error: refinement_error(coarse, &fine.restrict_to_coarse()?, grid.h)?,
            order: None,
            cpu_setup: stats.setup_seconds,
            cpu_loop: stats.loop_seconds,
        });
        cache.remove(&grid.n);
    }
    fill_orders(&mut rows);
    Ok(rows)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AxisKind {
    Time,
    Space,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Axis {
    Time { h: f64, taus: Vec<f64> },
    Space { tau: f64, hs: Vec<f64> },
}

/// A full table: every listed scheme × order along one refinement axis.
#[derive(Debug, Clone, PartialEq)]
pub struct StudySpec {
    pub example: Example,
    pub schemes: Vec<Scheme>,
    pub alphas: Vec<f64>,
    pub axis: Axis,
    pub t_final: f64,
    pub opts: SolverOptions,
    pub threads: Option<usize>,
    /// Cells always run one at a time; the flag is recorded for the report.
    pub timing_strict: bool,
}

/// Parses `0.025`, `1/40` or `4/25`.
pub fn parse_step(s: &str) -> Result<f64> {
    let s = s.trim();
    let bad = || Error::Parse(format!("`{s}` is not a number or fraction"));
    let v = match s.split_once('/') {
        Some((p, q)) => {
            let p: f64 = p.trim().parse().map_err(|_| bad())?;
            let q: f64 = q.trim().parse().map_err(|_| bad())?;
            p / q
        }
        None => s.parse().map_err(|_| bad())?,
    };
    if !v.is_finite() {
        return Err(bad());
    }
    Ok(v)
}

pub fn parse_list(s: &str) -> Result<Vec<f64>> {
    s.split(',')
        .map(str::trim)
        .filter(|p| !p.is_empty())
        .map(parse_step)
        .collect()
}

pub fn parse_schemes(s: &str) -> Result<Vec<Scheme>> {
    match s.trim() {
        "both" | "all" => Ok(vec![Scheme::Sadi, Scheme::NonAdi]),
        s => s.split(',').map(Scheme::from_id).collect(),
    }
}

impl StudySpec {
    /// Reads `key = value` lines (`#` starts a comment). Keys: `example`,
    /// `scheme`, `alphas`, `taus`, `hs`, `t_final`, `tol`, `oversampling`,
    /// `threads`, `timing-strict`. A time study needs one `hs` value, a space
    /// study one `taus` value.
    pub fn parse(text: &str, kind: AxisKind) -> Result<Self> {
        let mut kv: HashMap<String, String> = HashMap::new();
        for (k, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or_default().trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| Error::Parse(format!("line {}: expected `key = value`", k + 1)))?;
            let key = key.trim().replace('_', "-");
            const KEYS: [&str; 10] = [
                "example", "scheme", "alphas", "taus", "hs", "t-final", "tol", "oversampling",
                "threads", "timing-strict",
            ];
            if !KEYS.contains(&key.as_str()) {
                return Err(Error::Parse(format!("line {}: unknown key `{key}`", k + 1)));
            }
            kv.insert(key, value.trim().to_string());
        }
        let get = |k: &str| kv.get(k).map(String::as_str);
        let example = Example::from_id(get("example").unwrap_or("sine-gordon"))?;
        let schemes = parse_schemes(get("scheme").unwrap_or("sadi"))?;
        let alphas = match get("alphas") {
            Some(s) => parse_list(s)?,
            None => vec![1.1, 1.5, 1.9],
        };
        let taus = parse_list(get("taus").unwrap_or(""))?;
        let hs = parse_list(get("hs").unwrap_or(""))?;
        let single = |v: &[f64], what: &str| -> Result<f64> {
            match v {
                [x] => Ok(*x),
                _ => Err(Error::Parse(format!("expected exactly one `{what}` value"))),
            }
        };
        let axis = match kind {
            AxisKind::Time => Axis::Time {
                h: single(&hs, "hs")?,
                taus,
            },
            AxisKind::Space => Axis::Space {
                tau: single(&taus, "taus")?,
                hs,
            },
        };
        let t_final = match get("t-final") {
            Some(s) => parse_step(s)?,
            None => example.t_final(),
        };
        let mut opts = SolverOptions::default();
        if let Some(s) = get("tol") {
            opts.pcg_tol = parse_step(s)?;
        }
        if let Some(s) = get("oversampling") {
            opts.oversampling = s
                .parse()
                .map_err(|_| Error::Parse(format!("bad oversampling `{s}`")))?;
        }
        let threads = match get("threads") {
            Some(s) => Some(s.parse().map_err(|_| Error::Parse(format!("bad threads `{s}`")))?),
            None => None,
        };
        let timing_strict = match get("timing-strict") {
            None | Some("false") | Some("0") => false,
            Some("true") | Some("1") => true,
            Some(s) => return Err(Error::Parse(format!("bad timing-strict `{s}`"))),
        };
        let spec = Self {
            example,
            schemes,
            alphas,
            axis,
            t_final,
            opts,
            threads,
            timing_strict,
        };
        spec.validate()?;
        Ok(spec)
    }

    /// Checks ranges and step compatibility before anything is allocated.
    pub fn validate(&self) -> Result<()> {
        for &a in &self.alphas {
            FracOrder::new(a)?;
        }
        self.opts.validate()?;
        let problem = self.example.problem::<f64>(FracOrder::classical());
        match &self.axis {
            Axis::Time { h, taus } => {
                Grid2D::with_spacing(problem.a, problem.b, *h)?;
                check_halving(taus, "tau")?;
                for &t in taus {
                    step_count(self.t_final, t / 2.0)?;
                }
            }
            Axis::Space { tau, hs } => {
                step_count(self.t_final, *tau)?;
                check_halving(hs, "h")?;
                for &h in hs {
                    Grid2D::with_spacing(problem.a, problem.b, h)?;
                }
            }
        }
        Ok(())
    }

    /// Rows in declaration order: scheme-major, then `α`, then step.
    pub fn run(&self) -> Result<Vec<StudyRow>> {
        self.validate()?;
        let mut rows = Vec::new();
        for &scheme in &self.schemes {
            for &alpha in &self.alphas {
                let problem = self.example.problem::<f64>(FracOrder::new(alpha)?);
                let block = match &self.axis {
                    Axis::Time { h, taus } => {
                        let grid = Grid2D::with_spacing(problem.a, problem.b, *h)?;
                        error_time_refinement(&problem, scheme, &grid, taus, self.t_final, &self.opts)?
                    }
                    Axis::Space { tau, hs } => {
                        error_space_refinement(&problem, scheme, *tau, hs, self.t_final, &self.opts)?
                    }
                };
                rows.extend(block);
            }
        }
        Ok(rows)
    }
}

pub fn rows_to_csv(rows: &[StudyRow]) -> String {
    let mut s = String::from(CSV_HEADER);
    s.push('\n');
    for r in rows {
        let order = r.order.map(|o| format!("{o:.6}")).unwrap_or_default();
        let _ = writeln!(
            s,
            "{},{},{},{:e},{},{:.6},{:.6},{:.6}",
            r.scheme,
            r.alpha,
            r.step,
            r.error,
            order,
            r.cpu_seconds(),
            r.cpu_setup,
            r.cpu_loop
        );
    }
    s
}

/// Runs `spec` and writes its CSV table to `output`.
pub fn run_study(spec: &StudySpec, output: &Path) -> Result<Vec<StudyRow>> {
    let rows = spec.run()?;
    if let Some(dir) = output.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir)?;
    }
    std::fs::write(output, rows_to_csv(&rows))?;
    Ok(rows)
}

/// The four published convergence tables.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TablePreset {
    /// Sine-Gordon, time refinement at `h = 1/40`.
    Table1,
    /// Sine-Gordon, space refinement at `τ = 1/100`.
    Table2,
    /// Klein-Gordon, time refinement at `h = 1/50`.
    Table3,
    /// Klein-Gordon, space refinement at `τ = 1/125`.
    Table4,
}

impl TablePreset {
    pub fn from_id(id: &str) -> Result<Self> {
        match id.trim().trim_start_matches("table") {
            "1" => Ok(Self::Table1),
            "2" => Ok(Self::Table2),
            "3" => Ok(Self::Table3),
            "4" => Ok(Self::Table4),
            _ => Err(Error::Parse(format!("unknown table `{id}`"))),
        }
    }

    pub fn kind(self) -> AxisKind {
        match self {
            Self::Table1 | Self::Table3 => AxisKind::Time,
            Self::Table2 | Self::Table4 => AxisKind::Space,
        }
    }

    pub fn spec(self, schemes: Vec<Scheme>) -> StudySpec {
        let (example, axis) = match self {
            Self::Table1 => (
                Example::SineGordon,
                Axis::Time {
                    h: 1.0 / 40.0,
                    taus: vec![1.0 / 10.0, 1.0 / 20.0, 1.0 / 40.0, 1.0 / 80.0],
                },
            ),
            Self::Table2 => (
                Example::SineGordon,
                Axis::Space {
                    tau: 1.0 / 100.0,
                    hs: vec![1.0, 1.0 / 2.0, 1.0 / 4.0, 1.0 / 8.0],
                },
            ),
            Self::Table3 => (
                Example::KleinGordon,
                Axis::Time {
                    h: 1.0 / 50.0,
                    taus: vec![4.0 / 25.0, 2.0 / 25.0, 1.0 / 25.0, 1.0 / 50.0],
                },
            ),
            Self::Table4 => (
                Example::KleinGordon,
                Axis::Space {
                    tau: 1.0 / 125.0,
                    hs: vec![2.0 / 5.0, 1.0 / 5.0, 1.0 / 10.0, 1.0 / 20.0],
                },
            ),
        };
        StudySpec {
            example,
            schemes,
            alphas: vec![1.1, 1.5, 1.9],
            axis,
            t_final: example.t_final(),
            opts: SolverOptions::default(),
            threads: None,
            timing_strict: false,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn steps_and_lists() {
        assert_eq!(parse_step("1/40").unwrap(), 0.025);
        assert_eq!(parse_step(" 0.5 ").unwrap(), 0.5);
        assert!(parse_step("1/x").is_err());
        assert_eq!(parse_list("1, 1/2,").unwrap(), vec![1.0, 0.5]);
        assert_eq!(parse_schemes("both").unwrap().len(), 2);
    }

    #[test]
    fn identical_fields_have_zero_error() {
        let f = Field::from_vec(2, vec![1.0, 2.0, 3.0, 4.0]).unwrap();
        assert_eq!(refinement_error(&f, &f, 0.5).unwrap(), 0.0);
        let g = Field::from_vec(2, vec![1.0, 2.0, 3.0, 6.0]).unwrap();
        assert_eq!(refinement_error(&f, &g, 0.5).unwrap(), 1.0);
    }

    #[test]
    fn spec_file() {
        let text = "# table 2 subset\nexample = sine-gordon\nscheme = both\nalphas = 1.5\ntaus = 1/100\nhs = 1, 1/2\n";
        let spec = StudySpec::parse(text, AxisKind::Space).unwrap();
        assert_eq!(spec.schemes, vec![Scheme::Sadi, Scheme::NonAdi]);
        assert_eq!(spec.t_final, 5.0);
        assert_eq!(spec.axis, Axis::Space { tau: 0.01, hs: vec![1.0, 0.5] });
        assert!(StudySpec::parse(text, AxisKind::Time).is_err());
        assert!(StudySpec::parse("colour = red", AxisKind::Time).is_err());
        assert!(StudySpec::parse("hs = 1/40\ntaus = 0.1, 0.03", AxisKind::Time).is_err());
        assert!(StudySpec::parse("hs = 0.3\ntaus = 0.1", AxisKind::Time).is_err());
    }

    #[test]
    fn empty_alpha_list_gives_header_only() {
        let mut spec = TablePreset::Table2.spec(vec![Scheme::Sadi]);
        spec.alphas.clear();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("t.csv");
        assert!(run_study(&spec, &path).unwrap().is_empty());
        assert_eq!(std::fs::read_to_string(path).unwrap(), format!("{CSV_HEADER}\n"));
    }

    #[test]
    fn presets_validate() {
        for t in ["1", "2", "3", "table4"] {
            let p = TablePreset::from_id(t).unwrap();
            p.spec(vec![Scheme::Sadi]).validate().unwrap();
        }
    }

    #[test]
    fn orders_from_errors() {
        let row = |e| StudyRow {
            scheme: Scheme::Sadi,
            alpha: 1.5,
            step: 1.0,
            error: e,
            order: None,
            cpu_setup: 0.0,
            cpu_loop: 0.0,
        };
        let mut rows = vec![row(4.0), row(1.0), row(0.5)];
        fill_orders(&mut rows);
        assert_eq!(rows[0].order, None);
        assert_eq!(rows[1].order, Some(2.0));
        assert_eq!(rows[2].order, Some(1.0));
        assert!(rows_to_csv(&rows).lines().nth(1).unwrap().starts_with("sadi,1.5,1,4e0,,"));
    }
}
