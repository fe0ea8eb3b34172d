//! `fraclap`: solve, refinement studies, coefficient tables, self test.
//!
//! Exit status: 0 success, 2 invalid input, 3 a solver did not converge,
//! 4 the solution blew up, 5 I/O failure.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use fraclap::fraccoef::{laplacian_coeffs_2d, riesz_coeffs_1d, DEFAULT_OVERSAMPLING};
use fraclap::harness::{
    parse_list, parse_schemes, parse_step, run_study, Axis, AxisKind, EnergyTrace, NormKind,
    NormOperators, StudySpec, TablePreset,
};
use fraclap::selftest::{selftest, SelftestOptions};
use fraclap::stepper::snapshot::{
    write_snapshot, SnapshotFormat, SnapshotMeta, SnapshotRecorder, Surface,
};
use fraclap::stepper::{
    run, step_count, Example, InitialData, Nonlinearity, Problem, Recorder, RunStats, Scheme,
    SchemeState, SolverOptions, SpatialOperators, Tabulated,
};
use fraclap::{Error, FracOrder, Grid2D, Result};

/// Overrides the default output directory (`fraclap-out`); `--output-dir` wins.
const OUTPUT_ENV: &str = "FRACLAP_OUTPUT_DIR";

#[derive(Parser, Debug)]
#[command(name = "fraclap", version, about = "S-ADI solver for 2D fractional Laplacian wave equations")]
struct Cli {
    /// Worker threads for intra-step parallelism (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Output directory [default: $FRACLAP_OUTPUT_DIR or ./fraclap-out].
    #[arg(long, global = true)]
    output_dir: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Integrate one problem and write snapshots plus a summary.
    Solve(SolveArgs),
    /// Error₁/order table under time-step halving.
    StudyTime(StudyArgs),
    /// Error₂/order table under mesh halving.
    StudySpace(StudyArgs),
    /// Write difference weights as `i,j,value` CSV.
    Coeffs(CoeffArgs),
    /// Run the fast invariant suite.
    Selftest(SelftestArgs),
}

#[derive(Args, Debug)]
struct ProblemArgs {
    /// Preset problem: sine-gordon or klein-gordon.
    #[arg(long, default_value = "sine-gordon")]
    example: String,
    /// Fractional order, 1 < alpha < 2.
    #[arg(long, default_value_t = 1.5)]
    alpha: f64,
    /// Domain (a, b)²; defaults to the preset's (−10, 10).
    #[arg(long, allow_hyphen_values = true)]
    a: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    b: Option<f64>,
    /// Diffusion coefficient (> 0) [default: 1].
    #[arg(long)]
    kappa: Option<f64>,
    /// zero, sine_gordon, klein_gordon, or table:<csv of u,g rows>.
    #[arg(long)]
    nonlinearity: Option<String>,
    /// u(·,0): zero, sech-r, sech-cosh-r2[:amp], gaussian[:amp[:width]].
    #[arg(long)]
    phi1: Option<String>,
    /// u_t(·,0), same vocabulary as --phi1.
    #[arg(long)]
    phi2: Option<String>,
}

#[derive(Args, Debug)]
struct SolveArgs {
    #[command(flatten)]
    problem: ProblemArgs,
    /// sadi or nonadi.
    #[arg(long, default_value = "sadi")]
    scheme: String,
    /// Time step (number or fraction such as 1/100).
    #[arg(long, default_value = "0.01")]
    tau: String,
    /// Mesh width; (b − a)/h must be an integer.
    #[arg(long, conflicts_with = "n")]
    h: Option<String>,
    /// Interior nodes per direction [default: from h = 0.025].
    #[arg(long)]
    n: Option<usize>,
    /// Final time [default: 5 for sine-gordon, 8 for klein-gordon].
    #[arg(long)]
    t_final: Option<String>,
    /// Comma-separated snapshot times [default: t_final].
    #[arg(long)]
    snapshots: Option<String>,
    /// Transform written to snapshots: u, sin_u or sin_half_u.
    #[arg(long, default_value = "u")]
    surface: String,
    /// csv or raw.
    #[arg(long, default_value = "csv")]
    format: String,
    #[command(flatten)]
    numerics: NumericArgs,
}

#[derive(Args, Debug)]
struct NumericArgs {
    /// Relative residual for the non-ADI PCG solves.
    #[arg(long, default_value_t = 1e-11)]
    tol: f64,
    /// Relative residual for the one-time H⁻¹e₁ solve.
    #[arg(long, default_value_t = 1e-14)]
    gs_tol: f64,
    /// Symbol sampling factor for the 2D weights (≥ 2).
    #[arg(long, default_value_t = DEFAULT_OVERSAMPLING)]
    oversampling: usize,
}

impl NumericArgs {
    fn options(&self) -> SolverOptions {
        SolverOptions {
            pcg_tol: self.tol,
            gs_tol: self.gs_tol,
            oversampling: self.oversampling,
            ..SolverOptions::default()
        }
    }
}

#[derive(Args, Debug)]
struct StudyArgs {
    /// Published table preset (1 or 3 for time, 2 or 4 for space).
    #[arg(long)]
    table: Option<String>,
    /// `key = value` spec file; flags given alongside override it.
    #[arg(long)]
    spec: Option<PathBuf>,
    #[arg(long)]
    example: Option<String>,
    /// sadi, nonadi, or both.
    #[arg(long)]
    scheme: Option<String>,
    /// Comma-separated orders.
    #[arg(long)]
    alphas: Option<String>,
    /// Comma-separated time steps (one value for a space study).
    #[arg(long)]
    taus: Option<String>,
    /// Comma-separated mesh widths (one value for a time study).
    #[arg(long)]
    hs: Option<String>,
    #[arg(long)]
    t_final: Option<String>,
    #[arg(long)]
    tol: Option<f64>,
    #[arg(long)]
    oversampling: Option<usize>,
    /// No-op: cells already run one at a time.
    #[arg(long)]
    timing_strict: bool,
    /// CSV path [default: <output-dir>/<table or study-kind>.csv].
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct CoeffArgs {
    #[arg(long)]
    alpha: f64,
    /// Weights per direction (offsets 0..count).
    #[arg(long)]
    count: usize,
    /// 1 for the Riesz weights (written with j = 0), 2 for the Laplacian.
    #[arg(long, default_value_t = 2)]
    dim: u8,
    #[arg(long, default_value_t = DEFAULT_OVERSAMPLING)]
    oversampling: usize,
    /// CSV path, or `-` for stdout [default: <output-dir>/coeffs.csv].
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct SelftestArgs {
    /// Perturb the coefficient tables before checking them.
    #[arg(long, hide = true)]
    corrupt_coefficients: bool,
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::NotConverged { .. } | Error::QuadratureBudget { .. } | Error::NotPositiveDefinite(_) => 3,
        Error::BlowUp { .. } => 4,
        Error::Io(_) => 5,
        _ => 2,
    }
}

fn output_dir(cli: &Option<PathBuf>) -> PathBuf {
    cli.clone()
        .or_else(|| std::env::var_os(OUTPUT_ENV).map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("fraclap-out"))
}

fn build_problem(args: &ProblemArgs) -> Result<Problem<f64>> {
    let example = Example::from_id(&args.example)?;
    let mut p = example.problem::<f64>(FracOrder::new(args.alpha)?);
    if let Some(a) = args.a {
        p.a = a;
    }
    if let Some(b) = args.b {
        p.b = b;
    }
    if let Some(k) = args.kappa {
        if !(k > 0.0) {
            return Err(Error::InvalidArgument(format!("--kappa {k} must be positive")));
        }
        p.kappa = k;
    }
    if let Some(id) = &args.nonlinearity {
        p.nonlinearity = match id.strip_prefix("table:") {
            Some(path) => Nonlinearity::Table(Tabulated::parse_csv(&fs::read_to_string(path)?)?),
            None => Nonlinearity::from_id(id)?,
        };
    }
    if let Some(id) = &args.phi1 {
        p.phi1 = InitialData::from_id(id)?;
    }
    if let Some(id) = &args.phi2 {
        p.phi2 = InitialData::from_id(id)?;
    }
    p.validate()?;
    Ok(p)
}

/// Fans one run's states out to the snapshot and energy recorders.
struct Recorders<'a> {
    snaps: &'a mut SnapshotRecorder<f64>,
    energy: Option<&'a mut EnergyTrace<f64>>,
}

impl Recorder<f64> for Recorders<'_> {
    fn record(&mut self, state: &SchemeState<f64>) -> Result<()> {
        self.snaps.record(state)?;
        if let Some(e) = self.energy.as_deref_mut() {
            e.record(state)?;
        }
        Ok(())
    }
}

fn solve(args: &SolveArgs, out: &Path) -> Result<()> {
    let problem = build_problem(&args.problem)?;
    let example = Example::from_id(&args.problem.example)?;
    let scheme = Scheme::from_id(&args.scheme)?;
    let tau = parse_step(&args.tau)?;
    let grid = match (args.n, &args.h) {
        (Some(n), _) => Grid2D::new(problem.a, problem.b, n)?,
        (None, h) => Grid2D::with_spacing(
            problem.a,
            problem.b,
            parse_step(h.as_deref().unwrap_or("0.025"))?,
        )?,
    };
    let t_final = match &args.t_final {
        Some(t) => parse_step(t)?,
        None => example.t_final(),
    };
    let m = step_count(t_final, tau)?;
    let times = match &args.snapshots {
        Some(s) => parse_list(s)?,
        None => vec![t_final],
    };
    if let Some(&t) = times.iter().find(|&&t| t < 0.0 || t > t_final * (1.0 + 1e-12)) {
        return Err(Error::InvalidArgument(format!("snapshot time {t} outside [0, {t_final}]")));
    }
    let surface = Surface::from_id(&args.surface)?;
    let format = SnapshotFormat::from_id(&args.format)?;
    let opts = args.numerics.options();
    opts.validate()?;

    let mut snaps = SnapshotRecorder::new(&times, tau, surface)?;
    let mut energy = if problem.nonlinearity.is_zero() {
        let spatial = SpatialOperators::build(problem.alpha, &grid, &opts)?;
        Some(EnergyTrace::new(NormOperators::from_spatial(&spatial)?, tau, problem.kappa))
    } else {
        None
    };
    fs::create_dir_all(out)?;
    let mut rec = Recorders {
        snaps: &mut snaps,
        energy: energy.as_mut(),
    };
    let output = run(&problem, &grid, scheme, tau, m, &opts, &mut rec)?;

    let mut files = Vec::new();
    for (state, field) in &snaps.captured {
        let meta = SnapshotMeta::new(&problem, &grid, state, surface);
        files.extend(write_snapshot(out, field, &meta, format)?);
    }
    let summary = summary_text(&problem, &grid, scheme, tau, &output.state, &output.stats, energy.as_ref(), &files, out)?;
    fs::write(out.join("summary.txt"), &summary)?;
    fs::write(
        out.join("timings.txt"),
        format!(
            "setup_seconds = {:.6}\nloop_seconds = {:.6}\ntotal_seconds = {:.6}\n",
            output.stats.setup_seconds,
            output.stats.loop_seconds,
            output.stats.total_seconds()
        ),
    )?;
    if let Some(e) = &energy {
        let mut csv = String::from("step,t,energy\n");
        for (k, v) in e.values.iter().enumerate() {
            let _ = writeln!(csv, "{},{:e},{:.16e}", k + 1, (k + 1) as f64 * tau, v);
        }
        fs::write(out.join("energy.csv"), csv)?;
    }
    print!("{summary}");
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn summary_text(
    problem: &Problem<f64>,
    grid: &Grid2D<f64>,
    scheme: Scheme,
    tau: f64,
    state: &SchemeState<f64>,
    stats: &RunStats,
    energy: Option<&EnergyTrace<f64>>,
    files: &[PathBuf],
    out: &Path,
) -> Result<String> {
    let spatial = SpatialOperators::build(problem.alpha, grid, &SolverOptions::default())?;
    let norms = NormOperators::from_spatial(&spatial)?;
    let mut s = String::new();
    let _ = writeln!(s, "scheme = {scheme}");
    let _ = writeln!(s, "alpha = {}", problem.alpha);
    let _ = writeln!(s, "kappa = {:e}", problem.kappa);
    let _ = writeln!(s, "nonlinearity = {}", problem.nonlinearity.id());
    let _ = writeln!(s, "phi1 = {:?}", problem.phi1);
    let _ = writeln!(s, "phi2 = {:?}", problem.phi2);
    let _ = writeln!(s, "domain = ({}, {})", grid.a, grid.b);
    let _ = writeln!(s, "n = {}", grid.n);
    let _ = writeln!(s, "h = {:e}", grid.h);
    let _ = writeln!(s, "tau = {tau:e}");
    let _ = writeln!(s, "steps = {}", stats.steps);
    let _ = writeln!(s, "t_final = {:e}", state.t);
    let _ = writeln!(s, "l2_norm = {:.12e}", norms.norm_sq(NormKind::L2, &state.u_curr)?.sqrt());
    let _ = writeln!(s, "a_norm = {:.12e}", norms.norm_sq(NormKind::A, &state.u_curr)?.sqrt());
    let _ = writeln!(s, "max_abs = {:.12e}", state.u_curr.max_abs());
    if let Some(gs) = &stats.gs_setup {
        let _ = writeln!(s, "gs_setup_iterations = {}", gs.iterations);
        let _ = writeln!(s, "gs_setup_residual = {:.3e}", gs.final_relative_residual);
    }
    if scheme == Scheme::NonAdi {
        let _ = writeln!(s, "pcg_iterations_total = {}", stats.pcg_iterations_total);
        let _ = writeln!(s, "pcg_iterations_max = {}", stats.pcg_iterations_max);
        let _ = writeln!(s, "pcg_residual_max = {:.3e}", stats.pcg_residual_max);
    }
    if let Some(e) = energy {
        let _ = writeln!(s, "energy_first = {:.16e}", e.values.first().copied().unwrap_or(0.0));
        let _ = writeln!(s, "energy_relative_drift = {:.3e}", e.relative_drift());
    }
    for f in files {
        let name = f.strip_prefix(out).unwrap_or(f);
        let _ = writeln!(s, "snapshot = {}", name.display());
    }
    Ok(s)
}

fn study(args: &StudyArgs, kind: AxisKind, out: &Path) -> Result<()> {
    let schemes = parse_schemes(args.scheme.as_deref().unwrap_or("sadi"))?;
    let preset = args.table.as_deref().map(TablePreset::from_id).transpose()?;
    let mut spec = match (preset, &args.spec) {
        (Some(_), Some(_)) => {
            return Err(Error::InvalidArgument("--table and --spec are exclusive".into()))
        }
        (Some(p), None) => {
            if p.kind() != kind {
                return Err(Error::InvalidArgument(format!(
                    "table {:?} belongs to the other study kind",
                    p
                )));
            }
            p.spec(schemes.clone())
        }
        (None, Some(path)) => StudySpec::parse(&fs::read_to_string(path)?, kind)?,
        (None, None) => {
            // Flags alone; reuse the spec parser for defaults and checks.
            let mut text = String::new();
            for (k, v) in [("taus", &args.taus), ("hs", &args.hs)] {
                if let Some(v) = v {
                    let _ = writeln!(text, "{k} = {v}");
                }
            }
            StudySpec::parse(&text, kind)?
        }
    };
    if let Some(e) = &args.example {
        spec.example = Example::from_id(e)?;
        if args.t_final.is_none() {
            spec.t_final = spec.example.t_final();
        }
    }
    if args.scheme.is_some() {
        spec.schemes = schemes;
    }
    if let Some(a) = &args.alphas {
        spec.alphas = parse_list(a)?;
    }
    if let Some(t) = &args.t_final {
        spec.t_final = parse_step(t)?;
    }
    if let Some(t) = args.tol {
        spec.opts.pcg_tol = t;
    }
    if let Some(o) = args.oversampling {
        spec.opts.oversampling = o;
    }
    spec.timing_strict |= args.timing_strict;
    if args.table.is_some() || args.spec.is_some() {
        let taus = args.taus.as_deref().map(parse_list).transpose()?;
        let hs = args.hs.as_deref().map(parse_list).transpose()?;
        match (&mut spec.axis, taus, hs) {
            (Axis::Time { taus: t, .. }, Some(v), _) => *t = v,
            (Axis::Space { hs: h, .. }, _, Some(v)) => *h = v,
            _ => {}
        }
        match (&mut spec.axis, args.taus.as_deref(), args.hs.as_deref()) {
            (Axis::Time { h, .. }, _, Some(v)) => *h = single(v, "--hs")?,
            (Axis::Space { tau, .. }, Some(v), _) => *tau = single(v, "--taus")?,
            _ => {}
        }
    }
    spec.validate()?;

    let default_name = match (preset, kind) {
        (Some(p), _) => format!("table{}.csv", p as u8 + 1),
        (None, AxisKind::Time) => "study-time.csv".to_string(),
        (None, AxisKind::Space) => "study-space.csv".to_string(),
    };
    let path = args.output.clone().unwrap_or_else(|| out.join(default_name));
    let rows = run_study(&spec, &path)?;
    print!("{}", fraclap::harness::rows_to_csv(&rows));
    eprintln!("wrote {}", path.display());
    Ok(())
}

fn single(s: &str, flag: &str) -> Result<f64> {
    match parse_list(s)?.as_slice() {
        [x] => Ok(*x),
        _ => Err(Error::InvalidArgument(format!("{flag} takes exactly one value here"))),
    }
}

fn coeffs(args: &CoeffArgs, out: &Path) -> Result<()> {
    let alpha = FracOrder::new(args.alpha)?;
    if args.count == 0 {
        return Err(Error::InvalidArgument("--count must be positive".into()));
    }
    let mut csv = String::from("i,j,value\n");
    match args.dim {
        1 => {
            for (k, v) in riesz_coeffs_1d::<f64>(alpha, args.count)?.weights.iter().enumerate() {
                let _ = writeln!(csv, "{k},0,{v:.16e}");
            }
        }
        2 => {
            let c = laplacian_coeffs_2d::<f64>(alpha, args.count, args.oversampling)?;
            for i in 0..args.count as isize {
                for j in 0..args.count as isize {
                    let _ = writeln!(csv, "{i},{j},{:.16e}", c.get(i, j));
                }
            }
        }
        d => return Err(Error::InvalidArgument(format!("--dim {d} must be 1 or 2"))),
    }
    match args.output.as_deref() {
        Some(p) if p == Path::new("-") => print!("{csv}"),
        p => {
            let path = p.map(Path::to_path_buf).unwrap_or_else(|| out.join("coeffs.csv"));
            if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
                fs::create_dir_all(dir)?;
            }
            fs::write(&path, csv)?;
            eprintln!("wrote {}", path.display());
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(t) = cli.threads {
        if t == 0 {
            eprintln!("error: --threads must be positive");
            return ExitCode::from(2);
        }
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(t).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    let out = output_dir(&cli.output_dir);
    let result = match &cli.command {
        Command::Solve(a) => solve(a, &out),
        Command::StudyTime(a) => study(a, AxisKind::Time, &out),
        Command::StudySpace(a) => study(a, AxisKind::Space, &out),
        Command::Coeffs(a) => coeffs(a, &out),
        Command::Selftest(a) => {
            let report = selftest(&SelftestOptions {
                corrupt_coefficients: a.corrupt_coefficients,
            });
            print!("{}", report.render());
            if !report.passed() {
                return ExitCode::from(1);
            }
            Ok(())
        }
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exit_codes_by_failure_class() {
        assert_eq!(exit_code(&Error::NotConverged { iterations: 1000, residual: 1e-3 }), 3);
        assert_eq!(exit_code(&Error::QuadratureBudget { evaluations: 10 }), 3);
        assert_eq!(exit_code(&Error::NotPositiveDefinite(-1.0)), 3);
        let blow = Error::BlowUp { step: 3, time: 0.3, magnitude: 1e13 };
        assert_eq!(exit_code(&blow), 4);
        assert_eq!(exit_code(&Error::Io(std::io::Error::other("x"))), 5);
        assert_eq!(exit_code(&Error::InvalidArgument("x".into())), 2);
    }

    #[test]
    fn flag_beats_environment() {
        let flag = Some(PathBuf::from("from-flag"));
        assert_eq!(output_dir(&flag), PathBuf::from("from-flag"));
    }
}
