//! Snapshot files.
//!
//! CSV: header `i,j,value`, then one line per interior node with 1-based
//! `i` (x) and `j` (y), `j` outer and `i` inner, values in `{:.16e}`.
//!
//! Raw: `N·N` little-endian IEEE-754 binary64 values, row `j` (y) major,
//! column `i` (x) minor, no header. A `.txt` sidecar of `key = value` lines
//! carries `n`, `h`, `a`, `b`, `t`, `step`, `alpha`, `kappa`,
//! `nonlinearity`, `surface`.

use std::collections::BTreeMap;
use std::fs;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};
use crate::grid::{Field, Grid2D};
use crate::scalar::Real;

use super::problem::Problem;
use super::run::Recorder;
use super::state::SchemeState;

/// Pointwise transform applied before writing.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Surface {
    #[default]
    U,
    SinU,
    SinHalfU,
}

impl Surface {
    pub fn from_id(id: &str) -> Result<Self> {
        match id {
            "u" => Ok(Self::U),
            "sin_u" => Ok(Self::SinU),
            "sin_half_u" => Ok(Self::SinHalfU),
            _ => Err(Error::Parse(format!("unknown surface `{id}`"))),
        }
    }

    pub fn id(self) -> &'static str {
        match self {
            Self::U => "u",
            Self::SinU => "sin_u",
            Self::SinHalfU => "sin_half_u",
        }
    }

    pub fn apply<T: Real>(self, u: &Field<T>) -> Field<T> {
        match self {
            Self::U => u.clone(),
            Self::SinU => u.map(T::sin),
            Self::SinHalfU => u.map(|v| (v / T::lit(2.0)).sin()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SnapshotFormat {
    #[default]
    Csv,
    Raw,
}

impl SnapshotFormat {
    pub fn from_id(id: &str) -> Result<Self> {
        match id {
            "csv" => Ok(Self::Csv),
            "raw" => Ok(Self::Raw),
            _ => Err(Error::Parse(format!("unknown snapshot format `{id}`"))),
        }
    }
}

/// Descriptive fields written alongside raw snapshots.
#[derive(Debug, Clone, PartialEq)]
pub struct SnapshotMeta {
    pub n: usize,
    pub h: f64,
    pub a: f64,
    pub b: f64,
    pub t: f64,
    pub step: usize,
    pub alpha: f64,
    pub kappa: f64,
    pub nonlinearity: String,
    pub surface: Surface,
}

impl SnapshotMeta {
    pub fn new<T: Real>(problem: &Problem<T>, grid: &Grid2D<T>, state: &SchemeState<T>, surface: Surface) -> Self {
        Self {
            n: grid.n,
            h: grid.h.as_f64(),
            a: grid.a.as_f64(),
            b: grid.b.as_f64(),
            t: state.t.as_f64(),
            step: state.n,
            alpha: problem.alpha.value(),
            kappa: problem.kappa.as_f64(),
            nonlinearity: problem.nonlinearity.id().to_string(),
            surface,
        }
    }

    pub fn sidecar(&self) -> String {
        format!(
            "n = {}\nh = {:e}\na = {:e}\nb = {:e}\nt = {:e}\nstep = {}\nalpha = {}\nkappa = {:e}\nnonlinearity = {}\nsurface = {}\n",
            self.n,
            self.h,
            self.a,
            self.b,
            self.t,
            self.step,
            self.alpha,
            self.kappa,
            self.nonlinearity,
            self.surface.id()
        )
    }

    /// `snapshot_n{step:06}` (no extension).
    pub fn stem(&self) -> String {
        format!("snapshot_n{:06}", self.step)
    }
}

/// Writes `field` (already transformed) and returns the paths created.
pub fn write_snapshot<T: Real>(
    dir: &Path,
    field: &Field<T>,
    meta: &SnapshotMeta,
    format: SnapshotFormat,
) -> Result<Vec<PathBuf>> {
    fs::create_dir_all(dir)?;
    let n = field.n();
    match format {
        SnapshotFormat::Csv => {
            let path = dir.join(format!("{}.csv", meta.stem()));
            let mut w = BufWriter::new(fs::File::create(&path)?);
            writeln!(w, "i,j,value")?;
            for j in 0..n {
                for i in 0..n {
                    writeln!(w, "{},{},{:.16e}", i + 1, j + 1, field.get(i, j).as_f64())?;
                }
            }
            w.flush()?;
            Ok(vec![path])
        }
        SnapshotFormat::Raw => {
            let path = dir.join(format!("{}.bin", meta.stem()));
            let side = dir.join(format!("{}.txt", meta.stem()));
            let mut bytes = Vec::with_capacity(8 * n * n);
            for &v in field.as_slice() {
                bytes.extend_from_slice(&v.as_f64().to_le_bytes());
            }
            fs::write(&path, bytes)?;
            fs::write(&side, meta.sidecar())?;
            Ok(vec![path, side])
        }
    }
}

/// Reads a raw block written by [`write_snapshot`].
pub fn read_raw(path: &Path, n: usize) -> Result<Field<f64>> {
    let bytes = fs::read(path)?;
    if bytes.len() != 8 * n * n {
        return Err(Error::shape(8 * n * n, bytes.len()));
    }
    let data = bytes
        .chunks_exact(8)
        .map(|c| f64::from_le_bytes(c.try_into().expect("chunk of 8")))
        .collect();
    Field::from_vec(n, data)
}

/// Keeps transformed copies of `u` at the requested times.
#[derive(Debug, Clone)]
pub struct SnapshotRecorder<T> {
    wanted: BTreeMap<usize, f64>,
    surface: Surface,
    pub captured: Vec<(SchemeState<T>, Field<T>)>,
}

impl<T: Real> SnapshotRecorder<T> {
    /// Every time must be a nonnegative integral multiple of `tau_step`.
    pub fn new(times: &[f64], tau_step: f64, surface: Surface) -> Result<Self> {
        let mut wanted = BTreeMap::new();
        for &t in times {
            let n = if t == 0.0 {
                0
            } else {
                super::run::step_count(t, tau_step)?
            };
            wanted.insert(n, t);
        }
        Ok(Self {
            wanted,
            surface,
            captured: Vec::new(),
        })
    }

    pub fn last_step(&self) -> Option<usize> {
        self.wanted.keys().next_back().copied()
    }
}

impl<T: Real> Recorder<T> for SnapshotRecorder<T> {
    fn record(&mut self, state: &SchemeState<T>) -> Result<()> {
        if self.wanted.contains_key(&state.n) {
            let f = self.surface.apply(&state.u_curr);
            self.captured.push((state.clone(), f));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fraccoef::FracOrder;
    use crate::stepper::problem::Example;

    #[test]
    fn raw_round_trip_and_csv_layout() {
        let dir = tempfile::tempdir().unwrap();
        let grid = Grid2D::new(0.0, 4.0, 3).unwrap();
        let u = Field::from_fn(&grid, |x, y| x + 10.0 * y);
        let p = Example::SineGordon.problem::<f64>(FracOrder::new(1.5).unwrap());
        let state = SchemeState::initial(u.clone());
        let meta = SnapshotMeta::new(&p, &grid, &state, Surface::U);
        let paths = write_snapshot(dir.path(), &u, &meta, SnapshotFormat::Raw).unwrap();
        assert_eq!(read_raw(&paths[0], 3).unwrap(), u);
        let side = fs::read_to_string(&paths[1]).unwrap();
        assert!(side.contains("n = 3\n") && side.contains("nonlinearity = sine_gordon"));

        let paths = write_snapshot(dir.path(), &u, &meta, SnapshotFormat::Csv).unwrap();
        let text = fs::read_to_string(&paths[0]).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "i,j,value");
        assert_eq!(lines[2], "2,1,1.2000000000000000e1");
        assert_eq!(lines.len(), 10);
    }

    #[test]
    fn surfaces() {
        let u = Field::from_vec(1, vec![std::f64::consts::PI]).unwrap();
        assert!(Surface::SinU.apply(&u).get(0, 0).abs() < 1e-15);
        assert_eq!(Surface::SinHalfU.apply(&u).get(0, 0), 1.0);
        assert!(Surface::from_id("cos").is_err());
    }

    #[test]
    fn recorder_times_must_hit_steps() {
        assert!(SnapshotRecorder::<f64>::new(&[1.25, 2.5], 0.01, Surface::U).is_ok());
        assert!(SnapshotRecorder::<f64>::new(&[0.005], 0.01, Surface::U).is_err());
    }
}
