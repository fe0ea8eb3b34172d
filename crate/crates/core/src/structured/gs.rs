//! Gohberg–Semencul solver for symmetric positive definite Toeplitz systems.
//!
//! With `c = H⁻¹e₁ = [p₁, …, p_N]`, `C` the circulant with first column `c`
//! and `S` the skew-circulant with first column `[p₁, −p_N, …, −p₂]`,
//!
//! ```text
//! H⁻¹ v = Re(v̂) + J Im(v̂),   v̂ = C S (v + i J v) / (2 p₁),
//! ```
//!
//! `J` the index reversal. Once `c` is known (one PCG solve), every
//! application costs four FFTs of length `N`.

use num_complex::Complex;
use rayon::prelude::*;

use super::circulant::{apply_circulant, apply_skew_circulant, skew_phase};
use super::fft::FftPair;
use super::pcg::{pcg, PcgReport};
use super::tau::TauSpec;
use super::toeplitz::ToeplitzOperator;
use crate::error::{Error, Result};
use crate::scalar::Real;

/// Symmetric Toeplitz matrix `[t_{|i−j|}]` given by its first column.
#[derive(Debug, Clone, PartialEq)]
pub struct SymToeplitz<T> {
    first_col: Vec<T>,
}

impl<T: Real> SymToeplitz<T> {
    pub fn new(first_col: Vec<T>) -> Result<Self> {
        if first_col.is_empty() {
            return Err(Error::invalid("empty Toeplitz matrix"));
        }
        Ok(Self { first_col })
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.first_col.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.first_col.is_empty()
    }

    pub fn first_col(&self) -> &[T] {
        &self.first_col
    }

    #[inline]
    pub fn entry(&self, i: usize, j: usize) -> T {
        self.first_col[i.abs_diff(j)]
    }

    pub fn operator(&self) -> Result<ToeplitzOperator<T>> {
        ToeplitzOperator::new(&self.first_col)
    }
}

/// Precomputed Gohberg–Semencul representation of `H⁻¹`.
#[derive(Debug, Clone)]
pub struct GsData<T: Real> {
    n: usize,
    /// First entry of `H⁻¹e₁`; positive for SPD `H`.
    pub p1: T,
    /// `H⁻¹e₁`.
    pub first_col_inv: Vec<T>,
    pub lambda_c: Vec<Complex<T>>,
    pub lambda_s: Vec<Complex<T>>,
    pub q_diag: Vec<Complex<T>>,
    /// Report of the one-time PCG solve for `H⁻¹e₁`.
    pub setup: PcgReport,
    plan: FftPair<T>,
}

/// Per-caller scratch for [`GsData::solve_into`].
#[derive(Debug, Clone)]
pub struct GsWork<T> {
    buf: Vec<Complex<T>>,
    scratch: Vec<Complex<T>>,
}

/// Solves `H c = e₁` by PCG preconditioned with `tau`, then forms
/// `p₁`, `λ_c = fft(c)` and `λ_s = fft(Q s)`.
pub fn gs_precompute<T: Real>(
    h: &SymToeplitz<T>,
    tau: &TauSpec<T>,
    tol: f64,
) -> Result<GsData<T>> {
    let n = h.len();
    if tau.n() != n || tau.is_2d() {
        return Err(Error::shape(n, tau.eigenvalues().len()));
    }
    let op = h.operator()?;
    let mut buf = vec![Complex::default(); 2 * n];
    let mut scratch = FftPair::<T>::new(2 * n).scratch();
    let mut e1 = vec![T::zero(); n];
    e1[0] = T::one();
    let (c, report) = pcg(
        |v, out| op.apply_into(v, out, &mut buf, &mut scratch),
        |r, out| tau.apply_into(r, out),
        &e1,
        None,
        tol,
        2 * n + 200,
    )?;
    report.ensure_converged()?;
    GsData::from_first_column(c, report)
}

impl<T: Real> GsData<T> {
    /// Builds the representation from a known `c = H⁻¹e₁`.
    pub fn from_first_column(c: Vec<T>, setup: PcgReport) -> Result<Self> {
        let n = c.len();
        if n == 0 {
            return Err(Error::invalid("empty Toeplitz matrix"));
        }
        let p1 = c[0];
        if !(p1 > T::zero()) {
            return Err(Error::NotPositiveDefinite(p1.as_f64()));
        }
        let plan = FftPair::<T>::new(n);
        let cc: Vec<Complex<T>> = c.iter().map(|&x| Complex::new(x, T::zero())).collect();
        let lambda_c = plan.fft(&cc);
        let q_diag = skew_phase::<T>(n);
        let qs: Vec<Complex<T>> = (0..n)
            .map(|k| {
                let s = if k == 0 { c[0] } else { -c[n - k] };
                q_diag[k] * s
            })
            .collect();
        let lambda_s = plan.fft(&qs);
        Ok(Self {
            n,
            p1,
            first_col_inv: c,
            lambda_c,
            lambda_s,
            q_diag,
            setup,
            plan,
        })
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn work(&self) -> GsWork<T> {
        GsWork {
            buf: vec![Complex::default(); self.n],
            scratch: self.plan.scratch(),
        }
    }

    /// `out = H⁻¹ v` using exactly four length-`N` FFTs.
    pub fn solve_into(&self, v: &[T], out: &mut [T], work: &mut GsWork<T>) -> Result<()> {
        let n = self.n;
        if v.len() != n {
            return Err(Error::shape(n, v.len()));
        }
        if out.len() != n {
            return Err(Error::shape(n, out.len()));
        }
        let scale = T::one() / (self.p1 + self.p1);
        let buf = &mut work.buf;
        for k in 0..n {
            buf[k] = Complex::new(v[k], v[n - 1 - k]) * scale;
        }
        apply_skew_circulant(&self.plan, &self.lambda_s, &self.q_diag, buf, &mut work.scratch);
        apply_circulant(&self.plan, &self.lambda_c, buf, &mut work.scratch);
        for k in 0..n {
            out[k] = buf[k].re + buf[n - 1 - k].im;
        }
        Ok(())
    }

    pub fn solve(&self, v: &[T]) -> Result<Vec<T>> {
        let mut out = vec![T::zero(); self.n];
        self.solve_into(v, &mut out, &mut self.work())?;
        Ok(out)
    }

    /// Solves in place for every contiguous `N`-line of `data`. Lines are
    /// independent, so they may be processed in parallel without affecting
    /// the result bits.
    pub fn solve_lines(&self, data: &mut [T]) -> Result<()> {
        let n = self.n;
        if data.len() % n != 0 {
            return Err(Error::shape(n, data.len()));
        }
        data.par_chunks_mut(n).try_for_each_init(
            || (self.work(), vec![T::zero(); n]),
            |(work, tmp), line| {
                self.solve_into(line, tmp, work)?;
                line.copy_from_slice(tmp);
                Ok(())
            },
        )
    }
}

/// `H⁻¹ v` from precomputed data.
pub fn gs_solve<T: Real>(data: &GsData<T>, v: &[T]) -> Result<Vec<T>> {
    data.solve(v)
}
