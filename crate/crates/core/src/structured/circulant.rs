//! Circulant and skew-circulant matrices through their FFT diagonalization.
//!
//! `C = F⁻¹ diag(λ_c) F` with `λ_c = fft(c)`, and
//! `S = Q* F⁻¹ diag(λ_s) F Q` with `Q = diag(exp(−iπk/N))`, `λ_s = fft(Q s)`,
//! where `c`, `s` are the first columns.

use num_complex::Complex;

use super::fft::FftPair;
use crate::error::{Error, Result};
use crate::scalar::Real;

pub fn circulant_eigenvalues<T: Real>(first_col: &[Complex<T>]) -> Vec<Complex<T>> {
    FftPair::new(first_col.len()).fft(first_col)
}

/// Diagonal of `Q`: `exp(−iπk/N)`, `k = 0..N`.
pub fn skew_phase<T: Real>(n: usize) -> Vec<Complex<T>> {
    (0..n)
        .map(|k| {
            let theta = -T::PI() * T::lit(k as f64) / T::lit(n as f64);
            Complex::new(theta.cos(), theta.sin())
        })
        .collect()
}

/// Returns `(λ_s, q_diag)` for the skew-circulant with first column `s`.
pub fn skew_circulant_eigenvalues<T: Real>(
    first_col: &[Complex<T>],
) -> (Vec<Complex<T>>, Vec<Complex<T>>) {
    let q = skew_phase::<T>(first_col.len());
    let qs: Vec<_> = first_col.iter().zip(&q).map(|(s, q)| s * q).collect();
    (FftPair::new(first_col.len()).fft(&qs), q)
}

/// `C v = ifft(λ_c ∘ fft(v))`.
pub fn circulant_matvec<T: Real>(
    lambda_c: &[Complex<T>],
    v: &[Complex<T>],
) -> Result<Vec<Complex<T>>> {
    if lambda_c.len() != v.len() {
        return Err(Error::shape(lambda_c.len(), v.len()));
    }
    let plan = FftPair::new(v.len());
    let mut buf = v.to_vec();
    let mut scratch = plan.scratch();
    apply_circulant(&plan, lambda_c, &mut buf, &mut scratch);
    Ok(buf)
}

/// `S v = Q* ifft(λ_s ∘ fft(Q v))`.
pub fn skew_circulant_matvec<T: Real>(
    lambda_s: &[Complex<T>],
    q_diag: &[Complex<T>],
    v: &[Complex<T>],
) -> Result<Vec<Complex<T>>> {
    if lambda_s.len() != v.len() {
        return Err(Error::shape(lambda_s.len(), v.len()));
    }
    if q_diag.len() != v.len() {
        return Err(Error::shape(q_diag.len(), v.len()));
    }
    let plan = FftPair::new(v.len());
    let mut buf = v.to_vec();
    let mut scratch = plan.scratch();
    apply_skew_circulant(&plan, lambda_s, q_diag, &mut buf, &mut scratch);
    Ok(buf)
}

#[inline]
pub(crate) fn apply_circulant<T: Real>(
    plan: &FftPair<T>,
    lambda: &[Complex<T>],
    buf: &mut [Complex<T>],
    scratch: &mut [Complex<T>],
) {
    plan.forward(buf, scratch);
    for (z, l) in buf.iter_mut().zip(lambda) {
        *z = *z * l;
    }
    plan.inverse(buf, scratch);
}

#[inline]
pub(crate) fn apply_skew_circulant<T: Real>(
    plan: &FftPair<T>,
    lambda: &[Complex<T>],
    q: &[Complex<T>],
    buf: &mut [Complex<T>],
    scratch: &mut [Complex<T>],
) {
    for (z, q) in buf.iter_mut().zip(q) {
        *z = *z * q;
    }
    plan.forward(buf, scratch);
    for (z, l) in buf.iter_mut().zip(lambda) {
        *z = *z * l;
    }
    plan.inverse(buf, scratch);
    for (z, q) in buf.iter_mut().zip(q) {
        *z = *z * q.conj();
    }
}
