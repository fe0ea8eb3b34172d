//! FFT plans with a fixed normalization convention and a call counter.
//!
//! Forward transforms are unnormalized; inverse transforms carry `1/len`.
//! Every transform executed through [`FftPair`] bumps a per-thread counter so
//! tests can assert exact FFT budgets.

use std::cell::Cell;
use std::fmt;
use std::sync::Arc;

use num_complex::Complex;
use rustfft::{Fft, FftPlanner};

use crate::scalar::Real;

thread_local! {
    static FFT_CALLS: Cell<u64> = const { Cell::new(0) };
}

/// Number of transforms run on the current thread since the last reset.
pub fn fft_count() -> u64 {
    FFT_CALLS.with(Cell::get)
}

pub fn reset_fft_count() {
    FFT_CALLS.with(|c| c.set(0));
}

#[inline]
fn bump(n: u64) {
    FFT_CALLS.with(|c| c.set(c.get() + n));
}

/// Forward/inverse plan pair for one transform length.
#[derive(Clone)]
pub struct FftPair<T: Real> {
    len: usize,
    fwd: Arc<dyn Fft<T>>,
    inv: Arc<dyn Fft<T>>,
    scratch_len: usize,
}

impl<T: Real> fmt::Debug for FftPair<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FftPair").field("len", &self.len).finish()
    }
}

impl<T: Real> FftPair<T> {
    pub fn new(len: usize) -> Self {
        let mut planner = FftPlanner::new();
        let fwd = planner.plan_fft_forward(len);
        let inv = planner.plan_fft_inverse(len);
        let scratch_len = fwd
            .get_inplace_scratch_len()
            .max(inv.get_inplace_scratch_len());
        Self {
            len,
            fwd,
            inv,
            scratch_len,
        }
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.len
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn scratch(&self) -> Vec<Complex<T>> {
        vec![Complex::default(); self.scratch_len]
    }

    /// In-place forward transform of every `len`-chunk of `buf`.
    pub fn forward(&self, buf: &mut [Complex<T>], scratch: &mut [Complex<T>]) {
        debug_assert_eq!(buf.len() % self.len, 0);
        self.fwd.process_with_scratch(buf, scratch);
        bump((buf.len() / self.len) as u64);
    }

    /// In-place inverse transform (including the `1/len` factor) of every
    /// `len`-chunk of `buf`.
    pub fn inverse(&self, buf: &mut [Complex<T>], scratch: &mut [Complex<T>]) {
        debug_assert_eq!(buf.len() % self.len, 0);
        self.inv.process_with_scratch(buf, scratch);
        let s = T::one() / T::lit(self.len as f64);
        for z in buf.iter_mut() {
            *z = *z * s;
        }
        bump((buf.len() / self.len) as u64);
    }

    /// Convenience: forward transform of a copy.
    pub fn fft(&self, v: &[Complex<T>]) -> Vec<Complex<T>> {
        let mut out = v.to_vec();
        let mut scratch = self.scratch();
        self.forward(&mut out, &mut scratch);
        out
    }

    pub fn ifft(&self, v: &[Complex<T>]) -> Vec<Complex<T>> {
        let mut out = v.to_vec();
        let mut scratch = self.scratch();
        self.inverse(&mut out, &mut scratch);
        out
    }
}

/// In-place transpose of a square `m × m` row-major buffer.
/// Smallest length `≥ min` whose only prime factors are 2, 3, 5 and 7.
pub fn smooth_len(min: usize) -> usize {
    let mut m = min.max(1);
    loop {
        let mut r = m;
        for p in [2, 3, 5, 7] {
            while r % p == 0 {
                r /= p;
            }
        }
        if r == 1 {
            return m;
        }
        m += 1;
    }
}

pub(crate) fn transpose_square<C: Copy>(buf: &mut [C], m: usize) {
    debug_assert_eq!(buf.len(), m * m);
    const BLOCK: usize = 32;
    for rb in (0..m).step_by(BLOCK) {
        for cb in (rb..m).step_by(BLOCK) {
            for r in rb..(rb + BLOCK).min(m) {
                let c0 = if cb == rb { r + 1 } else { cb };
                for c in c0..(cb + BLOCK).min(m) {
                    buf.swap(r * m + c, c * m + r);
                }
            }
        }
    }
}
