//! Block-Toeplitz-with-Toeplitz-blocks products via 2N × 2N circulant
//! embedding.
//!
//! The symmetric BTTB matrix with entries `scale · a_{|i−p|, |j−q|}` is the
//! top-left block of a block-circulant-circulant-block matrix of size
//! `(2N)² × (2N)²`, diagonalized by the 2D DFT. A product pads the field to
//! the `2N × 2N` torus, multiplies in Fourier space and crops.

use num_complex::Complex;
use rayon::prelude::*;

use super::fft::{smooth_len, transpose_square, FftPair};
use crate::error::{Error, Result};
use crate::fraccoef::Coeffs2D;
use crate::grid::Field;
use crate::scalar::Real;

#[derive(Debug, Clone)]
pub struct BttbOperator<T: Real> {
    n: usize,
    /// Torus side, the smallest 2·3·5·7-smooth length ≥ `2n − 1`.
    m: usize,
    /// 2D DFT of the embedded kernel, stored transposed (the layout produced
    /// by [`BttbOperator::forward2`]).
    spectrum: Vec<Complex<T>>,
    plan: FftPair<T>,
}

/// Reusable `(2N)²` buffer for [`BttbOperator::apply_into`].
#[derive(Debug, Clone)]
pub struct BttbWork<T> {
    buf: Vec<Complex<T>>,
}

impl<T: Real> BttbOperator<T> {
    /// Embeds `scale · a_ij` for an `n × n` grid.
    pub fn build(coeffs: &Coeffs2D<T>, n: usize, scale: T) -> Result<Self> {
        if n == 0 {
            return Err(Error::invalid("BTTB operator needs n ≥ 1"));
        }
        if coeffs.count() < n {
            return Err(Error::invalid(format!(
                "{} coefficients per direction cannot cover a grid with n = {n}",
                coeffs.count()
            )));
        }
        let m = smooth_len(2 * n - 1);
        // Torus offset → coefficient index; offsets between the two bands are padding.
        let fold = |p: usize| -> Option<isize> {
            if p < n {
                Some(p as isize)
            } else if p + n > m {
                Some((m - p) as isize)
            } else {
                None
            }
        };
        let mut kernel = vec![Complex::<T>::default(); m * m];
        for r in 0..m {
            let Some(dr) = fold(r) else { continue };
            for c in 0..m {
                let Some(dc) = fold(c) else { continue };
                kernel[r * m + c] = Complex::new(scale * coeffs.get(dr, dc), T::zero());
            }
        }
        let plan = FftPair::new(m);
        let op = Self {
            n,
            m,
            spectrum: Vec::new(),
            plan,
        };
        op.forward2(&mut kernel, m);
        Ok(Self {
            spectrum: kernel,
            ..op
        })
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn spectrum(&self) -> &[Complex<T>] {
        &self.spectrum
    }

    pub fn work(&self) -> BttbWork<T> {
        BttbWork {
            buf: vec![Complex::default(); self.m * self.m],
        }
    }

    fn rows_forward(&self, rows: &mut [Complex<T>]) {
        let m = self.m;
        rows.par_chunks_mut(m)
            .for_each_init(|| self.plan.scratch(), |s, row| self.plan.forward(row, s));
    }

    fn rows_inverse(&self, rows: &mut [Complex<T>]) {
        let m = self.m;
        rows.par_chunks_mut(m)
            .for_each_init(|| self.plan.scratch(), |s, row| self.plan.inverse(row, s));
    }

    /// Row transforms over the first `live_rows` rows (the rest are zero),
    /// transpose, then row transforms over all rows.
    fn forward2(&self, buf: &mut [Complex<T>], live_rows: usize) {
        let m = self.m;
        self.rows_forward(&mut buf[..live_rows * m]);
        transpose_square(buf, m);
        self.rows_forward(buf);
    }

    pub fn apply_into(&self, u: &[T], out: &mut [T], work: &mut BttbWork<T>) -> Result<()> {
        let n = self.n;
        let m = self.m;
        if u.len() != n * n {
            return Err(Error::shape(n * n, u.len()));
        }
        if out.len() != n * n {
            return Err(Error::shape(n * n, out.len()));
        }
        let buf = &mut work.buf;
        for z in buf.iter_mut() {
            *z = Complex::default();
        }
        for j in 0..n {
            for i in 0..n {
                buf[j * m + i] = Complex::new(u[j * n + i], T::zero());
            }
        }
        self.forward2(buf, n);
        for (z, s) in buf.iter_mut().zip(&self.spectrum) {
            *z = *z * s;
        }
        self.rows_inverse(buf);
        transpose_square(buf, m);
        // Only the first n rows survive the crop.
        self.rows_inverse(&mut buf[..n * m]);
        for j in 0..n {
            for i in 0..n {
                out[j * n + i] = buf[j * m + i].re;
            }
        }
        Ok(())
    }

    pub fn apply(&self, u: &Field<T>) -> Result<Field<T>> {
        let mut out = vec![T::zero(); u.as_slice().len()];
        self.apply_into(u.as_slice(), &mut out, &mut self.work())?;
        Field::from_vec(u.n(), out)
    }
}

/// Builds the operator for `scale · [a_{|i−p|,|j−q|}]` on an `n × n` grid.
pub fn bttb_build<T: Real>(coeffs: &Coeffs2D<T>, n: usize, scale: T) -> Result<BttbOperator<T>> {
    BttbOperator::build(coeffs, n, scale)
}

pub fn bttb_apply<T: Real>(op: &BttbOperator<T>, u: &Field<T>) -> Result<Field<T>> {
    if u.n() != op.n() {
        return Err(Error::shape(op.n(), u.n()));
    }
    op.apply(u)
}
