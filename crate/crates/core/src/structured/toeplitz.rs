//! Symmetric Toeplitz products by embedding in a circulant of size `2N`.

use num_complex::Complex;

use super::fft::FftPair;
use crate::error::{Error, Result};
use crate::scalar::Real;

/// Symmetric Toeplitz matrix `[t_{|i−j|}]` prepared for fast products.
#[derive(Debug, Clone)]
pub struct ToeplitzOperator<T: Real> {
    n: usize,
    spectrum: Vec<Complex<T>>,
    plan: FftPair<T>,
}

impl<T: Real> ToeplitzOperator<T> {
    pub fn new(first_col: &[T]) -> Result<Self> {
        let n = first_col.len();
        if n == 0 {
            return Err(Error::invalid("empty Toeplitz matrix"));
        }
        let m = 2 * n;
        // Embedding column: [t_0..t_{N−1}, 0, t_{N−1}..t_1].
        let mut col = vec![Complex::<T>::default(); m];
        for k in 0..n {
            col[k] = Complex::new(first_col[k], T::zero());
        }
        for k in 1..n {
            col[m - k] = Complex::new(first_col[k], T::zero());
        }
        let plan = FftPair::new(m);
        let spectrum = plan.fft(&col);
        Ok(Self { n, spectrum, plan })
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn apply(&self, v: &[T]) -> Result<Vec<T>> {
        let mut out = vec![T::zero(); self.n];
        let mut buf = vec![Complex::default(); 2 * self.n];
        let mut scratch = self.plan.scratch();
        self.apply_into(v, &mut out, &mut buf, &mut scratch)?;
        Ok(out)
    }

    /// Two FFTs of length `2N`; `buf` must hold `2N` entries.
    pub fn apply_into(
        &self,
        v: &[T],
        out: &mut [T],
        buf: &mut [Complex<T>],
        scratch: &mut [Complex<T>],
    ) -> Result<()> {
        if v.len() != self.n {
            return Err(Error::shape(self.n, v.len()));
        }
        if out.len() != self.n {
            return Err(Error::shape(self.n, out.len()));
        }
        for (k, z) in buf.iter_mut().enumerate() {
            *z = if k < self.n {
                Complex::new(v[k], T::zero())
            } else {
                Complex::default()
            };
        }
        super::circulant::apply_circulant(&self.plan, &self.spectrum, buf, scratch);
        for (o, z) in out.iter_mut().zip(buf.iter()) {
            *o = z.re;
        }
        Ok(())
    }

    /// Applies the operator to every contiguous `N`-line of `data` in place.
    pub fn apply_lines(&self, data: &mut [T]) -> Result<()> {
        if data.len() % self.n != 0 {
            return Err(Error::shape(self.n, data.len()));
        }
        let mut buf = vec![Complex::default(); 2 * self.n];
        let mut scratch = self.plan.scratch();
        let mut tmp = vec![T::zero(); self.n];
        for line in data.chunks_mut(self.n) {
            self.apply_into(line, &mut tmp, &mut buf, &mut scratch)?;
            line.copy_from_slice(&tmp);
        }
        Ok(())
    }
}

/// Symmetric Toeplitz product `[t_{|i−j|}] v`.
pub fn toeplitz_matvec<T: Real>(first_col: &[T], v: &[T]) -> Result<Vec<T>> {
    if first_col.len() != v.len() {
        return Err(Error::shape(first_col.len(), v.len()));
    }
    ToeplitzOperator::new(first_col)?.apply(v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn identity() {
        let mut e1 = vec![0.0f64; 5];
        e1[0] = 1.0;
        let v = vec![1.0, -2.0, 3.0, 0.5, 7.0];
        let out = toeplitz_matvec(&e1, &v).unwrap();
        for (a, b) in out.iter().zip(&v) {
            assert!((a - b).abs() < 1e-14);
        }
    }

    #[test]
    fn matches_dense() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let n: usize = 7;
        let t: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let v: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let fast = toeplitz_matvec(&t, &v).unwrap();
        for i in 0..n {
            let dense: f64 = (0..n).map(|j| t[i.abs_diff(j)] * v[j]).sum();
            assert!((fast[i] - dense).abs() < 1e-12);
        }
    }

    #[test]
    fn classical_stencil_on_constant() {
        let n = 6;
        let mut t = vec![0.0f64; n];
        t[0] = 2.0;
        t[1] = -1.0;
        let out = toeplitz_matvec(&t, &vec![3.0; n]).unwrap();
        assert!((out[0] - 3.0).abs() < 1e-13);
        assert!((out[n - 1] - 3.0).abs() < 1e-13);
        for v in &out[1..n - 1] {
            assert!(v.abs() < 1e-13);
        }
    }

    #[test]
    fn shape_errors() {
        assert!(toeplitz_matvec(&[1.0, 2.0], &[1.0]).is_err());
        assert!(ToeplitzOperator::<f64>::new(&[]).is_err());
    }
}
