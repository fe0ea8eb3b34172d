//! Orthonormal DST-I and tau-algebra preconditioners.
//!
//! Matrices in the tau algebra are diagonalized by the DST-I. The
//! preconditioners here sample a generating symbol at the DST-I frequencies
//! `θ_p = pπ/(N+1)`, `p = 1..N`.

use num_complex::Complex;

use super::fft::{transpose_square, FftPair};
use crate::error::{Error, Result};
use crate::fraccoef::FracOrder;
use crate::scalar::Real;

/// Orthonormal (hence self-inverse) DST-I of length `N`, computed by odd
/// extension to length `2(N+1)` and one complex FFT per pair of lines.
#[derive(Debug, Clone)]
pub struct Dst1<T: Real> {
    n: usize,
    plan: FftPair<T>,
    scale: T,
}

impl<T: Real> Dst1<T> {
    pub fn new(n: usize) -> Self {
        Self {
            n,
            plan: FftPair::new(2 * (n + 1)),
            scale: (T::lit(2.0) / T::lit((n + 1) as f64)).sqrt(),
        }
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    /// Transforms every contiguous `N`-line of `data` in place.
    pub fn apply_lines(&self, data: &mut [T]) -> Result<()> {
        let n = self.n;
        if n == 0 || data.len() % n != 0 {
            return Err(Error::shape(n, data.len()));
        }
        let m = 2 * (n + 1);
        let mut buf = vec![Complex::<T>::default(); m];
        let mut scratch = self.plan.scratch();
        let half = T::lit(0.5) * self.scale;
        let mut lines = data.chunks_mut(n);
        while let Some(x) = lines.next() {
            let y = lines.next();
            // Odd extension of x + i·y: z[j] = x_j, z[m−j] = −x_j, z[0] = z[N+1] = 0.
            for z in buf.iter_mut() {
                *z = Complex::default();
            }
            for j in 0..n {
                let im = y.as_ref().map_or(T::zero(), |y| y[j]);
                let v = Complex::new(x[j], im);
                buf[j + 1] = v;
                buf[m - j - 1] = -v;
            }
            self.plan.forward(&mut buf, &mut scratch);
            // FFT of a real odd sequence is −2i·(sine sum).
            for k in 0..n {
                x[k] = -buf[k + 1].im * half;
            }
            if let Some(y) = y {
                for k in 0..n {
                    y[k] = buf[k + 1].re * half;
                }
            }
        }
        Ok(())
    }
}

/// Orthonormal DST-I of `v`.
pub fn dst1<T: Real>(v: &[T]) -> Result<Vec<T>> {
    let mut out = v.to_vec();
    Dst1::new(v.len()).apply_lines(&mut out)?;
    Ok(out)
}

/// Tau preconditioner `M = S diag(d) S` (1D) or its tensor version (2D).
#[derive(Debug, Clone)]
pub struct TauSpec<T: Real> {
    n: usize,
    two_d: bool,
    eigenvalues: Vec<T>,
    dst: Dst1<T>,
}

/// `(4 sin²(θ/2))^{α/2}` at `θ_p = pπ/(N+1)`, `p = 1..N`.
fn riesz_symbol_samples<T: Real>(alpha: FracOrder, n: usize) -> Vec<T> {
    let expo = alpha.as_real::<T>() / T::lit(2.0);
    (1..=n)
        .map(|p| {
            let s = (T::PI() * T::lit(p as f64) / T::lit(2.0 * (n + 1) as f64)).sin();
            (T::lit(4.0) * s * s).powf(expo)
        })
        .collect()
}

/// 1D: `d_p = 1 + factor·(4 sin²(θ_p/2))^{α/2}`.
pub fn tau_spec_1d<T: Real>(alpha: FracOrder, n: usize, factor: T) -> Result<TauSpec<T>> {
    check(n, factor)?;
    let eig = riesz_symbol_samples::<T>(alpha, n)
        .into_iter()
        .map(|s| T::one() + factor * s)
        .collect();
    Ok(TauSpec::from_parts(n, false, eig))
}

/// 2D: `d_pq = 1 + factor·(4 sin²(θ_p/2) + 4 sin²(θ_q/2))^{α/2}`, the
/// fractional-Laplacian symbol at tensor DST-I frequencies.
pub fn tau_spec_2d<T: Real>(alpha: FracOrder, n: usize, factor: T) -> Result<TauSpec<T>> {
    check(n, factor)?;
    let expo = alpha.as_real::<T>() / T::lit(2.0);
    let s2: Vec<T> = (1..=n)
        .map(|p| {
            let s = (T::PI() * T::lit(p as f64) / T::lit(2.0 * (n + 1) as f64)).sin();
            T::lit(4.0) * s * s
        })
        .collect();
    let mut eig = Vec::with_capacity(n * n);
    for q in 0..n {
        for p in 0..n {
            eig.push(T::one() + factor * (s2[p] + s2[q]).powf(expo));
        }
    }
    Ok(TauSpec::from_parts(n, true, eig))
}

fn check<T: Real>(n: usize, factor: T) -> Result<()> {
    if n == 0 {
        return Err(Error::invalid("tau preconditioner needs n ≥ 1"));
    }
    if !(factor >= T::zero()) {
        return Err(Error::invalid(format!("tau factor {factor} must be nonnegative")));
    }
    Ok(())
}

impl<T: Real> TauSpec<T> {
    fn from_parts(n: usize, two_d: bool, eigenvalues: Vec<T>) -> Self {
        Self {
            n,
            two_d,
            eigenvalues,
            dst: Dst1::new(n),
        }
    }

    /// Tau preconditioner for a general symmetric Toeplitz matrix, sampling
    /// its symbol `t_0 + 2 Σ_k t_k cos(kθ)` at `θ_p`. Falls back to the
    /// diagonal `t_0` if any sample is not positive.
    pub fn from_toeplitz(first_col: &[T]) -> Result<Self> {
        let n = first_col.len();
        check(n, T::zero())?;
        let two = T::lit(2.0);
        let eig: Vec<T> = (1..=n)
            .map(|p| {
                let theta = T::PI() * T::lit(p as f64) / T::lit((n + 1) as f64);
                first_col[0]
                    + two
                        * first_col[1..]
                            .iter()
                            .enumerate()
                            .map(|(k, &t)| t * (T::lit((k + 1) as f64) * theta).cos())
                            .sum::<T>()
            })
            .collect();
        let eig = if eig.iter().all(|&d| d > T::zero()) {
            eig
        } else {
            vec![first_col[0]; n]
        };
        Ok(Self::from_parts(n, false, eig))
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn is_2d(&self) -> bool {
        self.two_d
    }

    /// Eigenvalues in DST-I order (`p` fastest, then `q` in 2D).
    pub fn eigenvalues(&self) -> &[T] {
        &self.eigenvalues
    }

    /// `out = M⁻¹ v`.
    pub fn apply_into(&self, v: &[T], out: &mut [T]) -> Result<()> {
        let len = self.eigenvalues.len();
        if v.len() != len {
            return Err(Error::shape(len, v.len()));
        }
        if out.len() != len {
            return Err(Error::shape(len, out.len()));
        }
        out.copy_from_slice(v);
        self.forward(out)?;
        for (o, &d) in out.iter_mut().zip(&self.eigenvalues) {
            *o = *o / d;
        }
        self.forward(out)
    }

    pub fn apply(&self, v: &[T]) -> Result<Vec<T>> {
        let mut out = vec![T::zero(); v.len()];
        self.apply_into(v, &mut out)?;
        Ok(out)
    }

    fn forward(&self, data: &mut [T]) -> Result<()> {
        self.dst.apply_lines(data)?;
        if self.two_d {
            transpose_square(data, self.n);
            self.dst.apply_lines(data)?;
            transpose_square(data, self.n);
        }
        Ok(())
    }
}

/// `tau_apply(spec, v) = M⁻¹ v`.
pub fn tau_apply<T: Real>(spec: &TauSpec<T>, v: &[T]) -> Result<Vec<T>> {
    spec.apply(v)
}
