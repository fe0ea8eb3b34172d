//! Uniform square grids and grid functions with zero exterior extension.

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Uniform grid on `(a, b)²` with `n` interior nodes per direction.
///
/// Interior nodes are `x_i = a + i·h`, `i = 1..=n`, with `h = (b − a)/(n + 1)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid2D<T> {
    pub a: T,
    pub b: T,
    pub n: usize,
    pub h: T,
}

impl<T: Real> Grid2D<T> {
    pub fn new(a: T, b: T, n: usize) -> Result<Self> {
        if !(b > a) || !a.is_finite() || !b.is_finite() {
            return Err(Error::invalid(format!("empty domain ({a}, {b})")));
        }
        if n == 0 {
            return Err(Error::invalid("grid needs at least one interior node"));
        }
        let h = (b - a) / T::lit((n + 1) as f64);
        Ok(Self { a, b, n, h })
    }

    /// Grid with spacing `h`; `(b − a)/h` must be an integer `n + 1`.
    pub fn with_spacing(a: T, b: T, h: T) -> Result<Self> {
        if !(h > T::zero()) {
            return Err(Error::invalid(format!("spacing {h} must be positive")));
        }
        let cells = ((b - a) / h).as_f64();
        let rounded = cells.round();
        if (cells - rounded).abs() > 1e-9 * cells.max(1.0) || rounded < 2.0 {
            return Err(Error::invalid(format!(
                "spacing {h} does not divide ({a}, {b}) into an integral number of cells"
            )));
        }
        Self::new(a, b, rounded as usize - 1)
    }

    /// Coordinate of interior node `i` (1-based, `1..=n`).
    #[inline]
    pub fn node(&self, i: usize) -> T {
        self.a + T::lit(i as f64) * self.h
    }

    /// Grid with half the spacing; coarse node `i` coincides with fine node `2i`.
    pub fn refined(&self) -> Self {
        Self {
            a: self.a,
            b: self.b,
            n: 2 * self.n + 1,
            h: self.h / T::lit(2.0),
        }
    }
}

/// Real grid function on the `n × n` interior nodes, zero outside.
///
/// Storage is row-major with the y-index as the row: the value at
/// `(x_i, y_j)` (0-based `i`, `j`) lives at `data[j * n + i]`, so each
/// x-line is a contiguous slice.
#[derive(Debug, Clone, PartialEq)]
pub struct Field<T> {
    n: usize,
    data: Vec<T>,
}

impl<T: Real> Field<T> {
    pub fn zeros(n: usize) -> Self {
        Self {
            n,
            data: vec![T::zero(); n * n],
        }
    }

    pub fn from_vec(n: usize, data: Vec<T>) -> Result<Self> {
        if data.len() != n * n {
            return Err(Error::shape(n * n, data.len()));
        }
        Ok(Self { n, data })
    }

    /// Samples `f(x_i, y_j)` at every interior node.
    pub fn from_fn(grid: &Grid2D<T>, mut f: impl FnMut(T, T) -> T) -> Self {
        let n = grid.n;
        let mut data = Vec::with_capacity(n * n);
        for j in 1..=n {
            let y = grid.node(j);
            for i in 1..=n {
                data.push(f(grid.node(i), y));
            }
        }
        Self { n, data }
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn as_slice(&self) -> &[T] {
        &self.data
    }

    #[inline]
    pub fn as_mut_slice(&mut self) -> &mut [T] {
        &mut self.data
    }

    pub fn into_vec(self) -> Vec<T> {
        self.data
    }

    /// Value at 0-based `(i, j)` = `(x-index, y-index)`.
    #[inline]
    pub fn get(&self, i: usize, j: usize) -> T {
        self.data[j * self.n + i]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: T) {
        self.data[j * self.n + i] = v;
    }

    pub fn transpose(&self) -> Self {
        let n = self.n;
        let mut out = vec![T::zero(); n * n];
        for j in 0..n {
            for i in 0..n {
                out[i * n + j] = self.data[j * n + i];
            }
        }
        Self { n, data: out }
    }

    pub fn map(&self, f: impl Fn(T) -> T) -> Self {
        Self {
            n: self.n,
            data: self.data.iter().map(|&v| f(v)).collect(),
        }
    }

    /// `self ← self + s·other`.
    pub fn axpy(&mut self, s: T, other: &Self) -> Result<()> {
        self.check_same(other)?;
        for (a, &b) in self.data.iter_mut().zip(&other.data) {
            *a = *a + s * b;
        }
        Ok(())
    }

    pub fn scale(&mut self, s: T) {
        for v in &mut self.data {
            *v = *v * s;
        }
    }

    pub fn max_abs(&self) -> T {
        self.data
            .iter()
            .fold(T::zero(), |m, &v| if v.abs() > m || v.is_nan() { v.abs() } else { m })
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|v| v.is_zero())
    }

    /// Restriction of a field on `grid.refined()` to the coarse nodes.
    pub fn restrict_to_coarse(&self) -> Result<Self> {
        let fine = self.n;
        if fine < 3 || fine % 2 == 0 {
            return Err(Error::invalid(format!(
                "a field with {fine} nodes per side is not a refinement of any grid"
            )));
        }
        let n = (fine - 1) / 2;
        let mut out = Self::zeros(n);
        for j in 0..n {
            for i in 0..n {
                out.set(i, j, self.get(2 * i + 1, 2 * j + 1));
            }
        }
        Ok(out)
    }

    pub(crate) fn check_same(&self, other: &Self) -> Result<()> {
        if self.n != other.n {
            return Err(Error::shape(self.n, other.n));
        }
        Ok(())
    }
}
