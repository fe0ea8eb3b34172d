//! Difference weights of the discrete Riesz derivative and of the discrete
//! 2D fractional Laplacian.
//!
//! Both families are Fourier coefficients of a nonnegative trigonometric
//! symbol: `(4 sin²(η/2))^{α/2}` in 1D and
//! `(4 sin²(η/2) + 4 sin²(ξ/2))^{α/2}` in 2D. The 1D weights have a closed
//! form in Gamma functions and are generated by a two-term recurrence. The 2D
//! weights have no closed form; they are obtained by sampling the symbol on
//! an oversampled periodic grid and transforming (trapezoidal rule, whose
//! aliasing error is the coefficient tail beyond the sampling period).

mod oracle;

pub use oracle::coeff_quadrature_oracle;

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::structured::fft::FftPair;

/// Default oversampling factor for [`laplacian_coeffs_2d`].
pub const DEFAULT_OVERSAMPLING: usize = 8;

/// Default cap on the working memory of the 2D coefficient transform.
pub const DEFAULT_MEMORY_BUDGET: usize = 1 << 30;

/// Order α of the fractional Laplacian.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct FracOrder(f64);

impl FracOrder {
    /// Admissible orders are `1 < α < 2`.
    pub fn new(alpha: f64) -> Result<Self> {
        if alpha > 1.0 && alpha < 2.0 {
            Ok(Self(alpha))
        } else {
            Err(Error::InvalidOrder(alpha))
        }
    }

    /// `α = 2`, the classical Laplacian. Only meaningful as a sanity case.
    pub fn classical() -> Self {
        Self(2.0)
    }

    #[inline]
    pub fn value(self) -> f64 {
        self.0
    }

    #[inline]
    pub fn as_real<T: Real>(self) -> T {
        T::lit(self.0)
    }
}

impl std::fmt::Display for FracOrder {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// 1D Riesz weights `a_k`, `k = 0..len`; `a_{−k} = a_k`.
#[derive(Debug, Clone, PartialEq)]
pub struct Coeffs1D<T> {
    pub alpha: FracOrder,
    pub weights: Vec<T>,
}

impl<T: Real> Coeffs1D<T> {
    #[inline]
    pub fn len(&self) -> usize {
        self.weights.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    /// `a_k` for any signed offset inside the stored range.
    #[inline]
    pub fn get(&self, k: isize) -> T {
        self.weights[k.unsigned_abs()]
    }

    /// `a_0 + 2 Σ_{k≥1} a_k` over the stored weights (the symbol at η = 0
    /// truncated to this range).
    pub fn symmetric_sum(&self) -> T {
        let two = T::lit(2.0);
        self.weights[0] + two * self.weights[1..].iter().copied().sum::<T>()
    }
}

/// 2D weights `a_ij` for `0 ≤ i, j < count`; other quadrants by symmetry
/// `a_{±i,±j} = a_ij`.
#[derive(Debug, Clone, PartialEq)]
pub struct Coeffs2D<T> {
    pub alpha: FracOrder,
    count: usize,
    quadrant: Vec<T>,
}

impl<T: Real> Coeffs2D<T> {
    pub fn from_quadrant(alpha: FracOrder, count: usize, quadrant: Vec<T>) -> Result<Self> {
        if quadrant.len() != count * count {
            return Err(Error::shape(count * count, quadrant.len()));
        }
        Ok(Self {
            alpha,
            count,
            quadrant,
        })
    }

    #[inline]
    pub fn count(&self) -> usize {
        self.count
    }

    /// `a_ij` for signed offsets inside the stored range.
    #[inline]
    pub fn get(&self, i: isize, j: isize) -> T {
        self.quadrant[i.unsigned_abs() * self.count + j.unsigned_abs()]
    }

    pub fn quadrant(&self) -> &[T] {
        &self.quadrant
    }

    pub fn quadrant_mut(&mut self) -> &mut [T] {
        &mut self.quadrant
    }

    /// Sum over all stored `(i, j) ∈ (−count, count)²`.
    pub fn full_sum(&self) -> T {
        let c = self.count;
        let mut total = T::zero();
        for i in 0..c {
            for j in 0..c {
                let mult = match (i, j) {
                    (0, 0) => 1.0,
                    (0, _) | (_, 0) => 2.0,
                    _ => 4.0,
                };
                total = total + T::lit(mult) * self.quadrant[i * c + j];
            }
        }
        total
    }
}

/// `Γ(α+1) / Γ(α/2+1)²`, the central Riesz weight.
pub fn riesz_center_weight(alpha: FracOrder) -> f64 {
    let a = alpha.value();
    libm::tgamma(a + 1.0) / libm::tgamma(a / 2.0 + 1.0).powi(2)
}

/// Riesz weights `a_k = (−1)^k Γ(α+1) / (Γ(α/2−k+1) Γ(α/2+k+1))` for
/// `k = 0..count`, via `a_{k+1} = a_k (k − α/2)/(k + 1 + α/2)`.
pub fn riesz_coeffs_1d<T: Real>(alpha: FracOrder, count: usize) -> Result<Coeffs1D<T>> {
    if count == 0 {
        return Err(Error::invalid("coefficient count must be at least 1"));
    }
    let half = T::lit(alpha.value() / 2.0);
    let mut weights = Vec::with_capacity(count);
    let mut a = T::lit(riesz_center_weight(alpha));
    weights.push(a);
    for k in 0..count - 1 {
        let k = T::lit(k as f64);
        a = a * (k - half) / (k + T::one() + half);
        weights.push(a);
    }
    Ok(Coeffs1D { alpha, weights })
}

/// Cross-shaped weights of `δ_x^α + δ_y^α`: `ã_00 = 2a_0`, `ã_0j = a_j`,
/// `ã_i0 = a_i`, zero elsewhere.
pub fn riesz_sum_coeffs_2d<T: Real>(alpha: FracOrder, count: usize) -> Result<Coeffs2D<T>> {
    let a = riesz_coeffs_1d::<T>(alpha, count)?;
    let mut quadrant = vec![T::zero(); count * count];
    for k in 0..count {
        quadrant[k] = a.weights[k];
        quadrant[k * count] = a.weights[k];
    }
    quadrant[0] = a.weights[0] + a.weights[0];
    Coeffs2D::from_quadrant(alpha, count, quadrant)
}

/// Sampling period used for `count` coefficients at the given oversampling.
pub fn sampling_size(count: usize, oversampling: usize) -> usize {
    (oversampling * count).max(2).next_power_of_two()
}

/// 2D fractional-Laplacian weights with the default memory budget.
pub fn laplacian_coeffs_2d<T: Real>(
    alpha: FracOrder,
    count: usize,
    oversampling: usize,
) -> Result<Coeffs2D<T>> {
    laplacian_coeffs_2d_with_budget(alpha, count, oversampling, DEFAULT_MEMORY_BUDGET)
}

/// Fourier coefficients `a_ij`, `0 ≤ i, j < count`, of the 2D symbol sampled
/// on an `M × M` periodic grid, `M` the smallest power of two
/// `≥ oversampling · count`.
///
/// The symbol is real and even in both variables, so the 2D inverse DFT is
/// separable into real cosine sums; they are evaluated with length-`M` FFTs,
/// two real sequences packed per complex transform, touching only the
/// nonnegative frequency quarter. Working memory is
/// `(M/2 + 1) · count` reals.
pub fn laplacian_coeffs_2d_with_budget<T: Real>(
    alpha: FracOrder,
    count: usize,
    oversampling: usize,
    memory_budget: usize,
) -> Result<Coeffs2D<T>> {
    if count == 0 {
        return Err(Error::invalid("coefficient count must be at least 1"));
    }
    if oversampling < 2 {
        return Err(Error::invalid(format!(
            "oversampling {oversampling} must be at least 2"
        )));
    }
    let m = sampling_size(count, oversampling);
    let half = m / 2;
    let required = (half + 1) * count * std::mem::size_of::<T>()
        + 2 * m * std::mem::size_of::<Complex<T>>();
    if required > memory_budget {
        return Err(Error::MemoryBudget {
            required,
            budget: memory_budget,
        });
    }

    let plan = FftPair::<T>::new(m);
    let mut scratch = plan.scratch();
    let mut buf = vec![Complex::<T>::default(); m];
    let inv_m = T::one() / T::lit(m as f64);
    let expo = alpha.as_real::<T>() / T::lit(2.0);

    // 4 sin²(θ_p/2) on the nonnegative half, θ_p = 2πp/M.
    let sym: Vec<T> = (0..=half)
        .map(|p| {
            let s = (T::PI() * T::lit(p as f64) / T::lit(m as f64)).sin();
            T::lit(4.0) * s * s
        })
        .collect();
    let fold = |p: usize| if p <= half { p } else { m - p };

    // Stage 1: transform along η for each ξ-row q = 0..=half.
    let mut partial = vec![T::zero(); (half + 1) * count];
    let mut q = 0;
    while q <= half {
        let q2 = (q + 1).min(half);
        let paired = q2 != q;
        for (p, z) in buf.iter_mut().enumerate() {
            let sp = sym[fold(p)];
            let re = (sp + sym[q]).powf(expo);
            let im = if paired {
                (sp + sym[q2]).powf(expo)
            } else {
                T::zero()
            };
            *z = Complex::new(re, im);
        }
        plan.forward(&mut buf, &mut scratch);
        for i in 0..count {
            partial[q * count + i] = buf[i].re * inv_m;
            if paired {
                partial[q2 * count + i] = buf[i].im * inv_m;
            }
        }
        q += 2;
    }

    // Stage 2: transform along ξ for each retained η-frequency i.
    let mut quadrant = vec![T::zero(); count * count];
    let mut i = 0;
    while i < count {
        let i2 = i + 1;
        let paired = i2 < count;
        for (qq, z) in buf.iter_mut().enumerate() {
            let row = fold(qq) * count;
            let re = partial[row + i];
            let im = if paired { partial[row + i2] } else { T::zero() };
            *z = Complex::new(re, im);
        }
        plan.forward(&mut buf, &mut scratch);
        for j in 0..count {
            quadrant[i * count + j] = buf[j].re * inv_m;
            if paired {
                quadrant[i2 * count + j] = buf[j].im * inv_m;
            }
        }
        i += 2;
    }

    // Exact symmetry; the two transform orders differ only in round-off.
    for i in 0..count {
        for j in (i + 1)..count {
            let avg = (quadrant[i * count + j] + quadrant[j * count + i]) / T::lit(2.0);
            quadrant[i * count + j] = avg;
            quadrant[j * count + i] = avg;
        }
    }
    Coeffs2D::from_quadrant(alpha, count, quadrant)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn alpha(a: f64) -> FracOrder {
        FracOrder::new(a).unwrap()
    }

    #[test]
    fn order_range() {
        assert!(FracOrder::new(1.0).is_err());
        assert!(FracOrder::new(2.0).is_err());
        assert!(FracOrder::new(f64::NAN).is_err());
        assert!(FracOrder::new(1.5).is_ok());
        assert_eq!(FracOrder::classical().value(), 2.0);
    }

    #[test]
    fn classical_stencil_recovered() {
        let c = riesz_coeffs_1d::<f64>(FracOrder::classical(), 3).unwrap();
        assert_eq!(c.weights, vec![2.0, -1.0, 0.0]);
    }

    #[test]
    fn sign_pattern_and_center() {
        for a in [1.1, 1.5, 1.9] {
            let c = riesz_coeffs_1d::<f64>(alpha(a), 50).unwrap();
            let a0 = libm::tgamma(a + 1.0) / libm::tgamma(a / 2.0 + 1.0).powi(2);
            assert_eq!(c.weights[0], a0);
            assert!(c.weights[0] > 0.0);
            assert!(c.weights[1..].iter().all(|&w| w < 0.0));
        }
    }

    #[test]
    fn truncated_symbol_sum_decays() {
        let s1 = riesz_coeffs_1d::<f64>(alpha(1.5), 512).unwrap().symmetric_sum();
        let s2 = riesz_coeffs_1d::<f64>(alpha(1.5), 2048).unwrap().symmetric_sum();
        assert!(s2.abs() < 1e-4, "{s2}");
        assert!(s2.abs() < s1.abs());
    }

    #[test]
    fn zero_count_rejected() {
        assert!(riesz_coeffs_1d::<f64>(alpha(1.5), 0).is_err());
        assert!(laplacian_coeffs_2d::<f64>(alpha(1.5), 0, 8).is_err());
        assert!(laplacian_coeffs_2d::<f64>(alpha(1.5), 4, 1).is_err());
    }

    #[test]
    fn memory_budget_enforced() {
        let err = laplacian_coeffs_2d_with_budget::<f64>(alpha(1.5), 64, 8, 1000).unwrap_err();
        assert!(matches!(err, Error::MemoryBudget { .. }));
    }

    #[test]
    fn riesz_sum_is_cross_shaped() {
        let a = riesz_coeffs_1d::<f64>(alpha(1.3), 8).unwrap();
        let t = riesz_sum_coeffs_2d::<f64>(alpha(1.3), 8).unwrap();
        assert_eq!(t.get(0, 0), 2.0 * a.weights[0]);
        assert_eq!(t.get(0, 5), a.weights[5]);
        assert_eq!(t.get(-5, 0), a.weights[5]);
        assert_eq!(t.get(2, 3), 0.0);
        for i in 1..8 {
            for j in 1..8 {
                assert_eq!(t.get(i, j), 0.0);
            }
        }
    }

    #[test]
    fn classical_2d_is_five_point() {
        let c = laplacian_coeffs_2d::<f64>(FracOrder::classical(), 4, 8).unwrap();
        assert!((c.get(0, 0) - 4.0).abs() < 1e-13);
        assert!((c.get(1, 0) + 1.0).abs() < 1e-13);
        assert!((c.get(0, 1) + 1.0).abs() < 1e-13);
        assert!(c.get(1, 1).abs() < 1e-13);
        assert!(c.get(2, 0).abs() < 1e-13);
    }

    #[test]
    fn symmetric_and_positive_center() {
        let c = laplacian_coeffs_2d::<f64>(alpha(1.7), 16, 8).unwrap();
        assert!(c.get(0, 0) > 0.0);
        for i in 0..16 {
            for j in 0..16 {
                assert_eq!(c.get(i, j), c.get(j, i));
            }
        }
        // The stored window is the full sampling torus minus the aliased
        // tail, so the symbol-at-origin sum is small but not exactly zero.
        assert!(c.full_sum().abs() < 5e-3);
    }

    #[test]
    fn generic_over_f32() {
        let c32 = laplacian_coeffs_2d::<f32>(alpha(1.5), 8, 8).unwrap();
        let c64 = laplacian_coeffs_2d::<f64>(alpha(1.5), 8, 8).unwrap();
        for (a, b) in c32.quadrant().iter().zip(c64.quadrant()) {
            assert!((*a as f64 - b).abs() < 1e-5);
        }
    }
}
