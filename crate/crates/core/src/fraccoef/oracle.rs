//! Direct quadrature of the 2D coefficient integral.
//!
//! Independent of the FFT sampling path in the parent module; used as a test
//! oracle for small `|i|, |j|`.

use std::collections::BinaryHeap;

use super::FracOrder;
use crate::error::{Error, Result};

// Gauss–Kronrod 7/15 nodes and weights on [-1, 1] (QUADPACK qk15).
const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];
// Gauss weights for the odd-indexed Kronrod nodes 1, 3, 5, 7.
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

fn gk15(f: &mut impl FnMut(f64) -> Result<f64>, a: f64, b: f64) -> Result<(f64, f64)> {
    let c = 0.5 * (a + b);
    let r = 0.5 * (b - a);
    let fc = f(c)?;
    let mut kron = WGK[7] * fc;
    let mut gauss = WG[3] * fc;
    for k in 0..7 {
        let dx = r * XGK[k];
        let s = f(c - dx)? + f(c + dx)?;
        kron += WGK[k] * s;
        if k % 2 == 1 {
            gauss += WG[k / 2] * s;
        }
    }
    Ok((kron * r, ((kron - gauss) * r).abs()))
}

struct Panel {
    a: f64,
    b: f64,
    value: f64,
    err: f64,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.err == other.err
    }
}
impl Eq for Panel {}
impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Panel {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.err.total_cmp(&other.err)
    }
}

/// Globally adaptive GK15: bisect the panel with the largest error estimate
/// until the summed estimate is below `tol`.
fn adaptive(
    mut f: impl FnMut(f64) -> Result<f64>,
    a: f64,
    b: f64,
    tol: f64,
    max_panels: usize,
) -> Result<f64> {
    let (value, err) = gk15(&mut f, a, b)?;
    let mut heap = BinaryHeap::new();
    heap.push(Panel { a, b, value, err });
    let mut total_err = err;
    let mut panels = 1;
    while total_err > tol || !total_err.is_finite() {
        if panels >= max_panels || !total_err.is_finite() {
            return Err(Error::QuadratureBudget {
                evaluations: panels * 15,
            });
        }
        let worst = heap.pop().expect("heap is never empty");
        let mid = 0.5 * (worst.a + worst.b);
        let (v1, e1) = gk15(&mut f, worst.a, mid)?;
        let (v2, e2) = gk15(&mut f, mid, worst.b)?;
        total_err += e1 + e2 - worst.err;
        heap.push(Panel { a: worst.a, b: mid, value: v1, err: e1 });
        heap.push(Panel { a: mid, b: worst.b, value: v2, err: e2 });
        panels += 1;
    }
    Ok(heap.iter().map(|p| p.value).sum())
}

const MAX_PANELS: usize = 4000;

/// `a_ij = (1/4π²) ∫∫_{[−π,π]²} (4sin²(η/2) + 4sin²(ξ/2))^{α/2} cos(iη + jξ) dη dξ`
/// by nested adaptive Gauss–Kronrod quadrature to absolute accuracy `tol`.
///
/// Evenness reduces the domain to `[0, π]²` with integrand
/// `symbol · cos(iη) cos(jξ)`. Fails with [`Error::QuadratureBudget`] when
/// either level exceeds its panel budget.
pub fn coeff_quadrature_oracle(alpha: FracOrder, i: i64, j: i64, tol: f64) -> Result<f64> {
    if !(tol > 0.0) {
        return Err(Error::invalid(format!("tolerance {tol} must be positive")));
    }
    let expo = alpha.value() / 2.0;
    let pi = std::f64::consts::PI;
    let (i, j) = (i.unsigned_abs() as f64, j.unsigned_abs() as f64);
    // Scale: (4/4π²) ∫∫_{[0,π]²} = (1/π²) ∫∫.
    let outer_tol = tol * pi * pi;
    let inner_tol = outer_tol / (10.0 * pi);
    let outer = |eta: f64| -> Result<f64> {
        let se = (eta / 2.0).sin();
        let se = 4.0 * se * se;
        let inner = adaptive(
            |xi: f64| {
                let sx = (xi / 2.0).sin();
                Ok((se + 4.0 * sx * sx).powf(expo) * (j * xi).cos())
            },
            0.0,
            pi,
            inner_tol,
            MAX_PANELS,
        )?;
        Ok(inner * (i * eta).cos())
    };
    let total = adaptive(outer, 0.0, pi, outer_tol / 2.0, MAX_PANELS)?;
    Ok(total / (pi * pi))
}
