#![allow(dead_code)]

use fraclap::fraccoef::{laplacian_coeffs_2d, riesz_coeffs_1d};
use fraclap::{FracOrder, Grid2D};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Row-major square matrix.
#[derive(Clone, Debug)]
pub struct Dense {
    pub n: usize,
    pub a: Vec<f64>,
}

impl Dense {
    pub fn zeros(n: usize) -> Self {
        Self { n, a: vec![0.0; n * n] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for k in 0..n {
            m.a[k * n + k] = 1.0;
        }
        m
    }

    pub fn symmetric_toeplitz(col: &[f64]) -> Self {
        let n = col.len();
        let mut m = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                m.a[i * n + j] = col[i.abs_diff(j)];
            }
        }
        m
    }

    pub fn at(&self, i: usize, j: usize) -> f64 {
        self.a[i * self.n + j]
    }

    pub fn scaled_add(&self, s: f64, other: &Self) -> Self {
        Self {
            n: self.n,
            a: self.a.iter().zip(&other.a).map(|(x, y)| x + s * y).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let n = self.n;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let v = self.a[i * n + k];
                if v != 0.0 {
                    for j in 0..n {
                        out.a[i * n + j] += v * other.a[k * n + j];
                    }
                }
            }
        }
        out
    }

    pub fn matvec(&self, v: &[f64]) -> Vec<f64> {
        let n = self.n;
        (0..n).map(|i| (0..n).map(|j| self.a[i * n + j] * v[j]).sum()).collect()
    }

    /// Gaussian elimination with partial pivoting.
    pub fn solve(&self, b: &[f64]) -> Vec<f64> {
        let n = self.n;
        let mut a = self.a.clone();
        let mut b = b.to_vec();
        for k in 0..n {
            let p = (k..n)
                .max_by(|&i, &j| a[i * n + k].abs().total_cmp(&a[j * n + k].abs()))
                .unwrap();
            if p != k {
                for c in 0..n {
                    a.swap(k * n + c, p * n + c);
                }
                b.swap(k, p);
            }
            for i in k + 1..n {
                let f = a[i * n + k] / a[k * n + k];
                if f != 0.0 {
                    for c in k..n {
                        a[i * n + c] -= f * a[k * n + c];
                    }
                    b[i] -= f * b[k];
                }
            }
        }
        for k in (0..n).rev() {
            let s: f64 = (k + 1..n).map(|c| a[k * n + c] * b[c]).sum();
            b[k] = (b[k] - s) / a[k * n + k];
        }
        b
    }

    /// Cholesky succeeds iff the matrix is (numerically) SPD.
    pub fn is_spd(&self) -> bool {
        let n = self.n;
        let mut l = vec![0.0; n * n];
        for j in 0..n {
            let d = self.a[j * n + j] - (0..j).map(|k| l[j * n + k] * l[j * n + k]).sum::<f64>();
            if !(d > 0.0) {
                return false;
            }
            l[j * n + j] = d.sqrt();
            for i in j + 1..n {
                let s = self.a[i * n + j] - (0..j).map(|k| l[i * n + k] * l[j * n + k]).sum::<f64>();
                l[i * n + j] = s / l[j * n + j];
            }
        }
        true
    }
}

/// Dense `h^{−α}`-scaled operators on the `N² × N²` grid space, indexed
/// `j·N + i` like `Field`.
pub struct DenseGridOps {
    pub lap: Dense,
    pub ax: Dense,
    pub ay: Dense,
}

pub fn dense_grid_ops(alpha: FracOrder, grid: &Grid2D<f64>) -> DenseGridOps {
    let n = grid.n;
    let s = grid.h.powf(-alpha.value());
    let c2 = laplacian_coeffs_2d::<f64>(alpha, n, 8).unwrap();
    let c1 = riesz_coeffs_1d::<f64>(alpha, n).unwrap();
    let nn = n * n;
    let (mut lap, mut ax, mut ay) = (Dense::zeros(nn), Dense::zeros(nn), Dense::zeros(nn));
    for r in 0..nn {
        let (ri, rj) = (r % n, r / n);
        for c in 0..nn {
            let (ci, cj) = (c % n, c / n);
            let di = ri.abs_diff(ci) as isize;
            let dj = rj.abs_diff(cj) as isize;
            lap.a[r * nn + c] = s * c2.get(di, dj);
            if dj == 0 {
                ax.a[r * nn + c] = s * c1.get(di);
            }
            if di == 0 {
                ay.a[r * nn + c] = s * c1.get(dj);
            }
        }
    }
    DenseGridOps { lap, ax, ay }
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn rand_vec(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect()
}

pub fn rel_diff(a: &[f64], b: &[f64]) -> f64 {
    let num: f64 = a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum();
    let den: f64 = b.iter().map(|y| y * y).sum();
    (num / den).sqrt()
}

/// Random SPD symmetric Toeplitz first column. Even seeds give a diagonally
/// dominant column; odd seeds a damped cosine `ρ^k cos(ωk)` scaled up on the
/// diagonal, which is not diagonally dominant but has a positive symbol.
pub fn random_spd_toeplitz(rng: &mut ChaCha8Rng, n: usize, kind: u64) -> Vec<f64> {
    if kind % 2 == 0 {
        let mut col: Vec<f64> = (0..n).map(|k| rng.gen_range(-1.0..1.0) / (1.0 + k as f64)).collect();
        col[0] = 0.1 + col[1..].iter().map(|x| x.abs()).sum::<f64>() * 2.0;
        col
    } else {
        let rho: f64 = rng.gen_range(0.5..0.95);
        let omega: f64 = rng.gen_range(0.0..3.0);
        let mut col: Vec<f64> = (0..n).map(|k| rho.powi(k as i32) * (omega * k as f64).cos()).collect();
        col[0] += rng.gen_range(0.05..1.0);
        col
    }
}
