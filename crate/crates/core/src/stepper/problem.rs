//! Problem data: domain, coefficient, order, nonlinearity, initial values.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::fraccoef::FracOrder;
use crate::grid::{Field, Grid2D};
use crate::scalar::Real;

/// Piecewise-linear `g` through `(x_k, g_k)`, extended linearly past the ends.
#[derive(Debug, Clone, PartialEq)]
pub struct Tabulated<T> {
    xs: Vec<T>,
    ys: Vec<T>,
}

impl<T: Real> Tabulated<T> {
    pub fn new(xs: Vec<T>, ys: Vec<T>) -> Result<Self> {
        if xs.len() != ys.len() {
            return Err(Error::shape(xs.len(), ys.len()));
        }
        if xs.len() < 2 {
            return Err(Error::invalid("a nonlinearity table needs at least two knots"));
        }
        if xs.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::invalid("table abscissae must be strictly increasing"));
        }
        Ok(Self { xs, ys })
    }

    /// Parses `x,g` lines; blank lines, `#` comments and a non-numeric header
    /// line are skipped.
    pub fn parse_csv(text: &str) -> Result<Self> {
        let mut xs = Vec::new();
        let mut ys = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let mut parts = line.split(',').map(str::trim);
            let (Some(x), Some(y), None) = (parts.next(), parts.next(), parts.next()) else {
                return Err(Error::Parse(format!("line {}: expected `x,g`", lineno + 1)));
            };
            match (x.parse::<f64>(), y.parse::<f64>()) {
                (Ok(x), Ok(y)) => {
                    xs.push(T::lit(x));
                    ys.push(T::lit(y));
                }
                _ if xs.is_empty() => continue,
                _ => {
                    return Err(Error::Parse(format!("line {}: `{line}` is not numeric", lineno + 1)))
                }
            }
        }
        Self::new(xs, ys)
    }

    pub fn eval(&self, u: T) -> T {
        let n = self.xs.len();
        let k = match self.xs.partition_point(|&x| x <= u) {
            0 => 0,
            k if k >= n => n - 2,
            k => k - 1,
        };
        let (x0, x1) = (self.xs[k], self.xs[k + 1]);
        let (y0, y1) = (self.ys[k], self.ys[k + 1]);
        y0 + (y1 - y0) * (u - x0) / (x1 - x0)
    }
}

/// Right-hand-side nonlinearity `g(u)`.
#[derive(Debug, Clone, PartialEq)]
pub enum Nonlinearity<T> {
    Zero,
    /// `g(u) = −sin u`.
    SineGordon,
    /// `g(u) = −u³`.
    KleinGordon,
    Table(Tabulated<T>),
}

impl<T: Real> Nonlinearity<T> {
    /// Looks up a built-in by name (`zero`, `sine_gordon`, `klein_gordon`;
    /// dashes accepted in place of underscores).
    pub fn from_id(id: &str) -> Result<Self> {
        match id.trim().replace('-', "_").as_str() {
            "zero" | "none" => Ok(Self::Zero),
            "sine_gordon" => Ok(Self::SineGordon),
            "klein_gordon" => Ok(Self::KleinGordon),
            _ => Err(Error::UnknownNonlinearity(id.to_string())),
        }
    }

    pub fn id(&self) -> &'static str {
        match self {
            Self::Zero => "zero",
            Self::SineGordon => "sine_gordon",
            Self::KleinGordon => "klein_gordon",
            Self::Table(_) => "table",
        }
    }

    #[inline]
    pub fn eval(&self, u: T) -> T {
        match self {
            Self::Zero => T::zero(),
            Self::SineGordon => -u.sin(),
            Self::KleinGordon => -u * u * u,
            Self::Table(t) => t.eval(u),
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, Self::Zero)
    }
}

/// Pointwise `g(u)`.
pub fn evaluate_nonlinearity<T: Real>(g: &Nonlinearity<T>, u: &Field<T>) -> Field<T> {
    u.map(|v| g.eval(v))
}

type InitialFn<T> = Arc<dyn Fn(T, T) -> T + Send + Sync>;

/// Initial value `φ(x, y)`, sampled only at interior nodes.
#[derive(Clone)]
pub enum InitialData<T> {
    Zero,
    /// `sech(√(x² + y²))`.
    SechRadial,
    /// `amplitude · sech(cosh(x² + y²))`.
    SechCoshRadial { amplitude: T },
    /// `amplitude · exp(−(x² + y²)/width²)`.
    Gaussian { amplitude: T, width: T },
    Custom(InitialFn<T>),
}

impl<T: fmt::Debug> fmt::Debug for InitialData<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Zero => write!(f, "Zero"),
            Self::SechRadial => write!(f, "SechRadial"),
            Self::SechCoshRadial { amplitude } => write!(f, "SechCoshRadial({amplitude:?})"),
            Self::Gaussian { amplitude, width } => write!(f, "Gaussian({amplitude:?}, {width:?})"),
            Self::Custom(_) => write!(f, "Custom"),
        }
    }
}

impl<T: Real> InitialData<T> {
    /// Parses `zero`, `sech-r`, `sech-cosh-r2[:amplitude]`,
    /// `gaussian[:amplitude[:width]]`.
    pub fn from_id(id: &str) -> Result<Self> {
        let mut parts = id.trim().split(':');
        let name = parts.next().unwrap_or_default();
        let mut num = |default: f64| -> Result<T> {
            match parts.next() {
                None => Ok(T::lit(default)),
                Some(s) => s
                    .parse::<f64>()
                    .map(T::lit)
                    .map_err(|_| Error::Parse(format!("bad parameter `{s}` in `{id}`"))),
            }
        };
        match name {
            "zero" => Ok(Self::Zero),
            "sech-r" => Ok(Self::SechRadial),
            "sech-cosh-r2" => Ok(Self::SechCoshRadial { amplitude: num(1.0)? }),
            "gaussian" => {
                let amplitude = num(1.0)?;
                let width = num(1.0)?;
                Ok(Self::Gaussian { amplitude, width })
            }
            _ => Err(Error::Parse(format!("unknown initial data `{id}`"))),
        }
    }

    pub fn eval(&self, x: T, y: T) -> T {
        let r2 = x * x + y * y;
        match self {
            Self::Zero => T::zero(),
            Self::SechRadial => T::one() / r2.sqrt().cosh(),
            // cosh(cosh(r²)) overflows to +inf far out; 1/inf = 0 is the right limit.
            Self::SechCoshRadial { amplitude } => *amplitude / r2.cosh().cosh(),
            Self::Gaussian { amplitude, width } => *amplitude * (-r2 / (*width * *width)).exp(),
            Self::Custom(f) => f(x, y),
        }
    }

    pub fn sample(&self, grid: &Grid2D<T>) -> Field<T> {
        Field::from_fn(grid, |x, y| self.eval(x, y))
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, Self::Zero)
    }
}

/// `u_tt = −κ(−Δ)^{α/2} u + g(u)` on `(a, b)²` with zero exterior values,
/// `u(·,0) = φ₁`, `u_t(·,0) = φ₂`.
#[derive(Debug, Clone)]
pub struct Problem<T> {
    pub a: T,
    pub b: T,
    /// Diffusion coefficient. Zero is accepted as a degenerate mode without
    /// spatial coupling.
    pub kappa: T,
    pub alpha: FracOrder,
    pub nonlinearity: Nonlinearity<T>,
    pub phi1: InitialData<T>,
    pub phi2: InitialData<T>,
}

impl<T: Real> Problem<T> {
    pub fn validate(&self) -> Result<()> {
        if !(self.b > self.a) {
            return Err(Error::invalid(format!(
                "domain ({}, {}) is empty",
                self.a, self.b
            )));
        }
        if !(self.kappa >= T::zero()) || !self.kappa.is_finite() {
            return Err(Error::invalid(format!("kappa = {} must be ≥ 0", self.kappa)));
        }
        Ok(())
    }
}

/// The two reference problems on `(−10, 10)²` with `κ = 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Example {
    /// `g(u) = −sin u`, `φ₁ = 0`, `φ₂ = sech(r)`; reference time 5.
    SineGordon,
    /// `g(u) = −u³`, `φ₁ = 2 sech(cosh(r²))`, `φ₂ = 0`; reference time 8.
    KleinGordon,
}

impl Example {
    pub fn from_id(id: &str) -> Result<Self> {
        match id.trim().replace('_', "-").as_str() {
            "sine-gordon" | "1" => Ok(Self::SineGordon),
            "klein-gordon" | "2" => Ok(Self::KleinGordon),
            _ => Err(Error::Parse(format!("unknown example `{id}`"))),
        }
    }

    pub fn id(self) -> &'static str {
        match self {
            Self::SineGordon => "sine-gordon",
            Self::KleinGordon => "klein-gordon",
        }
    }

    pub fn t_final(self) -> f64 {
        match self {
            Self::SineGordon => 5.0,
            Self::KleinGordon => 8.0,
        }
    }

    pub fn problem<T: Real>(self, alpha: FracOrder) -> Problem<T> {
        let (nonlinearity, phi1, phi2) = match self {
            Self::SineGordon => (
                Nonlinearity::SineGordon,
                InitialData::Zero,
                InitialData::SechRadial,
            ),
            Self::KleinGordon => (
                Nonlinearity::KleinGordon,
                InitialData::SechCoshRadial {
                    amplitude: T::lit(2.0),
                },
                InitialData::Zero,
            ),
        };
        Problem {
            a: T::lit(-10.0),
            b: T::lit(10.0),
            kappa: T::one(),
            alpha,
            nonlinearity,
            phi1,
            phi2,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtin_nonlinearities() {
        assert_eq!(Nonlinearity::<f64>::SineGordon.eval(0.0), 0.0);
        assert_eq!(Nonlinearity::<f64>::KleinGordon.eval(2.0), -8.0);
        let g = Nonlinearity::<f64>::Zero;
        let u = Field::from_vec(2, vec![1.0, 2.0, 3.0, 4.0]).unwrap();
        assert!(evaluate_nonlinearity(&g, &u).is_zero());
        assert!(matches!(
            Nonlinearity::<f64>::from_id("cubic"),
            Err(Error::UnknownNonlinearity(_))
        ));
        assert_eq!(Nonlinearity::<f64>::from_id("sine-gordon").unwrap(), Nonlinearity::SineGordon);
    }

    #[test]
    fn table_interpolates_and_extrapolates() {
        let t = Tabulated::<f64>::parse_csv("u,g\n-1,1\n0,0\n2,-4\n").unwrap();
        assert_eq!(t.eval(0.0), 0.0);
        assert_eq!(t.eval(1.0), -2.0);
        assert_eq!(t.eval(-2.0), 2.0);
        assert_eq!(t.eval(3.0), -6.0);
        assert!(Tabulated::<f64>::new(vec![0.0, 0.0], vec![1.0, 2.0]).is_err());
        assert!(Tabulated::<f64>::parse_csv("0,0\nx,1\n").is_err());
    }

    #[test]
    fn initial_data_far_field_is_zero() {
        let kg = InitialData::<f64>::SechCoshRadial { amplitude: 2.0 };
        assert_eq!(kg.eval(9.9, 9.9), 0.0);
        assert!((kg.eval(0.0, 0.0) - 2.0 / 1f64.cosh()).abs() < 1e-15);
        assert!((InitialData::<f64>::SechRadial.eval(3.0, 4.0) - 1.0 / 5f64.cosh()).abs() < 1e-15);
        assert!(matches!(
            InitialData::<f64>::from_id("gaussian:2:0.5").unwrap(),
            InitialData::Gaussian { amplitude, width } if amplitude == 2.0 && width == 0.5
        ));
        assert!(InitialData::<f64>::from_id("bump").is_err());
    }

    #[test]
    fn validation() {
        let mut p = Example::SineGordon.problem::<f64>(FracOrder::new(1.5).unwrap());
        assert!(p.validate().is_ok());
        p.kappa = -1.0;
        assert!(p.validate().is_err());
        p.kappa = 1.0;
        p.b = p.a;
        assert!(p.validate().is_err());
    }
}
