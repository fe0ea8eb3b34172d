//! Preconditioned conjugate gradients for SPD operators.

use crate::error::{Error, Result};
use crate::scalar::Real;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PcgReport {
    pub iterations: usize,
    /// `‖b − A x‖₂ / ‖b‖₂` from the recursively updated residual.
    pub final_relative_residual: f64,
    pub converged: bool,
}

impl PcgReport {
    /// Turns a non-converged report into [`Error::NotConverged`].
    pub fn ensure_converged(self) -> Result<Self> {
        if self.converged {
            Ok(self)
        } else {
            Err(Error::NotConverged {
                iterations: self.iterations,
                residual: self.final_relative_residual,
            })
        }
    }
}

fn dot<T: Real>(a: &[T], b: &[T]) -> T {
    a.iter().zip(b).fold(T::zero(), |s, (&x, &y)| s + x * y)
}

/// Solves `A x = b` for SPD `A`, stopping once `‖r‖₂ ≤ tol·‖b‖₂` or after
/// `max_iter` iterations. Non-convergence is reported, not raised.
///
/// `apply_a(v, out)` writes `A v`; `apply_m_inv(r, out)` writes `M⁻¹ r`.
/// `x0` is the initial guess (zero when `None`).
pub fn pcg<T, A, M>(
    mut apply_a: A,
    mut apply_m_inv: M,
    b: &[T],
    x0: Option<&[T]>,
    tol: f64,
    max_iter: usize,
) -> Result<(Vec<T>, PcgReport)>
where
    T: Real,
    A: FnMut(&[T], &mut [T]) -> Result<()>,
    M: FnMut(&[T], &mut [T]) -> Result<()>,
{
    if !(tol > 0.0) {
        return Err(Error::invalid(format!("PCG tolerance {tol} must be positive")));
    }
    let n = b.len();
    let b_norm = dot(b, b).sqrt();
    if b_norm.is_zero() {
        return Ok((
            vec![T::zero(); n],
            PcgReport {
                iterations: 0,
                final_relative_residual: 0.0,
                converged: true,
            },
        ));
    }

    let mut x = match x0 {
        Some(x0) if x0.len() != n => return Err(Error::shape(n, x0.len())),
        Some(x0) => x0.to_vec(),
        None => vec![T::zero(); n],
    };
    let mut r = b.to_vec();
    let mut ap = vec![T::zero(); n];
    if x0.is_some() {
        apply_a(&x, &mut ap)?;
        for (ri, &a) in r.iter_mut().zip(&ap) {
            *ri = *ri - a;
        }
    }

    let tol_t = T::lit(tol);
    let mut rel = dot(&r, &r).sqrt() / b_norm;
    let mut iterations = 0;
    if rel <= tol_t {
        return Ok((
            x,
            PcgReport {
                iterations,
                final_relative_residual: rel.as_f64(),
                converged: true,
            },
        ));
    }

    let mut z = vec![T::zero(); n];
    apply_m_inv(&r, &mut z)?;
    let mut p = z.clone();
    let mut rz = dot(&r, &z);

    while iterations < max_iter {
        apply_a(&p, &mut ap)?;
        let pap = dot(&p, &ap);
        if !(pap > T::zero()) {
            // Breakdown: the operator is not positive definite on p.
            break;
        }
        let step = rz / pap;
        for i in 0..n {
            x[i] = x[i] + step * p[i];
            r[i] = r[i] - step * ap[i];
        }
        iterations += 1;
        rel = dot(&r, &r).sqrt() / b_norm;
        if rel <= tol_t {
            break;
        }
        apply_m_inv(&r, &mut z)?;
        let rz_next = dot(&r, &z);
        let beta = rz_next / rz;
        rz = rz_next;
        for i in 0..n {
            p[i] = z[i] + beta * p[i];
        }
    }

    Ok((
        x,
        PcgReport {
            iterations,
            final_relative_residual: rel.as_f64(),
            converged: rel <= tol_t,
        },
    ))
}
