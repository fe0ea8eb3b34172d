use crate::grid::Field;
use crate::scalar::Real;

/// Two consecutive time levels `(u^{n−1}, u^n)` at `t_n = n·τ`.
///
/// At `n = 0` both fields hold `u⁰`.
#[derive(Debug, Clone, PartialEq)]
pub struct SchemeState<T> {
    pub u_prev: Field<T>,
    pub u_curr: Field<T>,
    pub n: usize,
    pub t: T,
}

impl<T: Real> SchemeState<T> {
    pub fn initial(u0: Field<T>) -> Self {
        Self {
            u_prev: u0.clone(),
            u_curr: u0,
            n: 0,
            t: T::zero(),
        }
    }

    /// Pushes `u^{n+1}` and advances the clock.
    pub fn advance(self, u_next: Field<T>, tau_step: T) -> Self {
        let n = self.n + 1;
        Self {
            u_prev: self.u_curr,
            u_curr: u_next,
            n,
            t: T::lit(n as f64) * tau_step,
        }
    }
}
