use std::sync::Arc;

use num_complex::Complex;

use super::Nonlinearity;
use crate::linear::dispersive_factor;
use crate::spectral::{Dealiaser, FieldState, SpectralGrid};
use crate::{Error, Real, Result};

/// Integrating-factor RK4 stepper with preallocated work buffers.
///
/// With `L = iξ⁵` and `E = e^{Lh/2}`, one step of `û_t = Lû + N(û)` is
///
/// ```text
/// k1 = N(û)
/// k2 = N(E(û + h/2·k1))
/// k3 = N(Eû + h/2·k2)
/// k4 = N(E²û + h·E·k3)
/// û ← E²û + h/6·(E²k1 + 2E(k2 + k3) + k4)
/// ```
///
/// which is classical RK4 applied to `v̂ = e^{−tL}û`. The nonlinearity is
/// taken in conservative form `N(û) = (α/5)·iξ·P(u⁵)`, with `P` the
/// dealiased projection.
pub struct Stepper<T: Real> {
    grid: Arc<SpectralGrid<T>>,
    dealias: Dealiaser<T>,
    nonlinearity: Nonlinearity,
    coef: Vec<Complex<T>>,
    half: Vec<Complex<T>>,
    full: Vec<Complex<T>>,
    cached_h: Option<T>,
    k: [Vec<Complex<T>>; 4],
    tmp: Vec<Complex<T>>,
    start_fine: Vec<T>,
}

impl<T: Real> Stepper<T> {
    pub fn new(grid: &Arc<SpectralGrid<T>>, nonlinearity: Nonlinearity) -> Self {
        let n = grid.len();
        let zero = Complex::new(T::zero(), T::zero());
        let a = T::lit(nonlinearity.alpha()) / T::lit(5.0);
        let ny = grid.nyquist_index();
        let coef = grid
            .frequencies()
            .iter()
            .enumerate()
            .map(|(i, &xi)| if i == ny { zero } else { Complex::new(T::zero(), a * xi) })
            .collect();
        Self {
            grid: grid.clone(),
            dealias: Dealiaser::new(grid),
            nonlinearity,
            coef,
            half: vec![zero; n],
            full: vec![zero; n],
            cached_h: None,
            k: [vec![zero; n], vec![zero; n], vec![zero; n], vec![zero; n]],
            tmp: vec![zero; n],
            start_fine: Vec::new(),
        }
    }

    pub fn grid(&self) -> &Arc<SpectralGrid<T>> {
        &self.grid
    }

    pub fn nonlinearity(&self) -> Nonlinearity {
        self.nonlinearity
    }

    /// Padded-grid samples of `u` at the start of the last step. Empty when
    /// the nonlinearity is off.
    pub fn start_samples(&self) -> &[T] {
        &self.start_fine
    }

    /// Exact `∫u⁶` of the resolved field.
    pub fn sixth_moment(&mut self, uhat: &[Complex<T>]) -> T {
        self.dealias.sixth_moment(uhat)
    }

    fn factors(&mut self, h: T) {
        if self.cached_h == Some(h) {
            return;
        }
        let half_h = h / T::lit(2.0);
        for ((e1, e2), &xi) in self.half.iter_mut().zip(self.full.iter_mut()).zip(self.grid.frequencies()) {
            *e1 = dispersive_factor(half_h, xi);
            *e2 = dispersive_factor(h, xi);
        }
        let ny = self.grid.nyquist_index();
        self.half[ny] = Complex::new(T::zero(), T::zero());
        self.full[ny] = Complex::new(T::zero(), T::zero());
        self.cached_h = Some(h);
    }

    fn rhs(dealias: &mut Dealiaser<T>, coef: &[Complex<T>], uhat: &[Complex<T>], out: &mut [Complex<T>]) {
        dealias.fifth_power(uhat, out);
        for (o, &c) in out.iter_mut().zip(coef) {
            *o = *o * c;
        }
    }

    /// Advances coefficients in place by `h` (which may be negative).
    pub fn advance(&mut self, uhat: &mut [Complex<T>], h: T) -> Result<()> {
        self.factors(h);
        let n = uhat.len();
        if self.nonlinearity == Nonlinearity::Off {
            for (u, &e) in uhat.iter_mut().zip(&self.full) {
                *u = *u * e;
            }
            self.start_fine.clear();
            return Ok(());
        }
        let h2 = h / T::lit(2.0);
        let [k1, k2, k3, k4] = &mut self.k;
        let tmp = &mut self.tmp;
        Self::rhs(&mut self.dealias, &self.coef, uhat, k1);
        self.start_fine.clear();
        self.start_fine.extend_from_slice(self.dealias.fine_values());
        for i in 0..n {
            tmp[i] = self.half[i] * (uhat[i] + k1[i] * h2);
        }
        Self::rhs(&mut self.dealias, &self.coef, tmp, k2);
        for i in 0..n {
            tmp[i] = self.half[i] * uhat[i] + k2[i] * h2;
        }
        Self::rhs(&mut self.dealias, &self.coef, tmp, k3);
        for i in 0..n {
            tmp[i] = self.full[i] * uhat[i] + self.half[i] * k3[i] * h;
        }
        Self::rhs(&mut self.dealias, &self.coef, tmp, k4);
        let h6 = h / T::lit(6.0);
        let two = T::lit(2.0);
        let mut finite = true;
        for i in 0..n {
            let e2 = self.full[i];
            let v = e2 * uhat[i] + (e2 * k1[i] + self.half[i] * (k2[i] + k3[i]) * two + k4[i]) * h6;
            finite &= v.re.is_finite() && v.im.is_finite();
            uhat[i] = v;
        }
        if !finite {
            return Err(Error::NumericalAbort { t: f64::NAN, reason: "non-finite coefficient after step".into() });
        }
        Ok(())
    }

    /// One step of a field; the clock moves by `h`.
    pub fn step(&mut self, state: &FieldState<T>, h: T) -> Result<FieldState<T>> {
        if **state.grid() != *self.grid {
            return Err(Error::GridMismatch);
        }
        let mut uhat = state.spectral_view().into_owned();
        self.advance(&mut uhat, h).map_err(|e| match e {
            Error::NumericalAbort { reason, .. } => Error::NumericalAbort { t: state.time().as_f64(), reason },
            other => other,
        })?;
        FieldState::from_spectral(&self.grid, state.time() + h, uhat)
    }
}

/// One integrating-factor RK4 step with a fresh stepper. Use [`Stepper`]
/// directly for repeated steps.
pub fn step<T: Real>(state: &FieldState<T>, dt: T, nonlinearity: Nonlinearity) -> Result<FieldState<T>> {
    Stepper::new(state.grid(), nonlinearity).step(state, dt)
}
