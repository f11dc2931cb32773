use std::sync::Arc;

use num_complex::Complex;

use super::{FieldState, SpectralGrid};
use crate::{Error, Real, Result};

/// Reusable buffers for products evaluated on the zero-padded grid.
///
/// With padding factor `p ≥ 3` the Galerkin projection of a product of up to
/// five resolved fields is computed without aliasing, and so is the mean of a
/// sixth power (used by the Hamiltonian).
pub struct Dealiaser<T: Real> {
    grid: Arc<SpectralGrid<T>>,
    buf: Vec<Complex<T>>,
    scratch: Vec<Complex<T>>,
    fine: Vec<T>,
}

impl<T: Real> Dealiaser<T> {
    pub fn new(grid: &Arc<SpectralGrid<T>>) -> Self {
        let m = grid.padded_len();
        Self {
            grid: grid.clone(),
            buf: vec![Complex::new(T::zero(), T::zero()); m],
            scratch: vec![Complex::new(T::zero(), T::zero()); grid.pad_scratch_len()],
            fine: vec![T::zero(); m],
        }
    }

    pub fn grid(&self) -> &Arc<SpectralGrid<T>> {
        &self.grid
    }

    /// Samples of the field with coefficients `uhat` on the padded grid
    /// `x'_j = −L + 2Lj/(pN)`; every `p`-th sample is a coarse node.
    pub fn upsample(&mut self, uhat: &[Complex<T>]) -> &[T] {
        self.spread(uhat);
        for (f, c) in self.fine.iter_mut().zip(&self.buf) {
            *f = c.re;
        }
        &self.fine
    }

    /// Samples left by the last [`upsample`](Self::upsample) or power call.
    pub fn fine_values(&self) -> &[T] {
        &self.fine
    }

    /// Projects padded-grid samples back onto the resolved modes.
    pub fn project(&mut self, values: &[T], out: &mut [Complex<T>]) {
        for (b, &v) in self.buf.iter_mut().zip(values) {
            *b = Complex::new(v, T::zero());
        }
        self.gather(out);
    }

    /// Coefficients of the projection of `u⁵`. The padded samples of `u` stay
    /// available through [`fine_values`](Self::fine_values).
    pub fn fifth_power(&mut self, uhat: &[Complex<T>], out: &mut [Complex<T>]) {
        self.spread(uhat);
        for (f, b) in self.fine.iter_mut().zip(self.buf.iter_mut()) {
            let u = b.re;
            *f = u;
            let u2 = u * u;
            *b = Complex::new(u2 * u2 * u, T::zero());
        }
        self.gather(out);
    }

    /// Exact `∫ u^6 dx` of the resolved field (the padded trapezoid sum).
    pub fn sixth_moment(&mut self, uhat: &[Complex<T>]) -> T {
        let fine = self.upsample(uhat);
        let s = fine.iter().fold(T::zero(), |s, &u| {
            let u3 = u * u * u;
            s + u3 * u3
        });
        s * self.grid.dx() / T::from_usize_lossy(self.grid.dealias_factor())
    }

    fn spread(&mut self, uhat: &[Complex<T>]) {
        let n = self.grid.len();
        let m = self.buf.len();
        let zero = Complex::new(T::zero(), T::zero());
        self.buf.iter_mut().for_each(|b| *b = zero);
        let ny = self.grid.nyquist_index();
        for (i, &c) in uhat.iter().enumerate().take(n) {
            if i == ny {
                continue;
            }
            let k = self.grid.wavenumber(i);
            let idx = k.rem_euclid(m as i64) as usize;
            self.buf[idx] = self.grid.to_raw(i, c);
        }
        self.grid.pad_inverse(&mut self.buf, &mut self.scratch);
    }

    fn gather(&mut self, out: &mut [Complex<T>]) {
        self.grid.pad_forward(&mut self.buf, &mut self.scratch);
        let m = self.buf.len();
        let inv_m = T::one() / T::from_usize_lossy(m);
        let ny = self.grid.nyquist_index();
        for (i, o) in out.iter_mut().enumerate() {
            if i == ny {
                *o = Complex::new(T::zero(), T::zero());
                continue;
            }
            let k = self.grid.wavenumber(i);
            let idx = k.rem_euclid(m as i64) as usize;
            *o = self.grid.from_raw(i, self.buf[idx] * inv_m);
        }
    }
}

/// Dealiased pointwise product of five fields on a common grid and time.
pub fn quintic_product<T: Real>(states: [&FieldState<T>; 5]) -> Result<FieldState<T>> {
    let grid = states[0].grid().clone();
    let t = states[0].time();
    for s in &states[1..] {
        if **s.grid() != *grid {
            return Err(Error::GridMismatch);
        }
        if s.time() != t {
            return Err(Error::InvalidInput("factors are at different times".into()));
        }
    }
    let mut d = Dealiaser::new(&grid);
    let mut acc: Vec<T> = vec![T::one(); grid.padded_len()];
    for s in states {
        let fine = d.upsample(&s.spectral_view());
        for (a, &f) in acc.iter_mut().zip(fine) {
            *a = *a * f;
        }
    }
    let mut out = vec![Complex::new(T::zero(), T::zero()); grid.len()];
    d.project(&acc, &mut out);
    FieldState::from_spectral(&grid, t, out)
}
