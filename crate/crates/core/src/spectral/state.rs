use std::borrow::Cow;
use std::sync::Arc;

use num_complex::Complex;

use super::SpectralGrid;
use crate::{Error, Real, Result};

/// A real field at one instant, held as physical samples and spectral
/// coefficients. Either representation may be stale; the flags record which
/// ones are current and accessors refresh lazily.
#[derive(Clone, Debug)]
pub struct FieldState<T: Real> {
    grid: Arc<SpectralGrid<T>>,
    t: T,
    u: Vec<T>,
    uhat: Vec<Complex<T>>,
    physical_current: bool,
    spectral_current: bool,
}

impl<T: Real> FieldState<T> {
    pub fn from_physical(grid: &Arc<SpectralGrid<T>>, t: T, u: Vec<T>) -> Result<Self> {
        if u.len() != grid.len() {
            return Err(Error::GridMismatch);
        }
        Ok(Self {
            grid: grid.clone(),
            t,
            u,
            uhat: Vec::new(),
            physical_current: true,
            spectral_current: false,
        })
    }

    pub fn from_spectral(grid: &Arc<SpectralGrid<T>>, t: T, uhat: Vec<Complex<T>>) -> Result<Self> {
        if uhat.len() != grid.len() {
            return Err(Error::GridMismatch);
        }
        Ok(Self {
            grid: grid.clone(),
            t,
            u: Vec::new(),
            uhat,
            physical_current: false,
            spectral_current: true,
        })
    }

    /// Samples `f` at the grid nodes.
    pub fn from_fn(grid: &Arc<SpectralGrid<T>>, t: T, f: impl Fn(T) -> T) -> Self {
        let u = grid.nodes().iter().map(|&x| f(x)).collect();
        Self::from_physical(grid, t, u).expect("length matches by construction")
    }

    /// Field whose coefficients are `g(ξ_k)`; the Nyquist entry is zeroed.
    pub fn from_spectrum(grid: &Arc<SpectralGrid<T>>, t: T, g: impl Fn(T) -> Complex<T>) -> Self {
        let ny = grid.nyquist_index();
        let uhat = grid
            .frequencies()
            .iter()
            .enumerate()
            .map(|(i, &xi)| if i == ny { Complex::new(T::zero(), T::zero()) } else { g(xi) })
            .collect();
        Self::from_spectral(grid, t, uhat).expect("length matches by construction")
    }

    pub fn zeros(grid: &Arc<SpectralGrid<T>>, t: T) -> Self {
        Self::from_physical(grid, t, vec![T::zero(); grid.len()]).expect("length matches")
    }

    pub fn grid(&self) -> &Arc<SpectralGrid<T>> {
        &self.grid
    }

    pub fn time(&self) -> T {
        self.t
    }

    pub fn set_time(&mut self, t: T) {
        self.t = t;
    }

    pub fn is_physical_current(&self) -> bool {
        self.physical_current
    }

    pub fn is_spectral_current(&self) -> bool {
        self.spectral_current
    }

    /// Physical samples, refreshing them from the spectrum if stale.
    pub fn physical(&mut self) -> &[T] {
        if !self.physical_current {
            self.u = self.grid.inverse(&self.uhat);
            self.physical_current = true;
        }
        &self.u
    }

    /// Spectral coefficients, refreshing them from the samples if stale.
    pub fn spectral(&mut self) -> &[Complex<T>] {
        if !self.spectral_current {
            self.uhat = self.grid.forward(&self.u);
            self.spectral_current = true;
        }
        &self.uhat
    }

    /// Read-only access that computes a stale representation on the fly.
    pub fn physical_view(&self) -> Cow<'_, [T]> {
        if self.physical_current {
            Cow::Borrowed(&self.u)
        } else {
            Cow::Owned(self.grid.inverse(&self.uhat))
        }
    }

    pub fn spectral_view(&self) -> Cow<'_, [Complex<T>]> {
        if self.spectral_current {
            Cow::Borrowed(&self.uhat)
        } else {
            Cow::Owned(self.grid.forward(&self.u))
        }
    }

    /// Makes both representations current.
    pub fn synced(mut self) -> Self {
        self.physical();
        self.spectral();
        self
    }

    /// Mutable samples; marks the spectrum stale.
    pub fn physical_mut(&mut self) -> &mut Vec<T> {
        self.physical();
        self.spectral_current = false;
        &mut self.u
    }

    /// Mutable coefficients; marks the samples stale.
    pub fn spectral_mut(&mut self) -> &mut Vec<Complex<T>> {
        self.spectral();
        self.physical_current = false;
        &mut self.uhat
    }

    /// `û_k ← m(ξ_k) û_k` with the Nyquist mode zeroed. `m` is the symbol as a
    /// function of ξ, e.g. `iξ` for `∂x`.
    pub fn apply_multiplier(&self, m: impl Fn(T) -> Complex<T>) -> Self {
        let uhat = self.spectral_view();
        let ny = self.grid.nyquist_index();
        let out = uhat
            .iter()
            .zip(self.grid.frequencies())
            .enumerate()
            .map(|(i, (&c, &xi))| if i == ny { Complex::new(T::zero(), T::zero()) } else { m(xi) * c })
            .collect();
        Self::from_spectral(&self.grid, self.t, out).expect("same grid")
    }

    /// As [`apply_multiplier`](Self::apply_multiplier), but fails if the symbol
    /// would turn a real field complex (`m(-ξ) ≠ conj m(ξ)`).
    pub fn apply_real_multiplier(&self, m: impl Fn(T) -> Complex<T>) -> Result<Self> {
        let mut worst = 0.0f64;
        let mut scale = 0.0f64;
        let ny = self.grid.nyquist_index();
        for (i, &xi) in self.grid.frequencies().iter().enumerate() {
            if i == ny {
                continue;
            }
            let a = m(xi);
            let b = m(-xi).conj();
            worst = worst.max((a - b).norm().as_f64());
            scale = scale.max(a.norm().as_f64());
        }
        if worst > 1e-12 * scale.max(1.0) {
            return Err(Error::HermitianLoss(worst));
        }
        Ok(self.apply_multiplier(m))
    }

    /// `∂x^order` as a spectral multiplier.
    pub fn derivative(&self, order: u32) -> Self {
        self.apply_multiplier(|xi| Complex::new(T::zero(), xi).powu(order))
    }

    /// Pointwise sum `self + a·other`.
    pub fn axpy(&self, a: T, other: &Self) -> Result<Self> {
        if self.grid != other.grid {
            return Err(Error::GridMismatch);
        }
        let x = self.spectral_view();
        let y = other.spectral_view();
        let out = x.iter().zip(y.iter()).map(|(&p, &q)| p + q * a).collect();
        Self::from_spectral(&self.grid, self.t, out)
    }

    /// `∫u² dx` from the samples.
    pub fn mass_physical(&self) -> T {
        let u = self.physical_view();
        u.iter().fold(T::zero(), |s, &x| s + x * x) * self.grid.dx()
    }

    /// `Σ|û_k|² Δξ`, equal to the physical mass by Parseval.
    pub fn mass_spectral(&self) -> T {
        let uh = self.spectral_view();
        uh.iter().fold(T::zero(), |s, c| s + c.norm_sqr()) * self.grid.dxi()
    }

    pub fn l2_norm(&self) -> T {
        self.mass_spectral().sqrt()
    }

    pub fn sup_norm(&self) -> T {
        self.physical_view().iter().fold(T::zero(), |m, &x| m.max(x.abs()))
    }

    /// `‖⟨ξ⟩² û‖`, the H² norm.
    pub fn h2_norm(&self) -> T {
        let uh = self.spectral_view();
        let s = uh.iter().zip(self.grid.frequencies()).fold(T::zero(), |s, (c, &xi)| {
            let w = T::one() + xi * xi;
            s + w * w * c.norm_sqr()
        });
        (s * self.grid.dxi()).sqrt()
    }

    /// Largest `|û(ξ) − conj û(−ξ)|` relative to `max|û|`.
    pub fn hermitian_defect(&self) -> T {
        let uh = self.spectral_view();
        let ny = self.grid.nyquist_index();
        let mut worst = T::zero();
        let mut big = T::zero();
        for i in 0..uh.len() {
            big = big.max(uh[i].norm());
            if i == ny {
                continue;
            }
            let j = self.grid.partner(i);
            worst = worst.max((uh[i] - uh[j].conj()).norm());
        }
        if big > T::zero() {
            worst / big
        } else {
            T::zero()
        }
    }

    /// Values of the trigonometric interpolant at arbitrary points.
    pub fn evaluate_at(&self, points: &[T]) -> Vec<T> {
        self.grid.interpolate(&self.spectral_view(), points)
    }
}
