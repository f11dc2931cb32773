use std::fmt;
use std::sync::Arc;

use num_complex::Complex;
use rustfft::{Fft, FftPlanner};

use crate::{Error, Real, Result};

/// Periodic truncation of the line to `[-L, L)` with `N` equispaced nodes.
///
/// Spectral arrays are stored in FFT order: index `i < N/2` carries wavenumber
/// `k = i`, index `i >= N/2` carries `k = i - N`. The entry at `N/2` is the
/// Nyquist mode `k = -N/2`, which has no symmetric partner.
///
/// Coefficients follow the continuum convention
/// `û(ξ) = (2π)^{-1/2} ∫ u(x) e^{-ixξ} dx`, discretised by the trapezoid rule.
#[derive(Clone)]
pub struct SpectralGrid<T: Real> {
    half_length: T,
    n: usize,
    dealias: usize,
    nodes: Vec<T>,
    freqs: Vec<T>,
    /// Δx/√(2π): maps raw DFT sums to continuum coefficients (up to (−1)^k).
    scale: T,
    fwd: Arc<dyn Fft<T>>,
    inv: Arc<dyn Fft<T>>,
    pad_fwd: Arc<dyn Fft<T>>,
    pad_inv: Arc<dyn Fft<T>>,
}

impl<T: Real> fmt::Debug for SpectralGrid<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SpectralGrid")
            .field("half_length", &self.half_length)
            .field("n", &self.n)
            .field("dealias", &self.dealias)
            .finish()
    }
}

impl<T: Real> PartialEq for SpectralGrid<T> {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.half_length == other.half_length
    }
}

impl<T: Real> SpectralGrid<T> {
    /// Grid with the default dealiasing factor 3, exact for quintic products.
    pub fn new(half_length: T, n: usize) -> Result<Self> {
        Self::with_dealias(half_length, n, 3)
    }

    /// Grid with an explicit zero-padding factor. Factors below 3 alias quintic
    /// products and exist only for diagnostics.
    pub fn with_dealias(half_length: T, n: usize, dealias: usize) -> Result<Self> {
        if !(half_length > T::zero()) || !half_length.is_finite() {
            return Err(Error::InvalidGrid(format!("half length must be positive, got {half_length}")));
        }
        if n < 16 || !n.is_multiple_of(2) {
            return Err(Error::InvalidGrid(format!("node count must be even and >= 16, got {n}")));
        }
        if dealias == 0 {
            return Err(Error::InvalidGrid("dealias factor must be >= 1".into()));
        }
        let nf = T::from_usize_lossy(n);
        let two_l = half_length + half_length;
        let nodes = (0..n)
            .map(|m| -half_length + two_l * T::from_usize_lossy(m) / nf)
            .collect();
        let freqs = (0..n)
            .map(|i| T::PI() * T::lit(wavenumber(i, n) as f64) / half_length)
            .collect();
        let scale = two_l / nf / (T::PI() + T::PI()).sqrt();
        let mut planner = FftPlanner::new();
        let m = n * dealias;
        Ok(Self {
            half_length,
            n,
            dealias,
            nodes,
            freqs,
            scale,
            fwd: planner.plan_fft_forward(n),
            inv: planner.plan_fft_inverse(n),
            pad_fwd: planner.plan_fft_forward(m),
            pad_inv: planner.plan_fft_inverse(m),
        })
    }

    /// Shared handle, the form most operations expect.
    pub fn shared(self) -> Arc<Self> {
        Arc::new(self)
    }

    pub fn half_length(&self) -> T {
        self.half_length
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn dealias_factor(&self) -> usize {
        self.dealias
    }

    /// Size of the zero-padded grid used for products.
    pub fn padded_len(&self) -> usize {
        self.n * self.dealias
    }

    pub fn nodes(&self) -> &[T] {
        &self.nodes
    }

    /// Frequencies in FFT order.
    pub fn frequencies(&self) -> &[T] {
        &self.freqs
    }

    pub fn dx(&self) -> T {
        (self.half_length + self.half_length) / T::from_usize_lossy(self.n)
    }

    pub fn dxi(&self) -> T {
        T::PI() / self.half_length
    }

    /// Largest resolved |ξ| (the Nyquist frequency).
    pub fn max_frequency(&self) -> T {
        T::PI() * T::from_usize_lossy(self.n) / (self.half_length + self.half_length)
    }

    pub fn nyquist_index(&self) -> usize {
        self.n / 2
    }

    /// Signed wavenumber stored at FFT-order index `i`.
    pub fn wavenumber(&self, i: usize) -> i64 {
        wavenumber(i, self.n)
    }

    /// FFT-order index of the Hermitian partner of `i` (`-k`).
    pub fn partner(&self, i: usize) -> usize {
        (self.n - i) % self.n
    }

    /// Index of wavenumber `k`, if resolved.
    pub fn index_of(&self, k: i64) -> Option<usize> {
        let half = (self.n / 2) as i64;
        if k < -half || k >= half {
            return None;
        }
        Some(if k >= 0 { k as usize } else { (k + self.n as i64) as usize })
    }

    /// FFT-order indices sorted by increasing frequency.
    pub fn ascending_order(&self) -> Vec<usize> {
        let h = self.n / 2;
        (h..self.n).chain(0..h).collect()
    }

    /// Continuum-normalised spectral coefficients of real samples.
    pub fn forward(&self, u: &[T]) -> Vec<Complex<T>> {
        let mut buf: Vec<Complex<T>> = u.iter().map(|&x| Complex::new(x, T::zero())).collect();
        self.fwd.process(&mut buf);
        for (i, c) in buf.iter_mut().enumerate() {
            *c = *c * self.scale * parity::<T>(i);
        }
        buf
    }

    /// Samples of the (possibly complex) function with the given coefficients.
    pub fn inverse_complex(&self, uhat: &[Complex<T>]) -> Vec<Complex<T>> {
        let norm = T::one() / (self.scale * T::from_usize_lossy(self.n));
        let mut buf: Vec<Complex<T>> = uhat
            .iter()
            .enumerate()
            .map(|(i, &c)| c * norm * parity::<T>(i))
            .collect();
        self.inv.process(&mut buf);
        buf
    }

    /// Real samples with the given coefficients (imaginary part discarded).
    pub fn inverse(&self, uhat: &[Complex<T>]) -> Vec<T> {
        self.inverse_complex(uhat).into_iter().map(|c| c.re).collect()
    }

    /// Raw DFT coefficient `c_k` with `u(x_m) = Σ c_k e^{2πikm/N}`.
    pub(crate) fn to_raw(&self, i: usize, c: Complex<T>) -> Complex<T> {
        c * parity::<T>(i) / (self.scale * T::from_usize_lossy(self.n))
    }

    pub(crate) fn from_raw(&self, i: usize, c: Complex<T>) -> Complex<T> {
        c * parity::<T>(i) * self.scale * T::from_usize_lossy(self.n)
    }

    pub(crate) fn pad_inverse(&self, buf: &mut [Complex<T>], scratch: &mut [Complex<T>]) {
        self.pad_inv.process_with_scratch(buf, scratch);
    }

    pub(crate) fn pad_forward(&self, buf: &mut [Complex<T>], scratch: &mut [Complex<T>]) {
        self.pad_fwd.process_with_scratch(buf, scratch);
    }

    pub(crate) fn pad_scratch_len(&self) -> usize {
        self.pad_fwd
            .get_inplace_scratch_len()
            .max(self.pad_inv.get_inplace_scratch_len())
    }

    /// Evaluates the trigonometric interpolant of `uhat` at arbitrary points.
    pub fn interpolate(&self, uhat: &[Complex<T>], points: &[T]) -> Vec<T> {
        let ny = self.nyquist_index();
        let raw: Vec<Complex<T>> = uhat
            .iter()
            .enumerate()
            .map(|(i, &c)| if i == ny { Complex::new(T::zero(), T::zero()) } else { self.to_raw(i, c) })
            .collect();
        points
            .iter()
            .map(|&x| {
                // Phase recurrence keeps this O(N) per point.
                let theta = T::PI() * (x + self.half_length) / self.half_length;
                let step = Complex::new(theta.cos(), theta.sin());
                let mut acc = raw[0].re;
                let mut e = step;
                for k in 1..ny {
                    let z = raw[k] * e;
                    acc = acc + z.re + (raw[self.n - k] * e.conj()).re;
                    e = e * step;
                    if k % 64 == 0 {
                        let a = theta * T::from_usize_lossy(k + 1);
                        e = Complex::new(a.cos(), a.sin());
                    }
                }
                acc
            })
            .collect()
    }
}

pub(crate) fn wavenumber(i: usize, n: usize) -> i64 {
    if i < n / 2 {
        i as i64
    } else {
        i as i64 - n as i64
    }
}

#[inline]
fn parity<T: Real>(i: usize) -> T {
    if i.is_multiple_of(2) {
        T::one()
    } else {
        -T::one()
    }
}
