//! Interpolation of sampled spectra onto off-grid frequencies.

use num_complex::Complex64;

/// Complex samples on a uniform, ascending abscissa, evaluated by local cubic
/// (four-point Lagrange) interpolation of the real and imaginary parts.
#[derive(Clone, Debug)]
pub struct UniformCubic {
    start: f64,
    step: f64,
    values: Vec<Complex64>,
}

impl UniformCubic {
    pub fn new(start: f64, step: f64, values: Vec<Complex64>) -> Self {
        assert!(step > 0.0 && values.len() >= 4, "need a positive step and four samples");
        Self { start, step, values }
    }

    pub fn start(&self) -> f64 {
        self.start
    }

    pub fn end(&self) -> f64 {
        self.start + self.step * (self.values.len() - 1) as f64
    }

    /// Value at `x`; zero outside the sampled range.
    pub fn eval(&self, x: f64) -> Complex64 {
        let s = (x - self.start) / self.step;
        let n = self.values.len();
        if !(s >= 0.0) || s > (n - 1) as f64 {
            return Complex64::new(0.0, 0.0);
        }
        let i = (s.floor() as usize).clamp(1, n - 3);
        let u = s - i as f64;
        let (p0, p1, p2, p3) = (
            self.values[i - 1],
            self.values[i],
            self.values[i + 1],
            self.values[i + 2],
        );
        // Lagrange weights on nodes -1, 0, 1, 2.
        let w0 = -u * (u - 1.0) * (u - 2.0) / 6.0;
        let w1 = (u + 1.0) * (u - 1.0) * (u - 2.0) / 2.0;
        let w2 = -(u + 1.0) * u * (u - 2.0) / 2.0;
        let w3 = (u + 1.0) * u * (u - 1.0) / 6.0;
        p0 * w0 + p1 * w1 + p2 * w2 + p3 * w3
    }
}
