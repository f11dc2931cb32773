use num_traits::{Float, FloatConst};
use rustfft::FftNum;
use std::fmt::{Debug, Display};

/// Floating-point scalar accepted by the numerical kernels (`f32`, `f64`).
pub trait Real: Float + FloatConst + FftNum + Display + Default + Debug {
    /// Converts an `f64` literal; every supported type can represent it.
    #[inline]
    fn lit(x: f64) -> Self {
        <Self as num_traits::NumCast>::from(x).expect("literal fits the scalar type")
    }

    /// Converts a count or index.
    #[inline]
    fn from_usize_lossy(n: usize) -> Self {
        Self::lit(n as f64)
    }

    /// Lossy conversion back to `f64` for reporting and persistence.
    #[inline]
    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl<T> Real for T where T: Float + FloatConst + FftNum + Display + Default + Debug {}
