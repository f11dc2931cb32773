use serde::{Deserialize, Serialize};

/// The linear phase `Φ(ξ) = xξ/t + ξ⁵` at a space-time point.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LinearPhase {
    pub x: f64,
    pub t: f64,
}

impl LinearPhase {
    pub fn new(x: f64, t: f64) -> Self {
        assert!(t > 0.0, "phase needs t > 0");
        Self { x, t }
    }

    pub fn value(&self, xi: f64) -> f64 {
        self.x * xi / self.t + xi.powi(5)
    }

    /// `t·Φ(ξ) = xξ + tξ⁵`, computed without dividing by `t`.
    pub fn scaled(&self, xi: f64) -> f64 {
        self.x * xi + self.t * xi.powi(5)
    }

    pub fn derivative(&self, xi: f64) -> f64 {
        self.x / self.t + 5.0 * xi.powi(4)
    }

    /// The positive stationary point `(−x/(5t))^{1/4}`, present only for `x < 0`.
    pub fn stationary_point(&self) -> Option<f64> {
        (self.x < 0.0).then(|| (-self.x / (5.0 * self.t)).powf(0.25))
    }

    /// The self-similar coordinate `x/t^{1/5}`.
    pub fn similarity_variable(&self) -> f64 {
        self.x / self.t.powf(0.2)
    }
}
