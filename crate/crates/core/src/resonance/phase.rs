use num_traits::Num;

/// Interaction phase of five frequencies summing to `ξ`:
///
/// ```text
/// Ψ(y) = ξ⁵ − (ξ − y₁ − y₂ − y₃ − y₄)⁵ − y₁⁵ − y₂⁵ − y₃⁵ − y₄⁵
/// ```
///
/// Everything here is polynomial arithmetic, so the same code runs on `f64`,
/// exact rationals and complex points off the real axis.
#[derive(Clone, Debug, PartialEq)]
pub struct QuinticPhase<S> {
    xi: S,
}

fn small<S: Num + Clone>(n: u32) -> S {
    (0..n).fold(S::zero(), |acc, _| acc + S::one())
}

fn pow<S: Num + Clone>(x: &S, k: u32) -> S {
    (0..k).fold(S::one(), |acc, _| acc * x.clone())
}

impl<S: Num + Clone> QuinticPhase<S> {
    /// Panics when `ξ = 0`, where the phase is degenerate.
    pub fn new(xi: S) -> Self {
        assert!(!xi.is_zero(), "output frequency must be nonzero");
        Self { xi }
    }

    pub fn xi(&self) -> &S {
        &self.xi
    }

    /// The fifth frequency `ξ − Σy`.
    pub fn remainder(&self, y: &[S; 4]) -> S {
        y.iter().fold(self.xi.clone(), |acc, v| acc - v.clone())
    }

    pub fn value(&self, y: &[S; 4]) -> S {
        let r = self.remainder(y);
        y.iter().fold(pow(&self.xi, 5) - pow(&r, 5), |acc, v| acc - pow(v, 5))
    }

    /// `∂Ψ/∂y_i = 5(ξ − Σy)⁴ − 5y_i⁴`.
    pub fn gradient(&self, y: &[S; 4]) -> [S; 4] {
        let r4 = pow(&self.remainder(y), 4);
        let five: S = small(5);
        std::array::from_fn(|i| five.clone() * (r4.clone() - pow(&y[i], 4)))
    }

    /// `∂²Ψ/∂y_i∂y_j = −20(ξ − Σy)³ − 20δ_ij y_i³`.
    pub fn hessian(&self, y: &[S; 4]) -> [[S; 4]; 4] {
        let twenty: S = small(20);
        let common = S::zero() - twenty.clone() * pow(&self.remainder(y), 3);
        std::array::from_fn(|i| {
            std::array::from_fn(|j| {
                if i == j {
                    common.clone() - twenty.clone() * pow(&y[i], 3)
                } else {
                    common.clone()
                }
            })
        })
    }

    /// Determinant of the Hessian by cofactor expansion (exact for rationals).
    pub fn hessian_determinant(&self, y: &[S; 4]) -> S {
        determinant4(&self.hessian(y))
    }
}

fn det3<S: Num + Clone>(m: &[[S; 4]; 4], rows: [usize; 3], cols: [usize; 3]) -> S {
    let e = |r: usize, c: usize| m[rows[r]][cols[c]].clone();
    e(0, 0) * (e(1, 1) * e(2, 2) - e(1, 2) * e(2, 1)) - e(0, 1) * (e(1, 0) * e(2, 2) - e(1, 2) * e(2, 0))
        + e(0, 2) * (e(1, 0) * e(2, 1) - e(1, 1) * e(2, 0))
}

/// 4×4 determinant over any commutative ring.
pub fn determinant4<S: Num + Clone>(m: &[[S; 4]; 4]) -> S {
    let mut acc = S::zero();
    for c in 0..4 {
        let cols: Vec<usize> = (0..4).filter(|&k| k != c).collect();
        let minor = det3(m, [1, 2, 3], [cols[0], cols[1], cols[2]]);
        let term = m[0][c].clone() * minor;
        acc = if c % 2 == 0 { acc + term } else { acc - term };
    }
    acc
}

/// The sixteen real critical points of `Ψ`, in catalog order.
///
/// `∇Ψ = 0` forces `y_i = ±w` with `w = ξ − Σy` the fifth frequency; with
/// `m` minus signs this gives `w = ξ/(5 − 2m)`. The order is: `m = 0` (the
/// `ξ/5` point), the five `±ξ/3` points (`m = 1, 4`), then the ten `±ξ`
/// points (`m = 2, 3`) where `Ψ` vanishes.
pub fn critical_points<S: Num + Clone>(xi: &S) -> Vec<[S; 4]> {
    let mut patterns: Vec<[bool; 4]> = (0u8..16).map(|b| std::array::from_fn(|i| b & (1 << i) != 0)).collect();
    let rank = |p: &[bool; 4]| match p.iter().filter(|&&neg| neg).count() {
        0 => 0,
        1 | 4 => 1,
        _ => 2,
    };
    patterns.sort_by_key(|p| (rank(p), p.iter().filter(|&&n| n).count()));
    patterns
        .iter()
        .map(|p| {
            let m = p.iter().filter(|&&n| n).count() as i32;
            let d = 5 - 2 * m;
            let denom: S = small(d.unsigned_abs());
            let w = if d > 0 { xi.clone() / denom } else { S::zero() - xi.clone() / denom };
            std::array::from_fn(|i| if p[i] { S::zero() - w.clone() } else { w.clone() })
        })
        .collect()
}
