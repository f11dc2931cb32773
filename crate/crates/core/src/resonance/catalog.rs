use nalgebra::{Matrix4, SymmetricEigen, Vector4};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::phase::{critical_points, QuinticPhase};
use crate::{Error, Rational, Result};

/// Which family a critical point belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PointGroup {
    /// All five frequencies equal `ξ/5`.
    Fifth,
    /// Four frequencies `ξ/3` and one `−ξ/3`.
    Third,
    /// Three frequencies `ξ` and two `−ξ`; here `Ψ = 0`.
    ZeroPhase,
}

impl PointGroup {
    fn of_index(index: usize) -> Self {
        match index {
            1 => PointGroup::Fifth,
            2..=6 => PointGroup::Third,
            _ => PointGroup::ZeroPhase,
        }
    }
}

/// One nondegenerate critical point of `Ψ`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StationaryPoint {
    /// 1-based catalog index.
    pub index: usize,
    pub group: PointGroup,
    pub point: [f64; 4],
    pub psi: f64,
    /// Signed Hessian determinant.
    pub determinant: f64,
    /// `|det ∇²Ψ|`.
    pub delta: f64,
    /// Positive minus negative Hessian eigenvalues.
    pub signature: i32,
    pub eigenvalues: [f64; 4],
}

/// How the multistart search went.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SearchReport {
    pub multistarts: usize,
    pub seed: u64,
    /// Random starts whose Newton iteration reached a root.
    pub converged: usize,
    /// Distinct roots among all starts (seeded and random).
    pub distinct_roots: usize,
    /// Largest `|∇Ψ|/|ξ|⁴` at a catalog point after polishing.
    pub max_gradient: f64,
}

/// The critical points of `Ψ` at one output frequency.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResonanceCatalog {
    pub xi: f64,
    pub points: Vec<StationaryPoint>,
    pub search: SearchReport,
}

impl ResonanceCatalog {
    pub fn group(&self, g: PointGroup) -> impl Iterator<Item = &StationaryPoint> {
        self.points.iter().filter(move |p| p.group == g)
    }

    pub fn phase(&self) -> QuinticPhase<f64> {
        QuinticPhase::new(self.xi)
    }
}

/// Multistart settings for [`find_stationary_points`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SearchOptions {
    pub multistarts: usize,
    pub seed: u64,
    pub max_iterations: usize,
}

impl Default for SearchOptions {
    fn default() -> Self {
        Self { multistarts: 10_000, seed: 20_240_517, max_iterations: 80 }
    }
}

pub(crate) fn matrix(h: &[[f64; 4]; 4]) -> Matrix4<f64> {
    Matrix4::from_fn(|i, j| h[i][j])
}

fn norm(g: &[f64; 4]) -> f64 {
    g.iter().map(|v| v * v).sum::<f64>().sqrt()
}

/// Damped Newton on `∇Ψ = 0`. Converged when `|∇Ψ| ≤ 1e−13·|ξ|⁴`.
fn newton(phase: &QuinticPhase<f64>, start: [f64; 4], max_iterations: usize) -> Option<[f64; 4]> {
    let scale = phase.xi().abs();
    let tol = 1e-13 * scale.powi(4);
    let mut y = start;
    for _ in 0..max_iterations {
        let g = phase.gradient(&y);
        if norm(&g) <= tol {
            return Some(y);
        }
        let step = matrix(&phase.hessian(&y)).lu().solve(&Vector4::from(g))?;
        let len = step.norm();
        if !len.is_finite() {
            return None;
        }
        let damp = if len > scale { scale / len } else { 1.0 };
        for i in 0..4 {
            y[i] -= damp * step[i];
        }
        if y.iter().any(|v| v.abs() > 1e3 * scale) {
            return None;
        }
    }
    (norm(&phase.gradient(&y)) <= tol).then_some(y)
}

/// Locates all real critical points of `Ψ` at `ξ`: Newton from the closed
/// forms, then a seeded multistart over `[−2|ξ|, 2|ξ|]⁴` as a completeness
/// check. Fails if a closed-form start does not converge, if the search finds
/// a root outside the closed-form list, or if the count is not sixteen.
pub fn find_stationary_points(xi: f64, opts: &SearchOptions) -> Result<ResonanceCatalog> {
    if xi == 0.0 || !xi.is_finite() {
        return Err(Error::InvalidInput("output frequency must be finite and nonzero".into()));
    }
    let phase = QuinticPhase::new(xi);
    let same = |a: &[f64; 4], b: &[f64; 4]| a.iter().zip(b).all(|(p, q)| (p - q).abs() <= 1e-8 * xi.abs());

    let mut roots = Vec::new();
    for (k, start) in critical_points(&xi).into_iter().enumerate() {
        let root = newton(&phase, start, opts.max_iterations)
            .ok_or_else(|| Error::NoConvergence(format!("Newton failed from closed-form point {}", k + 1)))?;
        roots.push(root);
    }
    for i in 0..roots.len() {
        for j in 0..i {
            if same(&roots[i], &roots[j]) {
                return Err(Error::CatalogMismatch(format!("points {} and {} coincide", j + 1, i + 1)));
            }
        }
    }

    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut converged = 0;
    let mut extras: Vec<[f64; 4]> = Vec::new();
    for _ in 0..opts.multistarts {
        let start: [f64; 4] = std::array::from_fn(|_| rng.random_range(-2.0..=2.0) * xi.abs());
        if let Some(root) = newton(&phase, start, opts.max_iterations) {
            converged += 1;
            if !roots.iter().any(|r| same(r, &root)) && !extras.iter().any(|r| same(r, &root)) {
                extras.push(root);
            }
        }
    }
    if !extras.is_empty() {
        return Err(Error::CatalogMismatch(format!(
            "{} root(s) outside the closed-form list, e.g. {:?}",
            extras.len(),
            extras[0]
        )));
    }
    if roots.len() != 16 {
        return Err(Error::CatalogMismatch(format!("expected 16 roots, found {}", roots.len())));
    }

    let mut max_gradient = 0.0f64;
    let points = roots
        .iter()
        .enumerate()
        .map(|(k, y)| {
            max_gradient = max_gradient.max(norm(&phase.gradient(y)) / xi.powi(4));
            let eig = SymmetricEigen::new(matrix(&phase.hessian(y))).eigenvalues;
            let mut eigenvalues = [eig[0], eig[1], eig[2], eig[3]];
            eigenvalues.sort_by(|a, b| a.partial_cmp(b).expect("finite"));
            let signature = eigenvalues.iter().map(|&e| if e > 0.0 { 1 } else { -1 }).sum();
            let determinant = phase.hessian_determinant(y);
            StationaryPoint {
                index: k + 1,
                group: PointGroup::of_index(k + 1),
                point: *y,
                psi: phase.value(y),
                determinant,
                delta: determinant.abs(),
                signature,
                eigenvalues,
            }
        })
        .collect();
    Ok(ResonanceCatalog {
        xi,
        points,
        search: SearchReport {
            multistarts: opts.multistarts,
            seed: opts.seed,
            converged,
            distinct_roots: roots.len(),
            max_gradient,
        },
    })
}

/// A critical point in exact arithmetic.
#[derive(Clone, Debug, PartialEq)]
pub struct ExactPoint {
    pub index: usize,
    pub group: PointGroup,
    pub point: [Rational; 4],
    pub psi: Rational,
    pub determinant: Rational,
}

/// The closed-form catalog at a rational `ξ`, with `Ψ` and the Hessian
/// determinant evaluated exactly.
pub fn exact_catalog(xi: Rational) -> Vec<ExactPoint> {
    let phase = QuinticPhase::new(xi);
    critical_points(&xi)
        .into_iter()
        .enumerate()
        .map(|(k, point)| ExactPoint {
            index: k + 1,
            group: PointGroup::of_index(k + 1),
            psi: phase.value(&point),
            determinant: phase.hessian_determinant(&point),
            point,
        })
        .collect()
}

/// JSON form of the exact catalog: each rational is a `[numerator,
/// denominator]` pair of decimal strings.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExactCatalogJson {
    pub xi: [String; 2],
    pub points: Vec<ExactPointJson>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExactPointJson {
    pub index: usize,
    pub group: PointGroup,
    pub point: [[String; 2]; 4],
    pub psi: [String; 2],
    pub determinant: [String; 2],
    pub delta: [String; 2],
}

fn fraction(r: &Rational) -> [String; 2] {
    [r.numer().to_string(), r.denom().to_string()]
}

/// Parses a `[numerator, denominator]` pair back into a rational.
pub fn parse_fraction(pair: &[String; 2]) -> Result<Rational> {
    let parse = |s: &str| s.parse::<i128>().map_err(|e| Error::InvalidInput(format!("bad integer {s:?}: {e}")));
    let (n, d) = (parse(&pair[0])?, parse(&pair[1])?);
    if d == 0 {
        return Err(Error::InvalidInput("zero denominator".into()));
    }
    Ok(Rational::new(n, d))
}

impl ExactCatalogJson {
    pub fn new(xi: Rational, points: &[ExactPoint]) -> Self {
        let abs = |r: &Rational| if *r < Rational::from_integer(0) { -*r } else { *r };
        Self {
            xi: fraction(&xi),
            points: points
                .iter()
                .map(|p| ExactPointJson {
                    index: p.index,
                    group: p.group,
                    point: std::array::from_fn(|i| fraction(&p.point[i])),
                    psi: fraction(&p.psi),
                    determinant: fraction(&p.determinant),
                    delta: fraction(&abs(&p.determinant)),
                })
                .collect(),
        }
    }
}
