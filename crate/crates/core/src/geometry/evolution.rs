use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use super::{sigma, Configuration, SEPARATION_MARGIN};
use crate::{Error, Result, Vec2};

/// Time-parametrised centre `z(t)` and squared radius `L²(t)` of one cavity.
///
/// Implement this to supply custom (non straight-line) cavity paths; the
/// resulting [`Evolution`] still has to pass [`validate_evolution`].
pub trait CavityPath: Send + Sync + fmt::Debug {
    fn center(&self, t: f64) -> Vec2;
    fn center_velocity(&self, t: f64) -> Vec2;
    fn sq_radius(&self, t: f64) -> f64;
    fn sq_radius_rate(&self, t: f64) -> f64;
}

/// `z(t) = t a`, `L²(t) = (t² − 1) R0² v / Σv`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StraightLinePath {
    pub a: Vec2,
    /// `R0² v_i / Σ v_k`
    pub weight: f64,
}

impl CavityPath for StraightLinePath {
    fn center(&self, t: f64) -> Vec2 {
        t * self.a
    }

    fn center_velocity(&self, _t: f64) -> Vec2 {
        self.a
    }

    fn sq_radius(&self, t: f64) -> f64 {
        (t * t - 1.0) * self.weight
    }

    fn sq_radius_rate(&self, t: f64) -> f64 {
        2.0 * t * self.weight
    }
}

/// Evolution of circular cavities on the stretch interval `[1, λ]`.
#[derive(Debug, Clone)]
pub struct Evolution {
    r0: f64,
    lambda: f64,
    paths: Vec<Arc<dyn CavityPath>>,
}

impl Evolution {
    pub fn new(r0: f64, lambda: f64, paths: Vec<Arc<dyn CavityPath>>) -> Result<Self> {
        if !(r0 > 0.0) || !(lambda >= 1.0) {
            return Err(Error::InvalidInput(format!("need R0 > 0 and lambda >= 1, got R0 = {r0}, lambda = {lambda}")));
        }
        Ok(Self { r0, lambda, paths })
    }

    pub fn r0(&self) -> f64 {
        self.r0
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn len(&self) -> usize {
        self.paths.len()
    }

    pub fn is_empty(&self) -> bool {
        self.paths.is_empty()
    }

    pub fn paths(&self) -> &[Arc<dyn CavityPath>] {
        &self.paths
    }

    pub fn center(&self, i: usize, t: f64) -> Vec2 {
        self.paths[i].center(t)
    }

    pub fn center_velocity(&self, i: usize, t: f64) -> Vec2 {
        self.paths[i].center_velocity(t)
    }

    pub fn sq_radius(&self, i: usize, t: f64) -> f64 {
        self.paths[i].sq_radius(t)
    }

    pub fn sq_radius_rate(&self, i: usize, t: f64) -> f64 {
        self.paths[i].sq_radius_rate(t)
    }

    /// Cavity radius `L_i(t)`; negative squared radii from roundoff clamp to 0.
    pub fn radius(&self, i: usize, t: f64) -> f64 {
        self.sq_radius(i, t).max(0.0).sqrt()
    }

    /// `n + 1` uniformly spaced times covering `[1, λ]`.
    pub fn uniform_grid(&self, points: usize) -> Vec<f64> {
        let n = points.max(2) - 1;
        (0..=n).map(|k| if k == n { self.lambda } else { 1.0 + (self.lambda - 1.0) * k as f64 / n as f64 }).collect()
    }

    /// Replace the path of cavity `i` (for experiments and negative controls).
    pub fn with_path(mut self, i: usize, path: Arc<dyn CavityPath>) -> Self {
        self.paths[i] = path;
        self
    }
}

/// The evolution `z_i(t) = t a_i`, `L_i(t) = R0 √((t² − 1) v_i/Σv)`.
///
/// Fails with [`Error::NotAttainable`] when `1 − λ⁻² ≥ σ`.
pub fn straight_line_evolution(config: &Configuration) -> Result<Evolution> {
    let s = sigma(config)?;
    let lambda = config.lambda();
    let lambda_sq = lambda * lambda;
    if !(1.0 - 1.0 / lambda_sq < s) {
        return Err(Error::NotAttainable { sigma: s, lambda_sq });
    }
    let total = config.total_volume();
    let r0 = config.r0();
    let paths = config
        .points()
        .iter()
        .zip(config.volumes())
        .map(|(&a, &v)| Arc::new(StraightLinePath { a, weight: r0 * r0 * v / total }) as Arc<dyn CavityPath>)
        .collect();
    Evolution::new(r0, lambda, paths)
}

/// One row of an [`EvolutionReport`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimeSample {
    pub t: f64,
    /// `|Σ π L_i²(t) − (t² − 1) π R0²|`
    pub area_residual: f64,
    /// Smallest `|z_i − z_j| − L_i − L_j` (`+∞` for a single cavity).
    pub min_gap: f64,
    /// Smallest `t R0 − |z_i| − L_i`.
    pub clearance: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EvolutionReport {
    pub samples: Vec<TimeSample>,
    pub area_tolerance: f64,
    /// Offending cavity pair (or `(i, None)` for the outer boundary) at the
    /// first failing sample.
    pub first_violation: Option<(f64, usize, Option<usize>)>,
}

impl EvolutionReport {
    pub fn passed(&self) -> bool {
        self.first_violation.is_none() && self.samples.iter().all(|s| s.area_residual <= self.area_tolerance)
    }

    pub fn max_area_residual(&self) -> f64 {
        self.samples.iter().map(|s| s.area_residual).fold(0.0, f64::max)
    }

    pub fn min_gap(&self) -> f64 {
        self.samples.iter().map(|s| s.min_gap).fold(f64::INFINITY, f64::min)
    }

    pub fn min_clearance(&self) -> f64 {
        self.samples.iter().map(|s| s.clearance).fold(f64::INFINITY, f64::min)
    }
}

/// Check the attainability conditions of `e` on a time grid.
///
/// Gaps and clearances must exceed `1e-12·R0`; the area identity must hold
/// within `1e-12·π R0² λ²`. Failures are reported, never raised.
pub fn validate_evolution(e: &Evolution, grid: &[f64]) -> EvolutionReport {
    let r0 = e.r0();
    let margin = SEPARATION_MARGIN * r0;
    let area_tolerance = 1e-12 * PI * r0 * r0 * e.lambda() * e.lambda();
    let mut first_violation = None;
    let mut samples = Vec::with_capacity(grid.len());
    for &t in grid {
        let n = e.len();
        let area: f64 = (0..n).map(|i| PI * e.sq_radius(i, t)).sum();
        let area_residual = (area - (t * t - 1.0) * PI * r0 * r0).abs();
        let mut min_gap = f64::INFINITY;
        let mut clearance = f64::INFINITY;
        for i in 0..n {
            let zi = e.center(i, t);
            let li = e.radius(i, t);
            let c = t * r0 - zi.norm() - li;
            if c < clearance {
                clearance = c;
            }
            if c <= margin && first_violation.is_none() {
                first_violation = Some((t, i, None));
            }
            for j in i + 1..n {
                let g = (zi - e.center(j, t)).norm() - li - e.radius(j, t);
                if g < min_gap {
                    min_gap = g;
                }
                if g <= margin && first_violation.is_none() {
                    first_violation = Some((t, i, Some(j)));
                }
            }
        }
        samples.push(TimeSample { t, area_residual, min_gap, clearance });
    }
    EvolutionReport { samples, area_tolerance, first_violation }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::vec2;

    fn centered() -> Configuration {
        Configuration::new(1.0, vec![vec2(0.0, 0.0)], vec![3.0 * PI]).unwrap()
    }

    fn symmetric_pair(lambda_sq: f64) -> Configuration {
        let v = (lambda_sq - 1.0) * PI / 2.0;
        Configuration::new(1.0, vec![vec2(-0.5, 0.0), vec2(0.5, 0.0)], vec![v, v]).unwrap()
    }

    #[test]
    fn centered_cavity_paths() {
        let e = straight_line_evolution(&centered()).unwrap();
        assert!((e.lambda() - 2.0).abs() < 1e-15);
        for t in [1.0, 1.3, 2.0] {
            assert_eq!(e.center(0, t), vec2(0.0, 0.0));
            assert!((e.radius(0, t) - (t * t - 1.0f64).sqrt()).abs() < 1e-14);
        }
        assert_eq!(e.radius(0, 1.0), 0.0);
        assert!((PI * e.sq_radius(0, 2.0) - 3.0 * PI).abs() < 1e-13);
    }

    #[test]
    fn symmetric_pair_admissibility() {
        assert!(straight_line_evolution(&symmetric_pair(1.5)).is_ok());
        match straight_line_evolution(&symmetric_pair(3.0)) {
            Err(Error::NotAttainable { sigma, lambda_sq }) => {
                assert!((sigma - 0.5).abs() < 1e-14);
                assert!((lambda_sq - 3.0).abs() < 1e-12);
            }
            other => panic!("expected NotAttainable, got {other:?}"),
        }
    }

    #[test]
    fn straight_line_passes_validation() {
        let e = straight_line_evolution(&symmetric_pair(1.5)).unwrap();
        let report = validate_evolution(&e, &e.uniform_grid(64));
        assert!(report.passed());
        assert!(report.max_area_residual() < 1e-14);
        assert_eq!(report.samples.len(), 64);
    }

    #[derive(Debug)]
    struct Doubled(StraightLinePath);

    impl CavityPath for Doubled {
        fn center(&self, t: f64) -> Vec2 {
            self.0.center(t)
        }
        fn center_velocity(&self, t: f64) -> Vec2 {
            self.0.center_velocity(t)
        }
        fn sq_radius(&self, t: f64) -> f64 {
            2.0 * self.0.sq_radius(t)
        }
        fn sq_radius_rate(&self, t: f64) -> f64 {
            2.0 * self.0.sq_radius_rate(t)
        }
    }

    #[test]
    fn doubled_sq_radius_shows_area_residual() {
        let cfg = symmetric_pair(1.5);
        let e = straight_line_evolution(&cfg).unwrap();
        let first = StraightLinePath { a: cfg.points()[0], weight: 0.5 };
        let e = e.with_path(0, Arc::new(Doubled(first)));
        let grid = e.uniform_grid(9);
        let report = validate_evolution(&e, &grid);
        for s in &report.samples {
            let expected = (s.t * s.t - 1.0) * PI * 0.5;
            assert!((s.area_residual - expected).abs() < 1e-14);
        }
        assert!(!report.passed());
    }

    #[test]
    fn forced_overlap_fails_with_negative_gap() {
        let cfg = symmetric_pair(1.5);
        let e = straight_line_evolution(&cfg).unwrap();
        let pushed = StraightLinePath { a: vec2(-0.05, 0.0), weight: 0.5 };
        let e = e.with_path(1, Arc::new(pushed));
        let report = validate_evolution(&e, &[e.lambda()]);
        assert!(!report.passed());
        assert!(report.min_gap() < 0.0);
        assert_eq!(report.first_violation.map(|v| (v.1, v.2)), Some((0, Some(1))));
    }
}
