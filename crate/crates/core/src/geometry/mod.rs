//! Cavitation configurations, circular-cavity evolutions and the moving
//! domains they carve out of the stretched disk.

mod domain;
mod evolution;
mod pads;

use std::f64::consts::PI;

pub use domain::{domain_at, Circle, HoleDomain};
pub use evolution::{
    straight_line_evolution, validate_evolution, CavityPath, Evolution, EvolutionReport, StraightLinePath, TimeSample,
};
pub use pads::{choose_pads, clearance_at, PadRadii};

use crate::{Error, Result, Vec2};

/// Strictness margin for disjointness/containment tests, relative to `R0`.
pub const SEPARATION_MARGIN: f64 = 1e-12;

/// Cavitation points `a_i` and target cavity areas `v_i` in the disk `B(0, R0)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Configuration {
    r0: f64,
    points: Vec<Vec2>,
    volumes: Vec<f64>,
}

impl Configuration {
    pub fn new(r0: f64, points: Vec<Vec2>, volumes: Vec<f64>) -> Result<Self> {
        if !(r0 > 0.0 && r0.is_finite()) {
            return Err(Error::InvalidInput(format!("R0 must be positive, got {r0}")));
        }
        if points.len() != volumes.len() {
            return Err(Error::InvalidInput(format!(
                "{} cavitation points but {} volumes",
                points.len(),
                volumes.len()
            )));
        }
        for (i, (a, &v)) in points.iter().zip(&volumes).enumerate() {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::InvalidInput(format!("v_{} = {v} must be positive", i + 1)));
            }
            if !(a.norm() < r0) {
                return Err(Error::InvalidInput(format!("a_{} = ({}, {}) is not inside B(0, {r0})", i + 1, a.x, a.y)));
            }
        }
        for i in 0..points.len() {
            for j in i + 1..points.len() {
                if (points[i] - points[j]).norm() <= SEPARATION_MARGIN * r0 {
                    return Err(Error::InvalidInput(format!("cavitation points {} and {} coincide", i + 1, j + 1)));
                }
            }
        }
        Ok(Self { r0, points, volumes })
    }

    pub fn r0(&self) -> f64 {
        self.r0
    }

    pub fn points(&self) -> &[Vec2] {
        &self.points
    }

    pub fn volumes(&self) -> &[f64] {
        &self.volumes
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn total_volume(&self) -> f64 {
        self.volumes.iter().sum()
    }

    /// Final stretch `λ` of the outer boundary.
    pub fn lambda(&self) -> f64 {
        // inputs already validated
        (1.0 + self.total_volume() / (PI * self.r0 * self.r0)).sqrt()
    }

    /// Same configuration after the similarity `x -> s·R(θ)x`.
    pub fn transformed(&self, scale: f64, angle: f64) -> Result<Self> {
        let (s, c) = angle.sin_cos();
        let points = self.points.iter().map(|a| scale * Vec2::new(c * a.x - s * a.y, s * a.x + c * a.y)).collect();
        let volumes = self.volumes.iter().map(|v| v * scale * scale).collect();
        Self::new(self.r0 * scale, points, volumes)
    }
}

/// Stretch factor `λ` from incompressibility: `Σ v_i = (λ² − 1) π R0²`.
pub fn lambda_from_volumes(r0: f64, volumes: &[f64]) -> Result<f64> {
    if !(r0 > 0.0) {
        return Err(Error::InvalidInput(format!("R0 must be positive, got {r0}")));
    }
    if let Some(v) = volumes.iter().find(|v| !(**v > 0.0)) {
        return Err(Error::InvalidInput(format!("cavity volume {v} must be positive")));
    }
    let total: f64 = volumes.iter().sum();
    Ok((1.0 + total / (PI * r0 * r0)).sqrt())
}

/// Attainability parameter `σ` of a configuration.
///
/// Minimum over the boundary terms `(1 − |a_i|/R0)² / (v_i/Σv)` and the pair
/// terms `|a_i − a_j|² / (R0² (√(v_i/Σv) + √(v_j/Σv))²)`. With a single
/// cavity the pair minimum is over the empty set (`+∞`).
pub fn sigma(config: &Configuration) -> Result<f64> {
    if config.is_empty() {
        return Err(Error::InvalidInput("sigma needs at least one cavity".into()));
    }
    let r0 = config.r0();
    let total = config.total_volume();
    let frac: Vec<f64> = config.volumes().iter().map(|v| v / total).collect();
    let a = config.points();

    let mut s = f64::INFINITY;
    for i in 0..a.len() {
        let b = 1.0 - a[i].norm() / r0;
        s = s.min(b * b / frac[i]);
        for j in i + 1..a.len() {
            let w = frac[i].sqrt() + frac[j].sqrt();
            s = s.min((a[i] - a[j]).norm_squared() / (r0 * r0 * w * w));
        }
    }
    Ok(s)
}

/// True when the straight-line evolution is admissible: `1 − λ⁻² < σ`.
pub fn straight_line_admissible(config: &Configuration) -> Result<bool> {
    let s = sigma(config)?;
    let lambda = config.lambda();
    Ok(1.0 - 1.0 / (lambda * lambda) < s)
}

/// Largest admissible stretch `λ` for a given `σ` (`+∞` when `σ ≥ 1`).
pub fn max_admissible_lambda(sigma: f64) -> f64 {
    if sigma >= 1.0 {
        f64::INFINITY
    } else {
        (1.0 / (1.0 - sigma)).sqrt()
    }
}

/// Necessary condition `2√(v1 v2) ≤ π R0²` for two round cavities in the
/// deformed disk. Returns the slack `π R0² − 2√(v1 v2)`.
pub fn two_cavity_necessary_slack(r0: f64, v1: f64, v2: f64) -> f64 {
    PI * r0 * r0 - 2.0 * (v1 * v2).sqrt()
}

/// Packing density of `n` equal disks of radius `ρ` with centres `a_i`
/// inside `B(0, R0)`, where `ρ` is the largest radius keeping them disjoint
/// and inside. Coincides with `σ` for equal volumes.
pub fn equal_packing_density(r0: f64, points: &[Vec2]) -> f64 {
    let mut rho = f64::INFINITY;
    for (i, a) in points.iter().enumerate() {
        rho = rho.min(r0 - a.norm());
        for b in &points[i + 1..] {
            rho = rho.min(0.5 * (a - b).norm());
        }
    }
    points.len() as f64 * rho * rho / (r0 * r0)
}

/// Density `11 / (1 + 1/sin(π/9))²` of the densest packing of eleven equal
/// disks in a disk.
pub fn eleven_disk_packing_density() -> f64 {
    let s = (PI / 9.0).sin();
    let q = 1.0 + 1.0 / s;
    11.0 / (q * q)
}

/// Stretch bound `√((1 + sin(π/9))² / (1 + 2 sin(π/9) − 10 sin²(π/9)))` for
/// eleven equal cavities at the densest packing.
pub fn eleven_disk_lambda_bound() -> f64 {
    let s = (PI / 9.0).sin();
    ((1.0 + s).powi(2) / (1.0 + 2.0 * s - 10.0 * s * s)).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::vec2;

    fn symmetric(x: f64) -> Configuration {
        Configuration::new(1.0, vec![vec2(-x, 0.0), vec2(x, 0.0)], vec![1.0, 1.0]).unwrap()
    }

    #[test]
    fn lambda_examples() {
        assert!((lambda_from_volumes(1.0, &[3.0 * PI]).unwrap() - 2.0).abs() < 1e-15);
        assert_eq!(lambda_from_volumes(1.0, &[]).unwrap(), 1.0);
        let l = lambda_from_volumes(2.0, &[PI, 3.0 * PI]).unwrap();
        assert!((l - 2f64.sqrt()).abs() < 1e-15);
        assert!(lambda_from_volumes(0.0, &[1.0]).is_err());
        assert!(lambda_from_volumes(1.0, &[1.0, -1.0]).is_err());
    }

    #[test]
    fn sigma_examples() {
        let one = Configuration::new(1.0, vec![vec2(0.0, 0.0)], vec![0.7]).unwrap();
        assert_eq!(sigma(&one).unwrap(), 1.0);
        assert!((sigma(&symmetric(0.5)).unwrap() - 0.5).abs() < 1e-15);
        assert!((sigma(&symmetric(0.9)).unwrap() - 0.02).abs() < 1e-15);
    }

    #[test]
    fn configuration_rejects_bad_input() {
        assert!(Configuration::new(1.0, vec![vec2(1.0, 0.0)], vec![1.0]).is_err());
        assert!(Configuration::new(1.0, vec![vec2(0.1, 0.0)], vec![0.0]).is_err());
        assert!(Configuration::new(1.0, vec![vec2(0.1, 0.0), vec2(0.1, 0.0)], vec![1.0, 1.0]).is_err());
        assert!(Configuration::new(-1.0, vec![], vec![]).is_err());
    }

    #[test]
    fn eleven_disk_remark() {
        assert!((eleven_disk_packing_density() - 0.7145).abs() < 5e-5);
        assert!((eleven_disk_lambda_bound() - 1.8714).abs() < 5e-5);
        // the λ bound is exactly the σ-criterion at the packing density
        let via_sigma = max_admissible_lambda(eleven_disk_packing_density());
        assert!((via_sigma - eleven_disk_lambda_bound()).abs() < 1e-12);
    }

    #[test]
    fn packing_density_equals_sigma_for_equal_volumes() {
        let c = symmetric(0.45);
        let d = equal_packing_density(1.0, c.points());
        assert!((d - sigma(&c).unwrap()).abs() < 1e-14);
    }

    #[test]
    fn necessary_condition_tight_case() {
        let v = PI / 2.0;
        assert!(two_cavity_necessary_slack(1.0, v, v).abs() < 1e-15);
    }
}
