//! TOML run configuration.
//!
//! ```toml
//! r0 = 1.0
//!
//! [[cavities]]
//! ax = 0.0
//! ay = 0.0
//! v_pi = 3.0        # volume in units of π; or `v = 9.42...`
//!
//! [run]             # optional, every knob has a default
//! steps = 128
//! grid = 50
//! ```

use std::f64::consts::PI;
use std::path::Path;

use serde::Deserialize;

use crate::geometry::Configuration;
use crate::{Error, Result, Vec2};

#[derive(Debug, Clone, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct CavitySpec {
    pub ax: f64,
    pub ay: f64,
    #[serde(default)]
    pub v: Option<f64>,
    #[serde(default)]
    pub v_pi: Option<f64>,
}

impl CavitySpec {
    pub fn volume(&self) -> Result<f64> {
        match (self.v, self.v_pi) {
            (Some(v), None) => Ok(v),
            (None, Some(k)) => Ok(k * PI),
            _ => Err(Error::Config("each cavity needs exactly one of `v`, `v_pi`".into())),
        }
    }
}

/// Numerical knobs of a run.
#[derive(Debug, Clone, Deserialize, PartialEq)]
#[serde(default, deny_unknown_fields)]
pub struct RunKnobs {
    /// RK4 steps from `t = 1` to `t = λ`.
    pub steps: usize,
    pub checkpoints: usize,
    /// Initial Fourier modes per circle.
    pub modes: usize,
    pub max_modes: usize,
    /// Reference grid cells per side.
    pub grid: usize,
    /// Particles per boundary circle.
    pub boundary_samples: usize,
    /// Strictly decreasing cavity radii `ε`, absolute lengths.
    pub eps_ladder: Vec<f64>,
    pub alpha: f64,
    /// Samples on each image curve.
    pub image_samples: usize,
    /// Time samples for the evolution checks and the pad balance.
    pub time_grid: usize,
    pub det_tol: f64,
    pub hole_tracking_tol: f64,
    pub outer_tracking_tol: f64,
    pub slope_tol: f64,
    pub spread_tol: f64,
    pub area_tol: f64,
    pub roundness_tol: f64,
}

impl Default for RunKnobs {
    fn default() -> Self {
        Self {
            steps: 128,
            checkpoints: 8,
            modes: 16,
            max_modes: 128,
            grid: 50,
            boundary_samples: 256,
            eps_ladder: default_ladder(1.0),
            alpha: 0.5,
            image_samples: 1024,
            time_grid: 64,
            det_tol: 1e-3,
            hole_tracking_tol: 1e-5,
            outer_tracking_tol: 1e-6,
            slope_tol: 0.02,
            spread_tol: 0.05,
            area_tol: 5e-3,
            roundness_tol: 1e-3,
        }
    }
}

/// `ε = 2^{-k} R0` for `k = 7..=10`.
pub fn default_ladder(r0: f64) -> Vec<f64> {
    (7..=10).map(|k| r0 * 0.5f64.powi(k)).collect()
}

impl RunKnobs {
    /// Positivity and ladder checks; the ladder must stay below `min_pad`.
    pub fn validate(&self, min_pad: f64) -> Result<()> {
        let counts = [
            ("steps", self.steps),
            ("checkpoints", self.checkpoints),
            ("modes", self.modes),
            ("grid", self.grid),
            ("boundary_samples", self.boundary_samples),
            ("image_samples", self.image_samples),
            ("time_grid", self.time_grid),
        ];
        if let Some((name, _)) = counts.iter().find(|(_, v)| *v == 0) {
            return Err(Error::Config(format!("`{name}` must be positive")));
        }
        if self.max_modes < self.modes {
            return Err(Error::Config("`max_modes` must be at least `modes`".into()));
        }
        if self.image_samples < 64 {
            return Err(Error::Config("`image_samples` must be at least 64".into()));
        }
        let tols = [
            self.alpha,
            self.det_tol,
            self.hole_tracking_tol,
            self.outer_tracking_tol,
            self.slope_tol,
            self.spread_tol,
            self.area_tol,
            self.roundness_tol,
        ];
        if tols.iter().any(|t| !(*t > 0.0 && t.is_finite())) || self.alpha > 1.0 {
            return Err(Error::Config("tolerances must be positive and `alpha` in (0, 1]".into()));
        }
        if self.eps_ladder.len() < 2 {
            return Err(Error::Config("`eps_ladder` needs at least two values".into()));
        }
        if self.eps_ladder.iter().any(|e| !(*e > 0.0)) || self.eps_ladder.windows(2).any(|w| !(w[1] < w[0])) {
            return Err(Error::Config("`eps_ladder` must be positive and strictly decreasing".into()));
        }
        if !(self.eps_ladder[0] < min_pad) {
            return Err(Error::Config(format!("`eps_ladder` must stay below the pad radius {min_pad}")));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    pub r0: f64,
    pub cavities: Vec<CavitySpec>,
    /// Absent means defaults with the ladder scaled to `r0`.
    #[serde(default)]
    pub run: Option<RunKnobs>,
}

impl ConfigFile {
    pub fn parse(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn configuration(&self) -> Result<Configuration> {
        let points = self.cavities.iter().map(|c| Vec2::new(c.ax, c.ay)).collect();
        let volumes = self.cavities.iter().map(CavitySpec::volume).collect::<Result<Vec<_>>>()?;
        Configuration::new(self.r0, points, volumes)
    }

    pub fn knobs(&self) -> RunKnobs {
        self.run.clone().unwrap_or_else(|| RunKnobs { eps_ladder: default_ladder(self.r0), ..RunKnobs::default() })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_volume_forms() {
        let cfg = ConfigFile::parse(
            "r0 = 2.0\n[[cavities]]\nax = 0.5\nay = 0.0\nv_pi = 1.0\n[[cavities]]\nax = -0.5\nay = 0.0\nv = 3.0\n",
        )
        .unwrap();
        let c = cfg.configuration().unwrap();
        assert_eq!(c.volumes(), &[PI, 3.0]);
        assert_eq!(cfg.knobs().eps_ladder, default_ladder(2.0));
    }

    #[test]
    fn rejects_bad_input() {
        assert!(ConfigFile::parse("r0 = 1.0\n[[cavities]]\nax = 0.0\nay = 0.0\n").unwrap().configuration().is_err());
        assert!(ConfigFile::parse("r0 = 1.0\ncavities = []\nbogus = 1\n").is_err());
        let knobs = RunKnobs { eps_ladder: vec![0.01, 0.02], ..RunKnobs::default() };
        assert!(knobs.validate(0.1).is_err());
        assert!(RunKnobs::default().validate(1e-3).is_err());
        assert!(RunKnobs::default().validate(0.05).is_ok());
    }

    #[test]
    fn partial_run_table_keeps_defaults() {
        let cfg = ConfigFile::parse("r0 = 1.0\ncavities = []\n[run]\nsteps = 32\n").unwrap();
        let k = cfg.knobs();
        assert_eq!(k.steps, 32);
        assert_eq!(k.grid, 50);
    }
}
