use std::f64::consts::PI;

use crate::geometry::HoleDomain;
use crate::{Error, Result};

/// Neumann data on one circle as a function of the polar angle about the
/// circle's own centre.
#[derive(Debug, Clone, PartialEq)]
pub enum CircleData {
    Constant(f64),
    /// `g(θ) = mean + Σ_m (cos[m−1]·cos mθ + sin[m−1]·sin mθ)`
    Fourier {
        mean: f64,
        cos: Vec<f64>,
        sin: Vec<f64>,
    },
}

impl CircleData {
    pub fn eval(&self, theta: f64) -> f64 {
        match self {
            CircleData::Constant(c) => *c,
            CircleData::Fourier { mean, cos, sin } => {
                let mut v = *mean;
                for (k, (a, b)) in cos.iter().zip(sin).enumerate() {
                    let m = (k + 1) as f64;
                    let (s, c) = (m * theta).sin_cos();
                    v += a * c + b * s;
                }
                v
            }
        }
    }

    /// Angular mean of `g`.
    pub fn mean(&self) -> f64 {
        match self {
            CircleData::Constant(c) => *c,
            CircleData::Fourier { mean, .. } => *mean,
        }
    }

    /// Fourier data from `k` uniform samples `g(2πj/k)`, keeping the modes
    /// below the Nyquist frequency.
    pub fn from_samples(samples: &[f64]) -> Self {
        let k = samples.len();
        let modes = (k.saturating_sub(1)) / 2;
        let mean = samples.iter().sum::<f64>() / k as f64;
        let mut cos = vec![0.0; modes];
        let mut sin = vec![0.0; modes];
        for m in 1..=modes {
            let (mut a, mut b) = (0.0, 0.0);
            for (j, g) in samples.iter().enumerate() {
                let th = 2.0 * PI * (m * j % k) as f64 / k as f64;
                a += g * th.cos();
                b += g * th.sin();
            }
            cos[m - 1] = 2.0 * a / k as f64;
            sin[m - 1] = 2.0 * b / k as f64;
        }
        CircleData::Fourier { mean, cos, sin }
    }

    /// Same data with the angular mean removed.
    pub fn without_mean(self) -> Self {
        match self {
            CircleData::Constant(_) => CircleData::Constant(0.0),
            CircleData::Fourier { cos, sin, .. } => CircleData::Fourier { mean: 0.0, cos, sin },
        }
    }

    /// Derivative in `θ`.
    pub fn eval_dtheta(&self, theta: f64) -> f64 {
        match self {
            CircleData::Constant(_) => 0.0,
            CircleData::Fourier { cos, sin, .. } => {
                let mut v = 0.0;
                for (k, (a, b)) in cos.iter().zip(sin).enumerate() {
                    let m = (k + 1) as f64;
                    let (s, c) = (m * theta).sin_cos();
                    v += m * (b * c - a * s);
                }
                v
            }
        }
    }
}

/// Neumann data on every boundary circle of a [`HoleDomain`]: index 0 is the
/// outer circle, `1..=n` the holes.
///
/// `g` prescribes the radial derivative `∂u/∂ρ` about each circle's centre,
/// i.e. the normal pointing away from the centre. With this orientation the
/// compatibility condition reads `∮_{outer} g = Σ_k ∮_{hole k} g`.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundaryData {
    pub circles: Vec<CircleData>,
}

impl BoundaryData {
    pub fn new(circles: Vec<CircleData>) -> Self {
        Self { circles }
    }

    pub fn zeros(n_circles: usize) -> Self {
        Self::new(vec![CircleData::Constant(0.0); n_circles])
    }

    pub fn constants(values: &[f64]) -> Self {
        Self::new(values.iter().map(|&v| CircleData::Constant(v)).collect())
    }

    pub fn eval(&self, circle: usize, theta: f64) -> f64 {
        self.circles[circle].eval(theta)
    }

    /// `∮ g dS` over each circle.
    pub fn fluxes(&self, dom: &HoleDomain) -> Vec<f64> {
        self.circles.iter().enumerate().map(|(k, c)| 2.0 * PI * dom.circle(k).radius * c.mean()).collect()
    }

    /// `∮_{outer} g − Σ_k ∮_{hole k} g`.
    pub fn flux_mismatch(&self, dom: &HoleDomain) -> f64 {
        let f = self.fluxes(dom);
        f[0] - f[1..].iter().sum::<f64>()
    }

    /// Max of `|g|` over `samples` points per circle.
    pub fn sup_norm(&self, samples: usize) -> f64 {
        let mut m: f64 = 0.0;
        for c in &self.circles {
            for j in 0..samples {
                m = m.max(c.eval(2.0 * PI * j as f64 / samples as f64).abs());
            }
        }
        m
    }

    pub fn check_shape(&self, dom: &HoleDomain) -> Result<()> {
        if self.circles.len() != dom.n_holes() + 1 {
            return Err(Error::InvalidInput(format!(
                "boundary data has {} circles, domain has {}",
                self.circles.len(),
                dom.n_holes() + 1
            )));
        }
        Ok(())
    }

    /// Pointwise sum.
    pub fn add(&self, other: &BoundaryData) -> BoundaryData {
        let circles = self
            .circles
            .iter()
            .zip(&other.circles)
            .map(|(a, b)| match (a, b) {
                (CircleData::Constant(x), CircleData::Constant(y)) => CircleData::Constant(x + y),
                _ => {
                    let (ma, ca, sa) = fourier_parts(a);
                    let (mb, cb, sb) = fourier_parts(b);
                    let n = ca.len().max(cb.len());
                    let pad = |v: Vec<f64>| {
                        let mut v = v;
                        v.resize(n, 0.0);
                        v
                    };
                    let (ca, sa, cb, sb) = (pad(ca), pad(sa), pad(cb), pad(sb));
                    CircleData::Fourier {
                        mean: ma + mb,
                        cos: ca.iter().zip(&cb).map(|(x, y)| x + y).collect(),
                        sin: sa.iter().zip(&sb).map(|(x, y)| x + y).collect(),
                    }
                }
            })
            .collect();
        BoundaryData::new(circles)
    }
}

fn fourier_parts(c: &CircleData) -> (f64, Vec<f64>, Vec<f64>) {
    match c {
        CircleData::Constant(v) => (*v, vec![], vec![]),
        CircleData::Fourier { mean, cos, sin } => (*mean, cos.clone(), sin.clone()),
    }
}
