//! Divergence-free velocity fields on the moving domains `E(t)`.

mod cutoff;
mod growth;
mod translation;

use std::f64::consts::PI;

pub use cutoff::CutoffProfile;
pub use growth::{build_growth_field, growth_boundary_data, GrowthField, GROWTH_FLUX_TOL};
pub use translation::{build_translation_field, TranslationField};

use crate::geometry::{domain_at, Evolution, HoleDomain, PadRadii};
use crate::harmonic::SolverOptions;
use crate::{Error, Mat2, Result, Vec2};

/// Total field `v_t + ṽ_t` on `E(t)`.
#[derive(Debug, Clone)]
pub struct VelocityField {
    pub t: f64,
    pub domain: HoleDomain,
    pub growth: GrowthField,
    pub translation: TranslationField,
}

pub fn build_velocity_field(e: &Evolution, pads: &PadRadii, t: f64, opts: &SolverOptions) -> Result<VelocityField> {
    let domain = domain_at(e, pads, t)?;
    let g = growth_boundary_data(e, pads, t)?;
    let growth = build_growth_field(&domain, &g, opts)?;
    let velocities: Vec<Vec2> = (0..e.len()).map(|i| e.center_velocity(i, t)).collect();
    let translation = build_translation_field(&domain, &velocities)?;
    Ok(VelocityField { t, domain, growth, translation })
}

/// Boundary residuals of a total field.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct BoundaryResidual {
    /// `max |v·ν − (dr_i/dt + V_i·ν)|`
    pub normal: f64,
    /// `max |v·τ − V_i·τ|`
    pub tangential: f64,
    /// Max of `|g|` over the boundary samples.
    pub scale: f64,
}

impl VelocityField {
    pub fn eval(&self, x: &Vec2) -> Vec2 {
        self.growth.eval(x) + self.translation.eval(x)
    }

    pub fn jacobian(&self, x: &Vec2) -> Mat2 {
        self.growth.jacobian(x) + self.translation.jacobian(x)
    }

    pub fn eval_with_jacobian(&self, x: &Vec2) -> (Vec2, Mat2) {
        let (v, j) = self.growth.eval_with_jacobian(x);
        let (w, k) = self.translation.eval_with_jacobian(x);
        (v + w, j + k)
    }

    fn check(&self, x: &Vec2) -> Result<()> {
        let tol = 1e-9 * self.domain.outer.radius;
        if !self.domain.contains(x, tol) {
            return Err(Error::OutsideDomain(format!("({}, {}) is outside E({})", x.x, x.y, self.t)));
        }
        Ok(())
    }

    /// Velocity at `x ∈ E(t)`.
    pub fn field_eval(&self, x: &Vec2) -> Result<Vec2> {
        self.check(x)?;
        Ok(self.eval(x))
    }

    /// Jacobian at `x ∈ E(t)`.
    pub fn field_jacobian(&self, x: &Vec2) -> Result<Mat2> {
        self.check(x)?;
        Ok(self.jacobian(x))
    }

    /// Residuals of the boundary conditions at `samples` angles per circle.
    pub fn boundary_residuals(&self, samples: usize) -> BoundaryResidual {
        let mut out = BoundaryResidual { scale: self.growth.g.sup_norm(samples), ..Default::default() };
        for (k, c) in self.domain.circles().enumerate() {
            let shift = if k == 0 { Vec2::zeros() } else { self.translation.velocities[k - 1] };
            for j in 0..samples {
                let th = 2.0 * PI * (j as f64 + 0.5) / samples as f64;
                let e = crate::unit(th);
                let tau = Vec2::new(-e.y, e.x);
                let v = self.eval(&c.point(th));
                let normal = self.growth.g.eval(k, th) + shift.dot(&e);
                out.normal = out.normal.max((v.dot(&e) - normal).abs());
                out.tangential = out.tangential.max((v - shift).dot(&tau).abs());
            }
        }
        out
    }

    /// Sup of the Jacobian's Frobenius norm over the dump points.
    pub fn max_gradient(&self, n_r: usize, n_theta: usize) -> f64 {
        dump_field(self, n_r, n_theta).iter().map(|s| s.jacobian_norm).fold(0.0, f64::max)
    }
}

/// One row of a field dump.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FieldSample {
    pub x: Vec2,
    pub v: Vec2,
    pub div: f64,
    pub jacobian_norm: f64,
}

/// Samples of `(x, v, div v)` on a uniform polar grid about the outer centre,
/// keeping points inside `E(t)`.
pub fn dump_field(f: &VelocityField, n_r: usize, n_theta: usize) -> Vec<FieldSample> {
    let outer = f.domain.outer;
    let mut out = Vec::new();
    for i in 0..n_r {
        let r = outer.radius * (i as f64 + 0.5) / n_r as f64;
        for j in 0..n_theta {
            let x = outer.center + r * crate::unit(2.0 * PI * j as f64 / n_theta as f64);
            if f.domain.signed_distance(&x) <= 0.0 {
                continue;
            }
            let (v, jac) = f.eval_with_jacobian(&x);
            out.push(FieldSample { x, v, div: jac.trace(), jacobian_norm: jac.norm() });
        }
    }
    out
}
