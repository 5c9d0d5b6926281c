use std::f64::consts::PI;

use super::translation::perp_jacobian;
use super::CutoffProfile;
use crate::geometry::{Circle, Evolution, HoleDomain, PadRadii};
use crate::harmonic::{sample_boundary, solve_neumann, BoundaryData, CircleData, HarmonicSolution, SolverOptions};
use crate::{Error, Mat2, Result, Vec2};

/// Relative tolerance on the flux balance of the growth data.
pub const GROWTH_FLUX_TOL: f64 = 1e-10;

/// Normal speeds of the boundary circles of `E(t)`: `R0` on the outer
/// circle and `dr_i/dt = (dL_i²/dt)/(2 r_i)` on the holes.
pub fn growth_boundary_data(e: &Evolution, pads: &PadRadii, t: f64) -> Result<BoundaryData> {
    let mut speeds = vec![e.r0()];
    let mut hole_flux = 0.0;
    for i in 0..e.len() {
        let r = pads.padded_radius(e, i, t);
        let dr = pads.padded_radius_rate(e, i, t);
        hole_flux += 2.0 * PI * r * dr;
        speeds.push(dr);
    }
    let outer_flux = 2.0 * PI * t * e.r0() * e.r0();
    let mismatch = outer_flux - hole_flux;
    if !(mismatch.abs() <= GROWTH_FLUX_TOL * outer_flux) {
        return Err(Error::EvolutionInconsistency(format!(
            "at t = {t}: outer flux {outer_flux} but hole fluxes sum to {hole_flux}"
        )));
    }
    Ok(BoundaryData::constants(&speeds))
}

/// `v = Dφ + D⊥ψ` with `∂φ/∂ρ = g` on every circle and
/// `ψ = φ̂ − ζ(2 dist(·, ∂E)/d) φ̂∘q`, where `φ̂` has Neumann data `∂φ/∂τ`
/// and `q` is the radial projection onto the nearest boundary circle.
#[derive(Debug, Clone)]
pub struct GrowthField {
    pub phi: HarmonicSolution,
    pub varphi: HarmonicSolution,
    pub g: BoundaryData,
    pub circles: Vec<Circle>,
    pub d: f64,
    pub profile: CutoffProfile,
}

pub fn build_growth_field(dom: &HoleDomain, g: &BoundaryData, opts: &SolverOptions) -> Result<GrowthField> {
    let phi = solve_neumann(dom, g, opts)?;
    let samples = (4 * phi.modes()).max(64);
    let tangential = sample_boundary(dom, samples, |_, c, th| phi.tangential_derivative(c, th));
    let tangential = BoundaryData::new(tangential.circles.into_iter().map(CircleData::without_mean).collect());
    let gnorm = g.sup_norm(samples);
    let varphi = if tangential.sup_norm(samples) <= 1e-14 * gnorm {
        HarmonicSolution::zero(dom)
    } else {
        solve_neumann(dom, &tangential, opts)?
    };
    Ok(GrowthField {
        phi,
        varphi,
        g: g.clone(),
        circles: dom.circles().copied().collect(),
        d: dom.d,
        profile: CutoffProfile,
    })
}

impl GrowthField {
    fn nearest(&self, x: &Vec2) -> (usize, f64) {
        let mut best = (0, self.circles[0].radius - (x - self.circles[0].center).norm());
        for (k, c) in self.circles.iter().enumerate().skip(1) {
            let s = (x - c.center).norm() - c.radius;
            if s < best.1 {
                best = (k, s);
            }
        }
        best
    }

    /// Value, gradient and Hessian of the stream function `ψ`.
    pub fn stream(&self, x: &Vec2) -> (f64, Vec2, Mat2) {
        let (a, ga, ha) = self.varphi.eval_all(x);
        let (k, dist) = self.nearest(x);
        let s = 2.0 * dist / self.d;
        if s >= 1.0 {
            return (a, ga, ha);
        }
        let c = &self.circles[k];
        let dy = x - c.center;
        let rho = dy.norm();
        let e = dy / rho;
        let et = Vec2::new(-e.y, e.x);
        let ee = e * e.transpose();
        let sign = if k == 0 { -1.0 } else { 1.0 };

        // cutoff factor Z = ζ(2 dist/d)
        let (z, z1, z2) = self.profile.eval(s);
        let grad_dist = sign * e;
        let hess_dist = sign * (Mat2::identity() - ee) / rho;
        let grad_z = z1 * (2.0 / self.d) * grad_dist;
        let hess_z = z2 * (2.0 / self.d).powi(2) * grad_dist * grad_dist.transpose() + z1 * (2.0 / self.d) * hess_dist;

        // boundary trace H = φ̂(c + R e^{iθ}) as a function of x through θ
        let q = c.center + c.radius * e;
        let (h0, gq, hq) = self.varphi.eval_all(&q);
        let h1 = c.radius * gq.dot(&et);
        let h2 = c.radius * c.radius * et.dot(&(hq * et)) - c.radius * gq.dot(&e);
        let grad_theta = et / rho;
        let r4 = rho.powi(4);
        let hess_theta = Mat2::new(
            2.0 * dy.x * dy.y / r4,
            (dy.y * dy.y - dy.x * dy.x) / r4,
            (dy.y * dy.y - dy.x * dy.x) / r4,
            -2.0 * dy.x * dy.y / r4,
        );
        let grad_h = h1 * grad_theta;
        let hess_h = h2 * grad_theta * grad_theta.transpose() + h1 * hess_theta;

        let val = a - z * h0;
        let grad = ga - (h0 * grad_z + z * grad_h);
        let hess = ha - (h0 * hess_z + grad_z * grad_h.transpose() + grad_h * grad_z.transpose() + z * hess_h);
        (val, grad, hess)
    }

    /// Velocity and Jacobian.
    pub fn eval_with_jacobian(&self, x: &Vec2) -> (Vec2, Mat2) {
        let (_, gphi, hphi) = self.phi.eval_all(x);
        let (_, gpsi, hpsi) = self.stream(x);
        (gphi + Vec2::new(gpsi.y, -gpsi.x), hphi + perp_jacobian(&hpsi))
    }

    pub fn eval(&self, x: &Vec2) -> Vec2 {
        self.eval_with_jacobian(x).0
    }

    pub fn jacobian(&self, x: &Vec2) -> Mat2 {
        self.eval_with_jacobian(x).1
    }

    /// Max of `|v·ν − g|` and of `|v·τ|` over `samples` points per circle,
    /// with `ν` radial about each circle's centre.
    pub fn boundary_residuals(&self, samples: usize) -> (f64, f64) {
        let (mut normal, mut tangential): (f64, f64) = (0.0, 0.0);
        for (k, c) in self.circles.iter().enumerate() {
            for j in 0..samples {
                let th = 2.0 * PI * (j as f64 + 0.5) / samples as f64;
                let e = crate::unit(th);
                let v = self.eval(&c.point(th));
                normal = normal.max((v.dot(&e) - self.g.eval(k, th)).abs());
                tangential = tangential.max(v.dot(&Vec2::new(-e.y, e.x)).abs());
            }
        }
        (normal, tangential)
    }
}
