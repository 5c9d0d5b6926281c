use super::Evolution;
use crate::{Error, Result};

/// Radii `R_i` of the disks excised around the cavitation points.
///
/// The padded holes have radii `r_i(t) = √(L_i(t)² + R_i²)`; `d` is the
/// separation scale (half the smallest clearance over the validation grid,
/// capped by the pad radius so that `r_i ≥ d`) and `delta = d / (2 λ R0)`.
#[derive(Debug, Clone, PartialEq)]
pub struct PadRadii {
    pub radii: Vec<f64>,
    pub d: f64,
    pub delta: f64,
}

impl PadRadii {
    /// Uniform pads `ρ` with the separation scale measured on `grid`.
    pub fn uniform(e: &Evolution, rho: f64, grid: &[f64]) -> Result<Self> {
        let radii = vec![rho; e.len()];
        let c = min_clearance(e, &radii, grid);
        if !(c > 0.0) {
            return Err(Error::Infeasible(format!("pads of radius {rho} leave clearance {c:e}")));
        }
        let d = (0.5 * c).min(rho);
        Ok(Self { radii, d, delta: d / (2.0 * e.lambda() * e.r0()) })
    }

    pub fn padded_radius(&self, e: &Evolution, i: usize, t: f64) -> f64 {
        (e.sq_radius(i, t).max(0.0) + self.radii[i] * self.radii[i]).sqrt()
    }

    /// `d r_i / dt = (d L_i²/dt) / (2 r_i)`.
    pub fn padded_radius_rate(&self, e: &Evolution, i: usize, t: f64) -> f64 {
        e.sq_radius_rate(i, t) / (2.0 * self.padded_radius(e, i, t))
    }
}

/// Smallest clearance between padded holes, and between each padded hole and
/// the outer circle `|x| = t R0`, at time `t`.
pub fn clearance_at(e: &Evolution, radii: &[f64], t: f64) -> f64 {
    let r = |i: usize| (e.sq_radius(i, t).max(0.0) + radii[i] * radii[i]).sqrt();
    let mut c = f64::INFINITY;
    for i in 0..e.len() {
        let zi = e.center(i, t);
        let ri = r(i);
        c = c.min(t * e.r0() - zi.norm() - ri);
        for j in i + 1..e.len() {
            c = c.min((zi - e.center(j, t)).norm() - ri - r(j));
        }
    }
    c
}

fn min_clearance(e: &Evolution, radii: &[f64], grid: &[f64]) -> f64 {
    grid.iter().map(|&t| clearance_at(e, radii, t)).fold(f64::INFINITY, f64::min)
}

/// Uniform pad radius `ρ` balanced against the separation scale.
///
/// The clearance `c(ρ)` shrinks as `ρ` grows; bisection finds the largest
/// `ρ` with `c(ρ)/2 ≥ ρ`, so that the padded holes satisfy `r_i ≥ d` and the
/// `d`-collars stay disjoint and inside the disk, with `d = c(ρ)/2`.
pub fn choose_pads(e: &Evolution, grid: &[f64]) -> Result<PadRadii> {
    if e.is_empty() {
        return Err(Error::Infeasible("no cavities to pad".into()));
    }
    if grid.is_empty() {
        return Err(Error::InvalidInput("empty time grid".into()));
    }
    let n = e.len();
    let excess = |rho: f64| 0.5 * min_clearance(e, &vec![rho; n], grid) - rho;

    if !(excess(0.0) > 0.0) {
        return Err(Error::Infeasible(
            "cavities touch or leave the disk on the time grid; no positive pad radius".into(),
        ));
    }
    let (mut lo, mut hi) = (0.0, e.r0());
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if excess(mid) >= 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= 1e-15 * e.r0() {
            break;
        }
    }
    if !(lo > 0.0) {
        return Err(Error::Infeasible("bisection found no positive pad radius".into()));
    }
    PadRadii::uniform(e, lo, grid)
}
