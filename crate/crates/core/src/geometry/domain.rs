use std::f64::consts::PI;

use super::{Evolution, PadRadii, SEPARATION_MARGIN};
use crate::{Error, Result, Vec2};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Circle {
    pub center: Vec2,
    pub radius: f64,
}

impl Circle {
    pub fn new(center: Vec2, radius: f64) -> Self {
        Self { center, radius }
    }

    pub fn point(&self, theta: f64) -> Vec2 {
        self.center + self.radius * crate::unit(theta)
    }
}

/// A disk with `n` closed disks removed: `B(z0, r0) \ ∪ B̄(z_k, r_k)`.
///
/// `d` is the separation scale: the closed disks `B̄(z_k, r_k + d)` are
/// pairwise disjoint, contained in `B(z0, r0 − d)`, and `r_k ≥ d`.
#[derive(Debug, Clone, PartialEq)]
pub struct HoleDomain {
    pub outer: Circle,
    pub holes: Vec<Circle>,
    pub d: f64,
    pub delta: f64,
}

impl HoleDomain {
    /// Builds the domain and checks disjointness, containment and the
    /// `d`-collar property. `delta` is taken as `F(E)` itself.
    pub fn new(outer: Circle, holes: Vec<Circle>, d: f64) -> Result<Self> {
        let mut dom = Self { outer, holes, d, delta: 0.0 };
        dom.check(0.0)?;
        dom.delta = dom.shape_constant();
        Ok(dom)
    }

    /// Largest `d` for which the collar property holds (holes only need
    /// `r_k ≥ d`, collars disjoint and inside).
    pub fn with_max_separation(outer: Circle, holes: Vec<Circle>) -> Result<Self> {
        let mut d = f64::INFINITY;
        for (k, h) in holes.iter().enumerate() {
            d = d.min(h.radius);
            d = d.min(0.5 * (outer.radius - (h.center - outer.center).norm() - h.radius));
            for g in &holes[k + 1..] {
                d = d.min(0.5 * ((h.center - g.center).norm() - h.radius - g.radius));
            }
        }
        if holes.is_empty() {
            d = 0.5 * outer.radius;
        }
        Self::new(outer, holes, d)
    }

    pub fn n_holes(&self) -> usize {
        self.holes.len()
    }

    /// Circle `0` is the outer boundary, `1..=n` the holes.
    pub fn circle(&self, k: usize) -> &Circle {
        if k == 0 {
            &self.outer
        } else {
            &self.holes[k - 1]
        }
    }

    pub fn circles(&self) -> impl Iterator<Item = &Circle> {
        std::iter::once(&self.outer).chain(self.holes.iter())
    }

    pub fn area(&self) -> f64 {
        PI * (self.outer.radius.powi(2) - self.holes.iter().map(|h| h.radius.powi(2)).sum::<f64>())
    }

    /// `F(E) = (1/2r0) min(min boundary distance, min r_i)`; the boundary
    /// distances include hole–outer distances.
    pub fn shape_constant(&self) -> f64 {
        let mut m = f64::INFINITY;
        for (k, h) in self.holes.iter().enumerate() {
            m = m.min(h.radius);
            m = m.min(self.outer.radius - (h.center - self.outer.center).norm() - h.radius);
            for g in &self.holes[k + 1..] {
                m = m.min((h.center - g.center).norm() - h.radius - g.radius);
            }
        }
        if self.holes.is_empty() {
            m = self.outer.radius;
        }
        m / (2.0 * self.outer.radius)
    }

    /// Signed distance to `∂E`, positive inside `E`.
    pub fn signed_distance(&self, x: &Vec2) -> f64 {
        let mut s = self.outer.radius - (x - self.outer.center).norm();
        for h in &self.holes {
            s = s.min((x - h.center).norm() - h.radius);
        }
        s
    }

    pub fn contains(&self, x: &Vec2, tol: f64) -> bool {
        self.signed_distance(x) >= -tol
    }

    /// Index of the boundary circle nearest to `x` and the signed distance.
    pub fn nearest_circle(&self, x: &Vec2) -> (usize, f64) {
        let mut best = (0, self.outer.radius - (x - self.outer.center).norm());
        for (k, h) in self.holes.iter().enumerate() {
            let s = (x - h.center).norm() - h.radius;
            if s < best.1 {
                best = (k + 1, s);
            }
        }
        best
    }

    /// Verify disjointness/containment (strict, margin `1e-12·r0`) and the
    /// `d`-collar property relaxed by `rel_tol·d`.
    pub fn check(&self, rel_tol: f64) -> Result<()> {
        let r0 = self.outer.radius;
        let margin = SEPARATION_MARGIN * r0;
        let slack = rel_tol * self.d;
        if !(r0 > 0.0) || !(self.d > 0.0) {
            return Err(Error::Geometry(format!("outer radius {r0} and separation d = {} must be positive", self.d)));
        }
        for (k, h) in self.holes.iter().enumerate() {
            if !(h.radius > 0.0) {
                return Err(Error::Geometry(format!("hole {} has radius {}", k + 1, h.radius)));
            }
            let clear = r0 - (h.center - self.outer.center).norm() - h.radius;
            if clear <= margin {
                return Err(Error::Geometry(format!(
                    "hole {} is not inside the outer disk (clearance {clear:e})",
                    k + 1
                )));
            }
            if clear < 2.0 * self.d - slack {
                return Err(Error::Geometry(format!(
                    "collar of hole {} meets the outer boundary (clearance {clear:e} < 2d = {:e})",
                    k + 1,
                    2.0 * self.d
                )));
            }
            if h.radius < self.d - slack {
                return Err(Error::Geometry(format!("hole {} radius {} is below d = {}", k + 1, h.radius, self.d)));
            }
            for (j, g) in self.holes.iter().enumerate().skip(k + 1) {
                let gap = (h.center - g.center).norm() - h.radius - g.radius;
                if gap <= margin {
                    return Err(Error::Geometry(format!("holes {} and {} overlap (gap {gap:e})", k + 1, j + 1)));
                }
                if gap < 2.0 * self.d - slack {
                    return Err(Error::Geometry(format!(
                        "collars of holes {} and {} overlap (gap {gap:e} < 2d = {:e})",
                        k + 1,
                        j + 1,
                        2.0 * self.d
                    )));
                }
            }
        }
        Ok(())
    }
}

/// Relative slack on the `d`-collar property at off-grid times.
const COLLAR_SLACK: f64 = 1e-3;

/// The moving domain `E(t) = B(0, t R0) \ ∪ B̄(z_i(t), r_i(t))`.
pub fn domain_at(e: &Evolution, pads: &PadRadii, t: f64) -> Result<HoleDomain> {
    let tol = 1e-12 * e.lambda();
    if !(t >= 1.0 - tol && t <= e.lambda() + tol) {
        return Err(Error::InvalidInput(format!("t = {t} outside [1, {}]", e.lambda())));
    }
    let outer = Circle::new(Vec2::zeros(), t * e.r0());
    let holes = (0..e.len()).map(|i| Circle::new(e.center(i, t), pads.padded_radius(e, i, t))).collect();
    let dom = HoleDomain { outer, holes, d: pads.d, delta: pads.delta };
    dom.check(COLLAR_SLACK)?;
    Ok(dom)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{choose_pads, straight_line_evolution, Configuration};
    use crate::vec2;

    fn centered() -> (Evolution, PadRadii) {
        let cfg = Configuration::new(1.0, vec![vec2(0.0, 0.0)], vec![3.0 * PI]).unwrap();
        let e = straight_line_evolution(&cfg).unwrap();
        let grid = e.uniform_grid(64);
        let pads = PadRadii::uniform(&e, 0.1, &grid).unwrap();
        (e, pads)
    }

    #[test]
    fn radii_at_endpoints() {
        let (e, pads) = centered();
        let d1 = domain_at(&e, &pads, 1.0).unwrap();
        assert_eq!(d1.holes[0].radius, 0.1);
        let dl = domain_at(&e, &pads, 2.0).unwrap();
        assert!((dl.holes[0].radius - (3.0f64 + 0.01).sqrt()).abs() < 1e-14);
        let dm = domain_at(&e, &pads, 2f64.sqrt()).unwrap();
        assert!((dm.holes[0].radius - 1.004987562112089).abs() < 1e-12);
        assert!((dm.outer.radius - 2f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn shape_constant_dominates_delta_on_grid() {
        let v = 0.25 * PI;
        let cfg = Configuration::new(1.0, vec![vec2(-0.5, 0.0), vec2(0.5, 0.0)], vec![v, v]).unwrap();
        let e = straight_line_evolution(&cfg).unwrap();
        let grid = e.uniform_grid(64);
        let pads = choose_pads(&e, &grid).unwrap();
        for &t in &grid {
            let dom = domain_at(&e, &pads, t).unwrap();
            assert!(dom.shape_constant() >= pads.delta * (1.0 - 1e-9), "t = {t}");
        }
    }

    #[test]
    fn overlapping_holes_name_the_pair() {
        let outer = Circle::new(Vec2::zeros(), 1.0);
        let holes = vec![Circle::new(vec2(-0.2, 0.0), 0.25), Circle::new(vec2(0.2, 0.0), 0.25)];
        let err = HoleDomain::new(outer, holes, 0.01).unwrap_err();
        assert!(err.to_string().contains("holes 1 and 2"));
    }

    #[test]
    fn out_of_range_time_is_rejected() {
        let (e, pads) = centered();
        assert!(domain_at(&e, &pads, 2.5).is_err());
        assert!(domain_at(&e, &pads, 0.5).is_err());
    }

    #[test]
    fn signed_distance_sign() {
        let dom =
            HoleDomain::with_max_separation(Circle::new(Vec2::zeros(), 1.0), vec![Circle::new(vec2(0.3, 0.0), 0.2)])
                .unwrap();
        assert!(dom.signed_distance(&vec2(-0.5, 0.0)) > 0.0);
        assert!(dom.signed_distance(&vec2(0.3, 0.0)) < 0.0);
        assert!(dom.signed_distance(&vec2(1.5, 0.0)) < 0.0);
        assert_eq!(dom.nearest_circle(&vec2(0.3, 0.25)).0, 1);
    }
}
