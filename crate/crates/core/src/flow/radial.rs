use std::f64::consts::PI;

use crate::{Error, Mat2, Result, Vec2};

/// `u(a + r e^{iθ}) = z + √(L² + r²) e^{iθ}` on `ε ≤ r ≤ R`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RadialCavityMap {
    pub a: Vec2,
    pub z: Vec2,
    pub l: f64,
    pub pad: f64,
    pub eps: f64,
}

/// Relative slack on the annulus bounds.
const EDGE_TOL: f64 = 1e-12;

impl RadialCavityMap {
    pub fn new(a: Vec2, z: Vec2, l: f64, pad: f64, eps: f64) -> Result<Self> {
        if !(eps > 0.0 && eps < pad) || !(l >= 0.0) {
            return Err(Error::InvalidInput(format!(
                "radial map needs 0 < ε < R and L ≥ 0, got ε = {eps}, R = {pad}, L = {l}"
            )));
        }
        Ok(Self { a, z, l, pad, eps })
    }

    fn polar(&self, x: &Vec2) -> Result<(f64, Vec2)> {
        let d = x - self.a;
        let r = d.norm();
        if r < self.eps * (1.0 - EDGE_TOL) || r > self.pad * (1.0 + EDGE_TOL) {
            return Err(Error::OutsideDomain(format!("|x − a| = {r} outside [{}, {}]", self.eps, self.pad)));
        }
        Ok((r, d / r))
    }

    pub fn eval(&self, x: &Vec2) -> Result<Vec2> {
        let (r, e) = self.polar(x)?;
        Ok(self.z + (self.l * self.l + r * r).sqrt() * e)
    }

    /// `Du = (r/√(L²+r²)) e⊗e + √(1 + L²/r²) e⊥⊗e⊥`.
    pub fn grad(&self, x: &Vec2) -> Result<Mat2> {
        let (r, e) = self.polar(x)?;
        let et = Vec2::new(-e.y, e.x);
        let s = (self.l * self.l + r * r).sqrt();
        Ok((r / s) * e * e.transpose() + (s / r) * et * et.transpose())
    }

    /// Radius of the image of `∂B(a, R)`.
    pub fn outer_image_radius(&self) -> f64 {
        (self.l * self.l + self.pad * self.pad).sqrt()
    }

    pub fn energy(&self) -> Result<f64> {
        radial_annulus_energy(self.l, self.pad, self.eps)
    }
}

/// `∫_{ε<|x−a|<R} |Du|²/2` for the radial cavity map, in closed form:
/// `π(R² − ε²) − (πL²/2) ln((L² + R²)/(L² + ε²)) + πL² ln(R/ε)`.
pub fn radial_annulus_energy(l: f64, r: f64, eps: f64) -> Result<f64> {
    if !(eps > 0.0 && eps < r) {
        return Err(Error::InvalidInput(format!("need 0 < ε < R, got ε = {eps}, R = {r}")));
    }
    let l2 = l * l;
    Ok(PI * (r * r - eps * eps) - 0.5 * PI * l2 * ((l2 + r * r) / (l2 + eps * eps)).ln() + PI * l2 * (r / eps).ln())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrature::gauss_legendre;
    use crate::vec2;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn zero_cavity_is_a_shift() {
        let m = RadialCavityMap::new(vec2(0.2, 0.1), vec2(0.5, -0.3), 0.0, 0.3, 0.01).unwrap();
        let x = vec2(0.3, 0.2);
        assert!((m.eval(&x).unwrap() - (vec2(0.5, -0.3) + x - vec2(0.2, 0.1))).norm() < 1e-15);
        assert!((m.grad(&x).unwrap() - Mat2::identity()).norm() < 1e-15);
    }

    #[test]
    fn unit_stretch_singular_values() {
        let m = RadialCavityMap::new(Vec2::zeros(), Vec2::zeros(), 1.0, 2.0, 0.1).unwrap();
        let x = vec2(0.6, 0.8);
        assert!((m.eval(&x).unwrap().norm() - 2f64.sqrt()).abs() < 1e-15);
        let sv = m.grad(&x).unwrap().singular_values();
        let (lo, hi) = (sv.min(), sv.max());
        assert!((lo - 0.5f64.sqrt()).abs() < 1e-15 && (hi - 2f64.sqrt()).abs() < 1e-14);
    }

    #[test]
    fn unit_determinant() {
        let m = RadialCavityMap::new(vec2(0.1, 0.0), vec2(0.2, 0.0), 0.7, 0.4, 0.01).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..1000 {
            let r = rng.gen_range(0.01..0.4);
            let th = rng.gen_range(0.0..2.0 * PI);
            let x = m.a + r * crate::unit(th);
            let g = m.grad(&x).unwrap();
            // roundoff in ad − bc scales with the squared entries
            assert!((g.determinant() - 1.0).abs() < 1e-14 * g.norm_squared());
        }
        assert!(m.eval(&vec2(0.1, 0.0)).is_err());
    }

    #[test]
    fn closed_form_matches_quadrature() {
        let (l, r, eps): (f64, f64, f64) = (1.0, 1.0, 0.1);
        let exact = radial_annulus_energy(l, r, eps).unwrap();
        // Gauss–Legendre in ln r
        let (xs, ws) = gauss_legendre(60);
        let (a, b) = (eps.ln(), r.ln());
        let q: f64 = xs
            .iter()
            .zip(&ws)
            .map(|(x, w)| {
                let s = 0.5 * (b - a) * x + 0.5 * (a + b);
                let rr = s.exp();
                let dens = rr * rr / (l * l + rr * rr) + (l * l + rr * rr) / (rr * rr);
                w * 0.5 * (b - a) * PI * dens * rr * rr
            })
            .sum();
        assert!((exact - q).abs() < 1e-12 * exact);
        assert!(exact <= PI * (1.0 - 0.01) + PI * 10f64.ln());
        assert!((radial_annulus_energy(0.0, 1.0, 0.1).unwrap() - PI * 0.99).abs() < 1e-14);
    }

    #[test]
    fn log_slope() {
        let l: f64 = 0.8;
        let e1 = radial_annulus_energy(l, 0.5, 1e-3).unwrap();
        let e2 = radial_annulus_energy(l, 0.5, 5e-4).unwrap();
        let slope = (e2 - e1) / 2f64.ln();
        assert!((slope - PI * l * l).abs() < 1e-5);
    }
}
