//! Neumann Green's function of the disk `B(0, R)`.

use std::f64::consts::PI;

use crate::{Error, Result, Vec2};

/// Fundamental solution `Φ(z) = −(1/2π) log|z|`.
pub fn fundamental(z: &Vec2) -> f64 {
    -z.norm().ln() / (2.0 * PI)
}

/// Reflection `x* = R² x / |x|²` across the circle `|x| = R`.
pub fn reflect(x: &Vec2, r: f64) -> Vec2 {
    x * (r * r / x.norm_squared())
}

/// Corrector `φ^x(y) = (1/2π) ln|y − x*| − |y|²/(4πR²)`.
///
/// Satisfies `−Δ_y φ^x = 1/(πR²)` in the disk and matches the normal
/// derivative of `Φ(y − x)` on `|y| = R`. Undefined for `x = 0`.
pub fn corrector(x: &Vec2, y: &Vec2, r: f64) -> Result<f64> {
    if x.norm_squared() == 0.0 {
        return Err(Error::Singular("corrector is undefined at x = 0".into()));
    }
    let xs = reflect(x, r);
    Ok((y - xs).norm().ln() / (2.0 * PI) - y.norm_squared() / (4.0 * PI * r * r))
}

/// `G_N(x, y) = Φ(y − x) − φ^x(y)` for `x, y ∈ B(0, R)`, `x ≠ y`, `x ≠ 0`.
pub fn green_neumann_disk(x: &Vec2, y: &Vec2, r: f64) -> Result<f64> {
    if x == y {
        return Err(Error::Singular("G_N(x, x) is singular".into()));
    }
    if !(x.norm() < r && y.norm() < r) {
        return Err(Error::OutsideDomain(format!("G_N needs both points in B(0, {r})")));
    }
    Ok(fundamental(&(y - x)) - corrector(x, y, r)?)
}

/// Normal derivative of `y ↦ G_N(x, y)` at a point `y` of `|y| = R`,
/// by the fourth-order central difference with step `h` along `y/|y|`.
/// Both terms extend smoothly across the circle, so the stencil may leave
/// the disk.
pub fn green_neumann_flux_fd(x: &Vec2, y: &Vec2, r: f64, h: f64) -> Result<f64> {
    let nu = y / y.norm();
    let g = |s: f64| -> Result<f64> {
        let p = y + s * nu;
        Ok(fundamental(&(p - x)) - corrector(x, &p, r)?)
    };
    Ok((-g(2.0 * h)? + 8.0 * g(h)? - 8.0 * g(-h)? + g(-2.0 * h)?) / (12.0 * h))
}

/// Both sides of `|x1| |x2 − x1*| = |x2| |x1 − x2*|`.
pub fn reflection_identity_sides(x1: &Vec2, x2: &Vec2, r: f64) -> (f64, f64) {
    (x1.norm() * (x2 - reflect(x1, r)).norm(), x2.norm() * (x1 - reflect(x2, r)).norm())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::vec2;

    #[test]
    fn asymmetry_matches_reflection_identity() {
        let r = 1.0;
        let (x, y) = (vec2(0.3, -0.1), vec2(-0.45, 0.5));
        let diff = green_neumann_disk(&x, &y, r).unwrap() - green_neumann_disk(&y, &x, r).unwrap();
        // G(x,y) − G(y,x) = (1/2π)(ln|x| − ln|y|) + (|y|² − |x|²)/(4πR²)
        let expected =
            (x.norm().ln() - y.norm().ln()) / (2.0 * PI) + (y.norm_squared() - x.norm_squared()) / (4.0 * PI * r * r);
        assert!((diff - expected).abs() < 1e-14);
    }

    #[test]
    fn neumann_flux_vanishes_on_circle() {
        let r = 2.0;
        let x = vec2(0.7, -1.1);
        for k in 0..16 {
            let y = r * crate::unit(0.4 * k as f64);
            assert!(green_neumann_flux_fd(&x, &y, r, 1e-4).unwrap().abs() < 1e-10);
        }
    }

    #[test]
    fn singular_inputs() {
        let x = vec2(0.2, 0.1);
        assert!(matches!(green_neumann_disk(&x, &x, 1.0), Err(Error::Singular(_))));
        assert!(green_neumann_disk(&Vec2::zeros(), &x, 1.0).is_err());
        assert!(green_neumann_disk(&x, &vec2(2.0, 0.0), 1.0).is_err());
    }
}
