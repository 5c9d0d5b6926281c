//! Poisson-kernel operators on the exterior of the unit disk.

use std::f64::consts::PI;

use crate::quadrature::periodic_trapezoid;
use crate::{Error, Result, Vec2};

const REL_TOL: f64 = 1e-15;

/// `r² + 1 − 2r cos τ`, written without cancellation near `r = 1, τ = 0`.
fn kernel_denominator(r: f64, tau: f64) -> f64 {
    let s = (0.5 * tau).sin();
    (r - 1.0).powi(2) + 4.0 * r * s * s
}

/// `u(re^{iφ}) = (1 − r²)/2π ∮ g(τ) dτ / |x − e^{iτ}|²` for `|x| > 1`.
///
/// With `g ≡ 1` this is `−1`.
pub fn poisson_op(g: impl Fn(f64) -> f64, x: &Vec2) -> Result<f64> {
    let r = x.norm();
    if !(r > 1.0) {
        return Err(Error::OutsideDomain(format!("poisson_op needs |x| > 1, got {r}")));
    }
    let phi = x.y.atan2(x.x);
    let v = periodic_trapezoid(|tau| g(tau) / kernel_denominator(r, tau - phi), REL_TOL);
    Ok((1.0 - r * r) / (2.0 * PI) * v)
}

/// `ω(r, φ) = ∮ g(τ + φ) r sin τ dτ / (r² + 1 − 2r cos τ)` for `r > 1`.
pub fn omega_op(g: impl Fn(f64) -> f64, x: &Vec2) -> Result<f64> {
    let r = x.norm();
    if !(r > 1.0) {
        return Err(Error::OutsideDomain(format!("omega_op needs |x| > 1, got {r}")));
    }
    let phi = x.y.atan2(x.x);
    Ok(periodic_trapezoid(|tau| g(tau + phi) * r * tau.sin() / kernel_denominator(r, tau), REL_TOL))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::vec2;

    #[test]
    fn poisson_constant_and_zero() {
        for r in [1.5, 2.0, 3.0] {
            let v = poisson_op(|_| 1.0, &vec2(0.0, r)).unwrap();
            assert!((v + 1.0).abs() < 1e-12);
        }
        assert_eq!(poisson_op(|_| 0.0, &vec2(2.0, 0.0)).unwrap(), 0.0);
        assert!(poisson_op(|_| 1.0, &vec2(0.5, 0.0)).is_err());
    }

    #[test]
    fn poisson_cosine_near_the_circle() {
        // exterior harmonic extension of cos τ is cos φ / r; the kernel carries (1 − r²)
        let r = 1.0 + 1e-4;
        let v = poisson_op(f64::cos, &vec2(r, 0.0)).unwrap();
        assert!((v + 1.0 / r).abs() < 1e-9);
    }

    #[test]
    fn omega_values() {
        assert!(omega_op(|_| 2.0, &vec2(1.5, 0.0)).unwrap().abs() < 1e-13);
        let v = omega_op(f64::sin, &vec2(2.0, 0.0)).unwrap();
        assert!((v - PI / 2.0).abs() < 1e-12);
        assert!(omega_op(f64::sin, &vec2(1.0, 0.0)).is_err());
    }
}
