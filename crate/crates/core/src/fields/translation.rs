use super::CutoffProfile;
use crate::geometry::{Circle, HoleDomain};
use crate::{Error, Mat2, Result, Vec2};

/// `ṽ = D⊥w` with stream function
/// `w(y) = Σ_i η((|y − z_i| − r_i)/d) (V_i,x (y − z_i)_y − V_i,y (y − z_i)_x)`.
///
/// Equals the translation velocity `V_i` on the hole circles and vanishes
/// outside the `d`-collars. Since `η′(0) = η″(0) = 0` its Jacobian vanishes
/// on the hole circles.
#[derive(Debug, Clone)]
pub struct TranslationField {
    pub holes: Vec<Circle>,
    pub velocities: Vec<Vec2>,
    pub d: f64,
    pub profile: CutoffProfile,
}

pub fn build_translation_field(dom: &HoleDomain, velocities: &[Vec2]) -> Result<TranslationField> {
    if velocities.len() != dom.n_holes() {
        return Err(Error::InvalidInput(format!("{} velocities for {} holes", velocities.len(), dom.n_holes())));
    }
    // collars must be disjoint and inside the outer disk
    HoleDomain::new(dom.outer, dom.holes.clone(), dom.d)?;
    Ok(TranslationField { holes: dom.holes.clone(), velocities: velocities.to_vec(), d: dom.d, profile: CutoffProfile })
}

impl TranslationField {
    /// Index of the hole whose collar contains `x` (or whose disk does).
    fn active(&self, x: &Vec2) -> Option<usize> {
        self.holes.iter().position(|h| (x - h.center).norm() < h.radius + self.d)
    }

    /// Value, gradient and Hessian of the stream function.
    pub fn stream(&self, x: &Vec2) -> (f64, Vec2, Mat2) {
        let Some(i) = self.active(x) else {
            return (0.0, Vec2::zeros(), Mat2::zeros());
        };
        let h = &self.holes[i];
        let v = self.velocities[i];
        let dy = x - h.center;
        let rho = dy.norm();
        let grad_l = Vec2::new(-v.y, v.x);
        let l = grad_l.dot(&dy);
        let (eta, e1, e2) = self.profile.eval((rho - h.radius) / self.d);
        if e1 == 0.0 && e2 == 0.0 {
            return (eta * l, eta * grad_l, Mat2::zeros());
        }
        let e = dy / rho;
        let ee = e * e.transpose();
        let grad = e1 / self.d * l * e + eta * grad_l;
        let hess = e2 / (self.d * self.d) * l * ee
            + e1 / self.d * (l * (Mat2::identity() - ee) / rho + e * grad_l.transpose() + grad_l * e.transpose());
        (eta * l, grad, hess)
    }

    pub fn eval(&self, x: &Vec2) -> Vec2 {
        let (_, g, _) = self.stream(x);
        Vec2::new(g.y, -g.x)
    }

    pub fn jacobian(&self, x: &Vec2) -> Mat2 {
        let (_, _, h) = self.stream(x);
        perp_jacobian(&h)
    }

    /// Velocity and Jacobian.
    pub fn eval_with_jacobian(&self, x: &Vec2) -> (Vec2, Mat2) {
        let (_, g, h) = self.stream(x);
        (Vec2::new(g.y, -g.x), perp_jacobian(&h))
    }
}

/// Jacobian of `D⊥ψ = (ψ_y, −ψ_x)` from the Hessian of `ψ`.
pub(crate) fn perp_jacobian(h: &Mat2) -> Mat2 {
    Mat2::new(h[(0, 1)], h[(1, 1)], -h[(0, 0)], -h[(0, 1)])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::vec2;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::PI;

    fn field() -> TranslationField {
        let dom = HoleDomain::new(
            Circle::new(Vec2::zeros(), 1.0),
            vec![Circle::new(vec2(0.4, 0.0), 0.2), Circle::new(vec2(-0.4, 0.1), 0.15)],
            0.1,
        )
        .unwrap();
        build_translation_field(&dom, &[vec2(0.3, -0.2), vec2(-0.1, 0.5)]).unwrap()
    }

    #[test]
    fn boundary_velocity_and_vanishing_jacobian() {
        let f = field();
        for (i, h) in f.holes.iter().enumerate() {
            for j in 0..64 {
                let p = h.point(2.0 * PI * j as f64 / 64.0);
                assert!((f.eval(&p) - f.velocities[i]).norm() < 1e-15);
                assert!(f.jacobian(&p).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn compact_support() {
        let f = field();
        assert_eq!(f.eval(&vec2(0.4, 0.31)), Vec2::zeros());
        assert_eq!(f.eval(&vec2(0.0, 0.8)), Vec2::zeros());
    }

    #[test]
    fn divergence_free_in_collars() {
        let f = field();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..1000 {
            let i = rng.gen_range(0..2);
            let h = f.holes[i];
            let r = h.radius + f.d * rng.gen::<f64>();
            let p = h.point(rng.gen_range(0.0..2.0 * PI));
            let p = h.center + (p - h.center) * (r / h.radius);
            let div = f.jacobian(&p).trace();
            assert!(div.abs() <= 1e-10 * f.velocities[i].norm() / f.d);
        }
    }

    #[test]
    fn jacobian_matches_finite_differences() {
        let f = field();
        let h = 1e-5;
        for p in [vec2(0.4, 0.25), vec2(-0.4, -0.12), vec2(0.53, 0.1)] {
            let jx = (f.eval(&(p + vec2(h, 0.0))) - f.eval(&(p - vec2(h, 0.0)))) / (2.0 * h);
            let jy = (f.eval(&(p + vec2(0.0, h))) - f.eval(&(p - vec2(0.0, h)))) / (2.0 * h);
            let j = f.jacobian(&p);
            assert!((j.column(0) - jx).norm() < 1e-5 * j.norm().max(1.0));
            assert!((j.column(1) - jy).norm() < 1e-5 * j.norm().max(1.0));
        }
    }
}
