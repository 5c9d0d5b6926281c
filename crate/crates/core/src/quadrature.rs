//! Quadrature rules on intervals, circles, annuli and hole domains, plus the
//! sampled Hölder seminorm estimator.

use std::f64::consts::PI;

use crate::geometry::HoleDomain;
use crate::Vec2;

/// Gauss–Legendre nodes and weights on `[-1, 1]`.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 1.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre_with_derivative(n, x);
        if d != 0.0 {
            dp = d;
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Weighted points `(x, w)` covering a region.
#[derive(Debug, Clone, Default)]
pub struct PointRule {
    pub points: Vec<Vec2>,
    pub weights: Vec<f64>,
}

impl PointRule {
    pub fn integrate(&self, f: impl Fn(&Vec2) -> f64) -> f64 {
        self.points.iter().zip(&self.weights).map(|(p, w)| w * f(p)).sum()
    }

    pub fn total_weight(&self) -> f64 {
        self.weights.iter().sum()
    }

    fn extend(&mut self, other: PointRule, sign: f64) {
        self.points.extend(other.points);
        self.weights.extend(other.weights.into_iter().map(|w| sign * w));
    }
}

/// Polar tensor rule on the annulus `rho_in < |x − c| < rho_out`:
/// Gauss–Legendre in the radius, uniform midpoints in the angle.
pub fn annulus_rule(center: Vec2, rho_in: f64, rho_out: f64, n_r: usize, n_theta: usize) -> PointRule {
    let (xs, ws) = gauss_legendre(n_r);
    let half = 0.5 * (rho_out - rho_in);
    let mid = 0.5 * (rho_out + rho_in);
    let dtheta = 2.0 * PI / n_theta as f64;
    let mut rule = PointRule::default();
    for (x, w) in xs.iter().zip(&ws) {
        let r = mid + half * x;
        for j in 0..n_theta {
            let th = (j as f64 + 0.5) * dtheta;
            rule.points.push(center + r * crate::unit(th));
            rule.weights.push(w * half * r * dtheta);
        }
    }
    rule
}

/// Rule on the full disk `|x − c| < rho`.
pub fn disk_rule(center: Vec2, rho: f64, n_r: usize, n_theta: usize) -> PointRule {
    annulus_rule(center, 0.0, rho, n_r, n_theta)
}

/// Rule for integrands defined on all of `B(z0, r0)`: the outer disk rule
/// with the hole disk rules subtracted (negative weights). Exact for
/// polynomials up to the resolved degree.
pub fn subtractive_rule(dom: &HoleDomain, n_r: usize, n_theta: usize) -> PointRule {
    let mut rule = disk_rule(dom.outer.center, dom.outer.radius, n_r, n_theta);
    for h in &dom.holes {
        rule.extend(disk_rule(h.center, h.radius, n_r, n_theta), -1.0);
    }
    rule
}

/// Rule for integrands defined only on `E`: exact polar rules on the collars
/// `r_k < |x − z_k| < r_k + d` plus the outer polar grid with collar disks
/// masked out.
pub fn domain_rule(dom: &HoleDomain, n_r: usize, n_theta: usize) -> PointRule {
    let collar = dom.d;
    let outer = disk_rule(dom.outer.center, dom.outer.radius, n_r, n_theta);
    let mut rule = PointRule::default();
    for (p, w) in outer.points.into_iter().zip(outer.weights) {
        let masked = dom.holes.iter().any(|h| (p - h.center).norm() < h.radius + collar);
        if !masked {
            rule.points.push(p);
            rule.weights.push(w);
        }
    }
    let per_hole_r = (n_r / 4).max(8);
    for h in &dom.holes {
        let n_th = ((n_theta as f64) * (h.radius + collar) / dom.outer.radius).ceil() as usize;
        rule.extend(annulus_rule(h.center, h.radius, h.radius + collar, per_hole_r, n_th.max(64)), 1.0);
    }
    rule
}

/// Composite periodic trapezoid rule on `[0, 2π)`, doubled from 64 points
/// until successive values agree to `rel_tol` relative to `∫|f|` (at most
/// `2^22` points).
pub fn periodic_trapezoid(f: impl Fn(f64) -> f64, rel_tol: f64) -> f64 {
    let mut n = 64usize;
    let sum = |n: usize, offset: usize, stride: usize| -> (f64, f64) {
        (offset..n).step_by(stride).fold((0.0, 0.0), |(s, a), k| {
            let v = f(2.0 * PI * k as f64 / n as f64);
            (s + v, a + v.abs())
        })
    };
    let (mut total, mut abs_total) = sum(n, 0, 1);
    let mut value = total * 2.0 * PI / n as f64;
    while n < 1 << 22 {
        // new points are the odd indices of the refined grid
        let (fresh, fresh_abs) = sum(2 * n, 1, 2);
        total += fresh;
        abs_total += fresh_abs;
        n *= 2;
        let next = total * 2.0 * PI / n as f64;
        let scale = abs_total * 2.0 * PI / n as f64;
        let done = (next - value).abs() <= rel_tol * scale.max(f64::MIN_POSITIVE);
        value = next;
        if done && n >= 256 {
            break;
        }
    }
    value
}

/// Sampled surrogate of the Hölder seminorm `[g]_{0,α}` of a 2π-periodic
/// function: max of `|g(s) − g(t)| / |s − t|^α` over all pairs of `samples`
/// uniform points, with periodic distance.
pub fn holder_seminorm_periodic(g: impl Fn(f64) -> f64, alpha: f64, samples: usize) -> f64 {
    let h = 2.0 * PI / samples as f64;
    let vals: Vec<f64> = (0..samples).map(|k| g(k as f64 * h)).collect();
    let mut best: f64 = 0.0;
    for i in 0..samples {
        for j in i + 1..samples {
            let k = (j - i).min(samples - (j - i));
            let dist = k as f64 * h;
            best = best.max((vals[i] - vals[j]).abs() / dist.powf(alpha));
        }
    }
    best
}

/// Hölder seminorm surrogate for values attached to arbitrary planar points.
pub fn holder_seminorm_points(points: &[Vec2], values: &[f64], alpha: f64) -> f64 {
    let mut best: f64 = 0.0;
    for i in 0..points.len() {
        for j in i + 1..points.len() {
            let dist = (points[i] - points[j]).norm();
            if dist > 0.0 {
                best = best.max((values[i] - values[j]).abs() / dist.powf(alpha));
            }
        }
    }
    best
}
