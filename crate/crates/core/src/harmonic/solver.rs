use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use super::{BoundaryData, CircleData};
use crate::geometry::{Circle, HoleDomain};
use crate::quadrature::periodic_trapezoid;
use crate::{Error, Mat2, Result, Vec2};

/// Tolerance for the flux compatibility condition, relative to
/// `2π r0 ‖g‖∞`.
pub const COMPATIBILITY_TOL: f64 = 1e-10;

/// Truncation control. The solve starts at `modes` and raises the order by
/// half until the Neumann residual drops below `rel_tol·‖g‖∞` or the order
/// would exceed `max_modes`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverOptions {
    /// Initial multipole truncation order `M` per circle.
    pub modes: usize,
    pub max_modes: usize,
    /// Acceptable Neumann residual relative to `‖g‖∞`.
    pub rel_tol: f64,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self { modes: 16, max_modes: 128, rel_tol: 1e-9 }
    }
}

impl SolverOptions {
    /// Fixed order `m`, no refinement.
    pub fn fixed(m: usize) -> Self {
        Self { modes: m, max_modes: m, rel_tol: 1e-9 }
    }
}

/// Neumann-harmonic function on a [`HoleDomain`]:
///
/// `u = Σ_k q_k ln|x − z_k| + Σ_k Σ_m Re(c_km (r_k/(x − z_k))^m)
///      + Σ_m Re(b_m ((x − z0)/r0)^m) + const`.
#[derive(Debug, Clone)]
pub struct HarmonicSolution {
    outer: Circle,
    holes: Vec<Circle>,
    /// Log strengths per hole.
    pub log_strengths: Vec<f64>,
    /// Exterior multipoles per hole, orders `1..=M`.
    pub hole_coeffs: Vec<Vec<Complex64>>,
    /// Interior Fourier coefficients about the outer centre, orders `1..=M`.
    pub outer_coeffs: Vec<Complex64>,
    pub constant: f64,
    /// Max Neumann residual over the collocation points.
    pub residual: f64,
    /// Ratio of largest to smallest diagonal entry of the QR factor.
    pub condition: f64,
}

/// Values of the holomorphic part `F` with `u = Re F + const`.
struct Holo {
    f: Complex64,
    df: Complex64,
    d2f: Complex64,
}

impl HarmonicSolution {
    /// The zero function on `dom`.
    pub fn zero(dom: &HoleDomain) -> Self {
        Self {
            outer: dom.outer,
            holes: dom.holes.clone(),
            log_strengths: vec![0.0; dom.n_holes()],
            hole_coeffs: vec![Vec::new(); dom.n_holes()],
            outer_coeffs: Vec::new(),
            constant: 0.0,
            residual: 0.0,
            condition: 1.0,
        }
    }

    pub fn modes(&self) -> usize {
        self.outer_coeffs.len()
    }

    fn holo(&self, x: &Vec2, order: usize) -> Holo {
        let z = Complex64::new(x.x, x.y);
        let mut h = Holo { f: Complex64::new(0.0, 0.0), df: Complex64::new(0.0, 0.0), d2f: Complex64::new(0.0, 0.0) };
        for (k, hole) in self.holes.iter().enumerate() {
            let dz = z - Complex64::new(hole.center.x, hole.center.y);
            let q = self.log_strengths[k];
            if q != 0.0 {
                h.f += q * dz.norm().ln();
                let inv = dz.inv();
                h.df += q * inv;
                if order > 1 {
                    h.d2f -= q * inv * inv;
                }
            }
            let coeffs = &self.hole_coeffs[k];
            if coeffs.is_empty() {
                continue;
            }
            let r = hole.radius;
            let w = r / dz;
            let mut wm = w;
            let (mut s0, mut s1, mut s2) = (Complex64::default(), Complex64::default(), Complex64::default());
            for (i, c) in coeffs.iter().enumerate() {
                let m = (i + 1) as f64;
                let t = c * wm;
                s0 += t;
                s1 += m * t;
                s2 += m * (m + 1.0) * t;
                wm *= w;
            }
            h.f += s0;
            // d w^m/dx = −m w^{m+1}/r
            h.df -= s1 * w / r;
            if order > 1 {
                h.d2f += s2 * w * w / (r * r);
            }
        }
        if !self.outer_coeffs.is_empty() {
            let r0 = self.outer.radius;
            let s = (z - Complex64::new(self.outer.center.x, self.outer.center.y)) / r0;
            let mut sm1 = Complex64::new(1.0, 0.0); // s^{m−1}
            let mut sm2 = Complex64::new(0.0, 0.0); // s^{m−2}
            for (i, c) in self.outer_coeffs.iter().enumerate() {
                let m = (i + 1) as f64;
                h.f += c * sm1 * s;
                h.df += m * c * sm1 / r0;
                if order > 1 && i > 0 {
                    h.d2f += m * (m - 1.0) * c * sm2 / (r0 * r0);
                }
                sm2 = sm1;
                sm1 *= s;
            }
        }
        h
    }

    pub fn eval(&self, x: &Vec2) -> f64 {
        self.holo(x, 0).f.re + self.constant
    }

    pub fn eval_grad(&self, x: &Vec2) -> Vec2 {
        let d = self.holo(x, 1).df;
        Vec2::new(d.re, -d.im)
    }

    pub fn eval_hess(&self, x: &Vec2) -> Mat2 {
        hessian_from(self.holo(x, 2).d2f)
    }

    /// Value, gradient and Hessian in one pass.
    pub fn eval_all(&self, x: &Vec2) -> (f64, Vec2, Mat2) {
        let h = self.holo(x, 2);
        (h.f.re + self.constant, Vec2::new(h.df.re, -h.df.im), hessian_from(h.d2f))
    }

    /// `∂u/∂ρ` at `c + r e^{iθ}` with `ρ` the distance to `c`.
    pub fn radial_derivative(&self, circle: &Circle, theta: f64) -> f64 {
        self.eval_grad(&circle.point(theta)).dot(&crate::unit(theta))
    }

    /// `∂u/∂θ / r` (counterclockwise tangential derivative) on `circle`.
    pub fn tangential_derivative(&self, circle: &Circle, theta: f64) -> f64 {
        let e = crate::unit(theta);
        self.eval_grad(&circle.point(theta)).dot(&Vec2::new(-e.y, e.x))
    }

    /// Error if `x` lies outside the closed domain by more than `tol`.
    pub fn check_point(&self, x: &Vec2, tol: f64) -> Result<()> {
        let mut s = self.outer.radius - (x - self.outer.center).norm();
        for h in &self.holes {
            s = s.min((x - h.center).norm() - h.radius);
        }
        if s < -tol {
            return Err(Error::OutsideDomain(format!("({}, {}) is {:e} outside the domain", x.x, x.y, -s)));
        }
        Ok(())
    }

    /// `∫_E u` from the Green identity with `w = |x − z0|²/4`:
    /// `∫_E u = ∮_{∂E} (u ∂_n w − w ∂_n u)`.
    pub fn integral(&self) -> f64 {
        let mut total = 0.0;
        let z0 = self.outer.center;
        let mut term = |c: &Circle, sign: f64| {
            let f = |th: f64| {
                let p = c.point(th);
                let e = crate::unit(th);
                let (u, g, _) = self.eval_all(&p);
                let dw = 0.5 * (p - z0).dot(&e);
                let w = 0.25 * (p - z0).norm_squared();
                (u * dw - w * g.dot(&e)) * c.radius
            };
            total += sign * periodic_trapezoid(f, 1e-14);
        };
        term(&self.outer, 1.0);
        for h in &self.holes {
            term(h, -1.0);
        }
        total
    }
}

fn hessian_from(d2f: Complex64) -> Mat2 {
    Mat2::new(d2f.re, -d2f.im, -d2f.im, -d2f.re)
}

/// Check `∮_{outer} g = Σ_k ∮_{hole k} g`.
pub fn check_compatibility(dom: &HoleDomain, g: &BoundaryData) -> Result<()> {
    g.check_shape(dom)?;
    let mismatch = g.flux_mismatch(dom);
    let scale = 2.0 * PI * dom.outer.radius * g.sup_norm(64);
    if mismatch.abs() > COMPATIBILITY_TOL * scale {
        return Err(Error::Compatibility { mismatch });
    }
    Ok(())
}

/// Solve `Δu = 0` in `E`, `∂u/∂ρ = g` on each circle (radial about the
/// circle's own centre), `∫_E u = 0`, by least-squares collocation at `8M`
/// points per circle.
pub fn solve_neumann(dom: &HoleDomain, g: &BoundaryData, opts: &SolverOptions) -> Result<HarmonicSolution> {
    if opts.modes == 0 {
        return Err(Error::InvalidInput("truncation order M must be at least 1".into()));
    }
    check_compatibility(dom, g)?;
    let mut m = opts.modes;
    loop {
        let sol = solve_fixed(dom, g, m)?;
        let target = opts.rel_tol * g.sup_norm(8 * m);
        if sol.residual <= target {
            return Ok(sol);
        }
        let next = (m + m / 2).div_ceil(8) * 8;
        if next > opts.max_modes {
            log::warn!(
                "Neumann residual {:e} exceeds {:e}·‖g‖∞ at M = {m} (condition {:e})",
                sol.residual,
                opts.rel_tol,
                sol.condition
            );
            return Ok(sol);
        }
        m = next;
    }
}

fn solve_fixed(dom: &HoleDomain, g: &BoundaryData, m: usize) -> Result<HarmonicSolution> {
    let n = dom.n_holes();
    let circles: Vec<Circle> = dom.circles().copied().collect();
    let mut sol = HarmonicSolution::zero(dom);
    sol.log_strengths = (0..n).map(|k| dom.holes[k].radius * g.circles[k + 1].mean()).collect();

    let n_col = 8 * m;
    let rows = circles.len() * n_col;
    let cols = circles.len() * 2 * m;
    let mut a = DMatrix::<f64>::zeros(rows, cols);
    let mut b = DVector::<f64>::zeros(rows);
    let mut scale = vec![0.0; cols];

    // collocation points
    let mut pts = Vec::with_capacity(rows);
    for (ci, c) in circles.iter().enumerate() {
        for j in 0..n_col {
            let th = 2.0 * PI * j as f64 / n_col as f64;
            pts.push((ci, th, c.point(th), crate::unit(th)));
        }
    }
    for (row, (ci, th, p, e)) in pts.iter().enumerate() {
        let ez = Complex64::new(e.x, e.y);
        let logs_only = sol.holo(p, 1).df;
        b[row] = g.circles[*ci].eval(*th) - (logs_only * ez).re;
        let z = Complex64::new(p.x, p.y);
        // columns: circle 0 (outer) modes, then holes
        for (cj, c) in circles.iter().enumerate() {
            let base = cj * 2 * m;
            let cz = Complex64::new(c.center.x, c.center.y);
            if cj == 0 {
                let s = (z - cz) / c.radius;
                let mut sm1 = Complex64::new(1.0, 0.0);
                for i in 0..m {
                    let mm = (i + 1) as f64;
                    let d = mm * sm1 / c.radius * ez;
                    let sc = c.radius / mm;
                    a[(row, base + 2 * i)] = d.re * sc;
                    a[(row, base + 2 * i + 1)] = -d.im * sc;
                    scale[base + 2 * i] = sc;
                    scale[base + 2 * i + 1] = sc;
                    sm1 *= s;
                }
            } else {
                let w = c.radius / (z - cz);
                let mut wm1 = w * w; // w^{m+1}
                for i in 0..m {
                    let mm = (i + 1) as f64;
                    let d = -mm * wm1 / c.radius * ez;
                    let sc = c.radius / mm;
                    a[(row, base + 2 * i)] = d.re * sc;
                    a[(row, base + 2 * i + 1)] = -d.im * sc;
                    scale[base + 2 * i] = sc;
                    scale[base + 2 * i + 1] = sc;
                    wm1 *= w;
                }
            }
        }
    }

    let qr = a.clone().qr();
    let r = qr.r();
    let diag: Vec<f64> = r.diagonal().iter().map(|v| v.abs()).collect();
    let dmax = diag.iter().cloned().fold(0.0, f64::max);
    let dmin = diag.iter().cloned().fold(f64::INFINITY, f64::min);
    sol.condition = if dmin > 0.0 { dmax / dmin } else { f64::INFINITY };
    if !(dmin > 1e-14 * dmax) {
        return Err(Error::Singular(format!("collocation matrix is rank deficient (condition {:e})", sol.condition)));
    }
    let qtb = qr.q().transpose() * &b;
    let x = r.solve_upper_triangular(&qtb).ok_or_else(|| Error::Solver("triangular solve failed".into()))?;
    let res = &a * &x - &b;
    sol.residual = res.amax();

    let coef = |cj: usize, i: usize| {
        let base = cj * 2 * m;
        Complex64::new(x[base + 2 * i] * scale[base + 2 * i], x[base + 2 * i + 1] * scale[base + 2 * i + 1])
    };
    sol.outer_coeffs = (0..m).map(|i| coef(0, i)).collect();
    sol.hole_coeffs = (1..=n).map(|cj| (0..m).map(|i| coef(cj, i)).collect()).collect();

    sol.constant = 0.0;
    sol.constant = -sol.integral() / dom.area();
    Ok(sol)
}

/// Fourier data of `samples` uniform values of `f(θ)` on each circle.
pub fn sample_boundary(dom: &HoleDomain, samples: usize, f: impl Fn(usize, &Circle, f64) -> f64) -> BoundaryData {
    let circles = dom
        .circles()
        .enumerate()
        .map(|(k, c)| {
            let vals: Vec<f64> = (0..samples).map(|j| f(k, c, 2.0 * PI * j as f64 / samples as f64)).collect();
            CircleData::from_samples(&vals)
        })
        .collect();
    BoundaryData::new(circles)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrature::domain_rule;
    use crate::vec2;

    fn annulus() -> HoleDomain {
        HoleDomain::with_max_separation(Circle::new(Vec2::zeros(), 1.0), vec![Circle::new(Vec2::zeros(), 0.4)]).unwrap()
    }

    fn two_holes() -> HoleDomain {
        HoleDomain::with_max_separation(
            Circle::new(vec2(0.1, -0.05), 1.2),
            vec![Circle::new(vec2(0.5, 0.1), 0.25), Circle::new(vec2(-0.35, -0.2), 0.3)],
        )
        .unwrap()
    }

    #[test]
    fn radial_annulus_solution() {
        let dom = annulus();
        let c = 0.7;
        // ∮ outer = ∮ inner: g_out·2π·1 = c·2π·0.4
        let g = BoundaryData::constants(&[c * 0.4, c]);
        let sol = solve_neumann(&dom, &g, &SolverOptions::default()).unwrap();
        for r in [0.45, 0.6, 0.99] {
            let x = vec2(r * 0.6, r * 0.8);
            assert!((sol.eval_grad(&x).norm() - c * 0.4 / r).abs() < 1e-8);
        }
        assert!((sol.log_strengths[0] - c * 0.4).abs() < 1e-15);
    }

    #[test]
    fn zero_data_gives_zero() {
        let dom = two_holes();
        let sol = solve_neumann(&dom, &BoundaryData::zeros(3), &SolverOptions::default()).unwrap();
        for p in [vec2(0.0, 0.6), vec2(-0.8, 0.3)] {
            assert_eq!(sol.eval(&p), 0.0);
        }
    }

    #[test]
    fn incompatible_data_is_rejected() {
        let dom = annulus();
        let g = BoundaryData::constants(&[1.0, 1.0]);
        assert!(matches!(solve_neumann(&dom, &g, &SolverOptions::default()), Err(Error::Compatibility { .. })));
    }

    fn oscillating_data(dom: &HoleDomain) -> BoundaryData {
        let mut g = sample_boundary(dom, 64, |k, _, th| match k {
            0 => 0.3 * (2.0 * th).sin() + 0.2,
            1 => th.cos() + 0.5,
            _ => -0.4 * (3.0 * th).cos() + 0.1,
        });
        // fix the outer mean for compatibility
        let f = g.fluxes(dom);
        let need = (f[1] + f[2]) / (2.0 * PI * dom.outer.radius);
        if let CircleData::Fourier { mean, .. } = &mut g.circles[0] {
            *mean = need;
        }
        g
    }

    #[test]
    fn two_hole_residual_mean_and_harmonicity() {
        let dom = two_holes();
        let g = oscillating_data(&dom);
        let sol = solve_neumann(&dom, &g, &SolverOptions::default()).unwrap();
        assert!(sol.residual < 1e-9, "residual {:e}", sol.residual);
        // off-collocation check
        for (k, c) in dom.circles().enumerate() {
            for j in 0..256 {
                let th = 2.0 * PI * (j as f64 + 0.37) / 256.0;
                let err = sol.radial_derivative(c, th) - g.eval(k, th);
                assert!(err.abs() < 1e-8, "circle {k}: {err:e}");
            }
        }
        let rule = domain_rule(&dom, 400, 400);
        let mean = rule.integrate(|p| sol.eval(p)) / dom.area();
        assert!(mean.abs() < 1e-4, "mean {mean:e}");
        assert!(sol.integral().abs() < 1e-12);
        for p in [vec2(0.0, 0.7), vec2(-0.6, 0.5), vec2(0.2, -0.6)] {
            assert!(sol.eval_hess(&p).trace().abs() < 1e-12);
        }
    }

    #[test]
    fn derivatives_match_finite_differences() {
        let dom = two_holes();
        let g = oscillating_data(&dom);
        let sol = solve_neumann(&dom, &g, &SolverOptions::default()).unwrap();
        let h = 1e-5 * dom.outer.radius;
        for p in [vec2(0.0, 0.7), vec2(-0.6, 0.5), vec2(0.9, -0.3)] {
            let dx = vec2(h, 0.0);
            let dy = vec2(0.0, h);
            let fd = vec2(
                (sol.eval(&(p + dx)) - sol.eval(&(p - dx))) / (2.0 * h),
                (sol.eval(&(p + dy)) - sol.eval(&(p - dy))) / (2.0 * h),
            );
            let gr = sol.eval_grad(&p);
            assert!((fd - gr).norm() <= 1e-6 * gr.norm().max(1.0));
            let hx = (sol.eval_grad(&(p + dx)) - sol.eval_grad(&(p - dx))) / (2.0 * h);
            let hs = sol.eval_hess(&p);
            assert!((hx - hs.column(0)).norm() <= 1e-6 * hs.norm().max(1.0));
        }
    }

    #[test]
    fn low_order_agrees_with_high_order() {
        // single eccentric hole with g = cos θ on the hole
        let dom =
            HoleDomain::with_max_separation(Circle::new(Vec2::zeros(), 1.0), vec![Circle::new(vec2(0.2, 0.1), 0.3)])
                .unwrap();
        let g = BoundaryData::new(vec![
            CircleData::Constant(0.0),
            CircleData::Fourier { mean: 0.0, cos: vec![1.0], sin: vec![0.0] },
        ]);
        let lo = solve_neumann(&dom, &g, &SolverOptions::fixed(8)).unwrap();
        let hi = solve_neumann(&dom, &g, &SolverOptions::fixed(64)).unwrap();
        for p in [vec2(-0.5, 0.3), vec2(0.6, -0.4)] {
            assert!((lo.eval_grad(&p) - hi.eval_grad(&p)).norm() < 1e-4);
        }
    }
}
