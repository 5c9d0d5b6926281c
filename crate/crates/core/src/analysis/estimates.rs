use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::poincare_constant;
use crate::geometry::{Circle, HoleDomain};
use crate::harmonic::{
    green_neumann_flux_fd, omega_op, poisson_op, reflection_identity_sides, solve_neumann, BoundaryData, CircleData,
    RegularityBudget, SolverOptions,
};
use crate::quadrature::{
    annulus_rule, domain_rule, holder_seminorm_periodic, holder_seminorm_points, periodic_trapezoid,
};
use crate::{Result, Vec2};

/// One measured inequality: `constant = lhs / bound`.
#[derive(Debug, Clone, PartialEq)]
pub struct EstimateRow {
    pub check: &'static str,
    pub member: String,
    pub d: f64,
    pub r0: f64,
    pub n: usize,
    /// `B(E)`, or `NaN` where it does not enter.
    pub budget: f64,
    pub alpha: f64,
    pub lhs: f64,
    pub bound: f64,
    pub constant: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CheckSummary {
    pub check: &'static str,
    pub min: f64,
    pub max: f64,
    pub pass: bool,
    pub rule: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EstimateSuite {
    pub rows: Vec<EstimateRow>,
    pub summaries: Vec<CheckSummary>,
}

impl EstimateSuite {
    pub fn passed(&self) -> bool {
        self.summaries.iter().all(|s| s.pass)
    }

    pub fn summary(&self, check: &str) -> Option<&CheckSummary> {
        self.summaries.iter().find(|s| s.check == check)
    }
}

#[derive(Debug, Clone)]
pub struct SuiteOptions {
    pub alpha: f64,
    pub seed: u64,
    pub trace_functions: usize,
    pub omega_functions: usize,
    pub poincare_degree: usize,
    /// Allowed `max/min` ratio of a measured constant across a family.
    pub variation_cap: f64,
    pub solver: SolverOptions,
    pub family: Vec<HoleDomain>,
    /// Collar widths of the annulus sweep, largest first.
    pub annulus_widths: Vec<f64>,
}

impl Default for SuiteOptions {
    fn default() -> Self {
        Self {
            alpha: 0.5,
            seed: 20_240_917,
            trace_functions: 50,
            omega_functions: 20,
            poincare_degree: 12,
            variation_cap: 10.0,
            solver: SolverOptions::default(),
            family: ring_family(),
            annulus_widths: vec![0.5, 0.3, 0.2, 0.1, 0.05],
        }
    }
}

/// Unit disk with `n = 1..=5` holes of radius 0.15 on the ring `|x| = 0.5`,
/// separation `d = 0.1`; every member has `F(E) = 0.075`.
pub fn ring_family() -> Vec<HoleDomain> {
    (1..=5)
        .map(|n| {
            let holes = (0..n).map(|k| Circle::new(0.5 * crate::unit(2.0 * PI * k as f64 / n as f64), 0.15)).collect();
            HoleDomain::new(Circle::new(Vec2::zeros(), 1.0), holes, 0.1).expect("ring layout is admissible")
        })
        .collect()
}

fn row(check: &'static str, member: String, lhs: f64, bound: f64) -> EstimateRow {
    EstimateRow {
        check,
        member,
        d: f64::NAN,
        r0: f64::NAN,
        n: 0,
        budget: f64::NAN,
        alpha: f64::NAN,
        lhs,
        bound,
        constant: lhs / bound,
    }
}

fn summarize(check: &'static str, rows: &[EstimateRow], pass: bool, rule: String) -> CheckSummary {
    let vals = rows.iter().filter(|r| r.check == check).map(|r| r.constant);
    let (min, max) = vals.fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), v| (a.min(v), b.max(v)));
    CheckSummary { check, min, max, pass, rule }
}

fn variation_ok(rows: &[EstimateRow], check: &str, cap: f64) -> bool {
    let vals: Vec<f64> = rows.iter().filter(|r| r.check == check).map(|r| r.constant).collect();
    let min = vals.iter().cloned().fold(f64::INFINITY, f64::min);
    let max = vals.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    !vals.is_empty() && min > 0.0 && max.is_finite() && max / min <= cap
}

/// Smooth test function `c0 + Σ a_k sin(b_k·x + c_k)` with its gradient.
#[derive(Debug, Clone)]
pub struct WaveSum {
    pub c0: f64,
    pub terms: Vec<(f64, Vec2, f64)>,
}

impl WaveSum {
    pub fn random(rng: &mut impl Rng) -> Self {
        let terms = (0..3)
            .map(|_| {
                (
                    rng.gen_range(-1.0..1.0),
                    Vec2::new(rng.gen_range(-3.0..3.0), rng.gen_range(-3.0..3.0)),
                    rng.gen_range(0.0..2.0 * PI),
                )
            })
            .collect();
        Self { c0: rng.gen_range(-1.0..1.0), terms }
    }

    pub fn value(&self, x: &Vec2) -> f64 {
        self.c0 + self.terms.iter().map(|(a, b, c)| a * (b.dot(x) + c).sin()).sum::<f64>()
    }

    pub fn grad(&self, x: &Vec2) -> Vec2 {
        self.terms.iter().map(|(a, b, c)| *a * (b.dot(x) + c).cos() * b).sum()
    }
}

/// Both circle sides and the common right-hand side of the trace inequality
/// `∮_{∂B_ρi} φ² ≤ 2(ρ2/ρ1)((ρ2 − ρ1)⁻¹ ∫ φ² + ∫ |Dφ|²)` on the annulus.
pub fn trace_inequality_sides(
    phi: impl Fn(&Vec2) -> f64,
    grad: impl Fn(&Vec2) -> Vec2,
    rho1: f64,
    rho2: f64,
) -> (f64, f64, f64) {
    let rule = annulus_rule(Vec2::zeros(), rho1, rho2, 40, 256);
    let l2 = rule.integrate(|p| phi(p).powi(2));
    let h1 = rule.integrate(|p| grad(p).norm_squared());
    let circle = |r: f64| periodic_trapezoid(|t| phi(&(r * crate::unit(t))).powi(2) * r, 1e-13);
    let rhs = 2.0 * (rho2 / rho1) * (l2 / (rho2 - rho1) + h1);
    (circle(rho1), circle(rho2), rhs)
}

fn trace_rows(opts: &SuiteOptions, rng: &mut ChaCha8Rng) -> Vec<EstimateRow> {
    let mut rows = Vec::new();
    let (l1, l2, r) = trace_inequality_sides(|_| 1.0, |_| Vec2::zeros(), 1.0, 2.0);
    rows.push(row("trace", "phi=1 rho=(1,2) inner".into(), l1, r));
    rows.push(row("trace", "phi=1 rho=(1,2) outer".into(), l2, r));
    for k in 0..opts.trace_functions {
        let w = WaveSum::random(rng);
        let rho1 = rng.gen_range(0.5..1.5);
        let rho2 = rho1 * rng.gen_range(1.2..3.0);
        let (a, b, r) = trace_inequality_sides(|p| w.value(p), |p| w.grad(p), rho1, rho2);
        rows.push(row("trace", format!("wave{k} rho=({rho1:.4},{rho2:.4}) inner"), a, r));
        rows.push(row("trace", format!("wave{k} rho=({rho1:.4},{rho2:.4}) outer"), b, r));
    }
    rows
}

/// Random trigonometric polynomial with decaying coefficients.
pub fn random_trig(rng: &mut impl Rng, modes: usize) -> CircleData {
    let mut cos = Vec::with_capacity(modes);
    let mut sin = Vec::with_capacity(modes);
    for m in 1..=modes {
        let s = (m as f64).powf(-1.5);
        cos.push(s * rng.gen_range(-1.0..1.0));
        sin.push(s * rng.gen_range(-1.0..1.0));
    }
    CircleData::Fourier { mean: rng.gen_range(-1.0..1.0), cos, sin }
}

fn omega_rows(opts: &SuiteOptions, rng: &mut ChaCha8Rng) -> Result<Vec<EstimateRow>> {
    let mut rows = Vec::new();
    for k in 0..opts.omega_functions {
        let g = random_trig(rng, 6);
        let semi = holder_seminorm_periodic(|t| g.eval(t), opts.alpha, 512);
        for r in [1.1, 1.5, 2.0] {
            let mut sup: f64 = 0.0;
            for j in 0..64 {
                let x = r * crate::unit(2.0 * PI * j as f64 / 64.0);
                sup = sup.max(omega_op(|t| g.eval(t), &x)?.abs());
            }
            let mut rw = row("omega", format!("trig{k} r={r}"), sup, semi);
            rw.alpha = opts.alpha;
            rows.push(rw);
        }
    }
    Ok(rows)
}

fn poisson_rows() -> Result<Vec<EstimateRow>> {
    [1.5, 2.0, 3.0]
        .into_iter()
        .map(|r| {
            let value = -poisson_op(|_| 1.0, &Vec2::new(r, 0.0))?;
            Ok(row("poisson", format!("g=1 r={r}"), (value - 1.0).abs(), 1.0))
        })
        .collect()
}

fn random_in_disk(rng: &mut impl Rng, r: f64) -> Vec2 {
    let rho = r * rng.gen_range(0.05f64..0.95).sqrt();
    rho * crate::unit(rng.gen_range(0.0..2.0 * PI))
}

fn kernel_rows(rng: &mut ChaCha8Rng) -> Result<Vec<EstimateRow>> {
    let mut rows = Vec::new();
    for (k, r) in [1.0, 2.5].into_iter().enumerate() {
        for j in 0..16 {
            let x = random_in_disk(rng, r);
            let y = r * crate::unit(rng.gen_range(0.0..2.0 * PI));
            let flux = green_neumann_flux_fd(&x, &y, r, 1e-4 * r)?;
            rows.push(row("green_neumann", format!("R={r} pair{}", 16 * k + j), flux.abs(), 1.0));
        }
    }
    for j in 0..32 {
        let (x1, x2) = (random_in_disk(rng, 1.0), random_in_disk(rng, 1.0));
        let (a, b) = reflection_identity_sides(&x1, &x2, 1.0);
        rows.push(row("reflection", format!("pair{j}"), (a - b).abs(), a.abs().max(b.abs())));
    }
    Ok(rows)
}

/// Harmonic test function on the annulus sweep.
fn sweep_function(x: &Vec2) -> f64 {
    1.0 + x.x / x.norm_squared() + 0.5 * (x.x * x.x - x.y * x.y)
}

fn annulus_rows(opts: &SuiteOptions) -> Vec<EstimateRow> {
    let big_r = 1.0;
    opts.annulus_widths
        .iter()
        .map(|&d| {
            let l1 = annulus_rule(Vec2::zeros(), big_r, big_r + d, 24, 512).integrate(|p| sweep_function(p).abs());
            let mut sup: f64 = 0.0;
            for i in 0..=16 {
                let r = big_r + d / 3.0 + (d / 3.0) * i as f64 / 16.0;
                for j in 0..512 {
                    sup = sup.max(sweep_function(&(r * crate::unit(2.0 * PI * j as f64 / 512.0))).abs());
                }
            }
            let mut rw = row("annulus", format!("R=1 d={d}"), sup, l1 / (d * d));
            rw.d = d;
            rw
        })
        .collect()
}

/// Compatible test data on a family member: `1 + 0.5 cos(θ + k)` on hole
/// `k`, `c + 0.3 sin 2θ` outside.
pub fn family_data(dom: &HoleDomain) -> BoundaryData {
    let mut circles = vec![CircleData::Constant(0.0)];
    let mut flux = 0.0;
    for (k, h) in dom.holes.iter().enumerate() {
        let ph = (k + 1) as f64;
        circles.push(CircleData::Fourier { mean: 1.0, cos: vec![0.5 * ph.cos()], sin: vec![-0.5 * ph.sin()] });
        flux += 2.0 * PI * h.radius;
    }
    circles[0] =
        CircleData::Fourier { mean: flux / (2.0 * PI * dom.outer.radius), cos: vec![0.0, 0.0], sin: vec![0.0, 0.3] };
    BoundaryData::new(circles)
}

fn family_rows(opts: &SuiteOptions) -> Result<Vec<EstimateRow>> {
    let mut rows = Vec::new();
    for (k, dom) in opts.family.iter().enumerate() {
        let name = format!("member{k} n={}", dom.n_holes());
        let cp = poincare_constant(dom, opts.poincare_degree)?;
        let r0 = dom.outer.radius;
        let budget = RegularityBudget { area: dom.area(), poincare: cp, d: dom.d, n: dom.n_holes(), r0 }.value();
        let g = family_data(dom);
        let gnorm = g.sup_norm(1024);
        let u = solve_neumann(dom, &g, &opts.solver)?;
        let l1 = domain_rule(dom, 256, 256).integrate(|p| u.eval(p).abs());

        let mut sup_grad: f64 = 0.0;
        let mut semi: f64 = 0.0;
        for (ci, c) in dom.circles().enumerate() {
            let pts: Vec<Vec2> = (0..512).map(|j| c.point(2.0 * PI * j as f64 / 512.0)).collect();
            let vals: Vec<f64> = (0..512).map(|j| g.eval(ci, 2.0 * PI * j as f64 / 512.0)).collect();
            semi = semi.max(holder_seminorm_points(&pts, &vals, opts.alpha));
            for p in &pts {
                sup_grad = sup_grad.max(u.eval_grad(p).norm());
            }
        }
        let fill = |mut rw: EstimateRow| {
            rw.d = dom.d;
            rw.r0 = r0;
            rw.n = dom.n_holes();
            rw.budget = budget;
            rw.alpha = opts.alpha;
            rw
        };
        rows.push(fill(row("poincare", name.clone(), cp, r0)));
        rows.push(fill(row("prop12", name.clone(), l1, budget * gnorm)));
        let thm1 = (1.0 + budget * dom.d.powi(-4) * r0) * gnorm + r0.powf(opts.alpha) * semi;
        rows.push(fill(row("thm1", name, sup_grad, thm1)));
    }
    Ok(rows)
}

/// Runs every estimate check with the given options.
pub fn estimate_suite(opts: &SuiteOptions) -> Result<EstimateSuite> {
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut rows = trace_rows(opts, &mut rng);
    rows.extend(omega_rows(opts, &mut rng)?);
    rows.extend(poisson_rows()?);
    rows.extend(kernel_rows(&mut rng)?);
    rows.extend(annulus_rows(opts));
    let disk = HoleDomain::with_max_separation(Circle::new(Vec2::zeros(), 1.0), vec![])?;
    let cp_disk = poincare_constant(&disk, opts.poincare_degree)?;
    rows.push(row("poincare_disk", "unit disk".into(), cp_disk, 1.0 / BESSEL_J1_PRIME_ZERO));
    rows.extend(family_rows(opts)?);

    let cap = opts.variation_cap;
    let mut summaries = Vec::new();
    let trace_ok = rows.iter().filter(|r| r.check == "trace").all(|r| r.lhs <= r.bound);
    summaries.push(summarize("trace", &rows, trace_ok, "lhs <= rhs for every function and circle".into()));
    summaries.push(summarize("omega", &rows, variation_ok(&rows, "omega", cap), format!("max/min <= {cap}")));
    let poisson_ok = rows.iter().filter(|r| r.check == "poisson").all(|r| r.lhs <= 1e-10);
    summaries.push(summarize("poisson", &rows, poisson_ok, "|value - 1| <= 1e-10".into()));
    let gn_ok = rows.iter().filter(|r| r.check == "green_neumann").all(|r| r.lhs <= 1e-10);
    summaries.push(summarize("green_neumann", &rows, gn_ok, "|normal derivative| <= 1e-10".into()));
    let refl_ok = rows.iter().filter(|r| r.check == "reflection").all(|r| r.constant <= 1e-12);
    summaries.push(summarize("reflection", &rows, refl_ok, "relative gap <= 1e-12".into()));
    let sweep: Vec<f64> = rows.iter().filter(|r| r.check == "annulus").map(|r| r.constant).collect();
    let sweep_ok = !sweep.is_empty() && sweep.iter().all(|c| *c <= cap * sweep[0]);
    summaries.push(summarize("annulus", &rows, sweep_ok, format!("every width <= {cap} x widest")));
    let disk_row = rows.iter().find(|r| r.check == "poincare_disk").expect("disk row");
    let disk_ok = (disk_row.constant - 1.0).abs() <= 0.01;
    summaries.push(summarize("poincare_disk", &rows, disk_ok, "within 1% of 1/j'_11".into()));
    for check in ["poincare", "prop12", "thm1"] {
        summaries.push(summarize(check, &rows, variation_ok(&rows, check, cap), format!("max/min <= {cap}")));
    }
    Ok(EstimateSuite { rows, summaries })
}

/// First positive zero of `J_1′`.
pub const BESSEL_J1_PRIME_ZERO: f64 = 1.841_183_781_340_659_3;
