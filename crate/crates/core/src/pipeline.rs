//! End-to-end run: geometry, flow, assembly and the analysis checks.

use crate::analysis::{
    damped_energy_profile, deformed_area_balance, dirichlet_energy_flow, energy_report, image_area, image_cavity_gaps,
    injectivity_check_curved, EnergyReport, ImageEntry, InjectivityReport,
};
use crate::config::RunKnobs;
use crate::flow::{
    assemble_unchecked, finite_difference_det_gap, integrate_flow, AssembledMap, FlowHistory, FlowOptions,
    ReferenceGrid, SeedSet,
};
use crate::geometry::{
    choose_pads, sigma, straight_line_evolution, validate_evolution, Circle, Configuration, Evolution, EvolutionReport,
    PadRadii,
};
use crate::harmonic::SolverOptions;
use crate::{Error, Result, Vec2};

/// One named PASS/FAIL check `value <= limit`.
#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: String,
    pub value: f64,
    pub limit: f64,
    pub pass: bool,
}

impl Check {
    pub fn at_most(name: impl Into<String>, value: f64, limit: f64) -> Self {
        Self { name: name.into(), value, limit, pass: value <= limit }
    }
}

/// Geometry stage: everything a dry run reports.
#[derive(Debug, Clone)]
pub struct Prepared {
    pub config: Configuration,
    pub sigma: f64,
    pub evolution: Evolution,
    pub validation: EvolutionReport,
    pub pads: PadRadii,
}

/// Checks attainability, builds the straight-line evolution and the pads,
/// and validates the knobs against the pad radius.
pub fn prepare(config: &Configuration, knobs: &RunKnobs) -> Result<Prepared> {
    let s = sigma(config)?;
    let evolution = straight_line_evolution(config)?;
    let grid = evolution.uniform_grid(knobs.time_grid.max(2));
    let validation = validate_evolution(&evolution, &grid);
    if !validation.passed() {
        return Err(Error::Infeasible(format!("evolution fails its checks at {:?}", validation.first_violation)));
    }
    let pads = choose_pads(&evolution, &grid)?;
    let min_pad = pads.radii.iter().cloned().fold(f64::INFINITY, f64::min);
    knobs.validate(min_pad)?;
    Ok(Prepared { config: config.clone(), sigma: s, evolution, validation, pads })
}

pub fn solver_options(knobs: &RunKnobs) -> SolverOptions {
    SolverOptions { modes: knobs.modes, max_modes: knobs.max_modes, ..SolverOptions::default() }
}

pub fn flow_options(knobs: &RunKnobs) -> FlowOptions {
    FlowOptions {
        steps: knobs.steps,
        checkpoints: knobs.checkpoints,
        solver: solver_options(knobs),
        ..FlowOptions::default()
    }
}

/// Reference grid and particles for a prepared run.
pub fn seed_set(p: &Prepared, knobs: &RunKnobs) -> Result<SeedSet> {
    let e = &p.evolution;
    let pads = (0..e.len()).map(|i| Circle::new(e.center(i, 1.0), p.pads.radii[i])).collect();
    let grid = ReferenceGrid::new(e.r0(), pads, knobs.grid)?;
    Ok(SeedSet::new(grid, knobs.boundary_samples))
}

#[derive(Debug, Clone)]
pub struct RunOutput {
    pub prepared: Prepared,
    pub seeds: SeedSet,
    pub history: FlowHistory,
    pub flow_energy: f64,
    pub energy: EnergyReport,
    /// Map assembled at the smallest `ε`.
    pub map: AssembledMap,
    /// Per `ε` of the ladder, per cavity.
    pub images: Vec<ImageEntry>,
    pub injectivity: InjectivityReport,
    /// `(deformed area, λ² π R0²)`
    pub area_balance: (f64, f64),
    /// `(t, log(e^{−2Ct} ∫|F|²))` with `C` the measured sup of `|Dv|`.
    pub damped_energy: Vec<(f64, f64)>,
    /// Cross-check of tracked `det F` against central differences of the
    /// node positions; truncation-dominated, reported but not gated.
    pub fd_det_gap: f64,
    /// `max |det F − 1|` over the boundary particles, reported but not
    /// gated.
    pub boundary_det_residual: f64,
    pub checks: Vec<Check>,
}

impl RunOutput {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }
}

/// Largest `| |f − z_i(t)| − r_i(t) |` over hole seeds and checkpoints.
pub fn hole_tracking_error(p: &Prepared, seeds: &SeedSet, history: &FlowHistory) -> f64 {
    let e = &p.evolution;
    let mut worst: f64 = 0.0;
    for s in &history.states {
        for i in 0..e.len() {
            let z = e.center(i, s.t);
            let r = p.pads.padded_radius(e, i, s.t);
            for k in seeds.boundary_range(i + 1) {
                worst = worst.max(((s.particles[k].position - z).norm() - r).abs());
            }
        }
    }
    worst
}

/// Largest `|f − t x|` over outer seeds and checkpoints.
pub fn outer_tracking_error(seeds: &SeedSet, history: &FlowHistory) -> f64 {
    let mut worst: f64 = 0.0;
    for s in &history.states {
        for k in seeds.boundary_range(0) {
            let q = &s.particles[k];
            worst = worst.max((q.position - s.t * q.reference).norm());
        }
    }
    worst
}

/// Deformed positions indexed by grid node; nodes outside the domain keep
/// their reference position.
pub fn deformed_nodes(seeds: &SeedSet, history: &FlowHistory) -> Vec<Vec2> {
    let last = history.final_state();
    seeds.grid.nodes.iter().zip(&seeds.node_seed).map(|(x, s)| s.map_or(*x, |k| last.particles[k].position)).collect()
}

/// Full run on an attainable configuration.
pub fn run_pipeline(config: &Configuration, knobs: &RunKnobs) -> Result<RunOutput> {
    let prepared = prepare(config, knobs)?;
    let seeds = seed_set(&prepared, knobs)?;
    let history = integrate_flow(&prepared.evolution, &prepared.pads, &seeds.points, &flow_options(knobs))?;
    analyze(prepared, seeds, history, knobs)
}

/// Analysis stage of [`run_pipeline`] for a computed flow.
pub fn analyze(prepared: Prepared, seeds: SeedSet, history: FlowHistory, knobs: &RunKnobs) -> Result<RunOutput> {
    let e = &prepared.evolution;
    let pads = &prepared.pads;
    let r0 = e.r0();
    let last = history.final_state();

    let flow_energy = dirichlet_energy_flow(last, &seeds)?;
    let energy = energy_report(e, pads, flow_energy, &knobs.eps_ladder)?;

    let lambda = e.lambda();
    let volumes: Vec<f64> = (0..e.len()).map(|i| std::f64::consts::PI * e.sq_radius(i, lambda)).collect();
    let mut images = Vec::new();
    let mut map = None;
    for &eps in &knobs.eps_ladder {
        let m = assemble_unchecked(e, pads, eps, &seeds, &history)?;
        for (i, v) in volumes.iter().enumerate() {
            images.push(image_area(&m, i, *v, knobs.image_samples)?);
        }
        map = Some(m);
    }
    let map = map.expect("ladder has at least two values");
    let smallest = &images[images.len() - e.len()..];
    let area_balance = deformed_area_balance(&map, &seeds, smallest);

    let nodes = deformed_nodes(&seeds, &history);
    let gradients: Vec<_> =
        seeds.node_seed.iter().map(|s| s.map_or(crate::Mat2::identity(), |k| last.particles[k].gradient)).collect();
    let injectivity = injectivity_check_curved(&nodes, &gradients, &seeds.grid.nodes, &seeds.grid.quads(), 8);

    let damped_energy = damped_energy_profile(&history, &seeds, 2.0 * history.gradient_sup)?;

    let fd_det_gap = finite_difference_det_gap(&seeds.grid, &nodes, &gradients);

    let boundary_det_residual = last.max_det_residual(seeds.boundary_start..last.particles.len());
    let mut checks = vec![
        Check::at_most("det_residual", last.max_det_residual(0..seeds.boundary_start), knobs.det_tol),
        Check::at_most("hole_tracking", hole_tracking_error(&prepared, &seeds, &history), knobs.hole_tracking_tol * r0),
        Check::at_most("outer_tracking", outer_tracking_error(&seeds, &history), knobs.outer_tracking_tol * r0),
        Check::at_most("glue_mismatch", map.glue_mismatch, crate::flow::GLUE_TOL * r0),
        Check::at_most("energy_slope_rel_error", energy.slope_rel_error(), knobs.slope_tol),
        Check::at_most("energy_spread_rel", energy.spread / energy.total_volume, knobs.spread_tol),
    ];
    let worst_area = images.iter().map(ImageEntry::rel_area_error).fold(0.0, f64::max);
    checks.push(Check::at_most("image_area_rel_error", worst_area, knobs.area_tol));
    let worst_round = images.iter().map(|i| i.radial_std / i.cavity_radius).fold(0.0, f64::max);
    checks.push(Check::at_most("image_roundness", worst_round, knobs.roundness_tol));
    let bad_winding = images.iter().filter(|i| i.winding != 1).count();
    checks.push(Check::at_most("winding_defects", bad_winding as f64, 0.0));
    let (area, target) = area_balance;
    checks.push(Check::at_most("area_balance_rel_error", (area - target).abs() / target, knobs.area_tol));
    checks.push(Check::at_most("injectivity_violations", injectivity.violations() as f64, 0.0));
    let gaps = image_cavity_gaps(&map);
    if !gaps.is_empty() {
        let min_gap = gaps.iter().map(|g| g.2).fold(f64::INFINITY, f64::min);
        checks.push(Check::at_most("neg_image_gap", -min_gap, 0.0));
    }
    let rise = damped_energy.windows(2).map(|w| w[1].1 - w[0].1).fold(f64::NEG_INFINITY, f64::max);
    checks.push(Check::at_most("damped_energy_rise", rise, 1e-12));

    Ok(RunOutput {
        prepared,
        seeds,
        history,
        flow_energy,
        energy,
        map,
        images,
        injectivity,
        area_balance,
        damped_energy,
        fd_det_gap,
        boundary_det_residual,
        checks,
    })
}
