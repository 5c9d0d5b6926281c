//! Flow of the total velocity field, radial cavity maps and the assembled
//! cavitating deformation.

mod assemble;
mod radial;
mod seeds;

pub use assemble::{assemble_full_map, assemble_unchecked, AssembledMap, GLUE_TOL};
pub use radial::{radial_annulus_energy, RadialCavityMap};
pub use seeds::{boundary_seeds, CellPoint, ReferenceGrid, SeedSet};

use rayon::prelude::*;

use crate::fields::{build_velocity_field, VelocityField};
use crate::geometry::{Evolution, PadRadii};
use crate::harmonic::SolverOptions;
use crate::{Error, Mat2, Result, Vec2};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FlowOptions {
    pub steps: usize,
    /// Number of checkpoints after `t = 1`, equally spaced in steps.
    pub checkpoints: usize,
    pub solver: SolverOptions,
    /// Largest tolerated distance outside `E(t)`, relative to `R0`.
    pub excursion_tol: f64,
}

impl Default for FlowOptions {
    fn default() -> Self {
        Self { steps: 128, checkpoints: 8, solver: SolverOptions::default(), excursion_tol: 1e-5 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Particle {
    pub reference: Vec2,
    pub position: Vec2,
    /// Deformation gradient `D_x f`.
    pub gradient: Mat2,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FlowState {
    pub t: f64,
    pub particles: Vec<Particle>,
}

impl FlowState {
    pub fn det_residuals(&self) -> Vec<f64> {
        self.particles.iter().map(|p| (p.gradient.determinant() - 1.0).abs()).collect()
    }

    /// `max |det F − 1|` over the particles in `range`.
    pub fn max_det_residual(&self, range: std::ops::Range<usize>) -> f64 {
        self.particles[range].iter().map(|p| (p.gradient.determinant() - 1.0).abs()).fold(0.0, f64::max)
    }
}

/// Particle states at `t = 1` and at each checkpoint.
#[derive(Debug, Clone)]
pub struct FlowHistory {
    pub states: Vec<FlowState>,
    pub steps: usize,
    /// Sup of `|Dv|` (Frobenius) over all stage evaluations.
    pub gradient_sup: f64,
    /// Largest distance outside `E(t)` seen after a step.
    pub max_excursion: f64,
}

impl FlowHistory {
    pub fn final_state(&self) -> &FlowState {
        self.states.last().expect("history holds the initial state")
    }
}

/// Field objects at the `2·steps + 1` stage times of the RK4 scheme.
pub fn stage_fields(
    e: &Evolution,
    pads: &PadRadii,
    steps: usize,
    solver: &SolverOptions,
) -> Result<Vec<VelocityField>> {
    let n = 2 * steps;
    let span = e.lambda() - 1.0;
    (0..=n)
        .into_par_iter()
        .map(|k| {
            let t = if k == n { e.lambda() } else { 1.0 + span * k as f64 / n as f64 };
            build_velocity_field(e, pads, t, solver)
        })
        .collect()
}

/// Integrate `ḟ = v_t(f)`, `Ḟ = Dv_t(f) F` from `f = x`, `F = I` at `t = 1`
/// to `t = λ` with the classical RK4 scheme.
pub fn integrate_flow(e: &Evolution, pads: &PadRadii, seeds: &[Vec2], opts: &FlowOptions) -> Result<FlowHistory> {
    if opts.steps == 0 {
        return Err(Error::InvalidInput("steps must be at least 1".into()));
    }
    let fields = stage_fields(e, pads, opts.steps, &opts.solver)?;
    integrate_with_fields(e, &fields, seeds, opts)
}

/// Step indices of the checkpoints.
pub fn checkpoint_steps(steps: usize, checkpoints: usize) -> Vec<usize> {
    let c = checkpoints.max(1).min(steps);
    let mut out: Vec<usize> = (1..=c).map(|j| (j * steps).div_ceil(c)).collect();
    out.dedup();
    out
}

/// As [`integrate_flow`] with prebuilt stage fields.
pub fn integrate_with_fields(
    e: &Evolution,
    fields: &[VelocityField],
    seeds: &[Vec2],
    opts: &FlowOptions,
) -> Result<FlowHistory> {
    let steps = opts.steps;
    if fields.len() != 2 * steps + 1 {
        return Err(Error::InvalidInput(format!("{} stage fields for {steps} steps", fields.len())));
    }
    let h = (e.lambda() - 1.0) / steps as f64;
    let tol = opts.excursion_tol * e.r0();
    let marks = checkpoint_steps(steps, opts.checkpoints);

    struct Track {
        snapshots: Vec<(Vec2, Mat2)>,
        grad_sup: f64,
        excursion: f64,
    }

    let tracks: Vec<Track> = seeds
        .par_iter()
        .enumerate()
        .map(|(id, &x0)| {
            let start = fields[0].domain.signed_distance(&x0);
            if start < -tol {
                return Err(Error::Integration { particle: id, t: 1.0, excursion: -start });
            }
            let mut x = x0;
            let mut f = Mat2::identity();
            let mut track = Track { snapshots: Vec::with_capacity(marks.len()), grad_sup: 0.0, excursion: 0.0 };
            let mut next_mark = 0;
            let rhs = |field: &VelocityField, x: &Vec2, f: &Mat2, sup: &mut f64| {
                let (v, j) = field.eval_with_jacobian(x);
                *sup = sup.max(j.norm());
                (v, j * f)
            };
            for k in 0..steps {
                let (a, b, c) = (&fields[2 * k], &fields[2 * k + 1], &fields[2 * k + 2]);
                let mut sup = track.grad_sup;
                let (k1x, k1f) = rhs(a, &x, &f, &mut sup);
                let (k2x, k2f) = rhs(b, &(x + 0.5 * h * k1x), &(f + 0.5 * h * k1f), &mut sup);
                let (k3x, k3f) = rhs(b, &(x + 0.5 * h * k2x), &(f + 0.5 * h * k2f), &mut sup);
                let (k4x, k4f) = rhs(c, &(x + h * k3x), &(f + h * k3f), &mut sup);
                x += h / 6.0 * (k1x + 2.0 * k2x + 2.0 * k3x + k4x);
                f += h / 6.0 * (k1f + 2.0 * k2f + 2.0 * k3f + k4f);
                track.grad_sup = sup;
                let out = -c.domain.signed_distance(&x);
                track.excursion = track.excursion.max(out);
                if out > tol {
                    return Err(Error::Integration { particle: id, t: c.t, excursion: out });
                }
                if next_mark < marks.len() && marks[next_mark] == k + 1 {
                    track.snapshots.push((x, f));
                    next_mark += 1;
                }
            }
            Ok(track)
        })
        .collect::<Result<_>>()?;

    let mut states = vec![FlowState {
        t: 1.0,
        particles: seeds.iter().map(|&x| Particle { reference: x, position: x, gradient: Mat2::identity() }).collect(),
    }];
    for (m, &step) in marks.iter().enumerate() {
        let t = if step == steps { e.lambda() } else { 1.0 + h * step as f64 };
        states.push(FlowState {
            t,
            particles: seeds
                .iter()
                .zip(&tracks)
                .map(|(&x, tr)| Particle { reference: x, position: tr.snapshots[m].0, gradient: tr.snapshots[m].1 })
                .collect(),
        });
    }
    Ok(FlowHistory {
        states,
        steps,
        gradient_sup: tracks.iter().map(|t| t.grad_sup).fold(0.0, f64::max),
        max_excursion: tracks.iter().map(|t| t.excursion).fold(0.0, f64::max),
    })
}

/// Largest disagreement between `det F` at grid nodes and the determinant
/// of the central-difference Jacobian of the deformed node positions, over
/// nodes at least three spacings from the boundary. `positions[k]` and
/// `gradients[k]` belong to node `k` of `grid`.
pub fn finite_difference_det_gap(grid: &ReferenceGrid, positions: &[Vec2], gradients: &[Mat2]) -> f64 {
    let n = grid.n;
    let h = grid.spacing();
    let mut worst: f64 = 0.0;
    for j in 1..n {
        for i in 1..n {
            let ids = [
                grid.node_index(i, j),
                grid.node_index(i - 1, j),
                grid.node_index(i + 1, j),
                grid.node_index(i, j - 1),
                grid.node_index(i, j + 1),
            ];
            if grid.signed_distance(&grid.nodes[ids[0]]) < 3.0 * h {
                continue;
            }
            let dx = (positions[ids[2]] - positions[ids[1]]) / (2.0 * h);
            let dy = (positions[ids[4]] - positions[ids[3]]) / (2.0 * h);
            let fd = Mat2::from_columns(&[dx, dy]).determinant();
            worst = worst.max((fd - gradients[ids[0]].determinant()).abs());
        }
    }
    worst
}
