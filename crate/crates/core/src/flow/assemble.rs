use super::{FlowHistory, FlowState, RadialCavityMap, SeedSet};
use crate::geometry::{Evolution, PadRadii};
use crate::{Error, Result, Vec2};

/// Glue tolerance relative to `R0`; mismatches beyond ten times this are
/// assembly errors.
pub const GLUE_TOL: f64 = 1e-4;

/// The cavitating map: the flow map at `t = λ` on the reference exterior
/// domain and the radial cavity maps on the annuli `ε < |x − a_i| < R_i`.
#[derive(Debug, Clone)]
pub struct AssembledMap {
    pub lambda: f64,
    pub r0: f64,
    pub radial: Vec<RadialCavityMap>,
    pub exterior: FlowState,
    /// `max |u_ext − u_radial|` over the pad-circle samples.
    pub glue_mismatch: f64,
    /// `max |u_ext(x) − λx|` over the outer-circle samples.
    pub outer_trace_error: f64,
}

/// Assembles the map; a glue mismatch beyond `10·GLUE_TOL·R0` is an error.
pub fn assemble_full_map(
    e: &Evolution,
    pads: &PadRadii,
    eps: f64,
    seeds: &SeedSet,
    history: &FlowHistory,
) -> Result<AssembledMap> {
    let map = assemble_unchecked(e, pads, eps, seeds, history)?;
    let limit = 10.0 * GLUE_TOL * e.r0();
    if map.glue_mismatch > limit {
        return Err(Error::Assembly { mismatch: map.glue_mismatch, limit });
    }
    Ok(map)
}

/// As [`assemble_full_map`] but only measures the glue mismatch.
pub fn assemble_unchecked(
    e: &Evolution,
    pads: &PadRadii,
    eps: f64,
    seeds: &SeedSet,
    history: &FlowHistory,
) -> Result<AssembledMap> {
    let last = history.final_state();
    if (last.t - e.lambda()).abs() > 1e-12 * e.lambda() {
        return Err(Error::InvalidInput(format!("flow ends at t = {}, not λ", last.t)));
    }
    if last.particles.len() != seeds.points.len() {
        return Err(Error::InvalidInput("flow history does not match the seed set".into()));
    }
    let lambda = e.lambda();
    let radial = (0..e.len())
        .map(|i| {
            let l = e.sq_radius(i, lambda).max(0.0).sqrt();
            RadialCavityMap::new(e.center(i, 1.0), e.center(i, lambda), l, pads.radii[i], eps)
        })
        .collect::<Result<Vec<_>>>()?;

    let mut outer_trace_error: f64 = 0.0;
    for k in seeds.boundary_range(0) {
        let p = &last.particles[k];
        outer_trace_error = outer_trace_error.max((p.position - lambda * p.reference).norm());
    }
    let mut glue: f64 = 0.0;
    for (i, m) in radial.iter().enumerate() {
        for k in seeds.boundary_range(i + 1) {
            let p = &last.particles[k];
            glue = glue.max((p.position - m.eval(&p.reference)?).norm());
        }
    }
    Ok(AssembledMap { lambda, r0: e.r0(), radial, exterior: last.clone(), glue_mismatch: glue, outer_trace_error })
}

impl AssembledMap {
    /// Image of `x` if it lies in one of the cavity annuli.
    pub fn eval_radial(&self, x: &Vec2) -> Option<Vec2> {
        self.radial.iter().find_map(|m| {
            let r = (x - m.a).norm();
            (r >= m.eps && r <= m.pad).then(|| m.eval(x).ok()).flatten()
        })
    }

    /// Samples of the image of `∂B(a_i, ε)`, counterclockwise.
    pub fn cavity_boundary_image(&self, i: usize, samples: usize) -> Result<Vec<Vec2>> {
        let m = &self.radial[i];
        (0..samples)
            .map(|k| {
                let th = 2.0 * std::f64::consts::PI * k as f64 / samples as f64;
                m.eval(&(m.a + m.eps * crate::unit(th)))
            })
            .collect()
    }
}
