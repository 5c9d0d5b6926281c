use crate::flow::{radial_annulus_energy, FlowHistory, FlowState, SeedSet};
use crate::geometry::{Evolution, PadRadii};
use crate::{Error, Result};

/// Midpoint quadrature of `|F|²/2` over the reference cells.
pub fn dirichlet_energy_flow(state: &FlowState, seeds: &SeedSet) -> Result<f64> {
    if state.particles.len() < seeds.grid.cells.len() {
        return Err(Error::InvalidInput("flow state lacks the cell particles".into()));
    }
    Ok(seeds.grid.cells.iter().zip(&state.particles).map(|(c, p)| 0.5 * p.gradient.norm_squared() * c.weight).sum())
}

/// `(t, log(e^{−C t} ∫|F|²))` at each checkpoint; logarithms keep large
/// `C` from underflowing.
pub fn damped_energy_profile(history: &FlowHistory, seeds: &SeedSet, c: f64) -> Result<Vec<(f64, f64)>> {
    history.states.iter().map(|s| Ok((s.t, (2.0 * dirichlet_energy_flow(s, seeds)?).ln() - c * s.t))).collect()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnergyRow {
    pub eps: f64,
    pub flow: f64,
    pub radial: f64,
    pub total: f64,
    /// `total − (Σ v_i)|log ε|`
    pub renormalized: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EnergyReport {
    pub rows: Vec<EnergyRow>,
    pub total_volume: f64,
    /// Least-squares slope of total energy against `|log ε|` over the four
    /// smallest `ε`.
    pub slope: f64,
    pub intercept: f64,
    /// `max − min` of the renormalized values.
    pub spread: f64,
}

impl EnergyReport {
    pub fn slope_rel_error(&self) -> f64 {
        (self.slope - self.total_volume).abs() / self.total_volume
    }
}

/// Ordinary least squares fit `y = a x + b`; returns `(a, b)`.
pub fn least_squares_line(xs: &[f64], ys: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let a = sxy / sxx;
    (a, my - a * mx)
}

/// Energy ladder for a computed flow energy: the exterior energy does not
/// depend on `ε`, the cavity annuli contribute their closed-form energy.
pub fn energy_report(e: &Evolution, pads: &PadRadii, flow_energy: f64, ladder: &[f64]) -> Result<EnergyReport> {
    if ladder.len() < 2 {
        return Err(Error::InvalidInput("ε ladder needs at least two values".into()));
    }
    if ladder.windows(2).any(|w| !(w[1] < w[0])) {
        return Err(Error::InvalidInput("ε ladder must be strictly decreasing".into()));
    }
    let lambda = e.lambda();
    let total_volume: f64 = (0..e.len()).map(|i| std::f64::consts::PI * e.sq_radius(i, lambda)).sum();
    let mut rows = Vec::with_capacity(ladder.len());
    for &eps in ladder {
        let mut radial = 0.0;
        for i in 0..e.len() {
            let l = e.sq_radius(i, lambda).max(0.0).sqrt();
            radial += radial_annulus_energy(l, pads.radii[i], eps)?;
        }
        let total = flow_energy + radial;
        rows.push(EnergyRow {
            eps,
            flow: flow_energy,
            radial,
            total,
            renormalized: total - total_volume * eps.ln().abs(),
        });
    }
    let tail = &rows[rows.len().saturating_sub(4)..];
    let xs: Vec<f64> = tail.iter().map(|r| r.eps.ln().abs()).collect();
    let ys: Vec<f64> = tail.iter().map(|r| r.total).collect();
    let (slope, intercept) = least_squares_line(&xs, &ys);
    let lo = rows.iter().map(|r| r.renormalized).fold(f64::INFINITY, f64::min);
    let hi = rows.iter().map(|r| r.renormalized).fold(f64::NEG_INFINITY, f64::max);
    Ok(EnergyReport { rows, total_volume, slope, intercept, spread: hi - lo })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn line_fit_is_exact_on_lines() {
        let (a, b) = least_squares_line(&[1.0, 2.0, 4.0], &[5.0, 8.0, 14.0]);
        assert!((a - 3.0).abs() < 1e-14 && (b - 2.0).abs() < 1e-14);
    }
}
