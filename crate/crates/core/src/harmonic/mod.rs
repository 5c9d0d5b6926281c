//! Laplace–Neumann problems on disks with circular holes.

mod boundary;
mod green;
mod kernels;
mod solver;

pub use boundary::{BoundaryData, CircleData};
pub use green::{
    corrector, fundamental, green_neumann_disk, green_neumann_flux_fd, reflect, reflection_identity_sides,
};
pub use kernels::{omega_op, poisson_op};
pub use solver::{
    check_compatibility, sample_boundary, solve_neumann, HarmonicSolution, SolverOptions, COMPATIBILITY_TOL,
};

/// Ingredients of the L¹ bound `B = |E|^{1/2} C_P (d^{−1/2} C_P + 1) n^{1/2} r0^{1/2}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RegularityBudget {
    pub area: f64,
    pub poincare: f64,
    pub d: f64,
    pub n: usize,
    pub r0: f64,
}

impl RegularityBudget {
    pub fn value(&self) -> f64 {
        self.area.sqrt()
            * self.poincare
            * (self.poincare / self.d.sqrt() + 1.0)
            * (self.n as f64).sqrt()
            * self.r0.sqrt()
    }
}
