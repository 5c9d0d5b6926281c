//! Energies, cavity images, injectivity, Poincaré constants and the
//! estimate-validation suite.

mod energy;
mod estimates;
mod image;
mod injectivity;
mod poincare;

pub use energy::{
    damped_energy_profile, dirichlet_energy_flow, energy_report, least_squares_line, EnergyReport, EnergyRow,
};
pub use estimates::*;
pub use image::{deformed_area_balance, image_area, image_cavity_gaps, polygon_area, winding_number, ImageEntry};
pub use injectivity::{curved_cells, injectivity_check, injectivity_check_curved, InjectivityReport};
pub use poincare::{neumann_eigenvalue, poincare_constant};
