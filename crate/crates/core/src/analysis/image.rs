use std::f64::consts::PI;

use crate::flow::{AssembledMap, SeedSet};
use crate::{Result, Vec2};

/// Image of one cavity boundary `∂B(a_i, ε)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ImageEntry {
    pub cavity: usize,
    pub eps: f64,
    pub area: f64,
    /// `v_i + π ε²`
    pub target: f64,
    pub winding: i64,
    /// Standard deviation of `|u − z_i(λ)|` over the samples.
    pub radial_std: f64,
    /// `L_i(λ)`
    pub cavity_radius: f64,
}

impl ImageEntry {
    pub fn rel_area_error(&self) -> f64 {
        (self.area - self.target).abs() / self.target
    }
}

/// Signed area of a closed polygon (shoelace).
pub fn polygon_area(pts: &[Vec2]) -> f64 {
    let n = pts.len();
    0.5 * (0..n)
        .map(|k| {
            let (p, q) = (pts[k], pts[(k + 1) % n]);
            p.x * q.y - q.x * p.y
        })
        .sum::<f64>()
}

/// Winding number of a closed polygon about `z`.
pub fn winding_number(pts: &[Vec2], z: &Vec2) -> i64 {
    let n = pts.len();
    let mut total = 0.0;
    for k in 0..n {
        let a = pts[k] - z;
        let b = pts[(k + 1) % n] - z;
        total += (a.x * b.y - a.y * b.x).atan2(a.dot(&b));
    }
    (total / (2.0 * PI)).round() as i64
}

pub fn image_area(map: &AssembledMap, cavity: usize, eps_volume: f64, samples: usize) -> Result<ImageEntry> {
    let pts = map.cavity_boundary_image(cavity, samples)?;
    let m = &map.radial[cavity];
    let radii: Vec<f64> = pts.iter().map(|p| (p - m.z).norm()).collect();
    let mean = radii.iter().sum::<f64>() / samples as f64;
    let var = radii.iter().map(|r| (r - mean).powi(2)).sum::<f64>() / samples as f64;
    Ok(ImageEntry {
        cavity,
        eps: m.eps,
        area: polygon_area(&pts),
        target: eps_volume + PI * m.eps * m.eps,
        winding: winding_number(&pts, &m.z),
        radial_std: var.sqrt(),
        cavity_radius: m.l,
    })
}

/// Area bookkeeping of the deformed body: `Σ det F · w` over the exterior
/// cells, plus `π(R_i² − ε²)` for each cavity annulus (det = 1), plus the
/// cavity image areas. Returns `(total, λ² π R0²)`.
pub fn deformed_area_balance(map: &AssembledMap, seeds: &SeedSet, images: &[ImageEntry]) -> (f64, f64) {
    let exterior: f64 =
        seeds.grid.cells.iter().zip(&map.exterior.particles).map(|(c, p)| p.gradient.determinant() * c.weight).sum();
    let annuli: f64 = map.radial.iter().map(|m| PI * (m.pad * m.pad - m.eps * m.eps)).sum();
    let cavities: f64 = images.iter().map(|i| i.area).sum();
    (exterior + annuli + cavities, map.lambda * map.lambda * PI * map.r0 * map.r0)
}

/// Pairwise gaps `|z_i − z_j| − L_i − L_j` of the image cavity disks.
pub fn image_cavity_gaps(map: &AssembledMap) -> Vec<(usize, usize, f64)> {
    let mut out = Vec::new();
    for (i, a) in map.radial.iter().enumerate() {
        for (j, b) in map.radial.iter().enumerate().skip(i + 1) {
            out.push((i, j, (a.z - b.z).norm() - a.l - b.l));
        }
    }
    out
}
