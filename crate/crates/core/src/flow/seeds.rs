use std::f64::consts::PI;

use crate::geometry::Circle;
use crate::{Error, Result, Vec2};

/// Subsamples per side used to resolve cut cells.
const CUT_SUBSAMPLES: usize = 16;

/// Quadrature point of one reference cell.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CellPoint {
    pub i: usize,
    pub j: usize,
    pub point: Vec2,
    pub weight: f64,
}

/// Cartesian `n × n` grid on `[−R0, R0]²` restricted to the reference
/// exterior domain `B(0, R0) \ ∪ B̄(a_i, R_i)`.
///
/// Cells inside the domain carry their centre with weight `h²`; cut cells
/// carry the centroid and area of their inside part.
#[derive(Debug, Clone)]
pub struct ReferenceGrid {
    pub n: usize,
    pub r0: f64,
    pub pads: Vec<Circle>,
    pub nodes: Vec<Vec2>,
    pub node_inside: Vec<bool>,
    pub cells: Vec<CellPoint>,
}

impl ReferenceGrid {
    pub fn new(r0: f64, pads: Vec<Circle>, n: usize) -> Result<Self> {
        if n < 2 || !(r0 > 0.0) {
            return Err(Error::InvalidInput(format!("grid needs n ≥ 2 and R0 > 0, got n = {n}")));
        }
        let h = 2.0 * r0 / n as f64;
        let mut grid = Self {
            n,
            r0,
            pads,
            nodes: Vec::with_capacity((n + 1) * (n + 1)),
            node_inside: Vec::new(),
            cells: Vec::new(),
        };
        for j in 0..=n {
            for i in 0..=n {
                let p = Vec2::new(-r0 + i as f64 * h, -r0 + j as f64 * h);
                grid.nodes.push(p);
            }
        }
        grid.node_inside = grid.nodes.iter().map(|p| grid.signed_distance(p) >= 0.0).collect();
        let half_diag = h * std::f64::consts::FRAC_1_SQRT_2;
        for j in 0..n {
            for i in 0..n {
                let lo = Vec2::new(-r0 + i as f64 * h, -r0 + j as f64 * h);
                let c = lo + Vec2::new(0.5 * h, 0.5 * h);
                let s = grid.signed_distance(&c);
                if s >= half_diag {
                    grid.cells.push(CellPoint { i, j, point: c, weight: h * h });
                } else if s > -half_diag {
                    let sub = h / CUT_SUBSAMPLES as f64;
                    let (mut count, mut sum) = (0usize, Vec2::zeros());
                    for b in 0..CUT_SUBSAMPLES {
                        for a in 0..CUT_SUBSAMPLES {
                            let p = lo + Vec2::new((a as f64 + 0.5) * sub, (b as f64 + 0.5) * sub);
                            if grid.signed_distance(&p) > 0.0 {
                                count += 1;
                                sum += p;
                            }
                        }
                    }
                    if count > 0 {
                        let point = grid.project_inside(&(sum / count as f64));
                        grid.cells.push(CellPoint {
                            i,
                            j,
                            point,
                            weight: h * h * count as f64 / (CUT_SUBSAMPLES * CUT_SUBSAMPLES) as f64,
                        });
                    }
                }
            }
        }
        Ok(grid)
    }

    pub fn spacing(&self) -> f64 {
        2.0 * self.r0 / self.n as f64
    }

    pub fn node_index(&self, i: usize, j: usize) -> usize {
        j * (self.n + 1) + i
    }

    /// Signed distance to the boundary of the reference domain, positive
    /// inside.
    pub fn signed_distance(&self, x: &Vec2) -> f64 {
        let mut s = self.r0 - x.norm();
        for c in &self.pads {
            s = s.min((x - c.center).norm() - c.radius);
        }
        s
    }

    fn project_inside(&self, x: &Vec2) -> Vec2 {
        if self.signed_distance(x) >= 0.0 {
            return *x;
        }
        let mut p = *x;
        if p.norm() > self.r0 {
            p *= self.r0 / p.norm();
        }
        for c in &self.pads {
            let d = p - c.center;
            if d.norm() < c.radius {
                p = c.center + d * (c.radius / d.norm());
            }
        }
        p
    }

    /// Sum of the cell weights.
    pub fn area(&self) -> f64 {
        self.cells.iter().map(|c| c.weight).sum()
    }

    /// Exact area of the reference domain.
    pub fn exact_area(&self) -> f64 {
        PI * (self.r0 * self.r0 - self.pads.iter().map(|c| c.radius * c.radius).sum::<f64>())
    }

    /// Cells lying entirely in the closed domain, as node indices in
    /// counterclockwise order. Corners inside are not enough: a pad can
    /// bulge through an edge.
    pub fn quads(&self) -> Vec<[usize; 4]> {
        let h = self.spacing();
        let mut out = Vec::new();
        for j in 0..self.n {
            for i in 0..self.n {
                let q = [
                    self.node_index(i, j),
                    self.node_index(i + 1, j),
                    self.node_index(i + 1, j + 1),
                    self.node_index(i, j + 1),
                ];
                let lo = self.nodes[q[0]];
                let clear = self.pads.iter().all(|c| {
                    let nearest = Vec2::new(c.center.x.clamp(lo.x, lo.x + h), c.center.y.clamp(lo.y, lo.y + h));
                    (nearest - c.center).norm() >= c.radius
                });
                if clear && q.iter().all(|&k| self.node_inside[k]) {
                    out.push(q);
                }
            }
        }
        out
    }
}

/// `samples` points on the outer circle `|x| = R0`, then `samples` on each
/// pad circle, at angles `2πk/samples`.
pub fn boundary_seeds(r0: f64, pads: &[Circle], samples: usize) -> Vec<Vec2> {
    let mut out = Vec::with_capacity(samples * (pads.len() + 1));
    let outer = Circle::new(Vec2::zeros(), r0);
    for c in std::iter::once(&outer).chain(pads) {
        for k in 0..samples {
            out.push(c.point(2.0 * PI * k as f64 / samples as f64));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::vec2;

    #[test]
    fn cut_cell_area_converges() {
        let pads = vec![Circle::new(vec2(0.5, 0.0), 0.1), Circle::new(vec2(-0.5, 0.0), 0.1)];
        let g = ReferenceGrid::new(1.0, pads, 50).unwrap();
        let rel = (g.area() - g.exact_area()).abs() / g.exact_area();
        assert!(rel < 1e-3, "{rel}");
        assert!(g.cells.iter().all(|c| g.signed_distance(&c.point) >= -1e-12));
    }

    #[test]
    fn quads_use_inside_nodes() {
        let g = ReferenceGrid::new(1.0, vec![Circle::new(Vec2::zeros(), 0.2)], 20).unwrap();
        for q in g.quads() {
            for k in q {
                assert!(g.signed_distance(&g.nodes[k]) >= 0.0);
            }
            let mid = 0.25 * q.iter().map(|&k| g.nodes[k]).sum::<Vec2>();
            assert!(mid.norm() > 0.2);
        }
        // corners (0.1, 0) ... (0.2, 0.1) lie outside the pad but its edge bulges through y = 0
        let g = ReferenceGrid::new(1.0, vec![Circle::new(vec2(0.15, -0.08), 0.09)], 20).unwrap();
        let cut = [g.node_index(11, 10), g.node_index(12, 10), g.node_index(12, 11), g.node_index(11, 11)];
        assert!(cut.iter().all(|&k| g.node_inside[k]));
        assert!(!g.quads().contains(&cut));
    }
}

/// All particles of a run: cell quadrature points, grid nodes inside the
/// domain, then boundary samples (outer circle first, then each pad).
#[derive(Debug, Clone)]
pub struct SeedSet {
    pub grid: ReferenceGrid,
    pub points: Vec<Vec2>,
    /// Seed index of each grid node, `None` outside the domain.
    pub node_seed: Vec<Option<usize>>,
    pub boundary_start: usize,
    pub boundary_samples: usize,
}

impl SeedSet {
    pub fn new(grid: ReferenceGrid, boundary_samples: usize) -> Self {
        let mut points: Vec<Vec2> = grid.cells.iter().map(|c| c.point).collect();
        let mut node_seed = vec![None; grid.nodes.len()];
        for (k, p) in grid.nodes.iter().enumerate() {
            if grid.node_inside[k] {
                node_seed[k] = Some(points.len());
                points.push(*p);
            }
        }
        let boundary_start = points.len();
        points.extend(boundary_seeds(grid.r0, &grid.pads, boundary_samples));
        Self { grid, points, node_seed, boundary_start, boundary_samples }
    }

    pub fn cell_range(&self) -> std::ops::Range<usize> {
        0..self.grid.cells.len()
    }

    /// Seed indices of the samples on boundary circle `k` (0 = outer,
    /// `i + 1` = pad `i`).
    pub fn boundary_range(&self, k: usize) -> std::ops::Range<usize> {
        let s = self.boundary_start + k * self.boundary_samples;
        s..s + self.boundary_samples
    }

    /// Angle of boundary sample `j`.
    pub fn boundary_angle(&self, j: usize) -> f64 {
        2.0 * PI * j as f64 / self.boundary_samples as f64
    }
}
