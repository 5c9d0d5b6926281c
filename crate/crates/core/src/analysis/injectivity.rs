use std::collections::{HashMap, HashSet};

use crate::{Mat2, Vec2};

#[derive(Debug, Clone, Default, PartialEq)]
pub struct InjectivityReport {
    pub quads_checked: usize,
    /// Quads with non-positive signed area.
    pub orientation_violations: Vec<usize>,
    /// Pairs of quads without a shared node whose images intersect.
    pub overlaps: Vec<(usize, usize)>,
}

impl InjectivityReport {
    pub fn violations(&self) -> usize {
        self.orientation_violations.len() + self.overlaps.len()
    }
}

fn cross(a: Vec2, b: Vec2) -> f64 {
    a.x * b.y - a.y * b.x
}

fn segments_cross(p1: Vec2, p2: Vec2, q1: Vec2, q2: Vec2) -> bool {
    let d1 = cross(p2 - p1, q1 - p1);
    let d2 = cross(p2 - p1, q2 - p1);
    let d3 = cross(q2 - q1, p1 - q1);
    let d4 = cross(q2 - q1, p2 - q1);
    d1 * d2 < 0.0 && d3 * d4 < 0.0
}

fn inside(poly: &[Vec2], p: Vec2) -> bool {
    let n = poly.len();
    let mut w = 0.0;
    for k in 0..n {
        let a = poly[k] - p;
        let b = poly[(k + 1) % n] - p;
        w += cross(a, b).atan2(a.dot(&b));
    }
    w.abs() > std::f64::consts::PI
}

fn polygons_intersect(a: &[Vec2], b: &[Vec2]) -> bool {
    let (na, nb) = (a.len(), b.len());
    for i in 0..na {
        for j in 0..nb {
            if segments_cross(a[i], a[(i + 1) % na], b[j], b[(j + 1) % nb]) {
                return true;
            }
        }
    }
    inside(a, b[0]) || inside(b, a[0])
}

fn signed_area(p: &[Vec2]) -> f64 {
    let n = p.len();
    0.5 * (0..n).map(|i| cross(p[i], p[(i + 1) % n])).sum::<f64>()
}

/// Orientation and overlap check of deformed quads with straight edges.
/// `quads` index into `positions` (counterclockwise in the reference grid).
pub fn injectivity_check(positions: &[Vec2], quads: &[[usize; 4]]) -> InjectivityReport {
    let polys: Vec<Vec<Vec2>> = quads.iter().map(|q| q.iter().map(|&k| positions[k]).collect()).collect();
    polygon_check(&polys, quads)
}

/// Images of the quad edges as cubic Hermite curves through the deformed
/// nodes with tangents `F e`, `e` the reference edge, each sampled at
/// `subdivisions` segments. Faithful to `O(h⁴)` where straight edges are
/// only `O(h²)`, which matters where the map bends cells into thin arcs.
pub fn curved_cells(
    positions: &[Vec2],
    gradients: &[Mat2],
    reference: &[Vec2],
    quads: &[[usize; 4]],
    subdivisions: usize,
) -> Vec<Vec<Vec2>> {
    let m = subdivisions.max(1);
    quads
        .iter()
        .map(|q| {
            let mut poly = Vec::with_capacity(4 * m);
            for i in 0..4 {
                let (a, b) = (q[i], q[(i + 1) % 4]);
                let e = reference[b] - reference[a];
                let (ta, tb) = (gradients[a] * e, gradients[b] * e);
                for k in 0..m {
                    let s = k as f64 / m as f64;
                    let (s2, s3) = (s * s, s * s * s);
                    poly.push(
                        (2.0 * s3 - 3.0 * s2 + 1.0) * positions[a]
                            + (s3 - 2.0 * s2 + s) * ta
                            + (-2.0 * s3 + 3.0 * s2) * positions[b]
                            + (s3 - s2) * tb,
                    );
                }
            }
            poly
        })
        .collect()
}

/// [`injectivity_check`] on the curved cell images of [`curved_cells`].
pub fn injectivity_check_curved(
    positions: &[Vec2],
    gradients: &[Mat2],
    reference: &[Vec2],
    quads: &[[usize; 4]],
    subdivisions: usize,
) -> InjectivityReport {
    polygon_check(&curved_cells(positions, gradients, reference, quads, subdivisions), quads)
}

fn polygon_check(polys: &[Vec<Vec2>], quads: &[[usize; 4]]) -> InjectivityReport {
    let mut report = InjectivityReport { quads_checked: quads.len(), ..Default::default() };
    for (k, p) in polys.iter().enumerate() {
        if !(signed_area(p) > 0.0) {
            report.orientation_violations.push(k);
        }
    }
    // uniform spatial hash keyed by the mean bounding-box size
    let boxes: Vec<(Vec2, Vec2)> = polys
        .iter()
        .map(|p| {
            let lo = p.iter().fold(Vec2::repeat(f64::INFINITY), |a, b| a.inf(b));
            let hi = p.iter().fold(Vec2::repeat(f64::NEG_INFINITY), |a, b| a.sup(b));
            (lo, hi)
        })
        .collect();
    if boxes.is_empty() {
        return report;
    }
    let cell = boxes.iter().map(|(lo, hi)| (hi - lo).max()).sum::<f64>() / boxes.len() as f64;
    let cell = if cell > 0.0 { cell } else { 1.0 };
    let key = |v: f64| (v / cell).floor() as i64;
    let mut buckets: HashMap<(i64, i64), Vec<usize>> = HashMap::new();
    for (k, (lo, hi)) in boxes.iter().enumerate() {
        for ix in key(lo.x)..=key(hi.x) {
            for iy in key(lo.y)..=key(hi.y) {
                buckets.entry((ix, iy)).or_default().push(k);
            }
        }
    }
    let mut seen = HashSet::new();
    for members in buckets.values() {
        for (s, &a) in members.iter().enumerate() {
            for &b in &members[s + 1..] {
                let pair = (a.min(b), a.max(b));
                if !seen.insert(pair) {
                    continue;
                }
                if quads[a].iter().any(|k| quads[b].contains(k)) {
                    continue;
                }
                let (la, ha) = boxes[a];
                let (lb, hb) = boxes[b];
                if la.x > hb.x || lb.x > ha.x || la.y > hb.y || lb.y > ha.y {
                    continue;
                }
                if polygons_intersect(&polys[a], &polys[b]) {
                    report.overlaps.push(pair);
                }
            }
        }
    }
    report.overlaps.sort_unstable();
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::vec2;

    fn lattice(n: usize) -> (Vec<Vec2>, Vec<[usize; 4]>) {
        let mut pts = Vec::new();
        for j in 0..=n {
            for i in 0..=n {
                pts.push(vec2(i as f64, j as f64));
            }
        }
        let id = |i: usize, j: usize| j * (n + 1) + i;
        let mut quads = Vec::new();
        for j in 0..n {
            for i in 0..n {
                quads.push([id(i, j), id(i + 1, j), id(i + 1, j + 1), id(i, j + 1)]);
            }
        }
        (pts, quads)
    }

    #[test]
    fn sheared_lattice_is_clean() {
        let (mut pts, quads) = lattice(6);
        for p in &mut pts {
            *p = vec2(p.x + 0.3 * p.y, p.y + 0.05 * p.x * p.x);
        }
        assert_eq!(injectivity_check(&pts, &quads).violations(), 0);
    }

    #[test]
    fn folded_node_is_flagged() {
        let (mut pts, quads) = lattice(6);
        // reflect node (3,3) across its right neighbour
        let k = 3 * 7 + 3;
        pts[k] = 2.0 * pts[k + 1] - pts[k] + vec2(0.5, 0.0);
        let r = injectivity_check(&pts, &quads);
        assert!(!r.orientation_violations.is_empty());
        let grads = vec![Mat2::identity(); pts.len()];
        let (reference, _) = lattice(6);
        assert!(injectivity_check_curved(&pts, &grads, &reference, &quads, 4).violations() >= 1);
    }

    #[test]
    fn curved_cells_follow_a_rotation_exactly_at_nodes() {
        let (reference, quads) = lattice(3);
        let rot = Mat2::new(0.0, -1.0, 1.0, 0.0);
        let pts: Vec<Vec2> = reference.iter().map(|p| rot * p).collect();
        let grads = vec![rot; pts.len()];
        let cells = curved_cells(&pts, &grads, &reference, &quads, 4);
        assert_eq!(cells[0].len(), 16);
        assert!((cells[0][2] - rot * vec2(0.5, 0.0)).norm() < 1e-15);
        assert_eq!(injectivity_check_curved(&pts, &grads, &reference, &quads, 4).violations(), 0);
    }
}
