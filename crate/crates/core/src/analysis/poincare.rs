use nalgebra::{DMatrix, SymmetricEigen};

use crate::geometry::HoleDomain;
use crate::quadrature::subtractive_rule;
use crate::{Error, Result};

/// `(T_k(x), T_k′(x))` for `k = 0..=p`.
fn chebyshev(p: usize, x: f64) -> (Vec<f64>, Vec<f64>) {
    let mut t = vec![0.0; p + 1];
    let mut u = vec![0.0; p + 1]; // U_k
    t[0] = 1.0;
    u[0] = 1.0;
    if p >= 1 {
        t[1] = x;
        u[1] = 2.0 * x;
    }
    for k in 2..=p {
        t[k] = 2.0 * x * t[k - 1] - t[k - 2];
        u[k] = 2.0 * x * u[k - 1] - u[k - 2];
    }
    let dt = (0..=p).map(|k| if k == 0 { 0.0 } else { k as f64 * u[k - 1] }).collect();
    (t, dt)
}

/// Smallest nonzero Neumann eigenvalue estimate `μ` from the Ritz method on
/// the polynomials `T_a(X) T_b(Y)`, `1 ≤ a + b ≤ degree`, with
/// `(X, Y) = (x − z0)/r0`. Integrals use the subtractive polar Gauss rule,
/// exact for these polynomials.
pub fn neumann_eigenvalue(dom: &HoleDomain, degree: usize) -> Result<f64> {
    if degree < 1 {
        return Err(Error::InvalidInput("basis degree must be at least 1".into()));
    }
    let rule = subtractive_rule(dom, degree + 2, 2 * degree + 4);
    let r0 = dom.outer.radius;
    let c = dom.outer.center;
    let index: Vec<(usize, usize)> =
        (0..=degree).flat_map(|a| (0..=degree - a).map(move |b| (a, b))).filter(|&(a, b)| a + b >= 1).collect();
    let nb = index.len();
    let mut mass = DMatrix::<f64>::zeros(nb, nb);
    let mut stiff = DMatrix::<f64>::zeros(nb, nb);
    let mut mean = vec![0.0; nb];
    let mut val = vec![0.0; nb];
    let mut gx = vec![0.0; nb];
    let mut gy = vec![0.0; nb];
    for (p, w) in rule.points.iter().zip(&rule.weights) {
        let (tx, dtx) = chebyshev(degree, (p.x - c.x) / r0);
        let (ty, dty) = chebyshev(degree, (p.y - c.y) / r0);
        for (k, &(a, b)) in index.iter().enumerate() {
            val[k] = tx[a] * ty[b];
            gx[k] = dtx[a] * ty[b] / r0;
            gy[k] = tx[a] * dty[b] / r0;
            mean[k] += w * val[k];
        }
        for i in 0..nb {
            for j in i..nb {
                mass[(i, j)] += w * val[i] * val[j];
                stiff[(i, j)] += w * (gx[i] * gx[j] + gy[i] * gy[j]);
            }
        }
    }
    let area = rule.total_weight();
    for i in 0..nb {
        for j in i..nb {
            mass[(i, j)] -= mean[i] * mean[j] / area;
            mass[(j, i)] = mass[(i, j)];
            stiff[(j, i)] = stiff[(i, j)];
        }
    }
    // reduce to a standard problem on the numerically nonsingular part of the mass matrix
    let eig = SymmetricEigen::new(mass);
    let top = eig.eigenvalues.max();
    let keep: Vec<usize> = (0..nb).filter(|&k| eig.eigenvalues[k] > 1e-12 * top).collect();
    let mut w = DMatrix::<f64>::zeros(nb, keep.len());
    for (col, &k) in keep.iter().enumerate() {
        let s = eig.eigenvalues[k].sqrt();
        w.set_column(col, &(eig.eigenvectors.column(k) / s));
    }
    let reduced = w.transpose() * stiff * &w;
    let reduced = 0.5 * (&reduced + reduced.transpose());
    let mu = SymmetricEigen::new(reduced).eigenvalues.min();
    if !(mu > 0.0) {
        return Err(Error::Solver(format!("Ritz eigenvalue {mu} is not positive")));
    }
    Ok(mu)
}

/// Estimate of `C_P(E) = sup ‖φ‖_{L²}/‖Dφ‖_{L²}` over mean-zero `φ`, i.e.
/// `μ^{−1/2}`. The Ritz eigenvalue is an upper bound, so the estimate
/// approaches `C_P` from below as `degree` grows.
pub fn poincare_constant(dom: &HoleDomain, degree: usize) -> Result<f64> {
    Ok(1.0 / neumann_eigenvalue(dom, degree)?.sqrt())
}
