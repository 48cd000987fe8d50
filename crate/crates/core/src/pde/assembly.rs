//! Assembly of the regularized p-Laplacian residual, energy, and Hessian.
//!
//! 1D uses conservative midpoint fluxes `|Du|^{p-2} Du` differenced across
//! cells; 2D uses piecewise-linear elements on the structured right-angled
//! triangulation with lumped mass. Both are gradients of the convex energy
//! `(1/p) ∫ (ε² + |∇u|²)^{p/2}`, evaluated exactly at the quadrature level.

use crate::geometry::Domain;
use crate::pde::banded::BandMatrix;

/// Diffusion coefficients at squared gradient `g2`:
/// `c0 = (ε² + g2)^{(p-2)/2}` and `c1 = (p-2) (ε² + g2)^{(p-4)/2}`.
#[inline]
fn diffusion_coeffs(p: f64, eps2: f64, g2: f64) -> (f64, f64) {
    let t = eps2 + g2;
    if t == 0.0 {
        // Degenerate cell with no regularization: the flux and its slope both
        // vanish for p > 2; for p = 2 the operator is linear.
        return (if (p - 2.0).abs() < 1e-14 { 1.0 } else { 0.0 }, 0.0);
    }
    if (p - 2.0).abs() < 1e-14 {
        return (1.0, 0.0);
    }
    let c0 = t.powf((p - 2.0) / 2.0);
    let c1 = (p - 2.0) * t.powf((p - 4.0) / 2.0);
    (c0, c1)
}

/// P1 shape gradients and the (positive) area of a triangle.
#[inline]
fn tri_geometry(domain: &Domain, t: &[usize; 3]) -> ([[f64; 2]; 3], f64) {
    let c = domain.coords();
    let (r0, r1, r2) = (c[t[0]], c[t[1]], c[t[2]]);
    let det = (r1[0] - r0[0]) * (r2[1] - r0[1]) - (r2[0] - r0[0]) * (r1[1] - r0[1]);
    let inv = 1.0 / det;
    let grads = [
        [(r1[1] - r2[1]) * inv, (r2[0] - r1[0]) * inv],
        [(r2[1] - r0[1]) * inv, (r0[0] - r2[0]) * inv],
        [(r0[1] - r1[1]) * inv, (r1[0] - r0[0]) * inv],
    ];
    (grads, det.abs() / 2.0)
}

/// Unlumped operator `A(u)_i = ∂/∂u_i (1/p) ∫ (ε² + |∇u|²)^{p/2}` over the
/// interior unknowns. Dividing by the lumped mass gives the pointwise value
/// of `-Δ_p u` (regularized).
pub(crate) fn operator_unlumped(domain: &Domain, p: f64, eps: f64, u: &[f64]) -> Vec<f64> {
    let eps2 = eps * eps;
    let mut out = vec![0.0; domain.interior().len()];
    if domain.dim() == 1 {
        let h = domain.spacing()[0];
        for &(a, b) in domain.cells_1d() {
            let d = (u[b] - u[a]) / h;
            let (c0, _) = diffusion_coeffs(p, eps2, d * d);
            let flux = c0 * d;
            if let Some(ia) = domain.interior_index(a) {
                out[ia] -= flux;
            }
            if let Some(ib) = domain.interior_index(b) {
                out[ib] += flux;
            }
        }
    } else {
        for t in domain.triangles() {
            let (grads, area) = tri_geometry(domain, t);
            let mut g = [0.0; 2];
            for k in 0..3 {
                g[0] += u[t[k]] * grads[k][0];
                g[1] += u[t[k]] * grads[k][1];
            }
            let (c0, _) = diffusion_coeffs(p, eps2, g[0] * g[0] + g[1] * g[1]);
            for k in 0..3 {
                if let Some(ik) = domain.interior_index(t[k]) {
                    out[ik] += area * c0 * (g[0] * grads[k][0] + g[1] * grads[k][1]);
                }
            }
        }
    }
    out
}

/// `(1/p) ∫ (ε² + |∇u|²)^{p/2}` by midpoint/element quadrature.
pub(crate) fn dirichlet_energy(domain: &Domain, p: f64, eps: f64, u: &[f64]) -> f64 {
    let eps2 = eps * eps;
    let mut j = 0.0;
    if domain.dim() == 1 {
        let h = domain.spacing()[0];
        for &(a, b) in domain.cells_1d() {
            let d = (u[b] - u[a]) / h;
            j += h * (eps2 + d * d).powf(p / 2.0);
        }
    } else {
        for t in domain.triangles() {
            let (grads, area) = tri_geometry(domain, t);
            let mut g = [0.0; 2];
            for k in 0..3 {
                g[0] += u[t[k]] * grads[k][0];
                g[1] += u[t[k]] * grads[k][1];
            }
            j += area * (eps2 + g[0] * g[0] + g[1] * g[1]).powf(p / 2.0);
        }
    }
    j / p
}

/// Lumped load `Σ_i m_i f_i u_i` over interior nodes.
pub(crate) fn load_dot(domain: &Domain, f: &[f64], u: &[f64]) -> f64 {
    domain
        .interior()
        .iter()
        .map(|&i| domain.lumped_mass(i) * f[i] * u[i])
        .sum()
}

/// Bandwidth of the interior-unknown coupling graph.
pub(crate) fn bandwidth(domain: &Domain) -> usize {
    if domain.dim() == 1 {
        return 1;
    }
    let mut bw = 1usize;
    for t in domain.triangles() {
        for a in 0..3 {
            for b in 0..a {
                if let (Some(ia), Some(ib)) =
                    (domain.interior_index(t[a]), domain.interior_index(t[b]))
                {
                    bw = bw.max(ia.abs_diff(ib));
                }
            }
        }
    }
    bw
}

/// Assemble the Hessian of the regularized energy at `u` into `out`.
pub(crate) fn hessian(domain: &Domain, p: f64, eps: f64, u: &[f64], out: &mut BandMatrix) {
    let eps2 = eps * eps;
    out.reset();
    if domain.dim() == 1 {
        let h = domain.spacing()[0];
        for &(a, b) in domain.cells_1d() {
            let d = (u[b] - u[a]) / h;
            let (c0, c1) = diffusion_coeffs(p, eps2, d * d);
            // dF/dD of the flux F(D) = c0 D, per unit cell.
            let k = (c0 + c1 * d * d) / h;
            let ia = domain.interior_index(a);
            let ib = domain.interior_index(b);
            if let Some(ia) = ia {
                out.add(ia, ia, k);
            }
            if let Some(ib) = ib {
                out.add(ib, ib, k);
            }
            if let (Some(ia), Some(ib)) = (ia, ib) {
                out.add(ia, ib, -k);
            }
        }
    } else {
        for t in domain.triangles() {
            let (grads, area) = tri_geometry(domain, t);
            let mut g = [0.0; 2];
            for k in 0..3 {
                g[0] += u[t[k]] * grads[k][0];
                g[1] += u[t[k]] * grads[k][1];
            }
            let (c0, c1) = diffusion_coeffs(p, eps2, g[0] * g[0] + g[1] * g[1]);
            let gdot: Vec<f64> = grads.iter().map(|gr| g[0] * gr[0] + g[1] * gr[1]).collect();
            for a in 0..3 {
                let Some(ia) = domain.interior_index(t[a]) else {
                    continue;
                };
                for b in 0..=a {
                    let Some(ib) = domain.interior_index(t[b]) else {
                        continue;
                    };
                    let dot = grads[a][0] * grads[b][0] + grads[a][1] * grads[b][1];
                    out.add(ia, ib, area * (c0 * dot + c1 * gdot[a] * gdot[b]));
                }
            }
        }
    }
}
