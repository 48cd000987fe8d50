//! Shared test oracles, independent of the library's solver path.

/// First Dirichlet eigenvalue of the 1D p-Laplacian on `(0, L)`, computed by
/// shooting: integrate the flux system `u' = sign(F)|F|^{1/(p-1)}`,
/// `F' = -|u|^{p-2} u` from `u(0) = 0, F(0) = 1` with RK4, locate the first
/// zero crossing `x*` by bisection, and use the domain scaling
/// `lambda_1(0, L) = (x*/L)^p`.
pub fn shooting_eigenvalue_1d(p: f64, length: f64) -> f64 {
    let signed_pow = |v: f64, e: f64| {
        if v == 0.0 {
            0.0
        } else {
            v.signum() * v.abs().powf(e)
        }
    };
    let rhs = |y: [f64; 2]| -> [f64; 2] {
        [
            signed_pow(y[1], 1.0 / (p - 1.0)),
            -signed_pow(y[0], p - 1.0),
        ]
    };
    let step = |y: [f64; 2], h: f64| -> [f64; 2] {
        let k1 = rhs(y);
        let k2 = rhs([y[0] + 0.5 * h * k1[0], y[1] + 0.5 * h * k1[1]]);
        let k3 = rhs([y[0] + 0.5 * h * k2[0], y[1] + 0.5 * h * k2[1]]);
        let k4 = rhs([y[0] + h * k3[0], y[1] + h * k3[1]]);
        [
            y[0] + h / 6.0 * (k1[0] + 2.0 * k2[0] + 2.0 * k3[0] + k4[0]),
            y[1] + h / 6.0 * (k1[1] + 2.0 * k2[1] + 2.0 * k3[1] + k4[1]),
        ]
    };

    let h = 1e-4;
    let mut x = 0.0;
    let mut y = [0.0, 1.0];
    // March until u crosses zero from above (skip the initial point).
    loop {
        let y_next = step(y, h);
        if x > h && y_next[0] <= 0.0 {
            // Bisect the crossing inside [x, x + h].
            let mut lo = 0.0;
            let mut hi = h;
            for _ in 0..80 {
                let mid = 0.5 * (lo + hi);
                if step(y, mid)[0] <= 0.0 {
                    hi = mid;
                } else {
                    lo = mid;
                }
            }
            let x_star = x + 0.5 * (lo + hi);
            return (x_star / length).powf(p);
        }
        y = y_next;
        x += h;
        assert!(x < 100.0, "shooting integration ran away");
    }
}

/// Generalized pi constant `2π / (p sin(π/p))`.
pub fn pi_p(p: f64) -> f64 {
    2.0 * std::f64::consts::PI / (p * (std::f64::consts::PI / p).sin())
}

/// Closed-form torsion profile of `-Δ_p u = 1` on `(0, L)`.
pub fn torsion_1d(p: f64, l: f64, x: f64) -> f64 {
    let e = p / (p - 1.0);
    (p - 1.0) / p * ((l / 2.0).powf(e) - (x - l / 2.0).abs().powf(e))
}

/// Its maximum, attained at the midpoint.
pub fn torsion_max_1d(p: f64, l: f64) -> f64 {
    torsion_1d(p, l, l / 2.0)
}
