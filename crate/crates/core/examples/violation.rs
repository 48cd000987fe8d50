//! Construct certified counterexamples to the weak maximum principle for
//! couples where it must fail: above the curve, exactly on it, and at a
//! negative parameter. Each violation ships nonnegative data (f, g) whose
//! solution dips negative, certified by the residual of the full system.
//!
//! Run with: cargo run --release --example violation

use pcurve::geometry::Domain;
use pcurve::principles::construct_violation;
use pcurve::spectral::{curve_point, principal_curve, CurveOptions, ExponentConfig, WeightPair};

fn main() -> pcurve::Result<()> {
    let domain = Domain::interval(1.0, 256)?;
    let cfg = ExponentConfig::new(2.0, 2.0, 1.0, 1.0)?;
    let weights = WeightPair::constant(&domain, 1.0, 1.0)?;
    let eig = principal_curve(&domain, &cfg, &weights, &CurveOptions::default())?;

    let on_curve = curve_point(eig.lambda_prime, &cfg, 2.0 * eig.lambda_1)?;
    let couples = [
        (1.21 * eig.lambda_1, 1.21 * eig.mu_1),
        on_curve,
        (-eig.lambda_1, eig.mu_1),
        (1.0, -2.0),
    ];
    for (l, m) in couples {
        let v = construct_violation(l, m, &eig, &cfg, &weights)?;
        println!("couple ({l:.4}, {m:.4}) -> {:?}", v.case);
        println!(
            "  curve point used : ({:.4}, {:.4}), halvings {}",
            v.lambda_1, v.mu_1, v.halvings
        );
        println!(
            "  data             : sup f = {:.4e}, sup g = {:.4e} (both >= 0 nodewise)",
            v.f.sup_norm(),
            v.g.sup_norm()
        );
        println!(
            "  solution minima  : min u = {:+.4e}, min v = {:+.4e}",
            v.min_u, v.min_v
        );
        println!(
            "  certified        : residuals {:.2e}/{:.2e} at ({:.4}, {:.4})\n",
            v.residual_u, v.residual_v, v.certified_at.0, v.certified_at.1
        );
    }
    Ok(())
}
