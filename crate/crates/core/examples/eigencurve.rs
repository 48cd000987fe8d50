//! Compute the principal curve constant and the positive eigenpair on the
//! unit interval, and compare against the closed form for p = q = 2.
//!
//! Run with: cargo run --release --example eigencurve

use pcurve::geometry::Domain;
use pcurve::spectral::{curve_point, principal_curve, CurveOptions, ExponentConfig, WeightPair};

fn main() -> pcurve::Result<()> {
    let domain = Domain::interval(1.0, 512)?;
    let cfg = ExponentConfig::new(2.0, 2.0, 1.0, 1.0)?;
    let weights = WeightPair::constant(&domain, 1.0, 1.0)?;

    let eig = principal_curve(&domain, &cfg, &weights, &CurveOptions::default())?;
    let exact = std::f64::consts::PI.powi(4);

    println!(
        "domain            : unit interval, {} cells",
        domain.resolution()
    );
    println!("lambda_prime      : {:.8}", eig.lambda_prime);
    println!("closed form (pi^4): {:.8}", exact);
    println!(
        "relative error    : {:.3e}",
        (eig.lambda_prime - exact).abs() / exact
    );
    println!("kappa             : {:.6e}", eig.kappa);
    println!("power iterations  : {}", eig.iterations);
    println!(
        "eigen residuals   : {:.2e} (p-eq), {:.2e} (q-eq)",
        eig.residual_p, eig.residual_q
    );
    println!("symmetric point   : ({:.6}, {:.6})", eig.lambda_1, eig.mu_1);

    // Walk a few points along the curve.
    println!("\ncurve points (lambda, mu):");
    for lambda in [1.0, eig.lambda_1 / 2.0, eig.lambda_1, 4.0 * eig.lambda_1] {
        let (l, m) = curve_point(eig.lambda_prime, &cfg, lambda)?;
        println!("  ({l:10.4}, {m:10.4})");
    }
    Ok(())
}
