//! Verify the weak and strong comparison principles below the curve:
//! ordered nonnegative data produce pointwise ordered solutions, strictly
//! ordered inside when the data differ.
//!
//! Run with: cargo run --release --example comparison

use pcurve::geometry::Domain;
use pcurve::principles::{check_wcp_scp, CoupledOptions};
use pcurve::spectral::{principal_curve, CurveOptions, ExponentConfig, WeightPair};
use pcurve::ScalarField;

fn main() -> pcurve::Result<()> {
    let domain = Domain::interval(1.0, 128)?;
    let cfg = ExponentConfig::new(2.0, 2.0, 1.0, 1.0)?;
    let weights = WeightPair::constant(&domain, 1.0, 1.0)?;
    let eig = principal_curve(&domain, &cfg, &weights, &CurveOptions::default())?;
    let (lambda, mu) = (0.5 * eig.lambda_1, 0.5 * eig.mu_1);

    // f1 = 1 <= f2 = 1 + x, identical g's.
    let one = ScalarField::constant(&domain, 1.0);
    let f2 = ScalarField::from_fn(&domain, |x, _| 1.0 + x);
    let report = check_wcp_scp(
        lambda,
        mu,
        &one,
        &f2,
        &one,
        &one,
        &eig,
        &cfg,
        &weights,
        &CoupledOptions::default(),
    )?;
    println!("data: f1 = 1, f2 = 1 + x, g1 = g2 = 1 at ({lambda:.4}, {mu:.4})");
    for check in &report.checks {
        println!(
            "{:?}: {:?} ({})",
            check.principle, check.verdict, check.detail
        );
    }

    // Identical data recover the same solution (uniqueness).
    let report = check_wcp_scp(
        lambda,
        mu,
        &one,
        &one,
        &one,
        &one,
        &eig,
        &cfg,
        &weights,
        &CoupledOptions::default(),
    )?;
    println!(
        "\nidentical data: {:?} (solutions coincide within tolerance)",
        report.verdict
    );
    Ok(())
}
