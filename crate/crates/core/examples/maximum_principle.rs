//! Verify the weak and strong maximum principles at an admissible couple:
//! random nonnegative data must produce solutions that are nonnegative
//! (weak) and strictly positive inside with inward boundary flux (strong).
//!
//! Run with: cargo run --release --example maximum_principle

use pcurve::geometry::Domain;
use pcurve::principles::{check_wmp_smp, CoupledOptions};
use pcurve::spectral::{principal_curve, CurveOptions, ExponentConfig, WeightPair};

fn main() -> pcurve::Result<()> {
    let domain = Domain::interval(1.0, 128)?;
    let cfg = ExponentConfig::new(2.0, 2.0, 1.0, 1.0)?;
    let weights = WeightPair::constant(&domain, 1.0, 1.0)?;
    let eig = principal_curve(&domain, &cfg, &weights, &CurveOptions::default())?;

    let (lambda, mu) = (0.5 * eig.lambda_1, 0.5 * eig.mu_1);
    println!(
        "couple ({lambda:.4}, {mu:.4}) below the curve (constant {:.4})",
        eig.lambda_prime
    );

    let report = check_wmp_smp(
        lambda,
        mu,
        10,
        42,
        &eig,
        &cfg,
        &weights,
        &CoupledOptions::default(),
    )?;
    for check in &report.checks {
        println!(
            "{:?}: {:?} ({})",
            check.principle, check.verdict, check.detail
        );
    }
    println!("\nper-sample witnesses:");
    for s in &report.samples {
        println!(
            "  sample {}: min_u = {:+.3e}, min_v = {:+.3e}, residuals {:.1e}/{:.1e}, {} sweeps",
            s.sample, s.min_u, s.min_v, s.residual_u, s.residual_v, s.sweeps
        );
    }
    println!("\noverall: {:?}", report.verdict);
    Ok(())
}
