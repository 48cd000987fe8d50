//! Classify parameter couples against the principal curve: below it (or on
//! the nonnegative axes) the maximum and comparison principles hold; on or
//! above it, or at negative parameters, they fail.
//!
//! Run with: cargo run --release --example classify_couples

use pcurve::geometry::Domain;
use pcurve::principles::classify;
use pcurve::spectral::{principal_curve, CurveOptions, ExponentConfig, WeightPair};

fn main() -> pcurve::Result<()> {
    let domain = Domain::interval(1.0, 256)?;
    let cfg = ExponentConfig::new(3.0, 2.0, 1.0, 2.0)?;
    let weights = WeightPair::constant(&domain, 1.0, 1.0)?;
    let eig = principal_curve(&domain, &cfg, &weights, &CurveOptions::default())?;

    println!(
        "curve: lambda^(1/{:.3}) mu^(1/{:.3}) = {:.4}",
        cfg.r(),
        cfg.s(),
        eig.lambda_prime
    );
    let probes = [
        (0.0, 0.0),
        (0.0, 100.0),
        (5.0, 0.0),
        (eig.lambda_1 / 2.0, eig.mu_1 / 2.0),
        (eig.lambda_1, eig.mu_1),
        (1.5 * eig.lambda_1, 1.5 * eig.mu_1),
        (-1.0, 3.0),
        (2.0, -0.5),
    ];
    println!(
        "{:>12} {:>12}  class           distance-to-curve",
        "lambda", "mu"
    );
    for (l, m) in probes {
        let c = classify(l, m, &eig, &cfg, 1e-3);
        let dist = c
            .curve_distance
            .map(|d| format!("{d:+.4e}"))
            .unwrap_or_else(|| "-".into());
        println!(
            "{l:>12.4} {m:>12.4}  {:<15} {dist}",
            format!("{:?}", c.class)
        );
    }
    Ok(())
}
