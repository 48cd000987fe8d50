//! Track the curve constant and its explicit lower bound over a family of
//! shrinking intervals: both blow up as the measure goes to zero, the
//! constant at least like length^{-4} for p = q = 2.
//!
//! Run with: cargo run --release --example shrink_study

use pcurve::bounds::{eta, lower_bound};
use pcurve::geometry::Domain;
use pcurve::spectral::{principal_curve, CurveOptions, ExponentConfig, WeightPair};

fn main() -> pcurve::Result<()> {
    let cfg = ExponentConfig::new(2.0, 2.0, 1.0, 1.0)?;
    println!(
        "{:>8} {:>10} {:>14} {:>14} {:>10}",
        "L", "|domain|", "lb1", "lambda_prime", "eta(1,1)"
    );
    let mut prev: Option<f64> = None;
    for &l in &[1.0, 0.5, 0.25, 0.125] {
        let domain = Domain::interval(l, 128)?;
        let weights = WeightPair::constant(&domain, 1.0, 1.0)?;
        let lb = lower_bound(&domain, &cfg, &weights)?;
        let eig = principal_curve(&domain, &cfg, &weights, &CurveOptions::default())?;
        let e = eta(1.0, 1.0, &domain, &cfg, &weights)?;
        println!(
            "{l:>8} {:>10} {lb:>14.4} {:>14.4} {e:>10.4}",
            domain.measure(),
            eig.lambda_prime
        );
        if let Some(p) = prev {
            assert!(
                eig.lambda_prime > 4.0 * p,
                "halving must at least quadruple"
            );
        }
        prev = Some(eig.lambda_prime);
    }
    println!("\neach halving multiplies the constant by ~16 (length^-4 scaling)");
    Ok(())
}
