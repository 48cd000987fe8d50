//! The 2D domains: curve constant on the unit square (closed form 4 pi^4
//! for p = q = 2) and on the unit disk, where the mask quadrature also
//! approximates the area.
//!
//! Run with: cargo run --release --example square_and_disk

use pcurve::geometry::Domain;
use pcurve::spectral::{principal_curve, CurveOptions, ExponentConfig, WeightPair};

fn main() -> pcurve::Result<()> {
    let cfg = ExponentConfig::new(2.0, 2.0, 1.0, 1.0)?;

    let square = Domain::rectangle(1.0, 1.0, 48)?;
    let w = WeightPair::constant(&square, 1.0, 1.0)?;
    let eig = principal_curve(&square, &cfg, &w, &CurveOptions::default())?;
    let exact = 4.0 * std::f64::consts::PI.powi(4);
    println!("unit square (48x48 cells):");
    println!(
        "  lambda_prime = {:.4} vs 4 pi^4 = {exact:.4}",
        eig.lambda_prime
    );
    println!(
        "  relative error {:.2e}, {} power iterations",
        (eig.lambda_prime - exact).abs() / exact,
        eig.iterations
    );

    let disk = Domain::disk(1.0, 96)?;
    println!("\nunit disk (96x96 bounding grid, cell-center mask):");
    println!(
        "  mask area = {:.5} vs pi = {:.5} ({:+.2e} rel)",
        disk.measure(),
        std::f64::consts::PI,
        (disk.measure() - std::f64::consts::PI) / std::f64::consts::PI
    );
    let w = WeightPair::constant(&disk, 1.0, 1.0)?;
    let eig = principal_curve(&disk, &cfg, &w, &CurveOptions::default())?;
    // First Dirichlet eigenvalue of the disk is j0^2 with j0 the first
    // Bessel zero, so the curve constant approaches j0^4.
    let j0 = 2.404825557695773_f64;
    println!(
        "  lambda_prime = {:.4} vs j0^4 = {:.4} ({:+.2e} rel, staircase boundary)",
        eig.lambda_prime,
        j0.powi(4),
        (eig.lambda_prime - j0.powi(4)) / j0.powi(4)
    );
    Ok(())
}
