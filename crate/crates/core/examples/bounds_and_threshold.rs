//! Evaluate the explicit constants: the ABP constant c(n,p), the lower bound
//! for the curve constant in terms of |Ω|, and the small-measure threshold
//! η below which the maximum principle is guaranteed for a given couple.
//!
//! Run with: cargo run --release --example bounds_and_threshold

use pcurve::bounds::{abp_check_scalar, abp_constant, eta, lower_bound, small_measure_guarantee};
use pcurve::geometry::Domain;
use pcurve::pde::{solve_dirichlet, SolveOptions};
use pcurve::spectral::{principal_curve, CurveOptions, ExponentConfig, WeightPair};
use pcurve::ScalarField;

fn main() -> pcurve::Result<()> {
    println!("ABP constants c(n, p):");
    for (n, p) in [(1u32, 1.5), (1, 2.0), (1, 3.0), (2, 2.0), (2, 3.0)] {
        println!("  c({n}, {p}) = {:.6}", abp_constant(n, p)?);
    }

    let domain = Domain::interval(1.0, 256)?;
    let cfg = ExponentConfig::new(2.0, 2.0, 1.0, 1.0)?;
    let weights = WeightPair::constant(&domain, 1.0, 1.0)?;
    let eig = principal_curve(&domain, &cfg, &weights, &CurveOptions::default())?;

    let lb = lower_bound(&domain, &cfg, &weights)?;
    println!("\nunit interval, p = q = 2, unit weights:");
    println!("  lower bound lb1   = {lb:.6}");
    println!("  computed constant = {:.6}", eig.lambda_prime);
    println!("  margin            = {:.2}x", eig.lambda_prime / lb);

    let e = eta(1.0, 1.0, &domain, &cfg, &weights)?;
    println!(
        "  eta(1, 1)         = {e:.6} > |domain| = {}",
        domain.measure()
    );
    let report = small_measure_guarantee(1.0, 1.0, &domain, &cfg, &weights, &eig)?;
    println!(
        "  guarantee         : measure below threshold = {:?}, admissible = {:?}",
        report.small_measure_applies, report.classified_interior
    );

    // Scalar ABP cross-check on the torsion solution.
    println!("\nscalar ABP check on -Lap_p u = 1 solutions:");
    let one = ScalarField::constant(&domain, 1.0);
    for p in [1.5, 2.0, 3.0] {
        let u = solve_dirichlet(&domain, p, &one, &SolveOptions::default())?;
        let chk = abp_check_scalar(&u, &one, &domain, p)?;
        println!(
            "  p = {p}: sup u = {:.6} <= bound {:.6} ({})",
            chk.sup_u,
            chk.bound,
            if chk.holds { "holds" } else { "VIOLATED" }
        );
    }
    Ok(())
}
