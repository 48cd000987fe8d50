//! Produce a region map of the (lambda, mu) quadrant: classify a grid of
//! couples and verify each one (maximum-principle sample below the curve,
//! certified violation on/above it). Writes plot-ready CSV into out/.
//!
//! Run with: cargo run --release --example region_sweep

use pcurve::cli::{run, Command};
use pcurve::config::RunConfig;

fn main() -> pcurve::Result<()> {
    let config = RunConfig::from_json(
        r#"{
            "domain": {"kind": "interval", "length": 1.0, "resolution": 96},
            "exponents": {"p": 2.0, "q": 2.0, "beta1": 1.0, "beta2": 1.0},
            "seed": 7,
            "sweep": {"grid": 20}
        }"#,
    )?;
    let out = std::path::Path::new("out/region_sweep");
    let summary = run(Command::Sweep, &config, out, None)?;
    println!("{}", summary.message);
    for artifact in &summary.artifacts {
        println!("wrote {}", artifact.display());
    }

    // Quick textual rendering: one character per grid point.
    let text = std::fs::read_to_string(out.join("sweep.csv"))?;
    let mut rows: Vec<Vec<char>> = Vec::new();
    for line in text.lines().skip(2) {
        let class = line.split(',').nth(2).unwrap_or("?");
        let ch = match class {
            "interior" => '.',
            "on-curve" => 'o',
            _ => '#',
        };
        if rows
            .last()
            .map(|r: &Vec<char>| r.len() == 20)
            .unwrap_or(true)
        {
            rows.push(Vec::new());
        }
        rows.last_mut().unwrap().push(ch);
    }
    println!("\nregion map (. admissible, o on-curve band, # violated; mu grows upward):");
    for row in rows.iter().rev() {
        println!("  {}", row.iter().collect::<String>());
    }
    Ok(())
}
