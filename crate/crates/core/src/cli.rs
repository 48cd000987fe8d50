//! Batch command surface: each command reads the run configuration, drives
//! the library, and writes JSON/CSV artifacts into an output directory.
//! Every artifact embeds the library version and a digest of the exact
//! configuration (after command-line overrides), so identical inputs produce
//! byte-identical outputs.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::bounds::{lower_bound, small_measure_guarantee};
use crate::config::{DataSpec, RunConfig};
use crate::error::{Error, Result};
use crate::field::{fmt_f64, ScalarField};
use crate::geometry::{Domain, DomainKind};
use crate::principles::{
    check_wcp_scp, check_wmp_smp, classify, construct_violation, random_data_field, solve_coupled,
    RegionClass, Verdict,
};
use crate::spectral::{principal_curve, EigenData};

/// The batch commands exposed by the `pcurve` binary.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Command {
    Eigencurve,
    Solve,
    Classify,
    VerifyMp,
    VerifyCp,
    Violate,
    Bounds,
    Sweep,
    Shrink,
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Eigencurve => "eigencurve",
            Command::Solve => "solve",
            Command::Classify => "classify",
            Command::VerifyMp => "verify-mp",
            Command::VerifyCp => "verify-cp",
            Command::Violate => "violate",
            Command::Bounds => "bounds",
            Command::Sweep => "sweep",
            Command::Shrink => "shrink",
        }
    }
}

/// What a run produced.
#[derive(Clone, Debug)]
pub struct RunSummary {
    pub message: String,
    pub artifacts: Vec<PathBuf>,
}

/// Execute one command. `threads` bounds the worker pool used by the sweep;
/// results are merged in grid order regardless of scheduling.
pub fn run(
    command: Command,
    config: &RunConfig,
    out_dir: &Path,
    threads: Option<usize>,
) -> Result<RunSummary> {
    match threads {
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map_err(|e| Error::Config(format!("threads: {e}")))?;
            pool.install(|| run_inner(command, config, out_dir))
        }
        None => run_inner(command, config, out_dir),
    }
}

fn run_inner(command: Command, config: &RunConfig, out_dir: &Path) -> Result<RunSummary> {
    fs::create_dir_all(out_dir)?;
    let mut em = Emitter {
        out: out_dir.to_path_buf(),
        digest: config.digest(),
        command: command.name(),
        artifacts: Vec::new(),
    };
    match command {
        Command::Eigencurve => cmd_eigencurve(config, &mut em),
        Command::Solve => cmd_solve(config, &mut em),
        Command::Classify => cmd_classify(config, &mut em),
        Command::VerifyMp => cmd_verify_mp(config, &mut em),
        Command::VerifyCp => cmd_verify_cp(config, &mut em),
        Command::Violate => cmd_violate(config, &mut em),
        Command::Bounds => cmd_bounds(config, &mut em),
        Command::Sweep => cmd_sweep(config, &mut em),
        Command::Shrink => cmd_shrink(config, &mut em),
    }
}

struct Emitter {
    out: PathBuf,
    digest: String,
    command: &'static str,
    artifacts: Vec<PathBuf>,
}

#[derive(Serialize)]
struct Artifact<'a, T: Serialize> {
    schema_version: u32,
    library_version: &'a str,
    command: &'a str,
    config_digest: &'a str,
    result: T,
}

impl Emitter {
    fn json<T: Serialize>(&mut self, name: &str, result: T) -> Result<()> {
        let path = self.out.join(name);
        let doc = Artifact {
            schema_version: 1,
            library_version: env!("CARGO_PKG_VERSION"),
            command: self.command,
            config_digest: &self.digest,
            result,
        };
        let mut file = fs::File::create(&path)?;
        serde_json::to_writer_pretty(&mut file, &doc)?;
        writeln!(file)?;
        self.artifacts.push(path);
        Ok(())
    }

    fn comment(&self) -> String {
        format!(
            "pcurve {} command={} config={}",
            env!("CARGO_PKG_VERSION"),
            self.command,
            self.digest
        )
    }

    fn field_csv(&mut self, name: &str, field: &ScalarField) -> Result<()> {
        let path = self.out.join(name);
        let mut file = fs::File::create(&path)?;
        field.write_csv(&mut file, Some(&self.comment()))?;
        self.artifacts.push(path);
        Ok(())
    }

    fn table_csv(&mut self, name: &str, header: &str, rows: &[String]) -> Result<()> {
        let path = self.out.join(name);
        let mut file = fs::File::create(&path)?;
        writeln!(file, "# {}", self.comment())?;
        writeln!(file, "{header}")?;
        for row in rows {
            writeln!(file, "{row}")?;
        }
        self.artifacts.push(path);
        Ok(())
    }

    fn summary(&mut self, message: String) -> RunSummary {
        RunSummary {
            message,
            artifacts: std::mem::take(&mut self.artifacts),
        }
    }
}

fn compute_eigendata(
    config: &RunConfig,
) -> Result<(
    Domain,
    crate::spectral::ExponentConfig,
    crate::spectral::WeightPair,
    EigenData,
)> {
    let (domain, cfg, weights) = config.build()?;
    let eig = principal_curve(&domain, &cfg, &weights, &config.solver.curve_options()?)?;
    Ok((domain, cfg, weights, eig))
}

fn cmd_eigencurve(config: &RunConfig, em: &mut Emitter) -> Result<RunSummary> {
    let (_, _, _, eig) = compute_eigendata(config)?;
    em.json("eigencurve.json", &eig)?;
    em.field_csv("phi.csv", &eig.phi)?;
    em.field_csv("psi.csv", &eig.psi)?;
    let msg = format!(
        "lambda_prime = {:.8e} (kappa = {:.3e}, {} iterations, residuals {:.2e}/{:.2e})",
        eig.lambda_prime, eig.kappa, eig.iterations, eig.residual_p, eig.residual_q
    );
    Ok(em.summary(msg))
}

fn cmd_solve(config: &RunConfig, em: &mut Emitter) -> Result<RunSummary> {
    let (domain, cfg, weights) = config.build()?;
    let (lambda, mu) = config.couple()?;
    let data = config.data.clone().unwrap_or(DataSpec {
        f: crate::config::FieldSpec::Constant(1.0),
        g: crate::config::FieldSpec::Constant(1.0),
    });
    let f = data.f.build(&domain)?;
    let g = data.g.build(&domain)?;
    let sol = solve_coupled(
        lambda,
        mu,
        &f,
        &g,
        &cfg,
        &weights,
        &config.solver.coupled_options()?,
    )?;

    #[derive(Serialize)]
    struct SolveResult {
        lambda: f64,
        mu: f64,
        sweeps: usize,
        residual_u: f64,
        residual_v: f64,
        min_u: f64,
        min_v: f64,
        sup_u: f64,
        sup_v: f64,
        monotone_margin: f64,
    }
    em.json(
        "solve.json",
        SolveResult {
            lambda,
            mu,
            sweeps: sol.sweeps,
            residual_u: sol.residual_u,
            residual_v: sol.residual_v,
            min_u: sol.u.interior_min(),
            min_v: sol.v.interior_min(),
            sup_u: sol.u.sup_norm(),
            sup_v: sol.v.sup_norm(),
            monotone_margin: sol.monotone_margin,
        },
    )?;
    em.field_csv("u.csv", &sol.u)?;
    em.field_csv("v.csv", &sol.v)?;
    let msg = format!(
        "coupled solve converged in {} sweeps (residuals {:.2e}/{:.2e})",
        sol.sweeps, sol.residual_u, sol.residual_v
    );
    Ok(em.summary(msg))
}

fn cmd_classify(config: &RunConfig, em: &mut Emitter) -> Result<RunSummary> {
    let (_, cfg, _, eig) = compute_eigendata(config)?;
    let (lambda, mu) = config.couple()?;
    let cls = classify(lambda, mu, &eig, &cfg, config.solver.curve_band());

    #[derive(Serialize)]
    struct ClassifyResult {
        lambda: f64,
        mu: f64,
        class: RegionClass,
        curve_distance: Option<f64>,
        lambda_prime: f64,
    }
    em.json(
        "classify.json",
        ClassifyResult {
            lambda,
            mu,
            class: cls.class,
            curve_distance: cls.curve_distance,
            lambda_prime: eig.lambda_prime,
        },
    )?;
    let msg = format!("({lambda}, {mu}) classifies as {:?}", cls.class);
    Ok(em.summary(msg))
}

fn cmd_verify_mp(config: &RunConfig, em: &mut Emitter) -> Result<RunSummary> {
    let (_, cfg, weights, eig) = compute_eigendata(config)?;
    let (lambda, mu) = config.couple()?;
    let report = check_wmp_smp(
        lambda,
        mu,
        config.samples,
        config.seed,
        &eig,
        &cfg,
        &weights,
        &config.solver.coupled_options()?,
    )?;
    em.json("verify_mp.json", &report)?;
    let msg = format!(
        "maximum principle suite at ({lambda}, {mu}): {:?} over {} samples",
        report.verdict, config.samples
    );
    let summary = em.summary(msg);
    if !report.passed() {
        return Err(Error::Inconsistency(
            "maximum principle suite failed where theory guarantees it".into(),
        ));
    }
    Ok(summary)
}

fn cmd_verify_cp(config: &RunConfig, em: &mut Emitter) -> Result<RunSummary> {
    let (domain, cfg, weights, eig) = compute_eigendata(config)?;
    let (lambda, mu) = config.couple()?;
    let opts = config.solver.coupled_options()?;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut reports = Vec::new();
    let mut all_pass = true;
    for _ in 0..config.samples {
        let f1 = random_data_field(&domain, &mut rng);
        let g1 = random_data_field(&domain, &mut rng);
        let inc_f = random_data_field(&domain, &mut rng).scaled(0.5);
        let inc_g = random_data_field(&domain, &mut rng).scaled(0.5);
        let f2 = f1.zip_map(&inc_f, |a, b| a + b)?;
        let g2 = g1.zip_map(&inc_g, |a, b| a + b)?;
        let rep = check_wcp_scp(lambda, mu, &f1, &f2, &g1, &g2, &eig, &cfg, &weights, &opts)?;
        all_pass &= rep.passed();
        reports.push(rep);
    }

    #[derive(Serialize)]
    struct CpResult {
        lambda: f64,
        mu: f64,
        seed: u64,
        overall: Verdict,
        reports: Vec<crate::principles::PrincipleReport>,
    }
    em.json(
        "verify_cp.json",
        CpResult {
            lambda,
            mu,
            seed: config.seed,
            overall: if all_pass {
                Verdict::Pass
            } else {
                Verdict::Fail
            },
            reports,
        },
    )?;
    let msg = format!(
        "comparison principle suite at ({lambda}, {mu}): {} over {} quadruples",
        if all_pass { "Pass" } else { "Fail" },
        config.samples
    );
    let summary = em.summary(msg);
    if !all_pass {
        return Err(Error::Inconsistency(
            "comparison principle suite failed where theory guarantees it".into(),
        ));
    }
    Ok(summary)
}

fn cmd_violate(config: &RunConfig, em: &mut Emitter) -> Result<RunSummary> {
    let (_, cfg, weights, eig) = compute_eigendata(config)?;
    let (lambda, mu) = config.couple()?;
    let violation = construct_violation(lambda, mu, &eig, &cfg, &weights)?;
    em.json("violation.json", &violation)?;
    em.field_csv("f.csv", &violation.f)?;
    em.field_csv("g.csv", &violation.g)?;
    em.field_csv("u.csv", &violation.u)?;
    em.field_csv("v.csv", &violation.v)?;
    let msg = format!(
        "certified violation ({:?}): min u = {:.3e}, min v = {:.3e}, residuals {:.2e}/{:.2e}",
        violation.case,
        violation.min_u,
        violation.min_v,
        violation.residual_u,
        violation.residual_v
    );
    Ok(em.summary(msg))
}

fn cmd_bounds(config: &RunConfig, em: &mut Emitter) -> Result<RunSummary> {
    let (domain, cfg, weights, eig) = compute_eigendata(config)?;
    let (lambda, mu) = config.couple()?;
    let report = small_measure_guarantee(lambda, mu, &domain, &cfg, &weights, &eig)?;
    em.json("bounds.json", &report)?;
    let msg = format!(
        "lb1 = {:.6e} <= lambda_prime = {:.6e}; eta = {:?}",
        report.lb1, report.lambda_prime_computed, report.eta
    );
    Ok(em.summary(msg))
}

fn cmd_sweep(config: &RunConfig, em: &mut Emitter) -> Result<RunSummary> {
    let (domain, cfg, weights, eig) = compute_eigendata(config)?;
    let sweep = config.sweep.clone().unwrap_or(crate::config::SweepSpec {
        grid: 20,
        lambda_max: None,
        mu_max: None,
    });
    if sweep.grid < 2 {
        return Err(Error::Config("sweep grid must be at least 2".into()));
    }
    // Default range: twice the symmetric curve point per axis, so the curve
    // crosses the map.
    let lambda_max = sweep.lambda_max.unwrap_or(2.0 * eig.lambda_1);
    let mu_max = sweep.mu_max.unwrap_or(2.0 * eig.mu_1);
    let band = config.solver.curve_band();
    let opts = config.solver.coupled_options()?;
    let g = sweep.grid;

    let rows: Result<Vec<String>> = (0..g * g)
        .into_par_iter()
        .map(|idx| {
            let (iy, ix) = (idx / g, idx % g);
            let lambda = lambda_max * ix as f64 / (g - 1) as f64;
            let mu = mu_max * iy as f64 / (g - 1) as f64;
            let cls = classify(lambda, mu, &eig, &cfg, band);
            let (verdict, min_u, min_v, residual) = match cls.class {
                RegionClass::InteriorRegion => {
                    let seed = config
                        .seed
                        .wrapping_add((idx as u64 + 1).wrapping_mul(0x9E3779B97F4A7C15));
                    let mut rng = ChaCha8Rng::seed_from_u64(seed);
                    let f = random_data_field(&domain, &mut rng);
                    let gg = random_data_field(&domain, &mut rng);
                    match solve_coupled(lambda, mu, &f, &gg, &cfg, &weights, &opts) {
                        Ok(sol) => {
                            let ok = sol.u.interior_min()
                                >= -1e-8 * sol.u.sup_norm().max(f64::MIN_POSITIVE)
                                && sol.v.interior_min()
                                    >= -1e-8 * sol.v.sup_norm().max(f64::MIN_POSITIVE);
                            (
                                if ok { "pass" } else { "fail" },
                                sol.u.interior_min(),
                                sol.v.interior_min(),
                                sol.residual_u.max(sol.residual_v),
                            )
                        }
                        Err(Error::NonConvergence { residual, .. }) => {
                            ("unresolved", f64::NAN, f64::NAN, residual)
                        }
                        Err(e) => return Err(e),
                    }
                }
                RegionClass::OnCurve | RegionClass::Outside => {
                    let v = construct_violation(lambda, mu, &eig, &cfg, &weights)?;
                    ("violated", v.min_u, v.min_v, v.residual_u.max(v.residual_v))
                }
            };
            let class = match cls.class {
                RegionClass::InteriorRegion => "interior",
                RegionClass::OnCurve => "on-curve",
                RegionClass::Outside => "outside",
            };
            Ok(format!(
                "{},{},{},{},{},{},{}",
                fmt_f64(lambda),
                fmt_f64(mu),
                class,
                verdict,
                fmt_f64(min_u),
                fmt_f64(min_v),
                fmt_f64(residual)
            ))
        })
        .collect();
    let rows = rows?;
    em.table_csv(
        "sweep.csv",
        "lambda,mu,class,verdict,min_u,min_v,residual",
        &rows,
    )?;

    #[derive(Serialize)]
    struct SweepMeta {
        grid: usize,
        lambda_max: f64,
        mu_max: f64,
        lambda_prime: f64,
        rows: usize,
    }
    em.json(
        "sweep.json",
        SweepMeta {
            grid: g,
            lambda_max,
            mu_max,
            lambda_prime: eig.lambda_prime,
            rows: rows.len(),
        },
    )?;
    let msg = format!("sweep wrote {} labeled grid points", rows.len());
    Ok(em.summary(msg))
}

fn cmd_shrink(config: &RunConfig, em: &mut Emitter) -> Result<RunSummary> {
    let cfg = config.exponents.build()?;
    let shrink = config.shrink.clone().unwrap_or(crate::config::ShrinkSpec {
        lengths: vec![1.0, 0.5, 0.25, 0.125],
    });
    let curve_opts = config.solver.curve_options()?;
    // Threshold columns need a strictly positive couple; fall back to (1, 1).
    let couple = match config.couple() {
        Ok((l, m)) if l > 0.0 && m > 0.0 => (l, m),
        _ => (1.0, 1.0),
    };
    let mut rows = Vec::new();
    for &factor in &shrink.lengths {
        if !(factor > 0.0) {
            return Err(Error::Config("shrink factors must be positive".into()));
        }
        let kind = match config.domain.kind {
            DomainKind::Interval { length } => DomainKind::Interval {
                length: length * factor,
            },
            DomainKind::Rectangle { lx, ly } => DomainKind::Rectangle {
                lx: lx * factor,
                ly: ly * factor,
            },
            DomainKind::Disk { radius } => DomainKind::Disk {
                radius: radius * factor,
            },
        };
        let domain = Domain::from_kind(kind, config.domain.resolution)
            .map_err(|e| Error::Config(format!("shrink domain: {e}")))?;
        let weights = config.weights.build(&domain)?;
        let eig = principal_curve(&domain, &cfg, &weights, &curve_opts)?;
        let lb1 = lower_bound(&domain, &cfg, &weights)?;
        if lb1 > eig.lambda_prime {
            return Err(Error::Inconsistency(format!(
                "lower bound {lb1:.6e} exceeds computed curve constant {:.6e} at factor {factor}",
                eig.lambda_prime
            )));
        }
        let eta_v = crate::bounds::eta(couple.0, couple.1, &domain, &cfg, &weights)?;
        rows.push(format!(
            "{},{},{},{},{},{}",
            fmt_f64(factor),
            fmt_f64(domain.measure()),
            fmt_f64(domain.diameter()),
            fmt_f64(lb1),
            fmt_f64(eig.lambda_prime),
            fmt_f64(eta_v)
        ));
    }
    em.table_csv("shrink.csv", "L,measure,d,lb1,lambda_prime,eta", &rows)?;
    let msg = format!("shrink study wrote {} rows", rows.len());
    Ok(em.summary(msg))
}
