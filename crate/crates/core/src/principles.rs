//! Classification of parameter couples against the principal curve, the
//! monotone iteration for the inhomogeneous system, maximum/comparison
//! principle checkers, and certified counterexamples outside the region.
//!
//! The dichotomy being exercised: weak and strong maximum (and comparison)
//! principles for the coupled system hold exactly for couples in the closed
//! sub-curve region minus the curve itself, i.e. below the curve or on the
//! nonnegative axes. Below the curve the checkers must pass; on or above it
//! (or at negative parameters) an explicit violation with nonnegative data
//! and a sign-changing solution is constructed and certified by residual.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::{signed_pow, ScalarField};
use crate::pde::{apply_p_laplacian, solve_dirichlet_with_guess, SolveOptions};
use crate::spectral::{
    curve_point, eigenpair_at, field_in_cone, EigenData, ExponentConfig, WeightPair,
};

/// Default relative half-width of the tolerance band around the curve:
/// discrete `Λ'` carries discretization error, so points this close are
/// labeled [`RegionClass::OnCurve`] and excluded from guarantee checks.
pub const DEFAULT_CURVE_BAND: f64 = 1e-3;

/// Nodewise tolerance (relative to field scale) for weak principle checks.
pub const WEAK_TOL: f64 = 1e-8;

/// Relative residual budget for certified solutions and violations.
pub const RESIDUAL_TOL: f64 = 1e-6;

/// Where a couple `(λ, μ)` sits relative to the admissible region.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum RegionClass {
    /// In the closed sub-curve region minus the curve: strictly below the
    /// curve band, or on one of the nonnegative axes.
    InteriorRegion,
    /// Inside the tolerance band around the curve.
    OnCurve,
    /// Above the band, or a negative parameter.
    Outside,
}

/// Classification result with the distance-to-curve diagnostic
/// `λ^{1/r} μ^{1/s} - Λ'` (present when `λ, μ > 0`).
#[derive(Clone, Copy, Debug, Serialize)]
pub struct Classification {
    pub class: RegionClass,
    pub curve_distance: Option<f64>,
}

/// Classify `(λ, μ)` against the computed curve with relative band `delta`.
pub fn classify(
    lambda: f64,
    mu: f64,
    eig: &EigenData,
    cfg: &ExponentConfig,
    delta: f64,
) -> Classification {
    if lambda < 0.0 || mu < 0.0 {
        return Classification {
            class: RegionClass::Outside,
            curve_distance: None,
        };
    }
    if lambda == 0.0 || mu == 0.0 {
        // Axis branches belong to the admissible region for every magnitude.
        return Classification {
            class: RegionClass::InteriorRegion,
            curve_distance: None,
        };
    }
    let value = lambda.powf(1.0 / cfg.r()) * mu.powf(1.0 / cfg.s());
    let lp = eig.lambda_prime;
    let class = if value < lp * (1.0 - delta) {
        RegionClass::InteriorRegion
    } else if value > lp * (1.0 + delta) {
        RegionClass::Outside
    } else {
        RegionClass::OnCurve
    };
    Classification {
        class,
        curve_distance: Some(value - lp),
    }
}

/// Which scalar solve leads inside one sweep of the monotone iteration. Both
/// orders converge to the same (unique) solution; exercising both is how the
/// uniqueness statement is tested.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub enum SweepOrder {
    #[default]
    UFirst,
    VFirst,
}

/// Options for [`solve_coupled`].
#[derive(Clone, Debug)]
pub struct CoupledOptions {
    /// Relative residual tolerance for both equations.
    pub residual_tol: f64,
    pub max_sweeps: usize,
    /// Iterates exceeding `growth_cap`× the data scale abort the iteration:
    /// that is evidence of a couple outside the region, not a numerical bug.
    pub growth_cap: f64,
    pub sweep_order: SweepOrder,
    pub solve: SolveOptions,
}

impl Default for CoupledOptions {
    fn default() -> Self {
        CoupledOptions {
            residual_tol: RESIDUAL_TOL,
            max_sweeps: 20_000,
            growth_cap: 1e6,
            sweep_order: SweepOrder::UFirst,
            solve: SolveOptions::default(),
        }
    }
}

/// Converged output of the monotone iteration.
#[derive(Clone, Debug)]
pub struct CoupledSolution {
    pub u: ScalarField,
    pub v: ScalarField,
    pub sweeps: usize,
    /// Relative sup-norm residuals of the two equations at the final pair.
    pub residual_u: f64,
    pub residual_v: f64,
    /// Most negative nodewise step `u_{k+1} - u_k` (and `v`) seen across the
    /// whole iteration, normalized by the running sup; the iteration is
    /// nondecreasing up to rounding, so this stays above `-1e-12`.
    pub monotone_margin: f64,
}

/// Solve the inhomogeneous system by monotone iteration from `(0, 0)`:
/// `u_{k+1}` solves `-Δ_p u = λ a v_k^{β₁} + f` and `v_{k+1}` solves
/// `-Δ_q v = μ b u_{k+1}^{β₂} + g` (order configurable). Requires
/// `λ, μ >= 0` and nonnegative bounded data.
pub fn solve_coupled(
    lambda: f64,
    mu: f64,
    f: &ScalarField,
    g: &ScalarField,
    cfg: &ExponentConfig,
    weights: &WeightPair,
    opts: &CoupledOptions,
) -> Result<CoupledSolution> {
    if lambda < 0.0 || mu < 0.0 {
        return Err(Error::invalid(
            "solve_coupled requires lambda, mu >= 0 (couples in the admissible region)",
        ));
    }
    f.check_same_domain(g)?;
    f.check_same_domain(weights.a())?;
    let domain = f.domain();
    let neg_data = domain
        .interior()
        .iter()
        .chain(domain.boundary().iter())
        .any(|&i| f.values()[i] < 0.0 || g.values()[i] < 0.0);
    if neg_data {
        return Err(Error::invalid("solve_coupled requires nonnegative data"));
    }
    let data_scale = f.sup_norm().max(g.sup_norm());
    if data_scale == 0.0 {
        // The unique solution of the homogeneous problem below the curve.
        return Ok(CoupledSolution {
            u: ScalarField::zeros(domain),
            v: ScalarField::zeros(domain),
            sweeps: 0,
            residual_u: 0.0,
            residual_v: 0.0,
            monotone_margin: 0.0,
        });
    }

    let mut u = ScalarField::zeros(domain);
    let mut v = ScalarField::zeros(domain);
    let mut monotone_margin = 0.0f64;
    let cap = opts.growth_cap * data_scale;

    for sweep in 1..=opts.max_sweeps {
        let (u_new, v_new) = match opts.sweep_order {
            SweepOrder::UFirst => {
                let rhs_u = coupled_rhs(weights.a(), &v, lambda, cfg.beta1(), f)?;
                let u_new =
                    solve_dirichlet_with_guess(domain, cfg.p(), &rhs_u, &opts.solve, Some(&u))?;
                let rhs_v = coupled_rhs(weights.b(), &u_new, mu, cfg.beta2(), g)?;
                let v_new =
                    solve_dirichlet_with_guess(domain, cfg.q(), &rhs_v, &opts.solve, Some(&v))?;
                (u_new, v_new)
            }
            SweepOrder::VFirst => {
                let rhs_v = coupled_rhs(weights.b(), &u, mu, cfg.beta2(), g)?;
                let v_new =
                    solve_dirichlet_with_guess(domain, cfg.q(), &rhs_v, &opts.solve, Some(&v))?;
                let rhs_u = coupled_rhs(weights.a(), &v_new, lambda, cfg.beta1(), f)?;
                let u_new =
                    solve_dirichlet_with_guess(domain, cfg.p(), &rhs_u, &opts.solve, Some(&u))?;
                (u_new, v_new)
            }
        };

        let sup_u = u_new.sup_norm();
        let sup_v = v_new.sup_norm();
        if sup_u > cap || sup_v > cap {
            return Err(Error::GrowthCap {
                iterations: sweep,
                sup_u,
                sup_v,
            });
        }
        for &i in domain.interior() {
            let du = (u_new.values()[i] - u.values()[i]) / sup_u.max(f64::MIN_POSITIVE);
            let dv = (v_new.values()[i] - v.values()[i]) / sup_v.max(f64::MIN_POSITIVE);
            monotone_margin = monotone_margin.min(du).min(dv);
        }
        u = u_new;
        v = v_new;

        let (ru, rv) = system_residuals(lambda, mu, &u, &v, f, g, cfg, weights)?;
        if ru <= opts.residual_tol && rv <= opts.residual_tol {
            return Ok(CoupledSolution {
                u,
                v,
                sweeps: sweep,
                residual_u: ru,
                residual_v: rv,
                monotone_margin,
            });
        }
    }
    let (ru, rv) = system_residuals(lambda, mu, &u, &v, f, g, cfg, weights)?;
    Err(Error::NonConvergence {
        iterations: opts.max_sweeps,
        residual: ru.max(rv),
        context: "monotone iteration for the coupled system".into(),
    })
}

fn coupled_rhs(
    weight: &ScalarField,
    partner: &ScalarField,
    factor: f64,
    beta: f64,
    data: &ScalarField,
) -> Result<ScalarField> {
    weight
        .zip_map(partner, |w, v| factor * w * signed_pow(v, beta))?
        .zip_map(data, |t, d| t + d)
}

/// Relative sup-norm residuals of the inhomogeneous system at `(u, v)`.
#[allow(clippy::too_many_arguments)]
pub fn system_residuals(
    lambda: f64,
    mu: f64,
    u: &ScalarField,
    v: &ScalarField,
    f: &ScalarField,
    g: &ScalarField,
    cfg: &ExponentConfig,
    weights: &WeightPair,
) -> Result<(f64, f64)> {
    let rhs_u = coupled_rhs(weights.a(), v, lambda, cfg.beta1(), f)?;
    let rhs_v = coupled_rhs(weights.b(), u, mu, cfg.beta2(), g)?;
    let lhs_u = apply_p_laplacian(u, cfg.p())?;
    let lhs_v = apply_p_laplacian(v, cfg.q())?;
    let dom = u.domain();
    let (mut nu, mut du, mut nv, mut dv) = (0.0f64, 0.0f64, 0.0f64, 0.0f64);
    for &i in dom.interior() {
        nu = nu.max((lhs_u.values()[i] - rhs_u.values()[i]).abs());
        du = du.max(rhs_u.values()[i].abs());
        nv = nv.max((lhs_v.values()[i] - rhs_v.values()[i]).abs());
        dv = dv.max(rhs_v.values()[i].abs());
    }
    Ok((
        nu / du.max(f64::MIN_POSITIVE),
        nv / dv.max(f64::MIN_POSITIVE),
    ))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Principle {
    Wmp,
    Smp,
    Wcp,
    Scp,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Verdict {
    Pass,
    Fail,
}

/// One checked principle with its worst margin over all samples.
#[derive(Clone, Debug, Serialize)]
pub struct PrincipleCheck {
    pub principle: Principle,
    pub verdict: Verdict,
    pub detail: String,
}

/// Witness values for one data sample.
#[derive(Clone, Debug, Serialize)]
pub struct SampleWitness {
    pub sample: usize,
    pub data: String,
    pub min_u: f64,
    pub min_v: f64,
    pub interior_min_u: f64,
    pub interior_min_v: f64,
    pub max_boundary_quotient: f64,
    pub residual_u: f64,
    pub residual_v: f64,
    pub sweeps: usize,
}

/// Structured verdict for a maximum/comparison principle suite at one couple.
#[derive(Clone, Debug, Serialize)]
pub struct PrincipleReport {
    pub lambda: f64,
    pub mu: f64,
    pub class: RegionClass,
    pub seed: u64,
    pub checks: Vec<PrincipleCheck>,
    pub samples: Vec<SampleWitness>,
    pub verdict: Verdict,
}

impl PrincipleReport {
    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }
}

/// Nodewise i.i.d. uniform `[0, 1]` data followed by one smoothing pass; the
/// standard random nonnegative datum for the principle suites.
pub fn random_data_field(domain: &crate::geometry::Domain, rng: &mut ChaCha8Rng) -> ScalarField {
    ScalarField::from_fn(domain, |_, _| rng.gen_range(0.0..1.0)).smoothed()
}

/// Verify the weak and strong maximum principles at an admissible couple by
/// solving the system for `n_samples` random nonnegative data pairs.
#[allow(clippy::too_many_arguments)]
pub fn check_wmp_smp(
    lambda: f64,
    mu: f64,
    n_samples: usize,
    seed: u64,
    eig: &EigenData,
    cfg: &ExponentConfig,
    weights: &WeightPair,
    opts: &CoupledOptions,
) -> Result<PrincipleReport> {
    let cls = classify(lambda, mu, eig, cfg, DEFAULT_CURVE_BAND);
    if cls.class != RegionClass::InteriorRegion {
        return Err(Error::invalid(format!(
            "maximum principles are only guaranteed in the admissible region; ({lambda}, {mu}) classifies as {:?}",
            cls.class
        )));
    }
    let strict_couple = lambda > 0.0 && mu > 0.0;
    let domain = weights.domain();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut samples = Vec::with_capacity(n_samples);
    let mut wmp_margin = f64::INFINITY;
    let mut smp_margin = f64::INFINITY;
    let mut smp_quotient = f64::NEG_INFINITY;
    let mut wmp = Verdict::Pass;
    let mut smp = Verdict::Pass;

    for k in 0..n_samples {
        let f = random_data_field(domain, &mut rng);
        let g = random_data_field(domain, &mut rng);
        let sol = solve_coupled(lambda, mu, &f, &g, cfg, weights, opts)?;
        let (min_u, min_v) = (sol.u.interior_min().min(0.0), sol.v.interior_min().min(0.0));
        let scale_u = sol.u.sup_norm().max(f64::MIN_POSITIVE);
        let scale_v = sol.v.sup_norm().max(f64::MIN_POSITIVE);
        if min_u < -WEAK_TOL * scale_u || min_v < -WEAK_TOL * scale_v {
            wmp = Verdict::Fail;
        }
        wmp_margin = wmp_margin.min(min_u / scale_u).min(min_v / scale_v);

        let (iu, iv) = (sol.u.interior_min(), sol.v.interior_min());
        let mut max_q = f64::NEG_INFINITY;
        if strict_couple {
            // Both components positive inside with inward-pointing flux.
            for field in [&sol.u, &sol.v] {
                for qv in field.boundary_normal_quotient()? {
                    max_q = max_q.max(qv);
                }
            }
            if !(iu > 0.0 && iv > 0.0 && max_q < 0.0) {
                smp = Verdict::Fail;
            }
            smp_margin = smp_margin.min(iu / scale_u).min(iv / scale_v);
            smp_quotient = smp_quotient.max(max_q);
        } else {
            // Axis couple: at least one component is positive throughout.
            if !(iu > 0.0 || iv > 0.0) {
                smp = Verdict::Fail;
            }
            smp_margin = smp_margin.min((iu / scale_u).max(iv / scale_v));
        }

        samples.push(SampleWitness {
            sample: k,
            data: format!("uniform-smoothed(seed={seed}, pair={k})"),
            min_u,
            min_v,
            interior_min_u: iu,
            interior_min_v: iv,
            max_boundary_quotient: max_q,
            residual_u: sol.residual_u,
            residual_v: sol.residual_v,
            sweeps: sol.sweeps,
        });
    }

    let checks = vec![
        PrincipleCheck {
            principle: Principle::Wmp,
            verdict: wmp,
            detail: format!("worst scaled minimum {wmp_margin:.3e} (tolerance {WEAK_TOL:.1e})"),
        },
        PrincipleCheck {
            principle: Principle::Smp,
            verdict: smp,
            detail: if strict_couple {
                format!(
                    "worst scaled interior minimum {smp_margin:.3e}, max boundary quotient {smp_quotient:.3e}"
                )
            } else {
                format!("axis couple; worst positive-component margin {smp_margin:.3e}")
            },
        },
    ];
    let verdict = if wmp == Verdict::Pass && smp == Verdict::Pass {
        Verdict::Pass
    } else {
        Verdict::Fail
    };
    Ok(PrincipleReport {
        lambda,
        mu,
        class: cls.class,
        seed,
        checks,
        samples,
        verdict,
    })
}

/// Verify the weak and strong comparison principles for one ordered data
/// quadruple `0 <= f1 <= f2`, `0 <= g1 <= g2`.
#[allow(clippy::too_many_arguments)]
pub fn check_wcp_scp(
    lambda: f64,
    mu: f64,
    f1: &ScalarField,
    f2: &ScalarField,
    g1: &ScalarField,
    g2: &ScalarField,
    eig: &EigenData,
    cfg: &ExponentConfig,
    weights: &WeightPair,
    opts: &CoupledOptions,
) -> Result<PrincipleReport> {
    let cls = classify(lambda, mu, eig, cfg, DEFAULT_CURVE_BAND);
    if cls.class != RegionClass::InteriorRegion {
        return Err(Error::invalid(format!(
            "comparison principles are only guaranteed in the admissible region; ({lambda}, {mu}) classifies as {:?}",
            cls.class
        )));
    }
    let dom = weights.domain();
    let ordered = dom
        .interior()
        .iter()
        .chain(dom.boundary().iter())
        .all(|&i| {
            0.0 <= f1.values()[i]
                && f1.values()[i] <= f2.values()[i]
                && 0.0 <= g1.values()[i]
                && g1.values()[i] <= g2.values()[i]
        });
    if !ordered {
        return Err(Error::invalid(
            "comparison checks need ordered nonnegative data: 0 <= f1 <= f2, 0 <= g1 <= g2",
        ));
    }

    let small = solve_coupled(lambda, mu, f1, g1, cfg, weights, opts)?;
    let big = solve_coupled(lambda, mu, f2, g2, cfg, weights, opts)?;
    let (u, v, z, w) = (&small.u, &small.v, &big.u, &big.v);

    let tol_u = WEAK_TOL * z.sup_norm().max(f64::MIN_POSITIVE);
    let tol_v = WEAK_TOL * w.sup_norm().max(f64::MIN_POSITIVE);
    let mut gap_u = f64::INFINITY;
    let mut gap_v = f64::INFINITY;
    for &i in dom.interior() {
        gap_u = gap_u.min(z.values()[i] - u.values()[i]);
        gap_v = gap_v.min(w.values()[i] - v.values()[i]);
    }
    let wcp = if gap_u >= -tol_u && gap_v >= -tol_v {
        Verdict::Pass
    } else {
        Verdict::Fail
    };

    let data_differ = dom.interior().iter().any(|&i| {
        ((f1.values()[i] + g1.values()[i]) - (f2.values()[i] + g2.values()[i])).abs()
            > f64::EPSILON * (f2.values()[i] + g2.values()[i]).abs()
    });
    let strict_applies = data_differ && lambda > 0.0 && mu > 0.0;
    let scp = if !strict_applies || (gap_u > 0.0 && gap_v > 0.0) {
        Verdict::Pass
    } else {
        Verdict::Fail
    };

    let checks = vec![
        PrincipleCheck {
            principle: Principle::Wcp,
            verdict: wcp,
            detail: format!("worst gaps {gap_u:.3e} (u vs z), {gap_v:.3e} (v vs w)"),
        },
        PrincipleCheck {
            principle: Principle::Scp,
            verdict: scp,
            detail: if strict_applies {
                format!("strict interior gaps {gap_u:.3e}, {gap_v:.3e}")
            } else {
                "strictness not applicable (identical data or axis couple)".into()
            },
        },
    ];
    let verdict = if wcp == Verdict::Pass && scp == Verdict::Pass {
        Verdict::Pass
    } else {
        Verdict::Fail
    };
    Ok(PrincipleReport {
        lambda,
        mu,
        class: cls.class,
        seed: 0,
        checks,
        samples: vec![
            SampleWitness {
                sample: 0,
                data: "quadruple (f1,g1)".into(),
                min_u: u.interior_min(),
                min_v: v.interior_min(),
                interior_min_u: u.interior_min(),
                interior_min_v: v.interior_min(),
                max_boundary_quotient: f64::NAN,
                residual_u: small.residual_u,
                residual_v: small.residual_v,
                sweeps: small.sweeps,
            },
            SampleWitness {
                sample: 1,
                data: "quadruple (f2,g2)".into(),
                min_u: z.interior_min(),
                min_v: w.interior_min(),
                interior_min_u: z.interior_min(),
                interior_min_v: w.interior_min(),
                max_boundary_quotient: f64::NAN,
                residual_u: big.residual_u,
                residual_v: big.residual_v,
                sweeps: big.sweeps,
            },
        ],
        verdict,
    })
}

/// Which construction produced a violation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum ViolationCase {
    /// `λ, μ > 0` above the curve: negated eigenpair at the ray intersection.
    AboveCurve,
    /// `λ < 0`: sign-mixed pair `(-φ, ψ)` after halving `λ₁`.
    NegativeLambda,
    /// `λ >= 0, μ < 0`: sign-mixed pair `(φ, -ψ)`.
    NegativeMu,
    /// Inside the curve band: negated eigenpair with zero data.
    OnCurve,
}

/// A certified counterexample to the weak maximum principle: nonnegative
/// data `(f, g)` whose solution `(u, v)` dips negative.
#[derive(Clone, Debug, Serialize)]
pub struct Violation {
    pub case: ViolationCase,
    pub lambda: f64,
    pub mu: f64,
    /// Curve point whose eigenpair drives the construction.
    pub lambda_1: f64,
    pub mu_1: f64,
    /// Parameters the residual certificate was evaluated at. Equal to
    /// `(lambda, mu)` except for banded on-curve inputs, which certify at
    /// their ray projection onto the curve.
    pub certified_at: (f64, f64),
    pub residual_u: f64,
    pub residual_v: f64,
    pub min_u: f64,
    pub min_v: f64,
    pub halvings: usize,
    #[serde(skip)]
    pub f: ScalarField,
    #[serde(skip)]
    pub g: ScalarField,
    #[serde(skip)]
    pub u: ScalarField,
    #[serde(skip)]
    pub v: ScalarField,
}

/// Construct a certified violation of the weak maximum principle for a
/// couple on or outside the curve.
pub fn construct_violation(
    lambda: f64,
    mu: f64,
    eig: &EigenData,
    cfg: &ExponentConfig,
    weights: &WeightPair,
) -> Result<Violation> {
    let cls = classify(lambda, mu, eig, cfg, DEFAULT_CURVE_BAND);
    if cls.class == RegionClass::InteriorRegion {
        return Err(Error::invalid(format!(
            "({lambda}, {mu}) lies in the admissible region; no violation exists there"
        )));
    }
    let lp = eig.lambda_prime;

    let (case, l1, m1, halvings) = if lambda < 0.0 {
        // Push the curve point left until its μ₁ dominates |μ|.
        let mut l1 = -lambda / 2.0;
        let mut halvings = 0usize;
        loop {
            let (_, m1) = curve_point(lp, cfg, l1)?;
            if mu > -m1 {
                break (ViolationCase::NegativeLambda, l1, m1, halvings);
            }
            l1 /= 2.0;
            halvings += 1;
            if halvings > 60 {
                return Err(Error::NonConvergence {
                    iterations: halvings,
                    residual: m1,
                    context: "halving for the negative-lambda construction".into(),
                });
            }
        }
    } else if mu < 0.0 {
        // Symmetric: shrink μ₁ until it is dominated by |μ|.
        let mut m1 = -mu / 2.0;
        let mut halvings = 0usize;
        loop {
            let l1 = (lp / m1.powf(1.0 / cfg.s())).powf(cfg.r());
            if lambda > -l1 && m1 < -mu {
                break (ViolationCase::NegativeMu, l1, m1, halvings);
            }
            m1 /= 2.0;
            halvings += 1;
            if halvings > 60 {
                return Err(Error::NonConvergence {
                    iterations: halvings,
                    residual: l1,
                    context: "halving for the negative-mu construction".into(),
                });
            }
        }
    } else {
        // Ray intersection with the curve: μ₁/λ₁ = μ/λ.
        let l1 =
            (lp * (lambda / mu).powf(1.0 / cfg.s())).powf(cfg.r() * cfg.s() / (cfg.r() + cfg.s()));
        let (_, m1) = curve_point(lp, cfg, l1)?;
        let case = if cls.class == RegionClass::OnCurve {
            ViolationCase::OnCurve
        } else {
            ViolationCase::AboveCurve
        };
        (case, l1, m1, 0)
    };

    let (phi, psi) = eigenpair_at(eig, cfg, weights, l1)?;
    let psi_pow = psi.map(|v| v.max(0.0).powf(cfg.beta1()));
    let phi_pow = phi.map(|v| v.max(0.0).powf(cfg.beta2()));

    // Data are products of nonnegative factors, so f, g >= 0 exactly.
    let (u, v, f, g, certified_at) = match case {
        ViolationCase::AboveCurve => {
            let f = weights
                .a()
                .zip_map(&psi_pow, |a, w| (lambda - l1) * a * w)?;
            let g = weights.b().zip_map(&phi_pow, |b, w| (mu - m1) * b * w)?;
            (phi.scaled(-1.0), psi.scaled(-1.0), f, g, (lambda, mu))
        }
        ViolationCase::OnCurve => {
            let zero = ScalarField::zeros(phi.domain());
            (
                phi.scaled(-1.0),
                psi.scaled(-1.0),
                zero.clone(),
                zero,
                (l1, m1),
            )
        }
        ViolationCase::NegativeLambda => {
            let f = weights
                .a()
                .zip_map(&psi_pow, |a, w| -(lambda + l1) * a * w)?;
            let g = weights.b().zip_map(&phi_pow, |b, w| (mu + m1) * b * w)?;
            (phi.scaled(-1.0), psi.clone(), f, g, (lambda, mu))
        }
        ViolationCase::NegativeMu => {
            let f = weights
                .a()
                .zip_map(&psi_pow, |a, w| (lambda + l1) * a * w)?;
            let g = weights.b().zip_map(&phi_pow, |b, w| -(mu + m1) * b * w)?;
            (phi.clone(), psi.scaled(-1.0), f, g, (lambda, mu))
        }
    };

    if f.interior_min() < 0.0 || g.interior_min() < 0.0 {
        return Err(Error::Inconsistency(
            "violation data came out negative; construction bug".into(),
        ));
    }
    let (ru, rv) = system_residuals(certified_at.0, certified_at.1, &u, &v, &f, &g, cfg, weights)?;
    let (min_u, min_v) = (u.interior_min(), v.interior_min());
    if !(min_u < 0.0 || min_v < 0.0) {
        return Err(Error::Inconsistency(
            "violation solution does not dip negative; construction bug".into(),
        ));
    }
    if ru > RESIDUAL_TOL || rv > RESIDUAL_TOL {
        return Err(Error::Inconsistency(format!(
            "violation residuals {ru:.3e}, {rv:.3e} exceed {RESIDUAL_TOL:.1e}"
        )));
    }
    Ok(Violation {
        case,
        lambda,
        mu,
        lambda_1: l1,
        mu_1: m1,
        certified_at,
        residual_u: ru,
        residual_v: rv,
        min_u,
        min_v,
        halvings,
        f,
        g,
        u,
        v,
    })
}

/// Discrete membership in the interior of the positive cone: both fields
/// positive at every interior node with strictly negative boundary
/// quotients. Fields must vanish on the boundary.
pub fn cone_membership(u: &ScalarField, v: &ScalarField) -> Result<bool> {
    Ok(field_in_cone(u)? && field_in_cone(v)?)
}
