//! Explicit constants and bounds: the ABP constant `c(n,p)`, the lower bound
//! for the curve constant `Λ'` in terms of `|Ω|`, the small-measure threshold
//! `η`, and cross-checks of both against computed quantities.
//!
//! All exponent-chain formulas are evaluated as compensated sums of
//! logarithms to avoid rounding drift across the many fractional powers.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::ScalarField;
use crate::geometry::Domain;
use crate::principles::{classify, RegionClass, DEFAULT_CURVE_BAND};
use crate::spectral::{EigenData, ExponentConfig, WeightPair};

/// Relative slack absorbed by the scalar ABP check: the discrete solution is
/// an approximation, so the continuum inequality is asserted up to 1%.
pub const ABP_SLACK: f64 = 0.01;

/// Neighbor-jump threshold used as the continuity proxy on weights.
pub const WEIGHT_CONTINUITY_JUMP: f64 = 0.25;

/// Volume of the unit ball in `R^n` via `π^{n/2} / Γ(n/2 + 1)`, with the
/// half-integer gamma evaluated by exact recursion.
pub fn ball_volume(n: u32) -> Result<f64> {
    if n < 1 {
        return Err(Error::invalid("ball volume needs dimension n >= 1"));
    }
    let nf = n as f64;
    Ok(std::f64::consts::PI.powf(nf / 2.0) / gamma_half_integer(n + 2))
}

/// `Γ(k/2)` for integer `k >= 1` by the recursion `Γ(x+1) = x Γ(x)` from
/// `Γ(1/2) = √π` or `Γ(1) = 1`.
fn gamma_half_integer(k: u32) -> f64 {
    let mut x;
    let mut acc;
    if k % 2 == 0 {
        x = 1.0; // Γ(1)
        acc = 1.0;
    } else {
        x = 0.5; // Γ(1/2)
        acc = std::f64::consts::PI.sqrt();
    }
    while x < k as f64 / 2.0 {
        acc *= x;
        x += 1.0;
    }
    acc
}

/// The explicit ABP constant `c(n,p) = (n min{1, p-1} |B₁|^{1/n})^{-1/(p-1)}`.
pub fn abp_constant(n: u32, p: f64) -> Result<f64> {
    if !(p > 1.0) || !p.is_finite() {
        return Err(Error::invalid(format!("abp constant needs p > 1, got {p}")));
    }
    let base = n as f64 * (p - 1.0).min(1.0) * ball_volume(n)?.powf(1.0 / n as f64);
    Ok(base.powf(-1.0 / (p - 1.0)))
}

/// Neumaier-compensated sum.
fn compensated_sum(terms: &[f64]) -> f64 {
    let mut sum = 0.0f64;
    let mut comp = 0.0f64;
    for &t in terms {
        let s = sum + t;
        if sum.abs() >= t.abs() {
            comp += (sum - s) + t;
        } else {
            comp += (t - s) + sum;
        }
        sum = s;
    }
    sum + comp
}

/// The common denominator chain of the bound formulas, as a sum of log
/// terms: `(β₂/s) ln c(n,p) + (β₁/r) ln c(n,q) + (β₂/s + β₁/r) ln d +
/// (1/r) ln ‖a‖ + (1/s) ln ‖b‖`.
fn log_denominator_terms(
    n: u32,
    cfg: &ExponentConfig,
    d: f64,
    sup_a: f64,
    sup_b: f64,
) -> Result<Vec<f64>> {
    let c_p = abp_constant(n, cfg.p())?;
    let c_q = abp_constant(n, cfg.q())?;
    Ok(vec![
        cfg.beta2() / cfg.s() * c_p.ln(),
        cfg.beta1() / cfg.r() * c_q.ln(),
        (cfg.beta2() / cfg.s() + cfg.beta1() / cfg.r()) * d.ln(),
        sup_a.ln() / cfg.r(),
        sup_b.ln() / cfg.s(),
    ])
}

/// The explicit lower bound for the curve constant:
/// `Λ' >= |Ω|^{-(1/(ns) + 1/(nr))} / (c(n,p)^{β₂/s} c(n,q)^{β₁/r}
/// d^{β₂/s + β₁/r} ‖a‖^{1/r} ‖b‖^{1/s})`.
pub fn lower_bound(domain: &Domain, cfg: &ExponentConfig, weights: &WeightPair) -> Result<f64> {
    weights.check_continuity(WEIGHT_CONTINUITY_JUMP)?;
    let n = domain.dim() as u32;
    let nf = n as f64;
    let mut terms = vec![-(1.0 / (nf * cfg.s()) + 1.0 / (nf * cfg.r())) * domain.measure().ln()];
    for t in log_denominator_terms(n, cfg, domain.diameter(), weights.sup_a(), weights.sup_b())? {
        terms.push(-t);
    }
    Ok(compensated_sum(&terms).exp())
}

/// The small-measure threshold
/// `η = [λ^{1/r} μ^{1/s} (c(n,p)^{β₂/s} c(n,q)^{β₁/r} d^{β₂/s + β₁/r}
/// ‖a‖^{1/r} ‖b‖^{1/s})]^{-nrs/(r+s)}`, defined for `λ, μ > 0`.
pub fn eta(
    lambda: f64,
    mu: f64,
    domain: &Domain,
    cfg: &ExponentConfig,
    weights: &WeightPair,
) -> Result<f64> {
    if !(lambda > 0.0) || !(mu > 0.0) {
        return Err(Error::invalid(
            "eta is defined for lambda, mu > 0 (axis couples need no threshold)",
        ));
    }
    weights.check_continuity(WEIGHT_CONTINUITY_JUMP)?;
    let n = domain.dim() as u32;
    let mut terms = vec![lambda.ln() / cfg.r(), mu.ln() / cfg.s()];
    terms.extend(log_denominator_terms(
        n,
        cfg,
        domain.diameter(),
        weights.sup_a(),
        weights.sup_b(),
    )?);
    let exponent = n as f64 * cfg.r() * cfg.s() / (cfg.r() + cfg.s());
    Ok((-exponent * compensated_sum(&terms)).exp())
}

/// Scalar ABP cross-check: for `u` solving `-Δ_p u = f` with `f >= 0`,
/// assert `‖u‖_∞ <= c(n,p) d ‖f‖_∞^{1/(p-1)} |Ω|^{1/(n(p-1))}` up to
/// [`ABP_SLACK`].
#[derive(Clone, Copy, Debug, Serialize)]
pub struct AbpScalarCheck {
    pub holds: bool,
    pub sup_u: f64,
    pub bound: f64,
    pub slack: f64,
}

pub fn abp_check_scalar(
    u: &ScalarField,
    f: &ScalarField,
    domain: &Domain,
    p: f64,
) -> Result<AbpScalarCheck> {
    u.check_same_domain(f)?;
    if f.interior_min() < 0.0 {
        return Err(Error::invalid("the ABP check applies to nonnegative data"));
    }
    let n = domain.dim() as u32;
    let sup_u = u.sup_norm();
    let sup_f = domain
        .interior()
        .iter()
        .fold(0.0f64, |m, &i| m.max(f.values()[i].abs()));
    let bound = abp_constant(n, p)?
        * domain.diameter()
        * sup_f.powf(1.0 / (p - 1.0))
        * domain.measure().powf(1.0 / (n as f64 * (p - 1.0)));
    Ok(AbpScalarCheck {
        holds: sup_u <= bound * (1.0 + ABP_SLACK),
        sup_u,
        bound,
        slack: ABP_SLACK,
    })
}

/// Structured verdicts for the bound cross-checks at one couple.
#[derive(Clone, Debug, Serialize)]
pub struct BoundsReport {
    pub lambda: f64,
    pub mu: f64,
    pub c_np: f64,
    pub c_nq: f64,
    pub lb1: f64,
    /// `None` for axis couples, which need no threshold.
    pub eta: Option<f64>,
    pub measure: f64,
    pub lambda_prime_computed: f64,
    pub lb1_le_lambda_prime: bool,
    /// Whether `|Ω| < η` (axis couples: `None`, guarantee holds regardless).
    pub small_measure_applies: Option<bool>,
    pub classified_interior: Option<bool>,
}

/// Evaluate the small-measure guarantee at `(λ, μ) >= 0`: whenever
/// `|Ω| < η`, the couple must classify into the admissible region; the
/// computed curve constant must also dominate the lower bound. A failed
/// cross-check is impossible by theory and reported as an inconsistency.
pub fn small_measure_guarantee(
    lambda: f64,
    mu: f64,
    domain: &Domain,
    cfg: &ExponentConfig,
    weights: &WeightPair,
    eig: &EigenData,
) -> Result<BoundsReport> {
    if lambda < 0.0 || mu < 0.0 {
        return Err(Error::invalid(
            "the small-measure guarantee concerns lambda, mu >= 0",
        ));
    }
    let n = domain.dim() as u32;
    let lb1 = lower_bound(domain, cfg, weights)?;
    let lambda_prime = eig.lambda_prime;
    let lb1_ok = lb1 <= lambda_prime;

    let axis = lambda == 0.0 || mu == 0.0;
    let eta_v = if axis {
        None
    } else {
        Some(eta(lambda, mu, domain, cfg, weights)?)
    };
    let applies = eta_v.map(|e| domain.measure() < e);
    let class = classify(lambda, mu, eig, cfg, DEFAULT_CURVE_BAND).class;
    let interior = class == RegionClass::InteriorRegion;

    let report = BoundsReport {
        lambda,
        mu,
        c_np: abp_constant(n, cfg.p())?,
        c_nq: abp_constant(n, cfg.q())?,
        lb1,
        eta: eta_v,
        measure: domain.measure(),
        lambda_prime_computed: lambda_prime,
        lb1_le_lambda_prime: lb1_ok,
        small_measure_applies: applies,
        classified_interior: Some(interior),
    };
    if !lb1_ok {
        return Err(Error::Inconsistency(format!(
            "lower bound {lb1:.6e} exceeds computed curve constant {lambda_prime:.6e}"
        )));
    }
    if (axis || applies == Some(true)) && !interior {
        return Err(Error::Inconsistency(format!(
            "measure {:.6e} below threshold {:?} but ({lambda}, {mu}) classified {:?}",
            domain.measure(),
            eta_v,
            class
        )));
    }
    Ok(report)
}
