//! Run configuration: a single JSON document describing the domain,
//! exponents, weights, solver knobs, and command-specific parameters.

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::field::ScalarField;
use crate::geometry::{Domain, DomainKind};
use crate::pde::SolveOptions;
use crate::principles::{CoupledOptions, SweepOrder, DEFAULT_CURVE_BAND};
use crate::spectral::{CurveOptions, ExponentConfig, WeightPair};

/// A scalar field given either as a constant or as an expression over the
/// node coordinates `x` and `y` (`y` is 0 in 1D).
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum FieldSpec {
    Constant(f64),
    Expr { expr: String },
}

impl FieldSpec {
    pub fn build(&self, domain: &Domain) -> Result<ScalarField> {
        match self {
            FieldSpec::Constant(c) => {
                if !c.is_finite() {
                    return Err(Error::Config("field constants must be finite".into()));
                }
                Ok(ScalarField::constant(domain, *c))
            }
            FieldSpec::Expr { expr } => {
                let parsed: meval::Expr = expr
                    .parse()
                    .map_err(|e| Error::Config(format!("cannot parse expression {expr:?}: {e}")))?;
                let func = parsed
                    .bind2("x", "y")
                    .map_err(|e| Error::Config(format!("expression {expr:?}: {e}")))?;
                let f = ScalarField::from_fn(domain, func);
                if f.values().iter().any(|v| !v.is_finite()) {
                    return Err(Error::Config(format!(
                        "expression {expr:?} produced non-finite samples"
                    )));
                }
                Ok(f)
            }
        }
    }
}

fn one() -> FieldSpec {
    FieldSpec::Constant(1.0)
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DomainSpec {
    #[serde(flatten)]
    pub kind: DomainKind,
    pub resolution: usize,
}

impl DomainSpec {
    pub fn build(&self) -> Result<Domain> {
        Domain::from_kind(self.kind, self.resolution)
            .map_err(|e| Error::Config(format!("domain: {e}")))
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ExponentSpec {
    pub p: f64,
    pub q: f64,
    pub beta1: f64,
    pub beta2: f64,
}

impl ExponentSpec {
    pub fn build(&self) -> Result<ExponentConfig> {
        ExponentConfig::new(self.p, self.q, self.beta1, self.beta2)
            .map_err(|e| Error::Config(format!("exponents: {e}")))
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct WeightSpec {
    #[serde(default = "one")]
    pub a: FieldSpec,
    #[serde(default = "one")]
    pub b: FieldSpec,
}

impl Default for WeightSpec {
    fn default() -> Self {
        WeightSpec { a: one(), b: one() }
    }
}

impl WeightSpec {
    pub fn build(&self, domain: &Domain) -> Result<WeightPair> {
        WeightPair::new(self.a.build(domain)?, self.b.build(domain)?)
            .map_err(|e| Error::Config(format!("weights: {e}")))
    }
}

/// Inhomogeneous data for the `solve` command.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DataSpec {
    #[serde(default = "one")]
    pub f: FieldSpec,
    #[serde(default = "one")]
    pub g: FieldSpec,
}

/// Optional solver overrides; anything omitted keeps the library default.
#[derive(Clone, Debug, Default, Serialize, Deserialize)]
pub struct SolverSpec {
    pub newton_tol: Option<f64>,
    pub max_newton_iters: Option<usize>,
    pub eps_schedule: Option<Vec<f64>>,
    pub kappa_tol: Option<f64>,
    pub iterate_tol: Option<f64>,
    pub max_power_iters: Option<usize>,
    pub residual_tol: Option<f64>,
    pub max_sweeps: Option<usize>,
    pub growth_cap: Option<f64>,
    pub v_first: Option<bool>,
    /// Relative half-width of the on-curve classification band.
    pub curve_band: Option<f64>,
}

impl SolverSpec {
    pub fn solve_options(&self) -> Result<SolveOptions> {
        let mut o = SolveOptions::default();
        if let Some(t) = self.newton_tol {
            o.newton_tol = t;
        }
        if let Some(m) = self.max_newton_iters {
            o.max_newton_iters = m;
        }
        if let Some(s) = &self.eps_schedule {
            o.eps_schedule = s.clone();
        }
        o.validate()
            .map_err(|e| Error::Config(format!("solver: {e}")))?;
        Ok(o)
    }

    pub fn curve_options(&self) -> Result<CurveOptions> {
        let mut o = CurveOptions {
            solve: self.solve_options()?,
            ..CurveOptions::default()
        };
        if let Some(t) = self.kappa_tol {
            o.kappa_tol = t;
        }
        if let Some(t) = self.iterate_tol {
            o.iterate_tol = t;
        }
        if let Some(m) = self.max_power_iters {
            o.max_iters = m;
        }
        Ok(o)
    }

    pub fn coupled_options(&self) -> Result<CoupledOptions> {
        let mut o = CoupledOptions {
            solve: self.solve_options()?,
            ..CoupledOptions::default()
        };
        if let Some(t) = self.residual_tol {
            o.residual_tol = t;
        }
        if let Some(m) = self.max_sweeps {
            o.max_sweeps = m;
        }
        if let Some(c) = self.growth_cap {
            o.growth_cap = c;
        }
        if self.v_first == Some(true) {
            o.sweep_order = SweepOrder::VFirst;
        }
        Ok(o)
    }

    pub fn curve_band(&self) -> f64 {
        self.curve_band.unwrap_or(DEFAULT_CURVE_BAND)
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SweepSpec {
    /// Grid points per axis (the sweep emits `grid²` rows).
    #[serde(default = "default_grid")]
    pub grid: usize,
    /// Upper end of the λ range; omitted means twice the symmetric curve
    /// point, so the curve crosses the picture.
    pub lambda_max: Option<f64>,
    pub mu_max: Option<f64>,
}

fn default_grid() -> usize {
    20
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ShrinkSpec {
    /// Scale factors applied to the base domain (interval lengths when the
    /// base is the unit interval).
    #[serde(default = "default_lengths")]
    pub lengths: Vec<f64>,
}

fn default_lengths() -> Vec<f64> {
    vec![1.0, 0.5, 0.25, 0.125]
}

fn default_samples() -> usize {
    10
}

/// The complete run configuration consumed by every command.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RunConfig {
    pub domain: DomainSpec,
    pub exponents: ExponentSpec,
    #[serde(default)]
    pub weights: WeightSpec,
    #[serde(default)]
    pub solver: SolverSpec,
    #[serde(default)]
    pub lambda: Option<f64>,
    #[serde(default)]
    pub mu: Option<f64>,
    #[serde(default)]
    pub data: Option<DataSpec>,
    #[serde(default = "default_samples")]
    pub samples: usize,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub sweep: Option<SweepSpec>,
    #[serde(default)]
    pub shrink: Option<ShrinkSpec>,
}

impl RunConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: RunConfig =
            serde_json::from_str(text).map_err(|e| Error::Config(format!("parse: {e}")))?;
        Ok(cfg)
    }

    /// SHA-256 digest of the canonical serialized configuration (after any
    /// command-line overrides), embedded in every output artifact.
    pub fn digest(&self) -> String {
        let canon = serde_json::to_string(self).expect("config serializes");
        let mut hasher = Sha256::new();
        hasher.update(canon.as_bytes());
        hex::encode(&hasher.finalize()[..8])
    }

    /// The `(λ, μ)` couple, required by the parameterized commands.
    pub fn couple(&self) -> Result<(f64, f64)> {
        match (self.lambda, self.mu) {
            (Some(l), Some(m)) if l.is_finite() && m.is_finite() => Ok((l, m)),
            _ => Err(Error::Config(
                "this command needs finite `lambda` and `mu` in the configuration".into(),
            )),
        }
    }

    /// Build the discretized domain, exponents, and weights.
    pub fn build(&self) -> Result<(Domain, ExponentConfig, WeightPair)> {
        let domain = self.domain.build()?;
        let cfg = self.exponents.build()?;
        let weights = self.weights.build(&domain)?;
        Ok((domain, cfg, weights))
    }
}
