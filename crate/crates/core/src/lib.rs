//! Principal eigenvalue curves, maximum/comparison principles, and explicit
//! ABP-type bounds for the coupled Dirichlet system
//!
//! ```text
//! -Δ_p u = λ a(x) |v|^{β₁-1} v,   -Δ_q v = μ b(x) |u|^{β₂-1} u   in Ω,
//!  u = v = 0                                                     on ∂Ω,
//! ```
//!
//! with `p, q > 1` and `β₁ β₂ = (p-1)(q-1)`, on 1D/2D grid domains.
//!
//! The crate computes the curve constant `Λ'` and the positive eigenpair by
//! power iteration of a degree-1-homogeneous composed solve, classifies
//! parameter couples `(λ, μ)` against the principal curve, verifies weak and
//! strong maximum/comparison principles where they must hold, constructs
//! certified violations where they must fail, and evaluates the explicit
//! lower bound for `Λ'` and the small-measure threshold `η`.
//!
//! See the `examples/` directory for one runnable example per capability and
//! the `pcurve` binary for the batch command surface.

pub mod bounds;
pub mod cli;
pub mod config;
pub mod error;
pub mod field;
pub mod geometry;
pub mod pde;
pub mod principles;
pub mod spectral;

pub use error::{Error, Result};
pub use field::{signed_pow, ScalarField};
pub use geometry::{Domain, DomainKind};
pub use pde::{apply_p_laplacian, energy, solve_dirichlet, solve_weighted_rhs, SolveOptions};
pub use principles::{classify, solve_coupled, RegionClass};
pub use spectral::{principal_curve, EigenData, ExponentConfig, WeightPair};
