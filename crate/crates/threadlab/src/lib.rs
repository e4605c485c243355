//! Spectral laboratory for surface-tension-driven Hele-Shaw flow in thin
//! periodic threads and its thin-film limit.
//!
//! The crate pulls the moving-boundary problem back to the fixed strip
//! `S x (-1, 1)` (Fourier in `x`, Chebyshev collocation in `y`), solves the
//! scaled transformed Dirichlet problem there, exposes the
//! Dirichlet–Neumann machinery driving the interface, builds the power
//! series approximation in the slenderness parameter `eps`, and measures
//! the convergence rates of the full flow toward the thin-film flow.

pub mod cheb;
pub mod elliptic;
pub mod geometry;
pub mod spectral;
pub mod strip;

pub use elliptic::{coercivity_pairing, dn_map, evolution_rhs, solve_dirichlet, EllipticProblem};
pub use geometry::{coeffs, curvature, curvature_coeff, extend_h, Admissibility, GeometryCoeffs, ThreadState};
pub use spectral::PeriodicField;
pub use strip::StripField;

/// Errors surfaced by the solvers and the harness.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("interface positivity violated: min h = {min_h:.6e} <= alpha = {alpha:.6e}")]
    PositivityLost { min_h: f64, alpha: f64 },

    #[error("interface norm cap exceeded: ||h|| = {norm:.6e} >= M = {cap:.6e}")]
    NormCapExceeded { norm: f64, cap: f64 },

    #[error("linear system singular or ill-conditioned (diagonal ratio {cond_estimate:.3e})")]
    SingularSystem { cond_estimate: f64 },

    #[error("collocation residual {residual:.3e} exceeds tolerance {tolerance:.3e}")]
    ResidualTooLarge { residual: f64, tolerance: f64 },

    #[error("side condition violated: {0}")]
    SideCondition(String),

    #[error("time step failed at t = {t:.6e} after {retries} retries: {reason}")]
    TimeStepFailed { t: f64, retries: u32, reason: String },

    #[error("Taylor-coefficient extraction did not converge (residual {residual:.3e})")]
    ExtractionFailed { residual: f64 },

    #[error("configuration error: {0}")]
    Config(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("serialization error: {0}")]
    Serde(#[from] serde_json::Error),
}

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
