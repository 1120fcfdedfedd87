//! Double-slit simulation with nonclassical Feynman paths.
//!
//! The library is organized around an exact complex-Gaussian integral engine
//! ([`gaussians`]) that composes free propagators and Gaussian slit
//! transmissions into closed-form wave functions ([`paths`]), a cavity
//! which-way detector model with beam-splitter photocount statistics
//! ([`cavity`]), and a Born-rule-violation detector combination ([`quach`]).
//! Every closed form is cross-checked against independent numerical
//! quadrature ([`quadrature`], [`oracle`]).
//!
//! Internal units are micrometers and milliseconds with `hbar = 1`; the
//! particle mass enters only as `m / hbar` in ms/um^2.

pub mod cavity;
pub mod config;
pub mod curve;
pub mod gaussians;
pub mod oracle;
pub mod paths;
pub mod quach;
pub mod quadrature;
pub mod validate;

pub use num_complex::Complex64;

/// Errors reported by the simulation library.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// `Re(alpha) > 0`: the Gaussian integral does not converge.
    #[error("divergent Gaussian integral: Re(alpha) = {0} > 0")]
    DivergentIntegral(f64),
    /// `alpha = 0`: the integrand is not Gaussian.
    #[error("degenerate Gaussian integral: alpha = 0")]
    DegenerateIntegral,
    /// Adaptive quadrature exhausted its refinement budget.
    #[error("quadrature did not converge: estimated relative error {achieved:.3e} > tol {tol:.3e}")]
    NonConvergent { achieved: f64, tol: f64 },
    /// The integrand does not decay below `tol * peak` at the domain endpoints.
    #[error("quadrature truncation too tight for tol {tol:.3e} (endpoint magnitude {endpoint:.3e} of peak)")]
    TruncationTooTight { tol: f64, endpoint: f64 },
    /// A physical parameter failed validation.
    #[error("invalid parameters: {0}")]
    ParamsInvalid(String),
    /// Dual-derivation self-check failed (engine vs printed closed form).
    #[error("internal consistency error in {what}: relative disagreement {rel_err:.3e}")]
    Inconsistent { what: &'static str, rel_err: f64 },
    /// More than three photons in the two-mode Fock sector.
    #[error("photon number overflow: total {0} exceeds the 3-photon sector")]
    PhotonOverflow(u32),
    /// A photodetection outcome sequence longer than the photon budget.
    #[error("invalid outcome sequence: {0}")]
    InvalidOutcome(String),
    /// Probability curves defined on different grids were combined.
    #[error("probability curves are not on a shared grid")]
    GridMismatch,
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    /// Config file rejected, with the offending line and field.
    #[error("invalid config (line {line}, field `{field}`): {msg}")]
    ConfigInvalid {
        line: usize,
        field: String,
        msg: String,
    },
}

pub type Result<T> = std::result::Result<T, Error>;
