//! Classical, minimal nonclassical, and looped path wave functions.
//!
//! Each wave function is derived twice: once through the composition engine
//! and once from the printed closed-form constants. The two derivations are
//! compared at construction; disagreement beyond 1e-9 relative is reported
//! as an internal consistency error.

use num_complex::Complex64;

use crate::gaussians::{compose, GaussianKernel, QuadraticForm};
use crate::{Error, Result};

/// CODATA hbar, J s.
const HBAR_SI: f64 = 1.054571817e-34;
/// Converts kg / (J s) to ms / um^2.
const MASS_OVER_HBAR_UNIT: f64 = 1e-9;

/// Default mass 1.44e-25 kg expressed as m/hbar in ms/um^2.
pub fn default_mass_over_hbar() -> f64 {
    1.44e-25 / HBAR_SI * MASS_OVER_HBAR_UNIT
}

/// Slit geometry and timing. Lengths in um, times in ms, mass as m/hbar in
/// ms/um^2; in these units every exponent in the pipeline stays O(1)-O(100).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalParams {
    pub mass_over_hbar: f64,
    /// Slit separation; slit A sits at +d/2, slit B at -d/2.
    pub d: f64,
    /// Source packet width.
    pub sigma0: f64,
    /// Slit width.
    pub beta: f64,
    /// Source to slit-plane time.
    pub t: f64,
    /// Slit-plane to screen time.
    pub tau: f64,
    /// Slit-to-slit transit time.
    pub epsilon: f64,
}

impl Default for PhysicalParams {
    fn default() -> Self {
        Self {
            mass_over_hbar: default_mass_over_hbar(),
            d: 5.0,
            sigma0: 0.3,
            beta: 0.3,
            t: 5.0,
            tau: 5.0,
            epsilon: 2.9,
        }
    }
}

impl PhysicalParams {
    // `!(x > 0)` style rejects NaN along with out-of-range values
    #[allow(clippy::neg_cmp_op_on_partial_ord)]
    pub fn validate(&self) -> Result<()> {
        let fields = [
            ("mass_over_hbar", self.mass_over_hbar),
            ("d", self.d),
            ("sigma0", self.sigma0),
            ("beta", self.beta),
            ("t", self.t),
            ("tau", self.tau),
            ("epsilon", self.epsilon),
        ];
        for (name, v) in fields {
            if !(v > 0.0) || !v.is_finite() {
                return Err(Error::ParamsInvalid(format!(
                    "{name} must be strictly positive and finite, got {v}"
                )));
            }
        }
        Ok(())
    }

    fn slit_center(&self, slit: Slit) -> f64 {
        match slit {
            Slit::A => 0.5 * self.d,
            Slit::B => -0.5 * self.d,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Slit {
    A,
    B,
}

impl Slit {
    pub fn other(self) -> Self {
        match self {
            Slit::A => Slit::B,
            Slit::B => Slit::A,
        }
    }
}

/// Path families by slit traversal sequence.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PathLabel {
    A,
    B,
    AB,
    BA,
    BAB,
    ABA,
}

impl PathLabel {
    /// Number of slit transmissions; the per-traversal attenuation acts as
    /// `|psi|^2 ~ |a^m psi0|^2` with this m (distinct from the mass).
    pub fn traversal_count(self) -> u32 {
        match self {
            PathLabel::A | PathLabel::B => 1,
            PathLabel::AB | PathLabel::BA => 2,
            PathLabel::BAB | PathLabel::ABA => 3,
        }
    }

    /// Slit sequence, in traversal order.
    pub fn slits(self) -> &'static [Slit] {
        match self {
            PathLabel::A => &[Slit::A],
            PathLabel::B => &[Slit::B],
            PathLabel::AB => &[Slit::A, Slit::B],
            PathLabel::BA => &[Slit::B, Slit::A],
            PathLabel::BAB => &[Slit::B, Slit::A, Slit::B],
            PathLabel::ABA => &[Slit::A, Slit::B, Slit::A],
        }
    }
}

/// The source packet `psi0(x) = exp(-x^2 / 2 sigma0^2) / sqrt(sigma0 sqrt(pi))`,
/// unit-normalized in `|.|^2`.
#[derive(Debug, Clone, Copy)]
pub struct SourcePacket {
    pub sigma0: f64,
}

impl SourcePacket {
    pub fn form(&self) -> QuadraticForm {
        let norm = -0.5 * (self.sigma0 * std::f64::consts::PI.sqrt()).ln();
        QuadraticForm::new(
            Complex64::new(norm, 0.0),
            Complex64::new(-1.0 / (2.0 * self.sigma0 * self.sigma0), 0.0),
            Complex64::ZERO,
            Complex64::ZERO,
        )
    }
}

/// Engine composition of the full pipeline for an arbitrary slit sequence:
/// `psi0 -> K(t) -> [T(slit) -> K(epsilon)]* -> T(last slit) -> K(tau)`.
///
/// The intermediate epochs are `t`, `t + epsilon`, `t + 2 epsilon`, ...; only
/// the durations enter the propagators.
pub fn engine_form(params: &PhysicalParams, label: PathLabel) -> Result<QuadraticForm> {
    params.validate()?;
    let m = params.mass_over_hbar;
    let mut form = compose(
        &SourcePacket {
            sigma0: params.sigma0,
        }
        .form(),
        &GaussianKernel::free_propagator(m, params.t),
    )?;
    let slits = label.slits();
    for (i, &slit) in slits.iter().enumerate() {
        let dt = if i + 1 == slits.len() {
            params.tau
        } else {
            params.epsilon
        };
        let kernel = GaussianKernel::free_propagator(m, dt)
            .with_transmission(params.beta, params.slit_center(slit));
        form = compose(&form, &kernel)?;
    }
    Ok(form)
}

/// Closed-form constants as printed: prefactor `Gamma` plus the exponent
/// coefficients of `Gamma exp(c2 x^2 + c1 x + c0)`.
#[derive(Debug, Clone, Copy)]
pub struct FormConstants {
    pub gamma: Complex64,
    pub c2: Complex64,
    pub c1: Complex64,
    pub c0: Complex64,
}

impl FormConstants {
    pub fn form(&self) -> QuadraticForm {
        QuadraticForm::new(self.gamma.ln(), self.c2, self.c1, self.c0)
    }
}

/// Classical single-slit constants (Gamma_c, c0, c1, c2), evaluated with
/// hbar = 1 and m replaced by m/hbar. The printed c1 sign corresponds to
/// slit A; slit B flips it.
pub fn classical_constants(params: &PhysicalParams) -> FormConstants {
    let m = Complex64::new(params.mass_over_hbar, 0.0);
    let i = Complex64::i();
    let (d, s0, b) = (params.d, params.sigma0, params.beta);
    let (t, tau) = (params.t, params.tau);
    let (b2, s2) = (b * b, s0 * s0);

    let denom = -i * m * m * b2 * s2 + m * (t * b2 + (b2 + s2) * tau) + i * t * tau;
    // i * denom: the common denominator of the exponent coefficients
    let denom_c = i * denom;
    let gamma = -i * m * b / (std::f64::consts::PI.powf(0.25) * (-i * m * s0 + t / s0).sqrt())
        / (denom / (m * s2 + i * t)).sqrt();
    let c0 = -m * (d * d * m * s2 + i * d * d * (t + tau)) / (8.0 * denom_c);
    let c1 = m * (4.0 * d * m * s2 + i * 4.0 * d * t) / (8.0 * denom_c);
    let c2 = -m * (4.0 * m * (b2 + s2) + i * 4.0 * t) / (8.0 * denom_c);
    FormConstants { gamma, c2, c1, c0 }
}

/// Minimal nonclassical constants (Gamma_nc, c'0, c'1, c'2). The printed
/// c'1 sign corresponds to the A-then-B traversal; B-then-A flips it.
pub fn nonclassical_constants(params: &PhysicalParams) -> FormConstants {
    let m = Complex64::new(params.mass_over_hbar, 0.0);
    let i = Complex64::i();
    let (d, s0, b) = (params.d, params.sigma0, params.beta);
    let (t, tau, eps) = (params.t, params.tau, params.epsilon);
    let (b2, s2) = (b * b, s0 * s0);

    let d1 = -i * m * m * b2 * s2 + m * (t * b2 + eps * (b2 + s2)) + i * t * eps;
    let d2 = -i * m * m * m * b2 * b2 * s2
        + m * m * b2 * (t * b2 + b2 * (eps + tau) + s2 * (eps + 2.0 * tau))
        + i * m * (eps * (b2 + s2) * tau + t * b2 * (eps + 2.0 * tau))
        - t * eps * tau;
    let denom_c = i * d2;

    // (-1/pi)^(1/4) on the principal branch
    let quarter_root = Complex64::new(-1.0 / std::f64::consts::PI, 0.0).powf(0.25);
    let gamma = -m * m.sqrt() * b2 * quarter_root
        / (-i * m * s0 + t / s0).sqrt()
        / (d1 / (m * s2 + i * t)).sqrt()
        / (d2 / (i * d1)).sqrt();
    let c0 = -m
        * (2.0 * d * d * m * m * b2 * s2
            + i * d * d * m * (2.0 * t * b2 + 2.0 * b2 * (eps + tau) + s2 * (eps + 4.0 * tau))
            - d * d * (eps * tau + t * (eps + 4.0 * tau)))
        / (8.0 * denom_c);
    let c1 = -m * (i * 4.0 * d * m * eps * (b2 + s2) - 4.0 * d * t * eps) / (8.0 * denom_c);
    let c2 = -m
        * (4.0 * m * m * b2 * (b2 + 2.0 * s2) + i * 4.0 * m * (2.0 * t * b2 + eps * (b2 + s2))
            - 4.0 * t * eps)
        / (8.0 * denom_c);
    FormConstants { gamma, c2, c1, c0 }
}

const DUAL_DERIVATION_TOL: f64 = 1e-9;

fn check_consistency(
    what: &'static str,
    engine: &QuadraticForm,
    formula: &FormConstants,
) -> Result<()> {
    let rel = |a: Complex64, b: Complex64| (a - b).norm() / b.norm();
    let mut worst = rel(engine.c2, formula.c2).max(rel(engine.c1, formula.c1));
    // the constant term is compared through exp() so that the 2 pi i
    // ambiguity of the log prefactor cannot produce a false mismatch
    let delta = engine.total_constant() - (formula.gamma.ln() + formula.c0);
    worst = worst.max((delta.exp() - Complex64::ONE).norm());
    if worst > DUAL_DERIVATION_TOL {
        return Err(Error::Inconsistent {
            what,
            rel_err: worst,
        });
    }
    Ok(())
}

/// The classical wave function psi_A or psi_B, with the built-in
/// engine-vs-formula transcription check.
pub fn classical_form(params: &PhysicalParams, slit: Slit) -> Result<QuadraticForm> {
    let label = match slit {
        Slit::A => PathLabel::A,
        Slit::B => PathLabel::B,
    };
    let engine = engine_form(params, label)?;
    let mut formula = classical_constants(params);
    if slit == Slit::B {
        formula.c1 = -formula.c1;
    }
    check_consistency("classical_form", &engine, &formula)?;
    Ok(engine)
}

/// The minimal nonclassical wave function psi_AB or psi_BA.
pub fn nonclassical_form(params: &PhysicalParams, order: PathLabel) -> Result<QuadraticForm> {
    assert!(
        matches!(order, PathLabel::AB | PathLabel::BA),
        "nonclassical_form takes AB or BA"
    );
    let engine = engine_form(params, order)?;
    let mut formula = nonclassical_constants(params);
    if order == PathLabel::BA {
        formula.c1 = -formula.c1;
    }
    check_consistency("nonclassical_form", &engine, &formula)?;
    Ok(engine)
}

/// The looped wave function psi_BAB or psi_ABA. No printed closed form
/// exists; the engine result is authoritative (validated against 4-fold
/// nested quadrature in the oracle suite).
pub fn looped_form(params: &PhysicalParams, order: PathLabel) -> Result<QuadraticForm> {
    assert!(
        matches!(order, PathLabel::BAB | PathLabel::ABA),
        "looped_form takes BAB or ABA"
    );
    engine_form(params, order)
}

/// Per-traversal amplitude attenuation
/// `a = sqrt(integral |psi_AB|^2 / integral |psi_A|^2)`.
pub fn attenuation_factor(params: &PhysicalParams) -> Result<f64> {
    let a = classical_form(params, Slit::A)?;
    let ab = nonclassical_form(params, PathLabel::AB)?;
    Ok((ab.norm_l2_squared() / a.norm_l2_squared()).sqrt())
}
