//! Atom-cavity which-way detectors and photocount statistics.
//!
//! The two-cavity state entangles the atom level and the cavity Fock labels
//! with the path wave functions. Opening the shutters mixes the cavity
//! modes on a 50:50 beam splitter; photodetection at the output ports is a
//! stochastic jump process whose ordered-click weights are tabulated in
//! closed form ([`photocount_weight`]) and independently reproduced by
//! direct time quadrature of the jump expansion ([`jump_process_oracle`]).

use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex64;

use crate::curve::{Grid, ProbabilityCurve};
use crate::gaussians::QuadraticForm;
use crate::paths::{classical_form, nonclassical_form, PathLabel, PhysicalParams, Slit};
use crate::quadrature::adaptive;
use crate::{Error, Result};

/// Cavity mode parameters. The interaction (pi-pulse) time is set by the
/// mode frequency; the detection statistics depend only on the product
/// `gamma * detection_time`.
#[derive(Debug, Clone, Copy)]
pub struct CavityParams {
    /// Mode angular frequency, rad/ms.
    pub omega: f64,
    /// Photon number n; the pi pulse swaps `|e,n> <-> |g,n+1>`.
    pub n_excitations: u32,
    /// Cavity width, 1/ms.
    pub gamma: f64,
    /// Photodetection time, ms.
    pub detection_time: f64,
}

impl CavityParams {
    /// `pi / (sqrt(n+1) omega)`: interaction time for a deterministic
    /// excitation exchange.
    pub fn pi_pulse_time(&self) -> f64 {
        std::f64::consts::PI / ((self.n_excitations as f64 + 1.0).sqrt() * self.omega)
    }

    pub fn gamma_t(&self) -> f64 {
        self.gamma * self.detection_time
    }

    // `!(x > 0)` style rejects NaN along with out-of-range values
    #[allow(clippy::neg_cmp_op_on_partial_ord)]
    pub fn validate(&self) -> Result<()> {
        if !(self.omega > 0.0) {
            return Err(Error::ParamsInvalid("omega must be positive".into()));
        }
        if self.gamma < 0.0 || self.detection_time < 0.0 {
            return Err(Error::ParamsInvalid(
                "gamma and detection_time must be non-negative".into(),
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum AtomLevel {
    Ground,
    Excited,
}

/// A photodetector output port.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Sign {
    Plus,
    Minus,
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sign::Plus => "+",
            Sign::Minus => "-",
        })
    }
}

/// An ordered photodetector click record, earliest first, length 0-3.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct OutcomeSequence(Vec<Sign>);

impl OutcomeSequence {
    pub fn new(clicks: Vec<Sign>) -> Result<Self> {
        if clicks.len() > 3 {
            return Err(Error::InvalidOutcome(format!(
                "at most 3 photons can be detected, got {} clicks",
                clicks.len()
            )));
        }
        Ok(Self(clicks))
    }

    pub fn empty() -> Self {
        Self(Vec::new())
    }

    pub fn clicks(&self) -> &[Sign] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    fn count(&self, s: Sign) -> usize {
        self.0.iter().filter(|&&c| c == s).count()
    }

    /// All ordered sequences of the given length.
    pub fn all_of_len(len: usize) -> Vec<Self> {
        assert!(len <= 3);
        let mut out = vec![Vec::new()];
        for _ in 0..len {
            out = out
                .into_iter()
                .flat_map(|s| {
                    [Sign::Plus, Sign::Minus].into_iter().map(move |c| {
                        let mut s = s.clone();
                        s.push(c);
                        s
                    })
                })
                .collect();
        }
        out.into_iter().map(Self).collect()
    }

    /// All ordered sequences up to the given length, shortest first.
    pub fn all_up_to(len: usize) -> Vec<Self> {
        (0..=len).flat_map(Self::all_of_len).collect()
    }
}

impl fmt::Display for OutcomeSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            f.write_str("0")
        } else {
            for c in &self.0 {
                write!(f, "{c}")?;
            }
            Ok(())
        }
    }
}

/// Photon numbers in the two cavity modes; interpreted in the A/B labels
/// before the beam splitter and in the +/- labels after it.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FockPair {
    pub n_a: u32,
    pub n_b: u32,
}

impl FockPair {
    pub fn new(n_a: u32, n_b: u32) -> Self {
        Self { n_a, n_b }
    }

    pub fn total(&self) -> u32 {
        self.n_a + self.n_b
    }
}

fn factorial(n: u32) -> f64 {
    (1..=n).map(|k| k as f64).product()
}

fn binomial(n: u32, k: u32) -> f64 {
    factorial(n) / (factorial(k) * factorial(n - k))
}

/// Applies the 50:50 beam-splitter mode mixing `a_±^† = (a_A^† ± a_B^†)/sqrt(2)`
/// to a Fock pair in A/B labels, returning its expansion over +/- labels.
/// Unitary on the <=3-photon sector.
pub fn beam_splitter_transform(fock: FockPair) -> Result<Vec<(Complex64, FockPair)>> {
    let n = fock.total();
    if n > 3 {
        return Err(Error::PhotonOverflow(n));
    }
    let (na, nb) = (fock.n_a, fock.n_b);
    let mut out = Vec::new();
    for k_plus in 0..=n {
        let k_minus = n - k_plus;
        // expand (a+^† + a-^†)^na (a+^† - a-^†)^nb over monomials with
        // k_plus raising operators on the + mode
        let mut coeff = 0.0;
        for i in 0..=na.min(k_plus) {
            let j = k_plus - i;
            if j > nb {
                continue;
            }
            let sign = if (nb - j) % 2 == 0 { 1.0 } else { -1.0 };
            coeff += binomial(na, i) * binomial(nb, j) * sign;
        }
        if coeff == 0.0 {
            continue;
        }
        let amp = coeff * (factorial(k_plus) * factorial(k_minus)).sqrt()
            / (2f64.powi(n as i32) * factorial(na) * factorial(nb)).sqrt();
        out.push((
            Complex64::new(amp, 0.0),
            FockPair::new(k_plus, k_minus),
        ));
    }
    Ok(out)
}

/// One term of the which-way superposition.
#[derive(Debug, Clone)]
pub struct StateTerm {
    pub atom: AtomLevel,
    pub fock: FockPair,
    pub form: QuadraticForm,
    pub weight: Complex64,
}

/// Superposition of (atom level x Fock label x path wave function) terms,
/// with the overall normalization constant recorded.
#[derive(Debug, Clone)]
pub struct WhichWayState {
    pub terms: Vec<StateTerm>,
    /// N2: sum over terms of |weight|^2 integral |form|^2 dx.
    pub normalization: f64,
}

impl WhichWayState {
    fn form(&self, atom: AtomLevel, fock: FockPair) -> &QuadraticForm {
        &self
            .terms
            .iter()
            .find(|t| t.atom == atom && t.fock == fock)
            .expect("term present by construction")
            .form
    }

    /// Classical symmetric/antisymmetric amplitudes `(psi_A ± psi_B)/sqrt(2)`.
    pub fn classical_pm(&self, x: f64) -> (Complex64, Complex64) {
        let a = self.form(AtomLevel::Ground, FockPair::new(2, 1)).evaluate(x);
        let b = self.form(AtomLevel::Ground, FockPair::new(1, 2)).evaluate(x);
        let s = std::f64::consts::FRAC_1_SQRT_2;
        ((a + b) * s, (a - b) * s)
    }

    /// Nonclassical symmetric/antisymmetric amplitudes `(psi_AB ± psi_BA)/sqrt(2)`.
    pub fn nonclassical_pm(&self, x: f64) -> (Complex64, Complex64) {
        let ab = self.form(AtomLevel::Excited, FockPair::new(2, 0)).evaluate(x);
        let ba = self.form(AtomLevel::Excited, FockPair::new(0, 2)).evaluate(x);
        let s = std::f64::consts::FRAC_1_SQRT_2;
        ((ab + ba) * s, (ab - ba) * s)
    }
}

/// The four-term state just before the detection screen for the
/// `|e>|1>_A|1>_B` initial configuration:
/// `|g>|2,1> psi_A + |g>|1,2> psi_B + |e>|2,0> psi_AB + |e>|0,2> psi_BA`.
pub fn build_two_cavity_state(params: &PhysicalParams) -> Result<WhichWayState> {
    let psi_a = classical_form(params, Slit::A)?;
    let psi_b = classical_form(params, Slit::B)?;
    let psi_ab = nonclassical_form(params, PathLabel::AB)?;
    let psi_ba = nonclassical_form(params, PathLabel::BA)?;
    let terms = vec![
        StateTerm {
            atom: AtomLevel::Ground,
            fock: FockPair::new(2, 1),
            form: psi_a,
            weight: Complex64::ONE,
        },
        StateTerm {
            atom: AtomLevel::Ground,
            fock: FockPair::new(1, 2),
            form: psi_b,
            weight: Complex64::ONE,
        },
        StateTerm {
            atom: AtomLevel::Excited,
            fock: FockPair::new(2, 0),
            form: psi_ab,
            weight: Complex64::ONE,
        },
        StateTerm {
            atom: AtomLevel::Excited,
            fock: FockPair::new(0, 2),
            form: psi_ba,
            weight: Complex64::ONE,
        },
    ];
    let normalization = terms
        .iter()
        .map(|t| t.weight.norm_sqr() * t.form.norm_l2_squared())
        .sum();
    Ok(WhichWayState {
        terms,
        normalization,
    })
}

/// Screen distributions conditioned on the detected atom level:
/// `P_g = (|psi_A|^2 + |psi_B|^2)/N2`, `P_e = (|psi_AB|^2 + |psi_BA|^2)/N2`.
pub fn atom_conditioned_curves(
    state: &WhichWayState,
    grid: &Grid,
) -> (ProbabilityCurve, ProbabilityCurve) {
    let n2 = state.normalization;
    let mut g = Vec::with_capacity(grid.xs.len());
    let mut e = Vec::with_capacity(grid.xs.len());
    for &x in &grid.xs {
        let (cp, cm) = state.classical_pm(x);
        let (np, nm) = state.nonclassical_pm(x);
        g.push((cp.norm_sqr() + cm.norm_sqr()) / n2);
        e.push((np.norm_sqr() + nm.norm_sqr()) / n2);
    }
    (
        ProbabilityCurve::from_raw(grid.xs.clone(), g),
        ProbabilityCurve::from_raw(grid.xs.clone(), e),
    )
}

/// Ordered-click weight coefficients from the closed-form photocount table,
/// as the pair multiplying `(|psi^+|^2, |psi^-|^2)` (classical +- for the
/// ground sector, nonclassical +- for the excited sector). Includes the
/// `e^{-6 Gamma t}` / `e^{-4 Gamma t}` prefactors and `(e^{2 Gamma t}-1)^k`
/// factors.
pub fn photocount_weight(
    atom: AtomLevel,
    outcome: &OutcomeSequence,
    gamma_t: f64,
) -> Result<(f64, f64)> {
    if gamma_t < 0.0 {
        return Err(Error::ParamsInvalid("gamma_t must be non-negative".into()));
    }
    let budget = match atom {
        AtomLevel::Ground => 3,
        AtomLevel::Excited => 2,
    };
    if outcome.len() > budget {
        return Err(Error::InvalidOutcome(format!(
            "{} clicks exceed the {}-photon budget of the {:?} sector",
            outcome.len(),
            budget,
            atom
        )));
    }
    let u = (2.0 * gamma_t).exp_m1();
    let n_plus = outcome.count(Sign::Plus);
    let (w_plus, w_minus) = match atom {
        AtomLevel::Ground => match (outcome.len(), n_plus) {
            (0, _) => (1.0, 1.0),
            (1, 1) => (u * 2.5, u * 0.5),
            (1, 0) => (u * 0.5, u * 2.5),
            (2, 2) => (0.5 * u * u * 4.5, 0.5 * u * u * 0.5),
            (2, 0) => (0.5 * u * u * 0.5, 0.5 * u * u * 4.5),
            (2, 1) => (0.5 * u * u * 0.5, 0.5 * u * u * 0.5),
            (3, 3) => (u.powi(3) / 6.0 * 4.5, 0.0),
            (3, 0) => (0.0, u.powi(3) / 6.0 * 4.5),
            (3, 1) => (u.powi(3) / 6.0 * 0.5, 0.0),
            (3, 2) => (0.0, u.powi(3) / 6.0 * 0.5),
            _ => unreachable!(),
        },
        AtomLevel::Excited => match (outcome.len(), n_plus) {
            (0, _) => (1.0, 1.0),
            (1, _) => (u, u),
            (2, 2) | (2, 0) => (0.5 * u * u, 0.0),
            (2, 1) => (0.0, 0.5 * u * u),
            _ => unreachable!(),
        },
    };
    let decay = match atom {
        AtomLevel::Ground => (-6.0 * gamma_t).exp(),
        AtomLevel::Excited => (-4.0 * gamma_t).exp(),
    };
    Ok((w_plus * decay, w_minus * decay))
}

/// Per-outcome screen distributions of the quantum eraser:
/// `P(x) = (w+ |psi^+|^2 + w- |psi^-|^2) / N2` with the sector-appropriate
/// symmetric/antisymmetric amplitudes.
pub fn eraser_curves(
    state: &WhichWayState,
    grid: &Grid,
    gamma_t: f64,
) -> Result<BTreeMap<(AtomLevel, OutcomeSequence), ProbabilityCurve>> {
    let n2 = state.normalization;
    let mut out = BTreeMap::new();
    for (atom, max_len) in [(AtomLevel::Ground, 3), (AtomLevel::Excited, 2)] {
        for outcome in OutcomeSequence::all_up_to(max_len) {
            let (wp, wm) = photocount_weight(atom, &outcome, gamma_t)?;
            let values: Vec<f64> = grid
                .xs
                .iter()
                .map(|&x| {
                    let (p, m) = match atom {
                        AtomLevel::Ground => state.classical_pm(x),
                        AtomLevel::Excited => state.nonclassical_pm(x),
                    };
                    (wp * p.norm_sqr() + wm * m.norm_sqr()) / n2
                })
                .collect();
            out.insert(
                (atom, outcome),
                ProbabilityCurve::from_raw(grid.xs.clone(), values),
            );
        }
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// Jump-process oracle: direct time quadrature on the two-mode Fock space.

/// Basis of the <=3-photon two-mode sector, in +/- labels.
const FOCK_BASIS: [(u32, u32); 10] = [
    (0, 0),
    (0, 1),
    (0, 2),
    (0, 3),
    (1, 0),
    (1, 1),
    (1, 2),
    (2, 0),
    (2, 1),
    (3, 0),
];

fn basis_index(n_plus: u32, n_minus: u32) -> usize {
    FOCK_BASIS
        .iter()
        .position(|&(p, m)| p == n_plus && m == n_minus)
        .expect("within the 3-photon sector")
}

type FockVec = [Complex64; 10];

fn decay(v: &FockVec, dt: f64) -> FockVec {
    let mut out = [Complex64::ZERO; 10];
    for (i, &(p, m)) in FOCK_BASIS.iter().enumerate() {
        out[i] = v[i] * (-((p + m) as f64) * dt).exp();
    }
    out
}

fn annihilate(v: &FockVec, port: Sign) -> FockVec {
    let mut out = [Complex64::ZERO; 10];
    for (i, &(p, m)) in FOCK_BASIS.iter().enumerate() {
        let (np, nm, amp) = match port {
            Sign::Plus if p > 0 => (p - 1, m, (p as f64).sqrt()),
            Sign::Minus if m > 0 => (p, m - 1, (m as f64).sqrt()),
            _ => continue,
        };
        out[basis_index(np, nm)] += v[i] * amp;
    }
    out
}

fn norm_sqr(v: &FockVec) -> f64 {
    v.iter().map(|c| c.norm_sqr()).sum()
}

/// Weight of one ordered click sequence: the nested time integral of the
/// jump expansion, evaluated recursively by adaptive quadrature in the
/// dimensionless time `theta = Gamma t'`.
fn sequence_weight(v: &FockVec, clicks: &[Sign], t_start: f64, gamma_t: f64, tol: f64) -> Result<f64> {
    match clicks.split_first() {
        None => Ok(norm_sqr(&decay(v, gamma_t - t_start))),
        Some((&first, rest)) => {
            let (val, _) = adaptive(
                |theta| {
                    let jumped = annihilate(&decay(v, theta - t_start), first);
                    let w = sequence_weight(&jumped, rest, theta, gamma_t, tol)
                        .expect("inner quadrature convergence");
                    Complex64::new(w, 0.0)
                },
                t_start,
                gamma_t,
                tol,
            )?;
            Ok(2.0 * val.re)
        }
    }
}

/// Initial sector vectors in the +/- Fock labels, attached to the
/// symmetric and antisymmetric path amplitudes respectively: (mu+, mu-)
/// for the ground sector, (nu+, nu-) for the excited one.
fn sector_vectors(atom: AtomLevel) -> Result<(FockVec, FockVec)> {
    let (pair_a, pair_b) = match atom {
        AtomLevel::Ground => (FockPair::new(2, 1), FockPair::new(1, 2)),
        AtomLevel::Excited => (FockPair::new(2, 0), FockPair::new(0, 2)),
    };
    let mut plus = [Complex64::ZERO; 10];
    let mut minus = [Complex64::ZERO; 10];
    let s = std::f64::consts::FRAC_1_SQRT_2;
    for (pair, sign) in [(pair_a, 1.0), (pair_b, -1.0)] {
        for (amp, out) in beam_splitter_transform(pair)? {
            let i = basis_index(out.n_a, out.n_b);
            plus[i] += amp * s;
            minus[i] += amp * s * sign;
        }
    }
    Ok((plus, minus))
}

/// Directly evaluates the stochastic jump expansion on the two-mode Fock
/// space by nested numerical time quadrature, returning for every outcome
/// sequence the weight pair multiplying `(|psi^+|^2, |psi^-|^2)`.
///
/// This is the independent oracle for [`photocount_weight`]; it shares no
/// closed-form table with it.
pub fn jump_process_oracle(
    atom: AtomLevel,
    gamma_t: f64,
    tol: f64,
) -> Result<BTreeMap<OutcomeSequence, (f64, f64)>> {
    if gamma_t < 0.0 {
        return Err(Error::ParamsInvalid("gamma_t must be non-negative".into()));
    }
    let (v_plus, v_minus) = sector_vectors(atom)?;
    let mut out = BTreeMap::new();
    for outcome in OutcomeSequence::all_up_to(3) {
        let wp = sequence_weight(&v_plus, outcome.clicks(), 0.0, gamma_t, tol)?;
        let wm = sequence_weight(&v_minus, outcome.clicks(), 0.0, gamma_t, tol)?;
        out.insert(outcome, (wp, wm));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    const GT_INF: f64 = 20.0;

    #[test]
    fn pi_pulse_time() {
        let p = CavityParams {
            omega: 2.0,
            n_excitations: 1,
            gamma: 1.0,
            detection_time: 1.0,
        };
        let expect = std::f64::consts::PI / (2.0_f64.sqrt() * 2.0);
        assert!((p.pi_pulse_time() - expect).abs() < 1e-15);
    }

    #[test]
    fn beam_splitter_nu_minus_goes_to_one_one() {
        // |nu-> = (|2,0> - |0,2>)/sqrt(2) -> |1>+|1>-
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let mut acc: BTreeMap<(u32, u32), Complex64> = BTreeMap::new();
        for (pair, w) in [(FockPair::new(2, 0), s), (FockPair::new(0, 2), -s)] {
            for (amp, out) in beam_splitter_transform(pair).unwrap() {
                *acc.entry((out.n_a, out.n_b)).or_insert(Complex64::ZERO) += amp * w;
            }
        }
        for ((p, m), amp) in acc {
            let expect = if (p, m) == (1, 1) { 1.0 } else { 0.0 };
            assert!((amp - expect).norm() < 1e-14, "({p},{m}) -> {amp}");
        }
    }

    #[test]
    fn beam_splitter_vacuum_fixed() {
        let out = beam_splitter_transform(FockPair::new(0, 0)).unwrap();
        assert_eq!(out.len(), 1);
        assert!((out[0].0 - Complex64::ONE).norm() < 1e-15);
        assert_eq!(out[0].1, FockPair::new(0, 0));
    }

    #[test]
    fn beam_splitter_overflow() {
        assert!(matches!(
            beam_splitter_transform(FockPair::new(2, 2)),
            Err(Error::PhotonOverflow(4))
        ));
    }

    #[test]
    fn beam_splitter_unitary_on_sector() {
        // columns of the transform matrix are orthonormal
        for (i, &(na, nb)) in FOCK_BASIS.iter().enumerate() {
            for &(ma, mb) in &FOCK_BASIS[i..] {
                let u = beam_splitter_transform(FockPair::new(na, nb)).unwrap();
                let v = beam_splitter_transform(FockPair::new(ma, mb)).unwrap();
                let mut dot = Complex64::ZERO;
                for (a, fa) in &u {
                    for (b, fb) in &v {
                        if fa == fb {
                            dot += a.conj() * b;
                        }
                    }
                }
                let expect = if (na, nb) == (ma, mb) { 1.0 } else { 0.0 };
                assert!((dot - expect).norm() < 1e-12, "({na},{nb}) . ({ma},{mb})");
            }
        }
    }

    #[test]
    fn zero_detection_time_recovers_unconditioned() {
        let (wp, wm) = photocount_weight(AtomLevel::Ground, &OutcomeSequence::empty(), 0.0).unwrap();
        assert_eq!((wp, wm), (1.0, 1.0));
        // only the empty outcome survives at gamma_t = 0
        for outcome in OutcomeSequence::all_up_to(3) {
            if outcome.is_empty() {
                continue;
            }
            let (wp, wm) = photocount_weight(AtomLevel::Ground, &outcome, 0.0).unwrap();
            assert_eq!((wp, wm), (0.0, 0.0));
        }
    }

    #[test]
    fn three_same_clicks_long_time() {
        let seq = OutcomeSequence::new(vec![Sign::Plus; 3]).unwrap();
        let (wp, wm) = photocount_weight(AtomLevel::Ground, &seq, GT_INF).unwrap();
        assert!((wp - 0.75).abs() < 1e-9);
        assert!(wm.abs() < 1e-15);
    }

    #[test]
    fn long_time_coefficients() {
        let kj = OutcomeSequence::new(vec![Sign::Plus, Sign::Minus]).unwrap();
        let (_, wm) = photocount_weight(AtomLevel::Excited, &kj, GT_INF).unwrap();
        assert!((wm - 0.5).abs() < 1e-9);
        let kjk = OutcomeSequence::new(vec![Sign::Plus, Sign::Minus, Sign::Minus]).unwrap();
        let (wp, _) = photocount_weight(AtomLevel::Ground, &kjk, GT_INF).unwrap();
        assert!((wp - 1.0 / 12.0).abs() < 1e-9);
    }

    #[test]
    fn probability_conservation() {
        for gamma_t in [0.0, 0.5, 2.0, 20.0] {
            for (atom, max_len) in [(AtomLevel::Ground, 3), (AtomLevel::Excited, 2)] {
                let mut sum_p = 0.0;
                let mut sum_m = 0.0;
                for outcome in OutcomeSequence::all_up_to(max_len) {
                    let (wp, wm) = photocount_weight(atom, &outcome, gamma_t).unwrap();
                    sum_p += wp;
                    sum_m += wm;
                }
                assert!((sum_p - 1.0).abs() < 1e-10, "{atom:?} gt={gamma_t}");
                assert!((sum_m - 1.0).abs() < 1e-10, "{atom:?} gt={gamma_t}");
            }
        }
    }

    #[test]
    fn outcome_budget_enforced() {
        let seq = OutcomeSequence::new(vec![Sign::Plus; 3]).unwrap();
        assert!(matches!(
            photocount_weight(AtomLevel::Excited, &seq, 1.0),
            Err(Error::InvalidOutcome(_))
        ));
        assert!(OutcomeSequence::new(vec![Sign::Plus; 4]).is_err());
    }

    #[test]
    fn jump_oracle_matches_table_at_unit_time() {
        let oracle = jump_process_oracle(AtomLevel::Ground, 1.0, 1e-11).unwrap();
        for (outcome, &(op, om)) in &oracle {
            let (tp, tm) = photocount_weight(AtomLevel::Ground, outcome, 1.0).unwrap();
            let scale = tp.abs().max(tm.abs()).max(1e-300);
            assert!(
                (op - tp).abs() / scale < 1e-8 && (om - tm).abs() / scale < 1e-8,
                "{outcome}: oracle ({op}, {om}) vs table ({tp}, {tm})"
            );
        }
    }

    #[test]
    fn jump_oracle_excited_three_clicks_zero() {
        let oracle = jump_process_oracle(AtomLevel::Excited, 1.0, 1e-11).unwrap();
        for (outcome, &(op, om)) in &oracle {
            if outcome.len() == 3 {
                assert!(op.abs() < 1e-12 && om.abs() < 1e-12, "{outcome}");
            }
        }
    }

    #[test]
    fn jump_oracle_trace_conservation() {
        for gamma_t in [0.1, 1.0, 10.0] {
            let oracle = jump_process_oracle(AtomLevel::Excited, gamma_t, 1e-12).unwrap();
            let sum_p: f64 = oracle.values().map(|w| w.0).sum();
            let sum_m: f64 = oracle.values().map(|w| w.1).sum();
            assert!((sum_p - 1.0).abs() < 1e-10, "gt={gamma_t}: {sum_p}");
            assert!((sum_m - 1.0).abs() < 1e-10, "gt={gamma_t}: {sum_m}");
        }
    }

    #[test]
    fn state_marginals() {
        let params = PhysicalParams::default();
        let state = build_two_cavity_state(&params).unwrap();
        let grid = Grid::auto(&params, 2001);
        let (pg, pe) = atom_conditioned_curves(&state, &grid);
        // total marginal integrates to 1
        let total = pg.integral() + pe.integral();
        assert!((total - 1.0).abs() < 1e-6, "total = {total}");
        // visibility window and evenness
        let ratio = pe.max_value() / pg.value_at_center();
        assert!((0.005..=0.02).contains(&ratio), "ratio = {ratio}");
        let n = grid.xs.len();
        for i in 0..n {
            assert!((pe.values[i] - pe.values[n - 1 - i]).abs() <= 1e-12 * pe.max_value());
        }
        // no fringes in the unconditioned nonclassical distribution
        assert_eq!(pe.count_interior_maxima(1e-6), 2);
    }

    #[test]
    fn eraser_recovers_unconditioned() {
        let params = PhysicalParams::default();
        let state = build_two_cavity_state(&params).unwrap();
        let grid = Grid::auto(&params, 1001);
        let (_, pe) = atom_conditioned_curves(&state, &grid);
        let curves = eraser_curves(&state, &grid, GT_INF).unwrap();
        let kk_plus = &curves[&(
            AtomLevel::Excited,
            OutcomeSequence::new(vec![Sign::Plus, Sign::Plus]).unwrap(),
        )];
        let kk_minus = &curves[&(
            AtomLevel::Excited,
            OutcomeSequence::new(vec![Sign::Minus, Sign::Minus]).unwrap(),
        )];
        let kj = &curves[&(
            AtomLevel::Excited,
            OutcomeSequence::new(vec![Sign::Plus, Sign::Minus]).unwrap(),
        )];
        let jk = &curves[&(
            AtomLevel::Excited,
            OutcomeSequence::new(vec![Sign::Minus, Sign::Plus]).unwrap(),
        )];
        let peak = pe.max_value();
        for i in 0..grid.xs.len() {
            let sum =
                kk_plus.values[i] + kk_minus.values[i] + kj.values[i] + jk.values[i];
            assert!((sum - pe.values[i]).abs() < 1e-10 * peak.max(1.0));
        }
        // fringes restored in the same-detector channel
        let fringes = ProbabilityCurve::from_raw(
            grid.xs.clone(),
            (0..grid.xs.len())
                .map(|i| kk_plus.values[i] + kk_minus.values[i])
                .collect(),
        );
        assert!(fringes.count_interior_maxima(1e-6) >= 3);
    }

    #[test]
    fn ground_state_selection_ratio() {
        let params = PhysicalParams::default();
        let state = build_two_cavity_state(&params).unwrap();
        let grid = Grid::auto(&params, 501);
        let curves = eraser_curves(&state, &grid, GT_INF).unwrap();
        let kkk = &curves[&(
            AtomLevel::Ground,
            OutcomeSequence::new(vec![Sign::Plus; 3]).unwrap(),
        )];
        let kjk = &curves[&(
            AtomLevel::Ground,
            OutcomeSequence::new(vec![Sign::Plus, Sign::Minus, Sign::Minus]).unwrap(),
        )];
        // both proportional to |psi_c^+|^2; coefficient ratio (3/4)/(1/12) = 9
        let i = grid.xs.len() / 2;
        assert!((kkk.values[i] / kjk.values[i] - 9.0).abs() < 1e-9);
    }
}
