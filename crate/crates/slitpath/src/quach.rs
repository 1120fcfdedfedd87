//! Which-way probability distributions and a Born-rule detector combination.
//!
//! The five distributions are built directly from the defining wave-function
//! expressions; the photocount-composition recipes are a validation layer on
//! top of them. The five-curve combination of the raw (un-normalized) curves
//! vanishes identically under the Born rule, nonclassical paths included.

use num_complex::Complex64;

use crate::cavity::{eraser_curves, AtomLevel, OutcomeSequence, Sign, WhichWayState};
use crate::curve::{Grid, ProbabilityCurve};
use crate::paths::{classical_form, nonclassical_form, PathLabel, PhysicalParams, Slit};
use crate::Result;

/// The four path amplitudes sampled on a common grid. Curves are quadratic
/// in these samples, so synthetic amplitude sets (test fixtures, zeroed
/// nonclassical limits) plug in the same way as the physical ones.
#[derive(Debug, Clone)]
pub struct AmplitudeSet {
    pub xs: Vec<f64>,
    pub psi_a: Vec<Complex64>,
    pub psi_b: Vec<Complex64>,
    pub psi_ab: Vec<Complex64>,
    pub psi_ba: Vec<Complex64>,
}

impl AmplitudeSet {
    pub fn from_params(params: &PhysicalParams, grid: &Grid) -> Result<Self> {
        let a = classical_form(params, Slit::A)?;
        let b = classical_form(params, Slit::B)?;
        let ab = nonclassical_form(params, PathLabel::AB)?;
        let ba = nonclassical_form(params, PathLabel::BA)?;
        let sample = |f: &crate::gaussians::QuadraticForm| -> Vec<Complex64> {
            grid.xs.iter().map(|&x| f.evaluate(x)).collect()
        };
        Ok(Self {
            xs: grid.xs.clone(),
            psi_a: sample(&a),
            psi_b: sample(&b),
            psi_ab: sample(&ab),
            psi_ba: sample(&ba),
        })
    }

    /// The pure-classical limit used by the washout checks.
    pub fn with_nonclassical_zeroed(&self) -> Self {
        Self {
            psi_ab: vec![Complex64::ZERO; self.xs.len()],
            psi_ba: vec![Complex64::ZERO; self.xs.len()],
            ..self.clone()
        }
    }

    fn len(&self) -> usize {
        self.xs.len()
    }

    /// The combined nonclassical amplitude `psi_AB + psi_BA` at sample i.
    fn nc(&self, i: usize) -> Complex64 {
        self.psi_ab[i] + self.psi_ba[i]
    }

    fn curve(&self, f: impl Fn(usize) -> f64) -> ProbabilityCurve {
        ProbabilityCurve::from_raw(self.xs.clone(), (0..self.len()).map(f).collect())
    }
}

/// No detectors: the coherent sum of all four path amplitudes,
/// `P_AB = |psi_A + psi_B + psi_AB + psi_BA|^2`.
pub fn p_no_detectors(amps: &AmplitudeSet) -> ProbabilityCurve {
    amps.curve(|i| (amps.psi_a[i] + amps.psi_b[i] + amps.nc(i)).norm_sqr())
}

/// A which-way detector in one slit:
/// `P_D_A = |psi_A + psi_AB + psi_BA|^2 + |psi_B|^2` (and mirrored for B).
pub fn p_single_detector(amps: &AmplitudeSet, slit: Slit) -> ProbabilityCurve {
    match slit {
        Slit::A => amps.curve(|i| {
            (amps.psi_a[i] + amps.nc(i)).norm_sqr() + amps.psi_b[i].norm_sqr()
        }),
        Slit::B => amps.curve(|i| {
            amps.psi_a[i].norm_sqr() + (amps.psi_b[i] + amps.nc(i)).norm_sqr()
        }),
    }
}

/// Detectors in both slits, built directly from the defining expressions:
/// distinguishable `P_D_A_D_B = |psi_A|^2 + |psi_B|^2 + |psi_AB + psi_BA|^2`,
/// indistinguishable `P_D_AB = |psi_A + psi_B|^2 + |psi_AB + psi_BA|^2`.
pub fn p_both_detectors(amps: &AmplitudeSet, distinguishable: bool) -> ProbabilityCurve {
    if distinguishable {
        amps.curve(|i| {
            amps.psi_a[i].norm_sqr() + amps.psi_b[i].norm_sqr() + amps.nc(i).norm_sqr()
        })
    } else {
        amps.curve(|i| (amps.psi_a[i] + amps.psi_b[i]).norm_sqr() + amps.nc(i).norm_sqr())
    }
}

/// The measurement-composition curve assembled from photocount outcome
/// selections, with its pointwise discrepancy against the direct
/// construction (raw values, same overall 1/N2 scale as the eraser curves).
#[derive(Debug, Clone)]
pub struct CompositionReport {
    pub curve: ProbabilityCurve,
    /// max over the grid of |composed - direct/N2| relative to the direct peak
    pub max_rel_discrepancy: f64,
    /// same, after rescaling both curves to unit integral
    pub max_rel_discrepancy_normalized: f64,
}

/// Assembles the both-detector curves from eraser outcome selections
/// (ground-sector triples plus same-detector excited pairs) and reports the
/// discrepancy against [`p_both_detectors`].
///
/// The selected ground triples for the indistinguishable curve are
/// `+++, +--, -+-, --+`; the distinguishable curve keeps every ground atom.
pub fn p_both_detectors_composed(
    state: &WhichWayState,
    grid: &Grid,
    gamma_t: f64,
    distinguishable: bool,
    direct: &ProbabilityCurve,
) -> Result<CompositionReport> {
    let curves = eraser_curves(state, grid, gamma_t)?;
    let mut values = vec![0.0; grid.xs.len()];
    let mut add = |atom: AtomLevel, clicks: Vec<Sign>| -> Result<()> {
        let c = &curves[&(atom, OutcomeSequence::new(clicks)?)];
        for (v, cv) in values.iter_mut().zip(&c.values) {
            *v += cv;
        }
        Ok(())
    };
    if distinguishable {
        // all grounded atoms ...
        for outcome in OutcomeSequence::all_of_len(3) {
            add(AtomLevel::Ground, outcome.clicks().to_vec())?;
        }
    } else {
        // ... or only three-in-one-detector-or-one-plus-two patterns
        add(AtomLevel::Ground, vec![Sign::Plus; 3])?;
        add(AtomLevel::Ground, vec![Sign::Plus, Sign::Minus, Sign::Minus])?;
        add(AtomLevel::Ground, vec![Sign::Minus, Sign::Plus, Sign::Minus])?;
        add(AtomLevel::Ground, vec![Sign::Minus, Sign::Minus, Sign::Plus])?;
    }
    add(AtomLevel::Excited, vec![Sign::Plus; 2])?;
    add(AtomLevel::Excited, vec![Sign::Minus; 2])?;

    let composed = ProbabilityCurve::from_raw(grid.xs.clone(), values);
    let n2 = state.normalization;
    let peak = direct.max_value() / n2;
    let max_rel_discrepancy = composed
        .values
        .iter()
        .zip(&direct.values)
        .map(|(c, d)| (c - d / n2).abs() / peak)
        .fold(0.0, f64::max);
    let cn = composed.normalized_values();
    let dn = direct.normalized_values();
    let peak_n = dn.iter().cloned().fold(0.0, f64::max);
    let max_rel_discrepancy_normalized = cn
        .iter()
        .zip(&dn)
        .map(|(c, d)| (c - d).abs() / peak_n)
        .fold(0.0, f64::max);
    Ok(CompositionReport {
        curve: composed,
        max_rel_discrepancy,
        max_rel_discrepancy_normalized,
    })
}

/// The five which-way curves with their raw normalization constants.
#[derive(Debug, Clone)]
pub struct QuachInputs {
    pub p_ab: ProbabilityCurve,
    pub p_da: ProbabilityCurve,
    pub p_db: ProbabilityCurve,
    pub p_dab: ProbabilityCurve,
    pub p_dadb: ProbabilityCurve,
}

impl QuachInputs {
    pub fn from_amplitudes(amps: &AmplitudeSet) -> Self {
        Self {
            p_ab: p_no_detectors(amps),
            p_da: p_single_detector(amps, Slit::A),
            p_db: p_single_detector(amps, Slit::B),
            p_dab: p_both_detectors(amps, false),
            p_dadb: p_both_detectors(amps, true),
        }
    }

    /// Injects a synthetic Born violation `P -> P^(1+delta)` on every raw
    /// probability before the combination.
    pub fn perturbed(&self, delta: f64) -> Self {
        let bend = |c: &ProbabilityCurve| {
            ProbabilityCurve::from_raw(
                c.xs.clone(),
                c.values.iter().map(|v| v.powf(1.0 + delta)).collect(),
            )
        };
        Self {
            p_ab: bend(&self.p_ab),
            p_da: bend(&self.p_da),
            p_db: bend(&self.p_db),
            p_dab: bend(&self.p_dab),
            p_dadb: bend(&self.p_dadb),
        }
    }
}

/// `I_AB(x) = P_AB - P_D_A - P_D_B - P_D_AB + 2 P_D_A_D_B` on the raw
/// curves (each normalized curve multiplied back by its recorded constant).
/// Identically zero under the Born rule.
pub fn quach_parameter(inputs: &QuachInputs) -> Result<Vec<f64>> {
    ProbabilityCurve::check_shared_grid([
        &inputs.p_ab,
        &inputs.p_da,
        &inputs.p_db,
        &inputs.p_dab,
        &inputs.p_dadb,
    ])?;
    Ok((0..inputs.p_ab.xs.len())
        .map(|i| {
            inputs.p_ab.values[i] - inputs.p_da.values[i] - inputs.p_db.values[i]
                - inputs.p_dab.values[i]
                + 2.0 * inputs.p_dadb.values[i]
        })
        .collect())
}

/// The triple-slit alternating sum
/// `I_ABC = P_ABC - P_AB - P_AC - P_BC + P_A + P_B + P_C`
/// on raw, externally supplied curves sharing one grid.
pub fn sorkin_parameter(
    p_abc: &ProbabilityCurve,
    p_ab: &ProbabilityCurve,
    p_ac: &ProbabilityCurve,
    p_bc: &ProbabilityCurve,
    p_a: &ProbabilityCurve,
    p_b: &ProbabilityCurve,
    p_c: &ProbabilityCurve,
) -> Result<Vec<f64>> {
    ProbabilityCurve::check_shared_grid([p_abc, p_ab, p_ac, p_bc, p_a, p_b, p_c])?;
    Ok((0..p_abc.xs.len())
        .map(|i| {
            p_abc.values[i] - p_ab.values[i] - p_ac.values[i] - p_bc.values[i]
                + p_a.values[i]
                + p_b.values[i]
                + p_c.values[i]
        })
        .collect())
}
