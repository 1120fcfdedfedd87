//! Flat `key = value` run configuration.
//!
//! Unknown keys, bad numbers, and out-of-range physics all fail with the
//! offending line number so a typo in a batch run is caught immediately.

use std::path::Path;

use crate::paths::PhysicalParams;
use crate::{Error, Result};

#[derive(Debug, Clone)]
pub struct RunConfig {
    pub params: PhysicalParams,
    /// dimensionless cavity decay, gamma * detection time
    pub gamma_t: f64,
    pub grid_points: usize,
    /// screen half-width in micrometers; None picks one from the envelope
    pub grid_halfwidth: Option<f64>,
    pub oracle_tol: f64,
    /// destination for CSV output; None falls back to `<command>.csv`
    pub output_path: Option<String>,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            params: PhysicalParams::default(),
            gamma_t: 20.0,
            grid_points: 2001,
            grid_halfwidth: None,
            oracle_tol: 1e-6,
            output_path: None,
        }
    }
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut cfg = Self::default();
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let stripped = match raw.find('#') {
                Some(pos) => &raw[..pos],
                None => raw,
            }
            .trim();
            if stripped.is_empty() {
                continue;
            }
            let (key, value) = stripped.split_once('=').ok_or_else(|| Error::ConfigInvalid {
                line,
                field: stripped.to_string(),
                msg: "expected key = value".to_string(),
            })?;
            let key = key.trim();
            let value = value.trim();
            let bad = |msg: String| Error::ConfigInvalid {
                line,
                field: key.to_string(),
                msg,
            };
            let num = || -> Result<f64> {
                value
                    .parse::<f64>()
                    .map_err(|_| bad(format!("not a number: {value:?}")))
            };
            match key {
                "mass_over_hbar" => cfg.params.mass_over_hbar = num()?,
                "slit_separation" => cfg.params.d = num()?,
                "source_width" => cfg.params.sigma0 = num()?,
                "slit_width" => cfg.params.beta = num()?,
                "time_to_slits" => cfg.params.t = num()?,
                "time_to_screen" => cfg.params.tau = num()?,
                "loop_time" => cfg.params.epsilon = num()?,
                "gamma_t" => cfg.gamma_t = num()?,
                "grid_points" => {
                    cfg.grid_points = value
                        .parse::<usize>()
                        .map_err(|_| bad(format!("not a point count: {value:?}")))?
                }
                "grid_halfwidth" => cfg.grid_halfwidth = Some(num()?),
                "oracle_tol" => cfg.oracle_tol = num()?,
                "output_path" => cfg.output_path = Some(value.to_string()),
                _ => return Err(bad("unknown key".to_string())),
            }
        }
        cfg.validate()?;
        Ok(cfg)
    }

    // `!(x > 0)` style rejects NaN along with out-of-range values
    #[allow(clippy::neg_cmp_op_on_partial_ord)]
    pub fn validate(&self) -> Result<Self> {
        let named = |field: &str, msg: &str| Error::ConfigInvalid {
            line: 0,
            field: field.to_string(),
            msg: msg.to_string(),
        };
        if !(self.params.sigma0 > 0.0) {
            return Err(named("source_width", "must be positive"));
        }
        if !(self.params.beta > 0.0) {
            return Err(named("slit_width", "must be positive"));
        }
        self.params.validate().map_err(|e| match e {
            Error::ParamsInvalid(msg) => named("params", &msg),
            other => other,
        })?;
        if !(self.gamma_t >= 0.0) {
            return Err(named("gamma_t", "must be nonnegative"));
        }
        if self.grid_points < 3 {
            return Err(named("grid_points", "need at least 3 points"));
        }
        if let Some(hw) = self.grid_halfwidth {
            if !(hw > 0.0) {
                return Err(named("grid_halfwidth", "must be positive"));
            }
        }
        if !(self.oracle_tol > 0.0) {
            return Err(named("oracle_tol", "must be positive"));
        }
        Ok(self.clone())
    }
}
