//! Run configuration: a single JSON document with embedded defaults.
//!
//! Every field has a default, so a config file only needs the keys it
//! overrides. Unknown keys are rejected to catch typos.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::domains::DEFAULT_MAX_NODES;
use crate::error::{LabError, Result};
use crate::norms::NormOptions;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct LabConfig {
    /// Seed for the randomized checks (random polynomials, sample points).
    pub seed: u64,
    /// Criteria to run; `None` runs all of them, an empty list runs none.
    pub criteria: Option<Vec<u32>>,
    pub quadrature: QuadratureConfig,
    pub sup_grid: SupGridConfig,
    pub fits: FitWindows,
    pub tolerances: Tolerances,
    pub samples: SampleCounts,
    pub delta_l: DeltaLConfig,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct QuadratureConfig {
    /// Extra polynomial exactness added on top of what each integrand needs.
    pub exactness_margin: usize,
    pub max_nodes: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SupGridConfig {
    /// Grid side is `max(8 * density, density * degree)`.
    pub density: usize,
}

/// Index range and slope window of one exponent fit.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FitWindow {
    pub from: usize,
    pub to: usize,
    pub slope_min: Option<f64>,
    pub slope_max: Option<f64>,
}

impl FitWindow {
    pub fn contains(&self, slope: f64) -> bool {
        self.slope_min.is_none_or(|lo| slope >= lo) && self.slope_max.is_none_or(|hi| slope <= hi)
    }

    pub fn indices(&self) -> Vec<usize> {
        (self.from..=self.to).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FitWindows {
    /// `P_k` sup-norm lower-bound ratios, abscissa `5k - 4`.
    pub sharpness: FitWindow,
    pub koornwinder: FitWindow,
    pub simplex: FitWindow,
    pub schur: FitWindow,
    /// `W_n` ratios on `Delta_l`, abscissa `n + 1`.
    pub delta_l: FitWindow,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Tolerances {
    pub area_rel: f64,
    pub pullback_rel: f64,
    pub identity_coeff: f64,
    pub cusp_rel: f64,
    /// Allowed excess of the grid sup norm over the bound `k`.
    pub sup_slack: f64,
    /// Max slope change when the sup-grid density doubles.
    pub grid_slope_delta: f64,
    /// Max relative change of any sup-norm ratio when the density doubles.
    pub grid_point_rel: f64,
    /// Max slope change when the smallest abscissa is dropped from a fit.
    pub fit_drop_delta: f64,
    pub schur_zero_abs: f64,
    pub oracle_rel: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SampleCounts {
    pub pullback_polys: usize,
    pub pullback_max_degree: usize,
    pub identity_polys: usize,
    pub identity_max_degree: usize,
    pub bernoulli_points: usize,
    pub sharpness_max_index: usize,
    pub oracle_max_degree: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DeltaLConfig {
    pub l: u32,
    pub alpha: f64,
    pub p: f64,
}

impl Default for LabConfig {
    fn default() -> Self {
        Self {
            seed: 0x5eed_2024,
            criteria: None,
            quadrature: QuadratureConfig::default(),
            sup_grid: SupGridConfig::default(),
            fits: FitWindows::default(),
            tolerances: Tolerances::default(),
            samples: SampleCounts::default(),
            delta_l: DeltaLConfig::default(),
        }
    }
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        Self { exactness_margin: 0, max_nodes: DEFAULT_MAX_NODES }
    }
}

impl Default for SupGridConfig {
    fn default() -> Self {
        Self { density: 8 }
    }
}

impl Default for FitWindows {
    fn default() -> Self {
        let w = |from, to, lo, hi| FitWindow { from, to, slope_min: lo, slope_max: hi };
        Self {
            sharpness: w(4, 20, Some(3.7), Some(4.3)),
            koornwinder: w(4, 14, Some(3.2), Some(4.3)),
            simplex: w(4, 16, Some(1.6), Some(2.3)),
            schur: w(4, 16, None, Some(2.3)),
            delta_l: w(8, 40, Some(5.5), Some(6.5)),
        }
    }
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            area_rel: 1e-12,
            pullback_rel: 1e-10,
            identity_coeff: 1e-12,
            cusp_rel: 1e-12,
            sup_slack: 1e-9,
            grid_slope_delta: 0.05,
            grid_point_rel: 1e-2,
            fit_drop_delta: 0.15,
            schur_zero_abs: 1e-10,
            oracle_rel: 1e-8,
        }
    }
}

impl Default for SampleCounts {
    fn default() -> Self {
        Self {
            pullback_polys: 100,
            pullback_max_degree: 10,
            identity_polys: 200,
            identity_max_degree: 8,
            bernoulli_points: 1000,
            sharpness_max_index: 20,
            oracle_max_degree: 3,
        }
    }
}

impl Default for DeltaLConfig {
    fn default() -> Self {
        Self { l: 3, alpha: 14.0, p: 2.0 }
    }
}

impl LabConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: Self = serde_json::from_str(text).map_err(|e| LabError::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    /// Reads and validates a config file. Any failure is a [`LabError::Config`].
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| LabError::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn to_json_pretty(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }

    pub fn norm_options(&self) -> NormOptions {
        NormOptions {
            grid_density: self.sup_grid.density,
            exactness_margin: self.quadrature.exactness_margin,
            max_nodes: self.quadrature.max_nodes,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(LabError::Config(m));
        if self.sup_grid.density == 0 {
            return bad("sup_grid.density must be >= 1".into());
        }
        if self.quadrature.max_nodes == 0 {
            return bad("quadrature.max_nodes must be >= 1".into());
        }
        let windows = [
            ("sharpness", &self.fits.sharpness),
            ("koornwinder", &self.fits.koornwinder),
            ("simplex", &self.fits.simplex),
            ("schur", &self.fits.schur),
            ("delta_l", &self.fits.delta_l),
        ];
        for (name, w) in windows {
            // dropping the smallest point must still leave a fit
            if w.from == 0 || w.to < w.from + 3 {
                return bad(format!("fits.{name}: need from >= 1 and at least 4 indices"));
            }
            if let (Some(lo), Some(hi)) = (w.slope_min, w.slope_max) {
                if lo > hi {
                    return bad(format!("fits.{name}: slope_min > slope_max"));
                }
            }
        }
        if self.delta_l.l.is_multiple_of(2) {
            return bad("delta_l.l must be odd".into());
        }
        if !(self.delta_l.alpha > 0.0) || !(self.delta_l.p >= 1.0) {
            return bad("delta_l needs alpha > 0 and p >= 1".into());
        }
        if let Some(ids) = &self.criteria {
            if let Some(id) = ids.iter().find(|&&id| !(1..=11).contains(&id)) {
                return bad(format!("unknown criterion {id}"));
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_roundtrip() {
        let cfg = LabConfig::default();
        let back = LabConfig::from_json(&cfg.to_json_pretty()).unwrap();
        assert_eq!(cfg, back);
    }

    #[test]
    fn partial_documents_use_defaults() {
        let cfg = LabConfig::from_json(r#"{"sup_grid": {"density": 1}, "criteria": [4]}"#).unwrap();
        assert_eq!(cfg.sup_grid.density, 1);
        assert_eq!(cfg.criteria, Some(vec![4]));
        assert_eq!(cfg.fits, FitWindows::default());
    }

    #[test]
    fn rejects_bad_documents() {
        for text in [
            "not json",
            r#"{"sup_grid": {"densty": 2}}"#,
            r#"{"sup_grid": {"density": 0}}"#,
            r#"{"criteria": [12]}"#,
            r#"{"delta_l": {"l": 2}}"#,
        ] {
            assert!(matches!(LabConfig::from_json(text), Err(LabError::Config(_))), "{text}");
        }
    }
}
