//! TOML run configuration.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::layerstack::LayerStack;
use crate::materials::{preset, MaterialModel, Polarization, PRESET_NAMES};
use crate::simplified::{PumpDrive, PumpProfile};
use crate::spectra::{Axis, DetectionScheme, EnvelopeModel, Model, SweepConfig};
use crate::Scheme;

/// A built-in material name or an inline model table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum MaterialSpec {
    Preset(String),
    Inline(MaterialModel),
}

impl MaterialSpec {
    fn resolve(&self, path: &str) -> Result<MaterialModel> {
        match self {
            MaterialSpec::Preset(name) => preset(name).ok_or_else(|| {
                Error::config(
                    path,
                    format!(
                        "unknown material `{name}` (built-in: {})",
                        PRESET_NAMES.join(", ")
                    ),
                )
            }),
            MaterialSpec::Inline(m) => {
                m.validate()
                    .map_err(|e| Error::config(path, e.to_string()))?;
                Ok(m.clone())
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StackConfig {
    pub superstrate: MaterialSpec,
    pub film: MaterialSpec,
    pub substrate: MaterialSpec,
    pub thickness_um: f64,
}

/// Pump parameters. Exactly one of `beta_plus` or the pair
/// `chi2_pm_per_v` + `field_v_per_m` sets the pump strength.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PumpConfig {
    pub wavelength_nm: f64,
    pub waist_um: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub beta_plus: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub chi2_pm_per_v: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub field_v_per_m: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridConfig {
    pub lambda_min_nm: f64,
    pub lambda_max_nm: f64,
    pub lambda_count: usize,
    pub theta_min_rad: f64,
    pub theta_max_rad: f64,
    pub theta_count: usize,
}

impl Default for GridConfig {
    fn default() -> Self {
        GridConfig {
            lambda_min_nm: 1100.0,
            lambda_max_nm: 2400.0,
            lambda_count: 512,
            theta_min_rad: -0.5,
            theta_max_rad: 0.5,
            theta_count: 256,
        }
    }
}

impl GridConfig {
    pub fn wavelengths(&self) -> Axis {
        Axis::new(self.lambda_min_nm, self.lambda_max_nm, self.lambda_count)
    }

    pub fn angles(&self) -> Axis {
        Axis::new(self.theta_min_rad, self.theta_max_rad, self.theta_count)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GainCurveConfig {
    /// In-film `β⁺` values.
    pub beta_values: Vec<f64>,
}

impl Default for GainCurveConfig {
    fn default() -> Self {
        // Two decades, 0.02 to 2, logarithmic.
        GainCurveConfig {
            beta_values: (0..=20)
                .map(|k| 0.02 * 10f64.powf(k as f64 / 10.0))
                .collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default)]
    pub polarization: Polarization,
    #[serde(default = "default_model")]
    pub model: Model,
    #[serde(default = "default_schemes")]
    pub schemes: Vec<Scheme>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub efficiency_ratio: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub detection_schemes: Option<Vec<DetectionScheme>>,
    pub stack: StackConfig,
    pub pump: PumpConfig,
    #[serde(default)]
    pub grid: GridConfig,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub envelope: Option<EnvelopeModel>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gain_curve: Option<GainCurveConfig>,
}

fn default_model() -> Model {
    Model::Simplified
}

fn default_schemes() -> Vec<Scheme> {
    Scheme::ALL.to_vec()
}

/// Default collection-efficiency ratio `η_f / η_b`.
pub const DEFAULT_EFFICIENCY_RATIO: f64 = 0.4;

/// Parses and validates a TOML configuration.
pub fn parse_config(text: &str) -> Result<RunConfig> {
    let de = toml::Deserializer::new(text);
    let cfg: RunConfig = serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        let inner = e.into_inner();
        let message = inner.message().to_string();
        Error::config(
            if path == "." {
                "<root>".to_string()
            } else {
                path
            },
            message,
        )
    })?;
    cfg.validate()?;
    Ok(cfg)
}

impl RunConfig {
    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("configuration serialises to TOML")
    }

    pub fn validate(&self) -> Result<()> {
        self.stack()?;
        self.pump_profile()?;
        self.grid.wavelengths().validate("grid.lambda")?;
        self.grid.angles().validate("grid.theta")?;
        if self.schemes.is_empty() {
            return Err(Error::config("schemes", "at least one scheme is required"));
        }
        if let Some(r) = self.efficiency_ratio {
            if !(r.is_finite() && r > 0.0) {
                return Err(Error::config("efficiency_ratio", "must be positive"));
            }
        }
        if let Some(d) = &self.detection_schemes {
            if d.is_empty() {
                return Err(Error::config(
                    "detection_schemes",
                    "at least one scheme is required",
                ));
            }
        }
        if let Some(e) = &self.envelope {
            e.validate()?;
        }
        if let Some(g) = &self.gain_curve {
            if g.beta_values.is_empty() {
                return Err(Error::config(
                    "gain_curve.beta_values",
                    "at least one value is required",
                ));
            }
            if g.beta_values.iter().any(|b| !(b.is_finite() && *b > 0.0)) {
                return Err(Error::config(
                    "gain_curve.beta_values",
                    "values must be positive",
                ));
            }
        }
        Ok(())
    }

    pub fn stack(&self) -> Result<LayerStack> {
        let s = &self.stack;
        if !(s.thickness_um.is_finite() && s.thickness_um > 0.0) {
            return Err(Error::config(
                "stack.thickness_um",
                "thickness must be positive",
            ));
        }
        let mut stack = LayerStack::new(
            s.superstrate.resolve("stack.superstrate")?,
            s.film.resolve("stack.film")?,
            s.substrate.resolve("stack.substrate")?,
            s.thickness_um * 1e3,
        )?;
        if let Some(chi2) = self.pump.chi2_pm_per_v {
            stack.chi2_pm_per_v = chi2;
        }
        Ok(stack)
    }

    pub fn pump_profile(&self) -> Result<PumpProfile> {
        let p = &self.pump;
        let drive = match (p.beta_plus, p.chi2_pm_per_v, p.field_v_per_m) {
            (Some(b), None, None) => PumpDrive::BetaScale(b),
            (None, Some(chi2), Some(e)) => {
                if !chi2.is_finite() {
                    return Err(Error::config("pump.chi2_pm_per_v", "must be finite"));
                }
                PumpDrive::Field(e)
            }
            (Some(_), _, _) => {
                return Err(Error::config(
                    "pump.beta_plus",
                    "give either beta_plus or chi2_pm_per_v with field_v_per_m, not both",
                ))
            }
            (None, None, None) => {
                return Err(Error::config(
                    "pump",
                    "missing pump strength: set beta_plus or chi2_pm_per_v with field_v_per_m",
                ))
            }
            (None, None, Some(_)) => {
                return Err(Error::config(
                    "pump.chi2_pm_per_v",
                    "required with field_v_per_m",
                ))
            }
            (None, Some(_), None) => {
                return Err(Error::config(
                    "pump.field_v_per_m",
                    "required with chi2_pm_per_v",
                ))
            }
        };
        PumpProfile::new(p.waist_um, p.wavelength_nm, drive)
    }

    pub fn sweep(&self) -> Result<SweepConfig> {
        Ok(SweepConfig {
            stack: self.stack()?,
            pump: self.pump_profile()?,
            polarization: self.polarization,
            wavelengths: self.grid.wavelengths(),
            angles: self.grid.angles(),
        })
    }

    pub fn efficiency_ratio(&self) -> f64 {
        self.efficiency_ratio.unwrap_or(DEFAULT_EFFICIENCY_RATIO)
    }

    pub fn envelope(&self) -> EnvelopeModel {
        self.envelope.unwrap_or_else(EnvelopeModel::flat)
    }

    pub fn gain_betas(&self) -> Vec<f64> {
        self.gain_curve.clone().unwrap_or_default().beta_values
    }

    pub fn detection_schemes(&self) -> Vec<DetectionScheme> {
        self.detection_schemes
            .clone()
            .unwrap_or_else(|| DetectionScheme::ALL.to_vec())
    }
}
