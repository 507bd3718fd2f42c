//! Refractive-index models and per-wave wavevector components.
//!
//! Wavelengths are vacuum wavelengths in nm, angles are radians measured
//! from the z (pump) axis inside the film, wavevectors are rad/nm.
//!
//! The built-in presets are documented coefficient-for-coefficient in
//! `docs/materials.md`.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// One `B λ² / (λ² - C)` resonance term, with λ in μm and `C` in μm².
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SellmeierTerm {
    pub b: f64,
    pub c_um2: f64,
}

/// `n² = constant + Σ B λ² / (λ² - C)` over a declared validity range.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Sellmeier {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub constant: f64,
    #[serde(default)]
    pub terms: Vec<SellmeierTerm>,
    pub min_nm: f64,
    pub max_nm: f64,
}

/// Wavelength-sorted `(nm, n)` samples, linearly interpolated.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Tabulated {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub samples: Vec<[f64; 2]>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConstantIndex {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub n: f64,
}

/// Dispersion model of one non-absorbing region.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum MaterialModel {
    Constant(ConstantIndex),
    Sellmeier(Sellmeier),
    Tabulated(Tabulated),
}

impl MaterialModel {
    pub fn constant(n: f64) -> Self {
        MaterialModel::Constant(ConstantIndex { name: None, n })
    }

    /// Label used in error messages.
    pub fn label(&self) -> String {
        let (name, kind) = match self {
            MaterialModel::Constant(m) => (&m.name, "constant"),
            MaterialModel::Sellmeier(m) => (&m.name, "sellmeier"),
            MaterialModel::Tabulated(m) => (&m.name, "tabulated"),
        };
        name.clone().unwrap_or_else(|| kind.to_string())
    }

    /// Closed wavelength interval (nm) on which the model may be queried.
    pub fn validity_nm(&self) -> (f64, f64) {
        match self {
            MaterialModel::Constant(_) => (0.0, f64::INFINITY),
            MaterialModel::Sellmeier(m) => (m.min_nm, m.max_nm),
            MaterialModel::Tabulated(m) => {
                let first = m.samples.first().map_or(f64::NAN, |s| s[0]);
                let last = m.samples.last().map_or(f64::NAN, |s| s[0]);
                (first, last)
            }
        }
    }

    /// Checks the structural invariants of the model.
    pub fn validate(&self) -> Result<()> {
        let invalid = |reason: &str| Error::InvalidMaterial {
            model: self.label(),
            reason: reason.to_string(),
        };
        match self {
            MaterialModel::Constant(m) => {
                if !(m.n.is_finite() && m.n > 0.0) {
                    return Err(invalid("index must be finite and positive"));
                }
            }
            MaterialModel::Sellmeier(m) => {
                if !(m.min_nm.is_finite()
                    && m.max_nm.is_finite()
                    && 0.0 < m.min_nm
                    && m.min_nm < m.max_nm)
                {
                    return Err(invalid("validity range must satisfy 0 < min_nm < max_nm"));
                }
                let all_finite = m.constant.is_finite()
                    && m.terms
                        .iter()
                        .all(|t| t.b.is_finite() && t.c_um2.is_finite());
                if !all_finite {
                    return Err(invalid("coefficients must be finite"));
                }
                // No pole may fall inside the declared range.
                let (lo, hi) = ((m.min_nm / 1000.0).powi(2), (m.max_nm / 1000.0).powi(2));
                if m.terms
                    .iter()
                    .any(|t| t.b != 0.0 && lo <= t.c_um2 && t.c_um2 <= hi)
                {
                    return Err(invalid("a resonance pole lies inside the validity range"));
                }
            }
            MaterialModel::Tabulated(m) => {
                if m.samples.len() < 2 {
                    return Err(invalid("at least two samples are required"));
                }
                if m.samples
                    .iter()
                    .any(|s| !(s[0].is_finite() && s[1].is_finite() && s[1] > 0.0))
                {
                    return Err(invalid("samples must be finite with positive index"));
                }
                if m.samples.windows(2).any(|w| w[1][0] <= w[0][0]) {
                    return Err(invalid("sample wavelengths must be strictly increasing"));
                }
            }
        }
        Ok(())
    }
}

/// Real refractive index of `model` at a vacuum wavelength in nm.
pub fn refractive_index(model: &MaterialModel, wavelength_nm: f64) -> Result<f64> {
    let (min, max) = model.validity_nm();
    let out_of_range = || Error::OutOfRange {
        model: model.label(),
        wavelength: wavelength_nm,
        min,
        max,
    };
    if !(wavelength_nm > 0.0 && wavelength_nm >= min && wavelength_nm <= max) {
        return Err(out_of_range());
    }
    let n = match model {
        MaterialModel::Constant(m) => m.n,
        MaterialModel::Sellmeier(m) => {
            let l2 = (wavelength_nm / 1000.0).powi(2);
            let n2 = m
                .terms
                .iter()
                .fold(m.constant, |acc, t| acc + t.b * l2 / (l2 - t.c_um2));
            if !(n2 > 0.0) {
                return Err(Error::InvalidMaterial {
                    model: model.label(),
                    reason: format!("n^2 = {n2} at {wavelength_nm} nm"),
                });
            }
            n2.sqrt()
        }
        MaterialModel::Tabulated(m) => {
            let i = m.samples.partition_point(|s| s[0] <= wavelength_nm);
            if i == m.samples.len() {
                m.samples[i - 1][1]
            } else {
                let [x0, y0] = m.samples[i - 1];
                let [x1, y1] = m.samples[i];
                y0 + (y1 - y0) * (wavelength_nm - x0) / (x1 - x0)
            }
        }
    };
    Ok(n)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Polarization {
    #[default]
    S,
    P,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Role {
    Pump,
    Signal,
    Idler,
}

/// A single plane wave inside the film.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mode {
    vacuum_wavelength_nm: f64,
    internal_angle: f64,
    pub polarization: Polarization,
    pub role: Role,
}

impl Mode {
    pub fn new(
        vacuum_wavelength_nm: f64,
        internal_angle: f64,
        polarization: Polarization,
        role: Role,
    ) -> Result<Self> {
        if !(vacuum_wavelength_nm.is_finite() && vacuum_wavelength_nm > 0.0) {
            return Err(Error::InvalidMode(format!(
                "{role:?} wavelength must be positive, got {vacuum_wavelength_nm}"
            )));
        }
        if !(internal_angle.abs() < PI / 2.0) {
            return Err(Error::InvalidMode(format!(
                "{role:?} internal angle {internal_angle} rad is not inside (-pi/2, pi/2)"
            )));
        }
        Ok(Mode {
            vacuum_wavelength_nm,
            internal_angle,
            polarization,
            role,
        })
    }

    pub fn wavelength_nm(&self) -> f64 {
        self.vacuum_wavelength_nm
    }

    pub fn internal_angle(&self) -> f64 {
        self.internal_angle
    }
}

/// `(k_parallel, k_perpendicular)` of `mode` in a medium of index `n`:
/// projections of `2πn/λ` on the pump axis and on the film plane.
pub fn wavevector_components(mode: &Mode, n: f64) -> (f64, f64) {
    let k = 2.0 * PI * n / mode.vacuum_wavelength_nm;
    let (sin, cos) = mode.internal_angle.sin_cos();
    (k * cos, k * sin)
}

/// Names accepted by [`preset`].
pub const PRESET_NAMES: [&str; 4] = ["air", "linbo3_e", "linbo3_o", "silicon"];

/// Built-in material models.
pub fn preset(name: &str) -> Option<MaterialModel> {
    let model = match name {
        "air" => MaterialModel::Constant(ConstantIndex {
            name: Some("air".into()),
            n: 1.0,
        }),
        // Congruent LiNbO3, 21 °C, extraordinary ray.
        "linbo3_e" => lithium_niobate(
            "linbo3_e",
            [(2.9804, 0.02047), (0.5981, 0.0666), (8.9543, 416.08)],
        ),
        // Congruent LiNbO3, 21 °C, ordinary ray.
        "linbo3_o" => lithium_niobate(
            "linbo3_o",
            [(2.6734, 0.01764), (1.2290, 0.05914), (12.614, 474.6)],
        ),
        "silicon" => MaterialModel::Tabulated(Tabulated {
            name: Some("silicon".into()),
            samples: SILICON_SAMPLES.to_vec(),
        }),
        _ => return None,
    };
    Some(model)
}

fn lithium_niobate(name: &str, terms: [(f64, f64); 3]) -> MaterialModel {
    MaterialModel::Sellmeier(Sellmeier {
        name: Some(name.into()),
        constant: 1.0,
        terms: terms
            .iter()
            .map(|&(b, c_um2)| SellmeierTerm { b, c_um2 })
            .collect(),
        min_nm: 400.0,
        max_nm: 5000.0,
    })
}

/// Intrinsic silicon near room temperature: 300 K self-consistent data from
/// 700 to 1450 nm in 10 nm steps, continued with 293 K data to 3000 nm.
const SILICON_SAMPLES: [[f64; 2]; 88] = [
    [700.0, 3.772],
    [710.0, 3.759],
    [720.0, 3.748],
    [730.0, 3.737],
    [740.0, 3.727],
    [750.0, 3.717],
    [760.0, 3.708],
    [770.0, 3.699],
    [780.0, 3.691],
    [790.0, 3.683],
    [800.0, 3.675],
    [810.0, 3.668],
    [820.0, 3.661],
    [830.0, 3.654],
    [840.0, 3.647],
    [850.0, 3.641],
    [860.0, 3.635],
    [870.0, 3.630],
    [880.0, 3.624],
    [890.0, 3.619],
    [900.0, 3.614],
    [910.0, 3.609],
    [920.0, 3.604],
    [930.0, 3.600],
    [940.0, 3.595],
    [950.0, 3.591],
    [960.0, 3.587],
    [970.0, 3.583],
    [980.0, 3.579],
    [990.0, 3.575],
    [1000.0, 3.572],
    [1010.0, 3.568],
    [1020.0, 3.565],
    [1030.0, 3.562],
    [1040.0, 3.559],
    [1050.0, 3.556],
    [1060.0, 3.553],
    [1070.0, 3.550],
    [1080.0, 3.547],
    [1090.0, 3.545],
    [1100.0, 3.542],
    [1110.0, 3.540],
    [1120.0, 3.537],
    [1130.0, 3.535],
    [1140.0, 3.532],
    [1150.0, 3.530],
    [1160.0, 3.528],
    [1170.0, 3.526],
    [1180.0, 3.524],
    [1190.0, 3.522],
    [1200.0, 3.520],
    [1210.0, 3.518],
    [1220.0, 3.517],
    [1230.0, 3.515],
    [1240.0, 3.513],
    [1250.0, 3.511],
    [1260.0, 3.509],
    [1270.0, 3.508],
    [1280.0, 3.506],
    [1290.0, 3.505],
    [1300.0, 3.503],
    [1310.0, 3.502],
    [1320.0, 3.500],
    [1330.0, 3.499],
    [1340.0, 3.497],
    [1350.0, 3.496],
    [1360.0, 3.495],
    [1370.0, 3.494],
    [1380.0, 3.492],
    [1390.0, 3.491],
    [1400.0, 3.490],
    [1410.0, 3.489],
    [1420.0, 3.488],
    [1430.0, 3.487],
    [1440.0, 3.486],
    [1450.0, 3.485],
    [1500.0, 3.4799],
    [1550.0, 3.4757],
    [1600.0, 3.4719],
    [1650.0, 3.4684],
    [1700.0, 3.4653],
    [1800.0, 3.4597],
    [1900.0, 3.4550],
    [2000.0, 3.4510],
    [2250.0, 3.4431],
    [2500.0, 3.4375],
    [2750.0, 3.4334],
    [3000.0, 3.4302],
];

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn ln_e() -> MaterialModel {
        preset("linbo3_e").unwrap()
    }

    #[test]
    fn constant_model_is_flat() {
        let air = preset("air").unwrap();
        for l in [200.0, 788.0, 1576.0, 1e5] {
            assert_eq!(refractive_index(&air, l).unwrap(), 1.0);
        }
    }

    #[test]
    fn degenerate_sellmeier_is_sqrt_of_constant() {
        let m = MaterialModel::Sellmeier(Sellmeier {
            name: None,
            constant: 4.84,
            terms: vec![SellmeierTerm {
                b: 0.0,
                c_um2: 0.05,
            }],
            min_nm: 300.0,
            max_nm: 3000.0,
        });
        assert_relative_eq!(
            refractive_index(&m, 1234.5).unwrap(),
            4.84f64.sqrt(),
            max_relative = 1e-15
        );
    }

    #[test]
    fn linbo3_extraordinary_at_1576() {
        // Frozen from an independent mpmath evaluation of the three-term formula.
        assert_relative_eq!(
            refractive_index(&ln_e(), 1576.0).unwrap(),
            2.1368137431990974,
            max_relative = 1e-13
        );
        assert_relative_eq!(
            refractive_index(&ln_e(), 788.0).unwrap(),
            2.1768267981499453,
            max_relative = 1e-13
        );
    }

    #[test]
    fn tabulated_interpolates_linearly() {
        let si = preset("silicon").unwrap();
        assert_eq!(refractive_index(&si, 1550.0).unwrap(), 3.4757);
        assert_relative_eq!(
            refractive_index(&si, 1575.0).unwrap(),
            0.5 * (3.4757 + 3.4719),
            max_relative = 1e-15
        );
        assert_relative_eq!(
            refractive_index(&si, 785.0).unwrap(),
            0.5 * (3.691 + 3.683),
            max_relative = 1e-15
        );
    }

    #[test]
    fn out_of_range_queries_are_errors() {
        let si = preset("silicon").unwrap();
        let err = refractive_index(&si, 3000.5).unwrap_err();
        match err {
            Error::OutOfRange {
                model, min, max, ..
            } => {
                assert_eq!(model, "silicon");
                assert_eq!((min, max), (700.0, 3000.0));
            }
            other => panic!("unexpected {other:?}"),
        }
        assert!(refractive_index(&ln_e(), 399.0).is_err());
        assert!(refractive_index(&ln_e(), 5000.0).is_ok());
    }

    #[test]
    fn presets_validate() {
        for name in PRESET_NAMES {
            preset(name).unwrap().validate().unwrap();
        }
        assert!(preset("unobtainium").is_none());
    }

    #[test]
    fn tabulated_rejects_unsorted_samples() {
        let m = MaterialModel::Tabulated(Tabulated {
            name: None,
            samples: vec![[800.0, 3.6], [800.0, 3.5]],
        });
        assert!(m.validate().is_err());
    }

    #[test]
    fn sellmeier_rejects_pole_in_range() {
        let m = MaterialModel::Sellmeier(Sellmeier {
            name: None,
            constant: 1.0,
            terms: vec![SellmeierTerm { b: 1.0, c_um2: 1.0 }],
            min_nm: 500.0,
            max_nm: 2000.0,
        });
        assert!(m.validate().is_err());
    }

    #[test]
    fn linbo3_smooth_on_1nm_grid() {
        let m = ln_e();
        let mut prev = refractive_index(&m, 900.0).unwrap();
        for l in 901..=2400 {
            let n = refractive_index(&m, l as f64).unwrap();
            assert!((n - prev).abs() < 1e-2);
            assert!(n < prev, "normal dispersion expected at {l} nm");
            prev = n;
        }
    }

    #[test]
    fn normal_incidence_components() {
        let mode = Mode::new(1576.0, 0.0, Polarization::S, Role::Signal).unwrap();
        let (kpar, kperp) = wavevector_components(&mode, 2.0);
        assert_relative_eq!(kpar, 4.0 * PI / 1576.0, max_relative = 1e-15);
        assert_eq!(kperp, 0.0);
    }

    #[test]
    fn oblique_components_match_hand_values() {
        let mode = Mode::new(788.0, 0.3, Polarization::S, Role::Pump).unwrap();
        let (kpar, kperp) = wavevector_components(&mode, 2.25);
        // 2π·2.25/788 · (cos 0.3, sin 0.3)
        assert_relative_eq!(kpar, 0.017139278466681106, max_relative = 1e-13);
        assert_relative_eq!(kperp, 0.005301800121898107, max_relative = 1e-13);
        let mirrored = Mode::new(788.0, -0.3, Polarization::S, Role::Pump).unwrap();
        let (kpar_m, kperp_m) = wavevector_components(&mirrored, 2.25);
        assert_eq!(kpar_m, kpar);
        assert_eq!(kperp_m, -kperp);
    }

    #[test]
    fn mode_invariants() {
        assert!(Mode::new(0.0, 0.0, Polarization::S, Role::Pump).is_err());
        assert!(Mode::new(800.0, PI / 2.0, Polarization::S, Role::Pump).is_err());
        assert!(Mode::new(800.0, -1.5, Polarization::P, Role::Idler).is_ok());
    }
}
