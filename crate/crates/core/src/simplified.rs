//! Multiplicative low-gain model: a non-resonant pair probability `P`
//! times an etalon filter function `S`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::four::FourMatrix;
use crate::layerstack::FieldEnhancements;
use crate::rigorous::InteractionParams;
use crate::Scheme;

/// How the pump strength is specified.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PumpDrive {
    /// Interaction term `β⁺` before etalon enhancement. The in-film value
    /// is `beta_scale · |E0⁺/E0|`, the same for every pixel.
    BetaScale(f64),
    /// Incident pump amplitude in V/m; `β` follows per pixel from the
    /// stack's χ⁽²⁾.
    Field(f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PumpProfile {
    /// 1/e² diameter, μm.
    pub waist_um: f64,
    pub wavelength_nm: f64,
    pub drive: PumpDrive,
}

impl PumpProfile {
    pub fn new(waist_um: f64, wavelength_nm: f64, drive: PumpDrive) -> Result<Self> {
        let p = PumpProfile {
            waist_um,
            wavelength_nm,
            drive,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.waist_um.is_finite() && self.waist_um > 0.0) {
            return Err(Error::config("pump.waist_um", "waist must be positive"));
        }
        if !(self.wavelength_nm.is_finite() && self.wavelength_nm > 0.0) {
            return Err(Error::config(
                "pump.wavelength_nm",
                "wavelength must be positive",
            ));
        }
        match self.drive {
            PumpDrive::BetaScale(b) if !(b.is_finite() && b >= 0.0) => Err(Error::config(
                "pump.beta_plus",
                "must be finite and non-negative",
            )),
            PumpDrive::Field(e) if !(e.is_finite() && e >= 0.0) => Err(Error::config(
                "pump.field_v_per_m",
                "must be finite and non-negative",
            )),
            _ => Ok(()),
        }
    }
}

/// `sin x / x`.
pub fn sinc(x: f64) -> f64 {
    if x.abs() < 1e-4 {
        let x2 = x * x;
        1.0 - x2 / 6.0 + x2 * x2 / 120.0
    } else {
        x.sin() / x
    }
}

/// Non-resonant pair probability `sinc²(Δk∥L/2) · exp(-(Δk⊥w)²/2)`.
pub fn nonresonant_probability(
    delta_k_par: f64,
    delta_k_perp: f64,
    thickness_nm: f64,
    waist_um: f64,
) -> f64 {
    let w_nm = waist_um * 1e3;
    let pm = sinc(0.5 * delta_k_par * thickness_nm);
    let x = delta_k_perp * w_nm;
    pm * pm * (-0.5 * x * x).exp()
}

/// First-order interaction matrix, diagonal one and off-diagonals
/// `∓β sinc(Δ/2)`.
pub fn low_gain_interaction_matrix(params: &InteractionParams) -> FourMatrix {
    let s = sinc(0.5 * params.delta);
    let mut w = FourMatrix::identity();
    w[(0, 1)] = -params.beta_plus * s;
    w[(1, 0)] = params.beta_plus * s;
    w[(2, 3)] = -params.beta_minus * s;
    w[(3, 2)] = params.beta_minus * s;
    w
}

/// Filter function `S` of one emission scheme.
pub fn filter_function(
    scheme: Scheme,
    beta_plus: Complex64,
    beta_minus: Complex64,
    signal: &FieldEnhancements,
    idler: &FieldEnhancements,
) -> f64 {
    let (s_plus, s_minus) = match scheme {
        Scheme::Ff | Scheme::Fb => (signal.forward_plus, signal.forward_minus),
        Scheme::Bb | Scheme::Bf => (signal.backward_plus, signal.backward_minus),
    };
    let (i_plus, i_minus) = match scheme {
        Scheme::Ff | Scheme::Bf => (idler.forward_plus, idler.forward_minus),
        Scheme::Bb | Scheme::Fb => (idler.backward_plus, idler.backward_minus),
    };
    (beta_plus * s_plus * i_plus + beta_minus * s_minus * i_minus).norm_sqr()
}

pub fn simplified_probability(p: f64, s: f64) -> f64 {
    p * s
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use std::f64::consts::PI;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn no_etalon() -> FieldEnhancements {
        FieldEnhancements {
            forward_plus: c(1.0, 0.0),
            forward_minus: c(0.0, 0.0),
            backward_plus: c(0.0, 0.0),
            backward_minus: c(1.0, 0.0),
        }
    }

    #[test]
    fn phase_matched_probability_is_one() {
        assert_eq!(nonresonant_probability(0.0, 0.0, 10_150.0, 5.0), 1.0);
    }

    #[test]
    fn first_sinc_zero() {
        let l = 10_150.0;
        let p = nonresonant_probability(2.0 * PI / l, 0.0, l, 5.0);
        assert!(p < 1e-30);
    }

    #[test]
    fn pump_factor_at_two_over_waist() {
        // w = 5 μm = 5000 nm, Δk⊥ = 2/w: (Δk⊥ w)²/2 = 2.
        let l = 10_150.0;
        let dk_par = 1e-4;
        let p = nonresonant_probability(dk_par, 2.0 / 5000.0, l, 5.0);
        let x = 0.5 * dk_par * l;
        let expect = (x.sin() / x).powi(2) * (-2.0f64).exp();
        assert_relative_eq!(p, expect, max_relative = 1e-14);
    }

    #[test]
    fn sinc_series_joins_closed_form() {
        for x in [1e-4 * (1.0 - 1e-12), 1e-4 * (1.0 + 1e-12)] {
            assert_relative_eq!(sinc(x), x.sin() / x, max_relative = 1e-15);
        }
        assert_eq!(sinc(0.0), 1.0);
    }

    #[test]
    fn low_gain_matrix_examples() {
        let p = InteractionParams::from_betas(c(0.0, 0.0), c(0.0, 0.0), 3.0);
        assert_eq!(low_gain_interaction_matrix(&p), FourMatrix::identity());

        let p = InteractionParams::from_betas(c(0.02, 0.0), c(0.0, 0.01), 0.0);
        let w = low_gain_interaction_matrix(&p);
        assert_eq!(w[(0, 1)], c(-0.02, 0.0));
        assert_eq!(w[(1, 0)], c(0.02, 0.0));
        assert_eq!(w[(2, 3)], c(0.0, -0.01));

        let p = InteractionParams::from_betas(c(0.01, 0.0), c(0.0, 0.0), 2.0);
        let w = low_gain_interaction_matrix(&p);
        assert_relative_eq!(w[(0, 1)].norm(), 0.008414709848078965, max_relative = 1e-15);
    }

    #[test]
    fn no_etalon_filter_is_beta_squared() {
        let e = no_etalon();
        let bp = c(0.003, 0.004);
        assert_relative_eq!(
            filter_function(Scheme::Ff, bp, c(0.0, 0.0), &e, &e),
            25e-6,
            max_relative = 1e-14
        );
        for scheme in [Scheme::Bb, Scheme::Fb, Scheme::Bf] {
            assert_eq!(filter_function(scheme, bp, c(0.0, 0.0), &e, &e), 0.0);
        }
    }

    #[test]
    fn zero_gain_filter_vanishes() {
        let e = FieldEnhancements {
            forward_plus: c(0.3, 1.0),
            forward_minus: c(-0.2, 0.5),
            backward_plus: c(0.7, 0.1),
            backward_minus: c(0.9, -0.4),
        };
        for scheme in Scheme::ALL {
            assert_eq!(
                filter_function(scheme, c(0.0, 0.0), c(0.0, 0.0), &e, &e),
                0.0
            );
        }
    }

    #[test]
    fn scheme_picks_enhancement_pairs() {
        let s = FieldEnhancements {
            forward_plus: c(2.0, 0.0),
            forward_minus: c(0.0, 0.0),
            backward_plus: c(3.0, 0.0),
            backward_minus: c(0.0, 0.0),
        };
        let i = FieldEnhancements {
            forward_plus: c(5.0, 0.0),
            forward_minus: c(0.0, 0.0),
            backward_plus: c(7.0, 0.0),
            backward_minus: c(0.0, 0.0),
        };
        let one = c(1.0, 0.0);
        let zero = c(0.0, 0.0);
        assert_eq!(filter_function(Scheme::Ff, one, zero, &s, &i), 100.0);
        assert_eq!(filter_function(Scheme::Bb, one, zero, &s, &i), 441.0);
        assert_eq!(filter_function(Scheme::Fb, one, zero, &s, &i), 196.0);
        assert_eq!(filter_function(Scheme::Bf, one, zero, &s, &i), 225.0);
    }

    #[test]
    fn product() {
        assert_eq!(simplified_probability(1.0, 0.0), 0.0);
        assert_eq!(simplified_probability(0.5, 2.0), 1.0);
    }

    #[test]
    fn profile_rejects_bad_waist() {
        assert!(PumpProfile::new(0.0, 788.0, PumpDrive::BetaScale(1e-3)).is_err());
        assert!(PumpProfile::new(5.0, 788.0, PumpDrive::BetaScale(1e-3)).is_ok());
    }
}
