//! Three-region stack optics: interface Fresnel coefficients, slab
//! propagation phases, pump enhancement and down-converted field
//! enhancement factors.
//!
//! Reflection coefficients in [`InterfaceCoeffs`] are the ones seen from
//! inside the film, so a symmetric slab has `r1 == r2` and resonances sit
//! at `exp(2iφ) = 1`. Transmission coefficients are flux-normalised,
//! `t = t_amp · sqrt(n_out cosθ_out / n_in cosθ_in)`, which makes them the
//! same for both crossing directions. A channel that is evanescent on the
//! far side carries no flux and gets `t = 0`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::materials::{
    refractive_index, wavevector_components, MaterialModel, Mode, Polarization,
};

/// Smallest admissible `|1 - r1 r2 exp(2iφ)|`.
pub const POLE_TOLERANCE: f64 = 1e-9;

/// Superstrate / nonlinear film / substrate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LayerStack {
    pub superstrate: MaterialModel,
    pub film: MaterialModel,
    pub substrate: MaterialModel,
    pub thickness_nm: f64,
    /// Effective second-order susceptibility in pm/V.
    pub chi2_pm_per_v: f64,
}

impl LayerStack {
    pub fn new(
        superstrate: MaterialModel,
        film: MaterialModel,
        substrate: MaterialModel,
        thickness_nm: f64,
    ) -> Result<Self> {
        let stack = LayerStack {
            superstrate,
            film,
            substrate,
            thickness_nm,
            chi2_pm_per_v: 1.0,
        };
        stack.validate()?;
        Ok(stack)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.thickness_nm.is_finite() && self.thickness_nm > 0.0) {
            return Err(Error::config(
                "stack.thickness_um",
                "thickness must be positive",
            ));
        }
        if !self.chi2_pm_per_v.is_finite() {
            return Err(Error::config("stack.chi2_pm_per_v", "must be finite"));
        }
        self.superstrate.validate()?;
        self.film.validate()?;
        self.substrate.validate()
    }

    /// `(n_superstrate, n_film, n_substrate)` at a vacuum wavelength.
    pub fn indices(&self, wavelength_nm: f64) -> Result<(f64, f64, f64)> {
        Ok((
            refractive_index(&self.superstrate, wavelength_nm)?,
            refractive_index(&self.film, wavelength_nm)?,
            refractive_index(&self.substrate, wavelength_nm)?,
        ))
    }
}

/// Standard single-interface amplitude coefficients.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Fresnel {
    pub r: Complex64,
    pub t: Complex64,
    /// Cosine of the transmitted angle; purely imaginary (positive decay
    /// branch) beyond total internal reflection.
    pub cos_out: Complex64,
}

impl Fresnel {
    pub fn is_evanescent(&self) -> bool {
        self.cos_out.im != 0.0
    }
}

/// Amplitude reflection and transmission for a plane wave going from index
/// `n_in` into `n_out`. The p-polarisation sign is chosen so that `r_p = r_s`
/// at normal incidence.
pub fn fresnel(n_in: f64, n_out: f64, incidence_angle: f64, polarization: Polarization) -> Fresnel {
    let (sin_in, cos_in) = incidence_angle.sin_cos();
    let cos_in = Complex64::new(cos_in, 0.0);
    let s2 = (n_in * sin_in / n_out).powi(2);
    let cos_out = if s2 <= 1.0 {
        Complex64::new((1.0 - s2).sqrt(), 0.0)
    } else {
        Complex64::new(0.0, (s2 - 1.0).sqrt())
    };
    let (a, b) = match polarization {
        Polarization::S => (n_in * cos_in, n_out * cos_out),
        Polarization::P => (n_in * cos_out, n_out * cos_in),
    };
    let r = (a - b) / (a + b);
    let t = 2.0 * n_in * cos_in / (a + b);
    Fresnel { r, t, cos_out }
}

/// Flux-normalised, direction-symmetric transmission; zero when the far
/// side is evanescent.
fn flux_transmission(
    n_in: f64,
    n_out: f64,
    incidence_angle: f64,
    polarization: Polarization,
) -> (Complex64, Complex64) {
    let f = fresnel(n_in, n_out, incidence_angle, polarization);
    if f.is_evanescent() {
        return (f.r, Complex64::new(0.0, 0.0));
    }
    let cos_in = incidence_angle.cos();
    let scale = (n_out * f.cos_out.re / (n_in * cos_in)).sqrt();
    (f.r, f.t * scale)
}

/// Angle of a film mode after refraction into a medium of index `n_out`,
/// or `None` when it is totally internally reflected.
pub fn external_angle(n_film: f64, n_out: f64, internal_angle: f64) -> Option<f64> {
    let s = n_film * internal_angle.sin() / n_out;
    (s.abs() <= 1.0).then(|| s.asin())
}

/// Coefficients of both interfaces for one mode.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InterfaceCoeffs {
    pub t1: Complex64,
    pub r1: Complex64,
    pub t2: Complex64,
    pub r2: Complex64,
}

impl InterfaceCoeffs {
    /// Transparent interfaces.
    pub fn matched() -> Self {
        InterfaceCoeffs {
            t1: Complex64::new(1.0, 0.0),
            r1: Complex64::new(0.0, 0.0),
            t2: Complex64::new(1.0, 0.0),
            r2: Complex64::new(0.0, 0.0),
        }
    }

    /// `1 - r1 r2 exp(2iφ)`, rejected when it approaches zero.
    pub fn round_trip_denominator(&self, phase: f64) -> Result<Complex64> {
        let d = 1.0 - self.r1 * self.r2 * Complex64::from_polar(1.0, 2.0 * phase);
        if d.norm() < POLE_TOLERANCE {
            return Err(Error::ResonancePole {
                denominator: d.norm(),
            });
        }
        Ok(d)
    }
}

pub fn interface_coeffs(stack: &LayerStack, mode: &Mode) -> Result<InterfaceCoeffs> {
    let (n1, n2, n3) = stack.indices(mode.wavelength_nm())?;
    let theta = mode.internal_angle();
    let (r1, t1) = flux_transmission(n2, n1, theta, mode.polarization);
    let (r2, t2) = flux_transmission(n2, n3, theta, mode.polarization);
    Ok(InterfaceCoeffs { t1, r1, t2, r2 })
}

/// Single-pass phase `L k_parallel` of a mode crossing the film.
pub fn propagation_phase(stack: &LayerStack, mode: &Mode) -> Result<f64> {
    let n = refractive_index(&stack.film, mode.wavelength_nm())?;
    Ok(stack.thickness_nm * wavevector_components(mode, n).0)
}

/// Forward and backward pump amplitudes inside the film relative to the
/// incident amplitude.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PumpEnhancement {
    pub forward: Complex64,
    pub backward: Complex64,
}

pub fn pump_enhancement(coeffs: &InterfaceCoeffs, phase_p: f64) -> Result<PumpEnhancement> {
    let d = coeffs.round_trip_denominator(phase_p)?;
    let forward = coeffs.t1 / d;
    let backward = coeffs.r2 * Complex64::from_polar(1.0, phase_p) * forward;
    Ok(PumpEnhancement { forward, backward })
}

/// Etalon enhancement of one down-converted wave.
///
/// For the signal these are `a1⁺, a1⁻, a3⁺, a3⁻`, for the idler
/// `a2⁺, a2⁻, a4⁺, a4⁻`: `forward_*` leaves through the substrate,
/// `backward_*` through the superstrate, and `*_plus`/`*_minus` refer to
/// generation by the forward or the backward pump.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FieldEnhancements {
    pub forward_plus: Complex64,
    pub forward_minus: Complex64,
    pub backward_plus: Complex64,
    pub backward_minus: Complex64,
}

pub fn field_enhancements(coeffs: &InterfaceCoeffs, phase: f64) -> Result<FieldEnhancements> {
    let d = coeffs.round_trip_denominator(phase)?;
    let e = Complex64::from_polar(1.0, phase);
    Ok(FieldEnhancements {
        forward_plus: coeffs.t2 / d,
        forward_minus: coeffs.r1 * coeffs.t2 * e / d,
        backward_plus: coeffs.r2 * coeffs.t1 * e / d,
        backward_minus: coeffs.t1 / d,
    })
}

/// Airy power transmission of the slab for a mode incident from the
/// superstrate; zero when either outer medium only supports an evanescent
/// wave at this internal angle.
pub fn linear_transmission(stack: &LayerStack, mode: &Mode) -> Result<f64> {
    let (n1, n2, n3) = stack.indices(mode.wavelength_nm())?;
    let theta = mode.internal_angle();
    let pol = mode.polarization;
    let (Some(theta1), Some(theta3)) =
        (external_angle(n2, n1, theta), external_angle(n2, n3, theta))
    else {
        return Ok(0.0);
    };
    let entry = fresnel(n1, n2, theta1, pol);
    let exit = fresnel(n2, n3, theta, pol);
    let inner = InterfaceCoeffs {
        t1: entry.t,
        r1: fresnel(n2, n1, theta, pol).r,
        t2: exit.t,
        r2: exit.r,
    };
    let phase = propagation_phase(stack, mode)?;
    let d = inner.round_trip_denominator(phase)?;
    let amplitude = inner.t1 * inner.t2 * Complex64::from_polar(1.0, phase) / d;
    Ok(amplitude.norm_sqr() * (n3 * theta3.cos()) / (n1 * theta1.cos()))
}
