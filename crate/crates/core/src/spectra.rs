//! Sweep engines: frequency-angular spectra, gain/agreement curves,
//! detection spectra and linear transmission.
//!
//! Every sweep evaluates pixels independently from an immutable
//! [`SweepContext`]; normalisation and R² are computed afterwards, so the
//! results do not depend on the number of worker threads.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::layerstack::{
    field_enhancements, interface_coeffs, linear_transmission, propagation_phase, pump_enhancement,
    InterfaceCoeffs, LayerStack,
};
use crate::materials::{refractive_index, Mode, Polarization, Role};
use crate::rigorous::{
    boundary_matrices, coupling_per_field, gain, interaction_matrix, pair_probabilities,
    phase_mismatch, scattering_matrix, InteractionParams, PumpFields,
};
use crate::simplified::{
    filter_function, nonresonant_probability, simplified_probability, PumpDrive, PumpProfile,
};
use crate::Scheme;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Model {
    Rigorous,
    Simplified,
    /// Bare phase-matching and pump factor; reported in the `ff` channel.
    Nonresonant,
}

impl Model {
    pub fn name(self) -> &'static str {
        match self {
            Model::Rigorous => "rigorous",
            Model::Simplified => "simplified",
            Model::Nonresonant => "nonresonant",
        }
    }
}

impl std::str::FromStr for Model {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "rigorous" => Ok(Model::Rigorous),
            "simplified" => Ok(Model::Simplified),
            "nonresonant" => Ok(Model::Nonresonant),
            _ => Err(Error::config(
                "model",
                format!("unknown model `{s}` (expected rigorous, simplified or nonresonant)"),
            )),
        }
    }
}

/// Evenly spaced samples from `min` to `max` inclusive.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Axis {
    pub min: f64,
    pub max: f64,
    pub count: usize,
}

impl Axis {
    pub fn new(min: f64, max: f64, count: usize) -> Self {
        Axis { min, max, count }
    }

    pub fn validate(&self, path: &str) -> Result<()> {
        if self.count < 2 {
            return Err(Error::config(
                format!("{path}.count"),
                "need at least 2 samples",
            ));
        }
        if !(self.min.is_finite() && self.max.is_finite()) {
            return Err(Error::config(path, "bounds must be finite"));
        }
        if !(self.min < self.max) {
            return Err(Error::config(
                path,
                format!("min ({}) must be below max ({})", self.min, self.max),
            ));
        }
        Ok(())
    }

    pub fn values(&self) -> Vec<f64> {
        let last = self.count.saturating_sub(1).max(1) as f64;
        (0..self.count)
            .map(|k| {
                if k + 1 == self.count {
                    self.max
                } else {
                    self.min + (self.max - self.min) * (k as f64 / last)
                }
            })
            .collect()
    }
}

/// Everything a pixel sweep needs.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    pub stack: LayerStack,
    pub pump: PumpProfile,
    pub polarization: Polarization,
    /// Signal vacuum wavelengths, nm.
    pub wavelengths: Axis,
    /// Internal signal angles, rad.
    pub angles: Axis,
}

impl SweepConfig {
    /// The same sweep with the pump driven by a fixed in-film `β⁺`.
    pub fn with_in_film_beta(&self, beta_plus: f64) -> Result<SweepConfig> {
        let ctx = SweepContext::new(self)?;
        let mut cfg = self.clone();
        cfg.pump.drive = PumpDrive::BetaScale(beta_plus / ctx.pump_fields().forward.re);
        Ok(cfg)
    }
}

/// Idler fixed by energy conservation and transverse phase matching.
///
/// Fails when the transverse match would need an idler past grazing
/// incidence inside the film.
pub fn solve_idler(pump: &Mode, signal: &Mode, stack: &LayerStack) -> Result<Mode> {
    let lp = pump.wavelength_nm();
    let ls = signal.wavelength_nm();
    if !(ls > lp) {
        return Err(Error::EnergyConservation {
            pump: lp,
            signal: ls,
        });
    }
    let li = lp * ls / (ls - lp);
    let theta_s = signal.internal_angle();
    let theta_i = if theta_s == 0.0 {
        0.0
    } else {
        let ks = refractive_index(&stack.film, ls)? / ls;
        let ki = refractive_index(&stack.film, li)? / li;
        let sin_i = -ks * theta_s.sin() / ki;
        if sin_i.abs() >= 1.0 {
            return Err(Error::Geometry(format!(
                "idler at {li} nm cannot match signal angle {theta_s} rad (sin = {sin_i})"
            )));
        }
        sin_i.asin()
    };
    Mode::new(li, theta_i, signal.polarization, Role::Idler)
}

/// Modes, couplings and interface data of one `(λ_s, θ_s)` pixel.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Pixel {
    pub signal: Mode,
    pub idler: Mode,
    pub params: InteractionParams,
    pub signal_coeffs: InterfaceCoeffs,
    pub idler_coeffs: InterfaceCoeffs,
    pub phase_s: f64,
    pub phase_i: f64,
}

/// Per-sweep immutable state: the pump mode and its in-film amplitudes.
#[derive(Debug, Clone)]
pub struct SweepContext<'a> {
    cfg: &'a SweepConfig,
    pump: Mode,
    fields: PumpFields,
}

impl<'a> SweepContext<'a> {
    pub fn new(cfg: &'a SweepConfig) -> Result<Self> {
        cfg.stack.validate()?;
        cfg.pump.validate()?;
        let pump = Mode::new(cfg.pump.wavelength_nm, 0.0, cfg.polarization, Role::Pump)?;
        let coeffs = interface_coeffs(&cfg.stack, &pump)?;
        let enh = pump_enhancement(&coeffs, propagation_phase(&cfg.stack, &pump)?)?;
        // Gauge: forward pump amplitude real and positive.
        let a = enh.forward.norm();
        let fields = if a > 0.0 {
            let rot = enh.forward.conj() / a;
            PumpFields {
                forward: Complex64::new(a, 0.0),
                backward: enh.backward * rot,
            }
        } else {
            PumpFields {
                forward: Complex64::new(0.0, 0.0),
                backward: enh.backward,
            }
        };
        Ok(SweepContext { cfg, pump, fields })
    }

    pub fn config(&self) -> &SweepConfig {
        self.cfg
    }

    /// In-film pump amplitudes relative to the incident field.
    pub fn pump_fields(&self) -> PumpFields {
        self.fields
    }

    pub fn pixel(&self, lambda_s: f64, theta_s: f64) -> Result<Pixel> {
        let stack = &self.cfg.stack;
        let signal = Mode::new(lambda_s, theta_s, self.cfg.polarization, Role::Signal)?;
        let idler = solve_idler(&self.pump, &signal, stack)?;
        let (dk_par, dk_perp) = phase_mismatch(stack, &self.pump, &signal, &idler)?;
        let (beta_plus, beta_minus) = match self.cfg.pump.drive {
            PumpDrive::BetaScale(b) => (self.fields.forward * b, self.fields.backward * b),
            PumpDrive::Field(e) => {
                let k = coupling_per_field(stack, &signal, &idler)? * e;
                (self.fields.forward * k, self.fields.backward * k)
            }
        };
        let mut params =
            InteractionParams::from_betas(beta_plus, beta_minus, stack.thickness_nm * dk_par);
        params.delta_k_par = dk_par;
        params.delta_k_perp = dk_perp;
        Ok(Pixel {
            signal,
            idler,
            params,
            signal_coeffs: interface_coeffs(stack, &signal)?,
            idler_coeffs: interface_coeffs(stack, &idler)?,
            phase_s: propagation_phase(stack, &signal)?,
            phase_i: propagation_phase(stack, &idler)?,
        })
    }

    /// Intensities `[ff, bb, fb, bf]` of one pixel.
    pub fn evaluate(&self, model: Model, lambda_s: f64, theta_s: f64) -> Result<[f64; 4]> {
        let px = self.pixel(lambda_s, theta_s)?;
        let p = &px.params;
        let out = match model {
            Model::Nonresonant => [self.nonresonant(p), 0.0, 0.0, 0.0],
            Model::Simplified => {
                let base = self.nonresonant(p);
                let se = field_enhancements(&px.signal_coeffs, px.phase_s)?;
                let ie = field_enhancements(&px.idler_coeffs, px.phase_i)?;
                Scheme::ALL.map(|s| {
                    simplified_probability(
                        base,
                        filter_function(s, p.beta_plus, p.beta_minus, &se, &ie),
                    )
                })
            }
            Model::Rigorous => {
                let w = interaction_matrix(p);
                let b =
                    boundary_matrices(&px.signal_coeffs, &px.idler_coeffs, px.phase_s, px.phase_i);
                pair_probabilities(&scattering_matrix(&w, &b)?).as_array()
            }
        };
        if out.iter().any(|v| !v.is_finite()) {
            return Err(Error::NearSingular {
                condition: f64::NAN,
            });
        }
        Ok(out)
    }

    fn nonresonant(&self, p: &InteractionParams) -> f64 {
        nonresonant_probability(
            p.delta_k_par,
            p.delta_k_perp,
            self.cfg.stack.thickness_nm,
            self.cfg.pump.waist_um,
        )
    }
}

/// Runs `f` on a pool of `threads` workers, or on the global pool.
fn with_threads<T: Send>(threads: Option<usize>, f: impl FnOnce() -> T + Send) -> Result<T> {
    match threads {
        None => Ok(f()),
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map_err(|e| Error::config("threads", e.to_string()))?;
            Ok(pool.install(f))
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Normalization {
    Raw,
    UnitMax,
}

/// Intensities on a signal-wavelength × internal-angle grid, stored
/// wavelength-major.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumGrid {
    pub signal_wavelengths: Vec<f64>,
    pub internal_angles: Vec<f64>,
    /// Indexed by [`Scheme::index`].
    pub intensity: [Vec<f64>; 4],
    /// Pixels whose evaluation failed; their intensity is zero.
    pub mask: Vec<bool>,
    pub normalization: Normalization,
    /// One of the per-pixel errors, for diagnostics.
    pub first_error: Option<Error>,
}

impl SpectrumGrid {
    pub fn len(&self) -> usize {
        self.mask.len()
    }

    pub fn is_empty(&self) -> bool {
        self.mask.is_empty()
    }

    pub fn masked_count(&self) -> usize {
        self.mask.iter().filter(|&&m| m).count()
    }

    pub fn index(&self, i_lambda: usize, i_theta: usize) -> usize {
        i_lambda * self.internal_angles.len() + i_theta
    }

    pub fn scheme(&self, scheme: Scheme) -> &[f64] {
        &self.intensity[scheme.index()]
    }

    /// Each scheme divided by its maximum over unmasked pixels. Schemes
    /// that vanish everywhere are left at zero.
    pub fn normalized(&self) -> SpectrumGrid {
        let mut out = self.clone();
        for values in out.intensity.iter_mut() {
            let max = values
                .iter()
                .zip(&self.mask)
                .filter(|(_, &m)| !m)
                .map(|(v, _)| *v)
                .fold(0.0, f64::max);
            if max > 0.0 {
                for v in values.iter_mut() {
                    *v /= max;
                }
            }
        }
        out.normalization = Normalization::UnitMax;
        out
    }

    /// Unmasked values of one scheme in `self` and `other`.
    fn common(&self, other: &SpectrumGrid, scheme: Scheme) -> Result<(Vec<f64>, Vec<f64>)> {
        if self.len() != other.len() {
            return Err(Error::UndefinedRSquared(format!(
                "grids have {} and {} pixels",
                self.len(),
                other.len()
            )));
        }
        let (a, b) = self
            .scheme(scheme)
            .iter()
            .zip(other.scheme(scheme))
            .zip(self.mask.iter().zip(&other.mask))
            .filter(|(_, (&ma, &mb))| !ma && !mb)
            .map(|((&x, &y), _)| (x, y))
            .unzip();
        Ok((a, b))
    }
}

/// Evaluates one model over the configured grid.
///
/// Failed pixels are masked instead of aborting the sweep; errors in the
/// per-sweep setup are returned.
pub fn frequency_angular_spectrum(
    cfg: &SweepConfig,
    model: Model,
    threads: Option<usize>,
) -> Result<SpectrumGrid> {
    cfg.wavelengths.validate("grid.lambda")?;
    cfg.angles.validate("grid.theta")?;
    let ctx = SweepContext::new(cfg)?;
    let lambdas = cfg.wavelengths.values();
    let angles = cfg.angles.values();
    let n_theta = angles.len();
    let results: Vec<Result<[f64; 4]>> = with_threads(threads, || {
        (0..lambdas.len() * n_theta)
            .into_par_iter()
            .map(|k| ctx.evaluate(model, lambdas[k / n_theta], angles[k % n_theta]))
            .collect()
    })?;

    let n = results.len();
    let mut intensity = [vec![0.0; n], vec![0.0; n], vec![0.0; n], vec![0.0; n]];
    let mut mask = vec![false; n];
    let mut first_error = None;
    for (k, r) in results.into_iter().enumerate() {
        match r {
            Ok(v) => {
                for (s, x) in v.into_iter().enumerate() {
                    intensity[s][k] = x;
                }
            }
            Err(e) => {
                mask[k] = true;
                first_error.get_or_insert(e);
            }
        }
    }
    Ok(SpectrumGrid {
        signal_wavelengths: lambdas,
        internal_angles: angles,
        intensity,
        mask,
        normalization: Normalization::Raw,
        first_error,
    })
}

/// `1 - Σ(a-b)² / Σ(b-mean b)²` with `b` as the reference.
pub fn r_squared(a: &[f64], b: &[f64]) -> Result<f64> {
    if a.len() != b.len() {
        return Err(Error::UndefinedRSquared(format!(
            "lengths {} and {} differ",
            a.len(),
            b.len()
        )));
    }
    if b.is_empty() {
        return Err(Error::UndefinedRSquared("no samples".into()));
    }
    let mean = b.iter().sum::<f64>() / b.len() as f64;
    let total: f64 = b.iter().map(|y| (y - mean) * (y - mean)).sum();
    if !(total > 0.0) {
        return Err(Error::UndefinedRSquared(
            "reference has zero variance".into(),
        ));
    }
    let residual: f64 = a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum();
    Ok(1.0 - residual / total)
}

fn unit_max(v: &[f64]) -> Result<Vec<f64>> {
    let max = v.iter().copied().fold(0.0, f64::max);
    if !(max > 0.0) {
        return Err(Error::UndefinedRSquared(
            "spectrum has no positive value".into(),
        ));
    }
    Ok(v.iter().map(|x| x / max).collect())
}

/// [`r_squared`] after scaling each input to unit maximum.
pub fn r_squared_normalized(a: &[f64], b: &[f64]) -> Result<f64> {
    r_squared(&unit_max(a)?, &unit_max(b)?)
}

/// Normalised R² of one scheme over pixels unmasked in both grids, `b`
/// being the reference.
pub fn grid_r_squared(a: &SpectrumGrid, b: &SpectrumGrid, scheme: Scheme) -> Result<f64> {
    let (x, y) = a.common(b, scheme)?;
    r_squared_normalized(&x, &y)
}

/// Largest pointwise difference of one scheme between two grids after
/// unit-max normalisation, over pixels unmasked in both.
pub fn max_normalized_deviation(a: &SpectrumGrid, b: &SpectrumGrid, scheme: Scheme) -> Result<f64> {
    let (x, y) = a.common(b, scheme)?;
    let (x, y) = (unit_max(&x)?, unit_max(&y)?);
    Ok(x.iter()
        .zip(&y)
        .map(|(p, q)| (p - q).abs())
        .fold(0.0, f64::max))
}

/// `L Δk∥` at the degenerate collinear point `λ_s = λ_i = 2 λ_p`, `θ = 0`.
pub fn degenerate_mismatch(cfg: &SweepConfig) -> Result<f64> {
    let ctx = SweepContext::new(cfg)?;
    Ok(ctx.pixel(2.0 * cfg.pump.wavelength_nm, 0.0)?.params.delta)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GainPoint {
    /// In-film `β⁺`.
    pub beta_plus: f64,
    /// `β⁺ / |Δ/2|` at the degenerate collinear point.
    pub beta_normalized: f64,
    pub re_gamma_plus: f64,
    /// Normalised simplified vs rigorous `ff` over the degenerate angular
    /// slice.
    pub r_squared: f64,
}

/// Gain and model agreement for each in-film `β⁺`, along the angle axis
/// at `λ_s = 2 λ_p`.
pub fn gain_and_agreement_curve(
    cfg: &SweepConfig,
    beta_values: &[f64],
    threads: Option<usize>,
) -> Result<Vec<GainPoint>> {
    cfg.angles.validate("grid.theta")?;
    if let Some(b) = beta_values.iter().find(|b| !(b.is_finite() && **b > 0.0)) {
        return Err(Error::config(
            "gain_curve.beta_values",
            format!("values must be positive, got {b}"),
        ));
    }
    let delta = degenerate_mismatch(cfg)?;
    let lambda = 2.0 * cfg.pump.wavelength_nm;
    let angles = cfg.angles.values();
    beta_values
        .iter()
        .map(|&beta| {
            let scaled = cfg.with_in_film_beta(beta)?;
            let ctx = SweepContext::new(&scaled)?;
            let pairs: Vec<(f64, f64)> = with_threads(threads, || {
                angles
                    .par_iter()
                    .filter_map(|&th| {
                        let s = ctx.evaluate(Model::Simplified, lambda, th).ok()?;
                        let r = ctx.evaluate(Model::Rigorous, lambda, th).ok()?;
                        Some((s[0], r[0]))
                    })
                    .collect()
            })?;
            let (s, r): (Vec<f64>, Vec<f64>) = pairs.into_iter().unzip();
            Ok(GainPoint {
                beta_plus: beta,
                beta_normalized: beta / (0.5 * delta).abs(),
                re_gamma_plus: gain(Complex64::new(beta, 0.0), delta).re,
                r_squared: r_squared_normalized(&s, &r)?,
            })
        })
        .collect()
}

/// Gaussian spectral envelope `A exp(-4 ln2 (λ-c)² / fwhm²)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EnvelopeModel {
    pub center_nm: f64,
    pub fwhm_nm: f64,
    pub amplitude: f64,
}

impl EnvelopeModel {
    pub fn new(center_nm: f64, fwhm_nm: f64, amplitude: f64) -> Result<Self> {
        let e = EnvelopeModel {
            center_nm,
            fwhm_nm,
            amplitude,
        };
        e.validate()?;
        Ok(e)
    }

    /// Unit envelope everywhere.
    pub fn flat() -> Self {
        EnvelopeModel {
            center_nm: 0.0,
            fwhm_nm: f64::INFINITY,
            amplitude: 1.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !self.center_nm.is_finite() {
            return Err(Error::config("envelope.center_nm", "must be finite"));
        }
        if !(self.fwhm_nm > 0.0) {
            return Err(Error::config("envelope.fwhm_nm", "must be positive"));
        }
        if !(self.amplitude.is_finite() && self.amplitude > 0.0) {
            return Err(Error::config("envelope.amplitude", "must be positive"));
        }
        Ok(())
    }

    pub fn eval(&self, lambda_nm: f64) -> f64 {
        let x = (lambda_nm - self.center_nm) / self.fwhm_nm;
        self.amplitude * (-4.0 * std::f64::consts::LN_2 * x * x).exp()
    }
}

/// Collection scheme of a detection measurement.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DetectionScheme {
    /// `ff`
    Forward,
    /// `bb`
    Backward,
    /// `fb + bf`
    ForwardBackward,
}

impl DetectionScheme {
    pub const ALL: [DetectionScheme; 3] = [
        DetectionScheme::Forward,
        DetectionScheme::Backward,
        DetectionScheme::ForwardBackward,
    ];

    pub fn name(self) -> &'static str {
        match self {
            DetectionScheme::Forward => "forward",
            DetectionScheme::Backward => "backward",
            DetectionScheme::ForwardBackward => "forward_backward",
        }
    }

    /// Collection-efficiency weight relative to the forward scheme for
    /// `ratio = η_f / η_b`.
    pub fn efficiency_factor(self, ratio: f64) -> f64 {
        match self {
            DetectionScheme::Forward => 1.0,
            DetectionScheme::Backward => ratio,
            DetectionScheme::ForwardBackward => ratio.sqrt(),
        }
    }

    fn combine(self, v: &[f64; 4]) -> f64 {
        match self {
            DetectionScheme::Forward => v[Scheme::Ff.index()],
            DetectionScheme::Backward => v[Scheme::Bb.index()],
            DetectionScheme::ForwardBackward => v[Scheme::Fb.index()] + v[Scheme::Bf.index()],
        }
    }
}

impl std::str::FromStr for DetectionScheme {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        DetectionScheme::ALL.into_iter().find(|k| k.name() == s).ok_or_else(|| {
            Error::config(
                "scheme",
                format!("unknown detection scheme `{s}` (expected forward, backward or forward_backward)"),
            )
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DetectionRow {
    pub lambda_s_nm: f64,
    pub lambda_i_nm: f64,
    pub rate: f64,
    pub masked: bool,
}

/// Simplified-model rate at normal emission along the wavelength axis,
/// weighted by the envelope at both photons' wavelengths and normalised to
/// the forward-scheme maximum.
pub fn detection_spectrum(
    cfg: &SweepConfig,
    scheme: DetectionScheme,
    envelope: &EnvelopeModel,
    efficiency_ratio: f64,
    threads: Option<usize>,
) -> Result<Vec<DetectionRow>> {
    cfg.wavelengths.validate("grid.lambda")?;
    envelope.validate()?;
    if !(efficiency_ratio.is_finite() && efficiency_ratio > 0.0) {
        return Err(Error::config("efficiency_ratio", "must be positive"));
    }
    let ctx = SweepContext::new(cfg)?;
    let lp = cfg.pump.wavelength_nm;
    let lambdas = cfg.wavelengths.values();
    let weighted: Vec<Option<[f64; 4]>> = with_threads(threads, || {
        lambdas
            .par_iter()
            .map(|&ls| {
                let v = ctx.evaluate(Model::Simplified, ls, 0.0).ok()?;
                let li = lp * ls / (ls - lp);
                let env = envelope.eval(ls) * envelope.eval(li);
                Some(v.map(|x| x * env))
            })
            .collect()
    })?;
    let forward_max = weighted
        .iter()
        .flatten()
        .map(|v| DetectionScheme::Forward.combine(v))
        .fold(0.0, f64::max);
    if !(forward_max > 0.0) {
        return Err(Error::EmptySpectrum("forward detection spectrum".into()));
    }
    let factor = scheme.efficiency_factor(efficiency_ratio);
    Ok(lambdas
        .iter()
        .zip(&weighted)
        .map(|(&ls, v)| DetectionRow {
            lambda_s_nm: ls,
            lambda_i_nm: lp * ls / (ls - lp),
            rate: v.map_or(0.0, |v| scheme.combine(&v) / forward_max * factor),
            masked: v.is_none(),
        })
        .collect())
}

/// Airy transmission along the wavelength axis at a fixed internal angle.
pub fn transmission_spectrum(
    stack: &LayerStack,
    polarization: Polarization,
    wavelengths: &Axis,
    internal_angle: f64,
) -> Result<Vec<(f64, f64)>> {
    wavelengths.validate("grid.lambda")?;
    wavelengths
        .values()
        .into_iter()
        .map(|l| {
            let mode = Mode::new(l, internal_angle, polarization, Role::Signal)?;
            Ok((l, linear_transmission(stack, &mode)?))
        })
        .collect()
}

/// Local maxima of a sampled curve, refined by a parabola through the
/// three samples around each.
pub fn transmission_peaks(curve: &[(f64, f64)]) -> Vec<f64> {
    curve
        .windows(3)
        .filter(|w| w[1].1 > w[0].1 && w[1].1 >= w[2].1)
        .map(|w| {
            let (x0, y0) = w[0];
            let (x1, y1) = w[1];
            let (x2, y2) = w[2];
            let d1 = (y1 - y0) / (x1 - x0);
            let d2 = (y2 - y1) / (x2 - x1);
            let curvature = (d2 - d1) / (0.5 * (x2 - x0));
            if curvature < 0.0 {
                0.5 * (x0 + x1) - d1 / curvature
            } else {
                x1
            }
        })
        .collect()
}

/// Fringe spacing `λ² / (2 n_g L)` at normal incidence, `n_g = n - λ dn/dλ`.
pub fn free_spectral_range(stack: &LayerStack, lambda_nm: f64) -> Result<f64> {
    let h = 0.01;
    let n = refractive_index(&stack.film, lambda_nm)?;
    let dn = (refractive_index(&stack.film, lambda_nm + h)?
        - refractive_index(&stack.film, lambda_nm - h)?)
        / (2.0 * h);
    let group = n - lambda_nm * dn;
    Ok(lambda_nm * lambda_nm / (2.0 * group * stack.thickness_nm))
}
