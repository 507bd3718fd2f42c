//! Scattering-matrix model of pair generation inside the etalon.
//!
//! Mode array ordering is `{a1, a2†, a3, a4†}`: forward signal, forward
//! idler (conjugated), backward signal, backward idler (conjugated). The
//! boundary matrices couple it to the incident and outgoing vacuum modes,
//! the interaction matrix propagates it through the pumped film, and the
//! pair probabilities are vacuum moments of the resulting `U`.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::four::FourMatrix;
use crate::layerstack::{InterfaceCoeffs, LayerStack};
use crate::materials::{refractive_index, wavevector_components, Mode};
use crate::Scheme;

/// Series switch for `sinh γ / γ`.
pub const SERIES_THRESHOLD: f64 = 1e-4;

/// Condition number of `I - ρ w` above which the solve is refused.
pub const MAX_CONDITION: f64 = 1e12;

/// Complex pump amplitudes inside the film, forward and backward.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PumpFields {
    pub forward: Complex64,
    pub backward: Complex64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InteractionParams {
    pub beta_plus: Complex64,
    pub beta_minus: Complex64,
    pub gamma_plus: Complex64,
    pub gamma_minus: Complex64,
    /// `L Δk∥`.
    pub delta: f64,
    /// rad/nm
    pub delta_k_par: f64,
    /// rad/nm
    pub delta_k_perp: f64,
}

impl InteractionParams {
    /// Parameters for given interaction terms and phase mismatch, with no
    /// geometry attached.
    pub fn from_betas(beta_plus: Complex64, beta_minus: Complex64, delta: f64) -> Self {
        InteractionParams {
            beta_plus,
            beta_minus,
            gamma_plus: gain(beta_plus, delta),
            gamma_minus: gain(beta_minus, delta),
            delta,
            delta_k_par: f64::NAN,
            delta_k_perp: f64::NAN,
        }
    }
}

/// Gain term `γ = (|β|² - Δ²/4)^{1/2}`: real above the mismatch threshold,
/// imaginary below it.
pub fn gain(beta: Complex64, delta: f64) -> Complex64 {
    let g2 = beta.norm_sqr() - 0.25 * delta * delta;
    if g2 >= 0.0 {
        Complex64::new(g2.sqrt(), 0.0)
    } else {
        Complex64::new(0.0, (-g2).sqrt())
    }
}

/// Interaction term per unit incident pump field (m/V) for a given
/// signal/idler pair: `2π ω_s ω_i χ L / (c² sqrt(k_s∥ k_i∥))`.
pub fn coupling_per_field(stack: &LayerStack, signal: &Mode, idler: &Mode) -> Result<f64> {
    let ks = wavevector_components(
        signal,
        refractive_index(&stack.film, signal.wavelength_nm())?,
    )
    .0;
    let ki = wavevector_components(idler, refractive_index(&stack.film, idler.wavelength_nm())?).0;
    if !(ks > 0.0 && ki > 0.0) {
        return Err(Error::Geometry(format!(
            "non-positive parallel wavevector (k_s = {ks}, k_i = {ki})"
        )));
    }
    // ω/c = 2π/λ in rad/nm; χ pm/V -> nm/V; field V/m -> V/nm.
    let omega_s = 2.0 * PI / signal.wavelength_nm();
    let omega_i = 2.0 * PI / idler.wavelength_nm();
    let chi2 = stack.chi2_pm_per_v * 1e-3;
    Ok(2.0 * PI * omega_s * omega_i * chi2 * stack.thickness_nm * 1e-9 / (ks * ki).sqrt())
}

/// Wavevector mismatch `(Δk∥, Δk⊥)` in rad/nm between the pump and the
/// pair inside the film.
pub fn phase_mismatch(
    stack: &LayerStack,
    pump: &Mode,
    signal: &Mode,
    idler: &Mode,
) -> Result<(f64, f64)> {
    let n_p = refractive_index(&stack.film, pump.wavelength_nm())?;
    let n_s = refractive_index(&stack.film, signal.wavelength_nm())?;
    let n_i = refractive_index(&stack.film, idler.wavelength_nm())?;
    let (kp_par, kp_perp) = wavevector_components(pump, n_p);
    let (ks_par, ks_perp) = wavevector_components(signal, n_s);
    let (ki_par, ki_perp) = wavevector_components(idler, n_i);
    Ok((kp_par - ks_par - ki_par, kp_perp - ks_perp - ki_perp))
}

pub fn interaction_params(
    stack: &LayerStack,
    pump: &Mode,
    signal: &Mode,
    idler: &Mode,
    fields: &PumpFields,
) -> Result<InteractionParams> {
    let (delta_k_par, delta_k_perp) = phase_mismatch(stack, pump, signal, idler)?;
    let coupling = coupling_per_field(stack, signal, idler)?;
    let mut params = InteractionParams::from_betas(
        fields.forward * coupling,
        fields.backward * coupling,
        stack.thickness_nm * delta_k_par,
    );
    params.delta_k_par = delta_k_par;
    params.delta_k_perp = delta_k_perp;
    Ok(params)
}

/// `(cosh γ, sinh γ / γ)` for real `γ² = g2`.
fn hyperbolic_pair(g2: f64) -> (f64, f64) {
    let g = g2.abs().sqrt();
    if g < SERIES_THRESHOLD {
        (
            1.0 + g2 / 2.0 + g2 * g2 / 24.0,
            1.0 + g2 / 6.0 + g2 * g2 / 120.0,
        )
    } else if g2 > 0.0 {
        (g.cosh(), g.sinh() / g)
    } else {
        (g.cos(), g.sin() / g)
    }
}

/// One 2×2 block of the interaction matrix.
pub fn interaction_block(beta: Complex64, delta: f64) -> [[Complex64; 2]; 2] {
    let one = Complex64::new(1.0, 0.0);
    let zero = Complex64::new(0.0, 0.0);
    if beta == zero {
        return [[one, zero], [zero, one]];
    }
    let i = Complex64::i();
    let half = 0.5 * delta;
    let (ch, sh) = hyperbolic_pair(beta.norm_sqr() - half * half);
    let w11 = Complex64::from_polar(1.0, -half) * Complex64::new(ch, half * sh);
    let w22 = Complex64::from_polar(1.0, half) * Complex64::new(ch, -half * sh);
    let w12 = -i * beta * sh;
    // conj(β): the a2† row is the adjoint of the a1 row.
    let w21 = i * beta.conj() * sh;
    [[w11, w12], [w21, w22]]
}

/// Block-diagonal interaction matrix, forward-pump block first.
pub fn interaction_matrix(params: &InteractionParams) -> FourMatrix {
    let upper = interaction_block(params.beta_plus, params.delta);
    let lower = interaction_block(params.beta_minus, params.delta);
    let mut w = FourMatrix::zeros();
    for r in 0..2 {
        for c in 0..2 {
            w[(r, c)] = upper[r][c];
            w[(r + 2, c + 2)] = lower[r][c];
        }
    }
    w
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundaryMatrices {
    pub tau1: FourMatrix,
    pub tau2: FourMatrix,
    pub rho: FourMatrix,
}

pub fn boundary_matrices(
    signal: &InterfaceCoeffs,
    idler: &InterfaceCoeffs,
    phase_s: f64,
    phase_i: f64,
) -> BoundaryMatrices {
    let tau1 = FourMatrix::diagonal([signal.t1, idler.t1.conj(), signal.t2, idler.t2.conj()]);
    let tau2 = FourMatrix::diagonal([signal.t2, idler.t2.conj(), signal.t1, idler.t1.conj()]);
    let es = Complex64::from_polar(1.0, phase_s);
    let ei = Complex64::from_polar(1.0, -phase_i);
    let mut rho = FourMatrix::zeros();
    rho[(0, 2)] = signal.r1 * es;
    rho[(1, 3)] = idler.r1.conj() * ei;
    rho[(2, 0)] = signal.r2 * es;
    rho[(3, 1)] = idler.r2.conj() * ei;
    BoundaryMatrices { tau1, tau2, rho }
}

/// `U = τ₂ w (I - ρ w)⁻¹ τ₁ - ρ†` through an LU solve.
pub fn scattering_matrix(w: &FourMatrix, boundary: &BoundaryMatrices) -> Result<FourMatrix> {
    let system = FourMatrix::identity() - boundary.rho * *w;
    let lu = system.lu().ok_or(Error::NearSingular {
        condition: f64::INFINITY,
    })?;
    let condition = lu.condition_one(&system);
    if !(condition <= MAX_CONDITION) {
        return Err(Error::NearSingular { condition });
    }
    let x = lu.solve(&boundary.tau1);
    Ok(boundary.tau2 * *w * x - boundary.rho.adjoint())
}

/// Relative probabilities of the four emission-direction pairs.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct PairProbabilities {
    pub ff: f64,
    pub bb: f64,
    pub fb: f64,
    pub bf: f64,
}

impl PairProbabilities {
    pub fn get(&self, scheme: Scheme) -> f64 {
        match scheme {
            Scheme::Ff => self.ff,
            Scheme::Bb => self.bb,
            Scheme::Fb => self.fb,
            Scheme::Bf => self.bf,
        }
    }

    pub fn as_array(&self) -> [f64; 4] {
        [self.ff, self.bb, self.fb, self.bf]
    }
}

/// Vacuum moment for signal row `s` and idler row `i` of `U`.
fn pair_moment(u: &FourMatrix, s: usize, i: usize) -> f64 {
    let m = |r, c| u.at(r, c).norm_sqr();
    m(i, 1) * (m(s, 1) + m(s, 2) + m(s, 4))
        + m(i, 3) * (m(s, 3) + m(s, 2) + m(s, 4))
        + 2.0 * (u.at(s, 1) * u.at(i, 3) * u.at(i, 1).conj() * u.at(s, 3).conj()).re
}

/// The four moments read off `U`. Signal rows are 1 (forward) and 3
/// (backward), idler rows 2 (forward) and 4 (backward).
pub fn pair_probabilities(u: &FourMatrix) -> PairProbabilities {
    PairProbabilities {
        ff: pair_moment(u, 1, 2),
        bb: pair_moment(u, 3, 4),
        fb: pair_moment(u, 1, 4),
        bf: pair_moment(u, 3, 2),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::layerstack::{interface_coeffs, propagation_phase};
    use crate::materials::{preset, Polarization, Role};
    use approx::assert_relative_eq;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn zero_gain_is_identity_exactly() {
        for delta in [0.0, 1.0, -7.3, 40.0] {
            let p = InteractionParams::from_betas(c(0.0, 0.0), c(0.0, 0.0), delta);
            assert_eq!(interaction_matrix(&p), FourMatrix::identity());
        }
    }

    #[test]
    fn no_pump_gain_is_imaginary_half_mismatch() {
        let g = gain(c(0.0, 0.0), 3.0);
        assert_eq!(g, c(0.0, 1.5));
    }

    #[test]
    fn block_against_high_precision_closed_form() {
        // mpmath (50 digits) evaluation of the closed forms at β = 0.1, Δ = 1.
        let b = interaction_block(c(0.1, 0.0), 1.0);
        let expect = [
            [
                c(1.0046007403954536, -0.0015868796553719307),
                c(0.0, -0.09604772662657969),
            ],
            [
                c(0.0, 0.09604772662657969),
                c(1.0046007403954536, 0.0015868796553719307),
            ],
        ];
        for r in 0..2 {
            for k in 0..2 {
                assert!(
                    (b[r][k] - expect[r][k]).norm() < 1e-14,
                    "entry {r}{k}: {:?}",
                    b[r][k]
                );
            }
        }
    }

    #[test]
    fn block_determinant_is_one() {
        for (beta, delta) in [
            (c(0.3, 0.2), 2.0),
            (c(5.0, -1.0), 0.5),
            (c(1e-6, 0.0), 30.0),
        ] {
            let b = interaction_block(beta, delta);
            let det = b[0][0] * b[1][1] - b[0][1] * b[1][0];
            // Cancellation error grows with |w11|².
            let scale = b[0][0].norm_sqr().max(1.0);
            assert!((det - 1.0).norm() < 1e-12 * scale);
        }
    }

    #[test]
    fn series_switch_is_continuous() {
        // |γ| on both sides of the switch.
        for delta in [0.0, 1e-9] {
            let below = interaction_block(c(SERIES_THRESHOLD * (1.0 - 1e-9), 0.0), delta);
            let above = interaction_block(c(SERIES_THRESHOLD * (1.0 + 1e-9), 0.0), delta);
            for r in 0..2 {
                for k in 0..2 {
                    assert!((below[r][k] - above[r][k]).norm() < 1e-10);
                }
            }
        }
    }

    #[test]
    fn doubling_field_doubles_beta() {
        let stack = LayerStack::new(
            preset("air").unwrap(),
            preset("linbo3_e").unwrap(),
            preset("silicon").unwrap(),
            10_150.0,
        )
        .unwrap();
        let pump = Mode::new(788.0, 0.0, Polarization::S, Role::Pump).unwrap();
        let sig = Mode::new(1576.0, 0.0, Polarization::S, Role::Signal).unwrap();
        let idl = Mode::new(1576.0, 0.0, Polarization::S, Role::Idler).unwrap();
        let f1 = PumpFields {
            forward: c(1e6, 0.0),
            backward: c(0.0, 2e5),
        };
        let f2 = PumpFields {
            forward: f1.forward * 2.0,
            backward: f1.backward * 2.0,
        };
        let p1 = interaction_params(&stack, &pump, &sig, &idl, &f1).unwrap();
        let p2 = interaction_params(&stack, &pump, &sig, &idl, &f2).unwrap();
        assert_relative_eq!(p2.beta_plus.re, 2.0 * p1.beta_plus.re, max_relative = 1e-15);
        assert_relative_eq!(
            p2.beta_minus.im,
            2.0 * p1.beta_minus.im,
            max_relative = 1e-15
        );
        assert_eq!(p1.delta, p2.delta);
        // Δ = L (k_p - 2 k_s) with n_e(788) = 2.1768267981499453, n_e(1576) = 2.1368137431990974.
        assert_relative_eq!(p1.delta, 3.2383322404438462, max_relative = 1e-10);
        assert_eq!(p1.delta_k_perp, 0.0);

        let none = PumpFields {
            forward: c(0.0, 0.0),
            backward: c(0.0, 0.0),
        };
        let p0 = interaction_params(&stack, &pump, &sig, &idl, &none).unwrap();
        assert_eq!(p0.beta_plus, c(0.0, 0.0));
        assert_eq!(p0.gamma_plus, c(0.0, 0.5 * p0.delta.abs()));
    }

    #[test]
    fn boundary_matrices_layout() {
        let m = InterfaceCoeffs::matched();
        let b = boundary_matrices(&m, &m, 0.3, 0.9);
        assert_eq!(b.tau1, FourMatrix::identity());
        assert_eq!(b.tau2, FourMatrix::identity());
        assert_eq!(b.rho, FourMatrix::zeros());

        let s = InterfaceCoeffs {
            t1: c(0.9, 0.0),
            r1: c(0.3, 0.0),
            t2: c(0.8, 0.0),
            r2: c(-0.2, 0.0),
        };
        let i = InterfaceCoeffs {
            t1: c(0.7, 0.1),
            r1: c(0.1, 0.2),
            t2: c(0.6, 0.0),
            r2: c(0.4, 0.0),
        };
        let b = boundary_matrices(&s, &i, 0.0, 0.0);
        assert_eq!(b.rho[(0, 2)], c(0.3, 0.0));
        assert_eq!(b.rho[(1, 3)], c(0.1, -0.2));
        assert_eq!(b.rho[(2, 0)], c(-0.2, 0.0));
        assert_eq!(b.rho[(3, 1)], c(0.4, 0.0));
        assert_eq!(b.tau1[(1, 1)], c(0.7, -0.1));
        assert_eq!(b.tau2[(3, 3)], c(0.7, -0.1));

        let b = boundary_matrices(&s, &i, PI / 2.0, 0.0);
        assert!((b.rho[(0, 2)] - c(0.0, 0.3)).norm() < 1e-16);
    }

    #[test]
    fn transparent_slab_scatters_as_identity() {
        let m = InterfaceCoeffs::matched();
        let b = boundary_matrices(&m, &m, 1.0, 2.0);
        let u = scattering_matrix(&FourMatrix::identity(), &b).unwrap();
        assert_eq!(u, FourMatrix::identity());
        assert_eq!(pair_probabilities(&u), PairProbabilities::default());
    }

    #[test]
    fn linear_signal_block_is_unitary() {
        let stack = LayerStack::new(
            preset("air").unwrap(),
            preset("linbo3_e").unwrap(),
            preset("silicon").unwrap(),
            10_150.0,
        )
        .unwrap();
        for (l, th) in [(1576.0, 0.0), (1320.0, 0.25), (2000.0, -0.4)] {
            let s = Mode::new(l, th, Polarization::P, Role::Signal).unwrap();
            let k = interface_coeffs(&stack, &s).unwrap();
            let phi = propagation_phase(&stack, &s).unwrap();
            let b = boundary_matrices(&k, &k, phi, phi);
            let u = scattering_matrix(&FourMatrix::identity(), &b).unwrap();
            let sub = [[u.at(1, 1), u.at(1, 3)], [u.at(3, 1), u.at(3, 3)]];
            for r in 0..2 {
                for q in 0..2 {
                    let dot: Complex64 = (0..2).map(|j| sub[r][j] * sub[q][j].conj()).sum();
                    let want = if r == q { 1.0 } else { 0.0 };
                    assert!((dot - want).norm() < 1e-10);
                }
            }
        }
    }

    #[test]
    fn oscillation_threshold_is_refused() {
        // Lossless mirrors with gain: I - ρw becomes singular.
        let mirror = InterfaceCoeffs {
            t1: c(0.0, 0.0),
            r1: c(1.0, 0.0),
            t2: c(0.0, 0.0),
            r2: c(1.0, 0.0),
        };
        let b = boundary_matrices(&mirror, &mirror, 0.0, 0.0);
        let w = FourMatrix::identity();
        assert!(matches!(
            scattering_matrix(&w, &b),
            Err(Error::NearSingular { .. })
        ));
    }
}
