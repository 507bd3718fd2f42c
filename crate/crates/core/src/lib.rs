//! Photon-pair (SPDC) spectra from a nonlinear slab between two partially
//! reflecting interfaces.
//!
//! Two models are provided and cross-checked: a scattering-matrix model
//! ([`rigorous`]) and the multiplicative low-gain model `P × S`
//! ([`simplified`]). [`spectra`] holds the sweep engines and [`cli`] the
//! command-line front end.

pub mod cli;
pub mod error;
pub mod four;
pub mod layerstack;
pub mod materials;
pub mod rigorous;
pub mod simplified;
pub mod spectra;

use serde::{Deserialize, Serialize};

pub use error::{Error, Result};
pub use four::FourMatrix;
pub use layerstack::LayerStack;
pub use materials::{MaterialModel, Mode, Polarization, Role};

/// Emission direction of the signal and idler photon, relative to the pump.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Scheme {
    Ff,
    Bb,
    Fb,
    Bf,
}

impl Scheme {
    pub const ALL: [Scheme; 4] = [Scheme::Ff, Scheme::Bb, Scheme::Fb, Scheme::Bf];

    pub fn name(self) -> &'static str {
        match self {
            Scheme::Ff => "ff",
            Scheme::Bb => "bb",
            Scheme::Fb => "fb",
            Scheme::Bf => "bf",
        }
    }

    pub fn index(self) -> usize {
        match self {
            Scheme::Ff => 0,
            Scheme::Bb => 1,
            Scheme::Fb => 2,
            Scheme::Bf => 3,
        }
    }
}

impl std::str::FromStr for Scheme {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Scheme::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| {
                Error::config(
                    "scheme",
                    format!("unknown scheme `{s}` (expected ff, bb, fb or bf)"),
                )
            })
    }
}
