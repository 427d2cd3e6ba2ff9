//! Unit systems and physical constants.

use std::fmt;
use std::str::FromStr;

/// Gaussian-CGS constants (CODATA 2018).
pub mod cgs {
    /// Elementary charge [esu].
    pub const ELEMENTARY_CHARGE: f64 = 4.803_204_712_570_263e-10;
    /// Electron mass [g].
    pub const ELECTRON_MASS: f64 = 9.109_383_701_5e-28;
    /// Speed of light [cm/s].
    pub const LIGHT_SPEED: f64 = 2.997_924_58e10;
    /// Reduced Planck constant [erg s].
    pub const HBAR: f64 = 1.054_571_817e-27;
    /// One electron-volt [erg].
    pub const ELECTRON_VOLT: f64 = 1.602_176_634e-12;
}

/// Hartree energy in electron-volts; the energy unit when ħ = m = e = 1.
pub const HARTREE_EV: f64 = 27.211_386_245_988;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum UnitSystem {
    /// ħ = m = ω₀ = c = 1 for the oscillator, ħ = m = e = 1 for atoms.
    #[default]
    Natural,
    GaussianCgs,
}

impl UnitSystem {
    pub fn as_str(self) -> &'static str {
        match self {
            UnitSystem::Natural => "natural",
            UnitSystem::GaussianCgs => "gaussian-cgs",
        }
    }

    /// Conversion factor from the system's energy unit to eV.
    pub fn energy_to_ev(self) -> f64 {
        match self {
            UnitSystem::Natural => HARTREE_EV,
            UnitSystem::GaussianCgs => 1.0 / cgs::ELECTRON_VOLT,
        }
    }
}

impl fmt::Display for UnitSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for UnitSystem {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "natural" => Ok(UnitSystem::Natural),
            "gaussian-cgs" => Ok(UnitSystem::GaussianCgs),
            other => Err(format!("unknown unit system `{other}` (expected natural or gaussian-cgs)")),
        }
    }
}
