//! Uncertainty-based ground state of an H-like atom.
//!
//! With zero mean radial and orbital momentum the energy is carried by the
//! dispersions alone:
//!
//! ```text
//! E = (1/2m)[⟨ΔP_r²⟩ + ⟨ΔL²⟩/⟨r⟩²] − Ze²/⟨r⟩
//! ```
//!
//! Taking `⟨Δr²⟩ = ⟨r⟩²` makes `⟨ΔP_r²⟩ = ħ²/(4⟨r⟩²)`; the isotropic angular
//! dispersion is `3ħ²/4`. Together: `E(r) = ħ²/(2mr²) − Ze²/r`.

use crate::error::{Error, Result};
use crate::uncertainty::{isotropic_ground_dispersions, minimal_radial_momentum_dispersion};
use crate::units::{cgs, UnitSystem};
use serde::Serialize;
use std::io::Write;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AtomSpec {
    pub z: u32,
    pub charge: f64,
    pub mass: f64,
    pub hbar: f64,
    pub units: UnitSystem,
}

impl AtomSpec {
    pub fn new(z: u32, charge: f64, mass: f64, hbar: f64, units: UnitSystem) -> Result<Self> {
        if z < 1 {
            return Err(Error::Domain("Z must be >= 1".into()));
        }
        for (name, v) in [("charge", charge), ("mass", mass), ("hbar", hbar)] {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::Domain(format!("{name} must be positive, got {v}")));
            }
        }
        Ok(Self { z, charge, mass, hbar, units })
    }

    /// ħ = m = e = 1 (atomic units).
    pub fn natural(z: u32) -> Result<Self> {
        Self::new(z, 1.0, 1.0, 1.0, UnitSystem::Natural)
    }

    pub fn gaussian_cgs(z: u32) -> Result<Self> {
        Self::new(z, cgs::ELEMENTARY_CHARGE, cgs::ELECTRON_MASS, cgs::HBAR, UnitSystem::GaussianCgs)
    }

    pub fn for_units(z: u32, units: UnitSystem) -> Result<Self> {
        match units {
            UnitSystem::Natural => Self::natural(z),
            UnitSystem::GaussianCgs => Self::gaussian_cgs(z),
        }
    }

    fn coulomb(&self) -> f64 {
        self.z as f64 * self.charge * self.charge
    }
}

/// `⟨Δr²⟩ = ratio·⟨r⟩²`; the default ratio 1 is the largest spread a
/// positive radius allows and so the smallest radial momentum dispersion.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DispersionPolicy {
    pub radial_spread_ratio: f64,
}

impl Default for DispersionPolicy {
    fn default() -> Self {
        Self { radial_spread_ratio: 1.0 }
    }
}

/// General expectation value with mean momenta and dispersions supplied.
pub fn total_energy_expectation(
    p_r_mean: f64,
    l_mean: f64,
    dp_r2: f64,
    dl2: f64,
    r_mean: f64,
    atom: &AtomSpec,
) -> Result<f64> {
    if !(r_mean > 0.0 && r_mean.is_finite()) {
        return Err(Error::Domain(format!("<r> must be positive, got {r_mean}")));
    }
    if !(dp_r2 >= 0.0 && dl2 >= 0.0) {
        return Err(Error::Domain("dispersions must be >= 0".into()));
    }
    let r2 = r_mean * r_mean;
    let mean_part = (p_r_mean * p_r_mean + l_mean * l_mean / r2) / (2.0 * atom.mass);
    let fluct_part = (dp_r2 + dl2 / r2) / (2.0 * atom.mass);
    Ok(mean_part + fluct_part - atom.coulomb() / r_mean)
}

/// Energy at radius `r` with dispersions fixed by `policy`.
pub fn energy_with_policy(r: f64, atom: &AtomSpec, policy: DispersionPolicy) -> Result<f64> {
    if !(r > 0.0 && r.is_finite()) {
        return Err(Error::Domain(format!("r must be positive, got {r}")));
    }
    if !(policy.radial_spread_ratio > 0.0) {
        return Err(Error::Domain("radial spread ratio must be positive".into()));
    }
    let dp_r2 = minimal_radial_momentum_dispersion(policy.radial_spread_ratio * r * r, atom.hbar)?;
    let dl2 = isotropic_ground_dispersions(atom.hbar)?.sum;
    total_energy_expectation(0.0, 0.0, dp_r2, dl2, r, atom)
}

/// `E(r) = ħ²/(2mr²) − Ze²/r`.
pub fn ground_energy_functional(r: f64, atom: &AtomSpec) -> Result<f64> {
    if !(r > 0.0 && r.is_finite()) {
        return Err(Error::Domain(format!("r must be positive, got {r}")));
    }
    Ok(atom.hbar * atom.hbar / (2.0 * atom.mass * r * r) - atom.coulomb() / r)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GroundState {
    pub z: u32,
    pub r_min: f64,
    pub e_min: f64,
    pub e_min_ev: f64,
    /// Minimizer result, for the cross-check.
    pub r_numeric: f64,
    pub e_numeric: f64,
}

/// Kinetic coefficient `a` of `E(r) = a/r² − b/r` under `policy`.
fn kinetic_coefficient(atom: &AtomSpec, policy: DispersionPolicy) -> f64 {
    let h2 = atom.hbar * atom.hbar;
    (h2 / (4.0 * policy.radial_spread_ratio) + 0.75 * h2) / (2.0 * atom.mass)
}

/// Bisection on the sign of `dE/dr` over `[1e-3, 1e3]·r_guess`, in log space.
fn bracketed_minimum(a: f64, b: f64, r_guess: f64) -> f64 {
    let slope = |r: f64| -2.0 * a / (r * r * r) + b / (r * r);
    let (mut lo, mut hi) = ((1e-3 * r_guess).ln(), (1e3 * r_guess).ln());
    debug_assert!(slope(lo.exp()) < 0.0 && slope(hi.exp()) > 0.0);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if slope(mid.exp()) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    (0.5 * (lo + hi)).exp()
}

pub fn minimize_ground_energy(atom: &AtomSpec) -> Result<GroundState> {
    minimize_with_policy(atom, DispersionPolicy::default())
}

pub fn minimize_with_policy(atom: &AtomSpec, policy: DispersionPolicy) -> Result<GroundState> {
    if !(policy.radial_spread_ratio > 0.0) {
        return Err(Error::Domain("radial spread ratio must be positive".into()));
    }
    let a = kinetic_coefficient(atom, policy);
    let b = atom.coulomb();
    let r_min = 2.0 * a / b;
    let e_min = -b * b / (4.0 * a);
    let r_numeric = bracketed_minimum(a, b, atom.hbar * atom.hbar / (atom.mass * b));
    let e_numeric = energy_with_policy(r_numeric, atom, policy)?;
    Ok(GroundState {
        z: atom.z,
        r_min,
        e_min,
        e_min_ev: e_min * atom.units.energy_to_ev(),
        r_numeric,
        e_numeric,
    })
}

/// Rows `Z, r_min, E_min, E_min_eV`.
pub fn write_sweep_csv<W: Write>(mut w: W, states: &[GroundState]) -> std::io::Result<()> {
    writeln!(w, "Z,r_min,E_min,E_min_eV")?;
    for s in states {
        writeln!(w, "{},{}", s.z, crate::output::csv_row(&[s.r_min, s.e_min, s.e_min_ev]))?;
    }
    Ok(())
}
