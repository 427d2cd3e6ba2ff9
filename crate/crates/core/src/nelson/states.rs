//! Closed-form solutions of the Schrödinger equation used as test states.

use super::WavefunctionGrid;
use crate::error::{Error, Result};
use crate::grid::{Axis, AxisKind};
use num_complex::Complex64;
use std::f64::consts::PI;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum AnalyticState {
    HarmonicGround { mass: f64, omega: f64, hbar: f64 },
    /// Displaced ground state released from rest at `x = displacement`.
    HarmonicCoherent { mass: f64, omega: f64, hbar: f64, displacement: f64 },
    /// First excited state; node at the origin.
    HarmonicFirstExcited { mass: f64, omega: f64, hbar: f64 },
    PlaneWave { mass: f64, hbar: f64, wavenumber: f64 },
    /// s-state of `−ħ²∇²/2m − k/r`, `a₀ = ħ²/(m k)`.
    Hydrogen1s { mass: f64, hbar: f64, coupling: f64 },
}

impl AnalyticState {
    fn mass_hbar(&self) -> (f64, f64) {
        match *self {
            AnalyticState::HarmonicGround { mass, hbar, .. }
            | AnalyticState::HarmonicCoherent { mass, hbar, .. }
            | AnalyticState::HarmonicFirstExcited { mass, hbar, .. }
            | AnalyticState::PlaneWave { mass, hbar, .. }
            | AnalyticState::Hydrogen1s { mass, hbar, .. } => (mass, hbar),
        }
    }

    pub fn mass(&self) -> f64 {
        self.mass_hbar().0
    }

    pub fn hbar(&self) -> f64 {
        self.mass_hbar().1
    }

    pub fn is_radial(&self) -> bool {
        matches!(self, AnalyticState::Hydrogen1s { .. })
    }

    pub fn bohr_radius(&self) -> Option<f64> {
        match *self {
            AnalyticState::Hydrogen1s { mass, hbar, coupling } => Some(hbar * hbar / (mass * coupling)),
            _ => None,
        }
    }

    /// Energy eigenvalue, `None` for non-stationary states.
    pub fn energy(&self) -> Option<f64> {
        match *self {
            AnalyticState::HarmonicGround { omega, hbar, .. } => Some(0.5 * hbar * omega),
            AnalyticState::HarmonicFirstExcited { omega, hbar, .. } => Some(1.5 * hbar * omega),
            AnalyticState::PlaneWave { mass, hbar, wavenumber } => {
                Some(hbar * hbar * wavenumber * wavenumber / (2.0 * mass))
            }
            AnalyticState::Hydrogen1s { mass, hbar, .. } => {
                let a0 = self.bohr_radius().unwrap();
                Some(-hbar * hbar / (2.0 * mass * a0 * a0))
            }
            AnalyticState::HarmonicCoherent { .. } => None,
        }
    }

    /// Potential energy at coordinate `x`.
    pub fn potential_at(&self, x: f64) -> f64 {
        match *self {
            AnalyticState::HarmonicGround { mass, omega, .. }
            | AnalyticState::HarmonicCoherent { mass, omega, .. }
            | AnalyticState::HarmonicFirstExcited { mass, omega, .. } => 0.5 * mass * omega * omega * x * x,
            AnalyticState::PlaneWave { .. } => 0.0,
            AnalyticState::Hydrogen1s { coupling, .. } => -coupling / x,
        }
    }

    pub fn potential(&self, axis: &Axis) -> Vec<f64> {
        axis.points().iter().map(|&x| self.potential_at(x)).collect()
    }

    /// Unnormalized amplitude at `(x, t)`.
    pub fn amplitude(&self, x: f64, t: f64) -> Complex64 {
        match *self {
            AnalyticState::HarmonicGround { mass, omega, hbar } => {
                let a = mass * omega / hbar;
                Complex64::from_polar((a / PI).powf(0.25) * (-0.5 * a * x * x).exp(), -0.5 * omega * t)
            }
            AnalyticState::HarmonicCoherent { mass, omega, hbar, displacement } => {
                let a = mass * omega / hbar;
                let xc = displacement * (omega * t).cos();
                let pc = -mass * omega * displacement * (omega * t).sin();
                let phase = pc * x / hbar - 0.5 * omega * t - 0.5 * xc * pc / hbar;
                Complex64::from_polar((a / PI).powf(0.25) * (-0.5 * a * (x - xc).powi(2)).exp(), phase)
            }
            AnalyticState::HarmonicFirstExcited { mass, omega, hbar } => {
                let a = mass * omega / hbar;
                let n = (a / PI).powf(0.25) * (2.0 * a).sqrt();
                Complex64::from_polar(1.0, -1.5 * omega * t) * (n * x * (-0.5 * a * x * x).exp())
            }
            AnalyticState::PlaneWave { mass, hbar, wavenumber } => {
                let e = hbar * wavenumber * wavenumber / (2.0 * mass);
                Complex64::from_polar(1.0, wavenumber * x - e * t)
            }
            AnalyticState::Hydrogen1s { hbar, .. } => {
                let a0 = self.bohr_radius().unwrap();
                let e = self.energy().unwrap();
                Complex64::from_polar((-x / a0).exp() / (PI * a0.powi(3)).sqrt(), -e * t / hbar)
            }
        }
    }

    pub fn sample(&self, axis: &Axis, t: f64) -> Result<WavefunctionGrid> {
        let radial = axis.kind() == AxisKind::Radial;
        if radial != self.is_radial() {
            return Err(Error::Shape(format!(
                "{} state needs a {} axis",
                self.name(),
                if self.is_radial() { "radial" } else { "cartesian" }
            )));
        }
        let values = axis.points().iter().map(|&x| self.amplitude(x, t)).collect();
        WavefunctionGrid::new(axis.clone(), values, t)
    }

    /// Slices at `t_center + k·dt`, `k = −half..=half`.
    pub fn series(&self, axis: &Axis, t_center: f64, dt: f64, half: usize) -> Result<Vec<WavefunctionGrid>> {
        (-(half as i64)..=half as i64)
            .map(|k| self.sample(axis, t_center + k as f64 * dt))
            .collect()
    }

    /// Forward drift `b = V − U` at `(x, t)`.
    pub fn forward_drift(&self, x: f64, t: f64) -> f64 {
        match *self {
            AnalyticState::HarmonicGround { omega, .. } => -omega * x,
            AnalyticState::HarmonicCoherent { mass, omega, displacement, .. } => {
                let xc = displacement * (omega * t).cos();
                let pc = -mass * omega * displacement * (omega * t).sin();
                pc / mass - omega * (x - xc)
            }
            AnalyticState::HarmonicFirstExcited { mass, omega, hbar } => hbar / (mass * x) - omega * x,
            AnalyticState::PlaneWave { mass, hbar, wavenumber } => hbar * wavenumber / mass,
            AnalyticState::Hydrogen1s { mass, hbar, .. } => {
                // radial drift including the r² measure: (ħ/m)(1/r) − ħ/(m a₀)
                let a0 = self.bohr_radius().unwrap();
                hbar / (mass * x) - hbar / (mass * a0)
            }
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            AnalyticState::HarmonicGround { .. } => "harmonic-ground",
            AnalyticState::HarmonicCoherent { .. } => "harmonic-coherent",
            AnalyticState::HarmonicFirstExcited { .. } => "harmonic-first-excited",
            AnalyticState::PlaneWave { .. } => "plane-wave",
            AnalyticState::Hydrogen1s { .. } => "hydrogen-1s",
        }
    }
}

pub fn harmonic_potential(axis: &Axis, mass: f64, omega: f64) -> Vec<f64> {
    axis.points().iter().map(|x| 0.5 * mass * omega * omega * x * x).collect()
}

/// `−k/r`.
pub fn coulomb_potential(axis: &Axis, coupling: f64) -> Vec<f64> {
    axis.points().iter().map(|r| -coupling / r).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::nelson::{actions_from_wavefunction, velocities_from_actions, NodePolicy};

    #[test]
    fn states_are_normalized_analytically() {
        let axis = Axis::cartesian(-12.0, 12.0, 2401).unwrap();
        for s in [
            AnalyticState::HarmonicGround { mass: 1.0, omega: 1.0, hbar: 1.0 },
            AnalyticState::HarmonicCoherent { mass: 1.0, omega: 1.0, hbar: 1.0, displacement: 1.5 },
            AnalyticState::HarmonicFirstExcited { mass: 2.0, omega: 0.5, hbar: 1.0 },
        ] {
            let psi = s.sample(&axis, 0.7).unwrap();
            assert!((psi.normalization() - 1.0).abs() < 1e-12, "{}", s.name());
        }
        let radial = Axis::radial(40.0, 4000).unwrap();
        let h = AnalyticState::Hydrogen1s { mass: 1.0, hbar: 1.0, coupling: 1.0 };
        assert!((h.sample(&radial, 0.0).unwrap().normalization() - 1.0).abs() < 1e-8);
        assert!(h.sample(&axis, 0.0).is_err());
    }

    #[test]
    fn ground_state_velocities() {
        let axis = Axis::cartesian(-6.0, 6.0, 1201).unwrap();
        let s = AnalyticState::HarmonicGround { mass: 1.0, omega: 1.0, hbar: 1.0 };
        let a = actions_from_wavefunction(&s.sample(&axis, 0.0).unwrap(), 1.0, NodePolicy::Reject).unwrap();
        let v = velocities_from_actions(&a, 1.0).unwrap();
        for (i, x) in axis.points().iter().enumerate() {
            assert!(v.current[i].abs() < 1e-10);
            assert!((v.osmotic[i] - x).abs() < 1e-9);
            assert!((s.forward_drift(*x, 0.0) - (v.current[i] - v.osmotic[i])).abs() < 1e-9);
        }
    }

    #[test]
    fn hydrogen_osmotic_velocity_is_constant() {
        let axis = Axis::radial(30.0, 3000).unwrap();
        let s = AnalyticState::Hydrogen1s { mass: 1.0, hbar: 1.0, coupling: 1.0 };
        let a = actions_from_wavefunction(&s.sample(&axis, 0.0).unwrap(), 1.0, NodePolicy::Reject).unwrap();
        let v = velocities_from_actions(&a, 1.0).unwrap();
        assert!(v.osmotic.iter().all(|u| (u - 1.0).abs() < 1e-9));
    }
}
