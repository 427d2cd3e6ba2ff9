//! Stochastic-mechanics layer.
//!
//! A wavefunction is written `ψ = exp(iS₁/ħ − S₂/ħ)`. The current velocity is
//! `V = ∇S₁/m`, the osmotic velocity `U = ∇S₂/m`, and the forward/backward
//! pair is `V± = V ± U` (the imaginary unit of the complex form is kept as
//! bookkeeping only). Walkers follow
//!
//! ```text
//! dx = (V − U) dt + √(ħ/m) dW
//! ```
//!
//! whose Fokker–Planck stationary law is `|ψ|²`.

mod energy;
mod residuals;
mod states;
mod walkers;

pub use energy::{energy_split, EnergySplit};
pub use residuals::{
    continuity_residual, integral_identity_check, madelung_residuals, ContinuityReport,
    IntegralIdentityReport, MadelungReport, ResidualField, ResidualNorms,
};
pub use states::{coulomb_potential, harmonic_potential, AnalyticState};
pub use walkers::{
    density_l1_distance, BoundaryPolicy, Drift, EvolveOptions, WalkerEnsemble,
};

use crate::error::{Error, Result};
use crate::grid::{erode_mask, Axis};
use num_complex::Complex64;
use std::f64::consts::PI;
use std::io::Write;

/// Complex amplitudes on a uniform axis, normalized to unit probability.
#[derive(Debug, Clone, PartialEq)]
pub struct WavefunctionGrid {
    axis: Axis,
    values: Vec<Complex64>,
    time: f64,
    normalization: f64,
}

impl WavefunctionGrid {
    /// Normalizes `values`; the divisor `B = (∫|ψ|² dV)^{1/2}` is kept.
    pub fn new(axis: Axis, values: Vec<Complex64>, time: f64) -> Result<Self> {
        axis.check_len("wavefunction", values.len())?;
        if values.iter().any(|v| !(v.re.is_finite() && v.im.is_finite())) {
            return Err(Error::Domain("wavefunction values must be finite".into()));
        }
        let density: Vec<f64> = values.iter().map(|v| v.norm_sqr()).collect();
        let norm = axis.integrate(&density);
        if !(norm > 0.0 && norm.is_finite()) {
            return Err(Error::Domain(format!("wavefunction has norm {norm}")));
        }
        let b = norm.sqrt();
        let values = values.into_iter().map(|v| v / b).collect();
        Ok(Self { axis, values, time, normalization: b })
    }

    pub fn axis(&self) -> &Axis {
        &self.axis
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn time(&self) -> f64 {
        self.time
    }

    /// The `B` divided out at construction.
    pub fn normalization(&self) -> f64 {
        self.normalization
    }

    pub fn density(&self) -> Vec<f64> {
        self.values.iter().map(|v| v.norm_sqr()).collect()
    }

    /// `∫|ψ|² dV`; 1 up to rounding.
    pub fn norm(&self) -> f64 {
        self.axis.integrate(&self.density())
    }

    /// Columns `x, re_psi, im_psi`.
    pub fn write_csv<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "x,re_psi,im_psi")?;
        for (i, v) in self.values.iter().enumerate() {
            writeln!(w, "{}", crate::output::csv_row(&[self.axis.point(i), v.re, v.im]))?;
        }
        Ok(())
    }
}

/// How zeros of ψ are handled when taking logarithms.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub enum NodePolicy {
    /// Any node is a singularity error.
    #[default]
    Reject,
    /// Drop points with `|ψ| < threshold·max|ψ|` or next to a sign flip,
    /// widened by `exclusion_radius` grid steps.
    Mask { threshold: f64, exclusion_radius: usize },
}


/// A neighbour phase jump above this is read as a node between grid points.
const NODE_PHASE_JUMP: f64 = 0.9 * PI;

/// Stencil half-width of the fourth-order operators.
pub(crate) const STENCIL_RADIUS: usize = 2;

#[derive(Debug, Clone, PartialEq)]
pub struct ActionFields {
    pub axis: Axis,
    pub s1: Vec<f64>,
    pub s2: Vec<f64>,
    /// Points where both fields are meaningful.
    pub valid: Vec<bool>,
}

impl ActionFields {
    /// Points where every stencil touches only valid values.
    pub fn interior_mask(&self) -> Vec<bool> {
        erode_mask(&self.valid, STENCIL_RADIUS)
    }
}

fn node_mask(psi: &WavefunctionGrid, policy: NodePolicy) -> Result<Vec<bool>> {
    let v = psi.values();
    let n = v.len();
    let jumps: Vec<bool> = (0..n - 1)
        .map(|i| (v[i + 1] * v[i].conj()).arg().abs() > NODE_PHASE_JUMP)
        .collect();
    match policy {
        NodePolicy::Reject => {
            if let Some(i) = v.iter().position(|z| z.norm() < f64::MIN_POSITIVE) {
                return Err(Error::Singularity(format!(
                    "wavefunction vanishes at x = {}",
                    psi.axis().point(i)
                )));
            }
            if let Some(i) = jumps.iter().position(|&j| j) {
                return Err(Error::Singularity(format!(
                    "wavefunction changes sign between x = {} and x = {}",
                    psi.axis().point(i),
                    psi.axis().point(i + 1)
                )));
            }
            Ok(vec![true; n])
        }
        NodePolicy::Mask { threshold, exclusion_radius } => {
            if !(threshold >= 0.0) {
                return Err(Error::Domain("mask threshold must be >= 0".into()));
            }
            let peak = v.iter().map(|z| z.norm()).fold(0.0, f64::max);
            let mut ok: Vec<bool> = v
                .iter()
                .map(|z| z.norm() >= threshold * peak && z.norm() >= f64::MIN_POSITIVE)
                .collect();
            for (i, &j) in jumps.iter().enumerate() {
                if j {
                    ok[i] = false;
                    ok[i + 1] = false;
                }
            }
            Ok(erode_mask(&ok, exclusion_radius))
        }
    }
}

/// `S₁ = ħ·(unwrapped phase)`, `S₂ = −ħ ln|ψ|` of the normalized ψ, i.e.
/// `−ħ ln|ψ_raw| + ħ ln B`.
pub fn actions_from_wavefunction(
    psi: &WavefunctionGrid,
    hbar: f64,
    policy: NodePolicy,
) -> Result<ActionFields> {
    if !(hbar > 0.0 && hbar.is_finite()) {
        return Err(Error::Domain(format!("hbar must be positive, got {hbar}")));
    }
    let valid = node_mask(psi, policy)?;
    let v = psi.values();
    let mut s1 = Vec::with_capacity(v.len());
    let mut phase = v[0].arg();
    s1.push(hbar * phase);
    for i in 1..v.len() {
        phase += (v[i] * v[i - 1].conj()).arg();
        s1.push(hbar * phase);
    }
    let s2 = v.iter().map(|z| -hbar * z.norm().max(f64::MIN_POSITIVE).ln()).collect();
    Ok(ActionFields { axis: psi.axis().clone(), s1, s2, valid })
}

/// `ψ = exp(iS₁/ħ − S₂/ħ)`, normalized.
pub fn wavefunction_from_actions(a: &ActionFields, hbar: f64, time: f64) -> Result<WavefunctionGrid> {
    if !(hbar > 0.0 && hbar.is_finite()) {
        return Err(Error::Domain(format!("hbar must be positive, got {hbar}")));
    }
    a.axis.check_len("S1", a.s1.len())?;
    a.axis.check_len("S2", a.s2.len())?;
    if a.s1.iter().chain(&a.s2).any(|s| !s.is_finite()) {
        return Err(Error::Domain("action fields must be finite".into()));
    }
    // A constant in S₂ is absorbed by the normalization.
    let s2_min = a.s2.iter().copied().fold(f64::INFINITY, f64::min);
    let values = a
        .s1
        .iter()
        .zip(&a.s2)
        .map(|(&s1, &s2)| Complex64::from_polar((-(s2 - s2_min) / hbar).exp(), s1 / hbar))
        .collect();
    WavefunctionGrid::new(a.axis.clone(), values, time)
}

#[derive(Debug, Clone, PartialEq)]
pub struct VelocityFields {
    pub axis: Axis,
    /// `V = ∇S₁/m`.
    pub current: Vec<f64>,
    /// `U = ∇S₂/m`.
    pub osmotic: Vec<f64>,
    pub valid: Vec<bool>,
}

pub fn velocities_from_actions(a: &ActionFields, mass: f64) -> Result<VelocityFields> {
    if !(mass > 0.0 && mass.is_finite()) {
        return Err(Error::Domain(format!("mass must be positive, got {mass}")));
    }
    let current = a.axis.gradient(&a.s1).into_iter().map(|g| g / mass).collect();
    let osmotic = a.axis.gradient(&a.s2).into_iter().map(|g| g / mass).collect();
    Ok(VelocityFields { axis: a.axis.clone(), current, osmotic, valid: a.interior_mask() })
}

#[derive(Debug, Clone, PartialEq)]
pub struct ForwardBackward {
    /// `V⁺ = V + U`.
    pub forward: Vec<f64>,
    /// `V⁻ = V − U`.
    pub backward: Vec<f64>,
}

impl ForwardBackward {
    /// `((V⁺ + V⁻)/2, (V⁺ − V⁻)/2)`.
    pub fn reconstruct(&self) -> (Vec<f64>, Vec<f64>) {
        self.forward
            .iter()
            .zip(&self.backward)
            .map(|(f, b)| (0.5 * (f + b), 0.5 * (f - b)))
            .unzip()
    }
}

/// Pointwise `(V + U, V − U)`.
pub fn forward_backward(v: f64, u: f64) -> (f64, f64) {
    (v + u, v - u)
}

pub fn forward_backward_velocities(v: &VelocityFields) -> ForwardBackward {
    let (forward, backward) =
        v.current.iter().zip(&v.osmotic).map(|(&c, &o)| forward_backward(c, o)).unzip();
    ForwardBackward { forward, backward }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn gaussian(axis: &Axis) -> WavefunctionGrid {
        let v = axis.points().iter().map(|x| Complex64::new((-x * x / 2.0).exp(), 0.0)).collect();
        WavefunctionGrid::new(axis.clone(), v, 0.0).unwrap()
    }

    #[test]
    fn gaussian_actions() {
        let axis = Axis::cartesian(-6.0, 6.0, 601).unwrap();
        let psi = gaussian(&axis);
        assert!((psi.norm() - 1.0).abs() < 1e-12);
        let a = actions_from_wavefunction(&psi, 1.0, NodePolicy::Reject).unwrap();
        let c = a.s2[300];
        for (i, x) in axis.points().iter().enumerate() {
            assert!(a.s1[i].abs() < 1e-15);
            assert!((a.s2[i] - c - x * x / 2.0).abs() < 1e-11);
        }
        // the constant is ħ ln B with B² = √π
        assert_relative_eq!(c, 0.25 * PI.ln(), max_relative = 1e-10);
    }

    #[test]
    fn plane_wave_phase_is_unwrapped() {
        let axis = Axis::cartesian(0.0, 20.0, 2001).unwrap();
        let k = 3.0;
        let v = axis.points().iter().map(|x| Complex64::from_polar(1.0, k * x)).collect();
        let psi = WavefunctionGrid::new(axis.clone(), v, 0.0).unwrap();
        let a = actions_from_wavefunction(&psi, 1.0, NodePolicy::Reject).unwrap();
        for (i, x) in axis.points().iter().enumerate() {
            assert!((a.s1[i] - k * x).abs() < 1e-10);
            assert!((a.s2[i] - a.s2[0]).abs() < 1e-12);
        }
        let vel = velocities_from_actions(&a, 1.0).unwrap();
        assert!(vel.current.iter().all(|v| (v - k).abs() < 1e-8));
        assert!(vel.osmotic.iter().all(|u| u.abs() < 1e-10));
    }

    #[test]
    fn node_rejected_or_masked() {
        let axis = Axis::cartesian(-5.0, 5.0, 400).unwrap();
        let v: Vec<Complex64> =
            axis.points().iter().map(|x| Complex64::new(x * (-x * x / 2.0).exp(), 0.0)).collect();
        let psi = WavefunctionGrid::new(axis.clone(), v, 0.0).unwrap();
        assert!(matches!(
            actions_from_wavefunction(&psi, 1.0, NodePolicy::Reject),
            Err(Error::Singularity(_))
        ));
        let a = actions_from_wavefunction(
            &psi,
            1.0,
            NodePolicy::Mask { threshold: 1e-3, exclusion_radius: 3 },
        )
        .unwrap();
        let masked: Vec<f64> =
            (0..axis.len()).filter(|&i| !a.valid[i]).map(|i| axis.point(i)).collect();
        assert!(!masked.is_empty());
        assert!(masked.iter().any(|x| x.abs() < 0.1));
    }

    #[test]
    fn velocity_decomposition_examples() {
        assert_eq!(forward_backward(2.0, 0.5), (2.5, 1.5));
        assert_eq!(forward_backward(2.0, 0.0), (2.0, 2.0));
    }

    proptest! {
        #[test]
        fn forward_backward_reconstructs(v in -1e3f64..1e3, u in -1e3f64..1e3) {
            let (p, m) = forward_backward(v, u);
            prop_assert!(((p + m) / 2.0 - v).abs() <= 1e-12 * (1.0 + v.abs() + u.abs()));
            prop_assert!(((p - m) / 2.0 - u).abs() <= 1e-12 * (1.0 + v.abs() + u.abs()));
        }

        #[test]
        fn round_trip_up_to_global_phase(k in -2.0f64..2.0, x0 in -1.0f64..1.0, c1 in -50.0f64..50.0, c2 in -50.0f64..50.0) {
            let axis = Axis::cartesian(-6.0, 6.0, 241).unwrap();
            let v = axis.points().iter()
                .map(|x| Complex64::from_polar((-(x - x0).powi(2) / 2.0).exp(), k * x + 0.3))
                .collect();
            let psi = WavefunctionGrid::new(axis.clone(), v, 0.0).unwrap();
            let mut a = actions_from_wavefunction(&psi, 1.0, NodePolicy::Reject).unwrap();
            let back = wavefunction_from_actions(&a, 1.0, 0.0).unwrap();
            for (p, q) in psi.values().iter().zip(back.values()) {
                prop_assert!((p - q).norm() < 1e-12);
            }
            a.s1.iter_mut().for_each(|s| *s += c1);
            a.s2.iter_mut().for_each(|s| *s += c2);
            let shifted = wavefunction_from_actions(&a, 1.0, 0.0).unwrap();
            let g = Complex64::from_polar(1.0, c1);
            for (p, q) in psi.values().iter().zip(shifted.values()) {
                prop_assert!((p.norm() - q.norm()).abs() < 1e-14);
                prop_assert!((p * g - q).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn gaussian_from_quadratic_action() {
        let axis = Axis::cartesian(-6.0, 6.0, 121).unwrap();
        let a = ActionFields {
            axis: axis.clone(),
            s1: vec![0.0; 121],
            s2: axis.points().iter().map(|x| x * x / 2.0).collect(),
            valid: vec![true; 121],
        };
        let psi = wavefunction_from_actions(&a, 1.0, 0.0).unwrap();
        let expect = gaussian(&axis);
        for (p, q) in psi.values().iter().zip(expect.values()) {
            assert!((p - q).norm() < 1e-14);
        }
    }
}
