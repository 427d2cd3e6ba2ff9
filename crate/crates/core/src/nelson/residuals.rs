//! Continuity, Madelung and integration-by-parts residuals.
//!
//! Writing `ψ = exp(iS₁/ħ − S₂/ħ)` into the Schrödinger equation and
//! splitting real and imaginary parts gives the exact pair
//!
//! ```text
//! ∂S₂/∂t = (ħ/2m)∇²S₁ − (1/m)∇S₁·∇S₂
//! −∂S₁/∂t = (∇S₁)²/2m − (∇S₂)²/2m + (ħ/2m)∇²S₂ + U
//! ```
//!
//! The variant `−∂S₁/∂t = (∇S₁)²/2m + (∇S₂)²/2m + U` follows from the second
//! line only after replacing `(ħ/2m)∇²S₂` by `(1/m)(∇S₂)²`, an equality that
//! holds under the ρ-weighted integral but not pointwise.

use super::{actions_from_wavefunction, NodePolicy, WavefunctionGrid, STENCIL_RADIUS};
use crate::error::{Error, Result};
use crate::grid::{erode_mask, Axis, AxisKind};
use serde::Serialize;
use std::f64::consts::PI;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ResidualNorms {
    /// `(∫ r² dV)^{1/2}` over the valid domain.
    pub l2: f64,
    pub linf: f64,
    /// `∫ ρ r dV / ∫ ρ dV` over the valid domain.
    pub rho_weighted_mean: f64,
    pub grid_h: f64,
    pub dt: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ResidualField {
    pub values: Vec<f64>,
    pub norms: ResidualNorms,
}

fn residual_field(axis: &Axis, values: Vec<f64>, rho: &[f64], mask: &[bool], dt: f64) -> ResidualField {
    let sq: Vec<f64> = values.iter().map(|v| v * v).collect();
    let l2 = axis.integrate_masked(&sq, mask).max(0.0).sqrt();
    let linf = values
        .iter()
        .zip(mask)
        .filter(|(_, &m)| m)
        .map(|(v, _)| v.abs())
        .fold(0.0, f64::max);
    let weighted: Vec<f64> = values.iter().zip(rho).map(|(v, r)| v * r).collect();
    let rho_weighted_mean = axis.integrate_masked(&weighted, mask) / axis.integrate_masked(rho, mask);
    ResidualField {
        values,
        norms: ResidualNorms { l2, linf, rho_weighted_mean, grid_h: axis.spacing(), dt },
    }
}

/// Three slices around the middle of the series and the uniform step.
fn centered_slices(
    series: &[WavefunctionGrid],
) -> Result<(&WavefunctionGrid, &WavefunctionGrid, &WavefunctionGrid, f64)> {
    if series.len() < 3 {
        return Err(Error::Shape(format!("need at least 3 time slices, got {}", series.len())));
    }
    let axis = series[0].axis();
    if let Some(s) = series.iter().find(|s| !s.axis().same_as(axis)) {
        return Err(Error::Shape(format!("slice at t = {} is on a different grid", s.time())));
    }
    let c = series.len() / 2;
    let (prev, cur, next) = (&series[c - 1], &series[c], &series[c + 1]);
    let dt = next.time() - cur.time();
    let dt_back = cur.time() - prev.time();
    if !(dt > 0.0) || (dt - dt_back).abs() > 1e-9 * dt {
        return Err(Error::Shape("time slices must be uniformly spaced and increasing".into()));
    }
    Ok((prev, cur, next, dt))
}

#[derive(Debug, Clone, PartialEq)]
pub struct ContinuityReport {
    /// `∂ρ/∂t + ∇·(Vρ)`.
    pub residual: ResidualField,
    /// `∇·(Uρ)`: the right-hand side of the forward/backward variants (up to
    /// the formal ±i).
    pub variant_rhs: Vec<f64>,
    /// Largest `|(variant LHS − plain LHS) ∓ ∇·(Uρ)|` over both variants.
    pub variant_identity_defect: f64,
    pub variant_rhs_l2: f64,
    pub mask: Vec<bool>,
}

/// Continuity residual at the middle slice, with centred time differences.
pub fn continuity_residual(
    series: &[WavefunctionGrid],
    mass: f64,
    hbar: f64,
    policy: NodePolicy,
) -> Result<ContinuityReport> {
    let (prev, cur, next, dt) = centered_slices(series)?;
    let axis = cur.axis();
    let a = actions_from_wavefunction(cur, hbar, policy)?;
    let mask = a.interior_mask();
    let rho = cur.density();
    let (rho_p, rho_m) = (next.density(), prev.density());
    let rho_t: Vec<f64> = rho_p.iter().zip(&rho_m).map(|(p, m)| (p - m) / (2.0 * dt)).collect();
    let v: Vec<f64> = axis.gradient(&a.s1).iter().map(|g| g / mass).collect();
    let u: Vec<f64> = axis.gradient(&a.s2).iter().map(|g| g / mass).collect();
    let flux = |vel: &dyn Fn(usize) -> f64| -> Vec<f64> { (0..rho.len()).map(|i| vel(i) * rho[i]).collect() };
    let div_v = axis.divergence(&flux(&|i| v[i]));
    let div_u = axis.divergence(&flux(&|i| u[i]));
    let div_fwd = axis.divergence(&flux(&|i| v[i] + u[i]));
    let div_bwd = axis.divergence(&flux(&|i| v[i] - u[i]));

    let plain: Vec<f64> = rho_t.iter().zip(&div_v).map(|(t, d)| t + d).collect();
    let mut defect: f64 = 0.0;
    for i in 0..rho.len() {
        let fwd = rho_t[i] + div_fwd[i];
        let bwd = rho_t[i] + div_bwd[i];
        defect = defect.max((fwd - plain[i] - div_u[i]).abs());
        defect = defect.max((bwd - plain[i] + div_u[i]).abs());
    }
    let rhs_sq: Vec<f64> = div_u.iter().map(|d| d * d).collect();
    let variant_rhs_l2 = axis.integrate_masked(&rhs_sq, &mask).sqrt();
    Ok(ContinuityReport {
        residual: residual_field(axis, plain, &rho, &mask, dt),
        variant_rhs: div_u,
        variant_identity_defect: defect,
        variant_rhs_l2,
        mask,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct MadelungReport {
    /// Imaginary part of the Schrödinger equation (log-amplitude transport).
    pub aa1: ResidualField,
    /// Real part (quantum Hamilton–Jacobi with the `∇²S₂` term).
    pub aa2: ResidualField,
    /// Variant with `+(∇S₂)²/2m` and no `∇²S₂` term.
    pub ag1: ResidualField,
    pub mask: Vec<bool>,
}

pub fn madelung_residuals(
    series: &[WavefunctionGrid],
    potential: &[f64],
    mass: f64,
    hbar: f64,
    policy: NodePolicy,
) -> Result<MadelungReport> {
    let (prev, cur, next, dt) = centered_slices(series)?;
    let axis = cur.axis();
    axis.check_len("potential", potential.len())?;
    let a = actions_from_wavefunction(cur, hbar, policy)?;
    let mask = a.interior_mask();
    let rho = cur.density();
    let n = rho.len();
    let (pv, nv) = (prev.values(), next.values());
    let s1_t: Vec<f64> = (0..n).map(|i| hbar * (nv[i] * pv[i].conj()).arg() / (2.0 * dt)).collect();
    let s2_t: Vec<f64> = (0..n)
        .map(|i| {
            let (lp, lm) = (nv[i].norm().max(f64::MIN_POSITIVE).ln(), pv[i].norm().max(f64::MIN_POSITIVE).ln());
            -hbar * (lp - lm) / (2.0 * dt)
        })
        .collect();
    let g1 = axis.gradient(&a.s1);
    let g2 = axis.gradient(&a.s2);
    let l1 = axis.laplacian(&a.s1);
    let l2 = axis.laplacian(&a.s2);
    let k = hbar / (2.0 * mass);
    let mut aa1 = vec![0.0; n];
    let mut aa2 = vec![0.0; n];
    let mut ag1 = vec![0.0; n];
    for i in 0..n {
        aa1[i] = s2_t[i] - (k * l1[i] - g1[i] * g2[i] / mass);
        let kin1 = g1[i] * g1[i] / (2.0 * mass);
        let kin2 = g2[i] * g2[i] / (2.0 * mass);
        aa2[i] = -s1_t[i] - (kin1 - kin2 + k * l2[i] + potential[i]);
        ag1[i] = -s1_t[i] - (kin1 + kin2 + potential[i]);
    }
    Ok(MadelungReport {
        aa1: residual_field(axis, aa1, &rho, &mask, dt),
        aa2: residual_field(axis, aa2, &rho, &mask, dt),
        ag1: residual_field(axis, ag1, &rho, &mask, dt),
        mask,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct IntegralIdentityReport {
    /// `∫ ∇²S₂ e^{−2S₂/ħ} dV`.
    pub lhs: f64,
    /// `(2/ħ) ∫ (∇S₂)² e^{−2S₂/ħ} dV`.
    pub rhs: f64,
    /// `max |∇²S₂ − (2/ħ)(∇S₂)²|`.
    pub pointwise_af2_residual: f64,
    /// Largest `|e^{−2S₂/ħ} ∇S₂|·area` at the outer boundary.
    pub boundary_flux: f64,
    /// The surface term is not negligible; `lhs ≠ rhs` is then expected.
    pub surface_warning: bool,
}

pub const BOUNDARY_FLUX_LIMIT: f64 = 1e-12;

/// Both sides are integrated independently. The weight is taken relative to
/// `min S₂`, which scales both sides by the same positive constant.
pub fn integral_identity_check(axis: &Axis, s2: &[f64], hbar: f64) -> Result<IntegralIdentityReport> {
    axis.check_len("S2", s2.len())?;
    if !(hbar > 0.0) {
        return Err(Error::Domain(format!("hbar must be positive, got {hbar}")));
    }
    if s2.iter().any(|s| !s.is_finite()) {
        return Err(Error::Domain("S2 must be finite".into()));
    }
    let s_min = s2.iter().copied().fold(f64::INFINITY, f64::min);
    let w: Vec<f64> = s2.iter().map(|s| (-2.0 * (s - s_min) / hbar).exp()).collect();
    let g = axis.gradient(s2);
    let lap = axis.laplacian(s2);
    let lhs_f: Vec<f64> = lap.iter().zip(&w).map(|(l, w)| l * w).collect();
    let rhs_f: Vec<f64> = g.iter().zip(&w).map(|(g, w)| 2.0 / hbar * g * g * w).collect();
    let lhs = axis.integrate(&lhs_f);
    let rhs = axis.integrate(&rhs_f);
    let interior = erode_mask(&vec![true; s2.len()], STENCIL_RADIUS);
    let pointwise_af2_residual = (0..s2.len())
        .filter(|&i| interior[i])
        .map(|i| (lap[i] - 2.0 / hbar * g[i] * g[i]).abs())
        .fold(0.0, f64::max);
    let last = s2.len() - 1;
    let boundary_flux = match axis.kind() {
        AxisKind::Cartesian => (w[0] * g[0]).abs().max((w[last] * g[last]).abs()),
        AxisKind::Radial => 4.0 * PI * axis.last().powi(2) * (w[last] * g[last]).abs(),
    };
    Ok(IntegralIdentityReport {
        lhs,
        rhs,
        pointwise_af2_residual,
        boundary_flux,
        surface_warning: boundary_flux > BOUNDARY_FLUX_LIMIT,
    })
}
