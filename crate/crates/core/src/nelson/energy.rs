use super::{actions_from_wavefunction, NodePolicy, WavefunctionGrid};
use crate::error::{Error, Result};
use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EnergySplit {
    /// `∫ (m V²/2) ρ dV`.
    pub t_current: f64,
    /// `∫ (m U²/2) ρ dV`.
    pub t_osmotic: f64,
    pub v_pot: f64,
    pub total: f64,
    /// `Re ∫ ψ* Ĥ ψ dV` from the Laplacian of ψ itself.
    pub hamiltonian: f64,
}

impl EnergySplit {
    pub fn gap(&self) -> f64 {
        self.total - self.hamiltonian
    }
}

/// Expectation of the energy split into current, osmotic and potential
/// parts, with `⟨Ĥ⟩` computed independently for comparison.
pub fn energy_split(
    psi: &WavefunctionGrid,
    potential: &[f64],
    mass: f64,
    hbar: f64,
    policy: NodePolicy,
) -> Result<EnergySplit> {
    let axis = psi.axis();
    axis.check_len("potential", potential.len())?;
    if !(mass > 0.0) {
        return Err(Error::Domain(format!("mass must be positive, got {mass}")));
    }
    let a = actions_from_wavefunction(psi, hbar, policy)?;
    let rho = psi.density();
    let mask = match policy {
        NodePolicy::Reject => vec![true; rho.len()],
        NodePolicy::Mask { .. } => a.interior_mask(),
    };
    let g1 = axis.gradient(&a.s1);
    let g2 = axis.gradient(&a.s2);
    let integrate = |f: &dyn Fn(usize) -> f64| {
        let vals: Vec<f64> = (0..rho.len()).map(f).collect();
        axis.integrate_masked(&vals, &mask)
    };
    let t_current = integrate(&|i| g1[i] * g1[i] / (2.0 * mass) * rho[i]);
    let t_osmotic = integrate(&|i| g2[i] * g2[i] / (2.0 * mass) * rho[i]);
    let v_pot = integrate(&|i| potential[i] * rho[i]);

    let v = psi.values();
    let re: Vec<f64> = v.iter().map(|z| z.re).collect();
    let im: Vec<f64> = v.iter().map(|z| z.im).collect();
    let (lre, lim) = (axis.laplacian(&re), axis.laplacian(&im));
    let k = -hbar * hbar / (2.0 * mass);
    // Re(ψ* Ĥψ) = Re ψ·(Ĥψ)_re + Im ψ·(Ĥψ)_im
    let hamiltonian = integrate(&|i| {
        re[i] * (k * lre[i] + potential[i] * re[i]) + im[i] * (k * lim[i] + potential[i] * im[i])
    });
    Ok(EnergySplit { t_current, t_osmotic, v_pot, total: t_current + t_osmotic + v_pot, hamiltonian })
}
