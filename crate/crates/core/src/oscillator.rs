//! Radiation-damped oscillator driven by the vacuum field.
//!
//! Equation of motion after order reduction of the radiation-reaction term:
//!
//! ```text
//! ẍ + τω₀² ẋ + ω₀² x = −(e/m) E(t),    τ = 2e²/(3mc³)
//! ```
//!
//! The steady state is evaluated in the dipole approximation (field taken at
//! the origin). With `z = a* e^{iωt}` and `s` the weighted field scale of a
//! mode, the closed forms are
//!
//! ```text
//! x = −(e/m) 2s Re(χ z) ε
//! P = −e 2s (ω₀²/ω) Re(i χ z) ε,        χ(ω) = 1/(ω₀² − ω² + iτω³)
//! ```
//!
//! `P` is the ω₀²-numerator momentum; `m ẋ − (e/c)A` carries the numerator
//! `ω₀² + iτω³` instead, a relative difference of order `τω³/ω₀²`.
//!
//! Treating each amplitude pair as a unit commutator `[a, a⁺] = 1` gives
//!
//! ```text
//! [P_j, x_k] = −i Σ_modes 2 (e²/m) s² (ω₀²/ω) |χ|² ε_j ε_k
//! ```
//!
//! whose continuum limit is `−iħ δ_jk` for a narrow line.
//! [`commutator_mode_sum`] returns one third of the trace of that sum.

use crate::error::{ensure_finite, Error, Result};
use crate::rng::derive_seed;
use crate::units::cgs;
use crate::vacuum_field::{build_mode_set, ModeSamplingConfig, ModeSet};
use crate::vec3::Vec3;
use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;
use std::io::Write;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OscillatorParams {
    pub charge: f64,
    pub mass: f64,
    pub natural_frequency: f64,
    pub light_speed: f64,
    pub hbar: f64,
    pub radiation_tau: f64,
}

impl OscillatorParams {
    /// Explicit parameter set; τ is taken as given.
    pub fn new(
        charge: f64,
        mass: f64,
        natural_frequency: f64,
        light_speed: f64,
        hbar: f64,
        radiation_tau: f64,
    ) -> Result<Self> {
        for (name, v) in [
            ("mass", mass),
            ("natural_frequency", natural_frequency),
            ("light_speed", light_speed),
            ("hbar", hbar),
        ] {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::Domain(format!("{name} must be positive, got {v}")));
            }
        }
        ensure_finite("charge", charge)?;
        if !(radiation_tau.is_finite() && radiation_tau >= 0.0) {
            return Err(Error::Domain(format!("radiation_tau must be >= 0, got {radiation_tau}")));
        }
        Ok(Self { charge, mass, natural_frequency, light_speed, hbar, radiation_tau })
    }

    /// τ derived from the charge, mass and light speed.
    pub fn from_constants(
        charge: f64,
        mass: f64,
        light_speed: f64,
        hbar: f64,
        natural_frequency: f64,
    ) -> Result<Self> {
        let tau = radiation_time_constant(charge, mass, light_speed)?;
        Self::new(charge, mass, natural_frequency, light_speed, hbar, tau)
    }

    /// ħ = m = ω₀ = c = 1 with free dimensionless damping `τω₀`; the charge
    /// is fixed by `τ = 2e²/(3mc³)`.
    pub fn natural(damping: f64) -> Result<Self> {
        if !(damping.is_finite() && damping >= 0.0) {
            return Err(Error::Domain(format!("damping must be >= 0, got {damping}")));
        }
        Self::new((1.5 * damping).sqrt(), 1.0, 1.0, 1.0, 1.0, damping)
    }

    /// Electron in Gaussian-CGS units bound at `omega0` [1/s].
    pub fn gaussian_cgs_electron(omega0: f64) -> Result<Self> {
        Self::from_constants(
            cgs::ELEMENTARY_CHARGE,
            cgs::ELECTRON_MASS,
            cgs::LIGHT_SPEED,
            cgs::HBAR,
            omega0,
        )
    }

    /// Dimensionless damping `τω₀`.
    pub fn damping(&self) -> f64 {
        self.radiation_tau * self.natural_frequency
    }

    /// Time-domain damping rate `τω₀²`, also the full width of the line.
    pub fn linewidth(&self) -> f64 {
        self.radiation_tau * self.natural_frequency.powi(2)
    }

    fn check_spectral_validity(&self) -> Result<()> {
        if self.damping() >= 1.0 {
            return Err(Error::ModelValidity(format!(
                "spectral solution needs tau*omega0 < 1, got {}",
                self.damping()
            )));
        }
        Ok(())
    }

    fn check_coverage(&self, ms: &ModeSet) -> Result<()> {
        if ms.is_empty() {
            return Ok(());
        }
        if !ms.covers(self.natural_frequency) {
            return Err(Error::Coverage(format!(
                "mode cutoffs [{}, {}] exclude omega0 = {}",
                ms.cutoffs.0, ms.cutoffs.1, self.natural_frequency
            )));
        }
        Ok(())
    }
}

/// `τ = 2e²/(3mc³)`.
pub fn radiation_time_constant(charge: f64, mass: f64, light_speed: f64) -> Result<f64> {
    if !(mass.is_finite() && mass > 0.0) {
        return Err(Error::Domain(format!("mass must be positive, got {mass}")));
    }
    if !(light_speed.is_finite() && light_speed > 0.0) {
        return Err(Error::Domain(format!("light speed must be positive, got {light_speed}")));
    }
    if !charge.is_finite() || charge == 0.0 {
        return Err(Error::Domain(format!("charge must be nonzero and finite, got {charge}")));
    }
    Ok(2.0 * charge * charge / (3.0 * mass * light_speed.powi(3)))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Susceptibility {
    pub frequency: f64,
    /// `1/(ω₀² − ω² + iτω³)`, the response to the `e^{+iωt}` component.
    pub value: Complex64,
}

impl Susceptibility {
    /// The branch multiplying `e^{−iωt}`.
    pub fn conjugate_branch(&self) -> Complex64 {
        self.value.conj()
    }
}

pub fn susceptibility(omega: f64, params: &OscillatorParams) -> Result<Susceptibility> {
    if !(omega.is_finite() && omega >= 0.0) {
        return Err(Error::Domain(format!("frequency must be >= 0, got {omega}")));
    }
    let denom = Complex64::new(
        params.natural_frequency.powi(2) - omega * omega,
        params.radiation_tau * omega.powi(3),
    );
    if denom.norm() == 0.0 {
        return Err(Error::Domain(format!("undamped resonance at omega = {omega}")));
    }
    Ok(Susceptibility { frequency: omega, value: denom.inv() })
}

fn chi(omega: f64, params: &OscillatorParams) -> Complex64 {
    Complex64::new(
        params.natural_frequency.powi(2) - omega * omega,
        params.radiation_tau * omega.powi(3),
    )
    .inv()
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub positions: Vec<Vec3>,
    pub momenta: Vec<Vec3>,
}

impl Trajectory {
    pub fn new(times: Vec<f64>, positions: Vec<Vec3>, momenta: Vec<Vec3>) -> Result<Self> {
        if times.len() != positions.len() || times.len() != momenta.len() {
            return Err(Error::Shape(format!(
                "trajectory columns differ in length: {} times, {} positions, {} momenta",
                times.len(),
                positions.len(),
                momenta.len()
            )));
        }
        if times.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::Domain("trajectory times must increase strictly".into()));
        }
        Ok(Self { times, positions, momenta })
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    /// Columns `t,x,y,z,px,py,pz`.
    pub fn write_csv<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "t,x,y,z,px,py,pz")?;
        for i in 0..self.len() {
            let (x, p) = (self.positions[i], self.momenta[i]);
            let row = [self.times[i], x.x, x.y, x.z, p.x, p.y, p.z];
            writeln!(w, "{}", crate::output::csv_row(&row))?;
        }
        Ok(())
    }
}

/// Per-mode complex coefficients: `x(t) = Σ Re(cx e^{iωt}) ε` and likewise `p`.
struct SteadyStateCoefficients {
    omega: Vec<f64>,
    pol: Vec<Vec3>,
    cx: Vec<Complex64>,
    cp: Vec<Complex64>,
}

impl SteadyStateCoefficients {
    fn new(ms: &ModeSet, params: &OscillatorParams, exact_numerator: bool) -> Self {
        let n = ms.len();
        let mut out = Self {
            omega: Vec::with_capacity(n),
            pol: Vec::with_capacity(n),
            cx: Vec::with_capacity(n),
            cp: Vec::with_capacity(n),
        };
        let (e, m, w0sq) = (params.charge, params.mass, params.natural_frequency.powi(2));
        for mode in &ms.modes {
            let w = mode.frequency;
            let s = mode.field_scale * mode.weight.sqrt();
            let c = chi(w, params) * mode.amplitude.conj();
            let numerator = if exact_numerator {
                Complex64::new(w0sq, params.radiation_tau * w.powi(3))
            } else {
                Complex64::new(w0sq, 0.0)
            };
            out.omega.push(w);
            out.pol.push(mode.polarization);
            out.cx.push(c * (-2.0 * s * e / m));
            out.cp.push(Complex64::i() * numerator * c * (-2.0 * s * e / w));
        }
        out
    }

    fn at(&self, t: f64) -> (Vec3, Vec3) {
        let (mut x, mut p) = (Vec3::ZERO, Vec3::ZERO);
        for k in 0..self.omega.len() {
            let rot = Complex64::from_polar(1.0, self.omega[k] * t);
            x += self.pol[k] * (self.cx[k] * rot).re;
            p += self.pol[k] * (self.cp[k] * rot).re;
        }
        (x, p)
    }
}

/// Closed-form forced steady state sampled at `times`.
pub fn steady_state_solution(
    ms: &ModeSet,
    params: &OscillatorParams,
    times: &[f64],
) -> Result<Trajectory> {
    params.check_spectral_validity()?;
    for &t in times {
        ensure_finite("time", t)?;
    }
    let coeffs = SteadyStateCoefficients::new(ms, params, false);
    let (positions, momenta) = times.iter().map(|&t| coeffs.at(t)).unzip();
    Trajectory::new(times.to_vec(), positions, momenta)
}

/// Canonical momentum `m ẋ − (e/c)A` of the closed form, exact numerator.
pub fn steady_state_canonical_momentum(
    ms: &ModeSet,
    params: &OscillatorParams,
    times: &[f64],
) -> Result<Vec<Vec3>> {
    params.check_spectral_validity()?;
    let coeffs = SteadyStateCoefficients::new(ms, params, true);
    Ok(times.iter().map(|&t| coeffs.at(t).1).collect())
}

/// External field acting on the charge.
pub trait Drive: Sync {
    fn electric(&self, t: f64) -> Vec3;
    fn vector_potential(&self, _t: f64) -> Vec3 {
        Vec3::ZERO
    }
}

/// The vacuum field sampled at the origin (dipole approximation).
impl Drive for ModeSet {
    fn electric(&self, t: f64) -> Vec3 {
        self.electric_unchecked(Vec3::ZERO, t)
    }
    fn vector_potential(&self, t: f64) -> Vec3 {
        self.vector_potential_unchecked(Vec3::ZERO, t)
    }
}

#[derive(Debug, Clone, Copy)]
pub struct NoField;

impl Drive for NoField {
    fn electric(&self, _t: f64) -> Vec3 {
        Vec3::ZERO
    }
}

#[derive(Debug, Clone, Copy)]
pub struct ConstantField(pub Vec3);

impl Drive for ConstantField {
    fn electric(&self, _t: f64) -> Vec3 {
        self.0
    }
}

#[derive(Debug, Clone, Copy)]
pub struct IntegrationOptions {
    pub dt: f64,
    pub duration: f64,
    /// Store every n-th step (the initial state is always stored).
    pub record_every: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum IntegrationStatus {
    Ok,
    /// `dt·ω₀ > 0.1`: the step under-resolves the natural period.
    CoarseStepWarning,
}

#[derive(Debug, Clone)]
pub struct Integration {
    pub trajectory: Trajectory,
    pub status: IntegrationStatus,
    /// State after the last step, recorded or not.
    pub final_position: Vec3,
    pub final_velocity: Vec3,
}

/// Classical fourth-order Runge–Kutta on the order-reduced equation.
/// Stored momenta are canonical, `m v − (e/c) A(t)`.
pub fn integrate_equation_of_motion<D: Drive + ?Sized>(
    params: &OscillatorParams,
    drive: &D,
    x0: Vec3,
    v0: Vec3,
    opts: &IntegrationOptions,
) -> Result<Integration> {
    let IntegrationOptions { dt, duration, record_every } = *opts;
    if !(dt.is_finite() && dt > 0.0) {
        return Err(Error::Domain(format!("dt must be positive, got {dt}")));
    }
    if !(duration.is_finite() && duration > dt) {
        return Err(Error::Domain(format!("duration must exceed dt, got {duration}")));
    }
    if record_every == 0 {
        return Err(Error::Domain("record_every must be >= 1".into()));
    }
    if !(x0.is_finite() && v0.is_finite()) {
        return Err(Error::Domain("initial state must be finite".into()));
    }
    let status = if dt * params.natural_frequency > 0.1 {
        IntegrationStatus::CoarseStepWarning
    } else {
        IntegrationStatus::Ok
    };
    let gamma = params.linewidth();
    let w0sq = params.natural_frequency.powi(2);
    let q_over_m = params.charge / params.mass;
    let accel = |t: f64, x: Vec3, v: Vec3| -> Vec3 {
        -gamma * v - w0sq * x - q_over_m * drive.electric(t)
    };
    let momentum = |t: f64, v: Vec3| -> Vec3 {
        params.mass * v - (params.charge / params.light_speed) * drive.vector_potential(t)
    };

    let steps = (duration / dt).round() as usize;
    let capacity = steps / record_every + 1;
    let (mut times, mut xs, mut ps) =
        (Vec::with_capacity(capacity), Vec::with_capacity(capacity), Vec::with_capacity(capacity));
    let (mut x, mut v) = (x0, v0);
    times.push(0.0);
    xs.push(x);
    ps.push(momentum(0.0, v));
    for n in 0..steps {
        let t = n as f64 * dt;
        let k1x = v;
        let k1v = accel(t, x, v);
        let k2x = v + 0.5 * dt * k1v;
        let k2v = accel(t + 0.5 * dt, x + 0.5 * dt * k1x, k2x);
        let k3x = v + 0.5 * dt * k2v;
        let k3v = accel(t + 0.5 * dt, x + 0.5 * dt * k2x, k3x);
        let k4x = v + dt * k3v;
        let k4v = accel(t + dt, x + dt * k3x, k4x);
        x += (dt / 6.0) * (k1x + 2.0 * k2x + 2.0 * k3x + k4x);
        v += (dt / 6.0) * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);
        if (n + 1) % record_every == 0 {
            let t1 = (n + 1) as f64 * dt;
            times.push(t1);
            xs.push(x);
            ps.push(momentum(t1, v));
        }
    }
    Ok(Integration {
        trajectory: Trajectory::new(times, xs, ps)?,
        status,
        final_position: x,
        final_velocity: v,
    })
}

/// Commutator tensor `C_jk` with `[P_j, x_k] = −i C_jk`.
pub fn commutator_tensor(params: &OscillatorParams, ms: &ModeSet) -> Result<[[f64; 3]; 3]> {
    params.check_spectral_validity()?;
    params.check_coverage(ms)?;
    let mut c = [[0.0; 3]; 3];
    let w0sq = params.natural_frequency.powi(2);
    let q2_over_m = params.charge * params.charge / params.mass;
    for mode in &ms.modes {
        let w = mode.frequency;
        let s2 = mode.field_scale * mode.field_scale * mode.weight;
        let k = 2.0 * q2_over_m * s2 * (w0sq / w) * chi(w, params).norm_sqr();
        let e = mode.polarization.to_array();
        for j in 0..3 {
            for l in 0..3 {
                c[j][l] += k * e[j] * e[l];
            }
        }
    }
    Ok(c)
}

/// Isotropic commutator value `tr(C)/3`; its continuum limit is ħ.
pub fn commutator_mode_sum(params: &OscillatorParams, ms: &ModeSet) -> Result<f64> {
    params.check_spectral_validity()?;
    params.check_coverage(ms)?;
    let w0sq = params.natural_frequency.powi(2);
    let q2_over_m = params.charge * params.charge / params.mass;
    Ok(ms
        .modes
        .iter()
        .map(|mode| {
            let w = mode.frequency;
            let s2 = mode.field_scale * mode.field_scale * mode.weight;
            2.0 * q2_over_m * s2 * (w0sq / w) * chi(w, params).norm_sqr()
                * mode.polarization.norm_squared()
        })
        .sum::<f64>()
        / 3.0)
}

/// Exact phase average of the per-component `⟨x²⟩` and `⟨p²⟩` for a fixed
/// set of frequencies, polarizations and weights.
pub fn phase_averaged_moments(params: &OscillatorParams, ms: &ModeSet) -> Result<(f64, f64)> {
    params.check_spectral_validity()?;
    let (e, m, w0sq) = (params.charge, params.mass, params.natural_frequency.powi(2));
    let (mut x2, mut p2) = (0.0, 0.0);
    for mode in &ms.modes {
        let s2 = mode.field_scale * mode.field_scale * mode.weight;
        let chi2 = chi(mode.frequency, params).norm_sqr();
        // ⟨(2 Re(c e^{iφ}))²⟩ = 2|c|², |a|² = 1/2
        x2 += (e / m).powi(2) * s2 * chi2;
        p2 += (e * w0sq / mode.frequency).powi(2) * s2 * chi2;
    }
    Ok((x2 / 3.0, p2 / 3.0))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Averaging {
    /// Independent mode-set draws, each sampled at `time_samples` instants
    /// `sample_spacing` apart.
    Ensemble { realizations: usize, time_samples: usize, sample_spacing: f64 },
    /// One mode set sampled at `samples` instants over `window`.
    Time { samples: usize, window: f64 },
}

impl Averaging {
    /// Ensemble averaging with instants ten line-coherence times apart.
    pub fn ensemble(params: &OscillatorParams, realizations: usize, time_samples: usize) -> Self {
        Averaging::Ensemble {
            realizations,
            time_samples,
            sample_spacing: 10.0 / params.linewidth(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DispersionSummary {
    pub x2: f64,
    pub p2: f64,
    pub product: f64,
    pub n_modes: usize,
    pub n_realizations: usize,
    pub seed: u64,
}

/// Zero-point second moments (per Cartesian component) of the steady state.
///
/// Realizations are seeded by `derive_seed(sampling.seed, index)` and reduced
/// in index order, so the result does not depend on the worker count.
pub fn oscillator_dispersions(
    params: &OscillatorParams,
    sampling: &ModeSamplingConfig,
    averaging: Averaging,
) -> Result<DispersionSummary> {
    params.check_spectral_validity()?;
    sampling.validate()?;
    if !(sampling.omega_min < params.natural_frequency && params.natural_frequency < sampling.omega_max) {
        return Err(Error::Coverage(format!(
            "mode cutoffs [{}, {}] exclude omega0 = {}",
            sampling.omega_min, sampling.omega_max, params.natural_frequency
        )));
    }
    let sample = |ms: &ModeSet, times: &[f64]| -> (f64, f64) {
        let coeffs = SteadyStateCoefficients::new(ms, params, false);
        let (mut x2, mut p2) = (0.0, 0.0);
        for &t in times {
            let (x, p) = coeffs.at(t);
            x2 += x.norm_squared() / 3.0;
            p2 += p.norm_squared() / 3.0;
        }
        (x2 / times.len() as f64, p2 / times.len() as f64)
    };
    let (x2, p2, n_real) = match averaging {
        Averaging::Ensemble { realizations, time_samples, sample_spacing } => {
            if realizations == 0 || time_samples == 0 {
                return Err(Error::Domain("need at least one realization and one time sample".into()));
            }
            let times: Vec<f64> = (0..time_samples).map(|k| k as f64 * sample_spacing).collect();
            let per_realization: Vec<(f64, f64)> = (0..realizations)
                .into_par_iter()
                .map(|r| {
                    let cfg = ModeSamplingConfig {
                        seed: derive_seed(sampling.seed, r as u64),
                        ..sampling.clone()
                    };
                    build_mode_set(&cfg).map(|ms| sample(&ms, &times))
                })
                .collect::<Result<_>>()?;
            let n = per_realization.len() as f64;
            let x2 = per_realization.iter().map(|s| s.0).sum::<f64>() / n;
            let p2 = per_realization.iter().map(|s| s.1).sum::<f64>() / n;
            (x2, p2, realizations)
        }
        Averaging::Time { samples, window } => {
            if samples == 0 || !(window > 0.0) {
                return Err(Error::Domain("time averaging needs samples > 0 and window > 0".into()));
            }
            let ms = build_mode_set(sampling)?;
            let times: Vec<f64> = (0..samples).map(|k| k as f64 * window / samples as f64).collect();
            let chunks: Vec<(f64, f64)> = times
                .par_chunks(64)
                .map(|c| {
                    let (x, p) = sample(&ms, c);
                    (x * c.len() as f64, p * c.len() as f64)
                })
                .collect();
            let x2 = chunks.iter().map(|c| c.0).sum::<f64>() / samples as f64;
            let p2 = chunks.iter().map(|c| c.1).sum::<f64>() / samples as f64;
            (x2, p2, 1)
        }
    };
    Ok(DispersionSummary {
        x2,
        p2,
        product: x2 * p2,
        n_modes: sampling.count,
        n_realizations: n_real,
        seed: sampling.seed,
    })
}

/// Narrow-line sampling centred on ω₀ with the line's half width.
pub fn resonance_sampling(
    params: &OscillatorParams,
    count: usize,
    omega_min: f64,
    omega_max: f64,
    seed: u64,
) -> ModeSamplingConfig {
    ModeSamplingConfig {
        count,
        omega_min,
        omega_max,
        law: crate::vacuum_field::SamplingLaw::ResonanceStratified {
            center: params.natural_frequency,
            half_width: 0.5 * params.linewidth(),
        },
        seed,
        light_speed: params.light_speed,
        hbar: params.hbar,
        volume: 1.0,
    }
}
