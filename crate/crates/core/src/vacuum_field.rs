//! Random-phase synthesis of the zero-point electromagnetic field.
//!
//! The vacuum creation/annihilation pair of each mode is replaced by one
//! complex amplitude `a` with `|a| = 1/√2` and a uniform random phase `θ`,
//! so that a single mode contributes
//!
//! ```text
//! E(r, t) = 2|a| s cos(ωt − q·r − θ) ε
//! A(r, t) = −2|a| s (c/ω) sin(ωt − q·r − θ) ε
//! ```
//!
//! with `s = √(2πħω/V)`. The phase average of `|E|²` is `s²`, the symmetrized
//! vacuum value, and `E = −(1/c) ∂A/∂t` holds exactly.
//!
//! A sampled mode stands for `weight` continuum modes: with the sampling
//! density `p(ω)` of `N` draws and the two-polarization mode density
//! `ρ(ω) = Vω²/(π²c³)`, `weight = ρ(ω) / (N p(ω))`. Field evaluation scales
//! each mode by `√weight`, which turns mode sums into unbiased estimates of
//! the continuum frequency integrals.

use crate::error::{ensure_finite, Error, Result};
use crate::vec3::Vec3;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::{FRAC_1_SQRT_2, PI, TAU};
use std::io::Write;

const TRANSVERSE_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SamplingLaw {
    /// Frequencies uniform on `[ω_min, ω_max]`.
    Uniform,
    /// One frequency per equal-probability stratum of a Cauchy law centred on
    /// `center` with half width `half_width`, truncated to the cutoffs.
    ResonanceStratified { center: f64, half_width: f64 },
}

impl SamplingLaw {
    pub fn name(&self) -> &'static str {
        match self {
            SamplingLaw::Uniform => "uniform",
            SamplingLaw::ResonanceStratified { .. } => "stratified",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ModeSamplingConfig {
    pub count: usize,
    pub omega_min: f64,
    pub omega_max: f64,
    pub law: SamplingLaw,
    pub seed: u64,
    pub light_speed: f64,
    pub hbar: f64,
    /// Normalization volume `V = L³`.
    pub volume: f64,
}

impl ModeSamplingConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.omega_min.is_finite() && self.omega_max.is_finite())
            || self.omega_min <= 0.0
            || self.omega_min >= self.omega_max
        {
            return Err(Error::Config(format!(
                "mode cutoffs must satisfy 0 < omega_min < omega_max (got omega_min = {}, omega_max = {})",
                self.omega_min, self.omega_max
            )));
        }
        for (name, v) in [
            ("light_speed", self.light_speed),
            ("hbar", self.hbar),
            ("volume", self.volume),
        ] {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::Config(format!("{name} must be positive, got {v}")));
            }
        }
        if let SamplingLaw::ResonanceStratified { center, half_width } = self.law {
            if !(center.is_finite() && half_width.is_finite() && half_width > 0.0) {
                return Err(Error::Config(format!(
                    "stratified sampling needs a finite center and positive half width (got {center}, {half_width})"
                )));
            }
        }
        Ok(())
    }

    fn mode_density(&self, omega: f64) -> f64 {
        self.volume * omega * omega / (PI * PI * self.light_speed.powi(3))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Mode {
    pub wavevector: Vec3,
    pub frequency: f64,
    pub polarization: Vec3,
    pub amplitude: Complex64,
    /// `√(2πħω/V)`.
    pub field_scale: f64,
    /// Number of continuum modes this sample represents.
    pub weight: f64,
}

impl Mode {
    /// A unit-weight mode with `ω = c|q|`, `|a| = 1/√2` and the given phase.
    pub fn new(
        wavevector: Vec3,
        polarization: Vec3,
        phase: f64,
        light_speed: f64,
        hbar: f64,
        volume: f64,
    ) -> Result<Self> {
        let q = wavevector.norm();
        if !(q.is_finite() && q > 0.0) {
            return Err(Error::Domain(format!("wavevector must be nonzero and finite, got {q}")));
        }
        let polarization = polarization.normalized();
        if polarization.dot(wavevector).abs() > TRANSVERSE_TOL * q {
            return Err(Error::Domain("polarization is not transverse to the wavevector".into()));
        }
        let frequency = light_speed * q;
        Ok(Self {
            wavevector,
            frequency,
            polarization,
            amplitude: Complex64::from_polar(FRAC_1_SQRT_2, phase),
            field_scale: (2.0 * PI * hbar * frequency / volume).sqrt(),
            weight: 1.0,
        })
    }

    pub fn phase(&self) -> f64 {
        self.amplitude.arg()
    }

    fn effective_scale(&self) -> f64 {
        self.field_scale * self.weight.sqrt()
    }

    /// `a* e^{i(ωt − q·r)}`; the field is twice its real part.
    fn rotating_amplitude(&self, r: Vec3, t: f64) -> Complex64 {
        let phi = self.frequency * t - self.wavevector.dot(r);
        self.amplitude.conj() * Complex64::from_polar(1.0, phi)
    }

    pub fn electric_at(&self, r: Vec3, t: f64) -> Vec3 {
        let z = self.rotating_amplitude(r, t);
        self.polarization * (2.0 * self.effective_scale() * z.re)
    }

    pub fn vector_potential_at(&self, r: Vec3, t: f64, light_speed: f64) -> Vec3 {
        let z = self.rotating_amplitude(r, t);
        // 2 Re(i z) c/ω
        self.polarization * (-2.0 * self.effective_scale() * z.im * light_speed / self.frequency)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ModeSet {
    pub modes: Vec<Mode>,
    pub normalization_volume: f64,
    pub cutoffs: (f64, f64),
    pub seed: u64,
    pub light_speed: f64,
    pub hbar: f64,
}

impl ModeSet {
    /// Wrap hand-built modes; cutoffs are taken from their frequency range.
    pub fn from_modes(modes: Vec<Mode>, volume: f64, light_speed: f64, hbar: f64) -> Self {
        let lo = modes.iter().map(|m| m.frequency).fold(f64::INFINITY, f64::min);
        let hi = modes.iter().map(|m| m.frequency).fold(0.0, f64::max);
        Self {
            modes,
            normalization_volume: volume,
            cutoffs: (lo, hi),
            seed: 0,
            light_speed,
            hbar,
        }
    }

    pub fn len(&self) -> usize {
        self.modes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.modes.is_empty()
    }

    pub fn electric_field_at(&self, r: Vec3, t: f64) -> Result<Vec3> {
        check_point(r, t)?;
        Ok(self.electric_unchecked(r, t))
    }

    pub fn vector_potential_at(&self, r: Vec3, t: f64) -> Result<Vec3> {
        check_point(r, t)?;
        Ok(self.vector_potential_unchecked(r, t))
    }

    pub(crate) fn electric_unchecked(&self, r: Vec3, t: f64) -> Vec3 {
        let mut e = Vec3::ZERO;
        for m in &self.modes {
            e += m.electric_at(r, t);
        }
        e
    }

    pub(crate) fn vector_potential_unchecked(&self, r: Vec3, t: f64) -> Vec3 {
        let mut a = Vec3::ZERO;
        for m in &self.modes {
            a += m.vector_potential_at(r, t, self.light_speed);
        }
        a
    }

    /// Modes of both sets; fields add linearly.
    pub fn union(&self, other: &ModeSet) -> ModeSet {
        let mut modes = self.modes.clone();
        modes.extend(other.modes.iter().cloned());
        ModeSet {
            modes,
            normalization_volume: self.normalization_volume,
            cutoffs: (
                self.cutoffs.0.min(other.cutoffs.0),
                self.cutoffs.1.max(other.cutoffs.1),
            ),
            seed: self.seed,
            light_speed: self.light_speed,
            hbar: self.hbar,
        }
    }

    /// Rotate every amplitude by the same phase.
    pub fn with_global_phase_shift(&self, shift: f64) -> ModeSet {
        let rot = Complex64::from_polar(1.0, shift);
        let mut out = self.clone();
        for m in &mut out.modes {
            m.amplitude *= rot;
        }
        out
    }

    pub fn covers(&self, omega: f64) -> bool {
        self.cutoffs.0 < omega && omega < self.cutoffs.1
    }

    /// Columns `qx,qy,qz,omega,ex,ey,ez,re_a,im_a`, 17 significant digits.
    pub fn write_csv<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "qx,qy,qz,omega,ex,ey,ez,re_a,im_a")?;
        for m in &self.modes {
            let row = [
                m.wavevector.x,
                m.wavevector.y,
                m.wavevector.z,
                m.frequency,
                m.polarization.x,
                m.polarization.y,
                m.polarization.z,
                m.amplitude.re,
                m.amplitude.im,
            ];
            writeln!(w, "{}", crate::output::csv_row(&row))?;
        }
        Ok(())
    }
}

fn check_point(r: Vec3, t: f64) -> Result<()> {
    if !r.is_finite() {
        return Err(Error::Domain(format!("field point must be finite, got {r:?}")));
    }
    ensure_finite("time", t)
}

/// Draw a reproducible mode set.
pub fn build_mode_set(config: &ModeSamplingConfig) -> Result<ModeSet> {
    config.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let n = config.count;
    let mut modes = Vec::with_capacity(n);
    for i in 0..n {
        let (frequency, density) = sample_frequency(config, i, &mut rng);
        let direction = random_unit_vector(&mut rng);
        let (e1, e2) = transverse_basis(direction);
        let pol_angle = rng.random::<f64>() * TAU;
        let polarization = e1 * pol_angle.cos() + e2 * pol_angle.sin();
        let phase = rng.random::<f64>() * TAU;
        let field_scale = (2.0 * PI * config.hbar * frequency / config.volume).sqrt();
        modes.push(Mode {
            wavevector: direction * (frequency / config.light_speed),
            frequency,
            polarization,
            amplitude: Complex64::from_polar(FRAC_1_SQRT_2, phase),
            field_scale,
            weight: config.mode_density(frequency) / (n as f64 * density),
        });
    }
    Ok(ModeSet {
        modes,
        normalization_volume: config.volume,
        cutoffs: (config.omega_min, config.omega_max),
        seed: config.seed,
        light_speed: config.light_speed,
        hbar: config.hbar,
    })
}

/// Returns the frequency and its sampling density.
fn sample_frequency(config: &ModeSamplingConfig, index: usize, rng: &mut ChaCha8Rng) -> (f64, f64) {
    let (lo, hi) = (config.omega_min, config.omega_max);
    match config.law {
        SamplingLaw::Uniform => {
            let u: f64 = rng.random();
            (lo + u * (hi - lo), 1.0 / (hi - lo))
        }
        SamplingLaw::ResonanceStratified { center, half_width } => {
            let a = ((lo - center) / half_width).atan();
            let b = ((hi - center) / half_width).atan();
            let jitter: f64 = rng.random();
            let s = a + (index as f64 + jitter) / config.count as f64 * (b - a);
            let omega = (center + half_width * s.tan()).clamp(lo, hi);
            let x = (omega - center) / half_width;
            (omega, 1.0 / ((b - a) * half_width * (1.0 + x * x)))
        }
    }
}

fn random_unit_vector(rng: &mut ChaCha8Rng) -> Vec3 {
    let cos_theta = 1.0 - 2.0 * rng.random::<f64>();
    let sin_theta = (1.0 - cos_theta * cos_theta).max(0.0).sqrt();
    let phi = TAU * rng.random::<f64>();
    Vec3::new(sin_theta * phi.cos(), sin_theta * phi.sin(), cos_theta)
}

/// Orthonormal pair spanning the plane perpendicular to unit vector `n`.
pub fn transverse_basis(n: Vec3) -> (Vec3, Vec3) {
    let helper = if n.x.abs() <= n.y.abs() && n.x.abs() <= n.z.abs() {
        Vec3::new(1.0, 0.0, 0.0)
    } else if n.y.abs() <= n.z.abs() {
        Vec3::new(0.0, 1.0, 0.0)
    } else {
        Vec3::new(0.0, 0.0, 1.0)
    };
    let e1 = n.cross(helper).normalized();
    let e2 = n.cross(e1);
    (e1, e2)
}
