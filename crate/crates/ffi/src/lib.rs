//! C ABI over `sed-core`.
//!
//! Every function returns a [`SedStatus`]; results go through out-pointers
//! and are written only on success. On failure the message is kept per thread
//! and can be fetched with [`sed_last_error_message`]. Panics never cross the
//! boundary; they surface as [`SedStatus::Panic`].
//!
//! Mode sets are opaque: create with [`sed_mode_set_new`], release with
//! [`sed_mode_set_free`]. Enum arguments must hold one of the declared values.

use sed_core::hydrogen::{minimize_ground_energy, AtomSpec};
use sed_core::oscillator::{
    commutator_mode_sum, phase_averaged_moments, radiation_time_constant, steady_state_solution,
    susceptibility, OscillatorParams,
};
use sed_core::uncertainty::angular_momentum_paper_total;
use sed_core::units::UnitSystem;
use sed_core::vacuum_field::{build_mode_set, ModeSamplingConfig, ModeSet, SamplingLaw};
use sed_core::{Error, Vec3};
use std::cell::RefCell;
use std::ffi::c_char;
use std::panic::{catch_unwind, AssertUnwindSafe};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SedStatus {
    Ok = 0,
    NullPointer = 1,
    Config = 2,
    Domain = 3,
    ModelValidity = 4,
    Coverage = 5,
    Singularity = 6,
    Range = 7,
    Shape = 8,
    Io = 9,
    Panic = 10,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SedUnitSystem {
    Natural = 0,
    GaussianCgs = 1,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SedSamplingLaw {
    Uniform = 0,
    /// Stratified Cauchy law; uses `center` and `half_width`.
    Resonance = 1,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct SedVec3 {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SedOscillatorParams {
    pub charge: f64,
    pub mass: f64,
    pub natural_frequency: f64,
    pub light_speed: f64,
    pub hbar: f64,
    pub radiation_tau: f64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SedModeSamplingConfig {
    pub count: usize,
    pub omega_min: f64,
    pub omega_max: f64,
    pub law: SedSamplingLaw,
    pub center: f64,
    pub half_width: f64,
    pub seed: u64,
    pub light_speed: f64,
    pub hbar: f64,
    pub volume: f64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct SedGroundState {
    pub z: u32,
    pub r_min: f64,
    pub e_min: f64,
    pub e_min_ev: f64,
    pub r_numeric: f64,
    pub e_numeric: f64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct SedAngularMomentum {
    pub l: u32,
    pub lz_bar2: f64,
    pub dlx2: f64,
    pub dly2: f64,
    pub dlz2: f64,
    pub l2_total: f64,
    pub standard_l2: f64,
    pub satisfies_component_bound: bool,
}

/// Opaque handle to a sampled set of field modes.
pub struct SedModeSet {
    inner: ModeSet,
}

thread_local! {
    static LAST_ERROR: RefCell<String> = const { RefCell::new(String::new()) };
}

struct Failure(SedStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let status = match e {
            Error::Config(_) => SedStatus::Config,
            Error::Domain(_) => SedStatus::Domain,
            Error::ModelValidity(_) => SedStatus::ModelValidity,
            Error::Coverage(_) => SedStatus::Coverage,
            Error::Singularity(_) => SedStatus::Singularity,
            Error::Range(_) => SedStatus::Range,
            Error::Shape(_) => SedStatus::Shape,
            Error::Io(_) => SedStatus::Io,
        };
        Failure(status, e.to_string())
    }
}

fn null(name: &str) -> Failure {
    Failure(SedStatus::NullPointer, format!("{name} is null"))
}

fn guard(f: impl FnOnce() -> Result<(), Failure>) -> SedStatus {
    let outcome = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|payload| {
        let msg = payload
            .downcast_ref::<&str>()
            .map(|s| s.to_string())
            .or_else(|| payload.downcast_ref::<String>().cloned())
            .unwrap_or_else(|| "panic".into());
        Err(Failure(SedStatus::Panic, msg))
    });
    match outcome {
        Ok(()) => {
            LAST_ERROR.with(|e| e.borrow_mut().clear());
            SedStatus::Ok
        }
        Err(Failure(status, msg)) => {
            LAST_ERROR.with(|e| *e.borrow_mut() = msg);
            status
        }
    }
}

unsafe fn deref<'a, T>(p: *const T, name: &str) -> Result<&'a T, Failure> {
    p.as_ref().ok_or_else(|| null(name))
}

unsafe fn write<T>(p: *mut T, name: &str, value: T) -> Result<(), Failure> {
    let slot = p.as_mut().ok_or_else(|| null(name))?;
    *slot = value;
    Ok(())
}

fn params_in(p: &SedOscillatorParams) -> Result<OscillatorParams, Failure> {
    Ok(OscillatorParams::new(p.charge, p.mass, p.natural_frequency, p.light_speed, p.hbar, p.radiation_tau)?)
}

fn params_out(p: OscillatorParams) -> SedOscillatorParams {
    SedOscillatorParams {
        charge: p.charge,
        mass: p.mass,
        natural_frequency: p.natural_frequency,
        light_speed: p.light_speed,
        hbar: p.hbar,
        radiation_tau: p.radiation_tau,
    }
}

fn vec_out(v: Vec3) -> SedVec3 {
    SedVec3 { x: v.x, y: v.y, z: v.z }
}

/// Copies the calling thread's last error message into `buf` (NUL
/// terminated, truncated to `len - 1` bytes) and returns the full message
/// length in bytes. Pass a null `buf` to query the length.
///
/// # Safety
/// `buf` must be null or valid for `len` bytes.
#[no_mangle]
pub unsafe extern "C" fn sed_last_error_message(buf: *mut c_char, len: usize) -> usize {
    LAST_ERROR.with(|e| {
        let msg = e.borrow();
        if !buf.is_null() && len > 0 {
            let n = msg.len().min(len - 1);
            std::ptr::copy_nonoverlapping(msg.as_ptr() as *const c_char, buf, n);
            *buf.add(n) = 0;
        }
        msg.len()
    })
}

/// Natural-unit parameters (ħ = m = ω₀ = c = 1) for damping `τω₀`.
///
/// # Safety
/// `out` must be null or a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn sed_oscillator_params_natural(damping: f64, out: *mut SedOscillatorParams) -> SedStatus {
    guard(|| write(out, "out", params_out(OscillatorParams::natural(damping)?)))
}

/// Electron parameters in Gaussian-CGS units bound at `omega0` [1/s].
///
/// # Safety
/// `out` must be null or a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn sed_oscillator_params_cgs_electron(
    omega0: f64,
    out: *mut SedOscillatorParams,
) -> SedStatus {
    guard(|| write(out, "out", params_out(OscillatorParams::gaussian_cgs_electron(omega0)?)))
}

/// `τ = 2e²/(3mc³)`.
///
/// # Safety
/// `out` must be null or a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn sed_radiation_time_constant(
    charge: f64,
    mass: f64,
    light_speed: f64,
    out: *mut f64,
) -> SedStatus {
    guard(|| write(out, "out", radiation_time_constant(charge, mass, light_speed)?))
}

/// `χ(ω) = 1/(ω₀² − ω² + iτω³)` as real and imaginary parts.
///
/// # Safety
/// Pointers must be null or valid.
#[no_mangle]
pub unsafe extern "C" fn sed_susceptibility(
    omega: f64,
    params: *const SedOscillatorParams,
    out_re: *mut f64,
    out_im: *mut f64,
) -> SedStatus {
    guard(|| {
        let p = params_in(deref(params, "params")?)?;
        let chi = susceptibility(omega, &p)?.value;
        if out_re.is_null() || out_im.is_null() {
            return Err(null("out"));
        }
        write(out_re, "out_re", chi.re)?;
        write(out_im, "out_im", chi.im)
    })
}

/// Samples a mode set. On success `*out` owns a handle that must be released
/// with [`sed_mode_set_free`].
///
/// # Safety
/// Pointers must be null or valid.
#[no_mangle]
pub unsafe extern "C" fn sed_mode_set_new(
    config: *const SedModeSamplingConfig,
    out: *mut *mut SedModeSet,
) -> SedStatus {
    guard(|| {
        let c = deref(config, "config")?;
        if out.is_null() {
            return Err(null("out"));
        }
        let law = match c.law {
            SedSamplingLaw::Uniform => SamplingLaw::Uniform,
            SedSamplingLaw::Resonance => {
                SamplingLaw::ResonanceStratified { center: c.center, half_width: c.half_width }
            }
        };
        let inner = build_mode_set(&ModeSamplingConfig {
            count: c.count,
            omega_min: c.omega_min,
            omega_max: c.omega_max,
            law,
            seed: c.seed,
            light_speed: c.light_speed,
            hbar: c.hbar,
            volume: c.volume,
        })?;
        write(out, "out", Box::into_raw(Box::new(SedModeSet { inner })))
    })
}

/// Releases a handle from [`sed_mode_set_new`]. Null is ignored.
///
/// # Safety
/// `set` must be null or a live handle; it is invalid afterwards.
#[no_mangle]
pub unsafe extern "C" fn sed_mode_set_free(set: *mut SedModeSet) {
    if !set.is_null() {
        drop(Box::from_raw(set));
    }
}

/// # Safety
/// Pointers must be null or valid.
#[no_mangle]
pub unsafe extern "C" fn sed_mode_set_len(set: *const SedModeSet, out: *mut usize) -> SedStatus {
    guard(|| write(out, "out", deref(set, "set")?.inner.len()))
}

/// Electric field at position `r` and time `t`.
///
/// # Safety
/// Pointers must be null or valid.
#[no_mangle]
pub unsafe extern "C" fn sed_mode_set_electric_field(
    set: *const SedModeSet,
    r: SedVec3,
    t: f64,
    out: *mut SedVec3,
) -> SedStatus {
    guard(|| {
        let e = deref(set, "set")?.inner.electric_field_at(Vec3::new(r.x, r.y, r.z), t)?;
        write(out, "out", vec_out(e))
    })
}

/// Vector potential (Coulomb gauge) at position `r` and time `t`.
///
/// # Safety
/// Pointers must be null or valid.
#[no_mangle]
pub unsafe extern "C" fn sed_mode_set_vector_potential(
    set: *const SedModeSet,
    r: SedVec3,
    t: f64,
    out: *mut SedVec3,
) -> SedStatus {
    guard(|| {
        let a = deref(set, "set")?.inner.vector_potential_at(Vec3::new(r.x, r.y, r.z), t)?;
        write(out, "out", vec_out(a))
    })
}

/// Mode sum for `[x, p]`, per component, in the units of ħ.
///
/// # Safety
/// Pointers must be null or valid.
#[no_mangle]
pub unsafe extern "C" fn sed_commutator_mode_sum(
    params: *const SedOscillatorParams,
    set: *const SedModeSet,
    out: *mut f64,
) -> SedStatus {
    guard(|| {
        let p = params_in(deref(params, "params")?)?;
        write(out, "out", commutator_mode_sum(&p, &deref(set, "set")?.inner)?)
    })
}

/// Phase-averaged per-component `⟨x²⟩` and `⟨p²⟩`.
///
/// # Safety
/// Pointers must be null or valid.
#[no_mangle]
pub unsafe extern "C" fn sed_phase_averaged_moments(
    params: *const SedOscillatorParams,
    set: *const SedModeSet,
    out_x2: *mut f64,
    out_p2: *mut f64,
) -> SedStatus {
    guard(|| {
        let p = params_in(deref(params, "params")?)?;
        let (x2, p2) = phase_averaged_moments(&p, &deref(set, "set")?.inner)?;
        if out_x2.is_null() || out_p2.is_null() {
            return Err(null("out"));
        }
        write(out_x2, "out_x2", x2)?;
        write(out_p2, "out_p2", p2)
    })
}

/// Closed-form steady-state position and momentum at `n` instants.
/// `out_positions` and `out_momenta` must each hold `n` elements.
///
/// # Safety
/// `times` must be valid for `n` reads, the outputs for `n` writes.
#[no_mangle]
pub unsafe extern "C" fn sed_steady_state(
    params: *const SedOscillatorParams,
    set: *const SedModeSet,
    times: *const f64,
    n: usize,
    out_positions: *mut SedVec3,
    out_momenta: *mut SedVec3,
) -> SedStatus {
    guard(|| {
        let p = params_in(deref(params, "params")?)?;
        let set = deref(set, "set")?;
        if n == 0 {
            return Ok(());
        }
        if times.is_null() || out_positions.is_null() || out_momenta.is_null() {
            return Err(null("times or outputs"));
        }
        let times = std::slice::from_raw_parts(times, n);
        let traj = steady_state_solution(&set.inner, &p, times)?;
        let xs = std::slice::from_raw_parts_mut(out_positions, n);
        let ps = std::slice::from_raw_parts_mut(out_momenta, n);
        for k in 0..n {
            xs[k] = vec_out(traj.positions[k]);
            ps[k] = vec_out(traj.momenta[k]);
        }
        Ok(())
    })
}

/// Minimum of the uncertainty energy functional for nuclear charge `z`.
///
/// # Safety
/// `out` must be null or a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn sed_minimize_ground_energy(
    z: u32,
    units: SedUnitSystem,
    out: *mut SedGroundState,
) -> SedStatus {
    guard(|| {
        let units = match units {
            SedUnitSystem::Natural => UnitSystem::Natural,
            SedUnitSystem::GaussianCgs => UnitSystem::GaussianCgs,
        };
        let g = minimize_ground_energy(&AtomSpec::for_units(z, units)?)?;
        write(
            out,
            "out",
            SedGroundState {
                z: g.z,
                r_min: g.r_min,
                e_min: g.e_min,
                e_min_ev: g.e_min_ev,
                r_numeric: g.r_numeric,
                e_numeric: g.e_numeric,
            },
        )
    })
}

/// Angular-momentum dispersions and total `(l + 1/2)²ħ²` for quantum number `l`.
///
/// # Safety
/// `out` must be null or a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn sed_angular_momentum_total(
    l: i64,
    hbar: f64,
    out: *mut SedAngularMomentum,
) -> SedStatus {
    guard(|| {
        let r = angular_momentum_paper_total(l, hbar)?;
        write(
            out,
            "out",
            SedAngularMomentum {
                l: r.l,
                lz_bar2: r.lz_bar2,
                dlx2: r.dlx2,
                dly2: r.dly2,
                dlz2: r.dlz2,
                l2_total: r.l2_total,
                standard_l2: r.standard_l2,
                satisfies_component_bound: r.satisfies_component_bound,
            },
        )
    })
}
