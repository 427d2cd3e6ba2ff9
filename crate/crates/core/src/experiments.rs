//! Experiment dispatch and artifact writing for `sedsim`.

use crate::config::{AveragingKind, Boundary, Experiment, NelsonState, RunConfig, SamplingKind};
use crate::error::{Error, Result};
use crate::hydrogen::{minimize_with_policy, write_sweep_csv, AtomSpec, DispersionPolicy};
use crate::nelson::{
    continuity_residual, density_l1_distance, energy_split, madelung_residuals, AnalyticState,
    BoundaryPolicy, EvolveOptions, NodePolicy, ResidualNorms, WalkerEnsemble,
};
use crate::oscillator::{
    commutator_mode_sum, integrate_equation_of_motion, oscillator_dispersions, Averaging,
    IntegrationOptions, OscillatorParams,
};
use crate::output::{provenance_header, write_json, write_text};
use crate::uncertainty::{angular_momentum_paper_total, isotropic_ground_dispersions, write_angular_momentum_table};
use crate::units::{cgs, UnitSystem};
use crate::vacuum_field::{build_mode_set, ModeSamplingConfig, SamplingLaw};
use crate::vec3::Vec3;
use serde::Serialize;
use serde_json::{json, Map, Value};
use std::path::{Path, PathBuf};
use std::time::Instant;

/// One tolerance check: `|value − target| ≤ tolerance` (absolute).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub value: f64,
    pub target: f64,
    pub tolerance: f64,
    pub passed: bool,
}

impl Check {
    fn absolute(name: &str, value: f64, target: f64, tolerance: f64) -> Self {
        Self {
            name: name.to_string(),
            value,
            target,
            tolerance,
            passed: (value - target).abs() <= tolerance,
        }
    }

    fn relative(name: &str, value: f64, target: f64, rel: f64) -> Self {
        Self::absolute(name, value, target, rel * target.abs())
    }

    fn below(name: &str, value: f64, limit: f64) -> Self {
        Self {
            name: name.to_string(),
            value,
            target: 0.0,
            tolerance: limit,
            passed: value.abs() < limit,
        }
    }
}

#[derive(Debug, Clone)]
pub struct RunOutcome {
    pub summary: Value,
    pub checks: Vec<Check>,
    pub files: Vec<PathBuf>,
}

impl RunOutcome {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

struct Artifacts<'a> {
    dir: &'a Path,
    header: String,
    provenance: String,
    seed: u64,
    files: Vec<PathBuf>,
}

impl Artifacts<'_> {
    fn csv(&mut self, name: &str, body: Vec<u8>) -> Result<()> {
        let path = self.dir.join(name);
        let body = String::from_utf8(body).expect("csv writers emit UTF-8");
        write_text(&path, &format!("{}{body}", self.header))?;
        self.files.push(path);
        Ok(())
    }

    fn json(&mut self, name: &str, mut value: Map<String, Value>) -> Result<()> {
        value.insert("seed".into(), json!(self.seed));
        value.insert("config".into(), json!(self.provenance));
        let path = self.dir.join(name);
        write_json(&path, &Value::Object(value))?;
        self.files.push(path);
        Ok(())
    }
}

fn to_map<T: Serialize>(v: &T) -> Map<String, Value> {
    match serde_json::to_value(v).expect("plain data serializes") {
        Value::Object(m) => m,
        _ => unreachable!("struct serializes to an object"),
    }
}

/// Run `rc` on a pool of `rc.workers` threads and write its artifacts into
/// `rc.output_dir`.
pub fn run_experiment(rc: &RunConfig) -> Result<RunOutcome> {
    rc.validate()?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(rc.workers)
        .build()
        .map_err(|e| Error::Config(format!("cannot start {} workers: {e}", rc.workers)))?;
    pool.install(|| run_in_pool(rc))
}

fn run_in_pool(rc: &RunConfig) -> Result<RunOutcome> {
    let start = Instant::now();
    std::fs::create_dir_all(&rc.output_dir)?;
    let provenance = rc.provenance();
    let mut art = Artifacts {
        dir: &rc.output_dir,
        header: provenance_header(rc.seed, &provenance),
        provenance: provenance.clone(),
        seed: rc.seed,
        files: Vec::new(),
    };
    let (results, checks) = match rc.experiment {
        Experiment::VacuumSample => vacuum_sample(rc, &mut art)?,
        Experiment::OscillatorRun => oscillator_run(rc, &mut art)?,
        Experiment::CommutatorSum => commutator_sum(rc, &mut art)?,
        Experiment::NelsonRun => nelson_run(rc, &mut art)?,
        Experiment::HlikeGround => hlike_ground(rc, &mut art)?,
    };
    let mut summary = results;
    summary.insert("experiment".into(), json!(rc.experiment.as_str()));
    summary.insert("seed".into(), json!(rc.seed));
    summary.insert("unit_system".into(), json!(rc.unit_system.as_str()));
    summary.insert("config".into(), json!(provenance));
    summary.insert("checks".into(), serde_json::to_value(&checks).expect("checks serialize"));
    summary.insert("all_checks_passed".into(), json!(checks.iter().all(|c| c.passed)));
    summary.insert("wall_time_s".into(), json!(start.elapsed().as_secs_f64()));
    let summary = Value::Object(summary);
    let path = rc.output_dir.join("summary.json");
    write_json(&path, &summary)?;
    art.files.push(path);
    Ok(RunOutcome { summary, checks, files: art.files })
}

fn oscillator_params(rc: &RunConfig) -> Result<OscillatorParams> {
    match rc.unit_system {
        UnitSystem::Natural => OscillatorParams::natural(rc.oscillator.damping),
        UnitSystem::GaussianCgs => OscillatorParams::gaussian_cgs_electron(rc.oscillator.omega0),
    }
}

fn sampling_config(rc: &RunConfig, p: &OscillatorParams, count: usize) -> ModeSamplingConfig {
    let w0 = p.natural_frequency;
    ModeSamplingConfig {
        count,
        omega_min: rc.modes.omega_min * w0,
        omega_max: rc.modes.omega_max * w0,
        law: match rc.modes.sampling {
            SamplingKind::Resonance => {
                SamplingLaw::ResonanceStratified { center: w0, half_width: 0.5 * p.linewidth() }
            }
            SamplingKind::Uniform => SamplingLaw::Uniform,
        },
        seed: rc.seed,
        light_speed: p.light_speed,
        hbar: p.hbar,
        volume: rc.modes.volume,
    }
}

type Outcome = (Map<String, Value>, Vec<Check>);

fn vacuum_sample(rc: &RunConfig, art: &mut Artifacts) -> Result<Outcome> {
    let p = oscillator_params(rc)?;
    let cfg = sampling_config(rc, &p, rc.modes.count);
    let ms = build_mode_set(&cfg)?;
    let mut buf = Vec::new();
    ms.write_csv(&mut buf)?;
    art.csv("modes.csv", buf)?;

    let n = ms.len().max(1) as f64;
    let mean_dir = ms
        .modes
        .iter()
        .fold(Vec3::ZERO, |acc, m| acc + m.wavevector.normalized())
        / n;
    let transversality = ms
        .modes
        .iter()
        .map(|m| m.polarization.dot(m.wavevector.normalized()).abs())
        .fold(0.0, f64::max);
    let in_range = ms
        .modes
        .iter()
        .all(|m| m.frequency >= cfg.omega_min && m.frequency <= cfg.omega_max);
    let e0 = ms.electric_field_at(Vec3::ZERO, 0.0)?;
    let expected_e2: f64 = ms.modes.iter().map(|m| m.weight * m.field_scale * m.field_scale).sum();

    let mut r = Map::new();
    r.insert("n_modes".into(), json!(ms.len()));
    r.insert("mean_direction_norm".into(), json!(mean_dir.norm()));
    r.insert("max_transversality".into(), json!(transversality));
    r.insert("e_squared_origin".into(), json!(e0.norm_squared()));
    r.insert("e_squared_expected".into(), json!(expected_e2));
    let mut checks = vec![
        Check::below("max_transversality", transversality, 1e-12),
        Check::absolute("frequencies_in_cutoffs", if in_range { 1.0 } else { 0.0 }, 1.0, 0.0),
    ];
    if !ms.is_empty() {
        // five standard deviations of the mean of N isotropic unit vectors
        checks.push(Check::below("mean_direction_norm", mean_dir.norm(), 5.0 / n.sqrt()));
    }
    Ok((r, checks))
}

fn oscillator_run(rc: &RunConfig, art: &mut Artifacts) -> Result<Outcome> {
    let p = oscillator_params(rc)?;
    let o = &rc.oscillator;
    let cfg = sampling_config(rc, &p, rc.modes.count);
    let spacing = 10.0 / p.linewidth();
    let averaging = match o.averaging {
        AveragingKind::Ensemble => Averaging::Ensemble {
            realizations: o.realizations,
            time_samples: o.time_samples,
            sample_spacing: spacing,
        },
        AveragingKind::Time => {
            let samples = o.realizations * o.time_samples;
            Averaging::Time { samples, window: samples as f64 * spacing }
        }
    };
    let disp = oscillator_dispersions(&p, &cfg, averaging)?;
    art.json("dispersions.json", to_map(&disp))?;

    let ms = build_mode_set(&cfg)?;
    let w0 = p.natural_frequency;
    let opts = IntegrationOptions { dt: o.dt / w0, duration: o.duration / w0, record_every: o.record_every };
    let run = integrate_equation_of_motion(&p, &ms, Vec3::ZERO, Vec3::ZERO, &opts)?;
    let mut buf = Vec::new();
    run.trajectory.write_csv(&mut buf)?;
    art.csv("trajectory.csv", buf)?;

    let x_ref = p.hbar / (2.0 * p.mass * w0);
    let p_ref = p.mass * p.hbar * w0 / 2.0;
    let prod_ref = p.hbar * p.hbar / 4.0;
    let mut r = to_map(&disp);
    r.insert("x2_over_reference".into(), json!(disp.x2 / x_ref));
    r.insert("p2_over_reference".into(), json!(disp.p2 / p_ref));
    r.insert("product_over_bound".into(), json!(disp.product / prod_ref));
    r.insert("damping".into(), json!(p.damping()));
    r.insert("integration_status".into(), serde_json::to_value(run.status).expect("enum"));
    let checks = vec![
        Check::relative("x2_over_reference", disp.x2 / x_ref, 1.0, 0.10),
        Check::relative("p2_over_reference", disp.p2 / p_ref, 1.0, 0.10),
        Check::relative("product_over_bound", disp.product / prod_ref, 1.0, 0.20),
    ];
    Ok((r, checks))
}

fn commutator_sum(rc: &RunConfig, art: &mut Artifacts) -> Result<Outcome> {
    let p = oscillator_params(rc)?;
    let levels = rc.oscillator.convergence_levels;
    let mut rows = Vec::new();
    for j in (0..levels).rev() {
        let count = (rc.modes.count >> j).max(1);
        let ms = build_mode_set(&sampling_config(rc, &p, count))?;
        rows.push((count, commutator_mode_sum(&p, &ms)? / p.hbar));
    }
    let mut buf = String::from("n_modes,commutator_over_hbar\n");
    for (n, c) in &rows {
        buf.push_str(&format!("{n},{}\n", crate::output::fmt_f64(*c)));
    }
    art.csv("convergence.csv", buf.into_bytes())?;
    let (n, c) = *rows.last().expect("at least one level");
    let mut r = Map::new();
    r.insert("commutator_over_hbar".into(), json!(c));
    r.insert("n_modes".into(), json!(n));
    r.insert("damping".into(), json!(p.damping()));
    Ok((r, vec![Check::absolute("commutator_over_hbar", c, 1.0, 0.02)]))
}

fn norms_value(n: &ResidualNorms) -> Value {
    serde_json::to_value(n).expect("norms serialize")
}

fn nelson_run(rc: &RunConfig, art: &mut Artifacts) -> Result<Outcome> {
    let n = &rc.nelson;
    let (mass, hbar, omega) = match rc.unit_system {
        UnitSystem::Natural => (1.0, 1.0, 1.0),
        UnitSystem::GaussianCgs => (cgs::ELECTRON_MASS, cgs::HBAR, rc.oscillator.omega0),
    };
    let length = (hbar / (mass * omega)).sqrt();
    let axis = crate::grid::Axis::cartesian(n.x_min * length, n.x_max * length, n.grid_points)?;
    let state = match n.state {
        NelsonState::HarmonicGround => AnalyticState::HarmonicGround { mass, omega, hbar },
        NelsonState::HarmonicCoherent => {
            AnalyticState::HarmonicCoherent { mass, omega, hbar, displacement: n.displacement * length }
        }
    };
    let dt = n.dt / omega;
    let steps = (n.duration / n.dt).round() as u64;
    let rho0 = state.sample(&axis, 0.0)?.density();
    let walkers = WalkerEnsemble::from_density(&axis, &rho0, n.walkers, rc.seed)?;
    let opts = EvolveOptions {
        dt,
        steps,
        mass,
        hbar,
        boundary: match n.boundary {
            Boundary::Reflect => BoundaryPolicy::Reflect,
            Boundary::Clip => BoundaryPolicy::Clip,
            Boundary::Error => BoundaryPolicy::Error,
            Boundary::None => BoundaryPolicy::None,
        },
        domain: (axis.first(), axis.last()),
    };
    let walkers = walkers.evolve(&state, &opts)?;
    let t_final = walkers.time;
    let psi = state.sample(&axis, t_final)?;

    let mut buf = Vec::new();
    walkers.write_csv(&mut buf)?;
    art.csv("walkers.csv", buf)?;
    let mut buf = Vec::new();
    psi.write_csv(&mut buf)?;
    art.csv("wavefunction.csv", buf)?;

    let series = state.series(&axis, t_final, dt, 1)?;
    let cont = continuity_residual(&series, mass, hbar, NodePolicy::Reject)?;
    let potential = state.potential(&axis);
    let mad = madelung_residuals(&series, &potential, mass, hbar, NodePolicy::Reject)?;
    let mut res = match norms_value(&cont.residual.norms) {
        Value::Object(m) => m,
        _ => unreachable!(),
    };
    res.insert("continuity_variant_identity_defect".into(), json!(cont.variant_identity_defect));
    res.insert("aa1".into(), norms_value(&mad.aa1.norms));
    res.insert("aa2".into(), norms_value(&mad.aa2.norms));
    res.insert("ag1".into(), norms_value(&mad.ag1.norms));
    art.json("residuals.json", res)?;

    let (mean, var) = walkers.mean_and_variance();
    let var_ref = hbar / (2.0 * mass * omega);
    let l1 = density_l1_distance(&walkers.positions, &axis, &psi.density(), n.bin_stride)?;
    let energy = energy_split(&psi, &potential, mass, hbar, NodePolicy::Reject)?;
    let mut r = Map::new();
    r.insert("state".into(), json!(state.name()));
    r.insert("n_walkers".into(), json!(walkers.len()));
    r.insert("steps".into(), json!(walkers.steps_taken));
    r.insert("final_time".into(), json!(t_final));
    r.insert("walker_mean".into(), json!(mean));
    r.insert("walker_variance".into(), json!(var));
    r.insert("variance_over_reference".into(), json!(var / var_ref));
    r.insert("density_l1".into(), json!(l1));
    r.insert("energy".into(), serde_json::to_value(energy).expect("energy serializes"));
    let checks = vec![
        Check::relative("variance_over_reference", var / var_ref, 1.0, 0.03),
        Check::below("density_l1", l1, 0.05),
    ];
    Ok((r, checks))
}

fn hlike_ground(rc: &RunConfig, art: &mut Artifacts) -> Result<Outcome> {
    let h = &rc.hydrogen;
    let policy = DispersionPolicy { radial_spread_ratio: h.radial_spread_ratio };
    let atom = AtomSpec::for_units(h.z, rc.unit_system)?;
    let gs = minimize_with_policy(&atom, policy)?;
    let sweep = (1..=h.z_max)
        .map(|z| minimize_with_policy(&AtomSpec::for_units(z, rc.unit_system)?, policy))
        .collect::<Result<Vec<_>>>()?;
    let mut buf = Vec::new();
    write_sweep_csv(&mut buf, &sweep)?;
    art.csv("sweep.csv", buf)?;
    let mut buf = Vec::new();
    write_angular_momentum_table(&mut buf, h.l_max)?;
    art.csv("angular_momentum.csv", buf)?;

    let worst_minimizer = sweep
        .iter()
        .chain(std::iter::once(&gs))
        .map(|g| (g.r_numeric / g.r_min - 1.0).abs().max((g.e_numeric / g.e_min - 1.0).abs()))
        .fold(0.0, f64::max);
    let rydberg = minimize_with_policy(&AtomSpec::gaussian_cgs(1)?, DispersionPolicy::default())?.e_min_ev;
    let iso = isotropic_ground_dispersions(1.0)?;
    let mut r = Map::new();
    r.insert("Z".into(), json!(gs.z));
    r.insert("r_min".into(), json!(gs.r_min));
    r.insert("E_min".into(), json!(gs.e_min));
    r.insert("E_min_eV".into(), json!(gs.e_min_ev));
    r.insert("r_numeric".into(), json!(gs.r_numeric));
    r.insert("E_numeric".into(), json!(gs.e_numeric));
    r.insert("minimizer_max_rel_diff".into(), json!(worst_minimizer));
    r.insert("hydrogen_cgs_E_min_eV".into(), json!(rydberg));
    r.insert("isotropic_L2_sum_over_hbar2".into(), json!(iso.sum));
    let mut checks = vec![
        Check::below("minimizer_max_rel_diff", worst_minimizer, 1e-10),
        Check::relative("hydrogen_cgs_E_min_eV", rydberg, -13.606, 1e-3),
        Check::absolute("isotropic_L2_sum_over_hbar2", iso.sum, 0.75, 0.0),
    ];
    if policy == DispersionPolicy::default() {
        let zf = h.z as f64;
        let e2 = atom.charge * atom.charge;
        let r_ref = atom.hbar * atom.hbar / (atom.mass * zf * e2);
        let e_ref = -zf * zf * atom.mass * e2 * e2 / (2.0 * atom.hbar * atom.hbar);
        checks.push(Check::relative("r_min_analytic", gs.r_min, r_ref, 1e-12));
        checks.push(Check::relative("E_min_analytic", gs.e_min, e_ref, 1e-12));
    }
    for l in 0..=h.l_max.min(3) {
        let total = angular_momentum_paper_total(l as i64, 1.0)?.l2_total;
        let expect = (l as f64 + 0.5).powi(2);
        checks.push(Check::absolute(&format!("paper_L2_over_hbar2_l{l}"), total, expect, 0.0));
    }
    Ok((r, checks))
}
