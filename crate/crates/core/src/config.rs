//! Run configuration: a sectioned `key = value` document.
//!
//! Frequencies, times and lengths are given in units of the oscillator scale
//! (`ω₀`, `1/ω₀`, `√(ħ/mω₀)`) so one file works in either unit system.

use crate::error::{Error, Result};
use crate::units::UnitSystem;
use std::collections::BTreeMap;
use std::fmt::{self, Write as _};
use std::path::PathBuf;
use std::str::FromStr;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Experiment {
    VacuumSample,
    OscillatorRun,
    CommutatorSum,
    NelsonRun,
    HlikeGround,
}

impl Experiment {
    pub const ALL: [Experiment; 5] = [
        Experiment::VacuumSample,
        Experiment::OscillatorRun,
        Experiment::CommutatorSum,
        Experiment::NelsonRun,
        Experiment::HlikeGround,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Experiment::VacuumSample => "vacuum-sample",
            Experiment::OscillatorRun => "oscillator-run",
            Experiment::CommutatorSum => "commutator-sum",
            Experiment::NelsonRun => "nelson-run",
            Experiment::HlikeGround => "hlike-ground",
        }
    }
}

impl fmt::Display for Experiment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Experiment {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        Experiment::ALL
            .into_iter()
            .find(|e| e.as_str() == s)
            .ok_or_else(|| {
                let names: Vec<&str> = Experiment::ALL.iter().map(|e| e.as_str()).collect();
                format!("unknown experiment `{s}` (expected one of {})", names.join(", "))
            })
    }
}

macro_rules! string_enum {
    ($name:ident { $($variant:ident => $text:literal),+ $(,)? }) => {
        #[derive(Debug, Clone, Copy, PartialEq, Eq)]
        pub enum $name { $($variant),+ }

        impl $name {
            pub fn as_str(self) -> &'static str {
                match self { $($name::$variant => $text),+ }
            }
        }

        impl FromStr for $name {
            type Err = String;
            fn from_str(s: &str) -> std::result::Result<Self, String> {
                match s {
                    $($text => Ok($name::$variant),)+
                    other => Err(format!(
                        "unknown value `{other}` (expected one of {})",
                        [$($text),+].join(", ")
                    )),
                }
            }
        }
    };
}

string_enum!(SamplingKind { Resonance => "resonance", Uniform => "uniform" });
string_enum!(AveragingKind { Ensemble => "ensemble", Time => "time" });
string_enum!(NelsonState { HarmonicGround => "harmonic-ground", HarmonicCoherent => "harmonic-coherent" });
string_enum!(Boundary { Reflect => "reflect", Clip => "clip", Error => "error", None => "none" });

#[derive(Debug, Clone, PartialEq)]
pub struct ModesSection {
    pub count: usize,
    /// In units of ω₀.
    pub omega_min: f64,
    pub omega_max: f64,
    pub sampling: SamplingKind,
    pub volume: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OscillatorSection {
    /// τω₀, natural units only (derived from the constants otherwise).
    pub damping: f64,
    /// ω₀ in 1/s, Gaussian-CGS only.
    pub omega0: f64,
    pub averaging: AveragingKind,
    pub realizations: usize,
    pub time_samples: usize,
    pub dt: f64,
    pub duration: f64,
    pub record_every: usize,
    pub convergence_levels: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct NelsonSection {
    pub state: NelsonState,
    pub walkers: usize,
    pub dt: f64,
    pub duration: f64,
    pub x_min: f64,
    pub x_max: f64,
    pub grid_points: usize,
    pub displacement: f64,
    pub boundary: Boundary,
    pub bin_stride: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct HydrogenSection {
    pub z: u32,
    pub z_max: u32,
    pub l_max: u32,
    pub radial_spread_ratio: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub experiment: Experiment,
    pub seed: u64,
    pub unit_system: UnitSystem,
    /// 0 uses every available core. Never affects results.
    pub workers: usize,
    pub output_dir: PathBuf,
    pub modes: ModesSection,
    pub oscillator: OscillatorSection,
    pub nelson: NelsonSection,
    pub hydrogen: HydrogenSection,
}

impl RunConfig {
    pub fn with_defaults(experiment: Experiment, seed: u64) -> Self {
        Self {
            experiment,
            seed,
            unit_system: UnitSystem::Natural,
            workers: 0,
            output_dir: PathBuf::from("out"),
            modes: ModesSection {
                count: 4000,
                omega_min: 0.02,
                omega_max: 50.0,
                sampling: SamplingKind::Resonance,
                volume: 1.0,
            },
            oscillator: OscillatorSection {
                damping: 1e-6,
                omega0: 1e16,
                averaging: AveragingKind::Ensemble,
                realizations: 200,
                time_samples: 8,
                dt: 0.05,
                duration: 200.0,
                record_every: 10,
                convergence_levels: 6,
            },
            nelson: NelsonSection {
                state: NelsonState::HarmonicGround,
                walkers: 100_000,
                dt: 1e-3,
                duration: 10.0,
                x_min: -8.0,
                x_max: 8.0,
                grid_points: 1601,
                displacement: 1.0,
                boundary: Boundary::Reflect,
                bin_stride: 32,
            },
            hydrogen: HydrogenSection { z: 1, z_max: 20, l_max: 10, radial_spread_ratio: 1.0 },
        }
    }

    /// Every field checked before any computation starts.
    pub fn validate(&self) -> Result<()> {
        let m = &self.modes;
        if !(m.omega_min > 0.0 && m.omega_min < m.omega_max && m.omega_max.is_finite()) {
            return Err(Error::Config(format!(
                "[modes] cutoffs must satisfy 0 < omega_min < omega_max, got omega_min = {}, omega_max = {}",
                m.omega_min, m.omega_max
            )));
        }
        positive("modes", "volume", m.volume)?;
        let o = &self.oscillator;
        if !(o.damping > 0.0 && o.damping < 1.0) {
            return Err(Error::Config(format!(
                "[oscillator] damping must satisfy 0 < damping < 1, got {}",
                o.damping
            )));
        }
        positive("oscillator", "omega0", o.omega0)?;
        positive("oscillator", "dt", o.dt)?;
        if !(o.duration > o.dt) {
            return Err(Error::Config("[oscillator] duration must exceed dt".into()));
        }
        at_least("oscillator", "realizations", o.realizations, 1)?;
        at_least("oscillator", "time_samples", o.time_samples, 1)?;
        at_least("oscillator", "record_every", o.record_every, 1)?;
        at_least("oscillator", "convergence_levels", o.convergence_levels, 1)?;
        let n = &self.nelson;
        at_least("nelson", "walkers", n.walkers, 1)?;
        at_least("nelson", "grid_points", n.grid_points, 6)?;
        positive("nelson", "dt", n.dt)?;
        if !(n.duration >= n.dt) {
            return Err(Error::Config("[nelson] duration must be at least dt".into()));
        }
        if !(n.x_min < n.x_max && n.x_min.is_finite() && n.x_max.is_finite()) {
            return Err(Error::Config("[nelson] grid must satisfy x_min < x_max".into()));
        }
        if !(n.bin_stride >= 1 && n.bin_stride < n.grid_points) {
            return Err(Error::Config("[nelson] bin_stride must lie in [1, grid_points)".into()));
        }
        if !n.displacement.is_finite() {
            return Err(Error::Config("[nelson] displacement must be finite".into()));
        }
        let h = &self.hydrogen;
        at_least("hydrogen", "z", h.z as usize, 1)?;
        at_least("hydrogen", "z_max", h.z_max as usize, 1)?;
        positive("hydrogen", "radial_spread_ratio", h.radial_spread_ratio)?;
        Ok(())
    }

    /// Canonical text; parses back to an identical configuration.
    pub fn to_canonical(&self) -> String {
        self.render(true)
    }

    /// Canonical text without the execution-only keys (`workers`,
    /// `output_dir`), embedded in every artifact.
    pub fn provenance(&self) -> String {
        self.render(false)
    }

    fn render(&self, execution_keys: bool) -> String {
        let mut s = String::new();
        let f = |x: f64| format!("{x:?}");
        let _ = writeln!(s, "[run]");
        let _ = writeln!(s, "experiment = {}", self.experiment);
        let _ = writeln!(s, "seed = {}", self.seed);
        let _ = writeln!(s, "unit_system = {}", self.unit_system);
        if execution_keys {
            let _ = writeln!(s, "workers = {}", self.workers);
            let _ = writeln!(s, "output_dir = {}", self.output_dir.display());
        }
        let m = &self.modes;
        let _ = writeln!(s, "\n[modes]");
        let _ = writeln!(s, "count = {}", m.count);
        let _ = writeln!(s, "omega_min = {}", f(m.omega_min));
        let _ = writeln!(s, "omega_max = {}", f(m.omega_max));
        let _ = writeln!(s, "sampling = {}", m.sampling.as_str());
        let _ = writeln!(s, "volume = {}", f(m.volume));
        let o = &self.oscillator;
        let _ = writeln!(s, "\n[oscillator]");
        let _ = writeln!(s, "damping = {}", f(o.damping));
        let _ = writeln!(s, "omega0 = {}", f(o.omega0));
        let _ = writeln!(s, "averaging = {}", o.averaging.as_str());
        let _ = writeln!(s, "realizations = {}", o.realizations);
        let _ = writeln!(s, "time_samples = {}", o.time_samples);
        let _ = writeln!(s, "dt = {}", f(o.dt));
        let _ = writeln!(s, "duration = {}", f(o.duration));
        let _ = writeln!(s, "record_every = {}", o.record_every);
        let _ = writeln!(s, "convergence_levels = {}", o.convergence_levels);
        let n = &self.nelson;
        let _ = writeln!(s, "\n[nelson]");
        let _ = writeln!(s, "state = {}", n.state.as_str());
        let _ = writeln!(s, "walkers = {}", n.walkers);
        let _ = writeln!(s, "dt = {}", f(n.dt));
        let _ = writeln!(s, "duration = {}", f(n.duration));
        let _ = writeln!(s, "x_min = {}", f(n.x_min));
        let _ = writeln!(s, "x_max = {}", f(n.x_max));
        let _ = writeln!(s, "grid_points = {}", n.grid_points);
        let _ = writeln!(s, "displacement = {}", f(n.displacement));
        let _ = writeln!(s, "boundary = {}", n.boundary.as_str());
        let _ = writeln!(s, "bin_stride = {}", n.bin_stride);
        let h = &self.hydrogen;
        let _ = writeln!(s, "\n[hydrogen]");
        let _ = writeln!(s, "z = {}", h.z);
        let _ = writeln!(s, "z_max = {}", h.z_max);
        let _ = writeln!(s, "l_max = {}", h.l_max);
        let _ = writeln!(s, "radial_spread_ratio = {}", f(h.radial_spread_ratio));
        s
    }
}

fn positive(section: &str, key: &str, v: f64) -> Result<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(Error::Config(format!("[{section}] {key} must be positive, got {v}")))
    }
}

fn at_least(section: &str, key: &str, v: usize, min: usize) -> Result<()> {
    if v >= min {
        Ok(())
    } else {
        Err(Error::Config(format!("[{section}] {key} must be >= {min}, got {v}")))
    }
}

/// Annotated defaults, printed by `--print-defaults`.
pub fn defaults_document() -> String {
    let body = RunConfig::with_defaults(Experiment::CommutatorSum, 0).to_canonical();
    let notes = "\
# Defaults for every key. [run] experiment and seed are required.
# experiment: vacuum-sample | oscillator-run | commutator-sum | nelson-run | hlike-ground
# unit_system: natural (hbar = m = omega0 = c = 1; atoms: hbar = m = e = 1) | gaussian-cgs
# workers: worker threads, 0 = all cores; results do not depend on it
# [modes] omega_min/omega_max in units of omega0; sampling: resonance | uniform
# [oscillator] damping = tau*omega0 (natural units); omega0 in 1/s (gaussian-cgs);
#   averaging: ensemble | time; dt and duration in units of 1/omega0
# [nelson] state: harmonic-ground | harmonic-coherent; lengths in sqrt(hbar/(m omega0)),
#   times in 1/omega0; boundary: reflect | clip | error | none
# [hydrogen] z for the headline, sweep over 1..=z_max, angular table over 0..=l_max
";
    format!("{notes}\n{body}")
}

struct Entry {
    value: String,
    line: usize,
}

fn parse_value<T: FromStr>(section: &str, key: &str, e: &Entry, expected: &str) -> Result<T> {
    e.value.parse::<T>().map_err(|_| {
        Error::Config(format!(
            "line {}: [{section}] {key} expects {expected}, got `{}`",
            e.line, e.value
        ))
    })
}

fn parse_enum<T: FromStr<Err = String>>(section: &str, key: &str, e: &Entry) -> Result<T> {
    e.value
        .parse::<T>()
        .map_err(|msg| Error::Config(format!("line {}: [{section}] {key}: {msg}", e.line)))
}

const SECTIONS: [&str; 5] = ["run", "modes", "oscillator", "nelson", "hydrogen"];

/// Parse and validate a configuration document.
pub fn parse_config(text: &str) -> Result<RunConfig> {
    let mut entries: BTreeMap<(String, String), Entry> = BTreeMap::new();
    let mut section: Option<String> = None;
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = match raw.find('#') {
            Some(p) => &raw[..p],
            None => raw,
        }
        .trim();
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix('[') {
            let name = rest
                .strip_suffix(']')
                .ok_or_else(|| Error::Config(format!("line {line_no}: malformed section header `{line}`")))?
                .trim();
            if !SECTIONS.contains(&name) {
                return Err(Error::Config(format!("line {line_no}: unknown section [{name}]")));
            }
            section = Some(name.to_string());
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| Error::Config(format!("line {line_no}: expected `key = value`, got `{line}`")))?;
        let sec = section
            .clone()
            .ok_or_else(|| Error::Config(format!("line {line_no}: key outside of any section")))?;
        let key = key.trim().to_string();
        let entry = Entry { value: value.trim().to_string(), line: line_no };
        if let Some(prev) = entries.insert((sec.clone(), key.clone()), entry) {
            return Err(Error::Config(format!(
                "line {line_no}: duplicate key `{key}` in [{sec}] (first set on line {})",
                prev.line
            )));
        }
    }

    let take = |entries: &mut BTreeMap<(String, String), Entry>, s: &str, k: &str| {
        entries.remove(&(s.to_string(), k.to_string()))
    };
    let experiment: Experiment = match take(&mut entries, "run", "experiment") {
        Some(e) => parse_enum("run", "experiment", &e)?,
        None => return Err(Error::Config("missing required key `experiment` in section [run]".into())),
    };
    let seed: u64 = match take(&mut entries, "run", "seed") {
        Some(e) => parse_value("run", "seed", &e, "an unsigned 64-bit integer")?,
        None => return Err(Error::Config("missing required key `seed` in section [run]".into())),
    };
    let mut rc = RunConfig::with_defaults(experiment, seed);

    const UINT: &str = "an unsigned integer";
    const REAL: &str = "a real number";
    for ((sec, key), e) in &entries {
        let (s, k) = (sec.as_str(), key.as_str());
        match (s, k) {
            ("run", "unit_system") => rc.unit_system = parse_enum(s, k, e)?,
            ("run", "workers") => rc.workers = parse_value(s, k, e, UINT)?,
            ("run", "output_dir") => rc.output_dir = PathBuf::from(&e.value),
            ("modes", "count") => rc.modes.count = parse_value(s, k, e, UINT)?,
            ("modes", "omega_min") => rc.modes.omega_min = parse_value(s, k, e, REAL)?,
            ("modes", "omega_max") => rc.modes.omega_max = parse_value(s, k, e, REAL)?,
            ("modes", "sampling") => rc.modes.sampling = parse_enum(s, k, e)?,
            ("modes", "volume") => rc.modes.volume = parse_value(s, k, e, REAL)?,
            ("oscillator", "damping") => rc.oscillator.damping = parse_value(s, k, e, REAL)?,
            ("oscillator", "omega0") => rc.oscillator.omega0 = parse_value(s, k, e, REAL)?,
            ("oscillator", "averaging") => rc.oscillator.averaging = parse_enum(s, k, e)?,
            ("oscillator", "realizations") => rc.oscillator.realizations = parse_value(s, k, e, UINT)?,
            ("oscillator", "time_samples") => rc.oscillator.time_samples = parse_value(s, k, e, UINT)?,
            ("oscillator", "dt") => rc.oscillator.dt = parse_value(s, k, e, REAL)?,
            ("oscillator", "duration") => rc.oscillator.duration = parse_value(s, k, e, REAL)?,
            ("oscillator", "record_every") => rc.oscillator.record_every = parse_value(s, k, e, UINT)?,
            ("oscillator", "convergence_levels") => {
                rc.oscillator.convergence_levels = parse_value(s, k, e, UINT)?
            }
            ("nelson", "state") => rc.nelson.state = parse_enum(s, k, e)?,
            ("nelson", "walkers") => rc.nelson.walkers = parse_value(s, k, e, UINT)?,
            ("nelson", "dt") => rc.nelson.dt = parse_value(s, k, e, REAL)?,
            ("nelson", "duration") => rc.nelson.duration = parse_value(s, k, e, REAL)?,
            ("nelson", "x_min") => rc.nelson.x_min = parse_value(s, k, e, REAL)?,
            ("nelson", "x_max") => rc.nelson.x_max = parse_value(s, k, e, REAL)?,
            ("nelson", "grid_points") => rc.nelson.grid_points = parse_value(s, k, e, UINT)?,
            ("nelson", "displacement") => rc.nelson.displacement = parse_value(s, k, e, REAL)?,
            ("nelson", "boundary") => rc.nelson.boundary = parse_enum(s, k, e)?,
            ("nelson", "bin_stride") => rc.nelson.bin_stride = parse_value(s, k, e, UINT)?,
            ("hydrogen", "z") => rc.hydrogen.z = parse_value(s, k, e, UINT)?,
            ("hydrogen", "z_max") => rc.hydrogen.z_max = parse_value(s, k, e, UINT)?,
            ("hydrogen", "l_max") => rc.hydrogen.l_max = parse_value(s, k, e, UINT)?,
            ("hydrogen", "radial_spread_ratio") => {
                rc.hydrogen.radial_spread_ratio = parse_value(s, k, e, REAL)?
            }
            _ => {
                return Err(Error::Config(format!(
                    "line {}: unknown key `{k}` in section [{s}]",
                    e.line
                )))
            }
        }
    }
    rc.validate()?;
    Ok(rc)
}
