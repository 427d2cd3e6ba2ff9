//! Walker ensembles for the forward stochastic differential equation.

use super::{AnalyticState, VelocityFields};
use crate::error::{Error, Result};
use crate::grid::{Axis, AxisKind};
use crate::rng::{derive_seed, stream_rng};
use rand::Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use std::io::Write;

/// Forward drift `b(x, t)`.
pub trait Drift: Sync {
    fn forward_drift(&self, x: f64, t: f64) -> f64;
}

impl Drift for AnalyticState {
    fn forward_drift(&self, x: f64, t: f64) -> f64 {
        AnalyticState::forward_drift(self, x, t)
    }
}

/// Static drift `V − U` interpolated from the grid.
impl Drift for VelocityFields {
    fn forward_drift(&self, x: f64, _t: f64) -> f64 {
        let v = self.axis.interpolate(&self.current, x);
        let u = self.axis.interpolate(&self.osmotic, x);
        v - u
    }
}

impl<F: Fn(f64, f64) -> f64 + Sync> Drift for F {
    fn forward_drift(&self, x: f64, t: f64) -> f64 {
        self(x, t)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum BoundaryPolicy {
    #[default]
    Reflect,
    Clip,
    /// Escaping the domain is a range error.
    Error,
    /// No domain.
    None,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvolveOptions {
    pub dt: f64,
    pub steps: u64,
    pub mass: f64,
    pub hbar: f64,
    pub boundary: BoundaryPolicy,
    pub domain: (f64, f64),
}

/// Walker positions with per-walker generator state.
///
/// Walker `i` draws from stream `i` of the ensemble seed; `word_pos[i]` is
/// where that stream resumes. Evolution is therefore independent of how the
/// walkers are split between threads.
#[derive(Debug, Clone, PartialEq)]
pub struct WalkerEnsemble {
    pub positions: Vec<f64>,
    pub seed: u64,
    pub steps_taken: u64,
    pub time: f64,
    word_pos: Vec<u128>,
}

impl WalkerEnsemble {
    pub fn from_positions(positions: Vec<f64>, seed: u64) -> Self {
        let n = positions.len();
        Self { positions, seed, steps_taken: 0, time: 0.0, word_pos: vec![0; n] }
    }

    /// `n` walkers drawn from the tabulated density by inverse CDF with
    /// linear interpolation inside each cell. Uses a stream of
    /// `derive_seed(seed, u64::MAX)`, disjoint from the evolution streams.
    pub fn from_density(axis: &Axis, density: &[f64], n: usize, seed: u64) -> Result<Self> {
        if axis.kind() != AxisKind::Cartesian {
            return Err(Error::Domain("walkers live on cartesian axes".into()));
        }
        axis.check_len("density", density.len())?;
        if density.iter().any(|p| !(p.is_finite() && *p >= 0.0)) {
            return Err(Error::Domain("density must be finite and nonnegative".into()));
        }
        let h = axis.spacing();
        let mut cdf = Vec::with_capacity(density.len());
        cdf.push(0.0);
        for i in 1..density.len() {
            cdf.push(cdf[i - 1] + 0.5 * h * (density[i - 1] + density[i]));
        }
        let total = *cdf.last().unwrap();
        if !(total > 0.0) {
            return Err(Error::Domain("density has zero mass".into()));
        }
        let mut rng = stream_rng(derive_seed(seed, u64::MAX), 0, 0);
        let positions = (0..n)
            .map(|_| {
                let u = rng.random::<f64>() * total;
                let i = cdf.partition_point(|&c| c <= u).clamp(1, cdf.len() - 1);
                let cell = cdf[i] - cdf[i - 1];
                let frac = if cell > 0.0 { (u - cdf[i - 1]) / cell } else { 0.5 };
                axis.point(i - 1) + frac * h
            })
            .collect();
        Ok(Self::from_positions(positions, seed))
    }

    pub fn len(&self) -> usize {
        self.positions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.positions.is_empty()
    }

    /// Explicit Euler–Maruyama: `x += b dt + √(ħ dt/m) ξ`.
    pub fn evolve<D: Drift + ?Sized>(&self, drift: &D, opts: &EvolveOptions) -> Result<WalkerEnsemble> {
        let EvolveOptions { dt, steps, mass, hbar, boundary, domain } = *opts;
        if !(dt.is_finite() && dt > 0.0) {
            return Err(Error::Domain(format!("dt must be positive, got {dt}")));
        }
        if !(mass > 0.0 && hbar >= 0.0) {
            return Err(Error::Domain("need mass > 0 and hbar >= 0".into()));
        }
        let (lo, hi) = domain;
        if boundary != BoundaryPolicy::None && !(lo < hi) {
            return Err(Error::Domain(format!("invalid walker domain [{lo}, {hi}]")));
        }
        let sigma = (hbar * dt / mass).sqrt();
        let t0 = self.time;
        let seed = self.seed;
        let mut positions = self.positions.clone();
        let mut word_pos = self.word_pos.clone();
        let escapes: Vec<usize> = positions
            .par_iter_mut()
            .zip(word_pos.par_iter_mut())
            .enumerate()
            .filter_map(|(i, (x, wp))| {
                let mut rng = stream_rng(seed, i as u64, *wp);
                let mut escaped = false;
                for k in 0..steps {
                    let t = t0 + k as f64 * dt;
                    let xi: f64 = rng.sample(StandardNormal);
                    *x += drift.forward_drift(*x, t) * dt + sigma * xi;
                    match boundary {
                        BoundaryPolicy::None => {}
                        BoundaryPolicy::Clip => *x = x.clamp(lo, hi),
                        BoundaryPolicy::Reflect => *x = reflect(*x, lo, hi),
                        BoundaryPolicy::Error => {
                            if *x < lo || *x > hi {
                                escaped = true;
                                break;
                            }
                        }
                    }
                }
                *wp = rng.get_word_pos();
                escaped.then_some(i)
            })
            .collect();
        if let Some(&i) = escapes.iter().min() {
            return Err(Error::Range(format!("walker {i} left the domain [{lo}, {hi}]")));
        }
        Ok(WalkerEnsemble {
            positions,
            seed,
            steps_taken: self.steps_taken + steps,
            time: t0 + steps as f64 * dt,
            word_pos,
        })
    }

    pub fn mean_and_variance(&self) -> (f64, f64) {
        let n = self.positions.len() as f64;
        let mean = self.positions.iter().sum::<f64>() / n;
        let var = self.positions.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / n;
        (mean, var)
    }

    /// Columns `walker_id, x`.
    pub fn write_csv<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "walker_id,x")?;
        for (i, x) in self.positions.iter().enumerate() {
            writeln!(w, "{i},{}", crate::output::fmt_f64(*x))?;
        }
        Ok(())
    }
}

fn reflect(mut x: f64, lo: f64, hi: f64) -> f64 {
    let width = hi - lo;
    for _ in 0..4 {
        if x < lo {
            x = 2.0 * lo - x;
        } else if x > hi {
            x = 2.0 * hi - x;
        } else {
            return x;
        }
    }
    lo + (x - lo).rem_euclid(width)
}

/// L1 distance between the walker histogram and the tabulated density.
/// Bin edges sit on every `stride`-th grid point; walkers outside the grid
/// count fully towards the distance.
pub fn density_l1_distance(positions: &[f64], axis: &Axis, density: &[f64], stride: usize) -> Result<f64> {
    axis.check_len("density", density.len())?;
    if stride == 0 || stride >= axis.len() {
        return Err(Error::Domain(format!("bin stride {stride} out of range")));
    }
    if positions.is_empty() {
        return Err(Error::Domain("no walkers".into()));
    }
    let h = axis.spacing();
    let n_bins = (axis.len() - 1) / stride;
    let edge = |b: usize| axis.point(b * stride);
    let mut model = vec![0.0; n_bins];
    for (b, m) in model.iter_mut().enumerate() {
        for i in b * stride..(b + 1) * stride {
            *m += 0.5 * h * (density[i] + density[i + 1]);
        }
    }
    let mass: f64 = model.iter().sum();
    let mut counts = vec![0usize; n_bins];
    let mut outside = 0usize;
    let (x0, width) = (edge(0), stride as f64 * h);
    for &x in positions {
        let s = (x - x0) / width;
        if s >= 0.0 && (s as usize) < n_bins {
            counts[s as usize] += 1;
        } else {
            outside += 1;
        }
    }
    let n = positions.len() as f64;
    let inside: f64 = counts
        .iter()
        .zip(&model)
        .map(|(&c, &m)| (c as f64 / n - m / mass).abs())
        .sum();
    Ok(inside + outside as f64 / n)
}
