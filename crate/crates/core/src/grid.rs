//! Uniform 1-D Cartesian and radial grids with fourth-order finite
//! differences and composite Simpson quadrature.
//!
//! Radial grids hold the points `r_i = i·h`, `i = 1..=n`. The origin is not
//! stored; quadrature treats it as an implicit node where the `4πr²`
//! weighted integrand vanishes.

use crate::error::{Error, Result};
use std::f64::consts::PI;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AxisKind {
    Cartesian,
    /// Spherically symmetric (s-state) radial coordinate.
    Radial,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Axis {
    kind: AxisKind,
    start: f64,
    spacing: f64,
    len: usize,
}

impl Axis {
    /// `len` equally spaced points covering `[min, max]` inclusive.
    pub fn cartesian(min: f64, max: f64, len: usize) -> Result<Self> {
        if !(min.is_finite() && max.is_finite()) || max <= min {
            return Err(Error::Domain(format!("invalid cartesian range [{min}, {max}]")));
        }
        if len < 6 {
            return Err(Error::Domain(format!("grid needs at least 6 points, got {len}")));
        }
        Ok(Self {
            kind: AxisKind::Cartesian,
            start: min,
            spacing: (max - min) / (len - 1) as f64,
            len,
        })
    }

    /// Radial points `h, 2h, ..., r_max` with `h = r_max / len`.
    pub fn radial(r_max: f64, len: usize) -> Result<Self> {
        if !(r_max.is_finite() && r_max > 0.0) {
            return Err(Error::Domain(format!("radial extent must be positive, got {r_max}")));
        }
        if len < 6 {
            return Err(Error::Domain(format!("grid needs at least 6 points, got {len}")));
        }
        let spacing = r_max / len as f64;
        Ok(Self { kind: AxisKind::Radial, start: spacing, spacing, len })
    }

    pub fn kind(&self) -> AxisKind {
        self.kind
    }

    pub fn spacing(&self) -> f64 {
        self.spacing
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn first(&self) -> f64 {
        self.start
    }

    pub fn last(&self) -> f64 {
        self.point(self.len - 1)
    }

    pub fn point(&self, i: usize) -> f64 {
        self.start + i as f64 * self.spacing
    }

    pub fn points(&self) -> Vec<f64> {
        (0..self.len).map(|i| self.point(i)).collect()
    }

    pub fn same_as(&self, other: &Axis) -> bool {
        self.kind == other.kind
            && self.len == other.len
            && (self.start - other.start).abs() <= 1e-12 * self.spacing
            && (self.spacing - other.spacing).abs() <= 1e-12 * self.spacing
    }

    pub(crate) fn check_len(&self, name: &str, n: usize) -> Result<()> {
        if n == self.len {
            Ok(())
        } else {
            Err(Error::Shape(format!("{name} has {n} values, grid has {}", self.len)))
        }
    }

    /// First derivative, fourth order everywhere (one-sided near the edges).
    pub fn gradient(&self, f: &[f64]) -> Vec<f64> {
        let n = f.len();
        let h12 = 12.0 * self.spacing;
        let mut d = vec![0.0; n];
        for i in 2..n - 2 {
            d[i] = (f[i - 2] - 8.0 * f[i - 1] + 8.0 * f[i + 1] - f[i + 2]) / h12;
        }
        d[0] = (-25.0 * f[0] + 48.0 * f[1] - 36.0 * f[2] + 16.0 * f[3] - 3.0 * f[4]) / h12;
        d[1] = (-3.0 * f[0] - 10.0 * f[1] + 18.0 * f[2] - 6.0 * f[3] + f[4]) / h12;
        d[n - 1] = (25.0 * f[n - 1] - 48.0 * f[n - 2] + 36.0 * f[n - 3] - 16.0 * f[n - 4]
            + 3.0 * f[n - 5])
            / h12;
        d[n - 2] = (3.0 * f[n - 1] + 10.0 * f[n - 2] - 18.0 * f[n - 3] + 6.0 * f[n - 4]
            - f[n - 5])
            / h12;
        d
    }

    /// Second derivative along the coordinate (not the Laplacian).
    pub fn second_derivative(&self, f: &[f64]) -> Vec<f64> {
        let n = f.len();
        let h2 = 12.0 * self.spacing * self.spacing;
        let mut d = vec![0.0; n];
        for i in 2..n - 2 {
            d[i] = (-f[i - 2] + 16.0 * f[i - 1] - 30.0 * f[i] + 16.0 * f[i + 1] - f[i + 2]) / h2;
        }
        d[0] = (45.0 * f[0] - 154.0 * f[1] + 214.0 * f[2] - 156.0 * f[3] + 61.0 * f[4]
            - 10.0 * f[5])
            / h2;
        d[1] = (10.0 * f[0] - 15.0 * f[1] - 4.0 * f[2] + 14.0 * f[3] - 6.0 * f[4] + f[5]) / h2;
        d[n - 1] = (45.0 * f[n - 1] - 154.0 * f[n - 2] + 214.0 * f[n - 3] - 156.0 * f[n - 4]
            + 61.0 * f[n - 5]
            - 10.0 * f[n - 6])
            / h2;
        d[n - 2] = (10.0 * f[n - 1] - 15.0 * f[n - 2] - 4.0 * f[n - 3] + 14.0 * f[n - 4]
            - 6.0 * f[n - 5]
            + f[n - 6])
            / h2;
        d
    }

    /// ∇²f; for radial grids `f'' + 2f'/r`.
    pub fn laplacian(&self, f: &[f64]) -> Vec<f64> {
        let mut lap = self.second_derivative(f);
        if self.kind == AxisKind::Radial {
            let g = self.gradient(f);
            for (i, l) in lap.iter_mut().enumerate() {
                *l += 2.0 * g[i] / self.point(i);
            }
        }
        lap
    }

    /// ∇·F for a field pointing along the axis; radial: `(1/r²) d(r²F)/dr`.
    pub fn divergence(&self, flux: &[f64]) -> Vec<f64> {
        let mut div = self.gradient(flux);
        if self.kind == AxisKind::Radial {
            for (i, d) in div.iter_mut().enumerate() {
                *d += 2.0 * flux[i] / self.point(i);
            }
        }
        div
    }

    /// Quadrature weights for ∫ f dV (dV = dx, or 4πr² dr on radial grids).
    pub fn volume_weights(&self) -> Vec<f64> {
        match self.kind {
            AxisKind::Cartesian => simpson_weights(self.len, self.spacing),
            AxisKind::Radial => {
                // Implicit zero-valued origin node at index 0.
                let full = simpson_weights(self.len + 1, self.spacing);
                full[1..]
                    .iter()
                    .enumerate()
                    .map(|(i, w)| w * 4.0 * PI * self.point(i).powi(2))
                    .collect()
            }
        }
    }

    pub fn integrate(&self, f: &[f64]) -> f64 {
        self.volume_weights().iter().zip(f).map(|(w, v)| w * v).sum()
    }

    /// Integral over the points where `mask` is true.
    pub fn integrate_masked(&self, f: &[f64], mask: &[bool]) -> f64 {
        self.volume_weights()
            .iter()
            .zip(f)
            .zip(mask)
            .filter(|(_, &m)| m)
            .map(|((w, v), _)| w * v)
            .sum()
    }

    /// Linear interpolation with constant extension outside the grid.
    pub fn interpolate(&self, f: &[f64], x: f64) -> f64 {
        let s = (x - self.start) / self.spacing;
        if s <= 0.0 {
            return f[0];
        }
        let i = s.floor() as usize;
        if i >= self.len - 1 {
            return f[self.len - 1];
        }
        let frac = s - i as f64;
        f[i] + frac * (f[i + 1] - f[i])
    }
}

/// Composite Simpson weights for `n` equally spaced nodes. An even number of
/// intervals uses plain Simpson; an odd number closes with the 3/8 rule.
pub fn simpson_weights(n: usize, h: f64) -> Vec<f64> {
    let mut w = vec![0.0; n];
    if n < 2 {
        return w;
    }
    let intervals = n - 1;
    if intervals == 1 {
        w[0] = h / 2.0;
        w[1] = h / 2.0;
        return w;
    }
    let (simpson_end, tail) = if intervals.is_multiple_of(2) || intervals < 3 {
        (intervals, false)
    } else {
        (intervals - 3, true)
    };
    let mut k = 0;
    while k + 2 <= simpson_end {
        w[k] += h / 3.0;
        w[k + 1] += 4.0 * h / 3.0;
        w[k + 2] += h / 3.0;
        k += 2;
    }
    if tail {
        let s = simpson_end;
        let c = 3.0 * h / 8.0;
        w[s] += c;
        w[s + 1] += 3.0 * c;
        w[s + 2] += 3.0 * c;
        w[s + 3] += c;
    }
    w
}

/// Points where every value within `radius` grid steps is valid.
pub fn erode_mask(mask: &[bool], radius: usize) -> Vec<bool> {
    let n = mask.len();
    (0..n)
        .map(|i| {
            let lo = i.saturating_sub(radius);
            let hi = (i + radius).min(n - 1);
            mask[lo..=hi].iter().all(|&m| m)
        })
        .collect()
}
