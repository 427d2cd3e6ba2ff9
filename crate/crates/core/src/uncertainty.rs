//! Dispersion algebra: mean/fluctuation split, product bound, angular momentum.

use crate::error::{ensure_finite, Error, Result};
use serde::Serialize;
use std::io::Write;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DispersionReport {
    pub mean: f64,
    pub mean_square: f64,
    /// `⟨δ²⟩ = ⟨(x − x̄)²⟩`.
    pub fluctuation: f64,
    pub units: &'static str,
}

impl DispersionReport {
    /// `|⟨x²⟩ − (x̄² + ⟨δ²⟩)|` relative to `⟨x²⟩`.
    pub fn identity_defect(&self) -> f64 {
        let d = self.mean_square - (self.mean * self.mean + self.fluctuation);
        if self.mean_square == 0.0 {
            d.abs()
        } else {
            (d / self.mean_square).abs()
        }
    }
}

/// Sample mean, mean square and fluctuation (two-pass, population form).
pub fn mean_fluct_decompose(samples: &[f64]) -> Result<DispersionReport> {
    mean_fluct_decompose_with_units(samples, "")
}

pub fn mean_fluct_decompose_with_units(
    samples: &[f64],
    units: &'static str,
) -> Result<DispersionReport> {
    if samples.is_empty() {
        return Err(Error::Domain("cannot decompose an empty sample list".into()));
    }
    let n = samples.len() as f64;
    let mean = samples.iter().sum::<f64>() / n;
    let fluctuation = samples.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / n;
    let mean_square = samples.iter().map(|x| x * x).sum::<f64>() / n;
    ensure_finite("mean_square", mean_square)?;
    Ok(DispersionReport { mean, mean_square, fluctuation, units })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum UncertaintyFlag {
    Minimal,
    AboveBound,
    /// Below ħ²/4: the inputs are inconsistent.
    Violation,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct UncertaintyCheck {
    pub product: f64,
    pub bound: f64,
    pub flag: UncertaintyFlag,
}

/// Compare `dx2·dp2` against ħ²/4 with relative tolerance `rel_tol`.
pub fn uncertainty_product_check(dx2: f64, dp2: f64, hbar: f64, rel_tol: f64) -> Result<UncertaintyCheck> {
    if !(dx2 >= 0.0 && dp2 >= 0.0) {
        return Err(Error::Domain(format!("dispersions must be >= 0, got {dx2}, {dp2}")));
    }
    if !(hbar > 0.0 && rel_tol >= 0.0) {
        return Err(Error::Domain("hbar must be positive and tolerance nonnegative".into()));
    }
    let product = dx2 * dp2;
    let bound = 0.25 * hbar * hbar;
    let flag = if (product - bound).abs() <= rel_tol * bound {
        UncertaintyFlag::Minimal
    } else if product < bound {
        UncertaintyFlag::Violation
    } else {
        UncertaintyFlag::AboveBound
    };
    Ok(UncertaintyCheck { product, bound, flag })
}

/// Smallest radial momentum dispersion compatible with `⟨Δr²⟩`: ħ²/(4⟨Δr²⟩).
pub fn minimal_radial_momentum_dispersion(r2: f64, hbar: f64) -> Result<f64> {
    if !(r2 > 0.0 && r2.is_finite()) {
        return Err(Error::Domain(format!("<r^2> must be positive, got {r2}")));
    }
    Ok(hbar * hbar / (4.0 * r2))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AngularMomentumReport {
    pub l: u32,
    pub lz_bar2: f64,
    pub dlx2: f64,
    pub dly2: f64,
    pub dlz2: f64,
    pub l2_total: f64,
    /// `l(l+1)ħ²`, for comparison.
    pub standard_l2: f64,
    /// Whether `dLx²·dLy² ≥ (ħ²/4)·dLz²` holds for these components.
    /// False at l = 0, where the x/y fluctuations vanish but dLz² does not.
    pub satisfies_component_bound: bool,
}

/// `L̄z² = l²ħ²`, `δLx² = δLy² = lħ²/2`, `δLz² = ħ²/4`; total `(l+½)²ħ²`.
pub fn angular_momentum_paper_total(l: i64, hbar: f64) -> Result<AngularMomentumReport> {
    if l < 0 {
        return Err(Error::Domain(format!("l must be >= 0, got {l}")));
    }
    if !(hbar > 0.0 && hbar.is_finite()) {
        return Err(Error::Domain(format!("hbar must be positive, got {hbar}")));
    }
    let lf = l as f64;
    let h2 = hbar * hbar;
    let lz_bar2 = lf * lf * h2;
    let dlx2 = 0.5 * lf * h2;
    let dly2 = dlx2;
    let dlz2 = 0.25 * h2;
    // (2l+1)²/4 is exact in binary for the l range of interest
    let l2_total = lz_bar2 + dlx2 + dly2 + dlz2;
    Ok(AngularMomentumReport {
        l: l as u32,
        lz_bar2,
        dlx2,
        dly2,
        dlz2,
        l2_total,
        standard_l2: lf * (lf + 1.0) * h2,
        satisfies_component_bound: dlx2 * dly2 >= 0.25 * h2 * dlz2,
    })
}

/// Rows `l, paper_L2_over_hbar2, standard_L2_over_hbar2, delta` for `l ∈ 0..=l_max`.
pub fn write_angular_momentum_table<W: Write>(mut w: W, l_max: u32) -> std::io::Result<()> {
    writeln!(w, "l,paper_L2_over_hbar2,standard_L2_over_hbar2,delta")?;
    for l in 0..=l_max {
        let r = angular_momentum_paper_total(l as i64, 1.0).expect("l >= 0");
        writeln!(
            w,
            "{},{}",
            l,
            crate::output::csv_row(&[r.l2_total, r.standard_l2, r.l2_total - r.standard_l2])
        )?;
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct IsotropicDispersions {
    pub dlx2: f64,
    pub dly2: f64,
    pub dlz2: f64,
    pub sum: f64,
    pub satisfies_component_bound: bool,
}

/// Spherically symmetric ground state: each component ħ²/4.
pub fn isotropic_ground_dispersions(hbar: f64) -> Result<IsotropicDispersions> {
    if !(hbar > 0.0 && hbar.is_finite()) {
        return Err(Error::Domain(format!("hbar must be positive, got {hbar}")));
    }
    let c = 0.25 * hbar * hbar;
    Ok(IsotropicDispersions {
        dlx2: c,
        dly2: c,
        dlz2: c,
        sum: 3.0 * c,
        satisfies_component_bound: c * c >= 0.25 * hbar * hbar * c,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_distr::{Distribution, Normal};

    #[test]
    fn constant_and_symmetric_samples() {
        let r = mean_fluct_decompose(&[1.0, 1.0, 1.0]).unwrap();
        assert_eq!((r.mean, r.fluctuation, r.mean_square), (1.0, 0.0, 1.0));
        let r = mean_fluct_decompose(&[-1.0, 1.0]).unwrap();
        assert_eq!((r.mean, r.fluctuation, r.mean_square), (0.0, 1.0, 1.0));
        assert!(mean_fluct_decompose(&[]).is_err());
    }

    #[test]
    fn normal_samples_mean_square() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        let d = Normal::new(2.0, 3.0).unwrap();
        let xs: Vec<f64> = (0..1_000_000).map(|_| d.sample(&mut rng)).collect();
        let r = mean_fluct_decompose(&xs).unwrap();
        assert!((r.mean_square / 13.0 - 1.0).abs() < 0.01);
    }

    proptest! {
        #[test]
        fn decomposition_identity(xs in prop::collection::vec(-1e3f64..1e3, 1..200)) {
            let r = mean_fluct_decompose(&xs).unwrap();
            prop_assert!(r.identity_defect() < 1e-12 || r.mean_square < 1e-300);
        }

        #[test]
        fn paper_total_is_half_integer_square(l in 0i64..=100) {
            let r = angular_momentum_paper_total(l, 1.0).unwrap();
            let expect = (l as f64 + 0.5).powi(2);
            prop_assert_eq!(r.l2_total, expect);
            prop_assert_eq!(r.l2_total, r.lz_bar2 + r.dlx2 + r.dly2 + r.dlz2);
            prop_assert_eq!(r.l2_total - r.standard_l2, 0.25);
        }
    }

    #[test]
    fn product_flags() {
        let c = uncertainty_product_check(0.5, 0.5, 1.0, 1e-9).unwrap();
        assert_eq!(c.flag, UncertaintyFlag::Minimal);
        let c = uncertainty_product_check(1.0, 1.0 / 8.0, 1.0, 1e-9).unwrap();
        assert_eq!(c.flag, UncertaintyFlag::Violation);
        let c = uncertainty_product_check(1.0, 1.0, 1.0, 1e-9).unwrap();
        assert_eq!(c.flag, UncertaintyFlag::AboveBound);
        assert!(uncertainty_product_check(-1.0, 1.0, 1.0, 0.0).is_err());
    }

    #[test]
    fn minimal_radial_dispersion() {
        assert_eq!(minimal_radial_momentum_dispersion(1.0, 1.0).unwrap(), 0.25);
        assert!(minimal_radial_momentum_dispersion(0.0, 1.0).is_err());
    }

    #[test]
    fn angular_table_values() {
        let totals: Vec<f64> =
            (0..4).map(|l| angular_momentum_paper_total(l, 1.0).unwrap().l2_total).collect();
        assert_eq!(totals, vec![0.25, 2.25, 6.25, 12.25]);
        assert_eq!(angular_momentum_paper_total(2, 1.0).unwrap().standard_l2, 6.0);
        assert!(angular_momentum_paper_total(-1, 1.0).is_err());
        assert!(!angular_momentum_paper_total(0, 1.0).unwrap().satisfies_component_bound);
        assert!(angular_momentum_paper_total(1, 1.0).unwrap().satisfies_component_bound);
    }

    #[test]
    fn isotropic_sum() {
        let d = isotropic_ground_dispersions(1.0).unwrap();
        assert_eq!((d.dlx2, d.sum), (0.25, 0.75));
        assert!(d.satisfies_component_bound);
        assert_eq!(isotropic_ground_dispersions(2.0).unwrap().sum, 3.0);
    }

    #[test]
    fn table_csv() {
        let mut buf = Vec::new();
        write_angular_momentum_table(&mut buf, 2).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), 4);
        assert!(lines[3].starts_with("2,6.25"));
    }
}
