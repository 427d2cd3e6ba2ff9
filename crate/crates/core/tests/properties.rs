//! Cross-module properties checked against independent oracles.

mod common;

use num_complex::Complex64;
use proptest::prelude::*;
use sed_core::grid::Axis;
use sed_core::hydrogen::{minimize_ground_energy, AtomSpec};
use sed_core::nelson::{
    actions_from_wavefunction, energy_split, madelung_residuals, wavefunction_from_actions, AnalyticState,
    BoundaryPolicy, EvolveOptions, NodePolicy, WalkerEnsemble, WavefunctionGrid,
};
use sed_core::oscillator::{
    commutator_mode_sum, phase_averaged_moments, resonance_sampling, steady_state_solution, OscillatorParams,
};
use sed_core::vacuum_field::{build_mode_set, ModeSamplingConfig, SamplingLaw};

fn uniform_modes(count: usize, seed: u64) -> ModeSamplingConfig {
    ModeSamplingConfig {
        count,
        omega_min: 0.2,
        omega_max: 5.0,
        law: SamplingLaw::Uniform,
        seed,
        light_speed: 1.0,
        hbar: 1.0,
        volume: 1.0,
    }
}

#[test]
fn commutator_sum_approaches_the_continuum_integral() {
    let p = OscillatorParams::natural(1e-3).unwrap();
    let oracle = common::commutator_integral(1e-3, 0.02, 50.0);
    let errors: Vec<f64> = [250, 1000, 4000, 16000]
        .iter()
        .map(|&n| {
            let ms = build_mode_set(&resonance_sampling(&p, n, 0.02, 50.0, 1)).unwrap();
            (commutator_mode_sum(&p, &ms).unwrap() / oracle - 1.0).abs()
        })
        .collect();
    assert!(errors.last().unwrap() < &1e-3, "{errors:?}");
    assert!(errors[0] > *errors.last().unwrap(), "{errors:?}");
}

#[test]
fn phase_averaged_moments_match_quadrature() {
    let p = OscillatorParams::natural(1e-3).unwrap();
    let ms = build_mode_set(&resonance_sampling(&p, 20000, 0.02, 50.0, 2)).unwrap();
    let (x2, p2) = phase_averaged_moments(&p, &ms).unwrap();
    let (xo, po) = (common::x2_integral(1e-3, 0.02, 50.0), common::p2_integral(1e-3, 0.02, 50.0));
    assert!((x2 / xo - 1.0).abs() < 0.01, "{x2} vs {xo}");
    assert!((p2 / po - 1.0).abs() < 0.01, "{p2} vs {po}");
}

#[test]
fn steady_state_is_linear_in_the_field() {
    let p = OscillatorParams::natural(1e-4).unwrap();
    let a = build_mode_set(&uniform_modes(40, 7)).unwrap();
    let b = build_mode_set(&uniform_modes(60, 8)).unwrap();
    let times = [0.0, 1.3, 17.0, 250.5];
    let sa = steady_state_solution(&a, &p, &times).unwrap();
    let sb = steady_state_solution(&b, &p, &times).unwrap();
    let sab = steady_state_solution(&a.union(&b), &p, &times).unwrap();
    for k in 0..times.len() {
        assert!((sab.positions[k] - (sa.positions[k] + sb.positions[k])).norm() < 1e-12);
        assert!((sab.momenta[k] - (sa.momenta[k] + sb.momenta[k])).norm() < 1e-12);
    }
}

#[test]
fn half_period_phase_shift_flips_the_response() {
    let p = OscillatorParams::natural(1e-4).unwrap();
    let ms = build_mode_set(&uniform_modes(50, 9)).unwrap();
    let times = [0.0, 2.5, 40.0];
    let s = steady_state_solution(&ms, &p, &times).unwrap();
    let flipped = steady_state_solution(&ms.with_global_phase_shift(std::f64::consts::PI), &p, &times).unwrap();
    for k in 0..times.len() {
        assert!((s.positions[k] + flipped.positions[k]).norm() < 1e-10);
    }
}

fn rotated(psi: &WavefunctionGrid, theta: f64) -> WavefunctionGrid {
    let rot = Complex64::from_polar(1.0, theta);
    WavefunctionGrid::new(psi.axis().clone(), psi.values().iter().map(|v| v * rot).collect(), psi.time()).unwrap()
}

#[test]
fn global_phase_leaves_energy_and_residuals_unchanged() {
    let s = AnalyticState::HarmonicCoherent { mass: 1.0, omega: 1.0, hbar: 1.0, displacement: 1.2 };
    let axis = Axis::cartesian(-9.0, 9.0, 1801).unwrap();
    let v = s.potential(&axis);
    let psi = s.sample(&axis, 0.4).unwrap();
    let e0 = energy_split(&psi, &v, 1.0, 1.0, NodePolicy::Reject).unwrap();
    let e1 = energy_split(&rotated(&psi, 2.1), &v, 1.0, 1.0, NodePolicy::Reject).unwrap();
    assert!((e0.total - e1.total).abs() < 1e-10);
    assert!((e0.t_current - e1.t_current).abs() < 1e-10);

    let series = s.series(&axis, 0.4, 1e-3, 1).unwrap();
    let rotated_series: Vec<_> = series.iter().map(|p| rotated(p, -0.8)).collect();
    let m0 = madelung_residuals(&series, &v, 1.0, 1.0, NodePolicy::Reject).unwrap();
    let m1 = madelung_residuals(&rotated_series, &v, 1.0, 1.0, NodePolicy::Reject).unwrap();
    assert!((m0.aa1.norms.linf - m1.aa1.norms.linf).abs() < 1e-8);
    assert!((m0.aa2.norms.linf - m1.aa2.norms.linf).abs() < 1e-8);
    // coherent-state energy: ħω/2 + mω²d²/2
    assert!((e0.total - (0.5 + 0.5 * 1.44)).abs() < 1e-8);
}

#[test]
fn walker_evolution_resumes_exactly() {
    let state = AnalyticState::HarmonicGround { mass: 1.0, omega: 1.0, hbar: 1.0 };
    let start = WalkerEnsemble::from_positions((0..500).map(|i| -2.0 + i as f64 * 0.008).collect(), 21);
    let opts = |steps| EvolveOptions {
        dt: 1e-3,
        steps,
        mass: 1.0,
        hbar: 1.0,
        boundary: BoundaryPolicy::Reflect,
        domain: (-8.0, 8.0),
    };
    let whole = start.evolve(&state, &opts(400)).unwrap();
    let split = start.evolve(&state, &opts(150)).unwrap().evolve(&state, &opts(250)).unwrap();
    assert_eq!(whole, split);
}

#[test]
fn hydrogen_minimum_scales_with_z() {
    let g1 = minimize_ground_energy(&AtomSpec::natural(1).unwrap()).unwrap();
    for z in [2u32, 5, 11] {
        let g = minimize_ground_energy(&AtomSpec::natural(z).unwrap()).unwrap();
        let zf = z as f64;
        assert!((g.e_min / (zf * zf * g1.e_min) - 1.0).abs() < 1e-14);
        assert!((g.r_min * zf / g1.r_min - 1.0).abs() < 1e-14);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn actions_round_trip(d in -2.0f64..2.0, t in 0.0f64..6.0) {
        let s = AnalyticState::HarmonicCoherent { mass: 1.0, omega: 1.0, hbar: 1.0, displacement: d };
        let axis = Axis::cartesian(-10.0, 10.0, 801).unwrap();
        let psi = s.sample(&axis, t).unwrap();
        let a = actions_from_wavefunction(&psi, 1.0, NodePolicy::Reject).unwrap();
        let back = wavefunction_from_actions(&a, 1.0, t).unwrap();
        // equal up to one global phase
        let i0 = 400;
        let phase = psi.values()[i0] / back.values()[i0];
        for (x, y) in psi.values().iter().zip(back.values()) {
            prop_assert!((x - y * phase).norm() < 1e-10);
        }
    }

    #[test]
    fn coherent_energy_is_conserved(d in -2.0f64..2.0, t in 0.0f64..6.0) {
        let s = AnalyticState::HarmonicCoherent { mass: 1.0, omega: 1.0, hbar: 1.0, displacement: d };
        let axis = Axis::cartesian(-12.0, 12.0, 2401).unwrap();
        let e = energy_split(&s.sample(&axis, t).unwrap(), &s.potential(&axis), 1.0, 1.0, NodePolicy::Reject).unwrap();
        prop_assert!((e.total - 0.5 * (1.0 + d * d)).abs() < 1e-7);
        prop_assert!(e.gap().abs() < 1e-7);
    }
}
