//! Independent oracles shared by the integration and acceptance tests.
#![allow(dead_code)]

/// Adaptive Simpson quadrature of `f` over `[a, b]` split at `breaks`.
pub fn adaptive_simpson<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, breaks: &[f64], tol: f64) -> f64 {
    let mut pts = vec![a];
    pts.extend(breaks.iter().copied().filter(|&x| x > a && x < b));
    pts.push(b);
    pts.sort_by(|x, y| x.partial_cmp(y).unwrap());
    pts.windows(2).map(|w| simpson_panel(f, w[0], w[1], tol)).sum()
}

fn simpson_panel<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: f64) -> f64 {
    let (fa, fb) = (f(a), f(b));
    let m = 0.5 * (a + b);
    let fm = f(m);
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    recurse(f, a, b, fa, fm, fb, whole, tol, 60)
}

#[allow(clippy::too_many_arguments)]
fn recurse<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
) -> f64 {
    let m = 0.5 * (a + b);
    let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
    let (flm, frm) = (f(lm), f(rm));
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let delta = left + right - whole;
    if depth == 0 || delta.abs() <= 15.0 * tol {
        return left + right + delta / 15.0;
    }
    recurse(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1)
        + recurse(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)
}

/// `|χ(ω)|²` for `ω₀ = 1`.
pub fn chi2(omega: f64, tau: f64) -> f64 {
    let re = 1.0 - omega * omega;
    let im = tau * omega.powi(3);
    1.0 / (re * re + im * im)
}

/// Breakpoints clustering around a line of half width `gamma` at 1.
pub fn line_breaks(gamma: f64) -> Vec<f64> {
    let mut b = vec![1.0];
    for k in [1.0, 10.0, 100.0, 1e3, 1e4, 1e5] {
        b.push(1.0 - k * gamma);
        b.push(1.0 + k * gamma);
    }
    b
}

/// Continuum commutator in units of ħ (ħ = m = ω₀ = c = 1):
/// `(2τ/π) ∫ ω² |χ|² dω`.
pub fn commutator_integral(tau: f64, w_min: f64, w_max: f64) -> f64 {
    let f = |w: f64| w * w * chi2(w, tau);
    2.0 * tau / std::f64::consts::PI * adaptive_simpson(&f, w_min, w_max, &line_breaks(tau / 2.0), 1e-10 / tau)
}

/// Continuum `⟨x²⟩` per component: `(τ/π) ∫ ω³ |χ|² dω`.
pub fn x2_integral(tau: f64, w_min: f64, w_max: f64) -> f64 {
    let f = |w: f64| w.powi(3) * chi2(w, tau);
    tau / std::f64::consts::PI * adaptive_simpson(&f, w_min, w_max, &line_breaks(tau / 2.0), 1e-10 / tau)
}

/// Continuum `⟨p²⟩` per component: `(τ/π) ∫ ω |χ|² dω`.
pub fn p2_integral(tau: f64, w_min: f64, w_max: f64) -> f64 {
    let f = |w: f64| w * chi2(w, tau);
    tau / std::f64::consts::PI * adaptive_simpson(&f, w_min, w_max, &line_breaks(tau / 2.0), 1e-10 / tau)
}

/// Relative L2 distance between two sampled vector series.
pub fn relative_l2(a: &[[f64; 3]], b: &[[f64; 3]]) -> f64 {
    let (mut num, mut den) = (0.0, 0.0);
    for (x, y) in a.iter().zip(b) {
        for k in 0..3 {
            num += (x[k] - y[k]).powi(2);
            den += y[k] * y[k];
        }
    }
    (num / den).sqrt()
}
