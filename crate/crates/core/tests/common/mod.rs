//! Independent oracles shared by integration tests.
#![allow(dead_code)]

use std::f64::consts::PI;

pub fn adaptive_simpson(f: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    fn simpson(f: &dyn Fn(f64) -> f64, a: f64, fa: f64, b: f64, fb: f64) -> (f64, f64, f64) {
        let m = 0.5 * (a + b);
        let fm = f(m);
        (m, fm, (b - a) / 6.0 * (fa + 4.0 * fm + fb))
    }
    #[allow(clippy::too_many_arguments)]
    fn recurse(
        f: &dyn Fn(f64) -> f64,
        a: f64,
        fa: f64,
        b: f64,
        fb: f64,
        m: f64,
        fm: f64,
        whole: f64,
        tol: f64,
        depth: u32,
    ) -> f64 {
        let (lm, flm, left) = simpson(f, a, fa, m, fm);
        let (rm, frm, right) = simpson(f, m, fm, b, fb);
        let delta = left + right - whole;
        if depth == 0 || delta.abs() <= 15.0 * tol {
            return left + right + delta / 15.0;
        }
        recurse(f, a, fa, m, fm, lm, flm, left, 0.5 * tol, depth - 1)
            + recurse(f, m, fm, b, fb, rm, frm, right, 0.5 * tol, depth - 1)
    }
    let (fa, fb) = (f(a), f(b));
    let (m, fm, whole) = simpson(f, a, fa, b, fb);
    recurse(f, a, fa, b, fb, m, fm, whole, tol, 50)
}

/// Arc length `4a ∫_0^{π/2} √(1 − e² sin²t) dt`.
pub fn quadrature_perimeter(a: f64, b: f64) -> f64 {
    let e2 = 1.0 - (b / a).powi(2);
    4.0 * a
        * adaptive_simpson(
            &|t: f64| (1.0 - e2 * t.sin().powi(2)).sqrt(),
            0.0,
            PI / 2.0,
            1e-14,
        )
}

/// Largest central difference of the RSS under relative parameter steps of
/// `1e-6`, divided by the data power `Σ y²`.
pub fn relative_gradient_norm(
    fit: &grapespin::fit::LorentzianFit,
    spectrum: &grapespin::nv::OdmrSpectrum,
) -> f64 {
    use grapespin::fit::{double_lorentzian, LorentzianParams};
    let rss = |p: &[f64; 7]| -> f64 {
        let params = LorentzianParams::from_array(p);
        spectrum
            .frequencies
            .iter()
            .zip(&spectrum.pl)
            .map(|(&f, &y)| (double_lorentzian(f, &params) - y).powi(2))
            .sum()
    };
    let p = fit.params.to_array();
    let h = 1e-6;
    let power: f64 = spectrum.pl.iter().map(|y| y * y).sum();
    (0..7)
        .map(|k| {
            let (mut up, mut down) = (p, p);
            up[k] *= 1.0 + h;
            down[k] *= 1.0 - h;
            ((rss(&up) - rss(&down)) / (2.0 * h)).abs()
        })
        .fold(0.0, f64::max)
        / power
}

/// Default model with every rate, the drive strength and the drive detuning
/// scaled by independent factors in `[1 - spread, 1 + spread]`.
pub fn jittered_params(rng: &mut impl rand::Rng, spread: f64) -> grapespin::nv::NvModelParams {
    use grapespin::nv::{NvModelParams, TWO_PI};
    let mut jitter = |x: f64| x * rng.random_range(1.0 - spread..1.0 + spread);
    let base = NvModelParams::with_pump_rate(jitter(TWO_PI * 1e6));
    NvModelParams {
        dephasing_rate: jitter(base.dephasing_rate),
        coupling: jitter(TWO_PI * 1e6),
        omega_mw: base.omega_12 + TWO_PI * 4e6 * (jitter(1.0) - 1.0),
        gamma_sp: jitter(base.gamma_sp),
        gamma_sp0: jitter(base.gamma_sp0),
        lambda_0: jitter(base.lambda_0),
        gamma_74: jitter(base.gamma_74),
        gamma_75: jitter(base.gamma_75),
        gamma_76: jitter(base.gamma_76),
        gamma_17: jitter(base.gamma_17),
        gamma_27: jitter(base.gamma_27),
        gamma_37: jitter(base.gamma_37),
        gamma_84: jitter(base.gamma_84),
        gamma_85: jitter(base.gamma_85),
        gamma_86: jitter(base.gamma_86),
        gamma_19: jitter(base.gamma_19),
        gamma_29: jitter(base.gamma_29),
        gamma_39: jitter(base.gamma_39),
        gamma_12: jitter(base.gamma_12),
        gamma_21: jitter(base.gamma_21),
        ..base
    }
}
