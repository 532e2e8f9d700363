use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use grapespin::fit::{
    double_lorentzian, extract_contrast, fit_spectrum_with, load_spectrum_csv, solver_registry,
    LorentzianFit, StopRule,
};
use grapespin::nv::{
    build_system, contrast_vs_coupling, integrator_registry, odmr_spectrum, photoluminescence,
    time_evolve_with, write_spectrum_csv, NvModelParams, NvState, OdmrSpectrum, TWO_PI,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::Deserialize;

use crate::config::RunConfig;
use crate::error::{CliError, CliResult};
use crate::plot::{self, Series};
use crate::write_text;

const STEADY: &str = "steady-state";

#[derive(Debug, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SimulateSettings {
    pub f_start: f64,
    pub f_stop: f64,
    pub points: usize,
    /// Drive strengths Ω in rad/s, one spectrum each.
    pub couplings: Vec<f64>,
    pub normalize: bool,
    /// Gaussian noise σ relative to each spectrum's maximum.
    pub noise: f64,
    /// `steady-state` or an integrator name.
    pub method: String,
    pub settle_time: f64,
    pub time_step: f64,
}

const SIMULATE_KEYS: [&str; 9] = [
    "f_start",
    "f_stop",
    "points",
    "couplings",
    "normalize",
    "noise",
    "method",
    "settle_time",
    "time_step",
];

impl Default for SimulateSettings {
    fn default() -> Self {
        Self {
            f_start: 2.85e9,
            f_stop: 2.89e9,
            points: 401,
            couplings: [0.0, 0.1e6, 0.3e6, 1e6, 3e6]
                .iter()
                .map(|w| TWO_PI * w)
                .collect(),
            normalize: false,
            noise: 0.0,
            method: STEADY.into(),
            settle_time: 1e-2,
            time_step: 1e-7,
        }
    }
}

fn mhz(coupling: f64) -> f64 {
    coupling / TWO_PI / 1e6
}

fn evolved_spectrum(params: &NvModelParams, s: &SimulateSettings) -> CliResult<OdmrSpectrum> {
    let integrator = integrator_registry().get(&s.method)?;
    let span = s.f_stop - s.f_start;
    let last = (s.points.max(2) - 1) as f64;
    let mut frequencies = Vec::with_capacity(s.points);
    let mut pl = Vec::with_capacity(s.points);
    for i in 0..s.points {
        let f = s.f_start + span * i as f64 / last;
        let p = params.at_drive_frequency(f);
        let state = time_evolve_with(
            integrator.as_ref(),
            &build_system(&p)?,
            &NvState::pure(1),
            s.settle_time,
            s.time_step,
        )?;
        frequencies.push(f);
        pl.push(photoluminescence(&state, &p));
    }
    if s.normalize {
        let max = pl.iter().cloned().fold(f64::MIN, f64::max);
        pl.iter_mut().for_each(|p| *p /= max);
    }
    Ok(OdmrSpectrum::new(frequencies, pl)?)
}

pub fn simulate(config: &RunConfig, out: &Path, seed: u64) -> CliResult<Vec<PathBuf>> {
    let (s, params): (SimulateSettings, NvModelParams) = config.split(&SIMULATE_KEYS)?;
    if s.couplings.is_empty() {
        return Err(CliError::Config(
            "`couplings` must list at least one drive strength".into(),
        ));
    }
    if !(s.noise >= 0.0 && s.noise.is_finite()) {
        return Err(CliError::Config(format!(
            "`noise` = {} must be finite and >= 0",
            s.noise
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let noise = Normal::new(0.0, 1.0).expect("unit normal");
    let mut written = Vec::new();
    let mut series = Vec::new();
    for (k, &coupling) in s.couplings.iter().enumerate() {
        let p = params.with_coupling(coupling);
        let mut spectrum = if s.method == STEADY {
            odmr_spectrum(&p, s.f_start, s.f_stop, s.points, s.normalize)?
        } else {
            evolved_spectrum(&p, &s)?
        };
        if s.noise > 0.0 {
            let sigma = s.noise * spectrum.pl.iter().cloned().fold(f64::MIN, f64::max);
            spectrum
                .pl
                .iter_mut()
                .for_each(|y| *y += sigma * noise.sample(&mut rng));
        }
        let path = out.join(format!("spectrum_{k:02}_omega_{:.3}MHz.csv", mhz(coupling)));
        write_spectrum_csv(&spectrum, &path)?;
        written.push(path);
        series.push(Series {
            label: format!("Ω/2π = {:.3} MHz", mhz(coupling)),
            points: spectrum
                .frequencies
                .iter()
                .map(|f| f / 1e9)
                .zip(spectrum.pl.iter().copied())
                .collect(),
            markers: false,
        });
    }

    let rows = contrast_vs_coupling(&params, &s.couplings, &[params.pump_rate])?;
    let mut table = String::from("coupling_rad_s,contrast\n");
    for r in &rows {
        writeln!(table, "{:e},{:e}", r.coupling, r.contrast).unwrap();
        println!(
            "Ω/2π = {:8.3} MHz  contrast {:7.3} %",
            mhz(r.coupling),
            100.0 * r.contrast
        );
    }
    let path = out.join("contrast.csv");
    write_text(&path, &table)?;
    written.push(path);

    let path = out.join("spectra.svg");
    let y_label = if s.normalize {
        "PL (normalised)"
    } else {
        "PL (photons/s)"
    };
    plot::line_chart(
        &path,
        "Simulated ODMR",
        "microwave frequency (GHz)",
        y_label,
        &series,
    )?;
    written.push(path);
    Ok(written)
}

#[derive(Debug, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FitSettings {
    pub solver: String,
    pub max_iterations: usize,
    /// `deeper`, `mean` or `sum`.
    pub contrast: String,
    pub plot: bool,
}

impl Default for FitSettings {
    fn default() -> Self {
        Self {
            solver: solver_registry().default_name().into(),
            max_iterations: StopRule::default().max_iterations,
            contrast: "deeper".into(),
            plot: true,
        }
    }
}

fn report(fit: &LorentzianFit, selected: &str, force: bool) -> CliResult<String> {
    let c = extract_contrast(fit, force)?;
    let chosen = match selected {
        "deeper" => c.deeper,
        "mean" => c.mean,
        _ => c.sum,
    };
    let p = &fit.params;
    let mut text = String::new();
    let mut kv = |k: &str, v: String| writeln!(text, "{k}={v}").unwrap();
    kv("baseline", format!("{:e}", p.baseline));
    for (i, d) in p.dips.iter().enumerate() {
        kv(&format!("center_{}_hz", i + 1), format!("{:e}", d.center));
        kv(&format!("hwhm_{}_hz", i + 1), format!("{:e}", d.hwhm));
        kv(
            &format!("amplitude_{}", i + 1),
            format!("{:e}", d.amplitude),
        );
        kv(
            &format!("contrast_{}", i + 1),
            format!("{:e}", c.per_dip[i]),
        );
    }
    kv("splitting_hz", format!("{:e}", fit.splitting()));
    kv("contrast_deeper", format!("{:e}", c.deeper));
    kv("contrast_mean", format!("{:e}", c.mean));
    kv("contrast_sum", format!("{:e}", c.sum));
    kv("contrast_kind", selected.to_string());
    kv("contrast_percent", format!("{:.4}", 100.0 * chosen));
    kv("rss", format!("{:e}", fit.rss));
    kv("iterations", fit.iterations.to_string());
    kv("converged", fit.converged.to_string());
    kv("flat", fit.flat.to_string());
    Ok(text)
}

pub fn fit(config: &RunConfig, input: &Path, out: &Path) -> CliResult<Vec<PathBuf>> {
    let s: FitSettings = config.parse()?;
    if !["deeper", "mean", "sum"].contains(&s.contrast.as_str()) {
        return Err(CliError::Config(format!(
            "`contrast` = `{}` must be one of deeper, mean, sum",
            s.contrast
        )));
    }
    let solver = solver_registry().get(&s.solver)?;
    std::fs::metadata(input).map_err(|e| CliError::io(input, e))?;
    let spectrum = load_spectrum_csv(input)?;
    let rule = StopRule {
        max_iterations: s.max_iterations,
        ..StopRule::default()
    };
    let fit = fit_spectrum_with(solver.as_ref(), &spectrum, None, &rule)?;
    let text = report(&fit, &s.contrast, true)?;
    print!("{text}");
    let report_path = out.join("fit_report.txt");
    write_text(&report_path, &text)?;
    let mut written = vec![report_path.clone()];

    if s.plot {
        let (f0, f1) = (
            spectrum.frequencies[0],
            spectrum.frequencies[spectrum.len() - 1],
        );
        let dense = 4 * spectrum.len();
        let curve = (0..dense)
            .map(|i| {
                let f = f0 + (f1 - f0) * i as f64 / (dense - 1) as f64;
                (f / 1e9, double_lorentzian(f, &fit.params))
            })
            .collect();
        let path = out.join("fit.svg");
        plot::line_chart(
            &path,
            "Double-Lorentzian fit",
            "microwave frequency (GHz)",
            "PL",
            &[
                Series {
                    label: "data".into(),
                    points: spectrum
                        .frequencies
                        .iter()
                        .map(|f| f / 1e9)
                        .zip(spectrum.pl.iter().copied())
                        .collect(),
                    markers: true,
                },
                Series {
                    label: "fit".into(),
                    points: curve,
                    markers: false,
                },
            ],
        )?;
        written.push(path);
    }
    if !fit.converged {
        return Err(CliError::NotConverged {
            iterations: fit.iterations,
            report: report_path,
        });
    }
    Ok(written)
}
