use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use grapespin::mie::{
    characteristic_fn, circle_profile, count_cyclic_peaks, field_map, find_resonances_with,
    refiner_registry, write_field_map_csv, MieConfig, MieSolution, Plane, ResonanceResult,
};
use num_complex::Complex64;
use serde::Deserialize;

use crate::config::RunConfig;
use crate::error::{CliError, CliResult};
use crate::plot::{self, Series};
use crate::write_text;

/// Material and search settings shared by both Mie subcommands.
#[derive(Debug, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct MieSettings {
    pub n1: f64,
    /// Imaginary part of the sphere index (absorption).
    pub n1_imag: f64,
    pub n2: f64,
    pub mu1: f64,
    pub mu2: f64,
    pub frequency: f64,
    pub orders: Vec<usize>,
    /// Resonances per order, ascending in size parameter.
    pub modes: usize,
    pub rho_min: f64,
    pub rho_max: f64,
    pub refiner: String,
    /// Explicit sphere radius in m; otherwise each order uses its first resonance.
    pub radius: Option<f64>,
    pub n_max: Option<usize>,
    pub plane: String,
    /// Half-width of the map in sphere radii.
    pub extent: f64,
    pub resolution: usize,
}

impl Default for MieSettings {
    fn default() -> Self {
        Self {
            n1: 8.9,
            n1_imag: 0.0,
            n2: 1.0,
            mu1: 1.0,
            mu2: 1.0,
            frequency: 2.87e9,
            orders: vec![1, 2, 3],
            modes: 1,
            rho_min: 0.05,
            rho_max: 2.0,
            refiner: refiner_registry().default_name().into(),
            radius: None,
            n_max: None,
            plane: "yz".into(),
            extent: 1.5,
            resolution: 101,
        }
    }
}

impl MieSettings {
    fn config(&self, radius: f64) -> MieConfig {
        let mut cfg = MieConfig::new(self.n1, self.n2, radius, self.frequency);
        cfg.n1 = Complex64::new(self.n1, self.n1_imag);
        cfg.mu1 = self.mu1;
        cfg.mu2 = self.mu2;
        cfg.n_max = self.n_max;
        cfg
    }

    fn resonances(&self, order: usize) -> CliResult<Vec<ResonanceResult>> {
        let refiner = refiner_registry().get(&self.refiner)?;
        // radius is irrelevant to the search, which works in size parameter
        let cfg = self.config(1.0);
        Ok(find_resonances_with(
            refiner.as_ref(),
            order,
            &cfg,
            self.rho_min,
            self.rho_max,
            self.modes,
        )?)
    }
}

pub fn resonances(config: &RunConfig, out: &Path) -> CliResult<Vec<PathBuf>> {
    let s: MieSettings = config.parse()?;
    if s.orders.is_empty() {
        return Err(CliError::Config(
            "`orders` must list at least one multipole order".into(),
        ));
    }
    let mut table = String::from("order,mode_index,rho_res,radius_m,residual\n");
    println!("order  mode  rho_res     radius (mm)  |D_n|");
    let mut series = Vec::new();
    for &order in &s.orders {
        for r in s.resonances(order)? {
            writeln!(
                table,
                "{},{},{:e},{:e},{:e}",
                r.order, r.mode_index, r.rho_res, r.radius, r.residual
            )
            .unwrap();
            println!(
                "{:5}  {:4}  {:.7}  {:11.4}  {:.3e}",
                r.order,
                r.mode_index,
                r.rho_res,
                r.radius * 1e3,
                r.residual
            );
        }
        let cfg = s.config(1.0);
        let samples = 400;
        let mut points = Vec::with_capacity(samples);
        for k in 0..samples {
            let rho = s.rho_min + (s.rho_max - s.rho_min) * k as f64 / (samples - 1) as f64;
            let d = characteristic_fn(order, rho, &cfg)?;
            points.push((rho, d.norm().log10()));
        }
        series.push(Series {
            label: format!("n = {order}"),
            points,
            markers: false,
        });
    }
    let csv = out.join("resonances.csv");
    write_text(&csv, &table)?;
    let svg = out.join("resonances.svg");
    plot::line_chart(
        &svg,
        "Resonance condition",
        "size parameter ρ",
        "log10 |D_n(ρ)|",
        &series,
    )?;
    Ok(vec![csv, svg])
}

pub fn fieldmap(config: &RunConfig, out: &Path) -> CliResult<Vec<PathBuf>> {
    let s: MieSettings = config.parse()?;
    if s.orders.is_empty() {
        return Err(CliError::Config(
            "`orders` must list at least one multipole order".into(),
        ));
    }
    let plane: Plane = s.plane.parse()?;
    if !(s.extent > 0.0 && s.extent.is_finite()) {
        return Err(CliError::Config(format!(
            "`extent` = {} must be finite and > 0",
            s.extent
        )));
    }
    let mut written = Vec::new();
    let mut summary = String::from("order,radius_m,size_parameter,lobes\n");
    for &order in &s.orders {
        let radius = match s.radius {
            Some(r) => r,
            None => s.resonances(order)?[0].radius,
        };
        let cfg = s.config(radius);
        let map = field_map(&cfg, plane, s.extent * radius, s.resolution)?;
        let lobes = count_cyclic_peaks(&circle_profile(
            &MieSolution::new(&cfg)?,
            plane,
            0.9 * radius,
            720,
        )?);
        println!(
            "order {order}: radius {:.4} mm, rho {:.6}, {lobes} |H| lobes on the 0.9 R circle",
            radius * 1e3,
            cfg.size_parameter()
        );
        writeln!(
            summary,
            "{order},{radius:e},{:e},{lobes}",
            cfg.size_parameter()
        )
        .unwrap();

        let csv = out.join(format!("fieldmap_n{order}.csv"));
        write_field_map_csv(&map, &csv)?;
        let svg = out.join(format!("fieldmap_n{order}.svg"));
        plot::field_heatmap(
            &svg,
            &format!("|H|, order {order}, {} plane", plane.name()),
            &map,
            radius,
        )?;
        written.extend([csv, svg]);
    }
    let path = out.join("fieldmap_summary.csv");
    write_text(&path, &summary)?;
    written.push(path);
    Ok(written)
}
