//! Static SVG renderings of the CSV outputs.

use std::path::Path;

use grapespin::mie::FieldMap;
use plotters::prelude::*;

use crate::error::{CliError, CliResult};

const SIZE: (u32, u32) = (900, 600);

const PALETTE: [RGBColor; 6] = [
    RGBColor(31, 119, 180),
    RGBColor(255, 127, 14),
    RGBColor(44, 160, 44),
    RGBColor(214, 39, 40),
    RGBColor(148, 103, 189),
    RGBColor(140, 86, 75),
];

pub struct Series {
    pub label: String,
    pub points: Vec<(f64, f64)>,
    /// Draw markers instead of a line.
    pub markers: bool,
}

fn plot_err(path: &Path) -> impl Fn(String) -> CliError + '_ {
    move |reason| CliError::Plot {
        path: path.to_path_buf(),
        reason,
    }
}

fn bounds(series: &[Series]) -> ((f64, f64), (f64, f64)) {
    let mut x = (f64::INFINITY, f64::NEG_INFINITY);
    let mut y = (f64::INFINITY, f64::NEG_INFINITY);
    for &(px, py) in series.iter().flat_map(|s| &s.points) {
        x = (x.0.min(px), x.1.max(px));
        y = (y.0.min(py), y.1.max(py));
    }
    let pad = |(lo, hi): (f64, f64)| {
        let d = if hi > lo {
            0.05 * (hi - lo)
        } else {
            0.05 * hi.abs().max(1.0)
        };
        (lo - d, hi + d)
    };
    (x, pad(y))
}

pub fn line_chart(
    path: &Path,
    title: &str,
    x_label: &str,
    y_label: &str,
    series: &[Series],
) -> CliResult<()> {
    let err = plot_err(path);
    let ((x0, x1), (y0, y1)) = bounds(series);
    let root = SVGBackend::new(path, SIZE).into_drawing_area();
    root.fill(&WHITE).map_err(|e| err(e.to_string()))?;
    let mut chart = ChartBuilder::on(&root)
        .caption(title, ("sans-serif", 22))
        .margin(15)
        .x_label_area_size(45)
        .y_label_area_size(70)
        .build_cartesian_2d(x0..x1, y0..y1)
        .map_err(|e| err(e.to_string()))?;
    chart
        .configure_mesh()
        .x_desc(x_label)
        .y_desc(y_label)
        .draw()
        .map_err(|e| err(e.to_string()))?;
    for (k, s) in series.iter().enumerate() {
        let color = PALETTE[k % PALETTE.len()];
        let drawn = if s.markers {
            chart.draw_series(s.points.iter().map(|&p| Circle::new(p, 2, color.filled())))
        } else {
            chart.draw_series(LineSeries::new(
                s.points.iter().copied(),
                color.stroke_width(2),
            ))
        };
        drawn
            .map_err(|e| err(e.to_string()))?
            .label(s.label.as_str())
            .legend(move |(x, y)| {
                PathElement::new(vec![(x, y), (x + 20, y)], color.stroke_width(2))
            });
    }
    chart
        .configure_series_labels()
        .background_style(WHITE.mix(0.8))
        .border_style(BLACK)
        .draw()
        .map_err(|e| err(e.to_string()))?;
    root.present().map_err(|e| err(e.to_string()))?;
    Ok(())
}

/// Blue-white-red ramp over `t ∈ [0, 1]`.
fn ramp(t: f64) -> RGBColor {
    let t = t.clamp(0.0, 1.0);
    let lerp = |a: u8, b: u8, s: f64| (a as f64 + (b as f64 - a as f64) * s).round() as u8;
    let (lo, mid, hi) = ((49, 54, 149), (255, 255, 191), (165, 0, 38));
    if t < 0.5 {
        let s = 2.0 * t;
        RGBColor(
            lerp(lo.0, mid.0, s),
            lerp(lo.1, mid.1, s),
            lerp(lo.2, mid.2, s),
        )
    } else {
        let s = 2.0 * t - 1.0;
        RGBColor(
            lerp(mid.0, hi.0, s),
            lerp(mid.1, hi.1, s),
            lerp(mid.2, hi.2, s),
        )
    }
}

/// `|H|` over the map plane with the sphere outline, coordinates in mm.
pub fn field_heatmap(
    path: &Path,
    title: &str,
    map: &FieldMap,
    sphere_radius: f64,
) -> CliResult<()> {
    let err = plot_err(path);
    let n = map.resolution();
    let mm: Vec<f64> = map.coords.iter().map(|c| c * 1e3).collect();
    let half = 0.5 * (mm[1] - mm[0]);
    let (lo, hi) = (mm[0] - half, mm[n - 1] + half);
    let max = map.abs_h.iter().cloned().fold(0.0, f64::max);
    let (u_name, v_name) = match map.plane.name() {
        "xy" => ("x (mm)", "y (mm)"),
        "xz" => ("x (mm)", "z (mm)"),
        _ => ("y (mm)", "z (mm)"),
    };

    let root = SVGBackend::new(path, (700, 700)).into_drawing_area();
    root.fill(&WHITE).map_err(|e| err(e.to_string()))?;
    let mut chart = ChartBuilder::on(&root)
        .caption(title, ("sans-serif", 22))
        .margin(15)
        .x_label_area_size(45)
        .y_label_area_size(60)
        .build_cartesian_2d(lo..hi, lo..hi)
        .map_err(|e| err(e.to_string()))?;
    chart
        .configure_mesh()
        .disable_mesh()
        .x_desc(u_name)
        .y_desc(v_name)
        .draw()
        .map_err(|e| err(e.to_string()))?;
    chart
        .draw_series((0..n).flat_map(|iv| {
            let mm = &mm;
            (0..n).map(move |iu| {
                let t = if max > 0.0 {
                    map.h_at(iu, iv) / max
                } else {
                    0.0
                };
                Rectangle::new(
                    [
                        (mm[iu] - half, mm[iv] - half),
                        (mm[iu] + half, mm[iv] + half),
                    ],
                    ramp(t).filled(),
                )
            })
        }))
        .map_err(|e| err(e.to_string()))?;
    let r = sphere_radius * 1e3;
    chart
        .draw_series(std::iter::once(PathElement::new(
            (0..=180)
                .map(|k| {
                    let t = 2.0 * std::f64::consts::PI * k as f64 / 180.0;
                    (r * t.cos(), r * t.sin())
                })
                .collect::<Vec<_>>(),
            BLACK.stroke_width(1),
        )))
        .map_err(|e| err(e.to_string()))?;
    root.present().map_err(|e| err(e.to_string()))?;
    Ok(())
}
