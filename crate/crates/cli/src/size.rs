use std::path::{Path, PathBuf};

use grapespin::mie::{ellipse_perimeter, size_ellipsoid, SPEED_OF_LIGHT};
use serde::Deserialize;

use crate::config::RunConfig;
use crate::error::CliResult;
use crate::write_text;

#[derive(Debug, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SizeSettings {
    /// m
    pub semi_major: f64,
    /// Target perimeter in free-space wavelengths.
    pub alpha: f64,
    pub frequency: f64,
}

impl Default for SizeSettings {
    fn default() -> Self {
        Self {
            semi_major: 13.5e-3,
            alpha: 0.645,
            frequency: 2.87e9,
        }
    }
}

pub fn size_grapes(config: &RunConfig, out: &Path) -> CliResult<Vec<PathBuf>> {
    let s: SizeSettings = config.parse()?;
    let semi_minor = size_ellipsoid(s.semi_major, s.alpha, s.frequency)?;
    let wavelength = SPEED_OF_LIGHT / s.frequency;
    let text = format!(
        "semi_major_m={:e}\nsemi_minor_m={:e}\nlong_axis_m={:e}\nshort_axis_m={:e}\nperimeter_m={:e}\ntarget_perimeter_m={:e}\nwavelength_m={:e}\n",
        s.semi_major,
        semi_minor,
        2.0 * s.semi_major,
        2.0 * semi_minor,
        ellipse_perimeter(s.semi_major, semi_minor)?,
        s.alpha * wavelength,
        wavelength,
    );
    print!("{text}");
    let path = out.join("size_grapes.txt");
    write_text(&path, &text)?;
    Ok(vec![path])
}
