use super::{Dip, LorentzianParams};

/// Starting half width of each dip.
pub const DEFAULT_HWHM_HZ: f64 = 5e6;

/// Peak-to-peak variation, relative to the maximum, below which a spectrum
/// is treated as flat.
const FLAT_TOLERANCE: f64 = 1e-12;

fn median(sorted: &[f64]) -> f64 {
    let n = sorted.len();
    if n % 2 == 1 {
        sorted[n / 2]
    } else {
        0.5 * (sorted[n / 2 - 1] + sorted[n / 2])
    }
}

fn moving_average(values: &[f64], half: usize) -> Vec<f64> {
    let n = values.len();
    (0..n)
        .map(|i| {
            let lo = i.saturating_sub(half);
            let hi = (i + half).min(n - 1);
            values[lo..=hi].iter().sum::<f64>() / (hi - lo + 1) as f64
        })
        .collect()
}

/// Starting point for a double-Lorentzian fit, and whether the data are flat.
///
/// Baseline is the median of the top quartile. Centres are the two deepest
/// local minima of lightly smoothed data that are at least one starting half
/// width (and three grid steps) apart; a lone minimum seeds both dips.
pub fn auto_initialize(frequencies: &[f64], pl: &[f64]) -> (LorentzianParams, bool) {
    let n = pl.len();
    let first = frequencies[0];
    let last = frequencies[n - 1];
    let span = last - first;
    let step = span / (n - 1) as f64;
    let hwhm = DEFAULT_HWHM_HZ.min(span / 10.0);

    let mut sorted = pl.to_vec();
    sorted.sort_by(|a, b| b.partial_cmp(a).unwrap());
    let baseline = median(&sorted[..(n / 4).max(1)]);
    let (max, min) = (sorted[0], sorted[n - 1]);

    if max - min <= FLAT_TOLERANCE * max.abs() {
        let dip = |center| Dip {
            amplitude: 0.0,
            center,
            hwhm,
        };
        let flat = LorentzianParams {
            baseline,
            dips: [dip(first + span / 3.0), dip(first + 2.0 * span / 3.0)],
        };
        return (flat, true);
    }

    let half = ((0.25 * hwhm / step).round() as usize).clamp(1, (n / 20).max(1));
    let smooth = moving_average(pl, half);
    let mut minima: Vec<usize> = (1..n - 1)
        .filter(|&i| smooth[i] <= smooth[i - 1] && smooth[i] < smooth[i + 1])
        .collect();
    if minima.is_empty() {
        let deepest = (0..n)
            .min_by(|&a, &b| smooth[a].partial_cmp(&smooth[b]).unwrap())
            .unwrap();
        minima.push(deepest);
    }
    minima.sort_by(|&a, &b| smooth[a].partial_cmp(&smooth[b]).unwrap());

    let separation = hwhm.max(3.0 * step);
    let c1 = minima[0];
    let second = minima
        .iter()
        .copied()
        .find(|&i| (frequencies[i] - frequencies[c1]).abs() >= separation);

    let depth = |i: usize| (baseline - smooth[i]).max(0.0);
    let dips = match second {
        Some(c2) => [
            Dip {
                amplitude: depth(c1),
                center: frequencies[c1],
                hwhm,
            },
            Dip {
                amplitude: depth(c2),
                center: frequencies[c2],
                hwhm,
            },
        ],
        None => {
            let offset = if frequencies[c1] + 0.5 * hwhm <= last {
                0.5 * hwhm
            } else {
                -0.5 * hwhm
            };
            [
                Dip {
                    amplitude: 0.5 * depth(c1),
                    center: frequencies[c1],
                    hwhm,
                },
                Dip {
                    amplitude: 0.5 * depth(c1),
                    center: frequencies[c1] + offset,
                    hwhm,
                },
            ]
        }
    };
    (LorentzianParams { baseline, dips }, false)
}
