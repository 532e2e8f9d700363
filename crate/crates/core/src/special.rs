//! Spherical Bessel and Hankel functions of complex argument.
//!
//! `j_n` is evaluated by Miller's downward recurrence carried out on the
//! ratios `j_k / j_{k-1}` (no overflow for tiny arguments) and anchored on
//! the closed form of `j_0` or `j_1`, whichever is larger. `y_n` uses upward
//! recurrence, which is stable for the dominant solution. `h_n = j_n + i y_n`.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Largest order accepted before the recurrences are considered meaningless.
pub const MAX_ORDER: usize = 5000;

/// Smallest |x| accepted by functions with a pole at the origin.
pub const POLE_GUARD: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BesselKind {
    /// Spherical Bessel function of the first kind.
    J,
    /// Spherical Bessel function of the second kind.
    Y,
    /// Spherical Hankel function of the first kind, `j + i y`.
    H1,
}

fn check_order(n: usize, z: Complex64) -> Result<()> {
    if n > MAX_ORDER {
        return Err(Error::Overflow {
            order: n,
            magnitude: z.norm(),
        });
    }
    if !(z.re.is_finite() && z.im.is_finite()) {
        return Err(Error::invalid("x", format!("{z} is not finite")));
    }
    Ok(())
}

fn check_finite(values: &[Complex64], z: Complex64) -> Result<()> {
    match values
        .iter()
        .position(|v| !(v.re.is_finite() && v.im.is_finite()))
    {
        Some(order) => Err(Error::Overflow {
            order,
            magnitude: z.norm(),
        }),
        None => Ok(()),
    }
}

/// `sin z / z`, accurate near the origin.
fn sinc(z: Complex64) -> Complex64 {
    if z.norm() < 1e-4 {
        let z2 = z * z;
        Complex64::new(1.0, 0.0) - z2 / 6.0 + z2 * z2 / 120.0
    } else {
        z.sin() / z
    }
}

/// `j_0 ..= j_nmax` at `z`.
pub fn j_sequence(nmax: usize, z: Complex64) -> Result<Vec<Complex64>> {
    check_order(nmax, z)?;
    let mut out = vec![Complex64::new(0.0, 0.0); nmax + 1];
    let modulus = z.norm();
    if modulus == 0.0 {
        out[0] = Complex64::new(1.0, 0.0);
        return Ok(out);
    }
    let j0 = sinc(z);
    out[0] = j0;
    if nmax == 0 {
        return Ok(out);
    }

    // ratios[k] = j_k / j_{k-1}
    let top = (nmax as f64).max(modulus);
    let start = top.ceil() as usize + 30 + (4.0 * top.cbrt()).ceil() as usize;
    let mut ratios = vec![Complex64::new(0.0, 0.0); nmax + 1];
    let mut ratio = Complex64::new(0.0, 0.0);
    for k in (1..=start).rev() {
        ratio = z / ((2 * k + 1) as f64 - z * ratio);
        if k <= nmax {
            ratios[k] = ratio;
        }
    }

    let j1_closed = if modulus < 1e-3 {
        // j_1 = z/3 - z^3/30 + ..., the closed form cancels badly here
        z / 3.0 - z * z * z / 30.0
    } else {
        (z.sin() / z - z.cos()) / z
    };
    if j0.norm() >= j1_closed.norm() {
        let mut value = j0;
        for k in 1..=nmax {
            value *= ratios[k];
            out[k] = value;
        }
    } else {
        let mut value = j1_closed;
        out[1] = value;
        for k in 2..=nmax {
            value *= ratios[k];
            out[k] = value;
        }
    }
    check_finite(&out, z)?;
    Ok(out)
}

/// `y_0 ..= y_nmax` at `z` by upward recurrence.
pub fn y_sequence(nmax: usize, z: Complex64) -> Result<Vec<Complex64>> {
    check_order(nmax, z)?;
    if z.norm() < POLE_GUARD {
        return Err(Error::Pole(z.norm()));
    }
    let mut out = Vec::with_capacity(nmax + 1);
    let (s, c) = (z.sin(), z.cos());
    out.push(-c / z);
    if nmax >= 1 {
        out.push(-c / (z * z) - s / z);
    }
    for k in 1..nmax {
        let next = out[k] * ((2 * k + 1) as f64) / z - out[k - 1];
        if !(next.re.is_finite() && next.im.is_finite()) {
            return Err(Error::Overflow {
                order: k + 1,
                magnitude: z.norm(),
            });
        }
        out.push(next);
    }
    check_finite(&out, z)?;
    Ok(out)
}

/// `h_0^(1) ..= h_nmax^(1)` at `z`.
pub fn h1_sequence(nmax: usize, z: Complex64) -> Result<Vec<Complex64>> {
    let j = j_sequence(nmax, z)?;
    let y = y_sequence(nmax, z)?;
    Ok(j.iter()
        .zip(&y)
        .map(|(j, y)| j + Complex64::i() * y)
        .collect())
}

/// Values `z_n(x)` and Riccati derivatives `[x z_n(x)]'` for `n = 0..=nmax`.
#[derive(Debug, Clone)]
pub struct RiccatiSequence {
    pub values: Vec<Complex64>,
    pub derivatives: Vec<Complex64>,
}

impl RiccatiSequence {
    pub fn new(kind: BesselKind, nmax: usize, z: Complex64) -> Result<Self> {
        let values = match kind {
            BesselKind::J => j_sequence(nmax, z)?,
            BesselKind::Y => y_sequence(nmax, z)?,
            BesselKind::H1 => h1_sequence(nmax, z)?,
        };
        let mut derivatives = Vec::with_capacity(nmax + 1);
        // [x z_0]' = x z_{-1}
        derivatives.push(order_minus_one_times_x(kind, z));
        for n in 1..=nmax {
            derivatives.push(z * values[n - 1] - values[n] * n as f64);
        }
        Ok(Self {
            values,
            derivatives,
        })
    }
}

/// `x z_{-1}(x)`: `cos x`, `sin x`, `e^{ix}` for j, y, h.
fn order_minus_one_times_x(kind: BesselKind, z: Complex64) -> Complex64 {
    match kind {
        BesselKind::J => z.cos(),
        BesselKind::Y => z.sin(),
        BesselKind::H1 => (Complex64::i() * z).exp(),
    }
}

pub fn spherical_bessel_j(n: usize, x: Complex64) -> Result<Complex64> {
    Ok(j_sequence(n, x)?[n])
}

pub fn spherical_bessel_y(n: usize, x: Complex64) -> Result<Complex64> {
    Ok(y_sequence(n, x)?[n])
}

pub fn spherical_hankel_h1(n: usize, x: Complex64) -> Result<Complex64> {
    Ok(h1_sequence(n, x)?[n])
}

/// `d/dx [x z_n(x)] = x z_{n-1}(x) - n z_n(x)`.
pub fn riccati_derivative(kind: BesselKind, n: usize, x: Complex64) -> Result<Complex64> {
    if kind != BesselKind::J && x.norm() < POLE_GUARD {
        return Err(Error::Pole(x.norm()));
    }
    Ok(RiccatiSequence::new(kind, n, x)?.derivatives[n])
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn rel(a: Complex64, b: Complex64) -> f64 {
        (a - b).norm() / b.norm()
    }

    // Reference values: 40-digit evaluation of sqrt(pi/2z) J_{n+1/2}(z).
    const J_REFERENCE: &[(usize, f64, f64, f64, f64)] = &[
        (0, 0.5, 0.0, 0.958_851_077_208_406, 0.0),
        (1, 0.001, 0.0, 3.333_333_000_000_012e-4, 0.0),
        (3, 2.2, 0.0, 0.076_962_274_744_913_32, 0.0),
        (5, 10.0, 0.0, -0.055_534_511_621_452_18, 0.0),
        (10, 1.0, 0.0, 7.116_552_640_047_313e-11, 0.0),
        (20, 5.0, 0.0, 5.427_726_760_793_208e-12, 0.0),
        (30, 50.0, 0.0, -0.001_494_673_453_605_112_2, 0.0),
        (60, 100.0, 0.0, -0.004_876_469_106_770_409, 0.0),
        (60, 10.0, 0.0, 7.882_678_576_494_136e-42, 0.0),
        (45, 0.3, 0.0, 9.192_439_970_782_726e-95, 0.0),
        (7, PI, 0.0, 0.001_109_484_461_197_624, 0.0),
        (2, 25.0, 0.0, 5.108_849_709_474_755e-4, 0.0),
        (
            3,
            5.785,
            0.195,
            0.164_284_565_706_529_8,
            -0.022_764_258_005_940_39,
        ),
        (
            10,
            20.0,
            1.0,
            0.056_510_976_649_937_6,
            0.032_316_835_133_118_63,
        ),
        (
            5,
            3.0,
            -2.0,
            -0.038_269_739_821_966_13,
            -0.030_589_563_656_576_34,
        ),
        (
            40,
            57.0,
            0.5,
            0.003_272_778_553_948_568,
            -0.007_471_098_696_774_594,
        ),
    ];

    const Y_REFERENCE: &[(usize, f64, f64)] = &[
        (0, 0.5, -1.755_165_123_780_745_4),
        (3, 2.2, -1.124_157_643_963_891_1),
        (10, 1.0, -672_215_008.256_208_4),
        (20, 5.0, -926_795_140.305_754_3),
        (30, 50.0, -0.022_412_268_120_502_12),
        (60, 100.0, -0.010_089_473_515_786_573),
    ];

    #[test]
    fn j_matches_reference_table() {
        for &(n, re, im, ref_re, ref_im) in J_REFERENCE {
            let got = spherical_bessel_j(n, Complex64::new(re, im)).unwrap();
            let want = Complex64::new(ref_re, ref_im);
            assert!(
                rel(got, want) < 1e-10,
                "j_{n}({re}+{im}i) = {got}, want {want}"
            );
        }
    }

    #[test]
    fn y_matches_reference_table() {
        for &(n, x, want) in Y_REFERENCE {
            let got = spherical_bessel_y(n, c(x)).unwrap();
            assert!(rel(got, c(want)) < 1e-10, "y_{n}({x}) = {got}, want {want}");
        }
    }

    #[test]
    fn j0_at_pi_is_zero() {
        assert!(spherical_bessel_j(0, c(PI)).unwrap().norm() < 1e-15);
    }

    #[test]
    fn j1_small_argument_limit() {
        let v = spherical_bessel_j(1, c(0.001)).unwrap();
        assert!((v.re - 3.333_333e-4).abs() < 1e-10);
        assert_eq!(spherical_bessel_j(1, c(0.0)).unwrap(), c(0.0));
        assert_eq!(spherical_bessel_j(0, c(0.0)).unwrap(), c(1.0));
    }

    #[test]
    fn h0_closed_form() {
        let x = c(1.0);
        let want = -Complex64::i() * (Complex64::i() * x).exp() / x;
        assert!(rel(spherical_hankel_h1(0, x).unwrap(), want) < 1e-14);
    }

    #[test]
    fn h2_closed_form() {
        // h_2(x) = i e^{ix} (x^2 + 3ix - 3) / x^3
        let x = c(3.5);
        let i = Complex64::i();
        let want = i * (i * x).exp() * (x * x + 3.0 * i * x - 3.0) / (x * x * x);
        let got = spherical_hankel_h1(2, x).unwrap();
        assert!(rel(got, want) < 1e-13, "{got} vs {want}");
        let frozen = Complex64::new(0.305_015_511_899_296_7, -0.116_128_290_768_486_48);
        assert!(rel(got, frozen) < 1e-12);
    }

    #[test]
    fn pole_rejected() {
        assert!(matches!(
            spherical_hankel_h1(1, c(1e-13)),
            Err(Error::Pole(_))
        ));
        assert!(matches!(spherical_bessel_y(0, c(0.0)), Err(Error::Pole(_))));
    }

    #[test]
    fn overflow_guard() {
        assert!(matches!(
            spherical_bessel_j(MAX_ORDER + 1, c(1.0)),
            Err(Error::Overflow { .. })
        ));
        assert!(matches!(
            spherical_bessel_y(300, c(0.01)),
            Err(Error::Overflow { .. })
        ));
    }

    #[test]
    fn riccati_j0_is_cos() {
        let d = riccati_derivative(BesselKind::J, 0, c(1.0)).unwrap();
        assert!((d - c(1.0f64.cos())).norm() < 1e-15);
    }

    fn finite_difference(kind: BesselKind, n: usize, x: f64) -> Complex64 {
        let h = 1e-6;
        let f = |t: f64| {
            let z = c(t);
            let v = match kind {
                BesselKind::J => spherical_bessel_j(n, z),
                BesselKind::Y => spherical_bessel_y(n, z),
                BesselKind::H1 => spherical_hankel_h1(n, z),
            };
            z * v.unwrap()
        };
        (f(x + h) - f(x - h)) / (2.0 * h)
    }

    #[test]
    fn riccati_matches_finite_difference() {
        let d = riccati_derivative(BesselKind::J, 3, c(2.2)).unwrap();
        assert!((d - finite_difference(BesselKind::J, 3, 2.2)).norm() < 1e-8);
        let d = riccati_derivative(BesselKind::H1, 3, c(4.0)).unwrap();
        let fd = finite_difference(BesselKind::H1, 3, 4.0);
        assert!((d - fd).norm() < 1e-8 * fd.norm().max(1.0), "{d} vs {fd}");
    }

    #[test]
    fn wronskian_identity() {
        // j_n y_n' - j_n' y_n = 1/x^2
        for &x in &[0.37, 1.9, 7.3, 22.4] {
            for n in [0usize, 1, 4, 11] {
                let z = c(x);
                let js = RiccatiSequence::new(BesselKind::J, n, z).unwrap();
                let ys = RiccatiSequence::new(BesselKind::Y, n, z).unwrap();
                // [x z]' = z + x z'  =>  z' = ([x z]' - z) / x
                let jp = (js.derivatives[n] - js.values[n]) / z;
                let yp = (ys.derivatives[n] - ys.values[n]) / z;
                let w = js.values[n] * yp - jp * ys.values[n];
                let want = 1.0 / (x * x);
                assert!(
                    (w.re - want).abs() < 1e-10 * want.max(1.0),
                    "n={n} x={x}: {w}"
                );
            }
        }
    }
}
