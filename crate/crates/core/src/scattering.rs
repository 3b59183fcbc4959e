//! Rough-surface scattering: the Kirchhoff average scattering coefficient,
//! Gaussian fits of its main lobe, and the frequency law of intra-cluster
//! angle spreads.

use std::collections::BTreeMap;
use std::f64::consts::{FRAC_PI_2, PI};

use rand::Rng;
use rand_distr::{Distribution, Exp};
use serde::Deserialize;

use crate::error::{GbsmError, Result};
use crate::SPEED_OF_LIGHT;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SurfaceParams {
    /// Standard deviation of surface heights, meters.
    pub height_std: f64,
    /// Surface correlation length, meters.
    pub corr_length: f64,
    pub extent_x: f64,
    pub extent_y: f64,
}

impl SurfaceParams {
    pub fn new(height_std: f64, corr_length: f64, extent_x: f64, extent_y: f64) -> Result<Self> {
        for (name, v) in [
            ("height_std", height_std),
            ("corr_length", corr_length),
            ("extent_x", extent_x),
            ("extent_y", extent_y),
        ] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(GbsmError::domain(format!("surface {name} must be > 0, got {v}")));
            }
        }
        Ok(SurfaceParams {
            height_std,
            corr_length,
            extent_x,
            extent_y,
        })
    }

    /// Square patch whose side is ten correlation lengths.
    pub fn square(height_std: f64, corr_length: f64) -> Result<Self> {
        Self::new(height_std, corr_length, 10.0 * corr_length, 10.0 * corr_length)
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct MaterialEntry {
    height_std_mm: f64,
    corr_length_mm: f64,
}

const MATERIALS_TOML: &str = include_str!("../data/materials.toml");

fn material_table() -> BTreeMap<String, MaterialEntry> {
    toml::from_str(MATERIALS_TOML).expect("bundled materials table parses")
}

pub fn material_names() -> Vec<String> {
    material_table().into_keys().collect()
}

/// Surface parameters of a bundled material preset.
pub fn material(name: &str) -> Result<SurfaceParams> {
    let table = material_table();
    let m = table.get(name).ok_or_else(|| {
        GbsmError::domain(format!(
            "unknown material `{name}` (known: {})",
            table.keys().cloned().collect::<Vec<_>>().join(", ")
        ))
    })?;
    SurfaceParams::square(m.height_std_mm * 1e-3, m.corr_length_mm * 1e-3)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScatterGeometry {
    /// Incidence angle, radians.
    pub incident: f64,
    /// Exit angle, radians.
    pub exit: f64,
    /// Angle between the incidence and exit planes, radians.
    pub plane_offset: f64,
}

fn sinc(u: f64) -> f64 {
    if u == 0.0 {
        1.0
    } else {
        u.sin() / u
    }
}

pub const SERIES_TOLERANCE: f64 = 1e-12;
const SERIES_MAX_TERMS: usize = 500;

/// Average scattering coefficient of a Gaussian rough surface.
pub fn scattering_coefficient(surface: &SurfaceParams, geom: &ScatterGeometry, wavenumber: f64) -> Result<f64> {
    scattering_coefficient_with_tolerance(surface, geom, wavenumber, SERIES_TOLERANCE)
}

/// As [`scattering_coefficient`], stopping the series once a term drops below
/// `tolerance` times the running sum.
pub fn scattering_coefficient_with_tolerance(surface: &SurfaceParams, geom: &ScatterGeometry, wavenumber: f64, tolerance: f64) -> Result<f64> {
    if !(wavenumber > 0.0 && wavenumber.is_finite()) {
        return Err(GbsmError::domain(format!("wavenumber must be > 0, got {wavenumber}")));
    }
    let ScatterGeometry {
        incident: t1,
        exit: t2,
        plane_offset: t3,
    } = *geom;
    for (name, a) in [("incident", t1), ("exit", t2)] {
        if !(0.0..FRAC_PI_2).contains(&a) {
            return Err(GbsmError::domain(format!("{name} angle {a} outside [0, pi/2)")));
        }
    }
    if !(-PI..=PI).contains(&t3) {
        return Err(GbsmError::domain(format!("plane offset {t3} outside [-pi, pi]")));
    }
    let k = wavenumber;
    let (s1, c1) = t1.sin_cos();
    let (s2, c2) = t2.sin_cos();
    let (s3, c3) = t3.sin_cos();
    let vx = k * (s1 - s2 * c3);
    let vy = -k * s2 * s3;
    let vxy2 = vx * vx + vy * vy;
    let f = (1.0 + c1 * c2 - s1 * s2 * c3) / (c1 * (c1 + c2));
    let g = (k * surface.height_std * (c1 + c2)).powi(2);
    let rho0 = sinc(vx * surface.extent_x) * sinc(vy * surface.extent_y);
    let area = surface.extent_x * surface.extent_y;
    let lc2 = surface.corr_length * surface.corr_length;

    let mut series = 0.0;
    if g > 0.0 {
        // Terms are carried in log space with the e^-g factor folded in, so
        // large g neither overflows g^m / m! nor underflows e^-g.
        let ln_g = g.ln();
        let mut ln_fact = 0.0;
        let mut prev = 0.0;
        for m in 1..=SERIES_MAX_TERMS {
            let mf = m as f64;
            ln_fact += mf.ln();
            let term = (mf * ln_g - ln_fact - mf.ln() - vxy2 * lc2 / (4.0 * mf) - g).exp();
            series += term;
            if mf > g && term < prev && term < tolerance * series {
                break;
            }
            prev = term;
        }
    }
    let value = (-g).exp() * rho0 * rho0 + PI * lc2 * f * f / area * series;
    Ok(value.max(0.0))
}

pub fn wavenumber(freq: f64) -> f64 {
    2.0 * PI * freq / SPEED_OF_LIGHT
}

/// Incidence angle used when fitting main lobes, radians.
pub const FIT_INCIDENCE: f64 = 0.49;
/// Number of plane-offset samples used when fitting main lobes.
pub const FIT_SAMPLES: usize = 1441;

/// Scattering coefficient sampled over the plane offset on `[-pi, pi]`, with
/// the exit angle held equal to the incidence angle.
pub fn plane_offset_profile(surface: &SurfaceParams, incident: f64, freq: f64, samples: usize) -> Result<Vec<(f64, f64)>> {
    if samples < 2 {
        return Err(GbsmError::domain("profile needs at least two samples"));
    }
    let k = wavenumber(freq);
    (0..samples)
        .map(|i| {
            let x = -PI + 2.0 * PI * i as f64 / (samples - 1) as f64;
            let geom = ScatterGeometry {
                incident,
                exit: incident,
                plane_offset: x,
            };
            Ok((x, scattering_coefficient(surface, &geom, k)?))
        })
        .collect()
}

/// Width of the main scattering lobe at `freq`.
pub fn mainlobe_sigma(surface: &SurfaceParams, freq: f64) -> Result<f64> {
    fit_gaussian_mainlobe(&plane_offset_profile(surface, FIT_INCIDENCE, freq, FIT_SAMPLES)?)
}

/// Lower edge of the main lobe relative to its peak.
pub const MAINLOBE_CUT: f64 = 0.01;

/// Fits a Gaussian to the main lobe of `profile` and returns its standard
/// deviation.
///
/// The lobe is the contiguous run of samples around the maximum that stay at
/// or above 1% of the peak. The fit is a least-squares parabola through the
/// logarithm of those samples, so the amplitude is a free parameter.
pub fn fit_gaussian_mainlobe(profile: &[(f64, f64)]) -> Result<f64> {
    if profile.iter().any(|(x, y)| !x.is_finite() || !y.is_finite() || *y < 0.0) {
        return Err(GbsmError::Fit("profile contains non-finite or negative samples".into()));
    }
    let (imax, &(_, peak)) = profile
        .iter()
        .enumerate()
        .max_by(|a, b| a.1 .1.total_cmp(&b.1 .1))
        .ok_or_else(|| GbsmError::Fit("empty profile".into()))?;
    if peak <= 0.0 {
        return Err(GbsmError::Fit("profile has no positive samples".into()));
    }
    if imax == 0 || imax + 1 == profile.len() {
        return Err(GbsmError::Fit("profile maximum lies on its boundary".into()));
    }
    let cut = MAINLOBE_CUT * peak;
    let mut lo = imax;
    while lo > 0 && profile[lo - 1].1 >= cut {
        lo -= 1;
    }
    let mut hi = imax;
    while hi + 1 < profile.len() && profile[hi + 1].1 >= cut {
        hi += 1;
    }
    let lobe = &profile[lo..=hi];
    if lobe.len() < 5 {
        return Err(GbsmError::Fit(format!("main lobe has {} samples, need at least 5", lobe.len())));
    }
    let x0 = profile[imax].0;
    // Normal equations for ln y = a + b u + c u^2 with u = x - x0.
    let mut s = [0.0f64; 5];
    let mut r = [0.0f64; 3];
    for &(x, y) in lobe {
        let u = x - x0;
        let ly = (y / peak).ln();
        let mut p = 1.0;
        for (i, si) in s.iter_mut().enumerate() {
            *si += p;
            if i < 3 {
                r[i] += p * ly;
            }
            p *= u;
        }
    }
    let m = [[s[0], s[1], s[2]], [s[1], s[2], s[3]], [s[2], s[3], s[4]]];
    let det = det3(&m);
    if det.abs() < f64::MIN_POSITIVE {
        return Err(GbsmError::Fit("singular lobe fit".into()));
    }
    let mut mc = m;
    for row in 0..3 {
        mc[row][2] = r[row];
    }
    let c = det3(&mc) / det;
    if !(c < 0.0) {
        return Err(GbsmError::Fit("main lobe is not concave in log scale".into()));
    }
    Ok((-1.0 / (2.0 * c)).sqrt())
}

fn det3(m: &[[f64; 3]; 3]) -> f64 {
    m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
}

/// Power law for an intra-cluster angle spread over frequency.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AngleSpreadLaw {
    /// Spread at the reference frequency, radians.
    pub sigma_ref: f64,
    /// Reference frequency, Hz.
    pub ref_freq: f64,
    pub exponent: f64,
    /// Mean of the exponential law the spread is drawn from, radians.
    pub mean_sigma: f64,
}

impl AngleSpreadLaw {
    pub fn scale_sigma(&self, freq: f64) -> Result<f64> {
        scale_sigma(self.sigma_ref, self.ref_freq, self.exponent, freq)
    }
}

/// `sigma_ref * (freq / ref_freq)^exponent`.
pub fn scale_sigma(sigma_ref: f64, ref_freq: f64, exponent: f64, freq: f64) -> Result<f64> {
    if !(freq > 0.0 && ref_freq > 0.0) {
        return Err(GbsmError::domain(format!(
            "frequencies must be > 0, got {freq} and reference {ref_freq}"
        )));
    }
    if freq == ref_freq {
        return Ok(sigma_ref);
    }
    Ok(sigma_ref * (freq / ref_freq).powf(exponent))
}

/// Exponentially distributed angle spread with the given mean.
pub fn draw_sigma<R: Rng + ?Sized>(mean_sigma: f64, rng: &mut R) -> Result<f64> {
    if !(mean_sigma >= 0.0 && mean_sigma.is_finite()) {
        return Err(GbsmError::domain(format!("mean spread must be >= 0, got {mean_sigma}")));
    }
    if mean_sigma == 0.0 {
        return Ok(0.0);
    }
    Ok(Exp::new(1.0 / mean_sigma).expect("positive rate").sample(rng))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::{stream, Purpose, StreamKey};
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    fn fig3() -> SurfaceParams {
        material("fig3").unwrap()
    }

    #[test]
    fn bundled_materials() {
        let names = material_names();
        assert!(names.contains(&"plaster1".to_string()));
        assert_abs_diff_eq!(material("plaster1").unwrap().height_std, 0.5e-3, epsilon = 1e-15);
        assert_abs_diff_eq!(material("plaster2").unwrap().height_std, 1.5e-3, epsilon = 1e-15);
        let s = fig3();
        assert_abs_diff_eq!(s.extent_x, 23e-3, epsilon = 1e-15);
        assert!(material("velvet").is_err());
    }

    #[test]
    fn smooth_surface_is_coherent_only() {
        let s = SurfaceParams::square(1e-300, 2.3e-3).unwrap();
        let geom = ScatterGeometry {
            incident: 0.4,
            exit: 0.5,
            plane_offset: 0.3,
        };
        let k = wavenumber(300e9);
        let (s1, s2) = (0.4f64.sin(), 0.5f64.sin());
        let vx = k * (s1 - s2 * 0.3f64.cos());
        let vy = -k * s2 * 0.3f64.sin();
        let rho0 = sinc(vx * s.extent_x) * sinc(vy * s.extent_y);
        let got = scattering_coefficient(&s, &geom, k).unwrap();
        assert_abs_diff_eq!(got, rho0 * rho0, epsilon = 1e-15);
    }

    #[test]
    fn specular_hand_oracle() {
        let s = fig3();
        let t = 0.49;
        let geom = ScatterGeometry {
            incident: t,
            exit: t,
            plane_offset: 0.0,
        };
        let k = wavenumber(300e9);
        let got = scattering_coefficient(&s, &geom, k).unwrap();
        // Specular direction: rho0 = 1 and v_xy = 0; series summed plainly.
        let g = (k * s.height_std * 2.0 * t.cos()).powi(2);
        let f = (1.0 + t.cos().powi(2) - t.sin().powi(2)) / (2.0 * t.cos().powi(2));
        let mut sum = 0.0;
        let mut gm_over_fact = 1.0;
        for m in 1..200 {
            gm_over_fact *= g / m as f64;
            sum += gm_over_fact / m as f64;
        }
        let pre = PI * s.corr_length.powi(2) * f * f / (s.extent_x * s.extent_y);
        let expected = (-g as f64).exp() * (1.0 + pre * sum);
        assert_abs_diff_eq!(got, expected, epsilon = 1e-12 * expected);
    }

    #[test]
    fn grazing_is_rejected() {
        let geom = ScatterGeometry {
            incident: FRAC_PI_2,
            exit: 0.2,
            plane_offset: 0.0,
        };
        assert!(matches!(
            scattering_coefficient(&fig3(), &geom, 1.0),
            Err(GbsmError::Domain(_))
        ));
        let geom = ScatterGeometry {
            incident: 0.2,
            exit: FRAC_PI_2,
            plane_offset: 0.0,
        };
        assert!(scattering_coefficient(&fig3(), &geom, 1.0).is_err());
    }

    #[test]
    fn large_roughness_stays_finite() {
        let s = SurfaceParams::square(0.05, 2.3e-3).unwrap();
        let geom = ScatterGeometry {
            incident: 0.2,
            exit: 0.3,
            plane_offset: 0.1,
        };
        let v = scattering_coefficient(&s, &geom, wavenumber(350e9)).unwrap();
        assert!(v.is_finite() && v >= 0.0);
    }

    #[test]
    fn truncation_is_converged() {
        let s = fig3();
        for (i, x) in [-2.0, -0.3, 0.0, 0.05, 0.7, 2.9].into_iter().enumerate() {
            let geom = ScatterGeometry {
                incident: 0.3 + 0.1 * i as f64,
                exit: 0.49,
                plane_offset: x,
            };
            for f in [300e9, 350e9] {
                let a = scattering_coefficient_with_tolerance(&s, &geom, wavenumber(f), 1e-12).unwrap();
                let b = scattering_coefficient_with_tolerance(&s, &geom, wavenumber(f), 1e-14).unwrap();
                assert!((a - b).abs() <= 1e-9 * b.abs(), "{a} {b}");
            }
        }
    }

    #[test]
    fn gaussian_self_consistency() {
        let prof: Vec<(f64, f64)> = (0..801)
            .map(|i| {
                let x = -2.0 + 4.0 * i as f64 / 800.0;
                (x, 3.0 * (-(x - 0.1) * (x - 0.1) / (2.0 * 0.25 * 0.25)).exp())
            })
            .collect();
        assert_abs_diff_eq!(fit_gaussian_mainlobe(&prof).unwrap(), 0.25, epsilon = 1e-6);
    }

    #[test]
    fn fit_rejects_edge_maximum() {
        let prof: Vec<(f64, f64)> = (0..50).map(|i| (i as f64, i as f64)).collect();
        assert!(matches!(fit_gaussian_mainlobe(&prof), Err(GbsmError::Fit(_))));
        let narrow = vec![(0.0, 0.0), (1.0, 1.0), (2.0, 0.0)];
        assert!(fit_gaussian_mainlobe(&narrow).is_err());
    }

    #[test]
    fn lobe_broadens_with_frequency() {
        let s = fig3();
        let a = mainlobe_sigma(&s, 300e9).unwrap();
        let b = mainlobe_sigma(&s, 350e9).unwrap();
        assert!(b > a);
    }

    #[test]
    fn spread_draw_mean() {
        let mut rng = stream(4, StreamKey::new(Purpose::AngleSpread));
        let mu = 1.4f64.to_radians();
        let n = 100_000;
        let mean: f64 = (0..n).map(|_| draw_sigma(mu, &mut rng).unwrap()).sum::<f64>() / n as f64;
        assert!((mean / mu - 1.0).abs() < 0.02);
        assert_eq!(draw_sigma(0.0, &mut rng).unwrap(), 0.0);
        let a = draw_sigma(mu, &mut stream(4, StreamKey::new(Purpose::AngleSpread))).unwrap();
        let b = draw_sigma(mu, &mut stream(4, StreamKey::new(Purpose::AngleSpread))).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn frequency_law() {
        assert_eq!(scale_sigma(0.3, 300e9, 1.2, 300e9).unwrap(), 0.3);
        let got = scale_sigma(1.0, 300e9, 1.2, 350e9).unwrap();
        assert_abs_diff_eq!(got, (7.0f64 / 6.0).powf(1.2), epsilon = 1e-14);
        assert_abs_diff_eq!(got, 1.203, epsilon = 5e-4);
        assert_eq!(scale_sigma(0.3, 300e9, 0.0, 350e9).unwrap(), 0.3);
        assert!(scale_sigma(0.3, 300e9, 1.0, 0.0).is_err());
        let law = AngleSpreadLaw {
            sigma_ref: 0.02,
            ref_freq: 325e9,
            exponent: 1.2,
            mean_sigma: 0.02,
        };
        assert_eq!(law.scale_sigma(325e9).unwrap(), 0.02);
    }

    proptest! {
        #[test]
        fn plane_offset_symmetry(t1 in 0.0f64..1.5, t2 in 0.0f64..1.5, t3 in -PI..PI, f in 100e9f64..400e9) {
            let s = fig3();
            let k = wavenumber(f);
            let a = scattering_coefficient(&s, &ScatterGeometry { incident: t1, exit: t2, plane_offset: t3 }, k).unwrap();
            let b = scattering_coefficient(&s, &ScatterGeometry { incident: t1, exit: t2, plane_offset: -t3 }, k).unwrap();
            prop_assert!((a - b).abs() <= 1e-12 * a.abs().max(1e-300));
            prop_assert!(a >= 0.0);
        }

        #[test]
        fn law_is_multiplicative(s in 1e-3f64..0.5, r in -2.0f64..2.0, f0 in 100e9f64..400e9,
                                 f1 in 100e9f64..400e9, f2 in 100e9f64..400e9) {
            let one = scale_sigma(scale_sigma(s, f0, r, f1).unwrap(), f1, r, f2).unwrap();
            let direct = scale_sigma(s, f0, r, f2).unwrap();
            prop_assert!((one - direct).abs() <= 1e-12 * direct);
        }
    }
}
