//! Cross sections measured at a finite distance.
//!
//! The differential cross section counts the scattered flux through a
//! surface element normal to `j_sc`:
//!
//! ```text
//! dsigma/dOmega = r^2 (1 + tan^2 gamma_sc) j_r^sc / k = (|f|^2 + eta)(1 + tan^2 gamma_sc),
//! eta = (1/k) Im{ f* df/dr + e^{ikr(1 - cos theta)} [ (ikr(1 + cos theta) - 1) f + r df/dr ] }.
//! ```

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::amplitude::{
    amplitude_series, amplitude_with_derivatives, check_kr, check_theta, AmplitudeJet,
};
use crate::error::{Error, Result};
use crate::field::{flux_floor, flux_parts};
use crate::phases::PhaseShiftSet;
use crate::specfun::bessel_poly;

/// `|j_r^sc|` below `SINGULAR_OBLIQUITY_TOLERANCE * k / max(1, kr)^2` makes
/// the obliquity factor `1 + tan^2 gamma_sc` singular.
pub const SINGULAR_OBLIQUITY_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CrossSectionSample {
    pub r: f64,
    pub theta: f64,
    pub dsigma_domega: f64,
    pub f_abs2: f64,
    pub eta: f64,
    pub tan_gamma: f64,
}

fn eta_from_jet(k: f64, r: f64, theta: f64, jet: &AmplitudeJet) -> f64 {
    let kr = k * r;
    let lag = 2.0 * kr * (theta / 2.0).sin().powi(2);
    let e = Complex64::from_polar(1.0, lag);
    let bracket = Complex64::new(-1.0, kr * (1.0 + theta.cos())) * jet.f + r * jet.df_dr;
    (jet.f.conj() * jet.df_dr + e * bracket).im / k
}

/// Finite-distance correction `eta(r, theta)` to `|f|^2`.
pub fn eta_correction(phases: &PhaseShiftSet, r: f64, theta: f64) -> Result<f64> {
    let jet = amplitude_with_derivatives(phases, r, theta)?;
    Ok(eta_from_jet(phases.k(), r, theta, &jet))
}

/// `dsigma/dOmega = (|f|^2 + eta)(1 + tan^2 gamma_sc)`.
pub fn differential_cross_section(
    phases: &PhaseShiftSet,
    r: f64,
    theta: f64,
) -> Result<CrossSectionSample> {
    check_theta(theta)?;
    let k = phases.k();
    let kr = check_kr(k, r)?;
    let jet = amplitude_with_derivatives(phases, r, theta)?;
    let parts = flux_parts(k, r, theta, &jet);
    let j_sc = parts.outgoing + parts.interference;
    if j_sc.radial.abs() < flux_floor(SINGULAR_OBLIQUITY_TOLERANCE, k, kr) {
        return Err(Error::SingularObliquity { r, theta });
    }
    let tan_gamma = j_sc.polar / j_sc.radial;
    let f_abs2 = jet.f.norm_sqr();
    let eta = eta_from_jet(k, r, theta, &jet);
    Ok(CrossSectionSample {
        r,
        theta,
        dsigma_domega: (f_abs2 + eta) * (1.0 + tan_gamma * tan_gamma),
        f_abs2,
        eta,
        tan_gamma,
    })
}

/// `sigma_t(R) = (4 pi / k^2) sum_l (2l+1) sin^2(delta_l) |y_l(i/kR)|^2`,
/// the flux of `|f|^2` through the sphere of radius `R`.
pub fn sigma_total(phases: &PhaseShiftSet, radius: f64) -> Result<f64> {
    let series = amplitude_series(phases, radius)?;
    let k = phases.k();
    let z = Complex64::new(0.0, 1.0 / (k * radius));
    let mut sum = 0.0;
    for (l, d) in phases
        .deltas()
        .iter()
        .enumerate()
        .take(series.l_max_eff + 1)
    {
        sum += (2 * l + 1) as f64 * d.sin().powi(2) * bessel_poly(l, z)?.norm_sqr();
    }
    Ok(4.0 * PI / (k * k) * sum)
}

/// Conventional `sigma_t = (4 pi / k^2) sum_l (2l+1) sin^2(delta_l)`.
pub fn sigma_total_asymptotic(phases: &PhaseShiftSet) -> f64 {
    let k = phases.k();
    let sum: f64 = phases
        .deltas()
        .iter()
        .enumerate()
        .map(|(l, d)| (2 * l + 1) as f64 * d.sin().powi(2))
        .sum();
    4.0 * PI / (k * k) * sum
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::amplitude::{amplitude_asymptotic, amplitude_finite};
    use crate::field::flux;
    use crate::phases::{hard_sphere_phases, square_well_phases};
    use crate::quadrature::GaussLegendre;
    use crate::specfun::modulus_argument;
    use rand::{rngs::StdRng, Rng, SeedableRng};

    fn fixtures() -> Vec<(PhaseShiftSet, f64)> {
        vec![
            (hard_sphere_phases(1.0, 1.0, 21).unwrap(), 1.0),
            (square_well_phases(1.0, 4.0, 1.0, 21).unwrap(), 1.0),
            (
                PhaseShiftSet::new(0.8, vec![0.4, -0.7, 0.25, 0.05]).unwrap(),
                0.5,
            ),
        ]
    }

    #[test]
    fn free_particle() {
        let free = PhaseShiftSet::new(1.0, vec![0.0; 4]).unwrap();
        assert_eq!(eta_correction(&free, 2.0, 1.0).unwrap(), 0.0);
        assert_eq!(
            differential_cross_section(&free, 2.0, 1.0),
            Err(Error::SingularObliquity { r: 2.0, theta: 1.0 })
        );
        assert_eq!(sigma_total_asymptotic(&free), 0.0);
        assert_eq!(sigma_total(&free, 3.0).unwrap(), 0.0);
    }

    #[test]
    fn s_wave_eta_closed_form() {
        let (k, d0) = (1.2, 0.8);
        let set = PhaseShiftSet::new(k, vec![d0]).unwrap();
        let f0 = Complex64::from_polar(d0.sin() / k, d0);
        for (r, theta) in [(1.0, 0.4), (7.5, 2.2), (30.0, PI)] {
            let kr = k * r;
            let e = Complex64::from_polar(1.0, kr * (1.0 - f64::cos(theta)));
            let expected = (e * Complex64::new(-1.0, kr * (1.0 + f64::cos(theta))) * f0).im / k;
            let eta = eta_correction(&set, r, theta).unwrap();
            assert!((eta - expected).abs() < 1e-12 * expected.abs().max(1.0));
        }
    }

    #[test]
    fn eta_matches_radial_scattered_flux() {
        let mut rng = StdRng::seed_from_u64(3);
        for (set, cutoff) in fixtures() {
            let k = set.k();
            for _ in 0..100 {
                let r = rng.gen_range(cutoff..50.0 / k);
                let theta = rng.gen_range(0.0..PI);
                let f = amplitude_finite(&set, r, theta).unwrap();
                let lhs = f.norm_sqr() + eta_correction(&set, r, theta).unwrap();
                let rhs = flux(&set, r, theta).unwrap().j_sc.radial * r * r / k;
                assert!((lhs - rhs).abs() <= 1e-6 * rhs.abs().max(f.norm_sqr()));
            }
        }
    }

    #[test]
    fn closed_form_matches_flux_form() {
        let mut rng = StdRng::seed_from_u64(8);
        for (set, cutoff) in fixtures() {
            let k = set.k();
            for _ in 0..100 {
                let r = rng.gen_range(cutoff..30.0 / k);
                let theta = rng.gen_range(0.0..PI);
                let p = flux(&set, r, theta).unwrap();
                if p.j_sc.radial.abs() <= 1e-12 * k {
                    continue;
                }
                let tan = p.j_sc.polar / p.j_sc.radial;
                let flux_form = r * r * (1.0 + tan * tan) * p.j_sc.radial / k;
                let s = differential_cross_section(&set, r, theta).unwrap();
                assert!((s.dsigma_domega - flux_form).abs() <= 1e-6 * flux_form.abs());
                let recombined = (s.f_abs2 + s.eta) * (1.0 + s.tan_gamma * s.tan_gamma);
                assert_eq!(recombined, s.dsigma_domega);
            }
        }
    }

    #[test]
    fn backward_cross_section_averages_to_conventional() {
        for (set, _) in fixtures() {
            let k = set.k();
            let target = amplitude_asymptotic(&set, PI).unwrap().norm_sqr();
            let n = 64;
            let r0 = 1e6 / k;
            let wavelength = 2.0 * PI / k;
            let mean: f64 = (0..n)
                .map(|i| {
                    let r = r0 + wavelength * i as f64 / n as f64;
                    differential_cross_section(&set, r, PI)
                        .unwrap()
                        .dsigma_domega
                })
                .sum::<f64>()
                / n as f64;
            assert!((mean - target).abs() <= 1e-3 * target, "{mean} vs {target}");
        }
    }

    #[test]
    fn sigma_total_closed_forms() {
        let k = 0.9;
        let s = PhaseShiftSet::new(k, vec![0.7]).unwrap();
        let expected = 4.0 * PI / (k * k) * 0.7f64.sin().powi(2);
        for radius in [0.2, 1.0, 1e3] {
            assert_eq!(sigma_total(&s, radius).unwrap(), expected);
        }
        let p = PhaseShiftSet::new(k, vec![0.0, 0.3]).unwrap();
        for radius in [0.5, 2.0, 40.0] {
            let kr = k * radius;
            let expected =
                4.0 * PI / (k * k) * 3.0 * 0.3f64.sin().powi(2) * (1.0 + 1.0 / (kr * kr));
            assert!((sigma_total(&p, radius).unwrap() - expected).abs() < 1e-14 * expected);
        }
        let unitary = PhaseShiftSet::new(1.0, vec![PI / 2.0]).unwrap();
        assert!((sigma_total_asymptotic(&unitary) - 4.0 * PI).abs() < 1e-14);
    }

    #[test]
    fn sigma_total_matches_surface_integral() {
        let rule = GaussLegendre::new(128);
        for (set, _) in fixtures() {
            let k = set.k();
            for kr in [1.0, 10.0, 100.0] {
                let radius = kr / k;
                let integral = 2.0
                    * PI
                    * rule.integrate(|u| {
                        amplitude_finite(&set, radius, u.clamp(-1.0, 1.0).acos())
                            .unwrap()
                            .norm_sqr()
                    });
                let sigma = sigma_total(&set, radius).unwrap();
                assert!((sigma - integral).abs() <= 1e-8 * sigma, "kr={kr}");
            }
        }
    }

    #[test]
    fn optical_theorem() {
        for (set, _) in fixtures() {
            let f0 = amplitude_asymptotic(&set, 0.0).unwrap();
            let sigma = sigma_total_asymptotic(&set);
            assert!((sigma - 4.0 * PI / set.k() * f0.im).abs() <= 1e-10 * sigma);
        }
    }

    #[test]
    fn finite_radius_never_lowers_sigma() {
        for l in 0..=20 {
            for kr in [0.5, 1.0, 3.0, 10.0, 100.0, 1e4] {
                assert!(modulus_argument(l, kr).unwrap().modulus >= 1.0);
            }
        }
        for (set, _) in fixtures() {
            let k = set.k();
            for kr in [1.0, 3.0, 10.0, 1e4] {
                assert!(sigma_total(&set, kr / k).unwrap() >= sigma_total_asymptotic(&set));
            }
        }
    }

    #[test]
    fn sigma_total_approaches_conventional_as_inverse_square() {
        for (set, _) in fixtures() {
            let k = set.k();
            let inf = sigma_total_asymptotic(&set);
            let dev = |kr: f64| sigma_total(&set, kr / k).unwrap() / inf - 1.0;
            let ratio = dev(1e2) / dev(1e3);
            assert!((ratio / 100.0 - 1.0).abs() < 0.3, "ratio={ratio}");
        }
    }
}
