//! Finite-distance scattering amplitude.
//!
//! Outside the potential the scattered wave is `f(r, theta) e^{ikr} / r` with
//!
//! ```text
//! f(r, theta) = (1/2ik) sum_l (2l+1) (e^{2i delta_l} - 1) P_l(cos theta) y_l(i/kr),
//! ```
//!
//! which tends to the conventional `f(theta)` as `kr -> infinity` because
//! `y_l(0) = 1`.

use num_complex::Complex64;

use crate::error::{positive, Error, Result};
use crate::phases::PhaseShiftSet;
use crate::specfun::{
    bessel_poly, bessel_poly_with_derivative, i_pow, legendre_orders, legendre_with_derivative,
    sine_forms, sph_bessel_j_orders, MAX_ORDER,
};

/// Smallest `kr` at which the series is evaluated.
pub const MIN_KR: f64 = 0.1;

/// Consecutive growing terms past `l_max / 2` that flag a divergent series.
const DIVERGENCE_RUN: usize = 5;

/// Truncation diagnostics of the partial-wave series at one radius.
#[derive(Debug, Clone, PartialEq)]
pub struct AmplitudeSeries {
    pub phases: PhaseShiftSet,
    /// Highest order with a nonzero term.
    pub l_max_eff: usize,
    /// `|(2l+1) e^{i delta_l} sin(delta_l) y_l(i/kr)| / k` at `l_max_eff`.
    pub tail_estimate: f64,
}

/// `f`, `df/dr` and `df/dtheta` at one point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AmplitudeJet {
    pub f: Complex64,
    pub df_dr: Complex64,
    pub df_dtheta: Complex64,
}

/// Whether a plane-wave partial sum met its truncation rule of thumb.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlaneWaveSum {
    pub value: Complex64,
    /// Set when `l_max < kr + 10`; the sum is then not converged.
    pub truncated: bool,
}

pub(crate) fn check_theta(theta: f64) -> Result<()> {
    if (0.0..=std::f64::consts::PI).contains(&theta) {
        Ok(())
    } else {
        Err(Error::Domain {
            what: "polar angle theta (must lie in [0, pi])",
            value: theta,
        })
    }
}

pub(crate) fn check_kr(k: f64, r: f64) -> Result<f64> {
    positive("r", r)?;
    let kr = k * r;
    if kr < MIN_KR {
        return Err(Error::Domain {
            what: "kr (series evaluated only for kr >= 0.1)",
            value: kr,
        });
    }
    Ok(kr)
}

/// `(1/2ik)(2l+1)(e^{2i delta_l} - 1) = (2l+1) e^{i delta_l} sin(delta_l) / k`.
fn partial_weights(phases: &PhaseShiftSet) -> Vec<Complex64> {
    let k = phases.k();
    phases
        .deltas()
        .iter()
        .enumerate()
        .map(|(l, &d)| Complex64::from_polar((2 * l + 1) as f64 * d.sin() / k, d))
        .collect()
}

/// Series diagnostics at radius `r`, failing when the term magnitudes
/// `|(2l+1)(e^{2i delta_l} - 1) y_l(i/kr)|` keep growing past `l_max / 2`.
pub fn amplitude_series(phases: &PhaseShiftSet, r: f64) -> Result<AmplitudeSeries> {
    let kr = check_kr(phases.k(), r)?;
    let z = Complex64::new(0.0, 1.0 / kr);
    let weights = partial_weights(phases);
    let l_max = phases.l_max();
    let mut previous = f64::INFINITY;
    let mut run = 0;
    let mut l_max_eff = 0;
    let mut tail_estimate = 0.0;
    for (l, w) in weights.iter().enumerate() {
        let term = if w.norm() == 0.0 {
            0.0
        } else {
            w.norm() * bessel_poly(l, z)?.norm()
        };
        if 2 * l > l_max && term > previous {
            run += 1;
            if run >= DIVERGENCE_RUN {
                return Err(Error::Divergence { l, kr });
            }
        } else {
            run = 0;
        }
        previous = term;
        if term > 0.0 {
            l_max_eff = l;
            tail_estimate = term;
        }
    }
    Ok(AmplitudeSeries {
        phases: phases.clone(),
        l_max_eff,
        tail_estimate,
    })
}

/// Partial-wave coefficients `g_l(theta)` of `f` in the basis `y_l(i/kr)`.
pub fn expansion_coefficients(phases: &PhaseShiftSet, theta: f64) -> Result<Vec<Complex64>> {
    check_theta(theta)?;
    let p = legendre_orders(phases.l_max(), theta.cos())?;
    Ok(partial_weights(phases)
        .into_iter()
        .zip(p)
        .map(|(w, pl)| w * pl)
        .collect())
}

/// Conventional amplitude `f(theta)`, the `kr -> infinity` limit.
pub fn amplitude_asymptotic(phases: &PhaseShiftSet, theta: f64) -> Result<Complex64> {
    Ok(expansion_coefficients(phases, theta)?
        .into_iter()
        .fold(Complex64::new(0.0, 0.0), |acc, g| acc + g))
}

/// Finite-distance amplitude `f(r, theta)`.
pub fn amplitude_finite(phases: &PhaseShiftSet, r: f64, theta: f64) -> Result<Complex64> {
    let series = amplitude_series(phases, r)?;
    let kr = phases.k() * r;
    let z = Complex64::new(0.0, 1.0 / kr);
    let g = expansion_coefficients(phases, theta)?;
    let mut f = Complex64::new(0.0, 0.0);
    for (l, gl) in g.iter().enumerate().take(series.l_max_eff + 1) {
        f += gl * bessel_poly(l, z)?;
    }
    Ok(f)
}

/// `f(r, theta)` with its exact partial derivatives.
///
/// `d/dr y_l(i/kr) = -i/(k r^2) y_l'(i/kr)` and
/// `d/dtheta P_l(cos theta) = -sin(theta) P_l'(cos theta)`.
pub fn amplitude_with_derivatives(
    phases: &PhaseShiftSet,
    r: f64,
    theta: f64,
) -> Result<AmplitudeJet> {
    check_theta(theta)?;
    let series = amplitude_series(phases, r)?;
    let k = phases.k();
    let z = Complex64::new(0.0, 1.0 / (k * r));
    let dz_dr = Complex64::new(0.0, -1.0 / (k * r * r));
    let (sin_t, cos_t) = theta.sin_cos();
    let (p, dp) = legendre_with_derivative(phases.l_max(), cos_t)?;
    let weights = partial_weights(phases);
    let mut jet = AmplitudeJet {
        f: Complex64::new(0.0, 0.0),
        df_dr: Complex64::new(0.0, 0.0),
        df_dtheta: Complex64::new(0.0, 0.0),
    };
    for l in 0..=series.l_max_eff {
        let (y, dy) = bessel_poly_with_derivative(l, z)?;
        let w = weights[l];
        jet.f += w * p[l] * y;
        jet.df_dr += w * p[l] * dy * dz_dr;
        jet.df_dtheta += w * (-sin_t * dp[l]) * y;
    }
    Ok(jet)
}

/// Partial sum of the plane wave in sine form,
///
/// ```text
/// e^{ikr cos theta} = sum_l (2l+1) i^l M_l(i/kr) sin(kr - l pi/2 + Delta_l(i/kr)) / kr P_l(cos theta).
/// ```
///
/// Below `kr = 0.1` the removable `1/kr` is avoided by summing
/// `(2l+1) i^l j_l(kr) P_l` instead.
pub fn plane_wave_exact(kr: f64, theta: f64, l_max: usize) -> Result<PlaneWaveSum> {
    if !(kr >= 0.0 && kr.is_finite()) {
        return Err(Error::Domain {
            what: "kr (must be finite and non-negative)",
            value: kr,
        });
    }
    check_theta(theta)?;
    if l_max > MAX_ORDER {
        return Err(Error::OrderTooLarge {
            l: l_max,
            max: MAX_ORDER,
        });
    }
    let truncated = (l_max as f64) < kr + 10.0;
    if kr == 0.0 {
        return Ok(PlaneWaveSum {
            value: Complex64::new(1.0, 0.0),
            truncated,
        });
    }
    let p = legendre_orders(l_max, theta.cos())?;
    let radial: Vec<f64> = if kr < MIN_KR {
        sph_bessel_j_orders(l_max, kr)?
    } else {
        sine_forms(l_max, kr)?
            .iter()
            .map(|s| s.modulus * s.sin_phase / kr)
            .collect()
    };
    let value = (0..=l_max).fold(Complex64::new(0.0, 0.0), |acc, l| {
        acc + (2 * l + 1) as f64 * i_pow(l) * (radial[l] * p[l])
    });
    Ok(PlaneWaveSum { value, truncated })
}
