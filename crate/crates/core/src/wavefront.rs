//! Outgoing wave fronts as surfaces of revolution.
//!
//! A wave front is normal to the scattered flux, so its generatrix `r(theta)`
//! obeys `dr/dtheta = -r tan(gamma)` with `gamma` the obliquity of the flux.
//! The anchor is `r(0) = R`, where `gamma = 0` by axial symmetry.

use std::f64::consts::PI;

use crate::amplitude::{amplitude_with_derivatives, check_kr};
use crate::error::{positive, Error, Result};
use crate::field::{flux_floor, flux_parts, UNDEFINED_ANGLE_TOLERANCE};
use crate::phases::PhaseShiftSet;

/// Largest `|tan gamma|` accepted at any integration stage.
pub const MAX_TAN_GAMMA: f64 = 10.0;

/// Relative agreement required between traces at `step` and `step / 2`.
pub const CONVERGENCE_TOLERANCE: f64 = 1e-8;

/// Which flux the wave front is taken normal to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum FluxConvention {
    /// `Im(F* grad F)` of the scattered wave `F = f e^{ikr}/r` alone.
    #[default]
    Outgoing,
    /// `j - j_in`, including interference with the incident plane wave.
    Interference,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WavefrontSample {
    pub theta: f64,
    pub r: f64,
    pub gamma_sc: f64,
    /// Gaussian curvature; `None` until computed, or where the radial flux
    /// does not point outward.
    pub curvature: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct WavefrontCurve {
    /// Anchor `r(0)`.
    pub radius: f64,
    /// Uniform angular step actually used.
    pub step: f64,
    pub samples: Vec<WavefrontSample>,
}

/// Obliquity angle of the chosen flux at `(r, theta)`, zero on the axis.
pub fn obliquity(
    phases: &PhaseShiftSet,
    r: f64,
    theta: f64,
    convention: FluxConvention,
) -> Result<f64> {
    let k = phases.k();
    let kr = check_kr(k, r)?;
    let jet = amplitude_with_derivatives(phases, r, theta)?;
    let parts = flux_parts(k, r, theta, &jet);
    let j = match convention {
        FluxConvention::Outgoing => parts.outgoing,
        FluxConvention::Interference => parts.outgoing + parts.interference,
    };
    if j.norm() < flux_floor(UNDEFINED_ANGLE_TOLERANCE, k, kr) {
        return Err(Error::UndefinedAngle { r, theta });
    }
    if theta == 0.0 {
        return Ok(0.0);
    }
    Ok(j.obliquity())
}

/// Classical fourth-order Runge–Kutta for `dr/dtheta = -r tan(gamma(r, theta))`
/// on a uniform grid from `0` to `theta_end`, with `gamma` supplied by the
/// caller. The step is shrunk so that it divides `theta_end`.
pub fn integrate_generatrix<G>(
    radius: f64,
    theta_end: f64,
    step: f64,
    mut gamma: G,
) -> Result<WavefrontCurve>
where
    G: FnMut(f64, f64) -> Result<f64>,
{
    positive("radius", radius)?;
    positive("step", step)?;
    if !(theta_end > 0.0 && theta_end < PI) {
        return Err(Error::Domain {
            what: "theta_end (must lie in (0, pi))",
            value: theta_end,
        });
    }
    let n = ((theta_end / step) - 1e-9).ceil().max(1.0) as usize;
    let h = theta_end / n as f64;
    let mut samples = Vec::with_capacity(n + 1);
    samples.push(WavefrontSample {
        theta: 0.0,
        r: radius,
        gamma_sc: 0.0,
        curvature: None,
    });
    let mut r = radius;
    for i in 0..n {
        let theta = i as f64 * h;
        let k1 = slope(&mut gamma, r, theta)?;
        let k2 = slope(&mut gamma, r + h / 2.0 * k1, theta + h / 2.0)?;
        let k3 = slope(&mut gamma, r + h / 2.0 * k2, theta + h / 2.0)?;
        let k4 = slope(&mut gamma, r + h * k3, theta + h)?;
        r += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        if !(r > 0.0 && r.is_finite()) {
            return Err(Error::Domain {
                what: "generatrix radius",
                value: r,
            });
        }
        let theta_next = if i + 1 == n {
            theta_end
        } else {
            (i + 1) as f64 * h
        };
        samples.push(WavefrontSample {
            theta: theta_next,
            r,
            gamma_sc: gamma(r, theta_next)?,
            curvature: None,
        });
    }
    Ok(WavefrontCurve {
        radius,
        step: h,
        samples,
    })
}

fn slope<G>(gamma: &mut G, r: f64, theta: f64) -> Result<f64>
where
    G: FnMut(f64, f64) -> Result<f64>,
{
    let g = if theta == 0.0 { 0.0 } else { gamma(r, theta)? };
    let t = g.tan();
    if t.abs() > MAX_TAN_GAMMA || !t.is_finite() {
        return Err(Error::StepInstability {
            theta,
            tan_gamma: t,
        });
    }
    Ok(-r * t)
}

/// Trace normal to the outgoing scattered flux.
pub fn trace_generatrix(
    phases: &PhaseShiftSet,
    radius: f64,
    theta_end: f64,
    step: f64,
) -> Result<WavefrontCurve> {
    trace_generatrix_with(phases, radius, theta_end, step, FluxConvention::default())
}

/// Trace with an explicit flux convention. The curve is integrated at `step`
/// and at `step / 2`; the two must agree to `CONVERGENCE_TOLERANCE * R`.
pub fn trace_generatrix_with(
    phases: &PhaseShiftSet,
    radius: f64,
    theta_end: f64,
    step: f64,
    convention: FluxConvention,
) -> Result<WavefrontCurve> {
    positive("step", step)?;
    if step > PI / 500.0 {
        return Err(Error::Domain {
            what: "angular step (must not exceed pi/500)",
            value: step,
        });
    }
    if !(theta_end > 0.0 && theta_end <= PI - step) {
        return Err(Error::Domain {
            what: "theta_end (must lie in (0, pi - step])",
            value: theta_end,
        });
    }
    let gamma = |r: f64, theta: f64| obliquity(phases, r, theta, convention);
    let coarse = integrate_generatrix(radius, theta_end, step, gamma)?;
    let fine = integrate_generatrix(radius, theta_end, coarse.step / 2.0, gamma)?;
    let difference = coarse
        .samples
        .iter()
        .zip(fine.samples.iter().step_by(2))
        .map(|(a, b)| (a.r - b.r).abs())
        .fold(0.0, f64::max);
    let tolerance = CONVERGENCE_TOLERANCE * radius;
    if difference >= tolerance {
        return Err(Error::NotConverged {
            difference,
            tolerance,
        });
    }
    Ok(coarse)
}

fn unwrap_step(a: f64, b: f64) -> f64 {
    let d = b - a;
    d - 2.0 * PI * (d / (2.0 * PI)).round()
}

/// Gaussian curvature of the surface of revolution,
///
/// ```text
/// K = cos^2(gamma) (1 + gamma') (1 - tan(gamma) cot(theta)) / r^2,
/// ```
///
/// with `gamma' = dgamma/dtheta` from finite differences along the curve
/// (central inside, one-sided second order at the ends). On the axis
/// `tan(gamma) cot(theta) -> gamma'`, so `K(0) = (1 + gamma')(1 - gamma') / R^2`.
/// Samples whose flux points inward (`|gamma| >= pi/2`) get `None`.
pub fn gaussian_curvature(curve: &WavefrontCurve) -> Result<WavefrontCurve> {
    let s = &curve.samples;
    let n = s.len();
    if n < 3 {
        return Err(Error::InsufficientSamples {
            found: n,
            needed: 3,
        });
    }
    let slope = |i: usize| -> f64 {
        if i == 0 {
            let (h1, h2) = (s[1].theta - s[0].theta, s[2].theta - s[0].theta);
            let (d1, d2) = (
                unwrap_step(s[0].gamma_sc, s[1].gamma_sc),
                unwrap_step(s[0].gamma_sc, s[2].gamma_sc),
            );
            // Quadratic through the first three samples.
            (d1 * h2 * h2 - d2 * h1 * h1) / (h1 * h2 * (h2 - h1))
        } else if i == n - 1 {
            let (h1, h2) = (s[i].theta - s[i - 1].theta, s[i].theta - s[i - 2].theta);
            let (d1, d2) = (
                unwrap_step(s[i].gamma_sc, s[i - 1].gamma_sc),
                unwrap_step(s[i].gamma_sc, s[i - 2].gamma_sc),
            );
            -(d1 * h2 * h2 - d2 * h1 * h1) / (h1 * h2 * (h2 - h1))
        } else {
            unwrap_step(s[i - 1].gamma_sc, s[i + 1].gamma_sc) / (s[i + 1].theta - s[i - 1].theta)
        }
    };
    let mut out = curve.clone();
    for (i, sample) in out.samples.iter_mut().enumerate() {
        let dg = slope(i);
        let r2 = sample.r * sample.r;
        sample.curvature = if sample.theta == 0.0 {
            Some((1.0 + dg) * (1.0 - dg) / r2)
        } else if sample.gamma_sc.abs() >= PI / 2.0 {
            None
        } else {
            let (t, c) = (sample.gamma_sc.tan(), sample.gamma_sc.cos());
            Some(c * c * (1.0 + dg) * (1.0 - t / sample.theta.tan()) / r2)
        };
    }
    Ok(out)
}
