//! Wave function and probability flux outside the potential.
//!
//! With `hbar = m = 1` the flux is `j = Im(psi* grad psi)` and the incident
//! plane wave `e^{ikr cos theta}` carries `j_in = (k cos theta, -k sin theta)`
//! in the local `(r, theta)` frame.
//!
//! The scattered flux `j_sc = j - j_in` contains, besides the purely outgoing
//! part `Im(F* grad F)` of `F = f e^{ikr}/r`, the interference between `F` and
//! the plane wave. Both are reported: `j_sc` with its obliquity angle, and the
//! outgoing part with its own angle. The two differ at every distance; the
//! interference part does not decay relative to the outgoing one.

use num_complex::Complex64;

use crate::amplitude::{
    amplitude_finite, amplitude_with_derivatives, check_kr, check_theta, AmplitudeJet,
};
use crate::error::{Error, Result};
use crate::phases::{radial_coefficients, PhaseShiftSet};
use crate::specfun::{legendre_with_derivative, sine_forms};

/// Flux components in the local polar frame.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct FluxVector {
    pub radial: f64,
    pub polar: f64,
}

impl FluxVector {
    pub fn norm(&self) -> f64 {
        self.radial.hypot(self.polar)
    }

    /// `atan2(polar, radial)`: angle between the flux and the radial direction.
    pub fn obliquity(&self) -> f64 {
        self.polar.atan2(self.radial)
    }
}

impl std::ops::Add for FluxVector {
    type Output = FluxVector;
    fn add(self, rhs: FluxVector) -> FluxVector {
        FluxVector {
            radial: self.radial + rhs.radial,
            polar: self.polar + rhs.polar,
        }
    }
}

/// Incident, scattered and total wave function at one point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WaveValues {
    pub r: f64,
    pub theta: f64,
    pub psi_in: Complex64,
    pub psi_sc: Complex64,
    pub psi: Complex64,
}

/// Wave function and flux at one point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FieldPoint {
    pub r: f64,
    pub theta: f64,
    pub psi_in: Complex64,
    pub psi_sc: Complex64,
    pub psi: Complex64,
    pub j_in: FluxVector,
    /// `j - j_in`, interference with the incident wave included.
    pub j_sc: FluxVector,
    pub j: FluxVector,
    /// Obliquity of `j_sc`.
    pub gamma_sc: f64,
    /// `Im(F* grad F)` with `F = psi_sc`.
    pub j_outgoing: FluxVector,
    /// Obliquity of `j_outgoing`; `None` where it vanishes.
    pub gamma_outgoing: Option<f64>,
}

/// A value and its gradient `(d/dr, (1/r) d/dtheta)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PsiGradient {
    pub psi: Complex64,
    pub d_r: Complex64,
    pub d_theta_over_r: Complex64,
}

/// `Im(psi* grad psi)`.
pub fn probability_current(value: &PsiGradient) -> FluxVector {
    let c = value.psi.conj();
    FluxVector {
        radial: (c * value.d_r).im,
        polar: (c * value.d_theta_over_r).im,
    }
}

/// Flux magnitudes below `UNDEFINED_ANGLE_TOLERANCE * k / max(1, kr)^2`
/// leave the obliquity angle undefined.
pub const UNDEFINED_ANGLE_TOLERANCE: f64 = 1e-14;

pub(crate) fn flux_floor(tolerance: f64, k: f64, kr: f64) -> f64 {
    tolerance * k / kr.max(1.0).powi(2)
}

/// `kr (1 - cos theta)` without cancellation near the forward direction.
fn forward_lag(kr: f64, theta: f64) -> f64 {
    2.0 * kr * (theta / 2.0).sin().powi(2)
}

/// `psi_in = e^{ikr cos theta}`, `psi_sc = f(r, theta) e^{ikr} / r`.
pub fn wavefunction(phases: &PhaseShiftSet, r: f64, theta: f64) -> Result<WaveValues> {
    check_theta(theta)?;
    let k = phases.k();
    let kr = check_kr(k, r)?;
    let f = amplitude_finite(phases, r, theta)?;
    let psi_in = Complex64::from_polar(1.0, kr * theta.cos());
    let psi_sc = f * Complex64::from_polar(1.0 / r, kr);
    Ok(WaveValues {
        r,
        theta,
        psi_in,
        psi_sc,
        psi: psi_in + psi_sc,
    })
}

/// Flux pieces built from an amplitude jet. The common phase `e^{ikr}` is
/// removed analytically from every bilinear product.
pub(crate) struct FluxParts {
    pub outgoing: FluxVector,
    pub interference: FluxVector,
}

pub(crate) fn flux_parts(k: f64, r: f64, theta: f64, jet: &AmplitudeJet) -> FluxParts {
    let kr = k * r;
    let (sin_t, cos_t) = theta.sin_cos();
    let i = Complex64::new(0.0, 1.0);
    // e^{-ikr} F and its gradient.
    let g = jet.f / r;
    let g_r = jet.df_dr / r + jet.f * (i * k / r - 1.0 / (r * r));
    let g_t = jet.df_dtheta / (r * r);
    let outgoing = FluxVector {
        radial: (g.conj() * g_r).im,
        polar: (g.conj() * g_t).im,
    };
    // psi_in* F = E e^{-ikr} F with E = e^{ikr(1 - cos theta)}.
    let e = Complex64::from_polar(1.0, forward_lag(kr, theta));
    let in_r = i * k * cos_t;
    let in_t = -i * k * sin_t;
    let interference = FluxVector {
        radial: (e * g_r).im + (e.conj() * g.conj() * in_r).im,
        polar: (e * g_t).im + (e.conj() * g.conj() * in_t).im,
    };
    FluxParts {
        outgoing,
        interference,
    }
}

/// Wave function and flux with exact derivatives of `f`.
///
/// Fails with [`Error::UndefinedAngle`] where `j_sc` vanishes, e.g. for a
/// free particle.
pub fn flux(phases: &PhaseShiftSet, r: f64, theta: f64) -> Result<FieldPoint> {
    let wave = wavefunction(phases, r, theta)?;
    let k = phases.k();
    let kr = k * r;
    let jet = amplitude_with_derivatives(phases, r, theta)?;
    let parts = flux_parts(k, r, theta, &jet);
    let j_in = FluxVector {
        radial: k * theta.cos(),
        polar: -k * theta.sin(),
    };
    let j_sc = parts.outgoing + parts.interference;
    let floor = flux_floor(UNDEFINED_ANGLE_TOLERANCE, k, kr);
    if j_sc.norm() < floor {
        return Err(Error::UndefinedAngle { r, theta });
    }
    let gamma_outgoing = (parts.outgoing.norm() >= floor).then(|| parts.outgoing.obliquity());
    Ok(FieldPoint {
        r,
        theta,
        psi_in: wave.psi_in,
        psi_sc: wave.psi_sc,
        psi: wave.psi,
        j_in,
        j_sc,
        j: j_in + j_sc,
        gamma_sc: j_sc.obliquity(),
        j_outgoing: parts.outgoing,
        gamma_outgoing,
    })
}

/// Total wave function from the partial-wave form
///
/// ```text
/// psi = sum_l A_l M_l(i/kr) sin(kr - l pi/2 + delta_l + Delta_l(i/kr)) / kr P_l(cos theta),
/// ```
///
/// with its gradient. `d/dr` uses `d/dx [S_l] = (l/x) S_l - S_{l+1}` at fixed
/// `delta_l`, where `S_l = M_l sin(theta_l + delta_l) / x`.
pub fn partial_wave_field(phases: &PhaseShiftSet, r: f64, theta: f64) -> Result<PsiGradient> {
    check_theta(theta)?;
    let k = phases.k();
    let x = check_kr(k, r)?;
    let l_max = phases.l_max();
    let forms = sine_forms(l_max + 1, x)?;
    let (sin_t, cos_t) = theta.sin_cos();
    let (p, dp) = legendre_with_derivative(l_max, cos_t)?;
    let a = radial_coefficients(phases).a;
    let zero = Complex64::new(0.0, 0.0);
    let mut out = PsiGradient {
        psi: zero,
        d_r: zero,
        d_theta_over_r: zero,
    };
    for l in 0..=l_max {
        let delta = phases.delta(l);
        let s = forms[l].modulus * forms[l].sin_shifted(delta) / x;
        let s_next = forms[l + 1].modulus * forms[l + 1].sin_shifted(delta) / x;
        let ds = l as f64 / x * s - s_next;
        out.psi += a[l] * (s * p[l]);
        out.d_r += a[l] * (k * ds * p[l]);
        out.d_theta_over_r += a[l] * (s * -sin_t * dp[l] / r);
    }
    Ok(out)
}

/// Total wave function `psi_in + f e^{ikr}/r` with its gradient.
pub fn boundary_form_field(phases: &PhaseShiftSet, r: f64, theta: f64) -> Result<PsiGradient> {
    check_theta(theta)?;
    let k = phases.k();
    let kr = check_kr(k, r)?;
    let jet = amplitude_with_derivatives(phases, r, theta)?;
    let i = Complex64::new(0.0, 1.0);
    let (sin_t, cos_t) = theta.sin_cos();
    let psi_in = Complex64::from_polar(1.0, kr * cos_t);
    let phase = Complex64::from_polar(1.0, kr);
    let sc = jet.f / r * phase;
    let sc_r = (jet.df_dr / r + jet.f * (i * k / r - 1.0 / (r * r))) * phase;
    let sc_t = jet.df_dtheta / (r * r) * phase;
    Ok(PsiGradient {
        psi: psi_in + sc,
        d_r: i * k * cos_t * psi_in + sc_r,
        d_theta_over_r: -i * k * sin_t * psi_in + sc_t,
    })
}
