//! Double-precision special functions for partial-wave scattering.
//!
//! The spherical Hankel functions are built from the Bessel polynomial
//!
//! ```text
//! y_l(z) = sum_{k=0}^{l} (l+k)! / (k! (l-k)!) (z/2)^k
//! h_l^(1)(x) =  e^{ i(x - l pi/2)} y_l( i/x) / (ix)
//! h_l^(2)(x) = -e^{-i(x - l pi/2)} y_l(-i/x) / (ix)
//! ```
//!
//! so that `h_l^(1)(x) = M_l e^{i(x - l pi/2 + Delta_l)} / (ix)` with
//! `M_l = |y_l(i/x)|` and `Delta_l = arg y_l(i/x)`. The spherical Bessel and
//! Neumann functions come from the usual three-term recurrences and serve as
//! the numerically stable route wherever `j_l` is exponentially small
//! compared to `|h_l|`.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{positive, Error, Result};

/// Highest Bessel-polynomial order accepted. Above it the coefficients
/// overflow double precision for moderate arguments.
pub const MAX_ORDER: usize = 60;

/// Sine-form terms with `M_l` above this value are evaluated through the
/// Bessel/Neumann recurrences. Past it the phase `x - l pi/2 + Delta_l` sits
/// within roughly `1/M_l^2` of a multiple of pi and its sine cannot be
/// resolved from `Delta_l` in double precision.
pub const SINE_FORM_CONDITION_LIMIT: f64 = 1e2;

/// Modulus and principal argument of `y_l(i/kr)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModulusArgument {
    pub modulus: f64,
    /// Principal value in `(-pi, pi]`.
    pub argument: f64,
}

impl ModulusArgument {
    pub fn value(&self) -> Complex64 {
        Complex64::from_polar(self.modulus, self.argument)
    }
}

/// `i^l`, exact.
pub fn i_pow(l: usize) -> Complex64 {
    match l % 4 {
        0 => Complex64::new(1.0, 0.0),
        1 => Complex64::new(0.0, 1.0),
        2 => Complex64::new(-1.0, 0.0),
        _ => Complex64::new(0.0, -1.0),
    }
}

fn check_order(l: usize) -> Result<()> {
    if l > MAX_ORDER {
        Err(Error::OrderTooLarge { l, max: MAX_ORDER })
    } else {
        Ok(())
    }
}

/// Coefficients `c_k = (l+k)! / (k! (l-k)! 2^k)` from the ratio
/// `c_{k+1} / c_k = (l+k+1)(l-k) / (2(k+1))`.
fn bessel_poly_coefficients(l: usize) -> Vec<f64> {
    let mut c = Vec::with_capacity(l + 1);
    let mut ck = 1.0_f64;
    c.push(ck);
    for k in 0..l {
        ck *= ((l + k + 1) * (l - k)) as f64 / (2 * (k + 1)) as f64;
        c.push(ck);
    }
    c
}

fn finite(what: &'static str, l: usize, arg: f64, z: Complex64) -> Result<Complex64> {
    if z.re.is_finite() && z.im.is_finite() {
        Ok(z)
    } else {
        Err(Error::Overflow { what, l, arg })
    }
}

/// Bessel polynomial `y_l(z)`.
pub fn bessel_poly(l: usize, z: Complex64) -> Result<Complex64> {
    check_order(l)?;
    let value = bessel_poly_coefficients(l)
        .iter()
        .rev()
        .fold(Complex64::new(0.0, 0.0), |acc, &c| acc * z + c);
    finite("bessel_poly", l, z.norm(), value)
}

/// `y_l(z)` together with `dy_l/dz`.
pub fn bessel_poly_with_derivative(l: usize, z: Complex64) -> Result<(Complex64, Complex64)> {
    check_order(l)?;
    let coeffs = bessel_poly_coefficients(l);
    let mut value = Complex64::new(0.0, 0.0);
    let mut slope = Complex64::new(0.0, 0.0);
    for &c in coeffs.iter().rev() {
        slope = slope * z + value;
        value = value * z + c;
    }
    Ok((
        finite("bessel_poly", l, z.norm(), value)?,
        finite("bessel_poly derivative", l, z.norm(), slope)?,
    ))
}

/// `(M_l, Delta_l)` of `y_l(i/kr)`.
pub fn modulus_argument(l: usize, kr: f64) -> Result<ModulusArgument> {
    positive("kr", kr)?;
    let y = bessel_poly(l, Complex64::new(0.0, 1.0 / kr))?;
    let mut argument = y.im.atan2(y.re);
    if argument <= -PI {
        argument = PI;
    }
    Ok(ModulusArgument {
        modulus: y.norm(),
        argument,
    })
}

/// Which spherical Hankel function.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HankelKind {
    /// Outgoing, `j_l + i n_l`.
    First,
    /// Incoming, `j_l - i n_l`.
    Second,
}

impl TryFrom<u8> for HankelKind {
    type Error = Error;

    fn try_from(kind: u8) -> Result<Self> {
        match kind {
            1 => Ok(HankelKind::First),
            2 => Ok(HankelKind::Second),
            other => Err(Error::InvalidKind(other)),
        }
    }
}

/// Spherical Hankel function assembled from the Bessel polynomial.
pub fn sph_hankel(l: usize, x: f64, kind: HankelKind) -> Result<Complex64> {
    positive("x", x)?;
    let turn = i_pow(l).conj();
    let eix = Complex64::new(x.cos(), x.sin());
    let ix = Complex64::new(0.0, x);
    let value = match kind {
        HankelKind::First => eix * turn * bessel_poly(l, Complex64::new(0.0, 1.0 / x))? / ix,
        HankelKind::Second => {
            -(eix * turn).conj() * bessel_poly(l, Complex64::new(0.0, -1.0 / x))? / ix
        }
    };
    finite("sph_hankel", l, x, value)
}

/// Spherical Bessel function `j_l(x)`.
pub fn sph_bessel_j(l: usize, x: f64) -> Result<f64> {
    Ok(sph_bessel_j_orders(l, x)?[l])
}

/// `j_0(x) ..= j_{l_max}(x)`.
///
/// Upward recurrence when `x >= l_max`, otherwise Miller's downward
/// recurrence started at `l_max + ceil(sqrt(40 l_max)) + 15` and normalised
/// against the closed form of `j_0` (or `j_1` near a zero of `sin x`).
pub fn sph_bessel_j_orders(l_max: usize, x: f64) -> Result<Vec<f64>> {
    positive("x", x)?;
    let (sin, cos) = x.sin_cos();
    let j0 = sin / x;
    let j1 = sin / (x * x) - cos / x;
    if x >= l_max as f64 {
        let mut j = Vec::with_capacity(l_max + 1);
        j.push(j0);
        if l_max >= 1 {
            j.push(j1);
        }
        for n in 1..l_max {
            let next = (2 * n + 1) as f64 / x * j[n] - j[n - 1];
            j.push(next);
        }
        return Ok(j);
    }

    let start = l_max + (40.0 * l_max as f64).sqrt().ceil() as usize + 15;
    let mut j = vec![0.0; l_max + 1];
    let (mut upper, mut current) = (0.0_f64, 1e-300_f64);
    for n in (1..=start).rev() {
        if n <= l_max {
            j[n] = current;
        }
        let lower = (2 * n + 1) as f64 / x * current - upper;
        upper = current;
        current = lower;
        if current.abs() > 1e250 {
            current *= 1e-250;
            upper *= 1e-250;
            for v in j.iter_mut().skip(n) {
                *v *= 1e-250;
            }
        }
    }
    j[0] = current;
    let scale = if j0.abs() >= j1.abs() {
        j0 / j[0]
    } else {
        j1 / j[1]
    };
    for v in &mut j {
        *v *= scale;
    }
    Ok(j)
}

/// `n_0(x) ..= n_{l_max}(x)` by upward recurrence. Entries overflow to
/// `-inf` for `l_max` far above `x`.
pub(crate) fn neumann_upward(l_max: usize, x: f64) -> Vec<f64> {
    let (sin, cos) = x.sin_cos();
    let mut n = Vec::with_capacity(l_max + 1);
    n.push(-cos / x);
    if l_max >= 1 {
        n.push(-cos / (x * x) - sin / x);
    }
    for l in 1..l_max {
        let next = (2 * l + 1) as f64 / x * n[l] - n[l - 1];
        n.push(next);
    }
    n
}

/// Spherical Neumann function `n_l(x)`, upward recurrence.
pub fn sph_neumann(l: usize, x: f64) -> Result<f64> {
    Ok(sph_neumann_orders(l, x)?[l])
}

/// `n_0(x) ..= n_{l_max}(x)`.
pub fn sph_neumann_orders(l_max: usize, x: f64) -> Result<Vec<f64>> {
    positive("x", x)?;
    let n = neumann_upward(l_max, x);
    match n.iter().position(|v| !v.is_finite()) {
        Some(l) => Err(Error::Overflow {
            what: "sph_neumann",
            l,
            arg: x,
        }),
        None => Ok(n),
    }
}

/// Sine-form representation of the free radial solutions,
///
/// ```text
/// j_l(x) =  M_l sin(theta_l) / x,   n_l(x) = -M_l cos(theta_l) / x,
/// theta_l = x - l pi/2 + Delta_l(i/x),
/// ```
///
/// with `M_l`, `Delta_l` the modulus and argument of `y_l(i/x)`. The phase is
/// stored as its sine and cosine.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SineForm {
    pub modulus: f64,
    pub sin_phase: f64,
    pub cos_phase: f64,
}

impl SineForm {
    /// `sin(theta_l + shift)`.
    pub fn sin_shifted(&self, shift: f64) -> f64 {
        let (s, c) = shift.sin_cos();
        self.sin_phase * c + self.cos_phase * s
    }

    /// `j_l(x)` recovered from the sine form.
    pub fn bessel_j(&self, x: f64) -> f64 {
        self.modulus * self.sin_phase / x
    }

    /// `n_l(x)` recovered from the sine form.
    pub fn neumann(&self, x: f64) -> f64 {
        -self.modulus * self.cos_phase / x
    }
}

/// Sine forms for orders `0 ..= l_max` at `x`.
///
/// Where `M_l <= SINE_FORM_CONDITION_LIMIT` the phase is assembled directly
/// from `x`, the quarter turns `-l pi/2` and `arg y_l(i/x)`. Deeper in the
/// evanescent region it is taken from the recurrence values of `j_l`, `n_l`,
/// which the sine form equals identically.
pub fn sine_forms(l_max: usize, x: f64) -> Result<Vec<SineForm>> {
    positive("x", x)?;
    check_order(l_max)?;
    let (sin_x, cos_x) = x.sin_cos();
    let z = Complex64::new(0.0, 1.0 / x);
    let mut out = Vec::with_capacity(l_max + 1);
    let mut recurrences: Option<(Vec<f64>, Vec<f64>)> = None;
    for l in 0..=l_max {
        let y = bessel_poly(l, z)?;
        let modulus = y.norm();
        if modulus <= SINE_FORM_CONDITION_LIMIT {
            // e^{i(Delta - l pi/2)}, then the angle sum with x.
            let beta = y / modulus * i_pow(l).conj();
            out.push(SineForm {
                modulus,
                sin_phase: sin_x * beta.re + cos_x * beta.im,
                cos_phase: cos_x * beta.re - sin_x * beta.im,
            });
        } else {
            if recurrences.is_none() {
                recurrences = Some((sph_bessel_j_orders(l_max, x)?, neumann_upward(l_max, x)));
            }
            let (j, n) = recurrences.as_ref().expect("set above");
            let modulus = x * j[l].hypot(n[l]);
            out.push(SineForm {
                modulus,
                sin_phase: x * j[l] / modulus,
                cos_phase: -x * n[l] / modulus,
            });
        }
    }
    Ok(out)
}

/// Sine form of a single order.
pub fn sine_form(l: usize, x: f64) -> Result<SineForm> {
    Ok(sine_forms(l, x)?[l])
}

fn check_cosine(u: f64) -> Result<()> {
    if u.abs() <= 1.0 {
        Ok(())
    } else {
        Err(Error::Domain {
            what: "Legendre argument",
            value: u,
        })
    }
}

/// Legendre polynomial `P_l(u)` by Bonnet's recurrence.
pub fn legendre(l: usize, u: f64) -> Result<f64> {
    Ok(legendre_orders(l, u)?[l])
}

/// `P_0(u) ..= P_{l_max}(u)`.
pub fn legendre_orders(l_max: usize, u: f64) -> Result<Vec<f64>> {
    check_cosine(u)?;
    let mut p = Vec::with_capacity(l_max + 1);
    p.push(1.0);
    if l_max >= 1 {
        p.push(u);
    }
    for l in 1..l_max {
        let next = ((2 * l + 1) as f64 * u * p[l] - l as f64 * p[l - 1]) / (l + 1) as f64;
        p.push(next);
    }
    Ok(p)
}

/// `P_l(u)` and `dP_l/du` for `l = 0 ..= l_max`, the derivative from
/// `P'_{l+1} = P'_{l-1} + (2l+1) P_l`, which stays regular at `u = +-1`.
pub fn legendre_with_derivative(l_max: usize, u: f64) -> Result<(Vec<f64>, Vec<f64>)> {
    let p = legendre_orders(l_max, u)?;
    let mut dp = Vec::with_capacity(l_max + 1);
    dp.push(0.0);
    if l_max >= 1 {
        dp.push(1.0);
    }
    for l in 1..l_max {
        let next = dp[l - 1] + (2 * l + 1) as f64 * p[l];
        dp.push(next);
    }
    Ok((p, dp))
}
