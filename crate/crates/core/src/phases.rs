//! Phase shifts of short-range model potentials.
//!
//! Units follow the radial equation
//!
//! ```text
//! u'' = [l(l+1)/r^2 + V(r) - k^2] u,    u = r R_l,
//! ```
//!
//! i.e. `V` already carries the factor `2m/hbar^2`. Hard spheres and square
//! wells are solved in closed form; any finite potential can go through the
//! Numerov integrator.

use std::f64::consts::{FRAC_PI_2, PI};
use std::io::Read;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{positive, Error, Result};
use crate::specfun::{i_pow, neumann_upward, sph_bessel_j_orders, MAX_ORDER};

/// A spherically symmetric potential that vanishes beyond a cutoff.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum PotentialSpec {
    /// Impenetrable sphere of the given radius.
    HardSphere { radius: f64 },
    /// `V = -depth` inside `radius`, zero outside. Positive depth attracts.
    SquareWell { radius: f64, depth: f64 },
    /// Linear interpolation through `(r, V)` samples, `V = 0` from `cutoff` on.
    Tabulated {
        samples: Vec<(f64, f64)>,
        cutoff: f64,
    },
}

impl PotentialSpec {
    pub fn validate(&self) -> Result<()> {
        let invalid = |msg: String| Err(Error::InvalidPotential(msg));
        match self {
            PotentialSpec::HardSphere { radius } => {
                positive("radius", *radius)?;
            }
            PotentialSpec::SquareWell { radius, depth } => {
                positive("radius", *radius)?;
                if !depth.is_finite() {
                    return invalid(format!("square-well depth {depth} is not finite"));
                }
            }
            PotentialSpec::Tabulated { samples, cutoff } => {
                positive("cutoff", *cutoff)?;
                if samples.is_empty() {
                    return invalid("tabulated potential has no samples".into());
                }
                if samples
                    .iter()
                    .any(|&(r, v)| !(r.is_finite() && v.is_finite() && r >= 0.0))
                {
                    return invalid("tabulated samples must be finite with r >= 0".into());
                }
                if samples.windows(2).any(|w| w[1].0 <= w[0].0) {
                    return invalid("tabulated radii must be strictly increasing".into());
                }
                let last = samples[samples.len() - 1].0;
                if last > *cutoff {
                    return invalid(format!(
                        "sample at r = {last} lies beyond the cutoff {cutoff}"
                    ));
                }
            }
        }
        Ok(())
    }

    /// Radius `r_c` beyond which `V` vanishes.
    pub fn cutoff(&self) -> f64 {
        match self {
            PotentialSpec::HardSphere { radius } | PotentialSpec::SquareWell { radius, .. } => {
                *radius
            }
            PotentialSpec::Tabulated { cutoff, .. } => *cutoff,
        }
    }

    /// The length `a` that bounds the Numerov step from above.
    pub fn length_scale(&self) -> f64 {
        self.cutoff()
    }

    /// `V(r)`. Infinite inside a hard sphere.
    pub fn value(&self, r: f64) -> f64 {
        if r >= self.cutoff() {
            return 0.0;
        }
        match self {
            PotentialSpec::HardSphere { .. } => f64::INFINITY,
            _ => self.interior_value(r),
        }
    }

    /// Smooth continuation of the interior branch onto `[0, r_c]`, so that
    /// `interior_value(r_c)` is the limit from inside.
    fn interior_value(&self, r: f64) -> f64 {
        match self {
            PotentialSpec::HardSphere { .. } => f64::INFINITY,
            PotentialSpec::SquareWell { depth, .. } => -depth,
            PotentialSpec::Tabulated { samples, .. } => {
                let i = samples.partition_point(|&(ri, _)| ri <= r);
                if i == 0 {
                    samples[0].1
                } else if i == samples.len() {
                    samples[i - 1].1
                } else {
                    let (r0, v0) = samples[i - 1];
                    let (r1, v1) = samples[i];
                    v0 + (v1 - v0) * (r - r0) / (r1 - r0)
                }
            }
        }
    }

    /// Read a two-column `(r, V)` CSV with a header row.
    pub fn tabulated_from_csv<R: Read>(reader: R, cutoff: f64) -> Result<Self> {
        let mut csv = csv::ReaderBuilder::new()
            .has_headers(true)
            .trim(csv::Trim::All)
            .from_reader(reader);
        let mut samples = Vec::new();
        for (line, record) in csv.records().enumerate() {
            let record = record.map_err(|e| Error::Input(e.to_string()))?;
            if record.len() != 2 {
                return Err(Error::Input(format!(
                    "data row {} has {} columns, expected 2",
                    line + 1,
                    record.len()
                )));
            }
            let parse = |i: usize| {
                record[i].parse::<f64>().map_err(|e| {
                    Error::Input(format!("data row {}, column {}: {e}", line + 1, i + 1))
                })
            };
            samples.push((parse(0)?, parse(1)?));
        }
        let spec = PotentialSpec::Tabulated { samples, cutoff };
        spec.validate()?;
        Ok(spec)
    }
}

/// Real phase shifts `delta_0 ..= delta_{l_max}` at wavenumber `k`.
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseShiftSet {
    k: f64,
    delta: Vec<f64>,
}

impl PhaseShiftSet {
    /// Phase shifts are reduced modulo pi into `(-pi/2, pi/2]`.
    pub fn new(k: f64, delta: Vec<f64>) -> Result<Self> {
        positive("k", k)?;
        if delta.is_empty() {
            return Err(Error::Domain {
                what: "number of phase shifts",
                value: 0.0,
            });
        }
        if delta.len() > MAX_ORDER + 1 {
            return Err(Error::OrderTooLarge {
                l: delta.len() - 1,
                max: MAX_ORDER,
            });
        }
        if let Some(bad) = delta.iter().find(|d| !d.is_finite()) {
            return Err(Error::Domain {
                what: "phase shift",
                value: *bad,
            });
        }
        Ok(PhaseShiftSet {
            k,
            delta: delta.into_iter().map(reduce_branch).collect(),
        })
    }

    pub fn k(&self) -> f64 {
        self.k
    }

    pub fn l_max(&self) -> usize {
        self.delta.len() - 1
    }

    pub fn deltas(&self) -> &[f64] {
        &self.delta
    }

    pub fn delta(&self, l: usize) -> f64 {
        self.delta[l]
    }
}

fn reduce_branch(delta: f64) -> f64 {
    let mut d = delta - PI * (delta / PI).round();
    if d <= -FRAC_PI_2 {
        d += PI;
    } else if d > FRAC_PI_2 {
        d -= PI;
    }
    d
}

/// `delta = atan(numerator / denominator)` on the principal branch.
fn phase_from_tangent(numerator: f64, denominator: f64) -> f64 {
    if denominator == 0.0 {
        return FRAC_PI_2;
    }
    if denominator.is_infinite() {
        return 0.0;
    }
    reduce_branch((numerator / denominator).atan())
}

/// `ceil(k r_c) + 20`, capped at the Bessel-polynomial order limit.
pub fn default_l_max(k: f64, cutoff: f64) -> usize {
    ((k * cutoff).ceil() as usize + 20).min(MAX_ORDER)
}

fn check_l_max(l_max: usize) -> Result<()> {
    if l_max > MAX_ORDER {
        Err(Error::OrderTooLarge {
            l: l_max,
            max: MAX_ORDER,
        })
    } else {
        Ok(())
    }
}

/// `tan delta_l = j_l(ka) / n_l(ka)`.
pub fn hard_sphere_phases(k: f64, a: f64, l_max: usize) -> Result<PhaseShiftSet> {
    positive("k", k)?;
    positive("radius", a)?;
    check_l_max(l_max)?;
    let x = k * a;
    let j = sph_bessel_j_orders(l_max, x)?;
    let n = neumann_upward(l_max, x);
    let delta = (0..=l_max)
        .map(|l| phase_from_tangent(j[l], n[l]))
        .collect();
    PhaseShiftSet::new(k, delta)
}

/// Square well of depth `depth` (attractive when positive) and radius `a`,
/// matched through the logarithmic derivative at `r = a`.
pub fn square_well_phases(k: f64, depth: f64, a: f64, l_max: usize) -> Result<PhaseShiftSet> {
    positive("k", k)?;
    positive("radius", a)?;
    check_l_max(l_max)?;
    let inside = k * k + depth;
    if inside <= 0.0 {
        return Err(Error::Domain {
            what: "k^2 + V0 (interior kinetic term)",
            value: inside,
        });
    }
    let kp = inside.sqrt();
    let (x, y) = (k * a, kp * a);
    let jx = sph_bessel_j_orders(l_max + 1, x)?;
    let nx = neumann_upward(l_max + 1, x);
    let jy = sph_bessel_j_orders(l_max + 1, y)?;
    let delta = (0..=l_max)
        .map(|l| {
            let lf = l as f64;
            let djx = lf / x * jx[l] - jx[l + 1];
            let dnx = lf / x * nx[l] - nx[l + 1];
            let djy = lf / y * jy[l] - jy[l + 1];
            let num = k * djx * jy[l] - kp * djy * jx[l];
            let den = k * dnx * jy[l] - kp * djy * nx[l];
            phase_from_tangent(num, den)
        })
        .collect();
    PhaseShiftSet::new(k, delta)
}

/// `|k u / u'|` below which the match radius counts as a node of `u_l`.
/// Discretisation error leaves a residual of order `h^4` at a true node.
const NODE_TOLERANCE: f64 = 1e-7;

// Backward derivative at the last of four Numerov points,
// h u'_n = sum_j A_j u_{n-j} + h^2 sum_j B_j u''_{n-j},
// exact for polynomials through degree 7.
const DERIV_U: [f64; 4] = [149.0 / 42.0, -36.0 / 7.0, 9.0 / 14.0, 20.0 / 21.0];
const DERIV_UPP: [f64; 4] = [2.0 / 35.0, -66.0 / 35.0, -39.0 / 35.0, -2.0 / 35.0];

/// Last four grid values `(r, u, g)` of a Numerov sweep, newest first.
#[derive(Debug, Clone, Copy)]
struct Window {
    u: [f64; 4],
    g: [f64; 4],
}

impl Window {
    fn push(&mut self, u: f64, g: f64) {
        self.u.rotate_right(1);
        self.g.rotate_right(1);
        self.u[0] = u;
        self.g[0] = g;
        let size = self.u[0].abs().max(self.u[1].abs());
        if size > 1e200 {
            for v in &mut self.u {
                *v /= size;
            }
        }
    }

    fn derivative(&self, h: f64) -> f64 {
        let mut acc = 0.0;
        for j in 0..4 {
            acc += DERIV_U[j] * self.u[j] + h * h * DERIV_UPP[j] * self.g[j] * self.u[j];
        }
        acc / h
    }
}

/// Numerov sweep over `steps` intervals of width `h` starting at `r0`, given
/// the first two values. Returns the trailing window.
fn numerov_sweep<G: Fn(f64) -> f64>(
    g: &G,
    r0: f64,
    h: f64,
    steps: usize,
    u0: f64,
    u1: f64,
) -> Result<Window> {
    let c = h * h / 12.0;
    let mut window = Window {
        u: [0.0; 4],
        g: [0.0; 4],
    };
    window.push(u0, g(r0));
    window.push(u1, g(r0 + h));
    for n in 1..steps {
        let r_next = r0 + (n + 1) as f64 * h;
        let g_next = g(r_next);
        let denom = 1.0 - c * g_next;
        if denom <= 0.25 {
            return Err(Error::Domain {
                what: "Numerov step (too coarse for the local potential)",
                value: h,
            });
        }
        let (u, u_prev) = (window.u[0], window.u[1]);
        let (gn, g_prev) = (window.g[0], window.g[1]);
        let next = (2.0 * u * (1.0 + 5.0 * c * gn) - u_prev * (1.0 - c * g_prev)) / denom;
        window.push(next, g_next);
    }
    Ok(window)
}

/// Regular solution `u_l` and `u_l'` at `r_match`.
fn radial_solution_at(
    potential: &PotentialSpec,
    k: f64,
    l: usize,
    r_match: f64,
    step: f64,
) -> Result<(f64, f64)> {
    let centrifugal = (l * (l + 1)) as f64;
    let k2 = k * k;
    let cutoff = potential.cutoff();

    let inner = |r: f64| {
        let cf = if r > 0.0 { centrifugal / (r * r) } else { 0.0 };
        cf + potential.interior_value(r) - k2
    };
    let steps = ((cutoff / step).ceil() as usize).max(8);
    let h = cutoff / steps as f64;
    // Start where h^2 l(l+1)/(12 r^2) is small, from the series
    // u = r^{l+1} (1 + q r^2 / (2(2l+3))).
    let first = ((centrifugal / 1.2).sqrt().ceil() as usize).max(1) - 1;
    if first + 4 > steps {
        return Err(Error::Domain {
            what: "Numerov step (too few points for this l inside the potential)",
            value: step,
        });
    }
    let q = potential.interior_value(0.0) - k2;
    let series = |r: f64| {
        if r == 0.0 {
            0.0
        } else {
            (r / ((first + 1) as f64 * h)).powi(l as i32 + 1)
                * (1.0 + q * r * r / (2.0 * (2 * l + 3) as f64))
        }
    };
    let r0 = first as f64 * h;
    let window = numerov_sweep(&inner, r0, h, steps - first, series(r0), series(r0 + h))?;
    let mut u = window.u[0];
    let mut du = window.derivative(h);

    let tail = r_match - cutoff;
    if tail > 0.0 {
        let outer = |r: f64| centrifugal / (r * r) - k2;
        let steps = ((tail / step).ceil() as usize).max(4);
        let h = tail / steps as f64;
        // One classical Runge–Kutta step of (u, u') supplies the second value.
        let f = |r: f64, u: f64, v: f64| (v, outer(r) * u);
        let (k1u, k1v) = f(cutoff, u, du);
        let (k2u, k2v) = f(cutoff + h / 2.0, u + h / 2.0 * k1u, du + h / 2.0 * k1v);
        let (k3u, k3v) = f(cutoff + h / 2.0, u + h / 2.0 * k2u, du + h / 2.0 * k2v);
        let (k4u, _) = f(cutoff + h, u + h * k3u, du + h * k3v);
        let u1 = u + h / 6.0 * (k1u + 2.0 * k2u + 2.0 * k3u + k4u);
        let window = numerov_sweep(&outer, cutoff, h, steps, u, u1)?;
        u = window.u[0];
        du = window.derivative(h);
    }
    Ok((u, du))
}

/// Phase shifts from outward Numerov integration of `u_l = r R_l`, matched
/// to Riccati–Bessel functions through the logarithmic derivative at
/// `r_match`.
///
/// The interior grid is aligned with the cutoff so that a discontinuity of
/// `V` at `r_c` falls on a grid point; the solution is handed across it as
/// `(u, u')`.
pub fn numerov_phases(
    potential: &PotentialSpec,
    k: f64,
    l_max: usize,
    r_match: f64,
    step: f64,
) -> Result<PhaseShiftSet> {
    potential.validate()?;
    if let PotentialSpec::HardSphere { .. } = potential {
        return Err(Error::InvalidPotential(
            "hard spheres are solved analytically, not by Numerov".into(),
        ));
    }
    positive("k", k)?;
    positive("step", step)?;
    check_l_max(l_max)?;
    let cutoff = potential.cutoff();
    if r_match < cutoff {
        return Err(Error::MatchInsidePotential { r_match, cutoff });
    }
    let max_step = (1.0 / (10.0 * k)).min(potential.length_scale() / 100.0);
    if step > max_step {
        return Err(Error::Domain {
            what: "Numerov step (must not exceed min(1/(10k), a/100))",
            value: step,
        });
    }

    let x = k * r_match;
    let j = sph_bessel_j_orders(l_max + 1, x)?;
    let n = neumann_upward(l_max + 1, x);
    let mut delta = Vec::with_capacity(l_max + 1);
    for l in 0..=l_max {
        let (u, du) = radial_solution_at(potential, k, l, r_match, step)?;
        if u == 0.0 || u.abs() * k <= NODE_TOLERANCE * du.abs() {
            return Err(Error::NodeAtMatchPoint { r_match });
        }
        let lf = (l + 1) as f64;
        let (rj, rn) = (x * j[l], x * n[l]);
        let drj = lf * j[l] - x * j[l + 1];
        let drn = lf * n[l] - x * n[l + 1];
        delta.push(phase_from_tangent(
            k * drj * u - du * rj,
            k * drn * u - du * rn,
        ));
    }
    PhaseShiftSet::new(k, delta)
}

/// Coefficients of `R_l = C_l h_l^(2)(kr) + D_l h_l^(1)(kr)` after matching.
#[derive(Debug, Clone, PartialEq)]
pub struct RadialCoefficients {
    pub c: Vec<Complex64>,
    pub d: Vec<Complex64>,
    pub a: Vec<Complex64>,
}

/// `A_l = (2l+1) e^{il pi} e^{i(-l pi/2 + delta_l)}`, `C_l = A_l e^{-i delta_l}/2`,
/// `D_l = A_l e^{i delta_l}/2`.
pub fn radial_coefficients(phases: &PhaseShiftSet) -> RadialCoefficients {
    let mut out = RadialCoefficients {
        c: Vec::with_capacity(phases.l_max() + 1),
        d: Vec::with_capacity(phases.l_max() + 1),
        a: Vec::with_capacity(phases.l_max() + 1),
    };
    for (l, &delta) in phases.deltas().iter().enumerate() {
        // e^{il pi} e^{-il pi/2} = i^l exactly.
        let a = (2 * l + 1) as f64 * i_pow(l) * Complex64::from_polar(1.0, delta);
        out.c.push(a * Complex64::from_polar(0.5, -delta));
        out.d.push(a * Complex64::from_polar(0.5, delta));
        out.a.push(a);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::specfun::{sph_hankel, HankelKind};
    use approx::assert_relative_eq;

    fn same_mod_pi(a: f64, b: f64, tol: f64) -> bool {
        let d = (a - b) / PI;
        (d - d.round()).abs() * PI <= tol
    }

    #[test]
    fn branch_reduction() {
        assert_relative_eq!(reduce_branch(PI / 2.0), PI / 2.0);
        assert_relative_eq!(reduce_branch(-PI / 2.0), PI / 2.0);
        assert_relative_eq!(reduce_branch(3.0), 3.0 - PI, epsilon = 1e-15);
        assert_relative_eq!(reduce_branch(-1.0), -1.0);
        let set = PhaseShiftSet::new(1.0, vec![4.0, -2.0]).unwrap();
        assert!(set
            .deltas()
            .iter()
            .all(|d| *d > -FRAC_PI_2 && *d <= FRAC_PI_2));
    }

    #[test]
    fn phase_set_rejects_bad_input() {
        assert!(PhaseShiftSet::new(0.0, vec![0.1]).is_err());
        assert!(PhaseShiftSet::new(1.0, vec![]).is_err());
        assert!(PhaseShiftSet::new(1.0, vec![f64::NAN]).is_err());
        assert!(PhaseShiftSet::new(1.0, vec![0.0; 62]).is_err());
    }

    #[test]
    fn hard_sphere_s_wave_is_minus_ka() {
        for (k, a) in [(1.0, 1.0), (0.3, 2.0), (2.5, 0.4)] {
            let set = hard_sphere_phases(k, a, 0).unwrap();
            assert!(same_mod_pi(set.delta(0), -k * a, 1e-13));
        }
    }

    #[test]
    fn hard_sphere_p_wave_low_energy() {
        // j_1/n_1 ~ -x^3/3 for x -> 0.
        let x = 1e-3;
        let set = hard_sphere_phases(x, 1.0, 1).unwrap();
        let ratio = set.delta(1) / x.powi(3);
        assert!((ratio + 1.0 / 3.0).abs() < 0.01 / 3.0, "ratio {ratio}");
    }

    #[test]
    fn hard_sphere_centrifugal_suppression() {
        for ka in [0.5, 1.0, 3.0, 7.0] {
            let l_min = (3.0 * ka) as usize + 20;
            let set = hard_sphere_phases(ka, 1.0, l_min + 5).unwrap();
            for l in l_min..=set.l_max() {
                assert!(set.delta(l).abs() < 1e-10, "ka={ka} l={l}");
            }
        }
    }

    #[test]
    fn free_square_well_has_no_phase_shift() {
        let set = square_well_phases(1.3, 0.0, 2.0, 8).unwrap();
        assert!(set.deltas().iter().all(|&d| d == 0.0));
    }

    #[test]
    fn square_well_s_wave_closed_form() {
        for (k, v0, a) in [(1.0, 4.0, 1.0), (0.4, 10.0, 1.5), (2.0, -1.5, 0.7)] {
            let kp = f64::sqrt(k * k + v0);
            let t = ((k * a).tan(), (kp * a).tan());
            let tan_delta = (k * t.1 - kp * t.0) / (kp + k * t.1 * t.0);
            let set = square_well_phases(k, v0, a, 0).unwrap();
            assert_relative_eq!(set.delta(0).tan(), tan_delta, max_relative = 1e-10);
        }
    }

    #[test]
    fn square_well_forbidden_interior() {
        assert!(matches!(
            square_well_phases(1.0, -2.0, 1.0, 3),
            Err(Error::Domain { .. })
        ));
    }

    #[test]
    fn numerov_free_tabulated_potential() {
        let zero = PotentialSpec::Tabulated {
            samples: vec![(0.0, 0.0), (1.0, 0.0), (2.0, 0.0)],
            cutoff: 2.0,
        };
        for k in [0.5, 1.0, 2.0] {
            let set = numerov_phases(&zero, k, 6, 3.0, 0.002).unwrap();
            for (l, d) in set.deltas().iter().enumerate() {
                assert!(d.abs() < 1e-9, "k={k} l={l} delta={d}");
            }
        }
    }

    #[test]
    fn numerov_matches_square_well() {
        let well = PotentialSpec::SquareWell {
            radius: 1.0,
            depth: 4.0,
        };
        let numerov = numerov_phases(&well, 1.0, 4, 1.0, 1e-3).unwrap();
        let exact = square_well_phases(1.0, 4.0, 1.0, 4).unwrap();
        for l in 0..=4 {
            assert!(
                same_mod_pi(numerov.delta(l), exact.delta(l), 1e-6),
                "l={l}: {} vs {}",
                numerov.delta(l),
                exact.delta(l)
            );
        }
    }

    #[test]
    fn numerov_repulsive_step_matches_closed_form() {
        // V0 < 0 with k^2 + V0 > 0: still an oscillatory interior.
        let well = PotentialSpec::SquareWell {
            radius: 1.5,
            depth: -0.6,
        };
        let numerov = numerov_phases(&well, 1.0, 4, 2.0, 1e-3).unwrap();
        let exact = square_well_phases(1.0, -0.6, 1.5, 4).unwrap();
        for l in 0..=4 {
            assert!(same_mod_pi(numerov.delta(l), exact.delta(l), 1e-6), "l={l}");
        }
    }

    #[test]
    fn numerov_tall_wall_matches_finite_barrier() {
        // Inside a barrier of height V the s-wave is sinh(kappa r), so
        // k cot(ka + delta) = kappa coth(kappa a).
        let (k, a, v) = (1.0, 1.0, 1e6);
        let wall = PotentialSpec::SquareWell {
            radius: a,
            depth: -v,
        };
        let kappa = f64::sqrt(v - k * k);
        let exact = (k / (kappa / (kappa * a).tanh())).atan() - k * a;
        let set = numerov_phases(&wall, k, 0, a, 1e-4).unwrap();
        assert!(
            same_mod_pi(set.delta(0), exact, 1e-8),
            "{} vs {exact}",
            set.delta(0)
        );
        // The finite wall shifts the hard-sphere value by about k/kappa.
        assert!(same_mod_pi(set.delta(0), -k * a, 1.01 * k / kappa));
    }

    #[test]
    fn numerov_is_fourth_order() {
        let well = PotentialSpec::SquareWell {
            radius: 1.0,
            depth: 4.0,
        };
        for l in 0..=4 {
            let d: Vec<f64> = [0.01, 0.005, 0.0025]
                .iter()
                .map(|&h| numerov_phases(&well, 1.0, l, 1.5, h).unwrap().delta(l))
                .collect();
            let order = ((d[0] - d[1]) / (d[1] - d[2])).abs().log2();
            assert!(order >= 3.5, "l={l} order={order}");
        }
    }

    #[test]
    fn numerov_independent_of_match_radius() {
        let table = PotentialSpec::Tabulated {
            samples: (0..=20)
                .map(|i| {
                    let r = i as f64 * 0.1;
                    (r, -3.0 * (1.0 - r / 2.0))
                })
                .collect(),
            cutoff: 2.0,
        };
        let a = numerov_phases(&table, 1.2, 5, 2.0, 5e-4).unwrap();
        let b = numerov_phases(&table, 1.2, 5, 3.7, 5e-4).unwrap();
        for l in 0..=5 {
            assert!(same_mod_pi(a.delta(l), b.delta(l), 1e-7), "l={l}");
        }
    }

    #[test]
    fn numerov_guards() {
        let well = PotentialSpec::SquareWell {
            radius: 1.0,
            depth: 4.0,
        };
        assert!(matches!(
            numerov_phases(&well, 1.0, 2, 0.5, 1e-3),
            Err(Error::MatchInsidePotential { .. })
        ));
        assert!(matches!(
            numerov_phases(&well, 1.0, 2, 1.0, 0.05),
            Err(Error::Domain { .. })
        ));
        let sphere = PotentialSpec::HardSphere { radius: 1.0 };
        assert!(matches!(
            numerov_phases(&sphere, 1.0, 2, 1.0, 1e-3),
            Err(Error::InvalidPotential(_))
        ));
    }

    #[test]
    fn node_at_match_point_is_reported() {
        // Free s-wave: u = sin(kr) vanishes at kr = pi.
        let zero = PotentialSpec::Tabulated {
            samples: vec![(0.0, 0.0), (1.0, 0.0)],
            cutoff: 1.0,
        };
        assert_eq!(
            numerov_phases(&zero, 1.0, 0, PI, 1e-3),
            Err(Error::NodeAtMatchPoint { r_match: PI })
        );
    }

    #[test]
    fn radial_coefficients_examples() {
        let free = PhaseShiftSet::new(1.0, vec![0.0; 6]).unwrap();
        let rc = radial_coefficients(&free);
        assert_eq!(rc.a[0], Complex64::new(1.0, 0.0));
        for l in 0..6 {
            assert_eq!(rc.a[l], (2 * l + 1) as f64 * i_pow(l));
        }
        let quarter = PhaseShiftSet::new(1.0, vec![PI / 4.0]).unwrap();
        let a0 = radial_coefficients(&quarter).a[0];
        assert!((a0 - Complex64::from_polar(1.0, PI / 4.0)).norm() < 1e-15);
    }

    #[test]
    fn radial_coefficients_invariants() {
        let set = PhaseShiftSet::new(0.7, vec![1.2, -0.4, 0.9, 1.5, -1.5]).unwrap();
        let rc = radial_coefficients(&set);
        for l in 0..=set.l_max() {
            let ratio = rc.d[l] / rc.c[l];
            assert!((ratio.norm() - 1.0).abs() < 1e-15);
            assert!((ratio - Complex64::from_polar(1.0, 2.0 * set.delta(l))).norm() < 1e-14);
            // 2 sqrt(C D) equals A up to the sign of the square-root branch.
            let two_root = 2.0 * (rc.c[l] * rc.d[l]).sqrt();
            let diff = (two_root - rc.a[l]).norm().min((two_root + rc.a[l]).norm());
            assert!(diff < 1e-13 * rc.a[l].norm());
        }
    }

    #[test]
    fn reconstructed_radial_function_reproduces_phase() {
        let cases = [
            hard_sphere_phases(1.0, 1.0, 6).unwrap(),
            square_well_phases(1.0, 4.0, 1.0, 6).unwrap(),
        ];
        for set in cases {
            let rc = radial_coefficients(&set);
            let k = set.k();
            let (r1, r2) = (1.5, 2.7);
            for l in 0..=set.l_max() {
                let radial = |r: f64| {
                    rc.c[l] * sph_hankel(l, k * r, HankelKind::Second).unwrap()
                        + rc.d[l] * sph_hankel(l, k * r, HankelKind::First).unwrap()
                };
                let rho = radial(r1) / radial(r2);
                let j = |r: f64| crate::specfun::sph_bessel_j(l, k * r).unwrap();
                let n = |r: f64| crate::specfun::sph_neumann(l, k * r).unwrap();
                let t = (j(r1) - rho * j(r2)) / (n(r1) - rho * n(r2));
                assert!(t.im.abs() < 1e-8 * t.norm().max(1e-300) + 1e-12);
                assert!(same_mod_pi(t.re.atan(), set.delta(l), 1e-8), "l={l}");
            }
        }
    }

    #[test]
    fn csv_ingestion() {
        let text = "r,V\n0.0,-2.0\n0.5,-1.0\n1.0,0.0\n";
        let spec = PotentialSpec::tabulated_from_csv(text.as_bytes(), 1.0).unwrap();
        assert_relative_eq!(spec.value(0.25), -1.5);
        assert_eq!(spec.value(1.0), 0.0);
        assert_eq!(spec.value(3.0), 0.0);
        assert!(PotentialSpec::tabulated_from_csv("r,V\n0.0\n".as_bytes(), 1.0).is_err());
        assert!(PotentialSpec::tabulated_from_csv("r,V\n0.5,1\n0.2,1\n".as_bytes(), 1.0).is_err());
        assert!(PotentialSpec::tabulated_from_csv("r,V\n0.5,x\n".as_bytes(), 1.0).is_err());
    }

    #[test]
    fn default_truncation() {
        assert_eq!(default_l_max(1.0, 1.0), 21);
        assert_eq!(default_l_max(0.5, 3.1), 22);
        assert_eq!(default_l_max(100.0, 1.0), MAX_ORDER);
    }
}
