//! Closed-form stationary machinery for centered ellipses, independent of
//! the generic star-shaped solver.
//!
//! With the parametrization y = (a cos u, b sin u) and s = b/a, the
//! stationary directions theta_xi = T_j(theta_eta) solve
//!   sqrt(q) (eta_1 xi_2 - s^2 eta_2 xi_1) + (1 - s^2) xi_1 xi_2 = 0,
//! which under s^2 > 1/(1 + sqrt(q)) has exactly one solution in the
//! quadrant of theta_eta (j = 1) and one in the opposite quadrant (j = 2).
//! The boundary points returned by [`ellipse_stationary_set`] use the polar
//! convention shared with the generic solver, so every invariant of
//! [`super::StationaryPoint`] applies verbatim and the two routes can be
//! cross-checked angle by angle.

use super::{make_point, StationaryPoint};
use crate::angles::{wrap_2pi, wrap_near};
use crate::error::{Error, Result};
use crate::geometry::RadiusFunction;
use std::f64::consts::{FRAC_PI_2, PI};

fn validate(a: f64, b: f64, q: f64, j: u8) -> Result<f64> {
    if !(1..=2).contains(&j) {
        return Err(Error::InvalidArgument(format!("branch index j must be 1 or 2, got {j}")));
    }
    if !(q > 1.0) || !q.is_finite() {
        return Err(Error::UnsupportedParameter(format!("q must exceed 1, got {q}")));
    }
    if !(a > 0.0 && b > 0.0) {
        return Err(Error::UnsupportedParameter(format!(
            "semi-axes must be positive, got a={a}, b={b}"
        )));
    }
    let s2 = (b / a) * (b / a);
    if s2 <= 1.0 / (1.0 + q.sqrt()) {
        return Err(Error::UnsupportedParameter(format!(
            "ellipse hypothesis s^2 > 1/(1+sqrt(q)) fails: s^2 = {s2}"
        )));
    }
    Ok(s2)
}

/// Proximity below which theta_eta counts as an axis direction.
const AXIS_TOL: f64 = 1e-12;

fn nearest_axis(theta: f64) -> Option<f64> {
    let t = wrap_2pi(theta);
    for m in 0..=4 {
        let axis = m as f64 * FRAC_PI_2;
        if (t - axis).abs() < AXIS_TOL {
            return Some(wrap_2pi(axis));
        }
    }
    None
}

/// The defining function whose zeros in theta_xi are the stationary
/// directions for a fixed theta_eta.
fn stationary_relation(q: f64, s2: f64, eta_theta: f64, theta_xi: f64) -> f64 {
    let (e1, e2) = (eta_theta.cos(), eta_theta.sin());
    let (x1, x2) = (theta_xi.cos(), theta_xi.sin());
    q.sqrt() * (e1 * x2 - s2 * e2 * x1) + (1.0 - s2) * x1 * x2
}

/// T_j(theta_eta): the direction angle of the j-th stationary pair,
/// normalized to [0, 2*pi).
pub fn ellipse_t(a: f64, b: f64, q: f64, eta_theta: f64, j: u8) -> Result<f64> {
    let s2 = validate(a, b, q, j)?;
    let eta = wrap_2pi(eta_theta);
    if let Some(axis) = nearest_axis(eta) {
        // On the axes T_1 fixes the direction and T_2 flips it.
        return Ok(wrap_2pi(axis + (j as f64 - 1.0) * PI));
    }
    // Bracket = the closed quadrant of theta_eta (j = 1) or its opposite.
    let quadrant = (eta / FRAC_PI_2).floor();
    let lo = quadrant * FRAC_PI_2 + (j as f64 - 1.0) * PI;
    let hi = lo + FRAC_PI_2;
    const SCAN: usize = 64;
    let step = (hi - lo) / SCAN as f64;
    let mut brackets = Vec::new();
    let mut prev = lo;
    let mut f_prev = stationary_relation(q, s2, eta, prev);
    for i in 1..=SCAN {
        let t = lo + step * i as f64;
        let f = stationary_relation(q, s2, eta, t);
        if f_prev != 0.0 && f != 0.0 && f_prev.signum() != f.signum() {
            brackets.push((prev, t, f_prev));
        }
        prev = t;
        f_prev = f;
    }
    if brackets.len() != 1 {
        return Err(Error::AdmissibilityViolation(format!(
            "expected one stationary direction in the quadrant, found {}",
            brackets.len()
        )));
    }
    let (mut lo, mut hi, mut f_lo) = brackets[0];
    for _ in 0..200 {
        if hi - lo <= 1e-15 * (1.0 + hi.abs()) {
            break;
        }
        let mid = 0.5 * (lo + hi);
        let fm = stationary_relation(q, s2, eta, mid);
        if fm == 0.0 {
            return Ok(wrap_2pi(mid));
        }
        if fm.signum() == f_lo.signum() {
            lo = mid;
            f_lo = fm;
        } else {
            hi = mid;
        }
    }
    Ok(wrap_2pi(0.5 * (lo + hi)))
}

/// Inverse of T_j in closed form: the defining relation is linear in
/// (cos theta_eta, sin theta_eta), so theta_eta = +/- arccos(C/R) - phase,
/// disambiguated by the quadrant rule.
pub fn ellipse_t_inverse(a: f64, b: f64, q: f64, theta_xi: f64, j: u8) -> Result<f64> {
    let s2 = validate(a, b, q, j)?;
    let xi = wrap_2pi(theta_xi);
    if let Some(axis) = nearest_axis(xi) {
        return Ok(wrap_2pi(axis - (j as f64 - 1.0) * PI));
    }
    let (x1, x2) = (xi.cos(), xi.sin());
    // A cos(eta) - B sin(eta) = C.
    let aa = q.sqrt() * x2;
    let bb = q.sqrt() * s2 * x1;
    let cc = -(1.0 - s2) * x1 * x2;
    let r = aa.hypot(bb);
    let phase = bb.atan2(aa);
    let acos = (cc / r).clamp(-1.0, 1.0).acos();
    // Target quadrant of theta_eta.
    let target = wrap_2pi(xi - (j as f64 - 1.0) * PI);
    let quadrant = (target / FRAC_PI_2).floor() as i32;
    for cand in [acos - phase, -acos - phase] {
        let c = wrap_2pi(cand);
        if (c / FRAC_PI_2).floor() as i32 == quadrant {
            return Ok(c);
        }
    }
    Err(Error::AdmissibilityViolation(format!(
        "no inverse candidate landed in quadrant {quadrant} for theta_xi = {theta_xi}"
    )))
}

/// dT_j/d theta_eta. Axis directions use the explicit limits
///   T_j'(0) = T_j'(pi) = s^2 sqrt(q) / (sqrt(q) + (-1)^{j-1} (1 - s^2)),
///   T_j'(pi/2) = T_j'(3pi/2) = sqrt(q) / (s^2 sqrt(q) - (-1)^{j-1}(1 - s^2));
/// elsewhere the differentiated relation
///   sqrt(q)(s^2 eta_1 xi_1 + eta_2 xi_2) /
///   (sqrt(q)(eta_1 xi_1 + s^2 eta_2 xi_2) + (1 - s^2)(xi_1^2 - xi_2^2)).
pub fn ellipse_t_derivative(a: f64, b: f64, q: f64, eta_theta: f64, j: u8) -> Result<f64> {
    let s2 = validate(a, b, q, j)?;
    let sq = q.sqrt();
    let sign = if j == 1 { 1.0 } else { -1.0 };
    if let Some(axis) = nearest_axis(eta_theta) {
        let on_horizontal = (axis - 0.0).abs() < AXIS_TOL || (axis - PI).abs() < AXIS_TOL;
        return Ok(if on_horizontal {
            s2 * sq / (sq + sign * (1.0 - s2))
        } else {
            sq / (s2 * sq - sign * (1.0 - s2))
        });
    }
    let theta_xi = ellipse_t(a, b, q, eta_theta, j)?;
    let (e1, e2) = (wrap_2pi(eta_theta).cos(), wrap_2pi(eta_theta).sin());
    let (x1, x2) = (theta_xi.cos(), theta_xi.sin());
    let num = sq * (s2 * e1 * x1 + e2 * x2);
    let den = sq * (e1 * x1 + s2 * e2 * x2) + (1.0 - s2) * (x1 * x1 - x2 * x2);
    Ok(num / den)
}

/// Parametric coordinate u with y(u) = (a cos u, b sin u) on the ray at polar
/// angle theta_xi: (cos u, sin u) = (s cos theta_xi, sin theta_xi) normalized.
pub fn ellipse_param_angle(a: f64, b: f64, theta_xi: f64) -> f64 {
    let s = b / a;
    wrap_2pi(theta_xi.sin().atan2(s * theta_xi.cos()))
}

/// All four stationary points of an admissible centered ellipse via the
/// closed-form route, in the same polar convention and (j, l) order as
/// [`super::stationary_set`].
pub fn ellipse_stationary_set(
    a: f64,
    b: f64,
    q: f64,
    eta_theta: f64,
) -> Result<[StationaryPoint; 4]> {
    validate(a, b, q, 1)?;
    let rf = RadiusFunction::centered_ellipse(a, b)?;
    let t1 = ellipse_t(a, b, q, eta_theta, 1)?;
    let t2 = ellipse_t(a, b, q, eta_theta, 2)?;
    // Keep theta - eta_theta continuous for the weight f = rho sin(theta -
    // theta_eta): express each polar angle near its expected offset.
    let eta = wrap_2pi(eta_theta);
    let th = |txi: f64, l: u8, center: f64| -> f64 {
        eta + wrap_near(txi + (l as f64 - 1.0) * PI - eta, center)
    };
    Ok([
        make_point(&rf, q, eta, th(t1, 1, 0.0), 1, 1)?,
        make_point(&rf, q, eta, th(t1, 2, PI), 1, 2)?,
        make_point(&rf, q, eta, th(t2, 1, PI), 2, 1)?,
        make_point(&rf, q, eta, th(t2, 2, 0.0), 2, 2)?,
    ])
}
