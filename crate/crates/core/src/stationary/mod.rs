//! Stationary points of the boundary phase psi_eta(theta, theta_xi) =
//! (sqrt(q) eta + xi) . y(theta) for star-shaped domains.
//!
//! At a stationary point xi = (-1)^{l-1} theta_hat (l = 1, 2) and theta
//! solves (ln rho)'(theta) = h(theta - theta_{eta_l}) with
//! h(t) = sqrt(q) sin t / (sqrt(q) cos t + 1). For q > 1, h increases from
//! -inf to +inf on each of the two branch intervals
//!   j = 1: (theta_q - pi,  pi - theta_q)
//!   j = 2: (pi - theta_q,  pi + theta_q),      theta_q = arccos(1/sqrt(q)),
//! so an admissible radius function ((ln rho)'' < sqrt(q)/(1+sqrt(q)))
//! meets each branch in exactly one angle T_{j,l}(eta). Root finding is
//! bracketing bisection on the pole-free form
//! F(t) = (sqrt(q) cos t + 1) (ln rho)'(theta) - sqrt(q) sin t; multiple
//! bracket detection is escalated as an admissibility diagnostic, never
//! resolved silently.

pub mod ellipse;
pub mod maps;

use crate::angles::{wrap_2pi, TWO_PI};
use crate::error::{Error, Result};
use crate::geometry::RadiusFunction;
use crate::vec2::Vec2;
use serde::Serialize;
use std::f64::consts::PI;

/// Degeneracy threshold for |det D^2 psi| relative to rho^2.
const DEGENERATE_DET_TOL: f64 = 1e-10;

/// arccos(1/sqrt(q)), the half-width parameter of the branch intervals.
pub fn theta_q(q: f64) -> Result<f64> {
    if !(q > 1.0) || !q.is_finite() {
        return Err(Error::UnsupportedParameter(format!(
            "q must satisfy q > 1, got {q}"
        )));
    }
    Ok((1.0 / q.sqrt()).acos())
}

/// h(theta) = sqrt(q) sin theta / (sqrt(q) cos theta + 1) and its derivative
/// h'(theta) = sqrt(q) (sqrt(q) + cos theta) / (sqrt(q) cos theta + 1)^2.
pub fn h_function(q: f64, theta: f64) -> Result<(f64, f64)> {
    if !(q > 1.0) {
        return Err(Error::UnsupportedParameter(format!("q must exceed 1, got {q}")));
    }
    let sq = q.sqrt();
    let denom = sq * theta.cos() + 1.0;
    if denom.abs() < 1e-12 {
        return Err(Error::BranchViolation(format!(
            "h has a pole at theta = {theta} (sqrt(q) cos theta + 1 = {denom:e})"
        )));
    }
    let h = sq * theta.sin() / denom;
    let hp = sq * (sq + theta.cos()) / (denom * denom);
    Ok((h, hp))
}

/// Branch interval for the offset t = theta - theta_{eta_l}.
pub fn branch_interval(q: f64, j: u8) -> Result<(f64, f64)> {
    let tq = theta_q(q)?;
    match j {
        1 => Ok((tq - PI, PI - tq)),
        2 => Ok((PI - tq, PI + tq)),
        _ => Err(Error::InvalidArgument(format!("branch index j must be 1 or 2, got {j}"))),
    }
}

/// One stationary point with every quantity the asymptotics needs.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct StationaryPoint {
    /// Boundary angle theta = T_{j,l}(eta).
    pub theta: f64,
    /// Direction angle of xi: theta for l = 1, theta + pi for l = 2.
    pub theta_xi: f64,
    pub j: u8,
    pub l: u8,
    /// Phase value psi = (sqrt(q) eta + xi) . y(theta).
    pub psi: f64,
    /// Amplitude Psi = -(sqrt(q) eta - xi) . y'(theta)^perp.
    pub amplitude: f64,
    /// Hessian [[psi_tt, psi_t xi], [psi_t xi, psi_xi xi]].
    pub hessian: [[f64; 2]; 2],
    pub det: f64,
    /// Hessian signature in {-2, 0, 2}.
    pub signature: i8,
    /// Weight f = rho(theta) sin(theta - theta_eta).
    pub f: f64,
    pub eta_theta: f64,
}

/// The pole-free root function on the branch offset t.
fn branch_equation(rf: &RadiusFunction, q: f64, eta_l: f64, t: f64) -> Result<f64> {
    let jet = rf.jet(eta_l + t)?;
    let sq = q.sqrt();
    Ok((sq * t.cos() + 1.0) * jet.ln1 - sq * t.sin())
}

/// Solve one branch by scan plus bisection; `offset` = theta - theta_{eta_l}.
fn solve_branch_offset(rf: &RadiusFunction, q: f64, eta_theta: f64, j: u8, l: u8) -> Result<f64> {
    validate_jl(j, l)?;
    let (lo, hi) = branch_interval(q, j)?;
    let eta_l = eta_theta + (l as f64 - 1.0) * PI;

    const SCAN: usize = 256;
    let step = (hi - lo) / SCAN as f64;
    let mut brackets: Vec<(f64, f64, f64, f64)> = Vec::new();
    let mut prev_t = lo;
    let mut prev_f = branch_equation(rf, q, eta_l, prev_t)?;
    for i in 1..=SCAN {
        let t = lo + step * i as f64;
        let f = branch_equation(rf, q, eta_l, t)?;
        if prev_f == 0.0 {
            brackets.push((prev_t, prev_t, 0.0, 0.0));
        } else if f != 0.0 && prev_f.signum() != f.signum() {
            brackets.push((prev_t, t, prev_f, f));
        }
        prev_t = t;
        prev_f = f;
    }
    if prev_f == 0.0 {
        brackets.push((prev_t, prev_t, 0.0, 0.0));
    }
    if brackets.len() != 1 {
        return Err(Error::AdmissibilityViolation(format!(
            "branch (j={j}, l={l}) at theta_eta={eta_theta} has {} bracketed roots; \
             the unique-solution guarantee requires an admissible radius function \
             (see branch_roots for the unlabeled diagnostic list)",
            brackets.len()
        )));
    }
    let (mut a, mut b, mut fa, _) = brackets[0];
    if a == b {
        return Ok(a);
    }
    for _ in 0..200 {
        if b - a <= 1e-15 * (1.0 + a.abs().max(b.abs())) {
            break;
        }
        let mid = 0.5 * (a + b);
        let fm = branch_equation(rf, q, eta_l, mid)?;
        if fm == 0.0 {
            return Ok(mid);
        }
        if fm.signum() == fa.signum() {
            a = mid;
            fa = fm;
        } else {
            b = mid;
        }
    }
    let t = 0.5 * (a + b);
    // Post condition: the h-form residual must be tiny at the root.
    let jet = rf.jet(eta_l + t)?;
    let (h, _) = h_function(q, t)?;
    if (jet.ln1 - h).abs() > 1e-12 * (1.0 + jet.ln1.abs() + h.abs()) {
        return Err(Error::AdmissibilityViolation(format!(
            "branch (j={j}, l={l}): residual {:e} after bisection",
            (jet.ln1 - h).abs()
        )));
    }
    Ok(t)
}

/// T_{j,l}(eta): the stationary boundary angle, normalized to [0, 2*pi).
pub fn solve_t(rf: &RadiusFunction, q: f64, eta_theta: f64, j: u8, l: u8) -> Result<f64> {
    let eta_l = eta_theta + (l as f64 - 1.0) * PI;
    let t = solve_branch_offset(rf, q, eta_theta, j, l)?;
    Ok(wrap_2pi(eta_l + t))
}

/// Diagnostic: every root of the branch equation on branch j, unlabeled.
/// Used to inspect non-admissible inputs, for which `solve_t` refuses to
/// pick a representative.
pub fn branch_roots(rf: &RadiusFunction, q: f64, eta_theta: f64, j: u8, l: u8) -> Result<Vec<f64>> {
    validate_jl(j, l)?;
    let (lo, hi) = branch_interval(q, j)?;
    let eta_l = eta_theta + (l as f64 - 1.0) * PI;
    const SCAN: usize = 2048;
    let step = (hi - lo) / SCAN as f64;
    let mut roots = Vec::new();
    let mut prev_t = lo;
    let mut prev_f = branch_equation(rf, q, eta_l, prev_t)?;
    for i in 1..=SCAN {
        let t = lo + step * i as f64;
        let f = branch_equation(rf, q, eta_l, t)?;
        if prev_f == 0.0 {
            roots.push(wrap_2pi(eta_l + prev_t));
        } else if f != 0.0 && prev_f.signum() != f.signum() {
            let (mut a, mut b, mut fa) = (prev_t, t, prev_f);
            for _ in 0..100 {
                if b - a <= 1e-14 {
                    break;
                }
                let mid = 0.5 * (a + b);
                let fm = branch_equation(rf, q, eta_l, mid)?;
                if fm == 0.0 {
                    a = mid;
                    b = mid;
                    break;
                }
                if fm.signum() == fa.signum() {
                    a = mid;
                    fa = fm;
                } else {
                    b = mid;
                }
            }
            roots.push(wrap_2pi(eta_l + 0.5 * (a + b)));
        }
        prev_t = t;
        prev_f = f;
    }
    Ok(roots)
}

fn validate_jl(j: u8, l: u8) -> Result<()> {
    if !(1..=2).contains(&j) || !(1..=2).contains(&l) {
        return Err(Error::InvalidArgument(format!(
            "branch indices must lie in {{1, 2}}, got (j={j}, l={l})"
        )));
    }
    Ok(())
}

/// Assemble the full stationary-point record at a solved angle.
pub(crate) fn make_point(
    rf: &RadiusFunction,
    q: f64,
    eta_theta: f64,
    theta: f64,
    j: u8,
    l: u8,
) -> Result<StationaryPoint> {
    let jet = rf.jet(theta)?;
    let sq = q.sqrt();
    let eta = Vec2::unit(eta_theta);
    let sign_l = if l == 1 { 1.0 } else { -1.0 };
    let xi = Vec2::unit(theta) * sign_l;
    let drive = eta * sq + xi; // sqrt(q) eta + xi
    // Stationarity residuals; both vanish at a genuine stationary point.
    let res_theta = drive.dot(jet.y1).abs();
    let res_xi = xi.perp().dot(jet.y).abs();
    if res_theta > 1e-10 * (1.0 + jet.rho) || res_xi > 1e-10 * (1.0 + jet.rho) {
        return Err(Error::AdmissibilityViolation(format!(
            "stationarity residuals ({res_theta:e}, {res_xi:e}) at theta = {theta}"
        )));
    }
    let psi = drive.dot(jet.y);
    let amplitude = -(eta * sq - xi).dot(jet.y1.perp());
    let h11 = drive.dot(jet.y2);
    let h12 = xi.perp().dot(jet.y1);
    let h22 = -xi.dot(jet.y);
    let det = h11 * h22 - h12 * h12;
    if det.abs() < DEGENERATE_DET_TOL * jet.rho * jet.rho {
        return Err(Error::DegenerateStationaryPoint(format!(
            "|det D^2 psi| = {:e} at theta = {theta} (j={j}, l={l})",
            det.abs()
        )));
    }
    let signature = if det > 0.0 {
        if h11 + h22 > 0.0 {
            2
        } else {
            -2
        }
    } else {
        0
    };
    let f = jet.rho * (theta - eta_theta).sin();
    Ok(StationaryPoint {
        theta: wrap_2pi(theta),
        theta_xi: wrap_2pi(theta + (l as f64 - 1.0) * PI),
        j,
        l,
        psi,
        amplitude,
        hessian: [[h11, h12], [h12, h22]],
        det,
        signature,
        f,
        eta_theta: wrap_2pi(eta_theta),
    })
}

/// One branch-labeled stationary point.
pub fn stationary_point(
    rf: &RadiusFunction,
    q: f64,
    eta_theta: f64,
    j: u8,
    l: u8,
) -> Result<StationaryPoint> {
    let eta_l = eta_theta + (l as f64 - 1.0) * PI;
    let t = solve_branch_offset(rf, q, eta_theta, j, l)?;
    make_point(rf, q, eta_theta, eta_l + t, j, l)
}

/// All four stationary points, ordered (j, l) = (1,1), (1,2), (2,1), (2,2).
pub fn stationary_set(
    rf: &RadiusFunction,
    q: f64,
    eta_theta: f64,
) -> Result<[StationaryPoint; 4]> {
    Ok([
        stationary_point(rf, q, eta_theta, 1, 1)?,
        stationary_point(rf, q, eta_theta, 1, 2)?,
        stationary_point(rf, q, eta_theta, 2, 1)?,
        stationary_point(rf, q, eta_theta, 2, 2)?,
    ])
}

/// Closed forms for sqrt(q) cos(t) and sqrt(q) sin(t) at a branch root with
/// slope g = (ln rho)'(theta):
///   sqrt(q) cos t = (-g^2 - (-1)^j R) / (1 + g^2),
///   sqrt(q) sin t = g (1 - (-1)^j R) / (1 + g^2),   R = sqrt(q + (q-1) g^2).
pub fn closed_form_cos_sin(q: f64, g: f64, j: u8) -> (f64, f64) {
    let r = (q + (q - 1.0) * g * g).sqrt();
    let sigma = if j == 1 { -1.0 } else { 1.0 };
    let denom = 1.0 + g * g;
    (
        (-g * g - sigma * r) / denom,
        g * (1.0 - sigma * r) / denom,
    )
}

/// dT_{j,l}/d theta_eta from the differentiated branch equation:
/// R / (R + (-1)^j (sqrt(q) cos t + 1) (ln rho)''(theta)), strictly positive
/// for admissible radius functions.
pub fn t_derivative(rf: &RadiusFunction, q: f64, eta_theta: f64, j: u8, l: u8) -> Result<f64> {
    let eta_l = eta_theta + (l as f64 - 1.0) * PI;
    let t = solve_branch_offset(rf, q, eta_theta, j, l)?;
    let jet = rf.jet(eta_l + t)?;
    let g = jet.ln1;
    let r = (q + (q - 1.0) * g * g).sqrt();
    let sigma = if j == 1 { -1.0 } else { 1.0 };
    let denom = r + sigma * (q.sqrt() * t.cos() + 1.0) * jet.ln2;
    if !(denom > 0.0) {
        return Err(Error::AdmissibilityViolation(format!(
            "map derivative denominator {denom} <= 0 at theta_eta = {eta_theta} (j={j}, l={l})"
        )));
    }
    Ok(r / denom)
}

/// Invert T_{j,l}: recover theta_eta from the boundary angle using the
/// closed forms, without iteration.
pub fn inverse_t(rf: &RadiusFunction, q: f64, theta: f64, j: u8, l: u8) -> Result<f64> {
    validate_jl(j, l)?;
    theta_q(q)?;
    let jet = rf.jet(theta)?;
    let (c, s) = closed_form_cos_sin(q, jet.ln1, j);
    let t_principal = s.atan2(c); // in (-pi, pi]
    let t = if j == 2 && t_principal < 0.0 {
        t_principal + TWO_PI
    } else {
        t_principal
    };
    let eta_l = theta - t;
    Ok(wrap_2pi(eta_l - (l as f64 - 1.0) * PI))
}
