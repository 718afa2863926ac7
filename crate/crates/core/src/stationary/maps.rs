//! Orbits of composed stationary maps.
//!
//! Words are sequences of steps applied left to right; each step is a
//! forward or inverse branch map or a shift by +/- pi. Orbit values are
//! carried as unwrapped lifts: a forward star map T_{j,l} displaces its
//! argument by (l - 1) pi plus a branch offset near 0 (j = 1) or near pi
//! (j = 2); an ellipse map T_j displaces by about (j - 1) pi. Inverses
//! displace by the negatives. Callers reduce modulo 2 pi where needed.

use super::ellipse::{ellipse_t, ellipse_t_inverse};
use super::{branch_interval, inverse_t, solve_t};
use crate::angles::{wrap_2pi, wrap_near, TWO_PI};
use crate::error::{Error, Result};
use crate::geometry::RadiusFunction;
use serde::Serialize;
use std::f64::consts::PI;

/// Which family of maps a word composes.
#[derive(Debug, Clone)]
pub enum MapFlavor<'a> {
    /// Branch maps T_{j,l} of a star-shaped domain at index q.
    Star { rf: &'a RadiusFunction, q: f64 },
    /// Closed-form ellipse maps T_j (no l index).
    Ellipse { a: f64, b: f64, q: f64 },
}

/// One step of a composition word.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum MapStep {
    Forward { j: u8, l: u8 },
    Inverse { j: u8, l: u8 },
    ShiftPlusPi,
    ShiftMinusPi,
}

/// One application of the composed word.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct OrbitStep {
    pub index: usize,
    /// Unwrapped lift before and after this application.
    pub t_before: f64,
    pub t_after: f64,
    /// Whether the wrapped position moved counterclockwise.
    pub increased: bool,
    /// Every sub-step stayed on its branch and the net displacement is
    /// below one period.
    pub confined: bool,
}

fn apply_step(flavor: &MapFlavor, step: MapStep, t: f64) -> Result<f64> {
    match (flavor, step) {
        (_, MapStep::ShiftPlusPi) => Ok(t + PI),
        (_, MapStep::ShiftMinusPi) => Ok(t - PI),
        (MapFlavor::Star { rf, q }, MapStep::Forward { j, l }) => {
            let tr = wrap_2pi(t);
            let theta = solve_t(rf, *q, tr, j, l)?;
            // Lift: displacement = (l-1) pi + branch offset.
            let eta_l = tr + (l as f64 - 1.0) * PI;
            let center = if j == 1 { 0.0 } else { PI };
            let offset = wrap_near(theta - eta_l, center);
            let (lo, hi) = branch_interval(*q, j)?;
            if offset <= lo || offset >= hi {
                return Err(Error::BranchViolation(format!(
                    "offset {offset} left branch ({lo}, {hi})"
                )));
            }
            Ok(t + (l as f64 - 1.0) * PI + offset)
        }
        (MapFlavor::Star { rf, q }, MapStep::Inverse { j, l }) => {
            let tr = wrap_2pi(t);
            let eta = inverse_t(rf, *q, tr, j, l)?;
            let eta_l = eta + (l as f64 - 1.0) * PI;
            let center = if j == 1 { 0.0 } else { PI };
            let offset = wrap_near(tr - eta_l, center);
            Ok(t - (l as f64 - 1.0) * PI - offset)
        }
        (MapFlavor::Ellipse { a, b, q }, MapStep::Forward { j, l }) => {
            require_l1(l)?;
            let tr = wrap_2pi(t);
            let txi = ellipse_t(*a, *b, *q, tr, j)?;
            Ok(t + wrap_near(txi - tr, (j as f64 - 1.0) * PI))
        }
        (MapFlavor::Ellipse { a, b, q }, MapStep::Inverse { j, l }) => {
            require_l1(l)?;
            let tr = wrap_2pi(t);
            let eta = ellipse_t_inverse(*a, *b, *q, tr, j)?;
            Ok(t + wrap_near(eta - tr, -(j as f64 - 1.0) * PI))
        }
    }
}

fn require_l1(l: u8) -> Result<()> {
    if l != 1 {
        return Err(Error::InvalidArgument(
            "ellipse maps carry no l index; use l = 1 in the word".into(),
        ));
    }
    Ok(())
}

/// Iterate the composed word `n_steps` times from `t0`.
pub fn compose_iterate(
    flavor: &MapFlavor,
    word: &[MapStep],
    t0: f64,
    n_steps: usize,
) -> Result<Vec<OrbitStep>> {
    if word.is_empty() {
        return Err(Error::InvalidArgument("empty composition word".into()));
    }
    let mut orbit = Vec::with_capacity(n_steps);
    let mut t = t0;
    for index in 0..n_steps {
        let t_before = t;
        for step in word {
            t = apply_step(flavor, *step, t)?;
        }
        orbit.push(OrbitStep {
            index,
            t_before,
            t_after: t,
            increased: wrap_2pi(t) > wrap_2pi(t_before),
            confined: (t - t_before).abs() < TWO_PI,
        });
    }
    Ok(orbit)
}
