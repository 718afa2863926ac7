//! Star-shaped domain geometry.
//!
//! A domain is described by a positive 2*pi-periodic radius function rho, so
//! that the boundary is y(theta) = rho(theta) * (cos theta, sin theta). Every
//! shipped kind carries closed-form first and second derivatives of ln(rho),
//! because the admissibility condition that drives the whole stationary-point
//! analysis is an upper bound on (ln rho)''.

mod hypotheses;

pub use hypotheses::{check_hypotheses, sign_profile, zero_set_rho1, HypothesisReport, SignSpan,
                     ZeroSpan};

use crate::angles::{wrap_2pi, TWO_PI};
use crate::error::{Error, Result};
use crate::vec2::Vec2;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// Shape family of a radius function.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum RadiusKind {
    /// Circle of the given radius centered at the origin.
    Constant { radius: f64 },
    /// Ellipse centered at the origin with semi-axes `a` (horizontal) and `b`.
    CenteredEllipse { a: f64, b: f64 },
    /// Disk of radius `r0` centered at `center != 0`, origin strictly inside.
    OffsetDisk { r0: f64, center: Vec2 },
    /// Ellipse with one focus at the origin; `a` is the semi-major axis and
    /// `e` the eccentricity, rho(t) = a(1-e^2)/(1 + e cos t).
    FocalEllipse { a: f64, e: f64 },
    /// ln rho(t) = sum_m cos[m]*cos(m t) + sin[m]*sin(m t). Storing the
    /// coefficients of ln rho (not rho) keeps (ln rho)'' a finite trig sum.
    LogFourier { cos: Vec<f64>, sin: Vec<f64> },
    /// rho(t) = 1 + amplitude * sin(t)^3 on the mask intervals, 1 elsewhere.
    /// C^2 across a knot requires the knot to be a multiple of pi; this is
    /// verified numerically by [`RadiusFunction::verify_c2`], not enforced.
    PiecewiseEgg { amplitude: f64, mask: Vec<(f64, f64)> },
}

/// A star-shaped boundary rho(theta), optionally rotated by a fixed angle.
///
/// All evaluations use the shifted argument `theta - rotation`; rotating the
/// domain, the density and the observation direction together must leave
/// every integral invariant, which the test suites exercise.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RadiusFunction {
    kind: RadiusKind,
    rotation: f64,
}

/// Zeroth, first and second derivative data of the boundary at one angle.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct BoundaryJet {
    pub theta: f64,
    /// Boundary point rho(theta) * (cos theta, sin theta).
    pub y: Vec2,
    /// dy/dtheta.
    pub y1: Vec2,
    /// d^2 y/dtheta^2.
    pub y2: Vec2,
    pub rho: f64,
    pub rho1: f64,
    pub rho2: f64,
    /// (ln rho)'.
    pub ln1: f64,
    /// (ln rho)''.
    pub ln2: f64,
}

/// Result of maximizing (ln rho)'' over one period.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct LogSecondDerivativeMax {
    pub value: f64,
    pub argmax: f64,
    /// Closed-form maximum for ellipse/disk/focal kinds, for cross-checking.
    pub closed_form: Option<f64>,
}

/// One-sided second-derivative mismatch at a piecewise knot.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct KnotDefect {
    pub knot: f64,
    pub jump_rho: f64,
    pub jump_rho1: f64,
    pub jump_rho2: f64,
}

const C2_KNOT_TOL: f64 = 1e-10;

impl RadiusFunction {
    pub fn constant(radius: f64) -> Result<Self> {
        if !(radius > 0.0) || !radius.is_finite() {
            return Err(Error::UnsupportedParameter(format!(
                "constant radius must be positive and finite, got {radius}"
            )));
        }
        Ok(Self::from_kind(RadiusKind::Constant { radius }))
    }

    pub fn centered_ellipse(a: f64, b: f64) -> Result<Self> {
        if !(a > 0.0 && b > 0.0) || !a.is_finite() || !b.is_finite() {
            return Err(Error::UnsupportedParameter(format!(
                "ellipse semi-axes must be positive, got a={a}, b={b}"
            )));
        }
        Ok(Self::from_kind(RadiusKind::CenteredEllipse { a, b }))
    }

    pub fn offset_disk(r0: f64, center: Vec2) -> Result<Self> {
        if !(r0 > 0.0) || !r0.is_finite() || !center.is_finite() {
            return Err(Error::UnsupportedParameter(format!(
                "offset disk needs finite r0 > 0, got r0={r0}"
            )));
        }
        if center.norm() == 0.0 {
            return Err(Error::UnsupportedParameter(
                "offset disk center must differ from the origin; use a constant kind instead"
                    .into(),
            ));
        }
        if center.norm() >= r0 {
            return Err(Error::UnsupportedParameter(format!(
                "origin must lie strictly inside the disk: |center| = {} >= r0 = {r0}",
                center.norm()
            )));
        }
        Ok(Self::from_kind(RadiusKind::OffsetDisk { r0, center }))
    }

    pub fn focal_ellipse(a: f64, e: f64) -> Result<Self> {
        if !(a > 0.0) || !a.is_finite() || !(e > 0.0 && e < 1.0) {
            return Err(Error::UnsupportedParameter(format!(
                "focal ellipse needs a > 0 and 0 < e < 1, got a={a}, e={e}"
            )));
        }
        Ok(Self::from_kind(RadiusKind::FocalEllipse { a, e }))
    }

    pub fn log_fourier(cos: Vec<f64>, sin: Vec<f64>) -> Result<Self> {
        if cos.iter().chain(sin.iter()).any(|c| !c.is_finite()) {
            return Err(Error::UnsupportedParameter(
                "log-Fourier coefficients must be finite".into(),
            ));
        }
        if let Some(s0) = sin.first() {
            if *s0 != 0.0 {
                return Err(Error::UnsupportedParameter(
                    "sin[0] multiplies sin(0*t) = 0 and must be zero".into(),
                ));
            }
        }
        Ok(Self::from_kind(RadiusKind::LogFourier { cos, sin }))
    }

    pub fn piecewise_egg(amplitude: f64, mask: Vec<(f64, f64)>) -> Result<Self> {
        if !(amplitude > 0.0 && amplitude < 1.0) {
            return Err(Error::UnsupportedParameter(format!(
                "egg amplitude must lie in (0, 1), got {amplitude}"
            )));
        }
        for &(lo, hi) in &mask {
            if !(lo.is_finite() && hi.is_finite() && lo < hi && lo >= 0.0 && hi <= TWO_PI) {
                return Err(Error::UnsupportedParameter(format!(
                    "mask interval ({lo}, {hi}) must satisfy 0 <= lo < hi <= 2*pi"
                )));
            }
        }
        Ok(Self::from_kind(RadiusKind::PiecewiseEgg { amplitude, mask }))
    }

    /// The canonical egg: bump on (0, pi), circular arc on (pi, 2*pi).
    pub fn egg(amplitude: f64) -> Result<Self> {
        Self::piecewise_egg(amplitude, vec![(0.0, PI)])
    }

    fn from_kind(kind: RadiusKind) -> Self {
        RadiusFunction { kind, rotation: 0.0 }
    }

    pub fn kind(&self) -> &RadiusKind {
        &self.kind
    }

    pub fn rotation(&self) -> f64 {
        self.rotation
    }

    /// The same shape rotated counterclockwise by `alpha`.
    pub fn rotated(&self, alpha: f64) -> Self {
        RadiusFunction {
            kind: self.kind.clone(),
            rotation: wrap_2pi(self.rotation + alpha),
        }
    }

    /// rho(theta). Panics never; returns NaN only for non-finite input.
    pub fn rho(&self, theta: f64) -> f64 {
        self.raw_jet(theta).0
    }

    /// Full derivative data at `theta`.
    pub fn jet(&self, theta: f64) -> Result<BoundaryJet> {
        let (rho, ln1, ln2) = self.raw_jet(theta);
        if !(rho.is_finite() && ln1.is_finite() && ln2.is_finite()) || rho <= 0.0 {
            return Err(Error::Evaluation {
                theta,
                detail: format!("rho={rho}, ln1={ln1}, ln2={ln2}"),
            });
        }
        let dir = Vec2::unit(theta);
        let dir_perp = dir.perp();
        let y = dir * rho;
        // y'  = rho * (ln1 * dir + dir_perp)
        // y'' = rho * ((ln1^2 - 1 + ln2) * dir + 2 ln1 * dir_perp)
        let y1 = (dir * ln1 + dir_perp) * rho;
        let y2 = (dir * (ln1 * ln1 - 1.0 + ln2) + dir_perp * (2.0 * ln1)) * rho;
        Ok(BoundaryJet {
            theta,
            y,
            y1,
            y2,
            rho,
            rho1: rho * ln1,
            rho2: rho * (ln2 + ln1 * ln1),
            ln1,
            ln2,
        })
    }

    /// (rho, (ln rho)', (ln rho)'') in closed form per kind.
    ///
    /// Arguments are reduced modulo 2*pi before any trigonometry, so the
    /// evaluation is periodic by construction.
    fn raw_jet(&self, theta: f64) -> (f64, f64, f64) {
        let t = wrap_2pi(theta - self.rotation);
        match &self.kind {
            RadiusKind::Constant { radius } => (*radius, 0.0, 0.0),
            RadiusKind::CenteredEllipse { a, b } => {
                // rho = b / sqrt(1 - e^2 cos^2 t) with e^2 = 1 - (b/a)^2,
                // valid for any positive axes (e^2 may be negative).
                let e2 = 1.0 - (b / a) * (b / a);
                let c = t.cos();
                let s = t.sin();
                let d = 1.0 - e2 * c * c;
                let rho = b / d.sqrt();
                let ln1 = -e2 * c * s / d;
                let ln2 = e2 * (1.0 - (2.0 - e2) * c * c) / (d * d);
                (rho, ln1, ln2)
            }
            RadiusKind::OffsetDisk { r0, center } => {
                let m = center.norm();
                let c = (t - center.angle()).cos();
                let s = (t - center.angle()).sin();
                let w = (r0 * r0 - m * m * s * s).sqrt();
                let rho = m * c + w;
                let ln1 = -m * s / w;
                let ln2 = -r0 * r0 * m * c / (w * w * w);
                (rho, ln1, ln2)
            }
            RadiusKind::FocalEllipse { a, e } => {
                let c = t.cos();
                let s = t.sin();
                let d = 1.0 + e * c;
                let rho = a * (1.0 - e * e) / d;
                let ln1 = e * s / d;
                let ln2 = e * (e + c) / (d * d);
                (rho, ln1, ln2)
            }
            RadiusKind::LogFourier { cos, sin } => {
                let mut ln = 0.0;
                let mut ln1 = 0.0;
                let mut ln2 = 0.0;
                for (m, &cm) in cos.iter().enumerate() {
                    let mf = m as f64;
                    let (smt, cmt) = (mf * t).sin_cos();
                    ln += cm * cmt;
                    ln1 -= cm * mf * smt;
                    ln2 -= cm * mf * mf * cmt;
                }
                for (m, &sm) in sin.iter().enumerate().skip(1) {
                    let mf = m as f64;
                    let (smt, cmt) = (mf * t).sin_cos();
                    ln += sm * smt;
                    ln1 += sm * mf * cmt;
                    ln2 -= sm * mf * mf * smt;
                }
                (ln.exp(), ln1, ln2)
            }
            RadiusKind::PiecewiseEgg { amplitude, mask } => {
                let tr = t;
                let masked = mask.iter().any(|&(lo, hi)| tr > lo && tr < hi);
                if masked {
                    let s = tr.sin();
                    let c = tr.cos();
                    let rho = 1.0 + amplitude * s * s * s;
                    let rho1 = 3.0 * amplitude * s * s * c;
                    let rho2 = 3.0 * amplitude * s * (2.0 - 3.0 * s * s);
                    let ln1 = rho1 / rho;
                    let ln2 = rho2 / rho - ln1 * ln1;
                    (rho, ln1, ln2)
                } else {
                    (1.0, 0.0, 0.0)
                }
            }
        }
    }

    /// Closed-form max of (ln rho)'' where the shape family provides one.
    pub fn closed_form_max_ln2(&self) -> Option<f64> {
        match &self.kind {
            RadiusKind::Constant { .. } => Some(0.0),
            RadiusKind::CenteredEllipse { a, b } => {
                // The max is rotation-invariant, so order the axes first.
                let (major, minor) = if a >= b { (a, b) } else { (b, a) };
                let e2 = 1.0 - (minor / major) * (minor / major);
                if e2 == 0.0 {
                    Some(0.0)
                } else if e2 <= 2.0 / 3.0 {
                    Some(e2)
                } else {
                    Some((2.0 - e2) * (2.0 - e2) / (8.0 * (1.0 - e2)))
                }
            }
            RadiusKind::OffsetDisk { r0, center } => {
                let s = r0 / center.norm();
                if s >= 3f64.sqrt() {
                    Some(1.0 / s)
                } else {
                    Some(2.0 / (3.0 * 3f64.sqrt()) * s * s / (s * s - 1.0))
                }
            }
            RadiusKind::FocalEllipse { e, .. } => {
                if *e < 0.5 {
                    Some(e / (1.0 + e))
                } else {
                    Some(1.0 / (4.0 * (1.0 - e * e)))
                }
            }
            _ => None,
        }
    }

    /// Upper bound of rho over a period (grid plus golden-section polish).
    pub fn max_rho(&self) -> f64 {
        match &self.kind {
            RadiusKind::Constant { radius } => *radius,
            RadiusKind::CenteredEllipse { a, b } => a.max(*b),
            RadiusKind::OffsetDisk { r0, center } => r0 + center.norm(),
            RadiusKind::FocalEllipse { a, e } => a * (1.0 + e),
            _ => {
                let n = 1024;
                (0..n)
                    .map(|i| self.rho(TWO_PI * i as f64 / n as f64))
                    .fold(f64::MIN, f64::max)
            }
        }
    }

    /// Compare one-sided limits of (rho, rho', rho'') at the knots of
    /// piecewise kinds. Smooth kinds return an empty list. Each side has an
    /// analytic formula, so the one-sided limits are evaluated exactly and a
    /// defect is reported when they disagree beyond the 1e-10 matching
    /// tolerance.
    pub fn verify_c2(&self) -> Vec<KnotDefect> {
        let RadiusKind::PiecewiseEgg { amplitude, mask } = &self.kind else {
            return Vec::new();
        };
        let a = *amplitude;
        // One-sided limit of the active branch at the knot.
        let branch = |knot: f64, masked: bool| -> (f64, f64, f64) {
            if masked {
                let s = knot.sin();
                let c = knot.cos();
                (
                    1.0 + a * s * s * s,
                    3.0 * a * s * s * c,
                    3.0 * a * s * (2.0 - 3.0 * s * s),
                )
            } else {
                (1.0, 0.0, 0.0)
            }
        };
        let masked_at = |t: f64| {
            let tr = wrap_2pi(t);
            mask.iter().any(|&(lo, hi)| tr > lo && tr < hi)
        };
        let mut defects = Vec::new();
        for &(lo, hi) in mask {
            for knot in [lo, hi] {
                let plus = branch(knot, masked_at(knot + 1e-9));
                let minus = branch(knot, masked_at(knot - 1e-9));
                let jump_rho = (plus.0 - minus.0).abs();
                let jump_rho1 = (plus.1 - minus.1).abs();
                let jump_rho2 = (plus.2 - minus.2).abs();
                if jump_rho > C2_KNOT_TOL || jump_rho1 > C2_KNOT_TOL || jump_rho2 > C2_KNOT_TOL {
                    defects.push(KnotDefect { knot, jump_rho, jump_rho1, jump_rho2 });
                }
            }
        }
        defects
    }
}

/// Global maximum of (ln rho)'' over one period.
///
/// A uniform grid brackets the maximum; golden-section refinement polishes it
/// to 1e-10 in the argument. 512 points are required so the bracket cannot
/// skip the global maximum for the shipped shape families.
pub fn max_log_second_derivative(
    rf: &RadiusFunction,
    grid_size: usize,
) -> Result<LogSecondDerivativeMax> {
    if grid_size < 512 {
        return Err(Error::InvalidArgument(format!(
            "grid_size must be at least 512, got {grid_size}"
        )));
    }
    let f = |t: f64| rf.raw_jet(t).2;
    let n = grid_size;
    let mut best_i = 0;
    let mut best = f64::MIN;
    for i in 0..n {
        let v = f(TWO_PI * i as f64 / n as f64);
        if !v.is_finite() {
            return Err(Error::Evaluation {
                theta: TWO_PI * i as f64 / n as f64,
                detail: "non-finite (ln rho)''".into(),
            });
        }
        if v > best {
            best = v;
            best_i = i;
        }
    }
    let h = TWO_PI / n as f64;
    let center = best_i as f64 * h;
    let (argmax, value) = golden_max(f, center - h, center + h, 1e-12);
    Ok(LogSecondDerivativeMax {
        value,
        argmax: wrap_2pi(argmax),
        closed_form: rf.closed_form_max_ln2(),
    })
}

/// Golden-section maximization on [lo, hi]; returns (argmax, max).
pub(crate) fn golden_max<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64, tol: f64) -> (f64, f64) {
    let inv_phi = 0.5 * (5f64.sqrt() - 1.0);
    let (mut a, mut b) = (lo, hi);
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    while b - a > tol {
        if fc > fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    let m = 0.5 * (a + b);
    (m, f(m))
}
