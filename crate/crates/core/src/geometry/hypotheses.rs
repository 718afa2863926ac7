//! Closed-form and grid evaluation of the geometric hypotheses behind the
//! finiteness statements: the admissibility margin, per-theorem threshold
//! flags, and the structure of the zero set of rho'.

use super::{golden_max, max_log_second_derivative, RadiusFunction, RadiusKind};
use crate::angles::{circular_distance, wrap_2pi, TWO_PI};
use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::f64::consts::PI;

/// A connected component of the zero set of rho'.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum ZeroSpan {
    /// Isolated zero.
    Point(f64),
    /// Closed interval of angles on which rho' vanishes identically.
    Interval(f64, f64),
}

/// One cell of the sign partition of [0, 2*pi) by zeros of rho'.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct SignSpan {
    pub lo: f64,
    pub hi: f64,
    /// Sign of rho' on the open interval (-1, 0, +1).
    pub sign: i8,
    /// Sign of rho' on the interval shifted by pi.
    pub sign_shifted: i8,
}

/// Outcome of evaluating every geometric hypothesis at a given q.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct HypothesisReport {
    /// Admissibility: max (ln rho)'' < sqrt(q)/(1 + sqrt(q)).
    pub admissible: bool,
    /// sqrt(q)/(1 + sqrt(q)) - max (ln rho)''.
    pub margin: f64,
    pub max_ln2: f64,
    pub argmax_t: f64,
    pub closed_form_max: Option<f64>,
    /// Per-theorem hypothesis flags; only keys applicable to the shape kind
    /// are present (e.g. "Thm-ellipse" only for centered ellipses).
    pub theorem_flags: BTreeMap<String, bool>,
    pub zero_set_rho1: Vec<ZeroSpan>,
}

/// A grid value of rho' counts as zero below this relative threshold.
fn zero_tol(rho: f64) -> f64 {
    1e-12 * (1.0 + rho.abs())
}

const ZERO_GRID: usize = 2048;

/// Locate the zero set of rho' as isolated points and flat intervals.
///
/// Grid classification plus sign-change bracketing; isolated zeros are
/// bisected to 1e-12. Endpoints of flat intervals are located by bisecting
/// |rho'| against the zero threshold, which for a C^2 junction is accurate
/// only to the square root of the threshold (the slope vanishes there).
pub fn zero_set_rho1(rf: &RadiusFunction, grid_size: usize) -> Result<Vec<ZeroSpan>> {
    let n = grid_size.max(256);
    let h = TWO_PI / n as f64;
    let mut vals = Vec::with_capacity(n);
    for i in 0..n {
        let j = rf.jet(i as f64 * h)?;
        vals.push((j.rho1, zero_tol(j.rho)));
    }
    let flat = |i: usize| vals[i % n].0.abs() < vals[i % n].1;

    // Entirely flat: rho' == 0 on all of [0, 2*pi).
    if (0..n).all(flat) {
        return Ok(vec![ZeroSpan::Interval(0.0, TWO_PI)]);
    }

    let rho1 = |t: f64| rf.jet(t).map(|j| j.rho1);
    let is_zero_at = |t: f64| -> Result<bool> {
        let j = rf.jet(t)?;
        Ok(j.rho1.abs() < zero_tol(j.rho))
    };

    let mut spans: Vec<ZeroSpan> = Vec::new();

    // Flat runs of consecutive zero-classified grid points become intervals.
    // Walk runs starting from a non-flat anchor so wraparound runs stay whole.
    let start = (0..n).find(|&i| !flat(i)).unwrap();
    let mut i = 0;
    while i < n {
        let idx = (start + i) % n;
        if flat(idx) {
            let mut len = 1;
            while len < n && flat(idx + len) {
                len += 1;
            }
            if len >= 2 {
                // Refine both edges: bisect the transition between the last
                // clearly-zero sample and its non-flat neighbour.
                let lo_outer = (start + i - 1) as f64 * h;
                let lo_inner = (start + i) as f64 * h;
                let hi_inner = (start + i + len - 1) as f64 * h;
                let hi_outer = (start + i + len) as f64 * h;
                let lo = bisect_flat_edge(&is_zero_at, lo_outer, lo_inner)?;
                let hi = bisect_flat_edge(&is_zero_at, hi_outer, hi_inner)?;
                spans.push(ZeroSpan::Interval(lo, hi));
            } else {
                // A single flagged sample: an isolated zero sitting on a grid
                // node; polish by minimizing |rho'| nearby.
                let t0 = idx as f64 * h;
                let (tm, _) = golden_max(
                    |t| -(rho1(t).unwrap_or(f64::MAX).abs()),
                    t0 - h,
                    t0 + h,
                    1e-13,
                );
                spans.push(ZeroSpan::Point(tm));
            }
            i += len;
        } else {
            i += 1;
        }
    }

    // Sign changes between consecutive non-flat samples: bracketed bisection.
    for k in 0..n {
        let idx = (start + k) % n;
        let next = (start + k + 1) % n;
        if flat(idx) || flat(next) {
            continue;
        }
        let (a, b) = (vals[idx].0, vals[next].0);
        if a.signum() == b.signum() {
            continue;
        }
        let mut lo = (start + k) as f64 * h;
        let mut hi = (start + k + 1) as f64 * h;
        let mut flo = a;
        for _ in 0..64 {
            if hi - lo < 1e-13 {
                break;
            }
            let mid = 0.5 * (lo + hi);
            let fm = rho1(mid)?;
            if fm == 0.0 {
                lo = mid;
                hi = mid;
                break;
            }
            if fm.signum() == flo.signum() {
                lo = mid;
                flo = fm;
            } else {
                hi = mid;
            }
        }
        let root = 0.5 * (lo + hi);
        // Skip roots already absorbed by a point span or a flat interval.
        let dup = spans.iter().any(|s| match s {
            ZeroSpan::Point(p) => circular_distance(*p, root) < 2.0 * h,
            ZeroSpan::Interval(a, b) => wrap_2pi(root - *a) <= (b - a) + 2.0 * h,
        });
        if !dup {
            spans.push(ZeroSpan::Point(root));
        }
    }

    // Normalize all representatives into [0, 2*pi) and sort by start angle.
    let mut spans: Vec<ZeroSpan> = spans
        .into_iter()
        .map(|s| match s {
            ZeroSpan::Point(p) => ZeroSpan::Point(wrap_2pi(p)),
            ZeroSpan::Interval(a, b) => {
                let width = b - a;
                let a = wrap_2pi(a);
                ZeroSpan::Interval(a, a + width)
            }
        })
        .collect();
    spans.sort_by(|x, y| {
        let kx = match x {
            ZeroSpan::Point(p) => *p,
            ZeroSpan::Interval(a, _) => *a,
        };
        let ky = match y {
            ZeroSpan::Point(p) => *p,
            ZeroSpan::Interval(a, _) => *a,
        };
        kx.partial_cmp(&ky).unwrap()
    });
    Ok(spans)
}

/// Bisect the edge of a flat run: `outside` is non-flat, `inside` is flat.
fn bisect_flat_edge<F: Fn(f64) -> Result<bool>>(
    is_zero: &F,
    mut outside: f64,
    mut inside: f64,
) -> Result<f64> {
    for _ in 0..60 {
        if (outside - inside).abs() < 1e-13 {
            break;
        }
        let mid = 0.5 * (outside + inside);
        if is_zero(mid)? {
            inside = mid;
        } else {
            outside = mid;
        }
    }
    Ok(0.5 * (outside + inside))
}

/// Partition [0, 2*pi) by the zero set of rho' and record the sign of rho'
/// on each cell together with the sign on the cell shifted by pi.
pub fn sign_profile(rf: &RadiusFunction, grid_size: usize) -> Result<Vec<SignSpan>> {
    let spans = zero_set_rho1(rf, grid_size)?;
    if spans.len() == 1 {
        if let ZeroSpan::Interval(a, b) = spans[0] {
            if b - a >= TWO_PI - 1e-9 {
                return Ok(vec![SignSpan { lo: 0.0, hi: TWO_PI, sign: 0, sign_shifted: 0 }]);
            }
        }
    }

    // Collect boundary angles; flat intervals contribute their own cell.
    #[derive(Clone, Copy)]
    struct Cut {
        t: f64,
        flat_until: Option<f64>,
    }
    let mut cuts: Vec<Cut> = spans
        .iter()
        .map(|s| match s {
            ZeroSpan::Point(p) => Cut { t: *p, flat_until: None },
            ZeroSpan::Interval(a, b) => Cut { t: *a, flat_until: Some(*b) },
        })
        .collect();
    cuts.sort_by(|a, b| a.t.partial_cmp(&b.t).unwrap());
    let sgn = |t: f64| -> Result<i8> {
        let j = rf.jet(wrap_2pi(t))?;
        Ok(if j.rho1.abs() < zero_tol(j.rho) {
            0
        } else if j.rho1 > 0.0 {
            1
        } else {
            -1
        })
    };

    let mut out = Vec::new();
    for (i, cut) in cuts.iter().enumerate() {
        let cell_lo = match cut.flat_until {
            Some(b) => {
                out.push(SignSpan {
                    lo: cut.t,
                    hi: b,
                    sign: 0,
                    sign_shifted: sgn(0.5 * (cut.t + b) + PI)?,
                });
                b
            }
            None => cut.t,
        };
        let next = cuts[(i + 1) % cuts.len()];
        let cell_hi = if i + 1 == cuts.len() { next.t + TWO_PI } else { next.t };
        if cell_hi - cell_lo < 1e-9 {
            continue;
        }
        let mid = 0.5 * (cell_lo + cell_hi);
        out.push(SignSpan {
            lo: cell_lo,
            hi: cell_hi,
            sign: sgn(mid)?,
            sign_shifted: sgn(mid + PI)?,
        });
    }
    Ok(out)
}

/// Evaluate every geometric hypothesis of the finiteness theorems at `q`.
///
/// The admissibility flag uses the closed-form maximum of (ln rho)'' when the
/// shape family provides one, so threshold comparisons are exact; the grid
/// maximum is still reported for cross-checking.
pub fn check_hypotheses(rf: &RadiusFunction, q: f64) -> Result<HypothesisReport> {
    if !(q > 1.0) || !q.is_finite() {
        return Err(Error::UnsupportedParameter(format!(
            "q must satisfy q > 1 (the 0 < q < 1 branch is unsupported), got {q}"
        )));
    }
    let sq = q.sqrt();
    let threshold = sq / (1.0 + sq);

    let grid = max_log_second_derivative(rf, 2048)?;
    let effective_max = grid.closed_form.unwrap_or(grid.value);
    let margin = threshold - effective_max;
    let admissible = margin > 0.0;

    let spans = zero_set_rho1(rf, ZERO_GRID)?;
    let profile = sign_profile(rf, ZERO_GRID)?;

    let mut flags = BTreeMap::new();
    match rf.kind() {
        RadiusKind::CenteredEllipse { a, b } => {
            let (major, minor) = if a >= b { (a, b) } else { (b, a) };
            let e2 = 1.0 - (minor / major) * (minor / major);
            flags.insert("Thm-ellipse".to_string(), e2 > 0.0 && e2 < threshold);
        }
        RadiusKind::OffsetDisk { r0, center } => {
            let ratio = center.norm() / r0;
            let boundary = if sq <= 1.0 / (3f64.sqrt() - 1.0) {
                threshold
            } else {
                (1.0 - 2.0 * (1.0 + sq) / (3.0 * (3.0 * q).sqrt())).sqrt()
            };
            flags.insert("Thm-disk".to_string(), ratio < boundary);
        }
        RadiusKind::FocalEllipse { e, .. } => {
            flags.insert("Thm-focal".to_string(), 4.0 * e * e < 3.0 - 1.0 / sq);
        }
        _ => {}
    }

    // Structure of the zero set, shared by the remaining hypotheses.
    let flat_measure: f64 = spans
        .iter()
        .map(|s| match s {
            ZeroSpan::Interval(a, b) => b - a,
            ZeroSpan::Point(_) => 0.0,
        })
        .sum();
    let flat_intervals: Vec<(f64, f64)> = spans
        .iter()
        .filter_map(|s| match s {
            ZeroSpan::Interval(a, b) => Some((*a, *b)),
            _ => None,
        })
        .collect();
    let points: Vec<f64> = spans
        .iter()
        .filter_map(|s| match s {
            ZeroSpan::Point(p) => Some(*p),
            _ => None,
        })
        .collect();

    // Half-flat condition: rho' = 0 on an open set of measure pi whose
    // pi-shift carries rho' != 0 a.e. and which together with that shift
    // covers the circle.
    let overlap: f64 = flat_intervals
        .iter()
        .flat_map(|&(a1, b1)| {
            flat_intervals
                .iter()
                .map(move |&(a2, b2)| interval_overlap_mod_2pi((a1, b1), (a2 + PI, b2 + PI)))
        })
        .sum();
    // Flat edges of a C^2 junction are only locatable to about the square
    // root of the zero threshold, so the measure test carries a matching
    // slack.
    let star1 = (flat_measure - PI).abs() < 1e-4 && overlap < 1e-4;
    flags.insert("Star1-cond".to_string(), star1);

    // Symmetric-zero structure: rho' != 0 a.e., and zeros come in (t, t+pi)
    // pairs.
    let no_flats = flat_intervals.is_empty();
    let zeros_paired = no_flats
        && points
            .iter()
            .all(|&p| points.iter().any(|&r| circular_distance(p + PI, r) < 1e-8));
    let signs_match = profile
        .iter()
        .filter(|c| c.sign != 0)
        .all(|c| c.sign == c.sign_shifted);
    flags.insert("Main1-(i)".to_string(), zeros_paired && signs_match);

    let curvature_split = points.iter().all(|&p| {
        let r2_here = rf.jet(p).map(|j| j.rho2.abs()).unwrap_or(0.0);
        let r2_opp = rf.jet(p + PI).map(|j| j.rho2.abs()).unwrap_or(0.0);
        r2_here + r2_opp > 1e-10
    });
    flags.insert("Main1-(ii)".to_string(), zeros_paired && curvature_split);

    // Analytic-density variants.
    let anly_i = (0..ZERO_GRID).any(|i| {
        let t = TWO_PI * i as f64 / ZERO_GRID as f64;
        match (rf.jet(t), rf.jet(t + PI)) {
            (Ok(j0), Ok(j1)) => j0.rho1.abs() > 1e-8 && j0.rho1 * j1.rho1 >= -1e-14,
            _ => false,
        }
    });
    flags.insert("Anly-(i)".to_string(), anly_i);

    let anly_ii = {
        let f = |t: f64| -> f64 {
            let j0 = rf.jet(t).unwrap();
            let j1 = rf.jet(t + PI).unwrap();
            j0.rho1.abs() + j1.rho1.abs() + j0.rho2.abs() + j1.rho2.abs()
        };
        let n = ZERO_GRID;
        let mut min_v = f64::MAX;
        let mut min_i = 0;
        for i in 0..n {
            let v = f(TWO_PI * i as f64 / n as f64);
            if v < min_v {
                min_v = v;
                min_i = i;
            }
        }
        let h = TWO_PI / n as f64;
        let c = min_i as f64 * h;
        let (_, neg_min) = golden_max(|t| -f(t), c - h, c + h, 1e-12);
        -neg_min > 1e-10
    };
    flags.insert("Anly-(ii)".to_string(), anly_ii);

    Ok(HypothesisReport {
        admissible,
        margin,
        max_ln2: effective_max,
        argmax_t: grid.argmax,
        closed_form_max: grid.closed_form,
        theorem_flags: flags,
        zero_set_rho1: spans,
    })
}

/// Length of the intersection of two intervals on the circle.
fn interval_overlap_mod_2pi(a: (f64, f64), b: (f64, f64)) -> f64 {
    // Compare on a common lift; both intervals have width < 2*pi.
    let (a_lo, a_hi) = (wrap_2pi(a.0), wrap_2pi(a.0) + (a.1 - a.0));
    let mut total = 0.0;
    for shift in [-TWO_PI, 0.0, TWO_PI] {
        let b_lo = wrap_2pi(b.0) + shift;
        let b_hi = b_lo + (b.1 - b.0);
        let lo = a_lo.max(b_lo);
        let hi = a_hi.min(b_hi);
        if hi > lo {
            total += hi - lo;
        }
    }
    total
}
