//! Centered-disk machinery: Bessel functions of the first kind, the
//! non-scattering determinant from separation of variables, and scanning for
//! the wave numbers at which a disk of constant index q is non-scattering for
//! the single-mode densities e^{-i n theta}.
//!
//! The Bessel routines are implemented here (ascending series for small
//! arguments, Miller backward recurrence with even-order normalization
//! otherwise) so their accuracy is certified by the crate's own recurrence
//! self-tests instead of an environment dependency.

use crate::error::{Error, Result};
use serde::Serialize;

/// Largest supported order.
pub const MAX_ORDER: u32 = 200;
/// Largest supported argument (quadrature cost bounds the useful range).
pub const MAX_ARGUMENT: f64 = 1.0e4;

/// J_n(x) for integer n >= 0, x >= 0.
pub fn bessel_j(n: u32, x: f64) -> Result<f64> {
    let (jn, _) = bessel_j_pair(n, x)?;
    Ok(jn)
}

/// J_n'(x) via the recurrence J_n' = (J_{n-1} - J_{n+1}) / 2, with
/// J_0' = -J_1.
pub fn bessel_j_prime(n: u32, x: f64) -> Result<f64> {
    let (_, jp) = bessel_j_pair(n, x)?;
    Ok(jp)
}

/// (J_n(x), J_n'(x)) in one evaluation.
pub fn bessel_j_pair(n: u32, x: f64) -> Result<(f64, f64)> {
    if n > MAX_ORDER {
        return Err(Error::Range(format!(
            "order {n} exceeds the certified maximum {MAX_ORDER}"
        )));
    }
    if !(x >= 0.0) || !x.is_finite() {
        return Err(Error::Range(format!("argument must be finite and >= 0, got {x}")));
    }
    if x > MAX_ARGUMENT {
        return Err(Error::Range(format!(
            "argument {x} exceeds the certified maximum {MAX_ARGUMENT}"
        )));
    }
    if x == 0.0 {
        let jn = if n == 0 { 1.0 } else { 0.0 };
        // J_0'(0) = 0, J_1'(0) = 1/2, J_n'(0) = 0 for n >= 2.
        let jp = if n == 1 { 0.5 } else { 0.0 };
        return Ok((jn, jp));
    }
    if x < SERIES_CUTOFF {
        let jm1 = if n == 0 { -series_j(1, x) } else { series_j(n - 1, x) };
        let jp1 = series_j(n + 1, x);
        let jn = series_j(n, x);
        Ok((jn, 0.5 * (jm1 - jp1)))
    } else {
        let (jm1, jn, jp1) = miller_triple(n, x);
        let jm1 = if n == 0 { -jp1 } else { jm1 };
        Ok((jn, 0.5 * (jm1 - jp1)))
    }
}

const SERIES_CUTOFF: f64 = 8.0;

/// Ascending power series; safe for x < SERIES_CUTOFF where the largest
/// intermediate term stays below ~150, so cancellation costs at most ~2
/// digits in absolute terms.
fn series_j(n: u32, x: f64) -> f64 {
    let half = 0.5 * x;
    // (x/2)^n / n! accumulated multiplicatively to dodge overflow.
    let mut term = 1.0;
    for i in 1..=n {
        term *= half / i as f64;
        if term == 0.0 {
            return 0.0;
        }
    }
    let mut sum = term;
    let m2 = half * half;
    for m in 1..500u32 {
        term *= -m2 / (m as f64 * (m + n) as f64);
        sum += term;
        if term.abs() < 1e-18 * sum.abs().max(1e-300) {
            break;
        }
    }
    sum
}

/// Miller backward recurrence normalized by J_0 + 2 sum J_{2m} = 1, returning
/// (J_{n-1}, J_n, J_{n+1}); the first slot holds J_1 when n = 0.
fn miller_triple(n: u32, x: f64) -> (f64, f64, f64) {
    let nmax = n.max(x.ceil() as u32);
    // Start enough orders above both n and x for the downward recurrence to
    // wash out the arbitrary seed.
    let start = {
        let s = nmax + (2.0 * x.sqrt()) as u32 + 40;
        if s % 2 == 1 {
            s + 1
        } else {
            s
        }
    };
    let mut jp = 0.0_f64; // J_{m+1}
    let mut jc = 1e-300_f64; // J_m, arbitrary seed at m = start
    let mut norm = 0.0_f64; // accumulates 2 * sum_{m even >= 2} J_m
    let mut out = [0.0_f64; 3];
    let mut m = start;
    loop {
        if m == n + 1 {
            out[2] = jc;
        }
        if m == n {
            out[1] = jc;
        }
        if (n > 0 && m == n - 1) || (n == 0 && m == 1) {
            out[0] = jc;
        }
        if m > 0 && m % 2 == 0 {
            norm += 2.0 * jc;
        }
        if m == 0 {
            break;
        }
        let jm = 2.0 * m as f64 / x * jc - jp; // J_{m-1} from J_m, J_{m+1}
        jp = jc;
        jc = jm;
        // Rescale before overflow; every tracked quantity scales together.
        if jc.abs() > 1e250 {
            jc *= 1e-250;
            jp *= 1e-250;
            norm *= 1e-250;
            for o in &mut out {
                *o *= 1e-250;
            }
        }
        m -= 1;
    }
    norm += jc; // jc now holds the unnormalized J_0
    (out[0] / norm, out[1] / norm, out[2] / norm)
}

/// Cauchy-data matching determinant for the centered disk:
/// d_n(k) = sqrt(q) J_n'(sqrt(q) k R0) J_n(k R0) - J_n'(k R0) J_n(sqrt(q) k R0).
///
/// d_n(k) = 0 exactly when the interior solution c J_n(sqrt(q) k r) e^{i n t}
/// matches the Cauchy data of J_n(k r) e^{i n t} on r = R0, i.e. when the
/// disk is non-scattering for the Herglotz density e^{-i n theta}.
pub fn nonscattering_determinant(n: u32, q: f64, r0: f64, k: f64) -> Result<f64> {
    if !(q > 0.0) || q == 1.0 || !q.is_finite() {
        return Err(Error::UnsupportedParameter(format!(
            "q must be positive and different from 1, got {q}"
        )));
    }
    if !(r0 > 0.0) || !(k > 0.0) {
        return Err(Error::UnsupportedParameter(format!(
            "need r0 > 0 and k > 0, got r0={r0}, k={k}"
        )));
    }
    let sq = q.sqrt();
    let (j_in, jp_in) = bessel_j_pair(n, sq * k * r0)?;
    let (j_out, jp_out) = bessel_j_pair(n, k * r0)?;
    Ok(sq * jp_in * j_out - jp_out * j_in)
}

/// Smallest singular value of the 2x2 Cauchy-data matching matrix
/// [[J_n(sqrt(q) k R0), -J_n(k R0)], [sqrt(q) J_n'(sqrt(q) k R0), -J_n'(k R0)]],
/// normalized by the largest. Vanishes exactly at determinant roots, which
/// realizes the coincidence of disk transmission eigenvalues and
/// non-scattering wave numbers.
pub fn transmission_residual(n: u32, q: f64, r0: f64, k: f64) -> Result<f64> {
    if !(q > 0.0) || q == 1.0 || !(r0 > 0.0) || !(k > 0.0) {
        return Err(Error::UnsupportedParameter(
            "transmission residual needs q > 0, q != 1, r0 > 0, k > 0".into(),
        ));
    }
    let sq = q.sqrt();
    let (j_in, jp_in) = bessel_j_pair(n, sq * k * r0)?;
    let (j_out, jp_out) = bessel_j_pair(n, k * r0)?;
    let (a, b, c, d) = (j_in, -j_out, sq * jp_in, -jp_out);
    // Closed-form singular values of a 2x2 matrix.
    let g1 = a * a + b * b + c * c + d * d;
    let det = a * d - b * c;
    let g2 = ((a * a + b * b - c * c - d * d).powi(2) + 4.0 * (a * c + b * d).powi(2)).sqrt();
    let s_max = (0.5 * (g1 + g2)).max(0.0).sqrt();
    if s_max == 0.0 {
        return Ok(0.0);
    }
    let s_min = det.abs() / s_max;
    Ok(s_min / s_max)
}

/// One root of the non-scattering determinant.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct WaveNumberRoot {
    pub n: u32,
    pub k: f64,
    /// Determinant value at the reported root.
    pub residual: f64,
    /// Sign-change bracket that produced the root.
    pub bracket: (f64, f64),
}

/// All determinant roots in (0, k_max], each bisected to 1e-12.
///
/// The scan step is 0.01 * (2*pi / (sqrt(q) R0)), well below the asymptotic
/// root spacing, so a sign change cannot straddle two roots.
pub fn wavenumber_sequence(n: u32, q: f64, r0: f64, k_max: f64) -> Result<Vec<WaveNumberRoot>> {
    if !(k_max > 0.0) || k_max > 500.0 {
        return Err(Error::UnsupportedParameter(format!(
            "k_max must lie in (0, 500], got {k_max}"
        )));
    }
    let step = 0.01 * std::f64::consts::TAU / (q.sqrt() * r0);
    let mut roots = Vec::new();
    let mut k_prev = step.min(k_max);
    let mut d_prev = nonscattering_determinant(n, q, r0, k_prev)?;
    while k_prev < k_max {
        let k_curr = (k_prev + step).min(k_max);
        let d_curr = nonscattering_determinant(n, q, r0, k_curr)?;
        if d_prev != 0.0 && d_curr != 0.0 && d_prev.signum() != d_curr.signum() {
            let (mut lo, mut hi) = (k_prev, k_curr);
            let mut f_lo = d_prev;
            for _ in 0..80 {
                if hi - lo < 1e-13 {
                    break;
                }
                let mid = 0.5 * (lo + hi);
                let f_mid = nonscattering_determinant(n, q, r0, mid)?;
                if f_mid == 0.0 {
                    lo = mid;
                    hi = mid;
                    break;
                }
                if f_mid.signum() == f_lo.signum() {
                    lo = mid;
                    f_lo = f_mid;
                } else {
                    hi = mid;
                }
            }
            let root = 0.5 * (lo + hi);
            roots.push(WaveNumberRoot {
                n,
                k: root,
                residual: nonscattering_determinant(n, q, r0, root)?,
                bracket: (k_prev, k_curr),
            });
        }
        k_prev = k_curr;
        d_prev = d_curr;
    }
    Ok(roots)
}
