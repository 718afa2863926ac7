//! Brute-force evaluation of the non-scattering integrals — the independent
//! ground truth against which every stationary-phase claim is validated.
//!
//! The boundary form is
//!   I(k; eta) = int int Psi_eta(theta, theta_xi) phi(xi)
//!               e^{i k (sqrt(q) eta + xi) . y(theta)} d theta_xi d theta,
//! with Psi_eta = -(sqrt(q) eta - xi) . y'(theta)^perp, discretized by the
//! tensor-product periodic trapezoid rule (spectrally accurate for smooth
//! periodic integrands). An independent area-form route integrates
//! i k (q - 1) int_Omega e^{i k sqrt(q) eta . x} H[k, phi](x) dx in polar
//! coordinates with the radial integral in closed form; the two routes must
//! agree within quadrature tolerance.
//!
//! Every evaluation runs at the requested resolution and at doubled nodes;
//! the doubled value is reported together with a convergence flag instead of
//! an error, so scans can keep going and mark bad rows.

use crate::angles::TWO_PI;
use crate::density::HerglotzDensity;
use crate::error::{Error, Result};
use crate::geometry::RadiusFunction;
use crate::vec2::Vec2;
use crate::Complex;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

/// Relative node-doubling tolerance below which a value counts as converged.
pub const CONVERGENCE_TOL: f64 = 1e-8;

/// Tunable quadrature policy (surfaced in the CLI config).
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct QuadratureConfig {
    /// Floor for both node counts.
    pub min_nodes: usize,
    /// Nodes per wavelength across the domain diameter.
    pub nodes_per_wavelength: f64,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        QuadratureConfig { min_nodes: 64, nodes_per_wavelength: 10.0 }
    }
}

/// Resolved node counts for one evaluation.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct QuadratureSpec {
    pub nodes_theta: usize,
    pub nodes_xi: usize,
}

impl QuadratureSpec {
    pub fn new(nodes_theta: usize, nodes_xi: usize) -> Result<Self> {
        for n in [nodes_theta, nodes_xi] {
            if n < 64 || n % 2 != 0 {
                return Err(Error::InvalidArgument(format!(
                    "node counts must be even and >= 64, got {n}"
                )));
            }
            if n > 32768 {
                return Err(Error::InvalidArgument(format!(
                    "node count {n} exceeds the supported maximum 32768"
                )));
            }
        }
        Ok(QuadratureSpec { nodes_theta, nodes_xi })
    }

    /// Apply the adaptivity rule
    /// nodes >= max(min_nodes, ceil(npw * k * diameter)) with diameter
    /// 2 max rho, sharpened by the combined oscillation factor
    /// (sqrt(q) + 1)/2 of the phase.
    pub fn auto(rf: &RadiusFunction, q: f64, k: f64, cfg: &QuadratureConfig) -> Result<Self> {
        if !(k > 0.0) || !k.is_finite() {
            return Err(Error::InvalidArgument(format!("wave number must be positive, got {k}")));
        }
        let diameter = 2.0 * rf.max_rho();
        let oscillation = 0.5 * (q.sqrt() + 1.0);
        let mut n = (cfg.nodes_per_wavelength * k * diameter * oscillation).ceil() as usize;
        n = n.max(cfg.min_nodes).max(64);
        n += n % 2;
        QuadratureSpec::new(n, n)
    }
}

/// One oracle value with its convergence diagnostic.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct IntegralValue {
    pub re: f64,
    pub im: f64,
    /// Node-doubling self-check passed.
    pub converged: bool,
    /// L1-type amplitude scale of the integral, for relative comparisons.
    pub scale: f64,
}

impl IntegralValue {
    pub fn value(&self) -> Complex {
        Complex::new(self.re, self.im)
    }
}

/// Deterministic pairwise summation (fixed tree, independent of threading).
pub fn pairwise_sum(v: &[Complex]) -> Complex {
    if v.len() <= 16 {
        let mut s = Complex::new(0.0, 0.0);
        for x in v {
            s += x;
        }
        return s;
    }
    let mid = v.len() / 2;
    pairwise_sum(&v[..mid]) + pairwise_sum(&v[mid..])
}

/// Per-theta data with the xi sums already folded in; independent of eta, so
/// one pass serves any number of observation directions at the same k.
struct BoundaryRows {
    weight: f64, // (2 pi / n_theta) * (2 pi / n_xi)
    y: Vec<Vec2>,
    y1: Vec<Vec2>,
    y1_perp: Vec<Vec2>,
    /// sum_j phi_j e^{i k xi_j . y_i}
    s0: Vec<Complex>,
    /// sum_j (xi_j . y1_perp_i) phi_j e^{i k xi_j . y_i}
    s1: Vec<Complex>,
    /// (2 pi / n_theta) sum_i |y1_i| and (2 pi / n_xi) sum_j |phi_j|.
    l1_boundary: f64,
    l1_density: f64,
}

fn boundary_rows(
    rf: &RadiusFunction,
    phi: &HerglotzDensity,
    k: f64,
    nodes_theta: usize,
    nodes_xi: usize,
) -> Result<BoundaryRows> {
    let h_theta = TWO_PI / nodes_theta as f64;
    let h_xi = TWO_PI / nodes_xi as f64;
    let xi_cos: Vec<f64> = (0..nodes_xi).map(|j| (h_xi * j as f64).cos()).collect();
    let xi_sin: Vec<f64> = (0..nodes_xi).map(|j| (h_xi * j as f64).sin()).collect();
    let phi_vals: Vec<Complex> = (0..nodes_xi).map(|j| phi.eval(h_xi * j as f64)).collect();

    let jets: Vec<_> = (0..nodes_theta)
        .map(|i| rf.jet(h_theta * i as f64))
        .collect::<Result<Vec<_>>>()?;

    // The O(n_theta * n_xi) pass, parallel over theta rows; each row is a
    // sequential fold so the result does not depend on the thread schedule.
    let sums: Vec<(Complex, Complex)> = jets
        .par_iter()
        .map(|jet| {
            let y = jet.y;
            let p = jet.y1.perp();
            let mut s0 = Complex::new(0.0, 0.0);
            let mut s1 = Complex::new(0.0, 0.0);
            for j in 0..nodes_xi {
                let phase = k * (xi_cos[j] * y.x + xi_sin[j] * y.y);
                let (sin_p, cos_p) = phase.sin_cos();
                let e = Complex::new(cos_p, sin_p);
                let w = phi_vals[j] * e;
                s0 += w;
                s1 += w * (xi_cos[j] * p.x + xi_sin[j] * p.y);
            }
            (s0, s1)
        })
        .collect();

    let l1_boundary = h_theta * jets.iter().map(|j| j.y1.norm()).sum::<f64>();
    let l1_density = h_xi * phi_vals.iter().map(|c| c.norm()).sum::<f64>();
    Ok(BoundaryRows {
        weight: h_theta * h_xi,
        y: jets.iter().map(|j| j.y).collect(),
        y1: jets.iter().map(|j| j.y1).collect(),
        y1_perp: jets.iter().map(|j| j.y1.perp()).collect(),
        s0: sums.iter().map(|s| s.0).collect(),
        s1: sums.iter().map(|s| s.1).collect(),
        l1_boundary,
        l1_density,
    })
}

impl BoundaryRows {
    /// Assemble I(k; eta) from the eta-independent rows.
    fn assemble(&self, q: f64, k: f64, eta_theta: f64) -> Complex {
        let sq = q.sqrt();
        let eta = Vec2::unit(eta_theta);
        let terms: Vec<Complex> = (0..self.y.len())
            .map(|i| {
                let carrier = k * sq * eta.dot(self.y[i]);
                let (sin_p, cos_p) = carrier.sin_cos();
                let e = Complex::new(cos_p, sin_p);
                // Psi = -sqrt(q) (eta . y1_perp) + xi . y1_perp, folded into
                // the xi sums s0 and s1.
                e * (self.s1[i] - self.s0[i] * (sq * eta.dot(self.y1_perp[i])))
            })
            .collect();
        pairwise_sum(&terms) * self.weight
    }

    /// Assemble the explicit first-derivative integrand
    /// (i k sqrt(q) (eta_perp . y) Psi - sqrt(q) (eta . y')) phi e^{i k psi}.
    fn assemble_d1(&self, q: f64, k: f64, eta_theta: f64) -> Complex {
        let sq = q.sqrt();
        let eta = Vec2::unit(eta_theta);
        let eta_perp = eta.perp();
        let terms: Vec<Complex> = (0..self.y.len())
            .map(|i| {
                let carrier = k * sq * eta.dot(self.y[i]);
                let (sin_p, cos_p) = carrier.sin_cos();
                let e = Complex::new(cos_p, sin_p);
                let psi_row = self.s1[i] - self.s0[i] * (sq * eta.dot(self.y1_perp[i]));
                let ik_sq_w = Complex::new(0.0, k * sq * eta_perp.dot(self.y[i]));
                e * (ik_sq_w * psi_row - self.s0[i] * (sq * eta.dot(self.y1[i])))
            })
            .collect();
        pairwise_sum(&terms) * self.weight
    }

    fn scale(&self, q: f64) -> f64 {
        (q.sqrt() + 1.0) * self.l1_boundary * self.l1_density
    }
}

fn validate_common(q: f64, k: f64) -> Result<()> {
    if !(q > 0.0) || q == 1.0 || !q.is_finite() {
        return Err(Error::UnsupportedParameter(format!(
            "q must be positive and different from 1, got {q}"
        )));
    }
    if !(k > 0.0) || !k.is_finite() {
        return Err(Error::InvalidArgument(format!("wave number must be positive, got {k}")));
    }
    Ok(())
}

/// Boundary-form oracle for a single observation direction.
pub fn integral_i(
    rf: &RadiusFunction,
    q: f64,
    phi: &HerglotzDensity,
    eta_theta: f64,
    k: f64,
    spec: QuadratureSpec,
) -> Result<IntegralValue> {
    Ok(integral_i_multi(rf, q, phi, &[eta_theta], k, spec)?.pop().unwrap())
}

/// Boundary-form oracle for many observation directions at one wave number.
/// The O(n^2) quadrature pass is shared; each extra eta costs O(n).
pub fn integral_i_multi(
    rf: &RadiusFunction,
    q: f64,
    phi: &HerglotzDensity,
    eta_thetas: &[f64],
    k: f64,
    spec: QuadratureSpec,
) -> Result<Vec<IntegralValue>> {
    validate_common(q, k)?;
    let coarse = boundary_rows(rf, phi, k, spec.nodes_theta, spec.nodes_xi)?;
    let fine = boundary_rows(rf, phi, k, 2 * spec.nodes_theta, 2 * spec.nodes_xi)?;
    let scale = fine.scale(q).max(f64::MIN_POSITIVE);
    Ok(eta_thetas
        .iter()
        .map(|&eta| {
            let a = coarse.assemble(q, k, eta);
            let b = fine.assemble(q, k, eta);
            IntegralValue {
                re: b.re,
                im: b.im,
                converged: (a - b).norm() < CONVERGENCE_TOL * scale,
                scale,
            }
        })
        .collect())
}

/// int_0^rho e^{i c r} r dr in closed form (series near c = 0).
fn radial_moment(c: f64, rho: f64) -> Complex {
    let z = c * rho;
    if z.abs() < 1e-4 {
        // sum_m (i c)^m rho^{m+2} / (m! (m+2))
        let ic = Complex::new(0.0, c);
        let mut term = Complex::new(rho * rho, 0.0);
        let mut sum = term / 2.0;
        for m in 1..=5 {
            term *= ic * rho / m as f64;
            sum += term / (m + 2) as f64;
        }
        sum
    } else {
        let e = Complex::new(z.cos(), z.sin());
        (e * Complex::new(-1.0, z) + 1.0) / (-c * c)
    }
}

/// Area-form oracle: i k (q - 1) int_Omega e^{i k sqrt(q) eta . x}
/// H[k, phi](x) dx in polar coordinates, radial integral in closed form.
/// Must agree with [`integral_i`] within combined quadrature tolerance.
pub fn integral_area(
    rf: &RadiusFunction,
    q: f64,
    phi: &HerglotzDensity,
    eta_theta: f64,
    k: f64,
    spec: QuadratureSpec,
) -> Result<IntegralValue> {
    validate_common(q, k)?;
    let eval = |nodes_theta: usize, nodes_xi: usize| -> Result<Complex> {
        let h_theta = TWO_PI / nodes_theta as f64;
        let h_xi = TWO_PI / nodes_xi as f64;
        let sq = q.sqrt();
        let eta = Vec2::unit(eta_theta);
        let xi: Vec<Vec2> = (0..nodes_xi).map(|j| Vec2::unit(h_xi * j as f64)).collect();
        let phi_vals: Vec<Complex> = (0..nodes_xi).map(|j| phi.eval(h_xi * j as f64)).collect();
        let rows: Vec<Complex> = (0..nodes_theta)
            .into_par_iter()
            .map(|i| {
                let t = h_theta * i as f64;
                let dir = Vec2::unit(t);
                let rho = rf.rho(t);
                let mut acc = Complex::new(0.0, 0.0);
                for j in 0..nodes_xi {
                    let v = eta * sq + xi[j];
                    acc += phi_vals[j] * radial_moment(k * v.dot(dir), rho);
                }
                acc
            })
            .collect();
        let raw = pairwise_sum(&rows) * (h_theta * h_xi);
        Ok(Complex::new(0.0, k * (q - 1.0)) * raw)
    };
    let a = eval(spec.nodes_theta, spec.nodes_xi)?;
    let b = eval(2 * spec.nodes_theta, 2 * spec.nodes_xi)?;
    // Use the boundary-form amplitude scale so both routes share one yardstick.
    let rows = boundary_rows(rf, phi, k, 64, 64)?;
    let scale = rows.scale(q).max(f64::MIN_POSITIVE);
    Ok(IntegralValue {
        re: b.re,
        im: b.im,
        converged: (a - b).norm() < CONVERGENCE_TOL * scale,
        scale,
    })
}

/// I^{(N)} on an equispaced eta grid: the oracle evaluated on the grid and
/// differentiated N times in theta_eta by trigonometric differentiation.
#[derive(Debug, Clone)]
pub struct IntegralGrid {
    pub eta_thetas: Vec<f64>,
    pub values: Vec<Complex>,
    pub converged: bool,
    pub scale: f64,
}

pub fn integral_i_n(
    rf: &RadiusFunction,
    q: f64,
    phi: &HerglotzDensity,
    n_eta: usize,
    k: f64,
    n_deriv: u32,
    spec: QuadratureSpec,
) -> Result<IntegralGrid> {
    validate_common(q, k)?;
    let min_nodes = (4 * (n_deriv as usize + 1)).max(64);
    if n_eta < min_nodes || n_eta % 2 != 0 {
        return Err(Error::InvalidArgument(format!(
            "eta grid must be even and at least {min_nodes}, got {n_eta}"
        )));
    }
    let eta_thetas: Vec<f64> = (0..n_eta).map(|i| TWO_PI * i as f64 / n_eta as f64).collect();
    let base = integral_i_multi(rf, q, phi, &eta_thetas, k, spec)?;
    let converged = base.iter().all(|v| v.converged);
    let scale = base.first().map(|v| v.scale).unwrap_or(1.0);
    let samples: Vec<Complex> = base.iter().map(|v| v.value()).collect();

    // Forward DFT (plain O(n^2); grids are small).
    let n = n_eta;
    let mut coeffs = vec![Complex::new(0.0, 0.0); n];
    for (idx, c) in coeffs.iter_mut().enumerate() {
        let mut acc = Complex::new(0.0, 0.0);
        for (m, s) in samples.iter().enumerate() {
            let ang = -TWO_PI * idx as f64 * m as f64 / n as f64;
            acc += s * Complex::new(ang.cos(), ang.sin());
        }
        *c = acc / n as f64;
    }

    // Aliasing probe: energy in the top 20% of frequencies.
    let total: f64 = coeffs.iter().map(|c| c.norm_sqr()).sum();
    let cutoff = (0.4 * n as f64) as usize; // |freq| >= 0.4 n means top fifth
    let tail: f64 = coeffs
        .iter()
        .enumerate()
        .filter(|(idx, _)| {
            let f = signed_freq(*idx, n);
            f.unsigned_abs() as usize >= cutoff
        })
        .map(|(_, c)| c.norm_sqr())
        .sum();
    let noise_floor = (1e-14 * scale).powi(2) * n as f64;
    if total > noise_floor && tail > 1e-8 * total {
        return Err(Error::RefineGrid(format!(
            "spectral tail holds {:.3e} of the energy; enlarge the eta grid",
            tail / total
        )));
    }

    // Differentiate: multiply mode f by (i f)^N; drop the Nyquist mode for
    // odd orders (its sign is ambiguous on an even grid).
    for (idx, c) in coeffs.iter_mut().enumerate() {
        let f = signed_freq(idx, n);
        if n % 2 == 0 && idx == n / 2 && n_deriv % 2 == 1 {
            *c = Complex::new(0.0, 0.0);
        } else {
            *c *= Complex::new(0.0, f as f64).powu(n_deriv);
        }
    }

    // Inverse DFT.
    let mut values = vec![Complex::new(0.0, 0.0); n];
    for (m, v) in values.iter_mut().enumerate() {
        let mut acc = Complex::new(0.0, 0.0);
        for (idx, c) in coeffs.iter().enumerate() {
            let ang = TWO_PI * idx as f64 * m as f64 / n as f64;
            acc += c * Complex::new(ang.cos(), ang.sin());
        }
        *v = acc;
    }
    Ok(IntegralGrid { eta_thetas, values, converged, scale })
}

fn signed_freq(idx: usize, n: usize) -> i64 {
    if idx <= n / 2 {
        idx as i64
    } else {
        idx as i64 - n as i64
    }
}

/// Explicit integrand route for the first eta-derivative, used to cross-check
/// the spectral path.
pub fn integral_i1_explicit(
    rf: &RadiusFunction,
    q: f64,
    phi: &HerglotzDensity,
    eta_theta: f64,
    k: f64,
    spec: QuadratureSpec,
) -> Result<IntegralValue> {
    validate_common(q, k)?;
    let coarse = boundary_rows(rf, phi, k, spec.nodes_theta, spec.nodes_xi)?;
    let fine = boundary_rows(rf, phi, k, 2 * spec.nodes_theta, 2 * spec.nodes_xi)?;
    let a = coarse.assemble_d1(q, k, eta_theta);
    let b = fine.assemble_d1(q, k, eta_theta);
    // The derivative integrand carries an extra k sqrt(q) |y| factor.
    let scale =
        (fine.scale(q) * (1.0 + k * q.sqrt() * rf.max_rho())).max(f64::MIN_POSITIVE);
    Ok(IntegralValue {
        re: b.re,
        im: b.im,
        converged: (a - b).norm() < CONVERGENCE_TOL * scale,
        scale,
    })
}
