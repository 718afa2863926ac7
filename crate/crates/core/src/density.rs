//! Herglotz densities on the unit circle and the waves they generate.
//!
//! A density phi is either a finite complex Fourier series (smooth, and
//! real-analytic by construction) or tabulated equispaced samples converted
//! to a trigonometric interpolant at construction. The Herglotz wave
//! H[k, phi](x) = int phi(xi) e^{i k xi . x} d theta_xi is evaluated by the
//! periodic trapezoid rule with the node count tied to k |x|.

use crate::angles::TWO_PI;
use crate::error::{Error, Result};
use crate::vec2::Vec2;
use crate::Complex;

/// Whether the C^1 / analyticity hypotheses hold structurally.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Analyticity {
    /// Finite Fourier series: entire, hence |phi|^2 real-analytic.
    FiniteSeries,
    /// Tabulated input: smooth interpolant, analyticity of the underlying
    /// data unknown.
    Unknown,
}

/// A complex-valued density on the unit circle.
#[derive(Debug, Clone)]
pub struct HerglotzDensity {
    /// Coefficient of e^{i n theta} per signed frequency n, sorted by n.
    coeffs: Vec<(i32, Complex)>,
    analyticity: Analyticity,
}

impl HerglotzDensity {
    /// Density from a finite Fourier series; duplicate frequencies are
    /// rejected.
    pub fn fourier(coeffs: Vec<(i32, Complex)>) -> Result<Self> {
        let mut coeffs = coeffs;
        coeffs.sort_by_key(|(n, _)| *n);
        for w in coeffs.windows(2) {
            if w[0].0 == w[1].0 {
                return Err(Error::InvalidArgument(format!(
                    "duplicate Fourier frequency {}",
                    w[0].0
                )));
            }
        }
        if coeffs.iter().any(|(_, c)| !c.re.is_finite() || !c.im.is_finite()) {
            return Err(Error::InvalidArgument("non-finite Fourier coefficient".into()));
        }
        Ok(HerglotzDensity { coeffs, analyticity: Analyticity::FiniteSeries })
    }

    /// The constant density phi = 1.
    pub fn one() -> Self {
        Self::fourier(vec![(0, Complex::new(1.0, 0.0))]).unwrap()
    }

    /// The single mode e^{i n theta}.
    pub fn mode(n: i32) -> Self {
        Self::fourier(vec![(n, Complex::new(1.0, 0.0))]).unwrap()
    }

    /// The identically-zero density.
    pub fn zero() -> Self {
        HerglotzDensity { coeffs: Vec::new(), analyticity: Analyticity::FiniteSeries }
    }

    /// Trigonometric interpolant of equispaced samples phi(2 pi m / N).
    ///
    /// At least 16 samples are required. The Nyquist mode of an even sample
    /// count is split between +N/2 and -N/2, which keeps real data real.
    pub fn tabulated(samples: &[Complex]) -> Result<Self> {
        let n = samples.len();
        if n < 16 {
            return Err(Error::InvalidArgument(format!(
                "tabulated densities need at least 16 samples, got {n}"
            )));
        }
        if samples.iter().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
            return Err(Error::InvalidArgument("non-finite sample".into()));
        }
        // Plain DFT; exactness matters here, construction speed does not.
        let mut coeffs = Vec::new();
        let half = n / 2;
        for idx in 0..n {
            let freq = if idx <= half { idx as i32 } else { idx as i32 - n as i32 };
            let mut c = Complex::new(0.0, 0.0);
            for (m, s) in samples.iter().enumerate() {
                let ang = -TWO_PI * (idx as f64) * (m as f64) / (n as f64);
                c += s * Complex::new(ang.cos(), ang.sin());
            }
            c /= n as f64;
            if n % 2 == 0 && idx == half {
                // Split the Nyquist coefficient across +half and -half.
                coeffs.push((freq, 0.5 * c));
                coeffs.push((-freq, 0.5 * c));
            } else {
                coeffs.push((freq, c));
            }
        }
        coeffs.sort_by_key(|(f, _)| *f);
        coeffs.retain(|(_, c)| c.norm() > 0.0);
        Ok(HerglotzDensity { coeffs, analyticity: Analyticity::Unknown })
    }

    pub fn analyticity(&self) -> Analyticity {
        self.analyticity
    }

    pub fn coefficients(&self) -> &[(i32, Complex)] {
        &self.coeffs
    }

    /// Largest frequency in the series.
    pub fn bandwidth(&self) -> i32 {
        self.coeffs.iter().map(|(n, _)| n.abs()).max().unwrap_or(0)
    }

    /// phi(theta) by exact series evaluation.
    pub fn eval(&self, theta_xi: f64) -> Complex {
        let mut v = Complex::new(0.0, 0.0);
        for &(n, c) in &self.coeffs {
            let ang = n as f64 * theta_xi;
            v += c * Complex::new(ang.cos(), ang.sin());
        }
        v
    }

    /// Max of |phi| over a 1024-point grid.
    pub fn sup_norm(&self) -> f64 {
        (0..1024)
            .map(|i| self.eval(TWO_PI * i as f64 / 1024.0).norm())
            .fold(0.0, f64::max)
    }

    /// True when max |phi| over the 1024-grid is positive.
    pub fn is_nontrivial(&self) -> bool {
        self.sup_norm() > 0.0
    }

    /// The rotated density phi(theta - alpha), exact on the coefficients.
    pub fn rotated(&self, alpha: f64) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .map(|&(n, c)| {
                let ang = -(n as f64) * alpha;
                (n, c * Complex::new(ang.cos(), ang.sin()))
            })
            .collect();
        HerglotzDensity { coeffs, analyticity: self.analyticity }
    }

    /// alpha * self + beta * other on the coefficients.
    pub fn linear_combination(&self, alpha: Complex, other: &Self, beta: Complex) -> Self {
        let mut map: std::collections::BTreeMap<i32, Complex> = std::collections::BTreeMap::new();
        for &(n, c) in &self.coeffs {
            *map.entry(n).or_insert(Complex::new(0.0, 0.0)) += alpha * c;
        }
        for &(n, c) in &other.coeffs {
            *map.entry(n).or_insert(Complex::new(0.0, 0.0)) += beta * c;
        }
        let analyticity = match (self.analyticity, other.analyticity) {
            (Analyticity::FiniteSeries, Analyticity::FiniteSeries) => Analyticity::FiniteSeries,
            _ => Analyticity::Unknown,
        };
        HerglotzDensity { coeffs: map.into_iter().collect(), analyticity }
    }
}

/// Node count for the wave quadrature: enough to resolve both the e^{i k xi.x}
/// oscillation and the density's own bandwidth.
fn wave_nodes(phi: &HerglotzDensity, k: f64, x: Vec2) -> usize {
    let oscillation = (8.0 * k * x.norm()).ceil() as usize;
    let band = 4 * phi.bandwidth().unsigned_abs() as usize;
    let n = oscillation.max(band).max(64);
    n + n % 2
}

/// H[k, phi](x) by the periodic trapezoid rule (spectrally accurate).
pub fn herglotz_wave(phi: &HerglotzDensity, k: f64, x: Vec2) -> Result<Complex> {
    if !(k > 0.0) || !k.is_finite() {
        return Err(Error::InvalidArgument(format!("wave number must be positive, got {k}")));
    }
    let n = wave_nodes(phi, k, x);
    let mut vals = Vec::with_capacity(n);
    for j in 0..n {
        let t = TWO_PI * j as f64 / n as f64;
        let phase = k * (x.x * t.cos() + x.y * t.sin());
        vals.push(phi.eval(t) * Complex::new(phase.cos(), phase.sin()));
    }
    Ok(crate::oracle::pairwise_sum(&vals) * (TWO_PI / n as f64))
}

/// | (five-point Laplacian of H at x) + k^2 H(x) |, which for the exact wave
/// decays as O(h^2).
pub fn helmholtz_residual(phi: &HerglotzDensity, k: f64, x: Vec2, h: f64) -> Result<f64> {
    if !(h > 0.0 && h <= 0.1 / k) {
        return Err(Error::InvalidArgument(format!(
            "step must lie in (0, 0.1/k]; got h={h} for k={k}"
        )));
    }
    let c = herglotz_wave(phi, k, x)?;
    let xp = herglotz_wave(phi, k, x + Vec2::new(h, 0.0))?;
    let xm = herglotz_wave(phi, k, x - Vec2::new(h, 0.0))?;
    let yp = herglotz_wave(phi, k, x + Vec2::new(0.0, h))?;
    let ym = herglotz_wave(phi, k, x - Vec2::new(0.0, h))?;
    let lap = (xp + xm + yp + ym - 4.0 * c) / (h * h);
    Ok((lap + k * k * c).norm())
}
