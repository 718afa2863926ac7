//! JSON configuration schema. Unknown keys are rejected everywhere and every
//! numeric range is enforced before any computation starts.

use nonscatter::density::HerglotzDensity;
use nonscatter::geometry::RadiusFunction;
use nonscatter::oracle::QuadratureConfig;
use nonscatter::{Complex, Vec2};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Config {
    /// Index of refraction, q > 1.
    pub q: f64,
    pub domain: DomainSpec,
    /// Required by subcommands that evaluate integrals or densities.
    #[serde(default)]
    pub density: Option<DensitySpec>,
    #[serde(default)]
    pub k_grid: KGrid,
    /// Number of observation directions (equispaced on [0, 2*pi)).
    #[serde(default = "default_eta_grid")]
    pub eta_grid: usize,
    #[serde(default)]
    pub quadrature: QuadratureSettings,
    #[serde(default)]
    pub tolerances: Tolerances,
    #[serde(default)]
    pub output: OutputSpec,
}

fn default_eta_grid() -> usize {
    8
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields, tag = "kind", rename_all = "snake_case")]
pub enum DomainSpec {
    Constant {
        radius: f64,
        #[serde(default)]
        rotation: f64,
    },
    CenteredEllipse {
        a: f64,
        b: f64,
        #[serde(default)]
        rotation: f64,
    },
    OffsetDisk {
        r0: f64,
        x0: [f64; 2],
        #[serde(default)]
        rotation: f64,
    },
    FocalEllipse {
        a: f64,
        e: f64,
        #[serde(default)]
        rotation: f64,
    },
    LogFourier {
        #[serde(default)]
        cos: Vec<f64>,
        #[serde(default)]
        sin: Vec<f64>,
        #[serde(default)]
        rotation: f64,
    },
    PiecewiseEgg {
        amplitude: f64,
        mask: Vec<[f64; 2]>,
        #[serde(default)]
        rotation: f64,
    },
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields, tag = "kind", rename_all = "snake_case")]
pub enum DensitySpec {
    /// Finite complex Fourier series: phi = sum c_n e^{i n theta}.
    Fourier { coefficients: Vec<FourierCoefficient> },
    /// Equispaced samples of phi over [0, 2*pi), at least 16.
    Tabulated { samples: Vec<[f64; 2]> },
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FourierCoefficient {
    pub n: i32,
    pub re: f64,
    #[serde(default)]
    pub im: f64,
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct KGrid {
    pub min: f64,
    pub max: f64,
    pub count: usize,
}

impl Default for KGrid {
    fn default() -> Self {
        KGrid { min: 20.0, max: 80.0, count: 3 }
    }
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QuadratureSettings {
    #[serde(default = "default_min_nodes")]
    pub min_nodes: usize,
    #[serde(default = "default_npw")]
    pub nodes_per_wavelength: f64,
}

fn default_min_nodes() -> usize {
    64
}
fn default_npw() -> f64 {
    10.0
}

impl Default for QuadratureSettings {
    fn default() -> Self {
        QuadratureSettings { min_nodes: 64, nodes_per_wavelength: 10.0 }
    }
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Tolerances {
    #[serde(default = "default_lambda_tol")]
    pub lambda_tol: f64,
    #[serde(default = "default_root_tol")]
    pub root_tol: f64,
}

fn default_lambda_tol() -> f64 {
    1e-8
}
fn default_root_tol() -> f64 {
    1e-12
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances { lambda_tol: 1e-8, root_tol: 1e-12 }
    }
}

#[derive(Debug, Clone, Deserialize, Serialize, Default)]
#[serde(deny_unknown_fields)]
pub struct OutputSpec {
    #[serde(default)]
    pub format: OutputFormat,
    /// Output file; stdout when absent.
    #[serde(default)]
    pub path: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, Serialize, Default, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    #[default]
    Csv,
    Json,
}

/// A configuration error destined for exit code 2.
#[derive(Debug)]
pub struct ConfigError(pub String);

impl std::fmt::Display for ConfigError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl Config {
    pub fn load(path: &str) -> Result<Config, ConfigError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| ConfigError(format!("cannot read config {path}: {e}")))?;
        let cfg: Config = serde_json::from_str(&text).map_err(|e| {
            ConfigError(format!(
                "config parse error at line {}, column {}: {e}",
                e.line(),
                e.column()
            ))
        })?;
        cfg.validate()?;
        Ok(cfg)
    }

    fn validate(&self) -> Result<(), ConfigError> {
        if !(self.q > 1.0) || !self.q.is_finite() {
            return Err(ConfigError(format!(
                "q must satisfy q > 1 (the 0 < q < 1 branch is unsupported), got {}",
                self.q
            )));
        }
        if self.k_grid.count == 0 || !(self.k_grid.min > 0.0) || self.k_grid.max < self.k_grid.min
        {
            return Err(ConfigError(format!(
                "k_grid must satisfy 0 < min <= max with count >= 1, got {:?}",
                self.k_grid
            )));
        }
        if self.eta_grid == 0 {
            return Err(ConfigError("eta_grid must be at least 1".into()));
        }
        if self.quadrature.min_nodes < 64 || self.quadrature.min_nodes % 2 != 0 {
            return Err(ConfigError(format!(
                "quadrature.min_nodes must be even and >= 64, got {}",
                self.quadrature.min_nodes
            )));
        }
        if !(self.quadrature.nodes_per_wavelength >= 2.0) {
            return Err(ConfigError(format!(
                "quadrature.nodes_per_wavelength must be at least 2, got {}",
                self.quadrature.nodes_per_wavelength
            )));
        }
        if !(self.tolerances.lambda_tol > 0.0 && self.tolerances.lambda_tol < 0.1) {
            return Err(ConfigError(format!(
                "tolerances.lambda_tol must lie in (0, 0.1), got {}",
                self.tolerances.lambda_tol
            )));
        }
        if !(self.tolerances.root_tol > 0.0 && self.tolerances.root_tol <= 1e-6) {
            return Err(ConfigError(format!(
                "tolerances.root_tol must lie in (0, 1e-6], got {}",
                self.tolerances.root_tol
            )));
        }
        Ok(())
    }

    pub fn domain(&self) -> Result<RadiusFunction, ConfigError> {
        let wrap = |r: nonscatter::Result<RadiusFunction>| {
            r.map_err(|e| ConfigError(format!("invalid domain: {e}")))
        };
        let (rf, rotation) = match &self.domain {
            DomainSpec::Constant { radius, rotation } => {
                (wrap(RadiusFunction::constant(*radius))?, *rotation)
            }
            DomainSpec::CenteredEllipse { a, b, rotation } => {
                (wrap(RadiusFunction::centered_ellipse(*a, *b))?, *rotation)
            }
            DomainSpec::OffsetDisk { r0, x0, rotation } => {
                (wrap(RadiusFunction::offset_disk(*r0, Vec2::new(x0[0], x0[1])))?, *rotation)
            }
            DomainSpec::FocalEllipse { a, e, rotation } => {
                (wrap(RadiusFunction::focal_ellipse(*a, *e))?, *rotation)
            }
            DomainSpec::LogFourier { cos, sin, rotation } => {
                (wrap(RadiusFunction::log_fourier(cos.clone(), sin.clone()))?, *rotation)
            }
            DomainSpec::PiecewiseEgg { amplitude, mask, rotation } => (
                wrap(RadiusFunction::piecewise_egg(
                    *amplitude,
                    mask.iter().map(|m| (m[0], m[1])).collect(),
                ))?,
                *rotation,
            ),
        };
        Ok(if rotation == 0.0 { rf } else { rf.rotated(rotation) })
    }

    pub fn density(&self) -> Result<HerglotzDensity, ConfigError> {
        let spec = self.density.as_ref().ok_or_else(|| {
            ConfigError("this subcommand needs a density entry in the config".into())
        })?;
        match spec {
            DensitySpec::Fourier { coefficients } => HerglotzDensity::fourier(
                coefficients
                    .iter()
                    .map(|c| (c.n, Complex::new(c.re, c.im)))
                    .collect(),
            ),
            DensitySpec::Tabulated { samples } => {
                let samples: Vec<Complex> =
                    samples.iter().map(|s| Complex::new(s[0], s[1])).collect();
                HerglotzDensity::tabulated(&samples)
            }
        }
        .map_err(|e| ConfigError(format!("invalid density: {e}")))
    }

    pub fn k_values(&self) -> Vec<f64> {
        linspace(self.k_grid.min, self.k_grid.max, self.k_grid.count)
    }

    /// Geometric spacing, for decay probes along doubling-style ladders.
    pub fn k_values_geometric(&self) -> Vec<f64> {
        let KGrid { min, max, count } = self.k_grid;
        if count == 1 || min == max {
            return vec![min];
        }
        let ratio = (max / min).powf(1.0 / (count as f64 - 1.0));
        (0..count).map(|i| min * ratio.powi(i as i32)).collect()
    }

    pub fn eta_values(&self) -> Vec<f64> {
        (0..self.eta_grid)
            .map(|i| std::f64::consts::TAU * i as f64 / self.eta_grid as f64)
            .collect()
    }

    pub fn quadrature_config(&self) -> QuadratureConfig {
        QuadratureConfig {
            min_nodes: self.quadrature.min_nodes,
            nodes_per_wavelength: self.quadrature.nodes_per_wavelength,
        }
    }
}

pub fn linspace(min: f64, max: f64, count: usize) -> Vec<f64> {
    if count == 1 {
        return vec![min];
    }
    (0..count)
        .map(|i| min + (max - min) * i as f64 / (count as f64 - 1.0))
        .collect()
}
