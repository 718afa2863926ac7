//! One function per subcommand. Each returns the artifact to emit; error
//! mapping to exit codes happens in main.

use crate::config::{Config, ConfigError};
use crate::output::{Cell, Table};
use nonscatter::asymptotics::{
    self, lambda_set, leading_order, vandermonde_classify, VandermondeClass,
};
use nonscatter::oracle::{self, QuadratureSpec};
use nonscatter::stationary::maps::{compose_iterate, MapFlavor, MapStep};
use nonscatter::stationary::{stationary_set, StationaryPoint};
use nonscatter::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub struct AppError {
    pub code: i32,
    pub message: String,
}

impl From<ConfigError> for AppError {
    fn from(e: ConfigError) -> Self {
        AppError { code: 2, message: e.0 }
    }
}

impl From<nonscatter::Error> for AppError {
    fn from(e: nonscatter::Error) -> Self {
        AppError { code: if e.is_user_error() { 2 } else { 3 }, message: e.to_string() }
    }
}

fn float(v: f64) -> Cell {
    Cell::Float(v)
}

/// `check`: hypothesis report as JSON.
pub fn check(cfg: &Config) -> Result<nonscatter::geometry::HypothesisReport, AppError> {
    let rf = cfg.domain()?;
    Ok(nonscatter::geometry::check_hypotheses(&rf, cfg.q)?)
}

fn push_point_row(table: &mut Table, eta: f64, pt: &StationaryPoint) {
    table.push(vec![
        float(eta),
        Cell::Int(pt.j as i64),
        Cell::Int(pt.l as i64),
        float(pt.theta),
        float(pt.theta_xi),
        float(pt.psi),
        float(pt.amplitude),
        float(pt.det),
        Cell::Int(pt.signature as i64),
        float(pt.f),
    ]);
}

/// `stationary`: four rows per observation direction.
pub fn stationary(cfg: &Config, eta: Option<f64>) -> Result<Table, AppError> {
    let rf = cfg.domain()?;
    let mut table = Table::new(vec![
        "eta_theta",
        "j",
        "l",
        "theta",
        "theta_xi",
        "psi",
        "amplitude",
        "det",
        "signature",
        "f",
    ]);
    let etas = match eta {
        Some(e) => vec![e],
        None => cfg.eta_values(),
    };
    for e in etas {
        for pt in stationary_set(&rf, cfg.q, e)? {
            push_point_row(&mut table, e, &pt);
        }
    }
    Ok(table)
}

/// `leading`: leading-order values per (k, eta).
pub fn leading(
    cfg: &Config,
    eta: Option<f64>,
    k: Option<f64>,
    n_power: u32,
) -> Result<Table, AppError> {
    let rf = cfg.domain()?;
    let phi = cfg.density()?;
    let mut table = Table::new(vec!["k", "eta_theta", "re", "im"]);
    let ks = k.map(|v| vec![v]).unwrap_or_else(|| cfg.k_values());
    let etas = eta.map(|v| vec![v]).unwrap_or_else(|| cfg.eta_values());
    for &kv in &ks {
        for &e in &etas {
            let v = leading_order(&rf, cfg.q, &phi, e, kv, n_power)?;
            table.push(vec![float(kv), float(e), float(v.re), float(v.im)]);
        }
    }
    Ok(table)
}

/// `integral`: brute-force oracle values per (k, eta).
pub fn integral(cfg: &Config, eta: Option<f64>, k: Option<f64>) -> Result<Table, AppError> {
    let rf = cfg.domain()?;
    let phi = cfg.density()?;
    let quad = cfg.quadrature_config();
    let mut table = Table::new(vec!["k", "eta_theta", "re", "im", "converged"]);
    let ks = k.map(|v| vec![v]).unwrap_or_else(|| cfg.k_values());
    let etas = eta.map(|v| vec![v]).unwrap_or_else(|| cfg.eta_values());
    for &kv in &ks {
        let spec = QuadratureSpec::auto(&rf, cfg.q, kv, &quad)?;
        let values = oracle::integral_i_multi(&rf, cfg.q, &phi, &etas, kv, spec)?;
        for (&e, v) in etas.iter().zip(values.iter()) {
            table.push(vec![
                float(kv),
                float(e),
                float(v.re),
                float(v.im),
                Cell::Bool(v.converged),
            ]);
        }
    }
    Ok(table)
}

/// `scan`: oracle vs leading order over the full (k, eta) grid.
pub fn scan(cfg: &Config) -> Result<Table, AppError> {
    let rf = cfg.domain()?;
    let phi = cfg.density()?;
    let reports = asymptotics::scan(
        &rf,
        cfg.q,
        &phi,
        &cfg.k_values(),
        &cfg.eta_values(),
        &cfg.quadrature_config(),
    )?;
    let mut table = Table::new(vec![
        "k",
        "eta_theta",
        "oracle_re",
        "oracle_im",
        "leading_re",
        "leading_im",
        "residual",
        "converged",
    ]);
    for r in reports {
        table.push(vec![
            float(r.k),
            float(r.eta_theta),
            float(r.oracle_re),
            float(r.oracle_im),
            float(r.leading_re),
            float(r.leading_im),
            float(r.residual),
            Cell::Bool(r.converged),
        ]);
    }
    Ok(table)
}

/// `decay`: k-scaled residual trend along a geometric k ladder.
pub fn decay(cfg: &Config, eta: Option<f64>) -> Result<Table, AppError> {
    let rf = cfg.domain()?;
    let phi = cfg.density()?;
    let eta = eta.unwrap_or(0.0);
    let report = asymptotics::decay_probe(
        &rf,
        cfg.q,
        &phi,
        eta,
        &cfg.k_values_geometric(),
        &cfg.quadrature_config(),
    )?;
    let mut table = Table::new(vec![
        "k",
        "oracle_re",
        "oracle_im",
        "leading_re",
        "leading_im",
        "residual_times_k",
        "converged",
    ]);
    for r in &report.rows {
        table.push(vec![
            float(r.k),
            float(r.oracle_re),
            float(r.oracle_im),
            float(r.leading_re),
            float(r.leading_im),
            float(r.residual_times_k),
            Cell::Bool(r.converged),
        ]);
    }
    let verdict = match report.verdict {
        Some(true) => "pass",
        Some(false) => "fail",
        None => "insufficient-data",
    };
    table.trailers.push(("verdict".to_string(), verdict.to_string()));
    Ok(table)
}

/// `gmap`: amplitude-ratio functions over a grid of directions.
pub fn gmap(cfg: &Config) -> Result<Table, AppError> {
    let rf = cfg.domain()?;
    let mut table =
        Table::new(vec!["t", "g_11_12", "g_22_21", "g_21_11", "g_11_21"]);
    for t in cfg.eta_values() {
        let g = |p1: (u8, u8), p2: (u8, u8)| asymptotics::g_ratio(&rf, cfg.q, t, p1, p2);
        table.push(vec![
            float(t),
            float(g((1, 1), (1, 2))?),
            float(g((2, 2), (2, 1))?),
            float(g((2, 1), (1, 1))?),
            float(g((1, 1), (2, 1))?),
        ]);
    }
    Ok(table)
}

/// `classify`: Lambda membership and Vandermonde verdicts over directions.
/// With a seed the directions are drawn uniformly at random instead of
/// equispaced.
pub fn classify(cfg: &Config, seed: Option<u64>) -> Result<Table, AppError> {
    let rf = cfg.domain()?;
    let phi = cfg.density()?;
    let etas = match seed {
        None => cfg.eta_values(),
        Some(s) => {
            let mut rng = ChaCha8Rng::seed_from_u64(s);
            (0..cfg.eta_grid)
                .map(|_| rng.gen_range(0.0..std::f64::consts::TAU))
                .collect()
        }
    };
    let mut table = Table::new(vec![
        "eta_theta",
        "f_11",
        "f_12",
        "f_21",
        "f_22",
        "lambda",
        "class",
        "residual",
    ]);
    for e in etas {
        let points = stationary_set(&rf, cfg.q, e)?;
        let lambda = lambda_set(&phi, &points, cfg.tolerances.lambda_tol)?;
        let weights = [points[0].f, points[1].f, points[2].f, points[3].f];
        let amplitudes: [Complex; 4] = std::array::from_fn(|i| {
            let pt = &points[i];
            let in_lambda = lambda.members.contains(&(pt.j, pt.l));
            if in_lambda {
                phi.eval(pt.theta_xi) * pt.amplitude / pt.det.abs().sqrt()
            } else {
                Complex::new(0.0, 0.0)
            }
        });
        let verdict = vandermonde_classify(&weights, &amplitudes);
        let members: Vec<String> =
            lambda.members.iter().map(|(j, l)| format!("{j}{l}")).collect();
        let class = match verdict.class {
            VandermondeClass::AllEqualWeights => "all-equal-weights",
            VandermondeClass::Paired => "paired",
            VandermondeClass::Inconsistent => "inconsistent",
        };
        table.push(vec![
            float(e),
            float(weights[0]),
            float(weights[1]),
            float(weights[2]),
            float(weights[3]),
            Cell::Text(members.join("|")),
            Cell::Text(class.to_string()),
            float(verdict.residual),
        ]);
    }
    Ok(table)
}

/// `disk`: non-scattering wave numbers of the centered disk.
pub fn disk(cfg: &Config, n: u32, k_max: f64) -> Result<Table, AppError> {
    // The disk machinery applies to constant radius functions only.
    let r0 = match cfg.domain()?.kind() {
        nonscatter::geometry::RadiusKind::Constant { radius } => *radius,
        other => {
            return Err(AppError {
                code: 2,
                message: format!(
                    "the disk subcommand needs a constant domain, got {other:?}"
                ),
            })
        }
    };
    let roots = nonscatter::disk::wavenumber_sequence(n, cfg.q, r0, k_max)?;
    let mut table = Table::new(vec!["n", "k", "residual"]);
    for r in roots {
        table.push(vec![Cell::Int(r.n as i64), float(r.k), float(r.residual)]);
    }
    Ok(table)
}

/// `iterate`: orbit of a composition word.
pub fn iterate(cfg: &Config, word: &str, t0: f64, steps: usize) -> Result<Table, AppError> {
    let rf = cfg.domain()?;
    let parsed = parse_word(word)?;
    let flavor = match parsed.flavor {
        WordFlavor::Star => MapFlavor::Star { rf: &rf, q: cfg.q },
        WordFlavor::Ellipse => match rf.kind() {
            nonscatter::geometry::RadiusKind::CenteredEllipse { a, b } => {
                MapFlavor::Ellipse { a: *a, b: *b, q: cfg.q }
            }
            other => {
                return Err(AppError {
                    code: 2,
                    message: format!(
                        "ellipse map tokens need a centered_ellipse domain, got {other:?}"
                    ),
                })
            }
        },
    };
    let orbit = compose_iterate(&flavor, &parsed.steps, t0, steps)?;
    let mut table = Table::new(vec!["step", "t_before", "t_after", "increased", "confined"]);
    for s in orbit {
        table.push(vec![
            Cell::Int(s.index as i64),
            float(s.t_before),
            float(s.t_after),
            Cell::Bool(s.increased),
            Cell::Bool(s.confined),
        ]);
    }
    Ok(table)
}

enum WordFlavor {
    Star,
    Ellipse,
}

struct ParsedWord {
    flavor: WordFlavor,
    steps: Vec<MapStep>,
}

/// Word syntax: comma-separated tokens, applied left to right.
///   t{j}{l}  forward star map      t{j}{l}i  its inverse
///   e{j}     forward ellipse map   e{j}i     its inverse
///   +pi / -pi   half-turn shifts
fn parse_word(word: &str) -> Result<ParsedWord, AppError> {
    let mut steps = Vec::new();
    let mut flavor: Option<WordFlavor> = None;
    let bad = |token: &str| AppError {
        code: 2,
        message: format!(
            "unrecognized word token '{token}'; expected t{{j}}{{l}}[i], e{{j}}[i], +pi or -pi"
        ),
    };
    for token in word.split(',') {
        let token = token.trim();
        match token {
            "+pi" => steps.push(MapStep::ShiftPlusPi),
            "-pi" => steps.push(MapStep::ShiftMinusPi),
            _ => {
                let (body, inverse) = match token.strip_suffix('i') {
                    Some(b) => (b, true),
                    None => (token, false),
                };
                let (digit_str, token_flavor) = if let Some(d) = body.strip_prefix('t') {
                    (d, WordFlavor::Star)
                } else if let Some(d) = body.strip_prefix('e') {
                    (d, WordFlavor::Ellipse)
                } else {
                    return Err(bad(token));
                };
                match (&flavor, &token_flavor) {
                    (Some(WordFlavor::Star), WordFlavor::Ellipse)
                    | (Some(WordFlavor::Ellipse), WordFlavor::Star) => {
                        return Err(AppError {
                            code: 2,
                            message: "a word cannot mix star (t..) and ellipse (e..) tokens"
                                .into(),
                        })
                    }
                    _ => flavor = Some(token_flavor),
                }
                let digits: Vec<u8> = digit_str.bytes().map(|b| b.wrapping_sub(b'0')).collect();
                let (j, l) = match (flavor.as_ref().unwrap(), digits.as_slice()) {
                    (WordFlavor::Star, [j, l]) => (*j, *l),
                    (WordFlavor::Ellipse, [j]) => (*j, 1),
                    _ => return Err(bad(token)),
                };
                steps.push(if inverse {
                    MapStep::Inverse { j, l }
                } else {
                    MapStep::Forward { j, l }
                });
            }
        }
    }
    let flavor = flavor.ok_or_else(|| AppError {
        code: 2,
        message: "word must contain at least one map token".into(),
    })?;
    Ok(ParsedWord { flavor, steps })
}

