//! Cross-module property tests: invariants that tie the stationary-point
//! machinery, the asymptotics and the oracle together on randomized inputs.
//! The heavier acceptance-grade sweeps live in the CLI crate's acceptance
//! suite; these are the fast development-loop versions.

use nonscatter::angles::TWO_PI;
use nonscatter::asymptotics::{self, leading_order};
use nonscatter::density::HerglotzDensity;
use nonscatter::geometry::RadiusFunction;
use nonscatter::oracle::{integral_i, QuadratureConfig, QuadratureSpec};
use nonscatter::stationary::{
    branch_interval, solve_t, stationary_set, t_derivative, theta_q,
};
use nonscatter::{Complex, Vec2};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::PI;

fn admissible_pool() -> Vec<(&'static str, RadiusFunction)> {
    vec![
        ("circle", RadiusFunction::constant(1.0).unwrap()),
        ("ellipse-1.2", RadiusFunction::centered_ellipse(1.2, 1.0).unwrap()),
        ("ellipse-1.1", RadiusFunction::centered_ellipse(1.1, 1.0).unwrap()),
        ("offset-disk", RadiusFunction::offset_disk(1.0, Vec2::new(0.5, 0.0)).unwrap()),
        ("egg", RadiusFunction::egg(0.02).unwrap()),
    ]
}

#[test]
fn branch_confinement_over_random_directions() {
    let rf = RadiusFunction::offset_disk(1.0, Vec2::new(0.5, 0.0)).unwrap();
    let q = 4.0;
    let tq = theta_q(q).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(101);
    for _ in 0..1000 {
        let eta: f64 = rng.gen_range(0.0..TWO_PI);
        for (j, l) in [(1u8, 1u8), (1, 2), (2, 1), (2, 2)] {
            let theta = solve_t(&rf, q, eta, j, l).unwrap();
            let eta_l = eta + (l as f64 - 1.0) * PI;
            let (lo, hi) = branch_interval(q, j).unwrap();
            // Reduce theta - eta_l to the representative near the branch
            // center.
            let center = if j == 1 { 0.0 } else { PI };
            let offset = nonscatter::angles::wrap_near(theta - eta_l, center);
            assert!(
                offset > lo - 1e-12 && offset < hi + 1e-12,
                "offset {offset} outside ({lo}, {hi}) with theta_q = {tq}"
            );
        }
    }
}

#[test]
fn monotone_bijectivity_of_the_branch_maps() {
    // Over 128 equispaced directions the solved angles increase strictly and
    // wrap by exactly one full turn.
    let rf = RadiusFunction::centered_ellipse(1.2, 1.0).unwrap();
    let q = 4.0;
    for (j, l) in [(1u8, 1u8), (1, 2), (2, 1), (2, 2)] {
        let n = 128;
        let mut lift = Vec::with_capacity(n + 1);
        let mut prev: Option<f64> = None;
        for i in 0..=n {
            let eta = TWO_PI * i as f64 / n as f64;
            let theta = solve_t(&rf, q, eta, j, l).unwrap();
            let value = match prev {
                None => theta,
                Some(p) => {
                    // Unwrap against the previous lift.
                    let mut v = theta;
                    while v < p - 1e-9 {
                        v += TWO_PI;
                    }
                    v
                }
            };
            if let Some(p) = prev {
                assert!(value > p, "(j={j}, l={l}): lift not increasing at i={i}");
            }
            lift.push(value);
            prev = Some(value);
        }
        let total = lift[n] - lift[0];
        assert!(
            (total - TWO_PI).abs() < 1e-9,
            "(j={j}, l={l}): total winding {total}"
        );
    }
}

#[test]
fn amplitude_never_vanishes_at_stationary_points() {
    // |Psi| = (q-1) rho / |sqrt(q) cos t + 1| >= (q-1) rho / (sqrt(q)+1); we
    // assert half that bound to leave rounding room.
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for (_, rf) in admissible_pool() {
        for &q in &[2.0, 4.0] {
            for _ in 0..50 {
                let eta: f64 = rng.gen_range(0.0..TWO_PI);
                for pt in stationary_set(&rf, q, eta).unwrap() {
                    let rho = rf.rho(pt.theta);
                    let bound = 0.5 * (q - 1.0) * rho / (q.sqrt() + 1.0);
                    assert!(
                        pt.amplitude.abs() > bound,
                        "Psi = {} below bound {bound}",
                        pt.amplitude
                    );
                    // Amplitude identity against the phase value.
                    assert!(
                        (pt.amplitude - (q - 1.0) * rho * rho / pt.psi).abs()
                            < 1e-10 * (1.0 + pt.amplitude.abs()),
                        "identity violated"
                    );
                }
            }
        }
    }
}

#[test]
fn t_derivative_matches_finite_differences_everywhere() {
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    let h = 1e-5;
    for (name, rf) in admissible_pool() {
        let q = 4.0;
        for _ in 0..25 {
            let eta: f64 = rng.gen_range(0.0..TWO_PI);
            for (j, l) in [(1u8, 1u8), (2, 2)] {
                let d = t_derivative(&rf, q, eta, j, l).unwrap();
                assert!(d > 0.0, "{name}: derivative must be positive");
                let tp = solve_t(&rf, q, eta + h, j, l).unwrap();
                let tm = solve_t(&rf, q, eta - h, j, l).unwrap();
                let mut diff = tp - tm;
                while diff < -PI {
                    diff += TWO_PI;
                }
                while diff > PI {
                    diff -= TWO_PI;
                }
                let fd = diff / (2.0 * h);
                assert!(
                    (d - fd).abs() / d.abs() < 1e-5,
                    "{name} (j={j}, l={l}) at eta={eta}: {d} vs fd {fd}"
                );
            }
        }
    }
}

#[test]
fn leading_order_is_rotation_invariant() {
    let rf = RadiusFunction::offset_disk(1.0, Vec2::new(0.5, 0.0)).unwrap();
    let phi = HerglotzDensity::fourier(vec![
        (0, Complex::new(0.4, 0.0)),
        (-1, Complex::new(1.0, -0.3)),
        (2, Complex::new(0.2, 0.1)),
    ])
    .unwrap();
    let (q, k) = (4.0, 25.0);
    for alpha in [0.4, 1.9, 3.3] {
        let base = leading_order(&rf, q, &phi, 0.7, k, 0).unwrap();
        let rot =
            leading_order(&rf.rotated(alpha), q, &phi.rotated(alpha), 0.7 + alpha, k, 0).unwrap();
        assert!(
            (base - rot).norm() < 1e-9 * (1.0 + base.norm()),
            "alpha={alpha}: {base:?} vs {rot:?}"
        );
    }
}

#[test]
fn ellipse_first_derivative_leading_order_matches_oracle() {
    // Differentiated asymptotics against the spectrally differentiated
    // oracle at a moderate wave number.
    let (a, b, q) = (1.2, 1.0, 4.0);
    let rf = RadiusFunction::centered_ellipse(a, b).unwrap();
    let phi = HerglotzDensity::mode(-1);
    let k = 60.0;
    let spec = QuadratureSpec::auto(&rf, q, k, &QuadratureConfig::default()).unwrap();
    let n_eta = 512;
    let grid = nonscatter::oracle::integral_i_n(&rf, q, &phi, n_eta, k, 1, spec).unwrap();
    assert!(grid.converged);
    // Grid node closest to 0.7.
    let idx = (0.7 / TWO_PI * n_eta as f64).round() as usize;
    let eta = grid.eta_thetas[idx];
    let lead = leading_order(&rf, q, &phi, eta, k, 1).unwrap();
    let rel = (grid.values[idx] - lead).norm() / lead.norm();
    assert!(rel < 0.15, "relative deviation {rel}");
}

#[test]
fn decay_probe_trends_to_zero() {
    let cfg = QuadratureConfig::default();
    let circle = RadiusFunction::constant(1.0).unwrap();
    let rep = asymptotics::decay_probe(&circle, 4.0, &HerglotzDensity::one(), 0.0, &[
        20.0, 40.0, 80.0,
    ], &cfg)
    .unwrap();
    assert_eq!(rep.verdict, Some(true), "rows: {:?}", rep.rows);

    let ellipse = RadiusFunction::centered_ellipse(1.2, 1.0).unwrap();
    let rep = asymptotics::decay_probe(&ellipse, 4.0, &HerglotzDensity::mode(-1), 0.7, &[
        20.0, 40.0, 80.0,
    ], &cfg)
    .unwrap();
    assert_eq!(rep.verdict, Some(true), "rows: {:?}", rep.rows);
}

#[test]
fn disk_roots_are_nonscattering_for_the_oracle() {
    // Light version of the constructive check: first root of the n = 1
    // determinant, two observation directions.
    let (n, q, r0) = (1u32, 4.0, 1.0);
    let roots = nonscatter::disk::wavenumber_sequence(n, q, r0, 8.0).unwrap();
    assert!(!roots.is_empty());
    let k_star = roots[0].k;
    let rf = RadiusFunction::constant(r0).unwrap();
    let phi = HerglotzDensity::mode(-(n as i32));
    for eta in [0.0, 1.1] {
        let spec = QuadratureSpec::auto(&rf, q, k_star, &QuadratureConfig::default()).unwrap();
        let at_root = integral_i(&rf, q, &phi, eta, k_star, spec).unwrap();
        let nearby = integral_i(&rf, q, &phi, eta, k_star + 0.5, spec).unwrap();
        assert!(at_root.converged);
        assert!(
            at_root.value().norm() < 1e-6 * nearby.value().norm(),
            "at root {:e} vs nearby {:e}",
            at_root.value().norm(),
            nearby.value().norm()
        );
    }
}
