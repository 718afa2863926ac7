//! Acceptance gate: every criterion of the project runs here at its stated
//! tolerance, one test per criterion, each printing a pass line (visible
//! with --nocapture; cargo's own per-test lines mirror them).
//!
//! Criteria 1 and 2 carry wall-clock budgets which are asserted.

use nonscatter::angles::{circular_distance, wrap_near, TWO_PI};
use nonscatter::asymptotics::{
    g_ratio, leading_order, vandermonde_classify, VandermondeClass,
};
use nonscatter::density::HerglotzDensity;
use nonscatter::disk::wavenumber_sequence;
use nonscatter::geometry::{check_hypotheses, max_log_second_derivative, RadiusFunction};
use nonscatter::oracle::{
    integral_area, integral_i, integral_i1_explicit, integral_i_multi, integral_i_n,
    QuadratureConfig, QuadratureSpec,
};
use nonscatter::stationary::{
    branch_interval, closed_form_cos_sin, inverse_t, solve_t, stationary_set, t_derivative,
};
use nonscatter::{Complex, Vec2};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::PI;
use std::time::Instant;

fn pass(n: u32, name: &str) {
    println!("criterion {n} ({name}): PASS");
}

fn auto_spec(rf: &RadiusFunction, q: f64, k: f64) -> QuadratureSpec {
    QuadratureSpec::auto(rf, q, k, &QuadratureConfig::default()).unwrap()
}

/// The admissible test pool: circle, two ellipses, offset disk, egg.
fn domain_pool() -> Vec<(&'static str, RadiusFunction)> {
    vec![
        ("circle", RadiusFunction::constant(1.0).unwrap()),
        ("ellipse-1.2", RadiusFunction::centered_ellipse(1.2, 1.0).unwrap()),
        ("ellipse-1.1", RadiusFunction::centered_ellipse(1.1, 1.0).unwrap()),
        ("offset-disk-s2", RadiusFunction::offset_disk(1.0, Vec2::new(0.5, 0.0)).unwrap()),
        ("egg", RadiusFunction::egg(0.02).unwrap()),
    ]
}

#[test]
fn criterion_01_stationary_phase_validation() {
    let start = Instant::now();
    let cases: Vec<(&str, RadiusFunction, HerglotzDensity)> = vec![
        ("circle", RadiusFunction::constant(1.0).unwrap(), HerglotzDensity::one()),
        (
            "ellipse",
            RadiusFunction::centered_ellipse(1.2, 1.0).unwrap(),
            HerglotzDensity::mode(-1),
        ),
    ];
    let q = 4.0;
    let etas = [0.0, 0.7, 2.1];
    for (name, rf, phi) in &cases {
        let mut scaled = [[0.0f64; 3]; 2];
        for (ki, &k) in [40.0, 80.0].iter().enumerate() {
            let spec = auto_spec(rf, q, k);
            let oracle = integral_i_multi(rf, q, phi, &etas, k, spec).unwrap();
            for (ei, (&eta, ov)) in etas.iter().zip(oracle.iter()).enumerate() {
                assert!(ov.converged, "{name}: oracle unconverged at k={k}");
                let lead = leading_order(rf, q, phi, eta, k, 0).unwrap();
                let rel = (ov.value() - lead).norm() / lead.norm();
                if k == 40.0 {
                    assert!(
                        rel <= 0.2,
                        "{name}, eta={eta}: relative error {rel} at k=40"
                    );
                }
                scaled[ki][ei] = k * (ov.value() - lead).norm();
            }
        }
        for ei in 0..3 {
            assert!(
                scaled[1][ei] <= 0.9 * scaled[0][ei],
                "{name}, eta={}: k-scaled residual {} -> {} misses the 0.9 factor",
                etas[ei],
                scaled[0][ei],
                scaled[1][ei]
            );
        }
    }
    let elapsed = start.elapsed().as_secs_f64();
    assert!(elapsed <= 60.0, "criterion 1 took {elapsed:.1} s (budget 60 s)");
    println!("criterion 1 runtime: {elapsed:.1} s");
    pass(1, "stationary-phase validation");
}

#[test]
fn criterion_02_disk_constructive_check() {
    let start = Instant::now();
    let etas: Vec<f64> = (0..8).map(|i| TWO_PI * i as f64 / 8.0).collect();
    for &(n, q, r0) in &[(0u32, 4.0, 1.0), (1, 4.0, 1.0), (2, 2.0, 1.0)] {
        let roots = wavenumber_sequence(n, q, r0, 30.0).unwrap();
        assert!(!roots.is_empty(), "no roots for (n={n}, q={q})");
        let rf = RadiusFunction::constant(r0).unwrap();
        let phi = HerglotzDensity::mode(-(n as i32));
        for root in &roots {
            let k_star = root.k;
            let spec = auto_spec(&rf, q, k_star + 0.5);
            let at_root = integral_i_multi(&rf, q, &phi, &etas, k_star, spec).unwrap();
            // Median magnitude over the four shifted wave numbers, per eta.
            let mut shifted = vec![Vec::new(); etas.len()];
            for dk in [-0.5, -0.25, 0.25, 0.5] {
                let vals = integral_i_multi(&rf, q, &phi, &etas, k_star + dk, spec).unwrap();
                for (store, v) in shifted.iter_mut().zip(vals.iter()) {
                    store.push(v.value().norm());
                }
            }
            for (ei, (at, nearby)) in at_root.iter().zip(shifted.iter()).enumerate() {
                let mut sorted = nearby.clone();
                sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
                let median = 0.5 * (sorted[1] + sorted[2]);
                assert!(
                    at.value().norm() <= 1e-5 * median,
                    "(n={n}, q={q}) root k={k_star}: |I| = {:e} vs median {median:e} at eta #{ei}",
                    at.value().norm()
                );
            }
        }
    }
    let elapsed = start.elapsed().as_secs_f64();
    assert!(elapsed <= 120.0, "criterion 2 took {elapsed:.1} s (budget 120 s)");
    println!("criterion 2 runtime: {elapsed:.1} s");
    pass(2, "disk constructive check");
}

#[test]
fn criterion_03_closed_form_thresholds() {
    // Centered-ellipse maxima of (ln rho)''.
    for &e2 in &[0.1f64, 0.5, 2.0 / 3.0] {
        let rf = RadiusFunction::centered_ellipse(1.0, (1.0 - e2).sqrt()).unwrap();
        let m = max_log_second_derivative(&rf, 2048).unwrap();
        assert!((m.value - e2).abs() <= 1e-9, "e2={e2}: {} vs {e2}", m.value);
    }
    for &e2 in &[0.7f64, 0.81] {
        let rf = RadiusFunction::centered_ellipse(1.0, (1.0 - e2).sqrt()).unwrap();
        let m = max_log_second_derivative(&rf, 2048).unwrap();
        let expect = (2.0 - e2) * (2.0 - e2) / (8.0 * (1.0 - e2));
        assert!((m.value - expect).abs() <= 1e-9, "e2={e2}: {} vs {expect}", m.value);
    }
    // Offset-disk maxima.
    for &s in &[3f64.sqrt(), 2.0, 3.0] {
        let rf = RadiusFunction::offset_disk(1.0, Vec2::new(1.0 / s, 0.0)).unwrap();
        let m = max_log_second_derivative(&rf, 2048).unwrap();
        assert!((m.value - 1.0 / s).abs() <= 1e-9, "s={s}: {} vs {}", m.value, 1.0 / s);
    }
    for &s in &[1.2, 1.5] {
        let rf = RadiusFunction::offset_disk(1.0, Vec2::new(1.0 / s, 0.0)).unwrap();
        let m = max_log_second_derivative(&rf, 2048).unwrap();
        let expect = 2.0 / (3.0 * 3f64.sqrt()) * s * s / (s * s - 1.0);
        assert!((m.value - expect).abs() <= 1e-9, "s={s}: {} vs {expect}", m.value);
    }
    // Focal-ellipse admissibility flag across a 20 x 20 (e, q) grid.
    for i in 0..20 {
        let e = 0.05 + 0.9 * i as f64 / 19.0;
        let rf = RadiusFunction::focal_ellipse(1.0, e).unwrap();
        for j in 0..20 {
            let q = 1.2 + (8.8 - 1.2) * j as f64 / 19.0;
            let report = check_hypotheses(&rf, q).unwrap();
            let closed = 4.0 * e * e < 3.0 - 1.0 / q.sqrt();
            assert_eq!(
                report.admissible, closed,
                "focal flag mismatch at e={e}, q={q} (margin {})",
                report.margin
            );
            assert_eq!(report.theorem_flags["Thm-focal"], closed);
        }
    }
    pass(3, "closed-form threshold suite");
}

#[test]
fn criterion_04_t_map_property_suite() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let h = 1e-5;
    for (name, rf) in domain_pool() {
        for &q in &[2.0, 4.0, 9.0] {
            for _ in 0..200 {
                let eta: f64 = rng.gen_range(0.0..TWO_PI);
                let mut thetas = [[0.0f64; 2]; 2]; // [j-1][l-1]
                for j in 1..=2u8 {
                    for l in 1..=2u8 {
                        let theta = solve_t(&rf, q, eta, j, l).unwrap();
                        thetas[j as usize - 1][l as usize - 1] = theta;
                        let eta_l = eta + (l as f64 - 1.0) * PI;
                        // Branch confinement.
                        let center = if j == 1 { 0.0 } else { PI };
                        let offset = wrap_near(theta - eta_l, center);
                        let (lo, hi) = branch_interval(q, j).unwrap();
                        assert!(
                            offset > lo && offset < hi,
                            "{name} q={q}: offset {offset} outside ({lo}, {hi})"
                        );
                        // Closed-form identities.
                        let jet = rf.jet(theta).unwrap();
                        let (cf_c, cf_s) = closed_form_cos_sin(q, jet.ln1, j);
                        let sq = q.sqrt();
                        assert!((sq * offset.cos() - cf_c).abs() < 1e-12);
                        assert!((sq * offset.sin() - cf_s).abs() < 1e-12);
                        assert!((cf_c * cf_c + cf_s * cf_s - q).abs() < 1e-12 * q);
                        // Positive derivative matching finite differences.
                        let d = t_derivative(&rf, q, eta, j, l).unwrap();
                        assert!(d > 0.0);
                        let tp = solve_t(&rf, q, eta + h, j, l).unwrap();
                        let tm = solve_t(&rf, q, eta - h, j, l).unwrap();
                        let fd = wrap_near(tp - tm, 0.0) / (2.0 * h);
                        assert!(
                            (d - fd).abs() <= 1e-4 * d.abs(),
                            "{name} q={q} (j={j}, l={l}): {d} vs fd {fd}"
                        );
                        // Shift identity.
                        let shifted = solve_t(&rf, q, eta + PI, j, l % 2 + 1).unwrap();
                        assert!(
                            circular_distance(theta, shifted) < 1e-12,
                            "{name}: shift identity"
                        );
                        // Inverse round-trip.
                        let back = inverse_t(&rf, q, theta, j, l).unwrap();
                        assert!(
                            circular_distance(back, eta) < 1e-10,
                            "{name} q={q} (j={j}, l={l}): inverse round-trip {back} vs {eta}"
                        );
                    }
                }
                // Orderings between the paired branches wherever the slope
                // at the base direction is clearly nonzero.
                for l in 1..=2usize {
                    let eta_l = eta + (l as f64 - 1.0) * PI;
                    if rf.jet(eta_l).unwrap().rho1.abs() <= 1e-6 {
                        continue;
                    }
                    let t1l = thetas[0][l - 1];
                    let t2lp = thetas[1][l % 2]; // T_{2, l+1}
                    let off1 = wrap_near(t1l - eta_l, 0.0).abs();
                    let off2 = wrap_near(t2lp - eta_l, 0.0).abs();
                    assert!(
                        off2 > 0.0 && off2 < off1,
                        "{name} q={q} l={l}: |offsets| {off2} !< {off1}"
                    );
                    assert!(rf.rho(t2lp) < rf.rho(t1l), "{name} q={q} l={l}: rho ordering");
                    let s1 = (t1l - eta).sin().abs();
                    let s2 = (t2lp - eta).sin().abs();
                    assert!(s2 > 0.0 && s2 < s1, "{name} q={q} l={l}: sine ordering");
                }
            }
        }
    }
    pass(4, "T-map property suite");
}

#[test]
fn criterion_05_sign_table_suite() {
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    let pool = domain_pool();
    let mut checked = 0;
    while checked < 500 {
        let (_, rf) = &pool[rng.gen_range(0..pool.len())];
        let q: f64 = rng.gen_range(1.5..9.0);
        let eta: f64 = rng.gen_range(0.0..TWO_PI);
        for pt in stationary_set(rf, q, eta).unwrap() {
            // Stationarity residuals of the reported point.
            let jet = rf.jet(pt.theta).unwrap();
            let xi = Vec2::unit(pt.theta_xi);
            let drive = Vec2::unit(pt.eta_theta) * q.sqrt() + xi;
            assert!(drive.dot(jet.y1).abs() < 1e-10 * (1.0 + jet.rho));
            assert!(xi.perp().dot(jet.y).abs() < 1e-10 * (1.0 + jet.rho));
            let par_sign = if (pt.j + pt.l) % 2 == 0 { 1i8 } else { -1 };
            assert_eq!(pt.psi.signum() as i8, par_sign, "psi sign table");
            assert_eq!(pt.amplitude.signum() as i8, par_sign, "Psi sign table");
            let det_sign = if pt.j == 1 { 1i8 } else { -1 };
            assert_eq!(pt.det.signum() as i8, det_sign, "det sign table");
            let expected_signature = (-1i8).pow(pt.l as u32) - (-1i8).pow((pt.l + pt.j) as u32);
            assert_eq!(pt.signature, expected_signature, "signature table");
        }
        checked += 1;
    }
    pass(5, "sign-table suite");
}

#[test]
fn criterion_06_g_ratio_closed_forms() {
    for &q in &[2.0f64, 4.0, 9.0] {
        let sq = q.sqrt();
        // Centered ellipses: G(0) against the closed form, and G(0) < 1.
        for &s2 in &[0.75f64, 0.8, 0.9] {
            let rf = RadiusFunction::centered_ellipse(1.0, s2.sqrt()).unwrap();
            let g = g_ratio(&rf, q, 0.0, (2, 1), (1, 1)).unwrap();
            let closed =
                (sq - 1.0 + s2) / (sq + 1.0 - s2) * (sq - 1.0).powi(2) / (sq + 1.0).powi(2);
            assert!(
                (g - closed).abs() <= 1e-9 * closed.abs(),
                "ellipse G(0) at q={q}, s2={s2}: {g} vs {closed}"
            );
            assert!(g < 1.0, "G(0) must contract (q={q}, s2={s2})");
        }
        // Star-shaped axis formula on offset disks.
        for &s in &[2.0, 3.0] {
            let rf = RadiusFunction::offset_disk(1.0, Vec2::new(1.0 / s, 0.0)).unwrap();
            let g = g_ratio(&rf, q, 0.0, (1, 1), (1, 2)).unwrap();
            let l0 = rf.jet(0.0).unwrap().ln2;
            let lpi = rf.jet(PI).unwrap().ln2;
            let closed = (sq - (sq + 1.0) * l0) / (sq - (sq + 1.0) * lpi);
            assert!(
                (g - closed).abs() <= 1e-9 * closed.abs(),
                "axis G at q={q}, s={s}: {g} vs {closed}"
            );
        }
    }
    pass(6, "G-ratio closed forms");
}

#[test]
fn criterion_07_integral_identity_suite() {
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    let analytic_pool = [
        RadiusFunction::constant(1.0).unwrap(),
        RadiusFunction::centered_ellipse(1.2, 1.0).unwrap(),
        RadiusFunction::centered_ellipse(1.1, 1.0).unwrap(),
        RadiusFunction::offset_disk(1.0, Vec2::new(0.5, 0.0)).unwrap(),
        RadiusFunction::focal_ellipse(1.0, 0.3).unwrap(),
        RadiusFunction::log_fourier(vec![0.0, 0.03, 0.01], vec![0.0, 0.0, 0.02]).unwrap(),
    ];
    let q = 4.0;
    // Ten random (domain, phi, k) cases: the two integral routes agree.
    for case in 0..10 {
        let rf = &analytic_pool[rng.gen_range(0..analytic_pool.len())];
        let modes: Vec<(i32, Complex)> = (-2..=2)
            .map(|n| (n, Complex::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))))
            .collect();
        let phi = HerglotzDensity::fourier(modes).unwrap();
        let k: f64 = rng.gen_range(8.0..25.0);
        let eta: f64 = rng.gen_range(0.0..TWO_PI);
        let spec = auto_spec(rf, q, k);
        let boundary = integral_i(rf, q, &phi, eta, k, spec).unwrap();
        let area = integral_area(rf, q, &phi, eta, k, spec).unwrap();
        assert!(boundary.converged && area.converged, "case {case} unconverged");
        assert!(
            (boundary.value() - area.value()).norm() <= 1e-6 * boundary.scale,
            "case {case}: boundary {:?} vs area {:?} (scale {})",
            boundary.value(),
            area.value(),
            boundary.scale
        );
    }
    // Five first-derivative cases: spectral and explicit-integrand paths.
    let d1_cases: Vec<(&RadiusFunction, f64)> = vec![
        (&analytic_pool[0], 10.0),
        (&analytic_pool[1], 12.0),
        (&analytic_pool[2], 15.0),
        (&analytic_pool[3], 11.0),
        (&analytic_pool[1], 9.0),
    ];
    for (ci, (rf, k)) in d1_cases.into_iter().enumerate() {
        let phi = HerglotzDensity::fourier(vec![
            (-1, Complex::new(1.0, 0.0)),
            (2, Complex::new(0.3, -0.2)),
        ])
        .unwrap();
        let spec = auto_spec(rf, q, k);
        let n_eta = 256;
        let grid = integral_i_n(rf, q, &phi, n_eta, k, 1, spec).unwrap();
        assert!(grid.converged);
        for idx in [7, 67, 131] {
            let eta = grid.eta_thetas[idx];
            let explicit = integral_i1_explicit(rf, q, &phi, eta, k, spec).unwrap();
            let denom = grid.values[idx].norm().max(explicit.value().norm());
            assert!(
                denom > 1e-8 * explicit.scale,
                "d1 case {ci}: value too small for a meaningful relative test"
            );
            let rel = (grid.values[idx] - explicit.value()).norm() / denom;
            assert!(
                rel <= 1e-6,
                "d1 case {ci} at eta={eta}: rel {rel} (spectral {:?} vs explicit {:?})",
                grid.values[idx],
                explicit.value()
            );
        }
    }
    pass(7, "integral identity suite");
}

/// Brute-force unit-modulus minimizer: full grid over 64 phases per free
/// amplitude (the first supported phase is fixed by global invariance),
/// followed by exact coordinate-descent polish from the best grid point.
fn brute_force_min(weights: &[f64; 4], amplitudes: &[Complex; 4]) -> (f64, f64) {
    let amp_scale: f64 = amplitudes.iter().map(|a| a.norm()).sum();
    let support: Vec<usize> = (0..4)
        .filter(|&i| amplitudes[i].norm() > 1e-12 * amp_scale.max(1e-300))
        .collect();
    // Moment columns c_i = amp_i * (1, w, w^2, w^3).
    let col = |i: usize| -> [Complex; 4] {
        let w = weights[i];
        [
            amplitudes[i],
            amplitudes[i] * w,
            amplitudes[i] * w * w,
            amplitudes[i] * w * w * w,
        ]
    };
    let scale: f64 = support
        .iter()
        .map(|&i| col(i).iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt())
        .sum();
    if support.is_empty() {
        return (0.0, 1.0);
    }
    let norm = |v: &[Complex; 4]| v.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
    let add = |a: &[Complex; 4], b: &[Complex; 4], u: Complex| -> [Complex; 4] {
        std::array::from_fn(|i| a[i] + b[i] * u)
    };
    let phases: Vec<Complex> = (0..64)
        .map(|i| {
            let a = TWO_PI * i as f64 / 64.0;
            Complex::new(a.cos(), a.sin())
        })
        .collect();
    let cols: Vec<[Complex; 4]> = support.iter().map(|&i| col(i)).collect();
    let free = cols.len() - 1;
    let base = cols[0];
    let mut best = f64::MAX;
    let mut best_phases = vec![Complex::new(1.0, 0.0); free];
    match free {
        0 => best = norm(&base),
        1 => {
            for u in &phases {
                let v = norm(&add(&base, &cols[1], *u));
                if v < best {
                    best = v;
                    best_phases = vec![*u];
                }
            }
        }
        2 => {
            for u1 in &phases {
                let p1 = add(&base, &cols[1], *u1);
                for u2 in &phases {
                    let v = norm(&add(&p1, &cols[2], *u2));
                    if v < best {
                        best = v;
                        best_phases = vec![*u1, *u2];
                    }
                }
            }
        }
        3 => {
            for u1 in &phases {
                let p1 = add(&base, &cols[1], *u1);
                for u2 in &phases {
                    let p2 = add(&p1, &cols[2], *u2);
                    // Inner loop via the linear form <p2, c3 u3>.
                    let p2_sq: f64 = p2.iter().map(|c| c.norm_sqr()).sum();
                    let c3_sq: f64 = cols[3].iter().map(|c| c.norm_sqr()).sum();
                    let cross: Complex = p2
                        .iter()
                        .zip(cols[3].iter())
                        .map(|(a, b)| a.conj() * b)
                        .sum();
                    for u3 in &phases {
                        let v_sq = p2_sq + c3_sq + 2.0 * (cross * u3).re;
                        if v_sq < best * best {
                            best = v_sq.max(0.0).sqrt();
                            best_phases = vec![*u1, *u2, *u3];
                        }
                    }
                }
            }
        }
        _ => unreachable!(),
    }
    // Exact coordinate descent: each phase has a closed-form minimizer. The
    // tail can creep for near-degenerate polygons, so run to stagnation.
    let current = |phases: &[Complex]| {
        let mut v = base;
        for (i, u) in phases.iter().enumerate() {
            v = add(&v, &cols[i + 1], *u);
        }
        norm(&v)
    };
    let mut prev = current(&best_phases);
    for _ in 0..2000 {
        for idx in 0..free {
            let mut partial = base;
            for (other, u) in best_phases.iter().enumerate() {
                if other != idx {
                    partial = add(&partial, &cols[other + 1], *u);
                }
            }
            let cross: Complex = partial
                .iter()
                .zip(cols[idx + 1].iter())
                .map(|(a, b)| a.conj() * b)
                .sum();
            if cross.norm() > 0.0 {
                best_phases[idx] = -cross.conj() / cross.norm();
            }
        }
        let now = current(&best_phases);
        if now > prev - 1e-15 * scale {
            prev = now;
            break;
        }
        prev = now;
    }
    (prev.min(best), scale)
}

#[test]
fn criterion_08_vandermonde_classifier_vs_brute_force() {
    let mut rng = ChaCha8Rng::seed_from_u64(4848);
    let mut consistent_worst: f64 = 0.0;
    let mut inconsistent_best = f64::MAX;
    for _ in 0..10_000 {
        // Scenario-controlled instances with documented margins so the grid
        // oracle is decisive; labels, phases and slot order are random.
        let scenario = rng.gen_range(0..7);
        let phase = |rng: &mut ChaCha8Rng| {
            let a: f64 = rng.gen_range(0.0..TWO_PI);
            Complex::new(a.cos(), a.sin())
        };
        let mut weights = [0.0f64; 4];
        let mut amps = [Complex::new(0.0, 0.0); 4];
        match scenario {
            0 => {
                // All-equal weights, moduli in [0.5, 1.5]: polygon holds.
                let w: f64 = rng.gen_range(-1.0..1.0);
                weights = [w; 4];
                for a in &mut amps {
                    *a = phase(&mut rng) * rng.gen_range(0.5..1.5);
                }
            }
            1 => {
                // All-equal weights, one dominating modulus: gap >= 1.
                let w: f64 = rng.gen_range(-1.0..1.0);
                weights = [w; 4];
                for a in &mut amps {
                    *a = phase(&mut rng) * rng.gen_range(0.5..1.0);
                }
                amps[rng.gen_range(0..4)] = phase(&mut rng) * 4.0;
            }
            2 | 3 => {
                // Two pairs with weight separation >= 0.5.
                let w1: f64 = rng.gen_range(-1.0..0.2);
                let w2: f64 = w1 + rng.gen_range(0.5..1.0);
                weights = [w1, w1, w2, w2];
                let m1: f64 = rng.gen_range(0.5..1.5);
                let m2: f64 = rng.gen_range(0.5..1.5);
                amps = [
                    phase(&mut rng) * m1,
                    phase(&mut rng) * m1,
                    phase(&mut rng) * m2,
                    phase(&mut rng) * m2,
                ];
                if scenario == 3 {
                    // Break one pair by at least 0.6.
                    amps[0] = phase(&mut rng) * (m1 + rng.gen_range(0.6..1.2));
                }
            }
            4 => {
                // Four distinct weights (separation 0.5), all supported.
                for (i, w) in weights.iter_mut().enumerate() {
                    *w = -0.9 + 0.6 * i as f64 + rng.gen_range(0.0..0.1);
                }
                for a in &mut amps {
                    *a = phase(&mut rng) * rng.gen_range(0.8..1.5);
                }
            }
            5 => {
                // Distinct weights, a single supported amplitude.
                for (i, w) in weights.iter_mut().enumerate() {
                    *w = -0.9 + 0.6 * i as f64 + rng.gen_range(0.0..0.1);
                }
                amps[rng.gen_range(0..4)] = phase(&mut rng) * rng.gen_range(0.5..1.5);
            }
            _ => {
                // Three equal weights plus one separated singleton.
                let w: f64 = rng.gen_range(-0.5..0.5);
                weights = [w, w, w, w + rng.gen_range(0.6..1.0)];
                for a in &mut amps {
                    *a = phase(&mut rng) * rng.gen_range(0.5..1.5);
                }
            }
        }
        // Random slot permutation.
        for i in (1..4).rev() {
            let j = rng.gen_range(0..=i);
            weights.swap(i, j);
            amps.swap(i, j);
        }

        let verdict = vandermonde_classify(&weights, &amps);
        let classifier_consistent = verdict.class != VandermondeClass::Inconsistent;
        let (bf_min, bf_scale) = brute_force_min(&weights, &amps);
        let ratio = bf_min / bf_scale.max(1e-300);
        let brute_consistent = ratio <= 1e-3;
        if classifier_consistent {
            consistent_worst = consistent_worst.max(ratio);
        } else {
            inconsistent_best = inconsistent_best.min(ratio);
        }
        assert_eq!(
            classifier_consistent, brute_consistent,
            "disagreement: scenario {scenario}, weights {weights:?}, amps {amps:?}, \
             class {:?}, brute ratio {ratio:e}",
            verdict.class
        );
    }
    println!(
        "criterion 8 margins: consistent worst ratio {consistent_worst:e}, \
         inconsistent best ratio {inconsistent_best:e}"
    );
    pass(8, "Vandermonde classifier vs brute force");
}

#[test]
fn criterion_09_scan_determinism() {
    // Byte-identical CSV from repeated runs of the scan subcommand.
    let dir = tempfile::tempdir().unwrap();
    let config_path = dir.path().join("scan.json");
    std::fs::write(
        &config_path,
        r#"{
  "q": 4.0,
  "domain": { "kind": "centered_ellipse", "a": 1.2, "b": 1.0 },
  "density": { "kind": "fourier", "coefficients": [ { "n": -1, "re": 1.0 } ] },
  "k_grid": { "min": 10.0, "max": 14.0, "count": 2 },
  "eta_grid": 4
}"#,
    )
    .unwrap();
    let run = |out: &std::path::Path| {
        let status = std::process::Command::new(env!("CARGO_BIN_EXE_nonscatter"))
            .args([
                "scan",
                "--config",
                config_path.to_str().unwrap(),
                "--out",
                out.to_str().unwrap(),
            ])
            .status()
            .unwrap();
        assert!(status.success());
        std::fs::read(out).unwrap()
    };
    let first = run(&dir.path().join("a.csv"));
    let second = run(&dir.path().join("b.csv"));
    assert!(!first.is_empty());
    assert_eq!(first, second, "scan runs must be byte-identical");
    pass(9, "scan determinism");
}
