//! Closed-form boundaries checked against bisection on the full solver.

use netdicke_core::boundary::{
    high_t_magnetization, lambda_asymptotics, locate_tc_by_bisection, locate_tc_fixed_lambda,
    pm_fm_boundary, quantum_critical_frequency, quantum_order_parameter, tc_high_temperature,
    tc_low_temperature_regular, LambdaRegime, OrderParam,
};
use netdicke_core::meanfield::{solve_at_fixed_lambda, solve_self_consistent, ModelParams};
use netdicke_core::roots::bisect_predicate;
use netdicke_core::DegreeDistribution;
use proptest::prelude::*;

fn agrees(closed: f64, solver: f64) -> bool {
    (closed - solver).abs() <= (0.02 * closed.abs()).max(0.02)
}

#[test]
fn high_temperature_onset_on_the_solver() {
    let p = ModelParams::new(0.0, 1e-3, 0.5, 1.0, 200).unwrap();
    let d = DegreeDistribution::delta(4.0).unwrap();
    let pt = locate_tc_by_bisection(&p, &d, OrderParam::Lambda, 0.5, 2.0).unwrap();
    let t_closed = 1.0 / tc_high_temperature(0.5);
    assert!((pt.t_c - t_closed).abs() < 0.01, "T_c = {}", pt.t_c);
}

#[test]
fn low_temperature_tc_on_the_solver() {
    // eps = 0.5 and 1 - eps - omega h = 1e-3: the low-temperature regime.
    let omega = 10.0;
    let theta = 0.5 / (4.0 * omega);
    let h = (0.5 - 1e-3) / omega;
    let p = ModelParams::new(theta, h, omega, 1.0, 200).unwrap();
    let closed = tc_low_temperature_regular(&p, 4.0).unwrap();
    assert!(closed.valid);
    assert!(1.0 / closed.value >= 20.0);
    let d = DegreeDistribution::delta(4.0).unwrap();
    let pt = locate_tc_by_bisection(&p, &d, OrderParam::Lambda, 0.2 * closed.value, 5.0 * closed.value)
        .unwrap();
    assert!((pt.t_c - closed.value).abs() < 0.05, "solver {} closed {}", pt.t_c, closed.value);
    assert!(agrees(closed.value, pt.t_c));
}

#[test]
fn lambda_asymptotics_match_solver_in_their_windows() {
    // Regular network with Gamma_0c = h / (1 - eps) = 0.2 at beta = 50; omega
    // is chosen so that lambda -> Gamma_0c as T -> 0.
    let gamma0c: f64 = 0.2;
    let omega = 1.0 / (5f64.sqrt() * gamma0c);
    let theta = 0.5 / (4.0 * omega);
    let p = ModelParams::new(theta, 0.1, omega, 50.0, 200).unwrap();
    let d = DegreeDistribution::delta(4.0).unwrap();
    let lambda = solve_self_consistent(&p, &d).unwrap().equilibrium().order.lambda;
    let window = 50.0 * lambda * lambda / gamma0c;
    let regime = if window > 1.0 { LambdaRegime::Deep } else { LambdaRegime::Near };
    let estimate = lambda_asymptotics(50.0, gamma0c, regime);
    assert!(estimate.valid);
    assert!(
        (estimate.value / lambda - 1.0).abs() < 0.2,
        "solver lambda {lambda}, beta lambda^2/Gamma = {window}, {regime:?} formula {}",
        estimate.value
    );
}

#[test]
fn high_t_magnetization_against_the_solver() {
    // Large omega keeps the system normal, the regime the formula describes.
    let d = DegreeDistribution::power_law_for_size(3.0, 1.0, 200).unwrap();
    let p = ModelParams::new(0.15, 0.1, 2.0, 1.25, 200).unwrap();
    let closed = high_t_magnetization(&p, 2.65).unwrap();
    assert!(closed.valid);
    let eq = *solve_self_consistent(&p, &d).unwrap().equilibrium();
    assert_eq!(eq.order.lambda, 0.0);
    assert!((closed.value / eq.order.s_z - 1.0).abs() < 0.15, "{} vs {}", closed.value, eq.order.s_z);
}

#[test]
fn pm_fm_boundary_on_the_solver() {
    for (d, zeta) in [
        (DegreeDistribution::delta(20.0).unwrap(), 20.0),
        (DegreeDistribution::poisson(4.0).unwrap(), 5.0),
        (
            DegreeDistribution::power_law_for_size(3.0, 1.0, 200).unwrap(),
            DegreeDistribution::power_law_for_size(3.0, 1.0, 200).unwrap().zeta().unwrap(),
        ),
    ] {
        let p = ModelParams::new(0.15, 0.0, 0.5, 1.0, 200).unwrap();
        for lambda in [0.0, 0.1] {
            let closed = pm_fm_boundary(lambda, 0.15, zeta).unwrap();
            let pt = locate_tc_fixed_lambda(&p, &d, lambda, 0.2 * closed, 2.0 * closed).unwrap();
            assert!(agrees(closed, pt.t_c), "{d:?} lambda {lambda}: {closed} vs {}", pt.t_c);
        }
    }
}

#[test]
fn no_transition_beyond_the_termination_point() {
    let d = DegreeDistribution::delta(20.0).unwrap();
    let scale: f64 = 0.15 * 20.0;
    let lambda = 0.55 * scale;
    for i in 0..40 {
        let t = 1e-3 * (10.0 * scale / 1e-3).powf(i as f64 / 39.0);
        let p = ModelParams::new(0.15, 0.0, 0.5, 1.0 / t, 200).unwrap();
        let eq = *solve_at_fixed_lambda(&p, &d, lambda).unwrap().equilibrium();
        assert!(!eq.phase.is_ferromagnetic(), "FM at T = {t}");
    }
}

#[test]
fn self_consistent_lambda_never_exceeds_its_bound() {
    for omega in [0.3, 0.5, 1.0, 2.0] {
        for beta in [0.5, 5.0, 50.0] {
            let p = ModelParams::new(0.2, 0.1, omega, beta, 200).unwrap();
            let d = DegreeDistribution::poisson(6.0).unwrap();
            for b in &solve_self_consistent(&p, &d).unwrap().branches {
                assert!(b.order.lambda <= 0.5 / omega);
            }
        }
    }
}

/// Critical field of the zero-temperature solver, by bisection on the SR label.
fn critical_field(template: &ModelParams, d: &DegreeDistribution, lo: f64, hi: f64) -> f64 {
    let (a, b) = bisect_predicate(
        |h| {
            let p = ModelParams { h_field: h, ..*template };
            Ok(solve_self_consistent(&p, d)?.equilibrium().phase.is_superradiant())
        },
        lo,
        hi,
        1e-13,
        200,
    )
    .unwrap();
    0.5 * (a + b)
}

#[test]
fn square_root_onset_in_the_field() {
    let d = DegreeDistribution::power_law_for_size(3.0, 1.0, 200).unwrap();
    let p = ModelParams::new(0.3, 0.1, 0.5, 1e5, 200).unwrap();
    let h_c = critical_field(&p, &d, 0.01, 3.0);
    let deltas = [1e-4, 3e-4, 1e-3, 3e-3, 1e-2];
    let pts: Vec<(f64, f64)> = deltas
        .iter()
        .map(|&dlt| {
            let q = ModelParams { h_field: h_c * (1.0 - dlt), ..p };
            let l = solve_self_consistent(&q, &d).unwrap().equilibrium().order.lambda;
            (dlt.ln(), l.ln())
        })
        .collect();
    let n = pts.len() as f64;
    let (mx, my) = (pts.iter().map(|p| p.0).sum::<f64>() / n, pts.iter().map(|p| p.1).sum::<f64>() / n);
    let slope = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum::<f64>()
        / pts.iter().map(|p| (p.0 - mx).powi(2)).sum::<f64>();
    assert!((0.45..=0.55).contains(&slope), "slope {slope}, H_c {h_c}");
}

#[test]
fn quantum_scaling_in_the_frequency() {
    // theta <k> <= 0.1 and h <= 0.1 at beta = 1e5.
    let d = DegreeDistribution::power_law_for_size(3.0, 1.0, 200).unwrap();
    let theta = 0.1 / d.mean_degree().unwrap();
    let h = 0.1;
    let qc = quantum_critical_frequency(theta, h, &d).unwrap();
    for frac in [0.1, 0.3, 0.5, 0.7, 0.9, 0.99] {
        let omega = frac * qc.omega_ac;
        let p = ModelParams::new(theta, h, omega, 1e5, 200).unwrap();
        let solver = solve_self_consistent(&p, &d).unwrap().equilibrium().order.lambda;
        let closed = quantum_order_parameter(omega, &qc).unwrap().lambda;
        assert!(
            (closed / solver - 1.0).abs() < 0.05,
            "omega/omega_c = {frac}: closed {closed}, solver {solver}"
        );
    }
}

proptest! {
    #[test]
    fn pm_fm_boundary_monotone(lambda in 0.01f64..1.0, theta in 0.05f64..0.5, zeta in 5.0f64..200.0, step in 1.001f64..2.0) {
        prop_assume!(2.0 * lambda * step < theta * zeta);
        let base = pm_fm_boundary(lambda, theta, zeta).unwrap();
        prop_assert!(pm_fm_boundary(lambda, theta, zeta * step).unwrap() > base);
        prop_assert!(pm_fm_boundary(lambda * step, theta, zeta).unwrap() < base);
    }

    #[test]
    fn complete_graph_coupling_matches_dimensionless_criterion(omega in 0.1f64..3.0, h in 0.0f64..2.0, j in 0.0f64..0.2, k0 in 1.0f64..50.0) {
        // Under theta = 4J/chi, H = h/chi, omega_a = omega/chi the criterion
        // omega_a (theta k0 + H) = 1 is solved by chi = chi_c.
        let chi = netdicke_core::boundary::critical_coupling(omega, h, j, k0).unwrap();
        prop_assume!(chi > 1e-6);
        let crit = (omega / chi) * (4.0 * j / chi * k0 + h / chi);
        prop_assert!((crit - 1.0).abs() < 1e-12);
    }
}

#[test]
fn expansion_matches_exact_boundary_for_small_lambda() {
    for zeta in [20.0, 50.0, 199.0] {
        let scale = 0.15 * zeta;
        // The truncation error grows like lambda^4.
        for i in 1..=10 {
            let lambda = 0.005 * i as f64 * scale;
            let exact = pm_fm_boundary(lambda, 0.15, zeta).unwrap();
            let approx = netdicke_core::boundary::pm_fm_boundary_expansion(lambda, 0.15, zeta);
            assert!((exact - approx).abs() < 1e-3, "zeta {zeta} lambda {lambda}: {exact} vs {approx}");
        }
    }
}
