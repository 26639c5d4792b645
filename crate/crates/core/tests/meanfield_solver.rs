//! Solver contract checked against brute-force integrals and finite differences.

use approx::assert_relative_eq;
use netdicke_core::meanfield::{
    free_energy, rhs_lambda_gap, rhs_sz, solve_self_consistent, ModelParams, OrderParameters,
    SolutionBranch, RESIDUAL_TOL,
};
use netdicke_core::DegreeDistribution;
use proptest::prelude::*;

/// Trapezoid rule in `u = ln k` on a million points.
fn trapezoid_log<F: Fn(f64) -> f64>(f: F, k_lo: f64, k_hi: f64) -> f64 {
    let n = 1_000_000;
    let (a, b) = (k_lo.ln(), k_hi.ln());
    let h = (b - a) / n as f64;
    let g = |u: f64| {
        let k = u.exp();
        f(k) * k
    };
    let mut sum = 0.5 * (g(a) + g(b));
    for i in 1..n {
        sum += g(a + i as f64 * h);
    }
    sum * h
}

#[test]
fn power_law_right_sides_match_dense_trapezoid() {
    let (gamma, k_min, n) = (3.0f64, 1.0f64, 200u64);
    let d = DegreeDistribution::power_law_for_size(gamma, k_min, n).unwrap();
    let k_max = k_min * (n as f64).sqrt();
    let p = ModelParams::new(0.15, 0.1, 0.5, 10.0, n).unwrap();
    let (s, l) = (0.5, 0.2);
    let pdf = |k: f64| 2.0 * k.powi(-3);
    let gap = |k: f64| ((0.15 * s * k + 0.1f64).powi(2) + 4.0 * l * l).sqrt();
    let mean_k = trapezoid_log(|k| k * pdf(k), k_min, k_max);
    let oracle_sz = trapezoid_log(
        |k| k * pdf(k) / mean_k * (0.15 * s * k + 0.1) / gap(k) * (5.0 * gap(k)).tanh(),
        k_min,
        k_max,
    );
    let oracle_f = trapezoid_log(|k| pdf(k) * (5.0 * gap(k)).tanh() / gap(k), k_min, k_max);
    let o = OrderParameters::new(s, l);
    assert_relative_eq!(rhs_sz(o, &p, &d).unwrap(), oracle_sz, max_relative = 1e-9);
    assert_relative_eq!(rhs_lambda_gap(o, &p, &d).unwrap(), oracle_f, max_relative = 1e-9);
}

fn gradient(b: &SolutionBranch, p: &ModelParams, d: &DegreeDistribution) -> (f64, f64) {
    let h = 1e-5;
    let f = |s: f64, l: f64| free_energy(OrderParameters::new(s, l), p, d).unwrap();
    let (s, l) = (b.order.s_z, b.order.lambda);
    (
        (f(s + h, l) - f(s - h, l)) / (2.0 * h),
        (f(s, l + h) - f(s, l - h)) / (2.0 * h),
    )
}

#[test]
fn converged_branches_are_stationary() {
    let cases = [
        (DegreeDistribution::delta(4.0).unwrap(), ModelParams::new(0.15, 0.1, 0.5, 10.0, 200).unwrap()),
        (
            DegreeDistribution::power_law_for_size(3.0, 1.0, 200).unwrap(),
            ModelParams::new(0.15, 0.01, 0.5, 1.25, 200).unwrap(),
        ),
        (DegreeDistribution::poisson(4.0).unwrap(), ModelParams::new(0.3, 0.05, 0.4, 6.0, 200).unwrap()),
    ];
    for (d, p) in &cases {
        let sol = solve_self_consistent(p, d).unwrap();
        assert!(sol.equilibrium().order.lambda > 0.0, "{d:?}");
        for b in &sol.branches {
            let (gs, gl) = gradient(b, p, d);
            assert!(gs.abs() < 1e-6 && gl.abs() < 1e-6, "{d:?} {b:?}: ({gs}, {gl})");
        }
    }
}

#[test]
fn large_gamma_regime_is_superradiant() {
    let d = DegreeDistribution::power_law_for_size(3.0, 1.0, 200).unwrap();
    let p = ModelParams::new(0.15, 0.01, 0.5, 1.25, 200).unwrap();
    let eq = *solve_self_consistent(&p, &d).unwrap().equilibrium();
    assert!(eq.order.lambda > 0.0);
    assert!(eq.phase.is_superradiant());
}

#[test]
fn dicke_limit_without_field_or_coupling() {
    for d in [DegreeDistribution::delta(4.0).unwrap(), DegreeDistribution::poisson(3.0).unwrap()] {
        let p = ModelParams::new(0.0, 0.0, 0.5, 0.8, 200).unwrap();
        let sol = solve_self_consistent(&p, &d).unwrap();
        assert_eq!(sol.branches.len(), 1);
        assert_eq!(sol.equilibrium().order, OrderParameters::new(0.0, 0.0));
        let p = ModelParams { beta: 3.0, ..p };
        let eq = *solve_self_consistent(&p, &d).unwrap().equilibrium();
        let l = eq.order.lambda;
        assert_eq!(eq.order.s_z, 0.0);
        assert_relative_eq!((3.0 * l).tanh() / (2.0 * l), 0.5, max_relative = 1e-10);
    }
}

fn family() -> impl Strategy<Value = DegreeDistribution> {
    prop_oneof![
        (1.0f64..30.0).prop_map(|k| DegreeDistribution::delta(k).unwrap()),
        (1.0f64..30.0).prop_map(|m| DegreeDistribution::poisson(m).unwrap()),
        (2.0f64..4.0, 1.0f64..3.0)
            .prop_map(|(g, k)| DegreeDistribution::power_law_for_size(g, k, 200).unwrap()),
    ]
}

fn params() -> impl Strategy<Value = ModelParams> {
    (0.0f64..0.5, 0.0f64..1.0, 0.2f64..2.0, 0.1f64..50.0)
        .prop_map(|(t, h, o, b)| ModelParams::new(t, h, o, b, 200).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn branch_contract(d in family(), p in params()) {
        let sol = solve_self_consistent(&p, &d).unwrap();
        let head = sol.equilibrium().free_energy;
        for b in &sol.branches {
            prop_assert!(b.residual_sz.abs() < RESIDUAL_TOL);
            prop_assert!(b.residual_lambda.abs() < RESIDUAL_TOL);
            prop_assert!(b.order.s_z.abs() <= 1.0 && b.order.lambda >= 0.0);
            prop_assert!(head <= b.free_energy);
            let (gs, gl) = gradient(b, &p, &d);
            prop_assert!(gs.hypot(gl) < 1e-5, "gradient ({gs}, {gl}) at {b:?}");
        }
    }

    #[test]
    fn zero_field_symmetry(d in family(), p in params()) {
        let p = ModelParams { h_field: 0.0, ..p };
        let sol = solve_self_consistent(&p, &d).unwrap();
        prop_assert!(sol.branches.iter().any(|b| b.order.s_z == 0.0));
        for b in &sol.branches {
            let mirror = sol.branches.iter().find(|c| {
                (c.order.s_z + b.order.s_z).abs() < 1e-6 && (c.order.lambda - b.order.lambda).abs() < 1e-6
            });
            prop_assert!(mirror.is_some(), "no mirror for {b:?}");
            let m = mirror.unwrap();
            prop_assert!((m.free_energy - b.free_energy).abs() <= 1e-10 * b.free_energy.abs().max(1.0));
        }
    }

    #[test]
    fn dicke_reduction(k0 in 1.0f64..20.0, h in 0.01f64..2.0, omega in 0.2f64..2.0, beta in 0.1f64..50.0) {
        let d = DegreeDistribution::delta(k0).unwrap();
        let p = ModelParams::new(0.0, h, omega, beta, 200).unwrap();
        let threshold = (0.5 * beta * h).tanh() / h;
        prop_assume!((threshold / omega - 1.0).abs() > 1e-6);
        let eq = *solve_self_consistent(&p, &d).unwrap().equilibrium();
        prop_assert_eq!(eq.phase.is_superradiant(), threshold > omega);
    }
}
