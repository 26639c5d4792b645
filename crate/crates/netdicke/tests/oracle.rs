//! Invariants of the exact small-system oracle.

use netdicke::oracle::{
    extrapolated_order, symmetry_breaking_probe, thermal_observables, Fields, MicroscopicModel, Spectrum,
};
use netdicke_core::ModelParams;

fn model(n: usize, theta: f64, h: f64, omega: f64, cutoff: usize) -> MicroscopicModel {
    let p = ModelParams::new(theta, h, omega, 1.0, n as u64).unwrap();
    let (f, j) = Fields::from_params(&p);
    MicroscopicModel::complete_graph(n, j, f, cutoff).unwrap()
}

const BETAS: [f64; 8] = [0.0, 0.1, 0.5, 1.0, 2.0, 5.0, 20.0, 100.0];

#[test]
fn trace_is_normalized_and_energy_falls_with_beta() {
    let s = Spectrum::new(&model(4, 0.2, 0.1, 0.5, 24)).unwrap();
    let mut last = f64::INFINITY;
    for beta in BETAS {
        let o = s.thermal(beta).unwrap();
        assert!(o.trace_error < 1e-10, "beta {beta}: {}", o.trace_error);
        assert!(o.mean_energy <= last + 1e-12, "beta {beta}");
        assert!((0.0..=24.0).contains(&o.mean_photons));
        assert!(o.sz_weighted.abs() <= 1.0);
        last = o.mean_energy;
    }
}

#[test]
fn observables_converge_in_the_photon_cutoff() {
    for beta in [0.5, 2.0, 10.0] {
        let a = thermal_observables(&model(3, 0.2, 0.3, 1.0, 40), beta).unwrap();
        let b = thermal_observables(&model(3, 0.2, 0.3, 1.0, 48), beta).unwrap();
        assert!(a.cutoff_sufficient());
        assert!((a.mean_photons - b.mean_photons).abs() < 1e-6, "beta {beta}");
        assert!((a.sz_weighted - b.sz_weighted).abs() < 1e-6, "beta {beta}");
        assert!((a.mean_energy - b.mean_energy).abs() < 1e-6, "beta {beta}");
    }
}

#[test]
fn insufficient_cutoff_is_reported() {
    let o = thermal_observables(&model(2, 0.0, 0.0, 0.2, 4), 0.5).unwrap();
    assert!(!o.cutoff_sufficient());
}

#[test]
fn global_spin_flip_symmetry() {
    for beta in [0.3, 3.0, 30.0] {
        let zero = thermal_observables(&model(4, 0.15, 0.0, 0.5, 20), beta).unwrap();
        assert!(zero.sz_weighted.abs() < 1e-12, "beta {beta}: {}", zero.sz_weighted);
        let up = model(4, 0.15, 0.2, 0.5, 20);
        let mut down = up.clone();
        down.fields.h = -0.2;
        let (up, down) = (thermal_observables(&up, beta).unwrap(), thermal_observables(&down, beta).unwrap());
        assert!((up.mean_photons - down.mean_photons).abs() < 1e-10);
        assert!((up.mean_energy - down.mean_energy).abs() < 1e-10);
        assert!((up.sz_weighted + down.sz_weighted).abs() < 1e-10);
    }
}

#[test]
fn biased_order_grows_on_cooling() {
    // Ising-dominated: omega theta k0 = 3 keeps the field normal.
    let m = model(4, 0.5, 0.0, 2.0, 20);
    let mut last = 0.0;
    for beta in [0.5, 1.0, 2.0, 4.0, 8.0, 16.0] {
        let sz = symmetry_breaking_probe(&m, beta, 1e-3).unwrap();
        assert!(sz > last, "beta {beta}: {sz} <= {last}");
        last = sz;
    }
    // Linear response at high temperature: no spontaneous order survives.
    assert!(extrapolated_order(&m, 0.5).unwrap().abs() < 1e-6);
}

#[test]
fn sampled_adjacency_matches_complete_graph() {
    let edges: Vec<(usize, usize)> = (0..4).flat_map(|a| (a + 1..4).map(move |b| (a, b))).collect();
    let sample = netdicke_core::NetworkSample::from_edges(4, edges, 0, netdicke_core::netgen::Generator::External).unwrap();
    let p = ModelParams::new(0.2, 0.1, 0.5, 1.0, 4).unwrap();
    let (f, j) = Fields::from_params(&p);
    let a = MicroscopicModel::from_sample(&sample, j, f, 10).unwrap();
    assert_eq!(a, MicroscopicModel::complete_graph(4, j, f, 10).unwrap());
}
