//! Exact thermal averages of the microscopic Hamiltonian for a handful of spins.
//!
//! The Hilbert space is `2^N` spin configurations times a Fock space truncated
//! at `M` photons, and the Hamiltonian is
//!
//! ```text
//! H = -sum_{i != j} J_ij sz_i sz_j - (h/2) sum_i sz_i + omega a^dag a
//!     - chi / (2 sqrt N) sum_i sx_i (a + a^dag)
//! ```
//!
//! Without a photon drive the parity `(-1)^(n + #down)` is conserved, so the
//! matrix splits into two blocks that are diagonalized separately.

use nalgebra::{DMatrix, DVector};
use netdicke_core::netgen::annealed_couplings;
use netdicke_core::{ModelParams, NetworkSample};

use crate::error::{Error, Result};

/// Largest total dimension `2^N (M + 1)` accepted for dense diagonalization.
pub const DENSE_LIMIT: usize = 200_000;
pub const MAX_SPINS: usize = 10;
/// Top-Fock occupancy above which the truncation is reported as insufficient.
pub const CUTOFF_TOLERANCE: f64 = 1e-8;
/// Bias values used to extrapolate the spontaneous magnetization.
pub const PROBE_BIASES: [f64; 3] = [1e-2, 1e-3, 1e-4];

/// Dimensional single-particle parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Fields {
    pub h: f64,
    pub omega: f64,
    pub chi: f64,
    /// Linear drive `-drive (a + a^dag)`; breaks the parity symmetry.
    pub drive: f64,
}

impl Fields {
    /// Dimensional fields in units where `chi = 1`, with `J = theta / 4`.
    pub fn from_params(params: &ModelParams) -> (Self, f64) {
        let fields = Fields {
            h: params.h_field,
            omega: params.omega_a,
            chi: 1.0,
            drive: 0.0,
        };
        (fields, params.theta / 4.0)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MicroscopicModel {
    pub n_spins: usize,
    pub photon_cutoff: usize,
    pub j_matrix: DMatrix<f64>,
    pub degrees: Vec<f64>,
    pub fields: Fields,
    /// Ordered pairs whose annealed probability exceeded 1 and was clamped.
    pub clamped_pairs: usize,
}

impl MicroscopicModel {
    pub fn new(
        j_matrix: DMatrix<f64>,
        degrees: Vec<f64>,
        fields: Fields,
        photon_cutoff: usize,
    ) -> Result<Self> {
        let model = MicroscopicModel {
            n_spins: degrees.len(),
            photon_cutoff,
            j_matrix,
            degrees,
            fields,
            clamped_pairs: 0,
        };
        model.validate()?;
        Ok(model)
    }

    /// Annealed couplings `J k_i k_j / (N <k>)` on every pair, probabilities
    /// above 1 clamped (see [`MicroscopicModel::clamped_pairs`]).
    pub fn annealed(degrees: Vec<f64>, j: f64, fields: Fields, photon_cutoff: usize) -> Result<Self> {
        let n = degrees.len();
        let c = annealed_couplings(&degrees, j)?;
        let m = DMatrix::from_row_slice(n, n, &c.matrix);
        let mut model = Self::new(m, degrees, fields, photon_cutoff)?;
        model.clamped_pairs = c.clamped;
        Ok(model)
    }

    /// Couplings `J A_ij` from a sampled graph.
    pub fn from_sample(sample: &NetworkSample, j: f64, fields: Fields, photon_cutoff: usize) -> Result<Self> {
        let n = sample.n_nodes;
        let mut m = DMatrix::zeros(n, n);
        for &(u, v) in &sample.edges {
            m[(u, v)] = j;
            m[(v, u)] = j;
        }
        let degrees = sample.degree_seq.iter().map(|&k| k as f64).collect();
        Self::new(m, degrees, fields, photon_cutoff)
    }

    /// Every pair coupled with strength `J`; degrees `N - 1`.
    pub fn complete_graph(n: usize, j: f64, fields: Fields, photon_cutoff: usize) -> Result<Self> {
        let m = DMatrix::from_fn(n, n, |a, b| if a == b { 0.0 } else { j });
        Self::new(m, vec![n.saturating_sub(1) as f64; n], fields, photon_cutoff)
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.n_spins;
        if !(1..=MAX_SPINS).contains(&n) {
            return Err(Error::field("oracle.n_spins", format!("{n} outside [1, {MAX_SPINS}]")));
        }
        if self.photon_cutoff == 0 {
            return Err(Error::field("oracle.cutoff", "need at least one photon state above vacuum"));
        }
        if self.j_matrix.shape() != (n, n) {
            return Err(Error::field("oracle.j_matrix", "shape does not match the number of spins"));
        }
        for a in 0..n {
            if self.j_matrix[(a, a)] != 0.0 {
                return Err(Error::field("oracle.j_matrix", "diagonal must vanish"));
            }
            for b in 0..a {
                if self.j_matrix[(a, b)] != self.j_matrix[(b, a)] {
                    return Err(Error::field("oracle.j_matrix", "must be symmetric"));
                }
            }
        }
        let f = &self.fields;
        if ![f.h, f.omega, f.chi, f.drive].iter().all(|x| x.is_finite()) || self.j_matrix.iter().any(|x| !x.is_finite()) {
            return Err(Error::field("oracle", "parameters must be finite"));
        }
        let dim = self.dimension();
        if dim > DENSE_LIMIT {
            return Err(Error::DimensionOverflow { dim, limit: DENSE_LIMIT });
        }
        Ok(())
    }

    pub fn dimension(&self) -> usize {
        (1usize << self.n_spins.min(usize::BITS as usize - 1)).saturating_mul(self.photon_cutoff + 1)
    }

    fn index(&self, spins: usize, photons: usize) -> usize {
        spins * (self.photon_cutoff + 1) + photons
    }

    fn spin(spins: usize, i: usize) -> f64 {
        if spins >> i & 1 == 0 {
            1.0
        } else {
            -1.0
        }
    }

    fn diagonal(&self, spins: usize, photons: usize) -> f64 {
        let n = self.n_spins;
        let mut e = self.fields.omega * photons as f64;
        for i in 0..n {
            let si = Self::spin(spins, i);
            e -= 0.5 * self.fields.h * si;
            for j in 0..n {
                if i != j {
                    e -= self.j_matrix[(i, j)] * si * Self::spin(spins, j);
                }
            }
        }
        e
    }

    /// Nonzero upper couplings `(partner, amplitude)` of basis state `(spins, photons)`
    /// to states with one more photon.
    fn raising(&self, spins: usize, photons: usize, mut emit: impl FnMut(usize, f64)) {
        if photons >= self.photon_cutoff {
            return;
        }
        let root = ((photons + 1) as f64).sqrt();
        let g = self.fields.chi / (2.0 * (self.n_spins as f64).sqrt());
        for i in 0..self.n_spins {
            emit(self.index(spins ^ (1 << i), photons + 1), -g * root);
        }
        if self.fields.drive != 0.0 {
            emit(self.index(spins, photons + 1), -self.fields.drive * root);
        }
    }

    /// Weight `sum_i k_i sz_i / (N <k>)` of a spin configuration; uniform
    /// weights when every degree vanishes.
    fn weighted_sz(&self, spins: usize) -> f64 {
        let total: f64 = self.degrees.iter().sum();
        let n = self.n_spins;
        if total > 0.0 {
            (0..n).map(|i| self.degrees[i] * Self::spin(spins, i)).sum::<f64>() / total
        } else {
            (0..n).map(|i| Self::spin(spins, i)).sum::<f64>() / n as f64
        }
    }
}

/// The full Hamiltonian in the basis `spins (x) Fock`, index `s (M + 1) + n`.
pub fn build_hamiltonian(model: &MicroscopicModel) -> Result<DMatrix<f64>> {
    model.validate()?;
    let dim = model.dimension();
    let mut h = DMatrix::zeros(dim, dim);
    for s in 0..1usize << model.n_spins {
        for n in 0..=model.photon_cutoff {
            let a = model.index(s, n);
            h[(a, a)] = model.diagonal(s, n);
            model.raising(s, n, |b, amp| {
                h[(a, b)] += amp;
                h[(b, a)] += amp;
            });
        }
    }
    Ok(h)
}

struct Block {
    basis: Vec<usize>,
    values: DVector<f64>,
    vectors: DMatrix<f64>,
}

/// Eigendecomposition reused across temperatures.
pub struct Spectrum {
    model: MicroscopicModel,
    blocks: Vec<Block>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThermalObservables {
    pub beta: f64,
    pub mean_photons: f64,
    pub sz_weighted: f64,
    pub sx_mean: f64,
    /// `sqrt(<a^dag a> / N)`.
    pub lambda_est: f64,
    pub mean_energy: f64,
    /// `|Tr rho - 1|`.
    pub trace_error: f64,
    /// Thermal weight of the highest Fock state.
    pub top_occupancy: f64,
}

impl ThermalObservables {
    pub fn cutoff_sufficient(&self) -> bool {
        self.top_occupancy < CUTOFF_TOLERANCE
    }
}

impl Spectrum {
    pub fn new(model: &MicroscopicModel) -> Result<Self> {
        model.validate()?;
        let parity_blocks = model.fields.drive == 0.0;
        let mut members: [Vec<usize>; 2] = [Vec::new(), Vec::new()];
        for s in 0..1usize << model.n_spins {
            for n in 0..=model.photon_cutoff {
                let p = if parity_blocks {
                    (s.count_ones() as usize + n) & 1
                } else {
                    0
                };
                members[p].push(model.index(s, n));
            }
        }
        let mut position = vec![0usize; model.dimension()];
        let mut blocks = Vec::new();
        for basis in members.into_iter().filter(|b| !b.is_empty()) {
            for (k, &g) in basis.iter().enumerate() {
                position[g] = k;
            }
            let d = basis.len();
            let mut h = DMatrix::zeros(d, d);
            for (a, &g) in basis.iter().enumerate() {
                let (s, n) = (g / (model.photon_cutoff + 1), g % (model.photon_cutoff + 1));
                h[(a, a)] = model.diagonal(s, n);
                model.raising(s, n, |other, amp| {
                    let b = position[other];
                    h[(a, b)] += amp;
                    h[(b, a)] += amp;
                });
            }
            let eig = h.symmetric_eigen();
            blocks.push(Block {
                basis,
                values: eig.eigenvalues,
                vectors: eig.eigenvectors,
            });
        }
        Ok(Spectrum {
            model: model.clone(),
            blocks,
        })
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        let mut all: Vec<f64> = self.blocks.iter().flat_map(|b| b.values.iter().copied()).collect();
        all.sort_by(f64::total_cmp);
        all
    }

    pub fn thermal(&self, beta: f64) -> Result<ThermalObservables> {
        if !(beta >= 0.0 && beta.is_finite()) {
            return Err(Error::field("beta", format!("{beta} must be finite and >= 0")));
        }
        let model = &self.model;
        let m1 = model.photon_cutoff + 1;
        let e0 = self
            .blocks
            .iter()
            .flat_map(|b| b.values.iter())
            .fold(f64::INFINITY, |a, &e| a.min(e));
        let (mut z, mut photons, mut sz, mut sx, mut energy, mut trace, mut top) =
            (0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0);
        let n = model.n_spins;
        let single_block = self.blocks.len() == 1;
        for block in &self.blocks {
            let weights: Vec<f64> = block.values.iter().map(|&e| (-beta * (e - e0)).exp()).collect();
            z += weights.iter().sum::<f64>();
            energy += weights.iter().zip(block.values.iter()).map(|(w, e)| w * e).sum::<f64>();
            for (a, &g) in block.basis.iter().enumerate() {
                let row = block.vectors.row(a);
                let p: f64 = row.iter().zip(&weights).map(|(v, w)| w * v * v).sum();
                let (s, k) = (g / m1, g % m1);
                trace += p;
                photons += p * k as f64;
                sz += p * model.weighted_sz(s);
                if k == model.photon_cutoff {
                    top += p;
                }
            }
            // sx connects the two parity sectors, so it only survives with a drive.
            if single_block {
                let position: std::collections::HashMap<usize, usize> =
                    block.basis.iter().enumerate().map(|(a, &g)| (g, a)).collect();
                for (a, &g) in block.basis.iter().enumerate() {
                    let (s, k) = (g / m1, g % m1);
                    for i in 0..n {
                        let b = position[&model.index(s ^ (1 << i), k)];
                        sx += (0..weights.len())
                            .map(|e| weights[e] * block.vectors[(a, e)] * block.vectors[(b, e)])
                            .sum::<f64>();
                    }
                }
            }
        }
        let mean_photons = photons / z;
        Ok(ThermalObservables {
            beta,
            mean_photons,
            sz_weighted: sz / z,
            sx_mean: sx / (z * n as f64),
            lambda_est: (mean_photons / n as f64).sqrt(),
            mean_energy: energy / z,
            trace_error: (trace / z - 1.0).abs(),
            top_occupancy: top / z,
        })
    }
}

pub fn thermal_observables(model: &MicroscopicModel, beta_dim: f64) -> Result<ThermalObservables> {
    Spectrum::new(model)?.thermal(beta_dim)
}

/// Weighted magnetization with `bias` added to the longitudinal field.
pub fn symmetry_breaking_probe(model: &MicroscopicModel, beta_dim: f64, bias: f64) -> Result<f64> {
    let mut biased = model.clone();
    biased.fields.h += bias;
    Ok(thermal_observables(&biased, beta_dim)?.sz_weighted)
}

/// Zero-bias intercept of a least-squares line through the probes at
/// [`PROBE_BIASES`].
pub fn extrapolated_order(model: &MicroscopicModel, beta_dim: f64) -> Result<f64> {
    let pts: Vec<(f64, f64)> = PROBE_BIASES
        .iter()
        .map(|&b| Ok((b, symmetry_breaking_probe(model, beta_dim, b)?)))
        .collect::<Result<_>>()?;
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let slope = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum::<f64>()
        / pts.iter().map(|p| (p.0 - mx).powi(2)).sum::<f64>();
    Ok(my - slope * mx)
}
