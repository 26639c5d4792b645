//! Concrete network samples and their empirical statistics.
//!
//! All generators draw from ChaCha8 seeded with the caller's 64-bit seed; each
//! generator family uses its own stream, so the same seed gives unrelated
//! regular, ER and BA samples.

use alloc::collections::BTreeSet;
use alloc::vec;
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::degree::DegreeStats;
use crate::error::{Error, Result};

const REGULAR_RESTARTS: usize = 200;
const RANDOM_PICKS: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Generator {
    Regular { k0: usize },
    ErdosRenyi { mean_k: f64 },
    BarabasiAlbert { m_links: usize },
    /// Read from an edge list.
    External,
}

impl Generator {
    pub fn name(&self) -> &'static str {
        match self {
            Generator::Regular { .. } => "regular",
            Generator::ErdosRenyi { .. } => "er",
            Generator::BarabasiAlbert { .. } => "ba",
            Generator::External => "external",
        }
    }

    fn stream(&self) -> u64 {
        match self {
            Generator::Regular { .. } => 1,
            Generator::ErdosRenyi { .. } => 2,
            Generator::BarabasiAlbert { .. } => 3,
            Generator::External => 0,
        }
    }
}

/// A simple undirected graph. Edges are stored as `(u, v)` with `u < v`,
/// sorted lexicographically.
#[derive(Debug, Clone, PartialEq)]
pub struct NetworkSample {
    pub n_nodes: usize,
    pub edges: Vec<(usize, usize)>,
    pub degree_seq: Vec<usize>,
    pub seed: u64,
    pub generator: Generator,
}

impl NetworkSample {
    /// Builds a sample from an edge list, rejecting self-loops, duplicates and
    /// out-of-range endpoints.
    pub fn from_edges(
        n_nodes: usize,
        edges: impl IntoIterator<Item = (usize, usize)>,
        seed: u64,
        generator: Generator,
    ) -> Result<Self> {
        let mut set = BTreeSet::new();
        for (a, b) in edges {
            if a == b {
                return Err(Error::invalid("edge", a as f64, "self-loop"));
            }
            if a.max(b) >= n_nodes {
                return Err(Error::invalid("edge", a.max(b) as f64, "endpoint out of range"));
            }
            if !set.insert((a.min(b), a.max(b))) {
                return Err(Error::invalid("edge", a as f64, "duplicate edge"));
            }
        }
        Ok(Self::from_set(n_nodes, set, seed, generator))
    }

    fn from_set(
        n_nodes: usize,
        set: BTreeSet<(usize, usize)>,
        seed: u64,
        generator: Generator,
    ) -> Self {
        let mut degree_seq = vec![0; n_nodes];
        for &(a, b) in &set {
            degree_seq[a] += 1;
            degree_seq[b] += 1;
        }
        NetworkSample {
            n_nodes,
            edges: set.into_iter().collect(),
            degree_seq,
            seed,
            generator,
        }
    }

    /// Sorted neighbour lists.
    pub fn adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.n_nodes];
        for &(a, b) in &self.edges {
            adj[a].push(b);
            adj[b].push(a);
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        adj
    }
}

/// The generator stream used for `(seed, stream)`.
pub fn sample_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Uniform-ish random `k0`-regular simple graph by sequential pairing of
/// half-edges (Steger–Wormald), restarting when the pairing gets stuck. Dense
/// targets (`k0 > n/2`) are built as complements of sparse ones.
pub fn generate_regular(n: usize, k0: usize, seed: u64) -> Result<NetworkSample> {
    if k0 >= n {
        return Err(Error::invalid("k0", k0 as f64, "must be smaller than n"));
    }
    if (n * k0) % 2 != 0 {
        return Err(Error::invalid("k0", k0 as f64, "n * k0 must be even"));
    }
    let generator = Generator::Regular { k0 };
    let mut rng = sample_rng(seed, generator.stream());
    let complement = 2 * k0 > n;
    let target = if complement { n - 1 - k0 } else { k0 };
    let sparse = regular_pairing(n, target, &mut rng)?;
    let set = if complement {
        let mut all = BTreeSet::new();
        for a in 0..n {
            for b in a + 1..n {
                if !sparse.contains(&(a, b)) {
                    all.insert((a, b));
                }
            }
        }
        all
    } else {
        sparse
    };
    Ok(NetworkSample::from_set(n, set, seed, generator))
}

fn regular_pairing(n: usize, k: usize, rng: &mut ChaCha8Rng) -> Result<BTreeSet<(usize, usize)>> {
    'restart: for _ in 0..REGULAR_RESTARTS {
        let mut points: Vec<usize> = (0..n).flat_map(|v| core::iter::repeat_n(v, k)).collect();
        let mut edges = BTreeSet::new();
        while !points.is_empty() {
            let suitable = |i: usize, j: usize, edges: &BTreeSet<(usize, usize)>| {
                let (a, b) = (points[i], points[j]);
                a != b && !edges.contains(&(a.min(b), a.max(b)))
            };
            let mut pick = None;
            for _ in 0..RANDOM_PICKS {
                let i = rng.random_range(0..points.len());
                let j = rng.random_range(0..points.len());
                if i != j && suitable(i, j, &edges) {
                    pick = Some((i, j));
                    break;
                }
            }
            if pick.is_none() {
                let mut options = Vec::new();
                for i in 0..points.len() {
                    for j in i + 1..points.len() {
                        if suitable(i, j, &edges) {
                            options.push((i, j));
                        }
                    }
                }
                if options.is_empty() {
                    continue 'restart;
                }
                pick = Some(options[rng.random_range(0..options.len())]);
            }
            let (i, j) = pick.expect("pair chosen above");
            let (a, b) = (points[i], points[j]);
            edges.insert((a.min(b), a.max(b)));
            let (hi, lo) = if i > j { (i, j) } else { (j, i) };
            points.swap_remove(hi);
            points.swap_remove(lo);
        }
        return Ok(edges);
    }
    Err(Error::Infeasible {
        attempts: REGULAR_RESTARTS,
    })
}

/// Erdős–Rényi graph: every pair linked independently with `w = mean_k / n`.
pub fn generate_er(n: usize, mean_k: f64, seed: u64) -> Result<NetworkSample> {
    if n == 0 {
        return Err(Error::invalid("n", 0.0, "must be positive"));
    }
    let w = mean_k / n as f64;
    if !(0.0..=1.0).contains(&w) {
        return Err(Error::invalid("mean_k", mean_k, "mean_k / n must lie in [0, 1]"));
    }
    let generator = Generator::ErdosRenyi { mean_k };
    let mut rng = sample_rng(seed, generator.stream());
    let mut set = BTreeSet::new();
    for a in 0..n {
        for b in a + 1..n {
            if rng.random::<f64>() < w {
                set.insert((a, b));
            }
        }
    }
    Ok(NetworkSample::from_set(n, set, seed, generator))
}

/// Barabási–Albert preferential attachment grown from a complete graph on
/// `m_links + 1` nodes; each new node attaches to `m_links` distinct targets
/// drawn proportionally to degree.
pub fn generate_ba(n: usize, m_links: usize, seed: u64) -> Result<NetworkSample> {
    if m_links == 0 {
        return Err(Error::invalid("m_links", 0.0, "must be at least 1"));
    }
    if n <= m_links {
        return Err(Error::invalid("n", n as f64, "must exceed m_links"));
    }
    let generator = Generator::BarabasiAlbert { m_links };
    let mut rng = sample_rng(seed, generator.stream());
    let mut set = BTreeSet::new();
    // Every edge endpoint once: sampling from it is sampling by degree.
    let mut repeated = Vec::with_capacity(2 * n * m_links);
    let core_size = (m_links + 1).min(n);
    for a in 0..core_size {
        for b in a + 1..core_size {
            set.insert((a, b));
            repeated.push(a);
            repeated.push(b);
        }
    }
    let mut targets = Vec::with_capacity(m_links);
    for v in core_size..n {
        targets.clear();
        while targets.len() < m_links {
            let t = repeated[rng.random_range(0..repeated.len())];
            if !targets.contains(&t) {
                targets.push(t);
            }
        }
        for &t in &targets {
            set.insert((t, v));
            repeated.push(t);
            repeated.push(v);
        }
    }
    Ok(NetworkSample::from_set(n, set, seed, generator))
}

/// Annealed coupling matrix `J k_i k_j / (N <k>)` (row-major, zero diagonal).
#[derive(Debug, Clone, PartialEq)]
pub struct AnnealedCouplings {
    pub n: usize,
    pub matrix: Vec<f64>,
    /// Largest connection probability before clamping.
    pub max_probability: f64,
    /// Number of ordered pairs whose probability exceeded 1 and was clamped.
    pub clamped: usize,
}

impl AnnealedCouplings {
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.matrix[i * self.n + j]
    }
}

pub fn annealed_couplings(degree_seq: &[f64], j: f64) -> Result<AnnealedCouplings> {
    let n = degree_seq.len();
    if n < 2 {
        return Err(Error::invalid("n", n as f64, "need at least two nodes"));
    }
    if let Some(&k) = degree_seq.iter().find(|&&k| !(k >= 0.0 && k.is_finite())) {
        return Err(Error::invalid("degree", k, "must be finite and >= 0"));
    }
    let total: f64 = degree_seq.iter().sum();
    if total <= 0.0 {
        return Err(Error::invalid("degree sum", total, "must be positive"));
    }
    let mut matrix = vec![0.0; n * n];
    let mut max_probability: f64 = 0.0;
    let mut clamped = 0;
    for a in 0..n {
        for b in 0..n {
            if a == b {
                continue;
            }
            let p = degree_seq[a] * degree_seq[b] / total;
            max_probability = max_probability.max(p);
            let p = if p > 1.0 {
                clamped += 1;
                1.0
            } else {
                p
            };
            matrix[a * n + b] = j * p;
        }
    }
    Ok(AnnealedCouplings {
        n,
        matrix,
        max_probability,
        clamped,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EmpiricalStats {
    pub stats: DegreeStats,
    /// Mean local clustering; nodes of degree below 2 contribute 0.
    pub clustering: f64,
}

/// Sample moments of the degree sequence (`zeta = 0` for an edgeless graph)
/// and the mean local clustering coefficient.
pub fn empirical_stats(sample: &NetworkSample) -> Result<EmpiricalStats> {
    let n = sample.n_nodes;
    if n == 0 {
        return Err(Error::invalid("n_nodes", 0.0, "empty sample"));
    }
    let nf = n as f64;
    let mean_k = sample.degree_seq.iter().map(|&k| k as f64).sum::<f64>() / nf;
    let mean_k2 = sample
        .degree_seq
        .iter()
        .map(|&k| (k * k) as f64)
        .sum::<f64>()
        / nf;
    let zeta = if mean_k > 0.0 { mean_k2 / mean_k } else { 0.0 };

    let adj = sample.adjacency();
    let mut total = 0.0;
    for list in &adj {
        let k = list.len();
        if k < 2 {
            continue;
        }
        let mut links = 0usize;
        for (x, &u) in list.iter().enumerate() {
            for &w in &list[x + 1..] {
                if adj[u].binary_search(&w).is_ok() {
                    links += 1;
                }
            }
        }
        total += links as f64 / (k * (k - 1) / 2) as f64;
    }
    Ok(EmpiricalStats {
        stats: DegreeStats {
            mean_k,
            mean_k2,
            zeta,
        },
        clustering: total / nf,
    })
}
