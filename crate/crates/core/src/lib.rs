//! Mean-field theory of the Dicke-Ising model on annealed complex networks.
//!
//! Spins sit on the nodes of a network whose couplings are replaced by their
//! annealed averages `J k_i k_j / (N <k>)`. Every spin feels a classical
//! longitudinal field and couples to a single quantized transverse mode. Two
//! order parameters describe the equilibrium state:
//!
//! * `s_z`, the degree-weighted magnetization along `z`;
//! * `lambda`, the normalized transverse field amplitude `|alpha| / sqrt(N)`.
//!
//! The crate is `no_std` (with `alloc`) and purely computational:
//!
//! * [`degree`] holds the degree distributions (regular, Poisson, power law),
//!   their moments, the `zeta = <k^2>/<k>` statistic and the large-`N` closed
//!   forms for power-law networks;
//! * [`meanfield`] solves the coupled self-consistency equations, enumerates
//!   every fixed point and picks the equilibrium branch by free energy;
//! * [`boundary`] evaluates closed-form critical temperatures, couplings and
//!   node counts and locates transitions by bisection on the solver;
//! * [`netgen`] samples concrete regular, Erdős–Rényi and Barabási–Albert
//!   graphs and computes their empirical statistics.
//!
//! All quantities are dimensionless: couplings and fields are measured in
//! units of the spin-field coupling `chi`, so `theta = 4J/chi`,
//! `h_field = h/chi`, `omega_a = omega/chi` and `beta` is `chi / T`.
#![no_std]

extern crate alloc;

pub mod boundary;
pub mod degree;
mod error;
mod math;
pub mod meanfield;
pub mod netgen;
pub mod quad;
pub mod roots;

pub use degree::{DegreeDistribution, DegreeStats};
pub use error::{Error, Result};
pub use meanfield::{ModelParams, OrderParameters, Phase, SolutionBranch};
pub use netgen::NetworkSample;
