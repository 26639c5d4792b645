//! Sweeps, file formats and an exact small-system oracle for the mean-field
//! Dicke-Ising network model in [`netdicke_core`].
//!
//! * [`config`] reads flat dotted-key configuration files;
//! * [`sweep`] evaluates one-variable sweeps on a worker pool;
//! * [`figures`] runs the bundled figure presets;
//! * [`output`] writes CSV and JSON datasets;
//! * [`edgelist`] reads and writes sampled networks;
//! * [`oracle`] diagonalizes the microscopic Hamiltonian for a few spins.

pub mod config;
pub mod edgelist;
pub mod error;
pub mod figures;
pub mod oracle;
pub mod output;
pub mod sweep;

pub use error::{Error, Result};
