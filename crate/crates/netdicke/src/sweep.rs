//! One-variable parameter sweeps evaluated on a worker pool.
//!
//! Column schemas per subcommand (the swept variable comes first when a sweep
//! is configured, `error` always comes last):
//!
//! | subcommand | columns |
//! |---|---|
//! | solve | T, s_z, lambda, free_energy, phase, residual_sz, residual_lambda, branches |
//! | boundary | T_c, lambda_c, zeta, method |
//! | quantum | omega_ac, lambda0, lambda_closed, superradiant, lambda_solver |
//! | stats | mean_k, mean_k2, zeta, mean_k_closed, zeta_closed, k_max |
//! | netgen | n, edges, mean_k, mean_k2, zeta, clustering, max_degree, seed |
//! | oracle | T, beta, mean_photons, sz_weighted, sx_mean, lambda_est, trace_error, top_occupancy, mean_energy |

use std::path::Path;
use std::str::FromStr;

use netdicke_core::boundary::{
    locate_tc_by_bisection, locate_tc_fixed_lambda, pm_fm_boundary, quantum_critical_frequency,
    quantum_order_parameter, tc_high_temperature, BoundaryMethod, OrderParam,
};
use netdicke_core::degree::power_law_closed_forms;
use netdicke_core::meanfield::solve_self_consistent;
use netdicke_core::netgen::{empirical_stats, generate_ba, generate_er, generate_regular};
use netdicke_core::{DegreeDistribution, ModelParams, NetworkSample};
use rayon::prelude::*;

use crate::config::Config;
use crate::edgelist;
use crate::error::{Error, Result};
use crate::oracle::{Fields, MicroscopicModel, Spectrum, CUTOFF_TOLERANCE};
use crate::output::{Cell, Dataset, Row};

/// Keys whose swept values are rounded to integers.
pub const INTEGER_KEYS: &[&str] = &[
    "model.n_nodes",
    "netgen.n",
    "netgen.k0",
    "netgen.m",
    "oracle.n_spins",
    "oracle.cutoff",
    "run.seed",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Subcommand {
    Solve,
    Boundary,
    Quantum,
    Stats,
    Netgen,
    Oracle,
    Figure,
}

impl Subcommand {
    pub fn name(self) -> &'static str {
        match self {
            Subcommand::Solve => "solve",
            Subcommand::Boundary => "boundary",
            Subcommand::Quantum => "quantum",
            Subcommand::Stats => "stats",
            Subcommand::Netgen => "netgen",
            Subcommand::Oracle => "oracle",
            Subcommand::Figure => "figure",
        }
    }

    pub fn columns(self) -> &'static [&'static str] {
        match self {
            Subcommand::Solve => &[
                "T", "s_z", "lambda", "free_energy", "phase", "residual_sz", "residual_lambda", "branches",
            ],
            Subcommand::Boundary => &["T_c", "lambda_c", "zeta", "method"],
            Subcommand::Quantum => &["omega_ac", "lambda0", "lambda_closed", "superradiant", "lambda_solver"],
            Subcommand::Stats => &["mean_k", "mean_k2", "zeta", "mean_k_closed", "zeta_closed", "k_max"],
            Subcommand::Netgen => &["n", "edges", "mean_k", "mean_k2", "zeta", "clustering", "max_degree", "seed"],
            Subcommand::Oracle => &[
                "T", "beta", "mean_photons", "sz_weighted", "sx_mean", "lambda_est", "trace_error",
                "top_occupancy", "mean_energy",
            ],
            Subcommand::Figure => &[],
        }
    }
}

impl FromStr for Subcommand {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "solve" => Subcommand::Solve,
            "boundary" => Subcommand::Boundary,
            "quantum" => Subcommand::Quantum,
            "stats" => Subcommand::Stats,
            "netgen" => Subcommand::Netgen,
            "oracle" => Subcommand::Oracle,
            "figure" => Subcommand::Figure,
            other => return Err(Error::Config(format!("unknown subcommand `{other}`"))),
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scale {
    Linear,
    Log,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepVar {
    pub name: String,
    pub min: f64,
    pub max: f64,
    pub steps: usize,
    pub scale: Scale,
}

impl SweepVar {
    pub fn values(&self) -> Vec<f64> {
        if self.steps == 1 {
            return vec![self.min];
        }
        let last = (self.steps - 1) as f64;
        (0..self.steps)
            .map(|i| {
                let f = i as f64 / last;
                match self.scale {
                    Scale::Linear => self.min + f * (self.max - self.min),
                    Scale::Log => (self.min.ln() + f * (self.max.ln() - self.min.ln())).exp(),
                }
            })
            .map(|x| x.clamp(self.min.min(self.max), self.max.max(self.min)))
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub subcommand: Subcommand,
    pub sweep: Option<SweepVar>,
    pub config: Config,
    pub workers: usize,
    pub seed: u64,
}

impl SweepSpec {
    pub fn from_config(subcommand: Subcommand, config: Config) -> Result<Self> {
        if subcommand == Subcommand::Figure {
            return Err(Error::Config("figures are run through `run_figure`".into()));
        }
        let sweep = match config.text("sweep.var")? {
            None => {
                if ["sweep.min", "sweep.max", "sweep.steps"].iter().any(|k| config.contains(k)) {
                    return Err(config.error("sweep.var", "missing while other sweep keys are set"));
                }
                None
            }
            Some(name) => {
                if name.starts_with("sweep.") || !crate::config::KNOWN_KEYS.contains(&name) {
                    return Err(config.error("sweep.var", format!("`{name}` cannot be swept")));
                }
                let steps = config.count("sweep.steps")?.unwrap_or(1) as usize;
                if steps == 0 {
                    return Err(config.error("sweep.steps", "must be at least 1"));
                }
                let min = config.require("sweep.min")?;
                let max = if steps == 1 {
                    config.number_or("sweep.max", min)?
                } else {
                    config.require("sweep.max")?
                };
                if steps > 1 && !(min < max) {
                    return Err(config.error("sweep.max", format!("must exceed sweep.min ({min})")));
                }
                let scale = match config.text("sweep.scale")?.unwrap_or("linear") {
                    "linear" | "lin" => Scale::Linear,
                    "log" => Scale::Log,
                    other => return Err(config.error("sweep.scale", format!("`{other}` is not linear or log"))),
                };
                if scale == Scale::Log && !(min > 0.0) {
                    return Err(config.error("sweep.min", "log sweeps need a positive range"));
                }
                Some(SweepVar {
                    name: name.to_owned(),
                    min,
                    max,
                    steps,
                    scale,
                })
            }
        };
        Ok(SweepSpec {
            subcommand,
            sweep,
            workers: config.workers()?,
            seed: config.seed()?,
            config,
        })
    }

    pub fn columns(&self) -> Vec<String> {
        let mut cols: Vec<String> = self.sweep.iter().map(|s| s.name.clone()).collect();
        cols.extend(self.subcommand.columns().iter().map(|c| (*c).to_owned()));
        cols
    }
}

/// Evaluate every row (in parallel when `workers > 1`) and assemble the
/// dataset in sweep order. Failed rows are kept with NaN cells; only a sweep
/// in which every row fails is an error.
pub fn run_sweep(spec: &SweepSpec) -> Result<Dataset> {
    let values: Vec<Option<f64>> = match &spec.sweep {
        Some(s) if INTEGER_KEYS.contains(&s.name.as_str()) => {
            s.values().into_iter().map(|x| Some(x.round())).collect()
        }
        Some(s) => s.values().into_iter().map(Some).collect(),
        None => vec![None],
    };
    let cache = OracleCache::prepare(spec)?;
    let eval = |(i, v): (usize, &Option<f64>)| -> (Option<f64>, Result<Vec<Cell>>) {
        let mut cfg = spec.config.clone();
        if let (Some(s), Some(x)) = (&spec.sweep, v) {
            cfg.set_number(&s.name, *x);
        }
        let row_seed = spec.seed.wrapping_add(i as u64);
        (*v, evaluate(spec.subcommand, &cfg, row_seed, cache.as_ref(), values.len() == 1))
    };
    let results: Vec<_> = if spec.workers > 1 {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(spec.workers)
            .build()
            .map_err(|e| Error::Config(format!("worker pool: {e}")))?;
        pool.install(|| values.par_iter().enumerate().map(eval).collect())
    } else {
        values.iter().enumerate().map(eval).collect()
    };

    let width = spec.subcommand.columns().len();
    let mut data = Dataset::new(spec.columns());
    data.meta("netdicke", env!("CARGO_PKG_VERSION"));
    data.meta("subcommand", spec.subcommand.name());
    data.meta("seed", spec.seed.to_string());
    for (k, v) in spec.config.entries() {
        if k != "run.workers" {
            data.meta(k.clone(), v.to_string());
        }
    }
    let mut first_error = None;
    for (v, res) in results {
        let mut cells: Vec<Cell> = v.map(Cell::Num).into_iter().collect();
        let error = match res {
            Ok(out) => {
                cells.extend(out);
                None
            }
            Err(e) => {
                cells.extend((0..width).map(|_| Cell::Num(f64::NAN)));
                let code = e.code().to_owned();
                first_error.get_or_insert(e);
                Some(code)
            }
        };
        data.rows.push(Row { cells, error });
    }
    if data.failed_rows() == data.rows.len() {
        let e = first_error.expect("at least one row");
        return Err(if e.is_config() { e } else { Error::SweepFailed(e.to_string()) });
    }
    if spec.subcommand == Subcommand::Oracle {
        if let Ok(model) = oracle_model(&spec.config) {
            if model.clamped_pairs > 0 {
                data.meta(
                    "warning",
                    format!("{} annealed pair probabilities exceeded 1 and were clamped", model.clamped_pairs),
                );
            }
        }
        let tops = data.numbers("top_occupancy").unwrap_or_default();
        let short = tops.iter().filter(|&&t| t >= CUTOFF_TOLERANCE).count();
        if short > 0 {
            data.meta(
                "warning",
                format!("photon cutoff insufficient in {short} rows (top-Fock occupancy >= {CUTOFF_TOLERANCE:e})"),
            );
        }
    }
    Ok(data)
}

/// The diagonalized oracle model when only the temperature varies.
struct OracleCache(Spectrum);

impl OracleCache {
    fn prepare(spec: &SweepSpec) -> Result<Option<Self>> {
        let temperature_only = spec
            .sweep
            .as_ref()
            .is_some_and(|s| s.name == "model.t" || s.name == "model.beta");
        if spec.subcommand != Subcommand::Oracle || !temperature_only {
            return Ok(None);
        }
        Ok(Some(OracleCache(Spectrum::new(&oracle_model(&spec.config)?)?)))
    }
}

fn evaluate(
    sub: Subcommand,
    cfg: &Config,
    seed: u64,
    cache: Option<&OracleCache>,
    single: bool,
) -> Result<Vec<Cell>> {
    match sub {
        Subcommand::Solve => solve_row(cfg),
        Subcommand::Boundary => boundary_row(cfg),
        Subcommand::Quantum => quantum_row(cfg),
        Subcommand::Stats => stats_row(cfg),
        Subcommand::Netgen => netgen_row(cfg, seed, single),
        Subcommand::Oracle => oracle_row(cfg, cache),
        Subcommand::Figure => Err(Error::Config("figure rows are not evaluated directly".into())),
    }
}

/// Model parameters with `beta = 1` when no temperature is configured.
fn template(cfg: &Config) -> Result<ModelParams> {
    if cfg.contains("model.t") || cfg.contains("model.beta") {
        return cfg.model();
    }
    let mut c = cfg.clone();
    c.set_number("model.beta", 1.0);
    c.model()
}

fn solve_row(cfg: &Config) -> Result<Vec<Cell>> {
    let p = cfg.model()?;
    let d = cfg.distribution()?;
    let sol = solve_self_consistent(&p, &d)?;
    let eq = sol.equilibrium();
    Ok(vec![
        p.temperature().into(),
        eq.order.s_z.into(),
        eq.order.lambda.into(),
        eq.free_energy.into(),
        eq.phase.label().into(),
        eq.residual_sz.into(),
        eq.residual_lambda.into(),
        Cell::Int(sol.branches.len() as i64),
    ])
}

fn boundary_row(cfg: &Config) -> Result<Vec<Cell>> {
    let p = template(cfg)?;
    let d = cfg.distribution()?;
    let zeta = d.zeta()?;
    let method = match cfg.text("boundary.method")?.unwrap_or("closed_form") {
        "closed_form" => BoundaryMethod::ClosedForm,
        "bisection" | "bisection_on_solver" => BoundaryMethod::BisectionOnSolver,
        other => return Err(cfg.error("boundary.method", format!("unknown method `{other}`"))),
    };
    let (t_c, lambda_c) = match cfg.text("boundary.kind")?.unwrap_or("pm_fm") {
        "pm_fm" => {
            let lambda = match (cfg.number("boundary.lambda")?, cfg.number("boundary.photons")?) {
                (Some(_), Some(_)) => {
                    return Err(cfg.error("boundary.photons", "give boundary.lambda or boundary.photons, not both"))
                }
                (Some(l), None) => l,
                (None, Some(nph)) => (nph / p.n_nodes as f64).sqrt(),
                (None, None) => 0.0,
            };
            let t = match method {
                BoundaryMethod::ClosedForm => pm_fm_boundary(lambda, p.theta, zeta)?,
                BoundaryMethod::BisectionOnSolver => {
                    let top = p.theta * zeta;
                    let lo = cfg.number_or("boundary.t_lo", 1e-3 * top)?;
                    let hi = cfg.number_or("boundary.t_hi", top)?;
                    locate_tc_fixed_lambda(&p, &d, lambda, lo, hi)?.t_c
                }
            };
            (t, lambda)
        }
        "sr" => {
            let t = match method {
                BoundaryMethod::ClosedForm => 1.0 / tc_high_temperature(p.omega_a),
                BoundaryMethod::BisectionOnSolver => {
                    let lo = cfg.number_or("boundary.t_lo", 0.01)?;
                    let hi = cfg.number_or("boundary.t_hi", 10.0)?;
                    locate_tc_by_bisection(&p, &d, OrderParam::Lambda, lo, hi)?.t_c
                }
            };
            (t, 0.0)
        }
        other => return Err(cfg.error("boundary.kind", format!("`{other}` is not pm_fm or sr"))),
    };
    Ok(vec![t_c.into(), lambda_c.into(), zeta.into(), method.label().into()])
}

fn quantum_row(cfg: &Config) -> Result<Vec<Cell>> {
    let p = template(cfg)?;
    let d = cfg.distribution()?;
    let qc = quantum_critical_frequency(p.theta, p.h_field, &d)?;
    let q = quantum_order_parameter(p.omega_a, &qc)?;
    let cold = ModelParams {
        beta: cfg.number_or("quantum.beta", 1e5)?,
        ..p
    };
    let solver = solve_self_consistent(&cold, &d)?.equilibrium().order.lambda;
    Ok(vec![
        qc.omega_ac.into(),
        qc.lambda0.into(),
        q.lambda.into(),
        Cell::Int(q.superradiant as i64),
        solver.into(),
    ])
}

fn stats_row(cfg: &Config) -> Result<Vec<Cell>> {
    let d = cfg.distribution()?;
    let s = d.stats()?;
    let closed = match d {
        DegreeDistribution::PowerLaw { gamma, k_min, .. } => power_law_closed_forms(gamma, k_min, cfg.n_nodes()?)?,
        _ => s,
    };
    Ok(vec![
        s.mean_k.into(),
        s.mean_k2.into(),
        s.zeta.into(),
        closed.mean_k.into(),
        closed.zeta.into(),
        d.support().1.into(),
    ])
}

fn sample_network(cfg: &Config, seed: u64) -> Result<NetworkSample> {
    let n = cfg.count("netgen.n")?.unwrap_or(cfg.n_nodes()?) as usize;
    let gen = cfg.text("netgen.generator")?.ok_or_else(|| Error::field("netgen.generator", "missing"))?;
    let need = |key: &str| cfg.count(key)?.ok_or_else(|| cfg.error(key, "missing")).map(|v| v as usize);
    Ok(match gen {
        "regular" => generate_regular(n, need("netgen.k0")?, seed)?,
        "er" | "random" => generate_er(n, cfg.require("netgen.mean_k")?, seed)?,
        "ba" | "scale_free" => generate_ba(n, need("netgen.m")?, seed)?,
        other => return Err(cfg.error("netgen.generator", format!("unknown generator `{other}`"))),
    })
}

fn netgen_row(cfg: &Config, seed: u64, single: bool) -> Result<Vec<Cell>> {
    let sample = sample_network(cfg, seed)?;
    if let Some(path) = cfg.text("netgen.edges_out")? {
        if !single {
            return Err(cfg.error("netgen.edges_out", "only available without a sweep"));
        }
        edgelist::write(&sample, Path::new(path))?;
    }
    let st = empirical_stats(&sample)?;
    Ok(vec![
        Cell::Int(sample.n_nodes as i64),
        Cell::Int(sample.edges.len() as i64),
        st.stats.mean_k.into(),
        st.stats.mean_k2.into(),
        st.stats.zeta.into(),
        st.clustering.into(),
        Cell::Int(sample.degree_seq.iter().copied().max().unwrap_or(0) as i64),
        Cell::Int(seed as i64),
    ])
}

/// Microscopic model from the dimensionless parameters (`chi = 1`).
pub fn oracle_model(cfg: &Config) -> Result<MicroscopicModel> {
    let p = template(cfg)?;
    let (mut fields, j) = Fields::from_params(&p);
    fields.h += cfg.number_or("oracle.bias", 0.0)?;
    let cutoff = cfg.count("oracle.cutoff")?.unwrap_or(40) as usize;
    match cfg.text("oracle.coupling")?.unwrap_or("complete") {
        "complete" => {
            let n = cfg.count("oracle.n_spins")?.unwrap_or(6) as usize;
            MicroscopicModel::complete_graph(n, j, fields, cutoff)
        }
        "annealed" => {
            let degrees = cfg
                .numbers("oracle.degrees")?
                .ok_or_else(|| Error::field("oracle.degrees", "required for annealed coupling"))?;
            MicroscopicModel::annealed(degrees, j, fields, cutoff)
        }
        "edges" => {
            let path = cfg
                .text("oracle.edges")?
                .ok_or_else(|| Error::field("oracle.edges", "required for edge-list coupling"))?;
            MicroscopicModel::from_sample(&edgelist::read(Path::new(path))?, j, fields, cutoff)
        }
        other => Err(cfg.error("oracle.coupling", format!("`{other}` is not complete, annealed or edges"))),
    }
}

fn oracle_row(cfg: &Config, cache: Option<&OracleCache>) -> Result<Vec<Cell>> {
    let beta = template(cfg)?.beta;
    let obs = match cache {
        Some(c) => c.0.thermal(beta)?,
        None => Spectrum::new(&oracle_model(cfg)?)?.thermal(beta)?,
    };
    Ok(vec![
        (1.0 / beta).into(),
        beta.into(),
        obs.mean_photons.into(),
        obs.sz_weighted.into(),
        obs.sx_mean.into(),
        obs.lambda_est.into(),
        obs.trace_error.into(),
        obs.top_occupancy.into(),
        obs.mean_energy.into(),
    ])
}
