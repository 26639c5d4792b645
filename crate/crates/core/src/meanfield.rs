//! Self-consistency equations for `(s_z, lambda)` and the branch solver.
//!
//! Per degree class the spins see an effective gap
//! `Gamma(k) = sqrt((theta s_z k + h)^2 + 4 lambda^2)`. The equations are
//!
//! ```text
//! s_z   = E[ (k / <k>) (theta s_z k + h) tanh(beta Gamma / 2) / Gamma ]
//! omega = E[ tanh(beta Gamma / 2) / Gamma ]            (only when lambda > 0)
//! ```
//!
//! and their solutions are the stationary points of the per-node free energy
//! `f = omega lambda^2 + theta <k> s_z^2 / 4 - E[ln 2cosh(beta Gamma / 2)] / beta`.
//!
//! The solver eliminates `lambda` first: the right side of the second equation
//! decreases strictly in `lambda`, so for every `s_z` there is at most one
//! superradiant `lambda*(s_z)`. The remaining one-dimensional equations (one
//! with `lambda = 0`, one with `lambda = lambda*(s_z)`) are scanned on a fixed
//! grid over `[-1, 1]` that is refined logarithmically near `0` and `+-1`, and
//! every sign change is polished with Brent's method. This finds all
//! transversal roots, including the ones that a damped fixed-point iteration
//! reaches only very slowly near a critical point.

use alloc::vec::Vec;
use core::fmt;

use crate::degree::DegreeDistribution;
use crate::error::{Error, Result};
use crate::math::{ln_2cosh, tanh_ratio};
use crate::roots::brent;

/// `lambda` above this counts as superradiant.
pub const LAMBDA_TOL: f64 = 1e-6;
/// `|s_z|` above this counts as ferromagnetic.
pub const S_TOL: f64 = 1e-6;
/// Accepted residual for both equations.
pub const RESIDUAL_TOL: f64 = 1e-10;
/// Branches closer than this in `(s_z, lambda)` are merged.
pub const DEDUP_TOL: f64 = 1e-6;

const UNIFORM_CELLS: usize = 128;
const BRENT_ITER: usize = 200;

/// Dimensionless model inputs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelParams {
    /// `4 J / chi`.
    pub theta: f64,
    /// `h / chi`.
    pub h_field: f64,
    /// `omega_a / chi`.
    pub omega_a: f64,
    /// `chi / T`.
    pub beta: f64,
    pub n_nodes: u64,
}

impl ModelParams {
    pub fn new(theta: f64, h_field: f64, omega_a: f64, beta: f64, n_nodes: u64) -> Result<Self> {
        let p = ModelParams {
            theta,
            h_field,
            omega_a,
            beta,
            n_nodes,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.theta >= 0.0 && self.theta.is_finite()) {
            return Err(Error::invalid("theta", self.theta, "must be finite and >= 0"));
        }
        if !(self.h_field >= 0.0 && self.h_field.is_finite()) {
            return Err(Error::invalid("h_field", self.h_field, "must be finite and >= 0"));
        }
        if !(self.omega_a > 0.0 && self.omega_a.is_finite()) {
            return Err(Error::invalid("omega_a", self.omega_a, "must be positive"));
        }
        if !(self.beta > 0.0 && self.beta.is_finite()) {
            return Err(Error::invalid("beta", self.beta, "must be positive and finite"));
        }
        if self.n_nodes < 2 {
            return Err(Error::invalid("n_nodes", self.n_nodes as f64, "must be at least 2"));
        }
        Ok(())
    }

    pub fn temperature(&self) -> f64 {
        1.0 / self.beta
    }

    pub fn at_temperature(self, t: f64) -> Self {
        ModelParams {
            beta: 1.0 / t,
            ..self
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OrderParameters {
    pub s_z: f64,
    pub lambda: f64,
}

impl OrderParameters {
    pub fn new(s_z: f64, lambda: f64) -> Self {
        OrderParameters { s_z, lambda }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Phase {
    PmNormal,
    FmNormal,
    PmSr,
    FmSr,
}

impl Phase {
    pub fn is_superradiant(self) -> bool {
        matches!(self, Phase::PmSr | Phase::FmSr)
    }

    pub fn is_ferromagnetic(self) -> bool {
        matches!(self, Phase::FmNormal | Phase::FmSr)
    }

    pub fn label(self) -> &'static str {
        match self {
            Phase::PmNormal => "PM-normal",
            Phase::FmNormal => "FM-normal",
            Phase::PmSr => "PM-SR",
            Phase::FmSr => "FM-SR",
        }
    }
}

impl fmt::Display for Phase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

pub fn classify(order: OrderParameters) -> Phase {
    let fm = libm::fabs(order.s_z) > S_TOL;
    let sr = order.lambda > LAMBDA_TOL;
    match (fm, sr) {
        (false, false) => Phase::PmNormal,
        (true, false) => Phase::FmNormal,
        (false, true) => Phase::PmSr,
        (true, true) => Phase::FmSr,
    }
}

/// A fixed point together with its residuals and free energy.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolutionBranch {
    pub order: OrderParameters,
    /// `s_z - rhs_sz`.
    pub residual_sz: f64,
    /// `lambda (omega_a - F)`.
    pub residual_lambda: f64,
    pub free_energy: f64,
    pub phase: Phase,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SolveDiagnostics {
    /// Grid points at which both equations were evaluated.
    pub scan_points: usize,
    /// Roots located before deduplication.
    pub candidates: usize,
    /// Roots dropped because a residual exceeded the tolerance.
    pub rejected: usize,
}

/// All fixed points, sorted by free energy (equilibrium first).
///
/// The ordering uses free-energy differences integrated directly against the
/// first branch found, and the reported `free_energy` of every branch is that
/// reference value plus its difference.
#[derive(Debug, Clone, PartialEq)]
pub struct Solution {
    pub branches: Vec<SolutionBranch>,
    pub diagnostics: SolveDiagnostics,
}

impl Solution {
    pub fn equilibrium(&self) -> &SolutionBranch {
        &self.branches[0]
    }
}

/// Per-degree gap `Gamma(k)`.
#[inline]
pub fn effective_gap(params: &ModelParams, order: OrderParameters, k: f64) -> f64 {
    let a = params.theta * order.s_z * k + params.h_field;
    libm::sqrt(a * a + 4.0 * order.lambda * order.lambda)
}

/// Degree where `theta s_z k + h` changes sign; the integrands are steep there
/// at low temperature.
fn sign_change_degree(params: &ModelParams, s_z: f64) -> Option<f64> {
    let slope = params.theta * s_z;
    if slope == 0.0 {
        return None;
    }
    let k = -params.h_field / slope;
    (k > 0.0 && k.is_finite()).then_some(k)
}

/// Integrals shared by both equations, with `<k>` computed once.
struct Model<'a> {
    params: &'a ModelParams,
    dist: &'a DegreeDistribution,
    mean_k: f64,
}

impl<'a> Model<'a> {
    fn new(params: &'a ModelParams, dist: &'a DegreeDistribution) -> Result<Self> {
        params.validate()?;
        dist.validate()?;
        Ok(Model {
            params,
            dist,
            mean_k: dist.mean_degree()?,
        })
    }

    fn breaks(&self, s_z: f64) -> Option<f64> {
        sign_change_degree(self.params, s_z)
    }

    fn rhs_sz(&self, s_z: f64, lambda: f64) -> Result<f64> {
        let p = self.params;
        let four_l2 = 4.0 * lambda * lambda;
        let mean_k = self.mean_k;
        let brk = self.breaks(s_z);
        let r = self.dist.expect(
            |k| {
                let a = p.theta * s_z * k + p.h_field;
                let gap = libm::sqrt(a * a + four_l2);
                k / mean_k * a * tanh_ratio(p.beta, gap)
            },
            brk.as_slice(),
        )?;
        // |R| < 1 exactly; round-off in a saturated integral can overshoot.
        Ok(r.clamp(-1.0, 1.0))
    }

    fn rhs_lambda_gap(&self, s_z: f64, lambda: f64) -> Result<f64> {
        let p = self.params;
        let four_l2 = 4.0 * lambda * lambda;
        let brk = self.breaks(s_z);
        self.dist.expect(
            |k| {
                let a = p.theta * s_z * k + p.h_field;
                tanh_ratio(p.beta, libm::sqrt(a * a + four_l2))
            },
            brk.as_slice(),
        )
    }

    fn free_energy(&self, s_z: f64, lambda: f64) -> Result<f64> {
        let p = self.params;
        let four_l2 = 4.0 * lambda * lambda;
        let brk = self.breaks(s_z);
        let entropy = self.dist.expect(
            |k| {
                let a = p.theta * s_z * k + p.h_field;
                ln_2cosh(0.5 * p.beta * libm::sqrt(a * a + four_l2))
            },
            brk.as_slice(),
        )?;
        Ok(p.omega_a * lambda * lambda + 0.25 * p.theta * self.mean_k * s_z * s_z
            - entropy / p.beta)
    }

    /// `f(a) - f(b)` without forming either free energy: the leading `Gamma`
    /// terms are subtracted per degree, so branches whose free energies agree
    /// to many digits (e.g. `+-s_z` at a weak field) are still ordered.
    fn free_energy_difference(&self, a: OrderParameters, b: OrderParameters) -> Result<f64> {
        let p = self.params;
        let (ds, ss) = (a.s_z - b.s_z, a.s_z + b.s_z);
        let dl2 = a.lambda * a.lambda - b.lambda * b.lambda;
        let mut breaks = Vec::with_capacity(2);
        breaks.extend(self.breaks(a.s_z));
        breaks.extend(self.breaks(b.s_z));
        let entropy = self.dist.expect(
            |k| {
                let ga = effective_gap(p, a, k);
                let gb = effective_gap(p, b, k);
                let tk = p.theta * k;
                let sq_diff = tk * ds * (tk * ss + 2.0 * p.h_field) + 4.0 * dl2;
                let gap_diff = if ga + gb > 0.0 { sq_diff / (ga + gb) } else { 0.0 };
                0.5 * p.beta * gap_diff + libm::log1p(libm::exp(-p.beta * ga))
                    - libm::log1p(libm::exp(-p.beta * gb))
            },
            &breaks,
        )?;
        Ok(p.omega_a * dl2 + 0.25 * p.theta * self.mean_k * ds * ss - entropy / p.beta)
    }

    /// Superradiant amplitude at fixed `s_z`; zero when only the normal
    /// solution exists.
    fn lambda_for(&self, s_z: f64) -> Result<f64> {
        let omega = self.params.omega_a;
        let f0 = self.rhs_lambda_gap(s_z, 0.0)? - omega;
        if f0 <= 0.0 {
            return Ok(0.0);
        }
        // F(s, lambda) <= 1 / (2 lambda), so the root lies below 1 / (2 omega);
        // saturated tanh can put it right at that bound, hence the widening.
        let mut hi = 0.5 / omega;
        let mut failure = None;
        let mut g = |l: f64| match self.rhs_lambda_gap(s_z, l) {
            Ok(v) => v - omega,
            Err(e) => {
                failure.get_or_insert(e);
                f64::NAN
            }
        };
        let mut f_hi = g(hi);
        while f_hi > 0.0 {
            hi *= 1.0 + 1e-6;
            f_hi = g(hi);
        }
        let root = brent(&mut g, 0.0, hi, f0, f_hi, 1e-15, BRENT_ITER);
        if let Some(e) = failure {
            return Err(e);
        }
        root
    }

    fn branch(&self, s_z: f64, lambda: f64) -> Result<SolutionBranch> {
        let order = OrderParameters { s_z, lambda };
        let residual_sz = s_z - self.rhs_sz(s_z, lambda)?;
        let residual_lambda = lambda * (self.params.omega_a - self.rhs_lambda_gap(s_z, lambda)?);
        Ok(SolutionBranch {
            order,
            residual_sz,
            residual_lambda,
            free_energy: self.free_energy(s_z, lambda)?,
            phase: classify(order),
        })
    }
}

pub fn rhs_sz(order: OrderParameters, params: &ModelParams, dist: &DegreeDistribution) -> Result<f64> {
    Model::new(params, dist)?.rhs_sz(order.s_z, order.lambda)
}

/// `F(s_z, lambda) = E[tanh(beta Gamma / 2) / Gamma]`; superradiant solutions
/// satisfy `F = omega_a`.
pub fn rhs_lambda_gap(
    order: OrderParameters,
    params: &ModelParams,
    dist: &DegreeDistribution,
) -> Result<f64> {
    Model::new(params, dist)?.rhs_lambda_gap(order.s_z, order.lambda)
}

/// Per-node free energy, in units of `chi`.
pub fn free_energy(
    order: OrderParameters,
    params: &ModelParams,
    dist: &DegreeDistribution,
) -> Result<f64> {
    Model::new(params, dist)?.free_energy(order.s_z, order.lambda)
}

/// The `lambda >= 0` solving the second equation at fixed `s_z` (zero if none).
pub fn lambda_for(s_z: f64, params: &ModelParams, dist: &DegreeDistribution) -> Result<f64> {
    Model::new(params, dist)?.lambda_for(s_z)
}

fn scan_grid() -> Vec<f64> {
    let mut grid: Vec<f64> = (0..=UNIFORM_CELLS)
        .map(|i| -1.0 + 2.0 * i as f64 / UNIFORM_CELLS as f64)
        .collect();
    for j in 1..=8 {
        let d = libm::pow(10.0, -(j as f64));
        grid.extend_from_slice(&[d, -d, 1.0 - d, d - 1.0]);
    }
    grid.sort_by(f64::total_cmp);
    grid.dedup();
    grid
}

/// Roots of `g` on `[-1, 1]`: exact zeros at grid points plus one Brent root
/// per sign change.
fn scan_roots<G: FnMut(f64) -> Result<f64>>(
    grid: &[f64],
    values: &[f64],
    mut g: G,
) -> Result<Vec<f64>> {
    let mut roots = Vec::new();
    for (i, (&x, &v)) in grid.iter().zip(values).enumerate() {
        if v == 0.0 {
            roots.push(x);
        }
        if i + 1 < grid.len() {
            let (x1, v1) = (grid[i + 1], values[i + 1]);
            if v != 0.0 && v1 != 0.0 && v.signum() != v1.signum() {
                let mut failure = None;
                let root = brent(
                    |s| match g(s) {
                        Ok(val) => val,
                        Err(e) => {
                            failure.get_or_insert(e);
                            f64::NAN
                        }
                    },
                    x,
                    x1,
                    v,
                    v1,
                    1e-15,
                    BRENT_ITER,
                );
                if let Some(e) = failure {
                    return Err(e);
                }
                roots.push(root?);
            }
        }
    }
    Ok(roots)
}

fn finish(model: &Model<'_>, candidates: Vec<OrderParameters>, scan_points: usize, check_lambda: bool) -> Result<Solution> {
    let mut diagnostics = SolveDiagnostics {
        scan_points,
        candidates: candidates.len(),
        rejected: 0,
    };
    let mut branches: Vec<SolutionBranch> = Vec::new();
    for c in candidates {
        let duplicate = branches.iter().any(|b| {
            libm::fabs(b.order.s_z - c.s_z) < DEDUP_TOL
                && libm::fabs(b.order.lambda - c.lambda) < DEDUP_TOL
        });
        if duplicate {
            continue;
        }
        let b = model.branch(c.s_z, c.lambda)?;
        let ok = libm::fabs(b.residual_sz) < RESIDUAL_TOL
            && (!check_lambda || libm::fabs(b.residual_lambda) < RESIDUAL_TOL)
            && b.free_energy.is_finite();
        if ok {
            branches.push(b);
        } else {
            diagnostics.rejected += 1;
        }
    }
    if branches.is_empty() {
        return Err(Error::NoConvergence {
            iterations: diagnostics.candidates,
        });
    }
    // Re-express every free energy relative to one reference branch so the
    // ordering does not depend on cancellation in the absolute values.
    let reference = branches[0];
    let mut keyed = Vec::with_capacity(branches.len());
    for b in branches {
        let delta = if b.order == reference.order {
            0.0
        } else {
            model.free_energy_difference(b.order, reference.order)?
        };
        keyed.push((delta, b));
    }
    keyed.sort_by(|a, b| a.0.total_cmp(&b.0));
    let branches = keyed
        .into_iter()
        .map(|(delta, b)| SolutionBranch {
            free_energy: reference.free_energy + delta,
            ..b
        })
        .collect();
    Ok(Solution {
        branches,
        diagnostics,
    })
}

/// Every fixed point of the coupled equations, equilibrium first.
pub fn solve_self_consistent(params: &ModelParams, dist: &DegreeDistribution) -> Result<Solution> {
    let model = Model::new(params, dist)?;
    let grid = scan_grid();
    let omega = params.omega_a;

    let mut normal = Vec::with_capacity(grid.len());
    let mut coupled = Vec::with_capacity(grid.len());
    for &s in &grid {
        let g0 = s - model.rhs_sz(s, 0.0)?;
        normal.push(g0);
        let sr_possible = model.rhs_lambda_gap(s, 0.0)? > omega;
        coupled.push(if sr_possible {
            let l = model.lambda_for(s)?;
            s - model.rhs_sz(s, l)?
        } else {
            g0
        });
    }

    let mut candidates = Vec::new();
    for s in scan_roots(&grid, &normal, |s| Ok(s - model.rhs_sz(s, 0.0)?))? {
        candidates.push(OrderParameters::new(s, 0.0));
    }
    let sr_roots = scan_roots(&grid, &coupled, |s| {
        let l = model.lambda_for(s)?;
        Ok(s - model.rhs_sz(s, l)?)
    })?;
    for s in sr_roots {
        let l = model.lambda_for(s)?;
        if l > 0.0 {
            candidates.push(OrderParameters::new(s, l));
        }
    }
    finish(&model, candidates, grid.len(), true)
}

/// Fixed points of the `s_z` equation with `lambda` held at a prescribed
/// value, as when the photon number is fixed externally. The `lambda`
/// equation is not imposed; its residual is reported for information only.
pub fn solve_at_fixed_lambda(
    params: &ModelParams,
    dist: &DegreeDistribution,
    lambda: f64,
) -> Result<Solution> {
    if !(lambda >= 0.0 && lambda.is_finite()) {
        return Err(Error::invalid("lambda", lambda, "must be finite and >= 0"));
    }
    let model = Model::new(params, dist)?;
    let grid = scan_grid();
    let g = |s: f64| -> Result<f64> { Ok(s - model.rhs_sz(s, lambda)?) };
    let values = grid.iter().map(|&s| g(s)).collect::<Result<Vec<_>>>()?;
    let candidates = scan_roots(&grid, &values, g)?
        .into_iter()
        .map(|s| OrderParameters::new(s, lambda))
        .collect();
    finish(&model, candidates, grid.len(), false)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn delta4() -> DegreeDistribution {
        DegreeDistribution::delta(4.0).unwrap()
    }

    #[test]
    fn classify_examples() {
        assert_eq!(classify(OrderParameters::new(0.0, 0.0)), Phase::PmNormal);
        assert_eq!(classify(OrderParameters::new(0.9, 0.0)), Phase::FmNormal);
        assert_eq!(classify(OrderParameters::new(0.07, 0.4)), Phase::FmSr);
        assert_eq!(classify(OrderParameters::new(-1e-7, 0.4)), Phase::PmSr);
        assert_eq!(alloc::format!("{}", Phase::FmSr), "FM-SR");
    }

    #[test]
    fn params_validation() {
        assert!(ModelParams::new(0.1, 0.0, 0.5, 1.0, 200).is_ok());
        assert!(ModelParams::new(-0.1, 0.0, 0.5, 1.0, 200).is_err());
        assert!(ModelParams::new(0.1, 0.0, 0.0, 1.0, 200).is_err());
        assert!(ModelParams::new(0.1, 0.0, 0.5, 0.0, 200).is_err());
        assert!(ModelParams::new(0.1, 0.0, 0.5, 1.0, 1).is_err());
    }

    #[test]
    fn rhs_vanishes_at_zero_field_and_magnetization() {
        let p = ModelParams::new(0.3, 0.0, 0.5, 4.0, 200).unwrap();
        for d in [delta4(), DegreeDistribution::poisson(4.0).unwrap()] {
            assert_eq!(rhs_sz(OrderParameters::new(0.0, 0.3), &p, &d).unwrap(), 0.0);
        }
    }

    #[test]
    fn delta_rhs_is_the_regular_network_form() {
        let p = ModelParams::new(0.15, 0.1, 0.5, 10.0, 200).unwrap();
        let o = OrderParameters::new(0.3, 0.2);
        let a: f64 = 0.15 * 4.0 * 0.3 + 0.1;
        let gap = (a * a + 0.16).sqrt();
        let t = libm::tanh(5.0 * gap);
        assert_relative_eq!(rhs_sz(o, &p, &delta4()).unwrap(), a / gap * t, max_relative = 1e-14);
        assert_relative_eq!(rhs_lambda_gap(o, &p, &delta4()).unwrap(), t / gap, max_relative = 1e-14);
    }

    #[test]
    fn lambda_gap_limits() {
        // Zero temperature, fully ordered, lambda -> 0: F -> 1 / (theta k0 + h).
        let p = ModelParams::new(0.15, 0.1, 0.5, 1e6, 200).unwrap();
        let f = rhs_lambda_gap(OrderParameters::new(1.0, 0.0), &p, &delta4()).unwrap();
        assert_relative_eq!(f, 1.0 / 0.7, max_relative = 1e-12);
        // High temperature: F -> beta / 2.
        let p = ModelParams::new(0.15, 0.1, 0.5, 1e-6, 200).unwrap();
        let f = rhs_lambda_gap(OrderParameters::new(0.4, 0.3), &p, &delta4()).unwrap();
        assert_relative_eq!(f, 0.5e-6, max_relative = 1e-9);
    }

    #[test]
    fn free_energy_is_even_in_magnetization_at_zero_field() {
        let p = ModelParams::new(0.2, 0.0, 0.5, 3.0, 200).unwrap();
        let d = DegreeDistribution::poisson(5.0).unwrap();
        let a = free_energy(OrderParameters::new(0.37, 0.2), &p, &d).unwrap();
        let b = free_energy(OrderParameters::new(-0.37, 0.2), &p, &d).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn regular_network_sr_branch() {
        let p = ModelParams::new(0.15, 0.1, 0.5, 10.0, 200).unwrap();
        let sol = solve_self_consistent(&p, &delta4()).unwrap();
        let eq = sol.equilibrium();
        assert!(eq.order.lambda > 0.0);
        // Closed form for a regular network in the SR phase: s = h omega / (1 - eps).
        assert_relative_eq!(eq.order.s_z, 0.05 / 0.7, max_relative = 1e-9);
        assert!(eq.residual_sz.abs() < RESIDUAL_TOL);
        assert!(eq.residual_lambda.abs() < RESIDUAL_TOL);
        for b in &sol.branches {
            assert!(eq.free_energy <= b.free_energy);
        }
    }

    #[test]
    fn normal_phase_above_the_dicke_temperature() {
        let p = ModelParams::new(0.0, 0.0, 0.5, 0.9, 200).unwrap();
        let sol = solve_self_consistent(&p, &delta4()).unwrap();
        assert_eq!(sol.branches.len(), 1);
        assert_eq!(sol.equilibrium().order, OrderParameters::new(0.0, 0.0));
        let p = ModelParams { beta: 1.5, ..p };
        let eq = *solve_self_consistent(&p, &delta4()).unwrap().equilibrium();
        // tanh(beta lambda) / (2 lambda) = omega
        let l = eq.order.lambda;
        assert!(l > 0.0);
        assert_relative_eq!(libm::tanh(1.5 * l) / (2.0 * l), 0.5, max_relative = 1e-10);
    }

    #[test]
    fn zero_field_keeps_the_trivial_root_and_symmetric_pairs() {
        let p = ModelParams::new(0.15, 0.0, 2.0, 1.0, 200).unwrap();
        let d = DegreeDistribution::poisson(20.0).unwrap();
        let sol = solve_self_consistent(&p, &d).unwrap();
        assert!(sol.branches.iter().any(|b| b.order.s_z == 0.0 && b.order.lambda == 0.0));
        let fm: Vec<_> = sol.branches.iter().filter(|b| b.order.s_z.abs() > S_TOL).collect();
        assert_eq!(fm.len(), 2);
        assert_relative_eq!(fm[0].order.s_z, -fm[1].order.s_z, epsilon = 1e-9);
        assert_relative_eq!(fm[0].free_energy, fm[1].free_energy, epsilon = 1e-12);
        assert!(sol.equilibrium().phase.is_ferromagnetic());
    }

    #[test]
    fn fixed_lambda_mode_solves_only_the_magnetization_equation() {
        let p = ModelParams::new(0.15, 0.0, 0.5, 1.0 / 5.0, 200).unwrap();
        let d = DegreeDistribution::delta(199.0).unwrap();
        let sol = solve_at_fixed_lambda(&p, &d, 0.5).unwrap();
        let eq = sol.equilibrium();
        assert_eq!(eq.order.lambda, 0.5);
        assert!(eq.phase.is_ferromagnetic());
        assert!(eq.residual_sz.abs() < RESIDUAL_TOL);
        assert!(solve_at_fixed_lambda(&p, &d, -1.0).is_err());
    }
}
