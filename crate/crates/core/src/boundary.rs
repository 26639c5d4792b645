//! Phase boundaries: closed forms and bisection on the solver.
//!
//! Closed forms derived in a limit (low or high temperature, small `lambda`)
//! come back as [`Asymptotic`] values carrying a validity flag; they are never
//! substituted for solver results.

use crate::degree::DegreeDistribution;
use crate::error::{Error, Result};
use crate::math::artanh;
use crate::meanfield::{self, ModelParams};
use crate::roots::bisect_predicate;

/// Temperature resolution of the solver bisection.
pub const BISECTION_TOL: f64 = 1e-4;
pub const BISECTION_MAX_ITER: usize = 60;

/// A closed-form estimate and whether its derivation regime applies.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Asymptotic {
    pub value: f64,
    pub valid: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundaryMethod {
    ClosedForm,
    BisectionOnSolver,
}

impl BoundaryMethod {
    pub fn label(self) -> &'static str {
        match self {
            BoundaryMethod::ClosedForm => "closed_form",
            BoundaryMethod::BisectionOnSolver => "bisection_on_solver",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseBoundaryPoint {
    pub control_name: &'static str,
    pub control: f64,
    pub t_c: f64,
    pub method: BoundaryMethod,
}

impl PhaseBoundaryPoint {
    pub fn with_control(self, name: &'static str, value: f64) -> Self {
        PhaseBoundaryPoint {
            control_name: name,
            control: value,
            ..self
        }
    }
}

/// Which label change the bisection tracks.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OrderParam {
    /// Normal vs superradiant.
    Lambda,
    /// Paramagnetic vs ferromagnetic.
    SZ,
}

/// Regular network with `lambda` given: can the SR state exist at all?
pub fn sr_existence_criterion(params: &ModelParams, k0: f64, lambda: f64) -> bool {
    let omega = params.omega_a;
    let eps = params.theta * k0 * omega;
    let lhs = eps + omega * params.h_field;
    lhs * lhs + 4.0 * omega * omega * lambda * lambda <= 1.0
}

/// Largest regular degree that still admits the SR state: `(1/omega - h) / theta`.
pub fn k_c_max(params: &ModelParams) -> Result<f64> {
    if params.theta == 0.0 {
        return Err(Error::Divergent("no degree limit without spin coupling"));
    }
    Ok((1.0 / params.omega_a - params.h_field) / params.theta)
}

/// Critical spin-field coupling `sqrt(omega (h + 4 J k0))`, dimensional.
pub fn critical_coupling(omega_a_dim: f64, h_dim: f64, j: f64, k0: f64) -> Result<f64> {
    if !(omega_a_dim > 0.0) {
        return Err(Error::invalid("omega_a", omega_a_dim, "must be positive"));
    }
    let inner = h_dim + 4.0 * j * k0;
    if inner < 0.0 {
        return Err(Error::OutOfDomain {
            what: "h + 4 J k0",
            value: inner,
        });
    }
    Ok(libm::sqrt(omega_a_dim * inner))
}

/// Magnetization of the SR branch of a regular network, `h omega / (1 - eps)`.
/// Meaningful only for `eps < 1` and a result inside `[-1, 1]`.
pub fn formal_sr_magnetization(params: &ModelParams, k0: f64) -> Asymptotic {
    let eps = params.theta * k0 * params.omega_a;
    let value = params.h_field * params.omega_a / (1.0 - eps);
    Asymptotic {
        value,
        valid: eps < 1.0 && libm::fabs(value) <= 1.0,
    }
}

/// Low-temperature SR critical temperature of a regular network.
pub fn tc_low_temperature_regular(params: &ModelParams, k0: f64) -> Result<Asymptotic> {
    let omega = params.omega_a;
    let h = params.h_field;
    let eps = params.theta * k0 * omega;
    if eps >= 1.0 {
        return Err(Error::OutOfDomain {
            what: "eps = theta k0 omega_a (must be < 1)",
            value: eps,
        });
    }
    let denom = 1.0 - eps - omega * h;
    let arg = 2.0 * (1.0 - eps) / denom;
    if !(denom > 0.0 && arg > 1.0) {
        return Err(Error::OutOfDomain {
            what: "low-temperature log argument",
            value: arg,
        });
    }
    let t_c = h / ((1.0 - eps) * libm::log(arg));
    let gamma0c = gamma0_critical(h, eps);
    Ok(Asymptotic {
        value: t_c,
        valid: gamma0c / t_c > 5.0,
    })
}

/// `|h / (1 - eps)|`, the gap at the SR onset of a regular network.
pub fn gamma0_critical(h_c: f64, eps_c: f64) -> f64 {
    libm::fabs(h_c / (1.0 - eps_c))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LambdaRegime {
    /// `beta lambda^2 / Gamma >> 1`.
    Deep,
    /// `beta lambda^2 / Gamma << 1`.
    Near,
}

/// Low-temperature asymptotics of `lambda` on a regular network.
pub fn lambda_asymptotics(beta: f64, gamma0c: f64, regime: LambdaRegime) -> Asymptotic {
    let decay = libm::exp(-beta * gamma0c);
    let value = match regime {
        LambdaRegime::Deep => gamma0c * libm::exp(-0.5 * beta * gamma0c),
        LambdaRegime::Near => gamma0c * libm::sqrt((1.0 - 2.0 * beta * gamma0c * decay).max(0.0)),
    };
    // The regime is the caller's choice; validity only tracks the low-T expansion.
    Asymptotic { value, valid: beta * gamma0c > 5.0 }
}

/// High-temperature SR onset: `beta_c = 2 omega_a`.
pub fn tc_high_temperature(omega_a: f64) -> f64 {
    2.0 * omega_a
}

/// Dimensional high-temperature onset `T_c = chi^2 / (2 omega_a)`.
pub fn tc_high_temperature_dimensional(chi: f64, omega_a_dim: f64) -> f64 {
    chi * chi / (2.0 * omega_a_dim)
}

/// PM-FM critical temperature at vanishing `lambda` and field: `theta zeta / 2`.
pub fn tc_ferromagnetic_sr(theta: f64, zeta: f64) -> f64 {
    0.5 * theta * zeta
}

/// `omega_a theta zeta`; equals 1 where the FM onset meets the SR onset.
pub fn sr_consistency(omega_a: f64, theta: f64, zeta: f64) -> f64 {
    omega_a * theta * zeta
}

/// Regular degree at which the FM onset meets the SR onset: `1 / (omega theta)`.
pub fn k0c(theta: f64, omega_a: f64) -> Result<f64> {
    if !(theta > 0.0 && omega_a > 0.0) {
        return Err(Error::invalid("theta * omega_a", theta * omega_a, "must be positive"));
    }
    Ok(1.0 / (omega_a * theta))
}

/// PM-FM boundary at a fixed field amplitude: `T_c = lambda / atanh(2 lambda / (theta zeta))`.
pub fn pm_fm_boundary(lambda_c: f64, theta: f64, zeta: f64) -> Result<f64> {
    if !(lambda_c >= 0.0) {
        return Err(Error::invalid("lambda_c", lambda_c, "must be >= 0"));
    }
    let scale = theta * zeta;
    if !(scale > 0.0) {
        return Err(Error::NoTransition("theta zeta must be positive"));
    }
    if lambda_c == 0.0 {
        return Ok(0.5 * scale);
    }
    let x = 2.0 * lambda_c / scale;
    if x >= 1.0 {
        return Err(Error::NoTransition("lambda_c >= theta zeta / 2"));
    }
    if x < 1e-8 {
        // atanh(x) = x (1 + x^2/3 + ...)
        return Ok(0.5 * scale / (1.0 + x * x / 3.0));
    }
    Ok(lambda_c / artanh(x))
}

/// Small-`lambda` expansion `theta zeta / 2 - 2 lambda^2 / (3 theta zeta)`.
pub fn pm_fm_boundary_expansion(lambda_c: f64, theta: f64, zeta: f64) -> f64 {
    let scale = theta * zeta;
    0.5 * scale - 2.0 * lambda_c * lambda_c / (3.0 * scale)
}

/// Photon number needed to reach the zero-temperature PM-FM point of a
/// complete graph: `4 J^2 N (N - 1)^2 / chi^2`.
pub fn critical_photon_number(j: f64, chi: f64, n_nodes: u64) -> f64 {
    let n = n_nodes as f64;
    4.0 * j * j * n * (n - 1.0) * (n - 1.0) / (chi * chi)
}

/// The photon-number estimate assumes `2 N J / T >> 1`.
pub fn critical_photon_number_valid(j: f64, n_nodes: u64, t: f64) -> bool {
    2.0 * n_nodes as f64 * j / t > 5.0
}

/// Number of nodes at which a power-law network reaches the FM-SR critical
/// temperature `t_c`, from the large-`N` closed forms of `<k>` and `zeta`.
pub fn critical_nodes(gamma: f64, theta: f64, k_min: f64, t_c: f64, mean_k: f64) -> Result<f64> {
    if !(gamma > 1.0 && gamma <= 4.0) {
        return Err(Error::OutOfDomain {
            what: "degree exponent for critical nodes",
            value: gamma,
        });
    }
    if !(theta > 0.0 && k_min > 0.0 && t_c > 0.0 && mean_k > 0.0) {
        return Err(Error::invalid(
            "theta, k_min, t_c, mean_k",
            theta.min(k_min).min(t_c).min(mean_k),
            "must all be positive",
        ));
    }
    if libm::fabs(gamma - 3.0) < 1e-12 {
        return Ok(libm::exp(8.0 * t_c / (theta * mean_k)));
    }
    let lead = 2.0 * mean_k * t_c / (theta * k_min * k_min);
    if libm::fabs(gamma - 2.0) < 1e-12 {
        return Ok(lead);
    }
    let base = lead * (3.0 - gamma) / (gamma - 1.0) + 1.0;
    if !(base > 0.0) {
        return Err(Error::OutOfDomain {
            what: "t_c above the infinite-network limit",
            value: t_c,
        });
    }
    Ok(libm::pow(base, (gamma - 1.0) / (3.0 - gamma)))
}

/// Random network in the connected regime (`<k> = ln N`): `N_c = exp(2 T_c / theta)`.
pub fn critical_nodes_random(theta: f64, t_c: f64) -> f64 {
    libm::exp(2.0 * t_c / theta)
}

/// Critical clustering `(ln N_c)^2 / N_c` (unit prefactor).
pub fn clustering_estimate(n_c: f64) -> Result<f64> {
    if !(n_c > 1.0) {
        return Err(Error::invalid("n_c", n_c, "must exceed 1"));
    }
    let l = libm::log(n_c);
    Ok(l * l / n_c)
}

/// High-temperature magnetization `beta h / (2 - beta theta zeta)`.
pub fn high_t_magnetization(params: &ModelParams, zeta: f64) -> Result<Asymptotic> {
    let x = params.beta * params.theta * zeta;
    if x >= 2.0 {
        return Err(Error::OutOfDomain {
            what: "beta theta zeta (must be < 2)",
            value: x,
        });
    }
    Ok(Asymptotic {
        value: params.beta * params.h_field / (2.0 - x),
        valid: x < 0.5,
    })
}

/// Zero-temperature critical data of the fully ordered state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuantumCritical {
    pub omega_ac: f64,
    pub lambda0: f64,
    /// `E[(theta k + h)^-3]`.
    pub i_integral: f64,
}

pub fn quantum_critical_frequency(
    theta: f64,
    h_field: f64,
    dist: &DegreeDistribution,
) -> Result<QuantumCritical> {
    if theta == 0.0 && h_field == 0.0 {
        return Err(Error::Divergent("theta = h = 0 leaves the gap closed"));
    }
    let (k_lo, _) = dist.support();
    if !(theta * k_lo + h_field > 0.0) {
        return Err(Error::Divergent("gap closes at the smallest degree"));
    }
    let omega_ac = dist.expect(|k| 1.0 / (theta * k + h_field), &[])?;
    let i_integral = dist.expect(
        |k| {
            let a = theta * k + h_field;
            1.0 / (a * a * a)
        },
        &[],
    )?;
    Ok(QuantumCritical {
        omega_ac,
        lambda0: libm::sqrt(omega_ac / (2.0 * i_integral)),
        i_integral,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuantumOrder {
    pub lambda: f64,
    /// False above the critical frequency, where `lambda` is reported as 0.
    pub superradiant: bool,
}

/// `lambda0 sqrt(1 - omega_a / omega_ac)` below the critical frequency.
pub fn quantum_order_parameter(omega_a: f64, qc: &QuantumCritical) -> Result<QuantumOrder> {
    if !(omega_a >= 0.0) {
        return Err(Error::invalid("omega_a", omega_a, "must be >= 0"));
    }
    if omega_a > qc.omega_ac {
        return Ok(QuantumOrder {
            lambda: 0.0,
            superradiant: false,
        });
    }
    Ok(QuantumOrder {
        lambda: qc.lambda0 * libm::sqrt(1.0 - omega_a / qc.omega_ac),
        superradiant: true,
    })
}

fn bracket_point(lo: f64, hi: f64) -> PhaseBoundaryPoint {
    PhaseBoundaryPoint {
        control_name: "",
        control: f64::NAN,
        t_c: 0.5 * (lo + hi),
        method: BoundaryMethod::BisectionOnSolver,
    }
}

/// Temperature at which the equilibrium branch changes label, bisected on
/// `[t_lo, t_hi]` until the bracket is narrower than [`BISECTION_TOL`].
pub fn locate_tc_by_bisection(
    template: &ModelParams,
    dist: &DegreeDistribution,
    order_param: OrderParam,
    t_lo: f64,
    t_hi: f64,
) -> Result<PhaseBoundaryPoint> {
    let pred = |t: f64| -> Result<bool> {
        let sol = meanfield::solve_self_consistent(&template.at_temperature(t), dist)?;
        let phase = sol.equilibrium().phase;
        Ok(match order_param {
            OrderParam::Lambda => phase.is_superradiant(),
            OrderParam::SZ => phase.is_ferromagnetic(),
        })
    };
    let (lo, hi) = bisect_predicate(pred, t_lo, t_hi, BISECTION_TOL, BISECTION_MAX_ITER)?;
    Ok(bracket_point(lo, hi))
}

/// PM-FM temperature with the field amplitude held at `lambda`.
pub fn locate_tc_fixed_lambda(
    template: &ModelParams,
    dist: &DegreeDistribution,
    lambda: f64,
    t_lo: f64,
    t_hi: f64,
) -> Result<PhaseBoundaryPoint> {
    let pred = |t: f64| -> Result<bool> {
        let sol = meanfield::solve_at_fixed_lambda(&template.at_temperature(t), dist, lambda)?;
        Ok(sol.equilibrium().phase.is_ferromagnetic())
    };
    let (lo, hi) = bisect_predicate(pred, t_lo, t_hi, BISECTION_TOL, BISECTION_MAX_ITER)?;
    Ok(bracket_point(lo, hi))
}
