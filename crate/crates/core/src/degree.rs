//! Degree distributions and the network statistics derived from them.
//!
//! Three families are supported: a regular network (`Delta`, every node has
//! degree `k0`), a random network in the Poisson limit, and a scale-free
//! network with density `(gamma - 1) k_min^(gamma - 1) k^(-gamma)`.
//!
//! The power-law density is normalized on `[k_min, inf)`; moments and all
//! mean-field integrals are truncated at the cutoff `k_max` without
//! renormalizing, which is what makes the finite-`N` closed forms of
//! [`power_law_closed_forms`] exact for the generic exponent.

use crate::error::{Error, Result};
use crate::quad::{self, QuadConfig};

/// Tail mass below which Poisson sums are truncated.
const POISSON_TAIL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DegreeDistribution {
    Delta { k0: f64 },
    Poisson { mean_degree: f64 },
    PowerLaw { gamma: f64, k_min: f64, k_max: f64 },
}

/// First two moments of a degree distribution and their ratio.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DegreeStats {
    pub mean_k: f64,
    pub mean_k2: f64,
    /// `<k^2> / <k>`.
    pub zeta: f64,
}

impl DegreeStats {
    pub fn from_moments(mean_k: f64, mean_k2: f64) -> Self {
        DegreeStats {
            mean_k,
            mean_k2,
            zeta: mean_k2 / mean_k,
        }
    }
}

impl DegreeDistribution {
    pub fn delta(k0: f64) -> Result<Self> {
        let d = DegreeDistribution::Delta { k0 };
        d.validate()?;
        Ok(d)
    }

    pub fn poisson(mean_degree: f64) -> Result<Self> {
        let d = DegreeDistribution::Poisson { mean_degree };
        d.validate()?;
        Ok(d)
    }

    /// Power law with an explicit cutoff; `k_max` may be infinite.
    pub fn power_law(gamma: f64, k_min: f64, k_max: f64) -> Result<Self> {
        let d = DegreeDistribution::PowerLaw {
            gamma,
            k_min,
            k_max,
        };
        d.validate()?;
        Ok(d)
    }

    /// Power law cut off at the natural cutoff of an `n_nodes` network.
    pub fn power_law_for_size(gamma: f64, k_min: f64, n_nodes: u64) -> Result<Self> {
        let k_max = natural_cutoff(gamma, k_min, n_nodes)?;
        Self::power_law(gamma, k_min, k_max)
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            DegreeDistribution::Delta { k0 } => {
                if !(k0 > 0.0 && k0.is_finite()) {
                    return Err(Error::invalid("k0", k0, "must be positive and finite"));
                }
            }
            DegreeDistribution::Poisson { mean_degree } => {
                if !(mean_degree > 0.0 && mean_degree.is_finite()) {
                    return Err(Error::invalid(
                        "mean_degree",
                        mean_degree,
                        "must be positive and finite",
                    ));
                }
            }
            DegreeDistribution::PowerLaw {
                gamma,
                k_min,
                k_max,
            } => {
                if !(gamma > 1.0 && gamma <= 4.0) {
                    return Err(Error::invalid("gamma", gamma, "must lie in (1, 4]"));
                }
                if !(k_min > 0.0 && k_min.is_finite()) {
                    return Err(Error::invalid("k_min", k_min, "must be positive and finite"));
                }
                if !(k_max > k_min) {
                    return Err(Error::invalid("k_max", k_max, "must exceed k_min"));
                }
            }
        }
        Ok(())
    }

    pub fn kind(&self) -> &'static str {
        match self {
            DegreeDistribution::Delta { .. } => "delta",
            DegreeDistribution::Poisson { .. } => "poisson",
            DegreeDistribution::PowerLaw { .. } => "powerlaw",
        }
    }

    /// Smallest and largest degree carrying weight. Poisson and Delta
    /// networks have no hubs, so their upper end is unbounded.
    pub fn support(&self) -> (f64, f64) {
        match *self {
            DegreeDistribution::Delta { k0 } => (k0, k0),
            DegreeDistribution::Poisson { .. } => (0.0, f64::INFINITY),
            DegreeDistribution::PowerLaw { k_min, k_max, .. } => (k_min, k_max),
        }
    }

    /// Density at `k` (probability mass for Poisson; for Delta, the point
    /// mass: 1 at `k0`, 0 elsewhere).
    pub fn pdf(&self, k: f64) -> Result<f64> {
        match *self {
            DegreeDistribution::Delta { k0 } => Ok(if k == k0 { 1.0 } else { 0.0 }),
            DegreeDistribution::Poisson { mean_degree } => {
                if !(k >= 0.0 && k.is_finite()) {
                    return Err(Error::OutOfDomain {
                        what: "poisson degree",
                        value: k,
                    });
                }
                Ok(poisson_mass(mean_degree, k))
            }
            DegreeDistribution::PowerLaw {
                gamma,
                k_min,
                k_max,
            } => {
                if !(k >= k_min && k <= k_max) {
                    return Err(Error::OutOfDomain {
                        what: "power-law degree",
                        value: k,
                    });
                }
                Ok((gamma - 1.0) * libm::pow(k_min, gamma - 1.0) * libm::pow(k, -gamma))
            }
        }
    }

    /// `<k^m>` for `m` in `{1, 2}`, in closed form for every family.
    pub fn moment(&self, m: u32) -> Result<f64> {
        if !(m == 1 || m == 2) {
            return Err(Error::invalid("m", m as f64, "only the first two moments are defined"));
        }
        match *self {
            DegreeDistribution::Delta { k0 } => Ok(libm::pow(k0, m as f64)),
            DegreeDistribution::Poisson { mean_degree: mu } => {
                Ok(if m == 1 { mu } else { mu + mu * mu })
            }
            DegreeDistribution::PowerLaw {
                gamma,
                k_min,
                k_max,
            } => {
                let e = m as f64 + 1.0 - gamma;
                if k_max.is_infinite() {
                    if e >= 0.0 {
                        return Err(Error::Divergent("power-law moment without a cutoff"));
                    }
                    return Ok((gamma - 1.0) * libm::pow(k_min, m as f64) / -e);
                }
                let log_ratio = libm::log(k_max / k_min);
                let integral = if e == 0.0 {
                    log_ratio
                } else {
                    libm::expm1(e * log_ratio) / e
                };
                Ok((gamma - 1.0) * libm::pow(k_min, m as f64) * integral)
            }
        }
    }

    pub fn mean_degree(&self) -> Result<f64> {
        self.moment(1)
    }

    pub fn stats(&self) -> Result<DegreeStats> {
        let (m1, m2) = (self.moment(1)?, self.moment(2)?);
        // Closed-form ratios avoid a rounding step where they are known.
        let zeta = match *self {
            DegreeDistribution::Delta { k0 } => k0,
            DegreeDistribution::Poisson { mean_degree } => 1.0 + mean_degree,
            DegreeDistribution::PowerLaw { .. } => m2 / m1,
        };
        Ok(DegreeStats {
            mean_k: m1,
            mean_k2: m2,
            zeta,
        })
    }

    pub fn zeta(&self) -> Result<f64> {
        Ok(self.stats()?.zeta)
    }

    /// `E[g(k)]` over the (truncated) distribution.
    ///
    /// Power laws are integrated in `u = ln k` with adaptive Gauss–Kronrod;
    /// `breaks` lists degrees where `g` changes rapidly. Poisson is summed over
    /// integer degrees until the remaining mass drops below `1e-12`.
    pub fn expect<G: FnMut(f64) -> f64>(&self, g: G, breaks: &[f64]) -> Result<f64> {
        self.expect_with(g, breaks, &QuadConfig::default())
    }

    pub fn expect_with<G: FnMut(f64) -> f64>(
        &self,
        mut g: G,
        breaks: &[f64],
        config: &QuadConfig,
    ) -> Result<f64> {
        match *self {
            DegreeDistribution::Delta { k0 } => Ok(g(k0)),
            DegreeDistribution::Poisson { mean_degree } => {
                let mut sum = 0.0;
                let mut comp = 0.0;
                let mut mass = 0.0;
                let mut k = 0u32;
                loop {
                    let w = poisson_mass(mean_degree, k as f64);
                    // Kahan summation keeps the tail test meaningful.
                    let y = w * g(k as f64) - comp;
                    let t = sum + y;
                    comp = (t - sum) - y;
                    sum = t;
                    mass += w;
                    if k as f64 > mean_degree && 1.0 - mass < POISSON_TAIL {
                        return Ok(sum);
                    }
                    k += 1;
                }
            }
            DegreeDistribution::PowerLaw {
                gamma,
                k_min,
                k_max,
            } => {
                if k_max.is_infinite() {
                    return Err(Error::invalid(
                        "k_max",
                        k_max,
                        "expectations need a finite cutoff",
                    ));
                }
                let u_lo = libm::log(k_min);
                let u_hi = libm::log(k_max);
                let mut panel_breaks = alloc::vec::Vec::new();
                let panels = libm::ceil(0.5 * (u_hi - u_lo)) as usize;
                for i in 1..panels {
                    panel_breaks.push(u_lo + (u_hi - u_lo) * i as f64 / panels as f64);
                }
                panel_breaks.extend(
                    breaks
                        .iter()
                        .filter(|&&k| k > k_min && k < k_max)
                        .map(|&k| libm::log(k)),
                );
                let scale = gamma - 1.0;
                let integrand = |u: f64| {
                    let k = libm::exp(u);
                    scale * libm::exp((1.0 - gamma) * (u - u_lo)) * g(k)
                };
                Ok(quad::integrate(integrand, u_lo, u_hi, &panel_breaks, config)?.value)
            }
        }
    }

    /// Probability mass over the whole support, obtained numerically: the
    /// Poisson sum to the truncation point, or the power-law density
    /// integrated over `[k_min, inf)`.
    pub fn total_mass(&self) -> Result<f64> {
        match *self {
            DegreeDistribution::Delta { .. } => Ok(1.0),
            DegreeDistribution::Poisson { .. } => self.expect(|_| 1.0, &[]),
            DegreeDistribution::PowerLaw { gamma, k_min, .. } => {
                // The integrand decays like exp(-(gamma-1) u); stop where it is below 1e-18.
                let span = 42.0 / (gamma - 1.0);
                let panels = libm::ceil(span) as usize;
                let u_lo = libm::log(k_min);
                let breaks: alloc::vec::Vec<f64> = (1..panels)
                    .map(|i| u_lo + span * i as f64 / panels as f64)
                    .collect();
                let integrand =
                    |u: f64| (gamma - 1.0) * libm::exp((1.0 - gamma) * (u - u_lo));
                Ok(quad::integrate(integrand, u_lo, u_lo + span, &breaks, &QuadConfig::default())?
                    .value)
            }
        }
    }
}

fn poisson_mass(mean: f64, k: f64) -> f64 {
    if k == 0.0 {
        return libm::exp(-mean);
    }
    libm::exp(k * libm::log(mean) - mean - libm::lgamma(k + 1.0))
}

/// Natural cutoff `k_min N^(1/(gamma-1))`: the degree above which one node
/// out of `N` is expected.
pub fn natural_cutoff(gamma: f64, k_min: f64, n_nodes: u64) -> Result<f64> {
    if !(gamma > 1.0) {
        return Err(Error::OutOfDomain {
            what: "degree exponent for a natural cutoff",
            value: gamma,
        });
    }
    if !(k_min > 0.0) {
        return Err(Error::invalid("k_min", k_min, "must be positive"));
    }
    if n_nodes < 2 {
        return Err(Error::invalid("n_nodes", n_nodes as f64, "must be at least 2"));
    }
    Ok(k_min * libm::pow(n_nodes as f64, 1.0 / (gamma - 1.0)))
}

/// Large-`N` closed forms for `<k>` and `zeta` of a power-law network cut off
/// at its natural cutoff.
///
/// The generic row is exact for the truncated density. At `gamma = 2` and
/// `gamma = 3` the logarithmic rows keep only the leading large-`N` terms.
pub fn power_law_closed_forms(gamma: f64, k_min: f64, n_nodes: u64) -> Result<DegreeStats> {
    if !(gamma > 1.0 && gamma <= 4.0) {
        return Err(Error::OutOfDomain {
            what: "degree exponent for the closed forms",
            value: gamma,
        });
    }
    if !(k_min > 0.0) {
        return Err(Error::invalid("k_min", k_min, "must be positive"));
    }
    if n_nodes < 2 {
        return Err(Error::invalid("n_nodes", n_nodes as f64, "must be at least 2"));
    }
    let n = n_nodes as f64;
    let ln_n = libm::log(n);
    let (mean_k, zeta) = if libm::fabs(gamma - 2.0) < 1e-12 {
        (k_min * ln_n, k_min * n / ln_n)
    } else if libm::fabs(gamma - 3.0) < 1e-12 {
        (2.0 * k_min, 0.5 * k_min * ln_n)
    } else {
        let a = (2.0 - gamma) / (gamma - 1.0);
        let b = (3.0 - gamma) / (gamma - 1.0);
        let mean_k = k_min * (gamma - 1.0) / (2.0 - gamma) * libm::expm1(a * ln_n);
        let zeta = k_min * (2.0 - gamma) / (3.0 - gamma) * libm::expm1(b * ln_n)
            / libm::expm1(a * ln_n);
        (mean_k, zeta)
    };
    Ok(DegreeStats {
        mean_k,
        mean_k2: zeta * mean_k,
        zeta,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn pdf_examples() {
        let pl = DegreeDistribution::power_law(2.0, 1.0, 100.0).unwrap();
        assert_relative_eq!(pl.pdf(2.0).unwrap(), 0.25, max_relative = 1e-15);
        let po = DegreeDistribution::poisson(4.0).unwrap();
        assert_relative_eq!(po.pdf(0.0).unwrap(), libm::exp(-4.0), max_relative = 1e-15);
        assert_relative_eq!(po.pdf(0.0).unwrap(), 0.018316, max_relative = 1e-4);
        assert_relative_eq!(po.pdf(3.0).unwrap(), 64.0 / 6.0 * libm::exp(-4.0), max_relative = 1e-13);
        let d = DegreeDistribution::delta(4.0).unwrap();
        assert_eq!(d.pdf(4.0).unwrap(), 1.0);
        assert_eq!(d.pdf(3.0).unwrap(), 0.0);
    }

    #[test]
    fn pdf_outside_support_is_a_domain_error() {
        let pl = DegreeDistribution::power_law(2.5, 1.0, 50.0).unwrap();
        assert!(matches!(pl.pdf(0.5), Err(Error::OutOfDomain { .. })));
        assert!(matches!(pl.pdf(51.0), Err(Error::OutOfDomain { .. })));
        let po = DegreeDistribution::poisson(2.0).unwrap();
        assert!(matches!(po.pdf(-1.0), Err(Error::OutOfDomain { .. })));
    }

    #[test]
    fn moment_examples() {
        assert_eq!(DegreeDistribution::delta(4.0).unwrap().moment(2).unwrap(), 16.0);
        assert_eq!(DegreeDistribution::poisson(4.0).unwrap().moment(2).unwrap(), 20.0);
        let pl = DegreeDistribution::power_law(3.0, 2.0, f64::INFINITY).unwrap();
        assert_relative_eq!(pl.moment(1).unwrap(), 4.0, max_relative = 1e-15);
        assert!(matches!(pl.moment(2), Err(Error::Divergent(_))));
        assert!(pl.moment(3).is_err());
    }

    #[test]
    fn zeta_examples() {
        assert_eq!(DegreeDistribution::delta(199.0).unwrap().zeta().unwrap(), 199.0);
        assert_eq!(DegreeDistribution::poisson(4.0).unwrap().zeta().unwrap(), 5.0);
        // Finite cutoff: the closed form (1/2) ln N is the N -> inf limit; the
        // exact truncated value carries the extra 1/(1 - N^-1/2) factor.
        let pl = DegreeDistribution::power_law_for_size(3.0, 1.0, 1000).unwrap();
        let exact = 0.5 * libm::log(1000.0) / (1.0 - 1.0 / libm::sqrt(1000.0));
        assert_relative_eq!(pl.zeta().unwrap(), exact, max_relative = 1e-13);
        let closed = power_law_closed_forms(3.0, 1.0, 1000).unwrap().zeta;
        assert_relative_eq!(closed, 3.4539, max_relative = 1e-4);
        let correction = 1.0 / (1.0 - 1.0 / libm::sqrt(1000.0));
        assert_relative_eq!(pl.zeta().unwrap() / closed, correction, max_relative = 1e-12);
    }

    #[test]
    fn natural_cutoff_examples() {
        assert_relative_eq!(natural_cutoff(3.0, 1.0, 100).unwrap(), 10.0, max_relative = 1e-14);
        assert_relative_eq!(natural_cutoff(2.0, 1.0, 200).unwrap(), 200.0, max_relative = 1e-14);
        let anomalous = natural_cutoff(1.5, 1.0, 100).unwrap();
        assert_relative_eq!(anomalous, 10_000.0, max_relative = 1e-12);
        assert!(anomalous > 100.0);
        assert!(matches!(natural_cutoff(1.0, 1.0, 100), Err(Error::OutOfDomain { .. })));
        assert!(natural_cutoff(2.0, 1.0, 1).is_err());
    }

    #[test]
    fn power_law_rows() {
        let s2 = power_law_closed_forms(2.0, 1.0, 200).unwrap();
        assert_relative_eq!(s2.mean_k, libm::log(200.0), max_relative = 1e-14);
        assert_relative_eq!(s2.mean_k, 5.2983, max_relative = 1e-4);
        let s3 = power_law_closed_forms(3.0, 1.0, 200).unwrap();
        assert_eq!(s3.mean_k, 2.0);
        assert_relative_eq!(s3.zeta, 2.6492, max_relative = 1e-4);
        assert!(power_law_closed_forms(4.5, 1.0, 200).is_err());
        assert!(power_law_closed_forms(1.0, 1.0, 200).is_err());
    }

    #[test]
    fn generic_row_equals_analytic_truncated_moments() {
        for &gamma in &[1.3, 1.5, 2.5, 2.9, 3.1, 3.5, 4.0] {
            for &n in &[100u64, 1000, 10_000] {
                let closed = power_law_closed_forms(gamma, 1.5, n).unwrap();
                let exact = DegreeDistribution::power_law_for_size(gamma, 1.5, n)
                    .unwrap()
                    .stats()
                    .unwrap();
                assert_relative_eq!(closed.mean_k, exact.mean_k, max_relative = 1e-12);
                assert_relative_eq!(closed.zeta, exact.zeta, max_relative = 1e-12);
            }
        }
    }

    #[test]
    fn quadrature_expectation_matches_moments() {
        let pl = DegreeDistribution::power_law_for_size(2.5, 1.0, 200).unwrap();
        let m1 = pl.expect(|k| k, &[]).unwrap();
        let m2 = pl.expect(|k| k * k, &[]).unwrap();
        assert_relative_eq!(m1, pl.moment(1).unwrap(), max_relative = 1e-11);
        assert_relative_eq!(m2, pl.moment(2).unwrap(), max_relative = 1e-11);
        let po = DegreeDistribution::poisson(4.0).unwrap();
        assert_relative_eq!(po.expect(|k| k * k, &[]).unwrap(), 20.0, max_relative = 1e-11);
    }

    #[test]
    fn infinite_cutoff_has_no_expectation() {
        let pl = DegreeDistribution::power_law(3.0, 1.0, f64::INFINITY).unwrap();
        assert!(pl.expect(|_| 1.0, &[]).is_err());
        assert_relative_eq!(pl.total_mass().unwrap(), 1.0, epsilon = 1e-10);
    }

    #[test]
    fn constructor_validation() {
        assert!(DegreeDistribution::delta(0.0).is_err());
        assert!(DegreeDistribution::poisson(-1.0).is_err());
        assert!(DegreeDistribution::power_law(1.0, 1.0, 10.0).is_err());
        assert!(DegreeDistribution::power_law(2.0, 5.0, 4.0).is_err());
        assert!(DegreeDistribution::power_law(2.0, 0.0, 4.0).is_err());
    }
}
