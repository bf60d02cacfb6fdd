//! Seeded integration engine: weighted 1-D improper integrals, stratified
//! domain integrals and the singular pair integral.

mod domain_integral;
pub mod gauss;
mod pair;
pub(crate) mod sampling;
mod weighted;

pub use domain_integral::{integrate_domain, DomainIntegral};
pub use pair::{integrate_pair_singular, integrate_point_singular, PairEstimate, PairSet};
pub use weighted::{integrate_weighted_1d, integrate_weighted_1d_log, HalfLine, WeightedIntegral};

use crate::error::{Error, Result};
use crate::Real;

/// Sampling plan. Radial cutoffs are stored as fractions of the domain
/// diameter so that one plan serves domains of any size.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureSpec<T> {
    pub seed: u64,
    /// Points `x ∈ Ω` for pair integrals.
    pub n_outer: usize,
    /// Offsets `y = x + tω` per outer point.
    pub n_radial: usize,
    /// Points for area, `L^q`, Orlicz and level-set estimates.
    pub n_measure: usize,
    pub t_min_frac: T,
    pub t_max_frac: T,
    /// Width of a radial stratum in decades of `t`, used for divergence diagnosis.
    pub decades_per_stratum: T,
    /// Extra rejection-sampling factor for thin domains.
    pub oversample: usize,
}

impl<T: Real> Default for QuadratureSpec<T> {
    fn default() -> Self {
        Self {
            seed: 42,
            n_outer: 4096,
            n_radial: 64,
            n_measure: 16384,
            t_min_frac: T::lit(2f64.powi(-14)),
            t_max_frac: T::one(),
            decades_per_stratum: T::lit(0.5),
            oversample: 4,
        }
    }
}

impl<T: Real> QuadratureSpec<T> {
    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_counts(mut self, n_outer: usize, n_radial: usize) -> Self {
        self.n_outer = n_outer;
        self.n_radial = n_radial;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_outer == 0 || self.n_radial == 0 || self.n_measure == 0 || self.oversample == 0 {
            return Err(Error::Validation("sample counts must be at least 1".into()));
        }
        if !(self.t_min_frac > T::zero() && self.t_min_frac < self.t_max_frac) {
            return Err(Error::Validation(format!(
                "need 0 < tmin-frac < tmax-frac, got {} and {}",
                self.t_min_frac, self.t_max_frac
            )));
        }
        if !(self.decades_per_stratum > T::zero()) {
            return Err(Error::Validation("decades per stratum must be positive".into()));
        }
        Ok(())
    }

    /// `(t_min, t_max)` for a domain of diameter `diam`.
    pub fn radial_range(&self, diam: T) -> (T, T) {
        (self.t_min_frac * diam, self.t_max_frac * diam)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_are_valid() {
        let s = QuadratureSpec::<f64>::default();
        s.validate().unwrap();
        assert_eq!(s.seed, 42);
        let (lo, hi) = s.radial_range(2.0);
        assert_eq!(hi, 2.0);
        assert_eq!(lo, 2.0 / 16384.0);
    }

    #[test]
    fn rejects_bad_cutoffs() {
        let s = QuadratureSpec::<f64> { t_min_frac: 1.0, ..Default::default() };
        assert!(s.validate().is_err());
        let s = QuadratureSpec::<f64>::default().with_counts(0, 3);
        assert!(s.validate().is_err());
    }
}
