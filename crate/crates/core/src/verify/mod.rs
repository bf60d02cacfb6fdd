//! Experiment drivers that put the inequalities of the theory to a
//! finite-sample test and record fitted constants, witnesses and verdicts.
//!
//! Constants whose existence is asserted but whose value is not known are
//! fitted on a seeded training half of the trials and then checked on the
//! held-out half.

mod experiments;
mod family;
mod report;

pub use experiments::{
    check_critical_case, check_cutoff_bound, check_geometric_inequality, check_levelset_chain,
    check_scaling_homogeneity, cutoff_bound_rhs, geometric_lhs, imbedding_ratio, imbedding_ratio_inhomog,
    rn_imbedding_via_growing_balls, CriticalBall,
};
pub use family::{critical_family, cusp_tip_family, default_cutoff_sweep, standard_family, Member};
pub use report::{fmt_g9, loglog_slope, Series, Split, TrialRow, VerificationReport};

use rand::Rng;

use crate::quadrature::sampling::{self, streams};
use crate::Real;

/// Safety factor applied to fitted constants before the holdout check.
pub const FIT_MARGIN: f64 = 2.0;

/// Relative tolerance for every Luxemburg norm computed by the drivers.
pub const NORM_TOL: f64 = 1e-4;

/// Seeded train/holdout assignment, one fair coin per trial drawn in order.
/// Appending trials never changes earlier assignments, so a constant fitted
/// on more trials is never tighter than one fitted on fewer.
pub fn assign_splits(n: usize, seed: u64) -> Vec<Split> {
    let mut rng = sampling::stream(seed, streams::SPLIT);
    let mut out: Vec<Split> =
        (0..n).map(|_| if rng.random_bool(0.5) { Split::Train } else { Split::Holdout }).collect();
    if !out.is_empty() && !out.contains(&Split::Train) {
        out[0] = Split::Train;
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Bound {
    /// `lhs ≤ C · rhs`
    Upper,
    /// `lhs ≥ C · rhs`
    Lower,
}

pub(crate) struct Raw<T> {
    pub label: String,
    pub lhs: T,
    pub rhs: T,
}

pub(crate) fn ratio<T: Real>(lhs: T, rhs: T) -> T {
    if lhs == T::zero() && rhs == T::zero() {
        T::zero()
    } else {
        lhs / rhs
    }
}

/// Constant fitted on the training entries of `ratios` (split by
/// [`assign_splits`]): `FIT_MARGIN · max` for upper bounds, `min / FIT_MARGIN`
/// for lower bounds. NaN if any training ratio is NaN.
pub fn fitted_constant<T: Real>(ratios: &[T], bound: Bound, seed: u64) -> T {
    let splits = assign_splits(ratios.len(), seed);
    let margin = T::lit(FIT_MARGIN);
    let train = ratios.iter().zip(&splits).filter(|(_, s)| **s == Split::Train).map(|(q, _)| *q);
    let nan_or = |m: T, q: T, pick: fn(T, T) -> T| if m.is_nan() || q.is_nan() { T::nan() } else { pick(m, q) };
    match bound {
        Bound::Upper => train.fold(T::zero(), |m, q| nan_or(m, q, T::max)) * margin,
        Bound::Lower => train.fold(T::infinity(), |m, q| nan_or(m, q, T::min)) / margin,
    }
}

/// Fits the constant, records every row with its verdict and returns the
/// constant.
pub(crate) fn fit_rows<T: Real>(report: &mut VerificationReport<T>, raws: Vec<Raw<T>>, bound: Bound, seed: u64) -> T {
    let ratios: Vec<T> = raws.iter().map(|r| ratio(r.lhs, r.rhs)).collect();
    let c = fitted_constant(&ratios, bound, seed);
    let splits = assign_splits(raws.len(), seed);
    for ((raw, split), q) in raws.into_iter().zip(splits).zip(ratios) {
        let pass = match bound {
            Bound::Upper => c.is_finite() && q <= c,
            Bound::Lower => c > T::zero() && q >= c,
        };
        report.push(TrialRow { label: raw.label, split, lhs: raw.lhs, rhs: raw.rhs, ratio: q, pass });
    }
    c
}
