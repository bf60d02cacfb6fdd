//! Young functions, their inverses and the admissibility integrals
//!
//! ```text
//! Λ̲_φ(α) = sup_x ∫₀¹ φ(t^{1−α} x)/φ(x) dt/t^{n+1}
//! Λ̄_φ(α) = sup_x ∫₁^∞ φ(t^{−α} x)/φ(x) dt/t^{n+1}
//! ```

use std::fmt;
use std::str::FromStr;

use rand::Rng;

use crate::error::{parse_err, Error, Result};
use crate::parse::{numbers, split_kind, split_top, weighted};
use crate::quadrature::sampling::{self, streams};
use crate::quadrature::{integrate_weighted_1d_log, HalfLine};
use crate::Real;

/// Points of the logarithmic `x` grid used for the suprema.
pub const SUP_GRID_POINTS: usize = 121;
/// The grid runs over `10^{-6} ..= 10^{6}`.
pub const SUP_GRID_DECADES: (f64, f64) = (-6.0, 6.0);
/// Relative tolerance for convex-combination weights summing to one.
const WEIGHT_SUM_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub enum YoungFunction<T> {
    /// `t^p`
    Power { p: T },
    /// `t^p [ln(1 + t)]^γ`
    PowerLog { p: T, gamma: T },
    /// `Σ w_i φ_i` with positive weights summing to one.
    Mix(Vec<(T, YoungFunction<T>)>),
}

impl<T: Real> YoungFunction<T> {
    /// `t^p` for `p > 0`. Exponents below one give a concave gauge, allowed
    /// only so that admissibility windows can be probed from below.
    pub fn power(p: T) -> Result<Self> {
        if !(p > T::zero()) || !p.is_finite() {
            return Err(Error::Validation(format!("power exponent must be positive, got {p}")));
        }
        Ok(Self::Power { p })
    }

    pub fn powerlog(p: T, gamma: T) -> Result<Self> {
        if !(p >= T::one()) || !p.is_finite() {
            return Err(Error::Validation(format!("powerlog exponent must be at least 1, got {p}")));
        }
        if !(gamma >= T::zero()) || !gamma.is_finite() {
            return Err(Error::Validation(format!("log power must be nonnegative, got {gamma}")));
        }
        Ok(Self::PowerLog { p, gamma })
    }

    pub fn convex_combine(parts: Vec<(T, YoungFunction<T>)>) -> Result<Self> {
        if parts.is_empty() {
            return Err(Error::Validation("empty convex combination".into()));
        }
        if parts.iter().any(|(w, _)| !(*w > T::zero())) {
            return Err(Error::Validation("mixture weights must be positive".into()));
        }
        let sum: T = parts.iter().map(|(w, _)| *w).sum();
        if (sum - T::one()).abs() > T::lit(WEIGHT_SUM_TOL).max(T::epsilon() * T::lit(16.0)) {
            return Err(Error::Validation(format!("mixture weights sum to {sum}, not 1")));
        }
        Ok(Self::Mix(parts))
    }

    pub fn is_convex(&self) -> bool {
        match self {
            Self::Power { p } => *p >= T::one(),
            Self::PowerLog { .. } => true,
            Self::Mix(parts) => parts.iter().all(|(_, f)| f.is_convex()),
        }
    }

    /// `φ(t)`.
    pub fn eval(&self, t: T) -> Result<T> {
        if !(t >= T::zero()) {
            return Err(Error::Domain(format!("Young functions are defined on t >= 0, got {t}")));
        }
        Ok(self.value(t))
    }

    /// `φ(t)` for `t ≥ 0`, without the range check.
    pub fn value(&self, t: T) -> T {
        if t == T::zero() {
            return T::zero();
        }
        match self {
            Self::Power { p } => t.powf(*p),
            Self::PowerLog { p, gamma } => t.powf(*p) * t.ln_1p().powf(*gamma),
            Self::Mix(parts) => parts.iter().map(|(w, f)| *w * f.value(t)).sum(),
        }
    }

    /// `ln φ(e^s)`, accurate where `φ` itself would over- or underflow.
    pub fn ln_value(&self, s: T) -> T {
        match self {
            Self::Power { p } => *p * s,
            Self::PowerLog { p, gamma } => {
                if *gamma == T::zero() {
                    return *p * s;
                }
                *p * s + *gamma * ln_ln1p_exp(s)
            }
            Self::Mix(parts) => {
                let terms: Vec<T> = parts.iter().map(|(w, f)| w.ln() + f.ln_value(s)).collect();
                let m = terms.iter().copied().fold(T::neg_infinity(), T::max);
                if m == T::neg_infinity() {
                    return m;
                }
                m + terms.iter().map(|&v| (v - m).exp()).sum::<T>().ln()
            }
        }
    }

    /// `t` with `φ(t) = y`: bracket doubling, then bisection until
    /// `|φ(t) − y| ≤ rel_tol · y` or the bracket stops shrinking.
    pub fn inverse(&self, y: T, rel_tol: T) -> Result<T> {
        if !(y >= T::zero()) {
            return Err(Error::Domain(format!("inverse needs y >= 0, got {y}")));
        }
        if y == T::zero() {
            return Ok(T::zero());
        }
        if !y.is_finite() {
            return Ok(T::infinity());
        }
        let mut lo = T::zero();
        let mut hi = T::one();
        while self.value(hi) < y {
            lo = hi;
            hi = hi + hi;
        }
        if lo == T::zero() {
            while self.value(hi * T::lit(0.5)) >= y && hi > T::min_positive_value() {
                hi = hi * T::lit(0.5);
            }
            lo = hi * T::lit(0.5);
        }
        for _ in 0..200 {
            let mid = lo + (hi - lo) * T::lit(0.5);
            if mid <= lo || mid >= hi {
                break;
            }
            let v = self.value(mid);
            if (v - y).abs() <= rel_tol * y {
                return Ok(mid);
            }
            if v < y {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        Ok(lo + (hi - lo) * T::lit(0.5))
    }

    /// `Λ̲_φ(α)` on the default grid; `∞` when any inner integral diverges.
    pub fn lambda_under(&self, alpha: T, n: usize) -> Result<T> {
        Ok(sup_over_grid(&self.lambda_profile(alpha, n, Side::Under)?).0)
    }

    /// `Λ̄_φ(α)` on the default grid.
    pub fn lambda_over(&self, alpha: T, n: usize) -> Result<T> {
        Ok(sup_over_grid(&self.lambda_profile(alpha, n, Side::Over)?).0)
    }

    /// Inner admissibility integral at every grid point, as `(x, value)`.
    pub fn lambda_profile(&self, alpha: T, n: usize, side: Side) -> Result<Vec<(T, T)>> {
        check_alpha(alpha, n)?;
        let (d0, d1) = SUP_GRID_DECADES;
        let step = (d1 - d0) / (SUP_GRID_POINTS - 1) as f64;
        Ok((0..SUP_GRID_POINTS)
            .map(|i| {
                let x = T::lit(10f64.powf(d0 + step * i as f64));
                (x, self.admissibility_integral(x, alpha, n, side))
            })
            .collect())
    }

    /// Inner integral of `Λ̲` or `Λ̄` at a single `x > 0`.
    pub fn admissibility_integral(&self, x: T, alpha: T, n: usize, side: Side) -> T {
        let lx = x.ln();
        let base = self.ln_value(lx);
        let (slope, half) = match side {
            Side::Under => (T::one() - alpha, HalfLine::Unit),
            Side::Over => (-alpha, HalfLine::Tail),
        };
        integrate_weighted_1d_log(|s: T| self.ln_value(slope * s + lx) - base, half, n).value
    }

    pub fn admissible(&self, alpha: T, n: usize) -> Result<AdmissibilityResult<T>> {
        let under = self.lambda_profile(alpha, n, Side::Under)?;
        let over = self.lambda_profile(alpha, n, Side::Over)?;
        let (lambda_under, wu, bu) = sup_over_grid(&under);
        let (lambda_over, wo, bo) = sup_over_grid(&over);
        let convex = self.is_convex();
        Ok(AdmissibilityResult {
            lambda_under,
            lambda_over,
            admissible: convex && lambda_under.is_finite() && lambda_over.is_finite(),
            under_witness_x: wu,
            over_witness_x: wo,
            boundary_warning: bu || bo,
            convex,
        })
    }

    /// Samples the growth bounds
    ///
    /// ```text
    /// φ(xs) ≤ 2^{2n} Λ̲ φ(2^{1−α}x) s^{n/(1−α)}   for s ∈ (0, 1]
    /// φ(xs) ≤ 2^{3n} Λ̄ φ(x) s^{−n/α}             for s ≥ 1
    /// ```
    ///
    /// at `samples` log-uniform `x ∈ [10⁻³, 10³]` and `s` in `[10⁻⁶, 1]` or
    /// `[1, 10⁶]` (half each).
    pub fn check_growth_bounds(&self, alpha: T, n: usize, samples: usize, seed: u64) -> Result<GrowthCheck<T>> {
        let adm = self.admissible(alpha, n)?;
        if !adm.admissible {
            return Err(Error::Domain(format!("{self} is not admissible for alpha = {alpha}")));
        }
        let nn = T::from_usize_lossy(n);
        let ln2 = T::LN_2();
        let (ln_lu, ln_lo) = (adm.lambda_under.ln(), adm.lambda_over.ln());
        let mut rng = sampling::stream(seed, streams::TRIALS);
        let ln10 = T::LN_10();
        let mut out = GrowthCheck { trials: 0, violations: 0, worst_log_margin: T::neg_infinity(), worst: None };
        for k in 0..samples {
            let lx = T::lit(rng.random_range(-3.0..=3.0)) * ln10;
            let under = k % 2 == 0;
            let ls = T::lit(if under { rng.random_range(-6.0..=0.0) } else { rng.random_range(0.0..=6.0) }) * ln10;
            let lhs = self.ln_value(lx + ls);
            let rhs = if under {
                T::lit(2.0) * nn * ln2 + ln_lu + self.ln_value(lx + (T::one() - alpha) * ln2) + nn / (T::one() - alpha) * ls
            } else {
                T::lit(3.0) * nn * ln2 + ln_lo + self.ln_value(lx) - nn / alpha * ls
            };
            // log-space comparison with the convexity-check slack
            let margin = lhs - rhs;
            out.trials += 1;
            if margin > T::lit(1e-12) * T::one().max(rhs.abs()) {
                out.violations += 1;
            }
            if margin > out.worst_log_margin {
                out.worst_log_margin = margin;
                out.worst = Some((lx.exp(), ls.exp()));
            }
        }
        Ok(out)
    }

    /// Whether `φ(x s^{−α}) s^{−n}` is eventually decreasing along `s = 2^k`
    /// and has dropped well below its maximum by `s = 2^{80}`.
    pub fn far_field_decays(&self, x: T, alpha: T, n: usize) -> bool {
        let nn = T::from_usize_lossy(n);
        let lx = x.ln();
        let vals: Vec<T> = (0..=80)
            .map(|k| {
                let ls = T::from_usize_lossy(k) * T::LN_2();
                self.ln_value(lx - alpha * ls) - nn * ls
            })
            .collect();
        let last_rise = vals.windows(2).rposition(|w| w[1] > w[0]).map_or(0, |i| i + 1);
        let max = vals.iter().copied().fold(T::neg_infinity(), T::max);
        last_rise <= 60 && *vals.last().expect("grid") < max - T::lit(3.0)
    }
}

/// `ln ln(1 + e^s)` without overflow for large `s` or underflow for small.
fn ln_ln1p_exp<T: Real>(s: T) -> T {
    if s > T::lit(30.0) {
        (s + (-s).exp().ln_1p()).ln()
    } else if s < T::lit(-30.0) {
        // ln(1 + e^s) = e^s (1 − e^s/2 + …)
        s + (-(s.exp()) * T::lit(0.5)).ln_1p()
    } else {
        s.exp().ln_1p().ln()
    }
}

fn check_alpha<T: Real>(alpha: T, n: usize) -> Result<()> {
    if n < 2 {
        return Err(Error::Domain(format!("dimension must be at least 2, got {n}")));
    }
    if !(alpha < T::zero() && alpha > -T::from_usize_lossy(n)) {
        return Err(Error::Domain(format!("alpha must lie in (-{n}, 0), got {alpha}")));
    }
    Ok(())
}

/// Supremum over the profile, its witness and whether a non-flat profile
/// peaks at either end of the grid.
fn sup_over_grid<T: Real>(profile: &[(T, T)]) -> (T, T, bool) {
    let mut best = 0;
    for (i, (_, v)) in profile.iter().enumerate() {
        if *v > profile[best].1 || v.is_nan() {
            best = i;
        }
    }
    let max = profile[best].1;
    let min = profile.iter().map(|p| p.1).fold(T::infinity(), T::min);
    let flat = max.is_finite() && max <= min * (T::one() + T::lit(1e-6));
    let at_end = best == 0 || best == profile.len() - 1;
    (max, profile[best].0, at_end && !flat && max.is_finite())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    /// `∫₀¹`, near-diagonal behaviour.
    Under,
    /// `∫₁^∞`, far-field behaviour.
    Over,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AdmissibilityResult<T> {
    pub lambda_under: T,
    pub lambda_over: T,
    /// Both suprema finite and `φ` convex.
    pub admissible: bool,
    pub under_witness_x: T,
    pub over_witness_x: T,
    /// A supremum sits at an end of the `x` grid: the true one may be larger.
    pub boundary_warning: bool,
    pub convex: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GrowthCheck<T> {
    pub trials: usize,
    pub violations: usize,
    /// Largest `ln(lhs) − ln(rhs)` seen; negative means every sample held.
    pub worst_log_margin: T,
    /// `(x, s)` attaining it.
    pub worst: Option<(T, T)>,
}

impl<T: Real> fmt::Display for YoungFunction<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Power { p } => write!(f, "pow:{p}"),
            Self::PowerLog { p, gamma } => write!(f, "powlog:{p},{gamma}"),
            Self::Mix(parts) => {
                write!(f, "mix:")?;
                for (i, (w, g)) in parts.iter().enumerate() {
                    if i > 0 {
                        write!(f, "+")?;
                    }
                    match g {
                        Self::Mix(_) => write!(f, "{w}*({g})")?,
                        _ => write!(f, "{w}*{g}")?,
                    }
                }
                Ok(())
            }
        }
    }
}

impl<T: Real> FromStr for YoungFunction<T> {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (kind, args) = split_kind(s)?;
        match kind {
            "pow" => Self::power(crate::parse::number(args)?),
            "powlog" => {
                let v = numbers(args, 2)?;
                Self::powerlog(v[0], v[1])
            }
            "mix" => {
                let parts = split_top(args, '+')
                    .into_iter()
                    .map(|part| {
                        let (w, rest) = weighted::<T>(part)?;
                        Ok((w, rest.parse::<YoungFunction<T>>()?))
                    })
                    .collect::<Result<Vec<_>>>()?;
                Self::convex_combine(parts)
            }
            other => Err(parse_err(other, "unknown Young function (pow, powlog, mix)")),
        }
    }
}
