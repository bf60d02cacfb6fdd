//! Improper integrals `∫ g(t) dt / t^{n+1}` over `(0, 1]` or `[1, ∞)`.
//!
//! The integral is taken in the logarithmic variable `s = ln t`, where the
//! weight becomes `e^{-n s} ds`, one decade at a time with a composite
//! Gauss-Legendre rule. Pure power-law tails show up as a constant ratio
//! between consecutive decade contributions: a ratio below one is summed as
//! a geometric series, a ratio of one or more is reported as divergence.

use super::gauss::gl16;
use crate::Real;

/// Which half-line the weighted integral runs over.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HalfLine {
    /// `(0, 1]`
    Unit,
    /// `[1, ∞)`
    Tail,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeightedIntegral<T> {
    /// `+∞` when divergence was detected.
    pub value: T,
    /// Number of decades evaluated explicitly.
    pub decades: usize,
    pub diverged: bool,
}

impl<T: Real> WeightedIntegral<T> {
    pub fn is_finite(&self) -> bool {
        !self.diverged
    }
}

/// Decades evaluated before the tail classification may kick in.
pub const MIN_DECADES: usize = 12;
/// A latest-decade share above this at the decade limit means divergence.
pub const DIVERGENCE_SHARE: f64 = 1e-3;
const CONVERGED_SHARE: f64 = 1e-15;
/// Ratios within this distance of one are treated as a non-decaying tail.
const UNIT_RATIO_TOL: f64 = 1e-9;
/// Maximum spread of the last ratios for geometric extrapolation.
const RATIO_SPREAD_TOL: f64 = 1e-6;
const PANELS: usize = 2;

/// `∫ g(t) dt / t^{n+1}` for a nonnegative `g`.
pub fn integrate_weighted_1d<T, G>(g: G, interval: HalfLine, n: usize) -> WeightedIntegral<T>
where
    T: Real,
    G: Fn(T) -> T,
{
    let nn = T::from_usize_lossy(n);
    integrate_log_variable(
        |s: T| {
            let gv = g(s.exp());
            if gv <= T::zero() {
                T::zero()
            } else {
                (gv.ln() - nn * s).exp()
            }
        },
        interval,
    )
}

/// Same integral with `g` supplied through `ln_g(ln t) = ln g(t)`; avoids the
/// overflow of forming `g` and `t^{-n}` separately far out on either side.
pub fn integrate_weighted_1d_log<T, G>(ln_g: G, interval: HalfLine, n: usize) -> WeightedIntegral<T>
where
    T: Real,
    G: Fn(T) -> T,
{
    let nn = T::from_usize_lossy(n);
    integrate_log_variable(
        |s: T| {
            let l = ln_g(s);
            if l == T::neg_infinity() {
                T::zero()
            } else {
                (l - nn * s).exp()
            }
        },
        interval,
    )
}

/// Largest number of decades representable for `T` on the `(0, 1]` side.
fn max_decades<T: Real>() -> usize {
    let decades = (-T::ln_min_positive() / T::LN_10()).as_f64();
    ((decades - 8.0).max(MIN_DECADES as f64 + 4.0)) as usize
}

/// `∫ h(s) ds` over `s ≤ 0` (Unit) or `s ≥ 0` (Tail), `h ≥ 0`.
fn integrate_log_variable<T, H>(h: H, interval: HalfLine) -> WeightedIntegral<T>
where
    T: Real,
    H: Fn(T) -> T,
{
    let ln10 = T::LN_10();
    let limit = max_decades::<T>();
    let mut total = T::zero();
    let mut contribs: Vec<T> = Vec::new();

    for k in 0..limit {
        let kk = T::from_usize_lossy(k);
        let (a, b) = match interval {
            HalfLine::Unit => (-(kk + T::one()) * ln10, -kk * ln10),
            HalfLine::Tail => (kk * ln10, (kk + T::one()) * ln10),
        };
        let c = decade(&h, a, b);
        if !c.is_finite() {
            return diverged(k + 1);
        }
        total = total + c;
        contribs.push(c);

        if total == T::zero() {
            if k + 1 >= MIN_DECADES {
                return WeightedIntegral { value: T::zero(), decades: k + 1, diverged: false };
            }
            continue;
        }
        if k >= 1 && c <= T::lit(CONVERGED_SHARE) * total {
            return WeightedIntegral { value: total, decades: k + 1, diverged: false };
        }
        if k + 1 >= MIN_DECADES {
            if let Some(ratios) = last_ratios(&contribs) {
                if ratios.iter().all(|&r| r >= T::one() - T::lit(UNIT_RATIO_TOL)) {
                    return diverged(k + 1);
                }
                let lo = ratios.iter().copied().fold(T::infinity(), T::min);
                let hi = ratios.iter().copied().fold(T::neg_infinity(), T::max);
                if hi < T::one() && hi - lo <= T::lit(RATIO_SPREAD_TOL) * hi.max(T::lit(1e-300)) {
                    let r = ratios[2];
                    let value = total + c * r / (T::one() - r);
                    return WeightedIntegral { value, decades: k + 1, diverged: false };
                }
            }
        }
    }

    let last = *contribs.last().unwrap_or(&T::zero());
    if last > T::lit(DIVERGENCE_SHARE) * total {
        return diverged(limit);
    }
    let tail = match last_ratios(&contribs) {
        Some(r) if r[2] < T::one() => last * r[2] / (T::one() - r[2]),
        _ => T::zero(),
    };
    WeightedIntegral { value: total + tail, decades: limit, diverged: false }
}

fn diverged<T: Real>(decades: usize) -> WeightedIntegral<T> {
    WeightedIntegral { value: T::infinity(), decades, diverged: true }
}

fn last_ratios<T: Real>(c: &[T]) -> Option<[T; 3]> {
    if c.len() < 4 {
        return None;
    }
    let m = c.len();
    let mut out = [T::zero(); 3];
    for (i, slot) in out.iter_mut().enumerate() {
        let prev = c[m - 4 + i];
        let next = c[m - 3 + i];
        if prev <= T::zero() {
            return None;
        }
        *slot = next / prev;
    }
    Some(out)
}

fn decade<T: Real, H: Fn(T) -> T>(h: &H, a: T, b: T) -> T {
    let (nodes, weights) = gl16();
    let width = (b - a) / T::from_usize_lossy(PANELS);
    let mut sum = T::zero();
    for p in 0..PANELS {
        let lo = a + width * T::from_usize_lossy(p);
        let half = width * T::lit(0.5);
        let mid = lo + half;
        for (x, w) in nodes.iter().zip(weights) {
            sum = sum + T::lit(*w) * h(mid + half * T::lit(*x));
        }
    }
    sum * width * T::lit(0.5)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    #[test]
    fn weight_cancelling_integrands() {
        // g(t) = t^{n+1} on (0,1]: integrand identically one
        for n in [2usize, 3] {
            let r = integrate_weighted_1d(|t: f64| t.powi(n as i32 + 1), HalfLine::Unit, n);
            assert!(rel(r.value, 1.0) < 1e-10, "n={n} {:?}", r);
        }
        let r = integrate_weighted_1d(|t: f64| t.powi(3), HalfLine::Unit, 2);
        assert!(rel(r.value, 1.0) < 1e-10);
    }

    #[test]
    fn tail_power_law() {
        let r = integrate_weighted_1d(|t: f64| t.powf(1.5), HalfLine::Tail, 2);
        assert!(rel(r.value, 2.0) < 5e-3, "{:?}", r);
        assert!(rel(r.value, 2.0) < 1e-8, "geometric tail should be essentially exact: {:?}", r);
    }

    #[test]
    fn slow_but_convergent_power_law() {
        // ∫_0^1 t^{-0.98} dt = 50
        let r = integrate_weighted_1d(|t: f64| t.powf(2.02), HalfLine::Unit, 2);
        assert!(!r.diverged);
        assert!(rel(r.value, 50.0) < 1e-6, "{:?}", r);
    }

    #[test]
    fn log_divergence_detected() {
        let r = integrate_weighted_1d(|t: f64| t * t, HalfLine::Unit, 2);
        assert!(r.diverged && r.value.is_infinite());
        let r = integrate_weighted_1d(|t: f64| t * t, HalfLine::Tail, 2);
        assert!(r.diverged);
        let r = integrate_weighted_1d(|t: f64| t.powf(2.5), HalfLine::Tail, 2);
        assert!(r.diverged);
    }

    #[test]
    fn zero_integrand() {
        let r = integrate_weighted_1d(|_t: f64| 0.0, HalfLine::Unit, 2);
        assert_eq!(r.value, 0.0);
        assert!(!r.diverged);
    }

    #[test]
    fn log_form_matches_direct_form() {
        let a = integrate_weighted_1d(|t: f64| t.powf(3.3), HalfLine::Unit, 2);
        let b = integrate_weighted_1d_log(|s: f64| 3.3 * s, HalfLine::Unit, 2);
        assert!(rel(a.value, b.value) < 1e-12);
        assert!(rel(a.value, 1.0 / 1.3) < 1e-9);
    }

    #[test]
    fn single_precision_agrees() {
        let r = integrate_weighted_1d(|t: f32| t.powf(1.5), HalfLine::Tail, 2);
        assert!((r.value - 2.0).abs() < 1e-3, "{:?}", r);
    }

    #[test]
    fn log_factor_tail_converges() {
        // ∫_1^∞ ln(1+t) t^{-3} dt: no closed power law, must still converge
        let r = integrate_weighted_1d(|t: f64| t * (1.0 + t).ln(), HalfLine::Tail, 2);
        assert!(!r.diverged);
        // u = 1/t turns it into ∫_0^1 ln(1 + 1/u) du = 2 ln 2
        let exact = 2.0 * std::f64::consts::LN_2;
        assert!(rel(r.value, exact) < 1e-9, "{} vs {}", r.value, exact);
    }
}
