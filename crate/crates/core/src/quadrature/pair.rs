//! Pair integrals `∬_{Ω×Ω} F(x, y) |x − y|^{-4} dx dy` in the plane.
//!
//! With `y = x + tω` the kernel and the polar Jacobian combine into
//! `t^{-2} dt/t dω`. Offsets are drawn log-uniformly in `t` on `n_radial`
//! strata of `[t_min, t_max]`, so each sample carries the analytic weight
//! `2π · (ln(t_max/t_min)/n_radial) · t^{-2}` times the outer cell area.

use super::sampling::{self, streams, Rect, Stratified};
use super::QuadratureSpec;
use crate::error::{Error, Result};
use crate::geometry::Domain;
use crate::{Point, Real};

/// Contribution ratio between the lowest `t`-decade and the next one above
/// which the near-diagonal part is judged not to decay.
pub const DIVERGENCE_RATIO: f64 = 0.85;

#[derive(Debug, Clone, PartialEq)]
pub struct PairEstimate<T> {
    pub value: T,
    pub std_err: T,
    /// Near-diagonal contributions do not decay as `t → t_min`: the integral
    /// over all of `Ω × Ω` is most likely infinite.
    pub diverged: bool,
    /// Contributions per radial group, smallest `t` first.
    pub group_totals: Vec<T>,
}

/// Frozen sample of pairs `(x, y)` with quadrature weights. Reusing one set
/// for every evaluation (common random numbers) keeps estimates monotone in
/// any parameter the integrand is monotone in.
#[derive(Debug, Clone)]
pub struct PairSet<T> {
    pub x: Vec<Point<T>>,
    pub y: Vec<Point<T>>,
    pub t: Vec<T>,
    pub w: Vec<T>,
    group: Vec<u32>,
    owner: Vec<u32>,
    n_groups: usize,
    n_outer: usize,
    t_min: T,
    t_max: T,
}

impl<T: Real> PairSet<T> {
    /// Pairs over all of `Ω × Ω`.
    pub fn build(dom: &Domain<T>, spec: &QuadratureSpec<T>) -> Result<Self> {
        Self::build_in(dom, None, spec)
    }

    /// With `support = Some(A)` the outer point only ranges over `A ∩ Ω` and
    /// pairs leaving `A` count twice. This is exact for integrands that
    /// vanish whenever both points lie outside `A`, such as `|u(x) − u(y)|`
    /// for `u` constant off `A`.
    pub fn build_in(dom: &Domain<T>, support: Option<Rect<T>>, spec: &QuadratureSpec<T>) -> Result<Self> {
        spec.validate()?;
        let region = match support {
            Some(a) => dom.local_bbox(&a),
            None => dom.local_bbox(&dom.bbox()),
        };
        let (t_min, t_max) = spec.radial_range(dom.diam());
        let log_span = (t_max / t_min).ln();
        let decades = log_span / T::LN_10();
        let n_groups = (decades / spec.decades_per_stratum).ceil().as_f64().max(1.0) as usize;
        let n_radial = spec.n_radial;
        let mut set = PairSet {
            x: Vec::new(),
            y: Vec::new(),
            t: Vec::new(),
            w: Vec::new(),
            group: Vec::new(),
            owner: Vec::new(),
            n_groups,
            n_outer: 0,
            t_min,
            t_max,
        };
        if region.is_empty() {
            return Ok(set);
        }

        let mut outer_rng = sampling::stream(spec.seed, streams::PAIR_OUTER);
        let mut radial_rng = sampling::stream(spec.seed, streams::PAIR_RADIAL);
        let grid = Stratified::new(&region, spec.n_outer, 1, &mut outer_rng);
        set.n_outer = grid.points.len();
        let w_outer = grid.cell_area;
        let dlog = log_span / T::from_usize_lossy(n_radial);
        let base = w_outer * T::TAU() * dlog;
        let ln_min = t_min.ln();
        let two = T::lit(2.0);

        for (k, x) in grid.points.iter().enumerate() {
            if !dom.contains(x) {
                continue;
            }
            for i in 0..n_radial {
                let u: T = sampling::uniform(&mut radial_rng);
                let om: Point<T> = sampling::direction(&mut radial_rng);
                let s = ln_min + (T::from_usize_lossy(i) + u) * dlog;
                let t = s.exp();
                let y = [x[0] + t * om[0], x[1] + t * om[1]];
                if !dom.contains(&y) {
                    continue;
                }
                let mut w = base / (t * t);
                if support.is_some() && !region.contains(&y) {
                    w = w * two;
                }
                let mid = (T::from_usize_lossy(i) + T::lit(0.5)) * dlog / T::LN_10();
                let g = ((mid / spec.decades_per_stratum).floor().as_f64() as usize).min(n_groups - 1);
                set.x.push(*x);
                set.y.push(y);
                set.t.push(t);
                set.w.push(w);
                set.group.push(g as u32);
                set.owner.push(k as u32);
            }
        }
        Ok(set)
    }

    pub fn len(&self) -> usize {
        self.w.len()
    }

    pub fn is_empty(&self) -> bool {
        self.w.is_empty()
    }

    pub fn radial_range(&self) -> (T, T) {
        (self.t_min, self.t_max)
    }

    /// `Σ w_i F_i` for integrand values `F_i` in pair order.
    pub fn sum(&self, values: &[T]) -> T {
        debug_assert_eq!(values.len(), self.w.len());
        self.w.iter().zip(values).map(|(&w, &v)| w * v).sum()
    }

    /// Full estimate with standard error and divergence diagnosis.
    pub fn estimate(&self, values: &[T]) -> PairEstimate<T> {
        debug_assert_eq!(values.len(), self.w.len());
        let mut per_outer = vec![T::zero(); self.n_outer.max(1)];
        let mut groups = vec![T::zero(); self.n_groups];
        let mut value = T::zero();
        for i in 0..self.w.len() {
            let c = self.w[i] * values[i];
            value = value + c;
            per_outer[self.owner[i] as usize] = per_outer[self.owner[i] as usize] + c;
            groups[self.group[i] as usize] = groups[self.group[i] as usize] + c;
        }
        let n = T::from_usize_lossy(per_outer.len());
        let std_err = if per_outer.len() > 1 {
            let mean = value / n;
            let ss: T = per_outer.iter().map(|&c| (c - mean) * (c - mean)).sum();
            (ss / (n - T::one()) * n).sqrt()
        } else {
            T::zero()
        };
        let diverged = near_diagonal_diverges(&groups, self.n_groups, self.decades_per_group());
        PairEstimate { value, std_err, diverged, group_totals: groups }
    }

    fn decades_per_group(&self) -> T {
        (self.t_max / self.t_min).log10() / T::from_usize_lossy(self.n_groups)
    }
}

/// Compares the lowest decade of `t` with the one above it.
fn near_diagonal_diverges<T: Real>(groups: &[T], n_groups: usize, per_group: T) -> bool {
    let per_decade = ((T::one() / per_group).round().as_f64() as usize).max(1);
    if n_groups < 2 * per_decade {
        return false;
    }
    let low: T = groups[..per_decade].iter().copied().sum();
    let next: T = groups[per_decade..2 * per_decade].iter().copied().sum();
    if !(low > T::zero()) {
        return false;
    }
    !(next > T::zero()) || low >= T::lit(DIVERGENCE_RATIO) * next
}

/// Estimate of `∬ F(x, y) |x − y|^{-4} dx dy` over `Ω × Ω`.
pub fn integrate_pair_singular<T, F>(f: F, dom: &Domain<T>, spec: &QuadratureSpec<T>) -> Result<PairEstimate<T>>
where
    T: Real,
    F: Fn(&Point<T>, &Point<T>) -> T,
{
    let set = PairSet::build(dom, spec)?;
    let values: Vec<T> = set.x.iter().zip(&set.y).map(|(x, y)| f(x, y)).collect();
    Ok(set.estimate(&values))
}

/// `∫ g(y, |y − x|) |x − y|^{-4} dy` over `y ∈ Ω` with `|y − x| > s_lo`, by a
/// product midpoint rule in `(ln |y − x|, angle)`.
pub fn integrate_point_singular<T, G>(
    dom: &Domain<T>,
    x: Point<T>,
    s_lo: T,
    g: G,
    spec: &QuadratureSpec<T>,
) -> Result<T>
where
    T: Real,
    G: Fn(&Point<T>, T) -> T,
{
    if !(s_lo > T::zero()) {
        return Err(Error::Domain(format!("lower radius must be positive, got {s_lo}")));
    }
    let b = dom.bbox();
    let s_hi = [b.lo, b.hi, [b.lo[0], b.hi[1]], [b.hi[0], b.lo[1]]]
        .iter()
        .map(|c| crate::real::dist(c, &x))
        .fold(T::zero(), T::max);
    if s_hi <= s_lo {
        return Ok(T::zero());
    }
    let n_r = 8 * spec.n_radial;
    let n_a = 256;
    let (l0, l1) = (s_lo.ln(), s_hi.ln());
    let dl = (l1 - l0) / T::from_usize_lossy(n_r);
    let da = T::TAU() / T::from_usize_lossy(n_a);
    let dirs: Vec<Point<T>> = (0..n_a)
        .map(|k| {
            let a = (T::from_usize_lossy(k) + T::lit(0.5)) * da;
            [a.cos(), a.sin()]
        })
        .collect();
    let mut total = T::zero();
    for i in 0..n_r {
        let r = (l0 + (T::from_usize_lossy(i) + T::lit(0.5)) * dl).exp();
        let mut ring = T::zero();
        for d in &dirs {
            let y = [x[0] + r * d[0], x[1] + r * d[1]];
            if dom.contains(&y) {
                ring = ring + g(&y, r);
            }
        }
        total = total + ring / (r * r);
    }
    Ok(total * dl * da)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn zero_integrand() {
        let d = Domain::<f64>::unit_ball();
        let e = integrate_pair_singular(|_, _| 0.0, &d, &QuadratureSpec::default()).unwrap();
        assert_eq!(e.value, 0.0);
        assert!(!e.diverged);
    }

    #[test]
    fn pair_volume_of_disc() {
        let d = Domain::<f64>::unit_ball();
        let spec = QuadratureSpec::default().with_counts(2048, 64);
        let e = integrate_pair_singular(|x, y| crate::real::dist(x, y).powi(4), &d, &spec).unwrap();
        assert!((e.value / (PI * PI) - 1.0).abs() < 0.05, "{e:?}");
        assert!(!e.diverged);
    }

    #[test]
    fn flat_near_diagonal_profile_is_flagged() {
        // F = |x − y|² makes every log-decade of t contribute alike near 0
        let d = Domain::<f64>::unit_square();
        let spec = QuadratureSpec::default().with_counts(512, 64);
        let e = integrate_pair_singular(|x, y| crate::real::dist(x, y).powi(2), &d, &spec).unwrap();
        assert!(e.diverged, "{:?}", e.group_totals);
        let e = integrate_pair_singular(|x, y| crate::real::dist(x, y).powi(3), &d, &spec).unwrap();
        assert!(!e.diverged);
    }

    #[test]
    fn support_mode_matches_full_sampling() {
        // F depends on u = bump supported in a small box; both estimates agree
        let d = Domain::<f64>::unit_square();
        let a = Rect::new([0.3, 0.3], [0.7, 0.7]);
        let u = |p: &Point<f64>| {
            let r = crate::real::dist(p, &[0.5, 0.5]);
            (0.2 - r).max(0.0)
        };
        let f = |x: &Point<f64>, y: &Point<f64>| (u(x) - u(y)).abs().powi(2) * crate::real::dist(x, y).powi(1);
        let spec = QuadratureSpec::default().with_counts(4096, 64);
        let full = PairSet::build(&d, &spec).unwrap();
        let vf: Vec<f64> = full.x.iter().zip(&full.y).map(|(x, y)| f(x, y)).collect();
        let local = PairSet::build_in(&d, Some(a), &spec).unwrap();
        let vl: Vec<f64> = local.x.iter().zip(&local.y).map(|(x, y)| f(x, y)).collect();
        let (ef, el) = (full.estimate(&vf), local.estimate(&vl));
        assert!((ef.value / el.value - 1.0).abs() < 0.05, "{} vs {}", ef.value, el.value);
    }

    #[test]
    fn point_singular_annulus() {
        // ∫_{ρ<|y|<1} |y|^{1.5} |y|^{-4} dy = 4π(ρ^{-1/2} − 1)
        let d = Domain::<f64>::unit_ball();
        for rho in [0.25, 1.0 / 64.0] {
            let v = integrate_point_singular(&d, [0.0, 0.0], rho, |_, r| r.powf(1.5), &QuadratureSpec::default())
                .unwrap();
            let exact = 4.0 * PI * (rho.powf(-0.5) - 1.0);
            assert!((v / exact - 1.0).abs() < 0.01, "{v} vs {exact}");
        }
    }

    #[test]
    fn reproducible() {
        let d = Domain::<f64>::unit_ball();
        let spec = QuadratureSpec::default().with_counts(256, 16);
        let a = integrate_pair_singular(|x, y| crate::real::dist(x, y).powi(4), &d, &spec).unwrap();
        let b = integrate_pair_singular(|x, y| crate::real::dist(x, y).powi(4), &d, &spec).unwrap();
        assert_eq!(a.value.to_bits(), b.value.to_bits());
    }
}
