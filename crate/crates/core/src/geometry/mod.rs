//! Domains, ball-intersection measures, the measure-density constant,
//! dyadic radii and the annulus property.

mod domain;

pub use domain::{Domain, DomainKind};

use crate::error::{Error, Result};
use crate::quadrature::sampling::{self, streams, Rect, Stratified};
use crate::quadrature::QuadratureSpec;
use crate::{Point, Real};

/// Volume of the unit ball in `ℝⁿ`.
pub fn unit_ball_volume<T: Real>(n: usize) -> T {
    let mut v = if n.is_multiple_of(2) { T::one() } else { T::lit(2.0) };
    let mut k = if n.is_multiple_of(2) { 2 } else { 3 };
    while k <= n {
        v = v * T::TAU() / T::from_usize_lossy(k);
        k += 2;
    }
    v
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeasureEstimate<T> {
    pub value: T,
    pub std_err: T,
    pub samples: usize,
    pub seed: u64,
}

/// Stratified estimate of `|B(center, r) ∩ Ω|`.
pub fn measure_ball_intersection<T: Real>(
    dom: &Domain<T>,
    center: Point<T>,
    r: T,
    spec: &QuadratureSpec<T>,
) -> Result<MeasureEstimate<T>> {
    if !(r > T::zero()) {
        return Err(Error::Domain(format!("radius must be positive, got {r}")));
    }
    let region = dom.local_bbox(&Rect::around(center, r));
    if region.is_empty() {
        return Ok(MeasureEstimate { value: T::zero(), std_err: T::zero(), samples: 0, seed: spec.seed });
    }
    let mut rng = sampling::stream(spec.seed, streams::MEASURE);
    let grid = Stratified::new(&region, spec.n_measure, 4, &mut rng);
    let values: Vec<T> = grid
        .points
        .iter()
        .map(|p| {
            if crate::real::dist(p, &center) < r && dom.contains(p) {
                T::one()
            } else {
                T::zero()
            }
        })
        .collect();
    let (value, std_err) = grid.estimate(&values);
    Ok(MeasureEstimate { value, std_err, samples: values.len(), seed: spec.seed })
}

/// `|B(x, r) ∩ Ω| / r²`.
pub fn local_density<T: Real>(dom: &Domain<T>, x: Point<T>, r: T, spec: &QuadratureSpec<T>) -> Result<T> {
    if !dom.contains(&x) {
        return Err(Error::Domain(format!("point ({}, {}) is not in {dom}", x[0], x[1])));
    }
    Ok(measure_ball_intersection(dom, x, r, spec)?.value / (r * r))
}

#[derive(Debug, Clone, PartialEq)]
pub struct Regularity<T> {
    /// Smallest sampled density; an upper bound for the true constant.
    pub theta: T,
    pub witness_x: Point<T>,
    pub witness_r: T,
    pub r_min: T,
    pub centers: usize,
}

/// Sampled measure-density constant with the default lower radius `diam/512`.
pub fn regularity_constant<T: Real>(
    dom: &Domain<T>,
    n_centers: usize,
    n_radii: usize,
    spec: &QuadratureSpec<T>,
) -> Result<Regularity<T>> {
    regularity_constant_with(dom, n_centers, n_radii, dom.diam() / T::lit(512.0), spec)
}

/// Minimum of `local_density` over probe points plus `n_centers` random
/// centers, and `n_radii` log-spaced radii in `[r_min, 2 diam)`.
pub fn regularity_constant_with<T: Real>(
    dom: &Domain<T>,
    n_centers: usize,
    n_radii: usize,
    r_min: T,
    spec: &QuadratureSpec<T>,
) -> Result<Regularity<T>> {
    if n_centers == 0 || n_radii == 0 {
        return Err(Error::Validation("need at least one center and one radius".into()));
    }
    let r_max = T::lit(2.0) * dom.diam() * (T::one() - T::lit(1e-9));
    if !(r_min > T::zero() && r_min < r_max) {
        return Err(Error::Validation(format!("r_min must lie in (0, 2 diam), got {r_min}")));
    }
    let radii = log_grid(r_min, r_max, n_radii);
    let mut centers = dom.probe_points();
    centers.extend(sample_points(dom, n_centers, spec, streams::CENTERS)?);

    let mut best = Regularity {
        theta: T::infinity(),
        witness_x: centers[0],
        witness_r: radii[0],
        r_min,
        centers: centers.len(),
    };
    for x in &centers {
        for &r in &radii {
            let d = local_density(dom, *x, r, spec)?;
            if d < best.theta {
                best.theta = d;
                best.witness_x = *x;
                best.witness_r = r;
            }
        }
    }
    Ok(best)
}

/// `n` log-spaced values from `lo` to `hi` inclusive.
pub(crate) fn log_grid<T: Real>(lo: T, hi: T, n: usize) -> Vec<T> {
    if n == 1 {
        return vec![hi];
    }
    let step = (hi / lo).ln() / T::from_usize_lossy(n - 1);
    (0..n).map(|i| lo * (step * T::from_usize_lossy(i)).exp()).collect()
}

/// Rejection sample of `n` points of `Ω` from its bounding box.
pub fn sample_points<T: Real>(
    dom: &Domain<T>,
    n: usize,
    spec: &QuadratureSpec<T>,
    stream: u64,
) -> Result<Vec<Point<T>>> {
    let mut rng = sampling::stream(spec.seed, stream);
    let bbox = dom.bbox();
    let fill = dom
        .exact_area()
        .map(|a| (a / bbox.area()).as_f64())
        .unwrap_or(0.01)
        .max(1e-6);
    let max_tries = ((n as f64 / fill) as usize + 16) * spec.oversample * 4;
    let mut out = Vec::with_capacity(n);
    let mut tries = 0;
    while out.len() < n {
        if tries >= max_tries {
            return Err(Error::Internal(format!(
                "rejection sampling found {} of {n} points in {dom}; raise the oversampling factor",
                out.len()
            )));
        }
        tries += 1;
        let u: T = sampling::uniform(&mut rng);
        let v: T = sampling::uniform(&mut rng);
        let p = [bbox.lo[0] + u * bbox.width(), bbox.lo[1] + v * bbox.height()];
        if dom.contains(&p) {
            out.push(p);
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq)]
pub struct DyadicRadii<T> {
    /// `b_0 = 1 > b_1 > … > b_J`.
    pub b: Vec<T>,
    /// `|B(z, b_j r) ∩ Ω|` on the same frozen sample.
    pub measure: Vec<T>,
}

/// Radii with `|B(z, b_j r) ∩ Ω| = 2^{-j} |B(z, r) ∩ Ω|`.
///
/// The measure map is evaluated on one polar-stratified sample of `B(z, r)`,
/// so it is a step function of the radius and exactly monotone. The
/// bisection on it reduces to an order statistic of the in-domain sample
/// radii, which is what is computed.
pub fn dyadic_radii<T: Real>(
    dom: &Domain<T>,
    z: Point<T>,
    r: T,
    j_max: usize,
    spec: &QuadratureSpec<T>,
) -> Result<DyadicRadii<T>> {
    if !dom.contains(&z) {
        return Err(Error::Domain(format!("point ({}, {}) is not in {dom}", z[0], z[1])));
    }
    if !(r > T::zero()) {
        return Err(Error::Domain(format!("radius must be positive, got {r}")));
    }
    let n_ang = 64usize;
    let n_rad = (spec.n_measure / n_ang).max(16);
    let mut rng = sampling::stream(spec.seed, streams::DYADIC);
    let mut radii: Vec<T> = Vec::with_capacity(n_rad * n_ang);
    for i in 0..n_rad {
        for k in 0..n_ang {
            let u: T = sampling::uniform(&mut rng);
            let v: T = sampling::uniform(&mut rng);
            // uniform in area: ρ = r √(cell-stratified u)
            let su = (T::from_usize_lossy(i) + u) / T::from_usize_lossy(n_rad);
            let a = T::TAU() * (T::from_usize_lossy(k) + v) / T::from_usize_lossy(n_ang);
            let rho = r * su.sqrt();
            let p = [z[0] + rho * a.cos(), z[1] + rho * a.sin()];
            if dom.contains(&p) {
                radii.push(rho);
            }
        }
    }
    let total = radii.len();
    let cell = T::PI() * r * r / T::from_usize_lossy(n_rad * n_ang);
    if total >> j_max == 0 {
        return Err(Error::Internal(format!(
            "only {total} sample points in B(z, r) ∩ Ω, too few for {j_max} halvings; increase samples"
        )));
    }
    radii.sort_by(|a, b| a.partial_cmp(b).expect("finite radii"));

    let mut b = vec![T::one()];
    let mut measure = vec![T::from_usize_lossy(total) * cell];
    for j in 1..=j_max {
        let keep = (total as f64 / 2f64.powi(j as i32)).round().max(1.0) as usize;
        // smallest radius enclosing `keep` sample points, nudged past the last
        // one: the midpoint to the next point keeps the count exact
        let lo = radii[keep - 1];
        let hi = radii.get(keep).copied().unwrap_or(r);
        let bj = (lo + hi) * T::lit(0.5) / r;
        if bj >= *b.last().expect("b_0") {
            return Err(Error::Internal("dyadic radii not strictly decreasing; increase samples".into()));
        }
        b.push(bj);
        measure.push(T::from_usize_lossy(keep) * cell);
    }
    Ok(DyadicRadii { b, measure })
}

/// `κ = (2ω₂/θ)^{1/2} + 2`.
pub fn annulus_kappa<T: Real>(theta: T) -> T {
    (T::lit(2.0) * unit_ball_volume::<T>(2) / theta).sqrt() + T::lit(2.0)
}

/// Whether sampling finds a point of `Ω` in `B(z, κs) ∖ B(z, s)`.
pub fn annulus_nonempty<T: Real>(
    dom: &Domain<T>,
    theta: T,
    z: Point<T>,
    s: T,
    spec: &QuadratureSpec<T>,
) -> Result<bool> {
    if !(theta > T::zero()) {
        return Err(Error::Domain(format!("theta must be positive, got {theta}")));
    }
    let kappa = annulus_kappa(theta);
    if !(s > T::zero() && s < T::lit(2.0) / kappa * dom.diam()) {
        return Err(Error::Domain(format!("need 0 < s < (2/κ) diam = {}", T::lit(2.0) / kappa * dom.diam())));
    }
    let mut rng = sampling::stream(spec.seed, streams::ANNULUS);
    let (s2, k2) = (s * s, kappa * kappa * s * s);
    for _ in 0..spec.n_measure * spec.oversample {
        let u: T = sampling::uniform(&mut rng);
        let v: T = sampling::uniform(&mut rng);
        let rho = (s2 + u * (k2 - s2)).sqrt();
        let a = T::TAU() * v;
        if dom.contains(&[z[0] + rho * a.cos(), z[1] + rho * a.sin()]) {
            return Ok(true);
        }
    }
    Ok(false)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn spec() -> QuadratureSpec<f64> {
        QuadratureSpec::default()
    }

    #[test]
    fn ball_volumes() {
        assert!((unit_ball_volume::<f64>(2) - PI).abs() < 1e-15);
        assert!((unit_ball_volume::<f64>(3) - 4.0 * PI / 3.0).abs() < 1e-14);
        assert_eq!(unit_ball_volume::<f64>(1), 2.0);
    }

    #[test]
    fn ball_measures() {
        let d = Domain::unit_ball();
        for (c, r, exact) in [
            ([0.0, 0.0], 2.0, PI),
            ([0.0, 0.0], 0.5, PI / 4.0),
            ([1.0, 0.0], 1.0, 2.0 * PI / 3.0 - 3f64.sqrt() / 2.0),
        ] {
            let m = measure_ball_intersection(&d, c, r, &spec()).unwrap();
            assert!((m.value - exact).abs() <= 4.0 * m.std_err + 1e-12, "{m:?} vs {exact}");
        }
    }

    #[test]
    fn densities() {
        let d = Domain::unit_ball();
        let v = local_density(&d, [0.0, 0.0], 1.0, &spec()).unwrap();
        assert!((v - PI).abs() < 0.01);
        let v = local_density(&d, [1.0, 0.0], 4.0, &spec()).unwrap();
        assert!((v - PI / 16.0).abs() < 0.002);
        assert!(local_density(&d, [2.0, 0.0], 1.0, &spec()).is_err());
        let c = Domain::cusp(2.0).unwrap();
        let v = local_density(&c, [0.01, 0.0], 0.01, &spec()).unwrap();
        assert!((0.021..=0.054).contains(&v), "{v}");
    }

    #[test]
    fn dyadic_radii_on_ball() {
        let d = Domain::unit_ball();
        let out = dyadic_radii(&d, [0.0, 0.0], 0.5, 3, &spec()).unwrap();
        for (j, b) in out.b.iter().enumerate() {
            let want = 0.5f64.powf(j as f64 / 2.0);
            assert!((b / want - 1.0).abs() < 0.01, "j={j} {b} vs {want}");
        }
        let zero = dyadic_radii(&d, [0.0, 0.0], 0.5, 0, &spec()).unwrap();
        assert_eq!(zero.b, vec![1.0]);
    }

    #[test]
    fn annulus_and_kappa() {
        let d = Domain::unit_ball();
        assert!(annulus_nonempty(&d, 0.19, [0.9, 0.0], 0.05, &spec()).unwrap());
        let k = annulus_kappa(0.19f64);
        assert!((k - ((2.0 * PI / 0.19).sqrt() + 2.0)).abs() < 1e-12);
        assert!(annulus_nonempty(&d, 0.19, [0.9, 0.0], 1.0, &spec()).is_err());
    }
}
