use super::sampling::{self, streams, Rect, Stratified};
use super::QuadratureSpec;
use crate::geometry::Domain;
use crate::{Point, Real};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DomainIntegral<T> {
    pub value: T,
    pub std_err: T,
    pub samples: usize,
}

/// Stratified Monte Carlo estimate of `∫_Ω f dx`.
pub fn integrate_domain<T, F>(f: F, dom: &Domain<T>, spec: &QuadratureSpec<T>) -> DomainIntegral<T>
where
    T: Real,
    F: Fn(&Point<T>) -> T,
{
    integrate_domain_over(f, dom, &dom.bbox(), spec)
}

/// Same, for an integrand that vanishes on `Ω` outside `rect`.
pub(crate) fn integrate_domain_over<T, F>(
    f: F,
    dom: &Domain<T>,
    rect: &Rect<T>,
    spec: &QuadratureSpec<T>,
) -> DomainIntegral<T>
where
    T: Real,
    F: Fn(&Point<T>) -> T,
{
    let region = dom.local_bbox(rect);
    if region.is_empty() {
        return DomainIntegral { value: T::zero(), std_err: T::zero(), samples: 0 };
    }
    let mut rng = sampling::stream(spec.seed, streams::DOMAIN_POINTS);
    let grid = Stratified::new(&region, spec.n_measure, 4, &mut rng);
    let values: Vec<T> = grid
        .points
        .iter()
        .map(|p| if dom.contains(p) { f(p) } else { T::zero() })
        .collect();
    let (value, std_err) = grid.estimate(&values);
    DomainIntegral { value, std_err, samples: values.len() }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn closed_forms() {
        let spec = QuadratureSpec::default();
        let ball = Domain::<f64>::unit_ball();
        let sq = Domain::<f64>::unit_square();
        type Case<'a> = (Box<dyn Fn(&Point<f64>) -> f64>, &'a Domain<f64>, f64);
        let cases: [Case; 3] = [
            (Box::new(|_| 1.0), &ball, PI),
            (Box::new(|p| p[0]), &sq, 0.5),
            (Box::new(|p| p[0] * p[0] + p[1] * p[1]), &ball, PI / 2.0),
        ];
        for (f, d, exact) in cases {
            let r = integrate_domain(f, d, &spec);
            assert!((r.value - exact).abs() <= 4.0 * r.std_err + 1e-12, "{r:?} vs {exact}");
            assert!(r.std_err < 0.01);
        }
    }
}
