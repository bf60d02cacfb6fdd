//! Fixed test families. Changing any entry changes acceptance numbers, so
//! additions go at the end of the doubled family only.

use crate::geometry::{Domain, DomainKind};
use crate::norms::ScalarField;
use crate::{Point, Real};

#[derive(Debug, Clone, PartialEq)]
pub struct Member<T> {
    pub label: String,
    pub field: ScalarField<T>,
    /// Concentration scale, for families swept over a scale.
    pub scale: Option<T>,
}

impl<T: Real> Member<T> {
    pub fn new(field: ScalarField<T>) -> Self {
        Self { label: field.to_string(), field, scale: None }
    }

    pub fn scaled(field: ScalarField<T>, scale: T) -> Self {
        Self { label: field.to_string(), field, scale: Some(scale) }
    }
}

fn centre<T: Real>(dom: &Domain<T>) -> Point<T> {
    match dom.kind() {
        DomainKind::Ball { center, .. } => *center,
        _ => {
            let b = dom.bbox();
            [(b.lo[0] + b.hi[0]) * T::lit(0.5), (b.lo[1] + b.hi[1]) * T::lit(0.5)]
        }
    }
}

fn gauss<T: Real>(c: Point<T>, sigma: T) -> ScalarField<T> {
    ScalarField::gaussian(c, sigma).expect("positive width")
}

fn cut<T: Real>(c: Point<T>, r: T, t: T) -> ScalarField<T> {
    ScalarField::cutoff(c, r, t).expect("ordered radii")
}

/// Gaussians at 4 scales, both coordinates and cutoffs at 6 `(x, r, t)`
/// triples, placed relative to the domain centre `m` and half-diameter `h`.
/// The doubled family keeps these 12 and adds 12 more of the same kinds.
pub fn standard_family<T: Real>(dom: &Domain<T>, doubled: bool) -> Vec<Member<T>> {
    let m = centre(dom);
    let h = dom.diam() * T::lit(0.5);
    let at = |a: f64, b: f64| [m[0] + T::lit(a) * h, m[1] + T::lit(b) * h];
    let s = |k: f64| T::lit(k) * h;
    let mut fields = vec![
        gauss(m, s(0.1)),
        gauss(m, s(0.2)),
        gauss(m, s(0.4)),
        gauss(m, s(0.8)),
        ScalarField::coordinate(1).expect("axis"),
        ScalarField::coordinate(2).expect("axis"),
        cut(m, T::zero(), s(0.5)),
        cut(m, s(0.25), s(0.5)),
        cut(m, s(0.5), s(0.9)),
        cut(at(0.4, 0.0), s(0.1), s(0.3)),
        cut(at(0.0, -0.4), T::zero(), s(0.4)),
        cut(at(0.25, 0.25), s(0.2), s(0.6)),
    ];
    if doubled {
        let x1 = ScalarField::coordinate(1).expect("axis");
        let x2 = ScalarField::coordinate(2).expect("axis");
        let w = T::lit(std::f64::consts::FRAC_1_SQRT_2);
        fields.extend([
            gauss(m, s(0.14)),
            gauss(m, s(0.28)),
            gauss(m, s(0.57)),
            gauss(at(0.3, 0.0), s(0.3)),
            gauss(at(0.0, -0.3), s(0.5)),
            ScalarField::sum(vec![ScalarField::scale(w, x1.clone()), ScalarField::scale(w, x2.clone())])
                .expect("two terms"),
            ScalarField::sum(vec![x1, ScalarField::scale(T::lit(-0.5), x2)]).expect("two terms"),
            cut(m, s(0.1), s(0.3)),
            cut(m, s(0.4), s(0.7)),
            cut(at(-0.4, 0.2), s(0.1), s(0.35)),
            cut(at(0.2, -0.3), T::zero(), s(0.25)),
            cut(at(-0.2, -0.2), s(0.3), s(0.6)),
        ]);
    }
    fields.into_iter().map(Member::new).collect()
}

/// Cutoffs at `(ε, 0)` with `r = ε/2`, `t = ε`: concentrated at the tip of a
/// cusp as `ε` shrinks.
pub fn cusp_tip_family<T: Real>(eps: &[T]) -> Vec<Member<T>> {
    eps.iter()
        .map(|&e| Member::scaled(cut([e, T::zero()], e * T::lit(0.5), e), e))
        .collect()
}

/// Twenty cutoff triples on a domain: two centres, two outer radii below
/// `diam/2`, inner radii at five fractions of the outer one.
pub fn default_cutoff_sweep<T: Real>(dom: &Domain<T>) -> Vec<(Point<T>, T, T)> {
    let m = centre(dom);
    let h = dom.diam() * T::lit(0.5);
    let mut out = Vec::with_capacity(20);
    for off in [[0.0, 0.0], [0.6, 0.3]] {
        let x = [m[0] + T::lit(off[0]) * h, m[1] + T::lit(off[1]) * h];
        for tf in [0.8, 0.4] {
            let t = T::lit(tf) * h;
            for rf in [0.1, 0.3, 0.5, 0.7, 0.9] {
                out.push((x, T::lit(rf) * t, t));
            }
        }
    }
    out
}

/// Fields for the critical-exponent check around a ball `B(c, ρ)`.
pub fn critical_family<T: Real>(c: Point<T>, rho: T) -> Vec<Member<T>> {
    let x1 = ScalarField::coordinate(1).expect("axis");
    let x2 = ScalarField::coordinate(2).expect("axis");
    vec![
        ScalarField::constant(T::one()),
        x1.clone(),
        x2.clone(),
        gauss(c, rho * T::lit(0.5)),
        gauss([c[0] - rho, c[1] + rho * T::lit(0.5)], rho * T::lit(0.75)),
        cut(c, rho * T::lit(0.5), rho * T::lit(1.5)),
        ScalarField::sum(vec![x1, x2]).expect("two terms"),
    ]
    .into_iter()
    .map(Member::new)
    .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn family_sizes() {
        let d = Domain::<f64>::unit_ball();
        assert_eq!(standard_family(&d, false).len(), 12);
        let big = standard_family(&d, true);
        assert_eq!(big.len(), 24);
        assert_eq!(&big[..12], &standard_family(&d, false)[..]);
        assert_eq!(cusp_tip_family(&[0.125, 0.0625]).len(), 2);
    }

    #[test]
    fn sweep_respects_radius_order() {
        let d = Domain::<f64>::unit_ball();
        let sw = default_cutoff_sweep(&d);
        assert_eq!(sw.len(), 20);
        for (x, r, t) in sw {
            assert!(d.contains(&x));
            assert!(0.0 < r && r < t && t < d.diam() / 2.0);
        }
    }
}
