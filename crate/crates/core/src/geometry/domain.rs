use std::fmt;
use std::str::FromStr;

use crate::error::{parse_err, Error, Result};
use crate::parse::{number, numbers, split_kind};
use crate::quadrature::sampling::Rect;
use crate::{Point, Real};

#[derive(Debug, Clone, PartialEq)]
pub enum DomainKind<T> {
    /// Closed disc.
    Ball { center: Point<T>, radius: T },
    /// Closed axis-aligned rectangle.
    Box { lo: Point<T>, hi: Point<T> },
    /// `{0 < x₁ < 1, |x₂| < x₁^γ}`, `γ > 1`: thin at the origin.
    Cusp { gamma: T },
    /// Simple polygon, even-odd rule.
    Polygon { vertices: Vec<Point<T>> },
}

/// Bounded planar region.
#[derive(Debug, Clone, PartialEq)]
pub struct Domain<T> {
    kind: DomainKind<T>,
    bbox: Rect<T>,
    diam: T,
}

impl<T: Real> Domain<T> {
    pub fn ball(center: Point<T>, radius: T) -> Result<Self> {
        if !(radius > T::zero()) || !radius.is_finite() {
            return Err(Error::Validation(format!("ball radius must be positive, got {radius}")));
        }
        Ok(Self {
            bbox: Rect::around(center, radius),
            diam: radius + radius,
            kind: DomainKind::Ball { center, radius },
        })
    }

    pub fn unit_ball() -> Self {
        Self::ball([T::zero(); 2], T::one()).expect("unit ball")
    }

    pub fn rect(lo: Point<T>, hi: Point<T>) -> Result<Self> {
        if !(hi[0] > lo[0] && hi[1] > lo[1]) {
            return Err(Error::Validation("box needs x0 < x1 and y0 < y1".into()));
        }
        let bbox = Rect::new(lo, hi);
        Ok(Self { diam: bbox.diagonal(), bbox, kind: DomainKind::Box { lo, hi } })
    }

    pub fn unit_square() -> Self {
        Self::rect([T::zero(); 2], [T::one(); 2]).expect("unit square")
    }

    pub fn cusp(gamma: T) -> Result<Self> {
        if !(gamma > T::one()) || !gamma.is_finite() {
            return Err(Error::Validation(format!("cusp exponent must exceed 1, got {gamma}")));
        }
        Ok(Self {
            bbox: Rect::new([T::zero(), -T::one()], [T::one(), T::one()]),
            // the two far corners (1, ±1)
            diam: T::lit(2.0),
            kind: DomainKind::Cusp { gamma },
        })
    }

    pub fn polygon(vertices: Vec<Point<T>>) -> Result<Self> {
        if vertices.len() < 3 {
            return Err(Error::Validation("polygon needs at least 3 vertices".into()));
        }
        if shoelace(&vertices).abs() <= T::epsilon() {
            return Err(Error::Validation("polygon has zero area".into()));
        }
        let mut bbox = Rect::new(vertices[0], vertices[0]);
        for v in &vertices {
            bbox = bbox.union(&Rect::new(*v, *v));
        }
        let mut diam = T::zero();
        for (i, a) in vertices.iter().enumerate() {
            for b in &vertices[i + 1..] {
                diam = diam.max(crate::real::dist(a, b));
            }
        }
        Ok(Self { bbox, diam, kind: DomainKind::Polygon { vertices } })
    }

    pub fn kind(&self) -> &DomainKind<T> {
        &self.kind
    }

    pub fn bbox(&self) -> Rect<T> {
        self.bbox
    }

    pub fn diam(&self) -> T {
        self.diam
    }

    pub fn contains(&self, p: &Point<T>) -> bool {
        match &self.kind {
            DomainKind::Ball { center, radius } => crate::real::dist(p, center) <= *radius,
            DomainKind::Box { .. } => self.bbox.contains(p),
            DomainKind::Cusp { gamma } => {
                p[0] > T::zero() && p[0] < T::one() && p[1].abs() < p[0].powf(*gamma)
            }
            DomainKind::Polygon { vertices } => self.bbox.contains(p) && even_odd(vertices, p),
        }
    }

    /// Closed-form `|Ω|`.
    pub fn exact_area(&self) -> Option<T> {
        Some(match &self.kind {
            DomainKind::Ball { radius, .. } => T::PI() * *radius * *radius,
            DomainKind::Box { .. } => self.bbox.area(),
            DomainKind::Cusp { gamma } => T::lit(2.0) / (*gamma + T::one()),
            DomainKind::Polygon { vertices } => shoelace(vertices).abs(),
        })
    }

    /// A box containing `Ω ∩ rect`, as tight as the shape allows cheaply.
    pub fn local_bbox(&self, rect: &Rect<T>) -> Rect<T> {
        let r = rect.intersect(&self.bbox);
        match &self.kind {
            DomainKind::Cusp { gamma } if !r.is_empty() => {
                let x_hi = r.hi[0].min(T::one());
                let b = x_hi.max(T::zero()).powf(*gamma);
                r.intersect(&Rect::new([T::zero(), -b], [T::one(), b]))
            }
            _ => r,
        }
    }

    /// Points of `Ω` where the local density is smallest for the shape:
    /// boundary points, corners and the cusp tip. They supplement random
    /// centers when estimating the regularity constant.
    pub fn probe_points(&self) -> Vec<Point<T>> {
        let nudge = T::lit(1e-9) * self.diam;
        let mut out = Vec::new();
        match &self.kind {
            DomainKind::Ball { center, radius } => {
                let r = *radius - nudge;
                for k in 0..8 {
                    let a = T::TAU() * T::from_usize_lossy(k) / T::lit(8.0);
                    out.push([center[0] + r * a.cos(), center[1] + r * a.sin()]);
                }
            }
            DomainKind::Box { lo, hi } => {
                for x in [lo[0] + nudge, hi[0] - nudge] {
                    for y in [lo[1] + nudge, hi[1] - nudge] {
                        out.push([x, y]);
                    }
                }
            }
            DomainKind::Cusp { .. } => {
                for k in 1..=12 {
                    out.push([T::lit(0.5f64.powi(k)), T::zero()]);
                }
            }
            DomainKind::Polygon { vertices } => {
                let m = T::from_usize_lossy(vertices.len());
                let c = vertices.iter().fold([T::zero(); 2], |a, v| [a[0] + v[0] / m, a[1] + v[1] / m]);
                for v in vertices {
                    let d = crate::real::dist(v, &c).max(T::epsilon());
                    let s = T::lit(1e-6) * self.diam / d;
                    out.push([v[0] + (c[0] - v[0]) * s, v[1] + (c[1] - v[1]) * s]);
                }
            }
        }
        out.retain(|p| self.contains(p));
        out
    }
}

fn shoelace<T: Real>(v: &[Point<T>]) -> T {
    let mut s = T::zero();
    for i in 0..v.len() {
        let a = v[i];
        let b = v[(i + 1) % v.len()];
        s = s + a[0] * b[1] - b[0] * a[1];
    }
    s * T::lit(0.5)
}

fn even_odd<T: Real>(v: &[Point<T>], p: &Point<T>) -> bool {
    let mut inside = false;
    let mut j = v.len() - 1;
    for i in 0..v.len() {
        let (a, b) = (v[i], v[j]);
        if (a[1] > p[1]) != (b[1] > p[1]) {
            let x = a[0] + (p[1] - a[1]) * (b[0] - a[0]) / (b[1] - a[1]);
            if p[0] < x {
                inside = !inside;
            }
        }
        j = i;
    }
    inside
}

impl<T: Real> fmt::Display for Domain<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            DomainKind::Ball { center, radius } => write!(f, "ball:{},{},{}", center[0], center[1], radius),
            DomainKind::Box { lo, hi } => write!(f, "box:{},{},{},{}", lo[0], lo[1], hi[0], hi[1]),
            DomainKind::Cusp { gamma } => write!(f, "cusp:{gamma}"),
            DomainKind::Polygon { vertices } => {
                write!(f, "poly:")?;
                for (i, v) in vertices.iter().enumerate() {
                    if i > 0 {
                        write!(f, ";")?;
                    }
                    write!(f, "{},{}", v[0], v[1])?;
                }
                Ok(())
            }
        }
    }
}

impl<T: Real> FromStr for Domain<T> {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (kind, args) = split_kind(s)?;
        match kind {
            "ball" => {
                let v = numbers(args, 3)?;
                Self::ball([v[0], v[1]], v[2])
            }
            "box" => {
                let v = numbers(args, 4)?;
                Self::rect([v[0], v[1]], [v[2], v[3]])
            }
            "cusp" => Self::cusp(number(args)?),
            "poly" => {
                let vertices = args
                    .split(';')
                    .map(|pair| numbers::<T>(pair, 2).map(|v| [v[0], v[1]]))
                    .collect::<Result<Vec<_>>>()?;
                Self::polygon(vertices)
            }
            other => Err(parse_err(other, "unknown domain kind (ball, box, cusp, poly)")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_round_trip() {
        for s in ["ball:0,0,1", "box:0,0,1,1", "cusp:2", "poly:0,0;2,0;1,1.5", "ball:0.25,-1,0.125"] {
            let d: Domain<f64> = s.parse().unwrap();
            assert_eq!(d.to_string(), s);
            let again: Domain<f64> = d.to_string().parse().unwrap();
            assert_eq!(again, d);
        }
    }

    #[test]
    fn parse_errors_name_the_token() {
        match "disk:0,0,1".parse::<Domain<f64>>() {
            Err(Error::Parse { token, .. }) => assert_eq!(token, "disk"),
            other => panic!("{other:?}"),
        }
        assert!("ball:0,0".parse::<Domain<f64>>().is_err());
        assert!("ball:0,0,-1".parse::<Domain<f64>>().is_err());
        assert!("cusp:1".parse::<Domain<f64>>().is_err());
    }

    #[test]
    fn areas_and_diameters() {
        let c = Domain::<f64>::cusp(2.0).unwrap();
        assert!((c.exact_area().unwrap() - 2.0 / 3.0).abs() < 1e-15);
        assert_eq!(c.diam(), 2.0);
        let b = Domain::<f64>::unit_square();
        assert!((b.diam() - 2f64.sqrt()).abs() < 1e-15);
        let p: Domain<f64> = "poly:0,0;1,0;1,1;0,1".parse().unwrap();
        assert!((p.exact_area().unwrap() - 1.0).abs() < 1e-15);
        assert!(p.contains(&[0.5, 0.5]) && !p.contains(&[1.5, 0.5]));
    }

    #[test]
    fn cusp_membership_and_local_box() {
        let c = Domain::<f64>::cusp(2.0).unwrap();
        assert!(c.contains(&[0.5, 0.2]));
        assert!(!c.contains(&[0.5, 0.3]));
        assert!(!c.contains(&[0.0, 0.0]));
        let r = c.local_bbox(&Rect::around([0.01, 0.0], 0.01));
        assert!((r.hi[1] - 0.0004).abs() < 1e-15);
        assert_eq!(r.lo[0], 0.0);
    }

    #[test]
    fn probes_are_inside() {
        for s in ["ball:0,0,1", "box:0,0,1,1", "cusp:2", "poly:0,0;2,0;1,1.5"] {
            let d: Domain<f64> = s.parse().unwrap();
            let p = d.probe_points();
            assert!(!p.is_empty(), "{s}");
            assert!(p.iter().all(|x| d.contains(x)), "{s}");
        }
    }
}
