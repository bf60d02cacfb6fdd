use std::fmt;
use std::str::FromStr;

use crate::error::{parse_err, Error, Result};
use crate::parse::{number, numbers, split_kind, split_top, strip_parens, weighted};
use crate::quadrature::sampling::Rect;
use crate::{Point, Real};

/// Gaussians are treated as zero beyond this many standard deviations
/// (`e^{-40.5} ≈ 2.6·10⁻¹⁸`).
pub const GAUSSIAN_SUPPORT_SIGMAS: f64 = 9.0;

/// Real-valued field on the plane.
#[derive(Debug, Clone, PartialEq)]
pub enum ScalarField<T> {
    Constant(T),
    /// `x_i`, 1-based.
    Coordinate(usize),
    /// `exp(−|x − c|²/(2σ²))`
    Gaussian { center: Point<T>, sigma: T },
    /// 1 on `B(c, r)`, linear ramp `(t − |x − c|)/(t − r)`, 0 beyond `t`.
    Cutoff { center: Point<T>, r: T, t: T },
    Scale(T, Box<ScalarField<T>>),
    Sum(Vec<ScalarField<T>>),
    /// `u(x / r)`
    Dilate(T, Box<ScalarField<T>>),
    /// `min(u, cap)`
    Truncate(T, Box<ScalarField<T>>),
}

/// Where a field is not identically zero (or not constant).
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Support<T> {
    Empty,
    Within(Rect<T>),
    Unbounded,
}

impl<T: Real> Support<T> {
    fn union(self, other: Self) -> Self {
        match (self, other) {
            (Support::Empty, s) | (s, Support::Empty) => s,
            (Support::Within(a), Support::Within(b)) => Support::Within(a.union(&b)),
            _ => Support::Unbounded,
        }
    }

    fn dilate(self, r: T) -> Self {
        match self {
            Support::Within(a) => {
                let (x0, x1) = (a.lo[0] * r, a.hi[0] * r);
                let (y0, y1) = (a.lo[1] * r, a.hi[1] * r);
                Support::Within(Rect::new([x0.min(x1), y0.min(y1)], [x0.max(x1), y0.max(y1)]))
            }
            s => s,
        }
    }

    pub fn rect(&self) -> Option<Rect<T>> {
        match self {
            Support::Within(r) => Some(*r),
            _ => None,
        }
    }
}

impl<T: Real> ScalarField<T> {
    pub fn constant(c: T) -> Self {
        Self::Constant(c)
    }

    pub fn coordinate(i: usize) -> Result<Self> {
        if !(1..=2).contains(&i) {
            return Err(Error::Validation(format!("coordinate index must be 1 or 2, got {i}")));
        }
        Ok(Self::Coordinate(i))
    }

    pub fn gaussian(center: Point<T>, sigma: T) -> Result<Self> {
        if !(sigma > T::zero()) {
            return Err(Error::Validation(format!("gaussian width must be positive, got {sigma}")));
        }
        Ok(Self::Gaussian { center, sigma })
    }

    /// Cut-off field `u_{x,r,t}`.
    pub fn cutoff(center: Point<T>, r: T, t: T) -> Result<Self> {
        if !(r >= T::zero() && r < t) {
            return Err(Error::Validation(format!("cutoff needs 0 <= r < t, got r = {r}, t = {t}")));
        }
        Ok(Self::Cutoff { center, r, t })
    }

    pub fn scale(c: T, u: ScalarField<T>) -> Self {
        Self::Scale(c, Box::new(u))
    }

    pub fn sum(parts: Vec<ScalarField<T>>) -> Result<Self> {
        if parts.is_empty() {
            return Err(Error::Validation("empty sum of fields".into()));
        }
        Ok(Self::Sum(parts))
    }

    /// `u(·/r)`: stretches the field by `r`.
    pub fn dilate(r: T, u: ScalarField<T>) -> Result<Self> {
        if !(r > T::zero()) {
            return Err(Error::Validation(format!("dilation factor must be positive, got {r}")));
        }
        Ok(Self::Dilate(r, Box::new(u)))
    }

    pub fn truncate(cap: T, u: ScalarField<T>) -> Self {
        Self::Truncate(cap, Box::new(u))
    }

    pub fn eval(&self, x: &Point<T>) -> T {
        match self {
            Self::Constant(c) => *c,
            Self::Coordinate(i) => x[*i - 1],
            Self::Gaussian { center, sigma } => {
                let d = crate::real::dist(x, center) / *sigma;
                (-(d * d) * T::lit(0.5)).exp()
            }
            Self::Cutoff { center, r, t } => {
                let d = crate::real::dist(x, center);
                if d <= *r {
                    T::one()
                } else if d >= *t {
                    T::zero()
                } else {
                    (*t - d) / (*t - *r)
                }
            }
            Self::Scale(c, u) => *c * u.eval(x),
            Self::Sum(parts) => parts.iter().map(|u| u.eval(x)).sum(),
            Self::Dilate(r, u) => u.eval(&[x[0] / *r, x[1] / *r]),
            Self::Truncate(cap, u) => u.eval(x).min(*cap),
        }
    }

    /// Region outside which the field vanishes.
    pub fn support(&self) -> Support<T> {
        match self {
            Self::Constant(c) if *c == T::zero() => Support::Empty,
            Self::Constant(_) | Self::Coordinate(_) => Support::Unbounded,
            Self::Gaussian { center, sigma } => {
                Support::Within(Rect::around(*center, *sigma * T::lit(GAUSSIAN_SUPPORT_SIGMAS)))
            }
            Self::Cutoff { center, t, .. } => Support::Within(Rect::around(*center, *t)),
            Self::Scale(c, _) if *c == T::zero() => Support::Empty,
            Self::Scale(_, u) => u.support(),
            Self::Sum(parts) => parts.iter().fold(Support::Empty, |s, u| s.union(u.support())),
            Self::Dilate(r, u) => u.support().dilate(*r),
            Self::Truncate(cap, u) if *cap >= T::zero() => u.support(),
            Self::Truncate(..) => Support::Unbounded,
        }
    }

    /// Region outside which the field is constant; differences `u(x) − u(y)`
    /// vanish when both points lie outside it.
    pub fn variation_support(&self) -> Support<T> {
        match self {
            Self::Constant(_) => Support::Empty,
            Self::Coordinate(_) => Support::Unbounded,
            Self::Gaussian { .. } | Self::Cutoff { .. } => self.support(),
            Self::Scale(c, _) if *c == T::zero() => Support::Empty,
            Self::Scale(_, u) => u.variation_support(),
            Self::Sum(parts) => parts.iter().fold(Support::Empty, |s, u| s.union(u.variation_support())),
            Self::Dilate(r, u) => u.variation_support().dilate(*r),
            Self::Truncate(_, u) => match u.variation_support() {
                // the constant outside may sit above the cap; still constant
                s @ (Support::Empty | Support::Within(_)) => s,
                Support::Unbounded => Support::Unbounded,
            },
        }
    }
}

impl<T: Real> fmt::Display for ScalarField<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn nested<T: Real>(f: &mut fmt::Formatter<'_>, u: &ScalarField<T>) -> fmt::Result {
            match u {
                ScalarField::Sum(_) | ScalarField::Scale(..) | ScalarField::Dilate(..) | ScalarField::Truncate(..) => {
                    write!(f, "({u})")
                }
                _ => write!(f, "{u}"),
            }
        }
        match self {
            Self::Constant(c) => write!(f, "const:{c}"),
            Self::Coordinate(i) => write!(f, "coord:{i}"),
            Self::Gaussian { center, sigma } => write!(f, "gauss:{},{},{}", center[0], center[1], sigma),
            Self::Cutoff { center, r, t } => write!(f, "cutoff:{},{},{},{}", center[0], center[1], r, t),
            Self::Scale(c, u) => {
                write!(f, "scale:{c}*")?;
                nested(f, u)
            }
            Self::Dilate(r, u) => {
                write!(f, "dilate:{r}*")?;
                nested(f, u)
            }
            Self::Truncate(cap, u) => {
                write!(f, "min:{cap}*")?;
                nested(f, u)
            }
            Self::Sum(parts) => {
                write!(f, "sum:")?;
                for (i, u) in parts.iter().enumerate() {
                    if i > 0 {
                        write!(f, "+")?;
                    }
                    nested(f, u)?;
                }
                Ok(())
            }
        }
    }
}

impl<T: Real> FromStr for ScalarField<T> {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = strip_parens(s);
        let (kind, args) = split_kind(s)?;
        match kind {
            "const" => Ok(Self::constant(number(args)?)),
            "coord" => {
                let i: usize = args.parse().map_err(|_| parse_err(args, "coordinate index must be 1 or 2"))?;
                Self::coordinate(i)
            }
            "gauss" => {
                let v = numbers(args, 3)?;
                Self::gaussian([v[0], v[1]], v[2])
            }
            "cutoff" => {
                let v = numbers(args, 4)?;
                Self::cutoff([v[0], v[1]], v[2], v[3])
            }
            "scale" => {
                let (c, rest) = weighted::<T>(args)?;
                Ok(Self::scale(c, rest.parse()?))
            }
            "dilate" => {
                let (r, rest) = weighted::<T>(args)?;
                Self::dilate(r, rest.parse()?)
            }
            "min" => {
                let (cap, rest) = weighted::<T>(args)?;
                Ok(Self::truncate(cap, rest.parse()?))
            }
            "sum" => {
                let parts = split_top(args, '+')
                    .into_iter()
                    .map(str::parse)
                    .collect::<Result<Vec<ScalarField<T>>>>()?;
                Self::sum(parts)
            }
            other => Err(parse_err(other, "unknown field kind (const, coord, gauss, cutoff, sum, scale, dilate, min)")),
        }
    }
}
