//! Seeded random streams and stratified box sampling.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::{Point, Real};

/// Independent generator for one purpose within a run: the seed selects the
/// run, the stream selects the purpose.
pub(crate) fn stream(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Stream ids; kept apart so that changing one sample count never shifts
/// another estimate's random numbers.
pub(crate) mod streams {
    pub const MEASURE: u64 = 1;
    pub const DOMAIN_POINTS: u64 = 2;
    pub const PAIR_OUTER: u64 = 3;
    pub const PAIR_RADIAL: u64 = 4;
    pub const CENTERS: u64 = 5;
    pub const DYADIC: u64 = 6;
    pub const ANNULUS: u64 = 7;
    pub const TRIALS: u64 = 8;
    pub const SPLIT: u64 = 9;
}

#[inline]
pub(crate) fn uniform<T: Real>(rng: &mut ChaCha8Rng) -> T {
    T::lit(rng.random::<f64>())
}

/// Uniform direction on the unit circle from a normalized Gaussian pair.
pub(crate) fn direction<T: Real>(rng: &mut ChaCha8Rng) -> Point<T> {
    loop {
        let a: f64 = rng.sample(StandardNormal);
        let b: f64 = rng.sample(StandardNormal);
        let r = a.hypot(b);
        if r > 1e-300 {
            return [T::lit(a / r), T::lit(b / r)];
        }
    }
}

/// Axis-aligned box `[lo, hi]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Rect<T> {
    pub lo: Point<T>,
    pub hi: Point<T>,
}

impl<T: Real> Rect<T> {
    pub fn new(lo: Point<T>, hi: Point<T>) -> Self {
        Self { lo, hi }
    }

    pub fn around(c: Point<T>, r: T) -> Self {
        Self { lo: [c[0] - r, c[1] - r], hi: [c[0] + r, c[1] + r] }
    }

    pub fn width(&self) -> T {
        self.hi[0] - self.lo[0]
    }

    pub fn height(&self) -> T {
        self.hi[1] - self.lo[1]
    }

    pub fn area(&self) -> T {
        if self.is_empty() {
            T::zero()
        } else {
            self.width() * self.height()
        }
    }

    pub fn is_empty(&self) -> bool {
        !(self.hi[0] > self.lo[0] && self.hi[1] > self.lo[1])
    }

    pub fn contains(&self, p: &Point<T>) -> bool {
        p[0] >= self.lo[0] && p[0] <= self.hi[0] && p[1] >= self.lo[1] && p[1] <= self.hi[1]
    }

    pub fn intersect(&self, other: &Rect<T>) -> Rect<T> {
        Rect {
            lo: [self.lo[0].max(other.lo[0]), self.lo[1].max(other.lo[1])],
            hi: [self.hi[0].min(other.hi[0]), self.hi[1].min(other.hi[1])],
        }
    }

    pub fn union(&self, other: &Rect<T>) -> Rect<T> {
        Rect {
            lo: [self.lo[0].min(other.lo[0]), self.lo[1].min(other.lo[1])],
            hi: [self.hi[0].max(other.hi[0]), self.hi[1].max(other.hi[1])],
        }
    }

    pub fn diagonal(&self) -> T {
        self.width().hypot(self.height())
    }
}

/// Points drawn `per_cell` at a time in each cell of a regular grid over a
/// box; points are stored cell by cell.
#[derive(Debug, Clone)]
pub(crate) struct Stratified<T> {
    pub points: Vec<Point<T>>,
    pub per_cell: usize,
    pub cell_area: T,
}

impl<T: Real> Stratified<T> {
    /// About `n` points over `rect`, never fewer than `per_cell`.
    pub fn new(rect: &Rect<T>, n: usize, per_cell: usize, rng: &mut ChaCha8Rng) -> Self {
        let per_cell = per_cell.max(1);
        let cells = (n / per_cell).max(1);
        let (w, h) = (rect.width().as_f64().max(0.0), rect.height().as_f64().max(0.0));
        let aspect = if h > 0.0 && w > 0.0 { w / h } else { 1.0 };
        let gx = ((cells as f64 * aspect).sqrt().round() as usize).clamp(1, cells);
        let gy = (cells / gx).max(1);
        let dx = rect.width() / T::from_usize_lossy(gx);
        let dy = rect.height() / T::from_usize_lossy(gy);
        let mut points = Vec::with_capacity(gx * gy * per_cell);
        for j in 0..gy {
            for i in 0..gx {
                let x0 = rect.lo[0] + dx * T::from_usize_lossy(i);
                let y0 = rect.lo[1] + dy * T::from_usize_lossy(j);
                for _ in 0..per_cell {
                    let u: T = uniform(rng);
                    let v: T = uniform(rng);
                    points.push([x0 + dx * u, y0 + dy * v]);
                }
            }
        }
        Self { points, per_cell, cell_area: dx * dy }
    }

    /// Stratified estimate of `∫ f` over the box, with its standard error.
    /// `values` holds `f` at each point in storage order.
    pub fn estimate(&self, values: &[T]) -> (T, T) {
        debug_assert_eq!(values.len(), self.points.len());
        let k = T::from_usize_lossy(self.per_cell);
        let mut total = T::zero();
        let mut var = T::zero();
        for cell in values.chunks(self.per_cell) {
            let mean = cell.iter().copied().sum::<T>() / k;
            total = total + mean;
            if self.per_cell > 1 {
                let ss: T = cell.iter().map(|&v| (v - mean) * (v - mean)).sum();
                var = var + ss / (k - T::one()) / k;
            }
        }
        (total * self.cell_area, var.sqrt() * self.cell_area)
    }
}
