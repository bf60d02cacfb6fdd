//! Modulars and norms of scalar fields: the Orlicz-Besov seminorm, the
//! Gagliardo seminorm, Orlicz and Lebesgue norms, mean, median and the
//! dyadic level-set profile.

mod field;

pub use field::{ScalarField, Support, GAUSSIAN_SUPPORT_SIGMAS};

use crate::error::{Error, Result};
use crate::geometry::Domain;
use crate::quadrature::sampling::{self, streams, Stratified};
use crate::quadrature::{PairEstimate, PairSet, QuadratureSpec};
use crate::young::YoungFunction;
use crate::Real;

/// Seminorms below `FLOOR · range · diam^{−α}` are reported as zero.
pub const SEMINORM_FLOOR: f64 = 1e-9;

/// Weighted point sample of a field over `Ω`. Fields with a bounded support
/// are only sampled there; the rest of `Ω` enters as `zero_mass`.
#[derive(Debug, Clone)]
pub struct FieldSample<T> {
    pub values: Vec<T>,
    pub weights: Vec<T>,
    /// Measure of the part of `Ω` where the field is known to vanish.
    pub zero_mass: T,
    /// `|Ω|`.
    pub area: T,
}

impl<T: Real> FieldSample<T> {
    pub fn new(u: &ScalarField<T>, dom: &Domain<T>, spec: &QuadratureSpec<T>) -> Self {
        let whole = dom.bbox();
        let region = match u.support() {
            Support::Within(r) => dom.local_bbox(&r),
            Support::Empty => dom.local_bbox(&r_empty(&whole)),
            Support::Unbounded => dom.local_bbox(&whole),
        };
        let mut rng = sampling::stream(spec.seed, streams::DOMAIN_POINTS);
        let (mut values, mut weights) = (Vec::new(), Vec::new());
        if !region.is_empty() {
            let grid = Stratified::new(&region, spec.n_measure, 4, &mut rng);
            let w = grid.cell_area / T::from_usize_lossy(grid.per_cell);
            for p in &grid.points {
                if dom.contains(p) {
                    values.push(u.eval(p));
                    weights.push(w);
                }
            }
        }
        let sampled: T = weights.iter().copied().sum();
        let area = match dom.exact_area() {
            Some(a) => a,
            None => {
                let grid = Stratified::new(&whole, spec.n_measure, 4, &mut rng);
                let inside = grid.points.iter().filter(|p| dom.contains(p)).count();
                grid.cell_area * T::from_usize_lossy(inside) / T::from_usize_lossy(grid.per_cell)
            }
        };
        let covers_all = region == dom.local_bbox(&whole);
        if covers_all && sampled > T::zero() {
            // the sample covers Ω: normalize the weights to the exact area
            let k = area / sampled;
            weights.iter_mut().for_each(|w| *w = *w * k);
            return Self { values, weights, zero_mass: T::zero(), area };
        }
        let zero_mass = (area - sampled).max(T::zero());
        Self { values, weights, zero_mass, area }
    }

    /// `∫_Ω g(u) dx` for `g(0) = 0`.
    pub fn integrate(&self, g: impl Fn(T) -> T) -> T {
        self.values.iter().zip(&self.weights).map(|(&v, &w)| w * g(v)).sum()
    }

    pub fn max_abs(&self) -> T {
        self.values.iter().fold(T::zero(), |m, v| m.max(v.abs()))
    }
}

fn r_empty<T: Real>(r: &crate::quadrature::sampling::Rect<T>) -> crate::quadrature::sampling::Rect<T> {
    crate::quadrature::sampling::Rect::new(r.lo, r.lo)
}

/// Smallest `λ` with `modular(λ) ≤ 1` for a non-increasing modular,
/// by bisection in `ln λ`. Returns zero when even `floor` satisfies it.
pub fn luxemburg<T: Real>(modular: impl Fn(T) -> T, hint: T, floor: T, rel_tol: T) -> Result<T> {
    let mut hi = if hint > T::zero() && hint.is_finite() { hint } else { T::one() };
    let mut lo;
    if modular(hi) > T::one() {
        lo = hi;
        let mut steps = 0;
        while modular(hi) > T::one() {
            lo = hi;
            hi = hi * T::lit(4.0);
            steps += 1;
            if steps > 600 || !hi.is_finite() {
                return Err(Error::NotInSpace("modular exceeds 1 for every tested lambda".into()));
            }
        }
    } else {
        lo = hi;
        while modular(lo) <= T::one() {
            hi = lo;
            lo = lo * T::lit(0.25);
            if lo < floor {
                if modular(floor) <= T::one() {
                    return Ok(T::zero());
                }
                lo = floor;
                break;
            }
        }
    }
    // modular(lo) > 1 ≥ modular(hi)
    let tol = rel_tol.max(T::epsilon() * T::lit(8.0)) * T::lit(1e-2);
    for _ in 0..400 {
        if hi / lo - T::one() <= tol {
            break;
        }
        let mid = (lo.ln() + (hi.ln() - lo.ln()) * T::lit(0.5)).exp();
        if mid <= lo || mid >= hi {
            break;
        }
        if modular(mid) > T::one() {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(hi)
}

/// Frozen pair sample with the field differences `|u(x) − u(y)|` attached.
#[derive(Debug, Clone)]
pub struct FrozenPairs<T> {
    pub set: PairSet<T>,
    pub diffs: Vec<T>,
    pub range: T,
    diam: T,
}

impl<T: Real> FrozenPairs<T> {
    pub fn new(u: &ScalarField<T>, dom: &Domain<T>, spec: &QuadratureSpec<T>) -> Result<Self> {
        let set = match u.variation_support() {
            Support::Empty => PairSet::build_in(dom, Some(r_empty(&dom.bbox())), spec)?,
            Support::Within(r) => PairSet::build_in(dom, Some(r), spec)?,
            Support::Unbounded => PairSet::build(dom, spec)?,
        };
        let mut lo = T::infinity();
        let mut hi = T::neg_infinity();
        let diffs = set
            .x
            .iter()
            .zip(&set.y)
            .map(|(x, y)| {
                let (a, b) = (u.eval(x), u.eval(y));
                lo = lo.min(a.min(b));
                hi = hi.max(a.max(b));
                (a - b).abs()
            })
            .collect();
        let range = if hi >= lo { hi - lo } else { T::zero() };
        Ok(Self { set, diffs, range, diam: dom.diam() })
    }

    /// `∬ φ(|u(x) − u(y)| / (λ |x − y|^α)) |x − y|^{-4}` on the frozen pairs.
    pub fn besov_modular(&self, f: &YoungFunction<T>, alpha: T, lambda: T) -> T {
        self.set.sum(&self.besov_values(f, alpha, lambda))
    }

    fn besov_values(&self, f: &YoungFunction<T>, alpha: T, lambda: T) -> Vec<T> {
        self.diffs
            .iter()
            .zip(&self.set.t)
            .map(|(&d, &t)| if d == T::zero() { T::zero() } else { f.value(d / (lambda * t.powf(alpha))) })
            .collect()
    }

    pub fn besov_estimate(&self, f: &YoungFunction<T>, alpha: T, lambda: T) -> PairEstimate<T> {
        self.set.estimate(&self.besov_values(f, alpha, lambda))
    }

    /// Luxemburg seminorm on the frozen pairs.
    pub fn besov_seminorm(&self, f: &YoungFunction<T>, alpha: T, rel_tol: T) -> Result<T> {
        if self.diffs.iter().all(|&d| d == T::zero()) {
            return Ok(T::zero());
        }
        let scale = self.range * self.diam.powf(-alpha);
        let floor = T::lit(SEMINORM_FLOOR) * scale;
        let lam = luxemburg(|l| self.besov_modular(f, alpha, l), scale, floor, rel_tol)?;
        if lam > T::zero() && self.besov_estimate(f, alpha, lam).diverged {
            return Err(Error::NotInSpace(format!(
                "the {f} modular does not decay near the diagonal; the seminorm is infinite"
            )));
        }
        Ok(lam)
    }

    /// Gagliardo seminorm `(∬ |Δu|^p |x − y|^{−2−sp})^{1/p}` on the frozen pairs.
    pub fn gagliardo_seminorm(&self, s: T, p: T) -> Result<T> {
        let n = T::lit(2.0);
        let values: Vec<T> =
            self.diffs.iter().zip(&self.set.t).map(|(&d, &t)| d.powf(p) * t.powf(n - s * p)).collect();
        let est = self.set.estimate(&values);
        if est.diverged {
            return Err(Error::NotInSpace("Gagliardo integral does not decay near the diagonal".into()));
        }
        Ok(est.value.powf(T::one() / p))
    }
}

/// Besov modular of `u` at `λ` on a fresh frozen sample.
pub fn besov_modular<T: Real>(
    u: &ScalarField<T>,
    dom: &Domain<T>,
    f: &YoungFunction<T>,
    alpha: T,
    lambda: T,
    spec: &QuadratureSpec<T>,
) -> Result<PairEstimate<T>> {
    if !(lambda > T::zero()) {
        return Err(Error::Domain(format!("lambda must be positive, got {lambda}")));
    }
    Ok(FrozenPairs::new(u, dom, spec)?.besov_estimate(f, alpha, lambda))
}

/// `‖u‖_{Ḃ^{α,φ}(Ω)}`.
pub fn besov_seminorm<T: Real>(
    u: &ScalarField<T>,
    dom: &Domain<T>,
    f: &YoungFunction<T>,
    alpha: T,
    spec: &QuadratureSpec<T>,
    rel_tol: T,
) -> Result<T> {
    let mut spec = spec.clone();
    let mut last = None;
    for _ in 0..=REFINEMENTS {
        match FrozenPairs::new(u, dom, &spec)?.besov_seminorm(f, alpha, rel_tol) {
            Err(Error::NotInSpace(msg)) => {
                // a domain thinner than the smallest sampled offset also
                // gives flat near-diagonal decades; divergence must survive
                // a lower radial floor
                last = Some(msg);
                spec.t_min_frac = spec.t_min_frac * T::lit(REFINE_FACTOR);
            }
            other => return other,
        }
    }
    Err(Error::NotInSpace(last.unwrap_or_default()))
}

/// Times the radial floor is lowered before divergence is reported.
pub const REFINEMENTS: usize = 2;
/// Factor applied to `t_min_frac` per refinement.
pub const REFINE_FACTOR: f64 = 1.0 / 4096.0;

/// Gagliardo seminorm with `s ∈ (0, 1)`, `p ≥ 1`.
pub fn gagliardo_seminorm<T: Real>(
    u: &ScalarField<T>,
    dom: &Domain<T>,
    s: T,
    p: T,
    spec: &QuadratureSpec<T>,
) -> Result<T> {
    if !(s > T::zero() && s < T::one()) {
        return Err(Error::Domain(format!("smoothness must lie in (0, 1), got {s}")));
    }
    if !(p >= T::one()) {
        return Err(Error::Domain(format!("exponent must be at least 1, got {p}")));
    }
    FrozenPairs::new(u, dom, spec)?.gagliardo_seminorm(s, p)
}

/// Luxemburg norm `‖u‖_{L^φ(Ω)}`.
pub fn orlicz_norm<T: Real>(
    u: &ScalarField<T>,
    dom: &Domain<T>,
    f: &YoungFunction<T>,
    spec: &QuadratureSpec<T>,
    rel_tol: T,
) -> Result<T> {
    orlicz_norm_of(&FieldSample::new(u, dom, spec), f, rel_tol)
}

pub fn orlicz_norm_of<T: Real>(sample: &FieldSample<T>, f: &YoungFunction<T>, rel_tol: T) -> Result<T> {
    let m = sample.max_abs();
    if m == T::zero() {
        return Ok(T::zero());
    }
    let floor = m * T::lit(SEMINORM_FLOOR);
    luxemburg(|l| sample.integrate(|v| f.value(v.abs() / l)), m, floor, rel_tol)
}

/// `(∫_Ω |u|^q)^{1/q}`.
pub fn lebesgue_norm<T: Real>(u: &ScalarField<T>, dom: &Domain<T>, q: T, spec: &QuadratureSpec<T>) -> Result<T> {
    if !(q >= T::one()) {
        return Err(Error::Domain(format!("Lebesgue exponent must be at least 1, got {q}")));
    }
    Ok(lebesgue_norm_of(&FieldSample::new(u, dom, spec), q, T::zero()))
}

/// `(∫_Ω |u − c|^q)^{1/q}` on a sample.
pub fn lebesgue_norm_of<T: Real>(sample: &FieldSample<T>, q: T, c: T) -> T {
    let body = sample.integrate(|v| (v - c).abs().powf(q));
    (body + sample.zero_mass * c.abs().powf(q)).powf(T::one() / q)
}

pub fn mean<T: Real>(u: &ScalarField<T>, dom: &Domain<T>, spec: &QuadratureSpec<T>) -> T {
    mean_of(&FieldSample::new(u, dom, spec))
}

pub fn mean_of<T: Real>(sample: &FieldSample<T>) -> T {
    sample.integrate(|v| v) / sample.area
}

pub fn median<T: Real>(u: &ScalarField<T>, dom: &Domain<T>, spec: &QuadratureSpec<T>) -> T {
    median_of(&FieldSample::new(u, dom, spec))
}

/// `inf{c : |{u > c}| ≤ |Ω|/2}` for the sample measure.
pub fn median_of<T: Real>(sample: &FieldSample<T>) -> T {
    let mut pts: Vec<(T, T)> = sample.values.iter().copied().zip(sample.weights.iter().copied()).collect();
    if sample.zero_mass > T::zero() {
        pts.push((T::zero(), sample.zero_mass));
    }
    if pts.is_empty() {
        return T::zero();
    }
    pts.sort_by(|a, b| a.0.partial_cmp(&b.0).expect("finite field values"));
    let total: T = pts.iter().map(|p| p.1).sum();
    let half = total * T::lit(0.5);
    // walk down from the top: mass strictly above pts[i].0
    let mut above = T::zero();
    let mut i = pts.len();
    let mut answer = pts[pts.len() - 1].0;
    while i > 0 {
        let v = pts[i - 1].0;
        let mut j = i;
        let mut tie = T::zero();
        while j > 0 && pts[j - 1].0 == v {
            tie = tie + pts[j - 1].1;
            j -= 1;
        }
        if above <= half {
            answer = v;
        } else {
            break;
        }
        above = above + tie;
        i = j;
    }
    answer
}

/// Measures of `{u > 2^k}` and of the dyadic layers between them.
#[derive(Debug, Clone, PartialEq)]
pub struct LevelSetProfile<T> {
    pub k_lo: i32,
    pub k_hi: i32,
    /// `a[i] = |{u > 2^{k_lo + i}}|`
    pub a: Vec<T>,
    /// `d[i] = a[i] − a[i + 1]`, the last layer using `a_{k_hi+1}`.
    pub d: Vec<T>,
}

impl<T: Real> LevelSetProfile<T> {
    pub fn a_k(&self, k: i32) -> T {
        if k < self.k_lo || k > self.k_hi {
            return T::zero();
        }
        self.a[(k - self.k_lo) as usize]
    }

    /// `Σ_k a_k 2^{kq}`.
    pub fn weighted_sum(&self, q: T) -> T {
        (self.k_lo..=self.k_hi)
            .zip(&self.a)
            .map(|(k, &a)| a * T::lit(2.0).powf(T::from_i32(k).expect("level index") * q))
            .sum()
    }
}

pub fn level_sets<T: Real>(
    u: &ScalarField<T>,
    dom: &Domain<T>,
    k_lo: i32,
    k_hi: i32,
    spec: &QuadratureSpec<T>,
) -> Result<LevelSetProfile<T>> {
    level_sets_of(&FieldSample::new(u, dom, spec), k_lo, k_hi)
}

pub fn level_sets_of<T: Real>(sample: &FieldSample<T>, k_lo: i32, k_hi: i32) -> Result<LevelSetProfile<T>> {
    if k_lo > k_hi {
        return Err(Error::Validation(format!("empty level range {k_lo}..={k_hi}")));
    }
    if sample.values.iter().any(|&v| v < T::zero()) {
        return Err(Error::Domain("level sets need a nonnegative field".into()));
    }
    let mut pts: Vec<(T, T)> = sample.values.iter().copied().zip(sample.weights.iter().copied()).collect();
    pts.sort_by(|a, b| a.0.partial_cmp(&b.0).expect("finite field values"));
    // suffix sums: mass of points with index ≥ i
    let mut suffix = vec![T::zero(); pts.len() + 1];
    for i in (0..pts.len()).rev() {
        suffix[i] = suffix[i + 1] + pts[i].1;
    }
    let above = |level: T| -> T {
        let idx = pts.partition_point(|p| p.0 <= level);
        suffix[idx]
    };
    let two = T::lit(2.0);
    let a: Vec<T> = (k_lo..=k_hi + 1).map(|k| above(two.powi(k))).collect();
    let d: Vec<T> = a.windows(2).map(|w| w[0] - w[1]).collect();
    Ok(LevelSetProfile { k_lo, k_hi, a: a[..a.len() - 1].to_vec(), d })
}

/// Level range covering every positive sample value: `2^{k_lo}` lies below
/// the smallest positive value and `2^{k_hi}` at or above the largest.
pub fn level_range<T: Real>(sample: &FieldSample<T>) -> Option<(i32, i32)> {
    let pos = sample.values.iter().copied().filter(|&v| v > T::zero());
    let (mut lo, mut hi) = (T::infinity(), T::zero());
    for v in pos {
        lo = lo.min(v);
        hi = hi.max(v);
    }
    if hi == T::zero() {
        return None;
    }
    let k_lo = lo.log2().floor().to_i32()? - 1;
    let k_hi = hi.log2().ceil().to_i32()?;
    Some((k_lo, k_hi))
}
