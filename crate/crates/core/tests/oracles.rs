//! Estimators against independent deterministic quadratures and closed forms.

use std::f64::consts::PI;

use orlicz_besov::geometry::{measure_ball_intersection, Domain};
use orlicz_besov::norms::{besov_seminorm, gagliardo_seminorm, lebesgue_norm, orlicz_norm, ScalarField};
use orlicz_besov::quadrature::{integrate_pair_singular, QuadratureSpec};
use orlicz_besov::young::YoungFunction;

fn spec() -> QuadratureSpec<f64> {
    QuadratureSpec::default()
}

/// Distance from `x` to the boundary of the unit square along `(c, s)`.
fn exit_square(x: [f64; 2], c: f64, s: f64) -> f64 {
    let along = |p: f64, d: f64| {
        if d > 1e-300 {
            (1.0 - p) / d
        } else if d < -1e-300 {
            -p / d
        } else {
            f64::INFINITY
        }
    };
    along(x[0], c).min(along(x[1], s))
}

/// Distance from `x` to the unit circle along `(c, s)`.
fn exit_disk(x: [f64; 2], c: f64, s: f64) -> f64 {
    let b = x[0] * c + x[1] * s;
    -b + (b * b + 1.0 - x[0] * x[0] - x[1] * x[1]).sqrt()
}

/// `∫_Ω ∫_0^{2π} g(θ, L(x, θ)) dθ dx` by the midpoint rule in `x` and `θ`.
fn polar_oracle(unit_square: bool, nx: usize, na: usize, g: impl Fn(f64, f64) -> f64) -> f64 {
    let (lo, w) = if unit_square { (0.0, 1.0) } else { (-1.0, 2.0) };
    let h = w / nx as f64;
    let da = 2.0 * PI / na as f64;
    let mut total = 0.0;
    let mut cells = 0usize;
    for i in 0..nx {
        for j in 0..nx {
            let x = [lo + (i as f64 + 0.5) * h, lo + (j as f64 + 0.5) * h];
            if !unit_square && x[0] * x[0] + x[1] * x[1] >= 1.0 {
                continue;
            }
            cells += 1;
            for k in 0..na {
                let a = (k as f64 + 0.5) * da;
                let (c, s) = (a.cos(), a.sin());
                let l = if unit_square { exit_square(x, c, s) } else { exit_disk(x, c, s) };
                total += g(a, l) * da;
            }
        }
    }
    // normalise to the exact area so the boundary cells do not bias the disk
    let area = if unit_square { 1.0 } else { PI };
    total * area / cells as f64
}

#[test]
fn pair_integral_of_constant_kernel_is_area_squared() {
    // F = |x − y|^4 cancels the kernel: ∬ 1 = |Ω|²
    let d = Domain::unit_ball();
    let est = integrate_pair_singular(|x, y| ((x[0] - y[0]).powi(2) + (x[1] - y[1]).powi(2)).powi(2), &d, &spec())
        .unwrap();
    assert!((est.value / (PI * PI) - 1.0).abs() < 0.01, "{}", est.value);
    assert!(!est.diverged);
}

#[test]
fn weakly_singular_pair_integral_matches_polar_oracle() {
    // ∬_{[0,1]²} |x − y|^{-1/2} = ∫_x ∫_θ ∫_0^L t^{1/2} dt = ∫∫ (2/3) L^{3/2}
    let oracle = polar_oracle(true, 150, 256, |_, l| 2.0 / 3.0 * l.powf(1.5));
    let d = Domain::unit_square();
    let est = integrate_pair_singular(|x, y| ((x[0] - y[0]).hypot(x[1] - y[1])).powf(3.5), &d, &spec()).unwrap();
    assert!((est.value / oracle - 1.0).abs() < 0.02, "{} vs {oracle}", est.value);
}

#[test]
fn coordinate_seminorms_match_polar_oracle() {
    // u = x₁, φ = t^{3/2}, α = −1: the modular at λ is λ^{-3/2} ∬ |cos θ|^{3/2} L,
    // which is also the Gagliardo integral for s = 1/3, p = 3/2.
    let f = YoungFunction::power(1.5).unwrap();
    let u = ScalarField::coordinate(1).unwrap();
    for square in [true, false] {
        let m = polar_oracle(square, 150, 256, |a, l| a.cos().abs().powf(1.5) * l);
        let exact = m.powf(1.0 / 1.5);
        let d = if square { Domain::unit_square() } else { Domain::unit_ball() };
        let b = besov_seminorm(&u, &d, &f, -1.0, &spec(), 1e-6).unwrap();
        let g = gagliardo_seminorm(&u, &d, 1.0 / 3.0, 1.5, &spec()).unwrap();
        assert!((b / exact - 1.0).abs() < 0.02, "besov {b} vs {exact}");
        assert!((g / exact - 1.0).abs() < 0.02, "gagliardo {g} vs {exact}");
    }
}

#[test]
fn quadratic_seminorm_symmetry_on_square() {
    // φ = t², α = −1: ∬ (x₁−y₁)²/|x−y|² + ∬ (x₂−y₂)²/|x−y|² = |Ω|², equal by symmetry
    let f = YoungFunction::power(2.0).unwrap();
    let d = Domain::unit_square();
    let u = ScalarField::coordinate(1).unwrap();
    let s = besov_seminorm(&u, &d, &f, -1.0, &spec(), 1e-6).unwrap();
    assert!((s / 0.5f64.sqrt() - 1.0).abs() < 0.02, "{s}");
}

fn lens_area(d: f64, r: f64) -> f64 {
    // |B(c, r) ∩ B(0, 1)| with |c| = d
    if d + r <= 1.0 {
        return PI * r * r;
    }
    if d + 1.0 <= r {
        return PI;
    }
    let a1 = ((d * d + r * r - 1.0) / (2.0 * d * r)).acos();
    let a2 = ((d * d + 1.0 - r * r) / (2.0 * d)).acos();
    r * r * a1 + a2 - 0.5 * ((-d + r + 1.0) * (d + r - 1.0) * (d - r + 1.0) * (d + r + 1.0)).sqrt()
}

#[test]
fn ball_intersections_match_lens_formula() {
    let dom = Domain::unit_ball();
    for (d, r) in [(0.0, 0.5), (0.5, 0.7), (0.9, 0.3), (1.0, 0.25), (0.3, 1.5)] {
        let est = measure_ball_intersection(&dom, [d, 0.0], r, &spec()).unwrap();
        let exact = lens_area(d, r);
        assert!((est.value / exact - 1.0).abs() < 0.01, "d={d} r={r}: {} vs {exact}", est.value);
    }
}

#[test]
fn corner_of_square_holds_a_quarter_disk() {
    let dom = Domain::unit_square();
    let est = measure_ball_intersection(&dom, [0.0, 0.0], 0.4, &spec()).unwrap();
    assert!((est.value / (PI * 0.16 / 4.0) - 1.0).abs() < 0.01);
}

#[test]
fn lebesgue_and_orlicz_norms_of_coordinate() {
    // ‖x₁‖_{L²([0,1]²)} = 1/√3; ‖x₁‖_{L^φ} with φ = t² is the same number
    let d = Domain::unit_square();
    let u = ScalarField::coordinate(1).unwrap();
    let l2 = lebesgue_norm(&u, &d, 2.0, &spec()).unwrap();
    let o2 = orlicz_norm(&u, &d, &YoungFunction::power(2.0).unwrap(), &spec(), 1e-8).unwrap();
    let exact = 1.0 / 3f64.sqrt();
    assert!((l2 / exact - 1.0).abs() < 1e-3, "{l2}");
    assert!((o2 / exact - 1.0).abs() < 1e-3, "{o2}");
}

#[test]
fn gaussian_mass_on_large_ball() {
    // ‖g‖_{L¹} = 2πσ² when the ball holds essentially all the mass
    let d = Domain::ball([0.0, 0.0], 4.0).unwrap();
    let u = ScalarField::gaussian([0.5, -0.5], 0.2).unwrap();
    let l1 = lebesgue_norm(&u, &d, 1.0, &spec()).unwrap();
    assert!((l1 / (2.0 * PI * 0.04) - 1.0).abs() < 1e-3, "{l1}");
}
