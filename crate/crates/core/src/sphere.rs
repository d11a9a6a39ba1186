//! Integration over the unit sphere of `C^n` with respect to the
//! normalized surface measure.
//!
//! Exact values come from the closed form for monomial integrals, computed
//! in arbitrary-precision rational arithmetic and converted to floating
//! point only at the boundary of this module. Everything non-exact is
//! either Monte Carlo (with a reported standard error) or a grid maximum
//! (a lower estimate of the true supremum).

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

use crate::config::Config;
use crate::error::{Error, Result};
use crate::multiindex::{factorial, MultiIndex};
use crate::points::{hermitian_dot, BallPoint, SpherePoint};
use crate::poly::ComplexPoly;

/// Rejects monomials whose factorials would be absurdly large. Arithmetic
/// below the cap is exact; inputs above it are refused rather than rounded.
const MAX_TOTAL_DEGREE: u32 = 20_000;

/// Separates the Monte Carlo stream from the grid stream for a given seed.
const GRID_STREAM_SALT: u64 = 0x9e37_79b9_7f4a_7c15;

/// How a numerical value was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    /// Closed-form rational arithmetic; no sampling error.
    Exact,
    /// Sample mean over random sphere points; `std_error` reported.
    MonteCarlo,
    /// Maximum over a deterministic point set; a lower estimate of the sup.
    Grid,
}

impl Method {
    pub fn as_str(self) -> &'static str {
        match self {
            Method::Exact => "Exact",
            Method::MonteCarlo => "MonteCarlo",
            Method::Grid => "Grid",
        }
    }
}

/// A numerical result together with its provenance.
#[derive(Debug, Clone, PartialEq)]
pub struct Estimate {
    pub value: f64,
    pub std_error: f64,
    pub samples: u64,
    pub method: Method,
}

impl Estimate {
    pub fn exact(value: f64) -> Self {
        Estimate { value, std_error: 0.0, samples: 0, method: Method::Exact }
    }

    pub fn monte_carlo(value: f64, std_error: f64, samples: u64) -> Self {
        Estimate { value, std_error, samples, method: Method::MonteCarlo }
    }

    pub fn grid(value: f64, points: u64) -> Self {
        Estimate { value, std_error: 0.0, samples: points, method: Method::Grid }
    }
}

/// Which norm of a polynomial to estimate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NormOrder {
    L1,
    L2,
    Linf,
}

/// Exact value of the sphere integral of `z^alpha * conj(z)^beta`.
///
/// The integral vanishes unless `alpha == beta`; on the diagonal it equals
/// `(n-1)! alpha! / (n-1+|alpha|)!`.
pub fn monomial_integral_exact(
    alpha: &MultiIndex,
    beta: &MultiIndex,
    n: usize,
) -> Result<BigRational> {
    if n == 0 {
        return Err(Error::InvalidArgument("dimension must be at least 1".into()));
    }
    if alpha.dim() != n || beta.dim() != n {
        return Err(Error::DimensionMismatch(format!(
            "multi-indices of dimension {} and {} against ambient dimension {n}",
            alpha.dim(),
            beta.dim()
        )));
    }
    if alpha != beta {
        return Ok(BigRational::zero());
    }
    let total = alpha.degree();
    if total > MAX_TOTAL_DEGREE {
        return Err(Error::InvalidArgument(format!(
            "total degree {total} exceeds the exact-arithmetic cap {MAX_TOTAL_DEGREE}"
        )));
    }
    let n_minus_1 = (n - 1) as u64;
    let numer = factorial(n_minus_1) * alpha.factorial();
    let denom = factorial(n_minus_1 + u64::from(total));
    Ok(BigRational::new(BigInt::from(numer), BigInt::from(denom)))
}

/// Floating-point boundary of [`monomial_integral_exact`].
pub fn monomial_integral(alpha: &MultiIndex, beta: &MultiIndex, n: usize) -> Result<f64> {
    Ok(rational_to_f64(&monomial_integral_exact(alpha, beta, n)?))
}

/// Converts a rational to `f64`, robust to numerator/denominator whose
/// magnitudes individually overflow the floating-point range.
pub(crate) fn rational_to_f64(r: &BigRational) -> f64 {
    if let Some(v) = r.to_f64() {
        if v.is_finite() {
            return v;
        }
    }
    // Shift both parts into range, preserving the quotient.
    let numer = r.numer();
    let denom = r.denom();
    let shift = numer.bits().max(denom.bits()).saturating_sub(128) as u64;
    let n = (numer >> shift).to_f64().unwrap_or(f64::NAN);
    let d = (denom >> shift).to_f64().unwrap_or(f64::NAN);
    n / d
}

/// The point with index `index` of the deterministic uniform stream
/// `(n, seed)`. Each index owns its own generator stream, so the sampler
/// is a pure function of `(n, seed, index)` regardless of scheduling.
pub fn sphere_point_at(n: usize, seed: u64, index: u64) -> SpherePoint {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    loop {
        let mut coords = Vec::with_capacity(n);
        let mut norm_sq = 0.0f64;
        for _ in 0..n {
            let re: f64 = rng.sample(StandardNormal);
            let im: f64 = rng.sample(StandardNormal);
            norm_sq += re * re + im * im;
            coords.push(Complex64::new(re, im));
        }
        // A 2n-dimensional Gaussian is essentially never this small; the
        // retry keeps the map total without bias.
        if norm_sq > 1e-250 {
            let inv = norm_sq.sqrt().recip();
            let coords = coords.into_iter().map(|z| z * inv).collect();
            return SpherePoint::new(coords).expect("normalized coordinates lie on the sphere");
        }
    }
}

/// `count` independent uniform points of the sphere of `C^n`.
pub fn sample_sphere(n: usize, count: u64, seed: u64) -> Result<Vec<SpherePoint>> {
    if n == 0 {
        return Err(Error::InvalidArgument("dimension must be at least 1".into()));
    }
    if count == 0 {
        return Err(Error::InvalidArgument("sample count must be at least 1".into()));
    }
    Ok((0..count)
        .into_par_iter()
        .map(|k| sphere_point_at(n, seed, k))
        .collect())
}

/// Fixed-shape pairwise summation. The reduction tree depends only on the
/// slice length, so results do not change with worker count.
pub fn pairwise_sum(xs: &[f64]) -> f64 {
    if xs.len() <= 64 {
        return xs.iter().sum();
    }
    let mid = xs.len() / 2;
    pairwise_sum(&xs[..mid]) + pairwise_sum(&xs[mid..])
}

/// Monte Carlo mean of `f` over the sphere, with standard error.
pub fn sphere_mean<F>(n: usize, samples: u64, seed: u64, f: F) -> Result<Estimate>
where
    F: Fn(&SpherePoint) -> f64 + Sync,
{
    if samples == 0 {
        return Err(Error::InvalidArgument("sample count must be at least 1".into()));
    }
    let values: Vec<f64> = (0..samples)
        .into_par_iter()
        .map(|k| f(&sphere_point_at(n, seed, k)))
        .collect();
    let mean = pairwise_sum(&values) / samples as f64;
    let std_error = if samples > 1 {
        let centered: Vec<f64> = values.iter().map(|v| (v - mean) * (v - mean)).collect();
        let var = pairwise_sum(&centered) / (samples as f64 - 1.0);
        (var / samples as f64).sqrt()
    } else {
        0.0
    };
    Ok(Estimate::monte_carlo(mean, std_error, samples))
}

/// Uniform grid of `count` roots of unity on the circle.
pub fn circle_grid(count: usize) -> Vec<SpherePoint> {
    (0..count)
        .map(|k| {
            let theta = 2.0 * std::f64::consts::PI * k as f64 / count as f64;
            SpherePoint::new(vec![Complex64::from_polar(1.0, theta)])
                .expect("unit modulus point")
        })
        .collect()
}

/// Deterministic evaluation set used for grid suprema and the sup-norm
/// minimizer.
///
/// On the circle this is the uniform root-of-unity grid (for which the
/// Bernstein-type inflation `1/cos(pi*d/N)` turns the grid maximum into a
/// certified upper bound). In dimension two and up no such certificate is
/// available from a finite set; the grid combines one uniform circle per
/// coordinate axis with a quasi-random bulk so that axis slices are still
/// resolved densely.
pub fn sphere_grid(n: usize, cfg: &Config) -> Vec<SpherePoint> {
    if n == 1 {
        return circle_grid(cfg.grid_points_per_dim);
    }
    let per_axis = (cfg.grid_points_per_dim / 4).max(64);
    let mut grid = Vec::with_capacity(n * per_axis + cfg.grid_points_per_dim);
    for axis in 0..n {
        for k in 0..per_axis {
            let theta = 2.0 * std::f64::consts::PI * k as f64 / per_axis as f64;
            let mut coords = vec![Complex64::ZERO; n];
            coords[axis] = Complex64::from_polar(1.0, theta);
            grid.push(SpherePoint::new(coords).expect("axis circle point"));
        }
    }
    let bulk = cfg.grid_points_per_dim as u64;
    let seed = cfg.seed ^ GRID_STREAM_SALT;
    grid.extend((0..bulk).map(|k| sphere_point_at(n, seed, k)));
    grid
}

/// Norm of a polynomial over the sphere.
///
/// `L2` is exact through the monomial integrals. `L1` is Monte Carlo with
/// its standard error. `Linf` is the maximum over [`sphere_grid`] and is a
/// lower estimate of the true supremum; callers that need an upper bound
/// must inflate it.
pub fn poly_sphere_norm(p: &ComplexPoly, order: NormOrder, cfg: &Config) -> Result<Estimate> {
    cfg.validate()?;
    if p.is_zero() {
        return Err(Error::InvalidArgument(
            "sphere norms of the zero polynomial are not computed".into(),
        ));
    }
    let n = p.dim();
    match order {
        NormOrder::L2 => {
            let mut sum_sq = 0.0;
            for (alpha, c) in p.terms() {
                sum_sq += c.norm_sqr() * monomial_integral(alpha, alpha, n)?;
            }
            Ok(Estimate::exact(sum_sq.sqrt()))
        }
        NormOrder::L1 => sphere_mean(n, cfg.mc_samples, cfg.seed, |zeta| {
            p.eval(zeta.coords()).expect("dimension checked").norm()
        }),
        NormOrder::Linf => {
            let grid = sphere_grid(n, cfg);
            let max = grid
                .par_iter()
                .map(|zeta| p.eval(zeta.coords()).expect("dimension checked").norm())
                .reduce(|| 0.0, f64::max);
            Ok(Estimate::grid(max, grid.len() as u64))
        }
    }
}

/// Exact squared Hardy-space norm of a polynomial.
pub fn poly_l2_norm_sq(p: &ComplexPoly) -> Result<f64> {
    let n = p.dim();
    let mut sum_sq = 0.0;
    for (alpha, c) in p.terms() {
        sum_sq += c.norm_sqr() * monomial_integral(alpha, alpha, n)?;
    }
    Ok(sum_sq)
}

/// The Poisson kernel `P(z, zeta) = (1 - |z|^2)^n / |1 - <z, zeta>|^{2n}`.
pub fn poisson_kernel(z: &BallPoint, zeta: &SpherePoint) -> Result<f64> {
    let n = z.dim();
    if zeta.dim() != n {
        return Err(Error::DimensionMismatch(format!(
            "ball point of dimension {n} against sphere point of dimension {}",
            zeta.dim()
        )));
    }
    let pairing = hermitian_dot(z.coords(), zeta.coords());
    let numer = (1.0 - z.norm_sqr()).powi(n as i32);
    let denom = (Complex64::ONE - pairing).norm_sqr().powi(n as i32);
    Ok(numer / denom)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn mi(e: &[u32]) -> MultiIndex {
        MultiIndex::new(e.to_vec())
    }

    #[test]
    fn constant_monomial_has_measure_one() {
        assert_eq!(monomial_integral(&mi(&[0, 0]), &mi(&[0, 0]), 2).unwrap(), 1.0);
    }

    #[test]
    fn off_diagonal_vanishes() {
        assert_eq!(monomial_integral(&mi(&[1, 0]), &mi(&[0, 1]), 2).unwrap(), 0.0);
    }

    #[test]
    fn known_diagonal_values() {
        assert_abs_diff_eq!(
            monomial_integral(&mi(&[1, 0]), &mi(&[1, 0]), 2).unwrap(),
            0.5,
            epsilon = 0.0
        );
        assert_abs_diff_eq!(
            monomial_integral(&mi(&[1, 1]), &mi(&[1, 1]), 2).unwrap(),
            1.0 / 6.0,
            epsilon = 1e-17
        );
        // one variable: every monomial has norm 1
        assert_eq!(monomial_integral(&mi(&[7]), &mi(&[7]), 1).unwrap(), 1.0);
    }

    #[test]
    fn rejects_dimension_mismatch_and_huge_degrees() {
        assert!(monomial_integral(&mi(&[1]), &mi(&[1, 0]), 2).is_err());
        assert!(monomial_integral(&mi(&[MAX_TOTAL_DEGREE + 1]), &mi(&[MAX_TOTAL_DEGREE + 1]), 1)
            .is_err());
    }

    #[test]
    fn large_degree_is_still_finite_and_positive() {
        let a = mi(&[300, 300]);
        let v = monomial_integral(&a, &a, 2).unwrap();
        assert!(v > 0.0 && v < 1.0, "got {v}");
    }

    #[test]
    fn rational_conversion_handles_huge_parts() {
        let num = BigInt::from(factorial(800));
        let den = BigInt::from(factorial(802));
        let r = BigRational::new(num, den);
        let v = rational_to_f64(&r);
        assert_abs_diff_eq!(v, 1.0 / (801.0 * 802.0), epsilon = 1e-20);
    }

    #[test]
    fn samples_lie_on_sphere_and_are_reproducible() {
        let a = sample_sphere(3, 500, 7).unwrap();
        let b = sample_sphere(3, 500, 7).unwrap();
        assert_eq!(a, b);
        for p in &a {
            let norm_sq: f64 = p.coords().iter().map(|z| z.norm_sqr()).sum();
            assert!((norm_sq - 1.0).abs() <= crate::points::SPHERE_NORM_TOL);
        }
        // A different seed produces a different set.
        let c = sample_sphere(3, 500, 8).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn sampling_is_independent_of_thread_count() {
        let pool1 = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
        let pool8 = rayon::ThreadPoolBuilder::new().num_threads(8).build().unwrap();
        let a = pool1.install(|| sample_sphere(2, 4096, 42).unwrap());
        let b = pool8.install(|| sample_sphere(2, 4096, 42).unwrap());
        assert_eq!(a, b);
        let ea = pool1.install(|| sphere_mean(2, 65_536, 42, |p| p.coords()[0].norm_sqr()).unwrap());
        let eb = pool8.install(|| sphere_mean(2, 65_536, 42, |p| p.coords()[0].norm_sqr()).unwrap());
        assert_eq!(ea, eb);
    }

    #[test]
    fn first_coordinate_mass_is_one_over_n() {
        // E |zeta_1|^2 = 1/n by symmetry.
        let est = sphere_mean(2, 200_000, 42, |p| p.coords()[0].norm_sqr()).unwrap();
        assert!((est.value - 0.5).abs() <= 3.0 * est.std_error, "{est:?}");
    }

    #[test]
    fn norm_of_constant_is_its_modulus() {
        let cfg = Config { mc_samples: 10_000, ..Config::default() };
        let p = ComplexPoly::constant(2, c(0.0, -2.5));
        for order in [NormOrder::L1, NormOrder::L2, NormOrder::Linf] {
            let est = poly_sphere_norm(&p, order, &cfg).unwrap();
            assert_abs_diff_eq!(est.value, 2.5, epsilon = 1e-12);
        }
    }

    #[test]
    fn l2_norm_of_scaled_coordinate() {
        let p = ComplexPoly::variable(2, 0).scale(c(2f64.sqrt(), 0.0));
        let est = poly_sphere_norm(&p, NormOrder::L2, &Config::default()).unwrap();
        assert_abs_diff_eq!(est.value, 1.0, epsilon = 1e-15);
        assert_eq!(est.method, Method::Exact);
        assert_eq!(est.std_error, 0.0);
    }

    #[test]
    fn l1_norm_of_scaled_coordinate() {
        // |zeta_1|^2 is uniform on [0,1] for n = 2, so E |sqrt(2) zeta_1|
        // equals sqrt(2) * 2/3.
        let cfg = Config { mc_samples: 400_000, ..Config::default() };
        let p = ComplexPoly::variable(2, 0).scale(c(2f64.sqrt(), 0.0));
        let est = poly_sphere_norm(&p, NormOrder::L1, &cfg).unwrap();
        let expected = 2.0 * 2f64.sqrt() / 3.0;
        assert!((est.value - expected).abs() <= 3.0 * est.std_error, "{est:?}");
    }

    #[test]
    fn zero_polynomial_is_rejected() {
        let cfg = Config::default();
        assert!(poly_sphere_norm(&ComplexPoly::zero(2), NormOrder::L2, &cfg).is_err());
    }

    #[test]
    fn poisson_at_origin_is_one() {
        let z = BallPoint::origin(3);
        for zeta in sample_sphere(3, 50, 1).unwrap() {
            assert_abs_diff_eq!(poisson_kernel(&z, &zeta).unwrap(), 1.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn poisson_disc_value() {
        let z = BallPoint::disc(c(0.5, 0.0)).unwrap();
        let zeta = SpherePoint::new(vec![c(1.0, 0.0)]).unwrap();
        assert_abs_diff_eq!(poisson_kernel(&z, &zeta).unwrap(), 3.0, epsilon = 1e-14);
    }

    #[test]
    fn poisson_positivity_floor() {
        let n = 2;
        let z = BallPoint::new(vec![c(0.4, 0.2), c(-0.1, 0.3)]).unwrap();
        let floor = (1.0 - z.norm_sqr().sqrt()).powi(n as i32) / 4f64.powi(n as i32);
        for zeta in sample_sphere(n, 200, 3).unwrap() {
            assert!(poisson_kernel(&z, &zeta).unwrap() >= floor);
        }
    }

    #[test]
    fn poisson_mean_is_one() {
        let z = BallPoint::new(vec![c(0.3, 0.1), c(0.2, -0.4)]).unwrap();
        let est = sphere_mean(2, 300_000, 42, |zeta| poisson_kernel(&z, zeta).unwrap()).unwrap();
        assert!((est.value - 1.0).abs() <= 3.0 * est.std_error, "{est:?}");
    }

    #[test]
    fn pairwise_sum_matches_naive_on_smooth_data() {
        let xs: Vec<f64> = (0..10_000).map(|i| (i as f64).sin()).collect();
        let naive: f64 = xs.iter().sum();
        assert_abs_diff_eq!(pairwise_sum(&xs), naive, epsilon = 1e-9);
    }

    #[test]
    fn grid_points_are_on_the_sphere() {
        let cfg = Config { grid_points_per_dim: 256, ..Config::default() };
        for p in sphere_grid(2, &cfg) {
            let norm_sq: f64 = p.coords().iter().map(|z| z.norm_sqr()).sum();
            assert!((norm_sq - 1.0).abs() <= crate::points::SPHERE_NORM_TOL);
        }
    }
}
